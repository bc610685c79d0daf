//! Inference of a minimal DFA from a classified sample.
//!
//! The learner walks the prefix tree of the sample in breadth-first order
//! and merges two prefixes exactly when every common in-sample extension
//! carries the same label (the Myhill-Nerode relation restricted to the
//! sampled horizon). Prefixes are never materialized: a prefix is one of
//!
//!   * `Zero(b)` — an all-zero-tuple prefix with `b` symbols of budget left;
//!     its residual is the whole (zero-padding-closed) sample, truncated;
//!   * `Node(n, b)` — a prefix that has entered the minimal-word automaton
//!     of the sample at node `n`;
//!   * `Dead(b)` — a prefix with no accepting extension in the sample.
//!
//! Residual equality up to a horizon is decided by truncation-aware hashing
//! over the sample automaton, and the final hypothesis is checked exactly
//! against the sample before it is returned.

use std::collections::HashMap;

use super::adfa::SampleDfa;
use super::{ClassifiedSample, InferenceError};
use crate::automata::{Dfa, Symbol};

const H_EMPTY: u128 = 0x9e3779b97f4a7c15_f39cc0605cedc835;
const H_EPS: u128 = 0xc2b2ae3d27d4eb4f_165667b19e3779f9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Prefix {
    Zero(u16),
    Node(u32, u16),
    Dead(u16),
}

impl Prefix {
    fn budget(self) -> u16 {
        match self {
            Prefix::Zero(b) | Prefix::Node(_, b) | Prefix::Dead(b) => b,
        }
    }
}

struct Hasher<'a> {
    sample: &'a dyn SampleDfa,
    nsym: usize,
    memo: HashMap<(u8, u32, u16), u128>,
}

fn mix(acc: u128, v: u128) -> u128 {
    let x = acc ^ v.rotate_left(49);
    x.wrapping_mul(0x2545f4914f6cdd1d_369dea0f31a53f85 | 1) ^ (x >> 67)
}

impl<'a> Hasher<'a> {
    fn new(sample: &'a dyn SampleDfa, nsym: usize) -> Self {
        Hasher {
            sample,
            nsym,
            memo: HashMap::new(),
        }
    }

    /// Hash of the residual language of `p` truncated to its budget.
    /// Comparisons always put the same budget on both sides, so equal
    /// truncated sets recurse identically and hash equal, whatever nodes
    /// and budgets they are reached through: the recursion bottoms out at
    /// fixed constants for the empty set and for {ε}, and otherwise mixes
    /// the node's label with all child hashes one budget down.
    fn hash(&mut self, p: Prefix) -> u128 {
        let (key, is_final, node): ((u8, u32, u16), bool, Option<u32>) = match p {
            Prefix::Dead(_) => return H_EMPTY,
            Prefix::Zero(b) => {
                let root = self.sample.root();
                if self.sample.min_accept_depth(root) > b as usize {
                    return H_EMPTY;
                }
                if b == 0 {
                    return H_EPS;
                }
                ((1, 0, b), self.sample.is_final(root), None)
            }
            Prefix::Node(n, b) => {
                if self.sample.min_accept_depth(n) > b as usize {
                    return H_EMPTY;
                }
                if b == 0 {
                    return H_EPS;
                }
                ((0, n, b), self.sample.is_final(n), Some(n))
            }
        };
        if let Some(&h) = self.memo.get(&key) {
            return h;
        }
        let b = key.2;
        let mut acc = mix(0x0dfa_0dfa, is_final as u128 + 1);
        for sym in 0..self.nsym as Symbol {
            let child = match node {
                // An all-zero prefix: the zero tuple extends the padding,
                // anything else enters the minimal-word automaton.
                None if sym == 0 => self.hash(Prefix::Zero(b - 1)),
                None => match self.sample.child(self.sample.root(), sym) {
                    Some(c) => self.hash(Prefix::Node(c, b - 1)),
                    None => H_EMPTY,
                },
                Some(n) => match self.sample.child(n, sym) {
                    Some(c) => self.hash(Prefix::Node(c, b - 1)),
                    None => H_EMPTY,
                },
            };
            acc = mix(acc, child);
        }
        self.memo.insert(key, acc);
        acc
    }
}

/// Infer the minimal DFA consistent with the sample: quotient of the prefix
/// tree by label agreement on all common in-sample extensions, with
/// first-match tie-breaking in breadth-first order.
pub fn learn_dfa(sample: &ClassifiedSample) -> Result<Dfa, InferenceError> {
    let alphabet = sample.alphabet().clone();
    let nsym = alphabet.symbol_count();
    let backend = sample.backend();
    let mut hasher = Hasher::new(backend, nsym);

    let max_classes = 4096usize;
    let mut reps: Vec<Prefix> = vec![Prefix::Zero(sample.bound() as u16)];
    let mut transitions: Vec<Vec<u32>> = Vec::new();
    let mut head = 0;
    while head < reps.len() {
        let rep = reps[head];
        let mut row = Vec::with_capacity(nsym);
        if let Prefix::Dead(_) = rep {
            // A dead prefix stays dead; no sample depth is needed.
            row.resize(nsym, head as u32);
            transitions.push(row);
            head += 1;
            continue;
        }
        let budget = rep.budget();
        if budget == 0 {
            return Err(InferenceError::InsufficientSample {
                bound: sample.bound(),
            });
        }
        for sym in 0..nsym as Symbol {
            let child = match rep {
                Prefix::Zero(b) => {
                    if sym == 0 {
                        Prefix::Zero(b - 1)
                    } else {
                        match backend.child(backend.root(), sym) {
                            Some(c) => Prefix::Node(c, b - 1),
                            None => Prefix::Dead(b - 1),
                        }
                    }
                }
                Prefix::Node(n, b) => match backend.child(n, sym) {
                    Some(c) => Prefix::Node(c, b - 1),
                    None => Prefix::Dead(b - 1),
                },
                Prefix::Dead(_) => unreachable!(),
            };
            let mut found = None;
            for (i, &r) in reps.iter().enumerate() {
                let m = child.budget().min(r.budget());
                let hc = hasher.hash(truncated(child, m));
                let hr = hasher.hash(truncated(r, m));
                if hc == hr {
                    found = Some(i as u32);
                    break;
                }
            }
            let class = match found {
                Some(c) => c,
                None => {
                    reps.push(child);
                    if reps.len() > max_classes {
                        return Err(InferenceError::NoStabilization {
                            l_max: sample.bound(),
                        });
                    }
                    (reps.len() - 1) as u32
                }
            };
            row.push(class);
        }
        transitions.push(row);
        head += 1;
    }

    let mut hypothesis = Dfa::new(alphabet, reps.len());
    for (i, rep) in reps.iter().enumerate() {
        let accepting = match rep {
            Prefix::Zero(_) => backend.is_final(backend.root()),
            Prefix::Node(n, _) => backend.is_final(*n),
            Prefix::Dead(_) => false,
        };
        hypothesis.set_accepting(i as u32, accepting);
        for sym in 0..nsym {
            hypothesis.set_transition(i as u32, sym as Symbol, transitions[i][sym]);
        }
    }
    check_consistency(&hypothesis, sample)?;
    Ok(hypothesis.minimize())
}

fn truncated(p: Prefix, m: u16) -> Prefix {
    match p {
        Prefix::Zero(_) => Prefix::Zero(m),
        Prefix::Node(n, _) => Prefix::Node(n, m),
        Prefix::Dead(_) => Prefix::Dead(m),
    }
}

/// Exact check that the hypothesis classifies every word of length up to the
/// sample bound exactly like the sample: breadth-first product traversal of
/// the hypothesis against the sample structure. The first visit of a pair
/// happens at the largest remaining budget, which subsumes later visits.
fn check_consistency(hypothesis: &Dfa, sample: &ClassifiedSample) -> Result<(), InferenceError> {
    let backend = sample.backend();
    let nsym = sample.alphabet().symbol_count();
    // Shortest accepted word from each hypothesis state (usize::MAX if none).
    let n = hypothesis.n_states();
    let mut h_minacc = vec![usize::MAX; n];
    for s in 0..n as u32 {
        if hypothesis.is_accepting(s) {
            h_minacc[s as usize] = 0;
        }
    }
    loop {
        let mut changed = false;
        for s in 0..n as u32 {
            for sym in 0..nsym as Symbol {
                if let Some(t) = hypothesis.step(s, sym) {
                    let via = h_minacc[t as usize].saturating_add(1);
                    if via < h_minacc[s as usize] {
                        h_minacc[s as usize] = via;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }

    let mismatch = |_: &str| InferenceError::Inconsistent {
        bound: sample.bound(),
    };
    let mut seen: HashMap<(u32, Prefix), ()> = HashMap::new();
    let canon = |p: Prefix| match p {
        // Dead prefixes at any budget are interchangeable.
        Prefix::Dead(_) => Prefix::Dead(0),
        other => other,
    };
    let mut queue = vec![(0u32, Prefix::Zero(sample.bound() as u16))];
    seen.insert((0, Prefix::Zero(sample.bound() as u16)), ());
    let mut head = 0;
    while head < queue.len() {
        let (hs, p) = queue[head];
        head += 1;
        let (s_final, budget) = match p {
            Prefix::Zero(b) => (backend.is_final(backend.root()), b),
            Prefix::Node(n, b) => (backend.is_final(n), b),
            Prefix::Dead(b) => (false, b),
        };
        if hypothesis.is_accepting(hs) != s_final {
            return Err(mismatch("label"));
        }
        if budget == 0 {
            continue;
        }
        for sym in 0..nsym as Symbol {
            let child = match p {
                Prefix::Zero(b) => {
                    if sym == 0 {
                        Prefix::Zero(b - 1)
                    } else {
                        match backend.child(backend.root(), sym) {
                            Some(c) => Prefix::Node(c, b - 1),
                            None => Prefix::Dead(b - 1),
                        }
                    }
                }
                Prefix::Node(n, b) => match backend.child(n, sym) {
                    Some(c) => Prefix::Node(c, b - 1),
                    None => Prefix::Dead(b - 1),
                },
                Prefix::Dead(b) => Prefix::Dead(b - 1),
            };
            match (hypothesis.step(hs, sym), child) {
                (None, c) => {
                    // Hypothesis rejects everything below; the sample must too.
                    let empty = match c {
                        Prefix::Dead(_) => true,
                        Prefix::Zero(b) => {
                            backend.min_accept_depth(backend.root()) > b as usize
                        }
                        Prefix::Node(nn, b) => backend.min_accept_depth(nn) > b as usize,
                    };
                    if !empty {
                        return Err(mismatch("hypothesis dead, sample alive"));
                    }
                }
                (Some(ht), c) => {
                    let alive = match c {
                        Prefix::Dead(_) => false,
                        Prefix::Zero(b) => {
                            backend.min_accept_depth(backend.root()) <= b as usize
                        }
                        Prefix::Node(nn, b) => backend.min_accept_depth(nn) <= b as usize,
                    };
                    if !alive && h_minacc[ht as usize] <= (c.budget()) as usize {
                        return Err(mismatch("sample dead, hypothesis alive"));
                    }
                    if !alive {
                        continue;
                    }
                    let key = (ht, canon(c));
                    if seen.insert(key, ()).is_none() {
                        queue.push((ht, c));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Result of a stabilized guess.
#[derive(Debug, Clone)]
pub struct GuessResult {
    pub dfa: Dfa,
    /// Sample length at which the hypothesis first repeated.
    pub stabilized_at: usize,
}

/// Run the learner at growing sample lengths until two consecutive
/// hypotheses are isomorphic. An inconsistent hypothesis at some length is
/// not an error; it just cannot stabilize.
pub fn stabilize(
    oracle: &mut dyn super::RelationOracle,
    sys: &crate::numeration::NumerationSystem,
    l0: usize,
    l_max: usize,
) -> Result<GuessResult, InferenceError> {
    assert!(l0 >= 2, "stabilization needs a starting length of at least 2");
    let mut prev: Option<Dfa> = None;
    for l in l0..=l_max {
        let sample = super::enumerate_sample(oracle, sys, l)?;
        match learn_dfa(&sample) {
            Ok(h) => {
                if prev.as_ref() == Some(&h) {
                    return Ok(GuessResult {
                        dfa: h,
                        stabilized_at: l,
                    });
                }
                prev = Some(h);
            }
            Err(InferenceError::InsufficientSample { .. })
            | Err(InferenceError::Inconsistent { .. }) => prev = None,
            Err(e) => return Err(e),
        }
    }
    Err(InferenceError::NoStabilization { l_max })
}
