//! Sample containers for the learner.
//!
//! A classified sample is, conceptually, a labeling of every valid padded
//! word up to a length bound: a word is accepting iff its tracks decode to a
//! tuple the oracle accepts, and everything else (including words with a
//! forbidden factor on some track) is rejecting. Materializing that map is
//! hopeless for wide relations, so samples are stored as the minimal acyclic
//! automaton of their *minimal* accepting words (no leading all-zero tuple);
//! the zero-padding closure is reconstructed structurally by the learner.

use std::cell::RefCell;
use std::collections::HashMap;

use crate::automata::Symbol;

/// Automaton view of a sample's minimal accepting words. Residuals of two
/// nodes are compared by the learner through truncation-aware hashing, so
/// implementations only need exact structure, not minimality.
pub trait SampleDfa {
    fn root(&self) -> u32;
    fn is_final(&self, n: u32) -> bool;
    fn child(&self, n: u32, sym: Symbol) -> Option<u32>;
    /// Shortest word in the node's residual (`usize::MAX` when empty).
    fn min_accept_depth(&self, n: u32) -> usize;
}

#[derive(Debug, Clone)]
struct AdfaState {
    accepting: bool,
    edges: Vec<(Symbol, u32)>,
    min_accept: u32,
}

/// Minimal acyclic DFA of a finite word set, built incrementally from
/// lexicographically sorted input.
#[derive(Debug)]
pub struct FiniteAdfa {
    states: Vec<AdfaState>,
    root: u32,
    n_words: usize,
}

#[derive(Default)]
struct Registry {
    map: HashMap<(bool, Vec<(Symbol, u32)>), u32>,
}

struct TempState {
    accepting: bool,
    edges: Vec<(Symbol, u32)>,
}

pub struct AdfaBuilder {
    states: Vec<AdfaState>,
    registry: Registry,
    path: Vec<TempState>,
    prev: Vec<Symbol>,
    n_words: usize,
}

impl AdfaBuilder {
    pub fn new() -> Self {
        AdfaBuilder {
            states: Vec::new(),
            registry: Registry::default(),
            path: vec![TempState {
                accepting: false,
                edges: Vec::new(),
            }],
            prev: Vec::new(),
            n_words: 0,
        }
    }

    /// Insert the next word; input must arrive in lexicographic order
    /// (prefixes before extensions). Duplicates are ignored.
    pub fn insert(&mut self, word: &[Symbol]) {
        debug_assert!(
            self.prev.as_slice() <= word,
            "words must be inserted in sorted order"
        );
        if self.n_words > 0 && self.prev.as_slice() == word {
            return;
        }
        let common = self
            .prev
            .iter()
            .zip(word)
            .take_while(|(a, b)| a == b)
            .count();
        self.freeze_from(common + 1);
        for &sym in &word[common..] {
            debug_assert!(self
                .path
                .last()
                .unwrap()
                .edges
                .iter()
                .all(|&(s, _)| s < sym));
            self.path.push(TempState {
                accepting: false,
                edges: Vec::new(),
            });
            // The edge target is patched when the child is frozen.
            let depth = self.path.len() - 2;
            self.path[depth].edges.push((sym, u32::MAX));
        }
        self.path.last_mut().unwrap().accepting = true;
        self.prev = word.to_vec();
        self.n_words += 1;
    }

    /// Freeze path states at depth >= `keep`, deepest first.
    fn freeze_from(&mut self, keep: usize) {
        while self.path.len() > keep.max(1) {
            let temp = self.path.pop().unwrap();
            let id = self.replace_or_register(temp);
            self.path.last_mut().unwrap().edges.last_mut().unwrap().1 = id;
        }
    }

    fn replace_or_register(&mut self, temp: TempState) -> u32 {
        let key = (temp.accepting, temp.edges);
        if let Some(&id) = self.registry.map.get(&key) {
            return id;
        }
        let (accepting, edges) = key.clone();
        let min_accept = summarize(&self.states, accepting, &edges);
        let id = self.states.len() as u32;
        self.states.push(AdfaState {
            accepting,
            edges,
            min_accept,
        });
        self.registry.map.insert(key, id);
        id
    }

    pub fn finish(mut self) -> FiniteAdfa {
        self.freeze_from(1);
        let temp = self.path.pop().unwrap();
        let min_accept = summarize(&self.states, temp.accepting, &temp.edges);
        let root = self.states.len() as u32;
        self.states.push(AdfaState {
            accepting: temp.accepting,
            edges: temp.edges,
            min_accept,
        });
        FiniteAdfa {
            states: self.states,
            root,
            n_words: self.n_words,
        }
    }
}

fn summarize(states: &[AdfaState], accepting: bool, edges: &[(Symbol, u32)]) -> u32 {
    let mut min_accept = if accepting { 0 } else { u32::MAX };
    for &(_, t) in edges {
        let child = &states[t as usize];
        if child.min_accept != u32::MAX {
            min_accept = min_accept.min(child.min_accept + 1);
        }
    }
    min_accept
}

impl FiniteAdfa {
    pub fn n_words(&self) -> usize {
        self.n_words
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }
}

impl SampleDfa for FiniteAdfa {
    fn root(&self) -> u32 {
        self.root
    }

    fn is_final(&self, n: u32) -> bool {
        self.states[n as usize].accepting
    }

    fn child(&self, n: u32, sym: Symbol) -> Option<u32> {
        let edges = &self.states[n as usize].edges;
        edges
            .binary_search_by_key(&sym, |&(s, _)| s)
            .ok()
            .map(|i| edges[i].1)
    }

    fn min_accept_depth(&self, n: u32) -> usize {
        let m = self.states[n as usize].min_accept;
        if m == u32::MAX {
            usize::MAX
        } else {
            m as usize
        }
    }
}

/// Sample of the addition relation x + y = z, represented without
/// enumeration. A node stands for the residual language of a word prefix,
/// which for this relation is determined by a short summary: the running
/// linear form x + y - z of the decoded prefix under two consecutive basis
/// shifts, the last digit read on each track (for the forbidden-factor
/// constraint), and the remaining length budget. Nodes whose window of
/// reachable values can no longer hit zero are dead; exact aliveness is
/// established recursively, so the automaton's language equals the one the
/// generic enumerate-and-build path would produce (cross-checked in tests).
pub struct AdderSample {
    /// Prefix sums of the numeration system's basis.
    basis_sums: Vec<i64>,
    digit_bound: u8,
    bound: usize,
    inner: RefCell<AdderInner>,
}

#[derive(Default)]
struct AdderInner {
    memo: HashMap<AddKey, Option<u32>>,
    nodes: Vec<AddNode>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct AddKey {
    da: i64,
    db: i64,
    /// Last digit per track; 3 marks "nothing read yet" (the root).
    lasts: [u8; 3],
    budget: u16,
}

struct AddNode {
    accepting: bool,
    children: Vec<(Symbol, u32)>,
    min_accept: u32,
}

impl AdderSample {
    pub fn new(basis: &[u64], digit_bound: u8, bound: usize) -> Self {
        let basis: Vec<i64> = basis.iter().map(|&b| b as i64).collect();
        let mut basis_sums = vec![0i64];
        for &b in &basis {
            basis_sums.push(basis_sums.last().unwrap() + b);
        }
        AdderSample {
            basis_sums,
            digit_bound,
            bound,
            inner: RefCell::new(AdderInner::default()),
        }
    }

    /// Can the linear form reach zero within `budget` more digits? The
    /// suffix contribution after `t` appends lies in [-2*S_t, 4*S_t] where
    /// S_t sums the first t basis terms; the base evolves by the recurrence.
    fn window_ok(&self, da: i64, db: i64, budget: u16) -> bool {
        let (mut a, mut b) = (da, db);
        for t in 0..=budget as usize {
            let s = self.basis_sums[t.min(self.basis_sums.len() - 1)];
            let lo = -4 * s;
            let hi = 2 * s;
            if a >= lo && a <= hi {
                return true;
            }
            let (na, nb) = (b, 2 * a + 2 * b);
            a = na;
            b = nb;
            if a.abs() > 8 * self.basis_sums[self.bound.min(self.basis_sums.len() - 1)] {
                // The form has escaped every window it could still meet.
                return false;
            }
        }
        false
    }

    fn node(&self, key: AddKey) -> Option<u32> {
        if let Some(&hit) = self.inner.borrow().memo.get(&key) {
            return hit;
        }
        if !self.window_ok(key.da, key.db, key.budget) {
            self.inner.borrow_mut().memo.insert(key, None);
            return None;
        }
        let accepting = key.da == 0;
        let is_root = key.lasts == [3, 3, 3];
        let base = self.digit_bound as usize + 1;
        let nsym = base * base * base;
        let mut children = Vec::new();
        if key.budget > 0 {
            for sym in 0..nsym as Symbol {
                let dz = (sym as usize % base) as u8;
                let dy = (sym as usize / base % base) as u8;
                let dx = (sym as usize / (base * base)) as u8;
                if is_root && sym == 0 {
                    continue; // minimal words have a nonzero first tuple
                }
                let digits = [dx, dy, dz];
                if (0..3).any(|i| key.lasts[i] == 2 && digits[i] == 2) {
                    continue; // forbidden factor 22 on some track
                }
                let e = dx as i64 + dy as i64 - dz as i64;
                let child = AddKey {
                    da: key.db + e,
                    db: 2 * key.da + 2 * key.db + 3 * e,
                    lasts: digits,
                    budget: key.budget - 1,
                };
                if let Some(c) = self.node(child) {
                    children.push((sym, c));
                }
            }
        }
        if !accepting && children.is_empty() {
            self.inner.borrow_mut().memo.insert(key, None);
            return None;
        }
        let mut min_accept = if accepting { 0u32 } else { u32::MAX };
        {
            let inner = self.inner.borrow();
            for &(_, c) in &children {
                let child = &inner.nodes[c as usize];
                if child.min_accept != u32::MAX {
                    min_accept = min_accept.min(child.min_accept + 1);
                }
            }
        }
        let mut inner = self.inner.borrow_mut();
        let id = inner.nodes.len() as u32;
        inner.nodes.push(AddNode {
            accepting,
            children,
            min_accept,
        });
        inner.memo.insert(key, Some(id));
        Some(id)
    }

    fn root_key(&self) -> AddKey {
        AddKey {
            da: 0,
            db: 0,
            lasts: [3, 3, 3],
            budget: self.bound as u16,
        }
    }
}

impl SampleDfa for AdderSample {
    fn root(&self) -> u32 {
        self.node(self.root_key())
            .expect("the relation accepts the all-zero tuple")
    }

    fn is_final(&self, n: u32) -> bool {
        self.inner.borrow().nodes[n as usize].accepting
    }

    fn child(&self, n: u32, sym: Symbol) -> Option<u32> {
        let children = &self.inner.borrow().nodes[n as usize].children;
        children
            .binary_search_by_key(&sym, |&(s, _)| s)
            .ok()
            .map(|i| children[i].1)
    }

    fn min_accept_depth(&self, n: u32) -> usize {
        let m = self.inner.borrow().nodes[n as usize].min_accept;
        if m == u32::MAX {
            usize::MAX
        } else {
            m as usize
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(adfa: &FiniteAdfa) -> Vec<Vec<Symbol>> {
        // enumerate all accepted words (the language is finite)
        fn go(a: &FiniteAdfa, n: u32, acc: &mut Vec<Symbol>, out: &mut Vec<Vec<Symbol>>) {
            if a.is_final(n) {
                out.push(acc.clone());
            }
            for &(sym, t) in &a.states[n as usize].edges {
                acc.push(sym);
                go(a, t, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        go(adfa, adfa.root(), &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    #[test]
    fn builder_reproduces_input_set() {
        let mut input: Vec<Vec<Symbol>> = vec![
            vec![],
            vec![0, 1],
            vec![0, 2],
            vec![1],
            vec![1, 0, 2],
            vec![1, 1],
            vec![2, 0],
        ];
        input.sort();
        let mut b = AdfaBuilder::new();
        for w in &input {
            b.insert(w);
        }
        let adfa = b.finish();
        assert_eq!(words(&adfa), input);
        assert_eq!(adfa.n_words(), input.len());
    }

    #[test]
    fn suffix_sharing_reduces_states() {
        let mut b = AdfaBuilder::new();
        // ab, bb share the one-letter suffix state
        b.insert(&[0, 1]);
        b.insert(&[1, 1]);
        let adfa = b.finish();
        assert_eq!(adfa.n_states(), 3); // root, mid, final
    }

    #[test]
    fn summaries() {
        let mut b = AdfaBuilder::new();
        b.insert(&[1]);
        b.insert(&[1, 0, 0]);
        let adfa = b.finish();
        let root = adfa.root();
        assert_eq!(adfa.min_accept_depth(root), 1);
        assert!(!adfa.is_final(root));
    }
}
