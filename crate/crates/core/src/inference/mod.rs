//! Mechanized guessing: infer minimal synchronized automata for sequence
//! relations from brute-force oracle data. The guesses stabilize (two
//! consecutive sample lengths produce isomorphic hypotheses) and are then
//! formally verified downstream; a guess that fails verification is a build
//! failure, not a warning.

mod adfa;
mod learn;

pub use adfa::{AdderSample, AdfaBuilder, FiniteAdfa, SampleDfa};
pub use learn::{learn_dfa, stabilize, GuessResult};

use thiserror::Error;

use crate::automata::{Alphabet, Symbol};
use crate::numeration::{NumerationError, NumerationSystem};
use crate::oracles::SequenceCache;

#[derive(Debug, Error)]
pub enum InferenceError {
    #[error("sample of bound {bound} is too shallow to close the hypothesis")]
    InsufficientSample { bound: usize },
    #[error("hypothesis disagrees with its own sample at bound {bound}")]
    Inconsistent { bound: usize },
    #[error("no stabilization by length {l_max}")]
    NoStabilization { l_max: usize },
    #[error("unknown oracle '{0}'")]
    UnknownOracle(String),
    #[error(transparent)]
    Numeration(#[from] NumerationError),
}

/// A k-ary relation on naturals, with enough structure to build samples.
pub trait RelationOracle {
    fn name(&self) -> &str;
    fn arity(&self) -> usize;
    fn contains(&mut self, tuple: &[u64]) -> bool;
    /// Build the sample of all valid padded words of length <= `bound`.
    fn build_sample(
        &mut self,
        sys: &NumerationSystem,
        bound: usize,
    ) -> Result<ClassifiedSample, InferenceError>;
}

/// Finite map from padded digit-tuple words (length <= `bound`) to labels.
/// Stored as the automaton of its minimal accepting words; everything not
/// reachable there, including words with a forbidden factor on some track,
/// is labeled reject.
pub struct ClassifiedSample {
    alphabet: Alphabet,
    bound: usize,
    backend: Box<dyn SampleDfa>,
}

impl ClassifiedSample {
    pub fn new(alphabet: Alphabet, bound: usize, backend: Box<dyn SampleDfa>) -> Self {
        ClassifiedSample {
            alphabet,
            bound,
            backend,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub(crate) fn backend(&self) -> &dyn SampleDfa {
        self.backend.as_ref()
    }

    /// Label of a word of length <= bound: true = accept.
    pub fn label_of(&self, word: &[Symbol]) -> bool {
        assert!(word.len() <= self.bound, "word exceeds the sample bound");
        // Skip the leading zero-tuple padding, then walk the automaton.
        let mut i = 0;
        while i < word.len() && word[i] == 0 {
            i += 1;
        }
        let mut node = self.backend.root();
        for &sym in &word[i..] {
            match self.backend.child(node, sym) {
                Some(c) => node = c,
                None => return false,
            }
        }
        self.backend.is_final(node)
    }
}

/// Classify every valid padded word of length <= `bound` against the oracle.
pub fn enumerate_sample(
    oracle: &mut dyn RelationOracle,
    sys: &NumerationSystem,
    bound: usize,
) -> Result<ClassifiedSample, InferenceError> {
    oracle.build_sample(sys, bound)
}

/// Function-backed binary relation {(n, f(n))}.
pub struct FunctionOracle<F: FnMut(u64) -> u64> {
    name: String,
    f: F,
}

impl<F: FnMut(u64) -> u64> FunctionOracle<F> {
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FunctionOracle {
            name: name.into(),
            f,
        }
    }
}

const MAX_WORD: usize = 24;

#[derive(Clone, Copy)]
struct PackedWord {
    len: u8,
    data: [u8; MAX_WORD],
}

impl PackedWord {
    fn as_slice(&self) -> &[u8] {
        &self.data[..self.len as usize]
    }
}

/// Build a finite sample automaton from explicit accepting tuples.
fn sample_from_tuples(
    sys: &NumerationSystem,
    arity: usize,
    bound: usize,
    tuples: impl Iterator<Item = Vec<u64>>,
) -> Result<ClassifiedSample, InferenceError> {
    assert!(bound <= MAX_WORD, "sample bound exceeds packed word size");
    let alphabet = sys.alphabet(arity);
    let mut words: Vec<PackedWord> = Vec::new();
    for tuple in tuples {
        debug_assert_eq!(tuple.len(), arity);
        let reps: Vec<Vec<u8>> = tuple.iter().map(|&v| sys.to_canonical(v)).collect();
        let len = reps.iter().map(|r| r.len()).max().unwrap_or(0);
        if len > bound {
            continue;
        }
        let mut w = PackedWord {
            len: len as u8,
            data: [0; MAX_WORD],
        };
        for pos in 0..len {
            let mut digits = vec![0u8; arity];
            for (t, rep) in reps.iter().enumerate() {
                let pad = len - rep.len();
                if pos >= pad {
                    digits[t] = rep[pos - pad];
                }
            }
            w.data[pos] = alphabet
                .encode(&digits)
                .expect("digits fit the system alphabet") as u8;
        }
        words.push(w);
    }
    words.sort_unstable_by(|a, b| a.as_slice().cmp(b.as_slice()));
    let mut builder = AdfaBuilder::new();
    let mut scratch: Vec<Symbol> = Vec::with_capacity(bound);
    for w in &words {
        scratch.clear();
        scratch.extend(w.as_slice().iter().map(|&b| b as Symbol));
        builder.insert(&scratch);
    }
    Ok(ClassifiedSample::new(
        alphabet,
        bound,
        Box::new(builder.finish()),
    ))
}

impl<F: FnMut(u64) -> u64> RelationOracle for FunctionOracle<F> {
    fn name(&self) -> &str {
        &self.name
    }

    fn arity(&self) -> usize {
        2
    }

    fn contains(&mut self, tuple: &[u64]) -> bool {
        tuple.len() == 2 && (self.f)(tuple[0]) == tuple[1]
    }

    fn build_sample(
        &mut self,
        sys: &NumerationSystem,
        bound: usize,
    ) -> Result<ClassifiedSample, InferenceError> {
        let limit = sys.basis_term(bound)?;
        let f = &mut self.f;
        let tuples = (0..limit).filter_map(|n| {
            let v = f(n);
            (v < limit).then(|| vec![n, v])
        });
        sample_from_tuples(sys, 2, bound, tuples)
    }
}

/// The addition relation x + y = z over the active system, backed by the
/// summary-based sample automaton (enumerating the quadratically many
/// accepting triples is avoided entirely).
pub struct AdditionOracle;

impl RelationOracle for AdditionOracle {
    fn name(&self) -> &str {
        "add-relation"
    }

    fn arity(&self) -> usize {
        3
    }

    fn contains(&mut self, tuple: &[u64]) -> bool {
        tuple.len() == 3 && tuple[0] + tuple[1] == tuple[2]
    }

    fn build_sample(
        &mut self,
        sys: &NumerationSystem,
        bound: usize,
    ) -> Result<ClassifiedSample, InferenceError> {
        if sys.digit_bound() != 2 {
            // The summary construction is generic over the basis but the
            // tuple layout below assumes three digits per track.
            return Err(InferenceError::UnknownOracle(
                "add-relation requires a digit bound of 2".into(),
            ));
        }
        let basis = sys.basis_table(bound + 2)?;
        let backend = AdderSample::new(&basis, sys.digit_bound(), bound);
        Ok(ClassifiedSample::new(
            sys.alphabet(3),
            bound,
            Box::new(backend),
        ))
    }
}

impl AdditionOracle {
    /// Slow path used to cross-validate the summary construction: enumerate
    /// the accepting triples explicitly.
    pub fn build_sample_by_enumeration(
        &mut self,
        sys: &NumerationSystem,
        bound: usize,
    ) -> Result<ClassifiedSample, InferenceError> {
        let limit = sys.basis_term(bound)?;
        let tuples = (0..limit)
            .flat_map(move |z| (0..=z).map(move |x| vec![x, z - x, z]));
        sample_from_tuples(sys, 3, bound, tuples)
    }
}

/// CLI-facing oracle registry.
pub fn oracle_by_name(name: &str) -> Result<Box<dyn RelationOracle>, InferenceError> {
    match name {
        "gut" => {
            let mut c = SequenceCache::new();
            Ok(Box::new(FunctionOracle::new("gut", move |n| c.g(n))))
        }
        "aa" => {
            let mut c = SequenceCache::new();
            Ok(Box::new(FunctionOracle::new("aa", move |n| c.a(n))))
        }
        "bb" => {
            let mut c = SequenceCache::new();
            Ok(Box::new(FunctionOracle::new("bb", move |n| c.b(n))))
        }
        "qq" => {
            let mut c = SequenceCache::new();
            Ok(Box::new(FunctionOracle::new("qq", move |n| c.q(n))))
        }
        "hh" => {
            let mut c = SequenceCache::new();
            Ok(Box::new(FunctionOracle::new("hh", move |n| c.h_sum(n))))
        }
        "incr-relation" => Ok(Box::new(FunctionOracle::new("incr-relation", |n| n + 1))),
        "add-relation" => Ok(Box::new(AdditionOracle)),
        other => Err(InferenceError::UnknownOracle(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kim() -> NumerationSystem {
        NumerationSystem::kim()
    }

    fn encode_pair(sys: &NumerationSystem, a: u64, b: u64, len: usize) -> Vec<Symbol> {
        let alphabet = sys.alphabet(2);
        let tracks = sys.encode_values(&[a, b], len).unwrap();
        alphabet.encode_word(&tracks).unwrap()
    }

    #[test]
    fn successor_sample_labels() {
        let sys = kim();
        let mut oracle = oracle_by_name("incr-relation").unwrap();
        let sample = enumerate_sample(oracle.as_mut(), &sys, 3).unwrap();
        assert!(sample.label_of(&encode_pair(&sys, 7, 8, 3)));
        assert!(sample.label_of(&encode_pair(&sys, 0, 1, 1)));
        assert!(!sample.label_of(&encode_pair(&sys, 0, 0, 1)));
        assert!(!sample.label_of(&encode_pair(&sys, 3, 5, 2)));
        // A track containing the forbidden factor is a reject.
        let alphabet = sys.alphabet(2);
        let bad = alphabet
            .encode_word(&[vec![2, 2], vec![1, 0]])
            .unwrap();
        assert!(!sample.label_of(&bad));
    }

    #[test]
    fn sample_agrees_with_oracle_on_decode() {
        let sys = kim();
        let mut oracle = oracle_by_name("gut").unwrap();
        let sample = enumerate_sample(oracle.as_mut(), &sys, 4).unwrap();
        let alphabet = sys.alphabet(2);
        // walk every valid 2-track word of length <= 4
        let mut stack = vec![Vec::<Symbol>::new()];
        while let Some(w) = stack.pop() {
            let tracks = alphabet.decode_word(&w);
            let valid = tracks.iter().all(|t| !sys.has_forbidden_factor(t));
            if valid {
                let values: Vec<u64> = tracks
                    .iter()
                    .map(|t| sys.value_of(t).unwrap())
                    .collect();
                assert_eq!(
                    sample.label_of(&w),
                    oracle.contains(&values),
                    "word {w:?} values {values:?}"
                );
            }
            if w.len() < 4 {
                for sym in alphabet.symbols() {
                    let mut v = w.clone();
                    v.push(sym);
                    stack.push(v);
                }
            }
        }
    }

    #[test]
    fn adder_summary_matches_enumeration() {
        let sys = kim();
        let mut oracle = AdditionOracle;
        let fast = oracle.build_sample(&sys, 4).unwrap();
        let slow = oracle.build_sample_by_enumeration(&sys, 4).unwrap();
        let alphabet = sys.alphabet(3);
        let mut stack = vec![Vec::<Symbol>::new()];
        while let Some(w) = stack.pop() {
            assert_eq!(fast.label_of(&w), slow.label_of(&w), "{w:?}");
            if w.len() < 4 {
                for sym in alphabet.symbols() {
                    let mut v = w.clone();
                    v.push(sym);
                    stack.push(v);
                }
            }
        }
    }

    #[test]
    fn learner_equivalent_to_constructed_incrementer() {
        let sys = kim();
        let mut oracle = oracle_by_name("incr-relation").unwrap();
        let guess = stabilize(oracle.as_mut(), &sys, 2, 12).unwrap();
        let built = sys.build_incrementer().unwrap();
        assert!(guess.dfa.equivalent(&built).unwrap());
        assert!(guess.stabilized_at <= 10, "stabilized at {}", guess.stabilized_at);
    }

    #[test]
    fn constant_false_oracle_gives_empty_automaton() {
        struct Never;
        impl RelationOracle for Never {
            fn name(&self) -> &str {
                "never"
            }
            fn arity(&self) -> usize {
                2
            }
            fn contains(&mut self, _: &[u64]) -> bool {
                false
            }
            fn build_sample(
                &mut self,
                sys: &NumerationSystem,
                bound: usize,
            ) -> Result<ClassifiedSample, InferenceError> {
                sample_from_tuples(sys, 2, bound, std::iter::empty())
            }
        }
        let sys = kim();
        let guess = stabilize(&mut Never, &sys, 2, 6).unwrap();
        assert_eq!(guess.stabilized_at, 3);
        assert!(guess.dfa.is_empty());
        assert_eq!(guess.dfa.n_states(), 1);
    }

    #[test]
    fn determinism_bit_identical() {
        let sys = kim();
        let mut o1 = oracle_by_name("gut").unwrap();
        let mut o2 = oracle_by_name("gut").unwrap();
        let g1 = stabilize(o1.as_mut(), &sys, 3, 12).unwrap();
        let g2 = stabilize(o2.as_mut(), &sys, 3, 12).unwrap();
        assert_eq!(g1.dfa, g2.dfa);
        assert_eq!(g1.stabilized_at, g2.stabilized_at);
    }
}
