use std::collections::HashMap;

use super::minimize::minimize_dfa;
use super::nfa::Nfa;
use super::{Alphabet, AutomatonError, StateId, Symbol, NO_STATE};

/// Combination mode for [`Dfa::product`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductMode {
    And,
    Or,
}

/// Deterministic multi-track automaton. State 0 is initial. The transition
/// map may be partial; a missing edge leads to an implicit rejecting sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    accepting: Vec<bool>,
    /// Flat row-major table: `next[state * symbol_count + symbol]`.
    next: Vec<StateId>,
}

impl Dfa {
    pub fn new(alphabet: Alphabet, n_states: usize) -> Self {
        let nsym = alphabet.symbol_count();
        Dfa {
            alphabet,
            accepting: vec![false; n_states],
            next: vec![NO_STATE; n_states * nsym],
        }
    }

    /// Automaton accepting nothing.
    pub fn empty(alphabet: Alphabet) -> Self {
        Dfa::new(alphabet, 1)
    }

    /// Automaton accepting every word.
    pub fn accept_all(alphabet: Alphabet) -> Self {
        let mut d = Dfa::new(alphabet, 1);
        d.accepting[0] = true;
        for s in d.alphabet.symbols() {
            d.set_transition(0, s, 0);
        }
        d
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accepting[s as usize]
    }

    pub fn set_accepting(&mut self, s: StateId, acc: bool) {
        self.accepting[s as usize] = acc;
    }

    pub fn set_transition(&mut self, s: StateId, sym: Symbol, target: StateId) {
        let nsym = self.alphabet.symbol_count();
        self.next[s as usize * nsym + sym as usize] = target;
    }

    pub fn step(&self, s: StateId, sym: Symbol) -> Option<StateId> {
        let nsym = self.alphabet.symbol_count();
        let t = self.next[s as usize * nsym + sym as usize];
        (t != NO_STATE).then_some(t)
    }

    /// State reached on `word` from the initial state, if the run survives.
    pub fn run(&self, word: &[Symbol]) -> Option<StateId> {
        let mut s = 0;
        for &sym in word {
            s = self.step(s, sym)?;
        }
        Some(s)
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.run(word).is_some_and(|s| self.is_accepting(s))
    }

    /// Convenience: run on per-track digit strings (already aligned).
    pub fn accepts_tracks(&self, tracks: &[Vec<u8>]) -> Result<bool, AutomatonError> {
        Ok(self.accepts(&self.alphabet.encode_word(tracks)?))
    }

    pub fn is_empty(&self) -> bool {
        let mut seen = vec![false; self.n_states()];
        let mut stack = vec![0u32];
        seen[0] = true;
        while let Some(s) = stack.pop() {
            if self.is_accepting(s) {
                return false;
            }
            for sym in self.alphabet.symbols() {
                if let Some(t) = self.step(s, sym) {
                    if !seen[t as usize] {
                        seen[t as usize] = true;
                        stack.push(t);
                    }
                }
            }
        }
        true
    }

    /// Make the transition map total by adding an explicit rejecting sink.
    pub fn totalize(&self) -> Dfa {
        let nsym = self.alphabet.symbol_count();
        if self.next.iter().all(|&t| t != NO_STATE) {
            return self.clone();
        }
        let sink = self.n_states() as StateId;
        let mut d = Dfa::new(self.alphabet.clone(), self.n_states() + 1);
        d.accepting[..self.n_states()].copy_from_slice(&self.accepting);
        for s in 0..self.n_states() {
            for sym in 0..nsym {
                let t = self.next[s * nsym + sym];
                d.next[s * nsym + sym] = if t == NO_STATE { sink } else { t };
            }
        }
        for sym in 0..nsym {
            d.next[sink as usize * nsym + sym] = sink;
        }
        d
    }

    /// Language complement over the same alphabet.
    pub fn complement(&self) -> Dfa {
        let mut d = self.totalize();
        for a in d.accepting.iter_mut() {
            *a = !*a;
        }
        d.minimize()
    }

    /// Pairwise boolean combination. Both automata must share an alphabet.
    pub fn product(&self, other: &Dfa, mode: ProductMode) -> Result<Dfa, AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                self.alphabet.bounds(),
                other.alphabet.bounds()
            )));
        }
        // Work over totalized views so `or` sees past either side's sink.
        let a = self.totalize();
        let b = other.totalize();
        let nsym = self.alphabet.symbol_count();
        let mut map: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut pairs = vec![(0u32, 0u32)];
        map.insert((0, 0), 0);
        let mut accepting = Vec::new();
        let mut next = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (sa, sb) = pairs[i];
            let acc_a = a.is_accepting(sa);
            let acc_b = b.is_accepting(sb);
            accepting.push(match mode {
                ProductMode::And => acc_a && acc_b,
                ProductMode::Or => acc_a || acc_b,
            });
            for sym in 0..nsym {
                let ta = a.next[sa as usize * nsym + sym];
                let tb = b.next[sb as usize * nsym + sym];
                let id = *map.entry((ta, tb)).or_insert_with(|| {
                    pairs.push((ta, tb));
                    (pairs.len() - 1) as StateId
                });
                next.push(id);
            }
            i += 1;
        }
        let mut d = Dfa {
            alphabet: self.alphabet.clone(),
            accepting,
            next,
        };
        d = d.minimize();
        Ok(d)
    }

    /// Close the language under adding and removing leading all-zero tuples.
    pub fn saturate(&self) -> Dfa {
        let zero = self.alphabet.zero();
        // Orbit of the initial state under the zero tuple.
        let mut orbit = vec![0u32];
        let mut seen = vec![false; self.n_states()];
        seen[0] = true;
        let mut cur = 0u32;
        while let Some(t) = self.step(cur, zero) {
            if seen[t as usize] {
                break;
            }
            seen[t as usize] = true;
            orbit.push(t);
            cur = t;
        }
        let mut nfa = Nfa::from_dfa_states(self);
        let init = nfa.add_state(orbit.iter().any(|&s| self.is_accepting(s)));
        nfa.set_initial(vec![init]);
        nfa.add_transition(init, zero, init);
        for sym in self.alphabet.symbols() {
            if sym == zero {
                continue;
            }
            for &s in &orbit {
                if let Some(t) = self.step(s, sym) {
                    nfa.add_transition(init, sym, t);
                }
            }
        }
        nfa.determinize().minimize()
    }

    /// Erase one track, yielding a nondeterministic automaton over the rest.
    /// The caller is expected to saturate before determinizing: erasing a
    /// track can strand leading-zero alignment of the remaining tracks.
    pub fn project(&self, track: usize) -> Result<Nfa, AutomatonError> {
        let reduced = self.alphabet.without_track(track)?;
        let mut nfa = Nfa::new(reduced.clone(), self.n_states());
        nfa.set_initial(vec![0]);
        for s in 0..self.n_states() as StateId {
            if self.is_accepting(s) {
                nfa.set_accepting(s, true);
            }
            let mut tuple = vec![0u8; self.alphabet.tracks()];
            for sym in self.alphabet.symbols() {
                if let Some(t) = self.step(s, sym) {
                    self.alphabet.decode_into(sym, &mut tuple);
                    let mut rest = tuple.clone();
                    rest.remove(track);
                    let rsym = reduced.encode(&rest).expect("reduced digit in range");
                    nfa.add_transition(s, rsym, t);
                }
            }
        }
        Ok(nfa)
    }

    /// Minimal trimmed DFA for the same language: totalize, merge
    /// indistinguishable states, drop the rejecting sink, renumber by
    /// breadth-first search so equal languages give identical tables.
    pub fn minimize(&self) -> Dfa {
        minimize_dfa(self)
    }

    pub fn equivalent(&self, other: &Dfa) -> Result<bool, AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch(
                "cannot compare languages over different alphabets".into(),
            ));
        }
        Ok(self.minimize() == other.minimize())
    }

    /// All accepted words of length at most `max_len` in shortlex order.
    pub fn accepted_words(&self, max_len: usize) -> Vec<Vec<Symbol>> {
        let mut out = Vec::new();
        let mut layer = vec![(0u32, Vec::new())];
        if self.is_accepting(0) {
            out.push(Vec::new());
        }
        for _ in 0..max_len {
            let mut next_layer = Vec::new();
            for (s, w) in &layer {
                for sym in self.alphabet.symbols() {
                    if let Some(t) = self.step(*s, sym) {
                        let mut v = w.clone();
                        v.push(sym);
                        if self.is_accepting(t) {
                            out.push(v.clone());
                        }
                        next_layer.push((t, v));
                    }
                }
            }
            layer = next_layer;
        }
        out
    }

    pub(crate) fn accepting_slice(&self) -> &[bool] {
        &self.accepting
    }

    pub(crate) fn raw_next(&self) -> &[StateId] {
        &self.next
    }

    pub(crate) fn from_parts(alphabet: Alphabet, accepting: Vec<bool>, next: Vec<StateId>) -> Dfa {
        debug_assert_eq!(accepting.len() * alphabet.symbol_count(), next.len());
        Dfa {
            alphabet,
            accepting,
            next,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::words_upto;
    use super::*;

    /// Single-track recognizer of 0*10* over digits {0,1,2}.
    fn zeros_one_zeros() -> Dfa {
        let a = Alphabet::uniform(1, 2);
        let mut d = Dfa::new(a, 2);
        d.set_transition(0, 0, 0);
        d.set_transition(0, 1, 1);
        d.set_transition(1, 0, 1);
        d.set_accepting(1, true);
        d
    }

    /// Single-track automaton for words ending in digit 0 (nonempty).
    fn ends_in_zero() -> Dfa {
        let a = Alphabet::uniform(1, 2);
        let mut d = Dfa::new(a, 2);
        for sym in 0..3u16 {
            d.set_transition(0, sym, if sym == 0 { 1 } else { 0 });
            d.set_transition(1, sym, if sym == 0 { 1 } else { 0 });
        }
        d.set_accepting(1, true);
        d
    }

    #[test]
    fn product_and_brute_force() {
        let a = zeros_one_zeros();
        let b = ends_in_zero();
        let p = a.product(&b, ProductMode::And).unwrap();
        // accepts "10", "100" but not "1"
        assert!(p.accepts(&[1, 0]));
        assert!(p.accepts(&[1, 0, 0]));
        assert!(!p.accepts(&[1]));
        for w in words_upto(a.alphabet(), 4) {
            assert_eq!(p.accepts(&w), a.accepts(&w) && b.accepts(&w), "{w:?}");
        }
    }

    #[test]
    fn product_contradiction_is_empty() {
        let a = zeros_one_zeros();
        let c = a.complement();
        let p = a.product(&c, ProductMode::And).unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn product_or_idempotent() {
        let a = zeros_one_zeros();
        let p = a.product(&a, ProductMode::Or).unwrap();
        assert!(p.equivalent(&a).unwrap());
    }

    #[test]
    fn complement_involution_and_brute() {
        let a = zeros_one_zeros();
        let c = a.complement();
        assert!(c.complement().equivalent(&a).unwrap());
        for w in words_upto(a.alphabet(), 5) {
            assert_eq!(c.accepts(&w), !a.accepts(&w));
        }
    }

    #[test]
    fn complement_of_empty_accepts_everything() {
        let e = Dfa::empty(Alphabet::uniform(1, 2));
        let c = e.complement();
        for w in words_upto(c.alphabet(), 4) {
            assert!(c.accepts(&w));
        }
    }

    #[test]
    fn saturate_closes_leading_zeros() {
        // Language {"1"}; saturation adds 0*1 and nothing else.
        let a = Alphabet::uniform(1, 2);
        let mut d = Dfa::new(a, 2);
        d.set_transition(0, 1, 1);
        d.set_accepting(1, true);
        let s = d.saturate();
        assert!(s.accepts(&[1]));
        assert!(s.accepts(&[0, 1]));
        assert!(s.accepts(&[0, 0, 0, 1]));
        assert!(!s.accepts(&[1, 0]));
        assert!(!s.accepts(&[]));
        // Saturation is idempotent at the language level.
        assert!(s.saturate().equivalent(&s).unwrap());
    }

    #[test]
    fn projection_with_saturation() {
        // Two-track equality automaton; projecting either track and
        // saturating yields all words (every digit string is some track).
        let a = Alphabet::uniform(2, 2);
        let mut eq = Dfa::new(a.clone(), 1);
        eq.set_accepting(0, true);
        for d in 0..=2u8 {
            let sym = a.encode(&[d, d]).unwrap();
            eq.set_transition(0, sym, 0);
        }
        let proj = eq.project(1).unwrap().determinize().saturate();
        for w in words_upto(proj.alphabet(), 5) {
            assert!(proj.accepts(&w), "{w:?}");
        }
    }

    #[test]
    fn minimize_is_idempotent_and_preserves_language() {
        let a = zeros_one_zeros();
        let m = a.minimize();
        assert!(m.equivalent(&a).unwrap());
        assert_eq!(m.minimize(), m);
        assert!(m.n_states() <= a.n_states());
    }

    #[test]
    fn empty_word_acceptance_is_initial_acceptance() {
        let mut d = Dfa::new(Alphabet::uniform(1, 2), 1);
        assert!(!d.accepts(&[]));
        d.set_accepting(0, true);
        assert!(d.accepts(&[]));
    }
}
