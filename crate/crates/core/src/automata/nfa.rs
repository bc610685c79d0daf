use std::collections::HashMap;

use super::dfa::Dfa;
use super::{Alphabet, StateId, Symbol};

/// Nondeterministic automaton, an intermediate of projection and regex
/// compilation. Spontaneous (epsilon) moves are allowed; they are only ever
/// produced internally by the regex builder.
#[derive(Debug, Clone)]
pub struct Nfa {
    alphabet: Alphabet,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    /// Per state, sorted list of (symbol, target).
    moves: Vec<Vec<(Symbol, StateId)>>,
    epsilon: Vec<Vec<StateId>>,
}

impl Nfa {
    pub fn new(alphabet: Alphabet, n_states: usize) -> Self {
        Nfa {
            alphabet,
            initial: Vec::new(),
            accepting: vec![false; n_states],
            moves: vec![Vec::new(); n_states],
            epsilon: vec![Vec::new(); n_states],
        }
    }

    /// Copy of a DFA's states and transitions with no initial state set.
    pub fn from_dfa_states(dfa: &Dfa) -> Self {
        let mut nfa = Nfa::new(dfa.alphabet().clone(), dfa.n_states());
        for s in 0..dfa.n_states() as StateId {
            nfa.accepting[s as usize] = dfa.is_accepting(s);
            for sym in dfa.alphabet().symbols() {
                if let Some(t) = dfa.step(s, sym) {
                    nfa.add_transition(s, sym, t);
                }
            }
        }
        nfa
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn add_state(&mut self, accepting: bool) -> StateId {
        self.accepting.push(accepting);
        self.moves.push(Vec::new());
        self.epsilon.push(Vec::new());
        (self.accepting.len() - 1) as StateId
    }

    pub fn set_initial(&mut self, initial: Vec<StateId>) {
        for &s in &initial {
            assert!((s as usize) < self.n_states(), "undeclared initial state");
        }
        self.initial = initial;
    }

    pub fn set_accepting(&mut self, s: StateId, acc: bool) {
        self.accepting[s as usize] = acc;
    }

    pub fn add_transition(&mut self, from: StateId, sym: Symbol, to: StateId) {
        assert!((to as usize) < self.n_states(), "undeclared target state");
        let list = &mut self.moves[from as usize];
        if !list.contains(&(sym, to)) {
            list.push((sym, to));
        }
    }

    pub fn add_epsilon(&mut self, from: StateId, to: StateId) {
        assert!((to as usize) < self.n_states(), "undeclared target state");
        let list = &mut self.epsilon[from as usize];
        if !list.contains(&to) {
            list.push(to);
        }
    }

    fn closure(&self, set: &mut Vec<StateId>) {
        let mut head = 0;
        while head < set.len() {
            let s = set[head];
            head += 1;
            for &t in &self.epsilon[s as usize] {
                if !set.contains(&t) {
                    set.push(t);
                }
            }
        }
        set.sort_unstable();
        set.dedup();
    }

    /// Subset construction. The result is minimized.
    pub fn determinize(&self) -> Dfa {
        let nsym = self.alphabet.symbol_count();
        let mut start: Vec<StateId> = self.initial.clone();
        self.closure(&mut start);
        let mut subset_ids: HashMap<Box<[StateId]>, StateId> = HashMap::new();
        let mut subsets: Vec<Box<[StateId]>> = Vec::new();
        subset_ids.insert(start.clone().into_boxed_slice(), 0);
        subsets.push(start.into_boxed_slice());
        let mut accepting = Vec::new();
        let mut next: Vec<StateId> = Vec::new();
        let mut head = 0;
        while head < subsets.len() {
            let subset = subsets[head].clone();
            head += 1;
            accepting.push(subset.iter().any(|&s| self.accepting[s as usize]));
            let mut per_sym: HashMap<Symbol, Vec<StateId>> = HashMap::new();
            for &s in subset.iter() {
                for &(sym, t) in &self.moves[s as usize] {
                    per_sym.entry(sym).or_default().push(t);
                }
            }
            let base = next.len();
            next.resize(base + nsym, super::NO_STATE);
            let mut keys: Vec<Symbol> = per_sym.keys().copied().collect();
            keys.sort_unstable();
            for sym in keys {
                let mut set = per_sym.remove(&sym).unwrap();
                self.closure(&mut set);
                let boxed = set.into_boxed_slice();
                let id = *subset_ids.entry(boxed.clone()).or_insert_with(|| {
                    subsets.push(boxed);
                    (subsets.len() - 1) as StateId
                });
                next[base + sym as usize] = id;
            }
        }
        Dfa::from_parts(self.alphabet.clone(), accepting, next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinize_simple_union() {
        // NFA accepting words "1" or "2" over one track of digits {0,1,2}.
        let a = Alphabet::uniform(1, 2);
        let mut n = Nfa::new(a, 3);
        n.set_initial(vec![0]);
        n.add_transition(0, 1, 1);
        n.add_transition(0, 2, 2);
        n.set_accepting(1, true);
        n.set_accepting(2, true);
        let d = n.determinize().minimize();
        assert!(d.accepts(&[1]));
        assert!(d.accepts(&[2]));
        assert!(!d.accepts(&[0]));
        assert!(!d.accepts(&[1, 1]));
        assert_eq!(d.n_states(), 2);
    }

    #[test]
    fn epsilon_closure() {
        let a = Alphabet::uniform(1, 1);
        let mut n = Nfa::new(a, 3);
        n.set_initial(vec![0]);
        n.add_epsilon(0, 1);
        n.add_transition(1, 1, 2);
        n.set_accepting(2, true);
        let d = n.determinize();
        assert!(d.accepts(&[1]));
        assert!(!d.accepts(&[]));
    }
}
