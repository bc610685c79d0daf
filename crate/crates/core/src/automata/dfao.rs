use std::collections::HashMap;

use super::dfa::Dfa;
use super::{Alphabet, AutomatonError, StateId, Symbol, NO_STATE};

/// Deterministic automaton with per-state output. State 0 is initial; the
/// transition map may be partial, but the run of any canonical input stays
/// defined for the automata built here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfao {
    alphabet: Alphabet,
    outputs: Vec<i64>,
    next: Vec<StateId>,
}

impl Dfao {
    pub fn new(alphabet: Alphabet, outputs: Vec<i64>) -> Self {
        let nsym = alphabet.symbol_count();
        let n = outputs.len();
        Dfao {
            alphabet,
            outputs,
            next: vec![NO_STATE; n * nsym],
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn n_states(&self) -> usize {
        self.outputs.len()
    }

    pub fn output(&self, s: StateId) -> i64 {
        self.outputs[s as usize]
    }

    pub fn outputs(&self) -> &[i64] {
        &self.outputs
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

    /// Output of the state reached on `word`.
    pub fn output_of(&self, word: &[Symbol]) -> Result<i64, AutomatonError> {
        let mut s = 0;
        for &sym in word {
            s = self.step(s, sym).ok_or(AutomatonError::DeadRun(sym))?;
        }
        Ok(self.outputs[s as usize])
    }

    /// Acceptor of the words whose output equals `value`.
    pub fn acceptor_for_output(&self, value: i64) -> Dfa {
        let mut d = Dfa::new(self.alphabet.clone(), self.n_states());
        for s in 0..self.n_states() as StateId {
            if self.outputs[s as usize] == value {
                d.set_accepting(s, true);
            }
            for sym in self.alphabet.symbols() {
                if let Some(t) = self.step(s, sym) {
                    d.set_transition(s, sym, t);
                }
            }
        }
        d.minimize()
    }

    /// Distinct output values, sorted.
    pub fn output_values(&self) -> Vec<i64> {
        let mut v = self.outputs.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Merge output-equivalent states and renumber canonically (breadth
    /// first, edges in symbol order). Unreachable states are dropped; the
    /// transition map stays partial where every run was dead.
    pub fn minimize(&self) -> Dfao {
        let nsym = self.alphabet.symbol_count();
        // Totalized view with a sink carrying a pseudo-output.
        let n = self.n_states();
        let sink = n;
        let total = n + 1;
        // Initial partition by output (sink gets its own class).
        let mut out_classes: Vec<i64> = self.output_values();
        let class_of_output =
            |o: i64, outs: &Vec<i64>| outs.binary_search(&o).unwrap() as u32;
        let mut class: Vec<u32> = (0..total)
            .map(|s| {
                if s == sink {
                    out_classes.len() as u32
                } else {
                    class_of_output(self.outputs[s], &out_classes)
                }
            })
            .collect();
        let mut n_classes = out_classes.len() + 1;
        let step_total = |s: usize, sym: usize| -> usize {
            if s == sink {
                sink
            } else {
                match self.next[s * nsym + sym] {
                    NO_STATE => sink,
                    t => t as usize,
                }
            }
        };
        let mut rows: Vec<u32> = vec![0; total * (nsym + 1)];
        let mut by_row: Vec<u32> = (0..total as u32).collect();
        loop {
            for s in 0..total {
                let row = &mut rows[s * (nsym + 1)..(s + 1) * (nsym + 1)];
                row[0] = class[s];
                for sym in 0..nsym {
                    row[1 + sym] = class[step_total(s, sym)];
                }
            }
            let row_of = |s: u32| &rows[s as usize * (nsym + 1)..(s as usize + 1) * (nsym + 1)];
            by_row.sort_unstable_by(|&a, &b| row_of(a).cmp(row_of(b)));
            let mut new_classes = 0u32;
            let mut new_class = vec![0u32; total];
            for i in 0..total {
                if i > 0 && row_of(by_row[i]) != row_of(by_row[i - 1]) {
                    new_classes += 1;
                }
                new_class[by_row[i] as usize] = new_classes;
            }
            let count = new_classes as usize + 1;
            if count == n_classes {
                break;
            }
            n_classes = count;
            class = new_class;
        }
        out_classes.clear();

        let sink_class = class[sink];
        let mut reps = vec![u32::MAX; n_classes];
        for s in 0..total {
            let c = class[s] as usize;
            if reps[c] == u32::MAX {
                reps[c] = s as u32;
            }
        }
        let init_class = class[0];
        let mut renum = vec![u32::MAX; n_classes];
        let mut bfs = vec![init_class];
        renum[init_class as usize] = 0;
        let mut head = 0;
        while head < bfs.len() {
            let c = bfs[head];
            head += 1;
            let rep = reps[c as usize] as usize;
            for sym in 0..nsym {
                let tc = class[step_total(rep, sym)];
                if tc != sink_class && renum[tc as usize] == u32::MAX {
                    renum[tc as usize] = bfs.len() as u32;
                    bfs.push(tc);
                }
            }
        }
        let m = bfs.len();
        let mut outputs = vec![0i64; m];
        let mut next = vec![NO_STATE; m * nsym];
        for (new_id, &c) in bfs.iter().enumerate() {
            let rep = reps[c as usize] as usize;
            outputs[new_id] = if rep == sink { 0 } else { self.outputs[rep] };
            for sym in 0..nsym {
                let tc = class[step_total(rep, sym)];
                if tc != sink_class {
                    next[new_id * nsym + sym] = renum[tc as usize];
                }
            }
        }
        Dfao {
            alphabet: self.alphabet.clone(),
            outputs,
            next,
        }
    }
}

/// Build a DFAO from disjoint acceptors: the result outputs `i + 1` on words
/// accepted by `acceptors[i]` and 0 elsewhere. Overlap is an error naming a
/// witness word.
pub fn combine_acceptors(
    alphabet: &Alphabet,
    acceptors: &[&Dfa],
) -> Result<Dfao, String> {
    for a in acceptors {
        if a.alphabet() != alphabet {
            return Err("combine: acceptors must share one alphabet".into());
        }
    }
    let nsym = alphabet.symbol_count();
    let totals: Vec<Dfa> = acceptors.iter().map(|a| a.totalize()).collect();
    let mut ids: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let start: Vec<StateId> = vec![0; totals.len()];
    ids.insert(start.clone(), 0);
    let mut states = vec![start];
    let mut parent: Vec<(StateId, Symbol)> = vec![(0, 0)];
    let mut outputs = Vec::new();
    let mut next = Vec::new();
    let mut head = 0;
    while head < states.len() {
        let tuple = states[head].clone();
        let mut out = 0i64;
        for (i, (t, s)) in totals.iter().zip(&tuple).enumerate() {
            if t.is_accepting(*s) {
                if out != 0 {
                    // Reconstruct a witness word for the overlap.
                    let mut w = Vec::new();
                    let mut cur = head as StateId;
                    while cur != 0 {
                        let (p, sym) = parent[cur as usize];
                        w.push(sym);
                        cur = p;
                    }
                    w.reverse();
                    return Err(format!(
                        "combine: acceptors {} and {} overlap on word {w:?}",
                        out - 1,
                        i
                    ));
                }
                out = i as i64 + 1;
            }
        }
        outputs.push(out);
        for sym in 0..nsym as Symbol {
            let target: Vec<StateId> = totals
                .iter()
                .zip(&tuple)
                .map(|(t, s)| t.step(*s, sym).expect("totalized"))
                .collect();
            let id = *ids.entry(target.clone()).or_insert_with(|| {
                states.push(target);
                parent.push((head as StateId, sym));
                (states.len() - 1) as StateId
            });
            next.push(id);
        }
        head += 1;
    }
    let dfao = Dfao {
        alphabet: alphabet.clone(),
        outputs,
        next,
    };
    Ok(dfao.minimize())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_dfao() -> Dfao {
        // Outputs 1 until a digit 2 is read, then 0; no way back.
        let a = Alphabet::uniform(1, 2);
        let mut d = Dfao::new(a, vec![1, 0]);
        d.set_transition(0, 0, 0);
        d.set_transition(0, 1, 0);
        d.set_transition(0, 2, 1);
        d.set_transition(1, 0, 1);
        d.set_transition(1, 1, 1);
        d
    }

    #[test]
    fn output_of_walks_the_word() {
        let d = tiny_dfao();
        assert_eq!(d.output_of(&[]).unwrap(), 1);
        assert_eq!(d.output_of(&[1, 0]).unwrap(), 1);
        assert_eq!(d.output_of(&[2]).unwrap(), 0);
        assert!(d.output_of(&[2, 2]).is_err()); // dead run
    }

    #[test]
    fn acceptor_selects_output() {
        let d = tiny_dfao();
        let acc = d.acceptor_for_output(0);
        assert!(acc.accepts(&[2]));
        assert!(acc.accepts(&[2, 1]));
        assert!(!acc.accepts(&[1]));
    }

    #[test]
    fn combine_two_disjoint() {
        let alpha = Alphabet::uniform(1, 1);
        // acceptor 1: words of odd length; acceptor 2: empty word only.
        let mut odd = Dfa::new(alpha.clone(), 2);
        for sym in 0..2u16 {
            odd.set_transition(0, sym, 1);
            odd.set_transition(1, sym, 0);
        }
        odd.set_accepting(1, true);
        let mut eps = Dfa::new(alpha.clone(), 1);
        eps.set_accepting(0, true);
        let dfao = combine_acceptors(&alpha, &[&odd, &eps]).unwrap();
        assert_eq!(dfao.output_of(&[0]).unwrap(), 1);
        assert_eq!(dfao.output_of(&[]).unwrap(), 2);
        assert_eq!(dfao.output_of(&[0, 1]).unwrap(), 0);
    }

    #[test]
    fn combine_detects_overlap() {
        let alpha = Alphabet::uniform(1, 1);
        let all = Dfa::accept_all(alpha.clone());
        let err = combine_acceptors(&alpha, &[&all, &all]).unwrap_err();
        assert!(err.contains("overlap"));
    }
}
