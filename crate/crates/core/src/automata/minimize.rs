//! DFA minimization by partition refinement.
//!
//! The pipeline is: drop unreachable states, totalize with an explicit sink,
//! refine the accepting/rejecting partition to a fixpoint, delete the
//! all-rejecting class again, and renumber states in breadth-first order with
//! edges visited in symbol order. The BFS renumbering makes the result
//! canonical: two automata have the same language iff minimization yields
//! byte-identical tables.

use super::dfa::Dfa;
use super::NO_STATE;

pub(crate) fn minimize_dfa(input: &Dfa) -> Dfa {
    let nsym = input.alphabet().symbol_count();

    // Reachable trim.
    let mut order = Vec::new();
    let mut index = vec![usize::MAX; input.n_states()];
    order.push(0u32);
    index[0] = 0;
    let mut head = 0;
    while head < order.len() {
        let s = order[head];
        head += 1;
        for sym in 0..nsym {
            if let Some(t) = input.step(s, sym as u16) {
                if index[t as usize] == usize::MAX {
                    index[t as usize] = order.len();
                    order.push(t);
                }
            }
        }
    }

    // Totalized view: states 0..n are the reachable ones, state n is the sink.
    let n = order.len();
    let sink = n;
    let total = n + 1;
    let mut next = vec![sink as u32; total * nsym];
    let mut accepting = vec![false; total];
    for (new_id, &old) in order.iter().enumerate() {
        accepting[new_id] = input.is_accepting(old);
        for sym in 0..nsym {
            if let Some(t) = input.step(old, sym as u16) {
                next[new_id * nsym + sym] = index[t as usize] as u32;
            }
        }
    }

    // Partition refinement. Classes are refined by (old class, successor
    // class per symbol); rows are compared exactly via sorting, so there is
    // no hashing and the result is deterministic.
    let mut class: Vec<u32> = accepting.iter().map(|&a| a as u32).collect();
    let mut n_classes = 2usize;
    let mut rows: Vec<u32> = vec![0; total * (nsym + 1)];
    let mut by_row: Vec<u32> = (0..total as u32).collect();
    loop {
        for s in 0..total {
            let row = &mut rows[s * (nsym + 1)..(s + 1) * (nsym + 1)];
            row[0] = class[s];
            for sym in 0..nsym {
                row[1 + sym] = class[next[s * nsym + sym] as usize];
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

    // Rebuild one state per class.
    let mut reps = vec![u32::MAX; n_classes];
    for s in 0..total {
        let c = class[s] as usize;
        if reps[c] == u32::MAX {
            reps[c] = s as u32;
        }
    }
    let sink_class = class[sink];

    // BFS renumbering from the initial class; edges into the sink class are
    // dropped, turning it back into the implicit rejecting sink.
    let init_class = class[0];
    if init_class == sink_class {
        return Dfa::empty(input.alphabet().clone());
    }
    let mut renum = vec![u32::MAX; n_classes];
    let mut bfs = vec![init_class];
    renum[init_class as usize] = 0;
    let mut head = 0;
    while head < bfs.len() {
        let c = bfs[head];
        head += 1;
        let rep = reps[c as usize] as usize;
        for sym in 0..nsym {
            let tc = class[next[rep * nsym + sym] as usize];
            if tc != sink_class && renum[tc as usize] == u32::MAX {
                renum[tc as usize] = bfs.len() as u32;
                bfs.push(tc);
            }
        }
    }

    let m = bfs.len();
    let mut out_next = vec![NO_STATE; m * nsym];
    let mut out_acc = vec![false; m];
    for (new_id, &c) in bfs.iter().enumerate() {
        let rep = reps[c as usize] as usize;
        out_acc[new_id] = accepting[rep];
        for sym in 0..nsym {
            let tc = class[next[rep * nsym + sym] as usize];
            if tc != sink_class {
                out_next[new_id * nsym + sym] = renum[tc as usize];
            }
        }
    }
    Dfa::from_parts(input.alphabet().clone(), out_acc, out_next)
}

#[cfg(test)]
mod tests {
    use super::super::testutil::words_upto;
    use super::super::{Alphabet, StateId};
    use super::*;
    use proptest::prelude::*;

    fn random_dfa(n: usize, seed: &[u8]) -> Dfa {
        // Deterministic "random" automaton from a byte seed.
        let a = Alphabet::uniform(1, 2);
        let mut d = Dfa::new(a, n);
        let mut k = 0usize;
        for s in 0..n as StateId {
            d.set_accepting(s, seed[k % seed.len()] % 3 == 0);
            k += 1;
            for sym in 0..3u16 {
                let b = seed[k % seed.len()] as usize;
                k += 1;
                if b % 5 != 0 {
                    d.set_transition(s, sym, (b % n) as StateId);
                }
            }
        }
        d
    }

    proptest! {
        #[test]
        fn minimize_preserves_language(seed in proptest::collection::vec(0u8..255, 16..64), n in 2usize..9) {
            let d = random_dfa(n, &seed);
            let m = d.minimize();
            prop_assert!(m.n_states() <= d.n_states() + 1);
            for w in words_upto(d.alphabet(), 5) {
                prop_assert_eq!(d.accepts(&w), m.accepts(&w));
            }
            // Canonicality: minimizing again changes nothing.
            prop_assert_eq!(m.minimize(), m);
        }
    }

    #[test]
    fn distinguishes_by_future() {
        // Two accepting states with different futures must stay separate.
        let a = Alphabet::uniform(1, 1);
        let mut d = Dfa::new(a, 3);
        d.set_accepting(1, true);
        d.set_accepting(2, true);
        d.set_transition(0, 0, 1);
        d.set_transition(0, 1, 2);
        d.set_transition(1, 0, 1);
        let m = d.minimize();
        assert_eq!(m.n_states(), 3);
    }
}
