//! Definition-level computation of the sequences the tool reasons about.
//! Everything here is brute force on purpose: these values are the ground
//! truth that guessed automata and compiled formulas are checked against.

use std::collections::HashMap;

use thiserror::Error;

use crate::automata::{Dfao, StateId};
use crate::numeration::{NumerationError, NumerationSystem};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("morphism: {0}")]
    Morphism(String),
    #[error(transparent)]
    Numeration(#[from] NumerationError),
}

/// A letter substitution with an optional output coding.
#[derive(Debug, Clone)]
pub struct Morphism {
    /// `images[letter]` is the image word of that letter.
    images: Vec<Vec<u8>>,
    coding: Option<Vec<i64>>,
}

impl Morphism {
    pub fn new(images: Vec<Vec<u8>>) -> Result<Self, OracleError> {
        let n = images.len() as u8;
        for (l, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(OracleError::Morphism(format!("letter {l} has empty image")));
            }
            if img.iter().any(|&c| c >= n) {
                return Err(OracleError::Morphism(format!(
                    "image of letter {l} uses an undeclared letter"
                )));
            }
        }
        Ok(Morphism {
            images,
            coding: None,
        })
    }

    pub fn with_coding(mut self, coding: Vec<i64>) -> Result<Self, OracleError> {
        if coding.len() != self.images.len() {
            return Err(OracleError::Morphism(
                "coding must assign an output to every letter".into(),
            ));
        }
        self.coding = Some(coding);
        Ok(self)
    }

    /// The generator of the Kimberling word: 1 -> 110, 0 -> 11.
    /// Letters are their own outputs.
    pub fn kimberling() -> Self {
        Morphism::new(vec![vec![1, 1], vec![1, 1, 0]]).unwrap()
    }

    /// 0 -> 01, 1 -> 0010 (the parity word generator).
    pub fn parity() -> Self {
        Morphism::new(vec![vec![0, 1], vec![0, 0, 1, 0]]).unwrap()
    }

    /// 0 -> 012, 1 -> 012, 2 -> 01, with coding 0,2 -> 0 and 1 -> 1; the
    /// three-letter form of the parity word read off a transition diagram.
    pub fn parity_three_letter() -> Self {
        Morphism::new(vec![vec![0, 1, 2], vec![0, 1, 2], vec![0, 1]])
            .unwrap()
            .with_coding(vec![0, 1, 0])
            .unwrap()
    }

    pub fn letters(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, letter: u8) -> &[u8] {
        &self.images[letter as usize]
    }

    pub fn apply(&self, word: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(word.len() * 2);
        for &l in word {
            out.extend_from_slice(&self.images[l as usize]);
        }
        out
    }

    /// n-fold application to a single letter.
    pub fn iterate(&self, seed: u8, n: usize) -> Vec<u8> {
        let mut w = vec![seed];
        for _ in 0..n {
            w = self.apply(&w);
        }
        w
    }

    pub fn code(&self, word: &[u8]) -> Vec<i64> {
        match &self.coding {
            Some(c) => word.iter().map(|&l| c[l as usize]).collect(),
            None => word.iter().map(|&l| l as i64).collect(),
        }
    }

    /// Prefix of the unique fixed point starting with `seed`, of length at
    /// least `len`. The seed must be prolongable: its image must start with
    /// the seed itself.
    pub fn fixed_point(&self, seed: u8, len: usize) -> Result<Vec<u8>, OracleError> {
        if seed as usize >= self.letters() || self.images[seed as usize].first() != Some(&seed) {
            return Err(OracleError::Morphism(format!(
                "letter {seed} is not prolongable"
            )));
        }
        let mut w = vec![seed];
        while w.len() < len {
            let grown = self.apply(&w);
            if grown.len() == w.len() {
                return Err(OracleError::Morphism("morphism is not growing".into()));
            }
            w = grown;
        }
        Ok(w)
    }

    /// DFAO over the given numeration system, one state per letter reachable
    /// from `seed`: the transition from a letter on digit `d` goes to the
    /// `d`-th letter of its image and is absent when the image is shorter.
    pub fn to_dfao(&self, seed: u8, sys: &NumerationSystem) -> Result<Dfao, OracleError> {
        for img in &self.images {
            if img.len() > sys.digit_bound() as usize + 1 {
                return Err(OracleError::Morphism(format!(
                    "image length {} exceeds digit range of {}",
                    img.len(),
                    sys.name()
                )));
            }
        }
        // States in first-visit order from the seed, so the seed is state 0.
        let mut order: Vec<u8> = vec![seed];
        let mut index: HashMap<u8, StateId> = HashMap::new();
        index.insert(seed, 0);
        let mut head = 0;
        while head < order.len() {
            let l = order[head];
            head += 1;
            for &m in self.image(l) {
                index.entry(m).or_insert_with(|| {
                    order.push(m);
                    (order.len() - 1) as StateId
                });
            }
        }
        let outputs: Vec<i64> = order
            .iter()
            .map(|&l| match &self.coding {
                Some(c) => c[l as usize],
                None => l as i64,
            })
            .collect();
        let mut dfao = Dfao::new(sys.alphabet(1), outputs);
        for (s, &l) in order.iter().enumerate() {
            for (d, &m) in self.image(l).iter().enumerate() {
                dfao.set_transition(s as StateId, d as u16, index[&m]);
            }
        }
        Ok(dfao)
    }
}

/// Memo tables for the sequences. Callers own an instance; cached and
/// uncached evaluation agree by construction.
#[derive(Debug, Default)]
pub struct SequenceCache {
    g: Vec<u64>,
    /// k[i] holds the (i+1)-st letter of the infinite word, i.e. k_{i+1}.
    k: Vec<u8>,
    a: Vec<u64>,
    b: Vec<u64>,
    q: Vec<u64>,
    /// For Q: q_sums[i] = Q(i) + 2i, value -> indices m with that sum.
    q_sums: HashMap<u64, Vec<u64>>,
    /// For Q: occurrence count of each value among Q(1..last).
    q_counts: HashMap<u64, u64>,
    q_mex: u64,
    q_present: Vec<bool>,
    h: Vec<u64>,
}

impl SequenceCache {
    pub fn new() -> Self {
        SequenceCache::default()
    }

    /// Gutkovskiy's recurrence: g(0) = 0, g(n) = n - g(floor(g(n-1)/2)).
    pub fn g(&mut self, n: u64) -> u64 {
        if self.g.is_empty() {
            self.g.push(0);
        }
        while (self.g.len() as u64) <= n {
            let i = self.g.len() as u64;
            let inner = self.g[i as usize - 1] / 2;
            assert!(
                inner < i,
                "recurrence self-reference escaped its range at n = {i}"
            );
            let v = i - self.g[inner as usize];
            self.g.push(v);
        }
        self.g[n as usize]
    }

    fn grow_k(&mut self, len: usize) {
        if self.k.len() >= len {
            return;
        }
        let m = Morphism::kimberling();
        let mut w = if self.k.is_empty() { vec![1u8] } else { std::mem::take(&mut self.k) };
        while w.len() < len {
            w = m.apply(&w);
        }
        self.k = w;
    }

    /// 1-based prefix of the infinite word (k_1 k_2 ...).
    pub fn k_prefix(&mut self, len: usize) -> &[u8] {
        self.grow_k(len);
        &self.k[..len]
    }

    /// k(0) = 0 by convention; k(n) is the n-th letter for n >= 1.
    pub fn k(&mut self, n: u64) -> u8 {
        if n == 0 {
            return 0;
        }
        self.grow_k(n as usize);
        self.k[n as usize - 1]
    }

    fn grow_positions(&mut self, n: u64) {
        if self.a.is_empty() {
            self.a.push(0);
            self.b.push(0);
        }
        let mut scanned = (self.a.len() - 1) + (self.b.len() - 1);
        while (self.a.len() as u64) <= n || (self.b.len() as u64) <= n {
            scanned += 1;
            let letter = self.k(scanned as u64);
            if letter == 1 {
                self.a.push(scanned as u64);
            } else {
                self.b.push(scanned as u64);
            }
        }
    }

    /// Position of the n-th one in the infinite word (1-based); A(0) = 0.
    pub fn a(&mut self, n: u64) -> u64 {
        self.grow_positions(n);
        self.a[n as usize]
    }

    /// Position of the n-th zero in the infinite word (1-based); B(0) = 0.
    pub fn b(&mut self, n: u64) -> u64 {
        self.grow_positions(n);
        self.b[n as usize]
    }

    /// The self-referential sequence Q: Q(n) = n for n <= 1; Q(n) = Q(m)
    /// when n = Q(m) + 2m and Q(m) occurs exactly once before index n;
    /// otherwise the least positive integer not yet used. Two qualifying
    /// indices with different values would make the definition ambiguous;
    /// that is a hard error.
    pub fn q(&mut self, n: u64) -> u64 {
        if self.q.is_empty() {
            self.q.push(0);
            self.q_mex = 1;
            self.q_present = vec![false; 2];
        }
        while (self.q.len() as u64) <= n {
            let i = self.q.len() as u64;
            let value = if i <= 1 {
                i
            } else {
                let mut chosen: Option<u64> = None;
                if let Some(ms) = self.q_sums.get(&i) {
                    for &m in ms {
                        let qm = self.q[m as usize];
                        if self.q_counts.get(&qm).copied().unwrap_or(0) == 1 {
                            match chosen {
                                None => chosen = Some(qm),
                                Some(prev) if prev != qm => panic!(
                                    "ambiguous recurrence at n = {i}: candidates {prev} and {qm}"
                                ),
                                Some(_) => {}
                            }
                        }
                    }
                }
                match chosen {
                    Some(v) => v,
                    None => {
                        let mut mex = self.q_mex;
                        while (mex as usize) < self.q_present.len() && self.q_present[mex as usize] {
                            mex += 1;
                        }
                        self.q_mex = mex;
                        mex
                    }
                }
            };
            // Record bookkeeping for index i.
            if i >= 1 {
                *self.q_counts.entry(value).or_insert(0) += 1;
                if self.q_present.len() as u64 <= value {
                    self.q_present.resize(value as usize + 1, false);
                }
                self.q_present[value as usize] = true;
                let sum = value + 2 * i;
                self.q_sums.entry(sum).or_default().push(i);
            }
            self.q.push(value);
        }
        self.q[n as usize]
    }

    /// Parity of g.
    pub fn g_prime(&mut self, n: u64) -> u8 {
        (self.g(n) % 2) as u8
    }

    /// Partial sums of the parity sequence: h(n) = sum of g'(i) for i < n.
    pub fn h_sum(&mut self, n: u64) -> u64 {
        if self.h.is_empty() {
            self.h.push(0);
        }
        while (self.h.len() as u64) <= n {
            let i = self.h.len() as u64;
            let inc = self.g_prime(i - 1) as u64;
            let v = self.h[i as usize - 1] + inc;
            self.h.push(v);
        }
        self.h[n as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_table() {
        let mut c = SequenceCache::new();
        let expect = [0u64, 1, 2, 2, 3, 4, 4, 5, 6, 7, 8, 8];
        for (n, &v) in expect.iter().enumerate() {
            assert_eq!(c.g(n as u64), v, "g({n})");
        }
    }

    #[test]
    fn k_table_and_prefix() {
        let mut c = SequenceCache::new();
        let expect = [0u8, 1, 1, 0, 1, 1, 0, 1, 1, 1, 1, 0];
        for (n, &v) in expect.iter().enumerate() {
            assert_eq!(c.k(n as u64), v, "k({n})");
        }
        let prefix: String = c.k_prefix(10).iter().map(|d| d.to_string()).collect();
        assert_eq!(prefix, "1101101111");
    }

    #[test]
    fn position_tables() {
        let mut c = SequenceCache::new();
        let a = [0u64, 1, 2, 4, 5, 7, 8, 9, 10, 12, 13, 15, 16, 17, 18, 20];
        let b = [0u64, 3, 6, 11, 14, 19, 22, 25, 28, 33, 36, 41, 44, 47, 50, 55];
        for n in 0..16u64 {
            assert_eq!(c.a(n), a[n as usize], "A({n})");
            assert_eq!(c.b(n), b[n as usize], "B({n})");
        }
    }

    #[test]
    fn q_table() {
        let mut c = SequenceCache::new();
        let q = [0u64, 1, 2, 1, 3, 4, 2, 5, 6, 7, 8, 3, 9, 10, 4, 11];
        for n in 0..16u64 {
            assert_eq!(c.q(n), q[n as usize], "Q({n})");
        }
    }

    #[test]
    fn parity_and_partial_sums() {
        let mut c = SequenceCache::new();
        let gp = [0u8, 1, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 1];
        let h = [0u64, 0, 1, 1, 1, 2, 2, 2, 3, 3, 4, 4, 4, 5, 5, 5, 6, 6, 7, 7, 7];
        for n in 0..21u64 {
            assert_eq!(c.g_prime(n), gp[n as usize], "g'({n})");
            assert_eq!(c.h_sum(n), h[n as usize], "h({n})");
        }
    }

    #[test]
    fn partial_sum_identity() {
        // g(n) equals the number of ones among the first n letters.
        let mut c = SequenceCache::new();
        let mut acc = 0u64;
        for n in 1..=20_000u64 {
            acc += c.k(n) as u64;
            assert_eq!(c.g(n), acc, "n = {n}");
        }
    }

    #[test]
    fn positions_complement() {
        let mut c = SequenceCache::new();
        let mut seen = vec![false; 2001];
        let mut n = 1;
        while c.a(n) <= 2000 {
            seen[c.a(n) as usize] = true;
            n += 1;
        }
        n = 1;
        while c.b(n) <= 2000 {
            assert!(!seen[c.b(n) as usize], "positions overlap");
            seen[c.b(n) as usize] = true;
            n += 1;
        }
        assert!(seen[1..].iter().all(|&s| s), "positions do not cover");
    }

    #[test]
    fn morphism_dfao_matches_file_layout() {
        // The generator morphism gives the two-state output automaton with
        // state 0 (output 1) sending digit 2 to state 1 (output 0), whose
        // only edges are digits 0 and 1 back to state 0.
        let sys = NumerationSystem::kim();
        let dfao = Morphism::kimberling().to_dfao(1, &sys).unwrap();
        assert_eq!(dfao.n_states(), 2);
        assert_eq!(dfao.output(0), 1);
        assert_eq!(dfao.output(1), 0);
        assert_eq!(dfao.step(0, 2), Some(1));
        assert_eq!(dfao.step(1, 0), Some(0));
        assert_eq!(dfao.step(1, 2), None);
    }

    #[test]
    fn dfao_computes_shifted_sequence() {
        // The automaton on the representation of n yields k(n+1).
        let sys = NumerationSystem::kim();
        let dfao = Morphism::kimberling().to_dfao(1, &sys).unwrap();
        let mut c = SequenceCache::new();
        for n in 0..10_000u64 {
            let word: Vec<u16> = sys.to_canonical(n).iter().map(|&d| d as u16).collect();
            assert_eq!(dfao.output_of(&word).unwrap(), c.k(n + 1) as i64, "n = {n}");
        }
        // k_9 = 1 via the representation of 8.
        let w: Vec<u16> = sys.to_canonical(8).iter().map(|&d| d as u16).collect();
        assert_eq!(dfao.output_of(&w).unwrap(), 1);
    }

    #[test]
    fn fixed_points() {
        let h = Morphism::kimberling();
        let prefix = h.fixed_point(1, 8).unwrap();
        let s: String = prefix[..8].iter().map(|d| d.to_string()).collect();
        assert_eq!(s, "11011011");
        assert!(h.fixed_point(0, 5).is_err()); // 0 -> 11 is not prolongable

        // The three-letter form codes to the parity word.
        let u = Morphism::parity();
        let r = Morphism::parity_three_letter();
        for n in 1..=10usize {
            let lhs = u.iterate(0, n);
            let mut rhs_word = vec![0u8, 1];
            for _ in 0..n - 1 {
                rhs_word = r.apply(&rhs_word);
            }
            let rhs: Vec<u8> = r.code(&rhs_word).iter().map(|&x| x as u8).collect();
            assert_eq!(lhs, rhs, "depth {n}");
            // and the companion identity on the other letter
            let lhs1 = u.iterate(1, n);
            let mut rhs1_word = vec![2u8, 0, 1, 2];
            for _ in 0..n - 1 {
                rhs1_word = r.apply(&rhs1_word);
            }
            let rhs1: Vec<u8> = r.code(&rhs1_word).iter().map(|&x| x as u8).collect();
            assert_eq!(lhs1, rhs1, "depth {n} (companion)");
        }
    }

    #[test]
    fn parity_word_matches_parity_sequence() {
        let u = Morphism::parity();
        let w = u.fixed_point(0, 1000).unwrap();
        let mut c = SequenceCache::new();
        for n in 0..1000u64 {
            assert_eq!(w[n as usize], c.g_prime(n), "n = {n}");
        }
    }

    #[test]
    fn word_blocks_compose() {
        // h^n(1) = h^{n-1}(1) h^{n-1}(1) h^{n-2}(1) h^{n-2}(1) as strings.
        let h = Morphism::kimberling();
        for n in 2..=12usize {
            let kn = h.iterate(1, n);
            let k1 = h.iterate(1, n - 1);
            let k2 = h.iterate(1, n - 2);
            let mut glued = k1.clone();
            glued.extend_from_slice(&k1);
            glued.extend_from_slice(&k2);
            glued.extend_from_slice(&k2);
            assert_eq!(kn, glued, "depth {n}");
        }
    }
}
