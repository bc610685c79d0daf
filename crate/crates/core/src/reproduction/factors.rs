//! Brute-force factor analyses of the infinite binary word: right-special
//! factors, subword complexity, repetitions. These are the ground-truth side
//! of the two-layer verification; the automaton side must agree with them.

use std::collections::HashMap;

use crate::automata::{Dfa, ProductMode};
use crate::numeration::{NumerationError, NumerationSystem};
use crate::oracles::SequenceCache;

/// A prefix of the infinite word with derived factor tables.
/// `prefix[i]` is the (i+1)-st letter.
pub struct FactorIndex {
    prefix: Vec<u8>,
}

const HASH_BASE: u128 = 0x9ddfea08eb382d69;

impl FactorIndex {
    pub fn new(len: usize) -> Self {
        let mut cache = SequenceCache::new();
        FactorIndex {
            prefix: cache.k_prefix(len).to_vec(),
        }
    }

    pub fn from_prefix(prefix: Vec<u8>) -> Self {
        FactorIndex { prefix }
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    fn guard(&self, n: usize) -> Result<(), String> {
        if n == 0 || self.prefix.len() < 4 * n {
            return Err(format!(
                "prefix of length {} is too short for factor length {n} (need 4x)",
                self.prefix.len()
            ));
        }
        Ok(())
    }

    /// Rolling-hash map over all length-n windows: hash -> bitmask of the
    /// letters that follow some occurrence (bit 2 marks "occurs at all").
    fn window_extensions(&self, n: usize) -> HashMap<u128, u8> {
        let w = &self.prefix;
        let mut pow = 1u128;
        for _ in 0..n - 1 {
            pow = pow.wrapping_mul(HASH_BASE);
        }
        let mut h = 0u128;
        for &c in &w[..n] {
            h = h.wrapping_mul(HASH_BASE).wrapping_add(c as u128 + 1);
        }
        let mut map: HashMap<u128, u8> = HashMap::new();
        for i in 0..=w.len() - n {
            let mut bits = 4u8;
            if i + n < w.len() {
                bits |= 1 << w[i + n];
            }
            *map.entry(h).or_insert(0) |= bits;
            if i + n < w.len() {
                h = h
                    .wrapping_sub(pow.wrapping_mul(w[i] as u128 + 1))
                    .wrapping_mul(HASH_BASE)
                    .wrapping_add(w[i + n] as u128 + 1);
            }
        }
        map
    }

    /// Number of distinct length-n factors of the prefix.
    pub fn complexity(&self, n: usize) -> Result<u64, String> {
        self.guard(n)?;
        Ok(self.window_extensions(n).len() as u64)
    }

    /// Number of length-n right-special factors (factors w with both w0 and
    /// w1 occurring).
    pub fn rs_count(&self, n: usize) -> Result<usize, String> {
        self.guard(n)?;
        Ok(self
            .window_extensions(n)
            .values()
            .filter(|&&bits| bits & 3 == 3)
            .count())
    }
}

/// Result of a repetition scan.
#[derive(Debug, Clone, Copy)]
pub struct ScanResult {
    pub exponent: f64,
    pub period: usize,
    pub length: usize,
}

/// Maximum exponent over all windows of the prefix with least period at most
/// `max_period`: for each period p, the longest run of positions i with
/// w[i] = w[i+p] yields the longest window with period p. Since a window of
/// exponent at least 5 has period at most len/5, scanning periods up to
/// len/5 determines the true maximum whenever that maximum is at least 5.
pub fn max_exponent_scan(prefix: &[u8], max_period: usize) -> ScanResult {
    let mut best = ScanResult {
        exponent: 0.0,
        period: 1,
        length: 0,
    };
    for p in 1..=max_period.min(prefix.len() - 1) {
        let mut run = 0usize;
        let mut longest = 0usize;
        for i in 0..prefix.len() - p {
            if prefix[i] == prefix[i + p] {
                run += 1;
                longest = longest.max(run);
            } else {
                run = 0;
            }
        }
        let length = longest + p;
        let exponent = length as f64 / p as f64;
        if exponent > best.exponent {
            best = ScanResult {
                exponent,
                period: p,
                length,
            };
        }
    }
    best
}

/// Check that the prefix contains a factor of length `n` whose least period
/// is exactly `p`. A factor with both period p and some smaller period q
/// has, whenever p + q fits inside it, the period gcd(p, q); for n > 2p it
/// therefore suffices to rule out the proper divisors of p.
pub fn confirm_least_period(prefix: &[u8], n: usize, p: usize) -> Result<(), String> {
    if p == 0 || n <= 2 * p {
        return Err(format!("degenerate repetition ({n}, {p})"));
    }
    if prefix.len() < n {
        return Err(format!(
            "prefix of length {} cannot contain a factor of length {n}",
            prefix.len()
        ));
    }
    let divisors: Vec<usize> = (1..p).filter(|d| p % d == 0).collect();
    let mut run = 0usize;
    for i in 0..prefix.len() - p {
        if prefix[i] == prefix[i + p] {
            run += 1;
        } else {
            run = 0;
            continue;
        }
        // window [start, start + run + p) has period p
        if run + p >= n {
            let start = i + 1 + p - n;
            let w = &prefix[start..start + n];
            let has_period = |q: usize| (0..n - q).all(|j| w[j] == w[j + q]);
            if !divisors.iter().any(|&d| has_period(d)) {
                return Ok(());
            }
        }
    }
    Err(format!(
        "no factor of length {n} with least period {p} found in the prefix"
    ))
}

/// Longest window with period exactly-p-as-a-period (not necessarily least).
pub fn longest_window_for_period(prefix: &[u8], p: usize) -> usize {
    let mut run = 0usize;
    let mut longest = 0usize;
    for i in 0..prefix.len().saturating_sub(p) {
        if prefix[i] == prefix[i + p] {
            run += 1;
            longest = longest.max(run);
        } else {
            run = 0;
        }
    }
    longest + p
}

/// Count accepted canonical representations of the values 1..=bound.
pub fn count_accepted_values(
    dfa: &Dfa,
    sys: &NumerationSystem,
    bound: u64,
) -> Result<u64, NumerationError> {
    // Restrict to value words: nonzero leading digit.
    let alphabet = sys.alphabet(1);
    let mut nz = Dfa::new(alphabet.clone(), 2);
    for d in 1..=sys.digit_bound() {
        nz.set_transition(0, d as u16, 1);
    }
    for d in 0..=sys.digit_bound() {
        nz.set_transition(1, d as u16, 1);
    }
    nz.set_accepting(1, true);
    let p = dfa.product(&nz, ProductMode::And).expect("same alphabet");

    let digits = sys.to_canonical(bound);
    let len = digits.len();
    // completions[s][l] = number of accepted words of length l from state s
    let n = p.n_states();
    let mut completions = vec![0u64; n * (len + 1)];
    for s in 0..n {
        completions[s * (len + 1)] = p.is_accepting(s as u32) as u64;
    }
    for l in 1..=len {
        for s in 0..n {
            let mut acc = 0u64;
            for sym in alphabet.symbols() {
                if let Some(t) = p.step(s as u32, sym) {
                    acc = acc
                        .checked_add(completions[t as usize * (len + 1) + l - 1])
                        .ok_or_else(|| NumerationError::Overflow("value counting".into()))?;
                }
            }
            completions[s * (len + 1) + l] = acc;
        }
    }
    // Words strictly shorter than (bound)'s representation...
    let mut count = 0u64;
    for l in 1..len {
        count += completions[l];
    }
    // ...plus equal-length words below it, digit by digit...
    let mut state = Some(0u32);
    for (pos, &d) in digits.iter().enumerate() {
        let Some(s) = state else { break };
        for smaller in 0..d {
            if let Some(t) = p.step(s, smaller as u16) {
                count += completions[t as usize * (len + 1) + (len - pos - 1)];
            }
        }
        state = p.step(s, d as u16);
    }
    // ...plus the bound itself.
    if let Some(s) = state {
        if p.is_accepting(s) {
            count += 1;
        }
    }
    Ok(count)
}

/// Exact subword complexity via the two-special automaton: the complexity at
/// n is 1 + n + #{1 <= j <= n-1 : two right-special factors of length j}.
pub fn complexity_via_automaton(
    hastwo: &Dfa,
    sys: &NumerationSystem,
    n: u64,
) -> Result<u64, NumerationError> {
    debug_assert!(n >= 1);
    Ok(1 + n + count_accepted_values(hastwo, sys, n - 1)?)
}

/// Extreme values of complexity(n)/n sampled at the boundaries of的 runs
/// of two-special lengths, which is where the ratio peaks and bottoms out.
pub fn complexity_limits(
    hastwo: &Dfa,
    sys: &NumerationSystem,
    depth: usize,
) -> Result<(f64, f64), NumerationError> {
    let mut hi = f64::MIN;
    let mut lo = f64::MAX;
    let mut probe = |n: u64| -> Result<(), NumerationError> {
        if n < 2 {
            return Ok(());
        }
        let rho = complexity_via_automaton(hastwo, sys, n)? as f64;
        let ratio = rho / n as f64;
        hi = hi.max(ratio);
        lo = lo.min(ratio);
        Ok(())
    };
    for i in 0..=depth {
        // First family: runs of length basis[2i] starting at
        // basis[1] + basis[3] + ... + basis[2i+1].
        let mut x = 0u64;
        for j in 0..=i {
            x = x
                .checked_add(sys.basis_term(2 * j + 1)?)
                .ok_or_else(|| NumerationError::Overflow("limit endpoints".into()))?;
        }
        let end = x
            .checked_add(sys.basis_term(2 * i)?)
            .ok_or_else(|| NumerationError::Overflow("limit endpoints".into()))?;
        probe(x)?;
        probe(end)?;
        // Second family: runs of length basis[2i+1] starting at
        // basis[0] + basis[2] + ... + basis[2i+2].
        let mut y = 0u64;
        for j in 0..=i + 1 {
            y = y
                .checked_add(sys.basis_term(2 * j)?)
                .ok_or_else(|| NumerationError::Overflow("limit endpoints".into()))?;
        }
        let end = y
            .checked_add(sys.basis_term(2 * i + 1)?)
            .ok_or_else(|| NumerationError::Overflow("limit endpoints".into()))?;
        probe(y)?;
        probe(end)?;
    }
    Ok((hi, lo))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complexity_of_short_lengths() {
        let idx = FactorIndex::new(4000);
        assert_eq!(idx.complexity(1).unwrap(), 2);
        // the word is not eventually periodic, so complexity strictly grows
        let mut prev = 2;
        for n in 2..50 {
            let c = idx.complexity(n).unwrap();
            assert!(c > prev, "complexity must grow at n = {n}");
            prev = c;
        }
    }

    #[test]
    fn right_special_counts_are_one_or_two() {
        let idx = FactorIndex::new(4000);
        for n in 1..=500 {
            let rs = idx.rs_count(n).unwrap();
            assert!(rs == 1 || rs == 2, "rs_count({n}) = {rs}");
        }
    }

    #[test]
    fn complexity_increment_is_rs_count() {
        let idx = FactorIndex::new(6000);
        for n in 1..200 {
            let inc = idx.complexity(n + 1).unwrap() - idx.complexity(n).unwrap();
            assert_eq!(inc as usize, idx.rs_count(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn prefix_guard() {
        let idx = FactorIndex::new(100);
        assert!(idx.rs_count(30).is_err());
        assert!(idx.rs_count(0).is_err());
    }

    #[test]
    fn scan_finds_high_powers() {
        let idx = FactorIndex::new(40_000);
        let best = max_exponent_scan(idx.prefix(), 40_000 / 5);
        assert!(best.exponent >= 5.0, "found only {}", best.exponent);
        assert!(best.exponent < 5.1548, "found {}", best.exponent);
        confirm_least_period(idx.prefix(), best.length, best.period).unwrap();
    }

    #[test]
    fn count_values_against_enumeration() {
        // Count canonical words accepted by the canonical recognizer itself:
        // every value is accepted, so the count below n is n.
        let sys = NumerationSystem::kim();
        let rec = sys.canonical_recognizer();
        for bound in [1u64, 7, 8, 59, 60, 500, 1390] {
            assert_eq!(count_accepted_values(&rec, &sys, bound).unwrap(), bound);
        }
    }
}
