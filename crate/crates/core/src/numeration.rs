//! Positional numeration systems built from a linear recurrence basis.
//!
//! The built-in `msd_kim` system has basis 1, 3, 8, 22, 60, … (each term is
//! twice the sum of the previous two), digits {0, 1, 2}, and canonical forms
//! characterized by "no factor 22, no leading zero". The empty word encodes
//! zero. A second instance (`msd_fib`, the Zeckendorf system) exists purely
//! as a cross-validation fixture.

use std::fmt;

use thiserror::Error;

use crate::automata::{Alphabet, Dfa, MultiTrackRegex, ProductMode};

#[derive(Debug, Error)]
pub enum NumerationError {
    #[error("arithmetic overflow computing {0}")]
    Overflow(String),
    #[error("digit {digit} exceeds bound {bound}")]
    BadDigit { digit: u8, bound: u8 },
    #[error("unsupported system for this construction: {0}")]
    Unsupported(String),
    #[error("bad system definition: {0}")]
    BadDefinition(String),
    #[error("precision budget exceeded: {0}")]
    Precision(String),
}

/// A numeration system: basis recurrence, digit bound, and the factor
/// constraint that makes representations unique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumerationSystem {
    name: String,
    /// Recurrence coefficients, most recent term first:
    /// `basis[i] = c[0]*basis[i-1] + c[1]*basis[i-2] + ...`.
    coefficients: Vec<u64>,
    initial_terms: Vec<u64>,
    digit_bound: u8,
    /// Digit factors that never occur in a canonical representation.
    forbidden_factors: Vec<Vec<u8>>,
}

impl NumerationSystem {
    /// The system the whole tool is about: basis 1, 3, 8, 22, 60, …
    pub fn kim() -> Self {
        NumerationSystem {
            name: "msd_kim".into(),
            coefficients: vec![2, 2],
            initial_terms: vec![1, 3],
            digit_bound: 2,
            forbidden_factors: vec![vec![2, 2]],
        }
    }

    /// Zeckendorf system over the Fibonacci basis 1, 2, 3, 5, 8, …
    /// Ships as a cross-validation fixture only.
    pub fn zeckendorf() -> Self {
        NumerationSystem {
            name: "msd_fib".into(),
            coefficients: vec![1, 1],
            initial_terms: vec![1, 2],
            digit_bound: 1,
            forbidden_factors: vec![vec![1, 1]],
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "msd_kim" => Some(Self::kim()),
            "msd_fib" => Some(Self::zeckendorf()),
            _ => None,
        }
    }

    /// Parse a definition file:
    ///
    /// ```text
    /// name msd_kim
    /// coefficients 2 2
    /// initial 1 3
    /// digit-bound 2
    /// forbid 22
    /// ```
    pub fn parse_definition(text: &str) -> Result<Self, NumerationError> {
        let mut name = None;
        let mut coefficients = None;
        let mut initial = None;
        let mut digit_bound = None;
        let mut forbidden = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap();
            let bad = |m: String| NumerationError::BadDefinition(m);
            match key {
                "name" => name = Some(parts.next().ok_or_else(|| bad("missing name".into()))?.to_owned()),
                "coefficients" => {
                    coefficients = Some(
                        parts
                            .map(|p| p.parse::<u64>().map_err(|e| bad(format!("coefficient '{p}': {e}"))))
                            .collect::<Result<Vec<_>, _>>()?,
                    )
                }
                "initial" => {
                    initial = Some(
                        parts
                            .map(|p| p.parse::<u64>().map_err(|e| bad(format!("initial term '{p}': {e}"))))
                            .collect::<Result<Vec<_>, _>>()?,
                    )
                }
                "digit-bound" => {
                    digit_bound = Some(
                        parts
                            .next()
                            .ok_or_else(|| bad("missing digit bound".into()))?
                            .parse::<u8>()
                            .map_err(|e| bad(format!("digit bound: {e}")))?,
                    )
                }
                "forbid" => {
                    for word in parts {
                        let factor: Vec<u8> = word
                            .bytes()
                            .map(|b| {
                                if b.is_ascii_digit() {
                                    Ok(b - b'0')
                                } else {
                                    Err(bad(format!("bad digit in forbidden factor '{word}'")))
                                }
                            })
                            .collect::<Result<_, _>>()?;
                        forbidden.push(factor);
                    }
                }
                other => return Err(bad(format!("unknown key '{other}'"))),
            }
        }
        let sys = NumerationSystem {
            name: name.ok_or_else(|| NumerationError::BadDefinition("missing 'name'".into()))?,
            coefficients: coefficients
                .ok_or_else(|| NumerationError::BadDefinition("missing 'coefficients'".into()))?,
            initial_terms: initial
                .ok_or_else(|| NumerationError::BadDefinition("missing 'initial'".into()))?,
            digit_bound: digit_bound
                .ok_or_else(|| NumerationError::BadDefinition("missing 'digit-bound'".into()))?,
            forbidden_factors: forbidden,
        };
        sys.validate()?;
        Ok(sys)
    }

    fn validate(&self) -> Result<(), NumerationError> {
        if self.coefficients.is_empty() || self.initial_terms.len() != self.coefficients.len() {
            return Err(NumerationError::BadDefinition(
                "need as many initial terms as coefficients".into(),
            ));
        }
        if self.digit_bound == 0 {
            return Err(NumerationError::BadDefinition("digit bound must be >= 1".into()));
        }
        if !self.initial_terms.windows(2).all(|w| w[0] < w[1]) {
            return Err(NumerationError::BadDefinition(
                "initial terms must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn digit_bound(&self) -> u8 {
        self.digit_bound
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// Single-track alphabet of this system's digits.
    pub fn alphabet(&self, tracks: usize) -> Alphabet {
        Alphabet::uniform(tracks, self.digit_bound)
    }

    /// The `i`-th basis term, by exact integer recurrence. Overflow is an
    /// error, never silent.
    pub fn basis_term(&self, i: usize) -> Result<u64, NumerationError> {
        let order = self.order();
        if i < order {
            return Ok(self.initial_terms[i]);
        }
        let mut window = self.initial_terms.clone();
        for idx in order..=i {
            let mut acc: u64 = 0;
            for (j, &c) in self.coefficients.iter().enumerate() {
                let term = window[order - 1 - j]
                    .checked_mul(c)
                    .ok_or_else(|| NumerationError::Overflow(format!("basis term {idx}")))?;
                acc = acc
                    .checked_add(term)
                    .ok_or_else(|| NumerationError::Overflow(format!("basis term {idx}")))?;
            }
            window.rotate_left(1);
            window[order - 1] = acc;
        }
        Ok(window[order - 1])
    }

    /// Basis terms `0..len`, for callers that want the table at once.
    pub fn basis_table(&self, len: usize) -> Result<Vec<u64>, NumerationError> {
        (0..len).map(|i| self.basis_term(i)).collect()
    }

    /// Canonical representation of `n`: greedy, most significant digit
    /// first, empty for zero.
    pub fn to_canonical(&self, n: u64) -> Vec<u8> {
        if n == 0 {
            return Vec::new();
        }
        // Largest basis index with basis <= n.
        let mut basis = self.initial_terms.clone();
        while *basis.last().unwrap() <= n {
            let order = self.order();
            let mut acc: u64 = 0;
            for (j, &c) in self.coefficients.iter().enumerate() {
                match basis[basis.len() - 1 - j].checked_mul(c).and_then(|t| acc.checked_add(t)) {
                    Some(v) => acc = v,
                    // The next term would overflow u64; it is certainly > n.
                    None => {
                        acc = u64::MAX;
                        break;
                    }
                }
            }
            if acc == u64::MAX {
                break;
            }
            basis.push(acc);
            let _ = order;
        }
        let mut top = basis.len() - 1;
        while basis[top] > n {
            top -= 1;
        }
        let mut digits = Vec::with_capacity(top + 1);
        let mut rem = n;
        for i in (0..=top).rev() {
            let d = rem / basis[i];
            debug_assert!(d <= self.digit_bound as u64, "greedy digit out of range");
            digits.push(d as u8);
            rem -= d * basis[i];
        }
        debug_assert_eq!(rem, 0);
        digits
    }

    /// Value of a digit word (most significant digit first). Tolerates
    /// leading zeros and non-canonical words.
    pub fn value_of(&self, word: &[u8]) -> Result<u64, NumerationError> {
        let mut acc: u64 = 0;
        for (pos, &d) in word.iter().enumerate() {
            if d > self.digit_bound {
                return Err(NumerationError::BadDigit {
                    digit: d,
                    bound: self.digit_bound,
                });
            }
            let weight = self.basis_term(word.len() - 1 - pos)?;
            let term = weight
                .checked_mul(d as u64)
                .ok_or_else(|| NumerationError::Overflow("value_of".into()))?;
            acc = acc
                .checked_add(term)
                .ok_or_else(|| NumerationError::Overflow("value_of".into()))?;
        }
        Ok(acc)
    }

    /// True iff `word` is the canonical representation of its value.
    pub fn is_canonical(&self, word: &[u8]) -> bool {
        if word.is_empty() {
            return true;
        }
        if word[0] == 0 || word.iter().any(|&d| d > self.digit_bound) {
            return false;
        }
        !self.has_forbidden_factor(word)
    }

    /// True iff `word` has a forbidden factor (leading zeros allowed).
    pub fn has_forbidden_factor(&self, word: &[u8]) -> bool {
        self.forbidden_factors
            .iter()
            .any(|f| !f.is_empty() && word.windows(f.len()).any(|w| w == &f[..]))
    }

    /// Single-track DFA accepting exactly the canonical representations.
    pub fn canonical_recognizer(&self) -> Dfa {
        let alphabet = self.alphabet(1);
        // no leading zero (but the empty word is fine)
        let mut no_leading_zero = Dfa::new(alphabet.clone(), 2);
        no_leading_zero.set_accepting(0, true);
        no_leading_zero.set_accepting(1, true);
        for d in 1..=self.digit_bound {
            no_leading_zero.set_transition(0, d as u16, 1);
        }
        for d in 0..=self.digit_bound {
            no_leading_zero.set_transition(1, d as u16, 1);
        }
        let mut result = no_leading_zero;
        for factor in &self.forbidden_factors {
            let avoid = self.factor_free(factor);
            result = result
                .product(&avoid, ProductMode::And)
                .expect("same alphabet");
        }
        result.minimize()
    }

    /// DFA for "contains no occurrence of `factor`" via the matcher automaton.
    fn factor_free(&self, factor: &[u8]) -> Dfa {
        let alphabet = self.alphabet(1);
        let pattern: String = factor.iter().map(|d| d.to_string()).collect();
        let any: Vec<String> = (0..=self.digit_bound).map(|d| d.to_string()).collect();
        let any = format!("({})", any.join("|"));
        let has = MultiTrackRegex::parse(&format!("{any}*{pattern}{any}*"), &alphabet)
            .expect("internal regex")
            .to_dfa();
        has.complement()
    }

    /// Two-track DFA accepting padded canonical pairs ((n)ᴷ, (m)ᴷ) with
    /// m = n + 1. Built directly from the carry rules of the system: a final
    /// digit 0 or an unchained final 1 is bumped in place; a suffix a(21)ⁱ
    /// with a ∈ {0,1} becomes (a+1)0²ⁱ; a suffix a2 becomes (a+1)0.
    pub fn build_incrementer(&self) -> Result<Dfa, NumerationError> {
        if *self != Self::kim() {
            return Err(NumerationError::Unsupported(
                "incrementer rules are specific to the built-in msd_kim system".into(),
            ));
        }
        let alphabet = self.alphabet(2);
        let sym = |a: u8, b: u8| alphabet.encode(&[a, b]).unwrap();
        // State 0: common prefix; 1: bumped digit seen; 2: inside the carry
        // tail after (2,0). Accepting: 1 and 2.
        let mut pattern = Dfa::new(alphabet.clone(), 3);
        for d in 0..=2u8 {
            pattern.set_transition(0, sym(d, d), 0);
        }
        pattern.set_transition(0, sym(0, 1), 1);
        pattern.set_transition(0, sym(1, 2), 1);
        pattern.set_transition(1, sym(2, 0), 2);
        pattern.set_transition(2, sym(1, 0), 1);
        pattern.set_accepting(1, true);
        pattern.set_accepting(2, true);
        let valid = self.padded_universe(2);
        Ok(pattern
            .product(&valid, ProductMode::And)
            .expect("same alphabet")
            .minimize())
    }

    /// k-track DFA accepting words in which every track is a left-zero-padded
    /// canonical representation.
    pub fn padded_universe(&self, tracks: usize) -> Dfa {
        let single = {
            // Like the canonical recognizer but allowing leading zeros.
            let alphabet = self.alphabet(1);
            let mut all = Dfa::accept_all(alphabet);
            for factor in &self.forbidden_factors {
                let avoid = self.factor_free(factor);
                all = all.product(&avoid, ProductMode::And).expect("same alphabet");
            }
            all.minimize()
        };
        let mut result: Option<Dfa> = None;
        let target = self.alphabet(tracks);
        for track in 0..tracks {
            let lifted = lift_single(&single, &target, track);
            result = Some(match result {
                None => lifted,
                Some(r) => r.product(&lifted, ProductMode::And).expect("same alphabet"),
            });
        }
        match result {
            Some(r) => r.minimize(),
            // Zero tracks: every word over the empty tuple is valid.
            None => Dfa::accept_all(target),
        }
    }

    /// Format a digit word for humans ("102"; empty word as the empty string).
    pub fn format_word(word: &[u8]) -> String {
        word.iter().map(|d| char::from(b'0' + d)).collect()
    }

    /// Parse "102" into digits.
    pub fn parse_word(text: &str) -> Result<Vec<u8>, NumerationError> {
        text.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or(NumerationError::BadDefinition(format!(
                        "bad digit character '{c}'"
                    )))
            })
            .collect()
    }

    /// Encode a tuple of values as aligned padded digit strings of length
    /// `len` (which must fit the longest representation).
    pub fn encode_values(&self, values: &[u64], len: usize) -> Result<Vec<Vec<u8>>, NumerationError> {
        let mut tracks = Vec::with_capacity(values.len());
        for &v in values {
            let rep = self.to_canonical(v);
            if rep.len() > len {
                return Err(NumerationError::BadDefinition(format!(
                    "representation of {v} needs {} digits, got {len}",
                    rep.len()
                )));
            }
            let mut padded = vec![0u8; len - rep.len()];
            padded.extend_from_slice(&rep);
            tracks.push(padded);
        }
        Ok(tracks)
    }
}

impl fmt::Display for NumerationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// Embed a single-track DFA into `target`, reading only `track`.
fn lift_single(single: &Dfa, target: &Alphabet, track: usize) -> Dfa {
    let mut d = Dfa::new(target.clone(), single.n_states());
    for s in 0..single.n_states() as u32 {
        d.set_accepting(s, single.is_accepting(s));
        for sym in target.symbols() {
            let digit = target.digit(sym, track);
            if let Some(t) = single.step(s, digit as u16) {
                d.set_transition(s, sym, t);
            }
        }
    }
    d
}

/// High-precision constants of the closed form for the basis: the basis term
/// is `lead * gamma^n + trail * delta^n` with gamma = 1 + sqrt(3) and
/// delta = 1 - sqrt(3). The stated error bound covers the f64 rounding of
/// each constant.
#[derive(Debug, Clone, Copy)]
pub struct BinetConstants {
    pub gamma: f64,
    pub delta: f64,
    pub lead: f64,
    pub trail: f64,
    /// Absolute error bound on each stored constant.
    pub eps: f64,
}

impl BinetConstants {
    pub fn kim() -> Self {
        let sqrt3 = 3.0f64.sqrt();
        BinetConstants {
            gamma: 1.0 + sqrt3,
            delta: 1.0 - sqrt3,
            lead: 0.5 + sqrt3 / 3.0,
            trail: 0.5 - sqrt3 / 3.0,
            // A couple of ulps on values of magnitude about 2.
            eps: 1e-15,
        }
    }
}

/// Element a + b*sqrt(3) with exact integer coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Surd(i128, i128);

impl Surd {
    fn mul(self, other: Surd) -> Result<Surd, NumerationError> {
        let err = || NumerationError::Precision("surd arithmetic overflowed".into());
        let a = self
            .0
            .checked_mul(other.0)
            .and_then(|x| Some(x.checked_add(3i128.checked_mul(self.1.checked_mul(other.1)?)?)?))
            .ok_or_else(err)?;
        let b = self
            .0
            .checked_mul(other.1)
            .and_then(|x| x.checked_add(self.1.checked_mul(other.0)?))
            .ok_or_else(err)?;
        Ok(Surd(a, b))
    }

    fn add(self, other: Surd) -> Result<Surd, NumerationError> {
        let err = || NumerationError::Precision("surd arithmetic overflowed".into());
        Ok(Surd(
            self.0.checked_add(other.0).ok_or_else(err)?,
            self.1.checked_add(other.1).ok_or_else(err)?,
        ))
    }
}

/// Check the closed form against the exact recurrence: for every `i` up to
/// `max_i`, the closed-form value must round to the basis term, and the
/// residual `basis[i+1] - gamma * basis[i]` must equal `(2 - sqrt(3)) delta^i`
/// within 1e-9. Both sides live in the ring of integers adjoined sqrt(3), so
/// the comparisons are made exactly there (f64 cancellation could not honor
/// the stated tolerance); overflowing that exact arithmetic is a loud
/// precision failure, never a silent pass.
pub fn binet_check(sys: &NumerationSystem, max_i: usize) -> Result<bool, NumerationError> {
    if *sys != NumerationSystem::kim() {
        return Err(NumerationError::Unsupported("binet form is for msd_kim".into()));
    }
    let gamma = Surd(1, 1);
    let delta = Surd(1, -1);
    // 6 * lead = 3 + 2*sqrt(3), 6 * trail = 3 - 2*sqrt(3)
    let lead6 = Surd(3, 2);
    let trail6 = Surd(3, -2);
    let mut gamma_i = Surd(1, 0);
    let mut delta_i = Surd(1, 0);
    for i in 0..=max_i {
        let exact = sys.basis_term(i)?;
        // lead * gamma^i + trail * delta^i, scaled by 6.
        let six_value = lead6.mul(gamma_i)?.add(trail6.mul(delta_i)?)?;
        if six_value != Surd(6 * exact as i128, 0) {
            return Ok(false);
        }
        // Residual identity: basis[i+1] - gamma * basis[i] = (2 - sqrt(3)) delta^i.
        let next = sys.basis_term(i + 1)? as i128;
        let residual = Surd(next, 0).add(gamma.mul(Surd(-(exact as i128), 0))?)?;
        let expect = Surd(2, -1).mul(delta_i)?;
        if residual != expect {
            return Ok(false);
        }
        gamma_i = gamma_i.mul(gamma)?;
        delta_i = delta_i.mul(delta)?;
    }
    // Sanity of the stored f64 constants on the range where f64 is exact.
    let c = BinetConstants::kim();
    for i in 0..=max_i.min(20) {
        let exact = sys.basis_term(i)? as f64;
        let approx = c.lead * c.gamma.powi(i as i32) + c.trail * c.delta.powi(i as i32);
        if (approx - exact).abs() >= 0.5 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_first_terms() {
        let k = NumerationSystem::kim();
        let expect = [1u64, 3, 8, 22, 60, 164, 448, 1224, 3344, 9136, 24960];
        for (i, &v) in expect.iter().enumerate() {
            assert_eq!(k.basis_term(i).unwrap(), v);
        }
    }

    #[test]
    fn basis_overflow_is_detected() {
        let k = NumerationSystem::kim();
        let mut last_ok = 0;
        for i in 0..200 {
            match k.basis_term(i) {
                Ok(_) => last_ok = i,
                Err(NumerationError::Overflow(_)) => break,
                Err(e) => panic!("unexpected error {e}"),
            }
        }
        assert!(last_ok > 40, "u64 should hold at least 40 terms");
        assert!(k.basis_term(last_ok + 1).is_err());
    }

    #[test]
    fn table_of_first_representations() {
        let k = NumerationSystem::kim();
        let expect = ["", "1", "2", "10", "11", "12", "20", "21", "100", "101", "102"];
        for (n, &w) in expect.iter().enumerate() {
            assert_eq!(NumerationSystem::format_word(&k.to_canonical(n as u64)), w);
        }
    }

    #[test]
    fn value_tolerates_noncanonical() {
        let k = NumerationSystem::kim();
        assert_eq!(k.value_of(&[2, 2]).unwrap(), 8);
        assert_eq!(k.value_of(&[]).unwrap(), 0);
        assert_eq!(k.value_of(&[0, 0, 2, 2]).unwrap(), 8);
        assert!(k.value_of(&[3]).is_err());
    }

    #[test]
    fn roundtrip_and_radix_order() {
        let k = NumerationSystem::kim();
        let mut prev: Option<Vec<u8>> = None;
        for n in 0..5000u64 {
            let w = k.to_canonical(n);
            assert_eq!(k.value_of(&w).unwrap(), n);
            assert!(k.is_canonical(&w), "canonical word for {n}");
            if let Some(p) = prev {
                // radix order: shorter first, then lexicographic
                assert!(p.len() < w.len() || (p.len() == w.len() && p < w));
            }
            prev = Some(w);
        }
    }

    #[test]
    fn recognizer_matches_is_canonical() {
        let k = NumerationSystem::kim();
        let rec = k.canonical_recognizer();
        // every word of length <= 7
        let alphabet = k.alphabet(1);
        let mut stack = vec![Vec::<u8>::new()];
        while let Some(w) = stack.pop() {
            let syms: Vec<u16> = w.iter().map(|&d| d as u16).collect();
            assert_eq!(rec.accepts(&syms), k.is_canonical(&w), "{w:?}");
            if w.len() < 7 {
                for d in 0..=2u8 {
                    let mut v = w.clone();
                    v.push(d);
                    stack.push(v);
                }
            }
        }
        let _ = alphabet;
    }

    #[test]
    fn recognizer_examples() {
        let k = NumerationSystem::kim();
        let rec = k.canonical_recognizer();
        assert!(rec.accepts(&[1, 0, 2])); // (10)
        assert!(!rec.accepts(&[2, 2]));
        assert!(!rec.accepts(&[0, 1]));
        assert!(rec.accepts(&[])); // zero
    }

    #[test]
    fn uniqueness_on_short_words() {
        // Over all recognizer-accepted words of length <= 12, value_of is
        // injective and the image is an initial segment of the naturals.
        let k = NumerationSystem::kim();
        let mut values = Vec::new();
        let mut stack = vec![Vec::<u8>::new()];
        while let Some(w) = stack.pop() {
            if k.is_canonical(&w) {
                values.push(k.value_of(&w).unwrap());
            }
            if w.len() < 12 {
                for d in 0..=2u8 {
                    let mut v = w.clone();
                    v.push(d);
                    stack.push(v);
                }
            }
        }
        values.sort_unstable();
        let n = values.len() as u64;
        values.dedup();
        assert_eq!(values.len() as u64, n, "value_of not injective on canonicals");
        assert_eq!(values, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn incrementer_exhaustive_small() {
        let k = NumerationSystem::kim();
        let inc = k.build_incrementer().unwrap();
        let alphabet = k.alphabet(2);
        for n in 0..3000u64 {
            for m in n.saturating_sub(1)..=n + 3 {
                let len = k.to_canonical(n).len().max(k.to_canonical(m).len()).max(1);
                let tracks = k.encode_values(&[n, m], len).unwrap();
                let word = alphabet.encode_word(&tracks).unwrap();
                assert_eq!(inc.accepts(&word), m == n + 1, "pair ({n},{m})");
            }
        }
    }

    #[test]
    fn incrementer_padding_invariance() {
        let k = NumerationSystem::kim();
        let inc = k.build_incrementer().unwrap();
        let alphabet = k.alphabet(2);
        // (7, 8) at minimal and padded lengths; the carry rule with a=0.
        for len in 3..6 {
            let tracks = k.encode_values(&[7, 8], len).unwrap();
            let word = alphabet.encode_word(&tracks).unwrap();
            assert!(inc.accepts(&word), "len {len}");
        }
        let tracks = k.encode_values(&[0, 1], 1).unwrap();
        assert!(inc.accepts(&alphabet.encode_word(&tracks).unwrap()));
        let tracks = k.encode_values(&[3, 5], 2).unwrap();
        assert!(!inc.accepts(&alphabet.encode_word(&tracks).unwrap()));
    }

    #[test]
    fn binet_closed_form_holds() {
        let k = NumerationSystem::kim();
        assert!(binet_check(&k, 30).unwrap());
        // i = 0 residual: 3 - gamma = 2 - sqrt(3)
        let c = BinetConstants::kim();
        assert!((3.0 - c.gamma - (2.0 - 3.0f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn zeckendorf_fixture() {
        let z = NumerationSystem::zeckendorf();
        for n in 0..2000u64 {
            let w = z.to_canonical(n);
            assert_eq!(z.value_of(&w).unwrap(), n);
            assert!(z.is_canonical(&w));
        }
        assert_eq!(z.to_canonical(10), vec![1, 0, 0, 1, 0]); // 8 + 2
    }

    #[test]
    fn definition_file_roundtrip() {
        let text = "name msd_kim\ncoefficients 2 2\ninitial 1 3\ndigit-bound 2\nforbid 22\n";
        let sys = NumerationSystem::parse_definition(text).unwrap();
        assert_eq!(sys, NumerationSystem::kim());
    }
}
