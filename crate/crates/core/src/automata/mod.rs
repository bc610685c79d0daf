//! Multi-track finite automata over tuple digit alphabets.
//!
//! A word is a sequence of digit tuples, most significant digit first. A
//! `k`-track automaton reads `k` digit strings in parallel; shorter operands
//! are left-padded with the all-zero tuple so positions align. Transition
//! maps may be partial: a missing transition is an implicit rejecting sink.
//! All values are immutable after construction and every operation is a pure
//! function, so automata can be shared freely across threads.

mod dfa;
mod dfao;
mod dot;
mod minimize;
mod nfa;
mod regex;
mod walnut;

pub use dfa::{Dfa, ProductMode};
pub use dfao::{combine_acceptors, Dfao};
pub use dot::{dfa_to_dot, dfao_to_dot};
pub use nfa::Nfa;
pub use regex::MultiTrackRegex;
pub use walnut::{read_walnut, write_walnut_dfa, write_walnut_dfao, WalnutAutomaton};

use thiserror::Error;

/// Dense state identifier. State 0 is always the initial state.
pub type StateId = u32;

/// Encoded digit tuple (mixed-radix index into the tuple alphabet).
pub type Symbol = u16;

/// Marker for a missing transition.
pub const NO_STATE: StateId = StateId::MAX;

#[derive(Debug, Error)]
pub enum AutomatonError {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("digit {digit} out of range on track {track}")]
    DigitOutOfRange { track: usize, digit: u8 },
    #[error("invalid track index {0}")]
    InvalidTrack(usize),
    #[error("tuple has {got} digits, alphabet has {want} tracks")]
    TupleArity { got: usize, want: usize },
    #[error("alphabet too large: {0}")]
    AlphabetTooLarge(String),
    #[error("regex parse error at byte {pos}: {msg}")]
    RegexParse { pos: usize, msg: String },
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("run died on symbol {0} (no transition)")]
    DeadRun(Symbol),
}

/// Tuple digit alphabet: one maximal digit per track. Digits on track `i`
/// range over `0..=bounds[i]`. Zero tracks are allowed (the alphabet of a
/// closed sentence); its only symbol is the empty tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    bounds: Vec<u8>,
}

impl Alphabet {
    pub fn new(bounds: Vec<u8>) -> Result<Self, AutomatonError> {
        let mut count: usize = 1;
        for &b in &bounds {
            count = count
                .checked_mul(b as usize + 1)
                .filter(|&c| c <= Symbol::MAX as usize + 1)
                .ok_or_else(|| {
                    AutomatonError::AlphabetTooLarge(format!("bounds {bounds:?}"))
                })?;
        }
        Ok(Alphabet { bounds })
    }

    /// `tracks` tracks, all with the same digit bound.
    pub fn uniform(tracks: usize, bound: u8) -> Self {
        Alphabet::new(vec![bound; tracks]).expect("alphabet too large")
    }

    pub fn tracks(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[u8] {
        &self.bounds
    }

    pub fn symbol_count(&self) -> usize {
        self.bounds.iter().map(|&b| b as usize + 1).product()
    }

    /// The all-zero tuple.
    pub fn zero(&self) -> Symbol {
        0
    }

    pub fn encode(&self, digits: &[u8]) -> Result<Symbol, AutomatonError> {
        if digits.len() != self.bounds.len() {
            return Err(AutomatonError::TupleArity {
                got: digits.len(),
                want: self.bounds.len(),
            });
        }
        let mut sym: usize = 0;
        for (track, (&d, &b)) in digits.iter().zip(&self.bounds).enumerate() {
            if d > b {
                return Err(AutomatonError::DigitOutOfRange { track, digit: d });
            }
            sym = sym * (b as usize + 1) + d as usize;
        }
        Ok(sym as Symbol)
    }

    pub fn decode(&self, sym: Symbol) -> Vec<u8> {
        let mut out = vec![0u8; self.bounds.len()];
        self.decode_into(sym, &mut out);
        out
    }

    pub fn decode_into(&self, sym: Symbol, out: &mut [u8]) {
        debug_assert_eq!(out.len(), self.bounds.len());
        let mut rest = sym as usize;
        for i in (0..self.bounds.len()).rev() {
            let base = self.bounds[i] as usize + 1;
            out[i] = (rest % base) as u8;
            rest /= base;
        }
        debug_assert_eq!(rest, 0);
    }

    /// Digit of `sym` on a single track.
    pub fn digit(&self, sym: Symbol, track: usize) -> u8 {
        let mut rest = sym as usize;
        for i in (track + 1..self.bounds.len()).rev() {
            rest /= self.bounds[i] as usize + 1;
        }
        (rest % (self.bounds[track] as usize + 1)) as u8
    }

    pub fn without_track(&self, track: usize) -> Result<Alphabet, AutomatonError> {
        if track >= self.bounds.len() {
            return Err(AutomatonError::InvalidTrack(track));
        }
        let mut bounds = self.bounds.clone();
        bounds.remove(track);
        Alphabet::new(bounds)
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        0..self.symbol_count() as Symbol
    }

    /// Encode aligned digit strings (one per track, equal length) into a word.
    pub fn encode_word(&self, tracks: &[Vec<u8>]) -> Result<Vec<Symbol>, AutomatonError> {
        if tracks.len() != self.tracks() {
            return Err(AutomatonError::TupleArity {
                got: tracks.len(),
                want: self.tracks(),
            });
        }
        let len = tracks.first().map_or(0, |t| t.len());
        let mut word = Vec::with_capacity(len);
        let mut tuple = vec![0u8; self.tracks()];
        for pos in 0..len {
            for (i, t) in tracks.iter().enumerate() {
                if t.len() != len {
                    return Err(AutomatonError::AlphabetMismatch(
                        "track strings must have equal length".into(),
                    ));
                }
                tuple[i] = t[pos];
            }
            word.push(self.encode(&tuple)?);
        }
        Ok(word)
    }

    /// Split a word back into per-track digit strings.
    pub fn decode_word(&self, word: &[Symbol]) -> Vec<Vec<u8>> {
        let mut tracks = vec![Vec::with_capacity(word.len()); self.tracks()];
        let mut tuple = vec![0u8; self.tracks()];
        for &sym in word {
            self.decode_into(sym, &mut tuple);
            for (i, &d) in tuple.iter().enumerate() {
                tracks[i].push(d);
            }
        }
        tracks
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;

    /// Every word over `alphabet` of length at most `max_len`, shortest first.
    pub fn words_upto(alphabet: &Alphabet, max_len: usize) -> Vec<Vec<Symbol>> {
        let mut out = vec![vec![]];
        let mut layer: Vec<Vec<Symbol>> = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for s in alphabet.symbols() {
                    let mut v = w.clone();
                    v.push(s);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_decode_roundtrip() {
        let a = Alphabet::uniform(3, 2);
        assert_eq!(a.symbol_count(), 27);
        for sym in a.symbols() {
            let digits = a.decode(sym);
            assert_eq!(a.encode(&digits).unwrap(), sym);
            for (t, &d) in digits.iter().enumerate() {
                assert_eq!(a.digit(sym, t), d);
            }
        }
    }

    #[test]
    fn zero_tracks() {
        let a = Alphabet::new(vec![]).unwrap();
        assert_eq!(a.symbol_count(), 1);
        assert_eq!(a.encode(&[]).unwrap(), 0);
        assert!(a.decode(0).is_empty());
    }

    #[test]
    fn digit_out_of_range() {
        let a = Alphabet::uniform(2, 2);
        assert!(matches!(
            a.encode(&[1, 3]),
            Err(AutomatonError::DigitOutOfRange { track: 1, digit: 3 })
        ));
    }
}
