//! Text format for automata, compatible with the usual theorem-prover
//! layout: a header line naming one numeration system per track, then one
//! block per state. A state block starts with `id flag` (the flag is the
//! accept bit of a DFA or the output of a DFAO) followed by transition lines
//! `d1 d2 ... dk -> target`. Blocks are separated by blank lines; state 0 is
//! initial. UTF-8, LF newlines.

use super::dfa::Dfa;
use super::dfao::Dfao;
use super::{Alphabet, AutomatonError, StateId};

/// Result of parsing an automaton file. The flag column is interpreted on
/// demand: accept bits for a DFA, output values for a DFAO.
#[derive(Debug, Clone)]
pub struct WalnutAutomaton {
    pub track_systems: Vec<String>,
    pub flags: Vec<i64>,
    /// (state, digit tuple, target)
    pub transitions: Vec<(StateId, Vec<u8>, StateId)>,
}

impl WalnutAutomaton {
    fn alphabet(&self, min_bounds: Option<&[u8]>) -> Result<Alphabet, AutomatonError> {
        let tracks = self.track_systems.len();
        let mut bounds = vec![0u8; tracks];
        if let Some(mb) = min_bounds {
            bounds.copy_from_slice(mb);
        }
        for (_, tuple, _) in &self.transitions {
            for (i, &d) in tuple.iter().enumerate() {
                bounds[i] = bounds[i].max(d);
            }
        }
        Alphabet::new(bounds)
    }

    pub fn into_dfa(self, min_bounds: Option<&[u8]>) -> Result<Dfa, AutomatonError> {
        let alphabet = self.alphabet(min_bounds)?;
        let mut d = Dfa::new(alphabet.clone(), self.flags.len());
        for (s, flag) in self.flags.iter().enumerate() {
            d.set_accepting(s as StateId, *flag != 0);
        }
        for (s, tuple, t) in &self.transitions {
            d.set_transition(*s, alphabet.encode(tuple)?, *t);
        }
        Ok(d)
    }

    pub fn into_dfao(self, min_bounds: Option<&[u8]>) -> Result<Dfao, AutomatonError> {
        let alphabet = self.alphabet(min_bounds)?;
        let mut d = Dfao::new(alphabet.clone(), self.flags.clone());
        for (s, tuple, t) in &self.transitions {
            d.set_transition(*s, alphabet.encode(tuple)?, *t);
        }
        Ok(d)
    }
}

pub fn read_walnut(text: &str) -> Result<WalnutAutomaton, AutomatonError> {
    let mut lines = text.lines().enumerate();
    let (mut lineno, header) = loop {
        match lines.next() {
            Some((n, l)) if !l.trim().is_empty() => break (n + 1, l),
            Some(_) => continue,
            None => {
                return Err(AutomatonError::Format {
                    line: 0,
                    msg: "empty automaton file".into(),
                })
            }
        }
    };
    let track_systems: Vec<String> = header.split_whitespace().map(str::to_owned).collect();
    let tracks = track_systems.len();
    let mut flags: Vec<i64> = Vec::new();
    let mut transitions = Vec::new();
    let mut current: Option<StateId> = None;
    for (n, raw) in lines {
        lineno = n + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| AutomatonError::Format { line: lineno, msg };
        if let Some((lhs, rhs)) = line.split_once("->") {
            let state = current.ok_or_else(|| bad("transition before any state block".into()))?;
            let tuple: Vec<u8> = lhs
                .split_whitespace()
                .map(|t| t.parse::<u8>().map_err(|e| bad(format!("bad digit '{t}': {e}"))))
                .collect::<Result<_, _>>()?;
            if tuple.len() != tracks {
                return Err(bad(format!(
                    "expected {tracks} digits, found {}",
                    tuple.len()
                )));
            }
            let target: StateId = rhs
                .trim()
                .parse()
                .map_err(|e| bad(format!("bad target state: {e}")))?;
            transitions.push((state, tuple, target));
        } else {
            let mut parts = line.split_whitespace();
            let id: usize = parts
                .next()
                .unwrap()
                .parse()
                .map_err(|e| bad(format!("bad state id: {e}")))?;
            let flag: i64 = parts
                .next()
                .ok_or_else(|| bad("state line needs 'id flag'".into()))?
                .parse()
                .map_err(|e| bad(format!("bad state flag: {e}")))?;
            if parts.next().is_some() {
                return Err(bad("unexpected trailing tokens on state line".into()));
            }
            if id != flags.len() {
                return Err(bad(format!(
                    "state blocks must be dense from 0; expected {}, found {id}",
                    flags.len()
                )));
            }
            flags.push(flag);
            current = Some(id as StateId);
        }
    }
    // Validate targets.
    for (_, _, t) in &transitions {
        if *t as usize >= flags.len() {
            return Err(AutomatonError::Format {
                line: lineno,
                msg: format!("transition target {t} out of range"),
            });
        }
    }
    Ok(WalnutAutomaton {
        track_systems,
        flags,
        transitions,
    })
}

fn write_blocks(
    out: &mut String,
    alphabet: &Alphabet,
    n_states: usize,
    flag: impl Fn(StateId) -> i64,
    step: impl Fn(StateId, u16) -> Option<StateId>,
) {
    for s in 0..n_states as StateId {
        if s > 0 {
            out.push('\n');
        }
        out.push_str(&format!("{s} {}\n", flag(s)));
        for sym in alphabet.symbols() {
            if let Some(t) = step(s, sym) {
                let digits = alphabet.decode(sym);
                let digits: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
                out.push_str(&format!("{} -> {t}\n", digits.join(" ")));
            }
        }
    }
}

pub fn write_walnut_dfa(dfa: &Dfa, track_systems: &[String]) -> String {
    assert_eq!(track_systems.len(), dfa.alphabet().tracks());
    let mut out = String::new();
    out.push_str(&track_systems.join(" "));
    out.push_str("\n\n");
    write_blocks(
        &mut out,
        dfa.alphabet(),
        dfa.n_states(),
        |s| dfa.is_accepting(s) as i64,
        |s, sym| dfa.step(s, sym),
    );
    out
}

pub fn write_walnut_dfao(dfao: &Dfao, track_systems: &[String]) -> String {
    assert_eq!(track_systems.len(), dfao.alphabet().tracks());
    let mut out = String::new();
    out.push_str(&track_systems.join(" "));
    out.push_str("\n\n");
    write_blocks(
        &mut out,
        dfao.alphabet(),
        dfao.n_states(),
        |s| dfao.output(s),
        |s, sym| dfao.step(s, sym),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const KP: &str = "msd_kim\n\n0 1\n0 -> 0\n1 -> 0\n2 -> 1\n\n1 0\n0 -> 0\n1 -> 0\n";

    #[test]
    fn parses_two_state_dfao() {
        let a = read_walnut(KP).unwrap();
        assert_eq!(a.track_systems, vec!["msd_kim"]);
        assert_eq!(a.flags, vec![1, 0]);
        let dfao = a.into_dfao(Some(&[2])).unwrap();
        assert_eq!(dfao.output(0), 1);
        assert_eq!(dfao.step(0, 2), Some(1));
        // State 1 has no digit-2 edge: partial map, implicit sink.
        assert_eq!(dfao.step(1, 2), None);
        assert_eq!(dfao.output_of(&[1, 0, 0]).unwrap(), 1);
    }

    #[test]
    fn dfao_roundtrip_is_identity() {
        let a = read_walnut(KP).unwrap();
        let dfao = a.into_dfao(Some(&[2])).unwrap();
        let text = write_walnut_dfao(&dfao, &["msd_kim".into()]);
        assert_eq!(text, KP);
    }

    #[test]
    fn dfa_roundtrip_isomorphic() {
        let alpha = Alphabet::uniform(1, 2);
        let mut d = Dfa::new(alpha, 2);
        d.set_transition(0, 1, 1);
        d.set_transition(1, 0, 1);
        d.set_accepting(1, true);
        let d = d.minimize();
        let text = write_walnut_dfa(&d, &["msd_kim".into()]);
        let back = read_walnut(&text).unwrap().into_dfa(Some(&[2])).unwrap();
        assert_eq!(back.minimize(), d);
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        let err = read_walnut("msd_kim\n\n0 1\nx -> 0\n").unwrap_err();
        match err {
            AutomatonError::Format { line, .. } => assert_eq!(line, 4),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
