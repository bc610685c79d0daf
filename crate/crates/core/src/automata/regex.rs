use super::dfa::Dfa;
use super::nfa::Nfa;
use super::{Alphabet, AutomatonError, Symbol};

/// Regular expression over digit tuples of one alphabet.
///
/// Syntax: bare digits for single-track literals, bracketed tuples
/// `[d1,d2,...]` for multi-track literals, `(...)` for grouping, `()` for the
/// empty word, postfix `*` `+` `?`, alternation `|`, and juxtaposition for
/// concatenation. Whitespace is ignored.
#[derive(Debug, Clone)]
pub struct MultiTrackRegex {
    alphabet: Alphabet,
    root: Node,
}

#[derive(Debug, Clone)]
enum Node {
    Empty,
    Literal(Symbol),
    Concat(Vec<Node>),
    Alt(Vec<Node>),
    Star(Box<Node>),
    Plus(Box<Node>),
    Opt(Box<Node>),
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> AutomatonError {
        AutomatonError::RegexParse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn parse_alt(&mut self) -> Result<Node, AutomatonError> {
        let mut branches = vec![self.parse_concat()?];
        while self.peek() == Some(b'|') {
            self.bump();
            branches.push(self.parse_concat()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            Node::Alt(branches)
        })
    }

    fn parse_concat(&mut self) -> Result<Node, AutomatonError> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            if c == b')' || c == b'|' {
                break;
            }
            parts.push(self.parse_repeat()?);
        }
        Ok(match parts.len() {
            0 => Node::Empty,
            1 => parts.pop().unwrap(),
            _ => Node::Concat(parts),
        })
    }

    fn parse_repeat(&mut self) -> Result<Node, AutomatonError> {
        let mut node = self.parse_atom()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    node = Node::Star(Box::new(node));
                }
                Some(b'+') => {
                    self.bump();
                    node = Node::Plus(Box::new(node));
                }
                Some(b'?') => {
                    self.bump();
                    node = Node::Opt(Box::new(node));
                }
                _ => return Ok(node),
            }
        }
    }

    fn parse_atom(&mut self) -> Result<Node, AutomatonError> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                if self.peek() == Some(b')') {
                    self.bump();
                    return Ok(Node::Empty);
                }
                let inner = self.parse_alt()?;
                if self.bump() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(inner)
            }
            Some(b'[') => {
                self.bump();
                let mut digits = Vec::new();
                loop {
                    let d = self.parse_digit()?;
                    digits.push(d);
                    match self.bump() {
                        Some(b',') => continue,
                        Some(b']') => break,
                        _ => return Err(self.err("expected ',' or ']' in tuple")),
                    }
                }
                let sym = self
                    .alphabet
                    .encode(&digits)
                    .map_err(|e| self.err(e.to_string()))?;
                Ok(Node::Literal(sym))
            }
            Some(c) if c.is_ascii_digit() => {
                if self.alphabet.tracks() != 1 {
                    return Err(self.err("bare digit literal requires a 1-track alphabet"));
                }
                let d = self.parse_digit()?;
                let sym = self
                    .alphabet
                    .encode(&[d])
                    .map_err(|e| self.err(e.to_string()))?;
                Ok(Node::Literal(sym))
            }
            Some(c) => Err(self.err(format!("unexpected character '{}'", c as char))),
            None => Err(self.err("unexpected end of regex")),
        }
    }

    fn parse_digit(&mut self) -> Result<u8, AutomatonError> {
        match self.bump() {
            Some(c) if c.is_ascii_digit() => Ok(c - b'0'),
            _ => Err(self.err("expected digit")),
        }
    }
}

impl MultiTrackRegex {
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self, AutomatonError> {
        let mut p = Parser {
            bytes: text.as_bytes(),
            pos: 0,
            alphabet,
        };
        let root = p.parse_alt()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.err("trailing input after regex"));
        }
        Ok(MultiTrackRegex {
            alphabet: alphabet.clone(),
            root,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Compile to the minimal DFA of the regex language.
    pub fn to_dfa(&self) -> Dfa {
        let mut nfa = Nfa::new(self.alphabet.clone(), 0);
        let start = nfa.add_state(false);
        let end = build(&mut nfa, &self.root, start);
        nfa.set_accepting(end, true);
        nfa.set_initial(vec![start]);
        nfa.determinize().minimize()
    }

    /// Direct matcher, used to cross-check the compiled automaton.
    pub fn matches(&self, word: &[Symbol]) -> bool {
        fn go(node: &Node, word: &[Symbol], from: usize, ends: &mut Vec<usize>) {
            match node {
                Node::Empty => ends.push(from),
                Node::Literal(sym) => {
                    if word.get(from) == Some(sym) {
                        ends.push(from + 1);
                    }
                }
                Node::Concat(parts) => {
                    let mut frontier = vec![from];
                    for part in parts {
                        let mut next = Vec::new();
                        for &f in &frontier {
                            go(part, word, f, &mut next);
                        }
                        next.sort_unstable();
                        next.dedup();
                        frontier = next;
                        if frontier.is_empty() {
                            return;
                        }
                    }
                    ends.extend(frontier);
                }
                Node::Alt(branches) => {
                    for b in branches {
                        go(b, word, from, ends);
                    }
                }
                Node::Star(inner) => {
                    let mut frontier = vec![from];
                    let mut all = vec![from];
                    loop {
                        let mut next = Vec::new();
                        for &f in &frontier {
                            go(inner, word, f, &mut next);
                        }
                        next.sort_unstable();
                        next.dedup();
                        next.retain(|e| !all.contains(e));
                        if next.is_empty() {
                            break;
                        }
                        all.extend(next.iter().copied());
                        frontier = next;
                    }
                    ends.extend(all);
                }
                Node::Plus(inner) => {
                    go(&Node::Concat(vec![(**inner).clone(), Node::Star(inner.clone())]), word, from, ends)
                }
                Node::Opt(inner) => {
                    ends.push(from);
                    go(inner, word, from, ends);
                }
            }
        }
        let mut ends = Vec::new();
        go(&self.root, word, 0, &mut ends);
        ends.contains(&word.len())
    }
}

/// Thompson construction: wire `node` between `start` and a fresh end state.
fn build(nfa: &mut Nfa, node: &Node, start: u32) -> u32 {
    match node {
        Node::Empty => {
            let end = nfa.add_state(false);
            nfa.add_epsilon(start, end);
            end
        }
        Node::Literal(sym) => {
            let end = nfa.add_state(false);
            nfa.add_transition(start, *sym, end);
            end
        }
        Node::Concat(parts) => {
            let mut cur = start;
            for p in parts {
                cur = build(nfa, p, cur);
            }
            cur
        }
        Node::Alt(branches) => {
            let end = nfa.add_state(false);
            for b in branches {
                let be = build(nfa, b, start);
                nfa.add_epsilon(be, end);
            }
            end
        }
        Node::Star(inner) => {
            let hub = nfa.add_state(false);
            nfa.add_epsilon(start, hub);
            let ie = build(nfa, inner, hub);
            nfa.add_epsilon(ie, hub);
            hub
        }
        Node::Plus(inner) => {
            let first = build(nfa, inner, start);
            let hub = nfa.add_state(false);
            nfa.add_epsilon(first, hub);
            let ie = build(nfa, inner, hub);
            nfa.add_epsilon(ie, hub);
            hub
        }
        Node::Opt(inner) => {
            let end = nfa.add_state(false);
            nfa.add_epsilon(start, end);
            let ie = build(nfa, inner, start);
            nfa.add_epsilon(ie, end);
            end
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::words_upto;
    use super::*;

    fn check_against_matcher(re: &str, alphabet: &Alphabet, max_len: usize) {
        let r = MultiTrackRegex::parse(re, alphabet).unwrap();
        let d = r.to_dfa();
        for w in words_upto(alphabet, max_len) {
            assert_eq!(d.accepts(&w), r.matches(&w), "regex {re} word {w:?}");
        }
    }

    #[test]
    fn single_track_basic() {
        let a = Alphabet::uniform(1, 2);
        let r = MultiTrackRegex::parse("0*10*", &a).unwrap();
        let d = r.to_dfa();
        assert!(d.accepts(&[1, 0, 0]));
        assert!(d.accepts(&[1]));
        assert!(!d.accepts(&[1, 1]));
        check_against_matcher("0*10*", &a, 6);
        check_against_matcher("(0|1|2)*22(0|1|2)*", &a, 6);
    }

    #[test]
    fn two_track_tuples() {
        let a = Alphabet::uniform(2, 2);
        let r = MultiTrackRegex::parse("[0,0]*[1,0][0,1][0,0]*", &a).unwrap();
        let d = r.to_dfa();
        let w = a.encode_word(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(d.accepts(&w));
        let w2 = a
            .encode_word(&[vec![0, 1, 0, 0], vec![0, 0, 1, 0]])
            .unwrap();
        assert!(d.accepts(&w2));
        check_against_matcher("[0,0]*[1,0][0,1][0,0]*", &a, 4);
        check_against_matcher("()|([0,0]|[1,0]|[2,0])*([0,0]|[1,1]|[2,2])", &a, 4);
    }

    #[test]
    fn empty_group_accepts_only_empty_word() {
        let a = Alphabet::uniform(1, 2);
        let d = MultiTrackRegex::parse("()", &a).unwrap().to_dfa();
        assert!(d.accepts(&[]));
        assert!(!d.accepts(&[0]));
        assert!(!d.accepts(&[1]));
    }

    #[test]
    fn parse_error_has_position() {
        let a = Alphabet::uniform(1, 2);
        let err = MultiTrackRegex::parse("0*(1", &a).unwrap_err();
        assert!(matches!(err, AutomatonError::RegexParse { .. }));
    }
}
