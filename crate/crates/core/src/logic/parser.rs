//! Parser for the query language. Operator precedence, loosest to
//! tightest: `<=>`, `=>`, `|`, `&`, `~`; a quantifier's scope extends to the
//! end of the enclosing group. `A` and `E` start quantifiers and carry their
//! first variable attached, as in `Ax,y` or `En`.

use super::ast::{CmpOp, Formula, OutputRhs, Term};
use super::LogicError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    Dollar,
    At,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Amp,
    Pipe,
    Tilde,
    Implies,
    Iff,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Question,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

type Spanned = (Tok, usize, usize);

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn lex(mut self) -> Result<Vec<Spanned>, LogicError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
                self.bump();
            }
            let (line, col) = (self.line, self.col);
            let c = match self.bump() {
                Some(c) => c,
                None => return Ok(out),
            };
            let tok = match c {
                b'$' => Tok::Dollar,
                b'@' => Tok::At,
                b'[' => Tok::LBracket,
                b']' => Tok::RBracket,
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b',' => Tok::Comma,
                b'&' => Tok::Amp,
                b'|' => Tok::Pipe,
                b'~' => Tok::Tilde,
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'*' => Tok::Star,
                b'/' => Tok::Slash,
                b'?' => Tok::Question,
                b'=' => {
                    if self.peek() == Some(b'>') {
                        self.bump();
                        Tok::Implies
                    } else {
                        Tok::Eq
                    }
                }
                b'!' => {
                    if self.peek() == Some(b'=') {
                        self.bump();
                        Tok::Ne
                    } else {
                        return Err(LogicError::Syntax {
                            line,
                            col,
                            msg: "expected '=' after '!'".into(),
                        });
                    }
                }
                b'<' => {
                    if self.peek() == Some(b'=') {
                        self.bump();
                        if self.peek() == Some(b'>') {
                            self.bump();
                            Tok::Iff
                        } else {
                            Tok::Le
                        }
                    } else {
                        Tok::Lt
                    }
                }
                b'>' => {
                    if self.peek() == Some(b'=') {
                        self.bump();
                        Tok::Ge
                    } else {
                        Tok::Gt
                    }
                }
                c if c.is_ascii_digit() => {
                    let mut n = (c - b'0') as u64;
                    while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
                        let d = self.bump().unwrap() - b'0';
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add(d as u64))
                            .ok_or(LogicError::Syntax {
                                line,
                                col,
                                msg: "numeric literal overflows".into(),
                            })?;
                    }
                    Tok::Num(n)
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let mut s = String::new();
                    s.push(c as char);
                    while matches!(self.peek(), Some(d) if d.is_ascii_alphanumeric() || d == b'_')
                    {
                        s.push(self.bump().unwrap() as char);
                    }
                    Tok::Ident(s)
                }
                other => {
                    return Err(LogicError::Syntax {
                        line,
                        col,
                        msg: format!("unexpected character '{}'", other as char),
                    })
                }
            };
            out.push((tok, line, col));
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn err(&self, msg: impl Into<String>) -> LogicError {
        let (line, col) = self
            .toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map(|&(_, l, c)| (l, c))
            .unwrap_or((0, 0));
        LogicError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(t, _, _)| t)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), LogicError> {
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, LogicError> {
        match self.bump() {
            Some(Tok::Ident(s)) => Ok(s),
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    /// Split a quantifier token: `An` is the quantifier `A` over variable
    /// `n`; a lone `A`/`E` takes the next identifier as its first variable.
    fn quantifier(&mut self) -> Option<(bool, String)> {
        let Some(Tok::Ident(s)) = self.peek() else {
            return None;
        };
        let s = s.clone();
        let universal = match s.chars().next() {
            Some('A') => true,
            Some('E') => false,
            _ => return None,
        };
        if s.len() >= 2 {
            let rest = &s[1..];
            if rest.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_') {
                self.bump();
                return Some((universal, rest.to_string()));
            }
            return None;
        }
        // Bare A/E followed by an identifier.
        if matches!(self.peek2(), Some(Tok::Ident(_))) {
            self.bump();
            let var = self.ident("variable").expect("peeked ident");
            return Some((universal, var));
        }
        None
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.implies()?;
        while self.peek() == Some(&Tok::Iff) {
            self.bump();
            let rhs = self.implies()?;
            lhs = Formula::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.disjunction()?;
        while self.peek() == Some(&Tok::Implies) {
            self.bump();
            let rhs = self.disjunction()?;
            lhs = Formula::Implies(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        if self.peek() == Some(&Tok::Tilde) {
            self.bump();
            let inner = self.unary()?;
            return Ok(Formula::Not(Box::new(inner)));
        }
        if let Some((universal, first)) = self.quantifier() {
            let mut vars = vec![first];
            while self.peek() == Some(&Tok::Comma) {
                self.bump();
                vars.push(self.ident("quantified variable")?);
            }
            // Scope extends to the end of the enclosing group.
            let body = self.formula()?;
            return Ok(if universal {
                Formula::Forall(vars, Box::new(body))
            } else {
                Formula::Exists(vars, Box::new(body))
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, LogicError> {
        match self.peek() {
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Some(Tok::Dollar) => {
                self.bump();
                let name = self.ident("predicate name after '$'")?;
                self.expect(Tok::LParen, "'(' after predicate name")?;
                let mut args = vec![self.term()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.bump();
                    args.push(self.term()?);
                }
                self.expect(Tok::RParen, "')' closing the call")?;
                Ok(Formula::Call(name, args))
            }
            Some(Tok::Ident(_)) if self.peek2() == Some(&Tok::LBracket) => {
                let name = self.ident("automaton name")?;
                self.expect(Tok::LBracket, "'['")?;
                let arg = self.term()?;
                self.expect(Tok::RBracket, "']'")?;
                let negated = match self.bump() {
                    Some(Tok::Eq) => false,
                    Some(Tok::Ne) => true,
                    _ => return Err(self.err("expected '=' or '!=' after output term")),
                };
                let rhs = match self.peek() {
                    Some(Tok::At) => {
                        self.bump();
                        let negative = if self.peek() == Some(&Tok::Minus) {
                            self.bump();
                            true
                        } else {
                            false
                        };
                        match self.bump() {
                            Some(Tok::Num(n)) => {
                                let v = n as i64;
                                OutputRhs::Const(if negative { -v } else { v })
                            }
                            _ => return Err(self.err("expected output value after '@'")),
                        }
                    }
                    Some(Tok::Ident(_)) => {
                        let name2 = self.ident("automaton name")?;
                        self.expect(Tok::LBracket, "'['")?;
                        let arg2 = self.term()?;
                        self.expect(Tok::RBracket, "']'")?;
                        OutputRhs::Output(name2, arg2)
                    }
                    _ => return Err(self.err("expected '@value' or 'NAME[term]'")),
                };
                Ok(Formula::OutputCmp {
                    name,
                    arg,
                    negated,
                    rhs,
                })
            }
            _ => {
                let lhs = self.term()?;
                let op = match self.bump() {
                    Some(Tok::Eq) => CmpOp::Eq,
                    Some(Tok::Ne) => CmpOp::Ne,
                    Some(Tok::Lt) => CmpOp::Lt,
                    Some(Tok::Le) => CmpOp::Le,
                    Some(Tok::Gt) => CmpOp::Gt,
                    Some(Tok::Ge) => CmpOp::Ge,
                    _ => return Err(self.err("expected a comparison operator")),
                };
                let rhs = self.term()?;
                Ok(Formula::Cmp(op, lhs, rhs))
            }
        }
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.product()?;
                    lhs = match (&lhs, &rhs) {
                        (Term::Const(a), Term::Const(b)) => Term::Const(a + b),
                        _ => Term::Add(Box::new(lhs), Box::new(rhs)),
                    };
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.product()?;
                    lhs = Term::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Term, LogicError> {
        let mut lhs = self.primary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.primary()?;
                    lhs = match (lhs, rhs) {
                        (Term::Const(c), t) | (t, Term::Const(c)) => Term::Mul(c, Box::new(t)),
                        _ => {
                            return Err(
                                self.err("multiplication must have a constant operand")
                            )
                        }
                    };
                }
                Some(Tok::Slash) => {
                    self.bump();
                    match self.primary()? {
                        Term::Const(c) => lhs = Term::Div(Box::new(lhs), c),
                        _ => return Err(self.err("division must be by a constant")),
                    }
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn primary(&mut self) -> Result<Term, LogicError> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Term::Const(n)),
            Some(Tok::Ident(v)) => Ok(Term::Var(v)),
            _ => Err(self.err("expected a term")),
        }
    }
}

/// Parse a formula, with an optional leading `?system` selector.
pub fn parse_formula(text: &str) -> Result<(Option<String>, Formula), LogicError> {
    let toks = Lexer::new(text).lex()?;
    let mut p = Parser { toks, pos: 0 };
    let system = if p.peek() == Some(&Tok::Question) {
        p.bump();
        Some(p.ident("numeration system name after '?'")?)
    } else {
        None
    };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input after formula"));
    }
    Ok((system, f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Formula {
        parse_formula(text).unwrap().1
    }

    #[test]
    fn parses_quantified_call() {
        let (sys, f) = parse_formula("?msd_kim Ax $add(x,0,x)").unwrap();
        assert_eq!(sys.as_deref(), Some("msd_kim"));
        match f {
            Formula::Forall(vars, body) => {
                assert_eq!(vars, vec!["x"]);
                assert!(matches!(*body, Formula::Call(ref n, ref a) if n == "add" && a.len() == 3));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn quantifier_scope_extends_to_group_end() {
        // The trailing implication stays inside the quantifier body.
        let f = parse("$gut(0,0) & An,x (n>=1 & $gut(n,x)) => x<=n");
        match f {
            Formula::And(lhs, rhs) => {
                assert!(matches!(*lhs, Formula::Call(..)));
                assert!(matches!(*rhs, Formula::Forall(_, ref b) if matches!(**b, Formula::Implies(..))));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn output_atoms() {
        let f = parse("An K[n]=@1 <=> (Ex $gut(n-1,x) & $gut(n,x+1))");
        assert!(matches!(f, Formula::Forall(..)));
        let f2 = parse("K[i+n]!=K[j+n]");
        match f2 {
            Formula::OutputCmp { negated, rhs, .. } => {
                assert!(negated);
                assert!(matches!(rhs, OutputRhs::Output(ref n, _) if n == "K"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negated_quantifier_binds_to_scope_end() {
        let f = parse("(Ei $p(i)) & (~Ej j<n & $p(j))");
        match f {
            Formula::And(_, rhs) => match *rhs {
                Formula::Not(inner) => {
                    assert!(matches!(*inner, Formula::Exists(_, ref b) if matches!(**b, Formula::And(..))));
                }
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn term_precedence_and_constants() {
        let f = parse("n=y+2*m");
        match f {
            Formula::Cmp(CmpOp::Eq, Term::Var(n), rhs) => {
                assert_eq!(n, "n");
                assert!(matches!(rhs, Term::Add(_, ref m) if matches!(**m, Term::Mul(2, _))));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("z = x/2"), Formula::Cmp(_, _, Term::Div(_, 2))));
        assert!(matches!(parse("x=1+2"), Formula::Cmp(_, _, Term::Const(3))));
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_formula("Ax x +").is_err());
        assert!(parse_formula("x * y = z").is_err());
        let err = parse_formula("Ax (x = ").unwrap_err();
        assert!(matches!(err, LogicError::Syntax { .. }));
    }

    #[test]
    fn bare_quantifier_letter() {
        let f = parse("A n n>=0");
        assert!(matches!(f, Formula::Forall(ref v, _) if v == &vec!["n".to_string()]));
    }
}
