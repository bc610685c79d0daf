//! The script language driving the engine: `def`, `eval`, `reg`, `combine`
//! and `load` statements, each terminated by ':' (or ';'), with `#` comments.

use std::time::Instant;

use super::env::Environment;
use super::parser::parse_formula;
use super::LogicError;
use crate::automata::MultiTrackRegex;
use crate::numeration::NumerationSystem;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TrackSpec {
    System(String),
    /// Explicit digit set such as {0,1,2}.
    Digits(Vec<u8>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    Def { name: String, formula: String },
    Eval { name: String, formula: String },
    Reg {
        name: String,
        tracks: Vec<TrackSpec>,
        regex: String,
    },
    Combine { name: String, parts: Vec<String> },
    Load { path: String },
}

/// Result of one executed statement.
#[derive(Debug, Clone)]
pub struct StatementOutcome {
    pub name: String,
    pub kind: &'static str,
    /// Truth value, for statements that decide a closed formula.
    pub verdict: Option<bool>,
    /// State count of the automaton produced, when one is stored.
    pub states: Option<usize>,
    pub millis: u128,
}

impl std::fmt::Display for StatementOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}", self.kind, self.name)?;
        if let Some(v) = self.verdict {
            write!(f, ": {}", if v { "TRUE" } else { "FALSE" })?;
        }
        if let Some(s) = self.states {
            write!(f, " ({s} states)")?;
        }
        write!(f, " [{} ms]", self.millis)
    }
}

/// Strip comments (`#` to end of line, outside quotes).
fn strip_comments(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_quotes = false;
    let mut in_comment = false;
    for c in text.chars() {
        match c {
            '\n' => {
                in_comment = false;
                out.push(c);
            }
            '"' if !in_comment => {
                in_quotes = !in_quotes;
                out.push(c);
            }
            '#' if !in_quotes && !in_comment => in_comment = true,
            _ if in_comment => {}
            _ => out.push(c),
        }
    }
    out
}

/// Split statements on ':' / ';' outside quotes.
fn split_statements(text: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut cur = String::new();
    let mut in_quotes = false;
    for c in text.chars() {
        match c {
            '"' => {
                in_quotes = !in_quotes;
                cur.push(c);
            }
            ':' | ';' if !in_quotes => {
                if !cur.trim().is_empty() {
                    parts.push(std::mem::take(&mut cur));
                } else {
                    cur.clear();
                }
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        parts.push(cur);
    }
    parts
}

/// Tokenize one statement: bare words, quoted strings, {…} digit sets.
fn statement_tokens(text: &str) -> Result<Vec<String>, LogicError> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '"' {
            chars.next();
            let mut s = String::from("\"");
            for c in chars.by_ref() {
                if c == '"' {
                    break;
                }
                s.push(c);
            }
            toks.push(s);
        } else if c == '{' {
            let mut s = String::new();
            for c in chars.by_ref() {
                s.push(c);
                if c == '}' {
                    break;
                }
            }
            toks.push(s);
        } else {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || c == '"' || c == '{' {
                    break;
                }
                s.push(c);
                chars.next();
            }
            toks.push(s);
        }
    }
    Ok(toks)
}

pub fn parse_statement(text: &str) -> Result<Statement, LogicError> {
    let toks = statement_tokens(text)?;
    let bad = |msg: String| LogicError::Script(msg);
    let quoted = |t: &String| -> Option<String> { t.strip_prefix('"').map(str::to_string) };
    match toks.first().map(String::as_str) {
        Some("def") => {
            if toks.len() != 3 {
                return Err(bad(format!("def needs a name and a formula: {text:?}")));
            }
            Ok(Statement::Def {
                name: toks[1].clone(),
                formula: quoted(&toks[2]).ok_or_else(|| bad("def formula must be quoted".into()))?,
            })
        }
        Some("eval") => {
            if toks.len() != 3 {
                return Err(bad(format!("eval needs a name and a formula: {text:?}")));
            }
            Ok(Statement::Eval {
                name: toks[1].clone(),
                formula: quoted(&toks[2])
                    .ok_or_else(|| bad("eval formula must be quoted".into()))?,
            })
        }
        Some("reg") => {
            if toks.len() < 4 {
                return Err(bad("reg needs a name, track systems, and a regex".into()));
            }
            let regex = quoted(toks.last().unwrap())
                .ok_or_else(|| bad("reg pattern must be quoted".into()))?;
            let mut tracks = Vec::new();
            for t in &toks[2..toks.len() - 1] {
                if let Some(body) = t.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
                    let digits: Vec<u8> = body
                        .split(',')
                        .map(|d| {
                            d.trim()
                                .parse::<u8>()
                                .map_err(|e| bad(format!("bad digit '{d}': {e}")))
                        })
                        .collect::<Result<_, _>>()?;
                    tracks.push(TrackSpec::Digits(digits));
                } else {
                    tracks.push(TrackSpec::System(t.clone()));
                }
            }
            Ok(Statement::Reg {
                name: toks[1].clone(),
                tracks,
                regex,
            })
        }
        Some("combine") => {
            if toks.len() < 3 {
                return Err(bad("combine needs a name and at least one acceptor".into()));
            }
            Ok(Statement::Combine {
                name: toks[1].clone(),
                parts: toks[2..].to_vec(),
            })
        }
        Some("load") => {
            if toks.len() != 2 {
                return Err(bad("load needs a file name".into()));
            }
            Ok(Statement::Load {
                path: toks[1].clone(),
            })
        }
        Some(other) => Err(bad(format!("unknown command '{other}'"))),
        None => Err(bad("empty statement".into())),
    }
}

pub fn parse_script(text: &str) -> Result<Vec<Statement>, LogicError> {
    split_statements(&strip_comments(text))
        .iter()
        .map(|s| parse_statement(s))
        .collect()
}

pub fn execute_statement(
    env: &mut Environment,
    stmt: &Statement,
) -> Result<StatementOutcome, LogicError> {
    let start = Instant::now();
    let outcome = match stmt {
        Statement::Def { name, formula } => {
            let (states, verdict) = env.def(name, formula)?;
            StatementOutcome {
                name: name.clone(),
                kind: "def",
                verdict,
                states: Some(states),
                millis: 0,
            }
        }
        Statement::Eval { name, formula } => {
            let (selector, ast) = parse_formula(formula)?;
            if let Some(s) = &selector {
                if s != env.system().name() {
                    return Err(LogicError::WrongSystem(s.clone()));
                }
            }
            env.resolve_missing(&ast);
            let rel = super::compile::compile(env, &ast)?;
            let verdict = rel.vars.is_empty().then(|| rel.dfa.accepts(&[]));
            StatementOutcome {
                name: name.clone(),
                kind: "eval",
                verdict,
                states: Some(rel.dfa.n_states()),
                millis: 0,
            }
        }
        Statement::Reg {
            name,
            tracks,
            regex,
        } => {
            let mut bounds = Vec::new();
            for t in tracks {
                match t {
                    TrackSpec::System(s) => {
                        let sys = NumerationSystem::by_name(s).ok_or_else(|| {
                            LogicError::Unresolved(format!("numeration system '{s}'"))
                        })?;
                        bounds.push(sys.digit_bound());
                    }
                    TrackSpec::Digits(ds) => {
                        let max = ds.iter().copied().max().unwrap_or(0);
                        let contiguous = (0..=max).all(|d| ds.contains(&d));
                        if !contiguous {
                            return Err(LogicError::Script(format!(
                                "digit set {ds:?} must be contiguous from 0"
                            )));
                        }
                        bounds.push(max);
                    }
                }
            }
            let alphabet = crate::automata::Alphabet::new(bounds)
                .map_err(LogicError::Automaton)?;
            let re = MultiTrackRegex::parse(regex, &alphabet)?;
            let dfa = re.to_dfa();
            let states = dfa.n_states();
            env.define_pred(name, dfa)?;
            StatementOutcome {
                name: name.clone(),
                kind: "reg",
                verdict: None,
                states: Some(states),
                millis: 0,
            }
        }
        Statement::Combine { name, parts } => {
            let states = env.combine(name, parts)?;
            StatementOutcome {
                name: name.clone(),
                kind: "combine",
                verdict: None,
                states: Some(states),
                millis: 0,
            }
        }
        Statement::Load { path } => {
            let mut text = None;
            for dir in env.search_path() {
                if let Ok(t) = std::fs::read_to_string(dir.join(path)) {
                    text = Some(t);
                    break;
                }
            }
            let text = match text {
                Some(t) => t,
                None => std::fs::read_to_string(path)
                    .map_err(|e| LogicError::Script(format!("load {path}: {e}")))?,
            };
            let outcomes = run_script(env, &text)?;
            StatementOutcome {
                name: path.clone(),
                kind: "load",
                verdict: Some(outcomes.iter().all(|o| o.verdict != Some(false))),
                states: None,
                millis: 0,
            }
        }
    };
    Ok(StatementOutcome {
        millis: start.elapsed().as_millis(),
        ..outcome
    })
}

/// Execute a script against the environment, statement by statement.
pub fn run_script(
    env: &mut Environment,
    text: &str,
) -> Result<Vec<StatementOutcome>, LogicError> {
    let statements = parse_script(text)?;
    let mut outcomes = Vec::with_capacity(statements.len());
    for stmt in &statements {
        outcomes.push(execute_statement(env, stmt)?);
    }
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_statement_forms() {
        let script = r#"
# a comment
def kks "?msd_kim KP[n-1]=@1":
combine K kks:
reg isk msd_kim "0*10*":
reg lastd {0,1,2} {0,1,2} "()|([0,0]|[1,0]|[2,0])*([0,0]|[1,1]|[2,2])":
eval checkv "?msd_kim Ax $add(x,0,x)":
"#;
        let stmts = parse_script(script).unwrap();
        assert_eq!(stmts.len(), 5);
        assert!(matches!(&stmts[0], Statement::Def { name, .. } if name == "kks"));
        assert!(matches!(&stmts[1], Statement::Combine { parts, .. } if parts == &vec!["kks".to_string()]));
        assert!(matches!(&stmts[3], Statement::Reg { tracks, .. } if tracks.len() == 2));
    }

    #[test]
    fn multi_line_statement() {
        let script = "eval check_iv \"?msd_kim Ax,y,z,t (Er $add(x,y,r) & $add(r,z,t)) <=> \n   (Es $add(y,z,s) & $add(x,s,t))\":";
        let stmts = parse_script(script).unwrap();
        assert_eq!(stmts.len(), 1);
    }
}
