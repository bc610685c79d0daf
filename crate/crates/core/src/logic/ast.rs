//! Abstract syntax of the query language.

use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(u64),
    Add(Box<Term>, Box<Term>),
    /// Guarded monus: `a - b` denotes the d with a = b + d and is
    /// unsatisfiable when b exceeds a.
    Sub(Box<Term>, Box<Term>),
    /// Multiplication by an integer constant only.
    Mul(u64, Box<Term>),
    /// Floor division by an integer constant only.
    Div(Box<Term>, u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

/// Right-hand side of an output comparison `NAME[t] = …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutputRhs {
    /// `@c`
    Const(i64),
    /// `NAME2[t2]`
    Output(String, Term),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Cmp(CmpOp, Term, Term),
    /// `$name(t1, …, tk)`
    Call(String, Vec<Term>),
    /// `NAME[t] = rhs` or `NAME[t] != rhs`
    OutputCmp {
        name: String,
        arg: Term,
        negated: bool,
        rhs: OutputRhs,
    },
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
}

impl Term {
    pub fn vars_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::Add(a, b) | Term::Sub(a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
            Term::Mul(_, t) | Term::Div(t, _) => t.vars_into(out),
        }
    }
}

impl Formula {
    /// Free variables, sorted by name.
    pub fn free_vars(&self) -> Vec<String> {
        let mut set = BTreeSet::new();
        self.free_vars_into(&mut set, &mut Vec::new());
        set.into_iter().collect()
    }

    fn atom_vars(terms: &[&Term], out: &mut BTreeSet<String>, bound: &[String]) {
        let mut s = BTreeSet::new();
        for t in terms {
            t.vars_into(&mut s);
        }
        out.extend(s.into_iter().filter(|v| !bound.contains(v)));
    }

    fn free_vars_into(&self, out: &mut BTreeSet<String>, bound: &mut Vec<String>) {
        match self {
            Formula::Cmp(_, a, b) => Self::atom_vars(&[a, b], out, bound),
            Formula::Call(_, args) => {
                let refs: Vec<&Term> = args.iter().collect();
                Self::atom_vars(&refs, out, bound);
            }
            Formula::OutputCmp { arg, rhs, .. } => match rhs {
                OutputRhs::Output(_, t2) => Self::atom_vars(&[arg, t2], out, bound),
                OutputRhs::Const(_) => Self::atom_vars(&[arg], out, bound),
            },
            Formula::Not(f) => f.free_vars_into(out, bound),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.free_vars_into(out, bound);
                b.free_vars_into(out, bound);
            }
            Formula::Exists(vars, f) | Formula::Forall(vars, f) => {
                let depth = bound.len();
                bound.extend(vars.iter().cloned());
                f.free_vars_into(out, bound);
                bound.truncate(depth);
            }
        }
    }

    /// Names of predicate calls and output automata, for pre-resolution.
    pub fn referenced_names(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut preds = BTreeSet::new();
        let mut dfaos = BTreeSet::new();
        self.collect_names(&mut preds, &mut dfaos);
        (preds, dfaos)
    }

    fn collect_names(&self, preds: &mut BTreeSet<String>, dfaos: &mut BTreeSet<String>) {
        match self {
            Formula::Call(name, _) => {
                preds.insert(name.clone());
            }
            Formula::OutputCmp { name, rhs, .. } => {
                dfaos.insert(name.clone());
                if let OutputRhs::Output(n2, _) = rhs {
                    dfaos.insert(n2.clone());
                }
            }
            Formula::Not(f) => f.collect_names(preds, dfaos),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_names(preds, dfaos);
                b.collect_names(preds, dfaos);
            }
            Formula::Exists(_, f) | Formula::Forall(_, f) => f.collect_names(preds, dfaos),
            Formula::Cmp(..) => {}
        }
    }
}
