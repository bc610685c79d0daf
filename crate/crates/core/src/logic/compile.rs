//! Formula-to-automaton compilation.
//!
//! A compiled formula is a saturated, minimized DFA over the formula's free
//! variables, with one track per variable in sorted name order, accepting
//! exactly the satisfying assignments in canonical padded encoding.
//! Connectives become products, negation is complement relative to the
//! padded-canonical universe, and an existential quantifier is projection
//! followed by zero-saturation and determinization. Arithmetic is purely
//! relational: compound terms are lowered to fresh existentially quantified
//! variables constrained through the registered adder automaton.

use super::ast::{CmpOp, Formula, OutputRhs, Term};
use super::env::Environment;
use super::LogicError;
use crate::automata::{Dfa, ProductMode, Symbol};

/// A compiled relation: tracks of `dfa` correspond to `vars`, which are
/// always sorted by name.
#[derive(Debug, Clone)]
pub struct Rel {
    pub dfa: Dfa,
    pub vars: Vec<String>,
}

struct Ctx<'e> {
    env: &'e Environment,
    fresh: u32,
}

impl<'e> Ctx<'e> {
    fn fresh_name(&mut self) -> String {
        self.fresh += 1;
        format!("~{:03}", self.fresh)
    }
}

struct Lowered {
    var: String,
    constraints: Vec<Rel>,
    fresh: Vec<String>,
}

impl Lowered {
    fn plain(var: String) -> Self {
        Lowered {
            var,
            constraints: Vec::new(),
            fresh: Vec::new(),
        }
    }

    fn absorb(&mut self, other: Lowered) -> String {
        self.constraints.extend(other.constraints);
        self.fresh.extend(other.fresh);
        other.var
    }
}

/// Compile a formula against an environment snapshot.
pub fn compile(env: &Environment, formula: &Formula) -> Result<Rel, LogicError> {
    check_single_binding(formula, &mut Vec::new())?;
    let mut ctx = Ctx { env, fresh: 0 };
    compile_rec(&mut ctx, formula)
}

/// Decide a closed formula.
pub fn eval_sentence(env: &Environment, formula: &Formula) -> Result<bool, LogicError> {
    let rel = compile(env, formula)?;
    if !rel.vars.is_empty() {
        return Err(LogicError::FreeVariables(rel.vars.join(", ")));
    }
    Ok(rel.dfa.accepts(&[]))
}

fn check_single_binding(f: &Formula, bound: &mut Vec<String>) -> Result<(), LogicError> {
    match f {
        Formula::Exists(vars, body) | Formula::Forall(vars, body) => {
            for v in vars {
                if bound.contains(v) {
                    return Err(LogicError::DuplicateBinding(v.clone()));
                }
            }
            let depth = bound.len();
            bound.extend(vars.iter().cloned());
            check_single_binding(body, bound)?;
            bound.truncate(depth);
            Ok(())
        }
        Formula::Not(a) => check_single_binding(a, bound),
        Formula::And(a, b)
        | Formula::Or(a, b)
        | Formula::Implies(a, b)
        | Formula::Iff(a, b) => {
            check_single_binding(a, bound)?;
            check_single_binding(b, bound)
        }
        _ => Ok(()),
    }
}

fn compile_rec(ctx: &mut Ctx, f: &Formula) -> Result<Rel, LogicError> {
    match f {
        Formula::Cmp(op, t1, t2) => compile_cmp(ctx, *op, t1, t2),
        Formula::Call(name, args) => compile_call(ctx, name, args),
        Formula::OutputCmp {
            name,
            arg,
            negated,
            rhs,
        } => compile_output(ctx, name, arg, *negated, rhs),
        Formula::Not(a) => {
            let ra = compile_rec(ctx, a)?;
            Ok(negate(ctx.env, &ra))
        }
        Formula::And(a, b) => {
            let ra = compile_rec(ctx, a)?;
            let rb = compile_rec(ctx, b)?;
            Ok(conj(ctx.env, &ra, &rb))
        }
        Formula::Or(a, b) => {
            let ra = compile_rec(ctx, a)?;
            let rb = compile_rec(ctx, b)?;
            Ok(disj(ctx.env, &ra, &rb))
        }
        Formula::Implies(a, b) => {
            let ra = compile_rec(ctx, a)?;
            let rb = compile_rec(ctx, b)?;
            Ok(disj(ctx.env, &negate(ctx.env, &ra), &rb))
        }
        Formula::Iff(a, b) => {
            let ra = compile_rec(ctx, a)?;
            let rb = compile_rec(ctx, b)?;
            let both = conj(ctx.env, &ra, &rb);
            let neither = conj(ctx.env, &negate(ctx.env, &ra), &negate(ctx.env, &rb));
            Ok(disj(ctx.env, &both, &neither))
        }
        Formula::Exists(vars, body) => {
            let mut rel = compile_rec(ctx, body)?;
            for v in vars {
                rel = exists_var(ctx.env, rel, v)?;
            }
            Ok(rel)
        }
        Formula::Forall(vars, body) => {
            let mut rel = negate(ctx.env, &compile_rec(ctx, body)?);
            for v in vars {
                rel = exists_var(ctx.env, rel, v)?;
            }
            Ok(negate(ctx.env, &rel))
        }
    }
}

// ---------------------------------------------------------------- atoms

fn compile_cmp(ctx: &mut Ctx, op: CmpOp, t1: &Term, t2: &Term) -> Result<Rel, LogicError> {
    let mut l1 = lower_term(ctx, t1)?;
    let l2 = lower_term(ctx, t2)?;
    let v2 = l1.absorb(l2);
    let v1 = l1.var.clone();
    let base = if v1 == v2 {
        // Reflexive comparison of one variable.
        let truth = matches!(op, CmpOp::Eq | CmpOp::Le | CmpOp::Ge);
        single_var_rel(ctx.env, &v1, truth)
    } else {
        cmp_rel(ctx.env, op, &v1, &v2)
    };
    Ok(assemble(ctx.env, base, l1.constraints, l1.fresh))
}

fn compile_call(ctx: &mut Ctx, name: &str, args: &[Term]) -> Result<Rel, LogicError> {
    let stored = ctx
        .env
        .pred(name)
        .ok_or_else(|| LogicError::Unresolved(format!("${name}")))?
        .clone();
    let want = stored.alphabet().tracks();
    if want != args.len() {
        return Err(LogicError::Arity {
            name: format!("${name}"),
            want,
            got: args.len(),
        });
    }
    let mut constraints = Vec::new();
    let mut fresh = Vec::new();
    let mut arg_vars = Vec::with_capacity(args.len());
    for t in args {
        let l = lower_term(ctx, t)?;
        constraints.extend(l.constraints);
        fresh.extend(l.fresh);
        arg_vars.push(l.var);
    }
    let (base, extra_fresh) = apply_relation(ctx, &stored, &arg_vars)?;
    fresh.extend(extra_fresh);
    Ok(assemble(ctx.env, base, constraints, fresh))
}

fn compile_output(
    ctx: &mut Ctx,
    name: &str,
    arg: &Term,
    negated: bool,
    rhs: &OutputRhs,
) -> Result<Rel, LogicError> {
    let dfao = ctx
        .env
        .dfao(name)
        .ok_or_else(|| LogicError::Unresolved(name.to_string()))?
        .clone();
    let mut l = lower_term(ctx, arg)?;
    let v = l.var.clone();
    let positive = match rhs {
        OutputRhs::Const(c) => {
            let acc = dfao.acceptor_for_output(*c);
            clean_single(ctx.env, acc, &v)
        }
        OutputRhs::Output(name2, arg2) => {
            let dfao2 = ctx
                .env
                .dfao(name2)
                .ok_or_else(|| LogicError::Unresolved(name2.to_string()))?
                .clone();
            let l2 = lower_term(ctx, arg2)?;
            let v2 = l.absorb(l2);
            let mut common: Vec<i64> = dfao
                .output_values()
                .into_iter()
                .filter(|c| dfao2.output_values().contains(c))
                .collect();
            common.dedup();
            let mut acc: Option<Rel> = None;
            for c in common {
                let r1 = clean_single(ctx.env, dfao.acceptor_for_output(c), &v);
                let r2 = clean_single(ctx.env, dfao2.acceptor_for_output(c), &v2);
                let both = conj(ctx.env, &r1, &r2);
                acc = Some(match acc {
                    None => both,
                    Some(a) => disj(ctx.env, &a, &both),
                });
            }
            acc.unwrap_or_else(|| {
                let mut vars = vec![v.clone(), v2.clone()];
                vars.sort();
                vars.dedup();
                Rel {
                    dfa: Dfa::empty(ctx.env.system().alphabet(vars.len())),
                    vars,
                }
            })
        }
    };
    let base = if negated {
        negate(ctx.env, &positive)
    } else {
        positive
    };
    Ok(assemble(ctx.env, base, l.constraints, l.fresh))
}

/// Conjoin constraints onto a base relation, then project away every fresh
/// helper variable.
fn assemble(env: &Environment, base: Rel, constraints: Vec<Rel>, fresh: Vec<String>) -> Rel {
    let mut rel = base;
    for c in constraints {
        rel = conj(env, &rel, &c);
    }
    for f in fresh {
        rel = exists_var(env, rel, &f).expect("fresh variable is present");
    }
    rel
}

// ----------------------------------------------------------- term lowering

fn lower_term(ctx: &mut Ctx, t: &Term) -> Result<Lowered, LogicError> {
    match t {
        Term::Var(v) => Ok(Lowered::plain(v.clone())),
        Term::Const(c) => {
            let v = ctx.fresh_name();
            let rel = const_rel(ctx.env, &v, *c)?;
            Ok(Lowered {
                var: v.clone(),
                constraints: vec![rel],
                fresh: vec![v],
            })
        }
        Term::Add(a, b) => {
            let mut la = lower_term(ctx, a)?;
            let vb = {
                let lb = lower_term(ctx, b)?;
                la.absorb(lb)
            };
            let s = ctx.fresh_name();
            let (rel, fresh) = adder_rel(ctx, &la.var.clone(), &vb, &s)?;
            la.constraints.push(rel);
            la.fresh.extend(fresh);
            la.fresh.push(s.clone());
            la.var = s;
            Ok(la)
        }
        Term::Sub(a, b) => {
            let mut la = lower_term(ctx, a)?;
            let vb = {
                let lb = lower_term(ctx, b)?;
                la.absorb(lb)
            };
            // a - b = d  <=>  b + d = a; no d exists when b > a.
            let d = ctx.fresh_name();
            let va = la.var.clone();
            let (rel, fresh) = adder_rel(ctx, &vb, &d, &va)?;
            la.constraints.push(rel);
            la.fresh.extend(fresh);
            la.fresh.push(d.clone());
            la.var = d;
            Ok(la)
        }
        Term::Mul(c, t) => {
            if *c > 64 {
                return Err(LogicError::ConstantTooLarge(*c));
            }
            if *c == 0 {
                return lower_term(ctx, &Term::Const(0));
            }
            let mut l = lower_term(ctx, t)?;
            if *c == 1 {
                return Ok(l);
            }
            // Binary doubling chain through the adder.
            let mut power = l.var.clone();
            let mut acc: Option<String> = None;
            let mut rem = *c;
            while rem > 0 {
                if rem & 1 == 1 {
                    acc = Some(match acc {
                        None => power.clone(),
                        Some(a) => {
                            let s = ctx.fresh_name();
                            let (rel, fresh) = adder_rel(ctx, &a, &power, &s)?;
                            l.constraints.push(rel);
                            l.fresh.extend(fresh);
                            l.fresh.push(s.clone());
                            s
                        }
                    });
                }
                rem >>= 1;
                if rem > 0 {
                    let dbl = ctx.fresh_name();
                    let (rel, fresh) = adder_rel(ctx, &power, &power, &dbl)?;
                    l.constraints.push(rel);
                    l.fresh.extend(fresh);
                    l.fresh.push(dbl.clone());
                    power = dbl;
                }
            }
            l.var = acc.expect("c > 0");
            Ok(l)
        }
        Term::Div(t, c) => {
            if *c == 0 {
                return Err(LogicError::Script("division by zero".into()));
            }
            if *c > 64 {
                return Err(LogicError::ConstantTooLarge(*c));
            }
            let mut l = lower_term(ctx, t)?;
            if *c == 1 {
                return Ok(l);
            }
            // q = t / c  <=>  exists r: c*q + r = t and r < c.
            let q = ctx.fresh_name();
            let r = ctx.fresh_name();
            let scaled = lower_term(ctx, &Term::Mul(*c, Box::new(Term::Var(q.clone()))))?;
            l.constraints.extend(scaled.constraints);
            l.fresh.extend(scaled.fresh);
            let vt = l.var.clone();
            let (rel, fresh) = adder_rel(ctx, &scaled.var, &r, &vt)?;
            l.constraints.push(rel);
            l.fresh.extend(fresh);
            let bound = lower_term(ctx, &Term::Const(*c as u64))?;
            let cv = bound.var.clone();
            l.constraints.extend(bound.constraints);
            l.fresh.extend(bound.fresh);
            l.constraints.push(cmp_rel(ctx.env, CmpOp::Lt, &r, &cv));
            l.fresh.push(r);
            l.fresh.push(q.clone());
            l.var = q;
            Ok(l)
        }
    }
}

/// Bind the registered adder to (x, y, z) with x + y = z.
fn adder_rel(
    ctx: &mut Ctx,
    x: &str,
    y: &str,
    z: &str,
) -> Result<(Rel, Vec<String>), LogicError> {
    let adder = ctx
        .env
        .adder()
        .ok_or_else(|| LogicError::NoAdder(ctx.env.system().name().to_string()))?
        .clone();
    apply_relation(ctx, &adder, &[x.to_string(), y.to_string(), z.to_string()])
}

/// Bind a stored k-track relation to named arguments, handling repeated
/// names through fresh variables tied by equality.
fn apply_relation(
    ctx: &mut Ctx,
    dfa: &Dfa,
    args: &[String],
) -> Result<(Rel, Vec<String>), LogicError> {
    let mut names: Vec<String> = args.to_vec();
    let mut fresh = Vec::new();
    let mut ties: Vec<(String, String)> = Vec::new();
    for i in 0..names.len() {
        if names[..i].contains(&names[i]) {
            let w = ctx.fresh_name();
            ties.push((w.clone(), names[i].clone()));
            names[i] = w.clone();
            fresh.push(w);
        }
    }
    let mut rel = bind_distinct(ctx.env, dfa, &names);
    for (w, orig) in ties {
        let eq = cmp_rel(ctx.env, CmpOp::Eq, &w, &orig);
        rel = conj(ctx.env, &rel, &eq);
    }
    Ok((rel, fresh))
}

/// Permute the tracks of `dfa` (in positional order `names`) into sorted
/// name order and restrict to the padded-canonical universe.
fn bind_distinct(env: &Environment, dfa: &Dfa, names: &[String]) -> Rel {
    let mut sorted: Vec<String> = names.to_vec();
    sorted.sort();
    let alphabet = dfa.alphabet().clone();
    let permuted = if sorted == names {
        dfa.clone()
    } else {
        // position of each original track in the sorted order
        let pos: Vec<usize> = names
            .iter()
            .map(|n| sorted.iter().position(|s| s == n).unwrap())
            .collect();
        let nsym = alphabet.symbol_count();
        let mut map = vec![0 as Symbol; nsym];
        let mut new_digits = vec![0u8; names.len()];
        let mut old_digits = vec![0u8; names.len()];
        for sym in alphabet.symbols() {
            alphabet.decode_into(sym, &mut new_digits);
            for (old_track, &p) in pos.iter().enumerate() {
                old_digits[old_track] = new_digits[p];
            }
            map[sym as usize] = alphabet.encode(&old_digits).expect("same bounds");
        }
        let mut out = Dfa::new(alphabet.clone(), dfa.n_states());
        for s in 0..dfa.n_states() as u32 {
            out.set_accepting(s, dfa.is_accepting(s));
            for sym in alphabet.symbols() {
                if let Some(t) = dfa.step(s, map[sym as usize]) {
                    out.set_transition(s, sym, t);
                }
            }
        }
        out
    };
    let clean = permuted
        .product(&env.universe(names.len()), ProductMode::And)
        .expect("same alphabet");
    Rel {
        dfa: clean,
        vars: sorted,
    }
}

// ------------------------------------------------------------ base relations

/// Accept-all (or accept-none) relation over one variable.
fn single_var_rel(env: &Environment, var: &str, truth: bool) -> Rel {
    let dfa = if truth {
        env.universe(1).as_ref().clone()
    } else {
        Dfa::empty(env.system().alphabet(1))
    };
    Rel {
        dfa,
        vars: vec![var.to_string()],
    }
}

/// One-track automaton pinning a variable to a constant: 0* then the
/// canonical representation.
fn const_rel(env: &Environment, var: &str, c: u64) -> Result<Rel, LogicError> {
    let word = env.system().to_canonical(c);
    let alphabet = env.system().alphabet(1);
    let mut dfa = Dfa::new(alphabet, word.len() + 1);
    dfa.set_transition(0, 0, 0);
    for (i, &d) in word.iter().enumerate() {
        dfa.set_transition(i as u32, d as u16, i as u32 + 1);
    }
    dfa.set_accepting(word.len() as u32, true);
    Ok(Rel {
        dfa: dfa.minimize(),
        vars: vec![var.to_string()],
    })
}

/// Two-track comparison over distinct variables. Padded canonical words of
/// equal length compare by value exactly as they compare lexicographically.
fn cmp_rel(env: &Environment, op: CmpOp, v1: &str, v2: &str) -> Rel {
    debug_assert_ne!(v1, v2);
    if let CmpOp::Ne = op {
        return negate(env, &cmp_rel(env, CmpOp::Eq, v1, v2));
    }
    let mut vars = vec![v1.to_string(), v2.to_string()];
    vars.sort();
    let left = vars.iter().position(|v| v == v1).unwrap();
    let right = 1 - left;
    let (strict, with_eq) = match op {
        CmpOp::Eq => (false, true),
        CmpOp::Lt => (true, false),
        CmpOp::Le => (true, true),
        CmpOp::Gt | CmpOp::Ge => {
            // mirror: a > b  <=>  b < a
            let mirrored = match op {
                CmpOp::Gt => CmpOp::Lt,
                _ => CmpOp::Le,
            };
            return Rel {
                dfa: cmp_rel(env, mirrored, v2, v1).dfa,
                vars,
            };
        }
        CmpOp::Ne => unreachable!(),
    };
    let alphabet = env.system().alphabet(2);
    let n_states = if strict { 2 } else { 1 };
    let mut dfa = Dfa::new(alphabet.clone(), n_states);
    let mut digits = vec![0u8; 2];
    for sym in alphabet.symbols() {
        alphabet.decode_into(sym, &mut digits);
        let (dl, dr) = (digits[left], digits[right]);
        if dl == dr {
            dfa.set_transition(0, sym, 0);
        } else if strict && dl < dr {
            dfa.set_transition(0, sym, 1);
        }
        if strict {
            dfa.set_transition(1, sym, 1);
        }
    }
    if with_eq {
        dfa.set_accepting(0, true);
    }
    if strict {
        dfa.set_accepting(1, true);
    }
    let clean = dfa
        .product(&env.universe(2), ProductMode::And)
        .expect("same alphabet");
    Rel { dfa: clean, vars }
}

/// Single-track acceptor restricted to canonical padded words.
fn clean_single(env: &Environment, acc: Dfa, var: &str) -> Rel {
    let clean = acc
        .product(&env.universe(1), ProductMode::And)
        .expect("same alphabet");
    Rel {
        dfa: clean,
        vars: vec![var.to_string()],
    }
}

// ------------------------------------------------------------- connectives

/// Embed `rel` into the sorted variable superset `target`.
fn cylindrify(env: &Environment, rel: &Rel, target: &[String]) -> Dfa {
    if rel.vars == target {
        return rel.dfa.clone();
    }
    let sys = env.system();
    let target_alphabet = sys.alphabet(target.len());
    let src_alphabet = rel.dfa.alphabet();
    let positions: Vec<usize> = rel
        .vars
        .iter()
        .map(|v| target.iter().position(|t| t == v).expect("subset"))
        .collect();
    let nsym = target_alphabet.symbol_count();
    let mut map = vec![0 as Symbol; nsym];
    let mut digits = vec![0u8; target.len()];
    let mut sub = vec![0u8; rel.vars.len()];
    for sym in target_alphabet.symbols() {
        target_alphabet.decode_into(sym, &mut digits);
        for (i, &p) in positions.iter().enumerate() {
            sub[i] = digits[p];
        }
        map[sym as usize] = src_alphabet.encode(&sub).expect("same digit bounds");
    }
    let mut out = Dfa::new(target_alphabet, rel.dfa.n_states());
    for s in 0..rel.dfa.n_states() as u32 {
        out.set_accepting(s, rel.dfa.is_accepting(s));
        for sym in 0..nsym {
            if let Some(t) = rel.dfa.step(s, map[sym]) {
                out.set_transition(s, sym as Symbol, t);
            }
        }
    }
    out
}

fn merged_vars(a: &Rel, b: &Rel) -> Vec<String> {
    let mut vars = a.vars.clone();
    for v in &b.vars {
        if !vars.contains(v) {
            vars.push(v.clone());
        }
    }
    vars.sort();
    vars
}

pub(crate) fn conj(env: &Environment, a: &Rel, b: &Rel) -> Rel {
    let vars = merged_vars(a, b);
    let da = cylindrify(env, a, &vars);
    let db = cylindrify(env, b, &vars);
    let mut dfa = da.product(&db, ProductMode::And).expect("same alphabet");
    if vars != a.vars || vars != b.vars {
        dfa = dfa
            .product(&env.universe(vars.len()), ProductMode::And)
            .expect("same alphabet");
    }
    Rel { dfa, vars }
}

pub(crate) fn disj(env: &Environment, a: &Rel, b: &Rel) -> Rel {
    let vars = merged_vars(a, b);
    let da = cylindrify(env, a, &vars);
    let db = cylindrify(env, b, &vars);
    let mut dfa = da.product(&db, ProductMode::Or).expect("same alphabet");
    if vars != a.vars || vars != b.vars {
        dfa = dfa
            .product(&env.universe(vars.len()), ProductMode::And)
            .expect("same alphabet");
    }
    Rel { dfa, vars }
}

/// Complement relative to the padded-canonical universe.
pub(crate) fn negate(env: &Environment, a: &Rel) -> Rel {
    let dfa = a
        .dfa
        .complement()
        .product(&env.universe(a.vars.len()), ProductMode::And)
        .expect("same alphabet");
    Rel {
        dfa,
        vars: a.vars.clone(),
    }
}

/// Existential quantification: erase the track, close under leading zeros,
/// determinize, minimize. Quantifying a variable the formula does not
/// mention is a no-op.
pub(crate) fn exists_var(env: &Environment, rel: Rel, var: &str) -> Result<Rel, LogicError> {
    let Ok(pos) = rel.vars.binary_search(&var.to_string()) else {
        return Ok(rel);
    };
    let nfa = rel.dfa.project(pos)?;
    let dfa = nfa.determinize().saturate();
    let mut vars = rel.vars;
    vars.remove(pos);
    let _ = env;
    Ok(Rel { dfa, vars })
}
