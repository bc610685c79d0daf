//! The named-automaton environment a script runs against.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use super::ast::Formula;
use super::compile::{compile, eval_sentence, Rel};
use super::parser::parse_formula;
use super::LogicError;
use crate::automata::{combine_acceptors, read_walnut, Dfa, Dfao};
use crate::numeration::NumerationSystem;

/// Named synchronized automata, named output automata, the registered adder,
/// and the active numeration system. Mutation is strictly sequential (one
/// statement at a time); compilation takes an immutable snapshot.
pub struct Environment {
    system: NumerationSystem,
    preds: std::collections::BTreeMap<String, Dfa>,
    dfaos: std::collections::BTreeMap<String, Dfao>,
    adder: Option<Dfa>,
    search_path: Vec<PathBuf>,
    universes: Mutex<HashMap<usize, Arc<Dfa>>>,
}

impl Environment {
    pub fn new(system: NumerationSystem) -> Self {
        Environment {
            system,
            preds: Default::default(),
            dfaos: Default::default(),
            adder: None,
            search_path: Vec::new(),
            universes: Mutex::new(HashMap::new()),
        }
    }

    pub fn system(&self) -> &NumerationSystem {
        &self.system
    }

    pub fn add_search_dir(&mut self, dir: impl Into<PathBuf>) {
        self.search_path.push(dir.into());
    }

    pub fn search_path(&self) -> &[PathBuf] {
        &self.search_path
    }

    /// Store a synchronized automaton under `$name`.
    pub fn define_pred(&mut self, name: &str, dfa: Dfa) -> Result<(), LogicError> {
        if self.preds.contains_key(name) {
            return Err(LogicError::NameCollision(format!("${name}")));
        }
        self.preds.insert(name.to_string(), dfa);
        Ok(())
    }

    /// Store an output automaton under `NAME`.
    pub fn define_dfao(&mut self, name: &str, dfao: Dfao) -> Result<(), LogicError> {
        if self.dfaos.contains_key(name) {
            return Err(LogicError::NameCollision(name.to_string()));
        }
        self.dfaos.insert(name.to_string(), dfao);
        Ok(())
    }

    pub fn pred(&self, name: &str) -> Option<&Dfa> {
        self.preds.get(name)
    }

    pub fn dfao(&self, name: &str) -> Option<&Dfao> {
        self.dfaos.get(name)
    }

    pub fn pred_names(&self) -> impl Iterator<Item = &str> {
        self.preds.keys().map(String::as_str)
    }

    /// Register the adder that gives `+` (and scaled terms) their meaning.
    /// Until this is called, compiling arithmetic is an error.
    pub fn register_adder(&mut self, dfa: Dfa) -> Result<(), LogicError> {
        if dfa.alphabet().tracks() != 3 {
            return Err(LogicError::Script(
                "an adder must be a three-track automaton".into(),
            ));
        }
        self.adder = Some(dfa);
        Ok(())
    }

    pub fn adder(&self) -> Option<&Dfa> {
        self.adder.as_ref()
    }

    /// Automaton of k-track words whose tracks are all left-zero-padded
    /// canonical representations. Cached per track count.
    pub fn universe(&self, tracks: usize) -> Arc<Dfa> {
        let mut cache = self.universes.lock().unwrap();
        cache
            .entry(tracks)
            .or_insert_with(|| Arc::new(self.system.padded_universe(tracks)))
            .clone()
    }

    fn check_system(&self, selector: &Option<String>) -> Result<(), LogicError> {
        match selector {
            Some(s) if s != self.system.name() => Err(LogicError::WrongSystem(s.clone())),
            _ => Ok(()),
        }
    }

    /// Compile a formula given as text.
    pub fn compile_text(&self, text: &str) -> Result<Rel, LogicError> {
        let (selector, formula) = parse_formula(text)?;
        self.check_system(&selector)?;
        compile(self, &formula)
    }

    /// Decide a closed formula given as text.
    pub fn eval(&self, text: &str) -> Result<bool, LogicError> {
        let (selector, formula) = parse_formula(text)?;
        self.check_system(&selector)?;
        eval_sentence(self, &formula)
    }

    /// Compile and store a predicate; returns the stored automaton's size
    /// and, when the formula is closed, its truth value.
    pub fn def(&mut self, name: &str, text: &str) -> Result<(usize, Option<bool>), LogicError> {
        if self.preds.contains_key(name) {
            return Err(LogicError::NameCollision(format!("${name}")));
        }
        let (selector, formula) = parse_formula(text)?;
        self.check_system(&selector)?;
        self.resolve_missing(&formula);
        let rel = compile(self, &formula)?;
        let states = rel.dfa.n_states();
        let verdict = rel.vars.is_empty().then(|| rel.dfa.accepts(&[]));
        self.preds.insert(name.to_string(), rel.dfa);
        Ok((states, verdict))
    }

    /// Build an output automaton from stored one-track acceptors: output i+1
    /// on words the i-th acceptor accepts, 0 elsewhere.
    pub fn combine(&mut self, name: &str, parts: &[String]) -> Result<usize, LogicError> {
        if self.dfaos.contains_key(name) {
            return Err(LogicError::NameCollision(name.to_string()));
        }
        let mut acceptors = Vec::new();
        for p in parts {
            let dfa = self
                .preds
                .get(p)
                .ok_or_else(|| LogicError::Unresolved(format!("${p}")))?;
            if dfa.alphabet().tracks() != 1 {
                return Err(LogicError::Combine(format!(
                    "'{p}' has {} tracks; combine needs one-track acceptors",
                    dfa.alphabet().tracks()
                )));
            }
            acceptors.push(dfa);
        }
        let dfao =
            combine_acceptors(&self.system.alphabet(1), &acceptors).map_err(LogicError::Combine)?;
        let states = dfao.n_states();
        self.dfaos.insert(name.to_string(), dfao);
        Ok(states)
    }

    /// Try to load automata for names the formula references but the
    /// environment does not know, from `<name>.txt` on the search path.
    pub fn resolve_missing(&mut self, formula: &Formula) {
        let (preds, dfaos) = formula.referenced_names();
        for name in preds {
            if self.preds.contains_key(&name) {
                continue;
            }
            if let Some(text) = self.read_from_search_path(&name) {
                if let Ok(parsed) = read_walnut(&text) {
                    let bounds = vec![self.system.digit_bound(); parsed.track_systems.len()];
                    if let Ok(dfa) = parsed.into_dfa(Some(&bounds)) {
                        self.preds.insert(name, dfa);
                    }
                }
            }
        }
        for name in dfaos {
            if self.dfaos.contains_key(&name) {
                continue;
            }
            if let Some(text) = self.read_from_search_path(&name) {
                if let Ok(parsed) = read_walnut(&text) {
                    let bounds = vec![self.system.digit_bound(); parsed.track_systems.len()];
                    if let Ok(dfao) = parsed.into_dfao(Some(&bounds)) {
                        self.dfaos.insert(name, dfao);
                    }
                }
            }
        }
    }

    fn read_from_search_path(&self, name: &str) -> Option<String> {
        for dir in &self.search_path {
            let path = dir.join(format!("{name}.txt"));
            if let Ok(text) = std::fs::read_to_string(&path) {
                return Some(text);
            }
        }
        None
    }
}
