//! Abstract syntax for first-order modal logic problems.
//!
//! Formulas are built from exactly nine constructors: atoms, the four
//! classical connectives, the two modalities and the two quantifiers.
//! Surface sugar such as `<=>` is removed by the parser before a formula
//! reaches this representation.

use indexmap::{IndexMap, IndexSet};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    /// Function application; always at least one argument.
    App(String, Vec<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    Dia(Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(pred.into(), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn boxed(f: Formula) -> Formula {
        Formula::Box(Box::new(f))
    }

    pub fn dia(f: Formula) -> Formula {
        Formula::Dia(Box::new(f))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    /// Variables occurring outside the scope of any binder for them.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(_, args) => {
                for t in args {
                    t.collect_free(bound, out);
                }
            }
            Formula::Not(f) | Formula::Box(f) | Formula::Dia(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(x, body) | Formula::Exists(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Nesting depth; atoms have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(..) => 0,
            Formula::Not(f) | Formula::Box(f) | Formula::Dia(f) => 1 + f.depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Forall(_, f) | Formula::Exists(_, f) => 1 + f.depth(),
        }
    }
}

impl Term {
    fn collect_free(&self, bound: &[String], out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                if !bound.iter().any(|b| b == x) {
                    out.insert(x.clone());
                }
            }
            Term::Const(_) => {}
            Term::App(_, args) => {
                for t in args {
                    t.collect_free(bound, out);
                }
            }
        }
    }
}

/// Free variables of a formula.
pub fn free_vars(formula: &Formula) -> BTreeSet<String> {
    formula.free_vars()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Axiom,
    Hypothesis,
    Definition,
    Conjecture,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Axiom => "axiom",
            Role::Hypothesis => "hypothesis",
            Role::Definition => "definition",
            Role::Conjecture => "conjecture",
        }
    }

    pub fn from_name(name: &str) -> Option<Role> {
        match name {
            "axiom" => Some(Role::Axiom),
            "hypothesis" => Some(Role::Hypothesis),
            "definition" => Some(Role::Definition),
            "conjecture" => Some(Role::Conjecture),
            _ => None,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AnnotatedFormula {
    pub name: String,
    pub role: Role,
    pub formula: Formula,
}

impl AnnotatedFormula {
    pub fn new(name: impl Into<String>, role: Role, formula: Formula) -> Self {
        AnnotatedFormula {
            name: name.into(),
            role,
            formula,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Problem {
    pub units: Vec<AnnotatedFormula>,
}

impl Problem {
    pub fn new(units: Vec<AnnotatedFormula>) -> Self {
        Problem { units }
    }

    pub fn conjecture(&self) -> Option<&AnnotatedFormula> {
        self.units.iter().find(|u| u.role == Role::Conjecture)
    }

    /// Units other than the conjecture.
    pub fn assumptions(&self) -> impl Iterator<Item = &AnnotatedFormula> {
        self.units.iter().filter(|u| u.role != Role::Conjecture)
    }
}

/// Symbols of a problem with their arities, in order of first occurrence.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub predicates: IndexMap<String, usize>,
    pub functions: IndexMap<String, usize>,
    pub constants: IndexSet<String>,
}

impl Signature {
    pub fn is_empty(&self) -> bool {
        self.predicates.is_empty() && self.functions.is_empty() && self.constants.is_empty()
    }

    /// Every symbol name, predicates first.
    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.predicates
            .keys()
            .chain(self.functions.keys())
            .chain(self.constants.iter())
            .map(String::as_str)
    }

    fn add_predicate(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        if self.functions.contains_key(name) || self.constants.contains(name) {
            return Err(SignatureError::SortClash(name.to_string()));
        }
        match self.predicates.get(name) {
            Some(&a) if a != arity => Err(SignatureError::ArityClash(name.to_string(), a, arity)),
            Some(_) => Ok(()),
            None => {
                self.predicates.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    fn add_term(&mut self, term: &Term) -> Result<(), SignatureError> {
        match term {
            Term::Var(_) => Ok(()),
            Term::Const(c) => {
                if self.predicates.contains_key(c) {
                    return Err(SignatureError::SortClash(c.clone()));
                }
                if let Some(&a) = self.functions.get(c) {
                    return Err(SignatureError::ArityClash(c.clone(), a, 0));
                }
                self.constants.insert(c.clone());
                Ok(())
            }
            Term::App(f, args) => {
                if self.predicates.contains_key(f) {
                    return Err(SignatureError::SortClash(f.clone()));
                }
                if self.constants.contains(f) {
                    return Err(SignatureError::ArityClash(f.clone(), 0, args.len()));
                }
                match self.functions.get(f) {
                    Some(&a) if a != args.len() => return Err(SignatureError::ArityClash(f.clone(), a, args.len())),
                    Some(_) => {}
                    None => {
                        self.functions.insert(f.clone(), args.len());
                    }
                }
                args.iter().try_for_each(|t| self.add_term(t))
            }
        }
    }

    fn add_formula(&mut self, formula: &Formula) -> Result<(), SignatureError> {
        match formula {
            Formula::Atom(p, args) => {
                self.add_predicate(p, args.len())?;
                args.iter().try_for_each(|t| self.add_term(t))
            }
            Formula::Not(f) | Formula::Box(f) | Formula::Dia(f) => self.add_formula(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                self.add_formula(a)?;
                self.add_formula(b)
            }
            Formula::Forall(_, f) | Formula::Exists(_, f) => self.add_formula(f),
        }
    }

    /// Signature of a single formula.
    pub fn of_formula(formula: &Formula) -> Result<Signature, SignatureError> {
        let mut sig = Signature::default();
        sig.add_formula(formula)?;
        Ok(sig)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol `{0}` is used with arity {1} and with arity {2}")]
    ArityClash(String, usize, usize),
    #[error("symbol `{0}` is used both as a predicate and as a term symbol")]
    SortClash(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("unit `{unit}` has free variable `{var}`")]
    FreeVariable { unit: String, var: String },
    #[error("problem has more than one conjecture")]
    MultipleConjectures,
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

pub fn collect_signature(problem: &Problem) -> Result<Signature, SignatureError> {
    let mut sig = Signature::default();
    for unit in &problem.units {
        sig.add_formula(&unit.formula)?;
    }
    Ok(sig)
}

pub fn validate_problem(problem: &Problem) -> Result<(), ValidationError> {
    let conjectures = problem.units.iter().filter(|u| u.role == Role::Conjecture).count();
    if conjectures > 1 {
        return Err(ValidationError::MultipleConjectures);
    }
    for unit in &problem.units {
        if let Some(var) = unit.formula.free_vars().into_iter().next() {
            return Err(ValidationError::FreeVariable {
                unit: unit.name.clone(),
                var,
            });
        }
    }
    collect_signature(problem)?;
    Ok(())
}
