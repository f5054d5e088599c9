use super::model::{tuple_index, KripkeModel};
use crate::embedding::{connective_definitions, embed_formula, TranslationConfig, EXISTS_IN_WORLD};
use crate::fml::{Formula, Term};
use crate::hol::{beta_normalize, expand_definitions, HolProblem, HolTerm, HolType, ProblemError};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("symbol `{0}` has no interpretation in the model")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` is interpreted with arity {model} but used with arity {used}")]
    ArityMismatch { symbol: String, model: usize, used: usize },
    #[error("no world `{0}` in the model")]
    UnknownWorld(usize),
    #[error("cannot quantify over the function type {0}")]
    NonFiniteType(String),
    #[error("term `{0}` denotes a function, not a base value")]
    FunctionValue(String),
    #[error("ill-typed term `{0}`")]
    IllTyped(String),
    #[error(transparent)]
    Definitions(#[from] ProblemError),
}

/// Variable name → individual index.
pub type Assignment = BTreeMap<String, usize>;

#[derive(Clone, Debug)]
pub(crate) enum CTerm {
    Var(usize),
    Const(usize),
    App(usize, Vec<CTerm>),
}

/// A formula with symbols resolved to table positions in a model and
/// variables resolved to environment slots.
#[derive(Clone, Debug)]
pub(crate) enum Compiled {
    Atom(usize, Vec<CTerm>),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
    Implies(Box<Compiled>, Box<Compiled>),
    Box(Box<Compiled>),
    Dia(Box<Compiled>),
    Forall(Box<Compiled>),
    Exists(Box<Compiled>),
}

fn compile_term(t: &Term, model: &KripkeModel, scope: &[&str]) -> Result<CTerm, EvalError> {
    match t {
        Term::Var(x) => scope
            .iter()
            .rposition(|v| v == x)
            .map(CTerm::Var)
            .ok_or_else(|| EvalError::UnboundVariable(x.clone())),
        Term::Const(c) => model
            .consts
            .get_index_of(c)
            .map(CTerm::Const)
            .ok_or_else(|| EvalError::UnknownSymbol(c.clone())),
        Term::App(f, args) => {
            let (idx, _, table) = model
                .funcs
                .get_full(f)
                .ok_or_else(|| EvalError::UnknownSymbol(f.clone()))?;
            if table.arity != args.len() {
                return Err(EvalError::ArityMismatch {
                    symbol: f.clone(),
                    model: table.arity,
                    used: args.len(),
                });
            }
            let args = args
                .iter()
                .map(|a| compile_term(a, model, scope))
                .collect::<Result<_, _>>()?;
            Ok(CTerm::App(idx, args))
        }
    }
}

pub(crate) fn compile<'a>(
    f: &'a Formula,
    model: &KripkeModel,
    scope: &mut Vec<&'a str>,
) -> Result<Compiled, EvalError> {
    let bx = Box::new;
    Ok(match f {
        Formula::Atom(p, args) => {
            let (idx, _, table) = model
                .preds
                .get_full(p)
                .ok_or_else(|| EvalError::UnknownSymbol(p.clone()))?;
            if table.arity != args.len() {
                return Err(EvalError::ArityMismatch {
                    symbol: p.clone(),
                    model: table.arity,
                    used: args.len(),
                });
            }
            let args = args
                .iter()
                .map(|a| compile_term(a, model, scope))
                .collect::<Result<_, _>>()?;
            Compiled::Atom(idx, args)
        }
        Formula::Not(g) => Compiled::Not(bx(compile(g, model, scope)?)),
        Formula::Box(g) => Compiled::Box(bx(compile(g, model, scope)?)),
        Formula::Dia(g) => Compiled::Dia(bx(compile(g, model, scope)?)),
        Formula::And(a, b) => Compiled::And(bx(compile(a, model, scope)?), bx(compile(b, model, scope)?)),
        Formula::Or(a, b) => Compiled::Or(bx(compile(a, model, scope)?), bx(compile(b, model, scope)?)),
        Formula::Implies(a, b) => Compiled::Implies(bx(compile(a, model, scope)?), bx(compile(b, model, scope)?)),
        Formula::Forall(x, g) | Formula::Exists(x, g) => {
            scope.push(x);
            let body = compile(g, model, scope);
            scope.pop();
            let body = bx(body?);
            if matches!(f, Formula::Forall(..)) {
                Compiled::Forall(body)
            } else {
                Compiled::Exists(body)
            }
        }
    })
}

fn term_value(t: &CTerm, model: &KripkeModel, env: &[usize]) -> usize {
    match t {
        CTerm::Var(slot) => env[*slot],
        CTerm::Const(idx) => model.consts[*idx],
        CTerm::App(idx, args) => {
            let vals: Vec<usize> = args.iter().map(|a| term_value(a, model, env)).collect();
            let table = &model.funcs[*idx];
            table.values[tuple_index(&vals, model.universe_size())]
        }
    }
}

/// Truth of a compiled formula. `env` holds one individual per enclosing
/// binder, outermost first.
pub(crate) fn holds(f: &Compiled, model: &KripkeModel, world: usize, env: &mut Vec<usize>) -> bool {
    match f {
        Compiled::Atom(p, args) => {
            let table = &model.preds[*p];
            if args.is_empty() {
                return table.ext[world][0];
            }
            let vals: Vec<usize> = args.iter().map(|a| term_value(a, model, env)).collect();
            table.ext[world][tuple_index(&vals, model.universe_size())]
        }
        Compiled::Not(g) => !holds(g, model, world, env),
        Compiled::And(a, b) => holds(a, model, world, env) && holds(b, model, world, env),
        Compiled::Or(a, b) => holds(a, model, world, env) || holds(b, model, world, env),
        Compiled::Implies(a, b) => !holds(a, model, world, env) || holds(b, model, world, env),
        Compiled::Box(g) => (0..model.world_count()).all(|v| !model.accessible(world, v) || holds(g, model, v, env)),
        Compiled::Dia(g) => (0..model.world_count()).any(|v| model.accessible(world, v) && holds(g, model, v, env)),
        Compiled::Forall(g) | Compiled::Exists(g) => {
            let universal = matches!(f, Compiled::Forall(..));
            for x in 0..model.universe_size() {
                if !model.exists_in(x, world) {
                    continue;
                }
                env.push(x);
                let r = holds(g, model, world, env);
                env.pop();
                if r != universal {
                    return !universal;
                }
            }
            universal
        }
    }
}

/// Kripke truth of `formula` at `world`. Quantifiers range over the
/// world's domain; terms denote rigidly.
pub fn eval_fml(
    model: &KripkeModel,
    world: usize,
    formula: &Formula,
    assignment: &Assignment,
) -> Result<bool, EvalError> {
    if world >= model.world_count() {
        return Err(EvalError::UnknownWorld(world));
    }
    let mut scope: Vec<&str> = assignment.keys().map(String::as_str).collect();
    let mut env: Vec<usize> = assignment.values().copied().collect();
    if let Some(&bad) = env.iter().find(|&&x| x >= model.universe_size()) {
        return Err(EvalError::UnknownSymbol(format!("individual #{bad}")));
    }
    let compiled = compile(formula, model, &mut scope)?;
    Ok(holds(&compiled, model, world, &mut env))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Value {
    Bool(bool),
    World(usize),
    Individual(usize),
}

impl Value {
    fn as_bool(self, t: &HolTerm) -> Result<bool, EvalError> {
        match self {
            Value::Bool(b) => Ok(b),
            _ => Err(EvalError::IllTyped(t.to_string())),
        }
    }

    fn as_world(self, t: &HolTerm) -> Result<usize, EvalError> {
        match self {
            Value::World(w) => Ok(w),
            _ => Err(EvalError::IllTyped(t.to_string())),
        }
    }

    fn as_individual(self, t: &HolTerm) -> Result<usize, EvalError> {
        match self {
            Value::Individual(x) => Ok(x),
            _ => Err(EvalError::IllTyped(t.to_string())),
        }
    }
}

/// HOL variable name → value.
pub type Environment = BTreeMap<String, Value>;

/// Standard finite evaluation of a beta-normal, definition-free HOL term.
/// `exists_in_world` reads the model's domains, `rel_<logic>` its
/// accessibility relation; any other constant is a user symbol.
pub fn eval_hol(model: &KripkeModel, term: &HolTerm, env: &Environment) -> Result<Value, EvalError> {
    let mut stack: Vec<(&str, Value)> = env.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    eval_in(model, term, &mut stack)
}

fn domain_of(model: &KripkeModel, ty: &HolType) -> Result<Vec<Value>, EvalError> {
    Ok(match ty {
        HolType::O => vec![Value::Bool(false), Value::Bool(true)],
        HolType::I => (0..model.world_count()).map(Value::World).collect(),
        HolType::Mu => (0..model.universe_size()).map(Value::Individual).collect(),
        HolType::Arrow(..) => return Err(EvalError::NonFiniteType(ty.to_string())),
    })
}

fn is_relation(name: &str, ty: &HolType) -> bool {
    name.starts_with("rel_") && *ty == HolType::curried([HolType::I, HolType::I], HolType::O)
}

fn eval_in<'a>(model: &KripkeModel, term: &'a HolTerm, env: &mut Vec<(&'a str, Value)>) -> Result<Value, EvalError> {
    let boolean = |t: &'a HolTerm, env: &mut Vec<(&'a str, Value)>| eval_in(model, t, env)?.as_bool(t);
    match term {
        HolTerm::Var(x, _) => env
            .iter()
            .rev()
            .find(|(n, _)| n == x)
            .map(|(_, v)| *v)
            .ok_or_else(|| EvalError::UnboundVariable(x.clone())),
        HolTerm::Const(c, ty) => match ty {
            HolType::Mu => model
                .consts
                .get(c)
                .map(|&x| Value::Individual(x))
                .ok_or_else(|| EvalError::UnknownSymbol(c.clone())),
            _ => Err(EvalError::FunctionValue(term.to_string())),
        },
        HolTerm::Lambda(..) => Err(EvalError::FunctionValue(term.to_string())),
        HolTerm::App(..) => {
            let (head, args) = term.spine();
            let HolTerm::Const(name, ty) = head else {
                if matches!(head, HolTerm::Lambda(..)) {
                    return eval_hol_owned(model, beta_normalize(term), env);
                }
                return Err(EvalError::FunctionValue(head.to_string()));
            };
            let (params, result) = ty.uncurry();
            if params.len() != args.len() || !result.is_base() {
                return Err(EvalError::FunctionValue(term.to_string()));
            }
            let vals = args
                .iter()
                .map(|a| eval_in(model, a, env))
                .collect::<Result<Vec<_>, _>>()?;
            if name == EXISTS_IN_WORLD {
                let x = vals[0].as_individual(args[0])?;
                let w = vals[1].as_world(args[1])?;
                return Ok(Value::Bool(model.exists_in(x, w)));
            }
            if is_relation(name, ty) {
                let w = vals[0].as_world(args[0])?;
                let v = vals[1].as_world(args[1])?;
                return Ok(Value::Bool(model.accessible(w, v)));
            }
            match result {
                HolType::O => {
                    let (world_arg, individuals) = vals.split_last().expect("predicate has a world argument");
                    let w = world_arg.as_world(args[args.len() - 1])?;
                    let xs = individuals
                        .iter()
                        .zip(&args)
                        .map(|(v, a)| v.as_individual(a))
                        .collect::<Result<Vec<_>, _>>()?;
                    let table = model
                        .preds
                        .get(name)
                        .ok_or_else(|| EvalError::UnknownSymbol(name.clone()))?;
                    if table.arity != xs.len() {
                        return Err(EvalError::ArityMismatch {
                            symbol: name.clone(),
                            model: table.arity,
                            used: xs.len(),
                        });
                    }
                    Ok(Value::Bool(table.holds(w, &xs, model.universe_size())))
                }
                HolType::Mu => {
                    let xs = vals
                        .iter()
                        .zip(&args)
                        .map(|(v, a)| v.as_individual(a))
                        .collect::<Result<Vec<_>, _>>()?;
                    let table = model
                        .funcs
                        .get(name)
                        .ok_or_else(|| EvalError::UnknownSymbol(name.clone()))?;
                    if table.arity != xs.len() {
                        return Err(EvalError::ArityMismatch {
                            symbol: name.clone(),
                            model: table.arity,
                            used: xs.len(),
                        });
                    }
                    Ok(Value::Individual(model.apply(table, &xs)))
                }
                _ => Err(EvalError::IllTyped(term.to_string())),
            }
        }
        HolTerm::Forall(x, ty, body) | HolTerm::Exists(x, ty, body) => {
            let universal = matches!(term, HolTerm::Forall(..));
            for value in domain_of(model, ty)? {
                env.push((x, value));
                let r = boolean(body, env);
                env.pop();
                if r? != universal {
                    return Ok(Value::Bool(!universal));
                }
            }
            Ok(Value::Bool(universal))
        }
        HolTerm::Not(a) => Ok(Value::Bool(!boolean(a, env)?)),
        HolTerm::And(a, b) => Ok(Value::Bool(boolean(a, env)? && boolean(b, env)?)),
        HolTerm::Or(a, b) => Ok(Value::Bool(boolean(a, env)? || boolean(b, env)?)),
        HolTerm::Implies(a, b) => Ok(Value::Bool(!boolean(a, env)? || boolean(b, env)?)),
    }
}

fn eval_hol_owned(model: &KripkeModel, term: HolTerm, env: &[(&str, Value)]) -> Result<Value, EvalError> {
    let mut owned: Vec<(&str, Value)> = env.to_vec();
    eval_in(model, &term, &mut owned)
}

const ROOT_WORLD: &str = "Wroot";

/// The embedded formula applied to a world variable, with all connective
/// definitions unfolded. Evaluate it with `Wroot` bound to a world.
pub fn expanded_at_world(formula: &Formula, config: &TranslationConfig) -> Result<HolTerm, EvalError> {
    let defs = HolProblem::new(connective_definitions(config));
    let applied = HolTerm::app(embed_formula(formula, config), HolTerm::var(ROOT_WORLD, HolType::I));
    Ok(expand_definitions(&defs, &applied)?)
}

/// Truth of an expanded term (from [`expanded_at_world`]) at `world`.
pub fn eval_expanded_at(model: &KripkeModel, expanded: &HolTerm, world: usize) -> Result<bool, EvalError> {
    let env = Environment::from([(ROOT_WORLD.to_string(), Value::World(world))]);
    eval_hol(model, expanded, &env)?.as_bool(expanded)
}

/// Whether the Kripke reading and the HOL reading of the embedding agree
/// on `formula` at every world of `model`.
pub fn correspondence_check(
    model: &KripkeModel,
    formula: &Formula,
    config: &TranslationConfig,
) -> Result<bool, EvalError> {
    let expanded = expanded_at_world(formula, config)?;
    let compiled = compile(formula, model, &mut Vec::new())?;
    for w in 0..model.world_count() {
        let kripke = holds(&compiled, model, w, &mut Vec::new());
        let hol = eval_expanded_at(model, &expanded, w)?;
        if kripke != hol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `mvalid @ F` read through the embedding: truth at every world.
pub fn eval_validity(model: &KripkeModel, formula: &Formula, config: &TranslationConfig) -> Result<bool, EvalError> {
    let defs = HolProblem::new(connective_definitions(config));
    let term = expand_definitions(&defs, &crate::embedding::validity(formula, config))?;
    eval_hol(model, &term, &Environment::new())?.as_bool(&term)
}
