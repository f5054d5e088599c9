use super::eval::{compile, eval_fml, holds, Assignment, Compiled, EvalError};
use super::model::{check_domains, check_frame, domain_violation, has_property, FuncTable, KripkeModel, PredTable};
use crate::embedding::{frame_properties, DomainCondition, TranslationConfig};
use crate::fml::{collect_signature, Problem, Signature, SignatureError};
use rayon::prelude::*;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_worlds: usize,
    pub max_individuals: usize,
    pub time_budget: Option<Duration>,
}

impl SearchBounds {
    pub fn new(max_worlds: usize, max_individuals: usize) -> Self {
        SearchBounds {
            max_worlds,
            max_individuals,
            time_budget: None,
        }
    }

    pub fn with_time_budget(mut self, budget: Duration) -> Self {
        self.time_budget = Some(budget);
        self
    }
}

type Matrix = Vec<Vec<bool>>;

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum SearchResult {
    /// A model satisfying the frame, domain and axiom constraints in which
    /// the conjecture is false at `world`.
    Countermodel {
        model: KripkeModel,
        world: usize,
    },
    /// Not a theoremhood claim: larger models were not examined.
    NoCountermodelWithinBounds,
    Timeout,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("no conjecture")]
    NoConjecture,
    #[error("search bounds must be at least 1")]
    InvalidBounds,
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Model of the given size with every symbol of `signature` present,
/// constants and functions mapped to the first individual and all
/// predicates empty.
pub fn template_model(worlds: usize, universe: usize, signature: &Signature) -> KripkeModel {
    let mut m = KripkeModel::new(worlds, universe);
    for c in &signature.constants {
        m.consts.insert(c.clone(), 0);
    }
    for (f, &arity) in &signature.functions {
        m.funcs.insert(
            f.clone(),
            FuncTable {
                arity,
                values: vec![0; universe.pow(arity as u32)],
            },
        );
    }
    for (p, &arity) in &signature.predicates {
        m.preds.insert(p.clone(), PredTable::empty(arity, worlds, universe));
    }
    m
}

/// Increment a little-endian counter; false once it wraps to zero.
fn increment(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

fn relations(worlds: usize, config: &TranslationConfig, deadline: Option<Instant>) -> Option<Vec<Vec<Vec<bool>>>> {
    let props = frame_properties(config.logic);
    let cells = worlds * worlds;
    let mut probe = KripkeModel::new(worlds, 1);
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << cells) {
        if mask % 4096 == 0 && deadline.is_some_and(|d| Instant::now() > d) {
            return None;
        }
        for w in 0..worlds {
            for v in 0..worlds {
                probe.rel[w][v] = mask >> (w * worlds + v) & 1 == 1;
            }
        }
        if props.iter().all(|&p| has_property(&probe, p)) {
            out.push(probe.rel.clone());
        }
    }
    Some(out)
}

fn domains(worlds: usize, universe: usize, condition: DomainCondition) -> Vec<Vec<Vec<bool>>> {
    if condition == DomainCondition::Constant {
        return vec![vec![vec![true; universe]; worlds]];
    }
    let subsets: Vec<Vec<bool>> = (1u64..(1 << universe))
        .map(|mask| (0..universe).map(|x| mask >> x & 1 == 1).collect())
        .collect();
    let mut digits = vec![0; worlds];
    let mut out = Vec::new();
    loop {
        out.push(digits.iter().map(|&d| subsets[d].clone()).collect());
        if !increment(&mut digits, subsets.len()) {
            return out;
        }
    }
}

fn shrinks(rel: &[Vec<bool>], dom: &[Vec<bool>]) -> bool {
    let n = rel.len();
    (0..n).any(|v| (0..n).any(|w| rel[v][w] && dom[v].iter().zip(&dom[w]).any(|(&in_v, &in_w)| in_v && !in_w)))
}

struct Goal {
    conjecture: Compiled,
    axioms: Vec<Compiled>,
}

impl Goal {
    /// Conjecture false at world 0, every axiom true everywhere.
    fn refuted_by(&self, m: &KripkeModel) -> bool {
        let mut env = Vec::new();
        if holds(&self.conjecture, m, 0, &mut env) {
            return false;
        }
        self.axioms
            .iter()
            .all(|a| (0..m.world_count()).all(|w| holds(a, m, w, &mut env)))
    }
}

/// Positions of all predicate-extension bits: (predicate, world, tuple).
fn valuation_slots(m: &KripkeModel) -> Vec<(usize, usize, usize)> {
    let mut slots = Vec::new();
    for (p, table) in m.preds.values().enumerate() {
        for (w, ext) in table.ext.iter().enumerate() {
            for t in 0..ext.len() {
                slots.push((p, w, t));
            }
        }
    }
    slots
}

/// Binary increment over the predicate extensions.
fn next_valuation(m: &mut KripkeModel, slots: &[(usize, usize, usize)]) -> bool {
    for &(p, w, t) in slots {
        let bit = &mut m.preds[p].ext[w][t];
        *bit = !*bit;
        if *bit {
            return true;
        }
    }
    false
}

fn write_interpretation(m: &mut KripkeModel, digits: &[usize]) {
    let mut it = digits.iter().copied();
    for c in m.consts.values_mut() {
        *c = it.next().expect("digit per constant");
    }
    for table in m.funcs.values_mut() {
        for v in table.values.iter_mut() {
            *v = it.next().expect("digit per function entry");
        }
    }
}

struct Explorer<'a> {
    template: &'a KripkeModel,
    config: &'a TranslationConfig,
    goal: &'a Goal,
    deadline: Option<Instant>,
    timed_out: &'a AtomicBool,
}

impl Explorer<'_> {
    fn expired(&self) -> bool {
        if self.timed_out.load(Ordering::Relaxed) {
            return true;
        }
        if self.deadline.is_some_and(|d| Instant::now() > d) {
            self.timed_out.store(true, Ordering::Relaxed);
            return true;
        }
        false
    }

    fn explore(&self, rel: &[Vec<bool>], dom: &[Vec<bool>]) -> Option<KripkeModel> {
        if self.config.domain == DomainCondition::Cumulative && shrinks(rel, dom) {
            return None;
        }
        let mut m = self.template.clone();
        m.rel = rel.to_vec();
        m.dom = dom.to_vec();
        let universe = m.universe_size();
        let interp_len = m.consts.len() + m.funcs.values().map(|t| t.values.len()).sum::<usize>();
        let mut digits = vec![0; interp_len];
        let slots = valuation_slots(&m);
        let mut steps: u64 = 0;
        loop {
            write_interpretation(&mut m, &digits);
            if domain_violation(&m, self.config.domain).is_none() {
                for table in m.preds.values_mut() {
                    table.ext.iter_mut().for_each(|e| e.fill(false));
                }
                loop {
                    steps += 1;
                    if steps.is_multiple_of(1024) && self.expired() {
                        return None;
                    }
                    if self.goal.refuted_by(&m) {
                        return Some(m);
                    }
                    if !next_valuation(&mut m, &slots) {
                        break;
                    }
                }
            }
            if !increment(&mut digits, universe) {
                return None;
            }
        }
    }
}

/// Exhaustive search for a countermodel, smallest worlds first, then
/// smallest universe, then relations, domains and valuations in order.
/// Only world 0 is tried as the refuting world; every relation is
/// enumerated, so this loses no models up to isomorphism.
pub fn find_countermodel(
    problem: &Problem,
    config: &TranslationConfig,
    bounds: &SearchBounds,
) -> Result<SearchResult, SearchError> {
    if bounds.max_worlds == 0 || bounds.max_individuals == 0 {
        return Err(SearchError::InvalidBounds);
    }
    let signature = collect_signature(problem)?;
    let conjecture = problem.conjecture().ok_or(SearchError::NoConjecture)?;
    let deadline = bounds.time_budget.map(|b| Instant::now() + b);
    let timed_out = AtomicBool::new(false);

    for worlds in 1..=bounds.max_worlds {
        let Some(rels) = relations(worlds, config, deadline) else {
            return Ok(SearchResult::Timeout);
        };
        for universe in 1..=bounds.max_individuals {
            let template = template_model(worlds, universe, &signature);
            let goal = Goal {
                conjecture: compile(&conjecture.formula, &template, &mut Vec::new())?,
                axioms: problem
                    .assumptions()
                    .map(|u| compile(&u.formula, &template, &mut Vec::new()))
                    .collect::<Result<_, _>>()?,
            };
            let doms = domains(worlds, universe, config.domain);
            let candidates: Vec<(&Matrix, &Matrix)> =
                rels.iter().flat_map(|r| doms.iter().map(move |d| (r, d))).collect();
            let explorer = Explorer {
                template: &template,
                config,
                goal: &goal,
                deadline,
                timed_out: &timed_out,
            };
            let found = candidates
                .par_iter()
                .find_map_first(|(rel, dom)| explorer.explore(rel, dom));
            if let Some(model) = found {
                return Ok(SearchResult::Countermodel { model, world: 0 });
            }
            if timed_out.load(Ordering::Relaxed) {
                return Ok(SearchResult::Timeout);
            }
        }
    }
    Ok(SearchResult::NoCountermodelWithinBounds)
}

/// Independent re-check of a claimed countermodel: shape, frame and domain
/// conditions, every assumption true at every world, conjecture false at
/// `world`.
pub fn verify_countermodel(
    problem: &Problem,
    config: &TranslationConfig,
    model: &KripkeModel,
    world: usize,
) -> Result<bool, SearchError> {
    let conjecture = problem.conjecture().ok_or(SearchError::NoConjecture)?;
    if model.check_shape().is_err() || !check_frame(model, config.logic) || !check_domains(model, config.domain) {
        return Ok(false);
    }
    let none = Assignment::new();
    for unit in problem.assumptions() {
        for w in 0..model.world_count() {
            if !eval_fml(model, w, &unit.formula, &none)? {
                return Ok(false);
            }
        }
    }
    Ok(!eval_fml(model, world, &conjecture.formula, &none)?)
}
