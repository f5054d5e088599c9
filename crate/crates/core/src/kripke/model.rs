use crate::embedding::{frame_properties, DomainCondition, FrameProperty, Logic};
use indexmap::IndexMap;
use std::fmt;

/// Index of `args` in the lexicographic enumeration of `universe^n`.
pub fn tuple_index(args: &[usize], universe: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * universe + a)
}

/// Inverse of [`tuple_index`].
pub fn tuple_at(mut index: usize, arity: usize, universe: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % universe;
        index /= universe;
    }
    out
}

/// Rigid interpretation of a function symbol, total over `universe^arity`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncTable {
    pub arity: usize,
    pub values: Vec<usize>,
}

/// Per-world extension of a predicate, indexed by world then tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredTable {
    pub arity: usize,
    pub ext: Vec<Vec<bool>>,
}

impl PredTable {
    pub fn empty(arity: usize, worlds: usize, universe: usize) -> Self {
        PredTable {
            arity,
            ext: vec![vec![false; universe.pow(arity as u32)]; worlds],
        }
    }

    pub fn holds(&self, world: usize, args: &[usize], universe: usize) -> bool {
        self.ext[world][tuple_index(args, universe)]
    }
}

/// A finite Kripke model with rigid constants and functions and
/// world-relative predicates. Worlds and individuals are referred to by
/// index; the name vectors are used for display only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    pub worlds: Vec<String>,
    pub rel: Vec<Vec<bool>>,
    pub universe: Vec<String>,
    /// `dom[w][x]`: individual `x` exists in world `w`.
    pub dom: Vec<Vec<bool>>,
    pub consts: IndexMap<String, usize>,
    pub funcs: IndexMap<String, FuncTable>,
    pub preds: IndexMap<String, PredTable>,
}

pub fn world_name(i: usize) -> String {
    format!("w{}", i + 1)
}

pub fn individual_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("e{}", i + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelShapeError(pub String);

impl fmt::Display for ModelShapeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ModelShapeError {}

impl KripkeModel {
    /// Model with no accessibility, every individual existing everywhere
    /// and no symbols.
    pub fn new(worlds: usize, universe: usize) -> Self {
        KripkeModel {
            worlds: (0..worlds).map(world_name).collect(),
            rel: vec![vec![false; worlds]; worlds],
            universe: (0..universe).map(individual_name).collect(),
            dom: vec![vec![true; universe]; worlds],
            consts: IndexMap::new(),
            funcs: IndexMap::new(),
            preds: IndexMap::new(),
        }
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn universe_size(&self) -> usize {
        self.universe.len()
    }

    pub fn accessible(&self, from: usize, to: usize) -> bool {
        self.rel[from][to]
    }

    pub fn exists_in(&self, individual: usize, world: usize) -> bool {
        self.dom[world][individual]
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn individual_index(&self, name: &str) -> Option<usize> {
        self.universe.iter().position(|x| x == name)
    }

    pub fn apply(&self, func: &FuncTable, args: &[usize]) -> usize {
        func.values[tuple_index(args, self.universe_size())]
    }

    /// Check the structural invariants: nonempty, correctly sized tables,
    /// all indices in range.
    pub fn check_shape(&self) -> Result<(), ModelShapeError> {
        let (nw, nu) = (self.world_count(), self.universe_size());
        let err = |m: String| Err(ModelShapeError(m));
        if nw == 0 {
            return err("model has no worlds".into());
        }
        if nu == 0 {
            return err("model has an empty universe".into());
        }
        if self.rel.len() != nw || self.rel.iter().any(|r| r.len() != nw) {
            return err("accessibility relation has the wrong shape".into());
        }
        if self.dom.len() != nw || self.dom.iter().any(|d| d.len() != nu) {
            return err("world domains have the wrong shape".into());
        }
        for (c, &x) in &self.consts {
            if x >= nu {
                return err(format!("constant {c} denotes no individual"));
            }
        }
        for (f, table) in &self.funcs {
            if table.arity == 0 || table.values.len() != nu.pow(table.arity as u32) {
                return err(format!("function {f} is not total"));
            }
            if table.values.iter().any(|&x| x >= nu) {
                return err(format!("function {f} leaves the universe"));
            }
        }
        for (p, table) in &self.preds {
            let size = nu.pow(table.arity as u32);
            if table.ext.len() != nw || table.ext.iter().any(|e| e.len() != size) {
                return err(format!("predicate {p} has the wrong shape"));
            }
        }
        Ok(())
    }
}

pub fn has_property(model: &KripkeModel, prop: FrameProperty) -> bool {
    let n = model.world_count();
    let r = |a: usize, b: usize| model.accessible(a, b);
    match prop {
        FrameProperty::Serial => (0..n).all(|w| (0..n).any(|v| r(w, v))),
        FrameProperty::Reflexive => (0..n).all(|w| r(w, w)),
        FrameProperty::Transitive => (0..n).all(|w| (0..n).all(|v| !r(w, v) || (0..n).all(|u| !r(v, u) || r(w, u)))),
        FrameProperty::Symmetric => (0..n).all(|w| (0..n).all(|v| !r(w, v) || r(v, w))),
    }
}

/// First frame property of `logic` the model's relation lacks.
pub fn frame_violation(model: &KripkeModel, logic: Logic) -> Option<FrameProperty> {
    frame_properties(logic).into_iter().find(|&p| !has_property(model, p))
}

pub fn check_frame(model: &KripkeModel, logic: Logic) -> bool {
    frame_violation(model, logic).is_none()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomainViolation {
    NotConstant { world: String },
    Empty { world: String },
    ConstantMissing { constant: String, world: String },
    FunctionEscapes { function: String, world: String },
    Shrinking { from: String, to: String },
}

impl fmt::Display for DomainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainViolation::NotConstant { world } => {
                write!(
                    f,
                    "constant domain violated: domain of {world} is not the whole universe"
                )
            }
            DomainViolation::Empty { world } => write!(f, "non-emptiness violated: domain of {world} is empty"),
            DomainViolation::ConstantMissing { constant, world } => {
                write!(f, "designation violated: constant {constant} does not exist in {world}")
            }
            DomainViolation::FunctionEscapes { function, world } => {
                write!(
                    f,
                    "designation violated: function {function} leaves the domain of {world}"
                )
            }
            DomainViolation::Shrinking { from, to } => {
                write!(f, "cumulativity violated: domain shrinks from {from} to {to}")
            }
        }
    }
}

/// First violated domain condition, if any.
pub fn domain_violation(model: &KripkeModel, condition: DomainCondition) -> Option<DomainViolation> {
    let (nw, nu) = (model.world_count(), model.universe_size());
    let name = |w: usize| model.worlds[w].clone();
    if condition == DomainCondition::Constant {
        return (0..nw)
            .find(|&w| (0..nu).any(|x| !model.exists_in(x, w)))
            .map(|w| DomainViolation::NotConstant { world: name(w) });
    }
    for w in 0..nw {
        if !(0..nu).any(|x| model.exists_in(x, w)) {
            return Some(DomainViolation::Empty { world: name(w) });
        }
        for (c, &x) in &model.consts {
            if !model.exists_in(x, w) {
                return Some(DomainViolation::ConstantMissing {
                    constant: c.clone(),
                    world: name(w),
                });
            }
        }
        for (f, table) in &model.funcs {
            let size = nu.pow(table.arity as u32);
            let escapes = (0..size).any(|i| {
                let args = tuple_at(i, table.arity, nu);
                args.iter().all(|&a| model.exists_in(a, w)) && !model.exists_in(table.values[i], w)
            });
            if escapes {
                return Some(DomainViolation::FunctionEscapes {
                    function: f.clone(),
                    world: name(w),
                });
            }
        }
    }
    if condition == DomainCondition::Cumulative {
        for v in 0..nw {
            for w in 0..nw {
                if model.accessible(v, w) && (0..nu).any(|x| model.exists_in(x, v) && !model.exists_in(x, w)) {
                    return Some(DomainViolation::Shrinking {
                        from: name(v),
                        to: name(w),
                    });
                }
            }
        }
    }
    None
}

pub fn check_domains(model: &KripkeModel, condition: DomainCondition) -> bool {
    domain_violation(model, condition).is_none()
}
