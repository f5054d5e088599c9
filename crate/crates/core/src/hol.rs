//! Simply typed lambda terms over the base types `$o` (truth values),
//! `$i` (worlds) and `mu` (individuals).
//!
//! The logical connectives and quantifiers are primitive constructors,
//! matching the thf0 surface syntax, so both the printer and the model
//! evaluator can see them directly.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HolType {
    O,
    I,
    Mu,
    Arrow(Box<HolType>, Box<HolType>),
}

impl HolType {
    pub fn arrow(from: HolType, to: HolType) -> HolType {
        HolType::Arrow(Box::new(from), Box::new(to))
    }

    /// `args[0] > args[1] > ... > result`
    pub fn curried(args: impl IntoIterator<Item = HolType>, result: HolType) -> HolType {
        let args: Vec<_> = args.into_iter().collect();
        args.into_iter().rev().fold(result, |acc, a| HolType::arrow(a, acc))
    }

    /// The type of lifted propositions, `$i > $o`.
    pub fn prop() -> HolType {
        HolType::arrow(HolType::I, HolType::O)
    }

    /// Argument types and final result of a curried function type.
    pub fn uncurry(&self) -> (Vec<&HolType>, &HolType) {
        let mut args = Vec::new();
        let mut t = self;
        while let HolType::Arrow(a, r) = t {
            args.push(a.as_ref());
            t = r;
        }
        (args, t)
    }

    pub fn is_base(&self) -> bool {
        !matches!(self, HolType::Arrow(..))
    }
}

impl fmt::Display for HolType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HolType::O => f.write_str("$o"),
            HolType::I => f.write_str("$i"),
            HolType::Mu => f.write_str("mu"),
            HolType::Arrow(a, r) => {
                if a.is_base() {
                    write!(f, "{a} > {r}")
                } else {
                    write!(f, "( {a} ) > {r}")
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum HolTerm {
    Const(String, HolType),
    Var(String, HolType),
    Lambda(String, HolType, Box<HolTerm>),
    App(Box<HolTerm>, Box<HolTerm>),
    Forall(String, HolType, Box<HolTerm>),
    Exists(String, HolType, Box<HolTerm>),
    Not(Box<HolTerm>),
    Or(Box<HolTerm>, Box<HolTerm>),
    And(Box<HolTerm>, Box<HolTerm>),
    Implies(Box<HolTerm>, Box<HolTerm>),
}

impl HolTerm {
    pub fn constant(name: impl Into<String>, ty: HolType) -> HolTerm {
        HolTerm::Const(name.into(), ty)
    }

    pub fn var(name: impl Into<String>, ty: HolType) -> HolTerm {
        HolTerm::Var(name.into(), ty)
    }

    pub fn lambda(var: impl Into<String>, ty: HolType, body: HolTerm) -> HolTerm {
        HolTerm::Lambda(var.into(), ty, Box::new(body))
    }

    pub fn app(fun: HolTerm, arg: HolTerm) -> HolTerm {
        HolTerm::App(Box::new(fun), Box::new(arg))
    }

    /// Left-nested application `fun @ a1 @ a2 ...`.
    pub fn apps(fun: HolTerm, args: impl IntoIterator<Item = HolTerm>) -> HolTerm {
        args.into_iter().fold(fun, HolTerm::app)
    }

    pub fn forall(var: impl Into<String>, ty: HolType, body: HolTerm) -> HolTerm {
        HolTerm::Forall(var.into(), ty, Box::new(body))
    }

    pub fn exists(var: impl Into<String>, ty: HolType, body: HolTerm) -> HolTerm {
        HolTerm::Exists(var.into(), ty, Box::new(body))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: HolTerm) -> HolTerm {
        HolTerm::Not(Box::new(t))
    }

    pub fn or(a: HolTerm, b: HolTerm) -> HolTerm {
        HolTerm::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: HolTerm, b: HolTerm) -> HolTerm {
        HolTerm::And(Box::new(a), Box::new(b))
    }

    pub fn implies(a: HolTerm, b: HolTerm) -> HolTerm {
        HolTerm::Implies(Box::new(a), Box::new(b))
    }

    /// Head and arguments of a left-nested application spine.
    pub fn spine(&self) -> (&HolTerm, Vec<&HolTerm>) {
        let mut args = Vec::new();
        let mut t = self;
        while let HolTerm::App(f, a) = t {
            args.push(a.as_ref());
            t = f;
        }
        args.reverse();
        (t, args)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            HolTerm::Const(..) => {}
            HolTerm::Var(x, _) => {
                if !bound.contains(&x.as_str()) {
                    out.insert(x.clone());
                }
            }
            HolTerm::Lambda(x, _, b) | HolTerm::Forall(x, _, b) | HolTerm::Exists(x, _, b) => {
                bound.push(x);
                b.collect_free(bound, out);
                bound.pop();
            }
            HolTerm::App(a, b) | HolTerm::Or(a, b) | HolTerm::And(a, b) | HolTerm::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            HolTerm::Not(a) => a.collect_free(bound, out),
        }
    }

    /// Names of all constants occurring in the term.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let HolTerm::Const(c, _) = t {
                out.insert(c.clone());
            }
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&HolTerm)) {
        f(self);
        match self {
            HolTerm::Const(..) | HolTerm::Var(..) => {}
            HolTerm::Lambda(_, _, b) | HolTerm::Forall(_, _, b) | HolTerm::Exists(_, _, b) | HolTerm::Not(b) => {
                b.visit(f)
            }
            HolTerm::App(a, b) | HolTerm::Or(a, b) | HolTerm::And(a, b) | HolTerm::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    fn map_children(&self, f: &mut impl FnMut(&HolTerm) -> HolTerm) -> HolTerm {
        match self {
            HolTerm::Const(..) | HolTerm::Var(..) => self.clone(),
            HolTerm::Lambda(x, ty, b) => HolTerm::lambda(x.clone(), ty.clone(), f(b)),
            HolTerm::Forall(x, ty, b) => HolTerm::forall(x.clone(), ty.clone(), f(b)),
            HolTerm::Exists(x, ty, b) => HolTerm::exists(x.clone(), ty.clone(), f(b)),
            HolTerm::App(a, b) => HolTerm::app(f(a), f(b)),
            HolTerm::Not(a) => HolTerm::not(f(a)),
            HolTerm::Or(a, b) => HolTerm::or(f(a), f(b)),
            HolTerm::And(a, b) => HolTerm::and(f(a), f(b)),
            HolTerm::Implies(a, b) => HolTerm::implies(f(a), f(b)),
        }
    }

    /// Capture-avoiding substitution of `value` for the free variable `var`.
    pub fn substitute(&self, var: &str, value: &HolTerm) -> HolTerm {
        let value_fv = value.free_vars();
        self.subst(var, value, &value_fv)
    }

    fn subst(&self, var: &str, value: &HolTerm, value_fv: &BTreeSet<String>) -> HolTerm {
        match self {
            HolTerm::Var(x, _) if x == var => value.clone(),
            HolTerm::Lambda(x, ty, body) | HolTerm::Forall(x, ty, body) | HolTerm::Exists(x, ty, body) => {
                if x == var {
                    return self.clone();
                }
                let body_fv = body.free_vars();
                if !body_fv.contains(var) {
                    return self.clone();
                }
                let (x, body) = if value_fv.contains(x) {
                    let mut avoid: BTreeSet<String> = value_fv.union(&body_fv).cloned().collect();
                    avoid.insert(var.to_string());
                    let fresh = fresh_name(x, &avoid);
                    let renamed = body.substitute(x, &HolTerm::var(fresh.clone(), ty.clone()));
                    (fresh, renamed)
                } else {
                    (x.clone(), body.as_ref().clone())
                };
                let body = Box::new(body.subst(var, value, value_fv));
                match self {
                    HolTerm::Lambda(..) => HolTerm::Lambda(x, ty.clone(), body),
                    HolTerm::Forall(..) => HolTerm::Forall(x, ty.clone(), body),
                    _ => HolTerm::Exists(x, ty.clone(), body),
                }
            }
            _ => self.map_children(&mut |c| c.subst(var, value, value_fv)),
        }
    }

    /// Rename every bound variable to a name determined by its binding depth.
    /// Two terms are alpha-equivalent iff their canonical forms are equal.
    pub fn canonical(&self) -> HolTerm {
        self.canon(&mut Vec::new())
    }

    fn canon(&self, env: &mut Vec<(String, String)>) -> HolTerm {
        match self {
            HolTerm::Var(x, ty) => {
                let name = env
                    .iter()
                    .rev()
                    .find(|(orig, _)| orig == x)
                    .map(|(_, canon)| canon.clone())
                    .unwrap_or_else(|| x.clone());
                HolTerm::Var(name, ty.clone())
            }
            HolTerm::Lambda(x, ty, b) | HolTerm::Forall(x, ty, b) | HolTerm::Exists(x, ty, b) => {
                let canon = format!("#{}", env.len());
                env.push((x.clone(), canon.clone()));
                let body = Box::new(b.canon(env));
                env.pop();
                match self {
                    HolTerm::Lambda(..) => HolTerm::Lambda(canon, ty.clone(), body),
                    HolTerm::Forall(..) => HolTerm::Forall(canon, ty.clone(), body),
                    _ => HolTerm::Exists(canon, ty.clone(), body),
                }
            }
            _ => self.map_children(&mut |c| c.canon(env)),
        }
    }

    pub fn alpha_eq(&self, other: &HolTerm) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn is_beta_normal(&self) -> bool {
        let mut normal = true;
        self.visit(&mut |t| {
            if let HolTerm::App(f, _) = t {
                if matches!(f.as_ref(), HolTerm::Lambda(..)) {
                    normal = false;
                }
            }
        });
        normal
    }
}

impl fmt::Display for HolTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::thf::emit_term(self))
    }
}

fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "V" } else { stem };
    (1..)
        .map(|n| format!("{stem}{n}"))
        .find(|c| !avoid.contains(c))
        .expect("unbounded supply of names")
}

/// Beta normal form. Simply typed terms always have one.
pub fn beta_normalize(term: &HolTerm) -> HolTerm {
    match term {
        HolTerm::App(f, a) => {
            let f = beta_normalize(f);
            if let HolTerm::Lambda(x, _, body) = &f {
                beta_normalize(&body.substitute(x, a))
            } else {
                HolTerm::app(f, beta_normalize(a))
            }
        }
        _ => term.map_children(&mut |c| beta_normalize(c)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("type mismatch at `{term}`: expected {expected}, found {found}")]
    TypeMismatch {
        term: String,
        expected: String,
        found: String,
    },
    #[error("unbound symbol `{0}`")]
    UnboundSymbol(String),
}

pub type TypeContext = BTreeMap<String, HolType>;

fn mismatch(term: &HolTerm, expected: impl fmt::Display, found: impl fmt::Display) -> TypeError {
    TypeError::TypeMismatch {
        term: term.to_string(),
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

/// The type of `term`, with free symbols looked up in `context`.
pub fn type_of(term: &HolTerm, context: &TypeContext) -> Result<HolType, TypeError> {
    type_in(term, context, &mut Vec::new())
}

fn type_in<'a>(
    term: &'a HolTerm,
    ctx: &TypeContext,
    bound: &mut Vec<(&'a str, &'a HolType)>,
) -> Result<HolType, TypeError> {
    let expect_o = |t: &'a HolTerm, bound: &mut Vec<(&'a str, &'a HolType)>| -> Result<(), TypeError> {
        let ty = type_in(t, ctx, bound)?;
        if ty == HolType::O {
            Ok(())
        } else {
            Err(mismatch(t, HolType::O, ty))
        }
    };
    match term {
        HolTerm::Const(c, ty) => match ctx.get(c) {
            Some(declared) if declared == ty => Ok(ty.clone()),
            Some(declared) => Err(mismatch(term, declared, ty)),
            None => Err(TypeError::UnboundSymbol(c.clone())),
        },
        HolTerm::Var(x, ty) => {
            let declared = bound
                .iter()
                .rev()
                .find(|(b, _)| *b == x)
                .map(|(_, t)| *t)
                .or_else(|| ctx.get(x));
            match declared {
                Some(d) if d == ty => Ok(ty.clone()),
                Some(d) => Err(mismatch(term, d, ty)),
                None => Err(TypeError::UnboundSymbol(x.clone())),
            }
        }
        HolTerm::Lambda(x, ty, body) => {
            bound.push((x, ty));
            let result = type_in(body, ctx, bound);
            bound.pop();
            Ok(HolType::arrow(ty.clone(), result?))
        }
        HolTerm::App(f, a) => {
            let fty = type_in(f, ctx, bound)?;
            let aty = type_in(a, ctx, bound)?;
            match fty {
                HolType::Arrow(dom, cod) if *dom == aty => Ok(*cod),
                HolType::Arrow(dom, _) => Err(mismatch(a, dom, aty)),
                other => Err(mismatch(f, "a function type", other)),
            }
        }
        HolTerm::Forall(x, ty, body) | HolTerm::Exists(x, ty, body) => {
            bound.push((x, ty));
            let result = expect_o(body, bound);
            bound.pop();
            result.map(|_| HolType::O)
        }
        HolTerm::Not(a) => expect_o(a, bound).map(|_| HolType::O),
        HolTerm::Or(a, b) | HolTerm::And(a, b) | HolTerm::Implies(a, b) => {
            expect_o(a, bound)?;
            expect_o(b, bound)?;
            Ok(HolType::O)
        }
    }
}

/// Which output file a unit belongs to when a problem is split into
/// axiom files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Section {
    /// Validity, connectives, quantifiers and domain-condition axioms.
    Domain,
    /// Accessibility relation, modal operators and frame axioms.
    Logic,
    /// Problem-specific declarations and formulas.
    Problem,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DeclaredType {
    /// A new base type (`$tType`).
    Sort,
    Term(HolType),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormulaRole {
    Axiom,
    Hypothesis,
    Conjecture,
}

impl FormulaRole {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaRole::Axiom => "axiom",
            FormulaRole::Hypothesis => "hypothesis",
            FormulaRole::Conjecture => "conjecture",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum UnitBody {
    TypeDecl { symbol: String, ty: DeclaredType },
    Definition { symbol: String, body: HolTerm },
    Formula { role: FormulaRole, term: HolTerm },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HolUnit {
    pub name: String,
    pub section: Section,
    pub body: UnitBody,
}

impl HolUnit {
    pub fn type_decl(name: impl Into<String>, section: Section, symbol: impl Into<String>, ty: HolType) -> Self {
        HolUnit {
            name: name.into(),
            section,
            body: UnitBody::TypeDecl {
                symbol: symbol.into(),
                ty: DeclaredType::Term(ty),
            },
        }
    }

    pub fn definition(section: Section, symbol: impl Into<String>, body: HolTerm) -> Self {
        let symbol = symbol.into();
        HolUnit {
            name: symbol.clone(),
            section,
            body: UnitBody::Definition { symbol, body },
        }
    }

    pub fn formula(name: impl Into<String>, section: Section, role: FormulaRole, term: HolTerm) -> Self {
        HolUnit {
            name: name.into(),
            section,
            body: UnitBody::Formula { role, term },
        }
    }

    /// Canonical form for comparisons up to renaming of bound variables.
    pub fn canonical(&self) -> HolUnit {
        let body = match &self.body {
            UnitBody::TypeDecl { .. } => self.body.clone(),
            UnitBody::Definition { symbol, body } => UnitBody::Definition {
                symbol: symbol.clone(),
                body: body.canonical(),
            },
            UnitBody::Formula { role, term } => UnitBody::Formula {
                role: *role,
                term: term.canonical(),
            },
        };
        HolUnit {
            name: self.name.clone(),
            section: self.section,
            body,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct HolProblem {
    pub units: Vec<HolUnit>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("unit `{unit}`: {source}")]
    Type { unit: String, source: TypeError },
    #[error("unit `{unit}` does not have type $o")]
    NotAFormula { unit: String },
    #[error("symbol `{0}` is declared twice")]
    Redeclared(String),
    #[error("definition of `{0}` has no preceding type declaration")]
    UndeclaredDefinition(String),
    #[error("definition of `{0}` is not closed")]
    OpenDefinition(String),
    #[error("`{0}` is defined twice")]
    Redefined(String),
    #[error("type `{0}` is used before its declaration")]
    UndeclaredSort(String),
    #[error("problem has more than one conjecture")]
    MultipleConjectures,
    #[error("definition of `{0}` is cyclic")]
    CyclicDefinition(String),
}

fn mentions_mu(ty: &HolType) -> bool {
    match ty {
        HolType::Mu => true,
        HolType::Arrow(a, b) => mentions_mu(a) || mentions_mu(b),
        _ => false,
    }
}

fn term_mentions_mu(t: &HolTerm) -> bool {
    let mut found = false;
    t.visit(&mut |s| match s {
        HolTerm::Const(_, ty) | HolTerm::Var(_, ty) => found |= mentions_mu(ty),
        HolTerm::Lambda(_, ty, _) | HolTerm::Forall(_, ty, _) | HolTerm::Exists(_, ty, _) => found |= mentions_mu(ty),
        _ => {}
    });
    found
}

impl HolProblem {
    pub fn new(units: Vec<HolUnit>) -> Self {
        HolProblem { units }
    }

    pub fn conjecture(&self) -> Option<&HolTerm> {
        self.units.iter().find_map(|u| match &u.body {
            UnitBody::Formula {
                role: FormulaRole::Conjecture,
                term,
            } => Some(term),
            _ => None,
        })
    }

    /// Symbol → type for every declared symbol.
    pub fn context(&self) -> TypeContext {
        self.units
            .iter()
            .filter_map(|u| match &u.body {
                UnitBody::TypeDecl {
                    symbol,
                    ty: DeclaredType::Term(ty),
                } => Some((symbol.clone(), ty.clone())),
                _ => None,
            })
            .collect()
    }

    pub fn definitions(&self) -> BTreeMap<&str, &HolTerm> {
        self.units
            .iter()
            .filter_map(|u| match &u.body {
                UnitBody::Definition { symbol, body } => Some((symbol.as_str(), body)),
                _ => None,
            })
            .collect()
    }

    /// Check declaration order, closedness and typing of every unit.
    pub fn check(&self) -> Result<(), ProblemError> {
        let mut ctx = TypeContext::new();
        let mut sorts = BTreeSet::new();
        let mut defined = BTreeSet::new();
        let mut conjectures = 0;
        let need_mu = |sorts: &BTreeSet<String>, uses: bool| {
            if uses && !sorts.contains("mu") {
                Err(ProblemError::UndeclaredSort("mu".into()))
            } else {
                Ok(())
            }
        };
        for unit in &self.units {
            let type_err = |source| ProblemError::Type {
                unit: unit.name.clone(),
                source,
            };
            match &unit.body {
                UnitBody::TypeDecl { symbol, ty } => {
                    if ctx.contains_key(symbol) || sorts.contains(symbol) {
                        return Err(ProblemError::Redeclared(symbol.clone()));
                    }
                    match ty {
                        DeclaredType::Sort => {
                            sorts.insert(symbol.clone());
                        }
                        DeclaredType::Term(t) => {
                            need_mu(&sorts, mentions_mu(t))?;
                            ctx.insert(symbol.clone(), t.clone());
                        }
                    }
                }
                UnitBody::Definition { symbol, body } => {
                    let declared = ctx
                        .get(symbol)
                        .ok_or_else(|| ProblemError::UndeclaredDefinition(symbol.clone()))?;
                    if !defined.insert(symbol.clone()) {
                        return Err(ProblemError::Redefined(symbol.clone()));
                    }
                    if !body.free_vars().is_empty() {
                        return Err(ProblemError::OpenDefinition(symbol.clone()));
                    }
                    if body.constants().contains(symbol) {
                        return Err(ProblemError::CyclicDefinition(symbol.clone()));
                    }
                    need_mu(&sorts, term_mentions_mu(body))?;
                    let ty = type_of(body, &ctx).map_err(type_err)?;
                    if &ty != declared {
                        return Err(type_err(TypeError::TypeMismatch {
                            term: symbol.clone(),
                            expected: declared.to_string(),
                            found: ty.to_string(),
                        }));
                    }
                }
                UnitBody::Formula { role, term } => {
                    if *role == FormulaRole::Conjecture {
                        conjectures += 1;
                        if conjectures > 1 {
                            return Err(ProblemError::MultipleConjectures);
                        }
                    }
                    need_mu(&sorts, term_mentions_mu(term))?;
                    let ty = type_of(term, &ctx).map_err(type_err)?;
                    if ty != HolType::O {
                        return Err(ProblemError::NotAFormula {
                            unit: unit.name.clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Canonical form of every unit, for alpha-equivalence comparisons.
    pub fn canonical(&self) -> HolProblem {
        HolProblem::new(self.units.iter().map(HolUnit::canonical).collect())
    }

    pub fn alpha_eq(&self, other: &HolProblem) -> bool {
        self.canonical() == other.canonical()
    }
}

/// Replace every defined constant by its definition and beta-normalize.
/// Axioms are never unfolded.
pub fn expand_definitions(problem: &HolProblem, term: &HolTerm) -> Result<HolTerm, ProblemError> {
    let defs = problem.definitions();
    let mut cache: HashMap<String, HolTerm> = HashMap::new();
    let mut in_progress = Vec::new();
    let expanded = unfold(term, &defs, &mut cache, &mut in_progress)?;
    Ok(beta_normalize(&expanded))
}

fn unfold(
    term: &HolTerm,
    defs: &BTreeMap<&str, &HolTerm>,
    cache: &mut HashMap<String, HolTerm>,
    in_progress: &mut Vec<String>,
) -> Result<HolTerm, ProblemError> {
    match term {
        HolTerm::Const(c, _) => {
            let Some(body) = defs.get(c.as_str()) else {
                return Ok(term.clone());
            };
            if let Some(done) = cache.get(c) {
                return Ok(done.clone());
            }
            if in_progress.contains(c) {
                return Err(ProblemError::CyclicDefinition(c.clone()));
            }
            in_progress.push(c.clone());
            let expanded = unfold(body, defs, cache, in_progress)?;
            in_progress.pop();
            cache.insert(c.clone(), expanded.clone());
            Ok(expanded)
        }
        HolTerm::Var(..) => Ok(term.clone()),
        _ => {
            let mut err = None;
            let out = term.map_children(&mut |c| match unfold(c, defs, cache, in_progress) {
                Ok(t) => t,
                Err(e) => {
                    err.get_or_insert(e);
                    c.clone()
                }
            });
            match err {
                Some(e) => Err(e),
                None => Ok(out),
            }
        }
    }
}
