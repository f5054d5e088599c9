//! Embedding of first-order modal logic into classical higher-order logic.
//!
//! A modal proposition becomes a predicate on worlds (`$i > $o`). The
//! connectives are lifted pointwise, `mbox_<logic>` quantifies over
//! accessible worlds and the individual quantifiers range over `mu`,
//! guarded by `exists_in_world` under varying and cumulative domains.
//! The accessibility relation of each logic is constrained by frame
//! axioms.

use crate::fml::{collect_signature, Formula, Problem, Role, Signature, SignatureError, Term};
use crate::hol::{DeclaredType, FormulaRole, HolProblem, HolTerm, HolType, HolUnit, Section, UnitBody};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

pub const MU: &str = "mu";
pub const MVALID: &str = "mvalid";
pub const MNOT: &str = "mnot";
pub const MOR: &str = "mor";
pub const MAND: &str = "mand";
pub const MIMPLIES: &str = "mimplies";
pub const MFORALL_IND: &str = "mforall_ind";
pub const MEXISTS_IND: &str = "mexists_ind";
pub const EXISTS_IN_WORLD: &str = "exists_in_world";
pub const NONEMPTY_AX: &str = "nonempty_ax";
pub const CUMULATIVE_AX: &str = "cumulative_ax";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Logic {
    K,
    K4,
    D,
    D4,
    T,
    S4,
    S5,
}

impl Logic {
    pub const ALL: [Logic; 7] = [Logic::K, Logic::K4, Logic::D, Logic::D4, Logic::T, Logic::S4, Logic::S5];

    /// Lowercase name, used as the suffix of `mbox_<tag>` and `rel_<tag>`.
    pub fn tag(self) -> &'static str {
        match self {
            Logic::K => "k",
            Logic::K4 => "k4",
            Logic::D => "d",
            Logic::D4 => "d4",
            Logic::T => "t",
            Logic::S4 => "s4",
            Logic::S5 => "s5",
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown logic `{0}` (expected one of k, k4, d, d4, t, s4, s5)")]
    UnknownLogic(String),
    #[error("unknown domain condition `{0}` (expected one of const, vary, cumul)")]
    UnknownDomain(String),
    #[error("malformed format `{0}` (expected thf:<logic>:<domain>)")]
    MalformedFormat(String),
}

impl FromStr for Logic {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        Logic::ALL
            .into_iter()
            .find(|l| l.tag() == lower)
            .ok_or_else(|| ConfigError::UnknownLogic(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DomainCondition {
    Constant,
    Varying,
    Cumulative,
}

impl DomainCondition {
    pub const ALL: [DomainCondition; 3] = [
        DomainCondition::Constant,
        DomainCondition::Varying,
        DomainCondition::Cumulative,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            DomainCondition::Constant => "const",
            DomainCondition::Varying => "vary",
            DomainCondition::Cumulative => "cumul",
        }
    }

    /// Whether individual quantifiers carry an `exists_in_world` guard.
    pub fn is_guarded(self) -> bool {
        self != DomainCondition::Constant
    }
}

impl fmt::Display for DomainCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for DomainCondition {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "const" | "constant" => Ok(DomainCondition::Constant),
            "vary" | "varying" => Ok(DomainCondition::Varying),
            "cumul" | "cumulative" => Ok(DomainCondition::Cumulative),
            _ => Err(ConfigError::UnknownDomain(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TranslationConfig {
    pub logic: Logic,
    pub domain: DomainCondition,
}

impl TranslationConfig {
    pub fn new(logic: Logic, domain: DomainCondition) -> Self {
        TranslationConfig { logic, domain }
    }

    /// All 21 logic/domain combinations.
    pub fn all() -> impl Iterator<Item = TranslationConfig> {
        Logic::ALL.into_iter().flat_map(|l| {
            DomainCondition::ALL
                .into_iter()
                .map(move |d| TranslationConfig::new(l, d))
        })
    }

    /// Parse the `thf:<logic>:<domain>` format string.
    pub fn from_format(s: &str) -> Result<Self, ConfigError> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [lang, logic, domain] if lang.eq_ignore_ascii_case("thf") => {
                Ok(TranslationConfig::new(logic.parse()?, domain.parse()?))
            }
            _ => Err(ConfigError::MalformedFormat(s.to_string())),
        }
    }

    pub fn relation_name(&self) -> String {
        relation_name(self.logic)
    }

    pub fn box_name(&self) -> String {
        format!("mbox_{}", self.logic.tag())
    }

    pub fn dia_name(&self) -> String {
        format!("mdia_{}", self.logic.tag())
    }
}

impl fmt::Display for TranslationConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "thf:{}:{}", self.logic, self.domain)
    }
}

pub fn relation_name(logic: Logic) -> String {
    format!("rel_{}", logic.tag())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FrameProperty {
    Serial,
    Reflexive,
    Transitive,
    Symmetric,
}

impl FrameProperty {
    /// Name of the defined relational property, e.g. `mserial`.
    pub fn definition_name(self) -> &'static str {
        match self {
            FrameProperty::Serial => "mserial",
            FrameProperty::Reflexive => "mreflexive",
            FrameProperty::Transitive => "mtransitive",
            FrameProperty::Symmetric => "msymmetric",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            FrameProperty::Serial => "serial",
            FrameProperty::Reflexive => "reflexive",
            FrameProperty::Transitive => "transitive",
            FrameProperty::Symmetric => "symmetric",
        }
    }
}

pub fn frame_properties(logic: Logic) -> Vec<FrameProperty> {
    use FrameProperty::*;
    match logic {
        Logic::K => vec![],
        Logic::K4 => vec![Transitive],
        Logic::D => vec![Serial],
        Logic::D4 => vec![Serial, Transitive],
        Logic::T => vec![Reflexive],
        Logic::S4 => vec![Reflexive, Transitive],
        Logic::S5 => vec![Reflexive, Transitive, Symmetric],
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("symbol `{0}` is reserved by the embedding")]
    ReservedSymbol(String),
}

/// Whether `name` collides with a symbol introduced by the embedding.
pub fn is_reserved(name: &str) -> bool {
    const FIXED: [&str; 13] = [
        MU,
        MVALID,
        MNOT,
        MOR,
        MAND,
        MIMPLIES,
        MFORALL_IND,
        MEXISTS_IND,
        EXISTS_IN_WORLD,
        "mserial",
        "mreflexive",
        "mtransitive",
        "msymmetric",
    ];
    FIXED.contains(&name) || ["mbox_", "mdia_", "rel_"].iter().any(|p| name.starts_with(p))
}

fn rho() -> HolType {
    HolType::prop()
}

fn rel_type() -> HolType {
    HolType::curried([HolType::I, HolType::I], HolType::O)
}

fn quantifier_type() -> HolType {
    HolType::arrow(HolType::arrow(HolType::Mu, rho()), rho())
}

fn exists_in_world_type() -> HolType {
    HolType::curried([HolType::Mu, HolType::I], HolType::O)
}

fn unary_type() -> HolType {
    HolType::arrow(rho(), rho())
}

fn binary_type() -> HolType {
    HolType::curried([rho(), rho()], rho())
}

fn c(name: &str, ty: HolType) -> HolTerm {
    HolTerm::constant(name, ty)
}

fn v(name: &str, ty: HolType) -> HolTerm {
    HolTerm::var(name, ty)
}

fn mnot(t: HolTerm) -> HolTerm {
    HolTerm::app(c(MNOT, unary_type()), t)
}

fn mor(a: HolTerm, b: HolTerm) -> HolTerm {
    HolTerm::apps(c(MOR, binary_type()), [a, b])
}

fn exists_in_world(x: HolTerm, w: HolTerm) -> HolTerm {
    HolTerm::apps(c(EXISTS_IN_WORLD, exists_in_world_type()), [x, w])
}

fn rel(config: &TranslationConfig, w: HolTerm, v: HolTerm) -> HolTerm {
    HolTerm::apps(c(&config.relation_name(), rel_type()), [w, v])
}

fn embed_term(term: &Term) -> HolTerm {
    match term {
        Term::Var(x) => v(x, HolType::Mu),
        Term::Const(k) => c(k, HolType::Mu),
        Term::App(f, args) => {
            let ty = HolType::curried(args.iter().map(|_| HolType::Mu), HolType::Mu);
            HolTerm::apps(c(f, ty), args.iter().map(embed_term))
        }
    }
}

/// The lifted proposition (type `$i > $o`) denoted by a modal formula.
pub fn embed_formula(formula: &Formula, config: &TranslationConfig) -> HolTerm {
    match formula {
        Formula::Atom(p, args) => {
            let ty = HolType::curried(args.iter().map(|_| HolType::Mu), rho());
            HolTerm::apps(c(p, ty), args.iter().map(embed_term))
        }
        Formula::Not(f) => mnot(embed_formula(f, config)),
        Formula::Or(a, b) => mor(embed_formula(a, config), embed_formula(b, config)),
        Formula::And(a, b) => HolTerm::apps(
            c(MAND, binary_type()),
            [embed_formula(a, config), embed_formula(b, config)],
        ),
        Formula::Implies(a, b) => HolTerm::apps(
            c(MIMPLIES, binary_type()),
            [embed_formula(a, config), embed_formula(b, config)],
        ),
        Formula::Box(f) => HolTerm::app(c(&config.box_name(), unary_type()), embed_formula(f, config)),
        Formula::Dia(f) => HolTerm::app(c(&config.dia_name(), unary_type()), embed_formula(f, config)),
        Formula::Forall(x, f) => HolTerm::app(
            c(MFORALL_IND, quantifier_type()),
            HolTerm::lambda(x.clone(), HolType::Mu, embed_formula(f, config)),
        ),
        Formula::Exists(x, f) => HolTerm::app(
            c(MEXISTS_IND, quantifier_type()),
            HolTerm::lambda(x.clone(), HolType::Mu, embed_formula(f, config)),
        ),
    }
}

/// `mvalid @ F`: truth of the embedded formula in every world.
pub fn validity(formula: &Formula, config: &TranslationConfig) -> HolTerm {
    HolTerm::app(
        c(MVALID, HolType::arrow(rho(), HolType::O)),
        embed_formula(formula, config),
    )
}

fn declared(section: Section, symbol: &str, ty: HolType) -> HolUnit {
    HolUnit::type_decl(format!("{symbol}_type"), section, symbol, ty)
}

fn defined(section: Section, symbol: &str, ty: HolType, body: HolTerm) -> [HolUnit; 2] {
    [
        declared(section, symbol, ty),
        HolUnit::definition(section, symbol, body),
    ]
}

fn frame_definition(prop: FrameProperty) -> HolTerm {
    let r = || v("R", rel_type());
    let app = |a: &str, b: &str| HolTerm::apps(r(), [v(a, HolType::I), v(b, HolType::I)]);
    let body = match prop {
        FrameProperty::Serial => HolTerm::forall("W", HolType::I, HolTerm::exists("V", HolType::I, app("W", "V"))),
        FrameProperty::Reflexive => HolTerm::forall("W", HolType::I, app("W", "W")),
        FrameProperty::Transitive => HolTerm::forall(
            "W",
            HolType::I,
            HolTerm::forall(
                "V",
                HolType::I,
                HolTerm::forall(
                    "U",
                    HolType::I,
                    HolTerm::implies(HolTerm::and(app("W", "V"), app("V", "U")), app("W", "U")),
                ),
            ),
        ),
        FrameProperty::Symmetric => HolTerm::forall(
            "W",
            HolType::I,
            HolTerm::forall("V", HolType::I, HolTerm::implies(app("W", "V"), app("V", "W"))),
        ),
    };
    HolTerm::lambda("R", rel_type(), body)
}

/// Declarations and definitions of the embedded connectives, quantifiers,
/// accessibility relation and relational frame properties, in a fixed order.
pub fn connective_definitions(config: &TranslationConfig) -> Vec<HolUnit> {
    use Section::{Domain, Logic};
    let phi = || v("Phi", rho());
    let psi = || v("Psi", rho());
    let w = || v("W", HolType::I);
    let lam_phi = |body| HolTerm::lambda("Phi", rho(), body);
    let lam_w = |body| HolTerm::lambda("W", HolType::I, body);
    let at = |p: HolTerm, w: HolTerm| HolTerm::app(p, w);

    let mut units = vec![HolUnit {
        name: "mu_type".into(),
        section: Domain,
        body: UnitBody::TypeDecl {
            symbol: MU.into(),
            ty: DeclaredType::Sort,
        },
    }];

    units.extend(defined(
        Domain,
        MVALID,
        HolType::arrow(rho(), HolType::O),
        lam_phi(HolTerm::forall("W", HolType::I, at(phi(), w()))),
    ));
    units.extend(defined(
        Domain,
        MNOT,
        unary_type(),
        lam_phi(lam_w(HolTerm::not(at(phi(), w())))),
    ));
    units.extend(defined(
        Domain,
        MOR,
        binary_type(),
        lam_phi(HolTerm::lambda(
            "Psi",
            rho(),
            lam_w(HolTerm::or(at(phi(), w()), at(psi(), w()))),
        )),
    ));
    units.extend(defined(
        Domain,
        MAND,
        binary_type(),
        lam_phi(HolTerm::lambda("Psi", rho(), mnot(mor(mnot(phi()), mnot(psi()))))),
    ));
    units.extend(defined(
        Domain,
        MIMPLIES,
        binary_type(),
        lam_phi(HolTerm::lambda("Psi", rho(), mor(mnot(phi()), psi()))),
    ));

    let big_phi = || v("Phi", HolType::arrow(HolType::Mu, rho()));
    let x = || v("X", HolType::Mu);
    let instance = HolTerm::apps(big_phi(), [x(), w()]);
    let range = if config.domain.is_guarded() {
        units.push(declared(Domain, EXISTS_IN_WORLD, exists_in_world_type()));
        HolTerm::implies(exists_in_world(x(), w()), instance)
    } else {
        instance
    };
    units.extend(defined(
        Domain,
        MFORALL_IND,
        quantifier_type(),
        HolTerm::lambda(
            "Phi",
            HolType::arrow(HolType::Mu, rho()),
            lam_w(HolTerm::forall("X", HolType::Mu, range)),
        ),
    ));
    units.extend(defined(
        Domain,
        MEXISTS_IND,
        quantifier_type(),
        HolTerm::lambda(
            "Phi",
            HolType::arrow(HolType::Mu, rho()),
            mnot(HolTerm::app(
                c(MFORALL_IND, quantifier_type()),
                HolTerm::lambda("X", HolType::Mu, mnot(HolTerm::app(big_phi(), x()))),
            )),
        ),
    ));

    let rel_name = config.relation_name();
    units.push(declared(Logic, &rel_name, rel_type()));
    let accessible = HolTerm::forall(
        "V",
        HolType::I,
        HolTerm::or(
            HolTerm::not(rel(config, w(), v("V", HolType::I))),
            at(phi(), v("V", HolType::I)),
        ),
    );
    units.extend(defined(
        Logic,
        &config.box_name(),
        unary_type(),
        lam_phi(lam_w(accessible)),
    ));
    units.extend(defined(
        Logic,
        &config.dia_name(),
        unary_type(),
        lam_phi(mnot(HolTerm::app(c(&config.box_name(), unary_type()), mnot(phi())))),
    ));
    for prop in frame_properties(config.logic) {
        units.extend(defined(
            Logic,
            prop.definition_name(),
            HolType::arrow(rel_type(), HolType::O),
            frame_definition(prop),
        ));
    }
    units
}

/// One axiom `a<k>` per frame property of the logic, applied to its relation.
pub fn frame_axioms(config: &TranslationConfig) -> Vec<HolUnit> {
    frame_properties(config.logic)
        .into_iter()
        .enumerate()
        .map(|(i, prop)| {
            let term = HolTerm::app(
                c(prop.definition_name(), HolType::arrow(rel_type(), HolType::O)),
                c(&config.relation_name(), rel_type()),
            );
            HolUnit::formula(format!("a{}", i + 1), Section::Logic, FormulaRole::Axiom, term)
        })
        .collect()
}

/// Non-emptiness, designation and (for cumulative domains) monotonicity
/// axioms for the individual domains.
pub fn domain_axioms(config: &TranslationConfig, signature: &Signature) -> Vec<HolUnit> {
    if !config.domain.is_guarded() {
        return Vec::new();
    }
    let w = || v("W", HolType::I);
    let mut units = vec![HolUnit::formula(
        NONEMPTY_AX,
        Section::Domain,
        FormulaRole::Axiom,
        HolTerm::forall(
            "V",
            HolType::I,
            HolTerm::exists(
                "X",
                HolType::Mu,
                exists_in_world(v("X", HolType::Mu), v("V", HolType::I)),
            ),
        ),
    )];
    for k in &signature.constants {
        units.push(HolUnit::formula(
            format!("{k}_designation"),
            Section::Problem,
            FormulaRole::Axiom,
            HolTerm::forall("W", HolType::I, exists_in_world(c(k, HolType::Mu), w())),
        ));
    }
    for (f, &arity) in &signature.functions {
        let xs: Vec<HolTerm> = (1..=arity).map(|i| v(&format!("X{i}"), HolType::Mu)).collect();
        let guard = xs
            .iter()
            .map(|x| exists_in_world(x.clone(), w()))
            .reduce(HolTerm::and)
            .expect("functions have at least one argument");
        let image = HolTerm::apps(
            c(f, HolType::curried(xs.iter().map(|_| HolType::Mu), HolType::Mu)),
            xs.iter().cloned(),
        );
        let body = HolTerm::implies(guard, exists_in_world(image, w()));
        let closed = (1..=arity)
            .rev()
            .fold(body, |acc, i| HolTerm::forall(format!("X{i}"), HolType::Mu, acc));
        units.push(HolUnit::formula(
            format!("{f}_designation"),
            Section::Problem,
            FormulaRole::Axiom,
            HolTerm::forall("W", HolType::I, closed),
        ));
    }
    if config.domain == DomainCondition::Cumulative {
        let x = || v("X", HolType::Mu);
        let vv = || v("V", HolType::I);
        let body = HolTerm::implies(
            HolTerm::and(exists_in_world(x(), vv()), rel(config, vv(), w())),
            exists_in_world(x(), w()),
        );
        units.push(HolUnit::formula(
            CUMULATIVE_AX,
            Section::Problem,
            FormulaRole::Axiom,
            HolTerm::forall(
                "X",
                HolType::Mu,
                HolTerm::forall("V", HolType::I, HolTerm::forall("W", HolType::I, body)),
            ),
        ));
    }
    units
}

/// Type declarations for the user's predicates, functions and constants.
pub fn signature_declarations(signature: &Signature) -> Vec<HolUnit> {
    let mus = |n: usize| (0..n).map(|_| HolType::Mu);
    let preds = signature
        .predicates
        .iter()
        .map(|(p, &n)| declared(Section::Problem, p, HolType::curried(mus(n), rho())));
    let funcs = signature
        .functions
        .iter()
        .map(|(f, &n)| declared(Section::Problem, f, HolType::curried(mus(n), HolType::Mu)));
    let consts = signature
        .constants
        .iter()
        .map(|k| declared(Section::Problem, k, HolType::Mu));
    preds.chain(funcs).chain(consts).collect()
}

fn formula_role(role: Role) -> FormulaRole {
    match role {
        Role::Axiom | Role::Definition => FormulaRole::Axiom,
        Role::Hypothesis => FormulaRole::Hypothesis,
        Role::Conjecture => FormulaRole::Conjecture,
    }
}

/// Translate a validated modal problem into a higher-order problem.
///
/// Unit order: connective declarations and definitions, frame axioms,
/// user type declarations, domain axioms, then the user's formulas each
/// wrapped in `mvalid`.
pub fn embed_problem(problem: &Problem, config: &TranslationConfig) -> Result<HolProblem, EmbedError> {
    let signature = collect_signature(problem)?;
    if let Some(bad) = signature.symbols().find(|s| is_reserved(s)) {
        return Err(EmbedError::ReservedSymbol(bad.to_string()));
    }
    let mut units = connective_definitions(config);
    units.extend(frame_axioms(config));
    units.extend(signature_declarations(&signature));
    units.extend(domain_axioms(config, &signature));
    units.extend(problem.units.iter().map(|u| {
        HolUnit::formula(
            u.name.clone(),
            Section::Problem,
            formula_role(u.role),
            validity(&u.formula, config),
        )
    }));
    Ok(HolProblem::new(units))
}

/// Drop definitions (and their type declarations) that no formula unit
/// depends on, directly or through other definitions.
pub fn prune_unused(problem: &HolProblem) -> HolProblem {
    let defs = problem.definitions();
    let mut needed = BTreeSet::new();
    let mut stack: Vec<String> = problem
        .units
        .iter()
        .filter_map(|u| match &u.body {
            UnitBody::Formula { term, .. } => Some(term.constants()),
            _ => None,
        })
        .flatten()
        .collect();
    while let Some(sym) = stack.pop() {
        if needed.insert(sym.clone()) {
            if let Some(body) = defs.get(sym.as_str()) {
                stack.extend(body.constants());
            }
        }
    }
    let unused: BTreeSet<&str> = defs.keys().copied().filter(|d| !needed.contains(*d)).collect();
    let units = problem
        .units
        .iter()
        .filter(|u| match &u.body {
            UnitBody::Definition { symbol, .. } | UnitBody::TypeDecl { symbol, .. } => {
                !unused.contains(symbol.as_str())
            }
            UnitBody::Formula { .. } => true,
        })
        .cloned()
        .collect();
    HolProblem::new(units)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hol::expand_definitions;
    use crate::qmf::parse_problem;

    const E1: &str = "qmf(con,conjecture,( ( ! [X] : ( #box : ( f(X) ) ) ) => ( #box : ( ! [X] : ( f(X) ) ) ) )).";

    fn cfg(l: Logic, d: DomainCondition) -> TranslationConfig {
        TranslationConfig::new(l, d)
    }

    fn names(units: &[HolUnit]) -> Vec<&str> {
        units.iter().map(|u| u.name.as_str()).collect()
    }

    #[test]
    fn frame_property_table() {
        use FrameProperty::*;
        assert_eq!(frame_properties(Logic::K), vec![]);
        assert_eq!(frame_properties(Logic::K4), vec![Transitive]);
        assert_eq!(frame_properties(Logic::D), vec![Serial]);
        assert_eq!(frame_properties(Logic::D4), vec![Serial, Transitive]);
        assert_eq!(frame_properties(Logic::T), vec![Reflexive]);
        assert_eq!(frame_properties(Logic::S4), vec![Reflexive, Transitive]);
        assert_eq!(frame_properties(Logic::S5), vec![Reflexive, Transitive, Symmetric]);
    }

    #[test]
    fn config_parsing() {
        assert_eq!(
            TranslationConfig::from_format("thf:d:const"),
            Ok(cfg(Logic::D, DomainCondition::Constant))
        );
        assert_eq!(
            TranslationConfig::from_format("THF:S5:Vary"),
            Ok(cfg(Logic::S5, DomainCondition::Varying))
        );
        assert_eq!(
            TranslationConfig::from_format("thf:x7:const"),
            Err(ConfigError::UnknownLogic("x7".into()))
        );
        assert!(matches!(
            TranslationConfig::from_format("thf:d"),
            Err(ConfigError::MalformedFormat(_))
        ));
        assert_eq!(TranslationConfig::all().count(), 21);
        for c in TranslationConfig::all() {
            assert_eq!(TranslationConfig::from_format(&c.to_string()), Ok(c));
        }
    }

    #[test]
    fn e1_conjecture_shape() {
        let p = parse_problem(E1).unwrap();
        let got = embed_formula(&p.units[0].formula, &cfg(Logic::D, DomainCondition::Constant));
        let text = got.to_string();
        assert_eq!(
            text,
            "mimplies @ ( mforall_ind @ ^ [X: mu] : ( mbox_d @ ( f @ X ) ) ) @ ( mbox_d @ ( mforall_ind @ ^ [X: mu] : ( f @ X ) ) )"
        );
    }

    #[test]
    fn nullary_atom_is_a_proposition() {
        let config = cfg(Logic::K, DomainCondition::Constant);
        assert_eq!(
            embed_formula(&Formula::atom("p", vec![]), &config),
            HolTerm::constant("p", HolType::prop())
        );
    }

    #[test]
    fn existential_uses_mexists_ind() {
        let config = cfg(Logic::K, DomainCondition::Constant);
        let f = Formula::exists("X", Formula::atom("p", vec![Term::Var("X".into())]));
        assert_eq!(
            embed_formula(&f, &config).to_string(),
            "mexists_ind @ ^ [X: mu] : ( p @ X )"
        );
        let defs = connective_definitions(&config);
        let def = defs
            .iter()
            .find_map(|u| match &u.body {
                UnitBody::Definition { symbol, body } if symbol == MEXISTS_IND => Some(body),
                _ => None,
            })
            .unwrap();
        assert_eq!(
            def.to_string(),
            "^ [Phi: mu > $i > $o] : ( mnot @ ( mforall_ind @ ^ [X: mu] : ( mnot @ ( Phi @ X ) ) ) )"
        );
    }

    fn definition_text(units: &[HolUnit], symbol: &str) -> String {
        units
            .iter()
            .find_map(|u| match &u.body {
                UnitBody::Definition { symbol: s, body } if s == symbol => Some(body.to_string()),
                _ => None,
            })
            .unwrap_or_else(|| panic!("no definition of {symbol}"))
    }

    #[test]
    fn quantifier_definitions_per_domain() {
        let constant = connective_definitions(&cfg(Logic::D, DomainCondition::Constant));
        assert_eq!(
            definition_text(&constant, MFORALL_IND),
            "^ [Phi: mu > $i > $o, W: $i] : ! [X: mu] : ( Phi @ X @ W )"
        );
        let varying = connective_definitions(&cfg(Logic::S5, DomainCondition::Varying));
        assert_eq!(
            definition_text(&varying, MFORALL_IND),
            "^ [Phi: mu > $i > $o, W: $i] : ! [X: mu] : ( ( exists_in_world @ X @ W ) => ( Phi @ X @ W ) )"
        );
        assert_eq!(
            definition_text(&varying, "mbox_s5"),
            "^ [Phi: $i > $o, W: $i] : ! [V: $i] : ( ~ ( rel_s5 @ W @ V ) | ( Phi @ V ) )"
        );
    }

    #[test]
    fn k_constant_is_unconstrained() {
        let config = cfg(Logic::K, DomainCondition::Constant);
        assert!(frame_axioms(&config).is_empty());
        let units = connective_definitions(&config);
        assert!(!names(&units).iter().any(|n| n.contains(EXISTS_IN_WORLD)));
        assert!(!names(&units).iter().any(|n| n.starts_with("mserial")));
    }

    #[test]
    fn domain_axiom_sets() {
        let e1 = parse_problem(E1).unwrap();
        let sig = collect_signature(&e1).unwrap();
        for l in Logic::ALL {
            assert_eq!(
                names(&domain_axioms(&cfg(l, DomainCondition::Varying), &sig)),
                vec![NONEMPTY_AX]
            );
        }
        assert!(domain_axioms(&cfg(Logic::D, DomainCondition::Constant), &sig).is_empty());

        let with_c = parse_problem("qmf(a,axiom,p(c)).").unwrap();
        let sig = collect_signature(&with_c).unwrap();
        let units = domain_axioms(&cfg(Logic::T, DomainCondition::Cumulative), &sig);
        assert_eq!(names(&units), vec![NONEMPTY_AX, "c_designation", CUMULATIVE_AX]);
    }

    #[test]
    fn function_designation_closure() {
        let p = parse_problem("qmf(a,axiom,! [X] : p(g(X,X))).").unwrap();
        let sig = collect_signature(&p).unwrap();
        let units = domain_axioms(&cfg(Logic::K, DomainCondition::Varying), &sig);
        let text = match &units[1].body {
            UnitBody::Formula { term, .. } => term.to_string(),
            _ => unreachable!(),
        };
        assert_eq!(
            text,
            "! [W: $i, X1: mu, X2: mu] : ( ( ( exists_in_world @ X1 @ W ) & ( exists_in_world @ X2 @ W ) ) => ( exists_in_world @ ( g @ X1 @ X2 ) @ W ) )"
        );
    }

    #[test]
    fn e1_problem_d_const() {
        let e1 = parse_problem(E1).unwrap();
        let hol = embed_problem(&e1, &cfg(Logic::D, DomainCondition::Constant)).unwrap();
        hol.check().unwrap();
        let decl = hol.units.iter().find(|u| u.name == "f_type").unwrap();
        assert_eq!(
            decl.body,
            UnitBody::TypeDecl {
                symbol: "f".into(),
                ty: DeclaredType::Term(HolType::curried([HolType::Mu, HolType::I], HolType::O))
            }
        );
        assert_eq!(hol.units.last().unwrap().name, "con");
        assert!(names(&hol.units).contains(&"a1"));
    }

    #[test]
    fn e1_problem_s5_vary() {
        let e1 = parse_problem(E1).unwrap();
        let d = embed_problem(&e1, &cfg(Logic::D, DomainCondition::Constant)).unwrap();
        let s5 = embed_problem(&e1, &cfg(Logic::S5, DomainCondition::Varying)).unwrap();
        s5.check().unwrap();
        let d_conj = d.conjecture().unwrap().to_string().replace("mbox_d", "mbox_s5");
        assert_eq!(s5.conjecture().unwrap().to_string(), d_conj);
        let n = names(&s5.units);
        for want in ["a1", "a2", "a3", NONEMPTY_AX, "exists_in_world_type"] {
            assert!(n.contains(&want), "missing {want}");
        }
    }

    #[test]
    fn empty_problem_has_only_infrastructure() {
        let hol = embed_problem(&Problem::default(), &cfg(Logic::S4, DomainCondition::Cumulative)).unwrap();
        hol.check().unwrap();
        assert!(hol.conjecture().is_none());
        assert!(hol
            .units
            .iter()
            .all(|u| u.section != Section::Problem || u.name == CUMULATIVE_AX));
    }

    #[test]
    fn reserved_symbols_are_rejected() {
        let p = parse_problem("qmf(a,axiom,rel_d).").unwrap();
        assert_eq!(
            embed_problem(&p, &cfg(Logic::D, DomainCondition::Constant)),
            Err(EmbedError::ReservedSymbol("rel_d".into()))
        );
    }

    #[test]
    fn expanded_e1_mentions_only_primitives() {
        let e1 = parse_problem(E1).unwrap();
        let hol = embed_problem(&e1, &cfg(Logic::D, DomainCondition::Constant)).unwrap();
        let expanded = expand_definitions(&hol, hol.conjecture().unwrap()).unwrap();
        assert_eq!(
            expanded.constants(),
            BTreeSet::from(["f".to_string(), "rel_d".to_string()])
        );
    }

    #[test]
    fn pruning_keeps_dependencies() {
        let p = parse_problem("qmf(c,conjecture,#dia : p).").unwrap();
        let hol = embed_problem(&p, &cfg(Logic::T, DomainCondition::Constant)).unwrap();
        let pruned = prune_unused(&hol);
        pruned.check().unwrap();
        let n = names(&pruned.units);
        for keep in [MVALID, "mdia_t", "mbox_t", MNOT, "mreflexive"] {
            assert!(n.contains(&keep), "{keep} pruned");
        }
        for gone in [MAND, MOR, MFORALL_IND, MEXISTS_IND, MIMPLIES] {
            assert!(!n.contains(&gone), "{gone} kept");
        }
    }
}
