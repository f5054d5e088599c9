//! Helpers shared by the integration tests: a small thf0 reader used only
//! to re-read emitted files, a TPTP tokenizer for whitespace-insensitive
//! comparisons, and seeded generators for formulas, problems and models.
#![allow(dead_code)]

use fml2hol::embedding::DomainCondition;
use fml2hol::fml::{AnnotatedFormula, Formula, Problem, Role, Term};
use fml2hol::hol::{DeclaredType, FormulaRole, HolProblem, HolTerm, HolType, HolUnit, Section, UnitBody};
use fml2hol::kripke::model::{FuncTable, KripkeModel, PredTable};
use rand::rngs::StdRng;
use rand::Rng;
use std::collections::BTreeMap;

pub const E1_QMF: &str =
    "qmf(con,conjecture,( \n    ( ! [X] : ( #box : ( f(X) ) ) ) => ( #box : ( ! [X] : ( f(X) ) ) ) )).\n";

// ---------------------------------------------------------------------------
// Tokens

/// TPTP tokens with comments and layout removed. Quoted strings are single
/// tokens; `=>`, `<=>` and `<=` are single tokens.
pub fn tokens(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c == '\'' {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i] != '\'' {
                i += 1;
            }
            i += 1;
            out.push(chars[start..i.min(chars.len())].iter().collect());
        } else if c.is_alphanumeric() || c == '_' || c == '$' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '$') {
                i += 1;
            }
            out.push(chars[start..i].iter().collect());
        } else {
            let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
            let op = ["<=>", "=>", "<="].into_iter().find(|op| rest.starts_with(op));
            let tok = op.map(str::to_string).unwrap_or_else(|| c.to_string());
            i += tok.chars().count();
            out.push(tok);
        }
    }
    out
}

/// Split thf text into units (`include(...).` or `thf(...).`), each as a
/// token list.
pub fn unit_tokens(text: &str) -> Vec<Vec<String>> {
    let mut units = Vec::new();
    let mut current = Vec::new();
    let mut depth = 0i32;
    for t in tokens(text) {
        match t.as_str() {
            "(" => depth += 1,
            ")" => depth -= 1,
            _ => {}
        }
        let end = t == "." && depth == 0;
        current.push(t);
        if end {
            units.push(std::mem::take(&mut current));
        }
    }
    units
}

/// The unit named `name` (second token after `thf(`), as tokens.
pub fn find_unit(text: &str, name: &str) -> Option<Vec<String>> {
    unit_tokens(text)
        .into_iter()
        .find(|u| u.len() > 2 && u[0] == "thf" && u[2] == name)
}

// ---------------------------------------------------------------------------
// thf0 reader

#[derive(Debug)]
pub struct ReadError(pub String);

struct Reader {
    toks: Vec<String>,
    pos: usize,
    context: BTreeMap<String, HolType>,
}

impl Reader {
    fn peek(&self) -> &str {
        self.toks.get(self.pos).map_or("", String::as_str)
    }

    fn next(&mut self) -> Result<String, ReadError> {
        let t = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| ReadError("unexpected end of input".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, want: &str) -> Result<(), ReadError> {
        let got = self.next()?;
        if got == want {
            Ok(())
        } else {
            Err(ReadError(format!(
                "expected `{want}`, found `{got}` at token {}",
                self.pos - 1
            )))
        }
    }

    fn base_type(&mut self) -> Result<HolType, ReadError> {
        match self.next()?.as_str() {
            "$i" => Ok(HolType::I),
            "$o" => Ok(HolType::O),
            "mu" => Ok(HolType::Mu),
            "(" => {
                let t = self.ty()?;
                self.expect(")")?;
                Ok(t)
            }
            other => Err(ReadError(format!("unknown type `{other}`"))),
        }
    }

    fn ty(&mut self) -> Result<HolType, ReadError> {
        let from = self.base_type()?;
        if self.peek() == ">" {
            self.pos += 1;
            Ok(HolType::arrow(from, self.ty()?))
        } else {
            Ok(from)
        }
    }

    fn unitary(&mut self, scope: &mut Vec<(String, HolType)>) -> Result<HolTerm, ReadError> {
        let t = self.next()?;
        match t.as_str() {
            "(" => {
                let inner = self.term(scope)?;
                self.expect(")")?;
                Ok(inner)
            }
            "~" => Ok(HolTerm::not(self.unitary(scope)?)),
            "^" | "!" | "?" => {
                self.expect("[")?;
                let mut bound = Vec::new();
                loop {
                    let name = self.next()?;
                    self.expect(":")?;
                    let ty = self.ty()?;
                    bound.push((name, ty));
                    match self.next()?.as_str() {
                        "," => continue,
                        "]" => break,
                        other => return Err(ReadError(format!("bad binder list at `{other}`"))),
                    }
                }
                self.expect(":")?;
                let depth = scope.len();
                scope.extend(bound.iter().cloned());
                let mut body = self.unitary(scope)?;
                scope.truncate(depth);
                for (x, ty) in bound.into_iter().rev() {
                    body = match t.as_str() {
                        "^" => HolTerm::lambda(x, ty, body),
                        "!" => HolTerm::forall(x, ty, body),
                        _ => HolTerm::exists(x, ty, body),
                    };
                }
                Ok(body)
            }
            name if name.starts_with(|c: char| c.is_ascii_uppercase()) => scope
                .iter()
                .rev()
                .find(|(x, _)| x == name)
                .map(|(x, ty)| HolTerm::var(x.clone(), ty.clone()))
                .ok_or_else(|| ReadError(format!("unbound variable `{name}`"))),
            name if name.starts_with(|c: char| c.is_ascii_lowercase()) => self
                .context
                .get(name)
                .map(|ty| HolTerm::constant(name, ty.clone()))
                .ok_or_else(|| ReadError(format!("undeclared constant `{name}`"))),
            other => Err(ReadError(format!("unexpected `{other}`"))),
        }
    }

    fn application(&mut self, scope: &mut Vec<(String, HolType)>) -> Result<HolTerm, ReadError> {
        let mut t = self.unitary(scope)?;
        while self.peek() == "@" {
            self.pos += 1;
            t = HolTerm::app(t, self.unitary(scope)?);
        }
        Ok(t)
    }

    fn term(&mut self, scope: &mut Vec<(String, HolType)>) -> Result<HolTerm, ReadError> {
        let left = self.application(scope)?;
        let op = self.peek().to_string();
        let build: fn(HolTerm, HolTerm) -> HolTerm = match op.as_str() {
            "|" => HolTerm::or,
            "&" => HolTerm::and,
            "=>" => HolTerm::implies,
            _ => return Ok(left),
        };
        self.pos += 1;
        let right = self.application(scope)?;
        if matches!(self.peek(), "|" | "&" | "=>") {
            return Err(ReadError("unparenthesized chain of binary connectives".into()));
        }
        Ok(build(left, right))
    }

    fn unit(&mut self, section: Section) -> Result<Option<HolUnit>, ReadError> {
        let head = self.next()?;
        if head == "include" {
            self.expect("(")?;
            self.next()?;
            self.expect(")")?;
            self.expect(".")?;
            return Ok(None);
        }
        if head != "thf" {
            return Err(ReadError(format!("expected `thf`, found `{head}`")));
        }
        self.expect("(")?;
        let name = self.next()?;
        self.expect(",")?;
        let role = self.next()?;
        self.expect(",")?;
        self.expect("(")?;
        let body = match role.as_str() {
            "type" => {
                let symbol = self.next()?;
                self.expect(":")?;
                let ty = if self.peek() == "$tType" {
                    self.pos += 1;
                    DeclaredType::Sort
                } else {
                    let ty = self.ty()?;
                    self.context.insert(symbol.clone(), ty.clone());
                    DeclaredType::Term(ty)
                };
                UnitBody::TypeDecl { symbol, ty }
            }
            "definition" => {
                let symbol = self.next()?;
                self.expect("=")?;
                let body = self.term(&mut Vec::new())?;
                UnitBody::Definition { symbol, body }
            }
            role => {
                let role = match role {
                    "axiom" => FormulaRole::Axiom,
                    "hypothesis" => FormulaRole::Hypothesis,
                    "conjecture" => FormulaRole::Conjecture,
                    other => return Err(ReadError(format!("unknown role `{other}`"))),
                };
                let term = self.term(&mut Vec::new())?;
                UnitBody::Formula { role, term }
            }
        };
        self.expect(")")?;
        self.expect(")")?;
        self.expect(".")?;
        Ok(Some(HolUnit { name, section, body }))
    }
}

/// Read thf files in order, tagging the units of each with its section.
/// Symbols declared in earlier files are visible in later ones.
pub fn read_thf(files: &[(&str, Section)]) -> Result<HolProblem, ReadError> {
    let mut reader = Reader {
        toks: Vec::new(),
        pos: 0,
        context: BTreeMap::new(),
    };
    let mut units = Vec::new();
    for (text, section) in files {
        reader.toks = tokens(text);
        reader.pos = 0;
        while reader.pos < reader.toks.len() {
            if let Some(u) = reader.unit(*section)? {
                units.push(u);
            }
        }
    }
    Ok(HolProblem::new(units))
}

pub fn units_in(problem: &HolProblem, section: Section) -> HolProblem {
    HolProblem::new(problem.units.iter().filter(|u| u.section == section).cloned().collect())
}

pub fn with_section(problem: &HolProblem, section: Section) -> HolProblem {
    HolProblem::new(problem.units.iter().map(|u| HolUnit { section, ..u.clone() }).collect())
}

// ---------------------------------------------------------------------------
// Generators

/// Symbols available to generated formulas.
#[derive(Clone, Debug)]
pub struct GenSignature {
    pub predicates: Vec<(&'static str, usize)>,
    pub function: Option<&'static str>,
    pub constant: Option<&'static str>,
}

impl GenSignature {
    /// Up to two predicates, possibly a unary function and a constant.
    pub fn random(rng: &mut StdRng) -> Self {
        let pool = [("p", 1), ("q", 2), ("r", 0)];
        let first = rng.gen_range(0..pool.len());
        let mut predicates = vec![pool[first]];
        if rng.gen_bool(0.6) {
            let second = (first + rng.gen_range(1..pool.len())) % pool.len();
            predicates.push(pool[second]);
        }
        GenSignature {
            predicates,
            function: rng.gen_bool(0.5).then_some("g"),
            constant: rng.gen_bool(0.6).then_some("c"),
        }
    }

    pub fn full() -> Self {
        GenSignature {
            predicates: vec![("p", 1), ("q", 2), ("r", 0)],
            function: Some("g"),
            constant: Some("c"),
        }
    }
}

fn random_term(rng: &mut StdRng, sig: &GenSignature, vars: &[String], depth: usize) -> Term {
    if let Some(g) = sig.function {
        if depth > 0 && rng.gen_bool(0.25) {
            return Term::App(g.into(), vec![random_term(rng, sig, vars, depth - 1)]);
        }
    }
    match (vars.is_empty(), sig.constant) {
        (false, Some(c)) if rng.gen_bool(0.25) => Term::Const(c.into()),
        (false, _) => Term::Var(vars[rng.gen_range(0..vars.len())].clone()),
        (true, Some(c)) => Term::Const(c.into()),
        (true, None) => unreachable!("atoms needing terms are only generated when some term exists"),
    }
}

fn random_atom(rng: &mut StdRng, sig: &GenSignature, vars: &[String]) -> Formula {
    let has_terms = !vars.is_empty() || sig.constant.is_some();
    let usable: Vec<_> = sig.predicates.iter().filter(|(_, a)| *a == 0 || has_terms).collect();
    if usable.is_empty() {
        // Only predicates with arguments and nothing to fill them: bind a
        // variable first.
        let (p, arity) = sig.predicates[0];
        let x = format!("X{}", vars.len());
        let args = (0..arity).map(|_| Term::Var(x.clone())).collect();
        return Formula::exists(x, Formula::atom(p, args));
    }
    let (p, arity) = *usable[rng.gen_range(0..usable.len())];
    let args = (0..arity).map(|_| random_term(rng, sig, vars, 2)).collect();
    Formula::atom(p, args)
}

/// Closed-under-`vars` formula of depth at most `depth`.
pub fn random_formula(rng: &mut StdRng, sig: &GenSignature, depth: usize, vars: &mut Vec<String>) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return random_atom(rng, sig, vars);
    }
    let d = depth - 1;
    match rng.gen_range(0..8) {
        0 => Formula::not(random_formula(rng, sig, d, vars)),
        1 => Formula::and(random_formula(rng, sig, d, vars), random_formula(rng, sig, d, vars)),
        2 => Formula::or(random_formula(rng, sig, d, vars), random_formula(rng, sig, d, vars)),
        3 => Formula::implies(random_formula(rng, sig, d, vars), random_formula(rng, sig, d, vars)),
        4 => Formula::boxed(random_formula(rng, sig, d, vars)),
        5 => Formula::dia(random_formula(rng, sig, d, vars)),
        q => {
            let x = format!("X{}", vars.len());
            vars.push(x.clone());
            let body = random_formula(rng, sig, d, vars);
            vars.pop();
            if q == 6 {
                Formula::forall(x, body)
            } else {
                Formula::exists(x, body)
            }
        }
    }
}

pub fn random_closed(rng: &mut StdRng, sig: &GenSignature, depth: usize) -> Formula {
    random_formula(rng, sig, depth, &mut Vec::new())
}

/// A problem of one to four units over one signature, with a conjecture
/// most of the time.
pub fn random_problem(rng: &mut StdRng) -> Problem {
    let sig = GenSignature::random(rng);
    let n = rng.gen_range(1..=4);
    let mut units: Vec<AnnotatedFormula> = (0..n)
        .map(|i| {
            let role = [Role::Axiom, Role::Hypothesis, Role::Definition][rng.gen_range(0..3)];
            AnnotatedFormula::new(format!("ax{i}"), role, random_closed(rng, &sig, 4))
        })
        .collect();
    if rng.gen_bool(0.8) {
        units.push(AnnotatedFormula::new(
            "goal",
            Role::Conjecture,
            random_closed(rng, &sig, 5),
        ));
    }
    Problem::new(units)
}

fn closure_under(model: &KripkeModel, set: &mut [bool]) {
    loop {
        let mut changed = false;
        for table in model.funcs.values() {
            for (x, &y) in table.values.iter().enumerate() {
                if set[x] && !set[y] {
                    set[y] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return;
        }
    }
}

/// A model over `sig` satisfying the domain condition, with an arbitrary
/// accessibility relation.
pub fn random_model(rng: &mut StdRng, sig: &GenSignature, condition: DomainCondition) -> KripkeModel {
    let nw = rng.gen_range(1..=3);
    let nu = rng.gen_range(1..=3);
    let mut m = KripkeModel::new(nw, nu);
    for w in 0..nw {
        for v in 0..nw {
            m.rel[w][v] = rng.gen_bool(0.4);
        }
    }
    if let Some(c) = sig.constant {
        m.consts.insert(c.into(), rng.gen_range(0..nu));
    }
    if let Some(g) = sig.function {
        let values = (0..nu).map(|_| rng.gen_range(0..nu)).collect();
        m.funcs.insert(g.into(), FuncTable { arity: 1, values });
    }
    for &(p, arity) in &sig.predicates {
        let mut t = PredTable::empty(arity, nw, nu);
        for ext in &mut t.ext {
            for b in ext.iter_mut() {
                *b = rng.gen_bool(0.5);
            }
        }
        m.preds.insert(p.into(), t);
    }
    if condition != DomainCondition::Constant {
        for w in 0..nw {
            let mut d: Vec<bool> = (0..nu).map(|_| rng.gen_bool(0.5)).collect();
            d[rng.gen_range(0..nu)] = true;
            for &x in m.consts.values() {
                d[x] = true;
            }
            closure_under(&m, &mut d);
            m.dom[w] = d;
        }
        if condition == DomainCondition::Cumulative {
            loop {
                let mut changed = false;
                for v in 0..nw {
                    for w in 0..nw {
                        if m.rel[v][w] {
                            for x in 0..nu {
                                if m.dom[v][x] && !m.dom[w][x] {
                                    m.dom[w][x] = true;
                                    changed = true;
                                }
                            }
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
        }
    }
    m
}

// ---------------------------------------------------------------------------
// Reference semantics, written directly from the Kripke truth conditions.

/// Truth of `f` at `w`, quantifiers ranging over `dom(w)`, terms rigid,
/// atoms read over the whole universe.
pub fn reference_holds(m: &KripkeModel, w: usize, f: &Formula, env: &mut Vec<(String, usize)>) -> bool {
    fn term(m: &KripkeModel, t: &Term, env: &[(String, usize)]) -> usize {
        match t {
            Term::Var(x) => env.iter().rev().find(|(y, _)| y == x).expect("bound").1,
            Term::Const(c) => m.consts[c],
            Term::App(f, args) => {
                let args: Vec<usize> = args.iter().map(|a| term(m, a, env)).collect();
                let index = args.iter().fold(0, |acc, &a| acc * m.universe.len() + a);
                m.funcs[f].values[index]
            }
        }
    }
    let nw = m.worlds.len();
    let nu = m.universe.len();
    match f {
        Formula::Atom(p, args) => {
            let args: Vec<usize> = args.iter().map(|a| term(m, a, env)).collect();
            let index = args.iter().fold(0, |acc, &a| acc * nu + a);
            m.preds[p].ext[w][index]
        }
        Formula::Not(a) => !reference_holds(m, w, a, env),
        Formula::And(a, b) => reference_holds(m, w, a, env) && reference_holds(m, w, b, env),
        Formula::Or(a, b) => reference_holds(m, w, a, env) || reference_holds(m, w, b, env),
        Formula::Implies(a, b) => !reference_holds(m, w, a, env) || reference_holds(m, w, b, env),
        Formula::Box(a) => (0..nw).filter(|&v| m.rel[w][v]).all(|v| reference_holds(m, v, a, env)),
        Formula::Dia(a) => (0..nw).filter(|&v| m.rel[w][v]).any(|v| reference_holds(m, v, a, env)),
        Formula::Forall(x, a) | Formula::Exists(x, a) => {
            let universal = matches!(f, Formula::Forall(..));
            let mut result = universal;
            for d in (0..nu).filter(|&d| m.dom[w][d]) {
                env.push((x.clone(), d));
                let v = reference_holds(m, w, a, env);
                env.pop();
                if v != universal {
                    result = v;
                    break;
                }
            }
            result
        }
    }
}
