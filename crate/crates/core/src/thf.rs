//! thf0 concrete syntax for [`HolProblem`]s.
//!
//! Inline mode writes one self-contained file. Include mode splits the
//! embedding's infrastructure into two axiom files, one for the domain
//! condition and one for the modal logic, and references them with
//! `include(...)` lines from the problem file.

use crate::embedding::TranslationConfig;
use crate::hol::{DeclaredType, HolProblem, HolTerm, HolUnit, Section, UnitBody};
use std::fmt::Write as _;
use std::path::PathBuf;

pub const DEFAULT_WRAP: usize = 100;
pub const DEFAULT_AXIOM_DIR: &str = "Axioms";
pub const DEFAULT_BASENAME: &str = "fml";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmissionMode {
    Inline,
    /// `domain_file` and `logic_file` are file name templates in which
    /// `{tag}` stands for the domain or logic tag.
    Include {
        axiom_dir: String,
        domain_file: String,
        logic_file: String,
    },
}

impl EmissionMode {
    /// Axiom files named `<basename>_<tag>.ax` in `axiom_dir`.
    pub fn include(axiom_dir: impl Into<String>, basename: &str) -> Self {
        EmissionMode::Include {
            axiom_dir: axiom_dir.into(),
            domain_file: format!("{basename}_{{tag}}.ax"),
            logic_file: format!("{basename}_{{tag}}.ax"),
        }
    }

    pub fn include_default() -> Self {
        Self::include(DEFAULT_AXIOM_DIR, DEFAULT_BASENAME)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmittedOutput {
    pub problem_text: String,
    /// Axiom files as (path relative to the problem file, contents).
    pub axiom_files: Vec<(PathBuf, String)>,
}

fn is_atomic(t: &HolTerm) -> bool {
    matches!(t, HolTerm::Const(..) | HolTerm::Var(..))
}

fn is_binder(t: &HolTerm) -> bool {
    matches!(t, HolTerm::Lambda(..) | HolTerm::Forall(..) | HolTerm::Exists(..))
}

fn parens(out: &mut String, t: &HolTerm) {
    out.push_str("( ");
    write_term(out, t);
    out.push_str(" )");
}

fn write_term(out: &mut String, t: &HolTerm) {
    match t {
        HolTerm::Const(name, _) | HolTerm::Var(name, _) => out.push_str(name),
        HolTerm::App(..) => {
            let (head, args) = t.spine();
            if is_atomic(head) {
                write_term(out, head);
            } else {
                parens(out, head);
            }
            let last = args.len() - 1;
            for (i, a) in args.into_iter().enumerate() {
                out.push_str(" @ ");
                if is_atomic(a) || (i == last && matches!(a, HolTerm::Lambda(..))) {
                    write_term(out, a);
                } else {
                    parens(out, a);
                }
            }
        }
        HolTerm::Lambda(..) | HolTerm::Forall(..) | HolTerm::Exists(..) => {
            let symbol = match t {
                HolTerm::Lambda(..) => "^",
                HolTerm::Forall(..) => "!",
                _ => "?",
            };
            let same_kind = |s: &HolTerm| std::mem::discriminant(s) == std::mem::discriminant(t);
            let mut binders = Vec::new();
            let mut body = t;
            loop {
                match body {
                    HolTerm::Lambda(x, ty, b) | HolTerm::Forall(x, ty, b) | HolTerm::Exists(x, ty, b)
                        if same_kind(body) =>
                    {
                        binders.push(format!("{x}: {ty}"));
                        body = b;
                    }
                    _ => break,
                }
            }
            let _ = write!(out, "{symbol} [{}] : ", binders.join(", "));
            if is_atomic(body) || is_binder(body) {
                write_term(out, body);
            } else {
                parens(out, body);
            }
        }
        HolTerm::Not(a) => {
            out.push_str("~ ");
            if is_atomic(a) {
                write_term(out, a);
            } else {
                parens(out, a);
            }
        }
        HolTerm::Or(a, b) | HolTerm::And(a, b) | HolTerm::Implies(a, b) => {
            let op = match t {
                HolTerm::Or(..) => " | ",
                HolTerm::And(..) => " & ",
                _ => " => ",
            };
            for (i, operand) in [a, b].into_iter().enumerate() {
                if i == 1 {
                    out.push_str(op);
                }
                if is_atomic(operand) || matches!(operand.as_ref(), HolTerm::Not(..)) {
                    write_term(out, operand);
                } else {
                    parens(out, operand);
                }
            }
        }
    }
}

/// thf0 rendering of a term, without enclosing parentheses.
pub fn emit_term(term: &HolTerm) -> String {
    let mut out = String::new();
    write_term(&mut out, term);
    out
}

/// One `thf(...).` unit on a single (unwrapped) line.
pub fn emit_unit(unit: &HolUnit) -> String {
    match &unit.body {
        UnitBody::TypeDecl { symbol, ty } => {
            let ty = match ty {
                DeclaredType::Sort => "$tType".to_string(),
                DeclaredType::Term(t) => t.to_string(),
            };
            format!("thf({},type,( {symbol}: {ty} )).", unit.name)
        }
        UnitBody::Definition { symbol, body } => {
            format!("thf({},definition,( {symbol} = ( {} ) )).", unit.name, emit_term(body))
        }
        UnitBody::Formula { role, term } => {
            format!("thf({},{},( {} )).", unit.name, role.as_str(), emit_term(term))
        }
    }
}

/// Greedy wrapping at spaces outside quoted strings. `width == 0` disables
/// wrapping. Continuation lines are indented by four spaces.
pub fn wrap_line(line: &str, width: usize) -> String {
    if width == 0 || line.len() <= width {
        return line.to_string();
    }
    let mut words = Vec::new();
    let mut current = String::new();
    let mut quoted = false;
    for ch in line.chars() {
        match ch {
            '\'' => {
                quoted = !quoted;
                current.push(ch);
            }
            ' ' if !quoted => words.push(std::mem::take(&mut current)),
            _ => current.push(ch),
        }
    }
    words.push(current);
    let mut out = String::new();
    let mut col = 0;
    for word in words {
        if col > 0 && col + 1 + word.len() > width {
            out.push_str("\n    ");
            col = 4;
        } else if col > 0 {
            out.push(' ');
            col += 1;
        }
        out.push_str(&word);
        col += word.len();
    }
    out
}

fn header(out: &mut String, what: &str) {
    let _ = writeln!(out, "% {what}");
}

fn write_units<'a>(out: &mut String, units: impl IntoIterator<Item = &'a HolUnit>, width: usize) {
    for unit in units {
        out.push_str(&wrap_line(&emit_unit(unit), width));
        out.push('\n');
    }
}

/// Render a problem. `config` names the axiom files in include mode.
pub fn emit_problem(
    problem: &HolProblem,
    config: &TranslationConfig,
    mode: &EmissionMode,
    width: usize,
) -> EmittedOutput {
    match mode {
        EmissionMode::Inline => {
            let mut text = String::new();
            header(&mut text, &format!("fml2hol {config}"));
            write_units(&mut text, &problem.units, width);
            EmittedOutput {
                problem_text: text,
                axiom_files: Vec::new(),
            }
        }
        EmissionMode::Include {
            axiom_dir,
            domain_file,
            logic_file,
        } => {
            let in_section = |s: Section| problem.units.iter().filter(move |u| u.section == s);
            let mut axiom_files = Vec::new();
            let mut text = String::new();
            header(&mut text, &format!("fml2hol {config}"));
            let files = [
                (Section::Domain, config.domain.tag(), "domain condition", domain_file),
                (Section::Logic, config.logic.tag(), "modal logic", logic_file),
            ];
            for (section, tag, what, template) in files {
                let file = template.replace("{tag}", tag);
                let path = if axiom_dir.is_empty() {
                    PathBuf::from(&file)
                } else {
                    PathBuf::from(axiom_dir).join(&file)
                };
                let include_path = if axiom_dir.is_empty() {
                    file
                } else {
                    format!("{}/{file}", axiom_dir.trim_end_matches('/'))
                };
                let mut contents = String::new();
                header(&mut contents, &format!("fml2hol {what} axioms ({tag})"));
                write_units(&mut contents, in_section(section), width);
                axiom_files.push((path, contents));
                let _ = writeln!(text, "include('{include_path}').");
            }
            write_units(&mut text, in_section(Section::Problem), width);
            EmittedOutput {
                problem_text: text,
                axiom_files,
            }
        }
    }
}
