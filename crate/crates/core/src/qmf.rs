//! Reader and writer for qmf syntax: TPTP `fof` formulas extended with the
//! prefix modal operators `#box :` and `#dia :`.
//!
//! Binding strengths, tightest first: `~`, `#box`, `#dia`; `&`; `|`;
//! `=>`, `<=`, `<=>`. `&` and `|` associate to the left, the implication
//! family to the right. A quantifier body extends as far right as possible.

use crate::fml::{validate_problem, AnnotatedFormula, Formula, Problem, Role, Term, ValidationError};
use std::fmt::{self, Write as _};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: expected {expected}, found {found}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QmfError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

impl QmfError {
    pub fn span(&self) -> Option<SourceSpan> {
        match self {
            QmfError::Parse(e) => Some(e.span),
            QmfError::Invalid(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    Int(String),
    Quoted(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Colon,
    Dot,
    Tilde,
    Amp,
    Bar,
    Implies,
    RevImplies,
    Iff,
    Bang,
    Question,
    BoxOp,
    DiaOp,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Lower(s) | Tok::Upper(s) | Tok::Int(s) => format!("`{s}`"),
            Tok::Quoted(s) => format!("`'{s}'`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Implies => "`=>`".into(),
            Tok::RevImplies => "`<=`".into(),
            Tok::Iff => "`<=>`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Question => "`?`".into(),
            Tok::BoxOp => "`#box`".into(),
            Tok::DiaOp => "`#dia`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, column: usize, length: usize, expected: &str, found: String) -> ParseError {
        ParseError {
            span: SourceSpan { line, column, length },
            expected: expected.to_string(),
            found,
        }
    }

    fn skip_trivia(&mut self) -> Result<(), ParseError> {
        loop {
            match self.chars.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('%') => {
                    while let Some(&c) = self.chars.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                Some('/') => {
                    let (line, column) = (self.line, self.column);
                    self.bump();
                    if self.chars.peek() != Some(&'*') {
                        return Err(self.error(line, column, 1, "a token", "`/`".into()));
                    }
                    self.bump();
                    let mut prev = '\0';
                    loop {
                        match self.bump() {
                            Some('/') if prev == '*' => break,
                            Some(c) => prev = c,
                            None => {
                                return Err(self.error(
                                    line,
                                    column,
                                    2,
                                    "`*/` closing the comment",
                                    "end of input".into(),
                                ))
                            }
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn word(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn tokenize(mut self) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_trivia()?;
            let (line, column) = (self.line, self.column);
            let Some(&c) = self.chars.peek() else {
                out.push((
                    Tok::Eof,
                    SourceSpan {
                        line,
                        column,
                        length: 0,
                    },
                ));
                return Ok(out);
            };
            let single = |t: Tok| {
                (
                    t,
                    SourceSpan {
                        line,
                        column,
                        length: 1,
                    },
                )
            };
            let tok = match c {
                '(' => single(Tok::LParen),
                ')' => single(Tok::RParen),
                '[' => single(Tok::LBrack),
                ']' => single(Tok::RBrack),
                ',' => single(Tok::Comma),
                ':' => single(Tok::Colon),
                '.' => single(Tok::Dot),
                '~' => single(Tok::Tilde),
                '&' => single(Tok::Amp),
                '|' => single(Tok::Bar),
                '!' => single(Tok::Bang),
                '?' => single(Tok::Question),
                '=' => {
                    self.bump();
                    if self.chars.peek() == Some(&'>') {
                        self.bump();
                        out.push((
                            Tok::Implies,
                            SourceSpan {
                                line,
                                column,
                                length: 2,
                            },
                        ));
                        continue;
                    }
                    return Err(self.error(line, column, 1, "`=>` (equality is not supported)", "`=`".into()));
                }
                '<' => {
                    self.bump();
                    if self.chars.peek() != Some(&'=') {
                        return Err(self.error(line, column, 1, "`<=` or `<=>`", "`<`".into()));
                    }
                    self.bump();
                    if self.chars.peek() == Some(&'>') {
                        self.bump();
                        out.push((
                            Tok::Iff,
                            SourceSpan {
                                line,
                                column,
                                length: 3,
                            },
                        ));
                    } else {
                        out.push((
                            Tok::RevImplies,
                            SourceSpan {
                                line,
                                column,
                                length: 2,
                            },
                        ));
                    }
                    continue;
                }
                '#' => {
                    self.bump();
                    let w = self.word();
                    let span = SourceSpan {
                        line,
                        column,
                        length: w.chars().count() + 1,
                    };
                    match w.as_str() {
                        "box" => out.push((Tok::BoxOp, span)),
                        "dia" => out.push((Tok::DiaOp, span)),
                        _ => {
                            return Err(ParseError {
                                span,
                                expected: "`#box` or `#dia`".into(),
                                found: format!("`#{w}`"),
                            })
                        }
                    }
                    continue;
                }
                '\'' => {
                    self.bump();
                    let mut s = String::new();
                    loop {
                        match self.bump() {
                            Some('\'') => break,
                            Some(c) => s.push(c),
                            None => return Err(self.error(line, column, 1, "a closing `'`", "end of input".into())),
                        }
                    }
                    let len = s.chars().count() + 2;
                    out.push((
                        Tok::Quoted(s),
                        SourceSpan {
                            line,
                            column,
                            length: len,
                        },
                    ));
                    continue;
                }
                c if c.is_ascii_lowercase() => {
                    let w = self.word();
                    let len = w.len();
                    out.push((
                        Tok::Lower(w),
                        SourceSpan {
                            line,
                            column,
                            length: len,
                        },
                    ));
                    continue;
                }
                c if c.is_ascii_uppercase() => {
                    let w = self.word();
                    let len = w.len();
                    out.push((
                        Tok::Upper(w),
                        SourceSpan {
                            line,
                            column,
                            length: len,
                        },
                    ));
                    continue;
                }
                c if c.is_ascii_digit() => {
                    let w = self.word();
                    let len = w.len();
                    if !w.chars().all(|c| c.is_ascii_digit()) {
                        return Err(self.error(line, column, len, "an integer or identifier", format!("`{w}`")));
                    }
                    out.push((
                        Tok::Int(w),
                        SourceSpan {
                            line,
                            column,
                            length: len,
                        },
                    ));
                    continue;
                }
                other => {
                    return Err(self.error(line, column, 1, "a token", format!("`{other}`")));
                }
            };
            self.bump();
            out.push(tok);
        }
    }
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError {
            span: self.span(),
            expected: expected.to_string(),
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            self.fail(&tok.describe())
        }
    }

    fn problem(&mut self) -> Result<Problem, ParseError> {
        let mut units = Vec::new();
        while *self.peek() != Tok::Eof {
            units.push(self.unit()?);
        }
        Ok(Problem::new(units))
    }

    fn unit(&mut self) -> Result<AnnotatedFormula, ParseError> {
        match self.peek() {
            Tok::Lower(w) if w == "qmf" => {
                self.advance();
            }
            Tok::Lower(w) if w == "include" => {
                return self.fail("a `qmf(...)` unit (include directives are not supported)");
            }
            _ => return self.fail("a `qmf(...)` unit"),
        }
        self.expect(Tok::LParen)?;
        let name = match self.peek() {
            Tok::Lower(w) | Tok::Int(w) => {
                let w = w.clone();
                self.advance();
                w
            }
            _ => return self.fail("a unit name"),
        };
        self.expect(Tok::Comma)?;
        let role = match self.peek() {
            Tok::Lower(w) => match Role::from_name(w) {
                Some(r) => {
                    self.advance();
                    r
                }
                None => return self.fail("a role (axiom, hypothesis, definition or conjecture)"),
            },
            _ => return self.fail("a role (axiom, hypothesis, definition or conjecture)"),
        };
        self.expect(Tok::Comma)?;
        let formula = self.formula()?;
        if *self.peek() == Tok::Comma {
            return self.fail("`)` (annotations are not supported)");
        }
        self.expect(Tok::RParen)?;
        self.expect(Tok::Dot)?;
        Ok(AnnotatedFormula { name, role, formula })
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        match self.peek() {
            Tok::Implies => {
                self.advance();
                Ok(Formula::implies(lhs, self.formula()?))
            }
            Tok::RevImplies => {
                self.advance();
                Ok(Formula::implies(self.formula()?, lhs))
            }
            Tok::Iff => {
                self.advance();
                let rhs = self.formula()?;
                Ok(Formula::and(
                    Formula::implies(lhs.clone(), rhs.clone()),
                    Formula::implies(rhs, lhs),
                ))
            }
            _ => Ok(lhs),
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.advance();
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.advance();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn modal_colon(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Colon => {
                self.advance();
                Ok(())
            }
            Tok::LParen => self.fail("`:` (indexed modal operators are not supported)"),
            _ => self.fail("`:`"),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Tilde => {
                self.advance();
                Ok(Formula::not(self.unary()?))
            }
            Tok::BoxOp => {
                self.advance();
                self.modal_colon()?;
                Ok(Formula::boxed(self.unary()?))
            }
            Tok::DiaOp => {
                self.advance();
                self.modal_colon()?;
                Ok(Formula::dia(self.unary()?))
            }
            Tok::Bang | Tok::Question => {
                let universal = self.advance() == Tok::Bang;
                self.expect(Tok::LBrack)?;
                let mut vars = Vec::new();
                loop {
                    match self.peek() {
                        Tok::Upper(v) => {
                            vars.push(v.clone());
                            self.advance();
                        }
                        _ => return self.fail("a variable (uppercase identifier)"),
                    }
                    match self.peek() {
                        Tok::Comma => {
                            self.advance();
                        }
                        Tok::RBrack => {
                            self.advance();
                            break;
                        }
                        _ => return self.fail("`,` or `]`"),
                    }
                }
                self.expect(Tok::Colon)?;
                let body = self.formula()?;
                Ok(vars.into_iter().rev().fold(body, |acc, v| {
                    if universal {
                        Formula::forall(v, acc)
                    } else {
                        Formula::exists(v, acc)
                    }
                }))
            }
            Tok::LParen => {
                self.advance();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Lower(p) => {
                let p = p.clone();
                self.advance();
                let args = self.arguments()?;
                Ok(Formula::Atom(p, args))
            }
            _ => self.fail("a formula"),
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>, ParseError> {
        if *self.peek() != Tok::LParen {
            return Ok(Vec::new());
        }
        self.advance();
        let mut args = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Comma => {
                    self.advance();
                    args.push(self.term()?);
                }
                Tok::RParen => {
                    self.advance();
                    return Ok(args);
                }
                _ => return self.fail("`,` or `)`"),
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Tok::Upper(v) => {
                let v = v.clone();
                self.advance();
                Ok(Term::Var(v))
            }
            Tok::Lower(f) => {
                let f = f.clone();
                self.advance();
                let args = self.arguments()?;
                if args.is_empty() {
                    Ok(Term::Const(f))
                } else {
                    Ok(Term::App(f, args))
                }
            }
            _ => self.fail("a term"),
        }
    }
}

fn parse_unvalidated(text: &str) -> Result<Problem, ParseError> {
    let toks = Lexer::new(text).tokenize()?;
    Parser { toks, pos: 0 }.problem()
}

/// Parse a qmf problem and validate it.
pub fn parse_problem(text: &str) -> Result<Problem, QmfError> {
    let problem = parse_unvalidated(text)?;
    validate_problem(&problem)?;
    Ok(problem)
}

/// Parse a single formula, e.g. `#box : ( p )`. Free variables are allowed.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let toks = Lexer::new(text).tokenize()?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.fail("end of input");
    }
    Ok(f)
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(x) | Term::Const(x) => out.push_str(x),
        Term::App(f, args) => {
            out.push_str(f);
            write_args(out, args);
        }
    }
}

fn write_args(out: &mut String, args: &[Term]) {
    if args.is_empty() {
        return;
    }
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        write_term(out, a);
    }
    out.push(')');
}

fn write_formula(out: &mut String, f: &Formula) {
    let wrapped = |out: &mut String, g: &Formula| {
        out.push_str("( ");
        write_formula(out, g);
        out.push_str(" )");
    };
    match f {
        Formula::Atom(p, args) => {
            out.push_str(p);
            write_args(out, args);
        }
        Formula::Not(g) => {
            out.push_str("~ ");
            wrapped(out, g);
        }
        Formula::Box(g) => {
            out.push_str("#box : ");
            wrapped(out, g);
        }
        Formula::Dia(g) => {
            out.push_str("#dia : ");
            wrapped(out, g);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            let op = match f {
                Formula::And(..) => " & ",
                Formula::Or(..) => " | ",
                _ => " => ",
            };
            wrapped(out, a);
            out.push_str(op);
            wrapped(out, b);
        }
        Formula::Forall(x, g) | Formula::Exists(x, g) => {
            let q = if matches!(f, Formula::Forall(..)) { '!' } else { '?' };
            let _ = write!(out, "{q} [{x}] : ");
            wrapped(out, g);
        }
    }
}

/// Fully parenthesized qmf rendering of a formula.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

/// One `qmf(name,role,( formula )).` line per unit.
pub fn print_problem(problem: &Problem) -> String {
    let mut out = String::new();
    for u in &problem.units {
        let _ = writeln!(out, "qmf({},{},( {} )).", u.name, u.role, print_formula(&u.formula));
    }
    out
}
