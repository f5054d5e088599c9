//! Line-based text format for finite Kripke models.
//!
//! ```text
//! # comment
//! worlds: w1 w2
//! rel: w1>w2 w2>w2
//! universe: a b
//! dom w1: a
//! dom w2: a b
//! const c = a
//! fun g(a) = b
//! pred f @ w1: a
//! pred q @ w2: (a,b) (b,b)
//! pred p @ w1: ()
//! ```
//!
//! `worlds` and `universe` come first. Worlds without a `dom` line get the
//! whole universe. A predicate line may carry an explicit arity (`pred
//! f/1 @ w1:`), needed only when every listed extension is empty and no
//! signature supplies it.

use super::model::{tuple_at, tuple_index, FuncTable, KripkeModel, PredTable};
use crate::fml::Signature;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FixtureError {
    pub line: usize,
    pub message: String,
}

type PredLine = (String, Option<usize>, usize, Vec<Vec<usize>>);

struct Builder {
    worlds: Option<Vec<String>>,
    universe: Option<Vec<String>>,
    rel: Vec<(usize, usize)>,
    dom: BTreeMap<usize, Vec<usize>>,
    consts: Vec<(String, usize)>,
    funcs: Vec<(String, Vec<usize>, usize)>,
    /// (name, declared arity, world, tuples)
    preds: Vec<PredLine>,
}

fn split_tuple(s: &str) -> Vec<&str> {
    let inner = s.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(s);
    if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(str::trim).collect()
    }
}

/// Parse a model fixture. Predicate arities come from `signature` when
/// given; predicates of the signature without any line get empty
/// extensions.
pub fn parse_model(text: &str, signature: Option<&Signature>) -> Result<KripkeModel, FixtureError> {
    let mut b = Builder {
        worlds: None,
        universe: None,
        rel: Vec::new(),
        dom: BTreeMap::new(),
        consts: Vec::new(),
        funcs: Vec::new(),
        preds: Vec::new(),
    };
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| FixtureError {
            line: line_no,
            message: m,
        };
        let world = |b: &Builder, name: &str| -> Result<usize, FixtureError> {
            let ws = b
                .worlds
                .as_ref()
                .ok_or_else(|| err("`worlds:` must come first".into()))?;
            ws.iter()
                .position(|w| w == name)
                .ok_or_else(|| err(format!("unknown world `{name}`")))
        };
        let individual = |b: &Builder, name: &str| -> Result<usize, FixtureError> {
            let us = b
                .universe
                .as_ref()
                .ok_or_else(|| err("`universe:` must come first".into()))?;
            us.iter()
                .position(|x| x == name)
                .ok_or_else(|| err(format!("unknown individual `{name}`")))
        };
        let names = |rest: &str| rest.split_whitespace().map(String::from).collect::<Vec<_>>();

        if let Some(rest) = line.strip_prefix("worlds:") {
            let ws = names(rest);
            if ws.is_empty() {
                return Err(err("a model needs at least one world".into()));
            }
            b.worlds = Some(ws);
        } else if let Some(rest) = line.strip_prefix("universe:") {
            let us = names(rest);
            if us.is_empty() {
                return Err(err("the universe must be nonempty".into()));
            }
            b.universe = Some(us);
        } else if let Some(rest) = line.strip_prefix("rel:") {
            for edge in rest.split_whitespace() {
                let (from, to) = edge
                    .split_once('>')
                    .ok_or_else(|| err(format!("expected `from>to`, found `{edge}`")))?;
                let edge = (world(&b, from)?, world(&b, to)?);
                b.rel.push(edge);
            }
        } else if let Some(rest) = line.strip_prefix("dom ") {
            let (w, members) = rest
                .split_once(':')
                .ok_or_else(|| err("expected `dom <world>: ...`".into()))?;
            let w = world(&b, w.trim())?;
            let xs = members
                .split_whitespace()
                .map(|x| individual(&b, x))
                .collect::<Result<Vec<_>, _>>()?;
            b.dom.insert(w, xs);
        } else if let Some(rest) = line.strip_prefix("const ") {
            let (c, x) = rest
                .split_once('=')
                .ok_or_else(|| err("expected `const <name> = <individual>`".into()))?;
            let x = individual(&b, x.trim())?;
            b.consts.push((c.trim().to_string(), x));
        } else if let Some(rest) = line.strip_prefix("fun ") {
            let (lhs, x) = rest
                .split_once('=')
                .ok_or_else(|| err("expected `fun <name>(<args>) = <individual>`".into()))?;
            let lhs = lhs.trim();
            let open = lhs
                .find('(')
                .ok_or_else(|| err("expected `(` after the function name".into()))?;
            let args = split_tuple(&lhs[open..])
                .into_iter()
                .map(|a| individual(&b, a))
                .collect::<Result<Vec<_>, _>>()?;
            if args.is_empty() {
                return Err(err("functions take at least one argument".into()));
            }
            let x = individual(&b, x.trim())?;
            b.funcs.push((lhs[..open].trim().to_string(), args, x));
        } else if let Some(rest) = line.strip_prefix("pred ") {
            let (head, tuples) = rest
                .split_once(':')
                .ok_or_else(|| err("expected `pred <name> @ <world>: ...`".into()))?;
            let (name, w) = head.split_once('@').ok_or_else(|| err("expected `@ <world>`".into()))?;
            let (name, arity) = match name.trim().split_once('/') {
                Some((n, a)) => (
                    n.to_string(),
                    Some(a.parse::<usize>().map_err(|_| err(format!("bad arity `{a}`")))?),
                ),
                None => (name.trim().to_string(), None),
            };
            let w = world(&b, w.trim())?;
            let tuples = tuples
                .split_whitespace()
                .map(|t| {
                    split_tuple(t)
                        .into_iter()
                        .map(|x| individual(&b, x))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            b.preds.push((name, arity, w, tuples));
        } else {
            return Err(err(format!("unrecognized line `{line}`")));
        }
    }
    let at_end = |m: String| FixtureError {
        line: last_line,
        message: m,
    };
    let worlds = b.worlds.ok_or_else(|| at_end("missing `worlds:` line".into()))?;
    let universe = b.universe.ok_or_else(|| at_end("missing `universe:` line".into()))?;
    let (nw, nu) = (worlds.len(), universe.len());
    let mut model = KripkeModel::new(nw, nu);
    model.worlds = worlds;
    model.universe = universe;
    for (a, c) in b.rel {
        model.rel[a][c] = true;
    }
    for (w, xs) in b.dom {
        model.dom[w] = vec![false; nu];
        for x in xs {
            model.dom[w][x] = true;
        }
    }
    for (c, x) in b.consts {
        model.consts.insert(c, x);
    }
    let mut partial: BTreeMap<String, (usize, Vec<Option<usize>>)> = BTreeMap::new();
    let mut func_order = Vec::new();
    for (f, args, x) in b.funcs {
        let arity = args.len();
        let entry = partial.entry(f.clone()).or_insert_with(|| {
            func_order.push(f.clone());
            (arity, vec![None; nu.pow(arity as u32)])
        });
        if entry.0 != arity {
            return Err(at_end(format!(
                "function `{f}` used with arities {} and {arity}",
                entry.0
            )));
        }
        entry.1[tuple_index(&args, nu)] = Some(x);
    }
    for f in func_order {
        let (arity, values) = partial.remove(&f).expect("recorded above");
        let values = values
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| at_end(format!("function `{f}` is not defined on every argument tuple")))?;
        model.funcs.insert(f, FuncTable { arity, values });
    }
    let sig_arity = |p: &str| signature.and_then(|s| s.predicates.get(p).copied());
    for (p, declared, w, tuples) in b.preds {
        let arity = declared
            .or_else(|| sig_arity(&p))
            .or_else(|| model.preds.get(&p).map(|t| t.arity))
            .or_else(|| tuples.first().map(Vec::len))
            .ok_or_else(|| {
                at_end(format!(
                    "cannot determine the arity of `{p}`; write `pred {p}/<n> @ ...`"
                ))
            })?;
        let table = model
            .preds
            .entry(p.clone())
            .or_insert_with(|| PredTable::empty(arity, nw, nu));
        if table.arity != arity {
            return Err(at_end(format!(
                "predicate `{p}` used with arities {} and {arity}",
                table.arity
            )));
        }
        for t in tuples {
            if t.len() != arity {
                return Err(at_end(format!(
                    "predicate `{p}` has arity {arity} but a tuple of length {}",
                    t.len()
                )));
            }
            table.ext[w][tuple_index(&t, nu)] = true;
        }
    }
    if let Some(sig) = signature {
        for (p, &arity) in &sig.predicates {
            model
                .preds
                .entry(p.clone())
                .or_insert_with(|| PredTable::empty(arity, nw, nu));
        }
        if let Some(c) = sig.constants.iter().find(|c| !model.consts.contains_key(*c)) {
            return Err(at_end(format!("no interpretation for constant `{c}`")));
        }
        if let Some(f) = sig.functions.keys().find(|f| !model.funcs.contains_key(*f)) {
            return Err(at_end(format!("no interpretation for function `{f}`")));
        }
    }
    Ok(model)
}

fn tuple_text(model: &KripkeModel, t: &[usize]) -> String {
    let names: Vec<&str> = t.iter().map(|&x| model.universe[x].as_str()).collect();
    if names.len() == 1 {
        names[0].to_string()
    } else {
        format!("({})", names.join(","))
    }
}

/// Render a model in the fixture format; `parse_model` reads it back.
pub fn print_model(model: &KripkeModel) -> String {
    let mut out = String::new();
    let nu = model.universe_size();
    let _ = writeln!(out, "worlds: {}", model.worlds.join(" "));
    let edges: Vec<String> = (0..model.world_count())
        .flat_map(|w| (0..model.world_count()).map(move |v| (w, v)))
        .filter(|&(w, v)| model.accessible(w, v))
        .map(|(w, v)| format!("{}>{}", model.worlds[w], model.worlds[v]))
        .collect();
    if edges.is_empty() {
        out.push_str("rel:\n");
    } else {
        let _ = writeln!(out, "rel: {}", edges.join(" "));
    }
    let _ = writeln!(out, "universe: {}", model.universe.join(" "));
    for (w, name) in model.worlds.iter().enumerate() {
        let members: Vec<&str> = (0..nu)
            .filter(|&x| model.exists_in(x, w))
            .map(|x| model.universe[x].as_str())
            .collect();
        if members.is_empty() {
            let _ = writeln!(out, "dom {name}:");
        } else {
            let _ = writeln!(out, "dom {name}: {}", members.join(" "));
        }
    }
    for (c, &x) in &model.consts {
        let _ = writeln!(out, "const {c} = {}", model.universe[x]);
    }
    for (f, table) in &model.funcs {
        for (i, &x) in table.values.iter().enumerate() {
            let args = tuple_at(i, table.arity, nu);
            let names: Vec<&str> = args.iter().map(|&a| model.universe[a].as_str()).collect();
            let _ = writeln!(out, "fun {f}({}) = {}", names.join(","), model.universe[x]);
        }
    }
    for (p, table) in &model.preds {
        for (w, ext) in table.ext.iter().enumerate() {
            let tuples: Vec<String> = ext
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| {
                    if table.arity == 0 {
                        "()".to_string()
                    } else {
                        tuple_text(model, &tuple_at(i, table.arity, nu))
                    }
                })
                .collect();
            if tuples.is_empty() {
                let _ = writeln!(out, "pred {p}/{} @ {}:", table.arity, model.worlds[w]);
            } else {
                let _ = writeln!(out, "pred {p} @ {}: {}", model.worlds[w], tuples.join(" "));
            }
        }
    }
    out
}
