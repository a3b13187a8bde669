//! Line-oriented text formats for instances, partitions and seeds.
//!
//! Blank lines and everything after `#` are ignored. Agent ids are 0-based.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{AgentId, Instance, Model, Partition};
use crate::reductions::{CliqueInstance, Side, X3CInstance};

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = body.split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn num(line: usize, word: &str) -> Result<usize> {
    word.parse().map_err(|_| {
        perr(
            line,
            format!("expected a non-negative integer, found `{word}`"),
        )
    })
}

fn nums(line: usize, words: &[&str]) -> Result<Vec<usize>> {
    words.iter().map(|w| num(line, w)).collect()
}

fn arity(line: usize, words: &[&str], n: usize) -> Result<()> {
    if words.len() != n + 1 {
        return Err(perr(line, format!("`{}` takes {n} argument(s)", words[0])));
    }
    Ok(())
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut model: Option<Model> = None;
    let mut n: Option<usize> = None;
    let mut kinds: HashMap<(AgentId, AgentId), bool> = HashMap::new();
    let mut friends = Vec::new();
    let mut enemies = Vec::new();
    for (line, w) in lines(text) {
        match w[0] {
            "model" => {
                arity(line, &w, 1)?;
                if model.is_some() {
                    return Err(perr(line, "model given twice"));
                }
                model = Some(match w[1] {
                    "fe" => Model::Fe,
                    "fen" => Model::Fen,
                    other => return Err(perr(line, format!("unknown model `{other}`"))),
                });
            }
            "agents" => {
                arity(line, &w, 1)?;
                if model.is_none() {
                    return Err(perr(line, "`agents` must follow `model`"));
                }
                if n.is_some() {
                    return Err(perr(line, "agent count given twice"));
                }
                n = Some(num(line, w[1])?);
            }
            kind @ ("friend" | "enemy") => {
                arity(line, &w, 2)?;
                let (Some(m), Some(n)) = (model, n) else {
                    return Err(perr(line, "arcs must follow `model` and `agents`"));
                };
                let is_friend = kind == "friend";
                if !is_friend && m == Model::Fe {
                    return Err(perr(line, "enemy lines are not allowed under model fe"));
                }
                let (u, v) = (num(line, w[1])?, num(line, w[2])?);
                if u >= n || v >= n {
                    return Err(perr(line, format!("agent id out of range 0..{n}")));
                }
                if u == v {
                    return Err(perr(line, format!("self-arc at agent {u}")));
                }
                match kinds.insert((u, v), is_friend) {
                    Some(prev) if prev == is_friend => {
                        return Err(perr(line, format!("duplicate {kind} arc ({u},{v})")))
                    }
                    Some(_) => {
                        return Err(perr(
                            line,
                            format!("({u},{v}) is both a friend and an enemy arc"),
                        ))
                    }
                    None => {}
                }
                if is_friend {
                    friends.push((u, v));
                } else {
                    enemies.push((u, v));
                }
            }
            other => return Err(perr(line, format!("unknown directive `{other}`"))),
        }
    }
    let model = model.ok_or_else(|| perr(0, "missing `model` line"))?;
    let n = n.ok_or_else(|| perr(0, "missing `agents` line"))?;
    match model {
        Model::Fe => Instance::fe(n, &friends),
        Model::Fen => Instance::fen(n, &friends, &enemies),
    }
}

/// Serialises with sorted arcs; `labels`, when given, become comment lines.
pub fn serialize_instance(inst: &Instance, labels: Option<&[String]>) -> String {
    let mut out = format!("model {}\nagents {}\n", inst.model(), inst.n());
    if let Some(labels) = labels {
        for (i, l) in labels.iter().enumerate() {
            let _ = writeln!(out, "# label {i} = {l}");
        }
    }
    for (u, v) in inst.friend_arcs() {
        let _ = writeln!(out, "friend {u} {v}");
    }
    for (u, v) in inst.enemy_arcs() {
        let _ = writeln!(out, "enemy {u} {v}");
    }
    out
}

/// Parses `coalition` lines over agents `0..n`.
pub fn parse_partition(text: &str, n: usize) -> Result<Partition> {
    let mut coalitions = Vec::new();
    let mut seen = vec![0usize; n];
    for (line, w) in lines(text) {
        if w[0] != "coalition" {
            return Err(perr(line, format!("unknown directive `{}`", w[0])));
        }
        if w.len() == 1 {
            return Err(perr(line, "empty coalition"));
        }
        let members = nums(line, &w[1..])?;
        for &a in &members {
            if a >= n {
                return Err(perr(line, format!("agent {a} out of range 0..{n}")));
            }
            if seen[a] != 0 {
                return Err(perr(
                    line,
                    format!("agent {a} already placed on line {}", seen[a]),
                ));
            }
            seen[a] = line;
        }
        coalitions.push(members);
    }
    if let Some(a) = seen.iter().position(|&l| l == 0) {
        return Err(Error::InvalidPartition(format!(
            "agent {a} is in no coalition"
        )));
    }
    Partition::new(n, coalitions)
}

pub fn serialize_partition(pi: &Partition) -> String {
    let mut out = String::new();
    for c in pi.coalitions() {
        let ids: Vec<String> = c.iter().map(|a| a.to_string()).collect();
        let _ = writeln!(out, "coalition {}", ids.join(" "));
    }
    out
}

/// `elements 3N`, then `set A B C [out|in]` lines and an optional
/// `cover J K ...` line naming set indices.
pub fn parse_x3c(text: &str) -> Result<X3CInstance> {
    let mut elements: Option<usize> = None;
    let mut sets = Vec::new();
    let mut sides: Vec<Option<Side>> = Vec::new();
    let mut cover = None;
    for (line, w) in lines(text) {
        match w[0] {
            "elements" => {
                arity(line, &w, 1)?;
                let e = num(line, w[1])?;
                if e == 0 || e % 3 != 0 {
                    return Err(perr(
                        line,
                        format!("element count {e} is not a positive multiple of 3"),
                    ));
                }
                elements = Some(e);
            }
            "set" => {
                if !(w.len() == 4 || w.len() == 5) {
                    return Err(perr(
                        line,
                        "`set` takes three elements and an optional side",
                    ));
                }
                let e = nums(line, &w[1..4])?;
                sets.push([e[0], e[1], e[2]]);
                sides.push(match w.get(4) {
                    None => None,
                    Some(&"out") => Some(Side::Out),
                    Some(&"in") => Some(Side::In),
                    Some(other) => return Err(perr(line, format!("unknown side `{other}`"))),
                });
            }
            "cover" => cover = Some(nums(line, &w[1..])?),
            other => return Err(perr(line, format!("unknown directive `{other}`"))),
        }
    }
    let elements = elements.ok_or_else(|| perr(0, "missing `elements` line"))?;
    let mut x = X3CInstance::new(elements / 3, sets)?;
    if sides.iter().any(Option::is_some) {
        let all: Option<Vec<Side>> = sides.into_iter().collect();
        let all = all.ok_or_else(|| {
            Error::InvalidSeed("either every set or no set carries a side".into())
        })?;
        x = x.with_sides(all)?;
    }
    if let Some(c) = cover {
        if !x.is_cover(&c) {
            return Err(Error::InvalidSeed(
                "listed cover is not an exact cover".into(),
            ));
        }
        x.known_cover = Some(c);
    }
    Ok(x)
}

pub fn serialize_x3c(x: &X3CInstance) -> String {
    let mut out = format!("elements {}\n", x.elements());
    for (j, s) in x.sets.iter().enumerate() {
        let _ = write!(out, "set {} {} {}", s[0], s[1], s[2]);
        if let Some(side) = &x.side {
            out.push_str(if side[j] == Side::Out { " out" } else { " in" });
        }
        out.push('\n');
    }
    if let Some(c) = &x.known_cover {
        let ids: Vec<String> = c.iter().map(|j| j.to_string()).collect();
        let _ = writeln!(out, "cover {}", ids.join(" "));
    }
    out
}

pub fn parse_clique(text: &str) -> Result<CliqueInstance> {
    let mut vertices = None;
    let mut target = None;
    let mut edges = Vec::new();
    for (line, w) in lines(text) {
        match w[0] {
            "vertices" => {
                arity(line, &w, 1)?;
                vertices = Some(num(line, w[1])?);
            }
            "edge" => {
                arity(line, &w, 2)?;
                edges.push((num(line, w[1])?, num(line, w[2])?));
            }
            "target" => {
                arity(line, &w, 1)?;
                let h = num(line, w[1])?;
                if h < 2 {
                    return Err(perr(line, "target must be at least 2"));
                }
                target = Some(h);
            }
            other => return Err(perr(line, format!("unknown directive `{other}`"))),
        }
    }
    let vertices = vertices.ok_or_else(|| perr(0, "missing `vertices` line"))?;
    let h = target.ok_or_else(|| perr(0, "missing `target` line"))?;
    CliqueInstance::new(vertices, edges, h)
}

pub fn serialize_clique(g: &CliqueInstance) -> String {
    let mut out = format!("vertices {}\n", g.vertices);
    for (u, v) in &g.edges {
        let _ = writeln!(out, "edge {u} {v}");
    }
    let _ = writeln!(out, "target {}", g.h);
    out
}
