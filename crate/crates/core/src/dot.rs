//! Graphviz export. Output depends only on the graph and the decorations, so
//! identical inputs give byte-identical text.

use std::fmt::Write;

use thiserror::Error;

use crate::graph::WeightedGraph;
use crate::linalg::{format_rational, RationalVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("decoration `{name}` has {got} entries, graph has {expected} vertices")]
pub struct DotError {
    pub name: &'static str,
    pub expected: usize,
    pub got: usize,
}

/// Optional per-vertex labels. Nonzero `l` and `p` entries also get an arrow.
#[derive(Debug, Clone, Default)]
pub struct Decorations<'a> {
    pub m: Option<&'a [i64]>,
    pub l: Option<&'a [i64]>,
    pub p: Option<&'a [i64]>,
    pub q: Option<&'a RationalVector>,
    pub nu: Option<&'a [i64]>,
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn export_dot(g: &WeightedGraph, deco: &Decorations<'_>) -> Result<String, DotError> {
    let n = g.len();
    let check = |name: &'static str, len: Option<usize>| match len {
        Some(got) if got != n => Err(DotError { name, expected: n, got }),
        _ => Ok(()),
    };
    check("m", deco.m.map(<[i64]>::len))?;
    check("l", deco.l.map(<[i64]>::len))?;
    check("p", deco.p.map(<[i64]>::len))?;
    check("q", deco.q.map(RationalVector::len))?;
    check("nu", deco.nu.map(<[i64]>::len))?;

    let mut out = String::from("graph resolution {\n  node [shape=box];\n");
    for (i, v) in g.vertices().iter().enumerate() {
        let mut label = format!("{}\ng={} e={}", v.id, v.genus, v.self_intersection);
        let lines = [
            ("m", deco.m.map(|m| m[i].to_string())),
            ("l", deco.l.map(|l| l[i].to_string())),
            ("p", deco.p.map(|p| p[i].to_string())),
            ("q", deco.q.map(|q| format_rational(&q[i]))),
            ("nu", deco.nu.map(|nu| nu[i].to_string())),
        ];
        for (name, value) in lines {
            if let Some(value) = value {
                let _ = write!(label, "\n{name}={value}");
            }
        }
        let _ = writeln!(out, "  {} [label={}];", quote(&v.id), quote(&label));
    }
    for &(a, b) in g.edges() {
        let _ = writeln!(out, "  {} -- {};", quote(&g.vertex(a).id), quote(&g.vertex(b).id));
    }
    for (kind, head, values) in [("l", "onormal", deco.l), ("p", "normal", deco.p)] {
        let Some(values) = values else { continue };
        for (i, &count) in values.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let id = &g.vertex(i).id;
            let leaf = quote(&format!("{kind}:{id}"));
            let label = if count > 1 { quote(&count.to_string()) } else { quote("") };
            let _ = writeln!(out, "  {leaf} [shape=point, xlabel={label}];");
            let _ = writeln!(out, "  {} -- {leaf} [dir=forward, arrowhead={head}];", quote(id));
        }
    }
    out.push_str("}\n");
    Ok(out)
}
