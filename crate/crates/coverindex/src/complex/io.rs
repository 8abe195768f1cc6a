//! Text format for base complexes.
//!
//! Line oriented: `dim <1|2>`, `vertex <name>`, `edge <name> <tail> <head>
//! <voltage word>`, `triangle <name> <side> <side> <side>` where a side is an
//! edge name, prefixed `~` when traversed backwards. `#` starts a comment.
//! Voltage words are parsed against the deck group supplied by the caller.

use super::{BaseComplex, EdgeData, Side, TriangleData};
use crate::group::GroupSpec;
use crate::{Error, Result};
use std::sync::Arc;

pub fn parse_base_complex(text: &str, group: Arc<GroupSpec>) -> Result<BaseComplex> {
    let mut dim: Option<u8> = None;
    let mut vertex_names: Vec<String> = Vec::new();
    let mut edges: Vec<EdgeData> = Vec::new();
    let mut triangle_specs: Vec<(String, [String; 3])> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let keyword = tokens.next().unwrap();
        let rest: Vec<&str> = tokens.collect();
        let err = |msg: &str| Error::Parse(format!("line {}: {}", lineno + 1, msg));
        match keyword {
            "dim" => {
                let d: u8 = rest
                    .first()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| err("dim needs 1 or 2"))?;
                dim = Some(d);
            }
            "vertex" => {
                let name = rest.first().ok_or_else(|| err("vertex needs a name"))?;
                vertex_names.push(name.to_string());
            }
            "edge" => {
                if rest.len() < 3 {
                    return Err(err("edge needs name, tail, head, and a voltage word"));
                }
                let name = rest[0].to_string();
                let tail = vertex_names
                    .iter()
                    .position(|v| v == rest[1])
                    .ok_or_else(|| err("unknown tail vertex"))?;
                let head = vertex_names
                    .iter()
                    .position(|v| v == rest[2])
                    .ok_or_else(|| err("unknown head vertex"))?;
                let word = rest[3..].join(" ");
                let voltage = if word.is_empty() {
                    group.identity()
                } else {
                    group.parse_element(&word)?
                };
                edges.push(EdgeData {
                    name,
                    tail,
                    head,
                    voltage,
                });
            }
            "triangle" => {
                if rest.len() != 4 {
                    return Err(err("triangle needs a name and three sides"));
                }
                triangle_specs.push((
                    rest[0].to_string(),
                    [rest[1].into(), rest[2].into(), rest[3].into()],
                ));
            }
            other => return Err(err(&format!("unknown keyword '{}'", other))),
        }
    }

    let dim = dim.ok_or_else(|| Error::Parse("missing 'dim' line".into()))?;
    let mut triangles = Vec::with_capacity(triangle_specs.len());
    for (name, sides) in triangle_specs {
        let mut parsed = [Side {
            edge: 0,
            reversed: false,
        }; 3];
        for (j, side) in sides.iter().enumerate() {
            let (reversed, edge_name) = match side.strip_prefix('~') {
                Some(n) => (true, n),
                None => (false, side.as_str()),
            };
            let edge = edges
                .iter()
                .position(|e| e.name == edge_name)
                .ok_or_else(|| {
                    Error::Parse(format!("triangle '{}' uses unknown edge '{}'", name, edge_name))
                })?;
            parsed[j] = Side { edge, reversed };
        }
        triangles.push(TriangleData {
            name,
            sides: parsed,
        });
    }
    BaseComplex::from_parts(group, dim, vertex_names, edges, triangles)
}

pub fn export_base_complex(base: &BaseComplex) -> String {
    let spec = base.group();
    let mut out = String::new();
    out.push_str(&format!("dim {}\n", base.dim()));
    for v in base.vertex_names() {
        out.push_str(&format!("vertex {}\n", v));
    }
    for e in base.edges() {
        out.push_str(&format!(
            "edge {} {} {} {}\n",
            e.name,
            base.vertex_names()[e.tail],
            base.vertex_names()[e.head],
            spec.element_string(&e.voltage)
        ));
    }
    for t in base.triangles() {
        let sides: Vec<String> = t
            .sides
            .iter()
            .map(|s| {
                let name = &base.edges()[s.edge].name;
                if s.reversed {
                    format!("~{}", name)
                } else {
                    name.clone()
                }
            })
            .collect();
        out.push_str(&format!("triangle {} {}\n", t.name, sides.join(" ")));
    }
    out
}
