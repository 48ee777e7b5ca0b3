//! Text and JSON interchange for valued digraphs and finite posets.
//!
//! Digraph files: a `vdg <n>` header, one `vertex <id> <theta> [label]`
//! line per vertex (ids `0..n`, any order), then `arc <src> <dst>` lines.
//! Poset files: a `poset <k>` header, optional `elem <id> [label]` lines,
//! then `rel <x> <y>` lines read either as the full order relation or as
//! a cover relation to be transitively closed. Blank lines and lines
//! starting with `#` are skipped in both formats.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{DigraphError, ValuedDigraph};
use crate::posets::{FinitePoset, PosetError};

#[derive(Error, Debug)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Digraph(#[from] DigraphError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(line: usize, word: Option<&str>, what: &str) -> Result<T, IoError> {
    word.ok_or_else(|| parse_err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| parse_err(line, format!("malformed {what}")))
}

/// Lines that carry content, paired with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_digraph(text: &str) -> Result<ValuedDigraph, IoError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("vdg") {
        return Err(parse_err(hline, "expected `vdg <n>` header"));
    }
    let n: usize = field(hline, words.next(), "vertex count")?;

    let mut thetas: Vec<Option<u32>> = vec![None; n];
    let mut labels = vec![String::new(); n];
    let mut arcs = Vec::new();
    for (ln, line) in lines {
        let mut words = line.split_whitespace();
        match words.next() {
            Some("vertex") => {
                let id: usize = field(ln, words.next(), "vertex id")?;
                if id >= n {
                    return Err(parse_err(ln, format!("vertex id {id} out of range")));
                }
                if thetas[id].is_some() {
                    return Err(parse_err(ln, format!("vertex {id} declared twice")));
                }
                thetas[id] = Some(field(ln, words.next(), "theta value")?);
                labels[id] = words.collect::<Vec<_>>().join(" ");
            }
            Some("arc") => {
                let s: u32 = field(ln, words.next(), "arc source")?;
                let d: u32 = field(ln, words.next(), "arc target")?;
                if s as usize >= n || d as usize >= n {
                    return Err(parse_err(ln, "arc endpoint out of range"));
                }
                arcs.push((s, d));
            }
            Some(other) => {
                return Err(parse_err(ln, format!("unknown directive `{other}`")));
            }
            None => unreachable!("blank lines are filtered"),
        }
    }
    let thetas: Vec<u32> = thetas
        .into_iter()
        .enumerate()
        .map(|(id, t)| t.ok_or_else(|| parse_err(1, format!("vertex {id} never declared"))))
        .collect::<Result<_, _>>()?;
    Ok(ValuedDigraph::with_labels(thetas, arcs, labels)?)
}

pub fn write_digraph(g: &ValuedDigraph) -> String {
    assert_eq!(
        g.vertex_count(),
        g.id_bound(),
        "only unpeeled digraphs are written"
    );
    let mut s = format!("vdg {}\n", g.vertex_count());
    for v in g.vertices() {
        s.push_str(&format!("vertex {} {}", v.0, g.theta(v)));
        if !g.label(v).is_empty() {
            s.push_str(&format!(" {}", g.label(v)));
        }
        s.push('\n');
    }
    let mut arcs: Vec<(u32, u32)> = g
        .vertices()
        .flat_map(|v| g.out_neighbors(v).map(move |w| (v.0, w.0)))
        .collect();
    arcs.sort_unstable();
    for (a, b) in arcs {
        s.push_str(&format!("arc {a} {b}\n"));
    }
    s
}

#[derive(Serialize, Deserialize)]
pub struct VertexDump {
    pub id: u32,
    pub theta: u32,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
}

#[derive(Serialize, Deserialize)]
pub struct DigraphDump {
    pub n: usize,
    pub vertices: Vec<VertexDump>,
    pub arcs: Vec<(u32, u32)>,
}

pub fn digraph_to_json(g: &ValuedDigraph) -> String {
    assert_eq!(
        g.vertex_count(),
        g.id_bound(),
        "only unpeeled digraphs are written"
    );
    let dump = DigraphDump {
        n: g.vertex_count(),
        vertices: g
            .vertices()
            .map(|v| VertexDump {
                id: v.0,
                theta: g.theta(v),
                label: g.label(v).to_string(),
            })
            .collect(),
        arcs: {
            let mut arcs: Vec<(u32, u32)> = g
                .vertices()
                .flat_map(|v| g.out_neighbors(v).map(move |w| (v.0, w.0)))
                .collect();
            arcs.sort_unstable();
            arcs
        },
    };
    serde_json::to_string_pretty(&dump).expect("dump serializes")
}

pub fn digraph_from_json(text: &str) -> Result<ValuedDigraph, IoError> {
    let dump: DigraphDump = serde_json::from_str(text)?;
    let mut thetas: Vec<Option<u32>> = vec![None; dump.n];
    let mut labels = vec![String::new(); dump.n];
    for v in &dump.vertices {
        let slot = thetas
            .get_mut(v.id as usize)
            .ok_or_else(|| parse_err(1, format!("vertex id {} out of range", v.id)))?;
        if slot.is_some() {
            return Err(parse_err(1, format!("vertex {} declared twice", v.id)));
        }
        *slot = Some(v.theta);
        labels[v.id as usize] = v.label.clone();
    }
    let thetas: Vec<u32> = thetas
        .into_iter()
        .enumerate()
        .map(|(id, t)| t.ok_or_else(|| parse_err(1, format!("vertex {id} never declared"))))
        .collect::<Result<_, _>>()?;
    for &(s, d) in &dump.arcs {
        if s as usize >= dump.n || d as usize >= dump.n {
            return Err(parse_err(1, "arc endpoint out of range"));
        }
    }
    Ok(ValuedDigraph::with_labels(thetas, dump.arcs, labels)?)
}

/// Reads `rel` lines as covers (closing transitively) or as the full
/// order relation, which is validated as given.
pub fn parse_poset(text: &str, covers: bool) -> Result<FinitePoset, IoError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("poset") {
        return Err(parse_err(hline, "expected `poset <k>` header"));
    }
    let k: u32 = field(hline, words.next(), "element count")?;

    let mut labels: Vec<String> = (0..k).map(|i| i.to_string()).collect();
    let mut rels = Vec::new();
    for (ln, line) in lines {
        let mut words = line.split_whitespace();
        match words.next() {
            Some("elem") => {
                let id: u32 = field(ln, words.next(), "element id")?;
                if id >= k {
                    return Err(parse_err(ln, format!("element id {id} out of range")));
                }
                let label = words.collect::<Vec<_>>().join(" ");
                if !label.is_empty() {
                    labels[id as usize] = label;
                }
            }
            Some("rel") => {
                let x: u32 = field(ln, words.next(), "relation source")?;
                let y: u32 = field(ln, words.next(), "relation target")?;
                if x >= k || y >= k {
                    return Err(parse_err(ln, "relation endpoint out of range"));
                }
                rels.push((x, y));
            }
            Some(other) => {
                return Err(parse_err(ln, format!("unknown directive `{other}`")));
            }
            None => unreachable!("blank lines are filtered"),
        }
    }
    let poset = if covers {
        FinitePoset::from_covers(k, &rels)?
    } else {
        FinitePoset::from_relations(k, &rels)?
    };
    Ok(poset.with_labels(labels)?)
}

/// Writes the full strict relation, so the output parses identically
/// with or without cover closure.
pub fn write_poset(p: &FinitePoset) -> String {
    let mut s = format!("poset {}\n", p.n());
    for x in 0..p.n() {
        let label = &p.labels()[x as usize];
        if label == &x.to_string() {
            s.push_str(&format!("elem {x}\n"));
        } else {
            s.push_str(&format!("elem {x} {label}\n"));
        }
    }
    for x in 0..p.n() {
        for y in 0..p.n() {
            if p.lt(x, y) {
                s.push_str(&format!("rel {x} {y}\n"));
            }
        }
    }
    s
}
