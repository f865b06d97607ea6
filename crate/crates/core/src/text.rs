//! Plain-text formats for matrices, graphs, lists, families and cardinality
//! constraints.
//!
//! Blank lines and lines starting with `#` are ignored everywhere. Errors
//! carry 1-based line and column numbers of the original input.
//!
//! * matrix: part names on the first line, then one row of `0`, `1`, `*` per
//!   part (whitespace inside a row is ignored);
//! * graph: `n m`, then `m` lines `u v` with 0-based vertices;
//! * lists: `v name...` per vertex, `*` alone meaning every part and no
//!   names meaning the empty list; vertices without a line get every part;
//! * family: one member per line as part names, `*` meaning every part;
//! * cardinality: `name min` per line, unlisted parts get 0.

use crate::cardinality::CardinalityConstraint;
use crate::error::{Error, Result};
use crate::family::{ListFamily, ListFunction};
use crate::graph::Graph;
use crate::matrix::{Entry, PartSet, PartitionMatrix};
use crate::subset::PartSubset;

struct Token<'a> {
    text: &'a str,
    column: usize,
}

/// Significant lines as `(line number, tokens)`.
fn lines(input: &str) -> impl Iterator<Item = (usize, Vec<Token<'_>>)> {
    input.lines().enumerate().filter_map(|(i, line)| {
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            return None;
        }
        let mut tokens = Vec::new();
        let mut start = None;
        for (col, (byte, c)) in line.char_indices().enumerate() {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some((byte, col)),
                (true, Some((b, sc))) => {
                    tokens.push(Token {
                        text: &line[b..byte],
                        column: sc + 1,
                    });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some((b, sc)) = start {
            tokens.push(Token {
                text: &line[b..],
                column: sc + 1,
            });
        }
        Some((i + 1, tokens))
    })
}

fn number(tok: &Token<'_>, line: usize, what: &str) -> Result<usize> {
    tok.text.parse().map_err(|_| {
        Error::parse(
            line,
            tok.column,
            format!("expected {what}, found `{}`", tok.text),
        )
    })
}

fn wrap(line: usize, column: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => Error::parse(line, column, other.to_string()),
    }
}

pub fn parse_matrix(input: &str) -> Result<PartitionMatrix> {
    let mut it = lines(input);
    let (hline, header) = it
        .next()
        .ok_or_else(|| Error::parse(1, 1, "missing part names"))?;
    let parts = PartSet::new(header.iter().map(|t| t.text)).map_err(|e| wrap(hline, 1, e))?;
    let n = parts.len();
    let mut entries = Vec::with_capacity(n * n);
    let mut last_line = hline;
    for r in 0..n {
        let (line, toks) = it
            .next()
            .ok_or_else(|| Error::parse(last_line + 1, 1, format!("missing row {}", r + 1)))?;
        last_line = line;
        let mut row = Vec::with_capacity(n);
        for t in &toks {
            for (k, c) in t.text.chars().enumerate() {
                let e = Entry::from_char(c).ok_or_else(|| {
                    Error::parse(line, t.column + k, format!("bad matrix entry `{c}`"))
                })?;
                if row.len() == n {
                    return Err(Error::parse(
                        line,
                        t.column + k,
                        format!("row has more than {n} entries"),
                    ));
                }
                row.push(e);
            }
        }
        if row.len() != n {
            return Err(Error::parse(
                line,
                1,
                format!("row has {} entries, expected {n}", row.len()),
            ));
        }
        entries.extend(row);
    }
    if let Some((line, toks)) = it.next() {
        return Err(Error::parse(
            line,
            toks[0].column,
            "unexpected content after matrix rows",
        ));
    }
    PartitionMatrix::new(parts, entries).map_err(|e| match e {
        Error::Asymmetric(i, j) => Error::parse(
            hline + 1 + i,
            j + 1,
            format!("matrix is not symmetric at ({i}, {j})"),
        ),
        other => other,
    })
}

pub fn write_matrix(m: &PartitionMatrix) -> String {
    let mut out = m.parts().names().join(" ");
    out.push('\n');
    for row in m.format_rows() {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

pub fn parse_graph(input: &str) -> Result<Graph> {
    let mut it = lines(input);
    let (hline, header) = it
        .next()
        .ok_or_else(|| Error::parse(1, 1, "missing `n m` header"))?;
    if header.len() != 2 {
        return Err(Error::parse(hline, 1, "header must be `n m`"));
    }
    let n = number(&header[0], hline, "vertex count")?;
    let m = number(&header[1], hline, "edge count")?;
    let mut g = Graph::empty(n);
    let mut last = hline;
    for _ in 0..m {
        let (line, toks) = it
            .next()
            .ok_or_else(|| Error::parse(last + 1, 1, format!("expected {m} edges")))?;
        last = line;
        if toks.len() != 2 {
            return Err(Error::parse(line, 1, "edge line must be `u v`"));
        }
        let u = number(&toks[0], line, "vertex")?;
        let v = number(&toks[1], line, "vertex")?;
        g.add_edge(u, v)
            .map_err(|e| wrap(line, toks[0].column, e))?;
    }
    if let Some((line, toks)) = it.next() {
        return Err(Error::parse(
            line,
            toks[0].column,
            "more edges than declared",
        ));
    }
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

fn parse_set(parts: &PartSet, toks: &[Token<'_>], line: usize) -> Result<PartSubset> {
    if toks.len() == 1 && toks[0].text == "*" {
        return Ok(parts.all());
    }
    let mut s = PartSubset::EMPTY;
    for t in toks {
        let i = parts
            .index_of(t.text)
            .ok_or_else(|| Error::parse(line, t.column, format!("unknown part `{}`", t.text)))?;
        s.insert(i);
    }
    Ok(s)
}

pub fn parse_lists(input: &str, n: usize, parts: &PartSet) -> Result<ListFunction> {
    let mut lists: Vec<Option<PartSubset>> = vec![None; n];
    for (line, toks) in lines(input) {
        let v = number(&toks[0], line, "vertex")?;
        if v >= n {
            return Err(Error::parse(
                line,
                toks[0].column,
                format!("vertex {v} out of range (n = {n})"),
            ));
        }
        if lists[v].is_some() {
            return Err(Error::parse(
                line,
                toks[0].column,
                format!("second list for vertex {v}"),
            ));
        }
        lists[v] = Some(parse_set(parts, &toks[1..], line)?);
    }
    Ok(ListFunction::new(
        lists
            .into_iter()
            .map(|l| l.unwrap_or(parts.all()))
            .collect(),
    ))
}

fn format_set(parts: &PartSet, s: PartSubset) -> String {
    if s == parts.all() && !s.is_empty() {
        "*".to_string()
    } else {
        parts.format_subset(s)
    }
}

pub fn write_lists(lists: &ListFunction, parts: &PartSet) -> String {
    let mut out = String::new();
    for (v, l) in lists.iter().enumerate() {
        let body = format_set(parts, l);
        if body.is_empty() {
            out.push_str(&format!("{v}\n"));
        } else {
            out.push_str(&format!("{v} {body}\n"));
        }
    }
    out
}

pub fn parse_family(input: &str, parts: &PartSet) -> Result<ListFamily> {
    let mut sets = Vec::new();
    for (line, toks) in lines(input) {
        sets.push(parse_set(parts, &toks, line)?);
    }
    Ok(ListFamily::new(parts.len(), sets))
}

pub fn write_family(fam: &ListFamily, parts: &PartSet) -> String {
    fam.maximal()
        .iter()
        .map(|&s| format_set(parts, s) + "\n")
        .collect()
}

pub fn parse_cardinality(input: &str, parts: &PartSet) -> Result<CardinalityConstraint> {
    let mut c = CardinalityConstraint::none(parts.len());
    for (line, toks) in lines(input) {
        if toks.len() != 2 {
            return Err(Error::parse(line, 1, "expected `part minimum`"));
        }
        let d = parts.index_of(toks[0].text).ok_or_else(|| {
            Error::parse(
                line,
                toks[0].column,
                format!("unknown part `{}`", toks[0].text),
            )
        })?;
        c.set(d, number(&toks[1], line, "minimum")?);
    }
    Ok(c)
}
