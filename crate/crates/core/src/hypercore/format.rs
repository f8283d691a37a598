//! The `.hg` text format.
//!
//! ```text
//! # optional comment lines start with '#'
//! r n m
//! v1 v2 ... vr      (m lines, ascending ids)
//! ```
//!
//! Every line, including the last, ends in `\n`. Writing always emits the
//! header followed by the edges in canonical order, so write/parse/write is
//! byte-identical.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

use super::{Hypergraph, Vertex};

impl Hypergraph {
    pub fn to_hg_string(&self) -> String {
        let mut out = String::with_capacity(16 + self.len() * self.uniformity() * 4);
        writeln!(out, "{} {} {}", self.uniformity(), self.vertex_count(), self.len()).unwrap();
        for e in self.edges() {
            let mut first = true;
            for v in e {
                if !first {
                    out.push(' ');
                }
                first = false;
                write!(out, "{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses `.hg` text. Line numbers in errors are 1-based and counted
/// relative to `first_line`.
pub(crate) fn parse_hg_at(text: &str, first_line: usize) -> Result<Hypergraph> {
    if !text.is_empty() && !text.ends_with('\n') {
        let last = first_line + text.lines().count().saturating_sub(1);
        return Err(parse_err(last, "missing trailing newline"));
    }
    let mut rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + first_line, l))
        .filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty());

    let (hline, header) = rows
        .next()
        .ok_or_else(|| parse_err(first_line, "missing header line \"r n m\""))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|w| w.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| parse_err(hline, format!("bad header: {e}")))?;
    let [r, n, m] = nums[..] else {
        return Err(parse_err(hline, "header must be \"r n m\""));
    };
    if r == 0 {
        return Err(parse_err(hline, "uniformity must be positive"));
    }

    let mut edges: Vec<Vec<Vertex>> = Vec::with_capacity(m);
    for (lineno, line) in rows {
        if edges.len() == m {
            return Err(parse_err(lineno, format!("more than {m} edge lines")));
        }
        let e: Vec<Vertex> = line
            .split_whitespace()
            .map(|w| w.parse::<Vertex>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|err| parse_err(lineno, format!("bad vertex id: {err}")))?;
        if e.len() != r {
            return Err(parse_err(lineno, format!("expected {r} vertices, found {}", e.len())));
        }
        if e.windows(2).any(|w| w[0] >= w[1]) {
            return Err(parse_err(lineno, "vertex ids must be strictly ascending"));
        }
        if e[r - 1] as usize >= n {
            return Err(parse_err(lineno, format!("vertex {} out of range for n = {n}", e[r - 1])));
        }
        edges.push(e);
    }
    if edges.len() != m {
        return Err(parse_err(
            first_line + text.lines().count().saturating_sub(1),
            format!("header announces {m} edges, found {}", edges.len()),
        ));
    }
    Hypergraph::new(r, n, edges).map_err(|e| parse_err(hline, e.to_string()))
}

pub fn parse_hg(text: &str) -> Result<Hypergraph> {
    parse_hg_at(text, 1)
}

pub fn read_hg(path: impl AsRef<Path>) -> Result<Hypergraph> {
    parse_hg(&std::fs::read_to_string(path)?)
}

/// Writes via a temporary file in the same directory, then renames.
pub fn write_hg(path: impl AsRef<Path>, g: &Hypergraph) -> Result<()> {
    crate::io::write_atomic(path.as_ref(), g.to_hg_string().as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercore::fixtures::pasch;
    use proptest::prelude::*;

    #[test]
    fn round_trip_is_byte_exact() {
        let text = pasch().to_hg_string();
        assert_eq!(text, "3 6 4\n0 1 2\n0 3 4\n1 3 5\n2 4 5\n");
        assert_eq!(parse_hg(&text).unwrap().to_hg_string(), text);
    }

    #[test]
    fn comments_and_empty_graph() {
        let g = parse_hg("# pasch\n3 6 1\n# edge\n0 1 2\n").unwrap();
        assert_eq!(g.len(), 1);
        let e = parse_hg("3 4 0\n").unwrap();
        assert!(e.is_empty());
        assert_eq!(e.to_hg_string(), "3 4 0\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("3 6 1\n0 1 2", 2),
            ("3 6 1\n0 2 1\n", 2),
            ("3 6 2\n0 1 2\n", 2),
            ("3 6 1\n0 1 9\n", 2),
            ("3 6\n", 1),
            ("# c\n3 6 1\n0 1\n", 3),
            ("3 6 1\n0 1 2\n3 4 5\n", 3),
            ("3 6 2\n0 1 2\n0 1 2\n", 1),
        ];
        for (text, line) in cases {
            match parse_hg(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    proptest! {
        #[test]
        fn write_parse_write(edges in proptest::collection::btree_set(
            proptest::collection::btree_set(0u32..12, 3), 0..20)) {
            let g = Hypergraph::new(3, 12, edges.iter().map(|e| e.iter().copied().collect::<Vec<_>>())).unwrap();
            let text = g.to_hg_string();
            let back = parse_hg(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(back.to_hg_string(), text);
        }
    }
}
