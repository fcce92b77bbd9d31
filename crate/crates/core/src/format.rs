//! Instance and certificate text formats.
//!
//! ```text
//! c optional comment
//! p nrc <n> <m> <r>
//! <r space-separated 1-indexed node ids>   (m lines)
//! ```
//!
//! Certificates are a single line `v <c(1)> ... <c(n)>`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::coloring::{Color, Coloring};
use crate::hypergraph::{Hypergraph, HypergraphError};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("malformed header, expected \"p nrc <n> <m> <r>\"")]
    MalformedHeader,
    #[error("missing header")]
    MissingHeader,
    #[error("second header")]
    DuplicateHeader,
    #[error("invalid node id {0:?}")]
    InvalidToken(String),
    #[error("node id out of range: {node} (n = {n})")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("edge has {found} nodes, expected {expected}")]
    EdgeSize { expected: usize, found: usize },
    #[error("repeated node {0} within an edge")]
    RepeatedNode(usize),
    #[error("header declares {declared} edges, found {found}")]
    EdgeCount { declared: usize, found: usize },
    #[error("{0}")]
    Hypergraph(HypergraphError),
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn is_comment(line: &str) -> bool {
    line == "c" || line.starts_with("c ")
}

/// Parses an instance file. Node ids are 1-indexed in the text and 0-indexed
/// in the returned hypergraph; duplicate edges are merged.
pub fn parse_instance(text: &str) -> Result<Hypergraph, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = raw.trim_end();
        if line.is_empty() || is_comment(line) {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err(lineno, ParseErrorKind::DuplicateHeader));
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let nums: Option<Vec<usize>> = match tokens.as_slice() {
                ["p", "nrc", rest @ ..] if rest.len() == 3 => {
                    rest.iter().map(|t| t.parse().ok()).collect()
                }
                _ => None,
            };
            let nums = nums.ok_or_else(|| err(lineno, ParseErrorKind::MalformedHeader))?;
            let (n, m, r) = (nums[0], nums[1], nums[2]);
            Hypergraph::empty(0, r).map_err(|e| err(lineno, ParseErrorKind::Hypergraph(e)))?;
            header = Some((n, m, r));
            continue;
        }
        let (n, _, r) = header.ok_or_else(|| err(lineno, ParseErrorKind::MissingHeader))?;
        let mut edge = Vec::with_capacity(r);
        for token in line.split_whitespace() {
            let id: usize = token
                .parse()
                .map_err(|_| err(lineno, ParseErrorKind::InvalidToken(token.to_string())))?;
            if id == 0 || id > n {
                return Err(err(lineno, ParseErrorKind::NodeOutOfRange { node: id, n }));
            }
            if edge.contains(&(id - 1)) {
                return Err(err(lineno, ParseErrorKind::RepeatedNode(id)));
            }
            edge.push(id - 1);
        }
        if edge.len() != r {
            return Err(err(
                lineno,
                ParseErrorKind::EdgeSize {
                    expected: r,
                    found: edge.len(),
                },
            ));
        }
        edges.push(edge);
    }

    let (n, m, r) = header.ok_or_else(|| err(last_line.max(1), ParseErrorKind::MissingHeader))?;
    if edges.len() != m {
        return Err(err(
            last_line.max(1),
            ParseErrorKind::EdgeCount {
                declared: m,
                found: edges.len(),
            },
        ));
    }
    Hypergraph::new(n, r, edges).map_err(|e| err(last_line, ParseErrorKind::Hypergraph(e)))
}

/// Serializes a hypergraph; `parse_instance` inverts this exactly.
pub fn write_instance(h: &Hypergraph) -> String {
    write_instance_with_comments(h, &[])
}

/// Like [`write_instance`], with `c ` comment lines ahead of the header.
pub fn write_instance_with_comments(h: &Hypergraph, comments: &[String]) -> String {
    let mut out = String::new();
    for comment in comments {
        let _ = writeln!(out, "c {comment}");
    }
    let _ = writeln!(out, "p nrc {} {} {}", h.n(), h.m(), h.r());
    for edge in h.edges() {
        for (i, v) in edge.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", v + 1);
        }
        out.push('\n');
    }
    out
}

/// `v <c(1)> ... <c(n)>`
pub fn format_certificate(c: &Coloring) -> String {
    if c.is_empty() {
        "v".to_string()
    } else {
        format!("v {c}")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("no \"v\" line found")]
    Missing,
    #[error("invalid color {0:?}")]
    InvalidColor(String),
}

fn parse_v_payload(rest: &str) -> Result<Coloring, CertificateError> {
    rest.split_whitespace()
        .map(|t| {
            t.parse::<Color>()
                .map_err(|_| CertificateError::InvalidColor(t.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(Coloring::new)
}

/// Reads the first `v ...` line of `text`, e.g. solver output.
pub fn parse_certificate(text: &str) -> Result<Coloring, CertificateError> {
    let line = text
        .lines()
        .map(str::trim_end)
        .find(|l| *l == "v" || l.starts_with("v "))
        .ok_or(CertificateError::Missing)?;
    parse_v_payload(&line[1..])
}

pub const PLANTED_PREFIX: &str = "planted: ";

/// The witness recorded by the planted generator as `c planted: v ...`.
pub fn planted_witness(text: &str) -> Option<Coloring> {
    text.lines().find_map(|l| {
        let rest = l
            .trim_end()
            .strip_prefix("c ")?
            .strip_prefix(PLANTED_PREFIX)?;
        let payload = rest.strip_prefix('v')?;
        parse_v_payload(payload).ok()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_instance() {
        let h = parse_instance("p nrc 3 1 3\n1 2 3\n").unwrap();
        assert_eq!((h.n(), h.m(), h.r()), (3, 1, 3));
        assert_eq!(h.edge(0), &[0, 1, 2]);
        assert_eq!(write_instance(&h), "p nrc 3 1 3\n1 2 3\n");
    }

    #[test]
    fn duplicate_edges_merge() {
        let h = parse_instance("p nrc 4 2 3\n1 2 3\n3 2 1\n").unwrap();
        assert_eq!(h.m(), 1);
        assert_eq!(write_instance(&h), "p nrc 4 1 3\n1 2 3\n");
    }

    #[test]
    fn out_of_range_names_line() {
        let e = parse_instance("p nrc 3 1 3\n1 2 5\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.to_string().contains("node id out of range"), "{e}");
        let e = parse_instance("p nrc 3 1 3\n0 1 2\n").unwrap_err();
        assert!(matches!(
            e.kind,
            ParseErrorKind::NodeOutOfRange { node: 0, .. }
        ));
    }

    #[test]
    fn other_parse_errors() {
        let kind = |t: &str| parse_instance(t).unwrap_err().kind;
        assert_eq!(
            kind("p cnf 3 1 3\n1 2 3\n"),
            ParseErrorKind::MalformedHeader
        );
        assert_eq!(kind("p nrc 3 1\n"), ParseErrorKind::MalformedHeader);
        assert_eq!(kind("1 2 3\n"), ParseErrorKind::MissingHeader);
        assert_eq!(kind(""), ParseErrorKind::MissingHeader);
        assert_eq!(
            kind("p nrc 4 1 3\n1 2\n"),
            ParseErrorKind::EdgeSize {
                expected: 3,
                found: 2
            }
        );
        assert_eq!(
            kind("p nrc 4 1 3\n1 2 2\n"),
            ParseErrorKind::RepeatedNode(2)
        );
        assert_eq!(
            kind("p nrc 4 2 3\n1 2 3\n"),
            ParseErrorKind::EdgeCount {
                declared: 2,
                found: 1
            }
        );
        assert_eq!(
            kind("p nrc 4 0 3\np nrc 4 0 3\n"),
            ParseErrorKind::DuplicateHeader
        );
        assert!(matches!(
            kind("p nrc 4 0 1\n"),
            ParseErrorKind::Hypergraph(_)
        ));
        assert!(matches!(
            kind("p nrc 4 1 3\n1 x 3\n"),
            ParseErrorKind::InvalidToken(_)
        ));
        let e = parse_instance("c hello\np nrc 4 1 3\n1 2 9\n").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn empty_edge_set() {
        let h = Hypergraph::empty(5, 4).unwrap();
        assert_eq!(write_instance(&h), "p nrc 5 0 4\n");
        assert_eq!(parse_instance("p nrc 5 0 4\n").unwrap(), h);
    }

    #[test]
    fn comments_are_ignored() {
        let text = "c planted: v 1 2 3 3\nc\np nrc 4 1 3\nc mid\n1 2 4\n";
        let h = parse_instance(text).unwrap();
        assert_eq!(h.m(), 1);
        assert_eq!(planted_witness(text), Some(Coloring::new(vec![1, 2, 3, 3])));
        assert_eq!(planted_witness("p nrc 4 0 3\n"), None);
    }

    #[test]
    fn certificate_lines() {
        let c = Coloring::new(vec![1, 2, 3]);
        assert_eq!(format_certificate(&c), "v 1 2 3");
        assert_eq!(parse_certificate("s COLORABLE\nv 1 2 3\n"), Ok(c));
        assert_eq!(
            parse_certificate("s UNCOLORABLE\n"),
            Err(CertificateError::Missing)
        );
        assert!(parse_certificate("v 1 z\n").is_err());
    }
}
