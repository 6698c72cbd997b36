//! Plain-text edge lists.
//!
//! ```text
//! # comment lines and blank lines are ignored
//! n m [labeled]
//! v X|Y          (n lines, only when the header says `labeled`; v = 0..n-1 in order)
//! u v            (m lines)
//! ```
//!
//! Vertices are 0-indexed. Errors carry the 1-based line number.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, Side};

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header \"n m\"".into(),
    })?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let labeled = match toks.as_slice() {
        [_, _] => false,
        [_, _, "labeled"] => true,
        _ => {
            return Err(Error::Parse {
                line: hline,
                msg: format!("expected \"n m [labeled]\", got {header:?}"),
            })
        }
    };
    let n = parse_count(toks[0], hline)?;
    let m = parse_count(toks[1], hline)?;

    let side = if labeled {
        let mut side = Vec::with_capacity(n);
        for expect in 0..n {
            let (ln, l) = lines.next().ok_or(Error::Parse {
                line: hline,
                msg: format!("expected {n} side lines, found {expect}"),
            })?;
            let toks: Vec<&str> = l.split_whitespace().collect();
            let [v, s] = toks.as_slice() else {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("expected \"v X|Y\", got {l:?}"),
                });
            };
            if parse_count(v, ln)? != expect {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("side lines must list vertices in order; expected {expect}"),
                });
            }
            side.push(match *s {
                "X" => Side::X,
                "Y" => Side::Y,
                other => {
                    return Err(Error::Parse {
                        line: ln,
                        msg: format!("unknown side {other:?}"),
                    })
                }
            });
        }
        Some(side)
    } else {
        None
    };

    let mut edges = Vec::with_capacity(m);
    let mut edge_lines = Vec::with_capacity(m);
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let [u, v] = toks.as_slice() else {
            return Err(Error::Parse {
                line: ln,
                msg: format!("expected \"u v\", got {l:?}"),
            });
        };
        let (u, v) = (parse_count(u, ln)?, parse_count(v, ln)?);
        for w in [u, v] {
            if w >= n {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("vertex {w} out of range (n = {n})"),
                });
            }
        }
        edges.push((u, v));
        edge_lines.push(ln);
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: hline,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Graph::new(n, &edges, side).map_err(|e| {
        let offending = match &e {
            Error::Loop(v) => edges.iter().position(|&(a, b)| a == *v && b == *v),
            Error::DuplicateEdge(a, b) | Error::SideViolation(a, b) => edges
                .iter()
                .rposition(|&(x, y)| (x, y) == (*a, *b) || (y, x) == (*a, *b)),
            _ => None,
        };
        match offending {
            Some(i) => Error::Parse {
                line: edge_lines[i],
                msg: e.to_string(),
            },
            None => e,
        }
    })
}

fn parse_count(tok: &str, line: usize) -> Result<usize> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("not a non-negative integer: {tok:?}"),
    })
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    match g.sides() {
        Some(side) => {
            writeln!(out, "{} {} labeled", g.n(), g.m()).unwrap();
            for (v, s) in side.iter().enumerate() {
                writeln!(out, "{v} {s}").unwrap();
            }
        }
        None => writeln!(out, "{} {}", g.n(), g.m()).unwrap(),
    }
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
