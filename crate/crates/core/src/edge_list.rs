//! Plain-text edge lists.
//!
//! ```text
//! # optional comment lines
//! n m
//! i j      (m lines, 1-based, edge from i to j)
//! ```
//!
//! Fields are separated by single spaces and lines end in `\n`. Lines whose
//! first character is `#` are skipped on read, as are blank lines. The writer
//! emits no comments and lists edges in lexicographic order.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Digraph;

pub fn parse(text: &str) -> Result<Digraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty());

    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing `n m` header".into(),
    })?;
    let [n, m] = parse_pair(line, header)?;

    let mut graph = Digraph::empty(n).map_err(|e| Error::Parse {
        line,
        message: e.to_string(),
    })?;
    let mut seen = 0usize;
    for (line, body) in lines {
        let [i, j] = parse_pair(line, body)?;
        graph.insert_edge(i, j).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        seen += 1;
    }
    if seen != m {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: format!("header announces {m} edges but {seen} were listed"),
        });
    }
    Ok(graph)
}

fn parse_pair(line: usize, body: &str) -> Result<[usize; 2]> {
    let fields: Vec<&str> = body.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::Parse {
            line,
            message: format!("expected two integers, found {:?}", body),
        });
    }
    let mut out = [0usize; 2];
    for (slot, f) in out.iter_mut().zip(&fields) {
        *slot = f.parse().map_err(|_| Error::Parse {
            line,
            message: format!("`{f}` is not a nonnegative integer"),
        })?;
    }
    Ok(out)
}

pub fn render(graph: &Digraph) -> String {
    let edges = graph.edges();
    let mut out = format!("{} {}\n", graph.n(), edges.len());
    for (i, j) in edges {
        out.push_str(&format!("{i} {j}\n"));
    }
    out
}

pub fn read(path: impl AsRef<Path>) -> Result<Digraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text)
}

pub fn write(path: impl AsRef<Path>, graph: &Digraph) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, render(graph)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_comments() {
        let g = parse("# D3\n3 5\n2 1\n3 1\n1 2\n# mid\n3 2\n1 3\n").unwrap();
        assert_eq!(g.edges(), vec![(1, 2), (1, 3), (2, 1), (3, 1), (3, 2)]);
    }

    #[test]
    fn render_is_exact() {
        let g = Digraph::from_edges(3, &[(3, 1), (1, 2)]).unwrap();
        assert_eq!(render(&g), "3 2\n1 2\n3 1\n");
        assert_eq!(parse(&render(&g)).unwrap(), g);
        assert_eq!(render(&Digraph::empty(0).unwrap()), "0 0\n");
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse("2 1\n1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse("# c\n2 1\n1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse("3 2\n1 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
        let err = parse("2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        assert!(parse("").is_err());
        assert!(parse("3 1\n1 4\n").is_err());
    }
}
