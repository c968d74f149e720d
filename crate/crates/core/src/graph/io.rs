//! Plain-text graph format: a `n m` header followed by `m` lines of
//! `tail head weight`. Lines starting with `#` are comments.

use std::io::{BufRead, Write};

use super::{Edge, Multigraph};
use crate::error::{Error, Result};

pub fn read_graph<R: BufRead>(reader: R) -> Result<Multigraph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let parse_err = |msg: String| Error::Parse { line: lineno, msg };
        match header {
            None => {
                if fields.len() != 2 {
                    return Err(parse_err(format!("expected `n m`, got {trimmed:?}")));
                }
                let n = fields[0]
                    .parse()
                    .map_err(|e| parse_err(format!("bad n: {e}")))?;
                let m = fields[1]
                    .parse()
                    .map_err(|e| parse_err(format!("bad m: {e}")))?;
                header = Some((n, m));
                edges.reserve(m);
            }
            Some((_, m)) => {
                if fields.len() != 3 {
                    return Err(parse_err(format!(
                        "expected `tail head weight`, got {trimmed:?}"
                    )));
                }
                if edges.len() == m {
                    return Err(parse_err(format!("more than the declared {m} edges")));
                }
                let tail = fields[0]
                    .parse()
                    .map_err(|e| parse_err(format!("bad tail: {e}")))?;
                let head = fields[1]
                    .parse()
                    .map_err(|e| parse_err(format!("bad head: {e}")))?;
                let weight: f64 = fields[2]
                    .parse()
                    .map_err(|e| parse_err(format!("bad weight: {e}")))?;
                edges.push(Edge::new(tail, head, weight));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {m} edges but {} were read", edges.len()),
        });
    }
    Multigraph::new(n, edges)
}

pub fn write_graph<W: Write>(g: &Multigraph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", g.n(), g.m())?;
    for e in g.edges() {
        writeln!(out, "{} {} {}", e.tail, e.head, e.weight)?;
    }
    Ok(())
}

impl std::str::FromStr for Multigraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        read_graph(s.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::petersen;

    #[test]
    fn parses_comments_and_weights() {
        let text = "# triangle\n3 3\n0 1 1\n# mid comment\n1 2 2.5\n2 0 1\n";
        let g: Multigraph = text.parse().unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 3);
        assert_eq!(g.edge(1).weight, 2.5);
    }

    #[test]
    fn round_trip() {
        let g = petersen();
        let mut buf = Vec::new();
        write_graph(&g, &mut buf).unwrap();
        let back = read_graph(buf.as_slice()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            "2 2\n0 1 1\n".parse::<Multigraph>(),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            "2 1\n0 1\n".parse::<Multigraph>(),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            "2 1\n0 1 0.5\n".parse::<Multigraph>(),
            Err(Error::InvalidGraph(_))
        ));
        assert!("".parse::<Multigraph>().is_err());
    }
}
