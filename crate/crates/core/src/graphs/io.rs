//! Plain-text edge lists: a header line `n m`, then `m` lines `u v`.

use std::io::{BufRead, Write};

use super::graph::Graph;
use crate::error::GraphError;

pub fn write_graph<W: Write>(g: &Graph, mut out: W) -> Result<(), GraphError> {
    writeln!(out, "{} {}", g.n(), g.m())?;
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize), GraphError> {
    let mut it = line.split_whitespace();
    let parse = |tok: Option<&str>| -> Result<usize, GraphError> {
        let tok = tok.ok_or_else(|| GraphError::Parse { line: lineno, msg: "expected two integers".into() })?;
        tok.parse().map_err(|_| GraphError::Parse {
            line: lineno,
            msg: format!("not a nonnegative integer: {tok:?}"),
        })
    };
    let a = parse(it.next())?;
    let b = parse(it.next())?;
    if it.next().is_some() {
        return Err(GraphError::Parse { line: lineno, msg: "trailing tokens".into() });
    }
    Ok((a, b))
}

pub fn read_graph<R: BufRead>(input: R) -> Result<Graph, GraphError> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
    let (lineno, header) = lines
        .next()
        .ok_or(GraphError::Parse { line: 1, msg: "missing header".into() })?;
    let (n, m) = parse_pair(&header?, lineno)?;
    let mut edges = Vec::with_capacity(m);
    for (lineno, line) in lines {
        let (u, v) = parse_pair(&line?, lineno)?;
        if u >= n || v >= n {
            return Err(GraphError::Parse {
                line: lineno,
                msg: format!("endpoint out of range for n = {n}"),
            });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(GraphError::Parse {
            line: 1,
            msg: format!("header says {m} edges, found {}", edges.len()),
        });
    }
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_with_loop() {
        let g = Graph::new(3, vec![(0, 1), (2, 2), (1, 0)]).unwrap();
        let mut buf = Vec::new();
        write_graph(&g, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "3 3\n0 1\n2 2\n1 0\n");
        assert_eq!(read_graph(buf.as_slice()).unwrap(), g);
    }

    #[test]
    fn parse_errors_carry_line() {
        let err = read_graph("2 1\n0 x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }));
        assert!(read_graph("2 2\n0 1\n".as_bytes()).is_err());
        assert!(read_graph("2 1\n0 5\n".as_bytes()).is_err());
    }
}
