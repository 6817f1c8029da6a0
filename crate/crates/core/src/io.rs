//! Text formats: edge lists ("u v" per line, '#' comments, optional
//! "n <count>" header), pair sets (same shape), and node sets (one id per
//! line).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path as FsPath;

use crate::error::{Error, Result};
use crate::graph::{Graph, Node, PairSet};

fn parse_node(tok: &str, line: usize) -> Result<Node> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a node id, got {tok:?}"),
    })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            None
        } else {
            Some((i + 1, line))
        }
    })
}

/// Declared node count, if a header was present, plus the parsed rows.
type ParsedRows = (Option<usize>, Vec<(Node, Node)>);

/// Parses "u v" rows with an optional leading "n <count>" header. Without a
/// header, n = 1 + max id.
fn parse_rows(text: &str) -> Result<ParsedRows> {
    let mut declared_n = None;
    let mut rows = Vec::new();
    let mut first = true;
    for (line, content) in content_lines(text) {
        let toks: Vec<&str> = content.split_whitespace().collect();
        if first && toks.len() == 2 && toks[0] == "n" {
            declared_n = Some(parse_node(toks[1], line)? as usize);
            first = false;
            continue;
        }
        first = false;
        if toks.len() != 2 {
            return Err(Error::Parse {
                line,
                msg: format!("expected two fields, got {}", toks.len()),
            });
        }
        rows.push((parse_node(toks[0], line)?, parse_node(toks[1], line)?));
    }
    Ok((declared_n, rows))
}

fn implied_n(declared: Option<usize>, rows: &[(Node, Node)]) -> usize {
    declared.unwrap_or_else(|| {
        rows.iter()
            .map(|&(u, v)| u.max(v) as usize + 1)
            .max()
            .unwrap_or(0)
    })
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let (declared, rows) = parse_rows(text)?;
    Graph::new(implied_n(declared, &rows), &rows)
}

pub fn parse_pairs(text: &str, n: usize) -> Result<PairSet> {
    let (declared, rows) = parse_rows(text)?;
    if let Some(d) = declared {
        if d != n {
            return Err(Error::invalid(format!(
                "pair file declares n = {d} but the graph has n = {n}"
            )));
        }
    }
    PairSet::new(&rows, n)
}

/// One node id per line; comments and blanks as in edge lists.
pub fn parse_node_set(text: &str, n: usize) -> Result<Vec<Node>> {
    let mut out = Vec::new();
    for (line, content) in content_lines(text) {
        let v = parse_node(content, line)?;
        if (v as usize) >= n {
            return Err(Error::Parse {
                line,
                msg: format!("node {v} out of range for n = {n}"),
            });
        }
        out.push(v);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn read_graph(path: &FsPath) -> Result<Graph> {
    parse_graph(&read_to_string(path)?)
}

pub fn read_pairs(path: &FsPath, n: usize) -> Result<PairSet> {
    parse_pairs(&read_to_string(path)?, n)
}

pub fn read_node_set(path: &FsPath, n: usize) -> Result<Vec<Node>> {
    parse_node_set(&read_to_string(path)?, n)
}

fn read_to_string(path: &FsPath) -> Result<String> {
    let mut buf = String::new();
    BufReader::new(File::open(path)?).read_to_string(&mut buf)?;
    Ok(buf)
}

pub fn format_edge_list(n: usize, edges: impl IntoIterator<Item = (Node, Node)>) -> String {
    let mut out = format!("n {n}\n");
    for (u, v) in edges {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn write_graph(path: &FsPath, g: &Graph) -> Result<()> {
    write_text(path, &format_edge_list(g.n(), g.edges().iter().copied()))
}

pub fn write_edge_set(
    path: &FsPath,
    n: usize,
    edges: impl IntoIterator<Item = (Node, Node)>,
) -> Result<()> {
    write_text(path, &format_edge_list(n, edges))
}

pub fn write_pairs(path: &FsPath, pairs: &PairSet) -> Result<()> {
    let mut out = String::new();
    for &(u, v) in pairs.pairs() {
        out.push_str(&format!("{u} {v}\n"));
    }
    write_text(path, &out)
}

pub fn write_text(path: &FsPath, text: &str) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

/// Reads whole lines for callers that stream stdin.
pub fn read_all(r: impl Read) -> Result<String> {
    let mut buf = String::new();
    BufReader::new(r).read_to_string(&mut buf)?;
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        let text = format_edge_list(g.n(), g.edges().iter().copied());
        let back = parse_graph(&text).unwrap();
        assert_eq!(back.n(), 5);
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn comments_and_implied_n() {
        let text = "# demo\n0 1\n1 2 # trailing\n\n2 3\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 3);
    }

    #[test]
    fn header_sets_isolated_nodes() {
        let g = parse_graph("n 10\n0 1\n").unwrap();
        assert_eq!(g.n(), 10);
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn malformed_lines_report_position() {
        match parse_graph("0 1\nbogus\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_graph("0 1 2\n").is_err());
    }

    #[test]
    fn pair_file_checks_n() {
        assert!(parse_pairs("n 4\n0 1\n", 4).is_ok());
        assert!(parse_pairs("n 5\n0 1\n", 4).is_err());
        assert!(parse_pairs("0 9\n", 4).is_err());
    }

    #[test]
    fn node_set_sorted_dedup() {
        let s = parse_node_set("3\n1\n# c\n3\n", 5).unwrap();
        assert_eq!(s, vec![1, 3]);
        assert!(parse_node_set("7\n", 5).is_err());
    }
}
