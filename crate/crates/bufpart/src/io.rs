//! Text formats: edge lists (`u v [cost]`) and weight files (`u weight`).
//! Blank lines and lines starting with `#` are ignored.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

fn number(tok: &str, line: usize, what: &str) -> Result<f64> {
    tok.parse::<f64>()
        .map_err(|_| Error::Parse { line, msg: format!("bad {what} {tok:?}") })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.trim();
        (!l.is_empty() && !l.starts_with('#')).then(|| (i + 1, l.split_whitespace().collect()))
    })
}

/// Parses an edge list and an optional weight file. Vertex indices follow
/// first appearance in the edge list; vertices only named in the weight
/// file are appended after.
pub fn parse_graph(edges: &str, weights: Option<&str>) -> Result<Graph> {
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut ids: Vec<String> = Vec::new();
    let mut intern = |s: &str, ids: &mut Vec<String>| -> usize {
        *index.entry(s.to_string()).or_insert_with(|| {
            ids.push(s.to_string());
            ids.len() - 1
        })
    };
    let mut list = Vec::new();
    for (line, tok) in content_lines(edges) {
        if !(2..=3).contains(&tok.len()) {
            return Err(Error::Parse { line, msg: "expected `u v [cost]`".into() });
        }
        let cost = match tok.get(2) {
            Some(c) => number(c, line, "cost")?,
            None => 1.0,
        };
        let u = intern(tok[0], &mut ids);
        let v = intern(tok[1], &mut ids);
        list.push((u, v, cost));
    }
    let w = match weights {
        None => None,
        Some(text) => {
            let mut given = Vec::new();
            for (line, tok) in content_lines(text) {
                if tok.len() != 2 {
                    return Err(Error::Parse { line, msg: "expected `u weight`".into() });
                }
                let w = number(tok[1], line, "weight")?;
                given.push((intern(tok[0], &mut ids), w));
            }
            let mut w = vec![0.0; ids.len()];
            for &(u, v, c) in &list {
                w[u] += c;
                w[v] += c;
            }
            for (u, x) in given {
                w[u] = x;
            }
            Some(w)
        }
    };
    Graph::with_ids(ids, &list, w)
}

pub fn load_graph(edges: &Path, weights: Option<&Path>) -> Result<Graph> {
    let e = read(edges)?;
    let w = weights.map(read).transpose()?;
    parse_graph(&e, w.as_deref())
}

/// Writes a graph back as an edge list with explicit costs.
pub fn format_edges(g: &Graph) -> String {
    let mut s = String::new();
    for &(u, v, c) in g.edges() {
        s.push_str(&format!("{} {} {:?}\n", g.id(u), g.id(v), c));
    }
    s
}

pub fn format_weights(g: &Graph) -> String {
    (0..g.n()).map(|u| format!("{} {:?}\n", g.id(u), g.weight(u))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_cost_and_comments() {
        let g = parse_graph("# triangle\na b\nb c 2.5\n\nc a\n", None).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.ids(), &["a", "b", "c"]);
        assert_eq!(g.weights(), &[2.0, 3.5, 3.5]);
    }

    #[test]
    fn weight_file_overrides_and_adds_isolated() {
        let g = parse_graph("a b\n", Some("a 3\nz 1.5\n")).unwrap();
        assert_eq!(g.weights(), &[3.0, 1.0, 1.5]);
        assert_eq!(g.id(2), "z");
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_graph("a b\na b c d\n", None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_graph("a b\nb a\n", None).is_err());
        assert!(parse_graph("a b -1\n", None).is_err());
    }

    #[test]
    fn round_trip() {
        let g = parse_graph("x y 0.1\ny z 3\n", Some("x 7\n")).unwrap();
        let h = parse_graph(&format_edges(&g), Some(&format_weights(&g))).unwrap();
        assert_eq!(g.weights(), h.weights());
        assert_eq!(g.edges(), h.edges());
    }
}
