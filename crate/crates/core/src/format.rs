//! Line-oriented text formats. Vertices are 1-based on disk. Blank lines
//! and lines starting with `#` are ignored; every parse error carries the
//! line number it was found on.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::digraph::{Digraph, OrientedGraph, Tournament};
use crate::error::{Error, Result};
use crate::forcing::KPartiteTournament;
use crate::hardness::{Graph, ReductionOutput};
use crate::lowerbound::BlowupTournament;
use crate::orderedhom::LabeledGraph;
use crate::regularity::BinaryMatrix;

/// Largest vertex count accepted from text.
pub const MAX_ORDER: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphFormat {
    #[default]
    Matrix,
    Edges,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "matrix" => Ok(GraphFormat::Matrix),
            "edges" => Ok(GraphFormat::Edges),
            other => Err(Error::arg(format!("unknown format `{other}`, expected matrix or edges"))),
        }
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            let line = raw.trim();
            self.last = i + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            return Some((i + 1, line));
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        self.next_line()
            .ok_or_else(|| Error::parse(self.last + 1, format!("unexpected end of input, expected {what}")))
    }
}

fn number(line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::parse(line, format!("expected {what}, found `{tok}`")))
}

fn vertex(line: usize, tok: &str, n: usize) -> Result<usize> {
    let v = number(line, tok, "a vertex")?;
    if v == 0 || v > n {
        return Err(Error::parse(line, format!("vertex {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

fn order(lines: &mut Lines) -> Result<usize> {
    let (line, text) = lines.expect("the vertex count")?;
    let n = number(line, text, "the vertex count")?;
    if n > MAX_ORDER {
        return Err(Error::parse(line, format!("{n} vertices exceed the limit of {MAX_ORDER}")));
    }
    Ok(n)
}

fn pair(line: usize, text: &str) -> Result<(&str, &str)> {
    let mut toks = text.split_whitespace();
    match (toks.next(), toks.next(), toks.next()) {
        (Some(a), Some(b), None) => Ok((a, b)),
        _ => Err(Error::parse(line, format!("expected two fields, found `{text}`"))),
    }
}

fn bit_row(line: usize, text: &str, n: usize) -> Result<Vec<u8>> {
    let row: Vec<u8> = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::parse(line, format!("unexpected character `{other}` in matrix row"))),
        })
        .collect::<Result<_>>()?;
    if row.len() != n {
        return Err(Error::parse(line, format!("row has {} entries, expected {n}", row.len())));
    }
    Ok(row)
}

/// Oriented graph in either format. Each edge line records its source line
/// so that conflicts point at the offending line.
pub fn parse_oriented(text: &str) -> Result<OrientedGraph> {
    parse_oriented_lines(text).map(|(g, _)| g)
}

fn parse_oriented_lines(text: &str) -> Result<(OrientedGraph, usize)> {
    let mut lines = Lines::new(text);
    let n = order(&mut lines)?;
    let mut g = OrientedGraph::new(n);
    let (line, mode) = lines.expect("`matrix` or `edges`")?;
    match mode {
        "matrix" => {
            for i in 0..n {
                let (line, text) = lines.expect("a matrix row")?;
                let row = bit_row(line, text, n)?;
                for (j, &bit) in row.iter().enumerate() {
                    if bit == 1 {
                        g.add_edge(i, j).map_err(|e| Error::parse(line, reason(e)))?;
                    }
                }
            }
            if let Some((line, text)) = lines.next_line() {
                return Err(Error::parse(line, format!("trailing content `{text}` after the matrix")));
            }
        }
        "edges" => {
            while let Some((line, text)) = lines.next_line() {
                let (a, b) = pair(line, text)?;
                let (u, v) = (vertex(line, a, n)?, vertex(line, b, n)?);
                g.add_edge(u, v).map_err(|e| Error::parse(line, reason(e)))?;
            }
        }
        other => return Err(Error::parse(line, format!("expected `matrix` or `edges`, found `{other}`"))),
    }
    Ok((g, lines.last))
}

fn reason(e: Error) -> String {
    match e {
        Error::InvalidArgument(m) => m,
        other => other.to_string(),
    }
}

/// Like [`parse_oriented`], and every pair must carry exactly one edge.
pub fn parse_tournament(text: &str) -> Result<Tournament> {
    let (g, last) = parse_oriented_lines(text)?;
    Tournament::from_oriented(g).map_err(|e| Error::parse(last, reason(e)))
}

pub fn write_oriented(g: &OrientedGraph, format: GraphFormat) -> String {
    let n = g.order();
    let mut s = format!("{n}\n");
    match format {
        GraphFormat::Matrix => {
            s.push_str("matrix\n");
            for i in 0..n {
                for j in 0..n {
                    s.push(if g.has_edge(i, j) { '1' } else { '0' });
                }
                s.push('\n');
            }
        }
        GraphFormat::Edges => {
            s.push_str("edges\n");
            for (u, v) in g.edges() {
                let _ = writeln!(s, "{} {}", u + 1, v + 1);
            }
        }
    }
    s
}

pub fn write_tournament(t: &Tournament, format: GraphFormat) -> String {
    write_oriented(t.as_oriented(), format)
}

/// `vertices: <labels>` then one `a b` line per edge, `a < b`.
pub fn parse_labeled(text: &str) -> Result<LabeledGraph> {
    let mut lines = Lines::new(text);
    let (line, head) = lines.expect("`vertices:`")?;
    let rest = head
        .strip_prefix("vertices:")
        .ok_or_else(|| Error::parse(line, format!("expected `vertices:`, found `{head}`")))?;
    let labels = rest
        .split_whitespace()
        .map(|t| number(line, t, "a label"))
        .collect::<Result<Vec<_>>>()?;
    if labels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::parse(line, "labels must be strictly increasing"));
    }
    let mut g = LabeledGraph::edgeless(labels).map_err(|e| Error::parse(line, reason(e)))?;
    while let Some((line, text)) = lines.next_line() {
        let (a, b) = pair(line, text)?;
        let (a, b) = (number(line, a, "a label")?, number(line, b, "a label")?);
        if a >= b {
            return Err(Error::parse(line, format!("edge {a} {b} must list the smaller label first")));
        }
        g.add_edge(a, b).map_err(|e| Error::parse(line, reason(e)))?;
    }
    Ok(g)
}

pub fn write_labeled(g: &LabeledGraph) -> String {
    let labels: Vec<String> = g.labels().iter().map(usize::to_string).collect();
    let mut s = format!("vertices: {}\n", labels.join(" "));
    for (a, b) in g.edges() {
        let _ = writeln!(s, "{a} {b}");
    }
    s
}

fn part_vertex(line: usize, tok: &str, m: usize, k: usize) -> Result<usize> {
    let (i, a) = tok
        .split_once('.')
        .ok_or_else(|| Error::parse(line, format!("expected `part.vertex`, found `{tok}`")))?;
    let (i, a) = (number(line, i, "a part")?, number(line, a, "a vertex")?);
    if i == 0 || i > k || a == 0 || a > m {
        return Err(Error::parse(line, format!("vertex {tok} out of range for {k} parts of size {m}")));
    }
    Ok((i - 1) * m + a - 1)
}

/// `parts: m k` then `i.a j.b` lines for every cross pair.
pub fn parse_kpartite(text: &str) -> Result<KPartiteTournament> {
    let mut lines = Lines::new(text);
    let (line, head) = lines.expect("`parts: m k`")?;
    let rest = head
        .strip_prefix("parts:")
        .ok_or_else(|| Error::parse(line, format!("expected `parts: m k`, found `{head}`")))?;
    let (m, k) = pair(line, rest.trim())?;
    let (m, k) = (number(line, m, "the part size")?, number(line, k, "the number of parts")?);
    if m == 0 || k == 0 || m.saturating_mul(k) > MAX_ORDER {
        return Err(Error::parse(line, format!("unsupported shape: {k} parts of size {m}")));
    }
    let mut g = OrientedGraph::new(m * k);
    while let Some((line, text)) = lines.next_line() {
        let (a, b) = pair(line, text)?;
        let (x, y) = (part_vertex(line, a, m, k)?, part_vertex(line, b, m, k)?);
        if x / m == y / m {
            return Err(Error::parse(line, format!("edge {a} {b} lies inside one part")));
        }
        g.add_edge(x, y).map_err(|e| Error::parse(line, reason(e)))?;
    }
    KPartiteTournament::from_oriented(m, k, g).map_err(|e| Error::parse(lines.last, reason(e)))
}

pub fn write_kpartite(f: &KPartiteTournament) -> String {
    let (m, k) = (f.part_size(), f.parts());
    let mut s = format!("parts: {m} {k}\n");
    for (x, y) in f.as_oriented().edges() {
        let _ = writeln!(s, "{}.{} {}.{}", x / m + 1, x % m + 1, y / m + 1, y % m + 1);
    }
    s
}

/// `n` then `n` rows of 0/1 characters.
pub fn parse_matrix(text: &str) -> Result<BinaryMatrix> {
    let mut lines = Lines::new(text);
    let n = order(&mut lines)?;
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let (line, text) = lines.expect("a matrix row")?;
        rows.push(bit_row(line, text, n)?);
    }
    if let Some((line, text)) = lines.next_line() {
        return Err(Error::parse(line, format!("trailing content `{text}` after the matrix")));
    }
    if n == 0 {
        return Ok(BinaryMatrix::zeros(0));
    }
    BinaryMatrix::from_rows(&rows).map_err(|e| Error::parse(lines.last, reason(e)))
}

pub fn write_matrix(a: &BinaryMatrix) -> String {
    let mut s = format!("{}\n", a.dim());
    for row in a.rows() {
        for bit in row {
            s.push(if bit == 1 { '1' } else { '0' });
        }
        s.push('\n');
    }
    s
}

/// Undirected graph: `n` then `i j` lines.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = Lines::new(text);
    let (line, head) = lines.expect("the vertex count")?;
    let n = number(line, head, "the vertex count")?;
    let mut g = Graph::new(n).map_err(|e| Error::parse(line, reason(e)))?;
    while let Some((line, text)) = lines.next_line() {
        let (a, b) = pair(line, text)?;
        let (u, v) = (vertex(line, a, n)?, vertex(line, b, n)?);
        g.add_edge(u, v).map_err(|e| Error::parse(line, reason(e)))?;
    }
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("{}\n", g.order());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{} {}", u + 1, v + 1);
    }
    s
}

/// One `vertex role` line per vertex of `T(G)`.
pub fn write_roles(out: &ReductionOutput) -> String {
    let mut s = String::new();
    for (v, role) in out.roles.iter().enumerate() {
        let _ = writeln!(s, "{} {role}", v + 1);
    }
    s
}

/// Block map, clique list and `F` as `key = value` lines.
pub fn write_provenance(b: &BlowupTournament) -> String {
    let mut s = String::new();
    let rs = &b.rs;
    let _ = writeln!(s, "vertices = {}", b.order());
    let _ = writeln!(s, "requested = {}", b.requested);
    let _ = writeln!(s, "truncated = {}", b.truncated);
    let _ = writeln!(s, "block_size = {}", b.block);
    let _ = writeln!(s, "parts = {}", rs.k());
    let _ = writeln!(s, "part_length = {}", rs.part_len());
    let _ = writeln!(s, "n_max = {}", rs.n_max());
    let diffs: Vec<String> = rs.differences().iter().map(usize::to_string).collect();
    let _ = writeln!(s, "differences = {}", diffs.join(" "));
    let cycle: Vec<String> = rs.cycle().iter().map(|i| (i + 1).to_string()).collect();
    let _ = writeln!(s, "cycle = {}", cycle.join(" "));
    let core = &b.pattern.core.core;
    let labels: Vec<String> = core.labels().iter().map(usize::to_string).collect();
    let _ = writeln!(s, "core_labels = {}", labels.join(" "));
    let colors: Vec<String> = b.pattern.coloring.colors().iter().map(|c| (c + 1).to_string()).collect();
    let _ = writeln!(s, "pattern_coloring = {}", colors.join(" "));
    for x in 0..rs.order() {
        let blk = b.block_of(x);
        let _ = writeln!(s, "block {} = part {} vertices {}..{}", x + 1, rs.part_of(x) + 1, blk.start + 1, blk.end);
    }
    for (c, clique) in rs.cliques().iter().enumerate() {
        let ys: Vec<String> = clique.iter().map(|y| (y + 1).to_string()).collect();
        let _ = writeln!(s, "clique {} = {}", c + 1, ys.join(" "));
    }
    let m = b.f.part_size();
    for (x, y) in b.f.as_oriented().edges() {
        let _ = writeln!(s, "f = {}.{} {}.{}", x / m + 1, x % m + 1, y / m + 1, y % m + 1);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tournament_round_trips() {
        let t = Tournament::from_fn(5, |i, j| (i + j) % 2 == 0);
        for f in [GraphFormat::Matrix, GraphFormat::Edges] {
            assert_eq!(parse_tournament(&write_tournament(&t, f)).unwrap(), t);
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "3\nmatrix\n011\n001\n110\n";
        assert!(matches!(parse_tournament(bad), Err(Error::Parse { line: 5, .. })));
        let missing = "3\n# comment\nedges\n1 2\n2 3\n";
        assert!(matches!(parse_tournament(missing), Err(Error::Parse { .. })));
        assert!(matches!(parse_oriented("3\nedges\n1 4\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_oriented("2\nmatrix\n02\n00\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_oriented("x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_oriented("2\nmatrix\n01\n"), Err(Error::Parse { line: 4, .. })));
        assert!(parse_oriented("3\nedges\n1 2\n2 3\n").is_ok());
    }

    #[test]
    fn labeled_round_trip() {
        let g = LabeledGraph::new(vec![1, 3, 4], [(1, 3), (3, 4)]).unwrap();
        assert_eq!(parse_labeled(&write_labeled(&g)).unwrap(), g);
        assert!(matches!(parse_labeled("vertices: 1 2\n2 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_labeled("vertices: 2 1\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn kpartite_round_trip() {
        let f = KPartiteTournament::from_fn(2, 3, |i, a, j, b| (i + a + j + b) % 2 == 0);
        assert_eq!(parse_kpartite(&write_kpartite(&f)).unwrap(), f);
        assert!(matches!(parse_kpartite("parts: 2 2\n1.1 1.2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_kpartite("parts: 1 2\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn matrix_and_graph_round_trip() {
        let a = BinaryMatrix::from_fn(4, |i, j| i * j % 3 == 1);
        assert_eq!(parse_matrix(&write_matrix(&a)).unwrap(), a);
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        assert!(matches!(parse_graph("3\n1 1\n"), Err(Error::Parse { line: 2, .. })));
    }
}
