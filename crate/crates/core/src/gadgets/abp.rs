use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matrix::{parse_var_token, Entry, Flavor, VarMatrix, VarNaming, VarToken};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AbpEdge {
    pub from: usize,
    pub to: usize,
    /// `Entry::One` or `Entry::Var(k)`.
    pub label: Entry,
}

/// Acyclic digraph with a source and a target and edges labeled 1 or a
/// variable. Vertices are `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abp {
    vertex_count: usize,
    source: usize,
    target: usize,
    edges: Vec<AbpEdge>,
    naming: VarNaming,
    var_count: u32,
}

impl Abp {
    pub fn new(
        vertex_count: usize,
        source: usize,
        target: usize,
        edges: Vec<AbpEdge>,
        naming: VarNaming,
        var_count: u32,
    ) -> Result<Self> {
        if source >= vertex_count || target >= vertex_count || source == target {
            return Err(Error::InvalidArgument(format!(
                "source {source} and target {target} must be distinct vertices of 0..{vertex_count}"
            )));
        }
        if let VarNaming::Grid(m) = naming {
            if var_count != m * m {
                return Err(Error::InvalidArgument(format!(
                    "grid naming with m = {m} requires {} variables",
                    m * m
                )));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for e in &edges {
            if e.from >= vertex_count || e.to >= vertex_count {
                return Err(Error::InvalidArgument(format!("edge {}->{} out of range", e.from, e.to)));
            }
            if e.from == e.to {
                return Err(Error::InvalidArgument(format!("loop at vertex {}", e.from)));
            }
            if !seen.insert((e.from, e.to)) {
                return Err(Error::InvalidArgument(format!("parallel edges {}->{}", e.from, e.to)));
            }
            if e.to == source {
                return Err(Error::InvalidArgument("source has an incoming edge".into()));
            }
            if e.from == target {
                return Err(Error::InvalidArgument("target has an outgoing edge".into()));
            }
            match e.label {
                Entry::One => {}
                Entry::Var(k) if k >= 1 && k <= var_count => {}
                other => {
                    return Err(Error::InvalidArgument(format!("edge label {other:?} is not 1 or a variable")))
                }
            }
        }
        let abp = Self {
            vertex_count,
            source,
            target,
            edges,
            naming,
            var_count,
        };
        if abp.topological_order().is_none() {
            return Err(Error::InvalidArgument("branching program has a cycle".into()));
        }
        Ok(abp)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn edges(&self) -> &[AbpEdge] {
        &self.edges
    }

    pub fn naming(&self) -> VarNaming {
        self.naming
    }

    pub fn var_count(&self) -> u32 {
        self.var_count
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &AbpEdge> {
        self.edges.iter().filter(move |e| e.from == v)
    }

    /// Kahn's algorithm; `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.vertex_count];
        let mut succ = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            indeg[e.to] += 1;
            succ[e.from].push(e.to);
        }
        let mut stack: Vec<usize> = (0..self.vertex_count).rev().filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(self.vertex_count);
        while let Some(v) = stack.pop() {
            order.push(v);
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        (order.len() == self.vertex_count).then_some(order)
    }

    /// Layer index of every vertex if each edge goes from some layer `k` to
    /// `k + 1` with the source alone in layer 0. Vertices unreachable from
    /// the source make this `None`.
    pub fn layers(&self) -> Option<Vec<usize>> {
        let mut layer = vec![usize::MAX; self.vertex_count];
        layer[self.source] = 0;
        for v in self.topological_order()? {
            if layer[v] == usize::MAX {
                return None;
            }
            for e in self.out_edges(v) {
                if layer[e.to] == usize::MAX {
                    layer[e.to] = layer[v] + 1;
                } else if layer[e.to] != layer[v] + 1 {
                    return None;
                }
            }
        }
        Some(layer)
    }
}

/// A digraph with integer or variable edge labels, loops allowed. Its
/// directed adjacency matrix has the label of `(i, j)` at `[i][j]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabeledDigraph {
    vertex_count: usize,
    edges: BTreeMap<(usize, usize), Entry>,
}

impl LabeledDigraph {
    pub fn new(vertex_count: usize) -> Self {
        Self {
            vertex_count,
            edges: BTreeMap::new(),
        }
    }

    pub fn from_matrix(a: &VarMatrix) -> Self {
        let mut g = Self::new(a.n());
        for r in 0..a.n() {
            for c in 0..a.n() {
                if !a.get(r, c).is_zero() {
                    g.edges.insert((r, c), *a.get(r, c));
                }
            }
        }
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn add_vertices(&mut self, k: usize) -> usize {
        let first = self.vertex_count;
        self.vertex_count += k;
        first
    }

    /// Inserts an edge; a second edge between the same ordered pair is an error.
    pub fn add_edge(&mut self, from: usize, to: usize, label: Entry) -> Result<()> {
        if from >= self.vertex_count || to >= self.vertex_count {
            return Err(Error::InvalidArgument(format!("edge {from}->{to} out of range")));
        }
        if label.is_zero() {
            return Ok(());
        }
        if self.edges.insert((from, to), label).is_some() {
            return Err(Error::InvalidArgument(format!("parallel edges {from}->{to}")));
        }
        Ok(())
    }

    pub fn remove_edge(&mut self, from: usize, to: usize) -> Option<Entry> {
        self.edges.remove(&(from, to))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Entry)> + '_ {
        self.edges.iter().map(|(&(u, v), &e)| (u, v, e))
    }

    pub fn adjacency_matrix(&self, flavor: Flavor, naming: VarNaming, var_count: u32) -> Result<VarMatrix> {
        let n = self.vertex_count;
        let mut rows = vec![vec![Entry::Zero; n]; n];
        for (&(u, v), &e) in &self.edges {
            rows[u][v] = e;
        }
        VarMatrix::new(flavor, naming, var_count, rows)
    }
}

fn label_token(abp: &Abp, e: Entry) -> String {
    match e {
        Entry::Var(k) => abp.naming.name(k),
        Entry::One => "1".into(),
        Entry::Zero => "0".into(),
        Entry::Int(c) => c.to_string(),
    }
}

/// `<#vertices> <s> <t>` then one `<u> <v> <label>` line per edge, 1-based.
pub fn serialize_abp(abp: &Abp) -> String {
    let mut out = format!("{} {} {}\n", abp.vertex_count, abp.source + 1, abp.target + 1);
    for e in &abp.edges {
        let _ = writeln!(out, "{} {} {}", e.from + 1, e.to + 1, label_token(abp, e.label));
    }
    out
}

fn parse_index(tok: &str, line: usize, col: usize, n: usize) -> Result<usize> {
    match tok.parse::<usize>() {
        Ok(v) if v >= 1 && v <= n => Ok(v - 1),
        _ => Err(Error::parse(line, col, format!("expected a vertex in 1..={n}, got `{tok}`"))),
    }
}

/// Inverse of [`serialize_abp`]. Variable naming is inferred as for matrices.
pub fn parse_abp(text: &str) -> Result<Abp> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, 1, "empty input"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 3 {
        return Err(Error::parse(hl + 1, 1, "header must be `<#vertices> <s> <t>`"));
    }
    let n: usize = head[0]
        .parse()
        .map_err(|_| Error::parse(hl + 1, 1, format!("bad vertex count `{}`", head[0])))?;
    let s = parse_index(head[1], hl + 1, 2, n)?;
    let t = parse_index(head[2], hl + 1, 3, n)?;
    let mut raw = Vec::new();
    let (mut seq, mut grid) = (false, false);
    let (mut max_seq, mut max_grid) = (0u32, 0u32);
    for (i, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::parse(i + 1, 1, "edge lines must be `<u> <v> <label>`"));
        }
        let u = parse_index(toks[0], i + 1, 1, n)?;
        let v = parse_index(toks[1], i + 1, 2, n)?;
        let label = if toks[2] == "1" {
            None
        } else {
            match parse_var_token(toks[2]) {
                Some(VarToken::Sequential(k)) => {
                    seq = true;
                    max_seq = max_seq.max(k);
                    Some(VarToken::Sequential(k))
                }
                Some(VarToken::Grid(a, b)) => {
                    grid = true;
                    max_grid = max_grid.max(a).max(b);
                    Some(VarToken::Grid(a, b))
                }
                None => return Err(Error::parse(i + 1, 3, format!("bad edge label `{}`", toks[2]))),
            }
        };
        raw.push((u, v, label));
    }
    if seq && grid {
        return Err(Error::parse(1, 1, "mixed variable naming"));
    }
    let (naming, var_count) = if grid {
        (VarNaming::Grid(max_grid), max_grid * max_grid)
    } else {
        (VarNaming::Sequential, max_seq)
    };
    let edges = raw
        .into_iter()
        .map(|(from, to, label)| AbpEdge {
            from,
            to,
            label: match label {
                None => Entry::One,
                Some(VarToken::Sequential(k)) => Entry::Var(k),
                Some(VarToken::Grid(a, b)) => Entry::Var((a - 1) * max_grid + b),
            },
        })
        .collect();
    Abp::new(n, s, t, edges, naming, var_count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(from: usize, to: usize, label: Entry) -> AbpEdge {
        AbpEdge { from, to, label }
    }

    #[test]
    fn rejects_malformed_programs() {
        let seq = VarNaming::Sequential;
        assert!(Abp::new(2, 0, 1, vec![edge(1, 0, Entry::One)], seq, 0).is_err());
        assert!(Abp::new(3, 0, 2, vec![edge(0, 1, Entry::One), edge(0, 1, Entry::One)], seq, 0).is_err());
        assert!(Abp::new(
            4,
            0,
            3,
            vec![edge(1, 2, Entry::One), edge(2, 1, Entry::One)],
            seq,
            0
        )
        .is_err());
        assert!(Abp::new(2, 0, 1, vec![edge(0, 1, Entry::Var(2))], seq, 1).is_err());
        assert!(Abp::new(2, 0, 1, vec![edge(0, 1, Entry::Int(3))], seq, 0).is_err());
        assert!(Abp::new(2, 0, 0, vec![], seq, 0).is_err());
    }

    #[test]
    fn text_round_trip() {
        let abp = Abp::new(
            3,
            0,
            2,
            vec![edge(0, 1, Entry::Var(2)), edge(1, 2, Entry::One), edge(0, 2, Entry::Var(4))],
            VarNaming::Grid(2),
            4,
        )
        .unwrap();
        let text = serialize_abp(&abp);
        assert_eq!(text, "3 1 3\n1 2 x1_2\n2 3 1\n1 3 x2_2\n");
        assert_eq!(parse_abp(&text).unwrap(), abp);
        assert!(matches!(parse_abp("3 1 3\n1 4 1\n"), Err(Error::Parse { line: 2, column: 2, .. })));
        assert!(parse_abp("3 1 3\n1 2 y\n").is_err());
    }

    #[test]
    fn layers_detect_skips() {
        let seq = VarNaming::Sequential;
        let layered = Abp::new(3, 0, 2, vec![edge(0, 1, Entry::One), edge(1, 2, Entry::One)], seq, 0).unwrap();
        assert_eq!(layered.layers(), Some(vec![0, 1, 2]));
        let skip = Abp::new(
            3,
            0,
            2,
            vec![edge(0, 1, Entry::One), edge(1, 2, Entry::One), edge(0, 2, Entry::One)],
            seq,
            0,
        )
        .unwrap();
        assert_eq!(skip.layers(), None);
    }

    #[test]
    fn digraph_adjacency() {
        let a = VarMatrix::integer(vec![
            vec![Entry::Int(3), Entry::Zero],
            vec![Entry::Var(1), Entry::One],
        ])
        .unwrap();
        let g = LabeledDigraph::from_matrix(&a);
        assert_eq!(g.edges().count(), 3);
        assert_eq!(g.adjacency_matrix(Flavor::Integer, VarNaming::Sequential, 1).unwrap(), a);
        let mut g = g;
        assert!(g.add_edge(0, 0, Entry::One).is_err());
    }
}
