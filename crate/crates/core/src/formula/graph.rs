//! Dependency graph of a straight-line formula and its statistics.
//!
//! Each `x := replaceall(s, p, t)` contributes an l-edge `x -> s` and an
//! r-edge `x -> t`. Parallel edges are kept: `replaceall(y, p, y)` yields two.
//! Every constant occurrence is its own vertex.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::{Formula, Rhs, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    /// To the subject.
    L,
    /// To the replacement.
    R,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepEdge {
    pub from: usize,
    pub kind: EdgeKind,
    pub to: usize,
    /// Pattern text, for display.
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DepGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<DepEdge>,
}

pub fn build_dependency_graph(f: &Formula) -> DepGraph {
    let mut g = DepGraph {
        vertices: f.variables(),
        edges: Vec::new(),
    };
    let index = |g: &DepGraph, v: &str| g.vertices.iter().position(|w| w == v).unwrap();
    let mut consts = 0usize;
    let mut vertex_of = |g: &mut DepGraph, t: &Term| match t {
        Term::Var(v) => index(g, v),
        Term::Const(w) => {
            consts += 1;
            g.vertices.push(format!("\"{}\"@{}", w.iter().collect::<String>(), consts));
            g.vertices.len() - 1
        }
    };
    for d in &f.definitions {
        let from = index(&g, &d.var);
        let (subject, label, replacement) = match &d.rhs {
            Rhs::ReplaceAll {
                subject,
                pattern,
                replacement,
            } => (subject, pattern.to_string(), replacement),
            Rhs::Concat(a, b) => (a, ".".to_string(), b),
        };
        let s = vertex_of(&mut g, subject);
        let t = vertex_of(&mut g, replacement);
        g.edges.push(DepEdge {
            from,
            kind: EdgeKind::L,
            to: s,
            label: label.clone(),
        });
        g.edges.push(DepEdge {
            from,
            kind: EdgeKind::R,
            to: t,
            label,
        });
    }
    g
}

impl DepGraph {
    /// A graph from raw edges; vertices are named `v0 .. v{n-1}`.
    pub fn from_edges(n: usize, edges: &[(usize, EdgeKind, usize)]) -> Self {
        DepGraph {
            vertices: (0..n).map(|i| format!("v{i}")).collect(),
            edges: edges
                .iter()
                .map(|&(from, kind, to)| DepEdge {
                    from,
                    kind,
                    to,
                    label: String::new(),
                })
                .collect(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    fn succ(&self) -> Vec<Vec<(usize, EdgeKind)>> {
        let mut s = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            s[e.from].push((e.to, e.kind));
        }
        s
    }

    /// Vertices ordered so every edge goes from an earlier to a later one.
    /// `None` if the graph has a cycle.
    pub fn topo_order(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for e in &self.edges {
            indeg[e.to] += 1;
        }
        let succ = self.succ();
        let mut ready: Vec<usize> = (0..n).rev().filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for &(w, _) in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Longest path weight, where each edge weighs `w(kind)`.
    fn longest(&self, w: impl Fn(EdgeKind) -> usize) -> usize {
        let order = self.topo_order().expect("dependency graph is acyclic");
        let succ = self.succ();
        let mut best = vec![0usize; self.vertices.len()];
        for &v in order.iter().rev() {
            best[v] = succ[v].iter().map(|&(t, k)| best[t] + w(k)).max().unwrap_or(0);
        }
        best.into_iter().max().unwrap_or(0)
    }

    /// Number of edges on a longest path.
    pub fn depth(&self) -> usize {
        self.longest(|_| 1)
    }

    /// Maximum number of l-edges on a path.
    pub fn l_length(&self) -> usize {
        self.longest(|k| (k == EdgeKind::L) as usize)
    }

    /// Number of distinct paths (edge sequences) from `a` to `b`.
    pub fn count_paths(&self, a: usize, b: usize) -> u128 {
        let order = self.topo_order().expect("dependency graph is acyclic");
        let succ = self.succ();
        let mut count = vec![0u128; self.vertices.len()];
        count[b] = 1;
        for &v in order.iter().rev() {
            if v != b {
                count[v] = succ[v].iter().map(|&(t, _)| count[t]).fold(0, u128::saturating_add);
            }
        }
        count[a]
    }

    /// `reach[u][v]` iff `v` is reachable from `u` (reflexively).
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.vertices.len();
        let succ = self.succ();
        let mut reach = vec![vec![false; n]; n];
        for (u, row) in reach.iter_mut().enumerate() {
            let mut stack = vec![u];
            row[u] = true;
            while let Some(v) = stack.pop() {
                for &(w, _) in &succ[v] {
                    if !row[w] {
                        row[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        reach
    }

    /// Whether two distinct paths from `a` to `b` share no vertex but their ends.
    /// Decided by a unit-capacity max flow of value 2 on the vertex-split graph.
    pub fn has_diamond(&self, a: usize, b: usize) -> bool {
        if a == b {
            return false;
        }
        let n = self.vertices.len();
        // Vertex v splits into in = 2v and out = 2v+1; the ends are not split.
        let mut arcs: Vec<(usize, usize, i32)> = Vec::new();
        for v in 0..n {
            if v != a && v != b {
                arcs.push((2 * v, 2 * v + 1, 1));
            }
        }
        let out = |v: usize| if v == a || v == b { 2 * v } else { 2 * v + 1 };
        for e in &self.edges {
            arcs.push((out(e.from), 2 * e.to, 1));
        }
        // Residual graph as an arc list with reverse indices.
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
        let mut res: Vec<(usize, i32)> = Vec::new();
        for &(u, v, c) in &arcs {
            adj[u].push(res.len());
            res.push((v, c));
            adj[v].push(res.len());
            res.push((u, 0));
        }
        let (s, t) = (2 * a, 2 * b);
        let mut flow = 0;
        while flow < 2 {
            let mut prev: Vec<Option<usize>> = vec![None; 2 * n];
            let mut seen = vec![false; 2 * n];
            seen[s] = true;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &ai in &adj[u] {
                    let (v, c) = res[ai];
                    if c > 0 && !seen[v] {
                        seen[v] = true;
                        prev[v] = Some(ai);
                        queue.push_back(v);
                    }
                }
            }
            if !seen[t] {
                break;
            }
            let mut v = t;
            while let Some(ai) = prev[v] {
                res[ai].1 -= 1;
                res[ai ^ 1].1 += 1;
                v = res[ai ^ 1].0;
            }
            flow += 1;
        }
        flow >= 2
    }

    /// All `(source, destination)` pairs joined by a diamond.
    pub fn diamonds(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        let reach = self.reachability();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && reach[a][b] && self.has_diamond(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Longest chain of diamonds where each next source is reachable
    /// (reflexively) from the previous destination.
    pub fn diamond_index(&self) -> usize {
        let ds = self.diamonds();
        if ds.is_empty() {
            return 0;
        }
        let reach = self.reachability();
        let order = self.topo_order().expect("dependency graph is acyclic");
        let mut pos = vec![0usize; self.vertices.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        // A successor diamond's source is at or after the destination, so
        // processing diamonds by decreasing source position is a valid order.
        let mut idx: Vec<usize> = (0..ds.len()).collect();
        idx.sort_by_key(|&i| std::cmp::Reverse(pos[ds[i].0]));
        let mut best = vec![0usize; ds.len()];
        for &i in &idx {
            let (_, d) = ds[i];
            let tail = (0..ds.len())
                .filter(|&j| reach[d][ds[j].0])
                .map(|j| best[j])
                .max()
                .unwrap_or(0);
            best[i] = 1 + tail;
        }
        best.into_iter().max().unwrap_or(0)
    }

    /// Graphviz rendering; l-edges solid, r-edges dashed.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph depgraph {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", v.replace('\\', "\\\\").replace('"', "\\\""));
        }
        for e in &self.edges {
            let (k, style) = match e.kind {
                EdgeKind::L => ("l", "solid"),
                EdgeKind::R => ("r", "dashed"),
            };
            let label = format!("{k} {}", e.label).trim_end().replace('\\', "\\\\").replace('"', "\\\"");
            let _ = writeln!(s, "  n{} -> n{} [label=\"{label}\", style={style}];", e.from, e.to);
        }
        s.push_str("}\n");
        s
    }
}

/// Exhaustive reference implementations over explicit path enumeration.
pub mod brute_force {
    use super::*;

    /// Every path from `a` to `b` as its edge-index sequence.
    pub fn paths(g: &DepGraph, a: usize, b: usize) -> Vec<Vec<usize>> {
        fn go(g: &DepGraph, v: usize, b: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if v == b {
                out.push(cur.clone());
                return;
            }
            for (i, e) in g.edges.iter().enumerate() {
                if e.from == v {
                    cur.push(i);
                    go(g, e.to, b, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(g, a, b, &mut Vec::new(), &mut out);
        out
    }

    fn inner_vertices(g: &DepGraph, p: &[usize]) -> BTreeSet<usize> {
        p.iter().skip(1).map(|&i| g.edges[i].from).collect()
    }

    pub fn has_diamond(g: &DepGraph, a: usize, b: usize) -> bool {
        if a == b {
            return false;
        }
        let ps = paths(g, a, b);
        ps.iter().enumerate().any(|(i, p)| {
            ps[i + 1..]
                .iter()
                .any(|q| inner_vertices(g, p).is_disjoint(&inner_vertices(g, q)))
        })
    }

    pub fn l_length(g: &DepGraph) -> usize {
        let n = g.num_vertices();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .flat_map(|(a, b)| paths(g, a, b))
            .map(|p| p.iter().filter(|&&i| g.edges[i].kind == EdgeKind::L).count())
            .max()
            .unwrap_or(0)
    }

    pub fn diamond_index(g: &DepGraph) -> usize {
        let n = g.num_vertices();
        let ds: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| has_diamond(g, a, b))
            .collect();
        let reachable = |u: usize, v: usize| u == v || !paths(g, u, v).is_empty();
        // Chains cannot repeat a diamond in a DAG, so plain DFS terminates.
        fn chain(ds: &[(usize, usize)], last: usize, reachable: &dyn Fn(usize, usize) -> bool) -> usize {
            let d = ds[last].1;
            1 + ds
                .iter()
                .enumerate()
                .filter(|(_, &(s, _))| reachable(d, s))
                .map(|(j, _)| chain(ds, j, reachable))
                .max()
                .unwrap_or(0)
        }
        (0..ds.len()).map(|i| chain(&ds, i, &reachable)).max().unwrap_or(0)
    }
}
