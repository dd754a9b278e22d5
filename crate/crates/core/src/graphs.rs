//! Small simple graphs: construction, regularity and bipartiteness checks,
//! brute-force homomorphism counting, spectral radius, and the
//! homomorphism-inequality checkers.

use crate::error::{Error, Result};
use crate::graphon::{self, StepGraphon};
use crate::linalg;

/// Cap on `n^{v(H)}` for exact homomorphism enumeration.
const HOM_ENUM_CAP: f64 = 1e8;

/// A small undirected graph on `n` vertices. Loops are admitted only when
/// constructed through [`SmallGraph::new_with_loops`] (target graphs of the
/// homomorphism inequalities may carry them).
#[derive(Debug, Clone)]
pub struct SmallGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    allows_loops: bool,
    adj: Vec<Vec<u64>>,
}

impl SmallGraph {
    /// Simple graph from an edge list; rejects loops and duplicates.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::build(n, edges, false)
    }

    /// Graph that may carry loops (`(v, v)` entries).
    pub fn new_with_loops(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::build(n, edges, true)
    }

    fn build(n: usize, edges: Vec<(usize, usize)>, allows_loops: bool) -> Result<Self> {
        let words = n.div_ceil(64);
        let mut adj = vec![vec![0u64; words]; n];
        let mut normalized = Vec::with_capacity(edges.len());
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(Error::invalid(format!(
                    "edge ({a},{b}) out of range for n = {n}"
                )));
            }
            if a == b && !allows_loops {
                return Err(Error::invalid(format!("loop at vertex {a} in a simple graph")));
            }
            let (u, v) = if a <= b { (a, b) } else { (b, a) };
            if adj[u][v / 64] >> (v % 64) & 1 == 1 {
                return Err(Error::invalid(format!("duplicate edge ({u},{v})")));
            }
            adj[u][v / 64] |= 1 << (v % 64);
            adj[v][u / 64] |= 1 << (u % 64);
            normalized.push((u, v));
        }
        Ok(SmallGraph {
            n,
            edges: normalized,
            allows_loops,
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn allows_loops(&self) -> bool {
        self.allows_loops
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u][v / 64] >> (v % 64) & 1 == 1
    }

    /// Degree of `v`; a loop contributes 2.
    pub fn degree(&self, v: usize) -> usize {
        let mut d = self.adj[v].iter().map(|w| w.count_ones() as usize).sum::<usize>();
        if self.has_edge(v, v) {
            d += 1;
        }
        d
    }

    pub(crate) fn adjacency_rows(&self) -> &[Vec<u64>] {
        &self.adj
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        Self::new(n, edges).expect("complete graph is valid")
    }

    /// Cycle C_n, n >= 3.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let edges = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::new(n, edges).expect("cycle is valid")
    }

    /// Path on `n` vertices (n-1 edges).
    pub fn path(n: usize) -> Self {
        assert!(n >= 1);
        let edges = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Self::new(n, edges).expect("path is valid")
    }

    /// Complete bipartite graph K_{a,b}; left side 0..a, right side a..a+b.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in 0..b {
                edges.push((u, a + v));
            }
        }
        Self::new(a + b, edges).expect("complete bipartite graph is valid")
    }

    /// Cube graph Q_3: vertices are 3-bit strings, edges flip one bit.
    pub fn cube_q3() -> Self {
        let mut edges = Vec::new();
        for u in 0..8usize {
            for bit in 0..3 {
                let v = u ^ (1 << bit);
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        Self::new(8, edges).expect("cube graph is valid")
    }

    /// Petersen graph: outer 5-cycle 0..5, inner pentagram 5..10.
    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::new(10, edges).expect("petersen graph is valid")
    }

    /// Circulant graph on `n` vertices with the given positive offsets.
    pub fn circulant(n: usize, offsets: &[usize]) -> Result<Self> {
        let mut edges = Vec::new();
        for &off in offsets {
            if off == 0 || off > n / 2 {
                return Err(Error::invalid(format!(
                    "circulant offset {off} out of range for n = {n}"
                )));
            }
            for i in 0..n {
                let j = (i + off) % n;
                let (u, v) = if i <= j { (i, j) } else { (j, i) };
                // Offset n/2 on even n generates each edge twice.
                if !edges.contains(&(u, v)) {
                    edges.push((u, v));
                }
            }
        }
        Self::new(n, edges)
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn is_d_regular(&self) -> Option<usize> {
        if self.n == 0 {
            return None;
        }
        let d = self.degree(0);
        (1..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// Whether every vertex is reachable from vertex 0.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(u) = stack.pop() {
            for v in 0..self.n {
                if self.has_edge(u, v) && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// BFS 2-coloring; `Some((left, right))` when the graph is bipartite.
    pub fn is_bipartite(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        let mut color = vec![u8::MAX; self.n];
        for start in 0..self.n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for v in 0..self.n {
                    if !self.has_edge(u, v) {
                        continue;
                    }
                    if v == u {
                        return None; // loop
                    }
                    if color[v] == u8::MAX {
                        color[v] = 1 - color[u];
                        queue.push_back(v);
                    } else if color[v] == color[u] {
                        return None;
                    }
                }
            }
        }
        let left = (0..self.n).filter(|&v| color[v] == 0).collect();
        let right = (0..self.n).filter(|&v| color[v] == 1).collect();
        Some((left, right))
    }

    /// Edge-list text: `n m` header, then `m` lines `u v` (0-indexed).
    pub fn to_edge_list_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    /// Parses the edge-list format; `allow_loops` gates `u u` lines.
    pub fn from_edge_list_text(text: &str, allow_loops: bool) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let mut next_usize = |what: &str| -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad {what}: {e}")))
        };
        let n = next_usize("vertex count")?;
        let m = next_usize("edge count")?;
        let mut edges = Vec::with_capacity(m);
        for i in 0..m {
            let u = next_usize(&format!("edge {i} endpoint"))?;
            let v = next_usize(&format!("edge {i} endpoint"))?;
            edges.push((u, v));
        }
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing tokens after edge list".into()));
        }
        if allow_loops {
            Self::new_with_loops(n, edges)
        } else {
            Self::new(n, edges)
        }
    }
}

/// Exact number of homomorphisms `V(H) -> V(G)` carrying edges to edges,
/// by backtracking over the vertices of `H`.
pub fn hom_count(h: &SmallGraph, g: &SmallGraph) -> Result<u64> {
    check_enum_size(g.n(), h.n())?;
    if h.n() == 0 {
        return Ok(1);
    }
    // Edges of H from each vertex to earlier vertices, so a partial map can
    // be rejected as soon as it breaks an edge.
    let mut back_edges: Vec<Vec<usize>> = vec![Vec::new(); h.n()];
    let mut loops: Vec<bool> = vec![false; h.n()];
    for &(u, v) in h.edges() {
        if u == v {
            loops[u] = true;
        } else {
            back_edges[v.max(u)].push(v.min(u));
        }
    }
    let mut assign = vec![0usize; h.n()];
    let mut count = 0u64;
    fn rec(
        level: usize,
        h_n: usize,
        g: &SmallGraph,
        back_edges: &[Vec<usize>],
        loops: &[bool],
        assign: &mut [usize],
        count: &mut u64,
    ) {
        if level == h_n {
            *count += 1;
            return;
        }
        'target: for t in 0..g.n() {
            if loops[level] && !g.has_edge(t, t) {
                continue;
            }
            for &e in &back_edges[level] {
                if !g.has_edge(assign[e], t) {
                    continue 'target;
                }
            }
            assign[level] = t;
            rec(level + 1, h_n, g, back_edges, loops, assign, count);
        }
    }
    rec(0, h.n(), g, &back_edges, &loops, &mut assign, &mut count);
    Ok(count)
}

/// Homomorphism density `t(H,G) = hom(H,G) / n^{v(H)}`.
pub fn hom_density_graph(h: &SmallGraph, g: &SmallGraph) -> Result<f64> {
    let count = hom_count(h, g)?;
    Ok(count as f64 / (g.n() as f64).powi(h.n() as i32))
}

fn check_enum_size(n: usize, v: usize) -> Result<()> {
    if (n as f64).powi(v as i32) > HOM_ENUM_CAP {
        return Err(Error::SizeLimit(format!(
            "hom enumeration needs {n}^{v} maps, above the {HOM_ENUM_CAP:e} cap"
        )));
    }
    Ok(())
}

/// Cycle density through the trace identity `t(C_k, G) = tr(A^k) / n^k`.
pub fn cycle_density_trace(k: usize, g: &SmallGraph) -> Result<f64> {
    if k < 3 {
        return Err(Error::domain(format!("cycle length k = {k} must be >= 3")));
    }
    let n = g.n();
    if n > 256 {
        return Err(Error::SizeLimit(format!(
            "trace computation is dense; n = {n} exceeds the 256 cap"
        )));
    }
    if n == 0 {
        return Err(Error::invalid("empty graph"));
    }
    let mut a = vec![0.0f64; n * n];
    for u in 0..n {
        for v in 0..n {
            if g.has_edge(u, v) {
                a[u * n + v] = 1.0;
            }
        }
    }
    let mut power = a.clone();
    for _ in 0..(k - 1) {
        power = mat_mul(&power, &a, n);
    }
    let trace: f64 = (0..n).map(|i| power[i * n + i]).sum();
    Ok(trace / (n as f64).powi(k as i32))
}

fn mat_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0f64; n * n];
    for i in 0..n {
        for l in 0..n {
            let ail = a[i * n + l];
            if ail == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += ail * b[l * n + j];
            }
        }
    }
    c
}

/// Largest adjacency eigenvalue, by power iteration on the shifted matrix.
/// Satisfies `spectral_radius(G) = n * operator_norm(f^G)`.
pub fn spectral_radius(g: &SmallGraph) -> Result<f64> {
    if g.n() > 2000 {
        return Err(Error::SizeLimit(format!("n = {} exceeds the 2000 cap", g.n())));
    }
    Ok(linalg::adjacency_top_eigenvalue(g.adjacency_rows(), g.n()))
}

/// Two-sided report of the homomorphism inequality
/// `t(G,f) <= t(K_{d,d},f)^{v(G)/(2d)}` for d-regular `G`.
#[derive(Debug, Clone, Copy)]
pub struct GtReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Checks the inequality for bipartite d-regular `G` against a step
/// graphon; bipartite inputs are required here because the inequality can
/// genuinely fail otherwise (use [`galvin_tetali_unchecked`] to observe
/// that failure).
pub fn galvin_tetali_check(g: &SmallGraph, f: &StepGraphon) -> Result<GtReport> {
    if g.is_bipartite().is_none() {
        return Err(Error::invalid(
            "galvin_tetali_check requires a bipartite graph; \
             use galvin_tetali_unchecked for counterexamples",
        ));
    }
    galvin_tetali_unchecked(g, f)
}

/// The inequality report for any d-regular `G`, bipartite or not.
pub fn galvin_tetali_unchecked(g: &SmallGraph, f: &StepGraphon) -> Result<GtReport> {
    let d = g
        .is_d_regular()
        .ok_or_else(|| Error::invalid("galvin_tetali needs a d-regular graph"))?;
    if d == 0 {
        return Err(Error::invalid("galvin_tetali needs d >= 1"));
    }
    let lhs = graphon::hom_density(g, f)?;
    let kdd = SmallGraph::complete_bipartite(d, d);
    let base = graphon::hom_density(&kdd, f)?;
    let rhs = base.powf(g.n() as f64 / (2.0 * d as f64));
    Ok(GtReport {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-12,
    })
}
