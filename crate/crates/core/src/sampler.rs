//! Desk-scale empirical validation: G(n,p) sampling, exact conditional
//! enumeration at tiny n, Glauber dynamics for the exponential model, and
//! empirical cut distance to a constant.
//!
//! Everything is driven by the crate's [`crate::rng::Xoshiro256`]
//! generator, so a seed pins down a run byte-for-byte.

use crate::error::{Error, Result};
use crate::graphs::SmallGraph;
use crate::rng::Xoshiro256;

/// Steps between incremental-versus-scratch count checksums in the chain.
const CHECKSUM_INTERVAL: u64 = 10_000;

/// Samples G(n, p): every unordered pair is an edge independently with
/// probability `p`, consuming one uniform draw per pair in lexicographic
/// order.
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<SmallGraph> {
    if n == 0 {
        return Err(Error::domain("sample_gnp: n must be >= 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("sample_gnp: p = {p} outside [0,1]")));
    }
    let mut rng = Xoshiro256::new(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.next_f64() < p {
                edges.push((u, v));
            }
        }
    }
    SmallGraph::new(n, edges)
}

/// Exact conditional distribution of the edge count of G(n,p) given
/// `t(H, G) >= r^{e(H)}`, by enumerating all `2^{C(n,2)}` labeled graphs.
#[derive(Debug, Clone)]
pub struct ConditionalTailReport {
    pub n: usize,
    pub p: f64,
    pub r: f64,
    /// The conditioning threshold `r^{e(H)}`.
    pub threshold: f64,
    /// Probability of the conditioning event.
    pub event_probability: f64,
    /// `E[edge density | event]`, edges normalized by C(n,2).
    pub conditional_mean_edge_density: f64,
    /// The unconditional mean edge density, i.e. `p`.
    pub unconditional_mean_edge_density: f64,
    /// `P(edge count = j | event)` for `j = 0..=C(n,2)`.
    pub conditional_edge_distribution: Vec<f64>,
}

/// Enumerates every labeled graph on `n <= 7` vertices with its G(n,p)
/// probability and conditions on `t(H, G) >= r^{e(H)}`.
pub fn exact_conditional_upper_tail(
    n: usize,
    p: f64,
    h: &SmallGraph,
    r: f64,
) -> Result<ConditionalTailReport> {
    if n == 0 || n > 7 {
        return Err(Error::SizeLimit(format!(
            "exact enumeration capped at n <= 7, got n = {n}"
        )));
    }
    if !(0.0 < p && p < 1.0) {
        return Err(Error::domain(format!("p = {p} outside (0,1)")));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("r = {r} outside [0,1)")));
    }
    let m = n * (n - 1) / 2;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    let threshold = r.powi(h.edge_count() as i32);
    // Probability lookup by edge count.
    let mut pow_p = vec![1.0f64; m + 1];
    let mut pow_q = vec![1.0f64; m + 1];
    for i in 1..=m {
        pow_p[i] = pow_p[i - 1] * p;
        pow_q[i] = pow_q[i - 1] * (1.0 - p);
    }
    let mut event_probability = 0.0;
    let mut edge_mass = vec![0.0f64; m + 1];
    let mut adj = vec![0u64; n];
    let nf = n as f64;
    for mask in 0u64..(1 << m) {
        for row in adj.iter_mut() {
            *row = 0;
        }
        for (bit, &(u, v)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        let t = hom_count_bitset(h, &adj, n) as f64 / nf.powi(h.n() as i32);
        if t >= threshold {
            let e = mask.count_ones() as usize;
            let prob = pow_p[e] * pow_q[m - e];
            event_probability += prob;
            edge_mass[e] += prob;
        }
    }
    if event_probability <= 0.0 {
        return Err(Error::domain(format!(
            "conditioning event t(H, G) >= {threshold} is empty at n = {n}"
        )));
    }
    let conditional_edge_distribution: Vec<f64> =
        edge_mass.iter().map(|mass| mass / event_probability).collect();
    let mean_edges: f64 = conditional_edge_distribution
        .iter()
        .enumerate()
        .map(|(e, q)| e as f64 * q)
        .sum();
    Ok(ConditionalTailReport {
        n,
        p,
        r,
        threshold,
        event_probability,
        conditional_mean_edge_density: mean_edges / m as f64,
        unconditional_mean_edge_density: p,
        conditional_edge_distribution,
    })
}

/// Homomorphism count of `h` into single-word adjacency rows.
fn hom_count_bitset(h: &SmallGraph, adj: &[u64], n: usize) -> u64 {
    let v = h.n();
    let mut back_edges: Vec<Vec<usize>> = vec![Vec::new(); v];
    for &(a, b) in h.edges() {
        if a != b {
            back_edges[a.max(b)].push(a.min(b));
        }
    }
    let mut assign = vec![0usize; v];
    let mut count = 0u64;
    fn rec(
        level: usize,
        v: usize,
        n: usize,
        adj: &[u64],
        back_edges: &[Vec<usize>],
        assign: &mut [usize],
        count: &mut u64,
    ) {
        if level == v {
            *count += 1;
            return;
        }
        'target: for t in 0..n {
            for &e in &back_edges[level] {
                if adj[assign[e]] >> t & 1 == 0 {
                    continue 'target;
                }
            }
            assign[level] = t;
            rec(level + 1, v, n, adj, back_edges, assign, count);
        }
    }
    rec(0, v, n, adj, &back_edges, &mut assign, &mut count);
    count
}

/// The subgraph driving the exponential model inside the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HKind {
    Triangle,
    /// Cycle C_k for k in 3..=6, through trace identities.
    Cycle(usize),
}

impl HKind {
    fn label(&self) -> String {
        match self {
            HKind::Triangle => "triangle".into(),
            HKind::Cycle(k) => format!("cycle{k}"),
        }
    }
}

/// Parameters of one Glauber run.
#[derive(Debug, Clone)]
pub struct McmcParams {
    pub n: usize,
    pub h: HKind,
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub steps: u64,
    pub burn_in: u64,
    pub thinning: u64,
    pub seed: u64,
}

impl McmcParams {
    /// Defaults: burn-in `max(1e5, 50 n^2)` flips, thinning `n^2`.
    pub fn new(
        n: usize,
        h: HKind,
        alpha: f64,
        beta1: f64,
        beta2: f64,
        steps: u64,
        seed: u64,
    ) -> Self {
        let n2 = (n * n) as u64;
        McmcParams {
            n,
            h,
            alpha,
            beta1,
            beta2,
            steps,
            burn_in: (50 * n2).max(100_000),
            thinning: n2.max(1),
            seed,
        }
    }

    pub fn with_burn_in(mut self, burn_in: u64) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn with_thinning(mut self, thinning: u64) -> Self {
        self.thinning = thinning.max(1);
        self
    }
}

/// One recorded trajectory sample.
#[derive(Debug, Clone, Copy)]
pub struct TrajectorySample {
    pub step: u64,
    /// Edges normalized by C(n,2).
    pub edge_density: f64,
    /// `t(H, G)` under the model's homomorphism normalization.
    pub hom_density: f64,
}

/// A completed Glauber run.
#[derive(Debug, Clone)]
pub struct McmcRun {
    pub params: McmcParams,
    pub trajectory: Vec<TrajectorySample>,
    pub mean_edge_density: f64,
    pub mean_hom_density: f64,
    pub final_graph: SmallGraph,
}

impl McmcRun {
    /// Trajectory CSV with header `step,edge_density,hom_density`.
    pub fn trajectory_csv(&self) -> String {
        let mut s = String::from("step,edge_density,hom_density\n");
        for t in &self.trajectory {
            s.push_str(&format!("{},{:.9},{:.9}\n", t.step, t.edge_density, t.hom_density));
        }
        s
    }

    /// Run metadata as flat JSON.
    pub fn metadata_text(&self) -> String {
        let p = &self.params;
        format!(
            "{{\n  \"n\": {},\n  \"h\": \"{}\",\n  \"alpha\": {},\n  \"beta1\": {},\n  \
             \"beta2\": {},\n  \"steps\": {},\n  \"burn_in\": {},\n  \"thinning\": {},\n  \
             \"seed\": {},\n  \"samples\": {},\n  \"mean_edge_density\": {:.9},\n  \
             \"mean_hom_density\": {:.9}\n}}\n",
            p.n,
            p.h.label(),
            p.alpha,
            p.beta1,
            p.beta2,
            p.steps,
            p.burn_in,
            p.thinning,
            p.seed,
            self.trajectory.len(),
            self.mean_edge_density,
            self.mean_hom_density,
        )
    }
}

/// Single-edge-flip Glauber dynamics whose stationary law is the
/// exponential model `exp(binom(n,2)(beta1 t(K2,G) + beta2 t(H,G)^alpha))`.
///
/// A step picks a uniform pair and resamples its edge from the conditional
/// law: present with probability `sigma(Delta)` where `Delta` is the exact
/// Hamiltonian difference between the edge-present and edge-absent graphs.
#[derive(Debug)]
pub struct GlauberChain {
    n: usize,
    h: HKind,
    alpha: f64,
    beta1: f64,
    beta2: f64,
    rng: Xoshiro256,
    pairs: Vec<(usize, usize)>,
    adj: Vec<Vec<u64>>,
    edges: u64,
    triangles: i64,
    /// Dense A, A^2, A^3 for cycle kinds (empty otherwise).
    a: Vec<f64>,
    a2: Vec<f64>,
    a3: Vec<f64>,
    steps_taken: u64,
}

impl GlauberChain {
    pub fn new(params: &McmcParams) -> Result<Self> {
        let n = params.n;
        if n < 2 || n > 512 {
            return Err(Error::SizeLimit(format!("chain n = {n} outside 2..=512")));
        }
        if let HKind::Cycle(k) = params.h {
            if !(3..=6).contains(&k) {
                return Err(Error::Unsupported(format!(
                    "cycle length {k} outside the supported 3..=6 range"
                )));
            }
            if n > 128 {
                return Err(Error::SizeLimit(
                    "cycle chains keep dense n x n powers; n capped at 128".into(),
                ));
            }
        }
        if !(params.alpha > 0.0) {
            return Err(Error::domain("alpha must be > 0"));
        }
        let words = n.div_ceil(64);
        let pairs = (0..n)
            .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
            .collect();
        let needs_dense = matches!(params.h, HKind::Cycle(k) if k >= 4);
        let size = if needs_dense { n * n } else { 0 };
        Ok(GlauberChain {
            n,
            h: params.h,
            alpha: params.alpha,
            beta1: params.beta1,
            beta2: params.beta2,
            rng: Xoshiro256::new(params.seed),
            pairs,
            adj: vec![vec![0u64; words]; n],
            edges: 0,
            triangles: 0,
            a: vec![0.0; size],
            a2: vec![0.0; size],
            a3: vec![0.0; size],
            steps_taken: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> u64 {
        self.edges
    }

    pub fn edge_density(&self) -> f64 {
        self.edges as f64 / self.pairs.len() as f64
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u][v / 64] >> (v % 64) & 1 == 1
    }

    fn common_neighbors(&self, u: usize, v: usize) -> i64 {
        self.adj[u]
            .iter()
            .zip(self.adj[v].iter())
            .map(|(a, b)| (a & b).count_ones() as i64)
            .sum()
    }

    /// Homomorphism density `t(H, G)` of the current state.
    pub fn hom_density(&self) -> f64 {
        let nf = self.n as f64;
        match self.h {
            HKind::Triangle | HKind::Cycle(3) => 6.0 * self.triangles as f64 / nf.powi(3),
            HKind::Cycle(4) => self.frobenius_sq(&self.a2) / nf.powi(4),
            HKind::Cycle(5) => self.dot(&self.a2, &self.a3) / nf.powi(5),
            HKind::Cycle(6) => self.frobenius_sq(&self.a3) / nf.powi(6),
            HKind::Cycle(_) => unreachable!("validated in new"),
        }
    }

    fn frobenius_sq(&self, m: &[f64]) -> f64 {
        m.iter().map(|x| x * x).sum()
    }

    fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
    }

    fn hamiltonian_term(&self, edges: f64, t_h: f64) -> f64 {
        let nf = self.n as f64;
        let binom = self.pairs.len() as f64;
        let t_k2 = 2.0 * edges / (nf * nf);
        binom * (self.beta1 * t_k2 + self.beta2 * t_h.powf(self.alpha))
    }

    /// Exact Hamiltonian difference `H(G + uv) - H(G - uv)` at the current
    /// state of all other edges.
    pub fn hamiltonian_delta(&mut self, u: usize, v: usize) -> f64 {
        let present = self.has_edge(u, v);
        let (t_with, t_without, e_without) = match self.h {
            HKind::Triangle | HKind::Cycle(3) => {
                let cn = self.common_neighbors(u, v);
                let nf = self.n as f64;
                let t_without = if present {
                    6.0 * (self.triangles - cn) as f64 / nf.powi(3)
                } else {
                    6.0 * self.triangles as f64 / nf.powi(3)
                };
                let t_with = if present {
                    6.0 * self.triangles as f64 / nf.powi(3)
                } else {
                    6.0 * (self.triangles + cn) as f64 / nf.powi(3)
                };
                let e_without = self.edges as f64 - if present { 1.0 } else { 0.0 };
                (t_with, t_without, e_without)
            }
            HKind::Cycle(_) => {
                // Flip to the other state, read the density, flip back.
                let t_current = self.hom_density();
                self.apply_flip(u, v, !present);
                let t_other = self.hom_density();
                self.apply_flip(u, v, present);
                let e_without = self.edges as f64 - if present { 1.0 } else { 0.0 };
                if present {
                    (t_current, t_other, e_without)
                } else {
                    (t_other, t_current, e_without)
                }
            }
        };
        self.hamiltonian_term(e_without + 1.0, t_with)
            - self.hamiltonian_term(e_without, t_without)
    }

    fn apply_flip(&mut self, u: usize, v: usize, make_present: bool) {
        let present = self.has_edge(u, v);
        if present == make_present {
            return;
        }
        let s = if make_present { 1.0 } else { -1.0 };
        if matches!(self.h, HKind::Triangle | HKind::Cycle(3)) {
            let cn = self.common_neighbors(u, v);
            self.triangles += if make_present { cn } else { -cn };
        }
        if !self.a.is_empty() {
            self.update_dense_powers(u, v, s);
        }
        self.adj[u][v / 64] ^= 1 << (v % 64);
        self.adj[v][u / 64] ^= 1 << (u % 64);
        if make_present {
            self.edges += 1;
        } else {
            self.edges -= 1;
        }
    }

    /// Updates A, A^2, A^3 for `A' = A + s E`, `E = e_u e_v^T + e_v e_u^T`.
    ///
    /// A'^2 = A^2 + s(AE + EA) + E^2 and
    /// A'^3 = A^3 + s(A^2 E + A E A + E A^2) + (A E^2 + E A E + E^2 A) + s E,
    /// using E^2 = e_u e_u^T + e_v e_v^T, E^3 = E, s^2 = 1; every term is
    /// confined to rows/columns u and v except the outer product A E A.
    fn update_dense_powers(&mut self, u: usize, v: usize, s: f64) {
        let n = self.n;
        let old_a = self.a.clone();
        let old_a2 = self.a2.clone();
        let track_a3 = matches!(self.h, HKind::Cycle(5) | HKind::Cycle(6));

        if track_a3 {
            for x in 0..n {
                for y in 0..n {
                    let mut delta = 0.0;
                    // s * A^2 E
                    if y == v {
                        delta += s * old_a2[x * n + u];
                    }
                    if y == u {
                        delta += s * old_a2[x * n + v];
                    }
                    // s * E A^2
                    if x == u {
                        delta += s * old_a2[v * n + y];
                    }
                    if x == v {
                        delta += s * old_a2[u * n + y];
                    }
                    // s * A E A
                    delta += s * (old_a[x * n + u] * old_a[v * n + y]
                        + old_a[x * n + v] * old_a[u * n + y]);
                    // A E^2
                    if y == u {
                        delta += old_a[x * n + u];
                    }
                    if y == v {
                        delta += old_a[x * n + v];
                    }
                    // E^2 A
                    if x == u {
                        delta += old_a[u * n + y];
                    }
                    if x == v {
                        delta += old_a[v * n + y];
                    }
                    // E A E
                    if (x == u && y == v) || (x == v && y == u) {
                        delta += old_a[u * n + v];
                    }
                    // s E^3 = s E
                    if (x == u && y == v) || (x == v && y == u) {
                        delta += s;
                    }
                    self.a3[x * n + y] += delta;
                }
            }
        }

        // A'^2: rows/cols u and v only, plus the two diagonal cells.
        for x in 0..n {
            self.a2[x * n + v] += s * old_a[x * n + u];
            self.a2[x * n + u] += s * old_a[x * n + v];
            self.a2[v * n + x] += s * old_a[u * n + x];
            self.a2[u * n + x] += s * old_a[v * n + x];
        }
        self.a2[u * n + u] += 1.0;
        self.a2[v * n + v] += 1.0;

        self.a[u * n + v] += s;
        self.a[v * n + u] += s;
    }

    /// One Glauber update: resample a uniformly chosen pair's edge from its
    /// conditional distribution.
    pub fn step(&mut self) {
        let idx = self.rng.next_below(self.pairs.len() as u64) as usize;
        let (u, v) = self.pairs[idx];
        let delta = self.hamiltonian_delta(u, v);
        let p_present = 1.0 / (1.0 + (-delta).exp());
        let make_present = self.rng.next_f64() < p_present;
        self.apply_flip(u, v, make_present);
        self.steps_taken += 1;
        if self.steps_taken % CHECKSUM_INTERVAL == 0 {
            self.verify_counts();
        }
    }

    /// Incremental counts must match from-scratch recounts exactly (all
    /// maintained quantities are small integers stored exactly in f64).
    fn verify_counts(&self) {
        let mut edges = 0u64;
        let mut triangles = 0i64;
        for &(u, v) in &self.pairs {
            if self.has_edge(u, v) {
                edges += 1;
                triangles += self.common_neighbors(u, v);
            }
        }
        assert_eq!(edges, self.edges, "incremental edge count diverged");
        if matches!(self.h, HKind::Triangle | HKind::Cycle(3)) {
            assert_eq!(triangles / 3, self.triangles, "incremental triangle count diverged");
        }
        if !self.a.is_empty() {
            let n = self.n;
            let mut a = vec![0.0f64; n * n];
            for &(u, v) in &self.pairs {
                if self.has_edge(u, v) {
                    a[u * n + v] = 1.0;
                    a[v * n + u] = 1.0;
                }
            }
            let a2 = dense_mul(&a, &a, n);
            for i in 0..n * n {
                assert_eq!(self.a2[i], a2[i], "incremental A^2 diverged at {i}");
            }
            if matches!(self.h, HKind::Cycle(5) | HKind::Cycle(6)) {
                let a3 = dense_mul(&a2, &a, n);
                for i in 0..n * n {
                    assert_eq!(self.a3[i], a3[i], "incremental A^3 diverged at {i}");
                }
            }
        }
    }

    /// Edge-set bitmask over pair indices, for occupancy bookkeeping at
    /// tiny n (needs C(n,2) <= 64).
    pub fn edge_mask(&self) -> Option<u64> {
        if self.pairs.len() > 64 {
            return None;
        }
        let mut mask = 0u64;
        for (i, &(u, v)) in self.pairs.iter().enumerate() {
            if self.has_edge(u, v) {
                mask |= 1 << i;
            }
        }
        Some(mask)
    }

    /// Snapshot of the current graph.
    pub fn to_graph(&self) -> SmallGraph {
        let edges: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .copied()
            .filter(|&(u, v)| self.has_edge(u, v))
            .collect();
        SmallGraph::new(self.n, edges).expect("chain state is a valid simple graph")
    }
}

fn dense_mul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
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

/// Runs the chain: burn-in, then `steps` recorded sweeps with thinning.
pub fn erg_glauber(params: &McmcParams) -> Result<McmcRun> {
    let mut chain = GlauberChain::new(params)?;
    for _ in 0..params.burn_in {
        chain.step();
    }
    let mut trajectory = Vec::new();
    let mut sum_edge = 0.0;
    let mut sum_hom = 0.0;
    for step in 1..=params.steps {
        chain.step();
        if step % params.thinning == 0 {
            let sample = TrajectorySample {
                step,
                edge_density: chain.edge_density(),
                hom_density: chain.hom_density(),
            };
            trajectory.push(sample);
            sum_edge += sample.edge_density;
            sum_hom += sample.hom_density;
        }
    }
    let count = trajectory.len().max(1) as f64;
    Ok(McmcRun {
        params: params.clone(),
        trajectory,
        mean_edge_density: sum_edge / count,
        mean_hom_density: sum_hom / count,
        final_graph: chain.to_graph(),
    })
}

/// Result of the empirical cut distance to a constant.
#[derive(Debug, Clone, Copy)]
pub struct CutDistanceEstimate {
    pub value: f64,
    /// Exact for n <= 20 (full enumeration of one side); otherwise a
    /// local-search lower bound.
    pub exact: bool,
}

/// `sup_{A,B} |e_G(A,B) - u |A||B|| / n^2` over vertex subsets.
///
/// For fixed `A` the inner objective is separable per vertex, so the
/// optimal `B` follows from per-vertex signs; `A` is enumerated exactly up
/// to n = 20 (Gray-code order keeps the degree table incremental) and
/// attacked by restarted hill climbing beyond that.
pub fn empirical_cut_distance_to_constant(g: &SmallGraph, u: f64) -> CutDistanceEstimate {
    let n = g.n();
    if n == 0 {
        return CutDistanceEstimate { value: 0.0, exact: true };
    }
    if n <= 20 {
        CutDistanceEstimate {
            value: exact_cut_distance(g, u),
            exact: true,
        }
    } else {
        CutDistanceEstimate {
            value: local_search_cut_distance(g, u, 32),
            exact: false,
        }
    }
}

fn best_for_degrees(deg_a: &[i64], a_size: usize, u: f64, n: usize) -> f64 {
    let mut pos = 0.0f64;
    let mut neg = 0.0f64;
    let shift = u * a_size as f64;
    for &d in deg_a.iter().take(n) {
        let s = d as f64 - shift;
        if s > 0.0 {
            pos += s;
        } else {
            neg -= s;
        }
    }
    pos.max(neg)
}

fn exact_cut_distance(g: &SmallGraph, u: f64) -> f64 {
    let n = g.n();
    let mut deg_a = vec![0i64; n];
    let mut in_a = vec![false; n];
    let mut a_size = 0usize;
    let mut best = 0.0f64;
    // Gray-code subset walk: exactly one vertex membership toggles per step.
    for g_idx in 1u64..(1u64 << n) {
        let toggled = (g_idx ^ (g_idx >> 1)) ^ ((g_idx - 1) ^ ((g_idx - 1) >> 1));
        let vertex = toggled.trailing_zeros() as usize;
        let entering = !in_a[vertex];
        in_a[vertex] = entering;
        let delta = if entering { 1 } else { -1 };
        a_size = (a_size as i64 + delta as i64) as usize;
        for b in 0..n {
            if g.has_edge(vertex, b) {
                deg_a[b] += delta;
            }
        }
        let val = best_for_degrees(&deg_a, a_size, u, n);
        if val > best {
            best = val;
        }
    }
    best / (n * n) as f64
}

fn local_search_cut_distance(g: &SmallGraph, u: f64, restarts: usize) -> f64 {
    let n = g.n();
    let mut rng = Xoshiro256::new(0x97C0_D15E);
    let mut best = 0.0f64;
    for _ in 0..restarts {
        let mut in_a: Vec<bool> = (0..n).map(|_| rng.next_f64() < 0.5).collect();
        let mut a_size = in_a.iter().filter(|&&b| b).count();
        let mut deg_a = vec![0i64; n];
        for v in 0..n {
            if in_a[v] {
                for b in 0..n {
                    if g.has_edge(v, b) {
                        deg_a[b] += 1;
                    }
                }
            }
        }
        let mut current = best_for_degrees(&deg_a, a_size, u, n);
        loop {
            let mut improved = false;
            for v in 0..n {
                let delta = if in_a[v] { -1i64 } else { 1 };
                for b in 0..n {
                    if g.has_edge(v, b) {
                        deg_a[b] += delta;
                    }
                }
                let trial_size = (a_size as i64 + delta) as usize;
                let trial = best_for_degrees(&deg_a, trial_size, u, n);
                if trial > current + 1e-15 {
                    in_a[v] = !in_a[v];
                    a_size = trial_size;
                    current = trial;
                    improved = true;
                } else {
                    for b in 0..n {
                        if g.has_edge(v, b) {
                            deg_a[b] -= delta;
                        }
                    }
                }
            }
            if !improved {
                break;
            }
        }
        if current > best {
            best = current;
        }
    }
    best / (n * n) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::erg;

    #[test]
    fn gnp_extremes() {
        let g = sample_gnp(10, 0.0, 1).unwrap();
        assert_eq!(g.edge_count(), 0);
        let g = sample_gnp(10, 1.0, 1).unwrap();
        assert_eq!(g.edge_count(), 45);
    }

    #[test]
    fn gnp_edge_count_concentrates() {
        let n = 200;
        let p = 0.3;
        let m = (n * (n - 1) / 2) as f64;
        let sd = (m * p * (1.0 - p)).sqrt();
        for seed in 0..100 {
            let g = sample_gnp(n, p, seed).unwrap();
            let dev = (g.edge_count() as f64 - m * p).abs();
            assert!(dev <= 4.0 * sd, "seed {seed}: deviation {dev} vs 4 sigma {}", 4.0 * sd);
        }
    }

    #[test]
    fn gnp_is_seed_deterministic() {
        let a = sample_gnp(30, 0.4, 99).unwrap();
        let b = sample_gnp(30, 0.4, 99).unwrap();
        assert_eq!(a.to_edge_list_text(), b.to_edge_list_text());
    }

    #[test]
    fn conditional_tail_trivial_threshold() {
        // r = 0 conditions on everything: mean edge density is p.
        let k3 = SmallGraph::complete(3);
        let rep = exact_conditional_upper_tail(5, 0.3, &k3, 0.0).unwrap();
        assert!((rep.event_probability - 1.0).abs() < 1e-9);
        assert!((rep.conditional_mean_edge_density - 0.3).abs() < 1e-9);
    }

    #[test]
    fn conditional_tail_biases_density_upward_and_monotone() {
        let k3 = SmallGraph::complete(3);
        let rep = exact_conditional_upper_tail(6, 0.2, &k3, 0.5).unwrap();
        assert!(rep.conditional_mean_edge_density > 0.2);
        let mut last = 0.0;
        for i in 1..=7 {
            let r = 0.1 * i as f64;
            let rep = exact_conditional_upper_tail(6, 0.2, &k3, r).unwrap();
            assert!(
                rep.conditional_mean_edge_density >= last - 1e-12,
                "conditional mean decreased at r = {r}"
            );
            last = rep.conditional_mean_edge_density;
        }
    }

    #[test]
    fn conditional_tail_distribution_sums_to_one() {
        let k3 = SmallGraph::complete(3);
        let rep = exact_conditional_upper_tail(5, 0.25, &k3, 0.4).unwrap();
        let total: f64 = rep.conditional_edge_distribution.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn glauber_beta2_zero_matches_logistic_density() {
        let params =
            McmcParams::new(40, HKind::Triangle, 1.0, -1.0, 0.0, 1_000_000, 7).with_thinning(400);
        let run = erg_glauber(&params).unwrap();
        let target = 1.0 / (1.0 + 1f64.exp());
        assert!(
            (run.mean_edge_density - target).abs() < 0.02,
            "mean {} vs logistic {}",
            run.mean_edge_density,
            target
        );
    }

    #[test]
    fn glauber_symmetric_regime_matches_scalar_solver() {
        // gamma = 3 >= d = 2: the chain concentrates near the scalar
        // optimizer u*.
        let params =
            McmcParams::new(40, HKind::Triangle, 1.0, -1.0, 0.5, 1_000_000, 11).with_thinning(400);
        let run = erg_glauber(&params).unwrap();
        let u_star = erg::scalar_maximize(-1.0, 0.5, 3.0).unwrap().maximizers[0];
        assert!(
            (run.mean_edge_density - u_star).abs() < 0.05,
            "mean {} vs u* {}",
            run.mean_edge_density,
            u_star
        );
    }

    #[test]
    fn glauber_detailed_balance_ratio() {
        let params = McmcParams::new(12, HKind::Triangle, 0.8, -0.7, 0.4, 0, 3);
        let mut chain = GlauberChain::new(&params).unwrap();
        let mut rng = Xoshiro256::new(44);
        for _ in 0..200 {
            chain.step();
        }
        for _ in 0..50 {
            let u = rng.next_below(12) as usize;
            let mut v = rng.next_below(12) as usize;
            if u == v {
                v = (v + 1) % 12;
            }
            let delta = chain.hamiltonian_delta(u, v);
            let sigma = |x: f64| 1.0 / (1.0 + (-x).exp());
            let ratio = sigma(delta) / sigma(-delta);
            assert!(
                (ratio - delta.exp()).abs() <= 1e-12 * ratio.abs().max(1.0),
                "balance ratio {ratio} vs exp(delta) {}",
                delta.exp()
            );
        }
    }

    #[test]
    fn glauber_cycle_counts_match_trace_identity() {
        for k in [4usize, 5, 6] {
            let params = McmcParams::new(10, HKind::Cycle(k), 1.0, -0.5, 0.2, 0, 21);
            let mut chain = GlauberChain::new(&params).unwrap();
            for _ in 0..500 {
                chain.step();
            }
            let g = chain.to_graph();
            let expected = crate::graphs::cycle_density_trace(k, &g).unwrap();
            assert!(
                (chain.hom_density() - expected).abs() < 1e-9,
                "k = {k}: {} vs {expected}",
                chain.hom_density()
            );
        }
    }

    #[test]
    fn glauber_trajectories_are_reproducible() {
        let params =
            McmcParams::new(15, HKind::Triangle, 1.0, -0.5, 0.3, 20_000, 5).with_burn_in(1_000);
        let a = erg_glauber(&params).unwrap();
        let b = erg_glauber(&params).unwrap();
        assert_eq!(a.trajectory_csv(), b.trajectory_csv());
        assert_eq!(a.metadata_text(), b.metadata_text());
    }

    #[test]
    fn incremental_checksum_survives_long_runs() {
        // Crosses several checksum intervals; verify_counts panics on drift.
        let params = McmcParams::new(8, HKind::Cycle(5), 1.0, -0.2, 0.3, 0, 9);
        let mut chain = GlauberChain::new(&params).unwrap();
        for _ in 0..25_000 {
            chain.step();
        }
        chain.verify_counts();
    }

    #[test]
    fn cut_distance_near_complete_graph() {
        let g = SmallGraph::complete(8);
        // At u = 1 only the missing diagonal contributes.
        let est = empirical_cut_distance_to_constant(&g, 1.0);
        assert!(est.exact);
        assert!(est.value <= 1.0 / 8.0 + 1e-12);
        // At the true density the distance is small but the diagonal bias
        // remains.
        let density = 7.0 / 8.0;
        let at_density = empirical_cut_distance_to_constant(&g, density);
        assert!(at_density.value <= est.value + 1e-12);
    }

    #[test]
    fn cut_distance_empty_graph() {
        let g = SmallGraph::new(6, vec![]).unwrap();
        let est = empirical_cut_distance_to_constant(&g, 0.0);
        assert_eq!(est.value, 0.0);
        assert!(est.exact);
    }

    #[test]
    fn cut_distance_exact_dominates_sampling() {
        let g = sample_gnp(12, 0.5, 13).unwrap();
        let u = 0.35;
        let exact = empirical_cut_distance_to_constant(&g, u);
        assert!(exact.exact);
        let mut rng = Xoshiro256::new(14);
        let n = g.n();
        for _ in 0..10_000 {
            let a_mask = rng.next_below(1 << n);
            let b_mask = rng.next_below(1 << n);
            let mut val = 0.0;
            let mut a_size = 0.0;
            let mut b_size = 0.0;
            for x in 0..n {
                if a_mask >> x & 1 == 1 {
                    a_size += 1.0;
                }
                if b_mask >> x & 1 == 1 {
                    b_size += 1.0;
                }
            }
            for x in 0..n {
                if a_mask >> x & 1 == 0 {
                    continue;
                }
                for y in 0..n {
                    if b_mask >> y & 1 == 1 && g.has_edge(x, y) {
                        val += 1.0;
                    }
                }
            }
            let objective = (val - u * a_size * b_size).abs() / (n * n) as f64;
            assert!(objective <= exact.value + 1e-12);
        }
    }

    #[test]
    fn cut_distance_local_search_flags_inexact() {
        let g = sample_gnp(25, 0.4, 15).unwrap();
        let est = empirical_cut_distance_to_constant(&g, 0.3);
        assert!(!est.exact);
        assert!(est.value > 0.0);
    }
}
