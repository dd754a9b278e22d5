//! Linear k-uniform hypergraphs and step k-kernels.
//!
//! Linearity (any two vertices share at most one hyperedge) is what makes
//! the density of a fixed hypergraph behave like the graph case, and the
//! phase criterion for d-regular linear hypergraphs is the same minorant
//! condition in `d` — the uniformity `k` never enters the boundary.

use crate::error::{Error, Result};
use crate::phase::{self, TailVerdict};
use crate::rate;
use crate::rng::Xoshiro256;

/// Block cap for dense step k-kernels.
const MAX_BLOCKS: usize = 4;
/// Arity cap for dense step k-kernels.
const MAX_ARITY: usize = 4;
/// Cap on `blocks^{v(H)}` for exact density sums.
const HOM_ENUM_CAP: f64 = 1e8;
const WITNESS_MARGIN: f64 = 1e-12;

/// A k-uniform linear hypergraph.
#[derive(Debug, Clone)]
pub struct LinearHypergraph {
    k: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl LinearHypergraph {
    /// Validates uniformity (every edge has exactly `k` distinct in-range
    /// vertices) and linearity (no two edges share two vertices).
    pub fn new(k: usize, n: usize, hyperedges: Vec<Vec<usize>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid(format!("uniformity k = {k} must be >= 2")));
        }
        let mut edges = Vec::with_capacity(hyperedges.len());
        let mut pair_seen = std::collections::HashSet::new();
        for (idx, edge) in hyperedges.into_iter().enumerate() {
            if edge.len() != k {
                return Err(Error::invalid(format!(
                    "hyperedge {idx} has {} vertices, expected {k}",
                    edge.len()
                )));
            }
            let mut sorted = edge;
            sorted.sort_unstable();
            if sorted.iter().any(|&v| v >= n) {
                return Err(Error::invalid(format!("hyperedge {idx} has an out-of-range vertex")));
            }
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("hyperedge {idx} repeats a vertex")));
            }
            for a in 0..k {
                for b in (a + 1)..k {
                    if !pair_seen.insert((sorted[a], sorted[b])) {
                        return Err(Error::invalid(format!(
                            "vertices {} and {} share two hyperedges (not linear)",
                            sorted[a], sorted[b]
                        )));
                    }
                }
            }
            edges.push(sorted);
        }
        Ok(LinearHypergraph { k, n, edges })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `Some(d)` when every vertex is incident to exactly `d` hyperedges.
    pub fn is_d_regular(&self) -> Option<usize> {
        let counts = self.incidence_counts();
        let d = *counts.first()?;
        counts.iter().all(|&c| c == d).then_some(d)
    }

    /// Maximum vertex degree (incidence count).
    pub fn max_degree(&self) -> usize {
        self.incidence_counts().into_iter().max().unwrap_or(0)
    }

    fn incidence_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n];
        for edge in &self.edges {
            for &v in edge {
                counts[v] += 1;
            }
        }
        counts
    }

    /// The Fano plane: 7 points, 7 lines, 3-uniform, 3-regular, linear.
    pub fn fano_plane() -> Self {
        let lines = vec![
            vec![0, 1, 2],
            vec![0, 3, 4],
            vec![0, 5, 6],
            vec![1, 3, 5],
            vec![1, 4, 6],
            vec![2, 3, 6],
            vec![2, 4, 5],
        ];
        Self::new(3, 7, lines).expect("fano plane is linear")
    }

    /// The 3-uniform loose cycle with `m` edges on `2m` vertices:
    /// consecutive edges overlap in exactly one vertex. Linear, but not
    /// regular (overlap vertices have degree 2, the rest degree 1).
    pub fn loose_cycle(m: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::invalid("loose cycle needs at least 3 edges"));
        }
        let n = 2 * m;
        let edges = (0..m).map(|i| vec![2 * i, 2 * i + 1, (2 * i + 2) % n]).collect();
        Self::new(3, n, edges)
    }

    /// The 3-uniform tight cycle `{i, i+1, i+2}` on `n` vertices. Not
    /// linear for n >= 4 (consecutive edges share two vertices), so this
    /// returns the validator error; kept as a rejection fixture.
    pub fn tight_cycle(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::invalid("tight cycle fixture needs n >= 4"));
        }
        let edges = (0..n).map(|i| vec![i, (i + 1) % n, (i + 2) % n]).collect();
        Self::new(3, n, edges)
    }

    /// The Pasch configuration: 6 points, 4 triples, 2-regular and linear —
    /// the smallest 2-regular 3-uniform linear hypergraph (the cyclic
    /// d = 2 instance).
    pub fn pasch() -> Self {
        let edges = vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 0], vec![1, 3, 5]];
        Self::new(3, 6, edges).expect("pasch configuration is linear")
    }

    /// Hyperedge-list text: `k n m` header, then `m` lines of `k` indices.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.k, self.n, self.edges.len());
        for edge in &self.edges {
            let row: Vec<String> = edge.iter().map(|v| v.to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses [`Self::to_text`] output, revalidating all invariants.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let mut next = |what: &str| -> Result<usize> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))?
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad {what}: {e}")))
        };
        let k = next("uniformity")?;
        let n = next("vertex count")?;
        let m = next("edge count")?;
        let mut edges = Vec::with_capacity(m);
        for i in 0..m {
            let edge: Vec<usize> = (0..k)
                .map(|j| next(&format!("edge {i} vertex {j}")))
                .collect::<Result<_>>()?;
            edges.push(edge);
        }
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing tokens after hyperedge list".into()));
        }
        Self::new(k, n, edges)
    }
}

/// A step k-kernel: block weights plus a dense symmetric k-tensor of
/// values in \[0,1\] (symmetric under every permutation of its coordinates).
#[derive(Debug, Clone)]
pub struct StepKernelK {
    arity: usize,
    weights: Vec<f64>,
    values: Vec<f64>,
}

impl StepKernelK {
    /// Validates weights as for graphons and enforces full permutation
    /// symmetry (entries within 1e-12 of their orbit mean, then snapped).
    pub fn new(arity: usize, weights: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if !(2..=MAX_ARITY).contains(&arity) {
            return Err(Error::invalid(format!("arity {arity} outside 2..={MAX_ARITY}")));
        }
        let b = weights.len();
        if b == 0 || b > MAX_BLOCKS {
            return Err(Error::invalid(format!("block count {b} outside 1..={MAX_BLOCKS}")));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::invalid("block weights must be positive"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!("weights sum to {sum}")));
        }
        let weights: Vec<f64> = weights.iter().map(|w| w / sum).collect();
        let total = b.pow(arity as u32);
        if values.len() != total {
            return Err(Error::invalid(format!(
                "tensor has {} entries, expected {b}^{arity}",
                values.len()
            )));
        }
        let mut values = values;
        // Symmetrize over coordinate permutations via sorted representatives.
        let mut orbit_sum = std::collections::HashMap::new();
        let mut orbit_count = std::collections::HashMap::new();
        for (flat, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < -1e-12 || v > 1.0 + 1e-12 {
                return Err(Error::invalid(format!("tensor entry {v} outside [0,1]")));
            }
            let key = sorted_index(flat, b, arity);
            *orbit_sum.entry(key.clone()).or_insert(0.0) += v;
            *orbit_count.entry(key).or_insert(0usize) += 1;
        }
        for (flat, v) in values.iter_mut().enumerate() {
            let key = sorted_index(flat, b, arity);
            let mean = orbit_sum[&key] / orbit_count[&key] as f64;
            if (*v - mean).abs() > 1e-12 {
                return Err(Error::invalid(format!(
                    "tensor breaks permutation symmetry at flat index {flat}"
                )));
            }
            *v = mean.clamp(0.0, 1.0);
        }
        Ok(StepKernelK {
            arity,
            weights,
            values,
        })
    }

    pub fn constant(arity: usize, c: f64) -> Result<Self> {
        Self::new(arity, vec![1.0], vec![c])
    }

    /// Random symmetric kernel on `b` blocks.
    pub fn random(rng: &mut Xoshiro256, arity: usize, b: usize) -> Self {
        let raw: Vec<f64> = (0..b).map(|_| rng.next_range(0.2, 1.0)).collect();
        let sum: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / sum).collect();
        let total = b.pow(arity as u32);
        let mut values = vec![f64::NAN; total];
        for flat in 0..total {
            let key = sorted_index(flat, b, arity);
            let rep = flat_of_index(&key, b);
            if values[rep].is_nan() {
                values[rep] = rng.next_f64();
            }
            values[flat] = values[rep];
        }
        StepKernelK {
            arity,
            weights,
            values,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn block_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Tensor value at a multi-index (order irrelevant by symmetry).
    pub fn value(&self, index: &[usize]) -> f64 {
        self.values[flat_of_index(index, self.block_count())]
    }

    /// `L^d` norm `(sum prod(w) value^d)^{1/d}`.
    pub fn lp_norm(&self, d: u32) -> Result<f64> {
        if d == 0 {
            return Err(Error::domain("lp_norm: d must be >= 1"));
        }
        let b = self.block_count();
        let total = b.pow(self.arity as u32);
        let mut acc = 0.0;
        for flat in 0..total {
            acc += self.tuple_weight(flat, b) * self.values[flat].powi(d as i32);
        }
        Ok(acc.powf(1.0 / d as f64))
    }

    fn tuple_weight(&self, flat: usize, b: usize) -> f64 {
        let mut rem = flat;
        let mut w = 1.0;
        for _ in 0..self.arity {
            w *= self.weights[rem % b];
            rem /= b;
        }
        w
    }

    /// Plain-text serialization: `arity blocks`, the weights, then the
    /// dense tensor in flat little-endian index order.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.arity, self.block_count());
        let ws: Vec<String> = self.weights.iter().map(|w| format!("{w:.17}")).collect();
        s.push_str(&ws.join(" "));
        s.push('\n');
        let vs: Vec<String> = self.values.iter().map(|v| format!("{v:.17}")).collect();
        s.push_str(&vs.join(" "));
        s.push('\n');
        s
    }
}

fn sorted_index(flat: usize, b: usize, arity: usize) -> Vec<usize> {
    let mut rem = flat;
    let mut idx = Vec::with_capacity(arity);
    for _ in 0..arity {
        idx.push(rem % b);
        rem /= b;
    }
    idx.sort_unstable();
    idx
}

fn flat_of_index(index: &[usize], b: usize) -> usize {
    let mut flat = 0;
    for &i in index.iter().rev() {
        flat = flat * b + i;
    }
    flat
}

/// Homomorphism density `t(H, f)` of a k-uniform hypergraph against a step
/// k-kernel: the exact weighted sum over block assignments of the product
/// of tensor values over the hyperedges.
pub fn hom_density_hyper(h: &LinearHypergraph, f: &StepKernelK) -> Result<f64> {
    if h.k() != f.arity() {
        return Err(Error::invalid(format!(
            "uniformity mismatch: hypergraph k = {}, kernel arity = {}",
            h.k(),
            f.arity()
        )));
    }
    let b = f.block_count();
    let v = h.n();
    if (b as f64).powi(v as i32) > HOM_ENUM_CAP {
        return Err(Error::SizeLimit(format!(
            "hyper density needs {b}^{v} assignments, above the {HOM_ENUM_CAP:e} cap"
        )));
    }
    // Edges become evaluable once their highest vertex is assigned.
    let mut edges_by_peak: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); v.max(1)];
    for edge in h.edges() {
        let peak = *edge.iter().max().expect("edges are nonempty");
        edges_by_peak[peak].push(edge);
    }
    let mut assign = vec![0usize; v];
    let mut total = 0.0;
    #[allow(clippy::too_many_arguments)]
    fn rec(
        level: usize,
        v: usize,
        f: &StepKernelK,
        edges_by_peak: &[Vec<&Vec<usize>>],
        assign: &mut [usize],
        partial: f64,
        total: &mut f64,
        scratch: &mut Vec<usize>,
    ) {
        if level == v {
            *total += partial;
            return;
        }
        for block in 0..f.block_count() {
            assign[level] = block;
            let mut factor = f.weights()[block];
            for edge in &edges_by_peak[level] {
                scratch.clear();
                scratch.extend(edge.iter().map(|&u| assign[u]));
                factor *= f.value(scratch);
                if factor == 0.0 {
                    break;
                }
            }
            if factor == 0.0 {
                continue;
            }
            rec(level + 1, v, f, edges_by_peak, assign, partial * factor, total, scratch);
        }
    }
    let mut scratch = Vec::with_capacity(h.k());
    rec(0, v, f, &edges_by_peak, &mut assign, 1.0, &mut total, &mut scratch);
    Ok(total)
}

/// Rate functional over a step k-kernel:
/// `sum over block tuples of prod(weights) h_p(value)`.
pub fn rate_functional_k(f: &StepKernelK, p: f64) -> Result<f64> {
    rate::rate(0.5, p)?; // validates p
    let b = f.block_count();
    let total = b.pow(f.arity() as u32);
    let mut acc = 0.0;
    for flat in 0..total {
        acc += f.tuple_weight(flat, b) * rate::rate_unchecked(f.values[flat], p);
    }
    Ok(acc)
}

/// Upper-tail verdict for d-regular k-uniform linear hypergraph densities:
/// the same minorant criterion as the graph case — `k` plays no role in
/// the boundary.
pub fn classify_upper_tail_hyper(d: usize, k: usize, p: f64, r: f64) -> Result<TailVerdict> {
    if k < 2 {
        return Err(Error::domain(format!("uniformity k = {k} must be >= 2")));
    }
    phase::classify_upper_tail_verdict(d, p, r)
}

/// The hypergraph three-block witness.
///
/// Blocks (I1, I0, I2) with weights `(a, 1-a-b, b)`; the tensor takes
/// value `r1` on tuples with exactly one coordinate in I1 and the rest in
/// I0, `r2` with exactly one coordinate in I2 and the rest in I0, and `r`
/// everywhere else.
#[derive(Debug, Clone)]
pub struct HyperBreakWitness {
    pub kernel: StepKernelK,
    pub epsilon: f64,
    pub r1: f64,
    pub r2: f64,
    pub s: f64,
    pub t_value: f64,
    pub hp_value: f64,
    pub target_t: f64,
    pub target_hp: f64,
}

impl HyperBreakWitness {
    /// Kernel text block followed by the construction key-value block.
    pub fn to_report_text(&self) -> String {
        let mut s = self.kernel.to_text();
        s.push_str(&format!("epsilon,{:.17}\n", self.epsilon));
        s.push_str(&format!("r1,{:.17}\n", self.r1));
        s.push_str(&format!("r2,{:.17}\n", self.r2));
        s.push_str(&format!("s,{:.17}\n", self.s));
        s.push_str(&format!("t_value,{:.17}\n", self.t_value));
        s.push_str(&format!("target_t,{:.17}\n", self.target_t));
        s.push_str(&format!("hp_value,{:.17}\n", self.hp_value));
        s.push_str(&format!("target_hp,{:.17}\n", self.target_hp));
        s
    }
}

/// Builds the witness for a linear d-regular k-uniform `h` at `(p, r)`
/// strictly inside the breaking region for `d`, searching the epsilon
/// schedule for the first entry where both inequalities hold strictly.
pub fn build_hyper_break_witness(
    h: &LinearHypergraph,
    p: f64,
    r: f64,
    eps_schedule: &[f64],
) -> Result<HyperBreakWitness> {
    let d = h
        .is_d_regular()
        .filter(|&d| d >= 2)
        .ok_or_else(|| Error::invalid("hypergraph witness needs a d-regular hypergraph, d >= 2"))?;
    if !(0.0 < p && p <= r && r < 1.0) {
        return Err(Error::domain(format!("need 0 < p <= r < 1, got ({p}, {r})")));
    }
    let curve = crate::rate::GammaCurve::new(p, d as f64)?;
    let tangent = crate::minorant::double_tangent(&curve)?.ok_or_else(|| {
        Error::invalid(format!("(p, r) = ({p}, {r}) is on the minorant at d = {d}"))
    })?;
    if !(tangent.q_lo < r && r < tangent.q_hi) {
        return Err(Error::invalid(format!(
            "(p, r) = ({p}, {r}) is on the minorant at d = {d}"
        )));
    }
    let (r1, r2) = (tangent.q_lo, tangent.q_hi);
    let di = d as i32;
    let s = (r2.powi(di) - r.powi(di)) / (r2.powi(di) - r1.powi(di));
    let target_t = r.powi(h.edge_count() as i32);
    let target_hp = rate::rate(r, p)?;
    let mut last_defects = (f64::NAN, f64::NAN);
    for &eps in eps_schedule {
        let a = s * eps * eps;
        let b = (1.0 - s) * eps * eps + eps.powi(3);
        if a <= 0.0 || b <= 0.0 || a + b >= 0.5 {
            continue;
        }
        let kernel = witness_kernel(h.k(), a, b, r, r1, r2)?;
        let t_value = hom_density_hyper(h, &kernel)?;
        let hp_value = rate_functional_k(&kernel, p)?;
        if t_value > target_t + WITNESS_MARGIN && hp_value < target_hp - WITNESS_MARGIN {
            return Ok(HyperBreakWitness {
                kernel,
                epsilon: eps,
                r1,
                r2,
                s,
                t_value,
                hp_value,
                target_t,
                target_hp,
            });
        }
        last_defects = (t_value - target_t, hp_value - target_hp);
    }
    Err(Error::WitnessSearch(format!(
        "epsilon schedule exhausted at (p, r) = ({p}, {r}), d = {d}, k = {}; \
         last defects: t - target = {:.3e}, hp - target = {:.3e}",
        h.k(),
        last_defects.0,
        last_defects.1
    )))
}

fn witness_kernel(k: usize, a: f64, b: f64, r: f64, r1: f64, r2: f64) -> Result<StepKernelK> {
    let blocks = 3usize;
    let total = blocks.pow(k as u32);
    let mut values = vec![0.0; total];
    for (flat, slot) in values.iter_mut().enumerate() {
        let mut rem = flat;
        let mut in_i1 = 0;
        let mut in_i0 = 0;
        let mut in_i2 = 0;
        for _ in 0..k {
            match rem % blocks {
                0 => in_i1 += 1,
                1 => in_i0 += 1,
                _ => in_i2 += 1,
            }
            rem /= blocks;
        }
        *slot = if in_i1 == 1 && in_i0 == k - 1 {
            r1
        } else if in_i2 == 1 && in_i0 == k - 1 {
            r2
        } else {
            r
        };
    }
    StepKernelK::new(k, vec![a, 1.0 - a - b, b], values)
}

/// Two-sided report of `t(H, f) <= ||f||_d^{e(H)}` for max degree `d`.
#[derive(Debug, Clone, Copy)]
pub struct HyperHolderReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn hyper_holder_check(h: &LinearHypergraph, f: &StepKernelK) -> Result<HyperHolderReport> {
    let d = h.max_degree().max(1) as u32;
    let lhs = hom_density_hyper(h, f)?;
    let rhs = f.lp_norm(d)?.powi(h.edge_count() as i32);
    Ok(HyperHolderReport {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-12,
    })
}
