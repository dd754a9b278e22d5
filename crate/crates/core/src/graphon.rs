//! Finite step-graphon arithmetic.
//!
//! A step graphon is a symmetric \[0,1\]-valued kernel that is constant on
//! the cells of a product partition of \[0,1\]; it is the finite stand-in
//! for a general kernel, and every operation here is an exact weighted sum
//! over blocks.

use crate::error::{Error, Result};
use crate::graphs::SmallGraph;
use crate::linalg;
use crate::rate;
use crate::rng::Xoshiro256;

/// Weight-sum slack accepted by constructors before renormalizing.
const WEIGHT_SUM_TOL: f64 = 1e-9;
/// Entry/symmetry slack accepted before snapping.
const ENTRY_TOL: f64 = 1e-12;
/// Block cap for exact cut-norm enumeration.
const CUT_NORM_MAX_BLOCKS: usize = 12;
/// Cap on `k^{v(H)}` for exact homomorphism-density sums.
const HOM_ENUM_CAP: f64 = 1e8;

/// A step graphon: positive block weights summing to one and a symmetric
/// block-value matrix with entries in \[0,1\].
#[derive(Debug, Clone, PartialEq)]
pub struct StepGraphon {
    weights: Vec<f64>,
    values: Vec<f64>,
}

impl StepGraphon {
    /// Validates and normalizes: weights must be positive and sum to 1
    /// within 1e-9 (then renormalized exactly); the matrix must be
    /// symmetric within 1e-12 (then symmetrized) with entries in \[0,1\]
    /// within 1e-12 (then clamped).
    pub fn new(weights: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let k = weights.len();
        if k == 0 {
            return Err(Error::invalid("step graphon needs at least one block"));
        }
        if values.len() != k * k {
            return Err(Error::invalid(format!(
                "value matrix has {} entries, expected {k}x{k}",
                values.len()
            )));
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::invalid("block weights must be positive"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::invalid(format!(
                "block weights sum to {sum}, outside 1 +- {WEIGHT_SUM_TOL}"
            )));
        }
        let weights: Vec<f64> = weights.iter().map(|w| w / sum).collect();
        let mut m = values;
        for i in 0..k {
            for j in (i + 1)..k {
                let a = m[i * k + j];
                let b = m[j * k + i];
                if (a - b).abs() > ENTRY_TOL {
                    return Err(Error::invalid(format!(
                        "value matrix asymmetric at ({i},{j}): {a} vs {b}"
                    )));
                }
                let avg = 0.5 * (a + b);
                m[i * k + j] = avg;
                m[j * k + i] = avg;
            }
        }
        for v in &mut m {
            if !v.is_finite() || *v < -ENTRY_TOL || *v > 1.0 + ENTRY_TOL {
                return Err(Error::invalid(format!("matrix entry {v} outside [0,1]")));
            }
            *v = v.clamp(0.0, 1.0);
        }
        Ok(StepGraphon { weights, values: m })
    }

    /// One-block constant graphon.
    pub fn constant(c: f64) -> Result<Self> {
        Self::new(vec![1.0], vec![c])
    }

    /// The n-block uniform-weight step graphon of a graph's adjacency
    /// matrix (1 on the cell of each edge, 0 elsewhere).
    pub fn from_graph(g: &SmallGraph) -> Self {
        let n = g.n();
        let mut values = vec![0.0; n * n];
        for u in 0..n {
            for v in 0..n {
                if g.has_edge(u, v) {
                    values[u * n + v] = 1.0;
                }
            }
        }
        StepGraphon {
            weights: vec![1.0 / n as f64; n],
            values,
        }
    }

    /// Random graphon on `k` blocks: Dirichlet-free random positive
    /// weights, symmetric uniform \[0,1\] values.
    pub fn random(rng: &mut Xoshiro256, k: usize) -> Self {
        assert!(k >= 1);
        let raw: Vec<f64> = (0..k).map(|_| rng.next_range(0.2, 1.0)).collect();
        let sum: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / sum).collect();
        let mut values = vec![0.0; k * k];
        for i in 0..k {
            for j in i..k {
                let v = rng.next_f64();
                values[i * k + j] = v;
                values[j * k + i] = v;
            }
        }
        StepGraphon { weights, values }
    }

    pub fn block_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.block_count() + j]
    }

    /// The signed kernel `f - c`.
    pub fn minus_constant(&self, c: f64) -> SignedStepKernel {
        SignedStepKernel {
            weights: self.weights.clone(),
            values: self.values.iter().map(|v| v - c).collect(),
        }
    }

    /// Plain-text serialization: `k`, the `k` weights, then the `k x k`
    /// matrix rows, whitespace-separated.
    pub fn to_text(&self) -> String {
        let k = self.block_count();
        let mut s = format!("{k}\n");
        let ws: Vec<String> = self.weights.iter().map(|w| format!("{w:.17}")).collect();
        s.push_str(&ws.join(" "));
        s.push('\n');
        for i in 0..k {
            let row: Vec<String> = (0..k).map(|j| format!("{:.17}", self.value(i, j))).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses [`Self::to_text`] output, revalidating all invariants.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let k: usize = tokens
            .next()
            .ok_or_else(|| Error::Parse("missing block count".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad block count: {e}")))?;
        let mut take = |what: &str| -> Result<f64> {
            tokens
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {what}")))?
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad {what}: {e}")))
        };
        let weights: Vec<f64> = (0..k)
            .map(|i| take(&format!("weight {i}")))
            .collect::<Result<_>>()?;
        let values: Vec<f64> = (0..k * k)
            .map(|i| take(&format!("matrix entry {i}")))
            .collect::<Result<_>>()?;
        Self::new(weights, values)
    }
}

/// A symmetric signed step kernel (block values of any sign); the input
/// type of the cut norm.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedStepKernel {
    weights: Vec<f64>,
    values: Vec<f64>,
}

impl SignedStepKernel {
    pub fn new(weights: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let k = weights.len();
        if k == 0 || values.len() != k * k {
            return Err(Error::invalid("signed kernel: bad dimensions"));
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::invalid("block weights must be positive"));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::invalid(format!("weights sum to {sum}")));
        }
        let weights: Vec<f64> = weights.iter().map(|w| w / sum).collect();
        let mut m = values;
        for i in 0..k {
            for j in (i + 1)..k {
                if (m[i * k + j] - m[j * k + i]).abs() > ENTRY_TOL {
                    return Err(Error::invalid(format!("asymmetric at ({i},{j})")));
                }
                let avg = 0.5 * (m[i * k + j] + m[j * k + i]);
                m[i * k + j] = avg;
                m[j * k + i] = avg;
            }
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite entry"));
        }
        Ok(SignedStepKernel { weights, values: m })
    }

    /// Random symmetric kernel with entries in \[-1,1\].
    pub fn random(rng: &mut Xoshiro256, k: usize) -> Self {
        let raw: Vec<f64> = (0..k).map(|_| rng.next_range(0.2, 1.0)).collect();
        let sum: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / sum).collect();
        let mut values = vec![0.0; k * k];
        for i in 0..k {
            for j in i..k {
                let v = rng.next_range(-1.0, 1.0);
                values[i * k + j] = v;
                values[j * k + i] = v;
            }
        }
        SignedStepKernel { weights, values }
    }

    pub fn block_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.block_count() + j]
    }
}

impl From<&StepGraphon> for SignedStepKernel {
    fn from(f: &StepGraphon) -> Self {
        SignedStepKernel {
            weights: f.weights.clone(),
            values: f.values.clone(),
        }
    }
}

/// Rate functional `h_p(f) = sum_{i,j} w_i w_j h_p(M_ij)`, the integral of
/// the binomial rate function over the kernel.
pub fn rate_functional(f: &StepGraphon, p: f64) -> Result<f64> {
    rate::rate(0.5, p)?; // validates p
    let k = f.block_count();
    let mut total = 0.0;
    for i in 0..k {
        for j in 0..k {
            total += f.weights[i] * f.weights[j] * rate::rate_unchecked(f.value(i, j), p);
        }
    }
    Ok(total)
}

/// `L^d` norm `(sum w_i w_j M_ij^d)^{1/d}` for integer `d >= 1`.
pub fn lp_norm(f: &StepGraphon, d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::domain("lp_norm: d must be >= 1"));
    }
    let k = f.block_count();
    let mut total = 0.0;
    for i in 0..k {
        for j in 0..k {
            total += f.weights[i] * f.weights[j] * f.value(i, j).powi(d as i32);
        }
    }
    Ok(total.powf(1.0 / d as f64))
}

/// Homomorphism density `t(H, f)`: the exact weighted sum over all maps
/// `V(H) -> blocks` of the product of block values over the edges of `H`.
pub fn hom_density(h: &SmallGraph, f: &StepGraphon) -> Result<f64> {
    let k = f.block_count();
    let v = h.n();
    if (k as f64).powi(v as i32) > HOM_ENUM_CAP {
        return Err(Error::SizeLimit(format!(
            "hom_density needs {k}^{v} assignments, above the {HOM_ENUM_CAP:e} cap"
        )));
    }
    if v == 0 {
        return Ok(1.0);
    }
    let mut back_edges: Vec<Vec<usize>> = vec![Vec::new(); v];
    let mut loops = vec![false; v];
    for &(a, b) in h.edges() {
        if a == b {
            loops[a] = true;
        } else {
            back_edges[a.max(b)].push(a.min(b));
        }
    }
    let mut assign = vec![0usize; v];
    let mut total = 0.0;
    #[allow(clippy::too_many_arguments)]
    fn rec(
        level: usize,
        v: usize,
        f: &StepGraphon,
        back_edges: &[Vec<usize>],
        loops: &[bool],
        assign: &mut [usize],
        partial: f64,
        total: &mut f64,
    ) {
        if level == v {
            *total += partial;
            return;
        }
        for b in 0..f.block_count() {
            let mut factor = f.weights()[b];
            if loops[level] {
                factor *= f.value(b, b);
            }
            for &e in &back_edges[level] {
                factor *= f.value(assign[e], b);
            }
            if factor == 0.0 {
                continue;
            }
            assign[level] = b;
            rec(level + 1, v, f, back_edges, loops, assign, partial * factor, total);
        }
    }
    rec(0, v, f, &back_edges, &loops, &mut assign, 1.0, &mut total);
    Ok(total)
}

/// Exact cut norm `sup_{S,T} |sum_{i in S, j in T} w_i w_j g_ij|`.
///
/// The objective is bilinear in fractional block memberships, so an optimum
/// sits at a vertex of the cube: enumerate `S` and pick the optimal `T`
/// greedily from the sign of each column sum, `O(2^k k^2)`.
pub fn cut_norm(g: &SignedStepKernel) -> Result<f64> {
    let k = g.block_count();
    if k > CUT_NORM_MAX_BLOCKS {
        return Err(Error::SizeLimit(format!(
            "cut_norm enumeration capped at {CUT_NORM_MAX_BLOCKS} blocks, got {k}"
        )));
    }
    let mut best = 0.0f64;
    for s_mask in 1u32..(1 << k) {
        let mut pos = 0.0;
        let mut neg = 0.0;
        for j in 0..k {
            let mut col = 0.0;
            for i in 0..k {
                if s_mask >> i & 1 == 1 {
                    col += g.weights()[i] * g.value(i, j);
                }
            }
            let term = g.weights()[j] * col;
            if term > 0.0 {
                pos += term;
            } else {
                neg += term;
            }
        }
        best = best.max(pos).max(-neg);
    }
    Ok(best)
}

/// Cut distance of a step graphon to the constant `c`; constants are
/// rearrangement-invariant so this is just the cut norm of `f - c`.
pub fn cut_distance_to_constant(f: &StepGraphon, c: f64) -> Result<f64> {
    cut_norm(&f.minus_constant(c))
}

/// Operator norm of the kernel: the largest absolute eigenvalue of the
/// weighted block matrix `D^{1/2} M D^{1/2}`, `D = diag(weights)`.
pub fn operator_norm(f: &StepGraphon) -> f64 {
    weighted_operator_norm(&f.weights, &f.values)
}

/// Operator norm of a signed kernel.
pub fn operator_norm_signed(g: &SignedStepKernel) -> f64 {
    weighted_operator_norm(&g.weights, &g.values)
}

fn weighted_operator_norm(weights: &[f64], values: &[f64]) -> f64 {
    let k = weights.len();
    let root: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let mut m = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            m[i * k + j] = root[i] * values[i * k + j] * root[j];
        }
    }
    linalg::jacobi_eigenvalues(m, k)
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max)
}
