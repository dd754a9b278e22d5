//! Upper-tail phase classification and constructive symmetry-breaking
//! witnesses.
//!
//! The verdict for a d-regular subgraph upper tail at `(p, r)` depends only
//! on whether `(r^d, h_p(r))` lies on the convex minorant of the curve
//! `x -> h_p(x^{1/d})`. On the minorant the conditioned graph looks like a
//! constant-density random graph with rate `h_p(r)`; strictly off it, a
//! three-block step graphon beats the symmetric rate while overshooting the
//! density threshold, and that graphon is returned as a checkable witness.

use crate::error::{Error, Result};
use crate::graphon::{self, StepGraphon};
use crate::graphs::SmallGraph;
use crate::minorant::{double_tangent, DoubleTangent};
use crate::rate::{self, GammaCurve};
use crate::solve::bisect;

/// Width of the boundary verdict band, in `q`-coordinates.
const BOUNDARY_BAND: f64 = 1e-9;
/// Strictness margin demanded from both witness inequalities.
const WITNESS_MARGIN: f64 = 1e-12;

/// Witness-free verdict of the minorant criterion, shared by the graph and
/// hypergraph classifiers (the criterion depends only on `d`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailVerdict {
    ReplicaSymmetric { rate: f64 },
    Boundary { rate: f64 },
    SymmetryBreaking { symmetric_rate: f64 },
}

impl TailVerdict {
    pub fn verdict_name(&self) -> &'static str {
        match self {
            TailVerdict::ReplicaSymmetric { .. } => "ReplicaSymmetric",
            TailVerdict::Boundary { .. } => "Boundary",
            TailVerdict::SymmetryBreaking { .. } => "SymmetryBreaking",
        }
    }

    pub fn is_breaking(&self) -> bool {
        matches!(self, TailVerdict::SymmetryBreaking { .. })
    }
}

/// The minorant-criterion verdict at `(p, r)` for exponent `d`, without
/// constructing any witness.
pub fn classify_upper_tail_verdict(d: usize, p: f64, r: f64) -> Result<TailVerdict> {
    if d < 2 {
        return Err(Error::domain(format!("classify verdict: d = {d} must be >= 2")));
    }
    check_p_r_upper(p, r)?;
    let curve = GammaCurve::new(p, d as f64)?;
    let rate = rate::rate(r, p)?;
    let Some(t) = double_tangent(&curve)? else {
        return Ok(TailVerdict::ReplicaSymmetric { rate });
    };
    if (r - t.q_lo).abs() <= BOUNDARY_BAND || (t.q_hi - r).abs() <= BOUNDARY_BAND {
        return Ok(TailVerdict::Boundary { rate });
    }
    if t.q_lo < r && r < t.q_hi {
        Ok(TailVerdict::SymmetryBreaking { symmetric_rate: rate })
    } else {
        Ok(TailVerdict::ReplicaSymmetric { rate })
    }
}

/// Verdict for one upper-tail point.
#[derive(Debug, Clone)]
pub enum PhaseClassification {
    /// On the minorant: the rate is the symmetric value `h_p(r)`.
    ReplicaSymmetric { rate: f64 },
    /// Within the boundary band of the touch points.
    Boundary { rate: f64 },
    /// Strictly inside the breaking region, with a verified witness whose
    /// rate functional is a strictly better upper bound than `h_p(r)`.
    SymmetryBreaking {
        symmetric_rate: f64,
        witness: BreakWitness,
    },
}

impl PhaseClassification {
    pub fn verdict_name(&self) -> &'static str {
        match self {
            PhaseClassification::ReplicaSymmetric { .. } => "ReplicaSymmetric",
            PhaseClassification::Boundary { .. } => "Boundary",
            PhaseClassification::SymmetryBreaking { .. } => "SymmetryBreaking",
        }
    }

    pub fn is_breaking(&self) -> bool {
        matches!(self, PhaseClassification::SymmetryBreaking { .. })
    }

    pub fn witness(&self) -> Option<&BreakWitness> {
        match self {
            PhaseClassification::SymmetryBreaking { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

/// The three-block construction `f_eps` with its verified strict
/// inequalities: `t(H, f) > r^{e(H)}` and `h_p(f) < h_p(r)`.
///
/// Blocks are ordered (I1, I0, I2) with weights `(a, 1-a-b, b)`,
/// `a = s eps^2`, `b = (1-s) eps^2 + eps^3`; the kernel takes the value
/// `r1` between I1 and I0, `r2` between I0 and I2, and `r` elsewhere.
#[derive(Debug, Clone)]
pub struct BreakWitness {
    pub graphon: StepGraphon,
    pub epsilon: f64,
    pub r1: f64,
    pub r2: f64,
    pub s: f64,
    pub t_value: f64,
    pub hp_value: f64,
    pub target_t: f64,
    pub target_hp: f64,
}

impl BreakWitness {
    /// Witness report: the step-graphon text block followed by a key-value
    /// block with the construction parameters and both inequality sides.
    pub fn to_report_text(&self) -> String {
        let mut s = self.graphon.to_text();
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

    /// Re-verifies both strict inequalities through fresh graphon calls.
    pub fn reverify(&self, h: &SmallGraph, p: f64) -> Result<bool> {
        let t = graphon::hom_density(h, &self.graphon)?;
        let hp = graphon::rate_functional(&self.graphon, p)?;
        Ok(t > self.target_t + WITNESS_MARGIN && hp < self.target_hp - WITNESS_MARGIN)
    }
}

/// Default epsilon schedule: geometric from 1/8 down to ~1e-12 with ratio
/// 0.85. Both witness defects scale like powers of epsilon with known
/// signs, so some small epsilon always works strictly inside the region;
/// near the boundary the window of epsilons that clear the 1e-12 margins
/// narrows below a factor of 2, which is why the ratio is finer than the
/// obvious halving schedule.
pub fn default_eps_schedule() -> Vec<f64> {
    (0..160).map(|j| 0.125 * 0.85f64.powi(j)).collect()
}

/// A small d-regular graph to witness with when the caller supplies none:
/// K3 for d = 2, K4 for d = 3, and circulants on d+2 (d even) or d+3
/// (d odd, adding the antipodal offset) vertices beyond that.
pub fn default_regular_graph(d: usize) -> Result<SmallGraph> {
    match d {
        0 | 1 => Err(Error::domain(format!("no default regular graph for d = {d}"))),
        2 => Ok(SmallGraph::complete(3)),
        3 => Ok(SmallGraph::complete(4)),
        d if d % 2 == 0 => {
            let offsets: Vec<usize> = (1..=d / 2).collect();
            SmallGraph::circulant(d + 2, &offsets)
        }
        d => {
            let n = d + 3;
            let mut offsets: Vec<usize> = (1..=(d - 1) / 2).collect();
            offsets.push(n / 2);
            SmallGraph::circulant(n, &offsets)
        }
    }
}

/// Classifies the upper tail of d-regular subgraph counts at `(p, r)`.
///
/// `h`, when given, must be d-regular and is used for the witness; verdicts
/// depend only on `d`. Points within `1e-9` (in `q`) of a touch point are
/// reported as `Boundary`.
pub fn classify_upper_tail(
    d: usize,
    p: f64,
    r: f64,
    h: Option<&SmallGraph>,
) -> Result<PhaseClassification> {
    if d < 2 {
        return Err(Error::domain(format!("classify_upper_tail: d = {d} must be >= 2")));
    }
    check_p_r_upper(p, r)?;
    if let Some(h) = h {
        if h.is_d_regular() != Some(d) {
            return Err(Error::invalid(format!(
                "supplied subgraph is not {d}-regular (the phase boundary for non-regular \
                 graphs is not classified)"
            )));
        }
    }
    let curve = GammaCurve::new(p, d as f64)?;
    let symmetric_rate = rate::rate(r, p)?;
    let tangent = double_tangent(&curve)?;
    let Some(t) = tangent else {
        return Ok(PhaseClassification::ReplicaSymmetric { rate: symmetric_rate });
    };
    if (r - t.q_lo).abs() <= BOUNDARY_BAND || (t.q_hi - r).abs() <= BOUNDARY_BAND {
        return Ok(PhaseClassification::Boundary { rate: symmetric_rate });
    }
    if !(t.q_lo < r && r < t.q_hi) {
        return Ok(PhaseClassification::ReplicaSymmetric { rate: symmetric_rate });
    }
    let default_h;
    let h = match h {
        Some(h) => h,
        None => {
            default_h = default_regular_graph(d)?;
            &default_h
        }
    };
    let witness = build_witness_from_tangent(h, p, r, &t, &default_eps_schedule())?;
    Ok(PhaseClassification::SymmetryBreaking {
        symmetric_rate,
        witness,
    })
}

fn check_p_r_upper(p: f64, r: f64) -> Result<()> {
    if !(0.0 < p && p <= r && r < 1.0) {
        return Err(Error::domain(format!(
            "upper tail needs 0 < p <= r < 1, got p = {p}, r = {r}"
        )));
    }
    Ok(())
}

/// Builds the three-block witness for a d-regular `h` at a point `(p, r)`
/// strictly inside the breaking region, trying each epsilon in the schedule
/// and returning at the first one where both inequalities hold strictly.
pub fn build_break_witness(
    h: &SmallGraph,
    p: f64,
    r: f64,
    eps_schedule: &[f64],
) -> Result<BreakWitness> {
    check_p_r_upper(p, r)?;
    let d = h
        .is_d_regular()
        .filter(|&d| d >= 2)
        .ok_or_else(|| Error::invalid("witness graph must be d-regular with d >= 2"))?;
    let curve = GammaCurve::new(p, d as f64)?;
    let tangent = double_tangent(&curve)?.ok_or_else(|| {
        Error::invalid(format!(
            "(p, r) = ({p}, {r}) has a convex curve at d = {d}; the point is on the minorant \
             and no witness exists"
        ))
    })?;
    if !(tangent.q_lo < r && r < tangent.q_hi) {
        return Err(Error::invalid(format!(
            "(p, r) = ({p}, {r}) lies on the convex minorant at d = {d}; no witness exists"
        )));
    }
    build_witness_from_tangent(h, p, r, &tangent, eps_schedule)
}

fn build_witness_from_tangent(
    h: &SmallGraph,
    p: f64,
    r: f64,
    tangent: &DoubleTangent,
    eps_schedule: &[f64],
) -> Result<BreakWitness> {
    let d = h.is_d_regular().expect("checked by callers") as i32;
    // The touch chord is the minorant over the whole window, so it passes
    // strictly below (r^d, h_p(r)) for every interior r.
    let r1 = tangent.q_lo;
    let r2 = tangent.q_hi;
    let s = (r2.powi(d) - r.powi(d)) / (r2.powi(d) - r1.powi(d));
    debug_assert!(0.0 < s && s < 1.0);
    let target_t = r.powi(h.edge_count() as i32);
    let target_hp = rate::rate(r, p)?;
    let mut last_defects = (f64::NAN, f64::NAN);
    for &eps in eps_schedule {
        let a = s * eps * eps;
        let b = (1.0 - s) * eps * eps + eps * eps * eps;
        if a <= 0.0 || b <= 0.0 || a + b >= 0.5 {
            continue;
        }
        let graphon = witness_graphon(a, b, r, r1, r2)?;
        let t_value = graphon::hom_density(h, &graphon)?;
        let hp_value = graphon::rate_functional(&graphon, p)?;
        if t_value > target_t + WITNESS_MARGIN && hp_value < target_hp - WITNESS_MARGIN {
            return Ok(BreakWitness {
                graphon,
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
        "epsilon schedule exhausted at (p, r) = ({p}, {r}), d = {d}; \
         last defects: t - target = {:.3e}, hp - target = {:.3e}",
        last_defects.0, last_defects.1
    )))
}

fn witness_graphon(a: f64, b: f64, r: f64, r1: f64, r2: f64) -> Result<StepGraphon> {
    let weights = vec![a, 1.0 - a - b, b];
    let values = vec![r, r1, r, r1, r, r2, r, r2, r];
    StepGraphon::new(weights, values)
}

/// Spectral-radius upper-tail classification; the boundary coincides with
/// the d = 2 subgraph case, and breaking witnesses use the same
/// construction (certified separately by [`spectral_break_certificate`]).
pub fn classify_spectral(p: f64, r: f64) -> Result<PhaseClassification> {
    classify_upper_tail(2, p, r, None)
}

/// An eigenvector-style certificate that the witness kernel has operator
/// norm strictly above `r`: a block-constant test function `u` with
/// `(T_f u) > r u` pointwise.
#[derive(Debug, Clone)]
pub struct SpectralCertificate {
    pub witness: BreakWitness,
    /// Test-vector values on blocks (I1, I0, I2).
    pub u: [f64; 3],
    /// The blockwise action `(T_f u)` on the same blocks.
    pub t_u: [f64; 3],
    pub operator_norm: f64,
    pub r: f64,
}

/// Builds the d = 2 witness together with the certificate vector
/// `u = ((1-a-b) r1, r, (1-a-b) r2)` and verifies `(T_f u) > r u` blockwise
/// and `operator_norm(f) > r`.
pub fn spectral_break_certificate(p: f64, r: f64) -> Result<SpectralCertificate> {
    check_p_r_upper(p, r)?;
    let curve = GammaCurve::new(p, 2.0)?;
    let tangent = double_tangent(&curve)?.ok_or_else(|| {
        Error::invalid(format!("(p, r) = ({p}, {r}) is not in the spectral breaking region"))
    })?;
    if !(tangent.q_lo < r && r < tangent.q_hi) {
        return Err(Error::invalid(format!(
            "(p, r) = ({p}, {r}) is not in the spectral breaking region"
        )));
    }
    let (r1, r2) = (tangent.q_lo, tangent.q_hi);
    let s = (r2 * r2 - r * r) / (r2 * r2 - r1 * r1);
    let target_hp = rate::rate(r, p)?;
    for &eps in &default_eps_schedule() {
        let a = s * eps * eps;
        let b = (1.0 - s) * eps * eps + eps * eps * eps;
        if a <= 0.0 || b <= 0.0 || a + b >= 0.5 {
            continue;
        }
        let graphon = witness_graphon(a, b, r, r1, r2)?;
        let hp_value = graphon::rate_functional(&graphon, p)?;
        let core = 1.0 - a - b;
        let u = [core * r1, r, core * r2];
        let weights = [a, core, b];
        let mut t_u = [0.0f64; 3];
        for (i, out) in t_u.iter_mut().enumerate() {
            *out = (0..3).map(|j| weights[j] * graphon.value(i, j) * u[j]).sum();
        }
        let strictly_expands = (0..3).all(|i| t_u[i] > r * u[i]);
        let op = graphon::operator_norm(&graphon);
        if strictly_expands && op > r && hp_value < target_hp - WITNESS_MARGIN {
            let k3 = SmallGraph::complete(3);
            let t_value = graphon::hom_density(&k3, &graphon)?;
            return Ok(SpectralCertificate {
                witness: BreakWitness {
                    graphon,
                    epsilon: eps,
                    r1,
                    r2,
                    s,
                    t_value,
                    hp_value,
                    target_t: r.powi(3),
                    target_hp,
                },
                u,
                t_u,
                operator_norm: op,
                r,
            });
        }
    }
    Err(Error::WitnessSearch(format!(
        "spectral certificate schedule exhausted at (p, r) = ({p}, {r})"
    )))
}

/// Lower-tail verdict for bipartite graphs with a verified density lower
/// bound (trees, even cycles, complete bipartite graphs): always replica
/// symmetric, no search needed. Other graphs are refused rather than
/// guessed at.
pub fn lower_tail_sidorenko_note(h: &SmallGraph, p: f64, r: f64) -> Result<PhaseClassification> {
    if !(0.0 < r && r <= p && p < 1.0) {
        return Err(Error::domain(format!(
            "lower tail needs 0 < r <= p < 1, got p = {p}, r = {r}"
        )));
    }
    if !is_sidorenko_verified(h) {
        return Err(Error::Unsupported(
            "graph is outside the verified lower-bound list (trees, even cycles, \
             complete bipartite graphs)"
                .into(),
        ));
    }
    Ok(PhaseClassification::ReplicaSymmetric { rate: rate::rate(r, p)? })
}

fn is_sidorenko_verified(h: &SmallGraph) -> bool {
    if h.allows_loops() || h.n() == 0 {
        return false;
    }
    let Some((left, right)) = h.is_bipartite() else {
        return false;
    };
    // Tree: connected with v - 1 edges.
    if h.is_connected() && h.edge_count() == h.n() - 1 {
        return true;
    }
    // Even cycle: connected 2-regular on an even vertex count.
    if h.is_connected() && h.is_d_regular() == Some(2) && h.n() % 2 == 0 {
        return true;
    }
    // Complete bipartite: all cross pairs present.
    h.edge_count() == left.len() * right.len()
        && left.iter().all(|&u| right.iter().all(|&v| h.has_edge(u, v)))
}

/// The threshold `r0` in (0, p) with `h_p(r0) = h_p(0)/2`: below it the
/// two-block checkerboard kernel (zero diagonal blocks, `p` off-diagonal)
/// certifies lower-tail symmetry breaking for every non-bipartite graph,
/// since its density is 0 and its rate functional is exactly `h_p(0)/2`.
pub fn lower_tail_nonbipartite_r0(p: f64) -> Result<f64> {
    let half = rate::rate(0.0, p)? / 2.0;
    bisect(
        |x| rate::rate_unchecked(x, p) - half,
        1e-300,
        p,
        1e-14,
        200,
    )
    .ok_or_else(|| Error::Convergence(format!("r0 bisection lost its bracket at p = {p}")))
}

/// The two-block checkerboard kernel used by the lower-tail construction.
pub fn checkerboard_graphon(p: f64) -> Result<StepGraphon> {
    StepGraphon::new(vec![0.5, 0.5], vec![0.0, p, p, 0.0])
}

/// Convenience for tests and the CLI: does the closed-form d = 2 rule
/// declare `(p, r)` breaking?
pub fn d2_rule_is_breaking(p: f64, r: f64) -> Result<bool> {
    Ok(p < crate::minorant::d2_boundary_p(r)?)
}
