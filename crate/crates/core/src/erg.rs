//! Exponential random graph models with a density exponent.
//!
//! The model weights a graph by
//! `exp(binom(n,2) (beta1 t(K2,G) + beta2 t(H,G)^alpha))` for a d-regular
//! `H`. Its large-n behavior reduces to the scalar problem
//! `sup_u (beta1 u + beta2 u^gamma - h(u))` with `gamma = e(H) alpha`;
//! substituting `p = 1/(1+e^{-beta1})` turns that into lower tangents of
//! the curve `x -> h_p(x^{1/gamma})`, so two-phase points, the
//! discontinuity curve and breaking intervals all come from the minorant
//! geometry.

use crate::error::{Error, Result};
use crate::graphs::SmallGraph;
use crate::minorant::double_tangent;
use crate::rate::{self, GammaCurve};
use crate::solve::bisect;

/// Objective-value tolerance for declaring a two-maximizer tie.
const TIE_TOL: f64 = 1e-11;
/// beta2 distance to the critical slope within which a query is treated
/// as sitting on the discontinuity curve.
const GAMMA_CURVE_BAND: f64 = 1e-9;

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// An exponential random graph model instance.
#[derive(Debug, Clone)]
pub struct ErgModel {
    h: SmallGraph,
    alpha: f64,
    beta1: f64,
    beta2: f64,
    gamma: f64,
    d: usize,
    p: f64,
}

impl ErgModel {
    /// Requires `alpha > 0` and a d-regular `h` with `d >= 2`; derives
    /// `gamma = e(H) alpha` and `p = 1/(1+e^{-beta1})`, and insists the
    /// `beta1 <-> p` substitution round-trips within 1e-12.
    pub fn new(h: SmallGraph, alpha: f64, beta1: f64, beta2: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::domain(format!("alpha = {alpha} must be > 0")));
        }
        if !beta1.is_finite() || !beta2.is_finite() {
            return Err(Error::domain("beta1 and beta2 must be finite"));
        }
        let d = h
            .is_d_regular()
            .filter(|&d| d >= 2)
            .ok_or_else(|| Error::invalid("ERG subgraph must be d-regular with d >= 2"))?;
        let p = sigmoid(beta1);
        let q = sigmoid(-beta1);
        if !(p > 0.0 && p < 1.0 && q > 0.0) {
            return Err(Error::domain(format!(
                "beta1 = {beta1} pushes p = 1/(1+e^-beta1) out of (0,1)"
            )));
        }
        let round_trip = p.ln() - q.ln();
        if (round_trip - beta1).abs() > 1e-12 * beta1.abs().max(1.0) {
            return Err(Error::domain(format!(
                "beta1 = {beta1} does not round-trip through p (got {round_trip})"
            )));
        }
        let gamma = h.edge_count() as f64 * alpha;
        Ok(ErgModel {
            h,
            alpha,
            beta1,
            beta2,
            gamma,
            d,
            p,
        })
    }

    pub fn subgraph(&self) -> &SmallGraph {
        &self.h
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    pub fn beta2(&self) -> f64 {
        self.beta2
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Result of the scalar optimization: all global maximizers (one, or two
/// at the critical slope) in ascending order, and the optimum value.
#[derive(Debug, Clone)]
pub struct ScalarMax {
    pub maximizers: Vec<f64>,
    pub value: f64,
}

fn objective(u: f64, beta1: f64, beta2: f64, gamma: f64) -> f64 {
    let pow = if u == 0.0 { 0.0 } else { u.powf(gamma) };
    let ent = if u == 0.0 || u == 1.0 {
        0.0
    } else {
        u * u.ln() + (1.0 - u) * (1.0 - u).ln()
    };
    beta1 * u + beta2 * pow - ent
}

fn objective_d1(u: f64, beta1: f64, beta2: f64, gamma: f64) -> f64 {
    beta1 + beta2 * gamma * u.powf(gamma - 1.0) - rate::logit(u)
}

/// Interior stationary points of `beta1 u + beta2 u^gamma - h(u)`, found by
/// sign-change bisection on each monotone stretch of the derivative (the
/// stretches are delimited by the inflection points of the transformed
/// curve when it is non-convex).
pub(crate) fn stationary_points(beta1: f64, beta2: f64, gamma: f64) -> Result<Vec<f64>> {
    let p = sigmoid(beta1);
    let lo = 1e-300;
    let hi = 1.0 - 1e-12;
    let deriv = |u: f64| objective_d1(u, beta1, beta2, gamma);
    let mut cuts = vec![lo];
    if gamma > 1.0 && p < rate::p0(gamma)? {
        let curve = GammaCurve::new(p, gamma)?;
        let (xa, xb) = curve
            .inflection_points()?
            .expect("p < p0 has inflection points");
        cuts.push(curve.q_of_x(xa));
        cuts.push(curve.q_of_x(xb));
    } else if gamma < 1.0 && beta2 < 0.0 {
        // The derivative is not piecewise monotone here; cut at a fine
        // grid so every sign change is still bracketed.
        for i in 1..512 {
            cuts.push(i as f64 / 512.0);
        }
    }
    cuts.push(hi);
    let mut roots = Vec::new();
    for pair in cuts.windows(2) {
        if let Some(root) = bisect(deriv, pair[0], pair[1], 1e-16, 200) {
            if roots.last().is_none_or(|&prev: &f64| (root - prev).abs() > 1e-12) {
                roots.push(root);
            }
        }
    }
    Ok(roots)
}

/// Global maximizers of `beta1 u + beta2 u^gamma - h(u)` over \[0,1\].
///
/// Two maximizers are reported exactly when the top two interior
/// stationary values agree within 1e-11 (the codimension-one tangency
/// hit through [`critical_beta2`]).
pub fn scalar_maximize(beta1: f64, beta2: f64, gamma: f64) -> Result<ScalarMax> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::domain(format!("gamma = {gamma} must be > 0")));
    }
    if !beta1.is_finite() || !beta2.is_finite() {
        return Err(Error::domain("beta1 and beta2 must be finite"));
    }
    let roots = stationary_points(beta1, beta2, gamma)?;
    let mut cands: Vec<(f64, f64)> = roots
        .into_iter()
        .map(|u| (u, objective(u, beta1, beta2, gamma)))
        .collect();
    cands.sort_by(|a, b| b.1.total_cmp(&a.1));

    // Endpoints only matter when the derivative never crosses zero inside
    // (extreme beta2 pushing the maximizer against 0 or 1).
    let end_best = [(0.0, objective(0.0, beta1, beta2, gamma)), (1.0, {
        objective(1.0, beta1, beta2, gamma)
    })]
    .into_iter()
    .max_by(|a, b| a.1.total_cmp(&b.1))
    .expect("two endpoints");
    let Some(&(u_best, v_best)) = cands.first() else {
        return Ok(ScalarMax {
            maximizers: vec![end_best.0],
            value: end_best.1,
        });
    };
    if end_best.1 > v_best + TIE_TOL {
        return Ok(ScalarMax {
            maximizers: vec![end_best.0],
            value: end_best.1,
        });
    }
    let mut maximizers = vec![u_best];
    if let Some(&(u2, v2)) = cands.get(1) {
        if (v_best - v2).abs() <= TIE_TOL && (u_best - u2).abs() > 1e-6 {
            maximizers.push(u2);
        }
    }
    maximizers.sort_by(f64::total_cmp);
    Ok(ScalarMax {
        maximizers,
        value: v_best,
    })
}

/// The critical `beta2` at which the scalar maximizer jumps, i.e. the
/// slope of the lower common tangent of `x -> h_p(x^{1/gamma})` at
/// `p = 1/(1+e^{-beta1})`; `None` when `p >= p0(gamma)` and the objective
/// never has two maximizers.
pub fn critical_beta2(beta1: f64, gamma: f64) -> Result<Option<f64>> {
    if !(gamma > 1.0) {
        return Err(Error::domain(format!(
            "critical_beta2: gamma = {gamma} <= 1 never has a jump"
        )));
    }
    let p = sigmoid(beta1);
    if p >= rate::p0(gamma)? {
        return Ok(None);
    }
    let curve = GammaCurve::new(p, gamma)?;
    Ok(double_tangent(&curve)?.map(|t| t.slope))
}

/// Classification verdict for one ERG parameter point.
#[derive(Debug, Clone, PartialEq)]
pub enum ErgKind {
    /// A single symmetric optimizer: the model looks like G(n, u*).
    SymmetricUnique { u_star: f64 },
    /// On the discontinuity curve: two coexisting symmetric optimizers.
    SymmetricTwoPhase { u1: f64, u2: f64 },
    /// Proven symmetry breaking for beta2 inside the stated open interval.
    Breaking {
        beta2_lo: f64,
        beta2_hi: f64,
        u_star: f64,
    },
    /// Outside the proven-breaking interval in the low-alpha low-beta1
    /// regime the theory does not classify; no claim is made.
    Indeterminate { u_star: f64 },
}

impl ErgKind {
    pub fn name(&self) -> &'static str {
        match self {
            ErgKind::SymmetricUnique { .. } => "SymmetricUnique",
            ErgKind::SymmetricTwoPhase { .. } => "SymmetricTwoPhase",
            ErgKind::Breaking { .. } => "Breaking",
            ErgKind::Indeterminate { .. } => "Indeterminate",
        }
    }
}

/// Verdict plus the scalar optimum value psi.
#[derive(Debug, Clone)]
pub struct ErgClassification {
    pub kind: ErgKind,
    pub psi: f64,
}

/// Classifies an ERG model instance.
///
/// With `gamma >= d` the model is always symmetric; on the discontinuity
/// curve it reports the two coexisting densities. With `gamma < d` and
/// `beta1 >= log(d-1) - d/(d-1)` it is symmetric with a unique optimizer.
/// Otherwise breaking is proven exactly for `beta2` strictly inside the
/// interval derived from the d-curve tangent touch points, and everything
/// else is reported as indeterminate rather than over-claimed.
pub fn classify(model: &ErgModel) -> Result<ErgClassification> {
    let gamma = model.gamma();
    let d = model.degree() as f64;
    let scalar = scalar_maximize(model.beta1(), model.beta2(), gamma)?;
    let psi = scalar.value;
    let u_star = scalar.maximizers[0];

    if model.beta2() <= 0.0 {
        // The density-boosting analysis assumes beta2 > 0; the scalar
        // solution is still well-defined, and only the gamma >= d route
        // justifies a symmetry claim.
        let kind = if gamma >= d {
            ErgKind::SymmetricUnique { u_star }
        } else {
            ErgKind::Indeterminate { u_star }
        };
        return Ok(ErgClassification { kind, psi });
    }

    if gamma >= d {
        if let Some(critical) = critical_beta2(model.beta1(), gamma)? {
            if (model.beta2() - critical).abs() <= GAMMA_CURVE_BAND {
                let curve = GammaCurve::new(model.p(), gamma)?;
                let t = double_tangent(&curve)?.expect("critical slope exists");
                return Ok(ErgClassification {
                    kind: ErgKind::SymmetricTwoPhase {
                        u1: t.q_lo,
                        u2: t.q_hi,
                    },
                    psi,
                });
            }
        }
        return Ok(ErgClassification {
            kind: ErgKind::SymmetricUnique { u_star },
            psi,
        });
    }

    let threshold = (d - 1.0).ln() - d / (d - 1.0);
    if model.beta1() >= threshold {
        return Ok(ErgClassification {
            kind: ErgKind::SymmetricUnique { u_star },
            psi,
        });
    }

    // gamma < d and beta1 below threshold: the d-curve has a double
    // tangent, and its touch points bound the proven breaking interval.
    let d_curve = GammaCurve::new(model.p(), d)?;
    let tangent = double_tangent(&d_curve)?.ok_or_else(|| {
        Error::Convergence(format!(
            "d-curve tangent missing below threshold at beta1 = {}",
            model.beta1()
        ))
    })?;
    let beta2_lo = breaking_interval_end(tangent.q_lo, model.p(), gamma)?;
    let beta2_hi = breaking_interval_end(tangent.q_hi, model.p(), gamma)?;
    let kind = if beta2_lo < model.beta2() && model.beta2() < beta2_hi {
        ErgKind::Breaking {
            beta2_lo,
            beta2_hi,
            u_star,
        }
    } else {
        ErgKind::Indeterminate { u_star }
    };
    Ok(ErgClassification { kind, psi })
}

/// One end of the proven breaking interval:
/// `u^{1-gamma} h_p'(u) / gamma`, the slope of the gamma-curve at
/// `x = u^gamma`.
fn breaking_interval_end(u: f64, p: f64, gamma: f64) -> Result<f64> {
    Ok(u.powf(1.0 - gamma) * rate::rate_d1(u, p)? / gamma)
}

/// One trajectory sample: the global maximizers at this `beta2` (two at
/// the critical slope).
#[derive(Debug, Clone)]
pub struct TrajectoryPoint {
    pub beta2: f64,
    pub u: Vec<f64>,
}

/// The symmetric-solution trajectory `beta2 -> u*` over a sorted grid.
pub fn u_star_trajectory(
    beta1: f64,
    gamma: f64,
    beta2_grid: &[f64],
) -> Result<Vec<TrajectoryPoint>> {
    if beta2_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid("beta2 grid must be sorted ascending"));
    }
    beta2_grid
        .iter()
        .map(|&b2| {
            let m = scalar_maximize(beta1, b2, gamma)?;
            Ok(TrajectoryPoint {
                beta2: b2,
                u: m.maximizers,
            })
        })
        .collect()
}

/// Trajectory CSV with header `beta2,u_star`; a two-maximizer point emits
/// one row per maximizer.
pub fn trajectory_csv(points: &[TrajectoryPoint]) -> String {
    let mut s = String::from("beta2,u_star\n");
    for pt in points {
        for &u in &pt.u {
            s.push_str(&format!("{:.9},{:.9}\n", pt.beta2, u));
        }
    }
    s
}

/// One classified cell of a `(beta1, beta2)` phase plot.
#[derive(Debug, Clone)]
pub struct PhaseCell {
    pub beta1: f64,
    pub beta2: f64,
    pub classification: ErgClassification,
}

/// Classifies every point of the `(beta1, beta2)` grid product.
pub fn phase_plot_data(
    h: &SmallGraph,
    alpha: f64,
    beta1_grid: &[f64],
    beta2_grid: &[f64],
) -> Result<Vec<PhaseCell>> {
    if beta1_grid.windows(2).any(|w| w[0] > w[1]) || beta2_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid("phase plot grids must be sorted ascending"));
    }
    let mut cells = Vec::with_capacity(beta1_grid.len() * beta2_grid.len());
    for &b1 in beta1_grid {
        for &b2 in beta2_grid {
            let model = ErgModel::new(h.clone(), alpha, b1, b2)?;
            cells.push(PhaseCell {
                beta1: b1,
                beta2: b2,
                classification: classify(&model)?,
            });
        }
    }
    Ok(cells)
}

/// Phase-plot CSV with header `beta1,beta2,kind,u_star,u_star2`;
/// `u_star2` is empty except on two-phase rows.
pub fn phase_plot_csv(cells: &[PhaseCell]) -> String {
    let mut s = String::from("beta1,beta2,kind,u_star,u_star2\n");
    for cell in cells {
        let (u1, u2) = match &cell.classification.kind {
            ErgKind::SymmetricUnique { u_star }
            | ErgKind::Breaking { u_star, .. }
            | ErgKind::Indeterminate { u_star } => (*u_star, None),
            ErgKind::SymmetricTwoPhase { u1, u2 } => (*u1, Some(*u2)),
        };
        let u2s = u2.map(|u| format!("{u:.9}")).unwrap_or_default();
        s.push_str(&format!(
            "{:.9},{:.9},{},{:.9},{}\n",
            cell.beta1,
            cell.beta2,
            cell.classification.kind.name(),
            u1,
            u2s
        ));
    }
    s
}
