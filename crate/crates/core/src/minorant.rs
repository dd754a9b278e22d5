//! Convex minorant of the curve `x -> h_p(x^{1/gamma})`.
//!
//! When the curve is convex (`gamma <= 1`, or `p >= p0(gamma)`) the minorant
//! is the curve itself. Otherwise the curve is convex-concave-convex and the
//! minorant replaces the middle stretch by the unique lower common tangent;
//! the touch points delimit the region where a density `q` sits strictly
//! above the minorant, which is exactly the symmetry-breaking region.

use crate::error::{Error, Result};
use crate::rate::{self, GammaCurve};
use crate::solve::bisect;

const INNER_TOL: f64 = 1e-13;
const MAX_ITER: usize = 200;
const INSET: f64 = 1e-14;
/// Maximum tangency defect accepted before reporting a convergence failure.
const RESIDUAL_TOL: f64 = 1e-9;

/// The lower common tangent of `x -> h_p(x^{1/gamma})`.
///
/// Touch points are stored in density coordinates (`q`, with `x = q^gamma`);
/// the line itself lives in `x`-coordinates: `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy)]
pub struct DoubleTangent {
    pub q_lo: f64,
    pub q_hi: f64,
    pub slope: f64,
    pub intercept: f64,
    /// Max tangency defect observed on the verification grid.
    pub residual: f64,
}

impl DoubleTangent {
    /// Line value at `x`.
    pub fn line(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    /// Touch points in `x`-coordinates.
    pub fn x_touch(&self, gamma: f64) -> (f64, f64) {
        (self.q_lo.powf(gamma), self.q_hi.powf(gamma))
    }
}

/// Computes the lower common double tangent of the curve, or `None` when
/// the curve is convex (`gamma <= 1` or `p >= p0(gamma)`).
///
/// The solver bisects on the slope `beta`: for each `beta` it locates the
/// minimum of `curve - beta x` on each of the two convex segments
/// delimited by the inflection points (derivative root-finding), and
/// adjusts `beta` until the two minimum values coincide. The minimum
/// values are insensitive to first order in the root error, so the
/// tangency gap is resolved essentially to machine precision. All root
/// finding runs in the density coordinate `q = x^{1/gamma}`, which stays
/// well-conditioned when `p^gamma` underflows toward the float floor.
pub fn double_tangent(c: &GammaCurve) -> Result<Option<DoubleTangent>> {
    if c.gamma() <= 1.0 || c.p() >= rate::p0(c.gamma())? {
        return Ok(None);
    }
    let (qa, qb) = c
        .inflection_points_q()?
        .expect("p < p0 guarantees a concave window");
    let q_floor = 1e-100;
    let q_ceil = 1.0 - INSET;

    // The tangent slope lies strictly between the curve slopes at the two
    // inflection points (the touch points sit outside the concave window).
    // The slope grows only logarithmically toward q = 1, so the upper end
    // is additionally capped by the slope at the right bracket edge.
    let mut beta_lo = c.slope_at_q_unchecked(qb).max(INSET);
    let mut beta_hi = c.slope_at_q_unchecked(qa).min(c.slope_at_q_unchecked(q_ceil));
    if beta_lo >= beta_hi {
        return Err(Error::Convergence(format!(
            "double_tangent: degenerate slope bracket [{beta_lo}, {beta_hi}] at p = {}, gamma = {}",
            c.p(),
            c.gamma()
        )));
    }

    // Minimum of curve - beta x over one convex segment, parametrized by q.
    let segment_min = |beta: f64, lo: f64, hi: f64| -> Option<(f64, f64)> {
        let q = bisect(
            |q| c.slope_at_q_unchecked(q) - beta,
            lo,
            hi,
            INNER_TOL,
            MAX_ITER,
        )?;
        Some((q, rate::rate_unchecked(q, c.p()) - beta * c.x_of_q(q)))
    };
    // Gap between the two segment minima; increasing in beta. The pinned
    // variant fixes the right point at q_ceil instead of minimizing.
    let free_gap = |beta: f64| -> Option<f64> {
        let (_, left) = segment_min(beta, q_floor, qa)?;
        let (_, right) = segment_min(beta, qb, q_ceil)?;
        Some(left - right)
    };
    let pinned_gap = |beta: f64| -> Option<f64> {
        let (_, left) = segment_min(beta, q_floor, qa)?;
        Some(left - (rate::rate_unchecked(q_ceil, c.p()) - beta * c.x_of_q(q_ceil)))
    };
    let bracket_lost = || {
        Error::Convergence(format!(
            "double_tangent: lost a derivative bracket at p = {}, gamma = {}",
            c.p(),
            c.gamma()
        ))
    };

    let mut g_lo = free_gap(beta_lo).ok_or_else(bracket_lost)?;
    let mut g_hi = free_gap(beta_hi).ok_or_else(bracket_lost)?;

    // At very small p the upper touch point can sit closer to 1 than f64
    // resolves (1 - q_hi below 1e-16); the gap then stays negative all the
    // way up to the slope cap. Pin the right tangency at the representable
    // ceiling and re-bracket: the pinned gap is still increasing in the
    // slope and turns positive by the slope at the left inflection point.
    let saturated = g_hi < -1e-12 && c.slope_at_q_unchecked(q_ceil) < c.slope_at_q_unchecked(qa);
    let gap = |beta: f64| if saturated { pinned_gap(beta) } else { free_gap(beta) };
    if saturated {
        beta_hi = c.slope_at_q_unchecked(qa);
        g_lo = pinned_gap(beta_lo).ok_or_else(bracket_lost)?;
        g_hi = pinned_gap(beta_hi).ok_or_else(bracket_lost)?;
    }
    if g_lo.signum() == g_hi.signum() && (g_lo.abs() > 1e-12 || g_hi.abs() > 1e-12) {
        return Err(Error::Convergence(format!(
            "double_tangent: tangency gap does not change sign over the slope bracket \
             (g({beta_lo}) = {g_lo}, g({beta_hi}) = {g_hi})"
        )));
    }
    // Just below p0 the concave window is microscopic and the gap sits at
    // the float noise floor across the whole bracket; any slope inside the
    // bracket is then tangent to working precision.

    let mut beta = 0.5 * (beta_lo + beta_hi);
    for _ in 0..MAX_ITER {
        beta = 0.5 * (beta_lo + beta_hi);
        let g = match gap(beta) {
            Some(g) => g,
            None => {
                return Err(Error::Convergence(
                    "double_tangent: inner root bracket vanished during slope bisection".into(),
                ))
            }
        };
        if g.abs() <= 1e-15 * (1.0 + beta) || beta_hi - beta_lo <= 1e-15 * beta.max(1.0) {
            break;
        }
        if g.signum() == g_lo.signum() {
            beta_lo = beta;
            g_lo = g;
        } else {
            beta_hi = beta;
        }
    }

    let (q_lo, v_lo) = segment_min(beta, q_floor, qa)
        .ok_or_else(|| Error::Convergence("double_tangent: left tangency lost".into()))?;
    let (q_hi, v_hi) = if saturated {
        (q_ceil, rate::rate_unchecked(q_ceil, c.p()) - beta * c.x_of_q(q_ceil))
    } else {
        segment_min(beta, qb, q_ceil)
            .ok_or_else(|| Error::Convergence("double_tangent: right tangency lost".into()))?
    };
    let intercept = 0.5 * (v_lo + v_hi);

    let mut residual = (v_lo - v_hi).abs();
    // Verification grid (uniform in q): the line must not poke above the
    // curve anywhere.
    let grid = 512;
    for i in 0..=grid {
        let q = (i as f64 / grid as f64).clamp(1e-12, 1.0);
        let excess = beta * c.x_of_q(q) + intercept - rate::rate_unchecked(q, c.p());
        if excess > residual {
            residual = excess;
        }
    }
    if residual > RESIDUAL_TOL {
        return Err(Error::Convergence(format!(
            "double_tangent: residual {residual:.3e} above tolerance at p = {}, gamma = {} \
             (slope {beta}, touch q = {q_lo}, {q_hi})",
            c.p(),
            c.gamma()
        )));
    }

    Ok(Some(DoubleTangent {
        q_lo,
        q_hi,
        slope: beta,
        intercept,
        residual,
    }))
}

/// The convex minorant of a curve, with the double tangent solved once.
#[derive(Debug, Clone)]
pub struct Minorant {
    curve: GammaCurve,
    tangent: Option<DoubleTangent>,
}

impl Minorant {
    pub fn new(curve: GammaCurve) -> Result<Self> {
        let tangent = double_tangent(&curve)?;
        Ok(Minorant { curve, tangent })
    }

    pub fn curve(&self) -> &GammaCurve {
        &self.curve
    }

    pub fn tangent(&self) -> Option<&DoubleTangent> {
        self.tangent.as_ref()
    }

    /// Minorant value at `x` in \[0,1\]: the curve outside the touch window,
    /// the tangent line inside it.
    pub fn value(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::domain(format!("minorant value: x = {x} outside [0,1]")));
        }
        Ok(self.value_unchecked(x))
    }

    pub(crate) fn value_unchecked(&self, x: f64) -> f64 {
        if let Some(t) = &self.tangent {
            let (x_lo, x_hi) = t.x_touch(self.curve.gamma());
            if x > x_lo && x < x_hi {
                return t.line(x);
            }
        }
        if x == 0.0 {
            return rate::rate_unchecked(0.0, self.curve.p());
        }
        self.curve.value_unchecked(x)
    }

    /// Whether the curve point of density `q` lies on the minorant,
    /// i.e. `q` is outside the open touch interval.
    pub fn contains_q(&self, q: f64) -> bool {
        match &self.tangent {
            None => true,
            Some(t) => !(t.q_lo < q && q < t.q_hi),
        }
    }
}

/// Convenience wrapper: minorant of `c` evaluated at a single `x`.
pub fn minorant_value(c: &GammaCurve, x: f64) -> Result<f64> {
    Minorant::new(*c)?.value(x)
}

/// Whether `(q^gamma, h_p(q))` lies on the convex minorant of the curve.
pub fn on_minorant(c: &GammaCurve, q: f64) -> Result<bool> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::domain(format!("on_minorant: q = {q} outside [0,1]")));
    }
    Ok(Minorant::new(*c)?.contains_q(q))
}

/// Membership in the breaking region: `(q^gamma, h_p(q))` strictly above
/// the minorant.
pub fn b_region_test(p: f64, q: f64, gamma: f64) -> Result<bool> {
    let c = GammaCurve::new(p, gamma)?;
    Ok(!on_minorant(&c, q)?)
}

/// Touch points of the `gamma = 2` tangent by direct bisection of the
/// closed-form derivative `log(x/(1-x)) - (1-2x) log(p/(1-p))`, or `None`
/// for `p >= p0(2)`. Independent of [`double_tangent`]; the two must agree
/// to about 1e-8 in `q`.
pub fn d2_touch_points(p: f64) -> Result<Option<(f64, f64)>> {
    if !(0.0 < p && p < 1.0) {
        return Err(Error::domain(format!("d2_touch_points: p = {p} outside (0,1)")));
    }
    if p >= rate::p0(2.0)? {
        return Ok(None);
    }
    let c = rate::logit(p);
    let deriv = |x: f64| rate::logit(x) - (1.0 - 2.0 * x) * c;
    // x = 1/2 is always a critical point; the two outer zeros are the
    // tangency points and straddle it symmetrically.
    let lo = bisect(deriv, 1e-15, 0.5 - 1e-12, INNER_TOL, MAX_ITER);
    let hi = bisect(deriv, 0.5 + 1e-12, 1.0 - 1e-15, INNER_TOL, MAX_ITER);
    match (lo, hi) {
        (Some(a), Some(b)) => Ok(Some((a, b))),
        _ => Err(Error::Convergence(format!(
            "d2_touch_points: bracket lost at p = {p}"
        ))),
    }
}

/// Critical density for the d = 2 breaking region at threshold `r`:
/// `p < [1 + (1/r - 1)^{1/(1-2r)}]^{-1}` is breaking. The removable
/// singularity at `r = 1/2` is filled with the limit `p0(2) = 1/(1+e^2)`.
pub fn d2_boundary_p(r: f64) -> Result<f64> {
    if !(0.0 < r && r < 1.0) {
        return Err(Error::domain(format!("d2_boundary_p: r = {r} outside (0,1)")));
    }
    if (r - 0.5).abs() < 1e-8 {
        return rate::p0(2.0);
    }
    Ok(1.0 / (1.0 + (1.0 / r - 1.0).powf(1.0 / (1.0 - 2.0 * r))))
}

/// One row of a phase-boundary curve.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryPoint {
    pub r: f64,
    pub p_critical: f64,
}

/// Critical `p` below which `(p, r)` is in the breaking region, for each
/// `r` in the grid, by bisection on `p` (membership is monotone in `p`:
/// the touch interval shrinks as `p` grows). Accuracy about 1e-8 in `p`;
/// the bisection bracket is `[1e-6, p0(gamma)]`, and an `r` so extreme
/// that its critical density is below the bracket floor reports the floor.
pub fn boundary_curve(gamma: f64, r_grid: &[f64]) -> Result<Vec<BoundaryPoint>> {
    if !(gamma > 1.0) {
        return Err(Error::domain(format!(
            "boundary_curve: gamma = {gamma} <= 1 has an empty breaking region"
        )));
    }
    let p_top = rate::p0(gamma)?;
    let mut out = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        if !(0.0 < r && r < 1.0) {
            return Err(Error::domain(format!("boundary_curve: r = {r} outside (0,1)")));
        }
        out.push(BoundaryPoint {
            r,
            p_critical: bisect_boundary(gamma, r, p_top)?,
        });
    }
    Ok(out)
}

fn bisect_boundary(gamma: f64, r: f64, p_top: f64) -> Result<f64> {
    let mut lo = 1e-6;
    let mut hi = p_top;
    if !b_region_test(lo, r, gamma)? {
        // The true critical density is below the bracket floor.
        return Ok(lo);
    }
    for _ in 0..MAX_ITER {
        if hi - lo <= 1e-9 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if b_region_test(mid, r, gamma)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// CSV serialization of a boundary curve, header `r,p_critical,gamma`.
pub fn boundary_csv(points: &[BoundaryPoint], gamma: f64) -> String {
    let mut s = String::from("r,p_critical,gamma\n");
    for pt in points {
        s.push_str(&format!("{:.9},{:.9},{}\n", pt.r, pt.p_critical, gamma));
    }
    s
}
