//! Binomial rate function, entropy, and the transformed curve
//! `x -> h_p(x^{1/gamma})`.
//!
//! Everything downstream (minorants, phase boundaries, the scalar
//! exponential-model optimization) reduces to this one-dimensional
//! geometry, so the derivatives and the convexity threshold live here.

use crate::error::{Error, Result};
use crate::solve::bisect;

/// Absolute x-tolerance for the inflection-point bisections.
const BISECT_TOL: f64 = 1e-13;
/// Iteration cap for all bisections in this module.
const BISECT_MAX_ITER: usize = 200;
/// Inset used to keep brackets away from singular endpoints.
const BRACKET_INSET: f64 = 1e-14;

/// Entropy `h(u) = u log u + (1-u) log(1-u)`, with `0 log 0 = 0`.
pub fn entropy(u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(format!("entropy: u = {u} outside [0,1]")));
    }
    Ok(xlogx(u) + xlogx(1.0 - u))
}

/// Binomial rate function
/// `h_p(u) = u log(u/p) + (1-u) log((1-u)/(1-p))`, the relative entropy of
/// Bernoulli(u) with respect to Bernoulli(p). Nonnegative, zero only at
/// `u = p`; endpoints use the `0 log 0 = 0` convention.
pub fn rate(u: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(format!("rate: u = {u} outside [0,1]")));
    }
    Ok(rate_unchecked(u, p))
}

pub(crate) fn rate_unchecked(u: f64, p: f64) -> f64 {
    let a = if u == 0.0 { 0.0 } else { u * (u.ln() - p.ln()) };
    let b = if u == 1.0 {
        0.0
    } else {
        (1.0 - u) * ((1.0 - u).ln() - (1.0 - p).ln())
    };
    a + b
}

/// First derivative `h_p'(u) = log(u/(1-u)) - log(p/(1-p))` on (0,1).
pub fn rate_d1(u: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(0.0 < u && u < 1.0) {
        return Err(Error::domain(format!(
            "rate_d1: u = {u} outside (0,1); derivative diverges at the endpoints"
        )));
    }
    Ok(rate_d1_unchecked(u, p))
}

pub(crate) fn rate_d1_unchecked(u: f64, p: f64) -> f64 {
    logit(u) - logit(p)
}

/// Endpoint-tolerant variant of [`rate_d1`]: reports the divergent
/// derivative at `u = 0` and `u = 1` as signed infinities.
pub fn rate_d1_extended(u: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::domain(format!("rate_d1_extended: u = {u} outside [0,1]")));
    }
    if u == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if u == 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(rate_d1_unchecked(u, p))
}

/// Second derivative `h_p''(u) = 1/(u(1-u))` on (0,1); independent of `p`.
pub fn rate_d2(u: f64) -> Result<f64> {
    if !(0.0 < u && u < 1.0) {
        return Err(Error::domain(format!(
            "rate_d2: u = {u} outside (0,1); derivative diverges at the endpoints"
        )));
    }
    Ok(1.0 / (u * (1.0 - u)))
}

/// Critical density `p0(gamma) = (gamma-1)/(gamma-1 + e^{gamma/(gamma-1)})`.
///
/// For `gamma > 1` the curve `x -> h_p(x^{1/gamma})` is convex on \[0,1\]
/// exactly when `p >= p0(gamma)`; below it the curve picks up a concave
/// middle window. Increasing in `gamma` on (1, inf).
pub fn p0(gamma: f64) -> Result<f64> {
    if !(gamma > 1.0) {
        return Err(Error::domain(format!(
            "p0: gamma = {gamma} <= 1 (curve is treated as convex; callers should branch)"
        )));
    }
    let g = gamma - 1.0;
    Ok(g / (g + (gamma / g).exp()))
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0 < p && p < 1.0) {
        return Err(Error::domain(format!("edge density p = {p} outside (0,1)")));
    }
    Ok(())
}

fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

pub(crate) fn logit(x: f64) -> f64 {
    x.ln() - (1.0 - x).ln()
}

/// The curve `x -> h_p(x^{1/gamma})` for an edge density `p` and a positive
/// exponent `gamma` (`gamma = d` for d-regular subgraph problems,
/// `gamma = e(H) * alpha` for exponential random graph models).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaCurve {
    p: f64,
    gamma: f64,
}

impl GammaCurve {
    pub fn new(p: f64, gamma: f64) -> Result<Self> {
        check_p(p)?;
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::domain(format!("GammaCurve: gamma = {gamma} must be > 0")));
        }
        Ok(GammaCurve { p, gamma })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `q`-coordinate of a point `x` on the curve axis: `q = x^{1/gamma}`.
    pub fn q_of_x(&self, x: f64) -> f64 {
        x.powf(1.0 / self.gamma)
    }

    /// `x`-coordinate of a density `q`: `x = q^gamma`.
    pub fn x_of_q(&self, q: f64) -> f64 {
        q.powf(self.gamma)
    }

    /// Curve value `h_p(x^{1/gamma})` for `0 < x <= 1`.
    pub fn value(&self, x: f64) -> Result<f64> {
        if !(0.0 < x && x <= 1.0) {
            return Err(Error::domain(format!("curve value: x = {x} outside (0,1]")));
        }
        Ok(self.value_unchecked(x))
    }

    pub(crate) fn value_unchecked(&self, x: f64) -> f64 {
        rate_unchecked(self.q_of_x(x), self.p)
    }

    /// First derivative `(1/gamma) x^{1/gamma - 1} h_p'(x^{1/gamma})`
    /// on the open interval (0,1); diverges at both endpoints.
    pub fn d1(&self, x: f64) -> Result<f64> {
        if !(0.0 < x && x < 1.0) {
            return Err(Error::domain(format!(
                "curve d1: x = {x} outside (0,1); derivative diverges at the endpoints"
            )));
        }
        Ok(self.d1_unchecked(x))
    }

    pub(crate) fn d1_unchecked(&self, x: f64) -> f64 {
        let q = self.q_of_x(x);
        x.powf(1.0 / self.gamma - 1.0) / self.gamma * rate_d1_unchecked(q, self.p)
    }

    /// Endpoint-tolerant variant of [`Self::d1`], with signed-infinity
    /// sentinels at `x = 0` and `x = 1`.
    pub fn d1_extended(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::domain(format!("curve d1_extended: x = {x} outside [0,1]")));
        }
        if x == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        if x == 1.0 {
            return Ok(f64::INFINITY);
        }
        Ok(self.d1_unchecked(x))
    }

    /// Second derivative on (0,1). In the density coordinate `q = x^{1/gamma}`
    /// this is
    /// `q^{1-2 gamma}/gamma^2 * (1/(1-q) - (gamma-1) log(q/(1-q)) + (gamma-1) log(p/(1-p)))`.
    pub fn d2(&self, x: f64) -> Result<f64> {
        if !(0.0 < x && x < 1.0) {
            return Err(Error::domain(format!(
                "curve d2: x = {x} outside (0,1); derivative diverges at the endpoints"
            )));
        }
        let q = self.q_of_x(x);
        Ok(q.powf(1.0 - 2.0 * self.gamma) / (self.gamma * self.gamma) * self.concavity_factor(q))
    }

    /// The bracketing factor whose sign equals the sign of [`Self::d2`] at
    /// `x = q^gamma`. Decreasing in `q` until `(gamma-1)/gamma`, then
    /// increasing, when `gamma > 1`.
    fn concavity_factor(&self, q: f64) -> f64 {
        1.0 / (1.0 - q) - (self.gamma - 1.0) * (logit(q) - logit(self.p))
    }

    /// The two inflection points of the curve in `x`-coordinates, or `None`
    /// when `p >= p0(gamma)` and the curve is convex.
    ///
    /// Requires `gamma > 1`. Both roots lie strictly to the right of
    /// `x = p^gamma`; the accuracy is about 1e-12 in `x`.
    pub fn inflection_points(&self) -> Result<Option<(f64, f64)>> {
        Ok(self
            .inflection_points_q()?
            .map(|(qa, qb)| (self.x_of_q(qa), self.x_of_q(qb))))
    }

    /// [`Self::inflection_points`] in density coordinates `q = x^{1/gamma}`.
    ///
    /// The sign factor of the second derivative is positive at `q = p`,
    /// attains its minimum at `q = (gamma-1)/gamma`, and diverges toward
    /// both endpoints, so each root is bisected on its own side of the
    /// minimum. Working in `q` keeps the solve well-conditioned even when
    /// `p^gamma` underflows toward the float floor.
    pub fn inflection_points_q(&self) -> Result<Option<(f64, f64)>> {
        if !(self.gamma > 1.0) {
            return Err(Error::domain(format!(
                "inflection_points: gamma = {} <= 1 (curve has no concave window)",
                self.gamma
            )));
        }
        if self.p >= p0(self.gamma)? {
            return Ok(None);
        }
        let q_star = (self.gamma - 1.0) / self.gamma;
        let sign = |q: f64| self.concavity_factor(q);
        let lo = bisect(sign, self.p, q_star, BISECT_TOL, BISECT_MAX_ITER);
        let hi = bisect(sign, q_star, 1.0 - BRACKET_INSET, BISECT_TOL, BISECT_MAX_ITER);
        match (lo, hi) {
            (Some(a), Some(b)) => Ok(Some((a, b))),
            _ => Err(Error::Convergence(format!(
                "inflection bisection lost its bracket at p = {}, gamma = {}",
                self.p, self.gamma
            ))),
        }
    }

    /// Curve slope as a function of the density coordinate:
    /// `d/dx h_p(x^{1/gamma})` evaluated at `x = q^gamma`, i.e.
    /// `(1/gamma) q^{1-gamma} h_p'(q)`.
    pub fn slope_at_q(&self, q: f64) -> Result<f64> {
        if !(0.0 < q && q < 1.0) {
            return Err(Error::domain(format!("slope_at_q: q = {q} outside (0,1)")));
        }
        Ok(self.slope_at_q_unchecked(q))
    }

    pub(crate) fn slope_at_q_unchecked(&self, q: f64) -> f64 {
        q.powf(1.0 - self.gamma) / self.gamma * rate_d1_unchecked(q, self.p)
    }
}
