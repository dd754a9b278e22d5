//! Property verification suites behind `repsym verify`.
//!
//! Each suite runs a deterministic seeded sweep and reports the number of
//! checks and violations; any violation makes the process exit nonzero.

use repsym::graphon::{self, SignedStepKernel, StepGraphon};
use repsym::graphs::{self, SmallGraph};
use repsym::minorant::double_tangent;
use repsym::rate::{p0, GammaCurve};
use repsym::rng::Xoshiro256;

pub struct SuiteOutcome {
    pub name: &'static str,
    pub checks: usize,
    pub violations: usize,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn line(&self) -> String {
        format!(
            "suite {:<8} {:>6} checks, {} violations: {}",
            self.name,
            self.checks,
            self.violations,
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// Bounded-degree density bound `t(H,f) <= ||f||_d^{e(H)}` over random
/// step graphons.
pub fn holder_suite() -> SuiteOutcome {
    let mut rng = Xoshiro256::new(0x601D);
    let hs = [
        (SmallGraph::complete(3), 2u32),
        (SmallGraph::cycle(4), 2),
        (SmallGraph::cycle(5), 2),
        (SmallGraph::complete(4), 3),
    ];
    let mut checks = 0;
    let mut violations = 0;
    for _ in 0..1000 {
        let k = 1 + (rng.next_below(5) as usize);
        let f = StepGraphon::random(&mut rng, k);
        for (h, d) in &hs {
            checks += 1;
            let t = graphon::hom_density(h, &f).expect("within caps");
            let bound = graphon::lp_norm(&f, *d).expect("d >= 1").powi(h.edge_count() as i32);
            if t > bound + 1e-12 {
                violations += 1;
            }
        }
    }
    SuiteOutcome {
        name: "holder",
        checks,
        violations,
    }
}

/// Bipartite-regular homomorphism inequality on a fixed corpus, plus the
/// triangle/identity-kernel counterexample, which must FAIL the
/// inequality (a counterexample that holds is itself a violation).
pub fn gt_suite() -> SuiteOutcome {
    let mut rng = Xoshiro256::new(0x67E7);
    let corpus = [
        SmallGraph::cycle(4),
        SmallGraph::cycle(6),
        SmallGraph::complete_bipartite(2, 2),
        SmallGraph::complete_bipartite(3, 3),
        SmallGraph::cube_q3(),
    ];
    let mut checks = 0;
    let mut violations = 0;
    for _ in 0..40 {
        for g in &corpus {
            checks += 1;
            let f = StepGraphon::random(&mut rng, 4);
            match graphs::galvin_tetali_check(g, &f) {
                Ok(rep) if rep.holds => {}
                _ => violations += 1,
            }
        }
    }
    // The non-bipartite extension genuinely fails: t(K3, f_id) = 1/4 while
    // the K_{2,2} side gives ~0.2102.
    checks += 1;
    let f_id = StepGraphon::new(vec![0.5, 0.5], vec![1.0, 0.0, 0.0, 1.0]).expect("valid graphon");
    let k3 = SmallGraph::complete(3);
    match graphs::galvin_tetali_unchecked(&k3, &f_id) {
        Ok(rep) => {
            let expected_lhs = (rep.lhs - 0.25).abs() < 1e-12;
            let expected_rhs = (rep.rhs - 0.125f64.powf(0.75)).abs() < 1e-12;
            if rep.holds || !expected_lhs || !expected_rhs {
                violations += 1;
            }
        }
        Err(_) => violations += 1,
    }
    SuiteOutcome {
        name: "gt",
        checks,
        violations,
    }
}

/// Strict nesting of tangent touch intervals across exponents.
pub fn nesting_suite() -> SuiteOutcome {
    let mut checks = 0;
    let mut violations = 0;
    for &(g_small, g_big) in &[(1.8, 2.0), (2.0, 3.0), (3.0, 6.0)] {
        let cap = p0(g_small).expect("gamma > 1");
        for i in 1..=20 {
            checks += 1;
            let p = cap * i as f64 / 21.0;
            let t_small = double_tangent(&GammaCurve::new(p, g_small).expect("valid"))
                .ok()
                .flatten();
            let t_big = double_tangent(&GammaCurve::new(p, g_big).expect("valid"))
                .ok()
                .flatten();
            match (t_small, t_big) {
                (Some(ts), Some(tb)) => {
                    if !(tb.q_lo < ts.q_lo && ts.q_hi < tb.q_hi) {
                        violations += 1;
                    }
                }
                _ => violations += 1,
            }
        }
    }
    SuiteOutcome {
        name: "nesting",
        checks,
        violations,
    }
}

/// Norm comparisons on random kernels: `||f||_1 <= ||f||_op <= ||f||_2`,
/// the fourth-power cut-norm bound for signed kernels, and its
/// factor-free form for nonnegative kernels.
pub fn sandwich_suite() -> SuiteOutcome {
    let mut rng = Xoshiro256::new(0x5A17D);
    let mut checks = 0;
    let mut violations = 0;
    for _ in 0..1000 {
        let k = 1 + (rng.next_below(6) as usize);
        let f = StepGraphon::random(&mut rng, k);
        checks += 1;
        let l1 = graphon::lp_norm(&f, 1).expect("d >= 1");
        let l2 = graphon::lp_norm(&f, 2).expect("d >= 1");
        let op = graphon::operator_norm(&f);
        if !(l1 <= op + 1e-10 && op <= l2 + 1e-10) {
            violations += 1;
        }
        checks += 1;
        let cut = graphon::cut_norm(&(&f).into()).expect("within cap");
        if op.powi(4) > cut + 1e-10 {
            violations += 1;
        }
        checks += 1;
        let g = SignedStepKernel::random(&mut rng, k);
        let op_signed = graphon::operator_norm_signed(&g);
        let cut_signed = graphon::cut_norm(&g).expect("within cap");
        if op_signed.powi(4) > 4.0 * cut_signed + 1e-10 {
            violations += 1;
        }
    }
    SuiteOutcome {
        name: "sandwich",
        checks,
        violations,
    }
}
