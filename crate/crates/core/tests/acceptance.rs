//! Acceptance suite: one test per criterion, each printing a PASS line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).

use std::time::Instant;

use repsym::erg;
use repsym::graphon::{self, SignedStepKernel, StepGraphon};
use repsym::graphs::{self, SmallGraph};
use repsym::hypergraph::{self, LinearHypergraph};
use repsym::minorant::{self, d2_boundary_p, double_tangent, Minorant};
use repsym::phase;
use repsym::rate::{p0, GammaCurve};
use repsym::rng::Xoshiro256;
use repsym::sampler::{self, GlauberChain, HKind, McmcParams};

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

#[test]
fn criterion_01_d2_boundary_matches_closed_form() {
    let start = Instant::now();
    let r_grid: Vec<f64> = (0..40).map(|i| 0.05 + 0.9 * i as f64 / 39.0).collect();
    assert!(r_grid.iter().all(|&r| (r - 0.5).abs() > 1e-6));
    let points = minorant::boundary_curve(2.0, &r_grid).expect("boundary curve");
    let mut worst = 0.0f64;
    for pt in &points {
        let closed = d2_boundary_p(pt.r).expect("closed form");
        let err = (pt.p_critical - closed).abs();
        worst = worst.max(err);
        assert!(
            err <= 1e-6,
            "criterion 1: |Delta p| = {err:.3e} at r = {} (bisection {} vs closed {closed})",
            pt.r,
            pt.p_critical
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "criterion 1 took {elapsed:?}");
    println!(
        "ACCEPTANCE C1 d=2 boundary oracle equivalence: PASS \
         (40 points, worst |Delta p| = {worst:.2e}, {elapsed:.2?})"
    );
}

#[test]
fn criterion_02_rightmost_points() {
    let start = Instant::now();
    for d in 2..=7usize {
        let r_star = (d as f64 - 1.0) / d as f64;
        let expected = p0(d as f64).expect("d > 1");
        let mut r_grid: Vec<f64> = (1..=41).map(|i| i as f64 / 42.0).collect();
        r_grid.push(r_star);
        r_grid.sort_by(f64::total_cmp);
        let points = minorant::boundary_curve(d as f64, &r_grid).expect("boundary curve");
        let max_pt = points
            .iter()
            .max_by(|a, b| a.p_critical.total_cmp(&b.p_critical))
            .expect("nonempty");
        assert!(
            (max_pt.p_critical - expected).abs() <= 1e-6,
            "criterion 2: d = {d}, max p_critical = {} vs p0 = {expected}",
            max_pt.p_critical
        );
        assert!(
            (max_pt.r - r_star).abs() <= 1.0 / 42.0 + 1e-9,
            "criterion 2: d = {d}, argmax at r = {} vs (d-1)/d = {r_star}",
            max_pt.r
        );
        // The boundary curve is unimodal in r: rises to the rightmost
        // point and falls after it.
        let peak = points
            .iter()
            .position(|pt| pt.p_critical == max_pt.p_critical)
            .expect("max exists");
        for w in points[..=peak].windows(2) {
            assert!(
                w[1].p_critical >= w[0].p_critical - 1e-9,
                "criterion 2: d = {d}, boundary not rising at r = {}",
                w[1].r
            );
        }
        for w in points[peak..].windows(2) {
            assert!(
                w[1].p_critical <= w[0].p_critical + 1e-9,
                "criterion 2: d = {d}, boundary not falling at r = {}",
                w[1].r
            );
        }
    }
    // The published-precision anchor for d = 3.
    let p03 = minorant::boundary_curve(3.0, &[2.0 / 3.0]).expect("boundary")[0].p_critical;
    assert!((p03 - 0.3085617).abs() <= 1e-6);
    assert!((p03 - 0.31).abs() < 2e-3);
    let elapsed = start.elapsed();
    println!(
        "ACCEPTANCE C2 rightmost boundary points d=2..7: PASS \
         (p0(3) = {p03:.7}, {elapsed:.2?})"
    );
}

#[test]
fn criterion_03_nesting() {
    let start = Instant::now();
    let mut checks = 0;
    for &(g_small, g_big) in &[(1.8f64, 2.0f64), (2.0, 3.0), (3.0, 6.0)] {
        let cap = p0(g_small).expect("gamma > 1");
        for i in 1..=20 {
            let p = cap * i as f64 / 21.0;
            let ts = double_tangent(&GammaCurve::new(p, g_small).unwrap())
                .expect("solve")
                .expect("non-convex");
            let tb = double_tangent(&GammaCurve::new(p, g_big).unwrap())
                .expect("solve")
                .expect("non-convex");
            let lo_margin = ts.q_lo - tb.q_lo;
            let hi_margin = tb.q_hi - ts.q_hi;
            assert!(
                lo_margin > 0.0 && hi_margin > 0.0,
                "criterion 3: nesting violated at p = {p}, gammas ({g_small}, {g_big}): \
                 margins {lo_margin:.3e}, {hi_margin:.3e}"
            );
            checks += 1;
        }
    }
    let elapsed = start.elapsed();
    println!("ACCEPTANCE C3 touch-interval nesting: PASS ({checks} pairs, {elapsed:.2?})");
}

#[test]
fn criterion_04_witness_suite() {
    let start = Instant::now();
    let mut rng = Xoshiro256::new(0xACC4);
    let k3 = SmallGraph::complete(3);
    let c4 = SmallGraph::cycle(4);
    let k4 = SmallGraph::complete(4);
    let schedule = phase::default_eps_schedule();
    let mut built = 0;
    // 40 K3 + 30 C4 points in the d = 2 region, 30 K4 points in d = 3;
    // every point keeps a margin of at least 0.005 below the boundary in
    // p. Sampling additionally stays 0.05 inside the touch interval in q:
    // within a thin ring of the touch points the chord slack shrinks
    // quadratically and no epsilon can clear both strict 1e-12 margins in
    // f64 arithmetic.
    while built < 100 {
        let (h, d): (&SmallGraph, usize) = match built {
            0..40 => (&k3, 2),
            40..70 => (&c4, 2),
            _ => (&k4, 3),
        };
        let r = rng.next_range(0.1, 0.9);
        let bound = if d == 2 {
            d2_boundary_p(r).expect("closed form")
        } else {
            minorant::boundary_curve(3.0, &[r]).expect("boundary")[0].p_critical
        };
        if bound < 0.0075 {
            continue;
        }
        let p = rng.next_range((0.25 * bound).max(0.002), bound - 0.005);
        if !(0.0 < p && p <= r) {
            continue;
        }
        let tangent = double_tangent(&GammaCurve::new(p, d as f64).unwrap())
            .expect("solve")
            .expect("inside the region");
        if r < tangent.q_lo + 0.05 || r > tangent.q_hi - 0.05 {
            continue;
        }
        let w = phase::build_break_witness(h, p, r, &schedule).unwrap_or_else(|e| {
            panic!("criterion 4: witness failed at (p, r) = ({p}, {r}), d = {d}: {e}")
        });
        assert!(w.reverify(h, p).expect("reverify"), "reverification failed at ({p}, {r})");
        // Independent re-computation of both sides.
        let t = graphon::hom_density(h, &w.graphon).expect("density");
        let hp = graphon::rate_functional(&w.graphon, p).expect("rate");
        assert!(t > r.powi(h.edge_count() as i32) + 1e-12);
        assert!(hp < repsym::rate::rate(r, p).expect("rate") - 1e-12);
        if d == 2 {
            let cert = phase::spectral_break_certificate(p, r).unwrap_or_else(|e| {
                panic!("criterion 4: spectral certificate failed at ({p}, {r}): {e}")
            });
            assert!(cert.operator_norm > r);
        }
        built += 1;
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "criterion 4 took {elapsed:?}");
    println!("ACCEPTANCE C4 witness suite (100 points): PASS ({elapsed:.2?})");
}

#[test]
fn criterion_05_inequality_suites() {
    let start = Instant::now();
    let mut rng = Xoshiro256::new(0xACC5);
    // Generalized bounded-degree density bound, 1000 graphons x 4 graphs.
    let hs = [
        (SmallGraph::complete(3), 2u32),
        (SmallGraph::cycle(4), 2),
        (SmallGraph::cycle(5), 2),
        (SmallGraph::complete(4), 3),
    ];
    for _ in 0..1000 {
        let k = 1 + (rng.next_below(5) as usize);
        let f = StepGraphon::random(&mut rng, k);
        for (h, d) in &hs {
            let t = graphon::hom_density(h, &f).expect("density");
            let bound = graphon::lp_norm(&f, *d).expect("norm").powi(h.edge_count() as i32);
            assert!(t <= bound + 1e-12, "Holder violated: {t} > {bound}");
        }
    }
    // Operator-norm sandwich and the fourth-power cut-norm bound.
    for _ in 0..1000 {
        let k = 1 + (rng.next_below(6) as usize);
        let f = StepGraphon::random(&mut rng, k);
        let l1 = graphon::lp_norm(&f, 1).expect("norm");
        let l2 = graphon::lp_norm(&f, 2).expect("norm");
        let op = graphon::operator_norm(&f);
        assert!(l1 <= op + 1e-10 && op <= l2 + 1e-10, "sandwich violated");
        let cut = graphon::cut_norm(&(&f).into()).expect("cut");
        assert!(op.powi(4) <= cut + 1e-10, "nonneg fourth-power bound violated");
        let g = SignedStepKernel::random(&mut rng, k);
        let ops = graphon::operator_norm_signed(&g);
        let cuts = graphon::cut_norm(&g).expect("cut");
        assert!(ops.powi(4) <= 4.0 * cuts + 1e-10, "signed fourth-power bound violated");
    }
    // Bipartite-regular homomorphism inequality corpus.
    let corpus = [
        SmallGraph::cycle(4),
        SmallGraph::cycle(6),
        SmallGraph::complete_bipartite(2, 2),
        SmallGraph::complete_bipartite(3, 3),
        SmallGraph::cube_q3(),
    ];
    for _ in 0..40 {
        for g in &corpus {
            let f = StepGraphon::random(&mut rng, 4);
            assert!(graphs::galvin_tetali_check(g, &f).expect("check").holds);
        }
    }
    // The triangle/identity-kernel counterexample must fail the inequality
    // with the exact quoted sides.
    let f_id = StepGraphon::new(vec![0.5, 0.5], vec![1.0, 0.0, 0.0, 1.0]).expect("valid");
    let rep =
        graphs::galvin_tetali_unchecked(&SmallGraph::complete(3), &f_id).expect("report");
    assert!((rep.lhs - 0.25).abs() < 1e-12);
    assert!((rep.rhs - 0.210224).abs() < 1e-6);
    assert!(!rep.holds, "the non-bipartite counterexample must violate the inequality");
    let elapsed = start.elapsed();
    println!("ACCEPTANCE C5 inequality property suites: PASS ({elapsed:.2?})");
}

#[test]
fn criterion_06_erg_anchors() {
    let start = Instant::now();
    // (i) beta2 = 0 recovers the logistic density to 1e-10.
    for i in 0..50 {
        let beta1 = -5.0 + 10.0 * i as f64 / 49.0;
        let m = erg::scalar_maximize(beta1, 0.0, 3.0).expect("scalar");
        assert!(
            (m.maximizers[0] - sigmoid(beta1)).abs() <= 1e-10,
            "(i) failed at beta1 = {beta1}: {} vs {}",
            m.maximizers[0],
            sigmoid(beta1)
        );
    }
    // (ii) alpha = 0.6 (gamma = 1.8 < 2): breaking only below beta1 = -2.
    let k3 = SmallGraph::complete(3);
    for beta2 in [0.2, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let model = erg::ErgModel::new(k3.clone(), 0.6, -2.0 + 1e-3, beta2).expect("model");
        let c = erg::classify(&model).expect("classify");
        assert!(
            !matches!(c.kind, erg::ErgKind::Breaking { .. }),
            "(ii) breaking above the threshold at beta2 = {beta2}"
        );
    }
    let probe = erg::ErgModel::new(k3.clone(), 0.6, -2.0 - 1e-3, 1.0).expect("model");
    let (lo, hi) = match erg::classify(&probe).expect("classify").kind {
        erg::ErgKind::Breaking { beta2_lo, beta2_hi, .. } => (beta2_lo, beta2_hi),
        erg::ErgKind::Indeterminate { .. } => {
            let t = double_tangent(&GammaCurve::new(sigmoid(-2.0 - 1e-3), 2.0).unwrap())
                .expect("solve")
                .expect("below threshold");
            let p = sigmoid(-2.0 - 1e-3);
            let end = |u: f64| {
                u.powf(1.0 - 1.8) * repsym::rate::rate_d1(u, p).expect("interior") / 1.8
            };
            (end(t.q_lo), end(t.q_hi))
        }
        other => panic!("unexpected kind {}", other.name()),
    };
    assert!(lo < hi, "(ii) empty breaking interval just below the threshold");
    let mid = erg::ErgModel::new(k3.clone(), 0.6, -2.0 - 1e-3, 0.5 * (lo + hi)).expect("model");
    assert!(
        matches!(erg::classify(&mid).expect("classify").kind, erg::ErgKind::Breaking { .. }),
        "(ii) midpoint of the interval must be breaking just below the threshold"
    );
    // (iii) alpha = 1 (gamma = 3): the discontinuity curve exists exactly
    // for beta1 < log 2 - 3/2, and the two maximizers at the critical
    // slope are the tangent touch points.
    let threshold = 2f64.ln() - 1.5;
    assert!((threshold + 0.806853).abs() < 1e-6);
    assert!(erg::critical_beta2(threshold + 1e-3, 3.0).expect("ok").is_none());
    assert!(erg::critical_beta2(threshold - 1e-3, 3.0).expect("ok").is_some());
    let crit = erg::critical_beta2(-2.0, 3.0).expect("ok").expect("below threshold");
    let m = erg::scalar_maximize(-2.0, crit, 3.0).expect("scalar");
    assert_eq!(m.maximizers.len(), 2, "(iii) no tie at the critical slope");
    let t = double_tangent(&GammaCurve::new(sigmoid(-2.0), 3.0).unwrap())
        .expect("solve")
        .expect("non-convex");
    assert!((m.maximizers[0] - t.q_lo).abs() <= 1e-8);
    assert!((m.maximizers[1] - t.q_hi).abs() <= 1e-8);
    // (iv) alpha = 2/3 (gamma = d): no breaking cell on a 50 x 50 grid.
    let b1: Vec<f64> = (0..50).map(|i| -5.0 + 5.0 * i as f64 / 49.0).collect();
    let b2: Vec<f64> = (0..50).map(|i| 0.05 + 4.0 * i as f64 / 49.0).collect();
    let cells = erg::phase_plot_data(&k3, 2.0 / 3.0, &b1, &b2).expect("grid");
    assert_eq!(cells.len(), 2500);
    assert!(
        cells
            .iter()
            .all(|c| !matches!(c.classification.kind, erg::ErgKind::Breaking { .. })),
        "(iv) breaking cell found at alpha = 2/3"
    );
    let elapsed = start.elapsed();
    println!("ACCEPTANCE C6 ERG anchors (i)-(iv): PASS ({elapsed:.2?})");
}

#[test]
fn criterion_07_exact_small_n_oracle() {
    let start = Instant::now();
    let k3 = SmallGraph::complete(3);
    let rep = sampler::exact_conditional_upper_tail(6, 0.2, &k3, 0.5).expect("enumeration");
    let enum_time = start.elapsed();
    assert!(enum_time.as_secs_f64() < 10.0, "criterion 7 took {enum_time:?}");
    assert!(
        rep.conditional_mean_edge_density > 0.2,
        "conditional mean {} not above p",
        rep.conditional_mean_edge_density
    );
    let mut last = 0.0;
    for i in 1..=7 {
        let r = 0.1 * i as f64;
        let rep = sampler::exact_conditional_upper_tail(6, 0.2, &k3, r).expect("enumeration");
        assert!(
            rep.conditional_mean_edge_density >= last - 1e-12,
            "conditional mean not monotone at r = {r}"
        );
        last = rep.conditional_mean_edge_density;
    }
    let elapsed = start.elapsed();
    println!(
        "ACCEPTANCE C7 exact small-n conditional oracle: PASS \
         (32768 graphs in {enum_time:.2?}, monotone sweep in {elapsed:.2?})"
    );
}

#[test]
fn criterion_08_sampler_stationarity() {
    let start = Instant::now();
    // Exact stationary law at n = 5 versus Glauber occupancy.
    let n = 5usize;
    let (alpha, beta1, beta2) = (1.0, 1.0, 0.5);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    let m = pairs.len();
    let nf = n as f64;
    let binom = m as f64;
    let mut weights = vec![0.0f64; 1 << m];
    let mut total = 0.0;
    for (mask, w) in weights.iter_mut().enumerate() {
        let mut adj = [0u8; 5];
        let mut edges = 0.0;
        for (bit, &(u, v)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
                edges += 1.0;
            }
        }
        let mut triangles = 0.0;
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    if adj[a] >> b & 1 == 1 && adj[b] >> c & 1 == 1 && adj[a] >> c & 1 == 1 {
                        triangles += 1.0;
                    }
                }
            }
        }
        let t2 = 2.0 * edges / (nf * nf);
        let t3 = 6.0 * triangles / nf.powi(3);
        *w = (binom * (beta1 * t2 + beta2 * t3.powf(alpha))).exp();
        total += *w;
    }
    for w in &mut weights {
        *w /= total;
    }
    let params = McmcParams::new(n, HKind::Triangle, alpha, beta1, beta2, 0, 2026);
    let mut chain = GlauberChain::new(&params).expect("chain");
    for _ in 0..100_000 {
        chain.step();
    }
    let mut occupancy = vec![0u64; 1 << m];
    let steps = 1_000_000u64;
    for _ in 0..steps {
        chain.step();
        occupancy[chain.edge_mask().expect("n is tiny") as usize] += 1;
    }
    let tv: f64 = weights
        .iter()
        .zip(occupancy.iter())
        .map(|(&pi, &count)| (pi - count as f64 / steps as f64).abs())
        .sum::<f64>()
        / 2.0;
    assert!(tv <= 0.05, "criterion 8: total variation {tv} above 0.05");

    // Symmetric-regime mean at n = 40 against the scalar optimizer.
    let u_star = erg::scalar_maximize(-1.0, 0.5, 3.0).expect("scalar").maximizers[0];
    let params =
        McmcParams::new(40, HKind::Triangle, 1.0, -1.0, 0.5, 1_000_000, 2027).with_thinning(400);
    let run = sampler::erg_glauber(&params).expect("run");
    assert!(
        (run.mean_edge_density - u_star).abs() <= 0.05,
        "criterion 8: mean edge density {} vs u* = {u_star}",
        run.mean_edge_density
    );
    let elapsed = start.elapsed();
    println!(
        "ACCEPTANCE C8 sampler stationarity: PASS \
         (TV = {tv:.4}, |mean - u*| = {:.4}, {elapsed:.2?})",
        (run.mean_edge_density - u_star).abs()
    );
}

#[test]
fn criterion_09_hypergraph() {
    let start = Instant::now();
    let fano = LinearHypergraph::fano_plane();
    let w = hypergraph::build_hyper_break_witness(&fano, 0.1, 0.5, &phase::default_eps_schedule())
        .expect("fano witness");
    let t = hypergraph::hom_density_hyper(&fano, &w.kernel).expect("density");
    let hp = hypergraph::rate_functional_k(&w.kernel, 0.1).expect("rate");
    assert!(t > 0.5f64.powi(7) + 1e-12, "criterion 9: density side not strict");
    assert!(
        hp < repsym::rate::rate(0.5, 0.1).expect("rate") - 1e-12,
        "criterion 9: rate side not strict"
    );
    // k-independence on a 100-point grid.
    let mut compared = 0;
    for i in 1..=10 {
        let p = 0.03 * i as f64;
        for j in 1..=10 {
            let r = j as f64 / 11.0;
            if r < p {
                continue;
            }
            for d in [2usize, 3] {
                let graph_verdict = phase::classify_upper_tail_verdict(d, p, r).expect("verdict");
                for k in [2usize, 3, 4] {
                    let hyper = hypergraph::classify_upper_tail_hyper(d, k, p, r).expect("verdict");
                    assert_eq!(
                        graph_verdict.verdict_name(),
                        hyper.verdict_name(),
                        "criterion 9: verdict mismatch at (p, r, d, k) = ({p}, {r}, {d}, {k})"
                    );
                    compared += 1;
                }
            }
        }
    }
    assert!(compared >= 100, "only {compared} grid comparisons ran");
    let elapsed = start.elapsed();
    println!("ACCEPTANCE C9 hypergraph witness and k-independence: PASS ({elapsed:.2?})");
}

#[test]
fn criterion_10_derivative_and_convexity_checks() {
    let start = Instant::now();
    // Derivatives against central finite differences at 1e3 random points.
    let mut rng = Xoshiro256::new(0xACC6);
    let cases = [(0.05, 2.0), (0.2, 3.0), (0.07, 6.0), (0.5, 1.0)];
    for _ in 0..1000 {
        let &(p, gamma) = &cases[rng.next_below(cases.len() as u64) as usize];
        let c = GammaCurve::new(p, gamma).expect("valid");
        let x = rng.next_range(1e-3, 1.0 - 1e-3);
        let h = 1e-6;
        let fd1 = (c.value(x + h).unwrap() - c.value(x - h).unwrap()) / (2.0 * h);
        let d1 = c.d1(x).unwrap();
        assert!(
            ((d1 - fd1) / d1.abs().max(1e-6)).abs() <= 1e-6,
            "criterion 10: d1 mismatch at (p, gamma, x) = ({p}, {gamma}, {x})"
        );
        let fd2 = (c.d1(x + h).unwrap() - c.d1(x - h).unwrap()) / (2.0 * h);
        let d2 = c.d2(x).unwrap();
        assert!(
            ((d2 - fd2) / d2.abs().max(1e-6)).abs() <= 1e-6,
            "criterion 10: d2 mismatch at (p, gamma, x) = ({p}, {gamma}, {x})"
        );
    }
    // Minorant midpoint convexity on 1e4-point grids.
    for &(p, gamma) in &[(0.05, 2.0), (0.1, 3.0), (0.02, 1.8)] {
        let m = Minorant::new(GammaCurve::new(p, gamma).expect("valid")).expect("minorant");
        let n = 10_000;
        let vals: Vec<f64> = (0..=n).map(|i| m.value(i as f64 / n as f64).unwrap()).collect();
        for w in vals.windows(3) {
            assert!(
                w[1] <= 0.5 * (w[0] + w[2]) + 1e-12,
                "criterion 10: minorant not midpoint-convex at (p, gamma) = ({p}, {gamma})"
            );
        }
    }
    // Inflection count flips between 2 and 0 across p0.
    for gamma in [1.8, 2.0, 3.0, 6.0] {
        let pc = p0(gamma).expect("gamma > 1");
        let below = GammaCurve::new(pc - 1e-3, gamma).expect("valid");
        let above = GammaCurve::new(pc + 1e-3, gamma).expect("valid");
        let pts = below.inflection_points().expect("solve");
        assert!(pts.is_some(), "criterion 10: missing inflections below p0({gamma})");
        let (xa, xb) = pts.unwrap();
        assert!(below.d2(0.5 * (xa + xb)).unwrap() < 0.0);
        assert!(above.inflection_points().expect("solve").is_none());
    }
    let elapsed = start.elapsed();
    println!("ACCEPTANCE C10 derivative and convexity checks: PASS ({elapsed:.2?})");
}
