//! Command-line surface for the repsym library.

mod svg;
mod verify;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use repsym::erg::{self, ErgKind, ErgModel};
use repsym::graphs::SmallGraph;
use repsym::hypergraph::{self, LinearHypergraph};
use repsym::minorant::{self, Minorant};
use repsym::phase::{self, PhaseClassification};
use repsym::rate::GammaCurve;
use repsym::sampler::{self, HKind, McmcParams};

#[derive(Parser)]
#[command(
    name = "repsym",
    version,
    about = "Replica-symmetry phase diagrams for dense random graphs",
    long_about = "Computes phase boundaries and convex minorants for regular-subgraph and \
                  spectral upper tails, builds symmetry-breaking witnesses, classifies \
                  exponential random graph models, runs desk-scale samplers, and verifies \
                  the library's inequality suites.\n\nGrid arguments use START:END:COUNT, \
                  e.g. --b2grid 0:4:81."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    /// Comma-separated values (the primary artifact).
    #[default]
    Csv,
    /// A fixed-viewport polyline/scatter plot.
    Svg,
}

#[derive(Args)]
struct OutArgs {
    /// Output file path.
    #[arg(long)]
    out: PathBuf,
    /// Output format.
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Phase boundary p_critical(r) for d-regular subgraph upper tails.
    /// CSV columns: r,p_critical,gamma.
    Boundary {
        /// Subgraph degree d >= 2.
        #[arg(long)]
        d: usize,
        /// Number of interior r grid points.
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Curve, convex minorant and tangent line of x -> h_p(x^{1/gamma}).
    /// CSV columns: x,curve,minorant,tangent (tangent empty when the curve
    /// is convex).
    Minorant {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        gamma: f64,
        /// Number of interior x grid points.
        #[arg(long, default_value_t = 400)]
        grid: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Classify the upper tail of d-regular subgraph counts at (p, r).
    Classify {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        r: f64,
        /// Optional d-regular witness graph (edge-list file).
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Build and save a symmetry-breaking witness report at (p, r).
    Witness {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        r: f64,
        /// d-regular witness graph (edge-list file).
        #[arg(long)]
        graph: PathBuf,
        /// Output file path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify the spectral-radius upper tail at (p, r) and, in the
    /// breaking phase, print the eigenvector certificate.
    SpectralClassify {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        r: f64,
    },
    /// Classify an exponential random graph model.
    ErgClassify {
        /// d-regular subgraph H (edge-list file).
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta1: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta2: f64,
    },
    /// Classify an ERG model over a (beta1, beta2) grid.
    /// CSV columns: beta1,beta2,kind,u_star,u_star2.
    ErgPhase {
        /// d-regular subgraph H (edge-list file).
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        alpha: f64,
        /// beta1 grid as START:END:COUNT.
        #[arg(long, allow_hyphen_values = true)]
        b1grid: String,
        /// beta2 grid as START:END:COUNT.
        #[arg(long, allow_hyphen_values = true)]
        b2grid: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The symmetric-solution trajectory beta2 -> u*.
    /// CSV columns: beta2,u_star.
    ErgTrajectory {
        #[arg(long, allow_negative_numbers = true)]
        beta1: f64,
        #[arg(long)]
        gamma: f64,
        /// beta2 grid as START:END:COUNT.
        #[arg(long, allow_hyphen_values = true)]
        b2grid: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run Glauber dynamics for the ERG model and save the trajectory;
    /// metadata (all parameters and the seed) goes to OUT.meta.
    /// CSV columns: step,edge_density,hom_density.
    SampleErg {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta1: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta2: f64,
        #[arg(long)]
        steps: u64,
        #[arg(long)]
        seed: u64,
        /// Drive the model by C_k density instead of triangles.
        #[arg(long)]
        cycle: Option<usize>,
        /// Override the default burn-in max(1e5, 50 n^2).
        #[arg(long)]
        burn_in: Option<u64>,
        /// Override the default thinning n^2.
        #[arg(long)]
        thinning: Option<u64>,
        /// Output file path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Classify the upper tail for d-regular k-uniform linear hypergraph
    /// densities (the verdict is k-independent).
    HyperClassify {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        r: f64,
    },
    /// Build and save a hypergraph symmetry-breaking witness report.
    HyperWitness {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        r: f64,
        /// Linear d-regular hypergraph (hyperedge-list file: `k n m`
        /// header then m lines of k indices); defaults to the Fano plane.
        #[arg(long)]
        hypergraph: Option<PathBuf>,
        /// Output file path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the inequality property suites; nonzero exit on violation.
    Verify {
        /// One of: holder, gt, nesting, sandwich, all.
        #[arg(long)]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<(), String> {
    match command {
        Command::Boundary { d, grid, out } => boundary(d, grid, out),
        Command::Minorant { p, gamma, grid, out } => minorant_cmd(p, gamma, grid, out),
        Command::Classify { d, p, r, graph } => classify(d, p, r, graph),
        Command::Witness { p, r, graph, out } => witness(p, r, graph, out),
        Command::SpectralClassify { p, r } => spectral_classify(p, r),
        Command::ErgClassify {
            graph,
            alpha,
            beta1,
            beta2,
        } => erg_classify(graph, alpha, beta1, beta2),
        Command::ErgPhase {
            graph,
            alpha,
            b1grid,
            b2grid,
            out,
        } => erg_phase(graph, alpha, &b1grid, &b2grid, out),
        Command::ErgTrajectory {
            beta1,
            gamma,
            b2grid,
            out,
        } => erg_trajectory(beta1, gamma, &b2grid, out),
        Command::SampleErg {
            n,
            alpha,
            beta1,
            beta2,
            steps,
            seed,
            cycle,
            burn_in,
            thinning,
            out,
        } => sample_erg(n, alpha, beta1, beta2, steps, seed, cycle, burn_in, thinning, out),
        Command::HyperClassify { d, k, p, r } => hyper_classify(d, k, p, r),
        Command::HyperWitness {
            p,
            r,
            hypergraph,
            out,
        } => hyper_witness(p, r, hypergraph, out),
        Command::Verify { suite } => run_verify(&suite),
    }
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid '{spec}' is not START:END:COUNT"));
    }
    let start: f64 = parts[0].parse().map_err(|e| format!("grid start: {e}"))?;
    let end: f64 = parts[1].parse().map_err(|e| format!("grid end: {e}"))?;
    let count: usize = parts[2].parse().map_err(|e| format!("grid count: {e}"))?;
    if count == 0 || end < start {
        return Err(format!("grid '{spec}' is empty or reversed"));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    Ok((0..count)
        .map(|i| start + (end - start) * i as f64 / (count - 1) as f64)
        .collect())
}

fn write_out(path: &Path, content: &str) -> Result<(), String> {
    std::fs::write(path, content).map_err(|e| format!("writing {}: {e}", path.display()))
}

fn read_graph(path: &Path) -> Result<SmallGraph, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
    SmallGraph::from_edge_list_text(&text, false).map_err(|e| e.to_string())
}

fn boundary(d: usize, grid: usize, out: OutArgs) -> Result<(), String> {
    if d < 2 {
        return Err(format!("--d {d} must be >= 2"));
    }
    if grid < 2 {
        return Err("--grid must be >= 2".into());
    }
    let r_grid: Vec<f64> = (1..=grid).map(|i| i as f64 / (grid + 1) as f64).collect();
    let points = minorant::boundary_curve(d as f64, &r_grid).map_err(|e| e.to_string())?;
    let content = match out.format {
        Format::Csv => minorant::boundary_csv(&points, d as f64),
        Format::Svg => svg::polyline_svg(
            &[(
                format!("d = {d}"),
                points.iter().map(|pt| (pt.p_critical, pt.r)).collect(),
            )],
            "p_critical",
            "r",
        ),
    };
    write_out(&out.out, &content)?;
    println!("boundary: wrote {} points to {}", points.len(), out.out.display());
    Ok(())
}

fn minorant_cmd(p: f64, gamma: f64, grid: usize, out: OutArgs) -> Result<(), String> {
    let curve = GammaCurve::new(p, gamma).map_err(|e| e.to_string())?;
    let minorant = Minorant::new(curve).map_err(|e| e.to_string())?;
    let xs: Vec<f64> = (1..=grid).map(|i| i as f64 / (grid + 1) as f64).collect();
    let content = match out.format {
        Format::Csv => {
            let mut csv = String::from("x,curve,minorant,tangent\n");
            for &x in &xs {
                let cv = curve.value(x).map_err(|e| e.to_string())?;
                let mv = minorant.value(x).map_err(|e| e.to_string())?;
                let tangent = minorant
                    .tangent()
                    .map(|t| format!("{:.9}", t.line(x)))
                    .unwrap_or_default();
                let _ = writeln!(csv, "{x:.9},{cv:.9},{mv:.9},{tangent}");
            }
            csv
        }
        Format::Svg => {
            let mut series = vec![
                (
                    "curve".to_string(),
                    xs.iter().map(|&x| (x, curve.value(x).unwrap_or(f64::NAN))).collect(),
                ),
                (
                    "minorant".to_string(),
                    xs.iter()
                        .map(|&x| (x, minorant.value(x).unwrap_or(f64::NAN)))
                        .collect(),
                ),
            ];
            if let Some(t) = minorant.tangent() {
                series.push((
                    "tangent".to_string(),
                    xs.iter().map(|&x| (x, t.line(x))).collect(),
                ));
            }
            svg::polyline_svg(&series, "x", "h_p(x^{1/gamma})")
        }
    };
    write_out(&out.out, &content)?;
    match minorant.tangent() {
        Some(t) => println!(
            "minorant: double tangent touches q_lo = {:.9}, q_hi = {:.9}, slope = {:.9}",
            t.q_lo, t.q_hi, t.slope
        ),
        None => println!("minorant: curve is convex (no double tangent)"),
    }
    Ok(())
}

fn print_phase(c: &PhaseClassification) {
    println!("verdict: {}", c.verdict_name());
    match c {
        PhaseClassification::ReplicaSymmetric { rate } | PhaseClassification::Boundary { rate } => {
            println!("rate: {rate:.12}");
        }
        PhaseClassification::SymmetryBreaking {
            symmetric_rate,
            witness,
        } => {
            println!("symmetric_rate: {symmetric_rate:.12}");
            println!("upper_bound: {:.12}", witness.hp_value);
            println!("witness_epsilon: {:.6e}", witness.epsilon);
            println!(
                "witness_density_excess: {:.6e}",
                witness.t_value - witness.target_t
            );
        }
    }
}

fn classify(d: usize, p: f64, r: f64, graph: Option<PathBuf>) -> Result<(), String> {
    let h = graph.map(|path| read_graph(&path)).transpose()?;
    let c = phase::classify_upper_tail(d, p, r, h.as_ref()).map_err(|e| e.to_string())?;
    print_phase(&c);
    Ok(())
}

fn witness(p: f64, r: f64, graph: PathBuf, out: PathBuf) -> Result<(), String> {
    let h = read_graph(&graph)?;
    let w = phase::build_break_witness(&h, p, r, &phase::default_eps_schedule())
        .map_err(|e| e.to_string())?;
    write_out(&out, &w.to_report_text())?;
    println!(
        "witness: eps = {:.6e}, t - target = {:.6e}, hp gain = {:.6e} (saved to {})",
        w.epsilon,
        w.t_value - w.target_t,
        w.target_hp - w.hp_value,
        out.display()
    );
    Ok(())
}

fn spectral_classify(p: f64, r: f64) -> Result<(), String> {
    let c = phase::classify_spectral(p, r).map_err(|e| e.to_string())?;
    print_phase(&c);
    if c.is_breaking() {
        let cert = phase::spectral_break_certificate(p, r).map_err(|e| e.to_string())?;
        println!("operator_norm: {:.12}", cert.operator_norm);
        println!(
            "certificate: (T_f u)/u per block = {:.9}, {:.9}, {:.9} (all > r = {r})",
            cert.t_u[0] / cert.u[0],
            cert.t_u[1] / cert.u[1],
            cert.t_u[2] / cert.u[2]
        );
    }
    Ok(())
}

fn print_erg(c: &erg::ErgClassification) {
    println!("kind: {}", c.kind.name());
    println!("psi: {:.12}", c.psi);
    match &c.kind {
        ErgKind::SymmetricUnique { u_star } | ErgKind::Indeterminate { u_star } => {
            println!("u_star: {u_star:.12}");
        }
        ErgKind::SymmetricTwoPhase { u1, u2 } => {
            println!("u_star: {u1:.12}");
            println!("u_star2: {u2:.12}");
        }
        ErgKind::Breaking {
            beta2_lo,
            beta2_hi,
            u_star,
        } => {
            println!("u_star: {u_star:.12}");
            println!("breaking_interval: ({beta2_lo:.12}, {beta2_hi:.12})");
        }
    }
}

fn erg_classify(graph: PathBuf, alpha: f64, beta1: f64, beta2: f64) -> Result<(), String> {
    let h = read_graph(&graph)?;
    let model = ErgModel::new(h, alpha, beta1, beta2).map_err(|e| e.to_string())?;
    let c = erg::classify(&model).map_err(|e| e.to_string())?;
    print_erg(&c);
    Ok(())
}

fn erg_phase(
    graph: PathBuf,
    alpha: f64,
    b1grid: &str,
    b2grid: &str,
    out: OutArgs,
) -> Result<(), String> {
    let h = read_graph(&graph)?;
    let b1 = parse_grid(b1grid)?;
    let b2 = parse_grid(b2grid)?;
    let cells = erg::phase_plot_data(&h, alpha, &b1, &b2).map_err(|e| e.to_string())?;
    let content = match out.format {
        Format::Csv => erg::phase_plot_csv(&cells),
        Format::Svg => {
            let classes = ["SymmetricUnique", "SymmetricTwoPhase", "Breaking", "Indeterminate"];
            let points: Vec<(f64, f64, usize)> = cells
                .iter()
                .map(|c| {
                    let class = classes
                        .iter()
                        .position(|&n| n == c.classification.kind.name())
                        .unwrap_or(0);
                    (c.beta1, c.beta2, class)
                })
                .collect();
            svg::scatter_svg(&points, &classes, "beta1", "beta2")
        }
    };
    write_out(&out.out, &content)?;
    let breaking = cells
        .iter()
        .filter(|c| matches!(c.classification.kind, ErgKind::Breaking { .. }))
        .count();
    println!(
        "erg-phase: {} cells ({} breaking) to {}",
        cells.len(),
        breaking,
        out.out.display()
    );
    Ok(())
}

fn erg_trajectory(beta1: f64, gamma: f64, b2grid: &str, out: OutArgs) -> Result<(), String> {
    let grid = parse_grid(b2grid)?;
    let traj = erg::u_star_trajectory(beta1, gamma, &grid).map_err(|e| e.to_string())?;
    let content = match out.format {
        Format::Csv => erg::trajectory_csv(&traj),
        Format::Svg => svg::polyline_svg(
            &[(
                format!("beta1 = {beta1}, gamma = {gamma}"),
                traj.iter().flat_map(|t| t.u.iter().map(|&u| (t.beta2, u))).collect(),
            )],
            "beta2",
            "u_star",
        ),
    };
    write_out(&out.out, &content)?;
    println!("erg-trajectory: {} grid points to {}", traj.len(), out.out.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn sample_erg(
    n: usize,
    alpha: f64,
    beta1: f64,
    beta2: f64,
    steps: u64,
    seed: u64,
    cycle: Option<usize>,
    burn_in: Option<u64>,
    thinning: Option<u64>,
    out: PathBuf,
) -> Result<(), String> {
    let h = match cycle {
        Some(k) => HKind::Cycle(k),
        None => HKind::Triangle,
    };
    let mut params = McmcParams::new(n, h, alpha, beta1, beta2, steps, seed);
    if let Some(b) = burn_in {
        params = params.with_burn_in(b);
    }
    if let Some(t) = thinning {
        params = params.with_thinning(t);
    }
    let run = sampler::erg_glauber(&params).map_err(|e| e.to_string())?;
    write_out(&out, &run.trajectory_csv())?;
    let meta_path = out.with_extension(match out.extension() {
        Some(ext) => format!("{}.meta", ext.to_string_lossy()),
        None => "meta".to_string(),
    });
    write_out(&meta_path, &run.metadata_text())?;
    println!(
        "sample-erg: {} samples, mean edge density {:.6}, mean hom density {:.6} \
         (trajectory {}, metadata {})",
        run.trajectory.len(),
        run.mean_edge_density,
        run.mean_hom_density,
        out.display(),
        meta_path.display()
    );
    Ok(())
}

fn hyper_classify(d: usize, k: usize, p: f64, r: f64) -> Result<(), String> {
    let verdict = hypergraph::classify_upper_tail_hyper(d, k, p, r).map_err(|e| e.to_string())?;
    println!("verdict: {}", verdict.verdict_name());
    match verdict {
        phase::TailVerdict::ReplicaSymmetric { rate } | phase::TailVerdict::Boundary { rate } => {
            println!("rate: {rate:.12}");
        }
        phase::TailVerdict::SymmetryBreaking { symmetric_rate } => {
            println!("symmetric_rate: {symmetric_rate:.12}");
        }
    }
    Ok(())
}

fn hyper_witness(p: f64, r: f64, path: Option<PathBuf>, out: PathBuf) -> Result<(), String> {
    let h = match path {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| format!("reading {}: {e}", path.display()))?;
            LinearHypergraph::from_text(&text).map_err(|e| e.to_string())?
        }
        None => LinearHypergraph::fano_plane(),
    };
    let w = hypergraph::build_hyper_break_witness(&h, p, r, &phase::default_eps_schedule())
        .map_err(|e| e.to_string())?;
    write_out(&out, &w.to_report_text())?;
    println!(
        "hyper-witness: eps = {:.6e}, t - target = {:.6e}, hp gain = {:.6e} (saved to {})",
        w.epsilon,
        w.t_value - w.target_t,
        w.target_hp - w.hp_value,
        out.display()
    );
    Ok(())
}

fn run_verify(suite: &str) -> Result<(), String> {
    let outcomes: Vec<verify::SuiteOutcome> = match suite {
        "holder" => vec![verify::holder_suite()],
        "gt" => vec![verify::gt_suite()],
        "nesting" => vec![verify::nesting_suite()],
        "sandwich" => vec![verify::sandwich_suite()],
        "all" => vec![
            verify::holder_suite(),
            verify::gt_suite(),
            verify::nesting_suite(),
            verify::sandwich_suite(),
        ],
        other => {
            return Err(format!(
                "unknown suite '{other}' (expected holder, gt, nesting, sandwich, or all)"
            ))
        }
    };
    let mut failed = false;
    for outcome in &outcomes {
        println!("{}", outcome.line());
        failed |= !outcome.passed();
    }
    if failed {
        Err("verification failed".into())
    } else {
        Ok(())
    }
}
