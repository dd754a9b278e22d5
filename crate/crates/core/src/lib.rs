//! Replica-symmetry phase diagrams for dense random graphs.
//!
//! The crate computes, at desk scale, the objects that govern upper-tail
//! large deviations of regular subgraph densities and of the spectral
//! radius in G(n,p), and the symmetric/broken phases of exponential random
//! graph models:
//!
//! * [`rate`] — the binomial rate function `h_p`, the entropy `h`, the
//!   transformed curve `x -> h_p(x^{1/gamma})` and its derivatives,
//!   the convexity threshold `p0(gamma)` and inflection points.
//! * [`minorant`] — the convex minorant of the transformed curve: the lower
//!   common double tangent, touch points, region membership and phase
//!   boundary curves.
//! * [`graphon`] — finite step-graphon arithmetic: rate functionals,
//!   `L^d`/cut/operator norms and homomorphism densities.
//! * [`graphs`] — small simple graphs: regularity, homomorphism counting,
//!   spectral radius, and homomorphism inequality checkers.
//! * [`phase`] — upper/lower tail phase classification and explicit
//!   three-block symmetry-breaking witnesses.
//! * [`erg`] — exponential random graph models with a density exponent:
//!   scalar optimization, discontinuity curve, breaking intervals.
//! * [`hypergraph`] — linear k-uniform hypergraph densities on step
//!   k-kernels and the hypergraph witness construction.
//! * [`sampler`] — G(n,p) sampling, exact small-n conditional enumeration,
//!   Glauber dynamics for the exponential model, and empirical
//!   cut distance to a constant.

pub mod erg;
mod error;
pub mod graphon;
pub mod graphs;
pub mod hypergraph;
mod linalg;
pub mod minorant;
pub mod phase;
pub mod rate;
pub mod rng;
pub mod sampler;
mod solve;

pub use erg::{ErgClassification, ErgKind, ErgModel};
pub use error::{Error, Result};
pub use graphon::{SignedStepKernel, StepGraphon};
pub use graphs::SmallGraph;
pub use hypergraph::{LinearHypergraph, StepKernelK};
pub use minorant::{DoubleTangent, Minorant};
pub use phase::{BreakWitness, PhaseClassification, TailVerdict};
pub use rate::GammaCurve;
pub use sampler::{GlauberChain, McmcParams, McmcRun};
