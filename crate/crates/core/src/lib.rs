//! Algebra of normal, convex, upper-semicontinuous fuzzy truth values
//! under sup-t-norm convolution.
//!
//! The crate evaluates and classifies t-norms on the unit interval
//! ([`tnorm`]), represents truth values exactly as piecewise-affine
//! functions with jumps ([`truth`]), turns them into nested alpha-cut
//! families ([`cuts`]), convolves them with three engines of different
//! cost/exactness trade-offs ([`convolve`]), decides the convolution order
//! two independent ways ([`order`]), and verifies the t-norm axioms,
//! closure laws and the counterexample constructions at desk scale
//! ([`harness`]).
//!
//! Scalars on `[0, 1]` are arbitrary-precision rationals; everything in the
//! function, cut and order layers is exact. The sampling oracles and the
//! cut engine's inner scan run on `f64` where stated tolerances apply.

pub mod convolve;
pub mod cuts;
pub mod error;
pub mod harness;
pub mod order;
pub mod tnorm;
pub mod truth;
pub mod unit;

pub use convolve::{
    convolve3_oracle, convolve_cuts, convolve_cuts_brute, convolve_cuts_with_witnesses,
    convolve_oracle, meet_min, min_star_convolve_at, CutWitness, F64Tv, SampledFunction,
};
pub use cuts::{CutFamily, Interval};
pub use error::{Error, Result};
pub use harness::{
    check_axioms, check_closure_oracle, check_tr_norm, hypothesis_stars, hypothesis_tris,
    necessity_demo, sample_lu, sample_lu_with_denominator, standard_ordinal_sum, trial_seed,
    AxiomReport, Law, NecessityCase, NecessityParams, NecessityWitness, SampleShape,
};
pub use order::{adapted_grid, leq_convolution, leq_cutwise};
pub use tnorm::{
    CancellativityProbe, CancellativityWitness, ContinuityClass, ContinuityVerdict, InnerTnorm,
    Summand, TnormKind, TnormSpec,
};
pub use truth::{CutComponent, PropertyReport, Segment, TruthValue};
pub use unit::UnitValue;
