//! Decompositions, the first-order boundary value problem, and empirical
//! probes of the mapping properties of `D`, the transforms and the trace.

pub mod bvp;
pub mod decompose;
pub mod dual;
pub mod fields;
pub mod probe;
pub mod solver;

pub use bvp::{solve_first_order_bvp, BvpConfig, BvpReport, BvpSummary};
pub use decompose::{bergman_decompose, bergman_decompose_sobolev, DecompositionResult};
pub use dual::{dual_norm_lower_bound, l2_pairing, DualTrials};
pub use fields::{manufactured_bvp, random_field, random_zero_trace_field, BuiltinField};
pub use probe::{mapping_probe, ProbeConfig, ProbeOperator, ProbeReport};
pub use solver::{LinearSolverConfig, SolveStats};
