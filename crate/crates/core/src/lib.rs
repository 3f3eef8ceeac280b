//! Closing constant-speed planar curves by cutting them into arcs and
//! regluing the arcs in a new order with matching tangent frames.
//!
//! The library is organized around a turning-angle curve representation
//! (`curve_kernel`), the cut/reglue machinery and endpoint map
//! (`rearrange`), the permutation combinatorics of arc orders (`perm`),
//! and winding-number based solvers that locate closing cuts (`solver`).

pub mod curve_kernel;
pub mod error;
pub mod gen;
pub mod geom;
pub mod perm;
pub mod rearrange;
pub mod solver;

pub use curve_kernel::{
    max_radius, position, winding_number, CurveTable, FourierTerm, LoopSamples, ThetaSpec,
    TurningCurve, DEFAULT_RESOLUTION,
};
pub use error::{CurveError, Result};
pub use geom::{wrap_angle, Vec2};
pub use perm::{
    build_reduction_plan, choose_reduction_index, compose, contract, cyclic_shift, ChainStep,
    Perm, ReductionPlan,
};
pub use rearrange::{
    e3_closed_form, endpoint_map, rearranged, split, tangent_mismatch, Arc, Composite, Cuts,
};
pub use solver::{
    certify_zk_nonclosure, check_c0_condition, find_all_two_cut, loop_winding_profile,
    oracle_grid, solve_c0, solve_k, solve_two_cut, solve_two_cut_to_target, C0Condition, Method,
    OracleResult, SolveResult, SolveStatus, SolverConfig, WindingProfile, ZkCertificate,
};
