use thiserror::Error;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("speed must be positive, got {0}")]
    NonPositiveSpeed(f64),

    #[error("need at least 65 theta samples (N >= 64 intervals), got {0}")]
    TooFewSamples(usize),

    #[error("theta samples are not a continuous lift: |theta[{index}+1] - theta[{index}]| = {jump} >= pi")]
    BranchJump { index: usize, jump: f64 },

    #[error("curve must be normalized before this operation")]
    NotNormalized,

    #[error("parameter {0} outside [0, 1]")]
    ParameterOutOfRange(f64),

    #[error("cuts must be nondecreasing in [0, 1]: {0:?}")]
    InvalidCuts(Vec<f64>),

    #[error("query point lies on the loop (distance {dist} < {eps})")]
    PointOnLoop { dist: f64, eps: f64 },

    #[error("loop sampling too coarse: angular step {step} >= pi/2 at max refinement")]
    AngularStep { step: f64 },

    #[error("winding rounding residual {0} >= 0.1; loop samples inconsistent")]
    WindingResidual(f64),

    #[error("loop samples are not closed (first != last)")]
    OpenLoop,

    #[error("not a permutation of 1..={k}: {values:?}")]
    NotAPermutation { k: usize, values: Vec<usize> },

    #[error("permutation sizes differ: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("index {i} out of range 1..={k}")]
    IndexOutOfRange { i: usize, k: usize },

    #[error("cyclic shift {0}: no rearrangement can close the curve")]
    CyclicShift(String),

    #[error("choose_reduction_index precondition failed: {0}")]
    ReductionPrecondition(String),

    #[error("(l1, l2) = ({0}, {1}) outside D3")]
    OutsideD3(f64, f64),

    #[error("total turning angle {0} is not a non-zero multiple of 2*pi")]
    NotTurningMultiple(f64),

    #[error("C0 hypothesis fails: |gamma(1)| = {lhs} < {rhs}")]
    C0ConditionFails { lhs: f64, rhs: f64 },

    #[error("speeds differ beyond tolerance: {0} vs {1}")]
    SpeedMismatch(f64, f64),

    #[error("resolution budget exceeded: {points} grid points > {budget}")]
    ResolutionBudget { points: u128, budget: u128 },

    #[error("sigma has {0} entries but k = {1}")]
    SigmaKMismatch(usize, usize),

    #[error("invalid curve JSON: {0}")]
    Json(String),

    #[error("resolution must be a power of two >= 64, got {0}")]
    BadResolution(usize),
}

pub type Result<T> = std::result::Result<T, CurveError>;
