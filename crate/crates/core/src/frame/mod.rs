//! Representation operators, frame coefficients and sums, periodization bounds and verification.

mod analysis;
mod coefficients;
mod report;

pub use analysis::{
    estimate_frame_bounds, necessity_check, oracle_identity_check, periodization, rep_apply, rep_apply_h,
    rep_apply_n, tonelli_rhs, verify_onb, FrameBounds, OnbReport, OracleCheck, RepElement, NECESSITY_TOL,
};
pub use coefficients::{
    frame_coefficient, frame_sum, norm_squared, Coefficient, FrameSum, SumOptions, COEFF_QUAD_RTOL,
    MAX_DOUBLINGS, SUM_QUAD_RTOL,
};
pub use report::{verify_frame, FrameReport, TestRow, Thresholds, Verdict, VerifyConfig};
