//! The coadjoint map on H, its Jacobian at the identity, and the local chart Θ.

mod beta;
mod chart;

pub use beta::{
    beta, beta_jacobian, coadjoint_jacobian, immersion_check, select_index_set, ImmersionReport,
    IMMERSION_TOL,
};
pub use chart::{
    newton, ChartOptions, ThetaChart, WeightMethod, INVERSE_RESIDUAL_TOL, MAX_NEWTON, NEWTON_TOL,
};
