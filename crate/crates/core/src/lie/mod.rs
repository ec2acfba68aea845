//! Structure constants, brackets, ad-exponentials, group law and Haar density of H.

mod group;
mod haar;
mod spec;

pub use group::{BchLaw, GroupModel, GroupPoint, MatrixLaw, NEWTON_MAX_ITER};
pub use haar::{
    finite_difference_density, maurer_cartan_density, DensityFn, HaarMeasure, HaarSource,
    DEGENERACY_TOL, FD_STEP,
};
pub use spec::{LieSplitSpec, ValidationReport, JACOBI_TOL, MAX_BCH_STEP, REALIZATION_TOL};
