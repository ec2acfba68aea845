//! B-spline partitions of unity, Parseval and indicator windows, and test functions.

mod bspline;
mod testfn;
mod window;

pub use bspline::{bspline, knots};
pub use testfn::{bumps_window, test_function, Bump, BumpPlacement};
pub use window::{
    fitted_partition_window, indicator_window, parseval_window, product_window, tabulated_window,
    EvalFn, PartitionWindow, Window, WindowKind, SUPPORT_PAD,
};
