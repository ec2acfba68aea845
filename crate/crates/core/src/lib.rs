//! Frames of exponentials and windows for monomial representations of split groups
//! G = N ⋊ H, built from a local chart of the coadjoint map on H.

pub mod catalog;
pub mod coadjoint;
pub mod error;
pub mod frame;
pub mod lie;
pub mod linalg;
pub mod pipeline;
pub mod quadrature;
pub mod sampling;
pub mod specfile;
pub mod windows;

pub use error::{FrameError, Result};
