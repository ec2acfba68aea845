//! Frequency cube and dual lattice Γ_N, and covers Γ_H of the group.

mod coordbox;
mod cover;
mod frequency;

pub use coordbox::CoordBox;
pub use cover::{
    build_greedy_cover, build_tiling_cover, has_ideal_chain, periodize, verify_cover, CoverGammaH,
    CoverReport,
};
pub use frequency::{
    compute_frequency_box, exponential_gram_residual, lattice_shell, lattice_spiral, BoxKind,
    FrequencyBox, SAFETY_FACTOR,
};
