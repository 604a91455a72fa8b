//! Spatial semidiscretisation: split-form volume terms, general-basis surface
//! corrections, interface coupling and finite volume subcells.

mod coefficients;
mod diagnostics;
mod field;
mod mesh;
mod rhs;
mod subcell;
mod surface;
mod volume;

pub use coefficients::{
    cons_h_residuals, cons_hv_residuals, max_abs, stab_residuals, surface_coefficients,
    SurfaceCoefficients,
};
pub use diagnostics::{diagnostics, Diagnostics};
pub use field::{Rates, SolutionField};
pub use mesh::Mesh;
pub use rhs::{global_rhs, RhsOutput, SemiDiscretisation};
pub use subcell::{fv_subcell_rhs, subcell_detector, SubcellConfig};
pub use surface::surface_correction_terms;
pub use volume::{volume_terms, volume_terms_flux_differencing};

#[cfg(test)]
mod tests;
