//! Index, subharmonicity, boundary-curve and preimage computations attached to
//! a homogeneous CR-singular term `p(z, z̄)`.

mod curve;
mod laplacian;
mod maslov;
mod preimage;

pub use curve::{curve_analysis, curve_analysis_with, write_coincidences_csv, write_curve_csv, CoincidencePair, CurveAnalysis};
pub use laplacian::{laplacian_symbolic, subharmonicity_check, subharmonicity_check_with, SubharmonicityReport};
pub use maslov::{maslov_index_algebraic, maslov_index_algebraic_with, maslov_index_winding, maslov_index_winding_with};
pub use preimage::{
    auxiliary_map, brute_force_preimage_count, constraint_minimum, exists_four_preimages, min_preimage_threshold,
    preimage_count, preimage_lambdas, unit_modulus_angles,
};
