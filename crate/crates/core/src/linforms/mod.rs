//! Systems of affine-linear forms and the quantities attached to them:
//! size, complexity, local factors, singular products, the archimedean
//! volume factor, and the explicit system behind the `k Z ⊂ D · K`
//! decomposition.

mod complexity;
mod gtz;
mod kronecker;
mod local;
mod system;
mod volume;

pub use complexity::{complexity, Complexity, MAX_COMPLEXITY_FORMS};
pub use gtz::{box_max_value, gtz_empirical_count, GtzCount};
pub use kronecker::{
    build_kronecker_system, kronecker_coefficients, search_m_prime, verify_product_representation,
    KroneckerSearchResult, ProductReport, MAX_KRONECKER_R,
};
pub use local::{
    admissible_witness, local_factor, local_factor_enumerated, local_factor_with_budget,
    point_is_admissible, singular_product, DEFAULT_ENUMERATION_BUDGET,
};
pub use system::{size_norm, AffineForm, AffineSystem};
pub use volume::{beta_infinity_mc, VolumeEstimate};
