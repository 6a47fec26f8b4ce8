//! Exact computations on Picard-rank-2 Calabi-Yau threefolds with an
//! infinite birational automorphism group: intersection data, the action on
//! `N^1`, section counts on movable classes, and growth exponents of
//! `h^0` along the boundary of the movable cone.

pub mod chow;
pub mod cone_dynamics;
pub mod exact_numbers;
pub mod hilbert_oracle;
pub mod kappa;
pub mod model_file;
pub mod riemann_roch;
pub mod checks;
