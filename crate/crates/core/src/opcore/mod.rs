//! Dense complex-matrix kernel for the tracial algebra `M_d`.

mod exponent;
mod operator;
pub mod sample;
mod spectral;

pub use exponent::{conjugate_exponent, Exponent};
pub use operator::{Operator, TracialSpace};
pub use sample::{sample, Sample, SampleKind};
pub use spectral::{
    abs_op, hermitian_eig, hermitian_schatten_norm, is_psd, min_eigenvalue, psd_power,
    schatten_norm, schatten_norm_f64, singular_values, HermitianEigen, CLAMP_TOLERANCE,
    HERMITIAN_TOLERANCE,
};
