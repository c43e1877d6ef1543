//! Extended-precision scalars and truncated Taylor jets.

pub mod jet;
pub mod scalar;

pub use jet::{recenter_polynomial, Jet, RationalJet};
pub use scalar::{PScalar, Precision};
