//! Exact commutative algebra for multiplicity stratification of affine schemes.

pub mod blowup;
pub mod cover;
pub mod equimult;
pub mod error;
pub mod field;
pub mod groebner;
pub mod hilbert;
pub mod ideal;
pub mod linalg;
pub mod local;
pub mod monomial;
pub mod oracle;
pub mod order;
pub mod parse;
pub mod poly;
pub mod random;
pub mod strata;

pub use error::{Error, Result};
pub use field::{Field, FieldElem};
pub use ideal::Ideal;
pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use poly::Poly;
