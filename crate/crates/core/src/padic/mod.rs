//! Truncated p-adic arithmetic: `Q_p` scalars with floating valuation, the
//! unramified extension `W(F_q)[1/p]` with exact Frobenius, its residue field,
//! Teichmüller lifts and the p-adic log/exp pair.

pub mod float;
pub mod modulus;
pub mod residue;
pub mod unramified;
pub mod zpoly;

pub use float::PadicFloat;
pub use modulus::{hensel_lift_modulus, UnramifiedModulus};
pub use residue::Fq;
pub use unramified::{padic_exp, padic_log, teichmueller, ElemJson, UnramifiedElem};

/// Default p-adic working precision.
pub const DEFAULT_PRECISION: u32 = 12;
