//! Computational toolkit for Lubin-Tate formal groups over unramified p-adic
//! rings, the associated division algebras, the quasisymmetric Hopf algebra,
//! multizeta numerics and the flat equisingular connection recursion.
//!
//! Every module works over exact arithmetic (rationals, truncated p-adics with
//! explicit precision bookkeeping) except [`multizeta`], which uses
//! fixed-point reals with rigorous error bounds.

pub mod acceptance;
pub mod cli;
pub mod cm_connection;
pub mod division_algebra;
pub mod error;
pub mod lubin_tate;
pub mod multizeta;
pub mod padic;
pub mod qsym;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};

pub type Rational = num_rational::BigRational;
