//! Factorization of `X^n - 1` over finite fields of odd characteristic and
//! the decision of when all of its irreducible factors are binomials or
//! trinomials ("3-sparse").
//!
//! The crate is organised bottom-up:
//!
//! - [`field`]: `F_q` and its quadratic extension, element orders, roots of unity.
//! - [`poly`]: dense polynomials over a field.
//! - [`factor`]: a general squarefree / distinct-degree / equal-degree factorizer.
//! - [`cyclotomic`]: cyclotomic polynomials `Phi_d` over `F_q`.
//! - [`orders`]: valuations, lifting the exponent, multiplicative orders.
//! - [`sparsity`]: the sparsity criterion, the structured factorization and
//!   non-sparsity witnesses.
//! - [`cli`]: the command-line front end.

pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod factor;
pub mod field;
pub mod orders;
pub mod poly;
pub mod sparsity;

pub use error::{Error, Result};
pub use factor::Factorization;
pub use field::{FieldCtx, FieldElement, FieldOp, Level};
pub use poly::Polynomial;
