//! Identifiable hierarchical polynomial models for finite designs.
//!
//! Given a design `D` of `n` points in `d` dimensions, this crate enumerates
//!
//! * the **statistical fan**: every order ideal (hierarchical model) with `n`
//!   terms whose design matrix has full rank, decided in exact rational
//!   arithmetic when the input allows it;
//! * the **numerical statistical fan** of an empirical design `(D, δ)`: every
//!   inclusion-maximal order ideal that stays identifiable under componentwise
//!   perturbations bounded by `δ`, where numerical (in)dependence of a design
//!   vector is decided by Fassino's first-order residual bound;
//! * single maximal stable order ideals and the numerical Buchberger–Möller
//!   (NBM) pair `(𝒪, G)` for a chosen term order, and the finite family of NBM
//!   outputs over lex/deglex/degrevlex and all coordinate permutations;
//! * the number `p_d(n)` of order ideals with `n` terms in `d` variables.
//!
//! ```
//! use numfan::{Design, EmpiricalDesign, fans};
//!
//! let design = Design::parse_rows(&[
//!     &["1", "1"], &["1", "-1.001"], &["-1", "1"], &["-1", "-1"],
//! ]).unwrap();
//! let exact = fans::statistical_fan(&design).unwrap();
//! assert_eq!(exact.len(), 2);
//!
//! let noisy = EmpiricalDesign::new(design, vec![0.0, 0.0006]).unwrap();
//! let result = fans::numerical_fan(&noisy, &fans::FanOptions::default()).unwrap();
//! assert_eq!(result.fan.len(), 1);
//! ```
//!
//! The `numfan` binary wraps these operations; see [`cli`].

pub mod cli;
pub mod dependence;
pub mod design;
mod error;
pub mod fans;
pub mod linalg;
pub mod terms;

pub use design::{Design, EmpiricalDesign, Scalar};
pub use error::{Error, Result};
pub use fans::{Fan, FanModel, FanOptions};
pub use linalg::Arithmetic;
pub use terms::{OrderIdeal, Term, TermOrder};
