//! Exact computation of quantum invariants of 4-dimensional 2-handlebodies
//! (and their signed 3-dimensional renormalization) from the small quantum
//! group u_q(sl2) at a root of unity q = exp(2 pi i / r).
//!
//! The crate is organized around one exact arithmetic kernel and two
//! evaluation paths that must agree:
//!
//! - [`cyclo`] — the cyclotomic field Q(zeta_{8r}) with exact rationals,
//!   Gauss sums, Jacobi symbols and square roots.
//! - [`uqsl2`] — the small quantum group: PBW-ordered products, the full Hopf
//!   structure, R- and M-matrices, ribbon and pivotal elements, integral and
//!   cointegral, and executable axiom verifiers.
//! - [`transmute`] — the braided Hopf algebra structure on the adjoint
//!   representation, with the pre-modular/modular axiom ladder as runnable
//!   verification suites.
//! - [`algdsl`] — a parsed, arity-checked term language for morphism words in
//!   the free braided category on the Hopf generators, evaluated on tensor
//!   powers of the adjoint representation.
//! - [`kirby`] — layered slice diagrams of closed Kirby tangles (framed links
//!   with dotted clasps) and the bead-sliding evaluation of the invariant.
//! - [`cli`] — the command-line front end (`eval`, `invariant`, `verify`,
//!   `table`).
//!
//! Every invariant value is an exact element of Q(zeta_{8r}); floating point
//! enters only for display and numeric cross-checks.

pub mod algdsl;
pub mod cli;
pub mod cyclo;
pub mod kirby;
pub mod linalg;
pub mod report;
pub mod tensor;
pub mod transmute;
pub mod uqsl2;

pub use cyclo::{CycloContext, CycloError, CycloScalar};
pub use report::{CheckResult, VerificationReport};
pub use tensor::TensorElement;
pub use uqsl2::{AlgebraElement, Monomial, UqContext};
