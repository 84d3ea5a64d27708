//! Coefficient arithmetic: the finite fields `F_p`, `F_{p^2}` and truncated
//! p-adic scalars.

pub mod field;
pub mod linalg;
pub mod padic;

pub use field::{field_arith, is_prime, solve_unit_quadratic, Field, FieldElement, FieldOp};
pub use padic::{lucas_binomial, padic_arith, parse_rational, PadicOp, PadicScalar, ZpDigits};
