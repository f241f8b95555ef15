//! Exact coefficient fields, monomials, monomial orders and polynomials.

mod field;
mod monomial;
pub mod parse;
mod poly;

pub use field::{Coeff, Field};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_expr, PolyExpr};
pub use poly::{PolyRing, Polynomial};

pub(crate) use poly::same_ring;
