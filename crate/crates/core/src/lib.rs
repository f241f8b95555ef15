//! Exact computational commutative algebra for module closure operations.
//!
//! The crate is layered bottom-up:
//!
//! * [`polyarith`]: exact fields, monomial orders, polynomials and their text syntax;
//! * [`gb`]: Buchberger's algorithm for submodules of free modules, normal forms,
//!   syzygies, intersections, colons and toric ring-map kernels;
//! * [`ring`]: graded quotient rings `P/I` with weighted gradings;
//! * [`fpmod`]: finitely presented graded modules, tensor products, kernels,
//!   minimal presentations and free resolutions;
//! * [`closure`]: closure operations (trivial, module closures `cl_S`,
//!   intersections, monomial integral closure) with instance-level axiom checkers;
//! * [`modify`]: finite chains of parameter and containment module modifications.

pub mod closure;
pub mod error;
pub mod fpmod;
pub mod gb;
pub mod modify;
pub mod polyarith;
pub mod ring;

pub use error::{Error, ParseError, Result};
