//! Groebner bases of submodules of free modules over a polynomial ring, and
//! the kernel computations built on them.
//!
//! Everything works in the ambient polynomial ring `P`; computations over a
//! quotient `P/Q` pass the generators of `Q` explicitly.

mod buchberger;
mod ops;
mod vector;

pub use buchberger::{buchberger, GroebnerBasis};
pub use ops::{
    ideal_colon, ideal_intersect, kernel_mod, kernel_of_ring_map, monomial_module_relations,
    syzygy_module, LiftBasis,
};
pub use vector::{Extension, FreeElem, ModuleOrder};
