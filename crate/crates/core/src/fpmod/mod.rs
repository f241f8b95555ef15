//! Finitely presented graded modules over quotient rings.

mod module;
mod resolution;
mod submodule;

pub use module::FPModule;
pub use resolution::{FreeResolution, RegularityFailure, RegularityReport};
pub use submodule::{MembershipCertificate, ModuleMap, Submodule};
