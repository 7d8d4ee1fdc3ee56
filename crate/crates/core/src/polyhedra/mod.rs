//! Exact rational linear algebra and classical polyhedral primitives.

pub mod cone;
pub mod hpoly;
pub mod lp;
pub mod rat;
pub mod trop;
pub mod tu;

pub use cone::{common_refinement, ClassicalFan, ConeGenerators, RationalCone};
pub use hpoly::{is_bounded, lattice_points, solve_vertices, ClassicalPolytope, HPolyhedron};
pub use lp::{affine_strict_feasible, AffineRow};
pub use rat::{frac, rat, rvec, IMat, IVec, RMat, RVec, Rat};
pub use trop::{lex_min_member, minimal_min_representation, strict_feasible, LinFunctional, Strictness, TropExpr};
pub use tu::is_totally_unimodular;
