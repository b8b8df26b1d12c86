//! Exact commutative algebra over the rationals at desk scale.
//!
//! Everything downstream reduces to a handful of primitives on polynomials
//! and ideals in `Q[x_1..x_n]`: Groebner bases with deterministic reduced
//! normal forms, derivative ideals, orders at points and along primes,
//! saturation, minimal primes (heuristic, with an honest failure mode), and
//! Jacobian smoothness.

mod decompose;
mod ideal;
mod poly;

pub use decompose::{codim_of, components_of, dimension_of, factor_poly, is_smooth};
pub use ideal::{check_control, Ideal, TermOrder};
pub use poly::{cmp_degrevlex, Poly, PolyParseError, Q, VarContext};

/// Shared handle to a variable context.
pub type Ctx = std::sync::Arc<VarContext>;
