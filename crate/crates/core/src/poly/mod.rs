//! Exact polynomial arithmetic over the integers and over prime fields.

pub mod factor;
mod ff;
mod int;
pub mod modp;
mod parse;
pub mod rational;
pub mod roots;
mod sturm;

pub use factor::{factor_mod_p, factor_modpoly, is_irreducible_mod_p, is_prime_u64};
pub use ff::FiniteFieldElement;
pub use int::IntPolynomial;
pub use modp::ModPolynomial;
pub use parse::{parse_rational_poly, write_poly};
pub use roots::{isolate_complex_roots, isolate_complex_roots_with_cap, RootBox};
pub use sturm::count_real_roots;
