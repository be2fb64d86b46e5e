//! Complex polynomial arithmetic, root finding, and the polynomial-side
//! Smale quotients.

mod poly;
mod quotients;
mod roots;

pub use poly::{ComplexPolynomial, TRIM_THRESHOLD};
pub use quotients::{
    poly_smale_quotients, poly_smale_quotients_with, PolyQuotients, DEGENERATE_CRITICAL_MODULUS,
};
pub use roots::{
    backward_error, modulus_argument_order, poly_roots, Root, RootFinder, RootSet,
    DEFAULT_CLUSTER_RADIUS, DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE, MULTIPLE_ROOT_TOLERANCE,
};
