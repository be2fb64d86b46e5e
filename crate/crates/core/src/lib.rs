//! Smale mean value quotients for finite Blaschke products.
//!
//! - [`polycore`]: complex polynomials, simultaneous root finding, polynomial
//!   quotients.
//! - [`blaschke`]: products, critical points, disk automorphisms,
//!   normalization.
//! - [`smale`]: quotient reports, universal bounds, extremal families,
//!   rescaling, the critical-value hypothesis.
//! - [`search`]: seeded sampling and multi-start Nelder–Mead.
//! - [`battery`]: the invariant battery over sampled products.
//!
//! ```
//! use num_complex::Complex64;
//! use smale_lab::blaschke::BlaschkeProduct;
//! use smale_lab::smale::smale_quotients;
//!
//! let b = BlaschkeProduct::from_zeros(vec![Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0)])
//!     .unwrap();
//! let report = smale_quotients(&b).unwrap();
//! assert!((report.s - 0.5358984).abs() < 1e-7);
//! ```

pub mod battery;
pub mod blaschke;
pub mod error;
pub mod polycore;
pub mod search;
pub mod serial;
pub mod smale;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/blaschke.md")]
    pub struct Blaschke;
    #[doc = include_str!("../../../book/src/critical-points.md")]
    pub struct CriticalPoints;
    #[doc = include_str!("../../../book/src/quotients.md")]
    pub struct Quotients;
    #[doc = include_str!("../../../book/src/families.md")]
    pub struct Families;
    #[doc = include_str!("../../../book/src/rescaling.md")]
    pub struct Rescaling;
    #[doc = include_str!("../../../book/src/prop1.md")]
    pub struct Prop1;
    #[doc = include_str!("../../../book/src/search.md")]
    pub struct Search;
    #[doc = include_str!("../../../book/src/battery.md")]
    pub struct Battery;
    #[doc = include_str!("../../../book/src/cli.md")]
    pub struct Cli;
}
