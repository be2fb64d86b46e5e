//! Smale quotients of normalized Blaschke products, the explicit bounds
//! they are compared with, and the two extremal families.
//!
//! For `B` with a simple zero at the origin and critical points `ζ_i`,
//! the quotients are `|B(ζ_i) / (ζ_i B'(0))|`; `S` is their minimum and `T`
//! their maximum.

mod bounds;
mod families;
mod prop1;
mod report;
mod rescale;

pub use bounds::{lemma1_bound, thm1_bound, thm3_lower, THM1_SLACK};
pub use families::{
    thm2_closed_s, thm2_critical_points, thm2_critical_value, thm2_family, thm4_closed_t,
    thm4_family, unit_root, FAMILY_MARGIN,
};
pub use prop1::{prop1_check, BoundVariant, Prop1Comparison, Prop1Report};
pub use report::{general_quotients, smale_quotients, CriticalQuotient, QuotientReport, Violation};
pub use rescale::{rescale_family, RescalePair, RescaledCritical};
