//! Robust D-stability of polytopic and interval polynomial matrices.
//!
//! A family of polynomial matrices is robustly stable over a region `D` when
//! every member's determinant has all its roots in `D`. The checker reduces
//! the family to a finite critical subset of multi-parameter edge families
//! and certifies each one by zero exclusion on the boundary of `D`.

pub mod checker;
pub mod cli;
pub mod critical_set;
pub mod determinant;
pub mod error;
pub mod family;
pub mod interval;
pub mod polynomial;
pub mod region;

pub use checker::{
    critical_family_stable, family_stable, is_stable, monte_carlo_oracle, segment_stable,
    CheckerConfig, Status, Verdict,
};
pub use error::{Error, Result};
pub use polynomial::Polynomial;
pub use region::Region;
