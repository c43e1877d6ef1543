//! Command-line front end for `aim-spectrum`: solves, table reproduction,
//! angular-momentum sweeps and solver comparisons.

// `!(a < b)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod output;
pub mod reference;
pub mod run;
