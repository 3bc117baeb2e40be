#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod fock;
pub mod gates;
pub mod ladder;
pub mod quad;
pub mod quat;
pub mod report;
pub mod slice;
pub mod special;
pub mod states;
pub mod suite;

pub use error::{Error, Result};
pub use fock::block_product;
pub use fock::{
    inner, left_mul, left_mul_op, op_exp, right_mul_op, FockVector, ProtectedBlock, QOperator,
};
pub use gates::SqueezeParams;
pub use ladder::{build_ladder, LadderSet};
pub use quad::Measure;
pub use quat::{Mat2C, PolarForm, Quaternion, SliceAxis};
pub use report::{Check, LedgerEntry};
pub use suite::{run_suite, SuiteConfig, SuiteReport};
