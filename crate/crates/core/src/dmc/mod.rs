//! Exact rate-region evaluation on small discrete memoryless channels.

pub mod pmf;

pub use pmf::{mi_discrete, JointPmf, VarSpec};
