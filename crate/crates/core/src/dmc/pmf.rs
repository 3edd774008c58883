//! Dense joint distributions over named variables.

pub struct VarSpec;
pub struct JointPmf;
pub fn mi_discrete() {}
