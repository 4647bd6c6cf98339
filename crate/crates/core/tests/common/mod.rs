//! Oracles, enumerators and sweeps shared by the integration tests. The
//! oracles never call into the algorithms under test.
#![allow(dead_code)]

pub mod delta;
pub mod golden;
pub mod rigid;
pub mod sweeps;
pub mod zigzag;
