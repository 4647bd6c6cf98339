//! Zigzag categories, zigzag colimits and contraction/expansion homotopies
//! for associative n-diagrams.

pub mod catcore;
pub mod colimit;
pub mod diagram;
pub mod fixtures;
pub mod homotopy;
pub mod monotone;
pub mod render;
pub mod service;
pub mod workspace;
pub mod zigzag;
