//! Toolkit for recurrence-set families of topological dynamical systems.

pub mod disjoint;
pub mod hyper;
pub mod intfam;
pub mod rational;
pub mod symseq;
pub mod systems;
