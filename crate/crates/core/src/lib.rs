//! Workbench for dynamic Gödel–Löb logic: trimodal formulas over finite
//! dynamic posets, quasimodels and their limit-model paths, simulation
//! formulas, and a bounded satisfiability search with checkable certificates.

pub mod cli;
pub mod doc;
pub mod formula;
pub mod model;
pub mod order;
pub mod quasimodel;
pub mod search;
pub mod simformula;
pub mod state;
