//! Experiment drivers and artifact formats around the solver core: run
//! configuration, the run/convergence/campaign commands and the bit-stable
//! CSV/snapshot formats they emit.

pub mod config;
pub mod drivers;
pub mod io;
