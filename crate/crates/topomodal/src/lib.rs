//! File formats, randomized generators, corpus sweeps, the acceptance
//! suite and the command-line front end for [`topomodal_core`].

pub mod acceptance;
pub mod cli;
pub mod format;
pub mod gen;
pub mod harness;
