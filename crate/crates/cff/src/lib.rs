//! File formats, parallel verification and the command-line front end for
//! [`cff_core`].

pub mod cli;
pub mod formats;
pub mod parallel;
