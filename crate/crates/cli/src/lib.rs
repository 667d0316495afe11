//! Command-line front end for the stream-learning toolkit: synthetic
//! dataset generation, prequential experiment grids, and report emission.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod rows;
