//! Design and simulation toolkit for micromachined on-body thermoelectric
//! generators: material figures of merit, stepped-leg unit-cell thermal
//! models (analytic and voxelized), lumped source-to-ambient networks, and
//! full-array electrical predictions, behind a batch CLI.

pub mod cli;
pub mod config;
pub mod error;
pub mod generator;
pub mod geometry;
pub mod materials;
pub mod network;
pub mod output;
pub mod solver;
pub mod thermal;
pub mod units;
pub mod voxel;

pub use error::{Error, Result};
