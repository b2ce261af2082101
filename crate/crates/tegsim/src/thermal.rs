//! Thermal resistance of one thermocouple unit cell, two ways: an analytic
//! segmented model with a parallel fill path, and the voxelized steady-state
//! conduction solve. Plus the width / height / mask-catalog sweeps.

use rayon::prelude::*;

use crate::error::Result;
use crate::geometry::{ThermocoupleGeometry, UnitCell};
use crate::solver::{solve_steady_state, SolverOptions};
use crate::voxel::voxelize;

/// Analytic cell resistance with its decomposition.
#[derive(Debug, Clone, Copy)]
pub struct CellResistance {
    /// Combined cell resistance [K/W].
    pub r_cell: f64,
    /// Two legs in parallel [K/W].
    pub r_legs: f64,
    /// Parallel fill path [K/W]; `None` when the fill area is degenerate.
    pub r_fill: Option<f64>,
    pub note: Option<&'static str>,
}

/// R_cell = (1/R_legs + 1/R_fill)⁻¹ with R_legs the two leg columns in
/// parallel (each a series of L/(k·w·t) segments) and R_fill the gap column
/// over the remaining footprint.
pub fn analytic_cell_resistance(cell: &UnitCell, k_leg: f64) -> Result<CellResistance> {
    cell.validate()?;
    let segs = cell.leg_column_segments()?;
    let r_one_leg: f64 = segs
        .iter()
        .filter(|s| s.length > 0.0)
        .map(|s| s.length / (k_leg * s.width * s.thickness))
        .sum();
    let r_legs = r_one_leg / 2.0;

    let fill_area = cell.fill_area();
    if fill_area <= 0.0 {
        return Ok(CellResistance {
            r_cell: r_legs,
            r_legs,
            r_fill: None,
            note: Some("degenerate fill area; legs-only resistance"),
        });
    }
    let r_fill = cell.gap_height / (cell.fill_conductivity * fill_area);
    let r_cell = 1.0 / (1.0 / r_legs + 1.0 / r_fill);
    Ok(CellResistance {
        r_cell,
        r_legs,
        r_fill: Some(r_fill),
        note: None,
    })
}

/// Settings for the numeric backend.
#[derive(Debug, Clone, Copy)]
pub struct NumericSettings {
    /// Voxels per micrometer.
    pub resolution: f64,
    pub max_voxels: usize,
    pub solver: SolverOptions,
}

impl Default for NumericSettings {
    fn default() -> Self {
        NumericSettings {
            resolution: 2.0,
            max_voxels: 20_000_000,
            solver: SolverOptions::default(),
        }
    }
}

/// Numeric cell resistance with solve diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct NumericCellResistance {
    pub r_cell: f64,
    pub iterations: usize,
    pub residual: f64,
    pub energy_defect: f64,
}

/// R = (T_bottom - T_top) / Q from the voxel solve.
pub fn cell_resistance_numeric(
    cell: &UnitCell,
    k_leg: f64,
    settings: &NumericSettings,
) -> Result<NumericCellResistance> {
    let grid = voxelize(cell, k_leg, settings.resolution, settings.max_voxels)?;
    // Magnitude is immaterial (linear problem); 1 μW keeps values readable.
    let sol = solve_steady_state(&grid, 1e-6, 293.15, &settings.solver)?;
    Ok(NumericCellResistance {
        r_cell: sol.resistance(),
        iterations: sol.iterations,
        residual: sol.residual,
        energy_defect: sol.energy_defect(),
    })
}

/// Which model evaluates a sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Analytic,
    Numeric,
}

pub fn cell_resistance(
    cell: &UnitCell,
    k_leg: f64,
    backend: Backend,
    settings: &NumericSettings,
) -> Result<f64> {
    match backend {
        Backend::Analytic => Ok(analytic_cell_resistance(cell, k_leg)?.r_cell),
        Backend::Numeric => Ok(cell_resistance_numeric(cell, k_leg, settings)?.r_cell),
    }
}

/// One sweep row: the swept input plus either a resistance or the reason
/// the point was skipped. Violations are per-row values; the sweep
/// continues past them.
#[derive(Debug, Clone)]
pub struct SweepPoint<T> {
    pub input: T,
    pub resistance: std::result::Result<f64, String>,
}

fn eval_cell(
    cell: UnitCell,
    k_leg: f64,
    backend: Backend,
    settings: &NumericSettings,
) -> std::result::Result<f64, String> {
    cell_resistance(&cell, k_leg, backend, settings).map_err(|e| e.to_string())
}

/// Sweep the middle width `b`; the gap height is untouched because the leg
/// path length does not depend on `b`.
pub fn sweep_width(
    cell: &UnitCell,
    k_leg: f64,
    b_values: &[f64],
    backend: Backend,
    settings: &NumericSettings,
) -> Vec<SweepPoint<f64>> {
    b_values
        .par_iter()
        .map(|&b| {
            let geometry = ThermocoupleGeometry {
                middle_width_b: b,
                ..cell.geometry
            };
            let c = UnitCell { geometry, ..*cell };
            SweepPoint {
                input: b,
                resistance: eval_cell(c, k_leg, backend, settings),
            }
        })
        .collect()
}

/// Sweep the step height `h`; the gap height is re-derived per point so the
/// leg column keeps spanning hot to cold plate.
pub fn sweep_height(
    cell: &UnitCell,
    k_leg: f64,
    h_values: &[f64],
    backend: Backend,
    settings: &NumericSettings,
) -> Vec<SweepPoint<f64>> {
    h_values
        .par_iter()
        .map(|&h| {
            let geometry = ThermocoupleGeometry {
                step_height_h: h,
                ..cell.geometry
            };
            let c = UnitCell::with_derived_gap(
                geometry,
                cell.cell_pitch_x,
                cell.cell_pitch_y,
                cell.fill_conductivity,
            );
            SweepPoint {
                input: h,
                resistance: eval_cell(c, k_leg, backend, settings),
            }
        })
        .collect()
}

/// Sweep a catalog of (a, b) cross-sections at fixed step height.
pub fn sweep_mask(
    cell: &UnitCell,
    k_leg: f64,
    catalog: &[(f64, f64)],
    backend: Backend,
    settings: &NumericSettings,
) -> Vec<SweepPoint<(f64, f64)>> {
    catalog
        .par_iter()
        .map(|&(a, b)| {
            let geometry = ThermocoupleGeometry {
                end_width_a: a,
                middle_width_b: b,
                ..cell.geometry
            };
            let c = UnitCell::with_derived_gap(
                geometry,
                cell.cell_pitch_x,
                cell.cell_pitch_y,
                cell.fill_conductivity,
            );
            SweepPoint {
                input: (a, b),
                resistance: eval_cell(c, k_leg, backend, settings),
            }
        })
        .collect()
}

/// Least-squares line fit; returns (slope, intercept, r²).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}
