//! Discretization of a unit cell onto a regular voxel grid.
//!
//! The cell is rasterized in its unfolded-column form: the two legs run as
//! columns from the bottom (hot) face to the top (cold) face, the fill
//! occupies the rest. Each leg column uses the resistance-equivalent
//! uniform width of its segment series; stepping the width along the
//! unfolded (fictitious) vertical path would add constriction resistance
//! at locations where the planar device has none. Voxel conductivities are
//! area-weighted by the exact plan coverage of the leg columns; since the
//! columns run parallel to the heat flow, mixing leg and fill in a voxel
//! by plan area is the exact parallel combination, so partially covered
//! boundary voxels introduce no staircase error.

use crate::error::{Error, Result};
use crate::geometry::UnitCell;

/// Boundary roles are fixed by construction: the bottom face is the heat
/// inlet (isothermal hot plate carrying a prescribed total heat flow), the
/// top face holds a fixed temperature, the four side faces are adiabatic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryRole {
    HeatInlet,
    FixedTemperature,
    Adiabatic,
}

/// Regular grid with per-voxel conductivity.
#[derive(Debug, Clone)]
pub struct VoxelGrid {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    /// Voxel edge lengths [m].
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
    /// Per-voxel conductivity [W/(m·K)], x fastest, then y, then z.
    pub conductivity: Vec<f64>,
}

impl VoxelGrid {
    #[inline]
    pub fn idx(&self, x: usize, y: usize, z: usize) -> usize {
        (z * self.ny + y) * self.nx + x
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bottom_role(&self) -> BoundaryRole {
        BoundaryRole::HeatInlet
    }

    pub fn top_role(&self) -> BoundaryRole {
        BoundaryRole::FixedTemperature
    }

    pub fn validate(&self) -> Result<()> {
        if self.conductivity.len() != self.len() {
            return Err(Error::Validation("conductivity length mismatch".into()));
        }
        if self.conductivity.iter().any(|&k| !(k > 0.0)) {
            return Err(Error::Validation(
                "all voxel conductivities must be > 0".into(),
            ));
        }
        Ok(())
    }
}

/// Rasterize a unit cell at `resolution` voxels per micrometer.
pub fn voxelize(
    cell: &UnitCell,
    k_leg: f64,
    resolution: f64,
    max_voxels: usize,
) -> Result<VoxelGrid> {
    if !(resolution > 0.0) {
        return Err(Error::InvalidInput(format!(
            "resolution must be > 0 voxels/μm, got {resolution}"
        )));
    }
    if !(k_leg > 0.0) {
        return Err(Error::InvalidInput("k_leg must be > 0".into()));
    }
    cell.validate()?;

    let per_m = resolution * 1e6;
    let dims = |extent: f64| -> usize { ((extent * per_m).round() as usize).max(1) };
    let nx = dims(cell.cell_pitch_x);
    let ny = dims(cell.cell_pitch_y);
    let nz = dims(cell.gap_height);
    let total = nx * ny * nz;
    if total > max_voxels {
        let shrink = (total as f64 / max_voxels as f64).powf(1.0 / 3.0);
        return Err(Error::ResourceLimit(format!(
            "{total} voxels exceed the budget of {max_voxels}; \
             try a resolution of about {:.2} voxels/μm",
            resolution / shrink
        )));
    }

    let dx = cell.cell_pitch_x / nx as f64;
    let dy = cell.cell_pitch_y / ny as f64;
    let dz = cell.gap_height / nz as f64;

    let geom = &cell.geometry;
    let segs = cell.leg_column_segments()?;
    let t = geom.film_thickness_t;
    let xc = cell.cell_pitch_x / 2.0;
    // Leg strips centered at one and two thirds of the cell depth.
    let strip_centers = [cell.cell_pitch_y / 3.0, 2.0 * cell.cell_pitch_y / 3.0];
    // Uniform width with the same column resistance as the segment series:
    // gap / (k·w·t) = Σ L_i/(k·w_i·t)  =>  w = gap / Σ(L_i/w_i).
    let l_over_w: f64 = segs
        .iter()
        .filter(|s| s.length > 0.0)
        .map(|s| s.length / s.width)
        .sum();
    let half_w = cell.gap_height / l_over_w / 2.0;

    // Overlap length of [lo, hi) with [c - half, c + half).
    let overlap = |lo: f64, hi: f64, c: f64, half: f64| -> f64 {
        (hi.min(c + half) - lo.max(c - half)).max(0.0)
    };
    // Plan-coverage fraction of the leg columns over one voxel footprint.
    let coverage = |x0: f64, y0: f64| -> f64 {
        let fx = overlap(x0, x0 + dx, xc, half_w) / dx;
        let fy: f64 = strip_centers
            .iter()
            .map(|&yc| overlap(y0, y0 + dy, yc, t / 2.0) / dy)
            .sum();
        let f = fx * fy.min(1.0);
        // Snap rounding residue so aligned cells stay exactly two-phase.
        if f < 1e-9 {
            0.0
        } else if f > 1.0 - 1e-9 {
            1.0
        } else {
            f
        }
    };

    // One plan layer, replicated along z (the column is z-invariant).
    let mut layer = vec![0.0; nx * ny];
    for y in 0..ny {
        let y0 = y as f64 * dy;
        for x in 0..nx {
            let f = coverage(x as f64 * dx, y0);
            layer[y * nx + x] = f * k_leg + (1.0 - f) * cell.fill_conductivity;
        }
    }
    let mut conductivity = vec![0.0; total];
    for z in 0..nz {
        conductivity[z * nx * ny..(z + 1) * nx * ny].copy_from_slice(&layer);
    }

    let grid = VoxelGrid {
        nx,
        ny,
        nz,
        dx,
        dy,
        dz,
        conductivity,
    };
    grid.validate()?;
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ThermocoupleGeometry;
    use approx::assert_relative_eq;

    fn test_cell(a_um: f64, b_um: f64) -> UnitCell {
        let geom = ThermocoupleGeometry {
            end_width_a: a_um * 1e-6,
            middle_width_b: b_um * 1e-6,
            step_height_h: 0.5e-6,
            film_thickness_t: 1e-6,
            end_segment_length: 2e-6,
            middle_segment_length: 2.5273e-6,
            step_path_factor_gamma: 2.0,
        };
        UnitCell::with_derived_gap(geom, 30e-6, 30e-6, 0.026)
    }

    /// Leg plan area recovered from the conductivity field by inverting
    /// the area-weighted mix.
    fn weighted_leg_area(grid: &VoxelGrid, k_leg: f64, k_fill: f64) -> f64 {
        let layer = &grid.conductivity[..grid.nx * grid.ny];
        layer
            .iter()
            .map(|&k| (k - k_fill) / (k_leg - k_fill) * grid.dx * grid.dy)
            .sum()
    }

    #[test]
    fn straight_leg_rasterization_is_exact() {
        // b = a: the equivalent column width is exactly a, and the plan
        // coverage integrates to the exact leg area.
        let cell = test_cell(10.0, 10.0);
        let grid = voxelize(&cell, 3.0, 2.0, 50_000_000).unwrap();
        let area = weighted_leg_area(&grid, 3.0, 0.026);
        let expected = 2.0 * cell.geometry.end_width_a * cell.geometry.film_thickness_t;
        assert_relative_eq!(area, expected, max_relative = 1e-9);
        // Aligned boundaries: only the two pure conductivities appear.
        let mut values: Vec<u64> = grid.conductivity.iter().map(|k| k.to_bits()).collect();
        values.sort_unstable();
        values.dedup();
        assert_eq!(values.len(), 2);
    }

    #[test]
    fn boundary_voxels_are_area_mixed() {
        // b < a: the equivalent width is not grid-aligned, so boundary
        // voxels carry a conductivity strictly between fill and leg.
        let cell = test_cell(10.0, 3.0);
        let grid = voxelize(&cell, 3.0, 2.0, 50_000_000).unwrap();
        assert!(grid.conductivity.iter().any(|&k| k == 3.0));
        assert!(grid.conductivity.iter().any(|&k| k == 0.026));
        assert!(grid
            .conductivity
            .iter()
            .any(|&k| k > 0.026 && k < 3.0));
        assert!(grid.conductivity.iter().all(|&k| (0.026..=3.0).contains(&k)));
    }

    #[test]
    fn refinement_keeps_leg_plan_area_exact() {
        // The area-weighted coverage integrates to the exact plan area at
        // every resolution, not just in the limit.
        let cell = test_cell(10.0, 3.0);
        let segs = cell.leg_column_segments().unwrap();
        let l_over_w: f64 = segs.iter().map(|s| s.length / s.width).sum();
        let expected = 2.0 * (cell.gap_height / l_over_w) * cell.geometry.film_thickness_t;
        for res in [1.0, 2.0, 4.0] {
            let grid = voxelize(&cell, 3.0, res, 50_000_000).unwrap();
            let area = weighted_leg_area(&grid, 3.0, 0.026);
            assert_relative_eq!(area, expected, max_relative = 1e-9);
        }
    }

    #[test]
    fn budget_exceeded_reports_resource_limit() {
        let cell = test_cell(10.0, 3.0);
        match voxelize(&cell, 3.0, 4.0, 1000) {
            Err(Error::ResourceLimit(msg)) => assert!(msg.contains("voxels/μm")),
            other => panic!("expected resource limit, got {other:?}"),
        }
    }
}
