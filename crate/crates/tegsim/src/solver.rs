//! Steady-state conduction solve on a voxel grid.
//!
//! Finite-volume 7-point stencil with harmonic-mean face conductances.
//! The bottom face is an isothermal hot plate carrying a prescribed total
//! heat flow Q, modeled as one extra unknown coupled to every bottom-layer
//! voxel; the top face is held at a fixed temperature; side faces are
//! adiabatic. The resulting system is symmetric positive definite and is
//! solved with Jacobi-preconditioned conjugate gradients on temperatures
//! relative to the top plate, so the right-hand side carries only Q and
//! the relative residual is meaningful at any heat-flow magnitude.

use crate::error::{Error, Result};
use crate::voxel::VoxelGrid;

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Stop when ||r|| / ||b|| drops below this.
    pub rel_tol: f64,
    /// Iteration cap as a multiple of (nx + ny + nz).
    pub iter_cap_factor: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            // Tight enough that the discrete energy balance closes to
            // well below 1e-6 of the injected heat flow.
            rel_tol: 1e-10,
            iter_cap_factor: 50,
        }
    }
}

/// Steady-state temperature field and the extracted lumped quantities.
#[derive(Debug, Clone)]
pub struct HeatSolution {
    /// Voxel temperatures [K], same layout as the grid.
    pub temperature: Vec<f64>,
    /// Injected heat flow [W].
    pub q_in: f64,
    /// Heat flow leaving through the top face [W].
    pub q_out: f64,
    /// Hot-plate temperature [K]; equals the bottom-surface temperature.
    pub bottom_temperature: f64,
    /// Mean temperature of the bottom voxel layer [K].
    pub mean_bottom_layer_temperature: f64,
    /// Fixed top-face temperature [K].
    pub top_temperature: f64,
    /// Temperature rise of the hot plate over the top face [K], kept in
    /// the relative frame so it is not contaminated by the absolute
    /// temperature offset.
    pub bottom_rise: f64,
    pub iterations: usize,
    /// Final relative residual.
    pub residual: f64,
}

impl HeatSolution {
    /// Extracted temperature difference bottom surface to top surface [K].
    pub fn delta_t(&self) -> f64 {
        self.bottom_rise
    }

    /// Extracted thermal resistance ΔT / Q [K/W].
    pub fn resistance(&self) -> f64 {
        self.delta_t() / self.q_in
    }

    /// |Q_in - Q_out| / Q_in, the discrete energy-balance defect.
    pub fn energy_defect(&self) -> f64 {
        (self.q_in - self.q_out).abs() / self.q_in
    }
}

#[inline]
fn harmonic(k1: f64, k2: f64) -> f64 {
    2.0 * k1 * k2 / (k1 + k2)
}

/// Solve for the steady temperature field with heat flow `q` forced through
/// the hot plate and the top face fixed at `t_top`.
pub fn solve_steady_state(
    grid: &VoxelGrid,
    q: f64,
    t_top: f64,
    opts: &SolverOptions,
) -> Result<HeatSolution> {
    if !(q > 0.0) {
        return Err(Error::InvalidInput(format!("heat flow must be > 0 W, got {q}")));
    }
    grid.validate()?;

    let (nx, ny, nz) = (grid.nx, grid.ny, grid.nz);
    let n = grid.len();
    let hot = n; // index of the hot-plate unknown
    let k = &grid.conductivity;

    let ax = grid.dy * grid.dz / grid.dx;
    let ay = grid.dx * grid.dz / grid.dy;
    let az = grid.dx * grid.dy / grid.dz;
    // Half-cell conductance factor for the bottom / top faces.
    let az_half = 2.0 * az;

    // y = A·x, matrix-free.
    let apply = |x: &[f64], y: &mut [f64]| {
        y.fill(0.0);
        for z in 0..nz {
            for yy in 0..ny {
                let row = (z * ny + yy) * nx;
                for xx in 0..nx {
                    let i = row + xx;
                    let ki = k[i];
                    if xx + 1 < nx {
                        let j = i + 1;
                        let g = harmonic(ki, k[j]) * ax;
                        let d = g * (x[i] - x[j]);
                        y[i] += d;
                        y[j] -= d;
                    }
                    if yy + 1 < ny {
                        let j = i + nx;
                        let g = harmonic(ki, k[j]) * ay;
                        let d = g * (x[i] - x[j]);
                        y[i] += d;
                        y[j] -= d;
                    }
                    if z + 1 < nz {
                        let j = i + nx * ny;
                        let g = harmonic(ki, k[j]) * az;
                        let d = g * (x[i] - x[j]);
                        y[i] += d;
                        y[j] -= d;
                    }
                    if z == 0 {
                        let g = ki * az_half;
                        let d = g * (x[i] - x[hot]);
                        y[i] += d;
                        y[hot] -= d;
                    }
                    if z == nz - 1 {
                        // Dirichlet face at u = 0 (temperatures are relative
                        // to the top plate).
                        y[i] += ki * az_half * x[i];
                    }
                }
            }
        }
    };

    // Jacobi preconditioner: the diagonal of A.
    let mut diag = vec![0.0; n + 1];
    for z in 0..nz {
        for yy in 0..ny {
            let row = (z * ny + yy) * nx;
            for xx in 0..nx {
                let i = row + xx;
                let ki = k[i];
                if xx + 1 < nx {
                    let g = harmonic(ki, k[i + 1]) * ax;
                    diag[i] += g;
                    diag[i + 1] += g;
                }
                if yy + 1 < ny {
                    let g = harmonic(ki, k[i + nx]) * ay;
                    diag[i] += g;
                    diag[i + nx] += g;
                }
                if z + 1 < nz {
                    let g = harmonic(ki, k[i + nx * ny]) * az;
                    diag[i] += g;
                    diag[i + nx * ny] += g;
                }
                if z == 0 {
                    let g = ki * az_half;
                    diag[i] += g;
                    diag[hot] += g;
                }
                if z == nz - 1 {
                    diag[i] += ki * az_half;
                }
            }
        }
    }

    // Right-hand side: only the hot-plate node carries the heat flow.
    let mut b = vec![0.0; n + 1];
    b[hot] = q;
    let b_norm = q;

    let mut x = vec![0.0; n + 1];
    let mut r = b.clone();
    let mut zv = vec![0.0; n + 1];
    for i in 0..=n {
        zv[i] = r[i] / diag[i];
    }
    let mut p = zv.clone();
    let mut ap = vec![0.0; n + 1];
    let mut rz: f64 = r.iter().zip(&zv).map(|(a, c)| a * c).sum();

    let cap = opts.iter_cap_factor * (nx + ny + nz);
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut rel = (r.iter().map(|v| v * v).sum::<f64>()).sqrt() / b_norm;

    while rel > opts.rel_tol && iterations < cap {
        apply(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, c)| a * c).sum();
        let alpha = rz / pap;
        for i in 0..=n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        for i in 0..=n {
            zv[i] = r[i] / diag[i];
        }
        let rz_new: f64 = r.iter().zip(&zv).map(|(a, c)| a * c).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..=n {
            p[i] = zv[i] + beta * p[i];
        }
        iterations += 1;
        rel = (r.iter().map(|v| v * v).sum::<f64>()).sqrt() / b_norm;
        history.push(rel);
    }

    if rel > opts.rel_tol {
        return Err(Error::NonConvergence {
            iterations,
            residual: rel,
            history,
        });
    }

    // Heat leaving through the top face, evaluated on the solution.
    let mut q_out = 0.0;
    let top_row = (nz - 1) * ny * nx;
    for i in top_row..n {
        q_out += k[i] * az_half * x[i];
    }

    let mut bottom_sum = 0.0;
    for i in 0..nx * ny {
        bottom_sum += x[i];
    }

    let temperature: Vec<f64> = x[..n].iter().map(|u| u + t_top).collect();
    Ok(HeatSolution {
        temperature,
        q_in: q,
        q_out,
        bottom_temperature: x[hot] + t_top,
        mean_bottom_layer_temperature: bottom_sum / (nx * ny) as f64 + t_top,
        top_temperature: t_top,
        bottom_rise: x[hot],
        iterations,
        residual: rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn uniform_slab(nx: usize, ny: usize, nz: usize, d: f64, k: f64) -> VoxelGrid {
        VoxelGrid {
            nx,
            ny,
            nz,
            dx: d,
            dy: d,
            dz: d,
            conductivity: vec![k; nx * ny * nz],
        }
    }

    #[test]
    fn uniform_slab_matches_l_over_ka() {
        let d = 0.5e-6;
        let grid = uniform_slab(8, 8, 12, d, 3.0);
        let sol = solve_steady_state(&grid, 1e-6, 293.15, &SolverOptions::default()).unwrap();
        let l = 12.0 * d;
        let area = (8.0 * d) * (8.0 * d);
        let expected = l / (3.0 * area);
        assert_relative_eq!(sol.resistance(), expected, max_relative = 0.02);
        assert!(sol.energy_defect() <= 1e-6);
    }

    #[test]
    fn delta_t_doubles_with_q() {
        let grid = uniform_slab(6, 6, 8, 0.5e-6, 2.0);
        let opts = SolverOptions::default();
        let s1 = solve_steady_state(&grid, 1e-6, 293.15, &opts).unwrap();
        let s2 = solve_steady_state(&grid, 2e-6, 293.15, &opts).unwrap();
        // Doubling is exact in floating point (power-of-two scaling).
        assert_eq!(s2.delta_t(), 2.0 * s1.delta_t());
    }

    #[test]
    fn top_temperature_shift_is_additive() {
        let grid = uniform_slab(5, 5, 7, 0.5e-6, 1.5);
        let opts = SolverOptions::default();
        let s1 = solve_steady_state(&grid, 1e-6, 290.0, &opts).unwrap();
        let s2 = solve_steady_state(&grid, 1e-6, 300.0, &opts).unwrap();
        for (a, b) in s1.temperature.iter().zip(&s2.temperature) {
            assert_relative_eq!(b - a, 10.0, max_relative = 1e-12);
        }
        assert_eq!(s1.delta_t(), s2.delta_t());
    }

    #[test]
    fn rejects_non_positive_heat_flow() {
        let grid = uniform_slab(4, 4, 4, 1e-6, 1.0);
        assert!(matches!(
            solve_steady_state(&grid, 0.0, 293.15, &SolverOptions::default()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn non_convergence_carries_history() {
        let grid = uniform_slab(6, 6, 6, 1e-6, 1.0);
        let opts = SolverOptions {
            rel_tol: 1e-30,
            iter_cap_factor: 0,
        };
        // Cap of zero iterations cannot converge.
        match solve_steady_state(&grid, 1e-6, 293.15, &opts) {
            Err(Error::NonConvergence { history, .. }) => assert!(history.is_empty()),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
