//! Property tests for model invariants over randomized inputs.

use proptest::prelude::*;

use tegsim::generator::{constant_q_power, matched_load_power, open_circuit_voltage};
use tegsim::geometry::{ThermocoupleGeometry, UnitCell};
use tegsim::materials::CoupleMaterials;
use tegsim::network::{solve_network, ThermalCircuit};
use tegsim::thermal::analytic_cell_resistance;

fn geometry(a_um: f64, b_um: f64, h_um: f64) -> ThermocoupleGeometry {
    ThermocoupleGeometry {
        end_width_a: a_um * 1e-6,
        middle_width_b: b_um * 1e-6,
        step_height_h: h_um * 1e-6,
        film_thickness_t: 1e-6,
        end_segment_length: 2e-6,
        middle_segment_length: 2.5273e-6,
        step_path_factor_gamma: 2.0,
    }
}

proptest! {
    /// Cell resistance is positive and below the pure-fill column: the legs
    /// only ever add a parallel path.
    #[test]
    fn cell_resistance_bounded_by_fill(
        a_um in 3.0f64..10.0,
        b_frac in 0.1f64..1.0,
        h_um in 0.0f64..3.0,
    ) {
        let cell = UnitCell::with_derived_gap(
            geometry(a_um, a_um * b_frac, h_um),
            30e-6,
            30e-6,
            0.026,
        );
        let r = analytic_cell_resistance(&cell, 3.0).unwrap();
        prop_assert!(r.r_cell > 0.0);
        prop_assert!(r.r_cell < r.r_fill.unwrap());
        prop_assert!(r.r_cell < r.r_legs);
    }

    /// Widening the middle segment never increases the cell resistance.
    #[test]
    fn wider_middle_never_hurts(
        b1 in 0.5f64..5.0,
        db in 0.1f64..5.0,
        h_um in 0.0f64..3.0,
    ) {
        let at = |b_um: f64| {
            let cell = UnitCell::with_derived_gap(
                geometry(10.0, b_um, h_um), 30e-6, 30e-6, 0.026,
            );
            analytic_cell_resistance(&cell, 3.0).unwrap().r_cell
        };
        prop_assert!(at(b1 + db) <= at(b1));
    }

    /// The network conserves heat and keeps every node temperature inside
    /// the source/ambient bracket.
    #[test]
    fn network_conservation_and_bracketing(
        r_body in 1.0f64..500.0,
        r_pile in 1.0f64..1e6,
        r_gap in 1.0f64..1e6,
        r_sink in 1.0f64..500.0,
        dt in 0.1f64..40.0,
    ) {
        let c = ThermalCircuit {
            t_source: 295.15 + dt,
            t_ambient: 295.15,
            r_body,
            r_hot_plate: 0.0,
            r_cold_plate: 0.0,
            r_pile,
            r_gap,
            r_sink,
        };
        let sol = solve_network(&c).unwrap();
        prop_assert!((sol.q_pile + sol.q_gap - sol.q_total).abs() <= 1e-9 * sol.q_total.abs());
        let n = sol.nodes;
        for t in [n.hot_plate, n.hot_junction, n.cold_junction, n.cold_plate] {
            prop_assert!(t <= n.source + 1e-9 && t >= n.ambient - 1e-9);
        }
        prop_assert!(sol.delta_t_junctions >= 0.0);
        prop_assert!(sol.delta_t_junctions <= dt);
    }

    /// Matched-load power is invariant under voltage sign and scales
    /// quadratically with voltage.
    #[test]
    fn matched_power_scaling(v in 0.01f64..10.0, r in 1.0f64..1e6) {
        let p = matched_load_power(v, r).unwrap();
        prop_assert!((matched_load_power(-v, r).unwrap() - p).abs() <= 1e-12 * p);
        let p2 = matched_load_power(2.0 * v, r).unwrap();
        prop_assert!((p2 - 4.0 * p).abs() <= 1e-9 * p2);
    }

    /// Open-circuit voltage is linear in both the couple count and the
    /// temperature difference.
    #[test]
    fn voltage_linearity(n in 1usize..5000, dt in 0.0f64..20.0) {
        let pair = CoupleMaterials::poly_sige();
        let v = open_circuit_voltage(n, &pair, dt);
        let v2n = open_circuit_voltage(2 * n, &pair, dt);
        prop_assert!((v2n - 2.0 * v).abs() <= 1e-9 * v2n.abs().max(1e-30));
        let v2dt = open_circuit_voltage(n, &pair, 2.0 * dt);
        prop_assert!((v2dt - 2.0 * v).abs() <= 1e-9 * v2dt.abs().max(1e-30));
    }

    /// Constant-heat-flow power peaks where the pile matches the gap:
    /// n* = R_cell / R_gap is never beaten by its neighbors.
    #[test]
    fn constant_q_peak_is_at_matching(
        r_cell in 1e4f64..1e6,
        ratio in 20.0f64..2000.0,
    ) {
        let r_gap = r_cell / ratio;
        let n_star = ratio.round() as usize;
        let p = |n: usize| constant_q_power(n, 0.05, r_cell, r_gap, 317e-6, 100.0);
        if n_star >= 2 {
            prop_assert!(p(n_star).max(p(n_star + 1)) >= p(n_star - 1));
            prop_assert!(p(n_star).max(p(n_star - 1)) >= p(n_star + 1));
            prop_assert!(p(n_star) >= p(2 * n_star));
            prop_assert!(p(n_star) >= p(n_star / 2));
        }
    }
}
