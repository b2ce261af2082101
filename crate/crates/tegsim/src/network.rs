//! Lumped thermal circuit of a TEG between a heat source and the ambient:
//! body, plates, thermopile in parallel with the gap bypass, and the
//! radiator/convection branch to ambient.

use crate::error::{Error, Result};

/// The series chain with one parallel block in the middle:
/// source → R_body → R_hot_plate → (R_pile ∥ R_gap) → R_cold_plate → R_sink → ambient.
/// Resistances in K/W; a resistance of 0 is an ideal conductor and
/// `f64::INFINITY` is an open branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalCircuit {
    pub t_source: f64,
    pub t_ambient: f64,
    pub r_body: f64,
    pub r_hot_plate: f64,
    pub r_cold_plate: f64,
    /// All couples in parallel.
    pub r_pile: f64,
    /// Air/oxide bypass in parallel with the pile.
    pub r_gap: f64,
    pub r_sink: f64,
}

/// Temperatures at the chain nodes, source to ambient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeTemperatures {
    pub source: f64,
    pub hot_plate: f64,
    pub hot_junction: f64,
    pub cold_junction: f64,
    pub cold_plate: f64,
    pub ambient: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkSolution {
    pub q_total: f64,
    pub q_pile: f64,
    pub q_gap: f64,
    pub delta_t_junctions: f64,
    pub nodes: NodeTemperatures,
}

impl ThermalCircuit {
    pub fn validate(&self) -> Result<()> {
        let rs = [
            self.r_body,
            self.r_hot_plate,
            self.r_cold_plate,
            self.r_pile,
            self.r_gap,
            self.r_sink,
        ];
        if rs.iter().any(|&r| r < 0.0 || r.is_nan()) {
            return Err(Error::Validation("thermal resistances must be >= 0".into()));
        }
        // Zeros are allowed everywhere: a shorted parallel block simply
        // drops no temperature; the all-zero chain is caught in the solve.
        Ok(())
    }

    /// Parallel resistance of the pile/gap block.
    pub fn r_parallel(&self) -> f64 {
        if self.r_pile == 0.0 || self.r_gap == 0.0 {
            return 0.0;
        }
        let g = 1.0 / self.r_pile + 1.0 / self.r_gap;
        if g == 0.0 {
            f64::INFINITY
        } else {
            1.0 / g
        }
    }
}

/// R = gap / (k_fill · area) of a plane gap [K/W].
pub fn gap_resistance(gap: f64, area: f64, k_fill: f64) -> Result<f64> {
    if !(gap > 0.0) || !(area > 0.0) || !(k_fill > 0.0) {
        return Err(Error::InvalidInput(format!(
            "gap_resistance needs gap, area, k_fill > 0 (got {gap}, {area}, {k_fill})"
        )));
    }
    Ok(gap / (k_fill * area))
}

/// R = 1 / (h · area) of a convective surface [K/W].
pub fn convection_resistance(h_coeff: f64, area: f64) -> Result<f64> {
    if !(h_coeff > 0.0) || !(area > 0.0) {
        return Err(Error::InvalidInput(format!(
            "convection_resistance needs h, area > 0 (got {h_coeff}, {area})"
        )));
    }
    Ok(1.0 / (h_coeff * area))
}

/// Area fraction at which equal-height columns of thermoelectric material
/// and fill have equal thermal resistance: k_fill / k_material, capped at 1.
pub fn matched_fill_fraction(k_material: f64, k_fill: f64) -> Result<f64> {
    if !(k_material > 0.0) || !(k_fill > 0.0) {
        return Err(Error::InvalidInput(format!(
            "matched_fill_fraction needs conductivities > 0 (got {k_material}, {k_fill})"
        )));
    }
    Ok((k_fill / k_material).min(1.0))
}

/// Solve the series chain driven by (T_source - T_ambient).
pub fn solve_network(c: &ThermalCircuit) -> Result<NetworkSolution> {
    c.validate()?;
    let r_par = c.r_parallel();
    let total = c.r_body + c.r_hot_plate + r_par + c.r_cold_plate + c.r_sink;
    if total == 0.0 {
        return Err(Error::InvalidInput(
            "singular circuit: total series resistance is zero".into(),
        ));
    }
    let dt = c.t_source - c.t_ambient;
    let q_total = dt / total;
    let delta_t_junctions = q_total * r_par;

    let (q_pile, q_gap) = if delta_t_junctions == 0.0 {
        // Shorted block: route everything through the zero branch.
        if c.r_pile == 0.0 {
            (q_total, 0.0)
        } else {
            (0.0, q_total)
        }
    } else {
        (
            delta_t_junctions / c.r_pile,
            delta_t_junctions / c.r_gap,
        )
    };

    let source = c.t_source;
    let hot_plate = source - q_total * c.r_body;
    let hot_junction = hot_plate - q_total * c.r_hot_plate;
    let cold_junction = hot_junction - delta_t_junctions;
    let cold_plate = cold_junction - q_total * c.r_cold_plate;
    let ambient = cold_plate - q_total * c.r_sink;

    Ok(NetworkSolution {
        q_total,
        q_pile,
        q_gap,
        delta_t_junctions,
        nodes: NodeTemperatures {
            source,
            hot_plate,
            hot_junction,
            cold_junction,
            cold_plate,
            ambient,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gap_resistance_hand_values() {
        // 250 μm of air over 1 cm².
        assert_relative_eq!(
            gap_resistance(250e-6, 1e-4, 0.026).unwrap(),
            96.15,
            max_relative = 1e-3
        );
        // A few-μm gap is a near short.
        assert_relative_eq!(
            gap_resistance(3e-6, 1e-4, 0.026).unwrap(),
            1.1538,
            max_relative = 1e-3
        );
        // Proportional in the gap.
        let r1 = gap_resistance(100e-6, 1e-4, 0.026).unwrap();
        let r2 = gap_resistance(200e-6, 1e-4, 0.026).unwrap();
        assert_relative_eq!(r2, 2.0 * r1, max_relative = 1e-12);
    }

    #[test]
    fn convection_resistance_hand_values() {
        assert_relative_eq!(
            convection_resistance(10.0, 1e-3).unwrap(),
            100.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            convection_resistance(20.0, 1e-3).unwrap(),
            50.0,
            max_relative = 1e-12
        );
        // Forced-convection default: 50 W/(m²·K) over 10 cm².
        assert_relative_eq!(
            convection_resistance(50.0, 1e-3).unwrap(),
            20.0,
            max_relative = 1e-12
        );
        assert!(convection_resistance(0.0, 1e-3).is_err());
    }

    #[test]
    fn matched_fill_fraction_values() {
        // Thermoelectric film vs air: about 1/100 of the plate area.
        let f = matched_fill_fraction(3.0, 0.026).unwrap();
        assert!((0.008..=0.010).contains(&f), "{f}");
        assert_relative_eq!(f, 0.00867, max_relative = 1e-2);
        // Equal conductivities match at a full split.
        assert_eq!(matched_fill_fraction(1.0, 1.0).unwrap(), 1.0);
        // Exactly 100x contrast gives exactly 0.01.
        assert_relative_eq!(
            matched_fill_fraction(2.6, 0.026).unwrap(),
            0.01,
            max_relative = 1e-12
        );
    }

    fn circuit(r_pile: f64, r_gap: f64, r_rest: f64) -> ThermalCircuit {
        ThermalCircuit {
            t_source: 310.15,
            t_ambient: 295.15,
            r_body: r_rest,
            r_hot_plate: 0.0,
            r_cold_plate: 0.0,
            r_pile,
            r_gap,
            r_sink: 0.0,
        }
    }

    #[test]
    fn all_resistance_in_parallel_block() {
        let sol = solve_network(&circuit(100.0, 50.0, 0.0)).unwrap();
        assert_relative_eq!(sol.delta_t_junctions, 15.0, max_relative = 1e-12);
    }

    #[test]
    fn symmetric_split() {
        let sol = solve_network(&circuit(2.0, 2.0, 0.0)).unwrap();
        assert_relative_eq!(sol.q_pile, sol.q_gap, max_relative = 1e-12);
        assert_relative_eq!(sol.q_pile + sol.q_gap, sol.q_total, max_relative = 1e-12);
        assert_relative_eq!(sol.delta_t_junctions, 15.0, max_relative = 1e-12);
    }

    #[test]
    fn kirchhoff_consistency() {
        let c = ThermalCircuit {
            t_source: 310.15,
            t_ambient: 295.15,
            r_body: 100.0,
            r_hot_plate: 1.0,
            r_cold_plate: 2.0,
            r_pile: 62.0,
            r_gap: 32.0,
            r_sink: 100.0,
        };
        let sol = solve_network(&c).unwrap();
        assert_relative_eq!(sol.q_pile + sol.q_gap, sol.q_total, max_relative = 1e-12);
        assert_relative_eq!(sol.q_pile * c.r_pile, sol.q_gap * c.r_gap, max_relative = 1e-12);
        assert_relative_eq!(sol.nodes.ambient, c.t_ambient, max_relative = 1e-9);
    }

    #[test]
    fn sink_increase_reduces_flow_and_junction_dt() {
        let mut c = circuit(62.0, 32.0, 100.0);
        c.r_sink = 50.0;
        let s1 = solve_network(&c).unwrap();
        c.r_sink = 150.0;
        let s2 = solve_network(&c).unwrap();
        assert!(s2.q_total < s1.q_total);
        assert!(s2.delta_t_junctions < s1.delta_t_junctions);
    }

    #[test]
    fn open_gap_branch() {
        let sol = solve_network(&circuit(100.0, f64::INFINITY, 100.0)).unwrap();
        assert_relative_eq!(sol.q_gap, 0.0, max_relative = 1e-12);
        assert_relative_eq!(sol.q_pile, sol.q_total, max_relative = 1e-12);
    }

    #[test]
    fn singular_circuit_rejected() {
        let c = circuit(0.0, 0.0, 0.0);
        assert!(matches!(solve_network(&c), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn reverse_operation_is_sign_consistent() {
        let mut c = circuit(62.0, 32.0, 100.0);
        std::mem::swap(&mut c.t_source, &mut c.t_ambient);
        let sol = solve_network(&c).unwrap();
        assert!(sol.q_total < 0.0);
        assert!(sol.delta_t_junctions < 0.0);
    }
}
