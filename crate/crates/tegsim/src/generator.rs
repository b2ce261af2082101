//! Coupled electro-thermal generator model: open-circuit voltage, internal
//! resistance, matched-load power, design sweeps, the couple-count matching
//! optimizer, and the thermal-chuck measurement scenarios.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{RimLayout, ThermocoupleGeometry, UnitCell};
use crate::materials::CoupleMaterials;
use crate::network::{gap_resistance, solve_network, ThermalCircuit};
use crate::thermal::{analytic_cell_resistance, cell_resistance, Backend, NumericSettings};

/// A full thermopile design: N couples of a given geometry and material
/// pair, arranged on a rim layout.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorDesign {
    pub n_couples: usize,
    pub materials: CoupleMaterials,
    /// Thermal unit cell; embeds the thermocouple geometry.
    pub cell: UnitCell,
    pub layout: RimLayout,
    /// Electrical contact area per junction [m²].
    pub contact_area_per_junction: f64,
    /// Series interconnect (metal) resistance per couple [Ω].
    pub interconnect_resistance_per_couple: f64,
}

impl GeneratorDesign {
    pub fn geometry(&self) -> &ThermocoupleGeometry {
        &self.cell.geometry
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_couples < 1 {
            return Err(Error::Validation("n_couples must be >= 1".into()));
        }
        self.materials.validate()?;
        self.cell.validate()?;
        self.layout.validate()?;
        let layout = RimLayout {
            n_couples: self.n_couples,
            ..self.layout
        };
        if !layout.check_capacity().is_ok() {
            return Err(Error::Validation(format!(
                "rim layout cannot accommodate {} couples at the configured pitch",
                self.n_couples
            )));
        }
        if self.interconnect_resistance_per_couple < 0.0 {
            return Err(Error::Validation(
                "interconnect_resistance_per_couple must be >= 0".into(),
            ));
        }
        Ok(())
    }
}

/// Thermal boundary conditions for a generator simulation.
#[derive(Debug, Clone, Copy)]
pub struct Environment {
    pub t_source: f64,
    pub t_ambient: f64,
    pub r_body: f64,
    pub r_hot_plate: f64,
    pub r_cold_plate: f64,
    pub r_sink: f64,
    /// Active device footprint [m²]; normalizes the areal voltage density
    /// and bounds the gap bypass area.
    pub device_area: f64,
}

/// Predicted generator operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorReport {
    pub v_oc: f64,
    pub r_internal: f64,
    pub p_matched: f64,
    pub delta_t_junctions: f64,
    pub q_total: f64,
    /// Open-circuit voltage per source-ambient kelvin per cm² of device
    /// area [mV/(K·cm²)].
    pub areal_voltage_density: f64,
}

/// V_oc = n·(S_p - S_n)·ΔT.
pub fn open_circuit_voltage(n: usize, pair: &CoupleMaterials, delta_t: f64) -> f64 {
    n as f64 * pair.delta_seebeck() * delta_t
}

/// Series electrical resistance of the whole pile:
/// n·(leg segments of both materials + four contacts + interconnect).
pub fn internal_resistance(d: &GeneratorDesign) -> Result<f64> {
    let a_c = d.contact_area_per_junction;
    if !(a_c > 0.0) {
        return Err(Error::InvalidInput(
            "contact_area_per_junction must be > 0".into(),
        ));
    }
    let geom_factor: f64 = d
        .geometry()
        .leg_segments()
        .iter()
        .map(|s| s.length / (s.width * s.thickness))
        .sum();
    let per_couple = d.materials.p.electrical_resistivity * geom_factor
        + d.materials.n.electrical_resistivity * geom_factor
        + 2.0 * d.materials.p.contact_resistance(a_c)?
        + 2.0 * d.materials.n.contact_resistance(a_c)?
        + d.interconnect_resistance_per_couple;
    Ok(d.n_couples as f64 * per_couple)
}

/// Maximum power into a matched load: V_oc² / (4·R_int).
pub fn matched_load_power(v_oc: f64, r_int: f64) -> Result<f64> {
    if !(r_int > 0.0) {
        return Err(Error::InvalidInput(format!(
            "internal resistance must be > 0 Ω, got {r_int}"
        )));
    }
    Ok(v_oc * v_oc / (4.0 * r_int))
}

/// Gap bypass of the etched die: etch-depth column of fill over the device
/// area not occupied by the unit cells.
pub fn device_gap_resistance(d: &GeneratorDesign, device_area: f64) -> Result<f64> {
    let bypass_area = device_area - d.n_couples as f64 * d.cell.footprint();
    if bypass_area <= 0.0 {
        return Err(Error::Validation(
            "device area leaves no gap bypass outside the unit cells".into(),
        ));
    }
    gap_resistance(d.layout.etch_depth, bypass_area, d.cell.fill_conductivity)
}

/// Single-pass electro-thermal simulation (no Peltier feedback): solve the
/// thermal network, then evaluate the electrical output at the resulting
/// junction temperature difference.
pub fn simulate(
    d: &GeneratorDesign,
    env: &Environment,
    backend: Backend,
    settings: &NumericSettings,
) -> Result<GeneratorReport> {
    d.validate()?;
    if env.t_source == env.t_ambient {
        return Ok(GeneratorReport {
            v_oc: 0.0,
            r_internal: internal_resistance(d)?,
            p_matched: 0.0,
            delta_t_junctions: 0.0,
            q_total: 0.0,
            areal_voltage_density: 0.0,
        });
    }
    let r_cell = cell_resistance(&d.cell, d.materials.p.thermal_conductivity, backend, settings)?;
    let r_pile = r_cell / d.n_couples as f64;
    let r_gap = device_gap_resistance(d, env.device_area)?;
    let circuit = ThermalCircuit {
        t_source: env.t_source,
        t_ambient: env.t_ambient,
        r_body: env.r_body,
        r_hot_plate: env.r_hot_plate,
        r_cold_plate: env.r_cold_plate,
        r_pile,
        r_gap,
        r_sink: env.r_sink,
    };
    let sol = solve_network(&circuit)?;
    report_from_solution(d, env.t_source - env.t_ambient, env.device_area, &sol)
}

fn report_from_solution(
    d: &GeneratorDesign,
    dt_source_ambient: f64,
    device_area: f64,
    sol: &crate::network::NetworkSolution,
) -> Result<GeneratorReport> {
    let v_oc = open_circuit_voltage(d.n_couples, &d.materials, sol.delta_t_junctions);
    let r_internal = internal_resistance(d)?;
    let p_matched = matched_load_power(v_oc, r_internal)?;
    let density = areal_voltage_density(v_oc, dt_source_ambient, device_area);
    Ok(GeneratorReport {
        v_oc,
        r_internal,
        p_matched,
        delta_t_junctions: sol.delta_t_junctions,
        q_total: sol.q_total,
        areal_voltage_density: density,
    })
}

/// V_oc normalized per source-ambient kelvin and per cm² [mV/(K·cm²)].
pub fn areal_voltage_density(v_oc: f64, dt_source_ambient: f64, device_area: f64) -> f64 {
    if dt_source_ambient == 0.0 {
        return 0.0;
    }
    v_oc * 1e3 / (dt_source_ambient * (device_area / 1e-4))
}

/// Design types of the final mask: A carries 2350 couples, B carries 4700.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignType {
    A,
    B,
}

impl DesignType {
    pub fn n_couples(&self) -> usize {
        match self {
            DesignType::A => 2350,
            DesignType::B => 4700,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            DesignType::A => "A",
            DesignType::B => "B",
        }
    }
}

/// One row of the design sweep.
#[derive(Debug, Clone)]
pub struct DesignRow {
    pub end_width_a: f64,
    pub middle_width_b: f64,
    pub design_type: DesignType,
    pub report: std::result::Result<GeneratorReport, String>,
}

/// Sweep the mask catalog crossed with both design types.
pub fn sweep_designs(
    base: &GeneratorDesign,
    env: &Environment,
    catalog: &[(f64, f64)],
    backend: Backend,
    settings: &NumericSettings,
) -> Vec<DesignRow> {
    let points: Vec<(f64, f64, DesignType)> = catalog
        .iter()
        .flat_map(|&(a, b)| [(a, b, DesignType::A), (a, b, DesignType::B)])
        .collect();
    points
        .par_iter()
        .map(|&(a, b, ty)| {
            let geometry = ThermocoupleGeometry {
                end_width_a: a,
                middle_width_b: b,
                ..base.cell.geometry
            };
            let cell = UnitCell::with_derived_gap(
                geometry,
                base.cell.cell_pitch_x,
                base.cell.cell_pitch_y,
                base.cell.fill_conductivity,
            );
            let d = GeneratorDesign {
                n_couples: ty.n_couples(),
                cell,
                contact_area_per_junction: a * a,
                ..*base
            };
            DesignRow {
                end_width_a: a,
                middle_width_b: b,
                design_type: ty,
                report: simulate(&d, env, backend, settings).map_err(|e| e.to_string()),
            }
        })
        .collect()
}

/// Matched-load power under the constant-heat-flow hypothesis: a fixed
/// Q forced through the pile/gap parallel block.
/// ΔT(n) = Q·R_gap·R_cell / (n·R_gap + R_cell), P = (n·ΔS·ΔT)²/(4·n·r).
pub fn constant_q_power(
    n: usize,
    q: f64,
    r_cell: f64,
    r_gap: f64,
    delta_seebeck: f64,
    r_per_couple: f64,
) -> f64 {
    let nf = n as f64;
    let r_pile = r_cell / nf;
    let r_par = if r_gap.is_infinite() {
        r_pile
    } else {
        r_pile * r_gap / (r_pile + r_gap)
    };
    let dt = q * r_par;
    let v = nf * delta_seebeck * dt;
    v * v / (4.0 * nf * r_per_couple)
}

/// Brute-force search for the couple count maximizing matched-load power
/// under constant heat flow; ties break toward smaller n.
pub fn optimize_couples(
    d: &GeneratorDesign,
    env: &Environment,
    n_range: std::ops::RangeInclusive<usize>,
    backend: Backend,
    settings: &NumericSettings,
) -> Result<(usize, GeneratorReport)> {
    if n_range.is_empty() {
        return Err(Error::InvalidInput("empty couple-count range".into()));
    }
    let r_series = env.r_body + env.r_hot_plate + env.r_cold_plate + env.r_sink;
    if !(r_series > 0.0) {
        return Err(Error::InvalidInput(
            "constant-heat-flow optimization needs a positive series resistance".into(),
        ));
    }
    let q = (env.t_source - env.t_ambient) / r_series;
    let r_cell = cell_resistance(&d.cell, d.materials.p.thermal_conductivity, backend, settings)?;
    let r_gap = device_gap_resistance(d, env.device_area)?;
    let one = GeneratorDesign {
        n_couples: 1,
        ..*d
    };
    let r_per_couple = internal_resistance(&one)?;
    let ds = d.materials.delta_seebeck();

    let mut best_n = *n_range.start();
    let mut best_p = f64::NEG_INFINITY;
    for n in n_range {
        let p = constant_q_power(n, q, r_cell, r_gap, ds, r_per_couple);
        if p > best_p {
            best_p = p;
            best_n = n;
        }
    }

    // Report the winner through the full (non-constant-Q) network model.
    let winner = GeneratorDesign {
        n_couples: best_n,
        ..*d
    };
    let report = simulate(&winner, env, backend, settings)
        .or_else(|_| -> Result<GeneratorReport> {
            // The winning n may exceed the rim capacity; still report the
            // constant-Q operating point.
            let r_pile = r_cell / best_n as f64;
            let r_par = r_pile * r_gap / (r_pile + r_gap);
            let dt = q * r_par;
            let v = best_n as f64 * ds * dt;
            let r_int = best_n as f64 * r_per_couple;
            Ok(GeneratorReport {
                v_oc: v,
                r_internal: r_int,
                p_matched: matched_load_power(v, r_int)?,
                delta_t_junctions: dt,
                q_total: q,
                areal_voltage_density: areal_voltage_density(
                    v,
                    env.t_source - env.t_ambient,
                    env.device_area,
                ),
            })
        })?;
    Ok((best_n, report))
}

/// Fill conductivity of the gap before and after the sacrificial-oxide
/// release. Unreleased, an oxide collar of `collar_factor` times the leg
/// plan area shorts part of the fill; the rest is air. The mix is folded
/// into one effective conductivity over the full fill area.
pub fn effective_fill_conductivity(
    released: bool,
    air_k: f64,
    teos_k: f64,
    collar_factor: f64,
    leg_plan_area: f64,
    fill_area: f64,
) -> f64 {
    if released {
        return air_k;
    }
    let teos_area = (collar_factor * leg_plan_area).min(fill_area);
    (teos_k * teos_area + air_k * (fill_area - teos_area)) / fill_area
}

/// Fixed parameters of the thermal-chuck measurement emulation.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioSettings {
    pub chuck_temperature: f64,
    pub ambient_temperature: f64,
    /// Bare-silicon radiator die area [m²].
    pub radiator_area: f64,
    /// Natural-convection coefficient [W/(m²·K)].
    pub natural_convection: f64,
    /// Forced-convection (nitrogen flush) coefficient [W/(m²·K)].
    pub forced_convection: f64,
    pub air_conductivity: f64,
    pub teos_conductivity: f64,
    /// Unreleased-oxide collar area as a multiple of the leg plan area.
    pub teos_collar_area_factor: f64,
    /// Device area normalizing the voltage density [m²].
    pub device_area: f64,
}

/// Outcome of one chuck measurement emulation.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioResult {
    /// Areal voltage density [mV/(K·cm²)].
    pub density: f64,
    pub v_oc: f64,
    pub delta_t_junctions: f64,
    /// Fraction of the chuck-ambient difference across the junctions.
    pub junction_fraction: f64,
}

/// Note attached to every scenario output: the model is tuned for relative
/// comparisons between flag settings, not absolute densities.
pub const SCENARIO_NOTE: &str =
    "scenario densities are comparative; rim/no-rim and released/unreleased \
     ratios are the meaningful output, not absolute values";

/// Emulate the on-chuck measurement: chuck as source, pile plus gap bypass,
/// bare-silicon radiator, convection to ambient.
///
/// Flags: `rim` widens the bypass gap from the cell gap height to the etch
/// depth; `forced_convection` switches the radiator coefficient; `released`
/// switches the fill between oxide-collared and pure air.
pub fn chuck_scenario(
    d: &GeneratorDesign,
    s: &ScenarioSettings,
    rim: bool,
    forced_convection: bool,
    released: bool,
) -> Result<ScenarioResult> {
    d.validate()?;
    let k_eff = effective_fill_conductivity(
        released,
        s.air_conductivity,
        s.teos_conductivity,
        s.teos_collar_area_factor,
        d.cell.leg_plan_area(),
        d.cell.fill_area(),
    );
    let gap = if rim {
        d.layout.etch_depth
    } else {
        d.cell.gap_height
    };
    let h = if forced_convection {
        s.forced_convection
    } else {
        s.natural_convection
    };
    let n = d.n_couples as f64;
    let r_legs = analytic_cell_resistance(&d.cell, d.materials.p.thermal_conductivity)?.r_legs;
    let circuit = ThermalCircuit {
        t_source: s.chuck_temperature,
        t_ambient: s.ambient_temperature,
        r_body: 0.0,
        r_hot_plate: 0.0,
        r_cold_plate: 0.0,
        r_pile: r_legs / n,
        r_gap: gap_resistance(gap, d.cell.fill_area() * n, k_eff)?,
        r_sink: crate::network::convection_resistance(h, s.radiator_area)?,
    };
    let sol = solve_network(&circuit)?;
    let dt = s.chuck_temperature - s.ambient_temperature;
    let v_oc = open_circuit_voltage(d.n_couples, &d.materials, sol.delta_t_junctions);
    Ok(ScenarioResult {
        density: areal_voltage_density(v_oc, dt, s.device_area),
        v_oc,
        delta_t_junctions: sol.delta_t_junctions,
        junction_fraction: if dt == 0.0 {
            0.0
        } else {
            sol.delta_t_junctions / dt
        },
    })
}
