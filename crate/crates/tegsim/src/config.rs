//! Layered TOML configuration.
//!
//! Three layers, later wins key by key: the embedded reference defaults,
//! an optional user file, and `--set key.path=value` overrides. Files use
//! bench units (μm, °C, cm², μV/K, mΩ·cm, Ω·μm²); everything is converted
//! to SI when the domain objects are built.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::generator::{
    effective_fill_conductivity, Environment, GeneratorDesign, ScenarioSettings,
};
use crate::geometry::{RimLayout, ThermocoupleGeometry, UnitCell};
use crate::materials::{CoupleMaterials, MaterialProps};
use crate::solver::SolverOptions;
use crate::thermal::{Backend, NumericSettings};
use crate::units;

/// The reference defaults compiled into the binary.
pub const REFERENCE_CONFIG: &str = include_str!("../reference.config");

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub seebeck_uv_per_k: f64,
    pub resistivity_mohm_cm: f64,
    pub thermal_conductivity_w_per_mk: f64,
    pub contact_resistance_ohm_um2: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialsConfig {
    pub p: MaterialConfig,
    pub n: MaterialConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub end_width_a_um: f64,
    pub middle_width_b_um: f64,
    pub step_height_h_um: f64,
    pub film_thickness_t_um: f64,
    pub end_segment_length_um: f64,
    pub middle_segment_length_um: f64,
    pub step_path_factor_gamma: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellConfig {
    pub pitch_x_um: f64,
    pub pitch_y_um: f64,
    /// 0 means: derive from the unfolded leg path length.
    pub gap_height_um: f64,
    /// "air" (released) or "teos" (unreleased sacrificial oxide collar).
    pub fill: String,
    pub air_conductivity_w_per_mk: f64,
    pub teos_conductivity_w_per_mk: f64,
    /// Unreleased-oxide collar area as a multiple of the leg plan area.
    pub teos_collar_area_factor: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutConfig {
    pub n_couples: usize,
    pub couple_pitch_um: f64,
    pub rim_band_width_um: f64,
    pub die_side_mm: f64,
    pub etch_depth_um: f64,
    pub rows: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentConfig {
    pub body_temperature_c: f64,
    pub ambient_temperature_c: f64,
    /// Specific body resistance [cm²·K/W]; divided by the skin contact area.
    pub body_specific_resistance_cm2k_per_w: f64,
    pub contact_area_cm2: f64,
    pub hot_plate_resistance_k_per_w: f64,
    pub cold_plate_resistance_k_per_w: f64,
    pub natural_convection_w_per_m2k: f64,
    pub forced_convection_w_per_m2k: f64,
    /// Use the forced coefficient for the radiator sink.
    pub forced_convection: bool,
    pub radiator_area_cm2: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceConfig {
    pub area_cm2: f64,
    /// 0 means: default to a square contact of the end width a.
    pub contact_area_um2: f64,
    pub interconnect_resistance_ohm: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub chuck_temperature_c: f64,
    pub ambient_temperature_c: f64,
    pub radiator_area_cm2: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub resolution_voxels_per_um: f64,
    pub tolerance: f64,
    pub max_voxels: usize,
    pub iteration_cap_factor: usize,
    /// Worker threads for sweeps; 0 means all cores.
    pub parallelism: usize,
    /// "analytic" or "numeric".
    pub cell_backend: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: String,
    /// "csv" (commented headers) or "plot" (bare two-column).
    pub format: String,
    pub timestamp: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub materials: MaterialsConfig,
    pub geometry: GeometryConfig,
    pub cell: CellConfig,
    pub layout: LayoutConfig,
    pub environment: EnvironmentConfig,
    pub device: DeviceConfig,
    pub scenario: ScenarioConfig,
    pub solver: SolverConfig,
    pub output: OutputConfig,
}

/// Deep merge: scalar and array keys in `over` replace those in `base`,
/// tables merge recursively.
fn merge_value(base: &mut toml::Value, over: toml::Value) {
    match (base, over) {
        (toml::Value::Table(b), toml::Value::Table(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge_value(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

fn parse_toml(text: &str, origin: &str) -> Result<toml::Value> {
    text.parse::<toml::Value>()
        .map_err(|e| Error::Config(format!("{origin}: {e}")))
}

/// Parse one `key.path=value` override into a single-path TOML table.
fn parse_override(spec: &str) -> Result<toml::Value> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("override '{spec}' is not key.path=value")))?;
    let path = path.trim();
    let raw = raw.trim();
    if path.is_empty() || path.split('.').any(|seg| seg.is_empty()) {
        return Err(Error::Config(format!("override '{spec}' has an empty key path")));
    }
    // Parse the value with TOML's own grammar; fall back to a string.
    let value = format!("v = {raw}")
        .parse::<toml::Value>()
        .ok()
        .and_then(|mut t| t.as_table_mut().and_then(|m| m.remove("v")))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let mut out = value;
    for seg in path.rsplit('.') {
        let mut table = toml::map::Map::new();
        table.insert(seg.to_string(), out);
        out = toml::Value::Table(table);
    }
    Ok(out)
}

impl Config {
    /// Reference defaults only.
    pub fn reference() -> Result<Config> {
        Config::load(None, &[])
    }

    /// Build the effective config: reference ← optional user file ← overrides.
    pub fn load(user_file: Option<&Path>, overrides: &[String]) -> Result<Config> {
        let mut merged = parse_toml(REFERENCE_CONFIG, "reference config")?;
        if let Some(path) = user_file {
            let text = std::fs::read_to_string(path)?;
            let user = parse_toml(&text, &path.display().to_string())?;
            merge_value(&mut merged, user);
        }
        for spec in overrides {
            merge_value(&mut merged, parse_override(spec)?);
        }
        let config: Config = merged
            .try_into()
            .map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        match self.cell.fill.as_str() {
            "air" | "teos" => {}
            other => {
                return Err(Error::Config(format!(
                    "cell.fill must be \"air\" or \"teos\", got \"{other}\""
                )))
            }
        }
        match self.solver.cell_backend.as_str() {
            "analytic" | "numeric" => {}
            other => {
                return Err(Error::Config(format!(
                    "solver.cell_backend must be \"analytic\" or \"numeric\", got \"{other}\""
                )))
            }
        }
        match self.output.format.as_str() {
            "csv" | "plot" => {}
            other => {
                return Err(Error::Config(format!(
                    "output.format must be \"csv\" or \"plot\", got \"{other}\""
                )))
            }
        }
        // Domain invariants surface through the domain objects so the
        // messages name the fields (e.g. end_width_a ≥ middle_width_b).
        self.couple_materials().validate()?;
        self.unit_cell()?.validate()?;
        self.rim_layout().validate()?;
        if !(self.device.area_cm2 > 0.0) {
            return Err(Error::Validation("device.area_cm2 must be > 0".into()));
        }
        if !(self.environment.contact_area_cm2 > 0.0) {
            return Err(Error::Validation(
                "environment.contact_area_cm2 must be > 0".into(),
            ));
        }
        if !(self.solver.tolerance > 0.0) {
            return Err(Error::Validation("solver.tolerance must be > 0".into()));
        }
        if !(self.solver.resolution_voxels_per_um > 0.0) {
            return Err(Error::Validation(
                "solver.resolution_voxels_per_um must be > 0".into(),
            ));
        }
        Ok(())
    }

    pub fn couple_materials(&self) -> CoupleMaterials {
        let conv = |m: &MaterialConfig| MaterialProps {
            seebeck_coefficient: units::microvolt_per_kelvin(m.seebeck_uv_per_k),
            electrical_resistivity: units::milliohm_cm(m.resistivity_mohm_cm),
            thermal_conductivity: m.thermal_conductivity_w_per_mk,
            specific_contact_resistance: units::ohm_um2(m.contact_resistance_ohm_um2),
        };
        CoupleMaterials {
            p: conv(&self.materials.p),
            n: conv(&self.materials.n),
        }
    }

    pub fn thermocouple_geometry(&self) -> ThermocoupleGeometry {
        let g = &self.geometry;
        ThermocoupleGeometry {
            end_width_a: g.end_width_a_um * units::UM,
            middle_width_b: g.middle_width_b_um * units::UM,
            step_height_h: g.step_height_h_um * units::UM,
            film_thickness_t: g.film_thickness_t_um * units::UM,
            end_segment_length: g.end_segment_length_um * units::UM,
            middle_segment_length: g.middle_segment_length_um * units::UM,
            step_path_factor_gamma: g.step_path_factor_gamma,
        }
    }

    pub fn unit_cell(&self) -> Result<UnitCell> {
        let geometry = self.thermocouple_geometry();
        let px = self.cell.pitch_x_um * units::UM;
        let py = self.cell.pitch_y_um * units::UM;
        // Fill conductivity before the fill kind is applied.
        let mut cell = if self.cell.gap_height_um == 0.0 {
            UnitCell::with_derived_gap(geometry, px, py, self.cell.air_conductivity_w_per_mk)
        } else {
            UnitCell {
                geometry,
                cell_pitch_x: px,
                cell_pitch_y: py,
                gap_height: self.cell.gap_height_um * units::UM,
                fill_conductivity: self.cell.air_conductivity_w_per_mk,
            }
        };
        if self.cell.fill == "teos" {
            cell.fill_conductivity = effective_fill_conductivity(
                false,
                self.cell.air_conductivity_w_per_mk,
                self.cell.teos_conductivity_w_per_mk,
                self.cell.teos_collar_area_factor,
                cell.leg_plan_area(),
                cell.fill_area(),
            );
        }
        Ok(cell)
    }

    pub fn rim_layout(&self) -> RimLayout {
        let l = &self.layout;
        RimLayout {
            n_couples: l.n_couples,
            couple_pitch: l.couple_pitch_um * units::UM,
            rim_band_width: l.rim_band_width_um * units::UM,
            die_side: l.die_side_mm * units::MM,
            etch_depth: l.etch_depth_um * units::UM,
            rows: l.rows,
        }
    }

    pub fn generator_design(&self) -> Result<GeneratorDesign> {
        let cell = self.unit_cell()?;
        let contact_area = if self.device.contact_area_um2 == 0.0 {
            cell.geometry.end_width_a * cell.geometry.end_width_a
        } else {
            self.device.contact_area_um2 * units::UM * units::UM
        };
        Ok(GeneratorDesign {
            n_couples: self.layout.n_couples,
            materials: self.couple_materials(),
            cell,
            layout: self.rim_layout(),
            contact_area_per_junction: contact_area,
            interconnect_resistance_per_couple: self.device.interconnect_resistance_ohm,
        })
    }

    pub fn environment(&self) -> Environment {
        let e = &self.environment;
        let h = if e.forced_convection {
            e.forced_convection_w_per_m2k
        } else {
            e.natural_convection_w_per_m2k
        };
        Environment {
            t_source: units::celsius_to_kelvin(e.body_temperature_c),
            t_ambient: units::celsius_to_kelvin(e.ambient_temperature_c),
            r_body: e.body_specific_resistance_cm2k_per_w / e.contact_area_cm2,
            r_hot_plate: e.hot_plate_resistance_k_per_w,
            r_cold_plate: e.cold_plate_resistance_k_per_w,
            r_sink: 1.0 / (h * e.radiator_area_cm2 * units::CM2),
            device_area: self.device.area_cm2 * units::CM2,
        }
    }

    pub fn scenario_settings(&self) -> ScenarioSettings {
        ScenarioSettings {
            chuck_temperature: units::celsius_to_kelvin(self.scenario.chuck_temperature_c),
            ambient_temperature: units::celsius_to_kelvin(self.scenario.ambient_temperature_c),
            radiator_area: self.scenario.radiator_area_cm2 * units::CM2,
            natural_convection: self.environment.natural_convection_w_per_m2k,
            forced_convection: self.environment.forced_convection_w_per_m2k,
            air_conductivity: self.cell.air_conductivity_w_per_mk,
            teos_conductivity: self.cell.teos_conductivity_w_per_mk,
            teos_collar_area_factor: self.cell.teos_collar_area_factor,
            device_area: self.device.area_cm2 * units::CM2,
        }
    }

    pub fn backend(&self) -> Backend {
        match self.solver.cell_backend.as_str() {
            "numeric" => Backend::Numeric,
            _ => Backend::Analytic,
        }
    }

    pub fn numeric_settings(&self) -> NumericSettings {
        NumericSettings {
            resolution: self.solver.resolution_voxels_per_um,
            max_voxels: self.solver.max_voxels,
            solver: SolverOptions {
                rel_tol: self.solver.tolerance,
                iter_cap_factor: self.solver.iteration_cap_factor,
            },
        }
    }

    /// Canonical TOML rendering of the effective config.
    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// SHA-256 of the canonical rendering, as lowercase hex.
    pub fn hash(&self) -> Result<String> {
        let canonical = self.to_toml_string()?;
        let digest = Sha256::digest(canonical.as_bytes());
        let mut hex = String::with_capacity(64);
        for byte in digest {
            use std::fmt::Write;
            write!(hex, "{byte:02x}").expect("writing to a String cannot fail");
        }
        Ok(hex)
    }
}
