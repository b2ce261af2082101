//! Command-line interface: subcommands over the library, layered config,
//! and table output to stdout or a file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::generator::{
    self, chuck_scenario, open_circuit_voltage, simulate, sweep_designs, GeneratorReport,
    SCENARIO_NOTE,
};
use crate::geometry::mask_catalog;
use crate::network::solve_network;
use crate::output::{fmt_f64, OutputFormat, Table};
use crate::thermal::{
    analytic_cell_resistance, cell_resistance_numeric, sweep_height, sweep_mask, sweep_width,
    Backend,
};
use crate::units;

#[derive(Debug, Parser)]
#[command(
    name = "tegsim",
    version,
    about = "Design and simulation toolkit for micromachined on-body thermoelectric generators"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Configuration file; falls back to the TEGSIM_CONFIG environment
    /// variable, then the built-in reference defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Override one config key, e.g. --set layout.n_couples=4700.
    /// Repeatable; later overrides win.
    #[arg(long, global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,

    /// Write the result table here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format: csv (commented headers) or plot (bare columns).
    #[arg(long, global = true)]
    pub format: Option<String>,

    /// Voxel resolution override for the numeric backend [voxels/μm].
    #[arg(long, global = true)]
    pub resolution: Option<f64>,

    /// Suppress the generation timestamp so reruns are byte-identical.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Material figures of merit.
    Materials {
        #[command(subcommand)]
        command: MaterialsCommand,
    },
    /// Unit-cell thermal resistance and geometry sweeps.
    Leg {
        #[command(subcommand)]
        command: LegCommand,
    },
    /// Lumped thermal network.
    Network {
        #[command(subcommand)]
        command: NetworkCommand,
    },
    /// Full generator predictions.
    Gen {
        #[command(subcommand)]
        command: GenCommand,
    },
    /// Measurement-condition emulations.
    Scenario {
        #[command(subcommand)]
        command: ScenarioCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum MaterialsCommand {
    /// Report ZT of both films and of the couple.
    Zt {
        /// Evaluation temperature [°C].
        #[arg(long, default_value_t = 26.85)]
        temperature_c: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum LegCommand {
    /// Thermal resistance of the configured unit cell.
    Resistance,
    /// Sweep the middle width b [μm].
    SweepWidth {
        #[arg(long, default_value_t = 0.5)]
        from_um: f64,
        #[arg(long, default_value_t = 4.0)]
        to_um: f64,
        #[arg(long, default_value_t = 8)]
        steps: usize,
    },
    /// Sweep the step height h [μm].
    SweepHeight {
        #[arg(long, default_value_t = 0.5)]
        from_um: f64,
        #[arg(long, default_value_t = 3.0)]
        to_um: f64,
        #[arg(long, default_value_t = 6)]
        steps: usize,
    },
    /// Sweep the full (a, b) mask catalog.
    SweepMask,
}

#[derive(Debug, Subcommand)]
pub enum NetworkCommand {
    /// Solve the configured source-to-ambient chain.
    Solve,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Simulate the configured design at its operating point.
    Simulate,
    /// Cross the mask catalog with both array variants.
    Sweep,
    /// Find the couple count maximizing matched-load power.
    Optimize {
        #[arg(long, default_value_t = 1)]
        min: usize,
        #[arg(long, default_value_t = 10000)]
        max: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ScenarioCommand {
    /// Thermal-chuck emulation over the rim / convection / release flags.
    Chuck,
}

fn linspace(from: f64, to: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::InvalidInput("steps must be >= 1".into()));
    }
    if steps == 1 {
        return Ok(vec![from]);
    }
    let d = (to - from) / (steps - 1) as f64;
    Ok((0..steps).map(|i| from + i as f64 * d).collect())
}

fn report_row(report: &GeneratorReport) -> Vec<String> {
    vec![
        fmt_f64(report.v_oc),
        fmt_f64(report.r_internal),
        fmt_f64(report.p_matched * 1e6),
        fmt_f64(report.delta_t_junctions),
        fmt_f64(report.q_total * 1e3),
        fmt_f64(report.areal_voltage_density),
    ]
}

const REPORT_COLUMNS: [&str; 6] = [
    "v_oc_v",
    "r_internal_ohm",
    "p_matched_uw",
    "delta_t_junctions_k",
    "q_total_mw",
    "voltage_density_mv_per_k_cm2",
];

fn run_command(cli: &Cli, config: &Config) -> Result<Table> {
    let backend = config.backend();
    let mut settings = config.numeric_settings();
    if let Some(res) = cli.global.resolution {
        settings.resolution = res;
    }
    let pair = config.couple_materials();
    let cell = config.unit_cell()?;
    let k_leg = pair.p.thermal_conductivity;

    match &cli.command {
        Command::Materials {
            command: MaterialsCommand::Zt { temperature_c },
        } => {
            let t = units::celsius_to_kelvin(*temperature_c);
            let mut table = Table::new(vec!["quantity", "value"]);
            table.push_row(vec!["temperature_k".into(), fmt_f64(t)]);
            table.push_row(vec!["zt_p".into(), fmt_f64(pair.p.figure_of_merit(t)?)]);
            table.push_row(vec!["zt_n".into(), fmt_f64(pair.n.figure_of_merit(t)?)]);
            table.push_row(vec!["zt_couple".into(), fmt_f64(pair.figure_of_merit(t)?)]);
            table.push_row(vec![
                "delta_seebeck_uv_per_k".into(),
                fmt_f64(pair.delta_seebeck() * 1e6),
            ]);
            Ok(table)
        }

        Command::Leg { command } => match command {
            LegCommand::Resistance => {
                let mut table = Table::new(vec!["quantity", "value"]);
                let analytic = analytic_cell_resistance(&cell, k_leg)?;
                table.push_row(vec!["r_cell_analytic_k_per_w".into(), fmt_f64(analytic.r_cell)]);
                table.push_row(vec!["r_legs_k_per_w".into(), fmt_f64(analytic.r_legs)]);
                if let Some(r_fill) = analytic.r_fill {
                    table.push_row(vec!["r_fill_k_per_w".into(), fmt_f64(r_fill)]);
                }
                if let Some(note) = analytic.note {
                    table.comment(note);
                }
                if backend == Backend::Numeric {
                    let numeric = cell_resistance_numeric(&cell, k_leg, &settings)?;
                    table.push_row(vec![
                        "r_cell_numeric_k_per_w".into(),
                        fmt_f64(numeric.r_cell),
                    ]);
                    table.push_row(vec![
                        "solver_iterations".into(),
                        numeric.iterations.to_string(),
                    ]);
                    table.push_row(vec![
                        "energy_defect".into(),
                        fmt_f64(numeric.energy_defect),
                    ]);
                }
                Ok(table)
            }
            LegCommand::SweepWidth { from_um, to_um, steps } => {
                let bs: Vec<f64> = linspace(*from_um, *to_um, *steps)?
                    .into_iter()
                    .map(|b| b * units::UM)
                    .collect();
                let pts = sweep_width(&cell, k_leg, &bs, backend, &settings);
                let mut table = Table::new(vec!["b_um", "r_cell_k_per_w", "status"]);
                for p in pts {
                    let (r, status) = match &p.resistance {
                        Ok(r) => (fmt_f64(*r), "ok".to_string()),
                        Err(e) => (String::from("nan"), e.clone()),
                    };
                    table.push_row(vec![fmt_f64(p.input / units::UM), r, status]);
                }
                Ok(table)
            }
            LegCommand::SweepHeight { from_um, to_um, steps } => {
                let hs: Vec<f64> = linspace(*from_um, *to_um, *steps)?
                    .into_iter()
                    .map(|h| h * units::UM)
                    .collect();
                let pts = sweep_height(&cell, k_leg, &hs, backend, &settings);
                let mut table = Table::new(vec!["h_um", "r_cell_k_per_w", "status"]);
                for p in pts {
                    let (r, status) = match &p.resistance {
                        Ok(r) => (fmt_f64(*r), "ok".to_string()),
                        Err(e) => (String::from("nan"), e.clone()),
                    };
                    table.push_row(vec![fmt_f64(p.input / units::UM), r, status]);
                }
                Ok(table)
            }
            LegCommand::SweepMask => {
                let pts = sweep_mask(&cell, k_leg, &mask_catalog(), backend, &settings);
                let mut table = Table::new(vec!["a_um", "b_um", "r_cell_k_per_w", "status"]);
                for p in pts {
                    let (r, status) = match &p.resistance {
                        Ok(r) => (fmt_f64(*r), "ok".to_string()),
                        Err(e) => (String::from("nan"), e.clone()),
                    };
                    table.push_row(vec![
                        fmt_f64(p.input.0 / units::UM),
                        fmt_f64(p.input.1 / units::UM),
                        r,
                        status,
                    ]);
                }
                Ok(table)
            }
        },

        Command::Network {
            command: NetworkCommand::Solve,
        } => {
            let design = config.generator_design()?;
            let env = config.environment();
            let r_cell = analytic_cell_resistance(&design.cell, k_leg)?.r_cell;
            let circuit = crate::network::ThermalCircuit {
                t_source: env.t_source,
                t_ambient: env.t_ambient,
                r_body: env.r_body,
                r_hot_plate: env.r_hot_plate,
                r_cold_plate: env.r_cold_plate,
                r_pile: r_cell / design.n_couples as f64,
                r_gap: generator::device_gap_resistance(&design, env.device_area)?,
                r_sink: env.r_sink,
            };
            let sol = solve_network(&circuit)?;
            let mut table = Table::new(vec!["quantity", "value"]);
            table.push_row(vec!["q_total_mw".into(), fmt_f64(sol.q_total * 1e3)]);
            table.push_row(vec!["q_pile_mw".into(), fmt_f64(sol.q_pile * 1e3)]);
            table.push_row(vec!["q_gap_mw".into(), fmt_f64(sol.q_gap * 1e3)]);
            table.push_row(vec![
                "delta_t_junctions_k".into(),
                fmt_f64(sol.delta_t_junctions),
            ]);
            table.push_row(vec![
                "t_hot_junction_c".into(),
                fmt_f64(units::kelvin_to_celsius(sol.nodes.hot_junction)),
            ]);
            table.push_row(vec![
                "t_cold_junction_c".into(),
                fmt_f64(units::kelvin_to_celsius(sol.nodes.cold_junction)),
            ]);
            table.push_row(vec![
                "v_oc_v".into(),
                fmt_f64(open_circuit_voltage(
                    design.n_couples,
                    &pair,
                    sol.delta_t_junctions,
                )),
            ]);
            Ok(table)
        }

        Command::Gen { command } => {
            let design = config.generator_design()?;
            let env = config.environment();
            match command {
                GenCommand::Simulate => {
                    let report = simulate(&design, &env, backend, &settings)?;
                    let mut table = Table::new(REPORT_COLUMNS.to_vec());
                    table.push_row(report_row(&report));
                    table.embed_config(&config.to_toml_string()?);
                    Ok(table)
                }
                GenCommand::Sweep => {
                    let rows = sweep_designs(&design, &env, &mask_catalog(), backend, &settings);
                    let mut columns = vec!["a_um", "b_um", "type", "n_couples"];
                    columns.extend(REPORT_COLUMNS);
                    columns.push("status");
                    let mut table = Table::new(columns);
                    for row in rows {
                        let mut cells = vec![
                            fmt_f64(row.end_width_a / units::UM),
                            fmt_f64(row.middle_width_b / units::UM),
                            row.design_type.label().to_string(),
                            row.design_type.n_couples().to_string(),
                        ];
                        match &row.report {
                            Ok(rep) => {
                                cells.extend(report_row(rep));
                                cells.push("ok".into());
                            }
                            Err(e) => {
                                cells.extend(std::iter::repeat(String::from("nan")).take(6));
                                cells.push(e.clone());
                            }
                        }
                        table.push_row(cells);
                    }
                    table.embed_config(&config.to_toml_string()?);
                    Ok(table)
                }
                GenCommand::Optimize { min, max } => {
                    if min > max || *min == 0 {
                        return Err(Error::InvalidInput(
                            "optimize needs 1 <= min <= max".into(),
                        ));
                    }
                    let (n, report) =
                        generator::optimize_couples(&design, &env, *min..=*max, backend, &settings)?;
                    let mut columns = vec!["n_couples_optimal"];
                    columns.extend(REPORT_COLUMNS);
                    let mut table = Table::new(columns);
                    let mut cells = vec![n.to_string()];
                    cells.extend(report_row(&report));
                    table.push_row(cells);
                    table.embed_config(&config.to_toml_string()?);
                    Ok(table)
                }
            }
        }

        Command::Scenario {
            command: ScenarioCommand::Chuck,
        } => {
            let design = config.generator_design()?;
            let s = config.scenario_settings();
            let mut table = Table::new(vec![
                "rim",
                "convection",
                "fill",
                "voltage_density_mv_per_k_cm2",
                "v_oc_v",
                "delta_t_junctions_k",
                "junction_fraction",
            ]);
            table.comment(SCENARIO_NOTE);
            for rim in [false, true] {
                for forced in [false, true] {
                    for released in [false, true] {
                        let r = chuck_scenario(&design, &s, rim, forced, released)?;
                        table.push_row(vec![
                            rim.to_string(),
                            if forced { "forced" } else { "natural" }.to_string(),
                            if released { "air" } else { "teos" }.to_string(),
                            fmt_f64(r.density),
                            fmt_f64(r.v_oc),
                            fmt_f64(r.delta_t_junctions),
                            fmt_f64(r.junction_fraction),
                        ]);
                    }
                }
            }
            Ok(table)
        }
    }
}

fn write_output(cli: &Cli, config: &Config, mut table: Table) -> Result<()> {
    let format = match &cli.global.format {
        Some(f) => f.parse::<OutputFormat>()?,
        None => config.output.format.parse::<OutputFormat>()?,
    };
    let timestamp = config.output.timestamp && !cli.global.no_timestamp;
    table.stamp(&config.hash()?, timestamp);
    let text = table.render(format);
    match &cli.global.out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(path, text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<()> {
    let config_path = cli.global.config.clone().or_else(|| {
        std::env::var_os("TEGSIM_CONFIG").map(PathBuf::from)
    });
    let config = Config::load(config_path.as_deref(), &cli.global.set)?;
    if config.solver.parallelism > 0 {
        // Already-built global pools (e.g. in tests) keep their size.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(config.solver.parallelism)
            .build_global();
    }
    let table = run_command(cli, &config)?;
    write_output(cli, &config, table)
}

/// Parse the process arguments, run, and return the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints usage/help itself; use its exit code (0 for
            // --help/--version, 2 for usage errors).
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_endpoints_and_count() {
        let v = linspace(0.5, 4.0, 8).unwrap();
        assert_eq!(v.len(), 8);
        assert_eq!(v[0], 0.5);
        assert!((v[7] - 4.0).abs() < 1e-12);
        assert_eq!(linspace(1.0, 2.0, 1).unwrap(), vec![1.0]);
        assert!(linspace(1.0, 2.0, 0).is_err());
    }

    #[test]
    fn cli_parses_nested_subcommands() {
        let cli = Cli::try_parse_from(["tegsim", "leg", "sweep-width", "--steps", "5"]).unwrap();
        match cli.command {
            Command::Leg {
                command: LegCommand::SweepWidth { steps, .. },
            } => assert_eq!(steps, 5),
            other => panic!("unexpected parse: {other:?}"),
        }
    }

    #[test]
    fn unknown_subcommand_fails_to_parse() {
        assert!(Cli::try_parse_from(["tegsim", "frobnicate"]).is_err());
    }

    #[test]
    fn global_flags_reachable_after_subcommand() {
        let cli = Cli::try_parse_from([
            "tegsim",
            "gen",
            "simulate",
            "--set",
            "layout.n_couples=100",
            "--no-timestamp",
        ])
        .unwrap();
        assert_eq!(cli.global.set, vec!["layout.n_couples=100".to_string()]);
        assert!(cli.global.no_timestamp);
    }

    #[test]
    fn materials_zt_runs_on_reference_config() {
        let cli = Cli::try_parse_from(["tegsim", "materials", "zt"]).unwrap();
        let config = Config::reference().unwrap();
        let table = run_command(&cli, &config).unwrap();
        assert_eq!(table.rows.len(), 5);
    }
}
