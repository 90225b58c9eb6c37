use std::f64::consts::PI;

use mzi_core::io::{write_columns, Report};
use mzi_core::thermal::{
    alpha_per_log_ratio, compare_with_log_model, predict_alpha, solve_heat_fd, Heater, HeaterDrive, Region,
    SolverOptions, TemperatureField,
};

use super::Context;
use crate::error::CliResult;
use crate::output::OutDir;
use crate::units::Dimension;
use crate::{usage, Drive, ThermalCmd};

fn solve(ctx: &Context, drive: &Drive) -> CliResult<TemperatureField<f64>> {
    let cfg = ctx.config;
    cfg.heater(drive.heater)?;
    let driven = match (drive.power, drive.temperature) {
        (_, Some(t)) => HeaterDrive::Temperature(t.to_si(Dimension::Temperature, "--temperature").map_err(usage)?),
        (Some(p), None) => HeaterDrive::Power(p.to_si(Dimension::Power, "--power").map_err(usage)?),
        (None, None) => HeaterDrive::Power(0.5),
    };
    let mut grid = cfg.chip.clone();
    for (i, h) in cfg.heaters.iter().enumerate() {
        let d = if i == drive.heater { driven } else { HeaterDrive::Power(0.0) };
        grid = grid.with_heater(Heater::centered(h.position, h.width, d));
    }
    Ok(solve_heat_fd(&grid, &SolverOptions::default())?)
}

fn field_report(title: &str, f: &TemperatureField<f64>) -> Report {
    let (power_per_length, _) = f.boundary_flux();
    let max = f.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut r = Report::new(title);
    r.add("nx", f.grid.nx)
        .add("ny", f.grid.ny)
        .add("iterations", f.iterations)
        .add("relative_residual", f.relative_residual)
        .add("power_per_length_w_per_m", power_per_length)
        .add("max_temperature_k", max);
    r
}

pub fn run(ctx: &Context, cmd: &ThermalCmd, out: &mut OutDir) -> CliResult<()> {
    match cmd {
        ThermalCmd::Solve { drive } => {
            let f = solve(ctx, drive)?;
            out.write("temperature.csv", |w| f.write_csv(w))?;
            out.report("temperature", &field_report("thermal solve", &f))
        }
        ThermalCmd::Compare {
            drive,
            region_width,
            region_depth,
        } => {
            let f = solve(ctx, drive)?;
            let h = ctx.config.heater(drive.heater)?;
            let width = region_width.to_si(Dimension::Length, "--region-width").map_err(usage)?;
            let depth = region_depth.to_si(Dimension::Length, "--region-depth").map_err(usage)?;
            let cmp = compare_with_log_model(&f, drive.heater, Region::below_heater(width, depth, h.width))?;
            let g = &f.grid;
            let (mut xs, mut ys) = (Vec::with_capacity(g.nx * g.ny), Vec::with_capacity(g.nx * g.ny));
            for j in 0..g.ny {
                for i in 0..g.nx {
                    xs.push(g.x(i));
                    ys.push(g.y(j));
                }
            }
            out.write("log_compare.csv", |w| write_columns(w, &["x", "y", "relative_difference"], &[&xs, &ys, &cmp.relative_difference]))?;
            let mut r = field_report("thermal compare", &f);
            r.add("region_width_m", width)
                .add("region_depth_m", depth)
                .add("c1_k", cmp.c1)
                .add("c2_k", cmp.c2)
                .add("max_relative_difference", cmp.max_relative_difference)
                .add("within_10_percent", cmp.max_relative_difference < 0.1);
            out.report("log_compare", &r)
        }
        ThermalCmd::Alpha { heater } => {
            let cfg = ctx.config;
            let h = cfg.heater(*heater)?;
            let alpha = predict_alpha(&h.geometry, &cfg.material)?;
            let slope = alpha_per_log_ratio(h.geometry.arm_length, h.geometry.wire_length, &cfg.material);
            let mut r = Report::new("thermal alpha");
            r.add("heater", heater)
                .add("log_ratio", h.geometry.log_ratio())
                .add("alpha_per_log_ratio", slope)
                .add("alpha", alpha)
                .add("power_for_2pi", 2.0 * PI / alpha.abs());
            if cfg.crosstalk_measured {
                r.add("alpha_config", cfg.crosstalk.alphas[*heater]);
            }
            out.report("alpha", &r)
        }
    }
}
