use std::f64::consts::PI;
use std::io::{BufRead, BufReader};
use std::path::Path;

use mzi_core::calibration::{fit_crosstalk_plane, fit_fringe_with, stability_metric, unwrap_phase, FitOptions, PlaneSample};
use mzi_core::io::{read_columns, read_fringe_scan, write_columns, Report};

use super::Context;
use crate::error::{CliError, CliResult};
use crate::output::{open, OutDir};
use crate::FitCmd;

pub fn run(ctx: &Context, cmd: &FitCmd, out: &mut OutDir) -> CliResult<()> {
    match cmd {
        FitCmd::Fringe {
            scan,
            heater,
            subtract_accidentals,
        } => {
            let cfg = ctx.config;
            let label = scan.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let data = read_fringe_scan::<f64, _>(open(scan)?, &label)?;
            let options = FitOptions {
                resistor: cfg.heater(*heater)?.resistor,
                convention: cfg.dissipation,
                subtract_accidentals: *subtract_accidentals,
            };
            let fit = fit_fringe_with(&data, &options)?;
            let err = fit.std_errors();
            let powers = data.powers(&options.resistor, options.convention)?;
            let model1: Vec<f64> = powers.iter().map(|&p| fit.predict(0, p)).collect();
            let model2: Vec<f64> = powers.iter().map(|&p| fit.predict(1, p)).collect();
            out.write("fringe_fit.csv", |w| {
                write_columns(w, &["control", "power", "out1_model", "out2_model"], &[&data.control, &powers, &model1, &model2])
            })?;
            let mut r = Report::new(format!("fit fringe {label}"));
            r.add("alpha", fit.alpha)
                .add("alpha_err", err[0])
                .add("phi0", fit.phi0)
                .add("phi0_err", err[1])
                .add("visibility", fit.visibility)
                .add("visibility_err", err[2])
                .add("i_tot", fit.i_tot)
                .add("i_tot_err", err[3])
                .add("residual_rms", fit.residual_rms)
                .add("points", fit.points)
                .add("power_for_2pi", 2.0 * PI / fit.alpha);
            out.report("fringe_fit", &r)
        }
        FitCmd::Plane { samples } => {
            let names = power_columns(samples)?;
            let mut wanted: Vec<&str> = names.iter().map(String::as_str).collect();
            wanted.push("phi");
            let cols: Vec<Vec<f64>> = read_columns(open(samples)?, &wanted)?;
            let (phi, powers) = cols.split_last().expect("phi column");
            let data: Vec<PlaneSample<f64>> = (0..phi.len())
                .map(|k| PlaneSample {
                    powers: powers.iter().map(|c| c[k]).collect(),
                    phi: phi[k],
                })
                .collect();
            let fit = fit_crosstalk_plane(&data)?;
            let mut out_cols: Vec<&[f64]> = powers.iter().map(Vec::as_slice).collect();
            out_cols.push(phi);
            out_cols.push(&fit.residuals);
            let mut out_names = wanted.clone();
            out_names.push("residual");
            out.write("plane_fit.csv", |w| write_columns(w, &out_names, &out_cols))?;
            let mut r = Report::new("fit plane");
            r.add("phi0", fit.model.phi0).add("phi0_err", fit.phi0_error);
            for (k, (a, e)) in fit.model.alphas.iter().zip(&fit.alpha_errors).enumerate() {
                r.add(format!("alpha{}", k + 1), a).add(format!("alpha{}_err", k + 1), e);
            }
            r.add("standard_error", fit.standard_error).add("samples", data.len());
            out.report("plane_fit", &r)
        }
        FitCmd::Stability { series, wrapped } => {
            let cols: Vec<Vec<f64>> = read_columns(open(series)?, &["t", "phi"])?;
            let phi = if *wrapped { unwrap_phase(&cols[1])? } else { cols[1].clone() };
            let s = stability_metric(&cols[0], &phi)?;
            let span_h = (cols[0].last().copied().unwrap_or(0.0) - cols[0][0]) / 3600.0;
            let mut r = Report::new("fit stability");
            r.add("peak_to_peak", s.peak_to_peak)
                .add("drift_rad_per_h", s.drift_slope)
                .add("mean", s.mean)
                .add("samples", phi.len())
                .add("duration_h", span_h);
            out.report("stability", &r)
        }
    }
}

/// `p1, p2, ...` columns of a plane-sample file, in heater order.
fn power_columns(path: &Path) -> CliResult<Vec<String>> {
    let mut header = String::new();
    BufReader::new(open(path)?).read_line(&mut header)?;
    let mut idx: Vec<usize> = header
        .trim_end()
        .split(',')
        .filter_map(|h| h.trim().strip_prefix('p').and_then(|n| n.parse().ok()))
        .collect();
    idx.sort_unstable();
    if idx.is_empty() || idx.iter().enumerate().any(|(k, &i)| i != k + 1) {
        return Err(CliError::Data(format!(
            "{}: need power columns p1, p2, ... numbered from 1 and a phi column",
            path.display()
        )));
    }
    Ok(idx.iter().map(|i| format!("p{i}")).collect())
}
