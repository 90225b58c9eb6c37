use std::f64::consts::PI;

use mzi_core::calibration::{voltage_to_power, ControlUnit, FringeScan};
use mzi_core::interference::{
    classical_fringe, fit_sinusoid, hom_visibility, mzi_unitary, noon_fringes, pair_probability,
    pair_probability_limits, visibility_minmax, MziParams, NoonSetup, PairOutput,
};
use mzi_core::io::{write_columns, write_curves, write_fringe_scan, Report};
use mzi_core::thermal::StepResponse;
use mzi_core::thermal::step_phase;
use rand_distr::{Distribution, Normal};

use super::{linspace, single_heater, Context};
use crate::error::{CliError, CliResult};
use crate::output::OutDir;
use crate::units::Dimension;
use crate::{usage, SimulateCmd};

pub fn run(ctx: &Context, cmd: &SimulateCmd, out: &mut OutDir) -> CliResult<()> {
    match cmd {
        SimulateCmd::Fringe {
            sweep,
            unit,
            visibility,
            i_tot,
            noise,
            single_output,
        } => {
            let cfg = ctx.config;
            let h = cfg.heater(sweep.heater)?;
            let unit = ControlUnit::parse(unit).ok_or_else(|| usage(format!("--unit must be W or V, got {unit:?}")))?;
            let dim = match unit {
                ControlUnit::Watts => Dimension::Power,
                ControlUnit::Volts => Dimension::Voltage,
            };
            let from = sweep.from.to_si(dim, "--from").map_err(usage)?;
            let to = sweep.to.to_si(dim, "--to").map_err(usage)?;
            if from < 0.0 {
                return Err(usage("--from must be >= 0"));
            }
            if !(0.0..=1.0).contains(visibility) {
                return Err(usage("--visibility must lie in [0, 1]"));
            }
            if !(*i_tot > 0.0) || !(*noise >= 0.0) {
                return Err(usage("--i-tot must be > 0 and --noise >= 0"));
            }
            let control = linspace(from, to, sweep.points, "simulate fringe")?;
            let alpha = cfg.crosstalk.alphas[sweep.heater];
            let phi0 = cfg.crosstalk.phi0;
            let normal = Normal::new(0.0, noise * i_tot).map_err(|e| usage(format!("--noise: {e}")))?;
            let mut rng = ctx.rng();
            let mut outputs = vec![Vec::with_capacity(control.len()); if *single_output { 1 } else { 2 }];
            for &c in &control {
                let p = match unit {
                    ControlUnit::Watts => c,
                    ControlUnit::Volts => voltage_to_power(c, &h.resistor, cfg.dissipation)?,
                };
                let first = i_tot * classical_fringe(phi0, alpha, *visibility, p);
                outputs[0].push(first + normal.sample(&mut rng));
                if !single_output {
                    outputs[1].push(i_tot - first + normal.sample(&mut rng));
                }
            }
            let scan = FringeScan::from_values(control, unit, outputs, "simulated")?;
            out.write("fringe.csv", |w| write_fringe_scan(w, &scan))?;
            let mut r = Report::new("simulate fringe");
            r.add("heater", sweep.heater)
                .add("points", scan.len())
                .add("unit", unit.symbol())
                .add("alpha", alpha)
                .add("phi0", phi0)
                .add("visibility", visibility)
                .add("i_tot", i_tot)
                .add("noise", noise)
                .add("seed", ctx.seed);
            out.report("fringe", &r)
        }
        SimulateCmd::Noon {
            sweep,
            delay,
            bunched_efficiency,
        } => {
            let cfg = ctx.config;
            cfg.heater(sweep.heater)?;
            let from = sweep.from.to_si(Dimension::Power, "--from").map_err(usage)?;
            let to = sweep.to.to_si(Dimension::Power, "--to").map_err(usage)?;
            let tau = delay.to_si(Dimension::Time, "--delay").map_err(usage)?;
            if from < 0.0 {
                return Err(usage("--from must be >= 0"));
            }
            let powers: Vec<Vec<f64>> = linspace(from, to, sweep.points, "simulate noon")?
                .into_iter()
                .map(|p| single_heater(cfg, sweep.heater, p))
                .collect();
            let pair = cfg.photons.with_delay(tau);
            let setup = NoonSetup {
                eta1: cfg.eta1,
                eta2: cfg.eta2,
                bunched_efficiency: *bunched_efficiency,
            };
            let curves = noon_fringes(&cfg.crosstalk, &powers, &pair, &setup)?;
            out.write("noon.csv", |w| write_curves(w, &curves))?;
            let alpha = cfg.crosstalk.alphas[sweep.heater];
            let mut r = Report::new("simulate noon");
            r.add("heater", sweep.heater)
                .add("points", curves.len())
                .add("indistinguishability", pair.indistinguishability())
                .add("accidental_rate", pair.accidental_rate)
                .add("v11", visibility_minmax(&curves.control, &curves.p11)?)
                .add("v02", visibility_minmax(&curves.control, &curves.p02)?)
                .add("v20", visibility_minmax(&curves.control, &curves.p20)?)
                .add("single_photon_period_w", 2.0 * PI / alpha.abs());
            if let Ok(fit) = fit_sinusoid(&curves.control, &curves.p11) {
                r.add("p11_period_w", 2.0 * PI / fit.frequency);
            }
            out.report("noon", &r)
        }
        SimulateCmd::Hom { phi, from, to, points } => {
            let cfg = ctx.config;
            let from = from.to_si(Dimension::Time, "--from").map_err(usage)?;
            let to = to.to_si(Dimension::Time, "--to").map_err(usage)?;
            let phi = phi.unwrap_or(PI / 2.0);
            let u = mzi_unitary(&MziParams {
                eta1: cfg.eta1,
                eta2: cfg.eta2,
                phi,
            })?;
            let delays = linspace(from, to, *points, "simulate hom")?;
            let (_, dist) = pair_probability_limits(&u, (0, 1), PairOutput(0, 1))?;
            let mut p11 = Vec::with_capacity(delays.len());
            let mut vis = Vec::with_capacity(delays.len());
            for &tau in &delays {
                let pair = cfg.photons.with_delay(tau);
                p11.push(pair_probability(&u, (0, 1), PairOutput(0, 1), &pair)?);
                vis.push(hom_visibility(&u, (0, 1), PairOutput(0, 1), &pair)?);
            }
            let dist_col = vec![dist; delays.len()];
            out.write("hom.csv", |w| {
                write_columns(w, &["delay", "P11", "P11_distinguishable", "visibility"], &[&delays, &p11, &dist_col, &vis])
            })?;
            let at_zero = hom_visibility(&u, (0, 1), PairOutput(0, 1), &cfg.photons.with_delay(0.0))?;
            let mut r = Report::new("simulate hom");
            r.add("phi", phi)
                .add("overlap", cfg.photons.overlap)
                .add("sigma_t_s", cfg.photons.sigma_t)
                .add("visibility_at_zero_delay", at_zero)
                .add("points", delays.len());
            out.report("hom", &r)
        }
        SimulateCmd::Step {
            phi_initial,
            phi_final,
            duration,
            points,
        } => {
            let cfg = ctx.config;
            let duration = duration.to_si(Dimension::Time, "--duration").map_err(usage)?;
            let step = StepResponse::from_rise_time(cfg.rise_time, *phi_initial, *phi_final)?;
            let t = linspace(0.0, duration, *points, "simulate step")?;
            let phi = t.iter().map(|&t| step_phase(&step, t)).collect::<Result<Vec<_>, _>>()?;
            out.write("step.csv", |w| write_columns(w, &["t", "phi"], &[&t, &phi]))?;
            let (t10, t90) = match (step.time_to_fraction(0.1), step.time_to_fraction(0.9)) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(CliError::Data("step fractions".into())),
            };
            let mut r = Report::new("simulate step");
            r.add("tau_s", step.tau)
                .add("rise_time_s", step.rise_time())
                .add("t10_s", t10)
                .add("t90_s", t90)
                .add("phi_initial", phi_initial)
                .add("phi_final", phi_final);
            out.report("step", &r)
        }
    }
}
