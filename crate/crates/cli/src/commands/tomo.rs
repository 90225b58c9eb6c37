use mzi_core::interference::{mzi_unitary, MziParams};
use mzi_core::io::{read_matrix, read_tomography_bundle, write_columns, write_matrix, write_singles, write_visibilities, Report};
use mzi_core::thermal::phase_from_powers;
use mzi_core::tomography::{gauge_fixed_fidelity, reconstruct, simulate_dataset, Shots};
use mzi_core::unitary::random_haar;
use mzi_core::Unitary;

use super::{single_heater, Context};
use crate::error::CliResult;
use crate::output::{open, OutDir};
use crate::units::Dimension;
use crate::{usage, TomoCmd};

pub fn run(ctx: &Context, cmd: &TomoCmd, out: &mut OutDir) -> CliResult<()> {
    let cfg = ctx.config;
    match cmd {
        TomoCmd::Simulate {
            phi,
            power,
            heater,
            dim,
            shots,
        } => {
            if !(*shots >= 0.0) {
                return Err(usage("--shots must be >= 0"));
            }
            let mut rng = ctx.rng();
            let mut r = Report::new("tomo simulate");
            let u: Unitary<f64> = if *dim == 2 {
                let phi = match (phi, power) {
                    (Some(phi), _) => *phi,
                    (None, Some(p)) => {
                        cfg.heater(*heater)?;
                        let p = p.to_si(Dimension::Power, "--power").map_err(usage)?;
                        phase_from_powers(&cfg.crosstalk, &single_heater(cfg, *heater, p))?
                    }
                    (None, None) => cfg.crosstalk.phi0,
                };
                r.add("phi", phi);
                mzi_unitary(&MziParams {
                    eta1: cfg.eta1,
                    eta2: cfg.eta2,
                    phi,
                })?
            } else if (3..=4).contains(dim) {
                if phi.is_some() || power.is_some() {
                    return Err(usage("--phi and --power apply to two-mode circuits only"));
                }
                random_haar(*dim, &mut rng)?
            } else {
                return Err(usage(format!("--dim must be 2, 3 or 4, got {dim}")));
            };
            let mode = if *shots == 0.0 { Shots::Analytic } else { Shots::Poisson(*shots) };
            let data = simulate_dataset(&u, mode, &cfg.photons, &mut rng)?;
            out.write("tomo_singles.csv", |w| write_singles(w, &data))?;
            out.write("tomo_visibilities.csv", |w| write_visibilities(w, &data.visibilities))?;
            out.write("tomo_theory.csv", |w| write_matrix(w, u.matrix()))?;
            r.add("dim", dim)
                .add("shots", shots)
                .add("indistinguishability", cfg.photons.indistinguishability())
                .add("visibilities", data.visibilities.len())
                .add("seed", ctx.seed);
            out.report("tomo_simulate", &r)
        }
        TomoCmd::Reconstruct {
            singles,
            visibilities,
            theory,
        } => {
            let data = read_tomography_bundle(open(singles)?, open(visibilities)?, cfg.photons.indistinguishability())?;
            let rec = reconstruct(&data)?;
            let m = rec.unitary.matrix();
            out.write("tomo_unitary.csv", |w| write_matrix(w, m))?;
            let n = m.rows();
            let (mut o, mut i, mut sre, mut sim) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
            for j in 0..n {
                for k in 0..n {
                    o.push(j as f64);
                    i.push(k as f64);
                    sre.push(rec.sigma_re[(j, k)].re);
                    sim.push(rec.sigma_im[(j, k)].re);
                }
            }
            out.write("tomo_sigma.csv", |w| write_columns(w, &["out", "in", "re_sigma", "im_sigma"], &[&o, &i, &sre, &sim]))?;
            let mut r = Report::new("tomo reconstruct");
            r.add("dim", n)
                .add("residual", rec.residual)
                .add("loss_normalised", data.loss_normalised)
                .add("conjugate_ambiguous", rec.conjugate_ambiguous);
            for j in 0..n {
                for k in 0..n {
                    r.add(format!("u{j}{k}_re"), m[(j, k)].re).add(format!("u{j}{k}_im"), m[(j, k)].im);
                }
            }
            if let Some(t) = theory {
                let t: Unitary<f64> = Unitary::new(read_matrix(open(t)?)?)?;
                r.add("fidelity", gauge_fixed_fidelity(&t, &rec.unitary)?);
                if rec.conjugate_ambiguous {
                    let conj = Unitary::new(t.matrix().conj())?;
                    r.add("fidelity_conjugate", gauge_fixed_fidelity(&conj, &rec.unitary)?);
                }
            }
            out.report("tomo_reconstruct", &r)
        }
        TomoCmd::Fidelity { theory, experiment } => {
            let t: Unitary<f64> = Unitary::new(read_matrix(open(theory)?)?)?;
            let e = Unitary::nearest(&read_matrix(open(experiment)?)?)?;
            let mut r = Report::new("tomo fidelity");
            r.add("dim", t.dim()).add("fidelity", gauge_fixed_fidelity(&t, &e)?);
            out.report("tomo_fidelity", &r)
        }
    }
}
