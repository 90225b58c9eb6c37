//! Power-matched comparison of a finite-difference field with the
//! logarithmic wire model.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::fd::TemperatureField;

/// Rectangle below the heater, `|x - x_heater| <= half_width` and
/// `0 <= y <= depth`, minus the heater core `rho < core_radius` where the
/// line-source profile is singular.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Region<T> {
    pub half_width: T,
    pub depth: T,
    pub core_radius: T,
}

impl<T: Real> Region<T> {
    /// `width x depth` rectangle with the core set to the half-width of the
    /// heater strip.
    pub fn below_heater(width: T, depth: T, heater_width: T) -> Self {
        Self {
            half_width: width * T::half(),
            depth,
            core_radius: heater_width * T::half(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LogComparison<T> {
    /// Additive constant of the rise `C1 - C2 ln rho`, K.
    pub c1: T,
    /// `P' / (pi kappa)` with `P'` the FD power per unit length, K.
    pub c2: T,
    /// Radius inside which the log model is held at its value on the
    /// heater: a strip of width `w` is equivalent to a cylinder of radius `w/4`.
    pub equivalent_radius: T,
    pub power_per_length: T,
    /// Largest relative difference of the temperature rise inside the region.
    pub max_relative_difference: T,
    /// `|rise_fd - rise_log| / rise_fd` at every node (infinite at the base).
    pub relative_difference: Vec<T>,
}

impl<T: Real> LogComparison<T> {
    pub fn model_rise(&self, rho: T) -> T {
        self.c1 - self.c2 * rho.max(self.equivalent_radius).ln()
    }
}

/// Compares `field` against the log model centred on heater `heater`.
///
/// `C2` is fixed by the power the FD solution dissipates through the glass;
/// `C1` minimises the largest relative difference over `region`.
pub fn compare_with_log_model<T: Real>(
    field: &TemperatureField<T>,
    heater: usize,
    region: Region<T>,
) -> Result<LogComparison<T>> {
    let g = &field.grid;
    let h = g.heaters.get(heater).ok_or(Error::DimensionMismatch {
        what: "heater index",
        expected: g.heaters.len(),
        found: heater + 1,
    })?;
    let (power_per_length, _) = field.boundary_flux();
    if !(power_per_length > T::zero()) {
        return Err(Error::invalid("heater", "no power dissipated"));
    }
    let c2 = power_per_length / (T::PI() * g.kappa);
    let r_eq = h.width() / T::lit(4.0);
    let xc = h.center();
    let rho = |i: usize, j: usize| {
        let dx = g.x(i) - xc;
        let dy = g.y(j);
        (dx * dx + dy * dy).sqrt().max(r_eq)
    };
    let in_region = |i: usize, j: usize| {
        let dx = g.x(i) - xc;
        let dy = g.y(j);
        dx.abs() <= region.half_width
            && dy <= region.depth
            && (dx * dx + dy * dy).sqrt() >= region.core_radius
    };

    // (rise, -C2 ln rho) over the region
    let samples: Vec<(T, T)> = (0..g.ny)
        .flat_map(|j| (0..g.nx).map(move |i| (i, j)))
        .filter(|&(i, j)| in_region(i, j) && field.rise(i, j) > T::zero())
        .map(|(i, j)| (field.rise(i, j), -c2 * rho(i, j).ln()))
        .collect();
    if samples.is_empty() {
        return Err(Error::invalid("region", "contains no heated nodes"));
    }
    let worst = |c1: T| {
        samples
            .iter()
            .fold(T::zero(), |m, &(r, shape)| m.max(((r - c1 - shape) / r).abs()))
    };
    // The worst-case error is convex in C1; bracket with the sample offsets.
    let (mut lo, mut hi) = samples.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &(r, s)| {
        (lo.min(r - s), hi.max(r - s))
    });
    let golden = T::lit(0.618_033_988_749_895);
    for _ in 0..200 {
        let a = hi - golden * (hi - lo);
        let b = lo + golden * (hi - lo);
        if worst(a) <= worst(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    let c1 = (lo + hi) * T::half();

    let mut relative_difference = Vec::with_capacity(g.nx * g.ny);
    let mut max_rel = T::zero();
    for j in 0..g.ny {
        for i in 0..g.nx {
            let r = field.rise(i, j);
            let model = c1 - c2 * rho(i, j).ln();
            let rel = if r > T::zero() {
                ((r - model) / r).abs()
            } else {
                T::infinity()
            };
            if in_region(i, j) {
                max_rel = max_rel.max(rel);
            }
            relative_difference.push(rel);
        }
    }
    Ok(LogComparison {
        c1,
        c2,
        equivalent_radius: r_eq,
        power_per_length,
        max_relative_difference: max_rel,
        relative_difference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermal::fd::{solve_heat_fd, HeatGrid, Heater, HeaterDrive, SolverOptions};
    use num_complex::Complex64;

    fn solve(grid: &HeatGrid<f64>) -> TemperatureField<f64> {
        solve_heat_fd(grid, &SolverOptions::default()).unwrap()
    }

    fn wide_chip(heater: Heater<f64>) -> HeatGrid<f64> {
        let mut g = HeatGrid::chip(481, 101);
        g.width = 12e-3;
        g.with_heater(heater)
    }

    /// Line source on the insulated face of a slab with isothermal base at
    /// depth `d`, per unit length: `P' / (pi kappa) ln|coth(pi z / 4d)|`.
    fn slab_line_source(p_per_len: f64, kappa: f64, d: f64, x: f64, y: f64) -> f64 {
        let w = Complex64::new(x, y) * (std::f64::consts::PI / (4.0 * d));
        let coth = w.cosh() / w.sinh();
        p_per_len / (std::f64::consts::PI * kappa) * coth.norm().ln()
    }

    #[test]
    fn narrow_heater_matches_slab_green_function() {
        let g = wide_chip(Heater::centered(6e-3, 50e-6, HeaterDrive::Power(0.4)));
        let f = solve(&g);
        let p_per_len = 0.4 / g.wire_length;
        for (dx, y) in [(0.5e-3, 0.3e-3), (1.0e-3, 0.1e-3), (0.2e-3, 0.6e-3)] {
            let exact = slab_line_source(p_per_len, g.kappa, g.depth, dx, y);
            let fd = f.at(6e-3 + dx, y) - g.base_temperature;
            assert!((fd - exact).abs() < 0.01 * exact, "{dx} {y}: {fd} vs {exact}");
        }
    }

    #[test]
    fn power_heaters_superpose() {
        let a = Heater::centered(2.5e-3, 3e-4, HeaterDrive::Power(0.3));
        let b = Heater::centered(3.7e-3, 3e-4, HeaterDrive::Power(0.2));
        let base = HeatGrid::chip(241, 101);
        let fa = solve(&base.clone().with_heater(a));
        let fb = solve(&base.clone().with_heater(b));
        let fab = solve(&base.with_heater(a).with_heater(b));
        let scale = fab.values().iter().map(|v| v - 293.15).fold(0.0, f64::max);
        for j in 0..101 {
            for i in 0..241 {
                let sum = fa.rise(i, j) + fb.rise(i, j);
                assert!((fab.rise(i, j) - sum).abs() < 1e-9 * scale);
            }
        }
    }

    #[test]
    fn arm_temperatures_converge_with_grid() {
        let heater = Heater::centered(3e-3, 3e-4, HeaterDrive::Temperature(303.15));
        let coarse = solve(&HeatGrid::chip(241, 101).with_heater(heater));
        let fine = solve(&HeatGrid::chip(481, 201).with_heater(heater));
        for (x, y) in [(3e-3 + 1.02e-3, 25e-6), (3e-3 + 1.02e-3, 115e-6), (3e-3, 115e-6)] {
            let (c, f) = (coarse.at(x, y) - 293.15, fine.at(x, y) - 293.15);
            assert!((c - f).abs() < 0.01 * f, "({x}, {y}): {c} vs {f}");
        }
    }

    #[test]
    fn decay_constant_follows_dissipated_power() {
        let f = solve(&HeatGrid::chip(241, 101).with_heater(Heater::centered(
            3e-3,
            3e-4,
            HeaterDrive::Power(0.5),
        )));
        let cmp = compare_with_log_model(&f, 0, Region::below_heater(1.5e-3, 0.5e-3, 3e-4)).unwrap();
        let expected = 0.5 / 20e-3 / (std::f64::consts::PI * 0.9);
        assert!((cmp.c2 - expected).abs() < 1e-6 * expected);
        assert!((cmp.equivalent_radius - 7.5e-5).abs() < 1e-15);
        assert_eq!(cmp.relative_difference.len(), 241 * 101);
        // The slab bottom bends the profile away from the logarithm.
        assert!(cmp.max_relative_difference > 0.05 && cmp.max_relative_difference < 0.2);
    }

    #[test]
    fn log_model_holds_close_to_heater() {
        let f = solve(&HeatGrid::chip(241, 101).with_heater(Heater::centered(
            3e-3,
            3e-4,
            HeaterDrive::Power(0.5),
        )));
        let cmp = compare_with_log_model(&f, 0, Region::below_heater(0.8e-3, 0.3e-3, 3e-4)).unwrap();
        assert!(cmp.max_relative_difference < 0.1, "{}", cmp.max_relative_difference);
    }

    #[test]
    fn rejects_missing_heater_and_empty_region() {
        let f = solve(&HeatGrid::chip(64, 32).with_heater(Heater::centered(
            3e-3,
            3e-4,
            HeaterDrive::Power(0.1),
        )));
        assert!(compare_with_log_model(&f, 1, Region::below_heater(1e-3, 1e-3, 3e-4)).is_err());
        assert!(compare_with_log_model(&f, 0, Region::below_heater(1e-4, 1e-4, 3e-4)).is_err());
    }
}
