use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::DeviceConfig;
use crate::error::CliResult;
use crate::usage;

pub mod fit;
pub mod simulate;
pub mod thermal;
pub mod tomo;

pub struct Context<'a> {
    pub config: &'a DeviceConfig,
    pub seed: u64,
}

impl Context<'_> {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// `points` evenly spaced values on `[from, to]`.
pub fn linspace(from: f64, to: f64, points: usize, what: &str) -> CliResult<Vec<f64>> {
    if points < 2 {
        return Err(usage(format!("{what}: --points must be at least 2")));
    }
    if !(to > from) {
        return Err(usage(format!("{what}: --to must exceed --from")));
    }
    let step = (to - from) / (points - 1) as f64;
    Ok((0..points).map(|k| if k + 1 == points { to } else { from + step * k as f64 }).collect())
}

/// Heater powers with only `heater` on.
pub fn single_heater(config: &DeviceConfig, heater: usize, power: f64) -> Vec<f64> {
    let mut p = vec![0.0; config.heaters.len()];
    p[heater] = power;
    p
}
