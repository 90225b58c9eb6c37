//! Steady-state heat conduction in a 2D chip cross-section.
//!
//! The cross-section spans `x in [0, width]` laterally and `y in [0, depth]`
//! downwards from the top surface. The bottom edge sits on the thermostat at
//! the base temperature; the top surface is insulating except under the
//! heaters, which impose either their temperature or a uniform heat flux.
//! Each node owns a finite-volume cell (halved on edges), which yields a
//! symmetric positive definite system solved by Jacobi-preconditioned
//! conjugate gradients on the temperature rise above the base.

use std::io::Write;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Condition on the lateral edges of the cross-section.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideBoundary {
    /// Held at the base temperature.
    FixedTemperature,
    /// Insulating.
    ZeroFlux,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HeaterDrive<T> {
    /// Heater surface held at this absolute temperature, K.
    Temperature(T),
    /// Total dissipated power, W, spread uniformly over the strip and the
    /// wire length.
    Power(T),
}

/// A heater strip on the top surface.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Heater<T> {
    /// Lateral extent `[x0, x1]`, m.
    pub span: (T, T),
    pub drive: HeaterDrive<T>,
}

impl<T: Real> Heater<T> {
    pub fn centered(center: T, width: T, drive: HeaterDrive<T>) -> Self {
        Self {
            span: (center - width * T::half(), center + width * T::half()),
            drive,
        }
    }

    pub fn center(&self) -> T {
        (self.span.0 + self.span.1) * T::half()
    }

    pub fn width(&self) -> T {
        self.span.1 - self.span.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeatGrid<T> {
    /// m.
    pub width: T,
    /// m.
    pub depth: T,
    pub nx: usize,
    pub ny: usize,
    /// Thermal conductivity, W m^-1 K^-1.
    pub kappa: T,
    /// Heater length along the waveguides, used to turn power into power per
    /// unit length of the cross-section, m.
    pub wire_length: T,
    /// Thermostat temperature at the bottom edge, K.
    pub base_temperature: T,
    pub sides: SideBoundary,
    pub heaters: Vec<Heater<T>>,
}

impl<T: Real> HeatGrid<T> {
    /// 6 mm x 1 mm glass cross-section with insulating sides and no heaters.
    pub fn chip(nx: usize, ny: usize) -> Self {
        Self {
            width: T::lit(6e-3),
            depth: T::lit(1e-3),
            nx,
            ny,
            kappa: T::lit(0.9),
            wire_length: T::lit(20e-3),
            base_temperature: T::lit(293.15),
            sides: SideBoundary::ZeroFlux,
            heaters: Vec::new(),
        }
    }

    pub fn with_heater(mut self, heater: Heater<T>) -> Self {
        self.heaters.push(heater);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 16 || self.ny < 16 {
            return Err(Error::invalid("nx/ny", "grid needs at least 16 nodes per axis"));
        }
        for (field, v) in [
            ("width", self.width),
            ("depth", self.depth),
            ("kappa", self.kappa),
            ("wire_length", self.wire_length),
        ] {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::invalid(field, "must be finite and > 0"));
            }
        }
        for h in &self.heaters {
            let (a, b) = h.span;
            if !(a >= T::zero() && b <= self.width && a < b) {
                return Err(Error::invalid("heater_span", "must lie inside [0, width]"));
            }
            if let HeaterDrive::Power(p) = h.drive {
                if !(p >= T::zero()) {
                    return Err(Error::invalid("heater_power", "must be non-negative"));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn dx(&self) -> T {
        self.width / T::from_usize_lossy(self.nx - 1)
    }

    #[inline]
    pub fn dy(&self) -> T {
        self.depth / T::from_usize_lossy(self.ny - 1)
    }

    #[inline]
    pub fn x(&self, i: usize) -> T {
        self.dx() * T::from_usize_lossy(i)
    }

    #[inline]
    pub fn y(&self, j: usize) -> T {
        self.dy() * T::from_usize_lossy(j)
    }

    /// Lateral extent of the control cell of top node `i`.
    fn cell_x(&self, i: usize) -> (T, T) {
        let dx = self.dx();
        let x = self.x(i);
        let lo = if i == 0 { x } else { x - dx * T::half() };
        let hi = if i + 1 == self.nx { x } else { x + dx * T::half() };
        (lo, hi)
    }

    fn cell_width(&self, i: usize) -> T {
        let (lo, hi) = self.cell_x(i);
        hi - lo
    }

    fn cell_height(&self, j: usize) -> T {
        if j == 0 || j + 1 == self.ny {
            self.dy() * T::half()
        } else {
            self.dy()
        }
    }

    /// Temperature-driven heater covering top node `i`, if any.
    fn clamped_heater(&self, i: usize) -> Option<T> {
        let x = self.x(i);
        let slack = self.dx() * T::lit(1e-9);
        self.heaters.iter().find_map(|h| match h.drive {
            HeaterDrive::Temperature(t) if x >= h.span.0 - slack && x <= h.span.1 + slack => Some(t),
            _ => None,
        })
    }

    /// Injected power per unit length into top node `i` from flux heaters, W/m.
    fn top_source(&self, i: usize) -> T {
        let (lo, hi) = self.cell_x(i);
        self.heaters
            .iter()
            .filter_map(|h| match h.drive {
                HeaterDrive::Power(p) => {
                    let overlap = (hi.min(h.span.1) - lo.max(h.span.0)).max(T::zero());
                    Some(p / self.wire_length * overlap / h.width())
                }
                HeaterDrive::Temperature(_) => None,
            })
            .sum()
    }
}

/// Kind of every node in the discretisation.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Node<T> {
    Free(usize),
    /// Fixed rise above the base temperature.
    Fixed(T, Sink),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sink {
    Base,
    Heater,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions<T> {
    /// Stop once `||b - A x|| <= tol ||b||`.
    pub tolerance: T,
    pub max_iterations: usize,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: T::lit(T::SOLVER_TOL),
            max_iterations: 200_000,
        }
    }
}

/// Steady-state temperature on the grid nodes.
#[derive(Clone, Debug)]
pub struct TemperatureField<T> {
    pub grid: HeatGrid<T>,
    /// Absolute temperature, row-major with `j = 0` the top surface.
    values: Vec<T>,
    pub iterations: usize,
    pub relative_residual: T,
}

impl<T: Real> TemperatureField<T> {
    #[inline]
    pub fn node(&self, i: usize, j: usize) -> T {
        self.values[j * self.grid.nx + i]
    }

    /// Rise above the base temperature at node `(i, j)`.
    #[inline]
    pub fn rise(&self, i: usize, j: usize) -> T {
        self.node(i, j) - self.grid.base_temperature
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Bilinear interpolation at `(x, y)`, clamped to the domain.
    pub fn at(&self, x: T, y: T) -> T {
        let g = &self.grid;
        let fx = (x / g.dx()).max(T::zero()).min(T::from_usize_lossy(g.nx - 1));
        let fy = (y / g.dy()).max(T::zero()).min(T::from_usize_lossy(g.ny - 1));
        let i = fx.floor().to_usize().unwrap_or(0).min(g.nx - 2);
        let j = fy.floor().to_usize().unwrap_or(0).min(g.ny - 2);
        let tx = fx - T::from_usize_lossy(i);
        let ty = fy - T::from_usize_lossy(j);
        let one = T::one();
        self.node(i, j) * (one - tx) * (one - ty)
            + self.node(i + 1, j) * tx * (one - ty)
            + self.node(i, j + 1) * (one - tx) * ty
            + self.node(i + 1, j + 1) * tx * ty
    }

    /// Power per unit length flowing out of the heaters and into the sinks,
    /// W/m. In steady state both equal the power dissipated in the glass.
    pub fn boundary_flux(&self) -> (T, T) {
        let g = &self.grid;
        let nodes = classify(g);
        let mut heater_out = T::zero();
        let mut sink_in = T::zero();
        for j in 0..g.ny {
            for i in 0..g.nx {
                if let Node::Fixed(_, kind) = nodes[j * g.nx + i] {
                    let mut net = T::zero();
                    for (ni, nj, c) in neighbours(g, i, j) {
                        net += c * (self.rise(i, j) - self.rise(ni, nj));
                    }
                    match kind {
                        Sink::Heater => heater_out += net,
                        Sink::Base => sink_in -= net,
                    }
                }
            }
        }
        // Flux heaters inject directly into free nodes.
        let injected: T = (0..g.nx).map(|i| g.top_source(i)).sum();
        (heater_out + injected, sink_in)
    }

    /// Writes `x,y,T` rows (SI units), header included.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,y,T")?;
        for j in 0..self.grid.ny {
            for i in 0..self.grid.nx {
                writeln!(w, "{},{},{}", self.grid.x(i), self.grid.y(j), self.node(i, j))?;
            }
        }
        Ok(())
    }
}

fn classify<T: Real>(g: &HeatGrid<T>) -> Vec<Node<T>> {
    let mut nodes = Vec::with_capacity(g.nx * g.ny);
    let mut free = 0;
    for j in 0..g.ny {
        for i in 0..g.nx {
            let side = i == 0 || i + 1 == g.nx;
            let node = if j + 1 == g.ny || (side && g.sides == SideBoundary::FixedTemperature) {
                Node::Fixed(T::zero(), Sink::Base)
            } else if let Some(t) = (j == 0).then(|| g.clamped_heater(i)).flatten() {
                Node::Fixed(t - g.base_temperature, Sink::Heater)
            } else {
                free += 1;
                Node::Free(free - 1)
            };
            nodes.push(node);
        }
    }
    nodes
}

/// Neighbours of `(i, j)` with the conductance (W m^-1 K^-1 per metre of
/// wire) of the shared cell face.
fn neighbours<T: Real>(g: &HeatGrid<T>, i: usize, j: usize) -> impl Iterator<Item = (usize, usize, T)> {
    let (dx, dy) = (g.dx(), g.dy());
    let kx = g.kappa * g.cell_height(j) / dx;
    let ky = g.kappa * g.cell_width(i) / dy;
    let left = (i > 0).then(|| (i - 1, j, kx));
    let right = (i + 1 < g.nx).then(|| (i + 1, j, kx));
    let up = (j > 0).then(|| (i, j - 1, ky));
    let down = (j + 1 < g.ny).then(|| (i, j + 1, ky));
    [left, right, up, down].into_iter().flatten()
}

struct System<T> {
    /// Per free unknown: neighbouring free unknowns with conductance.
    links: Vec<Vec<(usize, T)>>,
    diagonal: Vec<T>,
    rhs: Vec<T>,
}

impl<T: Real> System<T> {
    fn apply(&self, x: &[T], out: &mut [T]) {
        for (k, o) in out.iter_mut().enumerate() {
            let mut v = self.diagonal[k] * x[k];
            for &(m, c) in &self.links[k] {
                v -= c * x[m];
            }
            *o = v;
        }
    }
}

fn assemble<T: Real>(g: &HeatGrid<T>, nodes: &[Node<T>]) -> System<T> {
    let n_free = nodes.iter().filter(|n| matches!(n, Node::Free(_))).count();
    let mut links = vec![Vec::with_capacity(4); n_free];
    let mut diagonal = vec![T::zero(); n_free];
    let mut rhs = vec![T::zero(); n_free];
    for j in 0..g.ny {
        for i in 0..g.nx {
            let Node::Free(k) = nodes[j * g.nx + i] else {
                continue;
            };
            if j == 0 {
                rhs[k] += g.top_source(i);
            }
            for (ni, nj, c) in neighbours(g, i, j) {
                diagonal[k] += c;
                match nodes[nj * g.nx + ni] {
                    Node::Free(m) => links[k].push((m, c)),
                    Node::Fixed(rise, _) => rhs[k] += c * rise,
                }
            }
        }
    }
    System { links, diagonal, rhs }
}

/// Solves the static heat equation `div(kappa grad T) = -q` on `grid`.
pub fn solve_heat_fd<T: Real>(grid: &HeatGrid<T>, options: &SolverOptions<T>) -> Result<TemperatureField<T>> {
    grid.validate()?;
    let nodes = classify(grid);
    let system = assemble(grid, &nodes);
    let (rise, iterations, relative_residual) = conjugate_gradient(&system, options)?;
    let values = nodes
        .iter()
        .map(|n| {
            grid.base_temperature
                + match *n {
                    Node::Free(k) => rise[k],
                    Node::Fixed(r, _) => r,
                }
        })
        .collect();
    Ok(TemperatureField {
        grid: grid.clone(),
        values,
        iterations,
        relative_residual,
    })
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

fn conjugate_gradient<T: Real>(sys: &System<T>, opts: &SolverOptions<T>) -> Result<(Vec<T>, usize, T)> {
    let n = sys.rhs.len();
    let mut x = vec![T::zero(); n];
    let b_norm = dot(&sys.rhs, &sys.rhs).sqrt();
    if b_norm == T::zero() {
        return Ok((x, 0, T::zero()));
    }
    let mut r = sys.rhs.clone();
    let mut z: Vec<T> = r.iter().zip(&sys.diagonal).map(|(&ri, &d)| ri / d).collect();
    let mut p = z.clone();
    let mut ap = vec![T::zero(); n];
    let mut rz = dot(&r, &z);
    for it in 1..=opts.max_iterations {
        sys.apply(&p, &mut ap);
        let step = rz / dot(&p, &ap);
        for k in 0..n {
            x[k] += step * p[k];
            r[k] -= step * ap[k];
        }
        if it % 50 == 0 {
            // Refresh the recursive residual to keep round-off from drifting.
            sys.apply(&x, &mut ap);
            for k in 0..n {
                r[k] = sys.rhs[k] - ap[k];
            }
        }
        let res = dot(&r, &r).sqrt() / b_norm;
        if res <= opts.tolerance {
            sys.apply(&x, &mut ap);
            let true_res = sys
                .rhs
                .iter()
                .zip(&ap)
                .map(|(&b, &a)| (b - a) * (b - a))
                .sum::<T>()
                .sqrt()
                / b_norm;
            if true_res <= opts.tolerance * T::lit(10.0) {
                return Ok((x, it, true_res));
            }
        }
        for k in 0..n {
            z[k] = r[k] / sys.diagonal[k];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for k in 0..n {
            p[k] = z[k] + beta * p[k];
        }
    }
    let res = dot(&r, &r).sqrt() / b_norm;
    Err(Error::NonConvergence {
        iterations: opts.max_iterations,
        residual: res.to_f64_lossy(),
    })
}
