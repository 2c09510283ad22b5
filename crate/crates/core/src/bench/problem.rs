//! Manufactured problems and their numerically evaluated source terms.

use crate::error::{Error, Result};
use crate::fem::{SpaceTimeField, TensorMesh};
use crate::frac::{riesz_of_samples, FracOrder};
use std::f64::consts::PI;

/// cos(1.5π/2)·cos(1.6π/2), the constant factor shared by both manufactured solutions.
pub fn base_amplitude() -> f64 {
    (1.5 * PI / 2.0).cos() * (1.6 * PI / 2.0).cos()
}

/// u = 4cos(1.5π/2)cos(1.6π/2)·e^{−t}·sin²(2πx)·sin²(2πy).
pub fn exact_solution_1(x: f64, y: f64, t: f64) -> f64 {
    4.0 * base_amplitude() * (-t).exp() * sin2(x) * sin2(y)
}

/// u = 4·10³cos(1.5π/2)cos(1.6π/2)·exp(−((x−t)²+(y−t)²)/0.04)·x²(x−1)²y²(1−y)².
pub fn exact_solution_2(x: f64, y: f64, t: f64) -> f64 {
    4e3 * base_amplitude() * gaussian_bump(x, t) * gaussian_bump(y, t)
}

fn sin2(z: f64) -> f64 {
    let s = (2.0 * PI * z).sin();
    s * s
}

fn gaussian_bump(z: f64, t: f64) -> f64 {
    let d = z - t;
    (-d * d / 0.04).exp() * z * z * (1.0 - z) * (1.0 - z)
}

/// The built-in manufactured problems.
///
/// Each exact solution is a product u = a(t)·p_t(x)·p_t(y) of one 1-D profile in
/// both directions, so its Riesz derivatives reduce to 1-D line computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example {
    /// Smooth separable decay, [`exact_solution_1`].
    Smooth,
    /// Moving Gaussian bump, [`exact_solution_2`].
    MovingGaussian,
    /// u ≡ 0 with g ≡ 0 and f ≡ 0 (the `custom` configuration).
    Homogeneous,
}

impl Example {
    pub fn id(&self) -> &'static str {
        match self {
            Example::Smooth => "1",
            Example::MovingGaussian => "2",
            Example::Homogeneous => "custom",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(Example::Smooth),
            "2" => Ok(Example::MovingGaussian),
            "custom" | "0" => Ok(Example::Homogeneous),
            other => Err(Error::config(format!(
                "unknown example `{other}` (expected 1, 2 or custom)"
            ))),
        }
    }

    pub fn exact(&self, x: f64, y: f64, t: f64) -> f64 {
        match self {
            Example::Smooth => exact_solution_1(x, y, t),
            Example::MovingGaussian => exact_solution_2(x, y, t),
            Example::Homogeneous => 0.0,
        }
    }

    /// ∂u/∂t in closed form.
    pub fn time_derivative(&self, x: f64, y: f64, t: f64) -> f64 {
        match self {
            Example::Smooth => -exact_solution_1(x, y, t),
            Example::MovingGaussian => {
                exact_solution_2(x, y, t) * (2.0 * (x - t) + 2.0 * (y - t)) / 0.04
            }
            Example::Homogeneous => 0.0,
        }
    }

    fn amplitude(&self, t: f64) -> f64 {
        match self {
            Example::Smooth => 4.0 * base_amplitude() * (-t).exp(),
            Example::MovingGaussian => 4e3 * base_amplitude(),
            Example::Homogeneous => 0.0,
        }
    }

    fn profile(&self, z: f64, t: f64) -> f64 {
        match self {
            Example::Smooth => sin2(z),
            Example::MovingGaussian => gaussian_bump(z, t),
            Example::Homogeneous => 0.0,
        }
    }

    fn static_profile(&self) -> bool {
        !matches!(self, Example::MovingGaussian)
    }
}

/// Riesz derivative of one 1-D profile, tabulated on a fine grid.
///
/// Values are Richardson-extrapolated from Grünwald–Letnikov results at steps
/// `step` and `step/2`; `self_convergence` is the relative discrete-L² gap
/// between those two levels.
#[derive(Debug, Clone)]
pub struct RieszProfile {
    step: f64,
    values: Vec<f64>,
    pub self_convergence: f64,
}

impl RieszProfile {
    pub fn new(profile: impl Fn(f64) -> f64, order: f64, cells: usize) -> Result<Self> {
        let coarse_step = 1.0 / cells as f64;
        let fine_step = 0.5 * coarse_step;
        let coarse: Vec<f64> = (0..=cells).map(|i| profile(i as f64 * coarse_step)).collect();
        let fine: Vec<f64> = (0..=2 * cells).map(|i| profile(i as f64 * fine_step)).collect();
        let rc = riesz_of_samples(&coarse, order, coarse_step)?;
        let rf = riesz_of_samples(&fine, order, fine_step)?;
        let mut diff2 = 0.0;
        let mut norm2 = 0.0;
        let values = (0..=cells)
            .map(|i| {
                let f = rf[2 * i];
                diff2 += (f - rc[i]) * (f - rc[i]);
                norm2 += f * f;
                2.0 * f - rc[i]
            })
            .collect();
        let self_convergence = if norm2 > 0.0 { (diff2 / norm2).sqrt() } else { 0.0 };
        Ok(Self {
            step: coarse_step,
            values,
            self_convergence,
        })
    }

    /// Cubic Lagrange interpolation on the tabulation grid.
    pub fn eval(&self, z: f64) -> f64 {
        let n = self.values.len();
        let s = z / self.step;
        let base = (s.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
        let mut acc = 0.0;
        for a in 0..4 {
            let mut w = 1.0;
            for b in 0..4 {
                if a != b {
                    w *= (s - (base + b) as f64) / (a as f64 - b as f64);
                }
            }
            acc += w * self.values[base + a];
        }
        acc
    }
}

/// Largest tolerated gap between the two Grünwald–Letnikov levels.
pub const SOURCE_SELF_CONVERGENCE_TOL: f64 = 1e-2;

/// Smallest accepted auxiliary-grid refinement factor.
pub const MIN_REFINEMENT: usize = 8;

/// f = u_t − ∂^αu/∂|x|^α − ∂^βu/∂|y|^β for a manufactured [`Example`].
///
/// u_t is exact; the Riesz terms come from [`RieszProfile`] tables on auxiliary
/// grids `refinement` times finer than the FE mesh.
#[derive(Debug, Clone)]
pub struct ManufacturedSource {
    example: Example,
    order: FracOrder,
    cells_x: usize,
    cells_y: usize,
    cached: Option<(RieszProfile, RieszProfile)>,
}

impl ManufacturedSource {
    pub fn new(example: Example, order: FracOrder, mesh: &TensorMesh, refinement: usize) -> Result<Self> {
        if refinement < MIN_REFINEMENT {
            return Err(Error::config(format!(
                "source refinement factor {refinement} is below the minimum {MIN_REFINEMENT}"
            )));
        }
        let mut src = Self {
            example,
            order,
            cells_x: refinement * mesh.grid_x().n_cells(),
            cells_y: refinement * mesh.grid_y().n_cells(),
            cached: None,
        };
        if example == Example::Homogeneous {
            return Ok(src);
        }
        let check_times: &[f64] = if example.static_profile() { &[0.0] } else { &[0.0, 0.5, 1.0] };
        for &t in check_times {
            let (px, py) = src.profiles(t)?;
            let worst = px.self_convergence.max(py.self_convergence);
            if worst > SOURCE_SELF_CONVERGENCE_TOL {
                return Err(Error::config(format!(
                    "manufactured source failed self-convergence at t = {t} \
                     (two-level gap {:.2}% > 1%); increase the refinement factor above {refinement}",
                    100.0 * worst
                )));
            }
            if example.static_profile() {
                src.cached = Some((px, py));
            }
        }
        Ok(src)
    }

    pub fn example(&self) -> Example {
        self.example
    }

    fn profiles(&self, t: f64) -> Result<(RieszProfile, RieszProfile)> {
        let ex = self.example;
        let px = RieszProfile::new(|z| ex.profile(z, t), self.order.alpha(), self.cells_x)?;
        let py = RieszProfile::new(|z| ex.profile(z, t), self.order.beta(), self.cells_y)?;
        Ok((px, py))
    }
}

impl SpaceTimeField for ManufacturedSource {
    fn at_time(&self, t: f64) -> Box<dyn Fn(f64, f64) -> f64 + '_> {
        let ex = self.example;
        if ex == Example::Homogeneous {
            return Box::new(|_, _| 0.0);
        }
        let (rx, ry) = match &self.cached {
            Some(p) => p.clone(),
            // Grids were validated at construction; the profile is smooth in t.
            None => self.profiles(t).expect("validated source grids"),
        };
        let amp = ex.amplitude(t);
        Box::new(move |x, y| {
            let riesz = amp * (rx.eval(x) * ex.profile(y, t) + ex.profile(x, t) * ry.eval(y));
            ex.time_derivative(x, y, t) - riesz
        })
    }
}
