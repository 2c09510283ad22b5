//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use podfem::special::gamma;

/// Adaptive Simpson with Richardson correction.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 60)
}

/// Tanh-sinh nodes and weights on [a, b]; robust for integrable endpoint singularities.
pub fn tanh_sinh(a: f64, b: f64, step: f64, n: i32) -> Vec<(f64, f64)> {
    let half = std::f64::consts::FRAC_PI_2;
    let c = 0.5 * (b - a);
    (-n..=n)
        .filter_map(|k| {
            let t = k as f64 * step;
            let u = half * t.sinh();
            let cosh_u = u.cosh();
            // distance of the node from the nearer endpoint, in units of c
            let gap = 1.0 / (u.abs().exp() * cosh_u);
            let w = step * half * t.cosh() / (cosh_u * cosh_u);
            if gap < 1e-300 || w * c == 0.0 {
                return None;
            }
            let x = if u >= 0.0 { b - c * gap } else { a + c * gap };
            Some((x, c * w))
        })
        .collect()
}

pub fn truncated_power(z: f64, nu: f64) -> f64 {
    if z > 0.0 {
        z.powf(nu)
    } else {
        0.0
    }
}

/// Hat function φ_j on a uniform grid with `cells` cells.
pub fn hat(j: usize, cells: usize, x: f64) -> f64 {
    let h = 1.0 / cells as f64;
    (1.0 - (x - j as f64 * h).abs() / h).max(0.0)
}

/// ₀D^μ φ_j written out from the truncated-power form; checked against the
/// RL-integral oracle in the tests before it is used as a building block.
pub fn left_hat_deriv(j: usize, cells: usize, mu: f64, x: f64) -> f64 {
    let h = 1.0 / cells as f64;
    let nu = 1.0 - mu;
    let xj = j as f64 * h;
    (truncated_power(x - xj + h, nu) - 2.0 * truncated_power(x - xj, nu) + truncated_power(x - xj - h, nu))
        / (h * gamma(2.0 - mu))
}

pub fn right_hat_deriv(j: usize, cells: usize, mu: f64, x: f64) -> f64 {
    let h = 1.0 / cells as f64;
    let nu = 1.0 - mu;
    let xj = j as f64 * h;
    (truncated_power(xj + h - x, nu) - 2.0 * truncated_power(xj - x, nu) + truncated_power(xj - h - x, nu))
        / (h * gamma(2.0 - mu))
}

/// Left RL derivative d/dx [Γ(1−μ)^{-1}∫_0^x f(s)(x−s)^{−μ}ds] by adaptive
/// quadrature of the fractional integral (after s = x − v^{1/(1−μ)}, which removes
/// the weak singularity) and a five-point central difference. `kinks` lists
/// points where f is not smooth.
pub fn rl_left_oracle(f: &dyn Fn(f64) -> f64, kinks: &[f64], mu: f64, x: f64) -> f64 {
    let integral = |x: f64| {
        let p = 1.0 / (1.0 - mu);
        let g = |v: f64| f(x - v.powf(p)) * p;
        let vmax = x.powf(1.0 - mu);
        let mut breaks: Vec<f64> = kinks
            .iter()
            .filter(|&&k| k > 0.0 && k < x)
            .map(|&k| (x - k).powf(1.0 - mu))
            .collect();
        breaks.push(0.0);
        breaks.push(vmax);
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.windows(2).map(|w| adaptive_simpson(&g, w[0], w[1], 1e-15)).sum::<f64>() / gamma(1.0 - mu)
    };
    five_point_derivative(&integral, x, 1e-3)
}

/// Right RL derivative −d/dx [Γ(1−μ)^{-1}∫_x^1 f(s)(s−x)^{−μ}ds].
pub fn rl_right_oracle(f: &dyn Fn(f64) -> f64, kinks: &[f64], mu: f64, x: f64) -> f64 {
    let integral = |x: f64| {
        let p = 1.0 / (1.0 - mu);
        let g = |v: f64| f(x + v.powf(p)) * p;
        let vmax = (1.0 - x).powf(1.0 - mu);
        let mut breaks: Vec<f64> = kinks
            .iter()
            .filter(|&&k| k > x && k < 1.0)
            .map(|&k| (k - x).powf(1.0 - mu))
            .collect();
        breaks.push(0.0);
        breaks.push(vmax);
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        breaks.windows(2).map(|w| adaptive_simpson(&g, w[0], w[1], 1e-15)).sum::<f64>() / gamma(1.0 - mu)
    };
    -five_point_derivative(&integral, x, 1e-3)
}

pub fn five_point_derivative(f: &dyn Fn(f64) -> f64, x: f64, d: f64) -> f64 {
    (f(x - 2.0 * d) - 8.0 * f(x - d) + 8.0 * f(x + d) - f(x + 2.0 * d)) / (12.0 * d)
}

/// Exact symmetrized stiffness entry C[(₀D^μφ_i, ₓD₁^μφ_j) + (ₓD₁^μφ_i, ₀D^μφ_j)]:
/// products of truncated powers integrate to Beta functions,
/// ∫(x−a)₊^ν(b−x)₊^ν dx = (b−a)₊^{2ν+1}·B(ν+1, ν+1).
pub fn stiffness_entry_exact(i: usize, j: usize, cells: usize, mu: f64, c: f64) -> f64 {
    let h = 1.0 / cells as f64;
    let nu = 1.0 - mu;
    let beta = gamma(nu + 1.0).powi(2) / gamma(2.0 * nu + 2.0);
    let w = [1.0, -2.0, 1.0];
    let pair = |l: usize, r: usize| {
        let mut s = 0.0;
        for (p, wp) in w.iter().enumerate() {
            for (q, wq) in w.iter().enumerate() {
                let a = (l as f64 + p as f64 - 1.0) * h;
                let b = (r as f64 + q as f64 - 1.0) * h;
                s += wp * wq * truncated_power(b - a, 2.0 * nu + 1.0);
            }
        }
        s * beta / (h * gamma(2.0 - mu)).powi(2)
    };
    c * (pair(i, j) + pair(j, i))
}

/// Values of φ_j, ₀D^μφ_j and ₓD₁^μφ_j for j = 1..n at a list of points.
pub struct HatTable {
    pub value: DMatrix<f64>,
    pub left: DMatrix<f64>,
    pub right: DMatrix<f64>,
}

impl HatTable {
    pub fn new(cells: usize, mu: f64, points: &[f64]) -> Self {
        let n = cells - 1;
        let m = points.len();
        Self {
            value: DMatrix::from_fn(m, n, |k, j| hat(j + 1, cells, points[k])),
            left: DMatrix::from_fn(m, n, |k, j| left_hat_deriv(j + 1, cells, mu, points[k])),
            right: DMatrix::from_fn(m, n, |k, j| right_hat_deriv(j + 1, cells, mu, points[k])),
        }
    }
}

/// Composite tanh-sinh rule with one panel per grid cell.
pub fn cell_rule(cells: usize) -> (Vec<f64>, Vec<f64>) {
    let h = 1.0 / cells as f64;
    let mut xs = Vec::new();
    let mut ws = Vec::new();
    for c in 0..cells {
        for (x, w) in tanh_sinh(c as f64 * h, (c + 1) as f64 * h, 1.0 / 16.0, 80) {
            xs.push(x);
            ws.push(w);
        }
    }
    (xs, ws)
}

/// Brute-force 2-D quadrature of the bilinear form
/// a(u, v) = C_α[(D_x^L u, D_x^R v) + (D_x^R u, D_x^L v)] + C_β[(D_y^L u, D_y^R v) + (D_y^R u, D_y^L v)]
/// for finite-element functions given by coefficient vectors (x index fastest).
pub struct BilinearOracle {
    cells_x: usize,
    cells_y: usize,
    wx: Vec<f64>,
    wy: Vec<f64>,
    tx: HatTable,
    ty: HatTable,
    c_alpha: f64,
    c_beta: f64,
}

impl BilinearOracle {
    pub fn new(cells_x: usize, cells_y: usize, alpha: f64, beta: f64) -> Self {
        let (xs, wx) = cell_rule(cells_x);
        let (ys, wy) = cell_rule(cells_y);
        Self {
            cells_x,
            cells_y,
            tx: HatTable::new(cells_x, alpha / 2.0, &xs),
            ty: HatTable::new(cells_y, beta / 2.0, &ys),
            wx,
            wy,
            c_alpha: 1.0 / (2.0 * (alpha * std::f64::consts::FRAC_PI_2).cos()),
            c_beta: 1.0 / (2.0 * (beta * std::f64::consts::FRAC_PI_2).cos()),
        }
    }

    /// Values of an FE function (and its partial derivatives) on the 2-D node grid.
    fn field(&self, coeffs: &DVector<f64>, dx: &DMatrix<f64>, dy: &DMatrix<f64>) -> DMatrix<f64> {
        let n_x = self.cells_x - 1;
        let n_y = self.cells_y - 1;
        let u = DMatrix::from_column_slice(n_x, n_y, coeffs.as_slice());
        dx * u * dy.transpose()
    }

    pub fn eval(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        let (tx, ty) = (&self.tx, &self.ty);
        let ux_l = self.field(u, &tx.left, &ty.value);
        let ux_r = self.field(u, &tx.right, &ty.value);
        let vx_l = self.field(v, &tx.left, &ty.value);
        let vx_r = self.field(v, &tx.right, &ty.value);
        let uy_l = self.field(u, &tx.value, &ty.left);
        let uy_r = self.field(u, &tx.value, &ty.right);
        let vy_l = self.field(v, &tx.value, &ty.left);
        let vy_r = self.field(v, &tx.value, &ty.right);
        let mut total = 0.0;
        for (k, wxk) in self.wx.iter().enumerate() {
            for (l, wyl) in self.wy.iter().enumerate() {
                let ax = ux_l[(k, l)] * vx_r[(k, l)] + ux_r[(k, l)] * vx_l[(k, l)];
                let ay = uy_l[(k, l)] * vy_r[(k, l)] + uy_r[(k, l)] * vy_l[(k, l)];
                total += wxk * wyl * (self.c_alpha * ax + self.c_beta * ay);
            }
        }
        total
    }

    pub fn dofs(&self) -> usize {
        (self.cells_x - 1) * (self.cells_y - 1)
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let m = self.dofs();
        let e = |i: usize| DVector::from_fn(m, |r, _| if r == i { 1.0 } else { 0.0 });
        let mut a = DMatrix::zeros(m, m);
        for i in 0..m {
            for j in 0..=i {
                let v = self.eval(&e(i), &e(j));
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        a
    }
}

/// Deterministic pseudo-random vector in [−1, 1).
pub fn random_vector(m: usize, seed: u64) -> DVector<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    DVector::from_fn(m, |_, _| rng.random_range(-1.0..1.0))
}
