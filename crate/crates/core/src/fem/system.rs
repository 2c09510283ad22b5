use super::{kron_apply, TensorMesh};
use crate::error::{Error, Result};
use crate::frac::{frac_stiffness_1d, mass_1d, FracOrder, FracStiffness1D, Mass1D};
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

/// Largest dof count for which the step operator is densified and Cholesky-factored.
pub const DENSE_LIMIT: usize = 4096;

const CG_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverKind {
    /// Dense Cholesky up to [`DENSE_LIMIT`] dofs, conjugate gradients above.
    #[default]
    Auto,
    DenseCholesky,
    ConjugateGradient,
}

/// Solver for the backward-Euler step operator M + τA.
#[derive(Clone)]
pub enum StepSolver {
    Dense(Cholesky<f64, Dyn>),
    ConjugateGradient { rtol: f64, max_iter: usize },
}

impl std::fmt::Debug for StepSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StepSolver::Dense(c) => write!(f, "Dense({}×{})", c.l_dirty().nrows(), c.l_dirty().ncols()),
            StepSolver::ConjugateGradient { rtol, max_iter } => {
                write!(f, "ConjugateGradient {{ rtol: {rtol}, max_iter: {max_iter} }}")
            }
        }
    }
}

impl StepSolver {
    /// Factorizes (or configures) the solver for `sys`'s step operator.
    pub fn factorize(sys: &FullSystem, kind: SolverKind) -> Result<Self> {
        let dense = match kind {
            SolverKind::Auto => sys.dofs() <= DENSE_LIMIT,
            SolverKind::DenseCholesky => true,
            SolverKind::ConjugateGradient => false,
        };
        if dense {
            let op = sys.step_operator_dense();
            Cholesky::new(op)
                .map(StepSolver::Dense)
                .ok_or_else(|| Error::numeric("M + τA is not positive definite"))
        } else {
            Ok(StepSolver::ConjugateGradient {
                rtol: CG_RTOL,
                max_iter: 20 * sys.dofs() + 100,
            })
        }
    }

    /// Solves (M + τA)x = rhs. `guess` seeds the iterative path.
    pub fn solve(&self, sys: &FullSystem, rhs: &DVector<f64>, guess: Option<&DVector<f64>>) -> Result<DVector<f64>> {
        match self {
            StepSolver::Dense(chol) => Ok(chol.solve(rhs)),
            StepSolver::ConjugateGradient { rtol, max_iter } => {
                conjugate_gradient(|v| sys.apply_step_operator(v), rhs, guess, *rtol, *max_iter)
            }
        }
    }
}

fn conjugate_gradient(
    apply: impl Fn(&DVector<f64>) -> DVector<f64>,
    b: &DVector<f64>,
    guess: Option<&DVector<f64>>,
    rtol: f64,
    max_iter: usize,
) -> Result<DVector<f64>> {
    let bnorm = b.norm();
    if bnorm == 0.0 {
        return Ok(DVector::zeros(b.len()));
    }
    let mut x = guess.cloned().unwrap_or_else(|| DVector::zeros(b.len()));
    let mut r = b - apply(&x);
    let mut p = r.clone();
    let mut rr = r.dot(&r);
    for _ in 0..max_iter {
        if rr.sqrt() <= rtol * bnorm {
            return Ok(x);
        }
        let ap = apply(&p);
        let pap = p.dot(&ap);
        if !(pap > 0.0) {
            return Err(Error::numeric("conjugate gradients met a non-positive curvature direction"));
        }
        let step = rr / pap;
        x.axpy(step, &p, 1.0);
        r.axpy(-step, &ap, 1.0);
        let rr_new = r.dot(&r);
        p = &r + (rr_new / rr) * &p;
        rr = rr_new;
    }
    if rr.sqrt() <= rtol * bnorm {
        Ok(x)
    } else {
        Err(Error::numeric(format!(
            "conjugate gradients stalled at relative residual {:.3e}",
            rr.sqrt() / bnorm
        )))
    }
}

/// Assembled full-order operators and the factorized step operator.
#[derive(Debug, Clone)]
pub struct FullSystem {
    order: FracOrder,
    mesh: TensorMesh,
    stiff_x: FracStiffness1D,
    stiff_y: FracStiffness1D,
    mass_x: Mass1D,
    mass_y: Mass1D,
    sx: DMatrix<f64>,
    sy: DMatrix<f64>,
    mx: DMatrix<f64>,
    my: DMatrix<f64>,
    tau: f64,
    n_steps: usize,
    solver: Option<StepSolver>,
}

pub fn assemble(order: FracOrder, mesh: TensorMesh, tau: f64, n_steps: usize) -> Result<FullSystem> {
    assemble_with(order, mesh, tau, n_steps, SolverKind::Auto)
}

pub fn assemble_with(
    order: FracOrder,
    mesh: TensorMesh,
    tau: f64,
    n_steps: usize,
    kind: SolverKind,
) -> Result<FullSystem> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::param(format!("time step tau = {tau} must be positive")));
    }
    if n_steps == 0 {
        return Err(Error::param("n_steps must be at least 1"));
    }
    let stiff_x = frac_stiffness_1d(order.mu_x(), order.c_alpha(), mesh.grid_x())?;
    // Reuse the x factor when the y direction is identical.
    let stiff_y = if mesh.grid_x() == mesh.grid_y() && order.alpha() == order.beta() {
        stiff_x.clone()
    } else {
        frac_stiffness_1d(order.mu_y(), order.c_beta(), mesh.grid_y())?
    };
    let mass_x = mass_1d(mesh.grid_x());
    let mass_y = mass_1d(mesh.grid_y());
    let mut sys = FullSystem {
        order,
        mesh,
        sx: stiff_x.to_dense(),
        sy: stiff_y.to_dense(),
        mx: mass_x.to_dense(),
        my: mass_y.to_dense(),
        stiff_x,
        stiff_y,
        mass_x,
        mass_y,
        tau,
        n_steps,
        solver: None,
    };
    sys.solver = Some(StepSolver::factorize(&sys, kind)?);
    Ok(sys)
}

impl FullSystem {
    pub fn order(&self) -> &FracOrder {
        &self.order
    }

    pub fn mesh(&self) -> &TensorMesh {
        &self.mesh
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dofs(&self) -> usize {
        self.mesh.dofs()
    }

    pub fn stiffness_x(&self) -> &FracStiffness1D {
        &self.stiff_x
    }

    pub fn stiffness_y(&self) -> &FracStiffness1D {
        &self.stiff_y
    }

    pub fn mass_x(&self) -> &Mass1D {
        &self.mass_x
    }

    pub fn mass_y(&self) -> &Mass1D {
        &self.mass_y
    }

    pub fn solver(&self) -> &StepSolver {
        self.solver.as_ref().expect("solver is built during assembly")
    }

    /// A·u in O(m(n_x + n_y)).
    pub fn apply_stiffness(&self, u: &DVector<f64>) -> DVector<f64> {
        kron_apply(&self.sx, &self.my, u) + kron_apply(&self.mx, &self.sy, u)
    }

    /// M·u.
    pub fn apply_mass(&self, u: &DVector<f64>) -> DVector<f64> {
        kron_apply(&self.mx, &self.my, u)
    }

    /// (M + τA)·u.
    pub fn apply_step_operator(&self, u: &DVector<f64>) -> DVector<f64> {
        self.apply_mass(u) + self.tau * self.apply_stiffness(u)
    }

    /// a(u, v) = uᵀAv.
    pub fn energy_product(&self, u: &DVector<f64>, v: &DVector<f64>) -> f64 {
        u.dot(&self.apply_stiffness(v))
    }

    /// ‖u‖_M = (uᵀMu)^{1/2}, the discrete L² norm of the FE function.
    pub fn mass_norm(&self, u: &DVector<f64>) -> f64 {
        u.dot(&self.apply_mass(u)).max(0.0).sqrt()
    }

    fn dense_kron(&self, f: impl Fn(usize, usize, usize, usize) -> f64) -> DMatrix<f64> {
        let m = self.dofs();
        DMatrix::from_fn(m, m, |row, col| {
            let (p, q) = self.mesh.node_of(row);
            let (r, s) = self.mesh.node_of(col);
            f(p, q, r, s)
        })
    }

    pub fn stiffness_dense(&self) -> DMatrix<f64> {
        self.dense_kron(|p, q, r, s| {
            self.sx[(p, r)] * self.my[(q, s)] + self.mx[(p, r)] * self.sy[(q, s)]
        })
    }

    pub fn mass_dense(&self) -> DMatrix<f64> {
        self.dense_kron(|p, q, r, s| self.mx[(p, r)] * self.my[(q, s)])
    }

    pub fn step_operator_dense(&self) -> DMatrix<f64> {
        let tau = self.tau;
        self.dense_kron(|p, q, r, s| {
            let mass = self.mx[(p, r)] * self.my[(q, s)];
            let stiff = self.sx[(p, r)] * self.my[(q, s)] + self.mx[(p, r)] * self.sy[(q, s)];
            mass + tau * stiff
        })
    }

    /// Solves one step with the cached solver.
    pub fn solve_step(&self, rhs: &DVector<f64>, guess: Option<&DVector<f64>>) -> Result<DVector<f64>> {
        self.solver().solve(self, rhs, guess)
    }
}
