//! Online phase: Galerkin projection onto the POD space and the reduced time loop
//!
//! ```text
//! (M_d + τA_d) c^n = τΨᵀF^n + M_d c^{n−1},    M_d = ΨᵀMΨ,  A_d = ΨᵀAΨ = I_d
//! ```

use crate::error::{Error, Result};
use crate::fem::{load_sequence, FullSystem, SpaceTimeField, TensorMesh, Trajectory};
use crate::pod::PODBasis;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

/// Projected operators of the full system on a POD basis.
#[derive(Clone)]
pub struct ReducedSystem {
    basis: PODBasis,
    mass: DMatrix<f64>,
    stiffness: DMatrix<f64>,
    tau: f64,
    n_steps: usize,
    mesh: TensorMesh,
    factor: Option<Cholesky<f64, Dyn>>,
}

impl std::fmt::Debug for ReducedSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ReducedSystem")
            .field("d", &self.d())
            .field("tau", &self.tau)
            .field("n_steps", &self.n_steps)
            .finish()
    }
}

impl ReducedSystem {
    pub fn new(basis: PODBasis, sys: &FullSystem) -> Result<Self> {
        if basis.dofs() != sys.dofs() {
            return Err(Error::param(format!(
                "basis has {} dofs, system has {}",
                basis.dofs(),
                sys.dofs()
            )));
        }
        let d = basis.d();
        let mut mass = DMatrix::zeros(d, d);
        let mut stiffness = DMatrix::zeros(d, d);
        for k in 0..d {
            let col = basis.psi.column(k).into_owned();
            let m_col = basis.psi.transpose() * sys.apply_mass(&col);
            let a_col = basis.psi.transpose() * sys.apply_stiffness(&col);
            mass.set_column(k, &m_col);
            stiffness.set_column(k, &a_col);
        }
        let factor = if d == 0 {
            None
        } else {
            let op = &mass + sys.tau() * &stiffness;
            Some(
                Cholesky::new(op)
                    .ok_or_else(|| Error::numeric("reduced step operator is not positive definite"))?,
            )
        };
        Ok(Self {
            basis,
            mass,
            stiffness,
            tau: sys.tau(),
            n_steps: sys.n_steps(),
            mesh: *sys.mesh(),
            factor,
        })
    }

    pub fn d(&self) -> usize {
        self.basis.d()
    }

    pub fn basis(&self) -> &PODBasis {
        &self.basis
    }

    /// M_d = ΨᵀMΨ.
    pub fn mass(&self) -> &DMatrix<f64> {
        &self.mass
    }

    /// A_d = ΨᵀAΨ, assembled numerically.
    pub fn stiffness(&self) -> &DMatrix<f64> {
        &self.stiffness
    }

    /// max |A_d − I_d|.
    pub fn stiffness_defect(&self) -> f64 {
        let d = self.d();
        (&self.stiffness - DMatrix::<f64>::identity(d, d)).amax()
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// ‖c‖_{M_d}, which equals the L² norm of the lifted state.
    pub fn mass_norm(&self, c: &DVector<f64>) -> f64 {
        c.dot(&(&self.mass * c)).max(0.0).sqrt()
    }
}

/// Reduced coefficient vectors c^0..c^N.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedTrajectory {
    pub tau: f64,
    pub coeffs: Vec<DVector<f64>>,
}

impl ReducedTrajectory {
    pub fn n_steps(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn lift_all(&self, basis: &PODBasis) -> Vec<DVector<f64>> {
        self.coeffs.iter().map(|c| lift(c, basis)).collect()
    }
}

/// c^0 = ΨᵀA u_h^0, the coefficients of the energy projection P^d u_h^0.
pub fn project_initial(u0: &DVector<f64>, basis: &PODBasis, sys: &FullSystem) -> Result<DVector<f64>> {
    if u0.len() != basis.dofs() || u0.len() != sys.dofs() {
        return Err(Error::param("initial vector, basis and system dimensions differ"));
    }
    Ok(basis.psi.transpose() * sys.apply_stiffness(u0))
}

/// u_d = Ψc on the full grid.
pub fn lift(c: &DVector<f64>, basis: &PODBasis) -> DVector<f64> {
    &basis.psi * c
}

pub fn reduced_solve(
    rsys: &ReducedSystem,
    c0: &DVector<f64>,
    f: &dyn SpaceTimeField,
) -> Result<ReducedTrajectory> {
    let loads = load_sequence(f, &rsys.mesh, rsys.tau, rsys.n_steps);
    reduced_solve_with_loads(rsys, c0, &loads)
}

/// Reduced time loop with precomputed full load vectors F^1..F^N; each step
/// projects its load as ΨᵀF^n.
pub fn reduced_solve_with_loads(
    rsys: &ReducedSystem,
    c0: &DVector<f64>,
    loads: &[DVector<f64>],
) -> Result<ReducedTrajectory> {
    let d = rsys.d();
    if c0.len() != d {
        return Err(Error::param(format!("c0 has {} entries, basis has {d}", c0.len())));
    }
    if loads.len() != rsys.n_steps {
        return Err(Error::param(format!(
            "expected {} load vectors, got {}",
            rsys.n_steps,
            loads.len()
        )));
    }
    let mut coeffs = Vec::with_capacity(loads.len() + 1);
    coeffs.push(c0.clone());
    let psi_t = rsys.basis.psi.transpose();
    for load in loads {
        let prev = coeffs.last().expect("non-empty");
        let next = match &rsys.factor {
            None => DVector::zeros(0),
            Some(chol) => {
                let mut rhs = &rsys.mass * prev;
                rhs.axpy(rsys.tau, &(&psi_t * load), 1.0);
                chol.solve(&rhs)
            }
        };
        coeffs.push(next);
    }
    Ok(ReducedTrajectory {
        tau: rsys.tau,
        coeffs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyRow {
    pub n: usize,
    pub t: f64,
    /// ‖u_h^n − Ψc^n‖ in the discrete L² (mass-matrix) norm.
    pub l2: f64,
}

/// FE-vs-ROM discrepancies per step alongside the two ingredients of the
/// a-priori bound M·L(Σ_{j>d}λ_j)^{1/2} + M·τ (the constant M is not known).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyReport {
    pub rows: Vec<DiscrepancyRow>,
    pub max: f64,
    pub bound_pod_term: f64,
    pub bound_tau_term: f64,
}

pub fn discrepancy_report(
    full: &Trajectory,
    red: &ReducedTrajectory,
    basis: &PODBasis,
    sys: &FullSystem,
) -> Result<DiscrepancyReport> {
    if full.states.len() != red.coeffs.len() {
        return Err(Error::param(format!(
            "full trajectory has {} states, reduced has {}",
            full.states.len(),
            red.coeffs.len()
        )));
    }
    let rows: Vec<DiscrepancyRow> = full
        .states
        .iter()
        .zip(&red.coeffs)
        .enumerate()
        .map(|(n, (u, c))| DiscrepancyRow {
            n,
            t: full.time(n),
            l2: sys.mass_norm(&(u - lift(c, basis))),
        })
        .collect();
    let max = rows.iter().map(|r| r.l2).fold(0.0, f64::max);
    Ok(DiscrepancyReport {
        rows,
        max,
        bound_pod_term: basis.snapshot_count as f64 * basis.discarded_tail().max(0.0).sqrt(),
        bound_tau_term: full.tau,
    })
}
