use super::{load_sequence, FullSystem, SpaceTimeField, StepSolver};
use crate::error::{Error, Result};
use nalgebra::DVector;

/// Coefficient vectors u_h^0..u_h^N of a backward-Euler run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub tau: f64,
    pub states: Vec<DVector<f64>>,
}

impl Trajectory {
    /// N, the number of steps taken.
    pub fn n_steps(&self) -> usize {
        self.states.len() - 1
    }

    pub fn time(&self, n: usize) -> f64 {
        n as f64 * self.tau
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.states.len()).map(|n| self.time(n)).collect()
    }

    pub fn dofs(&self) -> usize {
        self.states[0].len()
    }

    pub fn final_state(&self) -> &DVector<f64> {
        self.states.last().expect("a trajectory holds at least u^0")
    }
}

/// Runs (M + τA)u^n = τF^n + Mu^{n−1} for n = 1..N with F^n evaluated at t_n.
pub fn backward_euler_solve(
    sys: &FullSystem,
    u0: &DVector<f64>,
    f: &dyn SpaceTimeField,
) -> Result<Trajectory> {
    let loads = load_sequence(f, sys.mesh(), sys.tau(), sys.n_steps());
    backward_euler_with_loads(sys, u0, &loads)
}

/// Time loop with precomputed loads F^1..F^N and the system's cached factorization.
pub fn backward_euler_with_loads(
    sys: &FullSystem,
    u0: &DVector<f64>,
    loads: &[DVector<f64>],
) -> Result<Trajectory> {
    backward_euler_with_solver(sys, sys.solver(), u0, loads)
}

pub fn backward_euler_with_solver(
    sys: &FullSystem,
    solver: &StepSolver,
    u0: &DVector<f64>,
    loads: &[DVector<f64>],
) -> Result<Trajectory> {
    if u0.len() != sys.dofs() {
        return Err(Error::param(format!(
            "initial vector has {} entries, system has {} dofs",
            u0.len(),
            sys.dofs()
        )));
    }
    if loads.len() != sys.n_steps() {
        return Err(Error::param(format!(
            "expected {} load vectors, got {}",
            sys.n_steps(),
            loads.len()
        )));
    }
    let tau = sys.tau();
    let mut states = Vec::with_capacity(loads.len() + 1);
    states.push(u0.clone());
    for load in loads {
        let prev = states.last().expect("non-empty");
        let mut rhs = sys.apply_mass(prev);
        rhs.axpy(tau, load, 1.0);
        let next = solver.solve(sys, &rhs, Some(prev))?;
        states.push(next);
    }
    Ok(Trajectory { tau, states })
}
