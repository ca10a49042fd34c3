//! Log-barrier Newton method for small convex QCQPs with a linear objective:
//!
//! ```text
//! minimize    c^T x
//! subject to  x^T A_i x + b_i^T x + d_i <= 0,   A_i PSD
//! ```
//!
//! Dimensions here are a couple of dozen at most, so Hessians are dense and
//! factored with a plain Cholesky decomposition.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BarrierError {
    #[error("starting point is not strictly feasible (max constraint value {max_violation:e})")]
    InfeasibleStart { max_violation: f64 },
    #[error("Newton system is not positive definite")]
    Singular,
    #[error("centering did not converge after {steps} Newton steps (decrement {decrement:e})")]
    NoConvergence { steps: usize, decrement: f64, best: Vec<f64> },
}

/// `x^T A x + b^T x + d`. `a` is row-major `n x n` and may be omitted for
/// affine constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    pub a: Option<Vec<f64>>,
    pub b: Vec<f64>,
    pub d: f64,
}

impl Quadratic {
    pub fn affine(b: Vec<f64>, d: f64) -> Self {
        Self { a: None, b, d }
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let n = x.len();
        let mut v = self.d + dot(&self.b, x);
        if let Some(a) = &self.a {
            for i in 0..n {
                let row = &a[i * n..(i + 1) * n];
                v += x[i] * dot(row, x);
            }
        }
        v
    }

    /// Gradient `(A + A^T) x + b`; `A` is assumed symmetric.
    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        let mut g = self.b.clone();
        if let Some(a) = &self.a {
            for i in 0..n {
                g[i] += 2.0 * dot(&a[i * n..(i + 1) * n], x);
            }
        }
        g
    }

    /// Append one coordinate with coefficient `coef` in the linear part.
    fn extended(&self, coef: f64) -> Quadratic {
        let n = self.dim();
        let a = self.a.as_ref().map(|a| {
            let mut out = vec![0.0; (n + 1) * (n + 1)];
            for i in 0..n {
                out[i * (n + 1)..i * (n + 1) + n].copy_from_slice(&a[i * n..(i + 1) * n]);
            }
            out
        });
        let mut b = self.b.clone();
        b.push(coef);
        Quadratic { a, b, d: self.d }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Qcqp {
    pub objective: Vec<f64>,
    pub constraints: Vec<Quadratic>,
}

impl Qcqp {
    pub fn dim(&self) -> usize {
        self.objective.len()
    }

    pub fn max_constraint(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|c| c.value(x))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        dot(&self.objective, x)
    }
}

#[derive(Debug, Clone)]
pub struct BarrierParams {
    /// Smallest starting `mu`; the objective is scaled by `t = 1 / mu`.
    pub mu0: f64,
    /// Multiplicative decrease of `mu` between centering rounds.
    pub mu_factor: f64,
    /// Stop once the duality-gap bound `m mu` falls below this.
    pub gap_tol: f64,
    /// Centering stops when `lambda^2 / 2` falls below this.
    pub newton_tol: f64,
    pub max_newton_steps: usize,
}

impl Default for BarrierParams {
    fn default() -> Self {
        Self {
            mu0: 1.0,
            mu_factor: 0.05,
            gap_tol: 1e-8,
            newton_tol: 1e-10,
            max_newton_steps: 200,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BarrierSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    /// Duality-gap bound `m mu` at termination.
    pub gap: f64,
    pub newton_steps: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// In-place Cholesky solve of `H x = rhs`. Returns `None` if `H` is not PD.
fn cholesky_solve(h: &mut [f64], rhs: &[f64], n: usize) -> Option<Vec<f64>> {
    for j in 0..n {
        let mut s = h[j * n + j];
        for k in 0..j {
            s -= h[j * n + k] * h[j * n + k];
        }
        if !(s > 0.0) || !s.is_finite() {
            return None;
        }
        let d = s.sqrt();
        h[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = h[i * n + j];
            for k in 0..j {
                s -= h[i * n + k] * h[j * n + k];
            }
            h[i * n + j] = s / d;
        }
    }
    let mut y = rhs.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= h[i * n + k] * y[k];
        }
        y[i] /= h[i * n + i];
    }
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            y[i] -= h[k * n + i] * y[k];
        }
        y[i] /= h[i * n + i];
    }
    Some(y)
}

/// Barrier function `t c^T x - sum log(-f_i(x))`; `+inf` outside the domain.
fn barrier_value(p: &Qcqp, x: &[f64], t: f64) -> f64 {
    let mut v = t * p.objective_value(x);
    for c in &p.constraints {
        let f = c.value(x);
        if !(f < 0.0) {
            return f64::INFINITY;
        }
        v -= (-f).ln();
    }
    v
}

/// Gradient and Hessian of `-sum log(-f_i(x))`.
fn log_barrier_derivatives(p: &Qcqp, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = p.dim();
    let mut grad = vec![0.0; n];
    let mut hess = vec![0.0; n * n];
    for c in &p.constraints {
        let inv = -1.0 / c.value(x);
        let g = c.gradient(x);
        for i in 0..n {
            grad[i] += inv * g[i];
            for j in 0..n {
                hess[i * n + j] += inv * inv * g[i] * g[j];
            }
        }
        if let Some(a) = &c.a {
            for (hij, aij) in hess.iter_mut().zip(a) {
                *hij += 2.0 * inv * aij;
            }
        }
    }
    (grad, hess)
}

/// Objective weight for which `x` is closest to centred, measured in the
/// Newton metric, capped at `1 / mu0`.
fn initial_weight(p: &Qcqp, x: &[f64], params: &BarrierParams) -> f64 {
    let cap = 1.0 / params.mu0;
    let n = p.dim();
    let (grad, hess) = log_barrier_derivatives(p, x);
    let Some(hc) = cholesky_solve(&mut hess.clone(), &p.objective, n) else {
        return cap;
    };
    let t = -dot(&grad, &hc) / dot(&p.objective, &hc);
    if t.is_finite() && t > 0.0 {
        t.clamp(cap * 1e-6, cap)
    } else {
        cap
    }
}

/// Minimise the barrier function for fixed `t` by damped Newton steps.
fn center(p: &Qcqp, x: &mut Vec<f64>, t: f64, params: &BarrierParams, steps: &mut usize) -> Result<(), BarrierError> {
    let n = p.dim();
    let mut decrement = f64::INFINITY;
    let mut prev_lambda2 = f64::INFINITY;
    for _ in 0..params.max_newton_steps {
        let (mut grad, mut hess) = log_barrier_derivatives(p, x);
        for (g, c) in grad.iter_mut().zip(&p.objective) {
            *g += t * c;
        }
        let neg_grad: Vec<f64> = grad.iter().map(|g| -g).collect();
        let step = cholesky_solve(&mut hess, &neg_grad, n).ok_or(BarrierError::Singular)?;
        let lambda2 = -dot(&grad, &step);
        decrement = lambda2;
        if lambda2 / 2.0 <= params.newton_tol {
            return Ok(());
        }
        // Pure Newton should at least halve the decrement; if it does not, the
        // gradient is dominated by cancellation error at this t.
        if lambda2 < 0.1 && lambda2 > 0.5 * prev_lambda2 {
            return Ok(());
        }
        prev_lambda2 = lambda2;
        *steps += 1;

        // Inside the quadratic-convergence region the full step is feasible
        // and function values are too flat to compare at large t.
        if lambda2 < 0.1 {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(xi, si)| xi + si).collect();
            if p.constraints.iter().all(|c| c.value(&trial) < 0.0) {
                *x = trial;
                continue;
            }
        }

        // Backtracking line search: stay strictly feasible, then Armijo.
        let phi0 = barrier_value(p, x, t);
        let mut alpha = 1.0;
        let mut moved = false;
        while alpha > 1e-16 {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(xi, si)| xi + alpha * si).collect();
            let phi = barrier_value(p, &trial, t);
            if phi.is_finite() && phi <= phi0 - 0.25 * alpha * lambda2 {
                *x = trial;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if !moved {
            // No representable progress left; the point is as centred as
            // floating point allows.
            return Ok(());
        }
    }
    Err(BarrierError::NoConvergence {
        steps: params.max_newton_steps,
        decrement,
        best: x.clone(),
    })
}

/// Solve from a strictly feasible starting point.
pub fn solve(p: &Qcqp, x0: &[f64], params: &BarrierParams) -> Result<BarrierSolution, BarrierError> {
    let max_violation = p.max_constraint(x0);
    if !(max_violation < 0.0) {
        return Err(BarrierError::InfeasibleStart { max_violation });
    }
    let m = p.constraints.len() as f64;
    let mut x = x0.to_vec();
    let mut mu = 1.0 / initial_weight(p, &x, params);
    let mut steps = 0;
    loop {
        center(p, &mut x, 1.0 / mu, params, &mut steps)?;
        if m * mu <= params.gap_tol {
            break;
        }
        mu *= params.mu_factor;
    }
    Ok(BarrierSolution {
        objective: p.objective_value(&x),
        x,
        gap: m * mu,
        newton_steps: steps,
    })
}

/// Find a strictly feasible point by minimising the maximum constraint value.
///
/// Returns `None` when the feasible set has (numerically) empty interior.
pub fn phase_one(p: &Qcqp, x0: &[f64], params: &BarrierParams) -> Option<Vec<f64>> {
    if p.max_constraint(x0) < 0.0 {
        return Some(x0.to_vec());
    }
    let n = p.dim();
    let s0 = p.max_constraint(x0).max(0.0) + 1.0;
    let mut constraints: Vec<Quadratic> = p.constraints.iter().map(|c| c.extended(-1.0)).collect();
    // s >= -s0 keeps the auxiliary problem bounded.
    let mut floor = vec![0.0; n + 1];
    floor[n] = -1.0;
    constraints.push(Quadratic::affine(floor, -s0));
    let mut objective = vec![0.0; n + 1];
    objective[n] = 1.0;
    let aux = Qcqp { objective, constraints };

    let mut z = x0.to_vec();
    z.push(s0);
    let mut mu = params.mu0;
    let mut steps = 0;
    let m = aux.constraints.len() as f64;
    loop {
        if center(&aux, &mut z, 1.0 / mu, params, &mut steps).is_err() {
            return None;
        }
        let x = &z[..n];
        if p.max_constraint(x) < 0.0 {
            return Some(x.to_vec());
        }
        if m * mu <= params.gap_tol {
            return None;
        }
        mu *= params.mu_factor;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball(n: usize, radius2: f64) -> Quadratic {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 1.0;
        }
        Quadratic {
            a: Some(a),
            b: vec![0.0; n],
            d: -radius2,
        }
    }

    #[test]
    fn linear_objective_over_ball() {
        let c = vec![1.0, -2.0, 0.5];
        let p = Qcqp {
            objective: c.clone(),
            constraints: vec![ball(3, 4.0)],
        };
        let params = BarrierParams {
            gap_tol: 1e-12,
            ..Default::default()
        };
        let sol = solve(&p, &[0.0, 0.0, 0.0], &params).unwrap();
        let nc = dot(&c, &c).sqrt();
        assert!((sol.objective + 2.0 * nc).abs() < 1e-10);
        for i in 0..3 {
            assert!((sol.x[i] + 2.0 * c[i] / nc).abs() < 1e-5);
        }
    }

    #[test]
    fn box_and_ball_intersection() {
        // minimise -x - y  s.t. x^2 + y^2 <= 1, x <= 0.5
        let p = Qcqp {
            objective: vec![-1.0, -1.0],
            constraints: vec![ball(2, 1.0), Quadratic::affine(vec![1.0, 0.0], -0.5)],
        };
        let sol = solve(&p, &[0.0, 0.0], &BarrierParams::default()).unwrap();
        let y = (1.0f64 - 0.25).sqrt();
        assert!((sol.objective + 0.5 + y).abs() < 1e-7);
    }

    #[test]
    fn infeasible_start_is_rejected() {
        let p = Qcqp {
            objective: vec![1.0],
            constraints: vec![ball(1, 1.0)],
        };
        assert!(matches!(
            solve(&p, &[2.0], &BarrierParams::default()),
            Err(BarrierError::InfeasibleStart { .. })
        ));
    }

    #[test]
    fn phase_one_finds_interior_point() {
        // Ball of radius 1 around (3, 0) described as x^2 + y^2 - 6x + 8 <= 0.
        let mut q = ball(2, 0.0);
        q.b = vec![-6.0, 0.0];
        q.d = 8.0;
        let p = Qcqp {
            objective: vec![1.0, 0.0],
            constraints: vec![q, Quadratic::affine(vec![0.0, -1.0], 0.1)],
        };
        let x = phase_one(&p, &[0.0, 0.0], &BarrierParams::default()).unwrap();
        assert!(p.max_constraint(&x) < 0.0);
        let sol = solve(&p, &x, &BarrierParams::default()).unwrap();
        // x >= 3 - sqrt(1 - 0.01)
        assert!((sol.objective - (3.0 - 0.99f64.sqrt())).abs() < 1e-7);
    }

    #[test]
    fn phase_one_reports_empty_interior() {
        // x <= 0 and -x <= 0.
        let p = Qcqp {
            objective: vec![1.0],
            constraints: vec![
                Quadratic::affine(vec![1.0], 0.0),
                Quadratic::affine(vec![-1.0], 0.0),
            ],
        };
        assert!(phase_one(&p, &[0.0], &BarrierParams::default()).is_none());
    }

    #[test]
    fn cholesky_solves_spd_system() {
        let mut h = vec![4.0, 1.0, 1.0, 3.0];
        let x = cholesky_solve(&mut h, &[1.0, 2.0], 2).unwrap();
        assert!((4.0 * x[0] + x[1] - 1.0).abs() < 1e-14);
        assert!((x[0] + 3.0 * x[1] - 2.0).abs() < 1e-14);
        let mut bad = vec![1.0, 2.0, 2.0, 1.0];
        assert!(cholesky_solve(&mut bad, &[1.0, 1.0], 2).is_none());
    }
}
