//! Relaxed (damped) Newton iteration for small square systems.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A square nonlinear system `F(x) = 0`.
pub trait System<T: Scalar> {
    fn dim(&self) -> usize;

    fn residual(&self, x: &[T], out: &mut [T]);

    /// Row-major `dim × dim` Jacobian. Defaults to central differences with
    /// step `FD_STEP · max(|x_j|, 1)`.
    fn jacobian(&self, x: &[T], out: &mut [T]) {
        central_difference_jacobian(self, x, T::lit(T::FD_STEP), out);
    }
}

pub fn central_difference_jacobian<T: Scalar, S: System<T> + ?Sized>(system: &S, x: &[T], rel_step: T, out: &mut [T]) {
    let n = system.dim();
    let mut probe = x.to_vec();
    let mut plus = vec![T::zero(); n];
    let mut minus = vec![T::zero(); n];
    for j in 0..n {
        let h = rel_step * x[j].abs().max(T::one());
        probe[j] = x[j] + h;
        system.residual(&probe, &mut plus);
        probe[j] = x[j] - h;
        system.residual(&probe, &mut minus);
        probe[j] = x[j];
        for i in 0..n {
            out[i * n + j] = (plus[i] - minus[i]) / (h + h);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions<T> {
    /// Convergence threshold on `‖F‖∞`.
    pub tolerance: T,
    pub max_iterations: usize,
    /// Smallest step fraction tried by the backtracking.
    pub min_step: T,
    /// Extra full steps tried after convergence, each kept only if it
    /// lowers `‖F‖∞`. Not counted as iterations.
    pub polish_steps: usize,
}

impl<T: Scalar> Default for NewtonOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: T::lit(T::NEWTON_TOL),
            max_iterations: 2000,
            min_step: T::lit(1.0 / 64.0),
            polish_steps: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonReport<T> {
    pub x: Vec<T>,
    pub iterations: usize,
    /// Final `‖F‖∞`.
    pub residual: T,
    /// Iterations whose step was shortened below the full Newton step.
    pub relaxations: usize,
}

fn inf_norm<T: Scalar>(v: &[T]) -> T {
    v.iter()
        .fold(T::zero(), |m, &x| if x.abs() > m || x.is_nan() { x.abs() } else { m })
}

fn sq_norm<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|&x| x * x).sum()
}

/// Solves `system(x) = 0` from `x0`.
///
/// Each step is `x ← x − λ J⁻¹F` with λ halved from 1 until `‖F‖₂`
/// decreases; if nothing down to `min_step` helps, the smallest step is
/// taken anyway.
pub fn solve<T: Scalar, S: System<T> + ?Sized>(
    system: &S,
    x0: &[T],
    opts: &NewtonOptions<T>,
) -> Result<NewtonReport<T>> {
    let n = system.dim();
    assert_eq!(x0.len(), n, "initial guess has wrong length");
    let mut x = x0.to_vec();
    let mut f = vec![T::zero(); n];
    let mut jac = vec![T::zero(); n * n];
    let mut trial = vec![T::zero(); n];
    let mut f_trial = vec![T::zero(); n];
    let mut relaxations = 0;

    system.residual(&x, &mut f);
    for iteration in 0..=opts.max_iterations {
        let norm = inf_norm(&f);
        if !norm.is_finite() {
            return Err(Error::NoConvergence {
                iterations: iteration,
                residual: f64::INFINITY,
            });
        }
        if norm < opts.tolerance {
            let mut best = norm;
            for _ in 0..opts.polish_steps {
                system.jacobian(&x, &mut jac);
                let mut step = f.clone();
                if !lu_solve(&mut jac, &mut step, n) {
                    break;
                }
                for i in 0..n {
                    trial[i] = x[i] - step[i];
                }
                system.residual(&trial, &mut f_trial);
                let polished = inf_norm(&f_trial);
                if !(polished < best) {
                    break;
                }
                best = polished;
                std::mem::swap(&mut x, &mut trial);
                std::mem::swap(&mut f, &mut f_trial);
            }
            return Ok(NewtonReport {
                x,
                iterations: iteration,
                residual: best,
                relaxations,
            });
        }
        if iteration == opts.max_iterations {
            return Err(Error::NoConvergence {
                iterations: iteration,
                residual: norm.to_f64_lossy(),
            });
        }

        system.jacobian(&x, &mut jac);
        let mut step = f.clone();
        if !lu_solve(&mut jac, &mut step, n) {
            return Err(Error::SingularJacobian { iteration });
        }

        let current = sq_norm(&f);
        let mut lambda = T::one();
        loop {
            for i in 0..n {
                trial[i] = x[i] - lambda * step[i];
            }
            system.residual(&trial, &mut f_trial);
            let improved = sq_norm(&f_trial) < current;
            if improved || lambda <= opts.min_step {
                break;
            }
            lambda = lambda / T::lit(2.0);
        }
        if lambda < T::one() {
            relaxations += 1;
        }
        std::mem::swap(&mut x, &mut trial);
        std::mem::swap(&mut f, &mut f_trial);
    }
    unreachable!()
}

/// In-place Gaussian elimination with partial pivoting. `a` is row-major
/// `n × n`; the solution overwrites `b`. Returns `false` for a singular matrix.
#[must_use]
pub fn lu_solve<T: Scalar>(a: &mut [T], b: &mut [T], n: usize) -> bool {
    let scale = inf_norm(a);
    if !(scale > T::zero()) || !scale.is_finite() {
        return false;
    }
    let tiny = scale * T::epsilon() * T::from_usize(n.max(1)).unwrap();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().partial_cmp(&a[j * n + col].abs()).unwrap())
            .unwrap();
        if !(a[pivot * n + col].abs() > tiny) {
            return false;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(col * n + k, pivot * n + k);
            }
            b.swap(col, pivot);
        }
        let d = a[col * n + col];
        for row in col + 1..n {
            let factor = a[row * n + col] / d;
            if factor == T::zero() {
                continue;
            }
            for k in col..n {
                a[row * n + k] = a[row * n + k] - factor * a[col * n + k];
            }
            b[row] = b[row] - factor * b[col];
        }
    }
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc = acc - a[row * n + k] * b[k];
        }
        b[row] = acc / a[row * n + row];
    }
    true
}
