//! Quasi-Newton descent on smooth objectives with finite-difference gradients.

use nalgebra::{DMatrix, DVector};

/// Settings for one local descent.
#[derive(Clone, Copy, Debug)]
pub struct DescentSettings {
    pub max_iters: usize,
    pub grad_tol: f64,
    /// Central-difference step.
    pub fd_step: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Halvings before a line search gives up.
    pub max_halvings: usize,
}

impl Default for DescentSettings {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            grad_tol: 1e-8,
            fd_step: 1e-6,
            armijo: 1e-4,
            max_halvings: 60,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DescentOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub grad_norm: f64,
    pub converged: bool,
}

/// `∂f/∂x_k ≈ (f(x + h e_k) − f(x − h e_k)) / 2h`.
pub fn central_gradient<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], step: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|k| {
            let orig = probe[k];
            probe[k] = orig + step;
            let up = f(&probe);
            probe[k] = orig - step;
            let down = f(&probe);
            probe[k] = orig;
            (up - down) / (2.0 * step)
        })
        .collect()
}

/// BFGS with backtracking (halving) Armijo line search. Stops when the
/// gradient norm drops to `grad_tol`, after `max_iters` iterations, or when no
/// step along either the quasi-Newton or the steepest-descent direction
/// decreases `f`.
pub fn minimize<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    settings: &DescentSettings,
) -> DescentOutcome {
    let n = x0.len();
    let mut x = DVector::from_column_slice(x0);
    let mut value = f(x.as_slice());
    if n == 0 {
        return DescentOutcome {
            x: vec![],
            value,
            iterations: 0,
            grad_norm: 0.0,
            converged: true,
        };
    }
    let grad =
        |x: &DVector<f64>| DVector::from_vec(central_gradient(&f, x.as_slice(), settings.fd_step));
    let mut g = grad(&x);
    let mut inv_hessian = DMatrix::<f64>::identity(n, n);
    let mut fresh_hessian = true;
    let mut iterations = 0;

    while iterations < settings.max_iters && g.norm() > settings.grad_tol {
        let mut direction = -(&inv_hessian * &g);
        let mut slope = g.dot(&direction);
        if slope >= 0.0 {
            inv_hessian.fill_with_identity();
            fresh_hessian = true;
            direction = -g.clone();
            slope = -g.norm_squared();
        }

        match line_search(&f, &x, value, &direction, slope, settings) {
            Some((step, new_value)) => {
                let s = direction * step;
                let new_x = &x + &s;
                let new_g = grad(&new_x);
                let y = &new_g - &g;
                let sy = s.dot(&y);
                if sy > 1e-14 * s.norm() * y.norm() {
                    if fresh_hessian {
                        inv_hessian *= sy / y.norm_squared();
                        fresh_hessian = false;
                    }
                    let rho = 1.0 / sy;
                    let hy = &inv_hessian * &y;
                    let yhy = y.dot(&hy);
                    // H ← H − ρ(Hy sᵀ + s yᵀH) + (ρ² yᵀHy + ρ) s sᵀ
                    inv_hessian -= (&hy * s.transpose() + &s * hy.transpose()) * rho;
                    inv_hessian += (&s * s.transpose()) * (rho * rho * yhy + rho);
                }
                x = new_x;
                g = new_g;
                value = new_value;
                iterations += 1;
            }
            None if !fresh_hessian => {
                inv_hessian.fill_with_identity();
                fresh_hessian = true;
            }
            None => break,
        }
    }

    let grad_norm = g.norm();
    DescentOutcome {
        x: x.as_slice().to_vec(),
        value,
        iterations,
        grad_norm,
        converged: grad_norm <= settings.grad_tol,
    }
}

fn line_search<F: Fn(&[f64]) -> f64>(
    f: &F,
    x: &DVector<f64>,
    value: f64,
    direction: &DVector<f64>,
    slope: f64,
    settings: &DescentSettings,
) -> Option<(f64, f64)> {
    let mut step = 1.0;
    for _ in 0..settings.max_halvings {
        let trial = x + direction * step;
        let trial_value = f(trial.as_slice());
        if trial_value <= value + settings.armijo * step * slope && trial_value < value {
            return Some((step, trial_value));
        }
        step *= 0.5;
    }
    None
}
