//! Limited-memory BFGS with a backtracking line search that treats
//! infeasible trial points (evaluation returns `None`) as too-long steps.

use std::collections::VecDeque;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbfgsOptions {
    pub memory: usize,
    /// Stop when the sup norm of the gradient drops to this value.
    pub gradient_tol: f64,
    pub max_iterations: usize,
    /// Inverse-Hessian scale used before any curvature pair is stored.
    pub initial_scale: f64,
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        Self { memory: 8, gradient_tol: 1e-10, max_iterations: 500, initial_scale: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LbfgsResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub grad: Vec<f64>,
    pub iterations: usize,
    pub gradient_norm: f64,
    pub converged: bool,
    /// The line search found no acceptable step before convergence.
    pub stalled: bool,
}

const ARMIJO: f64 = 1e-4;
const WOLFE_LOW: f64 = 0.9;
const WOLFE_HIGH: f64 = 0.8;
const MAX_BACKTRACK: usize = 60;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sup_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Minimize `eval`, which returns the objective and gradient or `None` for
/// points outside the feasible region. `x0` must be feasible.
pub fn lbfgs<F>(mut eval: F, x0: Vec<f64>, opts: LbfgsOptions) -> Result<LbfgsResult>
where
    F: FnMut(&[f64]) -> Option<(f64, Vec<f64>)>,
{
    let (mut f, mut g) =
        eval(&x0).ok_or_else(|| Error::InvalidInput("optimizer started at an infeasible point".into()))?;
    let mut x = x0;
    let mut pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(opts.memory);
    let mut gamma = opts.initial_scale;
    let mut iterations = 0;
    loop {
        let gnorm = sup_norm(&g);
        if gnorm <= opts.gradient_tol {
            return Ok(LbfgsResult { x, f, grad: g, iterations, gradient_norm: gnorm, converged: true, stalled: false });
        }
        if iterations >= opts.max_iterations {
            return Ok(LbfgsResult { x, f, grad: g, iterations, gradient_norm: gnorm, converged: false, stalled: false });
        }
        iterations += 1;
        let mut d = two_loop(&g, &pairs, gamma);
        let mut gd = dot(&g, &d);
        if !(gd < 0.0) {
            pairs.clear();
            d = g.iter().map(|v| -gamma * v).collect();
            gd = dot(&g, &d);
        }
        let slack = 1e-13 * (1.0 + f.abs());
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACK {
            let xn: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + alpha * b).collect();
            if let Some((fnew, gnew)) = eval(&xn) {
                let gdn = dot(&gnew, &d);
                let armijo = fnew <= f + ARMIJO * alpha * gd;
                let approx_wolfe = fnew <= f + slack && gdn >= WOLFE_LOW * gd && gdn <= -WOLFE_HIGH * gd;
                if armijo || approx_wolfe {
                    accepted = Some((xn, fnew, gnew));
                    break;
                }
            }
            alpha *= 0.5;
        }
        let Some((xn, fnew, gnew)) = accepted else {
            return Ok(LbfgsResult { x, f, grad: g, iterations, gradient_norm: gnorm, converged: false, stalled: true });
        };
        let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gnew.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        let yy = dot(&y, &y);
        if sy > 1e-14 * (dot(&s, &s) * yy).sqrt() && yy > 0.0 {
            if pairs.len() == opts.memory {
                pairs.pop_front();
            }
            gamma = sy / yy;
            pairs.push_back((s, y, 1.0 / sy));
        }
        x = xn;
        f = fnew;
        g = gnew;
    }
}

fn two_loop(g: &[f64], pairs: &VecDeque<(Vec<f64>, Vec<f64>, f64)>, gamma: f64) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(pairs.len());
    for (s, y, rho) in pairs.iter().rev() {
        let a = rho * dot(s, &q);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
        alphas.push(a);
    }
    q.iter_mut().for_each(|v| *v *= gamma);
    for ((s, y, rho), a) in pairs.iter().zip(alphas.into_iter().rev()) {
        let b = rho * dot(y, &q);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

/// Error for a run that ended without meeting the tolerance.
pub(crate) fn non_convergence(r: &LbfgsResult) -> Error {
    Error::NonConvergence { iterations: r.iterations, gradient: r.gradient_norm }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let eval = |x: &[f64]| {
            let (a, b) = (x[0], x[1]);
            let f = (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2);
            let g = vec![-2.0 * (1.0 - a) - 400.0 * a * (b - a * a), 200.0 * (b - a * a)];
            Some((f, g))
        };
        let opts = LbfgsOptions { gradient_tol: 1e-9, max_iterations: 1000, ..Default::default() };
        let r = lbfgs(eval, vec![-1.2, 1.0], opts).unwrap();
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-8 && (r.x[1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn respects_feasible_region() {
        // minimum of (x-2)^2 outside the region x < 1.5 is approached but never crossed
        let eval = |x: &[f64]| (x[0] < 1.5).then(|| ((x[0] - 2.0).powi(2), vec![2.0 * (x[0] - 2.0)]));
        let opts = LbfgsOptions { max_iterations: 50, ..Default::default() };
        let r = lbfgs(eval, vec![0.0], opts).unwrap();
        assert!(r.x[0] < 1.5 && r.x[0] > 1.4);
        assert!(!r.converged);
    }
}
