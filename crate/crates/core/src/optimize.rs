//! Small unconstrained maximizers: BFGS with finite-difference gradients and
//! Nelder–Mead. Both work on plain `f64` slices.

#[derive(Clone, Debug, PartialEq)]
pub struct Ascent {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn central_gradient(f: &impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|k| {
            let orig = probe[k];
            probe[k] = orig + h;
            let up = f(&probe);
            probe[k] = orig - h;
            let down = f(&probe);
            probe[k] = orig;
            (up - down) / (2.0 * h)
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Quasi-Newton ascent with an inverse-Hessian BFGS update and Armijo backtracking.
pub fn bfgs_maximize(f: impl Fn(&[f64]) -> f64, x0: &[f64], tol: f64, max_iter: usize) -> Ascent {
    let n = x0.len();
    let h = 1e-6;
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut grad = central_gradient(&f, &x, h);
    let identity = || {
        let mut m = vec![vec![0.0; n]; n];
        (0..n).for_each(|k| m[k][k] = 1.0);
        m
    };
    let mut hinv = identity();
    for iter in 0..max_iter {
        let gnorm = grad.iter().map(|g| g.abs()).fold(0.0, f64::max);
        if gnorm < tol {
            return Ascent { x, value: fx, iterations: iter, converged: true };
        }
        let mut dir: Vec<f64> = (0..n).map(|r| dot(&hinv[r], &grad)).collect();
        let mut slope = dot(&grad, &dir);
        if slope <= 0.0 {
            hinv = identity();
            dir = grad.clone();
            slope = dot(&grad, &dir);
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + step * di).collect();
            let ft = f(&trial);
            if ft.is_finite() && ft >= fx + 1e-4 * step * slope {
                accepted = Some((trial, ft));
                break;
            }
            step *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else {
            return Ascent { x, value: fx, iterations: iter, converged: gnorm < tol.sqrt() };
        };
        let grad_new = central_gradient(&f, &x_new, h);
        // Ascent on f is descent on -f; the curvature pair uses -∇f.
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = grad.iter().zip(&grad_new).map(|(a, b)| a - b).collect();
        let improvement = f_new - fx;
        x = x_new;
        fx = f_new;
        grad = grad_new;
        let sy = dot(&s, &y);
        if sy > 1e-14 {
            let hy: Vec<f64> = (0..n).map(|r| dot(&hinv[r], &y)).collect();
            let yhy = dot(&y, &hy);
            let rho = 1.0 / sy;
            for r in 0..n {
                for c in 0..n {
                    hinv[r][c] += (1.0 + yhy * rho) * rho * s[r] * s[c] - rho * (hy[r] * s[c] + s[r] * hy[c]);
                }
            }
        }
        if improvement.abs() < tol * 1e-3 && s.iter().all(|v| v.abs() < tol) {
            return Ascent { x, value: fx, iterations: iter + 1, converged: true };
        }
    }
    Ascent { x, value: fx, iterations: max_iter, converged: false }
}

/// Derivative-free Nelder–Mead ascent from a simplex of edge `scale` around `x0`.
pub fn nelder_mead_maximize(f: impl Fn(&[f64]) -> f64, x0: &[f64], scale: f64, tol: f64, max_iter: usize) -> Ascent {
    let n = x0.len();
    let neg = |x: &[f64]| -f(x);
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for k in 0..n {
        let mut v = x0.to_vec();
        v[k] += scale;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| neg(v)).collect();
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    for iter in 0..max_iter {
        let mut idx: Vec<usize> = (0..=n).collect();
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = idx.iter().map(|&k| simplex[k].clone()).collect();
        values = idx.iter().map(|&k| values[k]).collect();
        let spread = values[n] - values[0];
        let size = simplex[1..]
            .iter()
            .map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread.abs() < tol && size < tol.sqrt() {
            return Ascent { x: simplex[0].clone(), value: -values[0], iterations: iter, converged: true };
        }
        let centroid: Vec<f64> = (0..n).map(|c| simplex[..n].iter().map(|v| v[c]).sum::<f64>() / n as f64).collect();
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (c - w)).collect() };
        let reflected = along(alpha);
        let fr = neg(&reflected);
        if fr < values[0] {
            let expanded = along(gamma);
            let fe = neg(&expanded);
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let contracted = if fr < values[n] { along(rho) } else { along(-rho) };
            let fc = neg(&contracted);
            if fc < values[n].min(fr) {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                for k in 1..=n {
                    let shrunk: Vec<f64> =
                        simplex[0].iter().zip(&simplex[k]).map(|(b, v)| b + sigma * (v - b)).collect();
                    values[k] = neg(&shrunk);
                    simplex[k] = shrunk;
                }
            }
        }
    }
    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    Ascent { x: simplex[best].clone(), value: -values[best], iterations: max_iter, converged: false }
}
