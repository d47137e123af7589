//! Derivative-free minimization over measurement bases.
//!
//! Qubit bases are searched on a `(θ, φ)` Bloch grid and refined with
//! Nelder-Mead. Larger systems parameterize a basis as the columns of
//! `U₀·exp(iH)` with `H` Hermitian and run Nelder-Mead from several Haar
//! starting points `U₀`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::bloch_unitary;
use crate::qmat::QOperator;
use crate::random::{haar_unitary, rng_from_seed, trial_seed};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptConfig {
    pub grid_theta: usize,
    pub grid_phi: usize,
    /// Grid local minima handed to Nelder-Mead.
    pub refine_top: usize,
    /// Random restarts for `d_A > 2` (the identity start is always included).
    pub restarts: usize,
    /// Random restarts for POVM searches (the projective optimum is always included).
    pub povm_restarts: usize,
    pub max_evals: usize,
    pub x_tol: f64,
    pub f_tol: f64,
    pub seed: u64,
    /// Largest `d_A` accepted by the optimizers.
    pub max_d_a: usize,
}

impl Default for OptConfig {
    fn default() -> Self {
        Self {
            grid_theta: 64,
            grid_phi: 128,
            refine_top: 4,
            restarts: 32,
            povm_restarts: 8,
            max_evals: 4000,
            x_tol: 1e-10,
            f_tol: 1e-15,
            seed: 0x5eed_d15c,
            max_d_a: 4,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct OptimizerDiagnostics {
    pub restarts: usize,
    pub grid_resolution: Option<[usize; 2]>,
    pub refinement_iters: usize,
    pub converged: bool,
}

#[derive(Clone, Debug)]
pub struct NmResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Nelder-Mead with standard coefficients.
///
/// Stops when the simplex diameter falls below `x_tol`, the spread of values
/// falls below `f_tol`, or after `max_evals` evaluations. The returned point
/// is never worse than `x0`.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], step: f64, max_evals: usize, x_tol: f64, f_tol: f64) -> NmResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evals = n + 1;
    let mut iterations = 0;
    let mut converged = false;

    while evals < max_evals {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let diameter = simplex[1..]
            .iter()
            .map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diameter < x_tol || (values[n] - values[0]).abs() <= f_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..n).map(|k| simplex[..n].iter().map(|v| v[k]).sum::<f64>() / n as f64).collect();
        let towards = |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (w - c)).collect() };

        let xr = towards(-1.0);
        let fr = f(&xr);
        evals += 1;
        if fr < values[0] {
            let xe = towards(-2.0);
            let fe = f(&xe);
            evals += 1;
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
        } else {
            let (xc, fc) = if fr < values[n] {
                let xc = towards(-0.5);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = towards(0.5);
                let fc = f(&xc);
                (xc, fc)
            };
            evals += 1;
            if fc < values[n].min(fr) {
                simplex[n] = xc;
                values[n] = fc;
            } else {
                // Shrink towards the best vertex.
                for i in 1..=n {
                    let shrunk: Vec<f64> = simplex[i].iter().zip(&simplex[0]).map(|(v, b)| b + 0.5 * (v - b)).collect();
                    values[i] = f(&shrunk);
                    simplex[i] = shrunk;
                }
                evals += n;
            }
        }
    }

    let best = (0..=n).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap_or(0);
    NmResult { x: simplex[best].clone(), value: values[best], iterations, evaluations: evals, converged }
}

/// Nelder-Mead restarted from its own optimum until it stops improving.
pub fn nelder_mead_polished<F>(mut f: F, x0: &[f64], step: f64, cfg: &OptConfig) -> NmResult
where
    F: FnMut(&[f64]) -> f64,
{
    let mut best = nelder_mead(&mut f, x0, step, cfg.max_evals, cfg.x_tol, cfg.f_tol);
    let mut iterations = best.iterations;
    let mut step = step;
    for _ in 0..3 {
        step *= 0.1;
        let next = nelder_mead(&mut f, &best.x, step, cfg.max_evals, cfg.x_tol, cfg.f_tol);
        iterations += next.iterations;
        if next.value < best.value {
            best = NmResult { converged: next.converged, ..next };
        } else {
            break;
        }
    }
    best.iterations = iterations;
    best
}

/// Outcome of a basis search: the optimal unitary's columns are the basis.
#[derive(Clone, Debug)]
pub struct BasisSearch {
    pub unitary: DMatrix<Complex64>,
    pub value: f64,
    pub diagnostics: OptimizerDiagnostics,
}

/// Minimizes `objective(U)` over qubit bases `U(θ, φ)`.
pub fn minimize_qubit_basis<F>(objective: F, cfg: &OptConfig) -> BasisSearch
where
    F: Fn(&DMatrix<Complex64>) -> f64 + Sync,
{
    let (nt, np) = (cfg.grid_theta.max(2), cfg.grid_phi.max(1));
    let dtheta = std::f64::consts::PI / (nt - 1) as f64;
    let dphi = 2.0 * std::f64::consts::PI / np as f64;
    let at = |theta: f64, phi: f64| objective(&bloch_unitary(theta, phi));

    let grid: Vec<Vec<f64>> =
        (0..nt).into_par_iter().map(|i| (0..np).map(|j| at(i as f64 * dtheta, j as f64 * dphi)).collect()).collect();

    let mut minima: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..nt {
        for j in 0..np {
            let v = grid[i][j];
            let mut is_min = true;
            'nb: for di in [-1i64, 0, 1] {
                let ii = i as i64 + di;
                if ii < 0 || ii >= nt as i64 {
                    continue;
                }
                for dj in [-1i64, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let jj = (j as i64 + dj).rem_euclid(np as i64) as usize;
                    if grid[ii as usize][jj] < v {
                        is_min = false;
                        break 'nb;
                    }
                }
            }
            if is_min {
                minima.push((v, i, j));
            }
        }
    }
    minima.sort_by(|a, b| a.0.total_cmp(&b.0));
    minima.truncate(cfg.refine_top.max(1));

    let refined: Vec<NmResult> = minima
        .par_iter()
        .map(|&(_, i, j)| nelder_mead_polished(|x| at(x[0], x[1]), &[i as f64 * dtheta, j as f64 * dphi], dtheta, cfg))
        .collect();

    let best = refined.iter().min_by(|a, b| a.value.total_cmp(&b.value)).expect("at least one grid minimum");
    BasisSearch {
        unitary: bloch_unitary(best.x[0], best.x[1]),
        value: best.value,
        diagnostics: OptimizerDiagnostics {
            restarts: refined.len(),
            grid_resolution: Some([nt, np]),
            refinement_iters: refined.iter().map(|r| r.iterations).sum(),
            converged: best.converged,
        },
    }
}

/// Hermitian matrix from `d²` real parameters: diagonal first, then the real
/// and imaginary parts of each upper off-diagonal entry.
pub fn hermitian_from_params(d: usize, x: &[f64]) -> DMatrix<Complex64> {
    debug_assert_eq!(x.len(), d * d);
    let mut h = DMatrix::zeros(d, d);
    for k in 0..d {
        h[(k, k)] = Complex64::new(x[k], 0.0);
    }
    let mut idx = d;
    for j in 0..d {
        for k in (j + 1)..d {
            let z = Complex64::new(x[idx], x[idx + 1]);
            h[(j, k)] = z;
            h[(k, j)] = z.conj();
            idx += 2;
        }
    }
    h
}

/// `exp(iH)` for Hermitian `H`.
pub fn unitary_exp(h: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = QOperator::from_matrix(h.clone()).eig_hermitian().expect("parameterized generator is Hermitian");
    let v = eig.vectors.matrix();
    let phases = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        eig.values.len(),
        eig.values.iter().map(|&l| Complex64::from_polar(1.0, l)),
    ));
    v * phases * v.adjoint()
}

/// Minimizes `objective(U)` over `d × d` unitaries.
pub fn minimize_unitary_basis<F>(d: usize, objective: F, cfg: &OptConfig) -> BasisSearch
where
    F: Fn(&DMatrix<Complex64>) -> f64 + Sync,
{
    let starts: Vec<DMatrix<Complex64>> = (0..=cfg.restarts)
        .map(|r| {
            if r == 0 {
                DMatrix::identity(d, d)
            } else {
                let mut rng = rng_from_seed(trial_seed(cfg.seed, r as u64));
                haar_unitary(d, &mut rng).into_matrix()
            }
        })
        .collect();

    let results: Vec<(NmResult, usize)> = starts
        .par_iter()
        .enumerate()
        .map(|(r, u0)| {
            let f = |x: &[f64]| objective(&(u0 * unitary_exp(&hermitian_from_params(d, x))));
            (nelder_mead_polished(f, &vec![0.0; d * d], 0.3, cfg), r)
        })
        .collect();

    let (best, r) = results
        .iter()
        .min_by(|a, b| a.0.value.total_cmp(&b.0.value).then(a.1.cmp(&b.1)))
        .expect("at least one restart");
    BasisSearch {
        unitary: &starts[*r] * unitary_exp(&hermitian_from_params(d, &best.x)),
        value: best.value,
        diagnostics: OptimizerDiagnostics {
            restarts: results.len(),
            grid_resolution: None,
            refinement_iters: results.iter().map(|r| r.0.iterations).sum(),
            converged: best.converged,
        },
    }
}

/// Dispatches to the qubit grid search or the unitary search.
pub fn minimize_basis<F>(d: usize, objective: F, cfg: &OptConfig) -> BasisSearch
where
    F: Fn(&DMatrix<Complex64>) -> f64 + Sync,
{
    match d {
        1 => BasisSearch {
            unitary: DMatrix::identity(1, 1),
            value: objective(&DMatrix::identity(1, 1)),
            diagnostics: OptimizerDiagnostics { converged: true, ..Default::default() },
        },
        2 => minimize_qubit_basis(objective, cfg),
        _ => minimize_unitary_basis(d, objective, cfg),
    }
}
