//! Nelder–Mead maximisation and the multi-start `I_N` search.
//!
//! The simplex stops when the standard deviation of its vertex values,
//! `sqrt(Σᵢ (f(xᵢ) − f̄)² / (n+1))`, falls below `error_tolerance`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cglmp::{CglmpEvaluator, PhaseConfiguration};
use crate::error::{Error, Result};
use crate::qmath::DensityMatrix;
use crate::rng::substream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NelderMeadConfig {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    pub error_tolerance: f64,
    pub max_iterations: usize,
    pub initial_simplex_scale: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            error_tolerance: 1e-4,
            max_iterations: 5000,
            initial_simplex_scale: 0.5,
        }
    }
}

impl NelderMeadConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("reflection", self.reflection),
            ("expansion", self.expansion),
            ("contraction", self.contraction),
            ("shrink", self.shrink),
            ("error_tolerance", self.error_tolerance),
            ("initial_simplex_scale", self.initial_simplex_scale),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if self.expansion <= self.reflection {
            return Err(Error::invalid("expansion must exceed reflection"));
        }
        if self.contraction >= 1.0 || self.shrink >= 1.0 {
            return Err(Error::invalid("contraction and shrink must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Result of a single simplex search.
#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadOutcome {
    pub value: f64,
    pub point: Vec<f64>,
    pub converged: bool,
    pub evaluations: usize,
    pub iterations: usize,
}

fn standard_error(values: &[f64]) -> f64 {
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / m).sqrt()
}

/// Determinant by Gaussian elimination with partial pivoting.
fn determinant(mut rows: Vec<Vec<f64>>) -> f64 {
    let n = rows.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| rows[i][col].abs().total_cmp(&rows[j][col].abs()))
            .unwrap();
        if rows[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            rows.swap(pivot, col);
            det = -det;
        }
        det *= rows[col][col];
        for r in col + 1..n {
            let f = rows[r][col] / rows[col][col];
            let (upper, lower) = rows.split_at_mut(r);
            for (x, p) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= f * p;
            }
        }
    }
    det
}

/// Start point plus one vertex offset by `scale` along each axis.
pub fn initial_simplex(start: &[f64], scale: f64) -> Result<Vec<Vec<f64>>> {
    let mut simplex = vec![start.to_vec()];
    for i in 0..start.len() {
        let mut v = start.to_vec();
        v[i] += scale;
        simplex.push(v);
    }
    let edges: Vec<Vec<f64>> = simplex[1..]
        .iter()
        .map(|v| v.iter().zip(start).map(|(a, b)| a - b).collect())
        .collect();
    let volume = determinant(edges).abs();
    if volume.is_nan() || volume <= 0.0 {
        return Err(Error::invalid("initial simplex is degenerate"));
    }
    Ok(simplex)
}

/// Maximises `objective` from `start`.
///
/// Runs the textbook minimiser on `−objective`. A non-finite objective value
/// aborts the search with [`Error::NonFinite`].
pub fn nelder_mead_maximize<F>(mut objective: F, start: &[f64], config: &NelderMeadConfig) -> Result<NelderMeadOutcome>
where
    F: FnMut(&[f64]) -> f64,
{
    config.validate()?;
    if start.is_empty() {
        return Err(Error::invalid("start point must have at least one coordinate"));
    }
    let n = start.len();
    let mut evaluations = 0;
    let mut eval = |x: &[f64]| -> Result<f64> {
        evaluations += 1;
        let v = objective(x);
        if v.is_finite() {
            Ok(-v)
        } else {
            Err(Error::NonFinite(x.to_vec()))
        }
    };

    let mut simplex = initial_simplex(start, config.initial_simplex_scale)?;
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x)).collect::<Result<_>>()?;

    let mut iterations = 0;
    let mut converged = false;
    loop {
        // Order ascending in −f, i.e. best vertex first.
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        if standard_error(&values) < config.error_tolerance {
            converged = true;
            break;
        }
        if iterations >= config.max_iterations {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> = (0..n)
            .map(|d| simplex[..n].iter().map(|v| v[d]).sum::<f64>() / n as f64)
            .collect();
        let along = |from: &[f64], coeff: f64| -> Vec<f64> {
            centroid.iter().zip(from).map(|(c, x)| c + coeff * (x - c)).collect()
        };

        let worst = simplex[n].clone();
        let reflected: Vec<f64> = centroid
            .iter()
            .zip(&worst)
            .map(|(c, w)| c + config.reflection * (c - w))
            .collect();
        let f_reflected = eval(&reflected)?;

        if f_reflected < values[0] {
            let expanded = along(&reflected, config.expansion);
            let f_expanded = eval(&expanded)?;
            if f_expanded < f_reflected {
                simplex[n] = expanded;
                values[n] = f_expanded;
            } else {
                simplex[n] = reflected;
                values[n] = f_reflected;
            }
            continue;
        }
        if f_reflected < values[n - 1] {
            simplex[n] = reflected;
            values[n] = f_reflected;
            continue;
        }

        let (contracted, threshold) = if f_reflected < values[n] {
            (along(&reflected, config.contraction), f_reflected)
        } else {
            (along(&worst, config.contraction), values[n])
        };
        let f_contracted = eval(&contracted)?;
        if f_contracted < threshold {
            simplex[n] = contracted;
            values[n] = f_contracted;
            continue;
        }

        let best = simplex[0].clone();
        for i in 1..=n {
            let shrunk: Vec<f64> = best
                .iter()
                .zip(&simplex[i])
                .map(|(b, x)| b + config.shrink * (x - b))
                .collect();
            values[i] = eval(&shrunk)?;
            simplex[i] = shrunk;
        }
    }

    Ok(NelderMeadOutcome {
        value: -values[0],
        point: simplex.swap_remove(0),
        converged,
        evaluations,
        iterations,
    })
}

/// Best `I_N` over several Nelder–Mead searches.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationReport {
    pub best_value: f64,
    /// Phases at the best value, reduced into `[0, N)`.
    pub best_phases: PhaseConfiguration,
    /// Whether the search that produced the best value met the stopping rule.
    pub best_converged: bool,
    pub restarts: usize,
    pub evaluations: usize,
    pub converged_restarts: usize,
    /// Restarts abandoned because the objective went non-finite.
    pub failed_restarts: usize,
    /// Best value of each restart in order; NaN for abandoned restarts.
    pub restart_values: Vec<f64>,
    pub seed: u64,
}

/// Multi-start maximisation of `I_N` for a fixed state.
///
/// Restart `r` draws its start uniformly from `[0, N)⁴` on sub-stream `r` of
/// `seed`, so results do not depend on how restarts are scheduled. Ties keep
/// the lowest restart index.
pub fn maximize_cglmp(
    state: &DensityMatrix,
    n: usize,
    restarts: usize,
    seed: u64,
    config: &NelderMeadConfig,
) -> Result<OptimizationReport> {
    let evaluator = CglmpEvaluator::new(state, n)?;
    maximize_with(&evaluator, restarts, seed, config)
}

/// As [`maximize_cglmp`] with a prepared evaluator.
pub fn maximize_with(
    evaluator: &CglmpEvaluator,
    restarts: usize,
    seed: u64,
    config: &NelderMeadConfig,
) -> Result<OptimizationReport> {
    if restarts == 0 {
        return Err(Error::invalid("at least one restart is required"));
    }
    config.validate()?;
    let n = evaluator.dim();
    let period = n as f64;
    let objective = |x: &[f64]| {
        let phases = PhaseConfiguration {
            alpha1: x[0],
            alpha2: x[1],
            beta1: x[2],
            beta2: x[3],
        };
        evaluator.value(&phases)
    };

    let mut best: Option<(f64, [f64; 4], bool)> = None;
    let mut evaluations = 0;
    let mut converged_restarts = 0;
    let mut failed_restarts = 0;
    let mut restart_values = Vec::with_capacity(restarts);
    for r in 0..restarts {
        let mut rng = substream(seed, r as u64);
        let start = [(); 4].map(|_| rng.random_range(0.0..period));
        match nelder_mead_maximize(objective, &start, config) {
            Ok(out) => {
                evaluations += out.evaluations;
                restart_values.push(out.value);
                if out.converged {
                    converged_restarts += 1;
                }
                if best.is_none_or(|(v, _, _)| out.value > v) {
                    let p = [out.point[0], out.point[1], out.point[2], out.point[3]];
                    best = Some((out.value, p, out.converged));
                }
            }
            Err(Error::NonFinite(_)) => {
                failed_restarts += 1;
                restart_values.push(f64::NAN);
            }
            Err(e) => return Err(e),
        }
    }
    let Some((best_value, point, best_converged)) = best else {
        return Err(Error::NonFinite(vec![]));
    };
    let best_phases = PhaseConfiguration::from_array(point)?.canonical(n);
    Ok(OptimizationReport {
        best_value,
        best_phases,
        best_converged,
        restarts,
        evaluations,
        converged_restarts,
        failed_restarts,
        restart_values,
        seed,
    })
}
