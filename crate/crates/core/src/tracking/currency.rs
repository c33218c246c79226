//! (α, β, γ)-currency surfaces.
//!
//! α is the empirical probability that windowed Viterbi decoding recovers
//! the state β steps before the window end, using the most recent γ
//! observations.  Cells with β ≥ γ are undefined and absent.
//!
//! Two anchoring protocols:
//!
//! - [`WindowAnchor::End`]: steady-state measurement.  Each trial samples a
//!   trajectory of γ_max steps; every window ends at the trajectory's final
//!   step, so a cell's target state is the same for every γ.  The
//!   window-start distribution is the model's stationary distribution.
//! - [`WindowAnchor::Start`]: burn-in measurement.  Windows are prefixes of
//!   the trajectory (the first γ observations) and the target is the state
//!   β steps before the prefix end; the window-start distribution is the
//!   model's initial distribution.
//!
//! Each trial draws from its own random stream derived from (seed, trial
//! index) and contributes integer error counts, so the surface is
//! bit-identical regardless of how trials are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tracking::{sample, stationary_distribution, viterbi_window_with_dist, HmmModel};

/// Which end of the trajectory windows cling to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowAnchor {
    End,
    Start,
}

/// One (β, γ) cell of a surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceCell {
    pub beta: usize,
    pub gamma: usize,
    /// Trials whose estimate differed from the true state.
    pub errors: u64,
    pub alpha: f64,
    /// Binomial Monte-Carlo standard error sqrt(α(1−α)/trials).
    pub stderr: f64,
}

/// A full accuracy surface.
#[derive(Debug, Clone, Serialize)]
pub struct CurrencySurface {
    pub beta_max: usize,
    pub gamma_max: usize,
    pub trials: u64,
    pub seed: u64,
    pub anchor: WindowAnchor,
    /// FNV-1a fingerprint of the model (graph, transitions, initial).
    pub model_hash: u64,
    /// Cells in row-major order: β ascending, then γ ascending; only β < γ.
    pub cells: Vec<SurfaceCell>,
}

impl CurrencySurface {
    pub fn cell(&self, beta: usize, gamma: usize) -> Option<&SurfaceCell> {
        self.cells
            .iter()
            .find(|c| c.beta == beta && c.gamma == gamma)
    }

    pub fn alpha(&self, beta: usize, gamma: usize) -> Option<f64> {
        self.cell(beta, gamma).map(|c| c.alpha)
    }

    /// CSV rendering: header `beta,gamma,alpha,stderr`, six decimal places,
    /// one row per defined cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("beta,gamma,alpha,stderr\n");
        for cell in &self.cells {
            out.push_str(&format!(
                "{},{},{:.6},{:.6}\n",
                cell.beta, cell.gamma, cell.alpha, cell.stderr
            ));
        }
        out
    }

    /// JSON sidecar describing how the surface was produced.
    pub fn sidecar_json(&self) -> String {
        let anchor = match self.anchor {
            WindowAnchor::End => "end",
            WindowAnchor::Start => "start",
        };
        let value = serde_json::json!({
            "model_hash": format!("{:016x}", self.model_hash),
            "seed": self.seed,
            "trials": self.trials,
            "anchor": anchor,
            "beta_max": self.beta_max,
            "gamma_max": self.gamma_max,
        });
        let mut text = serde_json::to_string_pretty(&value).expect("sidecar serializes");
        text.push('\n');
        text
    }

    /// Median α over all defined cells (midpoint for even counts).
    pub fn median_alpha(&self) -> Option<f64> {
        if self.cells.is_empty() {
            return None;
        }
        let mut alphas: Vec<f64> = self.cells.iter().map(|c| c.alpha).collect();
        alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mid = alphas.len() / 2;
        Some(if alphas.len() % 2 == 1 {
            alphas[mid]
        } else {
            (alphas[mid - 1] + alphas[mid]) / 2.0
        })
    }
}

/// Measures a currency surface by Monte-Carlo simulation.
pub fn currency_surface(
    model: &HmmModel,
    beta_max: usize,
    gamma_max: usize,
    trials: u64,
    seed: u64,
    anchor: WindowAnchor,
) -> Result<CurrencySurface> {
    if gamma_max == 0 || trials == 0 {
        return Err(Error::InvalidInput(
            "surface needs gamma_max ≥ 1 and trials ≥ 1".into(),
        ));
    }
    let dist = match anchor {
        WindowAnchor::End => stationary_distribution(model)?,
        WindowAnchor::Start => model.initial_distribution().to_vec(),
    };

    let n_beta = beta_max + 1;
    let cell_index = |beta: usize, gamma: usize| beta * gamma_max + (gamma - 1);

    let error_counts: Vec<u64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let trajectory = sample(model, gamma_max, &mut rng);
            let mut errors = vec![0u64; n_beta * gamma_max];
            for gamma in 1..=gamma_max {
                let window = match anchor {
                    WindowAnchor::End => &trajectory.colors[gamma_max - gamma..],
                    WindowAnchor::Start => &trajectory.colors[..gamma],
                };
                let out = viterbi_window_with_dist(model, window, 0, &dist)
                    .expect("sampled windows are always consistent");
                for beta in 0..n_beta.min(gamma) {
                    let estimate = out.path[gamma - 1 - beta];
                    let truth = match anchor {
                        WindowAnchor::End => trajectory.states[gamma_max - 1 - beta],
                        WindowAnchor::Start => trajectory.states[gamma - 1 - beta],
                    };
                    if estimate != truth {
                        errors[cell_index(beta, gamma)] += 1;
                    }
                }
            }
            errors
        })
        .reduce(
            || vec![0u64; n_beta * gamma_max],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    let mut cells = Vec::new();
    for beta in 0..n_beta {
        for gamma in 1..=gamma_max {
            if beta >= gamma {
                continue;
            }
            let errors = error_counts[cell_index(beta, gamma)];
            let alpha = 1.0 - errors as f64 / trials as f64;
            let stderr = (alpha * (1.0 - alpha) / trials as f64).sqrt();
            cells.push(SurfaceCell {
                beta,
                gamma,
                errors,
                alpha,
                stderr,
            });
        }
    }
    Ok(CurrencySurface {
        beta_max,
        gamma_max,
        trials,
        seed,
        anchor,
        model_hash: model.fingerprint(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::tracking::{uniform_model, HmmModel, StartMode};

    #[test]
    fn observable_two_cycle_is_always_right() {
        // The two-cycle is periodic, so feed the decoder the uniform
        // distribution through a hand-built model.
        let g = fixtures::two_cycle();
        let m = HmmModel::new(g, vec![vec![1.0], vec![1.0]], vec![0.5, 0.5]).unwrap();
        let s = currency_surface(&m, 4, 6, 200, 0, WindowAnchor::Start).unwrap();
        for cell in &s.cells {
            assert_eq!(cell.alpha, 1.0, "cell {:?}", (cell.beta, cell.gamma));
            assert_eq!(cell.errors, 0);
        }
    }

    #[test]
    fn g_intersect_alpha_approaches_three_quarters() {
        let g = fixtures::g_intersect();
        let b = g.index_of("b").unwrap();
        let r1 = g.index_of("r1").unwrap();
        let r2 = g.index_of("r2").unwrap();
        let mut init = vec![0.0; 3];
        init[b] = 0.5;
        init[r1] = 0.25;
        init[r2] = 0.25;
        let trans: Vec<Vec<f64>> = (0..3)
            .map(|v| vec![1.0 / g.out_degree(v) as f64; g.out_degree(v)])
            .collect();
        let m = HmmModel::new(g.clone(), trans, init).unwrap();
        let trials = 4000u64;
        let s = currency_surface(&m, 0, 9, trials, 0, WindowAnchor::Start).unwrap();
        // At β=0 and odd-length windows the truth is either b (certain) or
        // one of the reds (coin flip): α = 1/2 + 1/2·1/2 = 3/4.
        let cell = s.cell(0, 9).unwrap();
        let tol = 3.0 * cell.stderr.max((0.75 * 0.25 / trials as f64).sqrt());
        assert!(
            (cell.alpha - 0.75).abs() <= tol,
            "alpha {} vs 3/4 ± {tol}",
            cell.alpha
        );
    }

    #[test]
    fn surfaces_are_deterministic() {
        let g = fixtures::butterfly_base();
        let m = uniform_model(&g, StartMode::Stationary).unwrap();
        let s1 = currency_surface(&m, 3, 8, 64, 1, WindowAnchor::End).unwrap();
        let s2 = currency_surface(&m, 3, 8, 64, 1, WindowAnchor::End).unwrap();
        assert_eq!(s1.to_csv(), s2.to_csv());
    }

    #[test]
    fn csv_shape_and_absent_cells() {
        let g = fixtures::two_cycle();
        let m = HmmModel::new(g, vec![vec![1.0], vec![1.0]], vec![0.5, 0.5]).unwrap();
        let s = currency_surface(&m, 5, 4, 10, 0, WindowAnchor::Start).unwrap();
        let csv = s.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("beta,gamma,alpha,stderr"));
        // Defined cells: β < γ ≤ 4 with β ≤ 5 → γ choices per β: 4+3+2+1.
        assert_eq!(csv.lines().count(), 1 + 10);
        assert!(s.cell(4, 4).is_none());
        assert!(s.cell(2, 2).is_none());
        assert!(s.cell(1, 2).is_some());
        let sidecar = s.sidecar_json();
        assert!(sidecar.contains("\"anchor\": \"start\""));
        assert!(sidecar.contains("\"trials\": 10"));
    }
}
