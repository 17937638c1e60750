//! Schatten-norm refinement experiments for multiplication operators
//! composed with powers of `1 + Δ` on a periodic lattice in `ℝ^m`.
//!
//! `Δ` is the 3-point lattice Laplacian, diagonal in the discrete Fourier
//! basis with symbol `Σ_a (4/h²) sin²(π k_a / N)`, so every power of `1 + Δ`
//! is a real symmetric circulant.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::DiracError;
use crate::exec::{map_slice, Strategy};

/// Bounded scalar functions on `ℝ^m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "decay", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DecayFunction {
    Zero,
    One,
    /// `(1 + |x|²)^{−k/2}`
    InversePoly { k: f64 },
    /// `exp(−|x|²/width²)`
    Gaussian { width: f64 },
}

impl DecayFunction {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        match *self {
            DecayFunction::Zero => 0.0,
            DecayFunction::One => 1.0,
            DecayFunction::InversePoly { k } => (1.0 + r2).powf(-k / 2.0),
            DecayFunction::Gaussian { width } => (-r2 / (width * width)).exp(),
        }
    }
}

/// Which operator is measured.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SchattenProbe {
    /// `f (1 + Δ)^{−m/(2p) − ε}` in `𝒮^p`.
    Weighted { p: f64, epsilon: f64 },
    /// `(1 + Δ)^{−s} f (1 + Δ)^{−r−ε}` in `𝒮^{m/(2(s+r))}`.
    Sandwich { s: f64, r: f64, epsilon: f64 },
}

impl SchattenProbe {
    pub fn exponent(&self, m: usize) -> f64 {
        match *self {
            SchattenProbe::Weighted { p, .. } => p,
            SchattenProbe::Sandwich { s, r, .. } => m as f64 / (2.0 * (s + r)),
        }
    }

    pub fn validate(&self, m: usize) -> Result<(), DiracError> {
        let ok = match *self {
            SchattenProbe::Weighted { p, epsilon } => p >= 1.0 && epsilon > 0.0 && p.is_finite(),
            SchattenProbe::Sandwich { s, r, epsilon } => {
                s >= 0.0 && r >= 0.0 && epsilon > 0.0 && s + r > 0.0 && s + r <= m as f64 / 2.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(DiracError::Schatten(format!("{self:?} is outside the admissible range for m = {m}")))
        }
    }
}

/// How the lattice grows from `N` to `2N` points per axis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Refinement {
    /// Spacing kept, box doubled: the Fourier cut-off is fixed while the
    /// spatial window grows.
    #[default]
    FixedSpacing,
    /// Box kept, spacing halved.
    FixedBox,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchattenConfig {
    /// Space dimension (1 or 2).
    pub m: usize,
    /// Points per axis for each refinement level.
    pub levels: Vec<usize>,
    /// Lattice spacing at the first level.
    pub spacing: f64,
    pub f: DecayFunction,
    pub probe: SchattenProbe,
    #[serde(default)]
    pub refinement: Refinement,
    /// Relative change between consecutive levels above which the norm is
    /// flagged as divergent.
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

fn default_threshold() -> f64 {
    0.1
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchattenRow {
    pub points: usize,
    pub p: f64,
    pub norm: f64,
    /// `norm / previous norm`; absent on the first level or when the
    /// previous norm vanishes.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SchattenTable {
    pub rows: Vec<SchattenRow>,
    /// Some ratio differs from 1 by more than the threshold.
    pub divergent: bool,
}

/// `(1 + Δ)^{−α}` on `N^m` sites with spacing `h`, as a dense circulant.
fn resolvent_power(m: usize, points: usize, h: f64, alpha: f64) -> DMatrix<f64> {
    let sym1: Vec<f64> = (0..points)
        .map(|k| 4.0 / (h * h) * (std::f64::consts::PI * k as f64 / points as f64).sin().powi(2))
        .collect();
    let sites = points.pow(m as u32);
    let split = |mut i: usize| {
        let mut v = vec![0; m];
        for a in (0..m).rev() {
            v[a] = i % points;
            i /= points;
        }
        v
    };
    // Kernel c[d] = N^{−m} Σ_k g(k) Π_a cos(2π k_a d_a / N); symmetric in each
    // k_a, so cosines suffice.
    let symbol: Vec<f64> = (0..sites)
        .map(|k| (1.0 + split(k).iter().map(|&ka| sym1[ka]).sum::<f64>()).powf(-alpha))
        .collect();
    let cos_table: Vec<f64> = (0..points)
        .map(|j| (2.0 * std::f64::consts::PI * j as f64 / points as f64).cos())
        .collect();
    let norm = 1.0 / sites as f64;
    let kernel: Vec<f64> = (0..sites)
        .map(|d| {
            let dv = split(d);
            (0..sites)
                .map(|k| {
                    let kv = split(k);
                    symbol[k] * (0..m).map(|a| cos_table[(kv[a] * dv[a]) % points]).product::<f64>()
                })
                .sum::<f64>()
                * norm
        })
        .collect();
    DMatrix::from_fn(sites, sites, |i, j| {
        let (vi, vj) = (split(i), split(j));
        let mut d = 0;
        for a in 0..m {
            d = d * points + (vi[a] + points - vj[a]) % points;
        }
        kernel[d]
    })
}

fn lattice_norm(cfg: &SchattenConfig, points: usize, h: f64) -> f64 {
    let m = cfg.m;
    let sites = points.pow(m as u32);
    let half = points as f64 * h / 2.0;
    let fvals: Vec<f64> = (0..sites)
        .map(|mut i| {
            let mut x = vec![0.0; m];
            for a in (0..m).rev() {
                x[a] = -half + (i % points) as f64 * h;
                i /= points;
            }
            cfg.f.eval(&x)
        })
        .collect();
    if fvals.iter().all(|v| *v == 0.0) {
        return 0.0;
    }
    let scale_rows = |mut a: DMatrix<f64>| {
        for (i, f) in fvals.iter().enumerate() {
            a.row_mut(i).scale_mut(*f);
        }
        a
    };
    let op = match cfg.probe {
        SchattenProbe::Weighted { p, epsilon } => {
            scale_rows(resolvent_power(m, points, h, m as f64 / (2.0 * p) + epsilon))
        }
        SchattenProbe::Sandwich { s, r, epsilon } => {
            let left = resolvent_power(m, points, h, s);
            left * scale_rows(resolvent_power(m, points, h, r + epsilon))
        }
    };
    let p = cfg.probe.exponent(m);
    let sv = op.singular_values();
    sv.iter().map(|x| x.powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Schatten-p norms of the lattice realization at every level, with the
/// ratio of consecutive levels. Levels are independent and run through
/// `strategy`.
pub fn schatten_decay_experiment(cfg: &SchattenConfig, strategy: Strategy) -> Result<SchattenTable, DiracError> {
    if cfg.m == 0 || cfg.m > 2 {
        return Err(DiracError::Schatten(format!("m = {} unsupported; use 1 or 2", cfg.m)));
    }
    cfg.probe.validate(cfg.m)?;
    if cfg.levels.is_empty() || cfg.levels.iter().any(|&n| n < 4 || n % 2 != 0) {
        return Err(DiracError::Schatten("levels must be even point counts >= 4".into()));
    }
    if !(cfg.spacing > 0.0) {
        return Err(DiracError::Schatten("spacing must be positive".into()));
    }
    let sites = cfg.levels.iter().map(|n| n.pow(cfg.m as u32)).max().unwrap_or(0);
    let budget = super::dimension_budget();
    if sites > budget {
        return Err(DiracError::Budget { dim: sites, budget });
    }
    let base = cfg.levels[0] as f64;
    let norms = map_slice(strategy, &cfg.levels, |&points| {
        let h = match cfg.refinement {
            Refinement::FixedSpacing => cfg.spacing,
            Refinement::FixedBox => cfg.spacing * base / points as f64,
        };
        lattice_norm(cfg, points, h)
    });
    let p = cfg.probe.exponent(cfg.m);
    let mut rows = Vec::with_capacity(norms.len());
    for (i, (&points, &norm)) in cfg.levels.iter().zip(&norms).enumerate() {
        let ratio = if i > 0 && norms[i - 1] > 0.0 { Some(norm / norms[i - 1]) } else { None };
        rows.push(SchattenRow { points, p, norm, ratio });
    }
    let divergent = rows.iter().filter_map(|r| r.ratio).any(|q| (q - 1.0).abs() > cfg.threshold);
    Ok(SchattenTable { rows, divergent })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(f: DecayFunction, probe: SchattenProbe, levels: Vec<usize>) -> SchattenConfig {
        SchattenConfig { m: 1, levels, spacing: 0.25, f, probe, refinement: Refinement::FixedSpacing, threshold: 0.1 }
    }

    #[test]
    fn circulant_matches_direct_inverse() {
        let (n, h) = (8, 0.5);
        let c = resolvent_power(1, n, h, 1.0);
        let mut lap = DMatrix::<f64>::identity(n, n);
        for i in 0..n {
            lap[(i, i)] += 2.0 / (h * h);
            lap[(i, (i + 1) % n)] -= 1.0 / (h * h);
            lap[(i, (i + n - 1) % n)] -= 1.0 / (h * h);
        }
        assert!((c * lap - DMatrix::<f64>::identity(n, n)).norm() < 1e-12);
        let c2 = resolvent_power(2, 4, h, 0.5);
        assert!((&c2 * &c2 - resolvent_power(2, 4, h, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_function_gives_zero() {
        let t = schatten_decay_experiment(
            &cfg(DecayFunction::Zero, SchattenProbe::Weighted { p: 2.0, epsilon: 0.1 }, vec![16, 32]),
            Strategy::Sequential,
        )
        .unwrap();
        assert!(t.rows.iter().all(|r| r.norm == 0.0 && r.ratio.is_none()));
        assert!(!t.divergent);
    }

    #[test]
    fn no_decay_diverges() {
        let t = schatten_decay_experiment(
            &cfg(DecayFunction::One, SchattenProbe::Weighted { p: 1.0, epsilon: 0.1 }, vec![32, 64]),
            Strategy::Sequential,
        )
        .unwrap();
        assert!(t.divergent);
        assert!(t.rows[1].ratio.unwrap() > 1.8);
    }

    #[test]
    fn range_checks() {
        assert!(SchattenProbe::Sandwich { s: 0.4, r: 0.2, epsilon: 0.1 }.validate(1).is_err());
        assert!(SchattenProbe::Sandwich { s: 0.2, r: 0.2, epsilon: 0.1 }.validate(1).is_ok());
        assert!(SchattenProbe::Weighted { p: 0.5, epsilon: 0.1 }.validate(1).is_err());
    }
}
