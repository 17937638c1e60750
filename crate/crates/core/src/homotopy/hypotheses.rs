//! Finite-grid report on the trace-norm continuity that homotopy
//! invariance of the index needs. A finite grid cannot establish
//! continuity; the report says at most that the samples are consistent
//! with it.

use num_complex::Complex64;
use serde::Serialize;

use super::path::{grid_derivative, interpolate};
use super::{HomotopyError, MatPoly, OperatorPath};
use crate::numop::{identity, matrix_power, trace_norm, DenseOp};

/// A step is flagged when its Lipschitz quotient exceeds this multiple of
/// the median quotient.
pub const FLAG_FACTOR: f64 = 10.0;

const QUANTITIES: [&str; 3] = ["R^n", "d(R^n)/dt", "dT/dt*R^n"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModulusReport {
    pub quantity: String,
    /// `‖F(t_{i+1}) − F(t_i)‖₁` for each grid step.
    pub moduli: Vec<f64>,
    pub max_quotient: f64,
    pub median_quotient: f64,
    /// Largest quotient on the midpoint-refined grid over the coarse one
    /// (polynomial paths with nonzero variation only).
    pub refinement_ratio: Option<f64>,
    pub flagged_steps: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HypothesisReport {
    pub n: u32,
    pub grid: Vec<f64>,
    /// `‖(R⁺)^n − (R⁻)^n‖₁` at each grid point.
    pub l1_norms: Vec<f64>,
    pub quantities: Vec<ModulusReport>,
    pub flagged: bool,
    pub verdict: String,
}

/// The three block quantities at one time, each as its two nonzero blocks.
type Blocks = [[DenseOp; 2]; 3];

struct PolyData {
    rpn: MatPoly<Complex64>,
    rmn: MatPoly<Complex64>,
    drpn: MatPoly<Complex64>,
    drmn: MatPoly<Complex64>,
    dt: MatPoly<Complex64>,
    dts: MatPoly<Complex64>,
}

impl PolyData {
    fn new(t: &MatPoly<Complex64>, n: u32) -> Self {
        let ts = t.adjoint();
        let one = MatPoly::identity(t.dim());
        let pow = |p: &MatPoly<Complex64>| (0..n).fold(one.clone(), |acc, _| acc.mul(p));
        let rpn = pow(&one.sub(&ts.mul(t)));
        let rmn = pow(&one.sub(&t.mul(&ts)));
        PolyData { drpn: rpn.derivative(), drmn: rmn.derivative(), dt: t.derivative(), dts: ts.derivative(), rpn, rmn }
    }

    fn at(&self, t: f64) -> Blocks {
        let s = Complex64::new(t, 0.0);
        let (rpn, rmn) = (self.rpn.eval(&s), self.rmn.eval(&s));
        [
            [rpn.clone(), rmn.clone()],
            [self.drpn.eval(&s), self.drmn.eval(&s)],
            [self.dts.eval(&s) * &rmn, self.dt.eval(&s) * &rpn],
        ]
    }
}

/// Quantities at every sample, from grid differences.
fn sampled_blocks(times: &[f64], samples: &[DenseOp], n: u32) -> Vec<Blocks> {
    let h = times[1] - times[0];
    let one = identity(samples[0].nrows());
    let rpn: Vec<DenseOp> = samples.iter().map(|m| matrix_power(&(&one - m.adjoint() * m), n)).collect();
    let rmn: Vec<DenseOp> = samples.iter().map(|m| matrix_power(&(&one - m * m.adjoint()), n)).collect();
    let (drpn, drmn) = (grid_derivative(&rpn, h), grid_derivative(&rmn, h));
    let dt = grid_derivative(samples, h);
    (0..samples.len())
        .map(|i| {
            [
                [rpn[i].clone(), rmn[i].clone()],
                [drpn[i].clone(), drmn[i].clone()],
                [dt[i].adjoint() * &rmn[i], &dt[i] * &rpn[i]],
            ]
        })
        .collect()
}

fn block_gap(a: &[DenseOp; 2], b: &[DenseOp; 2]) -> f64 {
    trace_norm(&(&a[0] - &b[0])) + trace_norm(&(&a[1] - &b[1]))
}

fn quotients(grid: &[f64], vals: &[Blocks], q: usize) -> (Vec<f64>, Vec<f64>) {
    let moduli: Vec<f64> = vals.windows(2).map(|w| block_gap(&w[0][q], &w[1][q])).collect();
    let quots = moduli.iter().zip(grid.windows(2)).map(|(m, g)| m / (g[1] - g[0])).collect();
    (moduli, quots)
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

fn refine(grid: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * grid.len());
    for w in grid.windows(2) {
        out.push(w[0]);
        out.push(0.5 * (w[0] + w[1]));
    }
    out.extend(grid.last());
    out
}

/// Trace-norm moduli of continuity of `R_t^n`, `d(R_t^n)/dt` and
/// `dT_t/dt·R_t^n` (in the block form over `ℋ ⊕ ℋ`) between adjacent grid
/// points, together with `‖(R⁺)^n − (R⁻)^n‖₁` at each point.
pub fn invariance_hypotheses_check(
    path: &OperatorPath,
    n: u32,
    grid: &[f64],
) -> Result<HypothesisReport, HomotopyError> {
    if n == 0 {
        return Err(HomotopyError::ZeroDegree);
    }
    if grid.len() < 3 || grid.windows(2).any(|w| !(w[1] > w[0])) || grid[0] < 0.0 || grid[grid.len() - 1] > 1.0 {
        return Err(HomotopyError::Grid("need at least 3 increasing grid points in [0, 1]".into()));
    }
    let (vals, poly) = match path {
        OperatorPath::Polynomial(p) => {
            let data = PolyData::new(p, n);
            (grid.iter().map(|t| data.at(*t)).collect::<Vec<_>>(), Some(data))
        }
        OperatorPath::Sampled(sp) => {
            let at_samples = sampled_blocks(sp.times(), sp.samples(), n);
            let pick = |q: usize, b: usize, t: f64| {
                let v: Vec<DenseOp> = at_samples.iter().map(|x| x[q][b].clone()).collect();
                interpolate(sp.times(), &v, t)
            };
            let vals = grid
                .iter()
                .map(|t| std::array::from_fn(|q| [pick(q, 0, *t), pick(q, 1, *t)]))
                .collect::<Vec<Blocks>>();
            (vals, None)
        }
    };
    let l1_norms: Vec<f64> = vals.iter().map(|b| trace_norm(&(&b[0][0] - &b[0][1]))).collect();
    let min_step = grid.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);

    let refined = poly.as_ref().map(|d| {
        let g = refine(grid);
        let v: Vec<Blocks> = g.iter().map(|t| d.at(*t)).collect();
        (g, v)
    });

    let mut quantities = Vec::new();
    for (q, name) in QUANTITIES.iter().enumerate() {
        let (moduli, quots) = quotients(grid, &vals, q);
        let scale = vals.iter().map(|b| trace_norm(&b[q][0]) + trace_norm(&b[q][1])).fold(0.0, f64::max);
        let floor = 1e-9 * (1.0 + scale) / min_step;
        let max_quotient = quots.iter().copied().fold(0.0, f64::max);
        let median_quotient = median(&quots);
        let flagged_steps =
            (0..quots.len()).filter(|&i| quots[i] > FLAG_FACTOR * median_quotient + floor).collect();
        let refinement_ratio = refined.as_ref().and_then(|(g, v)| {
            let (_, fine) = quotients(g, v, q);
            let fine_max = fine.iter().copied().fold(0.0, f64::max);
            (max_quotient > floor).then(|| fine_max / max_quotient)
        });
        quantities.push(ModulusReport {
            quantity: name.to_string(),
            moduli,
            max_quotient,
            median_quotient,
            refinement_ratio,
            flagged_steps,
        });
    }

    let flagged = quantities.iter().any(|q| !q.flagged_steps.is_empty());
    let verdict = if flagged {
        let steps: Vec<String> = quantities
            .iter()
            .flat_map(|q| q.flagged_steps.iter().map(move |&i| format!("{} on [{}, {}]", q.quantity, grid[i], grid[i + 1])))
            .collect();
        format!("possible discontinuity: {}", steps.join("; "))
    } else {
        "consistent with trace-norm continuity on this grid".to_string()
    };
    Ok(HypothesisReport { n, grid: grid.to_vec(), l1_norms, quantities, flagged, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::SampledPath;
    use crate::sample::{random_matrix, rng};

    fn grid11() -> Vec<f64> {
        (0..=10).map(|i| i as f64 / 10.0).collect()
    }

    #[test]
    fn constant_path_has_zero_moduli() {
        let m = random_matrix(&mut rng(1), 3, 1.0);
        let rep = invariance_hypotheses_check(&OperatorPath::constant(m), 2, &grid11()).unwrap();
        assert!(rep.quantities.iter().all(|q| q.moduli.iter().all(|x| *x == 0.0)));
        assert!(!rep.flagged);
        assert!(rep.verdict.starts_with("consistent with"));
    }

    #[test]
    fn linear_path_is_lipschitz() {
        let mut r = rng(2);
        let path = OperatorPath::linear(random_matrix(&mut r, 4, 1.0), random_matrix(&mut r, 4, 1.0));
        let rep = invariance_hypotheses_check(&path, 2, &grid11()).unwrap();
        assert!(!rep.flagged, "{}", rep.verdict);
        for q in &rep.quantities {
            let ratio = q.refinement_ratio.unwrap();
            assert!((0.8..=1.25).contains(&ratio), "{}: {ratio}", q.quantity);
        }
    }

    #[test]
    fn jump_is_flagged() {
        let mut r = rng(3);
        let (a, b) = (random_matrix(&mut r, 3, 1.0), random_matrix(&mut r, 3, 1.0));
        let sp = SampledPath::from_fn(41, |t| if t < 0.5 { a.clone() } else { b.clone() }).unwrap();
        let rep = invariance_hypotheses_check(&OperatorPath::Sampled(sp), 1, &grid11()).unwrap();
        assert!(rep.flagged);
        assert!(rep.verdict.contains("[0.4, 0.5]"), "{}", rep.verdict);
    }
}
