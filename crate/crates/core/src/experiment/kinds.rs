use std::path::PathBuf;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use super::{CheckRecord, ExperimentConfig, ExperimentError, ExperimentKind, RunOptions, Table};
use crate::cyclic::{cycle_check, gamma};
use crate::dirac::{
    clifford_build, dirac_assemble, scaling_family, schatten_decay_experiment, LatticeSpec, PotentialSpec,
    SchattenConfig,
};
use crate::exec::map_indexed;
use crate::freealg::FreePoly;
use crate::homotopy::{
    bj_plus_jb, index_along_path, invariance_hypotheses_check, jb_formula_check, random_poly_chain,
    transgression_check, OperatorPath, SampledPath, ShiftFamily,
};
use crate::numop::io::read_matrix_csv;
use crate::numop::resolvent::{derivative_suite, resolvent_suite};
use crate::numop::shift::{hind_shift, pairing_check_shift, ShiftOp, WeightRule};
use crate::numop::transform::{inverse_sqrt_check, QuadratureConfig};
use crate::numop::DenseOp;
use crate::sample::{random_hermitian, random_matrix, random_unitary, rng};

pub(super) fn tolerance_keys(kind: ExperimentKind) -> &'static [&'static str] {
    match kind {
        ExperimentKind::VerifySymbolic => &[],
        ExperimentKind::IndexShift => &["index"],
        ExperimentKind::Homotopy => &["index"],
        ExperimentKind::Transgression => &[],
        ExperimentKind::Resolvent => &["resolvent", "inverse-sqrt"],
        ExperimentKind::Derivative => &["richardson"],
        ExperimentKind::DiracSchatten => &[],
        ExperimentKind::Scaling => &["hind"],
    }
}

const A_OMEGA: [&str; 3] = ["y·ω_n = 1 − w^n", "ω_n·y = 1 − v^n", "v·ω_n = ω_n·w"];
const A_CYCLE: &str = "b(γ₂) + B(γ₀) = 0";
const A_INDEX: &str = "H-Ind_n(T) = Tr((1 − T*T)^n − (1 − TT*)^n)";
const A_PAIRING: &str = "H-Ind_n(T) = Tr(π(w^n − v^n))";
const A_BJ: &str = "bJ + Jb = 0";
const A_JB: &str = "(JB)(x) = Σ_i (−1)^{in} ∫ dx^i/dt ⊗ x^{i+1} ⊗ … ⊗ x^{i−1}";
const A_CONST: &str = "H-Ind_n(T_0) = H-Ind_n(T_1)";
const A_TRANS: &str = "π₀(x) − π₁(x) = (bJ)(y)";
const A_OMEGA_FORMS: &str = "Σ_j (R⁻)^j T = Σ_j T (R⁺)^j";
const A_EXPLICIT: &str = "J(γ₂) = −∫(R⁺)^n dT*⊗Ω + ∫(R⁻)^n dΩ⊗T* − ∫Ω d(R⁺)^n⊗T* + ∫Ω dT*⊗(R⁻)^n";
const A_HYP: &str = "t ↦ d(R_t^n)/dt, dT_t/dt·R_t^n continuous in trace norm";
const A_RESOLVENT: [&str; 4] = [
    "P_t − P_s = (s − t) P_t X_s",
    "X_t − X_s = (s − t) X_t X_s",
    "R_t − R_s = (s − t)(R_t X_s + X_t* R_s)",
    "R_t = (1 + (t − s) X_s*)^{−1} R_s (1 + (t − s) X_s)^{−1}",
];
const A_INVSQRT: &str = "(1 + D²)^{−1/2} = (2/π) ∫₀^∞ (1 + u² + D²)^{−1} du";
const A_DERIV: [&str; 3] = ["dX/dt = −X²", "dR/dt = −RX − X*R", "dR^n/dt = −Σ_j R^j (RX + X*R) R^{n−1−j}"];
const A_SCHATTEN: &str = "f (1 + Δ)^{−m/(2p) − ε} ∈ S^p";
const A_SANDWICH: &str = "(1 + Δ)^{−s} f (1 + Δ)^{−r−ε} ∈ S^{m/(2(s+r))}";
const A_CLIFFORD: &str = "e_j e_k + e_k e_j = 2δ_jk";
const A_ADJOINT: &str = "D⁻ = (D⁺)*";
const A_NORMAL: &str = "D₀⁻D₀⁺ = D₀⁺D₀⁻";
const A_SCALING: &str = "H-Ind_n(λ^{−1/2} D) = 0";

fn default_n_max() -> u32 {
    6
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct SymbolicParams {
    #[serde(default = "default_n_max")]
    n_max: u32,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct IndexShiftParams {
    rule: WeightRule,
    n: u32,
    #[serde(default)]
    expected: Option<f64>,
}

fn five() -> usize {
    5
}
fn three() -> usize {
    3
}
fn two() -> usize {
    2
}
fn two_u32() -> u32 {
    2
}
fn eleven() -> usize {
    11
}
fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct HomotopyParams {
    #[serde(default = "five")]
    chain_seeds: usize,
    #[serde(default = "three")]
    chain_degree: usize,
    #[serde(default = "two")]
    dim: usize,
    #[serde(default = "two")]
    path_degree: usize,
    #[serde(default = "two")]
    terms: usize,
    #[serde(default)]
    family: Option<ShiftFamily>,
    #[serde(default = "two_u32")]
    n: u32,
    #[serde(default = "eleven")]
    grid_points: usize,
}

/// `[re, im]` rows.
type MatrixSpec = Vec<Vec<[f64; 2]>>;

fn unit_scale() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(tag = "path", rename_all = "kebab-case", deny_unknown_fields)]
pub(super) enum PathSpec {
    /// `Σ_k C_k t^k`
    Polynomial { coefficients: Vec<MatrixSpec> },
    /// `A + tB` with seeded random `A`, `B`.
    RandomLinear {
        dim: usize,
        #[serde(default = "unit_scale")]
        scale: f64,
    },
    /// `A + tB + t²C` with seeded random coefficients.
    RandomQuadratic {
        dim: usize,
        #[serde(default = "unit_scale")]
        scale: f64,
    },
    /// `tU` for a seeded random unitary `U`.
    ScaledUnitary { dim: usize },
    /// One matrix CSV per uniform time step of `[0, 1]`.
    Sampled { files: Vec<String> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct TransgressionParams {
    path: PathSpec,
    n: u32,
    #[serde(default = "yes")]
    hypotheses: bool,
    #[serde(default = "eleven")]
    grid_points: usize,
}

fn one_f() -> f64 {
    1.0
}
fn zero_f() -> f64 {
    0.0
}
fn two_f() -> f64 {
    2.0
}
fn default_h() -> f64 {
    1e-4
}
fn three_u32() -> u32 {
    3
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct ResolventParams {
    dim: usize,
    instances: usize,
    #[serde(default = "one_f")]
    lambda: f64,
    #[serde(default = "zero_f")]
    t: f64,
    #[serde(default = "one_f")]
    s: f64,
    #[serde(default = "two_f")]
    scale_d: f64,
    #[serde(default = "one_f")]
    scale_a: f64,
    #[serde(default = "yes")]
    quadrature: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct DerivativeParams {
    dim: usize,
    instances: usize,
    #[serde(default = "one_f")]
    lambda: f64,
    #[serde(default = "three_u32")]
    n: u32,
    #[serde(default = "zero_f")]
    t0: f64,
    #[serde(default = "default_h")]
    h: f64,
    #[serde(default = "two_f")]
    scale_d: f64,
    #[serde(default = "one_f")]
    scale_a: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct SchattenParams {
    experiment: SchattenConfig,
    #[serde(default)]
    expect_divergent: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct ScalingParams {
    lattice: LatticeSpec,
    potential: PotentialSpec,
    lambdas: Vec<f64>,
}

pub(super) enum Plan {
    Symbolic(SymbolicParams),
    IndexShift(IndexShiftParams),
    Homotopy(HomotopyParams),
    Transgression(TransgressionParams),
    Resolvent(ResolventParams),
    Derivative(DerivativeParams),
    Schatten(SchattenParams),
    Scaling(ScalingParams),
}

fn parse<T: DeserializeOwned>(cfg: &ExperimentConfig) -> Result<T, ExperimentError> {
    serde_json::from_value(serde_json::Value::Object(cfg.parameters.clone()))
        .map_err(|e| ExperimentError::Config(format!("{} parameters: {e}", cfg.kind.name())))
}

fn require(ok: bool, msg: &str) -> Result<(), ExperimentError> {
    if ok {
        Ok(())
    } else {
        Err(ExperimentError::Config(msg.to_string()))
    }
}

fn module<E: std::fmt::Display>(e: E) -> ExperimentError {
    ExperimentError::Module(e.to_string())
}

impl Plan {
    pub(super) fn parse(cfg: &ExperimentConfig) -> Result<Plan, ExperimentError> {
        Ok(match cfg.kind {
            ExperimentKind::VerifySymbolic => {
                let p: SymbolicParams = parse(cfg)?;
                require((1..=12).contains(&p.n_max), "n_max must lie in 1..=12")?;
                Plan::Symbolic(p)
            }
            ExperimentKind::IndexShift => {
                let p: IndexShiftParams = parse(cfg)?;
                require(p.n >= 1, "n must be at least 1")?;
                p.rule.validate().map_err(|e| ExperimentError::Config(e.to_string()))?;
                Plan::IndexShift(p)
            }
            ExperimentKind::Homotopy => {
                let p: HomotopyParams = parse(cfg)?;
                require(p.chain_degree >= 2 && p.chain_degree <= 4, "chain_degree must lie in 2..=4")?;
                require(p.dim >= 1 && p.dim <= 4, "dim must lie in 1..=4")?;
                require(p.path_degree <= 3, "path_degree must be at most 3")?;
                require(p.n >= 1 && p.grid_points >= 2, "need n >= 1 and grid_points >= 2")?;
                Plan::Homotopy(p)
            }
            ExperimentKind::Transgression => {
                let p: TransgressionParams = parse(cfg)?;
                require(p.n >= 1 && p.n <= 4, "n must lie in 1..=4")?;
                require(p.grid_points >= 3, "grid_points must be at least 3")?;
                match &p.path {
                    PathSpec::RandomLinear { dim, .. }
                    | PathSpec::RandomQuadratic { dim, .. }
                    | PathSpec::ScaledUnitary { dim } => require(*dim >= 1 && *dim <= 32, "dim must lie in 1..=32")?,
                    PathSpec::Polynomial { coefficients } => require(!coefficients.is_empty(), "no coefficients")?,
                    PathSpec::Sampled { files } => require(files.len() >= 5, "need at least 5 sample files")?,
                }
                Plan::Transgression(p)
            }
            ExperimentKind::Resolvent => {
                let p: ResolventParams = parse(cfg)?;
                require(p.dim >= 1 && p.instances >= 1 && p.lambda > 0.0, "need dim, instances >= 1 and lambda > 0")?;
                Plan::Resolvent(p)
            }
            ExperimentKind::Derivative => {
                let p: DerivativeParams = parse(cfg)?;
                require(p.dim >= 1 && p.instances >= 1, "need dim, instances >= 1")?;
                require(p.lambda > 0.0 && p.h > 0.0 && p.n >= 1, "need lambda > 0, h > 0, n >= 1")?;
                Plan::Derivative(p)
            }
            ExperimentKind::DiracSchatten => {
                let p: SchattenParams = parse(cfg)?;
                p.experiment.probe.validate(p.experiment.m).map_err(|e| ExperimentError::Config(e.to_string()))?;
                Plan::Schatten(p)
            }
            ExperimentKind::Scaling => {
                let p: ScalingParams = parse(cfg)?;
                p.lattice.validate().map_err(|e| ExperimentError::Config(e.to_string()))?;
                p.potential.build().map_err(|e| ExperimentError::Config(e.to_string()))?;
                require(!p.lambdas.is_empty() && p.lambdas.iter().all(|l| *l > 0.0), "lambdas must be positive")?;
                Plan::Scaling(p)
            }
        })
    }

    pub(super) fn execute(
        &self,
        cfg: &ExperimentConfig,
        opts: &RunOptions,
    ) -> Result<(Vec<CheckRecord>, Vec<Table>), ExperimentError> {
        match self {
            Plan::Symbolic(p) => symbolic(p.n_max).map(|r| (r, Vec::new())),
            Plan::IndexShift(p) => index_shift(p, cfg.tolerance("index", 1e-8)).map(|r| (r, Vec::new())),
            Plan::Homotopy(p) => homotopy(p, cfg, opts).map(|r| (r, Vec::new())),
            Plan::Transgression(p) => transgression(p, cfg, opts).map(|r| (r, Vec::new())),
            Plan::Resolvent(p) => Ok((resolvent(p, cfg, opts)?, Vec::new())),
            Plan::Derivative(p) => Ok((derivative(p, cfg, opts)?, Vec::new())),
            Plan::Schatten(p) => schatten(p, opts),
            Plan::Scaling(p) => scaling(p, cfg, opts).map(|r| (r, Vec::new())),
        }
    }
}

pub(crate) fn symbolic(n_max: u32) -> Result<Vec<CheckRecord>, ExperimentError> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for ((label, diff), anchor) in FreePoly::omega_identities(n).map_err(module)?.iter().zip(A_OMEGA) {
            let id = format!("omega:{label}:n={n}");
            out.push(CheckRecord::exact(id, anchor, diff.num_terms() as f64));
        }
        let g = gamma(n).map_err(module)?;
        let check = cycle_check(&g.gamma2, &g.gamma0).map_err(module)?;
        out.push(CheckRecord::exact(format!("cycle:n={n}"), A_CYCLE, check.residual.num_terms() as f64));
    }
    Ok(out)
}

fn index_shift(p: &IndexShiftParams, tol: f64) -> Result<Vec<CheckRecord>, ExperimentError> {
    let op = ShiftOp::new(p.rule).map_err(module)?;
    let ix = hind_shift(&op, p.n, tol).map_err(module)?;
    let mut out = Vec::new();
    let id = format!("{}:n={}", p.rule.name(), p.n);
    match p.expected {
        Some(e) => {
            let err = (ix.value - e).abs();
            out.push(CheckRecord::new(id, A_INDEX, ix.value, Some(ix.bound), tol, err <= ix.bound.max(tol)));
        }
        None => out.push(CheckRecord::new(id, A_INDEX, ix.value, Some(ix.bound), tol, ix.bound <= tol)),
    }
    let (res, _) = pairing_check_shift(&op, p.n, tol).map_err(module)?;
    out.push(CheckRecord::new(format!("pairing:n={}", p.n), A_PAIRING, res.value, res.bound, res.tolerance, res.pass));
    Ok(out)
}

fn homotopy(p: &HomotopyParams, cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<CheckRecord>, ExperimentError> {
    let per_seed = map_indexed(opts.strategy, p.chain_seeds, |i| {
        let seed = cfg.seed.wrapping_add(i as u64);
        let c = random_poly_chain(seed, p.chain_degree, p.dim, p.path_degree, p.terms);
        let bj = bj_plus_jb(&c).map_err(module)?;
        let jb = jb_formula_check(&c).map_err(module)?;
        Ok::<_, ExperimentError>([
            CheckRecord::new(format!("bJ+Jb:seed={seed}"), A_BJ, bj.defect, None, 0.0, bj.exact_zero),
            CheckRecord::new(format!("JB:seed={seed}"), A_JB, jb.defect, None, 0.0, jb.exact_zero),
        ])
    });
    let mut out = Vec::new();
    for r in per_seed {
        out.extend(r?);
    }
    if let Some(family) = &p.family {
        let tol = cfg.tolerance("index", 1e-8);
        let grid: Vec<f64> = (0..p.grid_points).map(|i| i as f64 / (p.grid_points - 1) as f64).collect();
        let rep = index_along_path(family, p.n, &grid, tol, opts.strategy).map_err(module)?;
        for s in &rep.slices {
            out.push(CheckRecord::new(format!("index-along-path:t={}", s.t), A_INDEX, s.value, Some(s.bound), tol, true));
        }
        out.push(CheckRecord::new("index-along-path:spread", A_CONST, rep.spread, None, 2.0 * tol, rep.constant));
    }
    Ok(out)
}

fn dense(spec: &MatrixSpec) -> Result<DenseOp, ExperimentError> {
    let rows = spec.len();
    let cols = spec.first().map_or(0, Vec::len);
    require(rows > 0 && rows == cols && spec.iter().all(|r| r.len() == cols), "matrices must be square")?;
    Ok(DMatrix::from_fn(rows, cols, |i, j| Complex64::new(spec[i][j][0], spec[i][j][1])))
}

fn build_path(spec: &PathSpec, seed: u64, base: Option<&PathBuf>) -> Result<OperatorPath, ExperimentError> {
    let mut r = rng(seed);
    Ok(match spec {
        PathSpec::Polynomial { coefficients } => {
            let mats = coefficients.iter().map(dense).collect::<Result<Vec<_>, _>>()?;
            let d = mats[0].nrows();
            require(mats.iter().all(|m| m.nrows() == d), "coefficients must share one shape")?;
            OperatorPath::Polynomial(crate::homotopy::MatPoly::from_coeffs(d, mats))
        }
        PathSpec::RandomLinear { dim, scale } => {
            let a = random_matrix(&mut r, *dim, *scale);
            OperatorPath::linear(a, random_matrix(&mut r, *dim, *scale))
        }
        PathSpec::RandomQuadratic { dim, scale } => {
            let mats = (0..3).map(|_| random_matrix(&mut r, *dim, *scale)).collect();
            OperatorPath::Polynomial(crate::homotopy::MatPoly::from_coeffs(*dim, mats))
        }
        PathSpec::ScaledUnitary { dim } => OperatorPath::linear(DenseOp::zeros(*dim, *dim), random_unitary(&mut r, *dim)),
        PathSpec::Sampled { files } => {
            let mats = files
                .iter()
                .map(|f| {
                    let p = base.map_or_else(|| PathBuf::from(f), |b| b.join(f));
                    read_matrix_csv(&p).map_err(|e| ExperimentError::Config(format!("{}: {e}", p.display())))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let ts = (0..mats.len()).map(|i| i as f64 / (mats.len() - 1) as f64).collect();
            OperatorPath::Sampled(SampledPath::new(ts, mats).map_err(|e| ExperimentError::Config(e.to_string()))?)
        }
    })
}

fn transgression(
    p: &TransgressionParams,
    cfg: &ExperimentConfig,
    opts: &RunOptions,
) -> Result<Vec<CheckRecord>, ExperimentError> {
    let path = build_path(&p.path, cfg.seed, opts.base_dir.as_ref())?;
    let rep = transgression_check(&path, p.n).map_err(module)?;
    let n = p.n;
    let mut out = vec![CheckRecord::new(
        format!("transgression:n={n}"),
        A_TRANS,
        rep.residual,
        rep.quadrature_estimate,
        rep.tolerance,
        match rep.quadrature_estimate {
            Some(e) => rep.residual <= e + rep.tolerance,
            None => rep.residual <= rep.tolerance,
        },
    )];
    out.push(CheckRecord::below(format!("omega-forms:n={n}"), A_OMEGA_FORMS, rep.omega_forms_defect, rep.tolerance));
    if let Some(e) = rep.explicit_defect {
        out.push(CheckRecord::below(format!("explicit-J:n={n}"), A_EXPLICIT, e, rep.tolerance));
    }
    if p.hypotheses {
        let grid: Vec<f64> = (0..p.grid_points).map(|i| i as f64 / (p.grid_points - 1) as f64).collect();
        let h = invariance_hypotheses_check(&path, n, &grid).map_err(module)?;
        for q in &h.quantities {
            let ratio = if q.median_quotient > 0.0 { q.max_quotient / q.median_quotient } else { 0.0 };
            out.push(CheckRecord::new(
                format!("continuity:{}:n={n}", q.quantity),
                A_HYP,
                ratio,
                q.refinement_ratio,
                crate::homotopy::FLAG_FACTOR,
                q.flagged_steps.is_empty(),
            ));
        }
    }
    Ok(out)
}

fn resolvent(p: &ResolventParams, cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<CheckRecord>, ExperimentError> {
    let tol = cfg.tolerance("resolvent", 1e-10);
    let qtol = cfg.tolerance("inverse-sqrt", 1e-6);
    let per = map_indexed(opts.strategy, p.instances, |i| {
        let seed = cfg.seed.wrapping_add(i as u64);
        let mut r = rng(seed);
        let d = random_hermitian(&mut r, p.dim, p.scale_d);
        let a = random_hermitian(&mut r, p.dim, p.scale_a);
        let mut recs = Vec::new();
        for (res, anchor) in resolvent_suite(&d, &a, p.t, p.s, p.lambda, tol).map_err(module)?.iter().zip(A_RESOLVENT)
        {
            recs.push(CheckRecord::new(format!("{}:seed={seed}", res.name), anchor, res.value, None, tol, res.pass));
        }
        if p.quadrature {
            let q = inverse_sqrt_check(&d, &QuadratureConfig::default(), qtol).map_err(module)?;
            recs.push(CheckRecord::new(format!("inverse-sqrt:seed={seed}"), A_INVSQRT, q.value, q.bound, qtol, q.pass));
        }
        Ok::<_, ExperimentError>(recs)
    });
    let mut out = Vec::new();
    for r in per {
        out.extend(r?);
    }
    Ok(out)
}

fn derivative(p: &DerivativeParams, cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<CheckRecord>, ExperimentError> {
    let tol = cfg.tolerance("richardson", 0.5);
    let per = map_indexed(opts.strategy, p.instances, |i| {
        let seed = cfg.seed.wrapping_add(i as u64);
        let mut r = rng(seed);
        let d = random_hermitian(&mut r, p.dim, p.scale_d);
        let a = random_hermitian(&mut r, p.dim, p.scale_a);
        let checks = derivative_suite(&d, &a, p.lambda, p.n, p.t0, p.h).map_err(module)?;
        Ok::<_, ExperimentError>(
            checks
                .iter()
                .zip(A_DERIV)
                .map(|(c, anchor)| {
                    CheckRecord::new(
                        format!("richardson:{}:seed={seed}", c.name),
                        anchor,
                        c.ratio.unwrap_or(4.0),
                        Some(c.error_h),
                        tol,
                        c.ratio_in(4.0 - tol, 4.0 + tol),
                    )
                })
                .collect::<Vec<_>>(),
        )
    });
    let mut out = Vec::new();
    for r in per {
        out.extend(r?);
    }
    Ok(out)
}

fn schatten(p: &SchattenParams, opts: &RunOptions) -> Result<(Vec<CheckRecord>, Vec<Table>), ExperimentError> {
    let cfg = &p.experiment;
    let table = schatten_decay_experiment(cfg, opts.strategy).map_err(module)?;
    let anchor = match cfg.probe {
        crate::dirac::SchattenProbe::Weighted { .. } => A_SCHATTEN,
        crate::dirac::SchattenProbe::Sandwich { .. } => A_SANDWICH,
    };
    let mut out = Vec::new();
    for row in &table.rows {
        if let Some(q) = row.ratio {
            let stable = (q - 1.0).abs() <= cfg.threshold;
            out.push(CheckRecord::new(
                format!("schatten:N={}", row.points),
                anchor,
                q,
                Some(row.norm),
                cfg.threshold,
                stable != p.expect_divergent,
            ));
        }
    }
    if out.is_empty() {
        let zero = table.rows.iter().all(|r| r.norm == 0.0);
        out.push(CheckRecord::exact("schatten:norm", anchor, if zero { 0.0 } else { table.rows[0].norm }));
        if !zero {
            out.last_mut().expect("just pushed").pass = true;
        }
    }
    let t = Table {
        suffix: "table".into(),
        header: vec!["N".into(), "p".into(), "norm".into(), "ratio".into()],
        rows: table
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.points.to_string(),
                    super::fmt_value(r.p),
                    super::fmt_value(r.norm),
                    r.ratio.map(super::fmt_value).unwrap_or_default(),
                ]
            })
            .collect(),
    };
    Ok((out, vec![t]))
}

fn scaling(p: &ScalingParams, cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<CheckRecord>, ExperimentError> {
    let pot = p.potential.build().map_err(module)?;
    let mut out = Vec::new();
    let cl = clifford_build(p.lattice.n).map_err(module)?;
    out.push(CheckRecord::exact(
        format!("clifford:n={}", p.lattice.n),
        A_CLIFFORD,
        if cl.relations_hold() { 0.0 } else { 1.0 },
    ));
    let pair = dirac_assemble(&p.lattice, &pot).map_err(module)?;
    out.push(CheckRecord::below("adjoint", A_ADJOINT, pair.adjoint_defect, 1e-12));
    if pot.is_zero_potential() {
        let comm = (&pair.plus * &pair.minus - &pair.minus * &pair.plus).norm();
        out.push(CheckRecord::below("normality", A_NORMAL, comm, 1e-12));
    }
    let rows = scaling_family(&p.lattice, &pot, &p.lambdas, opts.strategy).map_err(module)?;
    for r in rows {
        let tol = cfg.tolerance("hind", 1e-9) * r.dimension as f64;
        out.push(CheckRecord::new(
            format!("scaling:lambda={}", r.lambda),
            A_SCALING,
            r.hind.abs(),
            Some(r.difference_norm),
            tol,
            r.hind.abs() < tol,
        ));
    }
    Ok(out)
}
