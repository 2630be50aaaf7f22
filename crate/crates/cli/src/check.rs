//! Cross-oracle self-check over randomly sampled parameter points.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use hyperon_qfim::dephasing::{apply_channel, kraus_weights};
use hyperon_qfim::matkit::{kron, pinv_sym, vec};
use hyperon_qfim::qfim::{
    analyze_point, appendix_lambda_plus, build_lambda, closed_form_variance, qfim_from_slds, qfim_integral,
    qfim_spectral, qfim_vectorized, sld, sld_residual, variance_bounds, ClosedForm,
};
use hyperon_qfim::state::{pauli_sum_spectrum, state_with_partials, xstate};
use hyperon_qfim::{Error, Matrix, PhysicsParams, XState};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Closed-form `Λ⁺` under test; swapped out by mutation tests.
pub type AppendixFn = fn(&XState) -> hyperon_qfim::Result<Matrix>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Skipped => "SKIP",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: CheckStatus,
    pub max_residual: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub note: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckReport {
    pub checks: Vec<CheckResult>,
}

impl CheckReport {
    /// True only when every check ran and passed.
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{:<4} {:<22} max_residual={:.3e} tol={:.0e} samples={}",
                c.status.to_string(),
                c.name,
                c.max_residual,
                c.tolerance,
                c.samples
            ));
            if !c.note.is_empty() {
                out.push_str(&format!("  ({})", c.note));
            }
            out.push('\n');
        }
        out.push_str(if self.passed() { "overall: PASS\n" } else { "overall: FAIL\n" });
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    /// Sampled points per check; zero skips every check.
    pub points: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self { points: 50, seed: 2024 }
    }
}

/// Accumulates the worst residual of one check.
struct Tally {
    name: &'static str,
    tolerance: f64,
    worst: f64,
    samples: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self { name, tolerance, worst: 0.0, samples: 0, failures: Vec::new() }
    }

    fn record(&mut self, residual: f64) {
        self.samples += 1;
        if residual.is_nan() || residual > self.worst {
            self.worst = residual;
        }
    }

    fn error(&mut self, e: impl fmt::Display) {
        self.samples += 1;
        self.failures.push(e.to_string());
    }

    fn finish(self) -> CheckResult {
        let (status, note) = if self.samples == 0 {
            (CheckStatus::Skipped, "no sample points".to_string())
        } else if !self.failures.is_empty() {
            (CheckStatus::Fail, format!("{} evaluation errors, first: {}", self.failures.len(), self.failures[0]))
        } else if self.worst.is_nan() || self.worst > self.tolerance {
            (CheckStatus::Fail, String::new())
        } else {
            (CheckStatus::Pass, String::new())
        };
        CheckResult {
            name: self.name,
            status,
            max_residual: self.worst,
            tolerance: self.tolerance,
            samples: self.samples,
            note,
        }
    }
}

fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
}

fn random_constrained(rng: &mut StdRng) -> (PhysicsParams, f64) {
    let p = PhysicsParams::constrained(rng.gen_range(-0.95..0.95), rng.gen_range(-3.1..3.1)).expect("in range");
    (p, rng.gen_range(0.05..3.09))
}

fn linalg_identities(cfg: &CheckConfig, rng: &mut StdRng) -> CheckResult {
    let mut t = Tally::new("linalg identities", 1e-12);
    for _ in 0..cfg.points {
        let (a, b) = (random_matrix(rng, 3, 2), random_matrix(rng, 2, 4));
        let (c, d) = (random_matrix(rng, 2, 2), random_matrix(rng, 4, 3));
        let lhs = &kron(&a, &b) * &kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        let mixed = lhs.max_abs_diff(&rhs);
        let (x, y, z) = (random_matrix(rng, 3, 3), random_matrix(rng, 3, 3), random_matrix(rng, 3, 3));
        let left = vec(&(&(&x * &y) * &z));
        let right = kron(&z.transpose(), &x).matvec(&vec(&y)).expect("9x9");
        let vec_id = left.iter().zip(&right).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        t.record(mixed.max(vec_id));
        let (p, phi) = random_constrained(rng);
        match xstate(&p, phi).map(|r| build_lambda(&r)).and_then(|l| Ok((pinv_sym(&l, 1e-12)?, l))) {
            Ok((lp, l)) => t.record((&(&l * &lp) * &l).max_abs_diff(&l)),
            Err(e) => t.error(e),
        }
    }
    t.finish()
}

fn state_invariants(cfg: &CheckConfig, rng: &mut StdRng) -> CheckResult {
    let mut t = Tally::new("state invariants", 1e-10);
    for _ in 0..cfg.points {
        let (p, phi) = random_constrained(rng);
        let (rho, spectrum) = match (xstate(&p, phi), pauli_sum_spectrum(&p, phi)) {
            (Ok(r), Ok(s)) => (r, s),
            (Err(e), _) | (_, Err(e)) => {
                t.error(e);
                continue;
            }
        };
        let trace = (rho.trace() - 1.0).abs();
        let psd = if rho.is_physical(1e-12) { 0.0 } else { f64::INFINITY };
        let spec = spectrum.iter().zip(rho.eigenvalues()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        t.record(trace.max(psd).max(spec));
    }
    t.finish()
}

fn fisher_agreement(cfg: &CheckConfig, rng: &mut StdRng) -> CheckResult {
    let mut t = Tally::new("qfim agreement", 1e-8);
    for _ in 0..cfg.points {
        let (p, phi) = random_constrained(rng);
        let result = (|| -> hyperon_qfim::Result<f64> {
            let (rho, da, dp) = state_with_partials(&p, phi)?;
            let v = qfim_vectorized(&rho, &da, &dp)?;
            let s = qfim_spectral(&rho, &da, &dp)?;
            let l = qfim_from_slds(&rho, &sld(&rho, &da)?, &sld(&rho, &dp)?);
            let mut worst = v.relative_diff(&s).max(v.relative_diff(&l));
            match qfim_integral(&rho, &da, &dp) {
                Ok(i) => worst = worst.max(v.relative_diff(&i)),
                Err(Error::RankDeficient { .. }) => {}
                Err(e) => return Err(e),
            }
            Ok(worst)
        })();
        match result {
            Ok(r) => t.record(r),
            Err(e) => t.error(e),
        }
    }
    t.finish()
}

/// Random free-mode state with `r22 = r23` and a well-conditioned outer block.
pub fn appendix_sample(rng: &mut StdRng) -> XState {
    loop {
        let p = PhysicsParams::free(rng.gen_range(-0.9..0.9), rng.gen_range(0.1..0.9), 0.0).expect("in range");
        let Ok(rho) = xstate(&p, rng.gen_range(0.2..2.9)) else { continue };
        if rho.is_physical(1e-12) && rho.r11 * rho.r44 - rho.r14 * rho.r14 > 1e-2 {
            return rho;
        }
    }
}

fn appendix_agreement(cfg: &CheckConfig, rng: &mut StdRng, appendix: AppendixFn) -> CheckResult {
    let mut t = Tally::new("appendix lambda+", 1e-10);
    for _ in 0..cfg.points {
        let rho = appendix_sample(rng);
        match (appendix(&rho), pinv_sym(&build_lambda(&rho), 1e-12)) {
            (Ok(closed), Ok(numeric)) => t.record(closed.max_abs_diff(&numeric)),
            (Err(e), _) | (_, Err(e)) => t.error(e),
        }
    }
    t.finish()
}

fn sld_contract(cfg: &CheckConfig, rng: &mut StdRng) -> (CheckResult, CheckResult) {
    let mut res = Tally::new("sld residual", 1e-9);
    let mut sat = Tally::new("saturation trace", 1e-12);
    for _ in 0..cfg.points {
        let (p, phi) = random_constrained(rng);
        let out = state_with_partials(&p, phi).and_then(|(rho, da, dp)| {
            let a = analyze_point(&rho, &da, &dp)?;
            Ok((sld_residual(&rho, &da, &a.sld_alpha).max(sld_residual(&rho, &dp, &a.sld_phi)), a.saturation.abs()))
        });
        match out {
            Ok((r, s)) => {
                res.record(r);
                sat.record(s);
            }
            Err(e) => {
                res.error(&e);
                sat.error(e);
            }
        }
    }
    (res.finish(), sat.finish())
}

fn relative(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

fn machinery(p: &PhysicsParams, phi: f64) -> hyperon_qfim::Result<hyperon_qfim::VarianceBounds> {
    let (rho, da, dp) = state_with_partials(p, phi)?;
    Ok(variance_bounds(&qfim_vectorized(&rho, &da, &dp)?))
}

/// Picks the bound a closed form describes.
type Pick = fn(&hyperon_qfim::VarianceBounds) -> f64;

/// Closed-form slices on their open parameter ranges.
fn closed_forms(cfg: &CheckConfig, rng: &mut StdRng) -> CheckResult {
    let mut t = Tally::new("closed-form slices", 1e-9);
    for _ in 0..cfg.points {
        let phi = rng.gen_range(0.1..3.04);
        let alpha = rng.gen_range(-0.95..0.95);
        let dphi = rng.gen_range(-3.0..3.0);
        let cases: [(PhysicsParams, f64, ClosedForm, Pick); 4] = [
            (PhysicsParams::free(1.0, 0.0, 0.0).expect("slice"), phi, ClosedForm::HighEnergyPhi, |b| b.var_sim_phi),
            (PhysicsParams::free(alpha, 0.4, 0.0).expect("slice"), FRAC_PI_2, ClosedForm::RightAnglePhi, |b| b.var_sim_phi),
            (PhysicsParams::constrained(alpha, dphi).expect("slice"), FRAC_PI_2, ClosedForm::RightAngleAlpha, |b| {
                b.var_sim_alpha
            }),
            (PhysicsParams::free(0.0, 0.0, 0.0).expect("slice"), phi, ClosedForm::UnpolarizedAlpha, |b| b.var_sim_alpha),
        ];
        for (p, at, case, pick) in cases {
            match (machinery(&p, at), closed_form_variance(case, p.alpha, p.beta_gamma().0, at)) {
                (Ok(b), Ok(want)) => t.record(relative(pick(&b), want)),
                (Err(e), _) | (_, Err(e)) => t.error(e),
            }
        }
    }
    t.finish()
}

fn channel_equivalence(cfg: &CheckConfig, rng: &mut StdRng) -> CheckResult {
    let mut t = Tally::new("channel equivalence", 1e-12);
    let n = cfg.points;
    let unit = |k: usize| if n == 1 { 0.5 } else { k as f64 / (n - 1) as f64 };
    for i in 0..n {
        let (p, mu) = (unit(i), unit((i * 7 + 3) % n.max(1)));
        let (params, phi) = random_constrained(rng);
        let rho = match xstate(&params, phi) {
            Ok(r) => r,
            Err(e) => {
                t.error(e);
                continue;
            }
        };
        let k = match kraus_weights(p, mu) {
            Ok(k) => k,
            Err(e) => {
                t.error(e);
                continue;
            }
        };
        let out = apply_channel(&rho, &k);
        let kappa = (1.0 - mu) * (1.0 - 2.0 * p).powi(2) + mu;
        let scaled = XState { r14: rho.r14 * kappa, r23: rho.r23 * kappa, ..rho };
        t.record(out.to_matrix().max_abs_diff(&scaled.to_matrix()));
    }
    t.finish()
}

/// Runs every check with the library's closed-form `Λ⁺`.
pub fn run_checks(cfg: &CheckConfig) -> CheckReport {
    run_checks_with(cfg, appendix_lambda_plus::<f64>)
}

pub fn run_checks_with(cfg: &CheckConfig, appendix: AppendixFn) -> CheckReport {
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let (res, sat) = sld_contract(cfg, &mut rng);
    CheckReport {
        checks: vec![
            linalg_identities(cfg, &mut rng),
            state_invariants(cfg, &mut rng),
            fisher_agreement(cfg, &mut rng),
            appendix_agreement(cfg, &mut rng, appendix),
            res,
            sat,
            closed_forms(cfg, &mut rng),
            channel_equivalence(cfg, &mut rng),
        ],
    }
}
