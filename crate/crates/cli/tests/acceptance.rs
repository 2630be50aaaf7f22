//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs with a custom harness so every line is printed on each `cargo test`.
//! Known, documented failures are listed in `EXPECTED_FAILURES`; the target
//! exits nonzero when the observed failure set differs from it in either direction.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};
use std::process::{Command, ExitCode};
use std::time::Instant;

use hyperon_qfim::dephasing::{apply_channel, kappa_factor, kraus_weights, trajectory, KernelVariant};
use hyperon_qfim::matkit::pinv_sym;
use hyperon_qfim::qfim::{
    analyze_point, appendix_lambda_plus, build_lambda, closed_form_variance, qfim_from_slds, qfim_integral,
    qfim_spectral, qfim_vectorized, sld, ClosedForm,
};
use hyperon_qfim::state::{pauli_sum_spectrum, preset_channel, state_with_partials, xstate, Channel};
use hyperon_qfim::{Error, NoiseModel, PhysicsParams, VarianceBounds, XState, XStatePartials};
use hyperon_qfim_cli::check::appendix_sample;
use hyperon_qfim_cli::figure::{figure_table, FigureId};
use hyperon_qfim_cli::sweep::compute_row;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Criteria that fail by construction; see the project notes for the analysis.
///
/// 1: at exactly `phi = pi/2` with `alpha = 1`, `beta = gamma = 0` the state
/// derivative vanishes on a zero eigenvalue, so the exact-point QFIM has
/// `F_phiphi = 0` and the bound is infinite. The expected 0.25 is the limit.
///
/// 11: the QFIM of the preset state at `phi = pi/2` is invariant under the
/// dephasing channel (each X block is rank one with real amplitudes, so the
/// QFIM equals the classical Fisher information of the diagonal, which the
/// channel keeps). The variance is constant in time and has no extrema.
const EXPECTED_FAILURES: &[u32] = &[1, 11];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn rel(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        (got - want).abs() / want.abs()
    }
}

fn bounds(p: &PhysicsParams, phi: f64) -> VarianceBounds {
    compute_row(p, phi, None, 0.0).bounds
}

fn free(alpha: f64, beta: f64, gamma: f64) -> PhysicsParams {
    PhysicsParams::free(alpha, beta, gamma).expect("valid parameters")
}

/// `k pi / 180` for `k = 1..=179`.
fn interior_phi() -> Vec<f64> {
    (1..180).map(|k| k as f64 * PI / 180.0).collect()
}

/// `-0.99, -0.98, ..., 0.99`.
fn alpha_steps() -> Vec<f64> {
    (-99..=99).map(|k| k as f64 / 100.0).collect()
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |m, x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.max(x) })
}

fn c01_high_energy_phi() -> Outcome {
    let p = free(1.0, 0.0, 0.0);
    let off_axis: Vec<f64> = interior_phi().into_iter().filter(|&phi| phi != FRAC_PI_2).collect();
    let slice = max_of(off_axis.iter().map(|&phi| {
        let want = closed_form_variance(ClosedForm::HighEnergyPhi, 1.0, 0.0, phi).expect("interior");
        rel(bounds(&p, phi).var_sim_phi, want)
    }));
    let at_right = bounds(&p, FRAC_PI_2).var_sim_phi;
    let near = bounds(&p, FRAC_PI_2 + 1e-4).var_sim_phi;
    let pass = slice <= 1e-9 && (at_right - 0.25).abs() <= 1e-9;
    Outcome::new(
        pass,
        format!(
            "{} off-axis points max rel err {slice:.2e}; var_sim_phi(pi/2) = {at_right} (want 0.25; limit from pi/2+1e-4 is {near:.9})",
            off_axis.len()
        ),
    )
}

fn c02_right_angle_phi() -> Outcome {
    let beta = 0.4;
    let slice = max_of(alpha_steps().into_iter().map(|a| {
        let want = closed_form_variance(ClosedForm::RightAnglePhi, a, beta, FRAC_PI_2).expect("beta > 0");
        rel(bounds(&free(a, beta, 0.0), FRAC_PI_2).var_sim_phi, want)
    }));
    let cf_hi = closed_form_variance(ClosedForm::RightAnglePhi, 1.0, beta, FRAC_PI_2).expect("beta > 0");
    let cf_lo = closed_form_variance(ClosedForm::RightAnglePhi, -1.0, beta, FRAC_PI_2).expect("beta > 0");
    let machine_lo = bounds(&free(-1.0, beta, 0.0), FRAC_PI_2).var_sim_phi;
    let pass = slice <= 1e-9 && cf_hi == 0.0 && rel(cf_lo, 6.25) <= 1e-12 && rel(machine_lo, 6.25) <= 1e-9;
    Outcome::new(
        pass,
        format!("199 alphas max rel err {slice:.2e}; alpha=1 -> {cf_hi}; alpha=-1 -> {cf_lo} (machinery {machine_lo:.12})"),
    )
}

fn c03_right_angle_alpha() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut spread: f64 = 0.0;
    for a in alpha_steps() {
        let vals: Vec<f64> = [0.3, 0.752, 1.2]
            .iter()
            .map(|&d| bounds(&PhysicsParams::constrained(a, d).expect("valid"), FRAC_PI_2).var_sim_alpha)
            .collect();
        for &v in &vals {
            worst = worst.max(rel(v, 1.0 - a * a));
        }
        let (lo, hi) = vals.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
        spread = spread.max(hi - lo);
    }
    Outcome::new(
        worst <= 1e-9 && spread < 1e-10,
        format!("max rel err {worst:.2e}; max spread across delta_phi {spread:.2e}"),
    )
}

fn c04_unpolarized_alpha() -> Outcome {
    let p = free(0.0, 0.0, 0.0);
    let interior = max_of(interior_phi().into_iter().filter(|&phi| phi != FRAC_PI_2).map(|phi| {
        let want = closed_form_variance(ClosedForm::UnpolarizedAlpha, 0.0, 0.0, phi).expect("interior");
        rel(bounds(&p, phi).var_sim_alpha, want)
    }));
    let ends: Vec<String> = [0.0, PI]
        .iter()
        .map(|&phi| {
            let row = compute_row(&p, phi, None, 0.0);
            hyperon_qfim_cli::table::format_number(row.bounds.var_sim_alpha)
        })
        .collect();
    let pass = interior <= 1e-9 && ends.iter().all(|s| s == "inf");
    Outcome::new(pass, format!("interior max rel err {interior:.2e}; phi in {{0, pi}} -> {ends:?}"))
}

fn c05_individual_phi() -> Outcome {
    let beta = 0.4;
    let mut right: f64 = 0.0;
    let mut forward: f64 = 0.0;
    for a in alpha_steps() {
        let p = free(a, beta, 0.0);
        let want = closed_form_variance(ClosedForm::IndividualPhiRightAngle, a, beta, FRAC_PI_2).expect("beta > 0");
        right = right.max(rel(bounds(&p, FRAC_PI_2).var_ind_phi, want));
        for phi in [0.0, PI] {
            let want = closed_form_variance(ClosedForm::IndividualPhiForward, a, beta, phi).expect("beta > 0");
            forward = forward.max(rel(bounds(&p, phi).var_ind_phi, want));
        }
    }
    let degenerate = max_of([0.0, 0.2, 0.4, 0.8].iter().flat_map(|&b| {
        interior_phi()
            .into_iter()
            .filter(|&phi| phi != FRAC_PI_2)
            .map(move |phi| (bounds(&free(0.0, b, 0.0), phi).var_ind_phi - 0.5).abs())
    }));
    Outcome::new(
        right <= 1e-9 && forward <= 1e-9 && degenerate <= 1e-9,
        format!("pi/2 max rel err {right:.2e}; phi in {{0, pi}} max rel err {forward:.2e}; |var - 1/2| at alpha=gamma=0 {degenerate:.2e}"),
    )
}

fn argmin(xs: &[f64], ys: &[f64]) -> f64 {
    let k = (0..ys.len()).filter(|&k| !ys[k].is_nan()).min_by(|&i, &j| ys[i].total_cmp(&ys[j])).expect("non-empty");
    xs[k]
}

fn c06_optima() -> Outcome {
    let phis: Vec<f64> = (0..=180).map(|k| k as f64 * PI / 180.0).collect();
    let step = PI / 180.0;
    let mut phi_ok = true;
    let mut worst_phi: f64 = 0.0;
    // alpha > 0 slices with beta = 0.4 stay physical up to |alpha| = sqrt(0.84).
    for a in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let p = free(a, 0.4, 0.0);
        let b: Vec<VarianceBounds> = phis.iter().map(|&phi| bounds(&p, phi)).collect();
        for pick in [|v: &VarianceBounds| v.var_sim_phi, |v: &VarianceBounds| v.var_ind_phi] {
            let at = argmin(&phis, &b.iter().map(pick).collect::<Vec<_>>());
            worst_phi = worst_phi.max((at - FRAC_PI_2).abs());
            phi_ok &= (at - FRAC_PI_2).abs() <= step * (1.0 + 1e-9);
        }
    }
    // alpha scans over families physical on all of [-1, 1]: presets and the high-energy limit.
    let alphas = alpha_steps();
    let (mut alpha_ok, mut families, mut undefined) = (true, 0, 0);
    let mut slices: Vec<PhysicsParams> = Channel::ALL.iter().map(|&c| preset_channel(c)).collect();
    slices.push(free(0.0, 0.0, 0.0));
    for base in slices {
        for phi in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3, FRAC_PI_2] {
            let b: Vec<VarianceBounds> =
                alphas.iter().map(|&a| bounds(&base.with_alpha(a).expect("valid"), phi)).collect();
            for pick in [|v: &VarianceBounds| v.var_sim_alpha, |v: &VarianceBounds| v.var_ind_alpha] {
                let ys: Vec<f64> = b.iter().map(pick).collect();
                if ys.iter().all(|y| y.is_infinite()) {
                    undefined += 1;
                    continue;
                }
                alpha_ok &= argmin(&alphas, &ys).abs() == 0.99;
                families += 1;
            }
        }
    }
    Outcome::new(
        phi_ok && alpha_ok && families > 0,
        format!(
            "phi argmin within {worst_phi:.2e} of pi/2 (grid step {step:.2e}); alpha argmin at +-0.99 in all {families} alpha scans: {alpha_ok} ({undefined} scans bounded nowhere)"
        ),
    )
}

fn c07_gamma_ratio() -> Outcome {
    let t = figure_table(FigureId::F6).expect("figure");
    let (phi, alpha, g) = (t.column("phi").unwrap(), t.column("alpha").unwrap(), t.column("gamma_ratio").unwrap());
    let max_g = max_of(g.iter().copied().filter(|x| !x.is_nan()));
    let mut on_line: f64 = 0.0;
    let mut line_points = 0;
    for p in [free(0.3, 0.4, 0.0), free(-0.6, 0.4, 0.2), free(0.8, 0.2, 0.5)] {
        let b = bounds(&p, FRAC_PI_2);
        on_line = on_line.max((b.gamma_ratio - 2.0).abs());
        line_points += 1;
    }
    for c in Channel::ALL {
        for a in alpha_steps() {
            let b = bounds(&preset_channel(c).with_alpha(a).expect("valid"), FRAC_PI_2);
            on_line = on_line.max((b.gamma_ratio - 2.0).abs());
            line_points += 1;
        }
    }
    let mut f6_line: f64 = 0.0;
    for k in 0..g.len() {
        if phi[k] == FRAC_PI_2 && !g[k].is_nan() {
            f6_line = f6_line.max((g[k] - 2.0).abs());
        }
    }
    // Mean distance from 2 over interior angles, per alpha near 1.
    let gap = |a: f64| {
        let xs: Vec<f64> = (0..g.len())
            .filter(|&k| alpha[k] == a && phi[k] > 0.0 && phi[k] < PI && !g[k].is_nan())
            .map(|k| (2.0 - g[k]).abs())
            .collect();
        xs.iter().sum::<f64>() / xs.len() as f64
    };
    let gaps = [gap(0.5), gap(0.8), gap(0.9), gap(0.98), gap(1.0)];
    let approaches = gaps.windows(2).all(|w| w[1] < w[0]) && gaps[4] < 1e-6;
    Outcome::new(
        max_g <= 2.0 + 1e-10 && on_line <= 1e-10 && f6_line <= 1e-10 && approaches,
        format!(
            "max gamma_ratio {max_g:.12}; |G-2| on phi=pi/2 line {on_line:.2e} ({line_points} points), {f6_line:.2e} on f6; mean |2-G| at alpha 0.5/0.8/0.9/0.98/1: {:.2e}/{:.2e}/{:.2e}/{:.2e}/{:.2e}",
            gaps[0], gaps[1], gaps[2], gaps[3], gaps[4]
        ),
    )
}

fn random_constrained(rng: &mut StdRng) -> (PhysicsParams, f64) {
    let p = PhysicsParams::constrained(rng.gen_range(-0.99..0.99), rng.gen_range(-PI..PI)).expect("valid");
    (p, rng.gen_range(0.01..PI - 0.01))
}

fn c08_oracle_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let (mut worst, mut worst_int) = (0.0f64, 0.0f64);
    let (mut full_rank, mut dephased_full_rank) = (0, 0);
    let mut errors = Vec::new();
    // Constrained states have rank 2; their dephased images supply the full-rank subset.
    for _ in 0..100 {
        let (p, phi) = random_constrained(&mut rng);
        let m = NoiseModel::new(rng.gen_range(0.05..6.0), rng.gen_range(0.0..0.9), KernelVariant::RateNormalized)
            .expect("valid noise");
        let t = rng.gen_range(0.5..10.0);
        let r = (|| -> hyperon_qfim::Result<()> {
            let (rho0, da0, dp0) = state_with_partials(&p, phi)?;
            let dephased = hyperon_qfim::dephasing::evolve(&rho0, &da0, &dp0, t, &m);
            for (k, (rho, da, dp)) in [(rho0, da0, dp0), dephased].into_iter().enumerate() {
                let v = qfim_vectorized(&rho, &da, &dp)?;
                let s = qfim_spectral(&rho, &da, &dp)?;
                let l = qfim_from_slds(&rho, &sld(&rho, &da)?, &sld(&rho, &dp)?);
                worst = worst.max(v.relative_diff(&s)).max(v.relative_diff(&l));
                match qfim_integral(&rho, &da, &dp) {
                    Ok(i) => {
                        worst_int = worst_int.max(v.relative_diff(&i));
                        if k == 0 {
                            full_rank += 1;
                        } else {
                            dephased_full_rank += 1;
                        }
                    }
                    Err(Error::RankDeficient { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            Ok(())
        })();
        if let Err(e) = r {
            errors.push(e.to_string());
        }
    }
    Outcome::new(
        errors.is_empty() && worst <= 1e-8 && worst_int <= 1e-8 && full_rank + dephased_full_rank > 0,
        format!(
            "vectorized/spectral/SLD max rel diff {worst:.2e} on 100 points and their dephased images; integral {worst_int:.2e} on full-rank subset ({full_rank} undephased, {dephased_full_rank} dephased); errors {}",
            errors.len()
        ),
    )
}

fn c09_appendix() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let rho = appendix_sample(&mut rng);
        let closed = appendix_lambda_plus(&rho).expect("well-conditioned sample");
        let numeric = pinv_sym(&build_lambda(&rho), 1e-12).expect("finite");
        worst = worst.max(closed.max_abs_diff(&numeric));
    }
    Outcome::new(worst <= 1e-10, format!("50 full-rank points, max entrywise diff {worst:.2e}"))
}

fn c10_sld_contract() -> Outcome {
    let mut rng = StdRng::seed_from_u64(10);
    let (mut residual, mut saturation) = (0.0f64, 0.0f64);
    let mut points = 0;
    let mut record = |rho: &XState, da: &XStatePartials, dp: &XStatePartials| {
        let a = analyze_point(rho, da, dp).expect("finite");
        residual = residual
            .max(hyperon_qfim::qfim::sld_residual(rho, da, &a.sld_alpha))
            .max(hyperon_qfim::qfim::sld_residual(rho, dp, &a.sld_phi));
        saturation = saturation.max(a.saturation.abs());
        points += 1;
    };
    for _ in 0..200 {
        let (p, phi) = random_constrained(&mut rng);
        let (rho, da, dp) = state_with_partials(&p, phi).expect("valid");
        record(&rho, &da, &dp);
        let m = NoiseModel::new(rng.gen_range(0.05..6.0), rng.gen_range(0.0..1.0), KernelVariant::RateNormalized)
            .expect("valid noise");
        let (r, a, d) = hyperon_qfim::dephasing::evolve(&rho, &da, &dp, rng.gen_range(0.0..10.0), &m);
        record(&r, &a, &d);
    }
    for c in Channel::ALL {
        for phi in (0..=180).map(|k| k as f64 * PI / 180.0) {
            let (rho, da, dp) = state_with_partials(&preset_channel(c), phi).expect("valid");
            record(&rho, &da, &dp);
        }
    }
    Outcome::new(
        residual < 1e-9 && saturation < 1e-12,
        format!("{points} points, max residual {residual:.2e}, max |saturation_trace| {saturation:.2e}"),
    )
}

/// Turning points of `xs`, ignoring steps below `1e-9` relative (rounding noise).
fn local_extrema(xs: &[f64]) -> usize {
    let steps: Vec<f64> = xs
        .windows(2)
        .map(|w| w[1] - w[0])
        .zip(xs)
        .filter(|(d, x)| d.abs() > 1e-9 * x.abs())
        .map(|(d, _)| d)
        .collect();
    steps.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
}

fn var_alpha_series(p: &PhysicsParams, phi: f64, tau: f64, mu: f64, times: &[f64]) -> Vec<f64> {
    let m = NoiseModel::new(tau, mu, KernelVariant::RateNormalized).expect("valid noise");
    trajectory(p, phi, &m, times).expect("trajectory").bounds.iter().map(|b| b.var_sim_alpha).collect()
}

fn spread(xs: &[f64]) -> f64 {
    let (lo, hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &x| (l.min(x), h.max(x)));
    (hi - lo) / lo.abs()
}

fn c11_dephasing() -> Outcome {
    let rho = xstate(&preset_channel(Channel::Lambda), 1.1).expect("valid");
    let mut kraus: f64 = 0.0;
    for i in 0..=20 {
        for j in 0..=20 {
            let (p, mu) = (i as f64 / 20.0, j as f64 / 20.0);
            let out = apply_channel(&rho, &kraus_weights(p, mu).expect("in range"));
            let kappa = (1.0 - mu) * (1.0 - 2.0 * p).powi(2) + mu;
            let want = XState { r14: rho.r14 * kappa, r23: rho.r23 * kappa, ..rho };
            kraus = kraus.max(out.to_matrix().max_abs_diff(&want.to_matrix()));
        }
    }
    let mut kappa0 = true;
    for variant in [KernelVariant::RateNormalized, KernelVariant::Unscaled] {
        for tau in [0.2, 5.0] {
            kappa0 &= kappa_factor(0.0, &NoiseModel::new(tau, 0.3, variant).expect("valid")) == 1.0;
        }
    }
    let times: Vec<f64> = (0..=1000).map(|k| k as f64 / 100.0).collect();
    let lambda = preset_channel(Channel::Lambda);
    // A mixed state off the right angle, so that freezing is not automatic.
    let mixed = free(0.475, 0.4, 0.3);
    let mut frozen_drift: f64 = 0.0;
    for (p, phi) in [(lambda, FRAC_PI_2), (mixed, 1.0)] {
        let m = NoiseModel::new(5.0, 1.0, KernelVariant::RateNormalized).expect("valid");
        let tr = trajectory(&p, phi, &m, &times).expect("trajectory");
        let b0 = tr.bounds[0];
        frozen_drift = frozen_drift.max(max_of(tr.bounds.iter().flat_map(|b| {
            [
                rel(b.var_sim_alpha, b0.var_sim_alpha),
                rel(b.var_sim_phi, b0.var_sim_phi),
                rel(b.var_ind_alpha, b0.var_ind_alpha),
                rel(b.var_ind_phi, b0.var_ind_phi),
            ]
        })));
    }
    let markov = var_alpha_series(&lambda, FRAC_PI_2, 0.2, 0.2, &times);
    let monotone = markov.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
    let non_markov = var_alpha_series(&lambda, FRAC_PI_2, 5.0, 0.2, &times);
    let extrema = local_extrema(&non_markov);
    // Same checks where the state does respond to dephasing; reported, not scored.
    let mixed_markov = var_alpha_series(&mixed, 1.0, 0.2, 0.2, &times);
    let mixed_extrema = local_extrema(&var_alpha_series(&mixed, 1.0, 5.0, 0.2, &times));
    let mixed_monotone = mixed_markov.windows(2).all(|w| w[1] >= w[0]);
    Outcome::new(
        kraus <= 1e-12 && kappa0 && frozen_drift <= 1e-12 && monotone && extrema >= 2,
        format!(
            "Kraus vs kappa {kraus:.2e} on 21x21 grid; kappa(0)=1: {kappa0}; mu=1 drift {frozen_drift:.2e}; \
             Lambda at pi/2: Markovian nondecreasing {monotone} (relative spread {:.1e}), non-Markovian extrema {extrema} (relative spread {:.1e}); \
             mixed free state at phi=1: Markovian nondecreasing {mixed_monotone} ({:.3} -> {:.3}), non-Markovian extrema {mixed_extrema}",
            spread(&markov),
            spread(&non_markov),
            mixed_markov[0],
            mixed_markov[mixed_markov.len() - 1]
        ),
    )
}

fn c12_state_validity() -> Outcome {
    let (mut trace, mut min_eig, mut states, mut undefined) = (0.0f64, f64::INFINITY, 0, 0);
    for ia in 0..=40 {
        for id in 0..=24 {
            for ip in 0..=36 {
                let p = PhysicsParams::constrained(-1.0 + ia as f64 / 20.0, -PI + id as f64 * PI / 12.0).expect("valid");
                // alpha = -1 at phi in {0, pi} has a vanishing normalization.
                let Ok(rho) = xstate(&p, ip as f64 * PI / 36.0) else {
                    undefined += 1;
                    continue;
                };
                trace = trace.max((rho.trace() - 1.0).abs());
                min_eig = rho.eigenvalues().into_iter().fold(min_eig, f64::min);
                states += 1;
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(12);
    let mut spectrum: f64 = 0.0;
    for _ in 0..50 {
        let (p, phi) = random_constrained(&mut rng);
        let a = xstate(&p, phi).expect("valid").eigenvalues();
        let mut b = pauli_sum_spectrum(&p, phi).expect("constrained");
        let mut a = a.to_vec();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        spectrum = spectrum.max(max_of(a.iter().zip(&b).map(|(x, y)| (x - y).abs())));
    }
    Outcome::new(
        trace <= 1e-12 && min_eig >= -1e-12 && spectrum <= 1e-10,
        format!("{states} states ({undefined} undefined grid points skipped): max |tr-1| {trace:.2e}, min eigenvalue {min_eig:.2e}; spectrum oracle max diff {spectrum:.2e} on 50 points"),
    )
}

fn c13_determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("tempdir");
    let run = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_hyperon-qfim"))
            .args(["figure", "f6", "--out"])
            .arg(&path)
            .status()
            .expect("spawn");
        assert!(status.success());
        std::fs::read(path).expect("read output")
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    Outcome::new(a == b && !a.is_empty(), format!("two runs of `figure f6`: {} and {} bytes, identical: {}", a.len(), b.len(), a == b))
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        (1, "high-energy phi slice", c01_high_energy_phi),
        (2, "right-angle phi slice", c02_right_angle_phi),
        (3, "right-angle alpha slice", c03_right_angle_alpha),
        (4, "unpolarized alpha slice", c04_unpolarized_alpha),
        (5, "individual phi bounds", c05_individual_phi),
        (6, "optimal parameters", c06_optima),
        (7, "gamma ratio", c07_gamma_ratio),
        (8, "oracle equivalence", c08_oracle_equivalence),
        (9, "closed-form pseudo-inverse", c09_appendix),
        (10, "SLD contract", c10_sld_contract),
        (11, "dephasing", c11_dephasing),
        (12, "state validity", c12_state_validity),
        (13, "determinism", c13_determinism),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    for (id, name, f) in criteria {
        let t = Instant::now();
        let o = f();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {status} {name}: {} [{:.2}s]", o.detail, t.elapsed().as_secs_f64());
        if !o.pass {
            failed.push(id);
        }
    }
    println!(
        "acceptance: {} passed, {} failed {:?} (expected failures {:?}) in {:.2}s",
        criteria.len() - failed.len(),
        failed.len(),
        failed,
        EXPECTED_FAILURES,
        start.elapsed().as_secs_f64()
    );
    if failed == EXPECTED_FAILURES {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failure set differs from the expected set");
        ExitCode::FAILURE
    }
}
