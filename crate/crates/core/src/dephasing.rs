//! Correlated two-qubit dephasing driven by random telegraph noise.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matkit::{kron, RealMatrix};
use crate::qfim::{qfim_vectorized, variance_bounds, QfiMatrix, VarianceBounds};
use crate::scalar::Real;
use crate::state::{state_with_partials, PhysicsParams, XState, XStatePartials};

/// Argument convention of the telegraph kernel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum KernelVariant {
    /// Oscillation and decay arguments `v t / (2 tau)`; keeps `|G| <= 1`.
    #[default]
    RateNormalized,
    /// Arguments `v t`, which can push `G` above one for `tau > 1/2`.
    Unscaled,
}

impl FromStr for KernelVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normalized" | "rate_normalized" => Ok(KernelVariant::RateNormalized),
            "literal" | "unscaled" => Ok(KernelVariant::Unscaled),
            other => Err(Error::InvalidNoise(format!("unknown kernel `{other}`"))),
        }
    }
}

/// Telegraph noise with correlation time `tau` and inter-qubit correlation `mu`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel<T> {
    tau: T,
    mu: T,
    variant: KernelVariant,
}

impl<T: Real> NoiseModel<T> {
    pub fn new(tau: T, mu: T, variant: KernelVariant) -> Result<Self> {
        if !tau.is_finite() || tau <= T::zero() {
            return Err(Error::InvalidNoise(format!("tau = {tau} must be positive")));
        }
        if tau == T::lit(0.25) {
            return Err(Error::InvalidNoise("tau = 1/4 separates the two regimes and is not supported".into()));
        }
        if !(T::zero()..=T::one()).contains(&mu) {
            return Err(Error::InvalidNoise(format!("mu = {mu} outside [0, 1]")));
        }
        Ok(Self { tau, mu, variant })
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn variant(&self) -> KernelVariant {
        self.variant
    }

    /// `tau < 1/4`: overdamped kernel.
    pub fn is_markovian(&self) -> bool {
        self.tau < T::lit(0.25)
    }

    /// `sqrt(|1 - 16 tau²|)`.
    pub fn v(&self) -> T {
        (T::one() - T::lit(16.0) * self.tau * self.tau).abs().sqrt()
    }
}

/// Telegraph memory kernel `G(t)`.
pub fn kernel_g<T: Real>(t: T, m: &NoiseModel<T>) -> T {
    let v = m.v();
    let two_tau = m.tau + m.tau;
    let arg = match m.variant {
        KernelVariant::RateNormalized => v * t / two_tau,
        KernelVariant::Unscaled => v * t,
    };
    let envelope = (-t / two_tau).exp();
    if m.is_markovian() {
        envelope * (arg.cosh() + arg.sinh() / v)
    } else {
        envelope * (arg.cos() + arg.sin() / v)
    }
}

/// Single-qubit flip probability, clamped into `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlipProbability<T> {
    pub p: T,
    pub clamped: bool,
}

/// `p = (1 - G) / 2` for a given kernel value.
pub fn flip_from_kernel<T: Real>(g: T) -> FlipProbability<T> {
    let raw = (T::one() - g) * T::lit(0.5);
    let p = raw.max(T::zero()).min(T::one());
    FlipProbability { p, clamped: p != raw }
}

pub fn flip_probability<T: Real>(t: T, m: &NoiseModel<T>) -> FlipProbability<T> {
    flip_from_kernel(kernel_g(t, m))
}

/// Index of a Pauli factor in [`KrausSet`] weights.
pub const PAULI_0: usize = 0;
pub const PAULI_X: usize = 1;
pub const PAULI_Y: usize = 2;
pub const PAULI_Z: usize = 3;

/// Probabilities `p_ij` of applying `τ_i ⊗ τ_j`, indices over `(0, x, y, z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KrausSet<T> {
    pub weights: [[T; 4]; 4],
}

/// Real 2×2 factors whose conjugation equals that of the Pauli matrices
/// (`τ_y = i·[[0, -1], [1, 0]]` and the phase cancels in `O ρ O†`).
fn real_pauli<T: Real>(k: usize) -> RealMatrix<T> {
    let (z, o) = (T::zero(), T::one());
    let e = match k {
        PAULI_0 => [o, z, z, o],
        PAULI_X => [z, o, o, z],
        PAULI_Y => [z, -o, o, z],
        _ => [o, z, z, -o],
    };
    RealMatrix::from_rows(&[&e[..2], &e[2..]]).expect("2x2")
}

impl<T: Real> KrausSet<T> {
    pub fn total(&self) -> T {
        self.weights.iter().flatten().copied().sum()
    }

    /// `(weight, O)` for every nonzero weight, with `O = τ_i ⊗ τ_j` in real form.
    pub fn operators(&self) -> Vec<(T, RealMatrix<T>)> {
        let mut out = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                let w = self.weights[i][j];
                if w != T::zero() {
                    out.push((w, kron(&real_pauli(i), &real_pauli(j))));
                }
            }
        }
        out
    }

    /// `Σ p_ij Oᵀ O`, which equals the identity for a trace-preserving channel.
    pub fn completeness(&self) -> RealMatrix<T> {
        self.operators()
            .into_iter()
            .fold(RealMatrix::zeros(4, 4), |acc, (w, o)| &acc + &(&o.transpose() * &o).scale(w))
    }
}

/// Correlated dephasing weights `p_ij = (1 - mu) p_i p_j + mu p_i δ_ij`
/// with marginals `p_0 = 1 - p`, `p_z = p`.
pub fn kraus_weights<T: Real>(p: T, mu: T) -> Result<KrausSet<T>> {
    let unit = T::zero()..=T::one();
    if !unit.contains(&p) || !unit.contains(&mu) {
        return Err(Error::InvalidParameter(format!("p = {p}, mu = {mu} must lie in [0, 1]")));
    }
    let marginal = [T::one() - p, p];
    let idx = [PAULI_0, PAULI_Z];
    let mut weights = [[T::zero(); 4]; 4];
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            let corr = if a == b { mu * marginal[a] } else { T::zero() };
            weights[i][j] = (T::one() - mu) * marginal[a] * marginal[b] + corr;
        }
    }
    Ok(KrausSet { weights })
}

/// `Σ p_ij O ρ Oᵀ` by explicit 4×4 conjugation, read back in X form.
pub fn apply_channel<T: Real>(rho: &XState<T>, k: &KrausSet<T>) -> XState<T> {
    let r = rho.to_matrix();
    let out = k
        .operators()
        .into_iter()
        .fold(RealMatrix::zeros(4, 4), |acc, (w, o)| &acc + &(&(&o * &r) * &o.transpose()).scale(w));
    let half = T::lit(0.5);
    XState {
        r11: out[(0, 0)],
        r14: (out[(0, 3)] + out[(3, 0)]) * half,
        r22: (out[(1, 1)] + out[(2, 2)]) * half,
        r23: (out[(1, 2)] + out[(2, 1)]) * half,
        r44: out[(3, 3)],
    }
}

/// Coherence factor `κ = G² + (1 - G²) mu`, with `G = 1 - 2p` taken from
/// the clamped flip probability.
pub fn kappa_factor<T: Real>(t: T, m: &NoiseModel<T>) -> T {
    let p = flip_probability(t, m).p;
    let g = T::one() - (p + p);
    let g2 = g * g;
    g2 + (T::one() - g2) * m.mu
}

/// State and partials after dephasing for time `t`; only the coherences
/// `r14`, `r23` (and their derivatives) shrink by `κ(t)`.
pub fn evolve<T: Real>(
    rho0: &XState<T>,
    d_alpha0: &XStatePartials<T>,
    d_phi0: &XStatePartials<T>,
    t: T,
    m: &NoiseModel<T>,
) -> (XState<T>, XStatePartials<T>, XStatePartials<T>) {
    let kappa = kappa_factor(t, m);
    let rho = XState { r14: rho0.r14 * kappa, r23: rho0.r23 * kappa, ..*rho0 };
    let scale = |d: &XStatePartials<T>| XStatePartials { dr14: d.dr14 * kappa, dr23: d.dr23 * kappa, ..*d };
    (rho, scale(d_alpha0), scale(d_phi0))
}

/// Per-time diagnostics of a [`Trajectory`].
#[derive(Clone, Debug, PartialEq)]
pub struct PointFlags {
    /// Flip probability had to be clamped into `[0, 1]`.
    pub clamped: bool,
    /// Evolved state passed the X-state trace and positivity checks.
    pub physical: bool,
    /// QFIM evaluation failed; bounds are reported as undefined.
    pub error: Option<Error>,
}

/// Time-resolved precision bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub kappa: Vec<T>,
    pub qfim: Vec<QfiMatrix<T>>,
    pub bounds: Vec<VarianceBounds<T>>,
    pub flags: Vec<PointFlags>,
}

/// Bounds that mark every entry undefined.
pub fn undefined_bounds<T: Real>() -> VarianceBounds<T> {
    let inf = T::infinity();
    VarianceBounds { var_sim_alpha: inf, var_sim_phi: inf, var_ind_alpha: inf, var_ind_phi: inf, gamma_ratio: T::nan() }
}

/// Evolves one parameter point over `times` (non-negative, strictly increasing).
pub fn trajectory<T: Real>(p: &PhysicsParams<T>, phi: T, m: &NoiseModel<T>, times: &[T]) -> Result<Trajectory<T>> {
    if times.iter().any(|t| !t.is_finite() || *t < T::zero()) {
        return Err(Error::InvalidParameter("times must be finite and non-negative".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("times must be strictly increasing".into()));
    }
    let (rho0, da0, dp0) = state_with_partials(p, phi)?;
    let tol = T::lit(1e-12);
    let mut out = Trajectory {
        times: times.to_vec(),
        kappa: Vec::with_capacity(times.len()),
        qfim: Vec::with_capacity(times.len()),
        bounds: Vec::with_capacity(times.len()),
        flags: Vec::with_capacity(times.len()),
    };
    for &t in times {
        let clamped = flip_probability(t, m).clamped;
        let (rho, da, dp) = evolve(&rho0, &da0, &dp0, t, m);
        let (f, bounds, error) = match qfim_vectorized(&rho, &da, &dp) {
            Ok(f) => (f, variance_bounds(&f), None),
            Err(e) => (QfiMatrix { f_aa: T::nan(), f_ap: T::nan(), f_pp: T::nan() }, undefined_bounds(), Some(e)),
        };
        out.kappa.push(kappa_factor(t, m));
        out.qfim.push(f);
        out.bounds.push(bounds);
        out.flags.push(PointFlags { clamped, physical: rho.is_physical(tol), error });
    }
    Ok(out)
}
