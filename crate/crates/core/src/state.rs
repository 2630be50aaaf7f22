//! Spin state of a baryon-antibaryon pair and its parameter derivatives.
//!
//! The state is described by the decay asymmetry `alpha`, the production
//! angle `phi` and two correlation parameters `beta`, `gamma`. In the
//! constrained parametrization `beta` and `gamma` follow from `alpha` and the
//! relative phase `delta_phi`; in the free one they are set directly.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matkit::{eig_sym, kron, RealMatrix};
use crate::scalar::Real;

/// Denominators `1 + alpha cos²(phi)` at or below this are rejected.
pub const DENOMINATOR_TOL: f64 = 1e-12;

/// How `beta` and `gamma` are obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Parametrization<T> {
    /// `beta = sqrt(1 - alpha²) sin(delta_phi)`, `gamma = sqrt(1 - alpha²) cos(delta_phi)`.
    Constrained { delta_phi: T },
    /// User-supplied `beta` and `gamma`, held fixed under differentiation.
    Free { beta: T, gamma: T },
}

/// Production parameters of the pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicsParams<T> {
    pub alpha: T,
    pub mode: Parametrization<T>,
}

impl<T: Real> PhysicsParams<T> {
    pub fn constrained(alpha: T, delta_phi: T) -> Result<Self> {
        check_alpha(alpha)?;
        if !delta_phi.is_finite() || delta_phi.abs() > T::PI() {
            return Err(Error::InvalidParameter(format!("delta_phi = {delta_phi} outside [-pi, pi]")));
        }
        Ok(Self { alpha, mode: Parametrization::Constrained { delta_phi } })
    }

    /// Free parametrization; no relation between `alpha`, `beta`, `gamma` is imposed.
    pub fn free(alpha: T, beta: T, gamma: T) -> Result<Self> {
        check_alpha(alpha)?;
        if !beta.is_finite() || !gamma.is_finite() {
            return Err(Error::InvalidParameter("beta and gamma must be finite".into()));
        }
        Ok(Self { alpha, mode: Parametrization::Free { beta, gamma } })
    }

    pub fn is_constrained(&self) -> bool {
        matches!(self.mode, Parametrization::Constrained { .. })
    }

    /// `(beta, gamma)` implied by `alpha` and `delta_phi`.
    pub fn derived_params(&self) -> Result<(T, T)> {
        match self.mode {
            Parametrization::Constrained { delta_phi } => {
                let root = root_one_minus_sq(self.alpha);
                Ok((root * delta_phi.sin(), root * delta_phi.cos()))
            }
            Parametrization::Free { .. } => Err(Error::ModeMismatch),
        }
    }

    /// `(beta, gamma)` in either parametrization.
    pub fn beta_gamma(&self) -> (T, T) {
        match self.mode {
            Parametrization::Constrained { .. } => self.derived_params().expect("constrained"),
            Parametrization::Free { beta, gamma } => (beta, gamma),
        }
    }

    /// Same parametrization with a different `alpha`.
    pub fn with_alpha(&self, alpha: T) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self { alpha, mode: self.mode })
    }
}

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if !alpha.is_finite() || alpha.abs() > T::one() {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} outside [-1, 1]")));
    }
    Ok(())
}

fn root_one_minus_sq<T: Real>(x: T) -> T {
    (T::one() - x * x).max(T::zero()).sqrt()
}

/// Hyperon-pair channels with measured central values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Channel {
    Lambda,
    SigmaPlus,
    XiMinus,
    XiZero,
}

impl Channel {
    pub const ALL: [Channel; 4] = [Channel::Lambda, Channel::SigmaPlus, Channel::XiMinus, Channel::XiZero];

    /// `(alpha, delta_phi)` central values.
    pub fn values(self) -> (f64, f64) {
        match self {
            Channel::Lambda => (0.475, 0.752),
            Channel::SigmaPlus => (-0.508, -0.270),
            Channel::XiMinus => (0.586, 1.213),
            Channel::XiZero => (0.514, 1.168),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Channel::Lambda => "Lambda",
            Channel::SigmaPlus => "SigmaPlus",
            Channel::XiMinus => "XiMinus",
            Channel::XiZero => "XiZero",
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        match key.as_str() {
            "lambda" => Ok(Channel::Lambda),
            "sigmaplus" | "sigma" => Ok(Channel::SigmaPlus),
            "ximinus" => Ok(Channel::XiMinus),
            "xizero" | "xi0" => Ok(Channel::XiZero),
            _ => Err(Error::UnknownChannel(s.to_string())),
        }
    }
}

/// Constrained parameters of a built-in channel.
pub fn preset_channel<T: Real>(channel: Channel) -> PhysicsParams<T> {
    let (alpha, dphi) = channel.values();
    PhysicsParams::constrained(T::lit(alpha), T::lit(dphi)).expect("table values are in range")
}

/// Looks a channel up by name.
pub fn preset_by_name<T: Real>(name: &str) -> Result<PhysicsParams<T>> {
    Ok(preset_channel(name.parse()?))
}

/// Named channel entry read from a preset file.
#[derive(Clone, Debug, PartialEq)]
pub struct PresetEntry<T> {
    pub name: String,
    pub params: PhysicsParams<T>,
}

/// Parses a preset file: one `name alpha_psi delta_phi` triple per line,
/// `#` starts a comment, blank lines are ignored.
pub fn parse_presets<T: Real>(text: &str) -> Result<Vec<PresetEntry<T>>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::PresetParse { line, message: format!("expected 3 fields, found {}", fields.len()) });
        }
        let num = |s: &str| -> Result<T> {
            s.parse::<f64>()
                .map(T::lit)
                .map_err(|e| Error::PresetParse { line, message: format!("`{s}`: {e}") })
        };
        let params = PhysicsParams::constrained(num(fields[1])?, num(fields[2])?)
            .map_err(|e| Error::PresetParse { line, message: e.to_string() })?;
        out.push(PresetEntry { name: fields[0].to_string(), params });
    }
    Ok(out)
}

/// Production spin-correlation matrix over the Pauli basis `(1, x, y, z)`.
///
/// Only the entries allowed by the production mechanism are stored;
/// `S00 = 1`, `S0y = Sy0`, `Sxz = Szx`, everything else vanishes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinCorrelationMatrix<T> {
    pub s0y: T,
    pub sxx: T,
    pub sxz: T,
    pub syy: T,
    pub szz: T,
}

impl<T: Real> SpinCorrelationMatrix<T> {
    pub fn to_matrix(&self) -> RealMatrix<T> {
        let z = T::zero();
        let o = T::one();
        RealMatrix::from_rows(&[
            &[o, z, self.s0y, z],
            &[z, self.sxx, z, self.sxz],
            &[self.s0y, z, self.syy, z],
            &[z, self.sxz, z, self.szz],
        ])
        .expect("4x4")
    }
}

struct Trig<T> {
    c: T,
    s: T,
    d: T,
}

fn trig<T: Real>(alpha: T, phi: T) -> Result<Trig<T>> {
    if !phi.is_finite() || phi < T::zero() || phi > T::PI() + T::PI() * T::epsilon() {
        return Err(Error::InvalidParameter(format!("phi = {phi} outside [0, pi]")));
    }
    let (s, c) = phi.sin_cos();
    let d = T::one() + alpha * c * c;
    if d <= T::lit(DENOMINATOR_TOL) {
        return Err(Error::SingularDenominator {
            context: "1 + alpha cos^2(phi)",
            value: d.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(Trig { c, s, d })
}

pub fn correlation_matrix<T: Real>(p: &PhysicsParams<T>, phi: T) -> Result<SpinCorrelationMatrix<T>> {
    let Trig { c, s, d } = trig(p.alpha, phi)?;
    let (beta, gamma) = p.beta_gamma();
    let a = p.alpha;
    Ok(SpinCorrelationMatrix {
        s0y: beta * c * s / d,
        sxx: s * s / d,
        sxz: gamma * c * s / d,
        syy: (a + c * c) / d,
        szz: -a * s * s / d,
    })
}

/// Transverse polarization `beta cos(phi) sin(phi) / (1 + alpha cos²(phi))`.
pub fn polarization<T: Real>(p: &PhysicsParams<T>, phi: T) -> Result<T> {
    let Trig { c, s, d } = trig(p.alpha, phi)?;
    Ok(p.beta_gamma().0 * c * s / d)
}

/// Coefficients of the state once rotated into X form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateCoeffs<T> {
    /// Equal single-particle polarizations along the quantization axis.
    pub a_z0: T,
    pub b_xx: T,
    pub b_yy: T,
    pub b_zz: T,
}

/// `sqrt((alpha + cos 2phi)² + gamma² sin² 2phi)`.
fn mixing_root<T: Real>(alpha: T, gamma: T, phi: T) -> T {
    let u = alpha + (phi + phi).cos();
    let w = (phi + phi).sin();
    (u * u + gamma * gamma * w * w).sqrt()
}

pub fn xstate_coeffs<T: Real>(p: &PhysicsParams<T>, phi: T) -> Result<XStateCoeffs<T>> {
    let Trig { c, s, d } = trig(p.alpha, phi)?;
    let (beta, gamma) = p.beta_gamma();
    let a = p.alpha;
    let root = mixing_root(a, gamma, phi);
    let two_d = d + d;
    Ok(XStateCoeffs {
        a_z0: beta * s * c / d,
        b_xx: (T::one() + a + root) / two_d,
        b_yy: (T::one() + a - root) / two_d,
        b_zz: -a * s * s / d,
    })
}

/// Real symmetric two-qubit X state
///
/// ```text
/// | r11  0    0    r14 |
/// | 0    r22  r23  0   |
/// | 0    r23  r22  0   |
/// | r14  0    0    r44 |
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XState<T> {
    pub r11: T,
    pub r14: T,
    pub r22: T,
    pub r23: T,
    pub r44: T,
}

impl<T: Real> XState<T> {
    pub fn maximally_mixed() -> Self {
        let q = T::lit(0.25);
        Self { r11: q, r14: T::zero(), r22: q, r23: T::zero(), r44: q }
    }

    pub fn to_matrix(&self) -> RealMatrix<T> {
        x_matrix(self.r11, self.r14, self.r22, self.r23, self.r44)
    }

    pub fn trace(&self) -> T {
        self.r11 + self.r22 + self.r22 + self.r44
    }

    /// Eigenvalues in closed form, descending.
    pub fn eigenvalues(&self) -> [T; 4] {
        let half = T::lit(0.5);
        let mean = (self.r11 + self.r44) * half;
        let dev = ((self.r11 - self.r44) * half).hypot(self.r14);
        let mut ev = [mean + dev, mean - dev, self.r22 + self.r23.abs(), self.r22 - self.r23.abs()];
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
        ev
    }

    /// Unit trace and positivity (`r11 r44 >= r14²`, `r22 >= |r23|`, non-negative diagonal) within `tol`.
    pub fn is_physical(&self, tol: T) -> bool {
        (self.trace() - T::one()).abs() <= tol
            && self.r11 >= -tol
            && self.r44 >= -tol
            && self.r11 * self.r44 - self.r14 * self.r14 >= -tol
            && self.r22 - self.r23.abs() >= -tol
    }
}

/// Which parameter a derivative is taken with respect to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parameter {
    Alpha,
    Phi,
}

/// Derivative of every independent X-state entry with respect to one parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStatePartials<T> {
    pub parameter: Parameter,
    pub dr11: T,
    pub dr14: T,
    pub dr22: T,
    pub dr23: T,
    pub dr44: T,
}

impl<T: Real> XStatePartials<T> {
    pub fn zero(parameter: Parameter) -> Self {
        let z = T::zero();
        Self { parameter, dr11: z, dr14: z, dr22: z, dr23: z, dr44: z }
    }

    pub fn to_matrix(&self) -> RealMatrix<T> {
        x_matrix(self.dr11, self.dr14, self.dr22, self.dr23, self.dr44)
    }

    pub fn trace(&self) -> T {
        self.dr11 + self.dr22 + self.dr22 + self.dr44
    }
}

fn x_matrix<T: Real>(a: T, d: T, b: T, c: T, e: T) -> RealMatrix<T> {
    let z = T::zero();
    RealMatrix::from_rows(&[&[a, z, z, d], &[z, b, c, z], &[z, c, b, z], &[d, z, z, e]]).expect("4x4")
}

pub fn density_matrix<T: Real>(c: &XStateCoeffs<T>) -> XState<T> {
    let q = T::lit(0.25);
    let one = T::one();
    let two_a = c.a_z0 + c.a_z0;
    XState {
        r11: (one + two_a + c.b_zz) * q,
        r14: (c.b_xx - c.b_yy) * q,
        r22: (one - c.b_zz) * q,
        r23: (c.b_xx + c.b_yy) * q,
        r44: (one - two_a + c.b_zz) * q,
    }
}

/// `density_matrix(xstate_coeffs(p, phi))`.
pub fn xstate<T: Real>(p: &PhysicsParams<T>, phi: T) -> Result<XState<T>> {
    Ok(density_matrix(&xstate_coeffs(p, phi)?))
}

/// Analytic derivative of the X-state entries.
///
/// Written in terms of the building blocks `A = a_z0`, `R/D` (from
/// `b_xx - b_yy`), `(1 + alpha)/D` (from `b_xx + b_yy`) and `b_zz`. In the
/// constrained parametrization the alpha derivative also flows through
/// `beta(alpha)` and `gamma(alpha)`; where `R` vanishes its (one-sided)
/// derivative is taken as zero.
pub fn density_partials<T: Real>(p: &PhysicsParams<T>, phi: T, parameter: Parameter) -> Result<XStatePartials<T>> {
    let Trig { c, s, d } = trig(p.alpha, phi)?;
    let (beta, gamma) = p.beta_gamma();
    let a = p.alpha;
    let one = T::one();
    let two = T::lit(2.0);
    let q = T::lit(0.25);

    let sin2 = (phi + phi).sin();
    let cos2 = (phi + phi).cos();
    let u = a + cos2;
    let root = (u * u + gamma * gamma * sin2 * sin2).sqrt();
    let amp = beta * s * c / d;
    let bzz = -a * s * s / d;

    // (dA, dR, dbzz, dD) for the chosen parameter
    let (d_amp, d_root, d_bzz, d_d) = match parameter {
        Parameter::Phi => {
            let d_d = -a * sin2;
            let d_amp = beta * cos2 / d - amp * d_d / d;
            let d_root = if root > T::zero() {
                (u * (-two * sin2) + gamma * gamma * sin2 * (two * cos2)) / root
            } else {
                T::zero()
            };
            let d_bzz = -a * sin2 / d - bzz * d_d / d;
            (d_amp, d_root, d_bzz, d_d)
        }
        Parameter::Alpha => {
            let d_d = c * c;
            let mut d_amp = -amp * d_d / d;
            let mut d_root = if root > T::zero() { u / root } else { T::zero() };
            if let Parametrization::Constrained { delta_phi } = p.mode {
                let rt = root_one_minus_sq(a);
                let amp_coeff = s * c * delta_phi.sin() / d;
                if amp_coeff.abs() > T::epsilon() {
                    if rt <= T::lit(DENOMINATOR_TOL) {
                        return Err(Error::SingularDenominator {
                            context: "sqrt(1 - alpha^2) in constrained alpha derivative",
                            value: rt.to_f64().unwrap_or(f64::NAN),
                        });
                    }
                    d_amp = d_amp - amp_coeff * a / rt;
                }
                // gamma dgamma/dalpha = -alpha cos²(delta_phi)
                if root > T::zero() {
                    let cd = delta_phi.cos();
                    d_root = d_root - sin2 * sin2 * a * cd * cd / root;
                }
            }
            let d_bzz = -s * s / (d * d);
            (d_amp, d_root, d_bzz, d_d)
        }
    };

    let d_root_over_d = d_root / d - root * d_d / (d * d);
    let d_sum_over_d = -(one + a) * d_d / (d * d) + if parameter == Parameter::Alpha { one / d } else { T::zero() };
    let two_d_amp = d_amp + d_amp;
    Ok(XStatePartials {
        parameter,
        dr11: (two_d_amp + d_bzz) * q,
        dr14: d_root_over_d * q,
        dr22: -d_bzz * q,
        dr23: d_sum_over_d * q,
        dr44: (-two_d_amp + d_bzz) * q,
    })
}

/// State and both partials at one parameter point.
pub fn state_with_partials<T: Real>(
    p: &PhysicsParams<T>,
    phi: T,
) -> Result<(XState<T>, XStatePartials<T>, XStatePartials<T>)> {
    Ok((
        xstate(p, phi)?,
        density_partials(p, phi, Parameter::Alpha)?,
        density_partials(p, phi, Parameter::Phi)?,
    ))
}

/// Real and imaginary parts of the Pauli matrices `1, x, y, z`.
fn pauli<T: Real>() -> [(RealMatrix<T>, RealMatrix<T>); 4] {
    let z = T::zero();
    let o = T::one();
    let m = |a: [T; 4]| RealMatrix::from_rows(&[&a[..2], &a[2..]]).expect("2x2");
    [
        (m([o, z, z, o]), m([z; 4])),
        (m([z, o, o, z]), m([z; 4])),
        (m([z; 4]), m([z, -o, o, z])),
        (m([o, z, z, -o]), m([z; 4])),
    ]
}

/// Spectrum of `(1/4) Σ S_μν τ_μ ⊗ τ_ν` built straight from Pauli tensors.
///
/// The Hermitian matrix is embedded as the real symmetric `[[Re, -Im], [Im, Re]]`,
/// whose eigenvalues are those of the original, each twice. The uncoupled
/// diagonal correlation is placed on the polarization axis (`y`) and the
/// `(alpha + cos²phi)/D` entry on `z`, next to the `x` coupling; this is the
/// axis assignment under which the X form is a local rotation of the state.
///
/// Since X form and Pauli sum are related by local unitaries, the result must
/// equal [`XState::eigenvalues`].
pub fn pauli_sum_spectrum<T: Real>(p: &PhysicsParams<T>, phi: T) -> Result<Vec<T>> {
    if !p.is_constrained() {
        return Err(Error::ModeMismatch);
    }
    let s = correlation_matrix(p, phi)?;
    let mut coeff = [[T::zero(); 4]; 4];
    coeff[0][0] = T::one();
    coeff[0][2] = s.s0y;
    coeff[2][0] = s.s0y;
    coeff[1][1] = s.sxx;
    coeff[1][3] = s.sxz;
    coeff[3][1] = s.sxz;
    coeff[2][2] = s.szz;
    coeff[3][3] = s.syy;
    let spectrum = pauli_sum_eigenvalues(&coeff)?;
    Ok(spectrum)
}

/// Eigenvalues, descending, of `(1/4) Σ coeff[μ][ν] τ_μ ⊗ τ_ν`.
pub fn pauli_sum_eigenvalues<T: Real>(coeff: &[[T; 4]; 4]) -> Result<Vec<T>> {
    let paulis = pauli::<T>();
    let mut re = RealMatrix::zeros(4, 4);
    let mut im = RealMatrix::zeros(4, 4);
    for (mu, (ar, ai)) in paulis.iter().enumerate() {
        for (nu, (br, bi)) in paulis.iter().enumerate() {
            let w = coeff[mu][nu];
            if w == T::zero() {
                continue;
            }
            // (A + iB) ⊗ (C + iD) = (A⊗C - B⊗D) + i(A⊗D + B⊗C)
            let real = &kron(ar, br) - &kron(ai, bi);
            let imag = &kron(ar, bi) + &kron(ai, br);
            re = &re + &real.scale(w);
            im = &im + &imag.scale(w);
        }
    }
    let q = T::lit(0.25);
    let (re, im) = (re.scale(q), im.scale(q));
    let embed = RealMatrix::from_fn(8, 8, |i, j| match (i < 4, j < 4) {
        (true, true) => re[(i, j)],
        (true, false) => -im[(i, j - 4)],
        (false, true) => im[(i - 4, j)],
        (false, false) => re[(i - 4, j - 4)],
    });
    let eig = eig_sym(&embed)?;
    Ok(eig.values.iter().step_by(2).copied().collect())
}
