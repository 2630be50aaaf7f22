//! Quantum Fisher information over `(alpha, phi)` and the resulting
//! Cramér-Rao variance bounds.
//!
//! The primary route is the vectorized form `F_ij = 2 vec(∂_i ρ)ᵀ Λ⁺ vec(∂_j ρ)`
//! with `Λ = ρᵀ ⊗ I + I ⊗ ρ`. Spectral, eigenbasis-integral and SLD-based
//! evaluations are provided as independent cross-checks, alongside the
//! closed-form `Λ⁺` and SLD entries for undamped X states.

use crate::error::{Error, Result};
use crate::matkit::{dot, eig_sym, kron, pinv_sym, vec, RealMatrix};
use crate::scalar::Real;
use crate::state::{XState, XStatePartials};

/// Fisher determinants and diagonals at or below this are treated as zero.
pub const SINGULAR_QFIM_TOL: f64 = 1e-14;

/// Closed-form denominators at or below this are treated as zero.
pub const CLOSED_FORM_TOL: f64 = 1e-12;

/// Symmetric 2×2 QFIM over `(alpha, phi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QfiMatrix<T> {
    pub f_aa: T,
    pub f_ap: T,
    pub f_pp: T,
}

impl<T: Real> QfiMatrix<T> {
    pub fn zero() -> Self {
        Self { f_aa: T::zero(), f_ap: T::zero(), f_pp: T::zero() }
    }

    fn from_dense(f: &RealMatrix<T>) -> Self {
        Self { f_aa: f[(0, 0)], f_ap: (f[(0, 1)] + f[(1, 0)]) * T::lit(0.5), f_pp: f[(1, 1)] }
    }

    pub fn det(&self) -> T {
        self.f_aa * self.f_pp - self.f_ap * self.f_ap
    }

    pub fn to_matrix(&self) -> RealMatrix<T> {
        RealMatrix::from_rows(&[&[self.f_aa, self.f_ap], &[self.f_ap, self.f_pp]]).expect("2x2")
    }

    /// Non-negative diagonal and determinant within `tol`.
    pub fn is_psd(&self, tol: T) -> bool {
        self.f_aa >= -tol && self.f_pp >= -tol && self.det() >= -tol
    }

    /// Largest entry difference relative to the largest entry of `self` (absolute below 1).
    pub fn relative_diff(&self, other: &Self) -> T {
        let scale = self.f_aa.abs().max(self.f_ap.abs()).max(self.f_pp.abs()).max(T::one());
        let diff = (self.f_aa - other.f_aa)
            .abs()
            .max((self.f_ap - other.f_ap).abs())
            .max((self.f_pp - other.f_pp).abs());
        diff / scale
    }
}

/// Symmetric logarithmic derivative in X form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SldOperator<T> {
    pub l11: T,
    pub l14: T,
    pub l22_diag: T,
    pub l22_off: T,
    pub l44: T,
}

impl<T: Real> SldOperator<T> {
    pub fn zero() -> Self {
        let z = T::zero();
        Self { l11: z, l14: z, l22_diag: z, l22_off: z, l44: z }
    }

    pub fn to_matrix(&self) -> RealMatrix<T> {
        let z = T::zero();
        RealMatrix::from_rows(&[
            &[self.l11, z, z, self.l14],
            &[z, self.l22_diag, self.l22_off, z],
            &[z, self.l22_off, self.l22_diag, z],
            &[self.l14, z, z, self.l44],
        ])
        .expect("4x4")
    }

    fn from_dense(l: &RealMatrix<T>) -> Self {
        let half = T::lit(0.5);
        Self {
            l11: l[(0, 0)],
            l14: (l[(0, 3)] + l[(3, 0)]) * half,
            l22_diag: (l[(1, 1)] + l[(2, 2)]) * half,
            l22_off: (l[(1, 2)] + l[(2, 1)]) * half,
            l44: l[(3, 3)],
        }
    }
}

/// Simultaneous and individual Cramér-Rao bounds. Undefined entries are
/// `+inf`; an undefined ratio is `NaN`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarianceBounds<T> {
    pub var_sim_alpha: T,
    pub var_sim_phi: T,
    pub var_ind_alpha: T,
    pub var_ind_phi: T,
    /// `(var_ind_alpha + var_ind_phi) / ((var_sim_alpha + var_sim_phi) / 2)`.
    pub gamma_ratio: T,
}

impl<T: Real> VarianceBounds<T> {
    pub fn simultaneous_defined(&self) -> bool {
        self.var_sim_alpha.is_finite() && self.var_sim_phi.is_finite()
    }
}

/// `Λ = ρᵀ ⊗ I + I ⊗ ρ` for any square `ρ`.
pub fn superoperator<T: Real>(rho: &RealMatrix<T>) -> RealMatrix<T> {
    let id = RealMatrix::identity(rho.rows());
    &kron(&rho.transpose(), &id) + &kron(&id, rho)
}

/// 16×16 superoperator of an X state.
pub fn build_lambda<T: Real>(rho: &XState<T>) -> RealMatrix<T> {
    superoperator(&rho.to_matrix())
}

/// Vectorized Fisher matrix for an arbitrary number of parameters.
pub fn vectorized_fisher<T: Real>(rho: &RealMatrix<T>, partials: &[RealMatrix<T>]) -> Result<RealMatrix<T>> {
    let lambda_plus = pinv_sym(&superoperator(rho), T::rank_tol())?;
    let vecs: Vec<Vec<T>> = partials.iter().map(vec).collect();
    let images = vecs.iter().map(|v| lambda_plus.matvec(v)).collect::<Result<Vec<_>>>()?;
    let two = T::lit(2.0);
    let n = partials.len();
    Ok(RealMatrix::from_fn(n, n, |i, j| two * dot(&vecs[i], &images[j])).symmetrized())
}

/// QFIM by the vectorized superoperator pseudo-inverse.
pub fn qfim_vectorized<T: Real>(
    rho: &XState<T>,
    d_alpha: &XStatePartials<T>,
    d_phi: &XStatePartials<T>,
) -> Result<QfiMatrix<T>> {
    let f = vectorized_fisher(&rho.to_matrix(), &[d_alpha.to_matrix(), d_phi.to_matrix()])?;
    Ok(QfiMatrix::from_dense(&f))
}

/// Partials rotated into the eigenbasis of `rho`, plus the eigenvalues.
fn eigenbasis<T: Real>(rho: &RealMatrix<T>, partials: &[RealMatrix<T>]) -> Result<(Vec<T>, Vec<RealMatrix<T>>)> {
    let eig = eig_sym(rho)?;
    let v = &eig.vectors;
    let vt = v.transpose();
    let rotated = partials
        .iter()
        .map(|d| vt.matmul(d)?.matmul(v))
        .collect::<Result<Vec<_>>>()?;
    Ok((eig.values, rotated))
}

/// `2 Σ_ab A_ab B_ba / (p_a + p_b)` over pairs with `p_a + p_b > cut`.
fn eigenbasis_sum<T: Real>(p: &[T], a: &RealMatrix<T>, b: &RealMatrix<T>, cut: T) -> T {
    let two = T::lit(2.0);
    let mut acc = T::zero();
    for (i, &pi) in p.iter().enumerate() {
        for (j, &pj) in p.iter().enumerate() {
            let denom = pi + pj;
            if denom > cut {
                acc = acc + two * a[(i, j)] * b[(j, i)] / denom;
            }
        }
    }
    acc
}

fn eigenbasis_fisher<T: Real>(p: &[T], rotated: &[RealMatrix<T>], cut: T) -> RealMatrix<T> {
    let n = rotated.len();
    RealMatrix::from_fn(n, n, |i, j| eigenbasis_sum(p, &rotated[i], &rotated[j], cut)).symmetrized()
}

/// Spectral Fisher matrix restricted to the support of `rho`.
pub fn spectral_fisher<T: Real>(rho: &RealMatrix<T>, partials: &[RealMatrix<T>]) -> Result<RealMatrix<T>> {
    let (p, rotated) = eigenbasis(rho, partials)?;
    let pmax = p.first().copied().unwrap_or(T::zero()).max(T::zero());
    // same cutoff as the pseudo-inverse of Λ, whose largest eigenvalue is 2 p_max
    let cut = T::rank_tol() * (pmax + pmax);
    Ok(eigenbasis_fisher(&p, &rotated, cut))
}

/// QFIM from the spectral decomposition of `rho`.
pub fn qfim_spectral<T: Real>(
    rho: &XState<T>,
    d_alpha: &XStatePartials<T>,
    d_phi: &XStatePartials<T>,
) -> Result<QfiMatrix<T>> {
    let f = spectral_fisher(&rho.to_matrix(), &[d_alpha.to_matrix(), d_phi.to_matrix()])?;
    Ok(QfiMatrix::from_dense(&f))
}

/// `2 ∫₀^∞ tr(e^{-ρt} ∂_i ρ e^{-ρt} ∂_j ρ) dt`, integrated exactly in the
/// eigenbasis. Requires a full-rank `rho`.
pub fn integral_fisher<T: Real>(rho: &RealMatrix<T>, partials: &[RealMatrix<T>]) -> Result<RealMatrix<T>> {
    let (p, rotated) = eigenbasis(rho, partials)?;
    let pmax = p.first().copied().unwrap_or(T::zero());
    let pmin = p.last().copied().unwrap_or(T::zero());
    if pmax <= T::zero() || pmin <= T::rank_tol() * pmax {
        return Err(Error::RankDeficient { eigenvalue: pmin.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(eigenbasis_fisher(&p, &rotated, T::zero()))
}

/// QFIM from the exponential-integral representation; full-rank states only.
pub fn qfim_integral<T: Real>(
    rho: &XState<T>,
    d_alpha: &XStatePartials<T>,
    d_phi: &XStatePartials<T>,
) -> Result<QfiMatrix<T>> {
    let f = integral_fisher(&rho.to_matrix(), &[d_alpha.to_matrix(), d_phi.to_matrix()])?;
    Ok(QfiMatrix::from_dense(&f))
}

/// Dense SLD, `vec L = 2 Λ⁺ vec ∂ρ`.
pub fn sld_matrix<T: Real>(rho: &RealMatrix<T>, d: &RealMatrix<T>) -> Result<RealMatrix<T>> {
    let lambda_plus = pinv_sym(&superoperator(rho), T::rank_tol())?;
    let two = T::lit(2.0);
    let v: Vec<T> = lambda_plus.matvec(&vec(d))?.into_iter().map(|x| two * x).collect();
    Ok(RealMatrix::unvec(rho.rows(), rho.cols(), &v)?.symmetrized())
}

/// SLD of an X state from the superoperator pseudo-inverse.
pub fn sld<T: Real>(rho: &XState<T>, d: &XStatePartials<T>) -> Result<SldOperator<T>> {
    Ok(SldOperator::from_dense(&sld_matrix(&rho.to_matrix(), &d.to_matrix())?))
}

/// Everything a sweep reports at one point, from a single pseudo-inverse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointAnalysis<T> {
    pub qfim: QfiMatrix<T>,
    pub sld_alpha: SldOperator<T>,
    pub sld_phi: SldOperator<T>,
    pub saturation: T,
}

/// QFIM (as `F_ij = vec(∂_i ρ)ᵀ vec(L_j)`), both SLDs and the saturation trace.
pub fn analyze_point<T: Real>(
    rho: &XState<T>,
    d_alpha: &XStatePartials<T>,
    d_phi: &XStatePartials<T>,
) -> Result<PointAnalysis<T>> {
    let r = rho.to_matrix();
    let lambda_plus = pinv_sym(&superoperator(&r), T::rank_tol())?;
    let two = T::lit(2.0);
    let va = vec(&d_alpha.to_matrix());
    let vp = vec(&d_phi.to_matrix());
    let la: Vec<T> = lambda_plus.matvec(&va)?.into_iter().map(|x| two * x).collect();
    let lp: Vec<T> = lambda_plus.matvec(&vp)?.into_iter().map(|x| two * x).collect();
    let f_ap = (dot(&va, &lp) + dot(&vp, &la)) * T::lit(0.5);
    let qfim = QfiMatrix { f_aa: dot(&va, &la), f_ap, f_pp: dot(&vp, &lp) };
    let sld_alpha = SldOperator::from_dense(&RealMatrix::unvec(4, 4, &la)?.symmetrized());
    let sld_phi = SldOperator::from_dense(&RealMatrix::unvec(4, 4, &lp)?.symmetrized());
    let saturation = saturation_trace(rho, &sld_alpha, &sld_phi);
    Ok(PointAnalysis { qfim, sld_alpha, sld_phi, saturation })
}

/// SLD from the explicit X-state solution of `∂ρ = (Lρ + ρL)/2`.
///
/// The outer block solves the 2×2 Lyapunov equation; the inner block is
/// `∂r22 / (2 r22)` in every slot. Valid only when `r22 = r23` and
/// `∂r22 = ∂r23`, which holds for undamped states.
pub fn sld_closed_form<T: Real>(rho: &XState<T>, d: &XStatePartials<T>) -> Result<SldOperator<T>> {
    check_closed_form_applicable(rho)?;
    let (a, x, b, e) = (rho.r11, rho.r14, rho.r22, rho.r44);
    let (da, dx, db, de) = (d.dr11, d.dr14, d.dr22, d.dr44);
    let outer = (a + e) * (a * e - x * x);
    nonsingular(outer, "(r11 + r44)(r11 r44 - r14²)")?;
    nonsingular(b, "r22")?;
    let two = T::lit(2.0);
    let l11 = (e * e * da - x * x * da + x * x * de + a * e * da - two * x * e * dx) / outer;
    let l14 = (e * (two * a * dx - x * da) - a * x * de) / outer;
    let l44 = (x * x * da + a * a * de - x * x * de - two * a * x * dx + a * e * de) / outer;
    let inner = db / (two * b);
    Ok(SldOperator { l11, l14, l22_diag: inner, l22_off: inner, l44 })
}

fn check_closed_form_applicable<T: Real>(rho: &XState<T>) -> Result<()> {
    if (rho.r22 - rho.r23).abs() > T::sym_tol() {
        return Err(Error::AppendixInapplicable {
            r22: rho.r22.to_f64().unwrap_or(f64::NAN),
            r23: rho.r23.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

fn nonsingular<T: Real>(value: T, _what: &'static str) -> Result<()> {
    if value.abs() <= T::lit(CLOSED_FORM_TOL) {
        return Err(Error::AppendixSingular { value: value.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(())
}

/// Largest entry of `∂ρ - (Lρ + ρL)/2`.
pub fn sld_residual<T: Real>(rho: &XState<T>, d: &XStatePartials<T>, l: &SldOperator<T>) -> T {
    let r = rho.to_matrix();
    let lm = l.to_matrix();
    let anti = &(&lm * &r) + &(&r * &lm);
    d.to_matrix().max_abs_diff(&anti.scale(T::lit(0.5)))
}

/// `F_ij = ½ tr((L_i L_j + L_j L_i) ρ)`.
pub fn qfim_from_slds<T: Real>(rho: &XState<T>, l_a: &SldOperator<T>, l_p: &SldOperator<T>) -> QfiMatrix<T> {
    let r = rho.to_matrix();
    let (a, p) = (l_a.to_matrix(), l_p.to_matrix());
    let half = T::lit(0.5);
    let sym = |x: &RealMatrix<T>, y: &RealMatrix<T>| (&(x * y) + &(y * x)).matmul(&r).expect("4x4").trace() * half;
    QfiMatrix { f_aa: sym(&a, &a), f_ap: sym(&a, &p), f_pp: sym(&p, &p) }
}

/// `tr(ρ [L_a, L_p])`; zero means the multiparameter bound is attainable.
pub fn saturation_trace<T: Real>(rho: &XState<T>, l_a: &SldOperator<T>, l_p: &SldOperator<T>) -> T {
    let r = rho.to_matrix();
    let (a, p) = (l_a.to_matrix(), l_p.to_matrix());
    let comm = &(&a * &p) - &(&p * &a);
    (&r * &comm).trace()
}

/// Variance bounds with undefined entries marked as `+inf` / `NaN`.
pub fn variance_bounds<T: Real>(f: &QfiMatrix<T>) -> VarianceBounds<T> {
    let tol = T::lit(SINGULAR_QFIM_TOL);
    let inf = T::infinity();
    let det = f.det();
    let (var_sim_alpha, var_sim_phi) = if det > tol { (f.f_pp / det, f.f_aa / det) } else { (inf, inf) };
    let var_ind_alpha = if f.f_aa > tol { f.f_aa.recip() } else { inf };
    let var_ind_phi = if f.f_pp > tol { f.f_pp.recip() } else { inf };
    let gamma_ratio = if f.f_aa > tol && f.f_pp > tol {
        let two = T::lit(2.0);
        two * det.max(T::zero()) / (f.f_aa * f.f_pp)
    } else {
        T::nan()
    };
    VarianceBounds { var_sim_alpha, var_sim_phi, var_ind_alpha, var_ind_phi, gamma_ratio }
}

/// Like [`variance_bounds`] but fails when the simultaneous bounds do not exist.
pub fn variance_bounds_strict<T: Real>(f: &QfiMatrix<T>) -> Result<VarianceBounds<T>> {
    let det = f.det();
    if det <= T::lit(SINGULAR_QFIM_TOL) {
        return Err(Error::SingularQfim { det: det.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(variance_bounds(f))
}

/// Closed-form variance slices used as references for the general machinery.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClosedForm {
    /// Simultaneous `Var(phi)` for `alpha = 1`, `beta = gamma = 0`:
    /// `(1 + cos²phi)² / (4 sin²phi)`.
    HighEnergyPhi,
    /// Simultaneous `Var(phi)` at `phi = pi/2`, `gamma = 0`: `(1 - alpha) / (2 beta²)`.
    RightAnglePhi,
    /// Simultaneous `Var(alpha)` at `phi = pi/2`, constrained: `1 - alpha²`.
    RightAngleAlpha,
    /// Simultaneous `Var(alpha)` for `alpha = beta = gamma = 0`: `1 / (1 - cos²phi)²`.
    UnpolarizedAlpha,
    /// Individual `Var(phi)` at `phi = pi/2`: `(1 - alpha) / (2 beta²)`.
    IndividualPhiRightAngle,
    /// Individual `Var(phi)` at `phi ∈ {0, pi}`: `(1 + alpha)² / (2 beta²)`.
    IndividualPhiForward,
}

/// Evaluates a closed-form slice. Arguments a slice does not use are ignored.
pub fn closed_form_variance<T: Real>(case: ClosedForm, alpha: T, beta: T, phi: T) -> Result<T> {
    let one = T::one();
    let two = T::lit(2.0);
    let tol = T::lit(CLOSED_FORM_TOL);
    let beta_sq = || -> Result<T> {
        let b2 = beta * beta;
        if b2 <= tol {
            Err(Error::DomainError("beta = 0"))
        } else {
            Ok(b2)
        }
    };
    let sin_sq = || -> Result<T> {
        let s2 = phi.sin().powi(2);
        if s2 <= tol {
            Err(Error::DomainError("sin(phi) = 0"))
        } else {
            Ok(s2)
        }
    };
    match case {
        ClosedForm::HighEnergyPhi => {
            let s2 = sin_sq()?;
            let c2 = phi.cos().powi(2);
            Ok((one + c2).powi(2) / (T::lit(4.0) * s2))
        }
        ClosedForm::RightAnglePhi | ClosedForm::IndividualPhiRightAngle => Ok((one - alpha) / (two * beta_sq()?)),
        ClosedForm::RightAngleAlpha => Ok(one - alpha * alpha),
        ClosedForm::UnpolarizedAlpha => {
            sin_sq()?;
            Ok(one / (one - phi.cos().powi(2)).powi(2))
        }
        ClosedForm::IndividualPhiForward => Ok((one + alpha).powi(2) / (two * beta_sq()?)),
    }
}

/// Closed-form `Λ⁺` of an undamped X state (`r22 = r23`), assembled entrywise.
///
/// Index pairs are 1-based positions in the 16×16 matrix; entries not listed
/// are zero.
pub fn appendix_lambda_plus<T: Real>(rho: &XState<T>) -> Result<RealMatrix<T>> {
    check_closed_form_applicable(rho)?;
    let (a, d, b, e) = (rho.r11, rho.r14, rho.r22, rho.r44);
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let outer = a * e - d * d;
    let d1 = two * (a + e) * outer;
    let d2 = outer * (two * a * b + a * e + two * b * e - d * d + four * b * b);
    nonsingular(d1, "2(r11 + r44)(r11 r44 - r14²)")?;
    nonsingular(d2, "(r11 r44 - r14²)(2ab + ae + 2be - d² + 4b²)")?;
    nonsingular(b, "r22")?;

    let mut m = RealMatrix::zeros(16, 16);
    let mut put = |pairs: &[(usize, usize)], v: T| {
        for &(i, j) in pairs {
            m[(i - 1, j - 1)] = v;
        }
    };
    let sixteen_b = T::lit(16.0) * b;

    put(&[(1, 1)], (e * e + a * e - d * d) / d1);
    put(&[(4, 4), (13, 13)], (two * a * e - d * d) / d1);
    put(&[(16, 16)], (a * a + a * e - d * d) / d1);
    put(&[(1, 4), (1, 13), (4, 1), (13, 1)], -d * e / d1);
    put(&[(1, 16), (4, 13), (13, 4), (16, 1)], d * d / d1);
    put(&[(4, 16), (16, 4), (13, 16), (16, 13)], -a * d / d1);

    put(
        &[(2, 2), (3, 3), (5, 5), (9, 9)],
        (two * b * b * e + b * e * e + two * a * b * e + a * e * e - d * d * b - d * d * e) / d2,
    );
    put(&[(2, 3), (3, 2), (5, 9), (9, 5)], -b * (d * d + e * e + two * b * e) / d2);
    put(
        &[(2, 14), (14, 2), (3, 15), (15, 3), (5, 8), (8, 5), (9, 12), (12, 9)],
        -d * (a * b + a * e + b * e - d * d + two * b * b) / d2,
    );
    let cross = d * b * (a + two * b + e) / d2;
    put(&[(2, 15), (15, 2), (3, 14), (14, 3), (5, 12), (12, 5), (9, 8), (8, 9)], cross);
    put(
        &[(8, 8), (12, 12), (14, 14), (15, 15)],
        (a * a * b + a * a * e - a * d * d + two * a * b * b + two * a * b * e - d * d * b) / d2,
    );
    put(&[(8, 12), (12, 8), (14, 15), (15, 14)], -b * (a * a + two * a * b + d * d) / d2);

    put(&[(6, 6), (7, 7), (10, 10), (11, 11)], T::lit(5.0) / sixteen_b);
    put(&[(6, 11), (11, 6), (7, 10), (10, 7)], T::lit(-3.0) / sixteen_b);
    put(
        &[(6, 7), (7, 6), (6, 10), (10, 6), (7, 11), (11, 7), (10, 11), (11, 10)],
        T::one() / sixteen_b,
    );
    Ok(m)
}
