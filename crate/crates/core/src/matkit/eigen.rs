use super::RealMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `a = V diag(λ) Vᵀ` of a real symmetric matrix.
#[derive(Clone, Debug)]
pub struct SymEigen<T> {
    /// Eigenvalues in descending order.
    pub values: Vec<T>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: RealMatrix<T>,
}

impl<T: Real> SymEigen<T> {
    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<T> {
        (0..self.vectors.rows()).map(|i| self.vectors[(i, k)]).collect()
    }

    /// `V diag(f(λ)) Vᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(T) -> T) -> RealMatrix<T> {
        let n = self.values.len();
        let fl: Vec<T> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        RealMatrix::from_fn(n, n, |i, j| (0..n).map(|k| v[(i, k)] * fl[k] * v[(j, k)]).sum())
    }

    pub fn reconstruct(&self) -> RealMatrix<T> {
        self.reconstruct_with(|l| l)
    }
}

fn check_symmetric<T: Real>(a: &RealMatrix<T>) -> Result<()> {
    let asym = a.asymmetry();
    if asym > T::sym_tol() {
        return Err(Error::NotSymmetric { asymmetry: asym.to_f64().unwrap_or(f64::INFINITY) });
    }
    Ok(())
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Rotations stop once the off-diagonal Frobenius norm falls below machine
/// epsilon times the norm of the input. Exact zeros are never rotated, so a
/// block structure in the input survives untouched.
pub fn eig_sym<T: Real>(a: &RealMatrix<T>) -> Result<SymEigen<T>> {
    check_symmetric(a)?;
    let n = a.rows();
    let mut m = a.symmetrized();
    let mut v = RealMatrix::identity(n);
    let tol = T::epsilon() * m.frobenius_norm();
    let one = T::one();
    let half = T::lit(0.5);

    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&m);
        if off <= tol || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) * half / apq;
                let t = if theta.abs() > T::lit(1e150) {
                    half / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + one).sqrt())
                };
                let c = one / (t * t + one).sqrt();
                let s = t * c;
                let tau = s / (one + c);

                m[(p, p)] = m[(p, p)] - t * apq;
                m[(q, q)] = m[(q, q)] + t * apq;
                m[(p, q)] = T::zero();
                m[(q, p)] = T::zero();
                for k in 0..n {
                    if k != p && k != q {
                        let g = m[(k, p)];
                        let h = m[(k, q)];
                        let kp = g - s * (h + g * tau);
                        let kq = h + s * (g - h * tau);
                        m[(k, p)] = kp;
                        m[(p, k)] = kp;
                        m[(k, q)] = kq;
                        m[(q, k)] = kq;
                    }
                    let g = v[(k, p)];
                    let h = v[(k, q)];
                    v[(k, p)] = g - s * (h + g * tau);
                    v[(k, q)] = h + s * (g - h * tau);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].partial_cmp(&m[(i, i)]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&k| m[(k, k)]).collect();
    let vectors = RealMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SymEigen { values, vectors })
}

fn off_diagonal_norm<T: Real>(m: &RealMatrix<T>) -> T {
    let n = m.rows();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc + m[(i, j)] * m[(i, j)];
            }
        }
    }
    acc.sqrt()
}

/// Moore-Penrose pseudo-inverse of a symmetric positive semidefinite matrix.
///
/// Eigenvalues at or below `rank_tol · λ_max` are treated as zero. An
/// eigenvalue below `-rank_tol · λ_max` is reported as [`Error::NotPsd`].
pub fn pinv_sym<T: Real>(a: &RealMatrix<T>, rank_tol: T) -> Result<RealMatrix<T>> {
    let eig = eig_sym(a)?;
    let lmax = eig.values.first().copied().unwrap_or(T::zero());
    let lmin = eig.values.last().copied().unwrap_or(T::zero());
    if lmax <= T::zero() {
        if lmin < T::zero() {
            return Err(Error::NotPsd { eigenvalue: lmin.to_f64().unwrap_or(f64::NAN) });
        }
        return Ok(RealMatrix::zeros(a.rows(), a.cols()));
    }
    let cut = rank_tol * lmax;
    if lmin < -cut {
        return Err(Error::NotPsd { eigenvalue: lmin.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(eig.reconstruct_with(|l| if l > cut { l.recip() } else { T::zero() }))
}

/// Matrix exponential of a symmetric matrix through its eigendecomposition.
pub fn expm_sym<T: Real>(a: &RealMatrix<T>) -> Result<RealMatrix<T>> {
    Ok(eig_sym(a)?.reconstruct_with(|l| l.exp()))
}
