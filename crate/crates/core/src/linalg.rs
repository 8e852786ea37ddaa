//! Small dense Hermitian linear algebra.
//!
//! The matrices in this crate are at most a few antennas wide, so the
//! eigensolver is a cyclic complex Jacobi iteration: simple, unconditionally
//! convergent for Hermitian input, and accurate to a few ulps of `‖A‖`.

use num_complex::Complex64;

use crate::{CMatrix, Error, Result};

const MAX_SWEEPS: usize = 64;

/// Relative cutoff below which an eigenvalue is treated as zero when
/// forming pseudo-inverses.
pub const PINV_RELATIVE_CUTOFF: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in non-increasing order; ties keep the original index order.
    pub values: Vec<f64>,
    /// Unit-norm eigenvectors as columns, aligned with `values`.
    pub vectors: CMatrix,
}

/// `(A + Aᴴ) / 2`.
pub fn hermitize(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()).scale(0.5)
}

pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖UᴴU − I‖_F`.
pub fn orthonormality_error(u: &CMatrix) -> f64 {
    let gram = u.adjoint() * u;
    let eye = CMatrix::identity(u.ncols(), u.ncols());
    frobenius(&(gram - eye))
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized first, so tiny rounding asymmetry is harmless.
pub fn hermitian_eigen(a: &CMatrix) -> Result<HermitianEigen> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Shape(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric("non-finite entry in Hermitian matrix".into()));
    }
    let mut m = hermitize(a);
    let mut v = CMatrix::identity(n, n);
    let scale = frobenius(&m);

    let mut converged = n < 2 || scale == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        if off_diagonal_norm(&m) <= f64::EPSILON * 1e-2 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&m) > 1e-12 * scale {
        return Err(Error::Numeric("Jacobi iteration did not converge".into()));
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal eigenvalues stay in index order
    order.sort_by(|&i, &j| m[(j, j)].re.partial_cmp(&m[(i, i)].re).unwrap());
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// One complex Jacobi rotation annihilating `m[(p, q)]`.
///
/// The rotation is `J = D R` with `D = diag(1, e^{-iφ})` making the pivot
/// real and `R` the classical real Jacobi rotation.
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    if abs <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        m[(p, q)] = Complex64::new(0.0, 0.0);
        m[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase_conj = (apq / abs).conj();
    let theta = (aqq - app) / (2.0 * abs);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = phase_conj * (-s);
    let jqq = phase_conj * c;
    let n = m.nrows();

    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * jpp + akq * jqp;
        m[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        m[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    m[(p, q)] = Complex64::new(0.0, 0.0);
    m[(q, p)] = Complex64::new(0.0, 0.0);
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Eigenvalues counted as nonzero by the pseudo-inverse cutoff, with their
/// eigenvector columns.
fn significant_modes(eig: &HermitianEigen) -> Vec<usize> {
    let max = eig.values.iter().fold(0.0_f64, |a, &b| a.max(b.abs()));
    if max == 0.0 {
        return Vec::new();
    }
    let cutoff = PINV_RELATIVE_CUTOFF * max;
    (0..eig.values.len())
        .filter(|&i| eig.values[i].abs() > cutoff)
        .collect()
}

/// Moore–Penrose pseudo-inverse of a Hermitian matrix.
pub fn pinv_hermitian(a: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eigen(a)?;
    let n = a.nrows();
    let mut out = CMatrix::zeros(n, n);
    for i in significant_modes(&eig) {
        let col = eig.vectors.column(i);
        out += (col * col.adjoint()).scale(1.0 / eig.values[i]);
    }
    Ok(out)
}

/// `tr(A†)` for Hermitian `A`, or `None` when `A` is numerically zero.
pub fn pinv_trace(a: &CMatrix) -> Result<Option<f64>> {
    let eig = hermitian_eigen(a)?;
    let modes = significant_modes(&eig);
    if modes.is_empty() {
        return Ok(None);
    }
    Ok(Some(modes.iter().map(|&i| 1.0 / eig.values[i]).sum()))
}
