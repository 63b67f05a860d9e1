//! Thin wrappers over the dense kernels in `faer`.

use alloc::vec::Vec;

use faer::linalg::matmul::matmul;
use faer::{c64, Accum, Mat, MatRef, Par};

use crate::error::{Error, Result};

pub(crate) type CMat = Mat<c64>;

pub(crate) const ZERO: c64 = c64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: c64 = c64 { re: 1.0, im: 0.0 };

pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// `e^{iθ}`
pub(crate) fn cis(theta: f64) -> c64 {
    c64::new(libm::cos(theta), libm::sin(theta))
}

pub(crate) fn abs(z: c64) -> f64 {
    sqrt(z.norm_sqr())
}

pub(crate) fn mul(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> CMat {
    let mut out = Mat::zeros(a.nrows(), b.ncols());
    matmul(out.as_mut(), Accum::Replace, a, b, ONE, Par::Seq);
    out
}

/// Thin SVD `m = U diag(s) V†` with singular values in non-increasing order.
///
/// The faer SVD occasionally returns non-finite factors for matrices with
/// clustered tiny singular values; those cases are retried on `m†` and then
/// on the `R` factor of a QR decomposition.
pub(crate) fn svd(m: MatRef<'_, c64>) -> Result<(CMat, Vec<f64>, CMat)> {
    if let Some(out) = try_svd(m) {
        return Ok(out);
    }
    log::debug!("SVD of {}x{} matrix failed, retrying on the adjoint", m.nrows(), m.ncols());
    if let Some((u, s, v)) = try_svd(m.adjoint().to_owned().as_ref()) {
        return Ok((v, s, u));
    }
    log::debug!("SVD of adjoint failed, retrying on the QR factor");
    let (q, r) = qr(m);
    if let Some((u, s, v)) = try_svd(r.as_ref()) {
        return Ok((mul(q.as_ref(), u.as_ref()), s, v));
    }
    Err(Error::Linalg("SVD did not converge"))
}

fn try_svd(m: MatRef<'_, c64>) -> Option<(CMat, Vec<f64>, CMat)> {
    let dec = m.thin_svd().ok()?;
    let s: Vec<f64> = dec.S().column_vector().iter().map(|x| x.re).collect();
    if !is_finite(dec.U()) || !is_finite(dec.V()) || s.iter().any(|x| !x.is_finite()) {
        return None;
    }
    Some((dec.U().to_owned(), s, dec.V().to_owned()))
}

fn is_finite(m: MatRef<'_, c64>) -> bool {
    m.col_iter().all(|c| c.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
}

/// Thin QR: `m = Q R`, `Q` with orthonormal columns.
pub(crate) fn qr(m: MatRef<'_, c64>) -> (CMat, CMat) {
    let dec = m.qr();
    (dec.compute_thin_Q(), dec.thin_R().to_owned())
}

/// Thin LQ: `m = L Q`, `Q` with orthonormal rows.
pub(crate) fn lq(m: MatRef<'_, c64>) -> (CMat, CMat) {
    let (q, r) = qr(m.adjoint().to_owned().as_ref());
    (r.adjoint().to_owned(), q.adjoint().to_owned())
}

/// `Σ_ij a_ij b_ij`
pub(crate) fn dot_elementwise(a: MatRef<'_, c64>, b: MatRef<'_, c64>) -> c64 {
    let mut acc = ZERO;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += a[(i, j)] * b[(i, j)];
        }
    }
    acc
}

