//! Complex Schur decomposition by single-shift QR and eigenvector extraction.
//!
//! Pipeline: balance, Householder reduction to Hessenberg form, implicit
//! single-shift QR with Wilkinson shifts and aggressive-free deflation
//! (same deflation test as LAPACK's `zlahqr`), then eigenvectors of the
//! triangular Schur factor by back-substitution, transformed back through
//! the Schur vectors and the balancing scale.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::hessenberg::{self, Work};
use super::{infinity_norm, DenseComplexMatrix, EigenError};

pub const DEFAULT_RESIDUAL_TOLERANCE: f64 = 1e-10;

/// QR sweeps allowed per unit of matrix dimension.
const SWEEPS_PER_DIM: usize = 30;
/// Sweeps without deflation after which an exceptional shift is used.
const EXCEPTIONAL_SHIFT_PERIOD: usize = 10;
const EXCEPTIONAL_SHIFT_SCALE: f64 = 0.75;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// All eigenvalues with unit-norm right eigenvectors, sorted by `(re, im)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: Vec<Complex64>,
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Vec<Complex64>>,
    /// Largest `|M v - lambda v|_inf` over all pairs.
    pub max_residual: f64,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

#[inline]
fn cabs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

fn sort_key(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn validate(m: &DenseComplexMatrix) -> Result<(), EigenError> {
    match m.first_non_finite() {
        Some((row, col)) => Err(EigenError::NonFinite { row, col }),
        None => Ok(()),
    }
}

/// Eigenvalues only, sorted by `(re, im)` ascending. Skips the Schur vector
/// accumulation, which makes it several times cheaper than [`eigen_decompose`].
pub fn eigenvalues(m: &DenseComplexMatrix) -> Result<Vec<Complex64>, EigenError> {
    validate(m)?;
    let mut w = Work { n: m.dim(), a: m.as_slice().to_vec() };
    hessenberg::balance(&mut w);
    hessenberg::reduce(&mut w, false);
    schur_in_place(&mut w, None, false)?;
    let mut values: Vec<Complex64> = (0..w.n).map(|i| w.at(i, i)).collect();
    values.sort_by(sort_key);
    Ok(values)
}

/// Full eigendecomposition of a general complex matrix.
///
/// Fails on non-finite input, on QR non-convergence within `30 * dim`
/// sweeps, and when any eigenpair residual exceeds
/// `residual_tolerance * infinity_norm(m)`.
pub fn eigen_decompose(m: &DenseComplexMatrix, residual_tolerance: f64) -> Result<EigenDecomposition, EigenError> {
    if !(residual_tolerance > 0.0 && residual_tolerance.is_finite()) {
        return Err(EigenError::InvalidTolerance(residual_tolerance));
    }
    validate(m)?;
    let n = m.dim();
    let mut w = Work { n, a: m.as_slice().to_vec() };
    let scale = hessenberg::balance(&mut w);
    let mut z = hessenberg::reduce(&mut w, true).expect("requested Q");
    schur_in_place(&mut w, Some(&mut z), true)?;

    let values: Vec<Complex64> = (0..n).map(|i| w.at(i, i)).collect();
    let mut vectors = triangular_eigenvectors(&w);
    for x in vectors.iter_mut() {
        // v = D Z x, with x supported on the leading k+1 entries.
        let support = x.len();
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| {
                let zrow = &z[i * n..i * n + support];
                zrow.iter().zip(x.iter()).map(|(a, b)| a * b).sum::<Complex64>() * scale[i]
            })
            .collect();
        normalize(&mut v);
        *x = v;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sort_key(&values[a], &values[b]).then(a.cmp(&b)));
    let values: Vec<Complex64> = order.iter().map(|&k| values[k]).collect();
    let mut slots: Vec<Option<Vec<Complex64>>> = vectors.into_iter().map(Some).collect();
    let vectors: Vec<Vec<Complex64>> = order.iter().map(|&k| slots[k].take().expect("permutation")).collect();

    let max_residual = values.iter().zip(&vectors).map(|(&lambda, v)| residual(m, lambda, v)).fold(0.0, f64::max);
    let bound = residual_tolerance * infinity_norm(m);
    if max_residual > bound {
        return Err(EigenError::ResidualExceeded { residual: max_residual, bound });
    }
    Ok(EigenDecomposition { values, vectors, max_residual })
}

/// `|M v - lambda v|_inf`.
pub(crate) fn residual(m: &DenseComplexMatrix, lambda: Complex64, v: &[Complex64]) -> f64 {
    (0..m.dim())
        .map(|i| {
            let mv: Complex64 = m.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
            (mv - lambda * v[i]).norm()
        })
        .fold(0.0, f64::max)
}

/// Scales to unit Euclidean norm and rotates the phase so the first entry of
/// largest modulus is real and positive.
fn normalize(v: &mut [Complex64]) {
    let mut pivot = 0;
    let mut best = -1.0;
    let mut big = 0.0f64;
    for (i, z) in v.iter().enumerate() {
        let a = z.norm();
        big = big.max(a);
        if a > best * (1.0 + 1e-12) {
            best = a;
            pivot = i;
        }
    }
    if big == 0.0 {
        return;
    }
    // Pre-scale by the largest modulus so the sum of squares cannot overflow.
    let sumsq: f64 = v.iter().map(|z| (z / big).norm_sqr()).sum();
    let norm = big * sumsq.sqrt();
    let phase = v[pivot].conj() / v[pivot].norm();
    for z in v.iter_mut() {
        *z = *z * phase / norm;
    }
    v[pivot].im = 0.0;
}

/// Complex Givens rotation `G = [[c, s], [-conj(s), c]]` with
/// `G [a; b] = [r; 0]`.
#[inline]
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    if b == ZERO {
        return (1.0, ZERO);
    }
    let abs_a = a.norm();
    let abs_b = b.norm();
    if abs_a == 0.0 {
        return (0.0, b.conj() / abs_b);
    }
    let norm = abs_a.hypot(abs_b);
    (abs_a / norm, (a / abs_a) * b.conj() / norm)
}

/// Rows `k`, `k+1` of a row-major matrix, columns `cols`.
#[inline]
fn rotate_rows(a: &mut [Complex64], n: usize, k: usize, cols: std::ops::Range<usize>, c: f64, s: Complex64) {
    let (top, bottom) = a[k * n..(k + 2) * n].split_at_mut(n);
    let sc = s.conj();
    for j in cols {
        let x = top[j];
        let y = bottom[j];
        top[j] = x * c + s * y;
        bottom[j] = y * c - sc * x;
    }
}

/// Columns `k`, `k+1` of a row-major matrix times `G^H`, rows `rows`.
#[inline]
fn rotate_cols(a: &mut [Complex64], n: usize, k: usize, rows: std::ops::Range<usize>, c: f64, s: Complex64) {
    let sc = s.conj();
    for r in rows {
        let base = r * n + k;
        let x = a[base];
        let y = a[base + 1];
        a[base] = x * c + y * sc;
        a[base + 1] = y * c - x * s;
    }
}

/// Drives the Hessenberg matrix in `w` to upper triangular (Schur) form.
///
/// With `full_schur` the whole triangle is kept consistent (needed for
/// eigenvectors); otherwise only the active window is updated. Schur
/// vectors are accumulated into `z` when given.
fn schur_in_place(w: &mut Work, mut z: Option<&mut Vec<Complex64>>, full_schur: bool) -> Result<(), EigenError> {
    let n = w.n;
    if n == 1 {
        return Ok(());
    }
    let ulp = f64::EPSILON;
    let safmin = f64::MIN_POSITIVE;
    let smlnum = safmin * (n as f64 / ulp);
    let max_sweeps = SWEEPS_PER_DIM * n;

    let mut sweeps = 0usize;
    let mut since_deflation = 0usize;
    // Active window is rows/cols lo..=hi; everything below hi is converged.
    let mut hi = n - 1;
    loop {
        // Find the lowest negligible subdiagonal entry in 1..=hi.
        let mut lo = 0;
        for k in (1..=hi).rev() {
            let sub = w.at(k, k - 1);
            if cabs1(sub) <= smlnum {
                lo = k;
                break;
            }
            let mut tst = cabs1(w.at(k - 1, k - 1)) + cabs1(w.at(k, k));
            if tst == 0.0 {
                if k >= 2 {
                    tst += w.at(k - 1, k - 2).re.abs();
                }
                if k < hi {
                    tst += w.at(k + 1, k).re.abs();
                }
            }
            if cabs1(sub) <= ulp * tst {
                let above = w.at(k - 1, k);
                let ab = cabs1(sub).max(cabs1(above));
                let ba = cabs1(sub).min(cabs1(above));
                let diff = w.at(k - 1, k - 1) - w.at(k, k);
                let aa = cabs1(w.at(k, k)).max(cabs1(diff));
                let bb = cabs1(w.at(k, k)).min(cabs1(diff));
                let s = aa + ab;
                if ba * (ab / s) <= smlnum.max(ulp * (bb * (aa / s))) {
                    lo = k;
                    break;
                }
            }
        }
        if lo > 0 {
            w.set(lo, lo - 1, ZERO);
        }
        if lo >= hi {
            // 1x1 block converged.
            since_deflation = 0;
            hi -= 1;
            if hi == 0 {
                return Ok(());
            }
            continue;
        }

        if sweeps >= max_sweeps {
            return Err(EigenError::NoConvergence { deflation_index: hi, sweeps });
        }
        sweeps += 1;
        since_deflation += 1;

        let shift = if since_deflation.is_multiple_of(2 * EXCEPTIONAL_SHIFT_PERIOD) {
            w.at(hi, hi) + EXCEPTIONAL_SHIFT_SCALE * cabs1(w.at(hi, hi - 1))
        } else if since_deflation.is_multiple_of(EXCEPTIONAL_SHIFT_PERIOD) {
            w.at(lo, lo) + EXCEPTIONAL_SHIFT_SCALE * cabs1(w.at(lo + 1, lo))
        } else {
            wilkinson_shift(w, hi)
        };

        let (col_lo, col_hi) = if full_schur { (0, n) } else { (lo, hi + 1) };
        let mut c;
        let mut s;
        for k in lo..hi {
            if k == lo {
                let (c0, s0) = givens(w.at(lo, lo) - shift, w.at(lo + 1, lo));
                c = c0;
                s = s0;
                rotate_rows(&mut w.a, n, k, lo..n.min(col_hi), c, s);
            } else {
                let (c0, s0) = givens(w.at(k, k - 1), w.at(k + 1, k - 1));
                c = c0;
                s = s0;
                rotate_rows(&mut w.a, n, k, k - 1..n.min(col_hi), c, s);
                w.set(k + 1, k - 1, ZERO);
            }
            let row_end = (k + 3).min(hi + 1);
            rotate_cols(&mut w.a, n, k, col_lo..row_end, c, s);
            if let Some(z) = z.as_deref_mut() {
                rotate_cols(z, n, k, 0..n, c, s);
            }
        }
    }
}

fn wilkinson_shift(w: &Work, hi: usize) -> Complex64 {
    let mut t = w.at(hi, hi);
    let u = w.at(hi - 1, hi).sqrt() * w.at(hi, hi - 1).sqrt();
    let su = cabs1(u);
    if su != 0.0 {
        let x = 0.5 * (w.at(hi - 1, hi - 1) - t);
        let sx = cabs1(x);
        let s = su.max(sx);
        let mut y = s * ((x / s) * (x / s) + (u / s) * (u / s)).sqrt();
        if sx > 0.0 {
            let xn = x / sx;
            if xn.re * y.re + xn.im * y.im < 0.0 {
                y = -y;
            }
        }
        t -= u * (u / (x + y));
    }
    t
}

/// Right eigenvectors of the upper triangular matrix in `w`. Entry `k` of
/// the result has length `k + 1` (the trailing components are zero).
fn triangular_eigenvectors(w: &Work) -> Vec<Vec<Complex64>> {
    let n = w.n;
    let ulp = f64::EPSILON;
    let smlnum = f64::MIN_POSITIVE * (n as f64 / ulp);
    const RESCALE_AT: f64 = 1e150;
    (0..n)
        .map(|k| {
            let lambda = w.at(k, k);
            let smin = (ulp * cabs1(lambda)).max(smlnum);
            let mut x = vec![ZERO; k + 1];
            x[k] = ONE;
            for j in (0..k).rev() {
                let row = &w.a[j * n..j * n + k + 1];
                let rhs: Complex64 = row[j + 1..=k].iter().zip(&x[j + 1..=k]).map(|(a, b)| a * b).sum();
                let mut d = w.at(j, j) - lambda;
                if cabs1(d) < smin {
                    d = Complex64::new(smin, 0.0);
                }
                x[j] = -rhs / d;
                let mag = cabs1(x[j]);
                if mag > RESCALE_AT {
                    let f = 1.0 / mag;
                    for v in x[j..].iter_mut() {
                        *v *= f;
                    }
                }
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn uniform_chain(n: usize) -> DenseComplexMatrix {
        let mut m = DenseComplexMatrix::zeros(n);
        for i in 0..n - 1 {
            m[(i, i + 1)] = ONE;
            m[(i + 1, i)] = ONE;
        }
        m
    }

    #[test]
    fn identity_has_unit_eigenvalues() {
        let d = eigen_decompose(&DenseComplexMatrix::identity(3), 1e-10).unwrap();
        assert_eq!(d.values, vec![ONE; 3]);
        for v in &d.vectors {
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn one_by_one() {
        let m = DenseComplexMatrix::from_rows(&[vec![c(2.0, -1.0)]]).unwrap();
        let d = eigen_decompose(&m, 1e-10).unwrap();
        assert_eq!(d.values, vec![c(2.0, -1.0)]);
        assert_eq!(d.vectors, vec![vec![ONE]]);
    }

    #[test]
    fn pt_dimer_closed_form() {
        let m =
            DenseComplexMatrix::from_rows(&[vec![c(0.0, 0.5), c(0.7, 0.0)], vec![c(0.7, 0.0), c(0.0, -0.5)]]).unwrap();
        let d = eigen_decompose(&m, 1e-10).unwrap();
        let e = (0.7f64 * 0.7 - 0.5 * 0.5).sqrt();
        assert!((d.values[0] - c(-e, 0.0)).norm() < 1e-14);
        assert!((d.values[1] - c(e, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn uniform_open_chain() {
        let n = 10;
        let d = eigen_decompose(&uniform_chain(n), 1e-10).unwrap();
        for (j, value) in d.values.iter().enumerate() {
            let exact = 2.0 * ((n - j) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((value - c(exact, 0.0)).norm() < 1e-12, "{j}: {value} vs {exact}");
        }
    }

    #[test]
    fn eigenvalues_only_matches_full_decomposition() {
        let mut m = uniform_chain(12);
        m[(0, 0)] = c(0.0, 0.3);
        m[(11, 11)] = c(0.0, -0.3);
        m[(3, 7)] = c(0.2, -0.4);
        let full = eigen_decompose(&m, 1e-10).unwrap();
        let fast = eigenvalues(&m).unwrap();
        for (a, b) in full.values.iter().zip(&fast) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_finite_and_bad_tolerance() {
        let mut m = DenseComplexMatrix::identity(2);
        m[(1, 0)] = c(f64::INFINITY, 0.0);
        assert_eq!(eigen_decompose(&m, 1e-10), Err(EigenError::NonFinite { row: 1, col: 0 }));
        assert_eq!(eigenvalues(&m), Err(EigenError::NonFinite { row: 1, col: 0 }));
        let ok = DenseComplexMatrix::identity(2);
        assert!(matches!(eigen_decompose(&ok, 0.0), Err(EigenError::InvalidTolerance(_))));
        assert!(matches!(eigen_decompose(&ok, f64::NAN), Err(EigenError::InvalidTolerance(_))));
    }

    #[test]
    fn jordan_block_is_handled() {
        // Defective: single eigenvalue 1 with a one-dimensional eigenspace.
        let m = DenseComplexMatrix::from_rows(&[vec![ONE, ONE], vec![ZERO, ONE]]).unwrap();
        let d = eigen_decompose(&m, 1e-10).unwrap();
        assert_eq!(d.values, vec![ONE, ONE]);
        assert!(d.max_residual < 1e-14);
    }

    #[test]
    fn nilpotent_shift_matrix() {
        let mut m = DenseComplexMatrix::zeros(5);
        for i in 0..4 {
            m[(i, i + 1)] = ONE;
        }
        let d = eigen_decompose(&m, 1e-10).unwrap();
        assert!(d.values.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn cyclic_permutation_needs_exceptional_shifts() {
        // Eigenvalues are the 6th roots of unity; plain Wilkinson shifts stall.
        let n = 6;
        let mut m = DenseComplexMatrix::zeros(n);
        for i in 0..n {
            m[((i + 1) % n, i)] = ONE;
        }
        let d = eigen_decompose(&m, 1e-10).unwrap();
        for z in &d.values {
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn balancing_handles_badly_scaled_matrix() {
        let m = DenseComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(1e6, 0.0), c(0.0, 0.0)],
            vec![c(1e-6, 0.0), c(2.0, 0.0), c(1e6, 1.0)],
            vec![c(0.0, 0.0), c(1e-6, 0.0), c(3.0, 0.0)],
        ])
        .unwrap();
        let d = eigen_decompose(&m, 1e-10).unwrap();
        assert_eq!(d.dim(), 3);
    }
}
