//! Test-only oracles, independent of the QR eigensolver.
#![allow(dead_code)]

use ptchain::{Complex64, DenseComplexMatrix};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Characteristic polynomial coefficients of `m` (monic, highest degree
/// first) by the Faddeev-LeVerrier recursion.
pub fn char_poly(m: &DenseComplexMatrix) -> Vec<Complex64> {
    let n = m.dim();
    let mul = |a: &[Complex64], b: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![c(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = a[i * n + k];
                for j in 0..n {
                    out[i * n + j] += aik * b[k * n + j];
                }
            }
        }
        out
    };
    let a = m.as_slice().to_vec();
    let mut coeffs = vec![c(1.0, 0.0)];
    let mut mk = vec![c(0.0, 0.0); n * n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I ; c_k = -tr(A M_k)/k
        let mut next = mul(&a, &mk);
        for i in 0..n {
            next[i * n + i] += coeffs[k - 1];
        }
        mk = next;
        let am = mul(&a, &mk);
        let tr: Complex64 = (0..n).map(|i| am[i * n + i]).sum();
        coeffs.push(-tr / k as f64);
    }
    coeffs
}

fn horner(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut val = c(0.0, 0.0);
    let mut der = c(0.0, 0.0);
    for &a in p {
        der = der * z + val;
        val = val * z + a;
    }
    (val, der)
}

/// All roots of a monic polynomial by Durand-Kerner, polished with Newton.
pub fn poly_roots(p: &[Complex64]) -> Vec<Complex64> {
    let deg = p.len() - 1;
    let bound = 1.0 + p[1..].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let seed = c(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32) * bound).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..deg {
            let (val, _) = horner(p, roots[i]);
            let denom: Complex64 = (0..deg).filter(|&j| j != i).map(|j| roots[i] - roots[j]).product();
            let step = val / denom;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * bound {
            break;
        }
    }
    for r in roots.iter_mut() {
        for _ in 0..5 {
            let (val, der) = horner(p, *r);
            if der.norm() == 0.0 {
                break;
            }
            *r -= val / der;
        }
    }
    roots
}

/// Largest distance in an optimal-by-greedy matching of two multisets.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// Number of eigenvalues below `x` of the real symmetric tridiagonal matrix
/// with diagonal `diag` and off-diagonal `off` (Sturm sequence).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let denom = if q == 0.0 { f64::EPSILON } else { q };
        q = diag[i] - x - off[i - 1] * off[i - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Largest eigenvalue of a symmetric tridiagonal matrix by bisection.
pub fn tridiagonal_max_eigenvalue(diag: &[f64], off: &[f64]) -> f64 {
    let n = diag.len();
    let radius =
        diag.iter().map(|d| d.abs()).fold(0.0, f64::max) + 2.0 * off.iter().map(|o| o.abs()).fold(0.0, f64::max);
    let (mut lo, mut hi) = (-radius, radius);
    while hi - lo > 1e-15 * radius.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) < n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Open SSH hoppings `t_-, t_+, t_-, ...` for `n` sites.
pub fn ssh_offdiagonal(n: usize, t: f64, delta: f64, theta: f64) -> Vec<f64> {
    let d = delta * theta.cos();
    (0..n - 1).map(|i| if i % 2 == 0 { t * (1.0 - d) } else { t * (1.0 + d) }).collect()
}
