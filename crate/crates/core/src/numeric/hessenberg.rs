//! Balancing and unitary reduction to upper Hessenberg form.

use num_complex::Complex64;

const RADIX: f64 = 2.0;
const BALANCE_FACTOR: f64 = 0.95;

/// Row-major square work matrix.
pub(super) struct Work {
    pub n: usize,
    pub a: Vec<Complex64>,
}

impl Work {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.a[i * self.n + j] = v;
    }
}

fn column_norm(w: &Work, j: usize) -> f64 {
    (0..w.n).map(|i| w.at(i, j).norm_sqr()).sum::<f64>().sqrt()
}

fn row_norm(w: &Work, i: usize) -> f64 {
    w.a[i * w.n..(i + 1) * w.n].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Diagonal similarity `D^-1 A D` with power-of-two entries that evens out
/// row and column norms. Returns the scaling diagonal `D`.
pub(super) fn balance(w: &mut Work) -> Vec<f64> {
    let n = w.n;
    let mut scale = vec![1.0; n];
    let sfmin = f64::MIN_POSITIVE / f64::EPSILON;
    let sfmax = 1.0 / sfmin;
    loop {
        let mut converged = true;
        for (i, s) in scale.iter_mut().enumerate() {
            let mut c = column_norm(w, i);
            let mut r = row_norm(w, i);
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let total = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g && f < sfmax && c < sfmax && r > sfmin {
                f *= RADIX;
                c *= RADIX;
                r /= RADIX;
                g /= RADIX;
            }
            g = c / RADIX;
            while g >= r && f > sfmin && r < sfmax && c > sfmin {
                f /= RADIX;
                c /= RADIX;
                g /= RADIX;
                r *= RADIX;
            }
            if c + r >= BALANCE_FACTOR * total {
                continue;
            }
            converged = false;
            *s *= f;
            let inv = 1.0 / f;
            for j in 0..n {
                w.a[i * n + j] *= inv;
            }
            for k in 0..n {
                w.a[k * n + i] *= f;
            }
        }
        if converged {
            return scale;
        }
    }
}

/// Reduces `w` in place to upper Hessenberg form `Q^H A Q` with Householder
/// reflectors. When `want_q` is set the unitary `Q` is returned row-major.
pub(super) fn reduce(w: &mut Work, want_q: bool) -> Option<Vec<Complex64>> {
    let n = w.n;
    let mut q = want_q.then(|| {
        let mut q = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            q[i * n + i] = Complex64::new(1.0, 0.0);
        }
        q
    });
    if n < 3 {
        return q;
    }
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    let mut acc = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let len = n - k - 1;
        let alpha = w.at(k + 1, k);
        let rest: f64 = (k + 2..n).map(|i| w.at(i, k).norm_sqr()).sum();
        if rest == 0.0 {
            continue;
        }
        let norm = (alpha.norm_sqr() + rest).sqrt();
        let phase = if alpha == Complex64::new(0.0, 0.0) { Complex64::new(1.0, 0.0) } else { alpha / alpha.norm() };
        let u = &mut u[..len];
        u[0] = alpha + phase * norm;
        for (i, ui) in u.iter_mut().enumerate().skip(1) {
            *ui = w.at(k + 1 + i, k);
        }
        let uu = u[0].norm_sqr() + rest;
        let tau = 2.0 / uu;

        // Left: rows k+1.., columns k+1.. (column k is set explicitly below).
        let acc = &mut acc[..n];
        acc[k + 1..].iter_mut().for_each(|s| *s = Complex64::new(0.0, 0.0));
        for (i, ui) in u.iter().enumerate() {
            let cu = ui.conj();
            let row = &w.a[(k + 1 + i) * n..(k + 2 + i) * n];
            for j in k + 1..n {
                acc[j] += cu * row[j];
            }
        }
        for (i, ui) in u.iter().enumerate() {
            let f = *ui * tau;
            let row = &mut w.a[(k + 1 + i) * n..(k + 2 + i) * n];
            for j in k + 1..n {
                row[j] -= f * acc[j];
            }
        }
        w.set(k + 1, k, -phase * norm);
        for i in k + 2..n {
            w.set(i, k, Complex64::new(0.0, 0.0));
        }

        // Right: all rows, columns k+1..
        apply_right(&mut w.a, n, k + 1, u, tau);
        if let Some(q) = q.as_mut() {
            apply_right(q, n, k + 1, u, tau);
        }
    }
    q
}

/// `M <- M (I - tau u u^H)` on the column block starting at `offset`.
fn apply_right(m: &mut [Complex64], n: usize, offset: usize, u: &[Complex64], tau: f64) {
    for row in m.chunks_exact_mut(n) {
        let block = &mut row[offset..offset + u.len()];
        let s: Complex64 = block.iter().zip(u).map(|(a, b)| a * b).sum::<Complex64>() * tau;
        for (a, b) in block.iter_mut().zip(u) {
            *a -= s * b.conj();
        }
    }
}
