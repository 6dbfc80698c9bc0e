//! Lowest eigenpairs of symmetric band matrices.
//!
//! Givens band-to-tridiagonal reduction, Sturm bisection for eigenvalues,
//! inverse iteration on the original band for eigenvectors.

use crate::banded::BandedSymmetricMatrix;
use crate::error::{Error, Result};

const MAX_INVERSE_ITERATIONS: usize = 12;
const RESIDUAL_TOL: f64 = 1e-10;

/// Diagonal and subdiagonal of a tridiagonal matrix orthogonally similar to `m`.
pub fn tridiagonal_form(m: &BandedSymmetricMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.dim();
    let b = m.bandwidth().min(n.saturating_sub(1));
    if b <= 1 {
        let d = m.band(0).to_vec();
        let e = if b == 1 {
            m.band(1).to_vec()
        } else {
            vec![0.0; n.saturating_sub(1)]
        };
        return (d, e);
    }
    if b == 2 {
        return pentadiagonal_to_tridiagonal(m);
    }
    let mut w = LowerBand::new(m, b + 1);
    for j in 0..n.saturating_sub(2) {
        let top = (j + b).min(n - 1);
        for i in (j + 2..=top).rev() {
            w.annihilate(i, j, b);
            // chase the bulge created at (i + b, i - 1)
            let (mut r, mut c) = (i + b, i - 1);
            while r < n {
                w.annihilate(r, c, b);
                c = r - 1;
                r += b;
            }
        }
    }
    let d = (0..n).map(|i| w.get(i, i)).collect();
    let e = (0..n - 1).map(|i| w.get(i + 1, i)).collect();
    (d, e)
}

#[inline]
fn rotate(c: f64, s: f64, a: &mut f64, b: &mut f64) {
    let (x, y) = (*a, *b);
    *a = c * x + s * y;
    *b = -s * x + c * y;
}

/// Similarity rotation in the plane (p, p + 1) applied to the 2x2 diagonal block.
#[inline]
fn rotate_block(c: f64, s: f64, dp: &mut f64, dq: &mut f64, e: &mut f64) {
    let (app, aqq, apq) = (*dp, *dq, *e);
    *dp = c * c * app + 2.0 * c * s * apq + s * s * aqq;
    *dq = s * s * app - 2.0 * c * s * apq + c * c * aqq;
    *e = c * s * (aqq - app) + (c * c - s * s) * apq;
}

/// Bandwidth-2 case of the reduction with the bulge held in a scalar.
fn pentadiagonal_to_tridiagonal(m: &BandedSymmetricMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.dim();
    let mut d = m.band(0).to_vec();
    let mut e1 = m.band(1).to_vec();
    let mut e2 = m.band(2).to_vec();
    for j in 0..n - 2 {
        let y = e2[j];
        if y == 0.0 {
            continue;
        }
        let x = e1[j];
        let r = (x * x + y * y).sqrt();
        let (c, s) = (x / r, y / r);
        e1[j] = r;
        e2[j] = 0.0;
        let (p, mut q) = (j + 1, j + 2);
        if q + 1 < n {
            let (a, b) = (e2[p], e1[q]);
            let (mut a, mut b) = (a, b);
            rotate(c, s, &mut a, &mut b);
            e2[p] = a;
            e1[q] = b;
        }
        let mut bulge = 0.0;
        if q + 2 < n {
            bulge = s * e2[q];
            e2[q] *= c;
        }
        {
            let (mut dp, mut dq, mut ep) = (d[p], d[q], e1[p]);
            rotate_block(c, s, &mut dp, &mut dq, &mut ep);
            d[p] = dp;
            d[q] = dq;
            e1[p] = ep;
        }
        // chase the bulge at (q + 2, q - 1) down the band
        let mut col = p;
        q += 2;
        while q < n && bulge != 0.0 {
            let p = q - 1;
            let (x, y) = (e2[col], bulge);
            let r = (x * x + y * y).sqrt();
            let (c, s) = (x / r, y / r);
            e2[col] = r;
            {
                let (mut a, mut b) = (e1[q - 2], e2[q - 2]);
                rotate(c, s, &mut a, &mut b);
                e1[q - 2] = a;
                e2[q - 2] = b;
            }
            if q + 1 < n {
                let (mut a, mut b) = (e2[p], e1[q]);
                rotate(c, s, &mut a, &mut b);
                e2[p] = a;
                e1[q] = b;
            }
            bulge = 0.0;
            if q + 2 < n {
                bulge = s * e2[q];
                e2[q] *= c;
            }
            let (mut dp, mut dq, mut ep) = (d[p], d[q], e1[p]);
            rotate_block(c, s, &mut dp, &mut dq, &mut ep);
            d[p] = dp;
            d[q] = dq;
            e1[p] = ep;
            col = p;
            q += 2;
        }
    }
    (d, e1)
}

/// Working lower-band storage with one extra diagonal for the bulge.
struct LowerBand {
    n: usize,
    w: usize,
    a: Vec<f64>,
}

impl LowerBand {
    fn new(m: &BandedSymmetricMatrix, w: usize) -> Self {
        let n = m.dim();
        let mut a = vec![0.0; (w + 1) * n];
        for (k, band) in m.bands().iter().enumerate() {
            a[k * n..k * n + band.len()].copy_from_slice(band);
        }
        Self { n, w, a }
    }

    #[inline]
    fn idx(&self, r: usize, c: usize) -> usize {
        debug_assert!(r >= c && r - c <= self.w);
        (r - c) * self.n + c
    }

    #[inline]
    fn get(&self, r: usize, c: usize) -> f64 {
        self.a[self.idx(r, c)]
    }

    /// Zeroes entry (q, col) by a rotation in the plane (q - 1, q).
    fn annihilate(&mut self, q: usize, col: usize, b: usize) {
        let p = q - 1;
        let x = self.get(p, col);
        let y = self.get(q, col);
        if y == 0.0 {
            return;
        }
        let r = (x * x + y * y).sqrt();
        let (c, s) = (x / r, y / r);
        let n = self.n;
        for l in q.saturating_sub(b + 1)..p {
            let ip = self.idx(p, l);
            let iq = self.idx(q, l);
            let (ap, aq) = (self.a[ip], self.a[iq]);
            self.a[ip] = c * ap + s * aq;
            self.a[iq] = -s * ap + c * aq;
        }
        for l in q + 1..=(q + b).min(n - 1) {
            let ip = self.idx(l, p);
            let iq = self.idx(l, q);
            let (ap, aq) = (self.a[ip], self.a[iq]);
            self.a[ip] = c * ap + s * aq;
            self.a[iq] = -s * ap + c * aq;
        }
        let (ipp, iqq, iqp) = (self.idx(p, p), self.idx(q, q), self.idx(q, p));
        let (app, aqq, apq) = (self.a[ipp], self.a[iqq], self.a[iqp]);
        self.a[ipp] = c * c * app + 2.0 * c * s * apq + s * s * aqq;
        self.a[iqq] = s * s * app - 2.0 * c * s * apq + c * c * aqq;
        self.a[iqp] = c * s * (aqq - app) + (c * c - s * s) * apq;
        let iz = self.idx(q, col);
        self.a[iz] = 0.0;
        let ix = self.idx(p, col);
        self.a[ix] = r;
    }
}

/// Number of eigenvalues of the tridiagonal (d, e) strictly below `x`.
pub fn sturm_count(d: &[f64], e2: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        q = d[i] - x - if i > 0 { e2[i - 1] / q } else { 0.0 };
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Sturm counts at `M` shifts in one sweep; the independent recurrences interleave.
fn sturm_counts<const M: usize>(d: &[f64], e2: &[f64], xs: [f64; M], pivmin: f64) -> [usize; M] {
    let mut count = [0usize; M];
    let mut q = [0.0f64; M];
    for m in 0..M {
        q[m] = d[0] - xs[m];
        if q[m].abs() < pivmin {
            q[m] = -pivmin;
        }
        count[m] += (q[m] < 0.0) as usize;
    }
    for i in 1..d.len() {
        let (di, ei) = (d[i], e2[i - 1]);
        for m in 0..M {
            let mut v = di - xs[m] - ei / q[m];
            if v.abs() < pivmin {
                v = -pivmin;
            }
            count[m] += (v < 0.0) as usize;
            q[m] = v;
        }
    }
    count
}

const SHIFTS: usize = 4;

/// The `k` smallest eigenvalues of the tridiagonal (d, e), ascending.
///
/// Bisection on Sturm counts, with the shifts of all unconverged brackets
/// evaluated together.
pub fn tridiagonal_lowest(d: &[f64], e: &[f64], k: usize) -> Vec<f64> {
    let n = d.len();
    let k = k.min(n);
    if k == 0 {
        return Vec::new();
    }
    let e2: Vec<f64> = e.iter().map(|v| v * v).collect();
    let pivmin = f64::MIN_POSITIVE * e2.iter().cloned().fold(1.0, f64::max);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < n { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let pad = 2.0 * f64::EPSILON * scale + pivmin;
    lo -= pad;
    hi += pad;
    let abs_tol = 0.5 * f64::EPSILON * scale;
    let converged = |a: f64, b: f64| {
        let mid = 0.5 * (a + b);
        b - a <= abs_tol + 2.0 * f64::EPSILON * a.abs().max(b.abs()) || mid <= a || mid >= b
    };
    // bracket[i] = (a, b) with count(a) <= i < count(b)
    let mut bracket = vec![(lo, hi); k];
    loop {
        let active: Vec<usize> = (0..k)
            .filter(|&i| !converged(bracket[i].0, bracket[i].1))
            .collect();
        if active.is_empty() {
            break;
        }
        let mut xs = [0.0; SHIFTS];
        let per = (SHIFTS / active.len()).max(1);
        let mut slot = 0;
        for &i in active.iter().take(SHIFTS) {
            let (a, b) = bracket[i];
            for s in 0..per {
                if slot < SHIFTS {
                    xs[slot] = a + (b - a) * (s + 1) as f64 / (per + 1) as f64;
                    slot += 1;
                }
            }
        }
        for s in slot..SHIFTS {
            xs[s] = xs[0];
        }
        let counts = sturm_counts(d, &e2, xs, pivmin);
        for (s, &x) in xs.iter().enumerate() {
            let c = counts[s];
            // every bracket benefits from every shift
            for (i, br) in bracket.iter_mut().enumerate() {
                if c > i {
                    if x < br.1 {
                        br.1 = x;
                    }
                } else if x > br.0 {
                    br.0 = x;
                }
            }
        }
    }
    bracket.iter().map(|(a, b)| 0.5 * (a + b)).collect()
}

fn validate(m: &BandedSymmetricMatrix, k: usize) -> Result<()> {
    if k == 0 || k > m.dim() {
        return Err(Error::param("k", k as f64, "need 1 <= k <= dim"));
    }
    m.check_finite()
}

/// The `k` lowest eigenvalues, ascending.
pub fn lowest_eigenvalues(m: &BandedSymmetricMatrix, k: usize) -> Result<Vec<f64>> {
    validate(m, k)?;
    let (d, e) = tridiagonal_form(m);
    Ok(tridiagonal_lowest(&d, &e, k))
}

/// Eigenvalues and unit eigenvectors of the `k` lowest levels.
///
/// Each vector has its largest-magnitude amplitude positive.
pub fn lowest_eigenvectors(
    m: &BandedSymmetricMatrix,
    k: usize,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let values = lowest_eigenvalues(m, k)?;
    let norm = m.norm_inf().max(f64::MIN_POSITIVE);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(values.len());
    for &lambda in &values {
        let lu = BandLu::factor(m, lambda, norm);
        let mut x = start_vector(m.dim(), vectors.len());
        let mut residual = f64::INFINITY;
        let mut done = false;
        for _ in 0..MAX_INVERSE_ITERATIONS {
            lu.solve(&mut x);
            for _ in 0..2 {
                for v in &vectors {
                    let dot: f64 = v.iter().zip(&x).map(|(a, b)| a * b).sum();
                    for (xi, vi) in x.iter_mut().zip(v) {
                        *xi -= dot * vi;
                    }
                }
            }
            normalize(&mut x);
            let hx = m.matvec(&x);
            residual = hx
                .iter()
                .zip(&x)
                .map(|(h, v)| (h - lambda * v).powi(2))
                .sum::<f64>()
                .sqrt();
            if residual <= RESIDUAL_TOL * norm {
                done = true;
                break;
            }
        }
        if !done {
            return Err(Error::NoConvergence {
                what: "inverse iteration",
                iterations: MAX_INVERSE_ITERATIONS,
                residual,
            });
        }
        fix_sign(&mut x);
        vectors.push(x);
    }
    Ok((values, vectors))
}

fn start_vector(n: usize, seed: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * (0.618_033_988_7 + seed as f64 * 0.3)).sin())
        .collect();
    normalize(&mut x);
    x
}

fn normalize(x: &mut [f64]) {
    let s = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if s > 0.0 {
        x.iter_mut().for_each(|v| *v /= s);
    }
}

/// Flips `x` so that its largest-magnitude entry is positive.
pub fn fix_sign(x: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &v in x.iter() {
        if v.abs() > best * (1.0 + 1e-12) {
            best = v.abs();
            sign = v.signum();
        }
    }
    if sign < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
}

/// LU factorization of `m - sigma I` with partial pivoting, in band storage.
struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    a: Vec<f64>,
    piv: Vec<usize>,
}

impl BandLu {
    fn factor(m: &BandedSymmetricMatrix, sigma: f64, norm: f64) -> Self {
        let n = m.dim();
        let kl = m.bandwidth().min(n.saturating_sub(1));
        let ku = kl;
        let width = 2 * kl + ku + 1;
        let mut lu = Self {
            n,
            kl,
            ku,
            width,
            a: vec![0.0; n * width],
            piv: vec![0; n],
        };
        for i in 0..n {
            for c in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                let v = m.get(i, c) - if c == i { sigma } else { 0.0 };
                let ix = lu.idx(i, c);
                lu.a[ix] = v;
            }
        }
        let tiny = f64::EPSILON * norm;
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = lu.at(k, k).abs();
            for r in k + 1..=last_row {
                if lu.at(r, k).abs() > best {
                    best = lu.at(r, k).abs();
                    p = r;
                }
            }
            lu.piv[k] = p;
            let last_col = (k + kl + ku).min(n - 1);
            if p != k {
                for c in k..=last_col {
                    let (ik, ip) = (lu.idx(k, c), lu.idx(p, c));
                    lu.a.swap(ik, ip);
                }
            }
            let ikk = lu.idx(k, k);
            if lu.a[ikk].abs() < tiny {
                lu.a[ikk] = if lu.a[ikk] < 0.0 { -tiny } else { tiny };
            }
            let pivot = lu.a[ikk];
            for r in k + 1..=last_row {
                let irk = lu.idx(r, k);
                let f = lu.a[irk] / pivot;
                lu.a[irk] = f;
                if f != 0.0 {
                    for c in k + 1..=last_col {
                        let kc = lu.at(k, c);
                        let irc = lu.idx(r, c);
                        lu.a[irc] -= f * kc;
                    }
                }
            }
        }
        lu
    }

    #[inline]
    fn idx(&self, r: usize, c: usize) -> usize {
        r * self.width + (c + self.kl - r)
    }

    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.a[self.idx(r, c)]
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        for k in 0..n {
            b.swap(k, self.piv[k]);
            let bk = b[k];
            for r in k + 1..=(k + self.kl).min(n - 1) {
                b[r] -= self.at(r, k) * bk;
            }
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            for c in k + 1..=(k + self.kl + self.ku).min(n - 1) {
                s -= self.at(k, c) * b[c];
            }
            b[k] = s / self.at(k, k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_eigs(a: &[Vec<f64>]) -> Vec<f64> {
        // cyclic Jacobi, small test matrices only
        let n = a.len();
        let mut a = a.to_vec();
        for _ in 0..100 {
            let mut off = 0.0;
            for p in 0..n {
                for q in p + 1..n {
                    off += a[p][q] * a[p][q];
                }
            }
            if off < 1e-30 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[k][p], a[k][q]);
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[p][k], a[q][k]);
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
        ev
    }

    fn pseudo_band(n: usize, b: usize, seed: u64) -> BandedSymmetricMatrix {
        let mut s = seed;
        let mut next = || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let bands = (0..=b)
            .map(|k| (0..n - k).map(|_| next()).collect())
            .collect();
        BandedSymmetricMatrix::from_bands(bands).unwrap()
    }

    #[test]
    fn reduction_preserves_spectrum() {
        for (n, b) in [(7, 2), (12, 3), (20, 2), (9, 4)] {
            let m = pseudo_band(n, b, n as u64 * 31 + b as u64);
            let want = dense_eigs(&m.to_dense());
            let got = lowest_eigenvalues(&m, n).unwrap();
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-13, "n={n} b={b}: {g} vs {w}");
            }
        }
    }

    #[test]
    fn eigenvectors_have_small_residual_and_sign() {
        let m = pseudo_band(30, 2, 7);
        let (vals, vecs) = lowest_eigenvectors(&m, 5).unwrap();
        for (l, v) in vals.iter().zip(&vecs) {
            let hv = m.matvec(v);
            let r: f64 = hv
                .iter()
                .zip(v)
                .map(|(h, x)| (h - l * x).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(r < 1e-12);
            let big = v
                .iter()
                .cloned()
                .fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
            assert!(big > 0.0);
        }
        for i in 0..5 {
            for j in 0..i {
                let d: f64 = vecs[i].iter().zip(&vecs[j]).map(|(a, b)| a * b).sum();
                assert!(d.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn degenerate_diagonal_gets_orthogonal_vectors() {
        let m = BandedSymmetricMatrix::diagonal(vec![-1.0, 0.5, -1.0]);
        let (vals, vecs) = lowest_eigenvectors(&m, 2).unwrap();
        assert!(vals.iter().all(|v| (v + 1.0).abs() < 1e-15));
        let d: f64 = vecs[0].iter().zip(&vecs[1]).map(|(a, b)| a * b).sum();
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn nan_rejected() {
        let m = BandedSymmetricMatrix::diagonal(vec![1.0, f64::NAN]);
        assert!(matches!(
            lowest_eigenvalues(&m, 1),
            Err(Error::NonFinite { .. })
        ));
    }
}
