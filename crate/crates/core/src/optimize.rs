//! Derivative-free 1D minimization and root bracketing.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;
const MAX_STEPS: usize = 400;

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`.
///
/// Stops when the bracket is narrower than `tol`. Returns `(x, f(x))`.
pub fn golden_min<F>(mut f: F, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..MAX_STEPS {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            if c == d {
                break;
            }
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            if c == d {
                break;
            }
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

/// Golden-section search for a maximum.
pub fn golden_max<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (x, fx) = golden_min(|x| f(x).map(|v| -v), a, b, tol)?;
    Ok((x, -fx))
}

/// Bisection for a sign change of `f` on `[a, b]`, to absolute `tol` in x.
pub fn bisect<F>(mut f: F, mut a: f64, mut b: f64, tol: f64, what: &'static str) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoBracket { what, lo: a, hi: b });
    }
    for _ in 0..MAX_STEPS {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol || m == a || m == b {
            return Ok(m);
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Index of the smallest finite value.
pub fn argmin(values: &[f64]) -> Option<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
}

/// Index of the largest finite value.
pub fn argmax(values: &[f64]) -> Option<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i)
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i + 1 == n {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, fx) = golden_min(|x| Ok((x - 0.3).powi(2) + 1.0), 0.0, 1.0, 1e-10).unwrap();
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 1.0).abs() < 1e-15);
    }

    #[test]
    fn golden_handles_narrow_v() {
        let (x, _) = golden_min(
            |x| Ok(((x - 0.5713).powi(2) + 1e-20).sqrt()),
            0.56,
            0.58,
            1e-13,
        )
        .unwrap();
        assert!((x - 0.5713).abs() < 1e-12);
    }

    #[test]
    fn bisect_root() {
        let r = bisect(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-14, "sqrt2").unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        assert!(bisect(|x| Ok(x * x + 1.0), 0.0, 2.0, 1e-14, "none").is_err());
    }

    #[test]
    fn linspace_endpoints_exact() {
        let g = linspace(0.0, 1.0, 201);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[200], 1.0);
        assert_eq!(g[100], 0.5);
    }
}
