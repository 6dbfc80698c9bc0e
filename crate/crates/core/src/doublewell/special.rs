//! Parabolic cylinder functions and the Kummer-series summit solution.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Supported |nu| and |x| for [`parabolic_cylinder`].
pub const ENVELOPE: f64 = 50.0;

/// D_nu(x) and its derivative, stored as `(y, y') * exp(log_scale)`.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    y: f64,
    yp: f64,
    log_scale: f64,
}

impl Scaled {
    fn renormalize(&mut self) {
        let m = self.y.abs().max(self.yp.abs());
        if m > 0.0 && !(1e-100..=1e100).contains(&m) {
            self.log_scale += m.ln();
            self.y /= m;
            self.yp /= m;
        }
    }

    fn value(&self) -> (f64, f64) {
        let s = self.log_scale.exp();
        (self.y * s, self.yp * s)
    }
}

/// Radius beyond which the large-x expansion is used directly.
fn asymptotic_radius(nu: f64) -> f64 {
    12f64.max(2.0 * nu.abs() + 10.0)
}

/// Large positive x: x^nu exp(-x^2/4) times a descending series in 1/x^2.
fn asymptotic(nu: f64, x: f64) -> Scaled {
    let x2 = x * x;
    let mut term = 1.0f64;
    let mut s = 1.0f64;
    let mut ds = 0.0f64;
    for k in 1..400 {
        let kf = k as f64;
        let next = -term * (nu - 2.0 * kf + 2.0) * (nu - 2.0 * kf + 1.0) / (2.0 * kf * x2);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        s += term;
        ds += term * (-2.0 * kf / x);
        if term.abs() < 1e-18 * s.abs() {
            break;
        }
    }
    Scaled {
        y: s,
        yp: s * (nu / x - 0.5 * x) + ds,
        log_scale: nu * x.ln() - 0.25 * x2,
    }
}

/// Taylor-series step of y'' = (x^2/4 - nu - 1/2) y from `x0` by `h`.
fn taylor_step(st: &mut Scaled, nu: f64, x0: f64, h: f64) {
    let q0 = 0.25 * x0 * x0 - nu - 0.5;
    let q1 = 0.5 * x0;
    let q2 = 0.25;
    // c_{k-2}, c_{k-1}, c_k, c_{k+1}
    let (mut cm2, mut cm1, mut c0, mut c1) = (0.0, 0.0, st.y, st.yp);
    let mut y = c0 + c1 * h;
    let mut yp = c1;
    let mut hp = h;
    let scale = (st.y.abs() + st.yp.abs() * h.abs()).max(f64::MIN_POSITIVE);
    let mut quiet = 0;
    for k in 0..200usize {
        let c2 = (q0 * c0 + q1 * cm1 + q2 * cm2) / ((k + 2) as f64 * (k + 1) as f64);
        let t = c2 * hp;
        y += t * h;
        yp += (k + 2) as f64 * t;
        hp *= h;
        (cm2, cm1, c0, c1) = (cm1, c0, c1, c2);
        if (t * h).abs() + (k + 2) as f64 * (t * h).abs() < 1e-18 * scale {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    st.y = y;
    st.yp = yp;
    st.renormalize();
}

/// Scaled D_nu(x) for any real nu and x, without envelope checks.
fn pcf_scaled(nu: f64, x: f64) -> Scaled {
    let n = nu.round();
    if x < 0.0 && nu == n && n >= 0.0 {
        let mut s = pcf_scaled(nu, -x);
        let odd = (n as i64) % 2 != 0;
        if odd {
            s.y = -s.y;
        } else {
            s.yp = -s.yp;
        }
        return s;
    }
    let big_x = asymptotic_radius(nu);
    if x >= big_x {
        return asymptotic(nu, x);
    }
    let mut st = asymptotic(nu, big_x);
    st.renormalize();
    let mut x0 = big_x;
    while x0 > x {
        let q0 = 0.25 * x0 * x0 - nu - 0.5;
        let step = (1.0 / (1.0 + q0.abs().sqrt())).min(x0 - x);
        taylor_step(&mut st, nu, x0, -step);
        x0 -= step;
        if x0 - x < 1e-14 * (1.0 + x.abs()) {
            break;
        }
    }
    st
}

fn check_envelope(nu: f64, x: f64) -> Result<()> {
    if !nu.is_finite() || !x.is_finite() || nu.abs() > ENVELOPE || x.abs() > ENVELOPE {
        return Err(Error::OutOfEnvelope(format!(
            "parabolic cylinder D_nu(x) supports |nu|, |x| <= {ENVELOPE}; got nu = {nu}, x = {x}"
        )));
    }
    Ok(())
}

/// Weber parabolic cylinder function D_nu(x), the solution of
/// y'' = (x^2/4 - nu - 1/2) y that decays as x -> +infinity.
///
/// Values below the f64 range return 0; values above it are an error.
pub fn parabolic_cylinder(nu: f64, x: f64) -> Result<f64> {
    parabolic_cylinder_with_derivative(nu, x).map(|v| v.0)
}

/// D_nu(x) together with dD_nu/dx.
pub fn parabolic_cylinder_with_derivative(nu: f64, x: f64) -> Result<(f64, f64)> {
    check_envelope(nu, x)?;
    let s = pcf_scaled(nu, x);
    let (y, yp) = s.value();
    if !y.is_finite() || !yp.is_finite() {
        return Err(Error::OutOfEnvelope(format!(
            "D_nu(x) overflows f64 at nu = {nu}, x = {x}"
        )));
    }
    Ok((y, yp))
}

/// Logarithmic derivative D'_nu(x) / D_nu(x) scaled to stay finite: returns a
/// unit-norm pair proportional to (D, D').
pub(crate) fn parabolic_cylinder_direction(nu: f64, x: f64) -> (f64, f64) {
    let s = pcf_scaled(nu, x);
    let m = s.y.hypot(s.yp);
    (s.y / m, s.yp / m)
}

/// Even summit solution of phi'' + (xi^2 - 2 delta) phi = 0 with phi(0) = 1:
/// exp(-i xi^2/2) 1F1((1 - 2 i delta)/4; 1/2; i xi^2), real by Kummer's transformation.
pub fn summit_ground_kummer(delta_plus: f64, xi: f64) -> Result<f64> {
    summit_ground_kummer_with_derivative(delta_plus, xi).map(|v| v.0)
}

/// Summit solution and its xi-derivative.
pub fn summit_ground_kummer_with_derivative(delta_plus: f64, xi: f64) -> Result<(f64, f64)> {
    if !delta_plus.is_finite() || !xi.is_finite() {
        return Err(Error::param("summit argument", xi, "must be finite"));
    }
    let a = Complex64::new(0.25, -0.5 * delta_plus);
    let b = 0.5;
    let z = Complex64::new(0.0, xi * xi);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut ksum = Complex64::new(0.0, 0.0);
    let mut biggest = 1.0f64;
    let mut converged = false;
    for k in 0..2000usize {
        let kf = k as f64;
        term = term * (a + kf) / (b + kf) * z / (kf + 1.0);
        sum += term;
        ksum += term * (kf + 1.0);
        biggest = biggest.max(term.norm());
        if term.norm() < 1e-17 * sum.norm() && kf > z.norm() {
            converged = true;
            break;
        }
    }
    let phase = Complex64::new(0.0, -0.5 * xi * xi).exp();
    let value = phase * sum;
    let lost = biggest * f64::EPSILON;
    if !converged || lost > 1e-10 * value.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::NoConvergence {
            what: "Kummer series",
            iterations: 2000,
            residual: lost / value.norm().max(f64::MIN_POSITIVE),
        });
    }
    // d/dxi: phase * (-i xi F + 2 xi dF/dz) with z dF/dz = ksum
    let deriv = if xi == 0.0 {
        0.0
    } else {
        (phase * (Complex64::new(0.0, -xi) * sum + ksum * (2.0 / xi))).re
    };
    Ok((value.re, deriv))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders_are_closed_forms() {
        for &x in &[-7.5, -2.0, -0.3, 0.0, 0.4, 3.0, 9.0, 14.0] {
            let g = (-0.25f64 * x * x).exp();
            let d0 = parabolic_cylinder(0.0, x).unwrap();
            let d1 = parabolic_cylinder(1.0, x).unwrap();
            assert!((d0 - g).abs() <= 1e-12 * g, "D0({x})");
            assert!(
                (d1 - x * g).abs() <= 1e-12 * g * x.abs().max(1.0),
                "D1({x})"
            );
        }
    }

    #[test]
    fn kummer_pinned_at_origin() {
        assert_eq!(summit_ground_kummer(0.7, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn envelope_enforced() {
        assert!(parabolic_cylinder(51.0, 1.0).is_err());
        assert!(parabolic_cylinder(1.0, -50.5).is_err());
    }
}
