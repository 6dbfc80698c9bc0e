//! Parabolic cylinder and Kummer evaluations against independent oracles.

use qcat::doublewell::{
    parabolic_cylinder, parabolic_cylinder_with_derivative, summit_ground_kummer_with_derivative,
};
use statrs::function::erf::erfc;
use statrs::function::gamma::gamma;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Integral representation for nu < 0, with t = u^2 to smooth the origin:
/// D_nu(x) = exp(-x^2/4) / Gamma(-nu) * int_0^inf 2 u^(-2 nu - 1) exp(-x u^2 - u^4/2) du.
fn d_quadrature(nu: f64, x: f64) -> f64 {
    let upper = 12.0;
    let n = 40_000;
    let h = upper / n as f64;
    let f = |u: f64| 2.0 * u.powf(-2.0 * nu - 1.0) * (-x * u * u - 0.5 * u.powi(4)).exp();
    // composite Simpson
    let mut s = f(0.0) + f(upper);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(i as f64 * h);
    }
    (-x * x / 4.0).exp() / gamma(-nu) * s * h / 3.0
}

#[test]
fn matches_integral_representation() {
    for nu in [-0.5, -1.3, -2.0, -2.7, -4.25] {
        for x in [-2.0, -0.5, 0.0, 0.7, 1.5, 3.0] {
            let want = d_quadrature(nu, x);
            let got = parabolic_cylinder(nu, x).unwrap();
            assert!(rel(got, want) < 1e-8, "nu={nu} x={x}: {got} vs {want}");
        }
    }
}

#[test]
fn closed_forms() {
    for x in [-3.0, -1.0, 0.0, 0.4, 2.5, 6.0] {
        let g = (-x * x / 4.0f64).exp();
        // absolute scale keeps the zeros of D_1 (x = 0) and D_2 (x = +-1) meaningful
        let scale = g * (1.0 + x * x);
        assert!((parabolic_cylinder(1.0, x).unwrap() - x * g).abs() <= 1e-10 * scale);
        assert!((parabolic_cylinder(2.0, x).unwrap() - (x * x - 1.0) * g).abs() <= 1e-10 * scale);
        let dm1 =
            (x * x / 4.0f64).exp() * (std::f64::consts::PI / 2.0).sqrt() * erfc(x / 2f64.sqrt());
        assert!(
            rel(parabolic_cylinder(-1.0, x).unwrap(), dm1) < 1e-10,
            "x={x}"
        );
    }
}

#[test]
fn three_term_recurrence() {
    for nu in [-3.4, -1.5, -0.2, 0.6, 2.3, 5.5, 9.1] {
        for x in [-2.5, -0.3, 0.0, 1.2, 4.0, 8.0] {
            let up = parabolic_cylinder(nu + 1.0, x).unwrap();
            let mid = parabolic_cylinder(nu, x).unwrap();
            let down = parabolic_cylinder(nu - 1.0, x).unwrap();
            let scale = up.abs().max((x * mid).abs()).max((nu * down).abs());
            let r = up - x * mid + nu * down;
            assert!(
                r.abs() <= 1e-9 * scale,
                "nu={nu} x={x}: residual {r} at scale {scale}"
            );
        }
    }
}

#[test]
fn wronskian() {
    // W[D_nu(x), D_nu(-x)] = sqrt(2 pi) / Gamma(-nu)
    for nu in [-2.6, -0.7, 0.3, 1.45, 3.2] {
        let want = (2.0 * std::f64::consts::PI).sqrt() / gamma(-nu);
        for x in [0.0, 0.8, 2.0] {
            let (a, da) = parabolic_cylinder_with_derivative(nu, x).unwrap();
            let (b, db) = parabolic_cylinder_with_derivative(nu, -x).unwrap();
            let w = a * (-db) - da * b;
            assert!(
                (w - want).abs() < 1e-9 * want.abs().max(1.0),
                "nu={nu} x={x}: {w} vs {want}"
            );
        }
    }
}

#[test]
fn derivative_matches_difference() {
    for (nu, x) in [(0.4, 1.0), (-1.7, -2.0), (6.3, 3.5)] {
        let h = 1e-5;
        let num = (parabolic_cylinder(nu, x + h).unwrap() - parabolic_cylinder(nu, x - h).unwrap())
            / (2.0 * h);
        let (_, d) = parabolic_cylinder_with_derivative(nu, x).unwrap();
        assert!((num - d).abs() < 1e-7 * d.abs().max(1.0));
    }
}

/// RK4 on phi'' = (2 delta - xi^2) phi from phi(0) = 1, phi'(0) = 0.
fn shoot(delta: f64, xi_end: f64) -> (f64, f64) {
    let n = 200_000;
    let h = xi_end / n as f64;
    let f = |x: f64, y: [f64; 2]| [y[1], (2.0 * delta - x * x) * y[0]];
    let mut y = [1.0, 0.0];
    let mut x = 0.0;
    for _ in 0..n {
        let k1 = f(x, y);
        let k2 = f(
            x + h / 2.0,
            [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]],
        );
        let k3 = f(
            x + h / 2.0,
            [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]],
        );
        let k4 = f(x + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        x += h;
    }
    (y[0], y[1])
}

#[test]
fn kummer_solves_summit_equation() {
    for delta in [0.0, 0.3, 1.1, 2.5] {
        for xi in [0.5, 1.5, 2.5, 3.5] {
            let (p, dp) = summit_ground_kummer_with_derivative(delta, xi).unwrap();
            let (q, dq) = shoot(delta, xi);
            let scale = q.abs().max(dq.abs()).max(1.0);
            assert!(
                (p - q).abs() < 1e-8 * scale,
                "delta={delta} xi={xi}: {p} vs {q}"
            );
            assert!(
                (dp - dq).abs() < 1e-8 * scale,
                "delta={delta} xi={xi}: {dp} vs {dq}"
            );
        }
    }
}
