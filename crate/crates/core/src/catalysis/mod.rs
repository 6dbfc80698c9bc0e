//! Phase boundaries of the catalysed 3-spin model, small-kappa asymptotics,
//! the Rayleigh coefficient and scaling-law fits.

mod asymptotic;
mod scaling;

pub use asymptotic::{
    rayleigh_alpha_optimum, rayleigh_well, small_kappa_state, AsymptoticState, RayleighOptimum,
    RESIDUAL_ORDERS,
};
pub use scaling::{
    fit_gap_scaling, fit_kappa_c, quantum_width_scan, saddle_width_locus, Excluded, GapLaw, GapRow,
    GapScan, KappaScan, WidthRow, WidthScan, CROSSOVER_J, MAX_J,
};

pub use crate::fit::ScalingFit;

use crate::error::{Error, Result};
use crate::optimize::bisect;

fn check_kappa(kappa: f64, allow_zero: bool) -> Result<()> {
    let ok = if allow_zero {
        (0.0..=1.0).contains(&kappa)
    } else {
        kappa > 0.0 && kappa <= 1.0
    };
    if ok {
        Ok(())
    } else {
        Err(Error::param(
            "kappa",
            kappa,
            if allow_zero {
                "must lie in [0, 1]"
            } else {
                "must lie in (0, 1]"
            },
        ))
    }
}

fn check_p(p: u32) -> Result<()> {
    if p == 3 {
        Ok(())
    } else {
        Err(Error::param(
            "p",
            p as f64,
            "phase boundaries are derived for p = 3",
        ))
    }
}

/// Annealing ratio at which the ferromagnetic minimum first appears.
pub fn gamma_zero(kappa: f64) -> Result<f64> {
    check_kappa(kappa, false)?;
    let k = kappa;
    let root = (k * (19.0 * k - 2.0) + 1.0).powf(1.5);
    let rad = 169.0 * k.powi(4) - 172.0 * k.powi(3) + 78.0 * k * k + 8.0 * k
        - 2.0 * (k - 1.0) * root
        - 2.0;
    Ok(rad.max(0.0).sqrt() / (6.0 * k))
}

/// Annealing ratio where the paramagnetic curvature V''(0) vanishes.
pub fn gamma_second_order(kappa: f64) -> Result<f64> {
    check_kappa(kappa, true)?;
    Ok(2.0 * (1.0 - kappa))
}

/// Extrema of V(z) on z > 0: the ferromagnetic minimum and the summit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FerroMinimum {
    pub z1: f64,
    /// Barrier top between 0 and z1; 0 when z = 0 is itself a maximum.
    pub z_star: f64,
}

/// Coefficients a = kappa/gamma, b = (1-kappa)/gamma of V(z).
fn coefficients(gamma: f64, kappa: f64) -> Result<(f64, f64)> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::param(
            "gamma",
            gamma,
            "annealing ratio must be positive",
        ));
    }
    check_kappa(kappa, true)?;
    Ok((kappa / gamma, (1.0 - kappa) / gamma))
}

/// V(z) - V(0) for p = 3, written to avoid cancellation near z = 0.
pub(crate) fn potential_rise(z: f64, a: f64, b: f64) -> f64 {
    z * z / (1.0 + (1.0 - z * z).sqrt()) - a * z.powi(3) - b * z * z
}

pub(crate) fn curvature(z: f64, a: f64, b: f64) -> f64 {
    (1.0 - z * z).powf(-1.5) - 6.0 * a * z - 2.0 * b
}

/// Solves V'(z) = 0 away from the origin, i.e.
/// 1/sqrt(1-z^2) = 2b + 3 a z (the sin(theta1) condition).
pub fn ferro_minimum(gamma: f64, kappa: f64, p: u32) -> Result<FerroMinimum> {
    check_p(p)?;
    let (a, b) = coefficients(gamma, kappa)?;
    let f = |z: f64| 1.0 / (1.0 - z * z).sqrt() - 2.0 * b - 3.0 * a * z;
    // f is convex; its minimum solves z (1-z^2)^(-3/2) = 3a
    let top = 1.0 - 1e-15;
    let zm = if a == 0.0 {
        0.0
    } else {
        bisect(
            |z| Ok(z * (1.0 - z * z).powf(-1.5) - 3.0 * a),
            0.0,
            top,
            1e-16,
            "minimum of V'(z)/z",
        )?
    };
    let fm = f(zm);
    if fm > 1e-13 {
        return Err(Error::NoMinimum(format!(
            "no ferromagnetic minimum at gamma = {gamma}, kappa = {kappa} (above gamma0)"
        )));
    }
    if fm >= -1e-13 {
        return Ok(FerroMinimum { z1: zm, z_star: zm });
    }
    let z1 = bisect(|z| Ok(f(z)), zm, top, 1e-16, "ferromagnetic minimum")?;
    let z_star = if f(0.0) > 0.0 {
        bisect(|z| Ok(f(z)), 0.0, zm, 1e-16, "barrier summit")?
    } else {
        0.0
    };
    Ok(FerroMinimum { z1, z_star })
}

/// Annealing ratio at which both wells have equal depth, V(z1) = V(0).
pub fn gamma_classical(kappa: f64, p: u32) -> Result<f64> {
    check_p(p)?;
    let g0 = gamma_zero(kappa)?;
    let g2 = gamma_second_order(kappa)?;
    let span = g0 - g2;
    let depth = |gamma: f64| -> Result<f64> {
        let (a, b) = coefficients(gamma, kappa)?;
        let m = ferro_minimum(gamma, kappa, p)?;
        Ok(potential_rise(m.z1, a, b))
    };
    // at gamma -> gamma2 with kappa -> 1 the minimum is pushed against z = 1; stay clear
    bisect(
        depth,
        g2 + 1e-3 * span,
        g0 - 1e-9 * span,
        1e-15 * g0,
        "equal-depth annealing ratio",
    )
}

/// Gamma from the annealing ratio gamma = Gamma / (1 - Gamma).
pub fn field_from_ratio(gamma: f64) -> f64 {
    gamma / (1.0 + gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_zero_at_one() {
        assert!((gamma_zero(1.0).unwrap() - 1.5).abs() < 1e-14);
        assert!(gamma_zero(0.0).is_err());
    }

    #[test]
    fn gamma_zero_small_kappa_expansion() {
        let k = 0.01;
        let series = 2.0 * (1.0 - k) + 2.25 * k * k;
        assert!((gamma_zero(k).unwrap() - series).abs() < 10.0 * k.powi(3));
    }

    #[test]
    fn second_order_line() {
        assert_eq!(gamma_second_order(0.0).unwrap(), 2.0);
        assert_eq!(gamma_second_order(1.0).unwrap(), 0.0);
        assert_eq!(gamma_second_order(0.5).unwrap(), 1.0);
    }

    #[test]
    fn minimum_is_stationary() {
        let (g, k) = (1.2, 0.6);
        let m = ferro_minimum(g, k, 3).unwrap();
        let (a, b) = (k / g, (1.0 - k) / g);
        let dv = |z: f64| z / (1.0 - z * z).sqrt() - 3.0 * a * z * z - 2.0 * b * z;
        assert!(dv(m.z1).abs() < 1e-10);
        assert!(dv(m.z_star).abs() < 1e-10);
        assert!(m.z_star < m.z1);
    }

    #[test]
    fn no_minimum_above_gamma_zero() {
        let g0 = gamma_zero(0.5).unwrap();
        assert!(matches!(
            ferro_minimum(g0 * 1.01, 0.5, 3),
            Err(Error::NoMinimum(_))
        ));
    }

    #[test]
    fn extrema_merge_at_birth() {
        let g0 = gamma_zero(0.3).unwrap();
        let m = ferro_minimum(g0, 0.3, 3).unwrap();
        assert!((m.z1 - m.z_star).abs() < 1e-5);
    }

    #[test]
    fn classical_boundary_at_kappa_one() {
        let g = gamma_classical(1.0, 3).unwrap();
        assert!((field_from_ratio(g) - 0.565).abs() < 0.01);
    }

    #[test]
    fn boundary_ordering() {
        for i in 1..100 {
            let k = i as f64 / 100.0;
            let gc = gamma_classical(k, 3).unwrap();
            assert!(
                gamma_second_order(k).unwrap() < gc && gc < gamma_zero(k).unwrap(),
                "kappa = {k}"
            );
        }
    }

    #[test]
    fn classical_sweet_spot_small_kappa() {
        let xc =
            |k: f64| 2.0 * (gamma_zero(k).unwrap() - gamma_classical(k, 3).unwrap()).sqrt() / k;
        assert!((xc(0.005) - 1.0).abs() < 0.005);
        assert!((xc(0.2) - 1.07).abs() < 0.01);
        for i in 1..=40 {
            let x = xc(0.005 * i as f64);
            assert!((1.0..=1.075).contains(&x));
        }
    }

    #[test]
    fn only_p3() {
        assert!(ferro_minimum(1.0, 0.5, 4).is_err());
        assert!(gamma_classical(0.5, 5).is_err());
    }
}
