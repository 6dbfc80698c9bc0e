use std::sync::OnceLock;

use super::{
    check_kappa, curvature, ferro_minimum, gamma_second_order, gamma_zero, potential_rise,
};
use crate::doublewell::{gap_ratio, PiecewiseWell};
use crate::error::{Error, Result};
use crate::optimize::{argmax, linspace};

/// Geometry of the double well at gamma = gamma0 - (x kappa / 2)^2.
///
/// Index 0 is the paramagnetic well at z = 0, index 1 the ferromagnetic well
/// at z1 and `star` the barrier top. `xi*_scaled` are the scale-free
/// displacements divided by sqrt(j).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticState {
    pub kappa: f64,
    pub x: f64,
    pub gamma: f64,
    pub z1: f64,
    pub z_star: f64,
    pub v0: f64,
    pub v00: f64,
    pub omega0: f64,
    pub omega1: f64,
    pub omega_star: f64,
    pub inv_m0: f64,
    pub inv_m1: f64,
    pub inv_m_star: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub xi1_scaled: f64,
    pub xi2_scaled: f64,
}

/// Power of kappa at which each leading-order formula's error first enters.
pub const RESIDUAL_ORDERS: [(&str, u32); 15] = [
    ("z1", 2),
    ("z_star", 2),
    ("separation", 2),
    ("v0", 5),
    ("v00", 5),
    ("omega0", 3),
    ("omega1", 3),
    ("omega_star", 3),
    ("inv_m0", 3),
    ("inv_m1", 3),
    ("inv_m_star", 3),
    ("beta1", 1),
    ("beta2", 3),
    ("xi1_scaled", 2),
    ("xi2_scaled", 2),
];

impl AsymptoticState {
    /// Leading small-kappa formulas.
    pub fn leading(kappa: f64, x: f64) -> Result<Self> {
        check_kappa(kappa, false)?;
        if !(x > 0.0 && x < 3.0) {
            return Err(Error::param("x", x, "must lie in (0, 3)"));
        }
        let k = kappa;
        let k2 = k * k;
        let s3x = (3.0 * x).sqrt();
        Ok(Self {
            kappa,
            x,
            gamma: gamma_zero(kappa)? - (0.5 * x * k).powi(2),
            z1: (3.0 + x) * k / 2.0,
            z_star: (3.0 - x) * k / 2.0,
            v0: k2 * k2 / 128.0 * (3.0 - x).powi(3) * (1.0 + x),
            v00: x.powi(3) * k2 * k2 / 8.0,
            omega0: (9.0 - x * x) * k2 / 8.0,
            omega1: s3x / 4.0 * (3.0 + x) * k2,
            omega_star: s3x / 4.0 * (3.0 - x) * k2,
            inv_m0: (9.0 - x * x) * k2 / 8.0,
            inv_m1: 0.75 * (3.0 + x) * k2,
            inv_m_star: 0.75 * (3.0 - x) * k2,
            beta1: (x / 3.0).powf(0.25),
            beta2: 1.0 - 15.0 / 8.0 * x * k2,
            xi1_scaled: (x / 3.0).powf(0.25) * (3.0 - x) / 2.0 * k,
            xi2_scaled: x.powf(1.25) * 3f64.powf(-0.25) * k,
        })
    }

    /// The same quantities from the exact potential and inverse mass.
    pub fn exact(kappa: f64, x: f64) -> Result<Self> {
        check_kappa(kappa, false)?;
        let gamma = gamma_zero(kappa)? - (0.5 * x * kappa).powi(2);
        if !(x > 0.0) || gamma <= gamma_second_order(kappa)? {
            return Err(Error::param(
                "x",
                x,
                "sweet spot must lie between gamma2 and gamma0",
            ));
        }
        let m = ferro_minimum(gamma, kappa, 3)?;
        let (a, b) = (kappa / gamma, (1.0 - kappa) / gamma);
        let inv_mass = |z: f64| (1.0 - z * z).sqrt() - 2.0 * (1.0 - z * z) * b;
        let (z1, zs) = (m.z1, m.z_star);
        let (mi0, mi1, mis) = (inv_mass(0.0), inv_mass(z1), inv_mass(zs));
        let w0 = (curvature(0.0, a, b) * mi0).sqrt();
        let w1 = (curvature(z1, a, b) * mi1).sqrt();
        let ws = (-curvature(zs, a, b) * mis).sqrt();
        // sigma = sqrt(hbar / (m omega)); ratios are hbar-free
        let stiff_star = ws / mis;
        let v0 = potential_rise(zs, a, b);
        Ok(Self {
            kappa,
            x,
            gamma,
            z1,
            z_star: zs,
            v0,
            v00: v0 - potential_rise(z1, a, b),
            omega0: w0,
            omega1: w1,
            omega_star: ws,
            inv_m0: mi0,
            inv_m1: mi1,
            inv_m_star: mis,
            beta1: (stiff_star / (w0 / mi0)).sqrt(),
            beta2: (stiff_star / (w1 / mi1)).sqrt(),
            xi1_scaled: zs * stiff_star.sqrt(),
            xi2_scaled: (z1 - zs) * stiff_star.sqrt(),
        })
    }

    /// Scale-free displacements (xi1, xi2) at spin j.
    pub fn xi(&self, j: f64) -> (f64, f64) {
        (self.xi1_scaled * j.sqrt(), self.xi2_scaled * j.sqrt())
    }

    /// Named values in the order of [`RESIDUAL_ORDERS`].
    pub fn quantities(&self) -> [(&'static str, f64); 15] {
        [
            ("z1", self.z1),
            ("z_star", self.z_star),
            ("separation", self.z1 - self.z_star),
            ("v0", self.v0),
            ("v00", self.v00),
            ("omega0", self.omega0),
            ("omega1", self.omega1),
            ("omega_star", self.omega_star),
            ("inv_m0", self.inv_m0),
            ("inv_m1", self.inv_m1),
            ("inv_m_star", self.inv_m_star),
            ("beta1", self.beta1),
            ("beta2", self.beta2),
            ("xi1_scaled", self.xi1_scaled),
            ("xi2_scaled", self.xi2_scaled),
        ]
    }
}

/// Leading-order state on the small-kappa envelope kappa <= 0.2, 0 < x <= 1.07.
pub fn small_kappa_state(kappa: f64, x: f64) -> Result<AsymptoticState> {
    if !(kappa > 0.0 && kappa <= 0.2) {
        return Err(Error::OutOfEnvelope(format!(
            "small-kappa formulas need 0 < kappa <= 0.2, got {kappa}"
        )));
    }
    if !(x > 0.0 && x <= 1.07) {
        return Err(Error::OutOfEnvelope(format!(
            "sweet-spot parameter needs 0 < x <= 1.07, got {x}"
        )));
    }
    AsymptoticState::leading(kappa, x)
}

/// Peak of the alpha-weighted gap of the resonant asymmetric well.
#[derive(Debug, Clone, PartialEq)]
pub struct RayleighOptimum {
    pub alpha: f64,
    /// Gap ratio times alpha^2 at the optimum.
    pub weighted_gap: f64,
    pub gap_ratio: f64,
    /// Delta_c j^2 = hbar omega* j^2 * gap ratio, with hbar omega* = (sqrt(3)/2) alpha^2 / j^2 at x = 1.
    pub gap_law_coefficient: f64,
    /// Coarse scan (alpha, gap ratio * alpha^2).
    pub scan: Vec<(f64, f64)>,
}

/// The asymmetric well {alpha/3^(1/4), 1, alpha/3^(1/4), 3^(-1/4)}.
pub fn rayleigh_well(alpha: f64) -> Result<PiecewiseWell> {
    let c = 3f64.powf(-0.25);
    PiecewiseWell::new(alpha * c, alpha * c, 1.0, c)
}

fn weighted_gap(alpha: f64) -> Result<f64> {
    Ok(gap_ratio(&rayleigh_well(alpha)?)? * alpha * alpha)
}

fn compute_optimum() -> Result<RayleighOptimum> {
    let alphas = linspace(0.5, 4.0, 71);
    let values = alphas
        .iter()
        .map(|&a| weighted_gap(a))
        .collect::<Result<Vec<_>>>()?;
    // the curve rises again at large alpha where the detuned wells decouple;
    // the optimum is the first interior peak
    let i = (1..values.len() - 1)
        .find(|&i| values[i] >= values[i - 1] && values[i] > values[i + 1])
        .ok_or_else(|| {
            Error::NoMinimum("alpha-weighted gap has no interior maximum on [0.5, 4]".into())
        })?;
    let fine = linspace(alphas[i - 1], alphas[i + 1], 101);
    let fv = fine
        .iter()
        .map(|&a| weighted_gap(a))
        .collect::<Result<Vec<_>>>()?;
    let k = argmax(&fv)
        .ok_or(Error::Empty("alpha grid"))?
        .clamp(1, fine.len() - 2);
    let (x0, x1) = (fine[k - 1], fine[k]);
    let (y0, y1, y2) = (fv[k - 1], fv[k], fv[k + 1]);
    let denom = y0 - 2.0 * y1 + y2;
    let alpha = if denom < 0.0 {
        x1 + 0.5 * (x1 - x0) * (y0 - y2) / denom
    } else {
        x1
    };
    let w = weighted_gap(alpha)?;
    Ok(RayleighOptimum {
        alpha,
        weighted_gap: w,
        gap_ratio: w / (alpha * alpha),
        gap_law_coefficient: 0.5 * 3f64.sqrt() * w,
        scan: alphas.into_iter().zip(values).collect(),
    })
}

/// Computed once per process and cached.
pub fn rayleigh_alpha_optimum() -> Result<RayleighOptimum> {
    static CACHE: OnceLock<Result<RayleighOptimum>> = OnceLock::new();
    CACHE.get_or_init(compute_optimum).clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barrier_example() {
        let s = small_kappa_state(0.1, 1.0).unwrap();
        assert!((s.v0 - 1.25e-5).abs() < 1e-18);
        assert!((s.z1 - 0.2).abs() < 1e-15 && (s.z_star - 0.1).abs() < 1e-15);
    }

    #[test]
    fn unit_mass_frequency_product() {
        for &(k, x) in &[(0.1, 0.3), (0.05, 1.0), (0.2, 1.07)] {
            let s = small_kappa_state(k, x).unwrap();
            assert!((s.omega0 / s.inv_m0 - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn envelope_enforced() {
        assert!(small_kappa_state(0.3, 1.0).is_err());
        assert!(small_kappa_state(0.1, 1.2).is_err());
    }
}
