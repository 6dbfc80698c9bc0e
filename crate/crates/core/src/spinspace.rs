//! Collective-spin operators and annealing Hamiltonians in the symmetric subspace.
//!
//! Basis order is m ascending: index `i` holds `m = i - j`.

use crate::banded::BandedSymmetricMatrix;
use crate::error::{Error, Result};

/// Total spin stored as the integer `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwiceSpin(u32);

impl TwiceSpin {
    pub const fn new(two_j: u32) -> Self {
        Self(two_j)
    }

    /// Accepts `j` only if `2j` is a non-negative integer.
    pub fn from_j(j: f64) -> Result<Self> {
        let t = 2.0 * j;
        if !t.is_finite() || t < 0.0 || (t - t.round()).abs() > 1e-12 || t > u32::MAX as f64 {
            return Err(Error::InvalidSpin(j));
        }
        Ok(Self(t.round() as u32))
    }

    /// Spin for `n` qubits, `j = n/2`.
    pub const fn from_qubits(n: u32) -> Self {
        Self(n)
    }

    pub fn two_j(self) -> u32 {
        self.0
    }

    pub fn j(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    /// `m` for basis index `i`.
    pub fn m(self, i: usize) -> f64 {
        i as f64 - self.j()
    }

    fn require_positive(self) -> Result<()> {
        if self.0 == 0 {
            Err(Error::param("j", 0.0, "need j > 0"))
        } else {
            Ok(())
        }
    }
}

impl std::fmt::Display for TwiceSpin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Location in the (Gamma, kappa) control plane of the driven p-spin model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlPoint {
    pub gamma: f64,
    pub kappa: f64,
}

impl ControlPoint {
    pub fn new(gamma: f64, kappa: f64) -> Result<Self> {
        unit_interval("Gamma", gamma)?;
        unit_interval("kappa", kappa)?;
        Ok(Self { gamma, kappa })
    }

    /// gamma = Gamma / (1 - Gamma); defined for 0 < Gamma < 1.
    pub fn annealing_ratio(&self) -> Result<f64> {
        if self.gamma <= 0.0 || self.gamma >= 1.0 {
            return Err(Error::UndefinedRatio(self.gamma));
        }
        Ok(self.gamma / (1.0 - self.gamma))
    }
}

/// Transverse and longitudinal fields of the LMG model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmgControl {
    pub gamma_x: f64,
    pub gamma_z: f64,
}

impl LmgControl {
    pub fn new(gamma_x: f64, gamma_z: f64) -> Result<Self> {
        unit_interval("Gamma_x", gamma_x)?;
        if !(-1.0..=1.0).contains(&gamma_z) {
            return Err(Error::param("Gamma_z", gamma_z, "must lie in [-1, 1]"));
        }
        Ok(Self { gamma_x, gamma_z })
    }

    pub fn annealing_ratio(&self) -> Result<f64> {
        if self.gamma_x <= 0.0 || self.gamma_x >= 1.0 {
            return Err(Error::UndefinedRatio(self.gamma_x));
        }
        Ok(self.gamma_x / (1.0 - self.gamma_x))
    }
}

fn unit_interval(name: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::param(name, v, "must lie in [0, 1]"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinParams {
    pub spin: TwiceSpin,
    pub p: u32,
    pub control: ControlPoint,
}

impl SpinParams {
    pub fn new(spin: TwiceSpin, p: u32, control: ControlPoint) -> Result<Self> {
        if p < 2 {
            return Err(Error::param(
                "p",
                p as f64,
                "interaction power must be >= 2",
            ));
        }
        let control = ControlPoint::new(control.gamma, control.kappa)?;
        Ok(Self { spin, p, control })
    }
}

pub fn build_jz(spin: TwiceSpin) -> BandedSymmetricMatrix {
    BandedSymmetricMatrix::diagonal((0..spin.dim()).map(|i| spin.m(i)).collect())
}

/// `<m+1|Jx|m> = sqrt(j^2 - m^2 + j - m) / 2`.
pub fn build_jx(spin: TwiceSpin) -> BandedSymmetricMatrix {
    let j = spin.j();
    let off = (0..spin.dim() - 1)
        .map(|i| {
            let m = spin.m(i);
            0.5 * (j * j - m * m + j - m).max(0.0).sqrt()
        })
        .collect();
    BandedSymmetricMatrix::from_bands(vec![vec![0.0; spin.dim()], off])
        .unwrap_or_else(|_| BandedSymmetricMatrix::diagonal(vec![0.0]))
}

/// Gamma-independent pieces of the p-spin Hamiltonian, reused across a landscape.
#[derive(Debug, Clone)]
pub struct PSpinTerms {
    spin: TwiceSpin,
    p: u32,
    jx: BandedSymmetricMatrix,
    jx2: BandedSymmetricMatrix,
    zp: Vec<f64>,
}

impl PSpinTerms {
    pub fn new(spin: TwiceSpin, p: u32) -> Result<Self> {
        spin.require_positive()?;
        if p < 2 {
            return Err(Error::param(
                "p",
                p as f64,
                "interaction power must be >= 2",
            ));
        }
        let j = spin.j();
        let jx = build_jx(spin).scaled(1.0 / j);
        let jx2 = jx.square();
        let zp = (0..spin.dim())
            .map(|i| (spin.m(i) / j).powi(p as i32))
            .collect();
        Ok(Self {
            spin,
            p,
            jx,
            jx2,
            zp,
        })
    }

    pub fn spin(&self) -> TwiceSpin {
        self.spin
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// `-Gamma Jx/j - kappa (1-Gamma) (Jz/j)^p + (1-Gamma)(1-kappa) (Jx/j)^2`.
    pub fn hamiltonian(&self, c: ControlPoint) -> BandedSymmetricMatrix {
        let n = self.spin.dim();
        let a = (1.0 - c.gamma) * (1.0 - c.kappa);
        let b = c.kappa * (1.0 - c.gamma);
        let mut bands = Vec::with_capacity(3);
        bands.push(
            (0..n)
                .map(|i| -b * self.zp[i] + a * self.jx2.band(0)[i])
                .collect::<Vec<_>>(),
        );
        if n > 1 {
            bands.push(
                (0..n - 1)
                    .map(|i| -c.gamma * self.jx.band(1)[i] + a * self.jx2.band(1)[i])
                    .collect(),
            );
        }
        if n > 2 {
            bands.push(self.jx2.band(2).iter().map(|v| a * v).collect());
        }
        BandedSymmetricMatrix::from_bands(bands).expect("band lengths are consistent")
    }
}

pub fn build_pspin_hamiltonian(params: &SpinParams) -> Result<BandedSymmetricMatrix> {
    let params = SpinParams::new(params.spin, params.p, params.control)?;
    Ok(PSpinTerms::new(params.spin, params.p)?.hamiltonian(params.control))
}

/// `-Gx Jx/j - (1-Gx)[(1-|Gz|)(Jz/j)^2 + Gz Jz/j]`.
pub fn build_lmg_hamiltonian(spin: TwiceSpin, c: LmgControl) -> Result<BandedSymmetricMatrix> {
    spin.require_positive()?;
    let c = LmgControl::new(c.gamma_x, c.gamma_z)?;
    let j = spin.j();
    let g = 1.0 - c.gamma_x;
    let diag = (0..spin.dim())
        .map(|i| {
            let z = spin.m(i) / j;
            -g * ((1.0 - c.gamma_z.abs()) * z * z + c.gamma_z * z)
        })
        .collect();
    let jx = build_jx(spin);
    let off = if spin.dim() > 1 {
        jx.band(1).iter().map(|v| -c.gamma_x * v / j).collect()
    } else {
        Vec::new()
    };
    let bands = if spin.dim() > 1 {
        vec![diag, off]
    } else {
        vec![diag]
    };
    BandedSymmetricMatrix::from_bands(bands)
}

/// Energy of the product state at polar angle `theta` from the x axis.
pub fn mean_field_energy(theta: f64, params: &SpinParams) -> f64 {
    let ControlPoint { gamma, kappa } = params.control;
    let (s, c) = theta.sin_cos();
    -gamma * c - kappa * (1.0 - gamma) * s.powi(params.p as i32)
        + (1.0 - gamma) * (1.0 - kappa) * c * c
}

/// Spin coherent state pointing at angle `theta` from x toward z.
pub fn coherent_state(spin: TwiceSpin, theta: f64) -> Vec<f64> {
    let n = spin.two_j() as usize;
    let vartheta = std::f64::consts::FRAC_PI_2 - theta;
    let (sh, ch) = (0.5 * vartheta).sin_cos();
    let mut ln_fact = vec![0.0f64; n + 1];
    for k in 1..=n {
        ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
    }
    let mut psi: Vec<f64> = (0..=n)
        .map(|up| {
            let down = n - up;
            let ln_binom = ln_fact[n] - ln_fact[up] - ln_fact[down];
            let mut a = (0.5 * ln_binom).exp();
            a *= ch.abs().powi(up as i32) * sh.abs().powi(down as i32);
            a * ch.signum().powi(up as i32) * sh.signum().powi(down as i32)
        })
        .collect();
    let norm = psi.iter().map(|v| v * v).sum::<f64>().sqrt();
    psi.iter_mut().for_each(|v| *v /= norm);
    psi
}

/// Mean spin direction and spread, normalized by `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinVectorStats {
    pub r: f64,
    pub theta: f64,
    pub delta_r: f64,
    pub mean: [f64; 3],
    pub variance: [f64; 3],
}

pub fn spin_vector_stats(state: &[f64], spin: TwiceSpin) -> Result<SpinVectorStats> {
    spin.require_positive()?;
    if state.len() != spin.dim() {
        return Err(Error::param(
            "state length",
            state.len() as f64,
            "must equal 2j + 1",
        ));
    }
    let norm2: f64 = state.iter().map(|v| v * v).sum();
    if (norm2 - 1.0).abs() > 1e-10 {
        return Err(Error::param(
            "state norm^2",
            norm2,
            "state must be normalized",
        ));
    }
    let j = spin.j();
    let jx = build_jx(spin);
    let jx_psi = jx.matvec(state);
    let mx: f64 = jx_psi.iter().zip(state).map(|(a, b)| a * b).sum();
    let x2: f64 = jx_psi.iter().map(|v| v * v).sum();
    let mut mz = 0.0;
    let mut z2 = 0.0;
    for (i, a) in state.iter().enumerate() {
        let m = spin.m(i);
        mz += m * a * a;
        z2 += m * m * a * a;
    }
    let y2 = (j * (j + 1.0) - x2 - z2).max(0.0);
    let variance = [(x2 - mx * mx).max(0.0), y2, (z2 - mz * mz).max(0.0)];
    Ok(SpinVectorStats {
        r: (mx * mx + mz * mz).sqrt() / j,
        theta: mz.atan2(mx),
        delta_r: variance.iter().sum::<f64>().sqrt() / j,
        mean: [mx, 0.0, mz],
        variance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jz_entries() {
        assert_eq!(build_jz(TwiceSpin::new(1)).band(0), &[-0.5, 0.5]);
        assert_eq!(build_jz(TwiceSpin::new(2)).band(0), &[-1.0, 0.0, 1.0]);
        assert_eq!(build_jz(TwiceSpin::new(3)).band(0), &[-1.5, -0.5, 0.5, 1.5]);
    }

    #[test]
    fn non_half_integer_rejected() {
        assert!(TwiceSpin::from_j(0.3).is_err());
        assert!(TwiceSpin::from_j(-1.0).is_err());
        assert_eq!(TwiceSpin::from_j(2.5).unwrap().two_j(), 5);
    }

    #[test]
    fn jx_offdiagonals() {
        assert_eq!(build_jx(TwiceSpin::new(1)).band(1), &[0.5]);
        let b = build_jx(TwiceSpin::new(2));
        for v in b.band(1) {
            assert!((v - 0.5f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn pspin_limits() {
        let s = TwiceSpin::new(4);
        let h1 = build_pspin_hamiltonian(
            &SpinParams::new(s, 3, ControlPoint::new(1.0, 0.3).unwrap()).unwrap(),
        )
        .unwrap();
        let want = build_jx(s).scaled(-0.5);
        for i in 0..5 {
            for k in 0..5 {
                assert!((h1.get(i, k) - want.get(i, k)).abs() < 1e-15);
            }
        }
        let h0 = build_pspin_hamiltonian(
            &SpinParams::new(s, 3, ControlPoint::new(0.0, 1.0).unwrap()).unwrap(),
        )
        .unwrap();
        assert_eq!(h0.get(4, 4), -1.0);
        assert_eq!(h0.get(3, 3), -0.125);
        assert_eq!(h0.get(3, 4), 0.0);
    }

    #[test]
    fn rejects_low_power_and_bad_fields() {
        assert!(SpinParams::new(
            TwiceSpin::new(2),
            1,
            ControlPoint {
                gamma: 0.5,
                kappa: 0.5
            }
        )
        .is_err());
        assert!(LmgControl::new(0.5, 1.5).is_err());
        assert!(ControlPoint::new(1.2, 0.5).is_err());
        assert!(ControlPoint::new(1.0, 0.5)
            .unwrap()
            .annealing_ratio()
            .is_err());
    }

    #[test]
    fn mean_field_examples() {
        let p = |g, k| {
            SpinParams::new(TwiceSpin::new(10), 3, ControlPoint::new(g, k).unwrap()).unwrap()
        };
        assert!((mean_field_energy(0.0, &p(0.3, 0.4)) - (-0.3 + 0.7 * 0.6)).abs() < 1e-15);
        assert!((mean_field_energy(std::f64::consts::FRAC_PI_2, &p(0.5, 1.0)) + 0.5).abs() < 1e-15);
        assert!(mean_field_energy(std::f64::consts::FRAC_PI_2, &p(0.5, 0.0)).abs() < 1e-15);
    }

    #[test]
    fn coherent_state_moments() {
        let s = TwiceSpin::new(20);
        let psi = coherent_state(s, 0.4);
        let st = spin_vector_stats(&psi, s).unwrap();
        assert!((st.r - 1.0).abs() < 1e-12);
        assert!((st.theta - 0.4).abs() < 1e-12);
        assert!((st.delta_r - 1.0 / 10f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn stats_examples() {
        let s = TwiceSpin::new(4);
        let mut top = vec![0.0; 5];
        top[4] = 1.0;
        let st = spin_vector_stats(&top, s).unwrap();
        assert_eq!(st.r, 1.0);
        assert!((st.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((st.delta_r - 0.5f64.sqrt()).abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let ghz = vec![h, 0.0, 0.0, 0.0, h];
        assert!(spin_vector_stats(&ghz, s).unwrap().r.abs() < 1e-15);
        assert!(spin_vector_stats(&[1.0, 1.0, 0.0, 0.0, 0.0], s).is_err());
    }
}
