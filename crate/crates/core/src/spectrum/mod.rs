//! Low-lying spectra, gaps, parity sectors and control landscapes.

mod eigen;
mod landscape;
mod saddle;

pub use eigen::{
    fix_sign, lowest_eigenvalues, lowest_eigenvectors, sturm_count, tridiagonal_form,
    tridiagonal_lowest,
};
pub use landscape::{scan_landscape, GapLandscape};
pub use saddle::{
    min_gap_over_gamma, saddle_from_landscape, saddle_search, GammaMinimum, Saddle, SaddleOptions,
};

use crate::banded::BandedSymmetricMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl std::fmt::Display for Parity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Parity::Even => "+",
            Parity::Odd => "-",
        })
    }
}

/// Lowest levels of a Hamiltonian and the gaps above the ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    pub eigenvalues: Vec<f64>,
    pub delta01: f64,
    pub delta02: Option<f64>,
    pub ground_state: Option<Vec<f64>>,
    pub parity_labels: Option<Vec<Parity>>,
}

impl SpectralSummary {
    /// Gaps from an ascending list with at least two levels.
    pub fn from_levels(eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.len() < 2 {
            return Err(Error::param(
                "levels",
                eigenvalues.len() as f64,
                "need at least two levels for a gap",
            ));
        }
        let e0 = eigenvalues[0];
        Ok(Self {
            delta01: clean_gap(eigenvalues[1] - e0, e0),
            delta02: eigenvalues.get(2).map(|e| clean_gap(e - e0, e0)),
            eigenvalues,
            ground_state: None,
            parity_labels: None,
        })
    }

    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }
}

/// Differences at the rounding level of the levels themselves are stored as zero.
fn clean_gap(gap: f64, e0: f64) -> f64 {
    if gap <= 4.0 * f64::EPSILON * e0.abs() {
        0.0
    } else {
        gap
    }
}

/// The `k` lowest levels without eigenvectors.
pub fn lowest_levels(m: &BandedSymmetricMatrix, k: usize) -> Result<SpectralSummary> {
    SpectralSummary::from_levels(lowest_eigenvalues(m, k)?)
}

/// The `k` lowest levels plus the sign-fixed ground state.
pub fn lowest_eigenpairs(m: &BandedSymmetricMatrix, k: usize) -> Result<SpectralSummary> {
    let (values, mut vectors) = lowest_eigenvectors(m, k)?;
    let mut s = SpectralSummary::from_levels(values)?;
    s.ground_state = Some(vectors.swap_remove(0));
    Ok(s)
}

/// Largest entrywise deviation of `R H R` from `H`, with `R|m> = |-m>`.
pub fn reflection_defect(m: &BandedSymmetricMatrix) -> f64 {
    let n = m.dim();
    let mut defect = 0.0f64;
    for k in 0..=m.bandwidth() {
        for (i, &a) in m.band(k).iter().enumerate() {
            let mirrored = m.get(n - 1 - i, n - 1 - (i + k));
            defect = defect.max((a - mirrored).abs());
        }
    }
    defect
}

struct SectorVector {
    hi: usize,
    lo: usize,
    sign: f64,
}

impl SectorVector {
    fn entries(&self) -> [(usize, f64); 2] {
        if self.hi == self.lo {
            [(self.hi, 1.0), (self.lo, 0.0)]
        } else {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            [(self.hi, h), (self.lo, self.sign * h)]
        }
    }
}

fn sector_basis(n: usize, parity: Parity) -> Vec<SectorVector> {
    let sign = match parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    let mut basis = Vec::new();
    if n % 2 == 1 {
        let c = n / 2;
        if parity == Parity::Even {
            basis.push(SectorVector { hi: c, lo: c, sign });
        }
        for s in 1..=c {
            basis.push(SectorVector {
                hi: c + s,
                lo: c - s,
                sign,
            });
        }
    } else {
        let h = n / 2;
        for s in 0..h {
            basis.push(SectorVector {
                hi: h + s,
                lo: h - 1 - s,
                sign,
            });
        }
    }
    basis
}

/// Restriction of a reflection-symmetric band matrix to one parity sector.
pub fn parity_sector(m: &BandedSymmetricMatrix, parity: Parity) -> Option<BandedSymmetricMatrix> {
    let basis = sector_basis(m.dim(), parity);
    let d = basis.len();
    if d == 0 {
        return None;
    }
    let bw = m.bandwidth().min(d - 1);
    let mut out = BandedSymmetricMatrix::zeros(d, bw);
    for s in 0..d {
        for t in s..=(s + bw).min(d - 1) {
            let mut v = 0.0;
            for (i, a) in basis[s].entries() {
                for (k, b) in basis[t].entries() {
                    if a != 0.0 && b != 0.0 {
                        v += a * b * m.get(i, k);
                    }
                }
            }
            out.set(s, t, v);
        }
    }
    Some(out)
}

/// Levels labelled by reflection parity, from separate sector solves.
///
/// `delta01` is the gap to the lowest level of opposite parity to the ground
/// state, `delta02` the gap to the next level of the same parity.
pub fn parity_resolved_gaps(m: &BandedSymmetricMatrix, k: usize) -> Result<SpectralSummary> {
    m.check_finite()?;
    let scale = m
        .bands()
        .iter()
        .flatten()
        .fold(0.0f64, |a, v| a.max(v.abs()));
    let defect = reflection_defect(m);
    if defect > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NotParitySymmetric { defect });
    }
    let mut levels: Vec<(f64, Parity)> = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        if let Some(sector) = parity_sector(m, parity) {
            let kk = k.min(sector.dim());
            for e in lowest_eigenvalues(&sector, kk)? {
                levels.push((e, parity));
            }
        }
    }
    levels.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then((a.1 == Parity::Odd).cmp(&(b.1 == Parity::Odd)))
    });
    if levels.len() < 2 {
        return Err(Error::param(
            "dim",
            m.dim() as f64,
            "need at least two levels for a gap",
        ));
    }
    let (e0, p0) = levels[0];
    let cross = levels.iter().skip(1).find(|l| l.1 != p0).map(|l| l.0 - e0);
    let same = levels.iter().skip(1).find(|l| l.1 == p0).map(|l| l.0 - e0);
    let delta01 = clean_gap(cross.unwrap_or(levels[1].0 - e0), e0);
    levels.truncate(k.max(2));
    Ok(SpectralSummary {
        eigenvalues: levels.iter().map(|l| l.0).collect(),
        delta01,
        delta02: same.map(|v| clean_gap(v, e0)),
        ground_state: None,
        parity_labels: Some(levels.iter().map(|l| l.1).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinspace::{build_jx, build_lmg_hamiltonian, LmgControl, TwiceSpin};

    #[test]
    fn diagonal_example() {
        let s = lowest_levels(&BandedSymmetricMatrix::diagonal(vec![-1.0, 0.0, 1.0]), 2).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-15 && s.eigenvalues[1].abs() < 1e-15);
        assert!((s.delta01 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn jx_spectrum_j1() {
        let s = lowest_levels(&build_jx(TwiceSpin::new(2)), 3).unwrap();
        for (a, b) in s.eigenvalues.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn lmg_transverse_parity() {
        let h =
            build_lmg_hamiltonian(TwiceSpin::new(2), LmgControl::new(1.0, 0.0).unwrap()).unwrap();
        let s = parity_resolved_gaps(&h, 3).unwrap();
        let labels = s.parity_labels.unwrap();
        assert_eq!(labels[0], Parity::Even);
        assert_eq!(labels[1], Parity::Odd);
        assert!((s.delta01 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lmg_degenerate_pair() {
        let h =
            build_lmg_hamiltonian(TwiceSpin::new(4), LmgControl::new(0.0, 0.0).unwrap()).unwrap();
        let s = parity_resolved_gaps(&h, 3).unwrap();
        assert_eq!(s.delta01, 0.0);
    }

    #[test]
    fn longitudinal_field_breaks_parity() {
        let h =
            build_lmg_hamiltonian(TwiceSpin::new(4), LmgControl::new(0.5, 0.2).unwrap()).unwrap();
        assert!(matches!(
            parity_resolved_gaps(&h, 3),
            Err(Error::NotParitySymmetric { .. })
        ));
    }

    #[test]
    fn sectors_reassemble_full_spectrum() {
        for two_j in [5u32, 6] {
            let h =
                build_lmg_hamiltonian(TwiceSpin::new(two_j), LmgControl::new(0.4, 0.0).unwrap())
                    .unwrap();
            let full = lowest_eigenvalues(&h, h.dim()).unwrap();
            let s = parity_resolved_gaps(&h, h.dim()).unwrap();
            for (a, b) in full.iter().zip(&s.eigenvalues) {
                assert!((a - b).abs() < 1e-13);
            }
        }
    }
}
