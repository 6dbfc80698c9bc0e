//! Scale-free piecewise-parabolic double wells.
//!
//! Lengths are in units of the summit width sigma*, energies in hbar omega*.
//! The summit is the inverted unit-curvature parabola -xi^2/2 centred at 0;
//! the wells are upright parabolas of curvature 1/beta^4 with minima at
//! -xi1 and +xi2, stitched on continuously with a continuous slope.

mod special;

pub use special::{
    parabolic_cylinder, parabolic_cylinder_with_derivative, summit_ground_kummer,
    summit_ground_kummer_with_derivative, ENVELOPE,
};

use crate::banded::BandedSymmetricMatrix;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::optimize::golden_max;
use crate::spectrum::{lowest_eigenvalues, lowest_eigenvectors, Parity};

/// Padding beyond each well minimum, in well widths.
const PAD: f64 = 8.0;
const MIN_POINTS: usize = 4001;
const MAX_POINTS: usize = 400_001;
/// Grid points per smallest length scale.
const POINTS_PER_WIDTH: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiecewiseWell {
    pub xi1: f64,
    pub xi2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl PiecewiseWell {
    /// `xi = 0` is allowed and removes the summit on that side.
    pub fn new(xi1: f64, xi2: f64, beta1: f64, beta2: f64) -> Result<Self> {
        for (name, v) in [("xi1", xi1), ("xi2", xi2)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::param(
                    name,
                    v,
                    "displacement must be finite and >= 0",
                ));
            }
        }
        for (name, v) in [("beta1", beta1), ("beta2", beta2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, v, "width ratio must be finite and > 0"));
            }
        }
        Ok(Self {
            xi1,
            xi2,
            beta1,
            beta2,
        })
    }

    pub fn symmetric(xi: f64, beta: f64) -> Result<Self> {
        Self::new(xi, xi, beta, beta)
    }

    pub fn is_symmetric(&self) -> bool {
        self.xi1 == self.xi2 && self.beta1 == self.beta2
    }

    /// Joins between summit and wells: -xi1/(1+beta1^4) and xi2/(1+beta2^4).
    pub fn seams(&self) -> (f64, f64) {
        (
            -self.xi1 / (1.0 + self.beta1.powi(4)),
            self.xi2 / (1.0 + self.beta2.powi(4)),
        )
    }

    /// Summit height above the left well bottom.
    pub fn barrier_left(&self) -> f64 {
        self.xi1 * self.xi1 / (2.0 * (1.0 + self.beta1.powi(4)))
    }

    pub fn barrier_right(&self) -> f64 {
        self.xi2 * self.xi2 / (2.0 * (1.0 + self.beta2.powi(4)))
    }

    /// Potential measured from the summit.
    pub fn potential(&self, xi: f64) -> f64 {
        let (s1, s2) = self.seams();
        if xi < s1 {
            -self.barrier_left() + (xi + self.xi1).powi(2) / (2.0 * self.beta1.powi(4))
        } else if xi > s2 {
            -self.barrier_right() + (xi - self.xi2).powi(2) / (2.0 * self.beta2.powi(4))
        } else {
            -0.5 * xi * xi
        }
    }

    pub fn slope(&self, xi: f64) -> f64 {
        let (s1, s2) = self.seams();
        if xi < s1 {
            (xi + self.xi1) / self.beta1.powi(4)
        } else if xi > s2 {
            (xi - self.xi2) / self.beta2.powi(4)
        } else {
            -xi
        }
    }

    /// Computational interval [-xi1 - 8 beta1, xi2 + 8 beta2].
    pub fn domain(&self) -> (f64, f64) {
        (-self.xi1 - PAD * self.beta1, self.xi2 + PAD * self.beta2)
    }

    fn shortest_scale(&self) -> f64 {
        self.beta1.min(self.beta2).min(1.0)
    }
}

fn grid_points(length: f64, scale: f64) -> Result<usize> {
    let want = (length / (scale / POINTS_PER_WIDTH)).ceil();
    if !want.is_finite() || want > MAX_POINTS as f64 {
        return Err(Error::GridConvergence(format!(
            "well needs {want} grid points to resolve its smallest width {scale}; limit is {MAX_POINTS}"
        )));
    }
    Ok(MIN_POINTS.max(want as usize) | 1)
}

/// Levels and low-lying states of a double well.
#[derive(Debug, Clone, PartialEq)]
pub struct WellSpectrum {
    pub well: PiecewiseWell,
    /// Energies relative to the summit, ascending.
    pub energies: Vec<f64>,
    /// delta_n = -E_n, depth below the summit.
    pub deficits: Vec<f64>,
    /// Reflection parity of each level (symmetric wells only).
    pub parities: Option<Vec<Parity>>,
    /// Ground energy above the left well bottom.
    pub epsilon: f64,
    /// Delta / (hbar omega*) = E_1 - E_0.
    pub gap_ratio: f64,
    pub grid: Vec<f64>,
    pub h: f64,
    /// Ground and first excited state on `grid`, unit L2 norm. Empty when
    /// only levels were requested.
    pub states: Vec<Vec<f64>>,
}

/// Even and odd sector operators of a symmetric well on the half-grid xi = i h.
struct HalfGrid {
    h: f64,
    even: BandedSymmetricMatrix,
    odd: BandedSymmetricMatrix,
}

impl HalfGrid {
    fn new(well: &PiecewiseWell) -> Result<Self> {
        let (_, b) = well.domain();
        let n = grid_points(2.0 * b, well.shortest_scale())?;
        let m = (n - 1) / 2;
        let h = b / (m + 1) as f64;
        let c = 0.5 / (h * h);
        let diag = |i: usize| 2.0 * c + well.potential(i as f64 * h);
        let mut off_even = vec![-c; m];
        off_even[0] = -std::f64::consts::SQRT_2 * c;
        let even = BandedSymmetricMatrix::tridiagonal((0..=m).map(diag).collect(), off_even)?;
        let odd = BandedSymmetricMatrix::tridiagonal((1..=m).map(diag).collect(), vec![-c; m - 1])?;
        Ok(Self { h, even, odd })
    }

    fn m(&self) -> usize {
        self.odd.dim()
    }

    /// Even and odd ground states unfolded onto the full grid.
    fn lowest_states(&self) -> Result<Vec<Vec<f64>>> {
        let m = self.m();
        let mut u = lowest_eigenvectors(&self.even, 1)?.1.swap_remove(0);
        let mut v = lowest_eigenvectors(&self.odd, 1)?.1.swap_remove(0);
        if u[0] < 0.0 {
            u.iter_mut().for_each(|x| *x = -*x);
        }
        if v[0] < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        let norm = self.h.sqrt();
        let r = std::f64::consts::FRAC_1_SQRT_2 / norm;
        let mut plus = vec![0.0; 2 * m + 1];
        let mut minus = vec![0.0; 2 * m + 1];
        plus[m] = u[0] / norm;
        for i in 1..=m {
            plus[m + i] = u[i] * r;
            plus[m - i] = plus[m + i];
            minus[m + i] = v[i - 1] * r;
            minus[m - i] = -minus[m + i];
        }
        Ok(vec![plus, minus])
    }

    fn grid(&self) -> Vec<f64> {
        let m = self.m() as i64;
        (-m..=m).map(|i| i as f64 * self.h).collect()
    }
}

fn full_grid_operator(well: &PiecewiseWell) -> Result<(Vec<f64>, f64, BandedSymmetricMatrix)> {
    let (a, b) = well.domain();
    let n = grid_points(b - a, well.shortest_scale())?;
    let h = (b - a) / (n + 1) as f64;
    let grid: Vec<f64> = (1..=n).map(|i| a + i as f64 * h).collect();
    let c = 0.5 / (h * h);
    let m = BandedSymmetricMatrix::tridiagonal(
        grid.iter().map(|&x| 2.0 * c + well.potential(x)).collect(),
        vec![-c; n - 1],
    )?;
    Ok((grid, h, m))
}

fn merge_sectors(even: Vec<f64>, odd: Vec<f64>, k: usize) -> (Vec<f64>, Vec<Parity>) {
    let mut all: Vec<(f64, Parity)> = even
        .into_iter()
        .map(|e| (e, Parity::Even))
        .chain(odd.into_iter().map(|e| (e, Parity::Odd)))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    all.truncate(k);
    all.into_iter().unzip()
}

fn solve(well: &PiecewiseWell, k: usize, with_states: bool) -> Result<WellSpectrum> {
    if k < 2 {
        return Err(Error::param("k", k as f64, "need at least two levels"));
    }
    let (energies, parities, grid, h, states) = if well.is_symmetric() {
        let hg = HalfGrid::new(well)?;
        let m = hg.m();
        let even = lowest_eigenvalues(&hg.even, k.min(m + 1))?;
        let odd = lowest_eigenvalues(&hg.odd, k.min(m))?;
        let states = if with_states {
            hg.lowest_states()?
        } else {
            Vec::new()
        };
        let (e, p) = merge_sectors(even, odd, k);
        (e, Some(p), hg.grid(), hg.h, states)
    } else {
        let (grid, h, op) = full_grid_operator(well)?;
        let (energies, states) = if with_states {
            let (vals, vecs) = lowest_eigenvectors(&op, 2)?;
            let norm = h.sqrt();
            let states = vecs
                .into_iter()
                .map(|v| v.into_iter().map(|x| x / norm).collect())
                .collect();
            let vals = if k > 2 {
                lowest_eigenvalues(&op, k)?
            } else {
                vals
            };
            (vals, states)
        } else {
            (lowest_eigenvalues(&op, k)?, Vec::new())
        };
        (energies, None, grid, h, states)
    };
    Ok(WellSpectrum {
        well: *well,
        deficits: energies.iter().map(|e| -e).collect(),
        epsilon: energies[0] + well.barrier_left(),
        gap_ratio: energies[1] - energies[0],
        energies,
        parities,
        grid,
        h,
        states,
    })
}

/// Lowest `k` levels plus the two lowest states, by finite differences.
///
/// Symmetric wells are split into even and odd sectors on a grid with a node
/// at xi = 0; the even state is pinned positive there and the odd state has
/// positive slope.
pub fn solve_well(well: &PiecewiseWell, k: usize) -> Result<WellSpectrum> {
    solve(well, k, true)
}

/// Levels only; `states` is left empty.
pub fn well_levels(well: &PiecewiseWell, k: usize) -> Result<WellSpectrum> {
    solve(well, k, false)
}

/// Lowest `k` levels of each parity sector of a symmetric well.
pub fn sector_levels(well: &PiecewiseWell, k: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if !well.is_symmetric() {
        return Err(Error::param(
            "xi2 - xi1",
            well.xi2 - well.xi1,
            "parity sectors need a symmetric well",
        ));
    }
    let hg = HalfGrid::new(well)?;
    let m = hg.m();
    Ok((
        lowest_eigenvalues(&hg.even, k.min(m + 1))?,
        lowest_eigenvalues(&hg.odd, k.min(m))?,
    ))
}

/// Ground-state deficit of a symmetric well (even sector only).
pub fn ground_deficit(well: &PiecewiseWell) -> Result<f64> {
    if !well.is_symmetric() {
        return Err(Error::param(
            "xi2 - xi1",
            well.xi2 - well.xi1,
            "deficit pairing needs a symmetric well",
        ));
    }
    let hg = HalfGrid::new(well)?;
    Ok(-lowest_eigenvalues(&hg.even, 1)?[0])
}

/// Delta / (hbar omega*) without eigenvectors.
pub fn gap_ratio(well: &PiecewiseWell) -> Result<f64> {
    if well.is_symmetric() {
        let hg = HalfGrid::new(well)?;
        let e = lowest_eigenvalues(&hg.even, 1)?[0];
        let o = lowest_eigenvalues(&hg.odd, 1)?[0];
        Ok(o - e)
    } else {
        well_levels(well, 2).map(|s| s.gap_ratio)
    }
}

/// phi+(0) phi-'(0) / (2 int_0^inf phi+ phi- dxi) for a symmetric well.
///
/// Uses the forward difference for phi-'(0) and the trapezoid rule on the
/// solver grid, for which the expression reproduces E- - E+ exactly.
pub fn gap_via_overlap_formula(spectrum: &WellSpectrum) -> Result<f64> {
    if !spectrum.well.is_symmetric() {
        return Err(Error::param(
            "xi2 - xi1",
            spectrum.well.xi2 - spectrum.well.xi1,
            "overlap formula needs a symmetric well",
        ));
    }
    if spectrum.states.len() < 2 {
        return Err(Error::Empty("well eigenfunctions"));
    }
    let (plus, minus) = (&spectrum.states[0], &spectrum.states[1]);
    let c = spectrum.grid.len() / 2;
    let h = spectrum.h;
    let slope = (minus[c + 1] - minus[c]) / h;
    let overlap = h
        * (0.5 * plus[c] * minus[c] + (c + 1..plus.len()).map(|i| plus[i] * minus[i]).sum::<f64>());
    Ok(plus[c] * slope / (2.0 * overlap))
}

/// Even-state deficit from stitching the Kummer summit solution to the
/// decaying parabolic cylinder well solution, searched in `[lo, hi]`.
pub fn matched_ground_deficit(well: &PiecewiseWell, lo: f64, hi: f64) -> Result<f64> {
    if !well.is_symmetric() || well.xi1 == 0.0 {
        return Err(Error::param(
            "xi1",
            well.xi1,
            "matching needs a symmetric well with a summit",
        ));
    }
    let (_, seam) = well.seams();
    let beta = well.beta2;
    let v0 = well.barrier_right();
    let x = std::f64::consts::SQRT_2 * (seam - well.xi2) / beta;
    let mismatch = |delta: f64| -> Result<f64> {
        let (ps, dps) = summit_ground_kummer_with_derivative(delta, seam)?;
        let nu = (v0 - delta) * beta * beta - 0.5;
        let (pw, dw) = special::parabolic_cylinder_direction(nu, x);
        let dpw = std::f64::consts::SQRT_2 / beta * dw;
        let m = ps.hypot(dps);
        Ok((dps * pw - dpw * ps) / m)
    };
    crate::optimize::bisect(mismatch, lo, hi, 1e-13, "stitched ground deficit")
}

/// Per-side coalescence margins xi/beta - 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighCheck {
    pub left_margin: f64,
    pub right_margin: f64,
    /// Both wells separated by more than their own width.
    pub separated: bool,
}

pub fn rayleigh_check(well: &PiecewiseWell) -> RayleighCheck {
    let left_margin = well.xi1 / well.beta1 - 1.0;
    let right_margin = well.xi2 / well.beta2 - 1.0;
    RayleighCheck {
        left_margin,
        right_margin,
        separated: left_margin > 0.0 && right_margin > 0.0,
    }
}

/// Displacement xi2 for which the symmetric well (xi2, beta2) has the same
/// ground-state deficit as (xi1, beta1).
pub fn resonance_match(beta1: f64, beta2: f64, xi1: f64) -> Result<f64> {
    let target = ground_deficit(&PiecewiseWell::symmetric(xi1, beta1)?)?;
    if beta1 == beta2 {
        return Ok(xi1);
    }
    let deficit = |xi: f64| PiecewiseWell::symmetric(xi, beta2).and_then(|w| ground_deficit(&w));
    let mut lo = 0.0;
    let d_lo = deficit(lo)?;
    if d_lo > target {
        return Err(Error::NoBracket {
            what: "resonant deficit (scanned deficit range)",
            lo: d_lo,
            hi: d_lo,
        });
    }
    let mut hi = xi1.max(beta2).max(1.0);
    let mut d_hi = deficit(hi)?;
    while d_hi < target {
        lo = hi;
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::NoBracket {
                what: "resonant deficit (scanned deficit range)",
                lo: d_lo,
                hi: d_hi,
            });
        }
        d_hi = deficit(hi)?;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let d = deficit(mid)?;
        if (d - target).abs() <= 1e-8 || hi - lo < 1e-15 * hi {
            return Ok(mid);
        }
        if d < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Gap ratios of symmetric wells over (xi1, beta) and the max-gap width at each xi1.
#[derive(Debug, Clone, PartialEq)]
pub struct IsoGapScan {
    pub xi1_axis: Vec<f64>,
    pub beta_axis: Vec<f64>,
    /// Row-major `xi_index * beta_axis.len() + beta_index`; `None` marks a failed cell.
    pub gaps: Vec<Option<f64>>,
    /// beta*(xi1): the highest interior local maximum over beta, refined
    /// between grid neighbours. The gap also grows towards small beta, where
    /// the zero-point energy clears the barrier, so the global maximum can sit
    /// on the grid edge. `None` when there is no interior peak.
    pub locus: Vec<Option<f64>>,
}

impl IsoGapScan {
    pub fn gap(&self, xi_index: usize, beta_index: usize) -> Option<f64> {
        self.gaps[xi_index * self.beta_axis.len() + beta_index]
    }
}

fn check_positive_axis(name: &'static str, axis: &[f64]) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::Empty(name));
    }
    if let Some(&v) = axis.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::param(name, v, "grid values must be positive"));
    }
    if axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param(
            name,
            axis[0],
            "grid must be strictly ascending",
        ));
    }
    Ok(())
}

/// Index of the largest strict interior local maximum.
pub(crate) fn interior_peak(row: &[f64]) -> Option<usize> {
    (1..row.len().saturating_sub(1))
        .filter(|&i| row[i] >= row[i - 1] && row[i] > row[i + 1])
        .max_by(|&a, &b| row[a].total_cmp(&row[b]))
}

pub fn iso_gap_scan(xi1_grid: &[f64], beta_grid: &[f64], exec: Exec) -> Result<IsoGapScan> {
    check_positive_axis("xi1 grid", xi1_grid)?;
    check_positive_axis("beta grid", beta_grid)?;
    let cells: Vec<(f64, f64)> = xi1_grid
        .iter()
        .flat_map(|&x| beta_grid.iter().map(move |&b| (x, b)))
        .collect();
    let gaps: Vec<Option<f64>> = exec.map(&cells, |&(x, b)| {
        PiecewiseWell::symmetric(x, b)
            .and_then(|w| gap_ratio(&w))
            .ok()
    });
    let nb = beta_grid.len();
    let locus = exec.map(xi1_grid, |&x| {
        let xi_index = xi1_grid.iter().position(|&v| v == x)?;
        let row: Vec<f64> = (0..nb)
            .map(|bi| gaps[xi_index * nb + bi].unwrap_or(f64::NAN))
            .collect();
        let i = interior_peak(&row)?;
        let f = |b: f64| PiecewiseWell::symmetric(x, b).and_then(|w| gap_ratio(&w));
        golden_max(f, beta_grid[i - 1], beta_grid[i + 1], 1e-6)
            .ok()
            .map(|r| r.0)
    });
    Ok(IsoGapScan {
        xi1_axis: xi1_grid.to_vec(),
        beta_axis: beta_grid.to_vec(),
        gaps,
        locus,
    })
}

/// Characteristic tunnelling time 2 pi hbar / Delta; infinite for a closed gap.
pub fn migration_time(gap: f64, hbar_eff: f64) -> Result<f64> {
    if !(gap >= 0.0) {
        return Err(Error::param("gap", gap, "must be non-negative"));
    }
    if !(hbar_eff > 0.0) {
        return Err(Error::param("hbar", hbar_eff, "must be positive"));
    }
    if gap == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0 * std::f64::consts::PI * hbar_eff / gap)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_example_geometry() {
        let w = PiecewiseWell::symmetric(2.0, 1.0).unwrap();
        assert_eq!(w.seams(), (-1.0, 1.0));
        assert!((w.barrier_left() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn seams_are_smooth() {
        let w = PiecewiseWell::new(1.3, 2.1, 0.7, 1.4).unwrap();
        let (s1, s2) = w.seams();
        for s in [s1, s2] {
            let e = 1e-9;
            assert!((w.potential(s - e) - w.potential(s + e)).abs() < 1e-8);
            assert!((w.slope(s - e) - w.slope(s + e)).abs() < 1e-8);
        }
    }

    #[test]
    fn migration_time_examples() {
        assert!((migration_time(1.0, 1.0).unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(migration_time(0.0, 1.0).unwrap(), f64::INFINITY);
        assert!(migration_time(-1.0, 1.0).is_err());
    }

    #[test]
    fn rayleigh_examples() {
        assert!(rayleigh_check(&PiecewiseWell::symmetric(3.0, 1.0).unwrap()).separated);
        assert!(!rayleigh_check(&PiecewiseWell::symmetric(0.5, 1.0).unwrap()).separated);
    }
}
