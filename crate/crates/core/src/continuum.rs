//! Variable-mass continuum model on z in [-1, 1].
//!
//! The collective spin at large j behaves like one particle with
//! hbar = 1/j, potential V(z) and inverse mass M^-1(z). Energies here are in
//! units of Gamma; multiply by Gamma to compare with the spin Hamiltonian.

use crate::banded::BandedSymmetricMatrix;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::optimize::golden_min;
use crate::spectrum::{lowest_eigenpairs, lowest_levels, scan_landscape, SpectralSummary};
use crate::spinspace::{ControlPoint, LmgControl, SpinParams, TwiceSpin};

fn check_z(z: f64) -> Result<()> {
    if z.abs() <= 1.0 {
        Ok(())
    } else {
        Err(Error::param("z", z, "must satisfy |z| <= 1"))
    }
}

/// V(z) = -sqrt(1-z^2) - (kappa/gamma) z^p + ((1-kappa)/gamma)(1-z^2).
pub fn potential_v(z: f64, params: &SpinParams) -> Result<f64> {
    check_z(z)?;
    let g = params.control.annealing_ratio()?;
    let k = params.control.kappa;
    let s = 1.0 - z * z;
    Ok(-s.sqrt() - k / g * z.powi(params.p as i32) + (1.0 - k) / g * s)
}

/// V(z) = -sqrt(1-z^2) - ((1-|Gz|) z^2 / gx + Gz z) for the LMG model.
pub fn potential_v_lmg(z: f64, c: LmgControl) -> Result<f64> {
    check_z(z)?;
    let gx = c.annealing_ratio()?;
    let gz = c.gamma_z;
    Ok(-(1.0 - z * z).sqrt() - ((1.0 - gz.abs()) * z * z / gx + gz * z))
}

/// Closed-form LMG barrier at Gz = 0: V0 = 1/gx + gx/4 - 1, valid for gx < 2.
pub fn lmg_barrier(gx: f64) -> Result<f64> {
    if !(gx > 0.0 && gx < 2.0) {
        return Err(Error::param(
            "gamma_x",
            gx,
            "barrier exists only for 0 < gamma_x < 2",
        ));
    }
    Ok(1.0 / gx + gx / 4.0 - 1.0)
}

/// Barrier V(0) - min V located numerically on the LMG potential at Gz = 0.
pub fn lmg_barrier_numeric(gx: f64) -> Result<f64> {
    if !(gx > 0.0) {
        return Err(Error::param("gamma_x", gx, "must be positive"));
    }
    let c = LmgControl {
        gamma_x: gx / (1.0 + gx),
        gamma_z: 0.0,
    };
    let v = |z: f64| potential_v_lmg(z, c);
    let (_, vmin) = golden_min(v, 0.0, 1.0, 1e-12)?;
    Ok(v(0.0)? - vmin)
}

/// M^-1(z) = sqrt(1-z^2) - 2(1-z^2)(1-kappa)/gamma.
pub fn inverse_mass(z: f64, params: &SpinParams) -> Result<f64> {
    check_z(z)?;
    let g = params.control.annealing_ratio()?;
    let s = 1.0 - z * z;
    Ok(s.sqrt() - 2.0 * s * (1.0 - params.control.kappa) / g)
}

/// Sampled inverse mass and the locations where it changes sign.
#[derive(Debug, Clone, PartialEq)]
pub struct MassProfile {
    pub z: Vec<f64>,
    pub inv_mass: Vec<f64>,
    pub crossings: Vec<f64>,
}

impl MassProfile {
    pub fn from_samples(z: Vec<f64>, inv_mass: Vec<f64>) -> Self {
        let crossings = sign_changes(&z, &inv_mass);
        Self {
            z,
            inv_mass,
            crossings,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.inv_mass.iter().all(|&m| m >= 0.0)
    }
}

/// Linear-interpolated positions where `v` crosses from one sign to the other.
fn sign_changes(z: &[f64], v: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..v.len().saturating_sub(1) {
        let (a, b) = (v[i], v[i + 1]);
        if (a < 0.0) != (b < 0.0) {
            out.push(z[i] + (z[i + 1] - z[i]) * a / (a - b));
        }
    }
    out
}

/// Default grid size: at least 1001 and ten samples per spin level.
pub fn default_points(spin: TwiceSpin) -> usize {
    1001.max(10 * spin.two_j() as usize + 1)
}

/// One-dimensional eigenproblem -(hbar^2/2) d/dz M^-1 d/dz + V on a uniform grid.
///
/// `grid` holds the N interior nodes, `inv_mass` the N + 1 cell midpoints
/// between them (including the half-cells next to the walls).
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumProblem {
    pub grid: Vec<f64>,
    pub h: f64,
    pub potential: Vec<f64>,
    pub inv_mass: Vec<f64>,
    pub hbar_eff: f64,
}

impl ContinuumProblem {
    /// Dirichlet problem on `[a, b]` with `n` interior points.
    pub fn uniform<V, M>(
        a: f64,
        b: f64,
        n: usize,
        hbar_eff: f64,
        mut v: V,
        mut m: M,
    ) -> Result<Self>
    where
        V: FnMut(f64) -> Result<f64>,
        M: FnMut(f64) -> Result<f64>,
    {
        if n < 2 {
            return Err(Error::param(
                "points",
                n as f64,
                "need at least two interior points",
            ));
        }
        if !(b > a) {
            return Err(Error::param("interval", b - a, "must have positive length"));
        }
        if !(hbar_eff > 0.0) {
            return Err(Error::param("hbar", hbar_eff, "must be positive"));
        }
        let h = (b - a) / (n + 1) as f64;
        let grid: Vec<f64> = (1..=n).map(|i| a + i as f64 * h).collect();
        let potential = grid.iter().map(|&z| v(z)).collect::<Result<Vec<_>>>()?;
        if let Some(i) = potential.iter().position(|x| !x.is_finite()) {
            return Err(Error::param("potential", grid[i], "non-finite sample"));
        }
        let inv_mass = (0..=n)
            .map(|i| m(a + (i as f64 + 0.5) * h))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid,
            h,
            potential,
            inv_mass,
            hbar_eff,
        })
    }

    /// Continuum image of the p-spin model at `params`, with hbar = 1/j.
    pub fn pspin(params: &SpinParams, n: Option<usize>) -> Result<Self> {
        params.control.annealing_ratio()?;
        let spin = params.spin;
        if spin.two_j() == 0 {
            return Err(Error::InvalidSpin(0.0));
        }
        let n = n.unwrap_or_else(|| default_points(spin));
        Self::uniform(
            -1.0,
            1.0,
            n,
            1.0 / spin.j(),
            |z| potential_v(z, params),
            |z| inverse_mass(z, params),
        )
    }

    pub fn mass_profile(&self) -> MassProfile {
        let a = self.grid[0] - self.h;
        let z = (0..self.inv_mass.len())
            .map(|i| a + (i as f64 + 0.5) * self.h)
            .collect();
        MassProfile::from_samples(z, self.inv_mass.clone())
    }
}

/// Hermitian staggered-midpoint discretization with Dirichlet walls.
pub fn discretize(problem: &ContinuumProblem) -> Result<BandedSymmetricMatrix> {
    let n = problem.grid.len();
    let mi = &problem.inv_mass;
    if mi.len() != n + 1 || problem.potential.len() != n {
        return Err(Error::param(
            "samples",
            mi.len() as f64,
            "inconsistent sample counts",
        ));
    }
    if mi.iter().any(|&m| m < 0.0) {
        return Err(Error::NegativeMass {
            crossings: problem.mass_profile().crossings,
        });
    }
    let c = problem.hbar_eff * problem.hbar_eff / (2.0 * problem.h * problem.h);
    let diag: Vec<f64> = (0..n)
        .map(|i| problem.potential[i] + c * (mi[i] + mi[i + 1]))
        .collect();
    let off: Vec<f64> = (1..n).map(|i| -c * mi[i]).collect();
    BandedSymmetricMatrix::tridiagonal(diag, off)
}

/// Lowest `k` levels of the continuum p-spin model, in units of Gamma.
pub fn continuum_levels(
    params: &SpinParams,
    n: Option<usize>,
    k: usize,
) -> Result<SpectralSummary> {
    lowest_levels(&discretize(&ContinuumProblem::pspin(params, n)?)?, k)
}

/// Like [`continuum_levels`] but also returns the ground state on the grid.
pub fn continuum_eigenpairs(problem: &ContinuumProblem, k: usize) -> Result<SpectralSummary> {
    lowest_eigenpairs(&discretize(problem)?, k)
}

/// Why a raster point did or did not enter the comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    Compared,
    /// Gamma = 0 or 1: the annealing ratio is undefined.
    GammaEndpoint,
    NegativeMass,
    /// kappa below the cutoff, where the m/j grid misrepresents the potential.
    SmallKappa,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub control: ControlPoint,
    pub spin_gap: f64,
    /// Gap in raw Hamiltonian units (already multiplied by Gamma).
    pub continuum_gap: Option<f64>,
    pub rel_diff: Option<f64>,
    pub status: PointStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub spin: TwiceSpin,
    pub p: u32,
    pub rows: Vec<ComparisonRow>,
    /// Median of |rel_diff| over compared points.
    pub median_rel_diff: Option<f64>,
}

pub const SMALL_KAPPA_CUTOFF: f64 = 0.05;

/// Spin-matrix and continuum Delta01 side by side on a (Gamma, kappa) raster.
pub fn continuum_vs_spin_report(
    spin: TwiceSpin,
    p: u32,
    gamma_grid: &[f64],
    kappa_grid: &[f64],
    exec: Exec,
) -> Result<ComparisonReport> {
    let land = scan_landscape(spin, p, gamma_grid, kappa_grid, exec)?;
    let (ng, nk) = land.shape();
    let cells: Vec<(usize, usize)> = (0..ng).flat_map(|g| (0..nk).map(move |k| (g, k))).collect();
    let rows = exec.map(&cells, |&(gi, ki)| {
        let control = land.control(gi, ki);
        let spin_gap = land.delta01(gi, ki);
        let mut row = ComparisonRow {
            control,
            spin_gap,
            continuum_gap: None,
            rel_diff: None,
            status: PointStatus::Compared,
        };
        if control.gamma <= 0.0 || control.gamma >= 1.0 {
            row.status = PointStatus::GammaEndpoint;
            return Ok(row);
        }
        let params = SpinParams::new(spin, p, control)?;
        match continuum_levels(&params, None, 2) {
            Ok(s) => {
                let gap = s.delta01 * control.gamma;
                row.continuum_gap = Some(gap);
                row.rel_diff = Some((gap - spin_gap) / spin_gap);
                if control.kappa < SMALL_KAPPA_CUTOFF {
                    row.status = PointStatus::SmallKappa;
                }
                Ok(row)
            }
            Err(Error::NegativeMass { .. }) => {
                row.status = PointStatus::NegativeMass;
                Ok(row)
            }
            Err(e) => Err(Error::AtPoint {
                gamma: control.gamma,
                kappa: control.kappa,
                source: Box::new(e),
            }),
        }
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let mut diffs: Vec<f64> = rows
        .iter()
        .filter(|r| r.status == PointStatus::Compared)
        .filter_map(|r| r.rel_diff.map(f64::abs))
        .collect();
    diffs.sort_by(f64::total_cmp);
    Ok(ComparisonReport {
        spin,
        p,
        rows,
        median_rel_diff: median(&diffs),
    })
}

fn median(sorted: &[f64]) -> Option<f64> {
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2]),
        _ => Some(0.5 * (sorted[n / 2 - 1] + sorted[n / 2])),
    }
}
