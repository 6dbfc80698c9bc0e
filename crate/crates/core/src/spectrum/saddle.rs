use super::landscape::{check_axis, GapLandscape};
use super::lowest_eigenvalues;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::optimize::{argmax, argmin, golden_max, golden_min, linspace};
use crate::spinspace::{ControlPoint, PSpinTerms, TwiceSpin};

/// Coarse grids and tolerances for the max-min search.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleOptions {
    pub gamma_grid: Vec<f64>,
    pub kappa_grid: Vec<f64>,
    pub kappa_tol: f64,
    /// Tight on purpose: the ridge at kappa near 1 is exponentially narrow.
    pub gamma_tol: f64,
    pub exec: Exec,
}

impl Default for SaddleOptions {
    fn default() -> Self {
        Self {
            gamma_grid: linspace(0.01, 0.99, 99),
            kappa_grid: linspace(0.02, 1.0, 50),
            kappa_tol: 1e-4,
            gamma_tol: 1e-12,
            exec: Exec::Parallel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaMinimum {
    pub gamma: f64,
    pub gap: f64,
}

/// Saddle of the gap landscape: max over kappa of min over Gamma of Delta01.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Saddle {
    pub control: ControlPoint,
    pub gap: f64,
    /// The maximum sits on kappa = 1 (no catalysis pays off).
    pub clamped: bool,
}

fn gap_at(terms: &PSpinTerms, gamma: f64, kappa: f64) -> Result<f64> {
    let e =
        lowest_eigenvalues(&terms.hamiltonian(ControlPoint { gamma, kappa }), 2).map_err(|e| {
            Error::AtPoint {
                gamma,
                kappa,
                source: Box::new(e),
            }
        })?;
    Ok(e[1] - e[0])
}

fn refine_gamma(
    terms: &PSpinTerms,
    kappa: f64,
    grid: &[f64],
    coarse: &[f64],
    tol: f64,
) -> Result<GammaMinimum> {
    let i = argmin(coarse).ok_or(Error::Empty("Gamma grid"))?;
    if grid.len() < 3 || i == 0 || i + 1 == grid.len() {
        return Err(Error::BoundaryMinimum {
            gamma: grid[i],
            kappa,
        });
    }
    let (g, d) = golden_min(|g| gap_at(terms, g, kappa), grid[i - 1], grid[i + 1], tol)?;
    Ok(if d <= coarse[i] {
        GammaMinimum { gamma: g, gap: d }
    } else {
        GammaMinimum {
            gamma: grid[i],
            gap: coarse[i],
        }
    })
}

/// Minimum of Delta01 over Gamma at fixed kappa: grid scan, then golden refinement.
pub fn min_gap_over_gamma(
    terms: &PSpinTerms,
    kappa: f64,
    gamma_grid: &[f64],
    gamma_tol: f64,
) -> Result<GammaMinimum> {
    let coarse = gamma_grid
        .iter()
        .map(|&g| gap_at(terms, g, kappa))
        .collect::<Result<Vec<_>>>()?;
    refine_gamma(terms, kappa, gamma_grid, &coarse, gamma_tol)
}

fn maximize_over_kappa(
    terms: &PSpinTerms,
    opts: &SaddleOptions,
    kappas: &[f64],
    coarse: Vec<GammaMinimum>,
) -> Result<Saddle> {
    let gaps: Vec<f64> = coarse.iter().map(|m| m.gap).collect();
    let i = argmax(&gaps).ok_or(Error::Empty("kappa grid"))?;
    let inner = |k: f64| min_gap_over_gamma(terms, k, &opts.gamma_grid, opts.gamma_tol);
    if kappas.len() == 1 {
        let m = coarse[0];
        return Ok(Saddle {
            control: ControlPoint {
                gamma: m.gamma,
                kappa: kappas[0],
            },
            gap: m.gap,
            clamped: kappas[0] == 1.0,
        });
    }
    let lo = kappas[i.saturating_sub(1)];
    let hi = kappas[(i + 1).min(kappas.len() - 1)];
    let (mut k, _) = golden_max(|k| inner(k).map(|m| m.gap), lo, hi, opts.kappa_tol)?;
    let last = *kappas.last().unwrap();
    let clamped = last == 1.0 && k >= 1.0 - opts.kappa_tol;
    if clamped {
        k = 1.0;
    }
    let best = inner(k)?;
    let (k, best) = if best.gap >= coarse[i].gap {
        (k, best)
    } else {
        (kappas[i], coarse[i])
    };
    Ok(Saddle {
        control: ControlPoint {
            gamma: best.gamma,
            kappa: k,
        },
        gap: best.gap,
        clamped: clamped || (k == 1.0),
    })
}

/// Saddle search with on-demand diagonalization.
pub fn saddle_search(spin: TwiceSpin, p: u32, opts: &SaddleOptions) -> Result<Saddle> {
    check_axis("Gamma grid", &opts.gamma_grid)?;
    check_axis("kappa grid", &opts.kappa_grid)?;
    let terms = PSpinTerms::new(spin, p)?;
    let coarse = opts
        .exec
        .map(&opts.kappa_grid, |&k| {
            min_gap_over_gamma(&terms, k, &opts.gamma_grid, opts.gamma_tol)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    maximize_over_kappa(&terms, opts, &opts.kappa_grid, coarse)
}

/// Saddle search seeded by a stored landscape; refinement evaluates off-raster points.
///
/// Raster rows at Gamma = 0 and Gamma = 1 are skipped as inner-minimum candidates.
pub fn saddle_from_landscape(
    landscape: &GapLandscape,
    gamma_tol: f64,
    kappa_tol: f64,
) -> Result<Saddle> {
    let terms = PSpinTerms::new(landscape.spin, landscape.p)?;
    let (ng, nk) = landscape.shape();
    let rows: Vec<usize> = (0..ng)
        .filter(|&g| landscape.gamma_axis[g] > 0.0 && landscape.gamma_axis[g] < 1.0)
        .collect();
    let grid: Vec<f64> = rows.iter().map(|&g| landscape.gamma_axis[g]).collect();
    let opts = SaddleOptions {
        gamma_grid: grid.clone(),
        kappa_grid: landscape.kappa_axis.clone(),
        kappa_tol,
        gamma_tol,
        exec: Exec::Serial,
    };
    let coarse = (0..nk)
        .map(|ki| {
            let col: Vec<f64> = rows.iter().map(|&g| landscape.delta01(g, ki)).collect();
            refine_gamma(&terms, landscape.kappa_axis[ki], &grid, &col, gamma_tol)
        })
        .collect::<Result<Vec<_>>>()?;
    maximize_over_kappa(&terms, &opts, &landscape.kappa_axis, coarse)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_spin_is_clamped() {
        let s = saddle_search(TwiceSpin::new(8), 3, &SaddleOptions::default()).unwrap();
        assert!(s.clamped);
        assert_eq!(s.control.kappa, 1.0);
    }

    #[test]
    fn boundary_minimum_reported() {
        let terms = PSpinTerms::new(TwiceSpin::new(10), 3).unwrap();
        let r = min_gap_over_gamma(&terms, 1.0, &[0.9, 0.95, 0.99], 1e-10);
        assert!(matches!(r, Err(Error::BoundaryMinimum { .. })));
    }
}
