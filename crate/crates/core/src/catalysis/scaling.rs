//! Scaling-law fits over spin size and catalyst strength.

use super::{gamma_second_order, gamma_zero};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fit::{fit_exponential, fit_power_law, ScalingFit};
use crate::spectrum::{
    min_gap_over_gamma, parity_resolved_gaps, saddle_search, Saddle, SaddleOptions,
};
use crate::spinspace::{build_lmg_hamiltonian, LmgControl, PSpinTerms, TwiceSpin};

/// Largest j the scans accept.
pub const MAX_J: f64 = 256.0;
/// Below and at this j the saddle sits on kappa = 1.
pub const CROSSOVER_J: f64 = 17.0;

fn spin_of(j: f64) -> Result<TwiceSpin> {
    if !(j > 0.0 && j <= MAX_J) {
        return Err(Error::param("j", j, "must lie in (0, 256]"));
    }
    TwiceSpin::from_j(j)
}

fn check_sorted(js: &[f64]) -> Result<()> {
    if js.is_empty() {
        return Err(Error::Empty("j list"));
    }
    if js.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("j list", js[0], "must be strictly increasing"));
    }
    Ok(())
}

/// A sample left out of a fit and why.
#[derive(Debug, Clone, PartialEq)]
pub struct Excluded {
    pub j: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KappaScan {
    pub saddles: Vec<(f64, Saddle)>,
    pub excluded: Vec<Excluded>,
    /// Fit of log kappa_c against log j.
    pub fit: ScalingFit,
}

/// Saddle kappa_c per j and a power-law fit. Samples at or below the
/// crossover, clamped saddles and failures are excluded and reported.
pub fn fit_kappa_c(js: &[f64], opts: &SaddleOptions) -> Result<KappaScan> {
    check_sorted(js)?;
    let spins = js.iter().map(|&j| spin_of(j)).collect::<Result<Vec<_>>>()?;
    let results = opts.exec.map(&spins, |&s| {
        if s.j() <= CROSSOVER_J {
            None
        } else {
            Some(saddle_search(s, 3, opts))
        }
    });
    let mut saddles = Vec::new();
    let mut excluded = Vec::new();
    for (&j, r) in js.iter().zip(results) {
        match r {
            None => excluded.push(Excluded {
                j,
                reason: "at or below the catalysis crossover".into(),
            }),
            Some(Ok(s)) if s.clamped => excluded.push(Excluded {
                j,
                reason: "saddle clamped at kappa = 1".into(),
            }),
            Some(Ok(s)) => saddles.push((j, s)),
            Some(Err(e)) => excluded.push(Excluded {
                j,
                reason: e.to_string(),
            }),
        }
    }
    let x: Vec<f64> = saddles.iter().map(|s| s.0).collect();
    let y: Vec<f64> = saddles.iter().map(|s| s.1.control.kappa).collect();
    let fit = fit_power_law(&x, &y)?;
    Ok(KappaScan {
        saddles,
        excluded,
        fit,
    })
}

/// Which gap a [`GapScan`] follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapLaw {
    /// Saddle gap; power law in j.
    Catalysed,
    /// Minimum over Gamma at kappa = 1; exponential in j.
    Uncatalysed,
    /// LMG Delta02 at Gx = 2/3, Gz = 0; power law in j.
    Lmg,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapRow {
    pub j: f64,
    pub gap: f64,
    /// Location of the gap; (Gamma_x, Gamma_z) for the LMG law.
    pub gamma: f64,
    pub kappa: f64,
}

impl GapRow {
    /// gap * j^2, which tends to a constant on the catalysed branch.
    pub fn scaled(&self) -> f64 {
        self.gap * self.j * self.j
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapScan {
    pub law: GapLaw,
    pub rows: Vec<GapRow>,
    pub excluded: Vec<Excluded>,
    pub fit: ScalingFit,
}

fn gap_row(law: GapLaw, spin: TwiceSpin, opts: &SaddleOptions) -> Result<GapRow> {
    let j = spin.j();
    match law {
        GapLaw::Catalysed => {
            let s = saddle_search(spin, 3, opts)?;
            Ok(GapRow {
                j,
                gap: s.gap,
                gamma: s.control.gamma,
                kappa: s.control.kappa,
            })
        }
        GapLaw::Uncatalysed => {
            let terms = PSpinTerms::new(spin, 3)?;
            let m = min_gap_over_gamma(&terms, 1.0, &opts.gamma_grid, opts.gamma_tol)?;
            Ok(GapRow {
                j,
                gap: m.gap,
                gamma: m.gamma,
                kappa: 1.0,
            })
        }
        GapLaw::Lmg => {
            let c = LmgControl::new(2.0 / 3.0, 0.0)?;
            let s = parity_resolved_gaps(&build_lmg_hamiltonian(spin, c)?, 3)?;
            let gap = s.delta02.ok_or(Error::Empty("second same-parity level"))?;
            Ok(GapRow {
                j,
                gap,
                gamma: c.gamma_x,
                kappa: c.gamma_z,
            })
        }
    }
}

/// Gap per j and its fit (exponential for [`GapLaw::Uncatalysed`], power law otherwise).
pub fn fit_gap_scaling(js: &[f64], law: GapLaw, opts: &SaddleOptions) -> Result<GapScan> {
    check_sorted(js)?;
    let spins = js.iter().map(|&j| spin_of(j)).collect::<Result<Vec<_>>>()?;
    let inner = SaddleOptions {
        exec: Exec::Serial,
        ..opts.clone()
    };
    let results = opts.exec.map(&spins, |&s| gap_row(law, s, &inner));
    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    for (&j, r) in js.iter().zip(results) {
        match r {
            Ok(row) if row.gap > 0.0 => rows.push(row),
            Ok(_) => excluded.push(Excluded {
                j,
                reason: "gap below resolution".into(),
            }),
            Err(e) => excluded.push(Excluded {
                j,
                reason: e.to_string(),
            }),
        }
    }
    let x: Vec<f64> = rows.iter().map(|r| r.j).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.gap).collect();
    let fit = match law {
        GapLaw::Uncatalysed => fit_exponential(&x, &y)?,
        _ => fit_power_law(&x, &y)?,
    };
    Ok(GapScan {
        law,
        rows,
        excluded,
        fit,
    })
}

/// Distance of the quantum transition gamma* from the birth line gamma0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthRow {
    pub j: f64,
    pub kappa: f64,
    /// Annealing ratio of the minimum-gap Gamma.
    pub gamma_star: f64,
    pub gamma0: f64,
    pub gamma2: f64,
    /// gamma0 - gamma_star.
    pub width: f64,
}

impl WidthRow {
    fn new(j: f64, kappa: f64, gamma: f64) -> Result<Self> {
        let gamma_star = gamma / (1.0 - gamma);
        let gamma0 = gamma_zero(kappa)?;
        Ok(Self {
            j,
            kappa,
            gamma_star,
            gamma0,
            gamma2: gamma_second_order(kappa)?,
            width: gamma0 - gamma_star,
        })
    }

    /// gamma2 <= gamma* <= gamma0.
    pub fn within_bounds(&self) -> bool {
        self.gamma2 <= self.gamma_star && self.gamma_star <= self.gamma0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WidthScan {
    pub rows: Vec<WidthRow>,
    /// Fit of log(gamma0 - gamma*) against log kappa.
    pub fit: ScalingFit,
}

fn fit_width(rows: Vec<WidthRow>, gamma_tol: f64) -> Result<WidthScan> {
    for r in &rows {
        // Gamma tolerance mapped to the annealing ratio
        let g = r.gamma_star / (1.0 + r.gamma_star);
        let res = gamma_tol / ((1.0 - g) * (1.0 - g));
        if r.width <= res {
            return Err(Error::GridConvergence(format!(
                "gamma0 - gamma* = {:.3e} at kappa = {} (j = {}) is below the resolution {:.1e}",
                r.width, r.kappa, r.j, res
            )));
        }
    }
    let x: Vec<f64> = rows.iter().map(|r| r.kappa).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.width).collect();
    let fit = fit_power_law(&x, &y)?;
    Ok(WidthScan { rows, fit })
}

/// gamma0 - gamma* at fixed j over a list of kappa in (0, 0.3].
pub fn quantum_width_scan(
    kappas: &[f64],
    spin: TwiceSpin,
    opts: &SaddleOptions,
) -> Result<WidthScan> {
    if kappas.is_empty() {
        return Err(Error::Empty("kappa list"));
    }
    if let Some(&k) = kappas.iter().find(|&&k| !(k > 0.0 && k <= 0.3)) {
        return Err(Error::param("kappa", k, "must lie in (0, 0.3]"));
    }
    let terms = PSpinTerms::new(spin, 3)?;
    let rows = opts
        .exec
        .map(kappas, |&k| {
            let m = min_gap_over_gamma(&terms, k, &opts.gamma_grid, opts.gamma_tol)?;
            WidthRow::new(spin.j(), k, m.gamma)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    fit_width(rows, opts.gamma_tol)
}

/// gamma0(kappa_c) - gamma* along the saddle locus, one row per j.
pub fn saddle_width_locus(js: &[f64], opts: &SaddleOptions) -> Result<WidthScan> {
    let scan = fit_kappa_c(js, opts)?;
    let rows = scan
        .saddles
        .iter()
        .map(|(j, s)| WidthRow::new(*j, s.control.kappa, s.control.gamma))
        .collect::<Result<Vec<_>>>()?;
    fit_width(rows, opts.gamma_tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_and_large_j() {
        let o = SaddleOptions::default();
        assert!(fit_kappa_c(&[30.0, 20.0], &o).is_err());
        assert!(fit_kappa_c(&[300.0], &o).is_err());
        assert!(fit_kappa_c(&[], &o).is_err());
    }

    #[test]
    fn width_kappa_range_checked() {
        let o = SaddleOptions::default();
        assert!(quantum_width_scan(&[0.5], TwiceSpin::new(20), &o).is_err());
    }

    #[test]
    fn width_row_bounds() {
        let r = WidthRow::new(10.0, 0.2, 0.6).unwrap();
        assert!((r.gamma_star - 1.5).abs() < 1e-15);
        assert!(r.gamma2 <= r.gamma0);
    }
}
