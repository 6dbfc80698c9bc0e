use super::{lowest_levels, SpectralSummary};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::spinspace::{ControlPoint, PSpinTerms, TwiceSpin};

/// Spectral summaries on a rectilinear (Gamma, kappa) raster.
///
/// Stored row-major: index `gi * kappa_axis.len() + ki`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapLandscape {
    pub gamma_axis: Vec<f64>,
    pub kappa_axis: Vec<f64>,
    pub summaries: Vec<SpectralSummary>,
    pub spin: TwiceSpin,
    pub p: u32,
}

impl GapLandscape {
    pub fn shape(&self) -> (usize, usize) {
        (self.gamma_axis.len(), self.kappa_axis.len())
    }

    pub fn summary(&self, gi: usize, ki: usize) -> &SpectralSummary {
        &self.summaries[gi * self.kappa_axis.len() + ki]
    }

    pub fn delta01(&self, gi: usize, ki: usize) -> f64 {
        self.summary(gi, ki).delta01
    }

    pub fn control(&self, gi: usize, ki: usize) -> ControlPoint {
        ControlPoint {
            gamma: self.gamma_axis[gi],
            kappa: self.kappa_axis[ki],
        }
    }
}

pub(crate) fn check_axis(name: &'static str, axis: &[f64]) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::Empty(name));
    }
    for w in axis.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::param(name, w[1], "grid must be strictly ascending"));
        }
    }
    for &v in axis {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::param(name, v, "grid values must lie in [0, 1]"));
        }
    }
    Ok(())
}

/// Three lowest levels at every raster point of the p-spin model.
pub fn scan_landscape(
    spin: TwiceSpin,
    p: u32,
    gamma_grid: &[f64],
    kappa_grid: &[f64],
    exec: Exec,
) -> Result<GapLandscape> {
    check_axis("Gamma grid", gamma_grid)?;
    check_axis("kappa grid", kappa_grid)?;
    let terms = PSpinTerms::new(spin, p)?;
    let k = spin.dim().min(3);
    let points: Vec<ControlPoint> = gamma_grid
        .iter()
        .flat_map(|&gamma| {
            kappa_grid
                .iter()
                .map(move |&kappa| ControlPoint { gamma, kappa })
        })
        .collect();
    let results = exec.map(&points, |c| {
        lowest_levels(&terms.hamiltonian(*c), k).map_err(|e| Error::AtPoint {
            gamma: c.gamma,
            kappa: c.kappa,
            source: Box::new(e),
        })
    });
    let summaries = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(GapLandscape {
        gamma_axis: gamma_grid.to_vec(),
        kappa_axis: kappa_grid.to_vec(),
        summaries,
        spin,
        p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_at_start() {
        let l = scan_landscape(TwiceSpin::new(2), 3, &[1.0], &[1.0], Exec::Serial).unwrap();
        assert!((l.delta01(0, 0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn bad_axes_rejected() {
        assert!(scan_landscape(TwiceSpin::new(2), 3, &[], &[1.0], Exec::Serial).is_err());
        assert!(scan_landscape(TwiceSpin::new(2), 3, &[0.5, 0.4], &[1.0], Exec::Serial).is_err());
        assert!(scan_landscape(TwiceSpin::new(2), 3, &[0.5], &[1.5], Exec::Serial).is_err());
    }
}
