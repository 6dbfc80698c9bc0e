//! One function per subcommand; each returns the tables to write.

use super::config::{Law, RunConfig};
use super::output::{Table, Value};
use super::CliError;
use crate::catalysis::{
    fit_gap_scaling, fit_kappa_c, rayleigh_alpha_optimum, rayleigh_well, small_kappa_state,
    AsymptoticState, GapLaw, GapScan, ScalingFit, RESIDUAL_ORDERS,
};
use crate::doublewell::{gap_ratio, iso_gap_scan, sector_levels, PiecewiseWell};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::optimize::argmin;
use crate::pathfinder::{schedule_for_spin, tstar_scaling, GraphOptions, TstarOptions};
use crate::spectrum::{
    lowest_eigenpairs, lowest_levels, parity_resolved_gaps, saddle_search, scan_landscape,
    SaddleOptions,
};
use crate::spinspace::{
    build_lmg_hamiltonian, spin_vector_stats, ControlPoint, LmgControl, PSpinTerms,
};

const EXEC: Exec = Exec::Parallel;

pub fn run(cfg: &RunConfig) -> std::result::Result<Vec<Table>, CliError> {
    let tables = match cfg.command.as_str() {
        "pairing" => pairing(cfg),
        "isogap" => isogap(cfg),
        "landscape" => landscape(cfg),
        "saddle" => saddle(cfg),
        "scaling" => scaling(cfg),
        "path" => path(cfg),
        "lmg" => lmg(cfg),
        "asymptotics" => asymptotics(cfg),
        "spinstats" => spinstats(cfg),
        c => return Err(CliError::Config(format!("unknown command '{c}'"))),
    }?;
    Ok(tables)
}

fn saddle_options(cfg: &RunConfig) -> SaddleOptions {
    let d = SaddleOptions::default();
    SaddleOptions {
        gamma_grid: cfg.gamma.map_or(d.gamma_grid.clone(), |r| r.values()),
        kappa_grid: cfg.kappa.map_or(d.kappa_grid.clone(), |r| r.values()),
        ..d
    }
}

fn pairing(cfg: &RunConfig) -> Result<Vec<Table>> {
    let xis = cfg.grid(cfg.xi, "0:4:41");
    let betas = cfg.grid(cfg.beta, "1:1:1");
    let cells: Vec<(f64, f64)> = betas
        .iter()
        .flat_map(|&b| xis.iter().map(move |&x| (b, x)))
        .collect();
    let levels = EXEC
        .map(&cells, |&(b, x)| {
            sector_levels(&PiecewiseWell::symmetric(x, b)?, 3)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(
        "pairing",
        &[
            "beta", "xi1", "e0_even", "e0_odd", "e1_even", "e1_odd", "e2_even", "e2_odd",
        ],
    );
    for (&(b, x), (even, odd)) in cells.iter().zip(levels) {
        let mut row = vec![b.into(), x.into()];
        for k in 0..3 {
            row.push(even.get(k).copied().into());
            row.push(odd.get(k).copied().into());
        }
        t.push(row);
    }
    Ok(vec![t])
}

fn isogap(cfg: &RunConfig) -> Result<Vec<Table>> {
    let xis = cfg.grid(cfg.xi, "2:4:5");
    let betas = cfg.grid(cfg.beta, "0.2:8:40");
    let scan = iso_gap_scan(&xis, &betas, EXEC)?;
    let mut gaps = Table::new("gaps", &["xi1", "beta", "gap_ratio"]);
    for (i, &x) in scan.xi1_axis.iter().enumerate() {
        for (k, &b) in scan.beta_axis.iter().enumerate() {
            gaps.push(vec![x.into(), b.into(), scan.gap(i, k).into()]);
        }
    }
    let mut locus = Table::new("locus", &["xi1", "beta_star", "beta_star_over_xi1"]);
    for (&x, b) in scan.xi1_axis.iter().zip(&scan.locus) {
        locus.push(vec![x.into(), (*b).into(), b.map(|b| b / x).into()]);
    }
    Ok(vec![gaps, locus])
}

fn landscape(cfg: &RunConfig) -> Result<Vec<Table>> {
    let g = cfg.grid(cfg.gamma, "0:1:51");
    let k = cfg.grid(cfg.kappa, "0:1:51");
    let mut t = Table::new(
        "landscape",
        &["j", "gamma", "kappa", "e0", "delta01", "delta02"],
    );
    for spin in cfg.spins() {
        let land = scan_landscape(spin, cfg.p, &g, &k, EXEC)?;
        for gi in 0..g.len() {
            for ki in 0..k.len() {
                let s = land.summary(gi, ki);
                t.push(vec![
                    spin.j().into(),
                    g[gi].into(),
                    k[ki].into(),
                    s.ground_energy().into(),
                    s.delta01.into(),
                    s.delta02.into(),
                ]);
            }
        }
    }
    Ok(vec![t])
}

fn saddle(cfg: &RunConfig) -> Result<Vec<Table>> {
    let opts = saddle_options(cfg);
    let mut t = Table::new("saddle", &["j", "gamma_c", "kappa_c", "delta_c", "clamped"]);
    for spin in cfg.spins() {
        let s = saddle_search(spin, cfg.p, &opts)?;
        t.push(vec![
            spin.j().into(),
            s.control.gamma.into(),
            s.control.kappa.into(),
            s.gap.into(),
            s.clamped.into(),
        ]);
    }
    Ok(vec![t])
}

fn fit_row(fits: &mut Table, law: &str, f: &ScalingFit) {
    fits.push(vec![
        law.into(),
        f.exponent.into(),
        f.coefficient.into(),
        f.window.0.into(),
        f.window.1.into(),
        f.residual.into(),
    ]);
}

fn gap_table(name: &'static str, scan: &GapScan, excluded: &mut Table) -> Table {
    let mut t = Table::new(name, &["j", "gamma", "kappa", "gap", "gap_j2"]);
    for r in &scan.rows {
        t.push(vec![
            r.j.into(),
            r.gamma.into(),
            r.kappa.into(),
            r.gap.into(),
            r.scaled().into(),
        ]);
    }
    for e in &scan.excluded {
        excluded.push(vec![name.into(), e.j.into(), e.reason.clone().into()]);
    }
    t
}

fn scaling(cfg: &RunConfig) -> Result<Vec<Table>> {
    if cfg.p != 3 {
        return Err(Error::param(
            "p",
            cfg.p as f64,
            "scaling fits are defined for p = 3",
        ));
    }
    let opts = saddle_options(cfg);
    let mut tables = Vec::new();
    let mut fits = Table::new(
        "fits",
        &[
            "law",
            "exponent",
            "coefficient",
            "window_lo",
            "window_hi",
            "residual",
        ],
    );
    let mut excluded = Table::new("excluded", &["law", "j", "reason"]);
    if cfg.law.includes(Law::KappaC) {
        let scan = fit_kappa_c(&cfg.js, &opts)?;
        let mut t = Table::new("kappa_c", &["j", "gamma_c", "kappa_c", "delta_c"]);
        for (j, s) in &scan.saddles {
            t.push(vec![
                (*j).into(),
                s.control.gamma.into(),
                s.control.kappa.into(),
                s.gap.into(),
            ]);
        }
        for e in &scan.excluded {
            excluded.push(vec!["kappa_c".into(), e.j.into(), e.reason.clone().into()]);
        }
        fit_row(&mut fits, "kappa_c", &scan.fit);
        tables.push(t);
    }
    for (law, gl, name) in [
        (Law::Catalysed, GapLaw::Catalysed, "gap_catalysed"),
        (Law::Uncatalysed, GapLaw::Uncatalysed, "gap_uncatalysed"),
        (Law::Lmg, GapLaw::Lmg, "gap_lmg"),
    ] {
        if cfg.law.includes(law) {
            let scan = fit_gap_scaling(&cfg.js, gl, &opts)?;
            tables.push(gap_table(name, &scan, &mut excluded));
            fit_row(&mut fits, name, &scan.fit);
        }
    }
    if cfg.law.includes(Law::Catalysed) {
        let r = rayleigh_alpha_optimum()?;
        fits.push(vec![
            "rayleigh_prediction".into(),
            (-2.0).into(),
            r.gap_law_coefficient.into(),
            Value::Missing,
            Value::Missing,
            Value::Missing,
        ]);
    }
    if cfg.law.includes(Law::Tstar) {
        let scan = tstar_scaling(
            &cfg.js,
            &TstarOptions {
                raster: cfg.raster,
                check_resolution: cfg.resolution_check,
                graph: GraphOptions {
                    convention: cfg.convention,
                    forced_kappa_one: cfg.forced,
                },
                exec: EXEC,
            },
        )?;
        let mut t = Table::new("tstar", &["j", "total_time", "refined_time", "shift"]);
        for r in &scan.rows {
            t.push(vec![
                r.j.into(),
                r.total_time.into(),
                r.refined_time.into(),
                r.shift().into(),
            ]);
        }
        for w in &scan.warnings {
            eprintln!("warning: {w}");
        }
        fit_row(&mut fits, "tstar", &scan.fit);
        tables.push(t);
    }
    tables.push(fits);
    if !excluded.rows.is_empty() {
        tables.push(excluded);
    }
    Ok(tables)
}

fn path(cfg: &RunConfig) -> Result<Vec<Table>> {
    if cfg.p != 3 {
        return Err(Error::param(
            "p",
            cfg.p as f64,
            "schedules are defined for p = 3",
        ));
    }
    let opts = GraphOptions {
        convention: cfg.convention,
        forced_kappa_one: cfg.forced,
    };
    let mut steps = Table::new("path", &["j", "step", "gamma", "kappa", "cumulative"]);
    let mut summary = Table::new("summary", &["j", "total_time", "steps", "sentinel_steps"]);
    for spin in cfg.spins() {
        let p = schedule_for_spin(spin, cfg.raster, opts, EXEC)?;
        for (i, (c, t)) in p.controls.iter().zip(&p.cumulative).enumerate() {
            steps.push(vec![
                spin.j().into(),
                i.into(),
                c.gamma.into(),
                c.kappa.into(),
                (*t).into(),
            ]);
        }
        summary.push(vec![
            spin.j().into(),
            p.total_time.into(),
            (p.cells.len() - 1).into(),
            p.sentinel_steps.into(),
        ]);
    }
    Ok(vec![steps, summary])
}

fn lmg(cfg: &RunConfig) -> Result<Vec<Table>> {
    let gx = cfg.grid(cfg.gamma, "0:1:51");
    let gz = cfg.grid(cfg.gz, "-0.5:0.5:21");
    let mut t = Table::new("lmg", &["j", "gamma_x", "gamma_z", "delta01", "delta02"]);
    let mut ext = Table::new(
        "extrema",
        &[
            "j",
            "gamma_z",
            "gamma_x_min01",
            "min_delta01",
            "gamma_x_min02",
            "min_delta02",
        ],
    );
    for spin in cfg.spins() {
        let cells: Vec<(f64, f64)> = gz
            .iter()
            .flat_map(|&z| gx.iter().map(move |&x| (x, z)))
            .collect();
        let gaps = EXEC
            .map(&cells, |&(x, z)| {
                let h = build_lmg_hamiltonian(spin, LmgControl::new(x, z)?)?;
                let s = if z == 0.0 {
                    parity_resolved_gaps(&h, 3)?
                } else {
                    lowest_levels(&h, 3.min(spin.dim()))?
                };
                Ok((s.delta01, s.delta02))
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        for (&(x, z), &(d1, d2)) in cells.iter().zip(&gaps) {
            t.push(vec![
                spin.j().into(),
                x.into(),
                z.into(),
                d1.into(),
                d2.into(),
            ]);
        }
        // loci of the minima over Gamma_x > 0 (Gamma_x = 0 is trivially degenerate)
        for (zi, &z) in gz.iter().enumerate() {
            let row = &gaps[zi * gx.len()..(zi + 1) * gx.len()];
            let live: Vec<usize> = (0..gx.len()).filter(|&i| gx[i] > 0.0).collect();
            let d1: Vec<f64> = live.iter().map(|&i| row[i].0).collect();
            let d2: Vec<f64> = live
                .iter()
                .map(|&i| row[i].1.unwrap_or(f64::INFINITY))
                .collect();
            let pick = |v: &[f64]| {
                argmin(v)
                    .filter(|&i| v[i].is_finite())
                    .map(|i| (gx[live[i]], v[i]))
            };
            let (a, b) = (pick(&d1), pick(&d2));
            ext.push(vec![
                spin.j().into(),
                z.into(),
                a.map(|p| p.0).into(),
                a.map(|p| p.1).into(),
                b.map(|p| p.0).into(),
                b.map(|p| p.1).into(),
            ]);
        }
    }
    Ok(vec![t, ext])
}

fn asymptotics(cfg: &RunConfig) -> Result<Vec<Table>> {
    let kappas = cfg.grid(cfg.kappa, "0.01:0.2:20");
    let mut t = Table::new(
        "asymptotics",
        &[
            "kappa", "x", "quantity", "order", "leading", "exact", "residual",
        ],
    );
    for &k in &kappas {
        let lead = small_kappa_state(k, cfg.x)?;
        let exact = AsymptoticState::exact(k, cfg.x)?;
        for ((name, l), ((_, e), (_, q))) in lead
            .quantities()
            .iter()
            .zip(exact.quantities().iter().zip(RESIDUAL_ORDERS.iter()))
        {
            t.push(vec![
                k.into(),
                cfg.x.into(),
                (*name).into(),
                (*q as usize).into(),
                (*l).into(),
                (*e).into(),
                (l - e).abs().into(),
            ]);
        }
    }
    let alphas = cfg.grid(cfg.alpha, "0.5:4:71");
    let weighted = EXEC
        .map(&alphas, |&a| {
            gap_ratio(&rayleigh_well(a)?).map(|g| g * a * a)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut r = Table::new("rayleigh", &["alpha", "weighted_gap"]);
    for (a, w) in alphas.iter().zip(weighted) {
        r.push(vec![(*a).into(), w.into()]);
    }
    let opt = rayleigh_alpha_optimum()?;
    let mut o = Table::new(
        "rayleigh_optimum",
        &["alpha_star", "weighted_gap", "gap_law_coefficient"],
    );
    o.push(vec![
        opt.alpha.into(),
        opt.weighted_gap.into(),
        opt.gap_law_coefficient.into(),
    ]);
    Ok(vec![t, r, o])
}

fn spinstats(cfg: &RunConfig) -> Result<Vec<Table>> {
    let g = cfg.grid(cfg.gamma, "0:1:51");
    let k = cfg.grid(cfg.kappa, "1:1:1");
    let mut t = Table::new(
        "spinstats",
        &[
            "j", "gamma", "kappa", "r", "theta", "delta_r", "mean_x", "mean_z",
        ],
    );
    for spin in cfg.spins() {
        let terms = PSpinTerms::new(spin, cfg.p)?;
        let cells: Vec<ControlPoint> = g
            .iter()
            .flat_map(|&gamma| k.iter().map(move |&kappa| ControlPoint { gamma, kappa }))
            .collect();
        let stats = EXEC
            .map(&cells, |c| {
                let s = lowest_eigenpairs(&terms.hamiltonian(*c), 2.min(spin.dim()))?;
                spin_vector_stats(
                    s.ground_state
                        .as_deref()
                        .ok_or(Error::Empty("ground state"))?,
                    spin,
                )
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        for (c, s) in cells.iter().zip(stats) {
            t.push(vec![
                spin.j().into(),
                c.gamma.into(),
                c.kappa.into(),
                s.r.into(),
                s.theta.into(),
                s.delta_r.into(),
                s.mean[0].into(),
                s.mean[2].into(),
            ]);
        }
    }
    Ok(vec![t])
}
