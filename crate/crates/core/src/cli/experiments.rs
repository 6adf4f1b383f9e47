//! The named experiments: each turns a validated config into tables and assertions.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    decay_fit, default_window, diffusion_residual, expected_rate, horizon_violation, lebesgue_norm,
    magnitude_field, moment, sobolev_norm, trustworthy_horizon, two_sided_profile_check,
    weighted_l1_norm, NormSpec, RateContext,
};
use crate::analysis::norms::deterministic_sum_by;
use crate::analysis::window::DEFAULT_WINDOW_SAMPLES;
use crate::asymptotics::{asymptotic_roots, error_order_fit, OrderFit, ZoneTag};
use crate::evolve::{
    evolve_grid, evolve_spectral, physical_to_state, propagate_mode, scalar_route, sigma1_gaussian_state,
    Grid, SpectralState,
};
use crate::linalg::{c, Complex64};
use crate::model::{physical_from_state, state_from_physical, ModelParams, PhysicalTriple};
use crate::regression::log_space;
use crate::spectrum::{eigenvalues_in, gap_grid, gap_profile, raw_eigenvalues, smoothing_exponent, Branch};
use crate::Error;

use super::config::{DataLevel, DataSpec, ExperimentKind, Family, TimeSpec, Validated};
use super::data;
use super::output::{Criterion, Report, Table};
use super::CliError;

/// Runs a validated experiment without touching the file system.
pub fn execute(v: &Validated, allow_horizon_violation: bool) -> Result<Report, CliError> {
    let mut report = Report {
        tables: Vec::new(),
        criteria: Vec::new(),
        warnings: Vec::new(),
    };
    let times = match v.grid {
        Some(grid) => {
            let times = resolve_times(v, &grid)?;
            if let Some((t, horizon)) = horizon_violation(&grid, &v.params, &times) {
                if !allow_horizon_violation {
                    return Err(CliError::Horizon { t, horizon });
                }
                let msg = format!("time {t:e} exceeds the trustworthy horizon {horizon:e}");
                log::warn!("{msg}");
                report.warnings.push(msg);
            }
            times
        }
        None => Vec::new(),
    };
    match v.kind {
        ExperimentKind::SpectralGap => spectral_gap(v, &mut report)?,
        ExperimentKind::SmoothingExponent => smoothing(v, &mut report)?,
        ExperimentKind::RootsVsAsymptotics => roots_vs_asymptotics(v, &mut report)?,
        ExperimentKind::EvolveSnapshot => evolve_snapshot(v, &times, &mut report)?,
        ExperimentKind::KernelOracleSigma1 => kernel_oracle(v, &times, &mut report)?,
        ExperimentKind::ScalarRouteCheck => scalar_check(v, &mut report)?,
        ExperimentKind::Decay => decay(v, &times, false, &mut report)?,
        ExperimentKind::WeightedDecay => decay(v, &times, true, &mut report)?,
        ExperimentKind::Diffusion => diffusion(v, &times, &mut report)?,
        ExperimentKind::ProfileTwoSided => profile(v, &times, &mut report)?,
    }
    Ok(report)
}

fn tolerance(v: &Validated, default: f64) -> f64 {
    v.config.tolerance.unwrap_or(default)
}

fn data_spec(v: &Validated) -> &DataSpec {
    v.config.data.as_ref().expect("validated grid experiments carry data")
}

fn grid_of(v: &Validated) -> Grid {
    v.grid.expect("validated grid experiments carry a grid")
}

/// Explicit times, or a log-spaced window defaulting to the measurable range.
fn resolve_times(v: &Validated, grid: &Grid) -> Result<Vec<f64>, CliError> {
    match v.config.times.as_ref().expect("validated grid experiments carry times") {
        TimeSpec::List(t) => Ok(t.clone()),
        TimeSpec::Window(w) => {
            let lo = match w.lo {
                Some(lo) => lo,
                None => default_window(grid, &v.params, v.zone.eps)?.0,
            };
            let hi = w.hi.unwrap_or_else(|| trustworthy_horizon(grid, &v.params));
            if !(lo < hi && hi.is_finite()) {
                return Err(CliError::config(format!("empty time window [{lo:e}, {hi:e}]")));
            }
            Ok(log_space(lo, hi, w.samples.unwrap_or(DEFAULT_WINDOW_SAMPLES)))
        }
    }
}

fn norm_spec(v: &Validated) -> NormSpec {
    v.config.norm.unwrap_or(NormSpec::SobolevDot { s: 0.0 })
}

fn sobolev_order(v: &Validated) -> Result<f64, CliError> {
    match norm_spec(v) {
        NormSpec::SobolevDot { s } => Ok(s),
        other => Err(CliError::config(format!("{} measures Sobolev norms only, got {other:?}", v.kind))),
    }
}

/// The norm named by the config, applied to a spectral state.
fn measure(state: &SpectralState, norm: NormSpec) -> crate::Result<f64> {
    match norm {
        NormSpec::SobolevDot { s } => sobolev_norm(state, s),
        NormSpec::Lebesgue { q } => {
            let (fields, _) = state.to_state_fields();
            lebesgue_norm(&state.grid, &magnitude_field(&fields), q)
        }
        NormSpec::WeightedL1 { .. } => Err(Error::Unsupported("weighted L1 norm of a solution".into())),
    }
}

/// Spatial means of the state components, read off the zero mode.
fn state_means(state: &SpectralState) -> [f64; 3] {
    let g = state.grid;
    let scale = (2.0 * PI).powf(0.5 * g.dim() as f64) / g.box_length().powi(g.dim() as i32);
    let m = state.mode(0);
    [m.w1.re * scale, m.w2.re * scale, m.w3.re * scale]
}

fn moment_criterion(v: &Validated, grid: &Grid, report: &mut Report) -> Result<f64, CliError> {
    let spec = data_spec(v);
    let fields = data::state_fields(spec, grid)?;
    let m = moment(grid, &fields)?;
    report.criteria.push(Criterion::recorded("moment_norm", m.p_norm()));
    if spec.family != Family::Cosine {
        report
            .criteria
            .push(Criterion::at_most("moment_bound_ratio", m.bound_ratio, 1.0));
    }
    Ok(m.p_norm())
}

fn spectral_gap(v: &Validated, report: &mut Report) -> Result<(), CliError> {
    let samples = v.config.scan.samples.unwrap_or(400);
    let lo = v.config.scan.r_lo.unwrap_or(v.zone.eps);
    let hi = v.config.scan.r_hi.unwrap_or(v.zone.n_hi);
    let grid = gap_grid(lo, hi, samples)?;
    let roots = gap_profile(&v.params, &grid);
    let mut t = Table::new("", &["r", "re_lambda1", "re_lambda2", "re_lambda3"]);
    let mut gap = f64::INFINITY;
    for (r, l) in grid.iter().zip(&roots) {
        t.push(vec![(*r).into(), l.roots[0].re.into(), l.roots[1].re.into(), l.roots[2].re.into()]);
        gap = gap.min(l.min_re());
    }
    report.tables.push(t);
    report.criteria.push(Criterion::above("min_re_lambda", gap, 0.0));
    Ok(())
}

/// Predicted growth exponent of the spectral abscissa as `r → ∞`.
pub fn expected_smoothing_exponent(sigma: f64) -> f64 {
    if sigma <= 1.0 {
        2.0
    } else {
        4.0 - 2.0 * sigma
    }
}

fn smoothing(v: &Validated, report: &mut Report) -> Result<(), CliError> {
    let lo = v.config.scan.r_lo.unwrap_or(10.0);
    let hi = v.config.scan.r_hi.unwrap_or(1000.0);
    let slope = smoothing_exponent(&v.params, lo, hi)?;
    let mut t = Table::new("", &["r", "abscissa"]);
    for r in log_space(lo, hi, v.config.scan.samples.unwrap_or(64)) {
        t.push(vec![r.into(), raw_eigenvalues(r, &v.params).min_re().into()]);
    }
    report.tables.push(t);
    report.criteria.push(Criterion::within(
        "abscissa_exponent",
        slope,
        expected_smoothing_exponent(v.params.sigma()),
        tolerance(v, 0.1),
    ));
    Ok(())
}

fn roots_vs_asymptotics(v: &Validated, report: &mut Report) -> Result<(), CliError> {
    let zone = v.zone;
    let (lo, hi) = match zone.tag {
        ZoneTag::Small => (
            v.config.scan.r_lo.unwrap_or(1e-2 * zone.eps),
            v.config.scan.r_hi.unwrap_or(zone.eps),
        ),
        _ => (
            v.config.scan.r_lo.unwrap_or(zone.n_hi),
            v.config.scan.r_hi.unwrap_or(1e2 * zone.n_hi),
        ),
    };
    let grid = log_space(lo, hi, v.config.scan.samples.unwrap_or(12));
    let fits = error_order_fit(&v.params, &zone, &grid)?;
    let mut t = Table::new(
        "",
        &["r", "branch", "exact_re", "exact_im", "asym_re", "asym_im", "abs_err"],
    );
    let mut labels = [Branch::Unassigned; 3];
    let mut order = 0.0;
    for &r in &grid {
        let pred = asymptotic_roots(r, &v.params, &zone)?;
        let exact = eigenvalues_in(r, &v.params, &zone)?;
        labels = pred.values.labels;
        order = pred.remainder_order;
        for (label, a) in labels.iter().zip(pred.values.roots) {
            let e = exact
                .by_label(*label)
                .ok_or_else(|| CliError::config(format!("branch {label} missing at r = {r}")))?;
            t.push(vec![
                r.into(),
                label.to_string().into(),
                e.re.into(),
                e.im.into(),
                a.re.into(),
                a.im.into(),
                (e - a).norm().into(),
            ]);
        }
    }
    report.tables.push(t);
    let tol = tolerance(v, 0.3);
    for (label, fit) in labels.iter().zip(fits) {
        let name = format!("order_{label}");
        let crit = match fit {
            OrderFit::ExactMatch => Criterion::flag(name, true).with_note("exact to rounding"),
            // the remainder is O(r^order): a floor as r → 0, a ceiling as r → ∞
            OrderFit::Slope(s) => match (zone.tag, label) {
                (ZoneTag::Small, Branch::Structural(_)) => {
                    Criterion::compare(name, s, super::output::Comparison::AtLeast, order, tol)
                }
                (ZoneTag::Small, _) => Criterion::within(name, s, order, tol),
                _ => Criterion::compare(name, s, super::output::Comparison::AtMost, order, tol),
            },
        };
        report.criteria.push(crit);
    }
    Ok(())
}

fn evolve_snapshot(v: &Validated, times: &[f64], report: &mut Report) -> Result<(), CliError> {
    let grid = grid_of(v);
    let spec = data_spec(v);
    let opts = v.config.propagator;
    let state0 = data::initial_state(spec, &grid)?;
    let physical = match spec.level {
        DataLevel::Physical => Some(data::physical_fields(spec, &grid)?),
        DataLevel::State => None,
    };
    let m0 = state_means(&state0);
    let mut t = Table::new(
        "",
        &["t", "mean_w1", "mean_w2", "mean_w3", "mean_ut", "l2_norm"],
    );
    let mut drift = [0.0f64; 3];
    let mut ut_err = 0.0f64;
    for &time in times {
        let st = match &physical {
            Some(p) => {
                let evo = evolve_grid(p, &v.params, time, &opts)?;
                physical_to_state(&evo.fields)?
            }
            None => evolve_spectral(&state0, &v.params, time, &opts)?,
        };
        let m = state_means(&st);
        let ut = 0.5 * (m[0] + m[1]);
        for i in 0..3 {
            drift[i] = drift[i].max((m[i] - m0[i]).abs() / m0[i].abs().max(1.0));
        }
        let want = 0.5 * (m0[0] + m0[1]) * (-time).exp();
        ut_err = ut_err.max((ut - want).abs() / if want.abs() > 0.0 { want.abs() } else { 1.0 });
        t.push(vec![
            time.into(),
            m[0].into(),
            m[1].into(),
            m[2].into(),
            ut.into(),
            sobolev_norm(&st, 0.0)?.into(),
        ]);
    }
    report.tables.push(t);
    let tol = tolerance(v, 1e-12);
    if v.params.sigma() > 0.0 {
        for (i, d) in drift.iter().enumerate() {
            report
                .criteria
                .push(Criterion::at_most(format!("mean_w{}_drift", i + 1), *d, tol));
        }
    } else {
        report.criteria.push(Criterion::at_most("mean_w3_drift", drift[2], tol));
        report
            .criteria
            .push(Criterion::at_most("mean_ut_exponential_rel_err", ut_err, 1e-8));
    }
    Ok(())
}

fn kernel_oracle(v: &Validated, times: &[f64], report: &mut Report) -> Result<(), CliError> {
    let grid = grid_of(v);
    let spec = data_spec(v);
    let center = if spec.center.is_empty() {
        vec![0.0; grid.dim()]
    } else {
        spec.center.clone()
    };
    let state0 = data::initial_state(spec, &grid)?;
    let mut t = Table::new("", &["t", "rel_l2_error", "imag_residue"]);
    let mut worst = 0.0f64;
    for &time in times {
        let exact = sigma1_gaussian_state(&grid, spec.amplitudes, spec.width, &center, time)?;
        let (got, residue) = evolve_spectral(&state0, &v.params, time, &v.config.propagator)?.to_state_fields();
        let n = grid.len();
        let diff = deterministic_sum_by(3 * n, |k| (got[k / n][k % n] - exact[k / n][k % n]).powi(2));
        let norm = deterministic_sum_by(3 * n, |k| exact[k / n][k % n].powi(2));
        let rel = (diff / norm).sqrt();
        worst = worst.max(rel);
        t.push(vec![time.into(), rel.into(), residue.into()]);
    }
    report.tables.push(t);
    report
        .criteria
        .push(Criterion::at_most("max_rel_l2_error", worst, tolerance(v, 1e-6)));
    Ok(())
}

fn scalar_check(v: &Validated, report: &mut Report) -> Result<(), CliError> {
    let scan = v.config.scan;
    let samples = scan.samples.unwrap_or(200);
    let (r_lo, r_hi) = (scan.r_lo.unwrap_or(0.05), scan.r_hi.unwrap_or(20.0));
    let (t_lo, t_hi) = (scan.t_lo.unwrap_or(0.0), scan.t_hi.unwrap_or(3.0));
    let sigma = v.params.sigma();
    let (s_lo, s_hi) = (scan.sigma_lo.unwrap_or(sigma), scan.sigma_hi.unwrap_or(sigma));
    let mut rng = ChaCha8Rng::seed_from_u64(v.config.seed);
    let mut t = Table::new(
        "",
        &["index", "r", "sigma", "t", "scalar_re", "scalar_im", "matrix_re", "matrix_im", "rel_err"],
    );
    let mut worst = 0.0f64;
    let mut skipped = 0usize;
    let mut index = 0usize;
    // bounded so that a range full of collisions cannot loop forever
    while index < samples && skipped < 100 * samples {
        let r = (rng.random_range(r_lo.ln()..=r_hi.ln())).exp();
        let s = rng.random_range(s_lo..=s_hi);
        let time = rng.random_range(t_lo..=t_hi);
        let mut draw = || c(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
        let (u0, u1, th) = (draw(), draw(), draw());
        let params = ModelParams::new(s, v.params.dim())?;
        let scalar = match scalar_route(u0, u1, th, r, &params, time) {
            Ok(z) => z,
            Err(Error::Degenerate(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let w0 = state_from_physical(&PhysicalTriple::new(u0, u1, th), r);
        let w = propagate_mode(&w0, r, &params, time, &v.config.propagator);
        let matrix: Complex64 = physical_from_state(&w, r)?.u_hat;
        let rel = (scalar - matrix).norm() / matrix.norm().max(1.0);
        worst = worst.max(rel);
        t.push(vec![
            index.into(),
            r.into(),
            s.into(),
            time.into(),
            scalar.re.into(),
            scalar.im.into(),
            matrix.re.into(),
            matrix.im.into(),
            rel.into(),
        ]);
        index += 1;
    }
    report.tables.push(t);
    report.criteria.push(Criterion::at_most("max_rel_error", worst, tolerance(v, 1e-8)));
    report.criteria.push(Criterion::at_least("samples", index as f64, samples as f64));
    report
        .criteria
        .push(Criterion::recorded("degenerate_skipped", skipped as f64));
    Ok(())
}

/// `max{2−σ, 1}`-type scale: the frequency exponent of the slowest branch is twice this.
fn slow_scale(sigma: f64) -> f64 {
    if sigma < 1.0 {
        2.0 - sigma
    } else {
        1.0
    }
}

fn decay(v: &Validated, times: &[f64], weighted: bool, report: &mut Report) -> Result<(), CliError> {
    let grid = grid_of(v);
    let spec = data_spec(v);
    let norm = norm_spec(v);
    let sigma = v.params.sigma();
    let n = v.params.dim();
    let state0 = data::initial_state(spec, &grid)?;
    let mut norms = Vec::with_capacity(times.len());
    for &time in times {
        let st = evolve_spectral(&state0, &v.params, time, &v.config.propagator)?;
        norms.push(measure(&st, norm)?);
    }
    let fit = decay_fit(times, &norms)?;
    let mut t = Table::new("", &["t", "norm"]);
    for (time, value) in times.iter().zip(&norms) {
        t.push(vec![(*time).into(), (*value).into()]);
    }
    report.tables.push(t);
    let base = match norm {
        NormSpec::SobolevDot { s } => expected_rate(&RateContext::Energy { sigma, n, m: 1.0, s })?,
        NormSpec::Lebesgue { q } => expected_rate(&RateContext::LpLq { sigma, n, p: 1.0, q, s: 0.0 })?,
        NormSpec::WeightedL1 { .. } => unreachable!("rejected by validation"),
    };
    let p_norm = moment_criterion(v, &grid, report)?;
    if weighted {
        let delta = v.config.delta.unwrap_or(1.0);
        let rate = base + delta / (2.0 * slow_scale(sigma));
        let fields = data::state_fields(spec, &grid)?;
        let w = weighted_l1_norm(&grid, &magnitude_field(&fields), delta)?;
        report.criteria.push(Criterion::recorded("weighted_l1_norm", w.value));
        report.criteria.push(Criterion::compare(
            "decay_slope",
            fit.slope,
            super::output::Comparison::AtMost,
            -rate,
            tolerance(v, 0.05),
        ));
    } else {
        if p_norm == 0.0 {
            report.warnings.push("data have a vanishing moment; the rate is an upper bound only".into());
        }
        report
            .criteria
            .push(Criterion::within("decay_slope", fit.slope, -base, tolerance(v, 0.03)));
    }
    report.criteria.push(Criterion::recorded("r_squared", fit.r_squared));
    Ok(())
}

fn diffusion(v: &Validated, times: &[f64], report: &mut Report) -> Result<(), CliError> {
    let grid = grid_of(v);
    let s = sobolev_order(v)?;
    let state0 = data::initial_state(data_spec(v), &grid)?;
    let opts = v.config.propagator;
    if v.params.is_critical() {
        let mut norms = Vec::with_capacity(times.len());
        for &time in times {
            norms.push(sobolev_norm(&evolve_spectral(&state0, &v.params, time, &opts)?, s)?);
        }
        let fit = decay_fit(times, &norms)?;
        let mut t = Table::new("", &["t", "solution_norm"]);
        for (time, value) in times.iter().zip(&norms) {
            t.push(vec![(*time).into(), (*value).into()]);
        }
        report.tables.push(t);
        report.criteria.push(
            Criterion::recorded("solution_slope", fit.slope)
                .with_note("no improved reference system at sigma = 1"),
        );
        return Ok(());
    }
    let dr = diffusion_residual(&state0, &v.params, s, times, v.zone.eps, &opts)?;
    let mut t = Table::new("", &["t", "residual_norm", "solution_norm"]);
    for ((time, res), sol) in times.iter().zip(&dr.residual_norms).zip(&dr.solution_norms) {
        t.push(vec![(*time).into(), (*res).into(), (*sol).into()]);
    }
    report.tables.push(t);
    let expected = expected_rate(&RateContext::DiffusionGain { sigma: v.params.sigma() })?;
    report
        .criteria
        .push(Criterion::within("diffusion_gain", dr.gain(), expected, tolerance(v, 0.1)));
    report.criteria.push(Criterion::recorded("residual_slope", dr.fit.slope));
    report.criteria.push(Criterion::recorded("solution_slope", dr.solution_fit.slope));
    Ok(())
}

fn profile(v: &Validated, times: &[f64], report: &mut Report) -> Result<(), CliError> {
    let grid = grid_of(v);
    let s = sobolev_order(v)?;
    let state0 = data::initial_state(data_spec(v), &grid)?;
    moment_criterion(v, &grid, report)?;
    let pc = two_sided_profile_check(&state0, &v.params, s, times, &v.config.propagator)?;
    let mut t = Table::new("", &["t", "norm", "compensated"]);
    for ((time, norm), comp) in times.iter().zip(&pc.norms).zip(&pc.compensated) {
        t.push(vec![(*time).into(), (*norm).into(), (*comp).into()]);
    }
    report.tables.push(t);
    report.criteria.push(Criterion::at_most("band_ratio", pc.band_ratio(), 3.0));
    report.criteria.push(Criterion::within(
        "compensated_slope",
        pc.compensated_slope,
        0.0,
        tolerance(v, 0.05),
    ));
    report
        .criteria
        .push(Criterion::at_least("compensated_min_over_floor", pc.ratio_stats.0, pc.floor));
    report.criteria.push(Criterion::recorded("upper_slope", pc.upper_fit.slope));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::ExperimentConfig;

    fn run(text: &str) -> Report {
        let v = ExperimentConfig::from_json(text).unwrap().validate().unwrap();
        execute(&v, false).unwrap()
    }

    #[test]
    fn spectral_gap_table() {
        let r = run(r#"{"experiment": "spectral_gap", "sigma": 0.5, "output": "g", "scan": {"samples": 40}}"#);
        assert_eq!(r.tables[0].rows.len(), 40);
        assert_eq!(r.tables[0].header, vec!["r", "re_lambda1", "re_lambda2", "re_lambda3"]);
        assert!(r.passed());
    }

    #[test]
    fn smoothing_matches_prediction() {
        for sigma in [0.0, 1.0, 1.5, 2.0] {
            let r = run(&format!(
                r#"{{"experiment": "smoothing_exponent", "sigma": {sigma}, "output": "s"}}"#
            ));
            assert!(r.passed(), "{sigma}: {:?}", r.criteria);
        }
    }

    #[test]
    fn roots_example_has_five_columns_of_numbers() {
        let r = run(r#"{"experiment": "roots_vs_asymptotics", "sigma": 1.5, "output": "x"}"#);
        assert_eq!(r.tables[0].rows.len(), 36);
        assert!(r.passed(), "{:?}", r.criteria);
    }

    #[test]
    fn snapshot_zero_mode() {
        let r = run(
            r#"{"experiment": "evolve_snapshot", "sigma": 0.0, "output": "x",
                "grid": {"M": 64, "L": 40.0},
                "data": {"amplitudes": [0.5, 1.0, 0.3], "level": "physical"},
                "times": [0.0, 0.5, 1.0, 2.0]}"#,
        );
        assert!(r.passed(), "{:?}", r.criteria);
        let r = run(
            r#"{"experiment": "evolve_snapshot", "sigma": 1.5, "output": "x",
                "grid": {"M": 64, "L": 40.0},
                "data": {"amplitudes": [0.5, 1.0, 0.3], "family": "bump", "width": 3.0},
                "times": [0.0, 0.5, 1.0, 2.0]}"#,
        );
        assert!(r.passed(), "{:?}", r.criteria);
    }

    #[test]
    fn horizon_is_enforced() {
        let text = r#"{"experiment": "evolve_snapshot", "sigma": 2.0, "output": "x",
            "grid": {"M": 16, "L": 1.0}, "data": {"amplitudes": [1, 0, 0]}, "times": [50.0]}"#;
        let v = ExperimentConfig::from_json(text).unwrap().validate().unwrap();
        assert!(matches!(execute(&v, false), Err(CliError::Horizon { .. })));
        let r = execute(&v, true).unwrap();
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn scalar_check_is_seeded() {
        let text = r#"{"experiment": "scalar_route_check", "sigma": 0.5, "output": "x", "seed": 7,
            "scan": {"samples": 20, "sigma_lo": 0.0, "sigma_hi": 2.0}}"#;
        let a = run(text);
        let b = run(text);
        assert!(a.passed(), "{:?}", a.criteria);
        assert_eq!(a.tables[0].to_csv(), b.tables[0].to_csv());
    }

    #[test]
    fn smoothing_prediction_values() {
        assert_eq!(expected_smoothing_exponent(0.5), 2.0);
        assert_eq!(expected_smoothing_exponent(1.5), 1.0);
        assert_eq!(expected_smoothing_exponent(2.0), 0.0);
    }
}
