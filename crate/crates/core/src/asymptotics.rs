//! Frequency zones, diagonalizer chains and asymptotic root formulas.
//!
//! Two regimes alternate with `σ`:
//!
//! - structural: roots `(r^{4−2σ}, r²+r^{4−2σ}, r^{2σ}−2r^{4−2σ})` with a
//!   remainder of order `6−4σ`; small frequencies for `σ < 1`, large for `σ > 1`.
//! - Fourier: roots `y_j r²` with a remainder of order `2σ`; the other zone.
//!
//! At `σ = 1` the roots are exactly `y_{j+3} r²` for every `r`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inverse, mat_from_real, re, Complex64, Mat3};
use crate::model::{coefficient_matrices, ModelParams};
use crate::regression::loglog_fit;
use crate::spectrum::{
    decompose, eigenvalues_in, y_constants, Branch, SpectralTriple, YKind, DEFAULT_DEGENERACY_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZoneTag {
    Small,
    Bounded,
    Large,
}

/// A frequency zone together with the thresholds `ε < N` that delimit it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Zone {
    pub tag: ZoneTag,
    pub eps: f64,
    pub n_hi: f64,
}

pub const DEFAULT_EPS: f64 = 0.1;
pub const DEFAULT_N: f64 = 10.0;

impl Zone {
    pub fn new(tag: ZoneTag, eps: f64, n_hi: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < n_hi && n_hi.is_finite()) {
            return Err(Error::invalid(format!("zone bounds need 0 < eps < N, got {eps}, {n_hi}")));
        }
        Ok(Zone { tag, eps, n_hi })
    }

    pub fn small() -> Self {
        Zone {
            tag: ZoneTag::Small,
            eps: DEFAULT_EPS,
            n_hi: DEFAULT_N,
        }
    }

    pub fn large() -> Self {
        Zone {
            tag: ZoneTag::Large,
            ..Zone::small()
        }
    }

    pub fn default_bounds() -> Self {
        Zone {
            tag: ZoneTag::Bounded,
            ..Zone::small()
        }
    }

    /// `Small` for `r ≤ ε`, `Large` for `r ≥ N`, `Bounded` in between.
    pub fn classify(&self, r: f64) -> ZoneTag {
        if r <= self.eps {
            ZoneTag::Small
        } else if r >= self.n_hi {
            ZoneTag::Large
        } else {
            ZoneTag::Bounded
        }
    }

    pub fn contains(&self, r: f64) -> bool {
        self.classify(r) == self.tag
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Regime {
    Structural,
    Fourier,
    Critical,
}

fn regime(params: &ModelParams, tag: ZoneTag) -> Option<Regime> {
    let s = params.sigma();
    if s == 1.0 {
        return Some(Regime::Critical);
    }
    match (tag, s < 1.0) {
        (ZoneTag::Bounded, _) => None,
        (ZoneTag::Small, true) | (ZoneTag::Large, false) => Some(Regime::Structural),
        _ => Some(Regime::Fourier),
    }
}

/// Predicted roots, their labels and the remainder exponent in a zone.
pub(crate) fn branch_predictions(
    r: f64,
    params: &ModelParams,
    tag: ZoneTag,
) -> Option<([Complex64; 3], [Branch; 3], f64)> {
    let s = params.sigma();
    let r2 = r * r;
    match regime(params, tag)? {
        Regime::Structural => {
            let slow = r.powf(4.0 - 2.0 * s);
            let damp = params.damping_weight(r);
            Some((
                [re(slow), re(r2 + slow), re(damp - 2.0 * slow)],
                [Branch::Structural(1), Branch::Structural(2), Branch::Structural(3)],
                6.0 - 4.0 * s,
            ))
        }
        Regime::Fourier => {
            let y = y_constants(YKind::Offset).values;
            Some((
                [y[0] * r2, y[1] * r2, y[2] * r2],
                [Branch::Fourier(1), Branch::Fourier(2), Branch::Fourier(3)],
                2.0 * s,
            ))
        }
        Regime::Critical => {
            let y = y_constants(YKind::Critical).values;
            Some((
                [y[0] * r2, y[1] * r2, y[2] * r2],
                [Branch::Critical(4), Branch::Critical(5), Branch::Critical(6)],
                f64::INFINITY,
            ))
        }
    }
}

/// Transformation matrices of the diagonalization procedure at one `r`.
///
/// Unused factors are the identity: the Fourier regime and `σ = 1` use a
/// single constant eigenvector matrix `T0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalizerChain {
    pub t0: Mat3,
    pub t1: Mat3,
    pub t1half: Mat3,
    pub t2: Mat3,
    pub composite: Mat3,
    pub composite_inv: Mat3,
    pub sigma: f64,
    pub zone: Zone,
}

impl DiagonalizerChain {
    /// `T0·T1·T1½` (without the last step).
    pub fn partial(&self) -> Mat3 {
        self.t0 * self.t1 * self.t1half
    }
}

/// The constant first factor `[[−1,0,1],[1,0,1],[0,1,0]]` of the structural chain.
pub fn structural_t0() -> Mat3 {
    mat_from_real([[-1.0, 0.0, 1.0], [1.0, 0.0, 1.0], [0.0, 1.0, 0.0]])
}

/// `(N1, N1½, N2)` of the structural chain at `r`.
pub fn structural_corrections(r: f64, sigma: f64) -> (Mat3, Mat3, Mat3) {
    let a = r.powf(2.0 - 2.0 * sigma);
    let b = r.powf(4.0 - 4.0 * sigma);
    let n1 = mat_from_real([[0.0, 0.0, a], [0.0, 0.0, a], [a, a, 0.0]]);
    let n1half = mat_from_real([[0.0, 0.0, 0.0], [0.0, 0.0, b], [0.0, b, 0.0]]);
    let n2 = mat_from_real([[0.0, a, 0.0], [-a, 0.0, 0.0], [0.0, 0.0, 0.0]]);
    (n1, n1half, n2)
}

/// Eigenvector matrix of `A₀` (offset constants) or `A₀+A₁` (critical),
/// columns ordered as the constants.
pub fn constant_eigenvectors(kind: YKind) -> Result<Mat3> {
    let (a0, a1) = coefficient_matrices();
    let m = match kind {
        YKind::Offset => *a0.matrix(),
        YKind::Critical => *(a0 + a1).matrix(),
    };
    let y = y_constants(kind).values;
    let d = decompose(&m, SpectralTriple::unlabeled(y), DEFAULT_DEGENERACY_TOL);
    if d.degenerate {
        return Err(Error::Degenerate(format!("{kind:?} eigenvector matrix")));
    }
    Ok(d.v)
}

pub fn diagonalizer(params: &ModelParams, zone: &Zone, r: f64) -> Result<DiagonalizerChain> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("frequency magnitude must be > 0, got {r}")));
    }
    let sigma = params.sigma();
    let id = Mat3::identity();
    let reg = regime(params, zone.tag).ok_or_else(|| {
        Error::Unsupported(format!("no diagonalizer chain for the bounded zone at sigma = {sigma}"))
    })?;
    if reg != Regime::Critical && !zone.contains(r) {
        return Err(Error::invalid(format!("r = {r} lies outside the {:?} zone", zone.tag)));
    }
    let (t0, t1, t1half, t2) = match reg {
        Regime::Structural => {
            let (n1, n1h, n2) = structural_corrections(r, sigma);
            (structural_t0(), id + n1, id + n1h, id + n2)
        }
        Regime::Fourier => (constant_eigenvectors(YKind::Offset)?, id, id, id),
        Regime::Critical => (constant_eigenvectors(YKind::Critical)?, id, id, id),
    };
    let composite = t0 * t1 * t1half * t2;
    let composite_inv = inverse(&composite)
        .ok_or_else(|| Error::Degenerate(format!("diagonalizer singular at r = {r}")))?;
    Ok(DiagonalizerChain {
        t0,
        t1,
        t1half,
        t2,
        composite,
        composite_inv,
        sigma,
        zone: *zone,
    })
}

/// Leading-order roots in a zone and the exponent of their remainder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticRoots {
    pub values: SpectralTriple,
    pub remainder_order: f64,
}

pub fn asymptotic_roots(r: f64, params: &ModelParams, zone: &Zone) -> Result<AsymptoticRoots> {
    if params.is_critical() {
        return Err(Error::Unsupported("roots at sigma = 1 are exact, not asymptotic".into()));
    }
    if zone.tag == ZoneTag::Bounded {
        return Err(Error::Unsupported("no asymptotic formula in the bounded zone".into()));
    }
    if !(r > 0.0) || !zone.contains(r) {
        return Err(Error::invalid(format!("r = {r} lies outside the {:?} zone", zone.tag)));
    }
    let (roots, labels, order) =
        branch_predictions(r, params, zone.tag).expect("covered regime");
    Ok(AsymptoticRoots {
        values: SpectralTriple { roots, labels },
        remainder_order: order,
    })
}

/// Fitted exponent of `|exact − asymptotic|` for one branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderFit {
    Slope(f64),
    ExactMatch,
}

impl OrderFit {
    pub fn slope(&self) -> Option<f64> {
        match self {
            OrderFit::Slope(s) => Some(*s),
            OrderFit::ExactMatch => None,
        }
    }
}

/// Differences below this threshold everywhere count as an exact match.
pub const EXACT_MATCH_THRESHOLD: f64 = 1e-14;

/// Slope of `log|exact − asym|` against `log r`.
pub fn fit_error_order(r_grid: &[f64], exact: &[Complex64], asym: &[Complex64]) -> Result<OrderFit> {
    if r_grid.len() != exact.len() || exact.len() != asym.len() {
        return Err(Error::invalid("grid and root sequences differ in length"));
    }
    let errs: Vec<f64> = exact.iter().zip(asym).map(|(a, b)| (a - b).norm()).collect();
    if errs.iter().all(|e| *e < EXACT_MATCH_THRESHOLD) {
        return Ok(OrderFit::ExactMatch);
    }
    // isolated exact hits carry no scale information
    let (xs, ys): (Vec<f64>, Vec<f64>) = r_grid
        .iter()
        .zip(&errs)
        .filter(|(_, e)| **e > 0.0)
        .map(|(r, e)| (*r, *e))
        .unzip();
    loglog_fit(&xs, &ys)
        .map(|f| OrderFit::Slope(f.slope))
        .ok_or_else(|| Error::invalid("order fit needs two positive errors"))
}

/// Remainder-order fits for the three branches, in prediction order.
pub fn error_order_fit(params: &ModelParams, zone: &Zone, r_grid: &[f64]) -> Result<[OrderFit; 3]> {
    if r_grid.len() < 8 {
        return Err(Error::invalid("order fits need at least 8 grid points"));
    }
    let mut exact: [Vec<Complex64>; 3] = Default::default();
    let mut asym: [Vec<Complex64>; 3] = Default::default();
    for &r in r_grid {
        let pred = asymptotic_roots(r, params, zone)?;
        let roots = eigenvalues_in(r, params, zone)?;
        for j in 0..3 {
            let label = pred.values.labels[j];
            let hit = roots
                .by_label(label)
                .ok_or_else(|| Error::invalid(format!("branch {label} not found at r = {r}")))?;
            exact[j].push(hit);
            asym[j].push(pred.values.roots[j]);
        }
    }
    let mut out = [OrderFit::ExactMatch; 3];
    for j in 0..3 {
        out[j] = fit_error_order(r_grid, &exact[j], &asym[j])?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, off_diagonal_max};
    use crate::model::symbol_matrix;
    use crate::regression::log_space;

    fn params(sigma: f64) -> ModelParams {
        ModelParams::new(sigma, 1).unwrap()
    }

    #[test]
    fn zone_validation() {
        assert!(Zone::new(ZoneTag::Small, 1.0, 0.5).is_err());
        let z = Zone::new(ZoneTag::Large, 0.2, 5.0).unwrap();
        assert_eq!(z.classify(0.1), ZoneTag::Small);
        assert_eq!(z.classify(1.0), ZoneTag::Bounded);
        assert!(z.contains(7.0));
    }

    #[test]
    fn first_step_conjugation() {
        let t0 = structural_t0();
        let (a0, _) = coefficient_matrices();
        let got = inverse(&t0).unwrap() * a0.matrix() * t0;
        let want = mat_from_real([[0.0, 0.0, 1.0], [0.0, 1.0, 1.0], [-1.0, -1.0, 0.0]]);
        assert!(max_abs(&(got - want)) < 1e-12);
    }

    #[test]
    fn friction_small_zone_chain() {
        let ch = diagonalizer(&params(0.0), &Zone::small(), 0.01).unwrap();
        let n = mat_from_real([[0.0, 0.0, 1.0], [0.0, 0.0, 1.0], [1.0, 1.0, 0.0]]);
        let want = Mat3::identity() + n * re(1e-4);
        assert!(max_abs(&(ch.t1 - want)) < 1e-18);
        assert!(max_abs(&(ch.composite * ch.composite_inv - Mat3::identity())) < 1e-10);
    }

    #[test]
    fn critical_chain_holds_eigenvectors() {
        let ch = diagonalizer(&params(1.0), &Zone::default_bounds(), 1.0).unwrap();
        let a = *symbol_matrix(1.0, &params(1.0)).unwrap().matrix();
        let y = y_constants(YKind::Critical).values;
        for j in 0..3 {
            let col = ch.t0.column(j).into_owned();
            let resid = (a * col - col * y[j]).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(resid < 1e-12);
        }
    }

    #[test]
    fn kelvin_voigt_small_zone_is_single_factor() {
        let ch = diagonalizer(&params(2.0), &Zone::small(), 0.01).unwrap();
        assert_eq!(ch.composite, ch.t0);
        let (a0, _) = coefficient_matrices();
        let d = ch.composite_inv * a0.matrix() * ch.t0;
        assert!(off_diagonal_max(&d) < 1e-12);
    }

    #[test]
    fn uncovered_cases_rejected() {
        assert!(diagonalizer(&params(0.5), &Zone::default_bounds(), 1.0).is_err());
        assert!(diagonalizer(&params(0.5), &Zone::small(), 1.0).is_err());
        assert!(asymptotic_roots(1.0, &params(1.0), &Zone::small()).is_err());
        assert!(asymptotic_roots(1.0, &params(0.5), &Zone::default_bounds()).is_err());
    }

    #[test]
    fn structural_chain_leaves_high_order_remainder() {
        for sigma in [0.0, 0.5] {
            let p = params(sigma);
            // below r ≈ 3e-3 the σ = 0 remainder sits at the rounding floor
            let grid = log_space(5e-3, 1e-1, 12);
            let off: Vec<f64> = grid
                .iter()
                .map(|&r| {
                    let ch = diagonalizer(&p, &Zone::small(), r).unwrap();
                    let a = *symbol_matrix(r, &p).unwrap().matrix();
                    off_diagonal_max(&(ch.composite_inv * a * ch.composite))
                })
                .collect();
            let slope = loglog_fit(&grid, &off).unwrap().slope;
            assert!(slope >= 6.0 - 4.0 * sigma - 0.3, "σ={sigma}: {slope}");
        }
    }

    #[test]
    fn structural_chain_diagonal_matches_formulas() {
        let p = params(0.0);
        let r = 0.01;
        let ch = diagonalizer(&p, &Zone::small(), r).unwrap();
        let a = *symbol_matrix(r, &p).unwrap().matrix();
        let d = ch.composite_inv * a * ch.composite;
        let pred = asymptotic_roots(r, &p, &Zone::small()).unwrap();
        for j in 0..3 {
            assert!((d[(j, j)] - pred.values.roots[j]).norm() < 10.0 * r.powi(6));
        }
    }

    #[test]
    fn asymptotic_examples() {
        let a = asymptotic_roots(0.1, &params(0.0), &Zone::small()).unwrap();
        let want = [1e-4, 0.01 + 1e-4, 1.0 - 2e-4];
        for (z, w) in a.values.roots.iter().zip(want) {
            assert!((z - re(w)).norm() < 1e-15);
        }
        assert_eq!(a.remainder_order, 6.0);

        let a = asymptotic_roots(10.0, &params(2.0), &Zone::large()).unwrap();
        let want = [1.0, 101.0, 1e4 - 2.0];
        for (z, w) in a.values.roots.iter().zip(want) {
            assert!((z - re(w)).norm() < 1e-10);
        }
        assert_eq!(a.remainder_order, -2.0);

        let a = asymptotic_roots(100.0, &params(0.5), &Zone::large()).unwrap();
        let y = y_constants(YKind::Offset).values;
        for (z, w) in a.values.roots.iter().zip(y) {
            assert!((z - w * 1e4).norm() < 1e-9);
        }
        assert_eq!(a.remainder_order, 1.0);
    }

    #[test]
    fn asymptotic_trace_within_remainder() {
        for sigma in [0.0, 0.5, 1.5, 2.0] {
            let p = params(sigma);
            for &r in &[1e-3, 1e-2, 0.1] {
                let a = asymptotic_roots(r, &p, &Zone::small()).unwrap();
                let trace = p.damping_weight(r) + r * r;
                let err = (a.values.sum() - re(trace)).norm();
                assert!(err <= 2.0 * r.powf(a.remainder_order.min(2.0 * sigma).max(0.0)) + 1e-15);
            }
        }
    }

    #[test]
    fn order_fits_in_small_zone() {
        let grid = log_space(1e-3, 1e-1, 12);
        let fits = error_order_fit(&params(0.5), &Zone::small(), &grid).unwrap();
        for f in fits {
            let s = f.slope().unwrap();
            assert!(s >= 4.0 - 0.3, "{s}");
        }
        let fits = error_order_fit(&params(1.5), &Zone::small(), &grid).unwrap();
        for f in fits {
            let s = f.slope().unwrap();
            assert!((s - 3.0).abs() <= 0.3, "{s}");
        }
    }

    #[test]
    fn identical_sequences_are_exact_matches() {
        let grid = log_space(1e-3, 1e-1, 10);
        let z: Vec<Complex64> = grid.iter().map(|r| re(r * r)).collect();
        assert_eq!(fit_error_order(&grid, &z, &z).unwrap(), OrderFit::ExactMatch);
        assert!(error_order_fit(&params(0.5), &Zone::small(), &grid[..4]).is_err());
    }
}
