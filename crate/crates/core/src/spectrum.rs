//! Exact characteristic roots of the symbol, eigen-decompositions and scans.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::{branch_predictions, Zone, ZoneTag};
use crate::error::{Error, Result};
use crate::linalg::{c, cond1, cross, inverse, re, vec_norm, Complex64, Mat3, Vec3};
use crate::model::{symbol_matrix_unchecked, ModelParams};
use crate::regression::{log_space, loglog_fit};

/// Monic cubic `λ³ + c2·λ² + c1·λ + c0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicCoeffs {
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl CubicCoeffs {
    pub fn new(c2: f64, c1: f64, c0: f64) -> Self {
        CubicCoeffs { c2, c1, c0 }
    }

    /// Monic cubic with the given roots; the imaginary parts must cancel.
    pub fn from_roots(a: Complex64, b: Complex64, z: Complex64) -> Self {
        CubicCoeffs {
            c2: -(a + b + z).re,
            c1: (a * b + a * z + b * z).re,
            c0: -(a * b * z).re,
        }
    }

    #[inline]
    pub fn eval(&self, x: Complex64) -> Complex64 {
        ((x + self.c2) * x + self.c1) * x + self.c0
    }

    #[inline]
    pub fn derivative(&self, x: Complex64) -> Complex64 {
        (x * 3.0 + 2.0 * self.c2) * x + self.c1
    }
}

/// Which asymptotic family a root belongs to.
///
/// `Structural(j)`: the `j`-th of `(r^{4−2σ}, r²+r^{4−2σ}, r^{2σ}−2r^{4−2σ})`.
/// `Fourier(j)`: `y_j r²`, `j ∈ 1..=3`. `Critical(j)`: `y_j r²` at `σ = 1`,
/// `j ∈ 4..=6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    Structural(u8),
    Fourier(u8),
    Critical(u8),
    Unassigned,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Structural(j) => write!(f, "structural_{j}"),
            Branch::Fourier(j) => write!(f, "fourier_{j}"),
            Branch::Critical(j) => write!(f, "critical_{j}"),
            Branch::Unassigned => write!(f, "unassigned"),
        }
    }
}

/// Three characteristic roots at one frequency magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralTriple {
    pub roots: [Complex64; 3],
    pub labels: [Branch; 3],
}

impl SpectralTriple {
    pub fn unlabeled(roots: [Complex64; 3]) -> Self {
        SpectralTriple {
            roots,
            labels: [Branch::Unassigned; 3],
        }
    }

    pub fn lam1(&self) -> Complex64 {
        self.roots[0]
    }

    pub fn lam2(&self) -> Complex64 {
        self.roots[1]
    }

    pub fn lam3(&self) -> Complex64 {
        self.roots[2]
    }

    pub fn sum(&self) -> Complex64 {
        self.roots.iter().sum()
    }

    pub fn pair_sum(&self) -> Complex64 {
        let [a, b, z] = self.roots;
        a * b + a * z + b * z
    }

    pub fn product(&self) -> Complex64 {
        self.roots.iter().product()
    }

    pub fn min_re(&self) -> f64 {
        self.roots.iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
    }

    pub fn by_label(&self, label: Branch) -> Option<Complex64> {
        self.labels
            .iter()
            .position(|l| *l == label)
            .map(|i| self.roots[i])
    }

    /// Smallest pairwise distance relative to the magnitudes involved.
    pub fn min_relative_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..3 {
            for j in (i + 1)..3 {
                let (a, b) = (self.roots[i], self.roots[j]);
                let denom = a.norm() + b.norm();
                let sep = if denom == 0.0 { 0.0 } else { (a - b).norm() / denom };
                best = best.min(sep);
            }
        }
        best
    }

    fn permuted(&self, perm: [usize; 3]) -> [Complex64; 3] {
        [self.roots[perm[0]], self.roots[perm[1]], self.roots[perm[2]]]
    }
}

/// Right eigenvectors, their inverse and conditioning for one symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomp {
    pub v: Mat3,
    pub v_inv: Mat3,
    pub lambdas: SpectralTriple,
    pub cond: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YKind {
    Offset,
    Critical,
}

/// The roots of `y³−y²+2y−1` (offset) or `y³−2y²+3y−1` (critical).
///
/// Ordered `(real, Im > 0, Im < 0)`. `values` come from the polished solver,
/// `closed_form` from the radical expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YConstants {
    pub kind: YKind,
    pub values: [Complex64; 3],
    pub closed_form: [Complex64; 3],
}

impl YConstants {
    pub fn polynomial(&self) -> CubicCoeffs {
        kind_polynomial(self.kind)
    }
}

/// Pairwise-collision test used by the default propagator switch.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;

/// Real root of `y³−y²+2y−1`, frozen from a bisection on `[0.5, 0.6]`.
pub const Y1_REFERENCE: f64 = 0.569_840_290_998_053_3;

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

pub fn char_poly(r: f64, params: &ModelParams) -> CubicCoeffs {
    let r2 = r * r;
    let d = params.damping_weight(r);
    CubicCoeffs {
        c2: -(d + r2),
        c1: 2.0 * r2 * r2 + r2 * d,
        c0: -(r2 * r2 * r2),
    }
}

/// Roots sorted by real part, then by imaginary part descending.
pub fn solve_cubic(coeffs: CubicCoeffs) -> SpectralTriple {
    let CubicCoeffs { c2, c1, c0 } = coeffs;
    let scale = c2.abs().max(c1.abs().sqrt()).max(c0.abs().cbrt());
    if scale == 0.0 {
        return SpectralTriple::unlabeled([Complex64::new(0.0, 0.0); 3]);
    }
    let a2 = c2 / scale;
    let a1 = c1 / (scale * scale);
    let a0 = c0 / (scale * scale * scale);

    let p = a1 - a2 * a2 / 3.0;
    let q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    let disc = q * q / 4.0 + p * p * p / 27.0;

    let mut roots = if disc.abs() < 1e-14 {
        companion_roots(a2, a1, a0)
    } else {
        cardano(p, q, disc, a2)
    };
    for z in roots.iter_mut() {
        *z *= scale;
    }

    enforce_real_structure(&mut roots, disc);
    for z in roots.iter_mut() {
        *z = newton_polish(&coeffs, *z);
    }
    if disc > 0.0 {
        // one real root and an exact conjugate pair
        roots.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
        roots[0].im = 0.0;
        let upper = if roots[1].im >= 0.0 { roots[1] } else { roots[2] };
        let upper = c(upper.re, upper.im.abs());
        roots[1] = upper;
        roots[2] = upper.conj();
    } else {
        for z in roots.iter_mut() {
            z.im = 0.0;
        }
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(b.im.total_cmp(&a.im)));
    SpectralTriple::unlabeled(roots)
}

fn cardano(p: f64, q: f64, disc: f64, a2: f64) -> [Complex64; 3] {
    let sq = re(disc).sqrt();
    let half_q = re(-q / 2.0);
    // pick the sign that avoids cancellation in u³
    let u3 = if (half_q + sq).norm() >= (half_q - sq).norm() {
        half_q + sq
    } else {
        half_q - sq
    };
    let shift = re(-a2 / 3.0);
    if u3.norm() == 0.0 {
        return [shift; 3];
    }
    let u = u3.powf(1.0 / 3.0);
    let omega = c(-0.5, 3f64.sqrt() / 2.0);
    let mut out = [Complex64::new(0.0, 0.0); 3];
    let mut uk = u;
    for slot in out.iter_mut() {
        *slot = uk - re(p) / (uk * 3.0) + shift;
        uk *= omega;
    }
    out
}

fn companion_roots(a2: f64, a1: f64, a0: f64) -> [Complex64; 3] {
    let m = nalgebra::Matrix3::new(0.0, 0.0, -a0, 1.0, 0.0, -a1, 0.0, 1.0, -a2);
    let ev = m.complex_eigenvalues();
    [ev[0], ev[1], ev[2]]
}

fn enforce_real_structure(roots: &mut [Complex64; 3], disc: f64) {
    if disc > 0.0 {
        roots.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
        roots[0].im = 0.0;
        let (x, y) = (roots[1], roots[2]);
        let z = if x.im >= 0.0 { (x + y.conj()) * 0.5 } else { (y + x.conj()) * 0.5 };
        roots[1] = z;
        roots[2] = z.conj();
    } else {
        for z in roots.iter_mut() {
            z.im = 0.0;
        }
    }
}

fn newton_polish(coeffs: &CubicCoeffs, mut z: Complex64) -> Complex64 {
    let mut res = coeffs.eval(z).norm();
    for _ in 0..8 {
        if res == 0.0 {
            break;
        }
        let d = coeffs.derivative(z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - coeffs.eval(z) / d;
        let next_res = coeffs.eval(next).norm();
        if next_res < res {
            z = next;
            res = next_res;
        } else {
            break;
        }
    }
    z
}

/// Roots without branch labels; the cheap path used by the propagators.
pub fn raw_eigenvalues(r: f64, params: &ModelParams) -> SpectralTriple {
    solve_cubic(char_poly(r, params))
}

/// Roots labeled against the default zones `ε = 0.1`, `N = 10`.
pub fn eigenvalues(r: f64, params: &ModelParams) -> Result<SpectralTriple> {
    eigenvalues_in(r, params, &Zone::default_bounds())
}

/// Roots labeled by nearest asymptotic prediction in the small and large
/// zones and by continuation from the nearer boundary in between.
pub fn eigenvalues_in(r: f64, params: &ModelParams, bounds: &Zone) -> Result<SpectralTriple> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("frequency magnitude must be >= 0, got {r}")));
    }
    let exact = raw_eigenvalues(r, params);
    if r == 0.0 {
        return Ok(label_at_zero(exact, params));
    }
    let tag = bounds.classify(r);
    if params.is_critical() || tag != ZoneTag::Bounded {
        return Ok(label_by_prediction(exact, r, params, tag));
    }
    // continuation from the nearer zone boundary in log distance
    let (start, start_tag) = if (r / bounds.eps).ln() <= (bounds.n_hi / r).ln() {
        (bounds.eps, ZoneTag::Small)
    } else {
        (bounds.n_hi, ZoneTag::Large)
    };
    let mut current = label_by_prediction(raw_eigenvalues(start, params), start, params, start_tag);
    const STEPS: usize = 48;
    let (la, lb) = (start.ln(), r.ln());
    for k in 1..=STEPS {
        let rk = if k == STEPS {
            r
        } else {
            (la + (lb - la) * k as f64 / STEPS as f64).exp()
        };
        let next = raw_eigenvalues(rk, params);
        current = continue_labels(&current, &next);
    }
    Ok(current)
}

fn label_at_zero(exact: SpectralTriple, params: &ModelParams) -> SpectralTriple {
    let mut out = exact;
    if params.is_critical() {
        out.labels = [Branch::Critical(4), Branch::Critical(5), Branch::Critical(6)];
    } else if params.sigma() < 1.0 {
        out.labels = [Branch::Structural(1), Branch::Structural(2), Branch::Structural(3)];
    } else {
        out.labels = [Branch::Fourier(1), Branch::Fourier(2), Branch::Fourier(3)];
    }
    out
}

fn label_by_prediction(
    exact: SpectralTriple,
    r: f64,
    params: &ModelParams,
    tag: ZoneTag,
) -> SpectralTriple {
    let Some((pred, labels, _)) = branch_predictions(r, params, tag) else {
        return exact;
    };
    // roots[i] is assigned to prediction perm[i]
    let mut best = (f64::INFINITY, PERMUTATIONS[0]);
    for perm in PERMUTATIONS {
        let cost: f64 = (0..3)
            .map(|i| relative_distance(exact.roots[i], pred[perm[i]]))
            .sum();
        if cost < best.0 {
            best = (cost, perm);
        }
    }
    let mut out = exact;
    for i in 0..3 {
        out.labels[i] = labels[best.1[i]];
    }
    out
}

fn relative_distance(a: Complex64, b: Complex64) -> f64 {
    let denom = a.norm().max(b.norm()).max(f64::MIN_POSITIVE);
    (a - b).norm() / denom
}

fn continue_labels(prev: &SpectralTriple, next: &SpectralTriple) -> SpectralTriple {
    let mut best = (f64::INFINITY, PERMUTATIONS[0]);
    for perm in PERMUTATIONS {
        let moved = next.permuted(perm);
        let cost: f64 = (0..3).map(|i| relative_distance(moved[i], prev.roots[i])).sum();
        if cost < best.0 {
            best = (cost, perm);
        }
    }
    let mut out = *next;
    for i in 0..3 {
        // next.roots[perm[i]] continues prev.roots[i]
        out.labels[best.1[i]] = prev.labels[i];
    }
    out
}

/// Eigen-decomposition of `A(r;σ)` with the default collision tolerance.
pub fn eigen_decomp(r: f64, params: &ModelParams) -> EigenDecomp {
    eigen_decomp_with_tol(r, params, DEFAULT_DEGENERACY_TOL)
}

pub fn eigen_decomp_with_tol(r: f64, params: &ModelParams, tol: f64) -> EigenDecomp {
    let a = *symbol_matrix_unchecked(r, params).matrix();
    decompose(&a, raw_eigenvalues(r, params), tol)
}

/// Eigenvectors of `a` for the given roots; the first row triple of
/// `a − λI` with the largest cross product determines each column.
pub fn decompose(a: &Mat3, lambdas: SpectralTriple, tol: f64) -> EigenDecomp {
    let mut v = Mat3::zeros();
    for (k, lam) in lambdas.roots.iter().enumerate() {
        let col = null_vector(a, *lam);
        v.set_column(k, &col);
    }
    let collided = (0..3).any(|i| {
        ((i + 1)..3).any(|j| {
            let (x, y) = (lambdas.roots[i], lambdas.roots[j]);
            (x - y).norm() <= tol * (x.norm() + y.norm())
        })
    });
    match inverse(&v) {
        Some(v_inv) if !collided => EigenDecomp {
            cond: cond1(&v),
            v,
            v_inv,
            lambdas,
            degenerate: false,
        },
        inv => EigenDecomp {
            cond: inv.map_or(f64::INFINITY, |vi| crate::linalg::norm1(&v) * crate::linalg::norm1(&vi)),
            v_inv: inv.unwrap_or_else(Mat3::zeros),
            v,
            lambdas,
            degenerate: true,
        },
    }
}

fn null_vector(a: &Mat3, lam: Complex64) -> Vec3 {
    let b = a - Mat3::identity() * lam;
    let rows: [Vec3; 3] = [
        b.row(0).transpose(),
        b.row(1).transpose(),
        b.row(2).transpose(),
    ];
    let candidates = [
        cross(&rows[0], &rows[1]),
        cross(&rows[0], &rows[2]),
        cross(&rows[1], &rows[2]),
    ];
    let mut best = candidates[0];
    let mut best_norm = vec_norm(&best);
    for cand in &candidates[1..] {
        let n = vec_norm(cand);
        if n > best_norm {
            best = *cand;
            best_norm = n;
        }
    }
    if best_norm == 0.0 {
        // b has rank ≤ 1: any vector orthogonal (bilinearly) to its nonzero row
        let row = rows
            .iter()
            .copied()
            .max_by(|x, y| vec_norm(x).total_cmp(&vec_norm(y)))
            .unwrap_or_else(Vec3::zeros);
        if vec_norm(&row) == 0.0 {
            return Vec3::new(re(1.0), re(0.0), re(0.0));
        }
        let e = (0..3)
            .map(|i| {
                let mut e = Vec3::zeros();
                e[i] = re(1.0);
                e
            })
            .min_by(|x, y| row.dot(x).norm().total_cmp(&row.dot(y).norm()))
            .unwrap();
        best = cross(&row, &e);
        best_norm = vec_norm(&best);
    }
    best / re(best_norm)
}

fn kind_polynomial(kind: YKind) -> CubicCoeffs {
    match kind {
        YKind::Offset => CubicCoeffs::new(-1.0, 2.0, -1.0),
        YKind::Critical => CubicCoeffs::new(-2.0, 3.0, -1.0),
    }
}

fn ordered_y(t: SpectralTriple) -> [Complex64; 3] {
    let mut real = t.roots[0];
    let mut upper = t.roots[1];
    for z in t.roots {
        if z.im == 0.0 {
            real = z;
        } else if z.im > 0.0 {
            upper = z;
        }
    }
    [real, upper, upper.conj()]
}

fn closed_form(kind: YKind) -> [Complex64; 3] {
    let s69 = 69f64.sqrt();
    let s3 = 3f64.sqrt();
    match kind {
        YKind::Offset => {
            let a = (0.5 * (3.0 * s69 + 11.0)).cbrt();
            let b = (0.5 * (3.0 * s69 - 11.0)).cbrt();
            let z1 = a - b;
            let z2 = a + b;
            let y1 = (1.0 + z1) / 3.0;
            let re_part = (1.0 - z1 / 2.0) / 3.0;
            let im_part = s3 / 2.0 * z2 / 3.0;
            [re(y1), c(re_part, im_part), c(re_part, -im_part)]
        }
        YKind::Critical => {
            let z3 = re((-5.5 + 1.5 * s69).cbrt() / 3.0);
            let z4 = z3 * c(-0.5, s3 / 2.0);
            let z5 = z3 * c(-0.5, -s3 / 2.0);
            let y = |z: Complex64| z - re(5.0) / (z * 9.0) + re(2.0 / 3.0);
            [y(z3), y(z4), y(z5)]
        }
    }
}

pub fn y_constants(kind: YKind) -> YConstants {
    YConstants {
        kind,
        values: ordered_y(solve_cubic(kind_polynomial(kind))),
        closed_form: closed_form(kind),
    }
}

/// Minimum over a log-spaced grid in `[eps, n_hi]` of `min_j Re λ_j`.
///
/// A single sample is accepted only for the degenerate interval `eps = n_hi`.
pub fn spectral_gap_scan(params: &ModelParams, eps: f64, n_hi: f64, samples: usize) -> Result<f64> {
    let grid = gap_grid(eps, n_hi, samples)?;
    Ok(gap_profile(params, &grid)
        .into_iter()
        .map(|t| t.min_re())
        .fold(f64::INFINITY, f64::min))
}

pub(crate) fn gap_grid(eps: f64, n_hi: f64, samples: usize) -> Result<Vec<f64>> {
    if !(eps > 0.0) || !n_hi.is_finite() {
        return Err(Error::invalid("scan bounds must be positive and finite"));
    }
    if samples == 1 && eps == n_hi {
        return Ok(vec![eps]);
    }
    if samples < 2 {
        return Err(Error::invalid("a spectral-gap scan needs at least 2 samples"));
    }
    if !(eps < n_hi) {
        return Err(Error::invalid(format!("scan requires eps < N, got {eps} >= {n_hi}")));
    }
    Ok(log_space(eps, n_hi, samples))
}

/// Unlabeled roots along a grid, computed in parallel, returned in grid order.
pub fn gap_profile(params: &ModelParams, grid: &[f64]) -> Vec<SpectralTriple> {
    grid.par_iter().map(|&r| raw_eigenvalues(r, params)).collect()
}

/// Log-log slope of the spectral abscissa `min_j Re λ_j(r)` over `[r_lo, r_hi]`.
pub fn smoothing_exponent(params: &ModelParams, r_lo: f64, r_hi: f64) -> Result<f64> {
    if !(r_lo > 0.0 && r_lo < r_hi && r_hi.is_finite()) {
        return Err(Error::invalid(format!("need 0 < r_lo < r_hi, got [{r_lo}, {r_hi}]")));
    }
    let grid = log_space(r_lo, r_hi, 64);
    let abscissa: Vec<f64> = gap_profile(params, &grid).iter().map(|t| t.min_re()).collect();
    if let Some((index, &value)) = abscissa.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::NonPositive { index, value });
    }
    loglog_fit(&grid, &abscissa)
        .map(|f| f.slope)
        .ok_or_else(|| Error::invalid("smoothing fit failed"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use proptest::prelude::*;

    fn params(sigma: f64) -> ModelParams {
        ModelParams::new(sigma, 1).unwrap()
    }

    fn contains(set: &[Complex64; 3], z: Complex64, tol: f64) -> bool {
        set.iter().any(|w| (w - z).norm() <= tol)
    }

    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(1.0, &params(1.0)), CubicCoeffs::new(-2.0, 3.0, -1.0));
        let z = char_poly(0.0, &params(0.5));
        assert_eq!((z.c2, z.c1, z.c0), (0.0, 0.0, 0.0));
        assert_eq!(char_poly(2.0, &params(0.0)), CubicCoeffs::new(-5.0, 36.0, -64.0));
    }

    #[test]
    fn solve_cubic_examples() {
        let t = solve_cubic(CubicCoeffs::new(-6.0, 11.0, -6.0));
        for (z, want) in t.roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((z - re(want)).norm() < 1e-13);
        }
        let t = solve_cubic(CubicCoeffs::new(0.0, 0.0, 0.0));
        assert!(t.roots.iter().all(|z| z.norm() == 0.0));
        let crit = y_constants(YKind::Critical);
        let t = solve_cubic(CubicCoeffs::new(-2.0, 3.0, -1.0));
        for y in crit.closed_form {
            assert!(contains(&t.roots, y, 1e-12));
        }
    }

    #[test]
    fn solve_cubic_triple_and_double_roots() {
        let t = solve_cubic(CubicCoeffs::new(-3.0, 3.0, -1.0));
        assert!(t.roots.iter().all(|z| (z - re(1.0)).norm() < 1e-5));
        let t = solve_cubic(CubicCoeffs::from_roots(re(2.0), re(2.0), re(-1.0)));
        assert!(contains(&t.roots, re(-1.0), 1e-12));
        assert!(contains(&t.roots, re(2.0), 1e-7));
    }

    #[test]
    fn eigenvalue_examples() {
        let crit = y_constants(YKind::Critical);
        let t = eigenvalues(1.0, &params(1.0)).unwrap();
        for y in crit.values {
            assert!(contains(&t.roots, y, 1e-12));
        }
        assert_eq!(t.by_label(Branch::Critical(4)).unwrap(), crit.values[0]);

        let t = eigenvalues(0.0, &params(0.7)).unwrap();
        assert!(t.roots.iter().all(|z| z.norm() == 0.0));

        let t = eigenvalues(0.0, &params(0.0)).unwrap();
        let want = [re(0.0), re(0.0), re(1.0)];
        for (z, w) in t.roots.iter().zip(want) {
            assert!((z - w).norm() < 1e-15);
        }
        assert!(eigenvalues(-1.0, &params(0.0)).is_err());
    }

    #[test]
    fn y_constants_agree_with_closed_forms() {
        for kind in [YKind::Offset, YKind::Critical] {
            let y = y_constants(kind);
            let poly = y.polynomial();
            for (a, b) in y.values.iter().zip(y.closed_form) {
                assert!((a - b).norm() <= 1e-10, "{kind:?}: {a} vs {b}");
                assert!(poly.eval(*a).norm() <= 1e-12);
                assert!(a.re > 0.0);
            }
            assert_eq!(y.values[0].im, 0.0);
            assert!(y.values[1].im > 0.0);
            assert_eq!(y.values[1].im, -y.values[2].im);
        }
    }

    #[test]
    fn offset_real_root_matches_bisection() {
        let f = |y: f64| y * y * y - y * y + 2.0 * y - 1.0;
        assert!(f(0.5) < 0.0 && f(0.6) > 0.0);
        let root = bisect(f, 0.5, 0.6);
        assert!((root - Y1_REFERENCE).abs() < 1e-14);
        assert!((y_constants(YKind::Offset).values[0].re - Y1_REFERENCE).abs() < 1e-14);
        let g = |y: f64| y * y * y - 2.0 * y * y + 3.0 * y - 1.0;
        let root4 = bisect(g, 0.4, 0.5);
        assert!((y_constants(YKind::Critical).values[0].re - root4).abs() < 1e-14);
    }

    #[test]
    fn gap_scan_examples() {
        assert!(spectral_gap_scan(&params(0.0), 0.1, 10.0, 200).unwrap() > 0.0);
        assert!(spectral_gap_scan(&params(2.0), 0.1, 10.0, 200).unwrap() > 0.0);
        let single = spectral_gap_scan(&params(1.0), 1.0, 1.0, 1).unwrap();
        let crit = y_constants(YKind::Critical);
        let want = crit.values.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
        assert!((single - want).abs() < 1e-14);
        assert!(spectral_gap_scan(&params(0.0), 0.1, 10.0, 1).is_err());
        assert!(spectral_gap_scan(&params(0.0), 10.0, 0.1, 20).is_err());
    }

    #[test]
    fn smoothing_examples() {
        let s = smoothing_exponent(&params(0.5), 10.0, 1000.0).unwrap();
        assert!((s - 2.0).abs() < 0.1, "{s}");
        let s = smoothing_exponent(&params(1.5), 10.0, 1000.0).unwrap();
        assert!((s - 1.0).abs() < 0.1, "{s}");
        let s = smoothing_exponent(&params(2.0), 10.0, 1000.0).unwrap();
        assert!(s.abs() < 0.1, "{s}");
        assert!(smoothing_exponent(&params(2.0), 10.0, 1.0).is_err());
    }

    #[test]
    fn decomposition_diagonalizes() {
        for &(r, sigma) in &[(0.3, 0.0), (1.0, 1.0), (2.5, 1.5), (7.0, 0.5), (0.05, 2.0)] {
            let p = params(sigma);
            let d = eigen_decomp(r, &p);
            assert!(!d.degenerate);
            let a = *symbol_matrix_unchecked(r, &p).matrix();
            let lam = crate::linalg::diag(d.lambdas.roots);
            let resid = max_abs(&(a * d.v - d.v * lam));
            assert!(resid <= 1e-9 * crate::linalg::norm1(&a), "r={r} σ={sigma}: {resid}");
            assert!(max_abs(&(d.v * d.v_inv - Mat3::identity())) <= 1e-9);
        }
    }

    #[test]
    fn zero_symbol_is_degenerate() {
        let d = eigen_decomp(0.0, &params(0.5));
        assert!(d.degenerate);
    }

    #[test]
    fn labels_are_continuous_along_sweep() {
        for sigma in [0.0, 0.5, 1.5, 2.0] {
            let p = params(sigma);
            let grid = log_space(0.02, 50.0, 300);
            let triples: Vec<SpectralTriple> =
                grid.iter().map(|&r| eigenvalues(r, &p).unwrap()).collect();
            let labels = triples[0].labels;
            for w in triples.windows(3) {
                for l in labels {
                    let (Some(a), Some(b), Some(z)) =
                        (w[0].by_label(l), w[1].by_label(l), w[2].by_label(l))
                    else {
                        continue;
                    };
                    // jump bounded by local variation plus the magnitude change
                    let jump = (b - a).norm();
                    let scale = (z - b).norm().max((b - a).norm()) + 0.1 * b.norm();
                    assert!(jump <= 3.0 * scale + 1e-12, "σ={sigma} {l}");
                }
            }
        }
    }

    fn root_triple() -> impl Strategy<Value = [Complex64; 3]> {
        prop_oneof![
            (-10.0..10.0f64, -10.0..10.0f64, -10.0..10.0f64)
                .prop_filter("separated", |(a, b, z)| {
                    (a - b).abs() > 1e-2 && (a - z).abs() > 1e-2 && (b - z).abs() > 1e-2
                })
                .prop_map(|(a, b, z)| [re(a), re(b), re(z)]),
            (-10.0..10.0f64, -10.0..10.0f64, 0.01..10.0f64)
                .prop_map(|(a, x, y)| [re(a), c(x, y), c(x, -y)]),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(512))]

        #[test]
        fn recovers_known_roots(rs in root_triple()) {
            let t = solve_cubic(CubicCoeffs::from_roots(rs[0], rs[1], rs[2]));
            let scale = 1.0 + rs.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for z in rs {
                prop_assert!(contains(&t.roots, z, 1e-10 * scale), "{z} not in {:?}", t.roots);
            }
        }

        #[test]
        fn vieta_holds(r in 0.01..100.0f64, sigma in 0.0..=2.0f64) {
            let p = params(sigma);
            let t = eigenvalues(r, &p).unwrap();
            let d = p.damping_weight(r);
            let trace = d + r * r;
            let pair = 2.0 * r.powi(4) + r * r * d;
            let det = r.powi(6);
            prop_assert!((t.sum() - re(trace)).norm() <= 1e-10 * trace);
            prop_assert!((t.pair_sum() - re(pair)).norm() <= 1e-10 * pair);
            prop_assert!((t.product() - re(det)).norm() <= 1e-10 * det);
            prop_assert!(t.min_re() > 0.0);
        }

        #[test]
        fn critical_scaling(r in 1e-3..1e3f64) {
            let y = y_constants(YKind::Critical);
            let t = eigenvalues(r, &params(1.0)).unwrap();
            for yj in y.values {
                let want = yj * (r * r);
                prop_assert!(contains(&t.roots, want, 1e-10 * want.norm()));
            }
        }
    }
}
