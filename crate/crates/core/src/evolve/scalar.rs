//! The scalar third-order route for `û`, an independent check on the
//! matrix propagator.
//!
//! Eliminating `θ̂` gives `û''' + (r^{2σ}+r²)û'' + (2r⁴+r^{2+2σ})û' + r⁶û = 0`,
//! so `û(t) = Σ_j c_j e^{λ_j t}` over the roots of
//! `λ³ + (r^{2σ}+r²)λ² + (2r⁴+r^{2+2σ})λ + r⁶`.

use crate::error::{Error, Result};
use crate::linalg::{c, re, Complex64};
use crate::model::ModelParams;
use crate::spectrum::DEFAULT_DEGENERACY_TOL;

/// Roots of the scalar cubic from Cardano's formula written in `a = r^{2σ}`
/// and `β = r²`, each refined by Newton's method on the same cubic.
pub fn scalar_roots(r: f64, params: &ModelParams) -> [Complex64; 3] {
    let a = params.damping_weight(r);
    let b = r * r;
    let a2 = a + b;
    let a1 = 2.0 * b * b + a * b;
    let a0 = b * b * b;
    // λ = μ − (a+β)/3 gives μ³ + pμ + q = 0
    let p = (5.0 * b * b + a * b - a * a) / 3.0;
    let q = (2.0 * a * a * a - 3.0 * a * a * b - 21.0 * a * b * b + 11.0 * b * b * b) / 27.0;
    let disc = re(q * q / 4.0 + p * p * p / 27.0).sqrt();
    let plus = re(-q / 2.0) + disc;
    let minus = re(-q / 2.0) - disc;
    let u3 = if plus.norm() >= minus.norm() { plus } else { minus };
    let shift = re(-a2 / 3.0);
    let omega = c(-0.5, 3f64.sqrt() / 2.0);
    let mut roots = [shift; 3];
    if u3.norm() > 0.0 {
        let mut u = u3.powf(1.0 / 3.0);
        for slot in roots.iter_mut() {
            *slot = u - re(p) / (u * 3.0) + shift;
            u *= omega;
        }
    }
    let f = |x: Complex64| ((x + a2) * x + a1) * x + a0;
    let df = |x: Complex64| (x * 3.0 + 2.0 * a2) * x + a1;
    for z in roots.iter_mut() {
        for _ in 0..6 {
            let d = df(*z);
            if d.norm() == 0.0 {
                break;
            }
            let next = *z - f(*z) / d;
            if f(next).norm() < f(*z).norm() {
                *z = next;
            } else {
                break;
            }
        }
    }
    roots
}

/// `û(t, ξ)` from `(û₀, û₁, θ̂₀)` via the Lagrange coefficients `c_j`.
pub fn scalar_route(
    u0: Complex64,
    u1: Complex64,
    theta0: Complex64,
    r: f64,
    params: &ModelParams,
    t: f64,
) -> Result<Complex64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("scalar route needs r > 0, got {r}")));
    }
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("time must be >= 0, got {t}")));
    }
    let l = scalar_roots(r, params);
    for i in 0..3 {
        for j in (i + 1)..3 {
            if (l[i] - l[j]).norm() <= DEFAULT_DEGENERACY_TOL * (l[i].norm() + l[j].norm()) {
                return Err(Error::Degenerate(
                    "degenerate scalar route; use matrix propagator".into(),
                ));
            }
        }
    }
    let r2 = r * r;
    // û''(0) from the plate equation
    let u2 = -u0 * (r2 * r2) - u1 * params.damping_weight(r) + theta0 * r2;
    let mut out = Complex64::new(0.0, 0.0);
    for j in 0..3 {
        let (k, m) = ((j + 1) % 3, (j + 2) % 3);
        let cj = (l[k] * l[m] * u0 - (l[k] + l[m]) * u1 + u2) / ((l[j] - l[k]) * (l[j] - l[m]));
        out += cj * (l[j] * t).exp();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::raw_eigenvalues;

    #[test]
    fn roots_are_negated_spectrum() {
        for &(r, s) in &[(1.0, 1.0), (0.3, 0.0), (4.0, 2.0), (2.0, 0.5)] {
            let p = ModelParams::new(s, 1).unwrap();
            let ours = scalar_roots(r, &p);
            let spec = raw_eigenvalues(r, &p);
            for z in spec.roots {
                assert!(ours.iter().any(|w| (w + z).norm() < 1e-10 * (1.0 + z.norm())));
            }
        }
    }

    #[test]
    fn depressed_coefficient_at_unit_critical_point() {
        // at σ = 1, r = 1 the roots are −y₄, −y₅, −y₆
        let p = ModelParams::new(1.0, 1).unwrap();
        let l = scalar_roots(1.0, &p);
        let sum: Complex64 = l.iter().sum();
        assert!((sum + re(2.0)).norm() < 1e-14);
        let prod: Complex64 = l.iter().product();
        assert!((prod + re(1.0)).norm() < 1e-14);
    }

    #[test]
    fn initial_value_and_zero_data() {
        let p = ModelParams::new(0.5, 1).unwrap();
        let u0 = c(0.7, -0.2);
        let got = scalar_route(u0, c(1.0, 0.0), c(0.0, 3.0), 1.3, &p, 0.0).unwrap();
        assert!((got - u0).norm() < 1e-13);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(scalar_route(zero, zero, zero, 1.3, &p, 2.0).unwrap(), zero);
        assert!(scalar_route(u0, zero, zero, 0.0, &p, 1.0).is_err());
    }
}
