//! The periodic wave family in the `(g, kappa, mu)` parametrization:
//! admissibility, cubic roots, derived scalars and closed-form profile
//! evaluation.
//!
//! Canonical coordinates are the elliptic scale `g > 0`, the modulus
//! `kappa in (0, 1)` and `mu = 16 (omega - c^2/4)`. Wave speed `c`,
//! frequency `omega`, the integration constant `a` and the half-period
//! `T = 2 g K(kappa)` are derived. The squared profile oscillates between
//! the two positive roots `phi2 <= phi^2 <= phi3` of the cubic
//! `R(z) = z^3 - 4 c z^2 - mu z` at level `a`, with `phi1 < 0` the third
//! root. Only the positive branch `phi > 0` is constructed; `-phi` solves
//! the same profile equation with identical stability quantities.

use crate::elliptic::{self, Modulus};
use crate::{Error, Result};
use serde::Serialize;

/// A validated point of the admissible parameter region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveParams {
    g: f64,
    kappa: f64,
    mu: f64,
}

/// Which admissibility inequality a rejected parameter point violates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    /// `g` must be strictly positive (and finite).
    GNotPositive { g: f64 },
    /// `g` must stay below `sqrt(8/mu)` (`mu > 0`) resp. `sqrt(-4/mu)`
    /// (`mu < 0`).
    GTooLarge { g: f64, limit: f64 },
    /// `kappa` must lie strictly inside `(0, 1)`.
    KappaOutOfRange { kappa: f64 },
    /// `kappa^2` must stay below `(4 + mu g^2)/8`.
    KappaSqAboveLowerCap { kappa_sq: f64, limit: f64 },
    /// `kappa^2` must stay below `(8 - mu g^2)/4`.
    KappaSqAboveUpperCap { kappa_sq: f64, limit: f64 },
    /// Non-finite input.
    NotFinite,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            Violation::GNotPositive { g } => write!(f, "g = {g} violates g > 0"),
            Violation::GTooLarge { g, limit } => {
                write!(f, "g = {g} violates g < sqrt(max(8/mu, -4/mu)) = {limit}")
            }
            Violation::KappaOutOfRange { kappa } => {
                write!(f, "kappa = {kappa} violates 0 < kappa < 1")
            }
            Violation::KappaSqAboveLowerCap { kappa_sq, limit } => {
                write!(f, "kappa^2 = {kappa_sq} violates kappa^2 < (4 + mu g^2)/8 = {limit}")
            }
            Violation::KappaSqAboveUpperCap { kappa_sq, limit } => {
                write!(f, "kappa^2 = {kappa_sq} violates kappa^2 < (8 - mu g^2)/4 = {limit}")
            }
            Violation::NotFinite => write!(f, "parameters must be finite"),
        }
    }
}

/// Verdict of [`validate`]: either admissible with a distance-to-boundary
/// diagnostic, or rejected with the violated inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Admissibility {
    Admissible { boundary_distance: f64 },
    Rejected(Violation),
}

impl Admissibility {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Admissibility::Admissible { .. })
    }
}

/// Upper bound for `g` at the given `mu` (infinite for `mu = 0`).
pub fn g_limit(mu: f64) -> f64 {
    if mu > 0.0 {
        (8.0 / mu).sqrt()
    } else if mu < 0.0 {
        (-4.0 / mu).sqrt()
    } else {
        f64::INFINITY
    }
}

/// The two caps on `kappa^2` at the given `(g, mu)`.
///
/// The first, `(4 + mu g^2)/8`, is the binding one for `mu <= 0`; both can
/// bind for `mu > 0`.
pub fn kappa_sq_caps(g: f64, mu: f64) -> (f64, f64) {
    let gg = g * g;
    ((4.0 + mu * gg) / 8.0, (8.0 - mu * gg) / 4.0)
}

/// Checks the strict admissibility inequalities for `(g, kappa, mu)`.
pub fn validate(g: f64, kappa: f64, mu: f64) -> Admissibility {
    if !(g.is_finite() && kappa.is_finite() && mu.is_finite()) {
        return Admissibility::Rejected(Violation::NotFinite);
    }
    if g <= 0.0 {
        return Admissibility::Rejected(Violation::GNotPositive { g });
    }
    let g_max = g_limit(mu);
    if g >= g_max {
        return Admissibility::Rejected(Violation::GTooLarge { g, limit: g_max });
    }
    if kappa <= 0.0 || kappa >= 1.0 {
        return Admissibility::Rejected(Violation::KappaOutOfRange { kappa });
    }
    let kappa_sq = kappa * kappa;
    let (cap_lo, cap_hi) = kappa_sq_caps(g, mu);
    if kappa_sq >= cap_lo {
        return Admissibility::Rejected(Violation::KappaSqAboveLowerCap { kappa_sq, limit: cap_lo });
    }
    if kappa_sq >= cap_hi {
        return Admissibility::Rejected(Violation::KappaSqAboveUpperCap { kappa_sq, limit: cap_hi });
    }
    let mut dist = g
        .min(kappa)
        .min(cap_lo - kappa_sq)
        .min(cap_hi - kappa_sq)
        .min(1.0 - kappa);
    if g_max.is_finite() {
        dist = dist.min(g_max - g);
    }
    Admissibility::Admissible { boundary_distance: dist }
}

impl WaveParams {
    /// Validates and wraps a parameter point.
    pub fn new(g: f64, kappa: f64, mu: f64) -> Result<Self> {
        match validate(g, kappa, mu) {
            Admissibility::Admissible { .. } => Ok(Self { g, kappa, mu }),
            Admissibility::Rejected(v) => Err(Error::Inadmissible(v)),
        }
    }

    /// The quintic-NLS point with `c = 0` at the given `(g, kappa)`.
    pub fn quintic(g: f64, kappa: f64) -> Result<Self> {
        Self::new(g, kappa, quintic_mu(g, kappa))
    }

    #[inline]
    pub fn g(&self) -> f64 {
        self.g
    }

    #[inline]
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    #[inline]
    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn modulus(&self) -> Modulus {
        Modulus::new(self.kappa).expect("validated kappa")
    }

    /// Distance-to-boundary diagnostic (mixed units; used to flag
    /// ill-conditioned near-boundary points in scans).
    pub fn boundary_distance(&self) -> f64 {
        match validate(self.g, self.kappa, self.mu) {
            Admissibility::Admissible { boundary_distance } => boundary_distance,
            Admissibility::Rejected(_) => 0.0,
        }
    }
}

/// The `mu` making the wave speed vanish at `(g, kappa)`:
/// `mu = 4 sqrt(1 - kappa^2 + kappa^4) / g^2`. The resulting point is always
/// admissible.
pub fn quintic_mu(g: f64, kappa: f64) -> f64 {
    let k2 = kappa * kappa;
    4.0 * (1.0 - k2 + k2 * k2).sqrt() / (g * g)
}

/// Roots `phi1 < 0 < phi2 < phi3` of the cubic `R(z) = a`, together with the
/// positive pairwise products `big_a = -phi1 phi2`, `big_b = phi2 phi3`,
/// `big_c = -phi1 phi3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Roots {
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
    pub big_a: f64,
    pub big_b: f64,
    pub big_c: f64,
}

/// The positive products `(A, B, C)` as explicit rationals in `(g, kappa, mu)`.
pub(crate) fn root_products(g: f64, kappa: f64, mu: f64) -> (f64, f64, f64) {
    let gg = g * g;
    let k2 = kappa * kappa;
    let a = (4.0 / gg - 8.0 * k2 / gg + mu) / 3.0;
    let b = (8.0 / gg - 4.0 * k2 / gg - mu) / 3.0;
    let c = (4.0 / gg + 4.0 * k2 / gg + mu) / 3.0;
    (a, b, c)
}

/// Extracts the cubic roots from a validated parameter point.
pub fn compute_roots(p: &WaveParams) -> Result<Roots> {
    let (big_a, big_b, big_c) = root_products(p.g, p.kappa, p.mu);
    for (name, v) in [("A", big_a), ("B", big_b), ("C", big_c)] {
        if v <= 0.0 {
            return Err(Error::NonPositiveRootProduct { which: name, value: v });
        }
    }
    Ok(Roots {
        phi1: -(big_a * big_c / big_b).sqrt(),
        phi2: (big_a * big_b / big_c).sqrt(),
        phi3: (big_b * big_c / big_a).sqrt(),
        big_a,
        big_b,
        big_c,
    })
}

/// Scalars derived from a parameter point: wave speed, frequency, the
/// integration constant and the half-period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedScalars {
    /// Wave speed `c = (AB + BC - AC) / (4 sqrt(ABC))`.
    pub c: f64,
    /// `omega = mu/16 + c^2/4`.
    pub omega: f64,
    /// Integration constant `a = phi1 phi2 phi3 < 0`.
    pub a: f64,
    /// Half-period `T = 2 g K(kappa)`; the profile is `2T`-periodic.
    pub half_period: f64,
}

pub fn compute_scalars(p: &WaveParams, r: &Roots) -> DerivedScalars {
    let (big_a, big_b, big_c) = (r.big_a, r.big_b, r.big_c);
    let c = (big_a * big_b + big_b * big_c - big_a * big_c)
        / (4.0 * (big_a * big_b * big_c).sqrt());
    DerivedScalars {
        c,
        omega: p.mu / 16.0 + 0.25 * c * c,
        a: r.phi1 * r.phi2 * r.phi3,
        half_period: 2.0 * p.g * elliptic::complete_k(p.modulus()),
    }
}

/// An evaluable wave profile: `phi^2`, `phi` and `phi'` at arbitrary `xi`,
/// by `2T`-periodic extension.
///
/// Immutable after construction; evaluation is pure and safe to share across
/// workers.
#[derive(Debug, Clone)]
pub struct WaveProfile {
    params: WaveParams,
    roots: Roots,
    scalars: DerivedScalars,
    modulus: Modulus,
    // phi^2 = (num0 + num2 s^2) / (den0 + den2 s^2), s = sn(xi/2g, kappa)
    num0: f64,
    num2: f64,
    den0: f64,
    den2: f64,
    // numerator factor of d(phi^2)/dxi: (phi3-phi2)(phi2-phi1)(phi1-phi3)
    slope: f64,
}

impl WaveProfile {
    pub fn new(params: WaveParams) -> Result<Self> {
        let roots = compute_roots(&params)?;
        let scalars = compute_scalars(&params, &roots);
        let (p1, p2, p3) = (roots.phi1, roots.phi2, roots.phi3);
        Ok(Self {
            params,
            roots,
            scalars,
            modulus: params.modulus(),
            num0: p3 * (p2 - p1),
            num2: p1 * (p3 - p2),
            den0: p2 - p1,
            den2: p3 - p2,
            slope: (p3 - p2) * (p2 - p1) * (p1 - p3),
        })
    }

    pub fn params(&self) -> &WaveParams {
        &self.params
    }

    pub fn roots(&self) -> &Roots {
        &self.roots
    }

    pub fn scalars(&self) -> &DerivedScalars {
        &self.scalars
    }

    /// Squared profile `phi^2(xi) in [phi2, phi3]`.
    pub fn phi_sq(&self, xi: f64) -> f64 {
        let s = elliptic::jacobi_sn(xi / (2.0 * self.params.g), self.modulus);
        let s2 = s * s;
        (self.num0 + self.num2 * s2) / (self.den0 + self.den2 * s2)
    }

    /// Derivative `d(phi^2)/dxi`, from the sn-cn-dn chain rule.
    pub fn dphi_sq(&self, xi: f64) -> f64 {
        let (sn, cn, dn) = elliptic::jacobi_sn_cn_dn(xi / (2.0 * self.params.g), self.modulus);
        let den = self.den0 + self.den2 * sn * sn;
        self.slope * sn * cn * dn / (self.params.g * den * den)
    }

    /// Profile `phi(xi) = sqrt(phi^2(xi)) > 0`.
    pub fn phi(&self, xi: f64) -> f64 {
        self.phi_sq(xi).sqrt()
    }

    /// Derivative `phi'(xi) = (phi^2)'(xi) / (2 phi(xi))`; `phi2 > 0` keeps
    /// the denominator away from zero.
    pub fn dphi(&self, xi: f64) -> f64 {
        self.dphi_sq(xi) / (2.0 * self.phi(xi))
    }

    /// The winding scalar `W = c T - (3/4) ∫_{-T}^{T} phi^2` together with
    /// its distance to the lattice `2π Z`. `W` on the lattice makes the
    /// gauged wave a genuine `2T`-periodic solution of the derivative NLS.
    pub fn phase_winding(&self) -> Winding {
        let w = self.scalars.c * self.scalars.half_period - 0.75 * crate::closedform::mass(self);
        let two_pi = std::f64::consts::TAU;
        let nearest = (w / two_pi).round();
        Winding {
            value: w,
            distance: (w - two_pi * nearest).abs(),
            nearest_branch: nearest as i64,
        }
    }
}

/// Result of [`WaveProfile::phase_winding`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Winding {
    /// `W = c T - (3/4) ||phi||^2`.
    pub value: f64,
    /// Distance of `W` to the nearest multiple of `2π`.
    pub distance: f64,
    /// The branch index `W / 2π` rounds to.
    pub nearest_branch: i64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn params(g: f64, kappa: f64, mu: f64) -> WaveParams {
        WaveParams::new(g, kappa, mu).unwrap()
    }

    fn sample_admissible(rng: &mut ChaCha8Rng) -> WaveParams {
        crate::verify::sample_admissible(rng, 0.05)
    }

    // ------------------------------------------------------------------
    // validate
    // ------------------------------------------------------------------

    #[test]
    fn validate_worked_examples() {
        // kappa^2 = 0.25 < min(5/8, 7/4), g^2 = 1 < 8.
        assert!(validate(1.0, 0.5, 1.0).is_admissible());

        match validate(3.0, 0.5, 1.0) {
            Admissibility::Rejected(Violation::GTooLarge { limit, .. }) => {
                assert!((limit - 8.0f64.sqrt()).abs() < 1e-15);
            }
            other => panic!("expected g violation, got {other:?}"),
        }

        match validate(1.0, 0.9, -1.0) {
            Admissibility::Rejected(Violation::KappaSqAboveLowerCap { kappa_sq, limit }) => {
                assert!((kappa_sq - 0.81).abs() < 1e-15);
                assert!((limit - 0.375).abs() < 1e-15);
            }
            other => panic!("expected kappa^2 violation, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_boundary_points() {
        assert!(!validate(8.0f64.sqrt(), 0.5, 1.0).is_admissible());
        assert!(!validate(1.0, 0.0, 1.0).is_admissible());
        assert!(!validate(0.0, 0.5, 1.0).is_admissible());
        // kappa exactly at the cap (g = 2, mu = 1): both caps equal 1.
        assert!(!validate(2.0, 1.0, 1.0).is_admissible());
    }

    #[test]
    fn validate_mu_zero_has_unbounded_g() {
        assert!(validate(50.0, 0.5, 0.0).is_admissible());
        assert!(!validate(50.0, 0.75, 0.0).is_admissible()); // kappa^2 >= 1/2
    }

    // ------------------------------------------------------------------
    // compute_roots
    // ------------------------------------------------------------------

    #[test]
    fn roots_degenerate_limit() {
        // kappa -> 0+ at (g, mu) = (1, 0): A = 4/3, B = 8/3, C = 4/3,
        // phi1 = -sqrt(2/3), phi2 = phi3 = sqrt(8/3).
        let p = params(1.0, 1e-8, 0.0);
        let r = compute_roots(&p).unwrap();
        assert!((r.big_a - 4.0 / 3.0).abs() < 1e-12);
        assert!((r.big_b - 8.0 / 3.0).abs() < 1e-12);
        assert!((r.big_c - 4.0 / 3.0).abs() < 1e-12);
        assert!((r.phi1 - -0.816_496_580_927_726).abs() < 1e-12);
        assert!((r.phi2 - 1.632_993_161_855_452).abs() < 1e-12);
        assert!((r.phi3 - 1.632_993_161_855_452).abs() < 1e-12);
    }

    #[test]
    fn roots_satisfy_cubic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p = sample_admissible(&mut rng);
            let r = compute_roots(&p).unwrap();
            let s = compute_scalars(&p, &r);
            let cubic = |z: f64| z.powi(3) - 4.0 * s.c * z * z - p.mu() * z;
            for phi in [r.phi1, r.phi2, r.phi3] {
                assert!(
                    (cubic(phi) - s.a).abs() <= 1e-9 * s.a.abs().max(1.0),
                    "residual at {:?}",
                    p
                );
            }
        }
    }

    #[test]
    fn roots_match_companion_matrix_oracle() {
        // Independent cubic solver: eigenvalues of the companion matrix of
        // z^3 - 4c z^2 - mu z - a.
        let p = params(1.0, 0.5, 1.0);
        let r = compute_roots(&p).unwrap();
        let s = compute_scalars(&p, &r);
        let companion = DMatrix::from_row_slice(
            3,
            3,
            &[4.0 * s.c, p.mu(), s.a, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        );
        let mut eig: Vec<f64> = companion
            .complex_eigenvalues()
            .iter()
            .map(|z| {
                assert!(z.im.abs() < 1e-10, "non-real root from oracle");
                z.re
            })
            .collect();
        eig.sort_by(f64::total_cmp);
        for (got, want) in [r.phi1, r.phi2, r.phi3].iter().zip(&eig) {
            assert!((got - want).abs() < 1e-10, "{got} vs oracle {want}");
        }
    }

    #[test]
    fn roots_ordering_and_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let p = sample_admissible(&mut rng);
            let r = compute_roots(&p).unwrap();
            assert!(r.phi1 < 0.0 && 0.0 < r.phi2 && r.phi2 < r.phi3);
            assert!((r.phi1 * r.phi2 + r.big_a).abs() < 1e-10 * r.big_a);
            assert!((r.phi2 * r.phi3 - r.big_b).abs() < 1e-10 * r.big_b);
            assert!((r.phi1 * r.phi3 + r.big_c).abs() < 1e-10 * r.big_c);
        }
    }

    // ------------------------------------------------------------------
    // compute_scalars
    // ------------------------------------------------------------------

    #[test]
    fn scalars_degenerate_limit() {
        // c = (32/9 + 32/9 - 16/9) / (4 sqrt(128/27)) = sqrt(6)/4, T -> pi.
        let p = params(1.0, 1e-8, 0.0);
        let r = compute_roots(&p).unwrap();
        let s = compute_scalars(&p, &r);
        assert!((s.c - 6.0f64.sqrt() / 4.0).abs() < 1e-12, "c = {}", s.c);
        assert!((s.half_period - PI).abs() < 1e-12);
    }

    #[test]
    fn viete_sum_is_4c() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let p = sample_admissible(&mut rng);
            let r = compute_roots(&p).unwrap();
            let s = compute_scalars(&p, &r);
            let sum = r.phi1 + r.phi2 + r.phi3;
            assert!((sum - 4.0 * s.c).abs() <= 1e-10 * sum.abs().max(1.0));
            // omega - c^2/4 = mu/16 by construction
            assert!((s.omega - 0.25 * s.c * s.c - p.mu() / 16.0).abs() < 1e-15);
            assert!(s.a < 0.0);
        }
    }

    #[test]
    fn quintic_constraint_kills_wave_speed() {
        let p = WaveParams::quintic(2.0, 0.7).unwrap();
        let r = compute_roots(&p).unwrap();
        let s = compute_scalars(&p, &r);
        assert!(s.c.abs() <= 1e-12, "c = {}", s.c);
    }

    #[test]
    fn quintic_mu_values() {
        assert!((quintic_mu(1.0, 1e-12) - 4.0).abs() < 1e-10);
        assert!((quintic_mu(1.0, 0.5) - 13.0f64.sqrt()).abs() < 1e-14);
        // always admissible
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let g = rng.random_range(0.1..4.0);
            let kappa = rng.random_range(0.01..0.99);
            assert!(validate(g, kappa, quintic_mu(g, kappa)).is_admissible());
        }
    }

    // ------------------------------------------------------------------
    // profile evaluation
    // ------------------------------------------------------------------

    #[test]
    fn profile_endpoint_values() {
        let w = WaveProfile::new(params(1.0, 0.5, 1.0)).unwrap();
        let t = w.scalars().half_period;
        assert_eq!(w.phi_sq(0.0), w.roots().phi3);
        assert!((w.phi_sq(t) - w.roots().phi2).abs() < 1e-11);
        assert!((w.phi_sq(-t) - w.roots().phi2).abs() < 1e-11);
        assert_eq!(w.dphi(0.0), 0.0);
        assert!(w.dphi(t).abs() < 1e-11);
    }

    #[test]
    fn profile_matches_ode_oracle() {
        // Integrate y'' = [(a - R(y)) - y R'(y)] / 8 (the xi-derivative of
        // the first-order quadrature equation for y = phi^2) from xi = 0
        // with classical RK4 and compare at xi = 0.7.
        let p = params(1.0, 0.5, 1.0);
        let w = WaveProfile::new(p).unwrap();
        let s = *w.scalars();
        let r = |z: f64| z.powi(3) - 4.0 * s.c * z * z - p.mu() * z;
        let dr = |z: f64| 3.0 * z * z - 8.0 * s.c * z - p.mu();
        let acc = |z: f64| ((s.a - r(z)) - z * dr(z)) / 8.0;

        let mut y = w.roots().phi3;
        let mut v = 0.0;
        let steps = 70_000usize;
        let h = 0.7 / steps as f64;
        for _ in 0..steps {
            let (k1y, k1v) = (v, acc(y));
            let (k2y, k2v) = (v + 0.5 * h * k1v, acc(y + 0.5 * h * k1y));
            let (k3y, k3v) = (v + 0.5 * h * k2v, acc(y + 0.5 * h * k2y));
            let (k4y, k4v) = (v + h * k3v, acc(y + h * k3y));
            y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        }
        let got = w.phi_sq(0.7);
        assert!((got - y).abs() < 1e-8, "closed form {got}, oracle {y}");
    }

    #[test]
    fn quadrature_identity_along_profile() {
        // phi'^2 = -phi^6/16 + c phi^4/4 + (omega - c^2/4) phi^2 + a/16;
        // the first-integral constant is a/16 with a = phi1 phi2 phi3 the
        // cubic-level constant.
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let p = sample_admissible(&mut rng);
            let w = WaveProfile::new(p).unwrap();
            let s = *w.scalars();
            let t = s.half_period;
            let tol = 1e-9 * (1.0f64).max(w.roots().phi3.powi(6) * 1e-3);
            for i in 0..50 {
                let xi = -t + 2.0 * t * (i as f64 + 0.5) / 50.0;
                let phi = w.phi(xi);
                let dphi = w.dphi(xi);
                let rhs = -phi.powi(6) / 16.0
                    + s.c * phi.powi(4) / 4.0
                    + (s.omega - 0.25 * s.c * s.c) * phi * phi
                    + s.a / 16.0;
                assert!((dphi * dphi - rhs).abs() <= tol, "xi={xi}, p={p:?}");
            }
        }
    }

    #[test]
    fn profile_range_and_bell_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let p = sample_admissible(&mut rng);
            let w = WaveProfile::new(p).unwrap();
            let t = w.scalars().half_period;
            let (p2, p3) = (w.roots().phi2, w.roots().phi3);
            let mut prev = f64::INFINITY;
            for i in 0..=400 {
                let xi = t * i as f64 / 400.0;
                let v = w.phi_sq(xi);
                assert!(v >= p2 - 1e-12 && v <= p3 + 1e-12);
                assert!(v < prev + 1e-13, "not decreasing at xi={xi}");
                // evenness
                assert!((w.phi_sq(-xi) - v).abs() < 1e-12);
                prev = v;
            }
        }
    }

    #[test]
    fn roundtrip_parameters_from_roots() {
        // Reconstruct (g, kappa) via g = 2/sqrt(phi3 (phi2 - phi1)),
        // kappa^2 = -phi1 (phi3 - phi2) / (phi3 (phi2 - phi1)).
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..200 {
            let p = sample_admissible(&mut rng);
            let r = compute_roots(&p).unwrap();
            let g_back = 2.0 / (r.phi3 * (r.phi2 - r.phi1)).sqrt();
            let k2_back = -r.phi1 * (r.phi3 - r.phi2) / (r.phi3 * (r.phi2 - r.phi1));
            assert!(((g_back - p.g()) / p.g()).abs() < 1e-9, "{p:?}");
            assert!(
                ((k2_back.sqrt() - p.kappa()) / p.kappa()).abs() < 1e-9,
                "{p:?}"
            );
        }
    }
}
