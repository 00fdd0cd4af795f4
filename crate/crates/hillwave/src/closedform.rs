//! Closed-form stability quantities of the wave family.
//!
//! Everything here reduces to complete elliptic integrals of the roots:
//!
//! * mass `||phi||^2 = 4g (phi1 K + (phi3 - phi1) Pi[(phi3-phi2)/(phi1-phi2)])`
//! * `∫ 1/phi^2 = (4g/(phi1 phi3)) (phi3 K + (phi1 - phi3) Pi[kappa^2])`
//! * the pairing `⟨L₊⁻¹ phi, phi⟩` through parameter derivatives of the mass,
//! * the solvability denominator `c + c_kappa K/K' - 2 mu c_mu` (with
//!   `K' = dK/dkappa`),
//! * the Gram entry `D₁₁ = 4I/(4I + P) * P` with `I = ∫ 1/phi^2`, `P` the
//!   pairing.
//!
//! `c_kappa`, `c_mu` are analytic (the root products are explicit rationals
//! in the parameters); the mass derivatives use five-point central
//! differences plus one Richardson extrapolation, with the step clamped away
//! from the admissibility boundary.

use crate::elliptic::{complete_k, complete_pi, dk_dkappa};
use crate::waves::{self, WaveParams, WaveProfile};
use crate::{Error, Result};
use serde::Serialize;

/// The closed-form scalars at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormReport {
    /// `||phi||^2` over the full period cell `[-T, T]`.
    pub mass: f64,
    /// `∫_{-T}^{T} phi^{-2}`.
    pub inv_sq: f64,
    /// `⟨L₊⁻¹ phi, phi⟩`.
    pub pairing: f64,
    /// Solvability denominator `c + c_kappa K/K' - 2 mu c_mu`.
    pub denom: f64,
    /// `D₁₁ = (4 inv_sq / (4 inv_sq + pairing)) * pairing`.
    pub d11: f64,
    /// `4 inv_sq + pairing`; a zero would enlarge the reduced kernel.
    pub kernel_margin: f64,
}

/// Wave mass `||phi||^2_{L^2[-T,T]}` in closed form.
pub fn mass(w: &WaveProfile) -> f64 {
    let r = w.roots();
    let m = w.params().modulus();
    let n = (r.phi3 - r.phi2) / (r.phi1 - r.phi2);
    debug_assert!(n < 0.0);
    let pi_n = complete_pi(n, m).expect("characteristic < 0");
    4.0 * w.params().g() * (r.phi1 * complete_k(m) + (r.phi3 - r.phi1) * pi_n)
}

/// `∫_{-T}^{T} phi^{-2} dy` in closed form.
///
/// The characteristic `phi1 (phi3 - phi2) / (phi3 (phi1 - phi2))` collapses
/// algebraically to `kappa^2 in (0, 1)`.
pub fn inv_sq_integral(w: &WaveProfile) -> f64 {
    let r = w.roots();
    let m = w.params().modulus();
    let n = r.phi1 * (r.phi3 - r.phi2) / (r.phi3 * (r.phi1 - r.phi2));
    debug_assert!((n - m.m()).abs() <= 1e-12 * n.abs().max(1.0));
    let pi_n = complete_pi(n, m).expect("characteristic < 1");
    4.0 * w.params().g() / (r.phi1 * r.phi3)
        * (r.phi3 * complete_k(m) + (r.phi1 - r.phi3) * pi_n)
}

/// Wave speed and its analytic partial derivatives in `kappa` and `mu`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedPartials {
    pub c: f64,
    pub c_kappa: f64,
    pub c_mu: f64,
}

/// `c = N / (4 sqrt(P))` with `N = AB + BC - AC`, `P = ABC`, differentiated
/// through the explicit rationals `A, B, C`.
pub fn speed_partials(p: &WaveParams) -> SpeedPartials {
    let (g, kappa, mu) = (p.g(), p.kappa(), p.mu());
    let (a, b, c) = waves::root_products(g, kappa, mu);
    let gg = g * g;
    // partials of (A, B, C)
    let a_k = -16.0 * kappa / (3.0 * gg);
    let b_k = -8.0 * kappa / (3.0 * gg);
    let c_k = 8.0 * kappa / (3.0 * gg);
    let a_m = 1.0 / 3.0;
    let b_m = -1.0 / 3.0;
    let c_m = 1.0 / 3.0;

    let n = a * b + b * c - a * c;
    let prod = a * b * c;
    let sqrt_p = prod.sqrt();

    let speed = n / (4.0 * sqrt_p);
    let d = |da: f64, db: f64, dc: f64| {
        let dn = da * b + a * db + db * c + b * dc - da * c - a * dc;
        let dp = da * b * c + a * db * c + a * b * dc;
        dn / (4.0 * sqrt_p) - n * dp / (8.0 * prod * sqrt_p)
    };
    SpeedPartials { c: speed, c_kappa: d(a_k, b_k, c_k), c_mu: d(a_m, b_m, c_m) }
}

/// Solvability denominator `c + c_kappa K(kappa)/K'(kappa) - 2 mu c_mu`,
/// where `K' = dK/dkappa`.
pub fn denominator(p: &WaveParams) -> f64 {
    let sp = speed_partials(p);
    let m = p.modulus();
    sp.c + sp.c_kappa * complete_k(m) / dk_dkappa(m) - 2.0 * p.mu() * sp.c_mu
}

fn mass_at(g: f64, kappa: f64, mu: f64) -> Result<f64> {
    let p = WaveParams::new(g, kappa, mu)?;
    Ok(mass(&WaveProfile::new(p)?))
}

/// Five-point central difference of `f` at `x` with step `h`.
fn diff5(f: &dyn Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    Ok((f(x - 2.0 * h)? - 8.0 * f(x - h)? + 8.0 * f(x + h)? - f(x + 2.0 * h)?) / (12.0 * h))
}

/// Five-point stencil at steps `h` and `h/2`, Richardson-extrapolated.
/// Shrinks `h` (up to a few times) if a stencil point leaves the admissible
/// region.
fn mass_partial(p: &WaveParams, in_kappa: bool) -> Result<f64> {
    let (g, kappa, mu) = (p.g(), p.kappa(), p.mu());
    let x = if in_kappa { kappa } else { mu };
    let f: Box<dyn Fn(f64) -> Result<f64>> = if in_kappa {
        Box::new(move |k| mass_at(g, k, mu))
    } else {
        Box::new(move |m| mass_at(g, kappa, m))
    };
    let mut h = 1e-5 * x.abs().max(1.0);
    for _ in 0..8 {
        match (diff5(&f, x, h), diff5(&f, x, 0.5 * h)) {
            (Ok(d1), Ok(d2)) => return Ok((16.0 * d2 - d1) / 15.0),
            _ => h *= 0.25,
        }
    }
    Err(Error::InvalidArgument(format!(
        "mass derivative stencil cannot stay admissible at {p:?}"
    )))
}

/// The pairing `⟨L₊⁻¹ phi, phi⟩` in closed form:
/// `8 [c_mu (K/K') ∂_kappa ||phi||^2 - (c + c_kappa K/K') ∂_mu ||phi||^2]`
/// over `c + c_kappa K/K' - 2 mu c_mu`.
///
/// Errors when the denominator is within `1e-8` of zero relative to its
/// natural scale (near-degenerate solvability).
pub fn pairing_lplus_inv(p: &WaveParams) -> Result<f64> {
    let sp = speed_partials(p);
    let m = p.modulus();
    let ratio = complete_k(m) / dk_dkappa(m);
    let denom = sp.c + sp.c_kappa * ratio - 2.0 * p.mu() * sp.c_mu;
    let scale = sp.c.abs() + (sp.c_kappa * ratio).abs() + (2.0 * p.mu() * sp.c_mu).abs();
    if denom.abs() < 1e-8 * scale.max(1.0) {
        return Err(Error::DegenerateDenominator { value: denom, scale: scale.max(1.0) });
    }
    let dm_dk = mass_partial(p, true)?;
    let dm_dmu = mass_partial(p, false)?;
    Ok(8.0 * (sp.c_mu * ratio * dm_dk - (sp.c + sp.c_kappa * ratio) * dm_dmu) / denom)
}

/// `D₁₁` from the reduced formula. Errors if the kernel margin
/// `4 inv_sq + pairing` is degenerate.
pub fn d11(p: &WaveParams) -> Result<f64> {
    Ok(report(p)?.d11)
}

/// Computes the full closed-form report at a parameter point.
pub fn report(p: &WaveParams) -> Result<ClosedFormReport> {
    let w = WaveProfile::new(*p)?;
    let mass = mass(&w);
    let inv_sq = inv_sq_integral(&w);
    let denom = denominator(p);
    let pairing = pairing_lplus_inv(p)?;
    let kernel_margin = 4.0 * inv_sq + pairing;
    if kernel_margin.abs() < 1e-10 * (4.0 * inv_sq).max(pairing.abs()) {
        return Err(Error::DegenerateKernelMargin { value: kernel_margin });
    }
    let d11 = 4.0 * inv_sq / kernel_margin * pairing;
    Ok(ClosedFormReport { mass, inv_sq, pairing, denom, d11, kernel_margin })
}

/// Relative threshold below which `|pairing|` is reported as marginal rather
/// than classified by sign.
pub const MARGINAL_PAIRING_REL: f64 = 1e-6;
