//! Seeded self-verification battery: random admissible points, closed form
//! against independent quadrature/collocation routes, spectral counts and
//! index consistency.

use rand::Rng;

use crate::waves::{self, WaveParams};

/// Draws a uniformly spread admissible parameter point, keeping a relative
/// margin from every boundary so that near-degenerate points (where
/// tolerances would have to be relaxed) are avoided.
pub fn sample_admissible<R: Rng + ?Sized>(rng: &mut R, margin: f64) -> WaveParams {
    loop {
        let mu = rng.random_range(-2.0..2.0);
        let g_cap = waves::g_limit(mu).min(4.0);
        let g = rng.random_range(0.15..g_cap * (1.0 - margin));
        let (cap_lo, cap_hi) = waves::kappa_sq_caps(g, mu);
        let k2_cap = cap_lo.min(cap_hi) * (1.0 - margin);
        if k2_cap <= 0.01 {
            continue;
        }
        // kappa floor keeps the second eigenvalue of L+ (which vanishes like
        // kappa^4 toward the constant-wave limit) numerically separated from
        // the kernel band.
        let kappa = rng.random_range(0.02_f64..k2_cap).sqrt();
        if kappa < 0.14 {
            continue;
        }
        if let Ok(p) = WaveParams::new(g, kappa, mu) {
            return p;
        }
    }
}
