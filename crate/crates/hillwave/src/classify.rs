//! Stability verdicts from the instability index count, with the direct
//! `J L` spectrum as an optional cross-check.
//!
//! For the gauged (derivative-NLS) problem the count is
//! `k_Ham = n(L) - n(D)`; with `n(L) = 1` across the family, stability is
//! equivalent to `n(D) = 1`, i.e. `det D < 0`. The quintic problem is block
//! diagonal, its `D` is `diag(⟨L₋⁻¹ phi', phi'⟩, ⟨L₊⁻¹ phi, phi⟩)` with an
//! always-positive first entry, so the verdict reduces to the sign of the
//! pairing.

use serde::Serialize;

use crate::closedform::{self, ClosedFormReport, MARGINAL_PAIRING_REL};
use crate::hillspec::{self, KERNEL_TOL_REL};
use crate::waves::{DerivedScalars, WaveParams, WaveProfile};
use crate::Result;

/// Which eigenvalue problem the report refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Dnls,
    QuinticNls,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Stable,
    Unstable,
    Marginal,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Stable => write!(f, "stable"),
            Verdict::Unstable => write!(f, "unstable"),
            Verdict::Marginal => write!(f, "marginal"),
        }
    }
}

/// Knobs for a classification run.
#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    /// Collocation points for the operator grid.
    pub n_collocation: usize,
    /// Also run the dense nonsymmetric `J L` eigensolve.
    pub with_spectrum: bool,
    /// Relative kernel tolerance for eigenvalue classification.
    pub kernel_tol_rel: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { n_collocation: 256, with_spectrum: false, kernel_tol_rel: KERNEL_TOL_REL }
    }
}

/// Everything the classifier knows about one parameter point.
#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub model: Model,
    pub g: f64,
    pub kappa: f64,
    pub mu: f64,
    pub scalars: DerivedScalars,
    pub closed: ClosedFormReport,
    /// Morse index `n(L)` of the relevant matrix operator.
    pub morse_l: usize,
    /// Kernel dimension of the matrix operator (2 across the family).
    pub kernel_l: usize,
    /// Morse index `n(D)` of the numerical `D` matrix.
    pub morse_d: usize,
    /// Numerical `D` entries (`d12_num = 0` identically for the quintic
    /// block problem).
    pub d11_num: f64,
    pub d12_num: f64,
    pub d22_num: f64,
    pub det_d: f64,
    /// `k_Ham = n(L) - n(D)`; meaningful when `|det D|` is above tolerance.
    pub k_ham: i64,
    /// Largest real part of the `J L` spectrum (when computed).
    pub max_re_lambda: Option<f64>,
    /// Instability tolerance used for the spectrum (when computed).
    pub tol_unstable: Option<f64>,
    /// Eigenvalues with `Re > tol_unstable` (when computed).
    pub n_unstable: Option<usize>,
    /// A real eigenvalue above tolerance was found (when computed).
    pub real_unstable_mode: Option<bool>,
    pub verdict: Verdict,
    /// The stable-with-`D₁₁ > 0` situation occurred (stability through the
    /// off-diagonal entry).
    pub stable_with_positive_d11: bool,
    /// `k_Ham > 0` but no real unstable eigenvalue was observed; the count
    /// alone cannot distinguish instability from a negative-Krein imaginary
    /// pair.
    pub krein_caveat: bool,
    pub winding_value: f64,
    pub winding_distance: f64,
    pub boundary_distance: f64,
}

/// Relative band on `|det D|` below which the verdict is `Marginal`.
pub const MARGINAL_DET_REL: f64 = 1e-8;

fn d_norm_sq(d11: f64, d12: f64, d22: f64) -> f64 {
    d11 * d11 + 2.0 * d12 * d12 + d22 * d22
}

/// Classifies a derivative-NLS wave through both routes.
pub fn classify_dnls(p: &WaveParams, opts: &ClassifyOptions) -> Result<StabilityReport> {
    let closed = closedform::report(p)?;
    let profile = WaveProfile::new(*p)?;
    let set = hillspec::build_operators(&profile, opts.n_collocation)?;

    let l_summary = hillspec::sym_spectrum(&set.l_matrix(), opts.kernel_tol_rel)?;
    let d = hillspec::d_matrix_numeric(&set)?;
    let (d11, d12, d22) = (d[(0, 0)], d[(0, 1)], d[(1, 1)]);
    let det_d = d11 * d22 - d12 * d12;
    let morse_d = hillspec::morse_index_2x2(&d, 0.0);

    finish_report(
        Model::Dnls,
        p,
        &profile,
        closed,
        l_summary,
        (d11, d12, d22),
        det_d,
        morse_d,
        opts,
        &set,
        false,
    )
}

/// Classifies a quintic-NLS wave (`c = 0`) through its block-diagonal
/// eigenvalue problem.
pub fn classify_quintic(g: f64, kappa: f64, opts: &ClassifyOptions) -> Result<StabilityReport> {
    let p = WaveParams::quintic(g, kappa)?;
    let closed = closedform::report(&p)?;
    let profile = WaveProfile::new(p)?;
    let set = hillspec::build_operators(&profile, opts.n_collocation)?;

    let l_summary = hillspec::sym_spectrum(&set.quintic_l_matrix()?, opts.kernel_tol_rel)?;
    // D = diag(<L-^{-1} phi', phi'>, <L+^{-1} phi, phi>)
    let lm = set.l_minus();
    let x = hillspec::solve_on_complement(&lm, set.dphi(), &[set.phi().clone()])?;
    let d11 = set.weight() * x.dot(set.dphi());
    let d22 = hillspec::pairing_oracle(&set)?;
    let det_d = d11 * d22;
    let morse_d = [d11, d22].iter().filter(|&&v| v < 0.0).count();

    finish_report(
        Model::QuinticNls,
        &p,
        &profile,
        closed,
        l_summary,
        (d11, 0.0, d22),
        det_d,
        morse_d,
        opts,
        &set,
        true,
    )
}

#[allow(clippy::too_many_arguments)]
fn finish_report(
    model: Model,
    p: &WaveParams,
    profile: &WaveProfile,
    closed: ClosedFormReport,
    l_summary: hillspec::SpectrumSummary,
    (d11_num, d12_num, d22_num): (f64, f64, f64),
    det_d: f64,
    morse_d: usize,
    opts: &ClassifyOptions,
    set: &hillspec::OperatorSet,
    quintic: bool,
) -> Result<StabilityReport> {
    let marginal = closed.pairing.abs() < MARGINAL_PAIRING_REL * closed.mass
        || det_d.abs() < MARGINAL_DET_REL * d_norm_sq(d11_num, d12_num, d22_num);
    let verdict = if marginal {
        Verdict::Marginal
    } else if morse_d == 1 {
        Verdict::Stable
    } else {
        Verdict::Unstable
    };
    let k_ham = l_summary.morse_index as i64 - morse_d as i64;

    let mut max_re_lambda = None;
    let mut tol_unstable = None;
    let mut n_unstable = None;
    let mut real_unstable_mode = None;
    if opts.with_spectrum {
        let jl_op = if quintic { set.quintic_jl_matrix()? } else { set.jl_matrix() };
        let spec = hillspec::jl_spectrum(&jl_op, set.potential_scale());
        real_unstable_mode = Some(spec.eigenvalues.iter().any(|z| {
            z.re > spec.tol_unstable && z.im.abs() <= 1e-6 * z.re.abs().max(1.0)
        }));
        max_re_lambda = Some(spec.max_re);
        tol_unstable = Some(spec.tol_unstable);
        n_unstable = Some(spec.n_unstable);
    }
    let krein_caveat = verdict == Verdict::Unstable
        && k_ham > 0
        && real_unstable_mode == Some(false);

    let winding = profile.phase_winding();
    Ok(StabilityReport {
        model,
        g: p.g(),
        kappa: p.kappa(),
        mu: p.mu(),
        scalars: *profile.scalars(),
        closed,
        morse_l: l_summary.morse_index,
        kernel_l: l_summary.kernel_dim,
        morse_d,
        d11_num,
        d12_num,
        d22_num,
        det_d,
        k_ham,
        max_re_lambda,
        tol_unstable,
        n_unstable,
        real_unstable_mode,
        verdict,
        stable_with_positive_d11: verdict == Verdict::Stable && closed.d11 > 0.0,
        krein_caveat,
        winding_value: winding.value,
        winding_distance: winding.distance,
        boundary_distance: p.boundary_distance(),
    })
}

/// Convenience wrapper dispatching on the model.
pub fn classify(
    model: Model,
    g: f64,
    kappa: f64,
    mu: Option<f64>,
    opts: &ClassifyOptions,
) -> Result<StabilityReport> {
    match model {
        Model::Dnls => {
            let mu = mu.ok_or_else(|| {
                crate::Error::InvalidArgument("mu is required for the dnls model".into())
            })?;
            classify_dnls(&WaveParams::new(g, kappa, mu)?, opts)
        }
        Model::QuinticNls => classify_quintic(g, kappa, opts),
    }
}

/// Root-finds `g` on a fixed `(kappa, mu)` line so that the closed-form
/// pairing vanishes there. Used to exhibit the stable-with-`D₁₁ > 0`
/// mechanism next to the `D₁₁ = 0` curve.
pub fn find_pairing_zero(kappa: f64, mu: f64, g_lo: f64, g_hi: f64) -> Result<f64> {
    let f = |g: f64| -> Result<f64> {
        closedform::pairing_lplus_inv(&WaveParams::new(g, kappa, mu)?)
    };
    bisect_zero(f, g_lo, g_hi, 1e-13)
}

/// Bisection on a fallible function with a sign change over `[lo, hi]`.
pub(crate) fn bisect_zero<F: Fn(f64) -> Result<f64>>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    xtol: f64,
) -> Result<f64> {
    let flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(crate::Error::NoRoot(format!(
            "no sign change on [{lo}, {hi}]: f(lo) = {flo:.3e}, f(hi) = {fhi:.3e}"
        )));
    }
    let mut flo = flo;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid)?;
        if fmid == 0.0 || hi - lo < xtol * mid.abs().max(1.0) {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dnls_negative_pairing_point_is_stable() {
        // deep in the negative-pairing region of the mu = 1 slice
        let p = WaveParams::new(2.5, 0.4, 1.0).unwrap();
        let opts = ClassifyOptions { with_spectrum: true, ..Default::default() };
        let rep = classify_dnls(&p, &opts).unwrap();
        assert!(rep.closed.pairing < 0.0);
        assert_eq!(rep.verdict, Verdict::Stable);
        assert_eq!(rep.k_ham, 0);
        assert_eq!((rep.morse_l, rep.kernel_l, rep.morse_d), (1, 2, 1));
        assert!(rep.det_d < 0.0);
        assert!(rep.max_re_lambda.unwrap() <= rep.tol_unstable.unwrap());
        assert!(!rep.stable_with_positive_d11);
    }

    #[test]
    fn dnls_positive_pairing_point_reports_consistently() {
        let p = WaveParams::new(1.0, 0.5, 1.0).unwrap();
        let rep = classify_dnls(&p, &ClassifyOptions::default()).unwrap();
        assert!(rep.closed.pairing > 0.0);
        assert!(rep.closed.d11 > 0.0);
        // stability through the off-diagonal entry: det D < 0 with D11 > 0
        assert_eq!(rep.verdict, Verdict::Stable);
        assert!(rep.det_d < 0.0);
        assert!(rep.stable_with_positive_d11);
        assert_eq!(rep.k_ham, 0);
    }

    #[test]
    fn quintic_verdict_follows_pairing_sign_and_spectrum() {
        let opts = ClassifyOptions { with_spectrum: true, ..Default::default() };
        for kappa in [0.3, 0.7] {
            let rep = classify_quintic(1.0, kappa, &opts).unwrap();
            assert_eq!(rep.model, Model::QuinticNls);
            assert!(rep.d11_num > 0.0, "first quintic D entry must be positive");
            assert_eq!(rep.d12_num, 0.0);
            let expect = if rep.closed.pairing < 0.0 { Verdict::Stable } else { Verdict::Unstable };
            assert_eq!(rep.verdict, expect);
            // verdict and direct spectrum agree
            if rep.verdict == Verdict::Unstable {
                assert_eq!(rep.k_ham, 1);
                assert!(rep.real_unstable_mode.unwrap(), "k_r = 1 real mode expected");
                assert!(!rep.krein_caveat);
            } else {
                assert!(rep.max_re_lambda.unwrap() <= rep.tol_unstable.unwrap());
            }
        }
    }

    #[test]
    fn pairing_zero_root_find_and_cor18_mechanism() {
        // A D11 = 0 point on the mu = 1 slice: det D = -D12^2 < 0 keeps the
        // wave stable, and nearby D11 > 0 stable points exist.
        let g_star = find_pairing_zero(0.5, 1.0, 2.0, 2.6).unwrap();
        let p = WaveParams::new(g_star, 0.5, 1.0).unwrap();
        let pair = closedform::pairing_lplus_inv(&p).unwrap();
        // the pairing carries ~1e-8 noise from the finite-difference mass
        // derivatives, so the bisected zero cannot be sharper than that
        assert!(pair.abs() < 1e-7, "pairing at root: {pair:.3e}");

        let rep = classify_dnls(&p, &ClassifyOptions::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::Marginal); // |pairing| below the band
        assert!(rep.d12_num.abs() > 1e-6, "D12 = {}", rep.d12_num);
        assert!(rep.det_d < 0.0);

        // step off the curve to the D11 > 0 side
        let rep2 = classify_dnls(
            &WaveParams::new(g_star - 0.05, 0.5, 1.0).unwrap(),
            &ClassifyOptions::default(),
        )
        .unwrap();
        assert!(rep2.closed.d11 > 0.0);
        assert_eq!(rep2.verdict, Verdict::Stable);
        assert!(rep2.stable_with_positive_d11);
    }

    #[test]
    fn verdicts_consistent_across_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let opts = ClassifyOptions::default();
        for _ in 0..6 {
            let p = crate::verify::sample_admissible(&mut rng, 0.05);
            let rep = classify_dnls(&p, &opts).unwrap();
            assert_eq!(rep.morse_l, 1, "n(L) = 1 expected at {p:?}");
            assert_eq!(rep.kernel_l, 2);
            if rep.verdict != Verdict::Marginal {
                assert_eq!(rep.k_ham == 0, rep.verdict == Verdict::Stable);
            }
            // the shortcut: negative pairing forces stability
            if rep.closed.pairing < 0.0 {
                assert_eq!(rep.verdict, Verdict::Stable);
            }
        }
    }

    #[test]
    fn classify_dispatch_requires_mu_for_dnls() {
        assert!(classify(Model::Dnls, 1.0, 0.5, None, &ClassifyOptions::default()).is_err());
        assert!(
            classify(Model::QuinticNls, 1.0, 0.5, None, &ClassifyOptions::default()).is_ok()
        );
    }
}
