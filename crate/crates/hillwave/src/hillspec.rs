//! Fourier-collocation discretization of the linearized operators and the
//! independent spectral route to stability: Morse indices, kernels, the
//! numerical `D` matrix and the spectrum of the Hamiltonian problem `J L`.
//!
//! All operators act on `2T`-periodic functions sampled on `n` equispaced
//! nodes of `[-T, T)`; derivatives are dense spectral differentiation
//! matrices, so smooth potentials give spectral accuracy and `n = 256` is
//! already converged to ~1e-10 for the family's profiles. First-order blocks
//! are discretized as `(phi^2/2) D1 - diag(phi phi'/2)` and the adjoint block
//! is the explicit transpose, which keeps the assembled `L` exactly
//! symmetric.
//!
//! The continuum operators have purely discrete spectrum (compact
//! resolvent); the discretized model trivially has finite spectrum, so
//! eigenvalue counts below are meaningful as soon as they are stable under
//! grid refinement — the refinement check is part of the test suite.

use nalgebra::{Complex, DMatrix, DVector};

use crate::waves::WaveProfile;
use crate::{Error, Result};

/// Equispaced periodic collocation grid on `[-T, T)`.
#[derive(Debug, Clone)]
pub struct FourierGrid {
    n: usize,
    half_period: f64,
    nodes: Vec<f64>,
}

impl FourierGrid {
    /// `n` must be even and at least 64.
    pub fn new(n: usize, half_period: f64) -> Result<Self> {
        if n < 64 || n % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "collocation size must be even and >= 64, got {n}"
            )));
        }
        if !(half_period > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "half-period must be positive, got {half_period}"
            )));
        }
        let h = 2.0 * half_period / n as f64;
        let nodes = (0..n).map(|j| -half_period + j as f64 * h).collect();
        Ok(Self { n, half_period, nodes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_period(&self) -> f64 {
        self.half_period
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Trapezoid weight per node, `2T/n`; spectrally accurate for the
    /// discrete `L²` pairing of smooth periodic functions.
    pub fn weight(&self) -> f64 {
        2.0 * self.half_period / self.n as f64
    }

    /// First-derivative spectral differentiation matrix (antisymmetric).
    pub fn d1(&self) -> DMatrix<f64> {
        let n = self.n;
        let h = std::f64::consts::TAU / n as f64;
        let scale = std::f64::consts::PI / self.half_period;
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                0.0
            } else {
                let k = i as isize - j as isize;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                scale * 0.5 * sign / (0.5 * k as f64 * h).tan()
            }
        })
    }

    /// Second-derivative spectral differentiation matrix (symmetric).
    pub fn d2(&self) -> DMatrix<f64> {
        let n = self.n;
        let h = std::f64::consts::TAU / n as f64;
        let scale = (std::f64::consts::PI / self.half_period).powi(2);
        let diag = -scale * (std::f64::consts::PI.powi(2) / (3.0 * h * h) + 1.0 / 6.0);
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                diag
            } else {
                let k = i as isize - j as isize;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                -scale * sign / (2.0 * (0.5 * k as f64 * h).sin().powi(2))
            }
        })
    }
}

/// Which operator a dense matrix realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorLabel {
    LPlus,
    LMinus,
    LOne,
    MBlock,
    LMatrix,
    JLMatrix,
    QuinticL,
    QuinticJL,
}

/// Dense realization of a periodic differential operator on the grid.
#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    pub label: OperatorLabel,
    pub matrix: DMatrix<f64>,
    pub symmetric: bool,
    /// Quadrature weight of the underlying grid (per node).
    pub weight: f64,
}

/// Profile samples and assembled operator blocks at one parameter point.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    grid: FourierGrid,
    c: f64,
    phi: DVector<f64>,
    dphi: DVector<f64>,
    phi_sq: DVector<f64>,
    l_plus: DMatrix<f64>,
    l_minus: DMatrix<f64>,
    l_one: DMatrix<f64>,
    m_block: DMatrix<f64>,
}

/// Assembles every linearized operator for the profile on an `n`-point grid.
pub fn build_operators(w: &WaveProfile, n: usize) -> Result<OperatorSet> {
    let scalars = *w.scalars();
    let grid = FourierGrid::new(n, scalars.half_period)?;
    let phi = DVector::from_iterator(n, grid.nodes().iter().map(|&x| w.phi(x)));
    let dphi = DVector::from_iterator(n, grid.nodes().iter().map(|&x| w.dphi(x)));
    let phi_sq = DVector::from_iterator(n, grid.nodes().iter().map(|&x| w.phi_sq(x)));

    let mu16 = w.params().mu() / 16.0;
    let c = scalars.c;
    let d2 = grid.d2();

    let schroedinger = |c2: f64, c4: f64| -> DMatrix<f64> {
        let mut m = -&d2;
        for j in 0..n {
            let p2 = phi_sq[j];
            m[(j, j)] += mu16 + c2 * p2 + c4 * p2 * p2;
        }
        m
    };
    let l_plus = schroedinger(1.5 * c, -15.0 / 16.0);
    let l_minus = schroedinger(0.5 * c, -3.0 / 16.0);
    let l_one = schroedinger(1.5 * c, -11.0 / 16.0);

    // M = (phi^2/2) d/dy - diag(phi phi'/2)
    let mut m_block = grid.d1();
    for i in 0..n {
        let row_factor = 0.5 * phi_sq[i];
        for j in 0..n {
            m_block[(i, j)] *= row_factor;
        }
        m_block[(i, i)] -= 0.5 * phi[i] * dphi[i];
    }

    Ok(OperatorSet { grid, c, phi, dphi, phi_sq, l_plus, l_minus, l_one, m_block })
}

impl OperatorSet {
    pub fn grid(&self) -> &FourierGrid {
        &self.grid
    }

    pub fn weight(&self) -> f64 {
        self.grid.weight()
    }

    pub fn phi(&self) -> &DVector<f64> {
        &self.phi
    }

    pub fn dphi(&self) -> &DVector<f64> {
        &self.dphi
    }

    pub fn phi_sq(&self) -> &DVector<f64> {
        &self.phi_sq
    }

    fn wrap(
        &self,
        label: OperatorLabel,
        matrix: DMatrix<f64>,
        symmetric: bool,
    ) -> DiscretizedOperator {
        DiscretizedOperator { label, matrix, symmetric, weight: self.grid.weight() }
    }

    pub fn l_plus(&self) -> DiscretizedOperator {
        self.wrap(OperatorLabel::LPlus, self.l_plus.clone(), true)
    }

    /// `L₋` (the same operator as the `L₂` block).
    pub fn l_minus(&self) -> DiscretizedOperator {
        self.wrap(OperatorLabel::LMinus, self.l_minus.clone(), true)
    }

    pub fn l_one(&self) -> DiscretizedOperator {
        self.wrap(OperatorLabel::LOne, self.l_one.clone(), true)
    }

    pub fn m_block(&self) -> DiscretizedOperator {
        self.wrap(OperatorLabel::MBlock, self.m_block.clone(), false)
    }

    /// The `2n x 2n` matrix operator `[[L₁, M], [M*, L₂]]`; the adjoint block
    /// is the exact transpose, so the result is exactly symmetric.
    pub fn l_matrix(&self) -> DiscretizedOperator {
        let n = self.grid.n();
        let mut l = DMatrix::zeros(2 * n, 2 * n);
        l.view_mut((0, 0), (n, n)).copy_from(&self.l_one);
        l.view_mut((0, n), (n, n)).copy_from(&self.m_block);
        l.view_mut((n, 0), (n, n)).copy_from(&self.m_block.transpose());
        l.view_mut((n, n), (n, n)).copy_from(&self.l_minus);
        self.wrap(OperatorLabel::LMatrix, l, true)
    }

    /// The Hamiltonian product `J L = [[M*, L₂], [-L₁, -M]]`.
    pub fn jl_matrix(&self) -> DiscretizedOperator {
        let n = self.grid.n();
        let mut jl = DMatrix::zeros(2 * n, 2 * n);
        jl.view_mut((0, 0), (n, n)).copy_from(&self.m_block.transpose());
        jl.view_mut((0, n), (n, n)).copy_from(&self.l_minus);
        jl.view_mut((n, 0), (n, n)).copy_from(&(-&self.l_one));
        jl.view_mut((n, n), (n, n)).copy_from(&(-&self.m_block));
        self.wrap(OperatorLabel::JLMatrix, jl, false)
    }

    fn require_zero_speed(&self) -> Result<()> {
        if self.c.abs() > 1e-8 {
            return Err(Error::InvalidArgument(format!(
                "quintic operators need c = 0, got c = {:.3e}",
                self.c
            )));
        }
        Ok(())
    }

    /// Block-diagonal quintic operator `diag(L₊, L₋)`; only valid on
    /// zero-speed profiles. The gauged-equation `L` with `c = 0` still
    /// carries `M != 0` off-diagonal blocks, so the quintic eigenproblem
    /// must use this, not [`OperatorSet::l_matrix`].
    pub fn quintic_l_matrix(&self) -> Result<DiscretizedOperator> {
        self.require_zero_speed()?;
        let n = self.grid.n();
        let mut l = DMatrix::zeros(2 * n, 2 * n);
        l.view_mut((0, 0), (n, n)).copy_from(&self.l_plus);
        l.view_mut((n, n), (n, n)).copy_from(&self.l_minus);
        Ok(self.wrap(OperatorLabel::QuinticL, l, true))
    }

    /// Quintic Hamiltonian product `J diag(L₊, L₋) = [[0, L₋], [-L₊, 0]]`.
    pub fn quintic_jl_matrix(&self) -> Result<DiscretizedOperator> {
        self.require_zero_speed()?;
        let n = self.grid.n();
        let mut jl = DMatrix::zeros(2 * n, 2 * n);
        jl.view_mut((0, n), (n, n)).copy_from(&self.l_minus);
        jl.view_mut((n, 0), (n, n)).copy_from(&(-&self.l_plus));
        Ok(self.wrap(OperatorLabel::QuinticJL, jl, false))
    }

    /// First kernel element of `L`: `Ψ₁ = (0, phi)`.
    pub fn psi1(&self) -> DVector<f64> {
        let n = self.grid.n();
        let mut v = DVector::zeros(2 * n);
        v.rows_mut(n, n).copy_from(&self.phi);
        v
    }

    /// Second kernel element of `L`: `Ψ₂ = (phi', -phi³/4)`.
    pub fn psi2(&self) -> DVector<f64> {
        let n = self.grid.n();
        let mut v = DVector::zeros(2 * n);
        v.rows_mut(0, n).copy_from(&self.dphi);
        for j in 0..n {
            v[n + j] = -0.25 * self.phi[j] * self.phi_sq[j];
        }
        v
    }

    /// `J Ψ₁ = (phi, 0)`, the first right-hand side of the `D` matrix.
    pub fn j_psi1(&self) -> DVector<f64> {
        let n = self.grid.n();
        let mut v = DVector::zeros(2 * n);
        v.rows_mut(0, n).copy_from(&self.phi);
        v
    }

    /// `(phi³/4, phi')`, the second right-hand side of the `D` matrix.
    pub fn j_psi2(&self) -> DVector<f64> {
        let n = self.grid.n();
        let mut v = DVector::zeros(2 * n);
        for j in 0..n {
            v[j] = 0.25 * self.phi[j] * self.phi_sq[j];
        }
        v.rows_mut(n, n).copy_from(&self.dphi);
        v
    }

    /// Magnitude of the zeroth-order (potential) coefficients across all
    /// blocks; an `n`-independent stand-in for the physical operator scale.
    /// The raw matrix norm of a spectral discretization grows like `n²` with
    /// resolution, which would make any `norm * tolerance` threshold
    /// meaningless under refinement.
    pub fn potential_scale(&self) -> f64 {
        let mut scale = 1.0f64;
        for j in 0..self.grid.n() {
            let p2 = self.phi_sq[j];
            let quartic = p2 * p2;
            scale = scale
                .max((1.5 * self.c * p2).abs() + 15.0 / 16.0 * quartic)
                .max((0.5 * self.phi[j] * self.dphi[j]).abs())
                .max(0.25 * quartic);
        }
        scale
    }
}

/// Sorted eigenvalues of a symmetric operator with Morse index, kernel
/// dimension and the gap above the kernel band.
#[derive(Debug, Clone)]
pub struct SpectrumSummary {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Count of eigenvalues below `-tol_ker`.
    pub morse_index: usize,
    /// Count of eigenvalues inside `[-tol_ker, tol_ker]`.
    pub kernel_dim: usize,
    /// Smallest eigenvalue above the kernel band (`+inf` if none).
    pub gap: f64,
    /// The absolute kernel tolerance used.
    pub tol_ker: f64,
}

/// Default relative kernel tolerance:
/// `tol_ker = KERNEL_TOL_REL * max |eigenvalue|`.
///
/// Measured across the family at `n <= 512`, discrete kernel eigenvalues sit
/// at the 1e-13..1e-11 roundoff floor while the smallest physical eigenvalue
/// of `L₊` shrinks like `O(kappa^4)` toward the constant-wave limit (2.6e-5
/// at `kappa = 0.05`); 1e-10 separates the two with two orders of margin on
/// each side, where a looser band would silently absorb physical
/// eigenvalues.
pub const KERNEL_TOL_REL: f64 = 1e-10;

fn summarize(eigenvalues: Vec<f64>, tol_rel: f64) -> Result<SpectrumSummary> {
    let max_abs = eigenvalues.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let tol_ker = tol_rel * max_abs;
    for &v in &eigenvalues {
        if v.abs() > tol_ker && v.abs() < 2.0 * tol_ker {
            return Err(Error::AmbiguousKernel { eigenvalue: v, tol: tol_ker });
        }
    }
    let morse_index = eigenvalues.iter().filter(|&&v| v < -tol_ker).count();
    let kernel_dim = eigenvalues.iter().filter(|&&v| v.abs() <= tol_ker).count();
    let gap = eigenvalues
        .iter()
        .copied()
        .find(|&v| v > tol_ker)
        .unwrap_or(f64::INFINITY);
    Ok(SpectrumSummary { eigenvalues, morse_index, kernel_dim, gap, tol_ker })
}

/// Dense symmetric eigensolve with eigenvalue classification.
///
/// `tol_rel` scales the kernel band by the largest eigenvalue magnitude; an
/// eigenvalue falling between `tol_ker` and `2 tol_ker` is refused as
/// ambiguous rather than silently binned.
pub fn sym_spectrum(op: &DiscretizedOperator, tol_rel: f64) -> Result<SpectrumSummary> {
    let (vals, _) = sym_eigen(op)?;
    summarize(vals, tol_rel)
}

/// Symmetric eigensolve returning the summary plus the kernel eigenvectors.
pub fn sym_spectrum_with_kernel(
    op: &DiscretizedOperator,
    tol_rel: f64,
) -> Result<(SpectrumSummary, Vec<DVector<f64>>)> {
    let (vals, vecs) = sym_eigen(op)?;
    let summary = summarize(vals, tol_rel)?;
    let kernel = summary
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &v)| v.abs() <= summary.tol_ker)
        .map(|(i, _)| vecs.column(i).into_owned())
        .collect();
    Ok((summary, kernel))
}

/// Sorted dense symmetric eigendecomposition (ascending eigenvalues,
/// matching eigenvector columns).
pub fn sym_eigen(op: &DiscretizedOperator) -> Result<(Vec<f64>, DMatrix<f64>)> {
    if !op.symmetric {
        return Err(Error::InvalidArgument(format!(
            "symmetric eigensolve requested for non-symmetric operator {:?}",
            op.label
        )));
    }
    let eig = op.matrix.clone().symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.column_mut(dst).copy_from(&eig.eigenvectors.column(src));
    }
    Ok((vals, vecs))
}

/// Relative tolerance on the kernel component of a right-hand side before
/// the Fredholm condition is declared violated.
pub const FREDHOLM_TOL: f64 = 1e-8;

/// Solves `op x = rhs` on the orthogonal complement of `span(kernel_basis)`,
/// returning the minimum-norm solution with `x ⟂ kernel`.
///
/// The right-hand side must satisfy the Fredholm condition up to
/// [`FREDHOLM_TOL`]; the tiny admissible component is projected away. The
/// solve itself is a bordered (Lagrange-multiplier) LU factorization, which
/// stays well conditioned exactly because the basis spans the near-kernel.
pub fn solve_on_complement(
    op: &DiscretizedOperator,
    rhs: &DVector<f64>,
    kernel_basis: &[DVector<f64>],
) -> Result<DVector<f64>> {
    let m = op.matrix.nrows();
    let k = kernel_basis.len();
    if rhs.len() != m || kernel_basis.iter().any(|v| v.len() != m) {
        return Err(Error::InvalidArgument("dimension mismatch in kernel solve".into()));
    }

    // Orthonormalize the kernel basis (modified Gram-Schmidt).
    let mut q: Vec<DVector<f64>> = Vec::with_capacity(k);
    for v in kernel_basis {
        let mut u = v.clone();
        for e in &q {
            let c = e.dot(&u);
            u.axpy(-c, e, 1.0);
        }
        let norm = u.norm();
        if norm < 1e-12 {
            return Err(Error::InvalidArgument("kernel basis is rank deficient".into()));
        }
        q.push(u / norm);
    }

    let rhs_norm = rhs.norm();
    let mut projected = rhs.clone();
    let mut defect_sq = 0.0;
    for e in &q {
        let c = e.dot(&projected);
        defect_sq += c * c;
        projected.axpy(-c, e, 1.0);
    }
    let defect = defect_sq.sqrt() / rhs_norm.max(f64::MIN_POSITIVE);
    if defect > FREDHOLM_TOL {
        return Err(Error::FredholmViolation { defect, tol: FREDHOLM_TOL });
    }

    // Bordered system [[A, Q], [Q^T, 0]] [x; lambda] = [projected; 0].
    let dim = m + k;
    let mut bordered = DMatrix::zeros(dim, dim);
    bordered.view_mut((0, 0), (m, m)).copy_from(&op.matrix);
    for (j, e) in q.iter().enumerate() {
        bordered.view_mut((0, m + j), (m, 1)).copy_from(e);
        bordered.view_mut((m + j, 0), (1, m)).copy_from(&e.transpose());
    }
    let mut full_rhs = DVector::zeros(dim);
    full_rhs.rows_mut(0, m).copy_from(&projected);

    let solution = bordered
        .lu()
        .solve(&full_rhs)
        .ok_or_else(|| Error::LinearSolve("bordered kernel-complement system is singular".into()))?;
    let x = solution.rows(0, m).into_owned();

    let residual = (&op.matrix * &x - &projected).norm();
    if residual > FREDHOLM_TOL * rhs_norm.max(f64::MIN_POSITIVE) {
        return Err(Error::LinearSolve(format!(
            "kernel-complement solve residual {residual:.3e} exceeds {FREDHOLM_TOL:.1e} * ||rhs||"
        )));
    }
    Ok(x)
}

/// The numerical `2x2` matrix `D` from kernel-complement solves against
/// `(phi, 0)` and `(phi³/4, phi')`, in the discrete `L²[-T, T]` pairing.
///
/// Returns the symmetrized matrix; asymmetry beyond `1e-9 * scale` is an
/// error.
pub fn d_matrix_numeric(set: &OperatorSet) -> Result<nalgebra::Matrix2<f64>> {
    let l = set.l_matrix();
    let kernel = [set.psi1(), set.psi2()];
    let rhs1 = set.j_psi1();
    let rhs2 = set.j_psi2();
    let x1 = solve_on_complement(&l, &rhs1, &kernel)?;
    let x2 = solve_on_complement(&l, &rhs2, &kernel)?;
    let w = set.weight();
    let d11 = w * x1.dot(&rhs1);
    let d12 = w * x1.dot(&rhs2);
    let d21 = w * x2.dot(&rhs1);
    let d22 = w * x2.dot(&rhs2);
    let scale = d11.abs().max(d12.abs()).max(d22.abs()).max(1e-30);
    if (d12 - d21).abs() > 1e-9 * scale {
        return Err(Error::LinearSolve(format!(
            "numerical D asymmetry {:.3e} exceeds 1e-9 * {scale:.3e}",
            (d12 - d21).abs()
        )));
    }
    Ok(nalgebra::Matrix2::new(d11, 0.5 * (d12 + d21), 0.5 * (d12 + d21), d22))
}

/// Morse index of a symmetric `2x2` matrix (count of eigenvalues below
/// `-tol`).
pub fn morse_index_2x2(d: &nalgebra::Matrix2<f64>, tol: f64) -> usize {
    let tr = d[(0, 0)] + d[(1, 1)];
    let det = d[(0, 0)] * d[(1, 1)] - d[(0, 1)] * d[(1, 0)];
    let disc = (0.25 * tr * tr - det).max(0.0).sqrt();
    let (l1, l2) = (0.5 * tr - disc, 0.5 * tr + disc);
    [l1, l2].iter().filter(|&&v| v < -tol).count()
}

/// Collocation route to the pairing `⟨L₊⁻¹ phi, phi⟩`: kernel-projected
/// solve of `L₊ f = phi` against the analytic kernel `phi'`, then the
/// discrete pairing `⟨f, phi⟩`.
pub fn pairing_oracle(set: &OperatorSet) -> Result<f64> {
    let lp = set.l_plus();
    let rhs = set.phi().clone();
    let kernel = [set.dphi().clone()];
    let x = solve_on_complement(&lp, &rhs, &kernel)?;
    Ok(set.weight() * x.dot(&rhs))
}

/// Eigenvalues of the Hamiltonian problem together with instability
/// indicators.
#[derive(Debug, Clone)]
pub struct JlSpectrum {
    /// All `2n` eigenvalues of the discretized `J L`.
    pub eigenvalues: Vec<Complex<f64>>,
    /// Largest real part.
    pub max_re: f64,
    /// Count of eigenvalues with `Re λ > tol_unstable`.
    pub n_unstable: usize,
    /// `1e-5 *` the physical operator scale (see
    /// [`OperatorSet::potential_scale`]); reported, never hidden.
    pub tol_unstable: f64,
}

/// Relative factor defining the instability tolerance.
pub const UNSTABLE_TOL_REL: f64 = 1e-5;

/// Dense nonsymmetric eigensolve of `J L` (or the quintic block problem),
/// with Parlett-Reinsch balancing for conditioning.
pub fn jl_spectrum(op: &DiscretizedOperator, scale: f64) -> JlSpectrum {
    let mut m = op.matrix.clone();
    balance_in_place(&mut m);
    let eigenvalues: Vec<Complex<f64>> = m.complex_eigenvalues().iter().copied().collect();
    let tol_unstable = UNSTABLE_TOL_REL * scale;
    let max_re = eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let n_unstable = eigenvalues.iter().filter(|z| z.re > tol_unstable).count();
    JlSpectrum { eigenvalues, max_re, n_unstable, tol_unstable }
}

/// Parlett-Reinsch balancing (radix-2 similarity scaling); leaves the
/// spectrum untouched while shrinking the norm spread between rows and
/// columns.
fn balance_in_place(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    let radix: f64 = 2.0;
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut f = 1.0;
                let mut ct = c;
                let s = c + r;
                let mut g = r / radix;
                while ct < g {
                    f *= radix;
                    ct *= sqrdx;
                }
                g = r * radix;
                while ct > g {
                    f /= radix;
                    ct /= sqrdx;
                }
                if (ct + r) / f < 0.95 * s {
                    done = false;
                    let ginv = 1.0 / f;
                    for j in 0..n {
                        a[(i, j)] *= ginv;
                    }
                    for j in 0..n {
                        a[(j, i)] *= f;
                    }
                }
            }
        }
    }
}

/// Largest principal angle (radians) between the column spans of two
/// equal-dimension orthonormalizable bases.
pub fn subspace_angle(a: &[DVector<f64>], b: &[DVector<f64>]) -> f64 {
    let orth = |vs: &[DVector<f64>]| -> Vec<DVector<f64>> {
        let mut q: Vec<DVector<f64>> = Vec::new();
        for v in vs {
            let mut u = v.clone();
            for e in &q {
                let c = e.dot(&u);
                u.axpy(-c, e, 1.0);
            }
            let norm = u.norm();
            if norm > 1e-14 {
                q.push(u / norm);
            }
        }
        q
    };
    let qa = orth(a);
    let qb = orth(b);
    let k = qa.len().min(qb.len());
    let mut cross = DMatrix::zeros(qa.len(), qb.len());
    for (i, u) in qa.iter().enumerate() {
        for (j, v) in qb.iter().enumerate() {
            cross[(i, j)] = u.dot(v);
        }
    }
    let svd = cross.svd(false, false);
    let sigma_min = svd
        .singular_values
        .iter()
        .take(k)
        .fold(f64::INFINITY, |m, &s| m.min(s));
    sigma_min.clamp(-1.0, 1.0).acos()
}
