//! Ground-state solvers: dense diagonalization for small matrices, Lanczos
//! with full reorthogonalization above the cutoff, an even-parity projected
//! variant for quasi-degenerate cat regimes, and deterministic parameter
//! sweeps.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use thiserror::Error;

use crate::sparse::{CsrMatrix, Tridiagonal};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("matrix is not symmetric (deviation {deviation:.3e})")]
    NotSymmetric { deviation: f64 },

    #[error("no convergence after {iterations} iterations (best residual {best_residual:.3e})")]
    NoConvergence { iterations: usize, best_residual: f64 },

    #[error("parity map does not commute with the matrix (mismatch {deviation:.3e})")]
    ParityMismatch { deviation: f64 },

    #[error("parity map is not an involution on the basis")]
    InvalidParity,

    #[error("empty matrix")]
    EmptyMatrix,
}

/// Real symmetric linear operator; everything the solvers need from a
/// matrix.
pub trait SymOperator: Sync {
    fn dim(&self) -> usize;
    fn matvec(&self, x: &[f64], y: &mut [f64]);
    fn entry(&self, i: usize, j: usize) -> f64;
    fn for_each_entry(&self, f: &mut dyn FnMut(usize, usize, f64));

    fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        self.for_each_entry(&mut |i, j, v| m[(i, j)] = v);
        m
    }

    fn inf_norm(&self) -> f64 {
        let mut rows = vec![0.0f64; self.dim()];
        self.for_each_entry(&mut |i, _, v| rows[i] += v.abs());
        rows.into_iter().fold(0.0, f64::max)
    }
}

impl SymOperator for CsrMatrix {
    fn dim(&self) -> usize {
        CsrMatrix::dim(self)
    }
    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        CsrMatrix::matvec(self, x, y)
    }
    fn entry(&self, i: usize, j: usize) -> f64 {
        self.get(i, j)
    }
    fn for_each_entry(&self, f: &mut dyn FnMut(usize, usize, f64)) {
        CsrMatrix::for_each_entry(self, |i, j, v| f(i, j, v))
    }
    fn to_dense(&self) -> DMatrix<f64> {
        CsrMatrix::to_dense(self)
    }
    fn inf_norm(&self) -> f64 {
        CsrMatrix::inf_norm(self)
    }
}

impl SymOperator for Tridiagonal {
    fn dim(&self) -> usize {
        Tridiagonal::dim(self)
    }
    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        Tridiagonal::matvec(self, x, y)
    }
    fn entry(&self, i: usize, j: usize) -> f64 {
        self.get(i, j)
    }
    fn for_each_entry(&self, f: &mut dyn FnMut(usize, usize, f64)) {
        let n = self.dim();
        for i in 0..n {
            if i > 0 {
                f(i, i - 1, self.offdiag[i - 1]);
            }
            f(i, i, self.diag[i]);
            if i + 1 < n {
                f(i, i + 1, self.offdiag[i]);
            }
        }
    }
    fn to_dense(&self) -> DMatrix<f64> {
        Tridiagonal::to_dense(self)
    }
}

/// Dense symmetric matrix wrapper, mainly for solver cross-checks.
#[derive(Clone, Debug)]
pub struct DenseOp(pub DMatrix<f64>);

impl SymOperator for DenseOp {
    fn dim(&self) -> usize {
        self.0.nrows()
    }
    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let n = self.dim();
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += self.0[(i, j)] * x[j];
            }
            y[i] = acc;
        }
    }
    fn entry(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }
    fn for_each_entry(&self, f: &mut dyn FnMut(usize, usize, f64)) {
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let v = self.0[(i, j)];
                if v != 0.0 {
                    f(i, j, v);
                }
            }
        }
    }
    fn to_dense(&self) -> DMatrix<f64> {
        self.0.clone()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// Dimensions up to this bound are diagonalized densely.
    pub dense_cutoff: usize,
    /// Residual target, relative to max(1, ||H||_inf).
    pub tol: f64,
    /// Total Lanczos step budget across restarts.
    pub max_iter: usize,
    /// Krylov basis cap per restart pass.
    pub krylov_dim: usize,
    /// Quasi-degeneracy threshold: gap < threshold * max(1, |E0|).
    pub degeneracy_threshold: f64,
    /// Symmetry / parity-commutation tolerance, relative to
    /// max(1, ||H||_inf).
    pub symmetry_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            dense_cutoff: 512,
            tol: 1e-10,
            max_iter: 20_000,
            krylov_dim: 400,
            degeneracy_threshold: 1e-8,
            symmetry_tol: 1e-10,
        }
    }
}

/// Lowest eigenpair of a real symmetric matrix.
#[derive(Clone, Debug)]
pub struct GroundStateResult {
    pub energy: f64,
    /// Normalized amplitudes with the largest-magnitude entry made positive.
    pub amplitudes: Vec<f64>,
    /// Distance to the next eigenvalue (infinite for 1x1 systems; from the
    /// converged Krylov subspace on the iterative path).
    pub gap: f64,
    pub degenerate: bool,
    pub iterations: usize,
}

fn check_symmetric(op: &dyn SymOperator, opts: &SolverOptions) -> Result<(), SolveError> {
    let scale = op.inf_norm().max(1.0);
    let mut dev: f64 = 0.0;
    op.for_each_entry(&mut |i, j, v| {
        dev = dev.max((v - op.entry(j, i)).abs());
    });
    if dev > opts.symmetry_tol * scale {
        return Err(SolveError::NotSymmetric { deviation: dev });
    }
    Ok(())
}

fn normalize_sign(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    let mut best = 0usize;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v[best] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

struct LowestPair {
    e0: f64,
    e1: Option<f64>,
    v0: Vec<f64>,
    v1: Option<Vec<f64>>,
    iterations: usize,
}

fn dense_lowest_pair(op: &dyn SymOperator) -> LowestPair {
    let n = op.dim();
    let eig = op.to_dense().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let v0 = eig.eigenvectors.column(order[0]).iter().copied().collect();
    let (e1, v1) = if n > 1 {
        (
            Some(eig.eigenvalues[order[1]]),
            Some(eig.eigenvectors.column(order[1]).iter().copied().collect()),
        )
    } else {
        (None, None)
    };
    LowestPair { e0: eig.eigenvalues[order[0]], e1, v0, v1, iterations: 0 }
}

fn lanczos_lowest_pair(op: &dyn SymOperator, opts: &SolverOptions) -> Result<LowestPair, SolveError> {
    let n = op.dim();
    let scale = op.inf_norm().max(1.0);
    let tol_abs = opts.tol * scale;
    let cap = opts.krylov_dim.min(n).max(2);

    let mut start: Vec<f64> = vec![1.0 / (n as f64).sqrt(); n];
    let mut total_steps = 0usize;
    let mut best_residual = f64::INFINITY;

    while total_steps < opts.max_iter {
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(cap);
        let mut alpha: Vec<f64> = Vec::with_capacity(cap);
        let mut beta: Vec<f64> = Vec::with_capacity(cap);
        basis.push(start.clone());
        let mut breakdown = false;

        while basis.len() <= cap && total_steps < opts.max_iter {
            let j = basis.len() - 1;
            let mut w = vec![0.0; n];
            op.matvec(&basis[j], &mut w);
            total_steps += 1;
            let a: f64 = dot(&w, &basis[j]);
            alpha.push(a);
            for (k, v) in basis.iter().enumerate() {
                let c = if k == j {
                    a
                } else if k + 1 == j {
                    beta[k]
                } else {
                    0.0
                };
                if c != 0.0 {
                    axpy(&mut w, -c, v);
                }
            }
            // full reorthogonalization, twice
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(&w, v);
                    axpy(&mut w, -c, v);
                }
            }
            let b = dot(&w, &w).sqrt();

            let m = alpha.len();
            let check = b <= 1e-13 * scale || m == cap || m == n || m % 10 == 0;
            if check && m >= 1 {
                let (theta, s) = tridiag_eigen(&alpha, &beta);
                let mut x0 = combine(&basis, &s, 0);
                let res = residual(op, &mut x0, theta[0]);
                best_residual = best_residual.min(res);
                if res <= tol_abs || b <= 1e-13 * scale || m == n {
                    let (e1, v1) = if theta.len() > 1 {
                        (Some(theta[1]), Some(combine(&basis, &s, 1)))
                    } else {
                        (None, None)
                    };
                    return Ok(LowestPair { e0: theta[0], e1, v0: x0, v1, iterations: total_steps });
                }
            }
            if b <= 1e-13 * scale {
                breakdown = true;
                break;
            }
            if basis.len() == cap {
                break;
            }
            beta.push(b);
            let next: Vec<f64> = w.iter().map(|x| x / b).collect();
            basis.push(next);
        }

        // restart from the current best Ritz vector
        let (_, s) = tridiag_eigen(&alpha, &beta);
        start = combine(&basis, &s, 0);
        let norm = dot(&start, &start).sqrt();
        if norm == 0.0 || breakdown {
            break;
        }
        for x in start.iter_mut() {
            *x /= norm;
        }
    }
    Err(SolveError::NoConvergence { iterations: total_steps, best_residual })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn combine(basis: &[Vec<f64>], s: &DMatrix<f64>, col: usize) -> Vec<f64> {
    let n = basis[0].len();
    let mut out = vec![0.0; n];
    for (k, v) in basis.iter().enumerate().take(s.nrows()) {
        axpy(&mut out, s[(k, col)], v);
    }
    let norm = dot(&out, &out).sqrt();
    if norm > 0.0 {
        for x in out.iter_mut() {
            *x /= norm;
        }
    }
    out
}

fn residual(op: &dyn SymOperator, x: &mut [f64], theta: f64) -> f64 {
    let n = x.len();
    let mut hx = vec![0.0; n];
    op.matvec(x, &mut hx);
    (0..n).map(|i| (hx[i] - theta * x[i]).powi(2)).sum::<f64>().sqrt()
}

// eigenvalues (ascending) and eigenvectors of the Lanczos tridiagonal
fn tridiag_eigen(alpha: &[f64], beta: &[f64]) -> (Vec<f64>, DMatrix<f64>) {
    let m = alpha.len();
    let mut t = DMatrix::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m && i < beta.len() {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = t.symmetric_eigen();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let theta: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = DMatrix::zeros(m, m);
    for (c, &i) in order.iter().enumerate() {
        vecs.set_column(c, &eig.eigenvectors.column(i));
    }
    (theta, vecs)
}

fn lowest_pair(op: &dyn SymOperator, opts: &SolverOptions) -> Result<LowestPair, SolveError> {
    if op.dim() == 0 {
        return Err(SolveError::EmptyMatrix);
    }
    check_symmetric(op, opts)?;
    if op.dim() <= opts.dense_cutoff {
        Ok(dense_lowest_pair(op))
    } else {
        lanczos_lowest_pair(op, opts)
    }
}

fn result_from_pair(mut pair: LowestPair, opts: &SolverOptions) -> GroundStateResult {
    normalize_sign(&mut pair.v0);
    let gap = pair.e1.map_or(f64::INFINITY, |e1| e1 - pair.e0);
    let degenerate = gap < opts.degeneracy_threshold * pair.e0.abs().max(1.0);
    GroundStateResult {
        energy: pair.e0,
        amplitudes: pair.v0,
        gap,
        degenerate,
        iterations: pair.iterations,
    }
}

/// Lowest eigenpair of a real symmetric operator.
pub fn ground_state(op: &dyn SymOperator, opts: &SolverOptions) -> Result<GroundStateResult, SolveError> {
    let pair = lowest_pair(op, opts)?;
    Ok(result_from_pair(pair, opts))
}

/// Ground state that resolves quasi-degenerate doublets into the even
/// combination under the given basis involution. Away from degeneracy this
/// is identical to [`ground_state`].
pub fn ground_state_symmetrized(
    op: &dyn SymOperator,
    parity: &[usize],
    opts: &SolverOptions,
) -> Result<GroundStateResult, SolveError> {
    let n = op.dim();
    if parity.len() != n || (0..n).any(|i| parity[i] >= n || parity[parity[i]] != i) {
        return Err(SolveError::InvalidParity);
    }
    let scale = op.inf_norm().max(1.0);
    let mut dev: f64 = 0.0;
    op.for_each_entry(&mut |i, j, v| {
        dev = dev.max((op.entry(parity[i], parity[j]) - v).abs());
    });
    if dev > opts.symmetry_tol * scale {
        return Err(SolveError::ParityMismatch { deviation: dev });
    }

    let pair = lowest_pair(op, opts)?;
    let gap = pair.e1.map_or(f64::INFINITY, |e1| e1 - pair.e0);
    let degenerate = gap < opts.degeneracy_threshold * pair.e0.abs().max(1.0);
    if !degenerate {
        return Ok(result_from_pair(pair, opts));
    }

    let even_part = |v: &[f64]| -> Vec<f64> {
        let mut e: Vec<f64> = v.to_vec();
        for i in 0..n {
            e[i] += v[parity[i]];
        }
        e
    };
    let e0 = even_part(&pair.v0);
    let e1 = pair.v1.as_deref().map(even_part);
    let n0 = dot(&e0, &e0);
    let n1 = e1.as_ref().map_or(0.0, |v| dot(v, v));
    let mut chosen = if n1 > n0 { e1.unwrap() } else { e0 };
    if dot(&chosen, &chosen) < 1e-12 {
        // both quasi-degenerate states are parity-odd; keep the plain ground
        return Ok(result_from_pair(pair, opts));
    }
    normalize_sign(&mut chosen);
    let energy = rayleigh_quotient(op, &chosen);
    Ok(GroundStateResult {
        energy,
        amplitudes: chosen,
        gap,
        degenerate: true,
        iterations: pair.iterations,
    })
}

pub fn rayleigh_quotient(op: &dyn SymOperator, x: &[f64]) -> f64 {
    let mut hx = vec![0.0; x.len()];
    op.matvec(x, &mut hx);
    dot(x, &hx) / dot(x, x)
}

/// Evaluate one closure per grid point, in parallel, preserving grid order.
/// Per-point failures are captured in the corresponding row.
pub fn sweep<P: Sync, R: Send, E: Send>(
    points: &[P],
    eval: impl Fn(&P) -> Result<R, E> + Sync + Send,
) -> Vec<Result<R, E>> {
    points.par_iter().map(eval).collect()
}

/// Reversal involution k -> N-k on a line basis.
pub fn reversal_parity(dim: usize) -> Vec<usize> {
    (0..dim).map(|i| dim - 1 - i).collect()
}

#[allow(dead_code)]
fn as_dvector(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_hubbard2, build_reduced, ReducedModelParams, ReducedVariant};
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn opts() -> SolverOptions {
        SolverOptions::default()
    }

    #[test]
    fn one_by_one_matrix() {
        let t = Tridiagonal::new(vec![3.25], vec![]);
        let r = ground_state(&t, &opts()).unwrap();
        assert_eq!(r.energy, 3.25);
        assert_eq!(r.amplitudes, vec![1.0]);
        assert!(r.gap.is_infinite());
    }

    #[test]
    fn reduced_n2_ground_energy() {
        let p = ReducedModelParams { gamma1: 1.0, gamma2: -1.0, n: 2, variant: ReducedVariant::Symmetric };
        let t = build_reduced(&p).unwrap();
        let r = ground_state(&t, &opts()).unwrap();
        assert_abs_diff_eq!(r.energy, -2.0 * 2.0f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn hubbard_free_ground_is_binomial() {
        let t = build_hubbard2(1.0, 0.0, 2);
        let r = ground_state(&t, &opts()).unwrap();
        assert_abs_diff_eq!(r.energy, -2.0, epsilon = 1e-12);
        let expect = [0.5, std::f64::consts::FRAC_1_SQRT_2, 0.5];
        for (a, e) in r.amplitudes.iter().zip(expect) {
            assert_abs_diff_eq!(*a, e, epsilon = 1e-12);
        }
    }

    #[test]
    fn non_symmetric_is_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(matches!(
            ground_state(&DenseOp(m), &opts()),
            Err(SolveError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn dense_and_iterative_agree_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..20 {
            let n = rng.gen_range(100..=600);
            let mut m = DMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let v = rng.gen_range(-1.0..1.0);
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
            let op = DenseOp(m);
            let dense = ground_state(&op, &SolverOptions { dense_cutoff: usize::MAX, ..opts() }).unwrap();
            let iter = ground_state(&op, &SolverOptions { dense_cutoff: 0, ..opts() }).unwrap();
            assert!(
                (dense.energy - iter.energy).abs() <= 1e-9,
                "trial {trial}: {} vs {}",
                dense.energy,
                iter.energy
            );
            let overlap: f64 = dense
                .amplitudes
                .iter()
                .zip(&iter.amplitudes)
                .map(|(a, b)| a * b)
                .sum();
            assert!(overlap.abs() >= 1.0 - 1e-9, "trial {trial}: overlap {overlap}");
        }
    }

    #[test]
    fn variational_bound_holds() {
        let p = ReducedModelParams { gamma1: 1.0, gamma2: 0.3, n: 20, variant: ReducedVariant::Symmetric };
        let t = build_reduced(&p).unwrap();
        let r = ground_state(&t, &opts()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let trial: Vec<f64> = (0..t.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            assert!(r.energy <= rayleigh_quotient(&t, &trial) + 1e-12);
        }
    }

    #[test]
    fn repeated_solves_are_bit_identical() {
        let p = ReducedModelParams { gamma1: 1.0, gamma2: 0.1, n: 100, variant: ReducedVariant::Symmetric };
        let t = build_reduced(&p).unwrap();
        let a = ground_state(&t, &opts()).unwrap();
        let b = ground_state(&t, &opts()).unwrap();
        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
        for (x, y) in a.amplitudes.iter().zip(&b.amplitudes) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        let big = build_hubbard2(1.0, 0.01, 600);
        let a = ground_state(&big, &opts()).unwrap();
        let b = ground_state(&big, &opts()).unwrap();
        assert_eq!(a.energy.to_bits(), b.energy.to_bits());
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn symmetrized_resolves_exact_degeneracy() {
        // attractive Hubbard with t = 0: corner Fock doublet
        let t = build_hubbard2(0.0, -1.0, 2);
        let parity = reversal_parity(3);
        let r = ground_state_symmetrized(&t, &parity, &opts()).unwrap();
        assert!(r.degenerate);
        let inv = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(r.amplitudes[0], inv, epsilon = 1e-10);
        assert_abs_diff_eq!(r.amplitudes[2], inv, epsilon = 1e-10);
        assert_abs_diff_eq!(r.amplitudes[1], 0.0, epsilon = 1e-10);
    }

    #[test]
    fn symmetrized_cat_corner_weights() {
        let p = ReducedModelParams { gamma1: 1.0, gamma2: 0.1, n: 100, variant: ReducedVariant::Symmetric };
        let t = build_reduced(&p).unwrap();
        let r = ground_state_symmetrized(&t, &reversal_parity(t.dim()), &opts()).unwrap();
        assert!(r.degenerate);
        let w0 = r.amplitudes[0].powi(2);
        let wn = r.amplitudes[100].powi(2);
        // frozen from an independent LAPACK run of the same matrix
        assert_abs_diff_eq!(w0, 0.289838739488, epsilon = 1e-6);
        assert_abs_diff_eq!(w0 + wn, 0.579677478976, epsilon = 1e-6);
    }

    #[test]
    fn symmetrized_matches_plain_when_gapped() {
        let p = ReducedModelParams { gamma1: 1.0, gamma2: -0.5, n: 40, variant: ReducedVariant::Symmetric };
        let t = build_reduced(&p).unwrap();
        let plain = ground_state(&t, &opts()).unwrap();
        let sym = ground_state_symmetrized(&t, &reversal_parity(t.dim()), &opts()).unwrap();
        assert!(!sym.degenerate);
        assert_eq!(plain.energy.to_bits(), sym.energy.to_bits());
        assert_eq!(plain.amplitudes, sym.amplitudes);
    }

    #[test]
    fn non_commuting_parity_is_an_error() {
        let t = Tridiagonal::new(vec![0.0, 1.0, 2.0], vec![0.5, 0.5]);
        let parity = reversal_parity(3);
        assert!(matches!(
            ground_state_symmetrized(&t, &parity, &opts()),
            Err(SolveError::ParityMismatch { .. })
        ));
    }

    #[test]
    fn sweep_preserves_order_and_captures_failures() {
        let grid = [2.0, -1.0, 2.0];
        let rows = sweep(&grid, |&g| {
            if g < 0.0 {
                Err(SolveError::EmptyMatrix)
            } else {
                Ok(g * 10.0)
            }
        });
        assert_eq!(rows.len(), 3);
        assert_eq!(*rows[0].as_ref().unwrap(), 20.0);
        assert!(rows[1].is_err());
        assert_eq!(*rows[2].as_ref().unwrap(), 20.0);
    }

    #[test]
    fn sweep_single_point_equals_direct_solve() {
        let p = ReducedModelParams { gamma1: 1.0, gamma2: -1.0, n: 2, variant: ReducedVariant::Symmetric };
        let t = build_reduced(&p).unwrap();
        let direct = ground_state(&t, &opts()).unwrap();
        let rows = sweep(&[()], |_| ground_state(&t, &opts()).map(|r| r.energy));
        assert_eq!(rows[0].as_ref().unwrap().to_bits(), direct.energy.to_bits());
    }
}
