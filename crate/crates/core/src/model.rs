//! Hamiltonian builders: the full two-species spin-1 model, the four-mode
//! reduced models, and the two-site Hubbard benchmark.
//!
//! Energies are dimensionless; the caller chooses the unit (the reduced
//! models are conventionally quoted in units of |Γ₁|, the full model in units
//! of the species-A intraspecies coupling).

use thiserror::Error;

use crate::fock::{Mode, Monomial, OperatorExpr};
use crate::sparse::Tridiagonal;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("reduced model requires even N, got {0}")]
    OddParticleNumber(u32),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("reduced mass must be positive, got {0}")]
    NonPositiveMass(f64),
}

/// Interaction strengths derivable from the three s-wave scattering lengths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Couplings {
    pub g0: f64,
    pub g1: f64,
    pub g2: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

const HBAR: f64 = 1.054_571_817e-34; // J s

/// Channel couplings g_F = 2*pi*hbar^2 a_F / mu and their linear
/// combinations alpha = (g1+g2)/2, beta = (g1-g2)/2,
/// gamma = (2 g0 + g2 - 3 g1)/2.
pub fn coupling_constants(a0: f64, a1: f64, a2: f64, mu: f64) -> Result<Couplings, ModelError> {
    if mu <= 0.0 {
        return Err(ModelError::NonPositiveMass(mu));
    }
    let k = 2.0 * std::f64::consts::PI * HBAR * HBAR / mu;
    let (g0, g1, g2) = (k * a0, k * a1, k * a2);
    Ok(Couplings {
        g0,
        g1,
        g2,
        alpha: (g1 + g2) / 2.0,
        beta: (g1 - g2) / 2.0,
        gamma: (2.0 * g0 + g2 - 3.0 * g1) / 2.0,
    })
}

/// Which printed convention fixes the second exchange coupling: the
/// half-weighted (g2-g1)/2 form, or the unhalved difference that matches the
/// quoted Na-Rb ratio of about 1.9.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaConvention {
    Half,
    NoHalf,
}

/// The two reduced-model couplings from the channel constants:
/// Γ₁ = c₁₂ (g1 - g0) and Γ₂ = c₁₂ (g2 - g1)/2 (or without the half).
pub fn exchange_couplings(g: &Couplings, c12: f64, conv: GammaConvention) -> (f64, f64) {
    let gamma1 = c12 * (g.g1 - g.g0);
    let gamma2 = match conv {
        GammaConvention::Half => c12 * (g.g2 - g.g1) / 2.0,
        GammaConvention::NoHalf => c12 * (g.g2 - g.g1),
    };
    (gamma1, gamma2)
}

// ---------------------------------------------------------------------------
// angular momentum and pair operators
// ---------------------------------------------------------------------------

fn modes_of(species_a: bool) -> (Mode, Mode, Mode) {
    if species_a {
        (Mode::AP1, Mode::A0, Mode::AM1)
    } else {
        (Mode::BP1, Mode::B0, Mode::BM1)
    }
}

/// Spin-1 raising operator L+ = sqrt(2)(a₊₁†a₀ + a₀†a₋₁) for one species.
pub fn l_plus(species_a: bool) -> OperatorExpr {
    let (p, z, m) = modes_of(species_a);
    let r2 = 2.0f64.sqrt();
    OperatorExpr::term(r2, vec![p], vec![z]).add(OperatorExpr::term(r2, vec![z], vec![m]))
}

/// L_z = n₊₁ - n₋₁ for one species.
pub fn l_z(species_a: bool) -> OperatorExpr {
    let (p, _, m) = modes_of(species_a);
    OperatorExpr::number(p).add(OperatorExpr::number(m).scale(-1.0))
}

/// Total spin squared L² = L_z² + L_z + L₋L₊ for one species, in normal
/// order.
pub fn l_squared(species_a: bool) -> OperatorExpr {
    let lz = l_z(species_a);
    let lp = l_plus(species_a);
    let lm = lp.adjoint();
    lz.multiply(&lz).add(lz).add(lm.multiply(&lp)).canonicalized()
}

/// L₁·L₂ = L₁z L₂z + (L₁₊L₂₋ + L₁₋L₂₊)/2 across the two species.
pub fn l1_dot_l2() -> OperatorExpr {
    let l1z = l_z(true);
    let l2z = l_z(false);
    let l1p = l_plus(true);
    let l1m = l1p.adjoint();
    let l2p = l_plus(false);
    let l2m = l2p.adjoint();
    l1z.multiply(&l2z)
        .add(l1p.multiply(&l2m).scale(0.5))
        .add(l1m.multiply(&l2p).scale(0.5))
        .canonicalized()
}

/// Interspecies singlet-pair creation operator
/// (a₊₁†b₋₁† - a₀†b₀† + a₋₁†b₊₁†)/sqrt(3).
pub fn theta_dagger() -> OperatorExpr {
    let r3 = 3.0f64.sqrt();
    OperatorExpr::term(1.0 / r3, vec![Mode::AP1, Mode::BM1], vec![])
        .add(OperatorExpr::term(-1.0 / r3, vec![Mode::A0, Mode::B0], vec![]))
        .add(OperatorExpr::term(1.0 / r3, vec![Mode::AM1, Mode::BP1], vec![]))
}

/// The singlet projector weight Θ†Θ.
pub fn theta_dagger_theta() -> OperatorExpr {
    let td = theta_dagger();
    td.multiply(&td.adjoint()).canonicalized()
}

fn zeeman_expr(species_a: bool, p: f64, q: f64) -> OperatorExpr {
    let (plus, _, minus) = modes_of(species_a);
    OperatorExpr::number(plus)
        .scale(p + q)
        .add(OperatorExpr::number(minus).scale(q - p))
}

// ---------------------------------------------------------------------------
// full model
// ---------------------------------------------------------------------------

/// All couplings of the two-species Hamiltonian, with Zeeman terms explicit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FullModelParams {
    pub c1_beta1: f64,
    pub c2_beta2: f64,
    pub c12_beta: f64,
    pub c12_gamma: f64,
    /// Interspecies normalization count; defaults to sqrt(N1 N2).
    pub n12: Option<f64>,
    pub p1: f64,
    pub q1: f64,
    pub p2: f64,
    pub q2: f64,
    pub n1: u32,
    pub n2: u32,
}

impl FullModelParams {
    pub fn symmetric_free(n: u32) -> Self {
        Self {
            c1_beta1: 0.0,
            c2_beta2: 0.0,
            c12_beta: 0.0,
            c12_gamma: 0.0,
            n12: None,
            p1: 0.0,
            q1: 0.0,
            p2: 0.0,
            q2: 0.0,
            n1: n,
            n2: n,
        }
    }

    fn n12_value(&self) -> Result<f64, ModelError> {
        match self.n12 {
            Some(v) if v > 0.0 => Ok(v),
            Some(v) => Err(ModelError::InvalidParams(format!("N12 must be positive, got {v}"))),
            None => {
                let v = ((self.n1 as f64) * (self.n2 as f64)).sqrt();
                if v > 0.0 {
                    Ok(v)
                } else {
                    Err(ModelError::InvalidParams(
                        "N12 defaults to sqrt(N1 N2) which vanishes here; set it explicitly".into(),
                    ))
                }
            }
        }
    }
}

/// Full Hamiltonian H₁ + H₂ + H₁₂ with the interspecies part built from the
/// operator forms L₁·L₂ and Θ†Θ.
pub fn build_full_hamiltonian(params: &FullModelParams) -> Result<OperatorExpr, ModelError> {
    let mut h = OperatorExpr::zero();
    if params.c1_beta1 != 0.0 {
        if params.n1 == 0 {
            return Err(ModelError::InvalidParams("c1_beta1 set but N1 = 0".into()));
        }
        h = h.add(l_squared(true).scale(params.c1_beta1 / params.n1 as f64));
    }
    if params.c2_beta2 != 0.0 {
        if params.n2 == 0 {
            return Err(ModelError::InvalidParams("c2_beta2 set but N2 = 0".into()));
        }
        h = h.add(l_squared(false).scale(params.c2_beta2 / params.n2 as f64));
    }
    if params.p1 != 0.0 || params.q1 != 0.0 {
        h = h.add(zeeman_expr(true, params.p1, params.q1));
    }
    if params.p2 != 0.0 || params.q2 != 0.0 {
        h = h.add(zeeman_expr(false, params.p2, params.q2));
    }
    if params.c12_beta != 0.0 || params.c12_gamma != 0.0 {
        let n12 = params.n12_value()?;
        if params.c12_beta != 0.0 {
            h = h.add(l1_dot_l2().scale(params.c12_beta / n12));
        }
        if params.c12_gamma != 0.0 {
            h = h.add(theta_dagger_theta().scale(params.c12_gamma / n12));
        }
    }
    Ok(h.canonicalized())
}

/// Expanded interspecies coupling written directly in density and exchange
/// monomials, kept verbatim for diagnostic comparison with the operator
/// build (including the lone n'₊₁ density term of the printed expansion;
/// see [`h12_mapping_report`]).
pub fn build_h12_expanded(params: &FullModelParams) -> Result<OperatorExpr, ModelError> {
    if params.c12_beta == 0.0 && params.c12_gamma == 0.0 {
        return Ok(OperatorExpr::zero());
    }
    let n12 = params.n12_value()?;
    let b = params.c12_beta / n12;
    let g = params.c12_gamma / n12;
    Ok(h12_expanded_components(b, g).canonicalized())
}

fn density(m1: Mode, m2: Mode) -> OperatorExpr {
    OperatorExpr::term(1.0, vec![m1, m2], vec![m1, m2])
}

fn exchange_pair(c: f64, a_up: Mode, a_dn: Mode, b_up: Mode, b_dn: Mode) -> OperatorExpr {
    // c (a_up† a_dn b_up† b_dn + h.c.)
    let fwd = OperatorExpr::term(c, vec![a_up, b_up], vec![a_dn, b_dn]);
    let rev = fwd.adjoint();
    fwd.add(rev)
}

fn h12_expanded_components(b: f64, g: f64) -> OperatorExpr {
    use Mode::*;
    density(AP1, BP1)
        .scale(b)
        .add(density(AM1, BM1).scale(b))
        .add(density(AP1, BM1).scale(-b))
        .add(density(AM1, BP1).scale(-b))
        .add(density(A0, B0).scale(g))
        .add(OperatorExpr::number(BP1).scale(g))
        .add(density(AM1, BP1).scale(g))
        .add(exchange_pair(b, AM1, A0, B0, BM1))
        .add(exchange_pair(b, AP1, A0, B0, BP1))
        .add(exchange_pair(b - g, AM1, A0, BP1, B0))
        .add(exchange_pair(b - g, AP1, A0, BM1, B0))
        .add(exchange_pair(g, AP1, AM1, BM1, BP1))
}

/// Least-squares comparison of the expanded interspecies form against the
/// operator-built one on a small sector. For each operator-built component
/// (the beta part and the gamma part) the report carries the best-fit
/// (beta, gamma) weights of the expanded components and the relative
/// Frobenius residual. Diagnostic only; the two printed forms do not agree
/// term for term.
#[derive(Clone, Copy, Debug)]
pub struct H12MappingReport {
    pub beta_weights: (f64, f64),
    pub beta_residual: f64,
    pub gamma_weights: (f64, f64),
    pub gamma_residual: f64,
}

pub fn h12_mapping_report(n: u32) -> Result<H12MappingReport, crate::fock::FockError> {
    use crate::fock::{build_matrix, enumerate_sector};
    let basis = enumerate_sector(n, n, 0)?;
    let flat = |e: &OperatorExpr| -> Vec<f64> {
        let m = build_matrix(e, &basis).unwrap().to_dense();
        m.iter().copied().collect()
    };
    let can_beta = flat(&l1_dot_l2());
    let can_gamma = flat(&theta_dagger_theta());
    let exp_beta = flat(&h12_expanded_components(1.0, 0.0).canonicalized());
    let exp_gamma = flat(&h12_expanded_components(0.0, 1.0).canonicalized());

    let dot = |x: &[f64], y: &[f64]| -> f64 { x.iter().zip(y).map(|(a, b)| a * b).sum() };
    let fit = |target: &[f64]| -> ((f64, f64), f64) {
        // 2x2 normal equations over span{exp_beta, exp_gamma}
        let (a11, a12, a22) = (dot(&exp_beta, &exp_beta), dot(&exp_beta, &exp_gamma), dot(&exp_gamma, &exp_gamma));
        let (r1, r2) = (dot(&exp_beta, target), dot(&exp_gamma, target));
        let det = a11 * a22 - a12 * a12;
        let (x, y) = if det.abs() < 1e-30 {
            (0.0, 0.0)
        } else {
            ((a22 * r1 - a12 * r2) / det, (a11 * r2 - a12 * r1) / det)
        };
        let mut res = 0.0;
        let mut tnorm = 0.0;
        for i in 0..target.len() {
            let d = target[i] - x * exp_beta[i] - y * exp_gamma[i];
            res += d * d;
            tnorm += target[i] * target[i];
        }
        ((x, y), (res / tnorm.max(1e-300)).sqrt())
    };
    let (beta_weights, beta_residual) = fit(&can_beta);
    let (gamma_weights, gamma_residual) = fit(&can_gamma);
    Ok(H12MappingReport { beta_weights, beta_residual, gamma_weights, gamma_residual })
}

// ---------------------------------------------------------------------------
// reduced four-mode models
// ---------------------------------------------------------------------------

/// Which four-mode reduced Hamiltonian to build: the symmetric form used for
/// the phase analysis, or the variant carrying an extra pair-density term on
/// one corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReducedVariant {
    Symmetric,
    ExtraDensity,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedModelParams {
    pub gamma1: f64,
    pub gamma2: f64,
    pub n: u32,
    pub variant: ReducedVariant,
}

/// Tridiagonal reduced Hamiltonian over the pair index k = 0..N:
/// diag(k) = -(Γ₁+Γ₂)(k² + (N-k)²), offdiag(k, k+1) = Γ₁ (k+1)(N-k);
/// the `ExtraDensity` variant subtracts another Γ₂ k² on the diagonal.
pub fn build_reduced(params: &ReducedModelParams) -> Result<Tridiagonal, ModelError> {
    if params.n % 2 != 0 {
        return Err(ModelError::OddParticleNumber(params.n));
    }
    let n = params.n as usize;
    let g1 = params.gamma1;
    let g12 = params.gamma1 + params.gamma2;
    let mut diag = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let kf = k as f64;
        let nf = (n - k) as f64;
        let mut d = -g12 * (kf * kf + nf * nf);
        if params.variant == ReducedVariant::ExtraDensity {
            d -= params.gamma2 * kf * kf;
        }
        diag.push(d);
    }
    let mut off = Vec::with_capacity(n);
    for k in 0..n {
        off.push(g1 * (k as f64 + 1.0) * (n - k) as f64);
    }
    Ok(Tridiagonal::new(diag, off))
}

/// The reduced model as an operator expression on the four live modes,
/// used as an independent route for cross-checking the tridiagonal build.
pub fn reduced_operator_expr(params: &ReducedModelParams) -> OperatorExpr {
    use Mode::*;
    let g1 = params.gamma1;
    let g12 = params.gamma1 + params.gamma2;
    let hop = OperatorExpr {
        terms: vec![
            (g1, Monomial::new(vec![AM1, BP1], vec![A0, B0])),
            (g1, Monomial::new(vec![A0, B0], vec![AM1, BP1])),
        ],
    };
    let mut h = hop
        .add(density(AM1, BP1).scale(-g12))
        .add(density(A0, B0).scale(-g12));
    if params.variant == ReducedVariant::ExtraDensity {
        h = h.add(density(AM1, BP1).scale(-params.gamma2));
    }
    h
}

/// Add a symmetry-breaking diagonal bias epsilon * k, used to pin one corner
/// deterministically in the degenerate corner-Fock regime.
pub fn with_corner_bias(tri: &Tridiagonal, epsilon: f64) -> Tridiagonal {
    let mut diag = tri.diag.clone();
    for (k, d) in diag.iter_mut().enumerate() {
        *d += epsilon * k as f64;
    }
    Tridiagonal::new(diag, tri.offdiag.clone())
}

// ---------------------------------------------------------------------------
// two-site Hubbard benchmark
// ---------------------------------------------------------------------------

/// Two-site Bose-Hubbard H = -t(a†b + b†a) + U[n_a(n_a-1) + n_b(n_b-1)] over
/// the Fock line |n_a, N-n_a>. Independent oracle for profile shapes: the
/// U = 0 ground state has an exact binomial amplitude distribution.
pub fn build_hubbard2(t: f64, u: f64, n: u32) -> Tridiagonal {
    let n = n as usize;
    let mut diag = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let a = k as f64;
        let b = (n - k) as f64;
        diag.push(u * (a * (a - 1.0) + b * (b - 1.0)));
    }
    let mut off = Vec::with_capacity(n);
    for k in 0..n {
        off.push(-t * ((k as f64 + 1.0) * (n - k) as f64).sqrt());
    }
    Tridiagonal::new(diag, off)
}
