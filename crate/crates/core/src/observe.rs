//! Observables on ground-state amplitude vectors: per-mode number statistics,
//! amplitude profiles, entanglement entropy across the species cut, the
//! corner (GHZ) score, profile classification, and overlaps with analytic
//! reference states.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fock::{ReducedBasis, SectorBasis};

#[derive(Debug, Error)]
pub enum ObserveError {
    #[error("state is not normalized (|norm^2 - 1| = {deviation:.3e})")]
    Unnormalized { deviation: f64 },

    #[error("state length {state} does not match basis size {basis}")]
    LengthMismatch { state: usize, basis: usize },

    #[error("reference incompatible with basis: {0}")]
    BasisMismatch(String),

    #[error("complex phase {phi} unsupported; real amplitudes require phi = 0 or pi")]
    UnsupportedPhase { phi: f64 },
}

fn check_normalized(state: &[f64]) -> Result<(), ObserveError> {
    let norm2: f64 = state.iter().map(|x| x * x).sum();
    let deviation = (norm2 - 1.0).abs();
    if deviation > 1e-9 {
        return Err(ObserveError::Unnormalized { deviation });
    }
    Ok(())
}

/// Anything that maps basis positions to six-mode occupations.
pub trait OccupationBasis {
    fn size(&self) -> usize;
    fn occupations(&self, i: usize) -> [u32; 6];
    fn particle_numbers(&self) -> (u32, u32);
}

impl OccupationBasis for SectorBasis {
    fn size(&self) -> usize {
        self.len()
    }
    fn occupations(&self, i: usize) -> [u32; 6] {
        self.state(i).0
    }
    fn particle_numbers(&self) -> (u32, u32) {
        (self.n1, self.n2)
    }
}

impl OccupationBasis for ReducedBasis {
    fn size(&self) -> usize {
        self.len()
    }
    fn occupations(&self, i: usize) -> [u32; 6] {
        ReducedBasis::occupations(self, i).0
    }
    fn particle_numbers(&self) -> (u32, u32) {
        (self.n, self.n)
    }
}

/// Mean and fluctuation of each mode occupation.
#[derive(Clone, Copy, Debug)]
pub struct ModeStats {
    pub mean: [f64; 6],
    pub fluct: [f64; 6],
}

pub fn number_stats(state: &[f64], basis: &dyn OccupationBasis) -> Result<ModeStats, ObserveError> {
    if state.len() != basis.size() {
        return Err(ObserveError::LengthMismatch { state: state.len(), basis: basis.size() });
    }
    check_normalized(state)?;
    let mut mean = [0.0f64; 6];
    let mut mean_sq = [0.0f64; 6];
    for (i, amp) in state.iter().enumerate() {
        let w = amp * amp;
        if w == 0.0 {
            continue;
        }
        let occ = basis.occupations(i);
        for m in 0..6 {
            let n = occ[m] as f64;
            mean[m] += w * n;
            mean_sq[m] += w * n * n;
        }
    }
    let mut fluct = [0.0f64; 6];
    for m in 0..6 {
        fluct[m] = (mean_sq[m] - mean[m] * mean[m]).max(0.0).sqrt();
    }
    Ok(ModeStats { mean, fluct })
}

/// Probability profile with integer labels: the reduced-index label
/// 2(2k - N) on the pair line, or the magnetization difference m1 - m2 for
/// full sectors.
#[derive(Clone, Debug)]
pub struct Profile {
    pub weights: Vec<f64>,
    pub labels: Vec<i64>,
}

impl Profile {
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

pub fn profile_reduced(state: &[f64], basis: &ReducedBasis) -> Result<Profile, ObserveError> {
    if state.len() != basis.len() {
        return Err(ObserveError::LengthMismatch { state: state.len(), basis: basis.len() });
    }
    check_normalized(state)?;
    let weights: Vec<f64> = state.iter().map(|a| a * a).collect();
    let labels = (0..state.len()).map(|k| basis.m_label(k)).collect();
    Ok(Profile { weights, labels })
}

/// Group the sector state by the species-magnetization difference m1 - m2.
pub fn profile_sector(state: &[f64], basis: &SectorBasis) -> Result<Profile, ObserveError> {
    if state.len() != basis.len() {
        return Err(ObserveError::LengthMismatch { state: state.len(), basis: basis.len() });
    }
    check_normalized(state)?;
    let mut buckets: BTreeMap<i64, f64> = BTreeMap::new();
    for (i, amp) in state.iter().enumerate() {
        let (m1, m2) = basis.state(i).magnetizations();
        *buckets.entry(m1 - m2).or_insert(0.0) += amp * amp;
    }
    let labels: Vec<i64> = buckets.keys().copied().collect();
    let weights: Vec<f64> = buckets.values().copied().collect();
    Ok(Profile { weights, labels })
}

/// Von Neumann entropy data for a species cut.
#[derive(Clone, Debug)]
pub struct EntropyReport {
    /// Base-2 entropy of the reduced density operator.
    pub raw_bits: f64,
    /// Raw entropy divided by log2 of the Schmidt-rank bound of the sector.
    pub normalized: f64,
    /// Non-negative eigenvalues of the reduced density operator, descending,
    /// renormalized to unit sum.
    pub schmidt: Vec<f64>,
}

const SCHMIDT_CLIP: f64 = 1e-14;

fn entropy_from_schmidt(mut schmidt: Vec<f64>, rank_bound: usize) -> EntropyReport {
    for v in schmidt.iter_mut() {
        if *v < SCHMIDT_CLIP {
            *v = 0.0;
        }
    }
    let total: f64 = schmidt.iter().sum();
    if total > 0.0 {
        for v in schmidt.iter_mut() {
            *v /= total;
        }
    }
    schmidt.sort_by(|a, b| b.total_cmp(a));
    let raw_bits = -schmidt.iter().filter(|&&v| v > 0.0).map(|v| v * v.log2()).sum::<f64>();
    let normalized = if rank_bound > 1 { raw_bits / (rank_bound as f64).log2() } else { 0.0 };
    EntropyReport { raw_bits, normalized, schmidt }
}

/// On the reduced pair line the state is already written in Schmidt form:
/// the weights are the reduced-density eigenvalues, and the rank bound is
/// N + 1.
pub fn entropy_reduced(state: &[f64], basis: &ReducedBasis) -> Result<EntropyReport, ObserveError> {
    if state.len() != basis.len() {
        return Err(ObserveError::LengthMismatch { state: state.len(), basis: basis.len() });
    }
    check_normalized(state)?;
    let weights: Vec<f64> = state.iter().map(|a| a * a).collect();
    Ok(entropy_from_schmidt(weights, basis.len()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpeciesCut {
    A,
    B,
}

/// Entropy of one species after tracing out the other. The sector
/// constraint makes the reduced density operator block diagonal in the kept
/// species' magnetization; assembly walks the basis grouped by the traced
/// species' occupations.
pub fn entropy_sector(
    state: &[f64],
    basis: &SectorBasis,
    cut: SpeciesCut,
) -> Result<EntropyReport, ObserveError> {
    if state.len() != basis.len() {
        return Err(ObserveError::LengthMismatch { state: state.len(), basis: basis.len() });
    }
    check_normalized(state)?;

    let part = |i: usize| -> ([u32; 3], [u32; 3]) {
        let o = basis.state(i).0;
        (([o[0], o[1], o[2]]), ([o[3], o[4], o[5]]))
    };
    let mut kept_index: BTreeMap<[u32; 3], usize> = BTreeMap::new();
    let mut traced_groups: BTreeMap<[u32; 3], Vec<(usize, f64)>> = BTreeMap::new();
    for i in 0..basis.len() {
        let (a, b) = part(i);
        let (kept, traced) = match cut {
            SpeciesCut::A => (a, b),
            SpeciesCut::B => (b, a),
        };
        let next = kept_index.len();
        let ki = *kept_index.entry(kept).or_insert(next);
        traced_groups.entry(traced).or_default().push((ki, state[i]));
    }
    let dim = kept_index.len();
    let rank_bound = dim.min(traced_groups.len());
    let mut rho = DMatrix::<f64>::zeros(dim, dim);
    for group in traced_groups.values() {
        for &(i, ai) in group {
            for &(j, aj) in group {
                rho[(i, j)] += ai * aj;
            }
        }
    }
    let eig = rho.symmetric_eigen();
    let schmidt: Vec<f64> = eig.eigenvalues.iter().map(|&v| v.max(0.0)).collect();
    Ok(entropy_from_schmidt(schmidt, rank_bound))
}

/// Corner score 2 min(rho_LL, rho_RR, |rho_LR|) of the pure-state density
/// matrix between the two designated corner states; 1 exactly on the
/// balanced corner superposition, 0 when either corner is empty.
pub fn ghz_score_at(state: &[f64], left: usize, right: usize) -> f64 {
    let al = state[left];
    let ar = state[right];
    2.0 * (al * al).min(ar * ar).min((al * ar).abs())
}

/// Corner score on the reduced line (corners k = 0 and k = N).
pub fn ghz_score_reduced(state: &[f64]) -> f64 {
    ghz_score_at(state, 0, state.len() - 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Gaussian,
    Uniform,
    Bimodal,
    CornerFock,
    Other,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::Gaussian => "gaussian",
            Classification::Uniform => "uniform",
            Classification::Bimodal => "bimodal",
            Classification::CornerFock => "corner_fock",
            Classification::Other => "other",
        };
        f.write_str(s)
    }
}

/// Heuristic thresholds for profile classification; each is configurable
/// because the source phases are identified by eye in the first place.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifyThresholds {
    /// A profile is corner-Fock when one entry exceeds this weight.
    pub corner_max: f64,
    /// Bimodal: each half must carry at least this much weight...
    pub bimodal_half_mass: f64,
    /// ...while the central fifth carries at most this much.
    pub bimodal_center_mass: f64,
    /// Uniform: max/min weight ratio at most this.
    pub uniform_ratio: f64,
    /// Gaussian: |excess kurtosis| of the index distribution at most this,
    /// for single-peaked profiles.
    pub kurtosis_band: f64,
}

impl Default for ClassifyThresholds {
    fn default() -> Self {
        Self {
            corner_max: 0.9,
            bimodal_half_mass: 0.35,
            bimodal_center_mass: 0.1,
            uniform_ratio: 1.5,
            kurtosis_band: 0.5,
        }
    }
}

fn single_peaked(w: &[f64]) -> bool {
    const TOL: f64 = 1e-12;
    let mut rising = true;
    for pair in w.windows(2) {
        let d = pair[1] - pair[0];
        if d > TOL {
            if !rising {
                return false;
            }
        } else if d < -TOL {
            rising = false;
        }
    }
    true
}

/// Mean and variance of the index distribution of a probability vector.
pub fn profile_moments(w: &[f64]) -> (f64, f64) {
    let mean: f64 = w.iter().enumerate().map(|(i, &p)| p * i as f64).sum();
    let var: f64 = w
        .iter()
        .enumerate()
        .map(|(i, &p)| p * (i as f64 - mean).powi(2))
        .sum();
    (mean, var)
}

pub fn classify_profile(w: &[f64], t: &ClassifyThresholds) -> Classification {
    if w.is_empty() {
        return Classification::Other;
    }
    let max = w.iter().copied().fold(f64::MIN, f64::max);
    if max > t.corner_max {
        return Classification::CornerFock;
    }
    let n = w.len();
    let half = n / 2;
    let low: f64 = w[..half].iter().sum();
    let high: f64 = w[n - half..].iter().sum();
    let fifth = (n / 5).max(1);
    let start = (n - fifth) / 2;
    let center: f64 = w[start..start + fifth].iter().sum();
    if low >= t.bimodal_half_mass && high >= t.bimodal_half_mass && center <= t.bimodal_center_mass {
        return Classification::Bimodal;
    }
    let min = w.iter().copied().fold(f64::MAX, f64::min);
    if min > 0.0 && max / min <= t.uniform_ratio {
        return Classification::Uniform;
    }
    let (mean, var) = profile_moments(w);
    if var > 1e-18 && single_peaked(w) {
        let m4: f64 = w
            .iter()
            .enumerate()
            .map(|(i, &p)| p * (i as f64 - mean).powi(4))
            .sum();
        let excess = m4 / (var * var) - 3.0;
        if excess.abs() <= t.kurtosis_band {
            return Classification::Gaussian;
        }
    }
    Classification::Other
}

// ---------------------------------------------------------------------------
// analytic reference states
// ---------------------------------------------------------------------------

/// Analytic states on the reduced pair line.
#[derive(Clone, Copy, Debug)]
pub enum ReducedReference {
    /// Equal amplitudes on every pair index.
    Uniform,
    /// Balanced superposition of the two corner states.
    Cat,
    /// Product of two-mode coherent states: binomial weights with the
    /// alternating-sign gauge when the hopping coupling is positive.
    CoherentProduct { gamma1: f64 },
}

pub fn reduced_reference(kind: ReducedReference, n: u32) -> Vec<f64> {
    let len = n as usize + 1;
    match kind {
        ReducedReference::Uniform => vec![1.0 / (len as f64).sqrt(); len],
        ReducedReference::Cat => {
            let mut v = vec![0.0; len];
            let inv = std::f64::consts::FRAC_1_SQRT_2;
            v[0] = inv;
            v[len - 1] = inv;
            if len == 1 {
                v[0] = 1.0;
            }
            v
        }
        ReducedReference::CoherentProduct { gamma1 } => {
            // binomial(N, 1/2) weights via the ratio recurrence
            let mut w = vec![0.0f64; len];
            w[0] = 0.5f64.powi(n as i32);
            for k in 0..n as usize {
                w[k + 1] = w[k] * (n as usize - k) as f64 / (k + 1) as f64;
            }
            let alternate = gamma1 > 0.0;
            w.iter()
                .enumerate()
                .map(|(k, &p)| {
                    let s = if alternate && k % 2 == 1 { -1.0 } else { 1.0 };
                    s * p.sqrt()
                })
                .collect()
        }
    }
}

/// Squared overlap with a reduced-line reference state.
pub fn overlap_reduced(state: &[f64], kind: ReducedReference, n: u32) -> Result<f64, ObserveError> {
    let reference = reduced_reference(kind, n);
    if reference.len() != state.len() {
        return Err(ObserveError::LengthMismatch { state: state.len(), basis: reference.len() });
    }
    check_normalized(state)?;
    let dot: f64 = reference.iter().zip(state).map(|(a, b)| a * b).sum();
    Ok(dot * dot)
}

/// Spin-1 coherent state of species A restricted to a single-species basis
/// (N2 = 0), renormalized within the basis. Real amplitudes demand
/// phi in {0, pi}.
pub fn css_amplitudes(theta: f64, phi: f64, basis: &SectorBasis) -> Result<Vec<f64>, ObserveError> {
    if basis.n2 != 0 {
        return Err(ObserveError::BasisMismatch(
            "spin-1 coherent reference is single-species; need N2 = 0".into(),
        ));
    }
    let phase = if phi.abs() < 1e-12 {
        1.0
    } else if (phi - std::f64::consts::PI).abs() < 1e-12 {
        -1.0
    } else {
        return Err(ObserveError::UnsupportedPhase { phi });
    };
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    let eps = [phase * c * c, 2.0f64.sqrt() * c * s, phase * s * s];
    let n = basis.n1;
    let ln_fact = |k: u32| -> f64 {
        (1..=k).map(|j| (j as f64).ln()).sum()
    };
    let mut amps = Vec::with_capacity(basis.len());
    for st in basis.states() {
        let occ = [st.0[0], st.0[1], st.0[2]];
        let ln_multinomial =
            ln_fact(n) - ln_fact(occ[0]) - ln_fact(occ[1]) - ln_fact(occ[2]);
        let mut amp = (0.5 * ln_multinomial).exp();
        for m in 0..3 {
            amp *= eps[m].powi(occ[m] as i32);
        }
        amps.push(amp);
    }
    let norm: f64 = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return Err(ObserveError::BasisMismatch(
            "coherent reference has no weight inside this basis".into(),
        ));
    }
    for a in amps.iter_mut() {
        *a /= norm;
    }
    Ok(amps)
}

/// Squared overlap with the (projected, renormalized) spin-1 coherent state.
pub fn overlap_css(
    state: &[f64],
    basis: &SectorBasis,
    theta: f64,
    phi: f64,
) -> Result<f64, ObserveError> {
    if state.len() != basis.len() {
        return Err(ObserveError::LengthMismatch { state: state.len(), basis: basis.len() });
    }
    check_normalized(state)?;
    let reference = css_amplitudes(theta, phi, basis)?;
    let dot: f64 = reference.iter().zip(state).map(|(a, b)| a * b).sum();
    Ok(dot * dot)
}

// ---------------------------------------------------------------------------
// combined report
// ---------------------------------------------------------------------------

/// Everything the sweep front end records per ground state.
#[derive(Clone, Debug)]
pub struct ObservableReport {
    pub mean_occ: [f64; 6],
    pub fluct_occ: [f64; 6],
    pub profile: Profile,
    pub entropy_raw: f64,
    pub entropy_normalized: f64,
    pub ghz_score: f64,
    pub classification: Classification,
}

/// Full report for a reduced-line state.
pub fn report_reduced(
    state: &[f64],
    basis: &ReducedBasis,
    thresholds: &ClassifyThresholds,
) -> Result<ObservableReport, ObserveError> {
    let stats = number_stats(state, basis)?;
    let profile = profile_reduced(state, basis)?;
    let entropy = entropy_reduced(state, basis)?;
    let ghz = ghz_score_reduced(state);
    let classification = classify_profile(&profile.weights, thresholds);
    Ok(ObservableReport {
        mean_occ: stats.mean,
        fluct_occ: stats.fluct,
        profile,
        entropy_raw: entropy.raw_bits,
        entropy_normalized: entropy.normalized,
        ghz_score: ghz,
        classification,
    })
}

/// Full report for a six-mode sector state.
pub fn report_sector(
    state: &[f64],
    basis: &SectorBasis,
    thresholds: &ClassifyThresholds,
) -> Result<ObservableReport, ObserveError> {
    let stats = number_stats(state, basis)?;
    let profile = profile_sector(state, basis)?;
    let entropy = entropy_sector(state, basis, SpeciesCut::A)?;
    let classification = classify_profile(&profile.weights, thresholds);
    // corner pair of the magnetization-balanced sector when present
    let ghz = match (basis.m_tot, basis.n1 == basis.n2) {
        (Some(0), true) => {
            let n = basis.n1;
            let left = basis.index_of(&crate::fock::FockState([0, 0, n, n, 0, 0]));
            let right = basis.index_of(&crate::fock::FockState([0, n, 0, 0, n, 0]));
            match (left, right) {
                (Some(l), Some(r)) => ghz_score_at(state, l, r),
                _ => 0.0,
            }
        }
        _ => 0.0,
    };
    Ok(ObservableReport {
        mean_occ: stats.mean,
        fluct_occ: stats.fluct,
        profile,
        entropy_raw: entropy.raw_bits,
        entropy_normalized: entropy.normalized,
        ghz_score: ghz,
        classification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{enumerate_sector, ReducedBasis};
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn uniform_state(n: u32) -> Vec<f64> {
        reduced_reference(ReducedReference::Uniform, n)
    }

    #[test]
    fn uniform_fluctuation_closed_form() {
        // uniform profile: variance of k over 0..=N is N(2N+1)/6 - N^2/4
        for n in (2..=200u32).step_by(2) {
            let basis = ReducedBasis { n };
            let stats = number_stats(&uniform_state(n), &basis).unwrap();
            let expect = ((n as f64) * (2.0 * n as f64 + 1.0) / 6.0 - (n as f64).powi(2) / 4.0).sqrt();
            assert_abs_diff_eq!(stats.fluct[1], expect, epsilon = 1e-10);
            assert_abs_diff_eq!(stats.fluct[2], expect, epsilon = 1e-10);
        }
    }

    #[test]
    fn uniform_n100_values() {
        let basis = ReducedBasis { n: 100 };
        let stats = number_stats(&uniform_state(100), &basis).unwrap();
        assert_abs_diff_eq!(stats.fluct[1], 850.0f64.sqrt(), epsilon = 1e-10);
        assert_abs_diff_eq!(stats.mean[1], 50.0, epsilon = 1e-10);
    }

    #[test]
    fn coherent_reference_stats() {
        let basis = ReducedBasis { n: 100 };
        let state = reduced_reference(ReducedReference::CoherentProduct { gamma1: 1.0 }, 100);
        let stats = number_stats(&state, &basis).unwrap();
        for m in 1..=4 {
            assert_abs_diff_eq!(stats.mean[m], 50.0, epsilon = 1e-9);
            assert_abs_diff_eq!(stats.fluct[m], 5.0, epsilon = 1e-9);
        }
        // empty spectator modes
        assert_eq!(stats.mean[0], 0.0);
        assert_eq!(stats.mean[5], 0.0);
    }

    #[test]
    fn cat_reference_stats() {
        let basis = ReducedBasis { n: 100 };
        let state = reduced_reference(ReducedReference::Cat, 100);
        let stats = number_stats(&state, &basis).unwrap();
        assert_abs_diff_eq!(stats.mean[2], 50.0, epsilon = 1e-12);
        assert_abs_diff_eq!(stats.fluct[2], 50.0, epsilon = 1e-12);
    }

    #[test]
    fn species_totals_are_conserved() {
        let basis = enumerate_sector(3, 2, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut state: Vec<f64> = (0..basis.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm: f64 = state.iter().map(|x| x * x).sum::<f64>().sqrt();
        state.iter_mut().for_each(|x| *x /= norm);
        let stats = number_stats(&state, &basis).unwrap();
        let total_a: f64 = stats.mean[..3].iter().sum();
        let total_b: f64 = stats.mean[3..].iter().sum();
        assert_abs_diff_eq!(total_a, 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(total_b, 2.0, epsilon = 1e-9);
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let basis = ReducedBasis { n: 2 };
        let state = vec![1.0, 1.0, 0.0];
        assert!(matches!(
            number_stats(&state, &basis),
            Err(ObserveError::Unnormalized { .. })
        ));
    }

    #[test]
    fn fluctuation_identity_occupations_vs_profile() {
        // the mode-occupation route and the profile-variance route agree
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let basis = ReducedBasis { n: 40 };
        for _ in 0..20 {
            let mut state: Vec<f64> = (0..41).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm: f64 = state.iter().map(|x| x * x).sum::<f64>().sqrt();
            state.iter_mut().for_each(|x| *x /= norm);
            let stats = number_stats(&state, &basis).unwrap();
            let profile = profile_reduced(&state, &basis).unwrap();
            let (_, var) = profile_moments(&profile.weights);
            assert_abs_diff_eq!(stats.fluct[2], var.sqrt(), epsilon = 1e-10);
        }
    }

    #[test]
    fn profile_labels_span_the_line() {
        let basis = ReducedBasis { n: 4 };
        let state = uniform_state(4);
        let p = profile_reduced(&state, &basis).unwrap();
        assert_eq!(p.labels, vec![-8, -4, 0, 4, 8]);
        assert_abs_diff_eq!(p.total(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn uniform_profile_values() {
        let basis = ReducedBasis { n: 100 };
        let p = profile_reduced(&uniform_state(100), &basis).unwrap();
        for w in &p.weights {
            assert_abs_diff_eq!(*w, 1.0 / 101.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn entropy_of_product_state_is_zero() {
        let basis = enumerate_sector(2, 2, 0).unwrap();
        let target = crate::fock::FockState([0, 2, 0, 0, 2, 0]);
        let mut state = vec![0.0; basis.len()];
        state[basis.index_of(&target).unwrap()] = 1.0;
        let e = entropy_sector(&state, &basis, SpeciesCut::A).unwrap();
        assert_abs_diff_eq!(e.raw_bits, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.normalized, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn uniform_reduced_entropy_is_maximal() {
        let basis = ReducedBasis { n: 20 };
        let e = entropy_reduced(&uniform_state(20), &basis).unwrap();
        assert_abs_diff_eq!(e.raw_bits, 21.0f64.log2(), epsilon = 1e-12);
        assert_abs_diff_eq!(e.normalized, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cat_entropy_is_one_bit() {
        let basis = ReducedBasis { n: 20 };
        let state = reduced_reference(ReducedReference::Cat, 20);
        let e = entropy_reduced(&state, &basis).unwrap();
        assert_abs_diff_eq!(e.raw_bits, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.normalized, 1.0 / 21.0f64.log2(), epsilon = 1e-12);
    }

    #[test]
    fn entropy_cut_symmetry() {
        let basis = enumerate_sector(3, 3, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let mut state: Vec<f64> = (0..basis.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm: f64 = state.iter().map(|x| x * x).sum::<f64>().sqrt();
            state.iter_mut().for_each(|x| *x /= norm);
            let ea = entropy_sector(&state, &basis, SpeciesCut::A).unwrap();
            let eb = entropy_sector(&state, &basis, SpeciesCut::B).unwrap();
            assert_abs_diff_eq!(ea.raw_bits, eb.raw_bits, epsilon = 1e-10);
        }
    }

    #[test]
    fn reduced_entropy_agrees_with_embedded_sector_entropy() {
        // embed a reduced-line state in the (N, N, 0) sector and compare
        let n = 8u32;
        let rb = ReducedBasis { n };
        let sector = enumerate_sector(n, n, 0).unwrap();
        let line = rb.line_indices(&sector);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut amps: Vec<f64> = (0..=n as usize).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm: f64 = amps.iter().map(|x| x * x).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|x| *x /= norm);
        let mut embedded = vec![0.0; sector.len()];
        for (k, &i) in line.iter().enumerate() {
            embedded[i] = amps[k];
        }
        let e_line = entropy_reduced(&amps, &rb).unwrap();
        let e_full = entropy_sector(&embedded, &sector, SpeciesCut::A).unwrap();
        assert_abs_diff_eq!(e_line.raw_bits, e_full.raw_bits, epsilon = 1e-10);
    }

    #[test]
    fn ghz_scores() {
        let cat = reduced_reference(ReducedReference::Cat, 10);
        assert_abs_diff_eq!(ghz_score_reduced(&cat), 1.0, epsilon = 1e-12);
        let uniform = uniform_state(100);
        assert_abs_diff_eq!(ghz_score_reduced(&uniform), 2.0 / 101.0, epsilon = 1e-12);
        let mut corner = vec![0.0; 11];
        corner[0] = 1.0;
        assert_eq!(ghz_score_reduced(&corner), 0.0);
    }

    #[test]
    fn ghz_score_of_uniform_decreases_with_n() {
        let mut last = f64::INFINITY;
        for n in [10u32, 20, 40, 80] {
            let score = ghz_score_reduced(&uniform_state(n));
            assert!(score < last);
            last = score;
        }
    }

    #[test]
    fn classification_examples() {
        let t = ClassifyThresholds::default();
        assert_eq!(classify_profile(&vec![1.0 / 21.0; 21], &t), Classification::Uniform);

        let binom: Vec<f64> = {
            let s = reduced_reference(ReducedReference::CoherentProduct { gamma1: -1.0 }, 100);
            s.iter().map(|a| a * a).collect()
        };
        assert_eq!(classify_profile(&binom, &t), Classification::Gaussian);

        let mut cat = vec![0.0; 21];
        cat[0] = 0.5;
        cat[20] = 0.5;
        assert_eq!(classify_profile(&cat, &t), Classification::Bimodal);

        let mut corner = vec![0.0; 21];
        corner[0] = 0.95;
        corner[1] = 0.05;
        assert_eq!(classify_profile(&corner, &t), Classification::CornerFock);

        // corner-dominated but dressed below the corner threshold
        let mut dressed = vec![0.0; 21];
        dressed[0] = 0.85;
        dressed[1] = 0.12;
        dressed[2] = 0.03;
        assert_eq!(classify_profile(&dressed, &t), Classification::Other);
    }

    #[test]
    fn overlap_examples() {
        let n = 20u32;
        let uniform = uniform_state(n);
        assert_abs_diff_eq!(
            overlap_reduced(&uniform, ReducedReference::Uniform, n).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        let mut corner = vec![0.0; 21];
        corner[0] = 1.0;
        assert_abs_diff_eq!(
            overlap_reduced(&corner, ReducedReference::Cat, n).unwrap(),
            0.5,
            epsilon = 1e-12
        );
    }

    #[test]
    fn css_projected_reference() {
        use crate::fock::enumerate_all_m;
        // single-species, all magnetizations: css is exactly representable
        let basis = enumerate_all_m(4, 0);
        let amps = css_amplitudes(std::f64::consts::FRAC_PI_2, 0.0, &basis).unwrap();
        let norm: f64 = amps.iter().map(|a| a * a).sum();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
        // overlap with itself is 1
        assert_abs_diff_eq!(
            overlap_css(&amps, &basis, std::f64::consts::FRAC_PI_2, 0.0).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        // complex phases are rejected
        assert!(matches!(
            css_amplitudes(1.0, 0.3, &basis),
            Err(ObserveError::UnsupportedPhase { .. })
        ));
        // two-species basis is rejected
        let two = enumerate_sector(1, 1, 0).unwrap();
        assert!(matches!(
            css_amplitudes(1.0, 0.0, &two),
            Err(ObserveError::BasisMismatch(_))
        ));
    }
}
