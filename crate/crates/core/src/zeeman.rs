//! Hyperfine Zeeman energies of the F = 1 ground manifold for J = 1/2
//! alkali atoms, the five heteronuclear spin-exchange channel detunings, and
//! resonance-field root finding.
//!
//! All fields are in gauss and all energies in Hz. Atomic constants are
//! literature values shipped in `data/atoms.json` (with citations); nothing
//! here is fitted.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ZeemanError {
    #[error("mF = {0} outside the F = 1 manifold")]
    InvalidMf(i32),

    #[error("field must be non-negative, got {0} G")]
    NegativeField(f64),

    #[error("unknown atom '{0}'")]
    UnknownAtom(String),

    #[error("process id {0} outside 1..=5")]
    InvalidProcess(usize),

    #[error("no sign change of process {process} in [{lo} G, {hi} G]")]
    NoSignChange { process: usize, lo: f64, hi: f64 },

    #[error("bad atom data: {0}")]
    BadData(String),
}

/// Bohr magneton over Planck's constant, Hz per gauss (CODATA 2018).
pub const MU_B_HZ_PER_GAUSS: f64 = 1.399_624_493_6e6;

/// Ground-manifold hyperfine data for one J = 1/2 alkali species.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub name: String,
    pub nuclear_spin: f64,
    /// Magnetic-dipole hyperfine constant A, Hz.
    pub ahf_hz: f64,
    #[serde(rename = "gJ")]
    pub g_j: f64,
    /// Nuclear g-factor in Bohr-magneton units (Steck sign convention).
    #[serde(rename = "gI")]
    pub g_i: f64,
    pub citation: String,
}

impl AtomSpec {
    /// Zero-field hyperfine splitting between the two ground manifolds, Hz.
    pub fn hyperfine_splitting_hz(&self) -> f64 {
        self.ahf_hz * (self.nuclear_spin + 0.5)
    }
}

pub const ATOMS_JSON: &str = include_str!("data/atoms.json");

pub fn builtin_atoms() -> Vec<AtomSpec> {
    serde_json::from_str(ATOMS_JSON).expect("embedded atom table parses")
}

pub fn load_atoms(json: &str) -> Result<Vec<AtomSpec>, ZeemanError> {
    serde_json::from_str(json).map_err(|e| ZeemanError::BadData(e.to_string()))
}

pub fn atom(name: &str) -> Result<AtomSpec, ZeemanError> {
    builtin_atoms()
        .into_iter()
        .find(|a| a.name == name)
        .ok_or_else(|| ZeemanError::UnknownAtom(name.to_string()))
}

/// Energy of the |F=1, mF> sublevel at field `b_gauss`, from the closed-form
/// two-level diagonalization of the hyperfine + Zeeman Hamiltonian for
/// J = 1/2 (lower-manifold branch), nuclear linear term included. Returns Hz
/// relative to the zero of the hyperfine Hamiltonian.
pub fn breit_rabi_energy(atom: &AtomSpec, mf: i32, b_gauss: f64) -> Result<f64, ZeemanError> {
    if mf.abs() > 1 {
        return Err(ZeemanError::InvalidMf(mf));
    }
    if b_gauss < 0.0 {
        return Err(ZeemanError::NegativeField(b_gauss));
    }
    let dw = atom.hyperfine_splitting_hz();
    let two_i_plus_1 = 2.0 * atom.nuclear_spin + 1.0;
    let x = (atom.g_j - atom.g_i) * MU_B_HZ_PER_GAUSS * b_gauss / dw;
    let m = mf as f64;
    let root = (1.0 + 4.0 * m * x / two_i_plus_1 + x * x).sqrt();
    Ok(-dw / (2.0 * two_i_plus_1) + atom.g_i * MU_B_HZ_PER_GAUSS * m * b_gauss - dw / 2.0 * root)
}

/// Linear and quadratic Zeeman coefficients relative to the mF = 0 level:
/// p = (E+1 - E-1)/2 and q = (E+1 + E-1 - 2 E0)/2, plus an optional additive
/// microwave offset on q.
pub fn pq_coefficients(atom: &AtomSpec, b_gauss: f64, q_offset_hz: f64) -> Result<(f64, f64), ZeemanError> {
    let e_p = breit_rabi_energy(atom, 1, b_gauss)?;
    let e_0 = breit_rabi_energy(atom, 0, b_gauss)?;
    let e_m = breit_rabi_energy(atom, -1, b_gauss)?;
    Ok(((e_p - e_m) / 2.0, (e_p + e_m - 2.0 * e_0) / 2.0 + q_offset_hz))
}

/// Zeeman detuning (energy before minus after) of the five distinguishable
/// heteronuclear exchange channels, species 1 first:
///
/// | id | species 1      | species 2      |
/// |----|----------------|----------------|
/// | 1  | +1 -> -1       | -1 -> +1       |
/// | 2  |  0 -> +1       | +1 ->  0       |
/// | 3  |  0 -> +1       |  0 -> -1       |
/// | 4  |  0 -> -1       |  0 -> +1       |
/// | 5  |  0 -> -1       | -1 ->  0       |
///
/// Channel 4 is the pair process the reduced four-mode model keeps; its
/// zero crossing selects the working field.
pub fn process_detuning(
    id: usize,
    atom1: &AtomSpec,
    atom2: &AtomSpec,
    b_gauss: f64,
) -> Result<f64, ZeemanError> {
    let e1 = |m: i32| breit_rabi_energy(atom1, m, b_gauss);
    let e2 = |m: i32| breit_rabi_energy(atom2, m, b_gauss);
    let v = match id {
        1 => e1(-1)? + e2(1)? - e1(1)? - e2(-1)?,
        2 => e1(0)? + e2(1)? - e1(1)? - e2(0)?,
        3 => e1(0)? + e2(0)? - e1(1)? - e2(-1)?,
        4 => e1(0)? + e2(0)? - e1(-1)? - e2(1)?,
        5 => e1(0)? + e2(-1)? - e1(-1)? - e2(0)?,
        _ => return Err(ZeemanError::InvalidProcess(id)),
    };
    Ok(v)
}

/// One channel's detuning sampled on a field grid, with every nontrivial
/// zero crossing refined by bisection.
#[derive(Clone, Debug)]
pub struct ProcessDetuning {
    pub id: usize,
    pub fields_gauss: Vec<f64>,
    pub values_hz: Vec<f64>,
    pub crossings_gauss: Vec<f64>,
}

/// Evaluate all five channels on an ascending field grid.
pub fn process_detunings(
    atom1: &AtomSpec,
    atom2: &AtomSpec,
    grid_gauss: &[f64],
) -> Result<Vec<ProcessDetuning>, ZeemanError> {
    let mut out = Vec::with_capacity(5);
    for id in 1..=5 {
        let values: Result<Vec<f64>, _> = grid_gauss
            .iter()
            .map(|&b| process_detuning(id, atom1, atom2, b))
            .collect();
        let values_hz = values?;
        let mut crossings = Vec::new();
        for w in 0..grid_gauss.len().saturating_sub(1) {
            let (b0, b1) = (grid_gauss[w], grid_gauss[w + 1]);
            let (v0, v1) = (values_hz[w], values_hz[w + 1]);
            if v0 == 0.0 && b0 > 1e-9 {
                crossings.push(b0);
            } else if v0 * v1 < 0.0 {
                let b = bisect(|b| process_detuning(id, atom1, atom2, b).unwrap(), b0, b1);
                if b > 1e-9 {
                    crossings.push(b);
                }
            }
        }
        out.push(ProcessDetuning { id, fields_gauss: grid_gauss.to_vec(), values_hz, crossings_gauss: crossings });
    }
    Ok(out)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
        if (hi - lo) <= f64::EPSILON * hi.abs() {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Bisection for the field where one channel's detuning vanishes, excluding
/// the trivial zero-field root. The bracket endpoints must straddle a sign
/// change; the root is refined until |detuning| falls below 1e-6 of the
/// bracket's detuning scale.
pub fn find_resonance(
    id: usize,
    atom1: &AtomSpec,
    atom2: &AtomSpec,
    bracket: (f64, f64),
) -> Result<f64, ZeemanError> {
    let (lo, hi) = bracket;
    let lo = lo.max(1e-9);
    let flo = process_detuning(id, atom1, atom2, lo)?;
    let fhi = process_detuning(id, atom1, atom2, hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo * fhi > 0.0 {
        return Err(ZeemanError::NoSignChange { process: id, lo, hi });
    }
    let scale = flo.abs().max(fhi.abs());
    let b = bisect(|b| process_detuning(id, atom1, atom2, b).unwrap(), lo, hi);
    debug_assert!(process_detuning(id, atom1, atom2, b).unwrap().abs() <= 1e-6 * scale);
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn na() -> AtomSpec {
        atom("na23").unwrap()
    }

    fn rb() -> AtomSpec {
        atom("rb87").unwrap()
    }

    #[test]
    fn zero_field_manifold_is_degenerate() {
        for a in [na(), rb()] {
            let e0 = breit_rabi_energy(&a, 0, 0.0).unwrap();
            for m in [-1, 1] {
                assert_abs_diff_eq!(breit_rabi_energy(&a, m, 0.0).unwrap(), e0, epsilon = 1e-6);
            }
            // lower manifold sits the full splitting below zero at B = 0
            let dw = a.hyperfine_splitting_hz();
            assert_abs_diff_eq!(e0, -dw / 8.0 - dw / 2.0, epsilon = 1e-3);
        }
    }

    #[test]
    fn invalid_mf_is_rejected() {
        assert!(matches!(breit_rabi_energy(&na(), 2, 1.0), Err(ZeemanError::InvalidMf(2))));
    }

    #[test]
    fn quadratic_coefficient_is_positive_and_quadratic() {
        // q for the lower manifold grows as B^2 with the textbook prefactor
        for (a, expect_hz_per_g2) in [(na(), 277.0), (rb(), 71.8)] {
            let (_, q1) = pq_coefficients(&a, 0.1, 0.0).unwrap();
            let (_, q2) = pq_coefficients(&a, 0.2, 0.0).unwrap();
            assert!(q1 > 0.0);
            assert_abs_diff_eq!(q2 / q1, 4.0, epsilon = 1e-3);
            assert_abs_diff_eq!(q1 / 0.01, expect_hz_per_g2, epsilon = 1.0);
        }
    }

    #[test]
    fn linear_zeeman_has_negative_f1_g_factor() {
        for (a, g_f) in [(na(), -0.50158), (rb(), -0.50183)] {
            let b = 0.01;
            let e_p = breit_rabi_energy(&a, 1, b).unwrap();
            let e_m = breit_rabi_energy(&a, -1, b).unwrap();
            let slope = (e_p - e_m) / (2.0 * b * MU_B_HZ_PER_GAUSS);
            assert_abs_diff_eq!(slope, g_f, epsilon = 1e-4);
            assert!(e_p < e_m);
        }
    }

    #[test]
    fn q_offset_is_additive() {
        let (p0, q0) = pq_coefficients(&na(), 1.0, 0.0).unwrap();
        let (p1, q1) = pq_coefficients(&na(), 1.0, 123.0).unwrap();
        assert_eq!(p0, p1);
        assert_abs_diff_eq!(q1 - q0, 123.0, epsilon = 1e-9);
    }

    #[test]
    fn all_detunings_vanish_at_zero_field() {
        for id in 1..=5 {
            assert_abs_diff_eq!(
                process_detuning(id, &na(), &rb(), 0.0).unwrap(),
                0.0,
                epsilon = 1e-6
            );
        }
    }

    #[test]
    fn identical_atoms_channel_structure() {
        // channels 1, 2 and 5 vanish identically for identical atoms;
        // channels 3 and 4 coincide (both equal -2q)
        let a = na();
        for b in [0.3, 0.97, 2.5] {
            for id in [1, 2, 5] {
                assert_abs_diff_eq!(process_detuning(id, &a, &a, b).unwrap(), 0.0, epsilon = 1e-9);
            }
            let d3 = process_detuning(3, &a, &a, b).unwrap();
            let d4 = process_detuning(4, &a, &a, b).unwrap();
            assert_abs_diff_eq!(d3, d4, epsilon = 1e-9);
            let (_, q) = pq_coefficients(&a, b, 0.0).unwrap();
            assert_abs_diff_eq!(d3, -2.0 * q, epsilon = 1e-9);
        }
    }

    #[test]
    fn species_swap_relations() {
        // channels 1, 2 and 5 are antisymmetric under the species swap;
        // channels 3 and 4 exchange
        for b in [0.5, 1.0, 2.0] {
            for id in [1, 2, 5] {
                let fwd = process_detuning(id, &na(), &rb(), b).unwrap();
                let rev = process_detuning(id, &rb(), &na(), b).unwrap();
                assert_abs_diff_eq!(fwd, -rev, epsilon = 1e-9);
            }
            let d3 = process_detuning(3, &na(), &rb(), b).unwrap();
            let d4_swapped = process_detuning(4, &rb(), &na(), b).unwrap();
            assert_abs_diff_eq!(d3, d4_swapped, epsilon = 1e-9);
        }
    }

    #[test]
    fn pq_reconstruction_identity() {
        // channel 4 = (p1 - q1) - (p2 + q2); channel 3 = -(p1 + q1) + (p2 - q2)
        for b in [0.2, 0.97, 1.69, 2.8] {
            let (p1, q1) = pq_coefficients(&na(), b, 0.0).unwrap();
            let (p2, q2) = pq_coefficients(&rb(), b, 0.0).unwrap();
            let d4 = process_detuning(4, &na(), &rb(), b).unwrap();
            assert_abs_diff_eq!(d4, (p1 - q1) - (p2 + q2), epsilon = 1e-9);
            let d3 = process_detuning(3, &na(), &rb(), b).unwrap();
            assert_abs_diff_eq!(d3, -(p1 + q1) + (p2 - q2), epsilon = 1e-9);
        }
    }

    #[test]
    fn na_rb_crossings() {
        let b4 = find_resonance(4, &na(), &rb(), (0.1, 3.0)).unwrap();
        assert_abs_diff_eq!(b4, 0.991555, epsilon = 1e-4);
        let b5 = find_resonance(5, &na(), &rb(), (0.1, 3.0)).unwrap();
        assert_abs_diff_eq!(b5, 1.691307, epsilon = 1e-4);
    }

    #[test]
    fn resonance_requires_sign_change() {
        // channel 3 stays sign-definite over this range
        assert!(matches!(
            find_resonance(3, &na(), &rb(), (0.1, 3.0)),
            Err(ZeemanError::NoSignChange { .. })
        ));
    }

    #[test]
    fn synthetic_linear_crossing() {
        let b = bisect(|x| x - 1.0, 0.2, 3.0);
        assert_abs_diff_eq!(b, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn crossings_stable_under_grid_refinement() {
        let coarse: Vec<f64> = (0..=60).map(|i| i as f64 * 0.05).collect();
        let fine: Vec<f64> = (0..=3000).map(|i| i as f64 * 0.001).collect();
        let dc = process_detunings(&na(), &rb(), &coarse).unwrap();
        let df = process_detunings(&na(), &rb(), &fine).unwrap();
        for (c, f) in dc.iter().zip(&df) {
            assert_eq!(c.crossings_gauss.len(), f.crossings_gauss.len(), "channel {}", c.id);
            for (a, b) in c.crossings_gauss.iter().zip(&f.crossings_gauss) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-3);
            }
        }
        // exactly two channels cross in (0, 3] G
        let crossing_ids: Vec<usize> =
            df.iter().filter(|d| !d.crossings_gauss.is_empty()).map(|d| d.id).collect();
        assert_eq!(crossing_ids, vec![4, 5]);
    }

    #[test]
    fn detuning_scales_at_the_working_field() {
        // near the channel-4 crossing the other channels are detuned by well
        // over an order of magnitude more
        let b = 0.97;
        let d4 = process_detuning(4, &na(), &rb(), b).unwrap().abs();
        for id in [1, 2, 3] {
            let d = process_detuning(id, &na(), &rb(), b).unwrap().abs();
            assert!(d > 10.0 * d4, "channel {id}: {d} vs {d4}");
        }
    }

    #[test]
    fn atom_table_round_trips() {
        let atoms = builtin_atoms();
        assert_eq!(atoms.len(), 2);
        for a in &atoms {
            assert!(a.ahf_hz > 0.0);
            assert_eq!(a.nuclear_spin, 1.5);
            assert!(!a.citation.is_empty());
        }
        let json = serde_json::to_string(&atoms).unwrap();
        let back = load_atoms(&json).unwrap();
        assert_eq!(back.len(), 2);
        assert!(atom("cs133").is_err());
    }
}
