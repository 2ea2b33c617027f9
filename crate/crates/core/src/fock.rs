//! Bosonic Fock sectors for two spin-1 species and matrix elements of
//! normal-ordered operator monomials.
//!
//! The six single-particle modes are the three Zeeman components of each
//! species. Bases are enumerated under fixed particle numbers per species and
//! (optionally) fixed total magnetization, in lexicographic order on the
//! six occupation numbers so that every downstream matrix build is
//! reproducible bit for bit.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::sparse::{CooMatrix, CsrMatrix};

#[derive(Debug, Error)]
pub enum FockError {
    #[error("no Fock state satisfies (N1={n1}, N2={n2}, m_tot={m_tot})")]
    EmptySector { n1: u32, n2: u32, m_tot: i64 },

    #[error("operator term {monomial} changes sector quantum numbers by (dN1={dn1}, dN2={dn2}, dm={dm})")]
    SectorViolation { monomial: String, dn1: i64, dn2: i64, dm: i64 },

    #[error("ladder label m={m} out of range for N={n}")]
    LadderOutOfRange { m: f64, n: u32 },
}

/// One of the six Zeeman modes. Species A and B each contribute
/// m_F = +1, 0, -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    AP1,
    A0,
    AM1,
    BP1,
    B0,
    BM1,
}

pub const MODES: [Mode; 6] = [Mode::AP1, Mode::A0, Mode::AM1, Mode::BP1, Mode::B0, Mode::BM1];

impl Mode {
    pub fn index(self) -> usize {
        match self {
            Mode::AP1 => 0,
            Mode::A0 => 1,
            Mode::AM1 => 2,
            Mode::BP1 => 3,
            Mode::B0 => 4,
            Mode::BM1 => 5,
        }
    }

    pub fn is_species_a(self) -> bool {
        matches!(self, Mode::AP1 | Mode::A0 | Mode::AM1)
    }

    /// Magnetization quantum number carried by one atom in this mode.
    pub fn magnetization(self) -> i64 {
        match self {
            Mode::AP1 | Mode::BP1 => 1,
            Mode::A0 | Mode::B0 => 0,
            Mode::AM1 | Mode::BM1 => -1,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Mode::AP1 => "a[+1]",
            Mode::A0 => "a[0]",
            Mode::AM1 => "a[-1]",
            Mode::BP1 => "b[+1]",
            Mode::B0 => "b[0]",
            Mode::BM1 => "b[-1]",
        };
        f.write_str(s)
    }
}

/// Occupation numbers of the six modes, ordered
/// (n+1, n0, n-1 | n'+1, n'0, n'-1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FockState(pub [u32; 6]);

impl FockState {
    pub fn occ(&self, mode: Mode) -> u32 {
        self.0[mode.index()]
    }

    pub fn n1(&self) -> u32 {
        self.0[0] + self.0[1] + self.0[2]
    }

    pub fn n2(&self) -> u32 {
        self.0[3] + self.0[4] + self.0[5]
    }

    /// Species magnetizations (m1, m2).
    pub fn magnetizations(&self) -> (i64, i64) {
        let m1 = self.0[0] as i64 - self.0[2] as i64;
        let m2 = self.0[3] as i64 - self.0[5] as i64;
        (m1, m2)
    }

    pub fn m_tot(&self) -> i64 {
        let (m1, m2) = self.magnetizations();
        m1 + m2
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = self.0;
        write!(f, "|{},{},{}|{},{},{}>", o[0], o[1], o[2], o[3], o[4], o[5])
    }
}

/// Ordered enumeration of all Fock states with fixed (N1, N2) and, when
/// constrained, fixed total magnetization.
#[derive(Clone, Debug)]
pub struct SectorBasis {
    pub n1: u32,
    pub n2: u32,
    /// `None` when the basis spans every magnetization (test and
    /// single-species uses); `Some(m)` for a physical sector.
    pub m_tot: Option<i64>,
    states: Vec<FockState>,
    index: HashMap<FockState, usize>,
}

impl SectorBasis {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &FockState {
        &self.states[i]
    }

    pub fn index_of(&self, s: &FockState) -> Option<usize> {
        self.index.get(s).copied()
    }
}

fn species_compositions(n: u32) -> Vec<[u32; 3]> {
    // lexicographic in (n+1, n0, n-1)
    let mut out = Vec::new();
    for np in 0..=n {
        for n0 in 0..=(n - np) {
            out.push([np, n0, n - np - n0]);
        }
    }
    out
}

fn assemble(n1: u32, n2: u32, m_tot: Option<i64>, filter: impl Fn(&FockState) -> bool) -> SectorBasis {
    let mut states = Vec::new();
    for a in species_compositions(n1) {
        for b in species_compositions(n2) {
            let s = FockState([a[0], a[1], a[2], b[0], b[1], b[2]]);
            if filter(&s) {
                states.push(s);
            }
        }
    }
    let index = states.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    SectorBasis { n1, n2, m_tot, states, index }
}

/// Enumerate the sector with both particle numbers and the total
/// magnetization fixed. States appear exactly once, in lexicographic order
/// on the six-tuple.
pub fn enumerate_sector(n1: u32, n2: u32, m_tot: i64) -> Result<SectorBasis, FockError> {
    let basis = assemble(n1, n2, Some(m_tot), |s| s.m_tot() == m_tot);
    if basis.is_empty() {
        return Err(FockError::EmptySector { n1, n2, m_tot });
    }
    Ok(basis)
}

/// Enumerate all states with fixed particle numbers but free magnetization.
pub fn enumerate_all_m(n1: u32, n2: u32) -> SectorBasis {
    assemble(n1, n2, None, |_| true)
}

/// A single normal-ordered operator monomial: every creation stands to the
/// left of every annihilation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub creations: Vec<Mode>,
    pub annihilations: Vec<Mode>,
}

impl Monomial {
    pub fn new(creations: Vec<Mode>, annihilations: Vec<Mode>) -> Self {
        Self { creations, annihilations }
    }

    /// Net change of (N1, N2, m_tot) effected by this monomial.
    pub fn quantum_shift(&self) -> (i64, i64, i64) {
        let mut dn1 = 0i64;
        let mut dn2 = 0i64;
        let mut dm = 0i64;
        for &m in &self.creations {
            if m.is_species_a() {
                dn1 += 1;
            } else {
                dn2 += 1;
            }
            dm += m.magnetization();
        }
        for &m in &self.annihilations {
            if m.is_species_a() {
                dn1 -= 1;
            } else {
                dn2 -= 1;
            }
            dm -= m.magnetization();
        }
        (dn1, dn2, dm)
    }

    fn sorted(&self) -> Monomial {
        let mut c = self.creations.clone();
        let mut a = self.annihilations.clone();
        c.sort();
        a.sort();
        Monomial::new(c, a)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.creations.is_empty() && self.annihilations.is_empty() {
            return f.write_str("1");
        }
        for m in &self.creations {
            write!(f, "{m}^ ")?;
        }
        for m in &self.annihilations {
            write!(f, "{m} ")?;
        }
        Ok(())
    }
}

/// Apply a monomial to a Fock state: annihilations first (right to left),
/// then creations, accumulating the bosonic root factors. Returns `None`
/// when an annihilation hits an empty mode.
pub fn apply_monomial(mono: &Monomial, state: &FockState) -> Option<(f64, FockState)> {
    let mut occ = state.0;
    let mut amp = 1.0f64;
    for &m in self_rev(&mono.annihilations) {
        let n = occ[m.index()];
        if n == 0 {
            return None;
        }
        amp *= (n as f64).sqrt();
        occ[m.index()] = n - 1;
    }
    for &m in self_rev(&mono.creations) {
        let n = occ[m.index()];
        amp *= (n as f64 + 1.0).sqrt();
        occ[m.index()] = n + 1;
    }
    Some((amp, FockState(occ)))
}

// operators act on the ket from the right end of the written word
fn self_rev(modes: &[Mode]) -> impl Iterator<Item = &Mode> {
    modes.iter().rev()
}

/// Sum of coefficient-weighted normal-ordered monomials.
#[derive(Clone, Debug, Default)]
pub struct OperatorExpr {
    pub terms: Vec<(f64, Monomial)>,
}

impl OperatorExpr {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn term(coeff: f64, creations: Vec<Mode>, annihilations: Vec<Mode>) -> Self {
        Self { terms: vec![(coeff, Monomial::new(creations, annihilations))] }
    }

    /// The number operator of one mode.
    pub fn number(mode: Mode) -> Self {
        Self::term(1.0, vec![mode], vec![mode])
    }

    pub fn add(mut self, other: OperatorExpr) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn scale(mut self, factor: f64) -> Self {
        for (c, _) in &mut self.terms {
            *c *= factor;
        }
        self
    }

    /// Formal adjoint: swaps the roles of creations and annihilations in
    /// every term (real coefficients).
    pub fn adjoint(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(c, m)| (*c, Monomial::new(m.annihilations.clone(), m.creations.clone())))
            .collect();
        Self { terms }
    }

    /// Operator product, re-expanded into normal order via the bosonic
    /// commutation relations.
    pub fn multiply(&self, other: &OperatorExpr) -> Self {
        let mut out = OperatorExpr::zero();
        for (c1, m1) in &self.terms {
            for (c2, m2) in &other.terms {
                for (w, cre_mid, ann_mid) in cross_order(&m1.annihilations, &m2.creations) {
                    let mut creations = m1.creations.clone();
                    creations.extend(cre_mid);
                    let mut annihilations = ann_mid;
                    annihilations.extend(m2.annihilations.iter().copied());
                    out.terms.push((c1 * c2 * w, Monomial::new(creations, annihilations)));
                }
            }
        }
        out
    }

    /// Sort modes inside each monomial, merge identical monomials, and drop
    /// terms with negligible coefficients.
    pub fn canonicalized(&self) -> Self {
        let scale = self
            .terms
            .iter()
            .map(|(c, _)| c.abs())
            .fold(0.0f64, f64::max)
            .max(1.0);
        let mut sorted: Vec<(f64, Monomial)> =
            self.terms.iter().map(|(c, m)| (*c, m.sorted())).collect();
        sorted.sort_by(|a, b| (&a.1.creations, &a.1.annihilations).cmp(&(&b.1.creations, &b.1.annihilations)));
        let mut out: Vec<(f64, Monomial)> = Vec::new();
        for (c, m) in sorted {
            match out.last_mut() {
                Some((c0, m0)) if *m0 == m => *c0 += c,
                _ => out.push((c, m)),
            }
        }
        out.retain(|(c, _)| c.abs() > 1e-14 * scale);
        Self { terms: out }
    }

    /// Term-for-term comparison against the formal adjoint after canonical
    /// sorting.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let lhs = self.canonicalized();
        let rhs = self.adjoint().canonicalized();
        if lhs.terms.len() != rhs.terms.len() {
            return false;
        }
        lhs.terms.iter().zip(rhs.terms.iter()).all(|((ca, ma), (cb, mb))| {
            ma == mb && (ca - cb).abs() <= tol * ca.abs().max(1.0)
        })
    }
}

// Normal-order the cross word  (annihilation list)(creation list)  into
// sum_i w_i (creations_i)(annihilations_i) using [a_x, a_y^dag] = delta_xy.
fn cross_order(anns: &[Mode], cres: &[Mode]) -> Vec<(f64, Vec<Mode>, Vec<Mode>)> {
    if anns.is_empty() || cres.is_empty() {
        return vec![(1.0, cres.to_vec(), anns.to_vec())];
    }
    let x = *anns.last().unwrap();
    let head = &anns[..anns.len() - 1];
    let y = cres[0];
    let tail = &cres[1..];
    let mut out = Vec::new();
    // commuted piece: head y^dag x tail
    for (w1, cre1, ann1) in cross_order(head, &[y]) {
        let mut mid = ann1;
        mid.push(x);
        for (w2, cre2, ann2) in cross_order(&mid, tail) {
            let mut cre = cre1.clone();
            cre.extend(cre2);
            out.push((w1 * w2, cre, ann2));
        }
    }
    // contraction
    if x == y {
        out.extend(cross_order(head, tail));
    }
    out
}

/// Assemble the matrix of a sector-conserving operator over a basis.
/// Element (i, j) sums the amplitudes mapping state j to state i.
pub fn build_matrix(expr: &OperatorExpr, basis: &SectorBasis) -> Result<CsrMatrix, FockError> {
    for (c, mono) in &expr.terms {
        if *c == 0.0 {
            continue;
        }
        let (dn1, dn2, dm) = mono.quantum_shift();
        let m_violated = basis.m_tot.is_some() && dm != 0;
        if dn1 != 0 || dn2 != 0 || m_violated {
            return Err(FockError::SectorViolation {
                monomial: mono.to_string(),
                dn1,
                dn2,
                dm,
            });
        }
    }
    let mut coo = CooMatrix::new(basis.len());
    for (j, state) in basis.states().iter().enumerate() {
        for (c, mono) in &expr.terms {
            if let Some((amp, image)) = apply_monomial(mono, state) {
                let i = basis
                    .index_of(&image)
                    .expect("sector-conserving term maps inside the sector");
                coo.push(i, j, c * amp);
            }
        }
    }
    Ok(coo.to_csr())
}

/// Ladder side selector for the two-mode angular momentum picture.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Species {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Raise,
    Lower,
}

/// Coefficient of the two-mode ladder operators,
/// `sqrt((N/2 +- m + 1)(N/2 -+ m))`. `m` runs over half-integer steps for
/// odd `N`; the value is zero at the end of the ladder.
pub fn schwinger_coeff(_side: Species, sign: Ladder, m: f64, n: u32) -> Result<f64, FockError> {
    let half = n as f64 / 2.0;
    let two_m = 2.0 * m;
    if m.abs() > half + 1e-9 || (two_m - two_m.round()).abs() > 1e-9 {
        return Err(FockError::LadderOutOfRange { m, n });
    }
    let val = match sign {
        Ladder::Raise => (half + m + 1.0) * (half - m),
        Ladder::Lower => (half - m + 1.0) * (half + m),
    };
    Ok(val.max(0.0).sqrt())
}

/// Basis of the four-mode reduced model: index k counts the atoms in the
/// (a[-1], b[+1]) pair, with n0 = n'0 = N - k. Lives inside the
/// (N, N, m_tot = 0) sector with the a[+1] and b[-1] modes empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReducedBasis {
    pub n: u32,
}

impl ReducedBasis {
    pub fn len(&self) -> usize {
        self.n as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn occupations(&self, k: usize) -> FockState {
        let k = k as u32;
        FockState([0, self.n - k, k, k, self.n - k, 0])
    }

    /// Published label for the reduced index; the underlying sign convention
    /// is ambiguous in the source material, so only the magnitude pattern
    /// 2(2k - N) is meaningful.
    pub fn m_label(&self, k: usize) -> i64 {
        2 * (2 * k as i64 - self.n as i64)
    }

    /// Positions of the reduced line inside the full (N, N, 0) sector,
    /// ordered by k.
    pub fn line_indices(&self, basis: &SectorBasis) -> Vec<usize> {
        (0..self.len())
            .map(|k| {
                basis
                    .index_of(&self.occupations(k))
                    .expect("reduced line state missing from sector")
            })
            .collect()
    }
}
