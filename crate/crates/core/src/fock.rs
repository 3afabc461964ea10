//! Truncated two-mode Fock space, ladder operators and sparse operator arithmetic.
//!
//! The basis holds the joint occupation states `|n_d, n_g⟩` with a per-mode
//! cutoff `0 ≤ n_d, n_g ≤ N_cut`, enumerated lexicographically in `(n_d, n_g)`.
//! Operators are stored row-wise as sorted sparse maps so every traversal order
//! (and therefore every dump) is deterministic.
//!
//! Truncation makes `[a, a†]` wrong on the last occupation of each mode. Any
//! identity involving a word of `k` ladder operators is exact on the
//! *interior* states whose occupations are all `≤ N_cut − k`; see
//! [`TruncatedBasis::interior`].

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Occupation label `|n_d, n_g⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FockIndex {
    pub n_d: usize,
    pub n_g: usize,
}

impl FockIndex {
    pub const VACUUM: FockIndex = FockIndex { n_d: 0, n_g: 0 };

    pub const fn new(n_d: usize, n_g: usize) -> Self {
        Self { n_d, n_g }
    }

    /// Total quanta `n = n_d + n_g`.
    pub fn total(&self) -> usize {
        self.n_d + self.n_g
    }

    /// Imbalance `m = n_d − n_g`.
    pub fn imbalance(&self) -> i64 {
        self.n_d as i64 - self.n_g as i64
    }

    /// Inverse of `(total, imbalance)`: `n_d = (n+m)/2`, `n_g = (n−m)/2`.
    /// Returns `None` when the labels have different parity or leave the
    /// non-negative quadrant.
    pub fn from_labels(n: usize, m: i64) -> Option<Self> {
        let n = n as i64;
        if (n + m) % 2 != 0 || m.abs() > n {
            return None;
        }
        Some(Self::new(((n + m) / 2) as usize, ((n - m) / 2) as usize))
    }

    pub fn occupation(&self, mode: Mode) -> usize {
        match mode {
            Mode::D => self.n_d,
            Mode::G => self.n_g,
        }
    }

    fn with_occupation(self, mode: Mode, n: usize) -> Self {
        match mode {
            Mode::D => Self { n_d: n, ..self },
            Mode::G => Self { n_g: n, ..self },
        }
    }
}

impl fmt::Display for FockIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{}⟩", self.n_d, self.n_g)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    D,
    G,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedBasis {
    cutoff: usize,
    states: Vec<FockIndex>,
}

impl TruncatedBasis {
    /// All `(N_cut+1)²` states with `n_d, n_g ≤ cutoff`, lexicographic in `(n_d, n_g)`.
    pub fn new(cutoff: usize) -> Self {
        let states = (0..=cutoff)
            .flat_map(|n_d| (0..=cutoff).map(move |n_g| FockIndex::new(n_d, n_g)))
            .collect();
        Self { cutoff, states }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[FockIndex] {
        &self.states
    }

    pub fn state(&self, index: usize) -> FockIndex {
        self.states[index]
    }

    pub fn contains(&self, state: FockIndex) -> bool {
        state.n_d <= self.cutoff && state.n_g <= self.cutoff
    }

    pub fn index_of(&self, state: FockIndex) -> Option<usize> {
        self.contains(state)
            .then(|| state.n_d * (self.cutoff + 1) + state.n_g)
    }

    pub(crate) fn checked_index(&self, state: FockIndex) -> Result<usize> {
        self.index_of(state).ok_or(Error::OutsideBasis {
            state,
            cutoff: self.cutoff,
        })
    }

    /// True when either occupation sits on the cutoff.
    pub fn is_edge(&self, index: usize) -> bool {
        let s = self.states[index];
        s.n_d == self.cutoff || s.n_g == self.cutoff
    }

    /// Mask of states whose occupations are all `≤ cutoff − word_len`.
    pub fn interior(&self, word_len: usize) -> Vec<bool> {
        self.states
            .iter()
            .map(|s| match self.cutoff.checked_sub(word_len) {
                Some(limit) => s.n_d <= limit && s.n_g <= limit,
                None => false,
            })
            .collect()
    }
}

/// Sparse complex matrix on a truncated space.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    rows: Vec<BTreeMap<usize, C64>>,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            rows: vec![BTreeMap::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![ONE; dim])
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.add_entry(i, i, v);
        }
        m
    }

    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, C64)>) -> Self {
        let mut m = Self::zeros(dim);
        for (r, c, v) in triplets {
            m.add_entry(r, c, v);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Accumulates `value` into `(row, col)`; entries that cancel to exactly zero are dropped.
    pub fn add_entry(&mut self, row: usize, col: usize, value: C64) {
        assert!(row < self.dim && col < self.dim, "entry ({row}, {col}) outside dim {}", self.dim);
        if value == ZERO {
            return;
        }
        let slot = self.rows[row].entry(col).or_insert(ZERO);
        *slot += value;
        if *slot == ZERO {
            self.rows[row].remove(&col);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.rows[row].get(&col).copied().unwrap_or(ZERO)
    }

    pub fn row(&self, row: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        self.rows[row].iter().map(|(&c, &v)| (c, v))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    /// Entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(&c, &v)| (r, c, v)))
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (r, c, v) in other.iter() {
            out.add_entry(r, c, v);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (r, c, v) in other.iter() {
            out.add_entry(r, c, -v);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let mut out = Self::zeros(self.dim);
        for (r, row) in self.rows.iter().enumerate() {
            let acc = &mut out.rows[r];
            for (&k, &a) in row {
                for (&c, &b) in &other.rows[k] {
                    *acc.entry(c).or_insert(ZERO) += a * b;
                }
            }
            acc.retain(|_, v| *v != ZERO);
        }
        Ok(out)
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)?.checked_sub(&other.checked_mul(self)?)
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)?.checked_add(&other.checked_mul(self)?)
    }

    pub fn scaled(&self, factor: impl Into<C64>) -> Self {
        let factor = factor.into();
        if factor == ZERO {
            return Self::zeros(self.dim);
        }
        let mut out = self.clone();
        for row in &mut out.rows {
            for v in row.values_mut() {
                *v *= factor;
            }
        }
        out
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for (r, c, v) in self.iter() {
            out.rows[c].insert(r, v.conj());
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.iter().map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
    }

    /// Largest `|A_rc|` with both `r` and `c` selected by `mask`.
    pub fn max_abs_on(&self, mask: &[bool]) -> f64 {
        assert_eq!(mask.len(), self.dim);
        self.iter()
            .filter(|&(r, c, _)| mask[r] && mask[c])
            .map(|(_, _, v)| v.norm())
            .fold(0.0, f64::max)
    }

    /// `max |A − A†|`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.iter()
            .map(|(r, c, v)| (v - self.get(c, r).conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, state: &StateVector) -> StateVector {
        assert_eq!(state.dim(), self.dim);
        let amplitudes = self
            .rows
            .iter()
            .map(|row| row.iter().map(|(&c, &v)| v * state.amplitudes[c]).sum())
            .collect();
        StateVector { amplitudes }
    }

    /// Dense row-major copy; intended for small reference computations.
    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        let mut dense = vec![vec![ZERO; self.dim]; self.dim];
        for (r, c, v) in self.iter() {
            dense[r][c] = v;
        }
        dense
    }

    /// Debug dump: one `row,col,re,im` line per stored entry, row-major.
    pub fn write_csv_dump<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["row", "col", "re", "im"])?;
        for (r, c, v) in self.iter() {
            w.write_record([r.to_string(), c.to_string(), v.re.to_string(), v.im.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;

    /// Panics on dimension mismatch; use [`OperatorMatrix::checked_add`] for a `Result`.
    fn add(self, rhs: Self) -> OperatorMatrix {
        self.checked_add(rhs).expect("operator dimensions differ")
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: Self) -> OperatorMatrix {
        self.checked_sub(rhs).expect("operator dimensions differ")
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: Self) -> OperatorMatrix {
        self.checked_mul(rhs).expect("operator dimensions differ")
    }
}

/// `⟨n−1|a|n⟩ = √n` in the chosen mode.
pub fn annihilation(mode: Mode, basis: &TruncatedBasis) -> OperatorMatrix {
    let mut op = OperatorMatrix::zeros(basis.dim());
    for (col, &state) in basis.states().iter().enumerate() {
        let n = state.occupation(mode);
        if n == 0 {
            continue;
        }
        let lowered = state.with_occupation(mode, n - 1);
        let row = basis.index_of(lowered).expect("lowered state stays inside the basis");
        op.add_entry(row, col, C64::from((n as f64).sqrt()));
    }
    op
}

pub fn creation(mode: Mode, basis: &TruncatedBasis) -> OperatorMatrix {
    annihilation(mode, basis).dagger()
}

/// The four ladder operators of one basis, built once.
#[derive(Clone, Debug)]
pub struct LadderSet {
    pub a_d: OperatorMatrix,
    pub a_d_dag: OperatorMatrix,
    pub a_g: OperatorMatrix,
    pub a_g_dag: OperatorMatrix,
}

impl LadderSet {
    pub fn new(basis: &TruncatedBasis) -> Self {
        let a_d = annihilation(Mode::D, basis);
        let a_g = annihilation(Mode::G, basis);
        Self {
            a_d_dag: a_d.dagger(),
            a_g_dag: a_g.dagger(),
            a_d,
            a_g,
        }
    }

    /// Operator for a single letter of a ladder word.
    pub fn letter(&self, letter: Ladder) -> &OperatorMatrix {
        match letter {
            Ladder::Lower(Mode::D) => &self.a_d,
            Ladder::Raise(Mode::D) => &self.a_d_dag,
            Ladder::Lower(Mode::G) => &self.a_g,
            Ladder::Raise(Mode::G) => &self.a_g_dag,
        }
    }

    /// Product of a word, leftmost letter acting last.
    pub fn word(&self, letters: &[Ladder]) -> OperatorMatrix {
        let dim = self.a_d.dim();
        letters
            .iter()
            .fold(OperatorMatrix::identity(dim), |acc, &l| &acc * self.letter(l))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Ladder {
    Lower(Mode),
    Raise(Mode),
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (mode, dag) = match self {
            Ladder::Lower(m) => (m, ""),
            Ladder::Raise(m) => (m, "†"),
        };
        let m = match mode {
            Mode::D => 'd',
            Mode::G => 'g',
        };
        write!(f, "a_{m}{dag}")
    }
}

/// `⟨bra|A|ket⟩` as stored.
pub fn matrix_element(
    bra: FockIndex,
    op: &OperatorMatrix,
    ket: FockIndex,
    basis: &TruncatedBasis,
) -> Result<C64> {
    if op.dim() != basis.dim() {
        return Err(Error::DimensionMismatch {
            left: op.dim(),
            right: basis.dim(),
        });
    }
    Ok(op.get(basis.checked_index(bra)?, basis.checked_index(ket)?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            amplitudes: vec![ZERO; dim],
        }
    }

    pub fn basis_state(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.amplitudes[index] = ONE;
        v
    }

    pub fn fock(basis: &TruncatedBasis, state: FockIndex) -> Result<Self> {
        Ok(Self::basis_state(basis.dim(), basis.checked_index(state)?))
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        assert_eq!(self.dim(), other.dim());
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            for a in &mut self.amplitudes {
                *a /= n;
            }
        }
        self
    }

    /// Weight carried by the indices selected in `mask`.
    pub fn weight_on(&self, mask: &[bool]) -> f64 {
        self.amplitudes
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(a, _)| a.norm_sqr())
            .sum()
    }
}
