//! Exact Pauli algebra over bit masks.
//!
//! A term represents `i^phase · prod_q X_q^{x_q} Z_q^{z_q}` with X written to
//! the left of Z on every qubit. The phase is an exponent of `i` kept mod 4,
//! so products, commutators and Hermitian signs are exact integer
//! computations; no floating point is involved anywhere in this module.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type PauliResult<T> = Result<T, PauliError>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("qubit {index} out of range for {qubits} qubits")]
    QubitOutOfRange { index: usize, qubits: usize },
    #[error("term sizes differ: {left} vs {right} qubits")]
    SizeMismatch { left: usize, right: usize },
    #[error("a Pauli term needs at least one qubit")]
    EmptyTerm,
}

/// Sign of a Hermitian Pauli word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn to_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i8(value: i8) -> Option<Sign> {
        match value {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn product(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

/// Single-qubit measurement axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => write!(f, "x"),
            Axis::Y => write!(f, "y"),
            Axis::Z => write!(f, "z"),
        }
    }
}

/// Fixed-width bit vector used for the X and Z parts of a term.
///
/// Bits beyond `len` are kept zero, so equality and popcounts never see
/// stale data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mask {
    len: usize,
    blocks: Vec<u64>,
}

impl Mask {
    pub fn zeros(len: usize) -> Mask {
        Mask {
            len,
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices<I>(len: usize, indices: I) -> PauliResult<Mask>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut mask = Mask::zeros(len);
        for index in indices {
            if index >= len {
                return Err(PauliError::QubitOutOfRange {
                    index,
                    qubits: len,
                });
            }
            mask.set(index, true);
        }
        Ok(mask)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, index: usize) -> bool {
        debug_assert!(index < self.len);
        self.blocks[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) {
        debug_assert!(index < self.len);
        let bit = 1u64 << (index % 64);
        if value {
            self.blocks[index / 64] |= bit;
        } else {
            self.blocks[index / 64] &= !bit;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Popcount of the bitwise AND with `other`.
    pub fn overlap(&self, other: &Mask) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn xor_in_place(&mut self, other: &Mask) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a ^= b;
        }
    }

    pub fn union_count(&self, other: &Mask) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Index of the lowest set bit, if any.
    pub fn lowest_set(&self) -> Option<usize> {
        for (i, &block) in self.blocks.iter().enumerate() {
            if block != 0 {
                return Some(i * 64 + block.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Iterate indices of set bits in ascending order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, &block)| {
            let mut rest = block;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let bit = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(i * 64 + bit)
                }
            })
        })
    }
}

/// A Pauli word with an exact global phase: `i^phase · prod X^x Z^z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliTerm {
    x: Mask,
    z: Mask,
    phase: u8,
}

impl PauliTerm {
    pub fn identity(qubits: usize) -> PauliResult<PauliTerm> {
        if qubits == 0 {
            return Err(PauliError::EmptyTerm);
        }
        Ok(PauliTerm {
            x: Mask::zeros(qubits),
            z: Mask::zeros(qubits),
            phase: 0,
        })
    }

    pub fn single(qubits: usize, qubit: usize, axis: Axis) -> PauliResult<PauliTerm> {
        let mut term = PauliTerm::identity(qubits)?;
        if qubit >= qubits {
            return Err(PauliError::QubitOutOfRange {
                index: qubit,
                qubits,
            });
        }
        match axis {
            Axis::X => term.x.set(qubit, true),
            Axis::Z => term.z.set(qubit, true),
            Axis::Y => {
                // Y = i·X·Z, so both bits plus one unit of phase.
                term.x.set(qubit, true);
                term.z.set(qubit, true);
                term.phase = 1;
            }
        }
        Ok(term)
    }

    /// Build the +1-signed Hermitian word with the given per-qubit axes.
    pub fn from_axes(qubits: usize, axes: &[(usize, Axis)]) -> PauliResult<PauliTerm> {
        let mut term = PauliTerm::identity(qubits)?;
        for &(qubit, axis) in axes {
            term = term.multiply(&PauliTerm::single(qubits, qubit, axis)?)?;
        }
        Ok(term)
    }

    pub fn from_masks(x: Mask, z: Mask, phase: u8) -> PauliResult<PauliTerm> {
        if x.len() != z.len() {
            return Err(PauliError::SizeMismatch {
                left: x.len(),
                right: z.len(),
            });
        }
        if x.is_empty() {
            return Err(PauliError::EmptyTerm);
        }
        Ok(PauliTerm {
            x,
            z,
            phase: phase % 4,
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.x.len()
    }

    pub fn x_mask(&self) -> &Mask {
        &self.x
    }

    pub fn z_mask(&self) -> &Mask {
        &self.z
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    fn check_size(&self, other: &PauliTerm) -> PauliResult<()> {
        if self.qubit_count() != other.qubit_count() {
            return Err(PauliError::SizeMismatch {
                left: self.qubit_count(),
                right: other.qubit_count(),
            });
        }
        Ok(())
    }

    /// Exact operator product `self · other` (self applied after other).
    ///
    /// Per qubit, moving other's X past self's Z costs a factor (−1), hence
    /// the phase picks up 2·|self.z ∧ other.x| units of i.
    pub fn multiply(&self, other: &PauliTerm) -> PauliResult<PauliTerm> {
        self.check_size(other)?;
        let swaps = self.z.overlap(&other.x);
        let mut x = self.x.clone();
        x.xor_in_place(&other.x);
        let mut z = self.z.clone();
        z.xor_in_place(&other.z);
        let phase = (self.phase as usize + other.phase as usize + 2 * swaps) % 4;
        Ok(PauliTerm {
            x,
            z,
            phase: phase as u8,
        })
    }

    /// True iff the symplectic form |x1∧z2| + |z1∧x2| is even.
    pub fn commutes_with(&self, other: &PauliTerm) -> PauliResult<bool> {
        self.check_size(other)?;
        let form = self.x.overlap(&other.z) + self.z.overlap(&other.x);
        Ok(form % 2 == 0)
    }

    /// Number of qubits where X and Z bits are both set (Y content).
    pub fn xz_overlap(&self) -> usize {
        self.x.overlap(&self.z)
    }

    /// Hermitian iff the phase parity matches the Y content parity.
    pub fn is_hermitian(&self) -> bool {
        self.phase as usize % 2 == self.xz_overlap() % 2
    }

    /// Sign of a Hermitian term relative to its +1 tensor word, or None if
    /// the term is not Hermitian.
    pub fn hermitian_sign(&self) -> Option<Sign> {
        let diff = (self.phase as i64 - self.xz_overlap() as i64).rem_euclid(4);
        match diff {
            0 => Some(Sign::Plus),
            2 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn negated(&self) -> PauliTerm {
        PauliTerm {
            x: self.x.clone(),
            z: self.z.clone(),
            phase: (self.phase + 2) % 4,
        }
    }

    /// The +1-signed word with the same per-qubit content, if Hermitian.
    pub fn word(&self) -> Option<PauliTerm> {
        self.hermitian_sign()?;
        Some(PauliTerm {
            x: self.x.clone(),
            z: self.z.clone(),
            phase: (self.xz_overlap() % 4) as u8,
        })
    }

    /// Per-qubit content: None on identity qubits.
    pub fn axis_on(&self, qubit: usize) -> PauliResult<Option<Axis>> {
        if qubit >= self.qubit_count() {
            return Err(PauliError::QubitOutOfRange {
                index: qubit,
                qubits: self.qubit_count(),
            });
        }
        Ok(match (self.x.get(qubit), self.z.get(qubit)) {
            (false, false) => None,
            (true, false) => Some(Axis::X),
            (false, true) => Some(Axis::Z),
            (true, true) => Some(Axis::Y),
        })
    }

    /// Qubits with non-identity content, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.qubit_count())
            .filter(|&q| self.x.get(q) || self.z.get(q))
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.x.union_count(&self.z)
    }

    pub fn is_identity_word(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hermitian_sign() {
            Some(sign) => {
                write!(f, "{}", if sign == Sign::Plus { "+" } else { "-" })?;
                if self.is_identity_word() {
                    return write!(f, "I");
                }
                for q in self.support() {
                    let axis = self
                        .axis_on(q)
                        .expect("support is in range")
                        .expect("support has content");
                    write!(f, " {}{}", axis, q)?;
                }
                Ok(())
            }
            None => {
                write!(f, "i^{}", self.phase)?;
                for q in self.support() {
                    match (self.x.get(q), self.z.get(q)) {
                        (true, false) => write!(f, " X{}", q)?,
                        (false, true) => write!(f, " Z{}", q)?,
                        (true, true) => write!(f, " XZ{}", q)?,
                        (false, false) => unreachable!(),
                    }
                }
                Ok(())
            }
        }
    }
}
