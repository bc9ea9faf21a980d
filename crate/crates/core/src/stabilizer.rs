//! Signed stabilizer groups with exact membership reduction.
//!
//! A group is a list of pairwise-commuting, independent, Hermitian Pauli
//! terms, each carrying its own ±1 sign. Reduction performs Gaussian
//! elimination over F2 on the (x|z) masks while tracking phases through
//! exact term products, so membership comes back with the exact sign and
//! eigenvalues of member observables are computed without any matrices.

use std::fmt;

use thiserror::Error;

use crate::pauli::{PauliError, PauliTerm, Sign};

pub type StabilizerResult<T> = Result<T, StabilizerError>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabilizerError {
    #[error("a stabilizer group needs at least one generator")]
    EmptyGenerators,
    #[error("generator {index} is not Hermitian")]
    NonHermitian { index: usize },
    #[error("generators {first} and {second} anticommute")]
    AnticommutingPair { first: usize, second: usize },
    #[error("generator {index} is a product of earlier generators")]
    Dependent { index: usize },
    #[error("generator {index} makes a subset multiply to -identity")]
    Inconsistent { index: usize },
    #[error("operator acts on {left} qubits but the group has {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("conjugation requires a Hermitian Pauli term")]
    NonHermitianConjugation,
    #[error("eigenvalue is indeterminate: operator commutes but is not a member")]
    IndeterminateEigenvalue,
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// Outcome of reducing a Pauli term against a group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    /// The term equals `sign ·` a product of the signed generators.
    Member(Sign),
    /// Commutes with every generator but lies outside the group.
    NonMemberCommuting,
    /// Anticommutes with at least one generator.
    Anticommuting,
}

/// Expectation value of a Hermitian Pauli term on the stabilized state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    PlusOne,
    MinusOne,
    Zero,
}

impl Expectation {
    pub fn to_i8(self) -> i8 {
        match self {
            Expectation::PlusOne => 1,
            Expectation::MinusOne => -1,
            Expectation::Zero => 0,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.to_i8() as f64
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::PlusOne => write!(f, "+1"),
            Expectation::MinusOne => write!(f, "-1"),
            Expectation::Zero => write!(f, "0"),
        }
    }
}

/// One reduced row: an exact product of a subset of the generators, tagged
/// with the lowest set bit of its interleaved (x,z) vector.
#[derive(Debug, Clone)]
struct Row {
    pivot: usize,
    term: PauliTerm,
}

/// Interleaved symplectic bit index: 2q for X on qubit q, 2q+1 for Z.
/// Lowest-qubit-first pivots fall out of minimizing this index.
fn lowest_symplectic_bit(term: &PauliTerm) -> Option<usize> {
    let x = term.x_mask().lowest_set().map(|q| 2 * q);
    let z = term.z_mask().lowest_set().map(|q| 2 * q + 1);
    match (x, z) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    }
}

fn has_symplectic_bit(term: &PauliTerm, bit: usize) -> bool {
    let q = bit / 2;
    if bit % 2 == 0 {
        term.x_mask().get(q)
    } else {
        term.z_mask().get(q)
    }
}

fn eliminate(rows: &[Row], mut r: PauliTerm) -> StabilizerResult<PauliTerm> {
    for row in rows {
        if has_symplectic_bit(&r, row.pivot) {
            r = r.multiply(&row.term)?;
        }
    }
    Ok(r)
}

#[derive(Debug, Clone)]
pub struct StabilizerGroup {
    qubits: usize,
    gens: Vec<PauliTerm>,
    rows: Vec<Row>,
}

impl StabilizerGroup {
    /// Validate and index a generator list: every term Hermitian, pairwise
    /// commuting, independent over F2, and no subset multiplying to
    /// -identity.
    pub fn from_generators(gens: Vec<PauliTerm>) -> StabilizerResult<StabilizerGroup> {
        let qubits = match gens.first() {
            Some(g) => g.qubit_count(),
            None => return Err(StabilizerError::EmptyGenerators),
        };
        for (i, g) in gens.iter().enumerate() {
            if g.qubit_count() != qubits {
                return Err(StabilizerError::SizeMismatch {
                    left: g.qubit_count(),
                    right: qubits,
                });
            }
            if !g.is_hermitian() {
                return Err(StabilizerError::NonHermitian { index: i });
            }
        }
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if !gens[i].commutes_with(&gens[j])? {
                    return Err(StabilizerError::AnticommutingPair { first: i, second: j });
                }
            }
        }

        let mut rows: Vec<Row> = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let reduced = eliminate(&rows, g.clone())?;
            if reduced.is_identity_word() {
                // A residual identity word from commuting Hermitian products
                // always carries an even phase.
                return Err(match reduced.phase_exp() {
                    0 => StabilizerError::Dependent { index: i },
                    _ => StabilizerError::Inconsistent { index: i },
                });
            }
            let pivot = lowest_symplectic_bit(&reduced).expect("nonzero word has a set bit");
            for row in rows.iter_mut() {
                if has_symplectic_bit(&row.term, pivot) {
                    row.term = row.term.multiply(&reduced)?;
                }
            }
            let at = rows.partition_point(|row| row.pivot < pivot);
            rows.insert(at, Row { pivot, term: reduced });
        }

        Ok(StabilizerGroup { qubits, gens, rows })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn generators(&self) -> &[PauliTerm] {
        &self.gens
    }

    fn check_size(&self, p: &PauliTerm) -> StabilizerResult<()> {
        if p.qubit_count() != self.qubits {
            return Err(StabilizerError::SizeMismatch {
                left: p.qubit_count(),
                right: self.qubits,
            });
        }
        Ok(())
    }

    /// Classify P against the group. Member(s) means P literally equals
    /// `s · (product of a subset of the signed generators)`; the identity
    /// with phase exponent 2 therefore reduces to Member(-1) via the empty
    /// product, and a consistent group never contains it as a generator
    /// combination.
    pub fn reduce(&self, p: &PauliTerm) -> StabilizerResult<Reduction> {
        self.check_size(p)?;
        for g in &self.gens {
            if !p.commutes_with(g)? {
                return Ok(Reduction::Anticommuting);
            }
        }
        let residual = eliminate(&self.rows, p.clone())?;
        if !residual.is_identity_word() {
            return Ok(Reduction::NonMemberCommuting);
        }
        // residual = P · T with T the self-inverse product of the rows used,
        // so P = i^phase · T.
        Ok(match residual.phase_exp() {
            0 => Reduction::Member(Sign::Plus),
            2 => Reduction::Member(Sign::Minus),
            _ => Reduction::NonMemberCommuting,
        })
    }

    /// Exact expectation of P on the stabilized state: ±1 for members, 0
    /// when P anticommutes with a generator. A commuting non-member has no
    /// determinate value and is reported as an error; on full-rank groups it
    /// cannot occur for Hermitian P.
    pub fn eigenvalue(&self, p: &PauliTerm) -> StabilizerResult<Expectation> {
        Ok(match self.reduce(p)? {
            Reduction::Member(Sign::Plus) => Expectation::PlusOne,
            Reduction::Member(Sign::Minus) => Expectation::MinusOne,
            Reduction::Anticommuting => Expectation::Zero,
            Reduction::NonMemberCommuting => {
                return Err(StabilizerError::IndeterminateEigenvalue)
            }
        })
    }

    /// Group stabilizing P|ψ⟩: every generator keeps its word and flips its
    /// sign iff it anticommutes with P.
    pub fn apply_pauli(&self, p: &PauliTerm) -> StabilizerResult<StabilizerGroup> {
        self.check_size(p)?;
        if !p.is_hermitian() {
            return Err(StabilizerError::NonHermitianConjugation);
        }
        let mut new_gens = Vec::with_capacity(self.gens.len());
        for g in &self.gens {
            if g.commutes_with(p)? {
                new_gens.push(g.clone());
            } else {
                new_gens.push(g.negated());
            }
        }
        // Sign flips preserve Hermiticity, commutation and F2 independence,
        // so revalidation cannot fail.
        StabilizerGroup::from_generators(new_gens)
    }
}
