//! Toric-code constructions on the torus lattice: string operators, the
//! ground-state stabilizer group, the four-fold degenerate ground basis,
//! logical loop operators, and the anyon braiding-phase experiment.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::lattice::{LatticeError, Loop, LoopKind, TorusLattice};
use crate::pauli::{Mask, PauliError, PauliTerm, Sign};
use crate::stabilizer::{Expectation, StabilizerError, StabilizerGroup};

pub type ToricResult<T> = Result<T, ToricError>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Stabilizer(#[from] StabilizerError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error("z-string must be an open path with exactly 2 endpoints, found {endpoints}")]
    NotAnOpenPath { endpoints: usize },
    #[error("x-loop must be a closed dual cycle")]
    NotADualCycle,
    #[error("x-loop must be contractible, found homology class ({0}, {1})")]
    NotContractible(u8, u8),
}

/// Which Pauli the string is made of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StringKind {
    X,
    Z,
}

/// Which pair of logical S^x loop operators was applied to the reference
/// ground state; the four labels enumerate the ground basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundBasisLabel {
    pub a: bool,
    pub b: bool,
}

impl GroundBasisLabel {
    pub fn new(a: bool, b: bool) -> GroundBasisLabel {
        GroundBasisLabel { a, b }
    }

    pub fn all() -> [GroundBasisLabel; 4] {
        [
            GroundBasisLabel::new(false, false),
            GroundBasisLabel::new(true, false),
            GroundBasisLabel::new(false, true),
            GroundBasisLabel::new(true, true),
        ]
    }
}

/// The two anticommuting logical pairs living on the noncontractible
/// reference cycles.
#[derive(Debug, Clone)]
pub struct LogicalOperators {
    pub x1: PauliTerm,
    pub z1: PauliTerm,
    pub x2: PauliTerm,
    pub z2: PauliTerm,
}

/// Product of single-qubit Paulis of one kind over an edge set: the string
/// operator S^x or S^z. Always Hermitian with phase exponent 0.
pub fn string_op(
    lattice: &TorusLattice,
    edges: &BTreeSet<usize>,
    kind: StringKind,
) -> ToricResult<PauliTerm> {
    lattice.validate_edges(edges)?;
    let n = lattice.edge_count();
    let mask = Mask::from_indices(n, edges.iter().copied())?;
    let term = match kind {
        StringKind::X => PauliTerm::from_masks(mask, Mask::zeros(n), 0)?,
        StringKind::Z => PauliTerm::from_masks(Mask::zeros(n), mask, 0)?,
    };
    Ok(term)
}

/// The vertex operator A_V: X on the four edges meeting at v.
pub fn vertex_op(lattice: &TorusLattice, r: usize, c: usize) -> ToricResult<PauliTerm> {
    string_op(lattice, &lattice.star(r, c)?, StringKind::X)
}

/// The face operator B_F: Z on the four edges bounding f.
pub fn face_op(lattice: &TorusLattice, r: usize, c: usize) -> ToricResult<PauliTerm> {
    string_op(lattice, &lattice.boundary(r, c)?, StringKind::Z)
}

/// Logical loop operators: Z1/Z2 are z-strings over the primal reference
/// cycles (row 0 / column 0), X1/X2 are x-strings over the dual reference
/// cycles crossing them once.
pub fn logical_operators(lattice: &TorusLattice) -> ToricResult<LogicalOperators> {
    let (p1, p2) = lattice.primal_reference_cycles();
    let (d1, d2) = lattice.dual_reference_cycles();
    Ok(LogicalOperators {
        x1: string_op(lattice, d1.edges(), StringKind::X)?,
        z1: string_op(lattice, p1.edges(), StringKind::Z)?,
        x2: string_op(lattice, d2.edges(), StringKind::X)?,
        z2: string_op(lattice, p2.edges(), StringKind::Z)?,
    })
}

/// Full-rank group stabilizing the reference ground state |g₀⟩: every A_V
/// except the one at vertex (k−1,k−1), every B_F except the one at face
/// (k−1,k−1) (those two are products of the others), and the two logical
/// z-strings; all signs +1.
pub fn ground_stabilizers(lattice: &TorusLattice) -> ToricResult<StabilizerGroup> {
    let k = lattice.k();
    let mut gens = Vec::with_capacity(2 * k * k);
    for (r, c) in lattice.vertices() {
        if (r, c) != (k - 1, k - 1) {
            gens.push(vertex_op(lattice, r, c)?);
        }
    }
    for (r, c) in lattice.faces() {
        if (r, c) != (k - 1, k - 1) {
            gens.push(face_op(lattice, r, c)?);
        }
    }
    let logicals = logical_operators(lattice)?;
    gens.push(logicals.z1);
    gens.push(logicals.z2);
    Ok(StabilizerGroup::from_generators(gens)?)
}

/// Group stabilizing the chosen ground-basis state: label bit a applies the
/// logical X1 loop to |g₀⟩ (flipping the Z1 generator sign), bit b applies
/// X2.
pub fn ground_basis(lattice: &TorusLattice, label: GroundBasisLabel) -> ToricResult<StabilizerGroup> {
    let mut group = ground_stabilizers(lattice)?;
    let logicals = logical_operators(lattice)?;
    if label.a {
        group = group.apply_pauli(&logicals.x1)?;
    }
    if label.b {
        group = group.apply_pauli(&logicals.x2)?;
    }
    Ok(group)
}

/// Drag one z-particle of the pair created by the open z-string around the
/// closed x-loop: the eigenvalue of S^x on the excited state. It is −1
/// exactly when the loop separates the two string endpoints, i.e. when the
/// loop and the string share an odd number of edges.
pub fn braiding_phase(
    lattice: &TorusLattice,
    z_path: &BTreeSet<usize>,
    x_loop: &Loop,
) -> ToricResult<Sign> {
    lattice.validate_edges(z_path)?;
    let endpoints = lattice
        .vertices()
        .filter(|&(r, c)| {
            lattice
                .star(r, c)
                .expect("vertex iterator yields valid coords")
                .intersection(z_path)
                .count()
                % 2
                == 1
        })
        .count();
    if endpoints != 2 {
        return Err(ToricError::NotAnOpenPath { endpoints });
    }
    if x_loop.kind() != LoopKind::Dual || !lattice.is_cycle(x_loop)? {
        return Err(ToricError::NotADualCycle);
    }
    let class = lattice.homology_class(x_loop)?;
    if class != (0, 0) {
        return Err(ToricError::NotContractible(class.0, class.1));
    }

    let ground = ground_stabilizers(lattice)?;
    let z_string = string_op(lattice, z_path, StringKind::Z)?;
    let excited = ground.apply_pauli(&z_string)?;
    let x_string = string_op(lattice, x_loop.edges(), StringKind::X)?;
    match excited.eigenvalue(&x_string)? {
        Expectation::PlusOne => Ok(Sign::Plus),
        Expectation::MinusOne => Ok(Sign::Minus),
        Expectation::Zero => unreachable!("a contractible x-loop is a product of vertex operators"),
    }
}
