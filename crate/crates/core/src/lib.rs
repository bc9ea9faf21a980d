//! Exact verification engine for anyonic string-operator algebra on the
//! toric code: symplectic Pauli words with mod-4 phases, torus lattice
//! geometry, signed stabilizer groups, the GHZ all-versus-nothing
//! contradiction built from composite string operations, an interferometric
//! probe model, and a dense state-vector oracle for small lattices.

pub mod dense;
pub mod ghz;
pub mod interferometry;
pub mod lattice;
pub mod pauli;
pub mod stabilizer;
pub mod toric;

pub use dense::{
    apply_pauli_dense, dense_ground_state, equivalence_check, expectation_dense,
    stabilized_dimension, DenseError, DenseResult, DenseState, EquivalenceReport,
    GroundExpansion, DENSE_QUBIT_LIMIT,
};
pub use ghz::{
    build_record, build_record_with, canonical_dset, composite_operator, generate_paradox_sets,
    lr_assignment_search, measurement_equations, parity_contradiction, DLabel, DOperation, DSet,
    DSetRecord, EquationRecord, GhzError, GhzResult, MeasurementEquation, ParadoxStream,
    SplitRecord, SplitsRecord, ENUMERATION_K_LIMIT, LR_OBSERVABLE_LIMIT,
};
pub use interferometry::{
    controlled_string_probe, fringe_scan, phi_grid, sample_shots, sigma_phi_expectation,
    FringePoint, FringeSeries, InterferometryError, InterferometryResult, ProbeState, SampleMode,
    ShotRecord,
};
pub use lattice::{LatticeError, LatticeResult, Loop, LoopKind, TorusLattice};
pub use pauli::{Axis, Mask, PauliError, PauliResult, PauliTerm, Sign};
pub use stabilizer::{
    Expectation, Reduction, StabilizerError, StabilizerGroup, StabilizerResult,
};
pub use toric::{
    braiding_phase, face_op, ground_basis, ground_stabilizers, logical_operators, string_op,
    vertex_op, GroundBasisLabel, LogicalOperators, StringKind, ToricError, ToricResult,
};
