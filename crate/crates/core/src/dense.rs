//! Brute-force state-vector reference for small lattices.
//!
//! Everything here is deliberately naive: states are full 2^n complex
//! vectors, Pauli action is computed amplitude by amplitude, and projector
//! dimensions come from literal traces. The point is to certify the
//! stabilizer engine against an implementation that shares none of its
//! machinery.

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lattice::{LatticeError, TorusLattice};
use crate::pauli::{Mask, PauliError, PauliTerm};
use crate::stabilizer::StabilizerError;
use crate::toric::{ground_stabilizers, vertex_op, ToricError};

/// Largest qubit count a dense vector may have (2^20 amplitudes).
pub const DENSE_QUBIT_LIMIT: usize = 20;

pub type DenseResult<T> = Result<T, DenseError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DenseError {
    #[error("{qubits} qubits exceed the dense limit of {limit}")]
    SizeBound { qubits: usize, limit: usize },
    #[error("state has {left} qubits but operator acts on {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("amplitude vector of length {len} is not a power of two")]
    NotAPowerOfTwo { len: usize },
    #[error("amplitude vector has norm {norm}, expected 1")]
    NotNormalized { norm: f64 },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Stabilizer(#[from] StabilizerError),
    #[error(transparent)]
    Toric(#[from] ToricError),
}

/// Unit-norm vector of 2^n amplitudes; basis index bit q is qubit q.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_qubit_limit(n: usize) -> DenseResult<()> {
    if n > DENSE_QUBIT_LIMIT {
        return Err(DenseError::SizeBound {
            qubits: n,
            limit: DENSE_QUBIT_LIMIT,
        });
    }
    Ok(())
}

fn mask_bits(mask: &Mask) -> u64 {
    mask.ones().fold(0u64, |acc, q| acc | 1 << q)
}

impl DenseState {
    pub fn basis_state(n: usize, index: usize) -> DenseResult<DenseState> {
        check_qubit_limit(n)?;
        let dim = 1usize << n;
        assert!(index < dim, "basis index out of range");
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(DenseState { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> DenseResult<DenseState> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(DenseError::NotAPowerOfTwo { len });
        }
        let n = len.trailing_zeros() as usize;
        check_qubit_limit(n)?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(DenseError::NotNormalized { norm });
        }
        Ok(DenseState { n, amps })
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &DenseState) -> DenseResult<Complex64> {
        if self.n != other.n {
            return Err(DenseError::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn nonzero_count(&self, eps: f64) -> usize {
        self.amps.iter().filter(|a| a.norm() > eps).count()
    }

    /// Largest componentwise |difference| against another state.
    pub fn max_abs_diff(&self, other: &DenseState) -> DenseResult<f64> {
        if self.n != other.n {
            return Err(DenseError::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn scaled(&self, factor: Complex64) -> DenseState {
        DenseState {
            n: self.n,
            amps: self.amps.iter().map(|a| a * factor).collect(),
        }
    }
}

/// Expansion of ∏_V (1 + A_V)|0…0⟩ together with the measured normalization
/// constant (the 𝒥 multiplying the raw product state).
#[derive(Debug, Clone)]
pub struct GroundExpansion {
    pub state: DenseState,
    pub normalization: f64,
}

/// Expand the projector product over every vertex operator applied to
/// |0…0⟩ and normalize. Bounded to 2k² ≤ 20, i.e. k ≤ 3.
pub fn dense_ground_state(lattice: &TorusLattice) -> DenseResult<GroundExpansion> {
    let n = lattice.edge_count();
    check_qubit_limit(n)?;
    let dim = 1usize << n;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[0] = Complex64::new(1.0, 0.0);
    for (r, c) in lattice.vertices() {
        let a = vertex_op(lattice, r, c)?;
        let x = mask_bits(a.x_mask()) as usize;
        // (1 + A) sends the pair {b, b^x} to equal sums; updating both
        // slots with the same value keeps the pass in-place safe.
        for b in 0..dim {
            let partner = b ^ x;
            if b < partner {
                let s = amps[b] + amps[partner];
                amps[b] = s;
                amps[partner] = s;
            }
        }
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let inv = 1.0 / norm;
    for a in amps.iter_mut() {
        *a *= inv;
    }
    Ok(GroundExpansion {
        state: DenseState { n, amps },
        normalization: inv,
    })
}

/// Exact action of a Pauli term, global phase included:
/// P|b⟩ = i^phase · (−1)^{|z ∧ b|} |b ⊕ x⟩.
pub fn apply_pauli_dense(state: &DenseState, p: &PauliTerm) -> DenseResult<DenseState> {
    if p.qubit_count() != state.n {
        return Err(DenseError::SizeMismatch {
            left: state.n,
            right: p.qubit_count(),
        });
    }
    let x = mask_bits(p.x_mask());
    let z = mask_bits(p.z_mask());
    let phase = match p.phase_exp() {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    let mut out = vec![Complex64::new(0.0, 0.0); state.amps.len()];
    for (b, amp) in state.amps.iter().enumerate() {
        let sign = if ((b as u64 & z).count_ones()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        out[b ^ x as usize] = phase * sign * amp;
    }
    Ok(DenseState {
        n: state.n,
        amps: out,
    })
}

/// ⟨state| P |state⟩, computed literally.
pub fn expectation_dense(state: &DenseState, p: &PauliTerm) -> DenseResult<Complex64> {
    let moved = apply_pauli_dense(state, p)?;
    state.inner(&moved)
}

/// Dimension of the joint +1 eigenspace of commuting Hermitian involutions,
/// measured as the trace of the literal projector product ∏(1+g)/2. Cost is
/// 4^n, so the qubit bound is tighter than for plain states.
pub fn stabilized_dimension(n: usize, gens: &[PauliTerm]) -> DenseResult<f64> {
    const TRACE_QUBIT_LIMIT: usize = 12;
    if n > TRACE_QUBIT_LIMIT {
        return Err(DenseError::SizeBound {
            qubits: n,
            limit: TRACE_QUBIT_LIMIT,
        });
    }
    for g in gens {
        if g.qubit_count() != n {
            return Err(DenseError::SizeMismatch {
                left: n,
                right: g.qubit_count(),
            });
        }
    }
    let dim = 1usize << n;
    let mut trace = Complex64::new(0.0, 0.0);
    for b in 0..dim {
        let mut v = DenseState::basis_state(n, b)?;
        for g in gens {
            let moved = apply_pauli_dense(&v, g)?;
            let mut amps = Vec::with_capacity(dim);
            for (a, m) in v.amps.iter().zip(&moved.amps) {
                amps.push(0.5 * (a + m));
            }
            v = DenseState { n, amps };
        }
        trace += v.amps[b];
    }
    Ok(trace.re)
}

/// One engine/oracle disagreement found by `equivalence_check`.
#[derive(Debug, Clone)]
pub struct EquivalenceMismatch {
    pub trial: usize,
    pub term: String,
    pub engine_value: i8,
    pub dense_value: Complex64,
}

/// Outcome of a randomized engine-vs-dense certification run.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub trials: usize,
    pub member_trials: usize,
    pub mismatches: Vec<EquivalenceMismatch>,
}

impl EquivalenceReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn random_mask(rng: &mut ChaCha8Rng, n: usize) -> Mask {
    let bits = rng.next_u64() & ((1u64 << n) - 1);
    Mask::from_indices(n, (0..n).filter(|&q| bits >> q & 1 == 1))
        .expect("indices below n are in range")
}

/// Compare the stabilizer engine against the dense oracle on random
/// Hermitian terms over the ground state. Trials alternate between uniform
/// random Hermitian words (which almost always anticommute somewhere, the
/// zero-expectation path) and random signed group members (the ±1 paths).
pub fn equivalence_check(
    lattice: &TorusLattice,
    trials: usize,
    seed: u64,
) -> DenseResult<EquivalenceReport> {
    let n = lattice.edge_count();
    check_qubit_limit(n)?;
    let group = ground_stabilizers(lattice)?;
    let ground = dense_ground_state(lattice)?.state;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = Vec::new();
    let mut member_trials = 0;

    for trial in 0..trials {
        let term = if trial % 2 == 0 {
            // Uniform Hermitian word with a random sign.
            let x = random_mask(&mut rng, n);
            let z = random_mask(&mut rng, n);
            let overlap = x.overlap(&z);
            let sign_flip = (rng.next_u64() % 2) as u8;
            PauliTerm::from_masks(x, z, ((overlap % 2) as u8 + 2 * sign_flip) % 4)?
        } else {
            member_trials += 1;
            let mut acc = PauliTerm::identity(n)?;
            for g in group.generators() {
                if rng.next_u64() % 2 == 1 {
                    acc = acc.multiply(g)?;
                }
            }
            if rng.next_u64() % 2 == 1 {
                acc = acc.negated();
            }
            acc
        };

        let engine_value = group.eigenvalue(&term)?.to_i8();
        let dense_value = expectation_dense(&ground, &term)?;
        let matches = dense_value.im.abs() <= 1e-9
            && (dense_value.re - engine_value as f64).abs() <= 1e-9;
        if !matches {
            mismatches.push(EquivalenceMismatch {
                trial,
                term: term.to_string(),
                engine_value,
                dense_value,
            });
        }
    }

    Ok(EquivalenceReport {
        trials,
        member_trials,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Axis;
    use crate::toric::{face_op, logical_operators, string_op, StringKind};
    use std::collections::BTreeSet;

    #[test]
    fn ground_state_normalization_and_support() {
        let l2 = TorusLattice::new(2).unwrap();
        let g2 = dense_ground_state(&l2).unwrap();
        assert!((g2.state.norm() - 1.0).abs() < 1e-12);
        assert_eq!(g2.state.nonzero_count(1e-9), 8);
        let expected = 2f64.powf(-(4.0 + 1.0) / 2.0);
        assert!((g2.normalization - expected).abs() < 1e-12);

        let l3 = TorusLattice::new(3).unwrap();
        let g3 = dense_ground_state(&l3).unwrap();
        assert!((g3.state.norm() - 1.0).abs() < 1e-12);
        assert_eq!(g3.state.nonzero_count(1e-9), 256);
        assert!((g3.normalization - 1.0 / 32.0).abs() < 1e-12);

        let l4 = TorusLattice::new(4).unwrap();
        assert_eq!(
            dense_ground_state(&l4).unwrap_err(),
            DenseError::SizeBound { qubits: 32, limit: 20 }
        );
    }

    #[test]
    fn all_stabilizers_have_unit_expectation_on_dense_ground() {
        let l = TorusLattice::new(2).unwrap();
        let g = dense_ground_state(&l).unwrap().state;
        for (r, c) in l.vertices() {
            let a = vertex_op(&l, r, c).unwrap();
            let e = expectation_dense(&g, &a).unwrap();
            assert!((e.re - 1.0).abs() < 1e-12 && e.im.abs() < 1e-12);
            let b = face_op(&l, r, c).unwrap();
            let e = expectation_dense(&g, &b).unwrap();
            assert!((e.re - 1.0).abs() < 1e-12 && e.im.abs() < 1e-12);
        }
    }

    #[test]
    fn single_x_and_logical_x_have_zero_expectation() {
        let l = TorusLattice::new(2).unwrap();
        let g = dense_ground_state(&l).unwrap().state;
        let x = PauliTerm::single(8, 0, Axis::X).unwrap();
        assert!(expectation_dense(&g, &x).unwrap().norm() < 1e-12);
        let logicals = logical_operators(&l).unwrap();
        assert!(expectation_dense(&g, &logicals.x1).unwrap().norm() < 1e-12);
        assert!(expectation_dense(&g, &logicals.x2).unwrap().norm() < 1e-12);
        // Logical Z's stabilize the reference ground state.
        assert!((expectation_dense(&g, &logicals.z1).unwrap().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pauli_action_phases_are_exact() {
        // Z0 on |01⟩ (qubit 0 set) flips the sign.
        let s = DenseState::basis_state(2, 0b01).unwrap();
        let z0 = PauliTerm::single(2, 0, Axis::Z).unwrap();
        let t = apply_pauli_dense(&s, &z0).unwrap();
        assert!((t.amps[0b01] - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        // Y0 on |00⟩ = i|01⟩.
        let s0 = DenseState::basis_state(2, 0).unwrap();
        let y0 = PauliTerm::single(2, 0, Axis::Y).unwrap();
        let t = apply_pauli_dense(&s0, &y0).unwrap();
        assert!((t.amps[0b01] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        // X applied twice is the identity.
        let x0 = PauliTerm::single(2, 0, Axis::X).unwrap();
        let twice = apply_pauli_dense(&apply_pauli_dense(&s, &x0).unwrap(), &x0).unwrap();
        assert!(twice.max_abs_diff(&s).unwrap() < 1e-15);
        // The identity with phase exponent 1 scales by i.
        let i_id = PauliTerm::from_masks(Mask::zeros(2), Mask::zeros(2), 1).unwrap();
        let scaled = apply_pauli_dense(&s, &i_id).unwrap();
        assert!(scaled.max_abs_diff(&s.scaled(Complex64::new(0.0, 1.0))).unwrap() < 1e-15);
    }

    #[test]
    fn z_string_excitation_flips_endpoint_vertex_expectations() {
        let l = TorusLattice::new(2).unwrap();
        let g = dense_ground_state(&l).unwrap().state;
        let z = string_op(&l, &BTreeSet::from([0]), StringKind::Z).unwrap();
        let excited = apply_pauli_dense(&g, &z).unwrap();
        // Edge 0 = H(0,0) joins vertices (0,0) and (0,1).
        for (r, c) in l.vertices() {
            let a = vertex_op(&l, r, c).unwrap();
            let e = expectation_dense(&excited, &a).unwrap().re;
            let expected = if (r, c) == (0, 0) || (r, c) == (0, 1) { -1.0 } else { 1.0 };
            assert!((e - expected).abs() < 1e-12, "vertex ({r},{c})");
        }
    }

    #[test]
    fn projector_traces_count_degeneracy() {
        let l = TorusLattice::new(2).unwrap();
        let full = ground_stabilizers(&l).unwrap();
        let dim_full = stabilized_dimension(8, full.generators()).unwrap();
        assert!((dim_full - 1.0).abs() < 1e-9);

        // Independent vertex/face generators only: the 4-dimensional ground
        // space of the Hamiltonian.
        let mut ab = Vec::new();
        for (r, c) in l.vertices() {
            if (r, c) != (1, 1) {
                ab.push(vertex_op(&l, r, c).unwrap());
                ab.push(face_op(&l, r, c).unwrap());
            }
        }
        let dim_ab = stabilized_dimension(8, &ab).unwrap();
        assert!((dim_ab - 4.0).abs() < 1e-9);

        assert_eq!(
            stabilized_dimension(18, full.generators()).unwrap_err(),
            DenseError::SizeBound { qubits: 18, limit: 12 }
        );
    }

    #[test]
    fn equivalence_check_is_clean_on_small_lattices() {
        let l = TorusLattice::new(2).unwrap();
        let report = equivalence_check(&l, 200, 7).unwrap();
        assert_eq!(report.trials, 200);
        assert_eq!(report.member_trials, 100);
        assert!(report.is_clean(), "mismatches: {:?}", report.mismatches);
    }

    #[test]
    fn constructors_validate_their_inputs() {
        assert_eq!(
            DenseState::basis_state(21, 0).unwrap_err(),
            DenseError::SizeBound { qubits: 21, limit: 20 }
        );
        let bad_len = vec![Complex64::new(1.0, 0.0); 3];
        assert_eq!(
            DenseState::from_amplitudes(bad_len).unwrap_err(),
            DenseError::NotAPowerOfTwo { len: 3 }
        );
        let unnormalized = vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)];
        assert!(matches!(
            DenseState::from_amplitudes(unnormalized).unwrap_err(),
            DenseError::NotNormalized { .. }
        ));
        let s = DenseState::basis_state(2, 0).unwrap();
        let p = PauliTerm::identity(3).unwrap();
        assert_eq!(
            apply_pauli_dense(&s, &p).unwrap_err(),
            DenseError::SizeMismatch { left: 2, right: 3 }
        );
    }
}
