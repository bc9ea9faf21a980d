//! Probe-qubit interferometry for composite string operations.
//!
//! A probe prepared in (|0⟩ + |1⟩)/√2 controls one composite operation on
//! the memory. Because the memory is an exact ±1 eigenstate, the branch
//! picks up only the eigenvalue phase: the probe ends in
//! (|0⟩ + e^{iθ}|1⟩)/√2 with θ ∈ {0, π}, and measuring σ_φ traces the
//! fringe ⟨σ_φ⟩ = cos(φ − θ). The memory register is never simulated
//! jointly; θ comes from the exact stabilizer eigenvalue.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::ghz::{composite_operator, DLabel, DOperation, GhzError};
use crate::lattice::TorusLattice;
use crate::stabilizer::{Expectation, StabilizerError, StabilizerGroup};

pub type InterferometryResult<T> = Result<T, InterferometryError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InterferometryError {
    #[error("{label}: composite has zero expectation on the prepared state; the probe would decohere")]
    WouldDecohere { label: DLabel },
    #[error("shot sampling needs at least one shot")]
    ZeroShots,
    #[error(transparent)]
    Ghz(#[from] GhzError),
    #[error(transparent)]
    Stabilizer(#[from] StabilizerError),
}

/// Probe qubit after the controlled operation: (|0⟩ + e^{iθ}|1⟩)/√2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeState {
    theta: f64,
}

impl ProbeState {
    /// Normalizes the phase into [0, 2π).
    pub fn new(theta: f64) -> ProbeState {
        ProbeState {
            theta: theta.rem_euclid(TAU),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Run the controlled-string operation: the |1⟩ branch applies the
/// composite, whose exact eigenvalue becomes the relative phase
/// (+1 → θ = 0, −1 → θ = π). A state that is not an eigenstate of the
/// composite would entangle with the probe instead; that is reported as
/// decoherence, not as a silent zero.
pub fn controlled_string_probe(
    lattice: &TorusLattice,
    ground: &StabilizerGroup,
    d: &DOperation,
) -> InterferometryResult<ProbeState> {
    let composite = composite_operator(lattice, d)?;
    match ground.eigenvalue(&composite)? {
        Expectation::PlusOne => Ok(ProbeState::new(0.0)),
        Expectation::MinusOne => Ok(ProbeState::new(std::f64::consts::PI)),
        Expectation::Zero => Err(InterferometryError::WouldDecohere { label: d.label() }),
    }
}

/// ⟨σ_φ⟩ = cos(φ − θ).
pub fn sigma_phi_expectation(probe: &ProbeState, phi: f64) -> f64 {
    (phi - probe.theta).cos()
}

/// Draw `shots` Bernoulli outcomes with p(+1) = (1 + cos(φ − θ))/2 from a
/// seeded generator; deterministic for a fixed seed.
pub fn sample_shots(
    probe: &ProbeState,
    phi: f64,
    shots: u64,
    seed: u64,
) -> InterferometryResult<(u64, u64)> {
    if shots == 0 {
        return Err(InterferometryError::ZeroShots);
    }
    let p_plus = (1.0 + sigma_phi_expectation(probe, phi)) / 2.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut plus = 0u64;
    for _ in 0..shots {
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        if u < p_plus {
            plus += 1;
        }
    }
    Ok((plus, shots - plus))
}

/// Whether a fringe point is analytic or estimated from counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    Analytic,
    /// Per-point seeds are `seed + point index`, so a scan is reproducible
    /// while points stay independent.
    Sampled {
        shots: u64,
        seed: u64,
    },
}

/// Shot bookkeeping for one sampled fringe point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotRecord {
    pub shots: u64,
    pub plus: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringePoint {
    pub phi: f64,
    pub expectation: f64,
    pub shots: Option<ShotRecord>,
}

/// One fringe curve: the probe phase and the scanned points.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeSeries {
    theta: f64,
    points: Vec<FringePoint>,
}

impl FringeSeries {
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn points(&self) -> &[FringePoint] {
        &self.points
    }

    /// max − min of the recorded expectations.
    pub fn contrast(&self) -> f64 {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for p in &self.points {
            min = min.min(p.expectation);
            max = max.max(p.expectation);
        }
        if self.points.is_empty() {
            0.0
        } else {
            max - min
        }
    }

    /// phi of the highest recorded expectation (first on ties).
    pub fn argmax_phi(&self) -> Option<f64> {
        self.points
            .iter()
            .max_by(|a, b| a.expectation.total_cmp(&b.expectation))
            .map(|p| p.phi)
    }

    /// CSV with header `phi,expectation` (analytic) or
    /// `phi,expectation,shots,plus` (sampled); 12 significant digits, LF
    /// line endings.
    pub fn to_csv(&self) -> String {
        let sampled = self.points.first().is_some_and(|p| p.shots.is_some());
        let mut out = String::new();
        if sampled {
            out.push_str("phi,expectation,shots,plus\n");
        } else {
            out.push_str("phi,expectation\n");
        }
        for p in &self.points {
            match p.shots {
                Some(rec) => {
                    let _ = writeln!(
                        out,
                        "{:.11e},{:.11e},{},{}",
                        p.phi, p.expectation, rec.shots, rec.plus
                    );
                }
                None => {
                    let _ = writeln!(out, "{:.11e},{:.11e}", p.phi, p.expectation);
                }
            }
        }
        out
    }
}

/// Evenly spaced phis over the closed-open interval [0, 2π).
pub fn phi_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| TAU * i as f64 / points as f64)
        .collect()
}

/// Scan ⟨σ_φ⟩ over the given phis for one composite operation.
pub fn fringe_scan(
    lattice: &TorusLattice,
    ground: &StabilizerGroup,
    d: &DOperation,
    phis: &[f64],
    mode: SampleMode,
) -> InterferometryResult<FringeSeries> {
    let probe = controlled_string_probe(lattice, ground, d)?;
    let mut points = Vec::with_capacity(phis.len());
    for (i, &phi) in phis.iter().enumerate() {
        let point = match mode {
            SampleMode::Analytic => FringePoint {
                phi,
                expectation: sigma_phi_expectation(&probe, phi),
                shots: None,
            },
            SampleMode::Sampled { shots, seed } => {
                let point_seed = seed.wrapping_add(i as u64);
                let (plus, minus) = sample_shots(&probe, phi, shots, point_seed)?;
                FringePoint {
                    phi,
                    expectation: (plus as f64 - minus as f64) / shots as f64,
                    shots: Some(ShotRecord {
                        shots,
                        plus,
                        seed: point_seed,
                    }),
                }
            }
        };
        points.push(point);
    }
    Ok(FringeSeries {
        theta: probe.theta(),
        points,
    })
}
