//! Acceptance gate for the verification engine. One test per criterion;
//! each prints a single `acceptance N PASS` line on success and pins its
//! tolerances and time budget as constants in the test body.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_ghz::{
    braiding_phase, build_record_with, canonical_dset, composite_operator, dense_ground_state,
    equivalence_check, expectation_dense, face_op, fringe_scan, generate_paradox_sets,
    ground_basis, ground_stabilizers, logical_operators, measurement_equations, phi_grid,
    parity_contradiction, stabilized_dimension, vertex_op, Axis, DSet, GroundBasisLabel, Loop,
    LoopKind, PauliTerm, SampleMode, Sign, StabilizerGroup, TorusLattice,
};

const EXPECTED_EIGENVALUES: [i8; 4] = [-1, -1, -1, 1];

/// Criterion 1: canonical eigenvalues at every anchor, every ground basis,
/// k ∈ {3,4,5,6}; exact integers, under one second per lattice size.
#[test]
fn acceptance_1_canonical_eigenvalues() {
    const BUDGET_PER_K: Duration = Duration::from_secs(1);
    for k in [3usize, 4, 5, 6] {
        let started = Instant::now();
        let lattice = TorusLattice::new(k).unwrap();
        for label in GroundBasisLabel::all() {
            let group = ground_basis(&lattice, label).unwrap();
            for (r, c) in lattice.vertices() {
                let dset = canonical_dset(&lattice, (r, c)).unwrap();
                for (op, want) in dset.ops().iter().zip(EXPECTED_EIGENVALUES) {
                    let composite = composite_operator(&lattice, op).unwrap();
                    let value = group.eigenvalue(&composite).unwrap();
                    assert_eq!(
                        value.to_i8(),
                        want,
                        "k={k} anchor=({r},{c}) {} on basis {label:?}",
                        op.label()
                    );
                }
            }
        }
        let elapsed = started.elapsed();
        assert!(elapsed < BUDGET_PER_K, "k={k} took {elapsed:?}");
    }
    println!("acceptance 1 PASS: eigenvalues (-1,-1,-1,+1) at every anchor and basis, k=3..6");
}

/// Criterion 2: the canonical equations admit no satisfying assignment over
/// all 2^11 observable valuations, and the parity product argument holds.
#[test]
fn acceptance_2_lr_contradiction() {
    const BUDGET: Duration = Duration::from_secs(1);
    let started = Instant::now();
    let lattice = TorusLattice::new(3).unwrap();
    let dset = canonical_dset(&lattice, (1, 1)).unwrap();
    let equations = measurement_equations(&lattice, &dset).unwrap();
    let distinct: BTreeSet<(usize, Axis)> = equations
        .iter()
        .flat_map(|eq| eq.terms().iter().copied())
        .collect();
    assert_eq!(distinct.len(), 11, "the canonical system has 11 observables");
    assert_eq!(toric_ghz::lr_assignment_search(&equations).unwrap(), 0);
    assert!(parity_contradiction(&equations));
    let elapsed = started.elapsed();
    assert!(elapsed < BUDGET, "took {elapsed:?}");
    println!("acceptance 2 PASS: 0 of 2^11 assignments satisfy the equations; parity argument holds");
}

/// Criterion 3: engine-vs-dense classification on 1000 seeded Hermitian
/// terms at k=2 and k=3 (dense tolerance 1e-9), and the canonical
/// eigenvalues reproduced densely at k=3.
#[test]
fn acceptance_3_oracle_equivalence() {
    const BUDGET: Duration = Duration::from_secs(30);
    const TOLERANCE: f64 = 1e-9;
    let started = Instant::now();
    for (k, seed) in [(2usize, 11u64), (3, 13)] {
        let lattice = TorusLattice::new(k).unwrap();
        let report = equivalence_check(&lattice, 1000, seed).unwrap();
        assert_eq!(report.trials, 1000);
        assert!(report.is_clean(), "k={k}: {:?}", report.mismatches);
    }
    let lattice = TorusLattice::new(3).unwrap();
    let ground = dense_ground_state(&lattice).unwrap();
    let dset = canonical_dset(&lattice, (1, 1)).unwrap();
    for (op, want) in dset.ops().iter().zip(EXPECTED_EIGENVALUES) {
        let composite = composite_operator(&lattice, op).unwrap();
        let value = expectation_dense(&ground.state, &composite).unwrap();
        assert!(
            (value.re - f64::from(want)).abs() < TOLERANCE && value.im.abs() < TOLERANCE,
            "{}: dense expectation {value}",
            op.label()
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed < BUDGET, "took {elapsed:?}");
    println!("acceptance 3 PASS: dense and stabilizer classifications agree on 2000 seeded terms");
}

/// Criterion 4: the A/B-only group has rank 2k²−2 and stabilizes a
/// 4-dimensional space at k=2; the logical pairs reproduce the two-qubit
/// Pauli commutation table.
#[test]
fn acceptance_4_ground_space_structure() {
    const TOLERANCE: f64 = 1e-9;
    let lattice = TorusLattice::new(2).unwrap();
    let k = 2usize;
    let mut gens: Vec<PauliTerm> = Vec::new();
    for (r, c) in lattice.vertices() {
        if (r, c) != (k - 1, k - 1) {
            gens.push(vertex_op(&lattice, r, c).unwrap());
        }
    }
    for (r, c) in lattice.faces() {
        if (r, c) != (k - 1, k - 1) {
            gens.push(face_op(&lattice, r, c).unwrap());
        }
    }
    let group = StabilizerGroup::from_generators(gens.clone()).unwrap();
    assert_eq!(group.rank(), 2 * k * k - 2);
    let dim = stabilized_dimension(lattice.edge_count(), &gens).unwrap();
    assert!((dim - 4.0).abs() < TOLERANCE, "dimension {dim}");

    for k in [2usize, 3] {
        let lattice = TorusLattice::new(k).unwrap();
        let logical = logical_operators(&lattice).unwrap();
        let pairs = [
            (&logical.x1, &logical.z1, false),
            (&logical.x2, &logical.z2, false),
            (&logical.x1, &logical.z2, true),
            (&logical.x2, &logical.z1, true),
            (&logical.x1, &logical.x2, true),
            (&logical.z1, &logical.z2, true),
        ];
        for (a, b, commute) in pairs {
            assert_eq!(a.commutes_with(b).unwrap(), commute, "k={k}: {a} vs {b}");
        }
        for op in [&logical.x1, &logical.z1, &logical.x2, &logical.z2] {
            assert_eq!(op.hermitian_sign(), Some(Sign::Plus));
            assert!(op.multiply(op).unwrap().is_identity_word());
            for (r, c) in lattice.vertices() {
                assert!(op.commutes_with(&vertex_op(&lattice, r, c).unwrap()).unwrap());
                assert!(op.commutes_with(&face_op(&lattice, r, c).unwrap()).unwrap());
            }
        }
    }
    println!("acceptance 4 PASS: A/B group stabilizes a 4-dimensional space; logicals form the two-qubit table");
}

/// Criterion 5: 200 randomized braiding instances across k ∈ {3,4,5} match
/// (−1)^(shared-edge count); enclosing exactly one endpoint gives −1.
#[test]
fn acceptance_5_braiding_phase() {
    const BUDGET: Duration = Duration::from_secs(5);
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut instances = 0usize;
    for (k, count) in [(3usize, 67usize), (4, 67), (5, 66)] {
        let lattice = TorusLattice::new(k).unwrap();
        for _ in 0..count {
            let path = random_open_path(&lattice, &mut rng);
            let x_loop = random_contractible_dual(&lattice, &mut rng);
            let shared = lattice.intersection_count(&x_loop, &path).unwrap();
            let expected = if shared % 2 == 0 { Sign::Plus } else { Sign::Minus };
            assert_eq!(
                braiding_phase(&lattice, &path, &x_loop).unwrap(),
                expected,
                "k={k}, shared={shared}"
            );
            instances += 1;
        }
        // Single-edge string with the loop around one of its endpoints:
        // the loop always crosses the string exactly once.
        for _ in 0..10 {
            let edge = (rng.next_u64() as usize) % lattice.edge_count();
            let ((r, c), _) = lattice.edge_endpoints(edge).unwrap();
            let x_loop = lattice.star_loop(r, c).unwrap();
            assert_eq!(
                braiding_phase(&lattice, &BTreeSet::from([edge]), &x_loop).unwrap(),
                Sign::Minus
            );
        }
    }
    assert_eq!(instances, 200);
    let elapsed = started.elapsed();
    assert!(elapsed < BUDGET, "took {elapsed:?}");
    println!("acceptance 5 PASS: 200 braiding instances match (-1)^overlap; one-endpoint case is -1");
}

/// Criterion 6: every emitted set at k=3 obeys the sign and product laws
/// and admits no satisfying assignment; the canonical configurations are
/// all rediscovered. The max_loop_len=4 stream is checked exhaustively
/// (every canonical configuration uses 4-edge loops, so rediscovery is
/// complete there); the max_loop_len=8 stream - 550,908 sets in full, an
/// order of magnitude beyond the time budget - is checked over its first
/// 5000 emissions.
#[test]
fn acceptance_6_generator_soundness() {
    const BUDGET: Duration = Duration::from_secs(60);
    const ML8_PREFIX: usize = 5000;
    let started = Instant::now();
    let lattice = TorusLattice::new(3).unwrap();
    let ground = ground_stabilizers(&lattice).unwrap();

    let short: Vec<DSet> = generate_paradox_sets(&lattice, 4, usize::MAX)
        .unwrap()
        .collect();
    assert_eq!(short.len(), 36);
    for dset in &short {
        check_emitted_set(&lattice, &ground, dset);
    }
    // Rediscovery: each anchor's canonical configuration appears with the
    // same x-loop, z-pair, and equation set.
    for (r, c) in lattice.vertices() {
        let canon = canonical_dset(&lattice, (r, c)).unwrap();
        let canon_pair = BTreeSet::from([canon.ops()[0].z_union(), canon.ops()[1].z_union()]);
        let hit = short
            .iter()
            .find(|s| {
                s.x_loop() == canon.x_loop()
                    && BTreeSet::from([s.ops()[0].z_union(), s.ops()[1].z_union()]) == canon_pair
            })
            .unwrap_or_else(|| panic!("anchor ({r},{c}) not rediscovered"));
        assert_eq!(
            equation_fingerprint(&lattice, &ground, hit),
            equation_fingerprint(&lattice, &ground, &canon)
        );
    }

    let long: Vec<DSet> = generate_paradox_sets(&lattice, 8, ML8_PREFIX)
        .unwrap()
        .collect();
    assert_eq!(long.len(), ML8_PREFIX);
    for dset in &long {
        check_emitted_set(&lattice, &ground, dset);
    }
    let elapsed = started.elapsed();
    assert!(elapsed < BUDGET, "took {elapsed:?}");
    println!(
        "acceptance 6 PASS: all 36 length-4 sets and the first {ML8_PREFIX} length-8 sets sound; canonical sets rediscovered"
    );
}

/// Criterion 7: exact contrast 2, a π shift between D1/D2/D3 and D4 maxima
/// on the 64-point grid, and sampled curves within 0.05 mean absolute error
/// at 10^4 shots.
#[test]
fn acceptance_7_interferometry() {
    const BUDGET: Duration = Duration::from_secs(10);
    const SHOTS: u64 = 10_000;
    const MAE_BOUND: f64 = 0.05;
    let started = Instant::now();
    let lattice = TorusLattice::new(3).unwrap();
    let ground = ground_stabilizers(&lattice).unwrap();
    let dset = canonical_dset(&lattice, (1, 1)).unwrap();
    let phis = phi_grid(64);

    let d4 = fringe_scan(&lattice, &ground, &dset.ops()[3], &phis, SampleMode::Analytic).unwrap();
    assert_eq!(d4.contrast(), 2.0);
    for op in &dset.ops()[..3] {
        let series = fringe_scan(&lattice, &ground, op, &phis, SampleMode::Analytic).unwrap();
        assert_eq!(series.contrast(), 2.0);
        let shift = (series.argmax_phi().unwrap() - d4.argmax_phi().unwrap()).abs();
        assert_eq!(shift, std::f64::consts::PI, "{}", op.label());
    }

    for (i, op) in dset.ops().iter().enumerate() {
        let analytic =
            fringe_scan(&lattice, &ground, op, &phis, SampleMode::Analytic).unwrap();
        let sampled = fringe_scan(
            &lattice,
            &ground,
            op,
            &phis,
            SampleMode::Sampled {
                shots: SHOTS,
                seed: 1000 + i as u64,
            },
        )
        .unwrap();
        let mae: f64 = analytic
            .points()
            .iter()
            .zip(sampled.points())
            .map(|(a, s)| (a.expectation - s.expectation).abs())
            .sum::<f64>()
            / phis.len() as f64;
        assert!(mae < MAE_BOUND, "{}: mae {mae}", op.label());
    }
    let elapsed = started.elapsed();
    assert!(elapsed < BUDGET, "took {elapsed:?}");
    println!("acceptance 7 PASS: contrast exactly 2, π fringe shift, sampled MAE < 0.05 at 10^4 shots");
}

fn check_emitted_set(lattice: &TorusLattice, ground: &StabilizerGroup, dset: &DSet) {
    let lx = dset.x_loop();
    let ms: Vec<usize> = dset.ops()[..3]
        .iter()
        .map(|op| lattice.intersection_count(lx, &op.z_union()).unwrap())
        .collect();
    let t = lx
        .edges()
        .iter()
        .filter(|e| dset.ops()[0].z_union().contains(e) && dset.ops()[1].z_union().contains(e))
        .count();
    assert_eq!((t + ms[0] + ms[1]) % 2, 1, "emitted set must have odd t+m1+m2");

    let record = build_record_with(lattice, ground, dset).unwrap();
    for (j, &m) in ms.iter().enumerate() {
        let expected = if (m / 2) % 2 == 0 { 1 } else { -1 };
        assert_eq!(record.eigenvalues[j], expected, "sign law for operation {j}");
    }
    assert_eq!(record.eigenvalues[3], 1);
    assert_eq!(record.eigenvalues.iter().product::<i8>(), -1);
    assert_eq!(record.lr_satisfying, 0);
}

fn equation_fingerprint(
    lattice: &TorusLattice,
    ground: &StabilizerGroup,
    dset: &DSet,
) -> BTreeSet<(Vec<(usize, Axis)>, i8)> {
    build_record_with(lattice, ground, dset)
        .unwrap()
        .equations
        .iter()
        .map(|eq| (eq.terms.clone(), eq.parity))
        .collect()
}

fn random_contractible_dual(lattice: &TorusLattice, rng: &mut ChaCha8Rng) -> Loop {
    let k = lattice.k();
    loop {
        let mut acc = Loop::new(LoopKind::Dual, []);
        let mut any = false;
        for (r, c) in lattice.vertices() {
            if (r, c) == (k - 1, k - 1) {
                continue;
            }
            if rng.next_u64() & 1 == 1 {
                acc = acc.xor(&lattice.star_loop(r, c).unwrap()).unwrap();
                any = true;
            }
        }
        if any {
            return acc;
        }
    }
}

fn random_open_path(lattice: &TorusLattice, rng: &mut ChaCha8Rng) -> BTreeSet<usize> {
    let k = lattice.k();
    loop {
        let start = (
            (rng.next_u64() as usize) % k,
            (rng.next_u64() as usize) % k,
        );
        let steps = 1 + (rng.next_u64() as usize) % (2 * k);
        let mut cur = start;
        let mut edges: BTreeSet<usize> = BTreeSet::new();
        for _ in 0..steps {
            let star: Vec<usize> = lattice.star(cur.0, cur.1).unwrap().into_iter().collect();
            let e = star[(rng.next_u64() as usize) % star.len()];
            if !edges.insert(e) {
                edges.remove(&e);
            }
            let (a, b) = lattice.edge_endpoints(e).unwrap();
            cur = if a == cur { b } else { a };
        }
        if cur != start {
            return edges;
        }
    }
}
