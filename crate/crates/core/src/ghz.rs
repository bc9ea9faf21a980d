//! The all-versus-nothing contradiction built from composite string
//! operations.
//!
//! Four operations D1..D4 share one closed x-loop; D1..D3 sandwich it
//! between two z-strings that together close a small primal loop. Their
//! exact ground-state eigenvalues give four parity equations over
//! single-qubit observables that no ±1 assignment can satisfy, which this
//! module demonstrates twice: by exhaustive search over all assignments and
//! by the multiset parity argument. It also enumerates every small loop
//! configuration with the same property.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{LatticeError, Loop, LoopKind, TorusLattice};
use crate::pauli::{Axis, PauliError, PauliTerm, Sign};
use crate::stabilizer::{Expectation, StabilizerError, StabilizerGroup};
use crate::toric::{ground_stabilizers, string_op, StringKind, ToricError};

pub type GhzResult<T> = Result<T, GhzError>;

/// Exhaustive-search bound for `lr_assignment_search`.
pub const LR_OBSERVABLE_LIMIT: usize = 25;

/// Largest side length `generate_paradox_sets` accepts; the cycle
/// enumeration walks 2^(k²−1) subsets per lattice kind.
pub const ENUMERATION_K_LIMIT: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GhzError {
    #[error("the composite construction needs k ≥ 3, got {k}")]
    LatticeTooSmall { k: usize },
    #[error("enumeration on k={k} would walk 2^(k²−1) subsets; bound is k ≤ {limit}")]
    EnumerationTooLarge { k: usize, limit: usize },
    #[error("{label}: pre and post z-strings overlap")]
    OverlappingSplit { label: DLabel },
    #[error("{label}: z-string union is not a closed primal loop")]
    ZStringNotClosed { label: DLabel },
    #[error("{label}: z-string union is not contractible")]
    ZStringNotContractible { label: DLabel },
    #[error("{label}: x-loop is not a closed dual loop")]
    XLoopNotClosed { label: DLabel },
    #[error("{label}: x-loop is not contractible")]
    XLoopNotContractible { label: DLabel },
    #[error("{label}: composite is not the +1 Hermitian word; the split is invalid")]
    InvalidSplit { label: DLabel },
    #[error("{label}: composite has zero expectation on the ground state")]
    ZeroExpectation { label: DLabel },
    #[error("qubit {qubit} appears twice in one measurement equation")]
    DuplicateObservable { qubit: usize },
    #[error("{count} distinct observables exceed the exhaustive bound of {limit}")]
    TooManyObservables { count: usize, limit: usize },
    #[error("invalid operation set: {detail}")]
    InvalidDSet { detail: String },
    #[error("malformed record: {detail}")]
    MalformedRecord { detail: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Stabilizer(#[from] StabilizerError),
    #[error(transparent)]
    Toric(#[from] ToricError),
}

/// Which of the four composite operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DLabel {
    D1,
    D2,
    D3,
    D4,
}

impl DLabel {
    pub fn all() -> [DLabel; 4] {
        [DLabel::D1, DLabel::D2, DLabel::D3, DLabel::D4]
    }

    pub fn index(self) -> usize {
        match self {
            DLabel::D1 => 0,
            DLabel::D2 => 1,
            DLabel::D3 => 2,
            DLabel::D4 => 3,
        }
    }
}

impl fmt::Display for DLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DLabel::D1 => write!(f, "D1"),
            DLabel::D2 => write!(f, "D2"),
            DLabel::D3 => write!(f, "D3"),
            DLabel::D4 => write!(f, "D4"),
        }
    }
}

/// One composite string operation: apply the pre z-string, then the x-loop,
/// then the post z-string. Pre and post together form the z-loop L_z.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DOperation {
    label: DLabel,
    pre_z: BTreeSet<usize>,
    x_loop: Loop,
    post_z: BTreeSet<usize>,
}

impl DOperation {
    pub fn new<P, Q>(label: DLabel, pre_z: P, x_loop: Loop, post_z: Q) -> DOperation
    where
        P: IntoIterator<Item = usize>,
        Q: IntoIterator<Item = usize>,
    {
        DOperation {
            label,
            pre_z: pre_z.into_iter().collect(),
            x_loop,
            post_z: post_z.into_iter().collect(),
        }
    }

    pub fn label(&self) -> DLabel {
        self.label
    }

    pub fn pre_z(&self) -> &BTreeSet<usize> {
        &self.pre_z
    }

    pub fn post_z(&self) -> &BTreeSet<usize> {
        &self.post_z
    }

    pub fn x_loop(&self) -> &Loop {
        &self.x_loop
    }

    /// The full z-loop L_z = pre ∪ post.
    pub fn z_union(&self) -> BTreeSet<usize> {
        self.pre_z.union(&self.post_z).copied().collect()
    }
}

/// One parity constraint over single-qubit observables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementEquation {
    terms: Vec<(usize, Axis)>,
    parity: Sign,
}

impl MeasurementEquation {
    pub fn new(mut terms: Vec<(usize, Axis)>, parity: Sign) -> GhzResult<MeasurementEquation> {
        terms.sort();
        for pair in terms.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(GhzError::DuplicateObservable { qubit: pair[0].0 });
            }
        }
        Ok(MeasurementEquation { terms, parity })
    }

    /// (qubit, axis) pairs in ascending qubit order.
    pub fn terms(&self) -> &[(usize, Axis)] {
        &self.terms
    }

    pub fn parity(&self) -> Sign {
        self.parity
    }
}

/// Four operations sharing one x-loop, with L_z(D3) = L_z(D1) xor L_z(D2)
/// and D4 bare.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DSet {
    k: usize,
    anchor: Option<(usize, usize)>,
    ops: [DOperation; 4],
}

impl DSet {
    pub fn new(
        k: usize,
        anchor: Option<(usize, usize)>,
        ops: [DOperation; 4],
    ) -> GhzResult<DSet> {
        for (op, want) in ops.iter().zip(DLabel::all()) {
            if op.label() != want {
                return Err(GhzError::InvalidDSet {
                    detail: format!("operation in slot {want} is labeled {}", op.label()),
                });
            }
        }
        let x0 = ops[0].x_loop();
        if ops.iter().any(|op| op.x_loop() != x0) {
            return Err(GhzError::InvalidDSet {
                detail: "the four operations must share one x-loop".into(),
            });
        }
        let want_lz3: BTreeSet<usize> = ops[0]
            .z_union()
            .symmetric_difference(&ops[1].z_union())
            .copied()
            .collect();
        if ops[2].z_union() != want_lz3 {
            return Err(GhzError::InvalidDSet {
                detail: "L_z(D3) must be the symmetric difference of L_z(D1) and L_z(D2)".into(),
            });
        }
        if !ops[3].pre_z().is_empty() || !ops[3].post_z().is_empty() {
            return Err(GhzError::InvalidDSet {
                detail: "D4 must carry no z-strings".into(),
            });
        }
        Ok(DSet { k, anchor, ops })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn anchor(&self) -> Option<(usize, usize)> {
        self.anchor
    }

    pub fn ops(&self) -> &[DOperation; 4] {
        &self.ops
    }

    pub fn x_loop(&self) -> &Loop {
        self.ops[0].x_loop()
    }
}

/// Operator product S^z_post · S^x_loop · S^z_pre, validated: the z-union
/// must be empty or a contractible primal cycle, the x-loop a contractible
/// dual cycle, and the resulting word must come out as the +1-signed
/// Hermitian term (any split with the wrong pre/post balance flips its sign
/// and is rejected).
pub fn composite_operator(lattice: &TorusLattice, d: &DOperation) -> GhzResult<PauliTerm> {
    let label = d.label();
    if !d.pre_z().is_disjoint(d.post_z()) {
        return Err(GhzError::OverlappingSplit { label });
    }
    if d.x_loop().kind() != LoopKind::Dual || !lattice.is_cycle(d.x_loop())? {
        return Err(GhzError::XLoopNotClosed { label });
    }
    if lattice.homology_class(d.x_loop())? != (0, 0) {
        return Err(GhzError::XLoopNotContractible { label });
    }
    let z_union = d.z_union();
    if !z_union.is_empty() {
        let z_loop = Loop::new(LoopKind::Primal, z_union.iter().copied());
        if !lattice.is_cycle(&z_loop)? {
            return Err(GhzError::ZStringNotClosed { label });
        }
        if lattice.homology_class(&z_loop)? != (0, 0) {
            return Err(GhzError::ZStringNotContractible { label });
        }
    }

    let pre = string_op(lattice, d.pre_z(), StringKind::Z)?;
    let x = string_op(lattice, d.x_loop().edges(), StringKind::X)?;
    let post = string_op(lattice, d.post_z(), StringKind::Z)?;
    let composite = post.multiply(&x)?.multiply(&pre)?;
    if composite.hermitian_sign() != Some(Sign::Plus) {
        return Err(GhzError::InvalidSplit { label });
    }
    Ok(composite)
}

/// The reference embedding around an anchor vertex v=(r,c) on a k ≥ 3
/// torus: the x-loop is star(v), L_z(D1) and L_z(D2) are the boundaries of
/// the faces above and below-right of v (sharing the edge H(r,c)), and the
/// splits put one shared x-edge in front.
pub fn canonical_dset(lattice: &TorusLattice, anchor: (usize, usize)) -> GhzResult<DSet> {
    let k = lattice.k();
    if k < 3 {
        return Err(GhzError::LatticeTooSmall { k });
    }
    let (r, c) = anchor;
    let up = (r + k - 1) % k;
    let left = (c + k - 1) % k;
    let down = (r + 1) % k;
    let right = (c + 1) % k;

    // The eight qubits of the embedding.
    let q1 = lattice.v_edge(up, c)?;
    let q2 = lattice.h_edge(r, c)?;
    let q3 = lattice.v_edge(r, c)?;
    let q4 = lattice.h_edge(r, left)?;
    let q5 = lattice.h_edge(up, c)?;
    let q6 = lattice.v_edge(up, right)?;
    let q7 = lattice.v_edge(r, right)?;
    let q8 = lattice.h_edge(down, c)?;

    let x_loop = lattice.star_loop(r, c)?;
    debug_assert_eq!(
        x_loop.edges(),
        &BTreeSet::from([q1, q2, q3, q4]),
        "star(v) must consist of qubits 1..4"
    );
    debug_assert_eq!(lattice.boundary(up, c)?, BTreeSet::from([q1, q2, q5, q6]));
    debug_assert_eq!(lattice.boundary(r, c)?, BTreeSet::from([q2, q3, q7, q8]));

    let d1 = DOperation::new(DLabel::D1, [q2], x_loop.clone(), [q6, q5, q1]);
    let d2 = DOperation::new(DLabel::D2, [q3], x_loop.clone(), [q8, q7, q2]);
    let d3 = DOperation::new(DLabel::D3, [q3], x_loop.clone(), [q8, q7, q6, q5, q1]);
    let d4 = DOperation::new(DLabel::D4, [], x_loop, []);
    DSet::new(k, Some((r, c)), [d1, d2, d3, d4])
}

fn equations_with_group(
    lattice: &TorusLattice,
    ground: &StabilizerGroup,
    dset: &DSet,
) -> GhzResult<[MeasurementEquation; 4]> {
    let mut out = Vec::with_capacity(4);
    for op in dset.ops() {
        let composite = composite_operator(lattice, op)?;
        let parity = match ground.eigenvalue(&composite)? {
            Expectation::PlusOne => Sign::Plus,
            Expectation::MinusOne => Sign::Minus,
            Expectation::Zero => return Err(GhzError::ZeroExpectation { label: op.label() }),
        };
        let mut terms = Vec::new();
        for q in composite.support() {
            let axis = composite
                .axis_on(q)?
                .expect("support carries an axis on every qubit");
            terms.push((q, axis));
        }
        out.push(MeasurementEquation::new(terms, parity)?);
    }
    Ok(out.try_into().expect("exactly four operations"))
}

/// Read the four parity equations off the composites: terms are the
/// per-qubit content, the parity is the exact ground-state eigenvalue.
pub fn measurement_equations(
    lattice: &TorusLattice,
    dset: &DSet,
) -> GhzResult<[MeasurementEquation; 4]> {
    let ground = ground_stabilizers(lattice)?;
    equations_with_group(lattice, &ground, dset)
}

/// Count the ±1 assignments to the distinct (qubit, axis) observables that
/// satisfy every equation, by walking all 2^v assignments in Gray-code
/// order. Refuses beyond 25 observables rather than sampling.
pub fn lr_assignment_search(equations: &[MeasurementEquation]) -> GhzResult<u64> {
    let mut observables: BTreeSet<(usize, Axis)> = BTreeSet::new();
    for eq in equations {
        observables.extend(eq.terms().iter().copied());
    }
    let count = observables.len();
    if count > LR_OBSERVABLE_LIMIT {
        return Err(GhzError::TooManyObservables {
            count,
            limit: LR_OBSERVABLE_LIMIT,
        });
    }
    let index: BTreeMap<(usize, Axis), usize> = observables
        .into_iter()
        .enumerate()
        .map(|(i, o)| (o, i))
        .collect();

    assert!(equations.len() <= 64, "parity state is packed into a u64");
    let mut toggles = vec![0u64; count];
    let mut target = 0u64;
    for (ei, eq) in equations.iter().enumerate() {
        for term in eq.terms() {
            toggles[index[term]] ^= 1 << ei;
        }
        if eq.parity() == Sign::Minus {
            target |= 1 << ei;
        }
    }

    // state bit e = 1 iff equation e currently multiplies to −1; flipping
    // one observable toggles exactly the equations containing it.
    let mut state = 0u64;
    let mut satisfying = 0u64;
    if state == target {
        satisfying += 1;
    }
    for step in 1u64..(1u64 << count) {
        let var = step.trailing_zeros() as usize;
        state ^= toggles[var];
        if state == target {
            satisfying += 1;
        }
    }
    Ok(satisfying)
}

/// The product argument: multiply all equations but the last; observables
/// appearing an even number of times cancel. A contradiction is proven when
/// the survivors are exactly the last equation's observables while the
/// accumulated parity is the opposite of its parity.
pub fn parity_contradiction(equations: &[MeasurementEquation]) -> bool {
    let Some((last, rest)) = equations.split_last() else {
        return false;
    };
    let mut odd: BTreeSet<(usize, Axis)> = BTreeSet::new();
    for eq in rest {
        for &term in eq.terms() {
            if !odd.insert(term) {
                odd.remove(&term);
            }
        }
    }
    let last_terms: BTreeSet<(usize, Axis)> = last.terms().iter().copied().collect();
    if odd != last_terms {
        return false;
    }
    let prefix = rest
        .iter()
        .fold(Sign::Plus, |acc, eq| acc.product(eq.parity()));
    prefix == last.parity().flipped()
}

/// Deterministic split of a z-loop against the x-loop: when the shared-edge
/// count is ≡ 2 (mod 4) the lexicographically least shared edge goes in
/// front (an odd pre-intersection is needed for the +1 word); when ≡ 0
/// (mod 4) the empty pre is already valid.
fn canonical_split(
    x_edges: &BTreeSet<usize>,
    z_loop: &BTreeSet<usize>,
) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let shared = x_edges.intersection(z_loop).count();
    if shared % 4 == 2 {
        let first = *x_edges
            .intersection(z_loop)
            .next()
            .expect("nonzero shared count");
        let pre = BTreeSet::from([first]);
        let post = z_loop.difference(&pre).copied().collect();
        (pre, post)
    } else {
        (BTreeSet::new(), z_loop.clone())
    }
}

/// All nonempty contractible cycles of one kind with at most `max_len`
/// edges, in ascending lexicographic edge order. Spans the boundaries (or
/// stars) of every cell except the fixed dependent one, so each cycle
/// appears exactly once.
fn enumerate_contractible(
    lattice: &TorusLattice,
    kind: LoopKind,
    max_len: usize,
) -> GhzResult<Vec<Loop>> {
    let k = lattice.k();
    let cells: Vec<(usize, usize)> = lattice
        .faces()
        .filter(|&(r, c)| (r, c) != (k - 1, k - 1))
        .collect();
    let mut out = Vec::new();
    for bits in 1u64..(1u64 << cells.len()) {
        let mut acc = Loop::new(kind, []);
        for (idx, &(r, c)) in cells.iter().enumerate() {
            if bits >> idx & 1 == 1 {
                let cell = match kind {
                    LoopKind::Primal => lattice.boundary_loop(r, c)?,
                    LoopKind::Dual => lattice.star_loop(r, c)?,
                };
                acc = acc.xor(&cell)?;
            }
        }
        if !acc.is_empty() && acc.len() <= max_len {
            out.push(acc);
        }
    }
    out.sort();
    Ok(out)
}

/// Lazy deterministic stream over every loop configuration that reproduces
/// the contradiction: x-loops in lexicographic order, then unordered pairs
/// of distinct z-loops in lexicographic order; a candidate is emitted when
/// the engine finds its four eigenvalues multiplying to −1.
#[derive(Debug)]
pub struct ParadoxStream {
    lattice: TorusLattice,
    ground: StabilizerGroup,
    lx_list: Vec<Loop>,
    lz_list: Vec<Loop>,
    lx_idx: usize,
    i: usize,
    j: usize,
    remaining: usize,
}

impl ParadoxStream {
    fn candidate(&self, lx_idx: usize, i: usize, j: usize) -> Option<DSet> {
        let lx = &self.lx_list[lx_idx];
        let lz1 = self.lz_list[i].edges();
        let lz2 = self.lz_list[j].edges();
        // Cheap parity screen: the eigenvalue product is −1 exactly when
        // t + m1 + m2 is odd (m3 = m1 + m2 − 2t cancels shared edges).
        let m1 = lx.edges().intersection(lz1).count();
        let m2 = lx.edges().intersection(lz2).count();
        let t = lx
            .edges()
            .iter()
            .filter(|e| lz1.contains(e) && lz2.contains(e))
            .count();
        if (t + m1 + m2) % 2 == 0 {
            return None;
        }

        let lz3: BTreeSet<usize> = lz1.symmetric_difference(lz2).copied().collect();
        let (pre1, post1) = canonical_split(lx.edges(), lz1);
        let (pre2, post2) = canonical_split(lx.edges(), lz2);
        let (pre3, post3) = canonical_split(lx.edges(), &lz3);
        let ops = [
            DOperation::new(DLabel::D1, pre1, lx.clone(), post1),
            DOperation::new(DLabel::D2, pre2, lx.clone(), post2),
            DOperation::new(DLabel::D3, pre3, lx.clone(), post3),
            DOperation::new(DLabel::D4, [], lx.clone(), []),
        ];
        let dset = DSet::new(self.lattice.k(), None, ops)
            .expect("construction satisfies the set invariants");

        // Authoritative emission test through the engine.
        let mut product = Sign::Plus;
        for op in dset.ops() {
            let composite = composite_operator(&self.lattice, op)
                .expect("contractible loops always compose to the +1 word");
            match self
                .ground
                .eigenvalue(&composite)
                .expect("composites act on the full lattice")
            {
                Expectation::PlusOne => {}
                Expectation::MinusOne => product = product.flipped(),
                Expectation::Zero => {
                    unreachable!("contractible composites are stabilizer members")
                }
            }
        }
        if product == Sign::Minus {
            Some(dset)
        } else {
            None
        }
    }
}

impl Iterator for ParadoxStream {
    type Item = DSet;

    fn next(&mut self) -> Option<DSet> {
        if self.remaining == 0 {
            return None;
        }
        while self.lx_idx < self.lx_list.len() {
            while self.i + 1 < self.lz_list.len() {
                while self.j < self.lz_list.len() {
                    let (lx_idx, i, j) = (self.lx_idx, self.i, self.j);
                    self.j += 1;
                    if let Some(dset) = self.candidate(lx_idx, i, j) {
                        self.remaining -= 1;
                        return Some(dset);
                    }
                }
                self.i += 1;
                self.j = self.i + 1;
            }
            self.lx_idx += 1;
            self.i = 0;
            self.j = 1;
        }
        None
    }
}

/// Enumerate paradox sets on lattices up to the enumeration bound: every
/// contractible x-loop and unordered pair of distinct contractible z-loops
/// with at most `max_loop_len` edges each, emitting at most `limit` sets.
pub fn generate_paradox_sets(
    lattice: &TorusLattice,
    max_loop_len: usize,
    limit: usize,
) -> GhzResult<ParadoxStream> {
    let k = lattice.k();
    if k < 3 {
        return Err(GhzError::LatticeTooSmall { k });
    }
    if k > ENUMERATION_K_LIMIT {
        return Err(GhzError::EnumerationTooLarge {
            k,
            limit: ENUMERATION_K_LIMIT,
        });
    }
    Ok(ParadoxStream {
        lattice: lattice.clone(),
        ground: ground_stabilizers(lattice)?,
        lx_list: enumerate_contractible(lattice, LoopKind::Dual, max_loop_len)?,
        lz_list: enumerate_contractible(lattice, LoopKind::Primal, max_loop_len)?,
        lx_idx: 0,
        i: 0,
        j: 1,
        remaining: limit,
    })
}

/// Serialized form of one operation's split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitRecord {
    pub pre: Vec<usize>,
    pub post: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitsRecord {
    pub d1: SplitRecord,
    pub d2: SplitRecord,
    pub d3: SplitRecord,
    pub d4: SplitRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationRecord {
    pub terms: Vec<(usize, Axis)>,
    pub parity: i8,
}

/// Full JSON document for one paradox set: geometry, splits, derived
/// equations, eigenvalues, and the exhaustive assignment count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DSetRecord {
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<[usize; 2]>,
    pub lx: Vec<usize>,
    pub lz1: Vec<usize>,
    pub lz2: Vec<usize>,
    pub splits: SplitsRecord,
    pub equations: Vec<EquationRecord>,
    pub eigenvalues: Vec<i8>,
    pub lr_satisfying: u64,
}

fn strictly_ascending(ids: &[usize]) -> bool {
    ids.windows(2).all(|w| w[0] < w[1])
}

fn check_sorted(field: &str, ids: &[usize]) -> GhzResult<()> {
    if !strictly_ascending(ids) {
        return Err(GhzError::MalformedRecord {
            detail: format!("{field} must list edge ids in strictly ascending order"),
        });
    }
    Ok(())
}

impl DSetRecord {
    /// Reconstruct the operation set, validating the schema invariants:
    /// sorted id lists, pre/post unions matching lz1 / lz2 / their xor, a
    /// bare d4, four equations with ±1 parities, four ±1 eigenvalues.
    pub fn to_dset(&self) -> GhzResult<DSet> {
        check_sorted("lx", &self.lx)?;
        check_sorted("lz1", &self.lz1)?;
        check_sorted("lz2", &self.lz2)?;
        for (name, split) in [
            ("d1", &self.splits.d1),
            ("d2", &self.splits.d2),
            ("d3", &self.splits.d3),
            ("d4", &self.splits.d4),
        ] {
            check_sorted(&format!("splits.{name}.pre"), &split.pre)?;
            check_sorted(&format!("splits.{name}.post"), &split.post)?;
        }
        if self.equations.len() != 4 {
            return Err(GhzError::MalformedRecord {
                detail: format!("expected 4 equations, found {}", self.equations.len()),
            });
        }
        for eq in &self.equations {
            if eq.parity != 1 && eq.parity != -1 {
                return Err(GhzError::MalformedRecord {
                    detail: format!("equation parity must be ±1, found {}", eq.parity),
                });
            }
        }
        if self.eigenvalues.len() != 4 || self.eigenvalues.iter().any(|&v| v != 1 && v != -1) {
            return Err(GhzError::MalformedRecord {
                detail: "eigenvalues must be four ±1 values".into(),
            });
        }

        let lz1: BTreeSet<usize> = self.lz1.iter().copied().collect();
        let lz2: BTreeSet<usize> = self.lz2.iter().copied().collect();
        let lz3: BTreeSet<usize> = lz1.symmetric_difference(&lz2).copied().collect();
        for (name, split, want) in [
            ("d1", &self.splits.d1, &lz1),
            ("d2", &self.splits.d2, &lz2),
            ("d3", &self.splits.d3, &lz3),
        ] {
            let pre: BTreeSet<usize> = split.pre.iter().copied().collect();
            let post: BTreeSet<usize> = split.post.iter().copied().collect();
            if !pre.is_disjoint(&post) {
                return Err(GhzError::MalformedRecord {
                    detail: format!("splits.{name} pre and post overlap"),
                });
            }
            let union: BTreeSet<usize> = pre.union(&post).copied().collect();
            if &union != want {
                return Err(GhzError::MalformedRecord {
                    detail: format!("splits.{name} does not partition its z-loop"),
                });
            }
        }
        if !self.splits.d4.pre.is_empty() || !self.splits.d4.post.is_empty() {
            return Err(GhzError::MalformedRecord {
                detail: "splits.d4 must be empty".into(),
            });
        }

        let x_loop = Loop::new(LoopKind::Dual, self.lx.iter().copied());
        let ops = [
            DOperation::new(
                DLabel::D1,
                self.splits.d1.pre.iter().copied(),
                x_loop.clone(),
                self.splits.d1.post.iter().copied(),
            ),
            DOperation::new(
                DLabel::D2,
                self.splits.d2.pre.iter().copied(),
                x_loop.clone(),
                self.splits.d2.post.iter().copied(),
            ),
            DOperation::new(
                DLabel::D3,
                self.splits.d3.pre.iter().copied(),
                x_loop.clone(),
                self.splits.d3.post.iter().copied(),
            ),
            DOperation::new(DLabel::D4, [], x_loop, []),
        ];
        DSet::new(self.k, self.anchor.map(|[r, c]| (r, c)), ops)
    }
}

/// Compute the complete record for a set against a prebuilt ground group.
pub fn build_record_with(
    lattice: &TorusLattice,
    ground: &StabilizerGroup,
    dset: &DSet,
) -> GhzResult<DSetRecord> {
    let equations = equations_with_group(lattice, ground, dset)?;
    let eigenvalues: Vec<i8> = equations.iter().map(|eq| eq.parity().to_i8()).collect();
    let lr_satisfying = lr_assignment_search(&equations)?;
    let split_of = |op: &DOperation| SplitRecord {
        pre: op.pre_z().iter().copied().collect(),
        post: op.post_z().iter().copied().collect(),
    };
    Ok(DSetRecord {
        k: dset.k(),
        anchor: dset.anchor().map(|(r, c)| [r, c]),
        lx: dset.x_loop().edges().iter().copied().collect(),
        lz1: dset.ops()[0].z_union().into_iter().collect(),
        lz2: dset.ops()[1].z_union().into_iter().collect(),
        splits: SplitsRecord {
            d1: split_of(&dset.ops()[0]),
            d2: split_of(&dset.ops()[1]),
            d3: split_of(&dset.ops()[2]),
            d4: split_of(&dset.ops()[3]),
        },
        equations: equations
            .iter()
            .map(|eq| EquationRecord {
                terms: eq.terms().to_vec(),
                parity: eq.parity().to_i8(),
            })
            .collect(),
        eigenvalues,
        lr_satisfying,
    })
}

/// Compute the complete record for a set, building the ground group.
pub fn build_record(lattice: &TorusLattice, dset: &DSet) -> GhzResult<DSetRecord> {
    let ground = ground_stabilizers(lattice)?;
    build_record_with(lattice, &ground, dset)
}
