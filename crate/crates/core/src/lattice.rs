//! Geometry of the k×k periodic square lattice.
//!
//! Qubits live on edges. Horizontal edge H(r,c) runs from vertex (r,c) to
//! (r, c+1 mod k) and has id r·k+c; vertical edge V(r,c) runs from (r,c) to
//! (r+1 mod k, c) and has id k²+r·k+c. A dual edge is identified with the
//! primal edge it crosses, so both lattices share one id space and loop
//! intersection is plain set intersection.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type LatticeResult<T> = Result<T, LatticeError>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("side length must be at least 2, got {k}")]
    SideTooSmall { k: usize },
    #[error("coordinates ({r}, {c}) out of range for side {k}")]
    CoordOutOfRange { r: usize, c: usize, k: usize },
    #[error("edge id {edge} out of range for {edges} edges")]
    EdgeOutOfRange { edge: usize, edges: usize },
    #[error("loop kinds differ: {left} vs {right}")]
    KindMismatch { left: LoopKind, right: LoopKind },
    #[error("edge set is not a closed {kind} loop")]
    NotACycle { kind: LoopKind },
}

/// Whether a loop lives on the lattice (primal, Z-strings) or on the dual
/// lattice (dual, X-strings).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoopKind {
    Primal,
    Dual,
}

impl fmt::Display for LoopKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoopKind::Primal => write!(f, "primal"),
            LoopKind::Dual => write!(f, "dual"),
        }
    }
}

/// A set of edges tagged with the lattice it lives on.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Loop {
    kind: LoopKind,
    edges: BTreeSet<usize>,
}

impl Loop {
    pub fn new<I>(kind: LoopKind, edges: I) -> Loop
    where
        I: IntoIterator<Item = usize>,
    {
        Loop {
            kind,
            edges: edges.into_iter().collect(),
        }
    }

    pub fn kind(&self) -> LoopKind {
        self.kind
    }

    pub fn edges(&self) -> &BTreeSet<usize> {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.edges.contains(&edge)
    }

    /// Symmetric difference; overlapping edges vanish.
    pub fn xor(&self, other: &Loop) -> LatticeResult<Loop> {
        if self.kind != other.kind {
            return Err(LatticeError::KindMismatch {
                left: self.kind,
                right: other.kind,
            });
        }
        Ok(Loop {
            kind: self.kind,
            edges: self
                .edges
                .symmetric_difference(&other.edges)
                .copied()
                .collect(),
        })
    }
}

/// k×k square lattice on a torus: k² vertices, k² faces, 2k² edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusLattice {
    k: usize,
}

impl TorusLattice {
    pub fn new(k: usize) -> LatticeResult<TorusLattice> {
        if k < 2 {
            return Err(LatticeError::SideTooSmall { k });
        }
        Ok(TorusLattice { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.k * self.k
    }

    pub fn face_count(&self) -> usize {
        self.k * self.k
    }

    pub fn edge_count(&self) -> usize {
        2 * self.k * self.k
    }

    fn check_coords(&self, r: usize, c: usize) -> LatticeResult<()> {
        if r >= self.k || c >= self.k {
            return Err(LatticeError::CoordOutOfRange { r, c, k: self.k });
        }
        Ok(())
    }

    fn h_id(&self, r: usize, c: usize) -> usize {
        (r % self.k) * self.k + c % self.k
    }

    fn v_id(&self, r: usize, c: usize) -> usize {
        self.k * self.k + (r % self.k) * self.k + c % self.k
    }

    pub fn h_edge(&self, r: usize, c: usize) -> LatticeResult<usize> {
        self.check_coords(r, c)?;
        Ok(self.h_id(r, c))
    }

    pub fn v_edge(&self, r: usize, c: usize) -> LatticeResult<usize> {
        self.check_coords(r, c)?;
        Ok(self.v_id(r, c))
    }

    /// Vertex coordinates in row-major order.
    pub fn vertices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.k;
        (0..k).flat_map(move |r| (0..k).map(move |c| (r, c)))
    }

    /// Face coordinates in row-major order; face (r,c) has vertex (r,c) at
    /// its upper-left corner.
    pub fn faces(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices()
    }

    /// The four edges meeting at vertex (r,c).
    pub fn star(&self, r: usize, c: usize) -> LatticeResult<BTreeSet<usize>> {
        self.check_coords(r, c)?;
        let k = self.k;
        Ok(BTreeSet::from([
            self.h_id(r, c),
            self.h_id(r, c + k - 1),
            self.v_id(r, c),
            self.v_id(r + k - 1, c),
        ]))
    }

    /// The four edges bounding face (r,c).
    pub fn boundary(&self, r: usize, c: usize) -> LatticeResult<BTreeSet<usize>> {
        self.check_coords(r, c)?;
        Ok(BTreeSet::from([
            self.h_id(r, c),
            self.h_id(r + 1, c),
            self.v_id(r, c),
            self.v_id(r, c + 1),
        ]))
    }

    /// star(v) as a dual loop (it is always a closed dual cycle).
    pub fn star_loop(&self, r: usize, c: usize) -> LatticeResult<Loop> {
        Ok(Loop::new(LoopKind::Dual, self.star(r, c)?))
    }

    /// boundary(f) as a primal loop (it is always a closed primal cycle).
    pub fn boundary_loop(&self, r: usize, c: usize) -> LatticeResult<Loop> {
        Ok(Loop::new(LoopKind::Primal, self.boundary(r, c)?))
    }

    /// The two vertices an edge joins.
    pub fn edge_endpoints(&self, edge: usize) -> LatticeResult<((usize, usize), (usize, usize))> {
        let n = self.edge_count();
        if edge >= n {
            return Err(LatticeError::EdgeOutOfRange { edge, edges: n });
        }
        let k = self.k;
        let half = k * k;
        if edge < half {
            let (r, c) = (edge / k, edge % k);
            Ok(((r, c), (r, (c + 1) % k)))
        } else {
            let e = edge - half;
            let (r, c) = (e / k, e % k);
            Ok(((r, c), ((r + 1) % k, c)))
        }
    }

    pub fn validate_edges(&self, edges: &BTreeSet<usize>) -> LatticeResult<()> {
        let n = self.edge_count();
        if let Some(&edge) = edges.iter().find(|&&e| e >= n) {
            return Err(LatticeError::EdgeOutOfRange { edge, edges: n });
        }
        Ok(())
    }

    /// Closed-loop test: a primal loop must meet every vertex star in an
    /// even number of edges, a dual loop every face boundary.
    pub fn is_cycle(&self, l: &Loop) -> LatticeResult<bool> {
        self.validate_edges(&l.edges)?;
        for (r, c) in self.vertices() {
            let cell = match l.kind {
                LoopKind::Primal => self.star(r, c)?,
                LoopKind::Dual => self.boundary(r, c)?,
            };
            if cell.intersection(&l.edges).count() % 2 != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The fixed dual reference cycles: one winding along rows of H-edges in
    /// column 0, one along V-edges in row 0.
    pub fn dual_reference_cycles(&self) -> (Loop, Loop) {
        let d1 = Loop::new(LoopKind::Dual, (0..self.k).map(|r| self.h_id(r, 0)));
        let d2 = Loop::new(LoopKind::Dual, (0..self.k).map(|c| self.v_id(0, c)));
        (d1, d2)
    }

    /// The fixed primal reference cycles: the row-0 loop of H-edges and the
    /// column-0 loop of V-edges.
    pub fn primal_reference_cycles(&self) -> (Loop, Loop) {
        let p1 = Loop::new(LoopKind::Primal, (0..self.k).map(|c| self.h_id(0, c)));
        let p2 = Loop::new(LoopKind::Primal, (0..self.k).map(|r| self.v_id(r, 0)));
        (p1, p2)
    }

    /// Homology class of a cycle as two parity bits against the fixed
    /// reference cycles of the opposite kind. (0,0) means contractible.
    pub fn homology_class(&self, l: &Loop) -> LatticeResult<(u8, u8)> {
        if !self.is_cycle(l)? {
            return Err(LatticeError::NotACycle { kind: l.kind });
        }
        let (r1, r2) = match l.kind {
            LoopKind::Primal => self.dual_reference_cycles(),
            LoopKind::Dual => self.primal_reference_cycles(),
        };
        let b1 = (l.edges.intersection(&r1.edges).count() % 2) as u8;
        let b2 = (l.edges.intersection(&r2.edges).count() % 2) as u8;
        Ok((b1, b2))
    }

    /// Shared-edge count between a dual loop and a primal edge set; this is
    /// the linking quantity the string algebra depends on.
    pub fn intersection_count(
        &self,
        x_loop: &Loop,
        z_loop_edges: &BTreeSet<usize>,
    ) -> LatticeResult<usize> {
        if x_loop.kind != LoopKind::Dual {
            return Err(LatticeError::KindMismatch {
                left: LoopKind::Dual,
                right: x_loop.kind,
            });
        }
        self.validate_edges(&x_loop.edges)?;
        self.validate_edges(z_loop_edges)?;
        Ok(x_loop.edges.intersection(z_loop_edges).count())
    }
}
