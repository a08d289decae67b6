//! Dijkgraaf-Witten type state-sum invariants of oriented 3-manifolds given
//! by (generalized ideal) triangulations.
//!
//! The pipeline: parse a gluing table ([`triangulation`]), find a branching,
//! retriangulating by positive 2-3 moves if needed ([`branching`],
//! [`pachner`]), enumerate colorings by a finite group and sum products of
//! cocycle symbols exactly in a cyclotomic field ([`statesum`],
//! [`cyclotomic`]).

pub mod branching;
pub mod cochain;
pub mod cyclotomic;
pub mod fixtures;
pub mod group;
pub mod oracle;
pub mod pachner;
pub mod perm;
pub mod statesum;
pub mod triangulation;

pub use branching::{find_branching, make_orderable, Branching, BranchingError, DEFAULT_MAX_MOVES};
pub use cochain::{Cochain2, Cochain3, CochainError};
pub use cyclotomic::CyclotomicNumber;
pub use group::{FiniteGroup, GroupError};
pub use oracle::ReducedFormula;
pub use pachner::{Move, MoveError};
pub use statesum::{invariant, InvariantReport, StateSumError};
pub use triangulation::{Triangulation, TriangulationError};
