//! Descending and ascending regions of critical cells, the Morse-Smale
//! labeling, and merge-point repair.

mod boundary;
mod build;
mod decompose;
mod merge;

pub use boundary::{boundary_regions, boundary_regions_with};
pub use build::{complete_region, descending_frame, LowerIndex};
pub use decompose::{
    ascending_regions, descending_regions, descending_regions_with, morse_smale, morse_smale_with,
    CriticalCell, CriticalKind, DecomposeOptions, Decomposition, RegionBuild,
};
pub use merge::{
    detect_merges, push_merge, repair_to_disks, MergePoint, PushOutcome, RepairReport,
};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::complex::{CellId, ComplexError};
use crate::morse::MorseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegionKind {
    Descending,
    Ascending,
}

impl RegionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionKind::Descending => "descending",
            RegionKind::Ascending => "ascending",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    pub critical: CellId,
    /// Dimension of `critical` in the input complex.
    pub dim: usize,
    pub kind: RegionKind,
    pub cells: BTreeSet<CellId>,
    pub frame: BTreeSet<CellId>,
    /// Built from a boundary-critical cell.
    pub via_boundary: bool,
    /// Cofaces that were neither in the region nor in a lower region when a
    /// pair was included.
    pub overlaps: BTreeSet<CellId>,
}

impl Region {
    pub fn contains(&self, c: CellId) -> bool {
        self.cells.contains(&c)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegionError {
    #[error("cell {cell} is not critical")]
    NotCritical { cell: CellId },
    #[error("regions of dimension {needed} requested but only dimensions below {built} are built")]
    OrderingContract { needed: usize, built: usize },
    #[error("completion re-entered the pair of {cell}")]
    CompletionReentry { cell: CellId },
    #[error("pair ({tail}, {head}) lies in the boundary but is not a boundary pair")]
    IncompatibleBoundary { tail: CellId, head: CellId },
    #[error("the complex has a boundary; merge repair needs a closed complex")]
    NotClosed,
    #[error("cannot push merge at {cell}: {reason}")]
    CannotPush { cell: CellId, reason: String },
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}
