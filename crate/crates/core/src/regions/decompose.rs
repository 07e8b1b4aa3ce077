use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::build::{region_from, LowerIndex};
use super::{boundary_regions_with, Region, RegionError, RegionKind};
use crate::complex::{CellComplex, CellId};
use crate::morse::{BoundaryField, GradientField};

/// Regions of one field together with the membership index and the work
/// counter (frame steps plus completion pair visits).
#[derive(Clone, Debug)]
pub struct RegionBuild {
    pub regions: Vec<Region>,
    pub lower: LowerIndex,
    pub pair_visits: u64,
}

/// One descending region per critical cell, by ascending dimension then id.
pub fn descending_regions(k: &CellComplex, v: &GradientField) -> Result<Vec<Region>, RegionError> {
    Ok(descending_regions_with(k, v, false)?.regions)
}

/// As [`descending_regions`]; regions of one dimension are built on the
/// current rayon pool when `parallel` is set.
pub fn descending_regions_with(
    k: &CellComplex,
    v: &GradientField,
    parallel: bool,
) -> Result<RegionBuild, RegionError> {
    let mut lower = LowerIndex::new(k.len());
    let mut regions = Vec::new();
    let mut pair_visits = 0;
    let mut by_dim: Vec<Vec<CellId>> = vec![Vec::new(); k.dimension() + 1];
    for c in v.critical_cells() {
        by_dim[k.dim(c)].push(c);
    }
    for (p, crit) in by_dim.iter().enumerate() {
        let build = |&s: &CellId| {
            let mut visits = 0;
            region_from(k, v, s, &lower, &mut visits).map(|r| (r, visits))
        };
        let built: Vec<(Region, u64)> = if parallel {
            crit.par_iter().map(build).collect::<Result<_, _>>()?
        } else {
            crit.iter().map(build).collect::<Result<_, _>>()?
        };
        for (r, visits) in built {
            pair_visits += visits;
            lower.record(&r);
            regions.push(r);
        }
        lower.finish_dim(p);
    }
    Ok(RegionBuild {
        regions,
        lower,
        pair_visits,
    })
}

/// Ascending regions as descending regions of the dual with reversed arrows.
pub fn ascending_regions(k: &CellComplex, v: &GradientField) -> Result<Vec<Region>, RegionError> {
    Ok(ascending_build(k, v, false)?.regions)
}

fn ascending_build(
    k: &CellComplex,
    v: &GradientField,
    parallel: bool,
) -> Result<RegionBuild, RegionError> {
    let n = k.dimension();
    let mut build = descending_regions_with(&k.dual(), &v.reversed(), parallel)?;
    for r in &mut build.regions {
        r.kind = RegionKind::Ascending;
        r.dim = n - r.dim;
    }
    Ok(build)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CriticalKind {
    Critical,
    /// Critical for the boundary field, paired into the interior.
    BoundaryCritical,
}

impl CriticalKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CriticalKind::Critical => "critical",
            CriticalKind::BoundaryCritical => "boundary-critical",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CriticalCell {
    pub id: CellId,
    pub dim: usize,
    pub kind: CriticalKind,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecomposeOptions {
    pub ascending: bool,
    pub parallel: bool,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub critical: Vec<CriticalCell>,
    pub descending: Vec<Region>,
    pub ascending: Vec<Region>,
    /// Per cell, indices into `descending`.
    pub descending_of: Vec<Vec<u32>>,
    /// Per cell, indices into `ascending`.
    pub ascending_of: Vec<Vec<u32>>,
    /// `(descending critical, ascending critical)` pairs of every labeled cell.
    pub ms_label: BTreeMap<CellId, BTreeSet<(CellId, CellId)>>,
    pub pair_visits: u64,
}

impl Decomposition {
    pub fn descending_region(&self, critical: CellId) -> Option<&Region> {
        self.descending.iter().find(|r| r.critical == critical)
    }

    pub fn ascending_region(&self, critical: CellId) -> Option<&Region> {
        self.ascending.iter().find(|r| r.critical == critical)
    }

    /// Regular cells of `v` outside every descending region.
    pub fn uncovered_descending(&self, v: &GradientField) -> Vec<CellId> {
        uncovered(&self.descending_of, v)
    }

    pub fn uncovered_ascending(&self, v: &GradientField) -> Vec<CellId> {
        uncovered(&self.ascending_of, v)
    }
}

fn uncovered(index: &[Vec<u32>], v: &GradientField) -> Vec<CellId> {
    index
        .iter()
        .enumerate()
        .filter(|(c, rs)| rs.is_empty() && !v.is_critical(CellId::from(*c)))
        .map(|(c, _)| CellId::from(c))
        .collect()
}

fn membership(len: usize, regions: &[Region]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new(); len];
    for (i, r) in regions.iter().enumerate() {
        for c in &r.cells {
            out[c.index()].push(i as u32);
        }
    }
    out
}

/// Descending and ascending regions with their Morse-Smale labeling.
pub fn morse_smale(k: &CellComplex, v: &GradientField) -> Result<Decomposition, RegionError> {
    morse_smale_with(
        k,
        v,
        None,
        DecomposeOptions {
            ascending: true,
            parallel: false,
        },
    )
}

/// Full pipeline. With a boundary field, regions of boundary-critical cells
/// are appended to the descending list.
pub fn morse_smale_with(
    k: &CellComplex,
    v: &GradientField,
    boundary: Option<&BoundaryField>,
    options: DecomposeOptions,
) -> Result<Decomposition, RegionError> {
    let interior = descending_regions_with(k, v, options.parallel)?;
    let mut pair_visits = interior.pair_visits;
    let mut critical: Vec<CriticalCell> = v
        .critical_cells()
        .map(|id| CriticalCell {
            id,
            dim: k.dim(id),
            kind: CriticalKind::Critical,
        })
        .collect();
    let mut descending = interior.regions;
    if let Some(bf) = boundary {
        let extra = boundary_regions_with(k, v, bf, &interior.lower, &mut pair_visits)?;
        for r in &extra {
            critical.push(CriticalCell {
                id: r.critical,
                dim: r.dim,
                kind: CriticalKind::BoundaryCritical,
            });
        }
        descending.extend(extra);
    }
    critical.sort();

    let ascending = if options.ascending {
        let build = ascending_build(k, v, options.parallel)?;
        pair_visits += build.pair_visits;
        build.regions
    } else {
        Vec::new()
    };

    let descending_of = membership(k.len(), &descending);
    let ascending_of = membership(k.len(), &ascending);
    let mut ms_label = BTreeMap::new();
    if options.ascending {
        for c in k.cells() {
            let mut labels = BTreeSet::new();
            for &d in &descending_of[c.index()] {
                for &a in &ascending_of[c.index()] {
                    labels.insert((
                        descending[d as usize].critical,
                        ascending[a as usize].critical,
                    ));
                }
            }
            if !labels.is_empty() {
                ms_label.insert(c, labels);
            }
        }
    }
    Ok(Decomposition {
        critical,
        descending,
        ascending,
        descending_of,
        ascending_of,
        ms_label,
        pair_visits,
    })
}
