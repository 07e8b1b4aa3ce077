use std::collections::BTreeSet;

use super::build::{region_from, LowerIndex};
use super::{descending_regions_with, Region, RegionError};
use crate::complex::CellComplex;
use crate::morse::{BoundaryField, GradientField};

/// Regions of boundary-critical cells: cells critical for the boundary field
/// but paired by `v` with an interior coface.
pub fn boundary_regions(
    k: &CellComplex,
    v: &GradientField,
    bf: &BoundaryField,
) -> Result<Vec<Region>, RegionError> {
    let interior = descending_regions_with(k, v, false)?;
    boundary_regions_with(k, v, bf, &interior.lower, &mut 0)
}

/// As [`boundary_regions`], reusing a finished interior membership index.
///
/// Each region is the boundary region of the cell (built in the boundary
/// complex with the boundary field) united with the regions of its interior
/// partners, each treated as critical.
pub fn boundary_regions_with(
    k: &CellComplex,
    v: &GradientField,
    bf: &BoundaryField,
    lower: &LowerIndex,
    visits: &mut u64,
) -> Result<Vec<Region>, RegionError> {
    let b = &bf.boundary;
    if b.is_empty() {
        return Ok(Vec::new());
    }
    for (t, h) in v.pairs() {
        if let (Some(lt), Some(lh)) = (b.local(t), b.local(h)) {
            if bf.field.head_of(lt) != Some(lh) {
                return Err(RegionError::IncompatibleBoundary { tail: t, head: h });
            }
        }
    }

    let stage_one = descending_regions_with(&b.complex, &bf.field, false)?;
    *visits += stage_one.pair_visits;
    let mut out = Vec::new();
    for r in stage_one.regions {
        let nu = b.parent(r.critical);
        if v.is_critical(nu) {
            continue;
        }
        match v.head_of(nu) {
            Some(beta) if !b.contains_parent(beta) => {}
            _ => {
                return Err(RegionError::IncompatibleBoundary {
                    tail: v.tail_of(nu).unwrap_or(nu),
                    head: v.head_of(nu).unwrap_or(nu),
                });
            }
        }
        let mut cells: BTreeSet<_> = r.cells.iter().map(|&c| b.parent(c)).collect();
        let frame = r.frame.iter().map(|&c| b.parent(c)).collect();
        let mut overlaps = BTreeSet::new();
        let p = r.dim;
        let partners: Vec<_> = cells
            .iter()
            .filter(|&&c| k.dim(c) == p)
            .filter_map(|&c| v.head_of(c))
            .filter(|&beta| !b.contains_parent(beta))
            .collect();
        for beta in partners {
            let inner = region_from(k, v, beta, lower, visits)?;
            cells.extend(inner.cells);
            overlaps.extend(inner.overlaps);
        }
        out.push(Region {
            critical: nu,
            dim: p,
            kind: r.kind,
            cells,
            frame,
            via_boundary: true,
            overlaps,
        });
    }
    Ok(out)
}
