use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use super::{Region, RegionError, RegionKind};
use crate::complex::{CellComplex, CellId};
use crate::morse::{CellStatus, GradientField};

/// For every cell, the smallest dimension of a completed descending region
/// containing it.
#[derive(Clone, Debug)]
pub struct LowerIndex {
    min_dim: Vec<u8>,
    built: usize,
}

impl LowerIndex {
    pub fn new(len: usize) -> Self {
        LowerIndex {
            min_dim: vec![u8::MAX; len],
            built: 0,
        }
    }

    /// Regions of every dimension below this one have been recorded.
    pub fn built_below(&self) -> usize {
        self.built
    }

    pub fn min_dim(&self, c: CellId) -> Option<usize> {
        match self.min_dim[c.index()] {
            u8::MAX => None,
            d => Some(d as usize),
        }
    }

    pub fn record(&mut self, region: &Region) {
        let d = region.dim.min(u8::MAX as usize - 1) as u8;
        for c in &region.cells {
            let slot = &mut self.min_dim[c.index()];
            *slot = (*slot).min(d);
        }
    }

    /// Declares all regions of dimension `d` recorded.
    pub fn finish_dim(&mut self, d: usize) {
        self.built = self.built.max(d + 1);
    }
}

/// Regular p- and (p-1)-cells on V-paths leaving the boundary of `s`.
pub fn descending_frame(
    k: &CellComplex,
    v: &GradientField,
    s: CellId,
) -> Result<BTreeSet<CellId>, RegionError> {
    if !v.is_critical(s) {
        return Err(RegionError::NotCritical { cell: s });
    }
    Ok(frame_from(k, v, s, &mut 0))
}

/// Frame BFS from `source`, which is critical or treated as such.
pub(crate) fn frame_from(
    k: &CellComplex,
    v: &GradientField,
    source: CellId,
    visits: &mut u64,
) -> BTreeSet<CellId> {
    let mut frame = BTreeSet::new();
    let mut queue = VecDeque::new();
    for &t in k.faces(source) {
        if matches!(v.head_of(t), Some(h) if h != source) && frame.insert(t) {
            queue.push_back(t);
        }
    }
    while let Some(t) = queue.pop_front() {
        *visits += 1;
        let h = v.head_of(t).unwrap();
        frame.insert(h);
        for &f in k.faces(h) {
            if f != t && v.head_of(f).is_some() && frame.insert(f) {
                queue.push_back(f);
            }
        }
    }
    frame
}

/// Adds to `frame` the lower-dimensional pairs whose cofaces are all in the
/// region, excluding pairs that reach into a region of lower dimension.
pub fn complete_region(
    k: &CellComplex,
    v: &GradientField,
    s: CellId,
    frame: &BTreeSet<CellId>,
    lower: &LowerIndex,
) -> Result<Region, RegionError> {
    if !v.is_critical(s) {
        return Err(RegionError::NotCritical { cell: s });
    }
    complete_from(k, v, s, frame, lower, &mut 0)
}

pub(crate) fn region_from(
    k: &CellComplex,
    v: &GradientField,
    source: CellId,
    lower: &LowerIndex,
    visits: &mut u64,
) -> Result<Region, RegionError> {
    let frame = frame_from(k, v, source, visits);
    complete_from(k, v, source, &frame, lower, visits)
}

#[derive(Clone, Copy, PartialEq)]
enum Verdict {
    Open,
    Included,
    Excluded,
}

fn complete_from(
    k: &CellComplex,
    v: &GradientField,
    source: CellId,
    frame: &BTreeSet<CellId>,
    lower: &LowerIndex,
    visits: &mut u64,
) -> Result<Region, RegionError> {
    let p = k.dim(source);
    if lower.built_below() < p {
        return Err(RegionError::OrderingContract {
            needed: p,
            built: lower.built_below(),
        });
    }
    let mut members: HashSet<CellId> = frame.iter().copied().collect();
    members.insert(source);
    let closure: HashSet<CellId> = k.closure(members.iter().copied()).into_iter().collect();
    let mut candidates: Vec<(CellId, CellId)> = closure
        .iter()
        .filter(|&&h| k.dim(h) < p && !members.contains(&h))
        .filter_map(|&h| v.tail_of(h).map(|t| (t, h)))
        .collect();
    candidates.sort_by_key(|&(_, h)| h);

    let mut verdict: HashMap<CellId, Verdict> = HashMap::new();
    let mut overlaps = BTreeSet::new();
    for (t, h) in candidates {
        if verdict.contains_key(&t) {
            continue;
        }
        // Explicit recursion stack of (tail, head, next coface index).
        let mut stack = vec![(t, h, 0usize)];
        verdict.insert(t, Verdict::Open);
        *visits += 1;
        'frames: while let Some(&(t, h, start)) = stack.last() {
            let cofaces = k.cofaces(t);
            let mut outcome = Verdict::Included;
            let mut idx = start;
            if [t, h]
                .iter()
                .any(|&c| lower.min_dim(c).is_some_and(|d| d < p))
            {
                outcome = Verdict::Excluded;
                idx = cofaces.len();
            }
            while idx < cofaces.len() {
                let g = cofaces[idx];
                if g == h || !closure.contains(&g) || members.contains(&g) {
                    idx += 1;
                    continue;
                }
                if lower.min_dim(g).is_some_and(|d| d < p) {
                    outcome = Verdict::Excluded;
                    break;
                }
                let child = match v.status(g) {
                    CellStatus::Critical => {
                        outcome = Verdict::Excluded;
                        break;
                    }
                    CellStatus::Head(gt) => (gt, g),
                    CellStatus::Tail(gh) if closure.contains(&gh) => (g, gh),
                    CellStatus::Tail(_) => {
                        overlaps.insert(g);
                        idx += 1;
                        continue;
                    }
                };
                match verdict.get(&child.0) {
                    Some(Verdict::Included) => idx += 1,
                    Some(Verdict::Excluded) => {
                        outcome = Verdict::Excluded;
                        break;
                    }
                    Some(Verdict::Open) => {
                        return Err(RegionError::CompletionReentry { cell: child.0 });
                    }
                    None => {
                        verdict.insert(child.0, Verdict::Open);
                        *visits += 1;
                        stack.last_mut().unwrap().2 = idx;
                        stack.push((child.0, child.1, 0));
                        continue 'frames;
                    }
                }
            }
            if outcome == Verdict::Included {
                members.insert(t);
                members.insert(h);
            }
            verdict.insert(t, outcome);
            stack.pop();
        }
    }

    Ok(Region {
        critical: source,
        dim: p,
        kind: RegionKind::Descending,
        cells: members.into_iter().collect(),
        frame: frame.clone(),
        via_boundary: false,
        overlaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_simplicial, CellLabel};

    fn sid(k: &CellComplex, verts: &[u32]) -> CellId {
        k.cells()
            .find(|&c| k.label(c) == &CellLabel::Simplex(verts.to_vec()))
            .unwrap()
    }

    fn set(k: &CellComplex, cells: &[&[u32]]) -> BTreeSet<CellId> {
        cells.iter().map(|c| sid(k, c)).collect()
    }

    #[test]
    fn minimum_has_empty_frame() {
        let k = build_simplicial(&[vec![0, 1]]).unwrap();
        let v = GradientField::all_critical(k.len());
        assert!(descending_frame(&k, &v, sid(&k, &[0])).unwrap().is_empty());
    }

    #[test]
    fn frame_requires_critical() {
        let k = build_simplicial(&[vec![0, 1]]).unwrap();
        let v = GradientField::from_pairs(k.len(), [(sid(&k, &[1]), sid(&k, &[0, 1]))]).unwrap();
        assert_eq!(
            descending_frame(&k, &v, sid(&k, &[1])),
            Err(RegionError::NotCritical {
                cell: sid(&k, &[1])
            })
        );
    }

    #[test]
    fn two_minima_circle_edge_frame() {
        let k = build_simplicial(&[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap();
        let v = GradientField::from_pairs(
            k.len(),
            [
                (sid(&k, &[1]), sid(&k, &[1, 2])),
                (sid(&k, &[3]), sid(&k, &[0, 3])),
            ],
        )
        .unwrap();
        let frame = descending_frame(&k, &v, sid(&k, &[0, 1])).unwrap();
        assert_eq!(frame, set(&k, &[&[1], &[1, 2]]));
        let frame = descending_frame(&k, &v, sid(&k, &[2, 3])).unwrap();
        assert_eq!(frame, set(&k, &[&[3], &[0, 3]]));
    }

    #[test]
    fn completion_checks_ordering_contract() {
        let k = build_simplicial(&[vec![0, 1]]).unwrap();
        let v = GradientField::all_critical(k.len());
        let e = sid(&k, &[0, 1]);
        assert_eq!(
            complete_region(&k, &v, e, &BTreeSet::new(), &LowerIndex::new(k.len())),
            Err(RegionError::OrderingContract {
                needed: 1,
                built: 0
            })
        );
    }

    #[test]
    fn minimum_region_is_singleton() {
        let k = build_simplicial(&[vec![0, 1, 2]]).unwrap();
        let v = GradientField::all_critical(k.len());
        let r = complete_region(
            &k,
            &v,
            sid(&k, &[0]),
            &BTreeSet::new(),
            &LowerIndex::new(k.len()),
        )
        .unwrap();
        assert_eq!(r.cells, set(&k, &[&[0]]));
    }
}
