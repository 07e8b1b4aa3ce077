use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::{descending_regions, Region, RegionError};
use crate::complex::{boundary_subcomplex, CellComplex, CellId};
use crate::morse::GradientField;

/// A tail `cell` of a region reached from at least two p-cells of the region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergePoint {
    pub cell: CellId,
    /// Critical cell owning the region.
    pub critical: CellId,
    pub incoming: Vec<CellId>,
}

/// Cells where V-paths of the region coalesce.
pub fn detect_merges(k: &CellComplex, v: &GradientField, region: &Region) -> Vec<MergePoint> {
    let p = region.dim;
    if p == 0 {
        return Vec::new();
    }
    let on_path = |s: CellId| s == region.critical || region.frame.contains(&s);
    let mut out = Vec::new();
    for &t in &region.cells {
        if k.dim(t) + 1 != p || v.head_of(t).is_none() {
            continue;
        }
        let incoming: Vec<CellId> = k
            .cofaces(t)
            .iter()
            .copied()
            .filter(|&s| region.contains(s) && on_path(s) && v.tail_of(s) != Some(t))
            .collect();
        if incoming.len() >= 2 {
            out.push(MergePoint {
                cell: t,
                critical: region.critical,
                incoming,
            });
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct PushOutcome {
    pub complex: CellComplex,
    pub field: GradientField,
    /// The new cells `[tau', sigma', nu, mu]`.
    pub added: [CellId; 4],
}

/// Splits the merge cell into two parallel copies joined by a new pair, so
/// the two incoming paths continue separately one step further.
///
/// Supported for merges at vertices whose star has no cell above
/// dimension 2; other stars give [`RegionError::CannotPush`].
pub fn push_merge(
    k: &CellComplex,
    v: &GradientField,
    mp: &MergePoint,
) -> Result<PushOutcome, RegionError> {
    let tau = mp.cell;
    let cannot = |reason: &str| RegionError::CannotPush {
        cell: tau,
        reason: reason.to_string(),
    };
    if k.dim(tau) != 0 {
        return Err(cannot("merge cell is not a vertex"));
    }
    let sigma = v
        .head_of(tau)
        .ok_or_else(|| cannot("merge cell is not a tail"))?;
    let star = k.star(tau);
    if star.iter().any(|&c| k.dim(c) > 2) {
        return Err(cannot("star has cells above dimension 2"));
    }
    if mp.incoming.len() < 2 {
        return Err(cannot("fewer than two incoming paths"));
    }

    for &a in &mp.incoming {
        for &b in &mp.incoming {
            if a == b {
                continue;
            }
            let Some(p1) = star_path(k, &star, a, sigma, &BTreeSet::from([b])) else {
                continue;
            };
            let avoid: BTreeSet<CellId> = p1[1..].iter().copied().collect();
            let Some(p2) = star_path(k, &star, a, b, &avoid) else {
                continue;
            };
            return Ok(apply_push(k, v, tau, sigma, &p1, &p2));
        }
    }
    Err(cannot("no pair of disjoint paths in the star"))
}

/// Shortest edge/face alternating path in the star from `from` to `to`,
/// least ids first, avoiding `avoid`.
fn star_path(
    k: &CellComplex,
    star: &BTreeSet<CellId>,
    from: CellId,
    to: CellId,
    avoid: &BTreeSet<CellId>,
) -> Option<Vec<CellId>> {
    let mut prev: HashMap<CellId, CellId> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    prev.insert(from, from);
    while let Some(c) = queue.pop_front() {
        if c == to {
            let mut path = vec![c];
            let mut x = c;
            while x != from {
                x = prev[&x];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        let mut next: Vec<CellId> = k
            .faces(c)
            .iter()
            .chain(k.cofaces(c))
            .copied()
            .filter(|n| k.dim(*n) >= 1 && star.contains(n) && !avoid.contains(n))
            .collect();
        next.sort();
        for n in next {
            if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(n) {
                e.insert(c);
                queue.push_back(n);
            }
        }
    }
    None
}

fn apply_push(
    k: &CellComplex,
    v: &GradientField,
    tau: CellId,
    sigma: CellId,
    p1: &[CellId],
    p2: &[CellId],
) -> PushOutcome {
    let m = k.len() as u32;
    let (tau2, sigma2, nu, mu) = (CellId(m), CellId(m + 1), CellId(m + 2), CellId(m + 3));
    let swap = |fs: &[CellId], from: CellId, to: CellId| -> Vec<CellId> {
        fs.iter().map(|&f| if f == from { to } else { f }).collect()
    };
    let sigma2_faces = swap(k.faces(sigma), tau, tau2);
    let new_cells = vec![
        (0, Vec::new()),
        (1, sigma2_faces),
        (1, vec![tau, tau2]),
        (2, vec![nu, sigma, sigma2]),
    ];
    let mut rewrites: BTreeMap<CellId, Vec<CellId>> = BTreeMap::new();
    for &c in p1.iter().filter(|&&c| k.dim(c) == 1 && c != sigma) {
        rewrites.insert(c, swap(k.faces(c), tau, tau2));
    }
    let last_face = *p1.iter().rev().find(|&&c| k.dim(c) == 2).unwrap();
    rewrites.insert(last_face, swap(k.faces(last_face), sigma, sigma2));
    let first_face = *p2.iter().find(|&&c| k.dim(c) == 2).unwrap();
    let mut fs = k.faces(first_face).to_vec();
    fs.push(nu);
    rewrites.insert(first_face, fs);
    let rewrites: Vec<(CellId, Vec<CellId>)> = rewrites.into_iter().collect();
    let complex = k
        .edited(&new_cells, &rewrites)
        .expect("push-out keeps the face relation graded");

    let mut field = v.clone();
    field.extend_to(complex.len());
    field.set_pair(tau2, sigma2);
    field.set_pair(nu, mu);
    PushOutcome {
        complex,
        field,
        added: [tau2, sigma2, nu, mu],
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RepairReport {
    /// Pushes applied, by critical cell.
    pub pushes: BTreeMap<CellId, usize>,
    /// Merges left when no push applied or the budget ran out.
    pub residual: Vec<MergePoint>,
    /// The step budget was exhausted.
    pub partial: bool,
}

impl RepairReport {
    pub fn total_pushes(&self) -> usize {
        self.pushes.values().sum()
    }
}

/// Pushes merge points out of descending regions, critical cells by
/// ascending dimension. `max_steps` defaults to ten times the cell count.
pub fn repair_to_disks(
    k: &CellComplex,
    v: &GradientField,
    max_steps: Option<usize>,
) -> Result<(CellComplex, GradientField, RepairReport), RegionError> {
    if !boundary_subcomplex(k)?.is_empty() {
        return Err(RegionError::NotClosed);
    }
    let budget = max_steps.unwrap_or(10 * k.len());
    let mut k = k.clone();
    let mut v = v.clone();
    let mut report = RepairReport::default();
    let mut order: Vec<CellId> = v.critical_cells().collect();
    order.sort_by_key(|&c| (k.dim(c), c));
    let mut steps = 0;
    for s in order {
        loop {
            let regions = descending_regions(&k, &v)?;
            let region = regions.iter().find(|r| r.critical == s).unwrap();
            let merges = detect_merges(&k, &v, region);
            if merges.is_empty() {
                break;
            }
            if steps == budget {
                report.partial = true;
                report.residual.extend(merges);
                break;
            }
            let Some(out) = merges.iter().find_map(|mp| push_merge(&k, &v, mp).ok()) else {
                report.residual.extend(merges);
                break;
            };
            k = out.complex;
            v = out.field;
            steps += 1;
            *report.pushes.entry(s).or_insert(0) += 1;
        }
    }
    Ok((k, v, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_simplicial, CellLabel};
    use crate::morse::validate_field;

    // Vertices: 0 = tau, 1 = a, 2 = b, 3 = w.
    fn tetra() -> (CellComplex, GradientField) {
        let k = build_simplicial(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])
            .unwrap();
        let id = |vs: &[u32]| {
            k.cells()
                .find(|&c| k.label(c) == &CellLabel::Simplex(vs.to_vec()))
                .unwrap()
        };
        let v = GradientField::from_pairs(
            k.len(),
            [
                (id(&[1]), id(&[0, 1])),
                (id(&[2]), id(&[0, 2])),
                (id(&[0]), id(&[0, 3])),
                (id(&[1, 3]), id(&[0, 1, 3])),
                (id(&[2, 3]), id(&[0, 2, 3])),
            ],
        )
        .unwrap();
        (k, v)
    }

    fn id(k: &CellComplex, vs: &[u32]) -> CellId {
        k.cells()
            .find(|&c| k.label(c) == &CellLabel::Simplex(vs.to_vec()))
            .unwrap()
    }

    #[test]
    fn saddle_loop_has_one_merge() {
        let (k, v) = tetra();
        assert!(validate_field(&k, &v).is_ok());
        let regions = descending_regions(&k, &v).unwrap();
        let saddle = regions
            .iter()
            .find(|r| r.critical == id(&k, &[1, 2]))
            .unwrap();
        let merges = detect_merges(&k, &v, saddle);
        assert_eq!(merges.len(), 1);
        assert_eq!(merges[0].cell, id(&k, &[0]));
        assert_eq!(merges[0].incoming, vec![id(&k, &[0, 1]), id(&k, &[0, 2])]);
    }

    #[test]
    fn single_push_removes_the_merge() {
        let (k, v) = tetra();
        let regions = descending_regions(&k, &v).unwrap();
        let saddle = regions
            .iter()
            .find(|r| r.critical == id(&k, &[1, 2]))
            .unwrap();
        let mp = &detect_merges(&k, &v, saddle)[0];
        let out = push_merge(&k, &v, mp).unwrap();
        assert_eq!(out.complex.len(), k.len() + 4);
        assert!(out.complex.check_regular().is_ok());
        assert!(validate_field(&out.complex, &out.field).is_ok());
        let before: Vec<_> = v.critical_cells().collect();
        assert_eq!(out.field.critical_cells().collect::<Vec<_>>(), before);
        let regions = descending_regions(&out.complex, &out.field).unwrap();
        for r in &regions {
            assert!(detect_merges(&out.complex, &out.field, r).is_empty());
        }
    }

    #[test]
    fn repair_reports_one_push() {
        let (k, v) = tetra();
        let (k2, v2, report) = repair_to_disks(&k, &v, None).unwrap();
        assert_eq!(report.total_pushes(), 1);
        assert!(report.residual.is_empty());
        assert!(!report.partial);
        assert_eq!(k2.len(), k.len() + 4);
        assert_eq!(v2.critical_count(), v.critical_count());
    }

    #[test]
    fn merge_free_input_needs_no_push() {
        let k = build_simplicial(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let v = GradientField::from_pairs(k.len(), [(id(&k, &[1]), id(&k, &[1, 2]))]).unwrap();
        let (_, v2, report) = repair_to_disks(&k, &v, None).unwrap();
        assert_eq!(report.total_pushes(), 0);
        assert_eq!(v2, v);
    }

    #[test]
    fn repair_needs_closed_complex() {
        let k = build_simplicial(&[vec![0, 1]]).unwrap();
        let v = GradientField::all_critical(k.len());
        assert_eq!(
            repair_to_disks(&k, &v, None).unwrap_err(),
            RegionError::NotClosed
        );
    }
}
