//! Descent along gradient paths and maximum-to-maximum routing through
//! saddles.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};

use thiserror::Error;

use crate::complex::{CellComplex, CellId};
use crate::morse::{CellStatus, GradientField, MorseFunction, VPath};
use crate::regions::{CriticalKind, Decomposition};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathError {
    #[error("cell {cell} is not a critical cell of top dimension")]
    NotMaximum { cell: CellId },
    #[error("cell {cell} is not in any descending region of a maximum")]
    Uncovered { cell: CellId },
    #[error("no route from {start} to {target}")]
    NoRoute { start: CellId, target: CellId },
    #[error("cell {cell} is not a cell of the complex")]
    UnknownCell { cell: CellId },
}

/// Follows the field downward from `start` until a critical cell: a tail
/// moves to its head, a head moves to its least face other than its tail.
/// Returns the terminal cell and the cells visited.
pub fn steepest_descent(k: &CellComplex, v: &GradientField, start: CellId) -> (CellId, VPath) {
    let mut cells = vec![start];
    let mut cur = start;
    loop {
        let (from, head) = match v.status(cur) {
            CellStatus::Critical => break,
            CellStatus::Tail(h) => {
                cells.push(h);
                (cur, h)
            }
            CellStatus::Head(t) => (t, cur),
        };
        match k.faces(head).iter().copied().find(|&f| f != from) {
            Some(next) => {
                cells.push(next);
                cur = next;
            }
            None => {
                cur = head;
                break;
            }
        }
    }
    (cur, VPath { cells })
}

/// Per-step cost of a route.
#[derive(Clone, Copy, Debug)]
pub enum Cost<'a> {
    Hops,
    /// `|f(next) - f(current)|`.
    Height(&'a MorseFunction),
}

impl Cost<'_> {
    fn step(&self, a: CellId, b: CellId) -> f64 {
        match self {
            Cost::Hops => 1.0,
            Cost::Height(f) => (f.value(b) - f.value(a)).abs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Route {
    pub cells: Vec<CellId>,
    /// Maximum, saddle, maximum, ... ending at the target.
    pub waypoints: Vec<CellId>,
    pub cost: f64,
}

/// Saddles joining maxima: `s` joins `m1` and `m2` when the ascending
/// region of `s`, together with the cofaces of its cells, meets the
/// descending regions of both. Critical cells end V-paths without joining
/// the region, hence the cofaces.
pub fn saddle_links(k: &CellComplex, decomp: &Decomposition) -> BTreeMap<CellId, BTreeSet<CellId>> {
    let n = k.dimension();
    let mut links = BTreeMap::new();
    if n == 0 {
        return links;
    }
    let maxima: Vec<_> = decomp
        .descending
        .iter()
        .filter(|r| r.dim == n && !r.via_boundary)
        .collect();
    for c in &decomp.critical {
        if c.dim + 1 != n || c.kind != CriticalKind::Critical {
            continue;
        }
        let Some(up) = decomp.ascending_region(c.id) else {
            continue;
        };
        let reach: BTreeSet<CellId> = up
            .cells
            .iter()
            .flat_map(|&x| std::iter::once(x).chain(k.cofaces(x).iter().copied()))
            .collect();
        let touched: BTreeSet<CellId> = maxima
            .iter()
            .filter(|m| !reach.is_disjoint(&m.cells))
            .map(|m| m.critical)
            .collect();
        if touched.len() >= 2 {
            links.insert(c.id, touched);
        }
    }
    links
}

/// Cost-minimal face-incident route from `start` to the maximum `target`,
/// moving inside descending regions of maxima and crossing between them only
/// at linking saddles.
pub fn route_to_maximum(
    k: &CellComplex,
    decomp: &Decomposition,
    start: CellId,
    target: CellId,
    cost: Cost<'_>,
) -> Result<Route, PathError> {
    for c in [start, target] {
        if !k.contains(c) {
            return Err(PathError::UnknownCell { cell: c });
        }
    }
    let n = k.dimension();
    let maxima: BTreeMap<CellId, &BTreeSet<CellId>> = decomp
        .descending
        .iter()
        .filter(|r| r.dim == n && !r.via_boundary)
        .map(|r| (r.critical, &r.cells))
        .collect();
    if !maxima.contains_key(&target) {
        return Err(PathError::NotMaximum { cell: target });
    }
    let links = saddle_links(k, decomp);
    // Saddles usable from each maximum.
    let mut exits: HashMap<CellId, BTreeSet<CellId>> = HashMap::new();
    for (&s, ms) in &links {
        for &m in ms {
            exits.entry(m).or_default().insert(s);
        }
    }
    let allowed = |c: CellId, m: CellId| {
        maxima[&m].contains(&c) || exits.get(&m).is_some_and(|e| e.contains(&c))
    };

    type State = (CellId, CellId); // (cell, current maximum)
    let mut dist: HashMap<State, f64> = HashMap::new();
    let mut prev: HashMap<State, State> = HashMap::new();
    let mut heap = BinaryHeap::new();
    let starts: Vec<CellId> = maxima
        .iter()
        .filter(|(_, cells)| cells.contains(&start))
        .map(|(&m, _)| m)
        .collect();
    if starts.is_empty() {
        return Err(PathError::Uncovered { cell: start });
    }
    for m in starts {
        dist.insert((start, m), 0.0);
        heap.push(Reverse((Ordered(0.0), start, m)));
    }
    let goal = (target, target);
    while let Some(Reverse((Ordered(d), c, m))) = heap.pop() {
        if dist.get(&(c, m)).is_some_and(|&best| d > best) {
            continue;
        }
        if (c, m) == goal {
            break;
        }
        let mut relax = |next: State, w: f64| {
            let nd = d + w;
            if dist.get(&next).is_none_or(|&old| nd < old) {
                dist.insert(next, nd);
                prev.insert(next, (c, m));
                heap.push(Reverse((Ordered(nd), next.0, next.1)));
            }
        };
        let mut neighbours: Vec<CellId> = k.faces(c).iter().chain(k.cofaces(c)).copied().collect();
        neighbours.sort();
        for x in neighbours {
            if allowed(x, m) {
                relax((x, m), cost.step(c, x));
            }
        }
        if let Some(ms) = links.get(&c) {
            for &m2 in ms {
                if m2 != m {
                    relax((c, m2), 0.0);
                }
            }
        }
    }
    let Some(&total) = dist.get(&goal) else {
        return Err(PathError::NoRoute { start, target });
    };

    let mut states = vec![goal];
    while let Some(p) = prev.get(states.last().unwrap()) {
        states.push(*p);
    }
    states.reverse();
    let mut cells: Vec<CellId> = Vec::new();
    let mut waypoints = vec![states[0].1];
    for w in states.windows(2) {
        if w[0].0 == w[1].0 {
            // Crossing at a saddle.
            waypoints.push(w[0].0);
            waypoints.push(w[1].1);
        }
    }
    for &(c, _) in &states {
        if cells.last() != Some(&c) {
            cells.push(c);
        }
    }
    Ok(Route {
        cells,
        waypoints,
        cost: total,
    })
}

/// Total order on finite costs for the heap.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Ordered(f64);

impl Eq for Ordered {}

impl PartialOrd for Ordered {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordered {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_cubical, build_simplicial, CellLabel};
    use crate::morse::{extend_from_vertex_values, VertexValues};
    use crate::regions::morse_smale;

    fn sid(k: &CellComplex, verts: &[u32]) -> CellId {
        k.cells()
            .find(|&c| k.label(c) == &CellLabel::Simplex(verts.to_vec()))
            .unwrap()
    }

    #[test]
    fn critical_start_has_zero_length() {
        let k = build_simplicial(&[vec![0, 1]]).unwrap();
        let v = GradientField::all_critical(k.len());
        let (end, path) = steepest_descent(&k, &v, sid(&k, &[0, 1]));
        assert_eq!(end, sid(&k, &[0, 1]));
        assert_eq!(path.cells, vec![sid(&k, &[0, 1])]);
    }

    #[test]
    fn circle_descends_to_arc_minimum() {
        let k = build_simplicial(&[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]).unwrap();
        let v = GradientField::from_pairs(
            k.len(),
            [
                (sid(&k, &[1]), sid(&k, &[1, 2])),
                (sid(&k, &[3]), sid(&k, &[0, 3])),
            ],
        )
        .unwrap();
        assert_eq!(steepest_descent(&k, &v, sid(&k, &[1])).0, sid(&k, &[2]));
        assert_eq!(steepest_descent(&k, &v, sid(&k, &[0, 3])).0, sid(&k, &[0]));
    }

    #[test]
    fn square_descends_to_minimum() {
        let k = build_simplicial(&[vec![0, 1, 3], vec![0, 2, 3]]).unwrap();
        let vals = VertexValues::from_keys(&k, [(0, 0.0), (1, 1.0), (2, 1.0), (3, 2.0)]);
        let v = extend_from_vertex_values(&k, &vals).unwrap();
        for c in k.cells() {
            let (end, path) = steepest_descent(&k, &v, c);
            assert_eq!(end, sid(&k, &[0]));
            assert!(path.cells.len() <= k.len() + 1);
        }
    }

    #[test]
    fn route_inside_target_region_is_pure_ascent() {
        let g = build_cubical(&[2, 2]).unwrap();
        let raster = [0.0, 1.0, 0.0, 1.0, 5.0, 1.0, 0.0, 1.0, 0.0];
        let vals = VertexValues::from_vertex_order(&g, &raster);
        let v = extend_from_vertex_values(&g, &vals).unwrap();
        let d = morse_smale(&g, &v).unwrap();
        let top = d
            .critical
            .iter()
            .find(|c| c.dim == 2)
            .map(|c| c.id)
            .unwrap();
        let start = *d
            .descending_region(top)
            .unwrap()
            .cells
            .iter()
            .next()
            .unwrap();
        let r = route_to_maximum(&g, &d, start, top, Cost::Hops).unwrap();
        assert_eq!(r.waypoints, vec![top]);
        assert_eq!(*r.cells.last().unwrap(), top);
    }

    #[test]
    fn non_maximum_target_is_rejected() {
        let g = build_cubical(&[1, 1]).unwrap();
        let v = GradientField::all_critical(g.len());
        let d = morse_smale(&g, &v).unwrap();
        assert_eq!(
            route_to_maximum(&g, &d, CellId(0), CellId(0), Cost::Hops),
            Err(PathError::NotMaximum { cell: CellId(0) })
        );
    }
}
