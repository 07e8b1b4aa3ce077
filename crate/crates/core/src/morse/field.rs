use serde::{Deserialize, Serialize};

use super::MorseError;
use crate::complex::{CellComplex, CellId};

/// Role of a cell in a gradient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellStatus {
    Critical,
    /// Arrow tail; carries the head it points to.
    Tail(CellId),
    /// Arrow head; carries the tail pointing to it.
    Head(CellId),
}

/// A discrete gradient vector field: a partial matching of cells with
/// codimension-1 cofaces. Unmatched cells are critical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradientField {
    up: Vec<Option<CellId>>,
    down: Vec<Option<CellId>>,
}

/// Serialisable form: `pairs: [[tail, head], ...]`, `critical: [...]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub pairs: Vec<[u32; 2]>,
    pub critical: Vec<u32>,
}

impl GradientField {
    /// The empty matching: every cell critical.
    pub fn all_critical(len: usize) -> Self {
        GradientField {
            up: vec![None; len],
            down: vec![None; len],
        }
    }

    /// Builds a field from `(tail, head)` pairs. Fails if a cell is used
    /// twice; incidence and acyclicity are checked by [`validate_field`].
    pub fn from_pairs<I>(len: usize, pairs: I) -> Result<Self, MorseError>
    where
        I: IntoIterator<Item = (CellId, CellId)>,
    {
        let mut v = Self::all_critical(len);
        for (t, h) in pairs {
            for c in [t, h] {
                if c.index() >= len {
                    return Err(MorseError::UnknownCell { cell: c });
                }
            }
            if t == h || !v.is_critical(t) || !v.is_critical(h) {
                return Err(MorseError::Overlap {
                    cell: if v.is_critical(t) { h } else { t },
                });
            }
            v.up[t.index()] = Some(h);
            v.down[h.index()] = Some(t);
        }
        Ok(v)
    }

    pub fn from_json(len: usize, json: &FieldJson) -> Result<Self, MorseError> {
        let v = Self::from_pairs(len, json.pairs.iter().map(|p| (CellId(p[0]), CellId(p[1]))))?;
        let mut listed = vec![false; len];
        for &c in &json.critical {
            let c = CellId(c);
            if c.index() >= len {
                return Err(MorseError::UnknownCell { cell: c });
            }
            if !v.is_critical(c) || listed[c.index()] {
                return Err(MorseError::Overlap { cell: c });
            }
            listed[c.index()] = true;
        }
        if let Some(missing) = (0..len).find(|&i| v.is_critical(i.into()) && !listed[i]) {
            return Err(MorseError::Unassigned {
                cell: missing.into(),
            });
        }
        Ok(v)
    }

    pub fn to_json(&self) -> FieldJson {
        FieldJson {
            pairs: self.pairs().map(|(t, h)| [t.0, h.0]).collect(),
            critical: self.critical_cells().map(|c| c.0).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    #[inline]
    pub fn status(&self, c: CellId) -> CellStatus {
        match (self.up[c.index()], self.down[c.index()]) {
            (Some(h), _) => CellStatus::Tail(h),
            (None, Some(t)) => CellStatus::Head(t),
            (None, None) => CellStatus::Critical,
        }
    }

    #[inline]
    pub fn is_critical(&self, c: CellId) -> bool {
        self.up[c.index()].is_none() && self.down[c.index()].is_none()
    }

    /// `V(c)` when `c` is a tail.
    #[inline]
    pub fn head_of(&self, c: CellId) -> Option<CellId> {
        self.up[c.index()]
    }

    /// `V^{-1}(c)` when `c` is a head.
    #[inline]
    pub fn tail_of(&self, c: CellId) -> Option<CellId> {
        self.down[c.index()]
    }

    pub fn partner(&self, c: CellId) -> Option<CellId> {
        self.up[c.index()].or(self.down[c.index()])
    }

    /// `(tail, head)` pairs by ascending tail.
    pub fn pairs(&self) -> impl Iterator<Item = (CellId, CellId)> + '_ {
        self.up
            .iter()
            .enumerate()
            .filter_map(|(t, h)| h.map(|h| (CellId::from(t), h)))
    }

    pub fn critical_cells(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.len())
            .map(CellId::from)
            .filter(move |&c| self.is_critical(c))
    }

    pub fn critical_count(&self) -> usize {
        self.critical_cells().count()
    }

    pub fn pair_count(&self) -> usize {
        self.up.iter().filter(|h| h.is_some()).count()
    }

    /// Critical cells counted by dimension.
    pub fn critical_counts(&self, k: &CellComplex) -> Vec<usize> {
        let mut counts = vec![0; k.dimension() + 1];
        for c in self.critical_cells() {
            counts[k.dim(c)] += 1;
        }
        counts
    }

    /// Field on the dual complex: every arrow reversed.
    pub fn reversed(&self) -> GradientField {
        GradientField {
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    pub(crate) fn set_pair(&mut self, tail: CellId, head: CellId) {
        self.up[tail.index()] = Some(head);
        self.down[head.index()] = Some(tail);
    }

    pub(crate) fn clear(&mut self, c: CellId) {
        if let Some(h) = self.up[c.index()].take() {
            self.down[h.index()] = None;
        }
        if let Some(t) = self.down[c.index()].take() {
            self.up[t.index()] = None;
        }
    }

    pub(crate) fn extend_to(&mut self, len: usize) {
        self.up.resize(len, None);
        self.down.resize(len, None);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "kebab-case")]
pub enum Violation {
    SizeMismatch { field: usize, complex: usize },
    Grading { tail: CellId, head: CellId },
    Incidence { tail: CellId, head: CellId },
    Cycle { cells: Vec<CellId> },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks grading, face incidence of every pair and absence of closed
/// V-paths. Reports at most one cycle (the first found).
///
/// Partition of cells into tails, heads and critical cells is guaranteed by
/// the [`GradientField`] representation itself.
pub fn validate_field(k: &CellComplex, v: &GradientField) -> ValidationReport {
    let mut violations = Vec::new();
    if v.len() != k.len() {
        violations.push(Violation::SizeMismatch {
            field: v.len(),
            complex: k.len(),
        });
        return ValidationReport { violations };
    }
    for (t, h) in v.pairs() {
        if k.dim(h) != k.dim(t) + 1 {
            violations.push(Violation::Grading { tail: t, head: h });
        } else if k.faces(h).binary_search(&t).is_err() {
            violations.push(Violation::Incidence { tail: t, head: h });
        }
    }
    if let Some(cycle) = find_cycle(k, v) {
        violations.push(Violation::Cycle { cells: cycle });
    }
    ValidationReport { violations }
}

/// Depth-first search on the graph `t -> t'` with `t' in faces(V(t))`, `t' != t`,
/// `t'` a tail. Returns the cells of one closed V-path if any.
fn find_cycle(k: &CellComplex, v: &GradientField) -> Option<Vec<CellId>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark = vec![Mark::New; k.len()];
    let successors = |t: CellId| -> Vec<CellId> {
        let h = v.head_of(t).unwrap();
        k.faces(h)
            .iter()
            .copied()
            .filter(|&f| f != t && v.head_of(f).is_some())
            .collect()
    };
    for (root, _) in v.pairs() {
        if mark[root.index()] != Mark::New {
            continue;
        }
        let mut stack: Vec<(CellId, Vec<CellId>, usize)> = vec![(root, successors(root), 0)];
        mark[root.index()] = Mark::Open;
        while let Some(top) = stack.last_mut() {
            if top.2 == top.1.len() {
                mark[top.0.index()] = Mark::Done;
                stack.pop();
                continue;
            }
            let next = top.1[top.2];
            top.2 += 1;
            match mark[next.index()] {
                Mark::Done => {}
                Mark::Open => {
                    let start = stack.iter().position(|f| f.0 == next).unwrap();
                    let mut cells = Vec::new();
                    for f in &stack[start..] {
                        cells.push(f.0);
                        cells.push(v.head_of(f.0).unwrap());
                    }
                    cells.push(next);
                    return Some(cells);
                }
                Mark::New => {
                    mark[next.index()] = Mark::Open;
                    let succ = successors(next);
                    stack.push((next, succ, 0));
                }
            }
        }
    }
    None
}

/// An alternating sequence `t0 < s0 > t1 < s1 ... ` following the field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VPath {
    pub cells: Vec<CellId>,
}

impl VPath {
    pub fn last(&self) -> CellId {
        *self.cells.last().unwrap()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPathSet {
    pub paths: Vec<VPath>,
    pub truncated: bool,
}

/// All maximal V-paths leaving `start`, up to `max_paths`.
///
/// A critical `start` of dimension p+1 launches one path per face; a tail
/// launches a single path from itself. Paths end at the first cell that is
/// not a tail, or at a head with no other face.
pub fn enumerate_vpaths(
    k: &CellComplex,
    v: &GradientField,
    start: CellId,
    max_paths: usize,
) -> VPathSet {
    let roots: Vec<CellId> = match v.status(start) {
        CellStatus::Critical => k.faces(start).to_vec(),
        CellStatus::Tail(_) => vec![start],
        CellStatus::Head(_) => Vec::new(),
    };
    let mut paths = Vec::new();
    let mut truncated = false;
    let mut path: Vec<CellId> = Vec::new();
    // (cell, depth in path)
    let mut stack: Vec<(CellId, usize)> = roots.iter().rev().map(|&r| (r, 0)).collect();
    while let Some((cell, depth)) = stack.pop() {
        path.truncate(depth);
        path.push(cell);
        let Some(head) = v.head_of(cell) else {
            if paths.len() == max_paths {
                truncated = true;
                break;
            }
            paths.push(VPath {
                cells: path.clone(),
            });
            continue;
        };
        path.push(head);
        let nexts: Vec<CellId> = k
            .faces(head)
            .iter()
            .copied()
            .filter(|&f| f != cell)
            .collect();
        if nexts.is_empty() {
            if paths.len() == max_paths {
                truncated = true;
                break;
            }
            paths.push(VPath {
                cells: path.clone(),
            });
            continue;
        }
        for &n in nexts.iter().rev() {
            stack.push((n, depth + 2));
        }
    }
    VPathSet { paths, truncated }
}
