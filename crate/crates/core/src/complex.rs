//! Finite regular cell complexes described by their graded codimension-1
//! face relation.
//!
//! Cells are addressed by dense [`CellId`]s. Nothing geometric is stored:
//! a complex is the set of cells, their dimensions and the face/coface
//! incidence lists, plus an optional label used to talk to the outside
//! world (sorted vertex tuples for simplices, anchor + direction mask for
//! cubes).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest cube dimension representable by the direction bitmask.
pub const MAX_CUBICAL_AXES: usize = 8;
/// Default dimension cap for inputs.
pub const DEFAULT_DIMENSION_CAP: usize = 6;

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct CellId(pub u32);

impl CellId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for CellId {
    fn from(i: usize) -> Self {
        CellId(i as u32)
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// External identity of a cell.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CellLabel {
    None,
    /// Sorted vertex ids of a simplex.
    Simplex(Vec<u32>),
    /// Lowest vertex of the cube and the set of axes it extends along.
    Cube {
        anchor: Vec<u32>,
        directions: u8,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("no cells or facets given")]
    Empty,
    #[error("facet {facet} repeats vertex {vertex}")]
    RepeatedVertex { facet: usize, vertex: u32 },
    #[error("grid extent along axis {axis} is zero")]
    ZeroExtent { axis: usize },
    #[error("{axes} axes requested, at most {cap} supported")]
    TooManyAxes { axes: usize, cap: usize },
    #[error("cell {cell} lists unknown face {face}")]
    UnknownFace { cell: CellId, face: CellId },
    #[error("cell {cell} of dimension {dim} lists face {face} of dimension {face_dim}")]
    Grading {
        cell: CellId,
        dim: usize,
        face: CellId,
        face_dim: usize,
    },
    #[error("cell {cell} of dimension {dim} has only {faces} codimension-1 faces")]
    Irregular {
        cell: CellId,
        dim: usize,
        faces: usize,
    },
    #[error("cell {cell} has {cofaces} top-dimensional cofaces, not a pseudo-manifold")]
    NotPseudoManifold { cell: CellId, cofaces: usize },
}

/// A finite cell complex given by its codimension-1 face relation.
///
/// Immutable after construction; cofaces are always the exact transpose of
/// faces and both lists are sorted by ascending id.
#[derive(Clone, Debug, PartialEq)]
pub struct CellComplex {
    dims: Vec<u8>,
    faces: Vec<Vec<CellId>>,
    cofaces: Vec<Vec<CellId>>,
    labels: Vec<CellLabel>,
    dimension: usize,
}

impl CellComplex {
    /// Builds a complex from explicit incidence lists, checking grading and
    /// the regularity proxy (every cell of dimension >= 1 has at least two
    /// codimension-1 faces).
    pub fn from_incidence(dims: Vec<usize>, faces: Vec<Vec<CellId>>) -> Result<Self, ComplexError> {
        if dims.is_empty() {
            return Err(ComplexError::Empty);
        }
        let labels = vec![CellLabel::None; dims.len()];
        let complex = Self::assemble(dims.iter().map(|&d| d as u8).collect(), faces, labels)?;
        complex.check_regular()?;
        Ok(complex)
    }

    /// Assembles without the regularity check. Grading is still enforced.
    pub(crate) fn assemble(
        dims: Vec<u8>,
        mut faces: Vec<Vec<CellId>>,
        labels: Vec<CellLabel>,
    ) -> Result<Self, ComplexError> {
        let m = dims.len();
        assert_eq!(faces.len(), m);
        assert_eq!(labels.len(), m);
        let mut cofaces = vec![Vec::new(); m];
        for (c, fs) in faces.iter_mut().enumerate() {
            fs.sort_unstable();
            fs.dedup();
            for &f in fs.iter() {
                if f.index() >= m {
                    return Err(ComplexError::UnknownFace {
                        cell: c.into(),
                        face: f,
                    });
                }
                if dims[f.index()] as usize + 1 != dims[c] as usize {
                    return Err(ComplexError::Grading {
                        cell: c.into(),
                        dim: dims[c] as usize,
                        face: f,
                        face_dim: dims[f.index()] as usize,
                    });
                }
                cofaces[f.index()].push(CellId::from(c));
            }
        }
        let dimension = dims.iter().copied().max().unwrap_or(0) as usize;
        Ok(CellComplex {
            dims,
            faces,
            cofaces,
            labels,
            dimension,
        })
    }

    pub(crate) fn empty() -> Self {
        CellComplex {
            dims: Vec::new(),
            faces: Vec::new(),
            cofaces: Vec::new(),
            labels: Vec::new(),
            dimension: 0,
        }
    }

    pub fn check_regular(&self) -> Result<(), ComplexError> {
        for c in self.cells() {
            let d = self.dim(c);
            if d >= 1 && self.faces(c).len() < 2 {
                return Err(ComplexError::Irregular {
                    cell: c,
                    dim: d,
                    faces: self.faces(c).len(),
                });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Maximal cell dimension.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    #[inline]
    pub fn dim(&self, c: CellId) -> usize {
        self.dims[c.index()] as usize
    }

    #[inline]
    pub fn faces(&self, c: CellId) -> &[CellId] {
        &self.faces[c.index()]
    }

    #[inline]
    pub fn cofaces(&self, c: CellId) -> &[CellId] {
        &self.cofaces[c.index()]
    }

    pub fn label(&self, c: CellId) -> &CellLabel {
        &self.labels[c.index()]
    }

    pub fn contains(&self, c: CellId) -> bool {
        c.index() < self.len()
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..self.len()).map(CellId::from)
    }

    pub fn cells_of_dim(&self, d: usize) -> impl Iterator<Item = CellId> + '_ {
        self.cells().filter(move |&c| self.dim(c) == d)
    }

    /// Number of cells per dimension, indexed by dimension.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dimension + 1];
        for &d in &self.dims {
            counts[d as usize] += 1;
        }
        counts
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.counts_by_dim())
    }

    /// External key of a 0-cell: the vertex id for simplicial complexes,
    /// the row-major raster index for cubical grids, the cell id otherwise.
    pub fn vertex_key(&self, c: CellId) -> Option<u32> {
        if self.dim(c) != 0 {
            return None;
        }
        match self.label(c) {
            CellLabel::Simplex(v) => Some(v[0]),
            _ => Some(c.0),
        }
    }

    pub fn vertex_lookup(&self) -> HashMap<u32, CellId> {
        self.cells_of_dim(0)
            .filter_map(|c| self.vertex_key(c).map(|k| (k, c)))
            .collect()
    }

    /// All 0-cells in the closure of every cell, sorted.
    pub fn vertex_sets(&self) -> Vec<Vec<CellId>> {
        let mut order: Vec<CellId> = self.cells().collect();
        order.sort_by_key(|&c| (self.dim(c), c));
        let mut verts: Vec<Vec<CellId>> = vec![Vec::new(); self.len()];
        for c in order {
            if self.dim(c) == 0 {
                verts[c.index()] = vec![c];
                continue;
            }
            let mut set = BTreeSet::new();
            for &f in self.faces(c) {
                set.extend(verts[f.index()].iter().copied());
            }
            verts[c.index()] = set.into_iter().collect();
        }
        verts
    }

    /// Downward closure of a set of cells (the cells with all their faces).
    pub fn closure<I: IntoIterator<Item = CellId>>(&self, seeds: I) -> BTreeSet<CellId> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<CellId> = seeds.into_iter().collect();
        while let Some(c) = stack.pop() {
            if out.insert(c) {
                stack.extend(self.faces(c).iter().copied());
            }
        }
        out
    }

    /// Open star: the cell together with all cells having it as an
    /// iterated face.
    pub fn star(&self, c: CellId) -> BTreeSet<CellId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![c];
        while let Some(x) = stack.pop() {
            if out.insert(x) {
                stack.extend(self.cofaces(x).iter().copied());
            }
        }
        out
    }

    /// Dual complex: dimensions reversed (p becomes n - p) and the face
    /// relation transposed. Purely combinatorial; ids are preserved.
    pub fn dual(&self) -> CellComplex {
        let n = self.dimension as u8;
        CellComplex {
            dims: self.dims.iter().map(|&d| n - d).collect(),
            faces: self.cofaces.clone(),
            cofaces: self.faces.clone(),
            labels: self.labels.clone(),
            dimension: self.dimension,
        }
    }

    /// Subcomplex spanned by `keep` (which must be closed under faces).
    /// Returns the complex and the map from new ids to ids in `self`.
    pub(crate) fn subcomplex(&self, keep: &BTreeSet<CellId>) -> (CellComplex, Vec<CellId>) {
        let to_parent: Vec<CellId> = keep.iter().copied().collect();
        let from_parent: HashMap<CellId, CellId> = to_parent
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, CellId::from(i)))
            .collect();
        let dims = to_parent.iter().map(|&c| self.dims[c.index()]).collect();
        let faces = to_parent
            .iter()
            .map(|&c| self.faces(c).iter().map(|f| from_parent[f]).collect())
            .collect();
        let labels = to_parent.iter().map(|&c| self.label(c).clone()).collect();
        let sub = if to_parent.is_empty() {
            CellComplex::empty()
        } else {
            CellComplex::assemble(dims, faces, labels).expect("subcomplex of a valid complex")
        };
        (sub, to_parent)
    }

    /// Complex obtained by appending cells and rewriting face lists.
    pub(crate) fn edited(
        &self,
        new_cells: &[(usize, Vec<CellId>)],
        rewrites: &[(CellId, Vec<CellId>)],
    ) -> Result<CellComplex, ComplexError> {
        let mut dims = self.dims.clone();
        let mut faces = self.faces.clone();
        let mut labels = self.labels.clone();
        for (d, fs) in new_cells {
            dims.push(*d as u8);
            faces.push(fs.clone());
            labels.push(CellLabel::None);
        }
        for (c, fs) in rewrites {
            faces[c.index()] = fs.clone();
        }
        CellComplex::assemble(dims, faces, labels)
    }
}

pub(crate) fn alternating_sum(counts: &[usize]) -> i64 {
    counts
        .iter()
        .enumerate()
        .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

/// Builds the simplicial complex generated by the given facets. Every
/// sub-simplex exists once, identified by its sorted vertex tuple. Cells
/// are numbered by dimension, then lexicographically.
pub fn build_simplicial(facets: &[Vec<u32>]) -> Result<CellComplex, ComplexError> {
    if facets.is_empty() || facets.iter().all(|f| f.is_empty()) {
        return Err(ComplexError::Empty);
    }
    let mut by_dim: BTreeMap<usize, BTreeSet<Vec<u32>>> = BTreeMap::new();
    for (i, facet) in facets.iter().enumerate() {
        let mut sorted = facet.clone();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(ComplexError::RepeatedVertex {
                    facet: i,
                    vertex: w[0],
                });
            }
        }
        if sorted.len() > 16 {
            return Err(ComplexError::TooManyAxes {
                axes: sorted.len() - 1,
                cap: 15,
            });
        }
        let k = sorted.len();
        for mask in 1u32..(1u32 << k) {
            let sub: Vec<u32> = (0..k)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| sorted[b])
                .collect();
            by_dim.entry(sub.len() - 1).or_default().insert(sub);
        }
    }
    let mut ids: HashMap<Vec<u32>, CellId> = HashMap::new();
    let mut simplices: Vec<Vec<u32>> = Vec::new();
    for set in by_dim.values() {
        for s in set {
            ids.insert(s.clone(), CellId::from(simplices.len()));
            simplices.push(s.clone());
        }
    }
    let mut dims = Vec::with_capacity(simplices.len());
    let mut faces = Vec::with_capacity(simplices.len());
    for s in &simplices {
        dims.push((s.len() - 1) as u8);
        let fs: Vec<CellId> = if s.len() == 1 {
            Vec::new()
        } else {
            (0..s.len())
                .map(|skip| {
                    let f: Vec<u32> = s
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    ids[&f]
                })
                .collect()
        };
        faces.push(fs);
    }
    let labels = simplices.into_iter().map(CellLabel::Simplex).collect();
    CellComplex::assemble(dims, faces, labels)
}

/// Builds the cubical grid with `extents[i]` unit cubes along axis `i`.
///
/// Cells are numbered by dimension, then row-major over the doubled
/// lattice (last axis fastest), so vertex ids coincide with row-major
/// raster indices.
pub fn build_cubical(extents: &[usize]) -> Result<CellComplex, ComplexError> {
    build_cubical_capped(extents, DEFAULT_DIMENSION_CAP)
}

pub fn build_cubical_capped(extents: &[usize], cap: usize) -> Result<CellComplex, ComplexError> {
    let cap = cap.min(MAX_CUBICAL_AXES);
    if extents.is_empty() {
        return Err(ComplexError::Empty);
    }
    if extents.len() > cap {
        return Err(ComplexError::TooManyAxes {
            axes: extents.len(),
            cap,
        });
    }
    if let Some(axis) = extents.iter().position(|&e| e == 0) {
        return Err(ComplexError::ZeroExtent { axis });
    }
    let d = extents.len();
    let sizes: Vec<usize> = extents.iter().map(|&e| 2 * e + 1).collect();
    let total: usize = sizes.iter().product();
    let mut strides = vec![1usize; d];
    for i in (0..d.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * sizes[i + 1];
    }
    let coords = |mut lin: usize| -> Vec<usize> {
        let mut c = vec![0; d];
        for i in 0..d {
            c[i] = lin / strides[i];
            lin %= strides[i];
        }
        c
    };
    let cell_dim = |lin: usize| coords(lin).iter().filter(|&&x| x % 2 == 1).count();

    // Stable ordering: dimension first, then row-major position.
    let mut order: Vec<usize> = (0..total).collect();
    order.sort_by_key(|&lin| cell_dim(lin));
    let mut id_of = vec![CellId(0); total];
    for (id, &lin) in order.iter().enumerate() {
        id_of[lin] = CellId::from(id);
    }

    let mut dims = Vec::with_capacity(total);
    let mut faces = Vec::with_capacity(total);
    let mut labels = Vec::with_capacity(total);
    for &lin in &order {
        let c = coords(lin);
        let mut fs = Vec::new();
        let mut mask = 0u8;
        for axis in 0..d {
            if c[axis] % 2 == 1 {
                mask |= 1 << axis;
                fs.push(id_of[lin - strides[axis]]);
                fs.push(id_of[lin + strides[axis]]);
            }
        }
        dims.push(mask.count_ones() as u8);
        faces.push(fs);
        labels.push(CellLabel::Cube {
            anchor: c.iter().map(|&x| (x / 2) as u32).collect(),
            directions: mask,
        });
    }
    CellComplex::assemble(dims, faces, labels)
}

/// The boundary subcomplex together with its embedding into the parent.
#[derive(Clone, Debug)]
pub struct Boundary {
    pub complex: CellComplex,
    /// `to_parent[b]` is the parent id of boundary cell `b`.
    pub to_parent: Vec<CellId>,
    from_parent: HashMap<CellId, CellId>,
}

impl Boundary {
    pub fn is_empty(&self) -> bool {
        self.to_parent.is_empty()
    }

    pub fn parent(&self, b: CellId) -> CellId {
        self.to_parent[b.index()]
    }

    /// Boundary id of a parent cell, if the cell lies on the boundary.
    pub fn local(&self, parent: CellId) -> Option<CellId> {
        self.from_parent.get(&parent).copied()
    }

    pub fn contains_parent(&self, parent: CellId) -> bool {
        self.from_parent.contains_key(&parent)
    }
}

/// Subcomplex generated by the (n-1)-cells with exactly one n-coface.
pub fn boundary_subcomplex(k: &CellComplex) -> Result<Boundary, ComplexError> {
    let n = k.dimension();
    let mut seeds = Vec::new();
    if n >= 1 {
        for c in k.cells_of_dim(n - 1) {
            let top = k.cofaces(c).len();
            if top > 2 {
                return Err(ComplexError::NotPseudoManifold {
                    cell: c,
                    cofaces: top,
                });
            }
            if top == 1 {
                seeds.push(c);
            }
        }
    }
    let keep = k.closure(seeds);
    let (complex, to_parent) = k.subcomplex(&keep);
    let from_parent = to_parent
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, CellId::from(i)))
        .collect();
    Ok(Boundary {
        complex,
        to_parent,
        from_parent,
    })
}

/// Size profile of a complex (and of a gradient field on it).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexStats {
    pub m: usize,
    pub n: usize,
    pub m_d: Vec<usize>,
    pub r_d: Vec<f64>,
    pub p_d: Vec<f64>,
    pub p_max: f64,
    pub c_t: Option<usize>,
    pub c_d: Option<Vec<usize>>,
}

pub fn stats(k: &CellComplex, field: Option<&crate::morse::GradientField>) -> ComplexStats {
    let n = k.dimension();
    let m_d = k.counts_by_dim();
    let mut face_sum = vec![0usize; n + 1];
    let mut coface_sum = vec![0usize; n + 1];
    for c in k.cells() {
        face_sum[k.dim(c)] += k.faces(c).len();
        coface_sum[k.dim(c)] += k.cofaces(c).len();
    }
    let mean = |sum: &[usize]| -> Vec<f64> {
        sum.iter()
            .zip(&m_d)
            .map(|(&s, &cnt)| if cnt == 0 { 0.0 } else { s as f64 / cnt as f64 })
            .collect()
    };
    let r_d = mean(&face_sum);
    let p_d = mean(&coface_sum);
    let p_max = p_d.iter().copied().fold(0.0, f64::max);
    let (c_t, c_d) = match field {
        Some(v) => {
            let mut c_d = vec![0usize; n + 1];
            for c in v.critical_cells() {
                c_d[k.dim(c)] += 1;
            }
            (Some(c_d.iter().sum()), Some(c_d))
        }
        None => (None, None),
    };
    ComplexStats {
        m: k.len(),
        n,
        m_d,
        r_d,
        p_d,
        p_max,
        c_t,
        c_d,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cid(i: u32) -> CellId {
        CellId(i)
    }

    fn simplex_id(k: &CellComplex, verts: &[u32]) -> CellId {
        k.cells()
            .find(|&c| k.label(c) == &CellLabel::Simplex(verts.to_vec()))
            .unwrap()
    }

    #[test]
    fn single_triangle() {
        let k = build_simplicial(&[vec![0, 1, 2]]).unwrap();
        assert_eq!(k.counts_by_dim(), vec![3, 3, 1]);
        let t = simplex_id(&k, &[0, 1, 2]);
        assert_eq!(k.faces(t).len(), 3);
        assert_eq!(k.euler_characteristic(), 1);
    }

    #[test]
    fn circle_has_no_two_cells() {
        let k = build_simplicial(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(k.counts_by_dim(), vec![3, 3]);
        assert_eq!(k.dimension(), 1);
    }

    #[test]
    fn strip_coface_counts() {
        let k = build_simplicial(&[vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        assert_eq!(k.counts_by_dim(), vec![4, 5, 2]);
        for e in k.cells_of_dim(1) {
            let expected = if k.label(e) == &CellLabel::Simplex(vec![1, 2]) {
                2
            } else {
                1
            };
            assert_eq!(k.cofaces(e).len(), expected);
        }
    }

    #[test]
    fn repeated_vertex_rejected() {
        assert!(matches!(
            build_simplicial(&[vec![0, 1, 1]]),
            Err(ComplexError::RepeatedVertex {
                facet: 0,
                vertex: 1
            })
        ));
        assert_eq!(build_simplicial(&[]), Err(ComplexError::Empty));
    }

    #[test]
    fn cubical_counts() {
        let k = build_cubical(&[1]).unwrap();
        assert_eq!(k.counts_by_dim(), vec![2, 1]);
        let k = build_cubical(&[1, 1]).unwrap();
        assert_eq!(k.counts_by_dim(), vec![4, 4, 1]);
        let sq = k.cells_of_dim(2).next().unwrap();
        assert_eq!(k.faces(sq).len(), 4);
        for kk in 1..6usize {
            let g = build_cubical(&[kk, kk]).unwrap();
            assert_eq!(
                g.counts_by_dim(),
                vec![(kk + 1) * (kk + 1), 2 * kk * (kk + 1), kk * kk]
            );
        }
        let g = build_cubical(&[2, 3, 1]).unwrap();
        assert_eq!(g.len(), 5 * 7 * 3);
        for c in g.cells() {
            assert_eq!(g.faces(c).len(), 2 * g.dim(c));
        }
    }

    #[test]
    fn cubical_vertex_ids_are_raster_order() {
        let g = build_cubical(&[2, 3]).unwrap();
        for v in g.cells_of_dim(0) {
            let CellLabel::Cube { anchor, directions } = g.label(v) else {
                panic!()
            };
            assert_eq!(*directions, 0);
            assert_eq!(v.0, anchor[0] * 4 + anchor[1]);
        }
    }

    #[test]
    fn cubical_errors() {
        assert_eq!(
            build_cubical(&[2, 0]),
            Err(ComplexError::ZeroExtent { axis: 1 })
        );
        assert!(matches!(
            build_cubical(&[1; 7]),
            Err(ComplexError::TooManyAxes { axes: 7, cap: 6 })
        ));
        assert!(build_cubical_capped(&[1; 7], 8).is_ok());
    }

    #[test]
    fn dual_reverses_relation() {
        let k = build_simplicial(&[vec![0, 1, 2]]).unwrap();
        let d = k.dual();
        let t = simplex_id(&k, &[0, 1, 2]);
        assert_eq!(d.dim(t), 0);
        assert_eq!(d.cofaces(t).len(), 3);
        assert_eq!(d.dual(), k);

        let strip = build_simplicial(&[vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        let e = simplex_id(&strip, &[1, 2]);
        let ds = strip.dual();
        assert_eq!(ds.dim(e), 1);
        assert_eq!(ds.faces(e).len(), 2);
    }

    #[test]
    fn boundary_examples() {
        let circle = build_simplicial(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert!(boundary_subcomplex(&circle).unwrap().is_empty());

        let tri = build_simplicial(&[vec![0, 1, 2]]).unwrap();
        let b = boundary_subcomplex(&tri).unwrap();
        assert_eq!(b.complex.counts_by_dim(), vec![3, 3]);

        // Square [0,1]^2 split into 2x2 quads, each cut along its diagonal.
        let mut facets = Vec::new();
        let v = |x: u32, y: u32| y * 3 + x;
        for y in 0..2 {
            for x in 0..2 {
                facets.push(vec![v(x, y), v(x + 1, y), v(x + 1, y + 1)]);
                facets.push(vec![v(x, y), v(x, y + 1), v(x + 1, y + 1)]);
            }
        }
        let sq = build_simplicial(&facets).unwrap();
        let b = boundary_subcomplex(&sq).unwrap();
        assert_eq!(b.complex.counts_by_dim(), vec![8, 8]);
        assert!(!b.contains_parent(simplex_id(&sq, &[4])));
        for c in b.complex.cells_of_dim(0) {
            assert_eq!(b.complex.cofaces(c).len(), 2);
        }
    }

    #[test]
    fn boundary_rejects_branching() {
        let k = build_simplicial(&[vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]]).unwrap();
        assert!(matches!(
            boundary_subcomplex(&k),
            Err(ComplexError::NotPseudoManifold { cofaces: 3, .. })
        ));
    }

    #[test]
    fn stats_examples() {
        let k = build_simplicial(&[vec![0, 1, 2]]).unwrap();
        let s = stats(&k, None);
        assert_eq!((s.m, s.n), (7, 2));
        assert_eq!(s.m_d, vec![3, 3, 1]);
        assert_eq!(s.r_d[2], 3.0);
        assert_eq!(s.r_d[1], 2.0);

        let tet = build_simplicial(&[vec![0, 1, 2, 3]]).unwrap();
        let s = stats(&tet, None);
        for d in 1..=3 {
            assert_eq!(s.r_d[d], (d + 1) as f64);
        }

        let g = build_cubical(&[2, 2]).unwrap();
        let s = stats(&g, None);
        assert_eq!(s.m, 25);
        assert_eq!(s.m, s.m_d.iter().sum::<usize>());
        // vertices: 4 corners with 2 edges, 4 sides with 3, 1 centre with 4
        assert_eq!(s.p_d[0], (4.0 * 2.0 + 4.0 * 3.0 + 4.0) / 9.0);
        // edges: 8 outer with 1 square, 4 inner with 2
        assert_eq!(s.p_d[1], 16.0 / 12.0);
        assert_eq!(s.p_max, s.p_d[0]);
    }

    #[test]
    fn incidence_loader_checks() {
        let bad = CellComplex::from_incidence(vec![0, 0, 1], vec![vec![], vec![], vec![cid(0)]]);
        assert!(matches!(bad, Err(ComplexError::Irregular { .. })));
        let bad = CellComplex::from_incidence(vec![0, 2], vec![vec![], vec![cid(0)]]);
        assert!(matches!(bad, Err(ComplexError::Grading { .. })));
        let bad = CellComplex::from_incidence(vec![0, 1], vec![vec![], vec![cid(7)]]);
        assert!(matches!(bad, Err(ComplexError::UnknownFace { .. })));
        let ok = CellComplex::from_incidence(
            vec![0, 0, 1, 1],
            vec![vec![], vec![], vec![cid(0), cid(1)], vec![cid(0), cid(1)]],
        )
        .unwrap();
        assert_eq!(ok.euler_characteristic(), 0);
    }
}
