//! Gradient fields from vertex samples by lower-star processing.
//!
//! Vertices are ranked by `(value, id)`, which acts as a symbolic
//! perturbation making all values distinct. Every cell belongs to the lower
//! star of its highest-ranked vertex, and within a lower star cells are
//! visited in order of their descending vertex-rank vectors. A cell with
//! exactly one unclassified face (inside the same lower star) is paired with
//! that face; when no such cell is pending, the smallest cell with no
//! unclassified face becomes critical.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use super::{GradientField, MorseError};
use crate::complex::{boundary_subcomplex, Boundary, CellComplex, CellId};

/// Scalar samples on the 0-cells of a complex.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexValues {
    values: Vec<Option<f64>>,
}

impl VertexValues {
    /// Values indexed directly by vertex cell id.
    pub fn from_cells<I>(k: &CellComplex, values: I) -> Self
    where
        I: IntoIterator<Item = (CellId, f64)>,
    {
        let mut out = vec![None; k.len()];
        for (c, x) in values {
            if c.index() < k.len() && k.dim(c) == 0 {
                out[c.index()] = Some(x);
            }
        }
        VertexValues { values: out }
    }

    /// Values keyed by external vertex key (see [`CellComplex::vertex_key`]).
    /// Unknown keys are ignored.
    pub fn from_keys<I>(k: &CellComplex, values: I) -> Self
    where
        I: IntoIterator<Item = (u32, f64)>,
    {
        let lookup = k.vertex_lookup();
        Self::from_cells(
            k,
            values
                .into_iter()
                .filter_map(|(key, x)| lookup.get(&key).map(|&c| (c, x))),
        )
    }

    /// Values of the 0-cells in id order (for raster data on grids).
    pub fn from_vertex_order(k: &CellComplex, values: &[f64]) -> Self {
        Self::from_cells(k, k.cells_of_dim(0).zip(values.iter().copied()))
    }

    pub fn get(&self, v: CellId) -> Result<f64, MorseError> {
        self.values
            .get(v.index())
            .copied()
            .flatten()
            .ok_or(MorseError::MissingValue { vertex: v })
    }

    /// Restriction to a subcomplex embedded by `to_parent`.
    pub fn restrict(&self, to_parent: &[CellId]) -> VertexValues {
        VertexValues {
            values: to_parent
                .iter()
                .map(|&c| self.values.get(c.index()).copied().flatten())
                .collect(),
        }
    }
}

/// Field of the restricted data on the boundary subcomplex.
#[derive(Clone, Debug)]
pub struct BoundaryField {
    pub boundary: Boundary,
    pub field: GradientField,
}

/// Lower-star gradient field of closed or bounded complexes.
pub fn extend_from_vertex_values(
    k: &CellComplex,
    values: &VertexValues,
) -> Result<GradientField, MorseError> {
    lower_star_field(k, values, &[], &[])
}

/// Lower-star field on `k` that extends the lower-star field of the
/// restricted data on the boundary: each lower star first takes over the
/// boundary pairing, then pairs the remaining cells. A boundary-critical cell
/// is paired into the interior only if no V-path leads from the interior
/// cell back to it; otherwise it stays critical.
pub fn extend_with_boundary(
    k: &CellComplex,
    values: &VertexValues,
) -> Result<(GradientField, BoundaryField), MorseError> {
    let boundary = boundary_subcomplex(k)?;
    let field_b = if boundary.is_empty() {
        GradientField::all_critical(0)
    } else {
        lower_star_field(
            &boundary.complex,
            &values.restrict(&boundary.to_parent),
            &[],
            &[],
        )?
    };
    let seeds: Vec<(CellId, CellId)> = field_b
        .pairs()
        .map(|(t, h)| (boundary.parent(t), boundary.parent(h)))
        .collect();
    let mut on_boundary = vec![false; k.len()];
    for &c in &boundary.to_parent {
        on_boundary[c.index()] = true;
    }
    let v = lower_star_field(k, values, &seeds, &on_boundary)?;
    Ok((
        v,
        BoundaryField {
            boundary,
            field: field_b,
        },
    ))
}

fn lower_star_field(
    k: &CellComplex,
    values: &VertexValues,
    seeds: &[(CellId, CellId)],
    on_boundary: &[bool],
) -> Result<GradientField, MorseError> {
    let m = k.len();
    let vertices: Vec<CellId> = k.cells_of_dim(0).collect();
    let mut ranked = Vec::with_capacity(vertices.len());
    for &v in &vertices {
        let x = values.get(v)?;
        if x.is_nan() {
            return Err(MorseError::MissingValue { vertex: v });
        }
        ranked.push((x, v));
    }
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut rank = vec![0u32; m];
    for (r, &(_, v)) in ranked.iter().enumerate() {
        rank[v.index()] = r as u32;
    }

    // Descending rank vector of every cell; its head is the owning vertex.
    let verts = k.vertex_sets();
    let keys: Vec<Vec<u32>> = verts
        .iter()
        .map(|vs| {
            let mut key: Vec<u32> = vs.iter().map(|v| rank[v.index()]).collect();
            key.sort_unstable_by(|a, b| b.cmp(a));
            key
        })
        .collect();
    let mut order: Vec<CellId> = k.cells().collect();
    order.sort_by(|&a, &b| keys[a.index()].cmp(&keys[b.index()]).then(a.cmp(&b)));
    let mut position = vec![0u32; m];
    for (i, &c) in order.iter().enumerate() {
        position[c.index()] = i as u32;
    }
    let owner_rank = |c: CellId| keys[c.index()].first().copied();

    let mut field = GradientField::all_critical(m);
    let mut classified = vec![false; m];
    for &(t, h) in seeds {
        field.set_pair(t, h);
        classified[t.index()] = true;
        classified[h.index()] = true;
    }

    // Cells ordered by key are grouped by owner: the rank vector starts with
    // the owner's rank.
    let mut start = 0;
    while start < order.len() {
        let Some(r) = owner_rank(order[start]) else {
            start += 1;
            continue;
        };
        let mut end = start;
        while end < order.len() && owner_rank(order[end]) == Some(r) {
            end += 1;
        }
        process_lower_star(
            k,
            &order[start..end],
            &position,
            &mut classified,
            &mut field,
            on_boundary,
        );
        start = end;
    }
    Ok(field)
}

fn process_lower_star(
    k: &CellComplex,
    star: &[CellId],
    position: &[u32],
    classified: &mut [bool],
    field: &mut GradientField,
    on_boundary: &[bool],
) {
    let boundary = |c: CellId| on_boundary.get(c.index()).copied().unwrap_or(false);
    let local: HashMap<CellId, usize> = star.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let in_star = |c: CellId| local.contains_key(&c);
    let unclassified_faces = |c: CellId, classified: &[bool]| -> Vec<CellId> {
        k.faces(c)
            .iter()
            .copied()
            .filter(|&f| in_star(f) && !classified[f.index()])
            .collect()
    };

    let mut pq_zero: BinaryHeap<Reverse<(u32, CellId)>> = BinaryHeap::new();
    let mut pq_one: BinaryHeap<Reverse<(u32, CellId)>> = BinaryHeap::new();
    for &c in star {
        if classified[c.index()] {
            continue;
        }
        match unclassified_faces(c, classified).len() {
            0 => pq_zero.push(Reverse((position[c.index()], c))),
            1 => pq_one.push(Reverse((position[c.index()], c))),
            _ => {}
        }
    }

    let push_ready_cofaces =
        |c: CellId, classified: &[bool], pq_one: &mut BinaryHeap<Reverse<(u32, CellId)>>| {
            for &s in k.cofaces(c) {
                if in_star(s)
                    && !classified[s.index()]
                    && unclassified_faces(s, classified).len() == 1
                {
                    pq_one.push(Reverse((position[s.index()], s)));
                }
            }
        };

    loop {
        while let Some(Reverse((_, alpha))) = pq_one.pop() {
            if classified[alpha.index()] {
                continue;
            }
            let free = unclassified_faces(alpha, classified);
            match free.as_slice() {
                [] => pq_zero.push(Reverse((position[alpha.index()], alpha))),
                [face] => {
                    let face = *face;
                    if boundary(face) && (boundary(alpha) || reaches(k, field, alpha, face)) {
                        // The face keeps its boundary status as a critical cell.
                        classified[face.index()] = true;
                        push_ready_cofaces(face, classified, &mut pq_one);
                        pq_one.push(Reverse((position[alpha.index()], alpha)));
                        continue;
                    }
                    field.set_pair(face, alpha);
                    classified[face.index()] = true;
                    classified[alpha.index()] = true;
                    push_ready_cofaces(alpha, classified, &mut pq_one);
                    push_ready_cofaces(face, classified, &mut pq_one);
                }
                _ => {}
            }
        }
        let mut next_critical = None;
        while let Some(Reverse((_, gamma))) = pq_zero.pop() {
            if !classified[gamma.index()] {
                next_critical = Some(gamma);
                break;
            }
        }
        let Some(gamma) = next_critical else { break };
        classified[gamma.index()] = true;
        push_ready_cofaces(gamma, classified, &mut pq_one);
    }
    debug_assert!(star.iter().all(|c| classified[c.index()]));
}

/// Whether a V-path from the cell `from` reaches `target`.
fn reaches(k: &CellComplex, field: &GradientField, from: CellId, target: CellId) -> bool {
    let mut stack = vec![from];
    let mut seen = HashSet::from([from]);
    while let Some(h) = stack.pop() {
        for &f in k.faces(h) {
            if f == target {
                if h == from {
                    continue;
                }
                return true;
            }
            if let Some(next) = field.head_of(f) {
                if next != h && seen.insert(next) {
                    stack.push(next);
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_cubical, build_simplicial, CellLabel};
    use crate::morse::validate_field;

    fn sid(k: &CellComplex, verts: &[u32]) -> CellId {
        k.cells()
            .find(|&c| k.label(c) == &CellLabel::Simplex(verts.to_vec()))
            .unwrap()
    }

    #[test]
    fn single_edge() {
        let k = build_simplicial(&[vec![0, 1]]).unwrap();
        let vals = VertexValues::from_keys(&k, [(0, 0.0), (1, 1.0)]);
        let v = extend_from_vertex_values(&k, &vals).unwrap();
        assert_eq!(v.critical_cells().collect::<Vec<_>>(), vec![sid(&k, &[0])]);
        assert_eq!(
            v.pairs().collect::<Vec<_>>(),
            vec![(sid(&k, &[1]), sid(&k, &[0, 1]))]
        );
    }

    #[test]
    fn constant_circle_needs_two_critical_cells() {
        let k = build_simplicial(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let vals = VertexValues::from_keys(&k, [(0, 1.0), (1, 1.0), (2, 1.0)]);
        let v = extend_from_vertex_values(&k, &vals).unwrap();
        assert!(validate_field(&k, &v).is_ok());
        assert_eq!(v.critical_counts(&k), vec![1, 1]);
    }

    #[test]
    fn missing_value_is_reported() {
        let k = build_simplicial(&[vec![0, 1]]).unwrap();
        let vals = VertexValues::from_keys(&k, [(0, 0.0)]);
        assert_eq!(
            extend_from_vertex_values(&k, &vals),
            Err(MorseError::MissingValue {
                vertex: sid(&k, &[1])
            })
        );
    }

    #[test]
    fn grid_minimum_is_critical() {
        let g = build_cubical(&[4, 4]).unwrap();
        let raster: Vec<f64> = (0..25)
            .map(|i| {
                let (x, y) = ((i / 5) as f64 - 2.0, (i % 5) as f64 - 2.0);
                x * x + y * y
            })
            .collect();
        let vals = VertexValues::from_vertex_order(&g, &raster);
        let v = extend_from_vertex_values(&g, &vals).unwrap();
        assert!(validate_field(&g, &v).is_ok());
        assert!(v.is_critical(CellId(12)));
        assert_eq!(v.critical_counts(&g), vec![1, 0, 0]);
    }

    #[test]
    fn boundary_extension_contains_boundary_pairs() {
        let g = build_cubical(&[3, 3]).unwrap();
        let raster: Vec<f64> = (0..16).map(|i| ((i * 7) % 16) as f64).collect();
        let vals = VertexValues::from_vertex_order(&g, &raster);
        let (v, b) = extend_with_boundary(&g, &vals).unwrap();
        assert!(validate_field(&g, &v).is_ok());
        for (t, h) in b.field.pairs() {
            assert_eq!(v.head_of(b.boundary.parent(t)), Some(b.boundary.parent(h)));
        }
    }
}
