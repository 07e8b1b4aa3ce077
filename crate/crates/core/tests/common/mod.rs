//! Instance generators and independent oracles shared by the integration
//! tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use morse_regions::complex::{build_cubical, build_simplicial, CellComplex, CellId, CellLabel};
use morse_regions::morse::{
    extend_from_vertex_values, extend_with_boundary, BoundaryField, GradientField, VertexValues,
};

pub fn sid(k: &CellComplex, verts: &[u32]) -> CellId {
    k.cells()
        .find(|&c| k.label(c) == &CellLabel::Simplex(verts.to_vec()))
        .unwrap_or_else(|| panic!("no simplex {verts:?}"))
}

fn sorted3(a: u32, b: u32, c: u32) -> Vec<u32> {
    let mut t = vec![a, b, c];
    t.sort_unstable();
    t
}

/// Triangulated 2-sphere: tetrahedron boundary refined by random stellar
/// subdivisions and edge flips.
pub fn random_sphere<R: Rng>(rng: &mut R, steps: usize) -> Vec<Vec<u32>> {
    let mut tris: Vec<Vec<u32>> = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
    let mut next = 4u32;
    for _ in 0..steps {
        let i = rng.gen_range(0..tris.len());
        if rng.gen_bool(0.5) {
            let t = tris.swap_remove(i);
            let w = next;
            next += 1;
            tris.push(sorted3(t[0], t[1], w));
            tris.push(sorted3(t[0], t[2], w));
            tris.push(sorted3(t[1], t[2], w));
        } else {
            let t = tris[i].clone();
            let e = rng.gen_range(0..3);
            let (a, b, c) = (t[e], t[(e + 1) % 3], t[(e + 2) % 3]);
            let j = (0..tris.len())
                .find(|&j| j != i && tris[j].contains(&a) && tris[j].contains(&b))
                .unwrap();
            let d = *tris[j].iter().find(|&&x| x != a && x != b).unwrap();
            let has_cd = tris.iter().any(|t| t.contains(&c) && t.contains(&d));
            if has_cd {
                continue;
            }
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            tris.swap_remove(hi);
            tris.swap_remove(lo);
            tris.push(sorted3(a, c, d));
            tris.push(sorted3(b, c, d));
        }
    }
    tris
}

/// Triangulated torus on an `a` by `b` vertex grid; needs `a, b >= 3`.
pub fn torus(a: u32, b: u32) -> Vec<Vec<u32>> {
    let v = |i: u32, j: u32| (i % a) * b + (j % b);
    let mut tris = Vec::new();
    for i in 0..a {
        for j in 0..b {
            tris.push(sorted3(v(i, j), v(i + 1, j), v(i + 1, j + 1)));
            tris.push(sorted3(v(i, j), v(i, j + 1), v(i + 1, j + 1)));
        }
    }
    tris
}

/// Values by vertex key; coarse values produce ties.
pub fn random_values<R: Rng>(rng: &mut R, keys: &[u32], ties: bool) -> Vec<(u32, f64)> {
    keys.iter()
        .map(|&k| {
            let x = if ties {
                rng.gen_range(0..4) as f64
            } else {
                rng.gen::<f64>()
            };
            (k, x)
        })
        .collect()
}

pub struct Instance {
    pub name: String,
    pub complex: CellComplex,
    pub values: VertexValues,
    pub field: GradientField,
    pub boundary: Option<BoundaryField>,
}

fn vertex_keys(k: &CellComplex) -> Vec<u32> {
    k.cells_of_dim(0).filter_map(|c| k.vertex_key(c)).collect()
}

pub fn closed_instance<R: Rng>(rng: &mut R, name: String, facets: &[Vec<u32>]) -> Instance {
    let complex = build_simplicial(facets).unwrap();
    let ties = rng.gen_bool(0.3);
    let values =
        VertexValues::from_keys(&complex, random_values(rng, &vertex_keys(&complex), ties));
    let field = extend_from_vertex_values(&complex, &values).unwrap();
    Instance {
        name,
        complex,
        values,
        field,
        boundary: None,
    }
}

pub fn grid_instance<R: Rng>(rng: &mut R, extents: &[usize]) -> Instance {
    let complex = build_cubical(extents).unwrap();
    let nv: usize = extents.iter().map(|e| e + 1).product();
    let raster: Vec<f64> = if rng.gen_bool(0.3) {
        (0..nv).map(|_| rng.gen_range(0..4) as f64).collect()
    } else {
        (0..nv).map(|_| rng.gen::<f64>()).collect()
    };
    let values = VertexValues::from_vertex_order(&complex, &raster);
    let (field, bf) = extend_with_boundary(&complex, &values).unwrap();
    Instance {
        name: format!("grid {extents:?}"),
        complex,
        values,
        field,
        boundary: Some(bf),
    }
}

/// The randomized corpus: spheres, tori and cubical grids up to 10^3.
pub fn corpus<R: Rng>(rng: &mut R) -> Vec<Instance> {
    let mut out = Vec::new();
    for i in 0..40 {
        let steps = rng.gen_range(0..120);
        let f = random_sphere(rng, steps);
        out.push(closed_instance(
            rng,
            format!("sphere #{i} ({} triangles)", f.len()),
            &f,
        ));
    }
    for i in 0..30 {
        let (a, b) = (rng.gen_range(3..9), rng.gen_range(3..9));
        out.push(closed_instance(
            rng,
            format!("torus #{i} {a}x{b}"),
            &torus(a, b),
        ));
    }
    out.push(grid_instance(rng, &[10, 10, 10]));
    for _ in 0..34 {
        let d = rng.gen_range(1..=3);
        let extents: Vec<usize> = (0..d).map(|_| rng.gen_range(1..=10)).collect();
        out.push(grid_instance(rng, &extents));
    }
    out.shuffle(rng);
    out
}

/// Order-theoretic collapse oracle. Repeatedly removes cells other than
/// `keep` whose strict down-set within the remaining cells has a greatest
/// element, or whose strict up-set has a least element. Returns the cells
/// left over.
pub fn collapse(k: &CellComplex, cells: &BTreeSet<CellId>, keep: CellId) -> BTreeSet<CellId> {
    let mut below: BTreeMap<CellId, BTreeSet<CellId>> = BTreeMap::new();
    let mut above: BTreeMap<CellId, BTreeSet<CellId>> =
        cells.iter().map(|&c| (c, BTreeSet::new())).collect();
    for &c in cells {
        let mut d = k.closure([c]);
        d.remove(&c);
        d.retain(|x| cells.contains(x));
        for &x in &d {
            above.get_mut(&x).unwrap().insert(c);
        }
        below.insert(c, d);
    }
    let mut alive = cells.clone();
    let is_beat =
        |x: CellId, alive: &BTreeSet<CellId>, rel: &BTreeMap<CellId, BTreeSet<CellId>>| {
            let mine: Vec<CellId> = rel[&x]
                .iter()
                .copied()
                .filter(|y| alive.contains(y))
                .collect();
            mine.iter()
                .any(|y| rel[y].iter().filter(|z| alive.contains(z)).count() + 1 == mine.len())
        };
    let mut work: Vec<CellId> = cells.iter().rev().copied().collect();
    let mut queued: BTreeSet<CellId> = cells.clone();
    while let Some(x) = work.pop() {
        queued.remove(&x);
        if x == keep || !alive.contains(&x) {
            continue;
        }
        if is_beat(x, &alive, &below) || is_beat(x, &alive, &above) {
            alive.remove(&x);
            for &y in below[&x].iter().chain(&above[&x]) {
                if alive.contains(&y) && queued.insert(y) {
                    work.push(y);
                }
            }
        }
    }
    alive
}

/// Single-source shortest costs by Bellman-Ford over an explicit edge list.
pub fn bellman_ford(
    nodes: &BTreeSet<CellId>,
    edges: &[(CellId, CellId, f64)],
    source: CellId,
) -> BTreeMap<CellId, f64> {
    let mut dist: BTreeMap<CellId, f64> = BTreeMap::new();
    dist.insert(source, 0.0);
    for _ in 0..nodes.len() {
        let mut changed = false;
        for &(a, b, w) in edges {
            if let Some(&da) = dist.get(&a) {
                if dist.get(&b).is_none_or(|&db| da + w < db - 1e-12) {
                    dist.insert(b, da + w);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}
