//! Discrete Morse functions and discrete gradient vector fields.

mod cancel;
mod extend;
mod field;

pub use cancel::{cancel, count_paths_between, simplify, SimplifyOutcome};
pub use extend::{extend_from_vertex_values, extend_with_boundary, BoundaryField, VertexValues};
pub use field::{
    enumerate_vpaths, validate_field, CellStatus, FieldJson, GradientField, VPath, VPathSet,
    ValidationReport, Violation,
};

use thiserror::Error;

use crate::complex::{CellComplex, CellId, ComplexError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MorseError {
    #[error("cell {cell} is not a cell of the complex")]
    UnknownCell { cell: CellId },
    #[error("cell {cell} is used by more than one pair or listed twice")]
    Overlap { cell: CellId },
    #[error("cell {cell} is neither paired nor listed as critical")]
    Unassigned { cell: CellId },
    #[error("not a discrete Morse function at {cell}: a = {a}, b = {b}")]
    NotMorse { cell: CellId, a: usize, b: usize },
    #[error("cell {cell} has a = b = 1, which no discrete Morse function allows")]
    Contradiction { cell: CellId },
    #[error("pairing at {cell} is not mutual")]
    Inconsistent { cell: CellId },
    #[error("vertex {vertex} has no value")]
    MissingValue { vertex: CellId },
    #[error("{0} values for {1} cells")]
    LengthMismatch(usize, usize),
    #[error("cell {cell} is not critical")]
    NotCritical { cell: CellId },
    #[error("cells {upper} and {lower} do not have adjacent dimensions")]
    IndexMismatch { upper: CellId, lower: CellId },
    #[error("no V-path joins {upper} to {lower}")]
    NotCancellable { upper: CellId, lower: CellId },
    #[error("{paths} V-paths join {upper} to {lower}")]
    Ambiguous {
        upper: CellId,
        lower: CellId,
        paths: u64,
    },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A real value per cell.
#[derive(Clone, Debug, PartialEq)]
pub struct MorseFunction {
    values: Vec<f64>,
}

impl MorseFunction {
    pub fn new(k: &CellComplex, values: Vec<f64>) -> Result<Self, MorseError> {
        if values.len() != k.len() {
            return Err(MorseError::LengthMismatch(values.len(), k.len()));
        }
        Ok(MorseFunction { values })
    }

    /// `f(c) = dim(c)`: every cell critical.
    pub fn from_dimension(k: &CellComplex) -> Self {
        MorseFunction {
            values: k.cells().map(|c| k.dim(c) as f64).collect(),
        }
    }

    /// Extends vertex data to cells by taking the maximum over vertices, the
    /// value attached to lower-star cells.
    pub fn from_vertex_max(k: &CellComplex, values: &VertexValues) -> Result<Self, MorseError> {
        let verts = k.vertex_sets();
        let mut out = Vec::with_capacity(k.len());
        for vs in &verts {
            let mut best = f64::NEG_INFINITY;
            for &v in vs {
                best = best.max(values.get(v)?);
            }
            out.push(best);
        }
        Ok(MorseFunction { values: out })
    }

    #[inline]
    pub fn value(&self, c: CellId) -> f64 {
        self.values[c.index()]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// The two defining counts of a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AbCounts {
    /// Cofaces with value not above the cell's.
    pub a: usize,
    /// Faces with value not below the cell's.
    pub b: usize,
}

pub fn ab_counts(k: &CellComplex, f: &MorseFunction, tau: CellId) -> AbCounts {
    let ft = f.value(tau);
    AbCounts {
        a: k.cofaces(tau).iter().filter(|&&s| ft >= f.value(s)).count(),
        b: k.faces(tau).iter().filter(|&&n| f.value(n) >= ft).count(),
    }
}

/// Derives the gradient field of a discrete Morse function.
pub fn classify(k: &CellComplex, f: &MorseFunction) -> Result<GradientField, MorseError> {
    if f.values.len() != k.len() {
        return Err(MorseError::LengthMismatch(f.values.len(), k.len()));
    }
    let counts: Vec<AbCounts> = k.cells().map(|c| ab_counts(k, f, c)).collect();
    // a = b = 1 forces a count above 1 elsewhere; report the sharper defect.
    if let Some(c) = k
        .cells()
        .find(|c| counts[c.index()] == AbCounts { a: 1, b: 1 })
    {
        return Err(MorseError::Contradiction { cell: c });
    }
    for c in k.cells() {
        let AbCounts { a, b } = counts[c.index()];
        if a > 1 || b > 1 {
            return Err(MorseError::NotMorse { cell: c, a, b });
        }
    }
    let mut pairs = Vec::new();
    for tau in k.cells() {
        let ft = f.value(tau);
        if counts[tau.index()].a == 1 {
            let sigma = *k.cofaces(tau).iter().find(|&&s| ft >= f.value(s)).unwrap();
            let witness = k
                .faces(sigma)
                .iter()
                .find(|&&n| f.value(n) >= f.value(sigma));
            if counts[sigma.index()].b != 1 || witness != Some(&tau) {
                return Err(MorseError::Inconsistent { cell: tau });
            }
            pairs.push((tau, sigma));
        } else if counts[tau.index()].b == 1 {
            let nu = *k.faces(tau).iter().find(|&&n| f.value(n) >= ft).unwrap();
            if counts[nu.index()].a != 1 {
                return Err(MorseError::Inconsistent { cell: tau });
            }
        }
    }
    GradientField::from_pairs(k.len(), pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{build_cubical, build_simplicial, CellLabel};

    fn sid(k: &CellComplex, verts: &[u32]) -> CellId {
        k.cells()
            .find(|&c| k.label(c) == &CellLabel::Simplex(verts.to_vec()))
            .unwrap()
    }

    #[test]
    fn ab_on_edge() {
        let k = build_simplicial(&[vec![0, 1]]).unwrap();
        let (v0, v1, e) = (sid(&k, &[0]), sid(&k, &[1]), sid(&k, &[0, 1]));
        let mut vals = vec![0.0; 3];
        vals[v0.index()] = 0.0;
        vals[v1.index()] = 1.0;
        vals[e.index()] = 0.5;
        let f = MorseFunction::new(&k, vals).unwrap();
        assert_eq!(ab_counts(&k, &f, e), AbCounts { a: 0, b: 1 });
        let v = classify(&k, &f).unwrap();
        assert_eq!(v.pairs().collect::<Vec<_>>(), vec![(v1, e)]);
        assert_eq!(v.critical_cells().collect::<Vec<_>>(), vec![v0]);
    }

    #[test]
    fn dimension_function_is_all_critical() {
        for k in [
            build_simplicial(&[vec![0, 1, 2], vec![1, 2, 3]]).unwrap(),
            build_cubical(&[2, 3]).unwrap(),
        ] {
            let f = MorseFunction::from_dimension(&k);
            for c in k.cells() {
                assert_eq!(ab_counts(&k, &f, c), AbCounts { a: 0, b: 0 });
            }
            let v = classify(&k, &f).unwrap();
            assert_eq!(v.critical_count(), k.len());
            assert_eq!(v.pair_count(), 0);
        }
    }

    #[test]
    fn flat_triangle_is_not_morse() {
        let k = build_simplicial(&[vec![0, 1, 2]]).unwrap();
        let vals = k
            .cells()
            .map(|c| if k.dim(c) == 2 { 1.0 } else { 0.0 })
            .collect();
        let f = MorseFunction::new(&k, vals).unwrap();
        let e = sid(&k, &[0, 1]);
        assert_eq!(ab_counts(&k, &f, e).b, 2);
        assert!(matches!(classify(&k, &f), Err(MorseError::NotMorse { .. })));
    }

    #[test]
    fn both_counts_one_is_a_contradiction() {
        // Edge {0,1} lies below vertex 1 and above the triangle.
        let k = build_simplicial(&[vec![0, 1, 2]]).unwrap();
        let e = sid(&k, &[0, 1]);
        let t = sid(&k, &[0, 1, 2]);
        let mut vals: Vec<f64> = k.cells().map(|c| 10.0 * k.dim(c) as f64).collect();
        vals[sid(&k, &[1]).index()] = 12.0;
        vals[e.index()] = 11.0;
        vals[t.index()] = 10.5;
        let f = MorseFunction::new(&k, vals).unwrap();
        assert_eq!(ab_counts(&k, &f, e), AbCounts { a: 1, b: 1 });
        assert_eq!(classify(&k, &f), Err(MorseError::Contradiction { cell: e }));
    }
}
