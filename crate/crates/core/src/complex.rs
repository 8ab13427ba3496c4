//! Dual complexes of simple normal crossing presentations.
//!
//! The input is purely combinatorial: a set of components indexed by `I`
//! and, for each subset `J` of `I`, the number of connected components of
//! the open stratum cut out by exactly the components in `J`. From this we
//! build the dual complex (a regular Delta-complex with one vertex per
//! component and one `d`-cell per connected component of a depth-`(d+1)`
//! stratum), compute its rational cohomology ranks exactly, and form cones.

use crate::linalg::{rank_rational, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("stratum {0:?} mentions unknown component {1:?}")]
    UnknownComponent(Vec<String>, String),
    #[error("stratum subset is empty")]
    EmptyStratum,
    #[error("duplicate stratum subset {0:?}")]
    DuplicateStratum(Vec<String>),
    #[error("stratum {0:?} has size {1} exceeding the ambient dimension {2}")]
    StratumTooDeep(Vec<String>, usize, usize),
    #[error("stratum {0:?} has count 0; omit it instead")]
    ZeroCount(Vec<String>),
    #[error(
        "inconsistent stratification: {child:?} is listed but its subset {missing:?} is not"
    )]
    NotClosedUnderSubsets {
        child: Vec<String>,
        missing: Vec<String>,
    },
    #[error("component stratum {0:?} must have exactly one connected component, got {1}")]
    DisconnectedComponent(Vec<String>, usize),
}

/// A stratum record: the subset `J` of component IDs and the number of
/// connected components of the corresponding open stratum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    #[serde(rename = "J")]
    pub subset: Vec<String>,
    pub count: usize,
}

/// Combinatorial presentation of a simple normal crossing divisor: the
/// index set of components and the stratum table. Connectivity counts are
/// input data, not derived from geometry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SncPresentation {
    pub n: usize,
    pub components: Vec<String>,
    pub strata: Vec<Stratum>,
}

impl SncPresentation {
    pub fn new(n: usize, components: Vec<String>, strata: Vec<Stratum>) -> Self {
        SncPresentation {
            n,
            components,
            strata,
        }
    }

    /// Stratum table keyed by sorted subset. Singleton strata may be left
    /// implicit in the input (each component is connected, count 1); they
    /// are inserted here so that closure under subsets can be checked
    /// literally.
    fn normalized(&self) -> Result<BTreeMap<Vec<String>, usize>, ComplexError> {
        let mut table: BTreeMap<Vec<String>, usize> = BTreeMap::new();
        for s in &self.strata {
            if s.subset.is_empty() {
                return Err(ComplexError::EmptyStratum);
            }
            for c in &s.subset {
                if !self.components.contains(c) {
                    return Err(ComplexError::UnknownComponent(s.subset.clone(), c.clone()));
                }
            }
            let mut key = s.subset.clone();
            key.sort();
            key.dedup();
            if key.len() != s.subset.len() {
                return Err(ComplexError::DuplicateStratum(s.subset.clone()));
            }
            if s.count == 0 {
                return Err(ComplexError::ZeroCount(s.subset.clone()));
            }
            if key.len() == 1 && s.count != 1 {
                return Err(ComplexError::DisconnectedComponent(key, s.count));
            }
            if key.len() > self.n {
                return Err(ComplexError::StratumTooDeep(key, s.subset.len(), self.n));
            }
            if table.insert(key.clone(), s.count).is_some() {
                return Err(ComplexError::DuplicateStratum(key));
            }
        }
        for c in &self.components {
            table.entry(vec![c.clone()]).or_insert(1);
        }
        Ok(table)
    }

    pub fn validate(&self) -> Result<(), ComplexError> {
        let table = self.normalized()?;
        for (subset, _) in table.iter() {
            if subset.len() < 2 {
                continue;
            }
            for skip in 0..subset.len() {
                let mut sub = subset.clone();
                sub.remove(skip);
                if !table.contains_key(&sub) {
                    return Err(ComplexError::NotClosedUnderSubsets {
                        child: subset.clone(),
                        missing: sub,
                    });
                }
            }
        }
        Ok(())
    }

    /// True when some stratum of full depth `n` is present, i.e. the dual
    /// complex has cells of top dimension `n - 1`.
    pub fn has_maximal_intersection(&self) -> bool {
        self.strata
            .iter()
            .any(|s| s.subset.len() == self.n && s.count >= 1)
    }
}

/// Identifier of a cell: dimension, sorted vertex subset, copy index within
/// its stratum. The canonical ordering of cells is (dim, subset, copy).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellId {
    pub dim: usize,
    pub vertices: Vec<String>,
    pub copy: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub id: CellId,
    /// Facets in face order: entry `i` is the cell spanned by the vertex
    /// subset with the `i`-th vertex removed. Empty for vertices.
    pub faces: Vec<CellId>,
}

/// Regular Delta-complex with dimension-graded cells.
///
/// When a stratum has several connected components the presentation does
/// not record which component of a deeper stratum limits onto which
/// component of a shallower one; copy `s` of a cell attaches to copy
/// `min(s, count - 1)` of each facet subset. For the connected-strata
/// presentations arising in practice every count is 1 and the convention
/// is invisible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualComplex {
    /// cells[d] = cells of dimension d, canonically ordered.
    pub cells: Vec<Vec<Cell>>,
}

impl DualComplex {
    pub fn dimension(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    pub fn cell_count(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, |v| v.len())
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(|v| v.len()).sum()
    }

    /// Alternating sum of cell counts (the Euler characteristic of the
    /// underlying compact complex).
    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(d, v)| {
                let sign = if d % 2 == 0 { 1 } else { -1 };
                sign * v.len() as i64
            })
            .sum()
    }

    fn index_of(&self, id: &CellId) -> Option<usize> {
        self.cells
            .get(id.dim)?
            .binary_search_by(|c| c.id.cmp(id))
            .ok()
    }

    /// Signed coboundary matrix from dimension `d` to `d + 1` cochains:
    /// one row per (d+1)-cell, one column per d-cell, entry `(-1)^i` for
    /// the `i`-th face.
    pub fn coboundary(&self, d: usize) -> Vec<Vec<Rat>> {
        let ncols = self.cell_count(d);
        let Some(top) = self.cells.get(d + 1) else {
            return Vec::new();
        };
        let mut rows = Vec::with_capacity(top.len());
        for cell in top {
            let mut row = vec![Rat::zero(); ncols];
            for (i, face) in cell.faces.iter().enumerate() {
                let col = self
                    .index_of(face)
                    .expect("face of a stored cell is stored");
                let sign = if i % 2 == 0 { 1 } else { -1 };
                row[col] += Rat::from_integer(sign);
            }
            rows.push(row);
        }
        rows
    }

    /// Rank of the k-th simplicial cohomology over Q, computed exactly.
    /// Dimensions beyond the complex return 0.
    pub fn betti(&self, k: usize) -> usize {
        let n_k = self.cell_count(k);
        if n_k == 0 {
            return 0;
        }
        let rank_out = rank_rational(&self.coboundary(k));
        let rank_in = if k == 0 {
            0
        } else {
            rank_rational(&self.coboundary(k - 1))
        };
        n_k - rank_out - rank_in
    }

    /// Betti numbers b_0 .. b_dim as a table.
    pub fn betti_table(&self) -> Vec<usize> {
        (0..=self.dimension()).map(|k| self.betti(k)).collect()
    }

    /// View the compact complex as a stratified space (d-stratum = union of
    /// open d-cells, one label per cell).
    pub fn stratified(&self) -> StratifiedSpace {
        let mut strata = Vec::new();
        let mut order = Vec::new();
        let mut ids: BTreeMap<CellId, usize> = BTreeMap::new();
        for layer in &self.cells {
            for cell in layer {
                let idx = strata.len();
                ids.insert(cell.id.clone(), idx);
                strata.push(StratumInfo {
                    dim: cell.id.dim,
                    label: label_of(&cell.id),
                });
            }
        }
        for layer in &self.cells {
            for cell in layer {
                let me = ids[&cell.id];
                for face in &cell.faces {
                    order.push((ids[face], me));
                }
            }
        }
        StratifiedSpace {
            strata,
            closure_order: order,
            euler_characteristic: self.euler_characteristic(),
        }
    }
}

fn label_of(id: &CellId) -> String {
    format!("{}#{}", id.vertices.join(","), id.copy)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumInfo {
    pub dim: usize,
    pub label: String,
}

/// A stratified space: strata with dimensions and the closure partial
/// order (pairs `(a, b)` meaning stratum `a` lies in the closure of `b`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratifiedSpace {
    pub strata: Vec<StratumInfo>,
    pub closure_order: Vec<(usize, usize)>,
    /// Euler characteristic of the homotopy type. For a compact complex
    /// this is the alternating cell count; cone constructions record the
    /// value for the contractible cone.
    pub euler_characteristic: i64,
}

impl StratifiedSpace {
    pub fn stratum_count(&self) -> usize {
        self.strata.len()
    }

    /// Dimensions weakly increase along the closure order.
    pub fn check_dimension_monotone(&self) -> bool {
        self.closure_order
            .iter()
            .all(|&(a, b)| self.strata[a].dim <= self.strata[b].dim)
    }
}

/// Build the dual complex of a presentation. Cells are ordered by
/// (dimension, sorted vertex subset, copy index), so identical
/// presentations produce identical complexes.
pub fn build_dual_complex(p: &SncPresentation) -> Result<DualComplex, ComplexError> {
    p.validate()?;
    let table = p.normalized()?;
    let max_depth = table.keys().map(|k| k.len()).max().unwrap_or(0);
    let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); max_depth];
    for (subset, &count) in table.iter() {
        let dim = subset.len() - 1;
        for copy in 0..count {
            let id = CellId {
                dim,
                vertices: subset.clone(),
                copy,
            };
            let mut faces = Vec::new();
            if dim > 0 {
                for skip in 0..subset.len() {
                    let mut sub = subset.clone();
                    sub.remove(skip);
                    let face_count = table[&sub];
                    faces.push(CellId {
                        dim: dim - 1,
                        vertices: sub,
                        copy: copy.min(face_count - 1),
                    });
                }
            }
            cells[dim].push(Cell { id, faces });
        }
    }
    for layer in &mut cells {
        layer.sort_by(|a, b| a.id.cmp(&b.id));
    }
    Ok(DualComplex { cells })
}

/// Cone over a stratified view of a complex: one extra point stratum below
/// everything, and each d-cell contributes a (d+1)-dimensional stratum
/// (its open cone). Cones deformation retract to the cone point, so the
/// recorded Euler characteristic is 1.
pub fn cone(d: &DualComplex) -> StratifiedSpace {
    let base = d.stratified();
    let mut strata = vec![StratumInfo {
        dim: 0,
        label: "cone point".to_string(),
    }];
    for s in &base.strata {
        strata.push(StratumInfo {
            dim: s.dim + 1,
            label: format!("cone({})", s.label),
        });
    }
    let mut order: Vec<(usize, usize)> = (1..strata.len()).map(|i| (0, i)).collect();
    for &(a, b) in &base.closure_order {
        order.push((a + 1, b + 1));
    }
    StratifiedSpace {
        strata,
        closure_order: order,
        euler_characteristic: 1,
    }
}

/// True iff the presentation has a zero-dimensional stratum (a listed
/// subset of full size `n`).
pub fn check_maximal_intersection(p: &SncPresentation) -> bool {
    p.has_maximal_intersection()
}

/// Presentation with `k` components in which every pair meets in one
/// point-free double curve and nothing deeper: dual complex = complete
/// graph on `k` vertices.
pub fn complete_graph_presentation(k: usize, n: usize) -> SncPresentation {
    let components: Vec<String> = (1..=k).map(|i| format!("Y{i}")).collect();
    let mut strata: Vec<Stratum> = components
        .iter()
        .map(|c| Stratum {
            subset: vec![c.clone()],
            count: 1,
        })
        .collect();
    for i in 0..k {
        for j in i + 1..k {
            strata.push(Stratum {
                subset: vec![components[i].clone(), components[j].clone()],
                count: 1,
            });
        }
    }
    SncPresentation::new(n, components, strata)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent rank oracle: fraction-free Bareiss elimination over
    /// i128, structurally unrelated to the rational elimination used by
    /// `betti`.
    fn rank_bareiss(rows: &[Vec<Rat>]) -> usize {
        let mut m: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|q| {
                        assert_eq!(*q.denom(), 1);
                        *q.numer() as i128
                    })
                    .collect()
            })
            .collect();
        let nrows = m.len();
        if nrows == 0 {
            return 0;
        }
        let ncols = m[0].len();
        let mut rank = 0;
        let mut row = 0;
        let mut prev = 1i128;
        for col in 0..ncols {
            let Some(p) = (row..nrows).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(row, p);
            for r in row + 1..nrows {
                for c in col + 1..ncols {
                    m[r][c] = (m[r][c] * m[row][col] - m[r][col] * m[row][c]) / prev;
                }
                m[r][col] = 0;
            }
            prev = m[row][col];
            rank += 1;
            row += 1;
            if row == nrows {
                break;
            }
        }
        rank
    }

    fn betti_oracle(d: &DualComplex, k: usize) -> usize {
        let n_k = d.cell_count(k);
        if n_k == 0 {
            return 0;
        }
        let rank_out = rank_bareiss(&d.coboundary(k));
        let rank_in = if k == 0 {
            0
        } else {
            rank_bareiss(&d.coboundary(k - 1))
        };
        n_k - rank_out - rank_in
    }

    fn cycle_presentation(k: usize) -> SncPresentation {
        let components: Vec<String> = (1..=k).map(|i| format!("Y{i}")).collect();
        let mut strata = Vec::new();
        for i in 0..k {
            strata.push(Stratum {
                subset: vec![components[i].clone(), components[(i + 1) % k].clone()],
                count: 1,
            });
        }
        SncPresentation::new(2, components, strata)
    }

    #[test]
    fn k4_is_complete_graph() {
        let p = complete_graph_presentation(4, 3);
        let d = build_dual_complex(&p).unwrap();
        assert_eq!(d.cell_count(0), 4);
        assert_eq!(d.cell_count(1), 6);
        assert_eq!(d.cell_count(2), 0);
    }

    #[test]
    fn k4_betti_matches_oracle() {
        let d = build_dual_complex(&complete_graph_presentation(4, 3)).unwrap();
        // frozen from the Bareiss oracle: b0 = 1, b1 = 3
        assert_eq!(betti_oracle(&d, 0), 1);
        assert_eq!(betti_oracle(&d, 1), 3);
        assert_eq!(d.betti(0), 1);
        assert_eq!(d.betti(1), 3);
        assert_eq!(d.betti(2), 0);
    }

    #[test]
    fn three_cycle_betti() {
        let d = build_dual_complex(&cycle_presentation(3)).unwrap();
        assert_eq!(d.cell_count(0), 3);
        assert_eq!(d.cell_count(1), 3);
        assert_eq!(betti_oracle(&d, 1), 1);
        assert_eq!(d.betti(1), 1);
    }

    #[test]
    fn single_vertex() {
        let p = SncPresentation::new(2, vec!["Y1".into()], vec![]);
        let d = build_dual_complex(&p).unwrap();
        assert_eq!(d.cell_count(0), 1);
        assert_eq!(d.betti(0), 1);
        assert_eq!(d.betti(1), 0);
    }

    #[test]
    fn euler_characteristic_equals_alternating_betti_sum() {
        for d in [
            build_dual_complex(&complete_graph_presentation(4, 3)).unwrap(),
            build_dual_complex(&cycle_presentation(3)).unwrap(),
            build_dual_complex(&cycle_presentation(5)).unwrap(),
            build_dual_complex(&complete_graph_presentation(3, 3)).unwrap(),
        ] {
            let chi: i64 = d
                .betti_table()
                .iter()
                .enumerate()
                .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
                .sum();
            assert_eq!(chi, d.euler_characteristic());
        }
    }

    #[test]
    fn closure_violation_rejected() {
        let p = SncPresentation::new(
            3,
            vec!["A".into(), "B".into(), "C".into()],
            vec![Stratum {
                subset: vec!["A".into(), "B".into(), "C".into()],
                count: 1,
            }],
        );
        assert!(matches!(
            build_dual_complex(&p),
            Err(ComplexError::NotClosedUnderSubsets { .. })
        ));
    }

    #[test]
    fn depth_beyond_ambient_dimension_rejected() {
        let p = SncPresentation::new(
            1,
            vec!["A".into(), "B".into()],
            vec![Stratum {
                subset: vec!["A".into(), "B".into()],
                count: 1,
            }],
        );
        assert!(matches!(
            build_dual_complex(&p),
            Err(ComplexError::StratumTooDeep(..))
        ));
    }

    #[test]
    fn cone_of_k4() {
        let d = build_dual_complex(&complete_graph_presentation(4, 3)).unwrap();
        let c = cone(&d);
        assert_eq!(c.stratum_count(), 1 + 4 + 6);
        assert_eq!(c.euler_characteristic, 1);
        assert_eq!(
            c.strata.iter().filter(|s| s.dim == 1).count(),
            4,
            "one 1-dim stratum per vertex"
        );
        assert_eq!(c.strata.iter().filter(|s| s.dim == 2).count(), 6);
        assert!(c.check_dimension_monotone());
        assert_eq!(c.stratum_count(), d.stratified().stratum_count() + 1);
    }

    #[test]
    fn cone_of_point_is_half_line() {
        let p = SncPresentation::new(2, vec!["Y1".into()], vec![]);
        let d = build_dual_complex(&p).unwrap();
        let c = cone(&d);
        assert_eq!(c.stratum_count(), 2);
        assert_eq!(c.strata[1].dim, 1);
        assert_eq!(c.euler_characteristic, 1);
    }

    #[test]
    fn maximal_intersection() {
        assert!(check_maximal_intersection(&cycle_presentation(3)));
        // two disjoint components in ambient dimension 2
        let p = SncPresentation::new(2, vec!["A".into(), "B".into()], vec![]);
        assert!(!check_maximal_intersection(&p));
        // K4 with no triple points in ambient dimension 3 is not maximal
        assert!(!check_maximal_intersection(&complete_graph_presentation(
            4, 3
        )));
    }

    #[test]
    fn determinism_of_build() {
        let p = complete_graph_presentation(4, 3);
        let a = build_dual_complex(&p).unwrap();
        let b = build_dual_complex(&p).unwrap();
        assert_eq!(a, b);
        let ja = serde_json::to_string(&a).unwrap();
        let jb = serde_json::to_string(&b).unwrap();
        assert_eq!(ja, jb);
    }

    #[test]
    fn multi_component_strata_cell_counts() {
        // two components meeting in two disjoint curves: a doubled edge
        let p = SncPresentation::new(
            2,
            vec!["A".into(), "B".into()],
            vec![Stratum {
                subset: vec!["A".into(), "B".into()],
                count: 2,
            }],
        );
        let d = build_dual_complex(&p).unwrap();
        assert_eq!(d.cell_count(0), 2);
        assert_eq!(d.cell_count(1), 2);
        assert_eq!(d.betti(1), 1, "doubled edge is a circle");
    }
}
