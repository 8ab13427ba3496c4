//! Almost toric base diagrams: rational polytopes decorated with
//! focus-focus nodes, branch cuts and wall matrices.
//!
//! The 2D side ([`two_d`]) carries mutations and shears; the 3D side
//! ([`three_d`]) verifies the wall-crossing and facet structure of a base
//! diagram but does not mutate it. All arithmetic is exact rational.

pub mod three_d;
pub mod two_d;

pub use three_d::{BaseDiagram3D, BranchPlane, Ray3, Wall};
pub use two_d::{
    lattice_stats, AlmostToricDiagram2D, LatticeStats, Node, Side,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AtbdError {
    #[error("polygon needs at least 3 vertices")]
    TooFewVertices,
    #[error("polygon is not simple (edges {0} and {1} intersect)")]
    NotSimple(usize, usize),
    #[error("polygon vertices must be lattice points for this operation")]
    NotLatticePolygon,
    #[error("direction vector must be nonzero")]
    ZeroDirection,
    #[error("direction {0:?} is not primitive")]
    NotPrimitive(Vec<i64>),
    #[error("node {0} lies outside the polygon")]
    NodeOutside(usize),
    #[error("branch cut of node {0} crosses the cut of node {1}")]
    CutsCross(usize, usize),
    #[error("edge label list has length {0}, polygon has {1} edges")]
    LabelCountMismatch(usize, usize),
    #[error("no node with index {0}")]
    NoSuchNode(usize),
    #[error("mutation is degenerate: {0}")]
    DegenerateMutation(String),
    #[error("shear matrix is not unimodular")]
    NotUnimodular,
    #[error("shear matrix must be 2x2, got {0}x{0}")]
    WrongMatrixSize(usize),
    #[error("zero-length edge {0:?}")]
    ZeroEdge(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown facet {0:?}")]
    UnknownFacet(String),
    #[error("facet {0:?} is not planar")]
    FacetNotPlanar(String),
    #[error("facet {0:?} is not a face of the convex hull")]
    NotAFace(String),
    #[error("facet {0:?} has no lattice points in its plane")]
    NotLatticePlanar(String),
    #[error("wall matrix {0:?} is not in GL(3, Z)")]
    WallNotUnimodular(Wall),
    #[error("wall matrix {0:?} does not fix the branch plane")]
    WallMovesBranchPlane(Wall),
    #[error("focus-focus ray {0} misses the excised neighbourhood")]
    RayMissesExcision(usize),
    #[error("facets {0:?} and {1:?} do not share an edge")]
    NoSharedEdge(String, String),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

/// Number of lattice points on the closed segment minus one: the gcd of
/// the coordinate differences. Valid in any dimension.
pub fn affine_length(a: &[i64], b: &[i64]) -> u64 {
    let diff: Vec<i64> = a.iter().zip(b.iter()).map(|(x, y)| y - x).collect();
    crate::linalg::gcd_all(&diff) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_length_examples() {
        assert_eq!(affine_length(&[0, 0, 0], &[0, 0, 3]), 3);
        assert_eq!(affine_length(&[0, 0], &[1, 0]), 1);
        assert_eq!(affine_length(&[0, 0], &[4, 6]), 2);
    }

    #[test]
    fn affine_length_matches_enumeration() {
        // oracle: count lattice points on the segment directly
        let cases = [([0i64, 0], [4i64, 6]), ([1, 1], [7, 4]), ([-2, 3], [4, -3])];
        for (a, b) in cases {
            let mut count = 0u64;
            let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
            let steps = dx.abs().max(dy.abs());
            for t in 0..=steps {
                // lattice points are exactly at parameters t/g with g | t
                if (t * dx) % steps.max(1) == 0 && (t * dy) % steps.max(1) == 0 {
                    count += 1;
                }
            }
            assert_eq!(affine_length(&a, &b), count - 1, "{a:?} {b:?}");
        }
    }
}
