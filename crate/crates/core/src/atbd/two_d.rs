//! Two-dimensional almost toric base diagrams: rational polygons with
//! focus-focus nodes, branch cuts, mutations and integral affine shears.

use super::AtbdError;
use crate::linalg::{primitive, rat_to_f64, IntMat, Rat, Vec2r};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// Side of a branch cut relative to its direction vector (left = the side
/// the direction rotated by +90 degrees points into).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn flipped(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Focus-focus node: position, branch-cut ray (primitive integer
/// direction), monodromy eigen-direction, and which side of the cut a
/// mutation transforms. The printed diagrams leave the transformed side
/// implicit; mutation needs it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub position: Vec2r,
    pub cut_direction: [i64; 2],
    pub eigen_direction: [i64; 2],
    pub sheared_side: Side,
}

impl Node {
    pub fn new(position: Vec2r, cut_direction: [i64; 2], sheared_side: Side) -> Self {
        Node {
            position,
            cut_direction,
            eigen_direction: cut_direction,
            sheared_side,
        }
    }
}

/// Almost toric base diagram in the plane: a simple rational polygon,
/// focus-focus nodes with branch cuts, colour labels on edges for
/// identification bookkeeping, and a flag controlling whether renders mark
/// interior integral points of edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlmostToricDiagram2D {
    pub polygon: Vec<Vec2r>,
    pub nodes: Vec<Node>,
    pub edge_labels: Vec<Option<String>>,
    #[serde(default = "default_true")]
    pub show_lattice_points: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeStats {
    #[serde(with = "crate::linalg::serde_rat")]
    pub area: Rat,
    pub interior_points: u64,
    pub boundary_points: u64,
}

impl LatticeStats {
    /// Pick's identity `area = interior + boundary/2 - 1`, exactly.
    pub fn pick_identity_holds(&self) -> bool {
        let rhs = Rat::from_integer(self.interior_points as i64)
            + Rat::new(self.boundary_points as i64, 2)
            - Rat::from_integer(1);
        self.area == rhs
    }
}

fn shoelace_twice(polygon: &[Vec2r]) -> Rat {
    let n = polygon.len();
    let mut acc = Rat::zero();
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        acc += a.cross(&b);
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PointLocation {
    Inside,
    Boundary,
    Outside,
}

fn on_segment(p: &Vec2r, a: &Vec2r, b: &Vec2r) -> bool {
    let ab = b.sub(a);
    let ap = p.sub(a);
    if ab.cross(&ap) != Rat::zero() {
        return false;
    }
    let dot = ap.dot(&ab);
    dot >= Rat::zero() && dot <= ab.dot(&ab)
}

fn locate_point(p: &Vec2r, polygon: &[Vec2r]) -> PointLocation {
    let n = polygon.len();
    for i in 0..n {
        if on_segment(p, &polygon[i], &polygon[(i + 1) % n]) {
            return PointLocation::Boundary;
        }
    }
    // ray cast towards +x with the half-open rule
    let mut crossings = 0;
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        if (a.y <= p.y) == (b.y <= p.y) {
            continue;
        }
        let t = (p.y - a.y) / (b.y - a.y);
        let x = a.x + t * (b.x - a.x);
        if x > p.x {
            crossings += 1;
        }
    }
    if crossings % 2 == 1 {
        PointLocation::Inside
    } else {
        PointLocation::Outside
    }
}

fn segments_cross(a1: &Vec2r, a2: &Vec2r, b1: &Vec2r, b2: &Vec2r) -> bool {
    let d1 = a2.sub(a1);
    let d2 = b2.sub(b1);
    let denom = d1.cross(&d2);
    let offset = b1.sub(a1);
    if denom.is_zero() {
        if !offset.cross(&d1).is_zero() {
            return false; // parallel, different lines
        }
        // collinear: overlap test on the a-parameter line
        let len2 = d1.dot(&d1);
        if len2.is_zero() {
            return on_segment(a1, b1, b2);
        }
        let t1 = offset.dot(&d1) / len2;
        let t2 = b2.sub(a1).dot(&d1) / len2;
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        return hi >= Rat::zero() && lo <= Rat::from_integer(1);
    }
    let t = offset.cross(&d2) / denom;
    let s = offset.cross(&d1) / denom;
    let zero = Rat::zero();
    let one = Rat::from_integer(1);
    t >= zero && t <= one && s >= zero && s <= one
}

fn check_simple(polygon: &[Vec2r]) -> Result<(), AtbdError> {
    let n = polygon.len();
    if n < 3 {
        return Err(AtbdError::TooFewVertices);
    }
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (a1, a2) = (polygon[i], polygon[(i + 1) % n]);
            let (b1, b2) = (polygon[j], polygon[(j + 1) % n]);
            if adjacent {
                // shared endpoint only; a degenerate overlap means the
                // polygon doubles back
                let shared = if j == i + 1 { a2 } else { a1 };
                let (c, d) = if j == i + 1 { (a1, b2) } else { (b1, a2) };
                let u = c.sub(&shared);
                let v = d.sub(&shared);
                if u.cross(&v).is_zero() && u.dot(&v) > Rat::zero() {
                    return Err(AtbdError::NotSimple(i, j));
                }
                continue;
            }
            if segments_cross(&a1, &a2, &b1, &b2) {
                return Err(AtbdError::NotSimple(i, j));
            }
        }
    }
    Ok(())
}

/// Exit point of the ray `base + t * dir`, `t > 0`, through the polygon
/// boundary (smallest positive parameter).
fn ray_exit(polygon: &[Vec2r], base: &Vec2r, dir: [i64; 2]) -> Option<Vec2r> {
    let d = Vec2r::from_ints(dir[0], dir[1]);
    let n = polygon.len();
    let mut best: Option<Rat> = None;
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        let e = b.sub(&a);
        let denom = d.cross(&e);
        if denom.is_zero() {
            continue;
        }
        let offset = a.sub(base);
        let t = offset.cross(&e) / denom;
        let s = offset.cross(&d) / denom;
        if t > Rat::zero() && s >= Rat::zero() && s <= Rat::from_integer(1) {
            best = Some(match best {
                Some(cur) if cur <= t => cur,
                _ => t,
            });
        }
    }
    best.map(|t| base.add(&d.scale(t)))
}

impl AlmostToricDiagram2D {
    pub fn new(
        polygon: Vec<Vec2r>,
        nodes: Vec<Node>,
        edge_labels: Vec<Option<String>>,
    ) -> Result<Self, AtbdError> {
        let mut labels = if edge_labels.is_empty() {
            vec![None; polygon.len()]
        } else {
            edge_labels
        };
        if labels.len() != polygon.len() {
            return Err(AtbdError::LabelCountMismatch(labels.len(), polygon.len()));
        }
        check_simple(&polygon)?;
        // canonical orientation: counterclockwise
        let mut polygon = polygon;
        if shoelace_twice(&polygon) < Rat::zero() {
            polygon.reverse();
            labels.reverse();
            labels.rotate_left(1);
        }
        let d = AlmostToricDiagram2D {
            polygon,
            nodes,
            edge_labels: labels,
            show_lattice_points: true,
        };
        d.validate_nodes()?;
        Ok(d)
    }

    fn validate_nodes(&self) -> Result<(), AtbdError> {
        for (i, node) in self.nodes.iter().enumerate() {
            for dir in [node.cut_direction, node.eigen_direction] {
                if dir == [0, 0] {
                    return Err(AtbdError::ZeroDirection);
                }
                if primitive(&dir) != dir.to_vec() {
                    return Err(AtbdError::NotPrimitive(dir.to_vec()));
                }
            }
            if locate_point(&node.position, &self.polygon) != PointLocation::Inside {
                return Err(AtbdError::NodeOutside(i));
            }
        }
        // branch cuts must not cross one another
        let cuts: Vec<(Vec2r, Vec2r)> = self
            .nodes
            .iter()
            .map(|nd| {
                let exit = ray_exit(&self.polygon, &nd.position, nd.cut_direction)
                    .unwrap_or(nd.position);
                (nd.position, exit)
            })
            .collect();
        for i in 0..cuts.len() {
            for j in i + 1..cuts.len() {
                if segments_cross(&cuts[i].0, &cuts[i].1, &cuts[j].0, &cuts[j].1) {
                    return Err(AtbdError::CutsCross(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn edge_count(&self) -> usize {
        self.polygon.len()
    }

    /// Where the branch cut of a node meets the boundary.
    pub fn cut_exit(&self, node_index: usize) -> Result<Vec2r, AtbdError> {
        let node = self
            .nodes
            .get(node_index)
            .ok_or(AtbdError::NoSuchNode(node_index))?;
        ray_exit(&self.polygon, &node.position, node.cut_direction)
            .ok_or_else(|| AtbdError::DegenerateMutation("cut does not reach the boundary".into()))
    }

    /// Apply the integral affine map `x -> m x + t`. Positions move by the
    /// affine map, directions by the linear part; labels are preserved.
    pub fn shear(&self, m: &IntMat, t: [i64; 2]) -> Result<Self, AtbdError> {
        if m.dim() != 2 {
            return Err(AtbdError::WrongMatrixSize(m.dim()));
        }
        if !m.is_unimodular() {
            return Err(AtbdError::NotUnimodular);
        }
        let lin = |v: &Vec2r| -> Vec2r {
            Vec2r::new(
                Rat::from_integer(m.get(0, 0)) * v.x + Rat::from_integer(m.get(0, 1)) * v.y,
                Rat::from_integer(m.get(1, 0)) * v.x + Rat::from_integer(m.get(1, 1)) * v.y,
            )
        };
        let tv = Vec2r::from_ints(t[0], t[1]);
        let map_dir = |d: [i64; 2]| -> [i64; 2] {
            let v = m.mul_vec(&d.to_vec()).expect("2x2 times 2-vector");
            [v[0], v[1]]
        };
        let orientation_flips = m.det() < 0;
        let polygon: Vec<Vec2r> = self.polygon.iter().map(|v| lin(v).add(&tv)).collect();
        let nodes: Vec<Node> = self
            .nodes
            .iter()
            .map(|nd| Node {
                position: lin(&nd.position).add(&tv),
                cut_direction: map_dir(nd.cut_direction),
                eigen_direction: map_dir(nd.eigen_direction),
                sheared_side: if orientation_flips {
                    nd.sheared_side.flipped()
                } else {
                    nd.sheared_side
                },
            })
            .collect();
        let mut out = AlmostToricDiagram2D::new(polygon, nodes, self.edge_labels.clone())?;
        out.show_lattice_points = self.show_lattice_points;
        Ok(out)
    }

    /// Mutation at a node: re-cut the polygon along the full line through
    /// the node in the cut direction, keep one side, and apply the integral
    /// shear fixing the cut line to the other. The node stays put, its cut
    /// flips to the opposite ray, and the transformed side (a physical
    /// half-plane) is preserved for the next mutation.
    pub fn mutate(&self, node_index: usize) -> Result<Self, AtbdError> {
        let node = self
            .nodes
            .get(node_index)
            .ok_or(AtbdError::NoSuchNode(node_index))?
            .clone();
        let v = node.cut_direction;
        if primitive(&v) != v.to_vec() {
            return Err(AtbdError::DegenerateMutation(
                "cut direction is not primitive".into(),
            ));
        }
        self.cut_exit(node_index)?;

        // covector vanishing on the cut line, negative on the sheared side
        let left = [-v[1], v[0]];
        let w = match node.sheared_side {
            Side::Left => [-left[0], -left[1]],
            Side::Right => left,
        };
        let wv = Vec2r::from_ints(w[0], w[1]);
        let p = node.position;
        let value = |x: &Vec2r| -> Rat { wv.dot(&x.sub(&p)) };

        // the line must cross the boundary transversally in exactly two
        // places; a vertex touching the line without crossing it pinches
        // the pieces (the degenerate case that is rejected)
        let n = self.polygon.len();
        let vals: Vec<Rat> = self.polygon.iter().map(|x| value(x)).collect();
        for i in 0..n {
            let prev = vals[(i + n - 1) % n];
            let next = vals[(i + 1) % n];
            if vals[i].is_zero() {
                if prev.is_zero() || next.is_zero() {
                    return Err(AtbdError::DegenerateMutation(
                        "an edge lies on the cut line".into(),
                    ));
                }
                if prev.is_positive() == next.is_positive() {
                    return Err(AtbdError::DegenerateMutation(format!(
                        "cut line touches vertex {i} without crossing"
                    )));
                }
            }
        }
        let signs: Vec<i8> = vals
            .iter()
            .filter(|s| !s.is_zero())
            .map(|s| if s.is_positive() { 1 } else { -1 })
            .collect();
        if signs.is_empty() {
            return Err(AtbdError::DegenerateMutation(
                "polygon is contained in the cut line".into(),
            ));
        }
        let transitions = (0..signs.len())
            .filter(|&i| signs[i] != signs[(i + 1) % signs.len()])
            .count();
        if transitions != 2 {
            return Err(AtbdError::DegenerateMutation(format!(
                "cut line crosses the boundary {transitions} times"
            )));
        }

        // insert the crossing points, then apply the piecewise map
        let mut cycle: Vec<Vec2r> = Vec::new();
        for i in 0..n {
            let a = self.polygon[i];
            let b = self.polygon[(i + 1) % n];
            cycle.push(a);
            let (va, vb) = (vals[i], vals[(i + 1) % n]);
            if (va.is_positive() && vb.is_negative()) || (va.is_negative() && vb.is_positive()) {
                let t = va / (va - vb);
                cycle.push(a.add(&b.sub(&a).scale(t)));
            }
        }

        // transvection with eigenvector v: x -> x + w(x - p) * (-v)
        let flip = [-v[0], -v[1]];
        let pl_map = |x: &Vec2r| -> Vec2r {
            let val = value(x);
            if val < Rat::zero() {
                x.add(&Vec2r::from_ints(flip[0], flip[1]).scale(val))
            } else {
                *x
            }
        };
        let mapped: Vec<Vec2r> = cycle.iter().map(|x| pl_map(x)).collect();
        let polygon = drop_collinear(&mapped);

        // linear part of the piecewise map on the sheared side
        let shear_matrix = IntMat::from_rows(&[
            vec![1 + flip[0] * w[0], flip[0] * w[1]],
            vec![flip[1] * w[0], 1 + flip[1] * w[1]],
        ])
        .expect("2x2");
        debug_assert!(shear_matrix.is_unimodular());
        let map_dir = |d: [i64; 2], on_sheared: bool| -> [i64; 2] {
            if on_sheared {
                let out = shear_matrix.mul_vec(&d.to_vec()).expect("2x2");
                [out[0], out[1]]
            } else {
                d
            }
        };

        let mut nodes = Vec::with_capacity(self.nodes.len());
        for (i, nd) in self.nodes.iter().enumerate() {
            if i == node_index {
                nodes.push(Node {
                    position: nd.position,
                    cut_direction: flip,
                    eigen_direction: nd.eigen_direction,
                    sheared_side: nd.sheared_side.flipped(),
                });
            } else {
                let on_sheared = value(&nd.position) < Rat::zero();
                nodes.push(Node {
                    position: pl_map(&nd.position),
                    cut_direction: map_dir(nd.cut_direction, on_sheared),
                    eigen_direction: map_dir(nd.eigen_direction, on_sheared),
                    sheared_side: nd.sheared_side,
                });
            }
        }

        let mut out = AlmostToricDiagram2D::new(polygon, nodes, Vec::new())?;
        out.show_lattice_points = self.show_lattice_points;
        Ok(out)
    }

    /// Lattice statistics of the polygon (vertices must be lattice points).
    pub fn lattice_stats(&self) -> Result<LatticeStats, AtbdError> {
        lattice_stats(&self.polygon)
    }

    /// Certify integral affine equivalence: search matrices with entries in
    /// `[-bound, bound]` and determinant +/-1 (translations are derived
    /// from vertex matchings, not bounded) such that the transform maps
    /// this diagram onto `other`: equal vertex sets and matching nodes
    /// (position, cut direction, eigen-direction up to sign).
    pub fn equivalent_to(&self, other: &Self, bound: i64) -> Option<(IntMat, [i64; 2])> {
        if self.polygon.len() != other.polygon.len() || self.nodes.len() != other.nodes.len() {
            return None;
        }
        let mut entries = [-bound; 4];
        loop {
            let m = IntMat::from_rows(&[
                vec![entries[0], entries[1]],
                vec![entries[2], entries[3]],
            ])
            .expect("2x2");
            if m.is_unimodular() {
                for target in &other.polygon {
                    // candidate translation maps our first vertex to `target`
                    let lin0 = Vec2r::new(
                        Rat::from_integer(entries[0]) * self.polygon[0].x
                            + Rat::from_integer(entries[1]) * self.polygon[0].y,
                        Rat::from_integer(entries[2]) * self.polygon[0].x
                            + Rat::from_integer(entries[3]) * self.polygon[0].y,
                    );
                    let t = target.sub(&lin0);
                    if !t.is_lattice() {
                        continue;
                    }
                    let t = [t.x.to_integer(), t.y.to_integer()];
                    if let Ok(sheared) = self.shear(&m, t) {
                        if sheared.same_shape(other) {
                            return Some((m, t));
                        }
                    }
                }
            }
            let mut i = 0;
            loop {
                if i == 4 {
                    return None;
                }
                if entries[i] < bound {
                    entries[i] += 1;
                    break;
                }
                entries[i] = -bound;
                i += 1;
            }
        }
    }

    /// Equal vertex sets and node data (cut rays exact, eigen-directions up
    /// to sign); labels and bookkeeping are ignored.
    pub fn same_shape(&self, other: &Self) -> bool {
        use std::collections::BTreeSet;
        let key = |v: &Vec2r| -> ((i64, i64), (i64, i64)) {
            ((*v.x.numer(), *v.x.denom()), (*v.y.numer(), *v.y.denom()))
        };
        let mine: BTreeSet<_> = self.polygon.iter().map(key).collect();
        let theirs: BTreeSet<_> = other.polygon.iter().map(key).collect();
        if mine != theirs {
            return false;
        }
        let node_key = |nd: &Node| {
            let eig = if nd.eigen_direction < [0, 0] {
                [-nd.eigen_direction[0], -nd.eigen_direction[1]]
            } else {
                nd.eigen_direction
            };
            (key(&nd.position), nd.cut_direction, eig)
        };
        let mine: BTreeSet<_> = self.nodes.iter().map(node_key).collect();
        let theirs: BTreeSet<_> = other.nodes.iter().map(node_key).collect();
        mine == theirs
    }

    /// Bounding box as floats, for rendering.
    pub fn bounds_f64(&self) -> (f64, f64, f64, f64) {
        let xs: Vec<f64> = self.polygon.iter().map(|v| rat_to_f64(v.x)).collect();
        let ys: Vec<f64> = self.polygon.iter().map(|v| rat_to_f64(v.y)).collect();
        let fold = |v: &[f64], init: f64, f: fn(f64, f64) -> f64| v.iter().fold(init, |a, &b| f(a, b));
        (
            fold(&xs, f64::INFINITY, f64::min),
            fold(&ys, f64::INFINITY, f64::min),
            fold(&xs, f64::NEG_INFINITY, f64::max),
            fold(&ys, f64::NEG_INFINITY, f64::max),
        )
    }

    /// All lattice points on the boundary (for rendering dots).
    pub fn boundary_lattice_points(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        let n = self.polygon.len();
        for i in 0..n {
            let a = self.polygon[i];
            let b = self.polygon[(i + 1) % n];
            if !(a.is_lattice() && b.is_lattice()) {
                continue;
            }
            let (ax, ay) = (a.x.to_integer(), a.y.to_integer());
            let g = super::affine_length(&[ax, ay], &[b.x.to_integer(), b.y.to_integer()]) as i64;
            let step = if g == 0 {
                [0, 0]
            } else {
                [
                    (b.x.to_integer() - ax) / g,
                    (b.y.to_integer() - ay) / g,
                ]
            };
            for k in 0..g.max(1) {
                out.push((ax + k * step[0], ay + k * step[1]));
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

fn drop_collinear(cycle: &[Vec2r]) -> Vec<Vec2r> {
    let n = cycle.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let prev = cycle[(i + n - 1) % n];
        let cur = cycle[i];
        let next = cycle[(i + 1) % n];
        if cur.sub(&prev).cross(&next.sub(&cur)) != Rat::zero() {
            out.push(cur);
        }
    }
    out
}

/// Exact lattice statistics of a simple polygon: shoelace area, interior
/// lattice points by direct enumeration, boundary lattice points as a gcd
/// sum. Pick's identity then relates all three, which tests exploit.
pub fn lattice_stats(polygon: &[Vec2r]) -> Result<LatticeStats, AtbdError> {
    check_simple(polygon)?;
    if !polygon.iter().all(|v| v.is_lattice()) {
        return Err(AtbdError::NotLatticePolygon);
    }
    let area = shoelace_twice(polygon).abs() / Rat::from_integer(2);
    let ints: Vec<(i64, i64)> = polygon
        .iter()
        .map(|v| (v.x.to_integer(), v.y.to_integer()))
        .collect();
    let n = ints.len();
    let mut boundary = 0u64;
    for i in 0..n {
        let a = ints[i];
        let b = ints[(i + 1) % n];
        boundary += super::affine_length(&[a.0, a.1], &[b.0, b.1]);
    }
    let min_x = ints.iter().map(|p| p.0).min().expect("nonempty");
    let max_x = ints.iter().map(|p| p.0).max().expect("nonempty");
    let min_y = ints.iter().map(|p| p.1).min().expect("nonempty");
    let max_y = ints.iter().map(|p| p.1).max().expect("nonempty");
    let mut interior = 0u64;
    for x in min_x..=max_x {
        for y in min_y..=max_y {
            let p = Vec2r::from_ints(x, y);
            if locate_point(&p, polygon) == PointLocation::Inside {
                interior += 1;
            }
        }
    }
    Ok(LatticeStats {
        area,
        interior_points: interior,
        boundary_points: boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(points: &[(i64, i64)]) -> Vec<Vec2r> {
        points
            .iter()
            .map(|&(x, y)| Vec2r::from_ints(x, y))
            .collect()
    }

    /// The reglued boundary quadrilateral from the worked 3D diagram, with
    /// its node and downward cut.
    fn paper_quadrilateral() -> AlmostToricDiagram2D {
        AlmostToricDiagram2D::new(
            quad(&[(0, 0), (1, 0), (4, 3), (-3, 3)]),
            vec![Node::new(Vec2r::from_ints(0, 1), [0, -1], Side::Right)],
            Vec::new(),
        )
        .unwrap()
    }

    fn target_rectangle() -> AlmostToricDiagram2D {
        AlmostToricDiagram2D::new(
            quad(&[(0, 0), (4, 0), (4, 3), (0, 3)]),
            vec![Node::new(Vec2r::from_ints(2, 1), [-1, 1], Side::Left)],
            Vec::new(),
        )
        .unwrap()
    }

    #[test]
    fn unit_square_stats() {
        let s = lattice_stats(&quad(&[(0, 0), (1, 0), (1, 1), (0, 1)])).unwrap();
        assert_eq!(s.area, Rat::from_integer(1));
        assert_eq!(s.interior_points, 0);
        assert_eq!(s.boundary_points, 4);
        assert!(s.pick_identity_holds());
    }

    #[test]
    fn paper_quadrilateral_stats() {
        let s = paper_quadrilateral().lattice_stats().unwrap();
        assert_eq!(s.area, Rat::from_integer(12));
        assert_eq!(s.boundary_points, 14);
        assert_eq!(s.interior_points, 6);
        assert!(s.pick_identity_holds());
    }

    #[test]
    fn rectangle_stats() {
        let s = target_rectangle().lattice_stats().unwrap();
        assert_eq!(s.area, Rat::from_integer(12));
        assert_eq!(s.boundary_points, 14);
        assert!(s.pick_identity_holds());
    }

    #[test]
    fn non_simple_polygon_rejected() {
        let bow_tie = quad(&[(0, 0), (2, 2), (2, 0), (0, 2)]);
        assert!(matches!(
            lattice_stats(&bow_tie),
            Err(AtbdError::NotSimple(..))
        ));
    }

    #[test]
    fn shear_unit_square() {
        let d = AlmostToricDiagram2D::new(
            quad(&[(0, 0), (1, 0), (1, 1), (0, 1)]),
            Vec::new(),
            Vec::new(),
        )
        .unwrap();
        let m = IntMat::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let sheared = d.shear(&m, [0, 0]).unwrap();
        let expected = AlmostToricDiagram2D::new(
            quad(&[(0, 0), (1, 0), (2, 1), (1, 1)]),
            Vec::new(),
            Vec::new(),
        )
        .unwrap();
        assert!(sheared.same_shape(&expected));
        // inverse shear undoes it
        let minv = m.inverse_unimodular().unwrap();
        let back = sheared.shear(&minv, [0, 0]).unwrap();
        assert_eq!(back.polygon, d.polygon);
        // identity shear is the identity
        let id = IntMat::identity(2);
        assert_eq!(d.shear(&id, [0, 0]).unwrap(), d);
    }

    #[test]
    fn shear_rejects_non_unimodular() {
        let d = AlmostToricDiagram2D::new(
            quad(&[(0, 0), (1, 0), (1, 1), (0, 1)]),
            Vec::new(),
            Vec::new(),
        )
        .unwrap();
        let m = IntMat::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert!(matches!(
            d.shear(&m, [0, 0]),
            Err(AtbdError::NotUnimodular)
        ));
    }

    #[test]
    fn mutation_of_paper_quadrilateral() {
        let d = paper_quadrilateral();
        let mutated = d.mutate(0).unwrap();
        // invariants preserved
        let before = d.lattice_stats().unwrap();
        let after = mutated.lattice_stats().unwrap();
        assert_eq!(before, after);
        assert!(after.pick_identity_holds());
        // a discovered shear carries the mutated diagram onto the rectangle
        let target = target_rectangle();
        let (m, t) = mutated
            .equivalent_to(&target, 6)
            .expect("shear should exist");
        let sheared = mutated.shear(&m, t).unwrap();
        assert!(sheared.same_shape(&target));
        // and the concrete transform is the expected one
        assert_eq!(m.rows(), vec![vec![1, -1], vec![0, 1]]);
        assert_eq!(t, [3, 0]);
    }

    #[test]
    fn mutate_twice_returns_up_to_affine_map() {
        let d = paper_quadrilateral();
        let twice = d.mutate(0).unwrap().mutate(0).unwrap();
        // here the double mutation is exactly the identity on the polygon
        assert!(twice.same_shape(&d) || twice.equivalent_to(&d, 6).is_some());
    }

    #[test]
    fn mutation_flips_cut_and_preserves_position() {
        let d = paper_quadrilateral();
        let mutated = d.mutate(0).unwrap();
        assert_eq!(mutated.nodes[0].position, d.nodes[0].position);
        assert_eq!(mutated.nodes[0].cut_direction, [0, 1]);
    }

    #[test]
    fn no_nodes_is_an_error_only_for_missing_index() {
        let d = AlmostToricDiagram2D::new(
            quad(&[(0, 0), (1, 0), (1, 1), (0, 1)]),
            Vec::new(),
            Vec::new(),
        )
        .unwrap();
        assert!(matches!(d.mutate(0), Err(AtbdError::NoSuchNode(0))));
    }

    #[test]
    fn degenerate_cut_through_vertex_rejected() {
        // cut line through the node in direction (1, 1) grazes the square
        // corner at (2, 2): vertex touch without crossing
        let d = AlmostToricDiagram2D::new(
            quad(&[(0, 0), (2, 0), (2, 2), (0, 2)]),
            vec![Node::new(Vec2r::new(Rat::new(1, 1), Rat::new(1, 1)), [1, 1], Side::Left)],
            Vec::new(),
        )
        .unwrap();
        assert!(matches!(
            d.mutate(0),
            Err(AtbdError::DegenerateMutation(_))
        ));
    }

    #[test]
    fn shears_preserve_affine_length_and_stats() {
        let d = paper_quadrilateral();
        let m = IntMat::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
        let sheared = d.shear(&m, [5, -7]).unwrap();
        assert_eq!(
            d.lattice_stats().unwrap(),
            sheared.lattice_stats().unwrap()
        );
        let lengths = |d: &AlmostToricDiagram2D| -> Vec<u64> {
            let n = d.polygon.len();
            let mut v: Vec<u64> = (0..n)
                .map(|i| {
                    let a = d.polygon[i];
                    let b = d.polygon[(i + 1) % n];
                    super::super::affine_length(
                        &[a.x.to_integer(), a.y.to_integer()],
                        &[b.x.to_integer(), b.y.to_integer()],
                    )
                })
                .collect();
            v.sort();
            v
        };
        assert_eq!(lengths(&d), lengths(&sheared));
    }

    #[test]
    fn json_round_trip() {
        let d = paper_quadrilateral();
        let s = serde_json::to_string(&d).unwrap();
        let back: AlmostToricDiagram2D = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}
