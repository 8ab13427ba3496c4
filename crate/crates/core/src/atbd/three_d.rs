//! Three-dimensional almost toric base diagrams: a rational polytope with
//! an excised ball, a branch half-plane carrying two wall matrices, and
//! focus-focus rays. The 3D side verifies structure (wall action on edge
//! tangents, facet shapes) and extracts 2D diagrams from facets; it does
//! not mutate.

use super::two_d::{AlmostToricDiagram2D, Node, Side};
use super::AtbdError;
use crate::group::smith_normal_form;
use crate::linalg::{primitive, IntMat, Rat, Vec2r, Vec3r};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// The branch plane is split by the horizontal focus-focus ray into an
/// upper and a lower region, each carrying its own wall matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Wall {
    Upper,
    Lower,
}

/// Ray with rational base point and primitive integer direction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ray3 {
    pub base: Vec3r,
    pub direction: [i64; 3],
}

/// Half-plane `{ line_base + s * line_direction + t * span_direction, t >= 0 }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchPlane {
    pub line_base: Vec3r,
    pub line_direction: [i64; 3],
    pub span_direction: [i64; 3],
}

impl BranchPlane {
    /// Normal of the full plane containing the half-plane.
    pub fn normal(&self) -> [i64; 3] {
        let ld = Vec3r::from_ints(
            self.line_direction[0],
            self.line_direction[1],
            self.line_direction[2],
        );
        let sd = Vec3r::from_ints(
            self.span_direction[0],
            self.span_direction[1],
            self.span_direction[2],
        );
        ld.cross(&sd)
            .primitive_direction()
            .expect("spanning directions are independent")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseDiagram3D {
    pub vertices: Vec<(String, Vec3r)>,
    pub facets: Vec<(String, Vec<String>)>,
    pub excised_center: Vec3r,
    #[serde(with = "crate::linalg::serde_rat")]
    pub excised_radius: Rat,
    pub branch_plane: BranchPlane,
    pub wall_upper: IntMat,
    pub wall_lower: IntMat,
    pub focus_rays: Vec<Ray3>,
}

impl BaseDiagram3D {
    pub fn vertex(&self, name: &str) -> Result<Vec3r, AtbdError> {
        self.vertices
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
            .ok_or_else(|| AtbdError::UnknownVertex(name.to_string()))
    }

    pub fn facet(&self, name: &str) -> Result<&[String], AtbdError> {
        self.facets
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
            .ok_or_else(|| AtbdError::UnknownFacet(name.to_string()))
    }

    pub fn wall_matrix(&self, wall: Wall) -> &IntMat {
        match wall {
            Wall::Upper => &self.wall_upper,
            Wall::Lower => &self.wall_lower,
        }
    }

    pub fn validate(&self) -> Result<(), AtbdError> {
        for (wall, m) in [(Wall::Upper, &self.wall_upper), (Wall::Lower, &self.wall_lower)] {
            if m.dim() != 3 || !m.is_unimodular() {
                return Err(AtbdError::WallNotUnimodular(wall));
            }
            for dir in [
                self.branch_plane.line_direction,
                self.branch_plane.span_direction,
            ] {
                if m.mul_vec(&dir.to_vec())? != dir.to_vec() {
                    return Err(AtbdError::WallMovesBranchPlane(wall));
                }
            }
        }
        for (name, _) in &self.facets {
            let (normal, offset) = self.facet_plane(name)?;
            let nr = Vec3r::from_ints(normal[0], normal[1], normal[2]);
            let members = self.facet(name)?.to_vec();
            for (vn, v) in &self.vertices {
                if members.contains(vn) {
                    continue;
                }
                if nr.dot(v) >= offset {
                    return Err(AtbdError::NotAFace(name.clone()));
                }
            }
        }
        for (i, ray) in self.focus_rays.iter().enumerate() {
            if ray.direction == [0, 0, 0] {
                return Err(AtbdError::ZeroDirection);
            }
            if primitive(&ray.direction) != ray.direction.to_vec() {
                return Err(AtbdError::NotPrimitive(ray.direction.to_vec()));
            }
            if self.ray_distance_squared_to_excision(ray) > self.excised_radius * self.excised_radius
            {
                return Err(AtbdError::RayMissesExcision(i));
            }
        }
        Ok(())
    }

    fn ray_distance_squared_to_excision(&self, ray: &Ray3) -> Rat {
        let d = Vec3r::from_ints(ray.direction[0], ray.direction[1], ray.direction[2]);
        let to_center = self.excised_center.sub(&ray.base);
        let t = to_center.dot(&d) / d.dot(&d);
        let t = if t < Rat::zero() { Rat::zero() } else { t };
        let closest = ray.base.add(&d.scale(t));
        let diff = self.excised_center.sub(&closest);
        diff.dot(&diff)
    }

    /// Supporting plane of a facet, with the normal scaled primitive and
    /// oriented so that the rest of the polytope satisfies `n . x < offset`.
    pub fn facet_plane(&self, name: &str) -> Result<([i64; 3], Rat), AtbdError> {
        let members = self.facet(name)?;
        if members.len() < 3 {
            return Err(AtbdError::FacetNotPlanar(name.to_string()));
        }
        let pts: Vec<Vec3r> = members
            .iter()
            .map(|vn| self.vertex(vn))
            .collect::<Result<_, _>>()?;
        let mut normal = None;
        for i in 1..pts.len() {
            for j in i + 1..pts.len() {
                let c = pts[i].sub(&pts[0]).cross(&pts[j].sub(&pts[0]));
                if !c.is_zero() {
                    normal = c.primitive_direction();
                    break;
                }
            }
            if normal.is_some() {
                break;
            }
        }
        let normal = normal.ok_or_else(|| AtbdError::FacetNotPlanar(name.to_string()))?;
        let nr = Vec3r::from_ints(normal[0], normal[1], normal[2]);
        let offset = nr.dot(&pts[0]);
        for p in &pts {
            if nr.dot(p) != offset {
                return Err(AtbdError::FacetNotPlanar(name.to_string()));
            }
        }
        // orient outward: every non-facet vertex strictly below the plane
        let mut above = 0usize;
        let mut below = 0usize;
        for (vn, v) in &self.vertices {
            if members.contains(vn) {
                continue;
            }
            let d = nr.dot(v);
            if d > offset {
                above += 1;
            } else if d < offset {
                below += 1;
            }
        }
        if above > 0 && below > 0 {
            return Err(AtbdError::NotAFace(name.to_string()));
        }
        if above > 0 {
            let flipped = [-normal[0], -normal[1], -normal[2]];
            return Ok((flipped, -offset));
        }
        Ok((normal, offset))
    }

    /// Primitive integer tangent of the directed edge `from -> to`.
    pub fn edge_tangent(&self, from: &str, to: &str) -> Result<[i64; 3], AtbdError> {
        let a = self.vertex(from)?;
        let b = self.vertex(to)?;
        b.sub(&a)
            .primitive_direction()
            .ok_or_else(|| AtbdError::ZeroEdge(format!("{from}->{to}")))
    }

    /// True iff the wall matrix maps the primitive tangent of the directed
    /// edge `edge_a` to the primitive tangent of `edge_b` (the straight-edge
    /// condition across the branch plane).
    pub fn check_edge_colinearity(
        &self,
        edge_a: (&str, &str),
        edge_b: (&str, &str),
        wall: Wall,
    ) -> Result<bool, AtbdError> {
        let ta = self.edge_tangent(edge_a.0, edge_a.1)?;
        let tb = self.edge_tangent(edge_b.0, edge_b.1)?;
        let mapped = self.wall_matrix(wall).mul_vec(&ta.to_vec())?;
        Ok(mapped == tb.to_vec())
    }

    /// Extract a facet as a 2D diagram, with coordinates in a basis of the
    /// facet's integral tangent lattice. Focus-focus rays whose base lies
    /// strictly inside the facet become nodes, with cut direction the
    /// intersection of the branch plane with the facet (rays based on the
    /// facet boundary belong to reglued unions, see
    /// [`BaseDiagram3D::facet_extract_reglued`]).
    pub fn facet_extract(&self, name: &str) -> Result<AlmostToricDiagram2D, AtbdError> {
        let chart = self.facet_chart(name)?;
        let members = self.facet(name)?.to_vec();
        let mut polygon = Vec::new();
        for vn in &members {
            polygon.push(chart.to_2d(&self.vertex(vn)?, name)?);
        }
        let labels: Vec<Option<String>> = (0..members.len())
            .map(|i| {
                let a = &members[i];
                let b = &members[(i + 1) % members.len()];
                self.other_facet_with_edge(name, a, b)
            })
            .collect();
        let nodes = self.facet_nodes(&chart, &polygon, name)?;
        AlmostToricDiagram2D::new(polygon, nodes, labels)
    }

    /// Extract the union of two facets meeting along an edge on the branch
    /// plane, regluing `far` into the chart of `base` with the chosen wall
    /// matrix (applied as an affine map fixing the branch plane pointwise).
    pub fn facet_extract_reglued(
        &self,
        far: &str,
        base: &str,
        wall: Wall,
    ) -> Result<AlmostToricDiagram2D, AtbdError> {
        let chart = self.facet_chart(base)?;
        let base_members = self.facet(base)?.to_vec();
        let far_members = self.facet(far)?.to_vec();

        let m = self.wall_matrix(wall);
        let pivot = self.branch_plane.line_base;
        let cross_wall = |x: &Vec3r| -> Vec3r {
            let rel = x.sub(&pivot);
            let mapped = Vec3r::new(
                Rat::from_integer(m.get(0, 0)) * rel.x
                    + Rat::from_integer(m.get(0, 1)) * rel.y
                    + Rat::from_integer(m.get(0, 2)) * rel.z,
                Rat::from_integer(m.get(1, 0)) * rel.x
                    + Rat::from_integer(m.get(1, 1)) * rel.y
                    + Rat::from_integer(m.get(1, 2)) * rel.z,
                Rat::from_integer(m.get(2, 0)) * rel.x
                    + Rat::from_integer(m.get(2, 1)) * rel.y
                    + Rat::from_integer(m.get(2, 2)) * rel.z,
            );
            pivot.add(&mapped)
        };

        let base_poly: Vec<Vec2r> = base_members
            .iter()
            .map(|vn| chart.to_2d(&self.vertex(vn)?, base))
            .collect::<Result<_, _>>()?;
        let far_poly: Vec<Vec2r> = far_members
            .iter()
            .map(|vn| chart.to_2d(&cross_wall(&self.vertex(vn)?), far))
            .collect::<Result<_, _>>()?;

        let base_labels: Vec<Option<String>> = (0..base_members.len())
            .map(|i| {
                self.other_facet_with_edge(
                    base,
                    &base_members[i],
                    &base_members[(i + 1) % base_members.len()],
                )
            })
            .collect();
        let far_labels: Vec<Option<String>> = (0..far_members.len())
            .map(|i| {
                self.other_facet_with_edge(
                    far,
                    &far_members[i],
                    &far_members[(i + 1) % far_members.len()],
                )
            })
            .collect();

        let (polygon, labels) = merge_along_shared_edge(
            &base_poly,
            &base_labels,
            &far_poly,
            &far_labels,
            far,
            base,
        )?;

        // nodes: rays based on either facet plane, strictly inside the union
        let mut nodes = Vec::new();
        let (n_base, off_base) = self.facet_plane(base)?;
        let (n_far, off_far) = self.facet_plane(far)?;
        let nb = Vec3r::from_ints(n_base[0], n_base[1], n_base[2]);
        let nf = Vec3r::from_ints(n_far[0], n_far[1], n_far[2]);
        for ray in &self.focus_rays {
            let base3 = if nb.dot(&ray.base) == off_base {
                Some(ray.base)
            } else if nf.dot(&ray.base) == off_far {
                Some(cross_wall(&ray.base))
            } else {
                None
            };
            let Some(b3) = base3 else { continue };
            let pos = chart.to_2d(&b3, base)?;
            if nodes.iter().any(|n: &Node| n.position == pos) {
                continue;
            }
            if point_strictly_inside(&pos, &polygon) {
                let cut = self.facet_cut_direction(&chart)?;
                nodes.push(Node::new(pos, cut, Side::Left));
            }
        }
        AlmostToricDiagram2D::new(polygon, nodes, labels)
    }

    fn other_facet_with_edge(&self, this: &str, a: &str, b: &str) -> Option<String> {
        self.facets
            .iter()
            .find(|(name, members)| {
                name != this && members.iter().any(|v| v == a) && members.iter().any(|v| v == b)
            })
            .map(|(name, _)| name.clone())
    }

    fn facet_chart(&self, name: &str) -> Result<FacetChart, AtbdError> {
        let (normal, offset) = self.facet_plane(name)?;
        if *offset.denom() != 1 {
            return Err(AtbdError::NotLatticePlanar(name.to_string()));
        }
        let offset_int = offset.to_integer();
        let snf = smith_normal_form(&[normal.to_vec()]);
        let v = &snf.v;
        let col = |j: usize| -> [i64; 3] {
            [
                i64::try_from(&v[0][j]).expect("small lattice basis"),
                i64::try_from(&v[1][j]).expect("small lattice basis"),
                i64::try_from(&v[2][j]).expect("small lattice basis"),
            ]
        };
        let pivot_col = col(0);
        let b1 = col(1);
        let b2 = col(2);
        // n . pivot_col = +/-1 since the normal is primitive
        let e: i64 = normal
            .iter()
            .zip(pivot_col.iter())
            .map(|(a, b)| a * b)
            .sum();
        debug_assert!(e.abs() == 1);
        let origin = [
            pivot_col[0] * e * offset_int,
            pivot_col[1] * e * offset_int,
            pivot_col[2] * e * offset_int,
        ];
        let mut chart = FacetChart {
            normal,
            offset,
            origin,
            b1,
            b2,
        };
        // orient the basis so the facet polygon comes out counterclockwise
        let members = self.facet(name)?;
        let poly: Vec<Vec2r> = members
            .iter()
            .map(|vn| chart.to_2d(&self.vertex(vn)?, name))
            .collect::<Result<_, _>>()?;
        let mut doubled = Rat::zero();
        for i in 0..poly.len() {
            doubled += poly[i].cross(&poly[(i + 1) % poly.len()]);
        }
        if doubled < Rat::zero() {
            std::mem::swap(&mut chart.b1, &mut chart.b2);
        }
        Ok(chart)
    }

    fn facet_nodes(
        &self,
        chart: &FacetChart,
        polygon: &[Vec2r],
        name: &str,
    ) -> Result<Vec<Node>, AtbdError> {
        let nr = Vec3r::from_ints(chart.normal[0], chart.normal[1], chart.normal[2]);
        let mut nodes = Vec::new();
        for ray in &self.focus_rays {
            if nr.dot(&ray.base) != chart.offset {
                continue;
            }
            let pos = chart.to_2d(&ray.base, name)?;
            if !point_strictly_inside(&pos, polygon) {
                continue;
            }
            let cut = self.facet_cut_direction(chart)?;
            nodes.push(Node::new(pos, cut, Side::Left));
        }
        Ok(nodes)
    }

    /// Direction of the branch cut inside a facet: the intersection line of
    /// the branch plane with the facet plane, oriented into the half-plane
    /// when that is determined, lexicographically smallest otherwise.
    fn facet_cut_direction(&self, chart: &FacetChart) -> Result<[i64; 2], AtbdError> {
        let n_branch = self.branch_plane.normal();
        let nf = Vec3r::from_ints(chart.normal[0], chart.normal[1], chart.normal[2]);
        let nb = Vec3r::from_ints(n_branch[0], n_branch[1], n_branch[2]);
        let line = nf.cross(&nb);
        let d3 = line
            .primitive_direction()
            .ok_or(AtbdError::ZeroDirection)?;
        // decompose d3 = alpha * line_direction + beta * span_direction and
        // pick the sign with beta > 0 (pointing into the half-plane)
        let ld = self.branch_plane.line_direction;
        let sd = self.branch_plane.span_direction;
        let beta = solve_in_plane_coefficient(ld, sd, d3);
        let d3 = match beta {
            Some(b) if b < Rat::zero() => [-d3[0], -d3[1], -d3[2]],
            Some(b) if b > Rat::zero() => d3,
            _ => {
                let neg = [-d3[0], -d3[1], -d3[2]];
                if neg < d3 {
                    neg
                } else {
                    d3
                }
            }
        };
        chart.direction_to_2d(d3)
    }
}

/// Coefficient of `span` when writing `target = alpha * line + beta * span`,
/// if the decomposition exists.
fn solve_in_plane_coefficient(line: [i64; 3], span: [i64; 3], target: [i64; 3]) -> Option<Rat> {
    for (r1, r2) in [(0, 1), (0, 2), (1, 2)] {
        let det = line[r1] * span[r2] - line[r2] * span[r1];
        if det == 0 {
            continue;
        }
        let beta = Rat::new(line[r1] * target[r2] - line[r2] * target[r1], det);
        let alpha = Rat::new(target[r1] * span[r2] - target[r2] * span[r1], det);
        // verify on the remaining coordinate
        let r3 = 3 - r1 - r2;
        let lhs = alpha * Rat::from_integer(line[r3]) + beta * Rat::from_integer(span[r3]);
        if lhs == Rat::from_integer(target[r3]) {
            return Some(beta);
        }
        return None;
    }
    None
}

struct FacetChart {
    normal: [i64; 3],
    offset: Rat,
    origin: [i64; 3],
    b1: [i64; 3],
    b2: [i64; 3],
}

impl FacetChart {
    fn to_2d(&self, p: &Vec3r, facet: &str) -> Result<Vec2r, AtbdError> {
        let nr = Vec3r::from_ints(self.normal[0], self.normal[1], self.normal[2]);
        if nr.dot(p) != self.offset {
            return Err(AtbdError::FacetNotPlanar(facet.to_string()));
        }
        let diff = p.sub(&Vec3r::from_ints(
            self.origin[0],
            self.origin[1],
            self.origin[2],
        ));
        let d = [diff.x, diff.y, diff.z];
        for (r1, r2) in [(0, 1), (0, 2), (1, 2)] {
            let det = self.b1[r1] * self.b2[r2] - self.b1[r2] * self.b2[r1];
            if det == 0 {
                continue;
            }
            let det = Rat::from_integer(det);
            let a = (d[r1] * Rat::from_integer(self.b2[r2])
                - d[r2] * Rat::from_integer(self.b2[r1]))
                / det;
            let c = (Rat::from_integer(self.b1[r1]) * d[r2]
                - Rat::from_integer(self.b1[r2]) * d[r1])
                / det;
            return Ok(Vec2r::new(a, c));
        }
        Err(AtbdError::FacetNotPlanar(facet.to_string()))
    }

    fn direction_to_2d(&self, d3: [i64; 3]) -> Result<[i64; 2], AtbdError> {
        let p = Vec3r::from_ints(
            self.origin[0] + d3[0],
            self.origin[1] + d3[1],
            self.origin[2] + d3[2],
        );
        let v = self.to_2d(&p, "direction")?;
        // in-plane lattice vectors have integer coordinates in a lattice basis
        let ints = [v.x.to_integer(), v.y.to_integer()];
        let prim = primitive(&ints);
        Ok([prim[0], prim[1]])
    }
}

fn point_strictly_inside(p: &Vec2r, polygon: &[Vec2r]) -> bool {
    let n = polygon.len();
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        let ab = b.sub(&a);
        let ap = p.sub(&a);
        if ab.cross(&ap).is_zero()
            && ap.dot(&ab) >= Rat::zero()
            && ap.dot(&ab) <= ab.dot(&ab)
        {
            return false;
        }
    }
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
    crossings % 2 == 1
}

/// Merge two simple polygons that share exactly one edge (given with
/// aligned outgoing-edge labels) into one polygon, dropping the shared
/// edge and any vertices that become straight.
fn merge_along_shared_edge(
    base: &[Vec2r],
    base_labels: &[Option<String>],
    far: &[Vec2r],
    far_labels: &[Option<String>],
    far_name: &str,
    base_name: &str,
) -> Result<(Vec<Vec2r>, Vec<Option<String>>), AtbdError> {
    let orient = |poly: &[Vec2r], labels: &[Option<String>]| -> (Vec<Vec2r>, Vec<Option<String>>) {
        let mut doubled = Rat::zero();
        for i in 0..poly.len() {
            doubled += poly[i].cross(&poly[(i + 1) % poly.len()]);
        }
        if doubled < Rat::zero() {
            let mut p = poly.to_vec();
            let mut l = labels.to_vec();
            p.reverse();
            l.reverse();
            l.rotate_left(1);
            (p, l)
        } else {
            (poly.to_vec(), labels.to_vec())
        }
    };
    let (base, base_labels) = orient(base, base_labels);
    let (far, far_labels) = orient(far, far_labels);

    let shared: Vec<Vec2r> = base
        .iter()
        .filter(|v| far.contains(v))
        .copied()
        .collect();
    if shared.len() != 2 {
        return Err(AtbdError::NoSharedEdge(
            far_name.to_string(),
            base_name.to_string(),
        ));
    }
    let nb = base.len();
    let i = (0..nb)
        .find(|&i| {
            (base[i] == shared[0] && base[(i + 1) % nb] == shared[1])
                || (base[i] == shared[1] && base[(i + 1) % nb] == shared[0])
        })
        .ok_or_else(|| AtbdError::NoSharedEdge(far_name.to_string(), base_name.to_string()))?;
    let (s_first, s_second) = (base[i], base[(i + 1) % nb]);
    let nf = far.len();
    let j = (0..nf)
        .find(|&j| far[j] == s_second && far[(j + 1) % nf] == s_first)
        .ok_or_else(|| AtbdError::NoSharedEdge(far_name.to_string(), base_name.to_string()))?;

    // walk base from s_second around to s_first, then far from s_first
    // around to s_second (both CCW), pairing each vertex with the label of
    // its outgoing edge
    let mut merged: Vec<(Vec2r, Option<String>)> = Vec::new();
    for k in 1..nb {
        let idx = (i + k) % nb;
        merged.push((base[idx], base_labels[idx].clone()));
    }
    for k in 1..nf {
        let idx = (j + k) % nf;
        merged.push((far[idx], far_labels[idx].clone()));
    }

    // drop vertices that are straight, merging edge labels when they agree
    let total = merged.len();
    let mut out_poly = Vec::new();
    let mut out_labels = Vec::new();
    let mut carried: Option<Option<String>> = None;
    for k in 0..total {
        let prev = merged[(k + total - 1) % total].0;
        let (cur, label) = merged[k].clone();
        let next = merged[(k + 1) % total].0;
        if cur.sub(&prev).cross(&next.sub(&cur)).is_zero() {
            // straight: its outgoing label merges into the incoming edge
            carried = Some(label);
            continue;
        }
        out_poly.push(cur);
        let label = match carried.take() {
            Some(prev_label) if prev_label == label => label,
            Some(_) => None,
            None => label,
        };
        out_labels.push(label);
    }
    Ok((out_poly, out_labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn paper_diagram_validates() {
        let d = fixtures::negative_vertex_diagram();
        d.validate().unwrap();
    }

    #[test]
    fn wall_matrices_straighten_edges() {
        let d = fixtures::negative_vertex_diagram();
        // upper wall: tangent of B124 -> Q maps to tangent of Q -> B123
        assert!(d
            .check_edge_colinearity(("B124", "Q"), ("Q", "B123"), Wall::Upper)
            .unwrap());
        // lower wall: tangent of B124 -> P maps to tangent of P -> B134
        assert!(d
            .check_edge_colinearity(("B124", "P"), ("P", "B134"), Wall::Lower)
            .unwrap());
        // identity sanity: an edge against itself under a trivial check
        assert!(!d
            .check_edge_colinearity(("B124", "Q"), ("Q", "B123"), Wall::Lower)
            .unwrap());
    }

    #[test]
    fn edge_tangents_match_printed_vectors() {
        let d = fixtures::negative_vertex_diagram();
        assert_eq!(d.edge_tangent("B124", "Q").unwrap(), [0, -1, 0]);
        assert_eq!(d.edge_tangent("Q", "B123").unwrap(), [1, 0, 0]);
        assert_eq!(d.edge_tangent("B124", "P").unwrap(), [0, -1, -1]);
        assert_eq!(d.edge_tangent("P", "B134").unwrap(), [1, 0, 0]);
        assert!(matches!(
            d.edge_tangent("P", "P"),
            Err(AtbdError::ZeroEdge(_))
        ));
    }

    #[test]
    fn b3_is_a_lattice_triangle_of_side_3() {
        let d = fixtures::negative_vertex_diagram();
        let b3 = d.facet_extract("B3").unwrap();
        assert_eq!(b3.polygon.len(), 3);
        assert!(b3.nodes.is_empty());
        for i in 0..3 {
            let a = b3.polygon[i];
            let b = b3.polygon[(i + 1) % 3];
            let len = super::super::affine_length(
                &[a.x.to_integer(), a.y.to_integer()],
                &[b.x.to_integer(), b.y.to_integer()],
            );
            assert_eq!(len, 3);
        }
    }

    #[test]
    fn b2_and_b4_have_one_node_each() {
        let d = fixtures::negative_vertex_diagram();
        let b2 = d.facet_extract("B2").unwrap();
        assert_eq!(b2.polygon.len(), 4);
        assert_eq!(b2.nodes.len(), 1);
        let b4 = d.facet_extract("B4").unwrap();
        assert_eq!(b4.polygon.len(), 4);
        assert_eq!(b4.nodes.len(), 1);
    }

    #[test]
    fn reglued_front_facet_is_the_paper_quadrilateral() {
        let d = fixtures::negative_vertex_diagram();
        let glued = d.facet_extract_reglued("B1p", "B1", Wall::Upper).unwrap();
        assert_eq!(glued.polygon.len(), 4, "single quadrilateral: {glued:?}");
        assert_eq!(glued.nodes.len(), 1);
        let expect: Vec<Vec2r> = [(0, 0), (1, 0), (4, 3), (-3, 3)]
            .iter()
            .map(|&(x, y)| Vec2r::from_ints(x, y))
            .collect();
        use std::collections::BTreeSet;
        let key = |v: &Vec2r| ((*v.x.numer(), *v.x.denom()), (*v.y.numer(), *v.y.denom()));
        let got: BTreeSet<_> = glued.polygon.iter().map(key).collect();
        let want: BTreeSet<_> = expect.iter().map(key).collect();
        assert_eq!(got, want);
        // node on the old shared edge, cut pointing down it
        assert_eq!(glued.nodes[0].position, Vec2r::new(Rat::from_integer(0), Rat::new(3, 2)));
        assert_eq!(glued.nodes[0].cut_direction, [0, -1]);
    }

    #[test]
    fn corrupted_wall_matrix_fails_validation() {
        let mut d = fixtures::negative_vertex_diagram();
        d.wall_upper = IntMat::from_rows(&[vec![2, -1, 0], vec![1, 0, 0], vec![0, 1, 1]]).unwrap();
        assert!(d.validate().is_err());
    }

    #[test]
    fn json_round_trip() {
        let d = fixtures::negative_vertex_diagram();
        let s = serde_json::to_string(&d).unwrap();
        let back: BaseDiagram3D = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}
