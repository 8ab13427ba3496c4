//! Bundled example inputs: the boundary presentations, the cubic-surface
//! atlas, the negative-vertex 3D base diagram and its reglued facet, and
//! the default analysis configuration. Every fixture round-trips through
//! its JSON schema.

use crate::atbd::{AlmostToricDiagram2D, BaseDiagram3D, BranchPlane, Node, Ray3, Side};
use crate::atlas::{AffineAtlas, LoopWord};
use crate::complex::{complete_graph_presentation, SncPresentation, Stratum};
use crate::linalg::{IntMat, Rat, Vec2r, Vec3r};
use crate::negvertex::NegVertexConfig;

/// Four boundary components meeting pairwise in double curves, no deeper
/// strata: the dual complex is the 1-skeleton of a tetrahedron.
pub fn pair_of_pants_presentation() -> SncPresentation {
    complete_graph_presentation(4, 3)
}

/// Three lines in a surface meeting pairwise in three double points: the
/// dual complex is a triangle of edges (a circle).
pub fn three_cycle_presentation() -> SncPresentation {
    let components: Vec<String> = (1..=3).map(|i| format!("Y{i}")).collect();
    let mut strata = Vec::new();
    for i in 0..3 {
        strata.push(Stratum {
            subset: vec![components[i].clone(), components[(i + 1) % 3].clone()],
            count: 1,
        });
    }
    SncPresentation::new(2, components, strata)
}

/// The boundary divisor of the negative vertex: four components in
/// ambient dimension 3 with all six double curves and all four triple
/// points connected. The dual complex is the boundary of a tetrahedron,
/// a 2-sphere.
pub fn negative_vertex_presentation() -> SncPresentation {
    let components: Vec<String> = (1..=4).map(|i| format!("Y{i}")).collect();
    let mut strata = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            strata.push(Stratum {
                subset: vec![components[i].clone(), components[j].clone()],
                count: 1,
            });
        }
    }
    for triple in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
        strata.push(Stratum {
            subset: triple.iter().map(|&k| components[k].clone()).collect(),
            count: 1,
        });
    }
    SncPresentation::new(3, components, strata)
}

/// Cubic-surface hyperplane-section atlas and its generator loop.
pub fn cubic_surface_atlas() -> (AffineAtlas, LoopWord) {
    crate::atlas::cubic_surface_atlas()
}

/// The 3D almost toric base diagram of the negative vertex: the convex
/// hull of six lattice points with an excised ball, a branch half-plane
/// split into upper and lower wall regions, and three focus-focus rays.
pub fn negative_vertex_diagram() -> BaseDiagram3D {
    let half = Rat::new(1, 2);
    let vertices = vec![
        ("P".to_string(), Vec3r::from_ints(0, 0, 0)),
        ("Q".to_string(), Vec3r::from_ints(0, 0, 3)),
        ("B134".to_string(), Vec3r::from_ints(1, 0, 0)),
        ("B123".to_string(), Vec3r::from_ints(4, 0, 3)),
        ("B124".to_string(), Vec3r::from_ints(0, 3, 3)),
        ("B234".to_string(), Vec3r::from_ints(1, 3, 3)),
    ];
    let facets = vec![
        (
            "B1".to_string(),
            vec!["P".into(), "B134".into(), "B123".into(), "Q".into()],
        ),
        ("B1p".to_string(), vec!["P".into(), "Q".into(), "B124".into()]),
        (
            "B2".to_string(),
            vec!["B124".into(), "Q".into(), "B123".into(), "B234".into()],
        ),
        (
            "B3".to_string(),
            vec!["B134".into(), "B123".into(), "B234".into()],
        ),
        (
            "B4".to_string(),
            vec!["B124".into(), "B234".into(), "B134".into(), "P".into()],
        ),
    ];
    BaseDiagram3D {
        vertices,
        facets,
        excised_center: Vec3r::new(half, half, Rat::new(3, 2)),
        excised_radius: Rat::new(1, 4),
        branch_plane: BranchPlane {
            line_base: Vec3r::new(half, half, Rat::from_integer(0)),
            line_direction: [0, 0, 1],
            span_direction: [-1, -1, 0],
        },
        wall_upper: IntMat::from_rows(&[vec![2, -1, 0], vec![1, 0, 0], vec![0, 0, 1]])
            .expect("3x3"),
        wall_lower: IntMat::from_rows(&[vec![2, -1, 0], vec![1, 0, 0], vec![1, -1, 1]])
            .expect("3x3"),
        focus_rays: vec![
            Ray3 {
                base: Vec3r::new(half, half, Rat::from_integer(3)),
                direction: [0, 0, -1],
            },
            Ray3 {
                base: Vec3r::new(half, half, half),
                direction: [0, 0, 1],
            },
            Ray3 {
                base: Vec3r::new(Rat::from_integer(0), Rat::from_integer(0), Rat::new(3, 2)),
                direction: [1, 1, 0],
            },
        ],
    }
}

/// The reglued boundary facet as a standalone 2D diagram: quadrilateral
/// `(0,0), (1,0), (4,3), (-3,3)` with one node and a downward cut, as in
/// the printed figure.
pub fn paper_quadrilateral() -> AlmostToricDiagram2D {
    AlmostToricDiagram2D::new(
        vec![
            Vec2r::from_ints(0, 0),
            Vec2r::from_ints(1, 0),
            Vec2r::from_ints(4, 3),
            Vec2r::from_ints(-3, 3),
        ],
        vec![Node::new(Vec2r::from_ints(0, 1), [0, -1], Side::Right)],
        Vec::new(),
    )
    .expect("fixture is valid")
}

/// What the quadrilateral becomes after one mutation and a shear: the
/// rectangle `[0,4] x [0,3]` with the cut running from `(0,3)` toward
/// `(2,1)`.
pub fn mutation_target_rectangle() -> AlmostToricDiagram2D {
    AlmostToricDiagram2D::new(
        vec![
            Vec2r::from_ints(0, 0),
            Vec2r::from_ints(4, 0),
            Vec2r::from_ints(4, 3),
            Vec2r::from_ints(0, 3),
        ],
        vec![Node::new(Vec2r::from_ints(2, 1), [-1, 1], Side::Left)],
        Vec::new(),
    )
    .expect("fixture is valid")
}

/// Default analysis configuration (`c = -0.8`, stock tolerances).
pub fn default_negvertex_config() -> NegVertexConfig {
    NegVertexConfig::default()
}

/// All fixtures by name, as JSON values (used by the CLI and the schema
/// round-trip test).
pub fn all_named() -> Vec<(&'static str, serde_json::Value)> {
    let (atlas, generator) = cubic_surface_atlas();
    vec![
        (
            "k4-presentation",
            serde_json::to_value(pair_of_pants_presentation()).expect("serializable"),
        ),
        (
            "three-cycle-presentation",
            serde_json::to_value(three_cycle_presentation()).expect("serializable"),
        ),
        (
            "negative-vertex-presentation",
            serde_json::to_value(negative_vertex_presentation()).expect("serializable"),
        ),
        (
            "cubic-surface-atlas",
            serde_json::to_value(atlas).expect("serializable"),
        ),
        (
            "cubic-surface-loop",
            serde_json::to_value(generator).expect("serializable"),
        ),
        (
            "negative-vertex-diagram",
            serde_json::to_value(negative_vertex_diagram()).expect("serializable"),
        ),
        (
            "paper-quadrilateral",
            serde_json::to_value(paper_quadrilateral()).expect("serializable"),
        ),
        (
            "mutation-target-rectangle",
            serde_json::to_value(mutation_target_rectangle()).expect("serializable"),
        ),
        (
            "negvertex-config",
            serde_json::to_value(default_negvertex_config()).expect("serializable"),
        ),
    ]
}
