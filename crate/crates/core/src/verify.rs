//! End-to-end verification of every worked example in one report: each
//! item pins its tolerances and thresholds in code, measures its runtime,
//! and explains what it measured. The CLI exposes this as
//! `fibrations verify-paper`; the acceptance test suite asserts every item
//! passes inside its time budget.

use crate::atbd::{self, Wall};
use crate::atlas;
use crate::complex::build_dual_complex;
use crate::evalmap::{self, LocalModel};
use crate::fixtures;
use crate::group::{self, FreeWord};
use crate::linalg::IntMat;
use crate::negvertex::{self, NegVertexConfig};
use crate::render;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ItemReport {
    pub name: String,
    pub passed: bool,
    pub details: String,
    pub elapsed_ms: f64,
    pub budget_ms: f64,
}

impl ItemReport {
    pub fn within_budget(&self) -> bool {
        self.elapsed_ms < self.budget_ms
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyReport {
    pub items: Vec<ItemReport>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }
}

/// Inputs for the verification run, factored out so tests can inject a
/// corrupted fixture and watch the right item fail.
#[derive(Clone, Debug)]
pub struct VerifyInputs {
    pub diagram3d: atbd::BaseDiagram3D,
    pub quadrilateral: atbd::AlmostToricDiagram2D,
    pub target: atbd::AlmostToricDiagram2D,
    pub config: NegVertexConfig,
}

impl Default for VerifyInputs {
    fn default() -> Self {
        VerifyInputs {
            diagram3d: fixtures::negative_vertex_diagram(),
            quadrilateral: fixtures::paper_quadrilateral(),
            target: fixtures::mutation_target_rectangle(),
            config: fixtures::default_negvertex_config(),
        }
    }
}

pub fn run() -> VerifyReport {
    run_with(&VerifyInputs::default())
}

pub fn run_with(inputs: &VerifyInputs) -> VerifyReport {
    let items = vec![
        item("dual-complex-cohomology", 100.0, check_cohomology),
        item("monodromy-duality", 5_000.0, check_monodromy_duality),
        item("cubic-surface-monodromy", 1_000.0, check_cubic_surface),
        item_with("negative-vertex-3d", 100.0, inputs, check_negative_vertex_3d),
        item_with("mutation-equivalence", 1_000.0, inputs, check_mutation),
        item_with("negvertex-analytics", 2_000.0, inputs, check_negvertex_analytics),
        item("group-theory", 10_000.0, check_group_theory),
        item("evaluation-map", 10_000.0, check_evaluation_map),
        item("rendering-determinism", 5_000.0, check_rendering),
    ];
    VerifyReport { items }
}

fn item(name: &str, budget_ms: f64, f: fn() -> Result<String, String>) -> ItemReport {
    let start = Instant::now();
    let outcome = f();
    finish(name, budget_ms, start, outcome)
}

fn item_with(
    name: &str,
    budget_ms: f64,
    inputs: &VerifyInputs,
    f: fn(&VerifyInputs) -> Result<String, String>,
) -> ItemReport {
    let start = Instant::now();
    let outcome = f(inputs);
    finish(name, budget_ms, start, outcome)
}

fn finish(
    name: &str,
    budget_ms: f64,
    start: Instant,
    outcome: Result<String, String>,
) -> ItemReport {
    let elapsed_ms = start.elapsed().as_secs_f64() * 1_000.0;
    let (passed, details) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    ItemReport {
        name: name.to_string(),
        passed,
        details,
        elapsed_ms,
        budget_ms,
    }
}

fn ensure(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn check_cohomology() -> Result<String, String> {
    let k4 = build_dual_complex(&fixtures::pair_of_pants_presentation())
        .map_err(|e| e.to_string())?;
    let b1 = k4.betti(1);
    ensure(b1 == 3, &format!("K4 first Betti number is {b1}, expected 3"))?;
    ensure(k4.betti(0) == 1, "K4 should be connected")?;
    let cyc = build_dual_complex(&fixtures::three_cycle_presentation())
        .map_err(|e| e.to_string())?;
    let b1c = cyc.betti(1);
    ensure(b1c == 1, &format!("3-cycle b1 is {b1c}, expected 1"))?;
    Ok(format!("b1(K4) = {b1}, b1(3-cycle) = {b1c}, exact ranks"))
}

fn check_monodromy_duality() -> Result<String, String> {
    let report = atlas::duality_fuzz(1000, 0, 4, 12);
    ensure(
        report.all_hold(),
        &format!("duality/functoriality failures: {report:?}"),
    )?;
    Ok(format!(
        "{} random atlases: duality, concatenation, reversal, determinants all exact",
        report.atlases
    ))
}

fn check_cubic_surface() -> Result<String, String> {
    let (atlas_data, generator) = fixtures::cubic_surface_atlas();
    let na = atlas::monodromy_nonarch(&atlas_data, &generator).map_err(|e| e.to_string())?;
    let lagr = atlas::monodromy_lagr(&atlas_data, &generator).map_err(|e| e.to_string())?;
    let minus_id = IntMat::from_rows(&[vec![-1, 0], vec![0, -1]]).expect("2x2");
    let witness = atlas::conjugate_witness(lagr.matrix(), &minus_id, 5)
        .ok_or("no conjugator to -id within entry bound 5")?;
    let dual = atlas::check_duality(&atlas_data, &generator).map_err(|e| e.to_string())?;
    ensure(dual, "duality identity failed on the cubic-surface loop")?;
    Ok(format!(
        "lagrangian monodromy {:?} conjugate to -id via {:?}; nonarch {:?}",
        lagr.matrix().rows(),
        witness.rows(),
        na.matrix().rows()
    ))
}

fn check_negative_vertex_3d(inputs: &VerifyInputs) -> Result<String, String> {
    let d = &inputs.diagram3d;
    d.validate().map_err(|e| e.to_string())?;
    // exact integer wall checks, straight across the paper's two bullets
    let m1 = d.wall_matrix(Wall::Upper);
    let m2 = d.wall_matrix(Wall::Lower);
    ensure(
        m1.mul_vec(&[0, -1, 0].to_vec()).map_err(|e| e.to_string())? == vec![1, 0, 0],
        "upper wall does not map (0,-1,0) to (1,0,0)",
    )?;
    ensure(
        m2.mul_vec(&[0, -1, -1].to_vec()).map_err(|e| e.to_string())? == vec![1, 0, 0],
        "lower wall does not map (0,-1,-1) to (1,0,0)",
    )?;
    ensure(
        d.check_edge_colinearity(("B124", "Q"), ("Q", "B123"), Wall::Upper)
            .map_err(|e| e.to_string())?,
        "edge pair across the upper wall is not straight",
    )?;
    ensure(
        d.check_edge_colinearity(("B124", "P"), ("P", "B134"), Wall::Lower)
            .map_err(|e| e.to_string())?,
        "edge pair across the lower wall is not straight",
    )?;
    let b3 = d.facet_extract("B3").map_err(|e| e.to_string())?;
    ensure(b3.polygon.len() == 3, "B3 is not a triangle")?;
    for i in 0..3 {
        let a = b3.polygon[i];
        let b = b3.polygon[(i + 1) % 3];
        let len = atbd::affine_length(
            &[a.x.to_integer(), a.y.to_integer()],
            &[b.x.to_integer(), b.y.to_integer()],
        );
        ensure(len == 3, &format!("B3 edge {i} has affine length {len}"))?;
    }
    let b2 = d.facet_extract("B2").map_err(|e| e.to_string())?;
    ensure(
        b2.nodes.len() == 1,
        &format!("B2 has {} nodes, expected 1", b2.nodes.len()),
    )?;
    let b4 = d.facet_extract("B4").map_err(|e| e.to_string())?;
    ensure(
        b4.nodes.len() == 1,
        &format!("B4 has {} nodes, expected 1", b4.nodes.len()),
    )?;
    let union = d
        .facet_extract_reglued("B1p", "B1", Wall::Upper)
        .map_err(|e| e.to_string())?;
    ensure(
        union.polygon.len() == 4 && union.nodes.len() == 1,
        "reglued boundary facet is not a quadrilateral with one node",
    )?;
    Ok("wall identities exact; B3 triangle side 3; B2, B4 one node each; reglued facet ok".into())
}

fn check_mutation(inputs: &VerifyInputs) -> Result<String, String> {
    let d = &inputs.quadrilateral;
    let before = d.lattice_stats().map_err(|e| e.to_string())?;
    ensure(
        before.area == crate::linalg::Rat::from_integer(12),
        "fixture area is not 12",
    )?;
    ensure(before.pick_identity_holds(), "Pick identity fails before")?;
    let mutated = d.mutate(0).map_err(|e| e.to_string())?;
    let after = mutated.lattice_stats().map_err(|e| e.to_string())?;
    ensure(before == after, "mutation changed the lattice statistics")?;
    ensure(after.pick_identity_holds(), "Pick identity fails after")?;
    let target = &inputs.target;
    let (m, t) = mutated
        .equivalent_to(target, 6)
        .ok_or("no integral affine map onto the rectangle within bound 6")?;
    let sheared = mutated.shear(&m, t).map_err(|e| e.to_string())?;
    ensure(
        sheared.same_shape(target),
        "discovered shear does not produce the rectangle",
    )?;
    let final_stats = sheared.lattice_stats().map_err(|e| e.to_string())?;
    ensure(final_stats == before, "shear changed the lattice statistics")?;
    Ok(format!(
        "mutation + shear {:?}, {:?} reproduces the rectangle; area {} and lattice stats preserved",
        m.rows(),
        t,
        before.area
    ))
}

fn check_negvertex_analytics(inputs: &VerifyInputs) -> Result<String, String> {
    let cfg = inputs.config;
    let report = negvertex::critical_points(&cfg).map_err(|e| e.to_string())?;
    // P1 exact
    let p1 = report.p1;
    ensure(
        p1.big_x == 0.0
            && p1.big_y == 0.0
            && (p1.r1 + std::f64::consts::LN_2).abs() < 1e-15
            && (p1.r2 + std::f64::consts::LN_2).abs() < 1e-15,
        "P1 is not (0, 0, -1/2, -1/2)",
    )?;
    // P2, P3 solve both curve equations to 1e-9, and P3 swaps P2
    let (a, b) = (report.a, report.b);
    ensure(
        (a.exp() + 1.0 - b.exp()).abs() < 1e-9,
        "first curve equation fails",
    )?;
    let lhs = (a - cfg.c) * (-(a - cfg.c)).exp();
    let rhs = -(b - cfg.c) * (-(b - cfg.c)).exp();
    ensure((lhs - rhs).abs() < 1e-9, "second curve equation fails")?;
    ensure(
        report.p3.r1 == report.p2.r2 && report.p3.r2 == report.p2.r1,
        "P3 is not the swap of P2",
    )?;
    // circle points at 16 phases: all equations + constraint to 1e-9
    for k in 0..16 {
        let alpha = std::f64::consts::TAU * k as f64 / 16.0;
        let p = negvertex::circle_point(&cfg, alpha).map_err(|e| e.to_string())?;
        let res = negvertex::residuals(&p, 1.0, 0.0, &cfg);
        ensure(
            res.max() < 1e-9,
            &format!("circle residual {} at phase {k}", res.max()),
        )?;
    }
    ensure(report.phi_pi_excluded, "Phi = pi solutions not excluded")?;
    ensure(
        report.max_residual() < 1e-9,
        &format!("max critical-point residual {}", report.max_residual()),
    )?;
    // Lambert W identity on a 100-point grid
    for i in 0..100 {
        let x = i as f64 * 0.2;
        let w = negvertex::lambert_w(x).map_err(|e| e.to_string())?;
        ensure(
            (w * w.exp() - x).abs() <= 1e-12 * x.max(1.0),
            &format!("Lambert identity fails at {x}"),
        )?;
    }
    // sweep over 30 constants
    let values: Vec<f64> = (0..30).map(|i| -0.99 + 0.29 * i as f64 / 29.0).collect();
    let worst = negvertex::sweep_c(&values).map_err(|e| e.to_string())?;
    ensure(worst < 1e-9, &format!("sweep residual {worst}"))?;
    Ok(format!(
        "P1 exact; (a, b) = ({a:.6}, {b:.6}); circle radius {:.6}; sweep worst residual {worst:.2e}",
        report.circle_radius
    ))
}

fn check_group_theory() -> Result<String, String> {
    let commutator = group::commutator_ab();
    ensure(
        group::is_proper_power(&commutator)
            .map_err(|e| e.to_string())?
            .is_none(),
        "the commutator must not be a proper power",
    )?;
    // agreement with the forward-enumeration oracle on all words <= 8
    let oracle = group::proper_power_oracle_table(2, 8);
    let mut checked = 0usize;
    for word in group::reduced_words_up_to(2, 8) {
        if word.is_empty() {
            continue;
        }
        let got = group::is_proper_power(&word).map_err(|e| e.to_string())?;
        match (got, oracle.get(&word)) {
            (None, None) => {}
            (Some((root, k)), Some(&k_oracle)) => {
                if k != k_oracle || group::reduce(&root.pow(k as i64)) != word {
                    return Err(format!("oracle mismatch on {word}"));
                }
            }
            (got, want) => {
                return Err(format!("oracle mismatch on {word}: {got:?} vs {want:?}"))
            }
        }
        checked += 1;
    }
    let ab = group::abelianization(&group::Presentation::new(2, vec![commutator]));
    ensure(
        ab.free_rank == 2 && ab.torsion.is_empty(),
        &format!("abelianization of the one-relator commutator group is {ab:?}"),
    )?;
    // SNF property test on 500 seeded random matrices
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for trial in 0..500 {
        let r = rng.random_range(1..=6);
        let c = rng.random_range(1..=6);
        let m: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| rng.random_range(-20..=20)).collect())
            .collect();
        let snf = group::smith_normal_form(&m);
        if !snf.verify() {
            return Err(format!("SNF verification failed on trial {trial}: {m:?}"));
        }
    }
    Ok(format!(
        "{checked} reduced words agree with the oracle; abelianization = Z^2; 500 SNF decompositions verified"
    ))
}

fn check_evaluation_map() -> Result<String, String> {
    for n in [2usize, 3] {
        let m = LocalModel::with_dimension(n).map_err(|e| e.to_string())?;
        // exact simplex sums and open-cell membership for samples from
        // each open piece (10^4 from each subset of size >= 2)
        let subsets: Vec<Vec<usize>> = match n {
            2 => vec![vec![0, 1]],
            _ => vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]],
        };
        for j in &subsets {
            let pts = evalmap::link_sample_in_piece(&m, j, 10_000, 0)
                .map_err(|e| e.to_string())?;
            for z in &pts {
                let sp = evalmap::chi(&m, z).map_err(|e| e.to_string())?;
                if sp.sum() != 1.0 {
                    return Err(format!("simplex sum {} is not exactly 1", sp.sum()));
                }
                if sp.support() != *j {
                    return Err(format!(
                        "sample in piece {j:?} lands in cell {:?}",
                        sp.support()
                    ));
                }
            }
        }
        // Poisson brackets at 10^3 points with the canonical control
        let worst = evalmap::poisson_batch(&m, 1_000, 0).map_err(|e| e.to_string())?;
        if worst >= 1e-6 {
            return Err(format!("worst Poisson bracket {worst} at n = {n}"));
        }
        let control =
            evalmap::poisson_control(&[evalmap::Complex::new(0.4, 0.3), evalmap::Complex::new(0.2, 0.9)]);
        if (control - 1.0).abs() > 0.01 {
            return Err(format!("canonical-pair control {control}"));
        }
    }
    // fullness: edge cell on a 20-cell grid, triangle cell on a grid of
    // comparable size
    let m2 = LocalModel::with_dimension(2).map_err(|e| e.to_string())?;
    let edge_coverage =
        evalmap::fullness_check(&m2, &[0, 1], 20, 10_000, 0).map_err(|e| e.to_string())?;
    ensure(
        edge_coverage >= 0.95,
        &format!("edge coverage {edge_coverage}"),
    )?;
    let m3 = LocalModel::with_dimension(3).map_err(|e| e.to_string())?;
    let tri_coverage =
        evalmap::fullness_check(&m3, &[0, 1, 2], 4, 10_000, 0).map_err(|e| e.to_string())?;
    ensure(
        tri_coverage >= 0.95,
        &format!("triangle coverage {tri_coverage}"),
    )?;
    Ok(format!(
        "simplex sums exact; open cells respected; brackets < 1e-6 with unit control; coverage {edge_coverage:.3} / {tri_coverage:.3}"
    ))
}

fn check_rendering() -> Result<String, String> {
    let d = build_dual_complex(&fixtures::pair_of_pants_presentation())
        .map_err(|e| e.to_string())?;
    let a = render::render_dual_complex(&d);
    let b = render::render_dual_complex(&d);
    ensure(a.as_bytes() == b.as_bytes(), "dual-complex SVG not deterministic")?;
    let q = fixtures::paper_quadrilateral();
    let a = render::render_diagram2d(&q);
    let b = render::render_diagram2d(&q);
    ensure(a.as_bytes() == b.as_bytes(), "diagram SVG not deterministic")?;
    let cfg = fixtures::default_negvertex_config();
    let a = render::amoeba_figure(&cfg, 100, 4.0).map_err(|e| e.to_string())?;
    let b = render::amoeba_figure(&cfg, 100, 4.0).map_err(|e| e.to_string())?;
    ensure(a.as_bytes() == b.as_bytes(), "amoeba SVG not deterministic")?;
    ensure(a.contains("(-ln2, -ln2)"), "amoeba SVG misses the marked point")?;
    Ok(format!(
        "three renderings byte-identical across runs ({} bytes of amoeba figure)",
        a.len()
    ))
}

/// Free-word helper for documentation examples in the CLI.
pub fn parse_word(s: &str) -> Result<FreeWord, String> {
    FreeWord::parse(s).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_run_passes() {
        let report = run();
        for item in &report.items {
            assert!(item.passed, "{}: {}", item.name, item.details);
        }
    }

    #[test]
    fn corrupted_wall_matrix_fails_the_3d_item() {
        let mut inputs = VerifyInputs::default();
        inputs.diagram3d.wall_upper =
            IntMat::from_rows(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let report = run_with(&inputs);
        let item = report
            .items
            .iter()
            .find(|i| i.name == "negative-vertex-3d")
            .unwrap();
        assert!(!item.passed, "corrupted wall matrix must fail");
        assert!(!report.all_passed());
    }

    #[test]
    fn report_serializes() {
        let report = VerifyReport {
            items: vec![ItemReport {
                name: "x".into(),
                passed: true,
                details: "d".into(),
                elapsed_ms: 1.0,
                budget_ms: 2.0,
            }],
        };
        let s = serde_json::to_string(&report).unwrap();
        let back: VerifyReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.items.len(), 1);
    }
}
