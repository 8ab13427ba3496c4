//! Integral affine atlases and loop monodromy.
//!
//! An atlas records top-dimensional cone charts (labelled `L`) and
//! codimension-one star charts (labelled `K`), each carrying a rank-`n`
//! lattice, together with `GL(n, Z)` transition matrices `beta(L, K)` for
//! incident pairs. Loops alternating star/cone charts pick up monodromy in
//! two conventions:
//!
//! - non-archimedean: `beta(L_m, K_0) . beta(L_m, K_{m-1})^-1 ... `
//!   `beta(L_1, K_1) . beta(L_1, K_0)^-1`,
//! - Lagrangian: the same traversal with each factor replaced by its
//!   inverse-transpose.
//!
//! The two representations always satisfy
//! `rho_nonarch = (rho_lagr^-1)^t`; `check_duality` recomputes both sides
//! from their own formulas and compares exactly.

use crate::linalg::IntMat;
use crate::par;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AtlasError {
    #[error("transition {0} -> {1} is not unimodular")]
    NotUnimodular(String, String),
    #[error("transition references unknown cell {0}")]
    UnknownCell(String),
    #[error("duplicate transition for ({0}, {1})")]
    DuplicateTransition(String, String),
    #[error("transition matrix for ({0}, {1}) has size {2}, atlas rank is {3}")]
    WrongSize(String, String, usize, usize),
    #[error("cone cell {0} is incident to no star cell")]
    IsolatedConeCell(String),
    #[error("loop word must have odd length and start/end at its base")]
    MalformedLoop,
    #[error("loop word visits {0} where a {1} cell is required")]
    BrokenAlternation(String, &'static str),
    #[error("loop word uses missing incidence ({0}, {1})")]
    MissingIncidence(String, String),
    #[error("loops have different base points")]
    BaseMismatch,
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Transition {
    #[serde(rename = "L")]
    pub cone: String,
    #[serde(rename = "K")]
    pub star: String,
    pub matrix: IntMat,
}

/// Chart lattices and transition matrices for the integral affine
/// structure on the complement of the codimension-two locus.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "AtlasJson", into = "AtlasJson")]
pub struct AffineAtlas {
    n: usize,
    cone_cells: Vec<String>,
    star_cells: Vec<String>,
    transitions: BTreeMap<(String, String), IntMat>,
}

#[derive(Serialize, Deserialize)]
struct AtlasJson {
    n: usize,
    cone_cells: Vec<String>,
    star_cells: Vec<String>,
    transitions: Vec<Transition>,
}

impl TryFrom<AtlasJson> for AffineAtlas {
    type Error = AtlasError;
    fn try_from(j: AtlasJson) -> Result<Self, AtlasError> {
        AffineAtlas::new(j.n, j.cone_cells, j.star_cells, j.transitions)
    }
}

impl From<AffineAtlas> for AtlasJson {
    fn from(a: AffineAtlas) -> AtlasJson {
        AtlasJson {
            n: a.n,
            cone_cells: a.cone_cells.clone(),
            star_cells: a.star_cells.clone(),
            transitions: a
                .transitions
                .iter()
                .map(|((l, k), m)| Transition {
                    cone: l.clone(),
                    star: k.clone(),
                    matrix: m.clone(),
                })
                .collect(),
        }
    }
}

impl AffineAtlas {
    pub fn new(
        n: usize,
        cone_cells: Vec<String>,
        star_cells: Vec<String>,
        transitions: Vec<Transition>,
    ) -> Result<Self, AtlasError> {
        let mut map = BTreeMap::new();
        for t in transitions {
            if !cone_cells.contains(&t.cone) {
                return Err(AtlasError::UnknownCell(t.cone));
            }
            if !star_cells.contains(&t.star) {
                return Err(AtlasError::UnknownCell(t.star));
            }
            if t.matrix.dim() != n {
                return Err(AtlasError::WrongSize(
                    t.cone,
                    t.star,
                    t.matrix.dim(),
                    n,
                ));
            }
            if !t.matrix.is_unimodular() {
                return Err(AtlasError::NotUnimodular(t.cone, t.star));
            }
            if map
                .insert((t.cone.clone(), t.star.clone()), t.matrix)
                .is_some()
            {
                return Err(AtlasError::DuplicateTransition(t.cone, t.star));
            }
        }
        for l in &cone_cells {
            if !map.keys().any(|(cl, _)| cl == l) {
                return Err(AtlasError::IsolatedConeCell(l.clone()));
            }
        }
        Ok(AffineAtlas {
            n,
            cone_cells,
            star_cells,
            transitions: map,
        })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn cone_cells(&self) -> &[String] {
        &self.cone_cells
    }

    pub fn star_cells(&self) -> &[String] {
        &self.star_cells
    }

    pub fn beta(&self, cone: &str, star: &str) -> Option<&IntMat> {
        self.transitions
            .get(&(cone.to_string(), star.to_string()))
    }

    fn is_star(&self, id: &str) -> bool {
        self.star_cells.iter().any(|s| s == id)
    }

    fn is_cone(&self, id: &str) -> bool {
        self.cone_cells.iter().any(|s| s == id)
    }
}

/// Loop through the atlas: an odd-length alternating sequence of cell IDs
/// `K_0, L_1, K_2, ..., L_{m-1}, K_m` with `K_m = K_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LoopWord {
    pub cells: Vec<String>,
}

impl LoopWord {
    pub fn new(cells: Vec<String>) -> Self {
        LoopWord { cells }
    }

    pub fn constant(base: &str) -> Self {
        LoopWord {
            cells: vec![base.to_string()],
        }
    }

    pub fn base(&self) -> Option<&str> {
        self.cells.first().map(|s| s.as_str())
    }

    pub fn validate(&self, atlas: &AffineAtlas) -> Result<(), AtlasError> {
        if self.cells.is_empty()
            || self.cells.len() % 2 == 0
            || self.cells.first() != self.cells.last()
        {
            return Err(AtlasError::MalformedLoop);
        }
        for (i, id) in self.cells.iter().enumerate() {
            if i % 2 == 0 {
                if !atlas.is_star(id) {
                    return Err(AtlasError::BrokenAlternation(id.clone(), "star"));
                }
            } else if !atlas.is_cone(id) {
                return Err(AtlasError::BrokenAlternation(id.clone(), "cone"));
            }
        }
        for w in self.cells.windows(2) {
            let (cone, star) = if atlas.is_cone(&w[0]) {
                (&w[0], &w[1])
            } else {
                (&w[1], &w[0])
            };
            if atlas.beta(cone, star).is_none() {
                return Err(AtlasError::MissingIncidence(cone.clone(), star.clone()));
            }
        }
        Ok(())
    }

    /// Concatenation of two loops at the same base.
    pub fn concat(&self, other: &LoopWord) -> Result<LoopWord, AtlasError> {
        if self.base() != other.base() {
            return Err(AtlasError::BaseMismatch);
        }
        let mut cells = self.cells.clone();
        cells.extend_from_slice(&other.cells[1..]);
        Ok(LoopWord { cells })
    }

    pub fn reversed(&self) -> LoopWord {
        let mut cells = self.cells.clone();
        cells.reverse();
        LoopWord { cells }
    }
}

/// Monodromy of a loop: an integer matrix with determinant +/-1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MonodromyMatrix(pub IntMat);

impl MonodromyMatrix {
    pub fn matrix(&self) -> &IntMat {
        &self.0
    }
}

fn traverse<F>(atlas: &AffineAtlas, gamma: &LoopWord, factor: F) -> Result<MonodromyMatrix, AtlasError>
where
    F: Fn(&IntMat, &IntMat) -> Result<IntMat, AtlasError>,
{
    gamma.validate(atlas)?;
    let mut acc = IntMat::identity(atlas.n);
    let steps = (gamma.cells.len() - 1) / 2;
    for s in 0..steps {
        let prev_star = &gamma.cells[2 * s];
        let cone = &gamma.cells[2 * s + 1];
        let next_star = &gamma.cells[2 * s + 2];
        let into = atlas.beta(cone, prev_star).expect("validated incidence");
        let out = atlas.beta(cone, next_star).expect("validated incidence");
        let f = factor(out, into)?;
        acc = f.mul(&acc)?;
    }
    Ok(MonodromyMatrix(acc))
}

/// Monodromy in the non-archimedean convention: each step across a cone
/// chart contributes `beta(L, K_next) . beta(L, K_prev)^-1`, factors
/// composed along the loop.
pub fn monodromy_nonarch(
    atlas: &AffineAtlas,
    gamma: &LoopWord,
) -> Result<MonodromyMatrix, AtlasError> {
    traverse(atlas, gamma, |out, into| {
        Ok(out.mul(&into.inverse_unimodular()?)?)
    })
}

/// Monodromy in the Lagrangian convention: each step contributes
/// `(beta(L, K_next)^-1)^t . beta(L, K_prev)^t`.
pub fn monodromy_lagr(
    atlas: &AffineAtlas,
    gamma: &LoopWord,
) -> Result<MonodromyMatrix, AtlasError> {
    traverse(atlas, gamma, |out, into| {
        Ok(out.inverse_unimodular()?.transpose().mul(&into.transpose())?)
    })
}

/// `rho_nonarch = (rho_lagr^-1)^t`, recomputing both sides independently.
/// A `false` here means an implementation bug, not a property of the input.
pub fn check_duality(atlas: &AffineAtlas, gamma: &LoopWord) -> Result<bool, AtlasError> {
    let na = monodromy_nonarch(atlas, gamma)?;
    let lagr = monodromy_lagr(atlas, gamma)?;
    let dual = lagr.0.inverse_unimodular()?.transpose();
    Ok(na.0 == dual)
}

/// Bounded search for a conjugator: a matrix `C` with entries in
/// `[-bound, bound]`, `det C = +/-1` and `C A = B C`. Cost grows as
/// `(2 bound + 1)^(n^2)`; intended for the rank-2 atlases where base-point
/// changes are certified.
pub fn conjugate_witness(a: &IntMat, b: &IntMat, bound: i64) -> Option<IntMat> {
    let n = a.dim();
    if b.dim() != n {
        return None;
    }
    let mut entries = vec![-bound; n * n];
    loop {
        let c = IntMat::from_rows(
            &entries
                .chunks(n)
                .map(|r| r.to_vec())
                .collect::<Vec<_>>(),
        )
        .expect("square by construction");
        if c.is_unimodular() {
            if let (Ok(ca), Ok(bc)) = (c.mul(a), b.mul(&c)) {
                if ca == bc {
                    return Some(c);
                }
            }
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == entries.len() {
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

/// Atlas of a cycle of rational curves, the `K`-th carrying the total
/// space of `O(d_K)` as its toric neighbourhood. Cone cells sit between
/// consecutive curves in the cycle. Chart conventions: the lattice of the
/// cone cell between `K_i` and `K_{i+1}` uses the (base, fibre) coordinates
/// of `K_i` at its far end, so `beta(L_i, K_i) = [[-1, 0], [-d_i, 1]]`
/// (fan chart at the far pole) and `beta(L_i, K_{i+1})` is the coordinate
/// swap. Returns the atlas together with the generator loop based at `K0`.
pub fn line_bundle_cycle(degrees: &[i64]) -> (AffineAtlas, LoopWord) {
    let m = degrees.len();
    assert!(m >= 2, "a cycle needs at least two curves");
    let stars: Vec<String> = (0..m).map(|i| format!("K{i}")).collect();
    let cones: Vec<String> = (0..m).map(|i| format!("L{i}")).collect();
    let swap = IntMat::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
    let mut transitions = Vec::new();
    for i in 0..m {
        let far = IntMat::from_rows(&[vec![-1, 0], vec![-degrees[i], 1]]).unwrap();
        transitions.push(Transition {
            cone: cones[i].clone(),
            star: stars[i].clone(),
            matrix: far,
        });
        transitions.push(Transition {
            cone: cones[i].clone(),
            star: stars[(i + 1) % m].clone(),
            matrix: swap.clone(),
        });
    }
    let atlas = AffineAtlas::new(2, cones.clone(), stars.clone(), transitions)
        .expect("cycle atlas is valid by construction");
    let mut cells = Vec::with_capacity(2 * m + 1);
    for i in 0..m {
        cells.push(stars[i].clone());
        cells.push(cones[i].clone());
    }
    cells.push(stars[0].clone());
    (atlas, LoopWord::new(cells))
}

/// The boundary-of-a-cubic-surface atlas: three rational curves of
/// self-intersection -1 in a cycle. The generator loop has monodromy
/// `-id` in both conventions.
pub fn cubic_surface_atlas() -> (AffineAtlas, LoopWord) {
    line_bundle_cycle(&[-1, -1, -1])
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, steps: usize) -> IntMat {
    let mut m = IntMat::identity(n);
    for _ in 0..steps {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n);
        while j == i && n > 1 {
            j = rng.random_range(0..n);
        }
        if n == 1 {
            continue;
        }
        let mut t = IntMat::identity(n);
        t.set(i, j, if rng.random_bool(0.5) { 1 } else { -1 });
        m = m.mul(&t).expect("small entries");
    }
    if rng.random_bool(0.25) {
        let mut f = IntMat::identity(n);
        f.set(0, 0, -1);
        m = m.mul(&f).expect("small entries");
    }
    m
}

/// Seeded random atlas: a backbone cycle of star cells with extra chord
/// cone cells and random unimodular transitions. Also returns a random
/// nontrivial loop based at `K0`.
pub fn random_atlas(seed: u64, max_rank: usize, max_cells: usize) -> (AffineAtlas, LoopWord) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_rank.max(1));
    let s = rng.random_range(2..=4usize);
    let extra = rng.random_range(0..=max_cells.saturating_sub(2 * s).min(3));
    let stars: Vec<String> = (0..s).map(|i| format!("K{i}")).collect();
    let mut cones: Vec<String> = (0..s).map(|i| format!("L{i}")).collect();
    // cone i joins stars i and i+1 (mod s); chords join random distinct stars
    let mut ends: Vec<(usize, usize)> = (0..s).map(|i| (i, (i + 1) % s)).collect();
    for e in 0..extra {
        let a = rng.random_range(0..s);
        let mut b = rng.random_range(0..s);
        while b == a {
            b = rng.random_range(0..s);
        }
        cones.push(format!("C{e}"));
        ends.push((a, b));
    }
    let mut transitions = Vec::new();
    for (idx, cone) in cones.iter().enumerate() {
        let (a, b) = ends[idx];
        for star_idx in [a, b] {
            transitions.push(Transition {
                cone: cone.clone(),
                star: stars[star_idx].clone(),
                matrix: random_unimodular(&mut rng, n, 4),
            });
        }
    }
    let atlas = AffineAtlas::new(n, cones.clone(), stars.clone(), transitions)
        .expect("random atlas is valid by construction");

    // random walk, then close up along the backbone
    let mut cells = vec![stars[0].clone()];
    let mut cur = 0usize;
    let hops = rng.random_range(1..=4usize);
    for _ in 0..hops {
        let incident: Vec<usize> = ends
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a == cur || b == cur)
            .map(|(i, _)| i)
            .collect();
        let pick = incident[rng.random_range(0..incident.len())];
        let (a, b) = ends[pick];
        let next = if a == cur { b } else { a };
        cells.push(cones[pick].clone());
        cells.push(stars[next].clone());
        cur = next;
    }
    while cur != 0 {
        cells.push(cones[cur].clone()); // backbone cone from cur to cur+1
        cur = (cur + 1) % s;
        cells.push(stars[cur].clone());
    }
    (atlas, LoopWord::new(cells))
}

/// Outcome of a randomized duality/functoriality sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityFuzzReport {
    pub atlases: usize,
    pub duality_failures: usize,
    pub functoriality_failures: usize,
    pub determinant_failures: usize,
}

impl DualityFuzzReport {
    pub fn all_hold(&self) -> bool {
        self.duality_failures == 0
            && self.functoriality_failures == 0
            && self.determinant_failures == 0
    }
}

fn fuzz_one(seed: u64, max_rank: usize, max_cells: usize) -> (bool, bool, bool) {
    let (atlas, gamma) = random_atlas(seed, max_rank, max_cells);
    let round_trip = gamma.concat(&gamma.reversed()).expect("same base");
    let duality_ok = check_duality(&atlas, &gamma).unwrap_or(false)
        && check_duality(&atlas, &round_trip).unwrap_or(false);

    let na = monodromy_nonarch(&atlas, &gamma).expect("valid loop");
    let lagr = monodromy_lagr(&atlas, &gamma).expect("valid loop");
    let det_ok = na.0.is_unimodular() && lagr.0.is_unimodular();

    // functoriality: concatenation composes (later loop acts on the left),
    // reversal inverts, constant loop is the identity
    let both = gamma.concat(&gamma).expect("same base");
    let na_both = monodromy_nonarch(&atlas, &both).expect("valid loop");
    let comp = na.0.mul(&na.0).expect("bounded entries");
    let rev = gamma.reversed();
    let na_rev = monodromy_nonarch(&atlas, &rev).expect("valid loop");
    let inv = na.0.inverse_unimodular().expect("unimodular");
    let constant = LoopWord::constant(gamma.base().expect("nonempty"));
    let na_const = monodromy_nonarch(&atlas, &constant).expect("valid loop");
    let functorial_ok = na_both.0 == comp
        && na_rev.0 == inv
        && na_const.0 == IntMat::identity(atlas.rank());

    (duality_ok, functorial_ok, det_ok)
}

fn tally(results: Vec<(bool, bool, bool)>) -> DualityFuzzReport {
    let mut report = DualityFuzzReport {
        atlases: results.len(),
        duality_failures: 0,
        functoriality_failures: 0,
        determinant_failures: 0,
    };
    for (d, f, dt) in results {
        if !d {
            report.duality_failures += 1;
        }
        if !f {
            report.functoriality_failures += 1;
        }
        if !dt {
            report.determinant_failures += 1;
        }
    }
    report
}

/// Check duality and functoriality on `count` seeded random atlases.
pub fn duality_fuzz(count: usize, seed: u64, max_rank: usize, max_cells: usize) -> DualityFuzzReport {
    let seeds: Vec<u64> = (0..count as u64).map(|i| seed.wrapping_add(i)).collect();
    tally(par::map(&seeds, |&s| fuzz_one(s, max_rank, max_cells)))
}

/// Sequential variant of [`duality_fuzz`].
pub fn duality_fuzz_seq(
    count: usize,
    seed: u64,
    max_rank: usize,
    max_cells: usize,
) -> DualityFuzzReport {
    let seeds: Vec<u64> = (0..count as u64).map(|i| seed.wrapping_add(i)).collect();
    tally(par::map_seq(&seeds, |&s| fuzz_one(s, max_rank, max_cells)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_loop_is_identity() {
        let (atlas, gamma) = cubic_surface_atlas();
        let base = gamma.base().unwrap();
        let c = LoopWord::constant(base);
        let na = monodromy_nonarch(&atlas, &c).unwrap();
        assert_eq!(na.0, IntMat::identity(2));
        let lagr = monodromy_lagr(&atlas, &c).unwrap();
        assert_eq!(lagr.0, IntMat::identity(2));
    }

    #[test]
    fn cubic_surface_generator_is_minus_id() {
        let (atlas, gamma) = cubic_surface_atlas();
        let minus_id = IntMat::from_rows(&[vec![-1, 0], vec![0, -1]]).unwrap();
        let na = monodromy_nonarch(&atlas, &gamma).unwrap();
        assert_eq!(na.0, minus_id);
        let lagr = monodromy_lagr(&atlas, &gamma).unwrap();
        assert_eq!(lagr.0, minus_id);
        assert!(check_duality(&atlas, &gamma).unwrap());
        // conjugate to -id, witnessed (here by the identity)
        let w = conjugate_witness(&na.0, &minus_id, 5).unwrap();
        assert!(w.is_unimodular());
    }

    #[test]
    fn projective_plane_pattern_closes_up() {
        // toric boundary of the projective plane: three +1-curves; the fan
        // is complete so the cycle monodromy is trivial
        let (atlas, gamma) = line_bundle_cycle(&[1, 1, 1]);
        let na = monodromy_nonarch(&atlas, &gamma).unwrap();
        assert_eq!(na.0, IntMat::identity(2));
    }

    #[test]
    fn reversal_gives_inverse() {
        let (atlas, gamma) = cubic_surface_atlas();
        let forward = monodromy_nonarch(&atlas, &gamma).unwrap();
        let back = monodromy_nonarch(&atlas, &gamma.reversed()).unwrap();
        assert_eq!(
            forward.0.mul(&back.0).unwrap(),
            IntMat::identity(2)
        );
        let round = gamma.concat(&gamma.reversed()).unwrap();
        let na = monodromy_nonarch(&atlas, &round).unwrap();
        assert_eq!(na.0, IntMat::identity(2));
    }

    #[test]
    fn broken_loops_rejected() {
        let (atlas, gamma) = cubic_surface_atlas();
        // even-length word
        let mut cells = gamma.cells.clone();
        cells.pop();
        assert!(matches!(
            monodromy_nonarch(&atlas, &LoopWord::new(cells)),
            Err(AtlasError::MalformedLoop)
        ));
        // star where a cone should be
        let bad = LoopWord::new(vec!["K0".into(), "K1".into(), "K0".into()]);
        assert!(matches!(
            monodromy_nonarch(&atlas, &bad),
            Err(AtlasError::BrokenAlternation(..))
        ));
        // missing incidence: L0 joins K0, K1 only
        let bad = LoopWord::new(vec![
            "K2".into(),
            "L0".into(),
            "K2".into(),
        ]);
        assert!(matches!(
            monodromy_nonarch(&atlas, &bad),
            Err(AtlasError::MissingIncidence(..))
        ));
    }

    #[test]
    fn duality_on_seeded_atlases() {
        let report = duality_fuzz(50, 7, 4, 12);
        assert!(report.all_hold(), "{report:?}");
        let seq = duality_fuzz_seq(50, 7, 4, 12);
        assert_eq!(report, seq);
    }

    #[test]
    fn conjugate_witness_finds_nontrivial_conjugator() {
        // B = C A C^-1 with C = [[1,1],[0,1]]
        let a = IntMat::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let c = IntMat::from_rows(&[vec![1, 0], vec![1, 1]]).unwrap();
        let b = c
            .mul(&a)
            .unwrap()
            .mul(&c.inverse_unimodular().unwrap())
            .unwrap();
        let w = conjugate_witness(&a, &b, 3).expect("conjugator exists");
        let lhs = w.mul(&a).unwrap();
        let rhs = b.mul(&w).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn conjugate_witness_respects_bound() {
        let a = IntMat::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let b = IntMat::from_rows(&[vec![1, -1], vec![0, 1]]).unwrap();
        // conjugate via diag(1, -1), which is within any bound >= 1
        assert!(conjugate_witness(&a, &b, 1).is_some());
        // not conjugate to the identity at all
        let id = IntMat::identity(2);
        assert!(conjugate_witness(&a, &id, 2).is_none());
    }

    #[test]
    fn atlas_validation() {
        let bad = AffineAtlas::new(
            2,
            vec!["L0".into()],
            vec!["K0".into()],
            vec![Transition {
                cone: "L0".into(),
                star: "K0".into(),
                matrix: IntMat::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap(),
            }],
        );
        assert!(matches!(bad, Err(AtlasError::NotUnimodular(..))));
        let isolated = AffineAtlas::new(2, vec!["L0".into()], vec!["K0".into()], vec![]);
        assert!(matches!(isolated, Err(AtlasError::IsolatedConeCell(..))));
    }

    #[test]
    fn atlas_json_round_trip() {
        let (atlas, _) = cubic_surface_atlas();
        let s = serde_json::to_string(&atlas).unwrap();
        let back: AffineAtlas = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
