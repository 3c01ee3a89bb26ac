//! Voronoi complexes for truncated orbit sets: orbit enumeration under a
//! word-length cap, per-site cells as reduced bisector intersections, shared
//! 2-face bookkeeping, valence of 1-faces, weak simplicity, random
//! perturbation to genericity, and the concyclicity degeneracy scan.

use crate::hyperbolic::{
    apply, bisector_halfspace, chordal_gap, dist, is_degenerate_quadruple, HalfSpace, KernelError,
    LorentzIsometry, MinkowskiPoint, TAU_GEOM,
};
use crate::polytope::{self, ConvexPolyhedron, PolytopeError};
use nalgebra::{Vector3, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use thiserror::Error;

/// Klein-coordinate tolerance for identifying the same geometric feature
/// seen from two different cells' lattices.
const MATCH_TOL: f64 = 1e-6;

/// Orbit sizes beyond this make the quadruple scan intractable at desk scale.
pub const SCAN_MAX_POINTS: usize = 64;

#[derive(Debug, Clone, Error)]
pub enum VoronoiError {
    #[error("need at least 2 distinct orbit points, got {0}")]
    TooFewSites(usize),
    #[error("orbit has {n} points; the quadruple scan is capped at {max}")]
    ScanTooLarge { n: usize, max: usize },
    #[error("cell of orbit site {site} is degenerate ({source}); perturb the sites and rebuild")]
    DegenerateCell { site: usize, source: PolytopeError },
    #[error("cell of orbit site {site}: {source}")]
    Cell { site: usize, source: PolytopeError },
    #[error("shared face between orbit sites {a} and {b} disagrees between the two cells")]
    SharedFaceMismatch { a: usize, b: usize },
    #[error("face reference is not a non-artificial 1-face of the complex")]
    NotAnInteriorOneFace,
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// A group element reached by the word-length-capped enumeration.
#[derive(Debug, Clone)]
pub struct GroupElement {
    /// Letters `+k`/`-k` meaning generator `k-1` or its inverse, `1`-based.
    pub word: Vec<i32>,
    pub matrix: LorentzIsometry,
}

/// One point of the truncated orbit set.
#[derive(Debug, Clone)]
pub struct OrbitSite {
    pub point: MinkowskiPoint,
    pub word: Vec<i32>,
    pub matrix: LorentzIsometry,
    pub base_index: usize,
}

/// Generators, basepoints, and the enumerated truncated orbit.
#[derive(Debug, Clone)]
pub struct SiteSystem {
    pub generators: Vec<LorentzIsometry>,
    /// Optional defining relators; collisions explained by a relator are not
    /// flagged as suspicious.
    pub relators: Vec<Vec<i32>>,
    pub basepoints: Vec<MinkowskiPoint>,
    pub word_length_cap: usize,
    /// All enumerated group elements, identity first, in BFS order.
    pub elements: Vec<GroupElement>,
    /// Index of the first element whose word has full cap length.
    pub frontier_start: usize,
    pub orbit: Vec<OrbitSite>,
    pub warnings: Vec<String>,
}

pub fn word_inverse(word: &[i32]) -> Vec<i32> {
    word.iter().rev().map(|&l| -l).collect()
}

pub fn free_reduce(word: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Matrix of a word in the given generators.
pub fn word_matrix(word: &[i32], generators: &[LorentzIsometry]) -> LorentzIsometry {
    let mut m = LorentzIsometry::identity();
    for &l in word {
        let g = &generators[(l.unsigned_abs() - 1) as usize];
        let g = if l > 0 { g.clone() } else { g.inverse() };
        m = m.compose(&g);
    }
    m
}

/// Whether `word` freely reduces to a cyclic rotation of a relator or of an
/// inverted relator.
fn explained_by_relators(word: &[i32], relators: &[Vec<i32>]) -> bool {
    let w = free_reduce(word);
    for rel in relators {
        for flip in [false, true] {
            let r = if flip { word_inverse(rel) } else { rel.clone() };
            let r = free_reduce(&r);
            if r.len() != w.len() || r.is_empty() {
                continue;
            }
            for shift in 0..r.len() {
                let rotated: Vec<i32> = r
                    .iter()
                    .cycle()
                    .skip(shift)
                    .take(r.len())
                    .copied()
                    .collect();
                if rotated == w {
                    return true;
                }
            }
        }
    }
    false
}

/// Breadth-first word enumeration up to the cap, deduplicated by site
/// position. Records the group word per orbit point.
pub fn enumerate_orbit(
    generators: &[LorentzIsometry],
    basepoints: &[MinkowskiPoint],
    word_length_cap: usize,
) -> SiteSystem {
    enumerate_orbit_with_relators(generators, &[], basepoints, word_length_cap)
}

pub fn enumerate_orbit_with_relators(
    generators: &[LorentzIsometry],
    relators: &[Vec<i32>],
    basepoints: &[MinkowskiPoint],
    word_length_cap: usize,
) -> SiteSystem {
    let mut warnings = Vec::new();
    let mut elements = vec![GroupElement {
        word: vec![],
        matrix: LorentzIsometry::identity(),
    }];
    let mut level_start = 0;
    for _len in 1..=word_length_cap {
        let level_end = elements.len();
        for idx in level_start..level_end {
            let base = elements[idx].clone();
            for g in 0..generators.len() {
                for letter in [(g as i32) + 1, -((g as i32) + 1)] {
                    // No immediate backtracking within the word walk.
                    if base.word.last() == Some(&-letter) {
                        continue;
                    }
                    let gen = if letter > 0 {
                        generators[g].clone()
                    } else {
                        generators[g].inverse()
                    };
                    let matrix = base.matrix.compose(&gen);
                    let mut word = base.word.clone();
                    word.push(letter);
                    // Coincident elements keep their shortest word; a short
                    // nontrivial relation is a torsion/discreteness signal.
                    if let Some(existing) = elements
                        .iter()
                        .find(|e| e.matrix.matrix_distance(&matrix) <= 1e-8)
                    {
                        let relation =
                            free_reduce(&[word_inverse(&existing.word), word.clone()].concat());
                        if existing.word.len() <= 2
                            && word.len() <= 2
                            && !relation.is_empty()
                            && !explained_by_relators(&relation, relators)
                        {
                            warnings.push(format!(
                                "group elements with short words {:?} and {:?} coincide; \
                                 torsion or non-discreteness suspected",
                                existing.word, word
                            ));
                        }
                        continue;
                    }
                    elements.push(GroupElement { word, matrix });
                }
            }
        }
        level_start = level_end;
    }
    let frontier_start = elements
        .iter()
        .position(|e| e.word.len() == word_length_cap)
        .unwrap_or(elements.len());

    let mut orbit: Vec<OrbitSite> = Vec::new();
    for element in &elements {
        for (b, basepoint) in basepoints.iter().enumerate() {
            let point = apply(&element.matrix, basepoint);
            if let Some(existing) = orbit
                .iter()
                .find(|s| chordal_gap(&s.point, &point) <= TAU_GEOM)
            {
                let collision_word =
                    free_reduce(&[word_inverse(&existing.word), element.word.clone()].concat());
                if existing.base_index != b {
                    warnings.push(format!(
                        "orbits of basepoints {} and {} collide at an orbit point",
                        existing.base_index, b
                    ));
                } else if existing.word.len() <= 2
                    && element.word.len() <= 2
                    && !collision_word.is_empty()
                    && !explained_by_relators(&collision_word, relators)
                {
                    warnings.push(format!(
                        "orbit point collision between short words {:?} and {:?}; \
                         torsion or non-discreteness suspected",
                        existing.word, element.word
                    ));
                }
                continue;
            }
            orbit.push(OrbitSite {
                point,
                word: element.word.clone(),
                matrix: element.matrix.clone(),
                base_index: b,
            });
        }
    }

    SiteSystem {
        generators: generators.to_vec(),
        relators: relators.to_vec(),
        basepoints: basepoints.to_vec(),
        word_length_cap,
        elements,
        frontier_start,
        orbit,
        warnings,
    }
}

impl SiteSystem {
    /// Orbit index of the site coinciding with `p`, if any.
    pub fn site_index_of(&self, p: &MinkowskiPoint, tol: f64) -> Option<usize> {
        self.orbit
            .iter()
            .position(|s| chordal_gap(&s.point, p) <= tol)
    }

    /// Distance from `p` to the nearest frontier-word site; the guard radius
    /// within which no un-enumerated orbit point can interfere (heuristic:
    /// assumes deeper words land no closer than the frontier).
    pub fn frontier_distance(&self, p: &MinkowskiPoint) -> f64 {
        let mut best = f64::INFINITY;
        for e in &self.elements[self.frontier_start..] {
            if e.word.len() < self.word_length_cap {
                continue;
            }
            for b in &self.basepoints {
                best = best.min(dist(p, &apply(&e.matrix, b)));
            }
        }
        best
    }
}

/// Moves each basepoint by an independent random tangent displacement of
/// hyperbolic norm at most `magnitude` and re-enumerates the orbit.
/// Deterministic under `seed`.
pub fn perturb_sites(sites: &SiteSystem, magnitude: f64, seed: u64) -> SiteSystem {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let moved: Vec<MinkowskiPoint> = sites
        .basepoints
        .iter()
        .map(|p| {
            let basis = p.tangent_basis();
            let dir = loop {
                let v = Vector3::new(
                    rng.gen_range(-1.0..1.0f64),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                );
                if v.norm() > 1e-6 && v.norm() <= 1.0 {
                    break v.normalize();
                }
            };
            let t = magnitude * rng.gen::<f64>().powf(1.0 / 3.0);
            let tangent = basis[0] * dir[0] + basis[1] * dir[1] + basis[2] * dir[2];
            p.geodesic(&tangent, t)
        })
        .collect();
    enumerate_orbit_with_relators(
        &sites.generators,
        &sites.relators,
        &moved,
        sites.word_length_cap,
    )
}

/// Default perturbation magnitude (hyperbolic units) for the retry loop.
pub const PERTURB_MAGNITUDE_DEFAULT: f64 = 1e-4;
/// Retry budget for perturb-and-rebuild loops.
pub const PERTURB_MAX_RETRIES: usize = 16;

/// All 4-subsets of orbit points within the pairwise distance window that lie
/// on a common circle, horocycle, geodesic, or equidistant curve.
pub fn degeneracy_scan(
    sites: &SiteSystem,
    max_pair_distance: f64,
) -> Result<Vec<[usize; 4]>, VoronoiError> {
    let n = sites.orbit.len();
    if n > SCAN_MAX_POINTS {
        return Err(VoronoiError::ScanTooLarge {
            n,
            max: SCAN_MAX_POINTS,
        });
    }
    let pts: Vec<&MinkowskiPoint> = sites.orbit.iter().map(|s| &s.point).collect();
    let close = |i: usize, j: usize| dist(pts[i], pts[j]) <= max_pair_distance;
    let mut violators = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if !close(a, b) {
                continue;
            }
            for c in (b + 1)..n {
                if !(close(a, c) && close(b, c)) {
                    continue;
                }
                for d in (c + 1)..n {
                    if !(close(a, d) && close(b, d) && close(c, d)) {
                        continue;
                    }
                    if is_degenerate_quadruple(&[*pts[a], *pts[b], *pts[c], *pts[d]])? {
                        violators.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    Ok(violators)
}

/// One Voronoi cell: the reduced intersection of bisector half-spaces of its
/// site against every other orbit site, within the truncation shell.
#[derive(Debug, Clone)]
pub struct Cell {
    pub orbit_index: usize,
    pub poly: ConvexPolyhedron,
    /// For each retained half-space (by slot), the orbit index of the site
    /// whose bisector it is.
    pub neighbor_sites: Vec<usize>,
    /// No un-enumerated orbit point can affect this cell (frontier guard).
    pub interior: bool,
}

impl Cell {
    /// Facet (face-lattice index) supported by the bisector against orbit
    /// site `j`, when present.
    pub fn facet_against(&self, j: usize) -> Option<usize> {
        let slot = self.neighbor_sites.iter().position(|&s| s == j)?;
        self.poly
            .face_lattice()
            .iter()
            .position(|f| f.dim == 2 && f.halfspace_ids == [slot])
    }
}

/// A 2-face shared by exactly two cells of the complex.
#[derive(Debug, Clone)]
pub struct SharedTwoFace {
    /// Cell indices (into `VoronoiComplex::cells`), lower orbit index first.
    pub cells: (usize, usize),
    /// Face-lattice indices of the facet within each cell's polyhedron.
    pub faces: (usize, usize),
    /// Orbit indices of the two sites.
    pub site_pair: (usize, usize),
}

/// A geometric 1-face of the complex with its incidence data, identified
/// across the cells that share it.
#[derive(Debug, Clone)]
pub struct OneFaceClass {
    /// (cell index, face-lattice index) of each appearance.
    pub records: Vec<(usize, usize)>,
    /// Distinct incident cells; the valence is their count.
    pub incident_cells: Vec<usize>,
    pub endpoints_klein: [Vector3<f64>; 2],
    /// All incident cells pass the frontier guard, so the valence claim is
    /// trustworthy despite orbit truncation.
    pub assessable: bool,
}

impl OneFaceClass {
    pub fn valence(&self) -> usize {
        self.incident_cells.len()
    }
}

#[derive(Debug, Clone)]
pub struct VoronoiComplex {
    pub truncation_radius: f64,
    pub cells: Vec<Cell>,
    /// Orbit index -> cell index, when a cell was built for that site.
    pub cell_of_site: Vec<Option<usize>>,
    pub shared_faces: Vec<SharedTwoFace>,
    /// Facets whose neighbor site lies outside the built-cell zone.
    pub unpaired_faces: Vec<(usize, usize)>,
    pub one_faces: Vec<OneFaceClass>,
}

/// Builds one cell per orbit site within the working ball.
pub fn build_complex(
    sites: &SiteSystem,
    truncation_radius: f64,
) -> Result<VoronoiComplex, VoronoiError> {
    let n = sites.orbit.len();
    if n < 2 {
        return Err(VoronoiError::TooFewSites(n));
    }
    let shell = polytope::TruncationShell::new(truncation_radius)
        .map_err(|source| VoronoiError::Cell { site: 0, source })?;
    let radius = shell.radius;
    let origin = MinkowskiPoint::origin();

    let cell_sites: Vec<usize> = (0..n)
        .filter(|&i| dist(&origin, &sites.orbit[i].point) < radius)
        .collect();
    if cell_sites.len() < 2 {
        return Err(VoronoiError::TooFewSites(cell_sites.len()));
    }

    let built: Vec<Result<Cell, VoronoiError>> = cell_sites
        .par_iter()
        .map(|&i| {
            let site = &sites.orbit[i].point;
            let mut halfspaces: Vec<HalfSpace> = Vec::with_capacity(n - 1);
            let mut others: Vec<usize> = Vec::with_capacity(n - 1);
            for (j, other) in sites.orbit.iter().enumerate() {
                if j == i {
                    continue;
                }
                let h = bisector_halfspace(site, &other.point).map_err(|e| VoronoiError::Cell {
                    site: i,
                    source: e.into(),
                })?;
                halfspaces.push(h);
                others.push(j);
            }
            let poly =
                polytope::reduce_with_shell(&halfspaces, &shell).map_err(|source| match source {
                    PolytopeError::DegenerateInput { .. } => {
                        VoronoiError::DegenerateCell { site: i, source }
                    }
                    _ => VoronoiError::Cell { site: i, source },
                })?;
            let neighbor_sites: Vec<usize> =
                poly.input_ids().iter().map(|&slot| others[slot]).collect();

            // Frontier guard: un-enumerated orbit points are assumed at least
            // as far from the site as the nearest frontier site; the cell is
            // then final when twice its circumradius stays below that.
            let frontier = sites.frontier_distance(site);
            let interior = if frontier.is_infinite() {
                true
            } else {
                let truncated_off = poly.face_lattice().iter().any(|f| f.is_artificial);
                let circum = poly
                    .vertices_klein()
                    .iter()
                    .filter(|v| v.norm() < 1.0 - 1e-12)
                    .map(|v| dist(site, &MinkowskiPoint::from_klein(*v).unwrap()))
                    .fold(0.0f64, f64::max);
                !truncated_off && 2.0 * circum < frontier
            };
            Ok(Cell {
                orbit_index: i,
                poly,
                neighbor_sites,
                interior,
            })
        })
        .collect();
    let mut cells = Vec::with_capacity(built.len());
    for c in built {
        cells.push(c?);
    }

    let mut cell_of_site = vec![None; n];
    for (ci, cell) in cells.iter().enumerate() {
        cell_of_site[cell.orbit_index] = Some(ci);
    }

    // Pair facets across cells via the bisector site pair, checking that the
    // two lattices agree on the shared polygon.
    let mut shared_faces = Vec::new();
    let mut unpaired_faces = Vec::new();
    for (ci, cell) in cells.iter().enumerate() {
        let i = cell.orbit_index;
        for &j in &cell.neighbor_sites {
            if j < i && cell_of_site[j].is_some() {
                continue; // handled from the lower side
            }
            let Some(face_i) = cell.facet_against(j) else {
                continue;
            };
            match cell_of_site[j] {
                None => unpaired_faces.push((ci, face_i)),
                Some(cj) => {
                    let Some(face_j) = cells[cj].facet_against(i) else {
                        return Err(VoronoiError::SharedFaceMismatch { a: i, b: j });
                    };
                    let wi = &cells[ci].poly.face_lattice()[face_i].witnesses_klein;
                    let wj = &cells[cj].poly.face_lattice()[face_j].witnesses_klein;
                    let matched = wi.len() == wj.len()
                        && wi
                            .iter()
                            .all(|a| wj.iter().any(|b| (a - b).norm() <= MATCH_TOL))
                        && wj
                            .iter()
                            .all(|a| wi.iter().any(|b| (a - b).norm() <= MATCH_TOL));
                    if !matched {
                        return Err(VoronoiError::SharedFaceMismatch { a: i, b: j });
                    }
                    shared_faces.push(SharedTwoFace {
                        cells: (ci, cj),
                        faces: (face_i, face_j),
                        site_pair: (i, j),
                    });
                }
            }
        }
    }

    // Group non-artificial 1-faces geometrically across cells.
    struct EdgeRec {
        cell: usize,
        face: usize,
        a: Vector3<f64>,
        b: Vector3<f64>,
    }
    let mut recs: Vec<EdgeRec> = Vec::new();
    for (ci, cell) in cells.iter().enumerate() {
        for (fi, face) in cell.poly.face_lattice().iter().enumerate() {
            if face.dim == 1 && !face.is_artificial {
                recs.push(EdgeRec {
                    cell: ci,
                    face: fi,
                    a: face.witnesses_klein[0],
                    b: face.witnesses_klein[1],
                });
            }
        }
    }
    let same_segment = |x: &EdgeRec, y: &EdgeRec| -> bool {
        ((x.a - y.a).norm() <= MATCH_TOL && (x.b - y.b).norm() <= MATCH_TOL)
            || ((x.a - y.b).norm() <= MATCH_TOL && (x.b - y.a).norm() <= MATCH_TOL)
    };
    let mut class_of: Vec<Option<usize>> = vec![None; recs.len()];
    let mut one_faces: Vec<OneFaceClass> = Vec::new();
    for r in 0..recs.len() {
        if class_of[r].is_some() {
            continue;
        }
        let mut members = vec![r];
        for s in (r + 1)..recs.len() {
            if class_of[s].is_none() && same_segment(&recs[r], &recs[s]) {
                members.push(s);
            }
        }
        let class_id = one_faces.len();
        let mut incident: Vec<usize> = members.iter().map(|&m| recs[m].cell).collect();
        incident.sort_unstable();
        incident.dedup();
        let assessable = incident.iter().all(|&c| cells[c].interior);
        one_faces.push(OneFaceClass {
            records: members
                .iter()
                .map(|&m| (recs[m].cell, recs[m].face))
                .collect(),
            incident_cells: incident,
            endpoints_klein: [recs[r].a, recs[r].b],
            assessable,
        });
        for m in members {
            class_of[m] = Some(class_id);
        }
    }

    Ok(VoronoiComplex {
        truncation_radius: radius,
        cells,
        cell_of_site,
        shared_faces,
        unpaired_faces,
        one_faces,
    })
}

/// Count of 3-cells having the given 1-face as a face.
pub fn valence(complex: &VoronoiComplex, cell: usize, face: usize) -> Result<usize, VoronoiError> {
    let f = complex
        .cells
        .get(cell)
        .and_then(|c| c.poly.face_lattice().get(face))
        .ok_or(VoronoiError::NotAnInteriorOneFace)?;
    if f.dim != 1 || f.is_artificial {
        return Err(VoronoiError::NotAnInteriorOneFace);
    }
    complex
        .one_faces
        .iter()
        .find(|cls| cls.records.contains(&(cell, face)))
        .map(|cls| cls.valence())
        .ok_or(VoronoiError::NotAnInteriorOneFace)
}

#[derive(Debug, Clone)]
pub struct ValenceViolation {
    pub class_id: usize,
    pub valence: usize,
}

#[derive(Debug, Clone)]
pub struct WeakSimplicityReport {
    pub weakly_simple: bool,
    pub violations: Vec<ValenceViolation>,
    /// 1-face classes whose incidence the frontier guard can vouch for.
    pub assessed: usize,
    pub skipped_unassessable: usize,
    /// Every assessed class had its face inside all incident cells, and
    /// valence-3 classes had pairwise shared 2-faces carrying the edge.
    pub incidence_consistent: bool,
}

/// True iff every assessable non-artificial 1-face has valence exactly 3.
pub fn is_weakly_simple(complex: &VoronoiComplex) -> WeakSimplicityReport {
    let mut violations = Vec::new();
    let mut assessed = 0;
    let mut skipped = 0;
    let mut incidence_consistent = true;
    for (class_id, class) in complex.one_faces.iter().enumerate() {
        if !class.assessable {
            skipped += 1;
            continue;
        }
        assessed += 1;
        let v = class.valence();
        if v != 3 {
            violations.push(ValenceViolation {
                class_id,
                valence: v,
            });
        }
        // The intersection of all incident cells contains the 1-face.
        for &ci in &class.incident_cells {
            for endpoint in &class.endpoints_klein {
                if !complex.cells[ci].poly.contains_klein(endpoint, 1e-6) {
                    incidence_consistent = false;
                }
            }
        }
        // For valence-3 classes, each incident pair shares a 2-face whose
        // polygon carries the edge's endpoints.
        if v == 3 {
            for (a_pos, &ca) in class.incident_cells.iter().enumerate() {
                for &cb in &class.incident_cells[a_pos + 1..] {
                    let pair_ok = complex.shared_faces.iter().any(|sf| {
                        (sf.cells == (ca, cb) || sf.cells == (cb, ca))
                            && class.endpoints_klein.iter().all(|e| {
                                let face =
                                    &complex.cells[sf.cells.0].poly.face_lattice()[sf.faces.0];
                                face.witnesses_klein
                                    .iter()
                                    .any(|w| (w - e).norm() <= MATCH_TOL)
                            })
                    });
                    if !pair_ok {
                        incidence_consistent = false;
                    }
                }
            }
        }
    }
    WeakSimplicityReport {
        weakly_simple: violations.is_empty(),
        violations,
        assessed,
        skipped_unassessable: skipped,
        incidence_consistent,
    }
}

impl VoronoiComplex {
    /// Orbit index of the nearest site to `p` (brute force), with distance.
    pub fn nearest_site(&self, sites: &SiteSystem, p: &MinkowskiPoint) -> (usize, f64) {
        let mut best = (usize::MAX, f64::INFINITY);
        for (i, s) in sites.orbit.iter().enumerate() {
            let d = dist(p, &s.point);
            if d < best.1 {
                best = (i, d);
            }
        }
        best
    }

    /// Cells containing `p` within tolerance.
    pub fn locate(&self, p: &MinkowskiPoint, tol: f64) -> Vec<usize> {
        let k = p.to_klein();
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.poly.contains_klein(&k, tol))
            .map(|(i, _)| i)
            .collect()
    }
}

#[doc(hidden)]
pub mod testkit {
    //! Deterministic scene builders shared by tests and benchmarks.
    use super::*;

    /// Two loxodromic generators with large translation lengths and
    /// well-separated axes; free and discrete with wide margins.
    pub fn schottky_generators(l1: f64, l2: f64, offset: f64) -> Vec<LorentzIsometry> {
        let a = LorentzIsometry::boost_x(l1);
        let rot = LorentzIsometry::rotation_z(std::f64::consts::FRAC_PI_2);
        let shift = shift_z(offset);
        let b_axis = rot
            .compose(&LorentzIsometry::boost_x(l2))
            .compose(&rot.inverse());
        let b = shift.compose(&b_axis).compose(&shift.inverse());
        vec![a, b]
    }

    /// Translation along the x3-axis.
    pub fn shift_z(t: f64) -> LorentzIsometry {
        let (c, s) = (t.cosh(), t.sinh());
        let mut m = nalgebra::Matrix4::identity();
        m[(0, 0)] = c;
        m[(0, 3)] = s;
        m[(3, 0)] = s;
        m[(3, 3)] = c;
        LorentzIsometry::new(m).unwrap()
    }

    /// `n` sites on a circle of hyperbolic radius `r` in the x1-x2 plane:
    /// concyclic by construction.
    pub fn concyclic_sites(n: usize, r: f64) -> Vec<MinkowskiPoint> {
        (0..n)
            .map(|i| {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                MinkowskiPoint::new(Vector4::new(
                    r.cosh(),
                    r.sinh() * theta.cos(),
                    r.sinh() * theta.sin(),
                    0.0,
                ))
                .unwrap()
            })
            .collect()
    }

    /// Vertices of a regular simplex at Klein radius `k`.
    pub fn simplex_sites(k: f64) -> Vec<MinkowskiPoint> {
        [
            Vector3::new(1.0, 1.0, 1.0),
            Vector3::new(1.0, -1.0, -1.0),
            Vector3::new(-1.0, 1.0, -1.0),
            Vector3::new(-1.0, -1.0, 1.0),
        ]
        .iter()
        .map(|d| MinkowskiPoint::from_klein(d.normalize() * k).unwrap())
        .collect()
    }

    /// Random sites within Klein radius `radius`, deterministic under seed.
    pub fn random_sites(seed: u64, n: usize, radius: f64) -> Vec<MinkowskiPoint> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let dir = loop {
                    let v = Vector3::new(
                        rng.gen_range(-1.0..1.0f64),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    );
                    if v.norm() > 1e-3 {
                        break v.normalize();
                    }
                };
                MinkowskiPoint::from_klein(dir * rng.gen_range(0.05..radius)).unwrap()
            })
            .collect()
    }
}
