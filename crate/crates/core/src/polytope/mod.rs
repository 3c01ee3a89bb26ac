//! Convex hyperbolic polyhedra as irredundant half-space intersections with
//! computed face lattices.
//!
//! All lattice work happens in the Beltrami-Klein chart, where hyperbolic
//! half-spaces are Euclidean half-spaces. Unbounded intersections are made
//! compact with a truncation shell: the fixed 80-plane circumscribed polytope
//! of the working ball. Faces supported by shell planes are artificial; they
//! are artifacts of truncation, not faces of the true polyhedron, and every
//! downstream consumer (valence statistics, dot placement, dual graphs)
//! filters them out.

mod clip;
mod hull;
pub(crate) mod klein;

pub use clip::{TOL_AMB, TOL_ON};

use crate::hyperbolic::{HalfSpace, KernelError, MinkowskiPoint, TAU_RANK};
use clip::ClipLattice;
use klein::KleinPlane;
use nalgebra::Vector3;
use thiserror::Error;

/// Truncation radii are capped here: beyond this the shell planes crowd the
/// Klein boundary closer than the clipping tolerances can separate.
pub const MAX_TRUNCATION_RADIUS: f64 = 12.0;

#[derive(Debug, Clone, Error)]
pub enum PolytopeError {
    #[error("empty polyhedron: the half-spaces have no common point in the working ball")]
    EmptyPolyhedron,
    #[error("degenerate input: {detail}")]
    DegenerateInput { detail: String },
    #[error("precondition violated: {detail}")]
    PreconditionViolated { detail: String },
    #[error("input size {n} exceeds the supported desk scale {max} for this operation")]
    TooLarge { n: usize, max: usize },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// A face of a polyhedron, identified by its set of active constraints.
#[derive(Debug, Clone)]
pub struct Face {
    pub dim: usize,
    /// Indices into the owning polyhedron's retained half-space list.
    pub halfspace_ids: Vec<usize>,
    /// Active seed-shell plane ids; nonempty marks the face as an artifact
    /// of truncation rather than a face of the true polyhedron.
    pub truncation_ids: Vec<usize>,
    pub is_artificial: bool,
    /// Klein coordinates of the face's vertices (its witness span).
    pub witnesses_klein: Vec<Vector3<f64>>,
    /// Ids of the vertices (0-faces) of this face, into the polyhedron's
    /// vertex table, for combinatorial containment queries.
    pub vertex_ids: Vec<u32>,
}

impl Face {
    /// Witnesses lifted to the hyperboloid. Fails only for artificial faces
    /// whose vertices fall outside the Klein unit ball (beyond infinity).
    pub fn vertex_witnesses(&self) -> Result<Vec<MinkowskiPoint>, KernelError> {
        self.witnesses_klein
            .iter()
            .map(|k| MinkowskiPoint::from_klein(*k))
            .collect()
    }

    /// Combinatorial containment: `self` is a face of `other` when its
    /// vertex set is included in `other`'s.
    pub fn subset_of(&self, other: &Face) -> bool {
        self.vertex_ids.iter().all(|v| other.vertex_ids.contains(v))
    }

    pub fn centroid_klein(&self) -> Vector3<f64> {
        let mut c = Vector3::zeros();
        for w in &self.witnesses_klein {
            c += w;
        }
        c / self.witnesses_klein.len() as f64
    }

    /// Deterministic interior sample points: the centroid first, then random
    /// convex combinations of the vertex witnesses (relative-interior points
    /// for faces of any dimension).
    pub fn interior_samples(&self, n: usize, rng: &mut impl rand::Rng) -> Vec<Vector3<f64>> {
        let mut out = vec![self.centroid_klein()];
        let k = self.witnesses_klein.len();
        while out.len() < n {
            let weights: Vec<f64> = (0..k)
                .map(|_| -(rng.gen::<f64>().max(1e-12)).ln())
                .collect();
            let total: f64 = weights.iter().sum();
            let mut p = Vector3::zeros();
            for (w, v) in weights.iter().zip(&self.witnesses_klein) {
                p += v * (w / total);
            }
            out.push(p);
        }
        out
    }
}

/// Compact convex polyhedron: retained (irredundant) half-spaces plus the
/// full face lattice, levels 0 through `dim`.
#[derive(Debug, Clone)]
pub struct ConvexPolyhedron {
    halfspaces: Vec<HalfSpace>,
    /// Caller-side index of each retained half-space (what it reduced from).
    input_ids: Vec<usize>,
    truncation_radius: f64,
    shell_used: bool,
    dim: usize,
    faces: Vec<Face>,
    verts_klein: Vec<Vector3<f64>>,
}

/// A compact starting polytope for incremental clipping, with its lattice.
pub(crate) struct Seed {
    pub planes: Vec<KleinPlane>,
    pub lattice: ClipLattice,
    /// Planes farther from the origin than this can never cut the seed.
    pub outer: f64,
}

impl Seed {
    fn from_planes(planes: Vec<KleinPlane>) -> Result<Self, PolytopeError> {
        let lattice = ClipLattice::enumerate(&planes)?;
        let outer = lattice
            .alive_vertices()
            .map(|(_, v)| v.pos.norm())
            .fold(0.0f64, f64::max)
            + 1e-9;
        Ok(Self {
            planes,
            lattice,
            outer,
        })
    }

    /// Axis-aligned cube of half-width `h`; used to bound intersections that
    /// are known to be compact (the cube planes then never cut).
    pub fn cube(h: f64) -> Result<Self, PolytopeError> {
        let mut planes = Vec::with_capacity(6);
        for axis in 0..3 {
            for sign in [1.0f64, -1.0] {
                let mut n = Vector3::zeros();
                n[axis] = sign;
                planes.push(KleinPlane { n, d: h });
            }
        }
        Self::from_planes(planes)
    }
}

/// The truncation shell for a working ball of hyperbolic radius `radius`:
/// tangent planes of the Euclidean ball of radius `tanh(radius)` in the 80
/// fixed directions.
pub(crate) struct TruncationShell {
    pub radius: f64,
    pub seed: Seed,
}

impl TruncationShell {
    pub fn new(radius: f64) -> Result<Self, PolytopeError> {
        let radius = radius.min(MAX_TRUNCATION_RADIUS);
        if radius <= 0.0 {
            return Err(PolytopeError::PreconditionViolated {
                detail: "truncation radius must be positive".into(),
            });
        }
        let seed = Seed::from_planes(klein::shell_planes(radius.tanh()))?;
        Ok(Self { radius, seed })
    }
}

pub(crate) struct BuildOutcome {
    lattice: ClipLattice,
    planes: Vec<KleinPlane>,
    /// For each constraint id >= n_seed, the caller's halfspace index.
    input_of: Vec<usize>,
    n_seed: usize,
}

/// Clips the seed by the input planes (most-cutting first), then resolves
/// constraints whose facets degenerated below dimension 2: each is rebuilt
/// without; if the polytope is unchanged the constraint was redundant,
/// otherwise the configuration is reported as degenerate.
pub(crate) fn build_clipped(
    seed: &Seed,
    inputs: &[(KleinPlane, usize)],
) -> Result<BuildOutcome, PolytopeError> {
    let n_seed = seed.planes.len();
    let mut order: Vec<usize> = (0..inputs.len()).collect();
    order.sort_by(|&a, &b| inputs[a].0.d.partial_cmp(&inputs[b].0.d).unwrap());

    let run = |skip: &[usize]| -> Result<(ClipLattice, Vec<KleinPlane>, Vec<usize>), PolytopeError> {
        let mut planes = seed.planes.clone();
        let mut input_of = Vec::new();
        for &idx in &order {
            if skip.contains(&idx) {
                continue;
            }
            planes.push(inputs[idx].0);
            input_of.push(inputs[idx].1);
        }
        let mut lattice = seed.lattice.clone();
        for id in n_seed..planes.len() {
            if planes[id].d >= seed.outer {
                continue; // cannot reach the seed polytope
            }
            lattice.clip(&planes, id as u32)?;
        }
        Ok((lattice, planes, input_of))
    };

    let mut skip: Vec<usize> = Vec::new();
    let (mut lattice, mut planes, mut input_of) = run(&skip)?;
    for _ in 0..=inputs.len() {
        let mut degenerate = None;
        for &id in &lattice.applied {
            if (id as usize) < n_seed {
                continue;
            }
            let verts = lattice.facet_vertex_ids(id);
            if verts.len() < 3 || lattice.affine_rank(&verts) < 2 {
                degenerate = Some(id);
                break;
            }
        }
        let Some(id) = degenerate else {
            return Ok(BuildOutcome {
                lattice,
                planes,
                input_of,
                n_seed,
            });
        };
        let slot = id as usize - n_seed;
        let orig = input_of[slot];
        let orig_idx = inputs.iter().position(|(_, i)| *i == orig).unwrap();
        skip.push(orig_idx);
        let (l2, p2, i2) = run(&skip)?;
        if !l2.same_vertex_set(&lattice, 1e-7) {
            return Err(PolytopeError::DegenerateInput {
                detail: "a half-space supports the polyhedron only in a low-dimensional face; \
                         perturb the input"
                    .into(),
            });
        }
        lattice = l2;
        planes = p2;
        input_of = i2;
    }
    unreachable!("degenerate-facet resolution loop is bounded by the input count");
}

pub(crate) fn assemble(
    outcome: BuildOutcome,
    halfspaces_in: &[HalfSpace],
    truncation_radius: f64,
    shell_used: bool,
) -> Result<ConvexPolyhedron, PolytopeError> {
    let BuildOutcome {
        lattice,
        planes: _,
        input_of,
        n_seed,
    } = outcome;

    let mut vert_map = vec![u32::MAX; lattice.verts.len()];
    let mut verts_klein = Vec::new();
    for (i, v) in lattice.alive_vertices() {
        vert_map[i as usize] = verts_klein.len() as u32;
        verts_klein.push(v.pos);
    }
    if verts_klein.is_empty() {
        return Err(PolytopeError::EmptyPolyhedron);
    }

    let mut retained: Vec<(u32, usize)> = Vec::new();
    for &id in &lattice.applied {
        if (id as usize) >= n_seed {
            retained.push((id, input_of[id as usize - n_seed]));
        }
    }
    let halfspaces: Vec<HalfSpace> = retained
        .iter()
        .map(|&(_, caller)| halfspaces_in[caller])
        .collect();
    let input_ids: Vec<usize> = retained.iter().map(|&(_, c)| c).collect();
    let hs_slot = |cid: u32| -> usize {
        retained
            .iter()
            .position(|&(id, _)| id == cid)
            .expect("active constraint must be retained")
    };

    let split_active = |active: &[u32]| -> (Vec<usize>, Vec<usize>) {
        let mut hs = Vec::new();
        let mut tr = Vec::new();
        for &a in active {
            if (a as usize) < n_seed {
                tr.push(a as usize);
            } else {
                hs.push(hs_slot(a));
            }
        }
        hs.sort_unstable();
        (hs, tr)
    };

    let make_face = |dim: usize, active: &[u32], vert_ids: Vec<u32>| -> Face {
        let (halfspace_ids, truncation_ids) = split_active(active);
        let witnesses_klein = vert_ids.iter().map(|&v| verts_klein[v as usize]).collect();
        Face {
            dim,
            is_artificial: !truncation_ids.is_empty(),
            halfspace_ids,
            truncation_ids,
            witnesses_klein,
            vertex_ids: vert_ids,
        }
    };

    let alive_ids: Vec<u32> = lattice.alive_vertices().map(|(i, _)| i).collect();
    if lattice.affine_rank(&alive_ids) < 3 {
        return Err(PolytopeError::DegenerateInput {
            detail: "intersection is not full-dimensional".into(),
        });
    }

    let mut faces: Vec<Face> = Vec::new();
    let all_ids: Vec<u32> = (0..verts_klein.len() as u32).collect();
    faces.push(make_face(3, &[], all_ids));

    for &id in &lattice.applied {
        let vids = lattice.facet_vertex_ids(id);
        if vids.len() < 3 || lattice.affine_rank(&vids) < 2 {
            debug_assert!(
                (id as usize) < n_seed,
                "degenerate input facets are resolved before assembly"
            );
            continue;
        }
        let mapped: Vec<u32> = vids.iter().map(|&v| vert_map[v as usize]).collect();
        faces.push(make_face(2, &[id], mapped));
    }

    for e in lattice.alive_edges() {
        let mapped = vec![vert_map[e.ends[0] as usize], vert_map[e.ends[1] as usize]];
        faces.push(make_face(1, &e.active, mapped));
    }

    for (i, v) in lattice.alive_vertices() {
        faces.push(make_face(0, &v.active, vec![vert_map[i as usize]]));
    }

    Ok(ConvexPolyhedron {
        halfspaces,
        input_ids,
        truncation_radius,
        shell_used,
        dim: 3,
        faces,
        verts_klein,
    })
}

/// Reduces a half-space family to an irredundant one relative to the working
/// ball of the given radius, and computes the face lattice of the
/// intersection.
pub fn reduce_irredundant(
    halfspaces: &[HalfSpace],
    truncation_radius: f64,
) -> Result<ConvexPolyhedron, PolytopeError> {
    let shell = TruncationShell::new(truncation_radius)?;
    reduce_with_shell(halfspaces, &shell)
}

pub(crate) fn reduce_with_shell(
    halfspaces: &[HalfSpace],
    shell: &TruncationShell,
) -> Result<ConvexPolyhedron, PolytopeError> {
    let inputs: Vec<(KleinPlane, usize)> = halfspaces
        .iter()
        .enumerate()
        .map(|(i, h)| (KleinPlane::from_halfspace(h), i))
        .collect();
    let outcome = build_clipped(&shell.seed, &inputs)?;
    assemble(outcome, halfspaces, shell.radius, true)
}

/// Intersection of two polyhedra: the union of their half-space lists,
/// re-reduced. Uses the larger truncation shell when either side has one.
pub fn intersect(
    a: &ConvexPolyhedron,
    b: &ConvexPolyhedron,
) -> Result<ConvexPolyhedron, PolytopeError> {
    let mut halfspaces: Vec<HalfSpace> = Vec::new();
    halfspaces.extend_from_slice(&a.halfspaces);
    halfspaces.extend_from_slice(&b.halfspaces);
    // Exact duplicates collapse on their own: the second copy never cuts.
    if a.shell_used || b.shell_used {
        let radius = a.truncation_radius.max(b.truncation_radius);
        let shell = TruncationShell::new(radius)?;
        reduce_with_shell(&halfspaces, &shell)
    } else {
        hull::intersect_compact(&halfspaces, a, b)
    }
}

impl ConvexPolyhedron {
    pub fn halfspaces(&self) -> &[HalfSpace] {
        &self.halfspaces
    }

    /// Caller-side index each retained half-space came from.
    pub fn input_ids(&self) -> &[usize] {
        &self.input_ids
    }

    pub fn truncation_radius(&self) -> f64 {
        self.truncation_radius
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The full face lattice, levels 0 through `dim` (the top face included).
    pub fn face_lattice(&self) -> &[Face] {
        &self.faces
    }

    pub fn faces_of_dim(&self, dim: usize) -> impl Iterator<Item = &Face> {
        self.faces.iter().filter(move |f| f.dim == dim)
    }

    pub fn facets(&self) -> impl Iterator<Item = &Face> {
        let d = if self.dim == 0 { 0 } else { self.dim - 1 };
        self.faces_of_dim(d)
    }

    pub fn vertices_klein(&self) -> &[Vector3<f64>] {
        &self.verts_klein
    }

    /// True when no face is supported by a truncation-shell plane.
    pub fn is_compact(&self) -> bool {
        self.faces.iter().all(|f| !f.is_artificial)
    }

    pub(crate) fn shell_used(&self) -> bool {
        self.shell_used
    }

    pub(crate) fn from_parts(
        halfspaces: Vec<HalfSpace>,
        dim: usize,
        faces: Vec<Face>,
        verts_klein: Vec<Vector3<f64>>,
        truncation_radius: f64,
    ) -> Self {
        Self {
            input_ids: (0..halfspaces.len()).collect(),
            halfspaces,
            truncation_radius,
            shell_used: false,
            dim,
            faces,
            verts_klein,
        }
    }

    /// Membership at tolerance `tol` in Klein coordinates (half-spaces plus
    /// the truncation shell when one was used).
    pub fn contains_klein(&self, k: &Vector3<f64>, tol: f64) -> bool {
        if self.shell_used {
            let t = self.truncation_radius.tanh();
            for n in klein::truncation_directions() {
                if n.dot(k) - t > tol {
                    return false;
                }
            }
        }
        self.halfspaces
            .iter()
            .all(|h| KleinPlane::from_halfspace(h).eval(k) <= tol)
    }

    pub fn contains(&self, p: &MinkowskiPoint, tol: f64) -> bool {
        self.contains_klein(&p.to_klein(), tol)
    }

    /// Pairs of facet indices (into `facets()` order) sharing a 1-face.
    pub fn facet_adjacency(&self) -> Vec<(usize, usize)> {
        let facets: Vec<&Face> = self.facets().collect();
        let mut pairs = Vec::new();
        for (i, fi) in facets.iter().enumerate() {
            for (j, fj) in facets.iter().enumerate().skip(i + 1) {
                let shared: Vec<u32> = fi
                    .vertex_ids
                    .iter()
                    .copied()
                    .filter(|v| fj.vertex_ids.contains(v))
                    .collect();
                if shared.len() >= 2 && self.rank_of_vertex_set(&shared) == 1 {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }

    fn rank_of_vertex_set(&self, ids: &[u32]) -> usize {
        if ids.len() <= 1 {
            return 0;
        }
        let base = self.verts_klein[ids[0] as usize];
        let mut basis: Vec<Vector3<f64>> = Vec::new();
        for &vi in &ids[1..] {
            let mut v = self.verts_klein[vi as usize] - base;
            for b in &basis {
                v -= b * b.dot(&v);
            }
            if v.norm() > TAU_RANK {
                basis.push(v.normalize());
                if basis.len() == 3 {
                    break;
                }
            }
        }
        basis.len()
    }

    /// Euler characteristic `V - E + F` of the boundary lattice.
    pub fn euler_characteristic(&self) -> i64 {
        let v = self.faces_of_dim(0).count() as i64;
        let e = self.faces_of_dim(1).count() as i64;
        let f = self.faces_of_dim(2).count() as i64;
        v - e + f
    }
}

pub use hull::{convex_hull_finite, enclose_compact, truncate_to_compact};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{bisector_halfspace, MinkowskiPoint};
    use nalgebra::Vector4;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn rand_point(rng: &mut impl Rng, radius: f64) -> MinkowskiPoint {
        let dir = loop {
            let v = Vector3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if v.norm() > 1e-3 {
                break v.normalize();
            }
        };
        MinkowskiPoint::from_klein(dir * rng.gen_range(0.0..radius.min(0.95))).unwrap()
    }

    #[test]
    fn duplicate_halfspace_is_dropped() {
        let h = HalfSpace::new(Vector4::new(0.0, 1.0, 0.0, 0.0)).unwrap();
        let p = reduce_irredundant(&[h, h], 2.0).unwrap();
        assert_eq!(p.halfspaces().len(), 1);
    }

    #[test]
    fn weaker_parallel_halfspace_is_dropped() {
        // {x1 <= 0} and a parallel half-space strictly containing it.
        let strong = HalfSpace::new(Vector4::new(0.0, 1.0, 0.0, 0.0)).unwrap();
        let weak = HalfSpace::new(Vector4::new(0.5f64.sinh(), 0.5f64.cosh(), 0.0, 0.0)).unwrap();
        let p = reduce_irredundant(&[strong, weak], 2.0).unwrap();
        assert_eq!(p.halfspaces().len(), 1);
        assert_eq!(p.input_ids(), &[0]);
    }

    #[test]
    fn retained_halfspaces_have_interior_witnesses() {
        // LP-style witness oracle: dropping any retained half-space admits a
        // point (a vertex of the relaxed polyhedron) violating it.
        let mut rng = StdRng::seed_from_u64(42);
        let center = MinkowskiPoint::origin();
        let sites: Vec<MinkowskiPoint> = (0..20).map(|_| rand_point(&mut rng, 0.6)).collect();
        let halfspaces: Vec<HalfSpace> = sites
            .iter()
            .map(|s| bisector_halfspace(&center, s).unwrap())
            .collect();
        let poly = reduce_irredundant(&halfspaces, 3.0).unwrap();
        assert!(!poly.halfspaces().is_empty());
        for drop_slot in 0..poly.halfspaces().len() {
            let kept: Vec<HalfSpace> = poly
                .halfspaces()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != drop_slot)
                .map(|(_, h)| *h)
                .collect();
            let relaxed = reduce_irredundant(&kept, 3.0).unwrap();
            let dropped = klein::KleinPlane::from_halfspace(&poly.halfspaces()[drop_slot]);
            let witness = relaxed
                .vertices_klein()
                .iter()
                .any(|v| dropped.eval(v) > 1e-7);
            assert!(witness, "half-space {drop_slot} had no irredundancy witness");
        }
    }

    #[test]
    fn generic_simplex_lattice_counts() {
        // Four planes cutting a compact simplex around the origin.
        let dirs = [
            Vector3::new(1.0, 1.0, 1.0),
            Vector3::new(1.0, -1.0, -1.0),
            Vector3::new(-1.0, 1.0, -1.0),
            Vector3::new(-1.0, -1.0, 1.0),
        ];
        let halfspaces: Vec<HalfSpace> = dirs
            .iter()
            .map(|d| klein::KleinPlane::new(*d, 0.3).to_halfspace())
            .collect();
        let p = reduce_irredundant(&halfspaces, 3.0).unwrap();
        assert_eq!(p.dim(), 3);
        assert!(p.is_compact());
        assert_eq!(p.faces_of_dim(2).count(), 4);
        assert_eq!(p.faces_of_dim(1).count(), 6);
        assert_eq!(p.faces_of_dim(0).count(), 4);
        assert_eq!(p.euler_characteristic(), 2);
        // Every proper face lies in a facet.
        for f in p.face_lattice().iter().filter(|f| f.dim < 2) {
            assert!(
                p.facets().any(|g| f.subset_of(g)),
                "face of dim {} not contained in a facet",
                f.dim
            );
        }
    }

    #[test]
    fn single_halfspace_has_one_real_facet() {
        let h = HalfSpace::new(Vector4::new(0.0, 1.0, 0.0, 0.0)).unwrap();
        let p = reduce_irredundant(&[h], 2.0).unwrap();
        let real: Vec<&Face> = p.faces_of_dim(2).filter(|f| !f.is_artificial).collect();
        assert_eq!(real.len(), 1);
        assert!(p.faces_of_dim(2).any(|f| f.is_artificial));
        assert!(!p.is_compact());
        // The real facet lies in the bounding plane x1 = 0.
        for w in &real[0].witnesses_klein {
            assert!(w[0].abs() <= 1e-9);
        }
    }

    #[test]
    fn compact_lattice_edge_and_vertex_regularity() {
        let mut rng = StdRng::seed_from_u64(3);
        let center = MinkowskiPoint::origin();
        let sites: Vec<MinkowskiPoint> = (0..12).map(|_| rand_point(&mut rng, 0.5)).collect();
        let halfspaces: Vec<HalfSpace> = sites
            .iter()
            .map(|s| bisector_halfspace(&center, s).unwrap())
            .collect();
        let p = reduce_irredundant(&halfspaces, 3.0).unwrap();
        // Every vertex lies on >= 3 facet planes; every edge on exactly 2.
        for f in p.faces_of_dim(0) {
            assert!(f.halfspace_ids.len() + f.truncation_ids.len() >= 3);
        }
        for f in p.faces_of_dim(1) {
            assert_eq!(f.halfspace_ids.len() + f.truncation_ids.len(), 2);
        }
        assert_eq!(p.euler_characteristic(), 2);
    }

    #[test]
    fn reduce_is_idempotent() {
        let mut rng = StdRng::seed_from_u64(9);
        let center = MinkowskiPoint::origin();
        let halfspaces: Vec<HalfSpace> = (0..15)
            .map(|_| bisector_halfspace(&center, &rand_point(&mut rng, 0.7)).unwrap())
            .collect();
        let p1 = reduce_irredundant(&halfspaces, 2.5).unwrap();
        let p2 = reduce_irredundant(p1.halfspaces(), 2.5).unwrap();
        assert_eq!(p1.halfspaces().len(), p2.halfspaces().len());
        assert_eq!(p1.faces_of_dim(0).count(), p2.faces_of_dim(0).count());
        assert_eq!(p1.faces_of_dim(1).count(), p2.faces_of_dim(1).count());
        assert_eq!(p1.faces_of_dim(2).count(), p2.faces_of_dim(2).count());
    }

    #[test]
    fn lattice_is_isometry_invariant() {
        use crate::hyperbolic::{apply, LorentzIsometry};
        let mut rng = StdRng::seed_from_u64(11);
        let center = MinkowskiPoint::origin();
        let sites: Vec<MinkowskiPoint> = (0..10).map(|_| rand_point(&mut rng, 0.5)).collect();
        let g = LorentzIsometry::boost_x(0.4).compose(&LorentzIsometry::rotation_z(1.1));
        let hs: Vec<HalfSpace> = sites
            .iter()
            .map(|s| bisector_halfspace(&center, s).unwrap())
            .collect();
        let hs_moved: Vec<HalfSpace> = sites
            .iter()
            .map(|s| bisector_halfspace(&apply(&g, &center), &apply(&g, s)).unwrap())
            .collect();
        // Same combinatorics up to relabeling: counts per dimension agree
        // (compare non-artificial faces; the shell is not moved with the
        // configuration).
        let p = reduce_irredundant(&hs, 4.0).unwrap();
        let q = reduce_irredundant(&hs_moved, 4.0).unwrap();
        let count_real = |poly: &ConvexPolyhedron, d: usize| {
            poly.faces_of_dim(d).filter(|f| !f.is_artificial).count()
        };
        for d in 0..=2 {
            assert_eq!(count_real(&p, d), count_real(&q, d), "dim {d} mismatch");
        }
    }

    #[test]
    fn intersect_self_is_identity() {
        let mut rng = StdRng::seed_from_u64(21);
        let center = MinkowskiPoint::origin();
        let hs: Vec<HalfSpace> = (0..8)
            .map(|_| bisector_halfspace(&center, &rand_point(&mut rng, 0.6)).unwrap())
            .collect();
        let p = reduce_irredundant(&hs, 2.5).unwrap();
        let pp = intersect(&p, &p).unwrap();
        assert_eq!(p.halfspaces().len(), pp.halfspaces().len());
        for d in 0..=2 {
            assert_eq!(p.faces_of_dim(d).count(), pp.faces_of_dim(d).count());
        }
    }

    #[test]
    fn intersect_transverse_halfspaces_gives_wedge() {
        let h1 = HalfSpace::new(Vector4::new(0.0, 1.0, 0.0, 0.0)).unwrap();
        let h2 = HalfSpace::new(Vector4::new(0.0, 0.0, 1.0, 0.0)).unwrap();
        let p1 = reduce_irredundant(&[h1], 2.0).unwrap();
        let p2 = reduce_irredundant(&[h2], 2.0).unwrap();
        let w = intersect(&p1, &p2).unwrap();
        assert_eq!(w.halfspaces().len(), 2);
        let real_edges: Vec<&Face> = w
            .faces_of_dim(1)
            .filter(|f| !f.is_artificial && f.halfspace_ids.len() == 2)
            .collect();
        assert_eq!(real_edges.len(), 1, "wedge has one real 1-face");
    }

    #[test]
    fn intersect_faces_come_from_operands() {
        let mut rng = StdRng::seed_from_u64(33);
        let center = MinkowskiPoint::origin();
        let mk = |rng: &mut StdRng, n: usize, spread: f64| {
            let hs: Vec<HalfSpace> = (0..n)
                .map(|_| bisector_halfspace(&center, &rand_point(rng, spread)).unwrap())
                .collect();
            reduce_irredundant(&hs, 2.5).unwrap()
        };
        let a = mk(&mut rng, 10, 0.5);
        let b = mk(&mut rng, 10, 0.55);
        let x = intersect(&a, &b).unwrap();
        // Active half-space bookkeeping: every non-artificial facet of the
        // intersection is supported by a half-space of a or of b, and its
        // witnesses lie in that operand.
        for f in x.faces_of_dim(2).filter(|f| !f.is_artificial) {
            assert_eq!(f.halfspace_ids.len(), 1);
            let h = &x.halfspaces()[f.halfspace_ids[0]];
            let in_a = a
                .halfspaces()
                .iter()
                .any(|g| (g.normal() - h.normal()).norm() < 1e-9);
            let in_b = b
                .halfspaces()
                .iter()
                .any(|g| (g.normal() - h.normal()).norm() < 1e-9);
            assert!(in_a || in_b);
            let operand = if in_a { &a } else { &b };
            for w in &f.witnesses_klein {
                assert!(operand.contains_klein(w, 1e-7));
            }
        }
    }

    #[test]
    fn near_coincident_planes_resolve_to_the_tighter_one() {
        // Two parallel planes 1e-8 apart: the tighter clips first, and the
        // looser is then redundant within tolerance rather than ambiguous.
        let h1 = HalfSpace::new(Vector4::new(0.0, 1.0, 0.0, 0.0)).unwrap();
        let h2 = klein::KleinPlane {
            n: Vector3::new(1.0, 0.0, 0.0),
            d: -1e-8,
        }
        .to_halfspace();
        let h3 = HalfSpace::new(Vector4::new(0.0, 0.0, 1.0, 0.0)).unwrap();
        let p = reduce_irredundant(&[h1, h3, h2], 2.0).unwrap();
        assert_eq!(p.halfspaces().len(), 2);
        assert!(p.input_ids().contains(&2), "the tighter plane is retained");
    }
}
