//! Vertex/edge lattice of a bounded intersection of Euclidean half-spaces,
//! maintained incrementally: seed with a known compact polytope, then clip by
//! one plane at a time. Face identity is combinatorial (active constraint
//! sets) with near-equalities snapped inside a fixed tolerance band; anything
//! straddling the band is reported as a degenerate input rather than guessed.

use super::klein::KleinPlane;
use super::PolytopeError;
use nalgebra::Vector3;

/// Slack at or below which a point counts as lying on a plane.
pub const TOL_ON: f64 = 1e-9;
/// Slacks in `(TOL_ON, TOL_AMB)` are ambiguous and abort the construction.
pub const TOL_AMB: f64 = 1e-7;

#[derive(Debug, Clone)]
pub struct ClipVertex {
    pub pos: Vector3<f64>,
    /// Sorted ids of constraints active at this vertex.
    pub active: Vec<u32>,
    pub alive: bool,
}

#[derive(Debug, Clone)]
pub struct ClipEdge {
    pub ends: [u32; 2],
    /// Sorted ids of constraints active on the edge interior.
    pub active: Vec<u32>,
    pub alive: bool,
}

#[derive(Debug, Clone, Default)]
pub struct ClipLattice {
    pub verts: Vec<ClipVertex>,
    pub edges: Vec<ClipEdge>,
    /// Constraint ids that cut at least once (irredundant so far).
    pub applied: Vec<u32>,
}

fn insert_sorted(v: &mut Vec<u32>, x: u32) {
    if let Err(pos) = v.binary_search(&x) {
        v.insert(pos, x);
    }
}

fn sorted_intersection(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Rank of the span of the normals of `ids`, at the clipping tolerance.
fn normal_rank(ids: &[u32], planes: &[KleinPlane]) -> usize {
    let mut basis: Vec<Vector3<f64>> = Vec::with_capacity(3);
    for &id in ids {
        let mut v = planes[id as usize].n;
        for b in &basis {
            v -= b * b.dot(&v);
        }
        if v.norm() > 1e-6 {
            basis.push(v.normalize());
            if basis.len() == 3 {
                break;
            }
        }
    }
    basis.len()
}

impl ClipLattice {
    pub fn alive_vertices(&self) -> impl Iterator<Item = (u32, &ClipVertex)> {
        self.verts
            .iter()
            .enumerate()
            .filter(|(_, v)| v.alive)
            .map(|(i, v)| (i as u32, v))
    }

    pub fn alive_edges(&self) -> impl Iterator<Item = &ClipEdge> {
        self.edges.iter().filter(|e| e.alive)
    }

    /// Brute-force vertex enumeration over plane triples; used for the seed
    /// shell and for finite hulls, where the plane count is modest.
    pub fn enumerate(planes: &[KleinPlane]) -> Result<Self, PolytopeError> {
        let m = planes.len();
        let mut verts: Vec<ClipVertex> = Vec::new();
        for i in 0..m {
            for j in (i + 1)..m {
                let cross_ij = planes[i].n.cross(&planes[j].n);
                if cross_ij.norm() < 1e-9 {
                    continue;
                }
                for k in (j + 1)..m {
                    let n1 = planes[i].n;
                    let n2 = planes[j].n;
                    let n3 = planes[k].n;
                    let det = cross_ij.dot(&n3);
                    if det.abs() < 1e-9 {
                        continue;
                    }
                    let x = (n2.cross(&n3) * planes[i].d
                        + n3.cross(&n1) * planes[j].d
                        + cross_ij * planes[k].d)
                        / det;
                    let mut feasible = true;
                    for p in planes {
                        if p.eval(&x) > TOL_ON {
                            feasible = false;
                            break;
                        }
                    }
                    if !feasible {
                        continue;
                    }
                    // Merge with an existing candidate if one is close.
                    if !verts.iter().any(|v| (v.pos - x).norm() <= 10.0 * TOL_ON) {
                        verts.push(ClipVertex {
                            pos: x,
                            active: Vec::new(),
                            alive: true,
                        });
                    }
                }
            }
        }
        if verts.is_empty() {
            return Err(PolytopeError::EmptyPolyhedron);
        }
        // Recompute active sets at the merged positions and check the band.
        for v in &mut verts {
            for (id, p) in planes.iter().enumerate() {
                let s = p.eval(&v.pos).abs();
                if s <= TOL_ON {
                    v.active.push(id as u32);
                } else if s < TOL_AMB {
                    return Err(PolytopeError::DegenerateInput {
                        detail: format!(
                            "vertex slack {s:.2e} straddles the snapping band; perturb the input"
                        ),
                    });
                }
            }
            if normal_rank(&v.active, planes) < 3 {
                return Err(PolytopeError::DegenerateInput {
                    detail: "enumerated vertex is not determined by rank-3 active set".into(),
                });
            }
        }

        let mut lattice = Self {
            verts,
            edges: Vec::new(),
            applied: Vec::new(),
        };
        let nv = lattice.verts.len();
        for a in 0..nv {
            'pair: for b in (a + 1)..nv {
                let common =
                    sorted_intersection(&lattice.verts[a].active, &lattice.verts[b].active);
                if normal_rank(&common, planes) != 2 {
                    continue;
                }
                // Reject pairs with a third collinear vertex between them.
                let pa = lattice.verts[a].pos;
                let pb = lattice.verts[b].pos;
                for (c, v) in lattice.verts.iter().enumerate() {
                    if c == a || c == b {
                        continue;
                    }
                    if common.iter().all(|id| v.active.contains(id)) {
                        let t = (v.pos - pa).dot(&(pb - pa)) / (pb - pa).norm_squared();
                        if t > 1e-9
                            && t < 1.0 - 1e-9
                            && (v.pos - (pa + (pb - pa) * t)).norm() <= 10.0 * TOL_ON
                        {
                            continue 'pair;
                        }
                    }
                }
                lattice.edges.push(ClipEdge {
                    ends: [a as u32, b as u32],
                    active: common,
                    alive: true,
                });
            }
        }
        let mut applied: Vec<u32> = lattice
            .verts
            .iter()
            .flat_map(|v| v.active.iter().copied())
            .collect();
        applied.sort_unstable();
        applied.dedup();
        lattice.applied = applied;
        Ok(lattice)
    }

    /// Clips by `planes[id]`. Returns `Ok(false)` when the plane does not cut
    /// (it is redundant or merely tangent and is not recorded).
    pub fn clip(&mut self, planes: &[KleinPlane], id: u32) -> Result<bool, PolytopeError> {
        let plane = &planes[id as usize];
        let mut any_above = false;
        let mut slacks = vec![0.0f64; self.verts.len()];
        for (vi, v) in self.verts.iter().enumerate() {
            if !v.alive {
                continue;
            }
            let s = plane.eval(&v.pos);
            slacks[vi] = s;
            if s > TOL_ON {
                any_above = true;
            }
        }
        if !any_above {
            return Ok(false);
        }
        // The plane definitely cuts: now slacks inside the ambiguity band are
        // genuine coin tosses and must be surfaced.
        #[derive(Clone, Copy, PartialEq)]
        enum Side {
            Above,
            On,
            Below,
        }
        let mut side = vec![Side::Below; self.verts.len()];
        let mut all_above = true;
        for (vi, v) in self.verts.iter().enumerate() {
            if !v.alive {
                continue;
            }
            let s = slacks[vi];
            side[vi] = if s.abs() <= TOL_ON {
                Side::On
            } else if s.abs() < TOL_AMB {
                return Err(PolytopeError::DegenerateInput {
                    detail: format!(
                        "clip slack {:.2e} straddles the snapping band; perturb the input",
                        s.abs()
                    ),
                });
            } else if s > 0.0 {
                Side::Above
            } else {
                Side::Below
            };
            if side[vi] != Side::Above {
                all_above = false;
            }
        }
        if all_above {
            return Err(PolytopeError::EmptyPolyhedron);
        }

        // New vertices on crossing edges; points lying on the new plane per
        // other active constraint, for rebuilding the boundary of the new facet.
        let mut new_plane_points: Vec<u32> = Vec::new();
        let nedges = self.edges.len();
        for ei in 0..nedges {
            if !self.edges[ei].alive {
                continue;
            }
            let [a, b] = self.edges[ei].ends;
            let (sa, sb) = (side[a as usize], side[b as usize]);
            match (sa, sb) {
                (Side::Above, Side::Above) => self.edges[ei].alive = false,
                (Side::Above, Side::On) | (Side::On, Side::Above) => self.edges[ei].alive = false,
                (Side::Above, Side::Below) | (Side::Below, Side::Above) => {
                    let (va, vb) = (self.verts[a as usize].pos, self.verts[b as usize].pos);
                    let (fa, fb) = (slacks[a as usize], slacks[b as usize]);
                    let t = fa / (fa - fb);
                    let pos = va + (vb - va) * t;
                    let mut active = self.edges[ei].active.clone();
                    insert_sorted(&mut active, id);
                    let new_id = self.verts.len() as u32;
                    self.verts.push(ClipVertex {
                        pos,
                        active,
                        alive: true,
                    });
                    slacks.push(0.0);
                    side.push(Side::On);
                    new_plane_points.push(new_id);
                    let above_end = if sa == Side::Above { 0 } else { 1 };
                    self.edges[ei].ends[above_end] = new_id;
                }
                _ => {}
            }
        }
        for (vi, v) in self.verts.iter_mut().enumerate() {
            if !v.alive {
                continue;
            }
            match side[vi] {
                Side::Above => v.alive = false,
                Side::On => {
                    insert_sorted(&mut v.active, id);
                    // Edges fully on the plane also gain the constraint.
                    new_plane_points.push(vi as u32);
                }
                Side::Below => {}
            }
        }
        for e in self.edges.iter_mut().filter(|e| e.alive) {
            let (a, b) = (e.ends[0] as usize, e.ends[1] as usize);
            if side[a] == Side::On && side[b] == Side::On {
                insert_sorted(&mut e.active, id);
            }
        }

        // Boundary edges of the new facet: for each other constraint c, the
        // plane-k points with c active form (generically) one new edge.
        let mut by_constraint: std::collections::BTreeMap<u32, Vec<u32>> =
            std::collections::BTreeMap::new();
        for &vi in &new_plane_points {
            for &c in &self.verts[vi as usize].active {
                if c != id {
                    by_constraint.entry(c).or_default().push(vi);
                }
            }
        }
        for (c, mut pts) in by_constraint {
            pts.sort_unstable();
            pts.dedup();
            if pts.len() < 2 {
                continue;
            }
            if pts.len() > 2 {
                // A convex face meets the plane in one segment; more points
                // means collinear middles, so keep the extreme pair.
                let dir = planes[id as usize].n.cross(&planes[c as usize].n);
                if dir.norm() < 1e-9 {
                    continue;
                }
                pts.sort_by(|&u, &v| {
                    let tu = dir.dot(&self.verts[u as usize].pos);
                    let tv = dir.dot(&self.verts[v as usize].pos);
                    tu.partial_cmp(&tv).unwrap()
                });
                pts = vec![pts[0], *pts.last().unwrap()];
            }
            let exists = self.edges.iter().any(|e| {
                e.alive
                    && ((e.ends[0] == pts[0] && e.ends[1] == pts[1])
                        || (e.ends[0] == pts[1] && e.ends[1] == pts[0]))
            });
            if exists {
                continue;
            }
            let active = sorted_intersection(
                &self.verts[pts[0] as usize].active,
                &self.verts[pts[1] as usize].active,
            );
            self.edges.push(ClipEdge {
                ends: [pts[0], pts[1]],
                active,
                alive: true,
            });
        }

        insert_sorted(&mut self.applied, id);
        Ok(true)
    }

    /// Alive vertex ids on which constraint `id` is active.
    pub fn facet_vertex_ids(&self, id: u32) -> Vec<u32> {
        self.alive_vertices()
            .filter(|(_, v)| v.active.binary_search(&id).is_ok())
            .map(|(i, _)| i)
            .collect()
    }

    /// Affine rank of a vertex id set (0 for a point, 2 for a facet).
    pub fn affine_rank(&self, ids: &[u32]) -> usize {
        if ids.len() <= 1 {
            return 0;
        }
        let base = self.verts[ids[0] as usize].pos;
        let mut basis: Vec<Vector3<f64>> = Vec::new();
        for &vi in &ids[1..] {
            let mut v = self.verts[vi as usize].pos - base;
            for b in &basis {
                v -= b * b.dot(&v);
            }
            if v.norm() > 100.0 * TOL_ON {
                basis.push(v.normalize());
                if basis.len() == 3 {
                    break;
                }
            }
        }
        basis.len()
    }

    /// Positions of all alive vertices, paired with their ids.
    pub fn positions(&self) -> Vec<(u32, Vector3<f64>)> {
        self.alive_vertices().map(|(i, v)| (i, v.pos)).collect()
    }

    /// True when the alive vertex sets coincide within `tol` (as point sets).
    pub fn same_vertex_set(&self, other: &Self, tol: f64) -> bool {
        let a: Vec<Vector3<f64>> = self.alive_vertices().map(|(_, v)| v.pos).collect();
        let b: Vec<Vector3<f64>> = other.alive_vertices().map(|(_, v)| v.pos).collect();
        if a.len() != b.len() {
            return false;
        }
        a.iter().all(|p| b.iter().any(|q| (p - q).norm() <= tol))
            && b.iter().all(|p| a.iter().any(|q| (p - q).norm() <= tol))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(half: f64) -> Vec<KleinPlane> {
        let mut planes = Vec::new();
        for axis in 0..3 {
            for sign in [-1.0, 1.0] {
                let mut n = Vector3::zeros();
                n[axis] = sign;
                planes.push(KleinPlane { n, d: half });
            }
        }
        planes
    }

    #[test]
    fn cube_lattice_counts() {
        let planes = cube(0.5);
        let lat = ClipLattice::enumerate(&planes).unwrap();
        assert_eq!(lat.alive_vertices().count(), 8);
        assert_eq!(lat.alive_edges().count(), 12);
        assert_eq!(lat.applied.len(), 6);
    }

    #[test]
    fn clipping_a_corner_adds_a_triangle() {
        let mut planes = cube(0.5);
        planes.push(KleinPlane::new(Vector3::new(1.0, 1.0, 1.0), 1.2));
        let mut lat = ClipLattice::enumerate(&planes[..6]).unwrap();
        let cut = lat.clip(&planes, 6).unwrap();
        assert!(cut);
        assert_eq!(lat.alive_vertices().count(), 10); // 8 - 1 + 3
        assert_eq!(lat.alive_edges().count(), 15);
        assert_eq!(lat.facet_vertex_ids(6).len(), 3);
    }

    #[test]
    fn redundant_plane_is_skipped() {
        let planes_base = cube(0.5);
        let mut planes = planes_base.clone();
        planes.push(KleinPlane::new(Vector3::new(1.0, 0.0, 0.0), 2.0));
        let mut lat = ClipLattice::enumerate(&planes_base).unwrap();
        assert!(!lat.clip(&planes, 6).unwrap());
        assert_eq!(lat.applied.len(), 6);
    }

    #[test]
    fn tangent_plane_through_edge_is_skipped() {
        // Touches the cube exactly along the edge x=y=0.5 and cuts nothing.
        let planes_base = cube(0.5);
        let mut planes = planes_base.clone();
        planes.push(KleinPlane::new(Vector3::new(1.0, 1.0, 0.0), 1.0));
        let mut lat = ClipLattice::enumerate(&planes_base).unwrap();
        assert!(!lat.clip(&planes, 6).unwrap());
        // Active sets stay clean: no vertex picked up the tangent constraint.
        assert!(lat.alive_vertices().all(|(_, v)| !v.active.contains(&6)));
    }

    #[test]
    fn plane_through_vertices_snaps_on() {
        // Cuts the cube through four vertices: the diagonal plane x + y <= 0
        // keeps half, and the four vertices with x = -y stay on it.
        let planes_base = cube(0.5);
        let mut planes = planes_base.clone();
        planes.push(KleinPlane::new(Vector3::new(1.0, 1.0, 0.0), 0.0));
        let mut lat = ClipLattice::enumerate(&planes_base).unwrap();
        assert!(lat.clip(&planes, 6).unwrap());
        let facet = lat.facet_vertex_ids(6);
        assert_eq!(facet.len(), 4);
        assert_eq!(lat.affine_rank(&facet), 2);
        // Two corners cut off, four stay on the plane, two stay below.
        assert_eq!(lat.alive_vertices().count(), 6);
    }

    #[test]
    fn slack_in_the_ambiguity_band_errors() {
        // A genuinely cutting plane passing 1e-8 from a cube vertex: neither
        // on it nor clearly off it at tolerance.
        let planes_base = cube(0.5);
        let mut planes = planes_base.clone();
        let d = 1.0 / 2.0f64.sqrt() - 1e-8;
        planes.push(KleinPlane::new(Vector3::new(1.0, 1.0, 0.0), d * 2.0f64.sqrt()));
        let mut lat = ClipLattice::enumerate(&planes_base).unwrap();
        let err = lat.clip(&planes, 6).unwrap_err();
        assert!(matches!(err, PolytopeError::DegenerateInput { .. }), "{err}");
    }

    #[test]
    fn empty_intersection_is_reported() {
        let planes_base = cube(0.5);
        let mut planes = planes_base.clone();
        planes.push(KleinPlane::new(Vector3::new(1.0, 0.0, 0.0), -2.0));
        let mut lat = ClipLattice::enumerate(&planes_base).unwrap();
        assert!(matches!(
            lat.clip(&planes, 6),
            Err(PolytopeError::EmptyPolyhedron)
        ));
    }
}
