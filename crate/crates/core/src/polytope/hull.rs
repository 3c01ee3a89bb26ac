//! Finite convex hulls and the compactification helpers built on them:
//! `enclose_compact` (a compact polyhedron holding a margin-neighborhood of a
//! point set) and `truncate_to_compact` (replace the truncation shell of an
//! unbounded polyhedron by honest half-spaces away from a kept compact set).

use super::clip::ClipLattice;
use super::klein::KleinPlane;
use super::{assemble, build_clipped, ConvexPolyhedron, Face, PolytopeError, Seed};
use crate::hyperbolic::{
    dist, minkowski_dot, HalfSpace, LorentzIsometry, MinkowskiPoint, TAU_GEOM, TAU_RANK,
};
use nalgebra::{Matrix4, Vector3, Vector4};

const HULL_MAX_POINTS: usize = 120;

/// Orthonormal directions spanning the affine hull of `pts`, with the
/// centroid; the rank is `basis.len()`.
fn affine_basis(pts: &[Vector3<f64>]) -> (Vector3<f64>, Vec<Vector3<f64>>) {
    let mut c = Vector3::zeros();
    for p in pts {
        c += p;
    }
    c /= pts.len() as f64;
    let scale = pts
        .iter()
        .map(|p| (p - c).norm())
        .fold(0.0f64, f64::max)
        .max(1e-12);
    let mut basis: Vec<Vector3<f64>> = Vec::new();
    for p in pts {
        let mut v = p - c;
        for b in &basis {
            v -= b * b.dot(&v);
        }
        if v.norm() > TAU_RANK * scale {
            basis.push(v.normalize());
            if basis.len() == 3 {
                break;
            }
        }
    }
    (c, basis)
}

/// Convex hull of finitely many points of `H^3`. The result is compact; its
/// vertices are a subset of the inputs; lower-dimensional inputs produce a
/// polyhedron of the matching dimension.
pub fn convex_hull_finite(points: &[MinkowskiPoint]) -> Result<ConvexPolyhedron, PolytopeError> {
    if points.is_empty() {
        return Err(PolytopeError::PreconditionViolated {
            detail: "convex hull of an empty set".into(),
        });
    }
    if points.len() > HULL_MAX_POINTS {
        return Err(PolytopeError::TooLarge {
            n: points.len(),
            max: HULL_MAX_POINTS,
        });
    }
    let mut pts: Vec<MinkowskiPoint> = Vec::new();
    for p in points {
        if !pts.iter().any(|q| dist(p, q) <= TAU_GEOM) {
            pts.push(*p);
        }
    }
    let klein: Vec<Vector3<f64>> = pts.iter().map(|p| p.to_klein()).collect();
    let radius = pts
        .iter()
        .map(|p| dist(&MinkowskiPoint::origin(), p))
        .fold(0.1f64, f64::max)
        + 0.5;

    let (centroid, basis) = affine_basis(&klein);
    match basis.len() {
        0 => Ok(hull_point(klein[0], radius)),
        1 => Ok(hull_segment(&klein, centroid, &basis[0], radius)),
        2 => Ok(hull_polygon(&klein, centroid, &basis, radius)),
        _ => hull_solid(&klein, radius),
    }
}

fn hull_point(k: Vector3<f64>, radius: f64) -> ConvexPolyhedron {
    let mut halfspaces = Vec::with_capacity(6);
    for axis in 0..3 {
        for sign in [1.0f64, -1.0] {
            let mut n = Vector3::zeros();
            n[axis] = sign;
            halfspaces.push(KleinPlane::new(n, sign * k[axis]).to_halfspace());
        }
    }
    let face = Face {
        dim: 0,
        halfspace_ids: (0..6).collect(),
        truncation_ids: vec![],
        is_artificial: false,
        witnesses_klein: vec![k],
        vertex_ids: vec![0],
    };
    ConvexPolyhedron::from_parts(halfspaces, 0, vec![face], vec![k], radius)
}

fn hull_segment(
    klein: &[Vector3<f64>],
    centroid: Vector3<f64>,
    u: &Vector3<f64>,
    radius: f64,
) -> ConvexPolyhedron {
    let ts: Vec<f64> = klein.iter().map(|k| u.dot(&(k - centroid))).collect();
    let (tmin, tmax) = ts
        .iter()
        .fold((f64::MAX, f64::MIN), |(lo, hi), &t| (lo.min(t), hi.max(t)));
    let a = centroid + u * tmin;
    let b = centroid + u * tmax;
    // Complete u to an orthonormal frame for the sleeve planes.
    let pick = if u[0].abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let v = (pick - u * u.dot(&pick)).normalize();
    let w = u.cross(&v);
    let halfspaces = vec![
        KleinPlane::new(v, v.dot(&a)).to_halfspace(),
        KleinPlane::new(-v, -v.dot(&a)).to_halfspace(),
        KleinPlane::new(w, w.dot(&a)).to_halfspace(),
        KleinPlane::new(-w, -w.dot(&a)).to_halfspace(),
        KleinPlane::new(*u, u.dot(&b)).to_halfspace(),
        KleinPlane::new(-u, -u.dot(&a)).to_halfspace(),
    ];
    let sleeve: Vec<usize> = vec![0, 1, 2, 3];
    let faces = vec![
        Face {
            dim: 1,
            halfspace_ids: sleeve.clone(),
            truncation_ids: vec![],
            is_artificial: false,
            witnesses_klein: vec![a, b],
            vertex_ids: vec![0, 1],
        },
        Face {
            dim: 0,
            halfspace_ids: vec![0, 1, 2, 3, 5],
            truncation_ids: vec![],
            is_artificial: false,
            witnesses_klein: vec![a],
            vertex_ids: vec![0],
        },
        Face {
            dim: 0,
            halfspace_ids: vec![0, 1, 2, 3, 4],
            truncation_ids: vec![],
            is_artificial: false,
            witnesses_klein: vec![b],
            vertex_ids: vec![1],
        },
    ];
    ConvexPolyhedron::from_parts(halfspaces, 1, faces, vec![a, b], radius)
}

fn hull_polygon(
    klein: &[Vector3<f64>],
    centroid: Vector3<f64>,
    basis: &[Vector3<f64>],
    radius: f64,
) -> ConvexPolyhedron {
    let (e1, e2) = (basis[0], basis[1]);
    let w = e1.cross(&e2);
    let q: Vec<(f64, f64)> = klein
        .iter()
        .map(|k| (e1.dot(&(k - centroid)), e2.dot(&(k - centroid))))
        .collect();
    let hull = monotone_chain(&q);
    let hull_pts: Vec<Vector3<f64>> = hull
        .iter()
        .map(|&i| centroid + e1 * q[i].0 + e2 * q[i].1)
        .collect();

    let mut halfspaces = vec![
        KleinPlane::new(w, w.dot(&centroid)).to_halfspace(),
        KleinPlane::new(-w, -w.dot(&centroid)).to_halfspace(),
    ];
    let m = hull_pts.len();
    for i in 0..m {
        let p0 = hull_pts[i];
        let p1 = hull_pts[(i + 1) % m];
        let d2 = Vector3::new(0.0, 0.0, 0.0) + (p1 - p0);
        // Outward normal within the polygon plane for a ccw boundary.
        let n = d2.cross(&w).normalize();
        halfspaces.push(KleinPlane::new(n, n.dot(&p0)).to_halfspace());
    }

    let mut faces = vec![Face {
        dim: 2,
        halfspace_ids: vec![0, 1],
        truncation_ids: vec![],
        is_artificial: false,
        witnesses_klein: hull_pts.clone(),
        vertex_ids: (0..m as u32).collect(),
    }];
    for i in 0..m {
        faces.push(Face {
            dim: 1,
            halfspace_ids: vec![0, 1, 2 + i],
            truncation_ids: vec![],
            is_artificial: false,
            witnesses_klein: vec![hull_pts[i], hull_pts[(i + 1) % m]],
            vertex_ids: vec![i as u32, ((i + 1) % m) as u32],
        });
    }
    for i in 0..m {
        let prev = (i + m - 1) % m;
        faces.push(Face {
            dim: 0,
            halfspace_ids: vec![0, 1, 2 + prev, 2 + i],
            truncation_ids: vec![],
            is_artificial: false,
            witnesses_klein: vec![hull_pts[i]],
            vertex_ids: vec![i as u32],
        });
    }
    ConvexPolyhedron::from_parts(halfspaces, 2, faces, hull_pts, radius)
}

fn monotone_chain(q: &[(f64, f64)]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..q.len()).collect();
    idx.sort_by(|&a, &b| q[a].partial_cmp(&q[b]).unwrap());
    idx.dedup_by(|&mut a, &mut b| {
        (q[a].0 - q[b].0).abs() < 1e-12 && (q[a].1 - q[b].1).abs() < 1e-12
    });
    let cross = |o: usize, a: usize, b: usize| -> f64 {
        (q[a].0 - q[o].0) * (q[b].1 - q[o].1) - (q[a].1 - q[o].1) * (q[b].0 - q[o].0)
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], i) <= 0.0 {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], i) <= 0.0 {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn hull_solid(klein: &[Vector3<f64>], radius: f64) -> Result<ConvexPolyhedron, PolytopeError> {
    let n_pts = klein.len();
    let scale = klein.iter().map(|k| k.norm()).fold(1e-9f64, f64::max);
    let tol = 1e-9 * scale.max(1.0);

    // Supporting planes from point triples.
    let mut planes: Vec<KleinPlane> = Vec::new();
    for i in 0..n_pts {
        for j in (i + 1)..n_pts {
            for k in (j + 1)..n_pts {
                let n = (klein[j] - klein[i]).cross(&(klein[k] - klein[i]));
                if n.norm() < 1e-12 {
                    continue;
                }
                let n = n.normalize();
                let d = n.dot(&klein[i]);
                let (mut smax, mut smin) = (f64::MIN, f64::MAX);
                for p in klein {
                    let s = n.dot(p) - d;
                    smax = smax.max(s);
                    smin = smin.min(s);
                }
                let supporting = if smax <= tol {
                    Some(KleinPlane { n, d })
                } else if smin >= -tol {
                    Some(KleinPlane { n: -n, d: -d })
                } else {
                    None
                };
                let Some(plane) = supporting else { continue };
                let dup = planes.iter().any(|p| {
                    (p.n - plane.n).norm() < 1e-6 && (p.d - plane.d).abs() < 1e-6
                });
                if !dup {
                    planes.push(plane);
                }
            }
        }
    }
    if planes.len() < 4 {
        return Err(PolytopeError::DegenerateInput {
            detail: "point set has no full-dimensional hull at tolerance".into(),
        });
    }

    // Refit each supporting plane to its support set so that coplanar point
    // groups produce one plane at machine precision.
    for plane in &mut planes {
        let support: Vec<Vector3<f64>> = klein
            .iter()
            .filter(|p| plane.eval(p).abs() <= 1e-6)
            .copied()
            .collect();
        if support.len() < 3 {
            continue;
        }
        let (c, basis) = affine_basis(&support);
        if basis.len() == 2 {
            let mut n = basis[0].cross(&basis[1]).normalize();
            if n.dot(&plane.n) < 0.0 {
                n = -n;
            }
            *plane = KleinPlane { n, d: n.dot(&c) };
        }
    }

    let halfspaces: Vec<HalfSpace> = planes.iter().map(|p| p.to_halfspace()).collect();
    let lattice = ClipLattice::enumerate(&planes)?;
    let outcome = super::BuildOutcome {
        lattice,
        planes,
        input_of: (0..halfspaces.len()).collect(),
        n_seed: 0,
    };
    assemble(outcome, &halfspaces, radius, false)
}

/// Lorentz boost taking the origin to `c`.
fn translation_to(c: &MinkowskiPoint) -> LorentzIsometry {
    let r = dist(&MinkowskiPoint::origin(), c);
    if r <= 1e-14 {
        return LorentzIsometry::identity();
    }
    let w = c.to_klein().normalize();
    let (ch, sh) = (r.cosh(), r.sinh());
    let mut m = Matrix4::identity();
    m[(0, 0)] = ch;
    for i in 0..3 {
        m[(0, i + 1)] = sh * w[i];
        m[(i + 1, 0)] = sh * w[i];
        for j in 0..3 {
            m[(i + 1, j + 1)] = if i == j { 1.0 } else { 0.0 } + (ch - 1.0) * w[i] * w[j];
        }
    }
    LorentzIsometry::new(m).expect("boost is Lorentz by construction")
}

fn fibonacci_directions(k: usize) -> Vec<Vector3<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..k)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / k as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Vector3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

/// Hyperbolic distance from a point to the bounding plane of a half-space
/// with unit spacelike normal: `arcsinh(|<p,u>|)`.
fn point_plane_distance(p: &MinkowskiPoint, h: &HalfSpace) -> f64 {
    minkowski_dot(p.coords(), h.normal()).abs().asinh()
}

/// A compact polyhedron whose interior contains every input point at depth at
/// least `margin`: tangent planes of a ball enclosing the whole configuration,
/// with the direction count chosen so the polyhedron stays within
/// `r + 10 margin` of the configuration's center.
pub fn enclose_compact(
    points: &[MinkowskiPoint],
    margin: f64,
) -> Result<ConvexPolyhedron, PolytopeError> {
    if points.is_empty() || margin <= 0.0 {
        return Err(PolytopeError::PreconditionViolated {
            detail: "enclose_compact needs a nonempty point set and a positive margin".into(),
        });
    }
    let mut sum = Vector4::zeros();
    for p in points {
        sum += p.coords();
    }
    let center = MinkowskiPoint::from_timelike(sum)?;
    let r_pts = points
        .iter()
        .map(|p| dist(&center, p))
        .fold(0.0f64, f64::max);
    let ball_r = r_pts + 2.0 * margin;
    let blowout_cap = r_pts + 6.0 * margin;
    let cos_req = ball_r.tanh() / blowout_cap.tanh();
    let theta = cos_req.min(1.0 - 1e-12).acos();
    let mut k = (((2.8 / theta) * (2.8 / theta)).ceil() as usize).clamp(32, 20_000);

    let g = translation_to(&center);
    for _attempt in 0..3 {
        let halfspaces: Vec<HalfSpace> = fibonacci_directions(k)
            .iter()
            .map(|n| {
                let u = Vector4::new(ball_r.sinh(), // tangent plane of ball(origin, ball_r)
                    ball_r.cosh() * n[0],
                    ball_r.cosh() * n[1],
                    ball_r.cosh() * n[2]);
                HalfSpace::new(g.matrix() * u).expect("tangent normals stay spacelike")
            })
            .collect();
        let d_c = dist(&MinkowskiPoint::origin(), &center);
        let reach = ((d_c + r_pts + 10.0 * margin).tanh() * 1.02).min(0.99999);
        let seed = Seed::cube(reach)?;
        let inputs: Vec<(KleinPlane, usize)> = halfspaces
            .iter()
            .enumerate()
            .map(|(i, h)| (KleinPlane::from_halfspace(h), i))
            .collect();
        let poly = assemble(
            build_clipped(&seed, &inputs)?,
            &halfspaces,
            d_c + r_pts + 10.0 * margin,
            false,
        )?;

        let depths_ok = points.iter().all(|p| {
            poly.halfspaces()
                .iter()
                .all(|h| point_plane_distance(p, h) >= margin && h.contains(p, 0.0))
        });
        let sanity_ok = poly.is_compact()
            && poly.vertices_klein().iter().all(|v| {
                v.norm() < 1.0
                    && dist(&center, &MinkowskiPoint::from_klein(*v).unwrap())
                        <= r_pts + 10.0 * margin
            });
        if depths_ok && sanity_ok {
            return Ok(poly);
        }
        k *= 2;
        if k > 40_000 {
            break;
        }
    }
    Err(PolytopeError::DegenerateInput {
        detail: "enclosure did not converge; configuration too large for the margin".into(),
    })
}

/// Replaces the truncation shell of `f` by honest half-spaces: a compact
/// polyhedron of the same dimension containing `keep`, each of whose proper
/// faces either lies in a proper face of `f` or misses `keep`.
pub fn truncate_to_compact(
    f: &ConvexPolyhedron,
    keep: &[MinkowskiPoint],
) -> Result<ConvexPolyhedron, PolytopeError> {
    if keep.is_empty() {
        return Err(PolytopeError::PreconditionViolated {
            detail: "keep set is empty".into(),
        });
    }
    for (i, p) in keep.iter().enumerate() {
        if !f.contains(p, 1e-7) {
            return Err(PolytopeError::PreconditionViolated {
                detail: format!("keep point {i} lies outside the polyhedron"),
            });
        }
    }
    if f.is_compact() {
        return Ok(f.clone());
    }
    let enclosure = enclose_compact(keep, 0.2)?;
    let mut halfspaces: Vec<HalfSpace> = f.halfspaces().to_vec();
    halfspaces.extend_from_slice(enclosure.halfspaces());
    let reach = enclosure
        .vertices_klein()
        .iter()
        .map(|v| v.norm())
        .fold(0.0f64, f64::max)
        * 1.05
        + 0.01;
    let seed = Seed::cube(reach.min(0.99999))?;
    let inputs: Vec<(KleinPlane, usize)> = halfspaces
        .iter()
        .enumerate()
        .map(|(i, h)| (KleinPlane::from_halfspace(h), i))
        .collect();
    assemble(
        build_clipped(&seed, &inputs)?,
        &halfspaces,
        f.truncation_radius(),
        false,
    )
}

/// Intersection of two compact polyhedra (no truncation shell involved).
pub(crate) fn intersect_compact(
    halfspaces: &[HalfSpace],
    a: &ConvexPolyhedron,
    b: &ConvexPolyhedron,
) -> Result<ConvexPolyhedron, PolytopeError> {
    let reach = a
        .vertices_klein()
        .iter()
        .chain(b.vertices_klein())
        .map(|v| v.norm())
        .fold(0.0f64, f64::max)
        * 1.05
        + 0.01;
    let seed = Seed::cube(reach.min(0.99999))?;
    let inputs: Vec<(KleinPlane, usize)> = halfspaces
        .iter()
        .enumerate()
        .map(|(i, h)| (KleinPlane::from_halfspace(h), i))
        .collect();
    assemble(
        build_clipped(&seed, &inputs)?,
        halfspaces,
        a.truncation_radius().max(b.truncation_radius()),
        false,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{bisector_halfspace, HalfSpace};
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
    fn hull_of_one_point_is_zero_dimensional() {
        let p = MinkowskiPoint::from_klein(Vector3::new(0.2, -0.1, 0.3)).unwrap();
        let h = convex_hull_finite(&[p]).unwrap();
        assert_eq!(h.dim(), 0);
        assert!(h.contains(&p, 1e-9));
    }

    #[test]
    fn hull_of_simplex_vertices() {
        let dirs = [
            Vector3::new(1.0, 1.0, 1.0),
            Vector3::new(1.0, -1.0, -1.0),
            Vector3::new(-1.0, 1.0, -1.0),
            Vector3::new(-1.0, -1.0, 1.0),
        ];
        let pts: Vec<MinkowskiPoint> = dirs
            .iter()
            .map(|d| MinkowskiPoint::from_klein(d.normalize() * 0.4).unwrap())
            .collect();
        let h = convex_hull_finite(&pts).unwrap();
        assert_eq!(h.dim(), 3);
        assert_eq!(h.faces_of_dim(2).count(), 4);
        assert_eq!(h.faces_of_dim(0).count(), 4);
        assert!(h.is_compact());
        // Hull vertices are the inputs themselves.
        for v in h.vertices_klein() {
            assert!(pts.iter().any(|p| (p.to_klein() - v).norm() < 1e-9));
        }
    }

    #[test]
    fn hull_contains_inputs_and_is_idempotent() {
        let mut rng = StdRng::seed_from_u64(5);
        let pts: Vec<MinkowskiPoint> = (0..20).map(|_| rand_point(&mut rng, 0.5)).collect();
        let h = convex_hull_finite(&pts).unwrap();
        for p in &pts {
            assert!(h.contains(p, 1e-8), "input point escaped its hull");
        }
        let hull_verts: Vec<MinkowskiPoint> = h
            .vertices_klein()
            .iter()
            .map(|k| MinkowskiPoint::from_klein(*k).unwrap())
            .collect();
        let h2 = convex_hull_finite(&hull_verts).unwrap();
        assert_eq!(h.faces_of_dim(0).count(), h2.faces_of_dim(0).count());
        assert_eq!(h.faces_of_dim(1).count(), h2.faces_of_dim(1).count());
        assert_eq!(h.faces_of_dim(2).count(), h2.faces_of_dim(2).count());
        assert_eq!(h2.euler_characteristic(), 2);
    }

    #[test]
    fn collinear_points_give_a_segment() {
        let pts: Vec<MinkowskiPoint> = [0.0f64, 0.3, 0.7, 1.0]
            .iter()
            .map(|&t| {
                MinkowskiPoint::new(Vector4::new(t.cosh(), t.sinh(), 0.0, 0.0)).unwrap()
            })
            .collect();
        let h = convex_hull_finite(&pts).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.faces_of_dim(0).count(), 2);
        for p in &pts {
            assert!(h.contains(p, 1e-9));
        }
    }

    #[test]
    fn coplanar_points_give_a_polygon() {
        let mut rng = StdRng::seed_from_u64(8);
        let pts: Vec<MinkowskiPoint> = (0..10)
            .map(|_| {
                let k = Vector3::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4), 0.0);
                MinkowskiPoint::from_klein(k).unwrap()
            })
            .collect();
        let h = convex_hull_finite(&pts).unwrap();
        assert_eq!(h.dim(), 2);
        for p in &pts {
            assert!(h.contains(p, 1e-9));
        }
        // Facets of a polygon are its edges; vertices lie in them.
        for v in h.faces_of_dim(0) {
            assert!(h.faces_of_dim(1).any(|e| v.subset_of(e)));
        }
    }

    #[test]
    fn enclose_single_point_contains_margin_ball() {
        let p = MinkowskiPoint::from_klein(Vector3::new(0.1, 0.2, -0.1)).unwrap();
        let margin = 0.3;
        let poly = enclose_compact(&[p], margin).unwrap();
        assert!(poly.is_compact());
        // Points of the margin sphere around p stay inside.
        let basis = p.tangent_basis();
        for dir in fibonacci_directions(50) {
            let v = basis[0] * dir[0] + basis[1] * dir[1] + basis[2] * dir[2];
            let q = p.geodesic(&v, margin);
            assert!(poly.contains(&q, 1e-9));
        }
    }

    #[test]
    fn enclose_respects_depth_and_radius_cap() {
        let mut rng = StdRng::seed_from_u64(13);
        let pts: Vec<MinkowskiPoint> = (0..8).map(|_| rand_point(&mut rng, 0.4)).collect();
        let margin = 0.15;
        let poly = enclose_compact(&pts, margin).unwrap();
        for p in &pts {
            for h in poly.halfspaces() {
                assert!(point_plane_distance(p, h) >= margin);
            }
        }
        // Sanity cap: everything within r + 10*margin of the centroid.
        let mut sum = Vector4::zeros();
        for p in &pts {
            sum += p.coords();
        }
        let c = MinkowskiPoint::from_timelike(sum).unwrap();
        let r = pts.iter().map(|p| dist(&c, p)).fold(0.0f64, f64::max);
        for v in poly.vertices_klein() {
            let q = MinkowskiPoint::from_klein(*v).unwrap();
            assert!(dist(&c, &q) <= r + 10.0 * margin);
        }
    }

    #[test]
    fn truncate_compact_input_is_returned_unchanged() {
        let dirs = [
            Vector3::new(1.0, 1.0, 1.0),
            Vector3::new(1.0, -1.0, -1.0),
            Vector3::new(-1.0, 1.0, -1.0),
            Vector3::new(-1.0, -1.0, 1.0),
        ];
        let halfspaces: Vec<HalfSpace> = dirs
            .iter()
            .map(|d| KleinPlane::new(*d, 0.3).to_halfspace())
            .collect();
        let p = super::super::reduce_irredundant(&halfspaces, 3.0).unwrap();
        assert!(p.is_compact());
        let keep = [MinkowskiPoint::origin()];
        let q = truncate_to_compact(&p, &keep).unwrap();
        assert_eq!(p.faces_of_dim(0).count(), q.faces_of_dim(0).count());
        assert_eq!(p.halfspaces().len(), q.halfspaces().len());
    }

    #[test]
    fn truncate_halfspace_keeps_point_and_classifies_faces() {
        let h = HalfSpace::new(Vector4::new(0.0, 1.0, 0.0, 0.0)).unwrap();
        let f = super::super::reduce_irredundant(&[h], 3.0).unwrap();
        let keep = [MinkowskiPoint::from_klein(Vector3::new(-0.3, 0.0, 0.0)).unwrap()];
        let t = truncate_to_compact(&f, &keep).unwrap();
        assert!(t.is_compact());
        assert!(t.contains(&keep[0], 1e-9));
        // Face disposition: each proper face lies in f's bounding plane or
        // misses the keep set by the enclosure margin.
        let n_f = f.halfspaces().len();
        for face in t.face_lattice().iter().filter(|f| f.dim < 3) {
            let in_f = face.halfspace_ids.iter().any(|&i| i < n_f);
            if !in_f {
                let hs = &t.halfspaces()[face.halfspace_ids[0]];
                assert!(point_plane_distance(&keep[0], hs) >= 0.19);
            }
        }
    }

    #[test]
    fn truncate_rejects_outside_keep_points() {
        let h = HalfSpace::new(Vector4::new(0.0, 1.0, 0.0, 0.0)).unwrap();
        let f = super::super::reduce_irredundant(&[h], 3.0).unwrap();
        let outside = [MinkowskiPoint::from_klein(Vector3::new(0.4, 0.0, 0.0)).unwrap()];
        assert!(matches!(
            truncate_to_compact(&f, &outside),
            Err(PolytopeError::PreconditionViolated { .. })
        ));
    }

    #[test]
    fn truncate_unbounded_voronoi_region_disposition() {
        // A region unbounded toward +x3: bisectors against sites below.
        let mut rng = StdRng::seed_from_u64(44);
        let top = MinkowskiPoint::from_klein(Vector3::new(0.0, 0.0, 0.3)).unwrap();
        let others: Vec<MinkowskiPoint> = (0..6)
            .map(|_| {
                let k = Vector3::new(
                    rng.gen_range(-0.3..0.3),
                    rng.gen_range(-0.3..0.3),
                    rng.gen_range(-0.3..0.0),
                );
                MinkowskiPoint::from_klein(k).unwrap()
            })
            .collect();
        let hs: Vec<HalfSpace> = others
            .iter()
            .map(|q| bisector_halfspace(&top, q).unwrap())
            .collect();
        let f = super::super::reduce_irredundant(&hs, 3.0).unwrap();
        assert!(!f.is_compact());
        let keep = [top];
        let t = truncate_to_compact(&f, &keep).unwrap();
        assert!(t.is_compact());
        assert!(t.contains(&top, 1e-9));
        assert_eq!(t.dim(), f.dim());
        let n_f = f.halfspaces().len();
        for face in t.face_lattice().iter().filter(|f| f.dim < 3) {
            let in_f = face.halfspace_ids.iter().any(|&i| i < n_f);
            let misses_keep = face
                .halfspace_ids
                .first()
                .map(|&i| point_plane_distance(&top, &t.halfspaces()[i]) >= 0.19)
                .unwrap_or(false);
            assert!(in_f || misses_keep);
        }
    }
}
