//! Beltrami-Klein chart used by the polytope machinery. Hyperbolic
//! half-spaces become Euclidean half-spaces here, so the face-lattice work
//! reduces to classical linear clipping.

use crate::hyperbolic::HalfSpace;
use nalgebra::{Vector3, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

/// Euclidean half-space `{k : n . k <= d}` with unit normal, in the Klein ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KleinPlane {
    pub n: Vector3<f64>,
    pub d: f64,
}

impl KleinPlane {
    pub fn new(n: Vector3<f64>, d: f64) -> Self {
        let len = n.norm();
        Self {
            n: n / len,
            d: d / len,
        }
    }

    /// Signed slack; non-positive means the point is inside.
    #[inline]
    pub fn eval(&self, k: &Vector3<f64>) -> f64 {
        self.n.dot(k) - self.d
    }

    /// A half-space `<x,u> <= 0` with spacelike unit normal projects to
    /// `k . (u1,u2,u3) <= u0`; the spatial part has norm `sqrt(1 + u0^2) >= 1`,
    /// so the division is always well conditioned.
    pub fn from_halfspace(h: &HalfSpace) -> Self {
        let u = h.normal();
        Self::new(Vector3::new(u[1], u[2], u[3]), u[0])
    }

    /// Inverse of [`KleinPlane::from_halfspace`]; requires `|d| < 1` (the
    /// plane meets the open ball).
    pub fn to_halfspace(&self) -> HalfSpace {
        debug_assert!(self.d.abs() < 1.0, "plane misses the Klein ball");
        let s = 1.0 / (1.0 - self.d * self.d).sqrt();
        HalfSpace::new(Vector4::new(
            self.d * s,
            self.n[0] * s,
            self.n[1] * s,
            self.n[2] * s,
        ))
        .expect("spacelike by construction")
    }
}

/// The 80 fixed directions used for the truncation shell: face centroids of a
/// once-subdivided icosahedron, with a deterministic sub-milliradian jitter
/// that makes every shell vertex simple (exactly three planes).
pub fn truncation_directions() -> &'static [Vector3<f64>; 80] {
    static DIRS: OnceLock<[Vector3<f64>; 80]> = OnceLock::new();
    DIRS.get_or_init(|| {
        let phi = (1.0 + 5.0f64.sqrt()) / 2.0;
        let raw = [
            [0.0, 1.0, phi],
            [0.0, 1.0, -phi],
            [0.0, -1.0, phi],
            [0.0, -1.0, -phi],
            [1.0, phi, 0.0],
            [1.0, -phi, 0.0],
            [-1.0, phi, 0.0],
            [-1.0, -phi, 0.0],
            [phi, 0.0, 1.0],
            [-phi, 0.0, 1.0],
            [phi, 0.0, -1.0],
            [-phi, 0.0, -1.0],
        ];
        let verts: Vec<Vector3<f64>> = raw
            .iter()
            .map(|v| Vector3::new(v[0], v[1], v[2]).normalize())
            .collect();
        // Icosahedron edges have the minimal pairwise distance; faces are the
        // triangles all of whose sides realize it.
        let mut edge_len = f64::MAX;
        for i in 0..12 {
            for j in (i + 1)..12 {
                edge_len = edge_len.min((verts[i] - verts[j]).norm());
            }
        }
        let is_edge = |i: usize, j: usize| ((verts[i] - verts[j]).norm() - edge_len).abs() < 1e-9;
        let mut faces = Vec::with_capacity(20);
        for i in 0..12 {
            for j in (i + 1)..12 {
                for k in (j + 1)..12 {
                    if is_edge(i, j) && is_edge(j, k) && is_edge(i, k) {
                        faces.push([verts[i], verts[j], verts[k]]);
                    }
                }
            }
        }
        assert_eq!(faces.len(), 20);

        let mut rng = ChaCha8Rng::seed_from_u64(0x4859_5056);
        let mut jitter = |v: Vector3<f64>| -> Vector3<f64> {
            let delta = Vector3::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ) * 1e-3;
            (v + delta).normalize()
        };

        let mut dirs = Vec::with_capacity(80);
        for [a, b, c] in faces {
            let ab = (a + b) / 2.0;
            let bc = (b + c) / 2.0;
            let ca = (c + a) / 2.0;
            for tri in [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]] {
                dirs.push(jitter(((tri[0] + tri[1] + tri[2]) / 3.0).normalize()));
            }
        }
        dirs.try_into().unwrap()
    })
}

/// Tangent planes of the Euclidean ball of radius `t` (one per truncation
/// direction); their intersection is the truncation shell.
pub fn shell_planes(t: f64) -> Vec<KleinPlane> {
    truncation_directions()
        .iter()
        .map(|n| KleinPlane { n: *n, d: t })
        .collect()
}
