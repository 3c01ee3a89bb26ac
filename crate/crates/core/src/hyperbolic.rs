//! Hyperboloid-model primitives: points on the upper sheet of the unit
//! hyperboloid in Minkowski space `R^{1,3}`, orientation-preserving Lorentz
//! isometries, bisector half-spaces, and the rank-based concyclicity test.
//!
//! Everything downstream (Voronoi cells, nets, dual graphs) is built on these
//! four operations, so the tolerances live here as crate-wide constants.

use nalgebra::{Matrix4, Vector3, Vector4};
use thiserror::Error;

/// Tolerance for algebraic invariants (hyperboloid norm, Lorentz identity).
pub const TAU_NORM: f64 = 1e-10;
/// Tolerance for metric comparisons (distances, geometric coincidence).
pub const TAU_GEOM: f64 = 1e-8;
/// Relative singular-value threshold for rank decisions.
pub const TAU_RANK: f64 = 1e-7;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum KernelError {
    #[error("point violates hyperboloid invariant: <x,x> = {norm}, expected -1")]
    OffHyperboloid { norm: f64 },
    #[error("matrix is not an orientation-preserving Lorentz isometry: {reason}")]
    NotLorentz { reason: String },
    #[error("arccosh argument {arg} below 1; inputs violate the point invariants")]
    InvalidDistanceArgument { arg: f64 },
    #[error("degenerate sites: the two points coincide within tolerance")]
    DegenerateSites,
    #[error("coincident points in quadruple (indices {0} and {1}); perturb the input")]
    CoincidentPoints(usize, usize),
}

/// Minkowski inner product of signature `(-+++)`.
#[inline]
pub fn minkowski_dot(a: &Vector4<f64>, b: &Vector4<f64>) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

/// A point on the upper sheet of the hyperboloid `<x,x> = -1`, `x0 > 0`.
///
/// This is the single internal model of `H^3`; the Beltrami-Klein projection
/// is used only inside the polytope machinery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinkowskiPoint(Vector4<f64>);

impl MinkowskiPoint {
    /// Validates the hyperboloid invariants before wrapping the coordinates.
    /// The drift allowance scales with the squared magnitude, since rounding
    /// in `<x,x>` is relative to the coordinate size.
    pub fn new(coords: Vector4<f64>) -> Result<Self, KernelError> {
        let norm = minkowski_dot(&coords, &coords);
        let scale = coords[0] * coords[0];
        if (norm + 1.0).abs() > 100.0 * TAU_NORM * scale.max(1.0) || coords[0] <= 0.0 {
            return Err(KernelError::OffHyperboloid { norm });
        }
        // Snap back onto the sheet so compositions do not accumulate drift.
        Ok(Self(coords / (-norm).sqrt()))
    }

    /// The point `(1,0,0,0)`, the model's origin.
    pub fn origin() -> Self {
        Self(Vector4::new(1.0, 0.0, 0.0, 0.0))
    }

    /// Projects an arbitrary future-pointing timelike vector onto the sheet;
    /// the centroid construction for point sets.
    pub fn from_timelike(v: Vector4<f64>) -> Result<Self, KernelError> {
        let norm = minkowski_dot(&v, &v);
        if norm >= -TAU_NORM || v[0] <= 0.0 {
            return Err(KernelError::OffHyperboloid { norm });
        }
        Ok(Self(v / (-norm).sqrt()))
    }

    /// Builds the point from spatial Klein-ball coordinates `|k| < 1`.
    pub fn from_klein(k: Vector3<f64>) -> Result<Self, KernelError> {
        let n2 = k.norm_squared();
        if n2 >= 1.0 {
            return Err(KernelError::OffHyperboloid { norm: n2 });
        }
        let x0 = 1.0 / (1.0 - n2).sqrt();
        Ok(Self(Vector4::new(x0, x0 * k[0], x0 * k[1], x0 * k[2])))
    }

    /// Central projection to the Klein ball: `(x1,x2,x3)/x0`.
    pub fn to_klein(&self) -> Vector3<f64> {
        Vector3::new(self.0[1], self.0[2], self.0[3]) / self.0[0]
    }

    pub fn coords(&self) -> &Vector4<f64> {
        &self.0
    }

    /// Geodesic exponential: walk distance `t` from `self` along the unit
    /// tangent `v` (which must satisfy `<v,v> = 1`, `<p,v> = 0`).
    pub fn geodesic(&self, v: &Vector4<f64>, t: f64) -> Self {
        let coords = self.0 * t.cosh() + v * t.sinh();
        Self::new(coords).expect("geodesic point stays on the hyperboloid")
    }

    /// An orthonormal (Minkowski) basis of the tangent space at `self`.
    pub fn tangent_basis(&self) -> [Vector4<f64>; 3] {
        let mut basis = Vec::with_capacity(3);
        for i in 1..4 {
            let mut v = Vector4::zeros();
            v[i] = 1.0;
            // Project out the point direction and previous basis vectors.
            v += self.0 * minkowski_dot(&self.0, &v);
            for b in &basis {
                v -= *b * minkowski_dot(b, &v);
            }
            let n = minkowski_dot(&v, &v);
            assert!(n > TAU_NORM, "tangent basis degenerated");
            basis.push(v / n.sqrt());
        }
        [basis[0], basis[1], basis[2]]
    }

    /// Coincidence test at tolerance `tol`, via the Minkowski chordal gap
    /// (which approximates hyperbolic distance for small separations and is
    /// immune to the `arccosh` rounding amplification near zero).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        chordal_gap(self, other) <= tol
    }
}

/// `sqrt(<q-p, q-p>)`: equals `2 sinh(d/2)`, so it matches hyperbolic
/// distance to second order near coincidence.
pub fn chordal_gap(p: &MinkowskiPoint, q: &MinkowskiPoint) -> f64 {
    let d = q.0 - p.0;
    minkowski_dot(&d, &d).max(0.0).sqrt()
}

/// Hyperbolic distance `arccosh(-<p,q>)`.
pub fn dist(p: &MinkowskiPoint, q: &MinkowskiPoint) -> f64 {
    let arg = -minkowski_dot(&p.0, &q.0);
    debug_assert!(
        arg >= 1.0 - TAU_NORM,
        "distance argument {arg} below cosh range"
    );
    arg.max(1.0).acosh()
}

/// Fallible variant of [`dist`] for inputs of uncertain provenance.
pub fn try_dist(p: &MinkowskiPoint, q: &MinkowskiPoint) -> Result<f64, KernelError> {
    let arg = -minkowski_dot(&p.0, &q.0);
    if arg < 1.0 - TAU_NORM {
        return Err(KernelError::InvalidDistanceArgument { arg });
    }
    Ok(arg.max(1.0).acosh())
}

/// An orientation-preserving isometry of `H^3` as a matrix in `SO+(1,3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzIsometry {
    m: Matrix4<f64>,
}

fn minkowski_j() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0))
}

impl LorentzIsometry {
    /// Validates `m^T J m = J`, upper-sheet preservation, and `det m = +1`.
    /// The Gram deviation allowance scales with the squared entry size.
    pub fn new(m: Matrix4<f64>) -> Result<Self, KernelError> {
        let j = minkowski_j();
        let gram = m.transpose() * j * m - j;
        let dev = gram.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        let scale = (m[(0, 0)] * m[(0, 0)]).max(1.0);
        if dev > 100.0 * TAU_NORM * scale {
            return Err(KernelError::NotLorentz {
                reason: format!("m^T J m deviates from J by {dev:.3e}"),
            });
        }
        if m[(0, 0)] <= 0.0 {
            return Err(KernelError::NotLorentz {
                reason: "matrix swaps the hyperboloid sheets".into(),
            });
        }
        let det = m.determinant();
        if (det - 1.0).abs() > 1e-6 {
            return Err(KernelError::NotLorentz {
                reason: format!("det = {det}, expected +1"),
            });
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        Self {
            m: Matrix4::identity(),
        }
    }

    /// Loxodromic translation of length `l` along the x1-axis geodesic.
    pub fn boost_x(l: f64) -> Self {
        let (c, s) = (l.cosh(), l.sinh());
        let mut m = Matrix4::identity();
        m[(0, 0)] = c;
        m[(0, 1)] = s;
        m[(1, 0)] = s;
        m[(1, 1)] = c;
        Self { m }
    }

    /// Rotation by `angle` about the x1-axis (acting in the x2-x3 plane).
    pub fn rotation_x(angle: f64) -> Self {
        let (c, s) = (angle.cos(), angle.sin());
        let mut m = Matrix4::identity();
        m[(2, 2)] = c;
        m[(2, 3)] = -s;
        m[(3, 2)] = s;
        m[(3, 3)] = c;
        Self { m }
    }

    /// Rotation by `angle` about the x3-axis (acting in the x1-x2 plane).
    pub fn rotation_z(angle: f64) -> Self {
        let (c, s) = (angle.cos(), angle.sin());
        let mut m = Matrix4::identity();
        m[(1, 1)] = c;
        m[(1, 2)] = -s;
        m[(2, 1)] = s;
        m[(2, 2)] = c;
        Self { m }
    }

    /// Group composition `self * other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Self {
        Self { m: self.m * other.m }
    }

    /// Lorentz inverse `J m^T J`, exact up to floating-point rounding.
    pub fn inverse(&self) -> Self {
        let j = minkowski_j();
        Self {
            m: j * self.m.transpose() * j,
        }
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.m
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        (self.m - Matrix4::identity())
            .iter()
            .all(|x| x.abs() <= tol)
    }

    /// Max-entry deviation between the two matrices.
    pub fn matrix_distance(&self, other: &Self) -> f64 {
        (self.m - other.m).iter().fold(0.0f64, |a, x| a.max(x.abs()))
    }

    /// Commutator deviation `|gh - hg|`; below `tol` means the pair commutes.
    pub fn commutator_norm(&self, other: &Self) -> f64 {
        (self.m * other.m - other.m * self.m)
            .iter()
            .fold(0.0f64, |a, x| a.max(x.abs()))
    }
}

/// Applies the isometry and renormalizes onto the hyperboloid.
pub fn apply(g: &LorentzIsometry, p: &MinkowskiPoint) -> MinkowskiPoint {
    let coords = g.m * p.0;
    let norm = minkowski_dot(&coords, &coords);
    let scale = (coords[0] * coords[0]).max(1.0);
    assert!(
        (norm + 1.0).abs() <= 100.0 * TAU_NORM * scale,
        "isometry application drifted off the hyperboloid: <x,x> = {norm}"
    );
    MinkowskiPoint(coords / (-norm).sqrt())
}

/// A closed half-space `{x : <x,u> <= 0}` with spacelike unit normal
/// (`<u,u> = +1`). The bounding hyperplane always meets the upper sheet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpace {
    u: Vector4<f64>,
}

impl HalfSpace {
    pub fn new(u: Vector4<f64>) -> Result<Self, KernelError> {
        let n = minkowski_dot(&u, &u);
        if n <= TAU_NORM {
            return Err(KernelError::NotLorentz {
                reason: format!("half-space normal is not spacelike: <u,u> = {n}"),
            });
        }
        Ok(Self { u: u / n.sqrt() })
    }

    pub fn normal(&self) -> &Vector4<f64> {
        &self.u
    }

    /// Signed evaluation; non-positive means the point is inside.
    pub fn eval(&self, p: &MinkowskiPoint) -> f64 {
        minkowski_dot(&p.0, &self.u)
    }

    pub fn contains(&self, p: &MinkowskiPoint, tol: f64) -> bool {
        self.eval(p) <= tol
    }

    pub fn flipped(&self) -> Self {
        Self { u: -self.u }
    }
}

/// The half-space of points at least as close to `p` as to `q`:
/// `dist(x,p) <= dist(x,q)` iff `<x, q-p> <= 0`.
pub fn bisector_halfspace(
    p: &MinkowskiPoint,
    q: &MinkowskiPoint,
) -> Result<HalfSpace, KernelError> {
    if chordal_gap(p, q) <= TAU_GEOM {
        return Err(KernelError::DegenerateSites);
    }
    HalfSpace::new(q.0 - p.0)
}

/// True when the four points lie in a common affine 2-plane of `R^{1,3}`,
/// which on the hyperboloid means a common circle, horocycle, geodesic, or
/// equidistant curve. Implemented as a singular-value rank test on the
/// difference vectors, thresholded relative to the largest singular value.
pub fn is_degenerate_quadruple(points: &[MinkowskiPoint; 4]) -> Result<bool, KernelError> {
    for i in 0..4 {
        for j in (i + 1)..4 {
            if chordal_gap(&points[i], &points[j]) <= TAU_GEOM {
                return Err(KernelError::CoincidentPoints(i, j));
            }
        }
    }
    let d1 = points[1].0 - points[0].0;
    let d2 = points[2].0 - points[0].0;
    let d3 = points[3].0 - points[0].0;
    let m = nalgebra::Matrix4x3::from_columns(&[d1, d2, d3]);
    let sv = m.svd(false, false).singular_values;
    let largest = sv[0];
    Ok(sv[2] <= TAU_RANK * largest)
}
