//! Hyperboloid-model primitives for hyperbolic 3-space.
//!
//! H³ is realized as the upper sheet of the unit hyperboloid in Minkowski
//! space R^{3,1} with signature (-,+,+,+):
//!
//! ```text
//! H³ = { p : <p,p>_M = -1, p0 >= 1 }
//! ```
//!
//! All tangent arithmetic happens in ambient Minkowski coordinates; there is
//! no chart switching except through the explicit Klein / Poincaré ball
//! conversions. Distances, exponential maps and tangent projections are
//! closed-form, which keeps flow updates exact up to floating-point rounding.
//!
//! Only n = 3 is implemented.

use thiserror::Error;

/// Ambient Minkowski 4-vector.
pub type Vec4 = [f64; 4];

/// Allowed drift of `<p,p>_M` from -1 for a valid point.
pub const HYPERBOLOID_TOL: f64 = 1e-10;
/// Allowed drift of `<p,v>_M` from 0 for a valid tangent.
pub const TANGENCY_TOL: f64 = 1e-10;
/// `-<p,q>_M` this far below 1 is clamped in distance computations;
/// anything worse is a domain error.
pub const DIST_CLAMP_TOL: f64 = 1e-9;
/// Ball-model points must satisfy `|u| < 1 - BALL_BOUNDARY_TOL`.
pub const BALL_BOUNDARY_TOL: f64 = 1e-12;
/// Tangents shorter than this are treated as zero by the exponential map.
pub const EXP_ZERO_TOL: f64 = 1e-14;

#[derive(Debug, Error, PartialEq)]
pub enum HgeomError {
    #[error("point is not on the unit hyperboloid: <p,p>_M = {inner}")]
    NotOnHyperboloid { inner: f64 },
    #[error("vector is not tangent at its base point: <p,v>_M = {inner}")]
    NotTangent { inner: f64 },
    #[error("ball-model point has |u| = {norm} >= 1 - {BALL_BOUNDARY_TOL}")]
    OutsideBall { norm: f64 },
    #[error("distance argument out of domain: -<p,q>_M = {inner} < 1")]
    DistanceDomain { inner: f64 },
}

/// Minkowski inner product `-p0 q0 + p1 q1 + p2 q2 + p3 q3`.
#[inline]
pub fn minkowski_inner(p: &Vec4, q: &Vec4) -> f64 {
    -p[0] * q[0] + p[1] * q[1] + p[2] * q[2] + p[3] * q[3]
}

#[inline]
fn axpy(a: f64, x: &Vec4, b: f64, y: &Vec4) -> Vec4 {
    [
        a * x[0] + b * y[0],
        a * x[1] + b * y[1],
        a * x[2] + b * y[2],
        a * x[3] + b * y[3],
    ]
}

/// A point of H³ on the unit hyperboloid.
///
/// Invariants: `<p,p>_M = -1` within [`HYPERBOLOID_TOL`] and `p0 >= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint(Vec4);

impl HPoint {
    /// Basepoint (1, 0, 0, 0).
    pub const ORIGIN: HPoint = HPoint([1.0, 0.0, 0.0, 0.0]);

    /// Validates the hyperboloid constraint.
    pub fn new(coords: Vec4) -> Result<HPoint, HgeomError> {
        let inner = minkowski_inner(&coords, &coords);
        if (inner + 1.0).abs() > HYPERBOLOID_TOL || coords[0] < 1.0 - HYPERBOLOID_TOL {
            return Err(HgeomError::NotOnHyperboloid { inner });
        }
        Ok(HPoint(coords))
    }

    /// Wraps coordinates that are known to satisfy the invariants.
    #[inline]
    pub fn from_coords_unchecked(coords: Vec4) -> HPoint {
        debug_assert!(
            (minkowski_inner(&coords, &coords) + 1.0).abs()
                <= 1e-8 * coords[0].mul_add(coords[0], 1.0)
        );
        HPoint(coords)
    }

    /// Rescales arbitrary timelike coordinates onto the hyperboloid.
    pub fn normalized(coords: Vec4) -> Result<HPoint, HgeomError> {
        let inner = minkowski_inner(&coords, &coords);
        if inner >= 0.0 || coords[0] <= 0.0 {
            return Err(HgeomError::NotOnHyperboloid { inner });
        }
        let s = (-inner).sqrt();
        Ok(HPoint([
            coords[0] / s,
            coords[1] / s,
            coords[2] / s,
            coords[3] / s,
        ]))
    }

    #[inline]
    pub fn coords(&self) -> &Vec4 {
        &self.0
    }

    /// Geodesic distance to `other`.
    ///
    /// Equals `arccosh(-<p,q>_M)`, evaluated through the chord identity
    /// `<p-q, p-q>_M = 4 sinh^2(d/2)` which is free of cancellation for
    /// nearby points. Values of `-<p,q>_M` within [`DIST_CLAMP_TOL`] below 1
    /// are clamped to 1.
    #[inline]
    pub fn distance_to(&self, other: &HPoint) -> f64 {
        let d = [
            self.0[0] - other.0[0],
            self.0[1] - other.0[1],
            self.0[2] - other.0[2],
            self.0[3] - other.0[3],
        ];
        let chord2 = minkowski_inner(&d, &d);
        if chord2 <= 0.0 {
            // chord2 = 2(cosh d - 1) >= 0 exactly; tolerate rounding, reject garbage
            assert!(
                chord2 >= -2.0 * DIST_CLAMP_TOL,
                "hdist domain violation: -<p,q>_M = {} < 1",
                1.0 - 0.5 * chord2
            );
            return 0.0;
        }
        2.0 * (0.5 * chord2.sqrt()).asinh()
    }
}

/// Geodesic distance between two points (symmetric, zero iff equal).
#[inline]
pub fn hdist(p: &HPoint, q: &HPoint) -> f64 {
    p.distance_to(q)
}

/// Distance for raw coordinates with the full domain-error contract.
pub fn hdist_checked(p: &Vec4, q: &Vec4) -> Result<f64, HgeomError> {
    let inner = -minkowski_inner(p, q);
    if inner < 1.0 - DIST_CLAMP_TOL {
        return Err(HgeomError::DistanceDomain { inner });
    }
    Ok(inner.max(1.0).acosh())
}

/// A tangent vector of H³ stored with its base point.
///
/// Invariant: `<base, v>_M = 0` within [`TANGENCY_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HTangent {
    base: HPoint,
    v: Vec4,
}

impl HTangent {
    /// Projects an arbitrary ambient vector into the tangent space at `base`:
    /// `w + <w,p>_M p`.
    #[inline]
    pub fn project(base: &HPoint, w: &Vec4) -> HTangent {
        let c = minkowski_inner(w, base.coords());
        HTangent {
            base: *base,
            v: axpy(1.0, w, c, base.coords()),
        }
    }

    /// Wraps components that are already tangent at `base`.
    #[inline]
    pub fn from_components_unchecked(base: &HPoint, v: Vec4) -> HTangent {
        debug_assert!(minkowski_inner(base.coords(), &v).abs() <= 1e-8);
        HTangent { base: *base, v }
    }

    pub fn zero(base: &HPoint) -> HTangent {
        HTangent {
            base: *base,
            v: [0.0; 4],
        }
    }

    #[inline]
    pub fn base(&self) -> &HPoint {
        &self.base
    }

    #[inline]
    pub fn components(&self) -> &Vec4 {
        &self.v
    }

    /// Riemannian norm (the Minkowski norm; tangents are spacelike).
    #[inline]
    pub fn norm(&self) -> f64 {
        minkowski_inner(&self.v, &self.v).max(0.0).sqrt()
    }

    #[inline]
    pub fn inner(&self, other: &HTangent) -> f64 {
        minkowski_inner(&self.v, &other.v)
    }

    #[inline]
    pub fn scaled(&self, s: f64) -> HTangent {
        HTangent {
            base: self.base,
            v: [s * self.v[0], s * self.v[1], s * self.v[2], s * self.v[3]],
        }
    }

    #[inline]
    pub fn add(&self, other: &HTangent) -> HTangent {
        HTangent {
            base: self.base,
            v: axpy(1.0, &self.v, 1.0, &other.v),
        }
    }
}

/// Tangential projection `w + <w,p>_M p` of an ambient vector.
#[inline]
pub fn project_tangent(p: &HPoint, w: &Vec4) -> HTangent {
    HTangent::project(p, w)
}

/// Geodesic exponential map.
///
/// `exp_p(v) = cosh|v| p + sinh|v| v/|v|`; returns `p` for `|v| < EXP_ZERO_TOL`.
/// The output satisfies the hyperboloid constraint identically
/// (`cosh^2 - sinh^2 = 1`).
#[inline]
pub fn exp_map(p: &HPoint, v: &HTangent) -> HPoint {
    debug_assert_eq!(p.coords(), v.base().coords());
    let n = v.norm();
    if n < EXP_ZERO_TOL {
        return *p;
    }
    let c = [
        v.v[0] / n,
        v.v[1] / n,
        v.v[2] / n,
        v.v[3] / n,
    ];
    HPoint::from_coords_unchecked(axpy(n.cosh(), p.coords(), n.sinh(), &c))
}

/// An orthonormal basis of the tangent space at `p`, built deterministically
/// by Gram-Schmidt over the spatial coordinate axes.
pub fn tangent_frame(p: &HPoint) -> [HTangent; 3] {
    let mut frame: Vec<HTangent> = Vec::with_capacity(3);
    for k in 1..4 {
        let mut w = [0.0; 4];
        w[k] = 1.0;
        let mut t = HTangent::project(p, &w);
        for b in &frame {
            let c = t.inner(b);
            t = t.add(&b.scaled(-c));
        }
        let n = t.norm();
        frame.push(t.scaled(1.0 / n));
    }
    [frame[0], frame[1], frame[2]]
}

// ---------------------------------------------------------------------------
// Ball models
// ---------------------------------------------------------------------------

/// Klein (projective) ball coordinates `(x1,x2,x3)/x0`. Geodesics map to
/// straight chords; the volume density is `1/(1-|u|^2)^2`.
#[inline]
pub fn to_klein(p: &HPoint) -> [f64; 3] {
    let c = p.coords();
    [c[1] / c[0], c[2] / c[0], c[3] / c[0]]
}

/// Inverse of [`to_klein`]; rejects `|u| >= 1 - BALL_BOUNDARY_TOL`.
pub fn from_klein(u: &[f64; 3]) -> Result<HPoint, HgeomError> {
    let n2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    let norm = n2.sqrt();
    if norm >= 1.0 - BALL_BOUNDARY_TOL {
        return Err(HgeomError::OutsideBall { norm });
    }
    let x0 = 1.0 / (1.0 - n2).sqrt();
    Ok(HPoint::from_coords_unchecked([
        x0,
        u[0] * x0,
        u[1] * x0,
        u[2] * x0,
    ]))
}

/// Poincaré (conformal) ball coordinates `(x1,x2,x3)/(1+x0)`.
#[inline]
pub fn to_poincare(p: &HPoint) -> [f64; 3] {
    let c = p.coords();
    let d = 1.0 + c[0];
    [c[1] / d, c[2] / d, c[3] / d]
}

/// Inverse of [`to_poincare`]; rejects `|u| >= 1 - BALL_BOUNDARY_TOL`.
pub fn from_poincare(u: &[f64; 3]) -> Result<HPoint, HgeomError> {
    let n2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
    let norm = n2.sqrt();
    if norm >= 1.0 - BALL_BOUNDARY_TOL {
        return Err(HgeomError::OutsideBall { norm });
    }
    let s = 1.0 - n2;
    Ok(HPoint::from_coords_unchecked([
        (1.0 + n2) / s,
        2.0 * u[0] / s,
        2.0 * u[1] / s,
        2.0 * u[2] / s,
    ]))
}

// ---------------------------------------------------------------------------
// Isometries
// ---------------------------------------------------------------------------

/// A (restricted) Lorentz transformation, i.e. an orientation-preserving
/// isometry of H³, stored as a 4x4 matrix acting on column vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    m: [[f64; 4]; 4],
}

impl Isometry {
    pub fn identity() -> Isometry {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Isometry { m }
    }

    /// Boost of rapidity `r` along a unit spatial direction `w`.
    /// Maps the origin to `(cosh r, sinh r * w)`.
    pub fn boost(w: &[f64; 3], r: f64) -> Isometry {
        let n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
        let w = [w[0] / n, w[1] / n, w[2] / n];
        let (ch, sh) = (r.cosh(), r.sinh());
        let mut m = [[0.0; 4]; 4];
        m[0][0] = ch;
        for i in 0..3 {
            m[0][i + 1] = sh * w[i];
            m[i + 1][0] = sh * w[i];
            for j in 0..3 {
                m[i + 1][j + 1] = (ch - 1.0) * w[i] * w[j] + if i == j { 1.0 } else { 0.0 };
            }
        }
        Isometry { m }
    }

    /// Boost along the x1 axis.
    pub fn boost_x1(r: f64) -> Isometry {
        Isometry::boost(&[1.0, 0.0, 0.0], r)
    }

    /// The pure boost taking the origin to `center`.
    pub fn translation_to(center: &HPoint) -> Isometry {
        let c = center.coords();
        let s = (c[1] * c[1] + c[2] * c[2] + c[3] * c[3]).sqrt();
        if s < 1e-300 {
            return Isometry::identity();
        }
        let w = [c[1] / s, c[2] / s, c[3] / s];
        Isometry::boost(&w, s.asinh())
    }

    /// Spatial rotation by `angle` about the unit axis `w` (fixes the origin).
    pub fn rotation(w: &[f64; 3], angle: f64) -> Isometry {
        let n = (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt();
        let a = [w[0] / n, w[1] / n, w[2] / n];
        let (c, s) = (angle.cos(), angle.sin());
        let mut m = [[0.0; 4]; 4];
        m[0][0] = 1.0;
        // Rodrigues rotation on the spatial block
        for i in 0..3 {
            for j in 0..3 {
                let eye = if i == j { 1.0 } else { 0.0 };
                let cross = match (i, j) {
                    (0, 1) => -a[2],
                    (0, 2) => a[1],
                    (1, 0) => a[2],
                    (1, 2) => -a[0],
                    (2, 0) => -a[1],
                    (2, 1) => a[0],
                    _ => 0.0,
                };
                m[i + 1][j + 1] = c * eye + s * cross + (1.0 - c) * a[i] * a[j];
            }
        }
        Isometry { m }
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut s = 0.0;
                for (k, other_row) in other.m.iter().enumerate() {
                    s += self.m[i][k] * other_row[j];
                }
                m[i][j] = s;
            }
        }
        Isometry { m }
    }

    pub fn apply_vec(&self, v: &Vec4) -> Vec4 {
        let mut out = [0.0; 4];
        for (i, row) in self.m.iter().enumerate() {
            out[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
        }
        out
    }

    /// Applies the isometry and renormalizes onto the hyperboloid.
    pub fn apply(&self, p: &HPoint) -> HPoint {
        HPoint::normalized(self.apply_vec(p.coords())).expect("isometry image is timelike")
    }
}

/// Distance from `p` to the complete geodesic through `a` and `b`.
///
/// With `p` split against the timelike 2-plane spanned by `a`, `b`,
/// `sinh(dist) = |p_perp|_M`.
pub fn dist_to_geodesic(p: &HPoint, a: &HPoint, b: &HPoint) -> f64 {
    // orthonormalize {a, b}: a timelike, u spacelike
    let ca = minkowski_inner(b.coords(), a.coords());
    let u_raw = axpy(1.0, b.coords(), ca, a.coords());
    let un = minkowski_inner(&u_raw, &u_raw).max(0.0).sqrt();
    assert!(un > 1e-12, "geodesic axis endpoints coincide");
    let u = [u_raw[0] / un, u_raw[1] / un, u_raw[2] / un, u_raw[3] / un];
    let pa = minkowski_inner(p.coords(), a.coords());
    let pu = minkowski_inner(p.coords(), &u);
    // p_par = -<p,a> a * (-1)^... : projection with indefinite metric
    let p_par = axpy(-pa, a.coords(), pu, &u);
    let d = [
        p.coords()[0] - p_par[0],
        p.coords()[1] - p_par[1],
        p.coords()[2] - p_par[2],
        p.coords()[3] - p_par[3],
    ];
    let perp2 = minkowski_inner(&d, &d).max(0.0);
    perp2.sqrt().asinh()
}

/// Arc-length parameter of the point on the geodesic through `a`, `b`
/// closest to `p`, measured from `a` toward `b`.
pub fn geodesic_foot_param(p: &HPoint, a: &HPoint, b: &HPoint) -> f64 {
    let ca = minkowski_inner(b.coords(), a.coords());
    let u_raw = axpy(1.0, b.coords(), ca, a.coords());
    let un = minkowski_inner(&u_raw, &u_raw).max(0.0).sqrt();
    assert!(un > 1e-12, "geodesic axis endpoints coincide");
    let u = [u_raw[0] / un, u_raw[1] / un, u_raw[2] / un, u_raw[3] / un];
    let pa = -minkowski_inner(p.coords(), a.coords()); // cosh component
    let pu = minkowski_inner(p.coords(), &u); // sinh component
    (pu / pa).atanh()
}
