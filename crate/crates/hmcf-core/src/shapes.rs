//! Parametric mesh generators for the initial data of the experiments:
//! geodesic spheres, ellipsoidal perturbations, drilled-sphere tori and
//! dumbbells.
//!
//! Tubes and fillets are built in cylindrical Fermi coordinates around the
//! x1-axis geodesic: `(s, rho, theta)` maps to
//!
//! ```text
//! F = (cosh rho cosh s, cosh rho sinh s, sinh rho cos theta, sinh rho sin theta)
//! ```
//!
//! so a constant-`rho` profile is a genuine hyperbolic cylinder, and a unit
//! sphere centered at `s = c` on the axis has the profile
//! `cosh rho cosh(s - c) = cosh 1`. Sphere/tube creases are rounded by cubic
//! Hermite fillets of the profile curve (tangent-continuous; total width
//! `2 epsilon` along the profile). All generators are deterministic: the same
//! parameters produce bit-identical meshes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hgeom::{exp_map, tangent_frame, HPoint, Isometry};
use crate::hmesh::{MeshError, TriMesh};

#[derive(Debug, Error)]
pub enum ShapeError {
    #[error("invalid shape parameter: {0}")]
    BadParameter(String),
    #[error("resolution {got} too low, need at least {needed} vertices")]
    ResolutionTooLow { needed: usize, got: usize },
    #[error("resolution gives only {n_theta} vertices around the tube (need >= 16)")]
    TubeUnderResolved { n_theta: usize },
    #[error("generated dumbbell does not enclose its bells: {0}")]
    NotEnclosing(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// Shape selector mirrored by the CLI and run manifests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeKind {
    GeodesicSphere { r: f64 },
    Ellipsoidal { r: f64, stretch: f64 },
    DrilledSphereTorus { epsilon: f64 },
    Dumbbell { d: f64, epsilon: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeSpec {
    #[serde(flatten)]
    pub kind: ShapeKind,
    pub resolution: usize,
}

/// Builds the mesh a [`ShapeSpec`] describes, centered at the basepoint with
/// axis along x1.
pub fn generate(spec: &ShapeSpec) -> Result<TriMesh, ShapeError> {
    match spec.kind {
        ShapeKind::GeodesicSphere { r } => gen_sphere(r, &HPoint::ORIGIN, spec.resolution),
        ShapeKind::Ellipsoidal { r, stretch } => gen_ellipsoidal(r, stretch, spec.resolution),
        ShapeKind::DrilledSphereTorus { epsilon } => gen_drilled_torus(epsilon, spec.resolution),
        ShapeKind::Dumbbell { d, epsilon } => gen_dumbbell(d, epsilon, spec.resolution),
    }
}

// ---------------------------------------------------------------------------
// Icosphere
// ---------------------------------------------------------------------------

fn icosahedron() -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let raw: [[f64; 3]; 12] = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let verts: Vec<[f64; 3]> = raw.iter().map(|v| normalize3(*v)).collect();
    let faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    (verts, faces)
}

fn normalize3(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Unit directions and faces of the `subdiv`-times refined icosahedron.
fn icosphere_directions(subdiv: u32) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let (mut verts, mut faces) = icosahedron();
    for _ in 0..subdiv {
        let mut cache: std::collections::HashMap<(usize, usize), usize> =
            std::collections::HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        for f in &faces {
            let mut mid = [0usize; 3];
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                mid[k] = *cache.entry(key).or_insert_with(|| {
                    let m = normalize3([
                        verts[a][0] + verts[b][0],
                        verts[a][1] + verts[b][1],
                        verts[a][2] + verts[b][2],
                    ]);
                    verts.push(m);
                    verts.len() - 1
                });
            }
            next.push([f[0], mid[0], mid[2]]);
            next.push([f[1], mid[1], mid[0]]);
            next.push([f[2], mid[2], mid[1]]);
            next.push([mid[0], mid[1], mid[2]]);
        }
        faces = next;
    }
    (verts, faces)
}

fn subdiv_for_resolution(resolution: usize) -> Result<u32, ShapeError> {
    if resolution < 12 {
        return Err(ShapeError::ResolutionTooLow {
            needed: 12,
            got: resolution,
        });
    }
    let mut n = 0u32;
    while 10 * 4usize.pow(n) + 2 < resolution {
        n += 1;
        if n > 8 {
            return Err(ShapeError::BadParameter(format!(
                "resolution {resolution} beyond supported subdivision depth"
            )));
        }
    }
    Ok(n)
}

/// Geodesic sphere of radius `r` about `center`: icosphere directions mapped
/// radially by the exponential map.
pub fn gen_sphere(r: f64, center: &HPoint, resolution: usize) -> Result<TriMesh, ShapeError> {
    gen_radial(center, resolution, |_| r)
}

/// Ellipsoid-like body: per-direction radius `r (1 + (stretch - 1) u_z^2)`.
pub fn gen_ellipsoidal(r: f64, stretch: f64, resolution: usize) -> Result<TriMesh, ShapeError> {
    if !(1.0..=3.0).contains(&stretch) {
        return Err(ShapeError::BadParameter(format!(
            "stretch {stretch} outside [1, 3]"
        )));
    }
    gen_radial(&HPoint::ORIGIN, resolution, move |u| {
        r * (1.0 + (stretch - 1.0) * u[2] * u[2])
    })
}

fn gen_radial(
    center: &HPoint,
    resolution: usize,
    radius: impl Fn(&[f64; 3]) -> f64,
) -> Result<TriMesh, ShapeError> {
    let subdiv = subdiv_for_resolution(resolution)?;
    let (dirs, faces) = icosphere_directions(subdiv);
    let frame = tangent_frame(center);
    let mut vertices = Vec::with_capacity(dirs.len());
    for u in &dirs {
        let r = radius(u);
        if !(r > 0.0) {
            return Err(ShapeError::BadParameter(format!("radius {r} must be positive")));
        }
        let v = frame[0]
            .scaled(r * u[0])
            .add(&frame[1].scaled(r * u[1]))
            .add(&frame[2].scaled(r * u[2]));
        vertices.push(exp_map(center, &v));
    }
    Ok(TriMesh::new(vertices, faces)?)
}

// ---------------------------------------------------------------------------
// Fermi-coordinate profiles
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
struct ProfilePoint {
    s: f64,
    rho: f64,
}

fn fermi_point(s: f64, rho: f64, theta: f64) -> HPoint {
    HPoint::from_coords_unchecked([
        rho.cosh() * s.cosh(),
        rho.cosh() * s.sinh(),
        rho.sinh() * theta.cos(),
        rho.sinh() * theta.sin(),
    ])
}

/// Distance-from-axis profile of the unit sphere centered at axis position
/// `c`: `arccosh(cosh 1 / cosh(s - c))`, defined for `|s - c| <= 1`.
fn bell_profile(c: f64, s: f64) -> f64 {
    let g = 1f64.cosh() / (s - c).cosh();
    g.max(1.0).acosh()
}

fn bell_profile_slope(c: f64, s: f64) -> f64 {
    let u = s - c;
    let g = 1f64.cosh() / u.cosh();
    let gp = -1f64.cosh() * u.sinh() / (u.cosh() * u.cosh());
    gp / (g * g - 1.0).max(1e-300).sqrt()
}

/// Arc length element of the profile curve in the Fermi metric,
/// `sqrt(drho^2 + cosh^2(rho) ds^2)`.
fn arc_len(a: &ProfilePoint, b: &ProfilePoint) -> f64 {
    let drho = b.rho - a.rho;
    let ds = (b.s - a.s) * (0.5 * (a.rho + b.rho)).cosh();
    (drho * drho + ds * ds).sqrt()
}

fn hermite(p0: ProfilePoint, t0: [f64; 2], p1: ProfilePoint, t1: [f64; 2], t: f64) -> ProfilePoint {
    let m = ((p1.s - p0.s).powi(2) + (p1.rho - p0.rho).powi(2)).sqrt();
    let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
    let h10 = t * (1.0 - t) * (1.0 - t);
    let h01 = t * t * (3.0 - 2.0 * t);
    let h11 = t * t * (t - 1.0);
    ProfilePoint {
        s: h00 * p0.s + h10 * m * t0[0] + h01 * p1.s + h11 * m * t1[0],
        rho: h00 * p0.rho + h10 * m * t0[1] + h01 * p1.rho + h11 * m * t1[1],
    }
}

fn unit2(v: [f64; 2]) -> [f64; 2] {
    let n = (v[0] * v[0] + v[1] * v[1]).sqrt();
    [v[0] / n, v[1] / n]
}

/// Walks down the sphere profile from the tube join until the profile arc
/// from the crease reaches the fillet half-width `w`. Returns the local
/// offset `u_b < s_star` of the blend point.
fn fillet_sphere_anchor(s_star: f64, epsilon: f64, w: f64) -> f64 {
    let mut u = s_star;
    let mut arc = 0.0;
    let mut prev = ProfilePoint { s: u, rho: epsilon };
    let step = 1e-5;
    while arc < w && u > step {
        u -= step;
        let cur = ProfilePoint {
            s: u,
            rho: bell_profile(0.0, u),
        };
        arc += arc_len(&prev, &cur);
        prev = cur;
    }
    u
}

/// Resamples a dense polyline at aspect-ratio-one spacing for `n_theta`
/// points around the circumference: local spacing
/// `2 pi sinh(max(rho, rho_floor)) / n_theta`. Endpoints are kept exactly.
fn resample(dense: &[ProfilePoint], n_theta: usize, rho_floor: f64) -> Vec<ProfilePoint> {
    let density = |rho: f64| n_theta as f64 / (2.0 * std::f64::consts::PI * rho.max(rho_floor).sinh());
    let mut cum = Vec::with_capacity(dense.len());
    cum.push(0.0);
    for i in 1..dense.len() {
        let mid_rho = 0.5 * (dense[i - 1].rho + dense[i].rho);
        cum.push(cum[i - 1] + arc_len(&dense[i - 1], &dense[i]) * density(mid_rho));
    }
    let total = *cum.last().unwrap();
    let segments = (total.round() as usize).max(4);
    let mut out = Vec::with_capacity(segments + 1);
    out.push(dense[0]);
    let mut j = 0;
    for k in 1..segments {
        let target = total * k as f64 / segments as f64;
        while j + 1 < cum.len() - 1 && cum[j + 1] < target {
            j += 1;
        }
        let f = (target - cum[j]) / (cum[j + 1] - cum[j]).max(1e-300);
        out.push(ProfilePoint {
            s: dense[j].s + f * (dense[j + 1].s - dense[j].s),
            rho: dense[j].rho + f * (dense[j + 1].rho - dense[j].rho),
        });
    }
    out.push(*dense.last().unwrap());
    out
}

/// Normalized profile length (vertex rings per unit of `n_theta / 2 pi`).
fn normalized_length(dense: &[ProfilePoint], rho_floor: f64) -> f64 {
    let mut total = 0.0;
    for i in 1..dense.len() {
        let mid_rho = 0.5 * (dense[i - 1].rho + dense[i].rho);
        total += arc_len(&dense[i - 1], &dense[i]) / mid_rho.max(rho_floor).sinh();
    }
    total / (2.0 * std::f64::consts::PI)
}

/// Revolves a closed profile loop (torus topology).
fn revolve_closed(profile: &[ProfilePoint], n_theta: usize) -> Result<TriMesh, ShapeError> {
    let m = profile.len();
    let mut vertices = Vec::with_capacity(m * n_theta);
    for p in profile {
        for j in 0..n_theta {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n_theta as f64;
            vertices.push(fermi_point(p.s, p.rho, theta));
        }
    }
    let idx = |i: usize, j: usize| (i % m) * n_theta + (j % n_theta);
    let mut faces = Vec::with_capacity(2 * m * n_theta);
    for i in 0..m {
        for j in 0..n_theta {
            faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    Ok(TriMesh::new(vertices, faces)?)
}

/// Revolves an open pole-to-pole profile (sphere topology). `profile` holds
/// the interior rings only; the two pole points cap the ends with fans.
fn revolve_open(
    profile: &[ProfilePoint],
    pole_a: ProfilePoint,
    pole_b: ProfilePoint,
    n_theta: usize,
) -> Result<TriMesh, ShapeError> {
    let m = profile.len();
    let mut vertices = Vec::with_capacity(m * n_theta + 2);
    for p in profile {
        for j in 0..n_theta {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n_theta as f64;
            vertices.push(fermi_point(p.s, p.rho, theta));
        }
    }
    let first_pole = vertices.len();
    vertices.push(fermi_point(pole_a.s, 0.0, 0.0));
    let last_pole = vertices.len();
    vertices.push(fermi_point(pole_b.s, 0.0, 0.0));

    let idx = |i: usize, j: usize| i * n_theta + (j % n_theta);
    let mut faces = Vec::new();
    for j in 0..n_theta {
        faces.push([first_pole, idx(0, j), idx(0, j + 1)]);
    }
    for i in 0..m - 1 {
        for j in 0..n_theta {
            faces.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            faces.push([idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    for j in 0..n_theta {
        faces.push([last_pole, idx(m - 1, j + 1), idx(m - 1, j)]);
    }
    Ok(TriMesh::new(vertices, faces)?)
}

const DENSE_STEPS: usize = 2000;

/// Join parameter of the unit bell and a tube of radius `epsilon`:
/// `cosh(s*) = cosh 1 / cosh(epsilon)`.
fn tube_join(epsilon: f64) -> f64 {
    (1f64.cosh() / epsilon.cosh()).acosh()
}

// ---------------------------------------------------------------------------
// Drilled torus
// ---------------------------------------------------------------------------

/// Boundary of the unit ball with a tube of radius `epsilon` drilled along
/// the x1-axis; genus one.
pub fn gen_drilled_torus(epsilon: f64, resolution: usize) -> Result<TriMesh, ShapeError> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(ShapeError::BadParameter(format!(
            "epsilon {epsilon} outside (0, 0.5)"
        )));
    }
    let s_star = tube_join(epsilon);
    let w = epsilon;
    let s_a = s_star - w;
    if s_a <= 0.0 {
        return Err(ShapeError::BadParameter(format!(
            "epsilon {epsilon} leaves no straight tube segment"
        )));
    }
    let u_b = fillet_sphere_anchor(s_star, epsilon, w);

    // dense half of the profile loop: tube midpoint -> +s -> fillet -> over
    // the sphere back to the equator plane
    let mut dense: Vec<ProfilePoint> = Vec::new();
    for k in 0..=DENSE_STEPS {
        let s = s_a * k as f64 / DENSE_STEPS as f64;
        dense.push(ProfilePoint { s, rho: epsilon });
    }
    let p0 = ProfilePoint { s: s_a, rho: epsilon };
    let p1 = ProfilePoint {
        s: u_b,
        rho: bell_profile(0.0, u_b),
    };
    let t1 = unit2([-1.0, -bell_profile_slope(0.0, u_b)]);
    for k in 1..=DENSE_STEPS / 4 {
        let t = k as f64 / (DENSE_STEPS / 4) as f64;
        dense.push(hermite(p0, [1.0, 0.0], p1, t1, t));
    }
    for k in 1..=DENSE_STEPS {
        let s = u_b * (1.0 - k as f64 / DENSE_STEPS as f64);
        dense.push(ProfilePoint {
            s,
            rho: bell_profile(0.0, s),
        });
    }

    let half_len = normalized_length(&dense, epsilon);
    let n_theta = ((std::f64::consts::PI * resolution as f64 / half_len).sqrt()).round() as usize;
    if n_theta < 16 {
        return Err(ShapeError::TubeUnderResolved { n_theta });
    }
    let half = resample(&dense, n_theta, epsilon);
    // mirror across the bisector plane s -> -s; endpoints are on the plane
    let mut profile = half.clone();
    for p in half.iter().rev().skip(1).take(half.len() - 2) {
        profile.push(ProfilePoint { s: -p.s, rho: p.rho });
    }
    revolve_closed(&profile, n_theta)
}

// ---------------------------------------------------------------------------
// Dumbbell
// ---------------------------------------------------------------------------

/// Bell centers of the standard dumbbell placement.
pub fn dumbbell_axis(d: f64) -> (HPoint, HPoint) {
    (
        Isometry::boost_x1(-0.5 * d).apply(&HPoint::ORIGIN),
        Isometry::boost_x1(0.5 * d).apply(&HPoint::ORIGIN),
    )
}

/// Two unit spheres with centers `d` apart joined by a tube of radius
/// `epsilon`; a topological sphere that encloses both bells.
pub fn gen_dumbbell(d: f64, epsilon: f64, resolution: usize) -> Result<TriMesh, ShapeError> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(ShapeError::BadParameter(format!(
            "epsilon {epsilon} outside (0, 0.5)"
        )));
    }
    if d <= 2.0 + 4.0 * epsilon {
        return Err(ShapeError::BadParameter(format!(
            "separation d {d} must exceed 2 + 4 epsilon = {}",
            2.0 + 4.0 * epsilon
        )));
    }
    let c_left = -0.5 * d;
    let s_star = tube_join(epsilon);
    let w = epsilon;
    let tube_start = c_left + s_star + w;
    if tube_start >= 0.0 {
        return Err(ShapeError::BadParameter(format!(
            "no tube interior for d {d}, epsilon {epsilon}"
        )));
    }
    let u_b = fillet_sphere_anchor(s_star, epsilon, w);

    // dense left half: from just off the outer pole, over the bell, fillet,
    // tube to the bisector plane s = 0
    let mut dense: Vec<ProfilePoint> = Vec::new();
    let pole = ProfilePoint { s: c_left - 1.0, rho: 0.0 };
    for k in 1..=2 * DENSE_STEPS {
        let u = -1.0 + (u_b + 1.0) * k as f64 / (2 * DENSE_STEPS) as f64;
        dense.push(ProfilePoint {
            s: c_left + u,
            rho: bell_profile(0.0, u),
        });
    }
    let p0 = ProfilePoint {
        s: c_left + u_b,
        rho: bell_profile(0.0, u_b),
    };
    let t0 = unit2([1.0, bell_profile_slope(0.0, u_b)]);
    let p1 = ProfilePoint { s: tube_start, rho: epsilon };
    for k in 1..=DENSE_STEPS / 4 {
        let t = k as f64 / (DENSE_STEPS / 4) as f64;
        dense.push(hermite(p0, t0, p1, [1.0, 0.0], t));
    }
    for k in 1..=DENSE_STEPS {
        let s = tube_start * (1.0 - k as f64 / DENSE_STEPS as f64);
        dense.push(ProfilePoint { s, rho: epsilon });
    }

    let half_len = normalized_length(&dense, epsilon);
    let n_theta = ((std::f64::consts::PI * resolution as f64 / half_len).sqrt()).round() as usize;
    if n_theta < 16 {
        return Err(ShapeError::TubeUnderResolved { n_theta });
    }
    let half = resample(&dense, n_theta, epsilon);
    let mut profile = half.clone();
    for p in half.iter().rev().skip(1) {
        profile.push(ProfilePoint { s: -p.s, rho: p.rho });
    }
    let pole_right = ProfilePoint { s: -pole.s, rho: 0.0 };
    let mesh = revolve_open(&profile, pole, pole_right, n_theta)?;
    verify_encloses_bells(&mesh, &profile, pole, pole_right, d, n_theta)?;
    Ok(mesh)
}

/// Checks that the two unit bells lie inside the generated surface, up to the
/// sagitta by which inscribed chords cut inside smooth pieces. This guards
/// the fillet construction: a blend curve dipping into a bell would flag
/// here.
fn verify_encloses_bells(
    mesh: &TriMesh,
    profile: &[ProfilePoint],
    pole_a: ProfilePoint,
    pole_b: ProfilePoint,
    d: f64,
    n_theta: usize,
) -> Result<(), ShapeError> {
    let mut poly: Vec<ProfilePoint> = Vec::with_capacity(profile.len() + 2);
    poly.push(pole_a);
    poly.extend_from_slice(profile);
    poly.push(pole_b);
    // profile height at s: max over segments spanning s
    let height = |s: f64| -> f64 {
        let mut best = f64::NEG_INFINITY;
        for seg in poly.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            if (a.s - s) * (b.s - s) <= 0.0 {
                let f = if (b.s - a.s).abs() < 1e-300 {
                    0.5
                } else {
                    (s - a.s) / (b.s - a.s)
                };
                best = best.max(a.rho + f * (b.rho - a.rho));
            }
        }
        best
    };
    let max_spacing = poly
        .windows(2)
        .map(|seg| arc_len(&seg[0], &seg[1]))
        .fold(0.0f64, f64::max);
    let ring_spacing =
        2.0 * std::f64::consts::PI * profile.iter().map(|p| p.rho.sinh()).fold(0.0f64, f64::max)
            / n_theta as f64;
    // inscribed-chord sagitta bound, curvature <= coth(1) on the bells
    let sagitta = 0.25 * (max_spacing.max(ring_spacing)).powi(2) / 1f64.tanh() + 1e-9;
    for center in [-0.5 * d, 0.5 * d] {
        for k in 0..=200 {
            let u = -1.0 + 2.0 * k as f64 / 200.0;
            let s = center + u;
            let bell = bell_profile(center, s);
            let h = height(s);
            if bell > h + sagitta {
                return Err(ShapeError::NotEnclosing(format!(
                    "bell at {center} pokes out at s = {s}: rho {bell} vs profile {h}"
                )));
            }
        }
    }
    let _ = mesh;
    Ok(())
}
