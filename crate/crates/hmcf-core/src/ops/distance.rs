//! Extrinsic diameter and distance between two surfaces.
//!
//! Both scan vertex pairs exactly. The scans maximize/minimize the Minkowski
//! inner product and convert to a distance once at the end, since
//! `cosh d = -<p,q>_M` is monotone in `d`.

use crate::hgeom::{hdist, minkowski_inner, HPoint};
use crate::hmesh::TriMesh;

/// Largest geodesic distance between two vertices (exact O(V^2) scan).
pub fn diameter(mesh: &TriMesh) -> f64 {
    let vs = mesh.vertices();
    let mut max_inner = 1.0f64;
    for i in 0..vs.len() {
        let p = vs[i].coords();
        for q in &vs[i + 1..] {
            let inner = -minkowski_inner(p, q.coords());
            if inner > max_inner {
                max_inner = inner;
            }
        }
    }
    max_inner.max(1.0).acosh()
}

/// Geodesic midpoint of two hyperboloid points.
fn midpoint(p: &HPoint, q: &HPoint) -> HPoint {
    let s = [
        p.coords()[0] + q.coords()[0],
        p.coords()[1] + q.coords()[1],
        p.coords()[2] + q.coords()[2],
        p.coords()[3] + q.coords()[3],
    ];
    HPoint::normalized(s).expect("midpoint of hyperboloid points is timelike")
}

/// Sample points near the closest vertex: the vertex itself plus geodesic
/// edge midpoints and face midpoints of its incident faces.
fn refinement_candidates(mesh: &TriMesh, v: usize) -> Vec<HPoint> {
    let vs = mesh.vertices();
    let mut out = vec![vs[v]];
    for &fi in mesh.vertex_faces(v) {
        let f = mesh.faces()[fi];
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            out.push(midpoint(&vs[a], &vs[b]));
        }
        let c = midpoint(&vs[f[0]], &vs[f[1]]);
        out.push(midpoint(&c, &vs[f[2]]));
    }
    out
}

/// Smallest distance between the two vertex sets, refined by one round of
/// geodesic-midpoint sampling on the closest stars. The result is an upper
/// bound on the true surface distance within O(max edge length).
pub fn surface_distance(mesh_a: &TriMesh, mesh_b: &TriMesh) -> f64 {
    let va = mesh_a.vertices();
    let vb = mesh_b.vertices();
    let mut best = f64::INFINITY;
    let (mut bi, mut bj) = (0, 0);
    for (i, p) in va.iter().enumerate() {
        for (j, q) in vb.iter().enumerate() {
            let inner = -minkowski_inner(p.coords(), q.coords());
            if inner < best {
                best = inner;
                bi = i;
                bj = j;
            }
        }
    }
    let mut d = best.max(1.0).acosh();
    for p in refinement_candidates(mesh_a, bi) {
        for q in refinement_candidates(mesh_b, bj) {
            d = d.min(hdist(&p, &q));
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::Isometry;
    use crate::shapes::gen_sphere;

    #[test]
    fn sphere_diameter_is_two_radii() {
        let mesh = gen_sphere(1.0, &HPoint::ORIGIN, 2562).unwrap();
        let d = diameter(&mesh);
        assert!((d - 2.0).abs() < 0.02 * 2.0, "diameter {d}");
    }

    #[test]
    fn separated_unit_spheres() {
        let a = gen_sphere(1.0, &Isometry::boost_x1(-2.0).apply(&HPoint::ORIGIN), 642).unwrap();
        let b = gen_sphere(1.0, &Isometry::boost_x1(2.0).apply(&HPoint::ORIGIN), 642).unwrap();
        let d = surface_distance(&a, &b);
        assert!((d - 2.0).abs() < 0.03 * 2.0, "distance {d}");
    }

    #[test]
    fn identical_meshes_have_zero_distance() {
        let a = gen_sphere(1.0, &HPoint::ORIGIN, 162).unwrap();
        assert!(surface_distance(&a, &a) < 1e-9);
    }

    #[test]
    fn concentric_spheres() {
        // outer sphere needs enough resolution that its faces do not sag
        // inward by more than the 3% band
        let a = gen_sphere(1.0, &HPoint::ORIGIN, 642).unwrap();
        let b = gen_sphere(2.0, &HPoint::ORIGIN, 2562).unwrap();
        let d = surface_distance(&a, &b);
        assert!((d - 1.0).abs() < 0.03, "distance {d}");
    }
}
