//! Hyperbolic triangle areas via the angle defect.
//!
//! The area of a geodesic triangle with angles `α, β, γ` is `π - α - β - γ`.
//! Angles come from the hyperbolic law of cosines, evaluated in the
//! half-angle form
//!
//! ```text
//! tan²(α/2) = sinh(s-b) sinh(s-c) / ( sinh(s) sinh(s-a) ),   s = (a+b+c)/2
//! ```
//!
//! which is algebraically equivalent but avoids the catastrophic
//! cancellation of `(cosh b cosh c - cosh a)` for the small, near-equilateral
//! triangles a fine mesh is made of.

use crate::hgeom::hdist;
use crate::hmesh::TriMesh;

/// Sides shorter than this flag the face as degenerate.
const SIDE_MIN: f64 = 1e-15;

/// Area of one geodesic triangle, or a degenerate-face flag.
#[derive(Debug, Clone, Copy)]
pub struct FaceArea {
    pub area: f64,
    pub degenerate: bool,
}

/// The three angles of the geodesic triangle with side lengths `a, b, c`
/// (`a` opposite the first angle). `None` when the cosh-edge relations
/// violate the triangle inequality beyond rounding.
pub fn triangle_angles(a: f64, b: f64, c: f64) -> Option<[f64; 3]> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return None;
    }
    if a < SIDE_MIN || b < SIDE_MIN || c < SIDE_MIN {
        return None;
    }
    let qs = (0.5 * (a + b + c)).sinh();
    let qa = (0.5 * (b + c - a)).sinh();
    let qb = (0.5 * (a + c - b)).sinh();
    let qc = (0.5 * (a + b - c)).sinh();
    // allow exact degeneracy at rounding level but not real violations
    let floor = -1e-14 * qs;
    if qa < floor || qb < floor || qc < floor {
        return None;
    }
    let (qa, qb, qc) = (qa.max(0.0), qb.max(0.0), qc.max(0.0));
    let alpha = 2.0 * ((qb * qc).sqrt()).atan2((qs * qa).sqrt());
    let beta = 2.0 * ((qa * qc).sqrt()).atan2((qs * qb).sqrt());
    let gamma = 2.0 * ((qa * qb).sqrt()).atan2((qs * qc).sqrt());
    Some([alpha, beta, gamma])
}

/// Angle-defect area from side lengths.
#[inline]
pub fn area_from_sides(a: f64, b: f64, c: f64) -> FaceArea {
    match triangle_angles(a, b, c) {
        Some([alpha, beta, gamma]) => FaceArea {
            area: (std::f64::consts::PI - alpha - beta - gamma).max(0.0),
            degenerate: false,
        },
        None => FaceArea {
            area: 0.0,
            degenerate: true,
        },
    }
}

/// Hyperbolic area of one face of the mesh.
pub fn face_area(mesh: &TriMesh, face: usize) -> FaceArea {
    let [i, j, k] = mesh.faces()[face];
    let vs = mesh.vertices();
    let a = hdist(&vs[j], &vs[k]);
    let b = hdist(&vs[i], &vs[k]);
    let c = hdist(&vs[i], &vs[j]);
    area_from_sides(a, b, c)
}

/// All face areas in one pass, plus the degenerate-face count.
#[derive(Debug, Clone)]
pub struct AreaField {
    pub areas: Vec<f64>,
    pub flagged: usize,
}

impl AreaField {
    pub fn total(&self) -> f64 {
        self.areas.iter().sum()
    }
}

pub fn face_areas(mesh: &TriMesh) -> AreaField {
    let mut areas = Vec::with_capacity(mesh.face_count());
    let mut flagged = 0;
    for f in 0..mesh.face_count() {
        let fa = face_area(mesh, f);
        if fa.degenerate {
            flagged += 1;
        }
        areas.push(fa.area);
    }
    AreaField { areas, flagged }
}

/// Total hyperbolic area of the mesh (degenerate faces contribute zero).
pub fn total_area(mesh: &TriMesh) -> f64 {
    face_areas(mesh).total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::{exp_map, from_klein, to_klein, HPoint, HTangent};
    use crate::hmesh::test_meshes::tetrahedron;
    use std::f64::consts::PI;

    /// Independent oracle: integrate the induced hyperbolic area element over
    /// the flat Klein triangle spanned by the three vertices.
    fn klein_area_oracle(p: &HPoint, q: &HPoint, r: &HPoint, levels: u32) -> f64 {
        let (a, b, c) = (to_klein(p), to_klein(q), to_klein(r));
        fn sub(a: [f64; 3], b: [f64; 3], c: [f64; 3], lvl: u32) -> f64 {
            if lvl == 0 {
                return quad(a, b, c);
            }
            let m = |x: [f64; 3], y: [f64; 3]| {
                [
                    0.5 * (x[0] + y[0]),
                    0.5 * (x[1] + y[1]),
                    0.5 * (x[2] + y[2]),
                ]
            };
            let (ab, bc, ca) = (m(a, b), m(b, c), m(c, a));
            sub(a, ab, ca, lvl - 1) + sub(ab, b, bc, lvl - 1) + sub(ca, bc, c, lvl - 1)
                + sub(ab, bc, ca, lvl - 1)
        }
        fn quad(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
            // degree-5 rule on the reference triangle
            const W0: f64 = 0.225;
            const A1: f64 = 0.059_715_871_789_770;
            const B1: f64 = 0.470_142_064_105_115;
            const W1: f64 = 0.132_394_152_788_506;
            const A2: f64 = 0.797_426_985_353_087;
            const B2: f64 = 0.101_286_507_323_456;
            const W2: f64 = 0.125_939_180_544_827;
            let pts = [
                (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, W0),
                (A1, B1, B1, W1),
                (B1, A1, B1, W1),
                (B1, B1, A1, W1),
                (A2, B2, B2, W2),
                (B2, A2, B2, W2),
                (B2, B2, A2, W2),
            ];
            let e1 = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            let e2 = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
            let mut s = 0.0;
            for (l0, l1, l2, w) in pts {
                let u = [
                    l0 * a[0] + l1 * b[0] + l2 * c[0],
                    l0 * a[1] + l1 * b[1] + l2 * c[1],
                    l0 * a[2] + l1 * b[2] + l2 * c[2],
                ];
                let rho2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
                let f = 1.0 / (1.0 - rho2);
                // Klein metric g = I/(1-rho^2) + u u^T/(1-rho^2)^2
                let g = |x: &[f64; 3], y: &[f64; 3]| {
                    let dot = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
                    let ux = u[0] * x[0] + u[1] * x[1] + u[2] * x[2];
                    let uy = u[0] * y[0] + u[1] * y[1] + u[2] * y[2];
                    f * dot + f * f * ux * uy
                };
                let (g11, g12, g22) = (g(&e1, &e1), g(&e1, &e2), g(&e2, &e2));
                s += w * (g11 * g22 - g12 * g12).max(0.0).sqrt();
            }
            0.5 * s
        }
        sub(a, b, c, levels)
    }

    fn equilateral(side: f64) -> (HPoint, HPoint, HPoint) {
        let o = HPoint::ORIGIN;
        let alpha = { (side.cosh() / (side.cosh() + 1.0)).acos() };
        let v1 = HTangent::from_components_unchecked(&o, [0.0, side, 0.0, 0.0]);
        let v2 = HTangent::from_components_unchecked(
            &o,
            [0.0, side * alpha.cos(), side * alpha.sin(), 0.0],
        );
        (o, exp_map(&o, &v1), exp_map(&o, &v2))
    }

    #[test]
    fn equilateral_matches_klein_quadrature() {
        let (p, q, r) = equilateral(1.0);
        let a = hdist(&q, &r);
        let b = hdist(&p, &r);
        let c = hdist(&p, &q);
        assert!((b - 1.0).abs() < 1e-12 && (c - 1.0).abs() < 1e-12);
        assert!((a - 1.0).abs() < 1e-12, "construction side {a}");
        let defect = area_from_sides(a, b, c);
        assert!(!defect.degenerate);
        let oracle = klein_area_oracle(&p, &q, &r, 4);
        assert!(
            (defect.area - oracle).abs() < 1e-6,
            "defect {} vs quadrature {}",
            defect.area,
            oracle
        );
    }

    #[test]
    fn small_triangles_approach_zero_area() {
        // euclidean limit: defect ~ (sqrt(3)/4) s^2 -> 0
        let mut last = f64::INFINITY;
        for side in [1e-1, 1e-2, 1e-3, 1e-4] {
            let (p, q, r) = equilateral(side);
            let fa = area_from_sides(hdist(&q, &r), hdist(&p, &r), hdist(&p, &q));
            assert!(!fa.degenerate);
            let euclid = 3.0f64.sqrt() / 4.0 * side * side;
            assert!((fa.area / euclid - 1.0).abs() < 1e-2, "side {side}: {}", fa.area);
            assert!(fa.area < last);
            last = fa.area;
        }
    }

    #[test]
    fn triangle_inequality_violation_flags() {
        let fa = area_from_sides(2.5, 1.0, 1.0);
        assert!(fa.degenerate);
        assert_eq!(fa.area, 0.0);
        assert!(triangle_angles(f64::NAN, 1.0, 1.0).is_none());
    }

    #[test]
    fn tetrahedron_total_area_is_additive() {
        let m = tetrahedron(0.9);
        let field = face_areas(&m);
        assert_eq!(field.flagged, 0);
        let total: f64 = (0..m.face_count()).map(|f| face_area(&m, f).area).sum();
        assert!((field.total() - total).abs() < 1e-15);
        assert!((total_area(&m) - total).abs() < 1e-15);
    }

    #[test]
    fn angles_match_law_of_cosines_directly() {
        // the half-angle evaluation agrees with the textbook formula
        let (a, b, c) = (0.9, 1.1, 0.7);
        let [alpha, beta, gamma] = triangle_angles(a, b, c).unwrap();
        let direct = |a: f64, b: f64, c: f64| {
            ((b.cosh() * c.cosh() - a.cosh()) / (b.sinh() * c.sinh())).acos()
        };
        assert!((alpha - direct(a, b, c)).abs() < 1e-12);
        assert!((beta - direct(b, a, c)).abs() < 1e-12);
        assert!((gamma - direct(c, a, b)).abs() < 1e-12);
    }

    #[test]
    fn klein_chart_round_trip_in_oracle_helpers() {
        let (p, q, _r) = equilateral(0.8);
        let back = from_klein(&to_klein(&q)).unwrap();
        assert!(hdist(&q, &back) < 1e-12);
        let _ = p;
    }
}
