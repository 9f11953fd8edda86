//! Closed-form solutions and profile integrals used as oracles and
//! certificate inputs.
//!
//! Geodesic spheres are the exactly solvable data of the flow: a sphere of
//! radius `r(t)` satisfies `dr/dt = -coth r`, integrating to
//! `cosh r(t) = e^{-t} cosh r0` with extinction at `t = ln cosh r0`.
//!
//! The isoperimetric profile integral `(1/2) int_0^a sqrt(x/(c+x)) dx` is
//! evaluated by adaptive Gauss-Kronrod quadrature rather than its closed
//! form, so that profile identities checked elsewhere compare two genuinely
//! independent computations.

use std::f64::consts::PI;

use thiserror::Error;

/// Absolute error target of the adaptive quadrature.
pub const QUAD_ABS_TOL: f64 = 1e-10;
/// Default torus Willmore constant (the minimal torus bending energy).
pub const DEFAULT_TORUS_WILLMORE: f64 = 2.0 * PI * PI;

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticError {
    #[error("sphere flow is extinct: t = {t} >= ln cosh r0 = {extinction}")]
    Extinct { t: f64, extinction: f64 },
    #[error("initial radius must be positive, got {r0}")]
    BadRadius { r0: f64 },
    #[error("deficit constant requires c0 > 4 pi, got {c0}")]
    DeficitDomain { c0: f64 },
    #[error("quadrature failed to reach the error target (estimate {estimate})")]
    QuadratureStalled { estimate: f64 },
}

/// The shrinking geodesic sphere solution.
#[derive(Debug, Clone, Copy)]
pub struct SphereFlow {
    pub r0: f64,
    pub extinction_time: f64,
}

impl SphereFlow {
    pub fn new(r0: f64) -> Result<SphereFlow, AnalyticError> {
        if !(r0 > 0.0) {
            return Err(AnalyticError::BadRadius { r0 });
        }
        Ok(SphereFlow {
            r0,
            extinction_time: r0.cosh().ln(),
        })
    }

    pub fn radius(&self, t: f64) -> Result<f64, AnalyticError> {
        sphere_radius(self.r0, t)
    }
}

/// Radius at time `t` of the sphere started at `r0`:
/// `arccosh(e^{-t} cosh r0)`.
pub fn sphere_radius(r0: f64, t: f64) -> Result<f64, AnalyticError> {
    if !(r0 > 0.0) {
        return Err(AnalyticError::BadRadius { r0 });
    }
    let extinction = r0.cosh().ln();
    if t >= extinction {
        return Err(AnalyticError::Extinct { t, extinction });
    }
    Ok(((-t).exp() * r0.cosh()).acosh())
}

/// Area of the geodesic sphere of radius `r`: `4 pi sinh^2 r`.
pub fn sphere_area(r: f64) -> f64 {
    4.0 * PI * r.sinh().powi(2)
}

/// Volume of the geodesic ball of radius `r`: `pi sinh 2r - 2 pi r`.
pub fn sphere_volume(r: f64) -> f64 {
    PI * (2.0 * r).sinh() - 2.0 * PI * r
}

/// `integral of (H^2 - 1)` over a geodesic sphere: exactly `4 pi` for all r.
pub fn sphere_willmore_bar(_r: f64) -> f64 {
    4.0 * PI
}

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod quadrature
// ---------------------------------------------------------------------------

// 7-point Gauss / 15-point Kronrod pair on [-1, 1]
const KRONROD_NODES: [f64; 8] = [
    0.991_455_371_120_813,
    0.949_107_912_342_759,
    0.864_864_423_359_769,
    0.741_531_185_599_394,
    0.586_087_235_467_691,
    0.405_845_151_377_397,
    0.207_784_955_007_898,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529,
    0.063_092_092_629_979,
    0.104_790_010_322_250,
    0.140_653_259_715_525,
    0.169_004_726_639_267,
    0.190_350_578_064_785,
    0.204_432_940_075_298,
    0.209_482_141_084_728,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_870,
    0.279_705_391_489_277,
    0.381_830_050_505_119,
    0.417_959_183_673_469,
];

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut k = 0.0;
    let mut g = 0.0;
    for (i, &x) in KRONROD_NODES.iter().enumerate() {
        let (fl, fr) = (f(mid - half * x), f(mid + half * x));
        let pair = if x == 0.0 { fl } else { fl + fr };
        k += KRONROD_WEIGHTS[i] * pair;
        // odd indices are the embedded 7-point Gauss nodes
        if i % 2 == 1 {
            g += GAUSS_WEIGHTS[i / 2] * pair;
        }
    }
    (k * half, (k - g).abs() * half)
}

/// Adaptive quadrature with interval bisection down to an absolute target.
fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64, AnalyticError> {
    if a == b {
        return Ok(0.0);
    }
    let mut total = 0.0;
    let mut stack = vec![(a, b, tol)];
    let mut depth_guard = 0usize;
    while let Some((lo, hi, budget)) = stack.pop() {
        depth_guard += 1;
        if depth_guard > 100_000 {
            return Err(AnalyticError::QuadratureStalled { estimate: budget });
        }
        let (val, err) = gauss_kronrod(f, lo, hi);
        if err <= budget || (hi - lo) < 1e-14 * (b - a).abs() {
            total += val;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, 0.5 * budget));
            stack.push((mid, hi, 0.5 * budget));
        }
    }
    Ok(total)
}

/// `(1/2) int_0^a sqrt(x/(c+x)) dx`, the volume bound of the profile
/// comparison, to absolute accuracy [`QUAD_ABS_TOL`].
///
/// The integrand has a square-root derivative singularity at zero; the
/// interval is split at `c/100` so the adaptive refinement concentrates
/// there.
pub fn iso_profile_integral(a_upper: f64, c: f64) -> Result<f64, AnalyticError> {
    assert!(a_upper >= 0.0 && c > 0.0, "profile integral domain");
    if a_upper == 0.0 {
        return Ok(0.0);
    }
    let f = |x: f64| (x / (c + x)).max(0.0).sqrt();
    let split = (c / 100.0).min(a_upper);
    let head = integrate(&f, 0.0, split, 0.5 * QUAD_ABS_TOL)?;
    let tail = integrate(&f, split, a_upper, 0.5 * QUAD_ABS_TOL)?;
    Ok(0.5 * (head + tail))
}

/// Area of the geodesic sphere enclosing volume `v0`, obtained by bisecting
/// `iso_profile_integral(a, 4 pi) = v0`.
pub fn iso_profile_area(v0: f64) -> Result<f64, AnalyticError> {
    assert!(v0 >= 0.0, "volume must be nonnegative");
    if v0 == 0.0 {
        return Ok(0.0);
    }
    let mut hi = 4.0 * PI;
    while iso_profile_integral(hi, 4.0 * PI)? < v0 {
        hi *= 2.0;
        assert!(hi.is_finite(), "profile inversion bracket overflow");
    }
    let mut lo = 0.0;
    while hi - lo > 1e-10 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if iso_profile_integral(mid, 4.0 * PI)? < v0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The torus volume deficit
/// `c = (1/2) int_0^{2 pi} [ sqrt(x/(4 pi + x)) - sqrt(x/(c0 + x)) ] dx`,
/// positive whenever `c0 > 4 pi`.
pub fn torus_deficit_constant(c0: f64) -> Result<f64, AnalyticError> {
    if c0 <= 4.0 * PI {
        return Err(AnalyticError::DeficitDomain { c0 });
    }
    let base = iso_profile_integral(2.0 * PI, 4.0 * PI)?;
    let tight = iso_profile_integral(2.0 * PI, c0)?;
    Ok(base - tight)
}
