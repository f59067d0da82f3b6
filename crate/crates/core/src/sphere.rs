//! Curves on the unit sphere and their cone projection onto a plane.
//!
//! A spherical curve `c` with geodesic curvature `k` is carried by the frame
//! `{c, T, V = c x T}` with `c' = T`, `T' = kV - c`, `V' = -kT`. Intersecting
//! the cone over `c` with the plane `<x, u> = d` gives the plane curve
//! `P(s) = R(s) c(s)` with `R = d / <c, u>`; the companion `c~` is lifted
//! with the same `R`, so both lifts share the speed `sqrt(R'^2 + R^2)`.

use std::cmp::Ordering;
use std::f64::consts::PI;

use nalgebra::{Rotation3, SVector, Vector3};
use serde::Serialize;

use crate::curves::{CurvatureProfile, SampledCurve, Side};
use crate::error::{Error, Result};
use crate::numerics::{cumulative_integral, finite_diff, rk4_integrate_with, DiffOrder, Piecewise, SampledFunction, StepControl};
use crate::report::{Check, Worst};
use crate::schur::{self, ChordReport};

/// Drift of the frame ODE above this, before renormalization, rejects the step.
pub const FRAME_DRIFT_LIMIT: f64 = 1e-6;

/// Default lower bound on `<c(s), u>` for cone projection.
pub const DEFAULT_EPSILON_MIN: f64 = 0.1;

/// Spherical curve with its Darboux-type frame.
///
/// `curve.tangent_rate` stores `T' = kV - c`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalCurve {
    pub curve: SampledCurve,
    pub normal: Vec<Vector3<f64>>,
    pub geodesic_curvature: Vec<f64>,
}

impl SphericalCurve {
    pub fn len(&self) -> usize {
        self.curve.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curve.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.curve.length()
    }

    /// Largest violation of `|c| = 1`, orthonormality of `{c, T, V}` and `V = c x T`.
    pub fn frame_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.len() {
            let (c, t, v) = (self.curve.position[i], self.curve.tangent[i], self.normal[i]);
            worst = worst
                .max((c.norm() - 1.0).abs())
                .max((t.norm() - 1.0).abs())
                .max((v.norm() - 1.0).abs())
                .max(c.dot(&t).abs())
                .max(c.dot(&v).abs())
                .max(t.dot(&v).abs())
                .max((v - c.cross(&t)).norm());
        }
        worst
    }

    pub fn rotated(&self, rotation: &Rotation3<f64>) -> Self {
        Self {
            curve: self.curve.transformed(rotation, Vector3::zeros()),
            normal: self.normal.iter().map(|v| rotation * v).collect(),
            geodesic_curvature: self.geodesic_curvature.clone(),
        }
    }

    /// `|c(L) - c(0)|`.
    pub fn chord(&self) -> f64 {
        (self.curve.position[self.len() - 1] - self.curve.position[0]).norm()
    }
}

fn frame_drift(y: &SVector<f64, 9>) -> f64 {
    let c = y.fixed_rows::<3>(0).into_owned();
    let t = y.fixed_rows::<3>(3).into_owned();
    let v = y.fixed_rows::<3>(6).into_owned();
    (c.norm() - 1.0)
        .abs()
        .max((t.norm() - 1.0).abs())
        .max(c.dot(&t).abs())
        .max((v - c.cross(&t)).norm())
}

fn renormalize(y: &mut SVector<f64, 9>) {
    let c = y.fixed_rows::<3>(0).normalize();
    let t = y.fixed_rows::<3>(3).into_owned();
    let t = (t - c * c.dot(&t)).normalize();
    y.fixed_rows_mut::<3>(0).copy_from(&c);
    y.fixed_rows_mut::<3>(3).copy_from(&t);
    y.fixed_rows_mut::<3>(6).copy_from(&c.cross(&t));
}

/// Integrates the spherical frame equations from `(c0, T0)`.
///
/// A jump turns `T` inside the tangent plane at `c(s_j)` by `alpha`, toward
/// `+V` for a left turn and `-V` for a right turn.
pub fn reconstruct_spherical(
    profile: &CurvatureProfile,
    position: Vector3<f64>,
    tangent: Vector3<f64>,
    control: &StepControl,
) -> Result<SphericalCurve> {
    profile.validate()?;
    control.validate()?;
    if profile.length > PI + 1e-12 {
        return Err(Error::Profile(format!(
            "spherical curves are limited to length pi, got {}",
            profile.length
        )));
    }
    for v in [position, tangent] {
        if (v.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::Normalization(v.norm()));
        }
    }
    if position.dot(&tangent).abs() > 1e-9 {
        return Err(Error::Precondition(format!(
            "initial tangent is not tangent to the sphere (<c, T> = {})",
            position.dot(&tangent)
        )));
    }
    let k = &profile.curvature;
    let field = |s: f64, y: &SVector<f64, 9>| {
        let kk = k.eval(s);
        let c = y.fixed_rows::<3>(0).into_owned();
        let t = y.fixed_rows::<3>(3).into_owned();
        let v = y.fixed_rows::<3>(6).into_owned();
        let mut d = SVector::<f64, 9>::zeros();
        d.fixed_rows_mut::<3>(0).copy_from(&t);
        d.fixed_rows_mut::<3>(3).copy_from(&(v * kk - c));
        d.fixed_rows_mut::<3>(6).copy_from(&(t * -kk));
        d
    };
    let post = |s: f64, y: &mut SVector<f64, 9>| {
        let drift = frame_drift(y);
        if !(drift <= FRAME_DRIFT_LIMIT) {
            return Err(Error::StepSize { s, drift });
        }
        renormalize(y);
        Ok(())
    };
    let mut state = SVector::<f64, 9>::zeros();
    state.fixed_rows_mut::<3>(0).copy_from(&position);
    state.fixed_rows_mut::<3>(3).copy_from(&tangent);
    renormalize(&mut state);

    let mut curve = SampledCurve::empty(3);
    let mut normal = Vec::new();
    let mut kg = Vec::new();
    for (idx, (a, b)) in profile.segments().into_iter().enumerate() {
        if idx > 0 {
            let jump = profile.jumps[idx - 1];
            let t = state.fixed_rows::<3>(3).into_owned();
            let v = state.fixed_rows::<3>(6).into_owned();
            let turned = t * jump.alpha.cos() + v * (jump.turn_sign() * jump.alpha.sin());
            state.fixed_rows_mut::<3>(3).copy_from(&turned);
            renormalize(&mut state);
        }
        let traj = rk4_integrate_with(field, state, (a, b), control, post)?;
        curve.begin_segment();
        for (s, y) in traj.iter() {
            let c = y.fixed_rows::<3>(0).into_owned();
            let t = y.fixed_rows::<3>(3).into_owned();
            let v = y.fixed_rows::<3>(6).into_owned();
            let kk = k.eval(s);
            curve.push(s, c, t, v * kk - c);
            normal.push(v);
            kg.push(kk);
        }
        state = traj.last();
    }
    Ok(SphericalCurve {
        curve,
        normal,
        geodesic_curvature: kg,
    })
}

/// `<T', V>` with `T'` from finite differences on each smooth segment.
pub fn geodesic_curvature_of(curve: &SphericalCurve) -> Result<Piecewise> {
    let c = &curve.curve;
    let mut pieces = Vec::new();
    for r in c.segment_ranges() {
        let tangents = SampledFunction::new(c.s_grid[r.clone()].to_vec(), c.tangent[r.clone()].to_vec())?;
        let d = finite_diff(&tangents, DiffOrder::First)?;
        let values = d.values.iter().zip(&curve.normal[r]).map(|(dt, v)| dt.dot(v)).collect();
        pieces.push(SampledFunction::new(d.s_grid, values)?);
    }
    Ok(Piecewise::new(pieces))
}

/// Plane `<x, u> = d` and the admissible distance from its horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectionConfig {
    pub u: [f64; 3],
    pub d: f64,
    pub epsilon_min: f64,
}

impl ProjectionConfig {
    pub fn new(u: Vector3<f64>, d: f64, epsilon_min: f64) -> Result<Self> {
        if (u.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::Normalization(u.norm()));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::Precondition(format!("plane offset d must be positive, got {d}")));
        }
        if !(epsilon_min > 0.0) {
            return Err(Error::Precondition(format!("epsilon_min must be positive, got {epsilon_min}")));
        }
        let u = u.normalize();
        Ok(Self {
            u: [u.x, u.y, u.z],
            d,
            epsilon_min,
        })
    }

    /// `u` = normalized mean of the samples (falling back to `c(L/2)`), `d = 1`.
    pub fn auto(c: &SphericalCurve, epsilon_min: f64) -> Result<Self> {
        let pos = &c.curve.position;
        let mean: Vector3<f64> = pos.iter().sum::<Vector3<f64>>() / pos.len() as f64;
        let mid = c.curve.eval(0.5 * (c.curve.start() + c.curve.end()), Side::Left).position;
        let mut last = None;
        for u in [mean, mid] {
            if u.norm() < 1e-12 {
                continue;
            }
            let cfg = Self::new(u.normalize(), 1.0, epsilon_min)?;
            match cfg.check(c) {
                Ok(()) => return Ok(cfg),
                Err(e) => last = Some(e),
            }
        }
        Err(last.unwrap_or(Error::Projection {
            s: c.curve.start(),
            dot: 0.0,
            epsilon_min,
        }))
    }

    pub fn normal(&self) -> Vector3<f64> {
        Vector3::new(self.u[0], self.u[1], self.u[2])
    }

    /// Errors at the first sample with `<c(s), u> < epsilon_min`.
    pub fn check(&self, c: &SphericalCurve) -> Result<()> {
        let u = self.normal();
        for (s, p) in c.curve.s_grid.iter().zip(&c.curve.position) {
            let dot = p.dot(&u);
            if !(dot >= self.epsilon_min) {
                return Err(Error::Projection {
                    s: *s,
                    dot,
                    epsilon_min: self.epsilon_min,
                });
            }
        }
        Ok(())
    }
}

/// Cone radius `R = d / <c, u>` and its first two derivatives per sample.
///
/// Samples follow the spherical curve's grid, so at a jump the duplicated
/// sample pair carries the one-sided values of `R'` and `R''`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeRadius {
    pub s_grid: Vec<f64>,
    pub value: Vec<f64>,
    pub first: Vec<f64>,
    pub second: Vec<f64>,
    pub jump_marks: Vec<usize>,
}

impl ConeRadius {
    pub fn new(s_grid: Vec<f64>, value: Vec<f64>, first: Vec<f64>, second: Vec<f64>, jump_marks: Vec<usize>) -> Result<Self> {
        let n = s_grid.len();
        if value.len() != n || first.len() != n || second.len() != n {
            return Err(Error::Grid("cone radius arrays have mismatched lengths".into()));
        }
        if let Some((i, r)) = value.iter().enumerate().find(|(_, r)| !(**r > 0.0)) {
            return Err(Error::Precondition(format!("cone radius must be positive, got {r} at s = {}", s_grid[i])));
        }
        Ok(Self {
            s_grid,
            value,
            first,
            second,
            jump_marks,
        })
    }

    fn segment_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut bounds = vec![0];
        bounds.extend(self.jump_marks.iter().copied());
        bounds.push(self.s_grid.len());
        bounds.windows(2).map(|w| w[0]..w[1]).collect()
    }

    /// `sqrt(R'^2 + R^2)`, the common speed of both lifted curves.
    pub fn speed(&self) -> Vec<f64> {
        self.value.iter().zip(&self.first).map(|(r, r1)| r1.hypot(*r)).collect()
    }
}

/// Curve with a general (not arc-length) parameter and exact derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricCurve {
    pub s_grid: Vec<f64>,
    pub position: Vec<Vector3<f64>>,
    pub velocity: Vec<Vector3<f64>>,
    pub acceleration: Vec<Vector3<f64>>,
    pub jump_marks: Vec<usize>,
}

impl ParametricCurve {
    pub fn len(&self) -> usize {
        self.s_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s_grid.is_empty()
    }

    pub fn segment_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut bounds = vec![0];
        bounds.extend(self.jump_marks.iter().copied());
        bounds.push(self.s_grid.len());
        bounds.windows(2).map(|w| w[0]..w[1]).collect()
    }

    /// `|P' x P''| / |P'|^3` from the stored derivatives.
    pub fn curvature_exact(&self) -> Result<Vec<f64>> {
        (0..self.len())
            .map(|i| {
                let (v, a) = (self.velocity[i], self.acceleration[i]);
                let speed = v.norm();
                if speed < 1e-9 {
                    return Err(Error::DegenerateSpeed { s: self.s_grid[i], speed });
                }
                Ok(v.cross(&a).norm() / speed.powi(3))
            })
            .collect()
    }

    /// Arc length of the sample polyline.
    pub fn polyline_length(&self) -> f64 {
        self.position.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }
}

fn lift(c: &SampledCurve, normal: &[Vector3<f64>], kg: &[f64], r: &ConeRadius) -> ParametricCurve {
    let n = c.len();
    let mut out = ParametricCurve {
        s_grid: c.s_grid.clone(),
        position: Vec::with_capacity(n),
        velocity: Vec::with_capacity(n),
        acceleration: Vec::with_capacity(n),
        jump_marks: c.jump_marks.clone(),
    };
    for i in 0..n {
        let (p, t) = (c.position[i], c.tangent[i]);
        let (r0, r1, r2) = (r.value[i], r.first[i], r.second[i]);
        out.position.push(p * r0);
        out.velocity.push(p * r1 + t * r0);
        // P'' = (R'' - R) c + 2 R' T + R k V
        out.acceleration.push(p * (r2 - r0) + t * (2.0 * r1) + normal[i] * (r0 * kg[i]));
    }
    out
}

/// Cone radius of `c` for the plane and the projected plane curve `R c`.
pub fn cone_project(c: &SphericalCurve, config: &ProjectionConfig) -> Result<(ConeRadius, ParametricCurve)> {
    config.check(c)?;
    let u = config.normal();
    let d = config.d;
    let sc = &c.curve;
    let n = sc.len();
    let (mut value, mut first, mut second) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for i in 0..n {
        let g = sc.position[i].dot(&u);
        let g1 = sc.tangent[i].dot(&u);
        let g2 = sc.tangent_rate[i].dot(&u);
        value.push(d / g);
        first.push(-d * g1 / (g * g));
        second.push(d * (2.0 * g1 * g1 / (g * g * g) - g2 / (g * g)));
    }
    let r = ConeRadius::new(sc.s_grid.clone(), value, first, second, sc.jump_marks.clone())?;
    let p = lift(sc, &c.normal, &c.geodesic_curvature, &r);
    Ok((r, p))
}

/// Lift of the companion curve with the radius of the first one.
pub fn companion_project(c_tilde: &SphericalCurve, r: &ConeRadius) -> Result<ParametricCurve> {
    let sc = &c_tilde.curve;
    if sc.s_grid != r.s_grid || sc.jump_marks != r.jump_marks {
        return Err(Error::Alignment(format!(
            "companion has {} samples with jumps at {:?}; cone radius has {} samples",
            sc.len(),
            sc.jump_locations(),
            r.s_grid.len()
        )));
    }
    Ok(lift(sc, &c_tilde.normal, &c_tilde.geodesic_curvature, r))
}

/// `tau(s) = int_0^s sqrt(R'^2 + R^2)`, continued across jumps.
pub fn projected_arclength(r: &ConeRadius) -> Vec<f64> {
    let speed = r.speed();
    let mut tau = Vec::with_capacity(speed.len());
    let mut offset = 0.0;
    for range in r.segment_ranges() {
        let part = cumulative_integral(&r.s_grid[range.clone()], &speed[range]);
        let end = *part.last().unwrap_or(&0.0);
        tau.extend(part.into_iter().map(|v| v + offset));
        offset += end;
    }
    tau
}

/// `|P' x P''| / |P'|^3` with both derivatives from finite differences on
/// each smooth segment of the sampled positions.
pub fn space_curvature(p: &ParametricCurve) -> Result<Piecewise> {
    let mut pieces = Vec::new();
    for r in p.segment_ranges() {
        let pos = SampledFunction::new(p.s_grid[r.clone()].to_vec(), p.position[r].to_vec())?;
        let d1 = finite_diff(&pos, DiffOrder::First)?;
        let d2 = finite_diff(&pos, DiffOrder::Second)?;
        let mut values = Vec::with_capacity(d1.len());
        for ((s, v), a) in d1.iter().zip(&d2.values) {
            let speed = v.norm();
            if speed < 1e-9 {
                return Err(Error::DegenerateSpeed { s, speed });
            }
            values.push(v.cross(a).norm() / speed.powi(3));
        }
        pieces.push(SampledFunction::new(d1.s_grid.clone(), values)?);
    }
    Ok(Piecewise::new(pieces))
}

/// `|P' x P''|^2 = (R^4 + R^2 R'^2) k^2 + (2 R'^2 - R R'' + R^2)^2` for `P = R c`.
pub fn closed_form_cross_norm(r: f64, r1: f64, r2: f64, k: f64) -> f64 {
    let common = 2.0 * r1 * r1 - r * r2 + r * r;
    (r.powi(4) + r * r * r1 * r1) * k * k + common * common
}

/// Turning angle of `R c` at a jump of `c` by `alpha`, from the one-sided `R'`.
pub fn jump_angle_transform(r_minus_prime: f64, r_plus_prime: f64, r: f64, alpha: f64) -> f64 {
    let num = r_minus_prime * r_plus_prime + r * r * alpha.cos();
    let den = ((r_minus_prime * r_minus_prime + r * r) * (r_plus_prime * r_plus_prime + r * r)).sqrt();
    (num / den).clamp(-1.0, 1.0).acos()
}

/// Apex angles of two triangles sharing the sides `r_a`, `r_b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HingeComparison {
    pub angle1: f64,
    pub angle2: f64,
    #[serde(serialize_with = "serialize_ordering")]
    pub ordering: Ordering,
}

fn serialize_ordering<S: serde::Serializer>(o: &Ordering, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(match o {
        Ordering::Less => "less",
        Ordering::Equal => "equal",
        Ordering::Greater => "greater",
    })
}

fn apex_angle(ra: f64, rb: f64, chord: f64) -> Result<f64> {
    let (lo, hi) = ((ra - rb).abs(), ra + rb);
    let slack = 1e-12 * hi;
    if !(chord >= lo - slack && chord <= hi + slack) {
        return Err(Error::DegenerateTriangle { chord, lo, hi });
    }
    Ok(((ra * ra + rb * rb - chord * chord) / (2.0 * ra * rb)).clamp(-1.0, 1.0).acos())
}

/// Law of cosines for the angle opposite each chord.
pub fn hinge_compare(ra: f64, rb: f64, chord1: f64, chord2: f64) -> Result<HingeComparison> {
    if !(ra > 0.0 && rb > 0.0) {
        return Err(Error::Precondition(format!("triangle sides must be positive, got {ra} and {rb}")));
    }
    let angle1 = apex_angle(ra, rb, chord1)?;
    let angle2 = apex_angle(ra, rb, chord2)?;
    Ok(HingeComparison {
        angle1,
        angle2,
        ordering: angle1.total_cmp(&angle2),
    })
}

/// Turning angles of both lifts at one breakpoint of the shared grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProjectedJump {
    pub s: f64,
    pub alpha: f64,
    pub alpha_tilde: f64,
    pub theta: f64,
    pub theta_tilde: f64,
}

/// A spherical pair with its lifts through the cone of the first curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedPair {
    pub config: ProjectionConfig,
    pub radius: ConeRadius,
    pub tau: Vec<f64>,
    pub plane_curve: ParametricCurve,
    pub space_curve: ParametricCurve,
    pub curvature: Vec<f64>,
    pub curvature_tilde: Vec<f64>,
    pub jumps: Vec<ProjectedJump>,
}

pub fn project_pair(c: &SphericalCurve, c_tilde: &SphericalCurve, config: &ProjectionConfig) -> Result<ProjectedPair> {
    let (radius, plane_curve) = cone_project(c, config)?;
    let space_curve = companion_project(c_tilde, &radius)?;
    let tau = projected_arclength(&radius);
    let curvature = plane_curve.curvature_exact()?;
    let curvature_tilde = space_curve.curvature_exact()?;
    let jumps = c
        .curve
        .jump_marks
        .iter()
        .map(|&m| {
            let alpha = c.curve.tangent[m - 1].angle(&c.curve.tangent[m]);
            let alpha_tilde = c_tilde.curve.tangent[m - 1].angle(&c_tilde.curve.tangent[m]);
            let (r, rm, rp) = (radius.value[m], radius.first[m - 1], radius.first[m]);
            ProjectedJump {
                s: c.curve.s_grid[m],
                alpha,
                alpha_tilde,
                theta: jump_angle_transform(rm, rp, r, alpha),
                theta_tilde: jump_angle_transform(rm, rp, r, alpha_tilde),
            }
        })
        .collect();
    Ok(ProjectedPair {
        config: *config,
        radius,
        tau,
        plane_curve,
        space_curve,
        curvature,
        curvature_tilde,
        jumps,
    })
}

fn reparametrize(p: &ParametricCurve, tau: &[f64], dim: usize, map: impl Fn(Vector3<f64>) -> Vector3<f64>) -> Result<SampledCurve> {
    let n = p.len();
    let (mut position, mut tangent, mut rate) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for i in 0..n {
        let (v, a) = (p.velocity[i], p.acceleration[i]);
        let speed = v.norm();
        if speed < 1e-9 {
            return Err(Error::DegenerateSpeed { s: p.s_grid[i], speed });
        }
        let t = v / speed;
        let dt = (a - t * t.dot(&a)) / (speed * speed);
        position.push(map(p.position[i]));
        tangent.push(map(t) - map(Vector3::zeros()));
        rate.push(map(dt) - map(Vector3::zeros()));
    }
    SampledCurve::from_parts(dim, tau.to_vec(), position, tangent, rate, p.jump_marks.clone())
}

impl ProjectedPair {
    /// Both lifts parametrized by the shared arc length `tau`: the plane
    /// curve in 2D coordinates of the projection plane, oriented so that it
    /// turns counterclockwise, and the companion lift in 3-space.
    pub fn reparametrized(&self) -> Result<(SampledCurve, SampledCurve)> {
        let u = self.config.normal();
        let seed = if u.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let e1 = (seed - u * u.dot(&seed)).normalize();
        let e2 = u.cross(&e1) * signed_turning_sign(&self.plane_curve, &u);
        let origin = u * self.config.d;
        let to_plane = |x: Vector3<f64>| {
            let y = x - origin;
            Vector3::new(y.dot(&e1), y.dot(&e2), 0.0)
        };
        // to_plane is affine; the helper subtracts its value at 0 for vectors
        let plane = reparametrize(&self.plane_curve, &self.tau, 2, to_plane)?;
        let space = reparametrize(&self.space_curve, &self.tau, 3, |x| x)?;
        Ok((plane, space))
    }
}

/// Sample-wise `k >= |k~|` and `k >= 0` for the two lifts.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    pub slack: Vec<f64>,
    pub dominance: Check,
    pub convexity: Check,
}

pub fn curvature_dominance_check(pair: &ProjectedPair, tol: f64) -> DominanceReport {
    let mut dom = Worst::default();
    let mut convex = Worst::default();
    let mut slack = Vec::with_capacity(pair.curvature.len());
    let sign = signed_turning_sign(&pair.plane_curve, &pair.config.normal());
    for i in 0..pair.curvature.len() {
        let s = pair.radius.s_grid[i];
        let v = pair.curvature[i] - pair.curvature_tilde[i].abs();
        slack.push(v);
        dom.update(v, s);
        let pc = &pair.plane_curve;
        let signed = pc.velocity[i].cross(&pc.acceleration[i]).dot(&pair.config.normal()) * sign;
        convex.update(signed.signum() * pair.curvature[i], s);
    }
    DominanceReport {
        slack,
        dominance: dom.check("projected curvature k >= |k~|", tol),
        convexity: convex.check("projected curvature k >= 0", tol),
    }
}

/// Sign of the total turning of `p` about `u`, corners included.
fn signed_turning_sign(p: &ParametricCurve, u: &Vector3<f64>) -> f64 {
    let mut total = 0.0;
    for r in p.segment_ranges() {
        for i in r.start + 1..r.end {
            let ds = p.s_grid[i] - p.s_grid[i - 1];
            let rate = |j: usize| p.velocity[j].cross(&p.acceleration[j]).dot(u) / p.velocity[j].norm_squared();
            total += 0.5 * ds * (rate(i - 1) + rate(i));
        }
    }
    for &m in &p.jump_marks {
        let (a, b) = (p.velocity[m - 1], p.velocity[m]);
        total += a.cross(&b).dot(u).atan2(a.dot(&b));
    }
    if total < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Projection plane for the end-to-end check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlaneChoice {
    Auto { epsilon_min: f64 },
    Fixed(ProjectionConfig),
}

impl Default for PlaneChoice {
    fn default() -> Self {
        PlaneChoice::Auto {
            epsilon_min: DEFAULT_EPSILON_MIN,
        }
    }
}

/// Hypotheses, intermediate checks and conclusion of the spherical comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphericalReport {
    pub plane: ProjectionConfig,
    pub auto_plane: bool,
    pub hypotheses: Vec<Check>,
    pub projected: Vec<Check>,
    pub jumps: Vec<ProjectedJump>,
    pub plane_chord: ChordReport,
    pub radius_start: f64,
    pub radius_end: f64,
    pub hinge: HingeComparison,
    /// `|c(0) - c(L)|` and `|c~(0) - c~(L)|`.
    pub sphere_chord: f64,
    pub sphere_chord_tilde: f64,
    /// `2 sin(angle / 2)` of the two hinge apex angles.
    pub hinge_chord: f64,
    pub hinge_chord_tilde: f64,
    pub conclusion: Check,
    /// The plane-chord verdict and the direct spherical verdict agree.
    pub consistent: bool,
}

impl SphericalReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|c| c.pass)
    }
}

/// Sample-wise hypotheses of the spherical comparison.
pub fn spherical_census(c: &SphericalCurve, c_tilde: &SphericalCurve, tol: f64) -> Result<Vec<Check>> {
    c.curve.check_same_grid(&c_tilde.curve)?;
    let mut convex = Worst::default();
    let mut dom = Worst::default();
    for i in 0..c.len() {
        let s = c.curve.s_grid[i];
        let k = c.geodesic_curvature[i];
        convex.update(k, s);
        dom.update(k - c_tilde.geodesic_curvature[i].abs(), s);
    }
    let mut jumps = Worst::default();
    for &m in &c.curve.jump_marks {
        let s = c.curve.s_grid[m];
        let (tm, tp) = (c.curve.tangent[m - 1], c.curve.tangent[m]);
        let alpha = tm.angle(&tp);
        if alpha > 1e-12 {
            convex.update(tp.dot(&c.normal[m - 1]).signum() * alpha, s);
        }
        jumps.update(alpha - c_tilde.curve.tangent[m - 1].angle(&c_tilde.curve.tangent[m]), s);
    }
    Ok(vec![
        convex.check("spherical curve convex (k >= 0, left turns)", tol),
        dom.check("geodesic curvature domination k >= |k~|", tol),
        jumps.check("jump domination alpha_j >= alpha~_j", tol),
        Check::from_slack("length <= pi", PI - c.length(), None, tol),
    ])
}

/// Spherical chord comparison through the cone projection.
pub fn spherical_schur_verify(
    c: &SphericalCurve,
    c_tilde: &SphericalCurve,
    plane: PlaneChoice,
    tol: f64,
) -> Result<SphericalReport> {
    let hypotheses = spherical_census(c, c_tilde, tol)?;
    let (config, auto_plane) = match plane {
        PlaneChoice::Auto { epsilon_min } => (ProjectionConfig::auto(c, epsilon_min)?, true),
        PlaneChoice::Fixed(cfg) => (cfg, false),
    };
    let pair = project_pair(c, c_tilde, &config)?;
    let dominance = curvature_dominance_check(&pair, tol);
    let mut jump_worst = Worst::default();
    for j in &pair.jumps {
        jump_worst.update(j.theta - j.theta_tilde, j.s);
    }
    let projected = vec![
        dominance.dominance,
        dominance.convexity,
        jump_worst.check("projected jump domination theta_j >= theta~_j", tol),
    ];
    let (plane_curve, space_curve) = pair.reparametrized()?;
    let tau_end = pair.tau[pair.tau.len() - 1];
    let plane_chord = schur::chord_inequality(&plane_curve, &space_curve, (0.0, tau_end), tol)?;

    let n = pair.radius.value.len();
    let (ra, rb) = (pair.radius.value[0], pair.radius.value[n - 1]);
    let hinge = hinge_compare(ra, rb, plane_chord.plane_chord, plane_chord.space_chord)?;
    let (sphere_chord, sphere_chord_tilde) = (c.chord(), c_tilde.chord());
    let conclusion = Check::from_slack(
        "spherical chord |c(0) - c(L)| <= |c~(0) - c~(L)|",
        sphere_chord_tilde - sphere_chord,
        None,
        tol,
    );
    let consistent = plane_chord.pass == conclusion.pass;
    Ok(SphericalReport {
        plane: config,
        auto_plane,
        hypotheses,
        projected,
        jumps: pair.jumps,
        plane_chord,
        radius_start: ra,
        radius_end: rb,
        hinge,
        sphere_chord,
        sphere_chord_tilde,
        hinge_chord: 2.0 * (hinge.angle1 / 2.0).sin(),
        hinge_chord_tilde: 2.0 * (hinge.angle2 / 2.0).sin(),
        conclusion,
        consistent,
    })
}

/// Frame for a latitude circle of colatitude `rho` around the z axis:
/// `c0 = (sin rho, 0, cos rho)`, `T0 = e2`; its geodesic curvature is `cot rho`.
pub fn latitude_start(rho: f64) -> (Vector3<f64>, Vector3<f64>) {
    (Vector3::new(rho.sin(), 0.0, rho.cos()), Vector3::y())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{CurvatureFn, Jump};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn ctl() -> StepControl {
        StepControl::default()
    }

    fn sphere(profile: &CurvatureProfile, start: (Vector3<f64>, Vector3<f64>)) -> SphericalCurve {
        reconstruct_spherical(profile, start.0, start.1, &ctl()).unwrap()
    }

    fn latitude(rho: f64, l: f64) -> SphericalCurve {
        sphere(&CurvatureProfile::constant(l, 1.0 / rho.tan()).unwrap(), latitude_start(rho))
    }

    #[test]
    fn half_great_circle() {
        let c = sphere(&CurvatureProfile::constant(PI, 0.0).unwrap(), (Vector3::z(), Vector3::x()));
        assert!((c.curve.position[c.len() - 1] + c.curve.position[0]).norm() < 1e-5);
        assert!(c.frame_defect() < 1e-9);
    }

    #[test]
    fn latitude_circle_stays_on_latitude() {
        let rho = 0.7;
        let c = latitude(rho, 3.0);
        for p in &c.curve.position {
            assert!((p.z - rho.cos()).abs() < 1e-5);
        }
        let kg = geodesic_curvature_of(&latitude(FRAC_PI_4, 2.0)).unwrap();
        assert!(kg.iter().all(|(_, k)| (k - 1.0).abs() < 1e-3));
    }

    #[test]
    fn spherical_jump_angle() {
        let p = CurvatureProfile::new(2.0, CurvatureFn::Constant(0.0), vec![Jump::new(1.0, 0.8)]).unwrap();
        let c = sphere(&p, (Vector3::z(), Vector3::x()));
        let angles = c.curve.jump_angles();
        assert_eq!(angles.len(), 1);
        assert!((angles[0].1 - 0.8).abs() < 1e-6);
        assert!(c.frame_defect() < 1e-9);
    }

    #[test]
    fn geodesic_curvature_round_trip() {
        let k = CurvatureFn::Sinusoidal {
            mean: 0.5,
            amplitude: 0.3,
            frequency: 1.0,
            phase: 0.0,
        };
        let c = sphere(&CurvatureProfile::smooth(PI, k.clone()).unwrap(), (Vector3::z(), Vector3::x()));
        let measured = geodesic_curvature_of(&c).unwrap();
        for (s, v) in measured.iter() {
            assert!((v - k.eval(s)).abs() < 2e-4, "s = {s}");
        }
        let great = geodesic_curvature_of(&sphere(&CurvatureProfile::constant(2.0, 0.0).unwrap(), (Vector3::z(), Vector3::x())))
            .unwrap();
        assert!(great.iter().all(|(_, v)| v.abs() < 1e-4));
    }

    #[test]
    fn rejects_long_curves_and_bad_frames() {
        let p = CurvatureProfile::constant(3.5, 0.0).unwrap();
        assert!(matches!(
            reconstruct_spherical(&p, Vector3::z(), Vector3::x(), &ctl()),
            Err(Error::Profile(_))
        ));
        let p = CurvatureProfile::constant(1.0, 0.0).unwrap();
        assert!(reconstruct_spherical(&p, Vector3::z(), Vector3::new(0.0, 0.6, 0.8), &ctl()).is_err());
    }

    #[test]
    fn coarse_step_reports_drift() {
        let p = CurvatureProfile::constant(3.0, 40.0).unwrap();
        let coarse = StepControl {
            step_h: 0.2,
            ..StepControl::default()
        };
        let err = reconstruct_spherical(&p, Vector3::z(), Vector3::x(), &coarse).unwrap_err();
        assert!(matches!(err, Error::StepSize { .. }));
    }

    #[test]
    fn latitude_projects_to_circle() {
        let rho = 0.6;
        let c = latitude(rho, 2.0);
        let cfg = ProjectionConfig::new(Vector3::z(), 1.0, 0.1).unwrap();
        let (r, p) = cone_project(&c, &cfg).unwrap();
        for (i, x) in p.position.iter().enumerate() {
            assert!((r.value[i] - 1.0 / rho.cos()).abs() < 1e-9);
            assert!((x.z - 1.0).abs() < 1e-9);
            assert!((x.xy().norm() - rho.tan()).abs() < 1e-9);
        }
        let tau = projected_arclength(&r);
        assert!((tau[tau.len() - 1] - p.polyline_length()).abs() < 1e-5);
        let k = space_curvature(&p).unwrap();
        assert!(k.iter().all(|(_, v)| (v - 1.0 / rho.tan()).abs() < 1e-3));
    }

    #[test]
    fn great_circle_radius_matches_direct_formula() {
        let c = sphere(&CurvatureProfile::constant(1.2, 0.0).unwrap(), (Vector3::new(0.6, 0.0, 0.8), Vector3::y()));
        let u = Vector3::new(0.0, 0.3, 1.0).normalize();
        let cfg = ProjectionConfig::new(u, 2.0, 0.1).unwrap();
        let (r, p) = cone_project(&c, &cfg).unwrap();
        for (i, x) in c.curve.position.iter().enumerate() {
            assert!((r.value[i] - 2.0 / x.angle(&u).cos()).abs() < 1e-9);
            assert!((p.position[i].dot(&u) - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn fixed_point_projection() {
        let rho = 0.5;
        let c = latitude(rho, 1.0);
        let cfg = ProjectionConfig::new(Vector3::z(), rho.cos(), 0.1).unwrap();
        let (r, p) = cone_project(&c, &cfg).unwrap();
        assert!(r.value.iter().all(|v| (v - 1.0).abs() < 1e-9));
        assert!(p.position.iter().zip(&c.curve.position).all(|(a, b)| (a - b).norm() < 1e-9));
    }

    #[test]
    fn projection_horizon_refused() {
        let c = sphere(&CurvatureProfile::constant(PI, 0.0).unwrap(), (Vector3::x(), Vector3::z()));
        let cfg = ProjectionConfig::new(Vector3::z(), 1.0, 0.1).unwrap();
        assert!(matches!(cone_project(&c, &cfg), Err(Error::Projection { .. })));
        let auto = ProjectionConfig::auto(&latitude(0.5, 2.0), 0.1).unwrap();
        assert!(auto.normal().z > 0.5);
        assert!(auto.check(&latitude(0.5, 2.0)).is_ok());
    }

    #[test]
    fn speed_identity_and_scaling() {
        let c = latitude(0.8, 2.0);
        let ct = sphere(
            &CurvatureProfile::smooth(
                2.0,
                CurvatureFn::Sinusoidal {
                    mean: 0.0,
                    amplitude: 0.4,
                    frequency: 1.0,
                    phase: 0.0,
                },
            )
            .unwrap(),
            (Vector3::z(), Vector3::x()),
        );
        let cfg = ProjectionConfig::new(Vector3::new(0.3, 0.2, 1.0).normalize(), 1.0, 0.1).unwrap();
        let (r, p) = cone_project(&c, &cfg).unwrap();
        let q = companion_project(&ct, &r).unwrap();
        let speed = r.speed();
        for i in 0..p.len() {
            assert!((p.velocity[i].norm_squared() - speed[i] * speed[i]).abs() < 1e-6);
            assert!((q.velocity[i].norm_squared() - speed[i] * speed[i]).abs() < 1e-6);
        }
        let fd = finite_diff(&SampledFunction::new(q.s_grid.clone(), q.position.clone()).unwrap(), DiffOrder::First).unwrap();
        for (i, v) in fd.values.iter().enumerate() {
            assert!((v.norm() - speed[i]).abs() < 1e-5);
        }

        let n = c.len();
        let flat = ConeRadius::new(c.curve.s_grid.clone(), vec![2.5; n], vec![0.0; n], vec![0.0; n], vec![]).unwrap();
        let q = companion_project(&ct, &flat).unwrap();
        assert!(q.velocity.iter().all(|v| (v.norm() - 2.5).abs() < 1e-9));
        let tau = projected_arclength(&flat);
        assert!(tau.iter().zip(&c.curve.s_grid).all(|(t, s)| (t - 2.5 * s).abs() < 1e-12));
    }

    #[test]
    fn companion_alignment_checked() {
        let c = latitude(0.8, 2.0);
        let ct = latitude(0.8, 1.5);
        let (r, _) = cone_project(&c, &ProjectionConfig::new(Vector3::z(), 1.0, 0.1).unwrap()).unwrap();
        assert!(matches!(companion_project(&ct, &r), Err(Error::Alignment(_))));
    }

    #[test]
    fn space_curvature_fixtures() {
        let grid: Vec<f64> = (0..=2000).map(|i| i as f64 * 1e-3).collect();
        let mk = |f: &dyn Fn(f64) -> Vector3<f64>| ParametricCurve {
            s_grid: grid.clone(),
            position: grid.iter().map(|&s| f(s)).collect(),
            velocity: vec![],
            acceleration: vec![],
            jump_marks: vec![],
        };
        let circle = mk(&|s| {
            let phi = s + 0.3 * s * s;
            Vector3::new(2.0 * phi.cos(), 2.0 * phi.sin(), 0.0)
        });
        assert!(space_curvature(&circle).unwrap().iter().all(|(_, k)| (k - 0.5).abs() < 1e-3));
        let line = mk(&|s| Vector3::new(1.0, 2.0, -1.0) * (s + s * s));
        assert!(space_curvature(&line).unwrap().iter().all(|(_, k)| k.abs() < 1e-6));
        let (a, b) = (2.0, 0.5);
        let helix = mk(&|s| Vector3::new(a * s.cos(), a * s.sin(), b * s));
        assert!(space_curvature(&helix)
            .unwrap()
            .iter()
            .all(|(_, k)| (k - a / (a * a + b * b)).abs() < 1e-3));
        let stuck = mk(&|_| Vector3::zeros());
        assert!(matches!(space_curvature(&stuck), Err(Error::DegenerateSpeed { .. })));
    }

    #[test]
    fn closed_form_cross_norm_oracles() {
        assert!((closed_form_cross_norm(1.7, 0.0, 0.0, 0.0) - 1.7f64.powi(4)).abs() < 1e-12);
        for k in [0.0, 0.5, 2.0] {
            assert!((closed_form_cross_norm(1.0, 0.0, 0.0, k) - (k * k + 1.0)).abs() < 1e-12);
        }
        let c = sphere(&CurvatureProfile::constant(1.5, 0.7).unwrap(), (Vector3::new(0.0, 0.6, 0.8), Vector3::x()));
        let cfg = ProjectionConfig::auto(&c, 0.1).unwrap();
        let (r, p) = cone_project(&c, &cfg).unwrap();
        for i in 0..p.len() {
            let direct = p.velocity[i].cross(&p.acceleration[i]).norm_squared();
            let closed = closed_form_cross_norm(r.value[i], r.first[i], r.second[i], 0.7);
            assert!((direct - closed).abs() <= 1e-10 * direct.max(1.0));
        }
    }

    #[test]
    fn jump_transform_cases() {
        assert!((jump_angle_transform(0.0, 0.0, 1.3, 0.9) - 0.9).abs() < 1e-15);
        assert!(jump_angle_transform(0.4, 0.4, 1.3, 0.0).abs() < 1e-7);
        // explicit one-sided velocities R'(+-) c + R T(+-)
        let (rm, rp, r, alpha): (f64, f64, f64, f64) = (0.3, -0.7, 1.4, 1.1);
        let c = Vector3::z();
        let tm = Vector3::x();
        let tp = Vector3::new(alpha.cos(), alpha.sin(), 0.0);
        let (vm, vp) = (c * rm + tm * r, c * rp + tp * r);
        let measured = vm.cross(&vp).norm().atan2(vm.dot(&vp));
        assert!((jump_angle_transform(rm, rp, r, alpha) - measured).abs() < 1e-12);
    }

    #[test]
    fn projected_polygon_jump_matches_one_sided_differences() {
        let p = CurvatureProfile::new(1.6, CurvatureFn::Constant(0.0), vec![Jump::new(0.8, 0.9)]).unwrap();
        let c0 = Vector3::new(-0.4, -0.3, 0.866).normalize();
        let t0 = (Vector3::x() - c0 * c0.x).normalize();
        let c = sphere(&p, (c0, t0));
        let cfg = ProjectionConfig::new(Vector3::z(), 1.0, 0.1).unwrap();
        let pair = project_pair(&c, &c, &cfg).unwrap();
        let m = pair.plane_curve.jump_marks[0];
        let pos = &pair.plane_curve.position;
        // second-order one-sided differences on each side of the corner
        let left = pos[m - 1] * 1.5 - pos[m - 2] * 2.0 + pos[m - 3] * 0.5;
        let right = pos[m] * -1.5 + pos[m + 1] * 2.0 - pos[m + 2] * 0.5;
        let measured = left.angle(&right);
        assert!((pair.jumps[0].theta - measured).abs() < 1e-4);
    }

    #[test]
    fn hinge_examples() {
        let h = hinge_compare(1.0, 1.0, 1.0, 2f64.sqrt()).unwrap();
        assert!((h.angle1 - PI / 3.0).abs() < 1e-12 && (h.angle2 - FRAC_PI_2).abs() < 1e-12);
        assert_eq!(h.ordering, Ordering::Less);
        let h = hinge_compare(1.0, 2.0, 3.0, 3.0).unwrap();
        assert!((h.angle1 - PI).abs() < 1e-6);
        let h = hinge_compare(1.0, 2.0, 2.0, 2.0).unwrap();
        assert_eq!(h.angle1, h.angle2);
        assert!(matches!(hinge_compare(1.0, 2.0, 0.5, 1.0), Err(Error::DegenerateTriangle { .. })));
    }

    #[test]
    fn dominance_on_small_circle_vs_great_circle() {
        let (c0, t0) = latitude_start(FRAC_PI_4);
        let c = sphere(&CurvatureProfile::constant(FRAC_PI_2, 1.0).unwrap(), (c0, t0));
        let ct = sphere(&CurvatureProfile::constant(FRAC_PI_2, 0.0).unwrap(), (c0, t0));
        let pair = project_pair(&c, &ct, &ProjectionConfig::auto(&c, 0.1).unwrap()).unwrap();
        let rep = curvature_dominance_check(&pair, 1e-4);
        assert!(rep.dominance.pass && rep.convexity.pass);
        let same = project_pair(&c, &c, &ProjectionConfig::auto(&c, 0.1).unwrap()).unwrap();
        assert!(curvature_dominance_check(&same, 1e-12).slack.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn small_circle_vs_great_arc_end_to_end() {
        let l = FRAC_PI_2;
        let (c0, t0) = latitude_start(FRAC_PI_4);
        let c = sphere(&CurvatureProfile::constant(l, 1.0).unwrap(), (c0, t0));
        let ct = sphere(&CurvatureProfile::constant(l, 0.0).unwrap(), (c0, t0));
        let rep = spherical_schur_verify(&c, &ct, PlaneChoice::default(), 1e-6).unwrap();
        assert!(rep.hypotheses_hold());
        assert!(rep.conclusion.pass && rep.plane_chord.pass && rep.consistent);
        // closed-form chords: great arc 2 sin(L/2); small circle of radius sin(rho)
        let rho = FRAC_PI_4;
        let small = 2.0 * rho.sin() * (l / rho.sin() / 2.0).sin();
        assert!((rep.sphere_chord - small).abs() < 1e-6);
        assert!((rep.sphere_chord_tilde - 2.0 * (l / 2.0).sin()).abs() < 1e-6);
        assert!((rep.hinge_chord - rep.sphere_chord).abs() < 1e-6);
        assert!((rep.hinge_chord_tilde - rep.sphere_chord_tilde).abs() < 1e-6);
    }

    #[test]
    fn rotated_copy_has_equal_chords() {
        let p = CurvatureProfile::smooth(
            2.0,
            CurvatureFn::Linear { a: 0.5, b: 0.4 },
        )
        .unwrap();
        let c = sphere(&p, (Vector3::z(), Vector3::x()));
        let rot = Rotation3::from_euler_angles(0.3, -0.7, 1.1);
        let ct = c.rotated(&rot);
        let rep = spherical_schur_verify(&c, &ct, PlaneChoice::default(), 1e-6).unwrap();
        assert!(rep.conclusion.worst_slack.abs() < 1e-6);
        assert!(rep.conclusion.pass && rep.hypotheses_hold());
    }
}
