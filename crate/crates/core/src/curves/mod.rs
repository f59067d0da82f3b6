//! Curve data model and reconstruction from curvature data.
//!
//! Curves are stored on one flat arc-length grid. A tangent jump at `s_j`
//! appears as a duplicated grid point: the sample before carries `T(s_j-)`,
//! the sample at the jump mark carries `T(s_j+)`, and the position is shared.

mod profile;
mod sampled;

use std::f64::consts::PI;

use nalgebra::{Rotation3, SVector, Unit, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::numerics::{finite_diff, rk4_integrate, rk4_integrate_with, DiffOrder, Piecewise, SampledFunction, StepControl};

pub use profile::{
    check_convex_budget, total_turning, BudgetCheck, CurvatureFn, CurvatureProfile, Interpolation, Jump, Tabulated,
};
pub use sampled::{tangent_angle, CurvePoint, SampledCurve, Side, TangentAngle};

/// Orthonormal moving frame with a base point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame3 {
    pub position: Vector3<f64>,
    pub tangent: Vector3<f64>,
    pub normal: Vector3<f64>,
    pub binormal: Vector3<f64>,
}

impl Frame3 {
    /// Frame at the origin aligned with the coordinate axes.
    pub fn standard() -> Self {
        Self {
            position: Vector3::zeros(),
            tangent: Vector3::x(),
            normal: Vector3::y(),
            binormal: Vector3::z(),
        }
    }

    /// Builds `{T, N, T x N}` after checking that `T` and `N` are orthonormal.
    pub fn new(position: Vector3<f64>, tangent: Vector3<f64>, normal: Vector3<f64>) -> Result<Self> {
        for v in [tangent, normal] {
            if (v.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::Normalization(v.norm()));
            }
        }
        if tangent.dot(&normal).abs() > 1e-9 {
            return Err(Error::Precondition(format!(
                "initial tangent and normal are not orthogonal (dot = {})",
                tangent.dot(&normal)
            )));
        }
        Ok(Self {
            position,
            tangent,
            normal,
            binormal: tangent.cross(&normal),
        })
    }

    pub fn orthonormality_defect(&self) -> f64 {
        let v = [self.tangent, self.normal, self.binormal];
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v[i].dot(&v[j]) - target).abs());
            }
        }
        worst
    }
}

/// Rotation plane for a space-curve tangent jump.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpPlane {
    /// Turn toward `cos(phi) N + sin(phi) B`.
    Frame { phi: f64 },
    /// Turn toward the component of this vector orthogonal to `T`.
    Toward(Vector3<f64>),
}

/// Turns the frame at a jump so that the new tangent sits at spherical
/// distance `alpha` from the old one, rotating inside the requested plane.
pub fn apply_jump(frame: &Frame3, alpha: f64, plane: JumpPlane) -> Result<Frame3> {
    if !(0.0..=PI).contains(&alpha) {
        return Err(Error::Angle(alpha));
    }
    if alpha == 0.0 {
        return Ok(*frame);
    }
    let t = frame.tangent;
    let target = match plane {
        JumpPlane::Frame { phi } => frame.normal * phi.cos() + frame.binormal * phi.sin(),
        JumpPlane::Toward(v) => v,
    };
    let w = target - t * t.dot(&target);
    let w = if w.norm() < 1e-12 {
        return Err(Error::Precondition("jump rotation plane is parallel to the tangent".into()));
    } else {
        w.normalize()
    };
    let axis = Unit::new_normalize(t.cross(&w));
    let rot = Rotation3::from_axis_angle(&axis, alpha);
    let renorm = |v: Vector3<f64>| v.normalize();
    Ok(Frame3 {
        position: frame.position,
        tangent: renorm(rot * frame.tangent),
        normal: renorm(rot * frame.normal),
        binormal: renorm(rot * frame.binormal),
    })
}

/// Counterclockwise (or clockwise, `sign = -1`) plane tangent jump.
pub fn apply_plane_jump(tangent: Vector2<f64>, alpha: f64, sign: f64) -> Result<Vector2<f64>> {
    if !(0.0..=PI).contains(&alpha) {
        return Err(Error::Angle(alpha));
    }
    let a = sign.signum() * alpha;
    let (s, c) = a.sin_cos();
    Ok(Vector2::new(c * tangent.x - s * tangent.y, s * tangent.x + c * tangent.y).normalize())
}

/// Plane curve with `theta(s) = theta0 + int k + sum of jumps` and
/// `c(s) = start + int (cos theta, sin theta)`.
pub fn reconstruct_plane(
    profile: &CurvatureProfile,
    start: Vector2<f64>,
    theta0: f64,
    control: &StepControl,
) -> Result<SampledCurve> {
    profile.validate()?;
    control.validate()?;
    let k = &profile.curvature;
    let field = |s: f64, y: &Vector3<f64>| Vector3::new(y.z.cos(), y.z.sin(), k.eval(s));
    let mut out = SampledCurve::empty(2);
    let mut state = Vector3::new(start.x, start.y, theta0);
    for (idx, (a, b)) in profile.segments().into_iter().enumerate() {
        if idx > 0 {
            let jump = profile.jumps[idx - 1];
            if !(0.0..=PI).contains(&jump.alpha) {
                return Err(Error::Angle(jump.alpha));
            }
            state.z += jump.turn_sign() * jump.alpha;
        }
        let traj = rk4_integrate(field, state, (a, b), control)?;
        out.begin_segment();
        for (s, y) in traj.iter() {
            let t = Vector3::new(y.z.cos(), y.z.sin(), 0.0);
            let rate = Vector3::new(-y.z.sin(), y.z.cos(), 0.0) * k.eval(s);
            out.push(s, Vector3::new(y.x, y.y, 0.0), t, rate);
        }
        state = traj.last();
    }
    Ok(out)
}

/// Space curve from the Frenet system `T' = k N, N' = -k T + tau B, B' = -tau N`,
/// re-orthonormalized after every step. Jumps use the profile's `phi` as the
/// rotation-plane angle in the normal plane.
pub fn reconstruct_space_frenet(
    profile: &CurvatureProfile,
    torsion: &CurvatureFn,
    initial: &Frame3,
    control: &StepControl,
) -> Result<SampledCurve> {
    profile.validate()?;
    control.validate()?;
    for (a, b) in profile.segments() {
        let kmin = profile.curvature.sampled_min(a, b);
        if kmin < 0.0 {
            return Err(Error::Profile(format!(
                "curvature magnitude must be non-negative, found {kmin} on [{a}, {b}]"
            )));
        }
    }
    if initial.orthonormality_defect() > 1e-9 {
        return Err(Error::Precondition(format!(
            "initial frame is not orthonormal (defect {:.3e})",
            initial.orthonormality_defect()
        )));
    }
    let k = &profile.curvature;
    let field = |s: f64, y: &SVector<f64, 12>| {
        let (kk, tt) = (k.eval(s), torsion.eval(s));
        let t = y.fixed_rows::<3>(3).into_owned();
        let n = y.fixed_rows::<3>(6).into_owned();
        let b = y.fixed_rows::<3>(9).into_owned();
        let mut d = SVector::<f64, 12>::zeros();
        d.fixed_rows_mut::<3>(0).copy_from(&t);
        d.fixed_rows_mut::<3>(3).copy_from(&(n * kk));
        d.fixed_rows_mut::<3>(6).copy_from(&(t * -kk + b * tt));
        d.fixed_rows_mut::<3>(9).copy_from(&(n * -tt));
        d
    };
    let reorthonormalize = |_: f64, y: &mut SVector<f64, 12>| {
        let frame = unpack_frame(y).gram_schmidt();
        *y = pack_frame(&frame);
        Ok(())
    };
    let mut out = SampledCurve::empty(3);
    let mut frame = *initial;
    for (idx, (a, b)) in profile.segments().into_iter().enumerate() {
        if idx > 0 {
            let jump = profile.jumps[idx - 1];
            frame = apply_jump(&frame, jump.alpha, JumpPlane::Frame { phi: jump.phi })?;
        }
        let traj = rk4_integrate_with(field, pack_frame(&frame), (a, b), control, reorthonormalize)?;
        out.begin_segment();
        for (s, y) in traj.iter() {
            let f = unpack_frame(&y);
            out.push(s, f.position, f.tangent, f.normal * k.eval(s));
        }
        frame = unpack_frame(&traj.last());
    }
    Ok(out)
}

impl Frame3 {
    fn gram_schmidt(&self) -> Self {
        let t = self.tangent.normalize();
        let n = (self.normal - t * t.dot(&self.normal)).normalize();
        Self {
            position: self.position,
            tangent: t,
            normal: n,
            binormal: t.cross(&n),
        }
    }
}

fn pack_frame(f: &Frame3) -> SVector<f64, 12> {
    let mut y = SVector::<f64, 12>::zeros();
    y.fixed_rows_mut::<3>(0).copy_from(&f.position);
    y.fixed_rows_mut::<3>(3).copy_from(&f.tangent);
    y.fixed_rows_mut::<3>(6).copy_from(&f.normal);
    y.fixed_rows_mut::<3>(9).copy_from(&f.binormal);
    y
}

fn unpack_frame(y: &SVector<f64, 12>) -> Frame3 {
    Frame3 {
        position: y.fixed_rows::<3>(0).into_owned(),
        tangent: y.fixed_rows::<3>(3).into_owned(),
        normal: y.fixed_rows::<3>(6).into_owned(),
        binormal: y.fixed_rows::<3>(9).into_owned(),
    }
}

/// `|T'(s)|` by finite differences on each smooth segment.
///
/// Segment ends use one-sided stencils, so the two samples at a jump carry
/// the left and right limits respectively and nothing straddles the jump.
pub fn curvature_magnitude(curve: &SampledCurve) -> Result<Piecewise> {
    let mut pieces = Vec::new();
    for r in curve.segment_ranges() {
        let tangents = SampledFunction::new(curve.s_grid[r.clone()].to_vec(), curve.tangent[r].to_vec())?;
        let d = finite_diff(&tangents, DiffOrder::First)?;
        pieces.push(d.map(|v: Vector3<f64>| v.norm()));
    }
    Ok(Piecewise::new(pieces))
}
