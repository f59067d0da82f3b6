//! Time-like curves in Minkowski space with signature `(+, -, -)`.
//!
//! Coordinates are stored as `(t, x, y)`; plane curves keep `y = 0`. A unit
//! time-like tangent lives on the upper sheet of `t^2 - x^2 - y^2 = 1`, and
//! `<T(a), T(b)> = cosh d` where `d` is the hyperbolic distance between them.

use nalgebra::{Matrix3, SVector, Vector2, Vector3};
use serde::Serialize;

use crate::curves::CurvatureFn;
use crate::error::{Error, Result};
use crate::numerics::{finite_diff, hermite, rk4_integrate, rk4_integrate_with, DiffOrder, SampledFunction, StepControl};
use crate::report::{Check, Worst};

/// Minkowski vector; `y` is absent in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LorentzVec {
    pub t: f64,
    pub x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CausalType {
    TimeLike,
    SpaceLike,
    Null,
}

impl LorentzVec {
    pub fn new2(t: f64, x: f64) -> Self {
        Self { t, x, y: None }
    }

    pub fn new3(t: f64, x: f64, y: f64) -> Self {
        Self { t, x, y: Some(y) }
    }

    pub fn dim(&self) -> usize {
        if self.y.is_some() {
            3
        } else {
            2
        }
    }

    /// `(t, x, y)` with `y = 0` for plane vectors.
    pub fn embed(&self) -> Vector3<f64> {
        Vector3::new(self.t, self.x, self.y.unwrap_or(0.0))
    }

    /// Classification of `<v, v>` with a null band of half-width `eps`.
    pub fn causal_type(&self, eps: f64) -> CausalType {
        let q = dot3(&self.embed(), &self.embed());
        if q > eps {
            CausalType::TimeLike
        } else if q < -eps {
            CausalType::SpaceLike
        } else {
            CausalType::Null
        }
    }
}

/// `u_t v_t - u_x v_x - u_y v_y`.
pub fn minkowski_dot(u: &LorentzVec, v: &LorentzVec) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::Dimension(format!(
            "Minkowski product of a {}-vector with a {}-vector",
            u.dim(),
            v.dim()
        )));
    }
    Ok(dot3(&u.embed(), &v.embed()))
}

pub(crate) fn dot3(u: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
    u.x * v.x - u.y * v.y - u.z * v.z
}

/// `sqrt(<u, u>)` of a future time-like vector.
pub fn timelike_length(u: &Vector3<f64>) -> Result<f64> {
    let q = dot3(u, u);
    if !(q > 0.0 && u.x > 0.0) {
        return Err(Error::Causal(format!(
            "expected a future time-like vector, got ({}, {}, {}) with <u, u> = {q}",
            u.x, u.y, u.z
        )));
    }
    Ok(q.sqrt())
}

fn check_unit_future(v: &Vector3<f64>, what: &str) -> Result<()> {
    let q = dot3(v, v);
    if (q - 1.0).abs() > 1e-6 || v.x <= 0.0 {
        return Err(Error::Causal(format!(
            "{what} must be a future unit time-like vector, got <T, T> = {q}, t = {}",
            v.x
        )));
    }
    Ok(())
}

/// `arccosh <T1, T2>` for future unit time-like vectors.
pub fn hyperbolic_tangent_distance(t1: &LorentzVec, t2: &LorentzVec) -> Result<f64> {
    let dot = minkowski_dot(t1, t2)?;
    check_unit_future(&t1.embed(), "first tangent")?;
    check_unit_future(&t2.embed(), "second tangent")?;
    if dot < 1.0 - 1e-6 {
        return Err(Error::Causal(format!("<T1, T2> = {dot} is below 1")));
    }
    Ok(dot.max(1.0).acosh())
}

/// Unit-speed curve with future time-like tangent.
#[derive(Debug, Clone, PartialEq)]
pub struct TimelikeCurve {
    pub dim: usize,
    pub s_grid: Vec<f64>,
    pub position: Vec<Vector3<f64>>,
    pub tangent: Vec<Vector3<f64>>,
    pub tangent_rate: Vec<Vector3<f64>>,
    /// Input curvature: signed for plane curves, magnitude in 3D.
    pub curvature: Vec<f64>,
}

impl TimelikeCurve {
    pub fn len(&self) -> usize {
        self.s_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s_grid.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.s_grid[0]
    }

    pub fn end(&self) -> f64 {
        self.s_grid[self.len() - 1]
    }

    pub fn position_vec(&self, i: usize) -> LorentzVec {
        to_lorentz(&self.position[i], self.dim)
    }

    pub fn tangent_vec(&self, i: usize) -> LorentzVec {
        to_lorentz(&self.tangent[i], self.dim)
    }

    /// Largest `|<T, T> - 1|`.
    pub fn normalization_defect(&self) -> f64 {
        self.tangent.iter().map(|t| (dot3(t, t) - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Hermite interpolation of position and tangent, tangent renormalized.
    pub fn eval(&self, s: f64) -> (Vector3<f64>, Vector3<f64>) {
        let n = self.len();
        let i = self.s_grid.partition_point(|&x| x <= s).clamp(1, n - 1) - 1;
        let (s0, s1) = (self.s_grid[i], self.s_grid[i + 1]);
        let s = s.clamp(s0, s1);
        if s == s0 {
            return (self.position[i], self.tangent[i]);
        }
        if s == s1 {
            return (self.position[i + 1], self.tangent[i + 1]);
        }
        let p = hermite(s0, s1, self.position[i], self.position[i + 1], self.tangent[i], self.tangent[i + 1], s);
        let t = hermite(
            s0,
            s1,
            self.tangent[i],
            self.tangent[i + 1],
            self.tangent_rate[i],
            self.tangent_rate[i + 1],
            s,
        );
        (p, t / dot3(&t, &t).sqrt())
    }

    /// Applies `x -> m x + shift`; plane curves need `m` to keep the `(t, x)` plane.
    pub fn transformed(&self, m: &Matrix3<f64>, shift: Vector3<f64>) -> Result<Self> {
        if self.dim == 2 && (m[(2, 0)] != 0.0 || m[(2, 1)] != 0.0 || shift.z != 0.0) {
            return Err(Error::Dimension("transformation leaves the (t, x) plane of a plane curve".into()));
        }
        let mut out = self.clone();
        for i in 0..self.len() {
            out.position[i] = m * self.position[i] + shift;
            out.tangent[i] = m * self.tangent[i];
            out.tangent_rate[i] = m * self.tangent_rate[i];
        }
        Ok(out)
    }

    /// The plane curve viewed as a curve in 3-space.
    pub fn embedded(&self) -> Self {
        Self { dim: 3, ..self.clone() }
    }
}

fn to_lorentz(v: &Vector3<f64>, dim: usize) -> LorentzVec {
    if dim == 2 {
        LorentzVec::new2(v.x, v.y)
    } else {
        LorentzVec::new3(v.x, v.y, v.z)
    }
}

/// Plane time-like curve with rapidity `phi(s) = phi0 + int k` and `T = (cosh phi, sinh phi)`.
pub fn reconstruct_timelike_2d(
    k: &CurvatureFn,
    length: f64,
    start: Vector2<f64>,
    rapidity0: f64,
    control: &StepControl,
) -> Result<TimelikeCurve> {
    control.validate()?;
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::Profile(format!("length must be positive, got {length}")));
    }
    let field = |s: f64, y: &Vector3<f64>| Vector3::new(y.z.cosh(), y.z.sinh(), k.eval(s));
    let traj = rk4_integrate(field, Vector3::new(start.x, start.y, rapidity0), (0.0, length), control)?;
    let mut out = TimelikeCurve {
        dim: 2,
        s_grid: traj.s_grid.clone(),
        position: Vec::with_capacity(traj.len()),
        tangent: Vec::with_capacity(traj.len()),
        tangent_rate: Vec::with_capacity(traj.len()),
        curvature: Vec::with_capacity(traj.len()),
    };
    for (s, y) in traj.iter() {
        let kk = k.eval(s);
        out.position.push(Vector3::new(y.x, y.y, 0.0));
        out.tangent.push(Vector3::new(y.z.cosh(), y.z.sinh(), 0.0));
        out.tangent_rate.push(Vector3::new(y.z.sinh(), y.z.cosh(), 0.0) * kk);
        out.curvature.push(kk);
    }
    Ok(out)
}

/// Unit time-like tangent with two space-like unit companions, pairwise orthogonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzFrame {
    pub tangent: Vector3<f64>,
    pub e1: Vector3<f64>,
    pub e2: Vector3<f64>,
}

impl LorentzFrame {
    /// `T = (cosh phi, sinh phi, 0)`, `E1 = (sinh phi, cosh phi, 0)`, `E2 = (0, 0, 1)`.
    pub fn from_rapidity(phi: f64) -> Self {
        Self {
            tangent: Vector3::new(phi.cosh(), phi.sinh(), 0.0),
            e1: Vector3::new(phi.sinh(), phi.cosh(), 0.0),
            e2: Vector3::z(),
        }
    }

    pub fn defect(&self) -> f64 {
        let (t, a, b) = (self.tangent, self.e1, self.e2);
        [
            dot3(&t, &t) - 1.0,
            dot3(&a, &a) + 1.0,
            dot3(&b, &b) + 1.0,
            dot3(&t, &a),
            dot3(&t, &b),
            dot3(&a, &b),
        ]
        .iter()
        .fold(0.0, |m, v| m.max(v.abs()))
    }

    fn gram_schmidt(&self) -> Self {
        let t = self.tangent / dot3(&self.tangent, &self.tangent).sqrt();
        let a = self.e1 - t * dot3(&self.e1, &t);
        let a = a / (-dot3(&a, &a)).sqrt();
        let b = self.e2 - t * dot3(&self.e2, &t) + a * dot3(&self.e2, &a);
        let b = b / (-dot3(&b, &b)).sqrt();
        Self { tangent: t, e1: a, e2: b }
    }
}

/// Time-like curve in 3D with `T' = k (cos psi E1 + sin psi E2)` and the
/// companions carried by `E1' = k cos psi T`, `E2' = k sin psi T`.
///
/// The angle `psi = spin(s)` steers the curve out of a plane; constant spin
/// gives a plane curve.
pub fn reconstruct_timelike_3d(
    k: &CurvatureFn,
    spin: &CurvatureFn,
    length: f64,
    start: Vector3<f64>,
    frame: &LorentzFrame,
    control: &StepControl,
) -> Result<TimelikeCurve> {
    control.validate()?;
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::Profile(format!("length must be positive, got {length}")));
    }
    check_unit_future(&frame.tangent, "initial tangent")?;
    if frame.defect() > 1e-9 {
        return Err(Error::Causal(format!(
            "initial frame is not Lorentz-orthonormal (defect {:.3e})",
            frame.defect()
        )));
    }
    let direction = |s: f64, y: &SVector<f64, 12>| {
        let psi = spin.eval(s);
        y.fixed_rows::<3>(6) * psi.cos() + y.fixed_rows::<3>(9) * psi.sin()
    };
    let field = |s: f64, y: &SVector<f64, 12>| {
        let (kk, psi) = (k.eval(s), spin.eval(s));
        let t = y.fixed_rows::<3>(3).into_owned();
        let mut d = SVector::<f64, 12>::zeros();
        d.fixed_rows_mut::<3>(0).copy_from(&t);
        d.fixed_rows_mut::<3>(3).copy_from(&(direction(s, y) * kk));
        d.fixed_rows_mut::<3>(6).copy_from(&(t * (kk * psi.cos())));
        d.fixed_rows_mut::<3>(9).copy_from(&(t * (kk * psi.sin())));
        d
    };
    let unpack = |y: &SVector<f64, 12>| LorentzFrame {
        tangent: y.fixed_rows::<3>(3).into_owned(),
        e1: y.fixed_rows::<3>(6).into_owned(),
        e2: y.fixed_rows::<3>(9).into_owned(),
    };
    let pack = |y: &mut SVector<f64, 12>, f: &LorentzFrame| {
        y.fixed_rows_mut::<3>(3).copy_from(&f.tangent);
        y.fixed_rows_mut::<3>(6).copy_from(&f.e1);
        y.fixed_rows_mut::<3>(9).copy_from(&f.e2);
    };
    let mut y0 = SVector::<f64, 12>::zeros();
    y0.fixed_rows_mut::<3>(0).copy_from(&start);
    pack(&mut y0, frame);
    let traj = rk4_integrate_with(field, y0, (0.0, length), control, |s, y| {
        let f = unpack(y).gram_schmidt();
        if !(f.tangent.x > 0.0) {
            return Err(Error::Causal(format!("tangent left the future sheet at s = {s}")));
        }
        pack(y, &f);
        Ok(())
    })?;
    let mut out = TimelikeCurve {
        dim: 3,
        s_grid: traj.s_grid.clone(),
        position: Vec::with_capacity(traj.len()),
        tangent: Vec::with_capacity(traj.len()),
        tangent_rate: Vec::with_capacity(traj.len()),
        curvature: Vec::with_capacity(traj.len()),
    };
    for (s, y) in traj.iter() {
        let kk = k.eval(s);
        out.position.push(y.fixed_rows::<3>(0).into_owned());
        out.tangent.push(y.fixed_rows::<3>(3).into_owned());
        out.tangent_rate.push(direction(s, &y) * kk);
        out.curvature.push(kk.abs());
    }
    Ok(out)
}

/// `sqrt(-<T', T'>)` with `T'` from finite differences of the tangent samples.
pub fn measured_curvature(curve: &TimelikeCurve) -> Result<SampledFunction> {
    let tangents = SampledFunction::new(curve.s_grid.clone(), curve.tangent.clone())?;
    let d = finite_diff(&tangents, DiffOrder::First)?;
    Ok(d.map(|v| (-dot3(&v, &v)).max(0.0).sqrt()))
}

/// Space-like plane curve, stored with `t` and `x` exchanged so that it is
/// handled by the time-like machinery.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacelikeCurve(TimelikeCurve);

impl SpacelikeCurve {
    /// Samples in the original coordinates, where `<T, T> = -1`.
    pub fn curve(&self) -> TimelikeCurve {
        swap_tx(&self.0)
    }

    /// The coordinate-swapped time-like curve on which comparisons run.
    pub fn as_timelike(&self) -> &TimelikeCurve {
        &self.0
    }
}

fn swap_tx(c: &TimelikeCurve) -> TimelikeCurve {
    let swap = |v: &Vector3<f64>| Vector3::new(v.y, v.x, v.z);
    TimelikeCurve {
        dim: c.dim,
        s_grid: c.s_grid.clone(),
        position: c.position.iter().map(swap).collect(),
        tangent: c.tangent.iter().map(swap).collect(),
        tangent_rate: c.tangent_rate.iter().map(swap).collect(),
        curvature: c.curvature.clone(),
    }
}

/// Space-like plane curve `T = (sinh phi, cosh phi)`, `phi = phi0 + int k`.
pub fn reconstruct_spacelike_2d(
    k: &CurvatureFn,
    length: f64,
    start: Vector2<f64>,
    rapidity0: f64,
    control: &StepControl,
) -> Result<SpacelikeCurve> {
    let swapped = reconstruct_timelike_2d(k, length, Vector2::new(start.y, start.x), rapidity0, control)?;
    Ok(SpacelikeCurve(swapped))
}

/// Boost with rapidity `phi` in the `(t, x)` plane.
pub fn boost_tx(phi: f64) -> Matrix3<f64> {
    let (c, s) = (phi.cosh(), phi.sinh());
    Matrix3::new(c, s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Boost with rapidity `phi` in the `(t, y)` plane.
pub fn boost_ty(phi: f64) -> Matrix3<f64> {
    let (c, s) = (phi.cosh(), phi.sinh());
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, s, 0.0, c)
}

/// Rotation by `angle` in the spatial `(x, y)` plane.
pub fn spatial_rotation(angle: f64) -> Matrix3<f64> {
    let (c, s) = (angle.cos(), angle.sin());
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

/// Monotonicity of `I_2(s) = <i(c(s)) - c~(s), T~(s*)>`.
#[derive(Debug, Clone, PartialEq)]
pub struct LorentzMonotonicityReport {
    pub s_star: f64,
    pub i_samples: SampledFunction,
    /// `<T(s), T(s*)> - <T~(s), T~(s*)>`.
    pub derivative_slack: SampledFunction,
    pub min_slack: f64,
    pub argmin_s: f64,
    pub hypotheses: Vec<Check>,
}

impl LorentzMonotonicityReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|c| c.pass)
    }

    pub fn slack_check(&self, tol: f64) -> Check {
        Check::from_slack("monotonicity slack", self.min_slack, Some(self.argmin_s), tol)
    }

    pub fn consistency_gap(&self) -> f64 {
        let v = &self.i_samples.values;
        (v[v.len() - 1] - v[0]) - crate::numerics::simpson_samples(&self.derivative_slack.s_grid, &self.derivative_slack.values)
    }

    pub fn min_increment(&self) -> f64 {
        self.i_samples
            .values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

fn lorentz_pair_check(c: &TimelikeCurve, ct: &TimelikeCurve) -> Result<()> {
    if c.dim != 2 {
        return Err(Error::Dimension(format!("first curve must lie in the plane, got dim {}", c.dim)));
    }
    if c.s_grid != ct.s_grid {
        return Err(Error::Alignment(format!(
            "grids differ ({} vs {} samples)",
            c.len(),
            ct.len()
        )));
    }
    Ok(())
}

/// Sample-wise `k >= |k~|` and future-directed tangents.
pub fn lorentz_census(c: &TimelikeCurve, ct: &TimelikeCurve, tol: f64) -> Result<Vec<Check>> {
    lorentz_pair_check(c, ct)?;
    let mut dom = Worst::default();
    let mut future = Worst::default();
    for i in 0..c.len() {
        let s = c.s_grid[i];
        dom.update(c.curvature[i] - ct.curvature[i].abs(), s);
        future.update(c.tangent[i].x.min(ct.tangent[i].x), s);
    }
    Ok(vec![
        dom.check("curvature domination k >= |k~|", tol),
        future.check("tangents future-directed", tol),
    ])
}

/// `I_2'(s) >= 0` for an arbitrary anchor `s*` in `[0, L]`.
pub fn lorentz_monotonicity(c: &TimelikeCurve, ct: &TimelikeCurve, s_star: f64, tol: f64) -> Result<LorentzMonotonicityReport> {
    let hypotheses = lorentz_census(c, ct, tol)?;
    if !(s_star >= c.start() && s_star <= c.end()) {
        return Err(Error::Domain {
            a: s_star,
            b: s_star,
            lo: c.start(),
            hi: c.end(),
        });
    }
    let (_, t_star) = c.eval(s_star);
    let (_, tt_star) = ct.eval(s_star);
    let mut iv = Vec::with_capacity(c.len());
    let mut dv = Vec::with_capacity(c.len());
    let mut worst = Worst::default();
    for i in 0..c.len() {
        // <i(u), i(T*)> = <u, T*> and i(T*) = T~*
        let slack = dot3(&c.tangent[i], &t_star) - dot3(&ct.tangent[i], &tt_star);
        iv.push(dot3(&c.position[i], &t_star) - dot3(&ct.position[i], &tt_star));
        dv.push(slack);
        worst.update(slack, c.s_grid[i]);
    }
    Ok(LorentzMonotonicityReport {
        s_star,
        i_samples: SampledFunction::new(c.s_grid.clone(), iv)?,
        derivative_slack: SampledFunction::new(c.s_grid.clone(), dv)?,
        min_slack: worst.slack,
        argmin_s: worst.location.unwrap_or(s_star),
        hypotheses,
    })
}

/// Minkowski chord lengths and the reversed Cauchy–Schwarz slack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LorentzChordReport {
    pub chord: f64,
    pub chord_tilde: f64,
    /// `chord - chord_tilde`.
    pub slack: f64,
    /// `<u, v> - |u| |v|` for the two chords.
    pub cauchy_schwarz_slack: f64,
    pub pass: bool,
}

/// `|c(L) - c(0)| >= |c~(L) - c~(0)|` in Minkowski length.
pub fn reversed_chord_inequality(c: &TimelikeCurve, ct: &TimelikeCurve, tol: f64) -> Result<LorentzChordReport> {
    lorentz_pair_check(c, ct)?;
    let u = c.position[c.len() - 1] - c.position[0];
    let v = ct.position[ct.len() - 1] - ct.position[0];
    let (lu, lv) = (timelike_length(&u)?, timelike_length(&v)?);
    let cs = reversed_cauchy_schwarz_slack(&u, &v)?;
    let slack = lu - lv;
    Ok(LorentzChordReport {
        chord: lu,
        chord_tilde: lv,
        slack,
        cauchy_schwarz_slack: cs,
        pass: slack >= -tol,
    })
}

/// `<u, v> - sqrt<u, u> sqrt<v, v>` for future time-like `u`, `v`.
pub fn reversed_cauchy_schwarz_slack(u: &Vector3<f64>, v: &Vector3<f64>) -> Result<f64> {
    Ok(dot3(u, v) - timelike_length(u)? * timelike_length(v)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctl() -> StepControl {
        StepControl::default()
    }

    fn plane(k: f64, l: f64) -> TimelikeCurve {
        reconstruct_timelike_2d(&CurvatureFn::Constant(k), l, Vector2::zeros(), 0.0, &ctl()).unwrap()
    }

    fn space(k: f64, spin: CurvatureFn, l: f64) -> TimelikeCurve {
        reconstruct_timelike_3d(
            &CurvatureFn::Constant(k),
            &spin,
            l,
            Vector3::zeros(),
            &LorentzFrame::from_rapidity(0.0),
            &ctl(),
        )
        .unwrap()
    }

    fn spin_s() -> CurvatureFn {
        CurvatureFn::Linear { a: 0.0, b: 1.0 }
    }

    #[test]
    fn dot_examples() {
        let d = |a: LorentzVec, b: LorentzVec| minkowski_dot(&a, &b).unwrap();
        assert_eq!(d(LorentzVec::new3(1.0, 0.0, 0.0), LorentzVec::new3(1.0, 0.0, 0.0)), 1.0);
        assert_eq!(d(LorentzVec::new3(0.0, 1.0, 0.0), LorentzVec::new3(0.0, 1.0, 0.0)), -1.0);
        assert_eq!(d(LorentzVec::new3(2.0, 1.0, 0.0), LorentzVec::new3(2.0, -1.0, 0.0)), 5.0);
        assert!(matches!(
            minkowski_dot(&LorentzVec::new2(1.0, 0.0), &LorentzVec::new3(1.0, 0.0, 0.0)),
            Err(Error::Dimension(_))
        ));
        assert_eq!(LorentzVec::new2(2.0, 1.0).causal_type(1e-12), CausalType::TimeLike);
        assert_eq!(LorentzVec::new2(1.0, 2.0).causal_type(1e-12), CausalType::SpaceLike);
        assert_eq!(LorentzVec::new2(1.0, 1.0).causal_type(1e-12), CausalType::Null);
    }

    #[test]
    fn straight_and_hyperbola() {
        let line = plane(0.0, 2.0);
        let chord = line.position[line.len() - 1] - line.position[0];
        assert!((timelike_length(&chord).unwrap() - 2.0).abs() < 1e-12);

        let h = plane(1.0, 1.0);
        let d = hyperbolic_tangent_distance(&h.tangent_vec(0), &h.tangent_vec(h.len() - 1)).unwrap();
        assert!((d - 1.0).abs() < 1e-6);
        for (s, p) in h.s_grid.iter().zip(&h.position) {
            assert!((p.x - s.sinh()).abs() < 1e-5 && (p.y - (s.cosh() - 1.0)).abs() < 1e-5);
        }
        assert!(h.normalization_defect() < 1e-9);
    }

    #[test]
    fn tangent_distance_examples() {
        let t = LorentzVec::new2(1.0, 0.0);
        assert_eq!(hyperbolic_tangent_distance(&t, &t).unwrap(), 0.0);
        let u = LorentzVec::new2(1f64.cosh(), 1f64.sinh());
        assert!((hyperbolic_tangent_distance(&t, &u).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            hyperbolic_tangent_distance(&t, &LorentzVec::new2(-1.0, 0.0)),
            Err(Error::Causal(_))
        ));
    }

    #[test]
    fn planar_spin_matches_plane_curve() {
        let c = plane(0.5, 2.0);
        let ct = space(0.5, CurvatureFn::Constant(0.0), 2.0);
        for i in 0..c.len() {
            assert!((c.position[i] - ct.position[i]).norm() < 1e-5);
        }
        let still = space(0.0, spin_s(), 2.0);
        assert!(still.position.iter().zip(&still.s_grid).all(|(p, s)| (p - Vector3::new(*s, 0.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn spinning_curve_is_not_planar() {
        let ct = space(0.5, spin_s(), 2.0);
        let k = measured_curvature(&ct).unwrap();
        assert!(k.values.iter().all(|v| (v - 0.5).abs() < 1e-4));
        assert!(ct.position.iter().any(|p| p.z.abs() > 1e-2));
        assert!(ct.normalization_defect() < 1e-9);

        let flat = space(0.5, CurvatureFn::Constant(0.7), 2.0);
        let (a, b) = (flat.position[500], flat.position[1500]);
        let n = a.cross(&b).normalize();
        assert!(flat.position.iter().all(|p| p.dot(&n).abs() < 1e-5));
    }

    #[test]
    fn bad_initial_frame() {
        let frame = LorentzFrame {
            tangent: Vector3::new(-1.0, 0.0, 0.0),
            e1: Vector3::y(),
            e2: Vector3::z(),
        };
        let err = reconstruct_timelike_3d(&CurvatureFn::Constant(1.0), &spin_s(), 1.0, Vector3::zeros(), &frame, &ctl());
        assert!(matches!(err, Err(Error::Causal(_))));
    }

    #[test]
    fn rapidity_is_tangent_arc_length() {
        let k = CurvatureFn::Sinusoidal {
            mean: 0.8,
            amplitude: 0.5,
            frequency: 2.0,
            phase: 0.3,
        };
        let c = reconstruct_timelike_2d(&k, 2.0, Vector2::zeros(), 0.4, &ctl()).unwrap();
        for &(a, b) in &[(0usize, 2000usize), (300, 900), (1000, 1700)] {
            let d = hyperbolic_tangent_distance(&c.tangent_vec(a), &c.tangent_vec(b)).unwrap();
            assert!((d - k.integral(c.s_grid[a], c.s_grid[b]).abs()).abs() < 1e-5);
        }
        let measured = measured_curvature(&c).unwrap();
        for (s, v) in measured.iter() {
            assert!((v - k.eval(s)).abs() < 2e-4);
        }
    }

    #[test]
    fn monotonicity_for_free_anchor() {
        let c = plane(1.0, 2.0);
        let ct = space(0.5, spin_s(), 2.0);
        for s_star in [0.0, 0.5, 1.0, 2.0] {
            let rep = lorentz_monotonicity(&c, &ct, s_star, 1e-6).unwrap();
            assert!(rep.hypotheses_hold());
            assert!(rep.min_slack >= -1e-6, "s* = {s_star}");
            assert!(rep.consistency_gap().abs() < 1e-5);
            assert!(rep.min_increment() >= -1e-6);
            // cosh(int k) >= cosh(d~) pointwise
            for (i, &s) in c.s_grid.iter().enumerate().step_by(97) {
                let lhs = (s - s_star).abs().cosh();
                assert!((dot3(&c.tangent[i], &c.eval(s_star).1) - lhs).abs() < 1e-6);
            }
        }
        let same = lorentz_monotonicity(&c, &c.embedded(), 0.7, 1e-6).unwrap();
        assert!(same.derivative_slack.values.iter().all(|v| v.abs() < 1e-9));
    }

    #[test]
    fn reversed_chords() {
        let c = plane(1.0, 1.0);
        let line = plane(0.0, 1.0).embedded();
        let rep = reversed_chord_inequality(&c, &line, 1e-6).unwrap();
        assert!(rep.pass);
        // analytic chord: (sinh 1, cosh 1 - 1) has <u, u> = 2 cosh 1 - 2
        assert!((rep.chord - (2.0 * 1f64.cosh() - 2.0).sqrt()).abs() < 1e-6);
        assert!((rep.chord_tilde - 1.0).abs() < 1e-9);
        let same = reversed_chord_inequality(&c, &c.embedded(), 1e-6).unwrap();
        assert!(same.slack.abs() < 1e-12);
    }

    #[test]
    fn boosts_leave_reports_unchanged() {
        let c = plane(1.0, 2.0);
        let ct = space(0.5, spin_s(), 2.0);
        let base = lorentz_monotonicity(&c, &ct, 1.0, 1e-6).unwrap();
        let chord = reversed_chord_inequality(&c, &ct, 1e-6).unwrap();
        let b = boost_tx(0.6);
        let (bc, bct) = (c.transformed(&b, Vector3::zeros()).unwrap(), ct.transformed(&b, Vector3::new(0.2, -1.0, 0.0)).unwrap());
        let moved = lorentz_monotonicity(&bc, &bct, 1.0, 1e-6).unwrap();
        assert!((moved.min_slack - base.min_slack).abs() < 1e-6);
        let moved_chord = reversed_chord_inequality(&bc, &bct, 1e-6).unwrap();
        assert!((moved_chord.slack - chord.slack).abs() < 1e-6);
        assert!(c.transformed(&boost_ty(0.3), Vector3::zeros()).is_err());
    }

    #[test]
    fn spacelike_wrapper() {
        let s = reconstruct_spacelike_2d(&CurvatureFn::Constant(1.0), 1.0, Vector2::zeros(), 0.0, &ctl()).unwrap();
        let raw = s.curve();
        assert!(raw.tangent.iter().all(|t| (dot3(t, t) + 1.0).abs() < 1e-9));
        let line = reconstruct_spacelike_2d(&CurvatureFn::Constant(0.0), 1.0, Vector2::zeros(), 0.0, &ctl()).unwrap();
        let rep = reversed_chord_inequality(s.as_timelike(), &line.as_timelike().embedded(), 1e-6).unwrap();
        assert!(rep.pass);
    }

    proptest! {
        #[test]
        fn distance_is_boost_invariant(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0, phi in -1.5f64..1.5, psi in -1.5f64..1.5, rot in 0.0f64..6.3) {
            let unit = |r: f64, ang: f64| Vector3::new(r.cosh(), r.sinh() * ang.cos(), r.sinh() * ang.sin());
            let (t1, t2) = (unit(a, c), unit(b, -c));
            let m = boost_tx(phi) * spatial_rotation(rot) * boost_ty(psi);
            let to = |v: Vector3<f64>| LorentzVec::new3(v.x, v.y, v.z);
            let d0 = hyperbolic_tangent_distance(&to(t1), &to(t2)).unwrap();
            let d1 = hyperbolic_tangent_distance(&to(m * t1), &to(m * t2)).unwrap();
            prop_assert!((d0 - d1).abs() < 1e-9 * (1.0 + d0));
        }

        #[test]
        fn reversed_cauchy_schwarz(a in -2.0f64..2.0, b in -2.0f64..2.0, ang in 0.0f64..6.3, la in 0.1f64..5.0, lb in 0.1f64..5.0) {
            let u = Vector3::new(a.cosh(), a.sinh(), 0.0) * la;
            let v = Vector3::new(b.cosh(), b.sinh() * ang.cos(), b.sinh() * ang.sin()) * lb;
            prop_assert!(reversed_cauchy_schwarz_slack(&u, &v).unwrap() >= -1e-9 * la * lb);
        }
    }
}
