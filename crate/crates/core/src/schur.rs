//! Chord comparison between a convex plane curve `c` and a space curve `c~`
//! of the same length whose curvature is pointwise no larger.
//!
//! The central object is the monotone functional
//! `I(s) = <c~(s) - i(c(s)), i(c(s'') - c(s'))>` for an isometric inclusion
//! `i` of the plane that sends the tangent direction `N = T(s*)` parallel to
//! the chord onto `T~(s*)`. Because `i` preserves inner products, every
//! quantity here is evaluated without materializing `i`:
//! `<i(u), i(N)> = <u, N>` and `i(N) = T~(s*)`.

use std::f64::consts::PI;

use nalgebra::{Matrix3x2, Rotation3, Unit, Vector2, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::curves::{tangent_angle, CurvePoint, SampledCurve, Side, TangentAngle};
use crate::error::{Error, Result};
use crate::numerics::{bisect_monotone, Piecewise, SampledFunction};
use crate::report::{Check, Worst};

/// Linear isometric map from the plane into 3-space with `i(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsometricInclusion {
    pub matrix: Matrix3x2<f64>,
}

impl IsometricInclusion {
    pub fn apply(&self, u: &Vector2<f64>) -> Vector3<f64> {
        self.matrix * u
    }

    /// Applies the inclusion to a plane vector stored with `z = 0`.
    pub fn apply_embedded(&self, u: &Vector3<f64>) -> Vector3<f64> {
        self.matrix * Vector2::new(u.x, u.y)
    }

    /// Largest deviation of `M^T M` from the identity.
    pub fn isometry_defect(&self) -> f64 {
        let g = self.matrix.transpose() * self.matrix;
        (g - nalgebra::Matrix2::identity()).abs().max()
    }
}

fn unit_check2(v: &Vector2<f64>) -> Result<()> {
    if (v.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Normalization(v.norm()));
    }
    Ok(())
}

fn unit_check3(v: &Vector3<f64>) -> Result<()> {
    if (v.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Normalization(v.norm()));
    }
    Ok(())
}

/// Inclusion sending `t_star` to `tt_star`; the image of the rotated
/// direction `J t_star` is fixed deterministically from a reference axis.
pub fn build_inclusion(t_star: &Vector2<f64>, tt_star: &Vector3<f64>) -> Result<IsometricInclusion> {
    unit_check3(tt_star)?;
    let mut w = Vector3::z().cross(tt_star);
    if w.norm() < 0.1 {
        w = tt_star.cross(&Vector3::x());
    }
    build_inclusion_with_completion(t_star, tt_star, &w)
}

/// Same as [`build_inclusion`] with a caller-chosen second image direction;
/// `second` is orthogonalized against `tt_star`.
pub fn build_inclusion_with_completion(
    t_star: &Vector2<f64>,
    tt_star: &Vector3<f64>,
    second: &Vector3<f64>,
) -> Result<IsometricInclusion> {
    unit_check2(t_star)?;
    unit_check3(tt_star)?;
    let t = t_star.normalize();
    let tt = tt_star.normalize();
    let w = second - tt * tt.dot(second);
    if w.norm() < 1e-9 {
        return Err(Error::Precondition("inclusion completion is parallel to the target tangent".into()));
    }
    let w = w.normalize();
    let jt = Vector2::new(-t.y, t.x);
    // M = [tt w] [t jt]^T
    let matrix = tt * t.transpose() + w * jt.transpose();
    Ok(IsometricInclusion { matrix })
}

/// Tangent direction parallel to a chord.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SStar {
    pub s: f64,
    /// Unwrapped tangent-image angle of `N`.
    pub theta: f64,
    pub direction: [f64; 2],
    /// The chord direction lies strictly inside the angular gap of the jump at `s`.
    pub jump_interior: bool,
}

impl SStar {
    /// Uses `T(s-)` as the anchor direction.
    pub fn at(c: &SampledCurve, s: f64) -> Result<Self> {
        let angle = tangent_angle(c)?;
        Ok(Self::at_with(c, &angle, s))
    }

    fn at_with(c: &SampledCurve, angle: &TangentAngle, s: f64) -> Self {
        let p = c.eval(s, Side::Left);
        Self {
            s,
            theta: angle.eval(c, s, Side::Left),
            direction: [p.tangent.x, p.tangent.y],
            jump_interior: false,
        }
    }

    pub fn n(&self) -> Vector3<f64> {
        Vector3::new(self.direction[0], self.direction[1], 0.0)
    }
}

fn plane_dim_check(c: &SampledCurve) -> Result<()> {
    if c.dim != 2 {
        return Err(Error::Dimension(format!("expected a plane curve, got dim {}", c.dim)));
    }
    Ok(())
}

fn range_check(c: &SampledCurve, range: (f64, f64)) -> Result<()> {
    let (a, b) = range;
    let slack = 1e-12 * c.end().abs().max(1.0);
    if !(a < b) || a < c.start() - slack || b > c.end() + slack {
        return Err(Error::Domain {
            a,
            b,
            lo: c.start(),
            hi: c.end(),
        });
    }
    Ok(())
}

/// Locates `s*` in `[s', s'']` with `T(s*)` parallel to `c(s'') - c(s')`.
pub fn find_s_star(c: &SampledCurve, range: (f64, f64), tol: f64) -> Result<SStar> {
    plane_dim_check(c)?;
    let angle = tangent_angle(c)?;
    find_s_star_with(c, &angle, range, tol)
}

fn find_s_star_with(c: &SampledCurve, angle: &TangentAngle, range: (f64, f64), tol: f64) -> Result<SStar> {
    range_check(c, range)?;
    let (s1, s2) = range;
    let chord = c.eval(s2, Side::Left).position - c.eval(s1, Side::Right).position;
    if chord.norm() < 1e-12 {
        return Err(Error::Hypothesis(format!("chord on [{s1}, {s2}] is degenerate")));
    }
    let phi = chord.y.atan2(chord.x);
    let (theta_a, theta_b) = (angle.eval(c, s1, Side::Right), angle.eval(c, s2, Side::Left));
    let lo_m = ((theta_a - tol - phi) / (2.0 * PI)).ceil() as i64;
    let hi_m = ((theta_b + tol - phi) / (2.0 * PI)).floor() as i64;
    if lo_m > hi_m {
        return Err(Error::Hypothesis(format!(
            "chord direction {phi:.6} lies outside the tangent image [{theta_a:.6}, {theta_b:.6}] on [{s1}, {s2}]"
        )));
    }
    let target = (lo_m..=hi_m)
        .map(|m| phi + 2.0 * PI * m as f64)
        .min_by(|x, y| {
            let unbalance = |t: f64| (t - theta_a).max(theta_b - t);
            unbalance(*x).total_cmp(&unbalance(*y))
        })
        .unwrap()
        .clamp(theta_a, theta_b);
    let direction = [chord.x / chord.norm(), chord.y / chord.norm()];

    for r in c.segment_ranges() {
        let (a, b) = (c.s_grid[r.start].max(s1), c.s_grid[r.end - 1].min(s2));
        if !(b > a) {
            continue;
        }
        let (ta, tb) = (angle.eval(c, a, Side::Right), angle.eval(c, b, Side::Left));
        if target >= ta && target <= tb {
            let s = bisect_monotone(|s| angle.eval(c, s, Side::Right) - target, (a, b), 1e-13)
                .or_else(|_| bisect_monotone(|s| angle.eval(c, s, Side::Right) - target, (a, b), tol))?;
            return Ok(SStar {
                s,
                theta: target,
                direction,
                jump_interior: false,
            });
        }
        // gap at the jump closing this segment
        if b < s2 && target > tb {
            let next = angle.eval(c, b, Side::Right);
            if target < next {
                return Ok(SStar {
                    s: b,
                    theta: target,
                    direction,
                    jump_interior: true,
                });
            }
        }
    }
    Err(Error::Hypothesis(format!(
        "tangent angle never reaches the chord direction on [{s1}, {s2}]; the plane curve is not convex"
    )))
}

/// Lengths of the tangent-image arcs on either side of `s*`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcBudget {
    pub gamma1: f64,
    pub gamma2: f64,
    pub pass: bool,
}

/// Both tangent-image arcs must be minimizing: length at most pi.
pub fn arc_length_budget_check(c: &SampledCurve, range: (f64, f64), s_star: &SStar, tol: f64) -> Result<ArcBudget> {
    plane_dim_check(c)?;
    range_check(c, range)?;
    let angle = tangent_angle(c)?;
    Ok(arc_budget_with(c, &angle, range, s_star.theta, tol))
}

fn arc_budget_with(c: &SampledCurve, angle: &TangentAngle, range: (f64, f64), theta_star: f64, tol: f64) -> ArcBudget {
    let gamma1 = theta_star - angle.eval(c, range.0, Side::Right);
    let gamma2 = angle.eval(c, range.1, Side::Left) - theta_star;
    ArcBudget {
        gamma1,
        gamma2,
        pass: gamma1 <= PI + tol && gamma2 <= PI + tol && gamma1 >= -tol && gamma2 >= -tol,
    }
}

/// Points of the curve in a range, one vector per smooth segment touching it.
fn range_points(c: &SampledCurve, range: (f64, f64)) -> Vec<Vec<CurvePoint>> {
    let (s1, s2) = range;
    let mut out = Vec::new();
    for r in c.segment_ranges() {
        let (a, b) = (c.s_grid[r.start].max(s1), c.s_grid[r.end - 1].min(s2));
        if !(b > a) {
            continue;
        }
        let h = (c.s_grid[r.end - 1] - c.s_grid[r.start]) / (r.len() - 1) as f64;
        let gap = 1e-3 * h;
        let mut pts = vec![c.eval(a, Side::Right)];
        for i in r.clone() {
            let s = c.s_grid[i];
            if s > a + gap && s < b - gap {
                pts.push(c.point(i));
            }
        }
        pts.push(c.eval(b, Side::Left));
        out.push(pts);
    }
    out
}

/// Spherical interpolation from `a` toward `b` by the angle `t`.
fn rotate_toward(a: &Vector3<f64>, b: &Vector3<f64>, t: f64) -> Vector3<f64> {
    let w = b - a * a.dot(b);
    if w.norm() < 1e-15 {
        return *a;
    }
    (a * t.cos() + w.normalize() * t.sin()).normalize()
}

/// The anchor data shared by the checks on one range.
#[derive(Debug, Clone, Copy)]
struct Anchor {
    star: SStar,
    n: Vector3<f64>,
    tt_star: Vector3<f64>,
    chord: Vector3<f64>,
}

impl Anchor {
    fn chord_len(&self) -> f64 {
        self.chord.norm()
    }
}

/// Image of `N` on the space-curve side: `T~(s*)`, or at a jump the point on
/// the minimizing arc from `T~(s*-)` to `T~(s*+)` dividing it in the same
/// proportion as `N` divides the plane jump.
fn space_anchor(c: &SampledCurve, angle: &TangentAngle, ct: &SampledCurve, star: &SStar) -> Vector3<f64> {
    if !star.jump_interior {
        return ct.eval(star.s, Side::Left).tangent;
    }
    let theta_minus = angle.eval(c, star.s, Side::Left);
    let theta_plus = angle.eval(c, star.s, Side::Right);
    let alpha = theta_plus - theta_minus;
    let (tm, tp) = (ct.eval(star.s, Side::Left).tangent, ct.eval(star.s, Side::Right).tangent);
    let alpha_t = tm.angle(&tp);
    if alpha <= 0.0 || alpha_t <= 0.0 {
        return tm;
    }
    let beta = (star.theta - theta_minus) / alpha * alpha_t;
    rotate_toward(&tm, &tp, beta)
}

fn anchor(c: &SampledCurve, angle: &TangentAngle, ct: &SampledCurve, range: (f64, f64), tol: f64) -> Result<Anchor> {
    let star = find_s_star_with(c, angle, range, tol)?;
    let chord = c.eval(range.1, Side::Left).position - c.eval(range.0, Side::Right).position;
    Ok(Anchor {
        star,
        n: star.n(),
        tt_star: space_anchor(c, angle, ct, &star),
        chord,
    })
}

fn pair_check(c: &SampledCurve, ct: &SampledCurve) -> Result<()> {
    plane_dim_check(c)?;
    c.check_same_grid(ct)
}

/// Sample-wise census of the comparison hypotheses on a range.
pub fn hypothesis_census(c: &SampledCurve, ct: &SampledCurve, range: (f64, f64), tol: f64) -> Result<Vec<Check>> {
    pair_check(c, ct)?;
    range_check(c, range)?;
    let angle = tangent_angle(c)?;
    Ok(census_with(c, &angle, ct, range, tol))
}

fn census_with(c: &SampledCurve, angle: &TangentAngle, ct: &SampledCurve, range: (f64, f64), tol: f64) -> Vec<Check> {
    let (s1, s2) = range;
    let mut convex = Worst::default();
    let mut dominated = Worst::default();
    for i in 0..c.len() {
        let s = c.s_grid[i];
        if s < s1 || s > s2 {
            continue;
        }
        convex.update(angle.rate[i], s);
        let k = angle.rate[i].abs();
        dominated.update(k - ct.tangent_rate[i].norm(), s);
    }
    let mut jumps = Worst::default();
    for &m in &c.jump_marks {
        let s = c.s_grid[m];
        if s <= s1 || s >= s2 {
            continue;
        }
        let alpha = angle.theta[m] - angle.theta[m - 1];
        convex.update(alpha, s);
        jumps.update(alpha - ct.tangent[m - 1].angle(&ct.tangent[m]), s);
    }
    let turning = angle.eval(c, s2, Side::Left) - angle.eval(c, s1, Side::Right);
    vec![
        convex.check("plane curve convex (k >= 0, ccw jumps)", tol),
        Check::from_slack("turning budget <= 2 pi", 2.0 * PI - turning, None, tol),
        dominated.check("curvature domination k >= |k~|", tol),
        jumps.check("jump domination alpha_j >= alpha~_j", tol),
    ]
}

/// Monotonicity of `I(s)` on a range, in derivative form.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub range: (f64, f64),
    pub s_star: SStar,
    /// Scale applied to the derivative slack: `|chord|` for the ranged
    /// statement, 1 for the full-curve variant.
    pub scale: f64,
    pub i_samples: Piecewise,
    pub derivative_slack: Piecewise,
    pub min_slack: f64,
    pub argmin_s: f64,
    pub hypotheses: Vec<Check>,
}

impl MonotonicityReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|c| c.pass)
    }

    /// `I(s'') - I(s')` minus the quadrature of the derivative slack.
    pub fn consistency_gap(&self) -> f64 {
        let v = self.i_samples.values();
        (v[v.len() - 1] - v[0]) - self.derivative_slack.integral()
    }

    /// Smallest sample-to-sample increment of `I`.
    pub fn min_increment(&self) -> f64 {
        self.i_samples
            .values()
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn slack_check(&self, tol: f64) -> Check {
        Check::from_slack("monotonicity slack", self.min_slack, Some(self.argmin_s), tol)
    }
}

fn profile_report(
    c: &SampledCurve,
    ct: &SampledCurve,
    range: (f64, f64),
    star: SStar,
    n: Vector3<f64>,
    tt_star: Vector3<f64>,
    scale: f64,
    hypotheses: Vec<Check>,
) -> Result<MonotonicityReport> {
    let plane_pts = range_points(c, range);
    let space_pts = range_points(ct, range);
    let mut i_pieces = Vec::new();
    let mut slack_pieces = Vec::new();
    let mut worst = Worst::default();
    for (pp, sp) in plane_pts.iter().zip(&space_pts) {
        let s: Vec<f64> = pp.iter().map(|p| p.s).collect();
        let mut iv = Vec::with_capacity(s.len());
        let mut dv = Vec::with_capacity(s.len());
        for (p, q) in pp.iter().zip(sp) {
            let slack = scale * (q.tangent.dot(&tt_star) - p.tangent.dot(&n));
            iv.push(scale * (q.position.dot(&tt_star) - p.position.dot(&n)));
            dv.push(slack);
            worst.update(slack, p.s);
        }
        i_pieces.push(SampledFunction::new(s.clone(), iv)?);
        slack_pieces.push(SampledFunction::new(s, dv)?);
    }
    Ok(MonotonicityReport {
        range,
        s_star: star,
        scale,
        i_samples: Piecewise::new(i_pieces),
        derivative_slack: Piecewise::new(slack_pieces),
        min_slack: worst.slack,
        argmin_s: worst.location.unwrap_or(range.0),
        hypotheses,
    })
}

/// `I(s)` and its derivative `<T~(s) - i(T(s)), i(chord)>` on `[s', s'']`.
pub fn monotonicity_profile(
    c: &SampledCurve,
    ct: &SampledCurve,
    range: (f64, f64),
    tol: f64,
) -> Result<MonotonicityReport> {
    pair_check(c, ct)?;
    range_check(c, range)?;
    let angle = tangent_angle(c)?;
    let hypotheses = census_with(c, &angle, ct, range, tol);
    let a = anchor(c, &angle, ct, range, tol)?;
    profile_report(c, ct, range, a.star, a.n, a.tt_star, a.chord_len(), hypotheses)
}

/// The inclusion realizing the anchor of a range.
pub fn range_inclusion(c: &SampledCurve, ct: &SampledCurve, range: (f64, f64), tol: f64) -> Result<IsometricInclusion> {
    pair_check(c, ct)?;
    let angle = tangent_angle(c)?;
    let a = anchor(c, &angle, ct, range, tol)?;
    build_inclusion(&Vector2::new(a.n.x, a.n.y), &a.tt_star)
}

/// `I(s)` evaluated straight from its definition with an explicit inclusion.
pub fn functional_direct(
    c: &SampledCurve,
    ct: &SampledCurve,
    inclusion: &IsometricInclusion,
    range: (f64, f64),
    s: f64,
) -> f64 {
    let chord = c.eval(range.1, Side::Left).position - c.eval(range.0, Side::Right).position;
    let image = inclusion.apply_embedded(&chord);
    (ct.eval(s, Side::Left).position - inclusion.apply_embedded(&c.eval(s, Side::Left).position)).dot(&image)
}

/// Pointwise tangent-cosine comparison against the anchor direction.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentCosineReport {
    pub cos_plane: Piecewise,
    pub cos_space: Piecewise,
    /// Unwrapped angular distance from `T(s)` to `N` along the tangent image.
    pub arc: Piecewise,
    pub cosine_check: Check,
    pub arc_check: Check,
}

pub fn tangent_cosine_comparison(
    c: &SampledCurve,
    ct: &SampledCurve,
    s_star: &SStar,
    range: (f64, f64),
    tol: f64,
) -> Result<TangentCosineReport> {
    pair_check(c, ct)?;
    range_check(c, range)?;
    let angle = tangent_angle(c)?;
    let n = s_star.n();
    let tt_star = space_anchor(c, &angle, ct, s_star);
    let mut cp = Vec::new();
    let mut cs = Vec::new();
    let mut arcs = Vec::new();
    let mut cos_worst = Worst::default();
    let mut arc_worst = Worst::default();
    for (pp, sp) in range_points(c, range).iter().zip(&range_points(ct, range)) {
        let s: Vec<f64> = pp.iter().map(|p| p.s).collect();
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut d = Vec::new();
        for (idx, (p, q)) in pp.iter().zip(sp).enumerate() {
            let side = if idx == 0 { Side::Right } else { Side::Left };
            let x = p.tangent.dot(&n);
            let y = q.tangent.dot(&tt_star);
            let arc = (angle.eval(c, p.s, side) - s_star.theta).abs();
            cos_worst.update(y - x, p.s);
            arc_worst.update(PI - arc, p.s);
            a.push(x);
            b.push(y);
            d.push(arc);
        }
        cp.push(SampledFunction::new(s.clone(), a)?);
        cs.push(SampledFunction::new(s.clone(), b)?);
        arcs.push(SampledFunction::new(s, d)?);
    }
    Ok(TangentCosineReport {
        cos_plane: Piecewise::new(cp),
        cos_space: Piecewise::new(cs),
        arc: Piecewise::new(arcs),
        cosine_check: cos_worst.check("cos d(T, N) <= cos d(T~, T~*)", tol),
        arc_check: arc_worst.check("d(T, N) <= pi", tol),
    })
}

/// Chord comparison on a range, optionally for a nested inner range.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChordReport {
    pub outer: (f64, f64),
    pub inner: (f64, f64),
    /// `|c(b) - c(a)|` over the inner range.
    pub plane_chord: f64,
    /// `|c~(b) - c~(a)|` over the inner range.
    pub space_chord: f64,
    /// `<c(b) - c(a), chord>`; equals `plane_chord^2` when inner = outer.
    pub plane_inner: f64,
    /// `<c~(b) - c~(a), i(chord)>`.
    pub inner_product_bound: f64,
    /// `P1 = |chord|` and `P2 = <c~(s'') - c~(s'), N~>` for the outer range.
    pub p1: f64,
    pub p2: f64,
    pub pass: bool,
    pub slack: f64,
}

/// `|c(s'') - c(s')|^2 <= <c~(s'') - c~(s'), i(chord)>` and the chord conclusion.
pub fn chord_inequality(c: &SampledCurve, ct: &SampledCurve, range: (f64, f64), tol: f64) -> Result<ChordReport> {
    nested_chord_inequality(c, ct, range, range, tol)
}

/// `<c(b) - c(a), chord> <= <c~(b) - c~(a), i(chord)>` for `s' <= a < b <= s''`,
/// with the inclusion taken from the outer range.
pub fn nested_chord_inequality(
    c: &SampledCurve,
    ct: &SampledCurve,
    outer: (f64, f64),
    inner: (f64, f64),
    tol: f64,
) -> Result<ChordReport> {
    pair_check(c, ct)?;
    range_check(c, outer)?;
    if !(inner.0 >= outer.0 && inner.1 <= outer.1 && inner.0 < inner.1) {
        return Err(Error::Precondition(format!(
            "inner range [{}, {}] is not nested in [{}, {}]",
            inner.0, inner.1, outer.0, outer.1
        )));
    }
    let angle = tangent_angle(c)?;
    let a = anchor(c, &angle, ct, outer, tol)?;
    Ok(chord_report(c, ct, &a, outer, inner, tol))
}

fn chord_report(c: &SampledCurve, ct: &SampledCurve, a: &Anchor, outer: (f64, f64), inner: (f64, f64), tol: f64) -> ChordReport {
    let l = a.chord_len();
    let pc = c.eval(inner.1, Side::Left).position - c.eval(inner.0, Side::Right).position;
    let qc = ct.eval(inner.1, Side::Left).position - ct.eval(inner.0, Side::Right).position;
    let outer_q = ct.eval(outer.1, Side::Left).position - ct.eval(outer.0, Side::Right).position;
    let plane_inner = pc.dot(&a.chord);
    let bound = l * qc.dot(&a.tt_star);
    let nested = inner != outer;
    let mut slack = bound - plane_inner;
    if !nested {
        slack = slack.min(qc.norm() - pc.norm());
    }
    ChordReport {
        outer,
        inner,
        plane_chord: pc.norm(),
        space_chord: qc.norm(),
        plane_inner,
        inner_product_bound: bound,
        p1: l,
        p2: outer_q.dot(&a.tt_star),
        pass: slack >= -tol,
        slack,
    }
}

/// Expansion-module form of the chord comparison on random sample pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionReport {
    /// `(s_a, s_b, <X(y) - X(x), (y - x)/|y - x|>, |y - x|)` per pair.
    pub pairs: Vec<(f64, f64, f64, f64)>,
    pub worst_slack: f64,
    pub worst_pair: Option<(f64, f64)>,
    pub pass: bool,
}

/// Checks `<X(y) - X(x), (y - x)/|y - x|> >= 2 psi(|x - y| / 2)` with `psi(t) = t`,
/// where `x = i(c(a))`, `y = i(c(b))`, `X = c~` carried along the parameter,
/// and `i` is the inclusion anchored on the pair `(a, b)` itself.
pub fn expansion_module_check(
    c: &SampledCurve,
    ct: &SampledCurve,
    pair_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<ExpansionReport> {
    pair_check(c, ct)?;
    let angle = tangent_angle(c)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (c.start(), c.end());
    let min_gap = 1e-3 * (hi - lo);
    let mut pairs = Vec::with_capacity(pair_samples);
    let mut worst = f64::INFINITY;
    let mut worst_pair = None;
    while pairs.len() < pair_samples {
        let (x, y): (f64, f64) = (rng.gen_range(lo..hi), rng.gen_range(lo..hi));
        let (a, b) = (x.min(y), x.max(y));
        if b - a < min_gap {
            continue;
        }
        let anc = anchor(c, &angle, ct, (a, b), tol)?;
        let dx = anc.chord_len();
        // <X(y) - X(x), i(y - x)/|y - x|> = <c~(b) - c~(a), T~*>
        let xa = ct.eval(a, Side::Right).position;
        let xb = ct.eval(b, Side::Left).position;
        let expansion = (xb - xa).dot(&anc.tt_star);
        let psi_term = 2.0 * (dx / 2.0);
        let slack = expansion - psi_term;
        if slack < worst {
            worst = slack;
            worst_pair = Some((a, b));
        }
        pairs.push((a, b, expansion, psi_term));
    }
    let worst = if pairs.is_empty() { 0.0 } else { worst };
    Ok(ExpansionReport {
        pairs,
        worst_slack: worst,
        worst_pair,
        pass: worst >= -tol,
    })
}

/// Anchor choice for the full-curve monotonicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SStarChoice {
    /// Smallest grid sample whose two complementary tangent arcs both have length at most pi.
    Auto,
    At(f64),
}

/// `I_1'(s) = <T~(s) - i(T(s)), T~(s*)> >= 0` over all of `[0, L]`.
pub fn anchored_monotonicity(
    c: &SampledCurve,
    ct: &SampledCurve,
    choice: SStarChoice,
    tol: f64,
) -> Result<MonotonicityReport> {
    pair_check(c, ct)?;
    let angle = tangent_angle(c)?;
    let range = (c.start(), c.end());
    let hypotheses = census_with(c, &angle, ct, range, tol);
    let (theta0, theta1) = (angle.theta[0], angle.theta[angle.theta.len() - 1]);
    let star = match choice {
        SStarChoice::At(s) => {
            range_check(c, (range.0, s.max(range.0 + f64::EPSILON)))?;
            let star = SStar::at_with(c, &angle, s);
            let budget = arc_budget_with(c, &angle, range, star.theta, tol);
            if !budget.pass {
                return Err(Error::Precondition(format!(
                    "s* = {s} fails the arc budget: Length(Gamma1) = {:.6}, Length(Gamma2) = {:.6}",
                    budget.gamma1, budget.gamma2
                )));
            }
            star
        }
        SStarChoice::Auto => {
            let idx = (0..c.len())
                .find(|&i| {
                    let t = angle.theta[i];
                    t - theta0 <= PI + tol && theta1 - t <= PI + tol
                })
                .ok_or_else(|| {
                    Error::Hypothesis(format!(
                        "no s* splits the tangent image into arcs of length <= pi (total turning {:.6})",
                        theta1 - theta0
                    ))
                })?;
            let p = c.point(idx);
            SStar {
                s: c.s_grid[idx],
                theta: angle.theta[idx],
                direction: [p.tangent.x, p.tangent.y],
                jump_interior: false,
            }
        }
    };
    // the anchor sample is looked up on the same side the plane tangent came from
    let tt_star = match choice {
        SStarChoice::Auto => {
            let idx = c
                .s_grid
                .iter()
                .zip(&angle.theta)
                .position(|(&s, &t)| s == star.s && t == star.theta)
                .unwrap_or(0);
            ct.tangent[idx]
        }
        SStarChoice::At(s) => ct.eval(s, Side::Left).tangent,
    };
    profile_report(c, ct, range, star, star.n(), tt_star, 1.0, hypotheses)
}

/// Rotates a 3D copy of a plane curve; used to build `c~ = i o c` fixtures.
pub fn embed_rotated(c: &SampledCurve, axis: &Vector3<f64>, angle: f64) -> SampledCurve {
    let rot = Rotation3::from_axis_angle(&Unit::new_normalize(*axis), angle);
    c.transformed(&rot, Vector3::zeros())
}
