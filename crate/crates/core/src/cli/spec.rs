//! JSON curve specifications and their reconstruction.

use std::fmt;
use std::path::Path;

use nalgebra::{Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::curves::{
    reconstruct_plane, reconstruct_space_frenet, CurvatureFn, CurvatureProfile, Frame3, Interpolation, Jump,
    SampledCurve, Tabulated,
};
use crate::error::Error;
use crate::minkowski::{reconstruct_timelike_2d, reconstruct_timelike_3d, LorentzFrame, TimelikeCurve};
use crate::numerics::StepControl;
use crate::sphere::{reconstruct_spherical, SphericalCurve};

use super::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Plane,
    Space3,
    Sphere,
    Minkowski2,
    Minkowski3,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Geometry::Plane => "plane",
            Geometry::Space3 => "space3",
            Geometry::Sphere => "sphere",
            Geometry::Minkowski2 => "minkowski2",
            Geometry::Minkowski3 => "minkowski3",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Constant,
    Linear,
    Sinusoidal,
}

/// `{"preset": ..., parameters}` or `{"samples": [[s, k], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interpolation: Option<Interpolation>,
}

impl FunctionSpec {
    pub fn to_fn(&self, field: &str) -> Result<CurvatureFn, Failure> {
        let bad = |msg: String| Failure::Input(format!("{field}: {msg}"));
        let given: Vec<&str> = [
            ("value", self.value.is_some()),
            ("a", self.a.is_some()),
            ("b", self.b.is_some()),
            ("mean", self.mean.is_some()),
            ("amplitude", self.amplitude.is_some()),
            ("frequency", self.frequency.is_some()),
            ("phase", self.phase.is_some()),
            ("samples", self.samples.is_some()),
            ("interpolation", self.interpolation.is_some()),
        ]
        .into_iter()
        .filter_map(|(n, g)| g.then_some(n))
        .collect();
        let only = |allowed: &[&str]| -> Result<(), Failure> {
            match given.iter().find(|n| !allowed.contains(n)) {
                Some(n) => Err(bad(format!("field `{n}` does not apply here"))),
                None => Ok(()),
            }
        };
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| bad(format!("missing `{name}`")));
        match (self.preset, &self.samples) {
            (Some(_), Some(_)) => Err(bad("give either `preset` or `samples`, not both".into())),
            (None, None) => Err(bad("expected `preset` or `samples`".into())),
            (None, Some(samples)) => {
                only(&["samples", "interpolation"])?;
                let xs = samples.iter().map(|p| p[0]).collect();
                let ys = samples.iter().map(|p| p[1]).collect();
                let t = Tabulated::new(xs, ys, self.interpolation.unwrap_or_default()).map_err(|e| bad(e.to_string()))?;
                Ok(CurvatureFn::Tabulated(t))
            }
            (Some(Preset::Constant), None) => {
                only(&["value"])?;
                Ok(CurvatureFn::Constant(need(self.value, "value")?))
            }
            (Some(Preset::Linear), None) => {
                only(&["a", "b"])?;
                Ok(CurvatureFn::Linear {
                    a: need(self.a, "a")?,
                    b: need(self.b, "b")?,
                })
            }
            (Some(Preset::Sinusoidal), None) => {
                only(&["mean", "amplitude", "frequency", "phase"])?;
                Ok(CurvatureFn::Sinusoidal {
                    mean: need(self.mean, "mean")?,
                    amplitude: need(self.amplitude, "amplitude")?,
                    frequency: self.frequency.unwrap_or(1.0),
                    phase: self.phase.unwrap_or(0.0),
                })
            }
        }
    }
}

/// `[s, alpha]` or `[s, alpha, phi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct JumpSpec(pub Jump);

impl TryFrom<Vec<f64>> for JumpSpec {
    type Error = String;

    fn try_from(v: Vec<f64>) -> Result<Self, Self::Error> {
        match v.as_slice() {
            [s, alpha] => Ok(JumpSpec(Jump::new(*s, *alpha))),
            [s, alpha, phi] => Ok(JumpSpec(Jump::with_phi(*s, *alpha, *phi))),
            _ => Err(format!("a jump is [s, alpha] or [s, alpha, phi], got {} numbers", v.len())),
        }
    }
}

impl From<JumpSpec> for Vec<f64> {
    fn from(j: JumpSpec) -> Self {
        if j.0.phi == 0.0 {
            vec![j.0.s, j.0.alpha]
        } else {
            vec![j.0.s, j.0.alpha, j.0.phi]
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangent: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rapidity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub geometry: Geometry,
    pub length: f64,
    pub curvature: FunctionSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub jumps: Vec<JumpSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spin: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialSpec>,
    #[serde(default)]
    pub convex: bool,
}

pub fn load_spec(path: &Path) -> Result<CurveSpec, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_spec(&text).map_err(|f| match f {
        Failure::Input(m) => Failure::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_spec(text: &str) -> Result<CurveSpec, Failure> {
    let spec: CurveSpec = serde_json::from_str(text).map_err(|e| Failure::Input(e.to_string()))?;
    spec.check_fields()?;
    Ok(spec)
}

fn vec2(v: &[f64], field: &str) -> Result<Vector2<f64>, Failure> {
    match v {
        [a, b] => Ok(Vector2::new(*a, *b)),
        _ => Err(Failure::Input(format!("initial.{field} needs 2 components, got {}", v.len()))),
    }
}

fn vec3(v: &[f64], field: &str) -> Result<Vector3<f64>, Failure> {
    match v {
        [a, b, c] => Ok(Vector3::new(*a, *b, *c)),
        _ => Err(Failure::Input(format!("initial.{field} needs 3 components, got {}", v.len()))),
    }
}

/// A reconstructed curve of any supported geometry.
#[derive(Debug, Clone, PartialEq)]
pub enum Built {
    Plane(SampledCurve),
    Space(SampledCurve),
    Sphere(SphericalCurve),
    Minkowski(TimelikeCurve),
}

impl CurveSpec {
    fn check_fields(&self) -> Result<(), Failure> {
        let g = self.geometry;
        if self.torsion.is_some() && g != Geometry::Space3 {
            return Err(Failure::Input(format!("`torsion` only applies to space3, not {g}")));
        }
        if self.spin.is_some() && g != Geometry::Minkowski3 {
            return Err(Failure::Input(format!("`spin` only applies to minkowski3, not {g}")));
        }
        if matches!(g, Geometry::Minkowski2 | Geometry::Minkowski3) && !self.jumps.is_empty() {
            return Err(Failure::Input(format!("{g} curves must be smooth; remove `jumps`")));
        }
        let init = self.initial.clone().unwrap_or_default();
        let allowed: &[&str] = match g {
            Geometry::Plane => &["point", "angle"],
            Geometry::Space3 => &["point", "tangent", "normal"],
            Geometry::Sphere => &["position", "tangent"],
            Geometry::Minkowski2 | Geometry::Minkowski3 => &["point", "rapidity"],
        };
        let given = [
            ("point", init.point.is_some()),
            ("angle", init.angle.is_some()),
            ("tangent", init.tangent.is_some()),
            ("normal", init.normal.is_some()),
            ("position", init.position.is_some()),
            ("rapidity", init.rapidity.is_some()),
        ];
        if let Some((name, _)) = given.iter().find(|(n, present)| *present && !allowed.contains(n)) {
            return Err(Failure::Input(format!("initial.{name} does not apply to {g} curves")));
        }
        Ok(())
    }

    pub fn profile(&self) -> Result<CurvatureProfile, Failure> {
        let k = self.curvature.to_fn("curvature")?;
        let jumps = self.jumps.iter().map(|j| j.0).collect();
        let profile = CurvatureProfile::new(self.length, k, jumps)?;
        Ok(if self.convex { profile.into_convex()? } else { profile })
    }

    /// Reconstructs the curve on a profile that may carry extra breakpoints.
    pub fn build_with(&self, profile: &CurvatureProfile, control: &StepControl) -> Result<Built, Failure> {
        let init = self.initial.clone().unwrap_or_default();
        let built = match self.geometry {
            Geometry::Plane => {
                let p = init.point.as_deref().map(|v| vec2(v, "point")).transpose()?.unwrap_or_else(Vector2::zeros);
                Built::Plane(reconstruct_plane(profile, p, init.angle.unwrap_or(0.0), control)?)
            }
            Geometry::Space3 => {
                let p = init.point.as_deref().map(|v| vec3(v, "point")).transpose()?.unwrap_or_else(Vector3::zeros);
                let t = init.tangent.map(Vector3::from).unwrap_or_else(Vector3::x);
                let n = init.normal.map(Vector3::from).unwrap_or_else(Vector3::y);
                let torsion = match &self.torsion {
                    Some(f) => f.to_fn("torsion")?,
                    None => CurvatureFn::Constant(0.0),
                };
                Built::Space(reconstruct_space_frenet(profile, &torsion, &Frame3::new(p, t, n)?, control)?)
            }
            Geometry::Sphere => {
                let c = init.position.map(Vector3::from).unwrap_or_else(Vector3::z);
                let t = init.tangent.map(Vector3::from).unwrap_or_else(Vector3::x);
                Built::Sphere(reconstruct_spherical(profile, c, t, control)?)
            }
            Geometry::Minkowski2 => {
                let p = init.point.as_deref().map(|v| vec2(v, "point")).transpose()?.unwrap_or_else(Vector2::zeros);
                let c = reconstruct_timelike_2d(&profile.curvature, profile.length, p, init.rapidity.unwrap_or(0.0), control)?;
                Built::Minkowski(c)
            }
            Geometry::Minkowski3 => {
                let p = init.point.as_deref().map(|v| vec3(v, "point")).transpose()?.unwrap_or_else(Vector3::zeros);
                let spin = match &self.spin {
                    Some(f) => f.to_fn("spin")?,
                    None => CurvatureFn::Constant(0.0),
                };
                let frame = LorentzFrame::from_rapidity(init.rapidity.unwrap_or(0.0));
                Built::Minkowski(reconstruct_timelike_3d(&profile.curvature, &spin, profile.length, p, &frame, control)?)
            }
        };
        Ok(built)
    }

    pub fn build(&self, control: &StepControl) -> Result<Built, Failure> {
        self.build_with(&self.profile()?, control)
    }
}

/// Reconstructs two curves of equal length on one shared sample grid: each
/// profile receives the other's breakpoints as zero-angle jumps.
pub fn build_pair(a: &CurveSpec, b: &CurveSpec, control: &StepControl) -> Result<(Built, Built), Failure> {
    if (a.length - b.length).abs() > 1e-12 * a.length.abs().max(1.0) {
        return Err(Failure::Input(format!(
            "curves must have the same length, got {} and {}",
            a.length, b.length
        )));
    }
    let (pa, pb) = (a.profile()?, b.profile()?);
    let mut pb = pb;
    pb.length = pa.length;
    let shared_a = pa.with_breakpoints(&pb.jumps.iter().map(|j| j.s).collect::<Vec<_>>())?;
    let shared_b = pb.with_breakpoints(&pa.jumps.iter().map(|j| j.s).collect::<Vec<_>>())?;
    Ok((a.build_with(&shared_a, control)?, b.build_with(&shared_b, control)?))
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() || matches!(e, Error::Projection { .. }) {
            Failure::Input(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}
