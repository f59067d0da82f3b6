use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{simpson_samples, MonotoneCubic};

/// How tabulated curvature samples are filled in between knots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    #[default]
    Linear,
    MonotoneCubic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    xs: Vec<f64>,
    ys: Vec<f64>,
    cubic: Option<MonotoneCubic>,
}

impl Tabulated {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::Profile(format!(
                "tabulated curvature needs at least two (s, k) pairs, got {}",
                xs.len().min(ys.len())
            )));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Profile("tabulated curvature abscissae must be strictly increasing".into()));
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(Error::Profile("tabulated curvature contains non-finite values".into()));
        }
        let cubic = match interpolation {
            Interpolation::Linear => None,
            Interpolation::MonotoneCubic => Some(MonotoneCubic::new(xs.clone(), ys.clone())?),
        };
        Ok(Self { xs, ys, cubic })
    }

    fn eval(&self, s: f64) -> f64 {
        if let Some(c) = &self.cubic {
            return c.eval(s);
        }
        let n = self.xs.len();
        let s = s.clamp(self.xs[0], self.xs[n - 1]);
        let i = self.xs.partition_point(|&x| x <= s).clamp(1, n - 1) - 1;
        let t = (s - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
        self.ys[i] * (1.0 - t) + self.ys[i + 1] * t
    }

    pub fn span(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }
}

/// A scalar function of arc length: curvature, torsion, or spin.
#[derive(Debug, Clone, PartialEq)]
pub enum CurvatureFn {
    Constant(f64),
    /// `a + b s`
    Linear { a: f64, b: f64 },
    /// `mean + amplitude * sin(frequency * s + phase)`
    Sinusoidal {
        mean: f64,
        amplitude: f64,
        frequency: f64,
        phase: f64,
    },
    Tabulated(Tabulated),
    Product(Box<CurvatureFn>, Box<CurvatureFn>),
}

impl CurvatureFn {
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            CurvatureFn::Constant(k) => *k,
            CurvatureFn::Linear { a, b } => a + b * s,
            CurvatureFn::Sinusoidal {
                mean,
                amplitude,
                frequency,
                phase,
            } => mean + amplitude * (frequency * s + phase).sin(),
            CurvatureFn::Tabulated(t) => t.eval(s),
            CurvatureFn::Product(a, b) => a.eval(s) * b.eval(s),
        }
    }

    pub fn product(self, other: CurvatureFn) -> Self {
        CurvatureFn::Product(Box::new(self), Box::new(other))
    }

    /// Smallest value on a dense uniform sampling of `[a, b]`.
    pub fn sampled_min(&self, a: f64, b: f64) -> f64 {
        const N: usize = 4096;
        (0..=N)
            .map(|i| self.eval(a + (b - a) * i as f64 / N as f64))
            .fold(f64::INFINITY, f64::min)
    }

    /// Composite-Simpson integral over `[a, b]` on a dense grid.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        const N: usize = 4096;
        let s: Vec<f64> = (0..=N).map(|i| a + (b - a) * i as f64 / N as f64).collect();
        let f: Vec<f64> = s.iter().map(|&x| self.eval(x)).collect();
        simpson_samples(&s, &f)
    }
}

/// A tangent discontinuity at an interior breakpoint.
///
/// `alpha` is the spherical distance between the one-sided tangents. `phi`
/// selects the rotation plane: the tangent turns toward `cos(phi) N + sin(phi) B`
/// in the moving frame. Plane and spherical curves only use the sign of
/// `cos(phi)` (left turn for `phi = 0`, right turn for `phi = pi`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub s: f64,
    pub alpha: f64,
    #[serde(default)]
    pub phi: f64,
}

impl Jump {
    pub fn new(s: f64, alpha: f64) -> Self {
        Self { s, alpha, phi: 0.0 }
    }

    pub fn with_phi(s: f64, alpha: f64, phi: f64) -> Self {
        Self { s, alpha, phi }
    }

    /// `+1` for a left (counterclockwise) turn, `-1` for a right turn.
    pub fn turn_sign(&self) -> f64 {
        if self.phi.cos() < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    /// Jumps of exactly pi reverse the tangent.
    pub fn is_reversal(&self) -> bool {
        (self.alpha - PI).abs() < 1e-12
    }
}

/// Curvature data on `[0, L]` with tangent jumps at interior breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    pub length: f64,
    pub curvature: CurvatureFn,
    pub jumps: Vec<Jump>,
    pub convex: bool,
}

impl CurvatureProfile {
    pub fn new(length: f64, curvature: CurvatureFn, jumps: Vec<Jump>) -> Result<Self> {
        let profile = Self {
            length,
            curvature,
            jumps,
            convex: false,
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn smooth(length: f64, curvature: CurvatureFn) -> Result<Self> {
        Self::new(length, curvature, Vec::new())
    }

    pub fn constant(length: f64, k: f64) -> Result<Self> {
        Self::smooth(length, CurvatureFn::Constant(k))
    }

    /// Marks the profile convex after checking `k >= 0` and non-negative jumps.
    pub fn into_convex(mut self) -> Result<Self> {
        self.convex = true;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length > 0.0 && self.length.is_finite()) {
            return Err(Error::Profile(format!("length must be positive, got {}", self.length)));
        }
        let mut prev = 0.0;
        for j in &self.jumps {
            if !(j.s > prev && j.s < self.length) {
                return Err(Error::Profile(format!(
                    "jump at s = {} must lie strictly inside (0, {}) and after the previous breakpoint",
                    j.s, self.length
                )));
            }
            if !(0.0..=PI).contains(&j.alpha) {
                return Err(Error::Angle(j.alpha));
            }
            if !j.phi.is_finite() {
                return Err(Error::Profile(format!("jump at s = {} has non-finite phi", j.s)));
            }
            prev = j.s;
        }
        if self.convex {
            for w in self.breakpoints().windows(2) {
                let kmin = self.curvature.sampled_min(w[0], w[1]);
                if kmin < 0.0 {
                    return Err(Error::Profile(format!(
                        "convex profile has negative curvature {kmin} on [{}, {}]",
                        w[0], w[1]
                    )));
                }
            }
            if let Some(j) = self.jumps.iter().find(|j| j.alpha > 0.0 && j.turn_sign() < 0.0) {
                return Err(Error::Profile(format!("convex profile turns clockwise at s = {}", j.s)));
            }
        }
        Ok(())
    }

    /// `0 = s_0 < s_1 < ... < s_N = L`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b = Vec::with_capacity(self.jumps.len() + 2);
        b.push(0.0);
        b.extend(self.jumps.iter().map(|j| j.s));
        b.push(self.length);
        b
    }

    /// Smooth segments `[s_{j-1}, s_j]`.
    pub fn segments(&self) -> Vec<(f64, f64)> {
        self.breakpoints().windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Adds zero-angle jumps at the given locations so that two profiles can
    /// share one sample grid. Existing breakpoints are left untouched.
    pub fn with_breakpoints(&self, extra: &[f64]) -> Result<Self> {
        let mut jumps = self.jumps.clone();
        for &s in extra {
            if s <= 0.0 || s >= self.length {
                continue;
            }
            if jumps.iter().any(|j| (j.s - s).abs() <= 1e-12) {
                continue;
            }
            jumps.push(Jump::new(s, 0.0));
        }
        jumps.sort_by(|a, b| a.s.total_cmp(&b.s));
        let mut out = self.clone();
        out.jumps = jumps;
        out.validate()?;
        Ok(out)
    }
}

/// Total turning: integral of curvature over each smooth piece plus every jump angle.
pub fn total_turning(profile: &CurvatureProfile) -> f64 {
    let smooth: f64 = profile
        .segments()
        .iter()
        .map(|&(a, b)| profile.curvature.integral(a, b))
        .sum();
    smooth + profile.jumps.iter().map(|j| j.alpha).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BudgetCheck {
    pub pass: bool,
    pub total: f64,
    /// `2 pi - total`
    pub slack: f64,
}

/// Turning budget of an embedded convex curve: total turning at most `2 pi`.
pub fn check_convex_budget(profile: &CurvatureProfile, tol: f64) -> BudgetCheck {
    let total = total_turning(profile);
    BudgetCheck {
        pass: total <= 2.0 * PI + tol,
        total,
        slack: 2.0 * PI - total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn square() -> CurvatureProfile {
        CurvatureProfile::new(
            4.0,
            CurvatureFn::Constant(0.0),
            (1..4).map(|i| Jump::new(i as f64, FRAC_PI_2)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn circle_turning() {
        let circle = CurvatureProfile::constant(2.0 * PI, 1.0).unwrap();
        assert!((total_turning(&circle) - 2.0 * PI).abs() < 1e-8);
        let b = check_convex_budget(&circle, 1e-6);
        assert!(b.pass);
        assert!(b.slack.abs() < 1e-8);
    }

    #[test]
    fn square_turning_is_exact() {
        // three interior corners of pi/2 on an open square arc
        assert_eq!(total_turning(&square()), 3.0 * FRAC_PI_2);
        let closed = CurvatureProfile::new(
            4.0,
            CurvatureFn::Constant(0.0),
            [0.5, 1.5, 2.5, 3.5].iter().map(|&s| Jump::new(s, FRAC_PI_2)).collect(),
        )
        .unwrap();
        assert_eq!(total_turning(&closed), 2.0 * PI);
    }

    #[test]
    fn arc_plus_jump() {
        let p = CurvatureProfile::new(FRAC_PI_2, CurvatureFn::Constant(1.0), vec![Jump::new(0.7, PI / 4.0)]).unwrap();
        assert!((total_turning(&p) - 3.0 * PI / 4.0).abs() < 1e-8);
    }

    #[test]
    fn over_turned_is_rejected() {
        let p = CurvatureProfile::constant(3.0 * PI, 1.0).unwrap().into_convex().unwrap();
        assert!(!check_convex_budget(&p, 1e-6).pass);
    }

    #[test]
    fn semicircle_with_corners_has_quarter_slack() {
        let p = CurvatureProfile::new(
            PI,
            CurvatureFn::Constant(1.0),
            vec![Jump::new(1.0, PI / 4.0), Jump::new(2.0, PI / 4.0)],
        )
        .unwrap()
        .into_convex()
        .unwrap();
        let b = check_convex_budget(&p, 1e-6);
        assert!(b.pass);
        assert!((b.slack - FRAC_PI_2).abs() < 1e-8);
    }

    #[test]
    fn invalid_profiles() {
        assert!(CurvatureProfile::constant(0.0, 1.0).is_err());
        assert!(matches!(
            CurvatureProfile::new(1.0, CurvatureFn::Constant(0.0), vec![Jump::new(0.5, 4.0)]),
            Err(Error::Angle(_))
        ));
        assert!(CurvatureProfile::new(1.0, CurvatureFn::Constant(0.0), vec![Jump::new(1.0, 0.1)]).is_err());
        assert!(CurvatureProfile::new(
            1.0,
            CurvatureFn::Constant(0.0),
            vec![Jump::new(0.6, 0.1), Jump::new(0.4, 0.1)]
        )
        .is_err());
        assert!(CurvatureProfile::constant(1.0, -0.5).unwrap().into_convex().is_err());
    }

    #[test]
    fn shared_breakpoints() {
        let p = CurvatureProfile::new(2.0, CurvatureFn::Constant(1.0), vec![Jump::new(0.5, 0.2)]).unwrap();
        let q = p.with_breakpoints(&[0.5, 1.25]).unwrap();
        assert_eq!(q.breakpoints(), vec![0.0, 0.5, 1.25, 2.0]);
        assert_eq!(q.jumps[0].alpha, 0.2);
        assert_eq!(q.jumps[1].alpha, 0.0);
    }

    #[test]
    fn tabulated_linear_and_cubic() {
        let t = Tabulated::new(vec![0.0, 1.0, 2.0], vec![1.0, 3.0, 2.0], Interpolation::Linear).unwrap();
        let f = CurvatureFn::Tabulated(t);
        assert_eq!(f.eval(0.5), 2.0);
        assert_eq!(f.eval(5.0), 2.0);
        let c = Tabulated::new(vec![0.0, 1.0, 2.0], vec![1.0, 3.0, 2.0], Interpolation::MonotoneCubic).unwrap();
        let g = CurvatureFn::Tabulated(c);
        assert!((g.eval(1.0) - 3.0).abs() < 1e-15);
        assert!(g.eval(1.5) <= 3.0 && g.eval(1.5) >= 2.0);
    }
}
