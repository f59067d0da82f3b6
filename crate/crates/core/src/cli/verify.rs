//! Theorem dispatch and report assembly.

use std::f64::consts::PI;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::curves::{check_convex_budget, tangent_angle, SampledCurve};
use crate::error::Error;
use crate::minkowski::{lorentz_census, reversed_chord_inequality, lorentz_monotonicity, TimelikeCurve};
use crate::numerics::StepControl;
use crate::report::{all_pass, Check};
use crate::schur::{
    arc_length_budget_check, chord_inequality, expansion_module_check, hypothesis_census, monotonicity_profile,
    nested_chord_inequality, anchored_monotonicity, tangent_cosine_comparison, SStarChoice,
};
use crate::sphere::{spherical_census, spherical_schur_verify, PlaneChoice, SphericalCurve};

use super::spec::{build_pair, load_spec, Built, CurveSpec, Geometry};
use super::{Failure, PlaneArg, SStarArg, Theorem, EXIT_CONCLUSION, EXIT_PASS};

/// Number of random pairs for the nested-chord and expansion checks.
const RANDOM_PAIRS: usize = 50;

pub(crate) struct Options {
    pub control: StepControl,
    pub range: Option<(f64, f64)>,
    pub s_star: Option<SStarArg>,
    pub plane: PlaneArg,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    HypothesesViolated,
    ConclusionFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub step: f64,
    pub tol: f64,
    pub samples_min: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_star: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plane: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// How the two curves were brought onto one sample grid.
    pub sampling: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub tool_version: String,
    pub config: ConfigEcho,
    pub hypotheses: Vec<Check>,
    pub hypotheses_pass: bool,
    pub conclusions_skipped: bool,
    pub conclusions: Vec<Check>,
    pub outcome: Outcome,
    pub details: serde_json::Value,
}

impl VerificationReport {
    fn new(theorem: Theorem, config: ConfigEcho, hypotheses: Vec<Check>, conclusions: Option<Vec<Check>>, details: serde_json::Value) -> Self {
        let hypotheses_pass = all_pass(&hypotheses);
        let skipped = conclusions.is_none() || !hypotheses_pass;
        let conclusions = if skipped { Vec::new() } else { conclusions.unwrap_or_default() };
        let outcome = if !hypotheses_pass {
            Outcome::HypothesesViolated
        } else if all_pass(&conclusions) {
            Outcome::Pass
        } else {
            Outcome::ConclusionFailed
        };
        Self {
            theorem: theorem.id().to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            hypotheses,
            hypotheses_pass,
            conclusions_skipped: skipped,
            conclusions,
            outcome,
            details,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            Outcome::ConclusionFailed => EXIT_CONCLUSION,
            _ => EXIT_PASS,
        }
    }
}

/// Prints a one-line verdict to stderr and returns the exit code.
pub(crate) fn announce(rep: &VerificationReport) -> i32 {
    match rep.outcome {
        Outcome::Pass => eprintln!("schurkit: {} pass", rep.theorem),
        Outcome::HypothesesViolated => {
            let failed: Vec<&str> = rep.hypotheses.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            eprintln!(
                "schurkit: {} hypotheses violated ({}); conclusions skipped",
                rep.theorem,
                failed.join("; ")
            );
        }
        Outcome::ConclusionFailed => {
            for c in rep.conclusions.iter().filter(|c| !c.pass) {
                eprintln!(
                    "schurkit: COUNTEREXAMPLE CANDIDATE for {}: `{}` failed with slack {:e} at {:?} although every hypothesis held",
                    rep.theorem, c.name, c.worst_slack, c.location
                );
            }
        }
    }
    rep.exit_code()
}

const SHARED_GRID: &str = "uniform steps of at most `step` on each smooth piece; breakpoints of either curve shared by both";

fn echo(control: &StepControl) -> ConfigEcho {
    ConfigEcho {
        step: control.step_h,
        tol: control.tol,
        samples_min: control.samples_min,
        range: None,
        s_star: None,
        plane: None,
        seed: None,
        grid: None,
        sampling: SHARED_GRID.to_string(),
    }
}

fn mismatch(theorem: Theorem, want: &str, got: Geometry) -> Failure {
    Failure::Input(format!("{} needs {want}, got a {got} curve", theorem.id()))
}

/// Plane curve and a plane or space companion (the plane one lifted to 3D).
fn euclidean_pair(theorem: Theorem, a: &CurveSpec, b: &CurveSpec, control: &StepControl) -> Result<(SampledCurve, SampledCurve), Failure> {
    if a.geometry != Geometry::Plane {
        return Err(mismatch(theorem, "a plane first curve", a.geometry));
    }
    if !matches!(b.geometry, Geometry::Plane | Geometry::Space3) {
        return Err(mismatch(theorem, "a plane or space3 second curve", b.geometry));
    }
    match build_pair(a, b, control)? {
        (Built::Plane(c), Built::Plane(ct) | Built::Space(ct)) => Ok((c, ct)),
        _ => unreachable!("geometries checked above"),
    }
}

fn sphere_pair(theorem: Theorem, a: &CurveSpec, b: &CurveSpec, control: &StepControl) -> Result<(SphericalCurve, SphericalCurve), Failure> {
    for s in [a, b] {
        if s.geometry != Geometry::Sphere {
            return Err(mismatch(theorem, "two sphere curves", s.geometry));
        }
    }
    match build_pair(a, b, control)? {
        (Built::Sphere(c), Built::Sphere(ct)) => Ok((c, ct)),
        _ => unreachable!("geometries checked above"),
    }
}

fn minkowski_pair(theorem: Theorem, a: &CurveSpec, b: &CurveSpec, control: &StepControl) -> Result<(TimelikeCurve, TimelikeCurve), Failure> {
    if a.geometry != Geometry::Minkowski2 {
        return Err(mismatch(theorem, "a minkowski2 first curve", a.geometry));
    }
    if !matches!(b.geometry, Geometry::Minkowski2 | Geometry::Minkowski3) {
        return Err(mismatch(theorem, "a minkowski2 or minkowski3 second curve", b.geometry));
    }
    match build_pair(a, b, control)? {
        (Built::Minkowski(c), Built::Minkowski(ct)) => Ok((c, if ct.dim == 2 { ct.embedded() } else { ct })),
        _ => unreachable!("geometries checked above"),
    }
}

fn full_range(c: &SampledCurve, opt: Option<(f64, f64)>) -> (f64, f64) {
    opt.unwrap_or((c.start(), c.end()))
}

fn slack_check(name: &str, slack: f64, tol: f64) -> Check {
    Check::from_slack(name, slack, None, tol)
}

/// Separates "the hypotheses do not hold" from genuine failures.
fn hypothesis_or<T>(r: crate::Result<T>, hypotheses: &mut Vec<Check>, name: &str) -> Result<Option<T>, Failure> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Hypothesis(m)) => {
            hypotheses.push(Check::failed(name, m));
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

pub(crate) fn verify(theorem: Theorem, spec_c: &Path, spec_ct: Option<&Path>, opts: &Options) -> Result<VerificationReport, Failure> {
    let a = load_spec(spec_c)?;
    if theorem == Theorem::TurningBudget {
        return turning_budget(&a, opts);
    }
    let path = spec_ct.ok_or_else(|| Failure::Input(format!("{} needs two curve specs", theorem.id())))?;
    let b = load_spec(path)?;
    let tol = opts.control.tol;
    let mut config = echo(&opts.control);
    match theorem {
        Theorem::ChordComparison => {
            let (c, ct) = euclidean_pair(theorem, &a, &b, &opts.control)?;
            let range = full_range(&c, opts.range);
            config.range = Some([range.0, range.1]);
            let mut hyps = hypothesis_census(&c, &ct, range, tol)?;
            if !all_pass(&hyps) {
                return Ok(VerificationReport::new(theorem, config, hyps, None, json!({})));
            }
            let Some(rep) = hypothesis_or(monotonicity_profile(&c, &ct, range, tol), &mut hyps, "chord direction in tangent image")? else {
                return Ok(VerificationReport::new(theorem, config, hyps, None, json!({})));
            };
            config.s_star = Some(format!("{}", rep.s_star.s));
            let chord = chord_inequality(&c, &ct, range, tol)?;
            let budget = arc_length_budget_check(&c, range, &rep.s_star, tol)?;
            let cosines = tangent_cosine_comparison(&c, &ct, &rep.s_star, range, tol)?;
            let conclusions = vec![
                rep.slack_check(tol),
                slack_check("I non-decreasing", rep.min_increment(), tol),
                slack_check("chord inequality", chord.slack, tol),
                slack_check("tangent arcs <= pi", (PI - budget.gamma1).min(PI - budget.gamma2), tol),
                cosines.cosine_check,
                cosines.arc_check,
            ];
            let details = json!({
                "s_star": rep.s_star,
                "min_slack": rep.min_slack,
                "argmin_s": rep.argmin_s,
                "consistency_gap": rep.consistency_gap(),
                "gamma1": budget.gamma1,
                "gamma2": budget.gamma2,
                "chord": chord,
            });
            Ok(VerificationReport::new(theorem, config, hyps, Some(conclusions), details))
        }
        Theorem::NestedChords => {
            let (c, ct) = euclidean_pair(theorem, &a, &b, &opts.control)?;
            let range = full_range(&c, opts.range);
            config.range = Some([range.0, range.1]);
            config.seed = Some(opts.seed);
            let mut hyps = hypothesis_census(&c, &ct, (c.start(), c.end()), tol)?;
            if !all_pass(&hyps) {
                return Ok(VerificationReport::new(theorem, config, hyps, None, json!({})));
            }
            let Some(chord) = hypothesis_or(chord_inequality(&c, &ct, range, tol), &mut hyps, "chord direction in tangent image")? else {
                return Ok(VerificationReport::new(theorem, config, hyps, None, json!({})));
            };
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut nested_worst = f64::INFINITY;
            let mut nested_at = None;
            for _ in 0..RANDOM_PAIRS {
                let (x, y): (f64, f64) = (rng.gen_range(range.0..range.1), rng.gen_range(range.0..range.1));
                let inner = (x.min(y), x.max(y));
                if inner.1 - inner.0 < 1e-9 {
                    continue;
                }
                let r = nested_chord_inequality(&c, &ct, range, inner, tol)?;
                if r.slack < nested_worst {
                    nested_worst = r.slack;
                    nested_at = Some(inner);
                }
            }
            let expansion = expansion_module_check(&c, &ct, RANDOM_PAIRS, opts.seed, tol)?;
            let conclusions = vec![
                slack_check("chord inequality", chord.slack, tol),
                slack_check("nested chord inequality", nested_worst, tol),
                slack_check("expansion module psi(t) = t", expansion.worst_slack, tol),
            ];
            let details = json!({
                "chord": chord,
                "nested_worst_pair": nested_at,
                "expansion_worst_pair": expansion.worst_pair,
                "pairs": RANDOM_PAIRS,
            });
            Ok(VerificationReport::new(theorem, config, hyps, Some(conclusions), details))
        }
        Theorem::AnchoredMonotonicity => {
            let (c, ct) = euclidean_pair(theorem, &a, &b, &opts.control)?;
            let hyps = hypothesis_census(&c, &ct, (c.start(), c.end()), tol)?;
            let choice = match opts.s_star.unwrap_or(SStarArg::Auto) {
                SStarArg::Auto => SStarChoice::Auto,
                SStarArg::At(s) => SStarChoice::At(s),
            };
            config.s_star = Some(opts.s_star.unwrap_or(SStarArg::Auto).to_string());
            if !all_pass(&hyps) {
                return Ok(VerificationReport::new(theorem, config, hyps, None, json!({})));
            }
            let mut hyps = hyps;
            let Some(rep) = hypothesis_or(anchored_monotonicity(&c, &ct, choice, tol), &mut hyps, "arc budget admits some s*")? else {
                return Ok(VerificationReport::new(theorem, config, hyps, None, json!({})));
            };
            let conclusions = vec![rep.slack_check(tol), slack_check("I_1 non-decreasing", rep.min_increment(), tol)];
            let details = json!({
                "s_star": rep.s_star,
                "min_slack": rep.min_slack,
                "argmin_s": rep.argmin_s,
                "consistency_gap": rep.consistency_gap(),
            });
            Ok(VerificationReport::new(theorem, config, hyps, Some(conclusions), details))
        }
        Theorem::Lorentz => {
            let (c, ct) = minkowski_pair(theorem, &a, &b, &opts.control)?;
            let s_star = match opts.s_star.unwrap_or(SStarArg::Auto) {
                SStarArg::Auto => 0.5 * (c.start() + c.end()),
                SStarArg::At(s) => s,
            };
            config.s_star = Some(format!("{s_star}"));
            let hyps = lorentz_census(&c, &ct, tol)?;
            if !all_pass(&hyps) {
                return Ok(VerificationReport::new(theorem, config, hyps, None, json!({})));
            }
            let rep = lorentz_monotonicity(&c, &ct, s_star, tol)?;
            let chord = reversed_chord_inequality(&c, &ct, tol)?;
            let conclusions = vec![
                rep.slack_check(tol),
                slack_check("I_2 non-decreasing", rep.min_increment(), tol),
                slack_check("reversed chord inequality", chord.slack, tol),
                slack_check("reversed Cauchy-Schwarz", chord.cauchy_schwarz_slack, tol),
            ];
            let details = json!({
                "min_slack": rep.min_slack,
                "argmin_s": rep.argmin_s,
                "consistency_gap": rep.consistency_gap(),
                "chord": chord,
            });
            Ok(VerificationReport::new(theorem, config, hyps, Some(conclusions), details))
        }
        Theorem::Spherical => {
            let (c, ct) = sphere_pair(theorem, &a, &b, &opts.control)?;
            let choice = opts.plane.choice()?;
            let mut hyps = spherical_census(&c, &ct, tol)?;
            config.plane = Some(match choice {
                PlaneChoice::Auto { .. } => "auto".to_string(),
                PlaneChoice::Fixed(p) => format!("{},{},{},{}", p.u[0], p.u[1], p.u[2], p.d),
            });
            if !all_pass(&hyps) {
                return Ok(VerificationReport::new(theorem, config, hyps, None, json!({})));
            }
            let Some(rep) = hypothesis_or(spherical_schur_verify(&c, &ct, choice, tol), &mut hyps, "projected chord direction in tangent image")? else {
                return Ok(VerificationReport::new(theorem, config, hyps, None, json!({})));
            };
            let mut conclusions = rep.projected.clone();
            conclusions.push(slack_check("projected plane chord inequality", rep.plane_chord.slack, tol));
            conclusions.push(rep.conclusion.clone());
            conclusions.push(Check::from_slack(
                "plane and spherical verdicts agree",
                if rep.consistent { 0.0 } else { -1.0 },
                None,
                0.0,
            ));
            let details = serde_json::to_value(&rep).map_err(|e| Failure::Numeric(e.to_string()))?;
            Ok(VerificationReport::new(theorem, config, hyps, Some(conclusions), details))
        }
        Theorem::TurningBudget => unreachable!("handled above"),
    }
}

fn turning_budget(a: &CurveSpec, opts: &Options) -> Result<VerificationReport, Failure> {
    let tol = opts.control.tol;
    let config = echo(&opts.control);
    if a.geometry != Geometry::Plane {
        return Err(mismatch(Theorem::TurningBudget, "a plane curve", a.geometry));
    }
    let profile = a.profile()?;
    let convex = match profile.clone().into_convex() {
        Ok(_) => Check::from_slack("profile convex (k >= 0, left turns)", 0.0, None, tol),
        Err(e) => Check::failed("profile convex (k >= 0, left turns)", e.to_string()),
    };
    let budget = check_convex_budget(&profile, tol);
    let Built::Plane(c) = a.build_with(&profile, &opts.control)? else {
        unreachable!("plane geometry checked above")
    };
    let measured = tangent_angle(&c)?.total();
    let conclusions = vec![slack_check("total turning <= 2 pi", budget.slack, tol)];
    let details = json!({
        "total_turning": budget.total,
        "measured_turning": measured,
        "slack": budget.slack,
    });
    Ok(VerificationReport::new(Theorem::TurningBudget, config, vec![convex], Some(conclusions), details))
}

/// One `(s', s'')` cell of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub s1: f64,
    pub s2: f64,
    pub status: String,
    pub s_star: f64,
    pub jump_interior: bool,
    pub min_slack: f64,
    pub argmin_s: f64,
    pub plane_chord: f64,
    pub space_chord: f64,
    pub inner_product_bound: f64,
    pub chord_slack: f64,
    pub pass: bool,
}

fn sweep_cell(c: &SampledCurve, ct: &SampledCurve, range: (f64, f64), tol: f64) -> Result<SweepRow, Failure> {
    let blank = |status: &str| SweepRow {
        s1: range.0,
        s2: range.1,
        status: status.to_string(),
        s_star: f64::NAN,
        jump_interior: false,
        min_slack: f64::NAN,
        argmin_s: f64::NAN,
        plane_chord: f64::NAN,
        space_chord: f64::NAN,
        inner_product_bound: f64::NAN,
        chord_slack: f64::NAN,
        pass: false,
    };
    let rep = match monotonicity_profile(c, ct, range, tol) {
        Ok(r) => r,
        Err(Error::Hypothesis(_)) => return Ok(blank("degenerate-chord")),
        Err(e) => return Err(e.into()),
    };
    let chord = chord_inequality(c, ct, range, tol)?;
    Ok(SweepRow {
        status: "checked".to_string(),
        s_star: rep.s_star.s,
        jump_interior: rep.s_star.jump_interior,
        min_slack: rep.min_slack,
        argmin_s: rep.argmin_s,
        plane_chord: chord.plane_chord,
        space_chord: chord.space_chord,
        inner_product_bound: chord.inner_product_bound,
        chord_slack: chord.slack,
        pass: rep.min_slack >= -tol && chord.pass,
        ..blank("")
    })
}

/// Evaluates every grid pair `s_i < s_j`, `s_i = i L / (N - 1)`, in parallel.
pub(crate) fn sweep(
    theorem: Theorem,
    spec_c: &Path,
    spec_ct: &Path,
    n: usize,
    control: &StepControl,
) -> Result<(VerificationReport, Vec<SweepRow>), Failure> {
    if !matches!(theorem, Theorem::ChordComparison | Theorem::NestedChords) {
        return Err(Failure::Input(format!(
            "sweep supports thm1.1 and corollary, not {}",
            theorem.id()
        )));
    }
    if n < 2 {
        return Err(Failure::Input(format!("sweep grid needs N >= 2, got {n}")));
    }
    let (a, b) = (load_spec(spec_c)?, load_spec(spec_ct)?);
    let (c, ct) = euclidean_pair(theorem, &a, &b, control)?;
    let tol = control.tol;
    let mut config = echo(control);
    config.grid = Some(n);
    let hyps = hypothesis_census(&c, &ct, (c.start(), c.end()), tol)?;
    if !all_pass(&hyps) {
        return Ok((VerificationReport::new(theorem, config, hyps, None, json!({})), Vec::new()));
    }
    let (lo, hi) = (c.start(), c.end());
    let grid: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect();
    let pairs: Vec<(f64, f64)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| (grid[i], grid[j])).collect();
    let rows = pairs
        .par_iter()
        .map(|&range| sweep_cell(&c, &ct, range, tol))
        .collect::<Result<Vec<_>, _>>()?;

    let checked: Vec<&SweepRow> = rows.iter().filter(|r| r.status == "checked").collect();
    let skipped = rows.len() - checked.len();
    let worst = |f: fn(&SweepRow) -> f64| {
        checked
            .iter()
            .map(|r| (f(r), (r.s1, r.s2)))
            .min_by(|x, y| x.0.total_cmp(&y.0))
    };
    let mono = worst(|r| r.min_slack);
    let chord = worst(|r| r.chord_slack);
    let mut mono_check = slack_check("monotonicity slack over all pairs", mono.map_or(0.0, |m| m.0), tol);
    let mut chord_check = slack_check("chord inequality over all pairs", chord.map_or(0.0, |m| m.0), tol);
    if skipped > 0 {
        let note = format!("{skipped} pair(s) with a degenerate chord were not checked");
        mono_check = mono_check.with_note(note.clone());
        chord_check = chord_check.with_note(note);
    }
    let details = json!({
        "pairs": rows.len(),
        "checked": checked.len(),
        "degenerate": skipped,
        "worst_monotonicity_pair": mono.map(|m| m.1),
        "worst_chord_pair": chord.map(|m| m.1),
    });
    let rep = VerificationReport::new(theorem, config, hyps, Some(vec![mono_check, chord_check]), details);
    Ok((rep, rows))
}
