//! CSV sample tables and the projection summary.

use std::path::Path;

use nalgebra::Vector3;
use serde_json::json;

use crate::curves::{curvature_magnitude, SampledCurve};
use crate::minkowski::{measured_curvature, TimelikeCurve};
use crate::numerics::{finite_diff, DiffOrder, SampledFunction, StepControl};
use crate::sphere::{curvature_dominance_check, geodesic_curvature_of, project_pair, PlaneChoice, ProjectionConfig};

use super::spec::{build_pair, load_spec, Built, Geometry};
use super::verify::SweepRow;
use super::{open_output, write_json, Failure};

fn csv_error(e: csv::Error) -> Failure {
    Failure::Input(format!("cannot write CSV: {e}"))
}

fn writer(path: Option<&Path>) -> Result<csv::Writer<Box<dyn std::io::Write>>, Failure> {
    Ok(csv::Writer::from_writer(open_output(path)?))
}

fn axes(prefix: &str, dim: usize, names: [&str; 3]) -> Vec<String> {
    names[..dim].iter().map(|n| format!("{prefix}{n}")).collect()
}

/// Signed plane curvature from finite differences of the tangent, per segment.
fn signed_plane_curvature(c: &SampledCurve) -> Result<Vec<f64>, Failure> {
    let mut out = Vec::with_capacity(c.len());
    for r in c.segment_ranges() {
        let tangents = SampledFunction::new(c.s_grid[r.clone()].to_vec(), c.tangent[r.clone()].to_vec())?;
        let d = finite_diff(&tangents, DiffOrder::First)?;
        out.extend(c.tangent[r].iter().zip(&d.values).map(|(t, dt)| t.x * dt.y - t.y * dt.x));
    }
    Ok(out)
}

struct Table<'a> {
    dim: usize,
    s: &'a [f64],
    position: &'a [Vector3<f64>],
    tangent: &'a [Vector3<f64>],
    curvature: Vec<f64>,
    jump_marks: &'a [usize],
    coords: [&'static str; 3],
}

fn euclidean_table(c: &SampledCurve, curvature: Vec<f64>) -> Table<'_> {
    Table {
        dim: c.dim,
        s: &c.s_grid,
        position: &c.position,
        tangent: &c.tangent,
        curvature,
        jump_marks: &c.jump_marks,
        coords: ["x", "y", "z"],
    }
}

fn lorentz_table(c: &TimelikeCurve, curvature: Vec<f64>) -> Table<'_> {
    Table {
        dim: c.dim,
        s: &c.s_grid,
        position: &c.position,
        tangent: &c.tangent,
        curvature,
        jump_marks: &[],
        coords: ["t", "x", "y"],
    }
}

/// One row per sample: `s`, position, tangent, curvature measured from the
/// samples and a flag on the right-hand sample of every jump.
pub(crate) fn reconstruct(spec: &Path, out: Option<&Path>, control: &StepControl) -> Result<(), Failure> {
    let spec = load_spec(spec)?;
    let built = spec.build(control)?;
    let table = match &built {
        Built::Plane(c) => euclidean_table(c, signed_plane_curvature(c)?),
        Built::Space(c) => euclidean_table(c, curvature_magnitude(c)?.values()),
        Built::Sphere(c) => euclidean_table(&c.curve, geodesic_curvature_of(c)?.values()),
        Built::Minkowski(c) => lorentz_table(c, measured_curvature(c)?.values),
    };
    if table.curvature.len() != table.s.len() {
        return Err(Failure::Numeric(format!(
            "measured curvature has {} samples for a {}-sample curve",
            table.curvature.len(),
            table.s.len()
        )));
    }
    let mut w = writer(out)?;
    let mut header = vec!["s".to_string()];
    header.extend(axes("", table.dim, table.coords));
    header.extend(axes("d", table.dim, table.coords));
    header.extend(["curvature".to_string(), "jump".to_string()]);
    w.write_record(&header).map_err(csv_error)?;
    for i in 0..table.s.len() {
        let mut row = vec![table.s[i].to_string()];
        row.extend((0..table.dim).map(|k| table.position[i][k].to_string()));
        row.extend((0..table.dim).map(|k| table.tangent[i][k].to_string()));
        row.push(table.curvature[i].to_string());
        row.push(u8::from(table.jump_marks.contains(&i)).to_string());
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Failure::Input(format!("cannot write CSV: {e}")))
}

/// Cone projection of a spherical pair: radius, both lifts and their curvatures.
pub(crate) fn project(
    spec_c: &Path,
    spec_ct: &Path,
    plane: PlaneChoice,
    out: Option<&Path>,
    report: Option<&Path>,
    control: &StepControl,
) -> Result<(), Failure> {
    let (a, b) = (load_spec(spec_c)?, load_spec(spec_ct)?);
    for s in [&a, &b] {
        if s.geometry != Geometry::Sphere {
            return Err(Failure::Input(format!("project needs two sphere curves, got a {} curve", s.geometry)));
        }
    }
    let (Built::Sphere(c), Built::Sphere(ct)) = build_pair(&a, &b, control)? else {
        unreachable!("geometries checked above")
    };
    let config = match plane {
        PlaneChoice::Auto { epsilon_min } => ProjectionConfig::auto(&c, epsilon_min)?,
        PlaneChoice::Fixed(cfg) => cfg,
    };
    let pair = project_pair(&c, &ct, &config)?;

    let mut w = writer(out)?;
    w.write_record([
        "s", "tau", "R", "dR", "ddR", "px", "py", "pz", "qx", "qy", "qz", "k", "k_tilde", "jump",
    ])
    .map_err(csv_error)?;
    let r = &pair.radius;
    for i in 0..r.s_grid.len() {
        let (p, q) = (pair.plane_curve.position[i], pair.space_curve.position[i]);
        let row = [
            r.s_grid[i],
            pair.tau[i],
            r.value[i],
            r.first[i],
            r.second[i],
            p.x,
            p.y,
            p.z,
            q.x,
            q.y,
            q.z,
            pair.curvature[i],
            pair.curvature_tilde[i],
        ];
        let mut rec: Vec<String> = row.iter().map(f64::to_string).collect();
        rec.push(u8::from(r.jump_marks.contains(&i)).to_string());
        w.write_record(&rec).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Failure::Input(format!("cannot write CSV: {e}")))?;

    if let Some(path) = report {
        let dominance = curvature_dominance_check(&pair, control.tol);
        let summary = json!({
            "plane": config,
            "tau_end": pair.tau[pair.tau.len() - 1],
            "radius_start": r.value[0],
            "radius_end": r.value[r.value.len() - 1],
            "dominance": dominance.dominance,
            "convexity": dominance.convexity,
            "jumps": pair.jumps,
        });
        write_json(Some(path), &summary)?;
    }
    Ok(())
}

pub(crate) fn write_sweep_rows(out: Option<&Path>, rows: &[SweepRow]) -> Result<(), Failure> {
    let mut w = writer(out)?;
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Failure::Input(format!("cannot write CSV: {e}")))
}
