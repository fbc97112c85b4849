use std::f64::consts::PI;
use std::path::Path;

use reachkit_core::cloud::bounding_extent;
use reachkit_core::generators::{
    apply_multirotation, canonical, cantor_contact, example_m, make_bset, parabola_bset, BSetSpec, Canonical,
    MultirotationSpec,
};
use reachkit_core::io::{
    atomic_from_json, cloud_to_csv_string, labeled_cloud_to_json, lipschitz_report_to_json, matrix_from_json, matrix_json,
    num, read_cloud_csv, reach_to_json, spec_from_json, whitney_to_json,
};
use reachkit_core::reach::{default_eps_zero, uniform_grid};
use reachkit_core::tangent::stratify_with_dim;
use reachkit_core::{
    domination_bound, empirical_lipschitz, estimate_at, federer_reach, fullness, gap_distance, gj_norm, median_spacing,
    midpoint_reach_eps, paper_constant, product_integral_atomic, product_integral_partition, projection_uniqueness_reach,
    simplex_volume, stratify, tdmnapl_data, whitney_check, LipschitzReport, Matrix, PaperConstant, Point, PointCloud,
    ProjectionParams, Simplex, Subspace, TangentParams,
};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::error::CliError;
use crate::output::{emit, read, render};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn load_cloud(path: &Path) -> Result<PointCloud, CliError> {
    read_cloud_csv(read(path)?.as_bytes()).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

fn load_json(path: &Path) -> Result<Value, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

/// `(h, h_min)`, defaulting to 4 and 3 times the median spacing.
fn scales(cloud: &PointCloud, h: Option<f64>, h_min: Option<f64>) -> (f64, f64) {
    let s = median_spacing(cloud);
    (h.unwrap_or(4.0 * s), h_min.unwrap_or(3.0 * s))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExampleMSpec {
    r: f64,
    #[serde(default)]
    contact: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    cantor_depth: Option<usize>,
    #[serde(default)]
    angles: Vec<f64>,
}

pub fn generate(a: GenerateArgs) -> Result<(), CliError> {
    let need_spec = || a.spec.as_deref().ok_or_else(|| usage("this fixture needs --spec"));
    let cloud = match a.fixture {
        Fixture::Circle => canonical(&Canonical::Circle { radius: a.radius }, a.n)?.cloud,
        Fixture::Sphere => canonical(&Canonical::Sphere { radius: a.radius }, a.n)?.cloud,
        Fixture::Segment => canonical(&Canonical::Segment { dim: a.dim.unwrap_or(2) }, a.n)?.cloud,
        Fixture::Doubleton => canonical(&Canonical::Doubleton { h: a.h }, 2)?.cloud,
        Fixture::Polygon => canonical(&Canonical::ConvexPolygon { sides: a.sides, radius: a.radius }, a.n)?.cloud,
        Fixture::Disk => canonical(&Canonical::Disk { radius: a.radius }, a.n)?.cloud,
        Fixture::Bset => {
            let spec = match &a.spec {
                Some(p) => spec_from_json::<BSetSpec>(&read(p)?, "B-set spec")?,
                None => parabola_bset(a.radius),
            };
            make_bset(&spec, a.grid_step, a.dim.unwrap_or(2))?.cloud
        }
        Fixture::Multirotate => {
            let input = a.input.as_deref().ok_or_else(|| usage("multirotate needs --input"))?;
            let spec = spec_from_json::<MultirotationSpec>(&read(need_spec()?)?, "multirotation spec")?;
            apply_multirotation(&spec, &load_cloud(input)?)?
        }
        Fixture::ExampleM => {
            let spec = match &a.spec {
                Some(p) => spec_from_json::<ExampleMSpec>(&read(p)?, "example M spec")?,
                None => ExampleMSpec { r: 1.0, contact: None, cantor_depth: None, angles: vec![PI / 2.0] },
            };
            let contact: Vec<(f64, f64)> = match (spec.contact, spec.cantor_depth) {
                (Some(_), Some(_)) => {
                    return Err(CliError::Domain("example M spec: give either 'contact' or 'cantor_depth'".into()))
                }
                (Some(c), None) => c.into_iter().map(|[x, y]| (x, y)).collect(),
                (None, Some(depth)) => cantor_contact(spec.r, depth),
                (None, None) => vec![(0.0, 0.0)],
            };
            example_m(spec.r, &contact, &spec.angles, a.grid_step)?.cloud
        }
    };
    emit(a.output.as_ref(), &cloud_to_csv_string(&cloud))
}

pub fn reach(a: ReachArgs) -> Result<(), CliError> {
    let cloud = load_cloud(&a.input)?;
    let (h, h_min) = scales(&cloud, a.scale.h, a.h_min);
    let est = match a.method {
        Method::Federer => federer_reach(&cloud, h, a.scale.tau_rank, h_min)?,
        Method::Midpoint => midpoint_reach_eps(&cloud, h_min, a.eps_zero.unwrap_or_else(|| default_eps_zero(&cloud)))?,
        Method::Projection => {
            let r_max = a.r_max.unwrap_or_else(|| bounding_extent(&cloud));
            let mut params = ProjectionParams::new(a.probes, uniform_grid(a.grid_step, r_max)?);
            params.seed = a.seed;
            projection_uniqueness_reach(&cloud, &params)?
        }
    };
    emit(a.out.output.as_ref(), &render(&reach_to_json(&est), a.out.format))
}

pub fn stratify_cloud(a: StratifyArgs) -> Result<(), CliError> {
    let cloud = load_cloud(&a.input)?;
    let (h, _) = scales(&cloud, a.scale.h, None);
    let params = TangentParams { h, tau_rank: a.scale.tau_rank, tau_line: a.tau_line };
    let s = stratify_with_dim(&cloud, &params, a.declared_dim)?;
    if !s.over_dimension.is_empty() {
        eprintln!(
            "reachkit: {} points have tangent dimension above {}",
            s.over_dimension.len(),
            a.declared_dim.unwrap_or(0)
        );
    }
    emit(a.output.as_ref(), &reachkit_core::io::to_json_string(&labeled_cloud_to_json(&s.cloud)))
}

fn points_from_json(v: &Value, what: &str) -> Result<Vec<Point>, CliError> {
    let m = matrix_from_json(v, what)?;
    Ok((0..m.nrows()).map(|i| m.row(i).transpose()).collect())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| CliError::Domain(format!("missing field '{key}'")))
}

pub fn gap(a: IoArgs) -> Result<(), CliError> {
    let v = load_json(&a.input)?;
    let dim = field(&v, "dim")?
        .as_u64()
        .ok_or_else(|| CliError::Domain("'dim' must be a non-negative integer".into()))? as usize;
    let u = Subspace::span(dim, &points_from_json(field(&v, "u")?, "u")?)?;
    let w = Subspace::span(dim, &points_from_json(field(&v, "v")?, "v")?)?;
    let rho = gap_distance(&u, &w)?;
    let report = json!({"dim": dim, "k": u.dim(), "gap": num(rho)});
    emit(a.output.as_ref(), &render(&report, a.format))
}

pub fn fullness_report(a: IoArgs) -> Result<(), CliError> {
    let v = load_json(&a.input)?;
    let s = Simplex::new(points_from_json(field(&v, "vertices")?, "vertices")?)?;
    let report = json!({
        "k": s.dim(),
        "volume": num(simplex_volume(&s)),
        "diameter": num(s.diameter()),
        "fullness": num(fullness(&s)?),
    });
    emit(a.output.as_ref(), &render(&report, a.format))
}

pub fn prodint(a: ProdintArgs) -> Result<(), CliError> {
    match a.action {
        ProdintAction::Eval(r) => {
            let f = atomic_from_json(&load_json(&r.io.input)?)?;
            let mu = match r.mesh {
                Some(mesh) => product_integral_partition(&f, r.s, r.t, mesh)?,
                None => product_integral_atomic(&f, r.s, r.t)?,
            };
            let dev = gj_norm(&(&mu - Matrix::identity(f.dim(), f.dim())))?;
            let report = json!({
                "s": num(r.s),
                "t": num(r.t),
                "mu": matrix_json(&mu),
                "gj_deviation": num(dev),
                "bound": num(domination_bound(&f, r.s, r.t)?),
                "atoms": f.atoms_in(r.s, r.t)?.len(),
            });
            emit(r.io.output.as_ref(), &render(&report, r.io.format))
        }
        ProdintAction::Bound(r) => {
            if r.mesh.is_some() {
                return Err(usage("--mesh applies to 'prodint eval' only"));
            }
            let f = atomic_from_json(&load_json(&r.io.input)?)?;
            let report = json!({"s": num(r.s), "t": num(r.t), "bound": num(domination_bound(&f, r.s, r.t)?)});
            emit(r.io.output.as_ref(), &render(&report, r.io.format))
        }
    }
}

/// Labels the cloud and returns the indices of the `k`-stratum with their
/// estimated tangent spaces.
fn stratum_field(
    cloud: &PointCloud,
    k: usize,
    params: &TangentParams,
) -> Result<(PointCloud, Vec<usize>, Vec<Subspace>), CliError> {
    let labeled = stratify(cloud, params)?;
    let labels = labeled.labels().expect("stratify labels every point");
    let idx: Vec<usize> = (0..cloud.len()).filter(|&i| labels[i].k == k).collect();
    if idx.is_empty() {
        return Err(CliError::Domain(format!("stratum T_{k} is empty")));
    }
    let spans = estimate_at(cloud, &idx, params.h, params.tau_rank)?.into_iter().map(|e| e.span).collect();
    Ok((labeled, idx, spans))
}

pub fn lipcheck(a: LipcheckArgs) -> Result<(), CliError> {
    let cloud = load_cloud(&a.input)?;
    let (h, h_min) = scales(&cloud, a.scale.h, a.h_min);
    let params = TangentParams { h, tau_rank: a.scale.tau_rank, tau_line: a.tau_line };
    let (_, idx, spans) = stratum_field(&cloud, a.k, &params)?;
    let pts: Vec<Point> = idx.iter().map(|&i| cloud.point(i).clone()).collect();
    let mut emp = empirical_lipschitz(&pts, &spans, h_min)?;
    emp.argmax = emp.argmax.map(|(i, j)| (idx[i], idx[j]));
    let r = match a.r {
        Some(r) => r,
        None => federer_reach(&cloud, h, a.scale.tau_rank, h_min)?.value,
    };
    let name = match a.constant {
        ConstantName::Psi1Bound => PaperConstant::Psi1Bound,
        ConstantName::LKThetaR => PaperConstant::LKThetaR,
        ConstantName::LTildeKThetaR => PaperConstant::LTildeKThetaR,
        ConstantName::Psi2Special => PaperConstant::Psi2Special,
    };
    let bound = paper_constant(name, a.k, a.theta, r)?;
    let report = LipschitzReport::new(emp, name, bound, a.slack);
    emit(a.out.output.as_ref(), &render(&lipschitz_report_to_json(&report), a.out.format))
}

type WhitneyInput = (Vec<Point>, Vec<Point>, Vec<Matrix>);

fn whitney_from_json(v: &Value) -> Result<WhitneyInput, CliError> {
    let domain = points_from_json(field(v, "domain")?, "domain")?;
    let f = points_from_json(field(v, "f")?, "f")?;
    let phi = field(v, "phi")?
        .as_array()
        .ok_or_else(|| CliError::Domain("'phi' must be an array of matrices".into()))?
        .iter()
        .enumerate()
        .map(|(i, m)| matrix_from_json(m, &format!("phi[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((domain, f, phi))
}

pub fn whitney(a: WhitneyArgs) -> Result<(), CliError> {
    let report = match a.stratum {
        None => {
            if a.base.is_some() {
                return Err(usage("--base needs --stratum"));
            }
            let (domain, f, phi) = whitney_from_json(&load_json(&a.input)?)?;
            whitney_to_json(&whitney_check(&domain, &f, &phi)?)
        }
        Some(k) => {
            let cloud = load_cloud(&a.input)?;
            let (h, h_min) = scales(&cloud, a.scale.h, a.h_min);
            let params = TangentParams { h, tau_rank: a.scale.tau_rank, tau_line: a.tau_line };
            let (labeled, idx, spans) = stratum_field(&cloud, k, &params)?;
            let data = tdmnapl_data(&labeled, k, h, a.scale.tau_rank, a.base)?;
            let w = whitney_check(&data.domain, &data.f, &data.phi)?;
            let pts: Vec<Point> = idx.iter().map(|&i| cloud.point(i).clone()).collect();
            let lip = if pts.len() < 2 { 0.0 } else { empirical_lipschitz(&pts, &spans, h_min)?.constant };
            let r_hat = federer_reach(&cloud, h, a.scale.tau_rank, h_min)?.value;
            let mut v = whitney_to_json(&w);
            let obj = v.as_object_mut().expect("whitney report is an object");
            obj.insert("base".into(), json!(data.base));
            obj.insert("points".into(), json!(idx.len()));
            obj.insert("lipschitz".into(), num(lip));
            obj.insert("reach".into(), num(r_hat));
            obj.insert("bound".into(), num(lip.max(0.5 / r_hat)));
            v
        }
    };
    emit(a.out.output.as_ref(), &render(&report, a.out.format))
}
