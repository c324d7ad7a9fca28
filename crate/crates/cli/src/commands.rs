use std::path::Path;

use num_complex::Complex64;
use ppdlab::cone::{
    extremal_rays_bounded, field_of_definition_check, ppd_cone_hrep_bounded, FieldEntry, InequalityKind,
    PolyhedralCone, SelfDualityReport, DEFAULT_HREP_ORDER_BOUND,
};
use ppdlab::constructions::{closure_report, corestrict, external_product, pointwise_product, restrict};
use ppdlab::fourier::{convolve, GroupFunction};
use ppdlab::gaussian::{
    counterexample_probe, gaussian_corestriction_check, gaussian_fourier_closed_form, gaussian_goodness_probe,
    numeric_fourier, test_grid, GridQuadrature, QuadraticFormSpd,
};
use ppdlab::group::groups_up_to;
use ppdlab::io::{parse_generators, FunctionFile, MeasureFile};
use ppdlab::ppd::{normalize_function, verdict, PpdVerdict, Tolerances};
use ppdlab::{Cyclotomic, Error, FiniteAbelianGroup, Scalar};
use serde::Serialize;

use crate::output::{read, write_file, CliError, Report};
use crate::{Cli, Command, GaussianCheck, Global, ModeArg};

const ATLAS_DEFAULT_ORDER: usize = 8;

macro_rules! with_mode {
    ($global:expr, $f:ident ( $($arg:expr),* )) => {
        match $global.mode {
            ModeArg::Exact => $f::<Cyclotomic>($($arg),*),
            ModeArg::Float => $f::<Complex64>($($arg),*),
        }
    };
}
pub(crate) use with_mode;

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Check { file, good, .. } => with_mode!(g, check(g, file, *good)),
        Command::Sweep { groups, cases } => {
            let list = match groups {
                Some(s) => parse_group_list(s)?,
                None => groups_up_to(g.order_bound(crate::sweep::SWEEP_DEFAULT_ORDER)),
            };
            crate::sweep::sweep(g, &list, *cases)
        }
        Command::Cone { group, rays, csv } => cone(g, group, *rays, csv.as_deref()),
        Command::ConeAtlas { csv } => cone_atlas(g, csv.as_deref()),
        Command::Restrict { file, subgroup } => with_mode!(g, restrict_cmd(g, file, subgroup, false)),
        Command::Corestrict { file, subgroup } => with_mode!(g, restrict_cmd(g, file, subgroup, true)),
        Command::Product { first, second, external } => with_mode!(g, product(g, first, second, *external)),
        Command::Convolve { first, second } => with_mode!(g, convolve_cmd(g, first, second)),
        Command::Gaussian {
            form,
            check,
            k,
            terms,
            half_width,
            points,
        } => gaussian(form.as_deref(), *check, *k, *terms, *half_width, *points),
        Command::Verify41 { cases } => crate::sweep::verify(g, *cases),
    }
}

fn parse_group_list(s: &str) -> Result<Vec<FiniteAbelianGroup>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<FiniteAbelianGroup>().map_err(CliError::from))
        .collect()
}

pub fn tolerances(g: &Global) -> Tolerances {
    Tolerances::with_eq(g.tol)
}

fn ensure_order(g: &Global, group: &FiniteAbelianGroup) -> Result<(), CliError> {
    let bound = g.order_bound(usize::MAX);
    if group.order() > bound {
        return Err(Error::BoundExceeded {
            what: "group order",
            actual: group.order(),
            bound,
        }
        .into());
    }
    Ok(())
}

fn load_function<S: Scalar>(g: &Global, path: &Path) -> Result<GroupFunction<S>, CliError> {
    let f = FunctionFile::parse(&read(path)?)?.to_function::<S>()?;
    ensure_order(g, f.group())?;
    Ok(f)
}

#[derive(Serialize)]
struct CheckReport<'a> {
    mode: &'static str,
    group: String,
    property: &'static str,
    holds: bool,
    #[serde(flatten)]
    verdict: &'a PpdVerdict,
}

pub fn mode_name(g: &Global) -> &'static str {
    match g.mode {
        ModeArg::Exact => "exact",
        ModeArg::Float => "float",
    }
}

fn check<S: Scalar>(g: &Global, file: &Path, good: bool) -> Result<Report, CliError> {
    let f = load_function::<S>(g, file)?;
    let v = verdict(&f, &tolerances(g));
    let holds = if good { v.is_good } else { v.is_ppd };
    Report::new(
        CheckReport {
            mode: mode_name(g),
            group: f.group().to_string(),
            property: if good { "good" } else { "ppd" },
            holds,
            verdict: &v,
        },
        holds,
    )
}

fn restrict_cmd<S: Scalar>(g: &Global, file: &Path, subgroup: &str, quotient: bool) -> Result<Report, CliError> {
    let f = load_function::<S>(g, file)?;
    let h = parse_generators(subgroup, f.group())?;
    let f = normalize_function(&f)?;
    let out = if quotient { corestrict(&f, &h)? } else { restrict(&f, &h)? };
    Report::new(FunctionFile::from_function(&out), true)
}

fn product<S: Scalar>(g: &Global, first: &Path, second: &Path, external: bool) -> Result<Report, CliError> {
    let u = load_function::<S>(g, first)?;
    let v = load_function::<S>(g, second)?;
    let w = if external {
        external_product(&u, &v)?
    } else {
        pointwise_product(&u, &v)?
    };
    let closure = closure_report(&[&u, &v], &w);
    eprintln!(
        "closure: {}",
        serde_json::to_string(&closure).expect("plain data serializes")
    );
    Report::new(FunctionFile::from_function(&w), closure.holds())
}

fn convolve_cmd<S: Scalar>(g: &Global, first: &Path, second: &Path) -> Result<Report, CliError> {
    let mu = MeasureFile::parse(&read(first)?)?.to_measure::<S>()?;
    let nu = MeasureFile::parse(&read(second)?)?.to_measure::<S>()?;
    ensure_order(g, mu.group())?;
    Report::new(MeasureFile::from_measure(&convolve(&mu, &nu)?), true)
}

#[derive(Serialize)]
struct InequalityJson {
    index: usize,
    kind: InequalityKind,
    orbit: usize,
    coeffs: Vec<String>,
}

#[derive(Serialize)]
struct RayJson {
    index: usize,
    coords: Vec<String>,
    tight: Vec<usize>,
}

#[derive(Serialize)]
struct FieldJson {
    conductor: u32,
    basis: Vec<String>,
    failures: usize,
    all_rational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    entries: Option<Vec<FieldEntry>>,
}

#[derive(Serialize)]
struct ConeReport {
    group: String,
    order: usize,
    dim: usize,
    /// orbit representatives as residues
    orbits: Vec<Vec<usize>>,
    inequalities: Vec<InequalityJson>,
    ray_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    rays: Option<Vec<RayJson>>,
    self_duality: SelfDualityReport,
    field: FieldJson,
}

struct ConeData {
    cone: PolyhedralCone,
    duality: SelfDualityReport,
    field: ppdlab::cone::FieldReport,
}

impl ConeData {
    fn ok(&self) -> bool {
        self.duality.involution && self.field.failures == 0
    }

    fn rays(&self) -> Vec<RayJson> {
        self.cone
            .rays
            .iter()
            .flatten()
            .enumerate()
            .map(|(index, r)| RayJson {
                index,
                coords: r.coords.iter().map(Cyclotomic::to_exact_string).collect(),
                tight: r.tight.clone(),
            })
            .collect()
    }
}

fn cone_data(g: &Global, group: &FiniteAbelianGroup, default: usize) -> Result<ConeData, CliError> {
    let bound = g.order_bound(default);
    let hrep = ppd_cone_hrep_bounded(group, bound)?;
    let cone = extremal_rays_bounded(&hrep, bound.max(1))?;
    let duality = ppdlab::cone::self_duality_check(&cone)?;
    let field = field_of_definition_check(&cone);
    Ok(ConeData { cone, duality, field })
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Input(format!("csv: {e}"));
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(format!("csv: {e}")))?;
    write_file(path, &bytes)
}

fn join_indices(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn orbit_label(group: &FiniteAbelianGroup, rep: usize) -> String {
    let r: Vec<String> = group.residues(rep).iter().map(ToString::to_string).collect();
    format!("f({})", r.join(","))
}

fn cone(g: &Global, literal: &str, list_rays: bool, csv: Option<&Path>) -> Result<Report, CliError> {
    let group: FiniteAbelianGroup = literal.parse()?;
    let data = cone_data(g, &group, DEFAULT_HREP_ORDER_BOUND)?;
    let reps = data.cone.basis.representatives();
    if let Some(path) = csv {
        let mut header = vec!["ray".to_string()];
        header.extend(reps.iter().map(|&x| orbit_label(&group, x)));
        header.push("tight".into());
        let rows: Vec<Vec<String>> = data
            .rays()
            .into_iter()
            .map(|r| {
                let mut row = vec![r.index.to_string()];
                row.extend(r.coords);
                row.push(join_indices(&r.tight));
                row
            })
            .collect();
        write_csv(path, &header, &rows)?;
    }
    let ok = data.ok();
    let report = ConeReport {
        group: group.to_string(),
        order: group.order(),
        dim: data.cone.dim(),
        orbits: reps.iter().map(|&x| group.residues(x)).collect(),
        inequalities: data
            .cone
            .inequalities
            .iter()
            .enumerate()
            .map(|(index, i)| InequalityJson {
                index,
                kind: i.kind,
                orbit: i.orbit,
                coeffs: i.coeffs.iter().map(Cyclotomic::to_exact_string).collect(),
            })
            .collect(),
        ray_count: data.cone.rays.as_ref().map_or(0, Vec::len),
        rays: list_rays.then(|| data.rays()),
        field: FieldJson {
            conductor: data.field.conductor,
            basis: data.field.basis.clone(),
            failures: data.field.failures,
            all_rational: data.field.all_rational,
            entries: list_rays.then(|| data.field.entries.clone()),
        },
        self_duality: data.duality,
    };
    Report::new(report, ok)
}

#[derive(Serialize)]
struct AtlasEntry {
    group: String,
    order: usize,
    exponent: usize,
    dim: usize,
    inequalities: usize,
    ray_count: usize,
    rays: Vec<RayJson>,
    involution: bool,
    field_failures: usize,
    all_rational: bool,
}

#[derive(Serialize)]
struct Atlas {
    max_order: usize,
    entries: Vec<AtlasEntry>,
}

fn cone_atlas(g: &Global, csv: Option<&Path>) -> Result<Report, CliError> {
    let max_order = g.order_bound(ATLAS_DEFAULT_ORDER);
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for group in groups_up_to(max_order) {
        let data = cone_data(g, &group, ATLAS_DEFAULT_ORDER)?;
        ok &= data.ok();
        let rays = data.rays();
        for r in &rays {
            rows.push(vec![
                group.to_string(),
                r.index.to_string(),
                r.coords.join(" ; "),
                join_indices(&r.tight),
            ]);
        }
        entries.push(AtlasEntry {
            group: group.to_string(),
            order: group.order(),
            exponent: group.exponent(),
            dim: data.cone.dim(),
            inequalities: data.cone.inequalities.len(),
            ray_count: rays.len(),
            rays,
            involution: data.duality.involution,
            field_failures: data.field.failures,
            all_rational: data.field.all_rational,
        });
    }
    if let Some(path) = csv {
        let header = ["group", "ray", "coords", "tight"].map(String::from);
        write_csv(path, &header, &rows)?;
    }
    Report::new(Atlas { max_order, entries }, ok)
}

#[derive(Serialize)]
struct GridJson {
    half_width: f64,
    points: usize,
    step: f64,
}

#[derive(Serialize)]
struct GaussianReport<T: Serialize> {
    check: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    form: Option<Vec<Vec<f64>>>,
    grid: GridJson,
    tolerance: f64,
    passed: bool,
    result: T,
}

#[derive(Serialize)]
struct TransformResult {
    closed_form_amplitude: f64,
    closed_form: Vec<Vec<f64>>,
    max_deviation: f64,
    boundary_max: f64,
    test_points: usize,
}

const GAUSSIAN_TOL: f64 = 1e-9;
const MASS_TOL: f64 = 1e-6;

fn input_error(e: Error) -> CliError {
    match e {
        Error::Precondition(m) => CliError::Input(m),
        e => e.into(),
    }
}

fn gaussian(
    form: Option<&str>,
    check: GaussianCheck,
    k: usize,
    terms: usize,
    half_width: f64,
    points: usize,
) -> Result<Report, CliError> {
    let q = GridQuadrature::new(half_width, points).map_err(input_error)?;
    let grid = GridJson {
        half_width,
        points,
        step: q.step(),
    };
    let parse_form = || -> Result<QuadraticFormSpd, CliError> {
        form.ok_or_else(|| CliError::Input("--form is required for this check".into()))?
            .parse::<QuadraticFormSpd>()
            .map_err(CliError::from)
    };
    let report = |name, a: Option<&QuadraticFormSpd>, passed, result| {
        Report::new(
            GaussianReport {
                check: name,
                form: a.map(QuadraticFormSpd::rows),
                grid,
                tolerance: if name == "counterexample" { MASS_TOL } else { GAUSSIAN_TOL },
                passed,
                result,
            },
            passed,
        )
    };
    match check {
        GaussianCheck::Transform => {
            let a = parse_form()?;
            let n = a.dim();
            if n > 2 {
                return Err(Error::BoundExceeded {
                    what: "dimension",
                    actual: n,
                    bound: 2,
                }
                .into());
            }
            let t = gaussian_fourier_closed_form(&a);
            let exact = |xi: &[f64]| t.amplitude * t.form.gaussian(xi);
            let f = |x: &[f64]| a.gaussian(x);
            let pts = test_grid(n, 1.0, if n == 1 { 17 } else { 5 });
            let nt = numeric_fourier(&f, n, &q, &pts, Some(&exact))?;
            let dev = nt.max_deviation.unwrap_or(f64::INFINITY);
            let result = TransformResult {
                closed_form_amplitude: t.amplitude,
                closed_form: t.form.rows(),
                max_deviation: dev,
                boundary_max: nt.boundary_max,
                test_points: pts.len(),
            };
            report("transform", Some(&a), dev < GAUSSIAN_TOL, serde_json::to_value(result).unwrap())
        }
        GaussianCheck::Corestriction => {
            let a = parse_form()?;
            let probe = gaussian_corestriction_check(&a, k, &q).map_err(input_error)?;
            let passed = probe.passed(GAUSSIAN_TOL);
            report("corestriction", Some(&a), passed, serde_json::to_value(probe).unwrap())
        }
        GaussianCheck::Goodness => {
            let a = parse_form()?;
            let v = gaussian_goodness_probe(&a, 1.0).map_err(input_error)?;
            let passed = v.good;
            report("goodness", Some(&a), passed, serde_json::to_value(v).unwrap())
        }
        GaussianCheck::Counterexample => {
            let p = counterexample_probe(terms, &q).map_err(input_error)?;
            let bound = std::f64::consts::PI.powi(2) / 6.0 + MASS_TOL;
            let passed = (p.restricted_mass - p.restricted_mass_closed).abs() < MASS_TOL && p.total_mass <= bound;
            report("counterexample", None, passed, serde_json::to_value(p).unwrap())
        }
    }
}
