use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use smale_lab::battery::{run_battery, BatteryConfig, BatterySummary, CheckClass};
use smale_lab::blaschke::BlaschkeProduct;
use smale_lab::polycore::poly_smale_quotients;
use smale_lab::search::{estimate, Objective, SearchConfig, SearchResult};
use smale_lab::serial::{to_json_string, ComplexRecord};
use smale_lab::smale::{
    rescale_family, smale_quotients, thm2_closed_s, thm2_critical_points, thm2_family,
    thm4_closed_t, thm4_family, BoundVariant, QuotientReport, RescaledCritical,
};

use crate::output::{num, render, write_text, Artifact, Meta, Table};
use crate::parse;
use crate::{
    Cli, Command, FamilyArgs, ProductSource, QuotientsArgs, RescaleArgs, SearchArgs, SearchTarget,
    VariantArg, VerifyArgs,
};

const FAMILY_TOL: f64 = 1e-8;
const RESCALE_TOL: f64 = 1e-10;
const CERTIFICATE_TOL: f64 = 1e-10;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(PathBuf, io::Error),
    Core(smale_lab::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(..) => 1,
            CliError::Core(e) if e.is_domain() => 2,
            CliError::Core(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<smale_lab::Error> for CliError {
    fn from(e: smale_lab::Error) -> Self {
        CliError::Core(e)
    }
}

/// Outcome of a command whose artifact was written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// An assertion-class check failed.
    Failed,
    /// A numeric cross-check exceeded its tolerance.
    Unresolved,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        match s {
            Status::Ok => ExitCode::SUCCESS,
            Status::Failed => ExitCode::from(2),
            Status::Unresolved => ExitCode::from(3),
        }
    }
}

pub fn run(cli: &Cli) -> Result<Status, CliError> {
    let start = Instant::now();
    match &cli.command {
        Command::Quotients(args) => quotients(cli, args, start),
        Command::Family(args) => family(cli, args, start),
        Command::Verify(args) => verify(cli, args, start),
        Command::Rescale(args) => rescale(cli, args, start),
        Command::Search(args) => search(cli, args, start),
    }
}

fn finish<R: Serialize>(
    cli: &Cli,
    start: Instant,
    artifact: Artifact<'_, R>,
    product: Option<&BlaschkeProduct>,
) -> Result<(), CliError> {
    let g = &cli.global;
    let meta = (!g.no_meta).then(|| Meta::since(start));
    let text = render(&artifact, g.format, meta).map_err(|e| CliError::Io("<render>".into(), e))?;
    write_text(&text, g.out.as_deref())
        .map_err(|e| CliError::Io(g.out.clone().unwrap_or_else(|| "<stdout>".into()), e))?;
    if let (Some(path), Some(product)) = (&g.product_out, product) {
        let mut text = to_json_string(product).map_err(|e| CliError::Io(path.clone(), e.into()))?;
        text.push('\n');
        fs::write(path, text).map_err(|e| CliError::Io(path.clone(), e))?;
    }
    Ok(())
}

/// Shared flags with the effective tolerance of the command.
fn config(cli: &Cli, tol: Option<f64>, specific: Value) -> Value {
    let g = &cli.global;
    let mut map = Map::new();
    map.insert("seed".into(), json!(g.seed));
    map.insert("tol".into(), json!(tol));
    map.insert("format".into(), json!(g.format));
    map.insert("out".into(), json!(g.out));
    map.insert("no_meta".into(), json!(g.no_meta));
    map.insert("product_out".into(), json!(g.product_out));
    if let Value::Object(extra) = specific {
        map.extend(extra);
    }
    Value::Object(map)
}

#[derive(Deserialize)]
struct ProductFile {
    degree: usize,
    #[serde(default)]
    rotation: f64,
    zeros: Vec<ComplexRecord>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ProductFiles {
    One(ProductFile),
    Many(Vec<ProductFile>),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn build(record: ProductFile, origin: &str) -> Result<BlaschkeProduct, CliError> {
    if record.degree != record.zeros.len() {
        return Err(CliError::Usage(format!(
            "{origin}: degree {} does not match {} listed zeros",
            record.degree,
            record.zeros.len()
        )));
    }
    let zeros = record.zeros.into_iter().map(Complex64::from).collect();
    Ok(BlaschkeProduct::new(record.rotation, zeros)?)
}

fn product_file(path: &Path) -> Result<BlaschkeProduct, CliError> {
    let record: ProductFile = serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    build(record, &path.display().to_string())
}

fn product_files(path: &Path) -> Result<Vec<BlaschkeProduct>, CliError> {
    let files: ProductFiles = serde_json::from_str(&read(path)?).map_err(|e| {
        CliError::Usage(format!(
            "{}: expected a product or a list of products ({e})",
            path.display()
        ))
    })?;
    let records = match files {
        ProductFiles::One(r) => vec![r],
        ProductFiles::Many(v) => v,
    };
    records
        .into_iter()
        .enumerate()
        .map(|(i, r)| build(r, &format!("{} entry {}", path.display(), i + 1)))
        .collect()
}

fn records(zs: &[Complex64]) -> Vec<ComplexRecord> {
    zs.iter().map(|&z| z.into()).collect()
}

fn quotient_rows(table: &mut Table, id: &str, report: &QuotientReport) {
    for (i, q) in report.quotients.iter().enumerate() {
        table.push(vec![
            id.to_string(),
            report.degree.to_string(),
            i.to_string(),
            num(q.zeta.re),
            num(q.zeta.im),
            num(q.value),
            num(report.s),
            num(report.t),
        ]);
    }
}

const QUOTIENT_HEADER: [&str; 8] = [
    "product_id",
    "degree",
    "index",
    "zeta_re",
    "zeta_im",
    "quotient",
    "S",
    "T",
];

fn quotients(cli: &Cli, args: &QuotientsArgs, start: Instant) -> Result<Status, CliError> {
    let ProductSource { zeros, file } = &args.source;
    let (product, id) = match (zeros, file) {
        (Some(text), _) => {
            let zs =
                parse::complex_list(text).map_err(|e| CliError::Usage(format!("--zeros: {e}")))?;
            (
                BlaschkeProduct::new(args.rotation, zs)?,
                "inline".to_string(),
            )
        }
        (None, Some(path)) => (
            product_file(path)?,
            path.file_stem()
                .map_or("file".into(), |s| s.to_string_lossy().into_owned()),
        ),
        (None, None) => return Err(CliError::Usage("give --zeros or --file".into())),
    };
    let report = smale_quotients(&product)?;
    let cfg = config(
        cli,
        None,
        json!({
            "zeros": records(product.zeros()),
            "file": file,
            "rotation": product.rotation(),
        }),
    );
    let mut table = Table::new(QUOTIENT_HEADER.to_vec());
    quotient_rows(&mut table, &id, &report);
    finish(
        cli,
        start,
        Artifact {
            command: "quotients",
            config: cfg,
            result: &report,
            table,
        },
        Some(&product),
    )?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct FamilyResult {
    family: &'static str,
    n: usize,
    parameter: &'static str,
    value: f64,
    /// `α^{n-1}` for the `thm2` family.
    beta: Option<f64>,
    product: BlaschkeProduct,
    closed_critical_points: Vec<ComplexRecord>,
    /// `"S"` or `"T"`.
    functional: &'static str,
    closed_value: f64,
    numeric_value: f64,
    difference: f64,
    tolerance: f64,
    within_tolerance: bool,
    report: QuotientReport,
}

fn family(cli: &Cli, args: &FamilyArgs, start: Instant) -> Result<Status, CliError> {
    let tol = cli.global.tol.unwrap_or(FAMILY_TOL);
    let (name, parameter, n, value) = match *args {
        FamilyArgs::Thm2 { n, alpha } => ("thm2", "alpha", n, alpha),
        FamilyArgs::Thm4 { n, a } => ("thm4", "a", n, a),
    };
    let (product, beta, points, functional, closed) = match args {
        FamilyArgs::Thm2 { .. } => {
            let product = thm2_family(n, value)?;
            let beta = value.powi(n as i32 - 1);
            let points = thm2_critical_points(n, beta)?;
            (product, Some(beta), points, "S", thm2_closed_s(n, beta)?)
        }
        FamilyArgs::Thm4 { .. } => {
            let product = thm4_family(n, value)?;
            let points = vec![Complex64::new(-value, 0.0); n - 1];
            (product, None, points, "T", thm4_closed_t(n, value)?)
        }
    };
    let report = smale_quotients(&product)?;
    let numeric = if functional == "S" {
        report.s
    } else {
        report.t
    };
    let difference = numeric - closed;
    let within = difference.abs() <= tol;
    if !within {
        eprintln!("numeric {functional} = {numeric} differs from the closed form {closed} by {difference:e}");
    }
    let mut table = Table::new(vec![
        "family",
        "n",
        "parameter",
        "index",
        "zeta_re",
        "zeta_im",
        "quotient",
        "closed_value",
        "numeric_value",
        "difference",
    ]);
    for (i, q) in report.quotients.iter().enumerate() {
        table.push(vec![
            name.into(),
            n.to_string(),
            num(value),
            i.to_string(),
            num(q.zeta.re),
            num(q.zeta.im),
            num(q.value),
            num(closed),
            num(numeric),
            num(difference),
        ]);
    }
    let result = FamilyResult {
        family: name,
        n,
        parameter,
        value,
        beta,
        product: product.clone(),
        closed_critical_points: records(&points),
        functional,
        closed_value: closed,
        numeric_value: numeric,
        difference,
        tolerance: tol,
        within_tolerance: within,
        report,
    };
    let cfg = config(
        cli,
        Some(tol),
        json!({ "family": name, "n": n, parameter: value }),
    );
    finish(
        cli,
        start,
        Artifact {
            command: "family",
            config: cfg,
            result: &result,
            table,
        },
        Some(&product),
    )?;
    Ok(if within {
        Status::Ok
    } else {
        Status::Unresolved
    })
}

#[derive(Serialize)]
struct VerifyResult {
    assertions_pass: bool,
    #[serde(flatten)]
    summary: BatterySummary,
}

fn verify(cli: &Cli, args: &VerifyArgs, start: Instant) -> Result<Status, CliError> {
    let degrees = parse::degree_range(&args.n).map_err(|e| CliError::Usage(format!("--n: {e}")))?;
    if let Some(&n) = degrees.iter().find(|&&n| n < 2) {
        return Err(smale_lab::Error::Domain(format!("degree {n} has no critical points")).into());
    }
    let mut include = Vec::new();
    for path in &args.include_file {
        include.extend(product_files(path)?);
    }
    let battery = BatteryConfig {
        degrees,
        samples: args.samples,
        seed: cli.global.seed,
        bound_variant: args.bound_variant.map(|v| match v {
            VariantArg::Stated => BoundVariant::Stated,
            VariantArg::Koebe4 => BoundVariant::Koebe4,
        }),
        include,
        ..BatteryConfig::default()
    };
    let summary = run_battery(&battery);
    let pass = summary.assertions_pass();
    if !pass {
        let failed: Vec<&str> = summary
            .checks
            .iter()
            .filter(|c| c.class == CheckClass::Assertion && c.failures() > 0)
            .map(|c| c.id.as_str())
            .collect();
        eprintln!("assertion-class checks failed: {}", failed.join(", "));
    }
    let mut table = Table::new(vec![
        "id",
        "class",
        "samples",
        "passes",
        "failures",
        "worst_margin",
        "counterexamples",
    ]);
    for c in &summary.checks {
        table.push(vec![
            c.id.clone(),
            format!("{:?}", c.class).to_lowercase(),
            c.samples.to_string(),
            c.passes.to_string(),
            c.failures().to_string(),
            c.worst_margin.map_or(String::new(), num),
            c.counterexamples.len().to_string(),
        ]);
    }
    let cfg = config(
        cli,
        None,
        json!({ "n": args.n, "include_file": args.include_file, "battery": battery }),
    );
    let result = VerifyResult {
        assertions_pass: pass,
        summary,
    };
    finish(
        cli,
        start,
        Artifact {
            command: "verify",
            config: cfg,
            result: &result,
            table,
        },
        None,
    )?;
    Ok(if pass { Status::Ok } else { Status::Failed })
}

#[derive(Serialize)]
struct RescaleRow {
    m: f64,
    product: BlaschkeProduct,
    critical: Vec<RescaledCritical>,
    identity_residual: f64,
    identity_ok: bool,
    /// Largest gap to the polynomial quotients.
    distance: f64,
    /// Previous distance over this one.
    ratio: Option<f64>,
    /// `(m / m_prev)²`, the ratio of an `O(1/m²)` decay.
    expected_ratio: Option<f64>,
}

#[derive(Serialize)]
struct RescaleResult {
    polynomial_zeros: Vec<ComplexRecord>,
    polynomial_quotients: Vec<f64>,
    tolerance: f64,
    rows: Vec<RescaleRow>,
}

fn rescale(cli: &Cli, args: &RescaleArgs, start: Instant) -> Result<Status, CliError> {
    let tol = cli.global.tol.unwrap_or(RESCALE_TOL);
    let zeros =
        parse::complex_list(&args.zeros).map_err(|e| CliError::Usage(format!("--zeros: {e}")))?;
    let ms = parse::real_list(&args.m).map_err(|e| CliError::Usage(format!("--m: {e}")))?;
    let mut rows: Vec<RescaleRow> = Vec::new();
    for &m in &ms {
        let pair = rescale_family(&zeros, m)?;
        let identity_residual = pair.identity_residual()?;
        let distance = pair.polynomial_distance()?;
        let (ratio, expected_ratio) = match rows.last() {
            Some(prev) => (Some(prev.distance / distance), Some((m / prev.m).powi(2))),
            None => (None, None),
        };
        rows.push(RescaleRow {
            m,
            critical: pair.critical()?,
            product: pair.product,
            identity_residual,
            identity_ok: identity_residual <= tol,
            distance,
            ratio,
            expected_ratio,
        });
    }
    let mut polynomial_quotients = poly_smale_quotients(&zeros)?.values;
    polynomial_quotients.sort_by(f64::total_cmp);
    let ok = rows.iter().all(|r| r.identity_ok);
    if !ok {
        eprintln!("rescaling identity residual exceeds {tol:e}");
    }
    let mut table = Table::new(vec![
        "m",
        "index",
        "c_re",
        "c_im",
        "blaschke_quotient",
        "scaled_quotient",
        "identity_residual",
        "distance",
        "ratio",
        "expected_ratio",
    ]);
    let opt = |x: Option<f64>| x.map_or(String::new(), num);
    for row in &rows {
        for (i, c) in row.critical.iter().enumerate() {
            table.push(vec![
                num(row.m),
                i.to_string(),
                num(c.c.re),
                num(c.c.im),
                num(c.blaschke_quotient),
                num(c.scaled_quotient),
                num(row.identity_residual),
                num(row.distance),
                opt(row.ratio),
                opt(row.expected_ratio),
            ]);
        }
    }
    let result = RescaleResult {
        polynomial_zeros: records(&zeros),
        polynomial_quotients,
        tolerance: tol,
        rows,
    };
    let cfg = config(cli, Some(tol), json!({ "zeros": records(&zeros), "m": ms }));
    finish(
        cli,
        start,
        Artifact {
            command: "rescale",
            config: cfg,
            result: &result,
            table,
        },
        None,
    )?;
    Ok(if ok { Status::Ok } else { Status::Unresolved })
}

#[derive(Serialize)]
struct SearchOutput {
    #[serde(flatten)]
    result: SearchResult,
    /// `|recomputed value - best_value|` for the returned product.
    certificate_error: f64,
    certificate_valid: bool,
}

fn search(cli: &Cli, args: &SearchArgs, start: Instant) -> Result<Status, CliError> {
    let tol = cli.global.tol.unwrap_or(CERTIFICATE_TOL);
    let objective = match args.target {
        SearchTarget::Kn => Objective::MaxS,
        SearchTarget::Ln => Objective::MinT,
    };
    let search_config = SearchConfig {
        restarts: args.restarts,
        budget: args.budget,
        seed: cli.global.seed,
        ..SearchConfig::default()
    };
    let result = estimate(args.n, objective, &search_config)?;
    let recheck = smale_quotients(&result.product)?;
    let value = match objective {
        Objective::MaxS => recheck.s,
        Objective::MinT => recheck.t,
    };
    let certificate_error = (value - result.best_value).abs();
    let valid = certificate_error <= tol;
    if result.s_exceeds_one {
        eprintln!(
            "FOUND S > 1: S = {} for n = {} (restart {})",
            result.best_value, result.n, result.best_restart
        );
    }
    if !valid {
        eprintln!("certificate does not revalidate: error {certificate_error:e}");
    }
    let id = format!("{:?}-n{}", args.target, args.n).to_lowercase();
    let mut table = Table::new(vec![
        "product_id",
        "objective",
        "best_value",
        "index",
        "zeta_re",
        "zeta_im",
        "quotient",
    ]);
    for (i, q) in result.report.quotients.iter().enumerate() {
        table.push(vec![
            id.clone(),
            if objective == Objective::MaxS {
                "max_S"
            } else {
                "min_T"
            }
            .into(),
            num(result.best_value),
            i.to_string(),
            num(q.zeta.re),
            num(q.zeta.im),
            num(q.value),
        ]);
    }
    let cfg = config(
        cli,
        Some(tol),
        json!({ "target": id.split('-').next(), "n": args.n, "search": search_config }),
    );
    let product = result.product.clone();
    let output = SearchOutput {
        result,
        certificate_error,
        certificate_valid: valid,
    };
    finish(
        cli,
        start,
        Artifact {
            command: "search",
            config: cfg,
            result: &output,
            table,
        },
        Some(&product),
    )?;
    Ok(if valid {
        Status::Ok
    } else {
        Status::Unresolved
    })
}
