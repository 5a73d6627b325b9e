use std::io::{Read, Write};

use rand::SeedableRng;
use serde::Serialize;

use lllsample::generate::random_regular_k_cnf;
use lllsample::io::{emit_samples, parse_instance, SampleMetadata};
use lllsample::projection::verify_entropy_criterion;
use lllsample::regimes::{
    check_instance, check_projection_precondition, ProjectionPrecondition, RegimeParams,
};
use lllsample::sampler::{SamplerRng, Workspace};
use lllsample::verify::{verify_instance, VerifyConfig};
use lllsample::{
    auto_scheme, compute_stats, derive_schedule, Constructor, CspFormula, EntropyReport, Error,
    FormulaStats, InstanceClass, InstanceDocument, InstanceKind, Mode, ProjectionScheme,
    RegimeCheck, SamplerContext, SamplerSchedule, ScheduleRequest,
};

use crate::args::{
    BenchArgs, CheckArgs, Command, ProjectArgs, ProjectionArgs, ReportFormat, SampleArgs,
    ScheduleArgs, VerifyArgs,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for regime and precondition failures, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::RegimeViolated(_) | Error::PreconditionViolated(_)) => 2,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(source: std::io::Error) -> Self {
        CliError::Io {
            path: "<stdout>".into(),
            source,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(command: Command, out: &mut dyn Write) -> Result<u8> {
    match command {
        Command::Check(a) => check(&a, out),
        Command::Project(a) => project(&a, out),
        Command::Sample(a) => sample(&a, out),
        Command::Verify(a) => verify(&a, out),
        Command::Bench(a) => bench(&a, out),
    }
}

fn read_text(path: &str) -> Result<String> {
    let io_err = |source| CliError::Io {
        path: path.to_string(),
        source,
    };
    if path == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(io_err)?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).map_err(io_err)
    }
}

fn load_instance(path: &str) -> Result<InstanceDocument> {
    Ok(parse_instance(&read_text(path)?)?)
}

/// Reads a scheme from a text line file or from the JSON written by
/// `project --format json`.
fn load_scheme(path: &str, formula: &CspFormula) -> Result<ProjectionScheme> {
    let text = read_text(path)?;
    let line = if text.trim_start().starts_with('{') {
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
        value["scheme"]
            .as_str()
            .ok_or_else(|| CliError::Usage(format!("{path}: no \"scheme\" string")))?
            .to_string()
    } else {
        text
    };
    Ok(ProjectionScheme::parse_line(&line, formula.domain_sizes())?)
}

fn alpha_beta(class: &InstanceClass, alpha: Option<f64>, beta: Option<f64>) -> (f64, f64) {
    let params = RegimeParams::for_class(class, None);
    (alpha.unwrap_or(params.alpha), beta.unwrap_or(params.beta))
}

fn construction_rng(seed: u64) -> SamplerRng {
    SamplerRng::seed_from_u64(seed)
}

fn print_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    writeln!(out, "{text}")?;
    Ok(())
}

#[derive(Serialize)]
struct CheckReport {
    kind: InstanceKind,
    class: InstanceClass,
    stats: FormulaStats,
    regime: RegimeCheck,
    projection: ProjectionPrecondition,
    warnings: Vec<String>,
}

fn check(args: &CheckArgs, out: &mut dyn Write) -> Result<u8> {
    let doc = load_instance(&args.input.input)?;
    let class = doc.class();
    let stats = compute_stats(&doc.formula);
    let regime = check_instance(&class, &stats, args.zeta)?;
    let (alpha, beta) = alpha_beta(&class, args.alpha, args.beta);
    let projection = check_projection_precondition(&class, &stats, alpha, beta)?;
    let code = if regime.pass { 0 } else { 2 };
    let report = CheckReport {
        kind: doc.kind(),
        class,
        stats,
        regime,
        projection,
        warnings: doc.warnings,
    };
    match args.format {
        ReportFormat::Json => print_json(out, &report)?,
        ReportFormat::Text => write_check_text(&report, out)?,
    }
    Ok(code)
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn write_check_text(r: &CheckReport, out: &mut dyn Write) -> Result<()> {
    let s = &r.stats;
    writeln!(out, "class: {}", r.class.name())?;
    writeln!(
        out,
        "n = {}, m = {}, D = {}, k = {}, q = {}, d = {}, log2(1/p) = {:.6}",
        s.num_vars,
        s.num_constraints,
        s.max_degree,
        s.max_width,
        s.max_domain,
        s.max_occurrence,
        s.log2_inv_p
    )?;
    writeln!(out, "regime: {}", pass_word(r.regime.pass))?;
    for i in r.regime.inequalities.iter().chain(&r.regime.simplified) {
        writeln!(
            out,
            "  [{}] {}: lhs {:.6}, rhs {:.6}, margin {:.6}",
            pass_word(i.pass),
            i.text,
            i.lhs,
            i.rhs,
            i.margin
        )?;
    }
    for note in &r.regime.notes {
        writeln!(out, "  note: {note}")?;
    }
    let p = &r.projection;
    let applicable = p
        .applicable
        .map_or("none".to_string(), |c| format!("{c:?}").to_lowercase());
    writeln!(
        out,
        "projection (alpha = {:.6}, beta = {:.6}): {applicable}",
        p.alpha, p.beta
    )?;
    let interval = p.interval.iter().flatten();
    for i in std::iter::once(&p.general)
        .chain(interval)
        .chain(&p.marking)
    {
        writeln!(
            out,
            "  [{}] {}: margin {:.6}",
            pass_word(i.pass),
            i.text,
            i.margin
        )?;
    }
    for w in &r.warnings {
        writeln!(out, "warning: {w}")?;
    }
    Ok(())
}

struct BuiltScheme {
    scheme: ProjectionScheme,
    constructor: Option<Constructor>,
    warnings: Vec<String>,
}

/// `--scheme` if given, otherwise the class's constructor with failure
/// probability `ε/4`, seeded by `seed`.
fn resolve_scheme(
    doc: &InstanceDocument,
    projection: &ProjectionArgs,
    eps: f64,
    seed: u64,
    mode: Mode,
) -> Result<BuiltScheme> {
    if let Some(path) = &projection.scheme {
        return Ok(BuiltScheme {
            scheme: load_scheme(path, &doc.formula)?,
            constructor: None,
            warnings: Vec::new(),
        });
    }
    build_scheme(doc, projection.alpha, projection.beta, eps, seed, mode)
}

fn build_scheme(
    doc: &InstanceDocument,
    alpha: Option<f64>,
    beta: Option<f64>,
    eps: f64,
    seed: u64,
    mode: Mode,
) -> Result<BuiltScheme> {
    let class = doc.class();
    let (alpha, beta) = alpha_beta(&class, alpha, beta);
    let mut rng = construction_rng(seed);
    let auto = auto_scheme(&doc.formula, &class, alpha, beta, eps / 4.0, mode, &mut rng)?;
    Ok(BuiltScheme {
        scheme: auto.scheme,
        constructor: auto.constructor,
        warnings: auto.warnings,
    })
}

#[derive(Serialize)]
struct ProjectReport {
    scheme: String,
    constructor: Option<Constructor>,
    entropy: EntropyReport,
    warnings: Vec<String>,
}

fn project(args: &ProjectArgs, out: &mut dyn Write) -> Result<u8> {
    let doc = load_instance(&args.input.input)?;
    let (alpha, beta) = alpha_beta(&doc.class(), args.alpha, args.beta);
    let built = build_scheme(
        &doc,
        args.alpha,
        args.beta,
        args.eps,
        args.seed,
        args.mode.into(),
    )?;
    let entropy = verify_entropy_criterion(&doc.formula, &built.scheme, alpha, beta);
    let mut warnings = doc.warnings.clone();
    warnings.extend(built.warnings);
    let report = ProjectReport {
        scheme: built.scheme.to_line(),
        constructor: built.constructor,
        entropy,
        warnings,
    };
    match args.format {
        ReportFormat::Json => print_json(out, &report)?,
        ReportFormat::Text => write_project_text(&report, out)?,
    }
    Ok(0)
}

fn write_project_text(r: &ProjectReport, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "{}", r.scheme)?;
    let constructor = r.constructor.map_or("identity fallback".to_string(), |c| {
        format!("{c:?}").to_lowercase()
    });
    writeln!(out, "# constructor: {constructor}")?;
    let e = &r.entropy;
    writeln!(
        out,
        "# alpha = {:.6}, beta = {:.6}, balanced: {}",
        e.alpha, e.beta, e.balanced
    )?;
    let passing = e
        .constraints
        .iter()
        .filter(|c| c.upper_ok && c.lower_ok)
        .count();
    writeln!(
        out,
        "# entropy criterion: {} ({passing} of {} constraints)",
        pass_word(e.pass()),
        e.constraints.len()
    )?;
    let ratios = e.constraints.iter().filter(|c| c.total > 0.0);
    let upper = ratios
        .clone()
        .map(|c| c.upper_sum / c.total)
        .fold(f64::NAN, f64::max);
    let lower = ratios
        .map(|c| c.lower_sum / c.total)
        .fold(f64::NAN, f64::min);
    if !upper.is_nan() {
        writeln!(
            out,
            "# max upper ratio {upper:.6}, min lower ratio {lower:.6}"
        )?;
    }
    for w in &r.warnings {
        writeln!(out, "# warning: {w}")?;
    }
    Ok(())
}

fn schedule_request(s: &ScheduleArgs) -> ScheduleRequest {
    ScheduleRequest {
        eps: s.eps,
        zeta: s.zeta,
        eta: s.eta,
        steps: s.steps,
        seed: s.seed,
        mode: s.mode.into(),
    }
}

struct Prepared {
    doc: InstanceDocument,
    scheme: BuiltScheme,
    schedule: SamplerSchedule,
    warnings: Vec<String>,
}

fn prepare(input: &str, projection: &ProjectionArgs, s: &ScheduleArgs) -> Result<Prepared> {
    let doc = load_instance(input)?;
    let stats = compute_stats(&doc.formula);
    let derived = derive_schedule(&stats, &doc.class(), &schedule_request(s))?;
    let scheme = resolve_scheme(&doc, projection, s.eps, s.seed, s.mode.into())?;
    let mut warnings = doc.warnings.clone();
    warnings.extend(derived.warnings);
    warnings.extend(scheme.warnings.iter().cloned());
    Ok(Prepared {
        doc,
        scheme,
        schedule: derived.schedule,
        warnings,
    })
}

fn sample(args: &SampleArgs, out: &mut dyn Write) -> Result<u8> {
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let p = prepare(&args.input.input, &args.projection, &args.schedule)?;
    let ctx = SamplerContext::new(&p.doc.formula, &p.scheme.scheme)?;
    let reports = ctx.run_many(&p.schedule, args.samples, args.schedule.workers)?;
    let samples: Vec<Vec<u64>> = reports.iter().map(|r| r.assignment.clone()).collect();
    let mut meta = SampleMetadata::from_reports(args.schedule.seed, Some(p.schedule), &reports);
    meta.scheme = Some(p.scheme.scheme.to_line());
    meta.warnings = p.warnings;
    let format = args.output.into();
    if format == lllsample::SampleFormat::Lines {
        for w in &meta.warnings {
            eprintln!("warning: {w}");
        }
    }
    write!(out, "{}", emit_samples(&samples, format, &meta))?;
    Ok(0)
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<u8> {
    let p = prepare(&args.input.input, &args.projection, &args.schedule)?;
    let config = VerifyConfig {
        samples: args.samples,
        conditionings: args.conditionings,
        workers: args.schedule.workers,
        budget: args.budget,
        schedule: p.schedule,
    };
    let report = verify_instance(&p.doc.formula, &p.scheme.scheme, &config)?;
    match args.format {
        ReportFormat::Json => print_json(out, &report)?,
        ReportFormat::Text => {
            writeln!(out, "scheme: {}", p.scheme.scheme.to_line())?;
            writeln!(out, "solutions: {}", report.num_solutions)?;
            for c in &report.criteria {
                let status = if c.pass { "PASS" } else { "FAIL" };
                writeln!(out, "{status} {}: {}", c.name, c.detail)?;
            }
        }
    }
    Ok(if report.pass() { 0 } else { 1 })
}

pub const BENCH_HEADER: &str = "instance,n,D,k,step_us,scanned,giant,overflow";

struct BenchInstance {
    name: String,
    doc_class: InstanceClass,
    formula: CspFormula,
}

fn bench_instances(args: &BenchArgs) -> Result<Vec<BenchInstance>> {
    if let Some(path) = &args.input {
        let doc = load_instance(path)?;
        return Ok(vec![BenchInstance {
            name: path.clone(),
            doc_class: doc.class(),
            formula: doc.formula,
        }]);
    }
    let mut rng = construction_rng(args.seed);
    Ok([5, 10, 20, 40, 80]
        .into_iter()
        .map(|blocks| {
            let formula = random_regular_k_cnf(blocks, 20, 2, &mut rng);
            BenchInstance {
                name: format!("regular-20cnf-n{}", formula.num_vars()),
                doc_class: InstanceClass::Cnf { k: 20, d: 2 },
                formula,
            }
        })
        .collect())
}

/// One forced-mode chain of `T` steps per instance; counts are per step,
/// exceptions per 1000 steps.
fn bench(args: &BenchArgs, out: &mut dyn Write) -> Result<u8> {
    writeln!(out, "{BENCH_HEADER}")?;
    for inst in bench_instances(args)? {
        let stats = compute_stats(&inst.formula);
        let request = ScheduleRequest {
            eta: args.eta,
            steps: Some(args.steps),
            seed: args.seed,
            mode: Mode::Forced,
            ..Default::default()
        };
        let schedule = derive_schedule(&stats, &inst.doc_class, &request)?.schedule;
        let params = RegimeParams::for_class(&inst.doc_class, None);
        let mut rng = construction_rng(args.seed);
        let scheme = auto_scheme(
            &inst.formula,
            &inst.doc_class,
            params.alpha,
            params.beta,
            schedule.eps / 4.0,
            Mode::Forced,
            &mut rng,
        )?
        .scheme;
        let ctx = SamplerContext::new(&inst.formula, &scheme)?;
        let report = ctx.run(&schedule, &mut Workspace::new(), &mut rng);
        let calls = report.calls.max(1) as f64;
        writeln!(
            out,
            "{},{},{},{},{:.4},{:.3},{:.3},{:.3}",
            inst.name,
            stats.num_vars,
            stats.max_degree,
            stats.max_width,
            report.wall_time.as_secs_f64() * 1e6 / calls,
            report.constraints_scanned as f64 / calls,
            report.giant_components as f64 * 1000.0 / calls,
            report.rejection_overflows as f64 * 1000.0 / calls,
        )?;
    }
    Ok(0)
}
