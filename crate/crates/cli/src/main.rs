//! `hwf`: construct, verify and query 2-factorizations.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 parameter or hypothesis
//! rejection, 3 I/O or parse error.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand, ValueEnum};
use hwf_core::base::{appendix_c12_3, appendix_c12_n, decompose_cxn};
use hwf_core::certificate::CertificateFile;
use hwf_core::composition::{
    c3n_driver, cvresult, km_uniform_driver, kvm_nonuniform_driver, main_theorem, scale_zw,
    scale_zw_4, triangle_blowup, ClassConfig, CvCase, DriverMode, DriverOutcome, HypothesisReport,
    DEFAULT_VERTEX_CAP,
};
use hwf_core::four_part::decompose_c4n;
use hwf_core::ingredients::{
    ingest_design, op_feasible, rgdd_feasible, Ingredient, IngredientRegistry, INGREDIENT_DIR_ENV,
};
use hwf_core::multivar::{
    decompose_4x_2xn_n, decompose_4x_xn_2n, decompose_4xy_2xn_yn, decompose_xy,
};
use hwf_core::verify::{verify_certificate, verify_file, VerificationReport};
use hwf_core::{ConstructError, DecompositionCertificate};

// stdout writes that stay quiet when the reader hangs up, e.g. `| head`
macro_rules! out {
    ($($t:tt)*) => {{
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}
macro_rules! outln {
    ($($t:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "hwf",
    version,
    about = "Cycle-factorizations of complete multipartite graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a decomposition and write its certificate.
    Construct {
        family: Family,
        #[command(flatten)]
        p: Params,
        #[command(flatten)]
        out: Output,
        /// Skip the verifier.
        #[arg(long)]
        no_verify: bool,
    },
    /// Check a certificate file.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Evaluate existence hypotheses without constructing anything.
    Feasible {
        driver: Driver,
        #[command(flatten)]
        p: Params,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Manage the ingredient registry.
    Ingredients {
        #[command(subcommand)]
        action: IngredientAction,
    },
}

#[derive(Subcommand)]
enum IngredientAction {
    /// Show built-in and ingested ingredients.
    List,
    /// Validate a design file and copy it into the ingredient directory.
    Import {
        file: PathBuf,
        /// Target directory; defaults to $HWF_INGREDIENT_DIR.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
    /// Write an ingredient as a certificate: `--v --n` for a factorization
    /// of K_v, `--h --u` for a 3-RGDD.
    Export {
        #[command(flatten)]
        p: Params,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Cxn,
    C4n,
    Xy,
    #[value(name = "4x-2xn-n")]
    FourX2xnN,
    #[value(name = "4x-xn-2n")]
    FourXXn2n,
    #[value(name = "4xy")]
    FourXy,
    Zw,
    #[value(name = "cvresult-a")]
    CvA,
    #[value(name = "cvresult-b")]
    CvB,
    #[value(name = "cvresult-c")]
    CvC,
    #[value(name = "cvresult-d")]
    CvD,
    #[value(name = "cvresult-e")]
    CvE,
    #[value(name = "cvresult-f")]
    CvF,
    /// Any case, chosen by --case.
    Cvresult,
    Kvm,
    KvumMain,
    RgddBlowup,
    AppendixC12,
    C3n,
    Km,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Driver {
    /// C_n-factorization of K_v.
    Op,
    /// 3-RGDD of type h^u.
    Rgdd,
    C3n,
    Km,
    Kvm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args, Default)]
struct Params {
    /// Comma-separated for kvum-main and the kvm driver.
    #[arg(long, value_delimiter = ',')]
    x: Vec<u32>,
    /// Comma-separated for kvum-main and the kvm driver.
    #[arg(long, value_delimiter = ',')]
    y: Vec<u32>,
    #[arg(long)]
    z: Option<u32>,
    #[arg(long)]
    w: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    v: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    h: Option<u32>,
    #[arg(long)]
    u: Option<u32>,
    /// Case a-f for `cvresult`.
    #[arg(long)]
    case: Option<CvCase>,
    /// 4-fold form for `zw`.
    #[arg(long)]
    four: bool,
    /// Node budget for the ingredient search.
    #[arg(long)]
    budget: Option<u64>,
    /// Vertex cap for the complete-graph drivers.
    #[arg(long)]
    cap: Option<u64>,
}

#[derive(Args)]
struct Output {
    /// Certificate destination; `-` is stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Store difference-developed factors as base arcs.
    #[arg(long)]
    compact: bool,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl From<ConstructError> for Failure {
    fn from(e: ConstructError) -> Self {
        let code = match e {
            ConstructError::Internal(_) | ConstructError::Graph(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure {
            code: 3,
            msg: format!("{e:#}"),
        }
    }
}

fn reject(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        msg: msg.into(),
    }
}

type Res<T> = Result<T, Failure>;

impl Params {
    fn get(&self, name: &str, v: Option<u32>) -> Res<u32> {
        v.ok_or_else(|| reject(format!("missing --{name}")))
    }
    fn x(&self) -> Res<u32> {
        self.x.first().copied().ok_or_else(|| reject("missing --x"))
    }
    fn y(&self) -> Res<u32> {
        self.y.first().copied().ok_or_else(|| reject("missing --y"))
    }
    fn y_or_1(&self) -> u32 {
        self.y.first().copied().unwrap_or(1)
    }
    fn z(&self) -> Res<u32> {
        self.get("z", self.z)
    }
    fn w(&self) -> Res<u32> {
        self.get("w", self.w)
    }
    fn n(&self) -> Res<u32> {
        self.get("n", self.n)
    }
    fn m(&self) -> Res<u32> {
        self.get("m", self.m)
    }
    fn v(&self) -> Res<u32> {
        self.get("v", self.v)
    }
    fn s(&self) -> Res<u32> {
        self.get("s", self.s)
    }
    fn h(&self) -> Res<u32> {
        self.get("h", self.h)
    }
    fn u(&self) -> Res<u32> {
        self.get("u", self.u)
    }

    fn registry(&self) -> Res<IngredientRegistry> {
        let mut reg = IngredientRegistry::from_env()?;
        if let Some(b) = self.budget {
            reg.search_budget = b;
        }
        Ok(reg)
    }

    fn config(&self) -> Res<ClassConfig> {
        Ok(ClassConfig::new(
            self.x()?,
            self.y()?,
            self.z.unwrap_or(1),
            self.w.unwrap_or(1),
        ))
    }
}

fn outcome_cert(out: DriverOutcome) -> Res<DecompositionCertificate> {
    match out {
        DriverOutcome::Constructed(_, c) => Ok(*c),
        other => Err(reject(format!(
            "hypothesis violated: {}\n{}",
            other.report().failed().unwrap_or("?"),
            other.report().to_text()
        ))),
    }
}

fn build(family: Family, p: &Params) -> Res<DecompositionCertificate> {
    let case = |c| -> Res<DecompositionCertificate> {
        Ok(cvresult(
            c,
            p.x()?,
            p.y_or_1(),
            p.z.unwrap_or(1),
            p.w.unwrap_or(1),
            p.n()?,
            p.s()?,
        )?)
    };
    let mode = DriverMode::Construct {
        cap: p.cap.unwrap_or(DEFAULT_VERTEX_CAP),
    };
    let cert = match family {
        Family::Cxn => decompose_cxn(p.x()?, p.n()?, p.s()?)?,
        Family::C4n => decompose_c4n(p.n()?, p.s()?)?,
        Family::Xy => decompose_xy(p.x()?, p.y()?, p.n()?, p.s()?)?,
        Family::FourX2xnN => decompose_4x_2xn_n(p.x()?, p.n()?, p.s()?)?,
        Family::FourXXn2n => decompose_4x_xn_2n(p.x()?, p.n()?, p.s()?)?,
        Family::FourXy => decompose_4xy_2xn_yn(p.x()?, p.y()?, p.n()?, p.s()?)?,
        Family::Zw if p.four => scale_zw_4(p.z()?, p.w()?, p.n()?)?,
        Family::Zw => scale_zw(p.z()?, p.w()?, p.n()?)?,
        Family::CvA => case(CvCase::A)?,
        Family::CvB => case(CvCase::B)?,
        Family::CvC => case(CvCase::C)?,
        Family::CvD => case(CvCase::D)?,
        Family::CvE => case(CvCase::E)?,
        Family::CvF => case(CvCase::F)?,
        Family::Cvresult => case(p.case.ok_or_else(|| reject("missing --case"))?)?,
        Family::Kvm => {
            let cfg = p.config()?;
            let (n, m, s) = (p.n()?, p.m()?, p.s()?);
            let v = p.v.unwrap_or(cfg.v());
            let r = match p.r {
                Some(r) => r,
                None => (v * (m.saturating_sub(1) / 2))
                    .checked_sub(s)
                    .ok_or_else(|| reject(format!("s={s} exceeds v(m-1)/2")))?,
            };
            main_theorem(&p.registry()?, v, m, n, &[cfg], s, r)?
        }
        Family::KvumMain => {
            let reg = p.registry()?;
            outcome_cert(kvm_nonuniform_driver(
                &reg,
                p.v()?,
                p.m()?,
                p.n()?,
                &p.x,
                &p.y,
                p.s()?,
                mode,
            )?)?
        }
        Family::RgddBlowup => triangle_blowup(&p.registry()?, p.h()?, p.u()?, p.m()?, p.s()?)?,
        Family::AppendixC12 => match p.n()? {
            3 => appendix_c12_3(),
            n => appendix_c12_n(n)?,
        },
        Family::C3n => {
            let reg = p.registry()?;
            let w = p.w.unwrap_or(1);
            outcome_cert(c3n_driver(
                &reg,
                p.x()?,
                p.y()?,
                p.n()?,
                p.h()?,
                p.u()?,
                w,
                p.s()?,
                mode,
            )?)?
        }
        Family::Km => {
            let reg = p.registry()?;
            outcome_cert(km_uniform_driver(
                &reg,
                p.m()?,
                p.x()?,
                p.y()?,
                p.s()?,
                mode,
            )?)?
        }
    };
    Ok(cert)
}

fn print_report(report: &VerificationReport, format: Format) {
    match format {
        Format::Text => out!("{}", report.to_text()),
        Format::Json => outln!(
            "{}",
            serde_json::to_string_pretty(report).expect("report serializes")
        ),
    }
}

fn write_output(path: &Path, text: &str) -> anyhow::Result<()> {
    if path == Path::new("-") {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.write_all(b"\n")?;
        return Ok(());
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn construct(family: Family, p: &Params, out: &Output, no_verify: bool) -> Res<u8> {
    let cert = build(family, p)?;
    if let Some(path) = &out.output {
        write_output(path, &cert.to_json(out.compact))?;
    }
    if no_verify {
        if out.output.as_deref() != Some(Path::new("-")) {
            outln!(
                "{} on {} (not verified)",
                cert.census_string(),
                cert.host.describe()
            );
        }
        return Ok(0);
    }
    let report = verify_certificate(&cert);
    if out.output.as_deref() == Some(Path::new("-")) {
        eprint!("{}", report.to_text());
    } else {
        print_report(&report, out.format);
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn verify(file: &Path, format: Format) -> Res<u8> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let parsed = CertificateFile::from_json(&text).map_err(|e| Failure {
        code: 3,
        msg: format!(
            "{}: line {}, column {}: {e}",
            file.display(),
            e.line(),
            e.column()
        ),
    })?;
    let report = verify_file(&parsed);
    print_report(&report, format);
    Ok(if report.passed() { 0 } else { 1 })
}

fn simple_report(driver: &'static str, checks: Vec<(String, bool)>) -> HypothesisReport {
    HypothesisReport {
        driver,
        checks,
        notes: Vec::new(),
    }
}

fn feasible(driver: Driver, p: &Params, format: Format) -> Res<u8> {
    let reg = p.registry()?;
    let report = match driver {
        Driver::Op => {
            let (v, n) = (p.v()?, p.n()?);
            let mut checks = vec![
                ("n >= 3".to_string(), n >= 3),
                ("n divides v".to_string(), n > 0 && v % n == 0),
            ];
            if (v, n) == (6, 3) || (v, n) == (12, 3) {
                checks.push((format!("excluded pair ({v},{n})"), false));
            }
            let rep = simple_report("op", checks);
            debug_assert_eq!(rep.passed(), op_feasible(v, n));
            rep
        }
        Driver::Rgdd => {
            let (h, u) = (p.h()?, p.u()?);
            let mut checks = vec![
                ("u >= 3".to_string(), u >= 3),
                (
                    "h(u-1) even".to_string(),
                    (h * u.saturating_sub(1)) % 2 == 0,
                ),
                ("hu = 0 mod 3".to_string(), (h * u) % 3 == 0),
            ];
            for pair in [(2, 3), (2, 6), (6, 3)] {
                if (h, u) == pair {
                    checks.push((format!("excluded type {}^{}", pair.0, pair.1), false));
                }
            }
            let rep = simple_report("rgdd", checks);
            debug_assert_eq!(rep.passed(), rgdd_feasible(h, u, 1));
            rep
        }
        Driver::C3n => {
            let w = p.w.unwrap_or(1);
            c3n_driver(
                &reg,
                p.x()?,
                p.y()?,
                p.n()?,
                p.h()?,
                p.u()?,
                w,
                p.s()?,
                DriverMode::Feasibility,
            )?
            .report()
            .clone()
        }
        Driver::Km => km_uniform_driver(
            &reg,
            p.m()?,
            p.x()?,
            p.y()?,
            p.s()?,
            DriverMode::Feasibility,
        )?
        .report()
        .clone(),
        Driver::Kvm => kvm_nonuniform_driver(
            &reg,
            p.v()?,
            p.m()?,
            p.n()?,
            &p.x,
            &p.y,
            p.s()?,
            DriverMode::Feasibility,
        )?
        .report()
        .clone(),
    };
    match format {
        Format::Text => out!("{}", report.to_text()),
        Format::Json => {
            let checks: Vec<_> = report
                .checks
                .iter()
                .map(|(name, ok)| serde_json::json!({ "hypothesis": name, "holds": ok }))
                .collect();
            let v = serde_json::json!({
                "driver": report.driver,
                "feasible": report.passed(),
                "checks": checks,
                "notes": report.notes,
            });
            outln!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
    }
    Ok(if report.passed() { 0 } else { 2 })
}

fn ingredients(action: &IngredientAction) -> Res<u8> {
    match action {
        IngredientAction::List => {
            for line in IngredientRegistry::from_env()?.describe() {
                outln!("{line}");
            }
            Ok(0)
        }
        IngredientAction::Import { file, dir } => {
            let ing = ingest_design(file)?;
            let dir = match dir {
                Some(d) => d.clone(),
                None => std::env::var_os(INGREDIENT_DIR_ENV)
                    .map(PathBuf::from)
                    .ok_or_else(|| Failure {
                        code: 3,
                        msg: format!("no --dir given and {INGREDIENT_DIR_ENV} is unset"),
                    })?,
            };
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let name = file
                .file_name()
                .map(PathBuf::from)
                .unwrap_or_else(|| "ingredient.json".into());
            let dest = dir.join(name);
            fs::copy(file, &dest).with_context(|| format!("copying to {}", dest.display()))?;
            outln!("imported {} as {}", ing.describe(), dest.display());
            Ok(0)
        }
        IngredientAction::Export { p, out } => {
            let reg = p.registry()?;
            let ing = match (p.h, p.u, p.v, p.n) {
                (Some(h), Some(u), _, _) => Ingredient::Rgdd(reg.rgdd(h, u)?),
                (_, _, Some(v), Some(n)) => Ingredient::Complete(reg.complete_factorization(v, n)?),
                _ => return Err(reject("export needs --h and --u, or --v and --n")),
            };
            let cert = match &ing {
                Ingredient::Complete(c) => c.certificate.clone(),
                Ingredient::Rgdd(d) => d.to_certificate()?,
            };
            let path = out.output.clone().unwrap_or_else(|| PathBuf::from("-"));
            write_output(&path, &cert.to_json(out.compact))?;
            if path != Path::new("-") {
                outln!("exported {}", ing.describe());
            }
            Ok(0)
        }
    }
}

fn run(cli: Cli) -> Res<u8> {
    match &cli.command {
        Command::Construct {
            family,
            p,
            out,
            no_verify,
        } => construct(*family, p, out, *no_verify),
        Command::Verify { file, format } => verify(file, *format),
        Command::Feasible { driver, p, format } => feasible(*driver, p, *format),
        Command::Ingredients { action } => ingredients(action),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
