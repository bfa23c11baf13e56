//! Command-line front end for `oscover-core`.
//!
//! [`run`] parses an argument vector and returns a [`CommandResult`]; the
//! binary only prints it and exits with [`CommandResult::exit_code`].

use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use oscover_core::builder::EpsConvention;
use oscover_core::enumerate::OutputFormat;
use oscover_core::{
    adjunction_genus, build_family, certify_family, check_cover, enumerate_families, intersect,
    run_suite, CoverSpec, EpsilonChoice, EpsilonFamily, Error, ErrorKind, MuVector, PicClass,
    SweepConfig, TypeVector,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    DomainError,
    Inconsistency,
    UsageError,
    DataError,
    InternalError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::DomainError => 1,
            Status::UsageError => 2,
            Status::Inconsistency => 3,
            Status::DataError => 4,
            Status::InternalError => 70,
        }
    }

    fn of(kind: ErrorKind) -> Status {
        match kind {
            ErrorKind::Domain => Status::DomainError,
            ErrorKind::Inconsistency => Status::Inconsistency,
            ErrorKind::Data => Status::DataError,
            ErrorKind::Internal => Status::InternalError,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
}

impl Diagnostic {
    fn error(code: &str, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code: code.to_string(),
            message: message.into(),
        }
    }
}

/// Outcome of one invocation. A string payload is printed verbatim, anything
/// else as pretty JSON.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<Diagnostic>,
}

impl CommandResult {
    fn ok(payload: Value) -> Self {
        CommandResult {
            status: Status::Ok,
            payload,
            diagnostics: Vec::new(),
        }
    }

    fn failure(status: Status, payload: Value, diagnostics: Vec<Diagnostic>) -> Self {
        CommandResult {
            status,
            payload,
            diagnostics,
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Self::failure(
            Status::UsageError,
            Value::Null,
            vec![Diagnostic::error("usage", message)],
        )
    }

    fn from_error(e: &Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Domain => "domain",
            ErrorKind::Inconsistency => "inconsistency",
            ErrorKind::Data => "data",
            ErrorKind::Internal => "internal",
        };
        Self::failure(
            Status::of(e.kind()),
            Value::Null,
            vec![Diagnostic::error(code, e.to_string())],
        )
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    /// Text written to stdout.
    pub fn stdout(&self) -> String {
        match &self.payload {
            Value::Null => String::new(),
            Value::String(s) => s.clone(),
            other => {
                let mut s = serde_json::to_string_pretty(other).expect("JSON values serialize");
                s.push('\n');
                s
            }
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "oscover",
    version,
    about = "Divisor calculus for hyperelliptic d-osculating covers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the necessary conditions on (d, n, ρ, g, γ)
    CheckCover(CheckCoverArgs),
    /// Build and verify one family of covers
    BuildFamily(BuildFamilyArgs),
    /// Sweep all constructed families within bounds
    Enumerate(EnumerateArgs),
    /// Intersection number of two classes
    Intersect(IntersectArgs),
    /// Arithmetic genus of a class by adjunction
    Genus(GenusArgs),
    /// Run the full consistency suite
    VerifyPaper(VerifyArgs),
}

#[derive(Args, Debug)]
struct CheckCoverArgs {
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
    #[arg(long, allow_hyphen_values = true)]
    n: i64,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    rho: i64,
    #[arg(long, allow_hyphen_values = true)]
    g: i64,
    /// type vector a,b,c,e over ω0..ω3
    #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
    gamma: [i64; 4],
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    A,
    B,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    French,
    English,
}

#[derive(Args, Debug)]
struct BuildFamilyArgs {
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
    #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
    mu: [i64; 4],
    #[arg(long, ignore_case = true, required_unless_present = "eps")]
    family: Option<FamilyArg>,
    #[arg(long, required_unless_present = "eps")]
    k: Option<usize>,
    #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
    signs: Option<[i64; 4]>,
    /// explicit ε vector, read in the convention given by --eps-convention
    #[arg(long, value_parser = parse_vec4, allow_hyphen_values = true)]
    eps: Option<[i64; 4]>,
    #[arg(long, value_enum, default_value = "french")]
    eps_convention: ConventionArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long, allow_hyphen_values = true)]
    d_max: i64,
    #[arg(long, allow_hyphen_values = true)]
    mu_max: i64,
    #[arg(long, allow_hyphen_values = true)]
    genus_max: i64,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// write the table here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IntersectArgs {
    #[arg(long, value_parser = parse_class)]
    a: PicClass,
    #[arg(long, value_parser = parse_class)]
    b: PicClass,
}

#[derive(Args, Debug)]
struct GenusArgs {
    #[arg(long, value_parser = parse_class)]
    class: PicClass,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    d_max: i64,
    #[arg(long, allow_hyphen_values = true)]
    mu_max: i64,
}

fn parse_vec4(s: &str) -> Result<[i64; 4], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!(
            "expected 4 comma-separated integers, got {}",
            parts.len()
        ));
    }
    let mut out = [0; 4];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p.parse().map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok(out)
}

fn parse_class(s: &str) -> Result<PicClass, String> {
    serde_json::from_str(s).map_err(|e| e.to_string())
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            return match e.kind() {
                K::DisplayHelp | K::DisplayVersion => {
                    CommandResult::ok(Value::String(e.to_string()))
                }
                _ => CommandResult::usage(e.render().to_string().trim_end()),
            };
        }
    };
    let outcome = match cli.command {
        Command::CheckCover(a) => cmd_check_cover(a),
        Command::BuildFamily(a) => cmd_build_family(a),
        Command::Enumerate(a) => cmd_enumerate(a),
        Command::Intersect(a) => intersect(&a.a, &a.b).map(|x| CommandResult::ok(json!(x))),
        Command::Genus(a) => adjunction_genus(&a.class).map(|x| CommandResult::ok(json!(x))),
        Command::VerifyPaper(a) => cmd_verify(a),
    };
    outcome.unwrap_or_else(|e| CommandResult::from_error(&e))
}

fn to_value<T: Serialize>(x: &T) -> oscover_core::Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Internal(e.to_string()))
}

fn cmd_check_cover(a: CheckCoverArgs) -> oscover_core::Result<CommandResult> {
    let spec = CoverSpec::new(a.d, a.n, a.rho, a.g, TypeVector::new(a.gamma)?)?;
    let report = check_cover(&spec);
    let payload = json!({ "cover": to_value(&spec)?, "report": to_value(&report)? });
    if report.passed {
        return Ok(CommandResult::ok(payload));
    }
    let diagnostics = report
        .conditions
        .iter()
        .filter(|c| !c.holds)
        .map(|c| {
            Diagnostic::error(
                "condition-violated",
                format!("{:?}: {}", c.condition, c.detail),
            )
        })
        .collect();
    Ok(CommandResult::failure(
        Status::DomainError,
        payload,
        diagnostics,
    ))
}

fn cmd_build_family(a: BuildFamilyArgs) -> oscover_core::Result<CommandResult> {
    let mu = MuVector::new(a.mu)?;
    let named = match (a.family, a.k) {
        (Some(f), Some(k)) => {
            let family = match f {
                FamilyArg::A => EpsilonFamily::A,
                FamilyArg::B => EpsilonFamily::B,
            };
            Some(EpsilonChoice::new(family, k, a.signs.unwrap_or([1; 4]))?)
        }
        (None, None) => None,
        _ => return Ok(CommandResult::usage("--family and --k go together")),
    };
    let eps = match (named, a.eps) {
        (Some(choice), None) => choice,
        (named, Some(v)) => {
            let convention = match a.eps_convention {
                ConventionArg::French => EpsConvention::French,
                ConventionArg::English => EpsConvention::English,
            };
            let found = EpsilonChoice::identify(a.d, v, convention)?;
            if let Some(choice) = named {
                if choice.epsilon(a.d) != found.epsilon(a.d) {
                    return Err(Error::InvalidArgument(format!(
                        "--eps gives ε = {:?} but --family/--k/--signs give {:?}",
                        found.epsilon(a.d),
                        choice.epsilon(a.d)
                    )));
                }
                choice
            } else {
                found
            }
        }
        (None, None) => return Ok(CommandResult::usage("give --family and --k, or --eps")),
    };
    let spec = build_family(a.d, &mu, &eps)?;
    let certs = certify_family(&spec)?;
    let mut payload = to_value(&spec)?;
    payload["certificates"] = to_value(&certs)?;
    Ok(CommandResult::ok(payload))
}

fn cmd_enumerate(a: EnumerateArgs) -> oscover_core::Result<CommandResult> {
    let format = match a.format {
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Json => OutputFormat::Json,
    };
    let cfg = SweepConfig::new(a.d_max, a.mu_max, a.genus_max)?.with_format(format);
    let table = enumerate_families(&cfg)?;
    let Some(path) = a.out else {
        return Ok(CommandResult::ok(match format {
            OutputFormat::Csv => Value::String(table.to_csv_string()?),
            OutputFormat::Json => to_value(&table)?,
        }));
    };
    let file = File::create(&path).map_err(|e| io_error(&path, e))?;
    let mut w = BufWriter::new(file);
    match format {
        OutputFormat::Csv => table.write_csv(&mut w)?,
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut w, &table).map_err(|e| io_error(&path, e.into()))?
        }
    }
    std::io::Write::flush(&mut w).map_err(|e| io_error(&path, e))?;
    Ok(CommandResult::ok(json!({
        "out": path.display().to_string(),
        "format": to_value(&format)?,
        "rows": table.rows.len(),
    })))
}

fn io_error(path: &std::path::Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

fn cmd_verify(a: VerifyArgs) -> oscover_core::Result<CommandResult> {
    let report = run_suite(a.d_max, a.mu_max)?;
    let payload = to_value(&report)?;
    if report.passed {
        return Ok(CommandResult::ok(payload));
    }
    let diagnostics = report
        .checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| {
            Diagnostic::error(
                "check-failed",
                format!(
                    "{}: {} of {} cases failed",
                    c.name, c.failure_count, c.cases
                ),
            )
        })
        .collect();
    Ok(CommandResult::failure(
        Status::Inconsistency,
        payload,
        diagnostics,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vec4_parsing() {
        assert_eq!(parse_vec4("0,5,5,5"), Ok([0, 5, 5, 5]));
        assert_eq!(parse_vec4(" 1, -1 ,1,1"), Ok([1, -1, 1, 1]));
        assert!(parse_vec4("1,2,3").is_err());
        assert!(parse_vec4("1,2,3,4,5").is_err());
        assert!(parse_vec4("1,2,,4").is_err());
    }

    #[test]
    fn class_parsing_rejects_unknown_fields() {
        assert!(parse_class(r#"{"c":1,"fibers":[0,0,0,0],"s":[0,0,0,0],"r":[0,0,0,0]}"#).is_ok());
        assert!(
            parse_class(r#"{"c":1,"fibers":[0,0,0,0],"s":[0,0,0,0],"r":[0,0,0,0],"x":1}"#).is_err()
        );
    }

    #[test]
    fn exit_codes_are_distinct() {
        let all = [
            Status::Ok,
            Status::DomainError,
            Status::Inconsistency,
            Status::UsageError,
            Status::DataError,
            Status::InternalError,
        ];
        let codes: std::collections::BTreeSet<_> = all.iter().map(|s| s.exit_code()).collect();
        assert_eq!(codes.len(), all.len());
        assert!(all
            .iter()
            .all(|s| (s.exit_code() == 0) == (*s == Status::Ok)));
    }

    #[test]
    fn stdout_rendering() {
        assert_eq!(CommandResult::ok(json!(7)).stdout(), "7\n");
        assert_eq!(
            CommandResult::ok(Value::String("a,b\n".into())).stdout(),
            "a,b\n"
        );
        assert_eq!(CommandResult::usage("x").stdout(), "");
    }
}
