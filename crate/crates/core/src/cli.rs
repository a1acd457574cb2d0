//! The `numfan` command line.
//!
//! ```text
//! numfan <statfan|numfan|sweep|count|nbm|check> --input FILE --tol a,b,...
//!        [--scale K | --scales K1,K2,...] [--standardize]
//!        [--strategy lex|deglex|degrevlex] [--format text|json]
//!        [--budget N] [--arith auto|exact|float]
//! ```
//!
//! Exit status: 0 on success, 2 on usage or input errors, 3 when the
//! enumeration budget is exhausted. `NUMFAN_BUDGET` replaces the default budget.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::design::{check_separation, read_design, read_tolerance, standardize};
use crate::fans::{
    nbm, numerical_algebraic_fan_family, numerical_fan, statistical_fan_with, Fan, FanOptions, NumericalFan,
    DEFAULT_BUDGET,
};
use crate::terms::{count_order_ideals, format_terms, OrderKind, Term, TermOrder};
use crate::{Arithmetic, Design, EmpiricalDesign, Error, Result};

pub const BUDGET_ENV: &str = "NUMFAN_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "numfan", version, about = "Statistical and numerical statistical fans of designs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Statistical fan: identifiable order ideals with n terms.
    Statfan(CommonArgs),
    /// Numerical statistical fan of (D, k·δ).
    Numfan(CommonArgs),
    /// One numerical fan per scale factor.
    Sweep(CommonArgs),
    /// Number of order ideals with n terms in d variables.
    Count(CountArgs),
    /// Numerical Buchberger–Möller for one term order.
    Nbm(NbmArgs),
    /// Input diagnostics: duplicates and δ-separation.
    Check(CommonArgs),
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Design as CSV, one point per row.
    #[arg(long)]
    input: PathBuf,
    /// Tolerance vector δ, one entry per coordinate.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "tol_file")]
    tol: Option<Vec<f64>>,
    /// Tolerance vector as a one-row CSV file.
    #[arg(long)]
    tol_file: Option<PathBuf>,
    /// Scale factor applied to δ.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true, conflicts_with = "scales")]
    scale: f64,
    /// Scale factors for `sweep`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    scales: Option<Vec<f64>>,
    /// Map every coordinate affinely onto [-1, 1] (δ is mapped along).
    #[arg(long)]
    standardize: bool,
    /// Order in which corner terms are tried, and the NBM term order.
    #[arg(long, default_value = "deglex")]
    strategy: OrderKind,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Maximum number of distinct order ideals visited.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, default_value = "auto")]
    arith: Arithmetic,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    terms: usize,
    /// Count nonempty order ideals with at most n terms.
    #[arg(long)]
    cumulative: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Args, Debug)]
struct NbmArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Also run every order in {lex, deglex, degrevlex} under every variable permutation.
    #[arg(long)]
    family: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Resolved settings shared by the design-based subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub input: PathBuf,
    pub tolerance: Option<Vec<f64>>,
    pub scale: f64,
    pub scales: Vec<f64>,
    pub standardize: bool,
    pub strategy: OrderKind,
    pub format: Format,
    pub budget: usize,
    pub arithmetic: Arithmetic,
}

impl RunConfig {
    fn from_args(args: CommonArgs) -> Result<Self> {
        let tolerance = match (args.tol, args.tol_file) {
            (Some(t), _) => Some(t),
            (None, Some(path)) => Some(read_tolerance(File::open(path)?)?),
            (None, None) => None,
        };
        let scales = args.scales.unwrap_or_else(|| vec![args.scale]);
        if scales.is_empty() || scales.iter().chain([&args.scale]).any(|k| !(k.is_finite() && *k > 0.0)) {
            return Err(Error::Usage("scale factors must be positive".into()));
        }
        Ok(RunConfig {
            input: args.input,
            tolerance,
            scale: args.scale,
            scales,
            standardize: args.standardize,
            strategy: args.strategy,
            format: args.format,
            budget: resolve_budget(args.budget)?,
            arithmetic: args.arith,
        })
    }

    fn design(&self) -> Result<Design> {
        read_design(File::open(&self.input)?)
    }

    /// The empirical design at scale `k`, standardised if requested.
    fn empirical(&self, design: &Design, required: bool, k: f64) -> Result<EmpiricalDesign> {
        let ed = match &self.tolerance {
            Some(t) => EmpiricalDesign::new(design.clone(), t.clone())?.scaled_tolerance(k)?,
            None if required => return Err(Error::Usage("a tolerance is required (--tol or --tol-file)".into())),
            None => EmpiricalDesign::exact(design.clone()),
        };
        if self.standardize {
            Ok(standardize(&ed)?.0)
        } else {
            Ok(ed)
        }
    }

    fn fan_options(&self, dim: usize) -> FanOptions {
        FanOptions {
            strategy: Some(TermOrder::new(self.strategy, dim)),
            arithmetic: self.arithmetic,
            budget: self.budget,
        }
    }
}

fn resolve_budget(flag: Option<usize>) -> Result<usize> {
    let budget = match (flag, std::env::var(BUDGET_ENV)) {
        (Some(b), _) => b,
        (None, Ok(v)) => v
            .trim()
            .parse()
            .map_err(|_| Error::Usage(format!("{BUDGET_ENV} must be a positive integer, got '{v}'")))?,
        (None, Err(_)) => DEFAULT_BUDGET,
    };
    if budget == 0 {
        return Err(Error::Usage("the budget must be positive".into()));
    }
    Ok(budget)
}

/// Output of one subcommand, in both formats.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => to_canonical_json(&self.json),
        }
    }
}

/// Pretty JSON with sorted keys (serde_json's default map is ordered).
pub fn to_canonical_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialise");
    s.push('\n');
    s
}

/// Rounds to 12 significant digits; non-finite values become `null`.
pub fn json_float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    json!(rounded)
}

fn text_float(x: f64) -> String {
    match json_float(x) {
        Value::Null if x.is_nan() => "nan".into(),
        Value::Null => if x > 0.0 { "inf" } else { "-inf" }.into(),
        v => {
            let s = v.to_string();
            s.strip_suffix(".0").map(str::to_owned).unwrap_or(s)
        }
    }
}

fn exponents(terms: &[Term]) -> Value {
    Value::Array(terms.iter().map(|t| json!(t.exponents())).collect())
}

fn design_json(design: &Design) -> Value {
    json!({ "n": design.n(), "d": design.d() })
}

fn histogram_json(h: &BTreeMap<usize, usize>) -> Value {
    Value::Object(h.iter().map(|(size, count)| (size.to_string(), json!(count))).collect())
}

fn fan_json(fan: &Fan) -> Value {
    Value::Array(
        fan.models()
            .iter()
            .map(|m| {
                json!({
                    "maximal_elements": exponents(&m.maximal_elements),
                    "size": m.size,
                    "condition_number": json_float(m.condition_number),
                })
            })
            .collect(),
    )
}

fn fan_text(fan: &Fan, out: &mut String) {
    for m in fan.models() {
        out.push_str(&format!(
            "  {}  size {}  cond {}\n",
            format_terms(&m.maximal_elements),
            m.size,
            text_float(m.condition_number)
        ));
    }
}

fn histogram_text(h: &BTreeMap<usize, usize>) -> String {
    h.iter().map(|(s, c)| format!("{s}:{c}")).collect::<Vec<_>>().join(" ")
}

fn tolerance_text(t: &[f64]) -> String {
    t.iter().map(|x| text_float(*x)).collect::<Vec<_>>().join(", ")
}

fn separation_warnings(ed: &EmpiricalDesign) -> Vec<String> {
    check_separation(ed)
        .into_iter()
        .map(|(i, j)| format!("points {} and {} are not δ-separated", i + 1, j + 1))
        .collect()
}

pub fn cmd_statfan(config: &RunConfig) -> Result<Report> {
    let design = config.design()?;
    let ed = config.empirical(&design, false, 1.0)?;
    let result = statistical_fan_with(&ed.design, &config.fan_options(design.d()))?;
    let fan = &result.fan;
    let json = json!({
        "design": design_json(&design),
        "standardized": config.standardize,
        "fan": fan_json(fan),
        "fan_size": fan.len(),
        "identifiable_count": result.identifiable_count,
        "histogram": histogram_json(&fan.histogram()),
    });
    let mut text = format!("design: n={} d={}\nstatistical fan: {} models\n", design.n(), design.d(), fan.len());
    fan_text(fan, &mut text);
    text.push_str(&format!("identifiable order ideals: {}\n", result.identifiable_count));
    Ok(Report { json, text, warnings: Vec::new() })
}

fn numfan_summary(result: &NumericalFan) -> Value {
    json!({
        "fan": fan_json(&result.fan),
        "fan_size": result.fan.len(),
        "weakly_maximal_count": result.weakly_maximal.len(),
        "stable_count": result.all_stable_count,
        "histogram": histogram_json(&result.fan.histogram()),
        "weakly_maximal_histogram": histogram_json(&result.weakly_maximal.histogram()),
    })
}

pub fn cmd_numfan(config: &RunConfig) -> Result<Report> {
    let design = config.design()?;
    let ed = config.empirical(&design, true, config.scale)?;
    let warnings = separation_warnings(&ed);
    let result = numerical_fan(&ed, &config.fan_options(design.d()))?;
    let mut json = numfan_summary(&result);
    let obj = json.as_object_mut().expect("object");
    obj.insert("design".into(), design_json(&design));
    obj.insert("tolerance".into(), Value::Array(ed.tolerance.iter().map(|x| json_float(*x)).collect()));
    obj.insert("scale".into(), json_float(config.scale));
    obj.insert("standardized".into(), json!(config.standardize));

    let mut text = format!(
        "design: n={} d={}\ntolerance: {}\nnumerical fan: {} models\n",
        design.n(),
        design.d(),
        tolerance_text(&ed.tolerance),
        result.fan.len()
    );
    fan_text(&result.fan, &mut text);
    text.push_str(&format!(
        "weakly maximal: {}\nstable order ideals: {}\nhistogram (size:count): {}\n",
        result.weakly_maximal.len(),
        result.all_stable_count,
        histogram_text(&result.fan.histogram())
    ));
    Ok(Report { json, text, warnings })
}

pub fn cmd_sweep(config: &RunConfig) -> Result<Report> {
    let design = config.design()?;
    let eds = config
        .scales
        .iter()
        .map(|&k| config.empirical(&design, true, k))
        .collect::<Result<Vec<_>>>()?;
    let warnings = eds.first().map(separation_warnings).unwrap_or_default();
    let options = config.fan_options(design.d());
    let results: Vec<Result<NumericalFan>> = std::thread::scope(|scope| {
        let handles: Vec<_> = eds.iter().map(|ed| scope.spawn(|| numerical_fan(ed, &options))).collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    let mut text = format!(
        "design: n={} d={}\n{:>10} {:>8} {:>15} {:>8}  histogram (size:count)\n",
        design.n(),
        design.d(),
        "k",
        "|S_num|",
        "weakly maximal",
        "stable"
    );
    for ((k, ed), result) in config.scales.iter().zip(&eds).zip(&results) {
        let mut row = numfan_summary(result);
        let obj = row.as_object_mut().expect("object");
        obj.insert("scale".into(), json_float(*k));
        obj.insert("tolerance".into(), Value::Array(ed.tolerance.iter().map(|x| json_float(*x)).collect()));
        rows.push(row);
        text.push_str(&format!(
            "{:>10} {:>8} {:>15} {:>8}  {}\n",
            text_float(*k),
            result.fan.len(),
            result.weakly_maximal.len(),
            result.all_stable_count,
            histogram_text(&result.fan.histogram())
        ));
    }
    let json = json!({
        "design": design_json(&design),
        "tolerance": config.tolerance.as_ref().map(|t| t.iter().map(|x| json_float(*x)).collect::<Vec<_>>()),
        "standardized": config.standardize,
        "rows": rows,
    });
    Ok(Report { json, text, warnings })
}

pub fn cmd_count(d: usize, n: usize, cumulative: bool, budget: usize) -> Result<Report> {
    let count = count_order_ideals(d, n, cumulative, budget)?;
    let json = json!({ "d": d, "n": n, "cumulative": cumulative, "count": count });
    let label = if cumulative { format!("p_{d}(<={n})") } else { format!("p_{d}({n})") };
    Ok(Report { json, text: format!("{label} = {count}\n"), warnings: Vec::new() })
}

pub fn cmd_nbm(config: &RunConfig, family: bool) -> Result<Report> {
    let design = config.design()?;
    let ed = config.empirical(&design, false, config.scale)?;
    let order = TermOrder::new(config.strategy, design.d());
    let out = nbm(&ed, &order, config.arithmetic)?;
    let polynomials: Vec<Value> = out
        .polynomials
        .iter()
        .map(|p| {
            json!({
                "leading": p.leading.exponents(),
                "coefficients": p.coefficients.iter().map(|c| json_float(*c)).collect::<Vec<_>>(),
                "residual_norm": json_float(p.residual.iter().map(|r| r * r).sum::<f64>().sqrt()),
            })
        })
        .collect();
    let mut json = json!({
        "design": design_json(&design),
        "tolerance": ed.tolerance.iter().map(|x| json_float(*x)).collect::<Vec<_>>(),
        "standardized": config.standardize,
        "order": config.strategy.to_string(),
        "order_ideal": exponents(&out.terms),
        "maximal_elements": exponents(&out.order_ideal.maximal_elements()),
        "polynomials": polynomials,
    });
    let mut text = format!(
        "order ideal ({}): {}\nalmost vanishing polynomials:\n",
        config.strategy,
        format_terms(&out.terms)
    );
    for p in &out.polynomials {
        text.push_str(&format!("  {}\n", polynomial_text(&p.leading, &out.terms, &p.coefficients)));
    }
    if family {
        let fan = numerical_algebraic_fan_family(&ed, &config.fan_options(design.d()))?;
        json.as_object_mut().expect("object").insert("family".into(), fan_json(&fan));
        text.push_str(&format!("order ideals over all orders and permutations: {}\n", fan.len()));
        fan_text(&fan, &mut text);
    }
    Ok(Report { json, text, warnings: Vec::new() })
}

fn polynomial_text(leading: &Term, terms: &[Term], coefficients: &[f64]) -> String {
    let mut s = leading.to_string();
    for (t, c) in terms.iter().zip(coefficients).rev() {
        if *c == 0.0 {
            continue;
        }
        let sign = if *c < 0.0 { '-' } else { '+' };
        let magnitude = text_float(c.abs());
        if t.is_one() {
            s.push_str(&format!(" {sign} {magnitude}"));
        } else {
            s.push_str(&format!(" {sign} {magnitude}*{t}"));
        }
    }
    s
}

pub fn cmd_check(config: &RunConfig) -> Result<Report> {
    let design = config.design()?;
    let ed = config.empirical(&design, false, config.scale)?;
    let duplicate = design.find_duplicate();
    let offending = check_separation(&ed);
    let json = json!({
        "design": design_json(&design),
        "tolerance": ed.tolerance.iter().map(|x| json_float(*x)).collect::<Vec<_>>(),
        "exact_coordinates": design.has_exact(),
        "duplicate": duplicate.map(|(i, j)| vec![i + 1, j + 1]),
        "not_separated": offending.iter().map(|(i, j)| vec![i + 1, j + 1]).collect::<Vec<_>>(),
    });
    let mut text = format!(
        "design: n={} d={}\ntolerance: {}\nexact coordinates: {}\n",
        design.n(),
        design.d(),
        tolerance_text(&ed.tolerance),
        if design.has_exact() { "yes" } else { "no" }
    );
    if let Some((i, j)) = duplicate {
        text.push_str(&format!("duplicate points: {} and {}\n", i + 1, j + 1));
    }
    if offending.is_empty() {
        text.push_str("all points are δ-separated\n");
    } else {
        for (i, j) in &offending {
            text.push_str(&format!("not δ-separated: {} and {}\n", i + 1, j + 1));
        }
    }
    Ok(Report { json, text, warnings: Vec::new() })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::RankDeficient | Error::EmptyMatrix => 1,
        _ => 2,
    }
}

/// Runs the command line `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return e.exit_code();
        }
    };
    let outcome = match cli.command {
        Command::Statfan(a) => RunConfig::from_args(a).and_then(|c| Ok((cmd_statfan(&c)?, c.format))),
        Command::Numfan(a) => RunConfig::from_args(a).and_then(|c| Ok((cmd_numfan(&c)?, c.format))),
        Command::Sweep(a) => RunConfig::from_args(a).and_then(|c| Ok((cmd_sweep(&c)?, c.format))),
        Command::Check(a) => RunConfig::from_args(a).and_then(|c| Ok((cmd_check(&c)?, c.format))),
        Command::Count(a) => resolve_budget(a.budget)
            .and_then(|budget| Ok((cmd_count(a.dim, a.terms, a.cumulative, budget)?, a.format))),
        Command::Nbm(a) => RunConfig::from_args(a.common).and_then(|c| Ok((cmd_nbm(&c, a.family)?, c.format))),
    };
    match outcome {
        Ok((report, format)) => {
            for w in &report.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let _ = write!(out, "{}", report.render(format));
            0
        }
        Err(e) => {
            let _ = writeln!(err, "numfan: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_twelve_significant_digits() {
        assert_eq!(json_float(4001.003123456789), json!(4001.00312346));
        assert_eq!(json_float(f64::INFINITY), Value::Null);
        assert_eq!(json_float(1.0 / 3.0).to_string(), "0.333333333333");
    }

    #[test]
    fn polynomial_rendering() {
        let one = Term::one(2);
        let x = Term::var(2, 0);
        assert_eq!(polynomial_text(&Term::new([2, 0]), &[one.clone(), x.clone()], &[-1.0, 0.0]), "X1^2 - 1");
        assert_eq!(polynomial_text(&Term::new([0, 1]), &[one, x], &[0.5, -2.0]), "X2 - 2*X1 + 0.5");
    }

    #[test]
    fn usage_errors() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["numfan", "count", "--dim", "0", "--terms", "3"], &mut out, &mut err), 2);
        assert_eq!(run(["numfan", "frobnicate"], &mut out, &mut err), 2);
        assert_eq!(run(["numfan", "count", "--dim", "4", "--terms", "10", "--budget", "3"], &mut out, &mut err), 3);
    }

    #[test]
    fn count_output() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(["numfan", "count", "--dim", "4", "--terms", "10", "--cumulative"], &mut out, &mut err);
        assert_eq!(code, 0);
        assert_eq!(String::from_utf8(out).unwrap(), "p_4(<=10) = 5817\n");
    }
}
