use std::fmt;
use std::fs;
use std::io::{self, Write};

use ffsq::affine::small_epsilon_experiment;
use ffsq::factor::factor;
use ffsq::hyperoct::{xn_density_closed_form, xn_density_enumerated, xn_density_partition_sum};
use ffsq::intervals::{
    global_density, parse_rational, scan_exhaustive, scan_monte_carlo, signed_type_histogram,
};
use ffsq::report::{decimal, histogram_to_csv, histogram_to_json, report_to_json, reports_to_csv};
use ffsq::twosquares::{
    construct_representation, find_representation_bruteforce_with_limit, is_inert_prime,
    is_sum_of_two_squares,
};
use ffsq::{DensityReport, FieldContext, Interval, Polynomial, ScanConfig, ScanMode};
use serde_json::json;

use crate::{Cli, Command, Common, FieldArgs, Format, IntervalArgs, Mode, SamplingArgs};

#[derive(Debug)]
pub enum CliError {
    Core(ffsq::Error),
    Usage(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_guard() => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(s) => write!(f, "{s}"),
            CliError::Io(e) => write!(f, "output: {e}"),
        }
    }
}

impl From<ffsq::Error> for CliError {
    fn from(e: ffsq::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(s: impl Into<String>) -> CliError {
    CliError::Usage(s.into())
}

pub fn run(cli: &Cli) -> Result<()> {
    let common = &cli.common;
    let text = match &cli.command {
        Command::Represent { field, f } => represent(common, field, f)?,
        Command::Interval { interval, sampling } => {
            let iv = build_interval(common, interval)?;
            let report = match scan_mode(sampling)? {
                ScanMode::Exhaustive => scan_exhaustive(&iv, &scan_config(common))?,
                ScanMode::MonteCarlo { samples, seed } => {
                    scan_monte_carlo(&iv, samples, seed, &scan_config(common))?
                }
            };
            render_report(common, &report)?
        }
        Command::Global { field, n } => {
            let ctx = field_context(common, field)?;
            render_report(common, &global_density(&ctx, *n, &scan_config(common))?)?
        }
        Command::Affine { p, nu, sampling } => {
            let report =
                small_epsilon_experiment(*p, *nu, &scan_mode(sampling)?, &scan_config(common))?;
            render_report(common, &report)?
        }
        Command::Group { n } => group(common, *n)?,
        Command::Chebotarev { interval } => {
            let iv = build_interval(common, interval)?;
            let h = signed_type_histogram(&iv, &scan_config(common))?;
            eprintln!(
                "total variation {}, skipped {}/{}",
                decimal(&h.total_variation()?),
                h.skipped,
                h.total
            );
            match common.format.unwrap_or(Format::Json) {
                Format::Csv => histogram_to_csv(&h)?,
                Format::Json => histogram_to_json(&h)? + "\n",
                Format::Text => return Err(usage("chebotarev supports --format json or csv")),
            }
        }
    };
    emit(common, &text)
}

fn emit(common: &Common, text: &str) -> Result<()> {
    match &common.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn scan_config(common: &Common) -> ScanConfig {
    ScanConfig {
        workers: common.workers.max(1),
        max_enum: common.max_enum,
        ..ScanConfig::default()
    }
}

fn field_context(common: &Common, field: &FieldArgs) -> Result<FieldContext> {
    Ok(FieldContext::with_max_q(field.p, field.k, common.max_q)?)
}

fn scan_mode(s: &SamplingArgs) -> Result<ScanMode> {
    match s.mode {
        Mode::Exhaustive => {
            if s.samples.is_some() || s.seed.is_some() {
                return Err(usage("--samples and --seed need --mode monte-carlo"));
            }
            Ok(ScanMode::Exhaustive)
        }
        Mode::MonteCarlo => match (s.samples, s.seed) {
            (Some(samples), Some(seed)) => Ok(ScanMode::MonteCarlo { samples, seed }),
            _ => Err(usage("--mode monte-carlo needs both --samples and --seed")),
        },
    }
}

fn build_interval(common: &Common, args: &IntervalArgs) -> Result<Interval> {
    let ctx = field_context(common, &args.field)?;
    let f0 = match (&args.f0, args.n) {
        (Some(text), n) => {
            let f0 = Polynomial::parse(&ctx, text)?;
            if let Some(n) = n {
                if f0.degree() != Some(n) {
                    return Err(usage(format!(
                        "--f0 has degree {:?}, not --n {n}",
                        f0.degree()
                    )));
                }
            }
            f0
        }
        (None, Some(n)) => Polynomial::monomial(&ctx, ffsq::Fq::ONE, n),
        (None, None) => return Err(usage("give --n or --f0")),
    };
    match (&args.epsilon, args.m) {
        (Some(eps), None) => Ok(Interval::with_epsilon(f0, parse_rational(eps)?)?),
        (None, Some(m)) => Ok(Interval::with_m(f0, m)?),
        _ => Err(usage("give exactly one of --epsilon and --m")),
    }
}

fn render_report(common: &Common, report: &DensityReport) -> Result<String> {
    let mut summary = format!(
        "mean {} ({}), reference {}, deviation {}",
        report.mean,
        decimal(&report.mean),
        report.reference,
        decimal(&report.deviation)
    );
    if let Some(extra) = &report.affine {
        summary += &format!(
            "; c_p {} ({}), binomial density {} ({})",
            extra.c_p,
            decimal(&extra.c_p),
            extra.binom_ref,
            decimal(&extra.binom_ref)
        );
    }
    eprintln!("{summary}");
    match common.format.unwrap_or(Format::Json) {
        Format::Json => Ok(report_to_json(report) + "\n"),
        Format::Csv => Ok(reports_to_csv(std::slice::from_ref(report))?),
        Format::Text => Ok(summary + "\n"),
    }
}

fn represent(common: &Common, field: &FieldArgs, text: &str) -> Result<String> {
    let ctx = field_context(common, field)?;
    let f = Polynomial::parse(&ctx, text)?;
    let bq = is_sum_of_two_squares(&f)?;
    let witness = match find_representation_bruteforce_with_limit(&f, common.max_enum) {
        Ok(w) => w.map(|w| (w, "search")),
        Err(e) if e.is_guard() => construct_representation(&f)?.map(|w| (w, "construction")),
        Err(e) => return Err(e.into()),
    };
    let fac = factor(&f, ffsq::factor::DEFAULT_SEED)?;
    let mut factors = Vec::new();
    for (p, e) in fac.factors() {
        factors.push((p, *e, is_inert_prime(p)?));
    }
    match common.format.unwrap_or(Format::Text) {
        Format::Json => {
            let value = json!({
                "f": f.to_coeff_string(),
                "p": ctx.p(),
                "k": ctx.k(),
                "q": ctx.q(),
                "b_q": bq,
                "witness": witness.as_ref().map(|(w, source)| json!({
                    "a": w.a.to_coeff_string(),
                    "b": w.b.to_coeff_string(),
                    "source": source,
                })),
                "factors": factors.iter().map(|(p, e, inert)| json!({
                    "prime": p.to_coeff_string(),
                    "multiplicity": e,
                    "inert": inert,
                })).collect::<Vec<_>>(),
            });
            Ok(serde_json::to_string_pretty(&value).expect("json value") + "\n")
        }
        Format::Text => {
            let mut out = format!("f = {f} over {ctx:?}\nb_q = {bq}\n");
            match &witness {
                Some((w, source)) => {
                    out += &format!("witness: A = {}, B = {} ({source})\n", w.a, w.b)
                }
                None => out += "witness: none\n",
            }
            for (p, e, inert) in &factors {
                out += &format!("factor: ({p})^{e} inert={inert}\n");
            }
            Ok(out)
        }
        Format::Csv => Err(usage("represent supports --format text or json")),
    }
}

fn group(common: &Common, n: usize) -> Result<String> {
    let enumerated = xn_density_enumerated(n)?;
    let partition_sum = xn_density_partition_sum(n)?;
    let closed = xn_density_closed_form(n);
    let equal = enumerated == partition_sum && partition_sum == closed;
    match common.format.unwrap_or(Format::Text) {
        Format::Json => {
            let value = json!({
                "n": n,
                "enumerated": enumerated.to_string(),
                "partition_sum": partition_sum.to_string(),
                "closed_form": closed.to_string(),
                "decimal": decimal(&closed),
                "all_equal": equal,
            });
            Ok(serde_json::to_string_pretty(&value).expect("json value") + "\n")
        }
        Format::Csv => Ok(format!(
            "n,enumerated,partition_sum,closed_form,decimal,all_equal\n{n},{enumerated},{partition_sum},{closed},{},{equal}\n",
            decimal(&closed)
        )),
        Format::Text => Ok(format!(
            "n = {n}\nenumerated    {enumerated}\npartition sum {partition_sum}\nclosed form   {closed} ({})\nall equal: {equal}\n",
            decimal(&closed)
        )),
    }
}
