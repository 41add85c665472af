//! `cflab`: exact continued fraction laboratory.
//!
//! Subcommands expose the library end to end: digit expansion, RCF/BCF
//! transformation, convergent tables, irrationality-exponent evidence,
//! Good-criterion hits, fundamental-interval geometry, dimension brackets,
//! seed-word search, and the 2-block insertion construction. All output is
//! deterministic: identical invocations produce byte-identical bytes.

mod output;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::io::Read;
use std::process::ExitCode;

use cflab_core::cf::{
    bcf_convergents, bcf_digits, rcf_convergents, rcf_digits, CfKind, DigitStream, RealSource,
};
use cflab_core::dimension::{
    dim_bounds, induce_parabolic, letter_system, search_seed_words, HyperbolicSystem,
};
use cflab_core::diophantine::{good_hits, mu_bcf_estimate, mu_rcf_estimate};
use cflab_core::ifs::{
    apply_word, derivative_range, distortion, fundamental_interval, FamilyKind, IfsFamily, IfsWord,
};
use cflab_core::insertion::{
    build_stream, holder_check, not2_positions, verify_good, InsertionSchedule, ScheduleParams,
    SeedSource,
};
use cflab_core::numeric::{parse_decimal_rational, parse_rational, Rational};
use output::{enclosure, enclosure_approx, fraction, fraction_approx, object, render};

/// Environment variable overriding the default digit budget (10^7).
const BUDGET_ENV: &str = "CFLAB_DIGIT_BUDGET";

#[derive(Parser)]
#[command(
    name = "cflab",
    version,
    about = "Exact arithmetic laboratory for regular and backward continued fractions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a rational or quadratic surd into RCF or BCF digits
    Expand(ExpandArgs),
    /// Convert a digit stream between the RCF and BCF expansions
    Convert(ConvertArgs),
    /// Convergent table of a digit stream
    Convergents(ConvergentsArgs),
    /// Irrationality-exponent evidence over a digit window
    Mu(MuArgs),
    /// Exact Good-criterion hit indices
    Hits(HitsArgs),
    /// Fundamental interval, derivative range and distortion of a word
    Interval(IntervalArgs),
    /// Hausdorff-dimension bracket of a digit-restricted limit set
    Dim(DimArgs),
    /// Search admissible seed words over an alphabet
    SeedSearch(SeedSearchArgs),
    /// Build and verify a 2-block insertion stream
    Construct(ConstructArgs),
}

#[derive(Args)]
struct ExpandArgs {
    /// Produce the regular continued fraction
    #[arg(long, conflicts_with = "bcf")]
    rcf: bool,
    /// Produce the backward continued fraction
    #[arg(long)]
    bcf: bool,
    /// Input literal: "num/den" or "(a+b*sqrt(d))/c"
    #[arg(long)]
    value: String,
    /// Number of digits to emit
    #[arg(long)]
    count: usize,
    /// Emit the line-based text format instead of JSON
    #[arg(long)]
    text: bool,
}

#[derive(Args)]
struct ConvertArgs {
    /// Target expansion: "rcf" or "bcf"
    #[arg(long)]
    to: String,
    /// Stream file path, or "-" for standard input
    #[arg(long, default_value = "-")]
    input: String,
    /// Number of digits to produce
    #[arg(long)]
    count: usize,
    #[arg(long)]
    text: bool,
}

#[derive(Args)]
struct ConvergentsArgs {
    #[arg(long, default_value = "-")]
    input: String,
    /// Number of convergent rows beyond row 0
    #[arg(long)]
    count: usize,
    /// Emit CSV instead of JSON
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct MuArgs {
    #[arg(long, default_value = "-")]
    input: String,
    /// Window length; the stream must supply window+1 digits
    #[arg(long)]
    window: usize,
}

#[derive(Args)]
struct HitsArgs {
    #[arg(long, default_value = "-")]
    input: String,
    /// Rational exponent, e.g. "5/2"
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    window: usize,
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct IntervalArgs {
    /// IFS family: "bcf" or "gauss"
    #[arg(long, default_value = "bcf")]
    family: String,
    /// Comma-separated word, e.g. "2,2,3"
    #[arg(long)]
    word: String,
    /// Also report the image of this rational point
    #[arg(long)]
    at: Option<String>,
}

#[derive(Args)]
struct DimArgs {
    #[arg(long, default_value = "bcf")]
    family: String,
    /// Comma-separated digit alphabet, e.g. "3,4" or "2,3,4"
    #[arg(long)]
    alphabet: String,
    /// Composition depth of the pressure sums
    #[arg(long, default_value_t = 2)]
    depth: usize,
    /// Bisection tolerance, e.g. "1e-4"
    #[arg(long, default_value = "1e-4")]
    tol: String,
    /// Acceleration cutoff for parabolic alphabets
    #[arg(long, default_value_t = 24)]
    cutoff: u64,
    /// Also report the certified pressure bounds at this parameter s
    #[arg(long)]
    pressure_at: Option<String>,
}

#[derive(Args)]
struct SeedSearchArgs {
    #[arg(long, default_value = "bcf")]
    family: String,
    #[arg(long)]
    alphabet: String,
    /// Seed word length
    #[arg(long)]
    p: usize,
    /// Keep only the most contracting words
    #[arg(long)]
    target_count: Option<usize>,
}

#[derive(Args)]
struct ConstructArgs {
    /// BCF digit alphabet containing 2, e.g. "2,3"
    #[arg(long)]
    alphabet: String,
    /// Seed word length
    #[arg(long)]
    p: usize,
    /// Hölder parameter epsilon (decimal or fraction)
    #[arg(long)]
    epsilon: String,
    /// Override lambda (default epsilon * gamma / 5)
    #[arg(long)]
    lambda: Option<String>,
    /// Closing letter t (defaults to the smallest non-parabolic letter)
    #[arg(long)]
    t: Option<u64>,
    /// Override alpha (default from the schedule inequality)
    #[arg(long)]
    alpha: Option<String>,
    /// Digits to materialize
    #[arg(long)]
    digits: usize,
    /// Seed word source: "periodic:0,1" or "random:42"
    #[arg(long, default_value = "periodic:0")]
    seed_pattern: String,
    /// Verify the Good inequality through this stage
    #[arg(long, default_value_t = 16)]
    verify_k: usize,
    /// Also run the diameter comparison through this stage
    #[arg(long)]
    holder_k: Option<usize>,
    /// Write the digit stream (text format) to this file
    #[arg(long)]
    stream_out: Option<String>,
}

enum CliError {
    Usage(String),
    Budget(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Budget(m) => m,
        }
    }
}

impl From<cflab_core::Error> for CliError {
    fn from(e: cflab_core::Error) -> CliError {
        if e.is_budget() {
            CliError::Budget(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

type CliResult = Result<String, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn digit_budget() -> usize {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(10_000_000)
}

fn read_stream(path: &str) -> Result<DigitStream, CliError> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Usage(format!("reading standard input: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("reading {path}: {e}")))?
    };
    Ok(DigitStream::parse_any(&text)?)
}

fn parse_family(name: &str) -> Result<FamilyKind, CliError> {
    match name.to_ascii_lowercase().as_str() {
        "bcf" => Ok(FamilyKind::Bcf),
        "gauss" => Ok(FamilyKind::Gauss),
        other => Err(CliError::Usage(format!(
            "unknown family {other:?}; use bcf or gauss"
        ))),
    }
}

fn parse_alphabet(s: &str) -> Result<Vec<u64>, CliError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("bad alphabet entry {p:?}")))
        })
        .collect()
}

fn parse_tolerance(s: &str) -> Result<Rational, CliError> {
    let tol = parse_decimal_rational(s)?;
    if tol <= Rational::new(0.into(), 1.into()) {
        return Err(CliError::Usage("tolerance must be positive".into()));
    }
    Ok(tol)
}

fn stream_payload(stream: &DigitStream, text: bool) -> String {
    if text {
        stream.to_text()
    } else {
        let mut s = stream.to_json();
        s.push('\n');
        s
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Expand(args) => cmd_expand(args),
        Command::Convert(args) => cmd_convert(args),
        Command::Convergents(args) => cmd_convergents(args),
        Command::Mu(args) => cmd_mu(args),
        Command::Hits(args) => cmd_hits(args),
        Command::Interval(args) => cmd_interval(args),
        Command::Dim(args) => cmd_dim(args),
        Command::SeedSearch(args) => cmd_seed_search(args),
        Command::Construct(args) => cmd_construct(args),
    }
}

fn cmd_expand(args: ExpandArgs) -> CliResult {
    if args.rcf == args.bcf {
        return Err(CliError::Usage(
            "choose exactly one of --rcf and --bcf".into(),
        ));
    }
    if args.count == 0 {
        return Err(CliError::Usage("--count must be positive".into()));
    }
    if args.count > digit_budget() {
        return Err(CliError::Budget(format!(
            "--count exceeds the digit budget {}",
            digit_budget()
        )));
    }
    let source = RealSource::parse(&args.value)?;
    let stream = if args.rcf {
        rcf_digits(&source, args.count)?
    } else {
        bcf_digits(&source, args.count)?
    };
    Ok(stream_payload(&stream, args.text))
}

fn cmd_convert(args: ConvertArgs) -> CliResult {
    let stream = read_stream(&args.input)?;
    if args.count == 0 {
        return Err(CliError::Usage("--count must be positive".into()));
    }
    let out = match args.to.to_ascii_lowercase().as_str() {
        "rcf" => cflab_core::transform::bcf_to_rcf(&stream, args.count)?,
        "bcf" => cflab_core::transform::rcf_to_bcf(&stream, args.count)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown target {other:?}; use rcf or bcf"
            )))
        }
    };
    Ok(stream_payload(&out, args.text))
}

fn cmd_convergents(args: ConvergentsArgs) -> CliResult {
    let stream = read_stream(&args.input)?;
    let table = match stream.kind() {
        CfKind::Rcf => rcf_convergents(&stream, args.count)?,
        CfKind::Bcf => bcf_convergents(&stream, args.count)?,
    };
    if args.csv {
        let mut out = String::from("n,numerator,denominator\n");
        for n in 0..=table.max_index() {
            let (p, q) = table.row(n).unwrap();
            out.push_str(&format!("{n},{p},{q}\n"));
        }
        return Ok(out);
    }
    let rows: Vec<Value> = (0..=table.max_index())
        .map(|n| {
            let (p, q) = table.row(n).unwrap();
            object(vec![
                ("n", json!(n)),
                ("numerator", Value::String(p.to_string())),
                ("denominator", Value::String(q.to_string())),
            ])
        })
        .collect();
    Ok(render(&object(vec![
        ("kind", json!(stream.kind().name())),
        ("rows", Value::Array(rows)),
    ])))
}

fn cmd_mu(args: MuArgs) -> CliResult {
    let stream = read_stream(&args.input)?;
    let report = match stream.kind() {
        CfKind::Rcf => mu_rcf_estimate(&stream, args.window)?,
        CfKind::Bcf => mu_bcf_estimate(&stream, args.window)?,
    };
    let ratios: Vec<Value> = report
        .ratios
        .iter()
        .map(|(n, iv)| {
            object(vec![
                ("n", json!(n)),
                ("ratio", enclosure(iv)),
                ("ratioApprox", enclosure_approx(iv)),
            ])
        })
        .collect();
    Ok(render(&object(vec![
        ("kind", json!(report.kind.name())),
        ("window", json!(report.window)),
        ("ratios", Value::Array(ratios)),
        ("tailSup", enclosure(&report.tail_sup)),
        ("muEstimate", enclosure(&report.mu_estimate)),
        ("muApprox", enclosure_approx(&report.mu_estimate)),
    ])))
}

fn cmd_hits(args: HitsArgs) -> CliResult {
    let stream = read_stream(&args.input)?;
    let alpha = parse_rational(&args.alpha)?;
    let report = good_hits(&stream, &alpha, args.window)?;
    if args.csv {
        // per-index mirror with the threshold verdict
        let table = rcf_convergents(&stream, args.window.saturating_sub(1))?;
        let mut out = String::from("n,a_next,q_n,threshold_exceeded\n");
        for n in 1..args.window {
            let a = stream.digit(n + 1).unwrap();
            let (_, q) = table.row(n as i64).unwrap();
            out.push_str(&format!("{n},{a},{q},{}\n", report.hits.contains(&n)));
        }
        return Ok(out);
    }
    Ok(render(&object(vec![
        ("alpha", fraction(&report.alpha)),
        ("window", json!(report.window)),
        ("hits", json!(report.hits)),
    ])))
}

fn interval_family(kind: FamilyKind, word: &IfsWord) -> Result<IfsFamily, CliError> {
    // family over the letters the word actually uses, padded to two letters
    let mut letters: Vec<u64> = word.letters().to_vec();
    letters.sort_unstable();
    letters.dedup();
    if letters.len() < 2 {
        let extra = letters[0] + 1;
        letters.push(extra);
    }
    Ok(IfsFamily::new(kind, letters)?)
}

fn cmd_interval(args: IntervalArgs) -> CliResult {
    let kind = parse_family(&args.family)?;
    let word = IfsWord::parse(&args.word)?;
    let family = interval_family(kind, &word)?;
    let cell = fundamental_interval(&family, &word)?;
    let (inf, sup) = derivative_range(&family, &word)?;
    let dist = distortion(&family, &word)?;
    let mut entries = vec![
        ("family", json!(kind.name())),
        ("word", json!(word.to_string())),
        (
            "interval",
            json!(format!(
                "{}/{} {}/{}",
                cell.lower.numer(),
                cell.lower.denom(),
                cell.upper.numer(),
                cell.upper.denom()
            )),
        ),
        ("lower", fraction(&cell.lower)),
        ("upper", fraction(&cell.upper)),
        ("diameter", fraction(&cell.diameter())),
        ("diameterApprox", fraction_approx(&cell.diameter())),
        ("derivativeInf", fraction(&inf)),
        ("derivativeSup", fraction(&sup)),
        ("distortion", enclosure(&dist)),
        ("distortionApprox", enclosure_approx(&dist)),
    ];
    if let Some(at) = &args.at {
        let x = parse_rational(at)?;
        let img = apply_word(&family, &word, &x)?;
        entries.push(("imageOf", fraction(&x)));
        entries.push(("image", fraction(&img)));
    }
    Ok(render(&object(entries)))
}

fn cmd_dim(args: DimArgs) -> CliResult {
    let kind = parse_family(&args.family)?;
    let alphabet = parse_alphabet(&args.alphabet)?;
    let tol = parse_tolerance(&args.tol)?;
    let family = IfsFamily::new(kind, alphabet.iter().copied())?;
    let parabolic = !family.parabolic_letters().is_empty();
    let (system, defect): (HyperbolicSystem, Option<_>) = if parabolic {
        let (sys, defect) = induce_parabolic(&family, args.cutoff)?;
        (sys, Some(defect))
    } else {
        (letter_system(&family)?, None)
    };
    let bracket = dim_bounds(&system, args.depth, &tol)?;
    let mut entries = vec![
        ("alphabet", json!(alphabet)),
        ("family", json!(kind.name())),
        ("depth", json!(args.depth)),
        ("tol", fraction(&tol)),
        (
            "cutoff",
            defect
                .as_ref()
                .map(|d| json!(d.cutoff))
                .unwrap_or(Value::Null),
        ),
        ("generators", json!(system.generator_count())),
        ("sLo", fraction(&bracket.s_lo)),
        ("sHi", fraction(&bracket.s_hi)),
        ("sLoApprox", fraction_approx(&bracket.s_lo)),
        ("sHiApprox", fraction_approx(&bracket.s_hi)),
        (
            "tailDefect",
            defect
                .as_ref()
                .and_then(|d| d.leading())
                .map(fraction)
                .unwrap_or(Value::Null),
        ),
    ];
    if let Some(s) = &args.pressure_at {
        let s = parse_decimal_rational(s)?;
        let (p_lo, p_hi) = cflab_core::dimension::pressure_bounds(&system, &s, args.depth)?;
        entries.push(("pressureAt", fraction(&s)));
        entries.push(("pressureLo", enclosure(&p_lo)));
        entries.push(("pressureHi", enclosure(&p_hi)));
        entries.push(("pressureLoApprox", enclosure_approx(&p_lo)));
        entries.push(("pressureHiApprox", enclosure_approx(&p_hi)));
    }
    Ok(render(&object(entries)))
}

fn cmd_seed_search(args: SeedSearchArgs) -> CliResult {
    let kind = parse_family(&args.family)?;
    let alphabet = parse_alphabet(&args.alphabet)?;
    let result = if kind == FamilyKind::Bcf {
        cflab_core::dimension::search_seed_words_bcf(
            alphabet.iter().copied(),
            args.p,
            args.target_count,
        )?
    } else {
        let family = IfsFamily::new(kind, alphabet.iter().copied())?;
        search_seed_words(&family, args.p, args.target_count)?
    };
    let words: Vec<Value> = result.words.iter().map(|w| json!(w.to_string())).collect();
    Ok(render(&object(vec![
        ("alphabet", json!(alphabet)),
        ("family", json!(kind.name())),
        ("p", json!(result.p)),
        ("words", Value::Array(words)),
        ("gamma", fraction(&result.gamma)),
        ("gammaApprox", fraction_approx(&result.gamma)),
        (
            "achievedDimLowerBound",
            fraction(&result.achieved_dim_lower_bound),
        ),
    ])))
}

fn cmd_construct(args: ConstructArgs) -> CliResult {
    let alphabet = parse_alphabet(&args.alphabet)?;
    if args.digits == 0 {
        return Err(CliError::Usage("--digits must be positive".into()));
    }
    if args.digits > digit_budget() {
        return Err(CliError::Budget(format!(
            "--digits exceeds the digit budget {} (override with {BUDGET_ENV})",
            digit_budget()
        )));
    }
    let family = IfsFamily::new(FamilyKind::Bcf, alphabet.iter().copied())?;
    let seed = search_seed_words(&family, args.p, None)?;
    let t = match args.t {
        Some(t) => t,
        None => *alphabet
            .iter()
            .filter(|&&l| !family.is_parabolic_letter(l))
            .min()
            .ok_or_else(|| CliError::Usage("alphabet has no non-parabolic letter".into()))?,
    };
    let epsilon = parse_decimal_rational(&args.epsilon)?;
    let lambda = args
        .lambda
        .as_deref()
        .map(parse_decimal_rational)
        .transpose()?;
    let alpha = args.alpha.as_deref().map(parse_rational).transpose()?;
    let schedule = InsertionSchedule::new(ScheduleParams {
        alphabet: alphabet.iter().copied().collect(),
        seed_words: seed.words.clone(),
        gamma: seed.gamma.clone(),
        epsilon,
        lambda,
        t,
        alpha,
    })?;
    let source = SeedSource::parse(&args.seed_pattern)?;
    let constructed = build_stream(&schedule, &source, args.digits)?;
    let verification = verify_good(&constructed, args.verify_k)?;

    if let Some(path) = &args.stream_out {
        std::fs::write(path, constructed.stream().to_text())
            .map_err(|e| CliError::Usage(format!("writing {path}: {e}")))?;
    }

    let schedule_json = object(vec![
        ("alphabet", json!(alphabet)),
        (
            "seedWords",
            Value::Array(
                schedule
                    .seed_words()
                    .iter()
                    .map(|w| json!(w.to_string()))
                    .collect(),
            ),
        ),
        ("p", json!(schedule.p())),
        ("gamma", fraction(schedule.gamma())),
        ("epsilon", fraction(schedule.epsilon())),
        ("lambda", fraction(schedule.lambda())),
        ("t", json!(schedule.t())),
        ("L", json!(schedule.cap_l())),
        ("alpha", fraction(schedule.alpha())),
        ("seedPattern", json!(args.seed_pattern)),
        ("positionIndexing", json!("1-based")),
    ]);
    let insertions: Vec<Value> = constructed
        .insertions()
        .iter()
        .map(|r| {
            object(vec![
                ("k", json!(r.k)),
                ("seedPosition", json!(r.seed_position)),
                ("position", json!(r.block_start)),
                ("blockLen", json!(r.block_len)),
                ("tPosition", json!(r.t_position)),
            ])
        })
        .collect();
    let verification_json: Vec<Value> = verification
        .checks
        .iter()
        .map(|c| {
            object(vec![
                ("k", json!(c.k)),
                ("n", json!(c.n)),
                ("aNext", Value::String(c.a_next.to_string())),
                ("qn", Value::String(c.q_n.to_string())),
                ("pass", json!(c.pass)),
                ("qBoundExact", json!(c.q_bound_exact)),
                ("qBoundOuter", json!(c.q_bound_outer)),
            ])
        })
        .collect();
    // protected positions for the materialized stages
    let mut not2 = Vec::new();
    for record in constructed.insertions() {
        if let Ok(positions) = not2_positions(&constructed, record.k) {
            not2.push(object(vec![
                ("k", json!(record.k)),
                ("positions", json!(positions)),
            ]));
        }
    }
    let mut entries = vec![
        ("schedule", schedule_json),
        ("digits", json!(constructed.stream().len())),
        ("insertions", Value::Array(insertions)),
        (
            "partialBlock",
            constructed
                .partial()
                .map(|p| {
                    object(vec![
                        ("k", json!(p.k)),
                        ("plannedLen", Value::String(p.planned_len.to_string())),
                        ("emitted", json!(p.emitted)),
                    ])
                })
                .unwrap_or(Value::Null),
        ),
        ("verification", Value::Array(verification_json)),
        (
            "firstPassK",
            verification
                .first_pass_k
                .map(|k| json!(k))
                .unwrap_or(Value::Null),
        ),
        ("not2Positions", Value::Array(not2)),
    ];
    if let Some(k_hi) = args.holder_k {
        let report = holder_check(
            &schedule,
            std::slice::from_ref(&source),
            0..=k_hi,
            digit_budget(),
        )?;
        let holder_entries: Vec<Value> = report
            .entries
            .iter()
            .map(|e| {
                object(vec![
                    ("k", json!(e.k)),
                    ("n", json!(e.n)),
                    ("logMargin", json!(e.log_margin)),
                    ("pass", json!(e.pass)),
                ])
            })
            .collect();
        entries.push((
            "holder",
            object(vec![
                ("epsilon", fraction(&report.epsilon)),
                ("entries", Value::Array(holder_entries)),
                (
                    "empiricalThresholdK",
                    report
                        .empirical_threshold
                        .map(|k| json!(k))
                        .unwrap_or(Value::Null),
                ),
            ]),
        ));
    }
    Ok(render(&object(entries)))
}
