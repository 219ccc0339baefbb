use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use slidets::automata::{default_enum_len, format_word};
use slidets::checker::{
    oracle_windows, reproduce_counterexamples, select_equation, slide_check_with, EquationKind, WindowReport,
};
use slidets::classify::{feasible_triples, representatives, verify_feasibility_map};
use slidets::patterns::{catalog, lookup, Pattern};
use slidets::reformulate::emit_reformulation;
use slidets::series::{catalog_features, FeatureKind, Series};

#[derive(Parser)]
#[command(name = "slidets", version, about = "Sliding time-series constraint checker")]
pub struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pattern properties, for one pattern or the whole catalog.
    Properties {
        #[command(flatten)]
        pattern: PatternArgs,
        /// Also list the pattern words up to the enumeration cap.
        #[arg(long)]
        words: bool,
        #[arg(long)]
        json: bool,
    },
    /// Feasible type triples and class representatives.
    Classify {
        #[command(flatten)]
        pattern: PatternArgs,
        #[arg(long)]
        json: bool,
    },
    /// Per-window contributions with the selected or a forced equation.
    Check {
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, allow_hyphen_values = true)]
        low: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        up: Option<i64>,
        #[arg(long, value_enum, default_value_t = EquationArg::Auto)]
        equation: EquationArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Per-window contributions from the brute-force reference.
    Oracle {
        #[command(flatten)]
        window: WindowArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Checker against reference on a file or on random series.
    Compare {
        #[command(flatten)]
        pattern: PatternArgs,
        /// Feature; all catalog features of the pattern when omitted.
        #[arg(long)]
        feature: Option<String>,
        /// Window length; random per series when omitted.
        #[arg(short = 'm')]
        m: Option<usize>,
        #[arg(long)]
        input: Option<PathBuf>,
        /// Number of random series.
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Maximum random series length.
        #[arg(long, default_value_t = 40)]
        max_len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Verifies the 61 type triples and the emptiness of the others.
    WitnessMap {
        #[arg(long)]
        json: bool,
    },
    /// Replays the invalid-equation counterexamples.
    Counterexamples {
        #[arg(long)]
        json: bool,
    },
    /// Emits the linear-size constraint model as JSON.
    Reformulate {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        feature: String,
        #[arg(short = 'm')]
        m: usize,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, value_enum, default_value_t = EquationArg::Auto)]
        equation: EquationArg,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// GraphViz rendering of the pattern automaton.
    Dot {
        #[command(flatten)]
        pattern: PatternArgs,
    },
}

#[derive(Args)]
struct PatternArgs {
    /// Catalog name such as `inc_seq` or `proper_plateau`.
    #[arg(long, conflicts_with = "regex")]
    pattern: Option<String>,
    /// Inline regex over `<`, `=` and `>`.
    #[arg(long)]
    regex: Option<String>,
    #[arg(long, default_value_t = 0, requires = "regex")]
    b: usize,
    #[arg(long, default_value_t = 0, requires = "regex")]
    a: usize,
}

#[derive(Args)]
struct WindowArgs {
    #[arg(long)]
    pattern: String,
    #[arg(long)]
    feature: String,
    #[arg(short = 'm')]
    m: usize,
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long)]
    json: bool,
}

impl OutputArgs {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EquationArg {
    Auto,
    Plain,
    Clamp,
    Guard,
    None,
}

impl EquationArg {
    fn resolve(self, f: FeatureKind, p: &Pattern) -> Result<EquationKind> {
        Ok(match self {
            EquationArg::Auto => select_equation(f, p)?,
            EquationArg::Plain => EquationKind::Plain,
            EquationArg::Clamp => EquationKind::Clamp,
            EquationArg::Guard => EquationKind::Guard,
            EquationArg::None => EquationKind::NoneFallback,
        })
    }
}

enum Resolved {
    Catalog(&'static Pattern),
    Custom(Box<Pattern>),
}

impl Resolved {
    fn get(&self) -> &Pattern {
        match self {
            Resolved::Catalog(p) => p,
            Resolved::Custom(p) => p,
        }
    }
}

impl PatternArgs {
    fn resolve(&self) -> Result<Option<Resolved>> {
        Ok(match (&self.pattern, &self.regex) {
            (Some(name), _) => Some(Resolved::Catalog(lookup(name)?)),
            (None, Some(text)) => Some(Resolved::Custom(Box::new(Pattern::new(text, text, self.b, self.a)?))),
            (None, None) => None,
        })
    }

    fn required(&self) -> Result<Resolved> {
        self.resolve()?.context("either --pattern or --regex is required")
    }
}

fn read_series(path: &PathBuf) -> Result<Series> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Series::parse(&text)?)
}

pub fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Properties { pattern, words, json } => {
            let patterns: Vec<Resolved> = match pattern.resolve()? {
                Some(p) => vec![p],
                None => catalog().iter().map(Resolved::Catalog).collect(),
            };
            let mut rows = Vec::new();
            for p in &patterns {
                let p = p.get();
                let props = p.properties();
                let listed: Option<Vec<String>> = words
                    .then(|| p.language().enumerate_words(default_enum_len()).iter().map(|w| format_word(w)).collect());
                if json {
                    rows.push(json!({ "pattern": p.name(), "regex": p.regex(), "b": p.b(), "a": p.a(),
                        "omega": p.omega(), "properties": props, "words": listed }));
                } else {
                    let flag = |b: bool| if b { "yes" } else { "no" };
                    writeln!(
                        out,
                        "{:<30} r={:<3} n={:<3} o={:<3} e={:<3} s={:<3} convex={:<3} letter={} suffix_unavoidable={} incompressible={} factor={} reverse={}",
                        p.name(),
                        flag(props.reverse.is_some()),
                        flag(props.inflexion_free),
                        flag(props.one_inflexion),
                        flag(props.exclude_out_in),
                        flag(props.single_letter),
                        flag(props.convex),
                        props.letter.as_deref().unwrap_or("-"),
                        props.suffix_unavoidable.as_deref().unwrap_or("-"),
                        flag(props.incompressible),
                        props.factor.map_or("-", flag),
                        props.reverse.as_deref().unwrap_or("-"),
                    )?;
                    if let Some(listed) = listed {
                        writeln!(out, "  words: {}", listed.join(" "))?;
                    }
                }
            }
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { pattern, json } => {
            let resolved = pattern.required()?;
            let p = resolved.get();
            let triples: Vec<String> = feasible_triples(p).iter().map(ToString::to_string).collect();
            let reps: Vec<String> = representatives(p).iter().map(ToString::to_string).collect();
            if json {
                let v = json!({ "pattern": p.name(), "triples": triples, "representatives": reps });
                writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
            } else {
                writeln!(out, "pattern: {}", p.name())?;
                writeln!(out, "feasible triples ({}): {}", triples.len(), triples.join(" "))?;
                writeln!(out, "representatives: {}", reps.join(" "))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { window, low, up, equation, output } => {
            let p = lookup(&window.pattern)?;
            let f: FeatureKind = window.feature.parse()?;
            let x = read_series(&window.input)?;
            let eq = equation.resolve(f, p)?;
            let report = slide_check_with(f, p, window.m, &x, eq)?;
            if report.fallback {
                eprintln!("warning: no equation applies to {f} on {}; each window was scanned separately", p.name());
            }
            print_report(&mut out, p, f, &report, output.format())?;
            if report.within(low, up) {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!(
                    "violated: contributions span [{}, {}] outside [{}, {}]",
                    report.low,
                    report.up,
                    low.map_or("-inf".into(), |v| v.to_string()),
                    up.map_or("+inf".into(), |v| v.to_string())
                );
                Ok(ExitCode::from(1))
            }
        }
        Command::Oracle { window, output } => {
            let p = lookup(&window.pattern)?;
            let f: FeatureKind = window.feature.parse()?;
            let x = read_series(&window.input)?;
            let values = oracle_windows(f, p, window.m, &x)?;
            let report = WindowReport {
                m: window.m,
                low: *values.iter().min().expect("at least one window"),
                up: *values.iter().max().expect("at least one window"),
                values,
                equation: EquationKind::NoneFallback,
                fallback: true,
            };
            print_report(&mut out, p, f, &report, output.format())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { pattern, feature, m, input, count, max_len, seed } => {
            let patterns: Vec<&'static Pattern> = match (&pattern.pattern, &pattern.regex) {
                (Some(name), _) => vec![lookup(name)?],
                (None, Some(_)) => bail!("compare needs a catalog pattern"),
                (None, None) => catalog().iter().filter(|p| !catalog_features(p).is_empty()).collect(),
            };
            let feature: Option<FeatureKind> = feature.map(|f| f.parse()).transpose()?;
            let series: Vec<Series> = match &input {
                Some(path) => vec![read_series(path)?],
                None => random_series(seed, count, max_len.max(2)),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
            let mut checked = 0usize;
            for p in patterns {
                let features: Vec<FeatureKind> = match feature {
                    Some(f) => vec![f],
                    None => catalog_features(p).to_vec(),
                };
                for f in features {
                    let eq = select_equation(f, p)?;
                    for (k, x) in series.iter().enumerate() {
                        let width = match m {
                            Some(m) => m,
                            None => rng.random_range(2..=x.len()),
                        };
                        let got = slide_check_with(f, p, width, x, eq)?.values;
                        let want = oracle_windows(f, p, width, x)?;
                        checked += 1;
                        if let Some(i) = (0..want.len()).find(|&i| got[i] != want[i]) {
                            writeln!(
                                out,
                                "divergence: {f} on {} with {eq}, series #{k} ({}), m={width}, window {}: checker {} oracle {}",
                                p.name(),
                                join(x.values()),
                                i + 1,
                                got[i],
                                want[i]
                            )?;
                            return Ok(ExitCode::from(1));
                        }
                    }
                }
            }
            writeln!(out, "ok: {checked} comparisons, no divergence")?;
            Ok(ExitCode::SUCCESS)
        }
        Command::WitnessMap { json } => {
            let report = verify_feasibility_map()?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                for row in &report.rows {
                    writeln!(
                        out,
                        "{} {:<16} {:<28} {}",
                        if row.passed { "pass" } else { "FAIL" },
                        row.triple.to_string(),
                        row.witness,
                        row.sample.as_deref().unwrap_or("-")
                    )?;
                }
                for v in &report.violations {
                    writeln!(out, "FAIL {} is feasible for {}", v.triple, v.source)?;
                }
                let passed = report.rows.iter().filter(|r| r.passed).count();
                writeln!(
                    out,
                    "{passed}/{} rows verified, {} languages swept, {} violations",
                    report.rows.len(),
                    report.languages_swept,
                    report.violations.len()
                )?;
            }
            Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Counterexamples { json } => {
            let rows = reproduce_counterexamples()?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?;
            } else {
                for r in &rows {
                    let status = match (r.skipped, r.passed) {
                        (true, _) => "skip",
                        (false, true) => "pass",
                        (false, false) => "FAIL",
                    };
                    write!(out, "{status} {:<40} {:<6}", r.constraint, r.equation.to_string())?;
                    if !r.skipped {
                        write!(out, " oracle {} computed {}", join(&r.oracle), join(&r.computed))?;
                    }
                    if !r.detail.is_empty() {
                        write!(out, " ({})", r.detail)?;
                    }
                    writeln!(out)?;
                }
            }
            let failed = rows.iter().filter(|r| !r.passed).count();
            let replayed = rows.iter().filter(|r| !r.skipped).count();
            if !json {
                writeln!(out, "{replayed} rows replayed, {} skipped, {failed} failed", rows.len() - replayed)?;
            }
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Reformulate { pattern, feature, m, n, equation, output } => {
            let p = lookup(&pattern)?;
            let f: FeatureKind = feature.parse()?;
            let eq = equation.resolve(f, p)?;
            let text = emit_reformulation(f, p, m, n, eq)?.to_json();
            match output {
                Some(path) => fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
                None => writeln!(out, "{text}")?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Dot { pattern } => {
            let resolved = pattern.required()?;
            write!(out, "{}", resolved.get().language().to_dot())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn join(values: &[i64]) -> String {
    values.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn random_series(seed: u64, count: usize, max_len: usize) -> Vec<Series> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=max_len);
            Series::new((0..n).map(|_| rng.random_range(-5..=5)).collect()).expect("n ≥ 2")
        })
        .collect()
}

fn print_report(out: &mut impl Write, p: &Pattern, f: FeatureKind, r: &WindowReport, format: Format) -> Result<()> {
    match format {
        Format::Json => {
            let v = json!({
                "pattern": p.name(),
                "feature": f,
                "m": r.m,
                "equation": r.equation,
                "values": r.values,
                "low": r.low,
                "up": r.up,
                "fallback": r.fallback,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        Format::Csv => {
            writeln!(out, "i,j,value")?;
            for (k, v) in r.values.iter().enumerate() {
                writeln!(out, "{},{},{v}", k + 1, k + r.m)?;
            }
        }
        Format::Table => {
            writeln!(out, "{f} on {} m={} equation={}", p.name(), r.m, r.equation)?;
            writeln!(out, "values: {}", r.values.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))?;
            writeln!(out, "low={} up={}", r.low, r.up)?;
        }
    }
    Ok(())
}
