//! `zipf-audit`: rank, fit, and audit social account metrics from the
//! command line.
//!
//! Exit status is 0 on success, 1 when the input fails validation or
//! analysis, and 2 on a usage error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, CommandFactory, Parser, Subcommand, ValueEnum};

use zipf_audit::dataset::{self, AccountSet, InputFormat, Metric};
use zipf_audit::format::fmt_num;
use zipf_audit::netmodels;
use zipf_audit::powerlaw::{fit_power_law, residuals_log};
use zipf_audit::pratio::{bin_log, p_ratio_records, BIN_EDGES};
use zipf_audit::{audit, zipf, Error, DEFAULT_SEED};

#[derive(Parser, Debug)]
#[command(
    name = "zipf-audit",
    version,
    about = "Power-law and Zipf analysis of ranked account metrics"
)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank accounts by one metric, or all three.
    Rank {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        metric: Option<MetricArg>,
    },
    /// Fit value = a * rank^k to one metric.
    Fit {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        metric: MetricArg,
        /// Also write whitespace-separated `rank value model` plot data.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Compare one metric against the F/n Zipf model.
    Zipf {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        metric: MetricArg,
    },
    /// Per-account retweet-to-follower ratios.
    Pratio {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Histogram of log10 normalized ratios.
    Bins {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Generate a Zipf series or a synthetic network edge list.
    Synth(SynthArgs),
    /// Full JSON report over every category.
    Audit {
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Account table (CSV or JSON).
    #[arg(long, short)]
    input: PathBuf,
    /// Input format; guessed from the file extension when omitted.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Restrict to accounts with this category tag.
    #[arg(long)]
    category: Option<String>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("kind").required(true).args(["zipf", "ba", "ws"])))]
struct SynthArgs {
    /// Zipf rank series `rank,value`.
    #[arg(long)]
    zipf: bool,
    /// Preferential-attachment graph edge list.
    #[arg(long)]
    ba: bool,
    /// Rewired ring (small-world) graph edge list.
    #[arg(long)]
    ws: bool,
    /// Rank-1 value of the Zipf series.
    #[arg(long = "F", value_name = "F")]
    top: Option<f64>,
    /// Number of ranks in the Zipf series.
    #[arg(long)]
    count: Option<usize>,
    /// Relative noise amplitude in [0, 1).
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Node count.
    #[arg(long)]
    n: Option<usize>,
    /// Edges added per new node (--ba).
    #[arg(long)]
    m: Option<usize>,
    /// Even ring-neighbour count (--ws).
    #[arg(long = "k-ring", alias = "k_ring")]
    k_ring: Option<usize>,
    /// Rewiring probability (--ws).
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, env = "ZIPF_AUDIT_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum MetricArg {
    #[value(name = "total_tweets")]
    TotalTweets,
    #[value(name = "average_retweets")]
    AverageRetweets,
    #[value(name = "total_followers")]
    TotalFollowers,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::TotalTweets => Metric::TotalTweets,
            MetricArg::AverageRetweets => Metric::AverageRetweets,
            MetricArg::TotalFollowers => Metric::TotalFollowers,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn load(args: &InputArgs) -> Result<AccountSet, Error> {
    let format = args.format.map(|f| match f {
        FormatArg::Csv => InputFormat::Csv,
        FormatArg::Json => InputFormat::Json,
    });
    let set = dataset::load_path(&args.input, format)?;
    match &args.category {
        None => Ok(set),
        Some(c) => {
            let subset = set.in_category(c);
            if subset.is_empty() {
                Err(Error::UnknownCategory(c.clone()))
            } else {
                Ok(subset)
            }
        }
    }
}

fn rank(set: &AccountSet, metric: Option<MetricArg>) -> Result<String, Error> {
    let metrics: Vec<Metric> = match metric {
        Some(m) => vec![m.into()],
        None => Metric::ALL.to_vec(),
    };
    let mut out = String::from("metric,rank,name,value\n");
    for m in metrics {
        for e in dataset::rank_metric(set, m)?.entries {
            let _ = writeln!(out, "{m},{},{},{}", e.rank, e.name, fmt_num(e.value));
        }
    }
    Ok(out)
}

fn fit(set: &AccountSet, metric: Metric, plot: Option<&Path>) -> Result<String, Error> {
    let series = dataset::rank_metric(set, metric)?;
    let f = fit_power_law(&series)?;
    let residuals = residuals_log(&series, &f)?;

    let mut out = format!(
        "a={} k={} r2={} n={}\n\nrank,value,model,ln_residual\n",
        fmt_num(f.prefactor),
        fmt_num(f.exponent),
        fmt_num(f.r_squared),
        f.n_points
    );
    let mut plot_data = String::from("# rank value model\n");
    for (e, (_, r)) in series.entries.iter().zip(&residuals) {
        let model = f.eval(e.rank as f64)?;
        let _ = writeln!(
            out,
            "{},{},{},{}",
            e.rank,
            fmt_num(e.value),
            fmt_num(model),
            fmt_num(*r)
        );
        let _ = writeln!(
            plot_data,
            "{} {} {}",
            e.rank,
            fmt_num(e.value),
            fmt_num(model)
        );
    }
    if let Some(path) = plot {
        std::fs::write(path, plot_data)?;
    }
    Ok(out)
}

fn zipf_report(set: &AccountSet, metric: Metric) -> Result<String, Error> {
    let report = zipf::zipf_deviation(&dataset::rank_metric(set, metric)?)?;
    let mut out = String::from("rank,observed,expected,relative_error\n");
    for d in &report.per_rank {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            d.rank,
            fmt_num(d.observed),
            fmt_num(d.expected),
            fmt_num(d.relative_error)
        );
    }
    let _ = writeln!(
        out,
        "# max_abs_relative_error={}",
        fmt_num(report.max_abs_relative_error)
    );
    Ok(out)
}

fn opt_num(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

fn pratio(set: &AccountSet) -> Result<String, Error> {
    let mut out = String::from("name,category,p,n_norm,log_n,bin_lo,bin_hi\n");
    for (rec, acct) in p_ratio_records(set)?.iter().zip(set.records()) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            rec.account_name,
            acct.category,
            fmt_num(rec.p),
            fmt_num(rec.n_norm),
            opt_num(rec.log_n),
            opt_num(rec.bin_index.map(|i| BIN_EDGES[i])),
            opt_num(rec.bin_index.map(|i| BIN_EDGES[i + 1])),
        );
    }
    Ok(out)
}

fn bins(set: &AccountSet) -> Result<String, Error> {
    let h = bin_log(&p_ratio_records(set)?);
    let mut out = String::from("bin_lo,bin_hi,count\n");
    for (w, c) in h.edges.windows(2).zip(&h.counts) {
        let _ = writeln!(out, "{},{},{}", fmt_num(w[0]), fmt_num(w[1]), c);
    }
    let _ = writeln!(out, "underflow,,{}", h.underflow);
    let _ = writeln!(out, "overflow,,{}", h.overflow);
    let _ = writeln!(out, "undefined,,{}", h.undefined);
    Ok(out)
}

enum Failure {
    Usage(clap::Error),
    Analysis(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Analysis(e)
    }
}

fn usage(flag: &str, mode: &str) -> Failure {
    Failure::Usage(Cli::command().error(
        clap::error::ErrorKind::MissingRequiredArgument,
        format!("synth {mode} requires {flag}"),
    ))
}

fn synth(args: &SynthArgs) -> Result<String, Failure> {
    if args.zipf {
        let top = args.top.ok_or_else(|| usage("--F", "--zipf"))?;
        let count = args.count.ok_or_else(|| usage("--count", "--zipf"))?;
        let series = netmodels::gen_zipf_dataset(top, count, args.seed, args.noise)?;
        let mut out = String::new();
        for e in &series.entries {
            let _ = writeln!(out, "{},{}", e.rank, fmt_num(e.value));
        }
        return Ok(out);
    }
    let n = args
        .n
        .ok_or_else(|| usage("--n", if args.ba { "--ba" } else { "--ws" }))?;
    let graph = if args.ba {
        let m = args.m.ok_or_else(|| usage("--m", "--ba"))?;
        netmodels::gen_preferential_attachment(n, m, args.seed)?
    } else {
        let k_ring = args.k_ring.ok_or_else(|| usage("--k-ring", "--ws"))?;
        let beta = args.beta.ok_or_else(|| usage("--beta", "--ws"))?;
        netmodels::gen_small_world(n, k_ring, beta, args.seed)?
    };
    Ok(graph.to_edge_list())
}

fn run(cli: &Cli) -> Result<String, Failure> {
    Ok(match &cli.command {
        Command::Rank { input, metric } => rank(&load(input)?, *metric)?,
        Command::Fit {
            input,
            metric,
            plot,
        } => fit(&load(input)?, (*metric).into(), plot.as_deref())?,
        Command::Zipf { input, metric } => zipf_report(&load(input)?, (*metric).into())?,
        Command::Pratio { input } => pratio(&load(input)?)?,
        Command::Bins { input } => bins(&load(input)?)?,
        Command::Synth(args) => synth(args)?,
        Command::Audit { input } => {
            let mut json = audit::full_report(&load(input)?)?.to_json()?;
            json.push('\n');
            json
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let text = match run(&cli) {
        Ok(text) => text,
        Err(Failure::Usage(e)) => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(Failure::Analysis(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())
        }
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
