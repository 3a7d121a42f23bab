use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use fieldmon_client::{ChartFormat, Client, ClientError};
use fieldmon_core::api::{
    chart_body, chart_svg, indicator_body, resolve_chart, resolve_query, schema_body, summary_body, ApiError,
    ApiRequest, Snapshot,
};
use fieldmon_core::canonical::to_canonical_json;
use fieldmon_core::corpus::{ingest_directory, read_tabular, save_corpus, write_tabular, Corpus, Pipeline};
use fieldmon_core::schema::{RuleSet, Schema};
use fieldmon_core::synth::{synth_records, write_pages, SynthOptions};
use fieldmon_service::AppState;

#[derive(Parser)]
#[command(name = "fieldmon", version, about = "Research-field monitoring over semantic-wiki project pages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a corpus file from wiki pages or from a tab-separated table.
    Ingest(IngestArgs),
    /// Print an indicator as canonical JSON.
    Indicator {
        indicator: String,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Write a chart as SVG or JSON, chosen by the output extension.
    Chart {
        indicator: String,
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Print the corpus summary.
    Summary {
        #[command(flatten)]
        source: Source,
    },
    /// Print attribute mapping, areas and option lists.
    Schema {
        #[command(flatten)]
        source: Source,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: String,
        /// Directory of UI assets served at `/`.
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
    },
    /// Generate a seeded synthetic corpus as pages or as a table.
    Synth {
        #[arg(long, default_value_t = 1000)]
        records: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, conflicts_with = "tabular", required_unless_present = "tabular")]
        pages: Option<PathBuf>,
        #[arg(long)]
        tabular: Option<PathBuf>,
    },
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long, conflicts_with = "tabular", requires_all = ["schema", "rules"], required_unless_present = "tabular")]
    pages: Option<PathBuf>,
    #[arg(long)]
    schema: Option<PathBuf>,
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Record-per-row import that skips the wiki pipeline.
    #[arg(long)]
    tabular: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Date that decides completed/starting/current. Defaults to today.
    #[arg(long, value_parser = parse_date)]
    reference_date: Option<NaiveDate>,
}

/// Where answers come from: a local corpus file or a running server.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Base URL of a running server, e.g. http://127.0.0.1:8080
    #[arg(long)]
    server: Option<String>,
}

#[derive(Args)]
struct FilterArgs {
    #[arg(long)]
    status: Option<String>,
    #[arg(long)]
    region: Option<String>,
    #[arg(long)]
    from: Option<String>,
    #[arg(long)]
    to: Option<String>,
    #[arg(long)]
    granularity: Option<String>,
}

impl FilterArgs {
    fn request(self, kind: Option<String>) -> ApiRequest {
        ApiRequest {
            status: self.status,
            region: self.region,
            from: self.from,
            to: self.to,
            kind,
            granularity: self.granularity,
        }
    }
}

fn parse_date(raw: &str) -> Result<NaiveDate, String> {
    NaiveDate::parse_from_str(raw, "%Y-%m-%d").map_err(|e| format!("expected YYYY-MM-DD: {e}"))
}

enum Failure {
    Api(ApiError),
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        Failure::Other(err)
    }
}

impl From<ApiError> for Failure {
    fn from(err: ApiError) -> Self {
        Failure::Api(err)
    }
}

impl From<ClientError> for Failure {
    fn from(err: ClientError) -> Self {
        match err {
            ClientError::Api { status, body } => Failure::Api(ApiError {
                class: if status.as_u16() == 404 {
                    fieldmon_core::api::ErrorClass::NotFound
                } else {
                    fieldmon_core::api::ErrorClass::Validation
                },
                error: body.error,
                parameter: body.parameter,
            }),
            other => Failure::Other(other.into()),
        }
    }
}

fn load_snapshot(path: &Path) -> anyhow::Result<Snapshot> {
    Snapshot::load(path).with_context(|| format!("loading corpus {}", path.display()))
}

fn print_body(body: &str) {
    println!("{body}");
}

fn ingest(args: IngestArgs) -> anyhow::Result<()> {
    let (corpus, report) = match (&args.pages, &args.tabular) {
        (Some(pages), None) => {
            let reference_date = args
                .reference_date
                .unwrap_or_else(|| chrono::Utc::now().date_naive());
            let mut pipeline = Pipeline::builtin(reference_date);
            let schema_path = args.schema.as_deref().context("--schema is required with --pages")?;
            let rules_path = args.rules.as_deref().context("--rules is required with --pages")?;
            let text = fs::read_to_string(schema_path).with_context(|| format!("reading {}", schema_path.display()))?;
            pipeline.schema = Schema::parse(&text, &schema_path.display().to_string())?;
            let text = fs::read_to_string(rules_path).with_context(|| format!("reading {}", rules_path.display()))?;
            pipeline.rules = RuleSet::parse(&text, &rules_path.display().to_string())?;
            ingest_directory(pages, &pipeline)?
        }
        (None, Some(table)) => read_tabular(table)?,
        _ => bail!("give either --pages or --tabular"),
    };
    let snapshot = save_corpus(&corpus, &args.out)?;
    for error in &report.errors {
        eprintln!("skipped {}: {}", error.source, error.message);
    }
    let summary = corpus.summary();
    let body = serde_json::json!({
        "snapshot": snapshot,
        "out": args.out.display().to_string(),
        "report": report,
        "summary": summary,
    });
    print_body(&to_canonical_json(&body)?);
    Ok(())
}

fn write_output(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn chart_format(out: &Path) -> anyhow::Result<ChartFormat> {
    match out.extension().and_then(|e| e.to_str()) {
        Some("svg") => Ok(ChartFormat::Svg),
        Some("json") => Ok(ChartFormat::Json),
        _ => bail!("--out must end in .svg or .json"),
    }
}

async fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Ingest(args) => ingest(args)?,
        Command::Indicator {
            indicator,
            source,
            filter,
        } => {
            let params = filter.request(None);
            let body = match (source.corpus, source.server) {
                (Some(path), _) => {
                    let query = resolve_query(&indicator, &params)?;
                    indicator_body(&load_snapshot(&path)?, &query)?
                }
                (None, Some(server)) => Client::new(&server).indicator(&indicator, &params).await?,
                (None, None) => unreachable!("clap requires a source"),
            };
            print_body(&body);
        }
        Command::Chart {
            indicator,
            kind,
            out,
            source,
            filter,
        } => {
            let format = chart_format(&out)?;
            let params = filter.request(kind);
            let text = match (source.corpus, source.server) {
                (Some(path), _) => {
                    let (query, kind) = resolve_chart(&indicator, &params)?;
                    let snapshot = load_snapshot(&path)?;
                    match format {
                        ChartFormat::Svg => chart_svg(&snapshot, &query, kind)?,
                        ChartFormat::Json => chart_body(&snapshot, &query, kind)?,
                    }
                }
                (None, Some(server)) => Client::new(&server).chart(&indicator, &params, format).await?,
                (None, None) => unreachable!("clap requires a source"),
            };
            write_output(&out, &text)?;
        }
        Command::Summary { source } => {
            let body = match (source.corpus, source.server) {
                (Some(path), _) => summary_body(&load_snapshot(&path)?),
                (None, Some(server)) => Client::new(&server).summary().await?,
                (None, None) => unreachable!("clap requires a source"),
            };
            print_body(&body);
        }
        Command::Schema { source } => {
            let body = match (source.corpus, source.server) {
                (Some(path), _) => schema_body(&load_snapshot(&path)?),
                (None, Some(server)) => Client::new(&server).schema().await?,
                (None, None) => unreachable!("clap requires a source"),
            };
            print_body(&body);
        }
        Command::Serve {
            corpus,
            bind,
            static_dir,
        } => {
            let state = AppState::from_file(&corpus).with_context(|| format!("loading corpus {}", corpus.display()))?;
            let (listener, addr) = fieldmon_service::bind(&bind).await.map_err(anyhow::Error::from)?;
            eprintln!("serving snapshot {} on http://{addr}", state.snapshot().id);
            fieldmon_service::serve(listener, state, static_dir.as_deref())
                .await
                .map_err(anyhow::Error::from)?;
        }
        Command::Synth {
            records,
            seed,
            pages,
            tabular,
        } => {
            let records = synth_records(seed, records, &SynthOptions::default());
            if let Some(dir) = pages {
                write_pages(&dir, &records).map_err(anyhow::Error::from)?;
            }
            if let Some(path) = tabular {
                write_tabular(&path, &records).map_err(anyhow::Error::from)?;
            }
            let corpus = Corpus::from_records(records).map_err(anyhow::Error::from)?;
            eprintln!("{} records", corpus.len());
        }
    }
    Ok(())
}

#[tokio::main]
async fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command).await {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Api(err)) => {
            eprintln!("{}", err.body());
            ExitCode::from(2)
        }
        Err(Failure::Other(err)) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
