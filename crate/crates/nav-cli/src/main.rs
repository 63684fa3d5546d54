//! `nav` — the workspace command. A workspace directory holds the monitoring
//! specification (`spec/*.nav`), imported sensor data (`data/`), evaluation
//! results (`results/`), the ticket board (`tickets/`) and rendered reports
//! (`reports/`). Exit codes: 0 success, 1 validation or parse failure,
//! 2 I/O failure, 3 evaluation finished but skipped artifacts.

mod config;
mod error;
mod export;
mod import;
mod pipeline;
mod workspace;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use navlang::{validate_spec, Timestamp};

use crate::config::RunConfig;
use crate::error::{Failure, Result};
use crate::export::{ExportFormat, PlotKindArg};
use crate::import::{DecimalSep, ImportMapping};
use crate::pipeline::RunSummary;
use crate::workspace::Workspace;

#[derive(Parser)]
#[command(
    name = "nav",
    version,
    about = "Building-monitoring workspace: import data, evaluate rules, track tickets, render reports"
)]
struct Cli {
    /// Workspace directory.
    #[arg(long, global = true, default_value = ".")]
    workspace: PathBuf,

    /// Run configuration file (default: <workspace>/workspace.cfg).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// More detail on stderr.
    #[arg(long, global = true)]
    verbose: bool,

    /// Override the clock (YYYY-MM-DDTHH:MM:SS), for reproducible runs.
    #[arg(long, global = true)]
    now: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Import one sensor's readings from a CSV file.
    Import {
        /// Source CSV file.
        file: PathBuf,
        /// Sensor id to store the readings under.
        #[arg(long)]
        sensor: String,
        /// Column holding the timestamps.
        #[arg(long, default_value = "timestamp")]
        timestamp_column: String,
        /// Column holding the values.
        #[arg(long, default_value = "value")]
        value_column: String,
        /// Decimal separator used in the value column.
        #[arg(long, value_enum, default_value_t = DecimalSep::Point)]
        decimal: DecimalSep,
        /// strftime pattern for the timestamps; default is ISO `%Y-%m-%dT%H:%M:%S`.
        #[arg(long)]
        timestamp_format: Option<String>,
        /// Replace readings already stored for this sensor.
        #[arg(long)]
        overwrite: bool,
    },
    /// Parse and validate the specification; writes nothing.
    Check,
    /// Full run: preprocess, evaluate, update tickets, render reports.
    Eval,
    /// Re-extract violations from stored results and update the ticket board.
    Tickets,
    /// Re-render reports from stored results.
    Report,
    /// Export stored series to CSV or JSON.
    Export {
        /// Virtual-sensor names to export.
        names: Vec<String>,
        #[arg(long, value_enum, default_value_t = ExportFormat::Tabular)]
        format: ExportFormat,
        /// Output file (default: results/export.csv or results/export.json).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extract chart-ready plot data from stored series.
    Plot {
        /// One series (line, carpet) or two (scatter: x then y).
        names: Vec<String>,
        #[arg(long, value_enum, default_value_t = PlotKindArg::Line)]
        kind: PlotKindArg,
        /// Output file (default: reports/plot.json).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let ws = Workspace::open(&cli.workspace)?;
    let now = match &cli.now {
        Some(text) => Timestamp::parse(text).map_err(|_| {
            Failure::validation(format!("cannot parse --now `{text}`: expected YYYY-MM-DDTHH:MM:SS"))
        })?,
        None => system_now(),
    };
    let cfg = || RunConfig::load(cli.config.as_deref(), &ws.config_path());

    match cli.command {
        Command::Import {
            file,
            sensor,
            timestamp_column,
            value_column,
            decimal,
            timestamp_format,
            overwrite,
        } => {
            let _lock = ws.lock()?;
            let mapping = ImportMapping {
                source: file,
                timestamp_column,
                value_column,
                sensor,
                decimal,
                timestamp_format,
            };
            cmd_import(&ws, &mapping, overwrite, cli.verbose)
        }
        Command::Check => cmd_check(&ws, cli.verbose),
        Command::Eval => {
            let _lock = ws.lock()?;
            cmd_eval(&ws, &cfg()?, now)
        }
        Command::Tickets => {
            let _lock = ws.lock()?;
            cmd_tickets(&ws, &cfg()?, now)
        }
        Command::Report => {
            let _lock = ws.lock()?;
            cmd_report(&ws, &cfg()?, now)
        }
        Command::Export { names, format, out } => {
            let path = export::export_results(&ws, &names, format, out.as_deref())?;
            println!("exported {} series to {}", names.len(), path.display());
            Ok(0)
        }
        Command::Plot { names, kind, out } => {
            let path = export::write_plot(&ws, kind, &names, out.as_deref())?;
            println!("wrote plot data to {}", path.display());
            Ok(0)
        }
    }
}

fn system_now() -> Timestamp {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs() as i64)
        .unwrap_or(0);
    Timestamp::from_epoch_seconds(secs).expect("system clock in representable range")
}

fn cmd_import(
    ws: &Workspace,
    mapping: &ImportMapping,
    overwrite: bool,
    verbose: bool,
) -> Result<u8> {
    let summary = import::import_csv(ws, mapping, overwrite)?;
    println!(
        "imported {} of {} rows as `{}`",
        summary.imported, summary.rows_read, summary.sensor
    );
    if let Some((lo, hi)) = summary.span {
        println!("  span {lo} .. {hi}");
    }
    if summary.imported == 0 {
        eprintln!("warning: no samples imported");
    }
    if !summary.rejected.is_empty() {
        eprintln!("{} rows rejected:", summary.rejected.len());
        let shown = if verbose { summary.rejected.len() } else { summary.rejected.len().min(10) };
        for r in &summary.rejected[..shown] {
            eprintln!("  row {}: {}", r.row, r.reason);
        }
        if shown < summary.rejected.len() {
            eprintln!("  ... {} more (use --verbose)", summary.rejected.len() - shown);
        }
    }
    Ok(0)
}

fn cmd_check(ws: &Workspace, verbose: bool) -> Result<u8> {
    let spec = ws.load_spec()?;
    let catalog = pipeline::data_catalog(ws, &spec);
    let diags = validate_spec(&spec, &catalog);
    for d in diags.iter() {
        eprintln!("{d}");
    }
    if diags.has_errors() {
        return Err(Failure::validation("specification has validation errors"));
    }
    println!(
        "specification OK: {} sensors declared, {} artifacts, {} templates",
        spec.sensors.len(),
        spec.artifacts.len(),
        spec.templates.len()
    );
    if verbose {
        for artifact in &spec.artifacts {
            println!("  {} {}", artifact.kind().keyword(), artifact.name());
        }
    }
    Ok(0)
}

fn cmd_eval(ws: &Workspace, cfg: &RunConfig, now: Timestamp) -> Result<u8> {
    let summary = pipeline::run_pipeline(ws, cfg, now)?;
    print_summary(&summary);
    Ok(if summary.is_partial() { 3 } else { 0 })
}

fn print_summary(s: &RunSummary) {
    println!(
        "grid {} step {}s, {} samples",
        s.grid.start(),
        s.grid.step_secs(),
        s.grid.count()
    );
    println!("sensors aligned: {}", s.sensors);
    println!("artifacts evaluated: {}, skipped: {}", s.evaluated, s.skipped.len());
    for sk in &s.skipped {
        println!("  skipped {}: {}", sk.artifact, sk.reason);
    }
    if !s.fulfillment.is_empty() {
        println!("fulfillment:");
        for f in &s.fulfillment {
            match f.ratio {
                Some(r) => println!(
                    "  {}: {:.1}% ({} of {} decided samples)",
                    f.name,
                    r * 100.0,
                    f.true_count,
                    f.decided()
                ),
                None => println!("  {}: no decided samples", f.name),
            }
        }
    }
    println!(
        "tickets: {} open ({} new), {} resolved",
        s.tickets.open, s.tickets.fresh, s.tickets.resolved
    );
    if s.reports.is_empty() && s.report_failures.is_empty() {
        println!("reports: none (no templates selected)");
    } else if !s.reports.is_empty() {
        println!("reports: {}", s.reports.join(", "));
    }
    for (name, reason) in &s.report_failures {
        println!("  report {name} not rendered: {reason}");
    }
}

fn cmd_tickets(ws: &Workspace, cfg: &RunConfig, now: Timestamp) -> Result<u8> {
    let spec = ws.load_spec()?;
    let loaded = pipeline::load_results(ws)?;
    let counts = pipeline::update_tickets(
        ws,
        &spec,
        &loaded.series,
        &loaded.manifest.grid,
        &cfg.ticket,
        now,
    )?;
    println!(
        "tickets: {} open ({} new), {} resolved",
        counts.open, counts.fresh, counts.resolved
    );
    Ok(0)
}

fn cmd_report(ws: &Workspace, cfg: &RunConfig, now: Timestamp) -> Result<u8> {
    let loaded = pipeline::load_results(ws)?;
    let tickets = pipeline::load_ticket_board(ws)?;
    let rendered =
        pipeline::render_reports(ws, cfg, &loaded.series, &loaded.metrics, &tickets, now)?;
    for name in &rendered.written {
        println!("wrote {0}/{1}.html and {0}/{1}.json", ws.reports_dir().display(), name);
    }
    match rendered.failed.as_slice() {
        [] => {}
        [(name, reason)] => {
            return Err(Failure::validation(format!("report `{name}`: {reason}")));
        }
        many => {
            for (name, reason) in many {
                eprintln!("error: report `{name}`: {reason}");
            }
            return Err(Failure::validation(format!(
                "{} report templates failed to render",
                many.len()
            )));
        }
    }
    if rendered.written.is_empty() {
        println!("no report templates in {}", ws.templates_dir().display());
    }
    Ok(0)
}
