use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand};
use litvar_cli::commands::open_index;
use litvar_cli::{cmd_ingest, cmd_query, render_hits, render_report, router, AppState, CliError, Config, OutputFormat};
use litvar_core::extract::list_pattern_classes;
use litvar_core::index::SharedIndex;
use tracing_subscriber::EnvFilter;

#[derive(Parser)]
#[command(name = "litvar", version, about = "Variant-to-article literature index")]
struct Cli {
    /// Flat key = value config file
    #[arg(long, global = true, env = "LITVAR_CONFIG")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Add a PubTator corpus to the index
    Ingest {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Look up articles mentioning a variant
    Query {
        variant: String,
        #[arg(long)]
        gene: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        format: OutputFormat,
    },
    /// Serve the read-only HTTP API
    Serve {
        #[arg(long)]
        listen: Option<String>,
    },
    /// List mention pattern classes
    Patterns,
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Command::Patterns = cli.command {
        for (class, description) in list_pattern_classes() {
            println!("{class}\t{description}");
        }
        return Ok(());
    }
    let config = Config::load(cli.config.as_deref())?;
    let resources = config.resources()?;
    match cli.command {
        Command::Ingest { path, format } => {
            let report = cmd_ingest(&path, &config, &resources)?;
            match format {
                OutputFormat::Text => print!("{}", render_report(&report)),
                OutputFormat::Json => print!("{}", json(&report)),
            }
        }
        Command::Query { variant, gene, format } => {
            let response = cmd_query(&variant, gene.as_deref(), &config, &resources)?;
            match format {
                OutputFormat::Text => print!("{}", render_hits(&response)),
                OutputFormat::Json => print!("{}", json(&response)),
            }
        }
        Command::Serve { listen } => {
            let listen = listen.unwrap_or_else(|| config.listen.clone());
            serve(&config, resources, &listen)?;
        }
        Command::Patterns => unreachable!(),
    }
    Ok(())
}

fn serve(config: &Config, resources: litvar_core::index::Resources, listen: &str) -> anyhow::Result<()> {
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let state = AppState {
            index: Arc::new(SharedIndex::loading()),
            resources: Arc::new(resources),
        };
        let shared = Arc::clone(&state.index);
        let segment = config.segment_path();
        tokio::task::spawn_blocking(move || match open_index(&segment) {
            Ok(index) => {
                tracing::info!(documents = index.document_count(), keys = index.key_count(), "index loaded");
                shared.publish(index);
            }
            Err(e) => tracing::error!("{e}"),
        });
        let listener = tokio::net::TcpListener::bind(listen)
            .await
            .with_context(|| format!("binding {listen}"))?;
        tracing::info!("listening on {}", listener.local_addr()?);
        axum::serve(listener, router(state))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok(())
    })
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .with_writer(std::io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.exit_code())
        }
    }
}
