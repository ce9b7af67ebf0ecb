use std::io::Read;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use plumitif_cli::config::{build_pipeline, resolve, Layer, DEFAULT_PORT};
use plumitif_cli::service::router;
use plumitif_core::ccc::{parse_ccc_html, sha256_hex, SourceInfo};
use plumitif_core::corpus::{
    evaluate_error_rates, evaluate_extraction, format_rate, profile_by_name, synthesize, DistrictProfile, GoldPlumitif,
};
use plumitif_core::PartStatus;

#[derive(Parser)]
#[command(name = "plumitif", version, about = "French summaries of Quebec criminal dockets")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// TOML configuration file [env: PLUMITIF_CONFIG]
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Provision store, JSON or statute HTML [env: PLUMITIF_STORE]
    #[arg(long, global = true)]
    store: Option<PathBuf>,
    #[arg(long, global = true)]
    markers: Option<PathBuf>,
    #[arg(long, global = true)]
    tagger_rules: Option<PathBuf>,
    #[arg(long, global = true)]
    templates: Option<PathBuf>,
    #[arg(long, global = true)]
    prepositions: Option<PathBuf>,
    /// [env: PLUMITIF_MAX_INPUT_BYTES]
    #[arg(long, global = true)]
    max_input_bytes: Option<usize>,
    /// Fill-mask endpoint used to pick prepositions [env: PLUMITIF_FILL_MASK_URL]
    #[arg(long, global = true)]
    fill_mask_url: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize one docket.
    Summarize {
        /// Docket file, `-` for stdin
        #[arg(long = "in", default_value = "-")]
        input: String,
        /// Print the full summary as JSON
        #[arg(long)]
        json: bool,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long)]
        host: Option<String>,
        #[arg(long)]
        port: Option<u16>,
    },
    /// Convert statute HTML to a provision store file.
    ParseCcc {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Recorded as the store's source URL
        #[arg(long)]
        url: Option<String>,
    },
    /// Write a synthetic annotated corpus.
    Synthesize {
        /// Profile file (TOML or JSON), or a bundled district name
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score extraction and error rates on a corpus.
    Evaluate {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

impl GlobalArgs {
    fn layer(&self) -> Layer {
        Layer {
            store: self.store.clone(),
            markers: self.markers.clone(),
            tagger_rules: self.tagger_rules.clone(),
            templates: self.templates.clone(),
            prepositions: self.prepositions.clone(),
            max_input_bytes: self.max_input_bytes,
            fill_mask_url: self.fill_mask_url.clone(),
            host: None,
            port: None,
        }
    }
}

fn read_input(input: &str) -> Result<String> {
    if input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        std::fs::read_to_string(input).with_context(|| format!("reading {input}"))
    }
}

fn load_profile(arg: &str) -> Result<DistrictProfile> {
    let path = Path::new(arg);
    if path.is_file() {
        let src = std::fs::read_to_string(path)?;
        let profile: DistrictProfile = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&src)?
        } else {
            toml::from_str(&src)?
        };
        profile.validate()?;
        return Ok(profile);
    }
    profile_by_name(arg).with_context(|| format!("{arg}: no such profile file or district"))
}

fn doc_path(dir: &Path, i: usize) -> PathBuf {
    dir.join(format!("doc-{i:05}.json"))
}

fn load_corpus(dir: &Path) -> Result<Vec<GoldPlumitif>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    paths.retain(|p| {
        p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with("doc-") && n.ends_with(".json"))
    });
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let src = std::fs::read_to_string(p)?;
            serde_json::from_str(&src).with_context(|| format!("parsing {}", p.display()))
        })
        .collect()
}

fn run(cli: Cli) -> Result<()> {
    let env = |k: &str| std::env::var(k).ok();
    let mut flags = cli.global.layer();
    if let Command::Serve { host, port } = &cli.command {
        flags.host = host.clone();
        flags.port = *port;
    }
    let settings = resolve(flags, cli.global.config.clone(), env)?;

    match cli.command {
        Command::Summarize { input, json } => {
            let pipeline = build_pipeline(&settings)?;
            let summary = pipeline.summarize(&read_input(&input)?)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&summary)?);
            } else {
                println!("{}", summary.to_text());
                for p in summary.report.parts.iter().filter(|p| p.status != PartStatus::Ok) {
                    eprintln!("{:?} {:?}: {}", p.part, p.status, p.message.as_deref().unwrap_or(""));
                }
                for w in &summary.report.warnings {
                    eprintln!("warning: {w}");
                }
            }
            if !summary.realized_any() {
                bail!("no part of the docket could be summarized");
            }
        }
        Command::Serve { .. } => {
            let pipeline = Arc::new(build_pipeline(&settings)?);
            let host = settings.host.as_deref().unwrap_or("127.0.0.1");
            let addr: SocketAddr = format!("{host}:{}", settings.port.unwrap_or(DEFAULT_PORT))
                .parse()
                .context("bad host or port")?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async move {
                let listener = tokio::net::TcpListener::bind(addr).await?;
                tracing::info!(%addr, provisions = pipeline.store.len(), "listening");
                axum::serve(listener, router(pipeline))
                    .with_graceful_shutdown(async {
                        let _ = tokio::signal::ctrl_c().await;
                    })
                    .await?;
                anyhow::Ok(())
            })?;
        }
        Command::ParseCcc { input, out, url } => {
            let html = std::fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let mut store = parse_ccc_html(&html)?;
            store.source = Some(SourceInfo { url, fetched: None, sha256: Some(sha256_hex(html.as_bytes())) });
            std::fs::write(&out, store.export_json()).with_context(|| format!("writing {}", out.display()))?;
            eprintln!("{} provisions written to {}", store.len(), out.display());
        }
        Command::Synthesize { profile, seed, n, out } => {
            let profile = load_profile(&profile)?;
            let docs = synthesize(&profile, seed, n)?;
            std::fs::create_dir_all(&out)?;
            for (i, d) in docs.iter().enumerate() {
                std::fs::write(doc_path(&out, i), serde_json::to_string_pretty(d)?)?;
            }
            eprintln!("{} documents for {} written to {}", docs.len(), profile.name, out.display());
        }
        Command::Evaluate { corpus, report } => {
            let docs = load_corpus(&corpus)?;
            let pipeline = build_pipeline(&settings)?;
            let extraction = evaluate_extraction(&docs, pipeline.tagger.as_ref(), &pipeline.markers)?;
            let rates = evaluate_error_rates(&docs, &pipeline)?;
            println!("{:<20} {:>6} {:>7} {:>7}", "district", "docs", "EE", "GE");
            for (name, r) in &rates.districts {
                println!("{name:<20} {:>6} {:>7} {:>7}", r.documents, format_rate(r.ee_rate), format_rate(r.ge_rate));
            }
            println!(
                "{:<20} {:>6} {:>7} {:>7}",
                "all",
                rates.total.documents,
                format_rate(rates.total.ee_rate),
                format_rate(rates.total.ge_rate)
            );
            println!("macro F1 {:.4}", extraction.scores.macro_f1);
            if let Some(path) = report {
                let v = serde_json::json!({ "extraction": extraction, "error_rates": rates });
                std::fs::write(&path, serde_json::to_string_pretty(&v)?)?;
            }
        }
    }
    Ok(())
}

fn main() {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(std::io::stderr)
        .init();
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
