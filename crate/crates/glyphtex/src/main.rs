use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use glyphtex::config::{Config, ProviderMode};
use glyphtex::{GenerateOptions, SessionInputs, Studio};
use glyphtex_core::{parse_hex_color, BackgroundColor};

#[derive(Parser)]
#[command(name = "glyphtex", version, about = "Map concept textures onto text")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a textured word image and record it as a session.
    Generate {
        #[arg(long)]
        concept: String,
        #[arg(long)]
        word: String,
        #[arg(long)]
        letter: String,
        /// Where to write the PNG.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_parser = ["procedural", "file", "remote"])]
        provider: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        scale: Option<f64>,
        #[arg(long, value_parser = parse_background)]
        background: Option<BackgroundColor>,
        /// TrueType/OpenType font used for the plain layout.
        #[arg(long)]
        font: Option<PathBuf>,
        /// Texture PNG for the file provider.
        #[arg(long)]
        texture: Option<PathBuf>,
        /// Generation service URL for the remote provider.
        #[arg(long)]
        endpoint: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Recompose an existing session with a new scale and/or background.
    Adjust {
        #[arg(long)]
        session: String,
        #[arg(long)]
        scale: Option<f64>,
        #[arg(long, value_parser = parse_background)]
        background: Option<BackgroundColor>,
        /// Also write the adjusted PNG here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long)]
        listen: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Print the Lanczos kernel as CSV.
    Kernel {
        #[arg(long, default_value_t = 3)]
        lobes: u32,
        #[arg(long, default_value_t = 64)]
        samples_per_unit: u32,
    },
}

#[derive(clap::Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Session directory, overriding the configuration.
    #[arg(long)]
    sessions: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> anyhow::Result<Config> {
        let mut config = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        if let Some(dir) = &self.sessions {
            config.session_dir = dir.clone();
        }
        Ok(config)
    }
}

fn parse_background(text: &str) -> Result<BackgroundColor, String> {
    parse_hex_color(text).map_err(|e| e.to_string())
}

fn write_png(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Generate {
            concept,
            word,
            letter,
            out,
            provider,
            seed,
            scale,
            background,
            font,
            texture,
            endpoint,
            common,
        } => {
            let mut config = common.load()?;
            if let Some(mode) = provider {
                config.provider.mode = match mode.as_str() {
                    "file" => ProviderMode::File,
                    "remote" => ProviderMode::Remote,
                    _ => ProviderMode::Procedural,
                };
            }
            if texture.is_some() {
                config.provider.file_path = texture;
            }
            if endpoint.is_some() {
                config.provider.endpoint = endpoint;
            }
            if font.is_some() {
                config.font_path = font;
            }
            let studio = Studio::new(config)?;
            let inputs = SessionInputs::new(&concept, &word, &letter)?;
            let session = studio.generate(&inputs, &GenerateOptions { seed, scale, background })?;
            write_png(&out, &studio.export_png(&session.meta.id)?)?;
            println!("{}", session.meta.id);
        }
        Command::Adjust { session, scale, background, out, common } => {
            if scale.is_none() && background.is_none() {
                bail!("nothing to adjust: pass --scale and/or --background");
            }
            let studio = Studio::new(common.load()?)?;
            studio.adjust(&session, scale, background)?;
            if let Some(out) = out {
                write_png(&out, &studio.export_png(&session)?)?;
            }
            println!("{session}");
        }
        Command::Serve { listen, common } => {
            let mut config = common.load()?;
            if let Some(addr) = listen {
                config.listen = addr;
            }
            let addr = config.listen.clone();
            let studio = Arc::new(Studio::new(config)?);
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(async move {
                let listener = tokio::net::TcpListener::bind(&addr)
                    .await
                    .with_context(|| format!("cannot listen on {addr}"))?;
                glyphtex::server::serve(studio, listener).await?;
                anyhow::Ok(())
            })?;
        }
        Command::Kernel { lobes, samples_per_unit } => {
            if lobes == 0 || samples_per_unit == 0 {
                bail!("--lobes and --samples-per-unit must be positive");
            }
            let mut csv = String::from("x,weight\n");
            for (x, w) in glyphtex_core::resample::kernel_table(lobes, samples_per_unit) {
                csv += &format!("{x},{w}\n");
            }
            match std::io::stdout().lock().write_all(csv.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.to_string();
            let summary: Vec<&str> = rendered
                .lines()
                .map(str::trim)
                .take_while(|l| !l.is_empty() && !l.starts_with("Usage:"))
                .collect();
            let line = summary.join(" ");
            eprintln!("error: {}", line.strip_prefix("error: ").unwrap_or(&line));
            return ExitCode::from(2);
        }
    };
    // Diagnostics stay quiet on the command line so failures remain a
    // single stderr line; the service logs at info.
    let default_level = if matches!(cli.command, Command::Serve { .. }) { "info" } else { "error" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(default_level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = format!("{e:#}").replace('\n', " ");
            eprintln!("error: {line}");
            ExitCode::FAILURE
        }
    }
}
