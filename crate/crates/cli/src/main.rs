use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use owlspeak_cli::{chat::chat, golden_diff, run_script, Http, InProcess, Script};
use owlspeak_core::sim::{builtin_presets, load_preset_dir, DomainPreset};
use owlspeak_core::wire::SessionService;
use owlspeak_server::BackgroundServer;

#[derive(Parser)]
#[command(name = "owlspeak", version, about = "Ontology-driven dialogue manager")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Serve the session API over HTTP.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// 0 picks a free port and prints it.
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Directory of preset files; defaults to the built-in presets.
        #[arg(long)]
        presets: Option<PathBuf>,
    },
    /// Replay a dialogue script and print its transcript.
    RunScript {
        script: PathBuf,
        /// Compare the transcript byte for byte with this file.
        #[arg(long)]
        golden: Option<PathBuf>,
        /// Drive a local HTTP server instead of the library, and check both agree.
        #[arg(long)]
        over_http: bool,
        #[arg(long)]
        presets: Option<PathBuf>,
    },
    /// Talk to the system in the terminal.
    Chat {
        preset: String,
        #[arg(long)]
        presets: Option<PathBuf>,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("owlspeak: {msg}");
    ExitCode::from(code)
}

fn presets(dir: Option<&Path>) -> Result<Vec<DomainPreset>, ExitCode> {
    match dir {
        None => Ok(builtin_presets()),
        Some(dir) => load_preset_dir(dir).map_err(|e| fail(2, e)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Serve { host, port, presets: dir } => serve(&host, port, dir.as_deref()),
        Command::RunScript {
            script,
            golden,
            over_http,
            presets: dir,
        } => cmd_run_script(&script, golden.as_deref(), over_http, dir.as_deref()),
        Command::Chat { preset, presets: dir } => cmd_chat(&preset, dir.as_deref()),
    };
    result.unwrap_or_else(|code| code)
}

fn serve(host: &str, port: u16, dir: Option<&Path>) -> Result<ExitCode, ExitCode> {
    let service = Arc::new(SessionService::new(presets(dir)?));
    let runtime = tokio::runtime::Runtime::new().map_err(|e| fail(1, e))?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind((host, port))
            .await
            .map_err(|e| fail(1, format!("cannot bind {host}:{port}: {e}")))?;
        let addr = listener.local_addr().map_err(|e| fail(1, e))?;
        println!("listening on http://{addr}");
        let _ = io::stdout().flush();
        owlspeak_server::serve(listener, service)
            .await
            .map_err(|e| fail(1, e))?;
        Ok(ExitCode::SUCCESS)
    })
}

fn cmd_run_script(
    path: &Path,
    golden: Option<&Path>,
    over_http: bool,
    dir: Option<&Path>,
) -> Result<ExitCode, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    let script = Script::parse(&text).map_err(|e| fail(2, format!("{}: {e}", path.display())))?;
    let presets = presets(dir)?;
    if !presets.iter().any(|p| p.name == script.preset) {
        return Err(fail(2, format!("unknown preset {:?}", script.preset)));
    }

    let local = run_script(&InProcess(Arc::new(SessionService::new(presets.clone()))), &presets, &script)
        .map_err(|e| fail(2, e))?;
    if over_http {
        let server = BackgroundServer::start(
            SocketAddr::from(([127, 0, 0, 1], 0)),
            Arc::new(SessionService::new(presets.clone())),
        )
        .map_err(|e| fail(2, format!("cannot start server: {e}")))?;
        let remote = run_script(&Http::new(&server.base_url()), &presets, &script).map_err(|e| fail(2, e))?;
        if remote != local {
            eprint!("{}", golden_diff(&local, &remote));
            return Err(fail(1, "HTTP transcript differs from the in-process transcript"));
        }
    }
    print!("{local}");

    if let Some(golden) = golden {
        let expected =
            std::fs::read_to_string(golden).map_err(|e| fail(2, format!("{}: {e}", golden.display())))?;
        let diff = golden_diff(&expected, &local);
        if !diff.is_empty() {
            eprint!("{diff}");
            return Err(fail(1, format!("transcript differs from {}", golden.display())));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_chat(preset: &str, dir: Option<&Path>) -> Result<ExitCode, ExitCode> {
    let presets = presets(dir)?;
    let Some(chosen) = presets.iter().find(|p| p.name == preset).cloned() else {
        return Err(fail(2, format!("unknown preset {preset:?}")));
    };
    let backend = InProcess(Arc::new(SessionService::new(presets)));
    chat(&backend, &chosen, io::stdin().lock(), io::stdout().lock()).map_err(|e| fail(1, e))?;
    Ok(ExitCode::SUCCESS)
}
