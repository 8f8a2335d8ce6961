use std::io::ErrorKind;
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use droopvessel::Domain;
use droopvessel_cli::commands::{demo, equilibrium_at, run_file, RunArgs};
use droopvessel_cli::server::{serve, ServeConfig, DEFAULT_FRAME_RATE_HZ};
use droopvessel_cli::{exit, CliError};

#[derive(Parser)]
#[command(name = "droopvessel", version, about = "Communicating vessels as droop-controlled grid sources")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DomainArg {
    Hydraulic,
    Electrical,
}

impl From<DomainArg> for Domain {
    fn from(d: DomainArg) -> Self {
        match d {
            DomainArg::Hydraulic => Domain::Hydraulic,
            DomainArg::Electrical => Domain::Electrical,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DemoName {
    Grid,
    Interconnected,
    Microgrid,
}

impl DemoName {
    fn as_str(self) -> &'static str {
        match self {
            DemoName::Grid => "grid",
            DemoName::Interconnected => "interconnected",
            DemoName::Microgrid => "microgrid",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and export its time series as CSV
    Run {
        file: PathBuf,
        /// CSV destination; the event list goes next to it as <name>.events.csv
        #[arg(long)]
        out: Option<PathBuf>,
        /// Column units; defaults to the domain the file declares
        #[arg(long, value_enum)]
        domain: Option<DomainArg>,
        /// Replace a scenario value, e.g. network.pipes.p12.conductance=2
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Run a builtin demonstration and print its summary
    Demo {
        #[arg(value_enum)]
        name: DemoName,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Predict where each connected component settles
    Equilibrium {
        file: PathBuf,
        /// Use the topology, elevations and volumes in force at this time (s)
        #[arg(long, default_value_t = 0.0)]
        at: f64,
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Serve live sessions over WebSocket at /ws
    Serve {
        #[arg(long, env = "DROOPVESSEL_PORT", default_value_t = droopvessel_cli::server::DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Directory of static UI assets served at /
        #[arg(long)]
        ui: Option<PathBuf>,
        /// Frames per second sent to each client
        #[arg(long, default_value_t = DEFAULT_FRAME_RATE_HZ)]
        frame_rate: f64,
    },
}

fn serve_blocking(addr: SocketAddr, config: ServeConfig) -> Result<(), CliError> {
    if !(config.frame_rate_hz.is_finite() && config.frame_rate_hz > 0.0) {
        return Err(CliError::new(exit::PARSE, "--frame-rate must be positive"));
    }
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::new(exit::RUNTIME, e.to_string()))?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr).await.map_err(|e| {
            let code = if e.kind() == ErrorKind::AddrInUse { exit::PORT_IN_USE } else { exit::RUNTIME };
            CliError::new(code, format!("cannot listen on {addr}: {e}"))
        })?;
        eprintln!("serving sessions on ws://{}/ws", listener.local_addr().unwrap_or(addr));
        serve(listener, config)
            .await
            .map_err(|e| CliError::new(exit::RUNTIME, e.to_string()))
    })
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let mut stdout = std::io::stdout().lock();
    let mut stderr = std::io::stderr();
    match cli.command {
        Command::Run {
            file,
            out,
            domain,
            overrides,
        } => run_file(
            RunArgs {
                file: &file,
                out: out.as_deref(),
                domain: domain.map(Domain::from),
                overrides: &overrides,
            },
            &mut stdout,
            &mut stderr,
        ),
        Command::Demo { name, out } => demo(name.as_str(), out.as_deref(), &mut stdout),
        Command::Equilibrium { file, at, overrides } => equilibrium_at(&file, at, &overrides, &mut stdout),
        Command::Serve {
            port,
            host,
            ui,
            frame_rate,
        } => serve_blocking(
            SocketAddr::new(host, port),
            ServeConfig {
                frame_rate_hz: frame_rate,
                ui_dir: ui,
                ..ServeConfig::default()
            },
        ),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
