use std::io;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use headsup_cli::hotseat::play_local;
use headsup_cli::remote::{run_remote, Entry, RemoteOptions};
use headsup_cli::runs::{self, SimulateOptions};
use headsup_core::sim::FuzzMode;
use headsup_core::{Chips, DeckMode, MatchConfig, Street};
use headsup_server::{serve, Lobby, MatchSettings, ServerConfig};
use tracing_subscriber::EnvFilter;

#[derive(Parser)]
#[command(name = "headsup", version, about = "Heads-up no-limit hold'em")]
struct Cli {
    /// Log filter, e.g. `info` or `headsup_server=debug`.
    #[arg(long, global = true, env = "HEADSUP_LOG", default_value = "warn")]
    log: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the session server.
    Serve {
        #[arg(long, env = "HEADSUP_LISTEN", default_value = "127.0.0.1:8080")]
        listen: String,
        #[arg(long, env = "HEADSUP_MAX_SESSIONS", default_value_t = 64)]
        max_sessions: usize,
        /// Directory to serve at `/`, e.g. the browser client.
        #[arg(long, env = "HEADSUP_STATIC_DIR")]
        static_dir: Option<PathBuf>,
    },
    /// Create a session on a server and play it from this terminal.
    Host {
        #[command(flatten)]
        remote: RemoteArgs,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Join a session by its code.
    Join {
        #[command(flatten)]
        remote: RemoteArgs,
        #[arg(long)]
        code: String,
        /// Token from an earlier connection, to reclaim that seat.
        #[arg(long)]
        token: Option<String>,
    },
    /// Two players share this terminal.
    PlayLocal {
        #[command(flatten)]
        table: TableArgs,
        /// Stop after this many hands.
        #[arg(long)]
        hands: Option<u32>,
    },
    /// Replication under a faulty channel, or two bots over the in-process transport.
    Simulate {
        #[arg(long, value_enum, default_value_t = Transport::Channel)]
        transport: Transport,
        #[arg(long, default_value_t = 1000)]
        hands: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Probability that a message is delivered twice.
        #[arg(long, default_value_t = 0.0)]
        dup: f64,
        /// Messages ready together may arrive in any order within this window.
        #[arg(long, default_value_t = 4)]
        reorder: usize,
        /// Largest delivery delay in ticks.
        #[arg(long, default_value_t = 3)]
        delay: u64,
        /// Force a sequence gap in each of the first N sessions.
        #[arg(long, default_value_t = 0)]
        gaps: u64,
        #[arg(long, value_enum, default_value_t = Deck::Digital)]
        deck: Deck,
        /// Include per-session hashes in the report.
        #[arg(long)]
        full: bool,
    },
    /// Random legal play with invariant checks and replays.
    Fuzz {
        #[arg(long, default_value_t = 10_000)]
        hands: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Mode::Mixed)]
        mode: Mode,
        #[arg(long, default_value_t = 200)]
        stack: Chips,
        #[arg(long, default_value_t = 1)]
        sb: Chips,
        #[arg(long, default_value_t = 2)]
        bb: Chips,
    },
    /// Walk every betting sequence with minimum and all-in amounts.
    Explore {
        #[arg(long, value_enum, default_value_t = StreetArg::All)]
        street: StreetArg,
        /// Stacks in big blinds.
        #[arg(long, value_delimiter = ',', default_values_t = [1, 3, 100])]
        stacks: Vec<Chips>,
        #[arg(long, default_value_t = 1)]
        sb: Chips,
        #[arg(long, default_value_t = 2)]
        bb: Chips,
    },
}

#[derive(Args)]
struct RemoteArgs {
    #[arg(long, env = "HEADSUP_SERVER", default_value = "ws://127.0.0.1:8080/ws")]
    server: String,
    #[arg(long, default_value = "player")]
    name: String,
    /// Play automatically with this seed.
    #[arg(long)]
    bot: Option<u64>,
    /// Leave after this many hands.
    #[arg(long)]
    hands: Option<u32>,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, default_value_t = 200)]
    stack: Chips,
    #[arg(long, default_value_t = 1)]
    sb: Chips,
    #[arg(long, default_value_t = 2)]
    bb: Chips,
    #[arg(long, value_enum, default_value_t = Deck::Digital)]
    deck: Deck,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Deck {
    Digital,
    Physical,
}

#[derive(Clone, Copy, ValueEnum)]
enum Transport {
    Channel,
    Local,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Digital,
    Physical,
    Mixed,
}

#[derive(Clone, Copy, ValueEnum)]
enum StreetArg {
    Preflop,
    Flop,
    Turn,
    River,
    All,
}

impl From<Deck> for DeckMode {
    fn from(d: Deck) -> DeckMode {
        match d {
            Deck::Digital => DeckMode::Digital,
            Deck::Physical => DeckMode::Physical,
        }
    }
}

impl TableArgs {
    fn settings(&self) -> MatchSettings {
        MatchSettings {
            starting_stack: self.stack,
            small_blind: self.sb,
            big_blind: self.bb,
            deck_mode: self.deck.into(),
            rng_seed: self.seed,
        }
    }
}

fn clock_seed() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_nanos() as u64)
}

fn print_report(outcome: runs::Outcome) -> Result<ExitCode> {
    println!("{}", serde_json::to_string_pretty(&outcome.report)?);
    Ok(if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn runtime() -> Result<tokio::runtime::Runtime> {
    Ok(tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()?)
}

async fn shutdown_signal() {
    if tokio::signal::ctrl_c().await.is_err() {
        std::future::pending::<()>().await;
    }
    tracing::info!("interrupt received, closing sessions");
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Serve {
            listen,
            max_sessions,
            static_dir,
        } => runtime()?.block_on(async {
            let listener = tokio::net::TcpListener::bind(&listen)
                .await
                .with_context(|| format!("cannot listen on {listen}"))?;
            eprintln!("listening on {}", listener.local_addr()?);
            let config = ServerConfig {
                max_sessions,
                static_dir,
                ..ServerConfig::default()
            };
            let lobby = Lobby::new(max_sessions);
            serve(listener, Arc::clone(&lobby), config, shutdown_signal()).await?;
            eprintln!("server stopped");
            Ok(ExitCode::SUCCESS)
        }),
        Command::Host { remote, table } => {
            let entry = Entry::Create(table.settings());
            remote_session(remote, entry)
        }
        Command::Join {
            remote,
            code,
            token,
        } => remote_session(remote, Entry::Join { code, token }),
        Command::PlayLocal { table, hands } => {
            let config = MatchConfig {
                starting_stack: table.stack,
                small_blind: table.sb,
                big_blind: table.bb,
                deck_mode: table.deck.into(),
                rng_seed: table.seed.unwrap_or_else(clock_seed),
            };
            println!("enter the number of an action, optionally with an amount (`2 40`); q quits");
            let summary = play_local(config, hands, io::stdin().lock(), io::stdout().lock())?;
            println!(
                "{} hands played; stacks {} / {}",
                summary.hands.len(),
                summary.final_stacks[0],
                summary.final_stacks[1]
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            transport,
            hands,
            seed,
            dup,
            reorder,
            delay,
            gaps,
            deck,
            full,
        } => match transport {
            Transport::Channel => print_report(runs::simulate(&SimulateOptions {
                hands,
                seed,
                duplicate_p: dup,
                reorder_window: reorder,
                max_delay: delay,
                deck_mode: deck.into(),
                gaps,
                full,
            })),
            Transport::Local => {
                let settings = MatchSettings {
                    starting_stack: 10_000,
                    small_blind: 5,
                    big_blind: 10,
                    deck_mode: deck.into(),
                    rng_seed: Some(seed),
                };
                let hands = u32::try_from(hands).context("too many hands")?;
                print_report(runs::simulate_local(settings, hands, seed))
            }
        },
        Command::Fuzz {
            hands,
            seed,
            mode,
            stack,
            sb,
            bb,
        } => {
            let mode = match mode {
                Mode::Digital => FuzzMode::Digital,
                Mode::Physical => FuzzMode::Physical,
                Mode::Mixed => FuzzMode::Mixed,
            };
            print_report(runs::fuzz(runs::fuzz_config(
                hands, seed, mode, stack, sb, bb,
            )))
        }
        Command::Explore {
            street,
            stacks,
            sb,
            bb,
        } => {
            let streets: &[Street] = match street {
                StreetArg::Preflop => &[Street::Preflop],
                StreetArg::Flop => &[Street::Flop],
                StreetArg::Turn => &[Street::Turn],
                StreetArg::River => &[Street::River],
                StreetArg::All => &[Street::Preflop, Street::Flop, Street::Turn, Street::River],
            };
            print_report(runs::explore(streets, &stacks, sb, bb))
        }
    }
}

fn remote_session(args: RemoteArgs, entry: Entry) -> Result<ExitCode> {
    let opts = RemoteOptions {
        url: args.server,
        name: args.name,
        bot_seed: args.bot,
        hands: args.hands,
        heartbeat: Duration::from_secs(5),
    };
    let summary = runtime()?.block_on(run_remote(opts, entry))?;
    let net = summary.ledger.iter().fold([0i64; 2], |acc, e| {
        [acc[0] + e.settlement.net[0], acc[1] + e.settlement.net[1]]
    });
    println!(
        "session {} as {}: {} hands settled, net {:+} / {:+}",
        summary.code.as_deref().unwrap_or("-"),
        summary.seat.map_or("-".to_string(), |s| s.to_string()),
        summary.ledger.len(),
        net[0],
        net[1]
    );
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_new(&cli.log).unwrap_or_else(|_| EnvFilter::new("warn")))
        .with_writer(io::stderr)
        .init();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
