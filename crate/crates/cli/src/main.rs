//! `polydots`: play, simulate, solve, verify, enumerate and serve.

use std::io::{BufRead, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polydots::engine::{BoardSpec, GameState, Variant};
use polydots::record::save_record;
use polydots::render::{parse_segment, render_text, segment_text};
use polydots::simulate::simulate;
use polydots::strategy::{choose_move, solve_with, SolveOptions, StrategyId};
use polydots::verify::{self, TheoremReport, VerifyParams};
use polydots_server::{ServerConfig, Seat};

#[derive(Parser)]
#[command(name = "polydots", version, about = "Dots-and-Triangles and Dots-and-Polygons")]
struct Cli {
    /// Worker threads for parallel searches (default: all cores). Results
    /// do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct BoardArgs {
    #[arg(long, default_value_t = 4)]
    width: u32,
    #[arg(long, default_value_t = 4)]
    height: u32,
    /// triangles or polygons
    #[arg(long, default_value = "triangles")]
    variant: Variant,
}

impl BoardArgs {
    fn board(&self) -> Result<BoardSpec, String> {
        BoardSpec::new(self.width, self.height).map_err(|e| e.to_string())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Play in the terminal. Enter moves as `x1,y1-x2,y2`, `?` for hints.
    Play {
        #[command(flatten)]
        board: BoardArgs,
        /// human or a strategy: random, greedy, double-dealer, nested-diamond, exact
        #[arg(long, default_value = "human")]
        p1: Seat,
        #[arg(long, default_value = "greedy")]
        p2: Seat,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Save the finished game as a JSON record.
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Play many strategy-versus-strategy games and write win statistics.
    Simulate {
        #[command(flatten)]
        board: BoardArgs,
        #[arg(long, default_value_t = 100)]
        games: u64,
        #[arg(long, default_value = "greedy")]
        p1: StrategyId,
        #[arg(long, default_value = "random")]
        p2: StrategyId,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "stats.json")]
        out: PathBuf,
    },
    /// Solve the empty board exactly and print the value and a best line.
    Solve {
        #[command(flatten)]
        board: BoardArgs,
        /// Node budget; the value is a lower bound when it runs out.
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Run one theorem check and write its JSON report.
    Verify {
        /// One of the ids listed by `verify list`.
        theorem: String,
        #[arg(long, default_value = "triangles")]
        variant: Variant,
        #[arg(long, default_value_t = 500)]
        games: u64,
        #[arg(long, default_value_t = 3)]
        width: u32,
        #[arg(long, default_value_t = 3)]
        height: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        #[arg(long, default_value_t = 5)]
        boundary_points: usize,
        #[arg(long)]
        max_box: Option<i32>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Zero the elapsed time so reports from equal runs are identical.
        #[arg(long)]
        no_timing: bool,
    },
    /// Enumerate shapes.
    Enumerate {
        #[command(subcommand)]
        what: EnumerateCommand,
    },
    /// Start the HTTP and WebSocket game server.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
    },
}

#[derive(Subcommand)]
enum EnumerateCommand {
    /// Convex extremely reduced shapes with a given boundary point count.
    Ers {
        #[arg(long, default_value_t = 5)]
        boundary_points: usize,
        #[arg(long, default_value_t = 8)]
        max_box: i32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Play { board, p1, p2, seed, record } => play(board.board()?, board.variant, [p1, p2], seed, record),
        Command::Simulate { board, games, p1, p2, seed, out } => {
            let stats = simulate(board.board()?, board.variant, [p1, p2], games, seed);
            let text = serde_json::to_string_pretty(&stats).expect("stats serialise");
            std::fs::write(&out, format!("{text}\n")).map_err(|e| format!("{}: {e}", out.display()))?;
            println!("{text}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { board, budget } => {
            let state = GameState::new(board.board()?, board.variant);
            let threads = cli.threads.unwrap_or_else(rayon::current_num_threads);
            let r = solve_with(&state, &SolveOptions { node_budget: budget, threads, ..SolveOptions::default() });
            let pv: Vec<String> = r.principal_variation.iter().map(segment_text).collect();
            let exact = if r.complete { "exact" } else { "budget exhausted, lower bound" };
            println!("value {} halves (first minus second, {exact})", r.value);
            println!("nodes {}", r.nodes_visited);
            println!("line {}", pv.join(" "));
            Ok(if r.complete { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Verify { theorem, variant, games, width, height, seed, n_max, boundary_points, max_box, out, no_timing } => {
            if theorem == "list" {
                for id in verify::THEOREM_IDS {
                    println!("{id}");
                }
                return Ok(ExitCode::SUCCESS);
            }
            let params = VerifyParams { variant, games, width, height, seed, n_max, boundary_points, max_box };
            let report = verify::run(&theorem, &params)?;
            emit_report(&report, out, no_timing)
        }
        Command::Enumerate { what: EnumerateCommand::Ers { boundary_points, max_box, out } } => {
            let params = VerifyParams { boundary_points, max_box: Some(max_box), ..VerifyParams::default() };
            let report = verify::run("convex-ers", &params)?;
            let (shapes, _) = verify::convex_shapes(boundary_points, max_box, true);
            println!("{} shapes", shapes.len());
            for pts in &shapes {
                let coords: Vec<String> = pts.iter().map(|p| format!("({},{})", p.x, p.y)).collect();
                println!("  {}", coords.join(" "));
            }
            if let Some(path) = out {
                std::fs::write(&path, report.to_json()).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            Ok(verdict(&report))
        }
        Command::Serve { port, host } => {
            let addr = SocketAddr::new(host, port);
            let rt = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
            eprintln!("listening on http://{addr}");
            rt.block_on(polydots_server::serve(addr, ServerConfig::default())).map_err(|e| e.to_string())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn emit_report(report: &TheoremReport, out: Option<PathBuf>, no_timing: bool) -> Result<ExitCode, String> {
    let report = if no_timing { report.without_timing() } else { report.clone() };
    let text = format!("{}\n", report.to_json());
    match out {
        Some(path) => std::fs::write(&path, &text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(verdict(&report))
}

fn verdict(report: &TheoremReport) -> ExitCode {
    let status = if report.passed() { "pass" } else { "FAIL" };
    eprintln!("{}: {status} ({} checked, {} violations)", report.theorem, report.checked, report.violations.len());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn play(board: BoardSpec, variant: Variant, seats: [Seat; 2], seed: u64, record: Option<PathBuf>) -> Result<ExitCode, String> {
    let mut state = GameState::new(board, variant);
    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    let mut ply = 0u64;
    while !state.is_over() {
        let seat = seats[(state.to_move().number() - 1) as usize];
        let m = match seat {
            Seat::Ai(strategy) => {
                let m = choose_move(strategy, &state, seed.wrapping_add(ply)).map_err(|e| e.to_string())?;
                println!("player {} ({strategy}) plays {}", state.to_move().number(), segment_text(&m));
                m
            }
            Seat::Human => {
                print!("{}player {} move> ", render_text(&state), state.to_move().number());
                std::io::stdout().flush().ok();
                let Some(line) = lines.next() else {
                    return Err("input ended before the game did".into());
                };
                let line = line.map_err(|e| e.to_string())?;
                match line.trim() {
                    "quit" | "q" => return Ok(ExitCode::SUCCESS),
                    "?" => {
                        let hints: Vec<String> = state.legal_moves().iter().take(20).map(segment_text).collect();
                        println!("legal moves include: {}", hints.join(" "));
                        continue;
                    }
                    text => match parse_segment(text) {
                        Some(m) => m,
                        None => {
                            println!("enter a move as x1,y1-x2,y2");
                            continue;
                        }
                    },
                }
            }
        };
        match state.apply_move(m) {
            Ok(out) if out.claims_anything() => {
                println!("claimed {}{}", out.claimed_area(), if out.doublecross { " (doublecross)" } else { "" });
            }
            Ok(_) => {}
            Err(e) => println!("rejected: {}", e.token()),
        }
        ply += 1;
    }
    print!("{}", render_text(&state));
    if let Some(path) = record {
        let bytes = save_record(&state).map_err(|e| e.to_string())?;
        std::fs::write(&path, bytes).map_err(|e| format!("{}: {e}", path.display()))?;
        println!("record written to {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}
