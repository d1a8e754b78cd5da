use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use tsynth::dot::{automaton_dot, controller_dot, game_dot};
use tsynth::fixtures;
use tsynth::omega::DEFAULT_CAP;
use tsynth::rational::{format_rational, Rational};
use tsynth::separability::{decide_k_separability, decide_km_separability};
use tsynth::synthesis::{parse_moves, simulate_controller, solve_k, solve_km, GameSpec, KMController, Options};
use tsynth::timed::{accepts_finite, TimedAutomaton, TimedWord};
use tsynth::Error;

#[derive(Parser)]
#[command(name = "tsynth", version, about = "Timed synthesis and deterministic separability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite-word membership of a timed word like "(a,0)(a,2/5)".
    Member { automaton: PathBuf, word: String },
    /// Search for a deterministic separator with k clocks.
    Separate {
        a: PathBuf,
        b: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(short, value_parser = clap::value_parser!(u32).range(1..))]
        m: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Search for a Player II controller with k clocks.
    Synth {
        game: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(short, value_parser = clap::value_parser!(u32).range(1..))]
        m: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Run a controller on Player I moves like "a@0 a@3/2"; random moves
    /// are drawn from the seed when none are given.
    Simulate {
        controller: PathBuf,
        moves: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        steps: usize,
    },
    /// Print a built-in example document.
    Fixtures {
        name: String,
        arg: Option<usize>,
        #[arg(short)]
        o: Option<PathBuf>,
    },
    /// Graphviz rendering of an automaton, game or controller document.
    Dot {
        document: PathBuf,
        #[arg(short)]
        o: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("{0}")]
    Usage(String),
}

type Outcome = Result<bool, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn emit(o: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match o {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(p.clone(), e)),
        None => {
            let mut out = std::io::stdout().lock();
            let tail = if text.ends_with('\n') { "" } else { "\n" };
            match out.write_all(text.as_bytes()).and_then(|_| out.write_all(tail.as_bytes())) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io("<stdout>".into(), e)),
                _ => Ok(()),
            }
        }
    }
}

fn member(path: &Path, word: &str) -> Outcome {
    let a = TimedAutomaton::from_json(&read(path)?)?;
    let w = TimedWord::parse(word, &a.alphabet)?;
    let ok = accepts_finite(&a, &w)?;
    println!("{}", if ok { "accept" } else { "reject" });
    Ok(ok)
}

fn separate(a: &Path, b: &Path, k: usize, m: Option<u32>, cap: usize, o: &Option<PathBuf>) -> Outcome {
    let a = TimedAutomaton::from_json(&read(a)?)?;
    let b = TimedAutomaton::from_json(&read(b)?)?;
    let opts = Options { cap, verify: true };
    let found = match m {
        Some(m) => decide_km_separability(&a, &b, k, m, &opts)?,
        None => decide_k_separability(&a, &b, k, &opts)?,
    };
    let Some(s) = found else {
        println!("not-separable");
        return Ok(false);
    };
    let report = json!({ "m": s.m, "verification": s.report.to_json(&a.alphabet) });
    match o {
        Some(_) => {
            emit(o, &s.automaton.to_json())?;
            println!("separable");
            println!("{}", serde_json::to_string_pretty(&report).unwrap());
        }
        None => {
            println!("separable");
            let doc = json!({ "separator": s.automaton.to_value(), "m": s.m, "verification": report["verification"] });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    Ok(true)
}

fn synth(path: &Path, k: usize, m: Option<u32>, cap: usize, o: &Option<PathBuf>) -> Outcome {
    let g = GameSpec::from_json(&read(path)?)?;
    let opts = Options { cap, verify: true };
    let solved = match m {
        Some(m) => solve_km(&g, k, m, &opts)?,
        None => solve_k(&g, k, &opts)?,
    };
    match solved {
        None => {
            println!("no-controller");
            Ok(false)
        }
        Some(s) => {
            if o.is_some() {
                println!("controller (m = {}, {} memory states)", s.m, s.controller.memory.len());
            }
            emit(o, &s.controller.to_json())?;
            Ok(true)
        }
    }
}

fn random_moves(c: &KMController, seed: u64, steps: usize) -> Vec<(usize, Rational)> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut now = Rational::from_integer(0);
    (0..steps)
        .map(|_| {
            now += Rational::new(rng.gen_range(0..=8), 4);
            (rng.gen_range(0..c.inputs.len()), now)
        })
        .collect()
}

fn simulate(path: &Path, moves: &Option<String>, seed: u64, steps: usize) -> Outcome {
    let c = KMController::from_json(&read(path)?)?;
    let moves = match moves {
        Some(s) => parse_moves(&c, s)?,
        None => random_moves(&c, seed, steps),
    };
    println!("start memory {}", c.memory[c.initial as usize]);
    for step in simulate_controller(&c, &moves)? {
        let vals: Vec<String> = c
            .clocks
            .iter()
            .enumerate()
            .map(|(i, x)| format!("{x}={}", format_rational(&step.valuation.get(tsynth::regions::ClockId(i)))))
            .collect();
        let resets: Vec<&str> = step.resets.iter().map(|x| c.clocks[x.0].as_str()).collect();
        println!(
            "{}@{} [{}] -> {} reset {{{}}} memory {} [{}]",
            c.inputs[step.input],
            format_rational(&step.time),
            c.space.describe(&step.region, &c.clocks),
            c.outputs[step.output],
            resets.join(","),
            c.memory[step.memory as usize],
            vals.join(" ")
        );
    }
    Ok(true)
}

fn fixture(name: &str, arg: Option<usize>, o: &Option<PathBuf>) -> Outcome {
    let text = match name {
        "example-L" => fixtures::example_l().to_json(),
        "example-L-complement" => fixtures::example_l_complement().to_json(),
        "example-Lk" => {
            let k = arg.ok_or_else(|| CliError::Usage("example-Lk needs a bit count".into()))?;
            fixtures::example_lk(k).to_json()
        }
        "points" => {
            let (a, b) = fixtures::points();
            serde_json::to_string_pretty(&json!({ "A": a.to_value(), "B": b.to_value() })).unwrap()
        }
        "points-a" => fixtures::points().0.to_json(),
        "points-b" => fixtures::points().1.to_json(),
        "deadline" => fixtures::deadline_game().to_json(),
        other => return Err(CliError::Usage(format!("unknown fixture `{other}`"))),
    };
    emit(o, &text)?;
    Ok(true)
}

fn dot(path: &Path, o: &Option<PathBuf>) -> Outcome {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text).map_err(Error::from)?;
    let out = if v.get("playerI").is_some() {
        game_dot(&GameSpec::from_json(&text)?)
    } else if v.get("rules").is_some() {
        controller_dot(&KMController::from_json(&text)?)
    } else {
        automaton_dot(&TimedAutomaton::from_json(&text)?)
    };
    emit(o, &out)?;
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Member { automaton, word } => member(&automaton, &word),
        Command::Separate { a, b, k, m, cap, o } => separate(&a, &b, k, m, cap, &o),
        Command::Synth { game, k, m, cap, o } => synth(&game, k, m, cap, &o),
        Command::Simulate { controller, moves, seed, steps } => simulate(&controller, &moves, seed, steps),
        Command::Fixtures { name, arg, o } => fixture(&name, arg, &o),
        Command::Dot { document, o } => dot(&document, &o),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CliError::Lib(e)) if e.is_resource() => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
