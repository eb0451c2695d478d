use std::io::Read;
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use syncplay::automaton::{Automaton, Dfa, Letter, Word};
use syncplay::constructions::{
    cerny, duplication, eppstein_qsat, pfa_to_dwa, psi0, BudgetInstance, CnfFormula,
};
use syncplay::format::{parse_automaton, serialize_automaton};
use syncplay::game::{
    cubic_move_bound, decide_winner, optimal_moves, short_game_decide_lowmem_with,
    short_game_decide_with, MoveCounting, Player,
};
use syncplay::oracle::budget_by_enumeration;
use syncplay::random::{random_dfa, random_dwa, random_pfa};
use syncplay::service::{serve, ServeConfig};
use syncplay::sync::{careful_length_bound, careful_shortest_word, shortest_reset_word};
use syncplay::weighted::{budget_decide_with, min_sync_cost, sync_cost, SearchOptions};
use syncplay::{Error, StateSet};

const EXIT_OK: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_NOT_SYNCHRONIZING: u8 = 2;
const EXIT_NEGATIVE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "syncplay",
    version,
    about = "Reset words, synchronization games and synchronization on a budget"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synchronizability and shortest (careful) reset word.
    Analyze {
        /// Interchange document, or `-` for stdin.
        file: String,
        /// Report costs of a weighted automaton.
        #[arg(long)]
        weighted: bool,
        /// Apply this word and report where it leads (and its cost with
        /// --weighted).
        #[arg(long)]
        word: Option<String>,
    },
    /// Who wins the synchronization game. Exit 0 for Alice, 3 for Bob.
    Game {
        file: String,
        /// Decide whether Alice wins within this many moves instead; the
        /// exit code then reflects that answer.
        #[arg(long, value_name = "MOVES")]
        short: Option<u64>,
        /// Also print the exact number of Alice moves needed.
        #[arg(long)]
        optimal: bool,
        /// What --short counts: Alice's moves or every half-move.
        #[arg(long, value_enum, default_value_t = Counting::Alice)]
        count: Counting,
    },
    /// Is there a reset word of cost at most BUDGET? Exit 0 yes, 3 no.
    Budget {
        file: String,
        budget: u64,
        /// Longest witness word to print.
        #[arg(long, default_value_t = 1 << 16)]
        witness_limit: usize,
    },
    /// Write a generated automaton to stdout.
    Generate {
        #[command(subcommand)]
        kind: Generator,
    },
    /// Run the HTTP game service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Idle sessions are dropped after this many seconds.
        #[arg(long, default_value_t = 1800)]
        session_ttl: u64,
        /// Append finished games to this file as JSON lines.
        #[arg(long)]
        transcripts: Option<PathBuf>,
    },
    /// Cross-check solvers against exhaustive oracles on random instances.
    /// Exit 0 when everything agrees, 3 otherwise.
    Check {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Instances per suite.
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

#[derive(Subcommand)]
enum Generator {
    /// Černý automaton with N states.
    Cerny { n: usize },
    /// Duplication of a Černý automaton (give N) or of a document.
    Duplication {
        source: String,
        /// Letter that leads back to the first copy.
        #[arg(long, default_value = "b")]
        letter: String,
        /// Target of the other letters in the second copy.
        #[arg(long, default_value_t = 0)]
        state: usize,
        /// Add one extra state so the state count is odd.
        #[arg(long)]
        pad_odd: bool,
    },
    /// QSAT gadget for a DIMACS CNF file, or `psi0` for the standard example.
    Qsat { source: String },
    /// Weighted automaton and budget for a partial automaton; the budget is
    /// printed on stderr (or inside the JSON with --json).
    Pfa2dwa { file: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Counting {
    Alice,
    Half,
}

struct Report {
    text: String,
    json: Value,
    code: u8,
}

impl Report {
    fn new(text: String, json: Value, code: u8) -> Self {
        Report { text, json, code }
    }
}

fn read_input(path: &str) -> Result<Vec<u8>, Error> {
    let mut buf = Vec::new();
    let res = if path == "-" {
        std::io::stdin().read_to_end(&mut buf).map(|_| ())
    } else {
        std::fs::read(path).map(|b| buf = b)
    };
    res.map_err(|e| Error::InputDomain(format!("cannot read {path}: {e}")))?;
    Ok(buf)
}

fn load(path: &str) -> Result<Automaton, Error> {
    Ok(parse_automaton(&read_input(path)?)?)
}

fn load_dfa(path: &str) -> Result<Dfa, Error> {
    load(path)?
        .to_dfa()
        .ok_or_else(|| Error::InputDomain("this command needs every transition defined".into()))
}

fn coins(s: StateSet) -> Vec<usize> {
    s.iter().collect()
}

fn plural(count: usize) -> &'static str {
    if count == 1 {
        ""
    } else {
        "s"
    }
}

fn analyze(file: &str, weighted: bool, word: Option<&str>) -> Result<Report, Error> {
    let a = load(file)?;
    let alphabet = a.alphabet().to_vec();
    let mut text = format!(
        "{} with {} state{} and {} letter{}\n",
        a.kind(),
        a.n(),
        plural(a.n()),
        alphabet.len(),
        plural(alphabet.len())
    );
    let mut out =
        json!({"kind": format!("{:?}", a.kind()).to_lowercase(), "n": a.n(), "k": alphabet.len()});
    let show = |w: &Word| w.display(&alphabet);

    if weighted && !matches!(a, Automaton::Dwa(_)) {
        return Err(Error::InputDomain(
            "--weighted needs a document with costs".into(),
        ));
    }

    let res = match &a {
        Automaton::Pfa(p) => {
            let res = careful_shortest_word(p)?;
            out["careful"] = json!(true);
            res
        }
        _ => shortest_reset_word(&a.to_dfa().expect("total automaton"))?,
    };
    let label = if matches!(a, Automaton::Pfa(_)) {
        "carefully synchronizing"
    } else {
        "synchronizing"
    };
    out["synchronizing"] = json!(res.synchronizing());
    out["shortest_length"] = json!(res.min_length());
    out["shortest_word"] = json!(res.shortest_word.as_ref().map(show));
    match &res.shortest_word {
        Some(w) => {
            text += &format!(
                "{label}: yes\nshortest reset word: {:?} (length {})\n",
                show(w),
                w.len()
            )
        }
        None => text += &format!("{label}: no\n"),
    }

    if let Some(word_text) = word {
        let w = Word::parse(word_text, &alphabet)?;
        let full = StateSet::full(a.n());
        let image = match &a {
            Automaton::Pfa(p) => w
                .letters()
                .iter()
                .try_fold(full, |s, &Letter(l)| p.image_letter(s, l)),
            _ => Some(a.to_dfa().expect("total automaton").image(full, &w)?),
        };
        out["word"] = json!({
            "word": show(&w),
            "image": image.map(coins),
            "resets": image.is_some_and(StateSet::is_singleton),
        });
        match image {
            Some(img) => text += &format!("image of {:?}: {:?}\n", show(&w), coins(img)),
            None => text += &format!("{:?} hits an undefined transition\n", show(&w)),
        }
        if let Automaton::Dwa(d) = &a {
            if weighted {
                let cost = sync_cost(d, &w)?;
                out["word"]["cost"] = json!(cost);
                text += &format!("cost: {cost}\n");
            }
        }
    } else if let Automaton::Dwa(d) = &a {
        if weighted {
            let cost = min_sync_cost(d)?;
            out["min_cost"] = json!(cost);
            match cost {
                Some(c) => text += &format!("least synchronization cost: {c}\n"),
                None => text += "least synchronization cost: none\n",
            }
        }
    }
    let code = if res.synchronizing() {
        EXIT_OK
    } else {
        EXIT_NOT_SYNCHRONIZING
    };
    Ok(Report::new(text, out, code))
}

fn game(file: &str, short: Option<u64>, optimal: bool, count: Counting) -> Result<Report, Error> {
    let dfa = load_dfa(file)?;
    let (winner, _) = decide_winner(&dfa);
    let mut text = format!("winner: {winner}\n");
    let mut out = json!({"winner": winner});
    let mut code = if winner == Player::Alice {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    };
    if optimal {
        let value = optimal_moves(&dfa)?.start_value();
        out["optimal_moves"] = json!(value);
        match value {
            Some(v) => text += &format!("Alice needs {v} moves\n"),
            None => text += "Alice cannot force synchronization\n",
        }
    }
    if let Some(moves) = short {
        let (counting, name) = match count {
            Counting::Alice => (MoveCounting::AliceMoves, "alice"),
            Counting::Half => (MoveCounting::HalfMoves, "half"),
        };
        let wins = short_game_decide_with(&dfa, moves, counting)?;
        out["short"] = json!({"moves": moves, "count": name, "alice_wins": wins});
        text += &format!("Alice wins within {moves} ({name}) moves: {wins}\n");
        code = if wins { EXIT_OK } else { EXIT_NEGATIVE };
    }
    Ok(Report::new(text, out, code))
}

fn budget(file: &str, b: u64, witness_limit: usize) -> Result<Report, Error> {
    let Automaton::Dwa(dwa) = load(file)? else {
        return Err(Error::InputDomain(
            "budget needs a document with costs".into(),
        ));
    };
    let alphabet = dwa.dfa().alphabet().to_vec();
    let inst = BudgetInstance::new(dwa, b)?;
    let opts = SearchOptions {
        witness_limit,
        ..Default::default()
    };
    let r = budget_decide_with(&inst, &opts)?;
    let witness = r.witness.as_ref().map(|w| w.display(&alphabet));
    let out = json!({"budget": b, "feasible": r.feasible, "cost": r.cost, "witness": witness});
    let mut text = format!("reset word within budget {b}: {}\n", r.feasible);
    if let Some(c) = r.cost {
        text += &format!("least cost: {c}\n");
        match &witness {
            Some(w) => text += &format!("witness: {w:?}\n"),
            None => text += "witness longer than the limit, not shown\n",
        }
    }
    Ok(Report::new(
        text,
        out,
        if r.feasible { EXIT_OK } else { EXIT_NEGATIVE },
    ))
}

fn document(a: &Automaton) -> Report {
    let text = serialize_automaton(a);
    let json = serde_json::from_str(&text).expect("canonical document is JSON");
    Report::new(text.trim_end().to_owned(), json, EXIT_OK)
}

fn generate(kind: &Generator, json_output: bool) -> Result<Report, Error> {
    match kind {
        Generator::Cerny { n } => Ok(document(&cerny(*n)?.into())),
        Generator::Duplication {
            source,
            letter,
            state,
            pad_odd,
        } => {
            let base = match source.parse::<usize>() {
                Ok(n) => cerny(n)?,
                Err(_) => load_dfa(source)?,
            };
            let b = base
                .alphabet()
                .iter()
                .position(|x| x == letter)
                .ok_or_else(|| {
                    Error::InputDomain(format!("letter {letter:?} is not in the alphabet"))
                })?;
            Ok(document(
                &duplication(&base, Letter(b), *state, *pad_odd)?.into(),
            ))
        }
        Generator::Qsat { source } => {
            let psi = if source == "psi0" {
                psi0()
            } else {
                let bytes = read_input(source)?;
                let text = String::from_utf8(bytes)
                    .map_err(|_| Error::InputDomain("CNF file is not UTF-8".into()))?;
                CnfFormula::parse_dimacs(&text)?
            };
            Ok(document(&eppstein_qsat(&psi)?.into()))
        }
        Generator::Pfa2dwa { file } => {
            let Automaton::Pfa(pfa) = load(file)? else {
                return Err(Error::InputDomain(
                    "pfa2dwa needs a document with undefined transitions".into(),
                ));
            };
            let inst = pfa_to_dwa(&pfa)?;
            let mut r = document(&inst.dwa.into());
            if !json_output {
                eprintln!("budget: {}", inst.budget);
            }
            r.json = json!({"automaton": r.json, "budget": inst.budget});
            Ok(r)
        }
    }
}

#[derive(Default)]
struct Tally {
    cases: usize,
    disagreements: usize,
}

fn check(seed: u64, count: usize) -> Result<Report, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut suites: Vec<(&str, Tally)> = Vec::new();

    let mut t = Tally::default();
    for _ in 0..count {
        let (n, k) = (rng.gen_range(1..=7), rng.gen_range(2..=3));
        let d = random_dfa(&mut rng, n, k);
        let value = optimal_moves(&d)?.start_value();
        let agree = (decide_winner(&d).0 == Player::Alice) == value.is_some();
        let bounded = value.is_none_or(|v| u64::from(v) <= cubic_move_bound(n));
        t.cases += 1;
        t.disagreements += usize::from(!(agree && bounded));
    }
    suites.push(("pair game vs full game", t));

    let mut t = Tally::default();
    for _ in 0..count {
        let n = rng.gen_range(1..=6);
        let d = random_dfa(&mut rng, n, 2);
        let l = rng.gen_range(0..=8);
        for counting in [MoveCounting::AliceMoves, MoveCounting::HalfMoves] {
            t.cases += 1;
            let same = short_game_decide_with(&d, l, counting)?
                == short_game_decide_lowmem_with(&d, l, counting)?;
            t.disagreements += usize::from(!same);
        }
    }
    suites.push(("layered vs depth-first bounded game", t));

    let mut t = Tally::default();
    for _ in 0..count {
        let n = rng.gen_range(1..=5);
        let d = random_dwa(&mut rng, n, 2, 4);
        let b = rng.gen_range(1..=12);
        let fast = budget_decide_with(
            &BudgetInstance::new(d.clone(), b)?,
            &SearchOptions::default(),
        )?;
        t.cases += 1;
        t.disagreements += usize::from(fast.feasible != budget_by_enumeration(&d, b));
    }
    suites.push(("budget search vs enumeration", t));

    let mut t = Tally::default();
    for _ in 0..count {
        let n = rng.gen_range(1..=6);
        let p = random_pfa(&mut rng, n, 2, 0.2);
        let careful = careful_shortest_word(&p)?;
        let inst = pfa_to_dwa(&p)?;
        let budgeted = budget_decide_with(&inst, &SearchOptions::default())?.feasible;
        let bounded = careful
            .min_length()
            .is_none_or(|l| l as u128 <= careful_length_bound(n));
        t.cases += 1;
        t.disagreements += usize::from(careful.synchronizing() != budgeted || !bounded);
    }
    suites.push(("careful synchronization vs weighted budget", t));

    let total: usize = suites.iter().map(|(_, t)| t.disagreements).sum();
    let mut text = format!("seed {seed}\n");
    for (name, t) in &suites {
        text += &format!(
            "{name}: {} cases, {} disagreements\n",
            t.cases, t.disagreements
        );
    }
    let json = json!({
        "seed": seed,
        "suites": suites.iter().map(|(name, t)| json!({"name": name, "cases": t.cases, "disagreements": t.disagreements})).collect::<Vec<_>>(),
    });
    Ok(Report::new(
        text,
        json,
        if total == 0 { EXIT_OK } else { EXIT_NEGATIVE },
    ))
}

fn run_serve(
    host: IpAddr,
    port: u16,
    ttl: u64,
    transcripts: Option<PathBuf>,
) -> Result<Report, Error> {
    let config = ServeConfig {
        addr: SocketAddr::new(host, port),
        idle_timeout: Duration::from_secs(ttl.max(1)),
        transcripts,
    };
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Error::InputDomain(e.to_string()))?;
    runtime
        .block_on(serve(config))
        .map_err(|e| Error::InputDomain(format!("cannot serve on {host}:{port}: {e}")))?;
    Ok(Report::new(String::new(), Value::Null, EXIT_OK))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let informational = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            e.print().ok();
            return ExitCode::from(if informational { EXIT_OK } else { EXIT_ERROR });
        }
    };
    let serving = matches!(cli.command, Command::Serve { .. });
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(if serving {
        "info"
    } else {
        "warn"
    }))
    .init();

    let result = match &cli.command {
        Command::Analyze {
            file,
            weighted,
            word,
        } => analyze(file, *weighted, word.as_deref()),
        Command::Game {
            file,
            short,
            optimal,
            count,
        } => game(file, *short, *optimal, *count),
        Command::Budget {
            file,
            budget: b,
            witness_limit,
        } => budget(file, *b, *witness_limit),
        Command::Generate { kind } => generate(kind, cli.json),
        Command::Serve {
            port,
            host,
            session_ttl,
            transcripts,
        } => run_serve(*host, *port, *session_ttl, transcripts.clone()),
        Command::Check { seed, count } => check(*seed, *count),
    };
    match result {
        Ok(r) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&r.json).expect("reports serialize")
                );
            } else if !r.text.is_empty() {
                println!("{}", r.text.trim_end());
            }
            ExitCode::from(r.code)
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({"error": e.to_string()}));
            }
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
