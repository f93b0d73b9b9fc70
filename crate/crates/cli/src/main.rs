mod verify;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{mpsc, Arc};
use std::thread;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};

use sectreg::geometry::{compile, named_recipe, VarietyRecipe, NAMED_EXAMPLES};
use sectreg::report::{analyze, parse_ideal_file, write_ideal_file, AnalysisOptions, InvariantReport, CHARACTERISTIC_CAVEAT};
use sectreg::{GradedIdeal, PolyRing, PrimeField};

use verify::{targets, Params, TargetResult};

const EXIT_FAILED: u8 = 1;
const EXIT_TIMEOUT: u8 = 3;

#[derive(Parser)]
#[command(name = "sectreg", version, about = "Surfaces of maximal sectional regularity: construction, invariants and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a recipe into an ideal file.
    ///
    /// RECIPE is a recipe file, a named example (example-7.3, example-7.4-f1, ...)
    /// or an inline recipe such as `scroll 1 1 1`; separate inline lines with `;`.
    Construct {
        #[arg(required = true, num_args = 1..)]
        recipe: Vec<String>,
        #[arg(long = "char", default_value_t = PrimeField::DEFAULT_CHAR as u64)]
        characteristic: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// write here instead of standard output
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute the invariants of the scheme defined by an ideal file.
    Invariants {
        file: PathBuf,
        /// also find the extremal plane F, the ideal of X ∪ F and tau(X)
        #[arg(long)]
        with_plane: bool,
        /// degrees for the h^i lists, as lo..hi
        #[arg(long, value_parser = parse_window, default_value = "-3..3", allow_hyphen_values = true)]
        h_window: (i64, i64),
        /// reread the generators over this prime instead of the file's
        #[arg(long = "char")]
        characteristic: Option<u64>,
        /// seconds allowed per stage
        #[arg(long, default_value_t = 600)]
        timeout: u64,
        #[arg(long)]
        json: bool,
        /// include wall-clock time per stage
        #[arg(long)]
        timings: bool,
    },
    /// Check computed invariants against published tables and formulas.
    VerifyPaper {
        /// 7.3, 7.4, 7.5, lemma-4.10, thm-4.11, thm-3.4c, cor-3.5, constr-7.1 or all
        selector: String,
        /// a single prime; the default checks 32003 and 1000003
        #[arg(long = "char")]
        characteristic: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        a: Option<i64>,
        #[arg(long)]
        r: Option<i64>,
        #[arg(long)]
        d: Option<i64>,
        /// case A-E for constr-7.1
        #[arg(long)]
        case: Option<char>,
        /// seconds allowed per target
        #[arg(long, default_value_t = 600)]
        timeout: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        json: bool,
    },
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| format!("expected lo..hi, got {s:?}"))?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
    if lo > hi {
        return Err(format!("empty window {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct { recipe, characteristic, seed, output } => construct(&recipe, characteristic, seed, output),
        Command::Invariants { file, with_plane, h_window, characteristic, timeout, json, timings } => {
            invariants(&file, with_plane, h_window, characteristic, timeout, json, timings)
        }
        Command::VerifyPaper { selector, characteristic, seed, a, r, d, case, timeout, jobs, json } => {
            let primes = match characteristic {
                Some(p) => vec![p],
                None => vec![PrimeField::DEFAULT_CHAR as u64, PrimeField::SECOND_CHAR as u64],
            };
            let params = Params { primes, seed, a, r, d, case };
            verify_paper(&selector, params, timeout, jobs, json)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load_recipe(words: &[String]) -> anyhow::Result<(VarietyRecipe, String)> {
    if let [one] = words {
        if let Some(r) = named_recipe(one) {
            return Ok((r, one.clone()));
        }
        let path = PathBuf::from(one);
        if path.is_file() {
            let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            let r = VarietyRecipe::parse(&text).with_context(|| format!("in recipe file {}", path.display()))?;
            return Ok((r, path.display().to_string()));
        }
        if one.starts_with("example-") {
            bail!("unknown example {one:?}; known: {}", NAMED_EXAMPLES.join(", "));
        }
    }
    let text = words.join(" ").replace(';', "\n");
    let r = VarietyRecipe::parse(&text).context("in inline recipe")?;
    Ok((r, "inline".into()))
}

fn construct(words: &[String], characteristic: u64, seed: u64, output: Option<PathBuf>) -> anyhow::Result<u8> {
    let (recipe, source) = load_recipe(words)?;
    let field = PrimeField::new(characteristic)?;
    let v = compile(&recipe, field, seed)?;
    let mut comments = vec![format!("source: {source}")];
    comments.extend(recipe.to_string().lines().map(|l| format!("recipe: {l}")));
    comments.push(format!("seed: {seed}"));
    if !v.seeds.is_empty() {
        comments.push(format!("general choices used seeds {:?}", v.seeds));
    }
    comments.push(format!("characteristic: {characteristic}"));
    let text = write_ideal_file(&v.ideal.minimalized(), &comments);
    match output {
        Some(path) => std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn read_ideal(path: &PathBuf, characteristic: Option<u64>) -> anyhow::Result<(GradedIdeal, Vec<u64>)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (ideal, comments) = parse_ideal_file(&text).with_context(|| format!("in ideal file {}", path.display()))?;
    let seeds = comments
        .iter()
        .filter_map(|c| c.strip_prefix("seed:"))
        .filter_map(|s| s.trim().parse().ok())
        .collect();
    let Some(p) = characteristic else {
        return Ok((ideal, seeds));
    };
    let ring = PolyRing::new(PrimeField::new(p)?, ideal.ring().names().to_vec())?;
    let mut gens = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("ring ") {
            continue;
        }
        gens.push(ring.parse_line(line, k + 1)?);
    }
    Ok((GradedIdeal::new(ring, gens)?, seeds))
}

enum Msg {
    Progress(Box<InvariantReport>),
    Done(sectreg::Result<InvariantReport>),
}

fn print_report(rep: &InvariantReport, json: bool) -> anyhow::Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(rep)?);
    } else {
        print!("{}", rep.to_text());
    }
    Ok(())
}

fn invariants(
    path: &PathBuf,
    with_plane: bool,
    window: (i64, i64),
    characteristic: Option<u64>,
    timeout: u64,
    json: bool,
    timings: bool,
) -> anyhow::Result<u8> {
    let (ideal, seeds) = read_ideal(path, characteristic)?;
    let opts = AnalysisOptions { window, with_plane, record_timings: timings, seeds };
    let (tx, rx) = mpsc::channel();
    thread::spawn(move || {
        let progress = tx.clone();
        let out = analyze(&ideal, &opts, &mut |rep| {
            let _ = progress.send(Msg::Progress(Box::new(rep.clone())));
        });
        let _ = tx.send(Msg::Done(out));
    });
    let mut last: Option<Box<InvariantReport>> = None;
    loop {
        match rx.recv_timeout(Duration::from_secs(timeout)) {
            Ok(Msg::Progress(rep)) => last = Some(rep),
            Ok(Msg::Done(Ok(rep))) => {
                print_report(&rep, json)?;
                return Ok(if rep.all_checks_pass() { 0 } else { EXIT_FAILED });
            }
            Ok(Msg::Done(Err(e))) => return Err(anyhow!(e)),
            Err(_) => {
                eprintln!("stage exceeded {timeout} s; partial report follows");
                if let Some(rep) = last {
                    print_report(&rep, json)?;
                }
                return Ok(EXIT_TIMEOUT);
            }
        }
    }
}

/// Run targets on `jobs` workers. A target exceeding `timeout` is reported
/// as failed and a fresh worker takes its place.
fn run_targets(list: Vec<verify::Target>, params: Params, timeout: Duration, jobs: usize) -> Vec<TargetResult> {
    let n = list.len();
    let list = Arc::new(list);
    let params = Arc::new(params);
    let next = Arc::new(AtomicUsize::new(0));
    let (tx, rx) = mpsc::channel::<(usize, Option<TargetResult>)>();
    let spawn = || {
        let (list, params, next, tx) = (list.clone(), params.clone(), next.clone(), tx.clone());
        thread::spawn(move || loop {
            let k = next.fetch_add(1, Ordering::SeqCst);
            if k >= list.len() {
                break;
            }
            let _ = tx.send((k, None));
            let res = list[k].run(&params);
            let _ = tx.send((k, Some(res)));
        });
    };
    for _ in 0..jobs.max(1).min(n) {
        spawn();
    }
    let mut results: Vec<Option<TargetResult>> = vec![None; n];
    let mut started: Vec<Option<Instant>> = vec![None; n];
    while results.iter().any(Option::is_none) {
        match rx.recv_timeout(Duration::from_millis(200)) {
            Ok((k, None)) => started[k] = Some(Instant::now()),
            Ok((k, Some(res))) => {
                if results[k].is_none() {
                    results[k] = Some(res);
                }
            }
            Err(_) => {}
        }
        for k in 0..n {
            if results[k].is_none() && started[k].is_some_and(|t| t.elapsed() > timeout) {
                let msg = format!("timed out after {} s", timeout.as_secs());
                results[k] = Some(TargetResult::failed(&list[k].name(), msg));
                spawn();
            }
        }
    }
    results.into_iter().map(|r| r.expect("all targets finished")).collect()
}

fn verify_paper(selector: &str, params: Params, timeout: u64, jobs: usize, json: bool) -> anyhow::Result<u8> {
    let list = targets(selector, &params)?;
    let results = run_targets(list, params, Duration::from_secs(timeout), jobs);
    let pass = results.iter().all(|r| r.pass);
    if json {
        let doc = serde_json::json!({
            "selector": selector,
            "pass": pass,
            "caveat": CHARACTERISTIC_CAVEAT,
            "targets": results,
        });
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        for r in &results {
            println!("{} {}", if r.pass { "PASS" } else { "FAIL" }, r.target);
            if let Some(e) = &r.error {
                println!("    error: {e}");
            }
            for l in &r.lines {
                let prime = l.prime.map_or(String::new(), |p| format!(" [p={p}]"));
                println!(
                    "    {} {}{prime}: computed {}, expected {}",
                    if l.pass { "ok  " } else { "FAIL" },
                    l.what,
                    l.computed,
                    l.expected
                );
                if let Some(d) = &l.diff {
                    for dl in d.lines() {
                        println!("        {dl}");
                    }
                }
            }
            if r.stable_across_primes == Some(false) {
                println!("    note: results differ between primes");
            }
        }
        println!("{}", if pass { "ALL PASS" } else { "SOME CHECKS FAILED" });
        println!("caveat: {CHARACTERISTIC_CAVEAT}");
    }
    Ok(if pass { 0 } else { EXIT_FAILED })
}
