mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use verba::corpus::{load_group_json, LoadedGroup};
use verba::engine::{build_word_map_group, decide_chirality};
use verba::family::{verify_family_chirality, FamilyParameters, SemidirectStanza};
use verba::filters::filter_cascade;
use verba::nilpotent::{
    congruence_certificate, verify_achirality_instance, witness_search, Moduli, SearchMode,
};
use verba::verdict::Status;
use verba::verify::verify_verdict;
use verba::words::{image_with_limits, inversion_violator, parse_word};
use verba::{Error, Limits};

use report::{CheckStats, VerdictReport, TOOL_VERSION};

#[derive(Parser)]
#[command(name = "verba", version, about = "Chirality of word maps in finite groups")]
struct Cli {
    /// Worker threads for the parallel enumerations.
    #[arg(long, global = true, env = "VERBA_THREADS")]
    threads: Option<usize>,
    /// Maximum number of word maps kept while building W(G).
    #[arg(long, global = true, env = "VERBA_MAP_CAP")]
    map_cap: Option<u64>,
    /// Maximum number of input tuples for an exhaustive evaluation.
    #[arg(long, global = true, env = "VERBA_TUPLE_BUDGET")]
    tuple_budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide chirality of a group file.
    Check {
        file: PathBuf,
        /// Stop after the filter cascade.
        #[arg(long, conflicts_with = "exhaustive")]
        filters_only: bool,
        /// Skip the filters and enumerate W(G).
        #[arg(long)]
        exhaustive: bool,
    },
    /// Build the group of word maps and report its order.
    Wgroup {
        file: PathBuf,
        /// Number of variables (defaults to the minimal generator count).
        #[arg(short)]
        d: Option<usize>,
        /// Write one representative word per map to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Image of a word map.
    Image {
        file: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Structural chirality check for a semidirect family member.
    Family {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        pr: u64,
        #[arg(long)]
        phi: u64,
    },
    /// Free nilpotent group computations.
    #[command(subcommand)]
    Nilpotent(Nilpotent),
    /// Replay the certificate of a report against a group file.
    Verify { report: PathBuf, group: PathBuf },
}

#[derive(Subcommand)]
enum Nilpotent {
    /// Check the inverting endomorphism for a^i [a,b]^j [a,c]^k [b,c]^l.
    N23Verify {
        #[arg(long, allow_hyphen_values = true, requires_all = ["j", "k", "l"])]
        i: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        j: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        l: Option<i64>,
        /// Check this many random instances in [-20, 20]^4 instead.
        #[arg(long, conflicts_with = "i")]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Search for an endomorphism of a quotient inverting a^(p^2) c^p d.
    N32Search {
        #[arg(long)]
        p: u64,
        /// Five comma-separated moduli; defaults to p^3,p^2,p^2,p,p.
        #[arg(long, value_delimiter = ',')]
        moduli: Option<Vec<u64>>,
        #[arg(long, value_enum, default_value_t = Mode::Full)]
        mode: Mode,
    },
    /// Sweep the congruence obstruction for an odd prime.
    N32Congruence {
        #[arg(long)]
        p: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Full,
    Restricted,
}

enum Failure {
    Input(String),
    Internal(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Structural(_) => Failure::Internal(e.to_string()),
            Error::Mismatch(_) => Failure::Mismatch(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path, limits: &Limits) -> Result<LoadedGroup, Failure> {
    Ok(load_group_json(&read(path)?, limits)?)
}

fn emit(value: &impl Serialize) {
    let mut out = std::io::stdout().lock();
    // a closed pipe downstream is not an error worth reporting
    let _ = serde_json::to_writer_pretty(&mut out, value).map(|_| writeln!(out));
}

fn check(file: &Path, filters_only: bool, exhaustive: bool, limits: &Limits) -> Result<(), Failure> {
    let start = Instant::now();
    let g = load(file, limits)?;
    let mut stages = Vec::new();
    let mut family_report = None;
    let mut verdict = None;
    if !exhaustive {
        stages.push("filter-cascade".to_string());
        let v = filter_cascade(&g.group, &[], limits);
        if v.status != Status::Unknown || filters_only {
            verdict = Some(v);
        }
    }
    if verdict.is_none() {
        if let (Some(params), false) = (&g.family, exhaustive) {
            stages.push("family-witness".into());
            let (v, r) = verify_family_chirality(params, limits)?;
            family_report = Some(r);
            verdict = Some(v);
        } else {
            stages.push("engine".into());
            verdict = Some(decide_chirality(&g.group, limits));
        }
    }
    let v = verdict.expect("some stage produced a verdict");
    eprintln!("{}: {:?} ({})", g.label, v.status, v.method);
    let stats = CheckStats {
        elapsed_ms: start.elapsed().as_millis() as u64,
        map_cap: limits.map_cap,
        tuple_budget: limits.tuple_budget,
        stages,
        family: family_report,
    };
    emit(&VerdictReport::new(g.label, g.group.order(), v, stats));
    Ok(())
}

fn wgroup(file: &Path, d: Option<usize>, dump: Option<&Path>, limits: &Limits) -> Result<(), Failure> {
    let g = load(file, limits)?;
    let d = d.unwrap_or_else(|| g.group.minimal_generator_count());
    let w = build_word_map_group(&g.group, d, limits.map_cap, limits)?;
    if let Some(path) = dump {
        let mut f = fs::File::create(path)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        w.dump(&mut f)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    if w.truncated() {
        eprintln!(
            "{}: W(G) truncated after {} maps on {d} variables (cap reached); order unknown",
            g.label,
            w.order()
        );
    } else {
        eprintln!("{}: |W(G)| = {} on {d} variables", g.label, w.order());
    }
    emit(&json!({
        "group_label": g.label,
        "group_order": g.group.order(),
        "d": d,
        "maps": w.order(),
        "truncated": w.truncated(),
        "map_cap": limits.map_cap,
        "tool_version": TOOL_VERSION,
    }));
    Ok(())
}

fn image(file: &Path, text: &str, limits: &Limits) -> Result<(), Failure> {
    let g = load(file, limits)?;
    let w = parse_word(text)?;
    let img = image_with_limits(&w, &g.group, limits)?;
    let violator = inversion_violator(&img, &g.group);
    eprintln!(
        "{}: |image of {w}| = {}, {}",
        g.label,
        img.len(),
        if violator.is_some() { "not closed under inverses" } else { "closed under inverses" }
    );
    emit(&json!({
        "group_label": g.label,
        "word": w,
        "elements": img.to_vec(),
        "closed": violator.is_none(),
        "violator": violator,
        "tool_version": TOOL_VERSION,
    }));
    Ok(())
}

fn family(q: u64, pr: u64, phi: u64, limits: &Limits) -> Result<(), Failure> {
    let start = Instant::now();
    let params = FamilyParameters::from_stanza(SemidirectStanza { q, pr, phi })?;
    let (v, r) = verify_family_chirality(&params, limits)?;
    eprintln!("family q={q} pr={pr} phi={phi}: {:?} ({})", v.status, v.method);
    let stats = CheckStats {
        elapsed_ms: start.elapsed().as_millis() as u64,
        map_cap: limits.map_cap,
        tuple_budget: limits.tuple_budget,
        stages: vec!["family-witness".into()],
        family: Some(r),
    };
    let label = format!("family-{}", params.order());
    emit(&VerdictReport::new(label, params.order() as usize, v, stats));
    Ok(())
}

fn nilpotent(cmd: Nilpotent, limits: &Limits) -> Result<(), Failure> {
    match cmd {
        Nilpotent::N23Verify { i, j, k, l, random, seed } => {
            let instances: Vec<[i64; 4]> = match (i, j, k, l, random) {
                (Some(i), Some(j), Some(k), Some(l), None) => vec![[i, j, k, l]],
                (None, None, None, None, Some(n)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (0..n).map(|_| std::array::from_fn(|_| rng.gen_range(-20..=20))).collect()
                }
                _ => return Err(Failure::Input("give --i --j --k --l or --random N".into())),
            };
            let mut verified = Vec::new();
            for [i, j, k, l] in instances {
                verified.push(verify_achirality_instance(i, j, k, l)?);
            }
            eprintln!("n23: {} instance(s) verified", verified.len());
            emit(&json!({ "verified": verified, "tool_version": TOOL_VERSION }));
        }
        Nilpotent::N32Search { p, moduli, mode } => {
            let m = match moduli {
                Some(v) => Moduli(v.try_into().map_err(|_| Failure::Input("need five moduli".into()))?),
                None => Moduli::main_search(p),
            };
            let mode = match mode {
                Mode::Full => SearchMode::Full,
                Mode::Restricted => SearchMode::Restricted,
            };
            let out = witness_search(p, m, mode, limits)?;
            eprintln!(
                "n32 search p={p} moduli {:?}: {}",
                m.0,
                if out.found().is_some() { "inverting endomorphism found" } else { "no inverting endomorphism" }
            );
            emit(&json!({ "result": out, "tool_version": TOOL_VERSION }));
        }
        Nilpotent::N32Congruence { p } => {
            let cert = congruence_certificate(p)?;
            eprintln!("n32 congruence p={p}: {} residues checked", cert.rows.len());
            emit(&json!({ "certificate": cert, "tool_version": TOOL_VERSION }));
        }
    }
    Ok(())
}

fn verify(report: &Path, group: &Path, limits: &Limits) -> Result<(), Failure> {
    let r: VerdictReport = serde_json::from_str(&read(report)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", report.display())))?;
    let g = load(group, limits)?;
    if r.order != g.group.order() {
        return Err(Failure::Mismatch(format!(
            "report is for a group of order {}, file has order {}",
            r.order,
            g.group.order()
        )));
    }
    let replay = verify_verdict(&g.group, &r.verdict(), limits)?;
    eprintln!("ok: {}", replay.summary);
    emit(&json!({ "ok": true, "verdict": replay.status, "summary": replay.summary }));
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Input(e.to_string()))?;
    }
    let mut limits = Limits::default();
    if let Some(c) = cli.map_cap {
        limits.map_cap = c;
    }
    if let Some(b) = cli.tuple_budget {
        limits.tuple_budget = b;
    }
    match cli.command {
        Command::Check { file, filters_only, exhaustive } => check(&file, filters_only, exhaustive, &limits),
        Command::Wgroup { file, d, dump } => wgroup(&file, d, dump.as_deref(), &limits),
        Command::Image { file, word } => image(&file, &word, &limits),
        Command::Family { q, pr, phi } => family(q, pr, phi, &limits),
        Command::Nilpotent(cmd) => nilpotent(cmd, &limits),
        Command::Verify { report, group } => verify(&report, &group, &limits),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Mismatch(m)) => {
            eprintln!("mismatch: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal assertion failed: {m}");
            ExitCode::from(3)
        }
    }
}
