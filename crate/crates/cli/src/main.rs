use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use skolem_core::engine::{Clustering, Config};
use skolem_core::synthesize;

use skolem_cli::runner::{namer, WallClock};
use skolem_cli::{aiger, bench, qdimacs, stats, verify};

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_TIMEOUT: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

#[derive(Parser)]
#[command(name = "skolem", version, about = "Boolean functional synthesis for 2QBF specifications")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClusterArg {
    Graph,
    Random,
}

#[derive(Args)]
struct ConfigArgs {
    /// Edge distance used to cluster outputs
    #[arg(long, default_value_t = 3)]
    k: u32,
    /// Maximum number of outputs learned together
    #[arg(long, default_value_t = 5)]
    s: usize,
    /// RNG seed (falls back to SKOLEM_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Cooperative timeout in seconds
    #[arg(long)]
    timeout: Option<u64>,
    /// Output clustering strategy
    #[arg(long, value_enum, default_value_t = ClusterArg::Graph)]
    cluster: ClusterArg,
    /// Lexicographic MaxSAT escalation for repair-candidate selection
    #[arg(long, value_enum, default_value_t = OnOff::On)]
    lex: OnOff,
    /// Samples per learned output (clamped to [sample-min, sample-max])
    #[arg(long, default_value_t = 50)]
    samples_per_var: usize,
    #[arg(long, default_value_t = 1000)]
    sample_min: usize,
    #[arg(long, default_value_t = 10000)]
    sample_max: usize,
    /// Gini impurity decrease below which tree growth stops
    #[arg(long, default_value_t = 0.005)]
    impurity: f64,
    /// Repairs of one candidate before self-substitution
    #[arg(long, default_value_t = 10)]
    selfsub_threshold: u32,
    /// Followup growth factor that escalates to lexicographic selection
    #[arg(long, default_value_t = 50)]
    lex_ratio: u32,
    /// Deletion-minimization passes over defining-set cores
    #[arg(long, default_value_t = 1)]
    core_min_passes: u32,
    /// Resolution-proof node budget for definition extraction
    #[arg(long, default_value_t = 1 << 22)]
    proof_budget: usize,
    /// Per-call solver conflict budget
    #[arg(long, default_value_t = 50_000_000)]
    conflict_budget: u64,
}

impl ConfigArgs {
    fn to_config(&self) -> Config {
        let seed = self
            .seed
            .or_else(|| std::env::var("SKOLEM_SEED").ok().and_then(|s| s.parse().ok()))
            .unwrap_or(0);
        Config {
            k: self.k,
            s: self.s,
            samples_per_var: self.samples_per_var,
            sample_min: self.sample_min,
            sample_max: self.sample_max,
            adaptive_prefix: 500,
            impurity_threshold: self.impurity,
            self_sub_threshold: self.selfsub_threshold,
            lex_ratio: self.lex_ratio,
            lex: matches!(self.lex, OnOff::On),
            clustering: match self.cluster {
                ClusterArg::Graph => Clustering::Graph,
                ClusterArg::Random => Clustering::Random,
            },
            seed,
            timeout_ms: self.timeout.map(|s| s * 1000),
            conflict_budget: self.conflict_budget,
            core_min_passes: self.core_min_passes,
            proof_node_budget: self.proof_budget,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Synthesise a Skolem function vector from a QDIMACS specification
    Synth {
        file: PathBuf,
        /// Write the grounded vector as ASCII AIGER
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write run statistics as JSON
        #[arg(long)]
        stats: Option<PathBuf>,
        /// Write a JSON-lines trace of the repair iterations
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write the sample matrix as CSV
        #[arg(long)]
        dump_samples: Option<PathBuf>,
        /// Write the learned decision trees as DOT
        #[arg(long)]
        dump_trees: Option<PathBuf>,
        /// Write the grounded functions in prefix notation
        #[arg(long)]
        dump_funcs: Option<PathBuf>,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Check a synthesised vector against its specification
    Verify {
        file: PathBuf,
        vector: PathBuf,
        /// Write the verification solver's learned clauses
        #[arg(long)]
        dump_drat: Option<PathBuf>,
    },
    /// Run every *.qdimacs in a directory and report PAR-2
    Bench {
        dir: PathBuf,
        /// Write per-instance results as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
    /// Report per-output definability status as CSV
    Defx {
        file: PathBuf,
        /// Write the report to a file instead of stdout
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        cfg: ConfigArgs,
    },
}

fn read_spec(path: &PathBuf) -> Result<skolem_core::Spec, u8> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_USAGE
    })?;
    qdimacs::parse(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_USAGE
    })
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), u8> {
    std::fs::write(path, contents).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        EXIT_INTERNAL
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_synth(
    file: PathBuf,
    output: Option<PathBuf>,
    stats_out: Option<PathBuf>,
    trace_out: Option<PathBuf>,
    dump_samples: Option<PathBuf>,
    dump_trees: Option<PathBuf>,
    dump_funcs: Option<PathBuf>,
    cfg: ConfigArgs,
) -> u8 {
    let spec = match read_spec(&file) {
        Ok(s) => s,
        Err(c) => return c,
    };
    let config = cfg.to_config();
    let clock = WallClock::new();
    let res = match synthesize(&spec, &config, &clock) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    let instance = file
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    if let Some(p) = &stats_out {
        let json = stats::stats_json(&instance, &res.stats);
        let text = serde_json::to_string_pretty(&json).expect("stats serialize");
        if let Err(c) = write_file(p, &text) {
            return c;
        }
    }
    if let Some(p) = &trace_out {
        if let Err(c) = write_file(p, &stats::trace_jsonl(&res.trace)) {
            return c;
        }
    }
    if let Some(p) = &dump_samples {
        let text = samples_csv(&spec, &res);
        if let Err(c) = write_file(p, &text) {
            return c;
        }
    }
    if let Some(p) = &dump_trees {
        let name = namer(&spec);
        let mut text = String::new();
        for t in &res.trees {
            text.push_str(&t.to_dot(&name));
        }
        if let Err(c) = write_file(p, &text) {
            return c;
        }
    }
    eprintln!(
        "{instance}: {} (unates {}, unique {}, learned {}, repaired {}, self-substituted {}; {} repair rounds, {} ms)",
        res.stats.status.as_str(),
        res.stats.unates,
        res.stats.unique,
        res.stats.learned,
        res.stats.repaired,
        res.stats.self_substituted,
        res.stats.repair_rounds,
        res.stats.phase.total_ms,
    );
    if !res.stats.status.solved() {
        return match res.stats.status {
            skolem_core::RunStatus::Timeout => EXIT_TIMEOUT,
            _ => EXIT_INTERNAL,
        };
    }
    if let Some(p) = &dump_funcs {
        let name = namer(&spec);
        let mut text = String::new();
        for e in res.vector.entries() {
            text.push_str(&format!(
                "{} = {}\n",
                name(e.var),
                res.store.to_prefix(e.func, &name)
            ));
        }
        if let Err(c) = write_file(p, &text) {
            return c;
        }
    }
    if let Some(p) = &output {
        let text = match aiger::write_aag(&spec, &res.store, &res.vector) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_INTERNAL;
            }
        };
        if let Err(c) = write_file(p, &text) {
            return c;
        }
    }
    EXIT_OK
}

fn samples_csv(spec: &skolem_core::Spec, res: &skolem_core::SynthResult) -> String {
    let name = namer(spec);
    let mut text = String::new();
    if let Some(m) = &res.samples {
        let header: Vec<String> = m.cols().iter().map(|&v| name(v)).collect();
        text.push_str(&header.join(","));
        text.push('\n');
        for row in m.rows() {
            let cells: Vec<&str> = row.iter().map(|&b| if b { "1" } else { "0" }).collect();
            text.push_str(&cells.join(","));
            text.push('\n');
        }
    }
    text
}

fn cmd_verify(file: PathBuf, vector: PathBuf, dump_drat: Option<PathBuf>) -> u8 {
    let spec = match read_spec(&file) {
        Ok(s) => s,
        Err(c) => return c,
    };
    let text = match std::fs::read_to_string(&vector) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", vector.display());
            return EXIT_USAGE;
        }
    };
    let mut store = skolem_core::FuncStore::new();
    let funcs = match aiger::read_aag(&text, &mut store, spec.inputs()) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {}: {e}", vector.display());
            return EXIT_INVALID;
        }
    };
    match verify::verify_vector_drat(&spec, &store, &funcs, dump_drat.is_some()) {
        Ok((valid, drat)) => {
            if let (Some(p), Some(d)) = (&dump_drat, drat) {
                if let Err(c) = write_file(p, &d) {
                    return c;
                }
            }
            if valid {
                println!("valid");
                EXIT_OK
            } else {
                println!("invalid");
                EXIT_INVALID
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

fn cmd_bench(dir: PathBuf, csv: Option<PathBuf>, cfg: ConfigArgs) -> u8 {
    let mut config = cfg.to_config();
    // PAR-2 needs a timeout; default to the standard competition setting
    let timeout_s = cfg.timeout.unwrap_or(7200);
    config.timeout_ms = Some(timeout_s * 1000);
    let (rows, warnings) = bench::run_dir(&dir, &config);
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let text = bench::to_csv(&rows);
    match &csv {
        Some(p) => {
            if let Err(c) = write_file(p, &text) {
                return c;
            }
        }
        None => print!("{text}"),
    }
    match bench::par2(&rows, timeout_s as f64) {
        Some(score) => println!("PAR-2: {score:.2} over {} instances", rows.iter().filter(|r| !r.is_error()).count()),
        None => println!("PAR-2: n/a (no instances)"),
    }
    EXIT_OK
}

fn cmd_defx(file: PathBuf, csv: Option<PathBuf>, cfg: ConfigArgs) -> u8 {
    let spec = match read_spec(&file) {
        Ok(s) => s,
        Err(c) => return c,
    };
    let config = cfg.to_config();
    let clock = WallClock::new();
    let mut working = spec.clone();
    let mut store = skolem_core::FuncStore::new();
    let mut vec = skolem_core::SkolemVec::empty(spec.outputs(), &store);
    let mut deps = skolem_core::learner::DepGraph::new();
    let params = skolem_core::definability::DefParams {
        conflict_budget: config.conflict_budget,
        core_min_passes: config.core_min_passes,
        proof_node_budget: config.proof_node_budget,
    };
    let ctrl = skolem_core::engine::Ctrl::new(&clock, config.timeout_ms);
    let rows = match skolem_core::definability::unidef(
        &mut working,
        &mut store,
        &mut vec,
        &mut deps,
        &params,
        &ctrl,
    ) {
        Ok((_, rows)) => rows,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    let name = namer(&spec);
    let mut text = String::from("variable,name,status,definition_clauses\n");
    for r in &rows {
        text.push_str(&format!(
            "{},{},{},{}\n",
            r.var,
            name(r.var),
            r.status.as_str(),
            r.def_clauses
        ));
    }
    match &csv {
        Some(p) => {
            if let Err(c) = write_file(p, &text) {
                return c;
            }
        }
        None => print!("{text}"),
    }
    EXIT_OK
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Synth {
            file,
            output,
            stats,
            trace,
            dump_samples,
            dump_trees,
            dump_funcs,
            cfg,
        } => cmd_synth(file, output, stats, trace, dump_samples, dump_trees, dump_funcs, cfg),
        Cmd::Verify {
            file,
            vector,
            dump_drat,
        } => cmd_verify(file, vector, dump_drat),
        Cmd::Bench { dir, csv, cfg } => cmd_bench(dir, csv, cfg),
        Cmd::Defx { file, csv, cfg } => cmd_defx(file, csv, cfg),
    };
    ExitCode::from(code)
}
