//! Command-line interface.
//!
//! Exit codes: 0 success (all checks PASS); 1 a verified relation FAILED
//! (a mathematical falsification, loudly distinguished from operational
//! errors); 2 usage error; 3 uncalibrated base table; 4 internal assertion
//! or cache integrity failure; 5 inconsistent calibration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use tautrel_core::verify::SuiteRange;
use tautrel_core::Error as CoreError;

use crate::cache::CacheStore;
use crate::constants;
use crate::engine::{exit_code_for, Engine, PairingClass};
use crate::runner::{self, SuiteKind, SuiteOptions};

#[derive(Parser)]
#[command(name = "tautrel", version, about = "exact verification of tree-sum tautological relations", disable_help_subcommand = true)]
struct Cli {
    /// Cache file (default: $TAUTREL_CACHE or ./tautrel-cache.txt)
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Keep the cache in memory only
    #[arg(long, global = true)]
    no_cache: bool,

    /// Base-constants file (default: calibrate from the embedded oracle)
    #[arg(long, global = true)]
    constants: Option<PathBuf>,

    /// Worker threads (0 = available parallelism)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print one computed object in canonical form
    Compute {
        #[command(subcommand)]
        what: ComputeCmd,
    },
    /// Run a verification suite
    Verify {
        #[command(subcommand)]
        which: VerifyCmd,
    },
    /// Assemble and validate a base-constants file from oracle inputs
    Calibrate {
        /// Oracle free-coefficient file (default: embedded)
        #[arg(long)]
        oracle: Option<PathBuf>,
        /// Output base-constants file
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = constants::DEFAULT_MAX_G)]
        max_g: u32,
        #[arg(long, default_value_t = constants::DEFAULT_MAX_K)]
        max_k: u32,
    },
    /// Cache maintenance
    Cache {
        #[command(subcommand)]
        op: CacheCmd,
    },
}

#[derive(Subcommand)]
enum ComputeCmd {
    /// Witten-Kontsevich number <tau_{d_1}...tau_{d_n}>_g
    Wk {
        #[arg(long)]
        g: u32,
        /// Comma-separated psi exponents
        #[arg(long, value_delimiter = ',')]
        d: Vec<u32>,
    },
    /// Kernel polynomial K(g;k;d;d0) in x1..xk
    Kernel {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_delimiter = ',')]
        d: Vec<u32>,
        #[arg(long)]
        d0: u32,
    },
    /// Pairing polynomial in a1..an
    Pairing {
        /// B, A, Xi or third
        #[arg(long)]
        class: String,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        /// Frozen legs (B and Xi; A has m=1, third m=0)
        #[arg(long, default_value_t = 0)]
        m: u32,
        /// Frozen psi exponents (for A: the single exponent b)
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        b: Vec<u32>,
        /// Emit the result as JSON ({"degree":..,"u_exp":..,"poly":".."})
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Clone, Copy)]
struct RangeArgs {
    #[arg(long, default_value_t = 2)]
    max_g: u32,
    #[arg(long, default_value_t = 4)]
    max_n: u32,
    #[arg(long, default_value_t = 3)]
    max_m: u32,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Master relation: deg <alpha, Xi^m> <= 2g-2+m
    Master {
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// A=B degree bounds, statements 1-3
    Aeqb {
        /// 1, 2 or 3 (default: all)
        #[arg(long)]
        statement: Option<u8>,
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// String identity for the alternating Xi class
    String {
        #[arg(long, default_value_t = 2)]
        max_g: u32,
        #[arg(long, default_value_t = 3)]
        max_n: u32,
        #[arg(long, default_value_t = 4)]
        max_b: u32,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// C1 = C2 for every stable rooted tree in range
    C1c2 {
        #[arg(long, default_value_t = 2)]
        max_g: u32,
        #[arg(long, default_value_t = 4)]
        max_n: u32,
        #[arg(long, default_value_t = 5)]
        max_vertices: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Every suite
    Suite {
        #[command(flatten)]
        range: RangeArgs,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CacheCmd {
    /// Recompute a random sample of entries from scratch and compare
    Audit {
        #[arg(long, default_value_t = 0.05)]
        sample: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Import entries from another cache file
    Merge {
        #[arg(long)]
        from: PathBuf,
    },
    /// Write the whole cache to a file
    Export {
        #[arg(long)]
        to: PathBuf,
    },
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version on stdout with success
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match std::panic::catch_unwind(move || dispatch(cli)) {
        Ok(code) => code,
        Err(_) => {
            eprintln!("internal assertion failed");
            4
        }
    }
}

fn core_err(e: &CoreError) -> i32 {
    eprintln!("error: {e}");
    exit_code_for(e)
}

fn dispatch(cli: Cli) -> i32 {
    let base = match &cli.constants {
        None => constants::default_base(),
        Some(path) => std::fs::read_to_string(path)
            .map_err(anyhow::Error::from)
            .and_then(|text| constants::load_base_file(&text)),
    };
    let base = match base {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {e}");
            return 5;
        }
    };

    let cache_path = if cli.no_cache {
        None
    } else {
        Some(cli.cache.clone().unwrap_or_else(|| {
            std::env::var_os("TAUTREL_CACHE")
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("tautrel-cache.txt"))
        }))
    };
    let store = match &cache_path {
        None => CacheStore::in_memory(),
        Some(p) => match CacheStore::open(p) {
            Ok(s) => {
                for c in s.corrupt_entries() {
                    eprintln!("cache: ignoring corrupt line {} of {}", c.line_number, p.display());
                }
                s
            }
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
    };
    let engine = Engine::new(base, store, vec!["hain-ct-lambda".to_string()]);

    match cli.command {
        Command::Compute { what } => compute(&engine, what),
        Command::Verify { which } => verify(&engine, which, cli.threads),
        Command::Calibrate { oracle, out, max_g, max_k } => calibrate(oracle, out, max_g, max_k),
        Command::Cache { op } => cache_op(&engine, op),
    }
}

fn compute(engine: &Engine, what: ComputeCmd) -> i32 {
    match what {
        ComputeCmd::Wk { g, d } => match engine.wk(g, &d) {
            Ok(v) => {
                println!("{v}");
                0
            }
            Err(e) => core_err(&e),
        },
        ComputeCmd::Kernel { g, k, d, d0 } => {
            if d.len() != k as usize {
                eprintln!("error: --d must list exactly k exponents");
                return 2;
            }
            match engine.kernel(g, k, &d, d0) {
                Ok(p) => {
                    println!("{}", p.render());
                    0
                }
                Err(e) => core_err(&e),
            }
        }
        ComputeCmd::Pairing { class, g, n, m, b, json } => {
            let (class, m, b) = match class.as_str() {
                "B" => (PairingClass::B, m, b),
                "Xi" => (PairingClass::Xi, m, b),
                "A" => {
                    if b.len() > 1 {
                        eprintln!("error: class A takes a single exponent b");
                        return 2;
                    }
                    (PairingClass::A, 1, if b.is_empty() { vec![0] } else { b })
                }
                "third" => (PairingClass::Third, 0, vec![]),
                other => {
                    eprintln!("error: unknown class {other} (expected B, A, Xi or third)");
                    return 2;
                }
            };
            if b.len() != m as usize {
                eprintln!("error: --b must list exactly m exponents");
                return 2;
            }
            match engine.pairing(class, g, n, m, &b) {
                Ok(r) => {
                    if json {
                        let resp = crate::report::PairingResponse::from_result(&r);
                        println!("{}", serde_json::to_string(&resp).expect("serializes"));
                    } else {
                        match r.u_exp {
                            Some(u) => println!("{} (u^{u})", r.poly.render()),
                            None => println!("{}", r.poly.render()),
                        }
                    }
                    0
                }
                Err(e) => core_err(&e),
            }
        }
    }
}

fn verify(engine: &Engine, which: VerifyCmd, threads: usize) -> i32 {
    let mut opts = SuiteOptions { threads, ..SuiteOptions::default() };
    let (kind, report_path) = match which {
        VerifyCmd::Master { range, report } => {
            opts.range = SuiteRange {
                max_g: range.max_g,
                max_n: range.max_n,
                max_m: range.max_m,
                ..SuiteRange::default()
            };
            (SuiteKind::Master, report)
        }
        VerifyCmd::Aeqb { statement, range, report } => {
            if let Some(s) = statement {
                if !(1..=3).contains(&s) {
                    eprintln!("error: --statement must be 1, 2 or 3");
                    return 2;
                }
            }
            opts.range = SuiteRange {
                max_g: range.max_g,
                max_n: range.max_n,
                max_m: range.max_m,
                ..SuiteRange::default()
            };
            (SuiteKind::Aeqb(statement), report)
        }
        VerifyCmd::String { max_g, max_n, max_b, report } => {
            opts.range = SuiteRange { max_g, ..SuiteRange::default() };
            opts.string_max_n = max_n;
            opts.string_max_b = max_b;
            (SuiteKind::StringXi, report)
        }
        VerifyCmd::C1c2 { max_g, max_n, max_vertices, report } => {
            opts.range = SuiteRange { max_g, max_n, ..SuiteRange::default() };
            opts.c1c2_max_vertices = max_vertices;
            (SuiteKind::C1c2, report)
        }
        VerifyCmd::Suite { range, report } => {
            opts.range = SuiteRange {
                max_g: range.max_g,
                max_n: range.max_n,
                max_m: range.max_m,
                ..SuiteRange::default()
            };
            (SuiteKind::All, report)
        }
    };
    match runner::run_suite(engine, kind, &opts) {
        Ok(report) => {
            if let Some(path) = report_path {
                if let Err(e) = std::fs::write(&path, report.to_json()) {
                    eprintln!("error writing report: {e}");
                    return 2;
                }
            }
            for inst in &report.instances {
                if inst.verdict == "FAIL" {
                    eprintln!(
                        "FAIL {} bound={} degree={:?} poly={}",
                        inst.key(),
                        inst.bound,
                        inst.computed_degree,
                        inst.poly_if_fail.as_deref().unwrap_or("")
                    );
                }
            }
            println!("{}", report.summary_line());
            if report.all_pass() {
                0
            } else {
                1
            }
        }
        Err(e) => core_err(&e),
    }
}

fn calibrate(oracle: Option<PathBuf>, out: PathBuf, max_g: u32, max_k: u32) -> i32 {
    let text = match &oracle {
        None => constants::EMBEDDED_ORACLE.to_string(),
        Some(p) => match std::fs::read_to_string(p) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
    };
    match constants::calibrate_from_oracle(&text, max_g, max_k) {
        Ok((base, sources)) => {
            let rendered = constants::render_base_file(&base, &sources);
            if let Ok(existing) = std::fs::read_to_string(&out) {
                if existing == rendered {
                    eprintln!("calibration unchanged; {} left as is", out.display());
                    return 0;
                }
            }
            if let Err(e) = std::fs::write(&out, &rendered) {
                eprintln!("error: {e}");
                return 2;
            }
            eprintln!(
                "calibrated g <= {max_g}, k <= {max_k} from sources [{}]; no verification instances consumed",
                sources.join(", ")
            );
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            5
        }
    }
}

fn cache_op(engine: &Engine, op: CacheCmd) -> i32 {
    match op {
        CacheCmd::Audit { sample, seed } => match engine.audit(sample, seed) {
            Ok(checked) => {
                println!("audit PASS ({checked} entries recomputed)");
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                4
            }
        },
        CacheCmd::Merge { from } => match engine.merge_cache(&from) {
            Ok(added) => {
                println!("merged {added} entries");
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        CacheCmd::Export { to } => match engine.export_cache(&to) {
            Ok(()) => {
                println!("exported to {}", to.display());
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
    }
}
