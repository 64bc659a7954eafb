//! Parallel suite runner with deterministic reports.
//!
//! Instances run in a work pool; entries are sorted by instance key before
//! assembly, so reports are bit-identical (timings aside) across thread
//! counts and cache states.

use std::time::Instant;

use rayon::prelude::*;
use tautrel_core::verify::{self, SuiteRange, VerdictEntry};
use tautrel_core::Result as CoreResult;

use crate::engine::Engine;
use crate::report::{CalibrationInfo, InstanceReport, Report, Summary};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteKind {
    Master,
    Aeqb(Option<u8>),
    StringXi,
    C1c2,
    All,
}

impl SuiteKind {
    pub fn name(&self) -> String {
        match self {
            SuiteKind::Master => "master".into(),
            SuiteKind::Aeqb(None) => "aeqb".into(),
            SuiteKind::Aeqb(Some(s)) => format!("aeqb-{s}"),
            SuiteKind::StringXi => "string".into(),
            SuiteKind::C1c2 => "c1c2".into(),
            SuiteKind::All => "suite".into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub range: SuiteRange,
    /// g/n bounds for the string-identity suite.
    pub string_max_n: u32,
    pub string_max_b: u32,
    pub c1c2_max_vertices: usize,
    pub threads: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            range: SuiteRange::default(),
            string_max_n: 3,
            string_max_b: 4,
            c1c2_max_vertices: 5,
            threads: 0,
        }
    }
}

enum Instance {
    Master(u32, u32, u32, Vec<u32>),
    Aeqb1(u32, u32, u32, Vec<u32>),
    Aeqb2(u32, u32, u32),
    Aeqb3(u32, u32),
    StringXi(u32, u32, u32),
    C1c2(u32, u32, usize),
}

impl Instance {
    fn run(&self, engine: &Engine) -> CoreResult<VerdictEntry> {
        engine.with_ctx(|ctx| match self {
            Instance::Master(g, n, m, b) => verify::check_master(ctx, *g, *n, *m, b),
            Instance::Aeqb1(g, n, m, b) => verify::check_aeqb_1(ctx, *g, *n, *m, b),
            Instance::Aeqb2(g, n, b) => verify::check_aeqb_2(ctx, *g, *n, *b),
            Instance::Aeqb3(g, n) => verify::check_aeqb_3(ctx, *g, *n),
            Instance::StringXi(g, n, b) => verify::check_string_xi(ctx, *g, *n, *b),
            Instance::C1c2(g, n, maxv) => verify::check_c1_equals_c2(*maxv, *g, *n),
        })
    }
}

fn instances(kind: SuiteKind, opts: &SuiteOptions) -> Vec<Instance> {
    let mut out = Vec::new();
    let r = opts.range;
    match kind {
        SuiteKind::Master => {
            for (g, n, m, b) in verify::master_instances(r) {
                out.push(Instance::Master(g, n, m, b));
            }
        }
        SuiteKind::Aeqb(which) => {
            if which.is_none() || which == Some(1) {
                for (g, n, m, b) in verify::aeqb1_instances(r) {
                    out.push(Instance::Aeqb1(g, n, m, b));
                }
            }
            if which.is_none() || which == Some(2) {
                for (g, n, b) in verify::aeqb2_instances(r) {
                    out.push(Instance::Aeqb2(g, n, b));
                }
            }
            if which.is_none() || which == Some(3) {
                for (g, n) in verify::aeqb3_instances(r) {
                    out.push(Instance::Aeqb3(g, n));
                }
            }
        }
        SuiteKind::StringXi => {
            for (g, n, b) in verify::string_instances(r.max_g, opts.string_max_n, opts.string_max_b)
            {
                out.push(Instance::StringXi(g, n, b));
            }
        }
        SuiteKind::C1c2 => {
            for g in 0..=r.max_g {
                for n in 1..=r.max_n {
                    if 2 * g as i64 - 2 + n as i64 + 1 > 0 {
                        out.push(Instance::C1c2(g, n, opts.c1c2_max_vertices));
                    }
                }
            }
        }
        SuiteKind::All => {
            out.extend(instances(SuiteKind::Master, opts));
            out.extend(instances(SuiteKind::Aeqb(None), opts));
            out.extend(instances(SuiteKind::StringXi, opts));
            out.extend(instances(SuiteKind::C1c2, opts));
        }
    }
    out
}

pub fn run_suite(engine: &Engine, kind: SuiteKind, opts: &SuiteOptions) -> CoreResult<Report> {
    let started = Instant::now();
    let items = instances(kind, opts);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .expect("thread pool");
    let results: Vec<CoreResult<InstanceReport>> = pool.install(|| {
        items
            .par_iter()
            .map(|inst| {
                let t = Instant::now();
                let entry = inst.run(engine)?;
                Ok(InstanceReport::from_entry(&entry, t.elapsed().as_micros() as u64))
            })
            .collect()
    });
    let mut reports = Vec::with_capacity(results.len());
    for r in results {
        reports.push(r?);
    }
    reports.sort_by_key(|r| r.key());
    let passed = reports.iter().filter(|r| r.verdict == "PASS").count();
    let failed = reports.len() - passed;
    Ok(Report {
        suite: kind.name(),
        engine_version: crate::cache::ENGINE_VERSION.to_string(),
        calibration: CalibrationInfo {
            max_g: engine.base().max_g(),
            max_k: engine.base().max_k(),
            sources: engine.sources().to_vec(),
            excluded_instances: vec![],
        },
        instances: reports,
        summary: Summary {
            total: passed + failed,
            passed,
            failed,
            elapsed_ms: started.elapsed().as_millis() as u64,
        },
    })
}
