//! Shared evaluation engine: the calibrated base, the memo tables behind
//! locks, and the persistent cache.
//!
//! Workers take a snapshot of the tables, compute locally, and merge the
//! new entries back; recomputation races are benign because every value is
//! canonical. Merged entries are appended to the persistent store.

use std::sync::Mutex;

use tautrel_core::assembly::{self, Ctx, PairingResult};
use tautrel_core::kernel::{KernelBase, KernelTable};
use tautrel_core::poly::{parse_rat, MultiPoly, Rat, Vars};
use tautrel_core::wk::WkTable;
use tautrel_core::Error as CoreError;
use tautrel_core::Result as CoreResult;

use crate::cache::{CacheError, CacheStore};

pub struct Engine {
    base: KernelBase,
    sources: Vec<String>,
    wk: Mutex<WkTable>,
    kernel: Mutex<KernelTable>,
    cache: Mutex<CacheStore>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairingClass {
    B,
    A,
    Xi,
    Third,
}

impl PairingClass {
    pub fn tag(&self) -> &'static str {
        match self {
            PairingClass::B => "B",
            PairingClass::A => "A",
            PairingClass::Xi => "Xi",
            PairingClass::Third => "third",
        }
    }
}

fn join(v: &[u32]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn split_u32(s: &str) -> Option<Vec<u32>> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split(',').map(|t| t.parse().ok()).collect()
}

impl Engine {
    /// Seed the in-memory tables from the persistent store.
    pub fn new(base: KernelBase, cache: CacheStore, sources: Vec<String>) -> Self {
        let mut wk = WkTable::new();
        for (key, value) in cache.entries_of("WK") {
            if let Some((g, d)) = parse_wk_key(&key) {
                if let Ok(r) = parse_rat(&value) {
                    wk.seed(g, d, r);
                }
            }
        }
        let mut kernel = KernelTable::new();
        for (key, value) in cache.entries_of("KERNEL") {
            if let Some((g, k, d, d0)) = parse_kernel_key(&key) {
                if let Ok(p) = MultiPoly::parse(&value, Vars::kernel(k as usize)) {
                    kernel.seed(g, k, d, d0, p);
                }
            }
        }
        Engine {
            base,
            sources,
            wk: Mutex::new(wk),
            kernel: Mutex::new(kernel),
            cache: Mutex::new(cache),
        }
    }

    pub fn base(&self) -> &KernelBase {
        &self.base
    }

    pub fn sources(&self) -> &[String] {
        &self.sources
    }

    pub fn cache_len(&self) -> usize {
        self.cache.lock().unwrap().len()
    }

    pub fn corrupt_entries(&self) -> usize {
        self.cache.lock().unwrap().corrupt_entries().len()
    }

    /// Run a computation against snapshot tables and merge the results back.
    pub fn with_ctx<R>(&self, f: impl FnOnce(&mut Ctx<'_>) -> R) -> R {
        let mut wk_local = self.wk.lock().unwrap().clone();
        let mut kernel_local = self.kernel.lock().unwrap().clone();
        let out = {
            let mut ctx =
                Ctx { wk: &mut wk_local, kernel: &mut kernel_local, base: &self.base };
            f(&mut ctx)
        };
        self.flush(&wk_local, &kernel_local);
        out
    }

    fn flush(&self, wk_local: &WkTable, kernel_local: &KernelTable) {
        {
            let mut shared = self.wk.lock().unwrap();
            shared.absorb(wk_local);
        }
        {
            let mut shared = self.kernel.lock().unwrap();
            shared.absorb(kernel_local);
        }
        let mut cache = self.cache.lock().unwrap();
        for ((g, d), v) in wk_local.entries() {
            let key = format!("WK|{g}|{}", join(d));
            if cache.get("WK", &key).is_none() {
                let _ = cache.put("WK", &key, &v.to_string());
            }
        }
        for ((g, k, d, d0), p) in kernel_local.entries() {
            let key = format!("K|{g}|{k}|{}|{d0}", join(d));
            if cache.get("KERNEL", &key).is_none() {
                let _ = cache.put("KERNEL", &key, &p.render());
            }
        }
    }

    /// Witten-Kontsevich number (cache-backed through the memo tables).
    pub fn wk(&self, g: u32, d: &[u32]) -> CoreResult<Rat> {
        self.with_ctx(|ctx| ctx.wk.integral(g, d))
    }

    /// Kernel polynomial in `x1..xk`.
    pub fn kernel(&self, g: u32, k: u32, d: &[u32], d0: u32) -> CoreResult<MultiPoly> {
        self.with_ctx(|ctx| ctx.kernel.eval(ctx.base, g, k, d, d0))
    }

    /// Pairing with a persistent-cache fast path keyed by
    /// `P|<class>|<g>|<n>|<m>|<b>`.
    pub fn pairing(
        &self,
        class: PairingClass,
        g: u32,
        n: u32,
        m: u32,
        b: &[u32],
    ) -> CoreResult<PairingResult> {
        let key = format!("P|{}|{g}|{n}|{m}|{}", class.tag(), join(b));
        let cached = self.cache.lock().unwrap().get("PAIRING", &key).map(str::to_string);
        let poly = match cached {
            Some(text) => MultiPoly::parse(&text, Vars::legs(n as usize))?,
            None => {
                let r = self.compute_pairing(class, g, n, m, b)?;
                let mut cache = self.cache.lock().unwrap();
                if cache.get("PAIRING", &key).is_none() {
                    let _ = cache.put("PAIRING", &key, &r.poly.render());
                }
                r.poly
            }
        };
        let degree = poly.homogeneous_degree();
        let u_exp = match class {
            PairingClass::Xi if degree.is_some() => {
                Some(2 * g as i64 - 2 + m as i64 - degree.unwrap() as i64)
            }
            _ => None,
        };
        Ok(PairingResult { poly, degree, u_exp })
    }

    fn compute_pairing(
        &self,
        class: PairingClass,
        g: u32,
        n: u32,
        m: u32,
        b: &[u32],
    ) -> CoreResult<PairingResult> {
        self.with_ctx(|ctx| match class {
            PairingClass::B => assembly::pair_b(ctx, g, n, m, b),
            PairingClass::A => {
                let bb = b.first().copied().unwrap_or(0);
                assembly::pair_a(ctx, g, n, bb, assembly::CoeffRoute::ProductFormula)
            }
            PairingClass::Xi => assembly::pair_xi(ctx, g, n, m, b),
            PairingClass::Third => assembly::pair_third(ctx, g, n),
        })
    }

    /// Recompute a sample of cache entries from scratch and compare.
    pub fn audit(&self, fraction: f64, seed: u64) -> Result<usize, CacheError> {
        let base = self.base.clone();
        let cache = self.cache.lock().unwrap();
        cache.audit(fraction, seed, |kind, key| {
            let mut wk = WkTable::new();
            let mut kernel = KernelTable::new();
            let mut ctx = Ctx { wk: &mut wk, kernel: &mut kernel, base: &base };
            match kind {
                "WK" => {
                    let (g, d) = parse_wk_key(key)?;
                    ctx.wk.integral(g, &d).ok().map(|r| r.to_string())
                }
                "KERNEL" => {
                    let (g, k, d, d0) = parse_kernel_key(key)?;
                    ctx.kernel.eval(ctx.base, g, k, &d, d0).ok().map(|p| p.render())
                }
                "PAIRING" => {
                    let (class, g, n, m, b) = parse_pairing_key(key)?;
                    let r = match class {
                        PairingClass::B => assembly::pair_b(&mut ctx, g, n, m, &b),
                        PairingClass::A => assembly::pair_a(
                            &mut ctx,
                            g,
                            n,
                            b.first().copied().unwrap_or(0),
                            assembly::CoeffRoute::ProductFormula,
                        ),
                        PairingClass::Xi => assembly::pair_xi(&mut ctx, g, n, m, &b),
                        PairingClass::Third => assembly::pair_third(&mut ctx, g, n),
                    };
                    r.ok().map(|p| p.poly.render())
                }
                _ => None,
            }
        })
    }

    pub fn export_cache(&self, path: &std::path::Path) -> Result<(), CacheError> {
        self.cache.lock().unwrap().export_to(path)
    }

    pub fn merge_cache(&self, path: &std::path::Path) -> Result<usize, CacheError> {
        self.cache.lock().unwrap().merge_from(path)
    }
}

fn parse_wk_key(key: &str) -> Option<(u32, Vec<u32>)> {
    let rest = key.strip_prefix("WK|")?;
    let (g, d) = rest.split_once('|')?;
    Some((g.parse().ok()?, split_u32(d)?))
}

fn parse_kernel_key(key: &str) -> Option<(u32, u32, Vec<u32>, u32)> {
    let rest = key.strip_prefix("K|")?;
    let parts: Vec<&str> = rest.split('|').collect();
    if parts.len() != 4 {
        return None;
    }
    Some((
        parts[0].parse().ok()?,
        parts[1].parse().ok()?,
        split_u32(parts[2])?,
        parts[3].parse().ok()?,
    ))
}

fn parse_pairing_key(key: &str) -> Option<(PairingClass, u32, u32, u32, Vec<u32>)> {
    let rest = key.strip_prefix("P|")?;
    let parts: Vec<&str> = rest.split('|').collect();
    if parts.len() != 5 {
        return None;
    }
    let class = match parts[0] {
        "B" => PairingClass::B,
        "A" => PairingClass::A,
        "Xi" => PairingClass::Xi,
        "third" => PairingClass::Third,
        _ => return None,
    };
    Some((
        class,
        parts[1].parse().ok()?,
        parts[2].parse().ok()?,
        parts[3].parse().ok()?,
        split_u32(parts[4])?,
    ))
}

/// Map a core error to the CLI exit code contract.
pub fn exit_code_for(err: &CoreError) -> i32 {
    match err {
        CoreError::UncalibratedBase { .. } => 3,
        CoreError::InconsistentCalibration(_) => 5,
        CoreError::NotDivisible => 4,
        _ => 2,
    }
}
