//! Calibration file formats.
//!
//! Oracle input (free coefficients), line oriented, `#` comments:
//!
//! ```text
//! free g=<g> k=<k> partition=<c1,c2,..> value=<p/q> source=<oracle-id>
//! ```
//!
//! Base-constants file written by `calibrate`:
//!
//! ```text
//! K0 g=<g> k=<k> poly=<canonical MultiPoly> source=<oracle-id> checks=<list>
//! ```
//!
//! A base file is rejected on load unless every named check re-verifies:
//! `symmetry`, `homogeneity` and `string` run structurally on the table,
//! `dilaton` re-runs the kernel recursion.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context};
use tautrel_core::kernel::{FreeConstant, KernelBase, KernelTable};
use tautrel_core::poly::{parse_rat, MultiPoly, Vars};

/// The shipped oracle constants (see the repository `data/` directory).
pub const EMBEDDED_ORACLE: &str = include_str!("../data/oracle-constants.txt");

pub const DEFAULT_MAX_G: u32 = 2;
pub const DEFAULT_MAX_K: u32 = 6;

pub fn parse_oracle(text: &str) -> anyhow::Result<Vec<FreeConstant>> {
    let mut out: Vec<FreeConstant> = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let rest = line
            .strip_prefix("free ")
            .ok_or_else(|| anyhow!("line {}: expected `free ...`", no + 1))?;
        let mut g = None;
        let mut k = None;
        let mut partition = None;
        let mut value = None;
        let mut source = None;
        for field in rest.split_whitespace() {
            let (name, val) =
                field.split_once('=').ok_or_else(|| anyhow!("line {}: bad field {field}", no + 1))?;
            match name {
                "g" => g = Some(val.parse::<u32>()?),
                "k" => k = Some(val.parse::<u32>()?),
                "partition" => {
                    partition =
                        Some(val.split(',').map(|t| t.parse::<u32>()).collect::<Result<Vec<_>, _>>()?)
                }
                "value" => value = Some(parse_rat(val).map_err(|e| anyhow!("line {}: {e}", no + 1))?),
                "source" => source = Some(val.to_string()),
                _ => bail!("line {}: unknown field {name}", no + 1),
            }
        }
        let c = FreeConstant {
            g: g.ok_or_else(|| anyhow!("line {}: missing g", no + 1))?,
            k: k.ok_or_else(|| anyhow!("line {}: missing k", no + 1))?,
            partition: partition.ok_or_else(|| anyhow!("line {}: missing partition", no + 1))?,
            value: value.ok_or_else(|| anyhow!("line {}: missing value", no + 1))?,
            source: source.ok_or_else(|| anyhow!("line {}: missing source", no + 1))?,
        };
        if let Some(prev) =
            out.iter().find(|p| p.g == c.g && p.k == c.k && p.partition == c.partition)
        {
            if prev.value != c.value {
                bail!(
                    "contradictory oracle rows for g={} k={} partition={:?}",
                    c.g,
                    c.k,
                    c.partition
                );
            }
            continue;
        }
        out.push(c);
    }
    Ok(out)
}

/// Assemble and fully validate (including dilaton) from oracle constants.
pub fn calibrate_from_oracle(
    text: &str,
    max_g: u32,
    max_k: u32,
) -> anyhow::Result<(KernelBase, Vec<String>)> {
    let free = parse_oracle(text)?;
    let base = tautrel_core::kernel::calibrate(max_g, max_k, &free)
        .map_err(|e| anyhow!("calibration failed: {e}"))?;
    let mut sources: Vec<String> = free.iter().map(|f| f.source.clone()).collect();
    sources.sort();
    sources.dedup();
    Ok((base, sources))
}

/// The default calibrated table, from the embedded oracle constants.
pub fn default_base() -> anyhow::Result<KernelBase> {
    Ok(calibrate_from_oracle(EMBEDDED_ORACLE, DEFAULT_MAX_G, DEFAULT_MAX_K)?.0)
}

const BASE_CHECKS: &str = "symmetry,homogeneity,string,dilaton";

pub fn render_base_file(base: &KernelBase, sources: &[String]) -> String {
    let source = if sources.is_empty() { "unspecified".to_string() } else { sources.join("+") };
    let mut out = String::new();
    for g in 0..=base.max_g() {
        for k in 1..=base.max_k() {
            let poly = base.k0(g, k).expect("in range");
            out += &format!("K0 g={g} k={k} poly={} source={source} checks={BASE_CHECKS}\n", poly.render());
        }
    }
    out
}

/// Load a base-constants file, re-verifying every check it lists.
pub fn load_base_file(text: &str) -> anyhow::Result<KernelBase> {
    let mut polys: BTreeMap<(u32, u32), MultiPoly> = BTreeMap::new();
    let mut max_g = 0;
    let mut max_k = 0;
    let mut want_dilaton = false;
    for (no, line) in text.lines().enumerate() {
        let line = line.trim_end();
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let rest = line
            .strip_prefix("K0 ")
            .ok_or_else(|| anyhow!("line {}: expected `K0 ...`", no + 1))?;
        let (gk, rest) = rest.split_once(" poly=").ok_or_else(|| anyhow!("line {}: missing poly", no + 1))?;
        let (poly_s, rest) =
            rest.split_once(" source=").ok_or_else(|| anyhow!("line {}: missing source", no + 1))?;
        let (_source, checks) =
            rest.split_once(" checks=").ok_or_else(|| anyhow!("line {}: missing checks", no + 1))?;
        let mut g = None;
        let mut k = None;
        for field in gk.split_whitespace() {
            match field.split_once('=') {
                Some(("g", v)) => g = Some(v.parse::<u32>()?),
                Some(("k", v)) => k = Some(v.parse::<u32>()?),
                _ => bail!("line {}: bad field {field}", no + 1),
            }
        }
        let g = g.ok_or_else(|| anyhow!("line {}: missing g", no + 1))?;
        let k = k.ok_or_else(|| anyhow!("line {}: missing k", no + 1))?;
        let poly = MultiPoly::parse(poly_s, Vars::kernel(k as usize))
            .map_err(|e| anyhow!("line {}: {e}", no + 1))?;
        for c in checks.split(',') {
            match c {
                "symmetry" | "homogeneity" | "string" => {}
                "dilaton" => want_dilaton = true,
                other => bail!("line {}: unknown check {other}", no + 1),
            }
        }
        polys.insert((g, k), poly);
        max_g = max_g.max(g);
        max_k = max_k.max(k);
    }
    // symmetry, homogeneity and string re-verify inside from_polys
    let base = KernelBase::from_polys(max_g, max_k, polys)
        .map_err(|e| anyhow!("base file rejected: {e}"))?;
    if want_dilaton {
        let mut table = KernelTable::new();
        for g in 1..=max_g {
            for k in 2..=max_k {
                table
                    .check_dilaton(&base, g, k)
                    .map_err(|e| anyhow!("base file rejected: {e}"))
                    .context("dilaton re-verification")?;
            }
        }
    }
    Ok(base)
}
