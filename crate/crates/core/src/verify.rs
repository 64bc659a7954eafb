//! Executable degree-bound checks for the verified relations.
//!
//! Every check produces a [`VerdictEntry`]: the instance key, the claimed
//! degree bound, the computed degree, and the verdict. A bound of `-1`
//! means the polynomial must vanish identically (a polynomial of negative
//! degree is the zero polynomial). FAIL entries always carry the offending
//! polynomial.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::assembly::{pair_a, pair_b, pair_third, pair_xi, CoeffRoute, Ctx};
use crate::poly::{MultiPoly, Vars};
use crate::trees::{coeff_c1, coeff_c2, compositions, enumerate_srt};
use crate::Result;

/// Verdict for one verified instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictEntry {
    pub check: &'static str,
    pub g: u32,
    pub n: u32,
    pub m: u32,
    pub b: Vec<u32>,
    /// Maximal allowed degree; `-1` demands the zero polynomial.
    pub bound: i64,
    pub computed_degree: Option<i64>,
    pub pass: bool,
    pub poly_if_fail: Option<String>,
}

impl VerdictEntry {
    /// Stable sort/deduplication key.
    pub fn key(&self) -> String {
        let bs: Vec<String> = self.b.iter().map(|x| alloc::format!("{x}")).collect();
        alloc::format!("{}|g={}|n={}|m={}|b={}", self.check, self.g, self.n, self.m, bs.join(","))
    }

    fn from_poly(
        check: &'static str,
        g: u32,
        n: u32,
        m: u32,
        b: Vec<u32>,
        bound: i64,
        poly: &MultiPoly,
    ) -> Self {
        let computed_degree = poly.degree().map(|d| d as i64);
        let pass = match computed_degree {
            None => true,
            Some(d) => d <= bound,
        };
        VerdictEntry {
            check,
            g,
            n,
            m,
            b,
            bound,
            computed_degree,
            pass,
            poly_if_fail: if pass { None } else { Some(poly.render()) },
        }
    }
}

/// Master relation: `deg <alpha, Xi^m_{g,n}> <= 2g-2+m`.
pub fn check_master(ctx: &mut Ctx<'_>, g: u32, n: u32, m: u32, b: &[u32]) -> Result<VerdictEntry> {
    let r = pair_xi(ctx, g, n, m, b)?;
    let bound = 2 * g as i64 - 2 + m as i64;
    Ok(VerdictEntry::from_poly("master", g, n, m, b.to_vec(), bound, &r.poly))
}

/// A=B degree bound, statement 1: `deg <alpha, B^m_{g,n}> <= 2g-2+m` for m >= 2.
pub fn check_aeqb_1(ctx: &mut Ctx<'_>, g: u32, n: u32, m: u32, b: &[u32]) -> Result<VerdictEntry> {
    debug_assert!(m >= 2);
    let r = pair_b(ctx, g, n, m, b)?;
    let bound = 2 * g as i64 - 2 + m as i64;
    Ok(VerdictEntry::from_poly("aeqb1", g, n, m, b.to_vec(), bound, &r.poly))
}

/// A=B degree bound, statement 2: `deg <psi^b, B^1 - A^1> <= 2g-1`.
pub fn check_aeqb_2(ctx: &mut Ctx<'_>, g: u32, n: u32, b: u32) -> Result<VerdictEntry> {
    let rb = pair_b(ctx, g, n, 1, &[b])?;
    let ra = pair_a(ctx, g, n, b, CoeffRoute::ProductFormula)?;
    let diff = &rb.poly - &ra.poly;
    let bound = 2 * g as i64 - 1;
    Ok(VerdictEntry::from_poly("aeqb2", g, n, 1, vec![b], bound, &diff))
}

/// A=B degree bound, statement 3: `deg <1, B^0 - pi_* A^1 / sum a> <= 2g-2`.
/// A failed exact division would falsify the expected structure and is
/// surfaced as a FAIL verdict rather than an operational error.
pub fn check_aeqb_3(ctx: &mut Ctx<'_>, g: u32, n: u32) -> Result<VerdictEntry> {
    let bound = 2 * g as i64 - 2;
    match pair_third(ctx, g, n) {
        Ok(r) => Ok(VerdictEntry::from_poly("aeqb3", g, n, 0, vec![], bound, &r.poly)),
        Err(crate::Error::NotDivisible) => Ok(VerdictEntry {
            check: "aeqb3",
            g,
            n,
            m: 0,
            b: vec![],
            bound,
            computed_degree: None,
            pass: false,
            poly_if_fail: Some(String::from(
                "A pairing is not divisible by the total weight",
            )),
        }),
        Err(e) => Err(e),
    }
}

/// Signed pairing `<alpha, tilde-Xi> = (-1)^d <alpha, Xi>` at the
/// dimension-forced degree `d`.
fn signed_xi(ctx: &mut Ctx<'_>, g: u32, n: u32, m: u32, b: &[u32]) -> Result<MultiPoly> {
    let r = pair_xi(ctx, g, n, m, b)?;
    let sum_b: i64 = b.iter().map(|&x| x as i64).sum();
    let d = 3 * g as i64 - 3 + n as i64 + m as i64 - sum_b;
    Ok(if d.rem_euclid(2) == 1 { -&r.poly } else { r.poly })
}

/// String identity for the alternating class: for `b >= 1`,
///
/// ```text
/// <psi^b psi^0, tXi^2_{g,n}> = <psi^{b-1}, tXi^1_{g,n}>
///                            + (sum a) <psi^b, tXi^1_{g,n}>
///                            + [b = g-1+n] K0(g,n)(a_1..a_n)
/// ```
///
/// The last term is the head correction at the boundary exponent: the
/// string equation maps the two-frozen-leg sum onto the one-frozen-leg sum
/// except for the unstable-root star trees, whose contribution
/// `-(sum a)^{g-2+n-beta} K0(g,n)` to `<psi^beta, Xi^1>` drops out of the
/// correspondence exactly once, at `beta = b-1 = g-2+n`.
pub fn check_string_xi(ctx: &mut Ctx<'_>, g: u32, n: u32, b: u32) -> Result<VerdictEntry> {
    assert!(b >= 1, "the identity is stated for a removable psi power");
    let vars = Vars::legs(n as usize);
    let lhs = signed_xi(ctx, g, n, 2, &[b, 0])?;
    let s1 = signed_xi(ctx, g, n, 1, &[b - 1])?;
    let s2 = signed_xi(ctx, g, n, 1, &[b])?;
    let total = MultiPoly::var_sum(vars, 0..n as usize);
    let mut rhs = &s1 + &(&total * &s2);
    if b as i64 == g as i64 - 1 + n as i64 {
        let k0 = ctx.kernel.eval(ctx.base, g, n, &vec![0; n as usize], (g + n - 2) as u32)?;
        let forms: Vec<MultiPoly> = (0..n as usize).map(|i| MultiPoly::var(vars, i)).collect();
        rhs += &k0.substitute(&forms, vars);
    }
    let diff = &lhs - &rhs;
    Ok(VerdictEntry::from_poly("string", g, n, 2, vec![b], -1, &diff))
}

/// `C1(T) = C2(T)` for every stable rooted tree in range.
pub fn check_c1_equals_c2(max_vertices: usize, g: u32, n: u32) -> Result<VerdictEntry> {
    let mut pass = true;
    let mut witness = None;
    for tree in enumerate_srt(g, n, 1)? {
        if tree.num_vertices() > max_vertices {
            continue;
        }
        if coeff_c1(&tree) != coeff_c2(&tree) {
            pass = false;
            witness = Some(tree.encode());
            break;
        }
    }
    Ok(VerdictEntry {
        check: "c1c2",
        g,
        n,
        m: 1,
        b: vec![],
        bound: -1,
        computed_degree: None,
        pass,
        poly_if_fail: witness,
    })
}

/// Instance ranges for the verification suites.
#[derive(Clone, Copy, Debug)]
pub struct SuiteRange {
    pub max_g: u32,
    pub max_n: u32,
    pub max_m: u32,
    pub max_b: u32,
}

impl Default for SuiteRange {
    fn default() -> Self {
        SuiteRange { max_g: 2, max_n: 4, max_m: 3, max_b: 4 }
    }
}

fn stable(g: u32, n: u32, m: u32) -> bool {
    2 * g as i64 - 2 + n as i64 + m as i64 > 0
}

/// Frozen-psi monomials with `sum b` up to the instance dimension.
fn psi_monomials(g: u32, n: u32, m: u32) -> Vec<Vec<u32>> {
    let dim = 3 * g as i64 - 3 + n as i64 + m as i64;
    let mut out = Vec::new();
    for s in 0..=dim.max(0) as u32 {
        out.extend(compositions(s, m as usize));
    }
    out
}

pub fn master_instances(r: SuiteRange) -> Vec<(u32, u32, u32, Vec<u32>)> {
    let mut out = Vec::new();
    for g in 0..=r.max_g {
        for n in 1..=r.max_n {
            for m in 1..=r.max_m {
                if !stable(g, n, m) {
                    continue;
                }
                for b in psi_monomials(g, n, m) {
                    out.push((g, n, m, b));
                }
            }
        }
    }
    out
}

pub fn aeqb1_instances(r: SuiteRange) -> Vec<(u32, u32, u32, Vec<u32>)> {
    let mut out = Vec::new();
    for g in 0..=r.max_g {
        for n in 1..=r.max_n {
            for m in 2..=r.max_m {
                if !stable(g, n, m) {
                    continue;
                }
                for b in psi_monomials(g, n, m) {
                    out.push((g, n, m, b));
                }
            }
        }
    }
    out
}

pub fn aeqb2_instances(r: SuiteRange) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for g in 0..=r.max_g {
        for n in 1..=r.max_n {
            if !stable(g, n, 1) {
                continue;
            }
            for b in 0..=(3 * g as i64 - 2 + n as i64).max(0) as u32 {
                out.push((g, n, b));
            }
        }
    }
    out
}

pub fn aeqb3_instances(r: SuiteRange) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for g in 0..=r.max_g {
        for n in 1..=r.max_n {
            if stable(g, n, 0) {
                out.push((g, n));
            }
        }
    }
    out
}

pub fn string_instances(max_g: u32, max_n: u32, max_b: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for g in 0..=max_g {
        for n in 1..=max_n {
            if !stable(g, n, 1) {
                continue;
            }
            for b in 1..=max_b {
                out.push((g, n, b));
            }
        }
    }
    out
}
