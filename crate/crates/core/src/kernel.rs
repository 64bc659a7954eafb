//! Integrals of `lambda_g DR_g` against psi powers.
//!
//! `K(g; k; d_1..d_k; d_0)` is the integral over `Mbar_{g,k+1}` of
//! `lambda_g DR_g(x_1,...,x_k, -sum x) prod psi_i^{d_i} psi_0^{d_0}`, where
//! the `(k+1)`-st point is the one of negative weight. The value is a
//! symmetric homogeneous polynomial of degree `2g` in the generic weights
//! `x_1..x_k`, and it vanishes unless `sum d_i + d_0 = g - 2 + k`.
//!
//! While some regular exponent is positive, multiplying the splitting
//! identity for a psi class on a double ramification cycle by the remaining
//! monomial and integrating gives
//!
//! ```text
//! x_i K(d; d0) = -(sum x) K(d - e_i; d0+1)
//!              + sum over (g1, g2, I with i in I) of
//!                x_I K(g1; {x_j}_{j not in I}, x_I; d0) K(g2; {x_j}_{j in I}; 0)
//! ```
//!
//! with unstable pieces dropped, and the bracket is exactly divisible by
//! `x_i`. The recursion terminates at all-zero regular exponents, resolved
//! from the calibrated base table `K0(g,k)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::poly::{rat, MultiPoly, Rat, Vars};
use crate::{Error, Result};

/// One externally calibrated coefficient of a base polynomial: the
/// monomial-orbit coefficient of the partition `partition` (a partition of
/// `2g` into exactly `k` positive parts) in `K0(g,k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeConstant {
    pub g: u32,
    pub k: u32,
    pub partition: Vec<u32>,
    pub value: Rat,
    pub source: String,
}

/// The free coefficients of the shipped calibration (genus <= 2), derived
/// from the compact-type expression for the double ramification cycle paired
/// with the top lambda class. The companion crate's constants file carries
/// the same values together with their provenance records.
pub fn builtin_free_constants() -> Vec<FreeConstant> {
    let c = |g: u32, k: u32, partition: Vec<u32>, value: Rat| FreeConstant {
        g,
        k,
        partition,
        value,
        source: String::from("hain-ct-lambda"),
    };
    vec![
        c(1, 1, vec![2], rat(1, 24)),
        c(1, 2, vec![1, 1], rat(0, 1)),
        c(2, 1, vec![4], rat(1, 1152)),
        c(2, 2, vec![3, 1], rat(0, 1)),
        c(2, 2, vec![2, 2], rat(7, 2880)),
        c(2, 3, vec![2, 1, 1], rat(0, 1)),
        c(2, 4, vec![1, 1, 1, 1], rat(0, 1)),
    ]
}

/// Partitions of `total` into exactly `parts` positive parts, weakly
/// decreasing.
pub fn partitions_exact(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: usize, max: u32) -> Vec<Vec<u32>> {
        if parts == 0 {
            return if total == 0 { vec![vec![]] } else { vec![] };
        }
        let mut out = Vec::new();
        let hi = max.min(total);
        for first in (1..=hi).rev() {
            if (first as u64) * (parts as u64) < total as u64 {
                break;
            }
            for mut rest in go(total - first, parts - 1, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    go(total, parts, total)
}

/// Monomial-orbit sum `m_lambda` in `k` variables.
fn orbit_sum(partition: &[u32], k: usize) -> MultiPoly {
    let vars = Vars::kernel(k);
    let mut padded: Vec<u32> = partition.to_vec();
    padded.resize(k, 0);
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    permute_all(&mut padded, 0, &mut seen);
    let mut p = MultiPoly::zero(vars);
    for e in seen {
        p.add_term(crate::poly::Mono(e), Rat::from_integer(1.into()));
    }
    p
}

fn permute_all(v: &mut Vec<u32>, start: usize, out: &mut BTreeSet<Vec<u32>>) {
    if start == v.len() {
        out.insert(v.clone());
        return;
    }
    let mut used = BTreeSet::new();
    for i in start..v.len() {
        if !used.insert(v[i]) {
            continue;
        }
        v.swap(start, i);
        permute_all(v, start + 1, out);
        v.swap(start, i);
    }
}

/// Calibrated base table: `K0(g,k)` for all `g <= max_g`, `k <= max_k`.
///
/// Completion from the free constants: in the monomial-orbit basis the
/// restriction `x_k -> 0` kills exactly the orbits of partitions with `k`
/// parts and identifies the rest with the orbits of `K0(g,k-1)`, so each
/// `K0(g,k)` is the canonical lift of `K0(g,k-1)` plus the free part.
#[derive(Clone, Debug)]
pub struct KernelBase {
    max_g: u32,
    max_k: u32,
    k0: BTreeMap<(u32, u32), MultiPoly>,
}

impl KernelBase {
    pub fn assemble(max_g: u32, max_k: u32, free: &[FreeConstant]) -> Result<Self> {
        let mut k0 = BTreeMap::new();
        for k in 1..=max_k {
            let p = if k >= 2 {
                MultiPoly::one(Vars::kernel(k as usize))
            } else {
                MultiPoly::zero(Vars::kernel(1))
            };
            k0.insert((0, k), p);
        }
        for g in 1..=max_g {
            for k in 1..=max_k {
                let mut p = if k == 1 {
                    MultiPoly::zero(Vars::kernel(1))
                } else {
                    lift(&k0[&(g, k - 1)], k as usize)
                };
                for part in partitions_exact(2 * g, k as usize) {
                    let c = free
                        .iter()
                        .find(|f| f.g == g && f.k == k && f.partition == part)
                        .ok_or_else(|| {
                            Error::InconsistentCalibration(alloc::format!(
                                "missing free coefficient for g={g} k={k} partition {part:?}"
                            ))
                        })?;
                    p += &orbit_sum(&part, k as usize).scale(&c.value);
                }
                k0.insert((g, k), p);
            }
        }
        let base = KernelBase { max_g, max_k, k0 };
        base.validate()?;
        Ok(base)
    }

    /// Build a base table directly from full `K0` polynomials (as read from
    /// a base-constants file); structural checks run immediately.
    pub fn from_polys(max_g: u32, max_k: u32, polys: BTreeMap<(u32, u32), MultiPoly>) -> Result<Self> {
        let mut k0 = polys;
        for k in 1..=max_k {
            let p = if k >= 2 {
                MultiPoly::one(Vars::kernel(k as usize))
            } else {
                MultiPoly::zero(Vars::kernel(1))
            };
            k0.entry((0, k)).or_insert(p);
        }
        for g in 0..=max_g {
            for k in 1..=max_k {
                if !k0.contains_key(&(g, k)) {
                    return Err(Error::InconsistentCalibration(alloc::format!(
                        "missing base polynomial for g={g} k={k}"
                    )));
                }
            }
        }
        let base = KernelBase { max_g, max_k, k0 };
        base.validate()?;
        Ok(base)
    }

    pub fn max_g(&self) -> u32 {
        self.max_g
    }

    pub fn max_k(&self) -> u32 {
        self.max_k
    }

    /// `K0(g,k)` as a polynomial in `x1..xk`.
    pub fn k0(&self, g: u32, k: u32) -> Result<&MultiPoly> {
        self.k0.get(&(g, k)).ok_or(Error::UncalibratedBase { g, k })
    }

    /// Structural checks: symmetry, homogeneity of degree `2g`, and the
    /// string specialization `K0(g,k)|_{x_k=0} = K0(g,k-1)`.
    pub fn validate(&self) -> Result<()> {
        for (&(g, k), p) in &self.k0 {
            if !p.is_zero() && p.homogeneous_degree() != Some(2 * g) {
                return Err(Error::InconsistentCalibration(alloc::format!(
                    "K0({g},{k}) is not homogeneous of degree {}",
                    2 * g
                )));
            }
            let kk = k as usize;
            for s in 0..kk.saturating_sub(1) {
                let mut perm: Vec<usize> = (0..kk).collect();
                perm.swap(s, s + 1);
                if &p.permute_vars(&perm) != p {
                    return Err(Error::InconsistentCalibration(alloc::format!(
                        "K0({g},{k}) is not symmetric"
                    )));
                }
            }
            // string specialization forgets the weight-zero point, so the
            // reduced space Mbar_{g,k} must itself be stable
            if k >= 2 && 2 * g as i64 - 2 + k as i64 > 0 {
                let restricted = restrict_last(p);
                if &restricted != self.k0(g, k - 1)? {
                    return Err(Error::InconsistentCalibration(alloc::format!(
                        "string specialization fails: K0({g},{k})|_(x{k}=0) != K0({g},{})",
                        k - 1
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Canonical lift to `k` variables: same orbit coefficients, no new orbits.
fn lift(p: &MultiPoly, k: usize) -> MultiPoly {
    let mut orbits: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut key: Vec<u32> = m.0.iter().copied().filter(|&e| e > 0).collect();
        key.sort_unstable_by(|a, b| b.cmp(a));
        orbits.entry(key).or_insert_with(|| c.clone());
    }
    let mut out = MultiPoly::zero(Vars::kernel(k));
    for (part, c) in orbits {
        out += &orbit_sum(&part, k).scale(&c);
    }
    out
}

/// Drop the last variable (which must not occur) down to `k-1` variables.
pub fn restrict_last(p: &MultiPoly) -> MultiPoly {
    let k = p.vars().len();
    let fixed = p.set_var_zero(k - 1);
    let mut out = MultiPoly::zero(Vars::kernel(k - 1));
    for (m, c) in fixed.terms() {
        out.add_term(crate::poly::Mono(m.0[..k - 1].to_vec()), c.clone());
    }
    out
}

/// The formal `Mbar_{0,2}` pairing `((1-x1 psi)(1-x2 psi))^{-1} = 1/(x1+x2)`,
/// consumed only inside contraction rules where it cancels exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalReciprocal {
    denom: MultiPoly,
}

pub fn m02_formal_pairing(x1: &MultiPoly, x2: &MultiPoly) -> Result<FormalReciprocal> {
    let denom = x1 + x2;
    if denom.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(FormalReciprocal { denom })
}

impl FormalReciprocal {
    pub fn denominator(&self) -> &MultiPoly {
        &self.denom
    }

    /// Multiply a polynomial by the formal reciprocal; the product must be
    /// an exact polynomial.
    pub fn apply(&self, p: &MultiPoly) -> Result<MultiPoly> {
        p.exact_div(&self.denom)
    }
}

type Key = (u32, u32, Vec<u32>, u32);

/// Memoized evaluator for the kernel recursion. Values are stored under the
/// canonical key (exponents sorted descending) and reindexed on lookup.
#[derive(Clone, Debug, Default)]
pub struct KernelTable {
    memo: BTreeMap<Key, MultiPoly>,
    /// When set, every freshly computed value is recomputed with a different
    /// reduction point and compared (overdetermination check).
    pub check_pivots: bool,
}

impl KernelTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn checked() -> Self {
        KernelTable { memo: BTreeMap::new(), check_pivots: true }
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Key, &MultiPoly)> {
        self.memo.iter()
    }

    pub fn absorb(&mut self, other: &KernelTable) {
        for (k, v) in &other.memo {
            if let Some(old) = self.memo.insert(k.clone(), v.clone()) {
                assert_eq!(&old, v, "conflicting kernel value for {k:?}");
            }
        }
    }

    /// Install one memo entry under its canonical key (exponents sorted
    /// descending).
    pub fn seed(&mut self, g: u32, k: u32, sorted_d: Vec<u32>, d0: u32, value: MultiPoly) {
        debug_assert!(sorted_d.windows(2).all(|w| w[0] >= w[1]));
        if let Some(old) = self.memo.insert((g, k, sorted_d, d0), value.clone()) {
            assert_eq!(old, value, "conflicting seeded kernel value");
        }
    }

    /// `K(g; k; d; d0)` as a polynomial in `x1..xk`.
    pub fn eval(
        &mut self,
        base: &KernelBase,
        g: u32,
        k: u32,
        d: &[u32],
        d0: u32,
    ) -> Result<MultiPoly> {
        assert_eq!(d.len(), k as usize);
        assert!(k >= 1);
        let vars = Vars::kernel(k as usize);
        let dim = g as i64 - 2 + k as i64;
        let total: i64 = d.iter().map(|&x| x as i64).sum::<i64>() + d0 as i64;
        if total != dim {
            return Ok(MultiPoly::zero(vars));
        }
        if d.iter().all(|&x| x == 0) {
            return base.k0(g, k).cloned();
        }
        // canonical ordering: exponents sorted descending
        let mut ord: Vec<usize> = (0..k as usize).collect();
        ord.sort_by_key(|&i| core::cmp::Reverse(d[i]));
        let dc: Vec<u32> = ord.iter().map(|&i| d[i]).collect();
        let canonical = self.eval_canonical(base, g, k, &dc, d0)?;
        // canonical slot j corresponds to original variable ord[j]
        Ok(canonical.permute_vars(&ord))
    }

    fn eval_canonical(
        &mut self,
        base: &KernelBase,
        g: u32,
        k: u32,
        dc: &[u32],
        d0: u32,
    ) -> Result<MultiPoly> {
        let key = (g, k, dc.to_vec(), d0);
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let val = self.reduce_at(base, g, k, dc, d0, 0)?;
        if self.check_pivots {
            if let Some(alt) = (1..k as usize).rev().find(|&i| dc[i] > 0) {
                let other = self.reduce_at(base, g, k, dc, d0, alt)?;
                assert_eq!(
                    val, other,
                    "kernel overdetermination check failed at (g={g}, k={k}, d={dc:?}, d0={d0})"
                );
            }
        }
        self.memo.insert(key, val.clone());
        Ok(val)
    }

    /// One step of the splitting recursion, reducing at point `pivot`.
    fn reduce_at(
        &mut self,
        base: &KernelBase,
        g: u32,
        k: u32,
        dc: &[u32],
        d0: u32,
        pivot: usize,
    ) -> Result<MultiPoly> {
        debug_assert!(dc[pivot] >= 1);
        let vars = Vars::kernel(k as usize);
        let sum_x = MultiPoly::var_sum(vars, 0..k as usize);

        let mut reduced = dc.to_vec();
        reduced[pivot] -= 1;
        let mut bracket = -&(&sum_x * &self.eval(base, g, k, &reduced, d0 + 1)?);

        for g2 in 0..=g {
            let g1 = g - g2;
            for mask in 1u32..(1 << k) {
                if mask & (1 << pivot) == 0 {
                    continue;
                }
                let inside: Vec<usize> =
                    (0..k as usize).filter(|&i| mask & (1 << i) != 0).collect();
                let outside: Vec<usize> =
                    (0..k as usize).filter(|&i| mask & (1 << i) == 0).collect();
                // unstable pieces are dropped
                if g2 == 0 && inside.len() == 1 {
                    continue;
                }
                if g1 == 0 && outside.is_empty() {
                    continue;
                }
                let x_inside = MultiPoly::var_sum(vars, inside.iter().copied());

                // component carrying the negative point: outside points plus
                // the node of weight x_I
                let k1 = outside.len() + 1;
                let mut e1: Vec<u32> = outside.iter().map(|&i| dc[i]).collect();
                e1.push(0);
                let v1 = self.eval(base, g1, k1 as u32, &e1, d0)?;
                if v1.is_zero() {
                    continue;
                }
                let mut forms1: Vec<MultiPoly> =
                    outside.iter().map(|&i| MultiPoly::var(vars, i)).collect();
                forms1.push(x_inside.clone());
                let v1 = v1.substitute(&forms1, vars);

                // component glued at the node of weight -x_I
                let e2: Vec<u32> = inside
                    .iter()
                    .map(|&i| if i == pivot { dc[i] - 1 } else { dc[i] })
                    .collect();
                let v2 = self.eval(base, g2, inside.len() as u32, &e2, 0)?;
                if v2.is_zero() {
                    continue;
                }
                let forms2: Vec<MultiPoly> =
                    inside.iter().map(|&i| MultiPoly::var(vars, i)).collect();
                let v2 = v2.substitute(&forms2, vars);

                bracket += &(&(&x_inside * &v1) * &v2);
            }
        }
        bracket.exact_div_var(pivot)
    }

    /// Dilaton consistency: `K(g; k; (0,..,0,1); g-3+k)|_{x_k=0}` must equal
    /// `(2g-2+k) K0(g,k-1)`.
    pub fn check_dilaton(&mut self, base: &KernelBase, g: u32, k: u32) -> Result<()> {
        assert!(k >= 2);
        let d0 = g as i64 - 3 + k as i64;
        if d0 < 0 {
            return Ok(());
        }
        let mut d = vec![0u32; k as usize];
        d[k as usize - 1] = 1;
        let v = self.eval(base, g, k, &d, d0 as u32)?;
        let restricted = restrict_last(&v);
        let expect = base.k0(g, k - 1)?.scale(&rat(2 * g as i64 - 2 + k as i64, 1));
        if restricted != expect {
            return Err(Error::InconsistentCalibration(alloc::format!(
                "dilaton specialization fails at (g={g}, k={k})"
            )));
        }
        Ok(())
    }

    /// String consistency for a general kernel value: specializing the last
    /// weight to zero (its exponent being zero) equals the sum over ways to
    /// decrement one positive exponent on `k-1` points.
    pub fn check_string(
        &mut self,
        base: &KernelBase,
        g: u32,
        k: u32,
        d: &[u32],
        d0: u32,
    ) -> Result<()> {
        assert!(k >= 2);
        assert_eq!(d[k as usize - 1], 0);
        if 2 * g as i64 - 2 + k as i64 <= 0 {
            // the reduced space is unstable; nothing to compare
            return Ok(());
        }
        let v = self.eval(base, g, k, d, d0)?;
        let lhs = restrict_last(&v);
        let shrunk = &d[..k as usize - 1];
        let mut rhs = MultiPoly::zero(Vars::kernel(k as usize - 1));
        for j in 0..shrunk.len() {
            if shrunk[j] == 0 {
                continue;
            }
            let mut e = shrunk.to_vec();
            e[j] -= 1;
            rhs += &self.eval(base, g, k - 1, &e, d0)?;
        }
        if d0 >= 1 {
            rhs += &self.eval(base, g, k - 1, shrunk, d0 - 1)?;
        }
        if lhs != rhs {
            return Err(Error::InconsistentCalibration(alloc::format!(
                "string specialization fails at (g={g}, k={k}, d={d:?}, d0={d0})"
            )));
        }
        Ok(())
    }
}

/// Assemble and fully validate a base table, including the dilaton checks
/// that exercise the recursion itself.
pub fn calibrate(max_g: u32, max_k: u32, free: &[FreeConstant]) -> Result<KernelBase> {
    let base = KernelBase::assemble(max_g, max_k, free)?;
    let mut table = KernelTable::new();
    for g in 1..=max_g {
        for k in 2..=max_k {
            table.check_dilaton(&base, g, k)?;
        }
    }
    Ok(base)
}
