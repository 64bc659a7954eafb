//! Reduction of decorated tautological test classes to frozen-psi pairings.
//!
//! A test class is a boundary pushforward of psi/kappa decorations along a
//! tree-type graph with at most one node. The engine rewrites the pairing
//! request against `Xi^m_{g,n}` using four rules:
//!
//! - a non-separating node pulls back to `Xi^{m+2}_{g-1,n}`;
//! - a separating node with frozen legs on both sides splits into a product
//!   of two Xi pairings;
//! - a separating node with all frozen legs on one side splits into a
//!   Xi x Xi product plus a Xi x (lambda DR kernel) term with the node
//!   weight `a_I`;
//! - kappa classes trade for new regular legs carrying `psi^{c+1}` whose
//!   weights are set to zero after evaluation;
//! - `a_i psi_i` at a regular leg rewrites into a frozen-leg pairing, a
//!   degree-shifted pairing, and kernel splittings, followed by exact
//!   division by the leg weight.
//!
//! Requests with no regular-leg psi powers are evaluated directly by the
//! weighted Xi assembly; the `Direct` strategy short-circuits the psi rule
//! entirely and serves as an independent route for confluence tests.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::assembly::{pair_xi_weighted, Ctx, LegSpec};
use crate::poly::{Mono, MultiPoly, Vars};
use crate::{Error, Result};

/// Order in which regular-leg psi powers are stripped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// No stripping: evaluate psi powers inside the weighted assembly.
    Direct,
    /// Strip at the first leg carrying a positive exponent.
    FirstLeg,
    /// Strip at the last leg carrying a positive exponent.
    LastLeg,
}

/// The Xi class a test class is paired against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XiTarget {
    pub g: u32,
    pub n: u32,
    pub m: u32,
}

/// Graph part of a test class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitSpec {
    Trivial,
    NonSeparating,
    /// Separating node; component 1 carries `legs1` and `frozen1` (1-based
    /// labels into the regular/frozen ranges).
    Separating { g1: u32, legs1: Vec<u32>, frozen1: Vec<u32> },
}

/// A decorated test class on `Mbar_{g,n+m}`: an optional single node split,
/// psi exponents everywhere, and kappa multi-indices per component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestClass {
    pub split: SplitSpec,
    pub psi_legs: Vec<u32>,
    pub psi_frozen: Vec<u32>,
    /// psi exponents at the node branches (component-1 side, component-2
    /// side); for a non-separating node, at the two new points.
    pub psi_nodes: (u32, u32),
    pub kappa1: Vec<u32>,
    pub kappa2: Vec<u32>,
}

impl TestClass {
    pub fn monomial(psi_legs: Vec<u32>, psi_frozen: Vec<u32>) -> Self {
        TestClass {
            split: SplitSpec::Trivial,
            psi_legs,
            psi_frozen,
            psi_nodes: (0, 0),
            kappa1: Vec::new(),
            kappa2: Vec::new(),
        }
    }
}

/// Rule-application record; rendered as an s-expression in reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInstance {
    pub name: &'static str,
    pub parent: ReqKey,
    pub children: Vec<ReqKey>,
}

/// `(g, n, m)` of a request and the dimension-forced degree `d` of the Xi
/// component it pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReqKey {
    pub g: u32,
    pub n: u32,
    pub m: u32,
    pub d: i64,
}

impl ReqKey {
    pub fn vanishing_claimed(&self) -> bool {
        self.d >= 2 * self.g as i64 - 1 + self.m as i64
    }
}

impl RuleInstance {
    pub fn sexpr(&self) -> String {
        let mut s = format!(
            "({} (parent g={} n={} m={} d={})",
            self.name, self.parent.g, self.parent.n, self.parent.m, self.parent.d
        );
        for c in &self.children {
            s += &format!(" (child g={} n={} m={} d={})", c.g, c.n, c.m, c.d);
        }
        s += ")";
        s
    }

    /// The degree-range statements attached to each rule: when the parent
    /// degree is in the vanishing range, the children listed as claimed
    /// vanishing must be in their own range.
    pub fn ranges_ok(&self) -> bool {
        if !self.parent.vanishing_claimed() {
            return true;
        }
        match self.name {
            "rho1" | "kappa" => self.children.iter().all(|c| c.vanishing_claimed()),
            // at least one factor must vanish
            "rho2" | "rho3-xi" => self.children.iter().any(|c| c.vanishing_claimed()),
            "rho3-dr" | "psi-strip" => self.children.iter().all(|c| c.vanishing_claimed()),
            _ => true,
        }
    }
}

/// Collects rule traces during an evaluation.
#[derive(Default)]
pub struct Tracer {
    pub lines: Vec<String>,
}

impl Tracer {
    pub fn new() -> Self {
        Self::default()
    }

    fn record(&mut self, rule: &RuleInstance) {
        assert!(rule.ranges_ok(), "degree-range assertion failed for {}", rule.sexpr());
        self.lines.push(rule.sexpr());
    }
}

/// Rule descriptor for the non-separating pullback.
pub fn pullback_nonseparating(g: u32, n: u32, m: u32, d: i64) -> Result<RuleInstance> {
    if g == 0 {
        return Err(Error::InvalidSplit(String::from("non-separating split needs g >= 1")));
    }
    Ok(RuleInstance {
        name: "rho1",
        parent: ReqKey { g, n, m, d },
        children: vec![ReqKey { g: g - 1, n, m: m + 2, d }],
    })
}

/// Rule descriptor for a separating split with frozen legs on both sides.
pub fn pullback_separating_mixed(
    g1: u32,
    g2: u32,
    n1: u32,
    n2: u32,
    m1: u32,
    m2: u32,
    d: i64,
    d1: i64,
) -> Result<RuleInstance> {
    if m1 == 0 || m2 == 0 {
        return Err(Error::InvalidSplit(String::from("both sides need a frozen leg")));
    }
    Ok(RuleInstance {
        name: "rho2",
        parent: ReqKey { g: g1 + g2, n: n1 + n2, m: m1 + m2, d },
        children: vec![
            ReqKey { g: g1, n: n1, m: m1 + 1, d: d1 },
            ReqKey { g: g2, n: n2, m: m2 + 1, d: d - d1 },
        ],
    })
}

/// Rule descriptor for a separating split with all frozen legs on one side;
/// the second summand's kernel factor is not a Xi request and is omitted
/// from the children list, its degree being absorbed as `2 g2`.
pub fn pullback_separating_onesided(
    g1: u32,
    g2: u32,
    n1: u32,
    n2: u32,
    m: u32,
    d: i64,
    d1: i64,
) -> Result<RuleInstance> {
    if m == 0 {
        return Err(Error::InvalidSplit(String::from("target carries no frozen leg")));
    }
    Ok(RuleInstance {
        name: "rho3-xi",
        parent: ReqKey { g: g1 + g2, n: n1 + n2, m, d },
        children: vec![
            ReqKey { g: g1, n: n1, m: m + 1, d: d1 },
            ReqKey { g: g2, n: n2, m: 1, d: d - d1 },
        ],
    })
}

/// Rule descriptor for the kappa trade.
pub fn kappa_reduce(g: u32, n: u32, m: u32, kappa: &[u32], d: i64) -> RuleInstance {
    let l = kappa.len() as u32;
    RuleInstance {
        name: "kappa",
        parent: ReqKey { g, n, m, d },
        children: vec![ReqKey { g, n: n + l, m, d }],
    }
}

/// Rule descriptor for stripping `a_i psi_i`.
pub fn regular_psi_reduce(g: u32, n: u32, m: u32, i: u32, d: i64) -> Result<RuleInstance> {
    if i < 1 || i > n {
        return Err(Error::InvalidSplit(String::from("leg index out of range")));
    }
    Ok(RuleInstance {
        name: "psi-strip",
        parent: ReqKey { g, n, m, d },
        children: vec![
            ReqKey { g, n: n - 1, m: m + 1, d: d + 1 },
            ReqKey { g, n, m, d: d + 1 },
        ],
    })
}

struct SpaceReq {
    g: u32,
    legs: Vec<LegSpec>,
    frozen: Vec<u32>,
}

impl SpaceReq {
    /// Dimension-forced degree of the Xi component this request pairs.
    fn forced_degree(&self) -> i64 {
        let test: i64 = self.legs.iter().map(|l| l.psi as i64).sum::<i64>()
            + self.frozen.iter().map(|&e| e as i64).sum::<i64>();
        3 * self.g as i64 - 3 + self.legs.len() as i64 + self.frozen.len() as i64 - test
    }

    fn key(&self) -> ReqKey {
        ReqKey {
            g: self.g,
            n: self.legs.len() as u32,
            m: self.frozen.len() as u32,
            d: self.forced_degree(),
        }
    }
}

/// Evaluate `<alpha, Xi^m_{g,n}>` for a decorated test class, returning a
/// polynomial in `a1..an`. All rule orders produce the same value; the
/// strategy picks one.
pub fn eval_test_class(
    ctx: &mut Ctx<'_>,
    target: XiTarget,
    alpha: &TestClass,
    strategy: Strategy,
    tracer: &mut Tracer,
) -> Result<MultiPoly> {
    let XiTarget { g, n, m } = target;
    if n < 1 || m < 1 || 2 * g as i64 - 2 + n as i64 + m as i64 <= 0 {
        return Err(Error::UnstableTarget);
    }
    assert_eq!(alpha.psi_legs.len(), n as usize);
    assert_eq!(alpha.psi_frozen.len(), m as usize);
    let l1 = alpha.kappa1.len();
    let l2 = alpha.kappa2.len();
    let ambient = Vars::legs(n as usize + l1 + l2);
    let kap1_vars: Vec<usize> = (n as usize..n as usize + l1).collect();
    let kap2_vars: Vec<usize> = (n as usize + l1..n as usize + l1 + l2).collect();

    let kappa_legs = |kappa: &[u32], fresh: &[usize]| -> Vec<LegSpec> {
        kappa
            .iter()
            .zip(fresh)
            .map(|(&c, &v)| LegSpec { weight: MultiPoly::var(ambient, v), psi: c + 1 })
            .collect()
    };

    let value = match &alpha.split {
        SplitSpec::Trivial => {
            let mut legs: Vec<LegSpec> = (0..n as usize)
                .map(|i| LegSpec { weight: MultiPoly::var(ambient, i), psi: alpha.psi_legs[i] })
                .collect();
            if !alpha.kappa1.is_empty() {
                let d = req_degree(g, &legs, &alpha.psi_frozen, &alpha.kappa1);
                tracer.record(&kappa_reduce(g, n, m, &alpha.kappa1, d));
                legs.extend(kappa_legs(&alpha.kappa1, &kap1_vars));
            }
            let req = SpaceReq { g, legs, frozen: alpha.psi_frozen.clone() };
            eval_space(ctx, &req, strategy, tracer, ambient)?
        }
        SplitSpec::NonSeparating => {
            if g == 0 {
                return Err(Error::InvalidSplit(String::from("non-separating split needs g >= 1")));
            }
            let mut legs: Vec<LegSpec> = (0..n as usize)
                .map(|i| LegSpec { weight: MultiPoly::var(ambient, i), psi: alpha.psi_legs[i] })
                .collect();
            let mut frozen = alpha.psi_frozen.clone();
            frozen.push(alpha.psi_nodes.0);
            frozen.push(alpha.psi_nodes.1);
            let req = SpaceReq { g: g - 1, legs: legs.clone(), frozen: frozen.clone() };
            tracer.record(&pullback_nonseparating(g, n, m, req.forced_degree())?);
            if !alpha.kappa1.is_empty() {
                let d = req_degree(g - 1, &legs, &frozen, &alpha.kappa1);
                tracer.record(&kappa_reduce(g - 1, n, m + 2, &alpha.kappa1, d));
                legs.extend(kappa_legs(&alpha.kappa1, &kap1_vars));
            }
            let req = SpaceReq { g: g - 1, legs, frozen };
            eval_space(ctx, &req, strategy, tracer, ambient)?
        }
        SplitSpec::Separating { g1, legs1, frozen1 } => eval_separating(
            ctx,
            target,
            alpha,
            *g1,
            legs1,
            frozen1,
            &kappa_legs(&alpha.kappa1, &kap1_vars),
            &kappa_legs(&alpha.kappa2, &kap2_vars),
            &kap2_vars,
            strategy,
            tracer,
            ambient,
        )?,
    };

    // kappa legs carry zero weights in the final polynomial
    let mut out = value;
    for &v in kap1_vars.iter().chain(&kap2_vars) {
        out = out.set_var_zero(v);
    }
    Ok(project(&out, n as usize))
}

fn req_degree(g: u32, legs: &[LegSpec], frozen: &[u32], kappa: &[u32]) -> i64 {
    let test: i64 = legs.iter().map(|l| l.psi as i64).sum::<i64>()
        + frozen.iter().map(|&e| e as i64).sum::<i64>()
        + kappa.iter().map(|&c| c as i64).sum::<i64>();
    3 * g as i64 - 3 + legs.len() as i64 + frozen.len() as i64 - test
}

#[allow(clippy::too_many_arguments)]
fn eval_separating(
    ctx: &mut Ctx<'_>,
    target: XiTarget,
    alpha: &TestClass,
    g1: u32,
    legs1: &[u32],
    frozen1: &[u32],
    kap1: &[LegSpec],
    kap2: &[LegSpec],
    kap2_vars: &[usize],
    strategy: Strategy,
    tracer: &mut Tracer,
    ambient: Vars,
) -> Result<MultiPoly> {
    let XiTarget { g, n, m } = target;
    if g1 > g {
        return Err(Error::InvalidSplit(String::from("component genus exceeds total")));
    }
    let g2 = g - g1;
    let legs2: Vec<u32> = (1..=n).filter(|l| !legs1.contains(l)).collect();
    let frozen2: Vec<u32> = (1..=m).filter(|f| !frozen1.contains(f)).collect();
    let (m1, m2) = (frozen1.len() as u32, frozen2.len() as u32);
    let (n1, n2) = (legs1.len() as u32, legs2.len() as u32);
    // both components must be stable with the node counted
    if 2 * g1 as i64 - 1 + n1 as i64 + m1 as i64 <= 0 || 2 * g2 as i64 - 1 + n2 as i64 + m2 as i64 <= 0
    {
        return Err(Error::InvalidSplit(String::from("unstable component")));
    }

    let leg_spec = |l: u32| LegSpec {
        weight: MultiPoly::var(ambient, l as usize - 1),
        psi: alpha.psi_legs[l as usize - 1],
    };
    let frozen_exps = |labels: &[u32]| -> Vec<u32> {
        labels.iter().map(|&f| alpha.psi_frozen[f as usize - 1]).collect()
    };

    if m1 >= 1 && m2 >= 1 {
        // rho2: a product of two Xi pairings, the node a new frozen leg on
        // each side
        let mut c1_legs: Vec<LegSpec> = legs1.iter().map(|&l| leg_spec(l)).collect();
        c1_legs.extend_from_slice(kap1);
        let mut c1_frozen = frozen_exps(frozen1);
        c1_frozen.push(alpha.psi_nodes.0);
        let req1 = SpaceReq { g: g1, legs: c1_legs, frozen: c1_frozen };

        let mut c2_legs: Vec<LegSpec> = legs2.iter().map(|&l| leg_spec(l)).collect();
        c2_legs.extend_from_slice(kap2);
        let mut c2_frozen = frozen_exps(&frozen2);
        c2_frozen.push(alpha.psi_nodes.1);
        let req2 = SpaceReq { g: g2, legs: c2_legs, frozen: c2_frozen };

        let parent_d = req1.forced_degree() + req2.forced_degree();
        tracer.record(&pullback_separating_mixed(
            g1,
            g2,
            n1,
            n2,
            m1,
            m2,
            parent_d,
            req1.forced_degree(),
        )?);
        let v1 = eval_space(ctx, &req1, strategy, tracer, ambient)?;
        if v1.is_zero() {
            return Ok(MultiPoly::zero(ambient));
        }
        let v2 = eval_space(ctx, &req2, strategy, tracer, ambient)?;
        return Ok(&v1 * &v2);
    }

    // rho3: all frozen legs on one side; orient so component 1 carries them
    let (f_all, xi_legs, dr_legs, g_xi, g_dr, node_xi, node_dr) = if m2 == 0 {
        (frozen1, legs1.to_vec(), legs2, g1, g2, alpha.psi_nodes.0, alpha.psi_nodes.1)
    } else {
        (frozen2.as_slice(), legs2, legs1.to_vec(), g2, g1, alpha.psi_nodes.1, alpha.psi_nodes.0)
    };
    let n_xi = xi_legs.len() as u32;
    let n_dr = dr_legs.len() as u32;
    let (kap_xi, kap_dr) = if m2 == 0 { (kap1, kap2) } else { (kap2, kap1) };

    // first summand: Xi^{m+1} x Xi^1
    let mut s1_legs: Vec<LegSpec> = xi_legs.iter().map(|&l| leg_spec(l)).collect();
    s1_legs.extend_from_slice(kap_xi);
    let mut s1_frozen = frozen_exps(f_all);
    s1_frozen.push(node_xi);
    let req1 = SpaceReq { g: g_xi, legs: s1_legs, frozen: s1_frozen };

    let mut s2_legs: Vec<LegSpec> = dr_legs.iter().map(|&l| leg_spec(l)).collect();
    s2_legs.extend_from_slice(kap_dr);
    let req2 = SpaceReq { g: g_dr, legs: s2_legs, frozen: vec![node_dr] };

    let parent_d = req1.forced_degree() + req2.forced_degree();
    tracer.record(&pullback_separating_onesided(
        g_xi,
        g_dr,
        n_xi,
        n_dr,
        m,
        parent_d,
        req1.forced_degree(),
    )?);
    let mut total = {
        let v1 = eval_space(ctx, &req1, strategy, tracer, ambient)?;
        if v1.is_zero() {
            MultiPoly::zero(ambient)
        } else {
            let v2 = eval_space(ctx, &req2, strategy, tracer, ambient)?;
            &v1 * &v2
        }
    };

    // second summand: relabeled Xi^m with the node as a regular leg of
    // weight a_I, times the lambda DR kernel on the other side
    let node_weight = MultiPoly::var_sum(ambient, dr_legs.iter().map(|&l| l as usize - 1));
    let mut s3_legs: Vec<LegSpec> = xi_legs.iter().map(|&l| leg_spec(l)).collect();
    s3_legs.push(LegSpec { weight: node_weight.clone(), psi: node_xi });
    s3_legs.extend_from_slice(kap_xi);
    let req3 = SpaceReq { g: g_xi, legs: s3_legs, frozen: frozen_exps(f_all) };
    {
        let parent = ReqKey { g, n, m, d: parent_d };
        let child = req3.key();
        let rule = RuleInstance { name: "rho3-dr", parent, children: vec![child] };
        // range bookkeeping: d - 2 g_dr >= 2 g_xi - 1 + m once the parent is in range
        if parent.vanishing_claimed() {
            assert!(parent_d - 2 * g_dr as i64 >= 2 * g_xi as i64 - 1 + m as i64);
        }
        tracer.record(&rule);
    }
    let xi_val = eval_space(ctx, &req3, strategy, tracer, ambient)?;
    if !xi_val.is_zero() {
        let mut exps: Vec<u32> = dr_legs.iter().map(|&l| alpha.psi_legs[l as usize - 1]).collect();
        let mut forms: Vec<MultiPoly> = dr_legs
            .iter()
            .map(|&l| MultiPoly::var(ambient, l as usize - 1))
            .collect();
        for k in kap_dr {
            exps.push(k.psi);
            forms.push(k.weight.clone());
        }
        let _ = kap2_vars;
        let kern = dr_factor(ctx, g_dr, &exps, node_dr, &forms, ambient)?;
        total += &(&xi_val * &kern);
    }
    Ok(total)
}

/// `lambda_{g} DR_g(weights, -sum)` paired with psi exponents at its points
/// and `d0` at the node, specialized to the given weight forms.
fn dr_factor(
    ctx: &mut Ctx<'_>,
    g: u32,
    exps: &[u32],
    d0: u32,
    forms: &[MultiPoly],
    ambient: Vars,
) -> Result<MultiPoly> {
    let k = exps.len() as u32;
    let kern = ctx.kernel.eval(ctx.base, g, k, exps, d0)?;
    if kern.is_zero() {
        return Ok(MultiPoly::zero(ambient));
    }
    Ok(kern.substitute(forms, ambient))
}

fn eval_space(
    ctx: &mut Ctx<'_>,
    req: &SpaceReq,
    strategy: Strategy,
    tracer: &mut Tracer,
    ambient: Vars,
) -> Result<MultiPoly> {
    if req.legs.is_empty() {
        // Xi^m_{g,0} is set to zero (defined for 2g-2+m > 0)
        debug_assert!(2 * req.g as i64 - 2 + req.frozen.len() as i64 > 0);
        return Ok(MultiPoly::zero(ambient));
    }
    if req.forced_degree() < 0 {
        // the test degree exceeds the dimension; the pairing vanishes and
        // the psi rule does not apply
        return Ok(MultiPoly::zero(ambient));
    }
    let pick = match strategy {
        Strategy::Direct => None,
        Strategy::FirstLeg => req.legs.iter().position(|l| l.psi > 0),
        Strategy::LastLeg => req.legs.iter().rposition(|l| l.psi > 0),
    };
    let idx = match pick {
        None => {
            return pair_xi_weighted(
                ctx,
                req.g,
                &req.legs,
                req.frozen.len() as u32,
                &req.frozen,
                ambient,
            );
        }
        Some(i) => i,
    };

    let g = req.g;
    let n = req.legs.len() as u32;
    let m = req.frozen.len() as u32;
    let d = req.forced_degree();
    tracer.record(&regular_psi_reduce(g, n, m, idx as u32 + 1, d)?);
    let w_i = req.legs[idx].weight.clone();

    // sigma term: the leg becomes the last frozen point with one psi less
    let mut t1_legs = req.legs.clone();
    let moved = t1_legs.remove(idx);
    let mut t1_frozen = req.frozen.clone();
    t1_frozen.push(moved.psi - 1);
    let t1 = eval_space(ctx, &SpaceReq { g, legs: t1_legs, frozen: t1_frozen }, strategy, tracer, ambient)?;

    // same target with one psi less
    let mut t2_legs = req.legs.clone();
    t2_legs[idx].psi -= 1;
    let t2 = eval_space(ctx, &SpaceReq { g, legs: t2_legs, frozen: req.frozen.clone() }, strategy, tracer, ambient)?;

    let mut bracket = &t1 - &t2;

    // boundary contraction: the split with every leg on the kernel side
    // leaves a formal (0,2)-component carrying the single frozen leg and
    // the node; contracting it cancels the a_I prefactor against the
    // reciprocal weight and passes the frozen psi power to the kernel's
    // negative point, contributing -K(g, n, d - e_i, b_1)
    if m == 1 {
        let exps: Vec<u32> = req
            .legs
            .iter()
            .enumerate()
            .map(|(i, l)| if i == idx { l.psi - 1 } else { l.psi })
            .collect();
        let forms: Vec<MultiPoly> = req.legs.iter().map(|l| l.weight.clone()).collect();
        let kv = dr_factor(ctx, g, &exps, req.frozen[0], &forms, ambient)?;
        bracket -= &kv;
    }

    // kernel splittings: i inside I, both pieces stable
    let nl = req.legs.len();
    for g2 in 0..=g {
        let g1 = g - g2;
        for mask in 1u64..(1 << nl) {
            if mask & (1 << idx) == 0 {
                continue;
            }
            let inside: Vec<usize> = (0..nl).filter(|&i| mask & (1 << i) != 0).collect();
            let outside: Vec<usize> = (0..nl).filter(|&i| mask & (1 << i) == 0).collect();
            let n1 = outside.len() as i64;
            let n2 = inside.len() as i64;
            if 2 * g1 as i64 - 1 + n1 + m as i64 <= 0 || 2 * g2 as i64 - 1 + n2 <= 0 {
                continue;
            }
            let mut w_sum = MultiPoly::zero(ambient);
            for &i in &inside {
                w_sum += &req.legs[i].weight;
            }
            // Xi factor: outside legs plus the node as a psi-free leg
            let mut xlegs: Vec<LegSpec> = outside.iter().map(|&i| req.legs[i].clone()).collect();
            xlegs.push(LegSpec { weight: w_sum.clone(), psi: 0 });
            let xreq = SpaceReq { g: g1, legs: xlegs, frozen: req.frozen.clone() };
            let xv = eval_space(ctx, &xreq, strategy, tracer, ambient)?;
            if xv.is_zero() {
                continue;
            }
            // kernel factor with the pivot exponent decremented
            let exps: Vec<u32> = inside
                .iter()
                .map(|&i| if i == idx { req.legs[i].psi - 1 } else { req.legs[i].psi })
                .collect();
            let forms: Vec<MultiPoly> = inside.iter().map(|&i| req.legs[i].weight.clone()).collect();
            let kv = dr_factor(ctx, g2, &exps, 0, &forms, ambient)?;
            if kv.is_zero() {
                continue;
            }
            bracket += &(&(&w_sum * &xv) * &kv);
        }
    }
    bracket.exact_div(&w_i)
}

/// Drop trailing variables (which must not occur) down to `n` legs.
fn project(p: &MultiPoly, n: usize) -> MultiPoly {
    let target = Vars::legs(n);
    let mut out = MultiPoly::zero(target);
    for (m, c) in p.terms() {
        debug_assert!(m.0[n..].iter().all(|&e| e == 0));
        out.add_term(Mono(m.0[..n].to_vec()), c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::pair_xi;
    use crate::kernel::{builtin_free_constants, calibrate, KernelBase, KernelTable};
    use crate::wk::WkTable;

    struct Owned {
        wk: WkTable,
        kernel: KernelTable,
        base: KernelBase,
    }

    impl Owned {
        fn new() -> Self {
            Owned {
                wk: WkTable::new(),
                kernel: KernelTable::new(),
                base: calibrate(2, 6, &builtin_free_constants()).unwrap(),
            }
        }
        fn ctx(&mut self) -> Ctx<'_> {
            Ctx { wk: &mut self.wk, kernel: &mut self.kernel, base: &self.base }
        }
    }

    fn eval(o: &mut Owned, t: XiTarget, a: &TestClass, s: Strategy) -> MultiPoly {
        let mut tr = Tracer::new();
        eval_test_class(&mut o.ctx(), t, a, s, &mut tr).unwrap()
    }

    #[test]
    fn trivial_monomial_matches_pair_xi() {
        let mut o = Owned::new();
        let t = XiTarget { g: 1, n: 2, m: 1 };
        let a = TestClass::monomial(vec![0, 0], vec![1]);
        let direct = eval(&mut o, t, &a, Strategy::Direct);
        let expect = pair_xi(&mut o.ctx(), 1, 2, 1, &[1]).unwrap().poly;
        assert_eq!(direct, expect);
    }

    #[test]
    fn psi_strip_agrees_with_direct() {
        let mut o = Owned::new();
        for (g, n, m, legs, frozen) in [
            // trivially zero by dimension
            (0u32, 2u32, 1u32, vec![1u32, 0], vec![0u32]),
            // honest nonzero-range instances
            (0, 3, 1, vec![1, 0, 0], vec![0]),
            (0, 4, 1, vec![1, 1, 0, 0], vec![0]),
            (1, 1, 1, vec![1], vec![0]),
            (1, 2, 1, vec![2, 0], vec![0]),
            (1, 2, 1, vec![1, 0], vec![1]),
            (1, 2, 2, vec![1, 1], vec![0, 0]),
            (2, 1, 1, vec![2], vec![0]),
            (2, 1, 1, vec![1], vec![1]),
            (2, 2, 1, vec![1, 0], vec![0]),
        ] {
            let t = XiTarget { g, n, m };
            let a = TestClass::monomial(legs, frozen);
            let d = eval(&mut o, t, &a, Strategy::Direct);
            let f = eval(&mut o, t, &a, Strategy::FirstLeg);
            let l = eval(&mut o, t, &a, Strategy::LastLeg);
            assert_eq!(d, f, "first-leg strip disagrees at {t:?} {a:?}");
            assert_eq!(d, l, "last-leg strip disagrees at {t:?} {a:?}");
        }
    }

    #[test]
    fn kappa_zero_is_a_dilaton_like_identity() {
        // kappa_0 = (2g - 2 + n + m) on Mbar_{g,n+m}: trading it for a leg
        // with psi^1 and zero weight must match the scaled plain pairing
        let mut o = Owned::new();
        let t = XiTarget { g: 1, n: 2, m: 1 };
        let mut a = TestClass::monomial(vec![0, 0], vec![0]);
        a.kappa1 = vec![0];
        let traded = eval(&mut o, t, &a, Strategy::FirstLeg);
        let plain = pair_xi(&mut o.ctx(), 1, 2, 1, &[0]).unwrap().poly;
        let scale = crate::poly::rat_int(2 * 1 - 2 + 2 + 1);
        assert_eq!(traded, plain.scale(&scale));
    }

    #[test]
    fn rule_descriptor_arithmetic() {
        // rho1 bookkeeping: d >= 2g-1+m implies d >= 2(g-1)-1+(m+2)
        let r = pullback_nonseparating(1, 1, 1, 2).unwrap();
        assert!(r.parent.vanishing_claimed());
        assert!(r.ranges_ok());
        assert_eq!(pullback_nonseparating(0, 1, 1, 0), Err(Error::InvalidSplit(String::from("non-separating split needs g >= 1"))));

        // rho2 pigeonhole
        let r = pullback_separating_mixed(0, 0, 1, 1, 1, 1, 2, 1).unwrap();
        assert!(r.ranges_ok());
        assert!(pullback_separating_mixed(0, 0, 1, 1, 0, 2, 2, 1).is_err());

        // psi-strip shifts
        let r = regular_psi_reduce(1, 2, 1, 1, 2).unwrap();
        assert!(r.ranges_ok());
        assert!(regular_psi_reduce(1, 2, 1, 3, 2).is_err());
    }

    #[test]
    fn traces_are_sexprs() {
        let mut o = Owned::new();
        let t = XiTarget { g: 0, n: 3, m: 1 };
        let a = TestClass::monomial(vec![1, 0, 0], vec![0]);
        let mut tr = Tracer::new();
        let _ = eval_test_class(&mut o.ctx(), t, &a, Strategy::FirstLeg, &mut tr).unwrap();
        assert!(!tr.lines.is_empty());
        assert!(tr.lines[0].starts_with("(psi-strip"));
    }
}
