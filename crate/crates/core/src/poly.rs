//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! Polynomials live in a fixed variable universe: the leg weights `a1..an`
//! or the generic kernel weights `x1..xk`. Terms are kept in a `BTreeMap`
//! under graded-lex monomial order, so iteration (and therefore the canonical
//! text rendering used in cache files) is deterministic. Coefficients are
//! always reduced rationals with positive denominator; zero coefficients are
//! never stored.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Reduced arbitrary-precision rational; denominator always positive.
pub type Rat = BigRational;

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d` as a reduced rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parse the canonical `p/q` (or plain integer) form.
pub fn parse_rat(s: &str) -> Result<Rat> {
    Rat::from_str(s.trim()).map_err(|_| Error::Parse(alloc::format!("bad rational {s}")))
}

/// Variable universe: an ordered list of symbols, identified positionally.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Vars {
    kind: VarKind,
    len: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
enum VarKind {
    /// Leg weights `a1..an`.
    Legs,
    /// Generic kernel weights `x1..xk`.
    Kernel,
}

impl Vars {
    pub fn legs(n: usize) -> Self {
        Vars { kind: VarKind::Legs, len: n }
    }

    pub fn kernel(k: usize) -> Self {
        Vars { kind: VarKind::Kernel, len: k }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn prefix(&self) -> char {
        match self.kind {
            VarKind::Legs => 'a',
            VarKind::Kernel => 'x',
        }
    }

    /// Symbol name of variable `i` (0-based): `a1`, `a2`, ... or `x1`, ...
    pub fn name(&self, i: usize) -> String {
        let mut s = String::new();
        s.push(self.prefix());
        s += &(i + 1).to_string();
        s
    }

    fn index_of(&self, token: &str) -> Option<usize> {
        let mut chars = token.chars();
        if chars.next()? != self.prefix() {
            return None;
        }
        let idx: usize = chars.as_str().parse().ok()?;
        if idx >= 1 && idx <= self.len {
            Some(idx - 1)
        } else {
            None
        }
    }
}

/// Exponent vector; length equals the universe size.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(n: usize) -> Self {
        Mono(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Mono(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

/// Graded lexicographic order: total degree first, then lexicographic.
impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Mono, Rat>,
}

impl MultiPoly {
    pub fn zero(vars: Vars) -> Self {
        MultiPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Vars, c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Mono::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: Vars) -> Self {
        Self::constant(vars, Rat::one())
    }

    pub fn var(vars: Vars, i: usize) -> Self {
        assert!(i < vars.len());
        let mut p = Self::zero(vars);
        p.terms.insert(Mono::var(vars.len(), i), Rat::one());
        p
    }

    /// Sum of the variables `vars[i]` for `i` in `idx`.
    pub fn var_sum(vars: Vars, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut p = Self::zero(vars);
        for i in idx {
            p.add_term(Mono::var(vars.len(), i), Rat::one());
        }
        p
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).max()
    }

    /// Degree if the polynomial is homogeneous (zero counts as homogeneous).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Mono::degree);
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn coeff(&self, mono: &Mono) -> Rat {
        self.terms.get(mono).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Mono::one(self.vars.len()))
    }

    /// As a constant rational, if the polynomial has no variable terms.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.is_one() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, mono: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(mono.0.len(), self.vars.len());
        match self.terms.entry(mono) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(self.vars);
        }
        let mut out = Self::zero(self.vars);
        for (m, q) in &self.terms {
            out.terms.insert(m.clone(), q * c);
        }
        out
    }

    /// Sum of the terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        let mut out = Self::zero(self.vars);
        for (m, c) in &self.terms {
            if m.degree() == d {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = Self::one(self.vars);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Exact quotient by the variable `v`; every term must contain `v`.
    pub fn exact_div_var(&self, v: usize) -> Result<MultiPoly> {
        let mut out = Self::zero(self.vars);
        for (m, c) in &self.terms {
            if m.0[v] == 0 {
                return Err(Error::NotDivisible);
            }
            let mut e = m.clone();
            e.0[v] -= 1;
            out.terms.insert(e, c.clone());
        }
        Ok(out)
    }

    /// Exact quotient by an arbitrary nonzero polynomial (single-divisor
    /// long division; errors unless the remainder is zero).
    pub fn exact_div(&self, divisor: &MultiPoly) -> Result<MultiPoly> {
        if divisor.vars != self.vars {
            return Err(Error::VarMismatch);
        }
        let (lead_m, lead_c) = match divisor.terms.iter().next_back() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::ZeroDenominator),
        };
        let mut rem = self.clone();
        let mut quot = Self::zero(self.vars);
        while let Some((m, c)) = rem.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !lead_m.divides(&m) {
                return Err(Error::NotDivisible);
            }
            let qm = m.div(&lead_m);
            let qc = c / &lead_c;
            let mut t = Self::zero(self.vars);
            t.terms.insert(qm.clone(), qc.clone());
            rem -= &(&t * divisor);
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// Substitute each variable by a linear (or arbitrary) polynomial in the
    /// target universe. `forms[i]` replaces variable `i`.
    pub fn substitute(&self, forms: &[MultiPoly], target: Vars) -> MultiPoly {
        debug_assert_eq!(forms.len(), self.vars.len());
        // cache powers of each substituted form as needed
        let mut powers: Vec<Vec<MultiPoly>> = forms
            .iter()
            .map(|f| vec![MultiPoly::one(target), f.clone()])
            .collect();
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &powers[i][1];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            out += &term;
        }
        out
    }

    /// Set variable `v` to zero.
    pub fn set_var_zero(&self, v: usize) -> MultiPoly {
        let mut out = Self::zero(self.vars);
        for (m, c) in &self.terms {
            if m.0[v] == 0 {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Reindex variables: old variable `i` becomes variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> MultiPoly {
        debug_assert_eq!(perm.len(), self.vars.len());
        let mut out = Self::zero(self.vars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; self.vars.len()];
            for (i, &x) in m.0.iter().enumerate() {
                e[perm[i]] = x;
            }
            out.terms.insert(Mono(e), c.clone());
        }
        out
    }

    /// Canonical rendering: terms in descending graded-lex order, each as
    /// `coeff*mono` (`coeff` alone for the constant term), joined by ` + `.
    pub fn render(&self) -> String {
        self.to_string()
    }

    /// Parse the canonical rendering back. Accepts an optional omitted
    /// coefficient (meaning 1) for convenience.
    pub fn parse(s: &str, vars: Vars) -> Result<MultiPoly> {
        let s = s.trim();
        let mut p = MultiPoly::zero(vars);
        if s == "0" {
            return Ok(p);
        }
        for term in s.split(" + ") {
            let mut coeff = Rat::one();
            let mut mono = Mono::one(vars.len());
            let mut saw_coeff = false;
            for tok in term.split('*') {
                let tok = tok.trim();
                if tok.is_empty() {
                    return Err(Error::Parse("empty factor".into()));
                }
                let (base, exp) = match tok.split_once('^') {
                    Some((b, e)) => {
                        let exp: u32 = e
                            .parse()
                            .map_err(|_| Error::Parse(alloc::format!("bad exponent in {tok}")))?;
                        (b, exp)
                    }
                    None => (tok, 1),
                };
                if let Some(idx) = vars.index_of(base) {
                    mono.0[idx] += exp;
                } else {
                    if saw_coeff || exp != 1 || base != tok {
                        return Err(Error::Parse(alloc::format!("bad factor {tok}")));
                    }
                    coeff = Rat::from_str(tok)
                        .map_err(|_| Error::Parse(alloc::format!("bad coefficient {tok}")))?;
                    saw_coeff = true;
                }
            }
            p.add_term(mono, coeff);
        }
        Ok(p)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "{c}*")?;
                let mut first_var = true;
                for (i, &e) in m.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if !first_var {
                        write!(f, "*")?;
                    }
                    first_var = false;
                    write!(f, "{}", self.vars.name(i))?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        debug_assert_eq!(self.vars, rhs.vars);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        debug_assert_eq!(self.vars, rhs.vars);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rat::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        debug_assert_eq!(self.vars, rhs.vars);
        let mut out = MultiPoly::zero(self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

/// Laurent polynomial in the grading variable `u` with `MultiPoly`
/// coefficients. Presentation metadata only: vanishing checks happen on the
/// homogeneous polynomial parts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentU {
    coeffs: BTreeMap<i64, MultiPoly>,
}

impl LaurentU {
    pub fn new() -> Self {
        LaurentU { coeffs: BTreeMap::new() }
    }

    pub fn add(&mut self, u_exp: i64, p: &MultiPoly) {
        if p.is_zero() {
            return;
        }
        match self.coeffs.entry(u_exp) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p.clone());
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += p;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&i64, &MultiPoly)> {
        self.coeffs.iter()
    }
}

impl Default for LaurentU {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn av(n: usize) -> Vars {
        Vars::legs(n)
    }

    #[test]
    fn difference_of_squares() {
        let v = av(2);
        let a1 = MultiPoly::var(v, 0);
        let a2 = MultiPoly::var(v, 1);
        let p = &(&a1 + &a2) * &(&a1 - &a2);
        let expect = &(&a1 * &a1) - &(&a2 * &a2);
        assert_eq!(p, expect);
    }

    #[test]
    fn one_is_identity() {
        let v = av(3);
        let p = MultiPoly::parse("2*a1^2*a3 + -1/3*a2", v).unwrap();
        assert_eq!(&MultiPoly::one(v) * &p, p);
    }

    #[test]
    fn homogeneous_part_examples() {
        let v = av(2);
        let p = MultiPoly::parse("3 + 1*a1*a2", v).unwrap();
        assert_eq!(p.homogeneous_part(2), MultiPoly::parse("1*a1*a2", v).unwrap());
        assert!(MultiPoly::zero(v).homogeneous_part(4).is_zero());
        assert!(p.homogeneous_part(7).is_zero());
    }

    #[test]
    fn exact_div_var_examples() {
        let v = Vars::kernel(2);
        let p = MultiPoly::parse("1*x1^2*x2 + 1*x1*x2^2", v).unwrap();
        let q = p.exact_div_var(0).unwrap();
        assert_eq!(q, MultiPoly::parse("1*x1*x2 + 1*x2^2", v).unwrap());
        assert!(MultiPoly::zero(v).exact_div_var(0).unwrap().is_zero());
        let bad = MultiPoly::parse("1*x1 + 1*x2", v).unwrap();
        assert_eq!(bad.exact_div_var(0), Err(Error::NotDivisible));
    }

    #[test]
    fn substitute_square_of_sum() {
        let xv = Vars::kernel(1);
        let av2 = av(2);
        let p = MultiPoly::parse("1*x1^2", xv).unwrap();
        let form = MultiPoly::var_sum(av2, [0, 1]);
        let q = p.substitute(&[form], av2);
        assert_eq!(q, MultiPoly::parse("1*a1^2 + 2*a1*a2 + 1*a2^2", av2).unwrap());
    }

    #[test]
    fn substitute_zero_annihilates() {
        let xv = Vars::kernel(2);
        let p = MultiPoly::parse("3*x1*x2^2", xv).unwrap();
        let q = p.substitute(&[MultiPoly::zero(av(1)), MultiPoly::var(av(1), 0)], av(1));
        assert!(q.is_zero());
    }

    #[test]
    fn canonical_render_order() {
        let v = av(2);
        let p = MultiPoly::parse("-1/3*a1*a2 + 1/2*a1^2", v).unwrap();
        assert_eq!(p.render(), "1/2*a1^2 + -1/3*a1*a2");
    }

    #[test]
    fn exact_div_linear_form() {
        let v = av(3);
        let s = MultiPoly::var_sum(v, 0..3);
        let p = MultiPoly::parse("1*a1 + 1*a2 + 1*a3", v).unwrap();
        assert_eq!(p.exact_div(&s).unwrap(), MultiPoly::one(v));
        let bad = MultiPoly::var(v, 0);
        assert_eq!(bad.exact_div(&s), Err(Error::NotDivisible));
    }

    fn arb_poly(n_vars: usize, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
        let term = (
            proptest::collection::vec(0u32..4, n_vars),
            -6i64..7,
            1i64..5,
        );
        proptest::collection::vec(term, 0..max_terms).prop_map(move |ts| {
            let mut p = MultiPoly::zero(Vars::legs(n_vars));
            for (exps, num, den) in ts {
                p.add_term(Mono(exps), rat(num, den));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(p in arb_poly(3, 5), q in arb_poly(3, 5), r in arb_poly(3, 5)) {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        }

        #[test]
        fn mul_matches_term_pair_oracle(p in arb_poly(3, 6), q in arb_poly(3, 6)) {
            // naive O(T1*T2) oracle
            let mut oracle = MultiPoly::zero(p.vars());
            for (m1, c1) in p.terms() {
                for (m2, c2) in q.terms() {
                    let e: Vec<u32> = m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect();
                    oracle.add_term(Mono(e), c1 * c2);
                }
            }
            prop_assert_eq!(&p * &q, oracle);
        }

        #[test]
        fn homogeneous_mul_grading(d1 in 0u32..4, d2 in 0u32..4,
                                   p in arb_poly(3, 6), q in arb_poly(3, 6)) {
            let hp = p.homogeneous_part(d1);
            let hq = q.homogeneous_part(d2);
            let prod = &hp * &hq;
            if !prod.is_zero() {
                prop_assert_eq!(prod.homogeneous_degree(), Some(d1 + d2));
            }
        }

        #[test]
        fn homogeneous_parts_sum_to_poly(p in arb_poly(3, 8)) {
            let mut sum = MultiPoly::zero(p.vars());
            for d in 0..=p.degree().unwrap_or(0) {
                sum += &p.homogeneous_part(d);
            }
            prop_assert_eq!(sum, p);
        }

        #[test]
        fn div_after_mul_by_var(p in arb_poly(3, 6), v in 0usize..3) {
            let xv = MultiPoly::var(p.vars(), v);
            let prod = &p * &xv;
            prop_assert_eq!(prod.exact_div_var(v).unwrap(), p);
        }

        #[test]
        fn render_parse_roundtrip(p in arb_poly(3, 8)) {
            let s = p.render();
            let q = MultiPoly::parse(&s, p.vars()).unwrap();
            prop_assert_eq!(p, q);
        }

        #[test]
        fn substitute_commutes_with_mul(p in arb_poly(2, 4), q in arb_poly(2, 4)) {
            // sigma: a1 -> a1 + a2, a2 -> a2 (homogeneous linear)
            let v = Vars::legs(2);
            let forms = [MultiPoly::var_sum(v, [0, 1]), MultiPoly::var(v, 1)];
            let lhs = (&p * &q).substitute(&forms, v);
            let rhs = &p.substitute(&forms, v) * &q.substitute(&forms, v);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn substitute_identity(p in arb_poly(3, 6)) {
            let v = p.vars();
            let forms: alloc::vec::Vec<_> = (0..3).map(|i| MultiPoly::var(v, i)).collect();
            prop_assert_eq!(p.substitute(&forms, v), p);
        }
    }
}
