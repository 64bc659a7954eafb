//! Witten–Kontsevich psi-intersection numbers.
//!
//! `<tau_{d_1} ... tau_{d_n}>_g` is computed by the
//! Dijkgraaf–Verlinde–Verlinde recursion on the largest exponent, with
//! string/dilaton fast paths, the genus-0 closed form `(n-3)!/prod d_i!`,
//! and the seeds `<tau_0^3>_0 = 1`, `<tau_1>_1 = 1/24`. Values are memoized
//! under the sorted exponent multiset.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::{rat, rat_int, Rat};
use crate::{Error, Result};

/// Memoized table of psi-intersection numbers.
#[derive(Clone, Debug, Default)]
pub struct WkTable {
    memo: BTreeMap<(u32, Vec<u32>), Rat>,
}

fn factorial(n: u32) -> BigInt {
    let mut out = BigInt::one();
    for i in 2..=n as u64 {
        out *= i;
    }
    out
}

/// Odd double factorial `k!!` for odd `k >= -1` (with `(-1)!! = 1`).
fn double_factorial(k: i64) -> BigInt {
    let mut out = BigInt::one();
    let mut i = k;
    while i >= 2 {
        out *= i;
        i -= 2;
    }
    out
}

impl WkTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.memo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.memo.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u32, Vec<u32>), &Rat)> {
        self.memo.iter()
    }

    /// Merge entries computed elsewhere; equal keys must carry equal values.
    pub fn absorb(&mut self, other: &WkTable) {
        for (k, v) in &other.memo {
            if let Some(old) = self.memo.insert(k.clone(), v.clone()) {
                assert_eq!(&old, v, "conflicting WK value for {k:?}");
            }
        }
    }

    /// Install one memo entry (e.g. from a persistent cache). The exponent
    /// vector must be sorted descending.
    pub fn seed(&mut self, g: u32, sorted_exps: Vec<u32>, value: Rat) {
        debug_assert!(sorted_exps.windows(2).all(|w| w[0] >= w[1]));
        if let Some(old) = self.memo.insert((g, sorted_exps), value.clone()) {
            assert_eq!(old, value, "conflicting seeded WK value");
        }
    }

    /// `int_{Mbar_{g,n}} prod psi_i^{d_i}`; zero on dimension mismatch.
    pub fn integral(&mut self, g: u32, exps: &[u32]) -> Result<Rat> {
        if 2 * g as i64 - 2 + exps.len() as i64 <= 0 {
            return Err(Error::UnstableTarget);
        }
        Ok(self.value(g, exps))
    }

    /// Internal evaluator; unstable targets and dimension mismatches are 0.
    pub(crate) fn value(&mut self, g: u32, exps: &[u32]) -> Rat {
        let n = exps.len();
        if 2 * g as i64 - 2 + n as i64 <= 0 {
            return Rat::zero();
        }
        let dim = 3 * g as i64 - 3 + n as i64;
        let total: i64 = exps.iter().map(|&d| d as i64).sum();
        if total != dim {
            return Rat::zero();
        }
        if g == 0 {
            let mut denom = BigInt::one();
            for &d in exps {
                denom *= factorial(d);
            }
            return Rat::new(factorial(n as u32 - 3), denom);
        }
        if g == 1 && n == 1 {
            return rat(1, 24);
        }
        let mut key: Vec<u32> = exps.to_vec();
        key.sort_unstable_by(|a, b| b.cmp(a));
        if let Some(v) = self.memo.get(&(g, key.clone())) {
            return v.clone();
        }
        let val = self.compute(g, &key);
        self.memo.insert((g, key), val.clone());
        val
    }

    fn compute(&mut self, g: u32, d: &[u32]) -> Rat {
        let n = d.len();
        // string: remove a tau_0 insertion
        if let Some(z) = d.iter().position(|&x| x == 0) {
            let mut rest: Vec<u32> = d.to_vec();
            rest.remove(z);
            let mut sum = Rat::zero();
            for j in 0..rest.len() {
                if rest[j] == 0 {
                    continue;
                }
                let mut e = rest.clone();
                e[j] -= 1;
                sum += self.value(g, &e);
            }
            return sum;
        }
        // dilaton: remove a tau_1 insertion
        if let Some(o) = d.iter().position(|&x| x == 1) {
            let mut rest: Vec<u32> = d.to_vec();
            rest.remove(o);
            let factor = 2 * g as i64 - 2 + (n as i64 - 1);
            return self.value(g, &rest) * rat_int(factor);
        }
        // DVV recursion on the largest exponent (all entries >= 2 here)
        let k = d[0] as i64;
        let rest: Vec<u32> = d[1..].to_vec();
        let mut sum = Rat::zero();
        for j in 0..rest.len() {
            let dj = rest[j] as i64;
            let mut e: Vec<u32> = rest.clone();
            e[j] = (k + dj - 1) as u32;
            let c = Rat::new(
                double_factorial(2 * (k + dj) - 1),
                double_factorial(2 * dj - 1),
            );
            sum += self.value(g, &e) * c;
        }
        let mut boundary = Rat::zero();
        for a in 0..=(k - 2) {
            let b = k - 2 - a;
            let c = Rat::from_integer(double_factorial(2 * a + 1) * double_factorial(2 * b + 1));
            // non-separating reduction
            let mut e: Vec<u32> = rest.clone();
            e.push(a as u32);
            e.push(b as u32);
            let mut inner = self.value(g - 1, &e);
            // separating splittings over labeled subsets of the remaining points
            for mask in 0..(1u32 << rest.len()) {
                let side1: Vec<u32> = (0..rest.len())
                    .filter(|&i| mask & (1 << i) != 0)
                    .map(|i| rest[i])
                    .collect();
                let side2: Vec<u32> = (0..rest.len())
                    .filter(|&i| mask & (1 << i) == 0)
                    .map(|i| rest[i])
                    .collect();
                for g1 in 0..=g {
                    let mut e1 = side1.clone();
                    e1.push(a as u32);
                    let mut e2 = side2.clone();
                    e2.push(b as u32);
                    let v1 = self.value(g1, &e1);
                    if v1.is_zero() {
                        continue;
                    }
                    inner += v1 * self.value(g - g1, &e2);
                }
            }
            boundary += inner * c;
        }
        sum += boundary * rat(1, 2);
        sum / Rat::from_integer(double_factorial(2 * k + 1))
    }
}
