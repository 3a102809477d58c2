//! Parametrized primitive Pythagorean triples and the qualifying hypothesis
//! set: `c = m^2 + n^2 = 5 (mod 8)` with `m + n` and `m - n` both prime.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("need m > n >= 1, got m = {m}, n = {n}")]
    NotOrdered { m: BigUint, n: BigUint },
    #[error("m and n must be coprime, gcd = {0}")]
    NotCoprime(BigUint),
    #[error("m and n must have opposite parity")]
    SameParity,
}

/// `(a, b, c) = (2mn, m^2 - n^2, m^2 + n^2)` together with `p = m + n` and
/// `q = m - n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TeraiInstance {
    pub m: BigUint,
    pub n: BigUint,
    pub a: BigUint,
    pub b: BigUint,
    pub c: BigUint,
    pub p: BigUint,
    pub q: BigUint,
}

impl TeraiInstance {
    /// `m * n`.
    pub fn mn(&self) -> BigUint {
        &self.m * &self.n
    }
}

impl fmt::Display for TeraiInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(m,n)=({},{}) a={} b={} c={} p={} q={}",
            self.m, self.n, self.a, self.b, self.c, self.p, self.q
        )
    }
}

pub fn make_instance(m: &BigUint, n: &BigUint) -> Result<TeraiInstance, InstanceError> {
    if n < &BigUint::one() || m <= n {
        return Err(InstanceError::NotOrdered {
            m: m.clone(),
            n: n.clone(),
        });
    }
    let g = m.gcd(n);
    if !g.is_one() {
        return Err(InstanceError::NotCoprime(g));
    }
    if m.is_odd() == n.is_odd() {
        return Err(InstanceError::SameParity);
    }
    let m2 = m * m;
    let n2 = n * n;
    Ok(TeraiInstance {
        m: m.clone(),
        n: n.clone(),
        a: (m * n) << 1u32,
        b: &m2 - &n2,
        c: &m2 + &n2,
        p: m + n,
        q: m - n,
    })
}

/// Shorthand for machine-sized parameters.
pub fn instance(m: u64, n: u64) -> Result<TeraiInstance, InstanceError> {
    make_instance(&BigUint::from(m), &BigUint::from(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HypothesisReport {
    pub coprime: bool,
    pub opposite_parity: bool,
    pub c_mod8_is_5: bool,
    pub p_prime: bool,
    pub q_prime: bool,
    pub qualifies: bool,
}

impl HypothesisReport {
    /// Names of the hypotheses that fail.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.coprime {
            out.push("gcd(m,n) = 1");
        }
        if !self.opposite_parity {
            out.push("m, n of opposite parity");
        }
        if !self.c_mod8_is_5 {
            out.push("c = 5 (mod 8)");
        }
        if !self.p_prime {
            out.push("p = m+n prime");
        }
        if !self.q_prime {
            out.push("q = m-n prime");
        }
        out
    }
}

pub fn check_hypotheses(inst: &TeraiInstance) -> HypothesisReport {
    let coprime = inst.m.gcd(&inst.n).is_one();
    let opposite_parity = inst.m.is_odd() != inst.n.is_odd();
    let c_mod8_is_5 = (&inst.c % 8u32) == BigUint::from(5u32);
    // q = 1 is a unit, never prime
    let p_prime = is_prime(&inst.p);
    let q_prime = is_prime(&inst.q);
    HypothesisReport {
        coprime,
        opposite_parity,
        c_mod8_is_5,
        p_prime,
        q_prime,
        qualifies: coprime && opposite_parity && c_mod8_is_5 && p_prime && q_prime,
    }
}

fn qualifying_for_m(m: u64) -> Vec<TeraiInstance> {
    // n runs over the parity opposite to m
    let start = if m % 2 == 0 { 1 } else { 2 };
    (start..m)
        .step_by(2)
        .filter_map(|n| instance(m, n).ok())
        .filter(|inst| check_hypotheses(inst).qualifies)
        .collect()
}

/// Every qualifying instance with `m <= m_max`, ordered by `(m, n)`.
pub fn scan_instances(m_max: u64) -> Vec<TeraiInstance> {
    (2..=m_max)
        .into_par_iter()
        .flat_map_iter(qualifying_for_m)
        .collect()
}
