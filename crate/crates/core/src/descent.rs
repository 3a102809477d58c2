//! Replay of the descent for solutions of `x^2 + b^y = c^z`.
//!
//! With `y = 2r` and `z = 2k` (both `r`, `k` odd), a solution gives a
//! primitive triple `(x, b^r, c^k)` with legs `u > v`, and
//! `(u - v)(u + v) = p^r q^r` splits in one of two ways:
//!
//! * case A: `u - v = 1`, `u + v = (pq)^r`, so `2c^k = (pq)^{2r} + 1`;
//! * case B: `u + v = p^r`, `u - v = q^r`, so `p^{2r} + q^{2r} = 2c^k`.
//!
//! Case B is then pushed through a primitive decomposition
//! `c = g^2 + h^2` in the Gaussian integers.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{as_perfect_square, power_exponent_of};
use crate::gaussint::{eval_pq_identities, two_square_decompositions, GaussError, GaussianInt, TwoSquares};
use crate::triples::TeraiInstance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error("x = {x} does not satisfy x^2 + b^{y} = c^{z}")]
    NotASolution { x: BigUint, y: u64, z: u64 },
    #[error("exponent {name} = {value} must be even and positive")]
    OddExponent { name: &'static str, value: u64 },
    #[error("{what} = {value} is not a perfect square")]
    NotSquare { what: &'static str, value: BigUint },
    #[error("leg structure violated: {0}")]
    LegStructure(&'static str),
    #[error("exponent {0} does not fit in 32 bits")]
    ExponentTooLarge(u64),
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error("{step}: {source}")]
    Step {
        step: &'static str,
        #[source]
        source: Box<DescentError>,
    },
}

impl DescentError {
    fn at(self, step: &'static str) -> DescentError {
        DescentError::Step {
            step,
            source: Box::new(self),
        }
    }
}

/// Legs `(u, v)` of the primitive triple `(x, b^r, c^k)`.
pub fn legs_from_solution(
    inst: &TeraiInstance,
    x: &BigUint,
    r: u32,
    k: u32,
) -> Result<(BigUint, BigUint), DescentError> {
    let br = inst.b.pow(r);
    let ck = inst.c.pow(k);
    if x * x + &br * &br != &ck * &ck {
        return Err(DescentError::NotASolution {
            x: x.clone(),
            y: 2 * r as u64,
            z: 2 * k as u64,
        });
    }
    let two_u2 = &ck + &br;
    let two_v2 = &ck - &br;
    if two_u2.is_odd() || two_v2.is_odd() {
        return Err(DescentError::LegStructure("c^k +- b^r is odd"));
    }
    let u = as_perfect_square(&(&two_u2 >> 1u32)).ok_or_else(|| DescentError::NotSquare {
        what: "(c^k + b^r)/2",
        value: &two_u2 >> 1u32,
    })?;
    let v = as_perfect_square(&(&two_v2 >> 1u32)).ok_or_else(|| DescentError::NotSquare {
        what: "(c^k - b^r)/2",
        value: &two_v2 >> 1u32,
    })?;
    if (&u * &v) << 1u32 != *x {
        return Err(DescentError::LegStructure("2uv != x"));
    }
    if u <= v || v.is_zero() {
        return Err(DescentError::LegStructure("need u > v >= 1"));
    }
    if !u.gcd(&v).is_one() {
        return Err(DescentError::LegStructure("gcd(u, v) != 1"));
    }
    if u.is_odd() == v.is_odd() {
        return Err(DescentError::LegStructure("u, v of equal parity"));
    }
    Ok((u, v))
}

/// `2c^k == (pq)^{2r} + 1`.
pub fn case_a_check(inst: &TeraiInstance, r: u32, k: u32) -> bool {
    inst.c.pow(k) << 1u32 == inst.b.pow(2 * r) + 1u32
}

/// `p^{2r} + q^{2r} == 2c^k`.
pub fn case_b_check(inst: &TeraiInstance, r: u32, k: u32) -> bool {
    inst.p.pow(2 * r) + inst.q.pow(2 * r) == inst.c.pow(k) << 1u32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaseScanRow {
    pub r: u32,
    pub k: u32,
    pub case_a_holds: bool,
    pub case_b_holds: bool,
}

/// Both case equations over all odd `r <= r_max`, `k <= k_max`, sorted by
/// `(r, k)`.
pub fn scan_cases(inst: &TeraiInstance, r_max: u32, k_max: u32) -> Vec<CaseScanRow> {
    let two_c_pows: Vec<(u32, BigUint)> = (1..=k_max)
        .step_by(2)
        .map(|k| (k, inst.c.pow(k) << 1u32))
        .collect();
    let rs: Vec<u32> = (1..=r_max).step_by(2).collect();
    rs.par_iter()
        .flat_map_iter(|&r| {
            let case_a_lhs = inst.b.pow(2 * r) + 1u32;
            let case_b_lhs = inst.p.pow(2 * r) + inst.q.pow(2 * r);
            two_c_pows
                .iter()
                .map(|(k, two_ck)| CaseScanRow {
                    r,
                    k: *k,
                    case_a_holds: &case_a_lhs == two_ck,
                    case_b_holds: &case_b_lhs == two_ck,
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Orientation and exponents of a decomposition that survives the
/// divisibility constraints: `|g + eps*h| = p^t1`, `|g - eps*h| = q^t2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterOutcome {
    pub epsilon: i8,
    pub t1: u32,
    pub t2: u32,
}

/// For `k = 1 (mod 4)`, `g + h` divides `p^r` and `g - h` divides `q^r`; for
/// `k = 3 (mod 4)` the roles swap. `None` when `dec` cannot satisfy this.
pub fn divisibility_filter(inst: &TeraiInstance, dec: &TwoSquares, r: u32, k: u32) -> Option<FilterOutcome> {
    if dec.n != inst.c || k % 2 == 0 {
        return None;
    }
    let sum = &dec.g + &dec.h;
    let diff = if dec.g >= dec.h { &dec.g - &dec.h } else { &dec.h - &dec.g };
    let (epsilon, to_p, to_q) = if k % 4 == 1 { (1, sum, diff) } else { (-1, diff, sum) };
    let t1 = power_exponent_of(&to_p, &inst.p).ok()??;
    let t2 = power_exponent_of(&to_q, &inst.q).ok()??;
    if t1 > r || t2 > r {
        return None;
    }
    Some(FilterOutcome { epsilon, t1, t2 })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASumCongruence {
    /// `A = sum_{j<k} (alpha^2)^{k-1-j} (-beta^2)^j`.
    pub a_value: BigInt,
    pub a_mod_b: BigUint,
    /// `k * 2^{k-1} * (mn)^{k-1} mod b`.
    pub rhs_mod_b: BigUint,
    /// `+1` if `A = rhs`, `-1` if `A = -rhs (mod b)`.
    pub sign: Option<i8>,
    pub match_up_to_sign: bool,
    /// `(s, j)` with `A = s * b^j`, when `A` has that shape.
    pub signed_power_of_b: Option<(i8, u32)>,
}

pub fn a_sum_congruence(inst: &TeraiInstance, dec: &TwoSquares, k: u32) -> Result<ASumCongruence, DescentError> {
    if k % 2 == 0 {
        return Err(GaussError::EvenExponent(k).into());
    }
    let alpha2 = dec.alpha().pow(2);
    let neg_beta2 = -dec.beta().pow(2);
    // Horner: S_0 = 1, S_{i+1} = S_i * alpha^2 + (-beta^2)^{i+1}
    let mut acc = GaussianInt::one();
    let mut tail = GaussianInt::one();
    for _ in 1..k {
        tail = &tail * &neg_beta2;
        acc = &(&acc * &alpha2) + &tail;
    }
    if !acc.is_real() {
        return Err(GaussError::NonRealIdentity(acc.im).into());
    }
    let a_value = acc.re;

    let b_int = BigInt::from(inst.b.clone());
    let a_mod_b = to_nat(a_value.mod_floor(&b_int));
    let rhs = BigUint::from(k) * BigUint::from(2u32).pow(k - 1) * inst.mn().pow(k - 1);
    let rhs_mod_b = &rhs % &inst.b;
    let neg_rhs_mod_b = (&inst.b - &rhs_mod_b) % &inst.b;
    let sign = if a_mod_b == rhs_mod_b {
        Some(1)
    } else if a_mod_b == neg_rhs_mod_b {
        Some(-1)
    } else {
        None
    };
    let signed_power_of_b = power_exponent_of(a_value.magnitude(), &inst.b)
        .ok()
        .flatten()
        .map(|j| (if a_value.is_negative() { -1 } else { 1 }, j));
    Ok(ASumCongruence {
        a_value,
        a_mod_b,
        rhs_mod_b,
        sign,
        match_up_to_sign: sign.is_some(),
        signed_power_of_b,
    })
}

fn to_nat(v: BigInt) -> BigUint {
    v.to_biguint().expect("nonnegative by construction")
}

/// The rearranged case-B equation `2 * (c^{q a'})^p = p^{2r} + q^{2r}` left
/// for the bounded oracles when `b | k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleBranch {
    pub a_prime: u32,
    /// `c^{q a'}`.
    pub base: BigUint,
    /// Exponent of `base`, equal to `p`.
    pub exponent: BigUint,
    pub r: u32,
}

impl OracleBranch {
    /// Whether `2 * base^p == p^{2r} + q^{2r}` holds for `inst`.
    pub fn equation_holds(&self, inst: &TeraiInstance) -> bool {
        let exp = self.exponent.to_u32().expect("p fits in u32 for oracle branches");
        self.base.pow(exp) << 1u32 == inst.p.pow(2 * self.r) + inst.q.pow(2 * self.r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KConclusion {
    /// `r = 1` or `k = 1`.
    BaseCase,
    Contradiction { b: BigUint, k: u32 },
    Oracle(OracleBranch),
}

impl fmt::Display for KConclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KConclusion::BaseCase => f.write_str("base-case branch"),
            KConclusion::Contradiction { b, k } => write!(f, "contradiction: {b} ∤ {k}"),
            KConclusion::Oracle(o) => write!(
                f,
                "oracle branch: a' = {}, 2*({})^{} = p^{} + q^{}",
                o.a_prime,
                o.base,
                o.exponent,
                2 * o.r,
                2 * o.r
            ),
        }
    }
}

pub fn k_divisibility_conclusion(inst: &TeraiInstance, r: u32, k: u32) -> KConclusion {
    if r == 1 || k == 1 {
        return KConclusion::BaseCase;
    }
    let k_nat = BigUint::from(k);
    if !(&k_nat % &inst.b).is_zero() {
        return KConclusion::Contradiction { b: inst.b.clone(), k };
    }
    let a_prime = (&k_nat / &inst.b).to_u32().expect("a' <= k");
    // q * a' = k / p <= k
    let q_a = (&inst.q * a_prime).to_u32().expect("q * a' <= k");
    KConclusion::Oracle(OracleBranch {
        a_prime,
        base: inst.c.pow(q_a),
        exponent: inst.p.clone(),
        r,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    A,
    B,
    None,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::A => "A",
            CaseTag::B => "B",
            CaseTag::None => "none",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceVerdict {
    TheoremConsistent,
    Inconsistent { failed: Vec<&'static str> },
}

impl fmt::Display for TraceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceVerdict::TheoremConsistent => f.write_str("theorem-consistent"),
            TraceVerdict::Inconsistent { failed } => write!(f, "inconsistent: {}", failed.join(", ")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentTrace {
    pub instance: TeraiInstance,
    pub x: BigUint,
    pub y: u32,
    pub z: u32,
    pub r: u32,
    pub k: u32,
    pub u: BigUint,
    pub v: BigUint,
    pub case_tag: CaseTag,
    pub decompositions: Vec<TwoSquares>,
    /// Decompositions of `c` that pass [`divisibility_filter`].
    pub survivors: Vec<(TwoSquares, FilterOutcome)>,
    /// The unique survivor, if there is exactly one.
    pub chosen: Option<(TwoSquares, FilterOutcome)>,
    /// Signed `(P, Q)` from the Gaussian identities for the chosen decomposition.
    pub pq: Option<(BigInt, BigInt)>,
    pub identity_checks: Vec<IdentityCheck>,
    pub k_conclusion: KConclusion,
    pub verdict: TraceVerdict,
}

impl DescentTrace {
    pub fn epsilon(&self) -> Option<i8> {
        self.chosen.as_ref().map(|(_, f)| f.epsilon)
    }

    pub fn t1_t2(&self) -> Option<(u32, u32)> {
        self.chosen.as_ref().map(|(_, f)| (f.t1, f.t2))
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        self.identity_checks.iter().find(|c| c.name == name).map(|c| c.holds)
    }
}

fn exponent_u32(v: u64) -> Result<u32, DescentError> {
    u32::try_from(v).map_err(|_| DescentError::ExponentTooLarge(v))
}

/// Replays the whole descent for the solution `(x, y, z)`.
pub fn descent_trace(inst: &TeraiInstance, x: &BigUint, y: u64, z: u64) -> Result<DescentTrace, DescentError> {
    let y32 = exponent_u32(y).map_err(|e| e.at("solution"))?;
    let z32 = exponent_u32(z).map_err(|e| e.at("solution"))?;
    if x * x + inst.b.pow(y32) != inst.c.pow(z32) {
        return Err(DescentError::NotASolution { x: x.clone(), y, z }.at("solution"));
    }
    for (name, value) in [("y", y), ("z", z)] {
        if value == 0 || value % 2 == 1 {
            return Err(DescentError::OddExponent { name, value }.at("parity"));
        }
    }
    let (r, k) = (y32 / 2, z32 / 2);
    let (u, v) = legs_from_solution(inst, x, r, k).map_err(|e| e.at("legs"))?;

    let pr = inst.p.pow(r);
    let qr = inst.q.pow(r);
    let case_tag = if &u + &v == pr && &u - &v == qr {
        CaseTag::B
    } else if (&u - &v).is_one() && &u + &v == inst.b.pow(r) {
        CaseTag::A
    } else {
        CaseTag::None
    };

    let mut checks = vec![
        IdentityCheck {
            name: "case_a_excluded",
            holds: !case_a_check(inst, r, k),
        },
        IdentityCheck {
            name: "case_b_equation",
            holds: case_b_check(inst, r, k),
        },
    ];

    let decompositions = two_square_decompositions(&inst.c);
    let survivors: Vec<(TwoSquares, FilterOutcome)> = decompositions
        .iter()
        .filter_map(|d| divisibility_filter(inst, d, r, k).map(|f| (d.clone(), f)))
        .collect();
    checks.push(IdentityCheck {
        name: "unique_surviving_decomposition",
        holds: survivors.len() == 1,
    });
    let chosen = if survivors.len() == 1 { survivors.first().cloned() } else { None };

    let mut pq = None;
    if let Some((dec, outcome)) = &chosen {
        let (p_val, q_val) = eval_pq_identities(&dec.g, &dec.h, k)
            .map_err(|e| DescentError::from(e).at("pq_identities"))?;
        checks.push(IdentityCheck {
            name: "p_power_identity",
            holds: p_val.magnitude() == &pr,
        });
        checks.push(IdentityCheck {
            name: "q_power_identity",
            holds: q_val.magnitude() == &qr,
        });
        checks.push(IdentityCheck {
            name: "t1_t2_equal_one",
            holds: outcome.t1 == 1 && outcome.t2 == 1,
        });
        checks.push(IdentityCheck {
            name: "gh_equals_mn",
            holds: &dec.g * &dec.h == inst.mn(),
        });
        // 2(alpha^{2k} + beta^{2k}) = +-4 b^r
        let a2k = dec.alpha().pow(2 * k);
        let lhs: BigInt = (&a2k + &a2k.conj()).re * 2;
        let rhs = BigInt::from(inst.b.pow(r)) * 4;
        checks.push(IdentityCheck {
            name: "alpha_beta_power_sum",
            holds: lhs.abs() == rhs,
        });
        pq = Some((p_val, q_val));
    }

    let k_conclusion = k_divisibility_conclusion(inst, r, k);
    checks.push(IdentityCheck {
        name: "base_case_exponents",
        holds: r == 1 && k == 1,
    });

    let mut failed: Vec<&'static str> = checks
        .iter()
        .filter(|c| !c.holds)
        .map(|c| c.name)
        .collect();
    if case_tag != CaseTag::B {
        failed.insert(0, "case_tag_b");
    }
    if chosen.is_none() && !failed.contains(&"unique_surviving_decomposition") {
        failed.push("unique_surviving_decomposition");
    }
    let verdict = if failed.is_empty() {
        TraceVerdict::TheoremConsistent
    } else {
        TraceVerdict::Inconsistent { failed }
    };

    Ok(DescentTrace {
        instance: inst.clone(),
        x: x.clone(),
        y: y32,
        z: z32,
        r,
        k,
        u,
        v,
        case_tag,
        decompositions,
        survivors,
        chosen,
        pq,
        identity_checks: checks,
        k_conclusion,
        verdict,
    })
}
