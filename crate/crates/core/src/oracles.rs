//! Bounded searches standing in for the cited external results:
//!
//! * `2z^k = y^2 + 1` with `k > 2` only has `y = z = 1` and
//!   `(y, z, k) = (239, 13, 4)`;
//! * `y^q = a^2 + (a+1)^2` has no solutions for odd `q >= 3`;
//! * `x^2 + p^{2m} = 2y^n` (primes `p`, `n > 3`, `gcd(x, y) = 1`) has no
//!   solutions unless `y` is a sum of two consecutive squares.
//!
//! Each search covers a finite window only; reports carry that window.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::{as_perfect_square, is_prime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("window bound {name} = {value} is below the minimum {min}")]
    BoundTooSmall { name: &'static str, value: u64, min: u64 },
    #[error("exponent q = {0} must be odd and at least 3")]
    BadExponent(u32),
    #[error("{name} = {value} must be prime")]
    NotPrime { name: &'static str, value: u64 },
    #[error("exponent n = {0} must exceed 3")]
    ExponentTooSmall(u32),
}

/// Search window of one oracle run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleWindow {
    Cohn { k_max: u32, z_max: u64 },
    CorollaryC { y_max: u64, exponents: Vec<u32> },
    LemmaL2 { p: u64, n: u32, m_max: u32, y_max: u64 },
    /// The single rearranged equation left when `b | k` at `(r, k)`.
    Branch { r: u32, k: u32 },
}

impl OracleWindow {
    pub fn name(&self) -> &'static str {
        match self {
            OracleWindow::Cohn { .. } => "cohn",
            OracleWindow::CorollaryC { .. } => "corollary-c",
            OracleWindow::LemmaL2 { .. } => "lemma-l2",
            OracleWindow::Branch { .. } => "descent-branch",
        }
    }

    /// `(bound name, value)` pairs, in a fixed order.
    pub fn bounds(&self) -> Vec<(&'static str, String)> {
        match self {
            OracleWindow::Cohn { k_max, z_max } => {
                vec![("k_max", k_max.to_string()), ("z_max", z_max.to_string())]
            }
            OracleWindow::CorollaryC { y_max, exponents } => vec![
                ("y_max", y_max.to_string()),
                (
                    "q",
                    exponents.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
                ),
            ],
            OracleWindow::LemmaL2 { p, n, m_max, y_max } => vec![
                ("p", p.to_string()),
                ("n", n.to_string()),
                ("m_max", m_max.to_string()),
                ("y_max", y_max.to_string()),
            ],
            OracleWindow::Branch { r, k } => vec![("r", r.to_string()), ("k", k.to_string())],
        }
    }
}

impl fmt::Display for OracleWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bounds().into_iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}[{}]", self.name(), parts.join(" "))
    }
}

/// Result of one bounded search. Each hit is a tuple of naturals in the
/// order documented by the producing function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub window: OracleWindow,
    pub hits: Vec<Vec<BigUint>>,
    /// Hits not predicted by the cited result.
    pub unexpected: Vec<Vec<BigUint>>,
}

impl OracleReport {
    pub fn as_expected(&self) -> bool {
        self.unexpected.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CohnHit {
    pub y: BigUint,
    pub z: u64,
    pub k: u32,
}

/// All `(y, z, k)` with `2z^k = y^2 + 1`, `3 <= k <= k_max`,
/// `1 <= z <= z_max`, sorted by `(z, k)`.
pub fn cohn_search(k_max: u32, z_max: u64, include_trivial: bool) -> Result<Vec<CohnHit>, OracleError> {
    if k_max < 3 {
        return Err(OracleError::BoundTooSmall {
            name: "k_max",
            value: k_max as u64,
            min: 3,
        });
    }
    if z_max < 1 {
        return Err(OracleError::BoundTooSmall {
            name: "z_max",
            value: z_max,
            min: 1,
        });
    }
    let start = if include_trivial { 1 } else { 2 };
    let hits = (start..=z_max)
        .into_par_iter()
        .flat_map_iter(|z| {
            let zb = BigUint::from(z);
            let mut pow = zb.pow(2);
            let mut out = Vec::new();
            for k in 3..=k_max {
                pow *= &zb;
                let t = (&pow << 1u32) - 1u32;
                if let Some(y) = as_perfect_square(&t) {
                    out.push(CohnHit { y, z, k });
                }
            }
            out
        })
        .collect();
    Ok(hits)
}

/// Cohn search packaged with its window; only `y = z = 1` and
/// `(239, 13, 4)` count as expected.
pub fn cohn_report(k_max: u32, z_max: u64) -> Result<OracleReport, OracleError> {
    let hits = cohn_search(k_max, z_max, true)?;
    let known = |h: &CohnHit| (h.z == 1 && h.y.is_one()) || (h.z == 13 && h.k == 4 && h.y == BigUint::from(239u32));
    let to_row = |h: &CohnHit| vec![h.y.clone(), BigUint::from(h.z), BigUint::from(h.k)];
    Ok(OracleReport {
        window: OracleWindow::Cohn { k_max, z_max },
        unexpected: hits.iter().filter(|h| !known(h)).map(to_row).collect(),
        hits: hits.iter().map(to_row).collect(),
    })
}

/// `a` with `n = a^2 + (a+1)^2`, i.e. `2n - 1 = (2a+1)^2`.
pub fn consecutive_square_root(n: &BigUint) -> Option<BigUint> {
    if n.is_zero() {
        return None;
    }
    let s = as_perfect_square(&((n << 1u32) - 1u32))?;
    // 2n - 1 is odd, so s is odd
    Some(s >> 1u32)
}

fn check_odd_exponents(exponents: &[u32]) -> Result<(), OracleError> {
    match exponents.iter().find(|&&q| q < 3 || q % 2 == 0) {
        Some(&q) => Err(OracleError::BadExponent(q)),
        None => Ok(()),
    }
}

/// All `(y, q, a)` with `y^q = a^2 + (a+1)^2`, `2 <= y <= y_max`, `a >= 1`.
pub fn corollary_c_search(y_max: u64, exponents: &[u32]) -> Result<Vec<(u64, u32, BigUint)>, OracleError> {
    check_odd_exponents(exponents)?;
    let hits = (2..=y_max.max(1))
        .into_par_iter()
        .flat_map_iter(|y| {
            let yb = BigUint::from(y);
            exponents
                .iter()
                .filter_map(|&q| {
                    consecutive_square_root(&yb.pow(q))
                        .filter(|a| !a.is_zero())
                        .map(|a| (y, q, a))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(hits)
}

pub fn corollary_c_report(y_max: u64, exponents: &[u32]) -> Result<OracleReport, OracleError> {
    let hits: Vec<Vec<BigUint>> = corollary_c_search(y_max, exponents)?
        .into_iter()
        .map(|(y, q, a)| vec![BigUint::from(y), BigUint::from(q), a])
        .collect();
    Ok(OracleReport {
        window: OracleWindow::CorollaryC {
            y_max,
            exponents: exponents.to_vec(),
        },
        unexpected: hits.clone(),
        hits,
    })
}

/// All `(x, y, m)` with `x^2 + p^{2m} = 2y^n`, `gcd(x, y) = 1`,
/// `1 <= m <= m_max`, `y <= y_max`, and `y` not a sum of two consecutive
/// squares. Sorted by `(y, m)`.
pub fn lemma_l2_search(p: u64, n: u32, m_max: u32, y_max: u64) -> Result<Vec<(BigUint, u64, u32)>, OracleError> {
    if !is_prime(&BigUint::from(p)) {
        return Err(OracleError::NotPrime { name: "p", value: p });
    }
    if n <= 3 {
        return Err(OracleError::ExponentTooSmall(n));
    }
    if !is_prime(&BigUint::from(n)) {
        return Err(OracleError::NotPrime {
            name: "n",
            value: n as u64,
        });
    }
    let pb = BigUint::from(p);
    let p_pows: Vec<BigUint> = (1..=m_max).map(|m| pb.pow(2 * m)).collect();
    let hits = (1..=y_max)
        .into_par_iter()
        .flat_map_iter(|y| {
            let yb = BigUint::from(y);
            if consecutive_square_root(&yb).is_some() {
                return Vec::new();
            }
            let rhs = yb.pow(n) << 1u32;
            p_pows
                .iter()
                .zip(1..)
                .filter(|(pp, _)| *pp < &rhs)
                .filter_map(|(pp, m)| {
                    as_perfect_square(&(&rhs - pp))
                        .filter(|x| !x.is_zero() && x.gcd(&yb).is_one())
                        .map(|x| (x, y, m))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(hits)
}

pub fn lemma_l2_report(p: u64, n: u32, m_max: u32, y_max: u64) -> Result<OracleReport, OracleError> {
    let hits: Vec<Vec<BigUint>> = lemma_l2_search(p, n, m_max, y_max)?
        .into_iter()
        .map(|(x, y, m)| vec![x, BigUint::from(y), BigUint::from(m)])
        .collect();
    Ok(OracleReport {
        window: OracleWindow::LemmaL2 { p, n, m_max, y_max },
        unexpected: hits.clone(),
        hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn triples(hits: &[CohnHit]) -> Vec<(u64, u64, u32)> {
        use num_traits::ToPrimitive;
        hits.iter().map(|h| (h.y.to_u64().unwrap(), h.z, h.k)).collect()
    }

    #[test]
    fn cohn_examples() {
        let hits = triples(&cohn_search(10, 1000, true).unwrap());
        let mut expected: Vec<(u64, u64, u32)> = (3..=10).map(|k| (1, 1, k)).collect();
        expected.push((239, 13, 4));
        assert_eq!(hits, expected);
        assert_eq!(2 * 13u64.pow(4), 239 * 239 + 1);

        assert_eq!(triples(&cohn_search(3, 5, true).unwrap()), vec![(1, 1, 3)]);
        assert_eq!(triples(&cohn_search(4, 12, true).unwrap()), vec![(1, 1, 3), (1, 1, 4)]);
        assert_eq!(triples(&cohn_search(10, 1000, false).unwrap()), vec![(239, 13, 4)]);
    }

    #[test]
    fn cohn_rejects_small_windows() {
        assert!(cohn_search(2, 10, true).is_err());
        assert!(cohn_search(3, 0, true).is_err());
    }

    #[test]
    fn cohn_report_flags_only_unknown_hits() {
        let report = cohn_report(10, 1000).unwrap();
        assert_eq!(report.hits.len(), 9);
        assert!(report.as_expected());
    }

    #[test]
    fn cohn_window_monotone() {
        let small = cohn_search(8, 300, true).unwrap();
        let large = cohn_search(12, 900, true).unwrap();
        assert!(small.iter().all(|h| large.contains(h)));
    }

    #[test]
    fn consecutive_square_examples() {
        assert_eq!(consecutive_square_root(&nat(5)), Some(nat(1)));
        assert_eq!(consecutive_square_root(&nat(28561)), Some(nat(119)));
        assert_eq!(consecutive_square_root(&nat(37)), None);
        assert_eq!(consecutive_square_root(&nat(0)), None);
        assert_eq!(consecutive_square_root(&nat(1)), Some(nat(0)));
    }

    #[test]
    fn consecutive_square_round_trip() {
        for a in 0..=10_000u64 {
            assert_eq!(consecutive_square_root(&nat(a * a + (a + 1) * (a + 1))), Some(nat(a)));
        }
    }

    #[test]
    fn corollary_c_examples() {
        assert!(corollary_c_search(500, &[3, 5, 7, 9, 11]).unwrap().is_empty());
        assert_eq!(corollary_c_search(13, &[4]), Err(OracleError::BadExponent(4)));
        assert_eq!(corollary_c_search(13, &[1]), Err(OracleError::BadExponent(1)));
        assert!(corollary_c_search(1, &[3]).unwrap().is_empty());
        // the even exponent it refuses would have hit
        assert_eq!(consecutive_square_root(&nat(13u64.pow(4))), Some(nat(119)));
    }

    #[test]
    fn lemma_l2_examples() {
        assert!(lemma_l2_search(7, 5, 4, 200).unwrap().is_empty());
        assert!(lemma_l2_search(3, 7, 4, 200).unwrap().is_empty());
        assert_eq!(lemma_l2_search(7, 3, 4, 200), Err(OracleError::ExponentTooSmall(3)));
        assert!(matches!(lemma_l2_search(9, 5, 4, 200), Err(OracleError::NotPrime { name: "p", .. })));
        assert!(matches!(lemma_l2_search(7, 9, 4, 200), Err(OracleError::NotPrime { name: "n", .. })));
    }

    #[test]
    fn lemma_l2_skips_consecutive_square_sums() {
        // 79^2 + 3^2 = 2 * 5^5 with 5 = 1^2 + 2^2, outside the lemma's scope
        assert_eq!(79u64 * 79 + 9, 2 * 5u64.pow(5));
        assert!(consecutive_square_root(&nat(5)).is_some());
        assert!(lemma_l2_search(3, 5, 4, 10).unwrap().is_empty());
    }
}
