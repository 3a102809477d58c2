//! Jacobi-symbol parity certificates.
//!
//! For a qualifying instance any solution of `x^2 + b^y = c^z` gives
//! `x^2 = -b^y (mod c)` and `x^2 = c^z (mod b)`. With `(-1/c) = +1` and
//! `(b/c) = (c/b) = -1` this forces `y` and `z` even. Writing `y = 2r`,
//! `z = 2k`, the legs `u, v` of the primitive triple
//! `(x, b^r, c^k)` satisfy `2u^2 = b^r (mod c)` and `2v^2 = c^k (mod b)`;
//! since `(2/c) = (2/b) = -1`, both `r` and `k` must be odd.

use std::fmt;

use num_bigint::BigInt;

use crate::arith::{jacobi, JacobiValue};
use crate::triples::TeraiInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Exponent parities forced by a valid certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityConclusions {
    pub y: Parity,
    pub z: Parity,
    pub r: Parity,
    pub k: Parity,
}

/// Names and expected values of the five recorded symbols, in order.
pub const SYMBOLS: [(&str, JacobiValue); 5] = [
    ("(-1/c)", JacobiValue::One),
    ("(b/c)", JacobiValue::MinusOne),
    ("(c/b)", JacobiValue::MinusOne),
    ("(2/c)", JacobiValue::MinusOne),
    ("(2/b)", JacobiValue::MinusOne),
];

/// Caveat carried by every certificate.
pub const CONDITIONAL_NOTE: &str = "r and k parities are conditional on the leg equations \
     2u^2 = b^r + c^k and 2v^2 = c^k - b^r for y = 2r, z = 2k";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolDeviation {
    pub symbol: &'static str,
    pub expected: JacobiValue,
    pub actual: JacobiValue,
}

impl fmt::Display for SymbolDeviation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} (expected {})", self.symbol, self.actual, self.expected)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCertificate {
    pub j_minus1_c: JacobiValue,
    pub j_b_c: JacobiValue,
    pub j_c_b: JacobiValue,
    pub j_2_c: JacobiValue,
    pub j_2_b: JacobiValue,
    /// Present only when the certificate is valid.
    pub conclusions: Option<ParityConclusions>,
    pub valid: bool,
    pub deviations: Vec<SymbolDeviation>,
    pub note: &'static str,
}

impl ParityCertificate {
    pub fn symbols(&self) -> [JacobiValue; 5] {
        [self.j_minus1_c, self.j_b_c, self.j_c_b, self.j_2_c, self.j_2_b]
    }
}

/// Evaluates the five symbols for `inst`.
///
/// Non-qualifying instances produce an invalid certificate whose
/// `deviations` name the offending symbols.
pub fn parity_certificate(inst: &TeraiInstance) -> ParityCertificate {
    let b = BigInt::from(inst.b.clone());
    let c = BigInt::from(inst.c.clone());
    // b and c are odd and positive for every parametrized instance
    let sym = |a: &BigInt, n| jacobi(a, n).expect("odd positive modulus");
    let values = [
        sym(&BigInt::from(-1), &inst.c),
        sym(&b, &inst.c),
        sym(&c, &inst.b),
        sym(&BigInt::from(2), &inst.c),
        sym(&BigInt::from(2), &inst.b),
    ];
    let deviations: Vec<SymbolDeviation> = SYMBOLS
        .iter()
        .zip(values)
        .filter(|((_, expected), actual)| expected != actual)
        .map(|(&(symbol, expected), actual)| SymbolDeviation {
            symbol,
            expected,
            actual,
        })
        .collect();
    let valid = deviations.is_empty();
    ParityCertificate {
        j_minus1_c: values[0],
        j_b_c: values[1],
        j_c_b: values[2],
        j_2_c: values[3],
        j_2_b: values[4],
        conclusions: valid.then_some(ParityConclusions {
            y: Parity::Even,
            z: Parity::Even,
            r: Parity::Odd,
            k: Parity::Odd,
        }),
        valid,
        deviations,
        note: CONDITIONAL_NOTE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::jacobi_nat;
    use crate::triples::{instance, scan_instances};
    use JacobiValue::{MinusOne, One};

    #[test]
    fn certificate_examples() {
        for (m, n) in [(5, 2), (6, 1)] {
            let cert = parity_certificate(&instance(m, n).unwrap());
            assert_eq!(cert.symbols(), [One, MinusOne, MinusOne, MinusOne, MinusOne]);
            assert!(cert.valid);
            let c = cert.conclusions.unwrap();
            assert_eq!((c.y, c.z, c.r, c.k), (Parity::Even, Parity::Even, Parity::Odd, Parity::Odd));
        }
    }

    #[test]
    fn non_qualifying_certificate_is_invalid() {
        let cert = parity_certificate(&instance(4, 1).unwrap());
        assert!(!cert.valid);
        assert_eq!(cert.j_2_c, One);
        assert!(cert.conclusions.is_none());
        assert!(cert.deviations.iter().any(|d| d.symbol == "(2/c)"));
    }

    #[test]
    fn all_qualifying_up_to_200_are_valid() {
        for inst in scan_instances(200) {
            assert!(parity_certificate(&inst).valid, "{inst}");
        }
    }

    #[test]
    fn b_over_c_factors_through_supplements() {
        for inst in scan_instances(200) {
            let lhs = jacobi_nat(&inst.b, &inst.c).unwrap();
            let rhs = jacobi(&BigInt::from(-1), &inst.c).unwrap()
                * jacobi(&BigInt::from(2), &inst.c).unwrap()
                * jacobi_nat(&inst.n, &inst.c).unwrap()
                * jacobi_nat(&inst.n, &inst.c).unwrap();
            assert_eq!(lhs, rhs, "{inst}");
        }
    }
}
