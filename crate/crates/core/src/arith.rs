//! Arbitrary-precision integer primitives: Jacobi symbols, integer square
//! roots, primality and exact power detection.
//!
//! Everything here works on [`num_bigint::BigUint`] / [`num_bigint::BigInt`];
//! no floating point is used anywhere.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

/// Nonnegative arbitrary-precision integer.
pub type Natural = BigUint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("jacobi symbol modulus must be odd and positive, got {0}")]
    EvenOrZeroModulus(BigUint),
    #[error("power base must be at least 2, got {0}")]
    BaseTooSmall(BigUint),
}

/// Value of a Jacobi symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JacobiValue {
    MinusOne,
    Zero,
    One,
}

impl JacobiValue {
    pub fn as_i8(self) -> i8 {
        match self {
            JacobiValue::MinusOne => -1,
            JacobiValue::Zero => 0,
            JacobiValue::One => 1,
        }
    }

    pub fn from_sign(positive: bool) -> Self {
        if positive {
            JacobiValue::One
        } else {
            JacobiValue::MinusOne
        }
    }
}

impl std::ops::Mul for JacobiValue {
    type Output = JacobiValue;

    fn mul(self, rhs: JacobiValue) -> JacobiValue {
        match self.as_i8() * rhs.as_i8() {
            1 => JacobiValue::One,
            -1 => JacobiValue::MinusOne,
            _ => JacobiValue::Zero,
        }
    }
}

impl fmt::Display for JacobiValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JacobiValue::MinusOne => f.write_str("-1"),
            JacobiValue::Zero => f.write_str("0"),
            JacobiValue::One => f.write_str("+1"),
        }
    }
}

fn low_bits(n: &BigUint, mask: u64) -> u64 {
    n.iter_u64_digits().next().unwrap_or(0) & mask
}

/// Jacobi symbol `(a/n)` for odd positive `n`, by binary reciprocity.
///
/// A negative `a` is handled as `(-1/n) * (|a| mod n / n)`.
pub fn jacobi(a: &BigInt, n: &BigUint) -> Result<JacobiValue, ArithError> {
    if n.is_zero() || n.is_even() {
        return Err(ArithError::EvenOrZeroModulus(n.clone()));
    }
    let mut positive = true;
    if a.sign() == Sign::Minus && low_bits(n, 3) == 3 {
        positive = false;
    }
    let mut a = a.magnitude() % n;
    let mut n = n.clone();

    while !a.is_zero() {
        let twos = a.trailing_zeros().unwrap_or(0);
        if twos > 0 {
            a >>= twos;
            let n8 = low_bits(&n, 7);
            if twos % 2 == 1 && (n8 == 3 || n8 == 5) {
                positive = !positive;
            }
        }
        // both odd now; quadratic reciprocity
        if low_bits(&a, 3) == 3 && low_bits(&n, 3) == 3 {
            positive = !positive;
        }
        std::mem::swap(&mut a, &mut n);
        a %= &n;
    }

    if n.is_one() {
        Ok(JacobiValue::from_sign(positive))
    } else {
        Ok(JacobiValue::Zero)
    }
}

/// Convenience wrapper for a nonnegative first argument.
pub fn jacobi_nat(a: &BigUint, n: &BigUint) -> Result<JacobiValue, ArithError> {
    jacobi(&BigInt::from(a.clone()), n)
}

fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let bits = 128 - n.leading_zeros();
    let mut x: u128 = 1 << bits.div_ceil(2);
    loop {
        let y = (x + n / x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// `floor(sqrt(n))` by integer Newton iteration.
///
/// The iteration starts from `2^ceil(bits/2) >= sqrt(n)` and is strictly
/// decreasing until it reaches the floor root, so it stops at the first step
/// that fails to decrease.
pub fn isqrt(n: &BigUint) -> BigUint {
    if let Some(small) = n.to_u128() {
        return BigUint::from(isqrt_u128(small));
    }
    let bits = n.bits();
    let mut x = BigUint::one() << bits.div_ceil(2);
    loop {
        let y: BigUint = (&x + n / &x) >> 1u32;
        if y >= x {
            return x;
        }
        x = y;
    }
}

// Bitmaps of quadratic residues modulo small numbers, used to reject most
// non-squares before taking a root.
const SQUARE_FILTER_MODULI: [u64; 4] = [64, 63, 65, 11];

fn residue_table(m: u64) -> Vec<bool> {
    let mut table = vec![false; m as usize];
    for i in 0..m {
        table[((i * i) % m) as usize] = true;
    }
    table
}

fn square_filters() -> &'static [Vec<bool>; 4] {
    use std::sync::OnceLock;
    static TABLES: OnceLock<[Vec<bool>; 4]> = OnceLock::new();
    TABLES.get_or_init(|| SQUARE_FILTER_MODULI.map(residue_table))
}

/// Returns `r` with `r * r == n`, or `None` when `n` is not a perfect square.
pub fn as_perfect_square(n: &BigUint) -> Option<BigUint> {
    // 64 * 63 * 65 * 11 fits comfortably in a u64
    let residue = (n % BigUint::from(64u64 * 63 * 65 * 11)).to_u64().unwrap_or(0);
    let tables = square_filters();
    for (m, table) in SQUARE_FILTER_MODULI.iter().zip(tables.iter()) {
        if !table[(residue % m) as usize] {
            return None;
        }
    }
    let r = isqrt(n);
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Below this bound Miller-Rabin with the first thirteen primes as witnesses
/// is a proof of primality.
pub const DETERMINISTIC_PRIME_BOUND: &str = "3317044064679887385961981";

const WITNESSES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Primality settings for inputs above [`DETERMINISTIC_PRIME_BOUND`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimalityConfig {
    /// Random Miller-Rabin bases tried on top of the fixed witness set.
    pub extra_rounds: u32,
    pub seed: u64,
}

impl Default for PrimalityConfig {
    fn default() -> Self {
        PrimalityConfig {
            extra_rounds: 32,
            seed: 0x7e7a_1c0d,
        }
    }
}

impl PrimalityConfig {
    /// One-line description embedded in reports.
    pub fn describe(&self) -> String {
        format!(
            "miller-rabin: deterministic (13 prime witnesses) below {}; above, probabilistic with {} extra random rounds (seed {})",
            DETERMINISTIC_PRIME_BOUND, self.extra_rounds, self.seed
        )
    }
}

fn deterministic_bound() -> &'static BigUint {
    use std::sync::OnceLock;
    static BOUND: OnceLock<BigUint> = OnceLock::new();
    BOUND.get_or_init(|| DETERMINISTIC_PRIME_BOUND.parse().expect("valid literal"))
}

fn miller_rabin_round(n: &BigUint, n_minus_one: &BigUint, d: &BigUint, s: u64, base: &BigUint) -> bool {
    let mut x = base.modpow(d, n);
    if x.is_one() || &x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if &x == n_minus_one {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// Primality test with the default [`PrimalityConfig`].
pub fn is_prime(n: &BigUint) -> bool {
    is_prime_with(n, &PrimalityConfig::default())
}

pub fn is_prime_with(n: &BigUint, config: &PrimalityConfig) -> bool {
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return false;
        }
        for &p in &SMALL_PRIMES {
            let p = p as u64;
            if small == p {
                return true;
            }
            if small % p == 0 {
                return false;
            }
        }
        if small < 97 * 97 {
            return true;
        }
    } else {
        for &p in &SMALL_PRIMES {
            if (n % p).is_zero() {
                return false;
            }
        }
    }

    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    for &w in &WITNESSES {
        if !miller_rabin_round(n, &n_minus_one, &d, s, &BigUint::from(w)) {
            return false;
        }
    }
    if n < deterministic_bound() {
        return true;
    }

    let mut rng = StdRng::seed_from_u64(config.seed);
    // n exceeds 2^81 here, so bases in [2, 2^64) are all proper residues
    for _ in 0..config.extra_rounds {
        let base = BigUint::from(rng.gen_range(2u64..u64::MAX));
        if !miller_rabin_round(n, &n_minus_one, &d, s, &base) {
            return false;
        }
    }
    true
}

/// Returns `k` with `base^k == n`, if such a `k` exists.
pub fn power_exponent_of(n: &BigUint, base: &BigUint) -> Result<Option<u32>, ArithError> {
    if base < &BigUint::from(2u32) {
        return Err(ArithError::BaseTooSmall(base.clone()));
    }
    if n.is_zero() {
        return Ok(None);
    }
    let mut rest = n.clone();
    let mut k = 0u32;
    while !rest.is_one() {
        let (q, r) = rest.div_rem(base);
        if !r.is_zero() {
            return Ok(None);
        }
        rest = q;
        k += 1;
    }
    Ok(Some(k))
}
