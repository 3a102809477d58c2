//! Exact Gaussian-integer arithmetic and primitive sum-of-two-squares
//! decompositions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith::{as_perfect_square, is_prime, isqrt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error("exponent k = {0} must be odd")]
    EvenExponent(u32),
    #[error("identity right-hand side has nonzero imaginary part {0}")]
    NonRealIdentity(BigInt),
}

/// `re + im*i` with arbitrary-precision components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        GaussianInt::new(0, 0)
    }

    pub fn one() -> Self {
        GaussianInt::new(1, 0)
    }

    pub fn norm(&self) -> BigUint {
        (&self.re * &self.re + &self.im * &self.im)
            .to_biguint()
            .expect("sum of squares is nonnegative")
    }

    pub fn conj(&self) -> Self {
        GaussianInt {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = GaussianInt::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl<'a> Mul<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;

    fn mul(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;

    fn mul(self, rhs: GaussianInt) -> GaussianInt {
        &self * &rhs
    }
}

impl<'a> Add<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;

    fn add(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;

    fn add(self, rhs: GaussianInt) -> GaussianInt {
        &self + &rhs
    }
}

impl<'a> Sub<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;

    fn sub(self, rhs: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;

    fn neg(self) -> GaussianInt {
        GaussianInt {
            re: -self.re,
            im: -self.im,
        }
    }
}

/// Primitive representation `n = g^2 + h^2` with `g` odd, `h` even and
/// `gcd(g, h) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwoSquares {
    pub g: BigUint,
    pub h: BigUint,
    pub n: BigUint,
}

impl TwoSquares {
    /// `g + h*i`.
    pub fn alpha(&self) -> GaussianInt {
        GaussianInt::new(BigInt::from(self.g.clone()), BigInt::from(self.h.clone()))
    }

    /// `g - h*i`.
    pub fn beta(&self) -> GaussianInt {
        self.alpha().conj()
    }
}

impl fmt::Display for TwoSquares {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.g, self.h)
    }
}

/// Inputs up to this bound are decomposed by direct scan; larger ones go
/// through square roots of -1 and the Euclidean descent.
pub const EXHAUSTIVE_DECOMPOSITION_LIMIT: u64 = 1_000_000;

/// All primitive representations of `n` with even second component, ordered
/// by `h` ascending (equivalently `g` descending). Empty when none exist.
pub fn two_square_decompositions(n: &BigUint) -> Vec<TwoSquares> {
    // g odd and h even force n = 1 (mod 4)
    if n < &BigUint::from(5u32) || (n % 4u32) != BigUint::one() {
        return Vec::new();
    }
    let mut found = match n.to_u64() {
        Some(small) if small <= EXHAUSTIVE_DECOMPOSITION_LIMIT => decompose_by_scan(small)
            .into_iter()
            .map(|(g, h)| (BigUint::from(g), BigUint::from(h)))
            .collect(),
        _ => decompose_by_descent(n),
    };
    found.sort_by(|a, b| a.1.cmp(&b.1));
    found.dedup();
    found
        .into_iter()
        .map(|(g, h)| TwoSquares { g, h, n: n.clone() })
        .collect()
}

pub(crate) fn decompose_by_scan(n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut g = 1u64;
    while g * g < n {
        let rest = n - g * g;
        let h = isqrt_u64(rest);
        if h * h == rest && h % 2 == 0 && h > 0 && g.gcd(&h) == 1 {
            out.push((g, h));
        }
        g += 2;
    }
    out
}

fn isqrt_u64(n: u64) -> u64 {
    isqrt(&BigUint::from(n)).to_u64().expect("root of u64 fits")
}

/// Primitive representations via every square root of -1 modulo `n`.
///
/// Needs the factorization of `n`, obtained by trial division and Pollard rho.
pub(crate) fn decompose_by_descent(n: &BigUint) -> Vec<(BigUint, BigUint)> {
    let factors = factorize(n);
    if factors.iter().any(|(p, _)| (p % 4u32) != BigUint::one()) {
        return Vec::new();
    }

    // roots of x^2 = -1 modulo each prime power, combined by CRT
    let mut roots: Vec<BigUint> = vec![BigUint::zero()];
    let mut modulus = BigUint::one();
    for (p, e) in &factors {
        let pe = p.pow(*e);
        let s = sqrt_minus_one_mod_prime_power(p, *e);
        let mut next = Vec::with_capacity(roots.len() * 2);
        for r in &roots {
            for t in [s.clone(), &pe - &s] {
                next.push(crt_pair(r, &modulus, &t, &pe));
            }
        }
        modulus *= &pe;
        roots = next;
    }

    let bound = isqrt(n);
    let mut out = Vec::new();
    for t in roots {
        // Euclid on (n, t) stops at the first remainder below sqrt(n)
        let (mut a, mut b) = (n.clone(), t);
        while b > bound {
            let r = &a % &b;
            a = b;
            b = r;
        }
        let x = b;
        let y = match as_perfect_square(&(n - &x * &x)) {
            Some(y) => y,
            None => continue,
        };
        let (g, h) = if x.is_odd() { (x, y) } else { (y, x) };
        if !g.is_zero() && !h.is_zero() && g.gcd(&h).is_one() {
            out.push((g, h));
        }
    }
    out
}

fn crt_pair(r1: &BigUint, m1: &BigUint, r2: &BigUint, m2: &BigUint) -> BigUint {
    if m1.is_one() {
        return r2 % m2;
    }
    let m1_int = BigInt::from(m1.clone());
    let m2_int = BigInt::from(m2.clone());
    let inv = mod_inverse(&m1_int, &m2_int);
    let diff = (BigInt::from(r2.clone()) - BigInt::from(r1.clone())).mod_floor(&m2_int);
    let step = (diff * inv).mod_floor(&m2_int);
    let m = &m1_int * &m2_int;
    (BigInt::from(r1.clone()) + &m1_int * step)
        .mod_floor(&m)
        .to_biguint()
        .expect("reduced residue is nonnegative")
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let ext = a.extended_gcd(m);
    debug_assert!(ext.gcd.is_one());
    ext.x.mod_floor(m)
}

/// A root of `x^2 = -1 (mod p)` for prime `p = 1 (mod 4)`, lifted to `p^e`.
fn sqrt_minus_one_mod_prime_power(p: &BigUint, e: u32) -> BigUint {
    let p_minus_one = p - 1u32;
    let quarter = &p_minus_one >> 2u32;
    let mut c = BigUint::from(2u32);
    let mut s = loop {
        // c^((p-1)/4) squares to -1 exactly when c is a non-residue
        let s = c.modpow(&quarter, p);
        if (&s * &s) % p == p_minus_one {
            break s;
        }
        c += 1u32;
    };

    // Hensel lift: s <- s - (s^2 + 1) / (2s)
    let mut modulus = p.clone();
    for _ in 1..e {
        modulus *= p;
        let m = BigInt::from(modulus.clone());
        let si = BigInt::from(s.clone());
        let f: BigInt = &si * &si + 1;
        let inv = mod_inverse(&(BigInt::from(2) * &si), &m);
        s = (&si - f * inv)
            .mod_floor(&m)
            .to_biguint()
            .expect("reduced residue is nonnegative");
    }
    s
}

fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut primes: Vec<BigUint> = Vec::new();
    let mut rest = n.clone();
    let mut d = 2u32;
    while d < 10_000 {
        let dd = BigUint::from(d);
        if &dd * &dd > rest {
            break;
        }
        while (&rest % d).is_zero() {
            primes.push(dd.clone());
            rest /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![rest];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            primes.push(m);
            continue;
        }
        let f = pollard_brent(&m);
        stack.push(&m / &f);
        stack.push(f);
    }
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// A nontrivial factor of composite `n` (Brent's variant of Pollard rho).
fn pollard_brent(n: &BigUint) -> BigUint {
    if n.is_even() {
        return BigUint::from(2u32);
    }
    if let Some(r) = as_perfect_square(n) {
        return r;
    }
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut g = BigUint::one();
        let mut r = 1u64;
        let mut q = BigUint::one();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..128.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

/// Real parts `(P, Q)` of
/// `((g+hi)^k (1-i) + (g-hi)^k (1+i)) / 2` and
/// `((g+hi)^k (1+i) + (g-hi)^k (1-i)) / 2`.
///
/// Signs are kept as computed; callers compare absolute values.
pub fn eval_pq_identities(g: &BigUint, h: &BigUint, k: u32) -> Result<(BigInt, BigInt), GaussError> {
    if k % 2 == 0 {
        return Err(GaussError::EvenExponent(k));
    }
    let alpha = GaussianInt::new(BigInt::from(g.clone()), BigInt::from(h.clone()));
    let alpha_k = alpha.pow(k);
    let beta_k = alpha_k.conj();
    let one_minus_i = GaussianInt::new(1, -1);
    let one_plus_i = GaussianInt::new(1, 1);

    let two_p = &(&alpha_k * &one_minus_i) + &(&beta_k * &one_plus_i);
    let two_q = &(&alpha_k * &one_plus_i) + &(&beta_k * &one_minus_i);
    for side in [&two_p, &two_q] {
        if !side.is_real() {
            return Err(GaussError::NonRealIdentity(side.im.clone()));
        }
    }
    Ok((two_p.re / 2, two_q.re / 2))
}
