//! Scalars of the base field (rationals) together with the p-adic valuation,
//! residue-field reduction and canonical representatives modulo powers of p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Elements of the base field. Stored reduced with positive denominator,
/// which `BigRational` guarantees, so equality is structural.
pub type Scalar = BigRational;

/// The p-adic valuation of a scalar, with a distinguished value for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// Finite value, or `None` for the valuation of zero.
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl std::fmt::Display for Valuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// The prime fixing the valuation, the residue field and the uniformizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PAdicContext {
    p: u64,
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PAdicContext {
    pub fn new(p: u64) -> Result<Self> {
        if p >= (1 << 31) || !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PAdicContext { p })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn prime_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    /// The uniformizer p as a scalar.
    pub fn uniformizer(&self) -> Scalar {
        BigRational::from_integer(BigInt::from(self.p))
    }

    /// p^k as a scalar, for any integer k.
    pub fn p_pow(&self, k: i64) -> Scalar {
        let pk = self.prime_big().pow(k.unsigned_abs() as u32);
        if k >= 0 {
            BigRational::from_integer(pk)
        } else {
            BigRational::new(BigInt::one(), pk)
        }
    }

    /// Valuation of a nonzero integer.
    fn int_valuation(&self, n: &BigInt) -> i64 {
        debug_assert!(!n.is_zero());
        let p = self.prime_big();
        let mut m = n.abs();
        let mut v = 0i64;
        loop {
            let (q, r) = m.div_rem(&p);
            if !r.is_zero() {
                return v;
            }
            m = q;
            v += 1;
        }
    }

    /// p-adic valuation, with `valuation(0) = +infinity`.
    pub fn valuation(&self, x: &Scalar) -> Valuation {
        if x.is_zero() {
            return Valuation::Infinite;
        }
        Valuation::Finite(self.int_valuation(x.numer()) - self.int_valuation(x.denom()))
    }

    pub fn is_integral(&self, x: &Scalar) -> bool {
        match self.valuation(x) {
            Valuation::Infinite => true,
            Valuation::Finite(v) => v >= 0,
        }
    }

    /// Reduction to the residue field, as an integer in `[0, p)`.
    /// Requires nonnegative valuation.
    pub fn residue(&self, x: &Scalar) -> Result<u64> {
        Ok(self
            .canonical_mod(x, 1)?
            .to_u64()
            .expect("residue fits in u64"))
    }

    /// The unique integer c in `[0, p^k)` with `valuation(x - c) >= k`.
    /// Requires nonnegative valuation.
    pub fn canonical_mod(&self, x: &Scalar, k: u32) -> Result<BigInt> {
        if let Valuation::Finite(v) = self.valuation(x) {
            if v < 0 {
                return Err(Error::NegativeValuation(format!(
                    "canonical_mod of {x} at p = {}",
                    self.p
                )));
            }
        }
        if k == 0 || x.is_zero() {
            return Ok(BigInt::zero());
        }
        let m = self.prime_big().pow(k);
        let num = x.numer().mod_floor(&m);
        let den = x.denom().mod_floor(&m);
        // denominator is coprime to p since the fraction is reduced
        let inv = mod_inverse(&den, &m).expect("denominator invertible mod p^k");
        Ok((num * inv).mod_floor(&m))
    }

    /// Canonical representative of `x + p^a Z_(p)`: the truncation of the
    /// p-adic expansion of x below exponent a. An integer in `[0, p^a)`
    /// whenever x is integral; in general an integer divided by a power of p.
    pub fn reduce_class(&self, x: &Scalar, a: i64) -> Scalar {
        let v = match self.valuation(x) {
            Valuation::Infinite => return Scalar::zero(),
            Valuation::Finite(v) => v,
        };
        if v >= a {
            return Scalar::zero();
        }
        let unit = x * self.p_pow(-v);
        let c = self
            .canonical_mod(&unit, (a - v) as u32)
            .expect("unit is integral");
        BigRational::from_integer(c) * self.p_pow(v)
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Renders a scalar as `a/b`, or `a` when the denominator is one.
pub fn scalar_to_string(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `a` or `a/b`; rejects a zero denominator.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in scalar {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in scalar {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in scalar {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

pub fn scalar_int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn scalar_ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> PAdicContext {
        PAdicContext::new(p).unwrap()
    }

    #[test]
    fn rejects_composites_and_huge_primes() {
        assert!(PAdicContext::new(1).is_err());
        assert!(PAdicContext::new(4).is_err());
        assert!(PAdicContext::new(91).is_err());
        assert!(PAdicContext::new(2).is_ok());
        assert!(PAdicContext::new(104729).is_ok());
        assert!(PAdicContext::new(1 << 31).is_err());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(ctx(2).valuation(&Scalar::zero()), Valuation::Infinite);
        assert_eq!(ctx(2).valuation(&scalar_int(12)), Valuation::Finite(2));
        assert_eq!(ctx(3).valuation(&scalar_ratio(5, 9)), Valuation::Finite(-2));
        assert_eq!(ctx(5).valuation(&scalar_int(5)), Valuation::Finite(1));
    }

    #[test]
    fn valuation_is_multiplicative() {
        let c = ctx(3);
        let x = scalar_ratio(6, 5);
        let y = scalar_ratio(9, 2);
        let vx = c.valuation(&x).finite().unwrap();
        let vy = c.valuation(&y).finite().unwrap();
        assert_eq!(c.valuation(&(x * y)).finite().unwrap(), vx + vy);
    }

    #[test]
    fn residue_examples() {
        assert_eq!(ctx(7).residue(&scalar_int(7)).unwrap(), 0);
        assert_eq!(ctx(5).residue(&scalar_ratio(7, 3)).unwrap(), 4);
        assert_eq!(ctx(5).residue(&Scalar::one()).unwrap(), 1);
        assert!(ctx(5).residue(&scalar_ratio(1, 5)).is_err());
    }

    #[test]
    fn canonical_mod_examples() {
        assert_eq!(
            ctx(3).canonical_mod(&Scalar::zero(), 4).unwrap(),
            BigInt::zero()
        );
        assert_eq!(
            ctx(2).canonical_mod(&scalar_ratio(1, 3), 2).unwrap(),
            BigInt::from(3)
        );
        assert_eq!(
            ctx(3).canonical_mod(&scalar_int(5), 1).unwrap(),
            BigInt::from(2)
        );
    }

    #[test]
    fn canonical_mod_is_compatible_along_k() {
        let c = ctx(3);
        let x = scalar_ratio(17, 4);
        for k in 0..6u32 {
            let a = c.canonical_mod(&x, k).unwrap();
            let b = c.canonical_mod(&x, k + 1).unwrap();
            let m = c.prime_big().pow(k);
            assert_eq!(a.mod_floor(&m), b.mod_floor(&m));
        }
    }

    #[test]
    fn residue_matches_canonical_mod_at_one() {
        let c = ctx(5);
        for n in -20i64..20 {
            for d in [1i64, 2, 3, 7, 9] {
                let x = scalar_ratio(n, d);
                if c.is_integral(&x) {
                    assert_eq!(
                        BigInt::from(c.residue(&x).unwrap()),
                        c.canonical_mod(&x, 1).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn reduce_class_handles_negative_exponents() {
        let c = ctx(2);
        // 1/2 mod 2^0 Z_(2): the fractional digit survives
        assert_eq!(c.reduce_class(&scalar_ratio(1, 2), 0), scalar_ratio(1, 2));
        // 3/2 = 1/2 + 1: mod 2 Z_(2) both digits survive
        assert_eq!(c.reduce_class(&scalar_ratio(3, 2), 1), scalar_ratio(3, 2));
        assert_eq!(c.reduce_class(&scalar_int(4), 1), Scalar::zero());
        assert_eq!(c.reduce_class(&scalar_int(7), 2), scalar_int(3));
    }

    #[test]
    fn scalar_strings_round_trip() {
        for s in ["0", "5", "-3", "7/2", "-9/4"] {
            let x = parse_scalar(s).unwrap();
            assert_eq!(scalar_to_string(&x), s);
        }
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
        // non-reduced input normalizes
        assert_eq!(parse_scalar("4/2").unwrap(), scalar_int(2));
    }
}
