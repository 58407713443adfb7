//! Exact coefficient rings: Z, Q, F_p and Z/n.
//!
//! All arithmetic is exact. Residue rings store normalized representatives
//! in `0..n`; rationals are kept reduced by `num-rational`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Integers,
    Rationals,
    PrimeField(u64),
    IntegersMod(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Res(u64),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Extended gcd; returns (g, x) with x*a = g mod m.
fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    let mut x = s0 % m as i128;
    if x < 0 {
        x += m as i128;
    }
    Some(x as u64)
}

impl Ring {
    pub fn parse(s: &str) -> Result<Ring> {
        let r = match s {
            "Z" => Ring::Integers,
            "Q" => Ring::Rationals,
            _ => {
                if let Some(p) = s.strip_prefix("Fp:") {
                    let p: u64 = p
                        .parse()
                        .map_err(|_| Error::MalformedInput(format!("bad ring {s}")))?;
                    Ring::PrimeField(p)
                } else if let Some(n) = s.strip_prefix("Zn:") {
                    let n: u64 = n
                        .parse()
                        .map_err(|_| Error::MalformedInput(format!("bad ring {s}")))?;
                    Ring::IntegersMod(n)
                } else {
                    return Err(Error::MalformedInput(format!("unknown ring {s}")));
                }
            }
        };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Ring::PrimeField(p) if !is_prime(*p) => {
                Err(Error::MalformedInput(format!("{p} is not prime")))
            }
            Ring::IntegersMod(n) if *n < 2 => {
                Err(Error::MalformedInput(format!("modulus {n} too small")))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Ring::Integers => "Z".into(),
            Ring::Rationals => "Q".into(),
            Ring::PrimeField(p) => format!("Fp:{p}"),
            Ring::IntegersMod(n) => format!("Zn:{n}"),
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(self, Ring::Rationals | Ring::PrimeField(_))
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            Ring::PrimeField(p) => Some(*p),
            Ring::IntegersMod(n) => Some(*n),
            _ => None,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            Ring::Integers => Scalar::Int(v.clone()),
            Ring::Rationals => Scalar::Rat(BigRational::from_integer(v.clone())),
            Ring::PrimeField(m) | Ring::IntegersMod(m) => {
                let m_big = BigInt::from(*m);
                let mut r = v % &m_big;
                if r.is_negative() {
                    r += &m_big;
                }
                let digits = r.to_u64_digits().1;
                Scalar::Res(if digits.is_empty() { 0 } else { digits[0] })
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Int(v) => v.is_zero(),
            Scalar::Rat(v) => v.is_zero(),
            Scalar::Res(v) => *v == 0,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Scalar::Res(x), Scalar::Res(y)) => {
                let m = self.modulus().expect("residue scalar in non-residue ring");
                Scalar::Res(((*x as u128 + *y as u128) % m as u128) as u64)
            }
            _ => panic!("scalar kind mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Int(v) => Scalar::Int(-v),
            Scalar::Rat(v) => Scalar::Rat(-v),
            Scalar::Res(v) => {
                let m = self.modulus().expect("residue scalar in non-residue ring");
                Scalar::Res(if *v == 0 { 0 } else { m - v })
            }
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Res(x), Scalar::Res(y)) => {
                let m = self.modulus().expect("residue scalar in non-residue ring");
                Scalar::Res(((*x as u128 * *y as u128) % m as u128) as u64)
            }
            _ => panic!("scalar kind mismatch"),
        }
    }

    /// Multiplicative inverse where one exists.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match a {
            Scalar::Int(v) => {
                if v.is_one() || (-v).is_one() {
                    Some(Scalar::Int(v.clone()))
                } else {
                    None
                }
            }
            Scalar::Rat(v) => {
                if v.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(v.recip()))
                }
            }
            Scalar::Res(v) => {
                let m = self.modulus().expect("residue scalar in non-residue ring");
                inv_mod(*v, m).map(Scalar::Res)
            }
        }
    }

    /// Lift a scalar of this ring to an integer representative.
    /// Rationals lift only when they are integral.
    pub fn lift(&self, a: &Scalar) -> Option<BigInt> {
        match a {
            Scalar::Int(v) => Some(v.clone()),
            Scalar::Rat(v) => {
                if v.is_integer() {
                    Some(v.to_integer())
                } else {
                    None
                }
            }
            Scalar::Res(v) => Some(BigInt::from(*v)),
        }
    }

    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let bad = || Error::MalformedInput(format!("bad scalar {s:?} for ring {}", self.name()));
        if let Ring::Rationals = self {
            if let Some((num, den)) = s.split_once('/') {
                let n: BigInt = num.trim().parse().map_err(|_| bad())?;
                let d: BigInt = den.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                return Ok(Scalar::Rat(BigRational::new(n, d)));
            }
        }
        let v: BigInt = s.trim().parse().map_err(|_| bad())?;
        Ok(self.from_bigint(&v))
    }

    pub fn format_scalar(&self, a: &Scalar) -> String {
        match a {
            Scalar::Int(v) => v.to_string(),
            Scalar::Rat(v) => {
                if v.is_integer() {
                    v.to_integer().to_string()
                } else {
                    format!("{}/{}", v.numer(), v.denom())
                }
            }
            Scalar::Res(v) => v.to_string(),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}
