//! Coefficient rings ℚ, 𝔽_p and ℤ and their exact scalars.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Which coefficient ring R the algebra lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoeffKind {
    Rationals,
    PrimeField(u64),
    Integers,
}

/// A coefficient ring together with the structural flags the pipeline relies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoeffRing {
    pub kind: CoeffKind,
}

impl CoeffRing {
    pub const QQ: CoeffRing = CoeffRing { kind: CoeffKind::Rationals };
    pub const ZZ: CoeffRing = CoeffRing { kind: CoeffKind::Integers };

    pub fn gf(p: u64) -> Result<CoeffRing, String> {
        if p < 2 || !is_prime(p) {
            return Err(format!("{p} is not a prime"));
        }
        Ok(CoeffRing { kind: CoeffKind::PrimeField(p) })
    }

    pub fn is_field(&self) -> bool {
        !matches!(self.kind, CoeffKind::Integers)
    }
    pub fn is_pid(&self) -> bool {
        true
    }
    pub fn is_domain(&self) -> bool {
        true
    }
    /// Projective modules over R[Q] are extended from R for every affine normal Q.
    pub fn satisfies_dagger(&self) -> bool {
        self.is_pid()
    }
    /// The same for Laurent extensions R[Q ⊕ ℤ^r].
    pub fn satisfies_double_dagger(&self) -> bool {
        self.is_pid()
    }

    pub fn modulus(&self) -> Option<u64> {
        match self.kind {
            CoeffKind::PrimeField(p) => Some(p),
            _ => None,
        }
    }

    pub fn from_int(&self, n: impl Into<BigInt>) -> Coeff {
        Coeff::from_int(n).in_ring(self)
    }

    /// Brings `c` into this ring. Fails for non-integral values over ℤ and
    /// for denominators divisible by p over 𝔽_p.
    pub fn coerce(&self, c: &BigRational) -> Result<Coeff, String> {
        match self.kind {
            CoeffKind::Rationals => Ok(Coeff { v: c.clone(), p: 0 }),
            CoeffKind::Integers => {
                if c.is_integer() {
                    Ok(Coeff { v: c.clone(), p: 0 })
                } else {
                    Err(format!("{c} is not an integer"))
                }
            }
            CoeffKind::PrimeField(p) => {
                let pb = BigInt::from(p);
                if (c.denom() % &pb).is_zero() {
                    return Err(format!("{c} has a denominator divisible by {p}"));
                }
                let inv = mod_inverse(&c.denom().mod_floor(&pb), &pb).expect("p prime");
                let v = (c.numer() * inv).mod_floor(&pb);
                Ok(Coeff { v: BigRational::from_integer(v), p })
            }
        }
    }

    pub fn is_unit(&self, c: &Coeff) -> bool {
        match self.kind {
            CoeffKind::Integers => c.v.is_integer() && c.v.abs().is_one(),
            _ => !c.is_zero(),
        }
    }

    pub fn contains(&self, c: &Coeff) -> bool {
        match self.kind {
            CoeffKind::Rationals => true,
            CoeffKind::Integers => c.v.is_integer(),
            CoeffKind::PrimeField(p) => c.p == p || c.v.is_integer(),
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            CoeffKind::Rationals => "QQ".into(),
            CoeffKind::Integers => "ZZ".into(),
            CoeffKind::PrimeField(p) => format!("GF({p})"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// An exact scalar. `p == 0` means an element of ℚ (ℤ values are the integral
/// ones); `p > 0` tags a residue in 𝔽_p kept in `[0, p)`.
///
/// Untagged values mix freely with tagged ones: any operation involving a tag
/// reduces the result mod p, so literals like `1` or `-1` need no ring context.
#[derive(Clone, Debug)]
pub struct Coeff {
    v: BigRational,
    p: u64,
}

impl Coeff {
    pub fn zero() -> Coeff {
        Coeff { v: BigRational::zero(), p: 0 }
    }
    pub fn one() -> Coeff {
        Coeff { v: BigRational::one(), p: 0 }
    }
    pub fn from_int(n: impl Into<BigInt>) -> Coeff {
        Coeff { v: BigRational::from_integer(n.into()), p: 0 }
    }
    pub fn from_ratio(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Coeff {
        Coeff { v: BigRational::new(n.into(), d.into()), p: 0 }
    }

    /// Tags the value with the ring's modulus, reducing if needed.
    pub fn in_ring(self, ring: &CoeffRing) -> Coeff {
        match ring.kind {
            CoeffKind::PrimeField(p) => Coeff::reduce(self.v, p),
            _ => self,
        }
    }

    fn reduce(v: BigRational, p: u64) -> Coeff {
        if p == 0 {
            return Coeff { v, p };
        }
        let pb = BigInt::from(p);
        let den = v.denom().mod_floor(&pb);
        let inv = mod_inverse(&den, &pb).expect("denominator invertible mod p");
        let n = (v.numer() * inv).mod_floor(&pb);
        Coeff { v: BigRational::from_integer(n), p }
    }

    fn join(a: u64, b: u64) -> u64 {
        debug_assert!(a == 0 || b == 0 || a == b, "mixed moduli");
        a.max(b)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn value(&self) -> &BigRational {
        &self.v
    }

    pub fn is_zero(&self) -> bool {
        if self.p == 0 {
            self.v.is_zero()
        } else {
            (self.v.numer() % BigInt::from(self.p)).is_zero()
        }
    }

    pub fn is_one(&self) -> bool {
        (self.clone() - Coeff::one()).is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.v.is_integer()
    }

    /// Multiplicative inverse in the field of fractions (or in 𝔽_p).
    pub fn inv(&self) -> Option<Coeff> {
        if self.is_zero() {
            return None;
        }
        if self.p == 0 {
            return Some(Coeff { v: self.v.recip(), p: 0 });
        }
        Some(Coeff::reduce(self.v.recip(), self.p))
    }

    /// Exact quotient in the ring: over ℤ only when divisible.
    pub fn div_exact(&self, other: &Coeff, ring: &CoeffRing) -> Option<Coeff> {
        let q = self.clone() * other.inv()?;
        if ring.contains(&q) {
            Some(q)
        } else {
            None
        }
    }

    /// Integer value; panics on non-integral ℚ values.
    pub fn to_bigint(&self) -> BigInt {
        assert!(self.v.is_integer(), "non-integral coefficient");
        self.v.to_integer()
    }

    pub fn abs_int(&self) -> BigInt {
        self.v.numer().abs()
    }

    pub fn to_f64(&self) -> f64 {
        self.v.to_f64().unwrap_or(f64::NAN)
    }
}

impl PartialEq for Coeff {
    fn eq(&self, other: &Coeff) -> bool {
        (self.clone() - other.clone()).is_zero()
    }
}
impl Eq for Coeff {}

impl Add for Coeff {
    type Output = Coeff;
    fn add(self, o: Coeff) -> Coeff {
        Coeff::reduce_if(self.v + o.v, Coeff::join(self.p, o.p))
    }
}
impl Sub for Coeff {
    type Output = Coeff;
    fn sub(self, o: Coeff) -> Coeff {
        Coeff::reduce_if(self.v - o.v, Coeff::join(self.p, o.p))
    }
}
impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, o: Coeff) -> Coeff {
        Coeff::reduce_if(self.v * o.v, Coeff::join(self.p, o.p))
    }
}
impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff::reduce_if(-self.v, self.p)
    }
}
impl<'a> Add<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn add(self, o: &Coeff) -> Coeff {
        Coeff::reduce_if(&self.v + &o.v, Coeff::join(self.p, o.p))
    }
}
impl<'a> Sub<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn sub(self, o: &Coeff) -> Coeff {
        Coeff::reduce_if(&self.v - &o.v, Coeff::join(self.p, o.p))
    }
}
impl<'a> Mul<&'a Coeff> for &'a Coeff {
    type Output = Coeff;
    fn mul(self, o: &Coeff) -> Coeff {
        Coeff::reduce_if(&self.v * &o.v, Coeff::join(self.p, o.p))
    }
}

impl Coeff {
    fn reduce_if(v: BigRational, p: u64) -> Coeff {
        if p == 0 {
            Coeff { v, p }
        } else if v.is_integer() {
            let pb = BigInt::from(p);
            let n = v.to_integer();
            if n.sign() != num_bigint::Sign::Minus && n < pb {
                Coeff { v, p }
            } else {
                Coeff { v: BigRational::from_integer(n.mod_floor(&pb)), p }
            }
        } else {
            Coeff::reduce(v, p)
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_integer() {
            write!(f, "{}", self.v.numer())
        } else {
            write!(f, "{}/{}", self.v.numer(), self.v.denom())
        }
    }
}
