//! Arbitrary-precision rationals and the field abstraction every other
//! module is generic over, plus the combinatorial primitives (factorial,
//! binomial, Pochhammer) used throughout.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{CoreError, Result};

/// A field with an integer embedding. Implemented by `Rat` and by
/// `RatFunc<F>` over any field `F`, so the same formulas run over Q,
/// Q(lambda) and Q(mu)(u).
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    /// Exact embedding of a rational scalar (integer embeddings can overflow
    /// `i64` for factorial prefactors, this one cannot).
    fn from_rat(r: &Rat) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Result<Self>;

    /// Returns `Some(n)` when the element is the integer `n`.
    /// Used to recognize termination witnesses of hypergeometric series.
    fn as_int(&self) -> Option<i64>;

    fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * other.inv()?)
    }
}

/// Exact rational scalar: reduced fraction with positive denominator.
#[derive(Clone, PartialEq, Eq, Debug, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigint(n: BigInt) -> Rat {
        Rat(BigRational::from_integer(n))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Add for Rat {
    type Output = Rat;
    fn add(self, rhs: Rat) -> Rat {
        Rat(self.0 + rhs.0)
    }
}

impl Sub for Rat {
    type Output = Rat;
    fn sub(self, rhs: Rat) -> Rat {
        Rat(self.0 - rhs.0)
    }
}

impl Mul for Rat {
    type Output = Rat;
    fn mul(self, rhs: Rat) -> Rat {
        Rat(self.0 * rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Field for Rat {
    fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    fn one() -> Rat {
        Rat(BigRational::one())
    }

    fn from_int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    fn from_rat(r: &Rat) -> Rat {
        r.clone()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn inv(&self) -> Result<Rat> {
        if self.0.is_zero() {
            return Err(CoreError::ZeroDenominator);
        }
        Ok(Rat(self.0.recip()))
    }

    fn as_int(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_int(n)
    }
}

/// Rising factorial `(a)_n = a (a+1) ... (a+n-1)`, with `(a)_0 = 1`.
pub fn pochhammer<F: Field>(a: &F, n: u32) -> F {
    let mut acc = F::one();
    for i in 0..n {
        acc = acc * (a.clone() + F::from_int(i as i64));
    }
    acc
}

/// `n!` as an exact rational.
pub fn factorial(n: u32) -> Rat {
    let mut acc = BigInt::one();
    for i in 2..=n as u64 {
        acc *= BigInt::from(i);
    }
    Rat::from_bigint(acc)
}

/// Binomial coefficient `C(n, k)` for `0 <= k <= n`.
pub fn binomial(n: u32, k: u32) -> Rat {
    assert!(k <= n);
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= BigRational::new(BigInt::from(n - i), BigInt::from(i + 1));
    }
    assert!(acc.is_integer() && acc.is_positive() || k == 0);
    Rat(acc)
}

/// Falling factorial `k!/(k-i)!`; zero when `i > k`.
pub fn falling(k: u32, i: u32) -> Rat {
    if i > k {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..i {
        acc *= BigInt::from(k - j);
    }
    Rat::from_bigint(acc)
}
