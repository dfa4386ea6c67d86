//! Exact evaluation of terminating hypergeometric series pFq(z) and the
//! classical identities used downstream (Chu-Vandermonde, Whipple's
//! balanced 4F3 transform).
//!
//! Termination is always witnessed by a literal nonpositive-integer upper
//! parameter; symbolic upper parameters never terminate a series. When
//! several witnesses exist the smallest bound wins.

use crate::error::{CoreError, Result};
use crate::scalars::{pochhammer, Field};

/// A pFq(z) with parameters in an arbitrary field.
#[derive(Clone, Debug)]
pub struct HypSeries<F: Field> {
    pub upper: Vec<F>,
    pub lower: Vec<F>,
    pub arg: F,
}

impl<F: Field> HypSeries<F> {
    pub fn new(upper: Vec<F>, lower: Vec<F>, arg: F) -> HypSeries<F> {
        HypSeries { upper, lower, arg }
    }

    /// Termination order: the smallest `-a` over upper parameters `a` that
    /// are nonpositive integers.
    pub fn termination_order(&self) -> Result<u32> {
        self.upper
            .iter()
            .filter_map(|a| a.as_int().filter(|&n| n <= 0))
            .map(|n| (-n) as u32)
            .min()
            .ok_or(CoreError::NonTerminating)
    }
}

/// Convenience constructor for 2F1(a, b; c; z).
pub fn f21<F: Field>(a: F, b: F, c: F, z: F) -> HypSeries<F> {
    HypSeries::new(vec![a, b], vec![c], z)
}

/// Convenience constructor for 3F2(a1, a2, a3; b1, b2; 1).
pub fn f32<F: Field>(upper: [F; 3], lower: [F; 2]) -> HypSeries<F> {
    HypSeries::new(upper.to_vec(), lower.to_vec(), F::one())
}

/// Convenience constructor for 4F3(a1..a4; b1..b3; 1).
pub fn f43<F: Field>(upper: [F; 4], lower: [F; 3]) -> HypSeries<F> {
    HypSeries::new(upper.to_vec(), lower.to_vec(), F::one())
}

/// Sum_{k=0}^{N} prod(upper)_k / (prod(lower)_k k!) z^k, exactly.
///
/// Errors with `LowerParameterCollision` if a lower Pochhammer factor
/// vanishes before the series terminates.
pub fn eval_terminating<F: Field>(s: &HypSeries<F>) -> Result<F> {
    let n = s.termination_order()?;
    let mut term = F::one();
    let mut sum = F::one();
    for k in 0..n {
        let kf = F::from_int(k as i64);
        let mut factor = s.arg.clone();
        for a in &s.upper {
            factor = factor * (a.clone() + kf.clone());
        }
        for b in &s.lower {
            let lf = b.clone() + kf.clone();
            if lf.is_zero() {
                return Err(CoreError::LowerParameterCollision);
            }
            factor = factor.div(&lf)?;
        }
        factor = factor.div(&F::from_int(k as i64 + 1))?;
        term = term * factor;
        sum = sum + term.clone();
    }
    Ok(sum)
}

/// Chu-Vandermonde: 2F1(-n, b; c; 1) = (c-b)_n / (c)_n.
pub fn chu_vandermonde<F: Field>(n: u32, b: &F, c: &F) -> Result<F> {
    let den = pochhammer(c, n);
    if den.is_zero() {
        return Err(CoreError::LowerParameterCollision);
    }
    pochhammer(&(c.clone() - b.clone()), n).div(&den)
}

/// Whipple's transform of a terminating balanced 4F3(1).
///
/// The termination witness `-n` must be the first upper parameter that is a
/// nonpositive integer; with upper `-n, a, b, c` and lower `d, e, f`
/// satisfying `a + b + c - n + 1 = d + e + f`, returns the prefactor
/// `(e-a)_n (f-a)_n / ((e)_n (f)_n)` and the series with upper
/// `-n, a, d-b, d-c` and lower `d, 1+a-e-n, 1+a-f-n`, of equal value.
pub fn whipple_transform<F: Field>(s: &HypSeries<F>) -> Result<(F, HypSeries<F>)> {
    if s.upper.len() != 4 || s.lower.len() != 3 || !(s.arg.clone() - F::one()).is_zero() {
        return Err(CoreError::BalanceViolated);
    }
    let witness = s
        .upper
        .iter()
        .position(|a| a.as_int().map_or(false, |v| v <= 0))
        .ok_or(CoreError::NonTerminating)?;
    let n = (-s.upper[witness].as_int().unwrap()) as u32;
    let mut rest = s.upper.clone();
    let neg_n = rest.remove(witness);
    let (a, b, c) = (rest[0].clone(), rest[1].clone(), rest[2].clone());
    let (d, e, f) = (s.lower[0].clone(), s.lower[1].clone(), s.lower[2].clone());
    // balance: a + b + c - n + 1 = d + e + f
    let balance = a.clone() + b.clone() + c.clone() + neg_n.clone() + F::one()
        - (d.clone() + e.clone() + f.clone());
    if !balance.is_zero() {
        return Err(CoreError::BalanceViolated);
    }
    let den = pochhammer(&e, n) * pochhammer(&f, n);
    if den.is_zero() {
        return Err(CoreError::LowerParameterCollision);
    }
    let pre = (pochhammer(&(e.clone() - a.clone()), n) * pochhammer(&(f.clone() - a.clone()), n))
        .div(&den)?;
    let shift = F::one() + a.clone() + neg_n;
    let transformed = f43(
        [F::from_int(-(n as i64)), a, d.clone() - b, d.clone() - c],
        [d, shift.clone() - e, shift - f],
    );
    Ok((pre, transformed))
}
