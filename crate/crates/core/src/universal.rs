//! Truncated universal fusion matrix and the operator Q(lambda).
//!
//! The universal fusion matrix and its inverse are
//!   J(lambda)      = sum_n f^n (x) (-1)^n/(n! (lambda-h+n+1)_n) e^n,
//!   J(lambda)^{-1} = sum_n f^n (x) 1/(n! (lambda-h+2)_n) e^n,
//! stored here by their coefficient sequences g_n in Q(lambda)(h), with h
//! the outer variable so that the h-shifts arising from moving powers of e
//! across coefficients (e^l g(h) = g(h-2l) e^l) are plain outer shifts.
//! On any tensor product of finite-dimensional modules the series
//! truncates, and evaluating h at the weight of e^n . v reproduces the
//! finite fusion matrices.
//!
//! Q(lambda) = (m o P o (1 (x) S^{-1})) J(lambda)
//!           = sum_n e^n 1/(n! (lambda+h+n+1)_n) f^n
//! acts on V_gamma diagonally with eigenvalue
//! (-lambda-k-1)_k / (-lambda+gamma-2k)_k on v_{-gamma+2k}.

use crate::error::{CoreError, Result};
use crate::fusion_exchange::WeightedMatrix;
use crate::ratfield::{RatFunc, H, LAMBDA};
use crate::scalars::{factorial, falling, pochhammer, Field, Rat};

/// Rational functions of h with coefficients in Q(lambda).
pub type QLH = RatFunc<RatFunc<Rat>>;

fn h() -> QLH {
    QLH::gen(H)
}

fn lam() -> QLH {
    QLH::constant(RatFunc::gen(LAMBDA))
}

fn inner(x: i64) -> RatFunc<Rat> {
    RatFunc::from_int(x)
}

/// sum_n f^n (x) terms[n](h) e^n, truncated after n_max.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedUniversal {
    pub n_max: u32,
    pub terms: Vec<QLH>,
}

impl TruncatedUniversal {
    /// Coefficient product of two truncated series: moving e^l across the
    /// second coefficient shifts its h argument by -2l, so
    /// c_n(h) = sum_l a_l(h) b_{n-l}(h - 2l).
    pub fn mul(&self, other: &TruncatedUniversal) -> TruncatedUniversal {
        let n_max = self.n_max.min(other.n_max);
        let mut terms = Vec::with_capacity(n_max as usize + 1);
        for n in 0..=n_max {
            let mut c = QLH::zero();
            for l in 0..=n {
                let b = other.terms[(n - l) as usize].shift(&inner(-2 * l as i64));
                c = c + self.terms[l as usize].clone() * b;
            }
            terms.push(c);
        }
        TruncatedUniversal { n_max, terms }
    }

    pub fn identity(n_max: u32) -> TruncatedUniversal {
        let mut terms = vec![QLH::zero(); n_max as usize + 1];
        terms[0] = QLH::one();
        TruncatedUniversal { n_max, terms }
    }
}

/// J(lambda) truncated after n_max.
pub fn universal_j(n_max: u32) -> TruncatedUniversal {
    let terms = (0..=n_max)
        .map(|n| {
            let sgn = if n % 2 == 0 { QLH::one() } else { -QLH::one() };
            let arg = lam() - h() + QLH::from_int(n as i64 + 1);
            sgn.div(&(QLH::from_rat(&factorial(n)) * pochhammer(&arg, n)))
                .expect("pochhammer in h is nonzero")
        })
        .collect();
    TruncatedUniversal { n_max, terms }
}

/// J(lambda)^{-1} truncated after n_max.
pub fn universal_j_inv(n_max: u32) -> TruncatedUniversal {
    let terms = (0..=n_max)
        .map(|n| {
            let arg = lam() - h() + QLH::from_int(2);
            QLH::one()
                .div(&(QLH::from_rat(&factorial(n)) * pochhammer(&arg, n)))
                .expect("pochhammer in h is nonzero")
        })
        .collect();
    TruncatedUniversal { n_max, terms }
}

/// Q(lambda) coefficients 1/(n! (lambda+h+n+1)_n), truncated after n_max.
pub fn universal_q(n_max: u32) -> TruncatedUniversal {
    let terms = (0..=n_max)
        .map(|n| {
            let arg = lam() + h() + QLH::from_int(n as i64 + 1);
            QLH::one()
                .div(&(QLH::from_rat(&factorial(n)) * pochhammer(&arg, n)))
                .expect("pochhammer in h is nonzero")
        })
        .collect();
    TruncatedUniversal { n_max, terms }
}

/// Q(lambda) obtained from J(lambda) by the antipode pipeline
/// m o P o (1 (x) S^{-1}): the n-th coefficient becomes (-1)^n g_n(-h).
pub fn universal_q_from_j(n_max: u32) -> TruncatedUniversal {
    let j = universal_j(n_max);
    let terms = j
        .terms
        .iter()
        .enumerate()
        .map(|(n, g)| {
            let sgn = if n % 2 == 0 { QLH::one() } else { -QLH::one() };
            sgn * g.subst_linear(&(-inner(1)), &inner(0))
        })
        .collect();
    TruncatedUniversal { n_max, terms }
}

/// Evaluate a truncated universal element on V_delta (x) V_gamma with
/// symbolic lambda: term n sends v_{-delta+2a} (x) v_{-gamma+2b} to
/// f^n v (x) g_n(wt + 2n) e^n w. Requires n_max >= min(delta, gamma).
pub fn apply_universal(
    u: &TruncatedUniversal,
    delta: u32,
    gamma: u32,
) -> Result<WeightedMatrix<RatFunc<Rat>>> {
    if u.n_max < delta.min(gamma) {
        return Err(CoreError::TruncationTooLow);
    }
    WeightedMatrix::from_fn(delta, gamma, |s, a_out, a_in| {
        if a_out > a_in {
            return Ok(RatFunc::zero());
        }
        let p = a_in - a_out;
        // f^p on the delta factor and e^p on the gamma factor (index s-a_in)
        let f_part = RatFunc::from_rat(&falling(a_in, p));
        let b = s - a_in;
        let sgn = if p % 2 == 0 { Rat::one() } else { -Rat::one() };
        let e_part = RatFunc::constant(
            sgn * pochhammer(&(Rat::from_int(b as i64 - gamma as i64)), p),
        );
        let wt = -(gamma as i64) + 2 * b as i64 + 2 * p as i64;
        let g = u.terms[p as usize].eval(&inner(wt))?;
        Ok(f_part * e_part * g)
    })
}

/// Eigenvalue of Q(lambda) on v_{-gamma+2k}, in closed form.
pub fn q_eigenvalue<F: Field>(lambda: &F, gamma: u32, k: u32) -> Result<F> {
    let num = pochhammer(&(-lambda.clone() - F::from_int(k as i64 + 1)), k);
    let den = pochhammer(
        &(-lambda.clone() + F::from_int(gamma as i64 - 2 * k as i64)),
        k,
    );
    if den.is_zero() {
        return Err(CoreError::NonGenericLambda);
    }
    num.div(&den)
}

/// Eigenvalue of Q(lambda) on v_{-gamma+2k} by summing the defining series
/// term by term with the explicit e/f powers.
pub fn q_eigenvalue_oracle<F: Field>(lambda: &F, gamma: u32, k: u32) -> Result<F> {
    let mut acc = F::zero();
    for n in 0..=k {
        // f^n v_k = k!/(k-n)! v_{k-n}, e^n v_{k-n} = (-1)^n (-gamma+k-n)_n v_k,
        // coefficient evaluated at h = wt(f^n v) = -gamma + 2(k-n)
        let sgn = if n % 2 == 0 { F::one() } else { -F::one() };
        let num = sgn
            * pochhammer(&F::from_int(k as i64 - n as i64 - gamma as i64), n)
            * F::from_rat(&falling(k, n));
        let den = F::from_rat(&factorial(n))
            * pochhammer(
                &(lambda.clone()
                    + F::from_int(2 * k as i64 - gamma as i64 - n as i64 + 1)),
                n,
            );
        if den.is_zero() {
            return Err(CoreError::NonGenericLambda);
        }
        acc = acc + num.div(&den)?;
    }
    Ok(acc)
}
