//! Weighted trace functions for V_gamma (gamma even) at q = 1, as exact
//! elements of Q(mu)(u) with u = e^{lambda/2}.
//!
//! With the exponential prefactor e^{lambda*mu/2} (resp. e^{-lambda*mu/2})
//! stripped, the trace of the zero-weight intertwiner and the weighted
//! trace function have the closed bodies
//!   psi_gamma = (1-u^-2)^{-1} 2F1[-gamma/2, gamma/2+1; -mu; (1-u^2)^{-1}],
//!   F_gamma   = (-1)^{gamma/2} (mu+1)_{gamma/2} / (-mu+1)_{gamma/2}
//!               * 2F1[-gamma/2, gamma/2+1; mu+1; (1-u^2)^{-1}],
//! and alternative forms obtained by Pfaff's transformation, here evaluated
//! exactly by first applying Euler's transformation to make the series in
//! t = u^-2 terminate.  F_gamma also arises from psi_gamma by the defining
//! pipeline F = (1 (x) Q^{-1}(-mu-1)) Psi(lambda, -mu-1) delta(lambda).
//!
//! The dual Macdonald-Ruijsenaars operator for the pair (V_delta, V_gamma)
//! is the difference operator
//!   D = sum_{s=gamma/2}^{gamma/2+delta}
//!         C_{gamma/2,gamma/2}(-mu-1, gamma, delta, s) T_{-delta-gamma+2s},
//! and D F_gamma(., mu) = chi_delta(e^{-lambda}) F_gamma(., mu).
//! For delta = 1 this reduces to a contiguous relation in the parameter c
//! of the Gauss series.

use crate::error::{CoreError, Result};
use crate::fusion_exchange::exchange_c_closed;
use crate::hyperg::{eval_terminating, f21};
use crate::ratfield::{RatFunc, MU, U};
use crate::scalars::{pochhammer, Field, Rat};
use crate::universal::q_eigenvalue;

/// Q(mu), rational functions of the weight parameter.
pub type QMu = RatFunc<Rat>;
/// Q(mu)(u), rational functions of u = e^{lambda/2} over Q(mu).
pub type QMuU = RatFunc<QMu>;

fn u() -> QMuU {
    QMuU::gen(U)
}

fn mu() -> QMuU {
    QMuU::constant(RatFunc::gen(MU))
}

fn sign(p: u32) -> QMuU {
    if p % 2 == 0 {
        QMuU::one()
    } else {
        -QMuU::one()
    }
}

/// Substitute mu -> a*mu + b in every coefficient.
fn subst_mu(f: &QMuU, a: i64, b: i64) -> QMuU {
    f.map_coeffs(&|c: &QMu| c.subst_linear(&Rat::from_int(a), &Rat::from_int(b)))
        .expect("invertible substitution preserves nonzero denominators")
}

fn require_even(gamma: u32) -> Result<u32> {
    if gamma % 2 != 0 {
        return Err(CoreError::InvalidConfig(format!(
            "gamma must be even, got {gamma}"
        )));
    }
    Ok(gamma / 2)
}

/// Body of Psi_gamma(lambda, mu), the series prefactor stripped.
pub fn psi_body(gamma: u32) -> Result<QMuU> {
    let g2 = require_even(gamma)?;
    let arg = (QMuU::one() - u() * u()).inv()?;
    let series = f21(
        QMuU::from_int(-(g2 as i64)),
        QMuU::from_int(g2 as i64 + 1),
        -mu(),
        arg,
    );
    let pre = (QMuU::one() - u().pow(-2)?).inv()?;
    Ok(pre * eval_terminating(&series)?)
}

/// Body of Psi_gamma from the series in t = u^-2: the non-terminating
/// 2F1[gamma/2-mu, gamma/2+1; -mu; t] is first rewritten by Euler's
/// transformation as (1-t)^{-gamma-1} 2F1[-gamma/2, -mu-gamma/2-1; -mu; t].
pub fn psi_body_alt(gamma: u32) -> Result<QMuU> {
    let g2 = require_even(gamma)?;
    let t = u().pow(-2)?;
    let series = f21(
        QMuU::from_int(-(g2 as i64)),
        -mu() - QMuU::from_int(g2 as i64 + 1),
        -mu(),
        t.clone(),
    );
    let pre = (QMuU::one() - t).pow(-(g2 as i64) - 1)?;
    Ok(pre * eval_terminating(&series)?)
}

/// Prefactor (-1)^{gamma/2} (mu+1)_{gamma/2} / (-mu+1)_{gamma/2}.
fn f_prefactor(g2: u32) -> Result<QMuU> {
    let num = sign(g2) * pochhammer(&(mu() + QMuU::one()), g2);
    let den = pochhammer(&(-mu() + QMuU::one()), g2);
    num.div(&den)
}

/// Body of the weighted trace function F_gamma(lambda, mu).
pub fn f_body(gamma: u32) -> Result<QMuU> {
    let g2 = require_even(gamma)?;
    let arg = (QMuU::one() - u() * u()).inv()?;
    let series = f21(
        QMuU::from_int(-(g2 as i64)),
        QMuU::from_int(g2 as i64 + 1),
        mu() + QMuU::one(),
        arg,
    );
    Ok(f_prefactor(g2)? * eval_terminating(&series)?)
}

/// Body of F_gamma from the series in t = u^-2, with the non-terminating
/// 2F1[gamma/2+mu+1, gamma/2+1; mu+1; t] rewritten by Euler's
/// transformation as (1-t)^{-gamma-1} 2F1[-gamma/2, mu-gamma/2; mu+1; t].
pub fn f_body_alt(gamma: u32) -> Result<QMuU> {
    let g2 = require_even(gamma)?;
    let t = u().pow(-2)?;
    let series = f21(
        QMuU::from_int(-(g2 as i64)),
        mu() - QMuU::from_int(g2 as i64),
        mu() + QMuU::one(),
        t.clone(),
    );
    let pre = (QMuU::one() - t).pow(-(g2 as i64))?;
    Ok(f_prefactor(g2)? * pre * eval_terminating(&series)?)
}

/// Body of F_gamma by the defining pipeline: Q^{-1}(-mu-1) on the zero
/// weight space, Psi at mu -> -mu-1, and the Weyl denominator u - u^-1
/// (whose u^{-mu...} prefactors combine into one factor u^-1 here).
pub fn f_body_pipeline(gamma: u32) -> Result<QMuU> {
    let g2 = require_even(gamma)?;
    let q: QMuU = q_eigenvalue(&(-mu() - QMuU::one()), gamma, g2)?;
    let psi_sub = subst_mu(&psi_body(gamma)?, -1, -1);
    Ok(q.inv()? * psi_sub * u().pow(-1)? * (u() - u().pow(-1)?))
}

/// Character chi_delta as a Laurent polynomial in u: sum_k u^{delta-2k}.
pub fn character(delta: u32) -> QMuU {
    let mut acc = QMuU::zero();
    for k in 0..=delta {
        acc = acc + u().pow(delta as i64 - 2 * k as i64).expect("u is invertible");
    }
    acc
}

/// Weyl-quotient form of the character:
/// (u^{delta+1} - u^{-delta-1}) / (u - u^{-1}).
pub fn character_weyl_quotient(delta: u32) -> Result<QMuU> {
    let num = u().pow(delta as i64 + 1)? - u().pow(-(delta as i64) - 1)?;
    num.div(&(u() - u().pow(-1)?))
}

/// Shifts and coefficients of the dual Macdonald-Ruijsenaars operator for
/// (V_delta, V_gamma): pairs (nu_s, C_{gamma/2,gamma/2}(-mu-1, gamma,
/// delta, s)) for s = gamma/2 .. gamma/2+delta.
pub fn mr_coeffs(gamma: u32, delta: u32) -> Result<Vec<(i64, QMu)>> {
    let g2 = require_even(gamma)?;
    let lam = -QMu::gen(MU) - QMu::one();
    let mut out = Vec::with_capacity(delta as usize + 1);
    for s in g2..=(g2 + delta) {
        let nu = -(delta as i64) - gamma as i64 + 2 * s as i64;
        let c = exchange_c_closed(g2, g2, &lam, gamma, delta, s)?;
        out.push((nu, c));
    }
    Ok(out)
}

/// Verify the dual Macdonald-Ruijsenaars equation on the closed body:
/// sum_s c_s(mu) u^{-nu_s} F(u, mu+nu_s) = chi_delta F(u, mu).
pub fn mr_check(gamma: u32, delta: u32) -> Result<bool> {
    let body = f_body(gamma)?;
    let mut lhs = QMuU::zero();
    for (nu, c) in mr_coeffs(gamma, delta)? {
        let shifted = subst_mu(&body, 1, nu);
        lhs = lhs + QMuU::constant(c) * u().pow(-nu)? * shifted;
    }
    Ok(lhs == character(delta) * body)
}

/// Contiguous relation in c for a terminating Gauss series:
/// c(c-1)(z-1) F(c-1) + c(c-1-(2c-a-b-1)z) F(c) + (c-a)(c-b)z F(c+1) = 0.
pub fn contiguous_check<F: Field>(a: &F, b: &F, c: &F, z: &F) -> Result<bool> {
    let one = F::one();
    let f = |cc: F| -> Result<F> {
        eval_terminating(&f21(a.clone(), b.clone(), cc, z.clone()))
    };
    let t1 = c.clone()
        * (c.clone() - one.clone())
        * (z.clone() - one.clone())
        * f(c.clone() - one.clone())?;
    let mid = c.clone() - one.clone()
        - (F::from_int(2) * c.clone() - a.clone() - b.clone() - one.clone()) * z.clone();
    let t2 = c.clone() * mid * f(c.clone())?;
    let t3 =
        (c.clone() - a.clone()) * (c.clone() - b.clone()) * z.clone() * f(c.clone() + one)?;
    Ok((t1 + t2 + t3).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intertwine::coeff_closed;

    #[test]
    fn psi_gamma_zero() {
        // (1 - u^-2)^{-1}
        let expect = (QMuU::one() - u().pow(-2).unwrap()).inv().unwrap();
        assert_eq!(psi_body(0).unwrap(), expect);
    }

    #[test]
    fn pfaff_forms_agree() {
        for gamma in [0u32, 2, 4, 6] {
            assert_eq!(psi_body(gamma).unwrap(), psi_body_alt(gamma).unwrap());
            assert_eq!(f_body(gamma).unwrap(), f_body_alt(gamma).unwrap());
        }
    }

    #[test]
    fn odd_gamma_rejected() {
        assert!(matches!(psi_body(3), Err(CoreError::InvalidConfig(_))));
    }

    #[test]
    fn pipeline_matches_closed_form() {
        for gamma in [0u32, 2, 4, 6] {
            assert_eq!(f_body_pipeline(gamma).unwrap(), f_body(gamma).unwrap());
        }
    }

    #[test]
    fn psi_laurent_coefficients_are_diagonal_intertwiner_entries() {
        // psi = sum_n c_{n,n}(mu, gamma, gamma/2) u^{-2n}
        for gamma in [0u32, 2, 4] {
            let body = psi_body(gamma).unwrap();
            let coeffs = body.laurent_at_infinity(16);
            for n in 0..=8i64 {
                let expect =
                    coeff_closed(n, n, &QMu::gen(MU), gamma, gamma / 2).unwrap();
                let got = coeffs.get(&(2 * n)).cloned().unwrap_or_else(QMu::zero);
                assert_eq!(got, expect, "gamma={gamma} n={n}");
                if n > 0 {
                    let odd = coeffs.get(&(2 * n - 1)).cloned().unwrap_or_else(QMu::zero);
                    assert!(odd.is_zero(), "gamma={gamma} odd coefficient {n}");
                }
            }
        }
    }

    #[test]
    fn character_forms_agree() {
        for delta in 0..=5u32 {
            assert_eq!(character(delta), character_weyl_quotient(delta).unwrap());
        }
    }

    #[test]
    fn mr_delta_one_coefficients() {
        // s = gamma/2 + 1 gives 1; s = gamma/2 gives
        // (mu - gamma/2 - 1)(mu + gamma/2) / ((mu - 1) mu)
        for gamma in [0u32, 2, 4, 6] {
            let g2 = (gamma / 2) as i64;
            let coeffs = mr_coeffs(gamma, 1).unwrap();
            let m = QMu::gen(MU);
            assert_eq!(coeffs[1], (1, QMu::one()));
            let num = (m.clone() - QMu::from_int(g2 + 1)) * (m.clone() + QMu::from_int(g2));
            let den = (m.clone() - QMu::one()) * m.clone();
            assert_eq!(coeffs[0], (-1, num.div(&den).unwrap()), "gamma={gamma}");
        }
    }

    #[test]
    fn mr_equation_holds() {
        for gamma in [0u32, 2, 4] {
            for delta in 0..=3u32 {
                assert!(mr_check(gamma, delta).unwrap(), "gamma={gamma} delta={delta}");
            }
        }
    }

    #[test]
    fn contiguous_relation() {
        // n = 0 is trivial; n = 1 with rational b; symbolic b over Q(b)(z)
        type QB = RatFunc<Rat>;
        type QBZ = RatFunc<QB>;
        let z = QBZ::gen(U);
        let b = QBZ::constant(QB::gen(MU));
        assert!(contiguous_check(
            &QBZ::zero(),
            &QBZ::from_int(5),
            &QBZ::from_int(7),
            &z
        )
        .unwrap());
        assert!(contiguous_check(
            &(-QBZ::one()),
            &QBZ::from_int(2),
            &(b.clone() + QBZ::from_int(3)),
            &z
        )
        .unwrap());
        assert!(contiguous_check(&QBZ::from_int(-3), &b, &(b.clone() * QBZ::from_int(2) + QBZ::from_int(5)), &z).unwrap());
    }

    #[test]
    fn mr_delta_one_is_the_contiguous_relation() {
        // the delta = 1 equation in mu for F_gamma is equation (69) in c for
        // the Gauss body with a = -gamma/2, b = gamma/2+1, c = mu+1,
        // z = (1-u^2)^{-1}; both sides are verified independently here
        for gamma in [2u32, 4, 6] {
            assert!(mr_check(gamma, 1).unwrap());
            let g2 = (gamma / 2) as i64;
            let z = (QMuU::one() - u() * u()).inv().unwrap();
            assert!(contiguous_check(
                &QMuU::from_int(-g2),
                &QMuU::from_int(g2 + 1),
                &(mu() + QMuU::one()),
                &z
            )
            .unwrap());
        }
    }

    #[test]
    fn mr_gamma_two_delta_two_uses_both_branches() {
        // s runs over 1, 2, 3 with delta = 2, so both closed-form branches
        // of the exchange coefficients are exercised
        let coeffs = mr_coeffs(2, 2).unwrap();
        assert_eq!(coeffs.len(), 3);
        assert_eq!(coeffs[2], (2, QMu::one()));
        assert!(mr_check(2, 2).unwrap());
    }
}
