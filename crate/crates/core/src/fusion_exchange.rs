//! Fusion and exchange matrices for V_delta (x) V_gamma.
//!
//! Both operators preserve the total weight, so they are assembled as
//! block matrices indexed by s in 0..=gamma+delta; within block s the
//! basis vector v_{-delta+2a} (x) v_{-gamma+2(s-a)} is labelled by its
//! delta-factor index a in max(0,s-gamma)..=min(delta,s).
//!
//! Entry conventions:
//!   J       (a_out, a_in) = A_{a_out, a_in}           (upper triangular),
//!   J^{-1}  (a_out, a_in) = B_{a_out, a_in},
//!   R       (a_out, a_in) = C_{s-a_out, s-a_in}(lambda, gamma, delta, s),
//!   R^{-1}  (a_out, a_in) = C_{a_out, a_in}(lambda, delta, gamma, s),
//! with
//!   A_{m,n} = (-1)^{n-m} n! (-gamma+s-n)_{n-m}
//!               / ((n-m)! m! (-lambda-gamma+2s-2n)_{n-m}),
//!   B_{m,n} = n! (-gamma+s-n)_{n-m}
//!               / ((n-m)! m! (-lambda-gamma+2s-m-n-1)_{n-m}),
//!   C_{m,n}(lambda,gamma,delta,s)
//!           = sum_k B_{s-m,s-k}(lambda,gamma,s) A_{k,n}(lambda,delta,s),
//! for m <= n (A, B vanish for m > n).  C also has terminating 4F3 closed
//! forms, one valid for s <= delta and one for s >= delta; the 4F3 in the
//! first is a Racah polynomial R_m(x(x+lambda+delta-2s+1)) with parameters
//! (-gamma-1, -lambda-1, -s-1, lambda+delta-s+1).

use std::collections::BTreeMap;

use crate::error::{CoreError, Result};
use crate::hyperg::{eval_terminating, f43};
use crate::intertwine::coeff_specials;
use crate::ratfield::{RatFunc, LAMBDA};
use crate::scalars::{factorial, pochhammer, Field, Rat};

fn sign<F: Field>(p: u32) -> F {
    if p % 2 == 0 {
        F::one()
    } else {
        -F::one()
    }
}

fn nongeneric(e: CoreError) -> CoreError {
    match e {
        CoreError::ZeroDenominator | CoreError::LowerParameterCollision => {
            CoreError::NonGenericLambda
        }
        other => other,
    }
}

/// A_{m,n} with gamma and s as field elements; the entry depends on
/// (lambda, gamma, s) only through lambda - gamma and gamma - s.
pub fn fusion_a<F: Field>(m: u32, n: u32, lambda: &F, gamma: &F, s: &F) -> Result<F> {
    if m > n {
        return Ok(F::zero());
    }
    let d = n - m;
    let top = s.clone() - gamma.clone() - F::from_int(n as i64);
    let bot = -lambda.clone() - gamma.clone() + F::from_int(2) * s.clone()
        - F::from_int(2 * n as i64);
    let num = sign::<F>(d) * F::from_rat(&factorial(n)) * pochhammer(&top, d);
    let den = F::from_rat(&(factorial(d) * factorial(m))) * pochhammer(&bot, d);
    num.div(&den).map_err(nongeneric)
}

/// B_{m,n}, the inverse matrix entries of (A_{m,n}).
pub fn fusion_b<F: Field>(m: u32, n: u32, lambda: &F, gamma: &F, s: &F) -> Result<F> {
    if m > n {
        return Ok(F::zero());
    }
    let d = n - m;
    let top = s.clone() - gamma.clone() - F::from_int(n as i64);
    let bot = -lambda.clone() - gamma.clone() + F::from_int(2) * s.clone()
        - F::from_int((m + n) as i64 + 1);
    let num = F::from_rat(&factorial(n)) * pochhammer(&top, d);
    let den = F::from_rat(&(factorial(d) * factorial(m))) * pochhammer(&bot, d);
    num.div(&den).map_err(nongeneric)
}

/// C_{m,n}(lambda, gamma, delta, s) by the defining double-product sum.
pub fn exchange_c_sum<F: Field>(
    m: u32,
    n: u32,
    lambda: &F,
    gamma: u32,
    delta: u32,
    s: u32,
) -> Result<F> {
    let gamma_f = F::from_int(gamma as i64);
    let delta_f = F::from_int(delta as i64);
    let s_f = F::from_int(s as i64);
    let lo = (s as i64 - delta as i64).max(0) as u32;
    let mut acc = F::zero();
    for k in lo..=m.min(n) {
        let b = fusion_b(s - m, s - k, lambda, &gamma_f, &s_f)?;
        let a = fusion_a(k, n, lambda, &delta_f, &s_f)?;
        acc = acc + b * a;
    }
    Ok(acc)
}

/// C_{m,n}(lambda, gamma, delta, s) by the terminating 4F3 closed forms.
pub fn exchange_c_closed<F: Field>(
    m: u32,
    n: u32,
    lambda: &F,
    gamma: u32,
    delta: u32,
    s: u32,
) -> Result<F> {
    let int = |x: i64| F::from_int(x);
    if s <= delta {
        let pre_num = sign::<F>(m)
            * pochhammer(&int(-(s as i64)), m)
            * pochhammer(&int(-(gamma as i64)), m)
            * pochhammer(&int(delta as i64 - s as i64 + 1), n);
        let pre_den = F::from_rat(&factorial(m))
            * pochhammer(&(-lambda.clone() - int(gamma as i64) + int(m as i64 - 1)), m)
            * pochhammer(
                &(-lambda.clone() - int(delta as i64) + int(2 * s as i64 - 2 * n as i64)),
                n,
            );
        let series = f43(
            [
                int(-(m as i64)),
                -lambda.clone() - int(gamma as i64) + int(m as i64 - 1),
                int(-(n as i64)),
                lambda.clone() + int(delta as i64 - 2 * s as i64 + n as i64 + 1),
            ],
            [
                int(-(s as i64)),
                int(-(gamma as i64)),
                int(delta as i64 - s as i64 + 1),
            ],
        );
        let f = eval_terminating(&series).map_err(nongeneric)?;
        pre_num.div(&pre_den).map_err(nongeneric).map(|p| p * f)
    } else {
        let e = s - delta; // s - delta > 0; requires m, n >= e
        if m < e || n < e {
            return Ok(F::zero());
        }
        let me = m - e; // m + delta - s
        let ne = n - e;
        let pre_num = sign::<F>(n + e)
            * pochhammer(&int(-(delta as i64)), me)
            * pochhammer(&int(s as i64 - gamma as i64 - delta as i64), me)
            * F::from_rat(&factorial(n));
        let pre_den = pochhammer(
            &(lambda.clone() + int(gamma as i64 - 2 * m as i64 + 2)),
            me,
        ) * pochhammer(&(lambda.clone() + int(n as i64 - s as i64 + 1)), ne)
            * F::from_rat(&(factorial(me) * factorial(e)));
        let series = f43(
            [
                int(-(me as i64)),
                -lambda.clone() - int(gamma as i64 + delta as i64) + int(s as i64 + m as i64 - 1),
                int(-(ne as i64)),
                lambda.clone() + int(n as i64 - s as i64 + 1),
            ],
            [
                int(-(delta as i64)),
                int(s as i64 - gamma as i64 - delta as i64),
                int(e as i64 + 1),
            ],
        );
        let f = eval_terminating(&series).map_err(nongeneric)?;
        pre_num.div(&pre_den).map_err(nongeneric).map(|p| p * f)
    }
}

/// Racah polynomial R_m(x(x+gd+1); alpha, beta, gp, dp) with gd = gp + dp,
/// as a terminating 4F3 at unit argument.
pub fn racah_eval<F: Field>(
    m: u32,
    x: u32,
    alpha: &F,
    beta: &F,
    gp: &F,
    dp: &F,
) -> Result<F> {
    let series = f43(
        [
            F::from_int(-(m as i64)),
            F::from_int(m as i64) + alpha.clone() + beta.clone() + F::one(),
            F::from_int(-(x as i64)),
            F::from_int(x as i64) + gp.clone() + dp.clone() + F::one(),
        ],
        [
            alpha.clone() + F::one(),
            beta.clone() + dp.clone() + F::one(),
            gp.clone() + F::one(),
        ],
    );
    eval_terminating(&series).map_err(nongeneric)
}

/// One weight block: delta-factor indices lo..=hi, entries row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Block<F: Field> {
    pub lo: u32,
    pub hi: u32,
    pub entries: Vec<F>,
}

impl<F: Field> Block<F> {
    pub fn dim(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn get(&self, a_out: u32, a_in: u32) -> &F {
        let d = self.dim();
        &self.entries[(a_out - self.lo) as usize * d + (a_in - self.lo) as usize]
    }
}

/// Weight-graded operator on V_delta (x) V_gamma.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedMatrix<F: Field> {
    pub delta: u32,
    pub gamma: u32,
    pub blocks: BTreeMap<u32, Block<F>>,
}

fn block_range(delta: u32, gamma: u32, s: u32) -> (u32, u32) {
    ((s as i64 - gamma as i64).max(0) as u32, delta.min(s))
}

impl<F: Field> WeightedMatrix<F> {
    /// Build from an entry function on (s, a_out, a_in).
    pub fn from_fn(
        delta: u32,
        gamma: u32,
        mut f: impl FnMut(u32, u32, u32) -> Result<F>,
    ) -> Result<Self> {
        let mut blocks = BTreeMap::new();
        for s in 0..=(delta + gamma) {
            let (lo, hi) = block_range(delta, gamma, s);
            let d = (hi - lo + 1) as usize;
            let mut entries = Vec::with_capacity(d * d);
            for a_out in lo..=hi {
                for a_in in lo..=hi {
                    entries.push(f(s, a_out, a_in)?);
                }
            }
            blocks.insert(s, Block { lo, hi, entries });
        }
        Ok(WeightedMatrix { delta, gamma, blocks })
    }

    pub fn identity(delta: u32, gamma: u32) -> Self {
        Self::from_fn(delta, gamma, |_, a, b| {
            Ok(if a == b { F::one() } else { F::zero() })
        })
        .expect("identity entries are total")
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.delta, self.gamma), (other.delta, other.gamma));
        Self::from_fn(self.delta, self.gamma, |s, a_out, a_in| {
            let (lo, hi) = block_range(self.delta, self.gamma, s);
            let mut acc = F::zero();
            for k in lo..=hi {
                acc = acc
                    + self.blocks[&s].get(a_out, k).clone()
                        * other.blocks[&s].get(k, a_in).clone();
            }
            Ok(acc)
        })
        .expect("entry products are total")
    }

    /// Dense matrix on the product basis, row/column index a*(gamma+1)+b
    /// for v_{-delta+2a} (x) v_{-gamma+2b}.
    pub fn to_dense(&self) -> Vec<Vec<F>> {
        let n = ((self.delta + 1) * (self.gamma + 1)) as usize;
        let mut dense = vec![vec![F::zero(); n]; n];
        for (&s, block) in &self.blocks {
            for a_out in block.lo..=block.hi {
                for a_in in block.lo..=block.hi {
                    let row = (a_out * (self.gamma + 1) + (s - a_out)) as usize;
                    let col = (a_in * (self.gamma + 1) + (s - a_in)) as usize;
                    dense[row][col] = block.get(a_out, a_in).clone();
                }
            }
        }
        dense
    }
}

/// Fusion matrix J_{delta,gamma}(lambda).
pub fn assemble_j<F: Field>(lambda: &F, delta: u32, gamma: u32) -> Result<WeightedMatrix<F>> {
    let gamma_f = F::from_int(gamma as i64);
    WeightedMatrix::from_fn(delta, gamma, |s, a_out, a_in| {
        fusion_a(a_out, a_in, lambda, &gamma_f, &F::from_int(s as i64))
    })
}

/// Inverse fusion matrix J_{delta,gamma}(lambda)^{-1}.
pub fn assemble_j_inv<F: Field>(
    lambda: &F,
    delta: u32,
    gamma: u32,
) -> Result<WeightedMatrix<F>> {
    let gamma_f = F::from_int(gamma as i64);
    WeightedMatrix::from_fn(delta, gamma, |s, a_out, a_in| {
        fusion_b(a_out, a_in, lambda, &gamma_f, &F::from_int(s as i64))
    })
}

/// Fusion matrix built from intertwiner coefficients: the leading term of
/// the composite M_lambda -> M_{lambda+gamma-2k} (x) V_gamma followed by
/// M_{lambda+gamma-2k} -> M' (x) V_delta carries coefficient
/// c_{r,0}(lambda, gamma, k) c_{0,r}(lambda+gamma-2k, delta, l) on the
/// tensor vector with delta-index l-r and gamma-index k+r.
pub fn fusion_from_intertwiners<F: Field>(
    lambda: &F,
    delta: u32,
    gamma: u32,
) -> Result<WeightedMatrix<F>> {
    let mut blocks = BTreeMap::new();
    for s in 0..=(delta + gamma) {
        let (lo, hi) = block_range(delta, gamma, s);
        let d = (hi - lo + 1) as usize;
        let mut entries = vec![F::zero(); d * d];
        for l in lo..=hi {
            let k = s - l;
            let shifted =
                lambda.clone() + F::from_int(gamma as i64) - F::from_int(2 * k as i64);
            let (row_c, _) = coeff_specials(lambda, gamma, k)?;
            let (_, col_c) = coeff_specials(&shifted, delta, l)?;
            for r in 0..=(gamma - k).min(l) {
                let a_out = l - r;
                if a_out < lo {
                    continue;
                }
                let idx = (a_out - lo) as usize * d + (l - lo) as usize;
                entries[idx] = row_c[r as usize].clone() * col_c[r as usize].clone();
            }
        }
        blocks.insert(s, Block { lo, hi, entries });
    }
    Ok(WeightedMatrix { delta, gamma, blocks })
}

/// Exchange matrix R_{delta,gamma}(lambda). With `oracle` the entries come
/// from the defining sum instead of the closed forms.
pub fn assemble_r<F: Field>(
    lambda: &F,
    delta: u32,
    gamma: u32,
    oracle: bool,
) -> Result<WeightedMatrix<F>> {
    WeightedMatrix::from_fn(delta, gamma, |s, a_out, a_in| {
        if oracle {
            exchange_c_sum(s - a_out, s - a_in, lambda, gamma, delta, s)
        } else {
            exchange_c_closed(s - a_out, s - a_in, lambda, gamma, delta, s)
        }
    })
}

/// Inverse exchange matrix R_{delta,gamma}(lambda)^{-1}
/// = P R_{gamma,delta}(lambda) P.
pub fn assemble_r_inv<F: Field>(
    lambda: &F,
    delta: u32,
    gamma: u32,
    oracle: bool,
) -> Result<WeightedMatrix<F>> {
    WeightedMatrix::from_fn(delta, gamma, |s, a_out, a_in| {
        if oracle {
            exchange_c_sum(a_out, a_in, lambda, delta, gamma, s)
        } else {
            exchange_c_closed(a_out, a_in, lambda, delta, gamma, s)
        }
    })
}

/// Biorthogonality of the exchange entries for s <= min(gamma, delta):
/// sum_x C_{m,x}(lambda,gamma,delta,s) C_{s-x,s-n}(lambda,delta,gamma,s)
/// = delta_{m,n}.
pub fn biorthogonality_check<F: Field>(
    lambda: &F,
    gamma: u32,
    delta: u32,
    s: u32,
) -> Result<bool> {
    assert!(s <= gamma.min(delta));
    for m in 0..=s {
        for n in 0..=s {
            let mut acc = F::zero();
            for x in 0..=s {
                acc = acc
                    + exchange_c_closed(m, x, lambda, gamma, delta, s)?
                        * exchange_c_closed(s - x, s - n, lambda, delta, gamma, s)?;
            }
            let expect = if m == n { F::one() } else { F::zero() };
            if acc != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

type QL = RatFunc<Rat>;
type Dense = Vec<Vec<QL>>;

fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![QL::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = out[i][j].clone() + a[i][k].clone() * b[k][j].clone();
            }
        }
    }
    out
}

/// R acting in slots (p, q) of V_{g[0]} (x) V_{g[1]} (x) V_{g[2]}, with the
/// argument lambda shifted by minus the weight of the remaining slot.
fn dense_r_slots(g: [u32; 3], p: usize, q: usize, shift_slot: Option<usize>) -> Result<Dense> {
    let lambda = QL::gen(LAMBDA);
    let dims = [g[0] + 1, g[1] + 1, g[2] + 1];
    let n = (dims[0] * dims[1] * dims[2]) as usize;
    let idx = |i: [u32; 3]| -> usize {
        ((i[0] * dims[1] + i[1]) * dims[2] + i[2]) as usize
    };
    let fixed = 3 - p - q;
    let mut out = vec![vec![QL::zero(); n]; n];
    for jf in 0..dims[fixed] {
        let r = if let Some(slot) = shift_slot {
            debug_assert_eq!(slot, fixed);
            let w = -(g[fixed] as i64) + 2 * jf as i64;
            assemble_r(&lambda.shift(&Rat::from_int(-w)), g[p], g[q], false)?
        } else {
            assemble_r(&lambda, g[p], g[q], false)?
        };
        let rd = r.to_dense();
        for a_in in 0..dims[p] {
            for b_in in 0..dims[q] {
                let col_pq = (a_in * dims[q] + b_in) as usize;
                let mut col_full = [0u32; 3];
                col_full[p] = a_in;
                col_full[q] = b_in;
                col_full[fixed] = jf;
                for a_out in 0..dims[p] {
                    for b_out in 0..dims[q] {
                        let v = &rd[(a_out * dims[q] + b_out) as usize][col_pq];
                        if v.is_zero() {
                            continue;
                        }
                        let mut row_full = [0u32; 3];
                        row_full[p] = a_out;
                        row_full[q] = b_out;
                        row_full[fixed] = jf;
                        out[idx(row_full)][idx(col_full)] = v.clone();
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Dynamical Yang-Baxter equation on V_{g[0]} (x) V_{g[1]} (x) V_{g[2]}:
/// R12(lambda - h3) R13(lambda) R23(lambda - h1)
///   = R23(lambda) R13(lambda - h2) R12(lambda), with symbolic lambda.
pub fn qdybe_check(g: [u32; 3]) -> Result<bool> {
    let r12_sh = dense_r_slots(g, 0, 1, Some(2))?;
    let r13 = dense_r_slots(g, 0, 2, None)?;
    let r23_sh = dense_r_slots(g, 1, 2, Some(0))?;
    let r23 = dense_r_slots(g, 1, 2, None)?;
    let r13_sh = dense_r_slots(g, 0, 2, Some(1))?;
    let r12 = dense_r_slots(g, 0, 1, None)?;
    let lhs = dense_mul(&dense_mul(&r12_sh, &r13), &r23_sh);
    let rhs = dense_mul(&dense_mul(&r23, &r13_sh), &r12);
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperg::whipple_transform;

    fn lam() -> QL {
        QL::gen(LAMBDA)
    }

    #[test]
    fn a_depends_only_on_two_differences() {
        // shifting lambda, gamma, s by the same constant fixes lambda-gamma
        // and gamma-s, so A must not change
        let l = lam();
        for m in 0..4u32 {
            for n in m..4u32 {
                let base = fusion_a(m, n, &l, &QL::from_int(3), &QL::from_int(2)).unwrap();
                for t in [1i64, 5, -2] {
                    let shifted = fusion_a(
                        m,
                        n,
                        &(l.clone() + QL::from_int(t)),
                        &QL::from_int(3 + t),
                        &QL::from_int(2 + t),
                    )
                    .unwrap();
                    assert_eq!(base, shifted, "m={m} n={n} t={t}");
                }
            }
        }
    }

    #[test]
    fn a_and_b_are_inverse_matrices() {
        let l = lam();
        for gamma in 0..=5i64 {
            for s in 0..=5i64 {
                let gf = QL::from_int(gamma);
                let sf = QL::from_int(s);
                let lo = (s - gamma).max(0) as u32;
                for m in lo..=5 {
                    for n in lo..=5 {
                        let mut ab = QL::zero();
                        let mut ba = QL::zero();
                        for k in m..=n.max(m) {
                            ab = ab
                                + fusion_a(m, k, &l, &gf, &sf).unwrap()
                                    * fusion_b(k, n, &l, &gf, &sf).unwrap();
                            ba = ba
                                + fusion_b(m, k, &l, &gf, &sf).unwrap()
                                    * fusion_a(k, n, &l, &gf, &sf).unwrap();
                        }
                        let expect = if m == n { QL::one() } else { QL::zero() };
                        assert_eq!(ab, expect, "AB gamma={gamma} s={s} m={m} n={n}");
                        assert_eq!(ba, expect, "BA gamma={gamma} s={s} m={m} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn j_and_j_inv_multiply_to_identity() {
        let l = lam();
        for delta in 0..=4u32 {
            for gamma in 0..=4u32 {
                let j = assemble_j(&l, delta, gamma).unwrap();
                let jinv = assemble_j_inv(&l, delta, gamma).unwrap();
                let id = WeightedMatrix::identity(delta, gamma);
                assert_eq!(j.mul(&jinv), id, "delta={delta} gamma={gamma}");
                assert_eq!(jinv.mul(&j), id, "delta={delta} gamma={gamma}");
            }
        }
    }

    #[test]
    fn j_matches_intertwiner_composition() {
        let l = lam();
        for delta in 0..=3u32 {
            for gamma in 0..=3u32 {
                let j = assemble_j(&l, delta, gamma).unwrap();
                let oracle = fusion_from_intertwiners(&l, delta, gamma).unwrap();
                assert_eq!(j, oracle, "delta={delta} gamma={gamma}");
            }
        }
    }

    #[test]
    fn j_block_gamma_delta_one() {
        let j = assemble_j(&lam(), 1, 1).unwrap();
        let b = &j.blocks[&1];
        // [[1, -1/(lambda+1)], [0, 1]]
        assert_eq!(*b.get(0, 0), QL::one());
        assert_eq!(
            *b.get(0, 1),
            -(lam() + QL::one()).inv().unwrap()
        );
        assert_eq!(*b.get(1, 0), QL::zero());
        assert_eq!(*b.get(1, 1), QL::one());
    }

    #[test]
    fn exchange_closed_matches_sum() {
        let l = lam();
        for gamma in 0..=4u32 {
            for delta in 0..=4u32 {
                for s in 0..=(gamma + delta) {
                    let lo = (s as i64 - delta as i64).max(0) as u32;
                    let hi = gamma.min(s);
                    for m in lo..=hi {
                        for n in lo..=hi {
                            let sum = exchange_c_sum(m, n, &l, gamma, delta, s).unwrap();
                            let closed =
                                exchange_c_closed(m, n, &l, gamma, delta, s).unwrap();
                            assert_eq!(
                                sum, closed,
                                "gamma={gamma} delta={delta} s={s} m={m} n={n}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn exchange_value_gamma_delta_one() {
        // C_{1,1}(lambda,1,1,1) = 1 - 1/(lambda+1)^2
        let c = exchange_c_closed(1, 1, &lam(), 1, 1, 1).unwrap();
        let expect = QL::one()
            - ((lam() + QL::one()) * (lam() + QL::one())).inv().unwrap();
        assert_eq!(c, expect);
    }

    #[test]
    fn r_matches_fusion_product() {
        // R = J^{-1} (P J_{gamma,delta} P) entrywise in each weight block
        let l = lam();
        for delta in 0..=3u32 {
            for gamma in 0..=3u32 {
                let jinv = assemble_j_inv(&l, delta, gamma).unwrap();
                let j_op = assemble_j(&l, gamma, delta).unwrap();
                let pjp = WeightedMatrix::from_fn(delta, gamma, |s, a_out, a_in| {
                    Ok(j_op.blocks[&s].get(s - a_out, s - a_in).clone())
                })
                .unwrap();
                let r = assemble_r(&l, delta, gamma, false).unwrap();
                assert_eq!(jinv.mul(&pjp), r, "delta={delta} gamma={gamma}");
            }
        }
    }

    #[test]
    fn r_inverse_pair() {
        let l = lam();
        for delta in 0..=3u32 {
            for gamma in 0..=3u32 {
                let r = assemble_r(&l, delta, gamma, false).unwrap();
                let rinv = assemble_r_inv(&l, delta, gamma, false).unwrap();
                let id = WeightedMatrix::identity(delta, gamma);
                assert_eq!(r.mul(&rinv), id, "delta={delta} gamma={gamma}");
                assert_eq!(rinv.mul(&r), id, "delta={delta} gamma={gamma}");
            }
        }
    }

    #[test]
    fn r_inverse_is_permuted_swapped_r() {
        let l = lam();
        for delta in 0..=3u32 {
            for gamma in 0..=3u32 {
                let rinv = assemble_r_inv(&l, delta, gamma, false).unwrap();
                let r_swap = assemble_r(&l, gamma, delta, false).unwrap();
                let perm = WeightedMatrix::from_fn(delta, gamma, |s, a_out, a_in| {
                    Ok(r_swap.blocks[&s].get(s - a_out, s - a_in).clone())
                })
                .unwrap();
                assert_eq!(rinv, perm, "delta={delta} gamma={gamma}");
            }
        }
    }

    #[test]
    fn biorthogonality() {
        let l = lam();
        for gamma in 0..=4u32 {
            for delta in 0..=4u32 {
                for s in 0..=gamma.min(delta) {
                    assert!(
                        biorthogonality_check(&l, gamma, delta, s).unwrap(),
                        "gamma={gamma} delta={delta} s={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn racah_matches_exchange_4f3() {
        // the 4F3 in the s <= delta closed form is the Racah polynomial
        // R_m(x(x+lambda+delta-2s+1); -gamma-1, -lambda-1, -s-1,
        // lambda+delta-s+1) at x = n
        let l = lam();
        for (gamma, delta, s) in [(3u32, 3u32, 2u32), (2, 4, 3), (4, 4, 4)] {
            for m in 0..=gamma.min(s) {
                for n in 0..=gamma.min(s) {
                    let series = f43(
                        [
                            QL::from_int(-(m as i64)),
                            -l.clone() - QL::from_int(gamma as i64)
                                + QL::from_int(m as i64 - 1),
                            QL::from_int(-(n as i64)),
                            l.clone()
                                + QL::from_int(
                                    delta as i64 - 2 * s as i64 + n as i64 + 1,
                                ),
                        ],
                        [
                            QL::from_int(-(s as i64)),
                            QL::from_int(-(gamma as i64)),
                            QL::from_int(delta as i64 - s as i64 + 1),
                        ],
                    );
                    let direct = eval_terminating(&series).unwrap();
                    let racah = racah_eval(
                        m,
                        n,
                        &(-QL::from_int(gamma as i64 + 1)),
                        &(-l.clone() - QL::one()),
                        &(-QL::from_int(s as i64 + 1)),
                        &(l.clone() + QL::from_int(delta as i64 - s as i64 + 1)),
                    )
                    .unwrap();
                    assert_eq!(direct, racah, "m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn double_whipple_relates_inverse_entries() {
        // Two Whipple transforms rewrite the 4F3 underlying
        // C_{s-m,s-n}(lambda,delta,gamma,s) in terms of the one underlying
        // C_{n,m}(lambda,gamma,delta,s) (s <= min(gamma,delta)).
        let l = lam();
        for (gamma, delta, s) in [(3u32, 3u32, 2u32), (4, 3, 3), (2, 2, 2)] {
            for m in 0..=s {
                for n in 0..=s {
                    let int = |x: i64| QL::from_int(x);
                    let start = f43(
                        [
                            int(n as i64 - s as i64),
                            l.clone() + int(gamma as i64 - s as i64 - n as i64 + 1),
                            int(m as i64 - s as i64),
                            -l.clone() + int(s as i64 - delta as i64 - m as i64 - 1),
                        ],
                        [
                            int(-(s as i64)),
                            int(-(delta as i64)),
                            int(gamma as i64 - s as i64 + 1),
                        ],
                    );
                    let (p1, step1) = whipple_transform(&start).unwrap();
                    // reorder so the second transform terminates at -m
                    let mid = f43(
                        [
                            step1.upper[2].clone(),
                            step1.upper[3].clone(),
                            step1.upper[0].clone(),
                            step1.upper[1].clone(),
                        ],
                        [
                            step1.lower[0].clone(),
                            step1.lower[1].clone(),
                            step1.lower[2].clone(),
                        ],
                    );
                    let (p2, step2) = whipple_transform(&mid).unwrap();
                    let lhs = eval_terminating(&start).unwrap();
                    let rhs = p1 * p2 * eval_terminating(&step2).unwrap();
                    assert_eq!(lhs, rhs, "m={m} n={n}");

                    // final series is the one from the s <= delta closed
                    // form with m and n swapped (up to the known prefactor)
                    let target = f43(
                        [
                            int(-(m as i64)),
                            l.clone() + int(delta as i64 - 2 * s as i64 + m as i64 + 1),
                            int(-(n as i64)),
                            -l.clone() + int(n as i64 - gamma as i64 - 1),
                        ],
                        [
                            int(-(s as i64)),
                            int(-(gamma as i64)),
                            int(delta as i64 - s as i64 + 1),
                        ],
                    );
                    assert_eq!(
                        eval_terminating(&step2).unwrap(),
                        eval_terminating(&target).unwrap(),
                        "m={m} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn dybe_small_dims() {
        assert!(qdybe_check([1, 1, 1]).unwrap());
        assert!(qdybe_check([2, 1, 1]).unwrap());
        assert!(qdybe_check([1, 2, 1]).unwrap());
    }
}
