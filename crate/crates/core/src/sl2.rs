//! Finite-dimensional sl(2) irreps V_gamma with explicit e, f, h actions.
//!
//! The basis of V_gamma is v_{-gamma+2k} for k = 0..gamma, with
//!   h.v_k = (-gamma+2k) v_k,  f.v_k = k v_{k-1},  e.v_k = (gamma-k) v_{k+1},
//! and the closed-form powers
//!   e^i.v_k = (-1)^i (-gamma+k)_i v_{k+i},   f^i.v_k = k!/(k-i)! v_{k-i}.

use std::collections::BTreeMap;

use crate::scalars::{binomial, falling, pochhammer, Field, Rat};

/// Basis vector v^gamma_{-gamma+2k} with an attached coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct IrrepVector {
    pub gamma: u32,
    pub k: u32,
}

impl IrrepVector {
    pub fn new(gamma: u32, k: u32) -> IrrepVector {
        assert!(k <= gamma, "index out of range");
        IrrepVector { gamma, k }
    }

    pub fn weight(&self) -> i64 {
        -(self.gamma as i64) + 2 * self.k as i64
    }
}

/// Which sl(2) generator acts.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Gen {
    E,
    F,
    H,
}

/// Sparse linear combination of basis vectors of a single V_gamma,
/// keyed by k; zero coefficients are pruned so equality is structural.
#[derive(Clone, Debug, PartialEq)]
pub struct Lin<F: Field> {
    pub gamma: u32,
    pub terms: BTreeMap<u32, F>,
}

impl<F: Field> Lin<F> {
    pub fn zero(gamma: u32) -> Lin<F> {
        Lin { gamma, terms: BTreeMap::new() }
    }

    pub fn basis(gamma: u32, k: u32) -> Lin<F> {
        Lin::monomial(gamma, k, F::one())
    }

    pub fn monomial(gamma: u32, k: u32, c: F) -> Lin<F> {
        assert!(k <= gamma);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Lin { gamma, terms }
    }

    pub fn add_term(&mut self, k: u32, c: F) {
        assert!(k <= self.gamma);
        let cur = self.terms.remove(&k).unwrap_or_else(F::zero);
        let sum = cur + c;
        if !sum.is_zero() {
            self.terms.insert(k, sum);
        }
    }

    pub fn add(&self, other: &Lin<F>) -> Lin<F> {
        assert_eq!(self.gamma, other.gamma);
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &F) -> Lin<F> {
        let mut out = Lin::zero(self.gamma);
        for (&k, v) in &self.terms {
            out.add_term(k, v.clone() * c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Single generator action.
    pub fn act(&self, g: Gen) -> Lin<F> {
        let gamma = self.gamma;
        let mut out = Lin::zero(gamma);
        for (&k, c) in &self.terms {
            match g {
                Gen::H => out.add_term(k, c.clone() * F::from_int(-(gamma as i64) + 2 * k as i64)),
                Gen::F => {
                    if k > 0 {
                        out.add_term(k - 1, c.clone() * F::from_int(k as i64));
                    }
                }
                Gen::E => {
                    if k < gamma {
                        out.add_term(k + 1, c.clone() * F::from_int((gamma - k) as i64));
                    }
                }
            }
        }
        out
    }

    /// Closed-form power action for e^i or f^i.
    pub fn act_power(&self, g: Gen, i: u32) -> Lin<F> {
        let gamma = self.gamma;
        let mut out = Lin::zero(gamma);
        for (&k, c) in &self.terms {
            match g {
                Gen::E => {
                    if k + i <= gamma {
                        let coeff = act_e_power_coeff(gamma, k, i);
                        out.add_term(k + i, c.clone() * f_from_rat::<F>(&coeff));
                    }
                }
                Gen::F => {
                    if i <= k {
                        out.add_term(k - i, c.clone() * f_from_rat::<F>(&falling(k, i)));
                    }
                }
                Gen::H => panic!("act_power is defined for e and f only"),
            }
        }
        out
    }
}

/// e^i coefficient: (-1)^i (-gamma+k)_i.
fn act_e_power_coeff(gamma: u32, k: u32, i: u32) -> Rat {
    let sign = if i % 2 == 0 { Rat::from_int(1) } else { Rat::from_int(-1) };
    sign * pochhammer(&Rat::from_int(-(gamma as i64) + k as i64), i)
}

fn f_from_rat<F: Field>(r: &Rat) -> F {
    // exact rationals occurring here are integers (weights, falling factorials)
    let n = r.as_int().expect("integer action coefficient");
    F::from_int(n)
}

/// Checks e f^n = f^n e + n f^{n-1} (h - n + 1) on the given basis vector.
pub fn ad_identity_check(n: u32, probe: &IrrepVector) -> bool {
    assert!(n >= 1);
    let v: Lin<Rat> = Lin::basis(probe.gamma, probe.k);
    let lhs = v.act_power(Gen::F, n).act(Gen::E);
    let t1 = v.act(Gen::E).act_power(Gen::F, n);
    let scaled = v.scale(&Rat::from_int(probe.weight() - n as i64 + 1));
    let t2 = scaled.act_power(Gen::F, n - 1).scale(&Rat::from_int(n as i64));
    lhs == t1.add(&t2)
}

/// Tensor-index bookkeeping on V_delta (x) V_gamma: basis vector
/// v^delta_{-delta+2n} (x) v^gamma_{-gamma+2(s-n)} in the total-weight-s block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TensorIndex {
    pub delta: u32,
    pub gamma: u32,
    pub s: u32,
    pub n: u32,
}

impl TensorIndex {
    pub fn new(delta: u32, gamma: u32, s: u32, n: u32) -> TensorIndex {
        assert!(s <= gamma + delta);
        assert!(n >= s.saturating_sub(gamma) && n <= delta.min(s), "n outside weight block");
        TensorIndex { delta, gamma, s, n }
    }

    /// Index in the gamma factor.
    pub fn gamma_index(&self) -> u32 {
        self.s - self.n
    }
}

/// Sparse element of V_delta (x) V_gamma keyed by (delta-index, gamma-index).
#[derive(Clone, Debug, PartialEq)]
pub struct Lin2<F: Field> {
    pub delta: u32,
    pub gamma: u32,
    pub terms: BTreeMap<(u32, u32), F>,
}

impl<F: Field> Lin2<F> {
    pub fn zero(delta: u32, gamma: u32) -> Lin2<F> {
        Lin2 { delta, gamma, terms: BTreeMap::new() }
    }

    pub fn basis(delta: u32, gamma: u32, a: u32, b: u32) -> Lin2<F> {
        let mut out = Lin2::zero(delta, gamma);
        out.add_term(a, b, F::one());
        out
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: F) {
        assert!(a <= self.delta && b <= self.gamma);
        let cur = self.terms.remove(&(a, b)).unwrap_or_else(F::zero);
        let sum = cur + c;
        if !sum.is_zero() {
            self.terms.insert((a, b), sum);
        }
    }

    /// Single application of g via the coproduct: g.(w(x)v) = gw(x)v + w(x)gv.
    pub fn act(&self, g: Gen) -> Lin2<F> {
        let mut out = Lin2::zero(self.delta, self.gamma);
        for (&(a, b), c) in &self.terms {
            let left: Lin<F> = Lin::monomial(self.delta, a, c.clone()).act(g);
            for (&a2, c2) in &left.terms {
                out.add_term(a2, b, c2.clone());
            }
            let right: Lin<F> = Lin::monomial(self.gamma, b, c.clone()).act(g);
            for (&b2, c2) in &right.terms {
                out.add_term(a, b2, c2.clone());
            }
        }
        out
    }

    /// g^n via the binomial Leibniz expansion
    /// g^n.(w(x)v) = sum_j C(n,j) (g^j.w)(x)(g^{n-j}.v).
    pub fn act_power_leibniz(&self, g: Gen, n: u32) -> Lin2<F> {
        assert!(g != Gen::H);
        let mut out = Lin2::zero(self.delta, self.gamma);
        for (&(a, b), c) in &self.terms {
            for j in 0..=n {
                let left: Lin<F> = Lin::basis(self.delta, a).act_power(g, j);
                let right: Lin<F> = Lin::basis(self.gamma, b).act_power(g, n - j);
                let cnj = f_from_rat::<F>(&binomial(n, j));
                for (&a2, cl) in &left.terms {
                    for (&b2, cr) in &right.terms {
                        out.add_term(a2, b2, c.clone() * cnj.clone() * cl.clone() * cr.clone());
                    }
                }
            }
        }
        out
    }
}
