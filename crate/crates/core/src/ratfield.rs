//! Univariate polynomials and reduced rational functions over an arbitrary
//! coefficient field.
//!
//! `RatFunc<Rat>` is Q(lambda) (or Q(mu), ...); `RatFunc<RatFunc<Rat>>` is a
//! two-level tower such as Q(mu)(u) or Q(lambda)(h). Reduced forms are
//! canonical (gcd = 1, monic denominator), so `==` is a valid field equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{CoreError, Result};
use crate::scalars::Field;

/// Symbolic variable tag. Arithmetic between polynomials requires equal tags;
/// constants carry the wildcard tag `ANY` and unify with anything.
#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord, Hash)]
pub struct Var(pub &'static str);

pub const ANY: Var = Var("_");
pub const LAMBDA: Var = Var("lambda");
pub const MU: Var = Var("mu");
pub const U: Var = Var("u");
pub const H: Var = Var("h");

impl Var {
    fn unify(self, other: Var) -> Var {
        if self == other || other == ANY {
            self
        } else if self == ANY {
            other
        } else {
            panic!("variable mismatch: {} vs {}", self.0, other.0);
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Dense univariate polynomial, lowest degree first, trailing zeros trimmed.
/// The zero polynomial has an empty coefficient list. A polynomial of degree
/// zero (or the zero polynomial) is normalized to the wildcard variable.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<F: Field> {
    var: Var,
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(var: Var, mut coeffs: Vec<F>) -> Poly<F> {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        let var = if coeffs.len() <= 1 { ANY } else { var };
        Poly { var, coeffs }
    }

    pub fn zero() -> Poly<F> {
        Poly { var: ANY, coeffs: vec![] }
    }

    pub fn constant(c: F) -> Poly<F> {
        Poly::new(ANY, vec![c])
    }

    pub fn one() -> Poly<F> {
        Poly::constant(F::one())
    }

    /// The monomial `x` in the given variable.
    pub fn gen(var: Var) -> Poly<F> {
        assert!(var != ANY);
        Poly { var, coeffs: vec![F::zero(), F::one()] }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; -1 for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &F) -> Poly<F> {
        Poly::new(
            self.var,
            self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        )
    }

    pub fn eval(&self, x0: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x0.clone() + c.clone();
        }
        acc
    }

    /// Substitute `x -> a*x + b`.
    pub fn subst_linear(&self, a: &F, b: &F) -> Poly<F> {
        let lin = Poly::new(self.var, vec![b.clone(), a.clone()]);
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_poly(&lin).add_poly(&Poly::constant(c.clone()));
        }
        acc
    }

    pub fn map_coeffs<G: Field>(&self, f: &impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.var, self.coeffs.iter().map(f).collect())
    }

    pub fn add_poly(&self, other: &Poly<F>) -> Poly<F> {
        let var = self.var.unify(other.var);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Poly::new(var, coeffs)
    }

    pub fn neg_poly(&self) -> Poly<F> {
        Poly::new(self.var, self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub_poly(&self, other: &Poly<F>) -> Poly<F> {
        self.add_poly(&other.neg_poly())
    }

    pub fn mul_poly(&self, other: &Poly<F>) -> Poly<F> {
        let var = self.var.unify(other.var);
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(var, coeffs)
    }

    pub fn pow(&self, n: u32) -> Poly<F> {
        let mut acc = Poly::one();
        for _ in 0..n {
            acc = acc.mul_poly(self);
        }
        acc
    }

    /// Polynomial long division; the divisor must be nonzero.
    pub fn divrem(&self, d: &Poly<F>) -> (Poly<F>, Poly<F>) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let var = self.var.unify(d.var);
        let dl = d.leading().unwrap().inv().expect("leading coeff invertible");
        let mut rem = self.coeffs.clone();
        let dd = d.degree() as usize;
        if rem.len() < dd + 1 {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = rem[i].clone() * dl.clone();
            quot[i - dd] = q.clone();
            for j in 0..=dd {
                rem[i - dd + j] = rem[i - dd + j].clone() - q.clone() * d.coeff(j);
            }
        }
        (Poly::new(var, quot), Poly::new(var, rem))
    }

    fn monic(&self) -> Poly<F> {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coeff")),
        }
    }

    /// Monic gcd via the Euclidean algorithm over the coefficient field.
    pub fn gcd(&self, other: &Poly<F>) -> Poly<F> {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.monic();
        }
        a
    }
}

/// Collapse a "(A)/(B)" rendering of an inner-field constant: drop a unit
/// denominator entirely and rejoin plain literal fractions as "A/B".
fn simplify_quotient(s: &str) -> String {
    let plain = |t: &str| {
        t.chars()
            .enumerate()
            .all(|(i, ch)| ch.is_ascii_digit() || ch == '/' || (i == 0 && ch == '-'))
    };
    if !(s.starts_with('(') && s.ends_with(')')) {
        return s.to_string();
    }
    let bytes = s.as_bytes();
    let mut depth = 0usize;
    for i in 0..bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                // top-level ")/(" split between numerator and denominator
                if depth == 0 {
                    if i + 2 < bytes.len() && &s[i..i + 3] == ")/(" {
                        let a = &s[1..i];
                        let b = &s[i + 3..s.len() - 1];
                        if b == "1" {
                            return a.to_string();
                        }
                        if plain(a) && plain(b) {
                            return format!("{a}/{b}");
                        }
                    }
                    return s.to_string();
                }
            }
            _ => {}
        }
    }
    s.to_string()
}

fn fmt_term<F: Field>(c: &F, var: Var, deg: usize, first: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let s = simplify_quotient(&c.to_string());
    // bare rendering only for plain integer/fraction literals
    let bare = s.chars().enumerate().all(|(i, ch)| ch.is_ascii_digit() || ch == '/' || (i == 0 && ch == '-'));
    let (neg, mag) = if bare && s.starts_with('-') {
        (true, s[1..].to_string())
    } else {
        (false, if bare { s.clone() } else { format!("({s})") })
    };
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    let one = mag == "1";
    match deg {
        0 => write!(f, "{mag}"),
        1 if one => write!(f, "{var}"),
        1 => write!(f, "{mag}*{var}"),
        _ if one => write!(f, "{var}^{deg}"),
        _ => write!(f, "{mag}*{var}^{deg}"),
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            fmt_term(c, self.var, deg, first, f)?;
            first = false;
        }
        Ok(())
    }
}

/// Reduced rational function: `num/den` with gcd(num, den) = 1 and monic
/// denominator, so equal values have equal representations.
#[derive(Clone, PartialEq, Debug)]
pub struct RatFunc<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<RatFunc<F>> {
        if den.is_zero() {
            return Err(CoreError::ZeroDenominator);
        }
        num.var().unify(den.var());
        let mut r = RatFunc { num, den };
        r.reduce();
        Ok(r)
    }

    pub fn from_poly(p: Poly<F>) -> RatFunc<F> {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: F) -> RatFunc<F> {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// The generator `x` of the field `F(x)`.
    pub fn gen(var: Var) -> RatFunc<F> {
        RatFunc::from_poly(Poly::gen(var))
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn var(&self) -> Var {
        self.num.var().unify(self.den.var())
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = Poly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree() > 0 {
            self.num = self.num.divrem(&g).0;
            self.den = self.den.divrem(&g).0;
        }
        let l = self.den.leading().unwrap().inv().expect("nonzero leading");
        self.num = self.num.scale(&l);
        self.den = self.den.scale(&l);
    }

    pub fn is_constant(&self) -> bool {
        self.num.degree() <= 0 && self.den.degree() <= 0
    }

    /// The constant value, when the element lies in the coefficient field.
    pub fn as_constant(&self) -> Option<F> {
        if self.is_constant() {
            // den is monic of degree 0, hence exactly 1
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// Substitute `x -> x + c`.
    pub fn shift(&self, c: &F) -> RatFunc<F> {
        self.subst_linear(&F::one(), c)
    }

    /// Substitute `x -> a*x + b` with `a != 0`.
    pub fn subst_linear(&self, a: &F, b: &F) -> RatFunc<F> {
        RatFunc::new(self.num.subst_linear(a, b), self.den.subst_linear(a, b))
            .expect("nonzero denominator preserved by invertible substitution")
    }

    pub fn eval(&self, x0: &F) -> Result<F> {
        let d = self.den.eval(x0);
        if d.is_zero() {
            return Err(CoreError::EvalAtPole);
        }
        self.num.eval(x0).div(&d)
    }

    /// Apply a field map to every coefficient (e.g. an inner-variable
    /// substitution in a tower).
    pub fn map_coeffs<G: Field>(&self, f: &impl Fn(&F) -> G) -> Result<RatFunc<G>> {
        RatFunc::new(self.num.map_coeffs(f), self.den.map_coeffs(f))
    }

    pub fn pow(&self, n: i64) -> Result<RatFunc<F>> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc * base.clone();
        }
        Ok(acc)
    }

    /// Laurent expansion at infinity: coefficients of `x^-j` for
    /// `j0 <= j <= jmax`, where `j0 = deg(den) - deg(num)`.
    pub fn laurent_at_infinity(&self, jmax: i64) -> BTreeMap<i64, F> {
        let mut out = BTreeMap::new();
        if self.num.is_zero() {
            return out;
        }
        let j0 = self.den.degree() - self.num.degree();
        if jmax < j0 {
            return out;
        }
        // reversed-coefficient power series division in w = 1/x
        let order = (jmax - j0) as usize;
        let nrev: Vec<F> = self.num.coeffs().iter().rev().cloned().collect();
        let drev: Vec<F> = self.den.coeffs().iter().rev().cloned().collect();
        let d0inv = drev[0].inv().expect("nonzero leading denominator coeff");
        let mut series: Vec<F> = Vec::with_capacity(order + 1);
        for i in 0..=order {
            let mut acc = nrev.get(i).cloned().unwrap_or_else(F::zero);
            for k in 1..=i.min(drev.len() - 1) {
                acc = acc - drev[k].clone() * series[i - k].clone();
            }
            series.push(acc * d0inv.clone());
        }
        for (i, c) in series.into_iter().enumerate() {
            out.insert(j0 + i as i64, c);
        }
        out
    }
}

impl<F: Field> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl<F: Field> Add for RatFunc<F> {
    type Output = RatFunc<F>;
    fn add(self, rhs: RatFunc<F>) -> RatFunc<F> {
        let num = self
            .num
            .mul_poly(&rhs.den)
            .add_poly(&rhs.num.mul_poly(&self.den));
        RatFunc::new(num, self.den.mul_poly(&rhs.den)).expect("nonzero denominator")
    }
}

impl<F: Field> Sub for RatFunc<F> {
    type Output = RatFunc<F>;
    fn sub(self, rhs: RatFunc<F>) -> RatFunc<F> {
        self + (-rhs)
    }
}

impl<F: Field> Mul for RatFunc<F> {
    type Output = RatFunc<F>;
    fn mul(self, rhs: RatFunc<F>) -> RatFunc<F> {
        RatFunc::new(self.num.mul_poly(&rhs.num), self.den.mul_poly(&rhs.den))
            .expect("nonzero denominator")
    }
}

impl<F: Field> Neg for RatFunc<F> {
    type Output = RatFunc<F>;
    fn neg(self) -> RatFunc<F> {
        RatFunc { num: self.num.neg_poly(), den: self.den }
    }
}

impl<F: Field> Field for RatFunc<F> {
    fn zero() -> RatFunc<F> {
        RatFunc::from_poly(Poly::zero())
    }

    fn one() -> RatFunc<F> {
        RatFunc::from_poly(Poly::one())
    }

    fn from_int(n: i64) -> RatFunc<F> {
        RatFunc::constant(F::from_int(n))
    }

    fn from_rat(r: &crate::scalars::Rat) -> RatFunc<F> {
        RatFunc::constant(F::from_rat(r))
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn inv(&self) -> Result<RatFunc<F>> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    fn as_int(&self) -> Option<i64> {
        self.as_constant().and_then(|c| c.as_int())
    }
}
