use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::mono::Monomial;
use super::poly::{fmt_monomial, fmt_rat, rat_pow, Coeff, LaurentPolynomial};
use super::ratfunc::RationalFunction;
use super::vars::Vars;
use crate::error::{Error, Result};

/// `coeff * x^mono * prod f^e` with every `f` normalized by
/// [`LaurentPolynomial::normalize_factor`], so equal factors collide and cancel.
#[derive(Clone, PartialEq, Eq)]
pub struct FactoredRational {
    vars: Vars,
    coeff: Coeff,
    mono: Monomial,
    factors: BTreeMap<LaurentPolynomial, i32>,
}

impl FactoredRational {
    pub fn constant(vars: &Vars, c: Coeff) -> Self {
        FactoredRational {
            vars: vars.clone(),
            coeff: c,
            mono: Monomial::one(vars.len()),
            factors: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Coeff::one())
    }

    pub fn zero(vars: &Vars) -> Self {
        Self::constant(vars, Coeff::zero())
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: Coeff) -> Self {
        let mut r = Self::constant(vars, c);
        r.mono = m;
        r
    }

    pub fn from_poly(p: &LaurentPolynomial) -> Self {
        Self::one(p.vars())
            .mul_poly_pow(p, 1)
            .expect("positive power never divides by zero")
    }

    /// `1 - c x^m`.
    pub fn one_minus(vars: &Vars, m: Monomial, c: Coeff) -> Self {
        Self::from_poly(&LaurentPolynomial::one_minus(vars, m, c))
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn coeff(&self) -> &Coeff {
        &self.coeff
    }

    pub fn mono(&self) -> &Monomial {
        &self.mono
    }

    pub fn factors(&self) -> &BTreeMap<LaurentPolynomial, i32> {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Exact valuation in the graded variables `q, t` (`None` for zero).
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let graded = super::graded_indices(&self.vars);
        let mut v = self.mono.degree_in(&graded);
        for (f, &e) in &self.factors {
            let (lo, _) = f.graded_range(&graded)?;
            v += e as i64 * lo;
        }
        Some(v)
    }

    pub fn is_one(&self) -> bool {
        self.coeff.is_one() && self.mono.is_one() && self.factors.is_empty()
    }

    /// Multiply by `p^e`.
    pub fn mul_poly_pow(&self, p: &LaurentPolynomial, e: i32) -> Result<Self> {
        let mut out = self.clone();
        if e == 0 {
            return Ok(out);
        }
        let Some((c, m, f)) = p.normalize_factor() else {
            if e < 0 {
                return Err(Error::DivisionByZero);
            }
            return Ok(Self::zero(&self.vars));
        };
        if out.is_zero() {
            return Ok(out);
        }
        out.coeff *= rat_pow(&c, e).expect("normalized content is nonzero");
        out.mono = out.mono.mul(&m.pow(e));
        if !f.is_one() {
            out.insert_factor(f, e);
        }
        Ok(out)
    }

    fn insert_factor(&mut self, f: LaurentPolynomial, e: i32) {
        let v = self.factors.entry(f).or_insert(0);
        *v += e;
        if *v == 0 {
            self.factors.retain(|_, e| *e != 0);
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.vars, o.vars);
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.vars);
        }
        let mut out = self.clone();
        out.coeff *= &o.coeff;
        out.mono = out.mono.mul(&o.mono);
        for (f, &e) in &o.factors {
            out.insert_factor(f.clone(), e);
        }
        out
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FactoredRational {
            vars: self.vars.clone(),
            coeff: self.coeff.recip(),
            mono: self.mono.inv(),
            factors: self.factors.iter().map(|(f, e)| (f.clone(), -e)).collect(),
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        if self.is_zero() {
            return Ok(if e == 0 {
                Self::one(&self.vars)
            } else {
                self.clone()
            });
        }
        Ok(FactoredRational {
            vars: self.vars.clone(),
            coeff: rat_pow(&self.coeff, e).expect("nonnegative power"),
            mono: self.mono.pow(e),
            factors: self
                .factors
                .iter()
                .map(|(f, m)| (f.clone(), m * e))
                .collect(),
        })
    }

    /// `coeff * x^mono * prod_{e>0} f^e`, expanded.
    pub fn numerator(&self) -> LaurentPolynomial {
        let mut acc = LaurentPolynomial::term(&self.vars, self.mono.clone(), self.coeff.clone());
        for (f, &e) in &self.factors {
            if e > 0 {
                acc = acc.mul(&f.pow(e as u32));
            }
        }
        acc
    }

    /// `prod_{e<0} f^{-e}`, expanded.
    pub fn denominator(&self) -> LaurentPolynomial {
        let mut acc = LaurentPolynomial::one(&self.vars);
        for (f, &e) in &self.factors {
            if e < 0 {
                acc = acc.mul(&f.pow((-e) as u32));
            }
        }
        acc
    }

    pub fn den_factors(&self) -> impl Iterator<Item = (&LaurentPolynomial, u32)> {
        self.factors
            .iter()
            .filter(|(_, &e)| e < 0)
            .map(|(f, &e)| (f, (-e) as u32))
    }

    /// Substitute variables by monomials of `target`, renormalizing factors.
    pub fn map_monomials(&self, target: &Vars, images: &[Monomial]) -> Result<Self> {
        let mono = LaurentPolynomial::term(&self.vars, self.mono.clone(), self.coeff.clone())
            .map_monomials(target, images);
        let mut out = Self::from_poly(&mono);
        for (f, &e) in &self.factors {
            out = out.mul_poly_pow(&f.map_monomials(target, images), e)?;
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[Coeff]) -> Option<Coeff> {
        let mut v = LaurentPolynomial::term(&self.vars, self.mono.clone(), self.coeff.clone())
            .eval(point)?;
        for (f, &e) in &self.factors {
            v *= rat_pow(&f.eval(point)?, e)?;
        }
        Some(v)
    }

    pub fn to_ratfunc(&self) -> RationalFunction {
        RationalFunction::from_factored(self)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vars": self.vars.names(),
            "coef": fmt_rat(&self.coeff),
            "mono": self.mono.exps(),
            "factors": self.factors.iter().rev().map(|(f, e)| serde_json::json!({
                "poly": f.to_json(),
                "mult": e,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Decide equality of two factored values: cancel common factors, then
/// cross-multiply and compare the expansions.
pub fn rational_eq(a: &FactoredRational, b: &FactoredRational) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    let r = a.div(b).expect("b is nonzero");
    if r.factors.is_empty() {
        return r.coeff.is_one() && r.mono.is_one();
    }
    r.numerator() == r.denominator()
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Coeff> {
    (0..n)
        .map(|_| {
            let num: i64 = rng.random_range(-997..=997);
            let den: i64 = rng.random_range(1..=991);
            Coeff::new(num.into(), den.into())
        })
        .collect()
}

/// Compare values at `samples` seeded random rational points. Never a proof
/// of equality; points where either side is undefined are skipped.
pub fn rational_eq_probabilistic(
    a: &FactoredRational,
    b: &FactoredRational,
    seed: u64,
    samples: usize,
) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).all(|_| {
        let point = random_point(&mut rng, a.vars().len());
        match (a.eval(&point), b.eval(&point)) {
            (Some(x), Some(y)) => x == y,
            _ => true,
        }
    })
}

/// [`rational_eq_probabilistic`] for sums.
pub fn ratfunc_eq_probabilistic(
    a: &RationalFunction,
    b: &RationalFunction,
    seed: u64,
    samples: usize,
) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).all(|_| {
        let point = random_point(&mut rng, a.vars().len());
        match (a.eval(&point), b.eval(&point)) {
            (Some(x), Some(y)) => x == y,
            _ => true,
        }
    })
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{}", fmt_rat(&self.coeff))?;
        let m = fmt_monomial(&self.vars, &self.mono);
        if !m.is_empty() {
            write!(f, "*{m}")?;
        }
        for (p, e) in self.factors.iter().rev() {
            if *e == 1 {
                write!(f, "*({p})")?;
            } else {
                write!(f, "*({p})^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat;

    fn qt() -> Vars {
        Vars::new(["q", "t"])
    }

    fn om(v: &Vars, e: &[i32]) -> FactoredRational {
        FactoredRational::one_minus(v, Monomial::from_slice(e), rat(1))
    }

    #[test]
    fn inverse_binomials_share_a_factor() {
        let v = qt();
        // (1 - q) / (1 - q^-1) = -q
        let r = om(&v, &[1, 0]).div(&om(&v, &[-1, 0])).unwrap();
        assert!(r.factors().is_empty());
        assert_eq!(r.coeff(), &rat(-1));
        assert_eq!(r.mono(), &Monomial::from_slice(&[1, 0]));
    }

    #[test]
    fn equality_by_cross_multiplication() {
        let v = qt();
        let a = om(&v, &[2, 0]).div(&om(&v, &[1, 0])).unwrap();
        let one_plus_q = FactoredRational::from_poly(
            &LaurentPolynomial::one(&v).add(&LaurentPolynomial::var(&v, 0)),
        );
        assert!(rational_eq(&a, &one_plus_q));
        let b = om(&v, &[1, 1]).div(&om(&v, &[1, 0])).unwrap();
        let c = om(&v, &[1, 1]).div(&om(&v, &[0, 1])).unwrap();
        assert!(!rational_eq(&b, &c));
        assert!(rational_eq_probabilistic(&a, &one_plus_q, 7, 4));
        assert!(!rational_eq_probabilistic(&b, &c, 7, 4));
    }

    #[test]
    fn zero_denominator_is_an_error() {
        let v = qt();
        let z = LaurentPolynomial::zero(&v);
        assert_eq!(
            FactoredRational::one(&v).mul_poly_pow(&z, -1),
            Err(Error::DivisionByZero)
        );
        assert!(FactoredRational::one(&v)
            .mul_poly_pow(&z, 2)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn substitution_can_collapse_a_factor() {
        let v = Vars::new(["q", "z"]);
        let f = FactoredRational::one_minus(&v, Monomial::from_slice(&[0, 1]), rat(1));
        // z -> q^0 makes 1 - z vanish.
        let images = [Monomial::from_slice(&[1, 0]), Monomial::from_slice(&[0, 0])];
        assert!(f.map_monomials(&v, &images).unwrap().is_zero());
        assert!(f.inv().unwrap().map_monomials(&v, &images).is_err());
    }
}
