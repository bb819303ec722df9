use std::collections::BTreeMap;
use std::fmt;

use super::factored::FactoredRational;
use super::mono::Monomial;
use super::poly::{rat_pow, Coeff, LaurentPolynomial};
use super::vars::Vars;
use crate::error::{Error, Result};

/// An expanded numerator over a multiset of normalized denominator factors.
///
/// Sums are formed over the least common multiple of the factor multisets;
/// no gcd is ever computed, so the representation need not be reduced.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: LaurentPolynomial,
    den: BTreeMap<LaurentPolynomial, u32>,
}

impl RationalFunction {
    pub fn zero(vars: &Vars) -> Self {
        Self::from_poly(LaurentPolynomial::zero(vars))
    }

    pub fn one(vars: &Vars) -> Self {
        Self::from_poly(LaurentPolynomial::one(vars))
    }

    pub fn from_poly(p: LaurentPolynomial) -> Self {
        RationalFunction {
            num: p,
            den: BTreeMap::new(),
        }
    }

    pub fn from_factored(f: &FactoredRational) -> Self {
        if f.is_zero() {
            return Self::zero(f.vars());
        }
        RationalFunction {
            num: f.numerator(),
            den: f.den_factors().map(|(p, e)| (p.clone(), e)).collect(),
        }
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn num(&self) -> &LaurentPolynomial {
        &self.num
    }

    pub fn den(&self) -> &BTreeMap<LaurentPolynomial, u32> {
        &self.den
    }

    pub fn den_poly(&self) -> LaurentPolynomial {
        let mut acc = LaurentPolynomial::one(self.vars());
        for (f, &e) in &self.den {
            acc = acc.mul(&f.pow(e));
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value, if no denominator factor remains.
    pub fn as_poly(&self) -> Option<&LaurentPolynomial> {
        if self.den.is_empty() || self.num.is_zero() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// Sum over the lcm of all denominators; the result depends only on the
    /// multiset of summands, not on their order.
    pub fn sum<'a, I>(vars: &Vars, items: I) -> Self
    where
        I: IntoIterator<Item = &'a RationalFunction>,
    {
        let items: Vec<&RationalFunction> = items.into_iter().filter(|r| !r.is_zero()).collect();
        let mut lcm: BTreeMap<LaurentPolynomial, u32> = BTreeMap::new();
        for r in &items {
            for (f, &e) in &r.den {
                let slot = lcm.entry(f.clone()).or_insert(0);
                *slot = (*slot).max(e);
            }
        }
        let mut num = LaurentPolynomial::zero(vars);
        for r in &items {
            let mut t = r.num.clone();
            for (f, &e) in &lcm {
                let have = r.den.get(f).copied().unwrap_or(0);
                if e > have {
                    t = t.mul(&f.pow(e - have));
                }
            }
            num = num.add(&t);
        }
        if num.is_zero() {
            return Self::zero(vars);
        }
        RationalFunction { num, den: lcm }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::sum(self.vars(), [self, o])
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let num = self.num.scale(c);
        if num.is_zero() {
            return Self::zero(self.vars());
        }
        RationalFunction {
            num,
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &LaurentPolynomial) -> Self {
        let num = self.num.mul(p);
        if num.is_zero() {
            return Self::zero(self.vars());
        }
        RationalFunction {
            num,
            den: self.den.clone(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Self {
        self.mul_poly(&LaurentPolynomial::term(self.vars(), m.clone(), c.clone()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let num = self.num.mul(&o.num);
        if num.is_zero() {
            return Self::zero(self.vars());
        }
        let mut den = self.den.clone();
        for (f, &e) in &o.den {
            *den.entry(f.clone()).or_insert(0) += e;
        }
        RationalFunction { num, den }
    }

    pub fn mul_factored(&self, f: &FactoredRational) -> Self {
        self.mul(&Self::from_factored(f))
    }

    /// Cancel denominator factors that divide the numerator exactly.
    pub fn reduce(&self) -> Self {
        if self.num.is_zero() {
            return Self::zero(self.vars());
        }
        let mut num = self.num.clone();
        let mut den = BTreeMap::new();
        for (f, &e) in &self.den {
            let mut k = e;
            while k > 0 {
                match num.div_exact(f) {
                    Some(q) => {
                        num = q;
                        k -= 1;
                    }
                    None => break,
                }
            }
            if k > 0 {
                den.insert(f.clone(), k);
            }
        }
        RationalFunction { num, den }
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    pub fn map_monomials(&self, target: &Vars, images: &[Monomial]) -> Result<Self> {
        let mut num = self.num.map_monomials(target, images);
        let mut den = BTreeMap::new();
        for (f, &e) in &self.den {
            let (c, m, g) = f
                .map_monomials(target, images)
                .normalize_factor()
                .ok_or(Error::DivisionByZero)?;
            let unit = rat_pow(&c, -(e as i32)).expect("content is nonzero");
            num = num.mul_term(&m.pow(-(e as i32)), &unit);
            if !g.is_one() {
                *den.entry(g).or_insert(0) += e;
            }
        }
        Ok(RationalFunction { num, den })
    }

    pub fn eval(&self, point: &[Coeff]) -> Option<Coeff> {
        let mut v = self.num.eval(point)?;
        for (f, &e) in &self.den {
            v *= rat_pow(&f.eval(point)?, -(e as i32))?;
        }
        Some(v)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "num": self.num.to_json(),
            "den": self.den.iter().rev().map(|(f, e)| serde_json::json!({
                "poly": f.to_json(),
                "mult": e,
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/(", self.num)?;
        for (k, (p, e)) in self.den.iter().rev().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p})^{e}")?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::rat;

    #[test]
    fn partial_fractions_recombine() {
        let v = Vars::new(["q", "t"]);
        let om = |e: &[i32]| {
            FactoredRational::one_minus(&v, Monomial::from_slice(e), rat(1))
                .inv()
                .unwrap()
                .to_ratfunc()
        };
        // 1/(1-q) - 1/(1-t) = (q - t)/((1-q)(1-t))
        let lhs = om(&[1, 0]).sub(&om(&[0, 1]));
        let rhs_num = LaurentPolynomial::var(&v, 0).sub(&LaurentPolynomial::var(&v, 1));
        let rhs = RationalFunction::from_poly(rhs_num)
            .mul(&om(&[1, 0]))
            .mul(&om(&[0, 1]));
        assert!(lhs.equals(&rhs));
    }

    #[test]
    fn reduce_cancels_divisible_factors() {
        let v = Vars::new(["q"]);
        let f = FactoredRational::one_minus(&v, Monomial::from_slice(&[2]), rat(1))
            .div(&FactoredRational::one_minus(
                &v,
                Monomial::from_slice(&[1]),
                rat(1),
            ))
            .unwrap();
        // Factors (1-q^2) and (1-q) are distinct normalized factors.
        let r = f.to_ratfunc().reduce();
        assert!(r.den().is_empty());
        assert_eq!(r.num().to_string(), "q + 1");
    }
}
