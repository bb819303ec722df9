//! q-Pochhammer symbols and q-shift substitutions.

use crate::algebra::{
    graded_indices, Coeff, FactoredRational, LaurentPolynomial, Monomial, QtSeries, Vars, XSeries,
};
use crate::error::{Error, Result};

/// `(c x^m; q)_n = (1 - c x^m)(1 - q c x^m)...(1 - q^(n-1) c x^m)`.
pub fn poch(vars: &Vars, q: usize, m: &Monomial, c: &Coeff, n: u32) -> FactoredRational {
    let mut acc = FactoredRational::one(vars);
    let mut mk = m.clone();
    for _ in 0..n {
        acc = acc
            .mul_poly_pow(
                &LaurentPolynomial::one_minus(vars, mk.clone(), c.clone()),
                1,
            )
            .expect("positive power");
        if acc.is_zero() {
            return acc;
        }
        mk.set(q, mk.get(q) + 1);
    }
    acc
}

/// `(p; q)_n` for a single-term `p`.
pub fn pochhammer(p: &LaurentPolynomial, n: u32) -> Result<FactoredRational> {
    let vars = p.vars();
    let q = vars.require("q")?;
    if p.is_zero() {
        return Ok(FactoredRational::one(vars));
    }
    let (m, c) = p
        .as_term()
        .ok_or_else(|| Error::InvalidInput(format!("{p} is not a monomial")))?;
    Ok(poch(vars, q, m, c, n))
}

/// The factors of `(c x^m; q)_inf` that are not `1` modulo total
/// `(q,t)`-degree `order + 1`. Multiplied into anything of nonnegative
/// valuation this is exact through `order`.
pub fn poch_inf_factors(
    vars: &Vars,
    q: usize,
    m: &Monomial,
    c: &Coeff,
    order: i64,
) -> Result<FactoredRational> {
    let graded = graded_indices(vars);
    let d = m.degree_in(&graded);
    if d <= 0 {
        let p = LaurentPolynomial::term(vars, m.clone(), c.clone());
        return Err(Error::NonConvergent(p.to_string()));
    }
    let n = (order - d + 1).max(0) as u32;
    Ok(poch(vars, q, m, c, n))
}

/// Truncated expansion of `(p; q)_inf`.
pub fn pochhammer_inf(p: &LaurentPolynomial, order: i64) -> Result<QtSeries> {
    let vars = p.vars();
    let q = vars.require("q")?;
    if p.is_zero() {
        return Ok(QtSeries::one(vars, order));
    }
    let (m, c) = p
        .as_term()
        .ok_or_else(|| Error::InvalidInput(format!("{p} is not a monomial")))?;
    QtSeries::from_factored(&poch_inf_factors(vars, q, m, c, order)?, order)
}

/// The substitution `v -> q^power v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QShift {
    pub variable: String,
    pub power: i32,
}

impl QShift {
    pub fn new(variable: impl Into<String>, power: i32) -> Self {
        QShift {
            variable: variable.into(),
            power,
        }
    }

    pub fn inverse(&self) -> Self {
        QShift::new(self.variable.clone(), -self.power)
    }

    /// Composition of two shifts of the same variable.
    pub fn compose(&self, o: &QShift) -> Option<QShift> {
        (self.variable == o.variable)
            .then(|| QShift::new(self.variable.clone(), self.power + o.power))
    }
}

pub fn apply_qshift(f: &LaurentPolynomial, s: &QShift) -> Result<LaurentPolynomial> {
    let vars = f.vars();
    let v = vars.require(&s.variable)?;
    let q = vars.require("q")?;
    let images: Vec<Monomial> = (0..vars.len())
        .map(|i| {
            let mut m = Monomial::unit(vars.len(), i, 1);
            if i == v {
                m.set(q, m.get(q) + s.power);
            }
            m
        })
        .collect();
    Ok(f.map_monomials(vars, &images))
}

/// Shift of the series variable `x{k}` (1-based) of an [`XSeries`].
pub fn apply_qshift_x(f: &XSeries, s: &QShift) -> Result<XSeries> {
    let k: usize = s
        .variable
        .strip_prefix('x')
        .and_then(|d| d.parse().ok())
        .filter(|&k| k >= 1 && k <= f.nvars())
        .ok_or_else(|| Error::UnknownVariable(s.variable.clone()))?;
    let q = f.vars().require("q")?;
    Ok(f.shift_var(k - 1, s.power, q))
}

/// The shifts making up `T_{i,q^-1}` on `x_1..x_{n-1}`:
/// `x_{i-1} -> q x_{i-1}`, `x_i -> q^-1 x_i`.
pub fn t_inverse_shifts(i: usize, n: usize) -> Vec<QShift> {
    let mut out = Vec::new();
    if i >= 2 {
        out.push(QShift::new(format!("x{}", i - 1), 1));
    }
    if i < n {
        out.push(QShift::new(format!("x{i}"), -1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, RationalFunction};

    #[test]
    fn finite_products() {
        let v = Vars::new(["q", "p"]);
        let p = LaurentPolynomial::var(&v, 1);
        assert!(pochhammer(&p, 0).unwrap().is_one());
        let two = pochhammer(&p, 2).unwrap();
        let want = LaurentPolynomial::one_minus(&v, Monomial::from_slice(&[0, 1]), rat(1)).mul(
            &LaurentPolynomial::one_minus(&v, Monomial::from_slice(&[1, 1]), rat(1)),
        );
        assert_eq!(two.numerator(), want);
        let qq = pochhammer(&LaurentPolynomial::var(&v, 0), 1).unwrap();
        assert_eq!(qq.numerator().to_string(), "-q + 1");
    }

    #[test]
    fn infinite_products() {
        let v = Vars::new(["q", "t"]);
        let q = LaurentPolynomial::var(&v, 0);
        assert_eq!(
            pochhammer_inf(&q, 2).unwrap().poly().to_string(),
            "-q^2 - q + 1"
        );
        let qt = LaurentPolynomial::monomial(&v, Monomial::from_slice(&[1, 1]));
        assert_eq!(
            pochhammer_inf(&qt, 2).unwrap().poly().to_string(),
            "-q*t + 1"
        );
        let zero = LaurentPolynomial::zero(&v);
        assert!(pochhammer_inf(&zero, 3).unwrap().poly().is_one());
        let one = LaurentPolynomial::one(&v);
        assert!(matches!(
            pochhammer_inf(&one, 2),
            Err(Error::NonConvergent(_))
        ));
    }

    #[test]
    fn shifts() {
        let v = Vars::new(["q", "y1", "y2"]);
        let f = LaurentPolynomial::var(&v, 1).add(&LaurentPolynomial::var(&v, 2));
        let g = apply_qshift(&f, &QShift::new("y1", 1)).unwrap();
        assert_eq!(g.to_string(), "q*y1 + y2");
        assert_eq!(apply_qshift(&g, &QShift::new("y1", -1)).unwrap(), f);
        assert!(apply_qshift(&f, &QShift::new("y3", 1)).is_err());

        let w = Vars::new(["q"]);
        let mut x = XSeries::new(&w, 2, 4);
        x.add_term(vec![1, 1], RationalFunction::one(&w));
        let mut y = x.clone();
        for s in t_inverse_shifts(2, 3) {
            y = apply_qshift_x(&y, &s).unwrap();
        }
        assert_eq!(y, x);
        let mut x1 = XSeries::new(&w, 1, 2);
        x1.add_term(vec![1], RationalFunction::one(&w));
        let shifted = apply_qshift_x(&x1, &t_inverse_shifts(1, 2)[0]).unwrap();
        assert_eq!(shifted.get(&[1]).unwrap().num().to_string(), "q^-1");
    }
}
