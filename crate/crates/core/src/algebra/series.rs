use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::One;
use smallvec::SmallVec;

use super::factored::FactoredRational;
use super::mono::Monomial;
use super::poly::{Coeff, LaurentPolynomial};
use super::ratfunc::RationalFunction;
use super::vars::Vars;
use crate::error::{Error, Result};

pub type Graded = SmallVec<[usize; 2]>;

/// Indices of the graded variables `q` and `t` present in `vars`.
pub fn graded_indices(vars: &Vars) -> Graded {
    ["q", "t"].iter().filter_map(|n| vars.index(n)).collect()
}

/// A Laurent polynomial known exactly in total `(q,t)`-degree `<= order`;
/// higher terms are unknown and never stored. Other variables are coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct QtSeries {
    poly: LaurentPolynomial,
    order: i64,
    graded: Graded,
}

impl QtSeries {
    pub fn new(poly: LaurentPolynomial, order: i64) -> Self {
        let graded = graded_indices(poly.vars());
        let poly = poly.filter_terms(|m| m.degree_in(&graded) <= order);
        QtSeries {
            poly,
            order,
            graded,
        }
    }

    pub fn zero(vars: &Vars, order: i64) -> Self {
        Self::new(LaurentPolynomial::zero(vars), order)
    }

    pub fn one(vars: &Vars, order: i64) -> Self {
        Self::new(LaurentPolynomial::one(vars), order)
    }

    pub fn poly(&self) -> &LaurentPolynomial {
        &self.poly
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn vars(&self) -> &Vars {
        self.poly.vars()
    }

    pub fn graded(&self) -> &[usize] {
        &self.graded
    }

    /// Lowest degree present; a zero series is known to vanish through `order`.
    pub fn valuation(&self) -> i64 {
        self.poly
            .graded_range(&self.graded)
            .map(|(lo, _)| lo)
            .unwrap_or(self.order + 1)
    }

    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        QtSeries {
            poly: self
                .poly
                .filter_terms(|m| m.degree_in(&self.graded) <= order),
            order,
            graded: self.graded.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        Self::new(self.poly.add(&o.poly), order)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        Self::new(self.poly.sub(&o.poly), order)
    }

    pub fn neg(&self) -> Self {
        QtSeries {
            poly: self.poly.neg(),
            order: self.order,
            graded: self.graded.clone(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        QtSeries {
            poly: self.poly.scale(c),
            order: self.order,
            graded: self.graded.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let order = (self.order + o.valuation()).min(o.order + self.valuation());
        Self::new(
            mul_truncated(&self.poly, &o.poly, &self.graded, order),
            order,
        )
    }

    /// Product with an exactly known polynomial.
    pub fn mul_poly(&self, p: &LaurentPolynomial) -> Self {
        let Some((v, _)) = p.graded_range(&self.graded) else {
            return Self::zero(self.vars(), self.order);
        };
        let order = self.order + v;
        Self::new(mul_truncated(&self.poly, p, &self.graded, order), order)
    }

    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Self {
        QtSeries {
            poly: self.poly.mul_term(m, c),
            order: self.order + m.degree_in(&self.graded),
            graded: self.graded.clone(),
        }
    }

    /// Expansion of `1/f`, exact through `order`.
    pub fn inverse(f: &LaurentPolynomial, order: i64) -> Result<Self> {
        let graded = graded_indices(f.vars());
        let (v, low) = f.lowest_graded_part(&graded).ok_or(Error::DivisionByZero)?;
        let (lm, lc) = low
            .as_term()
            .ok_or_else(|| Error::DenominatorNotUnit(f.to_string()))?;
        let (lm_inv, lc_inv) = (lm.inv(), lc.recip());
        let vars = f.vars();
        // f = low * (1 + h) with h of valuation >= 1.
        let neg_h = f.sub(&low).mul_term(&lm_inv, &lc_inv).neg();
        let k = order + v;
        if k < 0 {
            return Ok(Self::zero(vars, order));
        }
        let mut sum = LaurentPolynomial::one(vars);
        let mut power = LaurentPolynomial::one(vars);
        for _ in 0..k {
            power = mul_truncated(&power, &neg_h, &graded, k);
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power);
        }
        Ok(QtSeries::new(sum, k).mul_term(&lm_inv, &lc_inv))
    }

    /// Expansion of a factored value, exact through `order`.
    pub fn from_factored(r: &FactoredRational, order: i64) -> Result<Self> {
        let vars = r.vars();
        if r.is_zero() {
            return Ok(Self::zero(vars, order));
        }
        let graded = graded_indices(vars);
        let unit_deg = r.mono().degree_in(&graded);
        let mut pieces = Vec::with_capacity(r.factors().len());
        let mut total = unit_deg;
        for (f, &e) in r.factors() {
            let (vf, _) = f.graded_range(&graded).expect("factors are nonzero");
            pieces.push((f, e, vf));
            total += e as i64 * vf;
        }
        if total > order {
            return Ok(Self::zero(vars, order));
        }
        let mut acc = Self::one(vars, i64::MAX / 4);
        for (f, e, vf) in pieces {
            let piece_val = e as i64 * vf;
            let prec = order - total + piece_val;
            let piece = if e > 0 {
                let mut p = LaurentPolynomial::one(vars);
                for j in 1..=e as i64 {
                    p = mul_truncated(&p, f, &graded, prec - (e as i64 - j) * vf);
                }
                QtSeries::new(p, prec)
            } else {
                let k = (-e) as i64;
                let single = Self::inverse(f, prec + (k - 1) * vf)?;
                let mut p = single.clone();
                for _ in 1..k {
                    p = p.mul(&single);
                }
                p
            };
            acc = acc.mul(&piece);
        }
        let out = acc.mul_term(r.mono(), r.coeff());
        debug_assert!(out.order >= order);
        Ok(out.truncate(order))
    }

    pub fn from_ratfunc(r: &RationalFunction, order: i64) -> Result<Self> {
        let mut den = FactoredRational::one(r.vars());
        for (f, &e) in r.den() {
            den = den.mul_poly_pow(f, e as i32)?;
        }
        let num = r.num();
        let Some((v, _)) = num.graded_range(&graded_indices(r.vars())) else {
            return Ok(Self::zero(r.vars(), order));
        };
        let inv = Self::from_factored(&den.inv()?, order - v)?;
        Ok(inv.mul_poly(num).truncate(order))
    }

    /// Expand `sum_k r_k * s_k` where each `r_k` may carry denominator factors
    /// free of `q` and `t` (poles such as `1 - z_j/z_i`). Such factors are
    /// cleared over their lcm, the numerators are expanded and summed, and the
    /// lcm is divided out exactly; a failed division means the poles did not
    /// cancel in the sum.
    pub fn expand_sum(
        vars: &Vars,
        terms: &[(FactoredRational, Option<QtSeries>)],
        order: i64,
    ) -> Result<Self> {
        let graded = graded_indices(vars);
        let ungraded = |f: &LaurentPolynomial| graded.iter().all(|&i| !f.depends_on(i));
        let mut lcm: BTreeMap<LaurentPolynomial, u32> = BTreeMap::new();
        for (r, _) in terms {
            for (f, e) in r.den_factors() {
                if ungraded(f) {
                    let slot = lcm.entry(f.clone()).or_insert(0);
                    *slot = (*slot).max(e);
                }
            }
        }
        let mut clear = FactoredRational::one(vars);
        for (f, &e) in &lcm {
            clear = clear.mul_poly_pow(f, e as i32)?;
        }
        let mut acc = Self::zero(vars, order);
        for (r, s) in terms {
            let cleared = r.mul(&clear);
            let term = match s {
                None => Self::from_factored(&cleared, order)?,
                Some(s) => {
                    let ex = Self::from_factored(&cleared, order - s.valuation())?;
                    ex.mul(s)
                }
            };
            acc = acc.add(&term);
        }
        let mut divisor = LaurentPolynomial::one(vars);
        for (f, &e) in &lcm {
            divisor = divisor.mul(&f.pow(e));
        }
        acc.div_ungraded(&divisor)
            .ok_or_else(|| Error::DenominatorSurvives(format!("{divisor}")))
    }

    /// Exact division by a polynomial free of the graded variables.
    pub fn div_ungraded(&self, d: &LaurentPolynomial) -> Option<Self> {
        debug_assert!(self.graded.iter().all(|&i| !d.depends_on(i)));
        if d.is_one() {
            return Some(self.clone());
        }
        let mut out = LaurentPolynomial::zero(self.vars());
        for part in self.components_full().values() {
            out = out.add(&part.div_exact(d)?);
        }
        Some(QtSeries {
            poly: out,
            order: self.order,
            graded: self.graded.clone(),
        })
    }

    /// Apply a monomial substitution that fixes the graded variables.
    pub fn map_ungraded(&self, images: &[Monomial]) -> Self {
        QtSeries {
            poly: self.poly.map_monomials(self.vars(), images),
            order: self.order,
            graded: self.graded.clone(),
        }
    }

    fn components_full(&self) -> BTreeMap<Vec<i32>, LaurentPolynomial> {
        let mut groups: BTreeMap<Vec<i32>, Vec<(Monomial, Coeff)>> = BTreeMap::new();
        for (m, c) in self.poly.terms() {
            let key = self.graded.iter().map(|&i| m.get(i)).collect();
            groups.entry(key).or_default().push((m.clone(), c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, t)| (k, LaurentPolynomial::from_sorted(self.vars(), t)))
            .collect()
    }

    /// Coefficients keyed by the exponents of the graded variables, with
    /// those exponents removed from the coefficient monomials.
    pub fn components(&self) -> BTreeMap<Vec<i32>, LaurentPolynomial> {
        let mut out = BTreeMap::new();
        for (k, p) in self.components_full() {
            let mut shift = Monomial::one(self.vars().len());
            for (&i, &e) in self.graded.iter().zip(&k) {
                shift.set(i, e);
            }
            out.insert(k, p.mul_term(&shift.inv(), &Coeff::one()));
        }
        out
    }

    /// True when both are known through `order` and agree there.
    pub fn agrees_to(&self, o: &Self, order: i64) -> bool {
        self.order >= order
            && o.order >= order
            && self.truncate(order).poly == o.truncate(order).poly
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "order": self.order,
            "poly": self.poly.to_json(),
        })
    }
}

/// Product of `a` and `b` keeping only terms of graded degree `<= order`.
pub(crate) fn mul_truncated(
    a: &LaurentPolynomial,
    b: &LaurentPolynomial,
    graded: &[usize],
    order: i64,
) -> LaurentPolynomial {
    let vars = a.vars();
    if a.is_zero() || b.is_zero() {
        return LaurentPolynomial::zero(vars);
    }
    let mut bs: Vec<(i64, &Monomial, &Coeff)> = b
        .terms()
        .iter()
        .map(|(m, c)| (m.degree_in(graded), m, c))
        .collect();
    bs.sort_by_key(|x| x.0);
    let bmin = bs[0].0;
    let mut acc: HashMap<Monomial, Coeff> = HashMap::new();
    for (ma, ca) in a.terms() {
        let da = ma.degree_in(graded);
        if da + bmin > order {
            continue;
        }
        for &(db, mb, cb) in &bs {
            if da + db > order {
                break;
            }
            let m = ma.mul(mb);
            let c = ca * cb;
            match acc.get_mut(&m) {
                Some(x) => *x += c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
    }
    LaurentPolynomial::from_terms(vars, acc)
}

impl fmt::Display for QtSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.poly, self.order + 1)
    }
}

impl fmt::Debug for QtSeries {
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
    fn geometric_series() {
        let v = qt();
        let s = QtSeries::from_factored(&om(&v, &[0, 1]).inv().unwrap(), 3).unwrap();
        assert_eq!(s.poly().to_string(), "t^3 + t^2 + t + 1");
    }

    #[test]
    fn long_division_example() {
        let v = qt();
        let r = om(&v, &[1, 1]).div(&om(&v, &[1, 0])).unwrap();
        let s = QtSeries::from_factored(&r, 2).unwrap();
        // 1 + q - qt + q^2
        let want = LaurentPolynomial::from_terms(
            &v,
            [
                (Monomial::from_slice(&[0, 0]), rat(1)),
                (Monomial::from_slice(&[1, 0]), rat(1)),
                (Monomial::from_slice(&[1, 1]), rat(-1)),
                (Monomial::from_slice(&[2, 0]), rat(1)),
            ],
        );
        assert_eq!(s.poly(), &want);
    }

    #[test]
    fn identity_expands_to_one() {
        let v = qt();
        let r = om(&v, &[1, 0]).div(&om(&v, &[1, 0])).unwrap();
        for m in 0..4 {
            assert!(QtSeries::from_factored(&r, m).unwrap().poly().is_one());
        }
    }

    #[test]
    fn non_unit_denominator_is_rejected() {
        let v = qt();
        // 1/(q - t): lowest part is not a monomial.
        let f = LaurentPolynomial::var(&v, 0).sub(&LaurentPolynomial::var(&v, 1));
        let r = FactoredRational::from_poly(&f).inv().unwrap();
        assert!(matches!(
            QtSeries::from_factored(&r, 2),
            Err(Error::DenominatorNotUnit(_))
        ));
    }

    #[test]
    fn negative_valuation_denominator() {
        let v = qt();
        // 1/(q - q^2 t) = q^-1 (1 + q t + q^2 t^2 + ...)
        let f = LaurentPolynomial::var(&v, 0).sub(&LaurentPolynomial::term(
            &v,
            Monomial::from_slice(&[2, 1]),
            rat(1),
        ));
        let r = FactoredRational::from_poly(&f).inv().unwrap();
        let s = QtSeries::from_factored(&r, 3).unwrap();
        assert_eq!(s.poly().to_string(), "q*t^2 + t + q^-1");
        assert_eq!(s.order(), 3);
    }

    #[test]
    fn pure_poles_cancel_in_sums() {
        let v = Vars::new(["q", "t", "z1", "z2"]);
        // (1 - t z2/z1)/(1 - z2/z1) + (1 - t z1/z2)/(1 - z1/z2) = 1 + t
        let term = |a: &[i32], b: &[i32]| {
            FactoredRational::one_minus(&v, Monomial::from_slice(a), rat(1))
                .div(&FactoredRational::one_minus(
                    &v,
                    Monomial::from_slice(b),
                    rat(1),
                ))
                .unwrap()
        };
        let terms = vec![
            (term(&[0, 1, -1, 1], &[0, 0, -1, 1]), None),
            (term(&[0, 1, 1, -1], &[0, 0, 1, -1]), None),
        ];
        let s = QtSeries::expand_sum(&v, &terms, 3).unwrap();
        assert_eq!(s.poly().to_string(), "t + 1");
    }
}
