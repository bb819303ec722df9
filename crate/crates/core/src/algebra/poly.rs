use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::mono::Monomial;
use super::vars::Vars;

pub type Coeff = BigRational;

pub fn rat(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_pow(x: &Coeff, e: i32) -> Option<Coeff> {
    if e < 0 {
        if x.is_zero() {
            return None;
        }
        return rat_pow(&x.recip(), -e);
    }
    let mut acc = Coeff::one();
    let mut base = x.clone();
    let mut k = e as u32;
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        k >>= 1;
    }
    Some(acc)
}

pub fn fmt_rat(c: &Coeff) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Sparse Laurent polynomial with exact rational coefficients.
///
/// Terms are kept sorted ascending in graded-lex order with no zero
/// coefficients, so structural equality is value equality.
#[derive(Clone)]
pub struct LaurentPolynomial {
    vars: Vars,
    terms: Vec<(Monomial, Coeff)>,
}

impl LaurentPolynomial {
    pub fn zero(vars: &Vars) -> Self {
        LaurentPolynomial {
            vars: vars.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Coeff::one())
    }

    pub fn constant(vars: &Vars, c: Coeff) -> Self {
        Self::term(vars, Monomial::one(vars.len()), c)
    }

    pub fn term(vars: &Vars, m: Monomial, c: Coeff) -> Self {
        debug_assert_eq!(m.len(), vars.len());
        let terms = if c.is_zero() { vec![] } else { vec![(m, c)] };
        LaurentPolynomial {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn monomial(vars: &Vars, m: Monomial) -> Self {
        Self::term(vars, m, Coeff::one())
    }

    pub fn var(vars: &Vars, idx: usize) -> Self {
        Self::monomial(vars, Monomial::unit(vars.len(), idx, 1))
    }

    /// `1 - c x^m`.
    pub fn one_minus(vars: &Vars, m: Monomial, c: Coeff) -> Self {
        Self::one(vars).sub(&Self::term(vars, m, c))
    }

    pub fn from_terms<I>(vars: &Vars, it: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Coeff)>,
    {
        let mut acc: HashMap<Monomial, Coeff> = HashMap::new();
        for (m, c) in it {
            debug_assert_eq!(m.len(), vars.len());
            accumulate(&mut acc, m, c);
        }
        Self::from_map(vars, acc)
    }

    fn from_map(vars: &Vars, acc: HashMap<Monomial, Coeff>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        LaurentPolynomial {
            vars: vars.clone(),
            terms,
        }
    }

    pub(crate) fn from_sorted(vars: &Vars, terms: Vec<(Monomial, Coeff)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        LaurentPolynomial {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Coeff)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The constant value, if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<Coeff> {
        match self.terms.as_slice() {
            [] => Some(Coeff::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn as_term(&self) -> Option<(&Monomial, &Coeff)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        match self.terms.binary_search_by(|(k, _)| k.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Coeff::zero(),
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Coeff)> {
        self.terms.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.merge(o, true)
    }

    fn merge(&self, o: &Self, negate: bool) -> Self {
        debug_assert_eq!(self.vars, o.vars);
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &o.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for (m, c) in &b[j..] {
            out.push((m.clone(), if negate { -c } else { c.clone() }));
        }
        Self::from_sorted(&self.vars, out)
    }

    pub fn neg(&self) -> Self {
        Self::from_sorted(
            &self.vars,
            self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        )
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Self::from_sorted(
            &self.vars,
            self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        )
    }

    /// Multiply by `c x^m`; order is preserved since grlex is a monomial order.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Self::from_sorted(
            &self.vars,
            self.terms.iter().map(|(k, d)| (k.mul(m), d * c)).collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.vars, o.vars);
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.vars);
        }
        if let Some((m, c)) = o.as_term() {
            return self.mul_term(m, c);
        }
        if let Some((m, c)) = self.as_term() {
            return o.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, Coeff> =
            HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                accumulate(&mut acc, ma.mul(mb), ca * cb);
            }
        }
        Self::from_map(&self.vars, acc)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn min_exps(&self) -> Option<Monomial> {
        let mut it = self.terms.iter();
        let first = it.next()?.0.clone();
        Some(it.fold(first, |acc, (m, _)| acc.meet(m)))
    }

    pub fn max_exps(&self) -> Option<Monomial> {
        let mut it = self.terms.iter();
        let first = it.next()?.0.clone();
        Some(it.fold(first, |acc, (m, _)| acc.join(m)))
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    ///
    /// Long division in grlex order; the quotient of an exact division has its
    /// exponents in the box `[min(self) - min(d), max(self) - max(d)]`, and a
    /// candidate term outside that box proves inexactness.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(&self.vars));
        }
        if let Some((m, c)) = d.as_term() {
            return Some(self.mul_term(&m.inv(), &c.recip()));
        }
        let lo = self.min_exps()?.div(&d.min_exps()?);
        let hi = self.max_exps()?.div(&d.max_exps()?);
        if lo.exps().iter().zip(hi.exps()).any(|(a, b)| a > b) {
            return None;
        }
        let (dm, dc) = d.leading()?.clone();
        let mut rem: BTreeMap<Monomial, Coeff> = self.terms.iter().cloned().collect();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.iter().next_back() {
            let qm = m.div(&dm);
            let inside = qm
                .exps()
                .iter()
                .zip(lo.exps().iter().zip(hi.exps()))
                .all(|(e, (l, h))| l <= e && e <= h);
            if !inside {
                return None;
            }
            let qc = c / &dc;
            for (tm, tc) in &d.terms {
                let key = tm.mul(&qm);
                let v = tc * &qc;
                match rem.get_mut(&key) {
                    Some(x) => {
                        *x -= v;
                        if x.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -v);
                    }
                }
            }
            quot.push((qm, qc));
        }
        quot.reverse();
        Some(Self::from_sorted(&self.vars, quot))
    }

    /// Split a nonzero polynomial as `c * x^m * p` with `p` a primitive
    /// integer polynomial, every exponent of `p` nonnegative with minimum 0
    /// in each variable, and positive leading coefficient.
    pub fn normalize_factor(&self) -> Option<(Coeff, Monomial, Self)> {
        let shift = self.min_exps()?;
        let mut den_lcm = BigInt::one();
        for (_, c) in &self.terms {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for (_, c) in &self.terms {
            let n = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&n);
        }
        let mut scale = BigRational::new(den_lcm, num_gcd);
        if self.terms.last()?.1.is_negative() {
            scale = -scale;
        }
        let p = Self::from_sorted(
            &self.vars,
            self.terms
                .iter()
                .map(|(m, c)| (m.div(&shift), c * &scale))
                .collect(),
        );
        Some((scale.recip(), shift, p))
    }

    /// Substitute each variable `v_i` by the monomial `images[i]` of `target`.
    pub fn map_monomials(&self, target: &Vars, images: &[Monomial]) -> Self {
        debug_assert_eq!(images.len(), self.vars.len());
        let n = target.len();
        Self::from_terms(
            target,
            self.terms.iter().map(|(m, c)| {
                let mut out = Monomial::one(n);
                for (i, &e) in m.exps().iter().enumerate() {
                    if e != 0 {
                        out = out.mul(&images[i].pow(e));
                    }
                }
                (out, c.clone())
            }),
        )
    }

    /// Evaluate at a rational point; `None` if a negative power of zero occurs.
    pub fn eval(&self, point: &[Coeff]) -> Option<Coeff> {
        let mut acc = Coeff::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e != 0 {
                    v *= rat_pow(&point[i], e)?;
                }
            }
            acc += v;
        }
        Some(acc)
    }

    pub fn depends_on(&self, idx: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.get(idx) != 0)
    }

    /// Smallest and largest degree in the variables `idx`.
    pub fn graded_range(&self, idx: &[usize]) -> Option<(i64, i64)> {
        let mut it = self.terms.iter().map(|(m, _)| m.degree_in(idx));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), d| (lo.min(d), hi.max(d))))
    }

    pub fn filter_terms<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Self {
        Self::from_sorted(
            &self.vars,
            self.terms
                .iter()
                .filter(|(m, _)| keep(m))
                .cloned()
                .collect(),
        )
    }

    /// The homogeneous component of lowest degree in `idx`.
    pub fn lowest_graded_part(&self, idx: &[usize]) -> Option<(i64, Self)> {
        let (lo, _) = self.graded_range(idx)?;
        Some((lo, self.filter_terms(|m| m.degree_in(idx) == lo)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vars": self.vars.names(),
            "terms": self.terms.iter().rev().map(|(m, c)| serde_json::json!({
                "exp": m.exps(),
                "coef": fmt_rat(c),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> crate::Result<Self> {
        use crate::Error;
        let bad = |s: &str| Error::Parse(s.to_string());
        let names = v["vars"].as_array().ok_or_else(|| bad("vars"))?;
        let vars = Vars::new(
            names
                .iter()
                .map(|n| {
                    n.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| bad("var name"))
                })
                .collect::<crate::Result<Vec<_>>>()?,
        );
        let mut terms = Vec::new();
        for t in v["terms"].as_array().ok_or_else(|| bad("terms"))? {
            let exp: Vec<i32> = t["exp"]
                .as_array()
                .ok_or_else(|| bad("exp"))?
                .iter()
                .map(|e| e.as_i64().map(|x| x as i32).ok_or_else(|| bad("exponent")))
                .collect::<crate::Result<_>>()?;
            if exp.len() != vars.len() {
                return Err(bad("exponent length"));
            }
            let coef: Coeff = t["coef"]
                .as_str()
                .ok_or_else(|| bad("coef"))?
                .parse()
                .map_err(|_| bad("coef value"))?;
            terms.push((Monomial::from_slice(&exp), coef));
        }
        Ok(Self::from_terms(&vars, terms))
    }
}

fn accumulate(acc: &mut HashMap<Monomial, Coeff>, m: Monomial, c: Coeff) {
    match acc.entry(m) {
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

impl PartialEq for LaurentPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && self.vars == other.vars
    }
}

impl Eq for LaurentPolynomial {}

impl Hash for LaurentPolynomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Ord for LaurentPolynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms
            .len()
            .cmp(&other.terms.len())
            .then_with(|| self.terms.iter().rev().cmp(other.terms.iter().rev()))
    }
}

impl PartialOrd for LaurentPolynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn fmt_monomial(vars: &Vars, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (name, &e) in vars.names().iter().zip(m.exps()) {
        match e {
            0 => {}
            1 => parts.push(name.clone()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            let mono = fmt_monomial(&self.vars, m);
            let body = if mono.is_empty() {
                fmt_rat(&a)
            } else if a.is_one() {
                mono
            } else {
                format!("{}*{}", fmt_rat(&a), mono)
            };
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! ref_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl std::ops::$tr<&LaurentPolynomial> for &LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $m(self, o: &LaurentPolynomial) -> LaurentPolynomial {
                LaurentPolynomial::$imp(self, o)
            }
        }
        impl std::ops::$tr for LaurentPolynomial {
            type Output = LaurentPolynomial;
            fn $m(self, o: LaurentPolynomial) -> LaurentPolynomial {
                LaurentPolynomial::$imp(&self, &o)
            }
        }
    };
}

ref_binop!(Add, add, add);
ref_binop!(Sub, sub, sub);
ref_binop!(Mul, mul, mul);

impl std::ops::Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qt() -> Vars {
        Vars::new(["q", "t"])
    }

    fn p(vars: &Vars, terms: &[(&[i32], i64)]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(
            vars,
            terms
                .iter()
                .map(|(e, c)| (Monomial::from_slice(e), rat(*c))),
        )
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let v = qt();
        let a = p(&v, &[(&[1, 0], 1), (&[0, 1], 2)]);
        let d = a.sub(&a);
        assert!(d.is_zero());
        assert_eq!(d.len(), 0);
    }

    #[test]
    fn exact_division_recovers_factor() {
        let v = qt();
        let a = p(&v, &[(&[0, 0], 1), (&[1, 0], -1)]);
        let b = p(&v, &[(&[0, 0], 1), (&[1, 1], 1), (&[-1, 2], 3)]);
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        let c = p(&v, &[(&[0, 0], 1), (&[0, 1], -1)]);
        assert!(prod.div_exact(&c).is_none());
    }

    #[test]
    fn normalized_factor_is_primitive_and_shifted() {
        let v = qt();
        // -2 q^-1 + 2 t  ==  -2 q^-1 (1 - q t)
        let a = p(&v, &[(&[-1, 0], -2), (&[0, 1], 2)]);
        let (c, m, f) = a.normalize_factor().unwrap();
        assert_eq!(f, p(&v, &[(&[0, 0], -1), (&[1, 1], 1)]));
        assert_eq!(c, rat(2));
        assert_eq!(m, Monomial::from_slice(&[-1, 0]));
        let back = f.mul_term(&m, &c);
        assert_eq!(back, a);
    }

    #[test]
    fn display_and_json_round_trip() {
        let v = qt();
        let a = LaurentPolynomial::from_terms(
            &v,
            [
                (
                    Monomial::from_slice(&[2, -1]),
                    BigRational::new(3.into(), 2.into()),
                ),
                (Monomial::from_slice(&[0, 0]), rat(-1)),
            ],
        );
        assert_eq!(a.to_string(), "3/2*q^2*t^-1 - 1");
        let back = LaurentPolynomial::from_json(&a.to_json()).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn monomial_substitution() {
        let v = Vars::new(["q", "y1", "y2"]);
        let f = p(&v, &[(&[0, 1, 0], 1), (&[0, 0, 1], 1)]);
        let images = [
            Monomial::from_slice(&[1, 0, 0]),
            Monomial::from_slice(&[1, 1, 0]),
            Monomial::from_slice(&[0, 0, 1]),
        ];
        let g = f.map_monomials(&v, &images);
        assert_eq!(g, p(&v, &[(&[1, 1, 0], 1), (&[0, 0, 1], 1)]));
    }
}
