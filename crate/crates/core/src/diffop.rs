//! Residuals of q-difference operators of the form
//!
//! `sum_i a_i prod_{(a,b) ∋ i} (c0 - c1 X_ab) / (d0 - d1 X_ab) T_i`
//!
//! on series in `X_1..X_{N-1}`, where `X_ab = X_a ... X_{b-1}` for `a < b`
//! and `T_i` sends `X_{i-1} -> q X_{i-1}`, `X_i -> q^-1 X_i`. The
//! denominators are cleared by multiplying with `prod_{a<b} (d0 - d1 X_ab)`,
//! which leaves polynomial operator coefficients, so every coefficient of
//! the residual through the truncation is exact.

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;

use crate::algebra::{Coeff, LaurentPolynomial, Monomial, RationalFunction, Vars, XSeries};
use crate::error::{Error, Result};
use crate::tableaux::CompositionAlpha;

/// A polynomial in `X_1..X_{N-1}` with coefficients over the base variables.
type XPoly = Vec<(Vec<u32>, LaurentPolynomial)>;

fn x_mul(a: &XPoly, b: &XPoly, trunc: u32) -> XPoly {
    let mut out: BTreeMap<Vec<u32>, LaurentPolynomial> = BTreeMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if e.iter().sum::<u32>() > trunc {
                continue;
            }
            let c = ca.mul(cb);
            match out.get_mut(&e) {
                Some(v) => *v = v.add(&c),
                None => {
                    out.insert(e, c);
                }
            }
        }
    }
    out.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `c0 - c1 X_a ... X_{b-1}` (1-based, `a < b`).
fn x_binomial(
    nx: usize,
    a: usize,
    b: usize,
    (c0, c1): (LaurentPolynomial, LaurentPolynomial),
) -> XPoly {
    let mut e = vec![0; nx];
    for x in &mut e[a - 1..b - 1] {
        *x = 1;
    }
    vec![(vec![0; nx], c0), (e, c1.neg())]
}

/// An operator of the shape described in the module docs.
pub struct PairOperator<'a> {
    pub vars: Vars,
    pub n: usize,
    /// The scalar `a_i` of term `i` (index `i - 1`).
    pub lead: Vec<LaurentPolynomial>,
    /// `(c0, c1)` for term `i` and a pair `(a, b)` containing `i`.
    pub numer: &'a (dyn Fn(usize, usize, usize) -> (LaurentPolynomial, LaurentPolynomial) + Sync),
    /// `(d0, d1)` for the pair `(a, b)`.
    pub denom: &'a (dyn Fn(usize, usize) -> (LaurentPolynomial, LaurentPolynomial) + Sync),
}

impl PairOperator<'_> {
    /// Check `(op - eigen) g = 0` through the truncation of `g`; returns the
    /// number of coefficients checked, or the first nonzero one.
    pub fn verify_eigen(&self, g: &XSeries, eigen: &LaurentPolynomial) -> Result<usize> {
        let n = self.n;
        let nx = n - 1;
        let d = g.truncation();
        let vars = &self.vars;
        let q = vars.require("q")?;
        let one = LaurentPolynomial::one(vars);
        let unit: XPoly = vec![(vec![0; nx], one)];
        let mut ops: Vec<XPoly> = Vec::with_capacity(n);
        for i in 1..=n {
            let mut p = unit.clone();
            for a in 1..=n {
                for b in a + 1..=n {
                    let f = if a == i || b == i {
                        (self.numer)(i, a, b)
                    } else {
                        (self.denom)(a, b)
                    };
                    p = x_mul(&p, &x_binomial(nx, a, b, f), d);
                }
            }
            ops.push(
                p.into_iter()
                    .map(|(e, c)| (e, c.mul(&self.lead[i - 1])))
                    .collect(),
            );
        }
        let mut cleared = unit.clone();
        for a in 1..=n {
            for b in a + 1..=n {
                cleared = x_mul(&cleared, &x_binomial(nx, a, b, (self.denom)(a, b)), d);
            }
        }
        let cleared: XPoly = cleared
            .into_iter()
            .map(|(e, c)| (e, c.mul(eigen).neg()))
            .collect();
        let alphas = CompositionAlpha::all_up_to(nx, d);
        let bad = alphas.par_iter().find_map_first(|alpha| {
            let mut parts: Vec<RationalFunction> = Vec::new();
            let mut push = |op: &XPoly, shift: Option<usize>| {
                for (e, c) in op {
                    if e.iter().zip(&alpha.0).any(|(x, y)| x > y) {
                        continue;
                    }
                    let beta: Vec<u32> = alpha.0.iter().zip(e).map(|(y, x)| y - x).collect();
                    let Some(gb) = g.get(&beta) else { continue };
                    let mut c = c.clone();
                    if let Some(i) = shift {
                        let mut qexp = 0i64;
                        if i >= 2 {
                            qexp += beta[i - 2] as i64;
                        }
                        if i <= nx {
                            qexp -= beta[i - 1] as i64;
                        }
                        c = c.mul_term(&Monomial::unit(vars.len(), q, qexp as i32), &Coeff::one());
                    }
                    parts.push(gb.mul_poly(&c));
                }
            };
            for (i, op) in ops.iter().enumerate() {
                push(op, Some(i + 1));
            }
            push(&cleared, None);
            let r = RationalFunction::sum(vars, parts.iter());
            (!r.is_zero()).then(|| alpha.clone())
        });
        match bad {
            Some(a) => Err(Error::ResidualNonzero(a.to_string())),
            None => Ok(alphas.len()),
        }
    }
}
