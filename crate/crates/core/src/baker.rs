//! The coefficients `c_N(theta; z; q, s)`, the series `f_N` in the ratios
//! `u_i = y_{i+1}/y_i`, its specialization to `P_lambda`, and the residual
//! of the eigen equation of `f_N`.

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;

use crate::algebra::{
    Coeff, FactoredRational, LaurentPolynomial, Monomial, RationalFunction, Vars, XSeries,
};
use crate::diffop::PairOperator;
use crate::error::{Error, Result};
use crate::macdonald::{qs_vars, tableau_sum};
use crate::qcalc::poch;
use crate::tableaux::{
    enumerate_pol_lambda, in_pol, strip_sizes, CompositionAlpha, Partition, ThetaMatrix,
};

/// `[q, s, z1..zN]`.
pub fn qsz_vars(n: usize) -> Vars {
    Vars::indexed(&["q", "s"], "z", n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BaContext {
    pub n: usize,
    /// Maximum total degree in `u_1..u_{N-1}`.
    pub truncation: u32,
}

/// `q^a s^b z_j / z_i` (1-based; `i == j` gives no z part).
fn qsz(n: usize, a: i64, b: i64, j: usize, i: usize) -> Monomial {
    let mut m = Monomial::one(n + 2);
    m.set(0, a as i32);
    m.set(1, b as i32);
    if i != j {
        m.set(1 + j, 1);
        m.set(1 + i, -1);
    }
    m
}

/// Multiply `acc` by `(num_1; q)_t (num_2; q)_t / ((den_1; q)_t (den_2; q)_t)`.
fn ratio(
    vars: &Vars,
    acc: FactoredRational,
    nums: &[Monomial],
    dens: &[Monomial],
    t: u32,
) -> Result<FactoredRational> {
    let one = Coeff::one();
    let mut acc = acc;
    for m in nums {
        acc = acc.mul(&poch(vars, 0, m, &one, t));
    }
    if acc.is_zero() {
        return Ok(acc);
    }
    for m in dens {
        acc = acc.div(&poch(vars, 0, m, &one, t))?;
    }
    Ok(acc)
}

/// `c_N` by the recursion in `N`, with `z_N`-column shifts `z_i -> q^{-theta_{iN}} z_i`.
pub fn c_n_recursive(theta: &ThetaMatrix) -> Result<FactoredRational> {
    let n = theta.n();
    let vars = qsz_vars(n);
    rec(theta, &vec![0; n], n, &vars)
}

fn rec(theta: &ThetaMatrix, sh: &[i64], nz: usize, vars: &Vars) -> Result<FactoredRational> {
    let n = theta.n();
    let mut acc = FactoredRational::one(vars);
    if n <= 1 {
        return Ok(acc);
    }
    for i in 1..n {
        let t = theta.get(i, n);
        if t == 0 {
            continue;
        }
        for j in i..n {
            let d1 = sh[j] - sh[i - 1];
            let d2 = sh[j - 1] - sh[i - 1];
            let tj = theta.get(j, n) as i64;
            acc = ratio(
                vars,
                acc,
                &[qsz(nz, d1, 1, j + 1, i), qsz(nz, 1 - tj + d2, -1, j, i)],
                &[qsz(nz, 1 + d1, 0, j + 1, i), qsz(nz, -tj + d2, 0, j, i)],
                t,
            )?;
            if acc.is_zero() {
                return Ok(acc);
            }
        }
    }
    let next: Vec<i64> = (1..n).map(|i| sh[i - 1] - theta.get(i, n) as i64).collect();
    Ok(acc.mul(&rec(&theta.restrict(), &next, nz, vars)?))
}

/// `sum_{a=k+1}^N (theta_{i,a} - theta_{j,a})`.
pub(crate) fn tail(theta: &ThetaMatrix, i: usize, j: usize, k: usize) -> i64 {
    (k + 1..=theta.n())
        .map(|a| theta.get(i, a) as i64 - theta.get(j, a) as i64)
        .sum()
}

/// `c_N` as a single product over `k` and `i <= j <= k-1`.
pub fn c_n_closed(theta: &ThetaMatrix) -> Result<FactoredRational> {
    let n = theta.n();
    let vars = qsz_vars(n);
    let mut acc = FactoredRational::one(&vars);
    for k in 2..=n {
        for i in 1..k {
            let t = theta.get(i, k);
            if t == 0 {
                continue;
            }
            for j in i..k {
                let a = tail(theta, i, j + 1, k);
                let b = -(theta.get(j, k) as i64) + tail(theta, i, j, k);
                acc = ratio(
                    &vars,
                    acc,
                    &[qsz(n, a, 1, j + 1, i), qsz(n, b + 1, -1, j, i)],
                    &[qsz(n, a + 1, 0, j + 1, i), qsz(n, b, 0, j, i)],
                    t,
                )?;
                if acc.is_zero() {
                    return Ok(acc);
                }
            }
        }
    }
    Ok(acc)
}

/// `c_N` in the rewritten form with the explicit `(q/s)^theta` prefactors.
pub fn c_n_closed_rewritten(theta: &ThetaMatrix) -> Result<FactoredRational> {
    let n = theta.n();
    let vars = qsz_vars(n);
    let mut acc = FactoredRational::one(&vars);
    for i in 1..n {
        for j in i + 1..=n {
            let t = theta.get(i, j);
            if t == 0 {
                continue;
            }
            let c = tail(theta, i, j, j);
            acc = acc.mul(&FactoredRational::monomial(
                &vars,
                qsz(n, t as i64, -(t as i64), 1, 1),
                Coeff::one(),
            ));
            acc = ratio(
                &vars,
                acc,
                &[qsz(n, 0, 1, 1, 1), qsz(n, c, 1, j, i)],
                &[qsz(n, 1, 0, 1, 1), qsz(n, 1 + c, 0, j, i)],
                t,
            )?;
        }
    }
    for k in 3..=n {
        for l in 1..k {
            let t = theta.get(l, k);
            if t == 0 {
                continue;
            }
            for m in l + 1..k {
                let e = tail(theta, l, m, k);
                let f = -(t as i64) + theta.get(m, k) as i64 - e;
                acc = acc.mul(&FactoredRational::monomial(
                    &vars,
                    qsz(n, t as i64, -(t as i64), 1, 1),
                    Coeff::one(),
                ));
                acc = ratio(
                    &vars,
                    acc,
                    &[qsz(n, e, 1, m, l), qsz(n, f, 1, l, m)],
                    &[qsz(n, 1 + e, 0, m, l), qsz(n, 1 + f, 0, l, m)],
                    t,
                )?;
            }
        }
    }
    Ok(acc)
}

/// The two-variable coefficient as printed in its first form,
/// `(s z2/z1)_t (q^{1-t}/s)_t / ((q z2/z1)_t (q^{-t})_t)`.
pub fn c2_printed(t: u32) -> Result<FactoredRational> {
    let vars = qsz_vars(2);
    let t64 = t as i64;
    ratio(
        &vars,
        FactoredRational::one(&vars),
        &[qsz(2, 0, 1, 2, 1), qsz(2, 1 - t64, -1, 1, 1)],
        &[qsz(2, 1, 0, 2, 1), qsz(2, -t64, 0, 1, 1)],
        t,
    )
}

/// The two-variable coefficient as printed in its second form,
/// `(s z2/z1)_t (s)_t (q/s)^t / ((q z2/z1)_t (q)_t)`.
pub fn c2_printed_simplified(t: u32) -> Result<FactoredRational> {
    let vars = qsz_vars(2);
    let t64 = t as i64;
    let pre = FactoredRational::monomial(&vars, qsz(2, t64, -t64, 1, 1), Coeff::one());
    ratio(
        &vars,
        pre,
        &[qsz(2, 0, 1, 2, 1), qsz(2, 0, 1, 1, 1)],
        &[qsz(2, 1, 0, 2, 1), qsz(2, 1, 0, 1, 1)],
        t,
    )
}

/// The three-variable coefficient exactly as printed. Its `theta_13`
/// factor `(q^{1-theta_23} z_1/(s z_2))_{theta_13} / (q^{-theta_23} z_1/z_2)_{theta_13}`
/// disagrees with the recursion whenever `theta_13 > 0`; see [`c3_printed_fixed`].
pub fn c3_printed(theta: &ThetaMatrix) -> Result<FactoredRational> {
    c3_printed_oriented(theta, (1, 2))
}

/// [`c3_printed`] with `z_1/z_2` replaced by `z_2/z_1` in that factor.
pub fn c3_printed_fixed(theta: &ThetaMatrix) -> Result<FactoredRational> {
    c3_printed_oriented(theta, (2, 1))
}

fn c3_printed_oriented(theta: &ThetaMatrix, (j, i): (usize, usize)) -> Result<FactoredRational> {
    let vars = qsz_vars(3);
    let (t12, t13, t23) = (theta.get(1, 2), theta.get(1, 3), theta.get(2, 3));
    let (a12, a13, a23) = (t12 as i64, t13 as i64, t23 as i64);
    let mut acc = FactoredRational::one(&vars);
    acc = ratio(
        &vars,
        acc,
        &[qsz(3, a13 - a23, 1, 2, 1), qsz(3, 1 - a12, -1, 1, 1)],
        &[qsz(3, a13 - a23 + 1, 0, 2, 1), qsz(3, -a12, 0, 1, 1)],
        t12,
    )?;
    acc = ratio(
        &vars,
        acc,
        &[qsz(3, 0, 1, 2, 1), qsz(3, 1 - a13, -1, 1, 1)],
        &[qsz(3, 1, 0, 2, 1), qsz(3, -a13, 0, 1, 1)],
        t13,
    )?;
    acc = ratio(
        &vars,
        acc,
        &[qsz(3, 0, 1, 3, 1), qsz(3, 1 - a23, -1, j, i)],
        &[qsz(3, 1, 0, 3, 1), qsz(3, -a23, 0, j, i)],
        t13,
    )?;
    ratio(
        &vars,
        acc,
        &[qsz(3, 0, 1, 3, 2), qsz(3, 1 - a23, -1, 1, 1)],
        &[qsz(3, 1, 0, 3, 2), qsz(3, -a23, 0, 1, 1)],
        t23,
    )
}

/// `sum_theta c_N(theta) u^{deg theta}` through total degree `truncation`.
pub fn f_n_series(ctx: &BaContext) -> Result<XSeries> {
    let n = ctx.n;
    let vars = qsz_vars(n);
    let alphas = CompositionAlpha::all_up_to(n - 1, ctx.truncation);
    let coeffs = alphas
        .par_iter()
        .map(|a| {
            let parts = ThetaMatrix::with_degree(n, a)
                .iter()
                .map(|th| c_n_closed(th).map(|c| c.to_ratfunc()))
                .collect::<Result<Vec<_>>>()?;
            Ok((a.0.clone(), RationalFunction::sum(&vars, parts.iter())))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = XSeries::new(&vars, n - 1, ctx.truncation);
    for (a, c) in coeffs {
        out.add_term(a, c);
    }
    Ok(out)
}

/// Images of `q, s, z_i` under `z_i = s^{N-i} q^{lambda_i}`.
pub fn specialization_images(lambda: &Partition, n: usize) -> Vec<Monomial> {
    let mut imgs = vec![Monomial::from_slice(&[1, 0]), Monomial::from_slice(&[0, 1])];
    for i in 0..n {
        imgs.push(Monomial::from_slice(&[
            lambda.part(i) as i32,
            (n - 1 - i) as i32,
        ]));
    }
    imgs
}

/// Result of specializing `f_N` at `z_i = s^{N-i} q^{lambda_i}`.
#[derive(Clone, Debug)]
pub struct Specialization {
    /// Number of theta-matrices inspected (a box containing `Pol_lambda`).
    pub inspected: usize,
    /// Number with nonzero specialized coefficient; equals `|Pol_lambda|`.
    pub support: usize,
    /// Monomial expansion of the finite sum, keyed by exponent of `y`.
    pub expansion: BTreeMap<Vec<u32>, RationalFunction>,
}

/// Specialize every `c_N(theta)` with entries at most `lambda_1 + 1`;
/// fails unless the nonzero ones are exactly `Pol_lambda`.
pub fn specialize_f(lambda: &Partition, n: usize) -> Result<Specialization> {
    let target = qs_vars();
    let imgs = specialization_images(lambda, n);
    let box_ = ThetaMatrix::bounded(n, lambda.part(0) + 1);
    let vals = box_
        .par_iter()
        .map(|th| {
            let c = c_n_closed(th)?.map_monomials(&target, &imgs)?;
            Ok((th, c))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut grouped: BTreeMap<Vec<u32>, Vec<RationalFunction>> = BTreeMap::new();
    let mut support = 0;
    for (th, c) in &vals {
        let inside = in_pol(th, lambda);
        if c.is_zero() == inside {
            return Err(Error::TerminationFailure(format!(
                "{th}: coefficient is {}zero but theta is {}in the polytope",
                if c.is_zero() { "" } else { "non" },
                if inside { "" } else { "not " }
            )));
        }
        if inside {
            support += 1;
            let w = strip_sizes(th, lambda)
                .into_iter()
                .map(|x| x as u32)
                .collect();
            grouped.entry(w).or_default().push(c.to_ratfunc());
        }
    }
    let expansion = grouped
        .into_iter()
        .map(|(w, rs)| (w, RationalFunction::sum(&target, rs.iter()).reduce()))
        .filter(|(_, r)| !r.is_zero())
        .collect();
    Ok(Specialization {
        inspected: vals.len(),
        support,
        expansion,
    })
}

/// Specialize `f_N` and compare with the tableau sum monomial by monomial.
pub fn specialize_f_to_p(lambda: &Partition, n: usize) -> Result<Specialization> {
    let spec = specialize_f(lambda, n)?;
    let pol = enumerate_pol_lambda(lambda, n).len();
    if spec.support != pol {
        return Err(Error::TerminationFailure(format!(
            "support {} but |Pol| = {pol}",
            spec.support
        )));
    }
    let tab = tableau_sum(lambda, n)?;
    let vars = qs_vars();
    let zero = RationalFunction::zero(&vars);
    for k in spec.expansion.keys().chain(tab.keys()) {
        let a = spec.expansion.get(k).unwrap_or(&zero);
        let b = tab.get(k).unwrap_or(&zero);
        if !a.equals(b) {
            return Err(Error::MismatchAt(format!("y^{k:?}")));
        }
    }
    Ok(spec)
}

/// Coefficientwise residual of the eigen equation of `f_N` in the ratios
/// `u_i`; every coefficient through the truncation must vanish. Returns the
/// number of coefficients checked.
pub fn verify_dai_ichi(ctx: &BaContext) -> Result<usize> {
    let n = ctx.n;
    let vars = qsz_vars(n);
    let g = f_n_series(ctx)?;
    let one = LaurentPolynomial::one(&vars);
    let s = LaurentPolynomial::var(&vars, 1);
    let lead = (1..=n)
        .map(|i| {
            let mut m = Monomial::one(n + 2);
            m.set(1, i as i32 - n as i32);
            m.set(1 + i, 1);
            LaurentPolynomial::monomial(&vars, m)
        })
        .collect();
    // (s y_i - y_j)/(y_i - y_j) is (s - m)/(1 - m) for j > i and
    // (1 - s m)/(1 - m) for j < i, with m the ratio of the later to the earlier.
    let numer = |i: usize, a: usize, _b: usize| {
        if a == i {
            (s.clone(), one.clone())
        } else {
            (one.clone(), s.clone())
        }
    };
    let denom = |_a: usize, _b: usize| (one.clone(), one.clone());
    let op = PairOperator {
        vars: vars.clone(),
        n,
        lead,
        numer: &numer,
        denom: &denom,
    };
    let eigen = (0..n).fold(LaurentPolynomial::zero(&vars), |acc, i| {
        acc.add(&LaurentPolynomial::var(&vars, 2 + i))
    });
    op.verify_eigen(&g, &eigen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational_eq;

    #[test]
    fn base_cases() {
        assert!(c_n_recursive(&ThetaMatrix::zeros(1)).unwrap().is_one());
        assert!(c_n_recursive(&ThetaMatrix::zeros(3)).unwrap().is_one());
        assert!(c_n_closed(&ThetaMatrix::zeros(3)).unwrap().is_one());
    }

    #[test]
    fn two_variables() {
        for t in 0..4 {
            let th = ThetaMatrix::from_triples(2, &[(1, 2, t)]);
            let r = c_n_recursive(&th).unwrap();
            assert!(rational_eq(&r, &c_n_closed(&th).unwrap()));
            assert!(rational_eq(&r, &c2_printed(t).unwrap()));
            assert!(rational_eq(&r, &c2_printed_simplified(t).unwrap()));
        }
    }

    #[test]
    fn printed_three_variable_form() {
        let th = ThetaMatrix::from_triples(3, &[(1, 2, 1), (2, 3, 1)]);
        let r = c_n_recursive(&th).unwrap();
        assert!(rational_eq(&r, &c3_printed(&th).unwrap()));
        let th = ThetaMatrix::from_triples(3, &[(1, 3, 1)]);
        let r = c_n_recursive(&th).unwrap();
        assert!(!rational_eq(&r, &c3_printed(&th).unwrap()));
        assert!(rational_eq(&r, &c3_printed_fixed(&th).unwrap()));
    }

    #[test]
    fn series_low_order() {
        let f = f_n_series(&BaContext {
            n: 2,
            truncation: 0,
        })
        .unwrap();
        assert_eq!(f.len(), 1);
        let f = f_n_series(&BaContext {
            n: 3,
            truncation: 1,
        })
        .unwrap();
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn residual_small() {
        assert_eq!(
            verify_dai_ichi(&BaContext {
                n: 2,
                truncation: 2
            })
            .unwrap(),
            3
        );
        verify_dai_ichi(&BaContext {
            n: 3,
            truncation: 1,
        })
        .unwrap();
    }

    #[test]
    fn specialization_small() {
        let p = |v: &[u32]| Partition::new(v.to_vec()).unwrap();
        let s = specialize_f_to_p(&Partition::empty(), 2).unwrap();
        assert_eq!(s.support, 1);
        let s = specialize_f_to_p(&p(&[1]), 2).unwrap();
        assert_eq!(s.expansion.len(), 2);
        specialize_f_to_p(&p(&[2]), 2).unwrap();
    }
}
