//! Localization series `J = sum_alpha x^alpha J_alpha` of local Laumon
//! spaces, the difference operator annihilating `J - (z_1 + ... + z_N)`,
//! the dictionary to `f_N`, and the `alpha -> infinity` limit.

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;

use crate::algebra::{
    rat, Coeff, FactoredRational, LaurentPolynomial, Monomial, QtSeries, RationalFunction, Vars,
    XSeries,
};
use crate::baker::{c_n_closed, tail};
use crate::diffop::PairOperator;
use crate::error::{Error, Result};
use crate::qcalc::{poch, poch_inf_factors};
use crate::tableaux::{CompositionAlpha, ThetaMatrix};

/// `[q, t, z1..zN]`.
pub fn qtz_vars(n: usize) -> Vars {
    Vars::indexed(&["q", "t"], "z", n)
}

/// `q^a t^b z_j / z_i` (1-based; `i == j` gives no z part).
pub fn qtz(n: usize, a: i64, b: i64, j: usize, i: usize) -> Monomial {
    let mut m = Monomial::one(n + 2);
    m.set(0, a as i32);
    m.set(1, b as i32);
    if i != j {
        m.set(1 + j, 1);
        m.set(1 + i, -1);
    }
    m
}

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
    for m in dens {
        acc = acc.div(&poch(vars, 0, m, &one, t))?;
    }
    Ok(acc)
}

/// The fixed-point coefficient `C_theta(q, t, z)`.
pub fn c_theta(theta: &ThetaMatrix) -> Result<FactoredRational> {
    let n = theta.n();
    let vars = qtz_vars(n);
    let mut acc = FactoredRational::one(&vars);
    for i in 1..n {
        for j in i + 1..=n {
            let t = theta.get(i, j);
            if t == 0 {
                continue;
            }
            let c = tail(theta, i, j, j);
            acc = ratio(
                &vars,
                acc,
                &[qtz(n, 1, 1, 1, 1), qtz(n, 1 + c, 1, j, i)],
                &[qtz(n, 1, 0, 1, 1), qtz(n, 1 + c, 0, j, i)],
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
                let f = 1 - t as i64 + theta.get(m, k) as i64 - e;
                acc = ratio(
                    &vars,
                    acc,
                    &[qtz(n, 1 + e, 1, m, l), qtz(n, f, 1, l, m)],
                    &[qtz(n, 1 + e, 0, m, l), qtz(n, f, 0, l, m)],
                    t,
                )?;
            }
        }
    }
    Ok(acc)
}

/// The summands `C_theta` of `J_alpha`.
pub fn j_alpha_terms(n: usize, alpha: &CompositionAlpha) -> Result<Vec<FactoredRational>> {
    ThetaMatrix::with_degree(n, alpha)
        .iter()
        .map(c_theta)
        .collect()
}

/// `J_alpha` as an exact rational function.
pub fn j_alpha(n: usize, alpha: &CompositionAlpha) -> Result<RationalFunction> {
    let vars = qtz_vars(n);
    let parts: Vec<RationalFunction> = j_alpha_terms(n, alpha)?
        .iter()
        .map(|c| c.to_ratfunc())
        .collect();
    Ok(RationalFunction::sum(&vars, parts.iter()).reduce())
}

/// `J` through total x-degree `degree`.
pub fn j_series(n: usize, degree: u32) -> Result<XSeries> {
    let vars = qtz_vars(n);
    let alphas = CompositionAlpha::all_up_to(n - 1, degree);
    let coeffs = alphas
        .par_iter()
        .map(|a| j_alpha(n, a).map(|c| (a.0.clone(), c)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = XSeries::new(&vars, n - 1, degree);
    for (a, c) in coeffs {
        out.add_term(a, c);
    }
    Ok(out)
}

/// Which form of the conjugated operator to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShirForm {
    /// Numerators `1 - q t^{i-j+1} X_{ji}` for `j < i` and
    /// `1 - q^-1 t^{k-i-1} X_{ik}` for `k > i`.
    Derived,
    /// The two numerators exchanged: `1 - q^-1 t^{i-j-1} X_{ji}` for `j < i`
    /// and `1 - q t^{k-i+1} X_{ik}` for `k > i`.
    Printed,
}

/// Check `(D' - (z_1 + ... + z_N)) J = 0` coefficientwise through x-degree
/// `degree`, where `D' = sum_i z_i prod (...) T_{i,q^-1}` with denominators
/// `1 - t^{b-a} X_ab`. Returns the number of coefficients checked.
pub fn verify_shir(n: usize, degree: u32, form: ShirForm) -> Result<usize> {
    let j = j_series(n, degree)?;
    verify_shir_on(&j, n, form)
}

pub(crate) fn verify_shir_on(j: &XSeries, n: usize, form: ShirForm) -> Result<usize> {
    let vars = j.vars().clone();
    let one = LaurentPolynomial::one(&vars);
    let qt = |a: i64, b: i64| LaurentPolynomial::term(&vars, qtz(n, a, b, 1, 1), rat(1));
    let lead = (1..=n)
        .map(|i| LaurentPolynomial::var(&vars, 1 + i))
        .collect();
    let numer = |i: usize, a: usize, b: usize| {
        let d = (b - a) as i64;
        // a == i: the pair (i, k) with k > i; b == i: the pair (j, i) with j < i.
        let later = a == i;
        let (qp, tp) = match (form, later) {
            (ShirForm::Derived, true) | (ShirForm::Printed, false) => (-1, d - 1),
            (ShirForm::Derived, false) | (ShirForm::Printed, true) => (1, d + 1),
        };
        (one.clone(), qt(qp, tp))
    };
    let denom = |a: usize, b: usize| (one.clone(), qt(0, (b - a) as i64));
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
    op.verify_eigen(j, &eigen)
}

/// Check `C_theta t^{-|theta|} = c_N(theta)|_{s = q t}` for every theta of
/// x-degree at most `degree`, where `|theta| = sum (j - i) theta_ij`.
/// Returns the number of theta checked.
pub fn substitution_check(n: usize, degree: u32) -> Result<usize> {
    let target = qtz_vars(n);
    let mut imgs = vec![Monomial::unit(n + 2, 0, 1), qtz(n, 1, 1, 1, 1)];
    for i in 0..n {
        imgs.push(Monomial::unit(n + 2, 2 + i, 1));
    }
    let thetas: Vec<ThetaMatrix> = CompositionAlpha::all_up_to(n - 1, degree)
        .iter()
        .flat_map(|a| ThetaMatrix::with_degree(n, a))
        .collect();
    let bad = thetas.par_iter().find_map_first(|th| {
        let run = || -> Result<bool> {
            let c = c_n_closed(th)?.map_monomials(&target, &imgs)?;
            let deg = th.degree().size() as i32;
            let lhs = c_theta(th)?.mul(&FactoredRational::monomial(
                &target,
                Monomial::unit(n + 2, 1, -deg),
                Coeff::one(),
            ));
            Ok(crate::algebra::rational_eq(&lhs, &c))
        };
        match run() {
            Ok(true) => None,
            Ok(false) => Some(Error::MismatchAt(th.to_string())),
            Err(e) => Some(e),
        }
    });
    match bad {
        Some(e) => Err(e),
        None => Ok(thetas.len()),
    }
}

/// `J_alpha` expanded in `(q, t)` through total degree `order`.
pub fn j_alpha_series(n: usize, alpha: &CompositionAlpha, order: i64) -> Result<QtSeries> {
    let vars = qtz_vars(n);
    let terms: Vec<(FactoredRational, Option<QtSeries>)> = j_alpha_terms(n, alpha)?
        .into_iter()
        .map(|c| (c, None))
        .collect();
    QtSeries::expand_sum(&vars, &terms, order)
}

/// Factors of `(m; q)_inf^e` that matter through `order`.
fn inf_pow(vars: &Vars, m: Monomial, e: i32, order: i64) -> Result<FactoredRational> {
    poch_inf_factors(vars, 0, &m, &Coeff::one(), order)?.pow(e)
}

/// The limit of `J_alpha`, as a product of infinite q-Pochhammer ratios,
/// with every factor that is `1` through `order` dropped.
pub fn j_infinity_factored(n: usize, order: i64) -> Result<FactoredRational> {
    let vars = qtz_vars(n);
    let mut acc = FactoredRational::one(&vars);
    for i in 1..=n {
        for j in i + 1..=n {
            acc = acc
                .mul(&inf_pow(&vars, qtz(n, 1, 1, j, i), 1, order)?)
                .mul(&inf_pow(&vars, qtz(n, 1, 0, j, i), -1, order)?);
        }
    }
    let e = n as i32 - 1;
    acc = acc
        .mul(&inf_pow(&vars, qtz(n, 1, 1, 1, 1), e, order)?)
        .mul(&inf_pow(&vars, qtz(n, 1, 0, 1, 1), -e, order)?);
    for i in 1..n.saturating_sub(1) {
        let e = (n - i - 1) as i32;
        acc = acc
            .mul(&inf_pow(&vars, qtz(n, 1, i as i64 + 1, 1, 1), e, order)?)
            .mul(&inf_pow(&vars, qtz(n, 0, i as i64, 1, 1), -e, order)?);
    }
    Ok(acc)
}

pub fn j_infinity(n: usize, order: i64) -> Result<QtSeries> {
    QtSeries::from_factored(&j_infinity_factored(n, order)?, order)
}

/// The stabilization sector `(d_1, ..., d_{N-1}) = k (2^{N-2}, ..., 2, 1)`.
pub fn sector_point(n: usize, k: u32) -> CompositionAlpha {
    CompositionAlpha((0..n - 1).map(|i| k << (n - 2 - i)).collect())
}

/// Outcome of a stabilization run.
#[derive(Clone, Debug)]
pub struct Stabilization {
    pub schedule: Vec<CompositionAlpha>,
    /// Expansions along the schedule.
    pub values: Vec<QtSeries>,
    /// First schedule index from which all later values agree.
    pub stable_from: Option<usize>,
}

impl Stabilization {
    pub fn from_values(schedule: Vec<CompositionAlpha>, values: Vec<QtSeries>, order: i64) -> Self {
        let last = values.len();
        let mut stable_from = None;
        if last >= 2 && values[last - 1].agrees_to(&values[last - 2], order) {
            let mut k = last - 1;
            while k > 0 && values[k - 1].agrees_to(&values[last - 1], order) {
                k -= 1;
            }
            stable_from = Some(k);
        }
        Stabilization {
            schedule,
            values,
            stable_from,
        }
    }

    pub fn limit(&self) -> Option<&QtSeries> {
        self.stable_from
            .map(|_| self.values.last().expect("nonempty"))
    }
}

/// Expand `J_alpha` along `schedule`; the last two points must agree.
pub fn stabilize_j(n: usize, schedule: &[CompositionAlpha], order: i64) -> Result<Stabilization> {
    let values = schedule
        .par_iter()
        .map(|a| j_alpha_series(n, a, order))
        .collect::<Result<Vec<_>>>()?;
    Ok(Stabilization::from_values(schedule.to_vec(), values, order))
}

/// Stabilize `J_alpha` along `schedule` and compare with [`j_infinity`].
pub fn verify_junichi(
    n: usize,
    order: i64,
    schedule: &[CompositionAlpha],
) -> Result<Stabilization> {
    let st = stabilize_j(n, schedule, order)?;
    let Some(lim) = st.limit() else {
        return Err(Error::NotStabilized(format!(
            "J_alpha at {} and {}",
            schedule[schedule.len() - 2],
            schedule[schedule.len() - 1]
        )));
    };
    let want = j_infinity(n, order)?;
    if !lim.agrees_to(&want, order) {
        let diff = lim.sub(&want);
        return Err(Error::IdentityFails(format!(
            "limit differs from the product by {diff}"
        )));
    }
    Ok(st)
}

/// The root-lattice sum
/// `sum_{chi} prod_{alpha} (q^{1+<alpha,chi>} t z_alpha; q)_inf / (q^{1+<alpha,chi>} z_alpha; q)_inf`
/// over `chi` in the root lattice of `A_{n-1}` (integer vectors of length
/// `n` with zero sum), against its product evaluation.
#[derive(Clone, Debug)]
pub struct AnSummation {
    /// Number of coordinates (the lattice has rank `coords - 1`).
    pub coords: usize,
    pub order: i64,
    pub radius: i64,
    pub terms_kept: usize,
    pub lhs: QtSeries,
    pub rhs: QtSeries,
    pub rhs_positive_roots: QtSeries,
}

/// Lattice points with zero sum and coordinates in `[-r, r]`.
fn root_lattice_box(n: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n - 1 {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| {
                (-r..=r).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.into_iter()
        .filter_map(|mut v| {
            let last = -v.iter().sum::<i64>();
            (last.abs() <= r).then(|| {
                v.push(last);
                v
            })
        })
        .collect()
}

/// One summand as a factored value, with every infinite tail cut to `order`.
fn an_term(vars: &Vars, n: usize, chi: &[i64], order: i64) -> Result<FactoredRational> {
    let one = Coeff::one();
    let mut acc = FactoredRational::one(vars);
    for l in 1..=n {
        for m in 1..=n {
            if l == m {
                continue;
            }
            let d = chi[l - 1] - chi[m - 1];
            // z_alpha = z_l / z_m.
            let start = 1 + d;
            if start <= 0 {
                // (q^start x; q)_inf = prod_{k=start}^{0} (1 - q^k x) * (q x; q)_inf.
                let len = (1 - start) as u32;
                acc = acc
                    .mul(&poch(vars, 0, &qtz(n, start, 1, l, m), &one, len))
                    .div(&poch(vars, 0, &qtz(n, start, 0, l, m), &one, len))?;
            }
            let s = start.max(1);
            acc = acc
                .mul(&poch_inf_factors(
                    vars,
                    0,
                    &qtz(n, s, 1, l, m),
                    &one,
                    order,
                )?)
                .div(&poch_inf_factors(
                    vars,
                    0,
                    &qtz(n, s, 0, l, m),
                    &one,
                    order,
                )?)?;
        }
    }
    Ok(acc)
}

fn an_sum_at_radius(n: usize, order: i64, radius: i64) -> Result<(QtSeries, usize, i64)> {
    let vars = qtz_vars(n);
    let pts = root_lattice_box(n, radius);
    let terms = pts
        .par_iter()
        .map(|chi| {
            let t = an_term(&vars, n, chi, order)?;
            let v = t.valuation().unwrap_or(i64::MAX);
            let edge = chi.iter().any(|x| x.abs() == radius);
            Ok((t, v, edge))
        })
        .collect::<Result<Vec<_>>>()?;
    let min_edge = terms
        .iter()
        .filter(|(_, _, e)| *e)
        .map(|(_, v, _)| *v)
        .min()
        .unwrap_or(i64::MAX);
    let kept: Vec<(FactoredRational, Option<QtSeries>)> = terms
        .into_iter()
        .filter(|(_, v, _)| *v <= order)
        .map(|(t, _, _)| (t, None))
        .collect();
    let count = kept.len();
    Ok((QtSeries::expand_sum(&vars, &kept, order)?, count, min_edge))
}

pub fn an_summation_check(coords: usize, order: i64) -> Result<AnSummation> {
    if coords < 2 {
        return Err(Error::InvalidInput("need at least two coordinates".into()));
    }
    let n = coords;
    let vars = qtz_vars(n);
    // Grow the box until every term on its boundary has valuation > order,
    // then confirm that doubling the radius changes nothing.
    let mut radius = 1;
    let (mut lhs, mut kept) = loop {
        let (s, k, edge) = an_sum_at_radius(n, order, radius)?;
        if edge > order {
            break (s, k);
        }
        radius += 1;
        if radius > 64 {
            return Err(Error::NonConvergent("lattice sum".into()));
        }
    };
    let (doubled, k2, _) = an_sum_at_radius(n, order, 2 * radius)?;
    if !doubled.agrees_to(&lhs, order) || k2 != kept {
        return Err(Error::NotStabilized(format!(
            "lattice sum at radius {radius} vs {}",
            2 * radius
        )));
    }
    lhs = lhs.truncate(order);
    kept = k2;
    // ((q;q)/(qt;q))^{n-1} prod_{i=1}^{n-1} (q t^{i+1};q)/(t^i;q).
    let e = n as i32 - 1;
    let mut rhs = inf_pow(&vars, qtz(n, 1, 0, 1, 1), e, order)?.mul(&inf_pow(
        &vars,
        qtz(n, 1, 1, 1, 1),
        -e,
        order,
    )?);
    for i in 1..n as i64 {
        rhs = rhs
            .mul(&inf_pow(&vars, qtz(n, 1, i + 1, 1, 1), 1, order)?)
            .mul(&inf_pow(&vars, qtz(n, 0, i, 1, 1), -1, order)?);
    }
    // prod over positive roots of height h:
    // (q t^{h+1};q)(q^{delta} t^{h-1};q) / ((q t^h;q)(t^h;q)), delta = [h == 1].
    let mut pos = FactoredRational::one(&vars);
    for h in 1..n as i64 {
        let count = n as i64 - h;
        for _ in 0..count {
            let delta = i64::from(h == 1);
            pos = pos
                .mul(&inf_pow(&vars, qtz(n, 1, h + 1, 1, 1), 1, order)?)
                .mul(&inf_pow(&vars, qtz(n, delta, h - 1, 1, 1), 1, order)?)
                .mul(&inf_pow(&vars, qtz(n, 1, h, 1, 1), -1, order)?)
                .mul(&inf_pow(&vars, qtz(n, 0, h, 1, 1), -1, order)?);
        }
    }
    let rhs = QtSeries::from_factored(&rhs, order)?;
    let rhs_positive_roots = QtSeries::from_factored(&pos, order)?;
    let out = AnSummation {
        coords,
        order,
        radius,
        terms_kept: kept,
        lhs,
        rhs,
        rhs_positive_roots,
    };
    if !out.lhs.agrees_to(&out.rhs, order) {
        return Err(Error::IdentityFails(format!(
            "lattice sum {} vs product {}",
            out.lhs, out.rhs
        )));
    }
    if !out.rhs.agrees_to(&out.rhs_positive_roots, order) {
        return Err(Error::IdentityFails("the two product forms differ".into()));
    }
    Ok(out)
}

/// Coefficients of a series keyed by `(q, t)` exponents, for reports.
pub fn qt_coefficients(s: &QtSeries) -> BTreeMap<Vec<i32>, LaurentPolynomial> {
    s.components()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(n: usize, t: &[(usize, usize, u32)]) -> ThetaMatrix {
        ThetaMatrix::from_triples(n, t)
    }

    #[test]
    fn small_coefficients() {
        assert!(c_theta(&ThetaMatrix::zeros(3)).unwrap().is_one());
        let c = c_theta(&th(2, &[(1, 2, 1)])).unwrap();
        let v = qtz_vars(2);
        let f = |a, b, j| FactoredRational::one_minus(&v, qtz(2, a, b, j, 1), Coeff::one());
        let want = f(1, 1, 1)
            .mul(&f(1, 1, 2))
            .div(&f(1, 0, 1).mul(&f(1, 0, 2)))
            .unwrap();
        assert!(crate::algebra::rational_eq(&c, &want));
        let c3 = c_theta(&th(3, &[(2, 3, 1)])).unwrap();
        let c2 = c_theta(&th(2, &[(1, 2, 1)])).unwrap();
        let shift: Vec<Monomial> = vec![
            Monomial::unit(5, 0, 1),
            Monomial::unit(5, 1, 1),
            Monomial::unit(5, 3, 1),
            Monomial::unit(5, 4, 1),
        ];
        assert!(crate::algebra::rational_eq(
            &c3,
            &c2.map_monomials(&qtz_vars(3), &shift).unwrap()
        ));
    }

    #[test]
    fn series_coefficients() {
        let j = j_series(3, 2).unwrap();
        let sum = j_alpha_terms(3, &CompositionAlpha(vec![1, 1])).unwrap();
        assert_eq!(sum.len(), 2);
        assert!(j.get(&[0, 0]).unwrap().as_poly().unwrap().is_one());
    }

    #[test]
    fn operator_forms() {
        assert_eq!(verify_shir(2, 3, ShirForm::Derived).unwrap(), 4);
        assert!(matches!(
            verify_shir(2, 2, ShirForm::Printed),
            Err(Error::ResidualNonzero(_))
        ));
    }

    #[test]
    fn dictionary() {
        assert_eq!(substitution_check(2, 3).unwrap(), 4);
        substitution_check(3, 2).unwrap();
    }

    #[test]
    fn limit_low_order() {
        assert!(j_infinity(3, 0).unwrap().poly().is_one());
        let st = verify_junichi(
            2,
            2,
            &(1..=5).map(|k| sector_point(2, k)).collect::<Vec<_>>(),
        )
        .unwrap();
        assert!(st.stable_from.unwrap() <= 3);
    }

    #[test]
    fn rank_one_lattice_sum() {
        let r = an_summation_check(2, 3).unwrap();
        assert!(r.radius >= 1);
        assert!(an_summation_check(2, 0).unwrap().lhs.poly().is_one());
    }
}
