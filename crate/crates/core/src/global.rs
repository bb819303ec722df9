//! Euler characteristics of twisted De Rham complexes on global Laumon
//! spaces: the finite Weyl localization sums, their `alpha -> infinity`
//! limits `H`, the closed form `H_0 * prefactor * P`, and the difference
//! operator with coefficients `K_r` acting on the weight.
//!
//! Torus coordinates: the sums here use positive roots `z_j / z_i` (`i < j`)
//! and `z^lambda` with components `lambda_k = l_k + ... + l_{N-1}`. With these,
//! the limit is `H_0 * prefactor * P_lambda(z)` for the component partition.
//! The operator identity is stated with the partition
//! `(l_1 + ... + l_{N-1}, ..., l_1, 0)` instead, which is the same family
//! read in the inverse torus coordinate.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    Coeff, FactoredRational, LaurentPolynomial, Monomial, QtSeries, RationalFunction, Vars,
};
use crate::error::{Error, Result};
use crate::laumon::{c_theta, qtz_vars, Stabilization};
use crate::macdonald::{
    dictionary_partition, macdonald_p_qt, monomial_symmetric_poly, pieri_target, qt_vars,
    shift_weight, SymmetricPolynomial,
};
use crate::qcalc::{poch, poch_inf_factors};
use crate::tableaux::{CompositionAlpha, Partition, ThetaMatrix};

/// A weight `sum_i l_i w_i` of `GL(N)`, `w_i -> e_1 + ... + e_i`, modulo the
/// determinant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct GLWeight {
    l: Vec<i64>,
}

impl GLWeight {
    /// From the fundamental-weight coordinates `l_1..l_{N-1}`.
    pub fn new(l: Vec<i64>) -> Self {
        GLWeight { l }
    }

    pub fn zero(n: usize) -> Self {
        GLWeight { l: vec![0; n - 1] }
    }

    /// From components `lambda_1..lambda_N`; only differences matter.
    pub fn from_components(c: &[i64]) -> Self {
        GLWeight {
            l: c.windows(2).map(|w| w[0] - w[1]).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.l.len() + 1
    }

    pub fn l(&self) -> &[i64] {
        &self.l
    }

    /// `lambda_k = l_k + ... + l_{N-1}`, so `lambda_N = 0`.
    pub fn components(&self) -> Vec<i64> {
        (0..self.n()).map(|k| self.l[k..].iter().sum()).collect()
    }

    pub fn is_dominant(&self) -> bool {
        self.l.iter().all(|&x| x >= 0)
    }

    /// The components as a partition, when dominant.
    pub fn partition(&self) -> Option<Partition> {
        if !self.is_dominant() {
            return None;
        }
        Partition::new(self.components().iter().map(|&x| x as u32).collect()).ok()
    }

    /// `T_r`: `l_{r-1} += 1`, `l_r -= 1` (1-based, out-of-range entries ignored).
    pub fn shifted(&self, r: usize) -> GLWeight {
        GLWeight {
            l: shift_weight(&self.l, r),
        }
    }

    /// `<gamma, lambda>` for `gamma` in simple coroots: `sum gamma_i l_i`.
    pub fn pairing(&self, gamma: &[u32]) -> i64 {
        gamma.iter().zip(&self.l).map(|(&g, &l)| g as i64 * l).sum()
    }

    /// `(l_i + ... + l_j)` for `1 <= i <= j <= N-1`.
    fn interval(&self, i: usize, j: usize) -> i64 {
        self.l[i - 1..j].iter().sum()
    }
}

impl fmt::Display for GLWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.l.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// A permutation `w` of `{1..N}`, stored 0-based; acts by `z_i -> z_{w(i)}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WeylElement(Vec<usize>);

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        WeylElement((0..n).collect())
    }

    pub fn from_images(v: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; v.len()];
        for &x in &v {
            if x >= v.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidInput(format!("{v:?} is not a permutation")));
            }
        }
        Ok(WeylElement(v))
    }

    /// All of `S_N` in lexicographic order.
    pub fn all(n: usize) -> Vec<WeylElement> {
        let mut cur: Vec<usize> = (0..n).collect();
        let mut out = vec![WeylElement(cur.clone())];
        loop {
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(WeylElement(cur.clone()));
        }
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `(self * o)(i) = self(o(i))`.
    pub fn compose(&self, o: &WeylElement) -> WeylElement {
        WeylElement(o.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> WeylElement {
        let mut v = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            v[x] = i;
        }
        WeylElement(v)
    }

    pub fn inversions(&self) -> usize {
        let v = &self.0;
        (0..v.len())
            .flat_map(|i| (i + 1..v.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| v[i] > v[j])
            .count()
    }

    /// Substitution images for `[q, t, z1..zN]`.
    pub fn z_images(&self) -> Vec<Monomial> {
        let n = self.0.len();
        let mut out = vec![Monomial::unit(n + 2, 0, 1), Monomial::unit(n + 2, 1, 1)];
        out.extend(self.0.iter().map(|&j| Monomial::unit(n + 2, 2 + j, 1)));
        out
    }

    /// Permute the components of a weight: `(w lambda)_{w(i)} = lambda_i`.
    pub fn act_on_components(&self, c: &[i64]) -> Vec<i64> {
        let mut out = vec![0; c.len()];
        for (i, &x) in c.iter().enumerate() {
            out[self.0[i]] = x;
        }
        out
    }
}

/// `q -> q^-1` on `[q, t, z1..zN]`.
fn q_inverse_images(n: usize) -> Vec<Monomial> {
    (0..n + 2)
        .map(|i| Monomial::unit(n + 2, i, if i == 0 { -1 } else { 1 }))
        .collect()
}

fn z_pow(n: usize, c: &[i64], qpow: i64) -> Monomial {
    let mut m = Monomial::one(n + 2);
    m.set(0, qpow as i32);
    for (i, &x) in c.iter().enumerate() {
        m.set(2 + i, x as i32);
    }
    m
}

/// `prod_{i<j} (1 - t z_j/z_i) / (1 - z_j/z_i)`.
pub fn positive_root_factor(n: usize) -> Result<FactoredRational> {
    let vars = qtz_vars(n);
    let mut acc = FactoredRational::one(&vars);
    for i in 1..=n {
        for j in i + 1..=n {
            let r = crate::laumon::qtz(n, 0, 0, j, i);
            let tr = crate::laumon::qtz(n, 0, 1, j, i);
            acc = acc
                .mul(&FactoredRational::one_minus(&vars, tr, Coeff::one()))
                .div(&FactoredRational::one_minus(&vars, r, Coeff::one()))?;
        }
    }
    Ok(acc)
}

fn apply_w(f: &FactoredRational, w: &WeylElement) -> Result<FactoredRational> {
    f.map_monomials(f.vars(), &w.z_images())
}

/// `C_theta` for every theta of degree `alpha`, with `q` inverted when asked.
fn c_list(n: usize, alpha: &CompositionAlpha, invert_q: bool) -> Result<Vec<FactoredRational>> {
    let vars = qtz_vars(n);
    let inv = q_inverse_images(n);
    ThetaMatrix::with_degree(n, alpha)
        .iter()
        .map(|th| {
            let c = c_theta(th)?;
            if invert_q {
                c.map_monomials(&vars, &inv)
            } else {
                Ok(c)
            }
        })
        .collect()
}

/// The summands of the localization sum for degree `alpha`:
/// `sigma_w [ z^lambda q^{<gamma,lambda>} C_theta(q^-1) C_theta'(q) prod_{i<j} (1 - t z_j/z_i)/(1 - z_j/z_i) ]`
/// over `gamma + beta = alpha`, `deg theta = gamma`, `deg theta' = beta`, `w` in `S_N`.
pub fn euler_char_terms(
    alpha: &CompositionAlpha,
    lambda: &GLWeight,
) -> Result<Vec<FactoredRational>> {
    let n = lambda.n();
    if alpha.0.len() != n - 1 {
        return Err(Error::InvalidInput(format!(
            "alpha {alpha} has the wrong length for N = {n}"
        )));
    }
    let vars = qtz_vars(n);
    let roots = positive_root_factor(n)?;
    let comps = lambda.components();
    let splits = alpha.below();
    let per_gamma = splits
        .par_iter()
        .map(|gamma| {
            let beta = CompositionAlpha(alpha.0.iter().zip(&gamma.0).map(|(a, g)| a - g).collect());
            let lead = roots.mul(&FactoredRational::monomial(
                &vars,
                z_pow(n, &comps, lambda.pairing(&gamma.0)),
                Coeff::one(),
            ));
            let cg = c_list(n, gamma, true)?;
            let cb = c_list(n, &beta, false)?;
            let mut out = Vec::with_capacity(cg.len() * cb.len());
            for a in &cg {
                let la = lead.mul(a);
                for b in &cb {
                    out.push(la.mul(b));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let base: Vec<FactoredRational> = per_gamma.into_iter().flatten().collect();
    let ws = WeylElement::all(n);
    let out = ws
        .par_iter()
        .map(|w| {
            base.iter()
                .map(|f| apply_w(f, w))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(out.into_iter().flatten().collect())
}

/// The localization sum for degree `alpha` as an exact rational function.
pub fn euler_char_global(alpha: &CompositionAlpha, lambda: &GLWeight) -> Result<RationalFunction> {
    let vars = qtz_vars(lambda.n());
    let parts: Vec<RationalFunction> = euler_char_terms(alpha, lambda)?
        .iter()
        .map(|f| f.to_ratfunc())
        .collect();
    Ok(RationalFunction::sum(&vars, parts.iter()).reduce())
}

/// The localization sum expanded in `(q, t)` through `order`.
pub fn euler_char_series(
    alpha: &CompositionAlpha,
    lambda: &GLWeight,
    order: i64,
) -> Result<QtSeries> {
    let vars = qtz_vars(lambda.n());
    let terms: Vec<(FactoredRational, Option<QtSeries>)> = euler_char_terms(alpha, lambda)?
        .into_iter()
        .map(|f| (f, None))
        .collect();
    QtSeries::expand_sum(&vars, &terms, order)
}

/// True when `f` is unchanged by every simple transposition of the `z`.
pub fn is_weyl_invariant(f: &RationalFunction, n: usize) -> Result<bool> {
    for i in 0..n - 1 {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(i, i + 1);
        let g = f.map_monomials(f.vars(), &WeylElement(v).z_images())?;
        if !g.equals(f) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `alpha_k = k (2^{N-2}, ..., 2, 1)` for `k = 1..=alpha_max`.
pub fn sector_schedule(n: usize, alpha_max: u32) -> Vec<CompositionAlpha> {
    (1..=alpha_max)
        .map(|k| crate::laumon::sector_point(n, k))
        .collect()
}

/// Expand the localization sums along `schedule`. Errors with
/// `NotStabilized` when the last two points disagree through `order`.
pub fn h_limit(
    lambda: &GLWeight,
    schedule: &[CompositionAlpha],
    order: i64,
) -> Result<Stabilization> {
    if schedule.len() < 2 {
        return Err(Error::InvalidInput(
            "a schedule needs at least two points".into(),
        ));
    }
    if schedule
        .windows(2)
        .any(|w| w[0].0.iter().zip(&w[1].0).any(|(a, b)| a > b) || w[0] == w[1])
    {
        return Err(Error::InvalidInput("schedule must be increasing".into()));
    }
    let values = schedule
        .iter()
        .map(|a| euler_char_series(a, lambda, order))
        .collect::<Result<Vec<_>>>()?;
    let st = Stabilization::from_values(schedule.to_vec(), values, order);
    if st.stable_from.is_none() {
        let k = schedule.len();
        return Err(Error::NotStabilized(format!(
            "H at {} and {} for weight {lambda}",
            schedule[k - 2],
            schedule[k - 1]
        )));
    }
    Ok(st)
}

fn qt_binomial(vars: &Vars, a: i64, b: i64) -> LaurentPolynomial {
    LaurentPolynomial::one_minus(
        vars,
        Monomial::from_slice(&[a as i32, b as i32]),
        Coeff::one(),
    )
}

/// `H_0(t) = prod_{k=2}^N [k]_t / (prod_{m=2}^{N-1} (1-t^m)^{2(N-m)} (1-t^N)(1-t)^{N-2})`
/// over `[q, t]`.
pub fn h0_closed(n: usize) -> Result<FactoredRational> {
    if n < 2 {
        return Err(Error::InvalidInput("N must be at least 2".into()));
    }
    let vars = qt_vars();
    let n = n as i64;
    let mut acc = FactoredRational::one(&vars);
    for k in 2..=n {
        acc = acc
            .mul_poly_pow(&qt_binomial(&vars, 0, k), 1)?
            .mul_poly_pow(&qt_binomial(&vars, 0, 1), -1)?;
    }
    for m in 2..n {
        acc = acc.mul_poly_pow(&qt_binomial(&vars, 0, m), -2 * (n - m) as i32)?;
    }
    acc = acc
        .mul_poly_pow(&qt_binomial(&vars, 0, n), -1)?
        .mul_poly_pow(&qt_binomial(&vars, 0, 1), -(n as i32 - 2))?;
    Ok(acc)
}

/// Poincare polynomial of the flag variety, by counting permutations by
/// inversions. Coefficient `i` is the number with `i` inversions.
pub fn w_poly(n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n * n.saturating_sub(1) / 2 + 1];
    for w in WeylElement::all(n) {
        out[w.inversions()] += 1;
    }
    out
}

/// `F_i` for `i <= order`: the number of pairs of multisets, one of
/// nonsimple positive roots weighted by `height - 1` and one of positive
/// roots weighted by `height + 1`, of total weight `i`. Counted by
/// enumerating the multisets.
pub fn f_poly(n: usize, order: usize) -> Vec<BigInt> {
    let mut weights = Vec::new();
    // sl_N has N - h positive roots of height h.
    for h in 2..n {
        weights.extend(std::iter::repeat(h - 1).take(n - h));
    }
    for h in 1..n {
        weights.extend(std::iter::repeat(h + 1).take(n - h));
    }
    let mut out = vec![BigInt::zero(); order + 1];
    fn walk(weights: &[usize], idx: usize, total: usize, out: &mut [BigInt]) {
        if idx == weights.len() {
            out[total] += 1;
            return;
        }
        let mut t = total;
        while t < out.len() {
            walk(weights, idx + 1, t, out);
            t += weights[idx];
        }
    }
    walk(&weights, 0, 0, &mut out);
    out
}

/// Check `H_0 = W(t) F(t)` through `t^order`.
pub fn verify_h0(n: usize, order: usize) -> Result<()> {
    let vars = qt_vars();
    let w = w_poly(n);
    let f = f_poly(n, order);
    let mut prod = vec![BigInt::zero(); order + 1];
    for (i, a) in w.iter().enumerate() {
        for (j, b) in f.iter().enumerate() {
            if i + j <= order {
                prod[i + j] += a * b;
            }
        }
    }
    let h0 = QtSeries::from_factored(&h0_closed(n)?, order as i64)?;
    for (k, c) in prod.iter().enumerate() {
        let got = h0.poly().coeff(&Monomial::from_slice(&[0, k as i32]));
        if got != Coeff::from_integer(c.clone()) {
            return Err(Error::MismatchAt(format!(
                "t^{k}: closed {got}, counted {c}"
            )));
        }
    }
    debug_assert_eq!(h0.vars(), &vars);
    Ok(())
}

/// `prod_{1<=i<=j<=N-1} (t^{j-i+1}; q)_{l_i+...+l_j} / (t^{j-i} q; q)_{l_i+...+l_j}`.
pub fn c_prefactor(lambda: &GLWeight) -> Result<FactoredRational> {
    let vars = qt_vars();
    let n = lambda.n();
    let one = Coeff::one();
    let mut acc = FactoredRational::one(&vars);
    for i in 1..n {
        for j in i..n {
            let len = lambda.interval(i, j);
            if len < 0 {
                return Err(Error::InvalidInput(format!("{lambda} is not dominant")));
            }
            let d = (j - i) as i32;
            acc = acc
                .mul(&poch(
                    &vars,
                    0,
                    &Monomial::from_slice(&[0, d + 1]),
                    &one,
                    len as u32,
                ))
                .div(&poch(
                    &vars,
                    0,
                    &Monomial::from_slice(&[1, d]),
                    &one,
                    len as u32,
                ))?;
        }
    }
    Ok(acc)
}

/// The closed form: `(H_0 * prefactor, P_lambda)` with `P` taken at the
/// component partition.
pub fn h_equals_p(lambda: &GLWeight) -> Result<(FactoredRational, SymmetricPolynomial)> {
    let mu = lambda
        .partition()
        .ok_or_else(|| Error::InvalidInput(format!("{lambda} is not dominant")))?;
    let pre = h0_closed(lambda.n())?.mul(&c_prefactor(lambda)?);
    Ok((pre, macdonald_p_qt(&mu, lambda.n())?))
}

/// `[q, t] -> [q, t, z1..zN]`.
fn lift_images(n: usize) -> Vec<Monomial> {
    vec![Monomial::unit(n + 2, 0, 1), Monomial::unit(n + 2, 1, 1)]
}

/// `pre * P` as one rational function of `q, t, z`.
pub fn closed_ratfunc(pre: &FactoredRational, p: &SymmetricPolynomial) -> Result<RationalFunction> {
    let n = p.n();
    let vars = qtz_vars(n);
    let img = lift_images(n);
    let mut parts = Vec::new();
    for (mu, c) in p.coeffs() {
        let m = monomial_symmetric_poly(&vars, mu, n);
        parts.push(c.map_monomials(&vars, &img)?.mul_poly(&m));
    }
    let sum = RationalFunction::sum(&vars, parts.iter());
    Ok(sum.mul_factored(&pre.map_monomials(&vars, &img)?))
}

/// Expansion of the closed form through `order`, optionally times
/// `prod_{i=1}^{N-2} ((t^i;q)_inf / (q t^{i+1};q)_inf)^{N-i-1}`.
pub fn closed_series(lambda: &GLWeight, order: i64, with_bq_factor: bool) -> Result<QtSeries> {
    let (pre, p) = h_equals_p(lambda)?;
    let mut r = closed_ratfunc(&pre, &p)?;
    if with_bq_factor {
        r = r.mul_factored(&bq_factor(lambda.n(), order)?);
    }
    QtSeries::from_ratfunc(&r, order)
}

fn inf_pow(vars: &Vars, m: Monomial, e: i32, order: i64) -> Result<FactoredRational> {
    poch_inf_factors(vars, 0, &m, &Coeff::one(), order)?.pow(e)
}

/// `prod_{i=1}^{N-2} ((t^i;q)_inf / (q t^{i+1};q)_inf)^{N-i-1}` cut to `order`.
pub fn bq_factor(n: usize, order: i64) -> Result<FactoredRational> {
    let vars = qtz_vars(n);
    let mut acc = FactoredRational::one(&vars);
    for i in 1..n.saturating_sub(1) {
        let e = (n - i - 1) as i32;
        let ti = crate::laumon::qtz(n, 0, i as i64, 1, 1);
        let qti = crate::laumon::qtz(n, 1, i as i64 + 1, 1, 1);
        acc = acc
            .mul(&inf_pow(&vars, ti, e, order)?)
            .mul(&inf_pow(&vars, qti, -e, order)?);
    }
    Ok(acc)
}

/// `K_r(lambda)`:
/// `prod_{k=r}^{N-1} (1 - t^{k-r+2} q^{l_r+...+l_k-1}) / (1 - t^{k-r+1} q^{l_r+...+l_k})`
/// `* prod_{k=1}^{r-1} (1 - t^{k-1} q^{l_{r-1}+...+l_{r-k}+1}) / (1 - t^k q^{l_{r-1}+...+l_{r-k}})`.
pub fn frakd_k(lambda: &GLWeight, r: usize) -> Result<FactoredRational> {
    let n = lambda.n();
    if r == 0 || r > n {
        return Err(Error::InvalidInput(format!("r = {r} out of range 1..={n}")));
    }
    let vars = qt_vars();
    let mut acc = FactoredRational::one(&vars);
    for k in r..n {
        let s = lambda.interval(r, k);
        let d = (k - r) as i64;
        acc = acc.mul_poly_pow(&qt_binomial(&vars, s - 1, d + 2), 1)?;
        if acc.is_zero() {
            return Ok(acc);
        }
        acc = acc.mul_poly_pow(&qt_binomial(&vars, s, d + 1), -1)?;
    }
    for k in 1..r {
        let s = lambda.interval(r - k, r - 1);
        let k = k as i64;
        acc = acc.mul_poly_pow(&qt_binomial(&vars, s + 1, k - 1), 1)?;
        if acc.is_zero() {
            return Ok(acc);
        }
        acc = acc.mul_poly_pow(&qt_binomial(&vars, s, k), -1)?;
    }
    Ok(acc)
}

/// `G_lambda = H_0 * prefactor * P_mu(z; q, t)` with `mu` the partition
/// `(l_1+...+l_{N-1}, ..., l_1, 0)`, and `None` (zero) off the dominant cone.
fn g_closed(
    l: &[i64],
    mu: Option<Partition>,
) -> Result<Option<(FactoredRational, SymmetricPolynomial)>> {
    let Some(mu) = mu else { return Ok(None) };
    let w = GLWeight::new(l.to_vec());
    if !w.is_dominant() {
        return Ok(None);
    }
    let pre = h0_closed(w.n())?.mul(&c_prefactor(&w)?);
    Ok(Some((pre, macdonald_p_qt(&mu, w.n())?)))
}

/// Check `sum_r K_r(lambda) G_{T_r lambda} = (z_1 + ... + z_N) G_lambda`
/// exactly, coefficientwise in the monomial basis.
pub fn verify_cor_diff(lambda: &GLWeight) -> Result<usize> {
    let n = lambda.n();
    let l = lambda.l();
    let mu = dictionary_partition(l)
        .ok_or_else(|| Error::InvalidInput(format!("{lambda} is not dominant")))?;
    let vars = qt_vars();
    let (g_pre, g_p) = g_closed(l, Some(mu.clone()))?.expect("dominant");
    let mut terms = Vec::new();
    for r in 1..=n {
        let shifted = shift_weight(l, r);
        let Some((pre, p)) = g_closed(&shifted, pieri_target(&mu, r, n))? else {
            continue;
        };
        let k = frakd_k(lambda, r)?;
        terms.push((k.mul(&pre).to_ratfunc(), p));
    }
    let g_pre = g_pre.to_ratfunc();
    let targets = Partition::all_of_size(mu.size() + 1, n);
    for nu in &targets {
        let lhs: Vec<RationalFunction> = terms.iter().map(|(c, p)| c.mul(&p.coeff(nu))).collect();
        let lhs = RationalFunction::sum(&vars, lhs.iter());
        let padded = nu.padded(n);
        let rhs: Vec<RationalFunction> = (0..n)
            .filter(|&i| padded[i] > 0)
            .map(|i| {
                let mut w = padded.clone();
                w[i] -= 1;
                g_p.coeff_of_exponent(&w)
            })
            .collect();
        let rhs = RationalFunction::sum(&vars, rhs.iter()).mul(&g_pre);
        if !lhs.equals(&rhs) {
            return Err(Error::IdentityFails(format!(
                "difference equation at m{nu} for {lambda}"
            )));
        }
    }
    Ok(targets.len())
}

/// Which infinite factor multiplies the Weyl localization sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeylSumKind {
    /// The full `alpha -> infinity` limit of the local series: gives `H`.
    Limit,
    /// The limit without `prod ((q t^{i+1};q)_inf / (t^i;q)_inf)^{N-i-1}`.
    Bq,
}

/// Result of a truncated Weyl localization sum.
#[derive(Clone, Debug)]
pub struct WeylSum {
    pub series: QtSeries,
    /// Entry bound of the theta box at which all boundary terms vanish through `order`.
    pub radius: u32,
    pub terms_kept: usize,
}

fn weyl_sum_at(
    lambda: &GLWeight,
    order: i64,
    kind: WeylSumKind,
    radius: u32,
) -> Result<(QtSeries, usize, i64)> {
    let n = lambda.n();
    let vars = qtz_vars(n);
    let inv = q_inverse_images(n);
    let mut tail = crate::laumon::j_infinity_factored(n, order)?;
    if kind == WeylSumKind::Bq {
        tail = tail.mul(&bq_factor(n, order)?);
    }
    let tail = tail.mul(&positive_root_factor(n)?);
    let comps = lambda.components();
    let thetas = ThetaMatrix::bounded(n, radius);
    let scored = thetas
        .par_iter()
        .map(|th| {
            let c = c_theta(th)?.map_monomials(&vars, &inv)?;
            let lead = FactoredRational::monomial(
                &vars,
                z_pow(n, &comps, lambda.pairing(&th.degree().0)),
                Coeff::one(),
            );
            let f = c.mul(&lead);
            let v = f.valuation().unwrap_or(i64::MAX);
            let edge = th.entries().contains(&radius);
            Ok((f, v, edge))
        })
        .collect::<Result<Vec<_>>>()?;
    let min_edge = scored
        .iter()
        .filter(|(_, _, e)| *e)
        .map(|(_, v, _)| *v)
        .min()
        .unwrap_or(i64::MAX);
    let kept: Vec<FactoredRational> = scored
        .into_iter()
        .filter(|(_, v, _)| *v <= order)
        .map(|(f, _, _)| f.mul(&tail))
        .collect();
    let count = kept.len();
    let ws = WeylElement::all(n);
    let terms = ws
        .par_iter()
        .map(|w| {
            kept.iter()
                .map(|f| apply_w(f, w).map(|g| (g, None)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let terms: Vec<(FactoredRational, Option<QtSeries>)> = terms.into_iter().flatten().collect();
    Ok((QtSeries::expand_sum(&vars, &terms, order)?, count, min_edge))
}

/// The Weyl localization sum over all theta, truncated by exact valuation:
/// the theta box grows until its boundary lies above `order`, and doubling
/// the box must change nothing.
pub fn weyl_localization(lambda: &GLWeight, order: i64, kind: WeylSumKind) -> Result<WeylSum> {
    let mut radius = 1;
    let (series, kept) = loop {
        let (s, k, edge) = weyl_sum_at(lambda, order, kind, radius)?;
        if edge > order {
            break (s, k);
        }
        radius += 1;
        if radius > 16 {
            return Err(Error::NonConvergent(format!("Weyl sum for {lambda}")));
        }
    };
    let (doubled, k2, _) = weyl_sum_at(lambda, order, kind, 2 * radius)?;
    if k2 != kept || !doubled.agrees_to(&series, order) {
        return Err(Error::NotStabilized(format!(
            "Weyl sum for {lambda} at radius {radius} vs {}",
            2 * radius
        )));
    }
    Ok(WeylSum {
        series,
        radius,
        terms_kept: kept,
    })
}

/// `H_0 * prefactor * prod (...)^{N-i-1} * P` expanded through `order`.
pub fn chi_bq(lambda: &GLWeight, order: i64) -> Result<QtSeries> {
    closed_series(lambda, order, true)
}

/// Coefficient comparison of two series through `order`; returns the keys
/// of the `(q, t)` monomials that differ.
pub fn series_mismatches(
    a: &QtSeries,
    b: &QtSeries,
    order: i64,
) -> Vec<(Vec<i32>, String, String)> {
    let ca = a.truncate(order).components();
    let cb = b.truncate(order).components();
    let mut keys: Vec<&Vec<i32>> = ca.keys().chain(cb.keys()).collect();
    keys.sort();
    keys.dedup();
    let zero = LaurentPolynomial::zero(a.vars());
    keys.into_iter()
        .filter_map(|k| {
            let x = ca.get(k).unwrap_or(&zero);
            let y = cb.get(k).unwrap_or(&zero);
            (x != y).then(|| (k.clone(), x.to_string(), y.to_string()))
        })
        .collect()
}

/// Compare the stabilized limit with the closed form through `order`.
pub fn verify_h_equals_p(
    lambda: &GLWeight,
    schedule: &[CompositionAlpha],
    order: i64,
) -> Result<Stabilization> {
    let st = h_limit(lambda, schedule, order)?;
    let want = closed_series(lambda, order, false)?;
    let got = st.limit().expect("stabilized");
    let bad = series_mismatches(got, &want, order);
    if let Some((k, x, y)) = bad.first() {
        return Err(Error::MismatchAt(format!(
            "q,t exponent {k:?}: limit {x}, closed {y}"
        )));
    }
    Ok(st)
}

/// Closed formula against the truncated Weyl sum.
pub fn verify_chi_bq(lambda: &GLWeight, order: i64) -> Result<WeylSum> {
    let ws = weyl_localization(lambda, order, WeylSumKind::Bq)?;
    let want = chi_bq(lambda, order)?;
    if let Some((k, x, y)) = series_mismatches(&ws.series, &want, order).first() {
        return Err(Error::MismatchAt(format!(
            "q,t exponent {k:?}: Weyl sum {x}, closed {y}"
        )));
    }
    Ok(ws)
}

/// Integer coefficients of a `t`-only series, for reports.
pub fn t_coefficients(s: &QtSeries) -> BTreeMap<i32, Coeff> {
    s.poly()
        .terms()
        .iter()
        .map(|(m, c)| (m.get(1), c.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(l: &[i64]) -> GLWeight {
        GLWeight::new(l.to_vec())
    }

    #[test]
    fn weights_and_pairing() {
        let l = w(&[1, 2]);
        assert_eq!(l.components(), vec![3, 2, 0]);
        assert_eq!(GLWeight::from_components(&[3, 2, 0]), l);
        for i in 0..2 {
            for j in 0..2 {
                let mut g = vec![0; 2];
                g[i] = 1;
                let mut lj = vec![0; 2];
                lj[j] = 1;
                assert_eq!(w(&lj).pairing(&g), i64::from(i == j));
            }
        }
        assert_eq!(w(&[0, 0]).shifted(2), w(&[1, -1]));
        assert!(!w(&[1, -1]).is_dominant());
    }

    #[test]
    fn weyl_group() {
        let all = WeylElement::all(3);
        assert_eq!(all.len(), 6);
        for a in &all {
            assert_eq!(a.compose(&a.inverse()), WeylElement::identity(3));
            for b in &all {
                let ab = a.compose(b);
                assert!(all.contains(&ab));
            }
        }
        assert_eq!(w_poly(3), vec![1.into(), 2.into(), 2.into(), 1.into()]);
    }

    #[test]
    fn degree_zero_sum() {
        let r = euler_char_global(&CompositionAlpha(vec![0]), &GLWeight::zero(2)).unwrap();
        let v = qtz_vars(2);
        let want = LaurentPolynomial::from_terms(
            &v,
            [
                (Monomial::one(4), Coeff::one()),
                (Monomial::unit(4, 1, 1), Coeff::one()),
            ],
        );
        assert_eq!(r.as_poly(), Some(&want));
        let r1 = euler_char_global(&CompositionAlpha(vec![1]), &GLWeight::zero(2)).unwrap();
        assert!(is_weyl_invariant(&r1, 2).unwrap());
    }

    #[test]
    fn h0_and_counts() {
        let f2: Vec<BigInt> = f_poly(2, 6);
        assert_eq!(f2, [1, 0, 1, 0, 1, 0, 1].map(BigInt::from).to_vec());
        assert_eq!(f_poly(3, 2), [1, 1, 3].map(BigInt::from).to_vec());
        for n in 2..=4 {
            verify_h0(n, 8).unwrap();
        }
        let h2 = h0_closed(2).unwrap();
        let v = qt_vars();
        let want = FactoredRational::one(&v)
            .mul_poly_pow(&qt_binomial(&v, 0, 1), -1)
            .unwrap();
        assert!(crate::algebra::rational_eq(&h2, &want));
    }

    #[test]
    fn k_coefficients() {
        let v = qt_vars();
        let b = |a, c| qt_binomial(&v, a, c);
        let one = FactoredRational::one(&v);
        let k2 = frakd_k(&GLWeight::zero(2), 2).unwrap();
        let want = one
            .mul_poly_pow(&b(1, 0), 1)
            .unwrap()
            .mul_poly_pow(&b(0, 1), -1)
            .unwrap();
        assert!(crate::algebra::rational_eq(&k2, &want));
        let k1 = frakd_k(&GLWeight::zero(2), 1).unwrap();
        let want = one
            .mul_poly_pow(&b(-1, 2), 1)
            .unwrap()
            .mul_poly_pow(&b(0, 1), -1)
            .unwrap();
        assert!(crate::algebra::rational_eq(&k1, &want));
    }

    #[test]
    fn difference_equation() {
        verify_cor_diff(&GLWeight::zero(2)).unwrap();
        verify_cor_diff(&w(&[1])).unwrap();
        verify_cor_diff(&w(&[0, 1])).unwrap();
    }
}
