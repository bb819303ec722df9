//! Macdonald polynomials `P_lambda(y; q, s)`: the tableau sum, the first
//! Macdonald difference operator, an eigenvector solve used as an oracle,
//! and the Pieri coefficients `L_r`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use rayon::prelude::*;

use crate::algebra::{
    rat, Coeff, FactoredRational, LaurentPolynomial, Monomial, RationalFunction, Vars,
};
use crate::error::{Error, Result};
use crate::qcalc::{apply_qshift, poch, QShift};
use crate::tableaux::{
    enumerate_pol_lambda, strip_sizes, theta_to_tableau, Partition, ThetaMatrix,
};

/// Coefficient field variables `[q, s]`.
pub fn qs_vars() -> Vars {
    Vars::new(["q", "s"])
}

/// Polynomial ring `[q, s, y1..yN]`.
pub fn y_vars(n: usize) -> Vars {
    Vars::indexed(&["q", "s"], "y", n)
}

/// A symmetric polynomial in `y_1..y_N` in the monomial basis, with
/// rational-function coefficients.
#[derive(Clone, Debug)]
pub struct SymmetricPolynomial {
    vars: Vars,
    n: usize,
    coeffs: BTreeMap<Partition, RationalFunction>,
}

impl SymmetricPolynomial {
    pub fn zero(vars: &Vars, n: usize) -> Self {
        SymmetricPolynomial {
            vars: vars.clone(),
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_coeffs(
        vars: &Vars,
        n: usize,
        coeffs: BTreeMap<Partition, RationalFunction>,
    ) -> Self {
        SymmetricPolynomial {
            vars: vars.clone(),
            n,
            coeffs: coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, RationalFunction> {
        &self.coeffs
    }

    pub fn coeff(&self, mu: &Partition) -> RationalFunction {
        self.coeffs
            .get(mu)
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(&self.vars))
    }

    /// Coefficient of the monomial `y^alpha`.
    pub fn coeff_of_exponent(&self, alpha: &[u32]) -> RationalFunction {
        self.coeff(&Partition::sorted_from(alpha))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn reduce(&self) -> Self {
        SymmetricPolynomial {
            vars: self.vars.clone(),
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (k.clone(), v.reduce()))
                .collect(),
        }
    }

    /// The first partition (in descending order) where the coefficients differ.
    pub fn first_difference(&self, o: &Self) -> Option<Partition> {
        let keys: std::collections::BTreeSet<&Partition> =
            self.coeffs.keys().chain(o.coeffs.keys()).collect();
        keys.into_iter()
            .rev()
            .find(|k| !self.coeff(k).equals(&o.coeff(k)))
            .cloned()
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.n == o.n && self.first_difference(o).is_none()
    }

    /// Rewrite coefficients in another variable set, e.g. `s -> t`.
    pub fn map_coeff_vars(&self, target: &Vars, images: &[Monomial]) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (k, v) in &self.coeffs {
            coeffs.insert(k.clone(), v.map_monomials(target, images)?);
        }
        Ok(SymmetricPolynomial {
            vars: target.clone(),
            n: self.n,
            coeffs,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "vars": self.vars.names(),
            "terms": self.coeffs.iter().rev().map(|(p, c)| serde_json::json!({
                "partition": p.parts(),
                "coef": c.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for SymmetricPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, (p, c)) in self.coeffs.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let one = c.as_poly().is_some_and(|p| p.is_one());
            if one {
                write!(f, "m{p}")?;
            } else {
                write!(f, "({c})*m{p}")?;
            }
        }
        Ok(())
    }
}

/// Distinct rearrangements of `v`, in lexicographic order.
pub fn distinct_permutations(v: &[u32]) -> Vec<Vec<u32>> {
    let mut cur = v.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len())
            .rev()
            .find(|&j| cur[j] > cur[i - 1])
            .expect("pivot");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

pub fn monomial_symmetric(mu: &Partition, n: usize) -> Result<SymmetricPolynomial> {
    if mu.len() > n {
        return Err(Error::InvalidInput(format!("{mu} has more than {n} parts")));
    }
    let vars = qs_vars();
    let mut coeffs = BTreeMap::new();
    coeffs.insert(mu.clone(), RationalFunction::one(&vars));
    Ok(SymmetricPolynomial::from_coeffs(&vars, n, coeffs))
}

/// `m_mu` as an explicit polynomial over `vars`, whose last `n` variables
/// are `y_1..y_N`.
pub fn monomial_symmetric_poly(vars: &Vars, mu: &Partition, n: usize) -> LaurentPolynomial {
    let off = vars.len() - n;
    LaurentPolynomial::from_terms(
        vars,
        distinct_permutations(&mu.padded(n))
            .into_iter()
            .map(|perm| {
                let mut m = Monomial::one(vars.len());
                for (i, e) in perm.into_iter().enumerate() {
                    m.set(off + i, e as i32);
                }
                (m, Coeff::one())
            }),
    )
}

/// The tableau coefficient `psi_T(q, s)` as a product of q-Pochhammer ratios.
pub fn psi_t(theta: &ThetaMatrix, lambda: &Partition) -> Result<FactoredRational> {
    let vars = qs_vars();
    let chain = theta_to_tableau(theta, lambda)?;
    let n = theta.n();
    let qs = |a: i64, b: i64| Monomial::from_slice(&[a as i32, b as i32]);
    let mut acc = FactoredRational::one(&vars);
    let one = Coeff::one();
    for k in 1..=n {
        for i in 1..k {
            let th = theta.get(i, k);
            if th == 0 {
                continue;
            }
            let lik = chain[k].part(i - 1) as i64;
            for j in i..k {
                let a = lik - chain[k - 1].part(j - 1) as i64;
                let b = lik - chain[k].part(j) as i64;
                let e = (i as i64) - (j as i64);
                let num = poch(&vars, 0, &qs(1 - a, e - 1), &one, th).mul(&poch(
                    &vars,
                    0,
                    &qs(-b, e),
                    &one,
                    th,
                ));
                let den = poch(&vars, 0, &qs(-a, e), &one, th).mul(&poch(
                    &vars,
                    0,
                    &qs(1 - b, e - 1),
                    &one,
                    th,
                ));
                acc = acc.mul(&num).div(&den)?;
            }
        }
    }
    Ok(acc)
}

/// Full monomial expansion of the tableau sum: weight `alpha` to the sum
/// of `psi_T` over tableaux of that weight.
pub fn tableau_sum(lambda: &Partition, n: usize) -> Result<BTreeMap<Vec<u32>, RationalFunction>> {
    if lambda.len() > n {
        return Err(Error::InvalidInput(format!(
            "{lambda} has more than {n} parts"
        )));
    }
    let vars = qs_vars();
    let pol = enumerate_pol_lambda(lambda, n);
    let items = pol
        .par_iter()
        .map(|th| {
            let w: Vec<u32> = strip_sizes(th, lambda)
                .into_iter()
                .map(|x| x as u32)
                .collect();
            Ok((w, RationalFunction::from_factored(&psi_t(th, lambda)?)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut grouped: BTreeMap<Vec<u32>, Vec<RationalFunction>> = BTreeMap::new();
    for (w, r) in items {
        grouped.entry(w).or_default().push(r);
    }
    let summed: Vec<(Vec<u32>, RationalFunction)> = grouped
        .into_par_iter()
        .map(|(w, rs)| (w, RationalFunction::sum(&vars, rs.iter()).reduce()))
        .collect();
    Ok(summed.into_iter().filter(|(_, r)| !r.is_zero()).collect())
}

/// `P_lambda` from the tableau sum; checks symmetry and unitriangularity.
pub fn macdonald_p(lambda: &Partition, n: usize) -> Result<SymmetricPolynomial> {
    let full = tableau_sum(lambda, n)?;
    let vars = qs_vars();
    let zero = RationalFunction::zero(&vars);
    let asym = full.par_iter().find_first(|(w, c)| {
        let sorted = Partition::sorted_from(w);
        let key = sorted.padded(n);
        !c.equals(full.get(&key).unwrap_or(&zero))
    });
    if let Some((w, _)) = asym {
        return Err(Error::IdentityFails(format!(
            "tableau sum not symmetric at {w:?}"
        )));
    }
    let mut coeffs = BTreeMap::new();
    for (w, c) in &full {
        if w.windows(2).all(|p| p[0] >= p[1]) {
            let mu = Partition::new(w.clone())?;
            if !lambda.dominates(&mu) {
                return Err(Error::IdentityFails(format!(
                    "{mu} is not dominated by {lambda}"
                )));
            }
            coeffs.insert(mu, c.clone());
        }
    }
    let lead = coeffs.get(lambda).cloned().unwrap_or_else(|| zero.clone());
    if !lead.equals(&RationalFunction::one(&vars)) {
        return Err(Error::IdentityFails(format!(
            "coefficient of m{lambda} is {lead}"
        )));
    }
    Ok(SymmetricPolynomial::from_coeffs(&vars, n, coeffs))
}

/// `sum_i prod_{j != i} (s y_i - y_j)/(y_i - y_j) T_{q,y_i} f` for a
/// polynomial `f` over [`y_vars`]. Multiplies through by the Vandermonde
/// product and divides it out exactly.
pub fn apply_d1n_poly(f: &LaurentPolynomial, n: usize) -> Result<LaurentPolynomial> {
    let vars = f.vars().clone();
    let s = vars.require("s")?;
    let y: Vec<LaurentPolynomial> = (1..=n)
        .map(|i| {
            vars.require(&format!("y{i}"))
                .map(|k| LaurentPolynomial::var(&vars, k))
        })
        .collect::<Result<_>>()?;
    let sv = LaurentPolynomial::var(&vars, s);
    let diff = |a: usize, b: usize| y[a].sub(&y[b]);
    let mut vand = LaurentPolynomial::one(&vars);
    for a in 0..n {
        for b in a + 1..n {
            vand = vand.mul(&diff(a, b));
        }
    }
    let terms: Vec<LaurentPolynomial> = (0..n)
        .into_par_iter()
        .map(|i| {
            let shifted = apply_qshift(f, &QShift::new(format!("y{}", i + 1), 1))?;
            let mut c = shifted;
            for j in (0..n).filter(|&j| j != i) {
                c = c.mul(&sv.mul(&y[i]).sub(&y[j]));
            }
            for a in (0..n).filter(|&a| a != i) {
                for b in (a + 1..n).filter(|&b| b != i) {
                    c = c.mul(&diff(a, b));
                }
            }
            Ok(if i % 2 == 1 { c.neg() } else { c })
        })
        .collect::<Result<_>>()?;
    let mut acc = LaurentPolynomial::zero(&vars);
    for t in &terms {
        acc = acc.add(t);
    }
    acc.div_exact(&vand)
        .ok_or_else(|| Error::DenominatorSurvives("Vandermonde product".into()))
}

/// Monomial-basis coefficients of a symmetric polynomial over [`y_vars`].
fn m_coefficients(p: &LaurentPolynomial, n: usize) -> BTreeMap<Partition, LaurentPolynomial> {
    let qs = qs_vars();
    let mut buckets: BTreeMap<Partition, Vec<(Monomial, Coeff)>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let ys = &m.exps()[2..2 + n];
        if ys.iter().all(|&e| e >= 0) && ys.windows(2).all(|w| w[0] >= w[1]) {
            let mu = Partition::new(ys.iter().map(|&e| e as u32).collect()).expect("decreasing");
            buckets
                .entry(mu)
                .or_default()
                .push((Monomial::from_slice(&m.exps()[..2]), c.clone()));
        }
    }
    buckets
        .into_iter()
        .map(|(k, v)| (k, LaurentPolynomial::from_terms(&qs, v)))
        .collect()
}

/// Column `mu` of the operator in the monomial basis: `D m_mu = sum_nu d_{nu mu} m_nu`.
pub fn d1n_column(mu: &Partition, n: usize) -> Result<BTreeMap<Partition, LaurentPolynomial>> {
    let vars = y_vars(n);
    let out = apply_d1n_poly(&monomial_symmetric_poly(&vars, mu, n), n)?;
    Ok(m_coefficients(&out, n))
}

pub fn apply_d1n(f: &SymmetricPolynomial) -> Result<SymmetricPolynomial> {
    let n = f.n();
    let vars = qs_vars();
    if *f.vars() != vars {
        return Err(Error::ContextMismatch);
    }
    let keys: Vec<&Partition> = f.coeffs().keys().collect();
    let cols = keys
        .par_iter()
        .map(|mu| d1n_column(mu, n))
        .collect::<Result<Vec<_>>>()?;
    let mut acc: BTreeMap<Partition, Vec<RationalFunction>> = BTreeMap::new();
    for (mu, col) in keys.iter().zip(&cols) {
        let c = &f.coeffs()[*mu];
        for (nu, d) in col {
            acc.entry(nu.clone()).or_default().push(c.mul_poly(d));
        }
    }
    let coeffs = acc
        .into_iter()
        .map(|(k, v)| (k, RationalFunction::sum(&vars, v.iter())))
        .collect();
    Ok(SymmetricPolynomial::from_coeffs(&vars, n, coeffs))
}

/// `sum_i q^{lambda_i} s^{N-i}`.
pub fn eigenvalue(lambda: &Partition, n: usize) -> LaurentPolynomial {
    let vars = qs_vars();
    LaurentPolynomial::from_terms(
        &vars,
        (0..n).map(|i| {
            (
                Monomial::from_slice(&[lambda.part(i) as i32, (n - 1 - i) as i32]),
                Coeff::one(),
            )
        }),
    )
}

/// `P_lambda` as the eigenvector of the operator with eigenvalue
/// [`eigenvalue`], solved by back substitution down the dominance order.
pub fn macdonald_p_oracle(lambda: &Partition, n: usize) -> Result<SymmetricPolynomial> {
    if lambda.len() > n {
        return Err(Error::InvalidInput(format!(
            "{lambda} has more than {n} parts"
        )));
    }
    let vars = qs_vars();
    let parts: Vec<Partition> = Partition::all_of_size(lambda.size(), n)
        .into_iter()
        .filter(|nu| lambda.dominates(nu))
        .collect();
    let cols = parts
        .par_iter()
        .map(|mu| d1n_column(mu, n))
        .collect::<Result<Vec<_>>>()?;
    let e_lambda = eigenvalue(lambda, n);
    let mut u: Vec<RationalFunction> = Vec::with_capacity(parts.len());
    for (k, nu) in parts.iter().enumerate() {
        if k == 0 {
            u.push(RationalFunction::one(&vars));
            continue;
        }
        let rhs: Vec<RationalFunction> = (0..k)
            .filter_map(|m| cols[m].get(nu).map(|d| u[m].mul_poly(d)))
            .collect();
        let rhs = RationalFunction::sum(&vars, rhs.iter());
        let d_nn = cols[k]
            .get(nu)
            .cloned()
            .unwrap_or_else(|| LaurentPolynomial::zero(&vars));
        let gap = e_lambda.sub(&d_nn);
        if gap.is_zero() {
            return Err(Error::EigenvalueCollision(
                lambda.to_string(),
                nu.to_string(),
            ));
        }
        let inv = FactoredRational::one(&vars).mul_poly_pow(&gap, -1)?;
        u.push(rhs.mul_factored(&inv).reduce());
    }
    Ok(SymmetricPolynomial::from_coeffs(
        &vars,
        n,
        parts.into_iter().zip(u).collect(),
    ))
}

/// Partition attached to `(l_1, ..., l_{N-1})`:
/// `(l_1 + ... + l_{N-1}, ..., l_1 + l_2, l_1, 0)`; `None` if some `l_i < 0`.
pub fn dictionary_partition(l: &[i64]) -> Option<Partition> {
    if l.iter().any(|&x| x < 0) {
        return None;
    }
    let n = l.len() + 1;
    let parts = (1..=n)
        .map(|k| l[..n - k].iter().sum::<i64>() as u32)
        .collect();
    Partition::new(parts).ok()
}

/// The shift `T_r` on `(l_1, ..., l_{N-1})`: `l_{r-1} + 1`, `l_r - 1`.
pub fn shift_weight(l: &[i64], r: usize) -> Vec<i64> {
    let mut out = l.to_vec();
    if r >= 2 {
        out[r - 2] += 1;
    }
    if r <= l.len() {
        out[r - 1] -= 1;
    }
    out
}

/// `mu + e_{N+1-r}`, the partition of `T_r` applied to the weight of `mu`
/// (without passing to `SL_N`); `None` if it is not a partition.
pub fn pieri_target(mu: &Partition, r: usize, n: usize) -> Option<Partition> {
    let mut v = mu.padded(n);
    v[n - r] += 1;
    Partition::new(v).ok()
}

/// Coefficient variables `[q, t]` of the Pieri rule.
pub fn qt_vars() -> Vars {
    Vars::new(["q", "t"])
}

/// Pieri coefficient `L_r` for `(l_1, ..., l_{N-1})`:
/// `prod_{d=1}^{N-r} (1 - q^{S-1} t^{d+1})(1 - q^S t^{d-1}) / ((1 - q^{S-1} t^d)(1 - q^S t^d))`
/// with `S = l_r + ... + l_{r+d-1}`.
pub fn pieri_l(l: &[i64], r: usize) -> Result<FactoredRational> {
    let vars = qt_vars();
    let n = l.len() + 1;
    let f = |a: i64, b: i64| {
        LaurentPolynomial::one_minus(&vars, Monomial::from_slice(&[a as i32, b as i32]), rat(1))
    };
    let mut acc = FactoredRational::one(&vars);
    let mut s = 0;
    for d in 1..=(n - r) as i64 {
        s += l[r - 1 + d as usize - 1];
        acc = acc
            .mul_poly_pow(&f(s - 1, d + 1), 1)?
            .mul_poly_pow(&f(s, d - 1), 1)?;
        if acc.is_zero() {
            return Ok(acc);
        }
        acc = acc
            .mul_poly_pow(&f(s - 1, d), -1)?
            .mul_poly_pow(&f(s, d), -1)?;
    }
    Ok(acc)
}

/// `P_mu(z; q, t)`: [`macdonald_p`] with `s` renamed to `t`.
pub fn macdonald_p_qt(mu: &Partition, n: usize) -> Result<SymmetricPolynomial> {
    let target = qt_vars();
    macdonald_p(mu, n)?.map_coeff_vars(
        &target,
        &[Monomial::from_slice(&[1, 0]), Monomial::from_slice(&[0, 1])],
    )
}

/// Checks `sum_r L_r P_{T_r l} = (z_1 + ... + z_N) P_l` coefficientwise,
/// with `P` of a weight having a negative coordinate read as zero.
/// Returns the first mismatching partition on failure.
pub fn verify_pieri(l: &[i64]) -> Result<()> {
    let n = l.len() + 1;
    let mu = dictionary_partition(l)
        .ok_or_else(|| Error::InvalidInput(format!("{l:?} is not dominant")))?;
    let vars = qt_vars();
    let p = macdonald_p_qt(&mu, n)?;
    let mut terms = Vec::new();
    for r in 1..=n {
        let Some(nu) = pieri_target(&mu, r, n) else {
            continue;
        };
        let coef = pieri_l(l, r)?;
        if coef.is_zero() {
            continue;
        }
        terms.push((coef.to_ratfunc(), macdonald_p_qt(&nu, n)?));
    }
    for nu in Partition::all_of_size(mu.size() + 1, n) {
        let lhs: Vec<RationalFunction> =
            terms.iter().map(|(c, pt)| c.mul(&pt.coeff(&nu))).collect();
        let lhs = RationalFunction::sum(&vars, lhs.iter());
        let padded = nu.padded(n);
        let rhs: Vec<RationalFunction> = (0..n)
            .filter(|&i| padded[i] > 0)
            .map(|i| {
                let mut w = padded.clone();
                w[i] -= 1;
                p.coeff_of_exponent(&w)
            })
            .collect();
        let rhs = RationalFunction::sum(&vars, rhs.iter());
        if !lhs.equals(&rhs) {
            return Err(Error::IdentityFails(format!("Pieri rule at m{nu}")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn rf(vars: &Vars, num: &[(&[i32], i64)], den: &[&[(&[i32], i64)]]) -> RationalFunction {
        let poly = |ts: &[(&[i32], i64)]| {
            LaurentPolynomial::from_terms(
                vars,
                ts.iter().map(|(m, c)| (Monomial::from_slice(m), rat(*c))),
            )
        };
        let mut f = FactoredRational::from_poly(&poly(num));
        for d in den {
            f = f.mul_poly_pow(&poly(d), -1).unwrap();
        }
        f.to_ratfunc()
    }

    #[test]
    fn permutations() {
        assert_eq!(distinct_permutations(&[2, 1, 0]).len(), 6);
        assert_eq!(distinct_permutations(&[1, 1, 0]).len(), 3);
        let v = y_vars(2);
        assert_eq!(
            monomial_symmetric_poly(&v, &p(&[1]), 2).to_string(),
            "y2 + y1"
        );
        assert_eq!(
            monomial_symmetric_poly(&v, &p(&[1, 1]), 2).to_string(),
            "y1*y2"
        );
        assert_eq!(monomial_symmetric_poly(&y_vars(3), &p(&[2, 1]), 3).len(), 6);
    }

    #[test]
    fn operator_on_small_inputs() {
        let v = y_vars(2);
        let one = apply_d1n_poly(&LaurentPolynomial::one(&v), 2).unwrap();
        assert_eq!(one.to_string(), "s + 1");
        let e1 = monomial_symmetric_poly(&v, &p(&[1]), 2);
        let got = apply_d1n_poly(&e1, 2).unwrap();
        let want = e1.mul(&LaurentPolynomial::from_terms(
            &v,
            [
                (Monomial::from_slice(&[1, 1, 0, 0]), rat(1)),
                (Monomial::one(4), rat(1)),
            ],
        ));
        assert_eq!(got, want);
        let e2 = monomial_symmetric_poly(&v, &p(&[1, 1]), 2);
        let got = apply_d1n_poly(&e2, 2).unwrap();
        assert_eq!(got.to_string(), "q*s*y1*y2 + q*y1*y2");
        let y1 = LaurentPolynomial::var(&v, 2);
        assert!(matches!(
            apply_d1n_poly(&y1, 2),
            Err(Error::DenominatorSurvives(_))
        ));
    }

    #[test]
    fn two_variable_p2() {
        let vars = qs_vars();
        let tab = macdonald_p(&p(&[2]), 2).unwrap();
        let want = rf(
            &vars,
            &[(&[0, 0], 1), (&[0, 1], -1), (&[1, 0], 1), (&[1, 1], -1)],
            &[&[(&[0, 0], 1), (&[1, 1], -1)]],
        );
        assert!(tab.coeff(&p(&[1, 1])).equals(&want));
        assert!(tab.coeff(&p(&[2])).equals(&RationalFunction::one(&vars)));
        let oracle = macdonald_p_oracle(&p(&[2]), 2).unwrap();
        assert!(tab.equals(&oracle));
    }

    #[test]
    fn single_box_and_column() {
        let m = macdonald_p(&p(&[1]), 3).unwrap();
        assert!(m.equals(&monomial_symmetric(&p(&[1]), 3).unwrap()));
        let c = macdonald_p(&p(&[1, 1]), 2).unwrap();
        assert!(c.equals(&monomial_symmetric(&p(&[1, 1]), 2).unwrap()));
        for th in enumerate_pol_lambda(&p(&[1]), 3) {
            assert!(psi_t(&th, &p(&[1])).unwrap().is_one());
        }
    }

    #[test]
    fn three_variables() {
        let lam = p(&[2, 1]);
        let tab = macdonald_p(&lam, 3).unwrap();
        let oracle = macdonald_p_oracle(&lam, 3).unwrap();
        assert_eq!(tab.first_difference(&oracle), None);
        let d = apply_d1n(&tab).unwrap();
        let e = RationalFunction::from_poly(eigenvalue(&lam, 3));
        for (mu, c) in tab.coeffs() {
            assert!(d.coeff(mu).equals(&c.mul(&e)));
        }
    }

    #[test]
    fn pieri() {
        let vars = qt_vars();
        let l1 = pieri_l(&[1], 1).unwrap();
        let want = rf(
            &vars,
            &[(&[0, 0], 1), (&[0, 2], -1)],
            &[&[(&[0, 0], 1), (&[0, 1], -1)]],
        )
        .mul(&rf(
            &vars,
            &[(&[0, 0], 1), (&[1, 0], -1)],
            &[&[(&[0, 0], 1), (&[1, 1], -1)]],
        ));
        assert!(l1.to_ratfunc().equals(&want));
        assert!(pieri_l(&[0], 2).unwrap().is_one());
        assert!(pieri_l(&[0], 1).unwrap().is_zero());
        assert_eq!(dictionary_partition(&[1, 2]), Some(p(&[3, 1])));
        assert_eq!(shift_weight(&[1, 2], 2), vec![2, 1]);
        verify_pieri(&[0]).unwrap();
        verify_pieri(&[1]).unwrap();
        verify_pieri(&[1, 0]).unwrap();
        verify_pieri(&[0, 1]).unwrap();
    }
}
