//! Named verification runs, each producing a [`VerificationReport`].

use std::time::Instant;

use rayon::prelude::*;

use crate::algebra::{
    ratfunc_eq_probabilistic, rational_eq, FactoredRational, Monomial, QtSeries, RationalFunction,
};
use crate::baker::{
    c2_printed, c2_printed_simplified, c3_printed, c3_printed_fixed, c_n_closed,
    c_n_closed_rewritten, c_n_recursive, specialize_f_to_p, verify_dai_ichi, BaContext,
};
use crate::error::{Error, Result};
use crate::global::{
    h0_closed, h_limit, sector_schedule, series_mismatches, verify_chi_bq, verify_cor_diff,
    verify_h0, verify_h_equals_p, GLWeight,
};
use crate::laumon::{
    an_summation_check, qtz_vars, sector_point, substitution_check, verify_junichi, verify_shir,
    ShirForm,
};
use crate::macdonald::{
    apply_d1n, eigenvalue, macdonald_p, macdonald_p_oracle, verify_pieri, SymmetricPolynomial,
};
use crate::report::{VerificationReport, Witness};
use crate::tableaux::{CompositionAlpha, Partition, ThetaMatrix};

/// How rational functions are compared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EqualityMode {
    /// Cross-multiplication; the only mode that can pass a check.
    #[default]
    Exact,
    /// Evaluation at seeded random rational points; reports are PREVIEW at best.
    Probabilistic,
}

const PREVIEW_SEED: u64 = 0x6d61_636c_6162;
const PREVIEW_SAMPLES: usize = 4;

fn same(a: &RationalFunction, b: &RationalFunction, mode: EqualityMode) -> bool {
    match mode {
        EqualityMode::Exact => a.equals(b),
        EqualityMode::Probabilistic => {
            ratfunc_eq_probabilistic(a, b, PREVIEW_SEED, PREVIEW_SAMPLES)
        }
    }
}

fn same_factored(a: &FactoredRational, b: &FactoredRational, mode: EqualityMode) -> bool {
    match mode {
        EqualityMode::Exact => rational_eq(a, b),
        EqualityMode::Probabilistic => {
            crate::algebra::rational_eq_probabilistic(a, b, PREVIEW_SEED, PREVIEW_SAMPLES)
        }
    }
}

/// Coefficients of `a` and `b` that differ, over the union of supports.
fn sym_diffs(
    a: &SymmetricPolynomial,
    b: &SymmetricPolynomial,
    mode: EqualityMode,
) -> Vec<Partition> {
    let mut keys: Vec<&Partition> = a.coeffs().keys().chain(b.coeffs().keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter(|k| !same(&a.coeff(k), &b.coeff(k), mode))
        .cloned()
        .collect()
}

fn timed(
    mut r: VerificationReport,
    mode: EqualityMode,
    f: impl FnOnce(&mut VerificationReport),
) -> VerificationReport {
    let start = Instant::now();
    f(&mut r);
    if mode == EqualityMode::Probabilistic {
        r.mark_preview();
    }
    r.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    r
}

/// `(lambda, N)` with `|lambda| <= max_size`, `l(lambda) <= N`, `1 <= N <= max_n`.
pub fn partition_range(max_size: u32, max_n: usize) -> Vec<(Partition, usize)> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for size in 0..=max_size {
            for p in Partition::all_of_size(size, n) {
                out.push((p, n));
            }
        }
    }
    out
}

/// Run `f` on every item in parallel, keep results in input order, and
/// fold them into `r`: each item contributes a case count and witnesses.
fn over<T: Sync>(
    r: &mut VerificationReport,
    items: &[T],
    f: impl Fn(&T) -> Result<(usize, Vec<Witness>)> + Sync,
    label: impl Fn(&T) -> String + Sync,
) {
    let results: Vec<_> = items.par_iter().map(|x| (label(x), f(x))).collect();
    for (lab, res) in results {
        match res {
            Ok((k, ws)) => {
                r.cases += k;
                for w in ws {
                    r.witness(w);
                }
            }
            Err(e) => {
                r.cases += 1;
                r.error(&lab, &e);
            }
        }
    }
}

/// Tableau sum against the eigenvector oracle.
pub fn tableau_vs_oracle(max_size: u32, max_n: usize, mode: EqualityMode) -> VerificationReport {
    let r = VerificationReport::new("tableau-vs-oracle")
        .param("max_size", max_size)
        .param("max_n", max_n);
    timed(r, mode, |r| {
        let items = partition_range(max_size, max_n);
        over(
            r,
            &items,
            |(lam, n)| {
                let tab = macdonald_p(lam, *n)?;
                let ora = macdonald_p_oracle(lam, *n)?;
                let ws = sym_diffs(&ora, &tab, mode)
                    .into_iter()
                    .map(|nu| {
                        Witness::new(
                            format!("P{lam} N={n} m{nu}"),
                            ora.coeff(&nu).to_string(),
                            tab.coeff(&nu).to_string(),
                        )
                    })
                    .collect();
                Ok((1, ws))
            },
            |(lam, n)| format!("P{lam} N={n}"),
        );
    })
}

/// `D^1_N P_lambda = (sum q^{lambda_i} s^{N-i}) P_lambda`.
pub fn eigen_identity(max_size: u32, max_n: usize, mode: EqualityMode) -> VerificationReport {
    let r = VerificationReport::new("eigen-identity")
        .param("max_size", max_size)
        .param("max_n", max_n);
    timed(r, mode, |r| {
        let items = partition_range(max_size, max_n);
        over(
            r,
            &items,
            |(lam, n)| {
                let p = macdonald_p(lam, *n)?;
                let lhs = apply_d1n(&p)?;
                let e = eigenvalue(lam, *n);
                let rhs = SymmetricPolynomial::from_coeffs(
                    p.vars(),
                    *n,
                    p.coeffs()
                        .iter()
                        .map(|(k, c)| (k.clone(), c.mul_poly(&e)))
                        .collect(),
                );
                let ws = sym_diffs(&rhs, &lhs, mode)
                    .into_iter()
                    .map(|nu| {
                        Witness::new(
                            format!("D P{lam} N={n} m{nu}"),
                            rhs.coeff(&nu).to_string(),
                            lhs.coeff(&nu).to_string(),
                        )
                    })
                    .collect();
                Ok((1, ws))
            },
            |(lam, n)| format!("P{lam} N={n}"),
        );
    })
}

fn theta_range(max_entry: u32, max_n: usize) -> Vec<ThetaMatrix> {
    (1..=max_n)
        .flat_map(|n| ThetaMatrix::bounded(n, max_entry))
        .collect()
}

/// Both closed displays of `c_N` against the recursion.
pub fn c_n_consistency(max_entry: u32, max_n: usize, mode: EqualityMode) -> VerificationReport {
    let r = VerificationReport::new("c-n-closed-vs-recursion")
        .param("max_entry", max_entry)
        .param("max_n", max_n);
    timed(r, mode, |r| {
        let items = theta_range(max_entry, max_n);
        over(
            r,
            &items,
            |th| {
                let rec = c_n_recursive(th)?;
                let mut ws = Vec::new();
                for (name, c) in [
                    ("closed", c_n_closed(th)?),
                    ("rewritten", c_n_closed_rewritten(th)?),
                ] {
                    if !same_factored(&rec, &c, mode) {
                        ws.push(Witness::new(
                            format!("{name} N={} {th}", th.n()),
                            rec.to_string(),
                            c.to_string(),
                        ));
                    }
                }
                Ok((1, ws))
            },
            |th| format!("N={} {th}", th.n()),
        );
    })
}

/// The printed two-variable coefficients (both forms) against the recursion.
pub fn printed_c2(max_entry: u32, mode: EqualityMode) -> VerificationReport {
    let r = VerificationReport::new("printed-c2").param("max_entry", max_entry);
    timed(r, mode, |r| {
        let items: Vec<u32> = (0..=max_entry).collect();
        over(
            r,
            &items,
            |&t| {
                let rec = c_n_recursive(&ThetaMatrix::from_triples(2, &[(1, 2, t)]))?;
                let mut ws = Vec::new();
                for (name, c) in [
                    ("first form", c2_printed(t)?),
                    ("second form", c2_printed_simplified(t)?),
                ] {
                    if !same_factored(&rec, &c, mode) {
                        ws.push(Witness::new(
                            format!("{name} theta12={t}"),
                            rec.to_string(),
                            c.to_string(),
                        ));
                    }
                }
                Ok((1, ws))
            },
            |t| format!("theta12={t}"),
        );
    })
}

/// The printed three-variable coefficient against the recursion; `fixed`
/// selects the corrected orientation of its `theta_13` factor.
pub fn printed_c3(max_entry: u32, fixed: bool, mode: EqualityMode) -> VerificationReport {
    let name = if fixed {
        "printed-c3-corrected"
    } else {
        "printed-c3-verbatim"
    };
    let r = VerificationReport::new(name).param("max_entry", max_entry);
    timed(r, mode, |r| {
        let items = ThetaMatrix::bounded(3, max_entry);
        over(
            r,
            &items,
            |th| {
                let rec = c_n_recursive(th)?;
                let c = if fixed {
                    c3_printed_fixed(th)?
                } else {
                    c3_printed(th)?
                };
                let ws = if same_factored(&rec, &c, mode) {
                    vec![]
                } else {
                    vec![Witness::new(th.to_string(), rec.to_string(), c.to_string())]
                };
                Ok((1, ws))
            },
            |th| th.to_string(),
        );
    })
}

/// Specialized `f_N`: support is `Pol_lambda` and the value is `P_lambda`.
pub fn specialization(max_size: u32, max_n: usize, mode: EqualityMode) -> VerificationReport {
    let r = VerificationReport::new("specialization")
        .param("max_size", max_size)
        .param("max_n", max_n);
    timed(r, mode, |r| {
        let items = partition_range(max_size, max_n);
        over(
            r,
            &items,
            |(lam, n)| specialize_f_to_p(lam, *n).map(|_| (1, vec![])),
            |(lam, n)| format!("f at {lam} N={n}"),
        );
    })
}

/// Coefficientwise eigen equation of `f_N`.
pub fn dai_ichi(n: usize, degree: u32) -> VerificationReport {
    let r = VerificationReport::new("f-eigen")
        .param("n", n)
        .param("degree", degree);
    timed(r, EqualityMode::Exact, |r| {
        match verify_dai_ichi(&BaContext {
            n,
            truncation: degree,
        }) {
            Ok(k) => r.cases = k,
            Err(e) => r.error("residual", &e),
        }
    })
}

/// The Pieri rule for all dominant `l` with `sum l <= max_sum`, `N <= max_n`.
pub fn pieri(max_sum: u32, max_n: usize) -> VerificationReport {
    let r = VerificationReport::new("pieri")
        .param("max_sum", max_sum)
        .param("max_n", max_n);
    timed(r, EqualityMode::Exact, |r| {
        let items = dominant_weights(max_sum, max_n);
        over(
            r,
            &items,
            |l| verify_pieri(l).map(|_| (1, vec![])),
            |l| format!("l={l:?}"),
        );
    })
}

/// Dominant `l` of length `N - 1` with `sum <= max_sum`, for `2 <= N <= max_n`.
pub fn dominant_weights(max_sum: u32, max_n: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for a in CompositionAlpha::all_up_to(n - 1, max_sum) {
            out.push(a.0.iter().map(|&x| x as i64).collect());
        }
    }
    out
}

/// The difference operator on the local series.
pub fn shir(n: usize, degree: u32, form: ShirForm) -> VerificationReport {
    let name = match form {
        ShirForm::Derived => "local-difference-operator",
        ShirForm::Printed => "local-difference-operator-printed",
    };
    let r = VerificationReport::new(name)
        .param("n", n)
        .param("degree", degree);
    timed(r, EqualityMode::Exact, |r| {
        match verify_shir(n, degree, form) {
            Ok(k) => r.cases = k,
            Err(e) => r.error("residual", &e),
        }
    })
}

/// `C_theta t^{-|theta|} = c_N(theta)|_{s = qt}`.
pub fn substitution(n: usize, degree: u32) -> VerificationReport {
    let r = VerificationReport::new("local-to-f-dictionary")
        .param("n", n)
        .param("degree", degree);
    timed(r, EqualityMode::Exact, |r| {
        match substitution_check(n, degree) {
            Ok(k) => r.cases = k,
            Err(e) => r.error("theta", &e),
        }
    })
}

/// Sector schedule for the local limit: `N=2` uses `d = 1..=alpha_max`,
/// higher rank `k (2^{N-2}, ..., 1)`.
pub fn local_schedule(n: usize, alpha_max: u32) -> Vec<CompositionAlpha> {
    (1..=alpha_max).map(|k| sector_point(n, k)).collect()
}

/// Stabilization of `J_alpha` and agreement with the infinite product.
pub fn junichi(n: usize, order: i64, alpha_max: u32) -> VerificationReport {
    let r = VerificationReport::new("local-limit")
        .param("n", n)
        .param("order", order)
        .param("alpha_max", alpha_max);
    timed(r, EqualityMode::Exact, |r| {
        let sched = local_schedule(n, alpha_max);
        match verify_junichi(n, order, &sched) {
            Ok(st) => {
                r.cases = st.values.len();
                let from = st.stable_from.expect("stabilized");
                r.detail("stable_from", st.schedule[from].to_string());
                r.detail("limit", st.values.last().expect("nonempty").to_string());
            }
            Err(e) => r.error("J_alpha", &e),
        }
    })
}

/// The type-A lattice summation against both product forms.
pub fn an_summation(coords: usize, order: i64) -> VerificationReport {
    let r = VerificationReport::new("lattice-summation")
        .param("coords", coords)
        .param("order", order);
    timed(r, EqualityMode::Exact, |r| {
        match an_summation_check(coords, order) {
            Ok(s) => {
                r.cases = s.terms_kept;
                r.detail("radius", s.radius);
                r.detail("sum", s.lhs.to_string());
            }
            Err(e) => r.error("sum", &e),
        }
    })
}

/// `H_0 = W(t) F(t)` through `t^order`.
pub fn h0_counting(n: usize, order: usize) -> VerificationReport {
    let r = VerificationReport::new("h0-counting")
        .param("n", n)
        .param("order", order);
    timed(r, EqualityMode::Exact, |r| match verify_h0(n, order) {
        Ok(()) => r.cases = order + 1,
        Err(e) => r.error("t-coefficient", &e),
    })
}

fn lift_to_qtz(f: &FactoredRational, n: usize) -> Result<FactoredRational> {
    f.map_monomials(
        &qtz_vars(n),
        &[Monomial::unit(n + 2, 0, 1), Monomial::unit(n + 2, 1, 1)],
    )
}

fn compare_series(
    r: &mut VerificationReport,
    label: &str,
    want: &QtSeries,
    got: &QtSeries,
    order: i64,
) {
    let bad = series_mismatches(want, got, order);
    r.cases += 1;
    for (k, x, y) in bad {
        r.witness(Witness::new(format!("{label} q^{}t^{}", k[0], k[1]), x, y));
    }
}

/// `H` at weight zero stabilizes to the closed `H_0`.
pub fn h0_limit(n: usize, order: i64, alpha_max: u32) -> VerificationReport {
    let r = VerificationReport::new("h0-limit")
        .param("n", n)
        .param("order", order)
        .param("alpha_max", alpha_max);
    timed(r, EqualityMode::Exact, |r| {
        let run = || -> Result<(QtSeries, QtSeries)> {
            let st = h_limit(&GLWeight::zero(n), &sector_schedule(n, alpha_max), order)?;
            let want = QtSeries::from_factored(&lift_to_qtz(&h0_closed(n)?, n)?, order)?;
            Ok((want, st.limit().expect("stabilized").clone()))
        };
        match run() {
            Ok((want, got)) => {
                r.detail("limit", got.to_string());
                compare_series(r, "H_0", &want, &got, order);
            }
            Err(e) => r.error("H_0", &e),
        }
    })
}

/// Stabilized `H` against `H_0 * prefactor * P`.
pub fn h_equals_p(l: &[i64], order: i64, alpha_max: u32) -> VerificationReport {
    let w = GLWeight::new(l.to_vec());
    let r = VerificationReport::new("h-equals-p")
        .param("weight", w.to_string())
        .param("order", order)
        .param("alpha_max", alpha_max);
    timed(r, EqualityMode::Exact, |r| {
        match verify_h_equals_p(&w, &sector_schedule(w.n(), alpha_max), order) {
            Ok(st) => {
                r.cases = 1;
                r.detail("limit", st.limit().expect("stabilized").to_string());
            }
            Err(e) => r.error(&format!("H at {w}"), &e),
        }
    })
}

/// The difference equation on the closed-form family.
pub fn cor_diff(l: &[i64]) -> VerificationReport {
    let w = GLWeight::new(l.to_vec());
    let r = VerificationReport::new("weight-difference-equation").param("weight", w.to_string());
    timed(r, EqualityMode::Exact, |r| match verify_cor_diff(&w) {
        Ok(k) => r.cases = k,
        Err(e) => r.error(&format!("weight {w}"), &e),
    })
}

/// A nondominant weight: `H` stabilizes to zero.
pub fn vanishing(l: &[i64], order: i64, alpha_max: u32) -> VerificationReport {
    let w = GLWeight::new(l.to_vec());
    let r = VerificationReport::new("vanishing")
        .param("weight", w.to_string())
        .param("order", order)
        .param("alpha_max", alpha_max);
    timed(r, EqualityMode::Exact, |r| {
        match h_limit(&w, &sector_schedule(w.n(), alpha_max), order) {
            Ok(st) => {
                let lim = st.limit().expect("stabilized");
                let zero = QtSeries::zero(lim.vars(), order);
                compare_series(r, &format!("H at {w}"), &zero, lim, order);
            }
            Err(e) => r.error(&format!("H at {w}"), &e),
        }
    })
}

/// Closed formula against the truncated Weyl localization sum.
pub fn chi_bq(l: &[i64], order: i64) -> VerificationReport {
    let w = GLWeight::new(l.to_vec());
    let r = VerificationReport::new("chi-bq")
        .param("weight", w.to_string())
        .param("order", order);
    timed(r, EqualityMode::Exact, |r| match verify_chi_bq(&w, order) {
        Ok(s) => {
            r.cases = s.terms_kept;
            r.detail("radius", s.radius);
            r.detail("series", s.series.to_string());
        }
        Err(e) => r.error(&format!("weight {w}"), &e),
    })
}

/// Parse `"2,1,0"` into integers.
pub fn parse_ints(s: &str) -> Result<Vec<i64>> {
    if s.trim().is_empty() {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("{x:?}: {e}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    #[test]
    fn small_runs_pass() {
        assert!(tableau_vs_oracle(2, 2, EqualityMode::Exact).passed());
        assert!(c_n_consistency(1, 3, EqualityMode::Exact).passed());
        assert!(printed_c2(2, EqualityMode::Exact).passed());
        assert!(printed_c3(1, true, EqualityMode::Exact).passed());
    }

    #[test]
    fn verbatim_c3_fails_with_witnesses() {
        let r = printed_c3(1, false, EqualityMode::Exact);
        assert_eq!(r.status, Status::Failed);
        assert!(r.witnesses.iter().all(|w| w.index.contains("13:1")));
    }

    #[test]
    fn preview_never_passes() {
        let r = tableau_vs_oracle(1, 2, EqualityMode::Probabilistic);
        assert_eq!(r.status, Status::Preview);
    }

    #[test]
    fn printed_operator_fails() {
        assert_eq!(shir(2, 2, ShirForm::Printed).status, Status::Failed);
    }
}
