//! Computations behind each subcommand. Every operation returns a JSON
//! payload; text output and exit codes are derived from the payload alone,
//! so a cached payload renders exactly like a fresh one.

use std::fmt::Write as _;

use maclab_core::baker::{f_n_series, specialize_f, BaContext};
use maclab_core::checks::{self, EqualityMode};
use maclab_core::global::{h_limit, sector_schedule};
use maclab_core::laumon::{j_series, stabilize_j, ShirForm, Stabilization};
use maclab_core::macdonald::{macdonald_p, macdonald_p_oracle};
use maclab_core::{Error, GLWeight, Partition, Result, VerificationReport, XSeries};
use serde_json::{json, Value};

/// A mathematical object together with its parameters and a text rendering.
pub fn object(name: &str, params: &Value, value: Value, display: String) -> Value {
    json!({
        "kind": "object",
        "object": name,
        "parameters": params,
        "value": value,
        "display": display,
    })
}

pub fn report(r: &VerificationReport) -> Value {
    json!({
        "kind": "report",
        "report": serde_json::from_str::<Value>(&r.canonical_json()).expect("canonical json parses"),
    })
}

fn partition_arg(parts: &[i64], n: usize) -> Result<Partition> {
    if parts.len() > n {
        return Err(Error::InvalidInput(format!(
            "{parts:?} has more than {n} parts"
        )));
    }
    let parts = parts
        .iter()
        .map(|&x| u32::try_from(x).map_err(|_| Error::InvalidInput(format!("negative part {x}"))))
        .collect::<Result<Vec<_>>>()?;
    Partition::new(parts)
}

fn check_rank(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("N must be at least 1".into()));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PMethod {
    Tableau,
    Oracle,
}

pub fn macdonald(n: usize, lambda: &[i64], method: PMethod) -> Result<Value> {
    check_rank(n)?;
    let lam = partition_arg(lambda, n)?;
    let p = match method {
        PMethod::Tableau => macdonald_p(&lam, n)?,
        PMethod::Oracle => macdonald_p_oracle(&lam, n)?,
    };
    let params =
        json!({"n": n, "lambda": lam.parts(), "method": format!("{method:?}").to_lowercase()});
    Ok(object("macdonald-p", &params, p.to_json(), p.to_string()))
}

fn xseries_display(s: &XSeries) -> String {
    let mut out = String::new();
    for (a, r) in s.iter() {
        let _ = writeln!(out, "{a:?}: {r}");
    }
    out.trim_end().to_string()
}

pub fn baker(n: usize, truncation: u32, specialize: Option<&[i64]>) -> Result<Value> {
    if n < 2 {
        return Err(Error::InvalidInput("N must be at least 2".into()));
    }
    match specialize {
        None => {
            let f = f_n_series(&BaContext { n, truncation })?;
            let params = json!({"n": n, "truncation": truncation});
            Ok(object(
                "f-series",
                &params,
                f.to_json(),
                xseries_display(&f),
            ))
        }
        Some(l) => {
            let lam = partition_arg(l, n)?;
            let s = specialize_f(&lam, n)?;
            let terms: Vec<Value> = s
                .expansion
                .iter()
                .map(|(y, r)| json!({"exp": y, "coef": r.to_json()}))
                .collect();
            let mut display = format!("support {} of {} inspected\n", s.support, s.inspected);
            for (y, r) in &s.expansion {
                let _ = writeln!(display, "y^{y:?}: {r}");
            }
            let params = json!({"n": n, "lambda": lam.parts()});
            let value = json!({"inspected": s.inspected, "support": s.support, "terms": terms});
            Ok(object(
                "f-specialized",
                &params,
                value,
                display.trim_end().to_string(),
            ))
        }
    }
}

pub fn laumon_j(n: usize, degree: u32) -> Result<Value> {
    if n < 2 {
        return Err(Error::InvalidInput("N must be at least 2".into()));
    }
    let j = j_series(n, degree)?;
    let params = json!({"n": n, "degree": degree});
    Ok(object(
        "local-series",
        &params,
        j.to_json(),
        xseries_display(&j),
    ))
}

fn stabilized(name: &str, params: Value, st: &Stabilization) -> Result<Value> {
    let Some(lim) = st.limit() else {
        let k = st.schedule.len();
        return Err(Error::NotStabilized(format!(
            "values at {} and {} differ",
            st.schedule[k - 2],
            st.schedule[k - 1]
        )));
    };
    let from = st.stable_from.expect("limit implies stable_from");
    let value = json!({
        "schedule": st.schedule.iter().map(|a| a.0.clone()).collect::<Vec<_>>(),
        "stable_from": st.schedule[from].0,
        "series": lim.to_json(),
    });
    let display = format!("{lim}\nstable from alpha = {}", st.schedule[from]);
    Ok(object(name, &params, value, display))
}

pub fn laumon_limit(n: usize, order: i64, alpha_max: u32) -> Result<Value> {
    if n < 2 {
        return Err(Error::InvalidInput("N must be at least 2".into()));
    }
    let st = stabilize_j(n, &checks::local_schedule(n, alpha_max), order)?;
    stabilized(
        "local-limit",
        json!({"n": n, "order": order, "alpha_max": alpha_max}),
        &st,
    )
}

/// `N` is implied by the weight; an explicit `--n` must agree with it.
pub fn weight_arg(n: Option<usize>, l: &[i64]) -> Result<GLWeight> {
    if let Some(n) = n {
        if n < 2 || l.len() != n - 1 {
            return Err(Error::InvalidInput(format!(
                "weight {l:?} needs N - 1 = {} entries",
                n.saturating_sub(1)
            )));
        }
    }
    if l.is_empty() {
        return Err(Error::InvalidInput(
            "weight must have at least one entry".into(),
        ));
    }
    Ok(GLWeight::new(l.to_vec()))
}

pub fn global_h(w: &GLWeight, order: i64, alpha_max: u32) -> Result<Value> {
    let st = h_limit(w, &sector_schedule(w.n(), alpha_max), order)?;
    let params = json!({"n": w.n(), "weight": w.l(), "order": order, "alpha_max": alpha_max});
    stabilized("global-h", params, &st)
}

/// Named checks reachable from `verify`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Check {
    Tableau,
    Eigen,
    Cn,
    PrintedC2,
    PrintedC3,
    Specialization,
    FEigen,
    Pieri,
    Shir,
    Substitution,
    Junichi,
    Ansum,
    H0,
    H0Limit,
    Hp,
    Cordiff,
    Vanishing,
    Chibq,
}

impl Check {
    pub fn name(self) -> String {
        use clap::ValueEnum;
        self.to_possible_value()
            .expect("no skipped variants")
            .get_name()
            .to_string()
    }
}

/// Parameters shared by all checks; each check reads the ones it needs.
#[derive(Clone, Debug, Default)]
pub struct CheckParams {
    pub n: Option<usize>,
    pub degree: Option<u32>,
    pub order: Option<i64>,
    pub alpha_max: Option<u32>,
    pub weight: Option<Vec<i64>>,
    pub max_size: Option<u32>,
    pub max_n: Option<usize>,
    pub max_entry: Option<u32>,
    pub coords: Option<usize>,
    pub printed: bool,
    pub corrected: bool,
}

fn default_alpha_max(n: usize) -> u32 {
    if n <= 2 {
        5
    } else {
        4
    }
}

pub fn verify(check: Check, p: &CheckParams, mode: EqualityMode) -> Result<VerificationReport> {
    let n = p.n.unwrap_or(2);
    let need_weight = || -> Result<GLWeight> {
        let l = p
            .weight
            .as_deref()
            .ok_or_else(|| Error::InvalidInput(format!("{} needs --weight", check.name())))?;
        weight_arg(p.n, l)
    };
    let r = match check {
        Check::Tableau => {
            checks::tableau_vs_oracle(p.max_size.unwrap_or(5), p.max_n.unwrap_or(4), mode)
        }
        Check::Eigen => checks::eigen_identity(p.max_size.unwrap_or(5), p.max_n.unwrap_or(4), mode),
        Check::Cn => checks::c_n_consistency(p.max_entry.unwrap_or(2), p.max_n.unwrap_or(4), mode),
        Check::PrintedC2 => checks::printed_c2(p.max_entry.unwrap_or(2), mode),
        Check::PrintedC3 => checks::printed_c3(p.max_entry.unwrap_or(2), p.corrected, mode),
        Check::Specialization => {
            checks::specialization(p.max_size.unwrap_or(4), p.max_n.unwrap_or(3), mode)
        }
        Check::FEigen => checks::dai_ichi(n, p.degree.unwrap_or(3)),
        Check::Pieri => checks::pieri(p.max_size.unwrap_or(2), p.max_n.unwrap_or(3)),
        Check::Shir => {
            let form = if p.printed {
                ShirForm::Printed
            } else {
                ShirForm::Derived
            };
            checks::shir(n, p.degree.unwrap_or(3), form)
        }
        Check::Substitution => checks::substitution(n, p.degree.unwrap_or(3)),
        Check::Junichi => checks::junichi(
            n,
            p.order.unwrap_or(2),
            p.alpha_max.unwrap_or(default_alpha_max(n)),
        ),
        Check::Ansum => checks::an_summation(p.coords.unwrap_or(2), p.order.unwrap_or(2)),
        Check::H0 => checks::h0_counting(n, p.order.unwrap_or(8) as usize),
        Check::H0Limit => checks::h0_limit(
            n,
            p.order.unwrap_or(2),
            p.alpha_max.unwrap_or(default_alpha_max(n)),
        ),
        Check::Hp => {
            let w = need_weight()?;
            let am = p.alpha_max.unwrap_or(default_alpha_max(w.n()));
            checks::h_equals_p(w.l(), p.order.unwrap_or(2), am)
        }
        Check::Cordiff => checks::cor_diff(need_weight()?.l()),
        Check::Vanishing => {
            let w = need_weight()?;
            let am = p.alpha_max.unwrap_or(default_alpha_max(w.n()));
            checks::vanishing(w.l(), p.order.unwrap_or(2), am)
        }
        Check::Chibq => checks::chi_bq(need_weight()?.l(), p.order.unwrap_or(2)),
    };
    Ok(r)
}

/// Parameters that determine a check's result, for the cache key.
pub fn check_key(check: Check, p: &CheckParams, mode: EqualityMode) -> Value {
    json!({
        "check": check.name(),
        "n": p.n,
        "degree": p.degree,
        "order": p.order,
        "alpha_max": p.alpha_max,
        "weight": p.weight,
        "max_size": p.max_size,
        "max_n": p.max_n,
        "max_entry": p.max_entry,
        "coords": p.coords,
        "printed": p.printed,
        "corrected": p.corrected,
        "equality": format!("{mode:?}"),
    })
}

/// True when the payload represents success: objects always, reports
/// only when PASSED.
pub fn succeeded(payload: &Value) -> bool {
    match payload["kind"].as_str() {
        Some("report") => payload["report"]["status"] == "PASSED",
        _ => true,
    }
}

pub fn render_json(payload: &Value) -> String {
    let shown = match payload["kind"].as_str() {
        Some("report") => payload["report"].clone(),
        _ => json!({
            "object": payload["object"],
            "parameters": payload["parameters"],
            "value": payload["value"],
        }),
    };
    serde_json::to_string_pretty(&shown).expect("values serialize")
}

pub fn render_text(payload: &Value) -> String {
    match payload["kind"].as_str() {
        Some("report") => {
            let r: VerificationReport = serde_json::from_value(payload["report"].clone())
                .expect("cached report has report shape");
            let mut s = r.summary_line();
            for w in r.witnesses.iter().skip(1) {
                let _ = write!(
                    s,
                    "\n  witness at {}: expected {}, got {}",
                    w.index, w.expected, w.actual
                );
            }
            s
        }
        _ => payload["display"].as_str().unwrap_or_default().to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_length_must_match_rank() {
        assert!(weight_arg(Some(2), &[1]).is_ok());
        assert!(weight_arg(Some(3), &[1]).is_err());
        assert!(weight_arg(None, &[]).is_err());
        assert_eq!(weight_arg(None, &[1, 0]).unwrap().n(), 3);
    }

    #[test]
    fn report_payloads_drive_success() {
        let ok = report(&VerificationReport::new("x"));
        assert!(succeeded(&ok));
        let mut bad = VerificationReport::new("x");
        bad.witness(maclab_core::Witness::new("i", "1", "2"));
        assert!(!succeeded(&report(&bad)));
        assert!(render_text(&report(&bad)).starts_with("FAILED x()"));
    }

    #[test]
    fn partitions_are_validated() {
        assert!(partition_arg(&[2, 0], 2).is_ok());
        assert!(partition_arg(&[1, 2], 2).is_err());
        assert!(partition_arg(&[1, 1, 1], 2).is_err());
        assert!(partition_arg(&[-1], 2).is_err());
    }
}
