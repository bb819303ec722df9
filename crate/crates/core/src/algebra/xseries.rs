use std::collections::BTreeMap;

use num_traits::One;

use super::mono::Monomial;
use super::poly::Coeff;
use super::ratfunc::RationalFunction;
use super::vars::Vars;

/// Series in `n` auxiliary variables truncated at total degree `truncation`,
/// with rational-function coefficients over `vars`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct XSeries {
    vars: Vars,
    nvars: usize,
    truncation: u32,
    coeffs: BTreeMap<Vec<u32>, RationalFunction>,
}

impl XSeries {
    pub fn new(vars: &Vars, nvars: usize, truncation: u32) -> Self {
        XSeries {
            vars: vars.clone(),
            nvars,
            truncation,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Add `r x^alpha`; terms beyond the truncation are dropped.
    pub fn add_term(&mut self, alpha: Vec<u32>, r: RationalFunction) {
        debug_assert_eq!(alpha.len(), self.nvars);
        if alpha.iter().sum::<u32>() > self.truncation || r.is_zero() {
            return;
        }
        let merged = match self.coeffs.remove(&alpha) {
            Some(old) => old.add(&r),
            None => r,
        };
        if !merged.is_zero() {
            self.coeffs.insert(alpha, merged);
        }
    }

    pub fn get(&self, alpha: &[u32]) -> Option<&RationalFunction> {
        self.coeffs.get(alpha)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &RationalFunction)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Substitute `x_i -> q^power x_i` (coefficients pick up `q^(power*alpha_i)`).
    pub fn shift_var(&self, i: usize, power: i32, q: usize) -> Self {
        let mut out = XSeries::new(&self.vars, self.nvars, self.truncation);
        for (alpha, r) in &self.coeffs {
            let m = Monomial::unit(self.vars.len(), q, power * alpha[i] as i32);
            out.coeffs
                .insert(alpha.clone(), r.mul_term(&m, &Coeff::one()));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "nvars": self.nvars,
            "truncation": self.truncation,
            "coefficients": self.coeffs.iter().map(|(a, r)| serde_json::json!({
                "alpha": a,
                "value": r.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}
