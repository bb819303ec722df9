//! Partitions, horizontal strips, theta-matrices and the polytope `Pol_lambda`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of nonnegative integers; trailing zeros are
/// not stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// The partition obtained by sorting an exponent vector.
    pub fn sorted_from(exps: &[u32]) -> Self {
        let mut v = exps.to_vec();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).expect("sorted")
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Part `i` (0-based); zero past the length.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn padded(&self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.part(i)).collect()
    }

    /// Dominance order on partitions of equal size.
    pub fn dominates(&self, o: &Partition) -> bool {
        if self.size() != o.size() {
            return false;
        }
        let n = self.len().max(o.len());
        let (mut a, mut b) = (0, 0);
        for i in 0..n {
            a += self.part(i);
            b += o.part(i);
            if a < b {
                return false;
            }
        }
        true
    }

    /// All partitions of `size` with at most `max_len` parts, in reverse
    /// lexicographic order (so `(size)` comes first).
    pub fn all_of_size(size: u32, max_len: usize) -> Vec<Partition> {
        fn rec(
            rem: u32,
            max_part: u32,
            slots: usize,
            cur: &mut Vec<u32>,
            out: &mut Vec<Partition>,
        ) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            if slots == 0 {
                return;
            }
            for p in (1..=rem.min(max_part)).rev() {
                cur.push(p);
                rec(rem - p, p, slots - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(size, size, max_len, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// `lambda / mu` is a horizontal strip: `lambda_1 >= mu_1 >= lambda_2 >= mu_2 >= ...`.
pub fn is_horizontal_strip(lambda: &Partition, mu: &Partition) -> bool {
    let n = lambda.len().max(mu.len()) + 1;
    (0..n).all(|i| lambda.part(i) >= mu.part(i) && mu.part(i) >= lambda.part(i + 1))
}

/// Degree vector `(d_1, ..., d_{N-1})`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct CompositionAlpha(pub Vec<u32>);

impl CompositionAlpha {
    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// All `alpha` componentwise below `self`, in lexicographic order.
    pub fn below(&self) -> Vec<CompositionAlpha> {
        let mut out = vec![Vec::new()];
        for &d in &self.0 {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u32>| {
                    (0..=d).map(move |k| {
                        let mut w = v.clone();
                        w.push(k);
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(CompositionAlpha).collect()
    }

    /// All `alpha` of length `n` with `|alpha| <= max`, ordered by size then
    /// lexicographically.
    pub fn all_up_to(n: usize, max: u32) -> Vec<CompositionAlpha> {
        let mut out: Vec<CompositionAlpha> = CompositionAlpha(vec![max; n])
            .below()
            .into_iter()
            .filter(|a| a.size() <= max)
            .collect();
        out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
        out
    }
}

impl fmt::Display for CompositionAlpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Strictly upper-triangular `N x N` matrix of nonnegative integers, stored
/// row-major as `(1,2), (1,3), ..., (1,N), (2,3), ...`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ThetaMatrix {
    n: usize,
    entries: Vec<u32>,
}

impl ThetaMatrix {
    pub fn zeros(n: usize) -> Self {
        ThetaMatrix {
            n,
            entries: vec![0; n * n.saturating_sub(1) / 2],
        }
    }

    pub fn from_entries(n: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::InvalidInput(format!(
                "{} entries do not fill a {n}x{n} strictly upper triangle",
                entries.len()
            )));
        }
        Ok(ThetaMatrix { n, entries })
    }

    /// Build from `(i, j, value)` triples, 1-based.
    pub fn from_triples(n: usize, triples: &[(usize, usize, u32)]) -> Self {
        let mut t = ThetaMatrix::zeros(n);
        for &(i, j, v) in triples {
            t.set(i, j, v);
        }
        t
    }

    fn offset(&self, i: usize, j: usize) -> usize {
        debug_assert!(1 <= i && i < j && j <= self.n);
        (i - 1) * self.n - (i - 1) * i / 2 + (j - i - 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Entry `theta_{ij}` (1-based); zero on and below the diagonal and
    /// outside the matrix.
    pub fn get(&self, i: usize, j: usize) -> u32 {
        if i >= j || j > self.n || i == 0 {
            0
        } else {
            self.entries[self.offset(i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        let k = self.offset(i, j);
        self.entries[k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// `alpha_m = sum_{i <= m < j} theta_{ij}`, the exponent of `x_m` in
    /// `prod (x_i ... x_{j-1})^{theta_ij}`.
    pub fn degree(&self) -> CompositionAlpha {
        let mut d = vec![0; self.n.saturating_sub(1)];
        for i in 1..self.n {
            for j in i + 1..=self.n {
                let v = self.get(i, j);
                for dm in &mut d[i - 1..j - 1] {
                    *dm += v;
                }
            }
        }
        CompositionAlpha(d)
    }

    /// The upper-left `(N-1) x (N-1)` block.
    pub fn restrict(&self) -> ThetaMatrix {
        let mut t = ThetaMatrix::zeros(self.n - 1);
        for i in 1..self.n - 1 {
            for j in i + 1..self.n {
                t.set(i, j, self.get(i, j));
            }
        }
        t
    }

    /// All theta-matrices of degree `alpha`, lexicographic.
    pub fn with_degree(n: usize, alpha: &CompositionAlpha) -> Vec<ThetaMatrix> {
        let pairs: Vec<(usize, usize)> = (1..n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .collect();
        let mut out = Vec::new();
        let mut cur = ThetaMatrix::zeros(n);
        let mut budget: Vec<i64> = alpha.0.iter().map(|&d| d as i64).collect();
        fn rec(
            k: usize,
            pairs: &[(usize, usize)],
            cur: &mut ThetaMatrix,
            budget: &mut Vec<i64>,
            out: &mut Vec<ThetaMatrix>,
        ) {
            if k == pairs.len() {
                if budget.iter().all(|&b| b == 0) {
                    out.push(cur.clone());
                }
                return;
            }
            let (i, j) = pairs[k];
            let cap = budget[i - 1..j - 1].iter().copied().min().unwrap_or(0);
            for v in 0..=cap.max(0) {
                for b in &mut budget[i - 1..j - 1] {
                    *b -= v;
                }
                cur.set(i, j, v as u32);
                rec(k + 1, pairs, cur, budget, out);
                for b in &mut budget[i - 1..j - 1] {
                    *b += v;
                }
            }
            cur.set(i, j, 0);
        }
        if n <= 1 {
            return vec![ThetaMatrix::zeros(n)];
        }
        rec(0, &pairs, &mut cur, &mut budget, &mut out);
        out.sort();
        out
    }

    /// All theta-matrices with entries in `0..=max`, lexicographic.
    pub fn bounded(n: usize, max: u32) -> Vec<ThetaMatrix> {
        let len = n * n.saturating_sub(1) / 2;
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u32>| {
                    (0..=max).map(move |k| {
                        let mut w = v.clone();
                        w.push(k);
                        w
                    })
                })
                .collect();
        }
        out.into_iter()
            .map(|e| ThetaMatrix { n, entries: e })
            .collect()
    }
}

impl fmt::Display for ThetaMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for i in 1..self.n {
            for j in i + 1..=self.n {
                parts.push(format!("{i}{j}:{}", self.get(i, j)));
            }
        }
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Right-hand side of the defining inequality of `Pol_lambda` for `(i,j)`:
/// `lambda_i - lambda_{i+1} - sum_{k>j} (theta_{ik} - theta_{i+1,k})`.
pub fn pol_bound(theta: &ThetaMatrix, lambda: &Partition, i: usize, j: usize) -> i64 {
    let mut b = lambda.part(i - 1) as i64 - lambda.part(i) as i64;
    for k in j + 1..=theta.n() {
        b -= theta.get(i, k) as i64 - theta.get(i + 1, k) as i64;
    }
    b
}

pub fn in_pol(theta: &ThetaMatrix, lambda: &Partition) -> bool {
    let n = theta.n();
    lambda.len() <= n
        && (1..n)
            .all(|i| (i + 1..=n).all(|j| theta.get(i, j) as i64 <= pol_bound(theta, lambda, i, j)))
}

/// All of `Pol_lambda`, in lexicographic order of the entry list.
pub fn enumerate_pol_lambda(lambda: &Partition, n: usize) -> Vec<ThetaMatrix> {
    if lambda.len() > n {
        return Vec::new();
    }
    // Bounds for column j only involve columns > j, so fill columns right to left.
    let cells: Vec<(usize, usize)> = (2..=n)
        .rev()
        .flat_map(|j| (1..j).map(move |i| (i, j)))
        .collect();
    fn rec(
        k: usize,
        cells: &[(usize, usize)],
        lambda: &Partition,
        cur: &mut ThetaMatrix,
        out: &mut Vec<ThetaMatrix>,
    ) {
        if k == cells.len() {
            out.push(cur.clone());
            return;
        }
        let (i, j) = cells[k];
        let b = pol_bound(cur, lambda, i, j);
        for v in 0..=b.max(-1) {
            cur.set(i, j, v as u32);
            rec(k + 1, cells, lambda, cur, out);
        }
        cur.set(i, j, 0);
    }
    let mut out = Vec::new();
    rec(0, &cells, lambda, &mut ThetaMatrix::zeros(n), &mut out);
    out.sort();
    out
}

/// The chain `lambda^(0) ⊆ ... ⊆ lambda^(N)` with
/// `lambda^(j)_i = lambda_i - sum_{k>j} theta_{ik}` for `i <= j`.
pub fn theta_to_tableau(theta: &ThetaMatrix, lambda: &Partition) -> Result<Vec<Partition>> {
    let n = theta.n();
    let mut chain = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut parts = Vec::with_capacity(j);
        for i in 1..=j {
            let mut v = lambda.part(i - 1) as i64;
            for k in j + 1..=n {
                v -= theta.get(i, k) as i64;
            }
            if v < 0 {
                return Err(Error::NotATableau(format!(
                    "negative part in step {j} of {theta}"
                )));
            }
            parts.push(v as u32);
        }
        let p = Partition::new(parts)
            .map_err(|_| Error::NotATableau(format!("step {j} of {theta} is not a partition")))?;
        chain.push(p);
    }
    for j in 1..=n {
        if !is_horizontal_strip(&chain[j], &chain[j - 1]) {
            return Err(Error::NotATableau(format!(
                "{} / {} is not a horizontal strip",
                chain[j],
                chain[j - 1]
            )));
        }
    }
    Ok(chain)
}

/// Inverse of [`theta_to_tableau`]: `theta_{ij} = lambda^(j)_i - lambda^(j-1)_i`.
pub fn tableau_to_theta(chain: &[Partition]) -> Result<(ThetaMatrix, Partition)> {
    let n = chain.len().saturating_sub(1);
    for j in 1..=n {
        if !is_horizontal_strip(&chain[j], &chain[j - 1]) {
            return Err(Error::NotATableau(format!(
                "step {j} is not a horizontal strip"
            )));
        }
        if chain[j].len() > j {
            return Err(Error::NotATableau(format!("step {j} has too many rows")));
        }
    }
    let mut t = ThetaMatrix::zeros(n);
    for i in 1..n {
        for j in i + 1..=n {
            t.set(i, j, chain[j].part(i - 1) - chain[j - 1].part(i - 1));
        }
    }
    Ok((t, chain[n].clone()))
}

/// `|theta^(i)| = lambda_i + sum_{a<i} theta_{ai} - sum_{b>i} theta_{ib}`,
/// the number of entries equal to `i`.
pub fn strip_sizes(theta: &ThetaMatrix, lambda: &Partition) -> Vec<i64> {
    let n = theta.n();
    (1..=n)
        .map(|i| {
            let mut s = lambda.part(i - 1) as i64;
            for a in 1..i {
                s += theta.get(a, i) as i64;
            }
            for b in i + 1..=n {
                s -= theta.get(i, b) as i64;
            }
            s
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn horizontal_strips() {
        assert!(is_horizontal_strip(&p(&[2, 1]), &p(&[1, 1])));
        assert!(!is_horizontal_strip(&p(&[2, 2]), &p(&[1, 0])));
        assert!(is_horizontal_strip(&p(&[3, 1]), &p(&[3, 1])));
    }

    #[test]
    fn small_polytopes() {
        assert_eq!(
            enumerate_pol_lambda(&Partition::empty(), 1),
            vec![ThetaMatrix::zeros(1)]
        );
        let two = enumerate_pol_lambda(&p(&[2]), 2);
        let vals: Vec<u32> = two.iter().map(|t| t.get(1, 2)).collect();
        assert_eq!(vals, vec![0, 1, 2]);
        assert_eq!(enumerate_pol_lambda(&p(&[1]), 3).len(), 3);
    }

    #[test]
    fn chains() {
        let z = ThetaMatrix::zeros(2);
        let chain = theta_to_tableau(&z, &Partition::empty()).unwrap();
        assert!(chain.iter().all(|c| c.is_empty()));
        let t = ThetaMatrix::from_triples(2, &[(1, 2, 1)]);
        let chain = theta_to_tableau(&t, &p(&[1])).unwrap();
        assert_eq!(chain, vec![p(&[]), p(&[]), p(&[1])]);
        assert_eq!(strip_sizes(&t, &p(&[1])), vec![0, 1]);
        assert_eq!(strip_sizes(&z, &p(&[2, 1])), vec![2, 1]);
        let bad = ThetaMatrix::from_triples(2, &[(1, 2, 2)]);
        assert!(theta_to_tableau(&bad, &p(&[1])).is_err());
    }

    #[test]
    fn degrees() {
        let t = ThetaMatrix::from_triples(3, &[(1, 3, 1)]);
        assert_eq!(t.degree(), CompositionAlpha(vec![1, 1]));
        let got = ThetaMatrix::with_degree(3, &CompositionAlpha(vec![1, 1]));
        assert_eq!(
            got,
            vec![
                ThetaMatrix::from_triples(3, &[(1, 3, 1)]),
                ThetaMatrix::from_triples(3, &[(2, 3, 1), (1, 2, 1)]),
            ]
        );
    }

    #[test]
    fn dominance() {
        assert!(p(&[2]).dominates(&p(&[1, 1])));
        assert!(!p(&[1, 1]).dominates(&p(&[2])));
        assert!(!p(&[3, 1, 1, 1]).dominates(&p(&[2, 2, 2])));
        assert!(!p(&[2, 2, 2]).dominates(&p(&[3, 1, 1, 1])));
        assert_eq!(
            Partition::all_of_size(4, 2),
            vec![p(&[4]), p(&[3, 1]), p(&[2, 2])]
        );
    }
}
