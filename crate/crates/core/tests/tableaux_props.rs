use maclab_core::tableaux::{enumerate_pol_lambda, in_pol, tableau_to_theta, theta_to_tableau};
use maclab_core::Partition;
use proptest::prelude::*;

/// Semistandard tableaux of shape `lambda` with entries at most `n`, by the
/// hook-content formula.
fn ssyt_count(lambda: &Partition, n: usize) -> u64 {
    let parts = lambda.parts();
    let conj = |j: usize| parts.iter().filter(|&&p| p as usize > j).count();
    let (mut num, mut den) = (1u64, 1u64);
    for (i, &row) in parts.iter().enumerate() {
        for j in 0..row as usize {
            let content = j as i64 - i as i64;
            let hook = (row as usize - j) + (conj(j) - i) - 1;
            num *= (n as i64 + content) as u64;
            den *= hook as u64;
        }
    }
    num / den
}

fn shape() -> impl Strategy<Value = (Partition, usize)> {
    (1usize..=4, prop::collection::vec(0u32..=3, 4)).prop_map(|(n, mut v)| {
        v.truncate(n);
        v.sort_unstable_by(|a, b| b.cmp(a));
        (Partition::new(v).unwrap(), n)
    })
}

#[test]
fn hook_content_sanity() {
    assert_eq!(ssyt_count(&Partition::new(vec![2, 1]).unwrap(), 3), 8);
    assert_eq!(ssyt_count(&Partition::new(vec![2]).unwrap(), 2), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polytope_size_counts_tableaux((lambda, n) in shape()) {
        prop_assert_eq!(enumerate_pol_lambda(&lambda, n).len() as u64, ssyt_count(&lambda, n));
    }

    #[test]
    fn theta_tableau_round_trip((lambda, n) in shape()) {
        for theta in enumerate_pol_lambda(&lambda, n) {
            prop_assert!(in_pol(&theta, &lambda));
            let chain = theta_to_tableau(&theta, &lambda).unwrap();
            prop_assert_eq!(chain.len(), n + 1);
            let (back, top) = tableau_to_theta(&chain).unwrap();
            prop_assert_eq!(&back, &theta);
            prop_assert_eq!(&top, &lambda);
        }
    }
}
