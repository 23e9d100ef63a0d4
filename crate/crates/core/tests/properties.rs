use madd_core::clustering::{agglomerate, kmeans_madd, objective_phi_star, KMeansConfig};
use madd_core::selection::{dunn_index, within_dispersion};
use madd_core::{
    base_distance_matrix, euclidean_distance_matrix, madd_matrix, rand_index, ClusterAssignment, DataMatrix,
    DissimilarityMatrix, Linkage, MatrixKind, TransformSpec,
};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

const SPECS: [TransformSpec; 3] = [TransformSpec::RHO0, TransformSpec::RHO1, TransformSpec::RHO2];
const LINKAGES: [Linkage; 3] = [Linkage::Average, Linkage::Single, Linkage::Complete];

fn dataset(max_n: usize, max_d: usize) -> impl Strategy<Value = DataMatrix> {
    (3..=max_n, 1..=max_d).prop_flat_map(|(n, d)| {
        prop::collection::vec(-5.0f64..5.0, n * d)
            .prop_map(move |v| DataMatrix::new(n, d, v).unwrap())
    })
}

/// Symmetric zero-diagonal matrix with entries in (0, 1].
fn random_matrix(n_range: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = DissimilarityMatrix> {
    n_range.prop_flat_map(|n| {
        prop::collection::vec(0.001f64..1.0, n * (n - 1) / 2).prop_map(move |upper| {
            let mut v = vec![0.0; n * n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in (i + 1)..n {
                    let x = it.next().unwrap();
                    v[i * n + j] = x;
                    v[j * n + i] = x;
                }
            }
            DissimilarityMatrix::new(n, v, MatrixKind::MaddRho).unwrap()
        })
    })
}

fn brute_rand(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let mut bad = 0usize;
    for i in 0..n {
        for j in (i + 1)..n {
            if (a[i] == a[j]) != (b[i] == b[j]) {
                bad += 1;
            }
        }
    }
    bad as f64 / (n * (n - 1) / 2) as f64
}

/// Every partition of `0..n` into exactly `k` non-empty groups, as
/// restricted growth strings.
fn partitions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, k: usize, used: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            if used == k {
                out.push(prefix.clone());
            }
            return;
        }
        let remaining = n - prefix.len();
        if used + remaining < k {
            return;
        }
        for l in 0..=used.min(k - 1) {
            prefix.push(l);
            go(prefix, n, k, used.max(l + 1), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, k, 0, &mut out);
    out
}

#[test]
fn partition_enumeration_counts() {
    // Stirling numbers of the second kind
    assert_eq!(partitions(5, 2).len(), 15);
    assert_eq!(partitions(8, 3).len(), 966);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn madd_is_a_semi_metric(x in dataset(40, 8)) {
        for spec in SPECS {
            let rho = madd_matrix(&base_distance_matrix(&x, spec)).unwrap();
            let n = rho.n();
            for i in 0..n {
                prop_assert_eq!(rho.get(i, i), 0.0);
                for j in 0..n {
                    prop_assert!(rho.get(i, j) >= 0.0);
                    prop_assert_eq!(rho.get(i, j), rho.get(j, i));
                    for k in 0..n {
                        prop_assert!(rho.get(i, j) <= rho.get(i, k) + rho.get(k, j) + 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn madd_dominated_by_base(x in dataset(30, 8)) {
        for spec in SPECS {
            let phi = base_distance_matrix(&x, spec);
            let rho = madd_matrix(&phi).unwrap();
            for (r, p) in rho.values().iter().zip(phi.values()) {
                prop_assert!(*r <= p + 1e-12);
            }
        }
    }

    #[test]
    fn madd_permutation_equivariant(x in dataset(15, 5), shift in 0usize..100) {
        let n = x.n();
        let perm: Vec<usize> = (0..n).map(|i| (i * 7 + shift) % n).collect();
        // only a permutation when gcd(7, n) == 1
        prop_assume!(n % 7 != 0);
        let px = x.select_rows(&perm).unwrap();
        let a = madd_matrix(&base_distance_matrix(&x, TransformSpec::RHO1)).unwrap();
        let b = madd_matrix(&base_distance_matrix(&px, TransformSpec::RHO1)).unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert!((b.get(i, j) - a.get(perm[i], perm[j])).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rand_matches_brute_force(
        (a, b) in (2usize..=30).prop_flat_map(|n| (
            prop::collection::vec(1usize..=5, n),
            prop::collection::vec(1usize..=5, n),
        ))
    ) {
        let r = rand_index(&a, &b).unwrap();
        prop_assert!((r - brute_rand(&a, &b)).abs() < 1e-12);
        prop_assert_eq!(r, rand_index(&b, &a).unwrap());
        prop_assert!((0.0..=1.0).contains(&r));
        let relabeled: Vec<usize> = a.iter().map(|l| 10 - l).collect();
        prop_assert_eq!(r, rand_index(&relabeled, &b).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn cuts_are_nested(d in random_matrix(2..=30)) {
        for linkage in LINKAGES {
            let tree = agglomerate(&d, linkage).unwrap();
            let n = d.n();
            prop_assert_eq!(tree.merges().len(), n - 1);
            let mut prev = tree.cut(1).unwrap();
            prop_assert_eq!(prev.k(), 1);
            for k in 2..=n {
                let next = tree.cut(k).unwrap();
                prop_assert_eq!(next.k(), k);
                prop_assert!(next.refines(&prev));
                prev = next;
            }
        }
    }

    #[test]
    fn euclidean_dispersion_shrinks_down_the_tree(x in dataset(25, 6)) {
        // holds for squared Euclidean distances, not for arbitrary matrices
        let d = euclidean_distance_matrix(&x);
        let tree = agglomerate(&d, Linkage::Average).unwrap();
        let w: Vec<f64> = (1..=x.n()).map(|k| within_dispersion(&d, &tree.cut(k).unwrap()).unwrap()).collect();
        for pair in w.windows(2) {
            prop_assert!(pair[1] <= pair[0] * (1.0 + 1e-12) + 1e-12);
        }
        prop_assert!(w.last().unwrap().abs() < 1e-12);
    }

    #[test]
    fn dendrogram_consumes_each_node_once(d in random_matrix(2..=25)) {
        let tree = agglomerate(&d, Linkage::Average).unwrap();
        let n = d.n();
        let mut used = vec![false; 2 * n - 1];
        for (step, m) in tree.merges().iter().enumerate() {
            for node in [m.left, m.right] {
                prop_assert!(node < n + step);
                prop_assert!(!used[node]);
                used[node] = true;
            }
            prop_assert!(m.height >= 0.0);
        }
        prop_assert_eq!(tree.merges().last().unwrap().size, n);
    }

    #[test]
    fn kmeans_objective_trace_never_increases(d in random_matrix(4..=40), k in 1usize..=4, seed in any::<u64>()) {
        prop_assume!(k <= d.n());
        let fit = kmeans_madd(&d, &KMeansConfig::new(k, seed)).unwrap();
        for w in fit.trace.windows(2) {
            prop_assert!(w[1] <= w[0]);
        }
        prop_assert_eq!(*fit.trace.last().unwrap(), fit.objective);
        prop_assert!((objective_phi_star(&d, &fit.assignment).unwrap() - fit.objective).abs() < 1e-12);
    }

    #[test]
    fn relabeling_changes_no_statistic(d in random_matrix(4..=20), raw in prop::collection::vec(0usize..3, 20)) {
        let n = d.n();
        let a = ClusterAssignment::from_raw(&raw[..n]);
        prop_assume!(a.k() >= 2);
        let swapped: Vec<usize> = a.labels().iter().map(|l| a.k() + 1 - l).collect();
        let b = ClusterAssignment::new(swapped, a.k()).unwrap();
        prop_assert!((objective_phi_star(&d, &a).unwrap() - objective_phi_star(&d, &b).unwrap()).abs() < 1e-12);
        prop_assert!((within_dispersion(&d, &a).unwrap() - within_dispersion(&d, &b).unwrap()).abs() < 1e-12);
        let (da, db) = (dunn_index(&d, &a).unwrap(), dunn_index(&d, &b).unwrap());
        prop_assert!(da == db || (da - db).abs() < 1e-12);
    }
}

proptest! {
    // fixed stream: the 50 matrices are the same on every run
    #![proptest_config(ProptestConfig {
        cases: 50,
        rng_seed: RngSeed::Fixed(0x5eed_0050),
        ..ProptestConfig::default()
    })]

    #[test]
    fn kmeans_reaches_exhaustive_optimum(d in random_matrix(3..=8), k in 2usize..=3, seed in any::<u64>()) {
        prop_assume!(k < d.n());
        let best = partitions(d.n(), k)
            .iter()
            .map(|p| objective_phi_star(&d, &ClusterAssignment::from_raw(p)).unwrap())
            .fold(f64::INFINITY, f64::min);
        let mut cfg = KMeansConfig::new(k, seed);
        cfg.n_init = 50;
        let fit = kmeans_madd(&d, &cfg).unwrap();
        prop_assert!((fit.objective - best).abs() <= 1e-12 * best.max(1.0),
            "found {} but optimum is {}", fit.objective, best);
    }
}
