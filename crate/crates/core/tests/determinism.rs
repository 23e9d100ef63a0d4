//! Results must be bitwise identical whatever the worker count.

use madd_core::clustering::{kmeans_madd, KMeansConfig};
use madd_core::datagen::{sample_scenario, Scenario, ScenarioSpec};
use madd_core::selection::{cv_select, gap_select, EstimatorReport};
use madd_core::{madd_from_data, Method, TransformSpec};

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

fn bits(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}

fn same_report(a: &EstimatorReport, b: &EstimatorReport) {
    assert_eq!(a.k_hat, b.k_hat);
    assert_eq!(a.ks, b.ks);
    assert_eq!(bits(&a.statistic), bits(&b.statistic));
    assert_eq!(bits(&a.spread), bits(&b.spread));
    assert_eq!(a.minimizers, b.minimizers);
    assert_eq!(a.diagnostics, b.diagnostics);
}

#[test]
fn madd_and_kmeans_ignore_thread_count() {
    let s = sample_scenario(&ScenarioSpec::desk(Scenario::Ex1, 300, 3)).unwrap();
    let run = || {
        let rho = madd_from_data(&s.data, TransformSpec::RHO0).unwrap();
        let fit = kmeans_madd(&rho, &KMeansConfig::new(3, 99)).unwrap();
        (rho, fit)
    };
    let (rho1, fit1) = in_pool(1, run);
    let (rho4, fit4) = in_pool(4, run);
    assert_eq!(bits(rho1.values()), bits(rho4.values()));
    assert_eq!(fit1.assignment, fit4.assignment);
    assert_eq!(fit1.objective.to_bits(), fit4.objective.to_bits());
    assert_eq!(fit1.restart, fit4.restart);
}

#[test]
fn resampling_estimators_ignore_thread_count() {
    let s = sample_scenario(&ScenarioSpec::desk(Scenario::Ex6, 20, 5)).unwrap();
    let method: Method = "km:rho0".parse().unwrap();
    let run = || {
        let gap = gap_select(&s.data, method, 4, 5, 17).unwrap();
        let (cva, cvv) = cv_select(&s.data, method, 4, 6, 17).unwrap();
        (gap, cva, cvv)
    };
    let one = in_pool(1, run);
    let four = in_pool(4, run);
    same_report(&one.0, &four.0);
    same_report(&one.1, &four.1);
    same_report(&one.2, &four.2);
}
