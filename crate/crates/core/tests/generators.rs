mod common;

use common::*;
use dbi_core::costs::CostFunction;
use dbi_core::generators::{
    gd_template, hamming_search, mu_from_index, optimize_gd, preset, realize, GdConfig, GeneratorSpec, PRESET_NAMES,
};
use dbi_core::hamiltonians::{tfim, xxz};
use dbi_core::linalg::{delta_restrict, eigh};
use dbi_core::scheduling::{grid_search, ScheduleConfig};
use proptest::prelude::*;

#[test]
fn every_preset_is_diagonal_and_real() {
    let h = xxz::<f64>(3, 0.5).unwrap();
    for name in PRESET_NAMES {
        let d = realize(&preset::<f64>(name, 3).unwrap(), Some(&h)).unwrap();
        assert_eq!(d.dim(), 8, "{name}");
        assert!(d.is_diagonal(), "{name}");
        assert!(d.diagonal().iter().all(|z| z.im == 0.0), "{name}");
    }
}

#[test]
fn minmax_spans_the_diagonal() {
    let h = tfim::<f64>(3, 2.0).unwrap();
    let diag = h.real_diagonal();
    let (lo, hi) = diag.iter().fold((f64::MAX, f64::MIN), |(a, b), &x| (a.min(x), b.max(x)));
    let d = realize(&GeneratorSpec::MinMax, Some(&h)).unwrap().real_diagonal();
    let delta = (hi - lo) / 8.0;
    for (i, x) in d.iter().enumerate() {
        assert!((x - (lo + (i + 1) as f64 * delta)).abs() < 1e-12);
    }
    let rev = realize(&GeneratorSpec::MaxMin, Some(&h)).unwrap().real_diagonal();
    assert_eq!(rev, d.iter().rev().copied().collect::<Vec<_>>());
}

#[test]
fn eigen_sorted_uses_the_spectrum() {
    let h = xxz::<f64>(3, 0.5).unwrap();
    let d = realize(&GeneratorSpec::EigenSorted, Some(&h)).unwrap().real_diagonal();
    assert_eq!(d, eigh(&h).unwrap().values);
}

#[test]
fn magnetic_field_matches_kronecker_sum() {
    let alpha = [0.5, -1.0, 2.0];
    let d = realize(&GeneratorSpec::MagneticField { alpha: alpha.to_vec() }, None).unwrap();
    let mut oracle = vec![vec![c(0.0, 0.0); 8]; 8];
    for (j, a) in alpha.iter().enumerate() {
        oracle = add(&oracle, &scale(&on_site(&z(), j + 1, 3), c(*a, 0.0)));
    }
    assert!(max_diff(&from_op(&d), &oracle) < 1e-14);
}

#[test]
fn hamming_search_is_exhaustive() {
    let h = tfim::<f64>(3, 1.0).unwrap();
    let cost = CostFunction::OffDiagonalNorm;
    let sched = ScheduleConfig::grid(0.3, 60);
    let best = hamming_search(&h, &cost, &sched).unwrap();
    for idx in 1..8 {
        let d = realize(&GeneratorSpec::PauliZProduct { mu: mu_from_index(3, idx) }, None).unwrap();
        let out = grid_search(&h, &d, &cost, &sched).unwrap();
        assert!(best.outcome.cost <= out.cost + 1e-12, "mu index {idx}");
    }
}

#[test]
fn gradient_descent_never_worsens_its_start() {
    let h = xxz::<f64>(3, 0.5).unwrap();
    let cost = CostFunction::OffDiagonalNorm;
    let sched = ScheduleConfig::grid(0.5, 60);
    let gd = GdConfig { max_iters: 10, ..GdConfig::default() };
    for family in ["magnetic", "nn-ising", "full-diagonal"] {
        let template = gd_template::<f64>(family, 3).unwrap();
        let start = match &template {
            GeneratorSpec::FullDiagonal { .. } => delta_restrict(&h),
            t => realize(t, None).unwrap(),
        };
        let before = grid_search(&h, &start, &cost, &sched).unwrap().cost;
        let sel = optimize_gd(&h, &template, &cost, &sched, &gd).unwrap();
        assert!(sel.outcome.cost <= before + 1e-12, "{family}");
        assert_eq!(sel.spec.kind_name(), template.kind_name());
        assert!(sel.d.max_abs_diff(&realize(&sel.spec, Some(&h)).unwrap()) < 1e-12);
    }
}

#[test]
fn commuting_generators_give_no_rotation() {
    // XXZ conserves total magnetization, so uniform fields commute with it
    let h = xxz::<f64>(4, 0.5).unwrap();
    let d = realize(&preset::<f64>("b-constant", 4).unwrap(), None).unwrap();
    let w = comm(&from_op(&d), &from_op(&h));
    assert!(fro(&w) < 1e-12);
    let out = grid_search(&h, &d, &CostFunction::OffDiagonalNorm, &ScheduleConfig::default()).unwrap();
    assert!(out.no_gain);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn parameters_round_trip(alpha in proptest::collection::vec(-3.0f64..3.0, 4),
                             beta in proptest::collection::vec(-3.0f64..3.0, 4)) {
        let spec = GeneratorSpec::NnIsing { alpha, beta, boundary: dbi_core::generators::Boundary::Open };
        let theta = spec.parameters();
        prop_assert_eq!(spec.with_parameters(&theta).unwrap(), spec.clone());
        let d = realize(&spec, None).unwrap();
        prop_assert!(d.is_diagonal());
    }

    #[test]
    fn json_round_trip(d in proptest::collection::vec(-5.0f64..5.0, 8)) {
        let spec = GeneratorSpec::FullDiagonal { d };
        let text = serde_json::to_string(&spec).unwrap();
        let back: GeneratorSpec<f64> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, spec);
    }

    #[test]
    fn shuffled_is_a_permutation(seed in 0u64..10_000) {
        let h = tfim::<f64>(3, 1.0).unwrap();
        let mut a = realize(&GeneratorSpec::ShuffledMinMax { seed }, Some(&h)).unwrap().real_diagonal();
        let mut b = realize(&GeneratorSpec::MinMax, Some(&h)).unwrap().real_diagonal();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        prop_assert_eq!(a, b);
    }
}
