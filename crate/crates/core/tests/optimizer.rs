mod common;

use relaycap::bounds::evaluate;
use relaycap::channel::{example_bsc_channel, random_channel};
use relaycap::optimizer::{maximize_kinds, maximize_seeded};
use relaycap::witness::example_bec_witness;
use relaycap::{maximize, maximize_all, BoundKind, Error, SearchConfig, Witness};

fn quick() -> SearchConfig {
    SearchConfig {
        grid_resolution: 4,
        refine_iterations: 60,
        map_enumeration_cap: 256,
        ..SearchConfig::default()
    }
}

#[test]
fn results_are_deterministic() {
    let ch = common::binary_channel(11, false);
    for kind in [BoundKind::Df, BoundKind::GpCf, BoundKind::GpDf] {
        assert_eq!(
            maximize(&ch, kind, &quick()).unwrap(),
            maximize(&ch, kind, &quick()).unwrap()
        );
    }
}

#[test]
fn reported_values_are_reproducible_from_witnesses() {
    let ch = common::binary_channel(12, true);
    let rs = maximize_all(&ch, &quick()).unwrap();
    assert_eq!(rs.len(), BoundKind::ALL.len());
    for r in &rs {
        let v = evaluate(&ch, r.kind, &r.witness).unwrap().value;
        assert!((v - r.value).abs() <= 1e-12, "{}: {} vs {}", r.kind, v, r.value);
        assert!(r.evaluations > 0);
    }
}

#[test]
fn report_order_and_capacity_applicability() {
    let ch = common::binary_channel(13, false);
    let kinds: Vec<BoundKind> = maximize_all(&ch, &quick()).unwrap().iter().map(|r| r.kind).collect();
    assert_eq!(kinds, BoundKind::ALL[..9].to_vec());
    assert!(matches!(
        maximize(&ch, BoundKind::DegradedCapacity, &quick()),
        Err(Error::NotDegraded)
    ));
}

#[test]
fn single_bound_matches_the_full_run() {
    let ch = common::binary_channel(14, true);
    let all = maximize_all(&ch, &quick()).unwrap();
    for kind in [
        BoundKind::Pdf,
        BoundKind::Nub,
        BoundKind::Cutset,
        BoundKind::DegradedCapacity,
    ] {
        let one = maximize(&ch, kind, &quick()).unwrap();
        assert_eq!(&one, all.iter().find(|r| r.kind == kind).unwrap());
    }
}

#[test]
fn finer_grid_never_loses_without_refinement() {
    let ch = common::binary_channel(15, false);
    let cfg = |k| SearchConfig {
        grid_resolution: k,
        refine_iterations: 0,
        grid_point_cap: 1 << 17,
        ..SearchConfig::default()
    };
    for kind in [BoundKind::Df, BoundKind::Cf, BoundKind::GpCf, BoundKind::Cutset] {
        let coarse = maximize_seeded(&ch, kind, &cfg(8), &[]).unwrap().value;
        let fine = maximize_seeded(&ch, kind, &cfg(16), &[]).unwrap().value;
        assert!(coarse <= fine + 1e-12, "{kind}: {coarse} > {fine}");
    }
}

#[test]
fn richer_bounds_dominate_at_matched_effort() {
    for seed in 0..3 {
        let ch = common::binary_channel(300 + seed, seed % 2 == 0);
        let rs = maximize_all(&ch, &quick()).unwrap();
        let v = |k| rs.iter().find(|r| r.kind == k).unwrap().value;
        assert!(v(BoundKind::Df) <= v(BoundKind::GpDf) + 1e-6);
        assert!(v(BoundKind::Df) <= v(BoundKind::Pdf) + 1e-6);
        assert!(v(BoundKind::GpCf) <= v(BoundKind::GpPdfCf) + 1e-6);
        assert!(v(BoundKind::GpCf) <= v(BoundKind::GpCfBinned) + 1e-6);
        assert!(v(BoundKind::Cf) <= v(BoundKind::GpCfBinned) + 1e-6);
        assert!(v(BoundKind::GpDf) <= v(BoundKind::Nub) + 1e-6);
        assert!(v(BoundKind::Nub) <= v(BoundKind::Cutset) + 1e-6);
    }
}

#[test]
fn single_input_symbol_carries_nothing() {
    let ch = random_channel([1, 2, 2, 2], false, 3).unwrap();
    for r in maximize_all(&ch, &quick()).unwrap() {
        if r.kind.is_lower_bound() {
            assert!(r.value.abs() <= 1e-12, "{}: {}", r.kind, r.value);
        }
    }
}

#[test]
fn seeds_are_respected() {
    let ch = relaycap::channel::example_bec_channel();
    let w = Witness::GpDf(example_bec_witness(&ch).unwrap());
    let cfg = SearchConfig {
        grid_resolution: 1,
        refine_iterations: 0,
        map_enumeration_cap: 1,
        ..SearchConfig::default()
    };
    let r = maximize_seeded(&ch, BoundKind::GpDf, &cfg, &[w]).unwrap();
    assert!((r.value - 0.5).abs() <= 1e-12);
}

#[test]
fn mismatched_seeds_and_bad_configs_are_rejected() {
    let ch = common::binary_channel(16, false);
    let bec = relaycap::channel::example_bec_channel();
    let w = Witness::GpDf(example_bec_witness(&bec).unwrap());
    assert!(matches!(
        maximize_seeded(&ch, BoundKind::GpDf, &quick(), &[w]),
        Err(Error::WitnessMismatch(_))
    ));
    let bad = SearchConfig {
        grid_resolution: 0,
        ..quick()
    };
    assert!(matches!(maximize(&ch, BoundKind::Df, &bad), Err(Error::Config(_))));
    let bad = SearchConfig {
        tolerance: 0.0,
        ..quick()
    };
    assert!(matches!(
        maximize_kinds(&ch, &[BoundKind::Df], &bad),
        Err(Error::Config(_))
    ));
}

#[test]
fn bsc_example_upper_bound_map_is_u_xor_y2() {
    let ch = example_bsc_channel(0.2, 0.1, 0.55).unwrap();
    let r = maximize(&ch, BoundKind::Nub, &SearchConfig::default()).unwrap();
    assert!((r.value - 0.2453).abs() <= 1e-3);
    let Witness::GpDf(w) = &r.witness else {
        panic!("wrong shape")
    };
    assert_eq!(w.u_alphabet().size(), 2);
    let flip = w.relay_map.apply(&[0, 0, 0]);
    for u in 0..2 {
        for x1 in 0..2 {
            for y2 in 0..2 {
                assert_eq!(
                    w.relay_map.apply(&[u, x1, y2]),
                    u ^ y2 ^ flip,
                    "map {:?}",
                    w.relay_map.table()
                );
            }
        }
    }
}
