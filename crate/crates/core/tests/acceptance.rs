//! Acceptance criteria 1-8. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use relaycap::bounds::{
    bsc_example_capacity, df_objective, gp_cf_objective, gp_df_objective, gp_pdf_cf_objective, nub_objective,
    pdf_objective,
};
use relaycap::channel::{example_bec_channel, example_bsc_channel};
use relaycap::optimizer::{maximize_all, maximize_kinds};
use relaycap::prob::{conditional_mutual_information, mutual_information};
use relaycap::sim::{sweep, SimParams};
use relaycap::witness::{
    embed_df_into_gp_df, embed_gp_cf_into_gp_pdf_cf, embed_pdf_into_gp_pdf_cf, example_bec_witness, WitnessGPDF,
};
use relaycap::{
    Alphabet, BoundKind, BoundResult, CondPmf, DeterministicMap, NoncausalRelayChannel, Pmf, SearchConfig, Witness,
};

use common::brute;

struct Outcome {
    pass: bool,
    detail: String,
}

fn value(rs: &[BoundResult], k: BoundKind) -> f64 {
    rs.iter().find(|r| r.kind == k).map(|r| r.value).unwrap_or(f64::NAN)
}

fn within(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

fn criterion_1() -> Outcome {
    let ch = example_bec_channel();
    let rs = maximize_all(&ch, &SearchConfig::default()).unwrap();
    let (df, gp, cs, cap) = (
        value(&rs, BoundKind::Df),
        value(&rs, BoundKind::GpDf),
        value(&rs, BoundKind::Cutset),
        value(&rs, BoundKind::DegradedCapacity),
    );
    Outcome {
        pass: within(df, 0.3219, 1e-3) && within(gp, 0.5, 1e-3) && within(cs, 0.5, 1e-3) && within(cap, 0.5, 1e-3),
        detail: format!(
            "DF {df:.6} (0.3219), GP-DF {gp:.6} (0.5), CUTSET {cs:.6} (0.5), capacity {cap:.6} (0.5); tol 1e-3"
        ),
    }
}

fn nub_witness_is_xor(r: &BoundResult) -> bool {
    let Witness::GpDf(w) = &r.witness else { return false };
    if w.u_alphabet().size() != 2 {
        return false;
    }
    let rows_ok = w.p_u_given_x1y2.rows().all(|row| (row[0] - 0.5).abs() <= 1e-3);
    let map = |u: usize, x1: usize, y2: usize| w.relay_map.apply(&[u, x1, y2]);
    let xor = (0..2).all(|u| (0..2).all(|x1| (0..2).all(|y2| map(u, x1, y2) == u ^ y2)));
    let xnor = (0..2).all(|u| (0..2).all(|x1| (0..2).all(|y2| map(u, x1, y2) == 1 ^ u ^ y2)));
    rows_ok && (xor || xnor)
}

/// NUB of `U ~ Bern(1/2)` independent of `(X1, Y2)` and `x2 = u xor y2`, best
/// over the two labelings of the given `p(x1)`.
fn xor_witness_value(ch: &NoncausalRelayChannel, px1: &[f64]) -> f64 {
    let u = Alphabet::new("u", 2).unwrap();
    let map = DeterministicMap::from_fn(
        vec![u.clone(), ch.x1().clone(), ch.y2().clone()],
        ch.x2().clone(),
        |d| d[0] ^ d[2],
    )
    .unwrap();
    [px1.to_vec(), px1.iter().rev().copied().collect()]
        .into_iter()
        .map(|p| {
            let w = WitnessGPDF {
                p_x1: Pmf::new(ch.x1().clone(), p).unwrap(),
                p_u_given_x1y2: CondPmf::uniform(vec![ch.x1().clone(), ch.y2().clone()], u.clone()),
                relay_map: map.clone(),
            };
            nub_objective(ch, &w).unwrap().value
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn criterion_2() -> Outcome {
    let ch = example_bsc_channel(0.2, 0.1, 0.55).unwrap();
    let rs = maximize_kinds(
        &ch,
        &[BoundKind::Df, BoundKind::GpDf, BoundKind::Nub, BoundKind::Cutset],
        &SearchConfig::default(),
    )
    .unwrap();
    let (df, gp, nub, cs) = (
        value(&rs, BoundKind::Df),
        value(&rs, BoundKind::GpDf),
        value(&rs, BoundKind::Nub),
        value(&rs, BoundKind::Cutset),
    );
    let (closed, px1) = bsc_example_capacity(0.2, 0.1, 0.55).unwrap();
    let xor = nub_witness_is_xor(rs.iter().find(|r| r.kind == BoundKind::Nub).unwrap());
    let reference = xor_witness_value(&ch, px1.probs());
    Outcome {
        pass: within(df, 0.2203, 1e-3)
            && within(cs, 0.2566, 1e-3)
            && within(nub, 0.2453, 1e-3)
            && within(gp, 0.2453, 1e-3)
            && within(closed, 0.2453, 5e-5)
            && xor,
        detail: format!(
            "DF {df:.6} (0.2203), CUTSET {cs:.6} (0.2566), NUB {nub:.6} (0.2453), GP-DF {gp:.6} (0.2453), tol 1e-3; \
             closed form {closed:.6} (0.2453, tol 5e-5); reported NUB witness is u xor y2 with U ~ Bern(1/2): {xor} \
             (that witness form evaluates to {reference:.9}, reported NUB {nub:.9})"
        ),
    }
}

fn criterion_3() -> Outcome {
    let cfg = SearchConfig::default();
    let bec = maximize_kinds(&example_bec_channel(), &[BoundKind::Df, BoundKind::GpDf], &cfg).unwrap();
    let bsc = example_bsc_channel(0.2, 0.1, 0.55).unwrap();
    let b = maximize_kinds(&bsc, &[BoundKind::Nub, BoundKind::Cutset], &cfg).unwrap();
    let g1 = value(&bec, BoundKind::GpDf) - value(&bec, BoundKind::Df);
    let g2 = value(&b, BoundKind::Cutset) - value(&b, BoundKind::Nub);
    Outcome {
        pass: g1 >= 0.15 && g2 >= 0.009,
        detail: format!("GP-DF - DF = {g1:.6} (>= 0.15), CUTSET - NUB = {g2:.6} (>= 0.009)"),
    }
}

fn criterion_4() -> Outcome {
    let cfg = SearchConfig {
        card_u: 2,
        card_yhat: 2,
        ..SearchConfig::default()
    };
    let mut worst = (0.0f64, 0u64);
    for seed in 0..20 {
        let ch = common::binary_channel(seed, false);
        let rs = maximize_kinds(&ch, &[BoundKind::GpCf, BoundKind::GpCfBinned], &cfg).unwrap();
        let d = (value(&rs, BoundKind::GpCf) - value(&rs, BoundKind::GpCfBinned)).abs();
        if d > worst.0 {
            worst = (d, seed);
        }
    }
    Outcome {
        pass: worst.0 <= 2e-3,
        detail: format!(
            "max |GP-CF - GP-CF-BINNED| over 20 binary channels = {:.2e} (seed {}); tol 2e-3",
            worst.0, worst.1
        ),
    }
}

fn criterion_5() -> Outcome {
    let mut r = common::rng(5);
    let mut worst = [0.0f64; 4];
    let mut track = |i: usize, a: f64, b: f64| worst[i] = worst[i].max((a - b).abs());
    for _ in 0..50 {
        let ch = common::small_channel(&mut r, false);
        let w = common::df(&ch, &mut r);
        let e = embed_df_into_gp_df(&ch, &w, ch.x2().size()).unwrap();
        track(
            0,
            df_objective(&ch, &w).unwrap().value,
            gp_df_objective(&ch, &e).unwrap().value,
        );

        let nv = r_size(&mut r);
        let w = common::pdf_markov(&ch, nv, &mut r);
        let e = embed_pdf_into_gp_pdf_cf(&ch, &w).unwrap();
        track(
            1,
            pdf_objective(&ch, &w).unwrap().value,
            gp_pdf_cf_objective(&ch, &e).unwrap().value,
        );

        let nu = r_size(&mut r);
        let w = common::gp_cf(&ch, nu, &mut r);
        let e = embed_gp_cf_into_gp_pdf_cf(&ch, &w, 2).unwrap();
        track(
            2,
            gp_cf_objective(&ch, &w).unwrap().value,
            gp_pdf_cf_objective(&ch, &e).unwrap().value,
        );

        let dch = common::small_channel(&mut r, true);
        let nu = r_size(&mut r);
        let w = common::gp_df(&dch, nu, &mut r);
        track(
            3,
            nub_objective(&dch, &w).unwrap().value,
            gp_df_objective(&dch, &w).unwrap().value,
        );
    }
    Outcome {
        pass: worst.iter().all(|&d| d <= 1e-12),
        detail: format!(
            "max deviation over 50 witnesses: DF->GP-DF {:.1e}, PDF->GP-PDF-CF {:.1e}, GP-CF->GP-PDF-CF {:.1e}, \
             degraded NUB=GP-DF {:.1e}; tol 1e-12",
            worst[0], worst[1], worst[2], worst[3]
        ),
    }
}

fn r_size(r: &mut rand_chacha::ChaCha8Rng) -> usize {
    use rand::Rng;
    r.gen_range(1..=3)
}

fn criterion_6() -> Outcome {
    let cfg = SearchConfig::default();
    let mut channels: Vec<(String, NoncausalRelayChannel)> = vec![
        ("bec example".into(), example_bec_channel()),
        ("bsc example".into(), example_bsc_channel(0.2, 0.1, 0.55).unwrap()),
    ];
    for seed in 0..2 {
        channels.push((format!("random {seed}"), common::binary_channel(100 + seed, false)));
        channels.push((
            format!("random degraded {seed}"),
            common::binary_channel(200 + seed, true),
        ));
    }
    let mut failures = Vec::new();
    for (name, ch) in &channels {
        let rs = maximize_all(ch, &cfg).unwrap();
        let v = |k| value(&rs, k);
        let mut check = |ok: bool, what: &str| {
            if !ok {
                failures.push(format!("{name}: {what}"));
            }
        };
        check(v(BoundKind::Df) <= v(BoundKind::GpDf) + 1e-6, "DF > GP-DF");
        check(v(BoundKind::GpCf) <= v(BoundKind::GpPdfCf) + 1e-6, "GP-CF > GP-PDF-CF");
        check(v(BoundKind::Nub) <= v(BoundKind::Cutset) + 1e-6, "NUB > CUTSET");
        if ch.is_degraded(1e-9) {
            for r in rs.iter().filter(|r| r.kind.is_lower_bound()) {
                check(r.value <= v(BoundKind::Nub) + 1e-3, &format!("{} > NUB", r.kind));
            }
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{} channels; tol 1e-6 (1e-3 for lower bounds vs NUB)", channels.len())
        } else {
            failures.join("; ")
        },
    }
}

fn criterion_7() -> Outcome {
    let ch = example_bec_channel();
    let w = example_bec_witness(&ch).unwrap();
    let base = SimParams::new(1, 0.35, 0.7, 0.2, 0.3, 2000, 1);
    let cells = sweep(&ch, &w, &base, &[8, 12, 16], &[0.35]).unwrap();
    let p: Vec<f64> = cells.iter().map(|c| c.estimate.p_err).collect();
    // R~ = 0.4 keeps 2^(nR) 2^(nR~) under the memory cap at n = 16.
    let high = SimParams::new(1, 0.9, 0.4, 0.2, 0.3, 2000, 1);
    let hi = sweep(&ch, &w, &high, &[16], &[0.9]).unwrap()[0].estimate.p_err;
    let relay: Vec<u64> = cells.iter().map(|c| c.estimate.relay_decode_failures).collect();
    Outcome {
        pass: p[2] < p[1] && p[1] < p[0] && hi > 0.5,
        detail: format!(
            "R=0.35: p_err(8) {:.4}, p_err(12) {:.4}, p_err(16) {:.4} (strictly decreasing required; relay failures {:?}); \
             R=0.9 n=16: p_err {hi:.4} (> 0.5)",
            p[0], p[1], p[2], relay
        ),
    }
}

fn criterion_8() -> Outcome {
    let mut r = common::rng(8);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let j = common::joint(&mut r, 4, 3);
        let k = j.num_axes();
        for mask in 1u32..(1 << k) {
            let a: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            worst = worst.max((j.entropy_of(&a).unwrap() - brute::entropy(&j, &a)).abs());
        }
        if k >= 2 {
            let (a, b) = (vec![0], (1..k).collect::<Vec<_>>());
            worst = worst.max((mutual_information(&j, &a, &b).unwrap() - brute::mi(&j, &a, &b)).abs());
        }
        if k >= 3 {
            let (a, b, c) = (vec![0], vec![1], (2..k).collect::<Vec<_>>());
            let got = conditional_mutual_information(&j, &a, &b, &c).unwrap();
            worst = worst.max((got - brute::cmi(&j, &a, &b, &c)).abs());
        }
    }
    Outcome {
        pass: worst <= 1e-12,
        detail: format!("max deviation over 100 joints {worst:.1e}; tol 1e-12"),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 erasure example", criterion_1),
        ("2 binary symmetric example", criterion_2),
        ("3 strict separations", criterion_3),
        ("4 GP-CF binning equivalence", criterion_4),
        ("5 reductions", criterion_5),
        ("6 orderings", criterion_6),
        ("7 simulation trend", criterion_7),
        ("8 information-measure oracle", criterion_8),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|s| name.contains(s.as_str())) {
            continue;
        }
        let t = Instant::now();
        let o = f();
        failed += !o.pass as usize;
        println!(
            "{} criterion {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}
