#![allow(dead_code)]

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relaycap::channel::random_channel;
use relaycap::witness::{WitnessDF, WitnessGPCF, WitnessGPDF, WitnessPDF};
use relaycap::{Alphabet, CondPmf, DeterministicMap, JointPmf, NoncausalRelayChannel, Pmf};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random probability vector; about one in five has a zero entry.
pub fn row(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    if n > 1 && rng.gen_bool(0.2) {
        let k = rng.gen_range(0..n);
        w[k] = 0.0;
    }
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

fn rows(rng: &mut ChaCha8Rng, count: usize, n: usize) -> Vec<f64> {
    (0..count).flat_map(|_| row(rng, n)).collect()
}

pub fn aux(name: &str, n: usize) -> Alphabet {
    Alphabet::new(name, n).unwrap()
}

/// Alphabet sizes in `{2, 3}`.
pub fn small_channel(rng: &mut ChaCha8Rng, degraded: bool) -> NoncausalRelayChannel {
    let sizes = [0; 4].map(|_| rng.gen_range(2..=3));
    random_channel(sizes, degraded, rng.gen()).unwrap()
}

pub fn binary_channel(seed: u64, degraded: bool) -> NoncausalRelayChannel {
    random_channel([2, 2, 2, 2], degraded, seed).unwrap()
}

pub fn df(ch: &NoncausalRelayChannel, rng: &mut ChaCha8Rng) -> WitnessDF {
    let (n1, n2) = (ch.x1().size(), ch.x2().size());
    WitnessDF {
        p_x1x2: JointPmf::new(vec![ch.x1().clone(), ch.x2().clone()], row(rng, n1 * n2)).unwrap(),
    }
}

/// `p(v) p(x1|v) p(x2|v)`.
pub fn pdf_markov(ch: &NoncausalRelayChannel, nv: usize, rng: &mut ChaCha8Rng) -> WitnessPDF {
    let (n1, n2) = (ch.x1().size(), ch.x2().size());
    let pv = row(rng, nv);
    let mut p = Vec::with_capacity(nv * n1 * n2);
    for &a in &pv {
        let (r1, r2) = (row(rng, n1), row(rng, n2));
        for &b in &r1 {
            for &c in &r2 {
                p.push(a * b * c);
            }
        }
    }
    WitnessPDF {
        p_vx1x2: JointPmf::new(vec![aux("v", nv), ch.x1().clone(), ch.x2().clone()], p).unwrap(),
    }
}

fn table(rng: &mut ChaCha8Rng, cells: usize, out: usize) -> Vec<usize> {
    (0..cells).map(|_| rng.gen_range(0..out)).collect()
}

pub fn gp_df(ch: &NoncausalRelayChannel, nu: usize, rng: &mut ChaCha8Rng) -> WitnessGPDF {
    let (n1, n2, ny2) = (ch.x1().size(), ch.x2().size(), ch.y2().size());
    let u = aux("u", nu);
    WitnessGPDF {
        p_x1: Pmf::new(ch.x1().clone(), row(rng, n1)).unwrap(),
        p_u_given_x1y2: CondPmf::new(
            vec![ch.x1().clone(), ch.y2().clone()],
            u.clone(),
            rows(rng, n1 * ny2, nu),
        )
        .unwrap(),
        relay_map: DeterministicMap::new(
            vec![u, ch.x1().clone(), ch.y2().clone()],
            ch.x2().clone(),
            table(rng, nu * n1 * ny2, n2),
        )
        .unwrap(),
    }
}

pub fn gp_cf(ch: &NoncausalRelayChannel, nu: usize, rng: &mut ChaCha8Rng) -> WitnessGPCF {
    let (n1, n2, ny2) = (ch.x1().size(), ch.x2().size(), ch.y2().size());
    let u = aux("u", nu);
    WitnessGPCF {
        p_x1: Pmf::new(ch.x1().clone(), row(rng, n1)).unwrap(),
        p_u_given_y2: CondPmf::new(vec![ch.y2().clone()], u.clone(), rows(rng, ny2, nu)).unwrap(),
        relay_map: DeterministicMap::new(vec![u, ch.y2().clone()], ch.x2().clone(), table(rng, nu * ny2, n2)).unwrap(),
    }
}

/// A random joint over up to `max_axes` axes of size up to `max_size`.
pub fn joint(rng: &mut ChaCha8Rng, max_axes: usize, max_size: usize) -> JointPmf {
    let k = rng.gen_range(1..=max_axes);
    let axes: Vec<Alphabet> = (0..k)
        .map(|i| aux(&format!("a{i}"), rng.gen_range(1..=max_size)))
        .collect();
    let total = axes.iter().map(Alphabet::size).product();
    JointPmf::new(axes, row(rng, total)).unwrap()
}

/// Every multi-index of a joint with its probability.
fn cells(j: &JointPmf) -> Vec<(Vec<usize>, f64)> {
    let sizes = j.sizes();
    let mut idx = vec![0; sizes.len()];
    let mut out = Vec::with_capacity(j.probs().len());
    for &p in j.probs() {
        out.push((idx.clone(), p));
        for d in (0..sizes.len()).rev() {
            idx[d] += 1;
            if idx[d] < sizes[d] {
                break;
            }
            idx[d] = 0;
        }
    }
    out
}

fn marginal(j: &JointPmf, keep: &[usize]) -> HashMap<Vec<usize>, f64> {
    let mut m = HashMap::new();
    for (idx, p) in cells(j) {
        *m.entry(keep.iter().map(|&a| idx[a]).collect()).or_insert(0.0) += p;
    }
    m
}

/// Direct-summation reference implementations.
pub mod brute {
    use super::*;

    pub fn entropy(j: &JointPmf, a: &[usize]) -> f64 {
        marginal(j, a)
            .values()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum()
    }

    /// `sum p(a,b,c) log p(a,b,c) p(c) / (p(a,c) p(b,c))`.
    pub fn cmi(j: &JointPmf, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
        let cat = |x: &[usize], y: &[usize]| [x, y].concat();
        let (pac, pbc, pc) = (marginal(j, &cat(a, c)), marginal(j, &cat(b, c)), marginal(j, c));
        let abc = cat(&cat(a, b), c);
        let mut s = 0.0;
        for (idx, p) in marginal(j, &abc) {
            if p <= 0.0 {
                continue;
            }
            let (ia, rest) = idx.split_at(a.len());
            let (ib, ic) = rest.split_at(b.len());
            let q = pac[&cat(ia, ic)] * pbc[&cat(ib, ic)];
            s += p * (p * pc[ic] / q).log2();
        }
        s
    }

    pub fn mi(j: &JointPmf, a: &[usize], b: &[usize]) -> f64 {
        cmi(j, a, b, &[])
    }
}

pub fn cf(ch: &NoncausalRelayChannel, nyhat: usize, rng: &mut ChaCha8Rng) -> relaycap::witness::WitnessCF {
    let (n1, n2, ny2) = (ch.x1().size(), ch.x2().size(), ch.y2().size());
    relaycap::witness::WitnessCF {
        p_x1: Pmf::new(ch.x1().clone(), row(rng, n1)).unwrap(),
        p_x2: Pmf::new(ch.x2().clone(), row(rng, n2)).unwrap(),
        p_yhat_given_y2: CondPmf::new(vec![ch.y2().clone()], aux("yhat", nyhat), rows(rng, ny2, nyhat)).unwrap(),
    }
}
