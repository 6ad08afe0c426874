//! Monte Carlo simulation of the GP decode-forward random coding scheme at
//! short blocklength.
//!
//! Per trial: a fresh codebook (`x1^n(m)` i.i.d. from `p(x1)`, a subcodebook
//! `u^n(l|m)` conditionally i.i.d. from `p(u|x1)`), a uniform message, relay
//! typicality decoding from `y2^n`, multicoding (first typical `l`),
//! symbol-by-symbol relaying through the witness map, and joint typicality
//! decoding at the receiver.
//!
//! Codewords are regenerated on demand from per-codeword seeds rather than
//! stored, so the relay and the receiver see the same codebook without
//! holding `2^(nR + nR~)` sequences in memory.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::channel::NoncausalRelayChannel;
use crate::error::{Error, Result};
use crate::prob::JointPmf;
use crate::witness::{build_joint_gp_df, WitnessGPDF};

/// Default limit on `2^ceil(nR) * 2^ceil(nR~) * n` codebook symbols.
pub const MEMORY_CAP: u128 = 1 << 26;

/// Slack absorbing rounding in `n * R` before taking the ceiling.
const RATE_CEIL_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SimParams {
    pub n: usize,
    pub rate_r: f64,
    pub rate_rtilde: f64,
    pub eps_relay: f64,
    pub eps_decoder: f64,
    pub trials: u64,
    pub seed: u64,
    pub memory_cap: u128,
}

impl SimParams {
    pub fn new(
        n: usize,
        rate_r: f64,
        rate_rtilde: f64,
        eps_relay: f64,
        eps_decoder: f64,
        trials: u64,
        seed: u64,
    ) -> Self {
        SimParams {
            n,
            rate_r,
            rate_rtilde,
            eps_relay,
            eps_decoder,
            trials,
            seed,
            memory_cap: MEMORY_CAP,
        }
    }

    /// `ceil(n R)`.
    pub fn message_bits(&self) -> u32 {
        ceil_bits(self.n, self.rate_r)
    }

    /// `ceil(n R~)`.
    pub fn subcodebook_bits(&self) -> u32 {
        ceil_bits(self.n, self.rate_rtilde)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::SimParams(m));
        if self.n == 0 {
            return bad("blocklength must be positive".into());
        }
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        for (name, r) in [("R", self.rate_r), ("R~", self.rate_rtilde)] {
            if !(r.is_finite() && r >= 0.0) {
                return bad(format!("rate {name} = {r} must be finite and nonnegative"));
            }
        }
        if !(self.eps_relay > 0.0 && self.eps_decoder > self.eps_relay && self.eps_decoder.is_finite()) {
            return bad(format!(
                "need 0 < eps_relay < eps_decoder (got {} and {})",
                self.eps_relay, self.eps_decoder
            ));
        }
        let (a, b) = (self.message_bits(), self.subcodebook_bits());
        let needed = if a + b > 100 {
            u128::MAX
        } else {
            (1u128 << (a + b)).saturating_mul(self.n as u128)
        };
        if needed > self.memory_cap {
            return Err(Error::MemoryCap {
                needed,
                cap: self.memory_cap,
            });
        }
        Ok(())
    }
}

fn ceil_bits(n: usize, r: f64) -> u32 {
    let x = (n as f64 * r - RATE_CEIL_SLACK).ceil();
    if x <= 0.0 {
        0
    } else if x > 127.0 {
        127
    } else {
        x as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorEstimate {
    pub p_err: f64,
    /// 95% normal-approximation half-width, `1.96 sqrt(p(1-p)/trials)`.
    pub ci_halfwidth: f64,
    pub errors: u64,
    pub trials: u64,
    pub relay_decode_failures: u64,
    pub multicoding_failures: u64,
    pub decoder_failures: u64,
}

impl ErrorEstimate {
    fn from_counts(errors: u64, trials: u64, relay: u64, multi: u64, dec: u64) -> Self {
        let p = errors as f64 / trials as f64;
        ErrorEstimate {
            p_err: p,
            ci_halfwidth: 1.96 * (p * (1.0 - p) / trials as f64).sqrt(),
            errors,
            trials,
            relay_decode_failures: relay,
            multicoding_failures: multi,
            decoder_failures: dec,
        }
    }
}

/// Robust typicality test compiled for one joint pmf, blocklength and slack:
/// every cell count must satisfy `|count/n - p| <= eps p`.
#[derive(Debug, Clone)]
pub struct TypicalityTest {
    sizes: Vec<usize>,
    n: usize,
    lo: Vec<u32>,
    hi: Vec<u32>,
}

impl TypicalityTest {
    pub fn new(joint: &JointPmf, eps: f64, n: usize) -> Self {
        let nf = n as f64;
        let mut lo = Vec::with_capacity(joint.probs().len());
        let mut hi = Vec::with_capacity(joint.probs().len());
        for &p in joint.probs() {
            let a = nf * p * (1.0 - eps);
            let b = nf * p * (1.0 + eps);
            lo.push(if a <= 0.0 { 0 } else { (a - 1e-9).ceil() as u32 });
            hi.push(if b >= nf {
                n as u32
            } else {
                (b + 1e-9).floor().max(0.0) as u32
            });
        }
        TypicalityTest {
            sizes: joint.sizes(),
            n,
            lo,
            hi,
        }
    }

    /// `seqs` follow the joint's axis order and all have length `n`.
    pub fn check(&self, seqs: &[&[usize]], counts: &mut Vec<u32>) -> bool {
        counts.clear();
        counts.resize(self.lo.len(), 0);
        for i in 0..self.n {
            let mut idx = 0;
            for (s, &size) in seqs.iter().zip(&self.sizes) {
                idx = idx * size + s[i];
            }
            counts[idx] += 1;
            if counts[idx] > self.hi[idx] {
                return false;
            }
        }
        counts.iter().zip(&self.lo).all(|(c, l)| c >= l)
    }
}

/// Whether the sequences are jointly `eps`-typical for `joint` (robust
/// typicality). Sequences follow the joint's axis order.
///
/// ```
/// use relaycap::sim::typical;
/// use relaycap::{Alphabet, Pmf};
/// let a = Alphabet::new("a", 2).unwrap();
/// let p = Pmf::point_mass(a, 1).unwrap().to_joint();
/// assert!(typical(&[&[1, 1, 1]], &p, 0.1).unwrap());
/// assert!(!typical(&[&[1, 0, 1]], &p, 0.1).unwrap());
/// ```
pub fn typical(seqs: &[&[usize]], joint: &JointPmf, eps: f64) -> Result<bool> {
    if seqs.len() != joint.num_axes() {
        return Err(Error::SimParams(format!(
            "{} sequences for a joint over {} axes",
            seqs.len(),
            joint.num_axes()
        )));
    }
    let n = seqs.first().map_or(0, |s| s.len());
    if seqs.iter().any(|s| s.len() != n) {
        return Err(Error::SimParams("sequences differ in length".into()));
    }
    for (s, a) in seqs.iter().zip(joint.axes()) {
        if s.iter().any(|&x| x >= a.size()) {
            return Err(Error::SimParams(format!("symbol outside alphabet `{}`", a.name())));
        }
    }
    Ok(TypicalityTest::new(joint, eps, n).check(seqs, &mut Vec::new()))
}

fn mix(a: u64, b: u64) -> u64 {
    Xoshiro256PlusPlus::seed_from_u64(a ^ b.wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(17)).gen()
}

fn weighted(row: &[f64]) -> Result<WeightedIndex<f64>> {
    WeightedIndex::new(row).map_err(|e| Error::SimParams(format!("bad sampling row: {e}")))
}

/// The GP-DF codebook of one trial. Codewords are generated on demand from
/// seeds derived from `(key, m, l)`, so every lookup of the same index
/// returns the same sequence.
#[derive(Debug, Clone)]
pub struct GPDFCodebook {
    n: usize,
    num_messages: usize,
    num_sub: usize,
    key: u64,
    p_x1: WeightedIndex<f64>,
    p_u_given_x1: Vec<WeightedIndex<f64>>,
}

impl GPDFCodebook {
    pub fn new(
        ch: &NoncausalRelayChannel,
        w: &WitnessGPDF,
        n: usize,
        message_bits: u32,
        sub_bits: u32,
        key: u64,
    ) -> Result<Self> {
        let (n1, ny2) = (ch.x1().size(), ch.y2().size());
        let nu = w.u_alphabet().size();
        let mut rows = Vec::with_capacity(n1);
        for x1 in 0..n1 {
            let mut r = vec![0.0; nu];
            for y2 in 0..ny2 {
                let py = ch.p_y2(x1, y2);
                for (u, q) in w.p_u_given_x1y2.row(x1 * ny2 + y2).iter().enumerate() {
                    r[u] += py * q;
                }
            }
            rows.push(weighted(&r)?);
        }
        Ok(GPDFCodebook {
            n,
            num_messages: 1usize << message_bits,
            num_sub: 1usize << sub_bits,
            key,
            p_x1: weighted(w.p_x1.probs())?,
            p_u_given_x1: rows,
        })
    }

    pub fn num_messages(&self) -> usize {
        self.num_messages
    }

    pub fn num_sub(&self) -> usize {
        self.num_sub
    }

    pub fn fill_x1(&self, m: usize, out: &mut Vec<usize>) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(mix(self.key, m as u64));
        out.clear();
        out.extend((0..self.n).map(|_| self.p_x1.sample(&mut rng)));
    }

    /// `u^n(l|m)` given the parent codeword `x1^n(m)`.
    pub fn fill_u(&self, m: usize, l: usize, x1: &[usize], out: &mut Vec<usize>) {
        let idx = ((m as u64) << 32) | l as u64;
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(mix(self.key ^ 0x75, idx.wrapping_add(1)));
        out.clear();
        out.extend(x1.iter().map(|&a| self.p_u_given_x1[a].sample(&mut rng)));
    }

    pub fn x1_codeword(&self, m: usize) -> Vec<usize> {
        let mut v = Vec::new();
        self.fill_x1(m, &mut v);
        v
    }

    pub fn u_codeword(&self, m: usize, l: usize) -> Vec<usize> {
        let x1 = self.x1_codeword(m);
        let mut v = Vec::new();
        self.fill_u(m, l, &x1, &mut v);
        v
    }

    /// Every codeword: `[m][i]` for X1 and `[m][l][i]` for U.
    pub fn materialize(&self) -> (Vec<Vec<usize>>, Vec<Vec<Vec<usize>>>) {
        let x1: Vec<Vec<usize>> = (0..self.num_messages).map(|m| self.x1_codeword(m)).collect();
        let u = (0..self.num_messages)
            .map(|m| {
                (0..self.num_sub)
                    .map(|l| {
                        let mut v = Vec::new();
                        self.fill_u(m, l, &x1[m], &mut v);
                        v
                    })
                    .collect()
            })
            .collect();
        (x1, u)
    }
}

struct Tests {
    x1y2: TypicalityTest,
    ux1y2: TypicalityTest,
    x1y3: TypicalityTest,
    x1uy3: TypicalityTest,
}

struct Outcome {
    error: bool,
    relay_fail: bool,
    multi_fail: bool,
    dec_fail: bool,
}

fn run_trial(
    ch: &NoncausalRelayChannel,
    w: &WitnessGPDF,
    p: &SimParams,
    tests: &Tests,
    y2_rows: &[WeightedIndex<f64>],
    y3_rows: &[WeightedIndex<f64>],
    trial: u64,
) -> Result<Outcome> {
    let n = p.n;
    let trial_seed = mix(p.seed, trial);
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(trial_seed);
    let book = GPDFCodebook::new(
        ch,
        w,
        n,
        p.message_bits(),
        p.subcodebook_bits(),
        mix(trial_seed, 0xc0de),
    )?;
    let nm = book.num_messages();
    let nl = book.num_sub();
    let (n2, ny2) = (ch.x2().size(), ch.y2().size());
    let mut counts = Vec::new();

    let x1_book: Vec<Vec<usize>> = (0..nm).map(|m| book.x1_codeword(m)).collect();
    let msg = rng.gen_range(0..nm);
    let x1 = &x1_book[msg];
    let y2: Vec<usize> = x1.iter().map(|&a| y2_rows[a].sample(&mut rng)).collect();

    // Relay: unique message typical with y2.
    let mut found = Vec::with_capacity(2);
    for (m, c) in x1_book.iter().enumerate() {
        if tests.x1y2.check(&[c, &y2], &mut counts) {
            found.push(m);
            if found.len() > 1 {
                break;
            }
        }
    }
    let relay_fail = found.len() != 1;
    let m_relay = if relay_fail { rng.gen_range(0..nm) } else { found[0] };
    let x1r = &x1_book[m_relay];

    // Multicoding: first l typical with (x1, y2).
    let mut u = Vec::with_capacity(n);
    let mut chosen = None;
    for l in 0..nl {
        book.fill_u(m_relay, l, x1r, &mut u);
        if tests.ux1y2.check(&[&u, x1r, &y2], &mut counts) {
            chosen = Some(l);
            break;
        }
    }
    let multi_fail = chosen.is_none();
    let l = chosen.unwrap_or_else(|| rng.gen_range(0..nl));
    book.fill_u(m_relay, l, x1r, &mut u);

    let y3: Vec<usize> = (0..n)
        .map(|i| {
            let x2 = w.relay_map.apply(&[u[i], x1r[i], y2[i]]);
            y3_rows[(x1[i] * n2 + x2) * ny2 + y2[i]].sample(&mut rng)
        })
        .collect();

    // Decoder: unique message with some typical l. The pair (x1, y3) being
    // typical is necessary, so other messages are skipped early.
    let decoded = if nm == 1 {
        Some(0)
    } else {
        let mut hits = Vec::with_capacity(2);
        for (m, c) in x1_book.iter().enumerate() {
            if !tests.x1y3.check(&[c, &y3], &mut counts) {
                continue;
            }
            for l in 0..nl {
                book.fill_u(m, l, c, &mut u);
                if tests.x1uy3.check(&[c, &u, &y3], &mut counts) {
                    hits.push(m);
                    break;
                }
            }
            if hits.len() > 1 {
                break;
            }
        }
        if hits.len() == 1 {
            Some(hits[0])
        } else {
            None
        }
    };
    Ok(Outcome {
        error: decoded != Some(msg),
        relay_fail,
        multi_fail,
        dec_fail: decoded.is_none(),
    })
}

/// Estimate the error probability of the GP decode-forward scheme for one
/// witness and parameter set.
pub fn simulate_gp_df(ch: &NoncausalRelayChannel, w: &WitnessGPDF, p: &SimParams) -> Result<ErrorEstimate> {
    p.validate()?;
    let joint = build_joint_gp_df(ch, w)?;
    // (X1, Y2, U, X2, Y3) = axes 0..5
    let tests = Tests {
        x1y2: TypicalityTest::new(&joint.marginalize(&[0, 1])?, p.eps_relay, p.n),
        ux1y2: TypicalityTest::new(&joint.marginalize(&[2, 0, 1])?, p.eps_relay, p.n),
        x1y3: TypicalityTest::new(&joint.marginalize(&[0, 4])?, p.eps_decoder, p.n),
        x1uy3: TypicalityTest::new(&joint.marginalize(&[0, 2, 4])?, p.eps_decoder, p.n),
    };
    let y2_rows = ch.sender_to_relay().rows().map(weighted).collect::<Result<Vec<_>>>()?;
    let y3_rows = ch.direct().rows().map(weighted).collect::<Result<Vec<_>>>()?;
    let (mut errors, mut relay, mut multi, mut dec) = (0, 0, 0, 0);
    for t in 0..p.trials {
        let o = run_trial(ch, w, p, &tests, &y2_rows, &y3_rows, t)?;
        errors += o.error as u64;
        relay += o.relay_fail as u64;
        multi += o.multi_fail as u64;
        dec += o.dec_fail as u64;
    }
    Ok(ErrorEstimate::from_counts(errors, p.trials, relay, multi, dec))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub n: usize,
    pub rate: f64,
    pub seed: u64,
    pub estimate: ErrorEstimate,
}

/// Seed of the sweep cell `(n, r)`.
pub fn cell_seed(base: u64, n: usize, r: f64) -> u64 {
    mix(mix(base, n as u64), r.to_bits())
}

/// `simulate_gp_df` over the grid `n_values x r_values`, rows ordered by `n`
/// then rate. Every cell is checked against the caps before any runs.
pub fn sweep(
    ch: &NoncausalRelayChannel,
    w: &WitnessGPDF,
    base: &SimParams,
    n_values: &[usize],
    r_values: &[f64],
) -> Result<Vec<SweepCell>> {
    let mut cells = Vec::new();
    for &n in n_values {
        for &r in r_values {
            let p = SimParams {
                n,
                rate_r: r,
                seed: cell_seed(base.seed, n, r),
                ..base.clone()
            };
            p.validate()?;
            cells.push(p);
        }
    }
    cells
        .into_iter()
        .map(|p| {
            Ok(SweepCell {
                n: p.n,
                rate: p.rate_r,
                seed: p.seed,
                estimate: simulate_gp_df(ch, w, &p)?,
            })
        })
        .collect()
}
