//! The noncausal relay channel `p(y2|x1) p(y3|x1,x2,y2)` and deterministic
//! relay maps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::prob::{Alphabet, CondPmf};

/// Default tolerance for [`NoncausalRelayChannel::is_degraded`].
pub const DEGRADED_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct NoncausalRelayChannel {
    x1: Alphabet,
    x2: Alphabet,
    y2: Alphabet,
    y3: Alphabet,
    sender_to_relay: CondPmf,
    direct: CondPmf,
}

impl NoncausalRelayChannel {
    /// `sender_to_relay` is `p(y2|x1)`; `direct` is `p(y3|x1,x2,y2)` with rows
    /// in lexicographic `(x1, x2, y2)` order.
    pub fn new(
        x1: Alphabet,
        x2: Alphabet,
        y2: Alphabet,
        y3: Alphabet,
        sender_to_relay: CondPmf,
        direct: CondPmf,
    ) -> Result<Self> {
        let s = sender_to_relay.input_axes();
        if s.len() != 1 || !s[0].compatible(&x1) || !sender_to_relay.output_axis().compatible(&y2) {
            return Err(Error::Axis("sender-to-relay channel must be p(y2|x1)".into()));
        }
        let d = direct.input_axes();
        if d.len() != 3
            || !d[0].compatible(&x1)
            || !d[1].compatible(&x2)
            || !d[2].compatible(&y2)
            || !direct.output_axis().compatible(&y3)
        {
            return Err(Error::Axis("direct channel must be p(y3|x1,x2,y2)".into()));
        }
        Ok(NoncausalRelayChannel {
            x1,
            x2,
            y2,
            y3,
            sender_to_relay,
            direct,
        })
    }

    pub fn x1(&self) -> &Alphabet {
        &self.x1
    }
    pub fn x2(&self) -> &Alphabet {
        &self.x2
    }
    pub fn y2(&self) -> &Alphabet {
        &self.y2
    }
    pub fn y3(&self) -> &Alphabet {
        &self.y3
    }
    pub fn sender_to_relay(&self) -> &CondPmf {
        &self.sender_to_relay
    }
    pub fn direct(&self) -> &CondPmf {
        &self.direct
    }

    /// `p(y2|x1)`.
    #[inline]
    pub fn p_y2(&self, x1: usize, y2: usize) -> f64 {
        self.sender_to_relay.probs()[x1 * self.y2.size() + y2]
    }

    /// The row `p(·|x1,x2,y2)`.
    #[inline]
    pub fn direct_row(&self, x1: usize, x2: usize, y2: usize) -> &[f64] {
        let r = (x1 * self.x2.size() + x2) * self.y2.size() + y2;
        self.direct.row(r)
    }

    /// True iff `p(y3|x1,x2,y2)` does not depend on `x1` (up to `tol`).
    pub fn is_degraded(&self, tol: f64) -> bool {
        for x1 in 1..self.x1.size() {
            for x2 in 0..self.x2.size() {
                for y2 in 0..self.y2.size() {
                    let a = self.direct_row(0, x2, y2);
                    let b = self.direct_row(x1, x2, y2);
                    if a.iter().zip(b).any(|(p, q)| (p - q).abs() > tol) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Whether relay output `y2` can occur under some sender input.
    pub fn y2_reachable(&self, y2: usize) -> bool {
        (0..self.x1.size()).any(|x1| self.p_y2(x1, y2) > 0.0)
    }
}

/// Free-function form of [`NoncausalRelayChannel::is_degraded`].
pub fn is_degraded(ch: &NoncausalRelayChannel, tol: f64) -> bool {
    ch.is_degraded(tol)
}

/// A total function from an input tuple to an output symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeterministicMap {
    input_axes: Vec<Alphabet>,
    output_axis: Alphabet,
    table: Vec<usize>,
}

impl DeterministicMap {
    pub fn new(input_axes: Vec<Alphabet>, output_axis: Alphabet, table: Vec<usize>) -> Result<Self> {
        let n: usize = input_axes.iter().map(Alphabet::size).product();
        if table.len() != n {
            return Err(Error::Axis(format!(
                "map table has {} entries, domain has {n}",
                table.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&t| t >= output_axis.size()) {
            return Err(Error::Axis(format!("map output {bad} not in {output_axis}")));
        }
        Ok(DeterministicMap {
            input_axes,
            output_axis,
            table,
        })
    }

    pub fn from_fn(input_axes: Vec<Alphabet>, output_axis: Alphabet, f: impl Fn(&[usize]) -> usize) -> Result<Self> {
        let sizes: Vec<usize> = input_axes.iter().map(Alphabet::size).collect();
        let n: usize = sizes.iter().product();
        let mut table = Vec::with_capacity(n);
        let mut digits = vec![0usize; sizes.len()];
        for _ in 0..n {
            table.push(f(&digits));
            for a in (0..sizes.len()).rev() {
                digits[a] += 1;
                if digits[a] < sizes[a] {
                    break;
                }
                digits[a] = 0;
            }
        }
        DeterministicMap::new(input_axes, output_axis, table)
    }

    pub fn input_axes(&self) -> &[Alphabet] {
        &self.input_axes
    }

    pub fn output_axis(&self) -> &Alphabet {
        &self.output_axis
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn index(&self, inputs: &[usize]) -> usize {
        inputs
            .iter()
            .zip(&self.input_axes)
            .fold(0, |acc, (&s, a)| acc * a.size() + s)
    }

    pub fn apply(&self, inputs: &[usize]) -> usize {
        self.table[self.index(inputs)]
    }
}

fn binary(name: &str) -> Alphabet {
    Alphabet::new(name, 2).expect("binary alphabet")
}

fn bsc_row(p: f64, input: usize) -> [f64; 2] {
    if input == 0 {
        [1.0 - p, p]
    } else {
        [p, 1.0 - p]
    }
}

/// BEC(1/2) to the relay; the relay-to-receiver link is clean when the relay
/// sees 0 or 1 and stuck at 1 when it sees an erasure. `Y2 = (0, 1, e)`.
pub fn example_bec_channel() -> NoncausalRelayChannel {
    let x1 = binary("x1");
    let x2 = binary("x2");
    let y2 = Alphabet::with_labels("y2", ["0", "1", "e"]).expect("labels");
    let y3 = binary("y3");
    let s2r = CondPmf::new(vec![x1.clone()], y2.clone(), vec![0.5, 0.0, 0.5, 0.0, 0.5, 0.5]).expect("BEC rows");
    let mut direct = Vec::with_capacity(12 * 2);
    for _x1 in 0..2 {
        for x2v in 0..2 {
            for y2v in 0..3 {
                let out = if y2v == 2 { 1 } else { x2v };
                direct.extend_from_slice(&bsc_row(0.0, out));
            }
        }
    }
    let direct = CondPmf::new(vec![x1.clone(), x2.clone(), y2.clone()], y3.clone(), direct).expect("direct rows");
    NoncausalRelayChannel::new(x1, x2, y2, y3, s2r, direct).expect("consistent axes")
}

/// BSC(p1) to the relay; BSC(p2) from relay to receiver when `y2 = 0` and
/// BSC(p3) when `y2 = 1`.
pub fn example_bsc_channel(p1: f64, p2: f64, p3: f64) -> Result<NoncausalRelayChannel> {
    for p in [p1, p2, p3] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange(p));
        }
    }
    let x1 = binary("x1");
    let x2 = binary("x2");
    let y2 = binary("y2");
    let y3 = binary("y3");
    let mut s2r = Vec::with_capacity(4);
    for x in 0..2 {
        s2r.extend_from_slice(&bsc_row(p1, x));
    }
    let s2r = CondPmf::new(vec![x1.clone()], y2.clone(), s2r)?;
    let mut direct = Vec::with_capacity(16);
    for _x1 in 0..2 {
        for x2v in 0..2 {
            for y2v in 0..2 {
                let p = if y2v == 0 { p2 } else { p3 };
                direct.extend_from_slice(&bsc_row(p, x2v));
            }
        }
    }
    let direct = CondPmf::new(vec![x1.clone(), x2.clone(), y2.clone()], y3.clone(), direct)?;
    NoncausalRelayChannel::new(x1, x2, y2, y3, s2r, direct)
}

fn random_row(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    // Exponential spacings give a uniform draw from the simplex.
    let mut w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    let fix = 1.0 - w[..n - 1].iter().sum::<f64>();
    w[n - 1] = fix.max(0.0);
    w
}

/// A channel with independently drawn rows. With `degraded`, the direct
/// channel ignores `x1`.
pub fn random_channel(sizes: [usize; 4], degraded: bool, seed: u64) -> Result<NoncausalRelayChannel> {
    let [nx1, nx2, ny2, ny3] = sizes;
    let x1 = Alphabet::new("x1", nx1)?;
    let x2 = Alphabet::new("x2", nx2)?;
    let y2 = Alphabet::new("y2", ny2)?;
    let y3 = Alphabet::new("y3", ny3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s2r: Vec<f64> = (0..nx1).flat_map(|_| random_row(&mut rng, ny2)).collect();
    let shared: Vec<Vec<f64>> = (0..nx2 * ny2).map(|_| random_row(&mut rng, ny3)).collect();
    let mut direct = Vec::with_capacity(nx1 * nx2 * ny2 * ny3);
    for _ in 0..nx1 {
        for row in &shared {
            if degraded {
                direct.extend_from_slice(row);
            } else {
                direct.extend(random_row(&mut rng, ny3));
            }
        }
    }
    let s2r = CondPmf::new(vec![x1.clone()], y2.clone(), s2r)?;
    let direct = CondPmf::new(vec![x1.clone(), x2.clone(), y2.clone()], y3.clone(), direct)?;
    NoncausalRelayChannel::new(x1, x2, y2, y3, s2r, direct)
}
