//! Parameterization of each witness domain as simplex blocks plus a map
//! table, and the grid-then-refine search over it.

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::grid::{choose_resolution, compositions, random_point};
use super::maps::{MapSpace, Symmetry};
use super::SearchConfig;
use crate::bounds::{evaluate, BoundKind};
use crate::channel::{DeterministicMap, NoncausalRelayChannel};
use crate::error::{Error, Result};
use crate::prob::{Alphabet, CondPmf, JointPmf, Pmf};
use crate::witness::*;

const IMPROVE_EPS: f64 = 1e-14;
const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Shape {
    Df,
    Pdf,
    Cutset,
    GpDf,
    GpCf,
    GpCfBinned,
    Cf,
    GpPdfCf,
}

impl Shape {
    pub fn of(kind: BoundKind) -> Shape {
        match kind {
            BoundKind::Df => Shape::Df,
            BoundKind::Pdf => Shape::Pdf,
            BoundKind::Cutset => Shape::Cutset,
            BoundKind::GpDf | BoundKind::Nub | BoundKind::DegradedCapacity => Shape::GpDf,
            BoundKind::GpCf => Shape::GpCf,
            BoundKind::GpCfBinned => Shape::GpCfBinned,
            BoundKind::Cf => Shape::Cf,
            BoundKind::GpPdfCf => Shape::GpPdfCf,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Block {
    offset: usize,
    dim: usize,
    live: bool,
}

/// A point of the search domain.
#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub value: f64,
    pub params: Vec<f64>,
    pub map: Vec<usize>,
}

pub(crate) struct Problem<'a> {
    ch: &'a NoncausalRelayChannel,
    kind: BoundKind,
    shape: Shape,
    u: Alphabet,
    v: Alphabet,
    yhat: Alphabet,
    blocks: Vec<Block>,
    base: Vec<f64>,
    maps: Option<MapSpace>,
}

impl<'a> Problem<'a> {
    pub fn new(ch: &'a NoncausalRelayChannel, kind: BoundKind, cfg: &SearchConfig) -> Result<Self> {
        let shape = Shape::of(kind);
        let (n1, n2, ny2) = (ch.x1().size(), ch.x2().size(), ch.y2().size());
        let (nu, nv, nh) = (cfg.card_u, cfg.card_v, cfg.card_yhat);
        let mut p = Problem {
            ch,
            kind,
            shape,
            u: Alphabet::new("u", nu)?,
            v: Alphabet::new("v", nv)?,
            yhat: Alphabet::new("yhat", nh)?,
            blocks: Vec::new(),
            base: Vec::new(),
            maps: None,
        };
        let reach: Vec<bool> = (0..ny2).map(|y2| ch.y2_reachable(y2)).collect();
        let alive = |x1: usize, y2: usize| ch.p_y2(x1, y2) > 0.0;
        match shape {
            Shape::Df => p.push(n1 * n2, true),
            Shape::Pdf => p.push(nv * n1 * n2, true),
            Shape::Cutset => {
                p.push(n1, true);
                for x1 in 0..n1 {
                    for y2 in 0..ny2 {
                        p.push(n2, alive(x1, y2));
                    }
                }
            }
            Shape::GpDf => {
                p.push(n1, true);
                for x1 in 0..n1 {
                    for y2 in 0..ny2 {
                        p.push(nu, alive(x1, y2));
                    }
                }
                let dead = (0..nu * n1 * ny2).map(|c| !alive(c / ny2 % n1, c % ny2)).collect();
                p.maps = Some(MapSpace::new(
                    vec![nu, n1, ny2],
                    n2,
                    dead,
                    Symmetry::PerValue { axis: 1 },
                ));
            }
            Shape::GpCf => {
                p.push(n1, true);
                for &r in &reach {
                    p.push(nu, r);
                }
                let dead = (0..nu * ny2).map(|c| !reach[c % ny2]).collect();
                p.maps = Some(MapSpace::new(vec![nu, ny2], n2, dead, Symmetry::Global));
            }
            Shape::GpCfBinned => {
                p.push(n1, true);
                for &r in &reach {
                    p.push(nu, r);
                }
                for &r in &reach {
                    p.push(nh, r);
                }
                let dead = (0..nu * nh * ny2).map(|c| !reach[c % ny2]).collect();
                p.maps = Some(MapSpace::new(vec![nu, nh, ny2], n2, dead, Symmetry::Pair));
            }
            Shape::Cf => {
                p.push(n1, true);
                p.push(n2, true);
                for &r in &reach {
                    p.push(nh, r);
                }
            }
            Shape::GpPdfCf => {
                p.push(nv * n1, true);
                for _ in 0..nv {
                    for &r in &reach {
                        p.push(nu, r);
                    }
                }
                let dead = (0..nu * nv * ny2).map(|c| !reach[c % ny2]).collect();
                p.maps = Some(MapSpace::new(vec![nu, nv, ny2], n2, dead, Symmetry::Nested));
            }
        }
        Ok(p)
    }

    fn push(&mut self, dim: usize, live: bool) {
        let offset = self.base.len();
        self.blocks.push(Block { offset, dim, live });
        self.base.extend(std::iter::repeat_n(1.0 / dim as f64, dim));
    }

    fn live_blocks(&self) -> impl Iterator<Item = &Block> {
        self.blocks.iter().filter(|b| b.live && b.dim > 1)
    }

    fn x1y2(&self) -> Vec<Alphabet> {
        vec![self.ch.x1().clone(), self.ch.y2().clone()]
    }

    pub fn decode(&self, params: &[f64], map: &[usize]) -> Result<Witness> {
        let ch = self.ch;
        let (n1, n2) = (ch.x1().size(), ch.x2().size());
        let y2 = || ch.y2().clone();
        let x2 = || ch.x2().clone();
        let relay = |inputs: Vec<Alphabet>| DeterministicMap::new(inputs, x2(), map.to_vec());
        let p_x1 = || Pmf::new(ch.x1().clone(), params[..n1].to_vec());
        Ok(match self.shape {
            Shape::Df => Witness::Df(WitnessDF {
                p_x1x2: JointPmf::new(vec![ch.x1().clone(), x2()], params.to_vec())?,
            }),
            Shape::Pdf => Witness::Pdf(WitnessPDF {
                p_vx1x2: JointPmf::new(vec![self.v.clone(), ch.x1().clone(), x2()], params.to_vec())?,
            }),
            Shape::Cutset => Witness::Cutset(WitnessCutset {
                p_x1: p_x1()?,
                p_x2_given_x1y2: CondPmf::new(self.x1y2(), x2(), params[n1..].to_vec())?,
            }),
            Shape::GpDf => Witness::GpDf(WitnessGPDF {
                p_x1: p_x1()?,
                p_u_given_x1y2: CondPmf::new(self.x1y2(), self.u.clone(), params[n1..].to_vec())?,
                relay_map: relay(vec![self.u.clone(), ch.x1().clone(), y2()])?,
            }),
            Shape::GpCf => Witness::GpCf(WitnessGPCF {
                p_x1: p_x1()?,
                p_u_given_y2: CondPmf::new(vec![y2()], self.u.clone(), params[n1..].to_vec())?,
                relay_map: relay(vec![self.u.clone(), y2()])?,
            }),
            Shape::GpCfBinned => {
                let mid = n1 + ch.y2().size() * self.u.size();
                Witness::GpCfBinned(WitnessGPCFBinned {
                    p_x1: p_x1()?,
                    p_u_given_y2: CondPmf::new(vec![y2()], self.u.clone(), params[n1..mid].to_vec())?,
                    p_yhat_given_y2: CondPmf::new(vec![y2()], self.yhat.clone(), params[mid..].to_vec())?,
                    relay_map: relay(vec![self.u.clone(), self.yhat.clone(), y2()])?,
                })
            }
            Shape::Cf => Witness::Cf(WitnessCF {
                p_x1: p_x1()?,
                p_x2: Pmf::new(x2(), params[n1..n1 + n2].to_vec())?,
                p_yhat_given_y2: CondPmf::new(vec![y2()], self.yhat.clone(), params[n1 + n2..].to_vec())?,
            }),
            Shape::GpPdfCf => {
                let head = self.v.size() * n1;
                Witness::GpPdfCf(WitnessGPPDFCF {
                    p_vx1: JointPmf::new(vec![self.v.clone(), ch.x1().clone()], params[..head].to_vec())?,
                    p_u_given_vy2: CondPmf::new(vec![self.v.clone(), y2()], self.u.clone(), params[head..].to_vec())?,
                    relay_map: relay(vec![self.u.clone(), self.v.clone(), y2()])?,
                })
            }
        })
    }

    /// The inverse of [`Problem::decode`]; fails on a shape or cardinality
    /// mismatch.
    pub fn encode(&self, w: &Witness) -> Result<(Vec<f64>, Vec<usize>)> {
        let mismatch = || Error::WitnessMismatch(format!("witness does not fit the `{}` search domain", self.kind));
        let mut params = Vec::with_capacity(self.base.len());
        let mut map = Vec::new();
        let mut aux_ok = true;
        match (self.shape, w) {
            (Shape::Df, Witness::Df(w)) => params.extend_from_slice(w.p_x1x2.probs()),
            (Shape::Pdf, Witness::Pdf(w)) => {
                aux_ok = w.p_vx1x2.axes()[0].size() == self.v.size();
                params.extend_from_slice(w.p_vx1x2.probs());
            }
            (Shape::Cutset, Witness::Cutset(w)) => {
                params.extend_from_slice(w.p_x1.probs());
                params.extend_from_slice(w.p_x2_given_x1y2.probs());
            }
            (Shape::GpDf, Witness::GpDf(w)) => {
                aux_ok = w.u_alphabet().size() == self.u.size();
                params.extend_from_slice(w.p_x1.probs());
                params.extend_from_slice(w.p_u_given_x1y2.probs());
                map = w.relay_map.table().to_vec();
            }
            (Shape::GpCf, Witness::GpCf(w)) => {
                aux_ok = w.u_alphabet().size() == self.u.size();
                params.extend_from_slice(w.p_x1.probs());
                params.extend_from_slice(w.p_u_given_y2.probs());
                map = w.relay_map.table().to_vec();
            }
            (Shape::GpCfBinned, Witness::GpCfBinned(w)) => {
                aux_ok = w.p_u_given_y2.output_axis().size() == self.u.size()
                    && w.p_yhat_given_y2.output_axis().size() == self.yhat.size();
                params.extend_from_slice(w.p_x1.probs());
                params.extend_from_slice(w.p_u_given_y2.probs());
                params.extend_from_slice(w.p_yhat_given_y2.probs());
                map = w.relay_map.table().to_vec();
            }
            (Shape::Cf, Witness::Cf(w)) => {
                aux_ok = w.p_yhat_given_y2.output_axis().size() == self.yhat.size();
                params.extend_from_slice(w.p_x1.probs());
                params.extend_from_slice(w.p_x2.probs());
                params.extend_from_slice(w.p_yhat_given_y2.probs());
            }
            (Shape::GpPdfCf, Witness::GpPdfCf(w)) => {
                aux_ok =
                    w.p_vx1.axes()[0].size() == self.v.size() && w.p_u_given_vy2.output_axis().size() == self.u.size();
                params.extend_from_slice(w.p_vx1.probs());
                params.extend_from_slice(w.p_u_given_vy2.probs());
                map = w.relay_map.table().to_vec();
            }
            _ => return Err(mismatch()),
        }
        if !aux_ok || params.len() != self.base.len() || map.len() != self.maps.as_ref().map_or(0, |m| m.cells()) {
            return Err(mismatch());
        }
        Ok((params, map))
    }

    pub fn eval(&self, params: &[f64], map: &[usize]) -> Result<f64> {
        Ok(evaluate(self.ch, self.kind, &self.decode(params, map)?)?.value)
    }

    pub fn key(&self, c: &Candidate) -> String {
        self.decode(&c.params, &c.map).map(|w| w.key()).unwrap_or_default()
    }
}

/// Whether `new` should replace `old`: larger value, or a tie within 1e-12
/// and a smaller witness key.
pub(crate) fn beats(p: &Problem<'_>, new: &Candidate, old: &Candidate) -> bool {
    if new.value > old.value + TIE_EPS {
        return true;
    }
    if new.value < old.value - TIE_EPS {
        return false;
    }
    p.key(new).cmp(&p.key(old)) == Ordering::Less
}

pub(crate) struct Search<'p, 'a> {
    pub problem: &'p Problem<'a>,
    cfg: &'p SearchConfig,
    grid: Vec<Vec<f64>>,
    pub evaluations: u64,
}

impl<'p, 'a> Search<'p, 'a> {
    pub fn new(problem: &'p Problem<'a>, cfg: &'p SearchConfig) -> Self {
        let live: Vec<Block> = problem.live_blocks().copied().collect();
        let dims: Vec<usize> = live.iter().map(|b| b.dim).collect();
        let mut grid = Vec::new();
        match choose_resolution(&dims, cfg.grid_resolution, cfg.grid_point_cap) {
            Some(k) => {
                let lists: Vec<Vec<Vec<f64>>> = dims.iter().map(|&d| compositions(d, k)).collect();
                let total: usize = lists.iter().map(Vec::len).product();
                for n in 0..total {
                    let mut point = problem.base.clone();
                    let mut rest = n;
                    for (b, list) in live.iter().zip(&lists).rev() {
                        let i = rest % list.len();
                        rest /= list.len();
                        point[b.offset..b.offset + b.dim].copy_from_slice(&list[i]);
                    }
                    grid.push(point);
                }
            }
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed_9a1d);
                for _ in 0..cfg.grid_point_cap {
                    let mut point = problem.base.clone();
                    for b in &live {
                        point[b.offset..b.offset + b.dim].copy_from_slice(&random_point(
                            b.dim,
                            cfg.grid_resolution,
                            &mut rng,
                        ));
                    }
                    grid.push(point);
                }
            }
        }
        // The uniform point is not on every grid.
        if !grid.contains(&problem.base) {
            grid.push(problem.base.clone());
        }
        Search {
            problem,
            cfg,
            grid,
            evaluations: 0,
        }
    }

    fn eval(&mut self, params: &[f64], map: &[usize]) -> Result<f64> {
        self.evaluations += 1;
        self.problem.eval(params, map)
    }

    /// Best grid point for a fixed map.
    pub fn coarse(&mut self, map: &[usize]) -> Result<Candidate> {
        let mut best: Option<Candidate> = None;
        for i in 0..self.grid.len() {
            let value = self.eval(&self.grid[i].clone(), map)?;
            let better = match &best {
                None => true,
                Some(b) => {
                    value > b.value + TIE_EPS
                        || (value >= b.value - TIE_EPS
                            && beats(
                                self.problem,
                                &Candidate {
                                    value,
                                    params: self.grid[i].clone(),
                                    map: map.to_vec(),
                                },
                                b,
                            ))
                }
            };
            if better {
                best = Some(Candidate {
                    value,
                    params: self.grid[i].clone(),
                    map: map.to_vec(),
                });
            }
        }
        Ok(best.expect("grid is never empty"))
    }

    /// Cyclic paired-coordinate ascent. Returns the improved candidate and
    /// whether the last cycle gained less than the tolerance.
    pub fn refine(&mut self, mut c: Candidate) -> Result<(Candidate, bool)> {
        let blocks: Vec<Block> = self.problem.live_blocks().copied().collect();
        let mut step = self.cfg.refine_initial_step;
        let mut cycles = 0;
        let mut last_gain = f64::INFINITY;
        while cycles < self.cfg.refine_iterations && step >= self.cfg.tolerance {
            let start = c.value;
            let mut accepted = false;
            for b in &blocks {
                for i in 0..b.dim {
                    for j in 0..b.dim {
                        if i == j {
                            continue;
                        }
                        let (pi, pj) = (b.offset + i, b.offset + j);
                        let amount = step.min(c.params[pj]);
                        if amount <= 0.0 {
                            continue;
                        }
                        let (old_i, old_j) = (c.params[pi], c.params[pj]);
                        c.params[pi] = old_i + amount;
                        c.params[pj] = if amount == old_j { 0.0 } else { old_j - amount };
                        let v = self.eval(&c.params, &c.map)?;
                        if v > c.value + IMPROVE_EPS {
                            c.value = v;
                            accepted = true;
                            normalize(&mut c.params[b.offset..b.offset + b.dim]);
                        } else {
                            c.params[pi] = old_i;
                            c.params[pj] = old_j;
                        }
                    }
                }
            }
            cycles += 1;
            last_gain = c.value - start;
            if !accepted {
                step /= 2.0;
            }
        }
        let value = self.eval(&c.params, &c.map)?;
        c.value = value;
        Ok((c, last_gain < self.cfg.tolerance))
    }

    /// Greedy single-entry flips of the map, scoring each map by its coarse
    /// optimum, until no flip helps.
    pub fn climb(&mut self, start: Candidate) -> Result<Candidate> {
        let space = self
            .problem
            .maps
            .as_ref()
            .expect("map search needs a map space")
            .clone();
        let live = space.live_cells();
        let mut cur = start;
        loop {
            let mut improved = false;
            for &cell in &live {
                for sym in 0..space.codomain {
                    if sym == cur.map[cell] {
                        continue;
                    }
                    let mut t = cur.map.clone();
                    t[cell] = sym;
                    let cand = self.coarse(&t)?;
                    if cand.value > cur.value + TIE_EPS {
                        cur = cand;
                        improved = true;
                    }
                }
            }
            if !improved {
                return Ok(cur);
            }
        }
    }

    /// Candidate map tables, and whether they were sampled.
    pub fn map_tables(&self) -> (Vec<Vec<usize>>, bool) {
        match &self.problem.maps {
            None => (vec![Vec::new()], false),
            Some(space) => space.candidates(self.cfg.map_enumeration_cap, self.cfg.seed),
        }
    }
}

fn normalize(block: &mut [f64]) {
    let s: f64 = block.iter().sum();
    if s > 0.0 && s != 1.0 {
        block.iter_mut().for_each(|x| *x /= s);
    }
}
