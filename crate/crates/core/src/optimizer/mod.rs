//! Numerical maximization of every bound over its witness domain.
//!
//! Each domain is a product of probability simplices (one per pmf or
//! conditional row) times, for the GP forms, a finite set of deterministic
//! relay maps. For each map candidate the search scans a coarse simplex grid
//! and then refines the best grid point by paired-coordinate ascent. Richer
//! bounds are seeded with the optimum of poorer ones embedded into their
//! domain, so the usual orderings hold at matched effort.
//!
//! Values are best found, not certified global optima.

mod grid;
mod maps;
mod search;

use std::collections::BTreeMap;

pub use grid::{grid_count, simplex_grid};
pub use maps::enumerate_maps;

use crate::bounds::{evaluate, BoundKind, Term};
use crate::channel::{NoncausalRelayChannel, DEGRADED_TOL};
use crate::error::{Error, Result};
use crate::witness::*;
use search::{beats, Candidate, Problem, Search};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Coarse-phase resolution `k`: pmf coordinates are multiples of `1/k`.
    pub grid_resolution: usize,
    /// Maximum number of refinement cycles per candidate.
    pub refine_iterations: usize,
    pub refine_initial_step: f64,
    pub tolerance: f64,
    pub card_u: usize,
    pub card_v: usize,
    pub card_yhat: usize,
    pub map_enumeration_cap: usize,
    /// Largest coarse grid scanned per map. Bigger grids are scanned at the
    /// largest divisor of `grid_resolution` that fits, or sampled.
    pub grid_point_cap: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_resolution: 8,
            refine_iterations: 400,
            refine_initial_step: 0.05,
            tolerance: 1e-6,
            card_u: 2,
            card_v: 2,
            card_yhat: 2,
            map_enumeration_cap: 65536,
            grid_point_cap: 4096,
            seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.grid_resolution == 0 {
            return bad("grid_resolution must be at least 1");
        }
        if !(self.tolerance > 0.0) {
            return bad("tolerance must be positive");
        }
        if !(self.refine_initial_step > 0.0 && self.refine_initial_step <= 1.0) {
            return bad("refine_initial_step must lie in (0, 1]");
        }
        if self.card_u == 0 || self.card_v == 0 || self.card_yhat == 0 {
            return bad("cardinalities must be at least 1");
        }
        if self.map_enumeration_cap == 0 || self.grid_point_cap == 0 {
            return bad("caps must be at least 1");
        }
        Ok(())
    }
}

/// A bound value with its maximizing witness.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    pub kind: BoundKind,
    pub value: f64,
    pub witness: Witness,
    pub terms: Vec<Term>,
    pub evaluations: u64,
    /// The last refinement cycle of the winning candidate gained less than
    /// the tolerance.
    pub converged: bool,
}

impl BoundResult {
    pub fn card_u(&self) -> Option<usize> {
        match &self.witness {
            Witness::GpDf(w) => Some(w.u_alphabet().size()),
            Witness::GpCf(w) => Some(w.u_alphabet().size()),
            Witness::GpCfBinned(w) => Some(w.p_u_given_y2.output_axis().size()),
            Witness::GpPdfCf(w) => Some(w.p_u_given_vy2.output_axis().size()),
            _ => None,
        }
    }

    pub fn card_v(&self) -> Option<usize> {
        match &self.witness {
            Witness::Pdf(w) => Some(w.p_vx1x2.axes()[0].size()),
            Witness::GpPdfCf(w) => Some(w.p_vx1.axes()[0].size()),
            _ => None,
        }
    }

    pub fn card_yhat(&self) -> Option<usize> {
        match &self.witness {
            Witness::GpCfBinned(w) => Some(w.p_yhat_given_y2.output_axis().size()),
            Witness::Cf(w) => Some(w.p_yhat_given_y2.output_axis().size()),
            _ => None,
        }
    }
}

/// Maximize one bound from the given seed witnesses plus the map-by-map
/// grid search. Seeds must have the domain's shape and cardinalities.
pub fn maximize_seeded(
    ch: &NoncausalRelayChannel,
    kind: BoundKind,
    cfg: &SearchConfig,
    seeds: &[Witness],
) -> Result<BoundResult> {
    cfg.validate()?;
    if kind == BoundKind::DegradedCapacity && !ch.is_degraded(DEGRADED_TOL) {
        return Err(Error::NotDegraded);
    }
    let problem = Problem::new(ch, kind, cfg)?;
    let encoded = seeds.iter().map(|w| problem.encode(w)).collect::<Result<Vec<_>>>()?;
    let mut search = Search::new(&problem, cfg);
    let mut best: Option<(Candidate, bool)> = None;
    let offer = |c: Candidate, conv: bool, best: &mut Option<(Candidate, bool)>| {
        if best.as_ref().is_none_or(|(b, _)| beats(&problem, &c, b)) {
            *best = Some((c, conv));
        }
    };

    let (tables, sampled) = search.map_tables();
    for t in &tables {
        let mut c = search.coarse(t)?;
        if sampled {
            c = search.climb(c)?;
        }
        let (c, conv) = search.refine(c)?;
        offer(c, conv, &mut best);
    }
    for (params, map) in encoded {
        let value = search.problem.eval(&params, &map)?;
        let (c, conv) = search.refine(Candidate { value, params, map })?;
        offer(c, conv, &mut best);
    }

    let (c, converged) = best.expect("at least one candidate");
    let witness = problem.decode(&c.params, &c.map)?;
    let ov = evaluate(ch, kind, &witness)?;
    debug_assert!((ov.value - c.value).abs() <= 1e-12);
    Ok(BoundResult {
        kind,
        value: ov.value,
        witness,
        terms: ov.terms,
        evaluations: search.evaluations,
        converged,
    })
}

fn seeds_for(
    ch: &NoncausalRelayChannel,
    kind: BoundKind,
    cfg: &SearchConfig,
    memo: &mut BTreeMap<BoundKind, BoundResult>,
) -> Result<Vec<Witness>> {
    let mut seeds = Vec::new();
    let need = |k: BoundKind, memo: &mut BTreeMap<BoundKind, BoundResult>| -> Result<Witness> {
        Ok(solve(ch, k, cfg, memo)?.witness)
    };
    match kind {
        BoundKind::Df | BoundKind::Cf | BoundKind::GpCf | BoundKind::DegradedCapacity => {}
        BoundKind::Pdf => {
            if let Witness::Df(w) = need(BoundKind::Df, memo)? {
                seeds.extend(embed_df_into_pdf(ch, &w, cfg.card_v).ok().map(Witness::Pdf));
            }
        }
        BoundKind::GpCfBinned => {
            if let Witness::Cf(w) = need(BoundKind::Cf, memo)? {
                seeds.extend(
                    embed_cf_into_binned(ch, &w, cfg.card_u, cfg.card_yhat)
                        .ok()
                        .map(Witness::GpCfBinned),
                );
            }
            if let Witness::GpCf(w) = need(BoundKind::GpCf, memo)? {
                seeds.extend(
                    embed_gp_cf_into_binned(ch, &w, cfg.card_u, cfg.card_yhat)
                        .ok()
                        .map(Witness::GpCfBinned),
                );
            }
        }
        BoundKind::GpDf | BoundKind::Nub => {
            if let Witness::Df(w) = need(BoundKind::Df, memo)? {
                seeds.extend(embed_df_into_gp_df(ch, &w, cfg.card_u).ok().map(Witness::GpDf));
            }
            if let Witness::GpCf(w) = need(BoundKind::GpCf, memo)? {
                seeds.extend(embed_gp_cf_into_gp_df(ch, &w).ok().map(Witness::GpDf));
            }
            if kind == BoundKind::Nub {
                seeds.push(need(BoundKind::GpDf, memo)?);
            }
        }
        BoundKind::GpPdfCf => {
            if let Witness::GpCf(w) = need(BoundKind::GpCf, memo)? {
                seeds.extend(
                    embed_gp_cf_into_gp_pdf_cf(ch, &w, cfg.card_v)
                        .ok()
                        .map(Witness::GpPdfCf),
                );
            }
        }
        BoundKind::Cutset => {
            for k in [BoundKind::GpDf, BoundKind::Nub] {
                if let Witness::GpDf(w) = need(k, memo)? {
                    seeds.push(Witness::Cutset(embed_gp_df_into_cutset(ch, &w)?));
                }
            }
        }
    }
    Ok(seeds)
}

fn solve(
    ch: &NoncausalRelayChannel,
    kind: BoundKind,
    cfg: &SearchConfig,
    memo: &mut BTreeMap<BoundKind, BoundResult>,
) -> Result<BoundResult> {
    if let Some(r) = memo.get(&kind) {
        return Ok(r.clone());
    }
    let r = if kind == BoundKind::DegradedCapacity {
        if !ch.is_degraded(DEGRADED_TOL) {
            return Err(Error::NotDegraded);
        }
        BoundResult {
            kind,
            ..solve(ch, BoundKind::GpDf, cfg, memo)?
        }
    } else {
        let seeds = seeds_for(ch, kind, cfg, memo)?;
        maximize_seeded(ch, kind, cfg, &seeds)?
    };
    memo.insert(kind, r.clone());
    Ok(r)
}

/// Best-found value of one bound. Prerequisite bounds whose optima seed this
/// one are computed along the way, so the result equals the corresponding
/// entry of [`maximize_all`].
pub fn maximize(ch: &NoncausalRelayChannel, kind: BoundKind, cfg: &SearchConfig) -> Result<BoundResult> {
    cfg.validate()?;
    solve(ch, kind, cfg, &mut BTreeMap::new())
}

/// Every applicable bound, in report order; the degraded capacity only when
/// the channel is degraded.
pub fn maximize_all(ch: &NoncausalRelayChannel, cfg: &SearchConfig) -> Result<Vec<BoundResult>> {
    maximize_kinds(ch, &BoundKind::ALL, cfg)
}

/// The requested bounds in the given order, sharing prerequisite work.
/// The degraded capacity is skipped on non-degraded channels.
pub fn maximize_kinds(ch: &NoncausalRelayChannel, kinds: &[BoundKind], cfg: &SearchConfig) -> Result<Vec<BoundResult>> {
    cfg.validate()?;
    let degraded = ch.is_degraded(DEGRADED_TOL);
    let mut memo = BTreeMap::new();
    kinds
        .iter()
        .filter(|&&k| k != BoundKind::DegradedCapacity || degraded)
        .map(|&k| solve(ch, k, cfg, &mut memo))
        .collect()
}
