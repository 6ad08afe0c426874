//! Witnesses (the maximization domain of each bound), the joint-distribution
//! builders that combine a witness with the channel, and the embeddings that
//! carry a witness of one bound into the domain of a richer one.

use std::fmt::Write as _;

use crate::channel::{DeterministicMap, NoncausalRelayChannel};
use crate::error::{Error, Result};
use crate::prob::{Alphabet, CondPmf, JointPmf, Pmf};

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::WitnessMismatch(msg()))
    }
}

fn same_sizes(axes: &[Alphabet], want: &[usize]) -> bool {
    axes.len() == want.len() && axes.iter().zip(want).all(|(a, &n)| a.size() == n)
}

/// `p(x1, x2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessDF {
    pub p_x1x2: JointPmf,
}

/// `p(v, x1, x2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessPDF {
    pub p_vx1x2: JointPmf,
}

/// `p(x1)` and a stochastic relay `p(x2 | x1, y2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessCutset {
    pub p_x1: Pmf,
    pub p_x2_given_x1y2: CondPmf,
}

/// `p(x1) p(u | x1, y2)` and `x2(u, x1, y2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessGPDF {
    pub p_x1: Pmf,
    pub p_u_given_x1y2: CondPmf,
    pub relay_map: DeterministicMap,
}

/// The upper bound shares the GP-DF domain.
pub type WitnessNUB = WitnessGPDF;

/// `p(x1) p(u | y2)` and `x2(u, y2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessGPCF {
    pub p_x1: Pmf,
    pub p_u_given_y2: CondPmf,
    pub relay_map: DeterministicMap,
}

/// `p(x1) p(u | y2) p(yhat | y2)` and `x2(u, yhat, y2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessGPCFBinned {
    pub p_x1: Pmf,
    pub p_u_given_y2: CondPmf,
    pub p_yhat_given_y2: CondPmf,
    pub relay_map: DeterministicMap,
}

/// `p(x1) p(x2) p(yhat | y2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessCF {
    pub p_x1: Pmf,
    pub p_x2: Pmf,
    pub p_yhat_given_y2: CondPmf,
}

/// `p(v, x1) p(u | v, y2)` and `x2(u, v, y2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessGPPDFCF {
    pub p_vx1: JointPmf,
    pub p_u_given_vy2: CondPmf,
    pub relay_map: DeterministicMap,
}

impl WitnessGPDF {
    pub fn u_alphabet(&self) -> &Alphabet {
        self.p_u_given_x1y2.output_axis()
    }
}

impl WitnessGPCF {
    pub fn u_alphabet(&self) -> &Alphabet {
        self.p_u_given_y2.output_axis()
    }
}

/// A witness of any shape.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Df(WitnessDF),
    Pdf(WitnessPDF),
    Cutset(WitnessCutset),
    GpDf(WitnessGPDF),
    GpCf(WitnessGPCF),
    GpCfBinned(WitnessGPCFBinned),
    Cf(WitnessCF),
    GpPdfCf(WitnessGPPDFCF),
}

impl Witness {
    /// Compact canonical text used for deterministic tie-breaking.
    pub fn key(&self) -> String {
        let mut s = String::new();
        let mut put = |v: &[f64]| {
            for x in v {
                let _ = write!(s, "{x:.17e},");
            }
            s.push('|');
        };
        let mut maps: Vec<&DeterministicMap> = Vec::new();
        match self {
            Witness::Df(w) => put(w.p_x1x2.probs()),
            Witness::Pdf(w) => put(w.p_vx1x2.probs()),
            Witness::Cutset(w) => {
                put(w.p_x1.probs());
                put(w.p_x2_given_x1y2.probs());
            }
            Witness::GpDf(w) => {
                put(w.p_x1.probs());
                put(w.p_u_given_x1y2.probs());
                maps.push(&w.relay_map);
            }
            Witness::GpCf(w) => {
                put(w.p_x1.probs());
                put(w.p_u_given_y2.probs());
                maps.push(&w.relay_map);
            }
            Witness::GpCfBinned(w) => {
                put(w.p_x1.probs());
                put(w.p_u_given_y2.probs());
                put(w.p_yhat_given_y2.probs());
                maps.push(&w.relay_map);
            }
            Witness::Cf(w) => {
                put(w.p_x1.probs());
                put(w.p_x2.probs());
                put(w.p_yhat_given_y2.probs());
            }
            Witness::GpPdfCf(w) => {
                put(w.p_vx1.probs());
                put(w.p_u_given_vy2.probs());
                maps.push(&w.relay_map);
            }
        }
        let mut out = String::new();
        for m in maps {
            for t in m.table() {
                let _ = write!(out, "{t}");
            }
            out.push('|');
        }
        out.push_str(&s);
        out
    }
}

// ---------------------------------------------------------------------------
// Joint builders. Axis orders:
//   DF, cutset:   (X1, Y2, X2, Y3)
//   PDF:          (V, X1, Y2, X2, Y3)
//   GP-DF, GP-CF: (X1, Y2, U, X2, Y3)
//   GP-CF binned: (X1, Y2, U, Yhat, X2, Y3)
//   CF:           (X1, Y2, X2, Yhat, Y3)
//   GP-PDF-CF:    (V, X1, Y2, U, X2, Y3)
// ---------------------------------------------------------------------------

fn check_x1(ch: &NoncausalRelayChannel, p: &Pmf) -> Result<()> {
    ensure(p.len() == ch.x1().size(), || {
        format!("p(x1) has {} entries, |X1| = {}", p.len(), ch.x1().size())
    })
}

/// Push `w * p(y3|x1,x2,y2)` for every y3.
#[inline]
fn push_y3(out: &mut Vec<f64>, ch: &NoncausalRelayChannel, w: f64, x1: usize, x2: usize, y2: usize) {
    out.extend(ch.direct_row(x1, x2, y2).iter().map(|&q| w * q));
}

/// `p(x1,x2) p(y2|x1) p(y3|x1,x2,y2)` over `(X1, Y2, X2, Y3)`.
pub fn build_joint_df(ch: &NoncausalRelayChannel, w: &WitnessDF) -> Result<JointPmf> {
    let (n1, n2, ny2) = (ch.x1().size(), ch.x2().size(), ch.y2().size());
    ensure(same_sizes(w.p_x1x2.axes(), &[n1, n2]), || {
        "p(x1,x2) axes do not match channel".into()
    })?;
    let p = w.p_x1x2.probs();
    let mut out = Vec::with_capacity(n1 * ny2 * n2 * ch.y3().size());
    for x1 in 0..n1 {
        for y2 in 0..ny2 {
            let a = ch.p_y2(x1, y2);
            for x2 in 0..n2 {
                push_y3(&mut out, ch, p[x1 * n2 + x2] * a, x1, x2, y2);
            }
        }
    }
    JointPmf::new(
        vec![ch.x1().clone(), ch.y2().clone(), ch.x2().clone(), ch.y3().clone()],
        out,
    )
}

/// `p(v,x1,x2) p(y2|x1) p(y3|x1,x2,y2)` over `(V, X1, Y2, X2, Y3)`.
pub fn build_joint_pdf(ch: &NoncausalRelayChannel, w: &WitnessPDF) -> Result<JointPmf> {
    let (n1, n2, ny2) = (ch.x1().size(), ch.x2().size(), ch.y2().size());
    let axes = w.p_vx1x2.axes();
    ensure(axes.len() == 3 && axes[1].size() == n1 && axes[2].size() == n2, || {
        "p(v,x1,x2) axes do not match channel".into()
    })?;
    let nv = axes[0].size();
    let p = w.p_vx1x2.probs();
    let mut out = Vec::with_capacity(nv * n1 * ny2 * n2 * ch.y3().size());
    for v in 0..nv {
        for x1 in 0..n1 {
            for y2 in 0..ny2 {
                let a = ch.p_y2(x1, y2);
                for x2 in 0..n2 {
                    push_y3(&mut out, ch, p[(v * n1 + x1) * n2 + x2] * a, x1, x2, y2);
                }
            }
        }
    }
    JointPmf::new(
        vec![
            axes[0].clone(),
            ch.x1().clone(),
            ch.y2().clone(),
            ch.x2().clone(),
            ch.y3().clone(),
        ],
        out,
    )
}

/// `p(x1) p(y2|x1) p(x2|x1,y2) p(y3|x1,x2,y2)` over `(X1, Y2, X2, Y3)`.
pub fn build_joint_cutset(ch: &NoncausalRelayChannel, w: &WitnessCutset) -> Result<JointPmf> {
    let (n1, n2, ny2) = (ch.x1().size(), ch.x2().size(), ch.y2().size());
    check_x1(ch, &w.p_x1)?;
    let c = &w.p_x2_given_x1y2;
    ensure(
        same_sizes(c.input_axes(), &[n1, ny2]) && c.output_axis().size() == n2,
        || "p(x2|x1,y2) axes do not match channel".into(),
    )?;
    let px1 = w.p_x1.probs();
    let mut out = Vec::with_capacity(n1 * ny2 * n2 * ch.y3().size());
    for x1 in 0..n1 {
        for y2 in 0..ny2 {
            let a = px1[x1] * ch.p_y2(x1, y2);
            let row = c.row(x1 * ny2 + y2);
            for x2 in 0..n2 {
                push_y3(&mut out, ch, a * row[x2], x1, x2, y2);
            }
        }
    }
    JointPmf::new(
        vec![ch.x1().clone(), ch.y2().clone(), ch.x2().clone(), ch.y3().clone()],
        out,
    )
}

/// `p(x1) p(y2|x1) p(u|x1,y2) 1{x2 = map(u,x1,y2)} p(y3|x1,x2,y2)` over
/// `(X1, Y2, U, X2, Y3)`.
pub fn build_joint_gp_df(ch: &NoncausalRelayChannel, w: &WitnessGPDF) -> Result<JointPmf> {
    let (n1, n2, ny2, ny3) = (ch.x1().size(), ch.x2().size(), ch.y2().size(), ch.y3().size());
    check_x1(ch, &w.p_x1)?;
    let c = &w.p_u_given_x1y2;
    ensure(same_sizes(c.input_axes(), &[n1, ny2]), || {
        "p(u|x1,y2) axes do not match channel".into()
    })?;
    let nu = c.output_axis().size();
    let m = &w.relay_map;
    ensure(
        same_sizes(m.input_axes(), &[nu, n1, ny2]) && m.output_axis().size() == n2,
        || "relay map must be (U, X1, Y2) -> X2".into(),
    )?;
    let px1 = w.p_x1.probs();
    let t = m.table();
    let mut out = vec![0.0; n1 * ny2 * nu * n2 * ny3];
    for x1 in 0..n1 {
        for y2 in 0..ny2 {
            let a = px1[x1] * ch.p_y2(x1, y2);
            let row = c.row(x1 * ny2 + y2);
            for u in 0..nu {
                let x2 = t[(u * n1 + x1) * ny2 + y2];
                let b = a * row[u];
                let base = (((x1 * ny2 + y2) * nu + u) * n2 + x2) * ny3;
                for (k, &q) in ch.direct_row(x1, x2, y2).iter().enumerate() {
                    out[base + k] = b * q;
                }
            }
        }
    }
    JointPmf::new(
        vec![
            ch.x1().clone(),
            ch.y2().clone(),
            c.output_axis().clone(),
            ch.x2().clone(),
            ch.y3().clone(),
        ],
        out,
    )
}

/// `p(x1) p(y2|x1) p(u|y2) 1{x2 = map(u,y2)} p(y3|x1,x2,y2)` over
/// `(X1, Y2, U, X2, Y3)`.
pub fn build_joint_gp_cf(ch: &NoncausalRelayChannel, w: &WitnessGPCF) -> Result<JointPmf> {
    let (n1, n2, ny2, ny3) = (ch.x1().size(), ch.x2().size(), ch.y2().size(), ch.y3().size());
    check_x1(ch, &w.p_x1)?;
    let c = &w.p_u_given_y2;
    ensure(same_sizes(c.input_axes(), &[ny2]), || {
        "GP-CF auxiliary must be conditioned on y2 alone".into()
    })?;
    let nu = c.output_axis().size();
    let m = &w.relay_map;
    ensure(
        same_sizes(m.input_axes(), &[nu, ny2]) && m.output_axis().size() == n2,
        || "relay map must be (U, Y2) -> X2".into(),
    )?;
    let px1 = w.p_x1.probs();
    let t = m.table();
    let mut out = vec![0.0; n1 * ny2 * nu * n2 * ny3];
    for x1 in 0..n1 {
        for y2 in 0..ny2 {
            let a = px1[x1] * ch.p_y2(x1, y2);
            let row = c.row(y2);
            for u in 0..nu {
                let x2 = t[u * ny2 + y2];
                let b = a * row[u];
                let base = (((x1 * ny2 + y2) * nu + u) * n2 + x2) * ny3;
                for (k, &q) in ch.direct_row(x1, x2, y2).iter().enumerate() {
                    out[base + k] = b * q;
                }
            }
        }
    }
    JointPmf::new(
        vec![
            ch.x1().clone(),
            ch.y2().clone(),
            c.output_axis().clone(),
            ch.x2().clone(),
            ch.y3().clone(),
        ],
        out,
    )
}

/// Joint over `(X1, Y2, U, Yhat, X2, Y3)`.
pub fn build_joint_gp_cf_binned(ch: &NoncausalRelayChannel, w: &WitnessGPCFBinned) -> Result<JointPmf> {
    let (n1, n2, ny2, ny3) = (ch.x1().size(), ch.x2().size(), ch.y2().size(), ch.y3().size());
    check_x1(ch, &w.p_x1)?;
    let cu = &w.p_u_given_y2;
    let cy = &w.p_yhat_given_y2;
    ensure(
        same_sizes(cu.input_axes(), &[ny2]) && same_sizes(cy.input_axes(), &[ny2]),
        || "p(u|y2) and p(yhat|y2) must be conditioned on y2".into(),
    )?;
    let (nu, nh) = (cu.output_axis().size(), cy.output_axis().size());
    let m = &w.relay_map;
    ensure(
        same_sizes(m.input_axes(), &[nu, nh, ny2]) && m.output_axis().size() == n2,
        || "relay map must be (U, Yhat, Y2) -> X2".into(),
    )?;
    let px1 = w.p_x1.probs();
    let t = m.table();
    let mut out = vec![0.0; n1 * ny2 * nu * nh * n2 * ny3];
    for x1 in 0..n1 {
        for y2 in 0..ny2 {
            let a = px1[x1] * ch.p_y2(x1, y2);
            let ru = cu.row(y2);
            let rh = cy.row(y2);
            for u in 0..nu {
                for h in 0..nh {
                    let x2 = t[(u * nh + h) * ny2 + y2];
                    let b = a * ru[u] * rh[h];
                    let base = ((((x1 * ny2 + y2) * nu + u) * nh + h) * n2 + x2) * ny3;
                    for (k, &q) in ch.direct_row(x1, x2, y2).iter().enumerate() {
                        out[base + k] = b * q;
                    }
                }
            }
        }
    }
    JointPmf::new(
        vec![
            ch.x1().clone(),
            ch.y2().clone(),
            cu.output_axis().clone(),
            cy.output_axis().clone(),
            ch.x2().clone(),
            ch.y3().clone(),
        ],
        out,
    )
}

/// Joint over `(X1, Y2, X2, Yhat, Y3)` with `X2` independent of `(X1, Y2)`.
pub fn build_joint_cf(ch: &NoncausalRelayChannel, w: &WitnessCF) -> Result<JointPmf> {
    let (n1, n2, ny2, ny3) = (ch.x1().size(), ch.x2().size(), ch.y2().size(), ch.y3().size());
    check_x1(ch, &w.p_x1)?;
    ensure(w.p_x2.len() == n2, || "p(x2) does not match |X2|".into())?;
    let cy = &w.p_yhat_given_y2;
    ensure(same_sizes(cy.input_axes(), &[ny2]), || {
        "p(yhat|y2) must be conditioned on y2".into()
    })?;
    let nh = cy.output_axis().size();
    let (px1, px2) = (w.p_x1.probs(), w.p_x2.probs());
    let mut out = Vec::with_capacity(n1 * ny2 * n2 * nh * ny3);
    for x1 in 0..n1 {
        for y2 in 0..ny2 {
            let a = px1[x1] * ch.p_y2(x1, y2);
            let rh = cy.row(y2);
            for x2 in 0..n2 {
                let row = ch.direct_row(x1, x2, y2);
                for &h in rh {
                    let b = a * px2[x2] * h;
                    out.extend(row.iter().map(|&q| b * q));
                }
            }
        }
    }
    JointPmf::new(
        vec![
            ch.x1().clone(),
            ch.y2().clone(),
            ch.x2().clone(),
            cy.output_axis().clone(),
            ch.y3().clone(),
        ],
        out,
    )
}

/// Joint over `(V, X1, Y2, U, X2, Y3)`.
pub fn build_joint_gp_pdf_cf(ch: &NoncausalRelayChannel, w: &WitnessGPPDFCF) -> Result<JointPmf> {
    let (n1, n2, ny2, ny3) = (ch.x1().size(), ch.x2().size(), ch.y2().size(), ch.y3().size());
    let vx = w.p_vx1.axes();
    ensure(vx.len() == 2 && vx[1].size() == n1, || {
        "p(v,x1) axes do not match channel".into()
    })?;
    let nv = vx[0].size();
    let c = &w.p_u_given_vy2;
    ensure(same_sizes(c.input_axes(), &[nv, ny2]), || {
        "p(u|v,y2) axes do not match".into()
    })?;
    let nu = c.output_axis().size();
    let m = &w.relay_map;
    ensure(
        same_sizes(m.input_axes(), &[nu, nv, ny2]) && m.output_axis().size() == n2,
        || "relay map must be (U, V, Y2) -> X2".into(),
    )?;
    let p = w.p_vx1.probs();
    let t = m.table();
    let mut out = vec![0.0; nv * n1 * ny2 * nu * n2 * ny3];
    for v in 0..nv {
        for x1 in 0..n1 {
            for y2 in 0..ny2 {
                let a = p[v * n1 + x1] * ch.p_y2(x1, y2);
                let row = c.row(v * ny2 + y2);
                for u in 0..nu {
                    let x2 = t[(u * nv + v) * ny2 + y2];
                    let b = a * row[u];
                    let base = ((((v * n1 + x1) * ny2 + y2) * nu + u) * n2 + x2) * ny3;
                    for (k, &q) in ch.direct_row(x1, x2, y2).iter().enumerate() {
                        out[base + k] = b * q;
                    }
                }
            }
        }
    }
    JointPmf::new(
        vec![
            vx[0].clone(),
            ch.x1().clone(),
            ch.y2().clone(),
            c.output_axis().clone(),
            ch.x2().clone(),
            ch.y3().clone(),
        ],
        out,
    )
}

// ---------------------------------------------------------------------------
// Embeddings
// ---------------------------------------------------------------------------

fn aux(name: &str, size: usize) -> Result<Alphabet> {
    Alphabet::new(name, size)
}

/// Pad a probability row with zeros up to `len`.
fn padded(row: &[f64], len: usize) -> Vec<f64> {
    let mut v = row.to_vec();
    v.resize(len, 0.0);
    v
}

/// `p(x2 | x1)` from `p(x1, x2)`; rows with zero mass become uniform.
fn conditional_x2_given_x1(p: &JointPmf) -> Vec<Vec<f64>> {
    let n2 = p.axes()[1].size();
    p.probs()
        .chunks(n2)
        .map(|row| {
            let s: f64 = row.iter().sum();
            if s > 0.0 {
                row.iter().map(|x| x / s).collect()
            } else {
                vec![1.0 / n2 as f64; n2]
            }
        })
        .collect()
}

fn marginal_x1(p: &JointPmf, x1_axis: &Alphabet) -> Result<Pmf> {
    let m = p.marginalize(&[0])?;
    Pmf::new(x1_axis.clone(), m.probs().to_vec())
}

/// DF into GP-DF with `U = X2`, `U` independent of `Y2` given `X1`, and
/// `x2(u, x1, y2) = u`. Needs `card_u >= |X2|`.
pub fn embed_df_into_gp_df(ch: &NoncausalRelayChannel, w: &WitnessDF, card_u: usize) -> Result<WitnessGPDF> {
    let (n1, n2, ny2) = (ch.x1().size(), ch.x2().size(), ch.y2().size());
    ensure(card_u >= n2, || format!("|U| = {card_u} cannot hold |X2| = {n2}"))?;
    let u = aux("u", card_u)?;
    let cond = conditional_x2_given_x1(&w.p_x1x2);
    let mut probs = Vec::with_capacity(n1 * ny2 * card_u);
    for row in &cond {
        for _ in 0..ny2 {
            probs.extend(padded(row, card_u));
        }
    }
    let p_u = CondPmf::new(vec![ch.x1().clone(), ch.y2().clone()], u.clone(), probs)?;
    let map = DeterministicMap::from_fn(vec![u, ch.x1().clone(), ch.y2().clone()], ch.x2().clone(), |d| {
        if d[0] < n2 {
            d[0]
        } else {
            0
        }
    })?;
    Ok(WitnessGPDF {
        p_x1: marginal_x1(&w.p_x1x2, ch.x1())?,
        p_u_given_x1y2: p_u,
        relay_map: map,
    })
}

/// DF into PDF with `V = X1`. Needs `card_v >= |X1|`.
pub fn embed_df_into_pdf(ch: &NoncausalRelayChannel, w: &WitnessDF, card_v: usize) -> Result<WitnessPDF> {
    let (n1, n2) = (ch.x1().size(), ch.x2().size());
    ensure(card_v >= n1, || format!("|V| = {card_v} cannot hold |X1| = {n1}"))?;
    let p = w.p_x1x2.probs();
    let mut probs = vec![0.0; card_v * n1 * n2];
    for x1 in 0..n1 {
        for x2 in 0..n2 {
            probs[(x1 * n1 + x1) * n2 + x2] = p[x1 * n2 + x2];
        }
    }
    Ok(WitnessPDF {
        p_vx1x2: JointPmf::new(vec![aux("v", card_v)?, ch.x1().clone(), ch.x2().clone()], probs)?,
    })
}

/// The relay conditional `p(x2 | x1, y2)` induced by a GP-DF-shaped witness.
pub fn embed_gp_df_into_cutset(ch: &NoncausalRelayChannel, w: &WitnessGPDF) -> Result<WitnessCutset> {
    let (n1, n2, ny2) = (ch.x1().size(), ch.x2().size(), ch.y2().size());
    let nu = w.p_u_given_x1y2.output_axis().size();
    let mut probs = vec![0.0; n1 * ny2 * n2];
    for x1 in 0..n1 {
        for y2 in 0..ny2 {
            let row = w.p_u_given_x1y2.row(x1 * ny2 + y2);
            for (u, &pu) in row.iter().enumerate().take(nu) {
                let x2 = w.relay_map.apply(&[u, x1, y2]);
                probs[(x1 * ny2 + y2) * n2 + x2] += pu;
            }
        }
    }
    Ok(WitnessCutset {
        p_x1: w.p_x1.clone(),
        p_x2_given_x1y2: CondPmf::new(vec![ch.x1().clone(), ch.y2().clone()], ch.x2().clone(), probs)?,
    })
}

/// GP-CF into GP-DF: `p(u | x1, y2) = p(u | y2)` and the map ignores `x1`.
pub fn embed_gp_cf_into_gp_df(ch: &NoncausalRelayChannel, w: &WitnessGPCF) -> Result<WitnessGPDF> {
    let (n1, ny2) = (ch.x1().size(), ch.y2().size());
    let u = w.u_alphabet().clone();
    let mut probs = Vec::with_capacity(n1 * ny2 * u.size());
    for _ in 0..n1 {
        for y2 in 0..ny2 {
            probs.extend_from_slice(w.p_u_given_y2.row(y2));
        }
    }
    let p_u = CondPmf::new(vec![ch.x1().clone(), ch.y2().clone()], u.clone(), probs)?;
    let map = DeterministicMap::from_fn(vec![u, ch.x1().clone(), ch.y2().clone()], ch.x2().clone(), |d| {
        w.relay_map.apply(&[d[0], d[2]])
    })?;
    Ok(WitnessGPDF {
        p_x1: w.p_x1.clone(),
        p_u_given_x1y2: p_u,
        relay_map: map,
    })
}

/// GP-CF into GP-PDF-CF with `V` constant (all mass on `v = 0`).
pub fn embed_gp_cf_into_gp_pdf_cf(
    ch: &NoncausalRelayChannel,
    w: &WitnessGPCF,
    card_v: usize,
) -> Result<WitnessGPPDFCF> {
    let (n1, ny2) = (ch.x1().size(), ch.y2().size());
    ensure(card_v >= 1, || "|V| must be positive".into())?;
    let v = aux("v", card_v)?;
    let u = w.u_alphabet().clone();
    let mut pv = vec![0.0; card_v * n1];
    pv[..n1].copy_from_slice(w.p_x1.probs());
    let mut probs = Vec::with_capacity(card_v * ny2 * u.size());
    for _ in 0..card_v {
        for y2 in 0..ny2 {
            probs.extend_from_slice(w.p_u_given_y2.row(y2));
        }
    }
    let p_u = CondPmf::new(vec![v.clone(), ch.y2().clone()], u.clone(), probs)?;
    let map = DeterministicMap::from_fn(vec![u, v.clone(), ch.y2().clone()], ch.x2().clone(), |d| {
        w.relay_map.apply(&[d[0], d[2]])
    })?;
    Ok(WitnessGPPDFCF {
        p_vx1: JointPmf::new(vec![v, ch.x1().clone()], pv)?,
        p_u_given_vy2: p_u,
        relay_map: map,
    })
}

/// PDF into GP-PDF-CF with the new `V` equal to the pair `(V, X2)` and `U`
/// constant; `x2` is read off the pair. The new `|V|` is `|V| |X2|`.
pub fn embed_pdf_into_gp_pdf_cf(ch: &NoncausalRelayChannel, w: &WitnessPDF) -> Result<WitnessGPPDFCF> {
    let (n1, n2) = (ch.x1().size(), ch.x2().size());
    let nv = w.p_vx1x2.axes()[0].size();
    let vv = aux("v", nv * n2)?;
    let u = aux("u", 1)?;
    let p = w.p_vx1x2.probs();
    let mut pv = vec![0.0; nv * n2 * n1];
    for v in 0..nv {
        for x1 in 0..n1 {
            for x2 in 0..n2 {
                pv[(v * n2 + x2) * n1 + x1] = p[(v * n1 + x1) * n2 + x2];
            }
        }
    }
    let p_u = CondPmf::uniform(vec![vv.clone(), ch.y2().clone()], u.clone());
    let map = DeterministicMap::from_fn(vec![u, vv.clone(), ch.y2().clone()], ch.x2().clone(), |d| d[1] % n2)?;
    Ok(WitnessGPPDFCF {
        p_vx1: JointPmf::new(vec![vv, ch.x1().clone()], pv)?,
        p_u_given_vy2: p_u,
        relay_map: map,
    })
}

/// GP-CF into the binned form: the binned `U` is constant and `Yhat` takes
/// the role of the GP-CF auxiliary. Needs `card_yhat >= |U|`.
pub fn embed_gp_cf_into_binned(
    ch: &NoncausalRelayChannel,
    w: &WitnessGPCF,
    card_u: usize,
    card_yhat: usize,
) -> Result<WitnessGPCFBinned> {
    let ny2 = ch.y2().size();
    let nu_src = w.u_alphabet().size();
    ensure(card_yhat >= nu_src, || {
        format!("|Yhat| = {card_yhat} cannot hold |U| = {nu_src}")
    })?;
    ensure(card_u >= 1, || "|U| must be positive".into())?;
    let u = aux("u", card_u)?;
    let yhat = aux("yhat", card_yhat)?;
    let mut point = vec![0.0; card_u];
    point[0] = 1.0;
    let p_u = CondPmf::constant_rows(vec![ch.y2().clone()], u.clone(), &point)?;
    let mut probs = Vec::with_capacity(ny2 * card_yhat);
    for y2 in 0..ny2 {
        probs.extend(padded(w.p_u_given_y2.row(y2), card_yhat));
    }
    let p_h = CondPmf::new(vec![ch.y2().clone()], yhat.clone(), probs)?;
    let map = DeterministicMap::from_fn(vec![u, yhat, ch.y2().clone()], ch.x2().clone(), |d| {
        if d[1] < nu_src {
            w.relay_map.apply(&[d[1], d[2]])
        } else {
            0
        }
    })?;
    Ok(WitnessGPCFBinned {
        p_x1: w.p_x1.clone(),
        p_u_given_y2: p_u,
        p_yhat_given_y2: p_h,
        relay_map: map,
    })
}

/// CF into the binned form: `U = X2` independent of `Y2` and `x2 = u`.
/// Needs `card_u >= |X2|` and `card_yhat >= |Yhat|` of the source.
pub fn embed_cf_into_binned(
    ch: &NoncausalRelayChannel,
    w: &WitnessCF,
    card_u: usize,
    card_yhat: usize,
) -> Result<WitnessGPCFBinned> {
    let (n2, ny2) = (ch.x2().size(), ch.y2().size());
    let nh_src = w.p_yhat_given_y2.output_axis().size();
    ensure(card_u >= n2, || format!("|U| = {card_u} cannot hold |X2| = {n2}"))?;
    ensure(card_yhat >= nh_src, || {
        format!("|Yhat| = {card_yhat} cannot hold {nh_src}")
    })?;
    let u = aux("u", card_u)?;
    let yhat = aux("yhat", card_yhat)?;
    let p_u = CondPmf::constant_rows(vec![ch.y2().clone()], u.clone(), &padded(w.p_x2.probs(), card_u))?;
    let mut probs = Vec::with_capacity(ny2 * card_yhat);
    for y2 in 0..ny2 {
        probs.extend(padded(w.p_yhat_given_y2.row(y2), card_yhat));
    }
    let p_h = CondPmf::new(vec![ch.y2().clone()], yhat.clone(), probs)?;
    let map = DeterministicMap::from_fn(vec![u, yhat, ch.y2().clone()], ch.x2().clone(), |d| {
        if d[0] < n2 {
            d[0]
        } else {
            0
        }
    })?;
    Ok(WitnessGPCFBinned {
        p_x1: w.p_x1.clone(),
        p_u_given_y2: p_u,
        p_yhat_given_y2: p_h,
        relay_map: map,
    })
}

/// Pad the auxiliary of a GP-DF witness with zero-probability symbols.
pub fn pad_gp_df(ch: &NoncausalRelayChannel, w: &WitnessGPDF, card_u: usize) -> Result<WitnessGPDF> {
    let nu = w.u_alphabet().size();
    ensure(card_u >= nu, || format!("cannot shrink |U| from {nu} to {card_u}"))?;
    if card_u == nu {
        return Ok(w.clone());
    }
    let u = aux(w.u_alphabet().name(), card_u)?;
    let probs = w.p_u_given_x1y2.rows().flat_map(|r| padded(r, card_u)).collect();
    let p_u = CondPmf::new(w.p_u_given_x1y2.input_axes().to_vec(), u.clone(), probs)?;
    let map = DeterministicMap::from_fn(vec![u, ch.x1().clone(), ch.y2().clone()], ch.x2().clone(), |d| {
        if d[0] < nu {
            w.relay_map.apply(d)
        } else {
            0
        }
    })?;
    Ok(WitnessGPDF {
        p_x1: w.p_x1.clone(),
        p_u_given_x1y2: p_u,
        relay_map: map,
    })
}

/// The witness used for the erasure example: uniform `X1`; `U = X2 = 1`
/// when the relay sees an erasure, a fair coin otherwise; `x2 = u`.
pub fn example_bec_witness(ch: &NoncausalRelayChannel) -> Result<WitnessGPDF> {
    let ny2 = ch.y2().size();
    let erasure = ch.y2().index_of("e").unwrap_or(ny2 - 1);
    let u = aux("u", 2)?;
    let mut probs = Vec::new();
    for _x1 in 0..ch.x1().size() {
        for y2 in 0..ny2 {
            probs.extend_from_slice(if y2 == erasure { &[0.0, 1.0] } else { &[0.5, 0.5] });
        }
    }
    let p_u = CondPmf::new(vec![ch.x1().clone(), ch.y2().clone()], u.clone(), probs)?;
    let map = DeterministicMap::from_fn(vec![u, ch.x1().clone(), ch.y2().clone()], ch.x2().clone(), |d| d[0])?;
    Ok(WitnessGPDF {
        p_x1: Pmf::uniform(ch.x1().clone()),
        p_u_given_x1y2: p_u,
        relay_map: map,
    })
}
