//! Objective evaluators: for a channel and a witness, the min-of-terms value
//! of each bound, plus the closed-form capacity of the BSC cascade example.

use std::fmt;
use std::str::FromStr;

use crate::channel::NoncausalRelayChannel;
use crate::error::{Error, Result};
use crate::prob::{binary_entropy, Measures, Pmf};
use crate::witness::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    Df,
    Pdf,
    Cutset,
    GpDf,
    GpCf,
    GpCfBinned,
    Cf,
    GpPdfCf,
    Nub,
    DegradedCapacity,
}

impl BoundKind {
    pub const ALL: [BoundKind; 10] = [
        BoundKind::Df,
        BoundKind::Pdf,
        BoundKind::Cf,
        BoundKind::GpCf,
        BoundKind::GpCfBinned,
        BoundKind::GpDf,
        BoundKind::GpPdfCf,
        BoundKind::Nub,
        BoundKind::Cutset,
        BoundKind::DegradedCapacity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Df => "df",
            BoundKind::Pdf => "pdf",
            BoundKind::Cutset => "cutset",
            BoundKind::GpDf => "gp-df",
            BoundKind::GpCf => "gp-cf",
            BoundKind::GpCfBinned => "gp-cf-binned",
            BoundKind::Cf => "cf",
            BoundKind::GpPdfCf => "gp-pdf-cf",
            BoundKind::Nub => "nub",
            BoundKind::DegradedCapacity => "capacity",
        }
    }

    /// Upper bounds on capacity (the rest are achievable rates).
    pub fn is_upper_bound(self) -> bool {
        matches!(self, BoundKind::Cutset | BoundKind::Nub)
    }

    pub fn is_lower_bound(self) -> bool {
        !self.is_upper_bound() && self != BoundKind::DegradedCapacity
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let k = s.trim().to_ascii_lowercase().replace('_', "-");
        BoundKind::ALL
            .into_iter()
            .find(|b| b.name() == k)
            .or(match k.as_str() {
                "cs" => Some(BoundKind::Cutset),
                "degraded-capacity" => Some(BoundKind::DegradedCapacity),
                _ => None,
            })
            .ok_or_else(|| Error::Config(format!("unknown bound kind `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub name: &'static str,
    pub value: f64,
}

/// The terms inside a bound's `min{..}` and their minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveValue {
    pub value: f64,
    pub terms: Vec<Term>,
}

impl ObjectiveValue {
    fn from_terms(terms: Vec<Term>) -> Self {
        let value = terms.iter().map(|t| t.value).fold(f64::INFINITY, f64::min);
        ObjectiveValue { value, terms }
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.iter().find(|t| t.name == name).map(|t| t.value)
    }
}

fn terms(list: &[(&'static str, f64)]) -> ObjectiveValue {
    ObjectiveValue::from_terms(list.iter().map(|&(name, value)| Term { name, value }).collect())
}

// Axis bitmasks for the joint layouts documented in `witness`.
const B0: u32 = 1;
const B1: u32 = 2;
const B2: u32 = 4;
const B3: u32 = 8;
const B4: u32 = 16;
const B5: u32 = 32;

/// `min{ I(X1;Y2), I(X1,X2;Y3) }`.
pub fn df_objective(ch: &NoncausalRelayChannel, w: &WitnessDF) -> Result<ObjectiveValue> {
    let j = build_joint_df(ch, w)?;
    let (x1, y2, x2, y3) = (B0, B1, B2, B3);
    let mut m = Measures::new(&j);
    Ok(terms(&[("I(X1;Y2)", m.mi(x1, y2)), ("I(X1,X2;Y3)", m.mi(x1 | x2, y3))]))
}

/// `min{ I(X1,X2;Y3), I(V;Y2) + I(X1;Y3|X2,V) }`.
pub fn pdf_objective(ch: &NoncausalRelayChannel, w: &WitnessPDF) -> Result<ObjectiveValue> {
    let j = build_joint_pdf(ch, w)?;
    let (v, x1, y2, x2, y3) = (B0, B1, B2, B3, B4);
    let mut m = Measures::new(&j);
    let t1 = m.mi(x1 | x2, y3);
    let t2 = m.mi(v, y2) + m.cmi(x1, y3, x2 | v);
    Ok(terms(&[("I(X1,X2;Y3)", t1), ("I(V;Y2)+I(X1;Y3|X2,V)", t2)]))
}

/// `min{ I(X1,X2;Y3), I(X1;Y2) + I(X1;Y3|X2,Y2) }`.
pub fn cutset_objective(ch: &NoncausalRelayChannel, w: &WitnessCutset) -> Result<ObjectiveValue> {
    let j = build_joint_cutset(ch, w)?;
    let (x1, y2, x2, y3) = (B0, B1, B2, B3);
    let mut m = Measures::new(&j);
    let t1 = m.mi(x1 | x2, y3);
    let t2 = m.mi(x1, y2) + m.cmi(x1, y3, x2 | y2);
    Ok(terms(&[("I(X1,X2;Y3)", t1), ("I(X1;Y2)+I(X1;Y3|X2,Y2)", t2)]))
}

/// `min{ I(X1;Y2), I(X1,U;Y3) - I(U;Y2|X1) }`. The second term can be
/// negative and is reported as is.
pub fn gp_df_objective(ch: &NoncausalRelayChannel, w: &WitnessGPDF) -> Result<ObjectiveValue> {
    let j = build_joint_gp_df(ch, w)?;
    let (x1, y2, u, y3) = (B0, B1, B2, B4);
    let mut m = Measures::new(&j);
    let t1 = m.mi(x1, y2);
    let t2 = m.mi(x1 | u, y3) - m.cmi(u, y2, x1);
    Ok(terms(&[("I(X1;Y2)", t1), ("I(X1,U;Y3)-I(U;Y2|X1)", t2)]))
}

/// `min{ I(X1;Y2) + I(X1;Y3|X2,Y2), I(X1,U;Y3) - I(Y2;U|X1) }`.
pub fn nub_objective(ch: &NoncausalRelayChannel, w: &WitnessNUB) -> Result<ObjectiveValue> {
    let j = build_joint_gp_df(ch, w)?;
    let (x1, y2, u, x2, y3) = (B0, B1, B2, B3, B4);
    let mut m = Measures::new(&j);
    let t1 = m.mi(x1, y2) + m.cmi(x1, y3, x2 | y2);
    let t2 = m.mi(x1 | u, y3) - m.cmi(u, y2, x1);
    Ok(terms(&[("I(X1;Y2)+I(X1;Y3|X2,Y2)", t1), ("I(X1,U;Y3)-I(Y2;U|X1)", t2)]))
}

/// `min{ I(X1;U,Y3), I(X1,U;Y3) - I(U;Y2|X1) }`.
pub fn gp_cf_objective(ch: &NoncausalRelayChannel, w: &WitnessGPCF) -> Result<ObjectiveValue> {
    let j = build_joint_gp_cf(ch, w)?;
    let (x1, y2, u, y3) = (B0, B1, B2, B4);
    let mut m = Measures::new(&j);
    let t1 = m.mi(x1, u | y3);
    let t2 = m.mi(x1 | u, y3) - m.cmi(u, y2, x1);
    Ok(terms(&[("I(X1;U,Y3)", t1), ("I(X1,U;Y3)-I(U;Y2|X1)", t2)]))
}

/// `min{ I(X1;Yh,Y3), I(X1,Yh;Y3) - I(Yh;Y2|X1) + I(U;Y3) - I(U;Y2) }`.
pub fn gp_cf_binned_objective(ch: &NoncausalRelayChannel, w: &WitnessGPCFBinned) -> Result<ObjectiveValue> {
    let j = build_joint_gp_cf_binned(ch, w)?;
    let (x1, y2, u, yh, y3) = (B0, B1, B2, B3, B5);
    let mut m = Measures::new(&j);
    let t1 = m.mi(x1, yh | y3);
    let t2 = m.mi(x1 | yh, y3) - m.cmi(yh, y2, x1) + m.mi(u, y3) - m.mi(u, y2);
    Ok(terms(&[
        ("I(X1;Yh,Y3)", t1),
        ("I(X1,Yh;Y3)-I(Yh;Y2|X1)+I(U;Y3)-I(U;Y2)", t2),
    ]))
}

/// `min{ I(X1;Yh,Y3), I(X1,Yh;Y3) + I(X2;Y3) - I(Yh;Y2|X1) }`.
pub fn cf_objective(ch: &NoncausalRelayChannel, w: &WitnessCF) -> Result<ObjectiveValue> {
    let j = build_joint_cf(ch, w)?;
    let (x1, y2, x2, yh, y3) = (B0, B1, B2, B3, B4);
    let mut m = Measures::new(&j);
    let t1 = m.mi(x1, yh | y3);
    let t2 = m.mi(x1 | yh, y3) + m.mi(x2, y3) - m.cmi(yh, y2, x1);
    Ok(terms(&[("I(X1;Yh,Y3)", t1), ("I(X1,Yh;Y3)+I(X2;Y3)-I(Yh;Y2|X1)", t2)]))
}

/// Three-term combination of partial decode-forward and compress-forward.
pub fn gp_pdf_cf_objective(ch: &NoncausalRelayChannel, w: &WitnessGPPDFCF) -> Result<ObjectiveValue> {
    let j = build_joint_gp_pdf_cf(ch, w)?;
    let (v, x1, y2, u, y3) = (B0, B1, B2, B3, B5);
    let mut m = Measures::new(&j);
    let x1_uy3_v = m.cmi(x1, u | y3, v);
    let u_y2_v = m.cmi(u, y2, v);
    let v_y2 = m.mi(v, y2);
    let t1 = m.mi(v | u, y3) + x1_uy3_v - u_y2_v;
    let t2 = v_y2 + x1_uy3_v;
    let t3 = v_y2 + x1_uy3_v + m.cmi(u, y3, v) - u_y2_v;
    Ok(terms(&[
        ("I(V,U;Y3)+I(X1;U,Y3|V)-I(U;Y2|V)", t1),
        ("I(V;Y2)+I(X1;U,Y3|V)", t2),
        ("I(V;Y2)+I(X1;U,Y3|V)+I(U;Y3|V)-I(U;Y2|V)", t3),
    ]))
}

/// Dispatch on the witness shape. `kind` selects between bounds that share a
/// shape (GP-DF, the upper bound and the degraded capacity).
pub fn evaluate(ch: &NoncausalRelayChannel, kind: BoundKind, w: &Witness) -> Result<ObjectiveValue> {
    match (kind, w) {
        (BoundKind::Df, Witness::Df(w)) => df_objective(ch, w),
        (BoundKind::Pdf, Witness::Pdf(w)) => pdf_objective(ch, w),
        (BoundKind::Cutset, Witness::Cutset(w)) => cutset_objective(ch, w),
        (BoundKind::GpDf | BoundKind::DegradedCapacity, Witness::GpDf(w)) => gp_df_objective(ch, w),
        (BoundKind::Nub, Witness::GpDf(w)) => nub_objective(ch, w),
        (BoundKind::GpCf, Witness::GpCf(w)) => gp_cf_objective(ch, w),
        (BoundKind::GpCfBinned, Witness::GpCfBinned(w)) => gp_cf_binned_objective(ch, w),
        (BoundKind::Cf, Witness::Cf(w)) => cf_objective(ch, w),
        (BoundKind::GpPdfCf, Witness::GpPdfCf(w)) => gp_pdf_cf_objective(ch, w),
        (k, _) => Err(Error::WitnessMismatch(format!(
            "witness shape does not fit bound `{k}`"
        ))),
    }
}

/// Capacity of the BSC cascade example when the relay map `x2 = u XOR y2`
/// is optimal: the maximum over `p_X1(0)` of
/// `min{ I(X1;Y2), 1 - p_X1(0) h(p1 p2' + p1' p3) - p_X1(1) h(p1' p2' + p1 p3) }`
/// (primes are complements). Returns the value and the maximizing `p(x1)`.
pub fn bsc_example_capacity(p1: f64, p2: f64, p3: f64) -> Result<(f64, Pmf)> {
    for p in [p1, p2, p3] {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange(p));
        }
    }
    let (q1, q2, q3) = (1.0 - p1, 1.0 - p2, 1.0 - p3);
    let h = |p: f64| binary_entropy(p.clamp(0.0, 1.0)).expect("clamped");
    let a0 = h(p1 * q2 + q1 * p3);
    let a1 = h(q1 * q2 + p1 * p3);
    // The closed form needs u XOR y2 to win both per-input minimizations.
    if a0 > h(p1 * q2 + q1 * q3) + 1e-15 || a1 > h(q1 * q2 + p1 * q3) + 1e-15 {
        return Err(Error::AnalyticInapplicable(format!(
            "x2 = u xor y2 is not the minimizing relay map for (p1, p2, p3) = ({p1}, {p2}, {p3})"
        )));
    }
    let hp1 = h(p1);
    let objective = |q: f64| {
        let first = h(q * q1 + (1.0 - q) * p1) - hp1;
        let second = 1.0 - q * a0 - (1.0 - q) * a1;
        first.min(second)
    };
    // Both terms are concave in q, so their minimum is unimodal.
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (objective(c), objective(d));
    while hi - lo > 1e-10 {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = objective(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = objective(d);
        }
    }
    let mut best = (0.5 * (lo + hi), objective(0.5 * (lo + hi)));
    for q in [0.0, 1.0] {
        let v = objective(q);
        if v > best.1 {
            best = (q, v);
        }
    }
    let x1 = crate::prob::Alphabet::new("x1", 2)?;
    Ok((best.1, Pmf::new(x1, vec![best.0, 1.0 - best.0])?))
}
