//! Key-value witness files.
//!
//! ```text
//! shape = gp-df
//! bound = nub
//! alphabet u 2
//! p_x1 = 0.323 0.677
//! p_u_given_x1y2[x1=0,y2=e] = 0 1
//! map[u=1,x1=0,y2=e] = 1
//! ```
//!
//! Joint pmfs are written on one line, row-major with the last axis fastest.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use relaycap::witness::*;
use relaycap::{Alphabet, BoundKind, CondPmf, DeterministicMap, JointPmf, NoncausalRelayChannel, Pmf};

use crate::error::{at, CliError};

fn nums(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(" ")
}

fn bracket(axes: &[Alphabet], idx: &[usize]) -> String {
    let parts: Vec<String> = axes
        .iter()
        .zip(idx)
        .map(|(a, &i)| format!("{}={}", a.name(), a.label(i)))
        .collect();
    format!("[{}]", parts.join(","))
}

fn unflatten(mut r: usize, axes: &[Alphabet]) -> Vec<usize> {
    let mut d = vec![0; axes.len()];
    for i in (0..axes.len()).rev() {
        d[i] = r % axes[i].size();
        r /= axes[i].size();
    }
    d
}

fn cond_name(c: &CondPmf) -> String {
    let ins: String = c.input_axes().iter().map(|a| a.name().to_string()).collect();
    format!("p_{}_given_{}", c.output_axis().name(), ins)
}

fn write_cond(out: &mut String, c: &CondPmf) {
    let name = cond_name(c);
    for r in 0..c.num_rows() {
        let _ = writeln!(
            out,
            "{name}{} = {}",
            bracket(c.input_axes(), &unflatten(r, c.input_axes())),
            nums(c.row(r))
        );
    }
}

fn write_map(out: &mut String, m: &DeterministicMap) {
    for (c, &v) in m.table().iter().enumerate() {
        let _ = writeln!(
            out,
            "map{} = {}",
            bracket(m.input_axes(), &unflatten(c, m.input_axes())),
            m.output_axis().label(v)
        );
    }
}

fn shape_name(w: &Witness) -> &'static str {
    match w {
        Witness::Df(_) => "df",
        Witness::Pdf(_) => "pdf",
        Witness::Cutset(_) => "cutset",
        Witness::GpDf(_) => "gp-df",
        Witness::GpCf(_) => "gp-cf",
        Witness::GpCfBinned(_) => "gp-cf-binned",
        Witness::Cf(_) => "cf",
        Witness::GpPdfCf(_) => "gp-pdf-cf",
    }
}

/// Text form of a witness of `bound`.
pub fn serialize_witness(bound: BoundKind, w: &Witness) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "shape = {}", shape_name(w));
    let _ = writeln!(out, "bound = {bound}");
    let alpha = |out: &mut String, a: &Alphabet| {
        let _ = writeln!(out, "alphabet {} {}", a.name(), a.size());
    };
    match w {
        Witness::Df(w) => {
            let _ = writeln!(out, "p_x1x2 = {}", nums(w.p_x1x2.probs()));
        }
        Witness::Pdf(w) => {
            alpha(&mut out, &w.p_vx1x2.axes()[0]);
            let _ = writeln!(out, "p_vx1x2 = {}", nums(w.p_vx1x2.probs()));
        }
        Witness::Cutset(w) => {
            let _ = writeln!(out, "p_x1 = {}", nums(w.p_x1.probs()));
            write_cond(&mut out, &w.p_x2_given_x1y2);
        }
        Witness::GpDf(w) => {
            alpha(&mut out, w.u_alphabet());
            let _ = writeln!(out, "p_x1 = {}", nums(w.p_x1.probs()));
            write_cond(&mut out, &w.p_u_given_x1y2);
            write_map(&mut out, &w.relay_map);
        }
        Witness::GpCf(w) => {
            alpha(&mut out, w.u_alphabet());
            let _ = writeln!(out, "p_x1 = {}", nums(w.p_x1.probs()));
            write_cond(&mut out, &w.p_u_given_y2);
            write_map(&mut out, &w.relay_map);
        }
        Witness::GpCfBinned(w) => {
            alpha(&mut out, w.p_u_given_y2.output_axis());
            alpha(&mut out, w.p_yhat_given_y2.output_axis());
            let _ = writeln!(out, "p_x1 = {}", nums(w.p_x1.probs()));
            write_cond(&mut out, &w.p_u_given_y2);
            write_cond(&mut out, &w.p_yhat_given_y2);
            write_map(&mut out, &w.relay_map);
        }
        Witness::Cf(w) => {
            alpha(&mut out, w.p_yhat_given_y2.output_axis());
            let _ = writeln!(out, "p_x1 = {}", nums(w.p_x1.probs()));
            let _ = writeln!(out, "p_x2 = {}", nums(w.p_x2.probs()));
            write_cond(&mut out, &w.p_yhat_given_y2);
        }
        Witness::GpPdfCf(w) => {
            alpha(&mut out, w.p_u_given_vy2.output_axis());
            alpha(&mut out, &w.p_vx1.axes()[0]);
            let _ = writeln!(out, "p_vx1 = {}", nums(w.p_vx1.probs()));
            write_cond(&mut out, &w.p_u_given_vy2);
            write_map(&mut out, &w.relay_map);
        }
    }
    out
}

/// A parsed witness file: the bound it was written for and the witness.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessFile {
    pub bound: Option<BoundKind>,
    pub witness: Witness,
}

struct Entries {
    scalars: BTreeMap<String, (usize, String)>,
    indexed: BTreeMap<String, Vec<(usize, Vec<(String, String)>, String)>>,
    alphabets: BTreeMap<String, Alphabet>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self, CliError> {
        let mut e = Entries {
            scalars: BTreeMap::new(),
            indexed: BTreeMap::new(),
            alphabets: BTreeMap::new(),
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix("alphabet ") {
                let mut w = rest.split_whitespace();
                let (name, size) = (w.next(), w.next().and_then(|s| s.parse::<usize>().ok()));
                let (Some(name), Some(size), None) = (name, size, w.next()) else {
                    return Err(at(line, "expected `alphabet NAME SIZE`"));
                };
                let a = Alphabet::new(name, size).map_err(|err| at(line, err))?;
                if e.alphabets.insert(name.to_string(), a).is_some() {
                    return Err(at(line, format!("duplicate alphabet `{name}`")));
                }
                continue;
            }
            let from = body.find(']').unwrap_or(0);
            let eq = body[from..]
                .find('=')
                .map(|i| from + i)
                .ok_or_else(|| at(line, "expected `key = value`"))?;
            let (key, value) = (&body[..eq], &body[eq + 1..]);
            let (key, value) = (key.trim(), value.trim().to_string());
            match key.split_once('[') {
                None => {
                    if e.scalars.insert(key.to_string(), (line, value)).is_some() {
                        return Err(at(line, format!("duplicate key `{key}`")));
                    }
                }
                Some((name, idx)) => {
                    let idx = idx.strip_suffix(']').ok_or_else(|| at(line, "unterminated `[`"))?;
                    let parts = idx
                        .split(',')
                        .map(|p| {
                            p.split_once('=')
                                .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                                .ok_or_else(|| at(line, format!("bad index `{p}`")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    e.indexed
                        .entry(name.to_string())
                        .or_default()
                        .push((line, parts, value));
                }
            }
        }
        Ok(e)
    }

    fn scalar(&self, key: &str) -> Result<&(usize, String), CliError> {
        self.scalars
            .get(key)
            .ok_or_else(|| CliError::Parse(format!("missing `{key}`")))
    }

    fn floats(&self, key: &str) -> Result<Vec<f64>, CliError> {
        let (line, v) = self.scalar(key)?;
        parse_floats(*line, v)
    }

    fn aux(&self, name: &str) -> Result<Alphabet, CliError> {
        self.alphabets
            .get(name)
            .cloned()
            .ok_or_else(|| CliError::Parse(format!("missing `alphabet {name} N`")))
    }

    /// Fill a table over `axes` from indexed entries `name[...]`, each
    /// holding `width` values produced by `cell`.
    fn table<T: Clone>(
        &self,
        name: &str,
        axes: &[Alphabet],
        width: usize,
        cell: impl Fn(usize, &str) -> Result<Vec<T>, CliError>,
    ) -> Result<Vec<T>, CliError> {
        let rows: usize = axes.iter().map(Alphabet::size).product();
        let mut out: Vec<Option<Vec<T>>> = vec![None; rows];
        for (line, parts, value) in self.indexed.get(name).map(Vec::as_slice).unwrap_or(&[]) {
            if parts.len() != axes.len() {
                return Err(at(*line, format!("`{name}` needs {} indices", axes.len())));
            }
            let mut r = 0;
            for ((k, v), a) in parts.iter().zip(axes) {
                if k != a.name() {
                    return Err(at(*line, format!("expected index `{}`, found `{k}`", a.name())));
                }
                let i = a
                    .index_of(v)
                    .ok_or_else(|| at(*line, format!("`{v}` is not a symbol of `{k}`")))?;
                r = r * a.size() + i;
            }
            let vals = cell(*line, value)?;
            if vals.len() != width {
                return Err(at(*line, format!("expected {width} values, found {}", vals.len())));
            }
            if out[r].replace(vals).is_some() {
                return Err(at(*line, format!("duplicate entry for `{name}`")));
            }
        }
        let mut flat = Vec::with_capacity(rows * width);
        for (r, v) in out.into_iter().enumerate() {
            let v = v.ok_or_else(|| {
                CliError::Parse(format!(
                    "`{name}` is missing the entry {}",
                    bracket(axes, &unflatten(r, axes))
                ))
            })?;
            flat.extend(v);
        }
        Ok(flat)
    }

    fn cond(&self, inputs: Vec<Alphabet>, output: Alphabet) -> Result<CondPmf, CliError> {
        let ins: String = inputs.iter().map(|a| a.name().to_string()).collect();
        let name = format!("p_{}_given_{}", output.name(), ins);
        let probs = self.table(&name, &inputs, output.size(), parse_floats)?;
        Ok(CondPmf::new(inputs, output, probs)?)
    }

    fn map(&self, inputs: Vec<Alphabet>, output: Alphabet) -> Result<DeterministicMap, CliError> {
        let out = output.clone();
        let table = self.table("map", &inputs, 1, |line, v| {
            out.index_of(v)
                .map(|i| vec![i])
                .ok_or_else(|| at(line, format!("`{v}` is not a symbol of `{}`", out.name())))
        })?;
        Ok(DeterministicMap::new(inputs, output, table)?)
    }
}

fn parse_floats(line: usize, v: &str) -> Result<Vec<f64>, CliError> {
    v.split_whitespace()
        .map(|w| w.parse::<f64>().map_err(|_| at(line, format!("`{w}` is not a number"))))
        .collect()
}

/// Read a witness file against the channel it was computed for.
pub fn parse_witness_file(text: &str, ch: &NoncausalRelayChannel) -> Result<WitnessFile, CliError> {
    let e = Entries::parse(text)?;
    let shape = e.scalar("shape")?.1.clone();
    let bound = match e.scalars.get("bound") {
        Some((line, b)) => Some(b.parse::<BoundKind>().map_err(|err| at(*line, err))?),
        None => None,
    };
    let (x1, x2, y2) = (ch.x1().clone(), ch.x2().clone(), ch.y2().clone());
    let p_x1 = || -> Result<Pmf, CliError> { Ok(Pmf::new(x1.clone(), e.floats("p_x1")?)?) };
    let witness = match shape.as_str() {
        "df" => Witness::Df(WitnessDF {
            p_x1x2: JointPmf::new(vec![x1.clone(), x2.clone()], e.floats("p_x1x2")?)?,
        }),
        "pdf" => Witness::Pdf(WitnessPDF {
            p_vx1x2: JointPmf::new(vec![e.aux("v")?, x1.clone(), x2.clone()], e.floats("p_vx1x2")?)?,
        }),
        "cutset" => Witness::Cutset(WitnessCutset {
            p_x1: p_x1()?,
            p_x2_given_x1y2: e.cond(vec![x1.clone(), y2.clone()], x2.clone())?,
        }),
        "gp-df" => {
            let u = e.aux("u")?;
            Witness::GpDf(WitnessGPDF {
                p_x1: p_x1()?,
                p_u_given_x1y2: e.cond(vec![x1.clone(), y2.clone()], u.clone())?,
                relay_map: e.map(vec![u, x1.clone(), y2.clone()], x2.clone())?,
            })
        }
        "gp-cf" => {
            let u = e.aux("u")?;
            Witness::GpCf(WitnessGPCF {
                p_x1: p_x1()?,
                p_u_given_y2: e.cond(vec![y2.clone()], u.clone())?,
                relay_map: e.map(vec![u, y2.clone()], x2.clone())?,
            })
        }
        "gp-cf-binned" => {
            let (u, h) = (e.aux("u")?, e.aux("yhat")?);
            Witness::GpCfBinned(WitnessGPCFBinned {
                p_x1: p_x1()?,
                p_u_given_y2: e.cond(vec![y2.clone()], u.clone())?,
                p_yhat_given_y2: e.cond(vec![y2.clone()], h.clone())?,
                relay_map: e.map(vec![u, h, y2.clone()], x2.clone())?,
            })
        }
        "cf" => Witness::Cf(WitnessCF {
            p_x1: p_x1()?,
            p_x2: Pmf::new(x2.clone(), e.floats("p_x2")?)?,
            p_yhat_given_y2: e.cond(vec![y2.clone()], e.aux("yhat")?)?,
        }),
        "gp-pdf-cf" => {
            let (u, v) = (e.aux("u")?, e.aux("v")?);
            Witness::GpPdfCf(WitnessGPPDFCF {
                p_vx1: JointPmf::new(vec![v.clone(), x1.clone()], e.floats("p_vx1")?)?,
                p_u_given_vy2: e.cond(vec![v.clone(), y2.clone()], u.clone())?,
                relay_map: e.map(vec![u, v, y2.clone()], x2.clone())?,
            })
        }
        other => return Err(CliError::Parse(format!("unknown witness shape `{other}`"))),
    };
    Ok(WitnessFile { bound, witness })
}
