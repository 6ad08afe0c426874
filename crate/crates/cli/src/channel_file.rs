//! Line-oriented channel files.
//!
//! ```text
//! # comment
//! alphabet x1 2
//! alphabet x2 2
//! alphabet y2 3 labels 0,1,e
//! alphabet y3 2
//! relay_channel
//! 0.5 0 0.5
//! 0 0.5 0.5
//! direct_channel
//! (|X1| |X2| |Y2| rows of |Y3| numbers, row index lexicographic in x1, x2, y2)
//! ```

use std::fmt::Write as _;

use relaycap::prob::STOCHASTIC_TOL;
use relaycap::{Alphabet, CondPmf, NoncausalRelayChannel};

use crate::error::{at, CliError};

/// Row sums are checked to this tolerance, then renormalized.
pub const FILE_ROW_TOL: f64 = 1e-9;

const NAMES: [&str; 4] = ["x1", "x2", "y2", "y3"];

#[derive(PartialEq)]
enum Section {
    None,
    Relay,
    Direct,
}

struct Row {
    line: usize,
    values: Vec<f64>,
}

pub fn parse_channel_file(text: &str) -> Result<NoncausalRelayChannel, CliError> {
    let mut alphabets: [Option<Alphabet>; 4] = Default::default();
    let mut section = Section::None;
    let (mut relay, mut direct): (Option<Vec<Row>>, Option<Vec<Row>>) = (None, None);

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut words = body.split_whitespace();
        let head = words.next().unwrap_or("");
        match head {
            "alphabet" => {
                let name = words.next().ok_or_else(|| at(line, "alphabet needs a name"))?;
                let slot = NAMES
                    .iter()
                    .position(|n| *n == name)
                    .ok_or_else(|| at(line, format!("unknown alphabet `{name}` (expected x1, x2, y2 or y3)")))?;
                if alphabets[slot].is_some() {
                    return Err(at(line, format!("duplicate alphabet `{name}`")));
                }
                let size: usize = words
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| at(line, "alphabet size must be a positive integer"))?;
                let a = match (words.next(), words.next()) {
                    (None, _) => Alphabet::new(name, size),
                    (Some("labels"), Some(list)) => {
                        let labels: Vec<&str> = list.split(',').map(str::trim).collect();
                        if labels.len() != size {
                            return Err(at(line, format!("{} labels for size {size}", labels.len())));
                        }
                        Alphabet::with_labels(name, labels)
                    }
                    _ => return Err(at(line, "expected `labels a,b,...` after the size")),
                }
                .map_err(|e| at(line, e))?;
                if words.next().is_some() {
                    return Err(at(line, "trailing text after alphabet"));
                }
                alphabets[slot] = Some(a);
                section = Section::None;
            }
            "relay_channel" | "direct_channel" => {
                if words.next().is_some() {
                    return Err(at(line, format!("`{head}` takes no arguments")));
                }
                let (slot, sec) = if head == "relay_channel" {
                    (&mut relay, Section::Relay)
                } else {
                    (&mut direct, Section::Direct)
                };
                if slot.is_some() {
                    return Err(at(line, format!("duplicate section `{head}`")));
                }
                *slot = Some(Vec::new());
                section = sec;
            }
            _ if head.starts_with(|c: char| c.is_ascii_digit() || c == '.' || c == '-' || c == '+') => {
                let values = body
                    .split_whitespace()
                    .map(|w| w.parse::<f64>().map_err(|_| at(line, format!("`{w}` is not a number"))))
                    .collect::<Result<Vec<_>, _>>()?;
                let row = Row { line, values };
                match section {
                    Section::Relay => relay.as_mut().expect("open section").push(row),
                    Section::Direct => direct.as_mut().expect("open section").push(row),
                    Section::None => return Err(at(line, "numbers outside a channel section")),
                }
            }
            _ => return Err(at(line, format!("unknown directive `{head}`"))),
        }
    }

    let get = |i: usize| {
        alphabets[i]
            .clone()
            .ok_or_else(|| CliError::Parse(format!("missing `alphabet {}`", NAMES[i])))
    };
    let (x1, x2, y2, y3) = (get(0)?, get(1)?, get(2)?, get(3)?);
    let relay = relay.ok_or_else(|| CliError::Parse("missing section `relay_channel`".into()))?;
    let direct = direct.ok_or_else(|| CliError::Parse("missing section `direct_channel`".into()))?;
    let relay_probs = rows_to_probs("relay_channel", relay, x1.size(), y2.size())?;
    let direct_probs = rows_to_probs("direct_channel", direct, x1.size() * x2.size() * y2.size(), y3.size())?;
    let s2r = CondPmf::new(vec![x1.clone()], y2.clone(), relay_probs)?;
    let dir = CondPmf::new(vec![x1.clone(), x2.clone(), y2.clone()], y3.clone(), direct_probs)?;
    Ok(NoncausalRelayChannel::new(x1, x2, y2, y3, s2r, dir)?)
}

fn rows_to_probs(section: &str, rows: Vec<Row>, count: usize, width: usize) -> Result<Vec<f64>, CliError> {
    if rows.len() != count {
        return Err(CliError::Parse(format!(
            "`{section}` has {} rows, expected {count}",
            rows.len()
        )));
    }
    let mut out = Vec::with_capacity(count * width);
    for mut r in rows {
        if r.values.len() != width {
            return Err(at(
                r.line,
                format!("row has {} entries, expected {width}", r.values.len()),
            ));
        }
        if let Some(v) = r.values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(at(r.line, format!("entry {v} is not a probability")));
        }
        let sum: f64 = r.values.iter().sum();
        if (sum - 1.0).abs() > FILE_ROW_TOL {
            return Err(at(r.line, format!("row sums to {sum}, not 1")));
        }
        if (sum - 1.0).abs() > STOCHASTIC_TOL {
            r.values.iter_mut().for_each(|v| *v /= sum);
        }
        out.extend(r.values);
    }
    Ok(out)
}

fn write_alphabet(out: &mut String, a: &Alphabet) {
    let _ = write!(out, "alphabet {} {}", a.name(), a.size());
    if let Some(l) = a.labels() {
        let _ = write!(out, " labels {}", l.join(","));
    }
    out.push('\n');
}

fn write_rows(out: &mut String, c: &CondPmf) {
    for row in c.rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
}

/// Text form of a channel; [`parse_channel_file`] reads it back exactly.
pub fn serialize_channel(ch: &NoncausalRelayChannel) -> String {
    let mut out = String::new();
    for a in [ch.x1(), ch.x2(), ch.y2(), ch.y3()] {
        write_alphabet(&mut out, a);
    }
    out.push_str("relay_channel\n");
    write_rows(&mut out, ch.sender_to_relay());
    out.push_str("direct_channel\n");
    write_rows(&mut out, ch.direct());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use relaycap::channel::{example_bec_channel, random_channel};

    #[test]
    fn round_trip() {
        for ch in [example_bec_channel(), random_channel([2, 3, 2, 3], false, 4).unwrap()] {
            let text = serialize_channel(&ch);
            let back = parse_channel_file(&text).unwrap();
            assert_eq!(back, ch);
            assert_eq!(serialize_channel(&back), text);
        }
    }

    #[test]
    fn bad_row_names_line_and_sum() {
        let text = serialize_channel(&example_bec_channel()).replacen("0.5 0 0.5", "0.5 0 0.48", 1);
        let err = parse_channel_file(&text).unwrap_err().to_string();
        assert!(err.contains("line 6") && err.contains("0.98"), "{err}");
    }

    #[test]
    fn structural_errors() {
        let good = serialize_channel(&example_bec_channel());
        let dup = format!("{good}relay_channel\n");
        assert!(parse_channel_file(&dup)
            .unwrap_err()
            .to_string()
            .contains("duplicate section"));
        let unknown = format!("frobnicate\n{good}");
        assert!(parse_channel_file(&unknown)
            .unwrap_err()
            .to_string()
            .contains("unknown directive"));
        let short = good
            .lines()
            .take(good.lines().count() - 1)
            .collect::<Vec<_>>()
            .join("\n");
        assert!(parse_channel_file(&short)
            .unwrap_err()
            .to_string()
            .contains("rows, expected 12"));
    }
}
