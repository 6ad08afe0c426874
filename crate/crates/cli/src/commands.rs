//! Command implementations. Each returns the text for standard output; the
//! binary maps errors to exit codes.

use std::fs;
use std::path::Path;

use relaycap::bounds::bsc_example_capacity;
use relaycap::channel::{example_bec_channel, example_bsc_channel, random_channel, DEGRADED_TOL};
use relaycap::optimizer::{maximize, maximize_kinds};
use relaycap::sim::{sweep, SimParams};
use relaycap::{BoundKind, NoncausalRelayChannel, SearchConfig, Witness};

use crate::args::{BoundsArgs, RandomChannelArgs, SearchArgs, SimulateArgs};
use crate::channel_file::{parse_channel_file, serialize_channel};
use crate::error::CliError;
use crate::report::{channel_id, format_value, Report, ReportRow, SIMULATE_HEADER};
use crate::witness_file::{parse_witness_file, serialize_witness};

pub fn search_config(a: &SearchArgs) -> Result<SearchConfig, CliError> {
    let cfg = SearchConfig {
        grid_resolution: a.grid,
        refine_iterations: a.refine_iters,
        tolerance: a.tol,
        card_u: a.card_u,
        card_v: a.card_v,
        card_yhat: a.card_yhat,
        map_enumeration_cap: a.map_cap,
        seed: a.seed,
        ..SearchConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Read and parse a channel file; returns the channel and its identifier.
pub fn load_channel(path: &Path) -> Result<(NoncausalRelayChannel, String), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let ch = parse_channel_file(&text).map_err(|e| match e {
        CliError::Core(c) => CliError::Parse(format!("{}: {c}", path.display())),
        CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
        other => other,
    })?;
    Ok((ch, channel_id(&text)))
}

pub fn parse_kinds(list: &[String]) -> Result<Vec<BoundKind>, CliError> {
    list.iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.parse::<BoundKind>()
                .map_err(|_| CliError::Config(format!("--kinds: unknown bound `{}`", s.trim())))
        })
        .collect()
}

fn emit(out: Option<&Path>, text: String) -> Result<String, CliError> {
    match out {
        Some(p) => {
            fs::write(p, &text)?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

pub fn cmd_bounds(a: &BoundsArgs) -> Result<String, CliError> {
    let (ch, id) = load_channel(&a.channel)?;
    let cfg = search_config(&a.search)?;
    let results = match &a.kinds {
        None => maximize_kinds(&ch, &BoundKind::ALL, &cfg)?,
        Some(list) => {
            let kinds = parse_kinds(list)?;
            if kinds.is_empty() {
                return Err(CliError::Config("--kinds lists no bounds".into()));
            }
            if kinds.contains(&BoundKind::DegradedCapacity) && !ch.is_degraded(DEGRADED_TOL) {
                return Err(relaycap::Error::NotDegraded.into());
            }
            maximize_kinds(&ch, &kinds, &cfg)?
        }
    };
    if let Some(dir) = &a.witness_dir {
        fs::create_dir_all(dir)?;
    }
    let mut rows = Vec::with_capacity(results.len());
    for r in &results {
        let witness = match &a.witness_dir {
            Some(dir) => {
                let path = dir.join(format!("{}.witness", r.kind));
                fs::write(&path, serialize_witness(r.kind, &r.witness))?;
                Some(path.display().to_string())
            }
            None => None,
        };
        rows.push(ReportRow::from_result(r, witness));
    }
    emit(a.out.as_deref(), Report { channel_id: id, rows }.to_csv())
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<String, CliError> {
    let (ch, _) = load_channel(&a.channel)?;
    let base = SimParams::new(1, 0.0, a.rtilde, a.eps_relay, a.eps_dec, a.trials, a.search.seed);
    // Check every cell before any optimization or simulation work.
    for &n in &a.n {
        for &r in &a.rate {
            SimParams {
                n,
                rate_r: r,
                ..base.clone()
            }
            .validate()?;
        }
    }
    let witness = match &a.witness {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            match parse_witness_file(&text, &ch)?.witness {
                Witness::GpDf(w) => w,
                _ => return Err(CliError::Parse(format!("{}: not a gp-df witness", path.display()))),
            }
        }
        None => {
            let cfg = search_config(&a.search)?;
            match maximize(&ch, BoundKind::GpDf, &cfg)?.witness {
                Witness::GpDf(w) => w,
                _ => unreachable!("gp-df search yields gp-df witnesses"),
            }
        }
    };
    let cells = sweep(&ch, &witness, &base, &a.n, &a.rate)?;
    let mut out = String::from(SIMULATE_HEADER);
    out.push('\n');
    for c in cells {
        let e = c.estimate;
        out.push_str(&format!(
            "{},{},{:.6},{:.6},{},{},{}\n",
            c.n, c.rate, e.p_err, e.ci_halfwidth, e.relay_decode_failures, e.multicoding_failures, e.decoder_failures
        ));
    }
    emit(a.out.as_deref(), out)
}

/// One headline number of the worked examples.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub computed: f64,
    pub expected: f64,
}

impl Check {
    pub fn passes(&self, tol: f64) -> bool {
        (self.computed - self.expected).abs() <= tol
    }
}

/// The five headline numbers with the default search configuration.
pub fn example_checks() -> Result<Vec<Check>, CliError> {
    let cfg = SearchConfig::default();
    let bec = maximize_kinds(&example_bec_channel(), &[BoundKind::Df, BoundKind::GpDf], &cfg)?;
    let bsc = example_bsc_channel(0.2, 0.1, 0.55)?;
    let b = maximize_kinds(&bsc, &[BoundKind::Df, BoundKind::Cutset, BoundKind::Nub], &cfg)?;
    Ok(vec![
        Check {
            name: "example-1 df",
            computed: bec[0].value,
            expected: 0.3219,
        },
        Check {
            name: "example-1 gp-df",
            computed: bec[1].value,
            expected: 0.5,
        },
        Check {
            name: "example-2 df",
            computed: b[0].value,
            expected: 0.2203,
        },
        Check {
            name: "example-2 cutset",
            computed: b[1].value,
            expected: 0.2566,
        },
        Check {
            name: "example-2 nub",
            computed: b[2].value,
            expected: 0.2453,
        },
    ])
}

/// Pass/fail lines and whether every check passed.
pub fn cmd_verify_examples(tolerance: f64) -> Result<(String, bool), CliError> {
    let mut out = String::new();
    let mut ok = true;
    for c in example_checks()? {
        let pass = c.passes(tolerance);
        ok &= pass;
        out.push_str(&format!(
            "{} {}: computed {} expected {} |diff| {:.2e} tol {:e}\n",
            if pass { "PASS" } else { "FAIL" },
            c.name,
            format_value(c.computed),
            c.expected,
            (c.computed - c.expected).abs(),
            tolerance
        ));
    }
    Ok((out, ok))
}

/// Closed-form capacity of the BSC example, for reference output.
pub fn bsc_reference() -> Result<f64, CliError> {
    Ok(bsc_example_capacity(0.2, 0.1, 0.55)?.0)
}

pub fn cmd_random_channel(a: &RandomChannelArgs) -> Result<String, CliError> {
    let [x1, x2, y2, y3] =
        <[usize; 4]>::try_from(a.sizes.as_slice()).map_err(|_| CliError::Config("--sizes needs four values".into()))?;
    let ch = random_channel([x1, x2, y2, y3], a.degraded, a.seed).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(serialize_channel(&ch))
}
