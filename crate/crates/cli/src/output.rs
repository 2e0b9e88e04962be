use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use gossipsim_core::{RoundMetrics, SweepRow, TableRow};

use crate::CliError;

/// Shortest representation that parses back to the same value.
pub fn float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:?}")
    }
}

pub fn rounds_csv(rounds: &[RoundMetrics]) -> String {
    let mut out = String::from("round,spreaders,fresh,calls,cost\n");
    for r in rounds {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.round, r.spreaders_begin, r.fresh, r.calls, r.cost
        );
    }
    out
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("tr,mean_cost,std_cost,mean_rounds,std_rounds\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.tr,
            float(r.mean_cost),
            float(r.std_cost),
            float(r.mean_rounds),
            float(r.std_rounds)
        );
    }
    out
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out =
        String::from("n,push_cost,push_rounds,pull_cost,pull_rounds,fptp_cost,fptp_rounds,afptp_cost,afptp_rounds\n");
    for r in rows {
        let _ = write!(out, "{}", r.n);
        for cell in [r.push, r.pull, r.fptp, r.adaptive_fptp] {
            let _ = write!(out, ",{},{}", float(cell.cost), float(cell.rounds));
        }
        out.push('\n');
    }
    out
}

pub fn json<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Failed(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Writes the whole artifact or fails; nothing is reported as success
/// until the bytes are flushed.
pub fn emit(out: Option<&Path>, body: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, body).map_err(|e| CliError::Failed(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Failed(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Human-readable notes go to stdout when the artifact goes to a file, and
/// to stderr when the artifact itself occupies stdout.
pub fn note(out: Option<&Path>, line: &str) {
    if out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}
