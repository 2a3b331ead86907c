use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::metrics::{RunTrace, TraceRecord};

pub const TRACE_HEADER: &str = "round,queries,subopt,regret_partial,eta,beta,accepted";

fn num(v: Option<f64>) -> String {
    // 17 significant digits round-trip every double
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

pub fn format_trace_csv(trace: &RunTrace) -> String {
    let mut out = String::with_capacity(64 * (trace.records.len() + 1));
    out.push_str(TRACE_HEADER);
    out.push('\n');
    for r in &trace.records {
        let accepted = r.accepted.map(|a| if a { "1" } else { "0" }).unwrap_or("");
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.round,
            r.queries,
            num(r.subopt),
            num(r.regret_partial),
            num(r.eta),
            num(r.beta),
            accepted
        ));
    }
    out
}

pub fn parse_trace_csv(text: &str) -> Result<Vec<TraceRecord>> {
    let mut lines = text.lines();
    if lines.next() != Some(TRACE_HEADER) {
        return Err(Error::Config("trace csv: unexpected header".into()));
    }
    let bad = |line: &str| Error::Config(format!("trace csv: malformed row '{line}'"));
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 7 {
                return Err(bad(line));
            }
            let opt = |s: &str| -> Result<Option<f64>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse().map(Some).map_err(|_| bad(line))
                }
            };
            Ok(TraceRecord {
                round: f[0].parse().map_err(|_| bad(line))?,
                queries: f[1].parse().map_err(|_| bad(line))?,
                subopt: opt(f[2])?,
                regret_partial: opt(f[3])?,
                eta: opt(f[4])?,
                beta: opt(f[5])?,
                accepted: match f[6] {
                    "" => None,
                    "1" => Some(true),
                    "0" => Some(false),
                    _ => return Err(bad(line)),
                },
            })
        })
        .collect()
}

/// Writes to a temporary file in the target directory, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::RealVector;

    #[test]
    fn csv_round_trips_exactly() {
        let records = vec![
            TraceRecord {
                round: 1,
                queries: 1,
                subopt: Some(0.1),
                regret_partial: None,
                eta: Some(1.0 / 3.0),
                beta: Some(f64::MIN_POSITIVE),
                accepted: Some(true),
            },
            TraceRecord {
                round: 2,
                queries: 3,
                subopt: Some(-2.5e-300),
                regret_partial: Some(12345.678901234567),
                eta: None,
                beta: None,
                accepted: Some(false),
            },
        ];
        let t = RunTrace { records: records.clone(), final_point: RealVector::zeros(1), final_value: 0.0, total_queries: 3 };
        let csv = format_trace_csv(&t);
        assert!(csv.starts_with(TRACE_HEADER));
        assert!(csv.contains("1.0000000000000001e-1"));
        assert_eq!(parse_trace_csv(&csv).unwrap(), records);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub").join("out.txt");
        write_atomic(&p, b"first").unwrap();
        write_atomic(&p, b"second").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "second");
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
