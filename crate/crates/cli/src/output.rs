use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context as _, Result};
use ohmlab::graph::DEFAULT_EDGE_CAP;
use ohmlab::routing::DEFAULT_DENSE_EDGE_CAP;

/// Settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Context {
    pub tol: f64,
    pub seed: u64,
    pub cap_edges: Option<usize>,
    pub timestamp: bool,
}

impl Context {
    pub fn generation_cap(&self) -> usize {
        self.cap_edges.unwrap_or(DEFAULT_EDGE_CAP)
    }

    pub fn dense_cap(&self) -> usize {
        self.cap_edges.unwrap_or(DEFAULT_DENSE_EDGE_CAP)
    }
}

/// A CSV table held in memory until the command finishes, so rows computed
/// in parallel still come out in a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Table {
            header: header.iter().map(|h| h.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, out: impl Write, timestamp: bool) -> Result<()> {
        let mut out = out;
        if timestamp {
            writeln!(
                out,
                "# generated {}",
                chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
            )?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Shortest round-trip form, switching to exponent notation for very small
/// or very large magnitudes; `inf` and `NaN` spelled out.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Writes through `body` to `path`, or to stdout when there is no path.
pub fn with_output(
    path: Option<&Path>,
    body: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("cannot create {}", p.display()))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

/// Collects invariant violations; any entry turns the exit code into 2.
#[derive(Debug, Default)]
pub struct Violations(pub Vec<String>);

impl Violations {
    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.0.push(msg());
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `true` when `slack` is no more negative than `1e-6` relative to `scale`.
pub fn slack_ok(slack: f64, scale: f64) -> bool {
    slack >= -1e-6 * scale.abs().max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_quotes_and_stamps() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        let mut plain = Vec::new();
        t.write(&mut plain, false).unwrap();
        assert_eq!(String::from_utf8(plain).unwrap(), "a,b\n1,\"x,y\"\n");
        let mut stamped = Vec::new();
        t.write(&mut stamped, true).unwrap();
        let text = String::from_utf8(stamped).unwrap();
        let (first, rest) = text.split_once('\n').unwrap();
        assert!(first.starts_with("# generated ") && first.ends_with('Z'));
        assert_eq!(rest, "a,b\n1,\"x,y\"\n");
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.5, 2.25, 1.0 / 3.0, 1.2e-16, 6.02e23, -0.0] {
            assert_eq!(num(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(num(1e-16), "1e-16");
    }

    #[test]
    fn slack_tolerance_is_relative() {
        assert!(slack_ok(-5e-7, 0.1));
        assert!(!slack_ok(-2e-6, 1.0));
        assert!(slack_ok(-2e-5, 100.0));
        let mut v = Violations::default();
        v.check(true, || unreachable!());
        assert!(v.is_empty());
        v.check(false, || "x".into());
        assert_eq!(v.0, ["x"]);
    }
}
