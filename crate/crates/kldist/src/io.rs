//! Token-count histograms in, result tables out.
//!
//! Token histogram: UTF-8 text, first line `# d=<int>`, then one
//! `token_id,count` line per entry. Ids must satisfy `0 ≤ id < d`; repeated
//! ids are summed and missing ids count zero. Blank lines are ignored.
//!
//! Results CSV: header `n,d,eps,estimator,loss_kind,mean,std,trials,seed`,
//! comma separated, LF line endings, no quoting. Floats are rendered by
//! [`sig9`]; `std` is the population standard deviation over trials.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use kldist_core::{DataSource, EstimatorKind, Histogram, LossKind, TrialStats};

use crate::error::{Error, Result};
use crate::format::sig9;

pub const RESULTS_HEADER: &str = "n,d,eps,estimator,loss_kind,mean,std,trials,seed";

/// Reads a token histogram as an empirical [`DataSource`] labelled with the
/// file name.
pub fn load_token_histogram(path: impl AsRef<Path>) -> Result<DataSource> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let counts = parse_token_histogram(&text)?;
    Ok(DataSource::empirical(counts, label)?)
}

pub fn parse_token_histogram(text: &str) -> Result<Histogram> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::EmptyFile)?;
    let d = parse_header(header)?;
    let mut counts = vec![0.0; d];
    for (idx, line) in lines {
        let line_no = idx + 1;
        let (id, count) = line.trim().split_once(',').ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("expected `token_id,count`, got `{line}`"),
        })?;
        let id: usize = id.trim().parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad token id `{}`", id.trim()),
        })?;
        let count: f64 = count.trim().parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad count `{}`", count.trim()),
        })?;
        if !(count >= 0.0 && count.is_finite()) {
            return Err(Error::Parse { line: line_no, message: format!("count must be nonnegative, got {count}") });
        }
        if id >= d {
            return Err(Error::IdOutOfRange { line: line_no, id, d });
        }
        counts[id] += count;
    }
    Ok(Histogram::new(counts)?)
}

fn parse_header(line: &str) -> Result<usize> {
    let bad = || Error::Parse { line: 1, message: format!("expected header `# d=<int>`, got `{line}`") };
    let rest = line.trim().strip_prefix('#').ok_or_else(bad)?;
    let value = rest.trim().strip_prefix("d=").ok_or_else(bad)?;
    match value.trim().parse::<usize>() {
        Ok(d) if d > 0 => Ok(d),
        _ => Err(bad()),
    }
}

/// Renders a histogram in the token format, skipping zero counts.
pub fn render_token_histogram(counts: &Histogram) -> String {
    let mut out = format!("# d={}\n", counts.len());
    for (id, &c) in counts.counts().iter().enumerate().filter(|(_, &c)| c > 0.0) {
        let _ = writeln!(out, "{id},{c}");
    }
    out
}

pub fn write_token_histogram(counts: &Histogram, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, render_token_histogram(counts)).map_err(|e| Error::io(path, e))
}

/// One row of a results table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub n: f64,
    pub d: usize,
    pub eps: f64,
    pub estimator: EstimatorKind,
    pub loss_kind: LossKind,
    pub mean: f64,
    pub std: f64,
    pub trials: usize,
    pub seed: u64,
}

impl ResultRow {
    pub fn from_stats(n: f64, d: usize, eps: f64, estimator: EstimatorKind, stats: &TrialStats, seed: u64) -> Self {
        Self {
            n,
            d,
            eps,
            estimator,
            loss_kind: stats.loss_kind,
            mean: stats.mean,
            std: stats.std,
            trials: stats.trials,
            seed,
        }
    }
}

pub fn render_results_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(RESULTS_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            sig9(r.n),
            r.d,
            sig9(r.eps),
            r.estimator,
            r.loss_kind,
            sig9(r.mean),
            sig9(r.std),
            r.trials,
            r.seed
        );
    }
    out
}

pub fn write_results_csv(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, render_results_csv(rows)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use kldist_core::source::SourceKind;
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        assert_eq!(parse_token_histogram("# d=3\n0,5\n2,1\n").unwrap().counts(), &[5.0, 0.0, 1.0]);
        assert_eq!(parse_token_histogram("# d=2\n0,2\n0,3\n").unwrap().counts(), &[5.0, 0.0]);
        assert!(matches!(parse_token_histogram("# d=2\nx,1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_token_histogram("# d=2\n2,1\n"), Err(Error::IdOutOfRange { id: 2, .. })));
        assert!(matches!(parse_token_histogram(""), Err(Error::EmptyFile)));
        assert!(matches!(parse_token_histogram("d=2\n0,1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_token_histogram("# d=2\n0,-1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_token_histogram("# d=2\n0\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn loads_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.txt");
        std::fs::write(&path, "# d=4\n3,2\n1,7\n").unwrap();
        let src = load_token_histogram(&path).unwrap();
        assert_eq!(src.label, "corpus");
        match src.kind {
            SourceKind::Empirical(h) => assert_eq!(h.counts(), &[0.0, 7.0, 0.0, 2.0]),
            other => panic!("{other:?}"),
        }
        std::fs::write(&path, "# d=2\n").unwrap();
        assert!(matches!(load_token_histogram(&path), Err(Error::Core(kldist_core::Error::EmptyHistogram))));
        assert!(matches!(load_token_histogram(dir.path().join("missing")), Err(Error::Io { .. })));
    }

    #[test]
    fn results_csv_layout() {
        assert_eq!(render_results_csv(&[]), format!("{RESULTS_HEADER}\n"));
        let row = ResultRow {
            n: 1000.0,
            d: 10000,
            eps: 1.0,
            estimator: EstimatorKind::SamplingTwiceDp,
            loss_kind: LossKind::Kl,
            mean: 0.123456789,
            std: 0.01,
            trials: 5,
            seed: 42,
        };
        let text = render_results_csv(std::slice::from_ref(&row));
        assert_eq!(text, format!("{RESULTS_HEADER}\n1000,10000,1,st_dp,KL,0.123456789,0.01,5,42\n"));
        assert_eq!(text.lines().count(), 2);

        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
        write_results_csv(&[row.clone(), row.clone()], &a).unwrap();
        write_results_csv(&[row.clone(), row], &b).unwrap();
        assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    }

    proptest! {
        #[test]
        fn integer_histograms_round_trip(counts in prop::collection::vec(0u32..1_000_000, 1..60)) {
            let h = Histogram::new(counts.iter().map(|&c| c as f64).collect()).unwrap();
            prop_assert_eq!(parse_token_histogram(&render_token_histogram(&h)).unwrap(), h);
        }
    }
}
