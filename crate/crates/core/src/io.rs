//! Plain-text artifacts: CSV files that start with `# key=value` metadata
//! lines followed by a header row.
//!
//! Floats are written in the shortest form that parses back to the same
//! `f64`, using positional notation for `1e-5 <= |x| < 1e16` and exponent
//! notation otherwise. Missing values are written as `NA`.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::limits::LimitTable;
use crate::simulator::Snapshot;
use crate::stats::DriftPoint;

pub const NA: &str = "NA";

pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| NA.to_string(), fmt_f64)
}

/// A parsed CSV artifact.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvDoc {
    pub path: PathBuf,
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvDoc {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut meta = Vec::new();
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            let body = line.trim_start_matches('#').trim();
            if let Some((k, v)) = body.split_once('=') {
                meta.push((k.trim().to_string(), v.trim().to_string()));
            }
        }
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let parse_err = |e: csv::Error| Error::Parse {
            path: path.to_path_buf(),
            detail: e.to_string(),
        };
        let header = reader
            .headers()
            .map_err(parse_err)?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for rec in reader.records() {
            rows.push(rec.map_err(parse_err)?.iter().map(str::to_string).collect());
        }
        Ok(CsvDoc {
            path: path.to_path_buf(),
            meta,
            header,
            rows,
        })
    }

    fn err(&self, detail: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.clone(),
            detail: detail.into(),
        }
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn meta_parse<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        self.meta(key)
            .ok_or_else(|| self.err(format!("missing metadata `{key}`")))?
            .parse()
            .map_err(|_| self.err(format!("bad metadata `{key}`")))
    }

    fn expect_header(&self, expected: &[&str]) -> Result<()> {
        if self.header != expected {
            return Err(self.err(format!("header {:?}, expected {:?}", self.header, expected)));
        }
        Ok(())
    }

    fn field<T: std::str::FromStr>(&self, row: usize, col: usize) -> Result<T> {
        self.rows[row]
            .get(col)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.err(format!("row {}: bad column {}", row + 1, self.header[col])))
    }

    fn field_opt(&self, row: usize, col: usize) -> Result<Option<f64>> {
        match self.rows[row].get(col).map(String::as_str) {
            Some(NA) => Ok(None),
            _ => self.field(row, col).map(Some),
        }
    }
}

/// Writes `# key=value` lines, then `header`, then `rows`.
pub fn write_csv<I>(path: &Path, meta: &[(String, String)], header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let io_err = |e| Error::io(path, e);
    let mut file = BufWriter::new(File::create(path).map_err(io_err)?);
    for (k, v) in meta {
        writeln!(file, "# {k}={v}").map_err(io_err)?;
    }
    let mut w = csv::WriterBuilder::new().from_writer(file);
    let csv_err = |e: csv::Error| Error::Parse {
        path: path.to_path_buf(),
        detail: e.to_string(),
    };
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.into_inner()
        .map_err(|e| Error::io(path, e.into_error()))?
        .flush()
        .map_err(io_err)
}

/// Appends `extra`, skipping keys already present.
fn extend_meta(meta: &mut Vec<(String, String)>, extra: &[(String, String)]) {
    for (k, v) in extra {
        if !meta.iter().any(|(have, _)| have == k) {
            meta.push((k.clone(), v.clone()));
        }
    }
}

pub const SNAPSHOT_HEADER: [&str; 3] = ["d", "w", "count"];
pub const XDW_HEADER: [&str; 3] = ["w", "d", "x_dw"];
pub const XW_HEADER: [&str; 4] = ["w", "x_w", "x_w_closed_form", "x_w_asymptotic"];
pub const UD_HEADER: [&str; 4] = ["d", "u_d", "u_d_asymptotic", "tail_bound"];
pub const DRIFT_HEADER: [&str; 3] = ["n", "vertex_count", "drift"];

/// `d,w,count` over the nonzero cells. `n`, `N` and `vertex_count` are
/// added to `meta`.
pub fn write_snapshot_csv(
    path: &Path,
    snapshot: &Snapshot,
    meta: &[(String, String)],
) -> Result<()> {
    let mut all = vec![
        ("n".to_string(), snapshot.n().to_string()),
        ("N".to_string(), snapshot.clique_size().to_string()),
        (
            "vertex_count".to_string(),
            snapshot.vertex_count().to_string(),
        ),
    ];
    extend_meta(&mut all, meta);
    let rows = snapshot
        .joint()
        .iter()
        .map(|(&(d, w), &c)| vec![d.to_string(), w.to_string(), c.to_string()]);
    write_csv(path, &all, &SNAPSHOT_HEADER, rows)
}

pub fn read_snapshot_csv(path: &Path) -> Result<Snapshot> {
    let doc = CsvDoc::read(path)?;
    doc.expect_header(&SNAPSHOT_HEADER)?;
    let n: u64 = doc.meta_parse("n")?;
    let clique_size: usize = doc.meta_parse("N")?;
    let mut joint = BTreeMap::new();
    for i in 0..doc.rows.len() {
        let key = (doc.field(i, 0)?, doc.field(i, 1)?);
        *joint.entry(key).or_insert(0) += doc.field::<u64>(i, 2)?;
    }
    let snap = Snapshot::from_joint(n, clique_size, joint)?;
    if let Some(v) = doc.meta("vertex_count") {
        if v != snap.vertex_count().to_string() {
            return Err(doc.err("vertex_count does not match the cells"));
        }
    }
    Ok(snap)
}

/// Every cell `d = N-1 ..= (N-1)w` of every row, zeros included.
pub fn write_xdw_csv(path: &Path, table: &LimitTable, meta: &[(String, String)]) -> Result<()> {
    let mut all = vec![
        ("N".to_string(), table.clique_size().to_string()),
        ("w_max".to_string(), table.w_max().to_string()),
    ];
    extend_meta(&mut all, meta);
    let d_min = table.d_min();
    let rows = table.rows().flat_map(|(w, row)| {
        row.iter()
            .enumerate()
            .map(move |(j, &x)| vec![w.to_string(), (d_min + j as u64).to_string(), fmt_f64(x)])
    });
    write_csv(path, &all, &XDW_HEADER, rows)
}

/// Rows of an `x_{d,w}` file, indexed like [`LimitTable::row`] minus one.
pub fn read_xdw_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let doc = CsvDoc::read(path)?;
    doc.expect_header(&XDW_HEADER)?;
    let span: u64 = doc.meta_parse::<u64>("N")? - 1;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for i in 0..doc.rows.len() {
        let w: u64 = doc.field(i, 0)?;
        let d: u64 = doc.field(i, 1)?;
        let x: f64 = doc.field(i, 2)?;
        if w == 0 || d < span || d > span * w {
            return Err(doc.err(format!(
                "row {}: cell ({d}, {w}) outside the support",
                i + 1
            )));
        }
        while rows.len() < w as usize {
            let len = span as usize * rows.len() + 1;
            rows.push(vec![0.0; len]);
        }
        rows[w as usize - 1][(d - span) as usize] = x;
    }
    Ok(rows)
}

/// One line of the `x_w` file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XwRow {
    pub w: u64,
    pub x_w: f64,
    pub closed_form: Option<f64>,
    pub asymptotic: Option<f64>,
}

pub fn write_xw_csv(path: &Path, rows: &[XwRow], meta: &[(String, String)]) -> Result<()> {
    let lines = rows.iter().map(|r| {
        vec![
            r.w.to_string(),
            fmt_f64(r.x_w),
            fmt_opt(r.closed_form),
            fmt_opt(r.asymptotic),
        ]
    });
    write_csv(path, meta, &XW_HEADER, lines)
}

pub fn read_xw_csv(path: &Path) -> Result<Vec<XwRow>> {
    let doc = CsvDoc::read(path)?;
    doc.expect_header(&XW_HEADER)?;
    (0..doc.rows.len())
        .map(|i| {
            Ok(XwRow {
                w: doc.field(i, 0)?,
                x_w: doc.field(i, 1)?,
                closed_form: doc.field_opt(i, 2)?,
                asymptotic: doc.field_opt(i, 3)?,
            })
        })
        .collect()
}

/// One line of the `u_d` file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UdRow {
    pub d: u64,
    pub u_d: f64,
    pub asymptotic: Option<f64>,
    pub tail_bound: Option<f64>,
}

pub fn write_ud_csv(path: &Path, rows: &[UdRow], meta: &[(String, String)]) -> Result<()> {
    let lines = rows.iter().map(|r| {
        vec![
            r.d.to_string(),
            fmt_f64(r.u_d),
            fmt_opt(r.asymptotic),
            fmt_opt(r.tail_bound),
        ]
    });
    write_csv(path, meta, &UD_HEADER, lines)
}

pub fn read_ud_csv(path: &Path) -> Result<Vec<UdRow>> {
    let doc = CsvDoc::read(path)?;
    doc.expect_header(&UD_HEADER)?;
    (0..doc.rows.len())
        .map(|i| {
            Ok(UdRow {
                d: doc.field(i, 0)?,
                u_d: doc.field(i, 1)?,
                asymptotic: doc.field_opt(i, 2)?,
                tail_bound: doc.field_opt(i, 3)?,
            })
        })
        .collect()
}

pub fn write_drift_csv(
    path: &Path,
    series: &[DriftPoint],
    meta: &[(String, String)],
) -> Result<()> {
    let lines = series.iter().map(|p| {
        vec![
            p.n.to_string(),
            p.vertex_count.to_string(),
            fmt_f64(p.drift),
        ]
    });
    write_csv(path, meta, &DRIFT_HEADER, lines)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::xdw_table;
    use crate::params::ModelParams;
    use crate::simulator::GraphState;
    use proptest::prelude::*;

    #[test]
    fn float_format_switches_notation() {
        assert_eq!(fmt_f64(0.2025316455696202), "0.2025316455696202");
        assert_eq!(fmt_f64(1e-7), "1e-7");
        assert_eq!(fmt_f64(1.5e20), "1.5e20");
        assert_eq!(fmt_f64(0.0), "0");
        assert_eq!(fmt_f64(3.0), "3");
    }

    proptest! {
        #[test]
        fn floats_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            let s = fmt_f64(x);
            prop_assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits());
            let mantissa = s.split('e').next().unwrap().replace(['-', '.'], "");
            prop_assert!(mantissa.trim_start_matches('0').len() <= 17, "{}", s);
        }
    }

    #[test]
    fn snapshot_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = ModelParams::new(4, 0.5, 0.5, 0.5).unwrap();
        let mut g = GraphState::init(p, 5).unwrap();
        let snap = g.run(500, &[500]).unwrap().pop().unwrap();
        let path = dir.path().join("s.csv");
        write_snapshot_csv(&path, &snap, &[("seed".into(), "5".into())]).unwrap();
        let back = read_snapshot_csv(&path).unwrap();
        assert_eq!(back, snap);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("# n=500\n# N=4\n"));
        assert!(text.contains("# seed=5\nd,w,count\n"));
    }

    #[test]
    fn tables_round_trip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let p = ModelParams::new(4, 0.5, 0.5, 0.5).unwrap();
        let t = xdw_table(&p.derive_constants().unwrap(), 4, 40);
        let path = dir.path().join("x.csv");
        write_xdw_csv(&path, &t, &[]).unwrap();
        let rows = read_xdw_csv(&path).unwrap();
        assert_eq!(rows.len(), 40);
        for (w, row) in t.rows() {
            assert_eq!(rows[w - 1].as_slice(), row);
        }

        let xw = vec![
            XwRow {
                w: 1,
                x_w: 0.1,
                closed_form: None,
                asymptotic: None,
            },
            XwRow {
                w: 2,
                x_w: 1e-300,
                closed_form: Some(2.5e-301),
                asymptotic: Some(0.3),
            },
        ];
        let path = dir.path().join("xw.csv");
        write_xw_csv(&path, &xw, &[]).unwrap();
        assert_eq!(read_xw_csv(&path).unwrap(), xw);
        assert!(std::fs::read_to_string(&path)
            .unwrap()
            .contains("1,0.1,NA,NA"));

        let ud = vec![UdRow {
            d: 3,
            u_d: 0.25,
            asymptotic: Some(1.0 / 3.0),
            tail_bound: None,
        }];
        let path = dir.path().join("ud.csv");
        write_ud_csv(&path, &ud, &[]).unwrap();
        assert_eq!(read_ud_csv(&path).unwrap(), ud);
    }

    #[test]
    fn parse_errors_name_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "# n=1\n# N=3\nd,w,count\n9,1,1\n").unwrap();
        assert!(read_snapshot_csv(&path).is_err());
        std::fs::write(&path, "w,d,x_dw\n1,2,zz\n").unwrap();
        let e = read_xdw_csv(&path).unwrap_err();
        assert!(e.to_string().contains("bad.csv"), "{e}");
        assert!(read_xdw_csv(&dir.path().join("missing.csv")).is_err());
    }
}
