use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequality::RatioReport;
use crate::opcore::Exponent;

/// CSV header, in column order.
pub const COLUMNS: [&str; 15] = [
    "inequality_id",
    "p",
    "q",
    "lag",
    "dim",
    "seq_len",
    "filtration",
    "seed",
    "lhs",
    "lhs_bound",
    "rhs",
    "rhs_bound",
    "ratio",
    "certifying",
    "evaluations",
];

/// Written in the `ratio` column when the right-hand side vanishes.
pub const UNDEFINED: &str = "undefined";

/// Prefix of the rows emitted by the `axioms` command, which carry no
/// exponents or lag.
pub const AXIOM_PREFIX: &str = "axiom.";

/// One report line. Axiom rows leave `p`, `q` and `lag` empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportRow {
    pub inequality_id: String,
    pub p: Option<Exponent>,
    pub q: Option<Exponent>,
    pub lag: Option<usize>,
    pub dim: usize,
    pub seq_len: usize,
    pub filtration: String,
    pub seed: u64,
    pub lhs: f64,
    pub lhs_bound: String,
    pub rhs: f64,
    pub rhs_bound: String,
    pub ratio: Option<f64>,
    pub certifying: bool,
    pub evaluations: usize,
}

/// Run-level fields shared by every row of one report.
#[derive(Clone, Debug)]
pub struct RowContext {
    pub dim: usize,
    pub seq_len: usize,
    pub filtration: String,
}

impl ReportRow {
    pub fn from_report(report: &RatioReport, ctx: &RowContext, seed: u64, evaluations: usize) -> Self {
        Self {
            inequality_id: report.inequality.as_str().to_string(),
            p: Some(report.params.p),
            q: Some(report.params.q),
            lag: Some(report.params.lag),
            dim: ctx.dim,
            seq_len: ctx.seq_len,
            filtration: ctx.filtration.clone(),
            seed,
            lhs: report.lhs.value,
            lhs_bound: report.lhs.bound.as_str().to_string(),
            rhs: report.rhs.value,
            rhs_bound: report.rhs.bound.as_str().to_string(),
            ratio: report.ratio,
            certifying: report.certifying,
            evaluations,
        }
    }

    fn key(&self) -> (&str, f64, f64, u64) {
        let v = |e: Option<Exponent>| e.map_or(f64::NEG_INFINITY, Exponent::value);
        (&self.inequality_id, v(self.p), v(self.q), self.seed)
    }

    fn validate(&self) -> Result<()> {
        let axiom = self.inequality_id.starts_with(AXIOM_PREFIX);
        if axiom {
            if self.p.is_some() || self.q.is_some() || self.lag.is_some() {
                return Err(schema(format!("{}: axiom rows leave p, q, lag empty", self.inequality_id)));
            }
        } else {
            self.inequality_id
                .parse::<crate::inequality::InequalityId>()
                .map_err(|_| schema(format!("inequality_id: unknown value {:?}", self.inequality_id)))?;
            if self.p.is_none() || self.q.is_none() || self.lag.is_none() {
                return Err(schema(format!("{}: p, q and lag are required", self.inequality_id)));
            }
        }
        for (key, v) in [("lhs_bound", &self.lhs_bound), ("rhs_bound", &self.rhs_bound)] {
            if !matches!(v.as_str(), "exact" | "lower" | "upper") {
                return Err(schema(format!("{key}: expected exact, lower or upper, got {v:?}")));
            }
        }
        if !matches!(self.filtration.as_str(), "dyadic" | "tensor") {
            return Err(schema(format!("filtration: unknown value {:?}", self.filtration)));
        }
        Ok(())
    }
}

fn schema(msg: String) -> Error {
    Error::Config(format!("report schema: {msg}"))
}

/// Sorts rows by `(inequality_id, p, q, seed)`; ties keep emission order.
pub fn sort_rows(rows: &mut [ReportRow]) {
    rows.sort_by(|a, b| {
        let (ka, kb) = (a.key(), b.key());
        ka.0.cmp(kb.0)
            .then(ka.1.total_cmp(&kb.1))
            .then(ka.2.total_cmp(&kb.2))
            .then(ka.3.cmp(&kb.3))
    });
}

/// 17 significant digits, enough to round-trip any `f64`.
fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn exponent(e: Option<Exponent>) -> String {
    match e {
        None => String::new(),
        Some(e) if e.is_infinite() => "inf".into(),
        Some(e) => float(e.value()),
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS).map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.inequality_id.clone(),
            exponent(r.p),
            exponent(r.q),
            r.lag.map(|l| l.to_string()).unwrap_or_default(),
            r.dim.to_string(),
            r.seq_len.to_string(),
            r.filtration.clone(),
            r.seed.to_string(),
            float(r.lhs),
            r.lhs_bound.clone(),
            float(r.rhs),
            r.rhs_bound.clone(),
            r.ratio.map_or_else(|| UNDEFINED.to_string(), float),
            r.certifying.to_string(),
            r.evaluations.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

/// Pretty-printed JSON array of row objects; floats use the shortest
/// representation that parses back to the same `f64`.
pub fn write_json<W: Write>(rows: &[ReportRow], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows).map_err(|e| Error::Io(e.to_string()))?;
    out.write_all(b"\n").map_err(|e| Error::Io(e.to_string()))
}

/// Parses an emitted CSV report, checking the header and every field.
pub fn parse_csv(text: &str) -> Result<Vec<ReportRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(csv_err)?.clone();
    if header.iter().ne(COLUMNS) {
        return Err(schema(format!("header {:?} differs from {COLUMNS:?}", header.iter().collect::<Vec<_>>())));
    }
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let at = |i: usize| rec.get(i).unwrap_or_default();
        let ctx = |key: &str| format!("row {}: {key}: bad value {:?}", line + 1, at(COLUMNS.iter().position(|c| *c == key).unwrap_or(0)));
        let num = |i: usize| at(i).parse::<f64>().map_err(|_| schema(ctx(COLUMNS[i])));
        let int = |i: usize| at(i).parse::<u64>().map_err(|_| schema(ctx(COLUMNS[i])));
        let exp = |i: usize| -> Result<Option<Exponent>> {
            match at(i) {
                "" => Ok(None),
                "inf" => Ok(Some(Exponent::INFINITY)),
                s => s
                    .parse::<f64>()
                    .ok()
                    .and_then(|v| Exponent::new(v).ok())
                    .map(Some)
                    .ok_or_else(|| schema(ctx(COLUMNS[i]))),
            }
        };
        let row = ReportRow {
            inequality_id: at(0).to_string(),
            p: exp(1)?,
            q: exp(2)?,
            lag: match at(3) {
                "" => None,
                _ => Some(int(3)? as usize),
            },
            dim: int(4)? as usize,
            seq_len: int(5)? as usize,
            filtration: at(6).to_string(),
            seed: int(7)?,
            lhs: num(8)?,
            lhs_bound: at(9).to_string(),
            rhs: num(10)?,
            rhs_bound: at(11).to_string(),
            ratio: match at(12) {
                UNDEFINED => None,
                _ => Some(num(12)?),
            },
            certifying: at(13).parse().map_err(|_| schema(ctx(COLUMNS[13])))?,
            evaluations: int(14)? as usize,
        };
        row.validate()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Parses an emitted JSON report with the same field checks as [`parse_csv`].
pub fn parse_json(text: &str) -> Result<Vec<ReportRow>> {
    let rows: Vec<ReportRow> = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    for row in &rows {
        row.validate()?;
    }
    Ok(rows)
}
