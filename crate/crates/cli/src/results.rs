//! The plain-text result file.
//!
//! ```text
//! stormer-results 1
//! source=search
//! k=7
//! basis=2,3,5,7
//! complete=true
//! limit=none
//! audit=0
//! x=2 d=3 n=1 a=0,1,0,0
//! ...
//! records=29
//! ```
//!
//! Records may omit `d`, `n` and `a`, and may carry extra claims
//! (`support=`, `sum=`, `v<p>=`) for `verify` to check.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use stormer_core::sieve::{SkippedModulus, SolutionRecord};
use stormer_core::ExponentVector;
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "stormer-results";

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Search,
    Oracle,
    /// Hand-written input for `verify`.
    Claims,
}

impl Source {
    fn as_str(self) -> &'static str {
        match self {
            Source::Search => "search",
            Source::Oracle => "oracle",
            Source::Claims => "claims",
        }
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> Result<Source, String> {
        match s {
            "search" => Ok(Source::Search),
            "oracle" => Ok(Source::Oracle),
            "claims" => Ok(Source::Claims),
            _ => Err(format!("unknown source {s:?}")),
        }
    }
}

/// A property of `x² − 1` asserted by a record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Claim {
    /// Number of distinct prime factors.
    Support(usize),
    /// Sum of the exponents.
    Sum(u64),
    /// Exponent of one prime.
    Valuation(u64, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FileRecord {
    pub x: BigInt,
    pub d: Option<BigInt>,
    pub n: Option<u32>,
    pub a: Option<ExponentVector>,
    pub claims: Vec<Claim>,
}

impl From<&SolutionRecord> for FileRecord {
    fn from(r: &SolutionRecord) -> FileRecord {
        FileRecord {
            x: r.x.clone(),
            d: Some(r.d.clone()),
            n: Some(r.n),
            a: Some(r.exponents.clone()),
            claims: Vec::new(),
        }
    }
}

impl FileRecord {
    pub fn to_record(&self) -> Option<SolutionRecord> {
        Some(SolutionRecord {
            x: self.x.clone(),
            d: self.d.clone()?,
            n: self.n?,
            exponents: self.a.clone()?,
        })
    }

    fn write(&self, out: &mut String) {
        write!(out, "x={}", self.x).unwrap();
        if let Some(d) = &self.d {
            write!(out, " d={d}").unwrap();
        }
        if let Some(n) = self.n {
            write!(out, " n={n}").unwrap();
        }
        if let Some(a) = &self.a {
            let v: Vec<String> = a.0.iter().map(u32::to_string).collect();
            write!(out, " a={}", v.join(",")).unwrap();
        }
        for c in &self.claims {
            match c {
                Claim::Support(k) => write!(out, " support={k}"),
                Claim::Sum(s) => write!(out, " sum={s}"),
                Claim::Valuation(p, e) => write!(out, " v{p}={e}"),
            }
            .unwrap();
        }
        out.push('\n');
    }

    fn parse(line: &str) -> Result<FileRecord, String> {
        let mut rec = FileRecord {
            x: BigInt::default(),
            d: None,
            n: None,
            a: None,
            claims: Vec::new(),
        };
        let mut have_x = false;
        for field in line.split_whitespace() {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| format!("field {field:?} is not key=value"))?;
            let bad = || format!("bad value for {k}: {v:?}");
            match k {
                "x" => {
                    rec.x = v.parse().map_err(|_| bad())?;
                    have_x = true;
                }
                "d" => rec.d = Some(v.parse().map_err(|_| bad())?),
                "n" => rec.n = Some(v.parse().map_err(|_| bad())?),
                "a" => {
                    let exps = if v.is_empty() {
                        Vec::new()
                    } else {
                        v.split(',')
                            .map(str::parse)
                            .collect::<Result<_, _>>()
                            .map_err(|_| bad())?
                    };
                    rec.a = Some(ExponentVector(exps));
                }
                "support" => rec
                    .claims
                    .push(Claim::Support(v.parse().map_err(|_| bad())?)),
                "sum" => rec.claims.push(Claim::Sum(v.parse().map_err(|_| bad())?)),
                _ => match k.strip_prefix('v').and_then(|p| p.parse::<u64>().ok()) {
                    Some(p) => rec
                        .claims
                        .push(Claim::Valuation(p, v.parse().map_err(|_| bad())?)),
                    None => return Err(format!("unknown field {k:?}")),
                },
            }
        }
        if !have_x {
            return Err("record without x".into());
        }
        Ok(rec)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultFile {
    pub source: Source,
    pub bound: u64,
    pub basis: Vec<u64>,
    pub complete: bool,
    /// Upper limit on `x` for oracle files.
    pub limit: Option<u64>,
    pub skipped: Vec<SkippedModulus>,
    pub records: Vec<FileRecord>,
}

impl ResultFile {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{MAGIC} {FORMAT_VERSION}").unwrap();
        writeln!(out, "source={}", self.source.as_str()).unwrap();
        writeln!(out, "k={}", self.bound).unwrap();
        let basis: Vec<String> = self.basis.iter().map(u64::to_string).collect();
        writeln!(out, "basis={}", basis.join(",")).unwrap();
        writeln!(out, "complete={}", self.complete).unwrap();
        match self.limit {
            Some(l) => writeln!(out, "limit={l}").unwrap(),
            None => writeln!(out, "limit=none").unwrap(),
        }
        writeln!(out, "audit={}", self.skipped.len()).unwrap();
        for s in &self.skipped {
            writeln!(out, "{}", s.to_line()).unwrap();
        }
        for r in &self.records {
            r.write(&mut out);
        }
        writeln!(out, "records={}", self.records.len()).unwrap();
        out
    }

    pub fn parse(text: &str) -> Result<ResultFile, ParseError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
        let err = |line: usize, msg: String| ParseError { line, msg };
        let mut next = |what: &str| {
            lines
                .next()
                .ok_or_else(|| err(0, format!("file ends before {what}")))
        };

        let (ln, magic) = next("the header")?;
        match magic.split_once(' ') {
            Some((MAGIC, v)) if v == FORMAT_VERSION.to_string() => {}
            _ => return Err(err(ln, format!("expected \"{MAGIC} {FORMAT_VERSION}\""))),
        }
        let mut field = |key: &str| -> Result<(usize, String), ParseError> {
            let (ln, l) = next(key)?;
            match l.split_once('=') {
                Some((k, v)) if k == key => Ok((ln, v.to_string())),
                _ => Err(err(ln, format!("expected {key}=..."))),
            }
        };
        let (ln, source) = field("source")?;
        let source = source.parse().map_err(|m| err(ln, m))?;
        let (ln, k) = field("k")?;
        let bound = k.parse().map_err(|_| err(ln, format!("bad bound {k:?}")))?;
        let (ln, b) = field("basis")?;
        let basis = if b.is_empty() {
            Vec::new()
        } else {
            b.split(',')
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| err(ln, format!("bad basis {b:?}")))?
        };
        let (ln, c) = field("complete")?;
        let complete = c.parse().map_err(|_| err(ln, format!("bad flag {c:?}")))?;
        let (ln, l) = field("limit")?;
        let limit = match l.as_str() {
            "none" => None,
            v => Some(v.parse().map_err(|_| err(ln, format!("bad limit {v:?}")))?),
        };
        let (ln, a) = field("audit")?;
        let audit: usize = a
            .parse()
            .map_err(|_| err(ln, format!("bad audit count {a:?}")))?;
        let mut skipped = Vec::with_capacity(audit);
        for _ in 0..audit {
            let (ln, l) = next("the audit list")?;
            skipped.push(SkippedModulus::from_line(l).map_err(|m| err(ln, m))?);
        }

        let mut records = Vec::new();
        let mut footer = None;
        for (ln, l) in lines {
            if footer.is_some() {
                if l.is_empty() {
                    continue;
                }
                return Err(err(ln, "content after the footer".into()));
            }
            if let Some(n) = l.strip_prefix("records=") {
                let n: usize = n
                    .parse()
                    .map_err(|_| err(ln, format!("bad footer {l:?}")))?;
                if n != records.len() {
                    return Err(err(
                        ln,
                        format!("footer says {n} records, found {}", records.len()),
                    ));
                }
                footer = Some(n);
                continue;
            }
            let r = FileRecord::parse(l).map_err(|m| err(ln, m))?;
            if let Some(prev) = records.last().map(|p: &FileRecord| &p.x) {
                if prev >= &r.x {
                    return Err(err(ln, "records are not sorted by x".into()));
                }
            }
            records.push(r);
        }
        if footer.is_none() {
            return Err(err(text.lines().count(), "missing records= footer".into()));
        }
        Ok(ResultFile {
            source,
            bound,
            basis,
            complete,
            limit,
            skipped,
            records,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultFile {
        ResultFile {
            source: Source::Search,
            bound: 3,
            basis: vec![2, 3],
            complete: false,
            limit: None,
            skipped: vec![SkippedModulus {
                d: BigInt::from(6),
                reason: "budget".into(),
            }],
            records: vec![
                FileRecord {
                    x: BigInt::from(2),
                    d: Some(BigInt::from(3)),
                    n: Some(1),
                    a: Some(ExponentVector(vec![0, 1])),
                    claims: vec![],
                },
                FileRecord {
                    x: BigInt::from(17),
                    d: None,
                    n: None,
                    a: None,
                    claims: vec![Claim::Support(2), Claim::Sum(7), Claim::Valuation(2, 5)],
                },
            ],
        }
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let text = sample().to_text();
        let back = ResultFile::parse(&text).unwrap();
        assert_eq!(back, sample());
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = sample().to_text().replace("x=17", "x=1z");
        let e = ResultFile::parse(&text).unwrap_err();
        assert_eq!(e.line, 10);
        let text = sample().to_text().replace("records=2", "records=3");
        assert!(ResultFile::parse(&text).unwrap_err().msg.contains("footer"));
        let text = sample().to_text().replace("x=2 ", "x=20 ");
        assert!(ResultFile::parse(&text).unwrap_err().msg.contains("sorted"));
    }
}
