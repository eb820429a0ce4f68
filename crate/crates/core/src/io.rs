//! Score-file ingestion and calibration snapshots.
//!
//! Two text formats:
//!
//! - **Score CSV**: UTF-8, header required, column `score` plus an optional
//!   `label` column (0/1), comma separated, LF or CRLF endings.
//! - **Calibration snapshot**: line-oriented `key value` pairs with a
//!   `format_version` gate. Thresholds are written with Rust's shortest
//!   round-trip float formatting, so reloading reproduces them bit-exactly.
//!   A trained SVM model may be embedded (`svm_*` keys and `sv` lines).

use crate::svm::{KernelParams, SvmModel};
use crate::testing::{AcceptanceRegion, CalibratedTester, TestConfig};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

pub const SNAPSHOT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot open {path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("row {row}: {reason}")]
    ParseError { row: usize, reason: String },
    #[error("row {0}: score is not finite")]
    NonFiniteScore(usize),
    #[error("unsupported snapshot format_version {0}")]
    UnsupportedVersion(u32),
    #[error("snapshot missing key {0}")]
    MissingKey(&'static str),
    #[error("file is empty")]
    Empty,
}

/// One score row; the label is absent for inference-only data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreRecord {
    pub score: f64,
    pub label: Option<u8>,
}

/// Everything needed to re-create a [`CalibratedTester`] plus provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationSnapshot {
    pub format_version: u32,
    pub config: TestConfig,
    pub region1: AcceptanceRegion,
    pub region2: AcceptanceRegion,
    pub provenance: String,
    pub sample_counts: (usize, usize),
    pub svm: Option<SvmModel>,
}

impl CalibrationSnapshot {
    pub fn tester(&self) -> CalibratedTester {
        CalibratedTester::from_regions(self.region1, self.region2, self.config)
    }
}

fn parse_label(field: &str, row: usize) -> Result<u8, IoError> {
    match field.trim() {
        "0" => Ok(0),
        "1" => Ok(1),
        other => Err(IoError::ParseError {
            row,
            reason: format!("label must be 0 or 1, got {other:?}"),
        }),
    }
}

/// Parses a score CSV from text. Rows are numbered from 1 (the header).
pub fn parse_scores(text: &str) -> Result<Vec<ScoreRecord>, IoError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(IoError::Empty)?;
    let has_label = match header.trim_end_matches('\r').trim() {
        "score" => false,
        "score,label" => true,
        other => {
            return Err(IoError::ParseError {
                row: 1,
                reason: format!("expected header 'score' or 'score,label', got {other:?}"),
            })
        }
    };
    let mut records = Vec::new();
    for (idx, line) in lines {
        let row = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let score_field = fields.next().unwrap().trim();
        let score: f64 = score_field.parse().map_err(|_| IoError::ParseError {
            row,
            reason: format!("bad score {score_field:?}"),
        })?;
        if !score.is_finite() {
            return Err(IoError::NonFiniteScore(row));
        }
        let label = match (has_label, fields.next()) {
            (true, Some(f)) => Some(parse_label(f, row)?),
            (true, None) => {
                return Err(IoError::ParseError {
                    row,
                    reason: "missing label field".into(),
                })
            }
            (false, Some(_)) => {
                return Err(IoError::ParseError {
                    row,
                    reason: "unexpected extra field".into(),
                })
            }
            (false, None) => None,
        };
        if fields.next().is_some() {
            return Err(IoError::ParseError {
                row,
                reason: "too many fields".into(),
            });
        }
        records.push(ScoreRecord { score, label });
    }
    Ok(records)
}

pub fn read_scores(path: &Path) -> Result<Vec<ScoreRecord>, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    parse_scores(&text)
}

/// Renders records in the same CSV dialect `parse_scores` reads. Labeled
/// and unlabeled records must not be mixed; the first record decides.
pub fn render_scores(records: &[ScoreRecord]) -> String {
    let labeled = records.first().is_some_and(|r| r.label.is_some());
    let mut out = String::from(if labeled { "score,label\n" } else { "score\n" });
    for r in records {
        match (labeled, r.label) {
            (true, Some(l)) => writeln!(out, "{:?},{}", r.score, l).unwrap(),
            _ => writeln!(out, "{:?}", r.score).unwrap(),
        }
    }
    out
}

pub fn write_scores(records: &[ScoreRecord], path: &Path) -> Result<(), IoError> {
    std::fs::write(path, render_scores(records)).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

pub fn render_snapshot(s: &CalibrationSnapshot) -> String {
    let mut out = String::new();
    writeln!(out, "format_version {}", s.format_version).unwrap();
    writeln!(out, "provenance {}", s.provenance).unwrap();
    writeln!(out, "n1 {}", s.sample_counts.0).unwrap();
    writeln!(out, "n2 {}", s.sample_counts.1).unwrap();
    writeln!(out, "q1_lo {:?}", s.config.class1_lower_p).unwrap();
    writeln!(out, "q1_hi {:?}", s.config.class1_upper_p).unwrap();
    writeln!(out, "q2_lo {:?}", s.config.class2_lower_p).unwrap();
    writeln!(out, "q2_hi {:?}", s.config.class2_upper_p).unwrap();
    writeln!(out, "region1_lower {:?}", s.region1.lower).unwrap();
    writeln!(out, "region1_upper {:?}", s.region1.upper).unwrap();
    writeln!(out, "region2_lower {:?}", s.region2.lower).unwrap();
    writeln!(out, "region2_upper {:?}", s.region2.upper).unwrap();
    if let Some(m) = &s.svm {
        writeln!(out, "svm_gamma {:?}", m.kernel.gamma).unwrap();
        writeln!(out, "svm_bias {:?}", m.bias).unwrap();
        writeln!(out, "svm_c {:?}", m.c).unwrap();
        writeln!(out, "svm_converged {}", m.converged).unwrap();
        for (sv, d) in m.support_vectors.iter().zip(&m.duals) {
            writeln!(out, "sv {:?} {:?} {:?}", sv[0], sv[1], d).unwrap();
        }
    }
    out
}

pub fn write_snapshot(s: &CalibrationSnapshot, path: &Path) -> Result<(), IoError> {
    std::fs::write(path, render_snapshot(s)).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

fn bad(row: usize, reason: impl Into<String>) -> IoError {
    IoError::ParseError {
        row,
        reason: reason.into(),
    }
}

pub fn parse_snapshot(text: &str) -> Result<CalibrationSnapshot, IoError> {
    let mut keys: HashMap<&str, (usize, &str)> = HashMap::new();
    let mut svs: Vec<(usize, &str)> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let row = idx + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let (key, rest) = line
            .split_once(' ')
            .ok_or_else(|| bad(row, "expected 'key value'"))?;
        if key == "sv" {
            svs.push((row, rest));
        } else {
            keys.insert(key, (row, rest));
        }
    }
    let take = |key: &'static str| keys.get(key).copied().ok_or(IoError::MissingKey(key));
    let float = |key: &'static str| -> Result<f64, IoError> {
        let (row, v) = take(key)?;
        v.trim()
            .parse()
            .map_err(|_| bad(row, format!("bad float for {key}: {v:?}")))
    };
    let int = |key: &'static str| -> Result<usize, IoError> {
        let (row, v) = take(key)?;
        v.trim()
            .parse()
            .map_err(|_| bad(row, format!("bad integer for {key}: {v:?}")))
    };

    let version = int("format_version")? as u32;
    if version != SNAPSHOT_FORMAT_VERSION {
        return Err(IoError::UnsupportedVersion(version));
    }
    let config = TestConfig::new(
        float("q1_lo")?,
        float("q1_hi")?,
        float("q2_lo")?,
        float("q2_hi")?,
    )
    .map_err(|e| bad(0, e.to_string()))?;
    let region1 = AcceptanceRegion::new(float("region1_lower")?, float("region1_upper")?)
        .map_err(|e| bad(0, e.to_string()))?;
    let region2 = AcceptanceRegion::new(float("region2_lower")?, float("region2_upper")?)
        .map_err(|e| bad(0, e.to_string()))?;

    let svm = if keys.contains_key("svm_gamma") {
        let gamma = float("svm_gamma")?;
        let mut support_vectors = Vec::with_capacity(svs.len());
        let mut duals = Vec::with_capacity(svs.len());
        for (row, rest) in svs {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(bad(row, "sv line needs 'sv x y dual'"));
            }
            let nums: Vec<f64> = parts
                .iter()
                .map(|p| p.parse().map_err(|_| bad(row, format!("bad float {p:?}"))))
                .collect::<Result<_, _>>()?;
            support_vectors.push([nums[0], nums[1]]);
            duals.push(nums[2]);
        }
        let (row, conv) = take("svm_converged")?;
        Some(SvmModel {
            support_vectors,
            duals,
            bias: float("svm_bias")?,
            kernel: KernelParams::new(gamma).map_err(|e| bad(0, e.to_string()))?,
            c: float("svm_c")?,
            converged: conv
                .trim()
                .parse()
                .map_err(|_| bad(row, "bad bool for svm_converged"))?,
            objective_trace: vec![],
        })
    } else {
        None
    };

    Ok(CalibrationSnapshot {
        format_version: version,
        config,
        region1,
        region2,
        provenance: take("provenance")?.1.to_string(),
        sample_counts: (int("n1")?, int("n2")?),
        svm,
    })
}

pub fn read_snapshot(path: &Path) -> Result<CalibrationSnapshot, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    parse_snapshot(&text)
}
