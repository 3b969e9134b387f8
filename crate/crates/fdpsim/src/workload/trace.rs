//! CSV trace replayer.
//!
//! Grammar (one record per line, no header): `OP,KEY,SIZE` where
//! `OP ∈ {GET, SET, DELETE}`, `KEY` is a nonnegative 64-bit integer and
//! `SIZE` a nonnegative byte count (ignored for GET and DELETE). Lines
//! starting with `#` are comments. Malformed rows are counted and skipped;
//! a trace that is more than 10% malformed aborts with diagnostics.

use std::io::{self, BufRead};

use thiserror::Error;

use super::{CacheRequest, Op};

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("unreadable trace source: {0}")]
    Io(#[from] io::Error),
    #[error(
        "trace rejected: {malformed} of {total} rows malformed (>10%); \
         first bad row was line {first_bad_line}: {first_bad:?}"
    )]
    TooManyMalformed {
        malformed: u64,
        total: u64,
        first_bad_line: u64,
        first_bad: String,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TraceStats {
    pub parsed: u64,
    pub malformed: u64,
}

fn parse_row(line: &str) -> Option<CacheRequest> {
    let mut fields = line.split(',');
    let op = match fields.next()?.trim() {
        "GET" => Op::Get,
        "SET" => Op::Set,
        "DELETE" => Op::Delete,
        _ => return None,
    };
    let key: u64 = fields.next()?.trim().parse().ok()?;
    let size: u64 = fields.next()?.trim().parse().ok()?;
    if fields.next().is_some() {
        return None;
    }
    let value_size_bytes = match op {
        Op::Set => {
            if size == 0 || size > u64::from(u32::MAX) {
                return None;
            }
            size as u32
        }
        Op::Get | Op::Delete => 0,
    };
    Some(CacheRequest {
        op,
        key,
        value_size_bytes,
    })
}

/// Parse a whole trace. Comment and blank lines are free; each remaining
/// line either yields a request or counts as malformed.
pub fn parse_trace<R: BufRead>(source: R) -> Result<(Vec<CacheRequest>, TraceStats), TraceError> {
    let mut out = Vec::new();
    let mut stats = TraceStats::default();
    let mut first_bad: Option<(u64, String)> = None;

    for (lineno, line) in source.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        match parse_row(trimmed) {
            Some(req) => {
                stats.parsed += 1;
                out.push(req);
            }
            None => {
                stats.malformed += 1;
                if first_bad.is_none() {
                    first_bad = Some((lineno as u64 + 1, trimmed.to_string()));
                }
            }
        }
    }

    let total = stats.parsed + stats.malformed;
    if total > 0 && stats.malformed * 10 > total {
        let (first_bad_line, first_bad) = first_bad.expect("malformed rows were counted");
        return Err(TraceError::TooManyMalformed {
            malformed: stats.malformed,
            total,
            first_bad_line,
            first_bad,
        });
    }
    Ok((out, stats))
}
