//! Plain-text coloring files.
//!
//! ```text
//! field p=13 k=1
//! colors 7
//! 0 0
//! 1 0
//! ...
//! ```
//!
//! Lines starting with `#` and blank lines are skipped. Every point index in
//! `[0, q²)` must appear exactly once.

use std::io::{BufRead, Write};

use super::HarnessError;
use crate::coloring::{Coloring, ColoringError};
use crate::field::{FieldSpec, HeaderError};

/// Writes `c` in the coloring file format. Points are listed in index order.
pub fn write_coloring(
    field: &FieldSpec,
    c: &Coloring,
    mut sink: impl Write,
) -> Result<(), HarnessError> {
    let q = field.q();
    if c.ground_size() as u64 != q * q {
        return Err(HarnessError::Coverage(ColoringError::GroundSetMismatch(
            c.ground_size(),
            (q * q) as usize,
        )));
    }
    writeln!(sink, "{}", field.header())?;
    writeln!(sink, "colors {}", c.class_count())?;
    for (i, col) in c.assignment().iter().enumerate() {
        writeln!(sink, "{i} {col}")?;
    }
    sink.flush()?;
    Ok(())
}

/// [`write_coloring`] into a string.
pub fn save_coloring(field: &FieldSpec, c: &Coloring) -> Result<String, HarnessError> {
    let mut buf = Vec::new();
    write_coloring(field, c, &mut buf)?;
    Ok(String::from_utf8(buf).expect("ascii"))
}

fn parse_err(line: usize, message: impl Into<String>) -> HarnessError {
    HarnessError::Parse {
        line,
        message: message.into(),
    }
}

/// Reads a coloring file, returning the field from its header and the coloring.
pub fn load_coloring(source: impl BufRead) -> Result<(FieldSpec, Coloring), HarnessError> {
    let mut field: Option<FieldSpec> = None;
    let mut declared: Option<usize> = None;
    let mut slots: Vec<Option<u32>> = Vec::new();

    for (n, line) in source.lines().enumerate() {
        let line_no = n + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        if field.is_none() {
            let f = FieldSpec::parse_header(text).map_err(|e| match e {
                HeaderError::Syntax(m) => parse_err(line_no, m),
                HeaderError::Field(source) => HarnessError::BadField {
                    line: line_no,
                    source,
                },
            })?;
            let points = f.q().checked_mul(f.q()).filter(|&s| s <= u32::MAX as u64);
            let points = points.ok_or_else(|| {
                parse_err(line_no, format!("plane of order {} is too large", f.q()))
            })?;
            slots = vec![None; points as usize];
            field = Some(f);
            continue;
        }
        if declared.is_none() {
            let count = text
                .strip_prefix("colors ")
                .and_then(|v| v.trim().parse::<usize>().ok())
                .ok_or_else(|| parse_err(line_no, "expected `colors <count>`"))?;
            declared = Some(count);
            continue;
        }
        let mut words = text.split_whitespace();
        let (Some(idx), Some(col), None) = (words.next(), words.next(), words.next()) else {
            return Err(parse_err(line_no, "expected `<point-index> <color-id>`"));
        };
        let idx: u64 = idx
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad point index `{idx}`")))?;
        let col: u32 = col
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad color id `{col}`")))?;
        let size = slots.len();
        let slot = slots
            .get_mut(idx as usize)
            .filter(|_| idx < size as u64)
            .ok_or_else(|| {
                HarnessError::Coverage(ColoringError::ElementOutOfRange {
                    element: idx.min(u32::MAX as u64) as u32,
                    size,
                })
            })?;
        if slot.replace(col).is_some() {
            return Err(HarnessError::Coverage(ColoringError::DuplicateElement(
                idx as u32,
            )));
        }
    }

    let field = field.ok_or_else(|| parse_err(1, "missing field header"))?;
    let declared = declared.ok_or_else(|| parse_err(2, "missing `colors <count>` line"))?;
    let assignment = slots
        .iter()
        .enumerate()
        .map(|(i, s)| {
            s.ok_or(HarnessError::Coverage(ColoringError::MissingElement(
                i as u32,
            )))
        })
        .collect::<Result<Vec<u32>, _>>()?;
    let c = Coloring::from_assignment(assignment).map_err(HarnessError::Coverage)?;
    if c.class_count() != declared {
        return Err(parse_err(
            2,
            format!(
                "declared {declared} colors but the data uses {}",
                c.class_count()
            ),
        ));
    }
    Ok((field, c))
}

/// [`load_coloring`], requiring the file to be over `expected`.
pub fn load_coloring_for(
    expected: &FieldSpec,
    source: impl BufRead,
) -> Result<Coloring, HarnessError> {
    let (found, c) = load_coloring(source)?;
    if &found != expected {
        return Err(HarnessError::FieldMismatch {
            expected: expected.clone(),
            found,
        });
    }
    Ok(c)
}
