//! Input datasets: CSV ingestion and color bookkeeping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::ColoredPoint;

/// A parsed input set. 1D datasets store their coordinate in `x` with
/// `y = 0`. `k` is inferred as `max color + 1`; point ids are row order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub dims: u8,
    pub points: Vec<ColoredPoint>,
    pub k: u32,
}

impl Dataset {
    pub fn new(dims: u8, points: Vec<ColoredPoint>) -> Result<Dataset> {
        if points.is_empty() {
            return Err(Error::EmptyInput);
        }
        let k = points.iter().map(|p| p.color).max().unwrap() + 1;
        let ds = Dataset { dims, points, k };
        ds.check_colors()?;
        Ok(ds)
    }

    /// Every color in `0..k` must be present, else no spanning object exists.
    pub fn check_colors(&self) -> Result<()> {
        let mut seen = vec![false; self.k as usize];
        for p in &self.points {
            seen[p.color as usize] = true;
        }
        match seen.iter().position(|s| !s) {
            Some(c) => Err(Error::MissingColor(c as u32)),
            None => Ok(()),
        }
    }
}

/// Parses CSV rows `x,y,color` (2D) or `x,color` (1D). An optional header
/// row and `#` comment lines are skipped. The dimensionality is taken from
/// the first data row and must be uniform.
pub fn parse_csv(text: &str) -> Result<Dataset> {
    let mut dims: Option<u8> = None;
    let mut points = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let display_line = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if points.is_empty() && dims.is_none() && fields[0].parse::<f64>().is_err() {
            // header row
            continue;
        }
        let d = match fields.len() {
            2 => 1u8,
            3 => 2u8,
            n => {
                return Err(Error::Parse {
                    line: display_line,
                    message: format!("expected 2 or 3 fields, got {n}"),
                })
            }
        };
        match dims {
            None => dims = Some(d),
            Some(prev) if prev != d => {
                return Err(Error::Parse {
                    line: display_line,
                    message: format!("row has {d}D shape but dataset is {prev}D"),
                })
            }
            _ => {}
        }
        let coord = |s: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| Error::Parse {
                line: display_line,
                message: format!("bad coordinate {s:?}"),
            })?;
            if !v.is_finite() {
                return Err(Error::NaNCoordinate(display_line));
            }
            Ok(v)
        };
        let x = coord(fields[0])?;
        let y = if d == 2 { coord(fields[1])? } else { 0.0 };
        let color_field = fields[fields.len() - 1];
        let color: u32 = color_field.parse().map_err(|_| Error::NonIntegerColor(display_line))?;
        points.push(ColoredPoint::new(x, y, color));
    }
    Dataset::new(dims.unwrap_or(2), points)
}

pub fn load_csv(path: &std::path::Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_csv(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_2d() {
        let ds = parse_csv("0,0,0\n1,1,1").unwrap();
        assert_eq!(ds.points.len(), 2);
        assert_eq!(ds.k, 2);
        assert_eq!(ds.dims, 2);
    }

    #[test]
    fn skips_header_and_comments() {
        let ds = parse_csv("x,y,color\n# note\n0,0,0\n1,1,1\n").unwrap();
        assert_eq!(ds.points.len(), 2);
    }

    #[test]
    fn parse_error_reports_line() {
        let err = parse_csv("1,abc").unwrap_err();
        match err {
            Error::NonIntegerColor(line) => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn missing_color_detected() {
        let err = parse_csv("0,0,0\n1,1,2").unwrap_err();
        assert!(matches!(err, Error::MissingColor(1)));
    }

    #[test]
    fn one_dimensional_rows() {
        let ds = parse_csv("1,0\n2,1\n").unwrap();
        assert_eq!(ds.dims, 1);
        assert_eq!(ds.points[1].x, 2.0);
        assert_eq!(ds.points[1].y, 0.0);
    }
}
