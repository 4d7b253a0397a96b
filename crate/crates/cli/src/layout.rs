//! Parsing of `--interior` values.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use bkm::geometry::{InteriorLayout, Point2};
use serde::Deserialize;

/// One `--interior` value: `none`, `ring:<scale>:<count>` or `file:<path>`.
#[derive(Debug, Clone, PartialEq)]
pub enum InteriorArg {
    None,
    Ring { scale: f64, count: usize },
    File(PathBuf),
}

impl FromStr for InteriorArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "none" {
            return Ok(Self::None);
        }
        if let Some(path) = s.strip_prefix("file:") {
            if path.is_empty() {
                return Err("file: needs a path".into());
            }
            return Ok(Self::File(PathBuf::from(path)));
        }
        if let Some(rest) = s.strip_prefix("ring:") {
            let (scale, count) = rest
                .split_once(':')
                .ok_or_else(|| format!("expected ring:<scale>:<count>, got `{s}`"))?;
            let scale: f64 = scale
                .parse()
                .map_err(|_| format!("ring scale `{scale}` is not a number"))?;
            if !(scale > 0.0 && scale < 1.0) {
                return Err(format!("ring scale must lie in (0, 1), got {scale}"));
            }
            let count: usize = count
                .parse()
                .map_err(|_| format!("ring count `{count}` is not a non-negative integer"))?;
            return Ok(Self::Ring { scale, count });
        }
        Err(format!(
            "expected none, ring:<scale>:<count> or file:<path>, got `{s}`"
        ))
    }
}

#[derive(Deserialize)]
struct PointRecord {
    x: f64,
    y: f64,
}

impl InteriorArg {
    /// The layout this argument describes; relative file paths are taken from `base`.
    pub fn resolve(&self, base: &Path) -> Result<InteriorLayout, String> {
        match self {
            Self::None => Ok(InteriorLayout::none()),
            Self::Ring { scale, count } => Ok(InteriorLayout::ring(*scale, *count)),
            Self::File(path) => {
                let path = base.join(path);
                let mut reader = csv::Reader::from_path(&path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                let mut points = Vec::new();
                for record in reader.deserialize::<PointRecord>() {
                    let r = record.map_err(|e| format!("{}: {e}", path.display()))?;
                    points.push(Point2::new(r.x, r.y));
                }
                Ok(InteriorLayout::explicit(points))
            }
        }
    }
}

/// Combine repeated `--interior` values into one layout.
pub fn combine(args: &[InteriorArg], base: &Path) -> Result<Option<InteriorLayout>, String> {
    if args.is_empty() {
        return Ok(None);
    }
    let mut layout = InteriorLayout::none();
    for a in args {
        layout.extend(a.resolve(base)?);
    }
    Ok(Some(layout))
}
