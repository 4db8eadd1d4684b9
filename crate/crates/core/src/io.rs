//! Plot-ready CSV/JSON output.

use std::io::Write;

use crate::error::{Error, Result};

/// 12 significant digits, scientific notation; `NaN` for missing cells.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.11e}")
    }
}

pub(crate) fn csv_err(e: impl std::fmt::Display) -> Error {
    Error::Serialization(e.to_string())
}

pub(crate) fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().has_headers(false).from_writer(w)
}

pub fn write_json<W: Write, T: serde::Serialize>(w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(w, value).map_err(csv_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(std::f64::consts::PI), "3.14159265359e0");
        assert_eq!(fmt_num(-0.001), "-1.00000000000e-3");
        assert_eq!(fmt_num(f64::NAN), "NaN");
        let back: f64 = fmt_num(1.0 / 3.0).parse().unwrap();
        assert!((back - 1.0 / 3.0).abs() < 1e-12);
    }
}
