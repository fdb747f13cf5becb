//! Text formats: matrix files and canonical JSON reports.
//!
//! A matrix file is a JSON object
//!
//! ```json
//! { "n": 2, "kind": "density", "entries": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]] }
//! ```
//!
//! with `entries` listed row by row as `[re, im]` pairs and an optional
//! `kind` of `hermitian`, `positive`, `density` or `general`. Canonical
//! output writes every float with 17 significant digits and keeps struct
//! field order, so equal values always produce equal bytes.

use std::io;
use std::path::Path;

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::entropy::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{check_square_finite, ComplexMatrix, HermitianMatrix, PositiveMatrix, ToleranceConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Hermitian,
    Positive,
    Density,
    General,
}

/// On-disk matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<MatrixKind>,
    #[serde(serialize_with = "ser_entries", deserialize_with = "de_entries")]
    pub entries: ComplexMatrix,
}

fn ser_entries<S: Serializer>(m: &ComplexMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut rows = s.serialize_seq(Some(m.nrows()))?;
    for i in 0..m.nrows() {
        let row: Vec<[f64; 2]> = (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect();
        rows.serialize_element(&row)?;
    }
    rows.end()
}

fn de_entries<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<ComplexMatrix, D::Error> {
    let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
    let n = rows.len();
    if let Some(bad) = rows.iter().position(|r| r.len() != n) {
        return Err(de::Error::custom(format!(
            "row {bad} has {} entries, expected {n}",
            rows[bad].len()
        )));
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

impl MatrixFile {
    pub fn new(entries: ComplexMatrix, kind: Option<MatrixKind>) -> Self {
        MatrixFile {
            n: entries.nrows(),
            kind,
            entries,
        }
    }

    /// Checks shape, finiteness and the claimed kind.
    pub fn validate(&self, cfg: &ToleranceConfig) -> Result<()> {
        if self.entries.nrows() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: self.entries.nrows(),
            });
        }
        check_square_finite(&self.entries)?;
        match self.kind {
            None | Some(MatrixKind::General) => {}
            Some(MatrixKind::Hermitian) => {
                HermitianMatrix::new(self.entries.clone())?;
            }
            Some(MatrixKind::Positive) => {
                self.positive(cfg, "matrix")?;
            }
            Some(MatrixKind::Density) => {
                self.density(cfg, "matrix")?;
            }
        }
        Ok(())
    }

    pub fn hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.entries.clone())
    }

    pub fn positive(&self, cfg: &ToleranceConfig, what: &str) -> Result<PositiveMatrix> {
        PositiveMatrix::new(self.hermitian()?, cfg.dom_floor, what)
    }

    pub fn density(&self, cfg: &ToleranceConfig, what: &str) -> Result<DensityMatrix> {
        DensityMatrix::new(self.positive(cfg, what)?)
            .map_err(|e| Error::Precondition(format!("{what}: {e}")))
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn to_canonical_json(&self) -> String {
        to_canonical_json(self)
    }
}

/// Pretty-printing formatter writing floats as `{:.16e}`.
struct CanonicalFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for CanonicalFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes with the canonical formatter and a trailing newline.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, CanonicalFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}
