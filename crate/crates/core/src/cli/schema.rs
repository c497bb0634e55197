//! Family file format.
//!
//! ```json
//! {
//!   "n": 1,
//!   "region": "hurwitz",
//!   "entries": [[ { "kind": "interval", "lower": [1, 1], "upper": [2, 1] } ]],
//!   "config": { "boundary_count": 512 }
//! }
//! ```
//!
//! Coefficient arrays are in ascending order, constant term first.

use std::fmt;

use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::checker::CheckerConfig;
use crate::error::{Error, Result};
use crate::family::{Entry, IntervalEntry, MatrixFamily, PolytopicEntry};
use crate::polynomial::Polynomial;
use crate::region::Region;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CellSpec {
    Polytopic { generators: Vec<Vec<f64>> },
    Interval { lower: Vec<f64>, upper: Vec<f64> },
}

/// A cell, validated as soon as it is read so that errors point at it.
struct CheckedCell(Entry);

impl<'de> Deserialize<'de> for CheckedCell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let spec = CellSpec::deserialize(d)?;
        cell_from_spec(spec).map(CheckedCell).map_err(de::Error::custom)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIn {
    n: usize,
    region: String,
    entries: Vec<Vec<CheckedCell>>,
    #[serde(default)]
    config: Option<CheckerConfig>,
}

#[derive(Serialize)]
struct RawOut<'a> {
    n: usize,
    region: String,
    entries: Vec<Vec<CellSpec>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    config: &'a Option<CheckerConfig>,
}

/// A validated family file.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyFile {
    pub family: MatrixFamily,
    pub region: Region,
    pub config: Option<CheckerConfig>,
}

fn cell_from_spec(spec: CellSpec) -> Result<Entry> {
    match spec {
        CellSpec::Polytopic { generators } => {
            if let Some(k) = generators.iter().position(Vec::is_empty) {
                return Err(Error::Invalid(format!("generator {k} has no coefficients")));
            }
            if generators.iter().flatten().any(|c| !c.is_finite()) {
                return Err(Error::Invalid("coefficients must be finite".into()));
            }
            PolytopicEntry::new(generators.into_iter().map(Polynomial::new).collect()).map(Entry::Polytopic)
        }
        CellSpec::Interval { lower, upper } => {
            if lower.iter().chain(&upper).any(|c| !c.is_finite()) {
                return Err(Error::Invalid("coefficients must be finite".into()));
            }
            IntervalEntry::new(lower, upper).map(Entry::Interval)
        }
    }
}

fn spec_from_cell(e: &Entry) -> CellSpec {
    match e {
        Entry::Polytopic(p) => CellSpec::Polytopic {
            generators: p
                .generators()
                .iter()
                .map(|g| if g.is_zero() { vec![0.0] } else { g.coeffs().to_vec() })
                .collect(),
        },
        Entry::Interval(b) => CellSpec::Interval {
            lower: b.lower().to_vec(),
            upper: b.upper().to_vec(),
        },
    }
}

impl TryFrom<RawIn> for FamilyFile {
    type Error = Error;

    fn try_from(raw: RawIn) -> Result<Self> {
        let n = raw.n;
        if n == 0 {
            return Err(Error::Invalid("n must be positive".into()));
        }
        if raw.entries.len() != n {
            return Err(Error::Invalid(format!(
                "entries has {} rows, expected n = {n}",
                raw.entries.len()
            )));
        }
        if let Some(i) = raw.entries.iter().position(|r| r.len() != n) {
            return Err(Error::Invalid(format!(
                "row {i} has {} cells, expected n = {n}",
                raw.entries[i].len()
            )));
        }
        let region: Region = raw.region.parse()?;
        if let Some(cfg) = &raw.config {
            cfg.validate()?;
        }
        let entries = raw.entries.into_iter().flatten().map(|c| c.0).collect();
        Ok(FamilyFile {
            family: MatrixFamily::new(n, entries)?,
            region,
            config: raw.config,
        })
    }
}

struct FileVisitor;

impl<'de> Visitor<'de> for FileVisitor {
    type Value = FamilyFile;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a family file object")
    }

    fn visit_map<A: MapAccess<'de>>(self, map: A) -> std::result::Result<FamilyFile, A::Error> {
        let raw = RawIn::deserialize(de::value::MapAccessDeserializer::new(map))?;
        FamilyFile::try_from(raw).map_err(de::Error::custom)
    }
}

impl<'de> Deserialize<'de> for FamilyFile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_map(FileVisitor)
    }
}

impl Serialize for FamilyFile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.family.n();
        RawOut {
            n,
            region: self.region.to_string(),
            entries: (0..n)
                .map(|i| (0..n).map(|j| spec_from_cell(self.family.entry(i, j))).collect())
                .collect(),
            config: &self.config,
        }
        .serialize(s)
    }
}

impl FamilyFile {
    pub fn new(family: MatrixFamily, region: Region) -> Self {
        FamilyFile { family, region, config: None }
    }

    /// Parses and validates a family file. Errors carry line and column.
    pub fn parse(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Canonical form: pretty JSON, fixed field order, coefficient arrays as
    /// stored (trailing zeros of polytopic generators trimmed).
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("family files serialize") + "\n"
    }
}
