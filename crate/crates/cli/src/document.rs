//! On-disk formats: JSON filter and cascade documents and two-column CSV grids.
//!
//! Every real number is written with 17 significant digits so that reading a
//! document back reproduces the binary values exactly.

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;
use std::io::Write;

use symqmf::cascade::FirCascade;
use symqmf::polyrat::{RationalFilter, RealPoly};
use symqmf::symdesign::PreimageSpec;
use symqmf::synthesis::SampledGrid;
use symqmf::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;
pub const FILTER_KIND: &str = "0-sym";

/// `x` in scientific notation with 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn raw<E: serde::ser::Error>(x: f64) -> std::result::Result<Box<RawValue>, E> {
    if !x.is_finite() {
        return Err(E::custom(format!("cannot serialize non-finite number {x}")));
    }
    RawValue::from_string(format_real(x)).map_err(E::custom)
}

fn real<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    raw::<S::Error>(*x)?.serialize(s)
}

fn reals<S: Serializer>(v: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for &x in v {
        seq.serialize_element(&raw::<S::Error>(x)?)?;
    }
    seq.end()
}

fn pairs<S: Serializer>(v: &[[f64; 2]], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for p in v {
        let pair = [raw::<S::Error>(p[0])?, raw::<S::Error>(p[1])?];
        seq.serialize_element(&pair)?;
    }
    seq.end()
}

fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(doc).map_err(|e| Error::Document(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn check_version(version: u32) -> Result<()> {
    if version != FORMAT_VERSION {
        return Err(Error::Document(format!(
            "unsupported document version {version}, expected {FORMAT_VERSION}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterDocument {
    pub version: u32,
    pub kind: String,
    pub m: i64,
    pub sign_at_i: i64,
    #[serde(serialize_with = "pairs")]
    pub lambdas: Vec<[f64; 2]>,
    #[serde(serialize_with = "reals")]
    pub numerator: Vec<f64>,
    #[serde(serialize_with = "reals")]
    pub denominator: Vec<f64>,
    pub provenance: String,
}

impl FilterDocument {
    pub fn new(h: &RationalFilter, spec: &PreimageSpec, provenance: impl Into<String>) -> Self {
        Self {
            version: FORMAT_VERSION,
            kind: FILTER_KIND.to_string(),
            m: spec.m,
            sign_at_i: spec.sign_at_i,
            lambdas: spec.lambdas.iter().map(|l| [l.re, l.im]).collect(),
            numerator: h.num().coeffs().to_vec(),
            denominator: h.den().coeffs().to_vec(),
            provenance: provenance.into(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    /// Parses a document and checks its header fields.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        check_version(doc.version)?;
        if doc.kind != FILTER_KIND {
            return Err(Error::Document(format!("unsupported filter kind {:?}", doc.kind)));
        }
        Ok(doc)
    }

    pub fn spec(&self) -> PreimageSpec {
        PreimageSpec::new(
            self.m,
            self.sign_at_i,
            self.lambdas.iter().map(|p| Complex64::new(p[0], p[1])).collect(),
        )
    }

    /// Rebuilds the filter, enforcing the parameter constraints, coprimality,
    /// realizability, `H(1) = 1` and `2m` zeros at `-1`.
    pub fn filter(&self) -> Result<RationalFilter> {
        let spec = self.spec();
        spec.validate()?;
        if self.numerator.is_empty() || self.denominator.is_empty() {
            return Err(Error::Document("empty coefficient array".into()));
        }
        let h = RationalFilter::new(
            RealPoly::exact(self.numerator.clone()),
            RealPoly::exact(self.denominator.clone()),
        )?;
        h.validate()?;
        let at_one = h.eval(Complex64::new(1.0, 0.0));
        if !((at_one - 1.0).norm() <= 1e-12) {
            return Err(Error::Document(format!(
                "filter is not normalized: H(1) = {at_one}"
            )));
        }
        if h.minus_one_order() as i64 != 2 * self.m {
            return Err(Error::Document(format!(
                "numerator has {} zeros at -1 but m = {}",
                h.minus_one_order(),
                self.m
            )));
        }
        Ok(h)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorEntry {
    pub level: usize,
    #[serde(serialize_with = "reals")]
    pub coeffs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CascadeDocument {
    pub version: u32,
    #[serde(serialize_with = "real")]
    pub epsilon: f64,
    #[serde(serialize_with = "real")]
    pub achieved: f64,
    #[serde(rename = "shift_N")]
    pub shift_n: usize,
    #[serde(rename = "P", serialize_with = "reals")]
    pub p: Vec<f64>,
    pub factors: Vec<FactorEntry>,
}

impl CascadeDocument {
    pub fn new(f: &FirCascade) -> Self {
        Self {
            version: FORMAT_VERSION,
            epsilon: f.epsilon(),
            achieved: f.achieved(),
            shift_n: f.shift_n(),
            p: f.p().coeffs().to_vec(),
            factors: f
                .factors()
                .iter()
                .map(|(level, c)| FactorEntry {
                    level: *level,
                    coeffs: c.coeffs().to_vec(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        check_version(doc.version)?;
        Ok(doc)
    }

    /// Rebuilds the cascade, re-checking its invariants.
    pub fn cascade(&self) -> Result<FirCascade> {
        if self.p.is_empty() || self.factors.iter().any(|f| f.coeffs.is_empty()) {
            return Err(Error::Document("empty coefficient array".into()));
        }
        FirCascade::new(
            self.shift_n,
            RealPoly::exact(self.p.clone()),
            self.factors
                .iter()
                .map(|f| (f.level, RealPoly::exact(f.coeffs.clone())))
                .collect(),
            self.epsilon,
            self.achieved,
        )
    }
}

/// Writes `x,value` rows with a header line.
pub fn write_grid_csv<W: Write>(grid: &SampledGrid, out: W) -> Result<()> {
    let io = |e: csv::Error| Error::Document(e.to_string());
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["x", "value"]).map_err(io)?;
    for (x, v) in grid.points() {
        w.write_record([format_real(x), format_real(v)]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Document(e.to_string()))
}

/// Reads a single-column CSV of samples; a non-numeric first row is taken
/// as a header.
pub fn read_signal_csv(text: &str) -> Result<Vec<f64>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::Document(e.to_string()))?;
        if rec.len() != 1 {
            return Err(Error::Document(format!(
                "row {}: expected one column, got {}",
                row + 1,
                rec.len()
            )));
        }
        match rec[0].parse::<f64>() {
            Ok(x) => out.push(x),
            Err(_) if row == 0 => {}
            Err(_) => {
                return Err(Error::Document(format!(
                    "row {}: not a number: {:?}",
                    row + 1,
                    &rec[0]
                )));
            }
        }
    }
    Ok(out)
}
