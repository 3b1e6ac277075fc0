//! Mask and project file formats: JSON masks in entries or grid form,
//! and the pipeline configuration schema. Exact rationals travel as
//! strings so no float contamination can occur on the exact backend.

use std::collections::BTreeSet;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::DilationContext;
use crate::mat::{IMat, IVec, RVec};
use crate::scalar::{Backend, Coeff, Quad};
use crate::symmetry::{OrbitStructure, SymmetryContext};
use crate::trigpoly::TrigPoly;

/// One mask coefficient in entries form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MaskEntry {
    pub k: Vec<i64>,
    pub value: ValueRepr,
}

/// Coefficient value: rational string, quadratic pair `a + b sqrt(rad)`,
/// or a float `[re, im]` pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueRepr {
    Rational(String),
    Quadratic { a: String, b: String, rad: u64 },
    Complex([f64; 2]),
}

/// Axis of a grid block: which coordinate it indexes and the direction of
/// travel (`+1` increasing, `-1` decreasing).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxisDecl {
    pub coord: usize,
    pub dir: i64,
}

/// Mandatory orientation declaration of a grid block.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxesDecl {
    pub row: AxisDecl,
    pub col: AxisDecl,
}

/// Matrix layout mirroring the printed tables: `origin` is the grid
/// position (row, col) of the zero exponent.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridBlock {
    pub rows: Vec<Vec<String>>,
    pub origin: [i64; 2],
    #[serde(default)]
    pub axes: Option<AxesDecl>,
}

/// A mask on disk: exactly one of `entries` or `grid`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MaskFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<MaskEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridBlock>,
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    BigRational::from_str(s.trim())
        .map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl ValueRepr {
    fn to_coeff(&self) -> Result<Coeff> {
        Ok(match self {
            ValueRepr::Rational(s) => Coeff::Exact(Quad::from_rational(parse_rational(s)?)),
            ValueRepr::Quadratic { a, b, rad } => {
                Coeff::Exact(Quad::new(parse_rational(a)?, parse_rational(b)?, *rad))
            }
            ValueRepr::Complex([re, im]) => {
                Coeff::Float(num_complex::Complex64::new(*re, *im))
            }
        })
    }

    fn from_coeff(c: &Coeff) -> ValueRepr {
        match c {
            Coeff::Exact(q) if q.is_rational() => ValueRepr::Rational(rational_string(&q.a)),
            Coeff::Exact(q) => ValueRepr::Quadratic {
                a: rational_string(&q.a),
                b: rational_string(&q.b),
                rad: q.rad,
            },
            Coeff::Float(z) => ValueRepr::Complex([z.re, z.im]),
        }
    }
}

/// Parse a mask file into a polynomial; the backend follows the value
/// representations (any float entry forces the float backend).
pub fn import_mask(file: &MaskFile) -> Result<TrigPoly> {
    match (&file.entries, &file.grid) {
        (Some(_), Some(_)) => Err(Error::Parse(
            "mask file declares both entries and grid forms".into(),
        )),
        (None, None) => Err(Error::Parse("mask file has neither entries nor a grid".into())),
        (Some(entries), None) => {
            let mut seen = BTreeSet::new();
            let mut terms = Vec::new();
            let mut backend = Backend::Exact;
            for e in entries {
                if e.k.len() != file.dim {
                    return Err(Error::Parse(format!(
                        "exponent {:?} does not have {} components",
                        e.k, file.dim
                    )));
                }
                if !seen.insert(e.k.clone()) {
                    return Err(Error::DuplicateExponent(e.k.clone()));
                }
                let c = e.value.to_coeff()?;
                if matches!(c, Coeff::Float(_)) {
                    backend = Backend::Float;
                }
                terms.push((e.k.clone(), c));
            }
            let terms: Vec<(IVec, Coeff)> = match backend {
                Backend::Exact => terms,
                Backend::Float => terms
                    .into_iter()
                    .map(|(k, c)| {
                        let z = c.to_complex();
                        (k, Coeff::Float(z))
                    })
                    .collect(),
            };
            TrigPoly::from_terms(file.dim, backend, terms)
        }
        (None, Some(grid)) => {
            if file.dim != 2 {
                return Err(Error::Parse("grid form is only defined for dim = 2".into()));
            }
            let axes = grid.axes.as_ref().ok_or(Error::GridAmbiguous)?;
            if axes.row.coord > 1 || axes.col.coord > 1 || axes.row.coord == axes.col.coord {
                return Err(Error::Parse("grid axes must cover coordinates 0 and 1".into()));
            }
            if axes.row.dir.abs() != 1 || axes.col.dir.abs() != 1 {
                return Err(Error::Parse("grid axis direction must be +1 or -1".into()));
            }
            let mut seen = BTreeSet::new();
            let mut terms = Vec::new();
            for (r, row) in grid.rows.iter().enumerate() {
                for (c, cell) in row.iter().enumerate() {
                    let v = parse_rational(cell)?;
                    if v == BigRational::from_integer(BigInt::from(0)) {
                        continue;
                    }
                    let mut k = vec![0i64; 2];
                    k[axes.row.coord] = axes.row.dir * (r as i64 - grid.origin[0]);
                    k[axes.col.coord] = axes.col.dir * (c as i64 - grid.origin[1]);
                    if !seen.insert(k.clone()) {
                        return Err(Error::DuplicateExponent(k));
                    }
                    terms.push((k, Coeff::Exact(Quad::from_rational(v))));
                }
            }
            TrigPoly::from_terms(2, Backend::Exact, terms)
        }
    }
}

/// Mask export form.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MaskFormat {
    Entries,
    Grid,
}

/// Serialize a polynomial; grid form requires dim 2 and rational entries
/// and uses the printed-table orientation (rows run down decreasing
/// second coordinate, columns right along the first).
pub fn export_mask(poly: &TrigPoly, format: MaskFormat) -> Result<MaskFile> {
    match format {
        MaskFormat::Entries => {
            let entries = poly
                .terms()
                .map(|(k, c)| MaskEntry { k: k.clone(), value: ValueRepr::from_coeff(c) })
                .collect();
            Ok(MaskFile { dim: poly.dim, entries: Some(entries), grid: None })
        }
        MaskFormat::Grid => {
            if poly.dim != 2 {
                return Err(Error::Parse("grid export is only defined for dim = 2".into()));
            }
            if !poly.is_rational() {
                return Err(Error::Parse("grid export needs rational coefficients".into()));
            }
            let (lo, hi) = poly
                .support_box()
                .ok_or_else(|| Error::Parse("cannot export the zero mask as a grid".into()))?;
            let zero = BigRational::from_integer(BigInt::from(0));
            let mut rows = Vec::new();
            for y in (lo[1]..=hi[1]).rev() {
                let mut row = Vec::new();
                for x in lo[0]..=hi[0] {
                    let c = poly.coeff(&[x, y]);
                    let q = match c {
                        Coeff::Exact(q) => q.a,
                        Coeff::Float(_) => zero.clone(),
                    };
                    row.push(rational_string(&q));
                }
                rows.push(row);
            }
            Ok(MaskFile {
                dim: 2,
                entries: None,
                grid: Some(GridBlock {
                    rows,
                    origin: [hi[1], -lo[0]],
                    axes: Some(AxesDecl {
                        row: AxisDecl { coord: 1, dir: -1 },
                        col: AxisDecl { coord: 0, dir: 1 },
                    }),
                }),
            })
        }
    }
}

/// Mask reference in a config: inline or a path relative to the config.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MaskSource {
    Path(String),
    Inline(MaskFile),
}

impl MaskSource {
    pub fn load(&self, base: &Path) -> Result<TrigPoly> {
        let file = match self {
            MaskSource::Inline(f) => f.clone(),
            MaskSource::Path(p) => {
                let text = std::fs::read_to_string(base.join(p))?;
                serde_json::from_str(&text)?
            }
        };
        import_mask(&file)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PipelineKind {
    Framelike,
    Lift,
    Frame,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UtilityDualMode {
    Auto,
    Reduced,
    File,
}

impl Default for UtilityDualMode {
    fn default() -> Self {
        UtilityDualMode::Auto
    }
}

fn default_n() -> usize {
    1
}

/// Project configuration driving a pipeline run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProjectConfig {
    pub dilation: Vec<Vec<i64>>,
    #[serde(default)]
    pub digits: Option<Vec<Vec<i64>>>,
    pub group_generators: Vec<Vec<Vec<i64>>>,
    pub center: Vec<String>,
    pub mask: MaskSource,
    /// Full dual refinable mask for the frame-like path; solved when absent.
    #[serde(default)]
    pub dual_mask: Option<MaskSource>,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default)]
    pub support_cap: Option<i64>,
    pub pipeline: PipelineKind,
    #[serde(default)]
    pub symmetrize: bool,
    #[serde(default)]
    pub utility_dual: UtilityDualMode,
    #[serde(default)]
    pub utility_dual_file: Option<MaskSource>,
    /// Optional per-orbit lifting base polynomials.
    #[serde(default)]
    pub lifting: Option<Vec<Option<MaskSource>>>,
}

impl ProjectConfig {
    pub fn load(path: &Path) -> Result<ProjectConfig> {
        let text = std::fs::read_to_string(path)?;
        let cfg: ProjectConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.dilation.len();
        if d == 0 || self.dilation.iter().any(|r| r.len() != d) {
            return Err(Error::Config("dilation must be a square matrix".into()));
        }
        if self.center.len() != d {
            return Err(Error::Config("center length must match the dimension".into()));
        }
        if self.group_generators.is_empty() {
            return Err(Error::Config("at least one group generator required".into()));
        }
        if self.pipeline == PipelineKind::Frame
            && self.utility_dual == UtilityDualMode::File
            && self.utility_dual_file.is_none()
        {
            return Err(Error::Config(
                "utility_dual = file needs a utility_dual_file".into(),
            ));
        }
        Ok(())
    }

    pub fn center_rvec(&self) -> Result<RVec> {
        self.center.iter().map(|s| parse_rational(s)).collect()
    }

    /// Build the dilation, symmetry, and orbit contexts.
    pub fn contexts(&self) -> Result<(DilationContext, SymmetryContext, OrbitStructure)> {
        let d = self.dilation.len();
        let m = IMat::from_rows(&self.dilation);
        let digits = self.digits.as_ref().map(|ds| {
            ds.iter().map(|v| v.clone()).collect::<Vec<IVec>>()
        });
        let dil = DilationContext::new(m, digits)?;
        let gens: Vec<IMat> = self
            .group_generators
            .iter()
            .map(|g| {
                if g.len() != d || g.iter().any(|r| r.len() != d) {
                    return Err(Error::Config("generator of wrong shape".into()));
                }
                Ok(IMat::from_rows(g))
            })
            .collect::<Result<_>>()?;
        let sym = SymmetryContext::from_generators(&gens, &dil, self.center_rvec()?)?;
        let orbits = sym.orbit_decomposition(&dil)?;
        Ok((dil, sym, orbits))
    }
}
