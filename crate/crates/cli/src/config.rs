//! Metric specifications and run configuration files.
//!
//! A metric is given inline as one of
//!
//! ```text
//! flat
//! schwarzschild:m=1
//! cylinder:a=2
//! generated:total=0.8,center=4,width=1,a_min=2.5
//! expr:<gauge>:<expression>      (parameters via --param, start via --start)
//! table:<gauge>:<path.csv>       (columns x,y or x,y,dy,d2y)
//! ```
//!
//! or in the `[metric]` section of a TOML file, which may also carry
//! `[tolerances]` and `[output]`. Command-line values override the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use isocap::geometry::{BoundaryKind, Gauge, MassProfile, NonnegativeCurvatureMetric, RadialMetric, Table};
use isocap::profile::{parse, ParamSet};
use isocap::{Error, Result, ToleranceConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Human,
    Csv,
    Json,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSection {
    pub spec: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub start: Option<f64>,
    pub boundary: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub metric: MetricSection,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    #[serde(default)]
    pub output: OutputSection,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {}", path.display(), e.message())))
    }
}

/// Everything needed to build a metric, after merging file and flags.
#[derive(Debug, Clone, Default)]
pub struct MetricSource {
    pub spec: String,
    pub params: BTreeMap<String, f64>,
    pub start: Option<f64>,
    pub boundary: Option<String>,
}

fn parse_boundary(text: &str) -> Result<BoundaryKind> {
    match text.trim().to_ascii_lowercase().as_str() {
        "none" => Ok(BoundaryKind::None),
        "minimal" => Ok(BoundaryKind::Minimal),
        other => Err(Error::Config(format!("unknown boundary `{other}` (expected none or minimal)"))),
    }
}

/// `key=value` pairs separated by commas.
pub fn parse_assignments(text: &str) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) =
            part.split_once('=').ok_or_else(|| Error::Config(format!("expected key=value, got `{part}`")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("`{}` is not a number in `{part}`", value.trim())))?;
        out.insert(key.trim().to_string(), value);
    }
    Ok(out)
}

fn family_params(name: &str, args: &str, allowed: &[&str]) -> Result<BTreeMap<String, f64>> {
    let params = parse_assignments(args)?;
    for key in params.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::Config(format!("`{name}` takes {}, not `{key}`", allowed.join(", "))));
        }
    }
    for key in allowed {
        if !params.contains_key(*key) {
            return Err(Error::Config(format!("`{name}` needs `{key}=<value>`")));
        }
    }
    Ok(params)
}

fn read_table(path: &str) -> Result<Table> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Config(format!("{path}: {e}")))?;
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Config(format!("{path}: {e}")))?;
        if columns.is_empty() {
            if record.len() != 2 && record.len() != 4 {
                return Err(Error::Config(format!("{path}: expected 2 or 4 columns, found {}", record.len())));
            }
            columns = vec![Vec::new(); record.len()];
        }
        for (col, field) in columns.iter_mut().zip(record.iter()) {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::Config(format!("{path}: row {}: `{field}` is not a number", line + 2)))?;
            col.push(v);
        }
    }
    let mut it = columns.into_iter();
    match (it.next(), it.next(), it.next(), it.next()) {
        (Some(x), Some(y), None, None) => Table::from_samples(x, y),
        (Some(x), Some(y), Some(dy), Some(d2y)) => Table::new(x, y, dy, d2y),
        _ => Err(Error::Config(format!("{path}: table is empty"))),
    }
}

impl MetricSource {
    pub fn build(&self, cfg: &ToleranceConfig) -> Result<RadialMetric> {
        let spec = self.spec.trim();
        let (family, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let boundary = self.boundary.as_deref().map(parse_boundary).transpose()?;
        let extras = !self.params.is_empty() || self.start.is_some() || boundary.is_some();
        let builtin = matches!(family, "flat" | "schwarzschild" | "cylinder" | "generated");
        if builtin && extras {
            return Err(Error::Config(format!("`{family}` metrics take no --param, --start or --boundary")));
        }
        let metric = match family {
            "flat" if rest.is_empty() => RadialMetric::flat(),
            "flat" => return Err(Error::Config("`flat` takes no parameters".into())),
            "schwarzschild" => RadialMetric::schwarzschild(family_params(family, rest, &["m"])?["m"])?,
            "cylinder" => RadialMetric::cylinder(family_params(family, rest, &["a"])?["a"])?,
            "generated" => {
                let p = family_params(family, rest, &["total", "center", "width", "a_min"])?;
                let mass = MassProfile { total: p["total"], center: p["center"], width: p["width"] };
                NonnegativeCurvatureMetric::new(mass, 0.0, p["a_min"])?.build(cfg)?.with_label(spec)
            }
            "expr" | "table" => {
                let (gauge, body) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Config(format!("expected {family}:<gauge>:<…>, got `{spec}`")))?;
                let gauge: Gauge = gauge.parse()?;
                let boundary = boundary.unwrap_or(BoundaryKind::None);
                if family == "expr" {
                    let mut params = ParamSet::new();
                    for (k, v) in &self.params {
                        params.insert(k, *v)?;
                    }
                    let start = self.start.unwrap_or(0.0);
                    RadialMetric::from_expr(gauge, parse(body)?, params, start, boundary, cfg)?.with_label(spec)
                } else {
                    if !self.params.is_empty() || self.start.is_some() {
                        return Err(Error::Config("table metrics take no --param or --start".into()));
                    }
                    RadialMetric::from_table(gauge, read_table(body)?, boundary, cfg)?.with_label(spec)
                }
            }
            other => {
                return Err(Error::Config(format!(
                    "unknown metric family `{other}` (expected flat, schwarzschild, cylinder, generated, expr or table)"
                )))
            }
        };
        metric.validate(cfg)?;
        Ok(metric)
    }
}
