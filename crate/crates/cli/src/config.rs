//! Run configuration: a versioned JSON document describing the system and the sweep.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use fraccurv_core::estimators::Engine;
use fraccurv_core::geometry::{Polygon, Region};
use fraccurv_core::ifs::{Ifs, Similarity};

pub const SCHEMA_VERSION: u64 = 1;

/// A contraction ratio as written in the file: a number or a fraction string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ratio {
    Number(f64),
    Text(String),
}

impl Ratio {
    pub fn value(&self) -> Option<f64> {
        match self {
            Ratio::Number(x) => Some(*x),
            Ratio::Text(s) => parse_fraction(s),
        }
    }
}

fn parse_fraction(s: &str) -> Option<f64> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().ok()?;
            let q: f64 = q.trim().parse().ok()?;
            (q != 0.0).then(|| p / q)
        }
        None => s.parse().ok(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub ratio: Ratio,
    /// Degrees, counter-clockwise.
    pub rotation: f64,
    pub reflect: bool,
    pub translation: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpenSetSpec {
    Interval([f64; 2]),
    Polygon(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineKind {
    #[serde(rename = "exact-1d")]
    Exact1d,
    Grid,
}

/// Validated configuration in canonical form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub schema: u64,
    pub name: String,
    pub ambient_dim: usize,
    pub maps: Vec<MapSpec>,
    pub open_set: OpenSetSpec,
    pub engine: EngineKind,
    /// Grid cells along the longer side of the scene.
    pub grid: usize,
    pub samples_per_decade: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_max: Option<f64>,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    pub reference_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub render_eps: Option<f64>,
}

/// Configuration problems, each with the path of the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigErrors(pub Vec<String>);

impl std::fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

const KNOWN: &[&str] = &[
    "schema",
    "name",
    "ambient_dim",
    "maps",
    "open_set",
    "engine",
    "grid",
    "samples_per_decade",
    "eps_min",
    "eps_max",
    "R",
    "delta",
    "level",
    "render_eps",
];

pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigErrors> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigErrors(vec![format!("{}: cannot read: {e}", path.display())]))?;
    parse_str(&text)
}

pub fn parse_str(text: &str) -> Result<RunConfig, ConfigErrors> {
    let value: Value = serde_json::from_str(text).map_err(|e| ConfigErrors(vec![format!("syntax: {e}")]))?;
    from_value(&value)
}

struct Collector {
    errors: Vec<String>,
}

impl Collector {
    fn err(&mut self, path: &str, msg: impl std::fmt::Display) {
        self.errors.push(format!("{path}: {msg}"));
    }

    fn number(&mut self, obj: &Map<String, Value>, key: &str, path: &str) -> Option<f64> {
        match obj.get(key) {
            None => None,
            Some(v) => match v.as_f64() {
                Some(x) if x.is_finite() => Some(x),
                _ => {
                    self.err(path, "expected a finite number");
                    None
                }
            },
        }
    }

    fn count(&mut self, obj: &Map<String, Value>, key: &str, path: &str) -> Option<usize> {
        match obj.get(key) {
            None => None,
            Some(v) => match v.as_u64() {
                Some(x) => Some(x as usize),
                None => {
                    self.err(path, "expected a non-negative integer");
                    None
                }
            },
        }
    }
}

fn from_value(value: &Value) -> Result<RunConfig, ConfigErrors> {
    let mut c = Collector { errors: Vec::new() };
    let Some(obj) = value.as_object() else {
        return Err(ConfigErrors(vec!["<root>: expected an object".into()]));
    };
    for key in obj.keys() {
        if !KNOWN.contains(&key.as_str()) {
            c.err(key, "unknown field");
        }
    }
    match obj.get("schema").and_then(Value::as_u64) {
        Some(SCHEMA_VERSION) => {}
        Some(v) => c.err("schema", format!("unsupported version {v} (expected {SCHEMA_VERSION})")),
        None => c.err("schema", "missing or not an integer"),
    }
    let name = match obj.get("name") {
        None => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => {
            c.err("name", "expected a string");
            String::new()
        }
    };
    let dim = match c.count(obj, "ambient_dim", "ambient_dim") {
        Some(d @ (1 | 2)) => d,
        Some(d) => {
            c.err("ambient_dim", format!("must be 1 or 2, got {d}"));
            0
        }
        None => {
            if !obj.contains_key("ambient_dim") {
                c.err("ambient_dim", "missing");
            }
            0
        }
    };

    let mut maps = Vec::new();
    match obj.get("maps") {
        Some(Value::Array(list)) if !list.is_empty() => {
            for (i, m) in list.iter().enumerate() {
                let path = format!("maps[{i}]");
                let Some(m) = m.as_object() else {
                    c.err(&path, "expected an object");
                    continue;
                };
                for key in m.keys() {
                    if !["ratio", "rotation", "reflect", "translation"].contains(&key.as_str()) {
                        c.err(&format!("{path}.{key}"), "unknown field");
                    }
                }
                let ratio = match m.get("ratio") {
                    Some(Value::Number(n)) => n.as_f64().map(Ratio::Number),
                    Some(Value::String(s)) => Some(Ratio::Text(s.clone())),
                    Some(_) => None,
                    None => {
                        c.err(&format!("{path}.ratio"), "missing");
                        None
                    }
                };
                if m.contains_key("ratio") {
                    match ratio.as_ref().and_then(Ratio::value) {
                        Some(r) if r > 0.0 && r < 1.0 => {}
                        Some(r) => c.err(&format!("{path}.ratio"), format!("must lie in (0, 1), got {r}")),
                        None => c.err(&format!("{path}.ratio"), "expected a number or a fraction like \"1/3\""),
                    }
                }
                let rotation = c.number(m, "rotation", &format!("{path}.rotation")).unwrap_or(0.0);
                let reflect = match m.get("reflect") {
                    None => false,
                    Some(Value::Bool(b)) => *b,
                    Some(_) => {
                        c.err(&format!("{path}.reflect"), "expected a boolean");
                        false
                    }
                };
                let translation = match m.get("translation") {
                    None => {
                        c.err(&format!("{path}.translation"), "missing");
                        Vec::new()
                    }
                    Some(Value::Number(n)) => vec![n.as_f64().unwrap_or(f64::NAN)],
                    Some(Value::Array(a)) => a.iter().map(|x| x.as_f64().unwrap_or(f64::NAN)).collect(),
                    Some(_) => {
                        c.err(&format!("{path}.translation"), "expected a number or an array");
                        Vec::new()
                    }
                };
                if !translation.is_empty() {
                    if translation.iter().any(|x| !x.is_finite()) {
                        c.err(&format!("{path}.translation"), "entries must be finite numbers");
                    } else if dim != 0 && translation.len() != dim {
                        c.err(
                            &format!("{path}.translation"),
                            format!("expected {dim} component(s), got {}", translation.len()),
                        );
                    }
                }
                if dim == 1 && rotation != 0.0 {
                    c.err(&format!("{path}.rotation"), "must be 0 on the line");
                }
                if let Some(ratio) = ratio {
                    maps.push(MapSpec {
                        ratio,
                        rotation,
                        reflect,
                        translation,
                    });
                }
            }
        }
        Some(Value::Array(_)) => c.err("maps", "at least one map is required"),
        Some(_) => c.err("maps", "expected an array"),
        None => c.err("maps", "missing"),
    }

    let open_set = match obj.get("open_set").and_then(Value::as_object) {
        Some(o) if o.len() == 1 && o.contains_key("interval") => {
            let v: Vec<f64> = o["interval"]
                .as_array()
                .map(|a| a.iter().filter_map(Value::as_f64).collect())
                .unwrap_or_default();
            if v.len() != 2 || v[0] >= v[1] {
                c.err("open_set.interval", "expected [a, b] with a < b");
                None
            } else {
                if dim == 2 {
                    c.err("open_set", "an interval needs ambient_dim 1");
                }
                Some(OpenSetSpec::Interval([v[0], v[1]]))
            }
        }
        Some(o) if o.len() == 1 && o.contains_key("polygon") => {
            let pts: Option<Vec<[f64; 2]>> = o["polygon"].as_array().map(|a| {
                a.iter()
                    .filter_map(|p| {
                        let q = p.as_array()?;
                        (q.len() == 2).then(|| Some([q[0].as_f64()?, q[1].as_f64()?]))?
                    })
                    .collect()
            });
            match pts {
                Some(p) if p.len() >= 3 && p.len() == o["polygon"].as_array().map_or(0, |a| a.len()) => {
                    if dim == 1 {
                        c.err("open_set", "a polygon needs ambient_dim 2");
                    }
                    Some(OpenSetSpec::Polygon(p))
                }
                _ => {
                    c.err("open_set.polygon", "expected at least three [x, y] vertices");
                    None
                }
            }
        }
        _ => {
            c.err(
                "open_set",
                "expected {\"interval\": [a, b]} or {\"polygon\": [[x, y], ...]}",
            );
            None
        }
    };

    let engine = match obj.get("engine").map(|v| v.as_str()) {
        None => {
            if dim == 1 {
                EngineKind::Exact1d
            } else {
                EngineKind::Grid
            }
        }
        Some(Some("exact-1d")) => {
            if dim == 2 {
                c.err("engine", "exact-1d needs ambient_dim 1");
            }
            EngineKind::Exact1d
        }
        Some(Some("grid")) => EngineKind::Grid,
        Some(_) => {
            c.err("engine", "expected \"exact-1d\" or \"grid\"");
            EngineKind::Grid
        }
    };
    let grid = c.count(obj, "grid", "grid").unwrap_or(1024);
    if grid < 32 {
        c.err("grid", format!("must be at least 32 cells, got {grid}"));
    }
    let spd = c.count(obj, "samples_per_decade", "samples_per_decade").unwrap_or(64);
    if spd == 0 {
        c.err("samples_per_decade", "must be positive");
    }
    let mut positive = |key: &str| {
        let v = c.number(obj, key, key);
        if let Some(x) = v {
            if x <= 0.0 {
                c.err(key, "must be positive");
            }
        }
        v
    };
    let eps_min = positive("eps_min");
    let eps_max = positive("eps_max");
    let reference_radius = positive("R");
    let delta = positive("delta");
    let render_eps = positive("render_eps");
    if let (Some(a), Some(b)) = (eps_min, eps_max) {
        if a >= b {
            c.err("eps_min", "must be smaller than eps_max");
        }
    }
    let level = c.count(obj, "level", "level");

    if !c.errors.is_empty() {
        return Err(ConfigErrors(c.errors));
    }
    let cfg = RunConfig {
        schema: SCHEMA_VERSION,
        name,
        ambient_dim: dim,
        maps,
        open_set: open_set.expect("validated"),
        engine,
        grid,
        samples_per_decade: spd,
        eps_min,
        eps_max,
        reference_radius,
        delta,
        level,
        render_eps,
    };
    // geometric consistency (open set condition, admissible R)
    if let Err(e) = cfg.build_ifs() {
        return Err(ConfigErrors(vec![format!("maps/open_set: {e}")]));
    }
    Ok(cfg)
}

impl RunConfig {
    /// Canonical serialization (pretty JSON, fixed field order, trailing newline).
    pub fn to_canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn build_ifs(&self) -> fraccurv_core::Result<Ifs> {
        let mut maps = Vec::with_capacity(self.maps.len());
        for m in &self.maps {
            let r = m.ratio.value().unwrap_or(f64::NAN);
            let s = if self.ambient_dim == 1 {
                Similarity::linear(r, m.reflect, m.translation[0])?
            } else {
                let t = [m.translation[0], m.translation[1]];
                Similarity::planar(r, m.rotation.to_radians(), m.reflect, t)?
            };
            maps.push(s);
        }
        let open = match &self.open_set {
            OpenSetSpec::Interval([a, b]) => Region::Interval(*a, *b),
            OpenSetSpec::Polygon(p) => Region::Polygon(Polygon::new(p.clone())?),
        };
        let ifs = Ifs::new(self.ambient_dim, maps, open)?;
        match self.reference_radius {
            Some(r) => ifs.with_reference_radius(r),
            None => Ok(ifs),
        }
    }

    pub fn engine(&self) -> Engine {
        match self.engine {
            EngineKind::Exact1d => Engine::Exact1d,
            EngineKind::Grid => Engine::Grid { cells: self.grid },
        }
    }
}
