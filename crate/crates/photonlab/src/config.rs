//! Scenario configuration: an INI-style document of `[section]` headers and
//! `key = value` lines. Values are numbers, triples `(a,b,c)`, booleans or
//! bare enum words; `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use photonlab_core::modes::{Dimension, KGrid, Polarization};
use photonlab_core::vector::Vec3;
use thiserror::Error;

use crate::units::Units;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Semantic { field: String, message: String },
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Syntax { line, column, message: message.into() }
}

fn semantic(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Semantic { field: field.to_string(), message: message.into() }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioKind {
    Verify,
    Packet3d,
    Helicity,
    Gauge,
    Boost,
    Medium1d,
    Lifecycle1d,
    Fock,
}

impl ScenarioKind {
    const ALL: [ScenarioKind; 8] = [
        ScenarioKind::Verify,
        ScenarioKind::Packet3d,
        ScenarioKind::Helicity,
        ScenarioKind::Gauge,
        ScenarioKind::Boost,
        ScenarioKind::Medium1d,
        ScenarioKind::Lifecycle1d,
        ScenarioKind::Fock,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Verify => "verify",
            ScenarioKind::Packet3d => "packet3d",
            ScenarioKind::Helicity => "helicity",
            ScenarioKind::Gauge => "gauge",
            ScenarioKind::Boost => "boost",
            ScenarioKind::Medium1d => "medium1d",
            ScenarioKind::Lifecycle1d => "lifecycle1d",
            ScenarioKind::Fock => "fock",
        }
    }

    fn from_name(s: &str) -> Option<ScenarioKind> {
        ScenarioKind::ALL.into_iter().find(|k| k.name() == s)
    }

    fn keys(self) -> &'static [&'static str] {
        const PACKET: &[&str] = &["n_k", "dk", "k0", "sigma", "lambda", "n_x", "t_start", "t_stop", "steps"];
        match self {
            ScenarioKind::Verify => &["broken_measure", "beta", "fock_n"],
            ScenarioKind::Packet3d => PACKET,
            ScenarioKind::Helicity => {
                &["n_k", "dk", "k0", "sigma", "lambda", "n_x", "t_start", "t_stop", "steps", "dimension"]
            }
            ScenarioKind::Gauge => {
                &["n_k", "dk", "k0", "sigma", "lambda", "n_x", "t_start", "t_stop", "steps", "shift"]
            }
            ScenarioKind::Boost => &["n_k", "dk", "k0", "sigma", "lambda", "n_x", "t_start", "t_stop", "steps", "beta"],
            ScenarioKind::Medium1d => {
                &["n_k", "dk", "k0", "sigma", "lambda", "n_x", "t_start", "t_stop", "steps", "epsilon_rel", "mu_rel"]
            }
            ScenarioKind::Lifecycle1d => {
                &["epsilon_rel", "mu_rel", "n_z", "z_min", "z_max", "t_start", "t_stop", "steps"]
            }
            ScenarioKind::Fock => &["n"],
        }
    }
}

const SCENARIO_KEYS: &[&str] = &["kind", "units", "output", "seed"];
const EVENT_KEYS: &[&str] = &["z", "width", "time", "duration", "strength"];
const TOLERANCE_KEYS: &[&str] = &[
    "norm",
    "order",
    "continuity_rel",
    "helicity",
    "longitudinal",
    "gauge_fields",
    "gauge_norm",
    "boost",
    "medium_pointwise",
    "medium_speed",
    "vacuum",
    "lifecycle_norm",
    "cone",
    "fock",
];

/// A parsed value with the column where it started.
#[derive(Clone, Debug, PartialEq)]
enum Value {
    Number(f64),
    Triple([f64; 3]),
    Word(String),
}

#[derive(Clone, Debug)]
struct Entry {
    value: Value,
    line: usize,
    column: usize,
}

#[derive(Clone, Debug, Default)]
struct Section {
    name: String,
    line: usize,
    entries: BTreeMap<String, Entry>,
}

fn parse_number(s: &str) -> Option<f64> {
    let v: f64 = s.parse().ok()?;
    v.is_finite().then_some(v)
}

fn parse_value(raw: &str, line: usize, column: usize) -> Result<Value, ConfigError> {
    if let Some(inner) = raw.strip_prefix('(') {
        let inner = inner.strip_suffix(')').ok_or_else(|| syntax(line, column, "unterminated triple, expected ')'"))?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(syntax(line, column, format!("a triple needs three components, found {}", parts.len())));
        }
        let mut out = [0.0; 3];
        for (slot, p) in out.iter_mut().zip(&parts) {
            *slot = parse_number(p).ok_or_else(|| syntax(line, column, format!("invalid number '{p}' in triple")))?;
        }
        return Ok(Value::Triple(out));
    }
    if let Some(v) = parse_number(raw) {
        return Ok(Value::Number(v));
    }
    let word_ok = raw.chars().all(|c| c.is_ascii_alphanumeric() || "_-+./".contains(c));
    if raw.is_empty() || !word_ok {
        return Err(syntax(line, column, format!("cannot parse value '{raw}'")));
    }
    Ok(Value::Word(raw.to_string()))
}

fn allowed_keys(section: &str) -> Option<&'static [&'static str]> {
    match section {
        "scenario" => Some(SCENARIO_KEYS),
        "emitter" | "detector" => Some(EVENT_KEYS),
        "tolerances" => Some(TOLERANCE_KEYS),
        other => ScenarioKind::from_name(other).map(|k| k.keys()),
    }
}

fn tokenize(text: &str) -> Result<Vec<Section>, ConfigError> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = match raw_line.find('#') {
            Some(p) => &raw_line[..p],
            None => raw_line,
        };
        let lead = content.len() - content.trim_start().len();
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = |byte_offset: usize| raw_line[..byte_offset].chars().count() + 1;
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name =
                rest.strip_suffix(']').ok_or_else(|| syntax(line_no, col(lead), "section header missing ']'"))?.trim();
            if allowed_keys(name).is_none() {
                return Err(syntax(line_no, col(lead + 1), format!("unknown section [{name}]")));
            }
            sections.push(Section { name: name.to_string(), line: line_no, entries: BTreeMap::new() });
            continue;
        }
        let eq =
            trimmed.find('=').ok_or_else(|| syntax(line_no, col(lead), "expected 'key = value' or '[section]'"))?;
        let key = trimmed[..eq].trim();
        let value_raw = trimmed[eq + 1..].trim();
        let value_offset = lead + eq + 1 + (trimmed[eq + 1..].len() - trimmed[eq + 1..].trim_start().len());
        let section =
            sections.last_mut().ok_or_else(|| syntax(line_no, col(lead), "key appears before any [section]"))?;
        let allowed = allowed_keys(&section.name).unwrap_or(&[]);
        if !allowed.contains(&key) {
            return Err(syntax(line_no, col(lead), format!("unknown key '{key}' in [{}]", section.name)));
        }
        if section.entries.contains_key(key) {
            return Err(syntax(line_no, col(lead), format!("duplicate key '{key}'")));
        }
        if value_raw.is_empty() {
            return Err(syntax(line_no, col(value_offset), format!("missing value for '{key}'")));
        }
        let value = parse_value(value_raw, line_no, col(value_offset))?;
        section.entries.insert(key.to_string(), Entry { value, line: line_no, column: col(value_offset) });
    }
    Ok(sections)
}

/// Typed access to one section's entries.
struct Reader<'a> {
    section: Option<&'a Section>,
    prefix: String,
}

impl<'a> Reader<'a> {
    fn new(section: Option<&'a Section>, prefix: &str) -> Reader<'a> {
        Reader { section, prefix: prefix.to_string() }
    }

    fn entry(&self, key: &str) -> Option<&'a Entry> {
        self.section.and_then(|s| s.entries.get(key))
    }

    fn type_error(&self, key: &str, e: &Entry, expected: &str) -> ConfigError {
        syntax(e.line, e.column, format!("{}{key}: expected {expected}", self.prefix))
    }

    fn number(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.entry(key) {
            None => Ok(default),
            Some(e) => match e.value {
                Value::Number(v) => Ok(v),
                _ => Err(self.type_error(key, e, "a number")),
            },
        }
    }

    fn opt_number(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.entry(key).map(|_| self.number(key, 0.0)).transpose()
    }

    fn integer(&self, key: &str, default: u64) -> Result<u64, ConfigError> {
        match self.entry(key) {
            None => Ok(default),
            Some(e) => match e.value {
                Value::Number(v) if v >= 0.0 && v.fract() == 0.0 && v < 9.0e15 => Ok(v as u64),
                _ => Err(self.type_error(key, e, "a non-negative integer")),
            },
        }
    }

    fn triple(&self, key: &str, default: [f64; 3]) -> Result<[f64; 3], ConfigError> {
        match self.entry(key) {
            None => Ok(default),
            Some(e) => match e.value {
                Value::Triple(v) => Ok(v),
                _ => Err(self.type_error(key, e, "a triple (a,b,c)")),
            },
        }
    }

    fn word(&self, key: &str) -> Option<(&'a str, &'a Entry)> {
        self.entry(key).map(|e| match &e.value {
            Value::Word(w) => (w.as_str(), e),
            Value::Number(_) | Value::Triple(_) => ("", e),
        })
    }

    fn boolean(&self, key: &str, default: bool) -> Result<bool, ConfigError> {
        match self.word(key) {
            None => Ok(default),
            Some(("true", _)) => Ok(true),
            Some(("false", _)) => Ok(false),
            Some((_, e)) => Err(self.type_error(key, e, "true or false")),
        }
    }

    fn polarization(&self, key: &str) -> Result<Polarization, ConfigError> {
        let Some(e) = self.entry(key) else {
            return Ok(Polarization::Plus);
        };
        match &e.value {
            Value::Number(v) if *v == 1.0 => Ok(Polarization::Plus),
            Value::Number(v) if *v == -1.0 => Ok(Polarization::Minus),
            Value::Word(w) if w == "+1" => Ok(Polarization::Plus),
            Value::Word(w) if w == "par" => Ok(Polarization::Parallel),
            _ => Err(self.type_error(key, e, "+1, -1 or par")),
        }
    }
}

/// Wavepacket and sampling parameters (natural units).
#[derive(Clone, Debug, PartialEq)]
pub struct PacketConfig {
    pub dimension: Dimension,
    pub n_k: usize,
    pub dk: f64,
    pub k0: Vec3,
    pub sigma: f64,
    pub lambda: Polarization,
    pub n_x: usize,
}

impl PacketConfig {
    pub fn kgrid(&self) -> KGrid {
        KGrid::new(self.dimension, self.n_k, self.dk, self.k0, true).expect("validated at parse time")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimeConfig {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl TimeConfig {
    pub fn samples(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let dt = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.start + i as f64 * dt).collect()
    }

    pub fn step(&self) -> f64 {
        if self.steps > 1 {
            (self.stop - self.start) / (self.steps - 1) as f64
        } else {
            0.0
        }
    }
}

/// An emitter or detector; unset detector fields are filled to match the emitter.
#[derive(Clone, Debug, PartialEq)]
pub struct EventConfig {
    pub z: f64,
    pub width: Option<f64>,
    pub time: Option<f64>,
    pub duration: Option<f64>,
    pub strength: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LineConfig {
    pub n_z: usize,
    pub z_min: f64,
    pub z_max: f64,
}

impl LineConfig {
    pub fn spacing(&self) -> f64 {
        (self.z_max - self.z_min) / self.n_z as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub broken_measure: bool,
    pub beta: f64,
    pub fock_dim: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { broken_measure: false, beta: 0.3, fock_dim: 32 }
    }
}

/// Tolerances of the verification suite.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    pub norm: f64,
    pub order: f64,
    pub continuity_rel: f64,
    pub helicity: f64,
    pub longitudinal: f64,
    pub gauge_fields: f64,
    pub gauge_norm: f64,
    pub boost: f64,
    pub medium_pointwise: f64,
    pub medium_speed: f64,
    pub vacuum: f64,
    pub lifecycle_norm: f64,
    pub cone: f64,
    pub fock: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            norm: 1e-6,
            order: 1.9,
            continuity_rel: 1e-4,
            helicity: 1e-10,
            longitudinal: 1e-12,
            gauge_fields: 1e-12,
            gauge_norm: 1e-10,
            boost: 2e-2,
            medium_pointwise: 1e-12,
            medium_speed: 1e-8,
            vacuum: 1e-14,
            lifecycle_norm: 1e-6,
            cone: 1e-12,
            fock: 1e-14,
        }
    }
}

impl Tolerances {
    fn slots(&mut self) -> [(&'static str, &mut f64); 14] {
        [
            ("norm", &mut self.norm),
            ("order", &mut self.order),
            ("continuity_rel", &mut self.continuity_rel),
            ("helicity", &mut self.helicity),
            ("longitudinal", &mut self.longitudinal),
            ("gauge_fields", &mut self.gauge_fields),
            ("gauge_norm", &mut self.gauge_norm),
            ("boost", &mut self.boost),
            ("medium_pointwise", &mut self.medium_pointwise),
            ("medium_speed", &mut self.medium_speed),
            ("vacuum", &mut self.vacuum),
            ("lifecycle_norm", &mut self.lifecycle_norm),
            ("cone", &mut self.cone),
            ("fock", &mut self.fock),
        ]
    }

    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        let mut copy = self.clone();
        copy.slots().into_iter().map(|(k, v)| (k, *v)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub units: Units,
    pub output: PathBuf,
    pub seed: u64,
    pub packet: PacketConfig,
    pub times: TimeConfig,
    pub epsilon_rel: f64,
    pub mu_rel: f64,
    pub beta: f64,
    pub shift: f64,
    pub fock_dim: usize,
    pub line: LineConfig,
    pub emitters: Vec<EventConfig>,
    pub detectors: Vec<EventConfig>,
    pub verify: VerifyConfig,
    pub tolerances: Tolerances,
}

impl ScenarioConfig {
    /// The configuration used when `photonlab verify` runs without a file.
    pub fn default_verify() -> ScenarioConfig {
        parse_config("[verify]\n").expect("default configuration is valid")
    }

    /// Every resolved setting, one `key = value` per line, for report headers.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        let p = &self.packet;
        let k = |v: Vec3| format!("({}, {}, {})", v.x(), v.y(), v.z());
        let _ = writeln!(s, "kind = {}", self.kind.name());
        let _ = writeln!(s, "units = {}", self.units.name());
        let _ = writeln!(s, "output = {}", self.output.display());
        let _ = writeln!(s, "seed = {}", self.seed);
        match self.kind {
            ScenarioKind::Verify => {
                let _ = writeln!(s, "broken_measure = {}", self.verify.broken_measure);
                let _ = writeln!(s, "beta = {}", self.verify.beta);
                let _ = writeln!(s, "fock_n = {}", self.verify.fock_dim);
                for (name, v) in self.tolerances.entries() {
                    let _ = writeln!(s, "tolerance.{name} = {v:e}");
                }
            }
            ScenarioKind::Fock => {
                let _ = writeln!(s, "n = {}", self.fock_dim);
            }
            ScenarioKind::Lifecycle1d => {
                let _ = writeln!(s, "epsilon_rel = {}", self.epsilon_rel);
                let _ = writeln!(s, "mu_rel = {}", self.mu_rel);
                let _ = writeln!(s, "n_z = {}", self.line.n_z);
                let _ = writeln!(s, "z_min = {}", self.line.z_min);
                let _ = writeln!(s, "z_max = {}", self.line.z_max);
                let _ = writeln!(s, "times = {} .. {} ({} steps)", self.times.start, self.times.stop, self.times.steps);
                for e in &self.emitters {
                    let _ = writeln!(s, "emitter = {e:?}");
                }
                for d in &self.detectors {
                    let _ = writeln!(s, "detector = {d:?}");
                }
            }
            _ => {
                let dim = if p.dimension == Dimension::One { 1 } else { 3 };
                let _ = writeln!(s, "dimension = {dim}");
                let _ = writeln!(s, "n_k = {}", p.n_k);
                let _ = writeln!(s, "dk = {}", p.dk);
                let _ = writeln!(s, "k0 = {}", k(p.k0));
                let _ = writeln!(s, "sigma = {}", p.sigma);
                let _ = writeln!(s, "lambda = {}", crate::output::lambda_label(p.lambda));
                let _ = writeln!(s, "n_x = {}", p.n_x);
                let _ = writeln!(s, "times = {} .. {} ({} steps)", self.times.start, self.times.stop, self.times.steps);
                match self.kind {
                    ScenarioKind::Boost => {
                        let _ = writeln!(s, "beta = {}", self.beta);
                    }
                    ScenarioKind::Gauge => {
                        let _ = writeln!(s, "shift = {}", self.shift);
                    }
                    ScenarioKind::Medium1d => {
                        let _ = writeln!(s, "epsilon_rel = {}", self.epsilon_rel);
                        let _ = writeln!(s, "mu_rel = {}", self.mu_rel);
                    }
                    _ => {}
                }
            }
        }
        s
    }
}

fn resolve_kind(sections: &[Section]) -> Result<(ScenarioKind, Option<&Section>), ConfigError> {
    let meta = sections.iter().find(|s| s.name == "scenario");
    let scenario_sections: Vec<&Section> =
        sections.iter().filter(|s| ScenarioKind::from_name(&s.name).is_some()).collect();
    if scenario_sections.len() > 1 {
        let s = scenario_sections[1];
        return Err(syntax(s.line, 1, format!("a second scenario section [{}] is not allowed", s.name)));
    }
    let from_section = scenario_sections.first().map(|s| ScenarioKind::from_name(&s.name).expect("filtered"));
    let declared = match meta.map(|m| Reader::new(Some(m), "scenario.")).as_ref().and_then(|r| r.word("kind")) {
        None => None,
        Some((w, e)) => Some(
            ScenarioKind::from_name(w)
                .ok_or_else(|| syntax(e.line, e.column, format!("unknown scenario kind '{w}'")))?,
        ),
    };
    let kind = match (declared, from_section) {
        (Some(a), Some(b)) if a != b => {
            return Err(semantic("scenario.kind", format!("kind '{}' conflicts with section [{}]", a.name(), b.name())))
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => {
            return Err(semantic("scenario.kind", "no scenario kind given and no scenario section present"))
        }
    };
    Ok((kind, scenario_sections.first().copied()))
}

fn positive(field: &str, v: f64) -> Result<f64, ConfigError> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(semantic(field, format!("{field} must be > 0")))
    }
}

fn count(field: &str, v: u64, min: u64) -> Result<usize, ConfigError> {
    if v >= min {
        Ok(v as usize)
    } else {
        Err(semantic(field, format!("{field} must be ≥ {min}")))
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let sections = tokenize(text)?;
    for name in ["scenario", "tolerances"] {
        if let Some(s) = sections.iter().filter(|s| s.name == name).nth(1) {
            return Err(syntax(s.line, 1, format!("section [{name}] appears more than once")));
        }
    }
    let (kind, body) = resolve_kind(&sections)?;
    let meta = Reader::new(sections.iter().find(|s| s.name == "scenario"), "scenario.");
    let r = Reader::new(body, "");

    let units = match meta.word("units") {
        None => Units::Natural,
        Some((w, e)) => Units::from_name(w)
            .ok_or_else(|| syntax(e.line, e.column, format!("unknown units '{w}', expected natural or si")))?,
    };
    let output = match meta.entry("output") {
        None => PathBuf::from("photonlab-out"),
        Some(e) => match &e.value {
            Value::Word(w) => PathBuf::from(w),
            _ => return Err(syntax(e.line, e.column, "output: expected a path")),
        },
    };
    let seed = meta.integer("seed", 0)?;
    let time_in = units.time_to_natural();

    let one_d = match kind {
        ScenarioKind::Medium1d => true,
        ScenarioKind::Helicity => match r.entry("dimension") {
            None => true,
            Some(e) => match e.value {
                Value::Number(1.0) => true,
                Value::Number(3.0) => false,
                _ => return Err(r.type_error("dimension", e, "1 or 3")),
            },
        },
        _ => false,
    };
    let (n_k_def, dk_def, n_x_def) = if one_d { (64, 0.1, 1024) } else { (16, 0.25, 32) };
    let dimension = if one_d { Dimension::One } else { Dimension::Three };
    let k0 = Vec3(r.triple("k0", [0.0, 0.0, 4.0])?);
    if one_d && (k0.x() != 0.0 || k0.y() != 0.0) {
        return Err(semantic("k0", "k0 must lie on the z axis for a 1D scenario"));
    }
    let packet = PacketConfig {
        dimension,
        n_k: count("n_k", r.integer("n_k", n_k_def)?, 1)?,
        dk: positive("dk", r.number("dk", dk_def)?)?,
        k0,
        sigma: positive("sigma", r.number("sigma", 0.5)?)?,
        lambda: r.polarization("lambda")?,
        n_x: count("n_x", r.integer("n_x", n_x_def)?, 1)?,
    };
    let is_packet = !matches!(kind, ScenarioKind::Verify | ScenarioKind::Fock | ScenarioKind::Lifecycle1d);
    if is_packet {
        KGrid::new(packet.dimension, packet.n_k, packet.dk, packet.k0, true)
            .map_err(|e| semantic("n_k", format!("invalid k-grid: {e}")))?;
        if packet.n_x < packet.n_k {
            return Err(semantic("n_x", "n_x must be ≥ n_k so the box resolves every mode difference"));
        }
    }

    let (t_start_def, t_stop_def, steps_def) = match kind {
        ScenarioKind::Lifecycle1d => (-4.0, 72.0, 400),
        _ => (0.0, 10.0, 3),
    };
    let scale_time = |v: f64| if r.entry("t_start").is_some() || r.entry("t_stop").is_some() { v * time_in } else { v };
    let times = TimeConfig {
        start: scale_time(r.number("t_start", t_start_def)?),
        stop: scale_time(r.number("t_stop", t_stop_def)?),
        steps: count("steps", r.integer("steps", steps_def)?, 1)?,
    };
    if times.steps > 1 && !(times.stop > times.start) {
        return Err(semantic("t_stop", "t_stop must be > t_start"));
    }
    if kind == ScenarioKind::Lifecycle1d && times.steps < 2 {
        return Err(semantic("steps", "steps must be ≥ 2"));
    }

    let default_eps = if matches!(kind, ScenarioKind::Medium1d | ScenarioKind::Lifecycle1d) { 2.0 } else { 1.0 };
    let epsilon_rel = r.number("epsilon_rel", default_eps)?;
    if !(epsilon_rel >= 1.0) {
        return Err(semantic("epsilon_rel", "epsilon_rel must be ≥ 1"));
    }
    let mu_rel = positive("mu_rel", r.number("mu_rel", 1.0)?)?;

    let beta = r.number("beta", 0.3)?;
    if !(beta.abs() < 1.0) {
        return Err(semantic("beta", "beta must satisfy |beta| < 1"));
    }
    let shift = r.number("shift", 1.0)?;
    let fock_dim = count("n", r.integer("n", 32)?, 2)?;
    if fock_dim > 64 {
        return Err(semantic("n", "n must be ≤ 64"));
    }

    let line = LineConfig {
        n_z: count("n_z", r.integer("n_z", 2048)?, 3)?,
        z_min: r.number("z_min", -10.0)?,
        z_max: r.number("z_max", 60.0)?,
    };
    if !(line.z_max > line.z_min) {
        return Err(semantic("z_max", "z_max must be > z_min"));
    }

    let mut emitters = Vec::new();
    let mut detectors = Vec::new();
    for s in sections.iter().filter(|s| s.name == "emitter" || s.name == "detector") {
        let prefix = format!("{}.", s.name);
        let er = Reader::new(Some(s), &prefix);
        let field = |k: &str| format!("{prefix}{k}");
        let z = match er.opt_number("z")? {
            Some(z) => z,
            None if s.name == "emitter" => 0.0,
            None => return Err(semantic(&field("z"), "detector position z is required")),
        };
        let opt_pos = |k: &str, scale: f64| -> Result<Option<f64>, ConfigError> {
            match er.opt_number(k)? {
                Some(v) if v > 0.0 => Ok(Some(v * scale)),
                Some(_) => Err(semantic(&field(k), format!("{} must be > 0", field(k)))),
                None => Ok(None),
            }
        };
        let ev = EventConfig {
            z,
            width: opt_pos("width", 1.0)?,
            time: er.opt_number("time")?.map(|t| t * time_in),
            duration: opt_pos("duration", time_in)?,
            strength: er.number("strength", 1.0)?,
        };
        if !(ev.strength >= 0.0) {
            return Err(semantic(&field("strength"), format!("{} must be ≥ 0", field("strength"))));
        }
        if s.name == "emitter" {
            emitters.push(ev);
        } else {
            detectors.push(ev);
        }
    }
    if kind == ScenarioKind::Lifecycle1d {
        let total: f64 = emitters.iter().map(|e| e.strength).sum();
        if total > 1.0 + 1e-12 {
            return Err(semantic(
                "emitter.strength",
                format!("emitter strengths sum to {total}, more than one photon"),
            ));
        }
        if emitters.len() > 1 || detectors.len() > 1 {
            return Err(semantic("emitter", "lifecycle1d takes at most one emitter and one detector"));
        }
    }

    let vr = Reader::new(sections.iter().find(|s| s.name == ScenarioKind::Verify.name()), "");
    let verify = VerifyConfig {
        broken_measure: vr.boolean("broken_measure", false)?,
        beta: if kind == ScenarioKind::Verify { beta } else { 0.3 },
        fock_dim: {
            let n = count("fock_n", vr.integer("fock_n", 32)?, 3)?;
            if n > 64 {
                return Err(semantic("fock_n", "fock_n must be ≤ 64"));
            }
            n
        },
    };

    let mut tolerances = Tolerances::default();
    if let Some(ts) = sections.iter().find(|s| s.name == "tolerances") {
        let tr = Reader::new(Some(ts), "tolerances.");
        for (name, slot) in tolerances.slots() {
            let v = tr.number(name, *slot)?;
            if !(v >= 0.0) {
                return Err(semantic(&format!("tolerances.{name}"), "tolerances must be ≥ 0"));
            }
            *slot = v;
        }
    }

    Ok(ScenarioConfig {
        kind,
        units,
        output,
        seed,
        packet,
        times,
        epsilon_rel,
        mu_rel,
        beta,
        shift,
        fock_dim,
        line,
        emitters,
        detectors,
        verify,
        tolerances,
    })
}
