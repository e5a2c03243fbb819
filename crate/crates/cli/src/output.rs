//! Pattern CSV and run reports.

use std::io::{self, Write};

use chanint::InterferencePattern;
use serde_json::{json, Map, Value};

/// `x` rounded to `digits` significant digits, printed in shortest form.
pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .expect("formatted float parses");
    format!("{rounded}")
}

/// Fixed 12-decimal rendering used in reports; never prints `-0`.
pub fn fixed12(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// Writes `phi,p0` rows in ascending phase, 15 significant digits, LF
/// line endings.
pub fn write_pattern_csv<W: Write>(p: &InterferencePattern, mut w: W) -> io::Result<()> {
    w.write_all(b"phi,p0\n")?;
    for (phi, p0) in p.iter() {
        writeln!(w, "{},{}", significant(phi, 15), significant(p0, 15))?;
    }
    w.flush()
}

pub fn emit_pattern_csv(p: &InterferencePattern, path: &std::path::Path) -> io::Result<()> {
    let file = std::fs::File::create(path)?;
    write_pattern_csv(p, io::BufWriter::new(file))
}

/// A metric value, scalar or complex vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    Real(f64),
    Flag(bool),
    Count(usize),
    Vector(Vec<(f64, f64)>),
    Text(String),
}

impl Metric {
    fn render(&self) -> String {
        match self {
            Metric::Real(x) => fixed12(*x),
            Metric::Flag(b) => b.to_string(),
            Metric::Count(n) => n.to_string(),
            Metric::Vector(v) => {
                let parts: Vec<String> = v
                    .iter()
                    .map(|(re, im)| format!("[{},{}]", fixed12(*re), fixed12(*im)))
                    .collect();
                format!("[{}]", parts.join(","))
            }
            Metric::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        let num = |x: f64| -> Value {
            let rounded: f64 = fixed12(x).parse().expect("fixed decimal parses");
            json!(rounded)
        };
        match self {
            Metric::Real(x) => num(*x),
            Metric::Flag(b) => json!(b),
            Metric::Count(n) => json!(n),
            Metric::Vector(v) => Value::Array(
                v.iter()
                    .map(|(re, im)| json!([num(*re), num(*im)]))
                    .collect(),
            ),
            Metric::Text(s) => json!(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

/// Everything a subcommand reports. Contains no timestamps, so equal inputs
/// give byte-identical output.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub metrics: Vec<(String, Metric)>,
    pub outputs: Vec<String>,
}

impl RunReport {
    pub fn new(command: Vec<String>) -> Self {
        Self {
            command,
            inputs: Vec::new(),
            metrics: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn metric(&mut self, key: &str, value: Metric) -> &mut Self {
        self.metrics.push((key.to_string(), value));
        self
    }

    pub fn tool_version() -> String {
        format!("chanint {}", env!("CARGO_PKG_VERSION"))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("tool: {}\n", Self::tool_version()));
        s.push_str(&format!("command: {}\n", self.command.join(" ")));
        for i in &self.inputs {
            s.push_str(&format!(
                "input.{}: {} sha256={}\n",
                i.role, i.path, i.sha256
            ));
        }
        for o in &self.outputs {
            s.push_str(&format!("output: {o}\n"));
        }
        for (k, v) in &self.metrics {
            s.push_str(&format!("{k}={}\n", v.render()));
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut metrics = Map::new();
        for (k, v) in &self.metrics {
            metrics.insert(k.clone(), v.to_json());
        }
        let inputs: Vec<Value> = self
            .inputs
            .iter()
            .map(|i| json!({"role": i.role, "path": i.path, "sha256": i.sha256}))
            .collect();
        let doc = json!({
            "tool": Self::tool_version(),
            "command": self.command,
            "inputs": inputs,
            "outputs": self.outputs,
            "metrics": Value::Object(metrics),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }
}
