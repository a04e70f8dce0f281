//! File formats: scenario JSON documents, SLF text files and CSV output.
//!
//! All numeric output uses '.' as decimal separator, at most 9 significant
//! digits and LF line endings. Formatting is idempotent under a
//! parse/format round trip, which makes file round trips bit-exact.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::channel::{ChannelModel, EmpiricalLoSParams, RadioConfig};
use crate::error::{Error, Result};
use crate::geo::{Point3, Region};
use crate::radiomap::SlfGrid;
use crate::scenario::{FlyGrid, GroundTerminal, Scenario};

/// Format a float with up to 9 significant digits, scientific notation,
/// trailing zeros trimmed.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let s = format!("{x:.8e}");
    let (mantissa, exp) = s.split_once('e').expect("scientific format");
    let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
    format!("{mantissa}e{exp}")
}

/// Serializable channel selector. The tomographic variant references its
/// SLF file by path, resolved relative to the scenario document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ChannelSpec {
    FreeSpace,
    EmpiricalLos {
        a: f64,
        b: f64,
        eta_los_db: f64,
        eta_nlos_db: f64,
        environment: String,
    },
    Tomographic {
        slf_path: String,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ScenarioDoc {
    version: u32,
    region: Region,
    radio: RadioConfig,
    channel: ChannelSpec,
    terminals: Vec<GroundTerminal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    flygrid: Option<FlyGrid>,
    seed: u64,
}

/// Load a scenario document, resolving any referenced SLF file relative to
/// the document's directory.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path)?;
    let doc: ScenarioDoc = serde_json::from_str(&text)?;
    if doc.version != 1 {
        return Err(Error::Parse {
            what: "scenario".into(),
            detail: format!("unsupported version {}", doc.version),
        });
    }
    if doc.terminals.is_empty() {
        return Err(Error::Parse { what: "scenario".into(), detail: "no terminals".into() });
    }
    let channel = match doc.channel {
        ChannelSpec::FreeSpace => ChannelModel::FreeSpace,
        ChannelSpec::EmpiricalLos { a, b, eta_los_db, eta_nlos_db, environment } => {
            ChannelModel::EmpiricalLos {
                params: EmpiricalLoSParams { a, b, eta_los_db, eta_nlos_db, environment },
            }
        }
        ChannelSpec::Tomographic { slf_path } => {
            let base = path.parent().unwrap_or_else(|| Path::new("."));
            let slf = load_slf(&base.join(&slf_path))?;
            ChannelModel::Tomographic { slf }
        }
    };
    Ok(Scenario {
        terminals: doc.terminals,
        region: doc.region,
        radio: doc.radio,
        channel,
        flygrid: doc.flygrid,
        seed: doc.seed,
    })
}

/// Write a scenario document. A tomographic channel is written as a
/// sibling `<stem>.slf` file referenced by name.
pub fn save_scenario(path: &Path, scenario: &Scenario) -> Result<()> {
    let channel = match &scenario.channel {
        ChannelModel::FreeSpace => ChannelSpec::FreeSpace,
        ChannelModel::EmpiricalLos { params } => ChannelSpec::EmpiricalLos {
            a: params.a,
            b: params.b,
            eta_los_db: params.eta_los_db,
            eta_nlos_db: params.eta_nlos_db,
            environment: params.environment.clone(),
        },
        ChannelModel::Tomographic { slf } => {
            let slf_name = slf_file_name(path)?;
            let base = path.parent().unwrap_or_else(|| Path::new("."));
            save_slf(&base.join(&slf_name), slf)?;
            ChannelSpec::Tomographic { slf_path: slf_name }
        }
    };
    let doc = ScenarioDoc {
        version: 1,
        region: scenario.region,
        radio: scenario.radio,
        channel,
        terminals: scenario.terminals.clone(),
        flygrid: scenario.flygrid.clone(),
        seed: scenario.seed,
    };
    let value = serde_json::to_value(&doc)?;
    let mut out = String::new();
    write_json(&value, 0, &mut out);
    out.push('\n');
    fs::write(path, out)?;
    Ok(())
}

fn slf_file_name(scenario_path: &Path) -> Result<String> {
    let stem = scenario_path
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Error::Config(format!("bad scenario path {}", scenario_path.display())))?;
    Ok(format!("{stem}.slf"))
}

// Deterministic JSON writer: sorted keys (serde_json's default map),
// two-space indentation, floats through fmt_sig9.
fn write_json(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&fmt_sig9(n.as_f64().unwrap_or(0.0)));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string serializes"));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad);
                out.push_str("  ");
                write_json(item, indent + 1, out);
                if i + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, val)) in map.iter().enumerate() {
                out.push_str(&pad);
                out.push_str("  ");
                out.push_str(&serde_json::to_string(k).expect("key serializes"));
                out.push_str(": ");
                write_json(val, indent + 1, out);
                if i + 1 < map.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&pad);
            out.push('}');
        }
    }
}

/// SLF text format: header `SLF1 ox oy oz vx vy vz nx ny nz`, then the
/// voxel values whitespace-separated in x-fastest order.
pub fn save_slf(path: &Path, grid: &SlfGrid) -> Result<()> {
    let mut f = fs::File::create(path)?;
    writeln!(
        f,
        "SLF1 {} {} {} {} {} {} {} {} {}",
        fmt_sig9(grid.origin.x),
        fmt_sig9(grid.origin.y),
        fmt_sig9(grid.origin.z),
        fmt_sig9(grid.voxel_size[0]),
        fmt_sig9(grid.voxel_size[1]),
        fmt_sig9(grid.voxel_size[2]),
        grid.dims[0],
        grid.dims[1],
        grid.dims[2],
    )?;
    for v in &grid.values {
        writeln!(f, "{}", fmt_sig9(*v))?;
    }
    Ok(())
}

pub fn load_slf(path: &Path) -> Result<SlfGrid> {
    let text = fs::read_to_string(path)?;
    let mut tokens = text.split_whitespace();
    let magic = tokens.next().unwrap_or("");
    if magic != "SLF1" {
        return Err(Error::Parse { what: "SLF".into(), detail: format!("bad magic '{magic}'") });
    }
    let mut next_f64 = |name: &str| -> Result<f64> {
        tokens
            .next()
            .ok_or_else(|| Error::Parse { what: "SLF".into(), detail: format!("missing {name}") })?
            .parse::<f64>()
            .map_err(|e| Error::Parse { what: "SLF".into(), detail: format!("bad {name}: {e}") })
    };
    let ox = next_f64("origin.x")?;
    let oy = next_f64("origin.y")?;
    let oz = next_f64("origin.z")?;
    let vx = next_f64("voxel.x")?;
    let vy = next_f64("voxel.y")?;
    let vz = next_f64("voxel.z")?;
    let nx = next_f64("dims.x")? as usize;
    let ny = next_f64("dims.y")? as usize;
    let nz = next_f64("dims.z")? as usize;
    let n = nx * ny * nz;
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        values.push(next_f64(&format!("value {i}"))?);
    }
    Ok(SlfGrid { origin: Point3 { x: ox, y: oy, z: oz }, voxel_size: [vx, vy, vz], dims: [nx, ny, nz], values })
}

/// Minimal CSV writer: header + rows, LF endings.
pub struct CsvWriter {
    path: PathBuf,
    lines: Vec<String>,
}

impl CsvWriter {
    pub fn new(path: &Path, header: &[&str]) -> Self {
        Self { path: path.to_path_buf(), lines: vec![header.join(",")] }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.lines.push(fields.join(","));
    }

    pub fn finish(self) -> Result<()> {
        let mut text = self.lines.join("\n");
        text.push('\n');
        fs::write(&self.path, text)?;
        Ok(())
    }
}
