//! Output formatting: decimal serialization at full working precision, the
//! provenance header, and the JSON/CSV writers.

use kisspoly::numerics::Complex;
use rug::Float;
use serde_json::{json, Map, Value};
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Significant decimal digits that preserve `bits` of mantissa.
pub fn digits_for(bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize
}

/// A Float as a decimal string with no precision loss through the text layer.
pub fn dec(f: &Float, digits: usize) -> String {
    if !f.is_finite() {
        return f.to_string();
    }
    f.to_string_radix(10, Some(digits))
}

/// A complex value as the ["re","im"] string pair.
pub fn complex_json(z: &Complex, digits: usize) -> Value {
    json!([dec(&z.re, digits), dec(&z.im, digits)])
}

/// Run parameters echoed into every output so the flags round-trip.
pub struct Provenance {
    pub command: &'static str,
    pub bits: u32,
    pub rel_tol: f64,
    pub threads: usize,
    pub format: Format,
    pub args: Vec<(&'static str, String)>,
}

impl Provenance {
    pub fn json(&self) -> Value {
        let mut args = Map::new();
        for (k, v) in &self.args {
            args.insert((*k).to_string(), Value::String(v.clone()));
        }
        json!({
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "bits": self.bits,
            "rel_tol": format!("{:e}", self.rel_tol),
            "threads": self.threads,
            "format": match self.format { Format::Json => "json", Format::Csv => "csv" },
            "args": Value::Object(args),
        })
    }

    pub fn csv_header(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# version={}\n", env!("CARGO_PKG_VERSION")));
        out.push_str(&format!("# command={}\n", self.command));
        out.push_str(&format!("# bits={}\n", self.bits));
        out.push_str(&format!("# rel_tol={:e}\n", self.rel_tol));
        out.push_str(&format!("# threads={}\n", self.threads));
        for (k, v) in &self.args {
            out.push_str(&format!("# {}={}\n", k, v));
        }
        out
    }
}

/// Write to --out or stdout.
pub fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout()),
    })
}

/// Emit a JSON document with the provenance header.
pub fn write_json(w: &mut dyn Write, prov: &Provenance, data: Value) -> io::Result<()> {
    let doc = json!({ "provenance": prov.json(), "data": data });
    writeln!(w, "{}", serde_json::to_string_pretty(&doc)?)
}

/// Emit CSV: provenance comments, a header row, then the records.
pub fn write_csv(
    w: &mut dyn Write,
    prov: &Provenance,
    columns: &[&str],
    rows: &[Vec<String>],
) -> io::Result<()> {
    write!(w, "{}", prov.csv_header())?;
    writeln!(w, "{}", columns.join(","))?;
    for row in rows {
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}
