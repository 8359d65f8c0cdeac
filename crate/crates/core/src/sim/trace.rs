//! Recorded waveforms and the `vsr-trace v1` text format.

use std::io::{BufRead, Write};

use crate::error::{CoreError, Result};
use crate::sim::fault::GatePermissions;

/// One recorder sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub t: f64,
    pub i_abc: [f64; 3],
    pub u_dc: f64,
    /// Grid reference angle in [0, 2π).
    pub ref_angle: f64,
    /// Effective per-switch conduction permissions, wire order.
    pub gates: GatePermissions,
}

/// A simulation recording at a uniform sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub sample_rate: f64,
    pub records: Vec<TraceRecord>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.records.len() as f64 / self.sample_rate
    }

    /// Writes the `vsr-trace v1` format. `meta` lines, when given, are
    /// emitted as `#`-prefixed comments right after the header.
    pub fn write_to<W: Write>(&self, w: &mut W, meta: Option<&str>) -> Result<()> {
        writeln!(w, "vsr-trace v1, rate={}", self.sample_rate)?;
        if let Some(meta) = meta {
            writeln!(w, "# {meta}")?;
        }
        for r in &self.records {
            let gates: String = r.gates.iter().map(|g| if *g { '1' } else { '0' }).collect();
            writeln!(
                w,
                "{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{:.9e},{}",
                r.t, r.i_abc[0], r.i_abc[1], r.i_abc[2], r.u_dc, r.ref_angle, gates
            )?;
        }
        Ok(())
    }

    pub fn save(&self, path: &std::path::Path, meta: Option<&str>) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_to(&mut w, meta)
    }

    pub fn read_from<R: BufRead>(r: &mut R) -> Result<Trace> {
        let mut header = String::new();
        r.read_line(&mut header)?;
        let header = header.trim_end();
        let rest = header
            .strip_prefix("vsr-trace ")
            .ok_or_else(|| CoreError::MalformedFile("missing vsr-trace header".into()))?;
        let (version, rate_part) = rest
            .split_once(',')
            .ok_or_else(|| CoreError::MalformedFile("bad trace header".into()))?;
        if version.trim() != "v1" {
            return Err(CoreError::VersionMismatch(version.trim().to_string()));
        }
        let sample_rate: f64 = rate_part
            .trim()
            .strip_prefix("rate=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| CoreError::MalformedFile("bad rate in trace header".into()))?;

        let mut records = Vec::new();
        for line in r.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(CoreError::MalformedFile(format!(
                    "trace row has {} fields, expected 7",
                    fields.len()
                )));
            }
            let num = |s: &str| -> Result<f64> {
                s.parse()
                    .map_err(|_| CoreError::MalformedFile(format!("bad number '{s}'")))
            };
            let gates_str = fields[6];
            if gates_str.len() != 6 || !gates_str.chars().all(|c| c == '0' || c == '1') {
                return Err(CoreError::MalformedFile(format!("bad gates field '{gates_str}'")));
            }
            let mut gates = [false; 6];
            for (i, c) in gates_str.chars().enumerate() {
                gates[i] = c == '1';
            }
            records.push(TraceRecord {
                t: num(fields[0])?,
                i_abc: [num(fields[1])?, num(fields[2])?, num(fields[3])?],
                u_dc: num(fields[4])?,
                ref_angle: num(fields[5])?,
                gates,
            });
        }
        Ok(Trace { sample_rate, records })
    }

    pub fn load(path: &std::path::Path) -> Result<Trace> {
        let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
        Trace::read_from(&mut r)
    }
}
