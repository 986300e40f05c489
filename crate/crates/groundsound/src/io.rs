//! CSV, WAV and run-manifest writers.
//!
//! CSV values use full-precision scientific notation so regression diffs
//! are meaningful. WAV output is 32-bit float mono; the peak-normalization
//! factor applied (if any) is recorded in a sidecar metadata file.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::Result;
use crate::radiation::PressureTrace;
use crate::real::Real;

/// Write columns of equal length as CSV with a header row.
pub fn write_csv<R: Real>(path: &Path, header: &[&str], columns: &[&[R]]) -> Result<()> {
    assert_eq!(header.len(), columns.len());
    let rows = columns.first().map_or(0, |c| c.len());
    for c in columns {
        assert_eq!(c.len(), rows, "ragged CSV columns");
    }
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", header.join(","))?;
    for i in 0..rows {
        for (j, c) in columns.iter().enumerate() {
            if j > 0 {
                write!(w, ",")?;
            }
            write!(w, "{:.16e}", c[i])?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

/// Write a trace as (t, p) CSV.
pub fn write_trace_csv<R: Real>(path: &Path, trace: &PressureTrace<R>) -> Result<()> {
    let times: Vec<R> = (0..trace.len()).map(|i| trace.time(i)).collect();
    write_csv(path, &["t", "p"], &[&times, &trace.samples])
}

/// Write a trace as 32-bit float mono WAV. When `normalize` is set the
/// samples are scaled so the peak sits at the given level; the factor goes
/// into the sidecar `<path>.meta.txt`.
pub fn write_wav<R: Real>(
    path: &Path,
    trace: &PressureTrace<R>,
    normalize_peak_to: Option<f64>,
) -> Result<()> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: trace.sample_rate.as_f64().round() as u32,
        bits_per_sample: 32,
        sample_format: hound::SampleFormat::Float,
    };
    let peak = trace.peak_abs().as_f64();
    let factor = match normalize_peak_to {
        Some(target) if peak > 0.0 => target / peak,
        _ => 1.0,
    };
    let mut w = hound::WavWriter::create(path, spec)
        .map_err(|e| std::io::Error::other(format!("wav: {e}")))?;
    for &s in &trace.samples {
        w.write_sample((s.as_f64() * factor) as f32)
            .map_err(|e| std::io::Error::other(format!("wav: {e}")))?;
    }
    w.finalize()
        .map_err(|e| std::io::Error::other(format!("wav: {e}")))?;

    let meta = path.with_extension("wav.meta.txt");
    let mut m = BufWriter::new(File::create(meta)?);
    writeln!(m, "sample_rate = {}", spec.sample_rate)?;
    writeln!(m, "samples = {}", trace.len())?;
    writeln!(m, "peak_pa = {peak:.16e}")?;
    writeln!(m, "normalization_factor = {factor:.16e}")?;
    m.flush()?;
    Ok(())
}

/// Sorted key = value run manifest: every resolved physical parameter and
/// derived quantity of a run, for reproducibility.
#[derive(Debug, Default, Clone)]
pub struct Manifest {
    entries: BTreeMap<String, String>,
}

impl Manifest {
    pub fn new() -> Self {
        let mut m = Self::default();
        m.set("tool_version", env!("CARGO_PKG_VERSION"));
        m
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.entries.insert(key.to_string(), value.to_string());
    }

    pub fn set_scalar<R: Real>(&mut self, key: &str, value: R) {
        self.entries
            .insert(key.to_string(), format!("{:.16e}", value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|s| s.as_str())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        for (k, v) in &self.entries {
            writeln!(w, "{k} = {v}")?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Flat binary pressure-slice export (little-endian f32) with a text
/// header describing the layout.
pub fn write_slices<R: Real>(
    dir: &Path,
    slices: &[(usize, usize, usize, Vec<R>)],
    dx: R,
) -> Result<()> {
    if slices.is_empty() {
        return Ok(());
    }
    let (_, nx, ny, _) = slices[0];
    let mut h = BufWriter::new(File::create(dir.join("slices_header.txt"))?);
    writeln!(h, "nx = {nx}")?;
    writeln!(h, "ny = {ny}")?;
    writeln!(h, "dx = {:.16e}", dx)?;
    writeln!(h, "count = {}", slices.len())?;
    writeln!(h, "format = f32le")?;
    h.flush()?;
    for (step, _, _, data) in slices {
        let mut f = BufWriter::new(File::create(dir.join(format!("slice_{step:06}.bin")))?);
        for &v in data {
            f.write_all(&(v.as_f64() as f32).to_le_bytes())?;
        }
        f.flush()?;
    }
    Ok(())
}
