//! Bit-stable artifact formats: CSV series/spectra/reports with an embedded
//! config header, and a text-header + little-endian binary snapshot.

use crate::config::{fmt_f64, Config};
use anyhow::{bail, Context, Result};
use fvbench_core::grid::{Boundary, CartesianGrid};
use fvbench_core::ConservedField;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

/// `# key = value` audit-trail header lines for CSV artifacts.
pub fn config_header(cfg: &Config) -> String {
    let mut out = String::new();
    for line in cfg.resolved_text().lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&format!("# config_hash = {:016x}\n", cfg.hash()));
    out
}

/// Time series rows: (t, t_over_tau, ke, enstrophy, mass_drift).
pub fn write_series(
    path: &Path,
    cfg: &Config,
    rows: &[(f64, f64, f64, f64, f64)],
) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path).with_context(|| format!("create {path:?}"))?);
    w.write_all(config_header(cfg).as_bytes())?;
    writeln!(w, "t,t_over_tau,ke,enstrophy,mass_drift")?;
    for (t, tt, ke, ens, drift) in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_f64(*t),
            fmt_f64(*tt),
            fmt_f64(*ke),
            fmt_f64(*ens),
            fmt_f64(*drift)
        )?;
    }
    Ok(())
}

/// Shell spectrum rows: (k, E).
pub fn write_spectrum(path: &Path, cfg: &Config, values: &[f64]) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path).with_context(|| format!("create {path:?}"))?);
    w.write_all(config_header(cfg).as_bytes())?;
    writeln!(w, "k,energy")?;
    for (k, v) in values.iter().enumerate() {
        writeln!(w, "{},{}", k, fmt_f64(*v))?;
    }
    Ok(())
}

/// Convergence report rows: (N, error) plus the fitted order on each row.
pub fn write_report(
    path: &Path,
    cfg: &Config,
    samples: &[(usize, f64)],
    fitted_order: f64,
    residual: f64,
) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path).with_context(|| format!("create {path:?}"))?);
    w.write_all(config_header(cfg).as_bytes())?;
    writeln!(w, "n,error,fitted_order,fit_residual")?;
    for (n, e) in samples {
        writeln!(w, "{},{},{},{}", n, fmt_f64(*e), fmt_f64(fitted_order), fmt_f64(residual))?;
    }
    Ok(())
}

const SNAPSHOT_MAGIC: &str = "fvbench-snapshot 1";

/// Writes a snapshot: text header, then the interior of each conserved
/// component as row-major (x fastest) little-endian f64.
pub fn write_snapshot(path: &Path, cfg: &Config, f: &ConservedField) -> Result<()> {
    let grid = f.grid();
    let mut w = BufWriter::new(std::fs::File::create(path).with_context(|| format!("create {path:?}"))?);
    writeln!(w, "{SNAPSHOT_MAGIC}")?;
    writeln!(w, "ndim = {}", grid.ndim())?;
    writeln!(w, "cells = {},{},{}", grid.n(0), grid.n(1), grid.n(2))?;
    writeln!(w, "lo = {},{},{}", fmt_f64(grid.lo(0)), fmt_f64(grid.lo(1)), fmt_f64(grid.lo(2)))?;
    writeln!(w, "hi = {},{},{}", fmt_f64(grid.hi(0)), fmt_f64(grid.hi(1)), fmt_f64(grid.hi(2)))?;
    let periodic: Vec<&str> = (0..3)
        .map(|d| if matches!(grid.boundary(d), Boundary::Periodic) { "1" } else { "0" })
        .collect();
    writeln!(w, "periodic = {}", periodic.join(","))?;
    writeln!(w, "ncomp = {}", grid.ncomp())?;
    writeln!(w, "time = {}", fmt_f64(f.time))?;
    writeln!(w, "config_hash = {:016x}", cfg.hash())?;
    for line in cfg.resolved_text().lines() {
        writeln!(w, "cfg.{line}")?;
    }
    writeln!(w, "data")?;
    for c in 0..grid.ncomp() {
        for v in f.interior_scalar(fvbench_core::FieldScalar::Conserved(c)) {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

/// A loaded snapshot. Boundary tags are not stored, so the field carries
/// periodic boundaries; only interior data is meaningful.
pub struct Snapshot {
    pub field: ConservedField,
    pub periodic: [bool; 3],
    pub config_hash: String,
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let file = std::fs::File::open(path).with_context(|| format!("open {path:?}"))?;
    let mut r = BufReader::new(file);
    let mut line = String::new();
    r.read_line(&mut line)?;
    if line.trim_end() != SNAPSHOT_MAGIC {
        bail!("{path:?} is not a snapshot (bad magic `{}`)", line.trim_end());
    }
    let mut ndim = 0usize;
    let mut cells = [0usize; 3];
    let mut lo = [0.0f64; 3];
    let mut hi = [1.0f64; 3];
    let mut periodic = [true; 3];
    let mut ncomp = 0usize;
    let mut time = 0.0f64;
    let mut config_hash = String::new();
    loop {
        line.clear();
        if r.read_line(&mut line)? == 0 {
            bail!("{path:?}: truncated header");
        }
        let t = line.trim_end();
        if t == "data" {
            break;
        }
        if t.starts_with("cfg.") {
            continue;
        }
        let (k, v) = t.split_once('=').with_context(|| format!("bad header line `{t}`"))?;
        let (k, v) = (k.trim(), v.trim());
        match k {
            "ndim" => ndim = v.parse()?,
            "cells" => {
                for (i, p) in v.split(',').enumerate().take(3) {
                    cells[i] = p.trim().parse()?;
                }
            }
            "lo" => {
                for (i, p) in v.split(',').enumerate().take(3) {
                    lo[i] = p.trim().parse()?;
                }
            }
            "hi" => {
                for (i, p) in v.split(',').enumerate().take(3) {
                    hi[i] = p.trim().parse()?;
                }
            }
            "periodic" => {
                for (i, p) in v.split(',').enumerate().take(3) {
                    periodic[i] = p.trim() == "1";
                }
            }
            "ncomp" => ncomp = v.parse()?,
            "time" => time = v.parse()?,
            "config_hash" => config_hash = v.to_string(),
            _ => {}
        }
    }
    if !(1..=3).contains(&ndim) {
        bail!("{path:?}: bad ndim {ndim}");
    }
    if ncomp != ndim + 2 {
        bail!("{path:?}: component count {ncomp} does not match ndim {ndim}");
    }
    let grid = CartesianGrid::new(ndim, cells, lo, hi, 4, [Boundary::Periodic; 3])
        .map_err(|e| anyhow::anyhow!("{path:?}: {e}"))?;
    let mut f = ConservedField::zeros(grid);
    f.time = time;
    let interior = f.grid().interior_cells();
    let mut buf = vec![0u8; interior * 8];
    for c in 0..ncomp {
        r.read_exact(&mut buf).with_context(|| format!("{path:?}: truncated payload"))?;
        let mut i = 0usize;
        let grid = f.grid().clone();
        for iz in 0..grid.n(2) as isize {
            for iy in 0..grid.n(1) as isize {
                for ix in 0..grid.n(0) as isize {
                    let v = f64::from_le_bytes(buf[i * 8..i * 8 + 8].try_into().unwrap());
                    f.set(c, ix, iy, iz, v);
                    i += 1;
                }
            }
        }
    }
    fvbench_core::integrator::fill_ghosts(&mut f);
    Ok(Snapshot { field: f, periodic, config_hash })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Case;
    use fvbench_core::cases::{init_vortex, standard_gas, InitQuadrature, VortexParams};

    #[test]
    fn snapshot_round_trip_is_bit_exact() {
        let gas = standard_gas();
        let f = init_vortex(16, &VortexParams::default(), &gas, 4, InitQuadrature::CellCenter).unwrap();
        let cfg = Config::defaults(Case::Vortex);
        let dir = std::env::temp_dir().join(format!("fvb-io-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("snap.fvb");
        write_snapshot(&path, &cfg, &f).unwrap();
        let snap = read_snapshot(&path).unwrap();
        assert_eq!(snap.field.time, f.time);
        assert!(snap.periodic[0] && snap.periodic[1]);
        for c in 0..f.ncomp() {
            let a = f.interior_scalar(fvbench_core::FieldScalar::Conserved(c));
            let b = snap.field.interior_scalar(fvbench_core::FieldScalar::Conserved(c));
            assert_eq!(a, b, "component {c} must round-trip bit-exactly");
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn series_is_byte_deterministic() {
        let cfg = Config::defaults(Case::Vortex);
        let rows = vec![(0.0, 0.0, 1.0 / 3.0, 2.0 / 7.0, 1e-15), (0.1, 0.1, 0.3, 0.28, -2e-15)];
        let dir = std::env::temp_dir().join(format!("fvb-io-test2-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let a = dir.join("a.csv");
        let b = dir.join("b.csv");
        write_series(&a, &cfg, &rows).unwrap();
        write_series(&b, &cfg, &rows).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
        let text = std::fs::read_to_string(&a).unwrap();
        assert!(text.starts_with("# "), "header must embed the config");
        assert!(text.contains("t,t_over_tau,ke,enstrophy,mass_drift"));
        std::fs::remove_dir_all(&dir).ok();
    }
}
