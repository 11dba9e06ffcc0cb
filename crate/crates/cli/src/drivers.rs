//! Experiment drivers: single runs, convergence sweeps and the turbulence
//! campaign, producing the artifacts the analysis pipeline consumes.

use crate::config::{Case, Config};
use crate::io;
use anyhow::{anyhow, bail, Context, Result};
use fvbench_core::analysis::{
    self, coarsen_field, enstrophy, fit_order, kinetic_energy, l1_error_fields,
};
use fvbench_core::cases::{
    init_hit, init_shu_osher, init_vortex, HitMasterField, InitQuadrature,
};
use fvbench_core::gas::{GasModel, TransportCoeffs};
use fvbench_core::integrator::{advance_to_time, AdvanceControl, Quadrature, SchemeConfig};
use fvbench_core::{ConservedField, FieldScalar};
use std::path::{Path, PathBuf};

/// Everything a finished run exposes to analysis and reporting.
pub struct RunOutput {
    pub initial: ConservedField,
    pub field: ConservedField,
    /// Eddy turnover time for HIT, 1.0 otherwise (t_over_tau == t).
    pub tau: f64,
    pub coeffs: TransportCoeffs,
    pub series: Vec<(f64, f64, f64, f64, f64)>,
    pub steps: usize,
    pub riemann_solves: u64,
    pub reconstruction_calls: u64,
    pub wall_time: f64,
    /// Relative drift of each conserved total, |final - initial| / scale.
    pub conservation_drift: Vec<f64>,
}

impl RunOutput {
    pub fn max_drift(&self) -> f64 {
        self.conservation_drift.iter().fold(0.0f64, |a, &b| a.max(b))
    }
}

fn init_quadrature_for(scheme: &SchemeConfig, ndim: usize) -> InitQuadrature {
    match scheme.effective_quadrature(ndim) {
        Quadrature::Midpoint => InitQuadrature::CellCenter,
        Quadrature::Gauss2 => InitQuadrature::Gauss3,
    }
}

/// Builds the initial field plus transport/clock for the configured case.
pub fn initial_state(
    cfg: &Config,
    nx: usize,
    scheme: &SchemeConfig,
    gas: &GasModel,
    master: Option<&HitMasterField>,
) -> Result<(ConservedField, TransportCoeffs, f64)> {
    let ghost = scheme.reconstruction.required_ghost().max(2);
    match cfg.case {
        Case::Vortex => {
            let f = init_vortex(nx, &cfg.vortex, gas, ghost, init_quadrature_for(scheme, 2))?;
            Ok((f, TransportCoeffs::INVISCID, 1.0))
        }
        Case::ShuOsher => {
            let f = init_shu_osher(nx, &cfg.shu, gas, ghost)?;
            Ok((f, TransportCoeffs::INVISCID, 1.0))
        }
        Case::Hit => {
            let master = master.ok_or_else(|| anyhow!("HIT runs need a master field"))?;
            let init = init_hit(nx, &cfg.hit, gas, ghost, master)?;
            Ok((init.field, init.coeffs, init.tau_eddy))
        }
    }
}

/// Runs one configuration to its end time, sampling the series.
pub fn run_single(cfg: &Config, master: Option<&HitMasterField>) -> Result<RunOutput> {
    run_single_at(cfg, cfg.nx, &cfg.scheme, master)
}

/// Runs one (resolution, scheme) combination under the shared case setup.
pub fn run_single_at(
    cfg: &Config,
    nx: usize,
    scheme: &SchemeConfig,
    master: Option<&HitMasterField>,
) -> Result<RunOutput> {
    let gas = cfg.gas();
    let (initial, coeffs, tau) = initial_state(cfg, nx, scheme, &gas, master)?;
    let t_end = match cfg.case {
        Case::Hit => cfg.t_over_tau * tau,
        _ => cfg.t_end,
    };
    let mut field = initial.clone();
    let initial_totals = initial.conserved_totals();
    let mut series = Vec::new();
    let sample_dt = cfg.series_interval * tau;
    let mut next_sample = 0.0f64;
    let mut riemann = 0u64;
    let mut recon = 0u64;
    let mut wall = 0.0f64;

    let sample = |f: &ConservedField, series: &mut Vec<(f64, f64, f64, f64, f64)>| {
        let ke = kinetic_energy(f);
        let ens = if f.grid().ndim() >= 2 { enstrophy(f) } else { 0.0 };
        let totals = f.conserved_totals();
        let drift = (totals[0] - initial_totals[0]) / initial_totals[0];
        series.push((f.time, f.time / tau, ke, ens, drift));
    };
    if cfg.series {
        sample(&field, &mut series);
        next_sample = sample_dt;
    }

    let ctl = AdvanceControl { cfl: cfg.cfl, max_steps: cfg.max_steps };
    let stats = advance_to_time(&mut field, t_end, &cfg.scheme_for(scheme), &gas, &coeffs, &ctl, |f, s| {
        riemann += s.riemann_solves;
        recon += s.reconstruction_calls;
        wall += s.wall_time;
        if cfg.series && f.time >= next_sample - 1e-12 * t_end.max(1.0) {
            sample(f, &mut series);
            while next_sample <= f.time {
                next_sample += sample_dt.max(f64::MIN_POSITIVE);
            }
        }
    })
    .map_err(|e| anyhow!("run failed: {e}"))?;

    let final_totals = field.conserved_totals();
    let scales: Vec<f64> = (0..field.ncomp())
        .map(|c| {
            // momenta can legitimately sum to ~0; normalize against the
            // component's absolute-value total instead
            let mut abs = 0.0;
            field.for_each_interior(|ix, iy, iz| abs += field.get(c, ix, iy, iz).abs());
            (abs * field.grid().cell_volume()).max(1e-300)
        })
        .collect();
    let conservation_drift = initial_totals
        .iter()
        .zip(final_totals.iter())
        .zip(scales.iter())
        .map(|((a, b), s)| (b - a).abs() / s)
        .collect();

    Ok(RunOutput {
        initial,
        field,
        tau,
        coeffs,
        series,
        steps: stats.len(),
        riemann_solves: riemann,
        reconstruction_calls: recon,
        wall_time: wall,
        conservation_drift,
    })
}

impl Config {
    /// The run scheme with this config's WENO parameters applied.
    pub fn scheme_for(&self, scheme: &SchemeConfig) -> SchemeConfig {
        SchemeConfig { weno: self.scheme.weno, ..*scheme }
    }
}

fn ensure_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).with_context(|| format!("create {path:?}"))
}

fn scheme_label(s: &SchemeConfig) -> String {
    match s.quadrature {
        Quadrature::Midpoint => s.reconstruction.name().to_string(),
        Quadrature::Gauss2 => format!("{}+gauss2", s.reconstruction.name()),
    }
}

/// `fvbench run`: executes the configured case and writes its artifacts.
/// Returns the one-line summary.
pub fn cmd_run(cfg: &Config) -> Result<String> {
    let out_dir = PathBuf::from(&cfg.output_dir);
    ensure_dir(&out_dir)?;
    let master = load_or_generate_master(cfg, &out_dir)?;
    let run = run_single(cfg, master.as_ref())?;
    if cfg.series {
        io::write_series(&out_dir.join("series.csv"), cfg, &run.series)?;
    }
    for &t in &cfg.snapshot_times {
        // snapshots are cheap to regenerate exactly by rerunning to the
        // requested time; mid-run dumps reuse the same driver
        let mut sub = cfg.clone();
        match cfg.case {
            Case::Hit => sub.t_over_tau = t,
            _ => sub.t_end = t,
        }
        let partial = run_single(&sub, master.as_ref())?;
        io::write_snapshot(&out_dir.join(format!("snap_{}.fvb", time_label(t))), cfg, &partial.field)?;
    }
    io::write_snapshot(&out_dir.join("snap_final.fvb"), cfg, &run.field)?;
    if cfg.case == Case::Hit {
        for &t in &cfg.spectrum_times {
            let f = if (t * run.tau - run.field.time).abs() <= 1e-9 * run.field.time.abs().max(1.0) {
                run.field.clone()
            } else {
                let mut sub = cfg.clone();
                sub.t_over_tau = t;
                run_single(&sub, master.as_ref())?.field
            };
            let bins = analysis::vorticity_shell_spectrum(&f);
            io::write_spectrum(
                &out_dir.join(format!("spectrum_vorticity_{}.csv", time_label(t))),
                cfg,
                &bins.values,
            )?;
            let bins = analysis::velocity_shell_spectrum(&f);
            io::write_spectrum(
                &out_dir.join(format!("spectrum_velocity_{}.csv", time_label(t))),
                cfg,
                &bins.values,
            )?;
        }
    }
    Ok(format!(
        "case={} scheme={} nx={} t_final={:.6e} steps={} riemann_solves={} reconstruction_calls={} mass_drift={:.3e} wall={:.2}s",
        cfg.case.name(),
        scheme_label(&cfg.scheme),
        cfg.nx,
        run.field.time,
        run.steps,
        run.riemann_solves,
        run.reconstruction_calls,
        run.conservation_drift[0],
        run.wall_time
    ))
}

fn time_label(t: f64) -> String {
    format!("{t:.4}").replace('.', "p")
}

/// `fvbench convergence`: runs the resolution ladder and fits the order.
/// The vortex is self-referenced against its initial field; the others
/// compare against a conservatively restricted fine reference run.
pub fn cmd_convergence(cfg: &Config) -> Result<(Vec<(usize, f64)>, f64, f64)> {
    let out_dir = PathBuf::from(&cfg.output_dir);
    ensure_dir(&out_dir)?;
    if cfg.resolutions.len() < 2 {
        bail!("convergence needs at least two resolutions");
    }
    for w in cfg.resolutions.windows(2) {
        if w[1] <= w[0] {
            bail!("convergence.resolutions must be strictly increasing");
        }
    }
    let needed = if cfg.case == Case::Hit {
        largest_resolution(cfg).max(cfg.reference_nx)
    } else {
        0
    };
    let master = load_master_for(cfg, &out_dir, needed)?;

    let reference = match cfg.case {
        Case::Vortex => None,
        _ => {
            let finest = *cfg.resolutions.last().unwrap();
            if cfg.reference_nx < 4 * finest {
                bail!(
                    "reference resolution {} must be at least 4x the finest sweep resolution {finest}",
                    cfg.reference_nx
                );
            }
            Some(run_single_at(cfg, cfg.reference_nx, &cfg.reference_scheme, master.as_ref())?)
        }
    };

    let mut samples = Vec::new();
    for &n in &cfg.resolutions {
        let run = run_single_at(cfg, n, &cfg.scheme, master.as_ref())?;
        let err = match (&reference, cfg.case) {
            (None, _) => l1_error_fields(&run.field, &run.initial, FieldScalar::Velocity(0))?,
            (Some(r), Case::ShuOsher) => {
                let coarse = coarsen_field(&r.field, cfg.reference_nx / n)?;
                l1_error_fields(&run.field, &coarse, FieldScalar::Conserved(0))?
            }
            (Some(r), _) => {
                let coarse = coarsen_field(&r.field, cfg.reference_nx / n)?;
                l1_error_fields(&run.field, &coarse, FieldScalar::Velocity(0))?
            }
        };
        samples.push((n, err));
    }
    let report = fit_order(&samples)?;
    io::write_report(
        &out_dir.join("report.csv"),
        cfg,
        &samples,
        report.fitted_order,
        report.fit_residual,
    )?;
    Ok((samples, report.fitted_order, report.fit_residual))
}

/// Master-field handling: HIT realizations are generated once per
/// (master_n, seed, k0) and cached under the output directory. The master
/// must cover the finest grid the command will run.
pub fn load_or_generate_master(cfg: &Config, out_dir: &Path) -> Result<Option<HitMasterField>> {
    load_master_for(cfg, out_dir, cfg.nx)
}

/// As [`load_or_generate_master`] but sized for an explicit finest grid.
pub fn load_master_for(
    cfg: &Config,
    out_dir: &Path,
    needed_n: usize,
) -> Result<Option<HitMasterField>> {
    if cfg.case != Case::Hit {
        return Ok(None);
    }
    let n = cfg.hit.master_n.max(needed_n);
    let cache = out_dir.join(format!(
        "hit_master_n{}_seed{}_k{}.bin",
        n, cfg.hit.seed, cfg.hit.k0
    ));
    if let Ok(bytes) = std::fs::read(&cache) {
        if bytes.len() == 3 * n * n * n * 8 {
            let mut velocity: [Vec<f64>; 3] = Default::default();
            for (c, v) in velocity.iter_mut().enumerate() {
                let base = c * n * n * n * 8;
                *v = bytes[base..base + n * n * n * 8]
                    .chunks_exact(8)
                    .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
                    .collect();
            }
            return Ok(Some(HitMasterField { n, velocity }));
        }
    }
    let master = HitMasterField::generate(n, cfg.hit.k0, cfg.hit.seed)
        .map_err(|e| anyhow!("master generation failed: {e}"))?;
    let mut bytes = Vec::with_capacity(3 * n * n * n * 8);
    for c in 0..3 {
        for v in &master.velocity[c] {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
    }
    std::fs::write(&cache, bytes).with_context(|| format!("write {cache:?}"))?;
    Ok(Some(master))
}

fn largest_resolution(cfg: &Config) -> usize {
    cfg.resolutions.iter().copied().max().unwrap_or(cfg.nx)
}

/// One campaign entry: the run outputs plus derived diagnostics.
pub struct CampaignRun {
    pub nx: usize,
    pub scheme: SchemeConfig,
    pub label: String,
    pub run: RunOutput,
    pub vorticity_spectrum: Vec<f64>,
    pub velocity_spectrum: Vec<f64>,
}

/// `fvbench hit-campaign`: shared master field, every (resolution, scheme)
/// pair, series + spectra + snapshot artifacts, and a cross-scheme error
/// report against the designated reference run (largest resolution,
/// `convergence.reference_scheme`).
pub fn cmd_hit_campaign(cfg: &Config) -> Result<Vec<CampaignRun>> {
    if cfg.case != Case::Hit {
        bail!("hit-campaign requires case=hit");
    }
    let out_dir = PathBuf::from(&cfg.output_dir);
    ensure_dir(&out_dir)?;
    let master = load_master_for(cfg, &out_dir, largest_resolution(cfg))?;
    let mut entries = Vec::new();
    for &n in &cfg.resolutions {
        for scheme in &cfg.campaign_schemes {
            let label = format!("{}_n{}", scheme_label(scheme), n);
            let job_dir = out_dir.join(&label);
            ensure_dir(&job_dir)?;
            let run = run_single_at(cfg, n, scheme, master.as_ref())?;
            io::write_series(&job_dir.join("series.csv"), cfg, &run.series)?;
            let vort = analysis::vorticity_shell_spectrum(&run.field);
            let vel = analysis::velocity_shell_spectrum(&run.field);
            io::write_spectrum(
                &job_dir.join(format!("spectrum_vorticity_{}.csv", time_label(cfg.t_over_tau))),
                cfg,
                &vort.values,
            )?;
            io::write_spectrum(
                &job_dir.join(format!("spectrum_velocity_{}.csv", time_label(cfg.t_over_tau))),
                cfg,
                &vel.values,
            )?;
            io::write_snapshot(
                &job_dir.join(format!("snap_{}.fvb", time_label(cfg.t_over_tau))),
                cfg,
                &run.field,
            )?;
            entries.push(CampaignRun {
                nx: n,
                scheme: *scheme,
                label,
                run,
                vorticity_spectrum: vort.values,
                velocity_spectrum: vel.values,
            });
        }
    }

    // cross-scheme error orders against the reference run
    let ref_n = largest_resolution(cfg);
    let reference = run_single_at(cfg, ref_n, &cfg.reference_scheme, master.as_ref())?;
    let mut report_rows: Vec<(String, usize, f64)> = Vec::new();
    for scheme in &cfg.campaign_schemes {
        let mut samples = Vec::new();
        for entry in entries.iter().filter(|e| e.scheme == *scheme) {
            if ref_n % entry.nx != 0 || ref_n == entry.nx {
                continue;
            }
            let coarse = coarsen_field(&reference.field, ref_n / entry.nx)?;
            let err = l1_error_fields(&entry.run.field, &coarse, FieldScalar::Velocity(0))?;
            samples.push((entry.nx, err));
        }
        let order = if samples.len() >= 2 {
            fit_order(&samples)?.fitted_order
        } else {
            f64::NAN
        };
        for (n, e) in samples {
            report_rows.push((scheme_label(scheme), n, e));
        }
        if !order.is_nan() {
            report_rows.push((format!("{}(order)", scheme_label(scheme)), 0, order));
        }
    }
    let mut text = io::config_header(cfg);
    text.push_str("scheme,n,value\n");
    for (s, n, v) in &report_rows {
        text.push_str(&format!("{s},{n},{}\n", crate::config::fmt_f64(*v)));
    }
    std::fs::write(out_dir.join("report.csv"), text)?;
    Ok(entries)
}

/// `fvbench spectrum`: shell spectrum of a snapshot's velocity or
/// vorticity field.
pub fn cmd_spectrum(snapshot: &Path, field: &str, out: &Path) -> Result<()> {
    let snap = io::read_snapshot(snapshot)?;
    if snap.field.grid().ndim() != 3 {
        bail!("spectra need a 3D snapshot");
    }
    let bins = match field {
        "velocity" => analysis::velocity_shell_spectrum(&snap.field),
        "vorticity" => analysis::vorticity_shell_spectrum(&snap.field),
        other => bail!("unknown spectrum field `{other}` (velocity or vorticity)"),
    };
    let mut text = String::from("k,energy\n");
    for (k, v) in bins.values.iter().enumerate() {
        text.push_str(&format!("{k},{}\n", crate::config::fmt_f64(*v)));
    }
    std::fs::write(out, text).with_context(|| format!("write {out:?}"))?;
    Ok(())
}

/// `fvbench compare`: L1 differences between two snapshots, coarsening the
/// finer one when the resolutions differ by an integer factor.
pub fn cmd_compare(a: &Path, b: &Path) -> Result<String> {
    let sa = io::read_snapshot(a)?;
    let sb = io::read_snapshot(b)?;
    let (fine, coarse) = if sa.field.grid().n(0) >= sb.field.grid().n(0) {
        (&sa.field, &sb.field)
    } else {
        (&sb.field, &sa.field)
    };
    let nf = fine.grid().n(0);
    let nc = coarse.grid().n(0);
    if nf % nc != 0 {
        bail!("resolutions {nf} and {nc} are not related by an integer factor");
    }
    let restricted = if nf == nc { fine.clone() } else { coarsen_field(fine, nf / nc)? };
    let mut out = String::new();
    let rho = l1_error_fields(&restricted, coarse, FieldScalar::Conserved(0))?;
    out.push_str(&format!("l1_density = {rho:.6e}\n"));
    for d in 0..coarse.grid().ndim() {
        let v = l1_error_fields(&restricted, coarse, FieldScalar::Velocity(d))?;
        out.push_str(&format!("l1_velocity_{d} = {v:.6e}\n"));
    }
    Ok(out)
}
