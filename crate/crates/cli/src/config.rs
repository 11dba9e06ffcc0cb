//! Flat key=value run configuration with dotted sections. Every parameter
//! defaults to the benchmark's documented value, so `case=vortex` alone
//! reproduces the reference setup of that problem.

use fvbench_core::cases::{HitParams, ShuOsherParams, VortexParams};
use fvbench_core::gas::GasModel;
use fvbench_core::integrator::{Quadrature, ReconVariables, RiemannSolver, SchemeConfig};
use fvbench_core::reconstruct::{Reconstruction, WenoParams};
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    Vortex,
    ShuOsher,
    Hit,
}

impl Case {
    pub fn name(&self) -> &'static str {
        match self {
            Case::Vortex => "vortex",
            Case::ShuOsher => "shu-osher",
            Case::Hit => "hit",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "vortex" => Some(Case::Vortex),
            "shu-osher" | "shu_osher" | "shuosher" => Some(Case::ShuOsher),
            "hit" => Some(Case::Hit),
            _ => None,
        }
    }
}

/// Fully resolved run configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub case: Case,
    pub nx: usize,
    pub cfl: f64,
    /// End time in seconds (vortex, shu-osher).
    pub t_end: f64,
    /// End time in eddy turnovers (hit).
    pub t_over_tau: f64,
    pub seed: u64,
    pub max_steps: usize,
    pub output_dir: String,
    pub scheme: SchemeConfig,
    pub gas_gamma: f64,
    pub gas_cp: f64,
    pub gas_prandtl: f64,
    pub vortex: VortexParams,
    pub shu: ShuOsherParams,
    pub hit: HitParams,
    /// Series sampling interval in the case's time unit (t/tau for hit,
    /// seconds otherwise); zero samples every step.
    pub series_interval: f64,
    pub series: bool,
    /// Snapshot times in the case's time unit.
    pub snapshot_times: Vec<f64>,
    /// Spectrum times in t/tau (hit only).
    pub spectrum_times: Vec<f64>,
    /// Convergence driver: resolutions and reference.
    pub resolutions: Vec<usize>,
    pub reference_nx: usize,
    pub reference_scheme: SchemeConfig,
    /// Campaign driver: scheme specs like "weno-z5" or "weno-z5+gauss2".
    pub campaign_schemes: Vec<SchemeConfig>,
}

impl Config {
    pub fn defaults(case: Case) -> Self {
        let scheme = SchemeConfig::new(Reconstruction::WenoZ5, Quadrature::Midpoint);
        let reference_scheme = SchemeConfig::new(Reconstruction::WenoZ5, Quadrature::Gauss2);
        let (nx, cfl, t_end, series_interval) = match case {
            Case::Vortex => (64, 0.7, 5.0e-3, 5.0e-3 / 200.0),
            Case::ShuOsher => (256, 0.5, 1.2, 1.2 / 200.0),
            Case::Hit => (32, 0.5, 0.0, 0.05),
        };
        let resolutions = match case {
            Case::Vortex => vec![32, 64, 128, 256],
            Case::ShuOsher => vec![256, 512, 1024, 2048],
            Case::Hit => vec![32, 64],
        };
        Self {
            case,
            nx,
            cfl,
            t_end,
            t_over_tau: 4.0,
            seed: 42,
            max_steps: 2_000_000,
            output_dir: "out".into(),
            scheme,
            gas_gamma: 1.4,
            gas_cp: 1173.0,
            gas_prandtl: 0.71,
            vortex: VortexParams::default(),
            shu: ShuOsherParams::default(),
            hit: HitParams::default(),
            series_interval,
            series: true,
            snapshot_times: Vec::new(),
            spectrum_times: if case == Case::Hit { vec![4.0] } else { Vec::new() },
            resolutions,
            reference_nx: 16384,
            reference_scheme,
            campaign_schemes: vec![
                SchemeConfig::new(Reconstruction::WenoZ3, Quadrature::Midpoint),
                SchemeConfig::new(Reconstruction::WenoZ5, Quadrature::Midpoint),
                SchemeConfig::new(Reconstruction::WenoZ7, Quadrature::Midpoint),
            ],
        }
    }

    /// Parses file text plus `--set` overrides; later assignments win.
    pub fn from_text(text: &str, overrides: &[String]) -> Result<Self, String> {
        let mut pairs: Vec<(String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key=value, got `{raw}`", lineno + 1))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        for s in overrides {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| format!("--set expects key=value, got `{s}`"))?;
            pairs.push((k.trim().to_string(), v.trim().to_string()));
        }
        let case_str = pairs
            .iter()
            .rev()
            .find(|(k, _)| k == "case")
            .map(|(_, v)| v.clone())
            .ok_or("missing required key `case`")?;
        let case = Case::parse(&case_str).ok_or_else(|| {
            format!("case: unknown value `{case_str}` (expected vortex, shu-osher or hit)")
        })?;
        let mut cfg = Self::defaults(case);
        for (k, v) in &pairs {
            cfg.apply(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<(), String> {
        let bad = |what: &str| format!("{key}: invalid {what} `{value}`");
        let f = |v: &str| v.parse::<f64>().map_err(|_| bad("number"));
        let u = |v: &str| v.parse::<usize>().map_err(|_| bad("integer"));
        match key {
            "case" => {} // handled up front
            "nx" => self.nx = u(value)?,
            "cfl" => self.cfl = f(value)?,
            "t_end" => self.t_end = f(value)?,
            "t_over_tau" => self.t_over_tau = f(value)?,
            "seed" => self.seed = value.parse().map_err(|_| bad("integer"))?,
            "max_steps" => self.max_steps = u(value)?,
            "output_dir" => self.output_dir = value.to_string(),
            "scheme.reconstruction" => {
                self.scheme.reconstruction =
                    Reconstruction::parse(value).ok_or_else(|| bad("reconstruction"))?
            }
            "scheme.face_quadrature" => {
                self.scheme.quadrature = Quadrature::parse(value).ok_or_else(|| bad("quadrature"))?
            }
            "scheme.variables" => {
                self.scheme.variables =
                    ReconVariables::parse(value).ok_or_else(|| bad("variable set"))?
            }
            "scheme.riemann" => {
                self.scheme.riemann = RiemannSolver::parse(value).ok_or_else(|| bad("solver"))?
            }
            "scheme.weno_epsilon" => self.scheme.weno.epsilon = f(value)?,
            "scheme.weno_a" => self.scheme.weno.a = value.parse().map_err(|_| bad("integer"))?,
            "gas.gamma" => self.gas_gamma = f(value)?,
            "gas.cp" => self.gas_cp = f(value)?,
            "gas.prandtl" => self.gas_prandtl = f(value)?,
            "vortex.side" => self.vortex.side = f(value)?,
            "vortex.strength" => self.vortex.strength = f(value)?,
            "vortex.radius" => self.vortex.radius = f(value)?,
            "vortex.u0" => self.vortex.u0 = f(value)?,
            "vortex.t_ref" => self.vortex.t_ref = f(value)?,
            "vortex.p_ref" => self.vortex.p_ref = f(value)?,
            "shu.jump" => self.shu.jump_position = f(value)?,
            "shu.amplitude" => self.shu.amplitude = f(value)?,
            "shu.wavenumber" => self.shu.wavenumber = f(value)?,
            "hit.mach" => self.hit.mach_t0 = f(value)?,
            "hit.reynolds" => self.hit.reynolds0 = f(value)?,
            "hit.k0" => self.hit.k0 = u(value)?,
            "hit.t0" => self.hit.t0 = f(value)?,
            "hit.p0" => self.hit.p0 = f(value)?,
            "hit.master_n" => self.hit.master_n = u(value)?,
            "output.series" => self.series = parse_bool(value).ok_or_else(|| bad("boolean"))?,
            "output.series_interval" => self.series_interval = f(value)?,
            "output.snapshot_times" => self.snapshot_times = parse_list_f64(value)?,
            "output.spectrum_times" => self.spectrum_times = parse_list_f64(value)?,
            "convergence.resolutions" => {
                self.resolutions =
                    value.split(',').map(|s| s.trim().parse().map_err(|_| bad("list"))).collect::<Result<_, _>>()?
            }
            "convergence.reference_nx" => self.reference_nx = u(value)?,
            "convergence.reference_scheme" => {
                self.reference_scheme = parse_scheme_spec(value).ok_or_else(|| bad("scheme"))?
            }
            "campaign.schemes" => {
                self.campaign_schemes = value
                    .split(',')
                    .map(|s| parse_scheme_spec(s.trim()))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| bad("scheme list"))?
            }
            _ => return Err(format!("unknown configuration key `{key}`")),
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), String> {
        if self.nx == 0 {
            return Err("nx must be positive".into());
        }
        if !(self.cfl > 0.0) {
            return Err(format!("cfl must be positive, got {}", self.cfl));
        }
        if self.case != Case::Hit && !(self.t_end > 0.0) {
            return Err(format!("t_end must be positive, got {}", self.t_end));
        }
        if self.case == Case::Hit && !(self.t_over_tau >= 0.0) {
            return Err("t_over_tau must be non-negative".into());
        }
        if !(self.gas_gamma > 1.0) {
            return Err("gas.gamma must exceed 1".into());
        }
        if self.scheme.weno.epsilon <= 0.0 {
            return Err("scheme.weno_epsilon must be positive".into());
        }
        if self.scheme.weno.a < 1 {
            return Err("scheme.weno_a must be at least 1".into());
        }
        Ok(())
    }

    pub fn gas(&self) -> GasModel {
        GasModel::from_gamma_cp(self.gas_gamma, self.gas_cp, self.gas_prandtl)
            .expect("validated gas parameters")
    }

    /// Canonical sorted key=value text of every resolved parameter; the
    /// audit-trail header embedded in every artifact.
    pub fn resolved_text(&self) -> String {
        let mut map: BTreeMap<&str, String> = BTreeMap::new();
        map.insert("case", self.case.name().into());
        map.insert("nx", self.nx.to_string());
        map.insert("cfl", fmt_f64(self.cfl));
        map.insert("t_end", fmt_f64(self.t_end));
        map.insert("t_over_tau", fmt_f64(self.t_over_tau));
        map.insert("seed", self.seed.to_string());
        map.insert("max_steps", self.max_steps.to_string());
        map.insert("scheme.reconstruction", self.scheme.reconstruction.name().into());
        map.insert("scheme.face_quadrature", self.scheme.quadrature.name().into());
        map.insert("scheme.variables", self.scheme.variables.name().into());
        map.insert("scheme.riemann", self.scheme.riemann.name().into());
        map.insert("scheme.weno_epsilon", fmt_f64(self.scheme.weno.epsilon));
        map.insert("scheme.weno_a", self.scheme.weno.a.to_string());
        map.insert("gas.gamma", fmt_f64(self.gas_gamma));
        map.insert("gas.cp", fmt_f64(self.gas_cp));
        map.insert("gas.prandtl", fmt_f64(self.gas_prandtl));
        match self.case {
            Case::Vortex => {
                map.insert("vortex.side", fmt_f64(self.vortex.side));
                map.insert("vortex.strength", fmt_f64(self.vortex.strength));
                map.insert("vortex.radius", fmt_f64(self.vortex.radius));
                map.insert("vortex.u0", fmt_f64(self.vortex.u0));
                map.insert("vortex.t_ref", fmt_f64(self.vortex.t_ref));
                map.insert("vortex.p_ref", fmt_f64(self.vortex.p_ref));
            }
            Case::ShuOsher => {
                map.insert("shu.jump", fmt_f64(self.shu.jump_position));
                map.insert("shu.amplitude", fmt_f64(self.shu.amplitude));
                map.insert("shu.wavenumber", fmt_f64(self.shu.wavenumber));
            }
            Case::Hit => {
                map.insert("hit.mach", fmt_f64(self.hit.mach_t0));
                map.insert("hit.reynolds", fmt_f64(self.hit.reynolds0));
                map.insert("hit.k0", self.hit.k0.to_string());
                map.insert("hit.t0", fmt_f64(self.hit.t0));
                map.insert("hit.p0", fmt_f64(self.hit.p0));
                map.insert("hit.master_n", self.hit.master_n.to_string());
            }
        }
        let mut out = String::new();
        for (k, v) in map {
            writeln!(out, "{k} = {v}").unwrap();
        }
        out
    }

    /// FNV-1a hash of the resolved configuration.
    pub fn hash(&self) -> u64 {
        fnv1a(self.resolved_text().as_bytes())
    }
}

fn parse_bool(v: &str) -> Option<bool> {
    match v {
        "true" | "1" | "yes" | "on" => Some(true),
        "false" | "0" | "no" | "off" => Some(false),
        _ => None,
    }
}

fn parse_list_f64(v: &str) -> Result<Vec<f64>, String> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("invalid number `{s}`")))
        .collect()
}

/// `recon[+quadrature]`, e.g. `weno-z5` or `weno-z5+gauss2`.
pub fn parse_scheme_spec(s: &str) -> Option<SchemeConfig> {
    let (recon_s, quad_s) = match s.split_once('+') {
        Some((r, q)) => (r, q),
        None => (s, "midpoint"),
    };
    let recon = Reconstruction::parse(recon_s.trim())?;
    let quad = Quadrature::parse(quad_s.trim())?;
    Some(SchemeConfig { weno: WenoParams::default(), ..SchemeConfig::new(recon, quad) })
}

/// Round-trip-exact float formatting (17 significant digits).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}
