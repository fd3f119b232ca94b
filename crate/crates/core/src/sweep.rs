//! Scenario loading, `(C_T, t)` grid sweeps and CSV/text output.
//!
//! Scenario files are flat `key = value` text, one assignment per line,
//! with `#` starting a comment:
//!
//! ```text
//! name = custom
//! lambda = 0.1
//! d_mixed = 0.049
//! sigma_xx = 1
//! sigma_p_xp_x = 0.5
//! sigma_yy = 1
//! sigma_p_yp_y = 0.5
//! t_max = 50
//! n_t = 200
//! ```
//!
//! `lambda` and the four diagonal `sigma_*` entries are required; every
//! other key has a default.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use crate::asymptotics::classify_asymptotic;
use crate::entanglement::{logarithmic_negativity, ppt_symplectic_eigenvalues, simon_function, LogNegativity};
use crate::error::{Error, Result};
use crate::model::{
    build_thermal_diffusion, validate_dissipator, validate_state, CovarianceEntries, CovarianceMatrix,
    EnvironmentParams,
};
use crate::propagator::Propagator;

pub const CSV_HEADER: &str = "t,c_thermal,s_simon,log_negativity,nu_tilde_minus";

/// Evenly spaced inclusive grid. A single point sits at `min`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, n: usize) -> Self {
        Grid { min, max, n }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.n - 1) as f64;
        (0..self.n)
            .map(|i| if i == self.n - 1 { self.max } else { self.min + step * i as f64 })
            .collect()
    }
}

pub const DEFAULT_T_GRID: Grid = Grid { min: 0.0, max: 50.0, n: 200 };
pub const DEFAULT_C_GRID: Grid = Grid { min: 1.0, max: 3.0, n: 100 };

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    /// `c_thermal` is overridden per grid row.
    pub params: EnvironmentParams,
    pub sigma0: CovarianceMatrix,
    pub t_grid: Grid,
    pub c_grid: Grid,
    pub allow_unphysical_initial: bool,
    /// Abort when the dissipator fails full positivity at some `C_T`
    /// (otherwise only the pairwise bounds are enforced).
    pub strict_cp: bool,
}

fn field_err(field: &str, reason: impl Into<String>) -> Error {
    Error::Field {
        field: field.to_string(),
        reason: reason.into(),
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        for (prefix, g) in [("t", &self.t_grid), ("c", &self.c_grid)] {
            if g.n < 1 {
                return Err(field_err(&format!("n_{prefix}"), "must be >= 1"));
            }
            if !(g.min.is_finite() && g.max.is_finite()) || g.max < g.min {
                return Err(field_err(
                    &format!("{prefix}_max"),
                    format!("grid [{}, {}] is empty or not finite", g.min, g.max),
                ));
            }
        }
        if self.t_grid.min < 0.0 {
            return Err(field_err("t_min", "must be >= 0"));
        }
        if self.c_grid.min < 1.0 {
            return Err(field_err("c_min", "must be >= 1"));
        }
        self.params.validate()?;
        if !self.allow_unphysical_initial {
            let report = validate_state(&self.sigma0);
            if report.is_state_physical != Some(true) {
                return Err(Error::UnphysicalInitial {
                    nu_minus: report.nu_minus.unwrap_or(f64::NAN),
                });
            }
        }
        Ok(())
    }

    fn figure_base(name: &str, sigma0: CovarianceMatrix) -> Scenario {
        Scenario {
            name: name.to_string(),
            params: EnvironmentParams {
                lambda: 0.1,
                d_mixed: 0.049,
                c_thermal: DEFAULT_C_GRID.min,
                ..Default::default()
            },
            sigma0,
            t_grid: DEFAULT_T_GRID,
            c_grid: DEFAULT_C_GRID,
            allow_unphysical_initial: false,
            strict_cp: false,
        }
    }

    /// Separable initial state `diag(1, 1/2, 1, 1/2)`.
    pub fn fig1() -> Scenario {
        Self::figure_base("fig1", CovarianceMatrix::diagonal(1.0, 0.5, 1.0, 0.5))
    }

    /// Entangled initial state with `sigma_xy = 1/2`, `sigma_pxpy = -1/2`.
    /// Its smallest symplectic eigenvalue is 0, so it only loads with the
    /// unphysical-state override.
    pub fn fig2() -> Scenario {
        let sigma0 = CovarianceMatrix::from_entries(&CovarianceEntries {
            xx: 1.0,
            p_xp_x: 0.5,
            yy: 1.0,
            p_yp_y: 0.5,
            xy: 0.5,
            p_xp_y: -0.5,
            ..Default::default()
        });
        Self::figure_base("fig2", sigma0)
    }

    pub fn preset(name: &str) -> Option<Scenario> {
        match name {
            "fig1" => Some(Self::fig1()),
            "fig2" => Some(Self::fig2()),
            _ => None,
        }
    }
}

/// Loads a preset (`fig1`, `fig2`) or a scenario file, then validates it.
/// `allow_unphysical` is OR-ed with the file's own setting.
pub fn load_scenario(source: &str, allow_unphysical: bool) -> Result<Scenario> {
    let mut scenario = match Scenario::preset(source) {
        Some(s) => s,
        None => {
            let text = std::fs::read_to_string(source).map_err(|source_err| Error::Io {
                path: source.into(),
                source: source_err,
            })?;
            parse_scenario(&text, source)?
        }
    };
    scenario.allow_unphysical_initial |= allow_unphysical;
    scenario.validate()?;
    Ok(scenario)
}

/// Parses scenario text. `origin` names the source in error messages.
/// Does not run [`Scenario::validate`].
pub fn parse_scenario(text: &str, origin: &str) -> Result<Scenario> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: origin.to_string(),
        line,
        message,
    };

    let mut seen = HashSet::new();
    let mut name = Path::new(origin)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into());
    let mut params = EnvironmentParams::default();
    let mut lambda = None;
    let mut entries = CovarianceEntries::default();
    let mut t_grid = DEFAULT_T_GRID;
    let mut c_grid = DEFAULT_C_GRID;
    let mut allow_unphysical_initial = false;
    let mut strict_cp = false;

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(lineno, format!("expected `key = value`, got `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if !seen.insert(key.to_string()) {
            return Err(parse_err(lineno, format!("duplicate key `{key}`")));
        }
        let num = || {
            value
                .parse::<f64>()
                .map_err(|_| parse_err(lineno, format!("`{key}`: `{value}` is not a number")))
        };
        let count = || {
            value
                .parse::<usize>()
                .map_err(|_| parse_err(lineno, format!("`{key}`: `{value}` is not a non-negative integer")))
        };
        let flag = || match value {
            "true" | "1" | "yes" => Ok(true),
            "false" | "0" | "no" => Ok(false),
            _ => Err(parse_err(lineno, format!("`{key}`: `{value}` is not a boolean"))),
        };
        match key {
            "name" => name = value.to_string(),
            "lambda" => lambda = Some(num()?),
            "mass" | "m" => params.mass = num()?,
            "omega" => params.omega = num()?,
            "d_mixed" => params.d_mixed = num()?,
            "d_xy" => params.d_xy = num()?,
            "t_min" => t_grid.min = num()?,
            "t_max" => t_grid.max = num()?,
            "n_t" => t_grid.n = count()?,
            "c_min" => c_grid.min = num()?,
            "c_max" => c_grid.max = num()?,
            "n_c" => c_grid.n = count()?,
            "allow_unphysical_initial" => allow_unphysical_initial = flag()?,
            "strict_cp" => strict_cp = flag()?,
            _ => {
                let slot = key
                    .strip_prefix("sigma_")
                    .and_then(|entry| entries.get_mut(entry))
                    .ok_or_else(|| parse_err(lineno, format!("unknown key `{key}`")))?;
                *slot = num()?;
            }
        }
    }

    params.lambda = lambda.ok_or_else(|| field_err("lambda", "missing"))?;
    for required in ["sigma_xx", "sigma_p_xp_x", "sigma_yy", "sigma_p_yp_y"] {
        if !seen.contains(required) {
            return Err(field_err(required, "missing"));
        }
    }
    params.c_thermal = c_grid.min;

    Ok(Scenario {
        name,
        params,
        sigma0: CovarianceMatrix::from_entries(&entries),
        t_grid,
        c_grid,
        allow_unphysical_initial,
        strict_cp,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub t: f64,
    pub c_thermal: f64,
    pub s_simon: f64,
    pub log_negativity: LogNegativity,
    pub nu_tilde_minus: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    /// Row-major: `C_T` outer, `t` inner.
    pub records: Vec<SweepRecord>,
    pub warnings: Vec<String>,
}

fn list_values(values: &[f64]) -> String {
    let shown: Vec<String> = values.iter().take(8).map(|v| format_float(*v)).collect();
    let more = if values.len() > 8 {
        format!(", ... ({} total)", values.len())
    } else {
        String::new()
    };
    format!("{}{more}", shown.join(", "))
}

/// One row of the sweep at fixed `C_T`.
pub fn sweep_row(scenario: &Scenario, c_thermal: f64, times: &[f64]) -> Result<Vec<SweepRecord>> {
    let params = scenario.params.with_c_thermal(c_thermal)?;
    let propagator = Propagator::new(&params)?;
    times
        .iter()
        .map(|&t| {
            let sigma = propagator.at(&scenario.sigma0, t)?;
            let (nu_tilde_minus, _) = ppt_symplectic_eigenvalues(&sigma)?;
            Ok(SweepRecord {
                t,
                c_thermal,
                s_simon: simon_function(&sigma),
                log_negativity: logarithmic_negativity(&sigma),
                nu_tilde_minus,
            })
        })
        .collect()
}

/// Evaluates S, E_N and nu~_- on the full `(C_T, t)` grid.
///
/// Every `C_T` in the grid is checked before any propagation: failing the
/// pairwise dissipator bounds aborts; failing only full positivity is a
/// warning unless `strict_cp` is set.
pub fn run_sweep(scenario: &Scenario) -> Result<SweepOutput> {
    scenario.validate()?;
    let cs = scenario.c_grid.points();
    let ts = scenario.t_grid.points();

    let mut pairwise_fail = Vec::new();
    let mut cp_fail = Vec::new();
    for &c in &cs {
        let params = scenario.params.with_c_thermal(c)?;
        let report = validate_dissipator(&build_thermal_diffusion(&params)?, params.lambda);
        if report.satisfies_cauchy_schwarz != Some(true) {
            pairwise_fail.push(c);
        } else if report.is_cp_valid != Some(true) {
            cp_fail.push(c);
        }
    }
    if !pairwise_fail.is_empty() {
        return Err(Error::InvalidDissipator(format!(
            "pairwise bounds (lambda C_T/2 >= d) fail at C_T = {}",
            list_values(&pairwise_fail)
        )));
    }
    let mut warnings = Vec::new();
    if !cp_fail.is_empty() {
        let msg = format!(
            "dissipator is not completely positive at {} of {} C_T values: {}",
            cp_fail.len(),
            cs.len(),
            list_values(&cp_fail)
        );
        if scenario.strict_cp {
            return Err(Error::InvalidDissipator(msg));
        }
        warnings.push(msg);
    }
    if validate_state(&scenario.sigma0).is_state_physical != Some(true) {
        warnings.push("initial state violates nu_- >= 1/2 (override in effect)".into());
    }

    let mut records = Vec::with_capacity(cs.len() * ts.len());
    for &c in &cs {
        records.extend(sweep_row(scenario, c, &ts)?);
    }
    Ok(SweepOutput { records, warnings })
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Formats with 12 significant digits, printf `%.12g` style (trailing zeros
/// dropped, exponent form outside `1e-5 ..= 1e12`). Non-finite values print
/// as `inf`, `-inf`, `nan`; negative zero prints as `0`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn format_negativity(e: LogNegativity) -> String {
    match e {
        LogNegativity::Finite(v) => format_float(v),
        LogNegativity::Infinite => "inf".into(),
    }
}

pub fn write_csv<W: Write>(records: &[SweepRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{}",
            format_float(r.t),
            format_float(r.c_thermal),
            format_float(r.s_simon),
            format_negativity(r.log_negativity),
            format_float(r.nu_tilde_minus)
        )?;
    }
    out.flush()
}

pub fn emit_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io_err)?;
    write_csv(records, io::BufWriter::new(file)).map_err(io_err)
}

/// Parses CSV written by [`write_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<SweepRecord>> {
    let mut lines = text.lines().enumerate();
    let bad = |line: usize, message: String| Error::Parse {
        path: "<csv>".into(),
        line,
        message,
    };
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => return Err(bad(1, "missing CSV header".into())),
    }
    lines
        .map(|(i, line)| {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 5 {
                return Err(bad(i + 1, format!("expected 5 columns, got {}", cols.len())));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| bad(i + 1, format!("`{s}` is not a number")))
            };
            let log_negativity = if cols[3] == "inf" {
                LogNegativity::Infinite
            } else {
                LogNegativity::Finite(num(cols[3])?)
            };
            Ok(SweepRecord {
                t: num(cols[0])?,
                c_thermal: num(cols[1])?,
                s_simon: num(cols[2])?,
                log_negativity,
                nu_tilde_minus: num(cols[4])?,
            })
        })
        .collect()
}

/// Plain-text summary of the asymptotic state for `params`.
pub fn report_asymptotics(params: &EnvironmentParams) -> Result<String> {
    let c = classify_asymptotic(params)?;
    let dissipator = validate_dissipator(&build_thermal_diffusion(params)?, params.lambda);
    let mut out = String::new();
    let fmt = format_float;
    // writing to a String cannot fail
    let _ = writeln!(out, "{}, E_N(∞)={}", c.kind, fmt(c.log_negativity_inf));
    let _ = writeln!(
        out,
        "thresholds: C_T-1={} C_T+1={} 2|d|/Lambda={}",
        fmt(c.thresholds.0),
        fmt(c.thresholds.1),
        fmt(c.coupling)
    );
    match c.squeezing_r {
        Some(r) => {
            let _ = writeln!(out, "squeezing r={}", fmt(r));
        }
        None => {
            let _ = writeln!(out, "squeezing r=n/a (d_xy != 0)");
        }
    }
    if dissipator.is_cp_valid != Some(true) {
        let _ = writeln!(
            out,
            "warning: dissipator satisfies the pairwise bounds but is not completely positive"
        );
    }
    let _ = writeln!(out, "sigma(∞):");
    for (name, (i, j)) in CovarianceEntries::POSITIONS {
        let _ = writeln!(out, "  sigma_{name} = {}", fmt(c.sigma_inf.entry(i, j)));
    }
    Ok(out)
}
