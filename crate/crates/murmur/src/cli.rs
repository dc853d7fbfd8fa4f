//! Subcommands and their JSON/CSV outputs.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use murmur_core::discriminants::{
    disc_power_sum, family_size_main, is_fundamental, q_star, second_moment_probe,
};
use murmur_core::lfunc::{
    euler_identity_check, l_afe, mean_value_main, mean_value_main_for_family,
};
use murmur_core::murmur::{exponent_schedule, l2_residual_ratio, sweep_grid, RhsMode};
use murmur_core::Complex64;
use num_rational::Ratio;
use serde_json::{json, Value};

use crate::config::{parse_character, parse_ratio, CharacterSpec, Preset, RunConfig};
use crate::output::{complex, sidecar_path, write_csv, write_json, Summary};
use crate::{parallel, CliError};

#[derive(Debug, Parser)]
#[command(name = "murmur", version, about = "Murmurations of quadratic twist families of GL(1) L-functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count the family F and compare with its main term.
    Family(ConfigArgs),
    /// Sum of d^z over fundamental discriminants in a residue class.
    Powersum(PowerSumArgs),
    /// Second moment of character sums over non-square n.
    Moment(MomentArgs),
    /// Approximate functional equation against the reference evaluator.
    Lcheck(PointArgs),
    /// Both sides of the Euler-product identity.
    Euler(EulerArgs),
    /// Family mean of L(s, φ⊗χ_d) against its main term.
    Meanvalue(MeanValueArgs),
    /// Averaged coefficient sums against the inverse-Mellin main term.
    Compare(ConfigArgs),
    /// Optimised exponents for a given family-size exponent.
    Schedule(ScheduleArgs),
}

/// Preset, config file and per-field overrides.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigArgs {
    /// JSON config merged over the preset.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Character as inline JSON or a path to a JSON file.
    #[arg(long, value_parser = parse_character)]
    pub character: Option<CharacterSpec>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub d0: Option<f64>,
    #[arg(long)]
    pub d1: Option<f64>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    pub ell: Option<i64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub prime_cutoff: Option<u64>,
    #[arg(long)]
    pub abscissa: Option<f64>,
    #[arg(long)]
    pub x_min_factor: Option<f64>,
    #[arg(long)]
    pub x_max_factor: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<RhsMode>,
    #[arg(long = "afe-a")]
    pub afe_a: Option<f64>,
    #[arg(long = "afe-b")]
    pub afe_b: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s0: Option<f64>,
    #[arg(long = "cv")]
    pub c_v: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

fn parse_mode(text: &str) -> Result<RhsMode, String> {
    match text {
        "sharp" => Ok(RhsMode::Sharp),
        "smoothed" => Ok(RhsMode::Smoothed),
        _ => Err(format!("mode must be sharp or smoothed, got {text:?}")),
    }
}

macro_rules! set {
    ($($flag:expr => $slot:expr),* $(,)?) => {
        $(if let Some(v) = $flag.clone() { $slot = v; })*
    };
}

impl ConfigArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut c = RunConfig::layered(self.preset.unwrap_or(Preset::Fig1Desk), self.config.as_deref())?;
        set! {
            self.character => c.representation.character,
            self.tau => c.representation.tau,
            self.d0 => c.family.d0,
            self.d1 => c.family.d1,
            self.q => c.family.q,
            self.ell => c.family.ell,
            self.t_max => c.quadrature.t_max,
            self.nodes => c.quadrature.nodes,
            self.prime_cutoff => c.quadrature.prime_cutoff,
            self.x_min_factor => c.sweep.x_min_factor,
            self.x_max_factor => c.sweep.x_max_factor,
            self.points => c.sweep.points,
            self.mode => c.sweep.mode,
            self.afe_a => c.afe.a,
            self.afe_b => c.afe.b,
            self.alpha => c.afe.alpha,
            self.beta => c.afe.beta,
            self.s0 => c.afe.s0,
            self.c_v => c.afe.c_v,
        }
        if self.abscissa.is_some() {
            c.quadrature.abscissa = self.abscissa;
        }
        // Written out so the sidecar records the line actually used.
        c.quadrature.abscissa = Some(c.abscissa());
        if self.out.is_some() {
            c.output = self.out.clone();
        }
        Ok(c)
    }
}

/// A point `s = σ + it`.
#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t: f64,
}

impl PointArgs {
    fn s(&self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }
}

#[derive(Debug, Clone, Args)]
pub struct EulerArgs {
    #[command(flatten)]
    pub point: PointArgs,
    /// Terms of the Dirichlet series.
    #[arg(long, default_value_t = 100_000)]
    pub n_max: u64,
    /// Euler-product primes are `p < P`.
    #[arg(long = "product-cutoff", default_value_t = 100_000)]
    pub product_cutoff: u64,
}

#[derive(Debug, Clone, Args)]
pub struct MeanValueArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long = "product-cutoff", default_value_t = 100_000)]
    pub product_cutoff: u64,
}

#[derive(Debug, Clone, Args)]
pub struct PowerSumArgs {
    #[arg(long)]
    pub d_max: f64,
    #[arg(long)]
    pub q: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub ell: i64,
    #[arg(long, default_value_t = 1)]
    pub m: u64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub z_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub z_im: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MomentArgs {
    #[arg(long)]
    pub n_max: f64,
    #[arg(long)]
    pub d_max: f64,
    #[arg(long)]
    pub f: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub ell: i64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ScheduleArgs {
    /// `log #F / log D` as `a/b`.
    #[arg(long, value_parser = parse_ratio, allow_hyphen_values = true)]
    pub delta: Ratio<i64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Run a command, writing its primary output to `out` unless a path is given.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Family(a) => emit(out, a.out.as_ref(), &family(a)?),
        Command::Powersum(a) => emit(out, a.out.as_ref(), &powersum(a)?),
        Command::Moment(a) => emit(out, a.out.as_ref(), &moment(a)?),
        Command::Lcheck(a) => emit(out, a.config.out.as_ref(), &lcheck(a)?),
        Command::Euler(a) => emit(out, a.point.config.out.as_ref(), &euler(a)?),
        Command::Meanvalue(a) => {
            let value = in_pool(a.point.config.workers, || meanvalue(a))?;
            emit(out, a.point.config.out.as_ref(), &value)
        }
        Command::Compare(a) => compare(a, out),
        Command::Schedule(a) => emit(out, a.out.as_ref(), &schedule(a.delta)?),
    }
}

fn in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    parallel::pool(workers).install(f)
}

fn emit(out: &mut dyn Write, path: Option<&PathBuf>, value: &Value) -> Result<(), CliError> {
    match path {
        Some(p) => write_json(std::fs::File::create(p)?, value),
        None => write_json(out, value),
    }
}

fn ratio(brute: Complex64, main: Complex64) -> Value {
    complex(brute / main)
}

fn family(a: &ConfigArgs) -> Result<Value, CliError> {
    let c = a.resolve()?;
    let fam = c.family()?;
    let f = &c.family;
    let qs = q_star(f.q);
    let residue = f.ell.rem_euclid(qs as i64) as u64;
    // An independent scan of every integer in the window.
    let lo = f.d0.floor() as i64 + 1;
    let hi = f.d1.ceil() as i64 - 1;
    let brute = (lo.max(1)..=hi)
        .filter(|&d| (d as f64) > f.d0 && (d as f64) < f.d1)
        .filter(|&d| d as u64 % qs == residue && is_fundamental(d as u64))
        .count();
    if brute != fam.len() {
        return Err(murmur_core::Error::InvalidParameters(format!(
            "enumeration gave {} members, direct scan {brute}",
            fam.len()
        ))
        .into());
    }
    let main = family_size_main(&fam);
    Ok(json!({
        "inputs": {"d0": f.d0, "d1": f.d1, "q": f.q, "ell": f.ell, "q_star": qs},
        "count": fam.len(),
        "brute": brute,
        "main": main,
        "ratio": brute as f64 / main,
    }))
}

fn powersum(a: &PowerSumArgs) -> Result<Value, CliError> {
    let z = Complex64::new(a.z_re, a.z_im);
    let r = disc_power_sum(a.d_max, a.q, a.ell, a.m, z)?;
    Ok(json!({
        "inputs": {"d_max": a.d_max, "q": a.q, "ell": a.ell, "m": a.m, "z": complex(z)},
        "brute": complex(r.brute),
        "main": complex(r.main),
        "ratio": ratio(r.brute, r.main),
        "eta": r.eta.to_string(),
        "normalized_gap": (r.brute - r.main).norm() / a.d_max.powf(z.re + 1.0),
        "error_scale": r.error_scale,
    }))
}

fn moment(a: &MomentArgs) -> Result<Value, CliError> {
    let r = second_moment_probe(a.n_max, a.d_max, a.f, a.ell)?;
    let main = r.bound_terms.0 + r.bound_terms.1;
    Ok(json!({
        "inputs": {"n_max": a.n_max, "d_max": a.d_max, "f": a.f, "ell": a.ell},
        "brute": r.lhs,
        "main": main,
        "bound_terms": [r.bound_terms.0, r.bound_terms.1],
        "ratio": r.ratio(),
    }))
}

fn lcheck(a: &PointArgs) -> Result<Value, CliError> {
    let c = a.config.resolve()?;
    let rep = c.representation()?;
    let p = c.afe()?;
    let s = a.s();
    let afe = l_afe(&rep, s, &p)?;
    let reference = rep.l_reference(s)?;
    Ok(json!({
        "inputs": {"representation": c.representation, "afe": c.afe, "s": complex(s)},
        "afe": complex(afe),
        "reference": complex(reference),
        "abs_diff": (afe - reference).norm(),
    }))
}

fn euler(a: &EulerArgs) -> Result<Value, CliError> {
    let c = a.point.config.resolve()?;
    let rep = c.representation()?;
    let s = a.point.s();
    let r = euler_identity_check(&rep, s, a.n_max, a.product_cutoff)?;
    Ok(json!({
        "inputs": {"representation": c.representation, "s": complex(s), "n_max": a.n_max, "product_cutoff": a.product_cutoff},
        "lhs": complex(r.lhs),
        "rhs": complex(r.rhs),
        "lhs_tail": r.lhs_tail,
        "rhs_tail": r.rhs_tail,
        "relative_gap": r.relative_gap(),
    }))
}

fn meanvalue(a: &MeanValueArgs) -> Result<Value, CliError> {
    let c = a.point.config.resolve()?;
    c.validate()?;
    let rep = c.representation()?;
    let fam = c.family()?;
    let s = a.point.s();
    let empirical = parallel::mean_value(&rep, &fam, s, &c.afe()?)?;
    let main = mean_value_main(&rep, s, a.product_cutoff)?;
    let matched = mean_value_main_for_family(&rep, &fam, s, a.product_cutoff)?;
    Ok(json!({
        "inputs": {"representation": c.representation, "family": c.family, "afe": c.afe, "s": complex(s), "product_cutoff": a.product_cutoff},
        "family_size": fam.len(),
        "empirical": complex(empirical),
        "main": complex(main.value),
        "main_tail": main.tail,
        "gap": (empirical - main.value).norm(),
        "main_two_adjusted": complex(matched.value),
        "gap_two_adjusted": (empirical - matched.value).norm(),
    }))
}

fn compare(a: &ConfigArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let start = Instant::now();
    let c = a.resolve()?;
    c.validate()?;
    let rep = c.representation()?;
    let fam = c.family()?;
    if fam.is_empty() {
        return Err(murmur_core::Error::EmptyFamily.into());
    }
    let spec = c.quadrature()?;
    let xs = sweep_grid(&rep, &fam, c.sweep.x_min_factor, c.sweep.x_max_factor, c.sweep.points);
    let (integrand, rows) = in_pool(a.workers, || parallel::compare(&rep, &fam, &xs, &spec, c.sweep.mode))?;
    let summary = Summary {
        l2_residual_ratio: l2_residual_ratio(&rows),
        runtime_seconds: start.elapsed().as_secs_f64(),
        family_size: fam.len(),
        qd_over_pi: rep.conductor() as f64 * fam.d1 / std::f64::consts::PI,
        omega_family: complex(integrand.omega_family()),
        product_tail: integrand.product_tail(),
        config: c.clone(),
    };
    match &c.output {
        Some(path) => {
            write_csv(std::fs::File::create(path)?, &rows)?;
            write_json(std::fs::File::create(sidecar_path(path))?, &summary)?;
            write_json(out, &summary)
        }
        None => {
            write_csv(&mut *out, &rows)?;
            write_json(std::io::stderr(), &summary)
        }
    }
}

fn schedule(delta: Ratio<i64>) -> Result<Value, CliError> {
    let e = exponent_schedule(delta)?;
    let text = |r: Option<Ratio<i64>>| r.map(|r| r.to_string());
    Ok(json!({
        "delta": e.delta.to_string(),
        "alpha_hat": e.alpha_hat.to_string(),
        "beta_hat": text(e.beta_hat),
        "gamma_hat": text(e.gamma_hat),
        "rho_hat": text(e.rho_hat),
        "rho": text(e.rho),
        "rho_hat_f": e.rho_hat_f.to_string(),
        "lambda": e.lambda.to_string(),
    }))
}
