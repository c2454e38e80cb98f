//! `nongauss` — command-line surface for the heralded non-Gaussian state
//! numerics: wavefunction and Wigner-grid dumps, negativity and entanglement
//! sweeps, fidelity/probability optimization reports, and the brute-force
//! oracle verification suite.
//!
//! Output conventions: CSV grids with a header row and 17-significant-digit
//! floats, JSON for scalar reports and sidecar metadata. Identical flags
//! produce byte-identical output. Exit codes: 2 bad flags, 3 precondition
//! violations, 4 verification failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use nongauss::fock;
use nongauss::optimize;
use nongauss::scheme::{herald_probability, output_wavefunction, SchemeParams};
use nongauss::targets;
use nongauss::{db_to_nepers, entanglement, phase_space, quad, GridSpec};

const PI: f64 = std::f64::consts::PI;

#[derive(Parser)]
#[command(name = "nongauss", version, about = "Heralded non-Gaussian state generation numerics")]
struct Cli {
    /// TOML file supplying defaults for any flag of the chosen subcommand
    /// (same key names, e.g. `r = 1.0`, `phi = "pi"`).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample the heralded output wavefunction on a uniform grid.
    Wavefunction(WavefunctionArgs),
    /// Wigner negativity over a (phi, t) grid at fixed r and n.
    NegativitySurface(NegativitySurfaceArgs),
    /// Entanglement-degree grid and separability boundary at fixed r.
    Entanglement(EntanglementArgs),
    /// Dense Wigner-function grid of the heralded state.
    Wigner(WignerArgs),
    /// Fidelity and heralding probability against a cat-like target.
    Fidelity(FidelityArgs),
    /// Cross-check the closed forms against the Fock-basis oracle.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SqueezeArg {
    /// Squeezing in nepers.
    #[arg(long, conflicts_with = "r_db")]
    r: Option<f64>,
    /// Squeezing in decibels (20 r / ln 10).
    #[arg(long)]
    r_db: Option<f64>,
}

#[derive(Args)]
struct WavefunctionArgs {
    #[command(flatten)]
    squeeze: SqueezeArg,
    /// Relative phase in radians; "pi" literals accepted (e.g. "0.5pi").
    #[arg(long, value_parser = parse_angle)]
    phi: Option<f64>,
    /// Beam-splitter amplitude transmission.
    #[arg(long)]
    t: Option<f64>,
    /// Detected photon number.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Output CSV path; a JSON sidecar is written next to it. Stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NegativitySurfaceArgs {
    #[command(flatten)]
    squeeze: SqueezeArg,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    phi_steps: Option<usize>,
    #[arg(long)]
    t_steps: Option<usize>,
    /// Self-convergence tolerance of each negativity evaluation.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EntanglementArgs {
    #[command(flatten)]
    squeeze: SqueezeArg,
    /// Grid points per axis; also the phase sampling of the boundary file.
    #[arg(long)]
    resolution: Option<usize>,
    /// Degree-grid CSV path; the boundary goes to `<stem>.boundary.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WignerArgs {
    #[command(flatten)]
    squeeze: SqueezeArg,
    #[arg(long, value_parser = parse_angle)]
    phi: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    /// Half-width of the square phase-space window.
    #[arg(long)]
    bound: Option<f64>,
    /// Points per axis.
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FidelityArgs {
    /// Target family: "cat" (odd, alpha = 2) or "scat" (odd, alpha = 1/2, R = 1).
    #[arg(long)]
    target: Option<String>,
    #[command(flatten)]
    squeeze: SqueezeArg,
    #[arg(long, value_parser = parse_angle)]
    phi: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// Report the closed-form optimum (with a maximizer confirmation)
    /// instead of evaluating one parameter point.
    #[arg(long)]
    optimize: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Points per axis of the (r, phi, t) verification grid.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Fock cutoff override (default: cutoff rule per r).
    #[arg(long)]
    cutoff: Option<usize>,
    /// Largest herald count checked.
    #[arg(long)]
    max_n: Option<usize>,
    /// Override of the 1-F tolerance (default 1e-6).
    #[arg(long)]
    tol_fidelity: Option<f64>,
}

/// Radians, with "pi" literals: "pi", "0.5pi", "1.0".
fn parse_angle(s: &str) -> Result<f64, String> {
    let s = s.trim();
    if let Some(prefix) = s.strip_suffix("pi") {
        let prefix = prefix.trim();
        if prefix.is_empty() {
            return Ok(PI);
        }
        return prefix
            .parse::<f64>()
            .map(|m| m * PI)
            .map_err(|e| format!("bad angle '{s}': {e}"));
    }
    s.parse::<f64>().map_err(|e| format!("bad angle '{s}': {e}"))
}

enum CliError {
    /// Missing or malformed flags/config: exit 2.
    Usage(String),
    /// Valid flags, invalid mathematics (parameter bounds, impossible
    /// outcomes, non-convergence): exit 3.
    Precondition(String),
    /// Oracle disagreement in `verify`: exit 4.
    Verification(String),
}

impl CliError {
    fn exit(self) -> ExitCode {
        match self {
            CliError::Usage(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            CliError::Precondition(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(3)
            }
            CliError::Verification(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(4)
            }
        }
    }
}

fn precondition<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Precondition(e.to_string())
}

/// Flag/config/default resolver for one subcommand.
struct Resolver {
    table: toml::Table,
}

impl Resolver {
    fn load(path: &Option<PathBuf>) -> Result<Self, CliError> {
        let table = match path {
            None => toml::Table::new(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::Usage(format!("cannot read config {}: {e}", p.display()))
                })?;
                text.parse::<toml::Table>()
                    .map_err(|e| CliError::Usage(format!("bad config {}: {e}", p.display())))?
            }
        };
        Ok(Self { table })
    }

    fn f64(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.table.get(key) {
            None => Ok(None),
            Some(toml::Value::Float(v)) => Ok(Some(*v)),
            Some(toml::Value::Integer(v)) => Ok(Some(*v as f64)),
            Some(toml::Value::String(s)) => parse_angle(s)
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key '{key}': {e}"))),
            Some(other) => Err(CliError::Usage(format!(
                "config key '{key}' has non-numeric value {other}"
            ))),
        }
    }

    fn usize(&self, flag: Option<usize>, key: &str) -> Result<Option<usize>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.table.get(key) {
            None => Ok(None),
            Some(toml::Value::Integer(v)) if *v >= 0 => Ok(Some(*v as usize)),
            Some(other) => Err(CliError::Usage(format!(
                "config key '{key}' has non-integer value {other}"
            ))),
        }
    }

    fn string(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.table.get(key).and_then(|v| v.as_str().map(str::to_owned)))
    }

    /// Squeezing from --r / --r-db flags or config, in nepers.
    fn squeeze(&self, arg: &SqueezeArg) -> Result<f64, CliError> {
        let r = self.f64(arg.r, "r")?;
        let r_db = self.f64(arg.r_db, "r_db")?;
        match (r, r_db) {
            (Some(r), _) => Ok(r),
            (None, Some(db)) => Ok(db_to_nepers(db)),
            (None, None) => Err(CliError::Usage("missing --r or --r-db".into())),
        }
    }
}

fn require<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn emit(out: &Option<PathBuf>, csv: &str, sidecar: Option<serde_json::Value>) -> Result<(), CliError> {
    match out {
        None => {
            print!("{csv}");
            Ok(())
        }
        Some(path) => {
            std::fs::write(path, csv)
                .map_err(|e| CliError::Precondition(format!("cannot write {}: {e}", path.display())))?;
            if let Some(meta) = sidecar {
                let side = sidecar_path(path);
                let text = serde_json::to_string_pretty(&meta).expect("serializable metadata");
                std::fs::write(&side, text).map_err(|e| {
                    CliError::Precondition(format!("cannot write {}: {e}", side.display()))
                })?;
            }
            Ok(())
        }
    }
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".json");
    PathBuf::from(os)
}

fn params_json(p: &SchemeParams) -> serde_json::Value {
    json!({ "r": p.r(), "phi": p.phi(), "t": p.t(), "n": p.n() })
}

fn run_wavefunction(cli: &Cli, a: &WavefunctionArgs) -> Result<(), CliError> {
    let cfg = Resolver::load(&cli.config)?;
    let r = cfg.squeeze(&a.squeeze)?;
    let phi = require(cfg.f64(a.phi, "phi")?, "phi")?;
    let t = require(cfg.f64(a.t, "t")?, "t")?;
    let n = require(cfg.usize(a.n, "n")?, "n")?;
    let points = cfg.usize(a.points, "points")?.unwrap_or(1001);
    if points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let p = SchemeParams::new(r, phi, t, n).map_err(precondition)?;
    let wf = output_wavefunction(&p).map_err(precondition)?;
    let x_min = cfg.f64(a.x_min, "x_min")?.unwrap_or(-wf.support_halfwidth());
    let x_max = cfg.f64(a.x_max, "x_max")?.unwrap_or(wf.support_halfwidth());
    if !(x_max > x_min) {
        return Err(CliError::Usage("--x-max must exceed --x-min".into()));
    }
    let dx = (x_max - x_min) / (points - 1) as f64;
    let mut csv = String::from("x,re_psi,im_psi,abs2_psi\n");
    let mut norm = 0.0;
    for i in 0..points {
        let x = x_min + i as f64 * dx;
        let v = wf.evaluate(x);
        norm += v.norm_sqr() * dx;
        csv.push_str(&format!(
            "{x:.16e},{:.16e},{:.16e},{:.16e}\n",
            v.re,
            v.im,
            v.norm_sqr()
        ));
    }
    let sidecar = json!({
        "params": params_json(&p),
        "x_min": x_min,
        "x_max": x_max,
        "points": points,
        "normalization_residual": norm - 1.0,
    });
    emit(&a.out, &csv, Some(sidecar))
}

fn run_negativity_surface(cli: &Cli, a: &NegativitySurfaceArgs) -> Result<(), CliError> {
    let cfg = Resolver::load(&cli.config)?;
    let r = cfg.squeeze(&a.squeeze)?;
    let n = require(cfg.usize(a.n, "n")?, "n")?;
    let phi_steps = cfg.usize(a.phi_steps, "phi_steps")?.unwrap_or(9);
    let t_steps = cfg.usize(a.t_steps, "t_steps")?.unwrap_or(9);
    let tol = cfg.f64(a.tol, "tol")?.unwrap_or(1e-4);
    if phi_steps < 2 || t_steps < 2 {
        return Err(CliError::Usage("--phi-steps and --t-steps must be at least 2".into()));
    }
    if !(tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let mut csv = String::from("phi,t,negativity\n");
    let mut warnings = Vec::new();
    for i in 0..phi_steps {
        let phi = PI * i as f64 / (phi_steps - 1) as f64;
        for j in 0..t_steps {
            let t = j as f64 / (t_steps - 1) as f64;
            let neg = SchemeParams::new(r, phi, t, n)
                .map_err(|e| e.to_string())
                .and_then(|p| phase_space::wigner_negativity(&p, tol).map_err(|e| e.to_string()));
            match neg {
                Ok(v) => csv.push_str(&format!("{phi:.16e},{t:.16e},{v:.16e}\n")),
                Err(msg) => {
                    csv.push_str(&format!("{phi:.16e},{t:.16e},NaN\n"));
                    warnings.push(json!({ "phi": phi, "t": t, "message": msg }));
                }
            }
        }
    }
    let sidecar = json!({
        "r": r,
        "n": n,
        "phi_steps": phi_steps,
        "t_steps": t_steps,
        "tol": tol,
        "warnings": warnings,
    });
    emit(&a.out, &csv, Some(sidecar))
}

fn run_entanglement(cli: &Cli, a: &EntanglementArgs) -> Result<(), CliError> {
    let cfg = Resolver::load(&cli.config)?;
    let r = cfg.squeeze(&a.squeeze)?;
    if !(r >= 0.0 && r.is_finite()) {
        return Err(CliError::Precondition(format!("invalid squeezing r = {r}")));
    }
    let resolution = cfg.usize(a.resolution, "resolution")?.unwrap_or(101);
    if resolution < 2 {
        return Err(CliError::Usage("--resolution must be at least 2".into()));
    }
    let mut csv = String::from("phi,t,degree\n");
    for i in 0..resolution {
        let phi = PI * i as f64 / (resolution - 1) as f64;
        for j in 0..resolution {
            let t = j as f64 / (resolution - 1) as f64;
            let report = entanglement::entanglement_degree(r, phi, t);
            csv.push_str(&format!("{phi:.16e},{t:.16e},{:.16e}\n", report.degree));
        }
    }
    let boundary = entanglement::separability_boundary(r, resolution);
    let boundary_csv = entanglement::boundary_to_csv(&boundary);
    match &a.out {
        None => {
            print!("{csv}");
            Ok(())
        }
        Some(path) => {
            emit(&a.out, &csv, Some(json!({ "r": r, "resolution": resolution })))?;
            let bpath = path.with_extension("boundary.csv");
            std::fs::write(&bpath, boundary_csv).map_err(|e| {
                CliError::Precondition(format!("cannot write {}: {e}", bpath.display()))
            })
        }
    }
}

fn run_wigner(cli: &Cli, a: &WignerArgs) -> Result<(), CliError> {
    let cfg = Resolver::load(&cli.config)?;
    let r = cfg.squeeze(&a.squeeze)?;
    let phi = require(cfg.f64(a.phi, "phi")?, "phi")?;
    let t = require(cfg.f64(a.t, "t")?, "t")?;
    let n = require(cfg.usize(a.n, "n")?, "n")?;
    let bound = cfg.f64(a.bound, "bound")?.unwrap_or(6.0);
    let resolution = cfg.usize(a.resolution, "resolution")?.unwrap_or(201);
    if resolution < 2 {
        return Err(CliError::Usage("--resolution must be at least 2".into()));
    }
    if !(bound > 0.0) {
        return Err(CliError::Usage("--bound must be positive".into()));
    }
    let p = SchemeParams::new(r, phi, t, n).map_err(precondition)?;
    let grid = phase_space::wigner_grid(&p, &GridSpec::square(bound, resolution))
        .map_err(precondition)?;
    let sidecar = json!({
        "params": params_json(&p),
        "x_min": grid.x_min, "x_max": grid.x_max,
        "p_min": grid.p_min, "p_max": grid.p_max,
        "nx": grid.nx, "np": grid.np,
        "normalization": grid.normalization,
        "warning": grid.warning,
    });
    emit(&a.out, &grid.to_csv(), Some(sidecar))
}

fn run_fidelity(cli: &Cli, a: &FidelityArgs) -> Result<(), CliError> {
    let cfg = Resolver::load(&cli.config)?;
    let target = cfg
        .string(a.target.clone(), "target")
        .ok_or_else(|| CliError::Usage("missing --target (cat|scat)".into()))?;
    let report = match (target.as_str(), a.optimize) {
        ("cat", true) => {
            let (r_star, p_star) = optimize::best_probability_cat();
            let t_opt = optimize::optimal_t_cat(r_star).map_err(precondition)?;
            let f = targets::fidelity_cat_closed(r_star, t_opt, PI);
            let confirm = optimize::maximize(
                optimize::Objective::FidelityCat,
                &optimize::SearchSpace { r: (r_star, r_star), phi: (0.5, PI), t: (0.05, 0.999), n: 1 },
            )
            .map_err(precondition)?;
            json!({
                "target": "cat", "optimized": true,
                "r": r_star, "t": t_opt, "phi": PI,
                "fidelity": f, "probability": p_star,
                "optimizer_confirmation": { "t": confirm.t, "phi": confirm.phi, "fidelity": confirm.value },
            })
        }
        ("scat", true) => {
            let (r_star, p_star) = optimize::best_probability_scat();
            let t_opt = optimize::optimal_t_scat(r_star).map_err(precondition)?;
            let f = targets::fidelity_scat_closed(r_star, t_opt, PI).map_err(precondition)?;
            let confirm = optimize::maximize(
                optimize::Objective::FidelityScat,
                &optimize::SearchSpace { r: (r_star, r_star), phi: (0.5, PI), t: (0.05, 0.999), n: 1 },
            )
            .map_err(precondition)?;
            json!({
                "target": "scat", "optimized": true,
                "r": r_star, "t": t_opt, "phi": PI,
                "fidelity": f, "probability": p_star,
                "optimizer_confirmation": { "t": confirm.t, "phi": confirm.phi, "fidelity": confirm.value },
            })
        }
        (name @ ("cat" | "scat"), false) => {
            let r = cfg.squeeze(&a.squeeze)?;
            let phi = require(cfg.f64(a.phi, "phi")?, "phi")?;
            let t = require(cfg.f64(a.t, "t")?, "t")?;
            let p = SchemeParams::new(r, phi, t, 1).map_err(precondition)?;
            let f = if name == "cat" {
                targets::fidelity_cat_closed(r, t, phi)
            } else {
                targets::fidelity_scat_closed(r, t, phi).map_err(precondition)?
            };
            json!({
                "target": name, "optimized": false,
                "r": r, "t": t, "phi": phi,
                "fidelity": f, "probability": herald_probability(&p),
            })
        }
        (other, _) => {
            return Err(CliError::Usage(format!("unknown target '{other}' (expected cat|scat)")))
        }
    };
    let text = serde_json::to_string_pretty(&report).expect("serializable report") + "\n";
    match &a.out {
        None => print!("{text}"),
        Some(path) => std::fs::write(path, &text).map_err(|e| {
            CliError::Precondition(format!("cannot write {}: {e}", path.display()))
        })?,
    }
    Ok(())
}

fn run_verify(cli: &Cli, a: &VerifyArgs) -> Result<(), CliError> {
    let cfg = Resolver::load(&cli.config)?;
    let grid_points = cfg.usize(a.grid_points, "grid_points")?.unwrap_or(5);
    let max_n = cfg.usize(a.max_n, "max_n")?.unwrap_or(4);
    let tol_fidelity = cfg.f64(a.tol_fidelity, "tol_fidelity")?.unwrap_or(1e-6);
    if grid_points < 2 {
        return Err(CliError::Usage("--grid-points must be at least 2".into()));
    }
    let mut worst_fidelity_defect: f64 = 0.0;
    let mut worst_dp: f64 = 0.0;
    let mut worst_completeness: f64 = 0.0;
    let g = grid_points;
    for i in 0..g {
        let r = 0.3 + 0.9 * i as f64 / (g - 1) as f64;
        let cutoff = cfg
            .usize(a.cutoff, "cutoff")?
            .unwrap_or_else(|| fock::required_cutoff(r));
        for j in 0..g {
            let phi = PI * (j + 1) as f64 / g as f64;
            for k in 0..g {
                let t = (k + 1) as f64 / (g + 1) as f64;
                let v1 = fock::squeezed_vacuum_fock(r, 0.0, cutoff).map_err(precondition)?;
                let v2 = fock::squeezed_vacuum_fock(r, phi, cutoff).map_err(precondition)?;
                let joint = fock::beam_splitter_apply(&v1, &v2, t);
                for n in 0..=max_n {
                    let row: f64 = (0..joint.dim)
                        .map(|m| joint.amplitude(n, m).norm_sqr())
                        .sum();
                    if row < 1e-13 {
                        continue;
                    }
                    let p = SchemeParams::new(r, phi, t, n).map_err(precondition)?;
                    let analytic_p = herald_probability(&p);
                    worst_dp = worst_dp.max((row - analytic_p).abs());
                    let (cond, _) = fock::project_pnrd(&joint, n).map_err(precondition)?;
                    let wf = output_wavefunction(&p).map_err(precondition)?;
                    let half = wf.support_halfwidth();
                    let overlap = quad::simpson_complex(-half, half, 2000, |x| {
                        wf.evaluate(x).conj() * cond.position_wavefunction(x)
                    });
                    worst_fidelity_defect = worst_fidelity_defect.max(1.0 - overlap.norm_sqr());
                }
                let total_p: f64 = (0..=90)
                    .map(|n| {
                        SchemeParams::new(r, phi, t, n)
                            .map(|p| herald_probability(&p))
                            .unwrap_or(0.0)
                    })
                    .sum();
                worst_completeness = worst_completeness.max((total_p - 1.0).abs());
            }
        }
    }
    println!("verify: grid {g}x{g}x{g}, n <= {max_n}");
    println!("verify: worst 1-F            = {worst_fidelity_defect:.3e} (tolerance {tol_fidelity:.0e})");
    println!("verify: worst |dP|           = {worst_dp:.3e} (tolerance 1e-7)");
    println!("verify: worst |sum P(n) - 1| = {worst_completeness:.3e} (tolerance 1e-6)");
    if worst_fidelity_defect > tol_fidelity || worst_dp > 1e-7 || worst_completeness > 1e-6 {
        return Err(CliError::Verification(
            "oracle equivalence tolerances breached (see report above)".into(),
        ));
    }
    println!("verify: PASS");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Wavefunction(a) => run_wavefunction(&cli, a),
        Cmd::NegativitySurface(a) => run_negativity_surface(&cli, a),
        Cmd::Entanglement(a) => run_entanglement(&cli, a),
        Cmd::Wigner(a) => run_wigner(&cli, a),
        Cmd::Fidelity(a) => run_fidelity(&cli, a),
        Cmd::Verify(a) => run_verify(&cli, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.exit(),
    }
}
