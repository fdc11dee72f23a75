//! Command-line front end. [`run`] takes the argument list and output sinks
//! and returns the process exit code: 0 success, 1 domain failure, 2 parse or usage error.

pub mod file;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use crate::anisotropy::{class_parameters, classify_coupling, classify_stiffness};
use crate::coupling::{iso_arithm, iso_harm, iso_log, Coupling3};
use crate::dynamics::{dispersion_sweep, DOF};
use crate::energy::{kinetic_density, relaxed_energy_parts, relaxed_stress, upper_bound_check};
use crate::homogenize::{e_from_micro_macro, macro_from_micro_e};
use crate::linalg::{self, Definiteness};
use crate::oned::{lc_sweep, MicroBoundary, OneDProblem};
use crate::tensor::{NotationConvention, StiffnessVoigt, Vec3};
use file::{LoadError, MaterialFile};
use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mean {
    Arithm,
    Log,
    Harm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Voigt,
    Mandel,
}

impl From<ConventionArg> for NotationConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Voigt => NotationConvention::Voigt,
            ConventionArg::Mandel => NotationConvention::Mandel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MicroBcArg {
    Clamped,
    Free,
}

#[derive(Debug, Parser)]
#[command(name = "micromorph", version, about = "Relaxed micromorphic elasticity toolkit")]
struct Cli {
    /// Convention of the printed matrices (default: the file's own)
    #[arg(long, global = true, value_enum)]
    convention: Option<ConventionArg>,
    /// Relative tolerance for symmetry validation and classification
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check symmetry, definiteness and class of every tensor in a material file
    Validate { file: PathBuf },
    /// Macro stiffness from micro and e
    Homogenize { file: PathBuf },
    /// e stiffness from micro and macro
    Invert { file: PathBuf },
    /// Symmetry class and parameters of each tensor
    Classify { file: PathBuf },
    /// Isotropic projection of the coupling tensor
    ProjectCoupling {
        file: PathBuf,
        #[arg(long, value_enum)]
        mean: Mean,
    },
    /// Energy density, stress and kinetic density at a state
    Energy { file: PathBuf, state: PathBuf },
    /// Plane-wave dispersion curves as CSV
    Dispersion {
        file: PathBuf,
        /// Propagation direction "x,y,z"
        #[arg(long, default_value = "1,0,0")]
        direction: String,
        #[arg(long, default_value_t = 1.0)]
        kmax: f64,
        #[arg(long, default_value_t = 200)]
        n: usize,
    },
    /// Effective modulus of the 1D model versus Lc as CSV
    OnedDemo {
        /// Shear modulus of the e tensor
        #[arg(long)]
        mu_e: f64,
        /// Shear modulus of the micro tensor
        #[arg(long)]
        mu_micro: f64,
        /// Comma-separated characteristic lengths
        #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true)]
        lc_list: Vec<f64>,
        /// Grid cells on the unit interval
        #[arg(long, default_value_t = 2000)]
        cells: usize,
        /// Curvature modulus
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        /// Micro-distortion condition at both ends
        #[arg(long, value_enum, default_value_t = MicroBcArg::Clamped)]
        micro_bc: MicroBcArg,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
    /// Domain failure that still prints its report.
    Rejected {
        report: String,
        msg: String,
    },
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        match e {
            LoadError::Parse(s) => Failure::Usage(s),
            LoadError::Domain(s) => Failure::Domain(s),
        }
    }
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

struct Ctx<'a> {
    tol: f64,
    output: OutputFormat,
    convention: Option<NotationConvention>,
    err: &'a mut dyn Write,
}

struct Loaded {
    path: String,
    digest: String,
    file: MaterialFile,
}

impl Ctx<'_> {
    fn load(&mut self, path: &std::path::Path) -> Result<Loaded, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        let text =
            std::str::from_utf8(&bytes).map_err(|_| Failure::Usage(format!("{} is not UTF-8", path.display())))?;
        let file = MaterialFile::parse(text, self.tol)?;
        for w in &file.warnings {
            let _ = writeln!(self.err, "warning: {w}");
        }
        Ok(Loaded { path: path.display().to_string(), digest: sha256_hex(&bytes), file })
    }

    fn out_conv(&self, f: &MaterialFile) -> NotationConvention {
        self.convention.unwrap_or(f.convention)
    }

    fn header(&self, r: &mut Report, command: &str, l: &Loaded) {
        r.text("command", command)
            .text("input", &l.path)
            .text("input_sha256", &l.digest)
            .text("convention", self.out_conv(&l.file).name());
    }

    fn emit(&self, r: &Report) -> String {
        match self.output {
            OutputFormat::Text => r.to_toml(),
            OutputFormat::Csv => r.to_csv(),
        }
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn stiffness_block(r: &mut Report, name: &str, cv: &StiffnessVoigt, tol: f64) {
    let class = classify_stiffness(cv, tol);
    r.section(name).text("class", class.name());
    for (k, v) in class_parameters(cv, class) {
        r.num(k, v);
    }
    r.matrix("matrix", cv.matrix());
}

fn exactly_two(f: &MaterialFile, want: [&str; 2]) -> Result<(), Failure> {
    let present: Vec<&str> = [("micro", f.micro.is_some()), ("e", f.e.is_some()), ("macro", f.macro_.is_some())]
        .iter()
        .filter(|(_, p)| *p)
        .map(|(n, _)| *n)
        .collect();
    if present != want {
        return Err(Failure::Usage(format!(
            "this command needs exactly the tables [{}] and [{}] among micro/e/macro; found [{}]",
            want[0],
            want[1],
            present.join(", ")
        )));
    }
    Ok(())
}

fn cmd_validate(ctx: &mut Ctx, path: &std::path::Path) -> Outcome {
    let l = ctx.load(path)?;
    let f = &l.file;
    let conv = ctx.out_conv(f);
    let mut r = Report::new();
    ctx.header(&mut r, "validate", &l);
    let mut all_ok = true;
    let mut failures = Vec::new();

    for (name, t) in [("micro", f.micro), ("e", f.e), ("macro", f.macro_)] {
        let Some(t) = t else { continue };
        let (ok, min_eig) = linalg::check_definite(t.matrix(), Definiteness::Strict);
        r.section(name)
            .flag("symmetric", true)
            .text("definiteness", "strict")
            .flag("ok", ok)
            .num("min_eig", min_eig)
            .text("class", classify_stiffness(&t.to_convention(conv), ctx.tol).name());
        if !ok {
            failures.push(format!("{name} is not positive definite"));
        }
        all_ok &= ok;
    }
    let semi = |r: &mut Report, name: &str, m: &nalgebra::Matrix3<f64>| -> bool {
        let (ok, min_eig) = linalg::check_definite(m, Definiteness::Semi);
        r.section(name).flag("symmetric", true).text("definiteness", "semi").flag("ok", ok).num("min_eig", min_eig);
        ok
    };
    if let Some(cc) = f.coupling {
        let ok = semi(&mut r, "coupling", cc.matrix());
        r.text("class", classify_coupling(&cc, ctx.tol).name());
        if cc.matrix().iter().all(|x| *x == 0.0) {
            r.text("note", "non-redundant (Cc=0)");
        }
        if !ok {
            failures.push("coupling is not positive semi-definite".into());
        }
        all_ok &= ok;
    }
    if let Some(le) = f.le {
        let (ok, min_eig) = linalg::check_definite(le.matrix(), Definiteness::Semi);
        r.section("curvature.le")
            .flag("symmetric", true)
            .text("definiteness", "semi")
            .flag("ok", ok)
            .num("min_eig", min_eig);
        if !ok {
            failures.push("curvature.le is not positive semi-definite".into());
        }
        all_ok &= ok;
    }
    if let Some(lc) = f.lc {
        let ok = semi(&mut r, "curvature.lc", lc.matrix());
        if !ok {
            failures.push("curvature.lc is not positive semi-definite".into());
        }
        all_ok &= ok;
    }
    let inertia_ok = f.inertia.validate().is_ok();
    let scalars_ok = inertia_ok && f.mu >= 0.0 && f.lc_len >= 0.0;
    r.section("scalars")
        .num("mu", f.mu)
        .num("Lc", f.lc_len)
        .num("rho", f.inertia.rho)
        .num("Lc_hat", f.inertia.lc_hat)
        .flag("ok", scalars_ok);
    if !scalars_ok {
        failures.push("scalar parameters out of range".into());
    }
    all_ok &= scalars_ok;
    r.section("summary").flag("ok", all_ok).int("exit_status", if all_ok { 0 } else { 1 });
    if all_ok {
        Ok(ctx.emit(&r))
    } else {
        Err(Failure::Rejected { report: ctx.emit(&r), msg: format!("validation failed: {}", failures.join("; ")) })
    }
}

fn cmd_homogenize(ctx: &mut Ctx, path: &std::path::Path) -> Outcome {
    let l = ctx.load(path)?;
    exactly_two(&l.file, ["micro", "e"])?;
    let (micro, e) = (l.file.micro.unwrap(), l.file.e.unwrap());
    let h = macro_from_micro_e(&micro, &e)?;
    let conv = ctx.out_conv(&l.file);
    let stiffer = linalg::check_definite(&(micro.matrix() - h.macro_.matrix()), Definiteness::Strict).0;
    let mut r = Report::new();
    ctx.header(&mut r, "homogenize", &l);
    stiffness_block(&mut r, "macro", &h.macro_.to_convention(conv), ctx.tol);
    r.section("diagnostics")
        .flag("symmetric", h.symmetric_ok)
        .flag("spd", h.spd_ok)
        .residual("harmonic_residual", h.harmonic_residual)
        .flag("smaller_is_stiffer", stiffer)
        .int("exit_status", 0);
    Ok(ctx.emit(&r))
}

fn cmd_invert(ctx: &mut Ctx, path: &std::path::Path) -> Outcome {
    let l = ctx.load(path)?;
    exactly_two(&l.file, ["micro", "macro"])?;
    let (micro, mac) = (l.file.micro.unwrap(), l.file.macro_.unwrap());
    let e = e_from_micro_macro(&micro, &mac)?;
    let back = macro_from_micro_e(&micro, &e)?;
    let rt = (back.macro_.matrix() - mac.matrix()).norm() / mac.matrix().norm();
    let conv = ctx.out_conv(&l.file);
    let mut r = Report::new();
    ctx.header(&mut r, "invert", &l);
    stiffness_block(&mut r, "e", &e.to_convention(conv), ctx.tol);
    r.section("diagnostics")
        .flag("spd", linalg::check_definite(e.matrix(), Definiteness::Strict).0)
        .residual("roundtrip_residual", rt)
        .flag("smaller_is_stiffer", true)
        .int("exit_status", 0);
    Ok(ctx.emit(&r))
}

fn cmd_classify(ctx: &mut Ctx, path: &std::path::Path) -> Outcome {
    let l = ctx.load(path)?;
    let conv = ctx.out_conv(&l.file);
    let mut r = Report::new();
    ctx.header(&mut r, "classify", &l);
    let f = &l.file;
    for (name, t) in [("micro", f.micro), ("e", f.e), ("macro", f.macro_), ("curvature.le", f.le)] {
        if let Some(t) = t {
            stiffness_block(&mut r, name, &t.to_convention(conv), ctx.tol);
        }
    }
    for (name, c) in [("coupling", f.coupling), ("curvature.lc", f.lc)] {
        if let Some(c) = c {
            r.section(name).text("class", classify_coupling(&c, ctx.tol).name()).matrix("matrix", c.matrix());
        }
    }
    Ok(ctx.emit(&r))
}

fn cmd_project(ctx: &mut Ctx, path: &std::path::Path, mean: Mean) -> Outcome {
    let l = ctx.load(path)?;
    let cc = l.file.coupling.ok_or_else(|| Failure::Usage("material file has no [coupling] table".into()))?;
    let (name, p): (&str, Coupling3) = match mean {
        Mean::Arithm => ("arithm", iso_arithm(&cc)),
        Mean::Log => ("log", iso_log(&cc)?),
        Mean::Harm => ("harm", iso_harm(&cc)?),
    };
    let mut r = Report::new();
    ctx.header(&mut r, "project-coupling", &l);
    r.section("coupling").text("class", classify_coupling(&cc, ctx.tol).name()).matrix("matrix", cc.matrix());
    r.section("projection").text("mean", name).num("gamma", p.matrix()[(0, 0)]).matrix("matrix", p.matrix());
    Ok(ctx.emit(&r))
}

fn cmd_energy(ctx: &mut Ctx, path: &std::path::Path, state: &std::path::Path) -> Outcome {
    let l = ctx.load(path)?;
    let m = l.file.relaxed_material()?;
    m.validate()?;
    let bytes = std::fs::read(state).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", state.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|_| Failure::Usage(format!("{} is not UTF-8", state.display())))?;
    let s = file::parse_state(text)?;
    let parts = relaxed_energy_parts(&m, &s);
    let sigma = relaxed_stress(&m, &s.grad_u, &s.p);
    let ub = upper_bound_check(&m, &s.grad_u)?;
    let mut r = Report::new();
    ctx.header(&mut r, "energy", &l);
    r.text("state", &state.display().to_string()).text("state_sha256", &sha256_hex(&bytes));
    r.section("energy")
        .num("total", parts.total())
        .num("elastic", parts.elastic)
        .num("micro_self", parts.micro_self)
        .num("rotational", parts.rotational)
        .num("curvature", parts.curvature)
        .num("kinetic", kinetic_density(&m.inertia, &s.p_dot));
    r.section("stress").matrix("sigma", &sigma);
    r.section("upper_bound").num("w_admissible", ub.w_admissible).num("w_linear", ub.w_linear).flag("ok", ub.ok);
    Ok(ctx.emit(&r))
}

fn parse_direction(s: &str) -> Result<Vec3, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Failure::Usage(format!("direction must be \"x,y,z\", got \"{s}\""));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut v = Vec3::zeros();
    for (i, p) in parts.iter().enumerate() {
        v[i] = p.parse().map_err(|_| bad())?;
    }
    Ok(v)
}

fn cmd_dispersion(ctx: &mut Ctx, path: &std::path::Path, direction: &str, kmax: f64, n: usize) -> Outcome {
    let dir = parse_direction(direction)?;
    if n < 2 || !(kmax > 0.0) {
        return Err(Failure::Usage("need --n >= 2 and --kmax > 0".into()));
    }
    let l = ctx.load(path)?;
    let m = l.file.relaxed_material()?;
    let branches = dispersion_sweep(&m, &m.inertia, &dir, kmax, n)?;
    let mut out = String::from("k");
    for b in 1..=DOF {
        out.push_str(&format!(",omega_{b}"));
    }
    out.push('\n');
    for i in 0..n {
        out.push_str(&report::num(branches[0].k_values[i]));
        for b in &branches {
            out.push(',');
            out.push_str(&report::num(b.omega_values[i]));
        }
        out.push('\n');
    }
    Ok(out)
}

fn cmd_oned(mu_e: f64, mu_micro: f64, lc_list: &[f64], cells: usize, mu: f64, bc: MicroBcArg) -> Outcome {
    if lc_list.is_empty() {
        return Err(Failure::Usage("--lc-list needs at least one value".into()));
    }
    let b = match bc {
        MicroBcArg::Clamped => MicroBoundary::Clamped,
        MicroBcArg::Free => MicroBoundary::Free,
    };
    let template = OneDProblem { mu, ..OneDProblem::new(mu_e, mu_micro, 0.0, cells) }.with_boundary(b);
    let rows = lc_sweep(&template, lc_list)?;
    let mut out = String::from("Lc,mu_eff\n");
    for (lc, m) in rows {
        out.push_str(&format!("{},{}\n", report::num(lc), report::num(m)));
    }
    Ok(out)
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        let _ = writeln!(err, "error: --tol must be a non-negative number");
        return EXIT_USAGE;
    }
    let mut ctx = Ctx { tol: cli.tol, output: cli.output, convention: cli.convention.map(Into::into), err };
    let res = match &cli.cmd {
        Command::Validate { file } => cmd_validate(&mut ctx, file),
        Command::Homogenize { file } => cmd_homogenize(&mut ctx, file),
        Command::Invert { file } => cmd_invert(&mut ctx, file),
        Command::Classify { file } => cmd_classify(&mut ctx, file),
        Command::ProjectCoupling { file, mean } => cmd_project(&mut ctx, file, *mean),
        Command::Energy { file, state } => cmd_energy(&mut ctx, file, state),
        Command::Dispersion { file, direction, kmax, n } => cmd_dispersion(&mut ctx, file, direction, *kmax, *n),
        Command::OnedDemo { mu_e, mu_micro, lc_list, cells, mu, micro_bc } => {
            cmd_oned(*mu_e, *mu_micro, lc_list, *cells, *mu, *micro_bc)
        }
    };
    match res {
        Ok(s) => {
            let _ = out.write_all(s.as_bytes());
            EXIT_OK
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            EXIT_DOMAIN
        }
        Err(Failure::Rejected { report, msg }) => {
            let _ = out.write_all(report.as_bytes());
            let _ = writeln!(ctx.err, "error: {msg}");
            EXIT_DOMAIN
        }
    }
}
