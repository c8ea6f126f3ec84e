//! `meridian`: build meridian surfaces from scene strings, classify them,
//! export curvature grids and meshes, and verify the solution families.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use meridian_core::audit;
use meridian_core::scene::{parse_curve, parse_profile, parse_range};
use meridian_core::weingarten::{self, CaseTag, GridSpec, Tolerances};
use meridian_core::{FamilyParams, MeridianSurface, Vec4};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "meridian",
    version,
    about = "Meridian surfaces in E⁴: curvature, Weingarten residual and classification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a surface and print the verdict as JSON.
    Classify(SceneArgs),
    /// Write closed-form curvature data on the grid as CSV.
    Curvature {
        #[command(flatten)]
        scene: SceneArgs,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a Wavefront OBJ mesh of the surface projected to E³.
    Mesh {
        #[command(flatten)]
        scene: SceneArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Coordinate (1-4) dropped by the projection.
        #[arg(long, default_value_t = 3)]
        project: usize,
    },
    /// Verify one of the five positive families; JSON on stdout, summary on stderr.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GridArgs {
    #[arg(long, default_value_t = 41)]
    nu: usize,
    #[arg(long, default_value_t = 41)]
    nv: usize,
}

impl GridArgs {
    fn check(&self) -> Result<()> {
        if self.nu < 8 || self.nv < 8 {
            bail!("grid must be at least 8 × 8, got {} × {}", self.nu, self.nv);
        }
        Ok(())
    }
}

#[derive(Args)]
struct SceneArgs {
    /// great | small:<theta0> | spiral:<slope>
    #[arg(long)]
    curve: String,
    /// line:<beta>[,<f0>[,<g0>]] | circle:<a>,<c1>,<c2> | cosh:<A>,<b>,<c> | fromf:<expr>
    #[arg(long, allow_hyphen_values = true)]
    profile: String,
    /// Profile parameter range lo:hi.
    #[arg(long, allow_hyphen_values = true)]
    u: String,
    /// Curve arc-length range lo:hi.
    #[arg(long, allow_hyphen_values = true)]
    v: String,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 1e-6)]
    tol_kappa: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol_alpha: f64,
    #[arg(long, default_value_t = 1e-7)]
    tol_ode: f64,
    /// Sign of g' (1 or -1).
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    sign: f64,
}

impl SceneArgs {
    fn surface(&self) -> Result<MeridianSurface> {
        self.grid.check()?;
        let u = parse_range(&self.u).context("--u")?;
        let v = parse_range(&self.v).context("--v")?;
        let curve = parse_curve(&self.curve, v).context("--curve")?;
        let profile = parse_profile(&self.profile, u, self.sign).context("--profile")?;
        Ok(MeridianSurface::new(curve, profile)?)
    }

    fn tolerances(&self) -> Result<Tolerances> {
        for (name, t) in [
            ("--tol-kappa", self.tol_kappa),
            ("--tol-alpha", self.tol_alpha),
            ("--tol-ode", self.tol_ode),
        ] {
            if !(t > 0.0 && t.is_finite()) {
                bail!("{name} must be positive, got {t}");
            }
        }
        Ok(Tolerances {
            tol_kappa: self.tol_kappa,
            tol_alpha: self.tol_alpha,
            tol_ode: self.tol_ode,
            ..Tolerances::default()
        })
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// i | iia | iib | iiia | iiib
    #[arg(long)]
    family: String,
    #[arg(long = "beta", allow_hyphen_values = true)]
    beta: Option<f64>,
    #[arg(long = "a", allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long = "c1", allow_hyphen_values = true)]
    c1: Option<f64>,
    #[arg(long = "c2", allow_hyphen_values = true)]
    c2: Option<f64>,
    #[arg(long = "A", allow_hyphen_values = true)]
    amplitude: Option<f64>,
    #[arg(long = "b", allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long = "c", allow_hyphen_values = true)]
    c: Option<f64>,
    #[command(flatten)]
    grid: GridArgs,
}

impl VerifyArgs {
    fn params(&self) -> FamilyParams {
        let d = FamilyParams::default();
        FamilyParams {
            beta: self.beta.unwrap_or(d.beta),
            a: self.a.unwrap_or(d.a),
            c1: self.c1.unwrap_or(d.c1),
            c2: self.c2.unwrap_or(d.c2),
            amplitude: self.amplitude.unwrap_or(d.amplitude),
            b: self.b.unwrap_or(d.b),
            c: self.c.unwrap_or(d.c),
        }
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn exit_code(case: CaseTag) -> u8 {
    match case {
        CaseTag::NotWeingarten => 2,
        CaseTag::Indeterminate => 3,
        _ => 0,
    }
}

fn classify(args: &SceneArgs) -> Result<u8> {
    let m = args.surface()?;
    let tol = args.tolerances()?;
    let grid = GridSpec::interior(m.rect(), args.grid.nu, args.grid.nv);
    let verdict = weingarten::classify(&m, &grid, &tol);
    print_json(&verdict)?;
    Ok(exit_code(verdict.case))
}

fn curvature(args: &SceneArgs, out: &Option<PathBuf>) -> Result<u8> {
    let m = args.surface()?;
    let grid = GridSpec::interior(m.rect(), args.grid.nu, args.grid.nv);
    let rows = weingarten::curvature_field(&m, &grid)?;
    let mut w = output(out)?;
    writeln!(w, "u,v,K,H,H1,H2,kappa,kappa_alpha,residual")?;
    for r in rows {
        let fields = [
            r.u,
            r.v,
            r.k,
            r.h,
            r.h1,
            r.h2,
            r.kappa,
            r.kappa_alpha,
            r.residual,
        ];
        let line: Vec<String> = fields.iter().map(|x| format!("{:.16e}", x + 0.0)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    Ok(0)
}

fn mesh(args: &SceneArgs, out: &Option<PathBuf>, project: usize) -> Result<u8> {
    if !(1..=4).contains(&project) {
        bail!("--project must be 1, 2, 3 or 4, got {project}");
    }
    let m = args.surface()?;
    let (nu, nv) = (args.grid.nu, args.grid.nv);
    let rect = m.rect();
    let us = rect.u.linspace(nu);
    let vs = rect.v.linspace(nv);
    let mut w = output(out)?;
    writeln!(w, "# meridian surface, coordinate x{project} dropped")?;
    writeln!(
        w,
        "# curve {} profile {} grid {nu}x{nv}",
        args.curve, args.profile
    )?;
    for &u in &us {
        for &v in &vs {
            let p: Vec4 = m.embed(u, v);
            let q = p.drop_coordinate(project);
            writeln!(
                w,
                "v {:.16e} {:.16e} {:.16e}",
                q[0] + 0.0,
                q[1] + 0.0,
                q[2] + 0.0
            )?;
        }
    }
    let idx = |i: usize, j: usize| i * nv + j + 1;
    for i in 0..nu - 1 {
        for j in 0..nv - 1 {
            writeln!(
                w,
                "f {} {} {} {}",
                idx(i, j),
                idx(i + 1, j),
                idx(i + 1, j + 1),
                idx(i, j + 1)
            )?;
        }
    }
    w.flush()?;
    Ok(0)
}

#[derive(Serialize)]
struct VerifyOutput {
    schema: u32,
    report: weingarten::FamilyReport,
    audit: audit::AuditReport,
}

fn verify(args: &VerifyArgs) -> Result<u8> {
    args.grid.check()?;
    let Some(tag) = CaseTag::from_family(&args.family) else {
        bail!(
            "unknown family {:?}; expected i, iia, iib, iiia or iiib",
            args.family
        );
    };
    let params = args.params();
    let report = weingarten::verify_family(tag, &params, Some((args.grid.nu, args.grid.nv)))?;
    // The audit always uses the cosh constants given, falling back to defaults.
    let audit = audit::standard_audit(&params)
        .or_else(|_| audit::standard_audit(&FamilyParams::default()))?;

    let mut e = io::stderr().lock();
    writeln!(
        e,
        "family {} on {} ({}x{} grid)",
        tag, report.directrix, report.grid.nu, report.grid.nv
    )?;
    for c in &report.checks {
        writeln!(
            e,
            "  {} {:<28} {:.3e} (limit {:.0e})",
            if c.pass { "ok  " } else { "FAIL" },
            c.name,
            c.value,
            c.limit
        )?;
    }
    writeln!(
        e,
        "  classification {} (round trip {})",
        report.classification,
        if report.round_trip { "ok" } else { "FAIL" }
    )?;
    writeln!(e, "audit of printed g formulas (informational):")?;
    writeln!(
        e,
        "  circle family a=1, c1=0, u=0.3: f'^2 + g'^2 - 1 = {:.5}",
        audit.circle.constraint_residual
    )?;
    writeln!(
        e,
        "  cosh family A={}, b={}, c={}: |printed g - g'| at u=0.4 = {:.1e}, max |printed g - g| on [-1,1] = {:.4}",
        audit.cosh.amplitude, audit.cosh.b, audit.cosh.c, audit.cosh.gap_to_slope, audit.cosh.max_gap_to_value
    )?;
    writeln!(e, "{}", if report.pass { "PASS" } else { "FAIL" })?;

    let pass = report.pass;
    let out = VerifyOutput {
        schema: 1,
        report,
        audit,
    };
    print_json(&out)?;
    Ok(if pass { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Classify(s) => classify(&s),
        Command::Curvature { scene, out } => curvature(&scene, &out),
        Command::Mesh {
            scene,
            out,
            project,
        } => mesh(&scene, &out, project),
        Command::Verify(v) => verify(&v),
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>()
            .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<serde_json::Error>()
                .is_some_and(|j| j.io_error_kind() == Some(io::ErrorKind::BrokenPipe))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) if is_broken_pipe(&e) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
