//! Command-line pipeline: separable-potential input → Bargmann parameters →
//! reconstructed local potential → phase-equivalence verification → figure
//! data.
//!
//! Exit codes: 0 success, 1 input error, 2 numerical failure.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use bargmann::marchenko::{kernel_coeffs, LocalPotentialCurve};
use bargmann::model::{ModelPotential, PhysicalConstants, SpectralData};
use bargmann::rational::{extract_bargmann_with, numerator_polynomial, RationalSMatrix};
use bargmann::schrodinger::compare_phases;
use bargmann::specfun::Branch;

#[derive(Parser)]
#[command(
    name = "bargmann",
    about = "Phase-equivalent local potentials from separable potentials with Laguerre form factors",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bargmann parameters of the rank-1 separable potential
    /// V(k,k') = Lambda0 / ((k^2+b^2)(k'^2+b^2))
    FromYamaguchi(FromYamaguchiArgs),
    /// Bargmann parameters from spectral data (eigenvalues and last-row
    /// eigenvector elements) in spectral.json form
    FromSpectral(FromSpectralArgs),
    /// Reconstruct the local potential V(r) from a parameter file
    Reconstruct(ReconstructArgs),
    /// Tabulate phase shifts of the rational S-matrix (and optionally of a
    /// reconstructed potential via the independent integrator)
    Phases(PhasesArgs),
    /// Reconstruct, re-integrate, and report the phase discrepancy
    Verify(VerifyArgs),
    /// Emit per-figure CSV windows of the reconstructed potential
    Plotdata(PlotdataArgs),
}

#[derive(Args)]
struct FromYamaguchiArgs {
    /// Coupling strength Lambda0 in MeV·fm^-1 (negative = attractive)
    #[arg(long, allow_hyphen_values = true)]
    lambda0: f64,
    /// Scale parameter b in fm^-1
    #[arg(long)]
    b: f64,
    /// hbar^2/2mu in MeV·fm^2
    #[arg(long = "hbar2-over-2mu", default_value_t = 41.47)]
    hbar2_over_2mu: f64,
    /// Output parameter file (JSON)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FromSpectralArgs {
    /// Input spectral.json
    #[arg(long)]
    input: PathBuf,
    /// Output parameter file (JSON)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GridArgs {
    /// Smallest radius (fm)
    #[arg(long, default_value_t = 0.02)]
    rmin: f64,
    /// Largest radius (fm)
    #[arg(long, default_value_t = 15.0)]
    rmax: f64,
    /// Number of radial points
    #[arg(long, default_value_t = 600)]
    nr: usize,
}

#[derive(Args)]
struct ReconstructArgs {
    /// Parameter file from from-yamaguchi / from-spectral
    #[arg(long)]
    params: PathBuf,
    #[arg(long = "hbar2-over-2mu", default_value_t = 41.47)]
    hbar2_over_2mu: f64,
    #[command(flatten)]
    grid: GridArgs,
    /// Output CSV (r_fm,V_MeV)
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct KGridArgs {
    /// Smallest wave number (fm^-1)
    #[arg(long, default_value_t = 0.05)]
    kmin: f64,
    /// Largest wave number (fm^-1)
    #[arg(long, default_value_t = 3.0)]
    kmax: f64,
    /// Number of k points
    #[arg(long, default_value_t = 40)]
    nk: usize,
}

#[derive(Args)]
struct PhasesArgs {
    #[arg(long)]
    params: PathBuf,
    #[command(flatten)]
    kgrid: KGridArgs,
    /// Optional reconstructed potential CSV; adds a delta_numerov column
    #[arg(long)]
    potential: Option<PathBuf>,
    #[arg(long = "hbar2-over-2mu", default_value_t = 41.47)]
    hbar2_over_2mu: f64,
    /// Output CSV
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    params: PathBuf,
    #[arg(long = "hbar2-over-2mu", default_value_t = 41.47)]
    hbar2_over_2mu: f64,
    #[command(flatten)]
    kgrid: KGridArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Acceptance threshold on max |delta_numerov - delta_rational| (rad)
    #[arg(long, default_value_t = 5e-3)]
    tol: f64,
    /// Report JSON
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PlotdataArgs {
    #[arg(long)]
    params: PathBuf,
    #[arg(long = "hbar2-over-2mu", default_value_t = 41.47)]
    hbar2_over_2mu: f64,
    /// Directory for fig2a.csv .. fig2d.csv
    #[arg(long)]
    outdir: PathBuf,
}

enum CliError {
    Input(String),
    Numerical(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numerical(m) => m,
        }
    }
}

/// Input-shaped library errors exit with 1, numerical ones with 2.
fn classify(e: bargmann::Error) -> CliError {
    use bargmann::Error::*;
    match e {
        Schema(_)
        | InvalidGrid
        | NonPositiveScale(_)
        | EmptyPotential
        | NonSymmetricCoupling { .. }
        | UnnormalizedWeights(_)
        | DegenerateEigenvalues(_)
        | NotSWave(_) => CliError::Input(e.to_string()),
        _ => CliError::Numerical(e.to_string()),
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's help/version pseudo-errors still exit 0
            if e.use_stderr() {
                eprintln!("{e}");
                std::process::exit(1);
            }
            print!("{e}");
            std::process::exit(0);
        }
    };
    let result = match cli.command {
        Command::FromYamaguchi(args) => cmd_from_yamaguchi(args),
        Command::FromSpectral(args) => cmd_from_spectral(args),
        Command::Reconstruct(args) => cmd_reconstruct(args),
        Command::Phases(args) => cmd_phases(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Plotdata(args) => cmd_plotdata(args),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}

fn print_parameters(rs: &RationalSMatrix) {
    println!("b = {} fm^-1, script_N = {}", rs.b(), rs.script_n());
    for (j, a) in rs.a().iter().enumerate() {
        if a.im == 0.0 {
            println!("a_{} = {:.12}", j + 1, a.re);
        } else {
            println!(
                "a_{} = {:.12} {} {:.12} i",
                j + 1,
                a.re,
                if a.im >= 0.0 { "+" } else { "-" },
                a.im.abs()
            );
        }
    }
    let sum: Complex64 = rs.a().iter().sum();
    let expect = rs.script_n() as f64 * rs.b();
    println!(
        "trace identity: sum a_j = {:.9} vs script_N*b = {:.9} (defect {:.3e})",
        sum.re,
        expect,
        rs.trace_defect()
    );
}

fn write_params(rs: &RationalSMatrix, path: &Path) -> Result<(), CliError> {
    let f = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(f);
    serde_json::to_writer_pretty(&mut w, rs)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    w.write_all(b"\n").map_err(|e| io_err(path, e))?;
    Ok(())
}

fn read_params(path: &Path) -> Result<RationalSMatrix, CliError> {
    let f = File::open(path).map_err(|e| io_err(path, e))?;
    serde_json::from_reader(BufReader::new(f))
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn cmd_from_yamaguchi(args: FromYamaguchiArgs) -> Result<(), CliError> {
    let consts = PhysicalConstants::new(args.hbar2_over_2mu);
    let pot = ModelPotential::from_yamaguchi(args.lambda0, args.b, &consts).map_err(classify)?;
    let sd = pot.spectral_data().map_err(classify)?;
    let poly = numerator_polynomial(
        |k| pot.fredholm_det(k, Branch::Plus),
        pot.script_n(),
        args.b,
    )
    .map_err(classify)?;
    println!(
        "numerator leading coefficient deviation: {:.3e}",
        poly.leading_deviation()
    );
    let rs =
        extract_bargmann_with(&poly, args.b, |k| sd.fredholm_det_spectral(k)).map_err(classify)?;
    print_parameters(&rs);
    write_params(&rs, &args.out)
}

fn cmd_from_spectral(args: FromSpectralArgs) -> Result<(), CliError> {
    let f = File::open(&args.input).map_err(|e| io_err(&args.input, e))?;
    let sd: SpectralData = serde_json::from_reader(BufReader::new(f))
        .map_err(|e| CliError::Input(format!("{}: {e}", args.input.display())))?;
    let poly = numerator_polynomial(
        |k| sd.fredholm_det_spectral(Complex64::new(k, 0.0)),
        sd.script_n(),
        sd.b(),
    )
    .map_err(classify)?;
    println!(
        "numerator leading coefficient deviation: {:.3e}",
        poly.leading_deviation()
    );
    let rs = extract_bargmann_with(&poly, sd.b(), |k| sd.fredholm_det_spectral(k))
        .map_err(classify)?
        .with_ell(sd.ell());
    print_parameters(&rs);
    write_params(&rs, &args.out)
}

/// Log-spaced below 1 fm, linear above, matching the default grid's split.
fn make_grid(g: &GridArgs) -> Result<Vec<f64>, CliError> {
    if !g.rmin.is_finite() || g.rmin <= 0.0 || g.rmax <= g.rmin || g.nr < 8 {
        return Err(CliError::Input(
            "grid needs 0 < rmin < rmax and nr >= 8".into(),
        ));
    }
    let split = 1.0f64.clamp(g.rmin * 1.001, g.rmax);
    let n_log = if g.rmin < split { g.nr / 2 } else { 0 };
    let n_lin = g.nr - n_log;
    let mut grid = Vec::with_capacity(g.nr);
    for i in 0..n_log {
        let f = i as f64 / n_log as f64;
        grid.push(g.rmin * (split / g.rmin).powf(f));
    }
    for i in 0..n_lin {
        let f = i as f64 / (n_lin - 1) as f64;
        grid.push(split + (g.rmax - split) * f);
    }
    Ok(grid)
}

fn reconstruct_curve(
    rs: &RationalSMatrix,
    grid: &[f64],
    consts: &PhysicalConstants,
) -> Result<LocalPotentialCurve, CliError> {
    let mk = kernel_coeffs(rs).map_err(classify)?;
    mk.local_potential(grid, consts).map_err(classify)
}

fn cmd_reconstruct(args: ReconstructArgs) -> Result<(), CliError> {
    let rs = read_params(&args.params)?;
    let consts = PhysicalConstants::new(args.hbar2_over_2mu);
    let grid = make_grid(&args.grid)?;
    let curve = reconstruct_curve(&rs, &grid, &consts)?;
    let f = File::create(&args.out).map_err(|e| io_err(&args.out, e))?;
    curve
        .write_csv(BufWriter::new(f))
        .map_err(|e| io_err(&args.out, e))?;
    println!("wrote {} points to {}", curve.r().len(), args.out.display());
    Ok(())
}

fn k_grid(k: &KGridArgs) -> Result<Vec<f64>, CliError> {
    if !k.kmin.is_finite() || k.kmin <= 0.0 || k.kmax <= k.kmin || k.nk < 2 {
        return Err(CliError::Input(
            "k grid needs 0 < kmin < kmax and nk >= 2".into(),
        ));
    }
    Ok((0..k.nk)
        .map(|i| k.kmin + (k.kmax - k.kmin) * i as f64 / (k.nk - 1) as f64)
        .collect())
}

fn cmd_phases(args: PhasesArgs) -> Result<(), CliError> {
    let rs = read_params(&args.params)?;
    let grid = k_grid(&args.kgrid)?;
    let consts = PhysicalConstants::new(args.hbar2_over_2mu);
    let delta_rational = rs.phase_shift(&grid).map_err(classify)?;
    let numerov = match &args.potential {
        Some(path) => {
            let f = File::open(path).map_err(|e| io_err(path, e))?;
            let curve =
                LocalPotentialCurve::read_csv(BufReader::new(f), &consts).map_err(classify)?;
            let cmp = compare_phases(&curve, &rs, &grid, &consts).map_err(classify)?;
            Some(cmp.delta_numerov)
        }
        None => None,
    };
    let f = File::create(&args.out).map_err(|e| io_err(&args.out, e))?;
    let mut w = BufWriter::new(f);
    let io = match &numerov {
        Some(dn) => writeln!(w, "k_fm_inv,delta_rational_rad,delta_numerov_rad").and_then(|_| {
            grid.iter()
                .zip(&delta_rational)
                .zip(dn)
                .try_for_each(|((k, dr), d)| writeln!(w, "{k:.11e},{dr:.11e},{d:.11e}"))
        }),
        None => writeln!(w, "k_fm_inv,delta_rational_rad").and_then(|_| {
            grid.iter()
                .zip(&delta_rational)
                .try_for_each(|(k, dr)| writeln!(w, "{k:.11e},{dr:.11e}"))
        }),
    };
    io.map_err(|e| io_err(&args.out, e))?;
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let rs = read_params(&args.params)?;
    let consts = PhysicalConstants::new(args.hbar2_over_2mu);
    let rgrid = make_grid(&args.grid)?;
    let curve = reconstruct_curve(&rs, &rgrid, &consts)?;
    let kgrid = k_grid(&args.kgrid)?;
    let cmp = compare_phases(&curve, &rs, &kgrid, &consts).map_err(classify)?;
    let f = File::create(&args.out).map_err(|e| io_err(&args.out, e))?;
    let mut w = BufWriter::new(f);
    serde_json::to_writer_pretty(&mut w, &cmp)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.out.display())))?;
    w.write_all(b"\n").map_err(|e| io_err(&args.out, e))?;
    println!(
        "max |delta_numerov - delta_rational| = {:.6e} rad over {} points (tol {:.1e})",
        cmp.max_abs_diff,
        kgrid.len(),
        args.tol
    );
    if cmp.max_abs_diff > args.tol {
        return Err(CliError::Numerical(format!(
            "phase discrepancy {:.3e} rad exceeds tolerance {:.1e}",
            cmp.max_abs_diff, args.tol
        )));
    }
    println!("phase equivalence verified");
    Ok(())
}

/// Figure windows of the reconstructed curve: full deep structure, the
/// second well, the shallow region, and the asymptotic tail.
const FIG_WINDOWS: [(&str, f64, f64, usize); 4] = [
    ("fig2a.csv", 0.02, 2.0, 400),
    ("fig2b.csv", 0.7, 2.5, 300),
    ("fig2c.csv", 2.0, 8.0, 300),
    ("fig2d.csv", 5.0, 15.0, 300),
];

fn cmd_plotdata(args: PlotdataArgs) -> Result<(), CliError> {
    let rs = read_params(&args.params)?;
    let consts = PhysicalConstants::new(args.hbar2_over_2mu);
    std::fs::create_dir_all(&args.outdir).map_err(|e| io_err(&args.outdir, e))?;
    let mk = kernel_coeffs(&rs).map_err(classify)?;
    for (name, lo, hi, n) in FIG_WINDOWS {
        let grid: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect();
        let curve = mk.local_potential(&grid, &consts).map_err(classify)?;
        let path = args.outdir.join(name);
        let f = File::create(&path).map_err(|e| io_err(&path, e))?;
        curve
            .write_csv(BufWriter::new(f))
            .map_err(|e| io_err(&path, e))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
