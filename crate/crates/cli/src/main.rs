//! Command-line front end: reproduce the reference eigenvalue tables, run
//! convergence studies, query the analytic disk oracle, and export
//! eigenfunction fields.

mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use output::{render_json, sig15, OutputKind, Table};
use stokes_spectra::{
    assemble_ellipse, exact_disk_eigenvalues, sample_eigenfunction, solve_ellipse_with, solve_gep,
    AssemblyRegistry, DomainTag, EllipseGeometry, Error as SolverError, FieldGrid,
    MassCouplingForm, ModeProblem, Spectrum, SpectrumMeta,
};

#[derive(Parser)]
#[command(
    name = "stokes-spectra",
    about = "Spectral-Galerkin eigensolver for the Stokes stream-function problem on disks and ellipses",
    version
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    output: Format,

    /// Write the emitted artifact to this path instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for independent sub-problems
    /// (default: STOKES_SPECTRA_JOBS or 1)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CouplingArg {
    /// factor 1/a^2 - 1/b^2 (vanishes on the circle; the accepted form)
    Difference,
    /// factor 1/a^2 + 1/b^2 (rejected by the circle-degeneration check)
    Sum,
}

impl From<CouplingArg> for MassCouplingForm {
    fn from(c: CouplingArg) -> Self {
        match c {
            CouplingArg::Difference => MassCouplingForm::AxisDifference,
            CouplingArg::Sum => MassCouplingForm::AxisSum,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve one Fourier mode of the disk problem
    Disk {
        /// Fourier mode
        #[arg(long)]
        m: i32,
        /// Truncation degree
        #[arg(long = "N")]
        degree: usize,
        /// Number of eigenvalues
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Impose the rejected pole condition (|m| = 1 only): drops the
        /// extra basis function and reproduces the spurious eigenvalue
        #[arg(long)]
        wrong_pole: bool,
        /// Assembly strategy
        #[arg(long, default_value = "checked")]
        assembly: String,
        /// Debug dump of the assembled matrices: writes
        /// `<prefix>.stiffness.json`, `<prefix>.mass.json` and
        /// `<prefix>.txt` in the banded format
        #[arg(long, value_name = "PREFIX")]
        dump_matrices: Option<PathBuf>,
    },
    /// Exact disk eigenvalues (squares of Bessel zeros) with the
    /// |Galerkin - exact| column
    Oracle {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Truncation degree for the comparison column
        #[arg(long = "N", default_value_t = 60)]
        degree: usize,
        #[arg(long, default_value = "checked")]
        assembly: String,
    },
    /// Sweep truncation degrees; report per-degree errors against the
    /// largest degree in the list
    Convergence {
        #[arg(long)]
        m: i32,
        /// Comma-separated truncation degrees
        #[arg(long = "N-list", value_delimiter = ',', required = true)]
        degrees: Vec<usize>,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long, default_value = "checked")]
        assembly: String,
    },
    /// Solve the coupled problem on an ellipse
    Ellipse {
        /// Semi-major axis
        #[arg(long)]
        a: f64,
        /// Semi-minor axis
        #[arg(long)]
        b: f64,
        #[arg(long = "N")]
        degree: usize,
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Override the Fourier truncation (default N/2)
        #[arg(long)]
        fourier: Option<usize>,
        /// Form of the mode-coupling mass factor
        #[arg(long, value_enum, default_value_t = CouplingArg::Difference)]
        mass_coupling: CouplingArg,
        /// Solve the full coupled system without the even/odd split
        #[arg(long)]
        monolithic: bool,
        /// Debug dump of the assembled block matrices: writes
        /// `<prefix>.stiffness.json` and `<prefix>.mass.json`
        #[arg(long, value_name = "PREFIX")]
        dump_blocks: Option<PathBuf>,
    },
    /// Sample an ellipse eigenfunction on a polar tensor grid
    Field {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long = "N")]
        degree: usize,
        /// 1-based eigenvalue index
        #[arg(long, default_value_t = 1)]
        index: usize,
        #[arg(long, default_value_t = 33)]
        nr: usize,
        #[arg(long, default_value_t = 64)]
        ntheta: usize,
    },
}

enum Failure {
    Validation(String),
    Solver(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Solver(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Solver(m) => m,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Validation(_) => "validation",
            Failure::Solver(_) => "solver",
        }
    }
}

fn validation(e: impl ToString) -> Failure {
    Failure::Validation(e.to_string())
}

/// Input problems exit with 1, genuine numerical failures with 2.
fn solver(e: SolverError) -> Failure {
    match e {
        SolverError::InvalidRequest(_)
        | SolverError::InvalidGeometry(_)
        | SolverError::IndexOutOfRange { .. }
        | SolverError::BesselOutOfRange { .. } => Failure::Validation(e.to_string()),
        _ => Failure::Solver(e.to_string()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap already formats usage; validation failures exit with 1
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let format = match cli.output {
        Format::Text => OutputKind::Text,
        Format::Csv => OutputKind::Csv,
        Format::Json => OutputKind::Json,
    };
    let jobs = cli
        .jobs
        .or_else(|| {
            std::env::var("STOKES_SPECTRA_JOBS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
        .max(1);

    match run(cli.command, format, jobs) {
        Ok(rendered) => match write_artifact(&cli.out, &rendered) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(failure) => {
            if format == OutputKind::Json {
                let err = json!({
                    "error": failure.message(),
                    "kind": failure.kind(),
                });
                println!("{}", serde_json::to_string_pretty(&err).unwrap());
            } else {
                eprintln!("error: {}", failure.message());
            }
            ExitCode::from(failure.code())
        }
    }
}

fn write_artifact(out: &Option<PathBuf>, rendered: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, rendered),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(rendered.as_bytes())
        }
    }
}

fn run(command: Command, format: OutputKind, jobs: usize) -> Result<String, Failure> {
    match command {
        Command::Disk {
            m,
            degree,
            k,
            wrong_pole,
            assembly,
            dump_matrices,
        } => disk(m, degree, k, wrong_pole, &assembly, dump_matrices, format),
        Command::Oracle {
            m,
            k,
            degree,
            assembly,
        } => oracle(m, k, degree, &assembly, format),
        Command::Convergence {
            m,
            degrees,
            k,
            assembly,
        } => convergence(m, &degrees, k, &assembly, format, jobs),
        Command::Ellipse {
            a,
            b,
            degree,
            k,
            fourier,
            mass_coupling,
            monolithic,
            dump_blocks,
        } => ellipse(
            a,
            b,
            degree,
            k,
            fourier,
            mass_coupling.into(),
            monolithic,
            dump_blocks,
            format,
            jobs,
        ),
        Command::Field {
            a,
            b,
            degree,
            index,
            nr,
            ntheta,
        } => field(a, b, degree, index, nr, ntheta, format),
    }
}

fn lookup_assembly(
    name: &str,
) -> Result<std::sync::Arc<dyn stokes_spectra::DiskAssembly>, Failure> {
    let registry = AssemblyRegistry::builtin();
    registry.get(name).ok_or_else(|| {
        validation(format!(
            "unknown assembly strategy '{name}' (available: {})",
            registry.names().join(", ")
        ))
    })
}

fn solve_disk_mode(
    m: i32,
    degree: usize,
    k: usize,
    wrong_pole: bool,
    assembly: &str,
    dump: Option<&PathBuf>,
) -> Result<Spectrum, Failure> {
    let strategy = lookup_assembly(assembly)?;
    let problem = if wrong_pole {
        ModeProblem::with_wrong_pole(m, degree).map_err(validation)?
    } else {
        ModeProblem::new(m, degree).map_err(validation)?
    };
    if k == 0 || k > problem.dimension() {
        return Err(validation(format!(
            "k must be between 1 and the problem dimension {}",
            problem.dimension()
        )));
    }
    let (a, b) = strategy.assemble(&problem).map_err(solver)?;
    if let Some(prefix) = dump {
        let base = prefix.display();
        let write = |path: String, content: String| {
            std::fs::write(&path, content)
                .map_err(|e| validation(format!("cannot write {path}: {e}")))
        };
        write(format!("{base}.stiffness.json"), a.dump_json())?;
        write(format!("{base}.mass.json"), b.dump_json())?;
        write(
            format!("{base}.txt"),
            format!("stiffness\n{}mass\n{}", a.dump_text(), b.dump_text()),
        )?;
    }
    let meta = SpectrumMeta {
        domain: DomainTag::Disk,
        mode: Some(problem.m),
        degree,
    };
    solve_gep(&a, &b, k, meta).map_err(solver)
}

fn spectrum_table(spectrum: &Spectrum) -> Table {
    Table {
        columns: vec!["index", "eigenvalue"],
        rows: spectrum
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, l)| vec![(i + 1).to_string(), sig15(*l)])
            .collect(),
    }
}

fn render_spectrum(
    spectrum: &Spectrum,
    format: OutputKind,
    title: String,
    meta: serde_json::Value,
) -> String {
    match format {
        OutputKind::Text => spectrum_table(spectrum).render_text(&title),
        OutputKind::Csv => spectrum_table(spectrum).render_csv(),
        OutputKind::Json => render_json(&json!({
            "meta": meta,
            "eigenvalues": spectrum.eigenvalues,
            "residuals": spectrum.residuals,
        })),
    }
}

#[allow(clippy::too_many_arguments)]
fn disk(
    m: i32,
    degree: usize,
    k: usize,
    wrong_pole: bool,
    assembly: &str,
    dump_matrices: Option<PathBuf>,
    format: OutputKind,
) -> Result<String, Failure> {
    let spectrum = solve_disk_mode(m, degree, k, wrong_pole, assembly, dump_matrices.as_ref())?;
    let title = format!("disk mode m={m}, N={degree}, k={k}");
    let meta = json!({
        "command": "disk",
        "domain": "disk",
        "mode": m,
        "degree": degree,
        "k": k,
        "assembly": assembly,
        "wrong_pole": wrong_pole,
    });
    Ok(render_spectrum(&spectrum, format, title, meta))
}

fn oracle(
    m: u32,
    k: usize,
    degree: usize,
    assembly: &str,
    format: OutputKind,
) -> Result<String, Failure> {
    let exact = exact_disk_eigenvalues(m, k).map_err(validation)?;
    let spectrum = solve_disk_mode(m as i32, degree, k, false, assembly, None)?;
    let errors: Vec<f64> = exact
        .iter()
        .zip(&spectrum.eigenvalues)
        .map(|(e, g)| (g - e).abs())
        .collect();
    let table = Table {
        columns: vec!["index", "exact", "abs_error"],
        rows: exact
            .iter()
            .zip(&errors)
            .enumerate()
            .map(|(i, (e, err))| vec![(i + 1).to_string(), sig15(*e), sig15(*err)])
            .collect(),
    };
    Ok(match format {
        OutputKind::Text => table.render_text(&format!(
            "exact disk eigenvalues for m={m} (squares of Bessel zeros), error of the N={degree} solve"
        )),
        OutputKind::Csv => table.render_csv(),
        OutputKind::Json => render_json(&json!({
            "meta": {
                "command": "oracle",
                "domain": "disk",
                "mode": m,
                "degree": degree,
                "k": k,
            },
            "exact": exact,
            "galerkin": spectrum.eigenvalues,
            "abs_error": errors,
        })),
    })
}

fn convergence(
    m: i32,
    degrees: &[usize],
    k: usize,
    assembly: &str,
    format: OutputKind,
    jobs: usize,
) -> Result<String, Failure> {
    if degrees.is_empty() {
        return Err(validation("N-list must not be empty"));
    }
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable();
    sorted.dedup();

    // Independent solves distributed over the worker budget.
    let results: Vec<Result<Spectrum, Failure>> = parallel_map(jobs, &sorted, |&degree| {
        solve_disk_mode(m, degree, k, false, assembly, None)
    });
    let mut spectra = Vec::with_capacity(results.len());
    for r in results {
        spectra.push(r?);
    }
    let reference = spectra.last().unwrap().eigenvalues.clone();

    let mut rows = Vec::new();
    let mut json_rows = Vec::new();
    for (degree, spec) in sorted.iter().zip(&spectra) {
        for (idx, (l, r)) in spec.eigenvalues.iter().zip(&reference).enumerate() {
            let err = (l - r).abs();
            rows.push(vec![
                degree.to_string(),
                (idx + 1).to_string(),
                sig15(*l),
                sig15(err),
            ]);
            json_rows.push(json!({
                "N": degree,
                "index": idx + 1,
                "eigenvalue": l,
                "error": err,
            }));
        }
    }
    let table = Table {
        columns: vec!["N", "index", "eigenvalue", "error"],
        rows,
    };
    Ok(match format {
        OutputKind::Text => table.render_text(&format!(
            "convergence of disk mode m={m} against the N={} reference",
            sorted.last().unwrap()
        )),
        OutputKind::Csv => table.render_csv(),
        OutputKind::Json => render_json(&json!({
            "meta": {
                "command": "convergence",
                "domain": "disk",
                "mode": m,
                "degrees": sorted,
                "k": k,
            },
            "rows": json_rows,
        })),
    })
}

#[allow(clippy::too_many_arguments)]
fn ellipse(
    a: f64,
    b: f64,
    degree: usize,
    k: usize,
    fourier: Option<usize>,
    form: MassCouplingForm,
    monolithic: bool,
    dump_blocks: Option<PathBuf>,
    format: OutputKind,
    jobs: usize,
) -> Result<String, Failure> {
    let geom = build_geometry(a, b, degree, fourier)?;
    if let Some(prefix) = &dump_blocks {
        let (ba, bb) = assemble_ellipse(&geom, form).map_err(solver)?;
        let base = prefix.display();
        let write = |path: String, content: String| {
            std::fs::write(&path, content)
                .map_err(|e| validation(format!("cannot write {path}: {e}")))
        };
        write(format!("{base}.stiffness.json"), ba.dump_json())?;
        write(format!("{base}.mass.json"), bb.dump_json())?;
    }
    let spectrum = solve_ellipse_with(&geom, k, form, !monolithic).map_err(solver)?;
    let _ = jobs; // parity classes already run concurrently inside the solve
    let title = format!("ellipse a={a}, b={b}, N={degree}, k={k}");
    let meta = json!({
        "command": "ellipse",
        "domain": "ellipse",
        "a": a,
        "b": b,
        "degree": degree,
        "fourier_modes": geom.fourier_modes,
        "k": k,
        "mass_coupling": form,
        "monolithic": monolithic,
    });
    Ok(render_spectrum(&spectrum, format, title, meta))
}

fn build_geometry(
    a: f64,
    b: f64,
    degree: usize,
    fourier: Option<usize>,
) -> Result<EllipseGeometry, Failure> {
    let mut geom = EllipseGeometry::new(a, b, degree).map_err(validation)?;
    if let Some(m) = fourier {
        if m == 0 {
            return Err(validation("Fourier truncation must be at least 1"));
        }
        geom = geom.with_fourier_modes(m);
    }
    Ok(geom)
}

fn field(
    a: f64,
    b: f64,
    degree: usize,
    index: usize,
    nr: usize,
    ntheta: usize,
    format: OutputKind,
) -> Result<String, Failure> {
    if index == 0 {
        return Err(validation("eigenvalue index is 1-based"));
    }
    if nr < 2 || ntheta < 4 {
        return Err(validation(
            "grid must have at least 2 radial and 4 angular points",
        ));
    }
    let geom = build_geometry(a, b, degree, None)?;
    let spectrum =
        solve_ellipse_with(&geom, index, MassCouplingForm::AxisDifference, true).map_err(solver)?;
    let samples = sample_eigenfunction(
        &geom,
        &spectrum.eigenvectors[index - 1],
        FieldGrid {
            n_r: nr,
            n_theta: ntheta,
        },
    );
    let table = Table {
        columns: vec!["x", "y", "value"],
        rows: samples
            .points
            .iter()
            .map(|p| vec![sig15(p.x), sig15(p.y), sig15(p.value)])
            .collect(),
    };
    Ok(match format {
        OutputKind::Text | OutputKind::Csv => table.render_csv(),
        OutputKind::Json => render_json(&json!({
            "meta": {
                "command": "field",
                "domain": "ellipse",
                "a": a,
                "b": b,
                "degree": degree,
                "index": index,
                "eigenvalue": spectrum.eigenvalues[index - 1],
                "n_r": nr,
                "n_theta": ntheta,
            },
            "points": samples.points,
        })),
    })
}

/// Runs `f` over `items` with at most `jobs` worker threads, preserving
/// input order in the results.
fn parallel_map<T: Sync, R: Send>(jobs: usize, items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<R>> = Vec::new();
    slots.resize_with(items.len(), || None);
    let slots_mutex = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(items.len()) {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                if idx >= items.len() {
                    break;
                }
                let r = f(&items[idx]);
                slots_mutex.lock().unwrap()[idx] = Some(r);
            });
        }
    });
    slots.into_iter().map(|s| s.unwrap()).collect()
}
