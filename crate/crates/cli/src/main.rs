use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use tanhrank::cover::{
    build_graph, cover_to_partition, greedy_upp, partition_to_cover, solve_scalar_cover, solve_upp_exact,
    verify_clique_partition, verify_partition, Cover, CoverError, CoverInstance, Partition, PointSet,
};
use tanhrank::format::{Document, FormatError, GadgetLibrary};
use tanhrank::proximate::{
    exact_prank, exact_witness, greedy_bound, verify_par_certificate, verify_upar_certificate, ParCertificate,
    ProximateError, DEFAULT_UNIT_LIMIT,
};
use tanhrank::rational::int;
use tanhrank::reductions::xsat::tile_eps;
use tanhrank::reductions::{
    check_gadget, ssum_to_ssz, Dir, ssz_to_upar, upc_to_par, xsat_to_upp, GridLayout, ReductionError, RestrictedFormula,
    SsumInstance, SszInstance,
};
use tanhrank::{compress, parse_rational, rank, BiaslessParameter, Parameter, Rational};

mod plot;

#[derive(Parser)]
#[command(name = "tanhrank", version, about = "Exact rank, proximate rank and covering tools for tanh networks")]
struct Cli {
    /// Worker threads for parallel solvers; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write a JSON run report (inputs with digests, output, timing).
    #[arg(long, global = true, value_name = "FILE")]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Losslessly compress a parameter.
    Compress { param: PathBuf },
    /// Rank of a parameter.
    Rank { param: PathBuf },
    /// Proximate rank bounds, exact values and witnesses.
    Prank {
        #[command(subcommand)]
        command: PrankCommand,
    },
    /// Uniform point cover and partition solvers.
    Cover {
        #[command(subcommand)]
        command: CoverCommand,
    },
    /// Check certificates; exit code 1 when rejected.
    Verify {
        #[command(subcommand)]
        command: VerifyCommand,
    },
    /// Build reduced instances.
    Reduce {
        #[command(subcommand)]
        command: ReduceCommand,
    },
    /// Gadget library tools.
    Gadget {
        #[command(subcommand)]
        command: GadgetCommand,
    },
    /// Render a 2-D point set, optionally with a partition or cover, as SVG.
    Plot {
        points: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, conflicts_with = "cover")]
        partition: Option<PathBuf>,
        #[arg(long, requires = "eps")]
        cover: Option<PathBuf>,
        /// Cover radius.
        #[arg(long, value_parser = rational_arg)]
        eps: Option<Rational>,
    },
}

#[derive(Subcommand)]
enum PrankCommand {
    /// Greedy upper bound.
    Bound {
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        param: PathBuf,
    },
    /// Exact proximate rank; with --r, exit code 1 when it exceeds r.
    Exact {
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long, default_value_t = DEFAULT_UNIT_LIMIT)]
        limit: usize,
        #[arg(long)]
        r: Option<usize>,
        param: PathBuf,
    },
    /// A parameter of least rank within eps.
    Witness {
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long, default_value_t = DEFAULT_UNIT_LIMIT)]
        limit: usize,
        param: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformTarget {
    Cover,
    Partition,
    Clique,
}

#[derive(Subcommand)]
enum CoverCommand {
    /// Minimum cover of 1-D points by intervals of radius eps.
    Scalar {
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long)]
        r: Option<usize>,
        points: PathBuf,
    },
    /// Greedy partition with diameter at most eps.
    Greedy {
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long)]
        r: Option<usize>,
        points: PathBuf,
    },
    /// Minimum partition with diameter at most eps.
    Exact {
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = tanhrank::cover::DEFAULT_POINT_LIMIT)]
        limit: usize,
        points: PathBuf,
    },
    /// Convert between partitions (diameter eps), covers (radius eps/2) and
    /// clique partitions of the eps graph.
    Transform {
        #[arg(long, value_enum)]
        to: TransformTarget,
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        points: PathBuf,
        /// A partition, or a cover when converting to a partition.
        solution: PathBuf,
    },
}

#[derive(Subcommand)]
#[allow(clippy::enum_variant_names)]
enum VerifyCommand {
    /// Unit partition certificate for a parameter.
    ParCert {
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long)]
        r: usize,
        instance: PathBuf,
        cert: PathBuf,
    },
    /// Unit partition certificate for a biasless parameter.
    UparCert {
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long)]
        r: usize,
        instance: PathBuf,
        cert: PathBuf,
    },
    /// Point partition with diameter at most eps and at most r groups.
    UppCert {
        #[arg(long, value_parser = rational_arg)]
        eps: Rational,
        #[arg(long)]
        r: usize,
        instance: PathBuf,
        cert: PathBuf,
    },
}

#[derive(Subcommand)]
enum ReduceCommand {
    UpcToPar { instance: PathBuf },
    SsumToSsz { instance: PathBuf },
    SszToUpar { instance: PathBuf },
    XsatToUpp {
        formula: PathBuf,
        #[arg(long)]
        layout: PathBuf,
    },
}

#[derive(Subcommand)]
enum GadgetCommand {
    /// Exhaustively check every gadget; exit code 1 if any fails.
    Check { library: PathBuf },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Limit(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Limit(_) => 3,
            _ => 2,
        }
    }
}

impl From<ProximateError> for CliError {
    fn from(e: ProximateError) -> Self {
        match e {
            ProximateError::UnitLimit { .. } => CliError::Limit(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<CoverError> for CliError {
    fn from(e: CoverError) -> Self {
        match e {
            CoverError::PointLimit { .. } => CliError::Limit(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::SizeLimit { .. } | ReductionError::Cover(CoverError::PointLimit { .. }) => {
                CliError::Limit(e.to_string())
            }
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

/// Command result: stdout text and, for decision commands, the answer.
struct Output {
    text: String,
    decision: Option<bool>,
    exact: bool,
}

impl Output {
    fn text(text: String) -> Self {
        Output { text: terminated(text), decision: None, exact: true }
    }

    fn decision(text: String, answer: bool) -> Self {
        Output { text: terminated(text), decision: Some(answer), exact: true }
    }

    fn within(text: String, size: usize, r: Option<usize>) -> Self {
        Output { text: terminated(text), decision: r.map(|r| size <= r), exact: true }
    }
}

fn terminated(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

/// Reads input files and records their digests.
#[derive(Default)]
struct Inputs {
    seen: Vec<(PathBuf, String)>,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        let digest = Sha256::digest(text.as_bytes());
        let hex = digest.iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        });
        self.seen.push((path.into(), hex));
        Ok(text)
    }

    fn load<T: Document>(&mut self, path: &Path) -> Result<T, CliError> {
        let text = self.read(path)?;
        T::from_json_str(&text).map_err(|source| CliError::Format { path: path.into(), source })
    }
}

fn accept(answer: bool) -> String {
    if answer { "affirmative" } else { "negative" }.to_string()
}

fn run(command: &Command, inputs: &mut Inputs) -> Result<Output, CliError> {
    match command {
        Command::Compress { param } => {
            let w: Parameter = inputs.load(param)?;
            Ok(Output::text(compress(&w).to_json_string()))
        }
        Command::Rank { param } => {
            let w: Parameter = inputs.load(param)?;
            Ok(Output::text(rank(&w).to_string()))
        }
        Command::Prank { command } => run_prank(command, inputs),
        Command::Cover { command } => run_cover(command, inputs),
        Command::Verify { command } => run_verify(command, inputs),
        Command::Reduce { command } => run_reduce(command, inputs),
        Command::Gadget { command: GadgetCommand::Check { library } } => {
            let lib: GadgetLibrary = inputs.load(library)?;
            let eps = tile_eps();
            let mut text = String::new();
            let mut passed = 0;
            for g in &lib.gadgets {
                let report = check_gadget(g, &eps)?;
                let ok = report.passes(g.r());
                passed += usize::from(ok);
                let family = |f: &[Vec<Dir>]| {
                    let sets: Vec<String> =
                        f.iter().map(|s| format!("{{{}}}", s.iter().map(Dir::to_string).collect::<String>())).collect();
                    sets.join(",")
                };
                let _ = writeln!(
                    text,
                    "{} {}: r={} interior={} min-groups={} realizable={} required={} separated={}",
                    if ok { "PASS" } else { "FAIL" },
                    g.tile(),
                    g.r(),
                    g.interior().len(),
                    report.interior_groups,
                    family(&report.realizable),
                    family(&report.required),
                    report.separated,
                );
            }
            let _ = writeln!(text, "{passed} of {} gadgets pass", lib.gadgets.len());
            Ok(Output::decision(text, passed == lib.gadgets.len()))
        }
        Command::Plot { points, output, partition, cover, eps } => {
            let pts: PointSet = inputs.load(points)?;
            let overlay = match (partition, cover) {
                (Some(p), _) => plot::Overlay::Partition(inputs.load::<Partition>(p)?),
                (None, Some(c)) => plot::Overlay::Cover(inputs.load::<Cover>(c)?, eps.clone().expect("required by clap")),
                (None, None) => plot::Overlay::None,
            };
            let svg = plot::render(&pts, &overlay).map_err(CliError::Invalid)?;
            std::fs::write(output, svg).map_err(|source| CliError::Io { path: output.clone(), source })?;
            Ok(Output { text: format!("wrote {}\n", output.display()), decision: None, exact: false })
        }
    }
}

fn warn_limit(limit: usize) {
    if limit > DEFAULT_UNIT_LIMIT {
        eprintln!("warning: unit limit {limit} is above the default {DEFAULT_UNIT_LIMIT}; search time grows super-exponentially");
    }
}

fn run_prank(command: &PrankCommand, inputs: &mut Inputs) -> Result<Output, CliError> {
    match command {
        PrankCommand::Bound { eps, param } => {
            let w: Parameter = inputs.load(param)?;
            Ok(Output::text(greedy_bound(eps, &w)?.bound.to_string()))
        }
        PrankCommand::Exact { eps, limit, r, param } => {
            warn_limit(*limit);
            let w: Parameter = inputs.load(param)?;
            let value = exact_prank(eps, &w, *limit)?;
            Ok(Output::within(value.to_string(), value, *r))
        }
        PrankCommand::Witness { eps, limit, param } => {
            warn_limit(*limit);
            let w: Parameter = inputs.load(param)?;
            Ok(Output::text(exact_witness(eps, &w, *limit)?.to_json_string()))
        }
    }
}

fn run_cover(command: &CoverCommand, inputs: &mut Inputs) -> Result<Output, CliError> {
    match command {
        CoverCommand::Scalar { eps, r, points } => {
            let pts: PointSet = inputs.load(points)?;
            if pts.p() != 1 {
                return Err(CliError::Invalid(format!("scalar cover needs 1-D points, got dimension {}", pts.p())));
            }
            if *eps <= int(0) {
                return Err(CoverError::NonPositiveEps(eps.clone()).into());
            }
            let xs: Vec<Rational> = pts.points().iter().map(|x| x[0].clone()).collect();
            let centres = solve_scalar_cover(eps, &xs);
            let cover = Cover { points: centres.into_iter().map(|c| vec![c]).collect() };
            Ok(Output::within(cover.to_json_string(), cover.len(), *r))
        }
        CoverCommand::Greedy { eps, r, points } => {
            let pts: PointSet = inputs.load(points)?;
            CoverInstance::new(pts.clone(), eps.clone(), 0)?;
            let p = greedy_upp(&pts, eps);
            Ok(Output::within(p.to_json_string(), p.len(), *r))
        }
        CoverCommand::Exact { eps, r, limit, points } => {
            let pts: PointSet = inputs.load(points)?;
            let p = solve_upp_exact(&pts, eps, *limit)?;
            Ok(Output::within(p.to_json_string(), p.len(), *r))
        }
        CoverCommand::Transform { to, eps, points, solution } => {
            let pts: PointSet = inputs.load(points)?;
            match to {
                TransformTarget::Cover => {
                    let p: Partition = inputs.load(solution)?;
                    Ok(Output::text(partition_to_cover(&pts, &p, eps)?.to_json_string()))
                }
                TransformTarget::Partition => {
                    let c: Cover = inputs.load(solution)?;
                    Ok(Output::text(cover_to_partition(&pts, &c, eps)?.to_json_string()))
                }
                TransformTarget::Clique => {
                    let p: Partition = inputs.load(solution)?;
                    let graph = build_graph(&pts, eps);
                    let ok = verify_clique_partition(&graph, &p)?;
                    let edges: Vec<[usize; 2]> = graph.edges().into_iter().map(|(i, j)| [i + 1, j + 1]).collect();
                    let mut doc = p.to_json();
                    doc["vertices"] = json!(graph.vertex_count());
                    doc["edges"] = json!(edges);
                    Ok(Output::decision(pretty(&doc), ok))
                }
            }
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn run_verify(command: &VerifyCommand, inputs: &mut Inputs) -> Result<Output, CliError> {
    let answer = match command {
        VerifyCommand::ParCert { eps, r, instance, cert } => {
            let w: Parameter = inputs.load(instance)?;
            let c: ParCertificate = inputs.load(cert)?;
            verify_par_certificate(eps, *r, &w, &c)?
        }
        VerifyCommand::UparCert { eps, r, instance, cert } => {
            let u: BiaslessParameter = inputs.load(instance)?;
            let c: ParCertificate = inputs.load(cert)?;
            verify_upar_certificate(eps, *r, &u, &c)?
        }
        VerifyCommand::UppCert { eps, r, instance, cert } => {
            let pts: PointSet = inputs.load(instance)?;
            let p: Partition = inputs.load(cert)?;
            CoverInstance::new(pts.clone(), eps.clone(), *r)?;
            p.len() <= *r && verify_partition(&pts, &p, eps)?
        }
    };
    Ok(Output::decision(accept(answer), answer))
}

fn run_reduce(command: &ReduceCommand, inputs: &mut Inputs) -> Result<Output, CliError> {
    let doc = match command {
        ReduceCommand::UpcToPar { instance } => {
            let inst: CoverInstance = inputs.load(instance)?;
            upc_to_par(&inst)?.to_json_string()
        }
        ReduceCommand::SsumToSsz { instance } => {
            let inst: SsumInstance = inputs.load(instance)?;
            ssum_to_ssz(&inst).to_json_string()
        }
        ReduceCommand::SszToUpar { instance } => {
            let inst: SszInstance = inputs.load(instance)?;
            ssz_to_upar(&inst)?.to_json_string()
        }
        ReduceCommand::XsatToUpp { formula, layout } => {
            let f: RestrictedFormula = inputs.load(formula)?;
            let l: GridLayout = inputs.load(layout)?;
            xsat_to_upp(&f, &l)?.instance.to_json_string()
        }
    };
    Ok(Output::text(doc))
}

fn write_report(path: &Path, inputs: &Inputs, result: &Result<Output, CliError>, code: u8, elapsed: f64) -> Result<(), CliError> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (output, exact, error) = match result {
        Ok(out) => (Value::String(out.text.clone()), out.exact, Value::Null),
        Err(e) => (Value::Null, true, Value::String(e.to_string())),
    };
    let report = json!({
        "format": tanhrank::format::FORMAT,
        "command": args,
        "inputs": inputs.seen.iter().map(|(p, d)| json!({"path": p.display().to_string(), "sha256": d})).collect::<Vec<_>>(),
        "output": output,
        "error": error,
        "exit_code": code,
        "exact": exact,
        "elapsed_ms": elapsed,
    });
    std::fs::write(path, terminated(pretty(&report))).map_err(|source| CliError::Io { path: path.into(), source })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let result = run(&cli.command, &mut inputs);
    let code = match &result {
        Ok(out) => {
            print!("{}", out.text);
            if out.decision == Some(false) {
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    if let Some(path) = &cli.report {
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        if let Err(e) = write_report(path, &inputs, &result, code, elapsed) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
