//! Command-line frontend. Every subcommand prints one JSON report; the exit
//! code is 0 when the report passes or certifies, 1 when it fails and 2 on
//! usage or input errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Signed;
use serde_json::json;

use crate::bitlinalg::{self, named, parse_ab, AffineBitMap, SimplexScheme};
use crate::error::Error;
use crate::lattice::{self, ChainSpec, Lattice3D};
use crate::opmatrix::{self, OpMatrix};
use crate::polyring::{MPoly, Rational, VarTable};
use crate::report::{Report, Status};
use crate::simplexcheck::{self, CaseIdeal, YbInterpretation};

#[derive(Parser, Debug)]
#[command(name = "tetra", version, about = "Exact checks for permutation-type simplex operators")]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    group: Group,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Constant n-simplex equation for a permutation-type operator.
    Simplex {
        #[command(subcommand)]
        cmd: SimplexCmd,
    },
    /// Parameterized tetrahedron equation for S + aT.
    Tetra {
        #[command(subcommand)]
        cmd: TetraCmd,
    },
    /// Non-constant Yang-Baxter relation for S + lam T.
    Yb {
        #[command(subcommand)]
        cmd: YbCmd,
    },
    /// Partial traces.
    Trace {
        #[command(subcommand)]
        cmd: TraceCmd,
    },
    /// Rank and determinant of S + aT.
    Op {
        #[command(subcommand)]
        cmd: OpCmd,
    },
    /// Transfer matrices and partition functions.
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Vertex weight tables.
    Vertices {
        #[command(subcommand)]
        cmd: VerticesCmd,
    },
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct MapSource {
    /// [A|B] file.
    #[arg(long)]
    ab: Option<PathBuf>,
    /// Built-in operator: S2, T2, S3, T3 or H4.
    #[arg(long)]
    op: Option<String>,
}

#[derive(Subcommand, Debug)]
enum SimplexCmd {
    Check {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=4))]
        n: u32,
        #[command(flatten)]
        source: MapSource,
    },
}

#[derive(Subcommand, Debug)]
enum TetraCmd {
    /// Dump the nonzero residual entries.
    Residual,
    VerifyCase {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        case: u8,
        /// Substitution variable for the non-trivial generator.
        #[arg(long)]
        pivot: Option<String>,
    },
    Sample {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        case: u8,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    OffVariety {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum InterpretationArg {
    AllR,
    Literal,
}

#[derive(Subcommand, Debug)]
enum YbCmd {
    Verify {
        /// Force one reading; by default all-r is tried, then literal.
        #[arg(long, value_enum)]
        interpretation: Option<InterpretationArg>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    Atanh {
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum TraceCmd {
    Partial {
        #[command(flatten)]
        source: MapSource,
        #[arg(long)]
        site: usize,
    },
}

#[derive(Args, Debug)]
struct OpArgs {
    #[command(flatten)]
    source: MapSource,
    /// [A|B] file for T; defaults to S followed by flipping every color.
    #[arg(long, conflicts_with = "t_op")]
    t: Option<PathBuf>,
    /// Built-in operator for T.
    #[arg(long)]
    t_op: Option<String>,
    /// Coefficient of T, as p/q.
    #[arg(long, value_parser = parse_rational)]
    a: Option<Rational>,
}

#[derive(Subcommand, Debug)]
enum OpCmd {
    /// Rank over the rationals (a defaults to 1).
    Rank(OpArgs),
    /// Determinant, symbolic in `a` unless --a is given.
    Det(OpArgs),
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    TransferCommute {
        #[arg(long)]
        sites: usize,
        /// Prove commutation as a polynomial identity (up to 4 sites).
        #[arg(long)]
        symbolic: bool,
    },
    Rlm {
        /// [A|B] file or built-in name.
        #[arg(long)]
        r: String,
        #[arg(long)]
        l: String,
        #[arg(long)]
        m: String,
        /// Three coefficients p,q,r turning each X into X + p (flipped X).
        #[arg(long, value_parser = parse_rational, value_delimiter = ',', allow_hyphen_values = true)]
        params: Option<Vec<Rational>>,
    },
    Partition {
        #[arg(long, value_parser = parse_dims)]
        dims: [usize; 3],
        #[arg(long, value_parser = parse_rational, conflicts_with = "symbolic")]
        a: Option<Rational>,
        #[arg(long)]
        symbolic: bool,
        /// Write `a,Z(a)` samples to this CSV file.
        #[arg(long, requires = "samples")]
        csv: Option<PathBuf>,
        #[arg(long, value_parser = parse_rational, value_delimiter = ',')]
        samples: Option<Vec<Rational>>,
    },
}

#[derive(Subcommand, Debug)]
enum VerticesCmd {
    List {
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
        dim: u8,
    },
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    Rational::from_str(s.trim()).map_err(|e| format!("`{s}` is not a rational p/q: {e}"))
}

fn parse_dims(s: &str) -> Result<[usize; 3], String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    parts.try_into().map_err(|_| format!("`{s}` must be three comma-separated sizes"))
}

#[derive(Debug)]
struct CliError(String);

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError(e.to_string())
    }
}

fn read_map(path: &Path) -> Result<AffineBitMap, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))?;
    parse_ab(&text).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn builtin(name: &str) -> Result<AffineBitMap, CliError> {
    named::by_name(name)
        .ok_or_else(|| CliError(format!("unknown operator `{name}`; built-ins are {}", named::NAMES.join(", "))))
}

fn load(source: &MapSource) -> Result<AffineBitMap, CliError> {
    match (&source.ab, &source.op) {
        (Some(p), _) => read_map(p),
        (None, Some(n)) => builtin(n),
        (None, None) => Err(CliError("one of --ab or --op is required".into())),
    }
}

/// A path if one exists, a built-in name otherwise.
fn load_spec(spec: &str) -> Result<AffineBitMap, CliError> {
    let p = Path::new(spec);
    if p.exists() {
        read_map(p)
    } else {
        builtin(spec)
    }
}

fn op_matrix(args: &OpArgs, coeff: &MPoly) -> Result<OpMatrix, CliError> {
    let s = load(&args.source)?;
    let t = match (&args.t, &args.t_op) {
        (Some(p), _) => read_map(p)?,
        (None, Some(n)) => builtin(n)?,
        (None, None) => s.flipped(),
    };
    if t.arity() != s.arity() {
        return Err(Error::ArityMismatch { expected: s.arity(), found: t.arity() }.into());
    }
    let vars = coeff.vars();
    let sm = OpMatrix::from_perm(&s.to_perm(), vars);
    let tm = OpMatrix::from_perm(&t.to_perm(), vars);
    Ok(OpMatrix::linear_comb(&sm, &tm, coeff)?)
}

fn informational(check: &str, details: serde_json::Value, started: Instant) -> Report {
    let mut r = Report::new(check, Status::Pass);
    r.details = Some(details);
    r.finish(started)
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    let started = Instant::now();
    let report = match &cli.group {
        Group::Simplex { cmd: SimplexCmd::Check { n, source } } => {
            let map = load(source)?;
            let scheme = SimplexScheme::new(*n as usize)?;
            bitlinalg::perm_simplex_check(&scheme, &map.to_perm())?
        }
        Group::Tetra { cmd } => {
            let residual = simplexcheck::build_tetra_residual();
            match cmd {
                TetraCmd::Residual => {
                    let m = residual.matrix();
                    let multilinear = residual.is_multilinear();
                    let mut r = Report::new("tetra-residual", if multilinear { Status::Pass } else { Status::Fail });
                    r.witnesses = m.dump();
                    r.max_degree_per_var = m.max_degree_per_var();
                    r.details = Some(json!({ "nonzero_entries": m.count_nonzero(), "multilinear": multilinear }));
                    r.finish(started)
                }
                TetraCmd::VerifyCase { case, pivot } => {
                    let c = CaseIdeal::known(*case)?;
                    simplexcheck::verify_case_with_pivot(&residual, &c, pivot.as_deref())?
                }
                TetraCmd::Sample { case, count, seed } => {
                    simplexcheck::sample_case(&residual, &CaseIdeal::known(*case)?, *count, *seed)?
                }
                TetraCmd::OffVariety { count, seed } => simplexcheck::sample_off_variety(&residual, *count, *seed)?,
            }
        }
        Group::Yb { cmd } => match cmd {
            YbCmd::Verify { interpretation, count, seed } => match interpretation {
                None => simplexcheck::verify_yb_condition(*count, *seed)?,
                Some(InterpretationArg::AllR) => simplexcheck::verify_yb_with(YbInterpretation::AllR, *count, *seed)?,
                Some(InterpretationArg::Literal) => {
                    simplexcheck::verify_yb_with(YbInterpretation::Literal, *count, *seed)?
                }
            },
            YbCmd::Atanh { count, seed } => simplexcheck::atanh_consistency(*count, *seed)?,
        },
        Group::Trace { cmd: TraceCmd::Partial { source, site } } => {
            let map = load(source)?;
            let vars = VarTable::empty();
            let traced = OpMatrix::from_perm(&map.to_perm(), &vars).partial_trace(*site)?;
            let mut r = informational(
                "partial-trace",
                json!({ "sites": traced.sites(), "rank": opmatrix::rank_rational(&traced)? }),
                started,
            );
            r.witnesses = traced.dump();
            r
        }
        Group::Op { cmd } => match cmd {
            OpCmd::Rank(args) => {
                let vars = VarTable::empty();
                let a = args.a.clone().unwrap_or_else(|| Rational::from_integer(1.into()));
                let m = op_matrix(args, &MPoly::constant(&vars, a.clone()))?;
                let rank = opmatrix::rank_rational(&m)?;
                informational("rank", json!({ "a": a.to_string(), "dim": m.dim(), "rank": rank }), started)
            }
            OpCmd::Det(args) => {
                let (coeff, a) = match &args.a {
                    Some(a) => (MPoly::constant(&VarTable::empty(), a.clone()), Some(a.to_string())),
                    None => (MPoly::var(&VarTable::new(["a"])?, "a")?, None),
                };
                let m = op_matrix(args, &coeff)?;
                let det = m.det_symbolic();
                let mut r = informational("det", json!({ "a": a, "dim": m.dim(), "det": det.to_string() }), started);
                r.max_degree_per_var = m.max_degree_per_var();
                r
            }
        },
        Group::Lattice { cmd } => lattice_cmd(cmd, started)?,
        Group::Vertices { cmd: VerticesCmd::List { dim } } => {
            let (m, var) = if *dim == 2 {
                let vars = VarTable::new(["lam"])?;
                (lattice::r2(&MPoly::var(&vars, "lam")?), "lam")
            } else {
                let vars = VarTable::new(["a"])?;
                (lattice::sixteen_vertex_weights(&MPoly::var(&vars, "a")?), "a")
            };
            let mut r = informational(
                "vertices",
                json!({ "dim": dim, "parameter": var, "nonzero_weights": m.count_nonzero() }),
                started,
            );
            r.witnesses = m.dump();
            r
        }
    };
    Ok(report)
}

fn lattice_cmd(cmd: &LatticeCmd, started: Instant) -> Result<Report, CliError> {
    Ok(match cmd {
        LatticeCmd::TransferCommute { sites, symbolic } => {
            let chain = ChainSpec::new(*sites)?;
            if *symbolic {
                lattice::transfer_commutator(chain)?
            } else {
                numeric_commute(chain, started)?
            }
        }
        LatticeCmd::Rlm { r, l, m, params } => {
            let maps = [load_spec(r)?, load_spec(l)?, load_spec(m)?];
            let vars = VarTable::empty();
            let ops: Vec<OpMatrix> = match params {
                None => maps.iter().map(|x| OpMatrix::from_perm(&x.to_perm(), &vars)).collect(),
                Some(ps) if ps.len() == 3 => maps
                    .iter()
                    .zip(ps)
                    .map(|(x, p)| simplexcheck::local_operator(x, &MPoly::constant(&vars, p.clone())))
                    .collect(),
                Some(ps) => return Err(CliError(format!("--params needs 3 values, got {}", ps.len()))),
            };
            let mut rep = lattice::rlm_check(&ops[0], &ops[1], &ops[2])?;
            rep.details = Some(json!({
                "params": params.as_ref().map(|ps| ps.iter().map(ToString::to_string).collect::<Vec<_>>()),
            }));
            rep
        }
        LatticeCmd::Partition { dims, a, symbolic, csv, samples } => {
            let lat = Lattice3D::new(*dims)?;
            if let (Some(path), Some(samples)) = (csv, samples) {
                std::fs::write(path, lattice::partition_csv(&lat, samples)?)?;
            }
            let (vars, coeff) = match (a, symbolic) {
                (Some(a), _) => {
                    let vars = VarTable::empty();
                    let c = MPoly::constant(&vars, a.clone());
                    (vars, c)
                }
                (None, _) => {
                    let vars = VarTable::new(["a"])?;
                    let c = MPoly::var(&vars, "a")?;
                    (vars, c)
                }
            };
            let _ = vars;
            let z = lattice::partition_3d(&lat, &lattice::sixteen_vertex_weights(&coeff))?;
            let ok = match a {
                // positive weights must give a positive sum
                Some(a) if a.is_positive() => z.as_constant().is_some_and(|v| v.is_positive()),
                Some(_) => true,
                None => z.terms().all(|(_, c)| c.is_integer() && !c.is_negative()),
            };
            let mut rep = Report::new("partition-3d", if ok { Status::Pass } else { Status::Fail });
            rep.details = Some(json!({
                "dims": dims,
                "a": a.as_ref().map(ToString::to_string),
                "Z": z.to_string(),
                "edges": lat.num_edges(),
            }));
            rep.finish(started)
        }
    })
}

/// Commutator of numeric transfer matrices on a grid of parameter values
/// that includes the singular points `±1`.
fn numeric_commute(chain: ChainSpec, started: Instant) -> Result<Report, CliError> {
    let grid: Vec<Rational> = ["-2", "-1", "-1/2", "0", "1/3", "1", "3"]
        .iter()
        .map(|s| Rational::from_str(s).expect("literal"))
        .collect();
    let vars = VarTable::empty();
    let transfers: Vec<OpMatrix> = grid
        .iter()
        .map(|x| lattice::row_transfer(chain, &MPoly::constant(&vars, x.clone())))
        .collect::<Result<_, _>>()?;
    let mut failures = Vec::new();
    for (i, ti) in transfers.iter().enumerate() {
        for (j, tj) in transfers.iter().enumerate().skip(i + 1) {
            let c = ti.matmul(tj)?.sub(&tj.matmul(ti)?)?;
            if !c.is_zero() {
                failures.push(format!("mu={}, nu={}", grid[i], grid[j]));
            }
        }
    }
    let mut r = Report::new("transfer-commute-numeric", if failures.is_empty() { Status::Pass } else { Status::Fail });
    r.points = Some(grid.len() * (grid.len() - 1) / 2);
    r.details = Some(json!({
        "sites": chain.n_sites(),
        "grid": grid.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "failing_pairs": failures,
    }));
    Ok(r.finish(started))
}

/// Parses `args` (including the program name), runs the command and writes
/// the report. Returns the process exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    2
                }
            };
        }
    };
    let mut report = match execute(&cli) {
        Ok(r) => r,
        Err(CliError(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            return 2;
        }
    };
    report.invocation = Some(argv);
    let json = report.to_json();
    let written = match &cli.out {
        Some(path) => std::fs::write(path, format!("{json}\n")),
        None => writeln!(stdout, "{json}"),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return 2;
    }
    if report.passed() {
        0
    } else {
        1
    }
}
