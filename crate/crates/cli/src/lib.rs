//! The `ashg` command line.
//!
//! Exit codes: 0 when something was found, verified or is stable; 1 when a
//! partition is not stable or no stable partition exists; 2 when the bounds
//! admit no partition or no algorithm applies; 3 on input errors.
//!
//! Results go to stdout in the library's text formats. Diagnostics go to
//! stderr.

use std::io::Write;
use std::path::{Path, PathBuf};

use ashg_core::algorithms::{cis_star_nonneg, cis_star_nonzero, cis_upper, cns_pairs, symmetric_dynamics};
use ashg_core::exact::{exists_stable_parallel, max_welfare_partition, EnumerationBudget};
use ashg_core::instances::{intro_partition, make_instance, InstanceFamily};
use ashg_core::io::{
    parse_certificate, parse_game, parse_partition, parse_source, write_game, write_partition,
    SourceInstance,
};
use ashg_core::model::{feasible_k_partition_exists, feasible_partition_exists, greedy_partition};
use ashg_core::prefs::social_welfare;
use ashg_core::reductions::{
    mmm_to_ns_is, witness_partition, x3c_to_cns, x3c_to_ns_bounded, Construction, ReducedGame,
};
use ashg_core::stability::verify;
use ashg_core::{Base, Deviation, Error, Game, Partition, SizeBounds, StabilityConcept, Target};
use clap::{Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_UNSUPPORTED: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ashg", version, about = "Stable size-bounded coalition structures in additively separable hedonic games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute a stable partition with a polynomial-time algorithm.
    Solve {
        #[arg(long, value_parser = parse_concept)]
        concept: StabilityConcept,
        #[arg(long, value_parser = parse_bounds)]
        bounds: SizeBounds,
        /// Number of coalitions, for the lower-bound algorithms.
        #[arg(long)]
        k: Option<usize>,
        game: PathBuf,
    },
    /// Check a partition against a stability concept.
    Verify {
        #[arg(long, value_parser = parse_concept)]
        concept: StabilityConcept,
        #[arg(long, value_parser = parse_bounds)]
        bounds: SizeBounds,
        game: PathBuf,
        partition: PathBuf,
    },
    /// Decide existence of a stable partition by exhaustive search.
    Exists {
        #[arg(long, value_parser = parse_concept)]
        concept: StabilityConcept,
        #[arg(long, value_parser = parse_bounds)]
        bounds: SizeBounds,
        /// Use the exhaustive solver (the only method available).
        #[arg(long, required = true)]
        exact: bool,
        /// Largest agent count the solver accepts.
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        game: PathBuf,
    },
    /// Find a partition of maximum social welfare by exhaustive search.
    Maxwelfare {
        #[arg(long, value_parser = parse_bounds)]
        bounds: SizeBounds,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        game: PathBuf,
    },
    /// Print a named game.
    Gen {
        #[arg(long)]
        family: String,
        /// Family parameter as key=value; repeatable.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, usize)>,
        /// Print the pair partition of the intro families instead of the game.
        #[arg(long)]
        partition: bool,
    },
    /// Build a hardness gadget from a source instance.
    Reduce {
        #[arg(long, value_enum)]
        from: SourceKind,
        /// Construction: 5 (X3C to CNS), 6 (matching to NS/IS) or 9 (X3C to
        /// NS with both bounds).
        #[arg(long, value_parser = parse_construction)]
        theorem: Construction,
        #[arg(long, conflicts_with = "bounds")]
        mu: Option<usize>,
        #[arg(long, value_parser = parse_bounds)]
        bounds: Option<SizeBounds>,
        instance: PathBuf,
        /// Print the witness partition for this certificate instead of the game.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Run improvement dynamics on a symmetric game to an NS* partition.
    Dynamics {
        #[arg(long, value_parser = parse_bounds)]
        bounds: SizeBounds,
        game: PathBuf,
        #[arg(long)]
        init: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SourceKind {
    X3c,
    Mmm,
}

impl SourceKind {
    fn name(&self) -> &'static str {
        match self {
            SourceKind::X3c => "x3c",
            SourceKind::Mmm => "mmm",
        }
    }
}

fn parse_concept(s: &str) -> Result<StabilityConcept, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_bounds(s: &str) -> Result<SizeBounds, String> {
    let (lo, hi) = s.split_once(':').ok_or("bounds must look like LOWER:UPPER")?;
    let lo = lo.trim().parse().map_err(|_| format!("bad lower bound '{lo}'"))?;
    let hi = hi.trim().parse().map_err(|_| format!("bad upper bound '{hi}'"))?;
    SizeBounds::new(lo, hi).map_err(|e| e.to_string())
}

fn parse_param(s: &str) -> Result<(String, usize), String> {
    let (k, v) = s.split_once('=').ok_or("parameter must look like key=value")?;
    let v = v.parse().map_err(|_| format!("parameter {k} must be a nonnegative integer"))?;
    Ok((k.to_string(), v))
}

fn parse_construction(s: &str) -> Result<Construction, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible { .. }
            | Error::EqualBounds
            | Error::NonzeroViolation { .. }
            | Error::NegativeValuationViolation { .. }
            | Error::NotSymmetric
            | Error::UnsupportedBounds(_)
            | Error::BudgetExceeded(_) => EXIT_UNSUPPORTED,
            _ => EXIT_INPUT,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: ashg_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn load_game(path: &Path) -> Result<Game<i64>, Failure> {
    with_path(path, parse_game(&read(path)?))
}

fn load_partition(path: &Path, n: usize) -> Result<Partition, Failure> {
    with_path(path, parse_partition(&read(path)?, n))
}

fn require_partitions(n: usize, b: SizeBounds) -> Result<(), Failure> {
    if feasible_partition_exists(n, b) {
        Ok(())
    } else {
        Err(Failure::new(EXIT_UNSUPPORTED, format!("no {b}-partition of {n} agents exists")))
    }
}

/// `agent -> members of the joined coalition`, or `-> new`, one-based.
fn describe(p: &Partition, d: Deviation) -> String {
    let target = match d.target {
        Target::Coalition(c) => {
            p.coalition(c).iter().map(|a| (a + 1).to_string()).collect::<Vec<_>>().join(" ")
        }
        Target::New => "new".to_string(),
    };
    format!("deviation {} -> {target}", d.agent + 1)
}

/// Runs the command line on `args` (program name first). Returns the exit
/// code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Solve { concept, bounds, k, game } => solve(concept, bounds, k, &game, out, err),
        Command::Verify { concept, bounds, game, partition } => {
            let g = load_game(&game)?;
            let p = load_partition(&partition, g.n())?;
            let report = with_path(&partition, verify(&g, &p, bounds, concept))?;
            match report.witness {
                None => {
                    emit(out, &format!("stable {concept}\n"))?;
                    Ok(EXIT_OK)
                }
                Some(d) => {
                    emit(out, &format!("not {concept}\n{}\n", describe(&p, d)))?;
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Exists { concept, bounds, exact: _, max_n, game } => {
            let g = load_game(&game)?;
            require_partitions(g.n(), bounds)?;
            let budget = EnumerationBudget::with_max_agents(max_n);
            match exists_stable_parallel(&g, bounds, concept, budget)? {
                Some(p) => {
                    emit(out, &write_partition(&p))?;
                    Ok(EXIT_OK)
                }
                None => {
                    let _ = writeln!(err, "no {concept} {bounds}-partition exists");
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::Maxwelfare { bounds, max_n, game } => {
            let g = load_game(&game)?;
            require_partitions(g.n(), bounds)?;
            let budget = EnumerationBudget::with_max_agents(max_n);
            let p = max_welfare_partition(&g, bounds, budget)?
                .ok_or_else(|| Failure::new(EXIT_UNSUPPORTED, "no feasible partition"))?;
            emit(out, &format!("# welfare {}\n{}", social_welfare(&g, &p), write_partition(&p)))?;
            Ok(EXIT_OK)
        }
        Command::Gen { family, params, partition } => {
            let f = InstanceFamily::from_params(&family, &params)?;
            if partition {
                let k = match f {
                    InstanceFamily::IntroPositive { k } | InstanceFamily::IntroNegative { k } => k,
                    _ => return Err(Failure::new(EXIT_INPUT, format!("{family} has no pair partition"))),
                };
                emit(out, &write_partition(&intro_partition(k)))?;
            } else {
                let g: Game<i64> = make_instance(&f)?;
                emit(out, &format!("# {f}\n{}", write_game(&g)))?;
            }
            Ok(EXIT_OK)
        }
        Command::Reduce { from, theorem, mu, bounds, instance, witness } => {
            reduce(from, theorem, mu, bounds, &instance, witness.as_deref(), out)
        }
        Command::Dynamics { bounds, game, init } => {
            let g = load_game(&game)?;
            require_partitions(g.n(), bounds)?;
            let start = match init {
                Some(path) => load_partition(&path, g.n())?,
                None => greedy_partition(g.n(), bounds).expect("checked above"),
            };
            let run = symmetric_dynamics(&g, bounds, &start)?;
            let welfare: Vec<String> = run.welfare.iter().map(ToString::to_string).collect();
            emit(
                out,
                &format!(
                    "# steps {}\n# welfare {}\n{}",
                    run.steps,
                    welfare.join(" "),
                    write_partition(&run.partition)
                ),
            )?;
            Ok(EXIT_OK)
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::new(EXIT_INPUT, format!("writing output: {e}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Algorithm {
    Singletons,
    CisUpper,
    CnsPairs,
    CisStarNonzero(usize),
    CisStarNonneg(usize),
    Dynamics,
}

impl Algorithm {
    fn name(&self) -> &'static str {
        match self {
            Algorithm::Singletons => "singletons",
            Algorithm::CisUpper => "leader-based CIS with an upper bound",
            Algorithm::CnsPairs => "CNS pairing",
            Algorithm::CisStarNonzero(_) => "CIS* for nonzero valuations",
            Algorithm::CisStarNonneg(_) => "CIS* for nonnegative valuations",
            Algorithm::Dynamics => "symmetric improvement dynamics",
        }
    }
}

/// The algorithm with a stability guarantee for this request, if any.
fn choose(g: &Game<i64>, c: StabilityConcept, b: SizeBounds, k: Option<usize>) -> Result<Algorithm, Failure> {
    let n = g.n();
    let (lo, hi) = (b.lower(), b.upper());
    let nonzero = g.first_zero_pair().is_none();
    let nonneg = g.first_negative_pair().is_none();
    // CIS* for a fixed count, or CIS with lower = 1 where both coincide
    let cis_star = c == StabilityConcept::CIS_STAR || (c == StabilityConcept::CIS && lo == 1);

    if let Some(k) = k {
        if !feasible_k_partition_exists(n, k, b) {
            return Err(Failure::new(
                EXIT_UNSUPPORTED,
                format!("no {b}-partition of {n} agents into {k} coalitions exists"),
            ));
        }
        return match (cis_star, nonzero, nonneg) {
            (true, true, _) => Ok(Algorithm::CisStarNonzero(k)),
            (true, _, true) => Ok(Algorithm::CisStarNonneg(k)),
            _ => Err(Failure::new(
                EXIT_UNSUPPORTED,
                format!("no algorithm computes {c} partitions into a fixed number of coalitions for this game"),
            )),
        };
    }
    if lo == 1 && hi == 1 {
        return Ok(Algorithm::Singletons);
    }
    if c.base == Base::CIS && lo == 1 {
        return Ok(Algorithm::CisUpper);
    }
    if c.base == Base::CNS && lo == 1 && hi == 2 {
        return Ok(Algorithm::CnsPairs);
    }
    if cis_star && (nonzero || nonneg) {
        let k = (n.div_ceil(hi)..=n / lo)
            .find(|&k| feasible_k_partition_exists(n, k, b))
            .expect("a feasible partition exists");
        return Ok(if nonzero { Algorithm::CisStarNonzero(k) } else { Algorithm::CisStarNonneg(k) });
    }
    // dynamics reach NS*, which is NS when lower = 1, and imply every weaker concept
    if g.has_symmetric_values() && (c.feasible || lo == 1) {
        return Ok(Algorithm::Dynamics);
    }
    Err(Failure::new(
        EXIT_UNSUPPORTED,
        format!("no polynomial-time algorithm for {c} {b}-partitions of this game; try `exists --exact`"),
    ))
}

fn solve(
    c: StabilityConcept,
    b: SizeBounds,
    k: Option<usize>,
    path: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let g = load_game(path)?;
    require_partitions(g.n(), b)?;
    let alg = choose(&g, c, b, k)?;
    let p = match alg {
        Algorithm::Singletons => Partition::singletons(g.n()),
        Algorithm::CisUpper => cis_upper(&g, b.upper())?.0,
        Algorithm::CnsPairs => cns_pairs(&g),
        Algorithm::CisStarNonzero(k) => cis_star_nonzero(&g, b, k)?,
        Algorithm::CisStarNonneg(k) => cis_star_nonneg(&g, b, k)?,
        Algorithm::Dynamics => {
            let start = greedy_partition(g.n(), b).expect("a feasible partition exists");
            symmetric_dynamics(&g, b, &start)?.partition
        }
    };
    let report = verify(&g, &p, b, c)?;
    if let Some(d) = report.witness {
        // the algorithms carry proofs, so this is a bug
        return Err(Failure::new(
            EXIT_NEGATIVE,
            format!("{} produced a partition that is not {c}: {}", alg.name(), describe(&p, d)),
        ));
    }
    let _ = writeln!(err, "{}: {c} {b}-partition with {} coalitions", alg.name(), p.len());
    emit(out, &write_partition(&p))?;
    Ok(EXIT_OK)
}

fn reduce(
    from: SourceKind,
    construction: Construction,
    mu: Option<usize>,
    bounds: Option<SizeBounds>,
    path: &Path,
    witness: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let source = with_path(path, parse_source(&read(path)?))?;
    match (&source, from) {
        (SourceInstance::X3C(_), SourceKind::X3c) | (SourceInstance::MMM(_), SourceKind::Mmm) => {}
        _ => return Err(Failure::new(EXIT_INPUT, format!("{}: not an {} instance", path.display(), from.name()))),
    }
    // upper bound only, as a number or as 1:M
    let upper = |default: usize| -> Result<usize, Failure> {
        match (mu, bounds) {
            (Some(m), _) => Ok(m),
            (None, Some(b)) if b.lower() == 1 => Ok(b.upper()),
            (None, Some(b)) => Err(Failure::new(EXIT_INPUT, format!("construction {construction} takes lower bound 1, not {b}"))),
            (None, None) => Ok(default),
        }
    };
    let rg: ReducedGame<i64> = match (construction, &source) {
        (Construction::CnsFromX3c, SourceInstance::X3C(inst)) => x3c_to_cns(inst, upper(3)?)?,
        (Construction::NsIsFromMatching, SourceInstance::MMM(inst)) => mmm_to_ns_is(inst, upper(2)?)?,
        (Construction::NsBoundedFromX3c, SourceInstance::X3C(inst)) => {
            let b = match (mu, bounds) {
                (None, Some(b)) => b,
                _ => return Err(Failure::new(EXIT_INPUT, "construction 9 needs --bounds LOWER:UPPER")),
            };
            x3c_to_ns_bounded(inst, b)?
        }
        _ => {
            return Err(Failure::new(
                EXIT_INPUT,
                format!("construction {} does not start from an {} instance", construction.id(), from.name()),
            ))
        }
    };
    let Some(cert_path) = witness else {
        let mut text = format!(
            "# construction {} ({construction}), bounds {}\n",
            construction.id(),
            rg.bounds()
        );
        for (a, label) in rg.labels.iter().enumerate() {
            text.push_str(&format!("# agent {} = {label}\n", a + 1));
        }
        text.push_str(&write_game(&rg.game));
        emit(out, &text)?;
        return Ok(EXIT_OK);
    };
    let cert = with_path(cert_path, parse_certificate(&read(cert_path)?, &source))?;
    let p = with_path(cert_path, witness_partition(&rg, &cert))?;
    let mut code = EXIT_OK;
    let mut text = String::new();
    for &c in construction.concepts() {
        let report = verify(&rg.game, &p, rg.bounds(), c)?;
        match report.witness {
            None => text.push_str(&format!("# {c} {}: stable\n", rg.bounds())),
            Some(d) => {
                code = EXIT_NEGATIVE;
                text.push_str(&format!("# {c} {}: {}\n", rg.bounds(), describe(&p, d)));
            }
        }
    }
    text.push_str(&write_partition(&p));
    emit(out, &text)?;
    Ok(code)
}
