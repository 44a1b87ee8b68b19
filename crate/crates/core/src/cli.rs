//! Command-line front end. Every command prints one canonical JSON report;
//! the exit code is 0 when it passes, 1 when a check fails and 2 on bad input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cover::{
    bidouble_invariants, classify_lift, double_invariants, enriques_arithmetic, even_node_set, validate_bidouble,
    validate_double, BidoubleData, DoubleData, LiftSpec, PicardModel,
};
use crate::error::{Error, Result};
use crate::exact::{Field, FinAbGroup, SmallGroup};
use crate::family::{build_family, torsion_group_census, verify_equivariance, FamilyParams, GodeauxFamily};
use crate::quadric::{
    degeneration_report, fixed_point_report, pencil_of_conics, verify_invariant_map, BranchConfig, ConeSetup,
    ConfigFile, DegenerationCase, PointsFile,
};
use crate::report::{config_hash, CheckReport};
use crate::suite;
use crate::variety::{certify_random_draw, run_checks, Checks};

pub const DEFAULT_PRIMES: &str = "13,29";

#[derive(Debug, Parser)]
#[command(name = "godeaux", version, about = "Exact checks for Z4-Godeaux surfaces, their covers and degenerations")]
pub struct Cli {
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Add wall-clock time to the report (makes it non-reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
    /// Primes for finite-field checks.
    #[arg(long, global = true, env = "GODEAUX_PRIMES", value_delimiter = ',', default_value = DEFAULT_PRIMES)]
    pub primes: Vec<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sign-type tables of the two involution lifts against the expected table.
    Table1(Table1Args),
    /// Finite-field certificates on a seeded or given family.
    Verify(VerifyArgs),
    #[command(subcommand)]
    Cover(CoverCommand),
    #[command(subcommand)]
    Group(GroupCommand),
    #[command(subcommand)]
    Cone(ConeCommand),
    /// Runs the end-to-end checks (all, or one by name).
    Acceptance {
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct Table1Args {
    /// Coefficient file of a family (default: all ones plus seeded draws over Q).
    #[arg(long)]
    pub coefficients: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Number of seeded rational draws compared with the all-ones family.
    #[arg(long, default_value_t = 3)]
    pub draws: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    QuasiSmooth,
    FreeAction,
    FixedLocus,
    Equivariance,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_delimiter = ',', default_value = "quasi-smooth,free-action,fixed-locus,equivariance")]
    pub checks: Vec<CheckName>,
    /// Defaults to the first of the configured primes.
    #[arg(long)]
    pub prime: Option<u64>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub retry_budget: u32,
    #[arg(long)]
    pub coefficients: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CoverCommand {
    /// Checks the building-data relations of a model's cover.
    Validate {
        #[arg(long, default_value = "enriques")]
        model: String,
    },
    /// chi and K^2 of a model's cover, with contractions and free quotients.
    Invariants {
        #[arg(long, default_value = "enriques")]
        model: String,
    },
    /// Groups generated by the Galois group and a lift of an automorphism.
    Lift {
        #[arg(long, value_parser = ["a", "b", "double"], default_value = "b")]
        case: String,
        /// Order of the automorphism, for double covers.
        #[arg(long, default_value_t = 4)]
        d: u32,
    },
    /// Whether disjoint nodal classes form an even set.
    EvenSet {
        #[arg(long, default_value = "k3_even_eight")]
        model: String,
        #[arg(long, value_delimiter = ',')]
        classes: Vec<String>,
        #[arg(long)]
        twist: Option<String>,
    },
    /// Identities of the Enriques model.
    Enriques {
        #[arg(long, default_value = "enriques")]
        model: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum GroupCommand {
    /// Identifies a group of order at most 16; by default the projective
    /// group generated by the order-4 action and the involution.
    Classify {
        /// Permutation generators, e.g. `1,2,3,0;3,2,1,0`.
        #[arg(long)]
        perms: Option<String>,
        /// JSON file `{"table": [[..]], "labels": [..]}`.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// 2-divisibility in a finite abelian group or a Picard model.
    Divisibility {
        /// Invariant factors, e.g. `2,4`.
        #[arg(long, value_delimiter = ',')]
        orders: Vec<u64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        element: Vec<i64>,
        /// Subgroup generators separated by `;` (coordinates or class expressions).
        #[arg(long, allow_hyphen_values = true)]
        modulo: Option<String>,
        #[arg(long)]
        model: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        class: Option<String>,
        /// Runs the randomized comparison and lemma checks instead.
        #[arg(long)]
        suite: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        instances: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ConeCommand {
    /// Pullback identities of the quotient map and images over the primes.
    ImageCheck,
    /// Fixed points of the involution, symbolically and over the primes.
    FixedPoints,
    /// Gates and case-table verdict of a branch configuration.
    Degenerate {
        #[arg(long, default_value = "general")]
        case: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// The projectivity and pencil of conics through four points.
    Pencil {
        /// JSON file `{"points": [[x, y, z], ...]}` (default: the standard frame).
        #[arg(long)]
        points: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

fn check_primes(primes: &[u64]) -> Result<()> {
    if primes.is_empty() {
        return Err(Error::Config("no primes given".into()));
    }
    for &p in primes {
        if p == 2 {
            return Err(Error::Config("primes must be odd".into()));
        }
        Field::prime(p)?;
    }
    Ok(())
}

/// `{"field": "F13", "enforce_involution": true, "q0": {"x1^4": "1"}, "q2": {..}}`
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoefficientFile {
    field: String,
    #[serde(default = "yes")]
    enforce_involution: bool,
    q0: BTreeMap<String, String>,
    q2: BTreeMap<String, String>,
}

fn yes() -> bool {
    true
}

fn family_from_file(path: &Path) -> Result<GodeauxFamily> {
    let f: CoefficientFile =
        serde_json::from_str(&read(path)?).map_err(|e| Error::Config(format!("coefficient file: {e}")))?;
    let field: Field = f.field.parse()?;
    build_family(&FamilyParams::from_text(field, &f.q0, &f.q2, f.enforce_involution)?)
}

fn table1(args: &Table1Args) -> Result<CheckReport> {
    let families = match &args.coefficients {
        Some(p) => vec![family_from_file(p)?],
        None => suite::table1_families(&(args.seed..args.seed + args.draws).collect::<Vec<_>>())?,
    };
    suite::table1(&families)
}

fn verify(args: &VerifyArgs, primes: &[u64]) -> Result<CheckReport> {
    let p = args.prime.unwrap_or(primes[0]);
    check_primes(&[p])?;
    let checks = Checks {
        quasi_smooth: args.checks.contains(&CheckName::QuasiSmooth),
        free_action: args.checks.contains(&CheckName::FreeAction),
        sigma_fixed: args.checks.contains(&CheckName::FixedLocus),
    };
    let (family, mut reports, resamples) = match &args.coefficients {
        Some(path) => {
            let f = family_from_file(path)?;
            let reports = run_checks(&f, p, checks)?;
            (f, reports, vec![])
        }
        None => {
            let draw = certify_random_draw(p, args.seed, args.retry_budget, checks)?;
            (draw.family, draw.reports, draw.resamples)
        }
    };
    if args.checks.contains(&CheckName::Equivariance) {
        reports.push(verify_equivariance(&family));
    }
    let mut r = CheckReport::group("verify", reports).with_prime(p);
    if args.coefficients.is_none() {
        r = r.with_seed(args.seed);
    }
    if !resamples.is_empty() {
        r = r.with_detail("resamples", &resamples);
    }
    Ok(r.with_detail("q0", family.q0.to_string()).with_detail("q2", family.q2.to_string()))
}

fn invariants_json(chi: &BigInt, k2: &BigInt) -> Value {
    json!({"chi": chi.to_string(), "K2": k2.to_string()})
}

fn cover(cmd: &CoverCommand) -> Result<CheckReport> {
    match cmd {
        CoverCommand::Validate { model } => {
            let (m, file) = PicardModel::load(model)?;
            if file.double.is_some() {
                validate_double(&m, &DoubleData::from_model(&m, &file)?)
            } else if file.bidouble.is_some() {
                let (r, l3) = validate_bidouble(&m, &BidoubleData::from_model(&m, &file)?)?;
                Ok(r.with_detail("L3", m.format(&l3)))
            } else {
                Err(Error::Config(format!("model {} carries no building data", m.name)))
            }
        }
        CoverCommand::Invariants { model } => {
            let (m, file) = PicardModel::load(model)?;
            let (inv, contractions) = if file.double.is_some() {
                let d = DoubleData::from_model(&m, &file)?;
                let branch = file.double.as_ref().map(|e| e.b.as_str()).unwrap_or_default();
                (double_invariants(&m, &d, m.chi)?, suite::nodal_summands(&m, branch) as u32 + file.contracted_curves)
            } else if file.bidouble.is_some() {
                (bidouble_invariants(&m, &BidoubleData::from_model(&m, &file)?, m.chi)?, file.contracted_curves)
            } else {
                return Err(Error::Config(format!("model {} carries no building data", m.name)));
            };
            let contracted = inv.contract(contractions);
            let mut r = CheckReport::pass("cover-invariants")
                .with_detail("model", &m.name)
                .with_detail("cover", invariants_json(&inv.chi, &inv.k2))
                .with_metric("contractions", contractions)
                .with_detail("contracted", invariants_json(&contracted.chi, &contracted.k2));
            if let Some(n) = file.free_quotient {
                let q = contracted.free_quotient(n)?;
                r = r.with_detail("free_quotient", json!({"order": n, "invariants": invariants_json(&q.chi, &q.k2)}));
            }
            Ok(r)
        }
        CoverCommand::Lift { case, d } => {
            let spec = match case.as_str() {
                "a" => LiftSpec::case_a(),
                "b" => LiftSpec::case_b(),
                _ => LiftSpec::double(*d),
            };
            let census = classify_lift(&spec)?;
            Ok(CheckReport::pass("lift-census")
                .with_detail("case", census.case)
                .with_detail("labels", census.labels.iter().map(ToString::to_string).collect::<Vec<_>>())
                .with_detail(
                    "extensions",
                    census
                        .extensions
                        .iter()
                        .map(|e| json!({"rho_power": e.power, "label": e.label.to_string()}))
                        .collect::<Vec<_>>(),
                ))
        }
        CoverCommand::EvenSet { model, classes, twist } => {
            let (m, file) = PicardModel::load(model)?;
            let names: Vec<String> = if classes.is_empty() { file.nodes.clone() } else { classes.clone() };
            let cs = names.iter().map(|n| m.parse(n)).collect::<Result<Vec<_>>>()?;
            let t = twist.as_deref().map(|t| m.parse(t)).transpose()?;
            even_node_set(&m, &cs, t.as_ref())
        }
        CoverCommand::Enriques { model } => {
            let (m, _) = PicardModel::load(model)?;
            enriques_arithmetic(&m)
        }
    }
}

#[derive(Deserialize)]
struct TableFile {
    table: Vec<Vec<usize>>,
    #[serde(default)]
    labels: Vec<String>,
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::Config(format!("bad {what} entry {x:?}"))))
        .collect()
}

fn group(cmd: &GroupCommand) -> Result<CheckReport> {
    match cmd {
        GroupCommand::Classify { perms, table } => {
            let g = match (perms, table) {
                (Some(p), None) => {
                    let gens = p.split(';').map(|g| parse_list::<usize>(g, "permutation")).collect::<Result<Vec<_>>>()?;
                    SmallGroup::from_permutations(&gens)?
                }
                (None, Some(path)) => {
                    let t: TableFile =
                        serde_json::from_str(&read(path)?).map_err(|e| Error::Config(format!("table file: {e}")))?;
                    let labels = if t.labels.is_empty() { (0..t.table.len()).map(|i| i.to_string()).collect() } else { t.labels };
                    SmallGroup::new(t.table, labels)?
                }
                (None, None) => {
                    let f = build_family(&FamilyParams::all_ones(Field::Rational, true))?;
                    let census = torsion_group_census(&f)?;
                    return Ok(CheckReport::pass("group-classify").with_detail("projective_census", &census));
                }
                (Some(_), Some(_)) => return Err(Error::Config("give --perms or --table, not both".into())),
            };
            Ok(CheckReport::pass("group-classify")
                .with_detail("label", g.classify().to_string())
                .with_metric("order", g.order())
                .with_detail("order_census", g.order_census()))
        }
        GroupCommand::Divisibility {
            orders,
            element,
            modulo,
            model,
            class,
            suite: run_suite,
            seed,
            instances,
        } => {
            if *run_suite {
                return suite::lemma_suite(*seed, *instances);
            }
            if let Some(model) = model {
                let (m, _) = PicardModel::load(model)?;
                let c = m.parse(class.as_deref().ok_or_else(|| Error::Config("--class is required with --model".into()))?)?;
                let sub = match modulo {
                    Some(s) => s.split(';').map(|e| m.parse(e)).collect::<Result<Vec<_>>>()?,
                    None => vec![],
                };
                let h = m.is_two_divisible(&c, &sub)?;
                let r = CheckReport::pass("two-divisible").with_detail("divisible", h.divisible);
                return Ok(match h.half {
                    Some(half) => r.with_witness(m.format(&half)),
                    None => r,
                });
            }
            let g = FinAbGroup::from_invariants(orders)?;
            let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
            let sub = match modulo {
                Some(s) => s.split(';').map(|e| parse_list::<i64>(e, "coordinate").map(|v| big(&v))).collect::<Result<Vec<_>>>()?,
                None => vec![],
            };
            let h = g.is_two_divisible(&big(element), &sub)?;
            let r = CheckReport::pass("two-divisible")
                .with_detail("group", g.to_string())
                .with_detail("divisible", h.divisible);
            Ok(match h.witness {
                Some((_, t)) => r.with_witness(t.iter().map(ToString::to_string).collect::<Vec<_>>()),
                None => r,
            })
        }
    }
}

fn cone(cmd: &ConeCommand, primes: &[u64]) -> Result<CheckReport> {
    let c = ConeSetup::rational();
    match cmd {
        ConeCommand::ImageCheck => verify_invariant_map(&c, primes),
        ConeCommand::FixedPoints => fixed_point_report(&c, primes),
        ConeCommand::Degenerate { case, config, prime } => {
            let case: DegenerationCase = case.parse()?;
            let file = match config {
                Some(path) => ConfigFile::from_json(&read(path)?)?,
                None => ConfigFile::example(case),
            };
            if file.case != case {
                return Err(Error::Config(format!("config is for case {}, not {case}", file.case)));
            }
            let p = prime.unwrap_or(primes[0]);
            check_primes(&[p])?;
            degeneration_report(&BranchConfig::new(file)?, p)
        }
        ConeCommand::Pencil { points } => {
            let pts = match points {
                Some(path) => PointsFile::from_json(&read(path)?)?,
                None => PointsFile::standard(),
            };
            pencil_of_conics(&pts.to_points()?)?.report()
        }
    }
}

/// Named end-to-end checks, in order.
pub const ACCEPTANCE: [&str; 9] = [
    "table1",
    "monomial-supports",
    "dimension-bookkeeping",
    "certificates",
    "cover-invariants",
    "lemma-suite",
    "quadric-geometry",
    "example-p",
    "lifting-census",
];

pub fn acceptance_check(name: &str) -> Result<CheckReport> {
    match name {
        "table1" => suite::table1(&suite::table1_families(&[1, 2, 3])?),
        "monomial-supports" => suite::monomial_supports(),
        "dimension-bookkeeping" => suite::dimension_bookkeeping(),
        "certificates" => suite::certificates(13, 0..20, 3),
        "cover-invariants" => suite::cover_invariants(),
        "lemma-suite" => suite::lemma_suite(0, 500),
        "quadric-geometry" => suite::quadric_geometry(&[13]),
        "example-p" => suite::example_p(),
        "lifting-census" => suite::lifting_census(),
        other => Err(Error::Config(format!("unknown check {other:?}; known: {}", ACCEPTANCE.join(", ")))),
    }
}

fn dispatch(cli: &Cli) -> Result<CheckReport> {
    check_primes(&cli.primes)?;
    match &cli.command {
        Command::Table1(a) => table1(a),
        Command::Verify(a) => verify(a, &cli.primes),
        Command::Cover(c) => cover(c),
        Command::Group(g) => group(g),
        Command::Cone(c) => cone(c, &cli.primes),
        Command::Acceptance { only } => match only {
            Some(name) => acceptance_check(name),
            None => Ok(CheckReport::group(
                "acceptance",
                ACCEPTANCE.iter().map(|n| acceptance_check(n)).collect::<Result<Vec<_>>>()?,
            )),
        },
    }
}

/// Hash of the invocation and of every file it reads.
fn invocation_hash(args: &[OsString]) -> String {
    let mut argv = Vec::new();
    let mut files = BTreeMap::new();
    let mut skip = false;
    for a in args.iter().skip(1) {
        let s = a.to_string_lossy().to_string();
        if skip {
            skip = false;
            continue;
        }
        if s == "--output" {
            skip = true;
            continue;
        }
        if s == "--timings" || s.starts_with("--output=") {
            continue;
        }
        if let Ok(bytes) = std::fs::read(&s) {
            files.insert(s.clone(), hex::encode(Sha256::digest(&bytes)));
        }
        argv.push(s);
    }
    config_hash(&json!({"argv": argv, "files": files, "version": env!("CARGO_PKG_VERSION")}))
}

/// Parses `args`, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let report = match dispatch(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let mut report = report.with_config_hash(invocation_hash(&args));
    if cli.timings {
        report = report.with_metric("elapsed", format!("{:.3}s", start.elapsed().as_secs_f64()));
    }
    let text = report.to_canonical_json();
    print!("{text}");
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 2;
        }
    }
    if report.passed() {
        0
    } else {
        1
    }
}
