//! Batch front end: one verb per process, one JSON report per run.
//!
//! Reports go to standard output (or `--output`) as a single newline-terminated
//! JSON document. A one-line human summary goes to standard error. Exit status
//! is 0 on success, 1 when a check fails and 2 on input errors.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::adjunction::{check_triangle_identities, counit, plus};
use crate::homotopy::{
    contractibility_probe, homology, is_trivial_group, normalized_chains, pi1_presentation, GroupPresentation,
    HomologyReport, HomotopyError, TrivialityReport, DEFAULT_BUDGET,
};
use crate::horn::{counterexample_input, quasicheck, HornError};
use crate::necklace::{
    comma_category, f_iso_check, finality_chain, full_subcategory_n, localization_pushout, mapping_space_probe,
    NecklaceError, DEFAULT_BOUND,
};
use crate::sset::json::{
    category_to_json, parse_category, semisimplicial_to_json, simplicial_to_json, to_line, AnySet, JsonError, SetDoc,
};
use crate::sset::{
    nerve, random_semisimplicial, standard_simplex, SSetError, SemisimplicialSet, SimplicialSet, DEFAULT_TRUNC_DIM,
};

pub const MAX_TRUNC_DIM: usize = 10;
pub const MAX_SIMPLEX: usize = 6;
pub const MAX_BOUND: usize = 6;
pub const MAX_K: usize = 3;
pub const MAX_BEAD_DIM: usize = 5;
pub const MAX_RANDOM: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "freedegen", version, about = "Truncated simplicial sets with free degeneracies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Input document; standard input when absent.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Report destination; standard output when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Truncation dimension; inputs are cut down to it.
    #[arg(long, visible_alias = "dim", global = true)]
    pub trunc_dim: Option<usize>,
    /// Top horn dimension, homology degree or bead dimension, by verb.
    #[arg(long, global = true)]
    pub max_dim: Option<usize>,
    /// Total dimension bound for necklaces.
    #[arg(long, global = true)]
    pub bound: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Coset budget for fundamental group checks.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit a standard simplex, a random semisimplicial set, or the nerve of an input category.
    Build {
        #[arg(long, conflicts_with = "random")]
        simplex: Option<usize>,
        /// Random semisimplicial set with at most this many simplices per dimension.
        #[arg(long)]
        random: Option<usize>,
        /// The simplicial set whose free-degeneracy construction has an unfillable inner 3-horn.
        #[arg(long, conflicts_with_all = ["simplex", "random"])]
        counterexample: bool,
    },
    /// Forget degeneracies.
    Restrict,
    /// Adjoin degeneracies freely; simplicial inputs are restricted first.
    Plus,
    /// Check that the counit is a simplicial map onto the input.
    CounitCheck,
    /// Check both triangle identities at the input.
    TriangleCheck,
    /// List inner horns without a filler.
    Quasicheck,
    /// Integer homology through `--max-dim`.
    Homology,
    /// Edge-path presentation of the fundamental group and a triviality verdict.
    Pi1 {
        #[arg(long, default_value_t = 0)]
        basepoint: usize,
    },
    /// Contractibility probe of the input, or the mapping-space probe with `--k`.
    Probe {
        #[command(flatten)]
        ends: Ends,
    },
    /// Bounded necklace category between two vertices.
    Necklace {
        #[command(flatten)]
        ends: Ends,
    },
    /// Fiberwise finality checks behind the mapping-space probe.
    Finality {
        #[command(flatten)]
        ends: Ends,
    },
    /// Compare single-bead necklaces with the product of injection categories.
    FIso {
        #[arg(long)]
        k: usize,
    },
    /// Simplex counts per dimension.
    Count,
}

#[derive(Debug, Args)]
pub struct Ends {
    /// Work over the localized free simplicial set on the `k`-simplex instead of an input.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub from: usize,
    #[arg(long)]
    pub to: Option<usize>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error("bound exceeded: {0}")]
    Bound(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Data(#[from] SSetError),
    #[error(transparent)]
    Horn(#[from] HornError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error(transparent)]
    Necklace(#[from] NecklaceError),
}

/// A finished run: the report, a summary line and whether the check passed.
#[derive(Debug)]
pub struct Outcome {
    pub report: String,
    pub summary: String,
    pub passed: bool,
}

impl Outcome {
    fn ok(report: String, summary: String) -> Self {
        Self { report, summary, passed: true }
    }

    fn check<T: Serialize>(report: &T, passed: bool, summary: String) -> Self {
        Self { report: to_line(report), summary, passed }
    }
}

fn at_most(flag: &str, value: usize, max: usize) -> Result<(), CliError> {
    if value > max {
        return Err(CliError::Bound(format!("--{flag} {value} > {max}")));
    }
    Ok(())
}

fn validate(cli: &Cli) -> Result<(), CliError> {
    let c = &cli.common;
    if let Some(d) = c.trunc_dim {
        at_most("trunc-dim", d, MAX_TRUNC_DIM)?;
    }
    if let Some(m) = c.max_dim {
        at_most("max-dim", m, MAX_TRUNC_DIM)?;
    }
    if let Some(b) = c.bound {
        at_most("bound", b, MAX_BOUND)?;
    }
    match &cli.command {
        Command::Build { simplex, random, .. } => {
            if let Some(k) = simplex {
                at_most("simplex", *k, MAX_SIMPLEX)?;
            }
            if let Some(r) = random {
                at_most("random", *r, MAX_RANDOM)?;
                if *r == 0 {
                    return Err(CliError::Input("--random needs at least one simplex per dimension".into()));
                }
            }
        }
        Command::Probe { ends } | Command::Necklace { ends } | Command::Finality { ends } => {
            if let Some(k) = ends.k {
                at_most("k", k, MAX_K)?;
            }
        }
        Command::FIso { k } => {
            at_most("k", *k, MAX_K)?;
            at_most("max-dim", c.max_dim.unwrap_or(4), MAX_BEAD_DIM)?;
        }
        _ => {}
    }
    Ok(())
}

fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = fs::read_to_string(p).map_err(|source| CliError::Io { path: p.display().to_string(), source })?;
        }
        None => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
        }
    }
    Ok(text)
}

/// Cuts a set document down to dimension `d` before any table is interpreted.
fn truncate_doc(doc: &mut SetDoc, d: usize) -> Result<(), CliError> {
    if d > doc.trunc_dim {
        return Err(CliError::Bound(format!("--trunc-dim {d} > input truncation dimension {}", doc.trunc_dim)));
    }
    doc.trunc_dim = d;
    doc.dims.truncate(d + 1);
    if let Some(top) = doc.dims.last_mut() {
        if top.degens.is_some() {
            top.degens = Some(Vec::new());
        }
    }
    if let Some(pairs) = &mut doc.plus_pairs {
        pairs.truncate(d + 1);
    }
    Ok(())
}

fn load_set(common: &Common) -> Result<AnySet, CliError> {
    let text = read_input(common.input.as_deref())?;
    let mut doc: SetDoc = serde_json::from_str(&text).map_err(JsonError::from)?;
    if let Some(d) = common.trunc_dim {
        truncate_doc(&mut doc, d)?;
    }
    Ok(doc.into_set()?)
}

fn load_simplicial(common: &Common) -> Result<SimplicialSet, CliError> {
    match load_set(common)? {
        AnySet::Simplicial(x) => Ok(x),
        AnySet::Semisimplicial(_) => Err(CliError::Input("expected a simplicial set (degens missing)".into())),
    }
}

fn load_semi(common: &Common) -> Result<SemisimplicialSet, CliError> {
    Ok(match load_set(common)? {
        AnySet::Simplicial(x) => x.restrict(),
        AnySet::Semisimplicial(x) => x,
    })
}

/// Simplicial sets are taken as they are; semisimplicial ones get free degeneracies.
fn load_as_simplicial(common: &Common) -> Result<SimplicialSet, CliError> {
    Ok(match load_set(common)? {
        AnySet::Simplicial(x) => x,
        AnySet::Semisimplicial(x) => plus(&x).set,
    })
}

fn default_max_dim(common: &Common, trunc_dim: usize, preferred: usize) -> Result<usize, CliError> {
    let m = common.max_dim.unwrap_or_else(|| preferred.min(trunc_dim.saturating_sub(1)));
    if m >= trunc_dim {
        return Err(CliError::Bound(format!("--max-dim {m} must be below the truncation dimension {trunc_dim}")));
    }
    Ok(m)
}

fn counts_line(counts: &[usize]) -> String {
    counts.iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
}

#[derive(Serialize)]
struct CountReport<'a> {
    kind: &'a str,
    trunc_dim: usize,
    counts: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nondegenerate: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct CounitReport {
    checked: usize,
    surjective: bool,
    violations: Vec<String>,
    passed: bool,
}

#[derive(Serialize)]
struct Pi1Report {
    basepoint: usize,
    presentation: String,
    group: GroupPresentation,
    triviality: TrivialityReport,
}

#[derive(Serialize)]
struct NecklaceReport {
    from: usize,
    to: usize,
    bound: usize,
    objects: Vec<String>,
    morphisms: usize,
    totally_nondegenerate: Vec<String>,
    category: serde_json::Value,
}

/// Runs a parsed command. Input errors come back as `Err`.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    validate(cli)?;
    let common = &cli.common;
    let budget = common.budget.unwrap_or(DEFAULT_BUDGET);
    let bound = common.bound.unwrap_or(DEFAULT_BOUND);
    match &cli.command {
        Command::Build { simplex, random, counterexample } => {
            let d = common.trunc_dim.unwrap_or(DEFAULT_TRUNC_DIM);
            if *counterexample {
                if d < 2 {
                    return Err(CliError::Bound(format!("--trunc-dim {d} < 2 for the counterexample")));
                }
                let x = counterexample_input(d);
                Ok(Outcome::ok(simplicial_to_json(&x), format!("counterexample truncated at {d}")))
            } else if let Some(k) = simplex {
                let x = standard_simplex(*k, d)?;
                Ok(Outcome::ok(simplicial_to_json(&x), format!("built the {k}-simplex truncated at {d}")))
            } else if let Some(r) = random {
                let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
                let x = random_semisimplicial(&mut rng, d, *r);
                let summary = format!("random semisimplicial set, seed {}, counts ({})", common.seed, counts_line(x.counts()));
                Ok(Outcome::ok(semisimplicial_to_json(&x), summary))
            } else {
                let category = parse_category(&read_input(common.input.as_deref())?)?;
                let x = nerve(&category, d)?;
                Ok(Outcome::ok(simplicial_to_json(&x), format!("nerve truncated at {d}")))
            }
        }
        Command::Restrict => {
            let x = load_semi(common)?;
            Ok(Outcome::ok(semisimplicial_to_json(&x), format!("restricted, counts ({})", counts_line(x.counts()))))
        }
        Command::Plus => {
            let p = plus(&load_semi(common)?);
            let summary = format!("free degeneracies, counts ({})", counts_line(p.set.counts()));
            Ok(Outcome::ok(p.to_json(), summary))
        }
        Command::Count => {
            let set = load_set(common)?;
            let (counts, nondegenerate) = match &set {
                AnySet::Simplicial(x) => (x.counts().to_vec(), Some(x.nondegenerate_counts())),
                AnySet::Semisimplicial(x) => (x.counts().to_vec(), None),
            };
            let summary = format!("counts ({})", counts_line(&counts));
            let report = CountReport { kind: set.kind(), trunc_dim: set.trunc_dim(), counts, nondegenerate };
            Ok(Outcome::ok(to_line(&report), summary))
        }
        Command::CounitCheck => {
            let y = load_simplicial(common)?;
            let (p, eps) = counit(&y)?;
            let violations = eps.simplicial_violations(&p.set, &y);
            let surjective = eps.is_surjective_onto(y.counts());
            let passed = violations.is_empty() && surjective;
            let report = CounitReport { checked: p.set.total_simplices(), surjective, violations, passed };
            let summary = format!("counit on {} simplices: {}", report.checked, if passed { "ok" } else { "FAILED" });
            Ok(Outcome::check(&report, passed, summary))
        }
        Command::TriangleCheck => {
            let (x, y) = match load_set(common)? {
                AnySet::Simplicial(y) => (y.restrict(), y),
                AnySet::Semisimplicial(x) => {
                    let y = plus(&x).set;
                    (x, y)
                }
            };
            let report = check_triangle_identities(&x, &y)?;
            let passed = report.holds();
            let summary = format!(
                "triangle identities on {} + {} simplices: {}",
                report.left_checked,
                report.right_checked,
                if passed { "hold" } else { "FAIL" }
            );
            Ok(Outcome::check(&report, passed, summary))
        }
        Command::Quasicheck => {
            let x = load_simplicial(common)?;
            let m = default_max_dim(common, x.trunc_dim(), 3)?;
            let report = quasicheck(&x, m)?;
            let summary = format!("{} inner horns checked, {} unfilled", report.horns_checked, report.unfilled.len());
            Ok(Outcome::check(&report.unfilled, report.passes(), summary))
        }
        Command::Homology => {
            let x = load_as_simplicial(common)?;
            let m = default_max_dim(common, x.trunc_dim(), x.trunc_dim())?;
            let groups = homology(&normalized_chains(&x), m)?;
            let summary = groups.iter().enumerate().map(|(k, h)| format!("H{k} = {h}")).collect::<Vec<_>>().join(", ");
            Ok(Outcome::ok(to_line(&HomologyReport::from(&groups[..])), summary))
        }
        Command::Pi1 { basepoint } => {
            let x = load_as_simplicial(common)?;
            let group = pi1_presentation(&x, *basepoint)?;
            let triviality = is_trivial_group(&group, budget);
            let summary = format!("{group}: {}", triviality.verdict);
            let report = Pi1Report { basepoint: *basepoint, presentation: group.to_string(), group, triviality };
            Ok(Outcome::ok(to_line(&report), summary))
        }
        Command::Probe { ends } => {
            if let Some(k) = ends.k {
                let to = ends.to.unwrap_or(k);
                let max_deg = common.max_dim.unwrap_or(2);
                let report = mapping_space_probe(k, ends.from, to, bound, max_deg, budget)?;
                let summary = report.verdict.clone();
                Ok(Outcome::check(&report, report.passed, summary))
            } else {
                let x = load_as_simplicial(common)?;
                let m = default_max_dim(common, x.trunc_dim(), 2)?;
                let report = contractibility_probe(&x, m, budget)?;
                let summary = report.verdict.clone();
                Ok(Outcome::check(&report, report.passed, summary))
            }
        }
        Command::Necklace { ends } => {
            let (x, from, to) = match ends.k {
                Some(k) => {
                    let to = ends.to.unwrap_or(k);
                    if !(ends.from <= to && to <= k) {
                        return Err(NecklaceError::Endpoints { x: ends.from, y: to, k }.into());
                    }
                    let loc = localization_pushout(k, bound.max(1))?;
                    (loc.set, loc.vertex_of[ends.from], loc.vertex_of[to])
                }
                None => {
                    let x = load_as_simplicial(common)?;
                    let to = ends.to.ok_or_else(|| CliError::Input("--to is required with an input set".into()))?;
                    (x, ends.from, to)
                }
            };
            let c = comma_category(&x, from, to, bound)?;
            let (n, _) = full_subcategory_n(&c, &x);
            let category = serde_json::from_str(&category_to_json(&c.category)).expect("category documents are JSON");
            let report = NecklaceReport {
                from,
                to,
                bound,
                objects: c.objects.iter().map(|o| o.label()).collect(),
                morphisms: c.category.morphism_count(),
                totally_nondegenerate: n.objects.iter().map(|o| o.label()).collect(),
                category,
            };
            let summary = format!(
                "{} necklaces, {} maps, {} totally nondegenerate",
                report.objects.len(),
                report.morphisms,
                report.totally_nondegenerate.len()
            );
            Ok(Outcome::ok(to_line(&report), summary))
        }
        Command::Finality { ends } => {
            let k = ends.k.ok_or_else(|| CliError::Input("finality needs --k".into()))?;
            let to = ends.to.unwrap_or(k);
            let max_deg = common.max_dim.unwrap_or(2);
            let chain = finality_chain(k, ends.from, to, bound, max_deg)?;
            let first = &chain.necklaces_to_comma;
            let second = &chain.flags_to_necklaces;
            let passed = first.all_initial && second.all_terminal;
            let summary = format!(
                "necklaces into comma: {}/{} fibers with an initial object; flags into necklaces: {}/{} with a terminal object",
                first.with_initial, first.checked, second.with_terminal, second.checked
            );
            Ok(Outcome::check(&chain, passed, summary))
        }
        Command::FIso { k } => {
            let report = f_iso_check(*k, common.max_dim.unwrap_or(4))?;
            let summary = format!(
                "{} flags vs {} tuples, {} vs {} morphisms; endpoint-fixed product isomorphic: {}",
                report.flag_objects,
                report.product_objects,
                report.flag_morphisms,
                report.product_morphisms,
                report.pinned_isomorphism
            );
            Ok(Outcome::check(&report, report.passed, summary))
        }
    }
}

/// Writes through a sibling temporary file and a rename.
fn write_atomically(path: &Path, contents: &str) -> io::Result<()> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

/// Parses arguments, runs and emits; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let written = match &cli.common.output {
        Some(path) => write_atomically(path, &outcome.report),
        None => io::stdout().lock().write_all(outcome.report.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing the report: {e}");
        return 2;
    }
    eprintln!("{}", outcome.summary);
    if outcome.passed {
        0
    } else {
        1
    }
}
