//! Command-line front end for `clusterkit`.
//!
//! Every verb produces a [`Report`] and an exit status: 0 on success, 1 on
//! a definitive failure (with a replayable witness), 2 when a search was
//! inconclusive or ran out of budget, 3 on malformed input.

mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use clusterkit::colimit::{
    build_filtration, mutate_positions, stable_mutation, FiniteSeedOracle, PathQuiver, TriangulationOracle,
};
use clusterkit::format::{
    finite_triangulation, format_seed, format_triangulation, load_map_file, load_seed_file, load_triangulation_file,
    save_seed_file,
};
use clusterkit::morphism::{
    check_cm3, check_ideal_witness, check_no_specialization_conditions, image_seed, Cm3Outcome, Condition,
    ConditionWitness, IdealOutcome,
};
use clusterkit::seed::{
    check_similar, connected_component_labels, coproduct, enumerate_cluster_variables, exchangeable_component_labels,
    Similarity,
};
use clusterkit::triangulation::{
    exchangeable_arcs, flip_arc, limit_arcs, nest, one_sided_fan, seed_from_arcs, seed_from_triangulation,
    split_fountain, triangulation_components,
};
use clusterkit::{
    Arc, ClusterMap, ColimitError, FormatError, InfiniteTriangulation, LaurentPoly, MarkedPoint, MorphismError, Seed,
    SeedError, SeedOracle, TriangulationError, VarId,
};

pub use report::{Report, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(
    name = "clusterkit",
    version,
    about = "Exact computations with rooted cluster algebras"
)]
pub struct Cli {
    /// Report layout.
    #[arg(long, value_enum, default_value_t = OutputFormat::Text, global = true)]
    pub format: OutputFormat,
    /// Worker threads for the parallel searches.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: Option<u16>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Budget {
    /// Maximal mutation depth explored.
    #[arg(long, default_value_t = 4)]
    pub depth: usize,
    /// Maximal number of search nodes.
    #[arg(long, default_value_t = 100_000)]
    pub nodes: usize,
}

#[derive(Debug, Clone, Args)]
pub struct MapFiles {
    #[arg(long)]
    pub src: PathBuf,
    #[arg(long)]
    pub dst: PathBuf,
    #[arg(long)]
    pub map: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleName {
    PathQuiver,
    Fan,
    SplitFountain,
    Nest,
    Finite,
    Triangulation,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long, value_enum)]
    pub oracle: OracleName,
    /// Seed file for the `finite` oracle.
    #[arg(long)]
    pub seed: Option<PathBuf>,
    /// Triangulation file for the `triangulation` oracle.
    #[arg(long)]
    pub tri: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mutate a seed along a comma-separated sequence.
    Mutate {
        #[arg(long)]
        seed: PathBuf,
        #[arg(long, default_value = "")]
        sequence: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the cluster variables reachable within the depth.
    Enumerate {
        #[arg(long)]
        seed: PathBuf,
        #[command(flatten)]
        budget: Budget,
    },
    /// Connected and exchangeably connected components.
    Components {
        #[arg(long)]
        seed: PathBuf,
    },
    /// Disjoint union of seeds.
    Coproduct {
        #[arg(long = "seed", required = true)]
        seeds: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a similarity between two seeds.
    Similar {
        #[arg(long = "seed", required = true, num_args = 1)]
        seeds: Vec<PathBuf>,
        #[arg(long, default_value_t = 100_000)]
        nodes: usize,
    },
    /// Verify the rooted cluster morphism axioms for a map.
    CheckMorphism {
        #[command(flatten)]
        files: MapFiles,
        #[command(flatten)]
        budget: Budget,
    },
    /// Image of the source seed under a map.
    ImageSeed {
        #[command(flatten)]
        files: MapFiles,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look for a cluster variable whose image leaves the image cluster algebra.
    CheckIdeal {
        #[command(flatten)]
        files: MapFiles,
        #[command(flatten)]
        budget: Budget,
    },
    /// Validate a triangulation file.
    ValidateTri {
        #[arg(long)]
        tri: PathBuf,
        #[arg(long)]
        window: Option<i64>,
    },
    /// Flip an arc of a finite triangulation.
    Flip {
        #[arg(long)]
        tri: PathBuf,
        /// Arc as `p,q` or as a label `a(p;q)`.
        #[arg(long)]
        arc: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seed of a triangulation (of a window for infinite ones).
    TriSeed {
        #[arg(long)]
        tri: PathBuf,
        #[arg(long)]
        window: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Limit arcs and the components they cut out.
    LimitArcs {
        #[arg(long)]
        tri: PathBuf,
        #[arg(long)]
        window: Option<i64>,
    },
    /// Build and verify the stages of a filtration.
    Filtration {
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long, default_value_t = 6)]
        steps: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
    },
    /// Mutation in the colimit, certified on consecutive stages.
    StableMutate {
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long, default_value = "")]
        sequence: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 6)]
        steps: usize,
    },
    /// Check that cluster variables have nonnegative coefficients.
    Positivity {
        #[arg(long, value_enum)]
        oracle: Option<OracleName>,
        #[arg(long)]
        seed: Option<PathBuf>,
        #[arg(long)]
        tri: Option<PathBuf>,
        #[arg(long, default_value = "")]
        sequence: String,
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 6)]
        steps: usize,
        #[command(flatten)]
        budget: Budget,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Limit(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn status(&self) -> Status {
        match self {
            CliError::Input(_) => Status::InputError,
            CliError::Limit(_) => Status::Inconclusive,
            CliError::Failed(_) => Status::Fail,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SeedError> for CliError {
    fn from(e: SeedError) -> Self {
        match e {
            SeedError::ResourceLimit(_) | SeedError::SearchBudgetExceeded(_) => CliError::Limit(e.to_string()),
            SeedError::Laurent(_) | SeedError::Overflow(_) => CliError::Failed(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<MorphismError> for CliError {
    fn from(e: MorphismError) -> Self {
        match e {
            MorphismError::Seed(s) => s.into(),
            MorphismError::ResourceLimit(_) => CliError::Limit(e.to_string()),
            MorphismError::NonLaurentImage(_) | MorphismError::InducedNotCluster(_) => CliError::Failed(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<TriangulationError> for CliError {
    fn from(e: TriangulationError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ColimitError> for CliError {
    fn from(e: ColimitError) -> Self {
        match e {
            ColimitError::Seed(s) => s.into(),
            ColimitError::Morphism(m) => m.into(),
            ColimitError::NotAdmissibleAtStage { .. } => CliError::Limit(e.to_string()),
            ColimitError::UnknownVariable(_) | ColimitError::Triangulation(_) => CliError::Input(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses arguments (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run_command(&cli),
        Err(e) => {
            let text = e.render().to_string();
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: Status::InputError.code(),
                    stdout: String::new(),
                    stderr: text,
                },
            }
        }
    }
}

pub fn run_command(cli: &Cli) -> Outcome {
    let result = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n as usize).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Err(CliError::Input(format!("cannot start {n} worker threads: {e}"))),
        },
        None => dispatch(&cli.command),
    };
    let report = result.unwrap_or_else(|e| {
        let mut r = Report::new(e.status());
        r.set("error", e.to_string());
        r
    });
    let code = report.status.code();
    match cli.format {
        OutputFormat::Structured => Outcome {
            code,
            stdout: report.render_structured(),
            stderr: String::new(),
        },
        OutputFormat::Text if report.status == Status::InputError => Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {}\n", report.fields()["error"].as_str().unwrap_or_default()),
        },
        OutputFormat::Text => Outcome {
            code,
            stdout: report.render_text(),
            stderr: String::new(),
        },
    }
}

type CmdResult = Result<Report, CliError>;

fn dispatch(c: &Command) -> CmdResult {
    match c {
        Command::Mutate { seed, sequence, out } => cmd_mutate(seed, sequence, out.as_deref()),
        Command::Enumerate { seed, budget } => cmd_enumerate(seed, budget),
        Command::Components { seed } => cmd_components(seed),
        Command::Coproduct { seeds, out } => cmd_coproduct(seeds, out.as_deref()),
        Command::Similar { seeds, nodes } => cmd_similar(seeds, *nodes),
        Command::CheckMorphism { files, budget } => cmd_check_morphism(files, budget),
        Command::ImageSeed { files, out } => cmd_image_seed(files, out.as_deref()),
        Command::CheckIdeal { files, budget } => cmd_check_ideal(files, budget),
        Command::ValidateTri { tri, window } => cmd_validate_tri(tri, *window),
        Command::Flip { tri, arc, out } => cmd_flip(tri, arc, out.as_deref()),
        Command::TriSeed { tri, window, out } => cmd_tri_seed(tri, *window, out.as_deref()),
        Command::LimitArcs { tri, window } => cmd_limit_arcs(tri, *window),
        Command::Filtration {
            oracle,
            steps,
            out_dir,
            budget,
        } => cmd_filtration(oracle, *steps, out_dir.as_deref(), budget),
        Command::StableMutate {
            oracle,
            sequence,
            target,
            steps,
        } => cmd_stable_mutate(oracle, sequence, target, *steps),
        Command::Positivity {
            oracle,
            seed,
            tri,
            sequence,
            target,
            steps,
            budget,
        } => cmd_positivity(
            *oracle,
            seed.as_deref(),
            tri.as_deref(),
            sequence,
            target.as_deref(),
            *steps,
            budget,
        ),
    }
}

/// Comma-separated labels; the empty string is the empty sequence.
pub fn parse_sequence(s: &str) -> Result<Vec<VarId>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|part| VarId::new(part.trim()).map_err(|e| CliError::Input(format!("sequence: {e}"))))
        .collect()
}

fn parse_var(s: &str) -> Result<VarId, CliError> {
    VarId::new(s.trim()).map_err(|e| CliError::Input(e.to_string()))
}

fn names<'a>(labels: impl IntoIterator<Item = &'a VarId>) -> Value {
    labels.into_iter().map(|l| l.as_str()).collect::<Vec<_>>().into()
}

fn texts<T: ToString>(items: impl IntoIterator<Item = T>) -> Value {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().into()
}

fn emit_seed(r: &mut Report, s: &Seed, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            save_seed_file(s, path)?;
            r.set("written", path.display().to_string());
        }
        None => {
            r.document("seed", format_seed(s));
        }
    }
    Ok(())
}

fn cmd_mutate(seed: &Path, sequence: &str, out: Option<&Path>) -> CmdResult {
    let s = load_seed_file(seed)?;
    let seq = parse_sequence(sequence)?;
    let (t, positions) = mutate_positions(&s, &seq)?;
    let mut r = Report::new(Status::Pass);
    r.set("sequence", names(&seq));
    let moved: Vec<Value> = positions
        .iter()
        .filter(|(a, b)| a != b)
        .map(|(a, b)| json!([a.as_str(), b.as_str()]))
        .collect();
    r.set("positions", moved);
    emit_seed(&mut r, &t, out)?;
    Ok(r)
}

fn cmd_enumerate(seed: &Path, budget: &Budget) -> CmdResult {
    let s = load_seed_file(seed)?;
    let values = enumerate_cluster_variables(&s, budget.depth, budget.nodes)?;
    let mut r = Report::new(Status::Pass);
    r.set("depth", budget.depth)
        .set("count", values.len())
        .set("values", texts(&values));
    Ok(r)
}

fn cmd_components(seed: &Path) -> CmdResult {
    let s = load_seed_file(seed)?;
    let connected: Vec<Value> = connected_component_labels(&s).iter().map(names).collect();
    let exchangeable: Vec<Value> = exchangeable_component_labels(&s).iter().map(names).collect();
    let parts = exchangeable_component_labels(&s);
    let unassigned: Vec<&VarId> = s.labels().filter(|l| !parts.iter().any(|p| p.contains(*l))).collect();
    let mut r = Report::new(Status::Pass);
    r.set("connected", connected)
        .set("exchangeably_connected", exchangeable)
        .set("unassigned", names(unassigned));
    Ok(r)
}

fn cmd_coproduct(seeds: &[PathBuf], out: Option<&Path>) -> CmdResult {
    let parts = seeds.iter().map(|p| load_seed_file(p)).collect::<Result<Vec<_>, _>>()?;
    let c = coproduct(&parts)?;
    let mut r = Report::new(Status::Pass);
    r.set("summands", parts.len()).set("size", c.len());
    emit_seed(&mut r, &c, out)?;
    Ok(r)
}

fn cmd_similar(seeds: &[PathBuf], nodes: usize) -> CmdResult {
    let [a, b] = seeds else {
        return Err(CliError::Input(format!(
            "similar takes exactly two --seed files, got {}",
            seeds.len()
        )));
    };
    let (s, t) = (load_seed_file(a)?, load_seed_file(b)?);
    match check_similar(&s, &t, nodes)? {
        Similarity::Similar(phi) => {
            let mut r = Report::new(Status::Pass);
            let pairs: Vec<Value> = phi.iter().map(|(x, y)| json!([x.as_str(), y.as_str()])).collect();
            r.set("similar", true).set("bijection", pairs);
            Ok(r)
        }
        Similarity::NotSimilar => {
            let mut r = Report::new(Status::Fail);
            r.set("similar", false);
            Ok(r)
        }
    }
}

fn load_map(files: &MapFiles) -> Result<ClusterMap, CliError> {
    let source = load_seed_file(&files.src)?;
    let target = load_seed_file(&files.dst)?;
    Ok(load_map_file(&files.map, &source, &target)?)
}

fn condition_value(c: &Condition) -> Value {
    match c {
        Condition::Pass => "pass".into(),
        Condition::Inconclusive => "inconclusive".into(),
        Condition::Fail(w) => {
            let witness = match w {
                ConditionWitness::NotExchangeable(x) => json!({"exchangeable_sent_to_coefficient": x.as_str()}),
                ConditionWitness::Collision(x, y) => json!({"same_image": [x.as_str(), y.as_str()]}),
                ConditionWitness::SignConflict {
                    sequence,
                    z,
                    x,
                    y,
                    bzx,
                    bzy,
                } => json!({
                    "sequence": names(sequence), "z": z.as_str(), "x": x.as_str(), "y": y.as_str(), "b_zx": bzx, "b_zy": bzy,
                }),
                ConditionWitness::RowMismatch { component, y } => {
                    json!({"component": names(component), "row": y.as_str()})
                }
            };
            json!({"fail": witness})
        }
    }
}

fn cmd_check_morphism(files: &MapFiles, budget: &Budget) -> CmdResult {
    let m = load_map(files)?;
    let report = check_cm3(&m, budget.depth, budget.nodes)?;
    let status = if report.passed() { Status::Pass } else { Status::Fail };
    let mut r = Report::new(status);
    r.set("cm1", if report.axioms.cm1 { "pass" } else { "fail" });
    if report.axioms.cm2_witnesses.is_empty() {
        r.set("cm2", "pass");
    } else {
        r.set("cm2", json!({"fail": names(&report.axioms.cm2_witnesses)}));
    }
    match &report.cm3 {
        Cm3Outcome::VerifiedToDepth(d) => {
            r.set("cm3", format!("verified to depth {d}"));
        }
        Cm3Outcome::Counterexample(c) => {
            r.set(
                "cm3",
                json!({
                    "counterexample": {
                        "sequence": names(&c.sequence),
                        "variable": c.variable.as_str(),
                        "lhs": c.lhs.to_string(),
                        "rhs": c.rhs.to_string(),
                    }
                }),
            );
        }
    }
    r.set("depth", report.depth)
        .set("biadmissible_sequences", report.sequences_checked);
    if !m.has_specializations() {
        let cond = check_no_specialization_conditions(&m, budget.depth, budget.nodes)?;
        let signs: Vec<Value> = cond
            .signs
            .iter()
            .map(|(c, s)| json!({"component": names(c), "sign": s}))
            .collect();
        r.set(
            "no_specialization_conditions",
            json!({
                "injective": condition_value(&cond.injective),
                "coefficients": condition_value(&cond.coefficients),
                "rows": condition_value(&cond.rows),
                "signs": signs,
            }),
        );
    }
    Ok(r)
}

fn cmd_image_seed(files: &MapFiles, out: Option<&Path>) -> CmdResult {
    let m = load_map(files)?;
    let image = image_seed(&m);
    let mut r = Report::new(Status::Pass);
    r.set("size", image.len())
        .set("exchangeable", names(image.exchangeable()));
    emit_seed(&mut r, &image, out)?;
    Ok(r)
}

fn cmd_check_ideal(files: &MapFiles, budget: &Budget) -> CmdResult {
    let m = load_map(files)?;
    let mut r;
    match check_ideal_witness(&m, budget.depth, budget.nodes)? {
        IdealOutcome::IdealToDepth(d) => {
            r = Report::new(Status::Pass);
            r.set("ideal", format!("no witness to depth {d}"));
        }
        IdealOutcome::Witness { value, image } => {
            r = Report::new(Status::Fail);
            r.set(
                "witness",
                json!({"value": value.to_string(), "image": image.to_string()}),
            );
        }
        IdealOutcome::Inconclusive { value, image } => {
            r = Report::new(Status::Inconclusive);
            r.set(
                "undecided",
                json!({"value": value.to_string(), "image": image.to_string()}),
            );
        }
    }
    r.set("image_seed_size", image_seed(&m).len());
    Ok(r)
}

fn window_bound(it: &InfiniteTriangulation, window: Option<i64>) -> i64 {
    window.unwrap_or_else(|| it.base_window())
}

fn arc_texts<'a>(arcs: impl IntoIterator<Item = &'a Arc>) -> Value {
    texts(arcs.into_iter().map(Arc::label))
}

fn cmd_validate_tri(tri: &Path, window: Option<i64>) -> CmdResult {
    let it = match load_triangulation_file(tri) {
        Ok(it) => it,
        Err(FormatError::InvalidTriangulation(reason)) => {
            let mut r = Report::new(Status::Fail);
            r.set("valid", false).set("reason", reason);
            return Ok(r);
        }
        Err(e) => return Err(e.into()),
    };
    let mut r = Report::new(Status::Pass);
    if it.families.is_empty() {
        match finite_triangulation(&it) {
            Ok(t) => {
                r.set("valid", true)
                    .set("kind", "finite")
                    .set("points", t.points().len())
                    .set("arcs", t.arcs().len())
                    .set("exchangeable", arc_texts(&exchangeable_arcs(&t)));
            }
            Err(FormatError::InvalidTriangulation(reason)) => {
                r = Report::new(Status::Fail);
                r.set("valid", false).set("reason", reason);
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        let bound = window_bound(&it, window);
        let w = it.window(bound)?;
        r.set("valid", true)
            .set("kind", "infinite")
            .set("families", texts(it.families.iter().map(|f| f.kind.name())))
            .set("window", bound)
            .set("window_points", w.points.len())
            .set("window_arcs", w.arcs.len());
    }
    Ok(r)
}

fn parse_arc(s: &str) -> Result<Arc, CliError> {
    let s = s.trim();
    if s.starts_with("a(") {
        return Arc::from_label(&parse_var(s)?).map_err(|e| CliError::Input(e.to_string()));
    }
    let (p, q) = s
        .split_once(',')
        .ok_or_else(|| CliError::Input(format!("arc {s:?}: expected p,q or a(p;q)")))?;
    let point = |x: &str| {
        x.trim()
            .parse::<MarkedPoint>()
            .map_err(|e| CliError::Input(e.to_string()))
    };
    Arc::new(point(p)?, point(q)?).map_err(|e| CliError::Input(e.to_string()))
}

fn cmd_flip(tri: &Path, arc: &str, out: Option<&Path>) -> CmdResult {
    let t = finite_triangulation(&load_triangulation_file(tri)?)?;
    let a = parse_arc(arc)?;
    if !t.arcs().contains(&a) {
        return Err(CliError::Input(TriangulationError::NotAnArc(Box::new(a)).to_string()));
    }
    let flipped = match flip_arc(&t, &a) {
        Ok(f) => f,
        Err(e @ TriangulationError::NotFlippable(_)) => {
            let mut r = Report::new(Status::Fail);
            r.set("flippable", false).set("reason", e.to_string());
            return Ok(r);
        }
        Err(e) => return Err(e.into()),
    };
    let added: Vec<&Arc> = flipped.arcs().difference(t.arcs()).collect();
    let mut r = Report::new(Status::Pass);
    r.set("removed", a.label().to_string()).set("added", arc_texts(added));
    let text = format_triangulation(&flipped);
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            r.set("written", path.display().to_string());
        }
        None => {
            r.document("triangulation", text);
        }
    }
    Ok(r)
}

fn cmd_tri_seed(tri: &Path, window: Option<i64>, out: Option<&Path>) -> CmdResult {
    let it = load_triangulation_file(tri)?;
    let mut r = Report::new(Status::Pass);
    let s = if it.families.is_empty() {
        seed_from_triangulation(&finite_triangulation(&it)?)
    } else {
        let bound = window_bound(&it, window);
        r.set("window", bound);
        seed_from_arcs(&it.window(bound)?.arc_set())
    };
    r.set("size", s.len()).set("exchangeable", s.exchangeable().len());
    emit_seed(&mut r, &s, out)?;
    Ok(r)
}

fn cmd_limit_arcs(tri: &Path, window: Option<i64>) -> CmdResult {
    let it = load_triangulation_file(tri)?;
    let bound = window_bound(&it, window);
    let parts = triangulation_components(&it, bound)?;
    let mut r = Report::new(Status::Pass);
    r.set("limit_arcs", arc_texts(&limit_arcs(&it)))
        .set("window", bound)
        .set("components", parts.len())
        .set("component_sizes", parts.iter().map(BTreeSet::len).collect::<Vec<_>>());
    Ok(r)
}

fn make_oracle(args: &OracleArgs) -> Result<Box<dyn SeedOracle>, CliError> {
    let tri_oracle = |it: InfiniteTriangulation| -> Result<Box<dyn SeedOracle>, CliError> {
        Ok(Box::new(TriangulationOracle::new(it)?))
    };
    match args.oracle {
        OracleName::PathQuiver => Ok(Box::new(PathQuiver::default())),
        OracleName::Fan => tri_oracle(one_sided_fan()),
        OracleName::SplitFountain => tri_oracle(split_fountain()),
        OracleName::Nest => tri_oracle(nest()),
        OracleName::Finite => {
            let path = args
                .seed
                .as_ref()
                .ok_or_else(|| CliError::Input("--oracle finite needs --seed".into()))?;
            Ok(Box::new(FiniteSeedOracle::new(load_seed_file(path)?)))
        }
        OracleName::Triangulation => {
            let path = args
                .tri
                .as_ref()
                .ok_or_else(|| CliError::Input("--oracle triangulation needs --tri".into()))?;
            tri_oracle(load_triangulation_file(path)?)
        }
    }
}

fn cmd_filtration(args: &OracleArgs, steps: usize, out_dir: Option<&Path>, budget: &Budget) -> CmdResult {
    if steps == 0 {
        return Err(CliError::Input("--steps must be at least 1".into()));
    }
    let o = make_oracle(args)?;
    let fil = build_filtration(o.as_ref(), steps)?;
    let stages: Vec<Value> = fil
        .stages
        .iter()
        .enumerate()
        .map(|(i, s)| json!({"index": i, "size": s.len(), "exchangeable": s.exchangeable().len()}))
        .collect();
    let mut status = Status::Pass;
    let mut inclusions = Vec::new();
    for (i, m) in fil.inclusions.iter().enumerate() {
        let cond = check_no_specialization_conditions(m, budget.depth, budget.nodes)?;
        let verdict = if cond.passed() {
            "pass".into()
        } else {
            let c = [&cond.injective, &cond.coefficients, &cond.rows];
            if c.iter().any(|c| matches!(c, Condition::Fail(_))) {
                status = Status::Fail;
            } else if status == Status::Pass {
                status = Status::Inconclusive;
            }
            json!({
                "injective": condition_value(&cond.injective),
                "coefficients": condition_value(&cond.coefficients),
                "rows": condition_value(&cond.rows),
            })
        };
        inclusions.push(json!({"from": i, "to": i + 1, "conditions": verdict}));
    }
    let mut r = Report::new(status);
    r.set(
        "oracle",
        args.oracle
            .to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default(),
    )
    .set("stages", stages)
    .set("only_coefficients", "pass")
    .set("linear_laws", "pass")
    .set("inclusions", inclusions);
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
        let mut written = Vec::new();
        for (i, s) in fil.stages.iter().enumerate() {
            let path = dir.join(format!("stage-{i}.seed"));
            save_seed_file(s, &path)?;
            written.push(path.display().to_string());
        }
        r.set("written", written);
    }
    Ok(r)
}

fn cmd_stable_mutate(args: &OracleArgs, sequence: &str, target: &str, steps: usize) -> CmdResult {
    let o = make_oracle(args)?;
    let seq = parse_sequence(sequence)?;
    let target = parse_var(target)?;
    if !o.contains(&target) {
        return Err(CliError::Input(format!("{target} is not a variable of the oracle")));
    }
    let v = stable_mutation(o.as_ref(), &seq, &target, steps)?;
    let mut r = Report::new(Status::Pass);
    r.set("sequence", names(&seq))
        .set("target", target.as_str())
        .set("value", v.value.to_string())
        .set("stage", v.stage)
        .set("confirmed_at", v.stage + 1);
    Ok(r)
}

fn positivity_report(values: &[(String, LaurentPoly)]) -> Report {
    let negative: Vec<&(String, LaurentPoly)> = values
        .iter()
        .filter(|(_, v)| !v.has_nonnegative_coefficients())
        .collect();
    let mut r = Report::new(if negative.is_empty() {
        Status::Pass
    } else {
        Status::Fail
    });
    r.set("checked", values.len());
    if negative.is_empty() {
        r.set("positive", true);
    } else {
        let witnesses: Vec<Value> = negative
            .iter()
            .map(|(k, v)| json!({"variable": k, "value": v.to_string()}))
            .collect();
        r.set("positive", false).set("witnesses", witnesses);
    }
    r
}

fn cmd_positivity(
    oracle: Option<OracleName>,
    seed: Option<&Path>,
    tri: Option<&Path>,
    sequence: &str,
    target: Option<&str>,
    steps: usize,
    budget: &Budget,
) -> CmdResult {
    let seq = parse_sequence(sequence)?;
    if let Some(name) = oracle {
        let args = OracleArgs {
            oracle: name,
            seed: seed.map(Path::to_path_buf),
            tri: tri.map(Path::to_path_buf),
        };
        let o = make_oracle(&args)?;
        let target = parse_var(target.ok_or_else(|| CliError::Input("--oracle needs --target".into()))?)?;
        if !o.contains(&target) {
            return Err(CliError::Input(format!("{target} is not a variable of the oracle")));
        }
        let v = stable_mutation(o.as_ref(), &seq, &target, steps)?;
        let mut r = positivity_report(&[(target.to_string(), v.value.clone())]);
        r.set("value", v.value.to_string()).set("stage", v.stage);
        return Ok(r);
    }
    let path = seed.ok_or_else(|| CliError::Input("positivity needs --oracle or --seed".into()))?;
    let s = load_seed_file(path)?;
    let values: Vec<(String, LaurentPoly)> = if seq.is_empty() && target.is_none() {
        enumerate_cluster_variables(&s, budget.depth, budget.nodes)?
            .into_iter()
            .map(|v| (v.to_string(), v))
            .collect()
    } else {
        let (t, pos) = mutate_positions(&s, &seq)?;
        let labels: BTreeMap<&VarId, &VarId> = pos.iter().collect();
        match target {
            Some(x) => {
                let x = parse_var(x)?;
                let at = labels
                    .get(&x)
                    .ok_or_else(|| CliError::Input(format!("{x} is not a label of the seed")))?;
                vec![(x.to_string(), t.value(at).expect("tracked position").clone())]
            }
            None => t.cluster().map(|(l, v)| (l.to_string(), v.clone())).collect(),
        }
    };
    Ok(positivity_report(&values))
}
