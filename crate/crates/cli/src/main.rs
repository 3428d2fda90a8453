use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context as _};
use clap::{Args, Parser, Subcommand, ValueEnum};
use framestarter::construct::{self, Scm};
use framestarter::corpus::{self, SelfTestOptions};
use framestarter::feasibility::{self, ClassifyOptions};
use framestarter::format::{self, parse_group, parse_starter_file, parse_subgroup, write_starter};
use framestarter::search::{self, MateBudget};
use framestarter::starter::{compute_adder, orthogonality_report};
use framestarter::{Error, FrameStarter, Mode, Outcome, SearchParams, SearchReport, Subgroup};

const EXIT_OK: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "framestarter", version, about = "Frame starters in finite abelian groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a starter file.
    Verify(VerifyArgs),
    /// Re-verify the bundled corpus of published starters and the admissibility table.
    Selftest(SelftestArgs),
    /// Build starters and strong complete mappings.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Hill-climbing or exhaustive search.
    Search(SearchArgs),
    /// Find a frame starter orthogonal to a given one.
    Mate(MateArgs),
    /// Apply every nonexistence rule and existence family to G \ H.
    Classify(ClassifyArgs),
    /// Classify and search every cyclic Z_g \ Z_h with g <= gmax.
    Survey(SurveyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Expect {
    Frame,
    Strong,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Frame,
    Strong,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Frame => Mode::Frame,
            ModeArg::Strong => Mode::Strong,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "frame")]
    expect: Expect,
    /// Also check orthogonality against this starter and print the adder.
    #[arg(long)]
    mate: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    /// Replace a corpus entry with a file: NAME=PATH.
    #[arg(long = "override", value_name = "NAME=PATH")]
    overrides: Vec<String>,
    /// Add an (h,g) entry to the printed table: H,G.
    #[arg(long = "table-extra", value_name = "H,G")]
    table_extra: Vec<String>,
}

/// G and H on the command line: `Z(..)` plus generators or a cyclic subgroup order.
#[derive(Args, Clone)]
struct Target {
    group: String,
    /// Generators of H, `;`-separated, e.g. "(5)" or "(0,2);(2,0)".
    #[arg(long, conflicts_with = "order")]
    subgroup: Option<String>,
    /// Order of H, for cyclic G.
    #[arg(long)]
    order: Option<usize>,
}

impl Target {
    fn resolve(&self) -> anyhow::Result<Subgroup> {
        let g = parse_group(&self.group)?;
        Ok(match (&self.subgroup, self.order) {
            (Some(gens), _) => parse_subgroup(&g, gens)?,
            (None, Some(h)) => g.cyclic_subgroup(h)?,
            (None, None) => Subgroup::trivial(&g),
        })
    }
}

#[derive(Args, Clone)]
struct Budget {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Time budget in milliseconds.
    #[arg(long, env = "FRAMESTARTER_BUDGET_MS", default_value_t = 10_000)]
    budget_ms: u64,
}

impl Budget {
    fn duration(&self) -> Duration {
        Duration::from_millis(self.budget_ms)
    }
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// {{x, -x}} over G \ H.
    Patterned {
        #[command(flatten)]
        target: Target,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Strong frame starter in (G1 x G2) \ (H x G2) from a strong starter and an SCM on G2.
    Mult {
        #[arg(long)]
        starter: PathBuf,
        /// double:Z(..), gf:q:alpha or search:Z(..)
        #[arg(long)]
        scm: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Strong frame starter in (G1 x G2) \ (H x {0}).
    Multvar {
        #[arg(long)]
        starter: PathBuf,
        #[arg(long)]
        scm: String,
        /// Strong frame starter in (H x G2) \ (H x {0}); hill-climbed when omitted.
        #[arg(long)]
        inner: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Strong frame starter in G \ H from a strong starter in G/H and an SCM on H.
    Grossleonard {
        #[command(flatten)]
        target: Target,
        /// Strong starter in the quotient Z(..) with trivial subgroup; hill-climbed when omitted.
        #[arg(long)]
        quotient_starter: Option<PathBuf>,
        /// SCM on H (as its own Z(..)); searched when omitted.
        #[arg(long)]
        scm: Option<String>,
        #[command(flatten)]
        budget: Budget,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print a strong complete mapping.
    Scm { spec: String },
}

#[derive(Args)]
struct SearchArgs {
    group: Option<String>,
    #[arg(long, conflicts_with = "order")]
    subgroup: Option<String>,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_enum, default_value = "strong")]
    mode: ModeArg,
    #[command(flatten)]
    budget: Budget,
    /// Plateau length before a restart.
    #[arg(long, default_value_t = 20_000)]
    max_iterations: u64,
    #[arg(long, default_value_t = 100_000)]
    max_restarts: u64,
    /// Backtrack instead of hill-climbing (small groups only).
    #[arg(long)]
    exhaustive: bool,
    /// With --exhaustive, count every solution.
    #[arg(long, requires = "exhaustive")]
    count_all: bool,
    /// With --exhaustive in frame mode, decide whether any orthogonal pair exists.
    #[arg(long, requires = "exhaustive")]
    orthogonal: bool,
    /// Search for a starter orthogonal to this one instead.
    #[arg(long, conflicts_with_all = ["exhaustive", "group"])]
    mate: Option<PathBuf>,
    /// Run even if a nonexistence rule applies.
    #[arg(long)]
    force: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct MateArgs {
    file: PathBuf,
    #[command(flatten)]
    budget: Budget,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    target: Target,
    /// Only apply rules; skip witness searches.
    #[arg(long)]
    no_search: bool,
    #[command(flatten)]
    budget: Budget,
}

#[derive(Args)]
struct SurveyArgs {
    #[arg(long, default_value_t = 100)]
    gmax: u64,
    /// Restrict to one subgroup order.
    #[arg(long)]
    h: Option<u64>,
    /// Consecutive seeds tried per case.
    #[arg(long, default_value_t = 5)]
    attempts: u32,
    #[command(flatten)]
    budget: Budget,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Parse and argument problems are usage errors; everything else is a failed property.
fn exit_code_for(e: &anyhow::Error) -> u8 {
    if e.is::<Usage>() {
        return EXIT_USAGE;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Precondition(_) | Error::Invalid(_)) => EXIT_FAIL,
        Some(_) => EXIT_USAGE,
        None => EXIT_FAIL,
    }
}

#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(Usage(msg.into()))
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

/// Parses without verifying; parse errors carry the file name.
fn load_file(path: &Path) -> anyhow::Result<format::StarterFile> {
    parse_starter_file(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_starter(path: &Path) -> anyhow::Result<FrameStarter> {
    Ok(load_file(path)?
        .to_starter()
        .with_context(|| format!("{} is not a frame starter", path.display()))?)
}

fn emit(text: &str, output: Option<&Path>) -> anyhow::Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: Command) -> anyhow::Result<u8> {
    match cmd {
        Command::Verify(a) => verify(a),
        Command::Selftest(a) => selftest(a),
        Command::Construct(c) => construct_cmd(c),
        Command::Search(a) => {
            let seed = a.budget.seed;
            search_cmd(a).inspect_err(|_| println!("# seed {seed}"))
        }
        Command::Mate(a) => {
            let seed = a.budget.seed;
            mate(a).inspect_err(|_| println!("# seed {seed}"))
        }
        Command::Classify(a) => classify(a),
        Command::Survey(a) => survey(a),
    }
}

fn describe(s: &FrameStarter) -> String {
    let (h, n) = s.type_signature();
    format!(
        "{} with |H| = {h}, {} pairs, type {h}^{n}",
        s.group(),
        s.len()
    )
}

fn verify(a: VerifyArgs) -> anyhow::Result<u8> {
    let file = load_file(&a.file)?;
    let frame = framestarter::starter::verify_frame_starter(&file.subgroup, &file.pairs)?;
    println!("{} with |H| = {}, {} pairs", file.group(), file.subgroup.order(), file.pairs.len());
    if !frame.is_valid() {
        println!("frame starter: FAIL\n{frame}");
        return Ok(EXIT_FAIL);
    }
    println!("frame starter: ok");
    let s = file.to_starter()?;
    let strong = s.strong_report();
    if strong.is_valid() {
        println!("strong: ok");
    } else {
        println!("strong: no\n{strong}");
    }
    let mut code = match a.expect {
        Expect::Strong if !strong.is_valid() => EXIT_FAIL,
        _ => EXIT_OK,
    };
    if let Some(path) = a.mate {
        let s2 = load_starter(&path)?;
        match compute_adder(&s, &s2) {
            Ok(adder) => {
                println!("orthogonal: ok");
                print!("{}", adder_table(&adder));
            }
            Err(_) => {
                println!("orthogonal: no\n{}", orthogonality_report(&s, &s2));
                code = EXIT_FAIL;
            }
        }
    }
    Ok(code)
}

fn adder_table(adder: &framestarter::Adder) -> String {
    let mut out = String::from("first | adder | second\n");
    for r in &adder.rows {
        let _ = writeln!(
            out,
            "{{{},{}}} | {} | {{{},{}}}",
            r.first_pair.0, r.first_pair.1, r.translate, r.second_pair.0, r.second_pair.1
        );
    }
    out
}

fn parse_pair(s: &str) -> anyhow::Result<(u64, u64)> {
    let (h, g) = s.split_once(',').ok_or_else(|| usage(format!("expected H,G, got {s:?}")))?;
    let n = |t: &str| t.trim().parse::<u64>().map_err(|_| usage(format!("bad number {t:?}")));
    Ok((n(h)?, n(g)?))
}

fn selftest(a: SelftestArgs) -> anyhow::Result<u8> {
    let mut opts = SelfTestOptions::default();
    for o in &a.overrides {
        let (name, path) = o.split_once('=').ok_or_else(|| usage(format!("expected NAME=PATH, got {o:?}")))?;
        if corpus::entry(name).is_none() {
            return Err(usage(format!("no corpus entry named {name:?}")));
        }
        opts.overrides.insert(name.to_owned(), read(Path::new(path))?);
    }
    for p in &a.table_extra {
        opts.table_extra.push(parse_pair(p)?);
    }
    let report = corpus::selftest(&opts);
    print!("{report}");
    Ok(if report.passed() {
        println!("selftest: ok");
        EXIT_OK
    } else {
        println!("selftest: FAIL");
        EXIT_FAIL
    })
}

fn hill_params(budget: &Budget, mode: Mode) -> SearchParams {
    SearchParams::default()
        .with_seed(budget.seed)
        .with_mode(mode)
        .with_budget(budget.duration())
}

/// Hill-climbs a strong frame starter or fails with the search summary.
fn climb_strong(h: &Subgroup, budget: &Budget, what: &str) -> anyhow::Result<FrameStarter> {
    let r = search::hill_climb(h, &hill_params(budget, Mode::Strong))?;
    eprintln!("# {what}: {}", r.summary());
    match r.outcome {
        Outcome::Found(s) => Ok(s),
        _ => Err(anyhow!("no strong frame starter found for {what} ({})", r.summary())),
    }
}

fn finish_construct(s: &FrameStarter, output: Option<&Path>) -> anyhow::Result<u8> {
    eprintln!("# {}{}", describe(s), if s.is_strong() { ", strong" } else { "" });
    emit(&write_starter(s), output)?;
    Ok(EXIT_OK)
}

fn construct_cmd(c: ConstructCmd) -> anyhow::Result<u8> {
    match c {
        ConstructCmd::Patterned { target, output } => {
            let s = construct::patterned_starter(&target.resolve()?)?;
            finish_construct(&s, output.as_deref())
        }
        ConstructCmd::Mult { starter, scm, output } => {
            let s = load_starter(&starter)?;
            let phi = Scm::from_spec(&scm)?;
            finish_construct(&construct::mult_construction(&s, &phi)?, output.as_deref())
        }
        ConstructCmd::Multvar {
            starter,
            scm,
            inner,
            budget,
            output,
        } => {
            let s1 = load_starter(&starter)?;
            let phi = Scm::from_spec(&scm)?;
            let s2 = match inner {
                Some(p) => load_starter(&p)?,
                None => {
                    println!("# seed {}", budget.seed);
                    let ctx = construct::mult_var_inner_context(s1.subgroup(), phi.group())?;
                    climb_strong(&ctx, &budget, "inner starter")?
                }
            };
            finish_construct(&construct::mult_var_construction(&s1, &s2, &phi)?, output.as_deref())
        }
        ConstructCmd::Grossleonard {
            target,
            quotient_starter,
            scm,
            budget,
            output,
        } => {
            let h = target.resolve()?;
            let q = h.quotient();
            let (habs, _) = h.as_group();
            let phi = match scm {
                Some(spec) => Scm::from_spec(&spec)?,
                None => construct::scm_search(&habs, construct::SCM_SEARCH_CAP)?
                    .ok_or_else(|| anyhow!("{habs} has no strong complete mapping"))?,
            };
            let qs = match quotient_starter {
                Some(p) => load_starter(&p)?,
                None => {
                    println!("# seed {}", budget.seed);
                    climb_strong(&Subgroup::trivial(q.structure()), &budget, "quotient starter")?
                }
            };
            finish_construct(&construct::gross_leonard(&qs, &phi, &q)?, output.as_deref())
        }
        ConstructCmd::Scm { spec } => {
            let phi = Scm::from_spec(&spec)?;
            println!("{}: {phi}", phi.group());
            Ok(EXIT_OK)
        }
    }
}

fn report_text(r: &SearchReport) -> String {
    let mut out = format!("# seed {}\n# {}\n", r.seed, r.summary());
    if let Some(adder) = &r.adder {
        let values: Vec<String> = adder.values().iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "# adder {}", values.join(" "));
    }
    if let Outcome::Found(s) = &r.outcome {
        out.push_str(&write_starter(s));
    }
    out
}

/// Starter (with `#` statistics) to stdout or the output file; timing to stderr.
fn finish_search(r: &SearchReport, output: Option<&Path>) -> anyhow::Result<u8> {
    eprintln!("# elapsed {:.3}s", r.elapsed.as_secs_f64());
    match output {
        Some(p) => {
            print!("# seed {}\n# {}\n", r.seed, r.summary());
            emit(&report_text(r), Some(p))?;
        }
        None => print!("{}", report_text(r)),
    }
    Ok(if r.outcome.found().is_some() { EXIT_OK } else { EXIT_FAIL })
}

fn search_cmd(a: SearchArgs) -> anyhow::Result<u8> {
    if let Some(path) = &a.mate {
        let s1 = load_starter(path)?;
        let mut r = search::find_orthogonal_mate(&s1, &MateBudget::with_time(a.budget.duration()))?;
        r.seed = a.budget.seed;
        return finish_search(&r, a.output.as_deref());
    }
    let group = a.group.clone().ok_or_else(|| usage("search needs a group or --mate"))?;
    let target = Target {
        group,
        subgroup: a.subgroup.clone(),
        order: a.order,
    };
    let h = target.resolve()?;
    let mode = Mode::from(a.mode);
    let r = if a.exhaustive {
        let mut r = match (a.orthogonal, a.count_all) {
            (true, _) if mode == Mode::Strong => return Err(usage("--orthogonal needs --mode frame")),
            (true, _) => search::exhaustive_orthogonal_pair(&h)?,
            (false, true) => search::exhaustive_count(&h, mode)?,
            (false, false) => search::exhaustive(&h, mode)?,
        };
        r.seed = a.budget.seed;
        r
    } else {
        let params = SearchParams {
            max_iterations: a.max_iterations,
            max_restarts: a.max_restarts,
            allow_infeasible: a.force,
            ..hill_params(&a.budget, mode)
        };
        search::hill_climb(&h, &params)?
    };
    finish_search(&r, a.output.as_deref())
}

fn mate(a: MateArgs) -> anyhow::Result<u8> {
    let s1 = load_starter(&a.file)?;
    let mut r = search::find_orthogonal_mate(&s1, &MateBudget::with_time(a.budget.duration()))?;
    r.seed = a.budget.seed;
    if let Some(adder) = &r.adder {
        eprint!("{}", adder_table(adder));
    }
    finish_search(&r, a.output.as_deref())
}

fn classify(a: ClassifyArgs) -> anyhow::Result<u8> {
    let h = a.target.resolve()?;
    let opts = ClassifyOptions {
        search: !a.no_search,
        seed: a.budget.seed,
        budget: a.budget.duration(),
    };
    println!("# seed {}", a.budget.seed);
    println!("{} \\ {}", h.parent(), h);
    println!("{}", feasibility::classify(&h, &opts));
    Ok(EXIT_OK)
}

fn survey(a: SurveyArgs) -> anyhow::Result<u8> {
    if a.gmax > u32::MAX as u64 {
        return Err(usage("gmax too large"));
    }
    let params = hill_params(&a.budget, Mode::Strong);
    let table = search::survey(a.gmax, a.h, &params, a.attempts)?;
    println!("# seed {}", a.budget.seed);
    print!("{}", table.render());
    print!("{}", table.machine_lines());
    let missing = table.cells.iter().any(|c| c.outcome == search::SurveyOutcome::NotFound);
    Ok(if missing { EXIT_FAIL } else { EXIT_OK })
}
