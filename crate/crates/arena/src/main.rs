use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use arena::{
    ablation_matrix, breakdown, profile, replay, run_grid, run_match, run_qualification,
    simulate_swarm, swarm_metrics, AblationGrid, AgentSource, AgentsFile, ConfigOverrides,
    MatchLog, MatchOptions, SeriesResult, SwarmOptions, WeightScheme,
};
use arena_core::{load_contest, LanguageId, PriceTable, Stamp};
use arena_hints::{HintLibrary, HintRequest};
use arena_judge::Judge;
use arena_protocol::{wire, Services};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "arena",
    version,
    about = "Budget-constrained coding contests for agents"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ContestArgs {
    /// Contest directory holding contest.toml and problems/
    #[arg(long)]
    contest: PathBuf,
    /// Hint corpus directory; defaults to <contest>/corpus when present
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    credit_limit: Option<u64>,
    #[arg(long)]
    weights: Option<WeightScheme>,
}

#[derive(Subcommand)]
enum Command {
    /// Judge one source file against a problem's hidden tests
    Judge {
        #[command(flatten)]
        contest: ContestArgs,
        #[arg(long)]
        problem: String,
        /// cpp17, java or python3
        #[arg(long)]
        language: String,
        source: PathBuf,
    },
    /// Retrieve one hint and show what it would cost
    Hint {
        #[command(flatten)]
        contest: ContestArgs,
        #[arg(long)]
        level: u8,
        #[arg(long)]
        problem: Option<String>,
        #[arg(long)]
        knowledge: Option<String>,
        #[arg(long)]
        difficulty: Option<String>,
    },
    /// Run matches between agents and write one log per run
    Run {
        #[command(flatten)]
        contest: ContestArgs,
        #[command(flatten)]
        match_args: MatchArgs,
        /// `scripted:<name>` or `cmd:<shell command>`; repeat per participant
        #[arg(long = "agent", required = true)]
        agents: Vec<String>,
        #[arg(long, default_value_t = 1)]
        runs: usize,
        #[arg(long)]
        skip_qualification: bool,
    },
    /// Run the qualification round for one agent
    Qualify {
        #[command(flatten)]
        contest: ContestArgs,
        #[command(flatten)]
        match_args: MatchArgs,
        #[arg(long)]
        agent: String,
    },
    /// Serve the contest over the line protocol
    Serve {
        #[command(flatten)]
        contest: ContestArgs,
        #[arg(long, value_enum, default_value_t = Transport::Stdio)]
        transport: Transport,
        #[arg(long, default_value = "127.0.0.1:7878")]
        addr: String,
        /// Participant name when the client sends no hello
        #[arg(long, default_value = "participant")]
        name: String,
        /// Stop accepting TCP connections after this many
        #[arg(long)]
        max_sessions: Option<usize>,
    },
    /// Simulate a swarm profile and report its economics
    Swarm {
        #[command(flatten)]
        contest: ContestArgs,
        #[arg(long, default_value = "agents.json")]
        agents_file: PathBuf,
        /// Swarm profile names from the agents file
        #[arg(long = "profile", required = true)]
        profiles: Vec<String>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Strategy metrics and credit breakdowns from a match log
    Profile {
        log: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Recompute a log's footer from its turn records and compare
    Replay { log: PathBuf },
    /// Run an ablation grid and write the score matrix as CSV
    Ablate {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Clone)]
struct MatchArgs {
    #[arg(long, default_value = "agents.json")]
    agents_file: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 400)]
    max_turns: u64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Transport {
    Stdio,
    Tcp,
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Judge {
            contest,
            problem,
            language,
            source,
        } => judge(&contest, &problem, &language, &source),
        Command::Hint {
            contest,
            level,
            problem,
            knowledge,
            difficulty,
        } => hint(&contest, level, problem, knowledge, difficulty),
        Command::Run {
            contest,
            match_args,
            agents,
            runs,
            skip_qualification,
        } => run(&contest, &match_args, &agents, runs, skip_qualification),
        Command::Qualify {
            contest,
            match_args,
            agent,
        } => qualify(&contest, &match_args, &agent),
        Command::Serve {
            contest,
            transport,
            addr,
            name,
            max_sessions,
        } => serve(&contest, transport, &addr, &name, max_sessions),
        Command::Swarm {
            contest,
            agents_file,
            profiles,
            out_dir,
            seed,
        } => swarm(&contest, &agents_file, &profiles, &out_dir, seed),
        Command::Profile { log, csv } => profile_log(&log, csv.as_deref()),
        Command::Replay { log } => replay_log(&log),
        Command::Ablate { grid, out } => ablate(&grid, &out),
    }
}

fn services(args: &ContestArgs) -> Result<Services> {
    let contest = load_contest(&args.contest)
        .with_context(|| format!("loading {}", args.contest.display()))?;
    let overrides = ConfigOverrides {
        credit_limit: args.credit_limit,
        weights: args.weights,
        alpha: args.alpha,
    };
    let contest = contest.with_config(overrides.apply(&contest.config))?;
    let corpus = args
        .corpus
        .clone()
        .or_else(|| Some(args.contest.join("corpus")).filter(|p| p.is_dir()));
    let hints = match corpus {
        Some(dir) => Some(
            HintLibrary::load(&dir).with_context(|| format!("loading corpus {}", dir.display()))?,
        ),
        None => None,
    };
    let judge = Judge::detect().with_cache();
    log::info!("sandbox mode: {:?}", judge.sandbox_mode());
    Ok(Services::new(
        contest,
        judge,
        hints,
        PriceTable::published(),
    ))
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn judge(args: &ContestArgs, problem: &str, language: &str, source: &Path) -> Result<()> {
    let services = services(args)?;
    let p = services
        .contest
        .problem(problem)
        .with_context(|| format!("no problem `{problem}`"))?;
    let lang: LanguageId = arena_protocol::parse_language(language)
        .with_context(|| format!("bad language `{language}`"))?;
    let code = fs::read(source).with_context(|| format!("reading {}", source.display()))?;
    let judgement =
        services
            .judge
            .judge_submission(p, &code, lang, &services.contest.config.judge)?;
    print_json(&judgement)
}

fn hint(
    args: &ContestArgs,
    level: u8,
    problem: Option<String>,
    knowledge: Option<String>,
    difficulty: Option<String>,
) -> Result<()> {
    let services = services(args)?;
    let library = services
        .hints
        .as_ref()
        .context("no hint corpus; pass --corpus")?;
    let difficulty = difficulty
        .map(|d| d.parse())
        .transpose()
        .map_err(anyhow::Error::msg)?;
    let request = HintRequest {
        level,
        problem_id: problem,
        hint_knowledge: knowledge,
        problem_difficulty: difficulty,
    };
    let mut ledger = arena_core::CreditLedger::new();
    let response = library.get_hint(&request, &services.contest, &mut ledger, Stamp::default())?;
    print_json(&response)
}

fn agents_file(path: &Path) -> Result<Option<AgentsFile>> {
    if path.is_file() {
        Ok(Some(AgentsFile::load(path)?))
    } else {
        Ok(None)
    }
}

fn match_options(args: &MatchArgs, seed: u64) -> MatchOptions {
    MatchOptions {
        seed,
        max_turns: args.max_turns,
        ..MatchOptions::default()
    }
}

fn timestamp() -> String {
    chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ").to_string()
}

/// Streams a log to `<out_dir>/<prefix>-<timestamp>[-suffix].jsonl`.
fn log_file(out_dir: &Path, prefix: &str, suffix: &str) -> Result<(PathBuf, fs::File)> {
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(format!("{prefix}-{}{suffix}.jsonl", timestamp()));
    let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok((path, file))
}

fn run(
    args: &ContestArgs,
    m: &MatchArgs,
    endpoints: &[String],
    runs: usize,
    skip_qualification: bool,
) -> Result<()> {
    if runs == 0 {
        bail!("--runs must be at least 1");
    }
    let services = Arc::new(services(args)?);
    let roster = agents_file(&m.agents_file)?;
    let timeout = Duration::from_secs(services.contest.config.agent_turn_timeout);
    let sources: Vec<AgentSource> = endpoints
        .iter()
        .map(|e| AgentSource::resolve(e, roster.as_ref(), timeout))
        .collect::<Result<_, _>>()?;

    let mut entrants = Vec::new();
    for source in sources {
        if skip_qualification || services.contest.qualification_problem.is_none() {
            entrants.push(source);
            continue;
        }
        let q = run_qualification(
            Arc::clone(&services),
            source.instantiate(m.seed)?,
            &match_options(m, m.seed),
            None,
        )?;
        let verdict = if q.qualified {
            "qualified"
        } else {
            "not qualified"
        };
        eprintln!("qualification: {} {verdict}", source.name());
        if q.qualified {
            entrants.push(source);
        }
    }
    if entrants.is_empty() {
        bail!("no agent qualified");
    }

    let mut summaries = Vec::new();
    for i in 0..runs {
        let seed = m.seed.wrapping_add(i as u64);
        let suffix = if runs > 1 {
            format!("-run{}", i + 1)
        } else {
            String::new()
        };
        let (path, mut file) = log_file(&m.out_dir, "match", &suffix)?;
        let endpoints = entrants
            .iter()
            .map(|a| a.instantiate(seed))
            .collect::<Result<Vec<_>, _>>()?;
        let log = run_match(
            Arc::clone(&services),
            endpoints,
            &match_options(m, seed),
            Some(&mut file),
        )?;
        file.sync_all()?;
        let footer = log.footer()?;
        println!("run {} (seed {seed}) -> {}", i + 1, path.display());
        print!("{}", footer.rankings_text);
        if let Some(reason) = &footer.abort_reason {
            println!("aborted: {reason}");
        }
        summaries.push(arena::RunSummary {
            seed,
            leaderboard: footer.leaderboard.clone(),
            aborted: footer.aborted,
        });
    }
    if runs > 1 {
        let series = SeriesResult::from_runs(summaries)?;
        for a in &series.aggregates {
            let std = |s: arena::Stat| s.std.map_or("n/a".to_string(), |v| format!("{v:.2}"));
            println!(
                "{}: score {:.2} ± {}, credit {:.0} ± {}, rank {:.2}",
                a.participant,
                a.score.mean,
                std(a.score),
                a.consumed_credit.mean,
                std(a.consumed_credit),
                a.rank.mean
            );
        }
    }
    Ok(())
}

fn qualify(args: &ContestArgs, m: &MatchArgs, endpoint: &str) -> Result<()> {
    let services = Arc::new(services(args)?);
    let roster = agents_file(&m.agents_file)?;
    let timeout = Duration::from_secs(services.contest.config.agent_turn_timeout);
    let source = AgentSource::resolve(endpoint, roster.as_ref(), timeout)?;
    let (path, mut file) = log_file(&m.out_dir, "qualify", "")?;
    let q = run_qualification(
        services,
        source.instantiate(m.seed)?,
        &match_options(m, m.seed),
        Some(&mut file),
    )?;
    file.sync_all()?;
    println!(
        "{}: {}",
        source.name(),
        if q.qualified {
            "qualified"
        } else {
            "not qualified"
        }
    );
    println!("log: {}", path.display());
    Ok(())
}

fn serve(
    args: &ContestArgs,
    transport: Transport,
    addr: &str,
    name: &str,
    max_sessions: Option<usize>,
) -> Result<()> {
    let services = Arc::new(services(args)?);
    match transport {
        Transport::Stdio => {
            let session = wire::serve_stdio(services, name)?;
            log::info!(
                "{} finished as {:?}",
                session.participant().id,
                session.participant().status
            );
        }
        Transport::Tcp => {
            let sessions = wire::serve_tcp(services, addr, max_sessions, |bound| {
                eprintln!("listening on {bound}")
            })?;
            for s in sessions {
                eprintln!(
                    "{} finished as {:?}",
                    s.participant().id,
                    s.participant().status
                );
            }
        }
    }
    Ok(())
}

fn swarm(
    args: &ContestArgs,
    agents_file: &Path,
    profiles: &[String],
    out_dir: &Path,
    seed: u64,
) -> Result<()> {
    let services = Arc::new(services(args)?);
    let roster = AgentsFile::load(agents_file)?;
    let mut report = Vec::new();
    for name in profiles {
        let profile = roster.profile(name)?;
        let (path, mut file) = log_file(out_dir, &format!("swarm-{name}"), "")?;
        let log = simulate_swarm(
            &profile,
            Arc::clone(&services),
            &SwarmOptions {
                seed,
                wall_clock: true,
            },
            Some(&mut file),
        )?;
        file.sync_all()?;
        let metrics = swarm_metrics(&log, profile.parameters.tick_ms)?;
        report.push(json!({ "profile": name, "log": path, "metrics": metrics }));
    }
    print_json(&report)
}

fn profile_log(path: &Path, csv_out: Option<&Path>) -> Result<()> {
    let log = MatchLog::load(path)?;
    let mut rows = Vec::new();
    for id in log.participant_ids() {
        rows.push((id.to_string(), profile(&log, id)?, breakdown(&log, id)?));
    }
    if let Some(out) = csv_out {
        let mut w = csv::Writer::from_path(out)?;
        w.write_record([
            "participant",
            "attempted_problems",
            "submission_count",
            "solved_problems",
            "submission_precision",
            "problems_solve_rate",
            "first_submit_accuracy",
            "inference",
            "hint",
            "test",
            "time",
            "penalty",
            "total",
        ])?;
        let opt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
        for (id, m, b) in &rows {
            w.write_record([
                id.clone(),
                m.attempted_problems.to_string(),
                m.submission_count.to_string(),
                m.solved_problems.to_string(),
                opt(m.submission_precision),
                opt(m.problems_solve_rate),
                opt(m.first_submit_accuracy),
                b.inference.to_string(),
                b.hint.to_string(),
                b.test.to_string(),
                b.time.to_string(),
                b.penalty.to_string(),
                b.total.to_string(),
            ])?;
        }
        w.flush()?;
    }
    let participants: Vec<_> = rows
        .iter()
        .map(|(id, m, b)| json!({ "participant": id, "metrics": m, "breakdown": b }))
        .collect();
    print_json(&json!({
        "attempted_definition": arena::analytics::ATTEMPTED_DEFINITION,
        "participants": participants,
    }))
}

fn replay_log(path: &Path) -> Result<()> {
    let log = MatchLog::load(path)?;
    let stored = log.footer()?.clone();
    let recomputed = replay(&log)?;
    let stored = LogFooterCmp::from(stored);
    if stored.0 != LogFooterCmp::from(recomputed).0 {
        bail!("footer differs from the turn records");
    }
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{}: footer reproduced from {} turn records",
        path.display(),
        log.turns.len()
    )?;
    Ok(())
}

/// A footer with its wall-clock field cleared.
struct LogFooterCmp(arena::LogFooter);

impl From<arena::LogFooter> for LogFooterCmp {
    fn from(mut f: arena::LogFooter) -> Self {
        f.finished_at = None;
        LogFooterCmp(f)
    }
}

fn ablate(grid_path: &Path, out: &Path) -> Result<()> {
    let grid = AblationGrid::load(grid_path)?;
    let base = services(&ContestArgs {
        contest: grid.contest.clone(),
        corpus: grid.corpus.clone(),
        alpha: None,
        credit_limit: None,
        weights: None,
    })?;
    let roster = AgentsFile::load(&grid.agents_file)?;
    let timeout = Duration::from_secs(base.contest.config.agent_turn_timeout);
    let agents: Vec<AgentSource> = grid
        .agents
        .iter()
        .map(|e| AgentSource::resolve(e, Some(&roster), timeout))
        .collect::<Result<_, _>>()?;
    let options = MatchOptions {
        seed: grid.seed,
        ..MatchOptions::default()
    };
    let series = run_grid(&grid.configs, &base, &agents, grid.runs, &options)?;
    let matrix = ablation_matrix(&series)?;
    fs::write(out, &matrix).with_context(|| format!("writing {}", out.display()))?;
    print!("{matrix}");
    Ok(())
}
