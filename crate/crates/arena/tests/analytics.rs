mod common;

use arena::{
    ablation_matrix, breakdown, profile, run_grid, run_match, ArenaError, ConfigOverrides,
    CreditBreakdown, GridConfig, MatchLog, ResultSummary, StatusAfter, TurnEvent, TurnRecord,
    WeightScheme,
};
use arena_core::{Category, LedgerEntry, ParticipantStatus, Verdict};
use arena_protocol::ActionRequest;
use common::{agent, desk, quiet, services, services_with, source};

fn shipped() -> MatchLog {
    MatchLog::load(desk().join("logs/match-mixed.jsonl")).unwrap()
}

fn record(problem: &str, verdict: Verdict, delta: Vec<LedgerEntry>) -> TurnRecord {
    TurnRecord {
        participant: "x".into(),
        turn_index: 0,
        event: TurnEvent::Action {
            request: Some(ActionRequest::SubmitSolution {
                problem_id: problem.into(),
                language: "python3".into(),
                source: String::new(),
            }),
            raw: None,
            usage: None,
        },
        result: ResultSummary {
            ok: true,
            verdict: Some(verdict),
            ..Default::default()
        },
        ledger_delta: delta,
        status_after: StatusAfter {
            status: ParticipantStatus::Active,
            score: 0,
            consumed_total: 0,
            termination_total: 0,
        },
        wave: None,
        wall_ms: None,
    }
}

/// A log with one participant `x` and the given turns.
fn synthetic(turns: Vec<TurnRecord>) -> MatchLog {
    let mut header = shipped().header;
    header.participants.truncate(1);
    header.participants[0].id = "x".into();
    let mut log = MatchLog::new(header);
    log.turns = turns;
    log
}

fn entry(category: Category, amount: u64) -> LedgerEntry {
    LedgerEntry {
        category,
        amount,
        turn: 0,
        t_ms: 0,
    }
}

#[test]
fn profile_ratios() {
    use Verdict::*;
    let subs = [
        ("a", AC),
        ("b", AC),
        ("c", WA),
        ("c", TLE),
        ("d", WA),
        ("d", RE),
        ("e", CE),
        ("e", WA),
    ];
    let log = synthetic(subs.iter().map(|(p, v)| record(p, *v, vec![])).collect());
    let m = profile(&log, "x").unwrap();
    assert_eq!(
        (m.submission_count, m.attempted_problems, m.solved_problems),
        (8, 5, 2)
    );
    assert_eq!(m.submission_precision, Some(0.25));
    assert_eq!(m.problems_solve_rate, Some(0.4));
    assert_eq!(m.first_submit_accuracy, Some(1.0));
}

#[test]
fn first_submit_accuracy_counts_only_first_attempts() {
    use Verdict::*;
    let log = synthetic(vec![
        record("a", WA, vec![]),
        record("a", AC, vec![]),
        record("b", AC, vec![]),
    ]);
    assert_eq!(profile(&log, "x").unwrap().first_submit_accuracy, Some(0.5));
}

#[test]
fn empty_profiles_have_undefined_ratios() {
    let m = profile(&synthetic(vec![]), "x").unwrap();
    assert_eq!(m.submission_precision, None);
    assert_eq!(m.problems_solve_rate, None);
    assert_eq!(m.first_submit_accuracy, None);
    assert!(matches!(
        profile(&synthetic(vec![]), "y"),
        Err(ArenaError::UnknownParticipant(_))
    ));
}

#[test]
fn breakdown_sums_categories() {
    let log = synthetic(vec![record(
        "a",
        Verdict::AC,
        vec![
            entry(Category::Inference, 5000),
            entry(Category::Hint, 500),
            entry(Category::Test, 100),
        ],
    )]);
    let b = breakdown(&log, "x").unwrap();
    assert_eq!(
        b,
        CreditBreakdown {
            inference: 5000,
            hint: 500,
            test: 100,
            time: 0,
            penalty: 0,
            total: 5600
        }
    );
    assert_eq!(b.get(Category::Hint), 500);
}

#[test]
fn breakdown_matches_the_footer() {
    let log = shipped();
    for p in &log.footer().unwrap().participants {
        let b = breakdown(&log, &p.id).unwrap();
        assert_eq!(b, p.breakdown);
        assert_eq!(b.total, p.consumed_total);
    }
}

#[test]
fn shipped_logs_cover_every_category_but_time() {
    let mut total = CreditBreakdown::default();
    for f in std::fs::read_dir(desk().join("logs")).unwrap() {
        let log = MatchLog::load(f.unwrap().path()).unwrap();
        for id in log.participant_ids() {
            let b = breakdown(&log, id).unwrap();
            total.inference += b.inference;
            total.hint += b.hint;
            total.test += b.test;
            total.time += b.time;
            total.penalty += b.penalty;
        }
    }
    assert!(
        total.inference > 0 && total.hint > 0 && total.test > 0 && total.penalty > 0,
        "{total:?}"
    );
}

#[test]
fn time_costs_appear_with_positive_alpha() {
    let services = services_with(|c| c.alpha = 0.01);
    let log = run_match(services, vec![agent("greedy")], &quiet(), None).unwrap();
    assert!(breakdown(&log, "greedy").unwrap().time > 0);
    let log = run_match(
        services_with(|c| c.alpha = 0.0),
        vec![agent("greedy")],
        &quiet(),
        None,
    )
    .unwrap();
    assert_eq!(breakdown(&log, "greedy").unwrap().time, 0);
}

#[test]
fn ablation_matrix_shape() {
    let configs = vec![
        GridConfig {
            label: "flat".into(),
            overrides: ConfigOverrides {
                weights: Some(WeightScheme::Flat),
                ..Default::default()
            },
        },
        GridConfig {
            label: "exp".into(),
            overrides: ConfigOverrides {
                weights: Some(WeightScheme::Exp),
                ..Default::default()
            },
        },
    ];
    let agents = [source("easy"), source("plat")];
    let series = run_grid(&configs, &services(), &agents, 1, &quiet()).unwrap();
    let csv = ablation_matrix(&series).unwrap();
    let rows: Vec<Vec<&str>> = csv.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["participant", "flat", "exp"]);
    assert_eq!(rows[1], ["easy", "4", "13"]);
    assert_eq!(rows[2], ["plat", "1", "1000"]);
    assert_eq!(ablation_matrix(&[]).unwrap(), "");

    let other = run_grid(&configs[..1], &services(), &[source("easy")], 1, &quiet()).unwrap();
    let mixed = vec![series[0].clone(), other[0].clone()];
    assert!(matches!(
        ablation_matrix(&mixed),
        Err(ArenaError::MismatchedParticipants(_))
    ));
}

#[test]
fn weight_schemes_parse() {
    assert_eq!("flat".parse::<WeightScheme>().unwrap(), WeightScheme::Flat);
    assert_eq!(
        "Exponential".parse::<WeightScheme>().unwrap(),
        WeightScheme::Exp
    );
    assert!("steep".parse::<WeightScheme>().is_err());
}
