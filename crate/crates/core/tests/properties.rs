use arena_core::{
    rank, Category, ContestConfig, CreditLedger, DifficultyLevel, ModelPrice, ParticipantState,
    PerLevel, ScoreTable, Stamp, TokenUsage, Verdict,
};
use proptest::prelude::*;

#[derive(Debug, Clone)]
enum Op {
    Inference(u64, u64),
    Hint(u8),
    Test(usize),
    Time(u32),
    Penalty(Verdict),
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        (0u64..2_000_000, 0u64..200_000).prop_map(|(i, o)| Op::Inference(i, o)),
        (0u8..5).prop_map(Op::Hint),
        (1usize..10).prop_map(Op::Test),
        (0u32..100_000).prop_map(Op::Time),
        prop::sample::select(vec![
            Verdict::WA,
            Verdict::RE,
            Verdict::CE,
            Verdict::TLE,
            Verdict::MLE
        ])
        .prop_map(Op::Penalty),
    ]
}

fn apply(ledger: &mut CreditLedger, config: &ContestConfig, op: &Op, turn: u64) {
    let at = Stamp::new(turn, turn * 1000);
    match *op {
        Op::Inference(i, o) => {
            ledger.charge_inference(TokenUsage::new(i, o), ModelPrice::new(1.25, 10.0), at);
        }
        Op::Hint(level) => {
            ledger.charge_hint(level, config, at).unwrap();
        }
        Op::Test(cases) => {
            ledger.charge_test(cases, config, at);
        }
        Op::Time(secs) => {
            ledger.accrue_time(f64::from(secs), config, at);
        }
        Op::Penalty(v) => {
            ledger.add_penalty(v, config, at).unwrap();
        }
    }
}

proptest! {
    #[test]
    fn ledger_totals_are_conserved_and_monotone(
        ops in prop::collection::vec(op(), 0..60),
        alpha in 0.0f64..3.0,
    ) {
        let config = ContestConfig { alpha, test_cost_per_case: 3, ..ContestConfig::default() };
        let mut ledger = CreditLedger::new();
        let mut last = (0, 0);
        let mut terminated = false;
        for (turn, op) in ops.iter().enumerate() {
            apply(&mut ledger, &config, op, turn as u64);
            let entry_sum: u64 = ledger.entries().iter().map(|e| e.amount).sum();
            let category_sum: u64 = Category::ALL.iter().map(|&c| ledger.category_total(c)).sum();
            prop_assert_eq!(ledger.consumed_total(), entry_sum);
            prop_assert_eq!(ledger.consumed_total(), category_sum);
            prop_assert_eq!(
                ledger.termination_total(),
                ledger.consumed_total() - ledger.category_total(Category::Penalty)
            );
            let now = (ledger.termination_total(), ledger.consumed_total());
            prop_assert!(now.0 >= last.0 && now.1 >= last.1);
            last = now;
            if terminated {
                prop_assert!(ledger.is_terminated(&config));
            }
            terminated = ledger.is_terminated(&config);
        }
        prop_assert_eq!(CreditLedger::from_entries(ledger.entries().iter().copied()), ledger);
    }

    #[test]
    fn scaling_weights_preserves_rank_order(
        solved_sets in prop::collection::vec((prop::collection::btree_set(0usize..12, 0..12), 0u64..1_000_000), 1..8),
        factor in 1u64..50,
    ) {
        let ids: Vec<String> = (0..12).map(|i| format!("p{i:02}")).collect();
        let levels: Vec<(&str, DifficultyLevel)> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), DifficultyLevel::ALL[i / 3]))
            .collect();
        let weights = PerLevel::new(1u64, 2, 5, 10);
        let base = ScoreTable::new(levels.iter().copied(), &weights);
        let scaled = ScoreTable::new(levels.iter().copied(), &weights.map(|w| w * factor));

        let participants: Vec<ParticipantState> = solved_sets
            .iter()
            .enumerate()
            .map(|(n, (solved, credit))| {
                let mut p = ParticipantState::new(format!("agent-{n}"));
                p.solved = solved.iter().map(|&i| ids[i].clone()).collect();
                p.ledger.charge_inference(TokenUsage::new(*credit, 0), ModelPrice::new(1.0, 0.0), Stamp::default());
                p
            })
            .collect();
        let order = |t: &ScoreTable| rank(&participants, t).into_iter().map(|r| r.participant_id).collect::<Vec<_>>();
        prop_assert_eq!(order(&base), order(&scaled));
    }

    #[test]
    fn adding_a_solved_problem_never_lowers_score(
        solved in prop::collection::btree_set(0usize..12, 0..11),
        extra in 0usize..12,
    ) {
        let ids: Vec<String> = (0..12).map(|i| format!("p{i:02}")).collect();
        let table = ScoreTable::new(
            ids.iter().enumerate().map(|(i, id)| (id.as_str(), DifficultyLevel::ALL[i / 3])),
            &ContestConfig::default().score_weights,
        );
        let mut set: Vec<String> = solved.iter().map(|&i| ids[i].clone()).collect();
        let before = table.score(&set).unwrap();
        if !set.contains(&ids[extra]) {
            set.push(ids[extra].clone());
        }
        prop_assert!(table.score(&set).unwrap() >= before);
    }
}
