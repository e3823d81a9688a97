mod common;

use std::sync::Arc;

use arena::{
    comm_tokens_per_wave, replay, simulate_swarm, swarm_metrics, ProfileParameters, StrategyKind,
    StrategyProfile, SwarmMetrics, SwarmOptions, TurnEvent, WaveMode,
};
use arena_protocol::Services;
use common::{profile, services_with};
use proptest::prelude::*;

const AMPLE: u64 = 1_000_000_000;

fn quiet() -> SwarmOptions {
    SwarmOptions {
        seed: 0,
        wall_clock: false,
    }
}

fn ample() -> Arc<Services> {
    services_with(|c| c.credit_limit = AMPLE)
}

fn metrics(name: &str, services: Arc<Services>) -> SwarmMetrics {
    let p = profile(name);
    let log = simulate_swarm(&p, services, &quiet(), None).unwrap();
    replay(&log).unwrap();
    swarm_metrics(&log, p.parameters.tick_ms).unwrap()
}

fn speedy_with(workers: usize) -> StrategyProfile {
    let base = profile("speedy");
    let params = ProfileParameters {
        workers: Some(workers),
        ..base.parameters.clone()
    };
    StrategyProfile::new(
        format!("w{workers}"),
        StrategyKind::SpeedySpendthrift,
        params,
        (*base.book).clone(),
    )
    .unwrap()
}

#[test]
fn time_and_token_orderings_under_an_ample_limit() {
    let s = metrics("speedy", ample());
    let c = metrics("cost-aware", ample());
    let f = metrics("frugal", ample());
    assert!(
        s.ticks < c.ticks && c.ticks < f.ticks,
        "ticks {} {} {}",
        s.ticks,
        c.ticks,
        f.ticks
    );
    assert!(f.total_tokens < c.total_tokens && c.total_tokens < s.total_tokens);
    assert_eq!(f.comm_tokens, 0);
    // everything in the book gets solved either way
    assert_eq!((s.score, c.score, f.score), (54, 54, 54));
    assert_eq!(f.ticks, 24);
    assert_eq!(s.wall_ms, s.ticks * 60_000);
}

#[test]
fn eight_workers_pay_twenty_eight_messages_per_wave() {
    assert_eq!(comm_tokens_per_wave(20_000, 8), 20_000 * 28);
    assert_eq!(comm_tokens_per_wave(20_000, 1), 0);
    let log = simulate_swarm(&profile("speedy"), ample(), &quiet(), None).unwrap();
    let first = &log.turns[0];
    match &first.event {
        TurnEvent::Usage {
            report,
            overhead: true,
        } => assert_eq!(report.input_tokens, 560_000),
        other => panic!("expected overhead first, got {other:?}"),
    }
    assert_eq!(first.wave.unwrap().width, 8);
    // overhead at 1.25 credits per input token
    assert_eq!(first.result.charged, 700_000);
}

#[test]
fn cost_aware_switches_to_sequential_past_its_reserve() {
    let services = services_with(|_| {});
    let limit = services.contest.config.credit_limit;
    let p = profile("cost-aware");
    let log = simulate_swarm(&p, services, &quiet(), None).unwrap();
    let m = swarm_metrics(&log, p.parameters.tick_ms).unwrap();
    let switched = m
        .switched_at_wave
        .expect("reserve should be crossed at the default limit");
    let threshold = (1.0 - p.parameters.reserve_fraction) * limit as f64;
    for t in &log.turns {
        let w = t.wave.unwrap();
        assert_eq!(
            w.mode == WaveMode::Sequential,
            w.index >= switched,
            "wave {}",
            w.index
        );
    }
    // the last parallel wave started at or below the threshold
    let before_switch = log
        .turns
        .iter()
        .take_while(|t| t.wave.unwrap().index < switched - 1)
        .last();
    if let Some(t) = before_switch {
        assert!(t.status_after.termination_total as f64 <= threshold);
    }
    let at_switch = log
        .turns
        .iter()
        .take_while(|t| t.wave.unwrap().index < switched)
        .last()
        .unwrap();
    assert!(at_switch.status_after.termination_total as f64 > threshold);
}

#[test]
fn cost_aware_outlasts_speedy_at_the_default_limit() {
    let s = metrics("speedy", services_with(|_| {}));
    let c = metrics("cost-aware", services_with(|_| {}));
    assert!(s.consumed_total >= 20_000_000);
    assert!(
        c.score >= s.score,
        "cost-aware {} vs speedy {}",
        c.score,
        s.score
    );
}

#[test]
fn swarms_are_deterministic() {
    let run = || {
        simulate_swarm(
            &profile("cost-aware"),
            services_with(|_| {}),
            &quiet(),
            None,
        )
        .unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn overhead_grows_strictly_with_workers() {
    let comm: Vec<u64> = (1..=8)
        .map(|w| {
            let log = simulate_swarm(&speedy_with(w), ample(), &quiet(), None).unwrap();
            swarm_metrics(&log, 60_000).unwrap().comm_tokens
        })
        .collect();
    assert!(comm.windows(2).all(|p| p[0] < p[1]), "{comm:?}");
}

#[test]
fn non_swarm_profiles_are_rejected() {
    assert!(simulate_swarm(&profile("greedy"), ample(), &quiet(), None).is_err());
}

proptest! {
    #[test]
    fn per_wave_overhead_is_strictly_increasing(c in 1u64..1_000_000, w in 1usize..64) {
        prop_assert!(comm_tokens_per_wave(c, w + 1) > comm_tokens_per_wave(c, w));
        prop_assert_eq!(comm_tokens_per_wave(c, w + 1) - comm_tokens_per_wave(c, w), c * w as u64);
    }
}
