#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::{Arc, OnceLock};
use std::time::Duration;

use arena::{AgentEndpoint, AgentSource, AgentsFile, MatchOptions, StrategyProfile};
use arena_core::{load_contest, ContestConfig, PriceTable};
use arena_hints::HintLibrary;
use arena_judge::Judge;
use arena_protocol::Services;

pub fn desk() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/desk")
}

fn base() -> &'static Services {
    static S: OnceLock<Services> = OnceLock::new();
    S.get_or_init(|| {
        let contest = load_contest(desk()).unwrap();
        let hints = HintLibrary::load(desk().join("corpus")).unwrap();
        Services::new(
            contest,
            Judge::detect().with_cache(),
            Some(hints),
            PriceTable::published(),
        )
    })
}

pub fn services() -> Arc<Services> {
    Arc::new(base().with_contest(base().contest.clone()))
}

/// Desk services with a tweaked config. The judge cache is shared.
pub fn services_with(edit: impl FnOnce(&mut ContestConfig)) -> Arc<Services> {
    let mut cfg = base().contest.config.clone();
    edit(&mut cfg);
    Arc::new(base().with_contest(base().contest.with_config(cfg).unwrap()))
}

pub fn roster() -> &'static AgentsFile {
    static A: OnceLock<AgentsFile> = OnceLock::new();
    A.get_or_init(|| AgentsFile::load(desk().join("agents.json")).unwrap())
}

pub fn profile(name: &str) -> StrategyProfile {
    roster().profile(name).unwrap()
}

pub fn agent(name: &str) -> Box<dyn AgentEndpoint> {
    source(name).instantiate(0).unwrap()
}

pub fn source(name: &str) -> AgentSource {
    AgentSource::resolve(
        &format!("scripted:{name}"),
        Some(roster()),
        Duration::from_secs(5),
    )
    .unwrap()
}

pub fn quiet() -> MatchOptions {
    MatchOptions {
        wall_clock: false,
        ..MatchOptions::default()
    }
}
