//! The two worked scenarios shipped with the crate.

use crate::calculus::{Scenario, Situation};

pub const REPLICATOR_SOURCE: &str = include_str!("../scenarios/replicator.scn");
pub const SLEEPING_BEAUTY_SOURCE: &str = include_str!("../scenarios/sleeping_beauty.scn");

/// One situation producing three copies of the observer: two see a dead
/// cat, one a live cat.
pub fn replicator() -> Scenario {
    Scenario::new("replicator")
        .prestates(["m"])
        .situation(
            Situation::new("s", 3)
                .result("cat-dead-1", "m")
                .result("cat-dead-2", "m")
                .result("cat-alive", "m"),
        )
        .outcome("cat-dead", ["cat-dead-1", "cat-dead-2"])
        .outcome("cat-alive", ["cat-alive"])
}

/// Heads wakes the observer on Monday only, tails on Monday and Tuesday.
pub fn sleeping_beauty() -> Scenario {
    Scenario::new("sleeping-beauty")
        .prestates(["H_Mon", "T_Mon", "T_Tue"])
        .situation(Situation::new("H", 3).result("H_Mon", "H_Mon"))
        .situation(
            Situation::new("T", 3)
                .result("T_Mon", "T_Mon")
                .result("T_Tue", "T_Tue"),
        )
        .outcome("H", ["H_Mon"])
        .outcome("T", ["T_Mon", "T_Tue"])
}

/// Looks up a built-in by its command-line name.
pub fn by_name(name: &str) -> Option<Scenario> {
    match name {
        "replicator" => Some(replicator()),
        "sleeping-beauty" => Some(sleeping_beauty()),
        _ => None,
    }
}

pub const NAMES: [&str; 2] = ["replicator", "sleeping-beauty"];
