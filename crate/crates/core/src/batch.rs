//! Cross-checks of oracle, validator and simulator over many instances.
//!
//! Each instance is checked independently, so sweeps run through
//! [`par::map`] and parallelise when the `parallel` feature is on.

use std::collections::BTreeMap;

use crate::oracle::enumerate_feasible_with;
use crate::par::{self, Mode};
use crate::sim::{execute_at, EventLog, Outcome};
use crate::validate::{validate, DurationModel, Goal, PlanStart};
use crate::world::{Stock, WorldModel, ZArmState};

/// One planning problem: a world, a goal and where the arm starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub world: WorldModel,
    pub goal: Goal,
    pub start: PlanStart,
}

impl Instance {
    /// Arm state matching `start`: parked when docked, otherwise idle in the
    /// start room.
    pub fn arm(&self) -> ZArmState {
        if self.start.docked {
            ZArmState::parked(&self.world)
        } else {
            ZArmState::at(&self.world, self.start.room)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoherenceReport {
    /// Feasible orderings found by the oracle.
    pub plans: usize,
    pub failures: Vec<String>,
}

impl CoherenceReport {
    pub fn is_coherent(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Finite stock taken from facilities must equal what was delivered plus
/// what the arm still holds.
pub fn conservation_errors(before: &WorldModel, log: &EventLog) -> Vec<String> {
    let mut taken: BTreeMap<String, u32> = BTreeMap::new();
    for (old, new) in before.facilities().iter().zip(log.final_world.facilities()) {
        for (item, stock) in &old.stock {
            if let (Stock::Finite(a), Some(Stock::Finite(b))) = (stock, new.stock.get(item)) {
                *taken.entry(item.clone()).or_default() += a.saturating_sub(*b);
            }
        }
    }
    let mut errors = Vec::new();
    for (item, qty) in taken {
        let delivered: u32 = log
            .delivered
            .iter()
            .filter(|((_, i), _)| *i == item)
            .map(|(_, q)| q)
            .sum();
        let held = log.final_state.payload.get(&item).copied().unwrap_or(0);
        if delivered + held != qty {
            errors.push(format!(
                "{item}: took {qty}, delivered {delivered}, still holding {held}"
            ));
        }
    }
    errors
}

/// Every oracle plan must validate, execute to completion, deliver the goal
/// and conserve items.
pub fn check_instance(instance: &Instance, durations: &DurationModel, max_waypoints: usize) -> CoherenceReport {
    let Instance { world, goal, start } = instance;
    let plans = enumerate_feasible_with(world, goal, durations, *start, max_waypoints, Mode::Sequential);
    let mut report = CoherenceReport {
        plans: plans.len(),
        failures: Vec::new(),
    };
    for (k, plan) in plans.iter().enumerate() {
        if let Err(violations) = validate(plan, world, goal, durations, *start) {
            let lines: Vec<String> = violations.iter().map(ToString::to_string).collect();
            report.failures.push(format!("plan {k} rejected: {}", lines.join("; ")));
            continue;
        }
        let log = execute_at(plan, world, &instance.arm(), start.clock, durations);
        if log.outcome != Outcome::Completed {
            let fault = log.fault().map(ToString::to_string).unwrap_or_default();
            report.failures.push(format!("plan {k} faulted: {fault}"));
            continue;
        }
        for (item, qty) in &goal.deliveries {
            let got = log
                .delivered
                .get(&(goal.destination, item.clone()))
                .copied()
                .unwrap_or(0);
            if got < *qty {
                report.failures.push(format!("plan {k} delivered {got} of {qty} {item}"));
            }
        }
        for e in conservation_errors(world, &log) {
            report.failures.push(format!("plan {k} conservation: {e}"));
        }
    }
    report
}

/// [`check_instance`] over every instance, in input order.
pub fn coherence_sweep(
    instances: &[Instance],
    durations: &DurationModel,
    max_waypoints: usize,
    mode: Mode,
) -> Vec<CoherenceReport> {
    par::map(instances, mode, |i| check_instance(i, durations, max_waypoints))
}
