//! Exhaustive baseline planner. Used as ground truth in tests and benches,
//! never on the live agent path.
//!
//! Every ordering of the pickup/fill waypoints is scheduled back to back from
//! the start, then shifted later so the delivery lands as close to the target
//! as possible. Feasibility is decided here by direct arithmetic, without
//! calling the validator.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::par::{self, Mode};
use crate::plan::{Action, ActionPlan, ClockTime, TimedAction, MINUTES_PER_DAY};
use crate::validate::{DurationModel, Goal, PlanStart};
use crate::world::{normalize_item, RoomId, WorldModel};

pub const MAX_WAYPOINTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("goal unachievable, missing: {}", .missing.join(", "))]
    Unachievable { missing: Vec<String> },
    #[error("{count} waypoints exceeds the enumeration cap of {max}")]
    TooManyWaypoints { count: usize, max: usize },
    #[error("no waypoint ordering admits a feasible schedule")]
    NoFeasibleOrdering,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Waypoint {
    room: RoomId,
    action: Action,
}

/// One waypoint per distinct goal item, at the facility stocking it.
/// Unbounded sources with a single unit are filled, everything else picked.
fn waypoints(world: &WorldModel, goal: &Goal) -> Result<Vec<Waypoint>, OracleError> {
    let mut wanted: Vec<(String, u32)> = Vec::new();
    for (item, qty) in &goal.deliveries {
        let key = normalize_item(item);
        match wanted.iter_mut().find(|(k, _)| *k == key) {
            Some(entry) => entry.1 += qty,
            None => wanted.push((key, *qty)),
        }
    }
    let mut missing = Vec::new();
    let mut out = Vec::new();
    for (item, qty) in wanted {
        let stock = world
            .item_facility(&item)
            .ok()
            .and_then(|f| f.stock.get(&item).map(|s| (f.location, *s)));
        match stock {
            Some((room, stock)) if stock.covers(qty) => {
                let action = if stock.is_unbounded() && qty == 1 {
                    Action::Fill {
                        container: "glass".into(),
                        source: item,
                    }
                } else {
                    Action::Pick { item, qty }
                };
                out.push(Waypoint { room, action });
            }
            _ => missing.push(format!("{qty} {item}")),
        }
    }
    if missing.is_empty() {
        Ok(out)
    } else {
        Err(OracleError::Unachievable { missing })
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    plan: ActionPlan,
    miss: u32,
    completion: u32,
    rooms: Vec<&'static str>,
}

impl Candidate {
    fn key(&self) -> (u32, u32, &[&'static str]) {
        (self.miss, self.completion, &self.rooms)
    }
}

/// Earliest back-to-back schedule for one ordering, shifted toward the target.
fn schedule_ordering(
    world: &WorldModel,
    goal: &Goal,
    durations: &DurationModel,
    start: PlanStart,
    wps: &[Waypoint],
    order: &[usize],
) -> Option<Candidate> {
    let mut steps: Vec<(u32, Action)> = Vec::new();
    let mut t = start.clock.minutes();
    let mut room = start.room;
    let go = |steps: &mut Vec<(u32, Action)>, t: &mut u32, room: &mut RoomId, dest: RoomId| {
        if *room != dest {
            steps.push((*t, Action::Move { dest }));
            *t += world.travel_time(*room, dest).ok()?;
            *room = dest;
        }
        Some(())
    };
    let mut rooms = Vec::with_capacity(order.len());
    for &i in order {
        let wp = &wps[i];
        go(&mut steps, &mut t, &mut room, wp.room)?;
        rooms.push(wp.room.id());
        let d = durations.duration(world, room, &wp.action);
        steps.push((t, wp.action.clone()));
        t += d;
    }
    let mut delivery = None;
    if !goal.deliveries.is_empty() {
        go(&mut steps, &mut t, &mut room, goal.destination)?;
        let mut items: Vec<(String, u32)> = Vec::new();
        for (item, qty) in &goal.deliveries {
            let key = normalize_item(item);
            match items.iter_mut().find(|(k, _)| *k == key) {
                Some(entry) => entry.1 += qty,
                None => items.push((key, *qty)),
            }
        }
        delivery = Some(t);
        steps.push((
            t,
            Action::Deliver {
                items,
                room: Some(goal.destination),
            },
        ));
        t += durations.deliver;
    }
    let already_parked = steps.is_empty() && start.docked;
    if goal.require_terminal_dock && !already_parked {
        go(&mut steps, &mut t, &mut room, world.charging_port_room())?;
        steps.push((t, Action::Dock));
        t += durations.dock;
        steps.push((t, Action::Charge));
    }

    let target = goal.target_time.minutes();
    let (shift, miss) = match delivery {
        Some(d) if d > target + goal.tolerance => return None,
        Some(d) if d < target => (target - d, 0),
        Some(d) => (0, d - target),
        None => (0, 0),
    };
    if t + shift >= MINUTES_PER_DAY {
        return None;
    }
    let plan = ActionPlan::new(
        steps
            .into_iter()
            .map(|(at, action)| {
                TimedAction::new(ClockTime::from_minutes(at + shift).expect("checked"), action)
            })
            .collect(),
    );
    Some(Candidate {
        plan,
        miss,
        completion: t + shift,
        rooms,
    })
}

fn capacity_ok(world: &WorldModel, wps: &[Waypoint]) -> bool {
    let distinct: BTreeMap<&str, ()> = wps
        .iter()
        .map(|w| match &w.action {
            Action::Pick { item, .. } => (item.as_str(), ()),
            Action::Fill { source, .. } => (source.as_str(), ()),
            _ => unreachable!("waypoints only pick or fill"),
        })
        .collect();
    distinct.len() <= world.arm_capacity()
}

/// All permutations of `0..n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("exists");
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

fn candidates(
    world: &WorldModel,
    goal: &Goal,
    durations: &DurationModel,
    start: PlanStart,
    max_waypoints: usize,
    mode: Mode,
) -> Result<Vec<Candidate>, OracleError> {
    let wps = waypoints(world, goal)?;
    let cap = max_waypoints.min(MAX_WAYPOINTS);
    if wps.len() > cap {
        return Err(OracleError::TooManyWaypoints {
            count: wps.len(),
            max: cap,
        });
    }
    if !capacity_ok(world, &wps) {
        return Ok(Vec::new());
    }
    let orders = permutations(wps.len());
    let scheduled = par::map(&orders, mode, |order| {
        schedule_ordering(world, goal, durations, start, &wps, order)
    });
    let mut out: Vec<Candidate> = Vec::new();
    for c in scheduled.into_iter().flatten() {
        if !out.iter().any(|o| o.plan == c.plan) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Every waypoint ordering that admits a feasible schedule, in lexicographic
/// ordering-index order.
pub fn enumerate_feasible(
    world: &WorldModel,
    goal: &Goal,
    durations: &DurationModel,
    start: PlanStart,
    max_waypoints: usize,
) -> Vec<ActionPlan> {
    enumerate_feasible_with(world, goal, durations, start, max_waypoints, Mode::Auto)
}

pub fn enumerate_feasible_with(
    world: &WorldModel,
    goal: &Goal,
    durations: &DurationModel,
    start: PlanStart,
    max_waypoints: usize,
    mode: Mode,
) -> Vec<ActionPlan> {
    candidates(world, goal, durations, start, max_waypoints, mode)
        .map(|cs| cs.into_iter().map(|c| c.plan).collect())
        .unwrap_or_default()
}

/// The ordering whose delivery is closest to the target; ties go to the
/// earlier completion, then the lexicographically smaller room sequence.
pub fn plan_oracle(
    world: &WorldModel,
    goal: &Goal,
    durations: &DurationModel,
    start: PlanStart,
) -> Result<ActionPlan, OracleError> {
    plan_oracle_with(world, goal, durations, start, Mode::Auto)
}

pub fn plan_oracle_with(
    world: &WorldModel,
    goal: &Goal,
    durations: &DurationModel,
    start: PlanStart,
    mode: Mode,
) -> Result<ActionPlan, OracleError> {
    candidates(world, goal, durations, start, MAX_WAYPOINTS, mode)?
        .into_iter()
        .min_by(|a, b| a.key().cmp(&b.key()))
        .map(|c| c.plan)
        .ok_or(OracleError::NoFeasibleOrdering)
}
