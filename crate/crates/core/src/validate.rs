//! Static feasibility checking of a canonical plan against the world, the
//! duration model and the goal, before anything moves.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::plan::{Action, ActionPlan, ClockTime};
use crate::world::{normalize_item, Payload, RoomId, WorldModel, ZArmState};

/// Minutes each non-travel action occupies the arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DurationModel {
    pub pick: u32,
    pub fill: u32,
    pub deliver: u32,
    pub dock: u32,
}

impl Default for DurationModel {
    fn default() -> Self {
        DurationModel {
            pick: 1,
            fill: 1,
            deliver: 1,
            dock: 2,
        }
    }
}

impl DurationModel {
    /// Duration of `action` when started in `from`. Moves take the travel time,
    /// waits their own argument, charging is instantaneous.
    pub fn duration(&self, world: &WorldModel, from: RoomId, action: &Action) -> u32 {
        match action {
            Action::Move { dest } => world.travel_time(from, *dest).unwrap_or(0),
            Action::Pick { .. } => self.pick,
            Action::Fill { .. } => self.fill,
            Action::Deliver { .. } => self.deliver,
            Action::Dock => self.dock,
            Action::Charge => 0,
            Action::Wait { minutes } => *minutes,
        }
    }
}

pub const DEFAULT_TOLERANCE: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Goal {
    pub deliveries: Vec<(String, u32)>,
    pub destination: RoomId,
    pub target_time: ClockTime,
    pub tolerance: u32,
    pub require_terminal_dock: bool,
}

/// Where and when the arm is when the plan begins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanStart {
    pub room: RoomId,
    pub clock: ClockTime,
    pub docked: bool,
    pub charging: bool,
}

impl PlanStart {
    pub fn new(room: RoomId, clock: ClockTime) -> Self {
        PlanStart {
            room,
            clock,
            docked: false,
            charging: false,
        }
    }

    pub fn from_arm(arm: &ZArmState, clock: ClockTime) -> Self {
        PlanStart {
            room: arm.location,
            clock,
            docked: arm.docked,
            charging: arm.charging,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Action `index` starts before the previous action has finished.
    Chronology { index: usize },
    /// The move at `index` needs `needed` minutes but the next action starts
    /// `available` minutes after it.
    TravelInfeasible {
        index: usize,
        needed: u32,
        available: u32,
    },
    ItemUnavailable { item: String, room: RoomId },
    CapacityExceeded { index: usize },
    GoalUnmet { missing: Vec<(String, u32)> },
    DeadlineMissed {
        actual: ClockTime,
        target: ClockTime,
        tolerance: u32,
    },
    NotDockedAtEnd,
    TimeWraparound { index: usize },
    /// Action `index` must happen in `required` but the arm is in `actual`.
    WrongRoom {
        index: usize,
        required: RoomId,
        actual: RoomId,
    },
    /// Charging requested while not docked.
    NotDocked { index: usize },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::Chronology { .. } => "Chronology",
            Violation::TravelInfeasible { .. } => "TravelInfeasible",
            Violation::ItemUnavailable { .. } => "ItemUnavailable",
            Violation::CapacityExceeded { .. } => "CapacityExceeded",
            Violation::GoalUnmet { .. } => "GoalUnmet",
            Violation::DeadlineMissed { .. } => "DeadlineMissed",
            Violation::NotDockedAtEnd => "NotDockedAtEnd",
            Violation::TimeWraparound { .. } => "TimeWraparound",
            Violation::WrongRoom { .. } => "WrongRoom",
            Violation::NotDocked { .. } => "NotDocked",
        }
    }
}

fn token(item: &str) -> String {
    item.replace(' ', "_")
}

/// `VIOLATION <kind> <key=value>...`
impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VIOLATION {}", self.kind())?;
        match self {
            Violation::Chronology { index }
            | Violation::CapacityExceeded { index }
            | Violation::TimeWraparound { index }
            | Violation::NotDocked { index } => write!(f, " index={index}"),
            Violation::TravelInfeasible {
                index,
                needed,
                available,
            } => write!(f, " index={index} needed={needed} available={available}"),
            Violation::ItemUnavailable { item, room } => {
                write!(f, " item={} room={room}", token(item))
            }
            Violation::GoalUnmet { missing } => {
                let list = missing
                    .iter()
                    .map(|(item, qty)| format!("{}:{qty}", token(item)))
                    .collect::<Vec<_>>()
                    .join(",");
                write!(f, " missing={list}")
            }
            Violation::DeadlineMissed {
                actual,
                target,
                tolerance,
            } => write!(f, " actual={actual} target={target} tolerance={tolerance}"),
            Violation::NotDockedAtEnd => Ok(()),
            Violation::WrongRoom {
                index,
                required,
                actual,
            } => write!(f, " index={index} required={required} actual={actual}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduledAction {
    pub start: ClockTime,
    pub completion: ClockTime,
    pub action: Action,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub entries: Vec<ScheduledAction>,
    /// Start of the delivery that completed the goal, if the goal has any.
    pub delivery_time: Option<ClockTime>,
    pub final_room: RoomId,
    pub docked: bool,
    pub charging: bool,
}

impl Schedule {
    /// One line per action: `<start> -> <completion> <action>`.
    pub fn render(&self) -> String {
        self.entries
            .iter()
            .map(|e| format!("{} -> {} {}\n", e.start, e.completion, e.action))
            .collect()
    }

    pub fn completion(&self) -> Option<ClockTime> {
        self.entries.last().map(|e| e.completion)
    }
}

/// Checks the delivery time against `target ± tolerance`.
pub fn check_deadline(schedule: &Schedule, goal: &Goal) -> Result<(), Violation> {
    match schedule.delivery_time {
        Some(actual) => deadline_violation(actual, goal).map_or(Ok(()), Err),
        None => Ok(()),
    }
}

fn deadline_violation(actual: ClockTime, goal: &Goal) -> Option<Violation> {
    let diff = (i64::from(actual.minutes()) - i64::from(goal.target_time.minutes())).abs();
    (diff > i64::from(goal.tolerance)).then_some(Violation::DeadlineMissed {
        actual,
        target: goal.target_time,
        tolerance: goal.tolerance,
    })
}

/// Validates a canonical plan. Returns the full schedule, or every violation
/// found (never just the first).
pub fn validate(
    plan: &ActionPlan,
    world: &WorldModel,
    goal: &Goal,
    durations: &DurationModel,
    start: PlanStart,
) -> Result<Schedule, Vec<Violation>> {
    let mut violations = Vec::new();
    let mut stock: BTreeMap<(RoomId, String), crate::world::Stock> = world
        .facilities()
        .iter()
        .flat_map(|f| f.stock.iter().map(move |(k, v)| ((f.location, k.clone()), *v)))
        .collect();
    let port = world.charging_port_room();
    let mut room = start.room;
    let mut docked = start.docked;
    let mut charging = start.charging;
    let mut payload = Payload::new();
    let mut delivered: Vec<(RoomId, String, u32, ClockTime)> = Vec::new();
    let mut entries = Vec::with_capacity(plan.len());
    let mut free_at = start.clock.minutes();
    let mut wrapped = false;

    for (index, timed) in plan.actions.iter().enumerate() {
        let begin = timed.start.minutes();
        if begin < free_at {
            let prev = index.checked_sub(1).map(|i| &plan.actions[i]);
            match prev {
                Some(p) if matches!(p.action, Action::Move { .. }) && begin >= p.start.minutes() => {
                    violations.push(Violation::TravelInfeasible {
                        index: index - 1,
                        needed: free_at - p.start.minutes(),
                        available: begin - p.start.minutes(),
                    })
                }
                _ => violations.push(Violation::Chronology { index }),
            }
        }
        let duration = durations.duration(world, room, &timed.action);
        let end = begin + duration;
        if end >= crate::plan::MINUTES_PER_DAY && !wrapped {
            violations.push(Violation::TimeWraparound { index });
            wrapped = true;
        }
        let completion = ClockTime::from_minutes(end.min(crate::plan::MINUTES_PER_DAY - 1))
            .expect("clamped");

        match &timed.action {
            Action::Move { dest } => {
                room = *dest;
                docked = false;
                charging = false;
            }
            Action::Pick { item, qty } => {
                let key = normalize_item(item);
                if stock.get_mut(&(room, key.clone())).is_some_and(|s| s.take(*qty)) {
                    load(&mut payload, key, *qty, index, world.arm_capacity(), &mut violations);
                } else {
                    violations.push(Violation::ItemUnavailable { item: key, room });
                }
            }
            Action::Fill { source, .. } => {
                let key = normalize_item(source);
                if stock.get_mut(&(room, key.clone())).is_some_and(|s| s.take(1)) {
                    load(&mut payload, key, 1, index, world.arm_capacity(), &mut violations);
                } else {
                    violations.push(Violation::ItemUnavailable { item: key, room });
                }
            }
            Action::Deliver { items, room: at } => {
                let at = at.unwrap_or(room);
                if at != room {
                    violations.push(Violation::WrongRoom {
                        index,
                        required: at,
                        actual: room,
                    });
                }
                for (item, qty) in items {
                    let key = normalize_item(item);
                    match payload.get_mut(&key) {
                        Some(carried) if *carried >= *qty => {
                            *carried -= qty;
                            if *carried == 0 {
                                payload.remove(&key);
                            }
                            delivered.push((room, key, *qty, timed.start));
                        }
                        _ => violations.push(Violation::ItemUnavailable { item: key, room }),
                    }
                }
            }
            Action::Dock => {
                if room == port {
                    docked = true;
                } else {
                    violations.push(Violation::WrongRoom {
                        index,
                        required: port,
                        actual: room,
                    });
                }
            }
            Action::Charge => {
                if docked {
                    charging = true;
                } else {
                    violations.push(Violation::NotDocked { index });
                }
            }
            Action::Wait { .. } => {}
        }
        entries.push(ScheduledAction {
            start: timed.start,
            completion,
            action: timed.action.clone(),
        });
        free_at = end;
    }

    let mut missing = Vec::new();
    let mut delivery_time: Option<ClockTime> = None;
    for (item, qty) in &goal.deliveries {
        let key = normalize_item(item);
        let relevant: Vec<_> = delivered
            .iter()
            .filter(|(r, i, _, _)| *r == goal.destination && *i == key)
            .collect();
        let got: u32 = relevant.iter().map(|d| d.2).sum();
        if got < *qty {
            missing.push((key, qty - got));
        } else {
            // time at which the cumulative quantity first reached the target
            let mut acc = 0;
            for d in &relevant {
                acc += d.2;
                if acc >= *qty {
                    delivery_time = delivery_time.max(Some(d.3));
                    break;
                }
            }
        }
    }
    if !missing.is_empty() {
        violations.push(Violation::GoalUnmet { missing });
        delivery_time = None;
    } else if let Some(actual) = delivery_time {
        violations.extend(deadline_violation(actual, goal));
    }
    if goal.require_terminal_dock && !docked {
        violations.push(Violation::NotDockedAtEnd);
    }

    if violations.is_empty() {
        Ok(Schedule {
            entries,
            delivery_time,
            final_room: room,
            docked,
            charging,
        })
    } else {
        Err(violations)
    }
}

fn load(
    payload: &mut Payload,
    item: String,
    qty: u32,
    index: usize,
    capacity: usize,
    violations: &mut Vec<Violation>,
) {
    *payload.entry(item).or_insert(0) += qty;
    if payload.len() > capacity {
        violations.push(Violation::CapacityExceeded { index });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::{normalize, parse_plan};
    use crate::world::default_world;

    const REFERENCE_PLAN: &str = "[9:56pm] Move to the storeroom\n\
        [9:58pm] Pick 2 aspirin\n\
        [9:59pm] Move to the kitchen\n\
        [10:01pm] Fill glass with water\n\
        [10:02pm] Move to the living room\n\
        [10:04pm] Deliver 2 aspirin and 1 water to the living room\n\
        [10:05pm] Dock at the charging port\n\
        [10:07pm] Start charging\n";

    fn t(h: u32, m: u32) -> ClockTime {
        ClockTime::hm(h, m).unwrap()
    }

    fn medication_goal() -> Goal {
        Goal {
            deliveries: vec![("aspirin".into(), 2), ("water".into(), 1)],
            destination: RoomId::LivingRoom,
            target_time: t(22, 0),
            tolerance: 5,
            require_terminal_dock: true,
        }
    }

    fn start() -> PlanStart {
        PlanStart {
            room: RoomId::LivingRoom,
            clock: t(21, 56),
            docked: true,
            charging: true,
        }
    }

    #[test]
    fn published_plan_is_valid() {
        let world = default_world();
        let plan = parse_plan(REFERENCE_PLAN).unwrap();
        let schedule =
            validate(&plan, &world, &medication_goal(), &DurationModel::default(), start()).unwrap();
        assert_eq!(schedule.delivery_time, Some(t(22, 4)));
        assert_eq!(schedule.completion(), Some(t(22, 7)));
        assert!(schedule.docked && schedule.charging);
        assert_eq!(schedule.entries[6].completion, t(22, 7));
    }

    #[test]
    fn empty_plan_misses_goal() {
        let world = default_world();
        let violations = validate(
            &ActionPlan::default(),
            &world,
            &medication_goal(),
            &DurationModel::default(),
            start(),
        )
        .unwrap_err();
        assert_eq!(
            violations,
            vec![Violation::GoalUnmet {
                missing: vec![("aspirin".into(), 2), ("water".into(), 1)]
            }]
        );
        assert_eq!(
            violations[0].to_string(),
            "VIOLATION GoalUnmet missing=aspirin:2,water:1"
        );
    }

    #[test]
    fn move_then_fill_too_soon_is_travel_infeasible() {
        let world = default_world();
        let plan = parse_plan("[9:56pm] Move to the kitchen\n[9:57pm] Fill glass with water").unwrap();
        let goal = Goal {
            deliveries: vec![],
            destination: RoomId::LivingRoom,
            target_time: t(22, 0),
            tolerance: 5,
            require_terminal_dock: false,
        };
        let violations = validate(
            &plan,
            &world,
            &goal,
            &DurationModel::default(),
            PlanStart::new(RoomId::LivingRoom, t(21, 56)),
        )
        .unwrap_err();
        assert_eq!(
            violations,
            vec![Violation::TravelInfeasible {
                index: 0,
                needed: 2,
                available: 1
            }]
        );
    }

    #[test]
    fn deadline_window() {
        let goal = medication_goal();
        let at = |time| Schedule {
            entries: vec![],
            delivery_time: Some(time),
            final_room: RoomId::LivingRoom,
            docked: true,
            charging: true,
        };
        assert!(check_deadline(&at(t(22, 4)), &goal).is_ok());
        assert!(check_deadline(&at(t(22, 0)), &goal).is_ok());
        assert!(check_deadline(&at(t(22, 5)), &goal).is_ok());
        assert_eq!(
            check_deadline(&at(t(22, 6)), &goal),
            Err(Violation::DeadlineMissed {
                actual: t(22, 6),
                target: t(22, 0),
                tolerance: 5
            })
        );
        assert!(check_deadline(&at(t(21, 54)), &goal).is_err());
    }

    #[test]
    fn deliver_before_pick_is_item_unavailable() {
        let world = default_world();
        let text = "[9:56pm] Move to the kitchen\n[9:58pm] Fill glass with water\n\
                    [9:59pm] Move to the living room\n[10:01pm] Deliver 2 aspirin and 1 water to the living room\n\
                    [10:02pm] Move to the storeroom\n[10:04pm] Pick 2 aspirin\n";
        let plan = parse_plan(text).unwrap();
        let violations = validate(&plan, &world, &medication_goal(), &DurationModel::default(), start())
            .unwrap_err();
        assert!(violations.contains(&Violation::ItemUnavailable {
            item: "aspirin".into(),
            room: RoomId::LivingRoom
        }));
        assert!(violations.contains(&Violation::NotDockedAtEnd));
    }

    #[test]
    fn capacity_and_stock() {
        let world = crate::world::default_world_builder().arm_capacity(1).build().unwrap();
        let plan = normalize(
            &parse_plan("[9:58pm] Pick 2 aspirin\n[10:01pm] Fill glass with water\n[10:05pm] Pick 20 aspirin").unwrap(),
            &world,
            RoomId::LivingRoom,
        )
        .unwrap();
        let violations = validate(
            &plan,
            &world,
            &Goal { deliveries: vec![], ..medication_goal() },
            &DurationModel::default(),
            PlanStart::new(RoomId::LivingRoom, t(21, 56)),
        )
        .unwrap_err();
        assert!(violations.contains(&Violation::CapacityExceeded { index: 3 }));
        assert!(violations.contains(&Violation::ItemUnavailable {
            item: "aspirin".into(),
            room: RoomId::Storeroom
        }));
    }

    #[test]
    fn wraparound_and_chronology() {
        let world = default_world();
        let plan = parse_plan("[11:58pm] Move to the kitchen\n[11:00pm] Wait 1 minutes").unwrap();
        let goal = Goal { deliveries: vec![], require_terminal_dock: false, ..medication_goal() };
        let violations = validate(
            &plan,
            &world,
            &goal,
            &DurationModel::default(),
            PlanStart::new(RoomId::LivingRoom, t(21, 0)),
        )
        .unwrap_err();
        assert_eq!(
            violations,
            vec![Violation::TimeWraparound { index: 0 }, Violation::Chronology { index: 1 }]
        );
    }

    #[test]
    fn charge_without_dock() {
        let world = default_world();
        let plan = parse_plan("[9:56pm] Start charging").unwrap();
        let goal = Goal { deliveries: vec![], ..medication_goal() };
        let violations = validate(
            &plan,
            &world,
            &goal,
            &DurationModel::default(),
            PlanStart::new(RoomId::LivingRoom, t(21, 56)),
        )
        .unwrap_err();
        assert_eq!(violations, vec![Violation::NotDocked { index: 0 }, Violation::NotDockedAtEnd]);
    }

    #[test]
    fn injected_faults_are_each_reported() {
        let world = default_world();
        let base = parse_plan(REFERENCE_PLAN).unwrap();
        let mut faulty = base.clone();
        // 1: over-pick beyond stock, 2: fill a minute early, 3: drop the dock
        faulty.actions[1].action = Action::Pick { item: "aspirin".into(), qty: 50 };
        faulty.actions[3].start = t(22, 0);
        faulty.actions.remove(6);
        let violations =
            validate(&faulty, &world, &medication_goal(), &DurationModel::default(), start())
                .unwrap_err();
        assert!(violations.len() >= 3, "{violations:?}");
    }

    #[test]
    fn renders_machine_readable_lines() {
        let lines: Vec<String> = [
            Violation::TravelInfeasible { index: 0, needed: 2, available: 1 },
            Violation::ItemUnavailable { item: "vitamin c".into(), room: RoomId::Kitchen },
            Violation::DeadlineMissed { actual: t(22, 6), target: t(22, 0), tolerance: 5 },
            Violation::NotDockedAtEnd,
        ]
        .iter()
        .map(ToString::to_string)
        .collect();
        assert_eq!(
            lines,
            [
                "VIOLATION TravelInfeasible index=0 needed=2 available=1",
                "VIOLATION ItemUnavailable item=vitamin_c room=kitchen",
                "VIOLATION DeadlineMissed actual=10:06pm target=10:00pm tolerance=5",
                "VIOLATION NotDockedAtEnd",
            ]
        );
    }
}
