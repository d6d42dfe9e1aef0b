//! Deterministic minute-resolution execution of a plan against the simulated
//! apartment. Faults are recorded in the event log rather than returned as
//! errors, so a failed run is still a complete, replayable transcript.

use std::collections::BTreeMap;
use std::fmt;

use crate::plan::{item_list_text, Action, ActionPlan, ClockTime};
use crate::validate::DurationModel;
use crate::world::{normalize_item, read_sensors, RoomId, SensorReading, WorldModel, ZArmState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Depart,
    Arrive,
    Pick,
    Fill,
    Deliver,
    Dock,
    ChargeStart,
    Wait,
    Fault,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Depart => "depart",
            EventKind::Arrive => "arrive",
            EventKind::Pick => "pick",
            EventKind::Fill => "fill",
            EventKind::Deliver => "deliver",
            EventKind::Dock => "dock",
            EventKind::ChargeStart => "charge_start",
            EventKind::Wait => "wait",
            EventKind::Fault => "fault",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub time: ClockTime,
    pub kind: EventKind,
    pub detail: String,
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.time, self.kind.as_str(), self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Completed,
    Fault,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventLog {
    pub events: Vec<Event>,
    pub final_state: ZArmState,
    /// World after execution (facility stock decremented).
    pub final_world: WorldModel,
    /// Items handed over, per room.
    pub delivered: BTreeMap<(RoomId, String), u32>,
    pub final_clock: ClockTime,
    pub outcome: Outcome,
}

impl EventLog {
    /// One line per event, `<time> <kind> <detail>`, each ending in `\n`.
    pub fn render(&self) -> String {
        self.events.iter().map(|e| format!("{e}\n")).collect()
    }

    pub fn fault(&self) -> Option<&Event> {
        self.events.iter().find(|e| e.kind == EventKind::Fault)
    }
}

/// Mutable simulation state for one run.
#[derive(Debug, Clone)]
pub struct Simulation {
    world: WorldModel,
    arm: ZArmState,
    clock: ClockTime,
    durations: DurationModel,
    delivered: BTreeMap<(RoomId, String), u32>,
    events: Vec<Event>,
}

enum Step {
    Continue,
    Halt,
}

impl Simulation {
    pub fn new(world: WorldModel, arm: ZArmState, clock: ClockTime, durations: DurationModel) -> Self {
        Simulation {
            world,
            arm,
            clock,
            durations,
            delivered: BTreeMap::new(),
            events: Vec::new(),
        }
    }

    pub fn clock(&self) -> ClockTime {
        self.clock
    }

    pub fn arm(&self) -> &ZArmState {
        &self.arm
    }

    pub fn world(&self) -> &WorldModel {
        &self.world
    }

    pub fn snapshot(&self) -> Vec<SensorReading> {
        read_sensors(&self.world, &self.arm, self.clock)
    }

    fn emit(&mut self, time: ClockTime, kind: EventKind, detail: impl Into<String>) {
        self.events.push(Event {
            time,
            kind,
            detail: detail.into(),
        });
    }

    fn fault(&mut self, time: ClockTime, detail: impl Into<String>) -> Step {
        self.emit(time, EventKind::Fault, detail);
        Step::Halt
    }

    fn advance(&mut self, from: ClockTime, minutes: u32) -> Option<ClockTime> {
        let end = from.checked_add(minutes)?;
        self.clock = end;
        Some(end)
    }

    fn step(&mut self, start: ClockTime, action: &Action) -> Step {
        if start < self.clock {
            return self.fault(
                self.clock,
                format!("action scheduled at {start} but the arm is busy until {}", self.clock),
            );
        }
        // Idle until the scheduled start.
        self.clock = start;
        let here = self.arm.location;
        match action {
            Action::Move { dest } => {
                let Ok(travel) = self.world.travel_time(here, *dest) else {
                    return self.fault(start, format!("no route to {dest}"));
                };
                self.arm.docked = false;
                self.arm.charging = false;
                self.emit(start, EventKind::Depart, format!("{here} -> {dest}"));
                let Some(arrival) = self.advance(start, travel) else {
                    return self.fault(start, "travel past midnight");
                };
                self.arm.location = *dest;
                self.emit(arrival, EventKind::Arrive, dest.id());
            }
            Action::Pick { item, qty } => {
                let key = normalize_item(item);
                if !self.payload_has_room_for(&key) {
                    return self.fault(start, format!("capacity exceeded picking {key}"));
                }
                if !self.world.take_stock(here, &key, *qty) {
                    return self.fault(start, format!("stock exhausted: {qty} {key} not available in {here}"));
                }
                *self.arm.payload.entry(key.clone()).or_insert(0) += qty;
                self.emit(start, EventKind::Pick, format!("{qty} {key} in {here}"));
                if self.advance(start, self.durations.pick).is_none() {
                    return self.fault(start, "pick past midnight");
                }
            }
            Action::Fill { container, source } => {
                let key = normalize_item(source);
                if !self.payload_has_room_for(&key) {
                    return self.fault(start, format!("capacity exceeded filling {container}"));
                }
                if !self.world.take_stock(here, &key, 1) {
                    return self.fault(start, format!("no {key} source in {here}"));
                }
                *self.arm.payload.entry(key.clone()).or_insert(0) += 1;
                self.emit(start, EventKind::Fill, format!("{container} with {key} in {here}"));
                if self.advance(start, self.durations.fill).is_none() {
                    return self.fault(start, "fill past midnight");
                }
            }
            Action::Deliver { items, room } => {
                let room = room.unwrap_or(here);
                if room != here {
                    return self.fault(start, format!("cannot deliver to {room} from {here}"));
                }
                for (item, qty) in items {
                    let key = normalize_item(item);
                    if self.arm.payload.get(&key).copied().unwrap_or(0) < *qty {
                        return self.fault(start, format!("not carrying {qty} {key}"));
                    }
                }
                for (item, qty) in items {
                    let key = normalize_item(item);
                    let carried = self.arm.payload.get_mut(&key).expect("checked above");
                    *carried -= qty;
                    if *carried == 0 {
                        self.arm.payload.remove(&key);
                    }
                    *self.delivered.entry((here, key)).or_insert(0) += qty;
                }
                self.emit(start, EventKind::Deliver, format!("{} to {here}", item_list_text(items)));
                if self.advance(start, self.durations.deliver).is_none() {
                    return self.fault(start, "delivery past midnight");
                }
            }
            Action::Dock => {
                let port = self.world.charging_port_room();
                if here != port {
                    return self.fault(start, format!("charging port is in {port}, arm is in {here}"));
                }
                self.emit(start, EventKind::Dock, format!("charging port in {here}"));
                if self.advance(start, self.durations.dock).is_none() {
                    return self.fault(start, "docking past midnight");
                }
                self.arm.docked = true;
            }
            Action::Charge => {
                if !self.arm.docked {
                    return self.fault(start, "cannot charge while undocked");
                }
                self.arm.charging = true;
                self.emit(start, EventKind::ChargeStart, format!("charging port in {here}"));
            }
            Action::Wait { minutes } => {
                self.emit(start, EventKind::Wait, format!("{minutes} minutes in {here}"));
                if self.advance(start, *minutes).is_none() {
                    return self.fault(start, "wait past midnight");
                }
            }
        }
        Step::Continue
    }

    fn payload_has_room_for(&self, item: &str) -> bool {
        self.arm.payload.contains_key(item) || self.arm.payload.len() < self.arm.capacity
    }

    /// Runs every action in order, halting at the first fault.
    pub fn run(mut self, plan: &ActionPlan) -> EventLog {
        let mut outcome = Outcome::Completed;
        for timed in &plan.actions {
            if let Step::Halt = self.step(timed.start, &timed.action) {
                outcome = Outcome::Fault;
                break;
            }
        }
        EventLog {
            events: self.events,
            final_state: self.arm,
            final_world: self.world,
            delivered: self.delivered,
            final_clock: self.clock,
            outcome,
        }
    }
}

/// Executes `plan` starting at the world's configured clock.
pub fn execute(plan: &ActionPlan, world: &WorldModel, arm: &ZArmState, durations: &DurationModel) -> EventLog {
    execute_at(plan, world, arm, world.clock_start(), durations)
}

pub fn execute_at(
    plan: &ActionPlan,
    world: &WorldModel,
    arm: &ZArmState,
    clock: ClockTime,
    durations: &DurationModel,
) -> EventLog {
    Simulation::new(world.clone(), arm.clone(), clock, *durations).run(plan)
}

/// Sensor readings at `clock`; a thin alias over [`read_sensors`].
pub fn snapshot(world: &WorldModel, arm: &ZArmState, clock: ClockTime) -> Vec<SensorReading> {
    read_sensors(world, arm, clock)
}
