//! Typed model of the apartment: rooms, travel times, facilities and their
//! stock, the z-arm, and sensor readings.
//!
//! The world is immutable once built; the simulator mutates its own clone.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plan::ClockTime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorldError {
    #[error("unknown room `{0}`")]
    UnknownRoom(String),
    #[error("unknown item `{0}`")]
    ItemUnknown(String),
    #[error("item `{item}` is stocked in more than one facility ({rooms})")]
    ItemAmbiguous { item: String, rooms: String },
    #[error("travel time {from} -> {to} = {minutes} outside allowed range [{min}, {max}]")]
    TravelOutOfRange {
        from: RoomId,
        to: RoomId,
        minutes: u32,
        min: u32,
        max: u32,
    },
    #[error("facility {kind} placed in {room}, which is not a room of this world")]
    FacilityOutsideWorld { kind: FacilityKind, room: RoomId },
    #[error("world has no charging port")]
    NoChargingPort,
    #[error("world has more than one charging port")]
    MultipleChargingPorts,
    #[error("invalid arm state: {0}")]
    InvalidArm(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoomId {
    LivingRoom,
    Bedroom,
    Kitchen,
    Bathroom,
    Storeroom,
}

impl RoomId {
    pub const ALL: [RoomId; 5] = [
        RoomId::LivingRoom,
        RoomId::Bedroom,
        RoomId::Kitchen,
        RoomId::Bathroom,
        RoomId::Storeroom,
    ];

    /// Identifier form, e.g. `living_room`.
    pub fn id(self) -> &'static str {
        match self {
            RoomId::LivingRoom => "living_room",
            RoomId::Bedroom => "bedroom",
            RoomId::Kitchen => "kitchen",
            RoomId::Bathroom => "bathroom",
            RoomId::Storeroom => "storeroom",
        }
    }

    /// Prose form used in plan lines, e.g. `living room`.
    pub fn phrase(self) -> &'static str {
        match self {
            RoomId::LivingRoom => "living room",
            other => other.id(),
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    /// Accepts `living_room`, `Living Room`, `the living room`, `livingroom`.
    pub fn parse(text: &str) -> Result<Self, WorldError> {
        let lowered = text.trim().to_ascii_lowercase();
        let lowered = lowered.strip_prefix("the ").unwrap_or(&lowered);
        let key: String = lowered
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect();
        RoomId::ALL
            .into_iter()
            .find(|room| room.id().replace('_', "") == key)
            .ok_or_else(|| WorldError::UnknownRoom(text.trim().to_string()))
    }
}

impl fmt::Display for RoomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for RoomId {
    type Err = WorldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RoomId::parse(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FacilityKind {
    WaterCooler,
    MedicineBox,
    ChargingPort,
}

impl FacilityKind {
    pub fn id(self) -> &'static str {
        match self {
            FacilityKind::WaterCooler => "water_cooler",
            FacilityKind::MedicineBox => "medicine_box",
            FacilityKind::ChargingPort => "charging_port",
        }
    }

    pub fn phrase(self) -> &'static str {
        match self {
            FacilityKind::WaterCooler => "water cooler",
            FacilityKind::MedicineBox => "medicine box",
            FacilityKind::ChargingPort => "charging port",
        }
    }
}

impl fmt::Display for FacilityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Stocked quantity. Tap-like sources never run out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Stock {
    Finite(u32),
    Unbounded(UnboundedMarker),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnboundedMarker {
    Unbounded,
}

impl Stock {
    pub const UNBOUNDED: Stock = Stock::Unbounded(UnboundedMarker::Unbounded);

    pub fn is_unbounded(self) -> bool {
        matches!(self, Stock::Unbounded(_))
    }

    pub fn covers(self, qty: u32) -> bool {
        match self {
            Stock::Finite(n) => n >= qty,
            Stock::Unbounded(_) => true,
        }
    }

    pub fn take(&mut self, qty: u32) -> bool {
        match self {
            Stock::Finite(n) if *n >= qty => {
                *n -= qty;
                true
            }
            Stock::Finite(_) => false,
            Stock::Unbounded(_) => true,
        }
    }
}

impl fmt::Display for Stock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stock::Finite(n) => write!(f, "{n}"),
            Stock::Unbounded(_) => f.write_str("unlimited"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facility {
    pub kind: FacilityKind,
    pub location: RoomId,
    /// Item name (lowercase) to quantity.
    pub stock: BTreeMap<String, Stock>,
}

impl Facility {
    pub fn new(kind: FacilityKind, location: RoomId) -> Self {
        Facility {
            kind,
            location,
            stock: BTreeMap::new(),
        }
    }

    pub fn with_item(mut self, item: &str, stock: Stock) -> Self {
        self.stock.insert(normalize_item(item), stock);
        self
    }
}

/// A fixed sensor installed in a room whose value does not depend on the
/// simulation (thermometers and the like).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedSensor {
    pub id: String,
    pub kind: String,
    pub value: String,
    #[serde(default)]
    pub unit: String,
    pub location: RoomId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SensorReading {
    pub sensor_id: String,
    pub kind: String,
    pub value: String,
    pub unit: String,
    pub location: RoomId,
    pub timestamp: ClockTime,
}

/// Lowercases and collapses whitespace so item lookups are case-insensitive.
pub fn normalize_item(name: &str) -> String {
    name.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

pub const DEFAULT_TRAVEL_MINUTES: u32 = 2;
pub const DEFAULT_TRAVEL_RANGE: (u32, u32) = (1, 2);
pub const DEFAULT_ARM_CAPACITY: usize = 2;
pub const DEFAULT_ASPIRIN_STOCK: u32 = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldModel {
    rooms: BTreeSet<RoomId>,
    travel: [[u32; 5]; 5],
    facilities: Vec<Facility>,
    clock_start: ClockTime,
    arm_capacity: usize,
    sensors: Vec<FixedSensor>,
}

/// Incremental world construction with validation in [`WorldBuilder::build`].
#[derive(Debug, Clone)]
pub struct WorldBuilder {
    rooms: BTreeSet<RoomId>,
    default_travel: u32,
    overrides: Vec<(RoomId, RoomId, u32)>,
    travel_range: (u32, u32),
    facilities: Vec<Facility>,
    clock_start: ClockTime,
    arm_capacity: usize,
    sensors: Vec<FixedSensor>,
}

impl Default for WorldBuilder {
    fn default() -> Self {
        WorldBuilder {
            rooms: RoomId::ALL.into_iter().collect(),
            default_travel: DEFAULT_TRAVEL_MINUTES,
            overrides: Vec::new(),
            travel_range: DEFAULT_TRAVEL_RANGE,
            facilities: Vec::new(),
            clock_start: ClockTime::hm(21, 56).expect("valid"),
            arm_capacity: DEFAULT_ARM_CAPACITY,
            sensors: Vec::new(),
        }
    }
}

impl WorldBuilder {
    pub fn rooms(mut self, rooms: impl IntoIterator<Item = RoomId>) -> Self {
        self.rooms = rooms.into_iter().collect();
        self
    }

    pub fn default_travel(mut self, minutes: u32) -> Self {
        self.default_travel = minutes;
        self
    }

    pub fn travel_range(mut self, min: u32, max: u32) -> Self {
        self.travel_range = (min, max);
        self
    }

    /// Sets both directions of a pair.
    pub fn travel(mut self, a: RoomId, b: RoomId, minutes: u32) -> Self {
        self.overrides.push((a, b, minutes));
        self
    }

    pub fn facility(mut self, facility: Facility) -> Self {
        self.facilities.push(facility);
        self
    }

    pub fn clock_start(mut self, clock: ClockTime) -> Self {
        self.clock_start = clock;
        self
    }

    pub fn arm_capacity(mut self, capacity: usize) -> Self {
        self.arm_capacity = capacity;
        self
    }

    pub fn sensor(mut self, sensor: FixedSensor) -> Self {
        self.sensors.push(sensor);
        self
    }

    pub fn build(self) -> Result<WorldModel, WorldError> {
        let (min, max) = self.travel_range;
        let mut travel = [[self.default_travel; 5]; 5];
        for room in RoomId::ALL {
            travel[room.index()][room.index()] = 0;
        }
        for &(a, b, minutes) in &self.overrides {
            for room in [a, b] {
                if !self.rooms.contains(&room) {
                    return Err(WorldError::UnknownRoom(room.id().to_string()));
                }
            }
            if a != b {
                travel[a.index()][b.index()] = minutes;
                travel[b.index()][a.index()] = minutes;
            }
        }
        for &from in &self.rooms {
            for &to in &self.rooms {
                let minutes = travel[from.index()][to.index()];
                if from != to && !(min..=max).contains(&minutes) {
                    return Err(WorldError::TravelOutOfRange {
                        from,
                        to,
                        minutes,
                        min,
                        max,
                    });
                }
            }
        }
        for facility in &self.facilities {
            if !self.rooms.contains(&facility.location) {
                return Err(WorldError::FacilityOutsideWorld {
                    kind: facility.kind,
                    room: facility.location,
                });
            }
        }
        for sensor in &self.sensors {
            if !self.rooms.contains(&sensor.location) {
                return Err(WorldError::UnknownRoom(sensor.location.id().to_string()));
            }
        }
        match self
            .facilities
            .iter()
            .filter(|f| f.kind == FacilityKind::ChargingPort)
            .count()
        {
            0 => return Err(WorldError::NoChargingPort),
            1 => {}
            _ => return Err(WorldError::MultipleChargingPorts),
        }
        Ok(WorldModel {
            rooms: self.rooms,
            travel,
            facilities: self.facilities,
            clock_start: self.clock_start,
            arm_capacity: self.arm_capacity,
            sensors: self.sensors,
        })
    }
}

/// The five-room apartment: water cooler in the kitchen, medicine box in the
/// storeroom, charging port in the living room, 2 minutes between any rooms.
pub fn default_world() -> WorldModel {
    default_world_builder()
        .build()
        .expect("default world is valid")
}

pub fn default_world_builder() -> WorldBuilder {
    let mut builder = WorldBuilder::default()
        .facility(
            Facility::new(FacilityKind::WaterCooler, RoomId::Kitchen)
                .with_item("water", Stock::UNBOUNDED),
        )
        .facility(
            Facility::new(FacilityKind::MedicineBox, RoomId::Storeroom)
                .with_item("aspirin", Stock::Finite(DEFAULT_ASPIRIN_STOCK)),
        )
        .facility(Facility::new(FacilityKind::ChargingPort, RoomId::LivingRoom));
    for room in RoomId::ALL {
        builder = builder.sensor(FixedSensor {
            id: "temperature".into(),
            kind: "temperature".into(),
            value: "22".into(),
            unit: "celsius".into(),
            location: room,
        });
    }
    builder
}

impl WorldModel {
    pub fn builder() -> WorldBuilder {
        WorldBuilder::default()
    }

    pub fn rooms(&self) -> impl Iterator<Item = RoomId> + '_ {
        self.rooms.iter().copied()
    }

    pub fn has_room(&self, room: RoomId) -> bool {
        self.rooms.contains(&room)
    }

    fn require_room(&self, room: RoomId) -> Result<(), WorldError> {
        if self.has_room(room) {
            Ok(())
        } else {
            Err(WorldError::UnknownRoom(room.id().to_string()))
        }
    }

    pub fn travel_time(&self, from: RoomId, to: RoomId) -> Result<u32, WorldError> {
        self.require_room(from)?;
        self.require_room(to)?;
        Ok(self.travel[from.index()][to.index()])
    }

    pub fn facilities(&self) -> &[Facility] {
        &self.facilities
    }

    pub fn facilities_mut(&mut self) -> &mut [Facility] {
        &mut self.facilities
    }

    pub fn clock_start(&self) -> ClockTime {
        self.clock_start
    }

    pub fn arm_capacity(&self) -> usize {
        self.arm_capacity
    }

    pub fn fixed_sensors(&self) -> &[FixedSensor] {
        &self.sensors
    }

    pub fn charging_port_room(&self) -> RoomId {
        self.facilities
            .iter()
            .find(|f| f.kind == FacilityKind::ChargingPort)
            .map(|f| f.location)
            .expect("validated at construction")
    }

    /// The facility stocking `item`, which must be unique.
    pub fn item_facility(&self, item: &str) -> Result<&Facility, WorldError> {
        let key = normalize_item(item);
        let mut holders = self.facilities.iter().filter(|f| f.stock.contains_key(&key));
        let first = holders
            .next()
            .ok_or_else(|| WorldError::ItemUnknown(key.clone()))?;
        let rest: Vec<&Facility> = holders.collect();
        if rest.is_empty() {
            Ok(first)
        } else {
            let rooms = std::iter::once(first)
                .chain(rest)
                .map(|f| f.location.id())
                .collect::<Vec<_>>()
                .join(", ");
            Err(WorldError::ItemAmbiguous { item: key, rooms })
        }
    }

    pub fn item_location(&self, item: &str) -> Result<RoomId, WorldError> {
        self.item_facility(item).map(|f| f.location)
    }

    pub fn stock_of(&self, item: &str) -> Option<Stock> {
        let key = normalize_item(item);
        self.item_facility(&key)
            .ok()
            .and_then(|f| f.stock.get(&key).copied())
    }

    /// Every item stocked anywhere, with its room.
    pub fn items(&self) -> Vec<(String, RoomId)> {
        let mut items: Vec<(String, RoomId)> = self
            .facilities
            .iter()
            .flat_map(|f| f.stock.keys().map(move |k| (k.clone(), f.location)))
            .collect();
        items.sort();
        items
    }

    /// Removes `qty` of `item` from the facility in `room`. Returns false when
    /// the item is not stocked there or stock is short.
    pub fn take_stock(&mut self, room: RoomId, item: &str, qty: u32) -> bool {
        let key = normalize_item(item);
        self.facilities
            .iter_mut()
            .filter(|f| f.location == room)
            .find_map(|f| f.stock.get_mut(&key))
            .is_some_and(|stock| stock.take(qty))
    }
}

/// Payload carried by the arm: item name to quantity, one slot per item.
pub type Payload = BTreeMap<String, u32>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZArmState {
    pub location: RoomId,
    pub payload: Payload,
    pub capacity: usize,
    pub docked: bool,
    pub charging: bool,
}

impl ZArmState {
    /// Parked at the charging port, docked and charging, empty-handed.
    pub fn parked(world: &WorldModel) -> Self {
        ZArmState {
            location: world.charging_port_room(),
            payload: Payload::new(),
            capacity: world.arm_capacity(),
            docked: true,
            charging: true,
        }
    }

    pub fn at(world: &WorldModel, location: RoomId) -> Self {
        ZArmState {
            location,
            payload: Payload::new(),
            capacity: world.arm_capacity(),
            docked: false,
            charging: false,
        }
    }

    /// charging => docked => at the charging port; payload within capacity.
    pub fn check(&self, world: &WorldModel) -> Result<(), WorldError> {
        if self.charging && !self.docked {
            return Err(WorldError::InvalidArm("charging while undocked".into()));
        }
        if self.docked && self.location != world.charging_port_room() {
            return Err(WorldError::InvalidArm(format!(
                "docked in {} but the charging port is in {}",
                self.location,
                world.charging_port_room()
            )));
        }
        if self.payload.len() > self.capacity {
            return Err(WorldError::InvalidArm(format!(
                "{} payload slots used, capacity {}",
                self.payload.len(),
                self.capacity
            )));
        }
        if !world.has_room(self.location) {
            return Err(WorldError::UnknownRoom(self.location.id().to_string()));
        }
        Ok(())
    }

    pub fn status_text(&self) -> &'static str {
        match (self.docked, self.charging) {
            (true, true) => "docked,charging",
            (true, false) => "docked",
            _ => "undocked",
        }
    }
}

/// Renders a payload as `2 aspirin, 1 water`, or `empty`.
pub fn payload_text(payload: &Payload) -> String {
    if payload.is_empty() {
        "empty".to_string()
    } else {
        payload
            .iter()
            .map(|(item, qty)| format!("{qty} {item}"))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Reads every sensor: fixed sensors, facility stock gauges, the clock and the
/// z-arm telemetry. Sorted by (location id, sensor id).
pub fn read_sensors(world: &WorldModel, arm: &ZArmState, clock: ClockTime) -> Vec<SensorReading> {
    let base = world.charging_port_room();
    let reading = |sensor_id: String, kind: &str, value: String, unit: &str, location| SensorReading {
        sensor_id,
        kind: kind.to_string(),
        value,
        unit: unit.to_string(),
        location,
        timestamp: clock,
    };
    let mut readings: Vec<SensorReading> = world
        .sensors
        .iter()
        .map(|s| reading(s.id.clone(), &s.kind, s.value.clone(), &s.unit, s.location))
        .collect();
    for facility in &world.facilities {
        for (item, stock) in &facility.stock {
            let unit = if stock.is_unbounded() { "" } else { "units" };
            readings.push(reading(
                format!("{}_{}", facility.kind.id(), item.replace(' ', "_")),
                "stock",
                stock.to_string(),
                unit,
                facility.location,
            ));
        }
    }
    readings.push(reading("clock".into(), "clock", clock.to_string(), "", base));
    readings.push(reading(
        "zarm_position".into(),
        "position",
        arm.location.id().to_string(),
        "",
        base,
    ));
    readings.push(reading(
        "zarm_status".into(),
        "status",
        arm.status_text().to_string(),
        "",
        base,
    ));
    readings.push(reading(
        "zarm_payload".into(),
        "payload",
        payload_text(&arm.payload),
        "",
        base,
    ));
    readings.sort_by(|a, b| {
        (a.location.id(), a.sensor_id.as_str()).cmp(&(b.location.id(), b.sensor_id.as_str()))
    });
    readings
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn default_world_layout() {
        let world = default_world();
        assert_eq!(world.rooms().count(), 5);
        assert_eq!(world.item_location("aspirin").unwrap(), RoomId::Storeroom);
        assert_eq!(world.item_location("Water").unwrap(), RoomId::Kitchen);
        assert_eq!(world.charging_port_room(), RoomId::LivingRoom);
        let medicine = world
            .facilities()
            .iter()
            .find(|f| f.kind == FacilityKind::MedicineBox)
            .unwrap();
        assert_eq!(medicine.location, RoomId::Storeroom);
        assert!(medicine.stock["aspirin"].covers(2));
        assert!(world.stock_of("water").unwrap().is_unbounded());
    }

    #[test]
    fn default_travel_times() {
        let world = default_world();
        assert_eq!(world.travel_time(RoomId::LivingRoom, RoomId::LivingRoom).unwrap(), 0);
        assert_eq!(world.travel_time(RoomId::LivingRoom, RoomId::Storeroom).unwrap(), 2);
        assert_eq!(world.travel_time(RoomId::Kitchen, RoomId::Kitchen).unwrap(), 0);
        assert_eq!(world.travel_time(RoomId::Bedroom, RoomId::Bathroom).unwrap(), 2);
        assert_eq!(
            world.travel_time(RoomId::Kitchen, RoomId::Storeroom).unwrap(),
            world.travel_time(RoomId::Storeroom, RoomId::Kitchen).unwrap()
        );
    }

    #[test]
    fn unknown_items_and_rooms() {
        let world = default_world();
        assert_eq!(
            world.item_location("espresso"),
            Err(WorldError::ItemUnknown("espresso".into()))
        );
        assert!(matches!(RoomId::parse("attic"), Err(WorldError::UnknownRoom(r)) if r == "attic"));
        let small = default_world_builder()
            .rooms([RoomId::LivingRoom, RoomId::Kitchen, RoomId::Storeroom])
            .sensor(FixedSensor {
                id: "x".into(),
                kind: "x".into(),
                value: "1".into(),
                unit: String::new(),
                location: RoomId::Kitchen,
            });
        // default sensors reference rooms outside the subset
        assert!(small.build().is_err());
    }

    #[test]
    fn travel_to_room_outside_world_is_rejected() {
        let world = WorldModel::builder()
            .rooms([RoomId::LivingRoom, RoomId::Kitchen])
            .facility(Facility::new(FacilityKind::ChargingPort, RoomId::LivingRoom))
            .build()
            .unwrap();
        assert_eq!(
            world.travel_time(RoomId::LivingRoom, RoomId::Bedroom),
            Err(WorldError::UnknownRoom("bedroom".into()))
        );
    }

    #[test]
    fn ambiguous_item() {
        let world = default_world_builder()
            .facility(
                Facility::new(FacilityKind::MedicineBox, RoomId::Bathroom)
                    .with_item("aspirin", Stock::Finite(1)),
            )
            .build()
            .unwrap();
        assert!(matches!(
            world.item_location("aspirin"),
            Err(WorldError::ItemAmbiguous { .. })
        ));
    }

    #[test]
    fn travel_range_enforced() {
        let err = default_world_builder()
            .travel(RoomId::Kitchen, RoomId::Bedroom, 5)
            .build()
            .unwrap_err();
        assert!(matches!(err, WorldError::TravelOutOfRange { minutes: 5, .. }));
        assert!(default_world_builder()
            .travel_range(1, 10)
            .travel(RoomId::Kitchen, RoomId::Bedroom, 5)
            .build()
            .is_ok());
    }

    #[test]
    fn sensors_include_clock_and_position_in_sorted_order() {
        let world = default_world();
        let arm = ZArmState::parked(&world);
        let clock = ClockTime::hm(21, 54).unwrap();
        let readings = read_sensors(&world, &arm, clock);
        assert!(readings
            .iter()
            .any(|r| r.sensor_id == "zarm_position" && r.value == "living_room"));
        assert!(readings.iter().any(|r| r.sensor_id == "clock" && r.value == "9:54pm"));
        let keys: Vec<_> = readings
            .iter()
            .map(|r| (r.location.id(), r.sensor_id.clone()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(readings[0].location, RoomId::Bathroom);
        assert_eq!(readings, read_sensors(&world, &arm, clock));
        assert!(readings.iter().all(|r| r.timestamp <= clock));
    }

    #[test]
    fn arm_invariants() {
        let world = default_world();
        let mut arm = ZArmState::parked(&world);
        assert!(arm.check(&world).is_ok());
        arm.docked = false;
        assert!(arm.check(&world).is_err());
        let mut away = ZArmState::at(&world, RoomId::Kitchen);
        away.docked = true;
        assert!(away.check(&world).is_err());
    }

    proptest! {
        #[test]
        fn travel_matrix_symmetric_with_zero_diagonal(
            pairs in proptest::collection::vec((0usize..5, 0usize..5, 1u32..=2), 0..20)
        ) {
            let mut builder = default_world_builder();
            for (a, b, m) in pairs {
                builder = builder.travel(RoomId::ALL[a], RoomId::ALL[b], m);
            }
            let world = builder.build().unwrap();
            for a in RoomId::ALL {
                prop_assert_eq!(world.travel_time(a, a).unwrap(), 0);
                for b in RoomId::ALL {
                    prop_assert_eq!(world.travel_time(a, b).unwrap(), world.travel_time(b, a).unwrap());
                }
            }
        }
    }
}
