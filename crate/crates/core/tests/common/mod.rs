//! Generators and paths shared by the integration tests and the benches.
#![allow(dead_code)]

use std::path::PathBuf;

use lcac::batch::Instance;
use lcac::plan::{Action, ActionPlan, ClockTime, TimedAction};
use lcac::validate::{Goal, PlanStart};
use lcac::world::{default_world_builder, Facility, FacilityKind, RoomId, Stock, WorldBuilder, ZArmState};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};

pub const MEDICATION_REQUEST: &str =
    "I need to take two pills of aspirin with water at 10pm in the living room";

pub const MEDICATION_SLOTS: &str = "item=aspirin; qty=2; companion=water; time=10:00pm; room=living room";

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn scenario(name: &str) -> PathBuf {
    manifest_dir().join("scenarios").join(format!("{name}.scenario"))
}

pub fn golden(name: &str) -> PathBuf {
    manifest_dir().join("tests").join("golden").join(name)
}

pub fn t(h: u32, m: u32) -> ClockTime {
    ClockTime::hm(h, m).unwrap()
}

// Item names chosen so that none collides with a parser keyword.
const ITEMS: &[&str] = &["aspirin", "water", "ibuprofen", "vitamins", "orange juice", "tea", "cough syrup"];
const CONTAINERS: &[&str] = &["glass", "cup", "mug"];

fn room() -> impl Strategy<Value = RoomId> {
    prop::sample::select(RoomId::ALL.to_vec())
}

fn item() -> impl Strategy<Value = String> {
    prop::sample::select(ITEMS).prop_map(str::to_string)
}

fn action() -> impl Strategy<Value = Action> {
    prop_oneof![
        room().prop_map(|dest| Action::Move { dest }),
        (item(), 1u32..20).prop_map(|(item, qty)| Action::Pick { item, qty }),
        (prop::sample::select(CONTAINERS), item()).prop_map(|(c, source)| Action::Fill {
            container: c.to_string(),
            source
        }),
        (prop::sample::subsequence(ITEMS.to_vec(), 1..=3), prop::collection::vec(1u32..9, 3), room())
            .prop_map(|(items, qtys, room)| Action::Deliver {
                items: items.into_iter().map(str::to_string).zip(qtys).collect(),
                room: Some(room),
            }),
        Just(Action::Dock),
        Just(Action::Charge),
        (1u32..90).prop_map(|minutes| Action::Wait { minutes }),
    ]
}

/// Plans in canonical form: explicit delivery rooms, non-decreasing times.
pub fn canonical_plan() -> impl Strategy<Value = ActionPlan> {
    (0u32..1200, prop::collection::vec((0u32..15, action()), 0..12)).prop_map(|(start, steps)| {
        let mut clock = start;
        let actions = steps
            .into_iter()
            .map(|(gap, action)| {
                clock = (clock + gap).min(1439);
                TimedAction::new(ClockTime::from_minutes(clock).unwrap(), action)
            })
            .collect();
        ActionPlan::new(actions)
    })
}

/// A random apartment and delivery goal with at most `max_items` distinct
/// items. Travel times, facility rooms, stock, arm capacity, the start state
/// and the deadline all vary; some goals are unachievable on purpose.
pub fn random_instance(rng: &mut StdRng, max_items: usize) -> Instance {
    let mut builder = WorldBuilder::default().arm_capacity(rng.random_range(1..=4));
    let rooms = RoomId::ALL;
    for (i, &a) in rooms.iter().enumerate() {
        for &b in &rooms[i + 1..] {
            builder = builder.travel(a, b, rng.random_range(1..=2));
        }
    }
    let port = *rooms.choose(rng).unwrap();
    builder = builder.facility(Facility::new(FacilityKind::ChargingPort, port));
    let mut pool: Vec<&str> = ITEMS.to_vec();
    pool.shuffle(rng);
    let count = rng.random_range(1..=max_items);
    let goal_items = &pool[..count];
    for item in &pool {
        let location = *rooms.choose(rng).unwrap();
        let facility = if rng.random_bool(0.3) {
            Facility::new(FacilityKind::WaterCooler, location).with_item(item, Stock::UNBOUNDED)
        } else {
            Facility::new(FacilityKind::MedicineBox, location).with_item(item, Stock::Finite(rng.random_range(0..6)))
        };
        builder = builder.facility(facility);
    }
    let clock = ClockTime::from_minutes(rng.random_range(6 * 60..22 * 60)).unwrap();
    let world = builder.clock_start(clock).build().expect("generated world is valid");
    let deliveries = goal_items
        .iter()
        .map(|item| (item.to_string(), rng.random_range(1..=3)))
        .collect();
    let goal = Goal {
        deliveries,
        destination: *rooms.choose(rng).unwrap(),
        target_time: clock.checked_add(rng.random_range(5..=60)).unwrap(),
        tolerance: rng.random_range(0..=10),
        require_terminal_dock: rng.random_bool(0.8),
    };
    let arm = if rng.random_bool(0.5) {
        ZArmState::parked(&world)
    } else {
        ZArmState::at(&world, *rooms.choose(rng).unwrap())
    };
    Instance {
        start: PlanStart::from_arm(&arm, clock),
        world,
        goal,
    }
}

pub fn random_instances(seed: u64, n: usize, max_items: usize) -> Vec<Instance> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n).map(|_| random_instance(&mut rng, max_items)).collect()
}

/// The default apartment with the medication goal, arm parked.
pub fn medication_instance() -> Instance {
    let world = default_world_builder().build().unwrap();
    let start = PlanStart::from_arm(&ZArmState::parked(&world), world.clock_start());
    Instance {
        world,
        goal: Goal {
            deliveries: vec![("aspirin".into(), 2), ("water".into(), 1)],
            destination: RoomId::LivingRoom,
            target_time: t(22, 0),
            tolerance: 5,
            require_terminal_dock: true,
        },
        start,
    }
}

/// A captured request to [`StubServer`].
#[derive(Debug, Clone)]
pub struct CapturedRequest {
    pub head: String,
    pub body: String,
}

/// Answers one connection per canned `(status, body)` pair, in order, and
/// records what it received.
pub struct StubServer {
    pub url: String,
    handle: std::thread::JoinHandle<Vec<CapturedRequest>>,
}

impl StubServer {
    pub fn start(responses: Vec<(u16, String)>) -> Self {
        let listener = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
        let url = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
        let handle = std::thread::spawn(move || {
            let mut captured = Vec::new();
            for (status, body) in responses {
                let (mut stream, _) = listener.accept().unwrap();
                captured.push(read_request(&mut stream));
                let reply = format!(
                    "HTTP/1.1 {status} Stub\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                    body.len()
                );
                std::io::Write::write_all(&mut stream, reply.as_bytes()).unwrap();
            }
            captured
        });
        StubServer { url, handle }
    }

    /// Waits for every canned response to be served.
    pub fn finish(self) -> Vec<CapturedRequest> {
        self.handle.join().unwrap()
    }
}

fn read_request(stream: &mut std::net::TcpStream) -> CapturedRequest {
    use std::io::{BufRead, BufReader, Read};
    let mut reader = BufReader::new(stream);
    let mut head = String::new();
    loop {
        let mut line = String::new();
        reader.read_line(&mut line).unwrap();
        if line == "\r\n" || line.is_empty() {
            break;
        }
        head.push_str(&line);
    }
    let lower = head.to_ascii_lowercase();
    let mut body = Vec::new();
    if let Some(len) = lower
        .lines()
        .find_map(|l| l.strip_prefix("content-length:"))
        .and_then(|v| v.trim().parse::<usize>().ok())
    {
        body.resize(len, 0);
        reader.read_exact(&mut body).unwrap();
    } else if lower.contains("transfer-encoding: chunked") {
        loop {
            let mut size = String::new();
            reader.read_line(&mut size).unwrap();
            let size = usize::from_str_radix(size.trim(), 16).unwrap();
            let mut chunk = vec![0; size + 2];
            reader.read_exact(&mut chunk).unwrap();
            if size == 0 {
                break;
            }
            body.extend_from_slice(&chunk[..size]);
        }
    }
    CapturedRequest {
        head,
        body: String::from_utf8(body).unwrap(),
    }
}

pub fn chat_reply(content: &str) -> String {
    serde_json::json!({
        "id": "stub",
        "choices": [{"index": 0, "message": {"role": "assistant", "content": content}, "finish_reason": "stop"}]
    })
    .to_string()
}
