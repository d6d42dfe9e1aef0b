//! Scenario files: world, templates, scripted replies, requests and agent
//! configuration in one JSON document, plus the batch runner over them.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::agent::{Agent, AgentConfig, OutcomeStatus, RequestOutcome, DEFAULT_MAX_RETRIES};
use crate::gateway::{
    Backend, FixtureEntry, GatewayError, GenerationParams, HttpBackend, ScriptedBackend, DEFAULT_MAX_OUTPUT_TOKENS,
    DEFAULT_MODEL, DEFAULT_TEMPERATURE,
};
use crate::plan::ClockTime;
use crate::prompt::{PromptTemplate, RequestType, TemplateRepository};
use crate::validate::{DurationModel, DEFAULT_TOLERANCE};
use crate::world::{
    default_world_builder, Facility, FacilityKind, FixedSensor, RoomId, Stock, WorldBuilder, WorldError,
    WorldModel, ZArmState, DEFAULT_ARM_CAPACITY, DEFAULT_TRAVEL_MINUTES, DEFAULT_TRAVEL_RANGE,
};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("world: {0}")]
    World(#[from] WorldError),
    #[error("config: {0}")]
    Config(#[from] GatewayError),
    #[error("arm: {0}")]
    Arm(String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct FacilitySpec {
    kind: FacilityKind,
    location: RoomId,
    #[serde(default)]
    stock: BTreeMap<String, Stock>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct TravelSpec {
    from: RoomId,
    to: RoomId,
    minutes: u32,
}

/// Overrides on the default apartment. `facilities` and `sensors`, when
/// given, replace the defaults wholesale.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct WorldSpec {
    rooms: Option<Vec<RoomId>>,
    travel_minutes: Option<u32>,
    travel_range: Option<(u32, u32)>,
    travel: Vec<TravelSpec>,
    facilities: Option<Vec<FacilitySpec>>,
    sensors: Option<Vec<FixedSensor>>,
    clock_start: Option<ClockTime>,
    arm_capacity: Option<usize>,
    /// Room the arm starts in; parked at the port when absent.
    arm_start: Option<RoomId>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct ConfigSpec {
    max_retries: u32,
    durations: DurationModel,
    tolerance: u32,
    temperature: f64,
    max_output_tokens: u32,
    model: String,
    token_budget: Option<usize>,
    require_terminal_dock: bool,
}

impl Default for ConfigSpec {
    fn default() -> Self {
        ConfigSpec {
            max_retries: DEFAULT_MAX_RETRIES,
            durations: DurationModel::default(),
            tolerance: DEFAULT_TOLERANCE,
            temperature: DEFAULT_TEMPERATURE,
            max_output_tokens: DEFAULT_MAX_OUTPUT_TOKENS,
            model: DEFAULT_MODEL.to_string(),
            token_budget: None,
            require_terminal_dock: true,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(default)]
    world: WorldSpec,
    #[serde(default)]
    templates: BTreeMap<RequestType, PromptTemplate>,
    /// Scripted replies; absent means the HTTP backend configured from the
    /// environment.
    script: Option<Vec<FixtureEntry>>,
    #[serde(default)]
    requests: Vec<String>,
    #[serde(default)]
    config: ConfigSpec,
}

/// A fully resolved scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub world: WorldModel,
    pub arm: ZArmState,
    pub templates: TemplateRepository,
    pub script: Option<Vec<FixtureEntry>>,
    pub requests: Vec<String>,
    pub config: AgentConfig,
}

fn build_world(spec: &WorldSpec) -> Result<(WorldModel, ZArmState), ScenarioError> {
    let mut builder = if spec.facilities.is_some() || spec.sensors.is_some() {
        let defaults = default_world_builder().build()?;
        let mut b = WorldBuilder::default();
        let facilities = match &spec.facilities {
            Some(fs) => fs
                .iter()
                .map(|f| {
                    let mut facility = Facility::new(f.kind, f.location);
                    for (item, stock) in &f.stock {
                        facility = facility.with_item(item, *stock);
                    }
                    facility
                })
                .collect(),
            None => defaults.facilities().to_vec(),
        };
        for facility in facilities {
            b = b.facility(facility);
        }
        let sensors = spec.sensors.clone().unwrap_or_else(|| defaults.fixed_sensors().to_vec());
        for sensor in sensors {
            b = b.sensor(sensor);
        }
        b
    } else {
        default_world_builder()
    };
    if let Some(rooms) = &spec.rooms {
        builder = builder.rooms(rooms.iter().copied());
    }
    let (min, max) = spec.travel_range.unwrap_or(DEFAULT_TRAVEL_RANGE);
    builder = builder
        .travel_range(min, max)
        .default_travel(spec.travel_minutes.unwrap_or(DEFAULT_TRAVEL_MINUTES))
        .arm_capacity(spec.arm_capacity.unwrap_or(DEFAULT_ARM_CAPACITY));
    for t in &spec.travel {
        builder = builder.travel(t.from, t.to, t.minutes);
    }
    if let Some(clock) = spec.clock_start {
        builder = builder.clock_start(clock);
    }
    let world = builder.build()?;
    let arm = match spec.arm_start {
        Some(room) if room != world.charging_port_room() => {
            if !world.has_room(room) {
                return Err(ScenarioError::Arm(format!("start room {room} is not in the world")));
            }
            ZArmState::at(&world, room)
        }
        _ => ZArmState::parked(&world),
    };
    Ok((world, arm))
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| ScenarioError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let (world, arm) = build_world(&file.world)?;
        let c = &file.config;
        let config = AgentConfig {
            max_retries: c.max_retries,
            durations: c.durations,
            tolerance: c.tolerance,
            params: GenerationParams::new(c.temperature, c.max_output_tokens, c.model.clone())?,
            token_budget: c.token_budget,
            require_terminal_dock: c.require_terminal_dock,
        };
        Ok(Scenario {
            world,
            arm,
            templates: TemplateRepository::with_overrides(file.templates),
            script: file.script,
            requests: file.requests,
            config,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Scenario::parse(&text)
    }

    /// The scripted backend when the scenario carries a script, otherwise the
    /// HTTP backend from the environment.
    pub fn backend(&self) -> Result<Box<dyn Backend>, GatewayError> {
        match &self.script {
            Some(entries) => Ok(Box::new(ScriptedBackend::new(entries.clone()))),
            None => Ok(Box::new(HttpBackend::from_env()?)),
        }
    }

    pub fn agent(&self) -> Agent {
        Agent::new(
            self.world.clone(),
            self.arm.clone(),
            self.templates.clone(),
            self.config.clone(),
        )
    }

    /// Runs every request in order against one agent and one backend.
    pub fn run(&self, backend: &mut dyn Backend) -> Vec<RequestOutcome> {
        let mut agent = self.agent();
        self.requests
            .iter()
            .map(|request| agent.handle_request(backend, request))
            .collect()
    }
}

/// Directory name for the `index`-th request (zero-based).
pub fn request_dir_name(index: usize) -> String {
    format!("request-{:02}", index + 1)
}

/// Writes `transcript.txt`, `plan.txt` and `events.txt` for each outcome
/// under `out/request-NN/`.
pub fn write_outputs(outcomes: &[RequestOutcome], out: &Path) -> io::Result<()> {
    for (i, outcome) in outcomes.iter().enumerate() {
        let dir = out.join(request_dir_name(i));
        fs::create_dir_all(&dir)?;
        fs::write(dir.join("transcript.txt"), &outcome.transcript)?;
        fs::write(dir.join("plan.txt"), outcome.plan_text())?;
        fs::write(dir.join("events.txt"), outcome.events_text())?;
    }
    Ok(())
}

pub fn all_fulfilled(outcomes: &[RequestOutcome]) -> bool {
    outcomes.iter().all(|o| o.status == OutcomeStatus::Fulfilled)
}
