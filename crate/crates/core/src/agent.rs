//! The request pipeline: classify, match a template, extract the goal, add
//! sensor context, ask for a plan, check it, execute it. Plans that fail to
//! parse or validate are sent back with the failures listed, a bounded
//! number of times.

use std::fmt;

use crate::gateway::{complete_within, Backend, GatewayError, GenerationParams, Session};
use crate::plan::{normalize, parse_plan, serialize_plan, ActionPlan, ClockTime, NormalizeError, ParseError};
use crate::prompt::{
    build_few_shot_prompt, context_aware_description, extract_option, goal_prompt, parse_goal_slots,
    render_goal_slots, GoalError, RequestType, TemplateRepository, DESC_REQ_TYPE, EXAMP_REQ_TYPE,
};
use crate::sim::{execute_at, EventLog, Outcome};
use crate::validate::{validate, DurationModel, Goal, PlanStart, Schedule, Violation, DEFAULT_TOLERANCE};
use crate::world::{read_sensors, WorldModel, ZArmState};

pub const DEFAULT_MAX_RETRIES: u32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct AgentConfig {
    pub max_retries: u32,
    pub durations: DurationModel,
    pub tolerance: u32,
    pub params: GenerationParams,
    /// Input budget per call; `None` uses the backend's own limit.
    pub token_budget: Option<usize>,
    pub require_terminal_dock: bool,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            max_retries: DEFAULT_MAX_RETRIES,
            durations: DurationModel::default(),
            tolerance: DEFAULT_TOLERANCE,
            params: GenerationParams::default(),
            token_budget: None,
            require_terminal_dock: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutcomeStatus {
    Fulfilled,
    RejectedUnknownType,
    PlanFailed,
    BackendFailed,
}

impl OutcomeStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            OutcomeStatus::Fulfilled => "fulfilled",
            OutcomeStatus::RejectedUnknownType => "rejected_unknown_type",
            OutcomeStatus::PlanFailed => "plan_failed",
            OutcomeStatus::BackendFailed => "backend_failed",
        }
    }
}

impl fmt::Display for OutcomeStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Why a plan reply was not accepted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanFailure {
    Parse(ParseError),
    Normalize(NormalizeError),
    Violations(Vec<Violation>),
}

impl PlanFailure {
    /// One machine-readable line per problem.
    pub fn lines(&self) -> Vec<String> {
        match self {
            PlanFailure::Parse(e) => vec![format!("PARSE ERROR {e}")],
            PlanFailure::Normalize(e) => vec![format!("PLAN ERROR {e}")],
            PlanFailure::Violations(vs) => vs.iter().map(Violation::to_string).collect(),
        }
    }
}

pub const FORMAT_EXAMPLE: &str = "[9:56pm] Move to the kitchen";

/// The repair prompt sent after a rejected plan.
pub fn replan_feedback(failure: &PlanFailure) -> String {
    let mut out = String::from("The action plan could not be accepted:\n");
    for line in failure.lines() {
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str(
        "Please answer with the corrected full action plan, one action per line in the form\n",
    );
    out.push_str(FORMAT_EXAMPLE);
    out
}

#[derive(Debug, Clone)]
pub struct RequestOutcome {
    pub request: String,
    pub status: OutcomeStatus,
    pub request_type: Option<RequestType>,
    pub goal: Option<Goal>,
    /// The accepted plan in canonical form.
    pub plan: Option<ActionPlan>,
    pub schedule: Option<Schedule>,
    pub event_log: Option<EventLog>,
    pub transcript: String,
    /// Plan replies requested, including the first.
    pub attempts: u32,
    /// Problems that led to a non-fulfilled status, or to a retry.
    pub failures: Vec<String>,
}

impl RequestOutcome {
    fn new(request: &str) -> Self {
        RequestOutcome {
            request: request.to_string(),
            status: OutcomeStatus::PlanFailed,
            request_type: None,
            goal: None,
            plan: None,
            schedule: None,
            event_log: None,
            transcript: format!("=== request ===\n{request}\n"),
            attempts: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, prompt: &str, reply: &str) {
        self.transcript
            .push_str(&format!("=== user ===\n{prompt}\n=== assistant ===\n{reply}\n"));
    }

    fn note(&mut self, label: &str, text: &str) {
        self.transcript.push_str(&format!("=== {label} ===\n{text}\n"));
    }

    fn finish(mut self, status: OutcomeStatus) -> Self {
        self.status = status;
        self.transcript.push_str(&format!("=== status ===\n{status}\n"));
        self
    }

    /// `plan.txt` contents: the canonical plan, or empty.
    pub fn plan_text(&self) -> String {
        self.plan.as_ref().map(serialize_plan).unwrap_or_default()
    }

    /// `events.txt` contents: the event log, or empty.
    pub fn events_text(&self) -> String {
        self.event_log.as_ref().map(EventLog::render).unwrap_or_default()
    }
}

/// Holds the world between requests. Each request gets a fresh session.
pub struct Agent {
    world: WorldModel,
    arm: ZArmState,
    clock: ClockTime,
    templates: TemplateRepository,
    config: AgentConfig,
    handled: usize,
}

impl Agent {
    pub fn new(world: WorldModel, arm: ZArmState, templates: TemplateRepository, config: AgentConfig) -> Self {
        let clock = world.clock_start();
        Agent {
            world,
            arm,
            clock,
            templates,
            config,
            handled: 0,
        }
    }

    pub fn world(&self) -> &WorldModel {
        &self.world
    }

    pub fn arm(&self) -> &ZArmState {
        &self.arm
    }

    pub fn clock(&self) -> ClockTime {
        self.clock
    }

    pub fn config(&self) -> &AgentConfig {
        &self.config
    }

    fn ask(
        &self,
        backend: &mut dyn Backend,
        session: &mut Session,
        outcome: &mut RequestOutcome,
        prompt: &str,
    ) -> Result<String, GatewayError> {
        let budget = self.config.token_budget.unwrap_or_else(|| backend.input_token_limit());
        match complete_within(backend, session, prompt, &self.config.params, budget) {
            Ok(reply) => {
                outcome.record(prompt, &reply);
                Ok(reply)
            }
            Err(e) => {
                outcome.record(prompt, "");
                outcome.note("backend error", &e.to_string());
                outcome.failures.push(e.to_string());
                Err(e)
            }
        }
    }

    /// Runs one request to completion. Every failure mode is reported through
    /// the returned status; the world only changes when a plan is executed.
    pub fn handle_request(&mut self, backend: &mut dyn Backend, request: &str) -> RequestOutcome {
        self.handled += 1;
        let mut session = Session::new(format!("request-{:02}", self.handled));
        let mut outcome = RequestOutcome::new(request);
        let request = request.trim();

        let classify = build_few_shot_prompt(DESC_REQ_TYPE, EXAMP_REQ_TYPE, request);
        let Ok(answer) = self.ask(backend, &mut session, &mut outcome, &classify) else {
            return outcome.finish(OutcomeStatus::BackendFailed);
        };
        let req_type = extract_option(&answer).map_or(RequestType::Unknown, RequestType::from_letter);
        outcome.request_type = Some(req_type);
        outcome.note("request type", req_type.id());
        let Some(template) = self.templates.get(req_type).cloned() else {
            outcome.failures.push(format!("unrecognised request type in answer: {answer}"));
            return outcome.finish(OutcomeStatus::RejectedUnknownType);
        };

        let mut goal = None;
        for _ in 0..=self.config.max_retries {
            let reply = match self.ask(backend, &mut session, &mut outcome, &goal_prompt(request)) {
                Ok(r) => r,
                Err(_) => return outcome.finish(OutcomeStatus::BackendFailed),
            };
            match parse_goal_slots(&reply) {
                Ok(g) => {
                    goal = Some(g);
                    break;
                }
                Err(e @ GoalError::Unparseable { .. }) => {
                    outcome.note("goal error", &e.to_string());
                    outcome.failures.push(e.to_string());
                }
                Err(GoalError::Backend(e)) => {
                    outcome.failures.push(e.to_string());
                    return outcome.finish(OutcomeStatus::BackendFailed);
                }
            }
        }
        let Some(mut goal) = goal else {
            return outcome.finish(OutcomeStatus::PlanFailed);
        };
        goal.tolerance = self.config.tolerance;
        goal.require_terminal_dock = self.config.require_terminal_dock;
        outcome.note("goal", &render_goal_slots(&goal));
        outcome.goal = Some(goal.clone());
        outcome.failures.clear();

        let readings = read_sensors(&self.world, &self.arm, self.clock);
        let description = template.render_description(&self.world);
        let context = context_aware_description(req_type, &readings, &description);
        let mut prompt = build_few_shot_prompt(&context, &template.examples, request);
        let start = PlanStart::from_arm(&self.arm, self.clock);

        for attempt in 1..=self.config.max_retries + 1 {
            outcome.attempts = attempt;
            let reply = match self.ask(backend, &mut session, &mut outcome, &prompt) {
                Ok(r) => r,
                Err(_) => return outcome.finish(OutcomeStatus::BackendFailed),
            };
            let failure = match self.check_plan(&reply, &goal, start) {
                Ok((plan, schedule)) => {
                    let log = execute_at(&plan, &self.world, &self.arm, self.clock, &self.config.durations);
                    let completed = log.outcome == Outcome::Completed;
                    if completed {
                        self.world = log.final_world.clone();
                        self.arm = log.final_state.clone();
                        self.clock = log.final_clock;
                    } else if let Some(fault) = log.fault() {
                        outcome.failures.push(format!("FAULT {fault}"));
                    }
                    outcome.note("plan", serialize_plan(&plan).trim_end());
                    outcome.plan = Some(plan);
                    outcome.schedule = Some(schedule);
                    outcome.event_log = Some(log);
                    let status = if completed {
                        outcome.failures.clear();
                        OutcomeStatus::Fulfilled
                    } else {
                        OutcomeStatus::PlanFailed
                    };
                    return outcome.finish(status);
                }
                Err(failure) => failure,
            };
            let lines = failure.lines();
            outcome.note("rejected", &lines.join("\n"));
            outcome.failures = lines;
            prompt = replan_feedback(&failure);
        }
        outcome.finish(OutcomeStatus::PlanFailed)
    }

    fn check_plan(&self, reply: &str, goal: &Goal, start: PlanStart) -> Result<(ActionPlan, Schedule), PlanFailure> {
        let parsed = parse_plan(reply).map_err(PlanFailure::Parse)?;
        let plan = normalize(&parsed, &self.world, start.room).map_err(PlanFailure::Normalize)?;
        let schedule = validate(&plan, &self.world, goal, &self.config.durations, start)
            .map_err(PlanFailure::Violations)?;
        Ok((plan, schedule))
    }
}
