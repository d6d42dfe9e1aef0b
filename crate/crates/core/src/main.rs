use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lcac::agent::OutcomeStatus;
use lcac::plan::{normalize, parse_plan};
use lcac::prompt::parse_goal_slots;
use lcac::scenario::{all_fulfilled, request_dir_name, write_outputs, Scenario};
use lcac::validate::{validate, PlanStart};

const EXIT_DOMAIN: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "lcac", version, about = "Context-aware z-arm agent driven by an LLM")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every request of a scenario file
    Run {
        #[arg(long)]
        scenario: PathBuf,
        /// Directory for per-request transcript, plan and event files
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a plan file against a scenario's world and a goal
    Validate {
        plan: PathBuf,
        /// Scenario file supplying the world
        #[arg(long)]
        world: PathBuf,
        /// Goal slot line, e.g. "item=aspirin; qty=2; companion=water; time=10pm; room=living room"
        #[arg(long)]
        goal: String,
    },
    /// Read requests interactively; `:quit` exits
    Repl {
        /// Scenario supplying world, templates and script; without one the
        /// HTTP backend is configured from LCAC_API_URL, LCAC_API_KEY, LCAC_MODEL
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
}

fn input_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_INPUT)
}

fn run(scenario: PathBuf, out: Option<PathBuf>) -> ExitCode {
    let scenario = match Scenario::load(&scenario) {
        Ok(s) => s,
        Err(e) => return input_error(e),
    };
    if scenario.requests.is_empty() {
        return input_error("scenario has no requests");
    }
    let mut backend = match scenario.backend() {
        Ok(b) => b,
        Err(e) => return input_error(e),
    };
    let outcomes = scenario.run(&mut *backend);
    for (i, outcome) in outcomes.iter().enumerate() {
        println!("{} {} attempts={}", request_dir_name(i), outcome.status, outcome.attempts);
        for failure in &outcome.failures {
            println!("  {failure}");
        }
    }
    if let Some(dir) = out {
        if let Err(e) = write_outputs(&outcomes, &dir) {
            return input_error(format!("{}: {e}", dir.display()));
        }
    }
    if all_fulfilled(&outcomes) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_DOMAIN)
    }
}

fn validate_file(plan: PathBuf, world: PathBuf, goal: String) -> ExitCode {
    let text = match fs::read_to_string(&plan) {
        Ok(t) => t,
        Err(e) => return input_error(format!("{}: {e}", plan.display())),
    };
    let scenario = match Scenario::load(&world) {
        Ok(s) => s,
        Err(e) => return input_error(e),
    };
    let mut goal = match parse_goal_slots(&goal) {
        Ok(g) => g,
        Err(e) => return input_error(e),
    };
    goal.tolerance = scenario.config.tolerance;
    goal.require_terminal_dock = scenario.config.require_terminal_dock;
    let parsed = match parse_plan(&text) {
        Ok(p) => p,
        Err(e) => return input_error(e),
    };
    let start = PlanStart::from_arm(&scenario.arm, scenario.world.clock_start());
    let plan = match normalize(&parsed, &scenario.world, start.room) {
        Ok(p) => p,
        Err(e) => {
            println!("PLAN ERROR {e}");
            return ExitCode::from(EXIT_DOMAIN);
        }
    };
    match validate(&plan, &scenario.world, &goal, &scenario.config.durations, start) {
        Ok(schedule) => {
            print!("{}", schedule.render());
            ExitCode::SUCCESS
        }
        Err(violations) => {
            for v in violations {
                println!("{v}");
            }
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}

fn repl(scenario: Option<PathBuf>) -> ExitCode {
    let scenario = match scenario {
        Some(path) => Scenario::load(&path),
        None => Scenario::parse("{}"),
    };
    let scenario = match scenario {
        Ok(s) => s,
        Err(e) => return input_error(e),
    };
    let mut backend = match scenario.backend() {
        Ok(b) => b,
        Err(e) => return input_error(e),
    };
    let mut agent = scenario.agent();
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    loop {
        print!("> ");
        let _ = io::stdout().flush();
        let line = match lines.next() {
            Some(Ok(line)) => line,
            Some(Err(e)) => return input_error(e),
            None => return ExitCode::SUCCESS,
        };
        let request = line.trim();
        if request.is_empty() {
            continue;
        }
        if request == ":quit" {
            return ExitCode::SUCCESS;
        }
        let outcome = agent.handle_request(&mut *backend, request);
        print!("{}", outcome.plan_text());
        print!("{}", outcome.events_text());
        println!("status: {}", outcome.status);
        for failure in &outcome.failures {
            println!("  {failure}");
        }
        if outcome.status == OutcomeStatus::BackendFailed {
            print!("{}", outcome.transcript);
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match cli.command {
        Command::Run { scenario, out } => run(scenario, out),
        Command::Validate { plan, world, goal } => validate_file(plan, world, goal),
        Command::Repl { scenario } => repl(scenario),
    }
}
