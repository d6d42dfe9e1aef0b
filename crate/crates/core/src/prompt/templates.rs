use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::RequestType;
use crate::world::{Stock, WorldModel};

/// Replaced by [`describe_world`] when a description is rendered.
pub const WORLD_PLACEHOLDER: &str = "{world}";

/// Task description and worked examples for one request type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PromptTemplate {
    pub description: String,
    #[serde(default)]
    pub examples: String,
}

impl PromptTemplate {
    pub fn new(description: impl Into<String>, examples: impl Into<String>) -> Self {
        PromptTemplate {
            description: description.into(),
            examples: examples.into(),
        }
    }

    /// The description with the apartment substituted in.
    pub fn render_description(&self, world: &WorldModel) -> String {
        self.description.replace(WORLD_PLACEHOLDER, &describe_world(world))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateRepository {
    entries: BTreeMap<RequestType, PromptTemplate>,
}

impl TemplateRepository {
    /// Defaults, with any `overrides` replacing them type by type.
    pub fn with_overrides(overrides: BTreeMap<RequestType, PromptTemplate>) -> Self {
        let mut repo = TemplateRepository::default();
        for (req_type, template) in overrides {
            if req_type != RequestType::Unknown {
                repo.entries.insert(req_type, template);
            }
        }
        repo
    }

    pub fn get(&self, req_type: RequestType) -> Option<&PromptTemplate> {
        self.entries.get(&req_type)
    }
}

const PLAN_RULES: &str = "Write the action plan with one action per line in the form \
[h:mmam] Action, where the time is when the action starts. \
Use only these actions: Move to the <room>, Pick <n> <item>, Fill glass with water, \
Deliver <n> <item> and <n> <item> to the <room>, Dock at the charging port, Start charging. \
Picking, filling and delivering take 1 minute each and docking takes 2 minutes. \
The z-arm must return to the charging port and start charging once the task is complete";

const WATER_EXAMPLE: &str = "\n**********\n\
\n Question: I want a glass of water at 8pm in the bedroom\n Answer: \n\
[7:55pm] Move to the kitchen\n\
[7:57pm] Fill glass with water\n\
[7:58pm] Move to the bedroom\n\
[8:00pm] Deliver 1 water to the bedroom\n\
[8:01pm] Move to the living room\n\
[8:03pm] Dock at the charging port\n\
[8:05pm] Start charging\n\
\n**********\n";

impl Default for TemplateRepository {
    fn default() -> Self {
        let describe = |role: &str| format!("You are {role}. {WORLD_PLACEHOLDER} {PLAN_RULES}");
        let entries = BTreeMap::from([
            (
                RequestType::TakeMedicine,
                PromptTemplate::new(
                    describe("the controller of a mobile z-arm that helps the user take medicine"),
                    WATER_EXAMPLE,
                ),
            ),
            (
                RequestType::ApplianceControl,
                PromptTemplate::new(
                    describe("the controller of a mobile z-arm that operates appliances for the user"),
                    WATER_EXAMPLE,
                ),
            ),
            (
                RequestType::FoodBeverage,
                PromptTemplate::new(
                    describe("the controller of a mobile z-arm that serves food and beverages to the user"),
                    WATER_EXAMPLE,
                ),
            ),
        ]);
        TemplateRepository { entries }
    }
}

fn join_phrases(parts: &[String]) -> String {
    match parts {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{}, and {}", init.join(", "), last),
    }
}

/// Plain-language account of the rooms, facilities, travel times and the
/// arm's capacity.
pub fn describe_world(world: &WorldModel) -> String {
    let rooms: Vec<String> = world.rooms().map(|r| format!("a {}", r.phrase())).collect();
    let mut out = format!("The apartment consists of {}.", join_phrases(&rooms));
    for facility in world.facilities() {
        let stock: Vec<String> = facility
            .stock
            .iter()
            .map(|(item, stock)| match stock {
                Stock::Finite(n) => format!("{n} {item}"),
                Stock::Unbounded(_) => format!("unlimited {item}"),
            })
            .collect();
        let holding = if stock.is_empty() {
            String::new()
        } else {
            format!(" holding {}", join_phrases(&stock))
        };
        out.push_str(&format!(
            " The {} has a {}{}.",
            facility.location.phrase(),
            facility.kind.phrase(),
            holding
        ));
    }
    let rooms: Vec<_> = world.rooms().collect();
    let mut times = Vec::new();
    for (i, &a) in rooms.iter().enumerate() {
        for &b in &rooms[i + 1..] {
            times.push((a, b, world.travel_time(a, b).unwrap_or(0)));
        }
    }
    match times.first().map(|t| t.2) {
        Some(m) if times.iter().all(|t| t.2 == m) => {
            out.push_str(&format!(
                " It takes the z-arm {m} minute{} to travel between any two rooms.",
                if m == 1 { "" } else { "s" }
            ));
        }
        Some(_) => {
            for (a, b, m) in times {
                out.push_str(&format!(
                    " Travel between the {} and the {} takes {m} minutes.",
                    a.phrase(),
                    b.phrase()
                ));
            }
        }
        None => {}
    }
    out.push_str(&format!(
        " The z-arm can carry at most {} kinds of items at once.",
        world.arm_capacity()
    ));
    out
}
