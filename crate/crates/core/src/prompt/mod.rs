//! Prompt construction: the fixed question-answering scaffolds, request
//! classification, template matching and context enhancement.

mod goal;
mod news;
mod templates;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::gateway::{complete, Backend, GatewayError, GenerationParams, Session};
use crate::world::SensorReading;

pub use goal::{extract_goal, goal_prompt, parse_goal_slots, render_goal_slots, GoalError};
pub use news::{
    news_fixture_prompts, parse_category, parse_recommendation, NEWS_CATEGORIES, NEWS_TITLE, PAST_TITLES,
};
pub use templates::{describe_world, PromptTemplate, TemplateRepository, WORLD_PLACEHOLDER};

/// Description of the one-shot request classifier.
pub const DESC_REQ_TYPE: &str = concat!(
    "Read the user's request in the Question and categorize it",
    "using one of following types.\n",
    "(A) take medicine, (B) appliance  control, (C) food & ",
    "beverage...\n Please answer the index of option only.",
);

/// The single worked example shown to the classifier. The answer label is
/// kept exactly as published.
pub const EXAMP_REQ_TYPE: &str = concat!(
    "\n**********\n",
    "\n Question: turn on the heater when the temperature is below",
    "freezing\n Answer: (C) \n",
    "\n**********\n",
);

/// Description, examples and question substituted into the few-shot
/// scaffold.
pub fn build_few_shot_prompt(description: &str, examples: &str, question: &str) -> String {
    format!(
        "Please answer the question by considering descriptions and examples below. \n\n\
         Descriptions: {description}. \n Examples: {examples}. \n \n Question: {question}. \n Answer: "
    )
}

/// The same scaffold without an Examples section.
pub fn build_zero_shot_prompt(description: &str, question: &str) -> String {
    format!(
        "Please answer the question by considering descriptions below. \n\n\
         Descriptions: {description}. \n \n Question: {question}. \n Answer: "
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RequestType {
    #[serde(rename = "A_take_medicine")]
    TakeMedicine,
    #[serde(rename = "B_appliance_control")]
    ApplianceControl,
    #[serde(rename = "C_food_beverage")]
    FoodBeverage,
    #[serde(rename = "unknown")]
    Unknown,
}

impl RequestType {
    pub const KNOWN: [RequestType; 3] = [
        RequestType::TakeMedicine,
        RequestType::ApplianceControl,
        RequestType::FoodBeverage,
    ];

    pub fn from_letter(letter: char) -> Self {
        match letter.to_ascii_uppercase() {
            'A' => RequestType::TakeMedicine,
            'B' => RequestType::ApplianceControl,
            'C' => RequestType::FoodBeverage,
            _ => RequestType::Unknown,
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            RequestType::TakeMedicine => "A_take_medicine",
            RequestType::ApplianceControl => "B_appliance_control",
            RequestType::FoodBeverage => "C_food_beverage",
            RequestType::Unknown => "unknown",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RequestType::TakeMedicine => "take medicine",
            RequestType::ApplianceControl => "appliance control",
            RequestType::FoodBeverage => "food & beverage",
            RequestType::Unknown => "unknown",
        }
    }
}

impl fmt::Display for RequestType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

const OPTION_LETTERS: &[char] = &['A', 'B', 'C'];

/// The option letter in a classifier answer.
///
/// Accepts a bare letter, a parenthesised letter, or either followed by the
/// option label. A parenthesised letter always counts; a standalone capital
/// counts anywhere; a standalone lowercase letter counts only as the first
/// word, since mid-sentence "a" is the article. Two different letters make
/// the answer ambiguous and yield `None`.
pub fn extract_option(answer: &str) -> Option<char> {
    let chars: Vec<char> = answer.chars().collect();
    let first_word = chars.iter().position(|c| !c.is_whitespace());
    let mut found: Option<char> = None;
    for (i, &c) in chars.iter().enumerate() {
        let upper = c.to_ascii_uppercase();
        if !OPTION_LETTERS.contains(&upper) {
            continue;
        }
        let before = i.checked_sub(1).map(|j| chars[j]);
        let after = chars.get(i + 1).copied();
        let parenthesised = before == Some('(') && after == Some(')');
        let standalone = before.is_none_or(|b| !b.is_alphanumeric() && b != '\'')
            && after.is_none_or(|a| !a.is_alphanumeric() && a != '\'');
        let counts = parenthesised || (standalone && (c.is_ascii_uppercase() || Some(i) == first_word));
        if !counts {
            continue;
        }
        match found {
            None => found = Some(upper),
            Some(prev) if prev != upper => return None,
            Some(_) => {}
        }
    }
    found
}

/// Asks the backend to classify `request` with the one-shot classifier
/// prompt.
pub fn classify_request(
    backend: &mut dyn Backend,
    session: &mut Session,
    request: &str,
    params: &GenerationParams,
) -> Result<(RequestType, String), GatewayError> {
    let prompt = build_few_shot_prompt(DESC_REQ_TYPE, EXAMP_REQ_TYPE, request);
    let answer = complete(backend, session, &prompt, params)?;
    let req_type = extract_option(&answer).map_or(RequestType::Unknown, RequestType::from_letter);
    Ok((req_type, answer))
}

/// One context line per reading.
pub fn render_reading(reading: &SensorReading) -> String {
    let unit = if reading.unit.is_empty() {
        String::new()
    } else {
        format!(" {}", reading.unit)
    };
    format!(
        "{}/{}: {}{} (t={})",
        reading.location, reading.sensor_id, reading.value, unit, reading.timestamp
    )
}

/// `base` followed by a "Current context:" block of sensor readings, in the
/// order given. Unknown requests and empty readings leave `base` as is.
pub fn context_aware_description(req_type: RequestType, readings: &[SensorReading], base: &str) -> String {
    if req_type == RequestType::Unknown || readings.is_empty() {
        return base.to_string();
    }
    let mut out = String::from(base);
    out.push_str("\nCurrent context:");
    for reading in readings {
        out.push('\n');
        out.push_str(&render_reading(reading));
    }
    out
}
