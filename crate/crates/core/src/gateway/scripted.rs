use serde::{Deserialize, Serialize};

use super::{Backend, ChatMessage, GatewayError, GenerationParams, Role};

/// How a fixture entry recognises the prompt it answers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Matcher {
    Exact(String),
    Contains(String),
    /// Zero-based index of the backend call.
    Step(usize),
}

impl Matcher {
    fn matches(&self, step: usize, prompt: &str) -> bool {
        match self {
            Matcher::Exact(text) => prompt == text,
            Matcher::Contains(needle) => prompt.contains(needle.as_str()),
            Matcher::Step(i) => *i == step,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureEntry {
    #[serde(rename = "match")]
    pub matcher: Matcher,
    pub response: String,
}

impl FixtureEntry {
    pub fn new(matcher: Matcher, response: impl Into<String>) -> Self {
        FixtureEntry {
            matcher,
            response: response.into(),
        }
    }
}

pub const SCRIPTED_INPUT_LIMIT: usize = 32_000;

/// Replays canned responses. Each call consumes the first unused entry that
/// matches the latest user message; generation parameters are ignored.
#[derive(Debug, Clone)]
pub struct ScriptedBackend {
    entries: Vec<FixtureEntry>,
    used: Vec<bool>,
    step: usize,
    input_limit: usize,
}

impl ScriptedBackend {
    pub fn new(entries: Vec<FixtureEntry>) -> Self {
        let used = vec![false; entries.len()];
        ScriptedBackend {
            entries,
            used,
            step: 0,
            input_limit: SCRIPTED_INPUT_LIMIT,
        }
    }

    pub fn with_input_token_limit(mut self, limit: usize) -> Self {
        self.input_limit = limit;
        self
    }

    /// Number of entries consumed so far.
    pub fn consumed(&self) -> usize {
        self.used.iter().filter(|u| **u).count()
    }
}

impl Backend for ScriptedBackend {
    fn input_token_limit(&self) -> usize {
        self.input_limit
    }

    fn chat(&mut self, messages: &[ChatMessage], _params: &GenerationParams) -> Result<String, GatewayError> {
        let prompt = messages
            .iter()
            .rev()
            .find(|m| m.role == Role::User)
            .map_or("", |m| m.content.as_str());
        let step = self.step;
        if self.used.iter().all(|u| *u) {
            return Err(GatewayError::ScriptExhausted { step });
        }
        let hit = self
            .entries
            .iter()
            .zip(&self.used)
            .position(|(entry, used)| !used && entry.matcher.matches(step, prompt));
        match hit {
            Some(i) => {
                self.used[i] = true;
                self.step += 1;
                Ok(self.entries[i].response.clone())
            }
            None => Err(GatewayError::NoFixtureMatch {
                step,
                prompt_head: prompt.chars().take(80).collect(),
            }),
        }
    }
}
