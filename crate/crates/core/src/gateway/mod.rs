//! Uniform completion interface over LLM backends, with session memory that
//! re-appends past turns under a token budget.

mod http;
mod scripted;
mod session;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use http::{build_request_body, extract_content, HttpBackend, HttpConfig};
pub use scripted::{FixtureEntry, Matcher, ScriptedBackend};
pub use session::{render_history, Session, Turn};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GatewayError {
    #[error("prompt is empty")]
    EmptyPrompt,
    #[error("input of {measured} tokens exceeds the budget of {budget}")]
    TokenLimitExceeded { budget: usize, measured: usize },
    #[error("token budget {budget} is smaller than the pinned message ({pinned} tokens)")]
    BudgetTooSmall { budget: usize, pinned: usize },
    #[error("backend unreachable: {0}")]
    Transport(String),
    #[error("credential rejected (HTTP {status}): {body}")]
    Credential { status: u16, body: String },
    #[error("HTTP {status}: {body}")]
    Status { status: u16, body: String },
    #[error("malformed response ({reason}): {raw}")]
    MalformedBody { reason: String, raw: String },
    #[error("script exhausted at step {step}")]
    ScriptExhausted { step: usize },
    #[error("no fixture matches step {step}: {prompt_head}")]
    NoFixtureMatch { step: usize, prompt_head: String },
    #[error("missing configuration: {0}")]
    Config(String),
    #[error("invalid generation parameter: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::System => "system",
            Role::User => "user",
            Role::Assistant => "assistant",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn system(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::System,
            content: content.into(),
        }
    }

    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::User,
            content: content.into(),
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatMessage {
            role: Role::Assistant,
            content: content.into(),
        }
    }

    pub fn tokens(&self) -> usize {
        count_tokens(&self.content)
    }
}

pub const DEFAULT_MODEL: &str = "gpt-4";
pub const DEFAULT_TEMPERATURE: f64 = 0.2;
pub const DEFAULT_MAX_OUTPUT_TOKENS: u32 = 512;

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationParams {
    temperature: f64,
    max_output_tokens: u32,
    model_name: String,
}

impl GenerationParams {
    pub fn new(
        temperature: f64,
        max_output_tokens: u32,
        model_name: impl Into<String>,
    ) -> Result<Self, GatewayError> {
        if !(0.0..=2.0).contains(&temperature) {
            return Err(GatewayError::InvalidParams(format!(
                "temperature {temperature} outside [0, 2]"
            )));
        }
        if max_output_tokens == 0 {
            return Err(GatewayError::InvalidParams(
                "max_output_tokens must be positive".into(),
            ));
        }
        let model_name = model_name.into();
        if model_name.trim().is_empty() {
            return Err(GatewayError::InvalidParams("model name is empty".into()));
        }
        Ok(GenerationParams {
            temperature,
            max_output_tokens,
            model_name,
        })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn max_output_tokens(&self) -> u32 {
        self.max_output_tokens
    }

    pub fn model_name(&self) -> &str {
        &self.model_name
    }
}

impl Default for GenerationParams {
    fn default() -> Self {
        GenerationParams::new(DEFAULT_TEMPERATURE, DEFAULT_MAX_OUTPUT_TOKENS, DEFAULT_MODEL)
            .expect("defaults are valid")
    }
}

/// A chat-completion backend.
pub trait Backend {
    /// Largest input (history plus prompt) the backend accepts, in
    /// [`count_tokens`] units.
    fn input_token_limit(&self) -> usize;

    /// Returns the assistant reply to `messages`.
    fn chat(&mut self, messages: &[ChatMessage], params: &GenerationParams) -> Result<String, GatewayError>;
}

impl<B: Backend + ?Sized> Backend for Box<B> {
    fn input_token_limit(&self) -> usize {
        (**self).input_token_limit()
    }

    fn chat(&mut self, messages: &[ChatMessage], params: &GenerationParams) -> Result<String, GatewayError> {
        (**self).chat(messages, params)
    }
}

/// Approximate token count: one token per four characters, rounded up.
///
/// Real tokenizers are model-specific; this gauge is deterministic and
/// monotone under concatenation, which is all budgeting needs.
pub fn count_tokens(text: &str) -> usize {
    text.chars().count().div_ceil(4)
}

/// Sends `prompt` with the session's history, within the backend's own input
/// limit. See [`complete_within`].
pub fn complete(
    backend: &mut dyn Backend,
    session: &mut Session,
    prompt: &str,
    params: &GenerationParams,
) -> Result<String, GatewayError> {
    let budget = backend.input_token_limit();
    complete_within(backend, session, prompt, params, budget)
}

/// Renders the history into whatever budget the prompt leaves, sends it, and
/// on success appends the user/assistant pair. On any error the session is
/// left untouched.
pub fn complete_within(
    backend: &mut dyn Backend,
    session: &mut Session,
    prompt: &str,
    params: &GenerationParams,
    budget: usize,
) -> Result<String, GatewayError> {
    if prompt.trim().is_empty() {
        return Err(GatewayError::EmptyPrompt);
    }
    let budget = budget.min(backend.input_token_limit());
    let prompt_tokens = count_tokens(prompt);
    let pinned_tokens = session.pinned().map_or(0, ChatMessage::tokens);
    if prompt_tokens + pinned_tokens > budget {
        return Err(GatewayError::TokenLimitExceeded {
            budget,
            measured: prompt_tokens + pinned_tokens,
        });
    }
    let mut messages = render_history(session, budget - prompt_tokens)?;
    messages.push(ChatMessage::user(prompt));
    let reply = backend.chat(&messages, params)?;
    if reply.trim().is_empty() {
        return Err(GatewayError::MalformedBody {
            reason: "empty assistant content".into(),
            raw: reply,
        });
    }
    session.push_turn(prompt, &reply);
    Ok(reply)
}
