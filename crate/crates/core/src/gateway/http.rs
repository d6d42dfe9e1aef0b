use std::time::Duration;

use serde_json::{json, Value};

use super::{Backend, ChatMessage, GatewayError, GenerationParams};

pub const ENV_API_URL: &str = "LCAC_API_URL";
pub const ENV_API_KEY: &str = "LCAC_API_KEY";
pub const ENV_MODEL: &str = "LCAC_MODEL";

pub const DEFAULT_HTTP_INPUT_LIMIT: usize = 8_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpConfig {
    /// Full chat-completions endpoint, e.g. `https://host/v1/chat/completions`.
    pub url: String,
    pub api_key: String,
    pub model: Option<String>,
    pub input_token_limit: usize,
    pub timeout: Duration,
}

impl HttpConfig {
    pub fn new(url: impl Into<String>, api_key: impl Into<String>) -> Self {
        HttpConfig {
            url: url.into(),
            api_key: api_key.into(),
            model: None,
            input_token_limit: DEFAULT_HTTP_INPUT_LIMIT,
            timeout: Duration::from_secs(60),
        }
    }

    pub fn from_env() -> Result<Self, GatewayError> {
        let var = |name: &str| std::env::var(name).ok().filter(|v| !v.trim().is_empty());
        let url = var(ENV_API_URL).ok_or_else(|| GatewayError::Config(format!("{ENV_API_URL} is not set")))?;
        let api_key = var(ENV_API_KEY).ok_or_else(|| GatewayError::Config(format!("{ENV_API_KEY} is not set")))?;
        let mut config = HttpConfig::new(url, api_key);
        config.model = var(ENV_MODEL);
        Ok(config)
    }
}

/// OpenAI-style chat-completions client.
pub struct HttpBackend {
    config: HttpConfig,
    agent: ureq::Agent,
}

impl HttpBackend {
    pub fn new(config: HttpConfig) -> Self {
        let agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_global(Some(config.timeout))
            .build()
            .new_agent();
        HttpBackend { config, agent }
    }

    pub fn from_env() -> Result<Self, GatewayError> {
        HttpConfig::from_env().map(HttpBackend::new)
    }

    fn send_once(&self, body: &Value) -> Result<(u16, String), ureq::Error> {
        let mut response = self
            .agent
            .post(&self.config.url)
            .header("Authorization", &format!("Bearer {}", self.config.api_key))
            .send_json(body)?;
        let status = response.status().as_u16();
        let text = response.body_mut().read_to_string()?;
        Ok((status, text))
    }
}

/// The request body: exactly `model`, `messages`, `temperature` and
/// `max_tokens`.
pub fn build_request_body(model: &str, messages: &[ChatMessage], params: &GenerationParams) -> Value {
    json!({
        "model": model,
        "messages": messages,
        "temperature": params.temperature(),
        "max_tokens": params.max_output_tokens(),
    })
}

/// Pulls `choices[0].message.content` out of a response body.
pub fn extract_content(raw: &str) -> Result<String, GatewayError> {
    let malformed = |reason: &str| GatewayError::MalformedBody {
        reason: reason.to_string(),
        raw: raw.chars().take(500).collect(),
    };
    let value: Value = serde_json::from_str(raw).map_err(|e| malformed(&format!("not JSON: {e}")))?;
    let choices = value
        .get("choices")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("no choices array"))?;
    let first = choices.first().ok_or_else(|| malformed("empty choices"))?;
    let content = first
        .pointer("/message/content")
        .and_then(Value::as_str)
        .ok_or_else(|| malformed("choice has no message content"))?;
    if content.trim().is_empty() {
        return Err(malformed("empty assistant content"));
    }
    Ok(content.to_string())
}

impl Backend for HttpBackend {
    fn input_token_limit(&self) -> usize {
        self.config.input_token_limit
    }

    fn chat(&mut self, messages: &[ChatMessage], params: &GenerationParams) -> Result<String, GatewayError> {
        let model = self.config.model.as_deref().unwrap_or(params.model_name());
        let body = build_request_body(model, messages, params);
        // One retry on transport failure; HTTP statuses are answers, not retried.
        let (status, text) = match self.send_once(&body) {
            Ok(reply) => reply,
            Err(_) => self
                .send_once(&body)
                .map_err(|e| GatewayError::Transport(e.to_string()))?,
        };
        match status {
            200..=299 => extract_content(&text),
            401 | 403 => Err(GatewayError::Credential { status, body: text }),
            _ => Err(GatewayError::Status { status, body: text }),
        }
    }
}
