mod common;

use common::{chat_reply, StubServer};
use lcac::gateway::{complete, GatewayError, GenerationParams, HttpBackend, HttpConfig, Session};
use serde_json::Value;

fn backend(url: &str) -> HttpBackend {
    HttpBackend::new(HttpConfig::new(url, "test-key"))
}

#[test]
fn request_body_carries_exactly_the_wire_fields() {
    let stub = StubServer::start(vec![(200, chat_reply("first")), (200, chat_reply("(A)"))]);
    let mut http = backend(&stub.url);
    let mut session = Session::with_pinned("wire", "You control a z-arm");
    let params = GenerationParams::new(0.2, 128, "gpt-4").unwrap();
    assert_eq!(complete(&mut http, &mut session, "hello", &params).unwrap(), "first");
    assert_eq!(complete(&mut http, &mut session, "classify this", &params).unwrap(), "(A)");
    let captured = stub.finish();

    assert!(captured[0].head.starts_with("POST /v1/chat/completions"));
    assert!(captured[0].head.to_ascii_lowercase().contains("authorization: bearer test-key"));
    let body: Value = serde_json::from_str(&captured[1].body).unwrap();
    let mut keys: Vec<&str> = body.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["max_tokens", "messages", "model", "temperature"]);
    assert_eq!(body["model"], "gpt-4");
    assert_eq!(body["max_tokens"], 128);
    assert!((body["temperature"].as_f64().unwrap() - 0.2).abs() < 1e-12);
    let roles: Vec<&str> = body["messages"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["role"].as_str().unwrap())
        .collect();
    assert_eq!(roles, ["system", "user", "assistant", "user"]);
    assert_eq!(body["messages"][3]["content"], "classify this");
}

#[test]
fn rejected_credentials_are_reported_with_the_status() {
    let stub = StubServer::start(vec![(401, r#"{"error":"bad key"}"#.into())]);
    let mut session = Session::new("s");
    let err = complete(&mut backend(&stub.url), &mut session, "hi", &GenerationParams::default()).unwrap_err();
    stub.finish();
    assert!(matches!(err, GatewayError::Credential { status: 401, ref body } if body.contains("bad key")));
    assert!(session.turns().is_empty());
}

#[test]
fn empty_choices_are_a_malformed_body() {
    let stub = StubServer::start(vec![(200, r#"{"choices":[]}"#.into())]);
    let err = complete(&mut backend(&stub.url), &mut Session::new("s"), "hi", &GenerationParams::default())
        .unwrap_err();
    stub.finish();
    assert!(matches!(err, GatewayError::MalformedBody { .. }), "{err}");
}

#[test]
fn server_errors_carry_status_and_payload() {
    let stub = StubServer::start(vec![(500, "overloaded".into())]);
    let err = complete(&mut backend(&stub.url), &mut Session::new("s"), "hi", &GenerationParams::default())
        .unwrap_err();
    stub.finish();
    assert_eq!(err, GatewayError::Status { status: 500, body: "overloaded".into() });
}

#[test]
fn unreachable_endpoint_is_a_transport_error() {
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let url = format!("http://127.0.0.1:{port}/v1/chat/completions");
    let err = complete(&mut backend(&url), &mut Session::new("s"), "hi", &GenerationParams::default()).unwrap_err();
    assert!(matches!(err, GatewayError::Transport(_)), "{err}");
}

#[test]
fn oversized_prompt_never_reaches_the_wire() {
    let mut config = HttpConfig::new("http://127.0.0.1:9/unused", "k");
    config.input_token_limit = 3;
    let err = complete(
        &mut HttpBackend::new(config),
        &mut Session::new("s"),
        "a prompt that is far too long",
        &GenerationParams::default(),
    )
    .unwrap_err();
    assert!(matches!(err, GatewayError::TokenLimitExceeded { budget: 3, .. }));
}
