use std::fmt;

use thiserror::Error;

use super::{Action, ActionPlan, ClockTime, TimedAction};
use crate::world::{normalize_item, RoomId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// 1-based input line.
    pub line_number: usize,
    pub reason: String,
    pub offending_text: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}: {} (`{}`)",
            self.line_number, self.reason, self.offending_text
        )
    }
}

/// Extracts every `[<time>] <action>` line from `text`.
///
/// Lines that do not open with a bracketed time (after optional list markers)
/// are prose and are skipped.
pub fn parse_plan(text: &str) -> Result<ActionPlan, ParseError> {
    let mut actions = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_number = idx + 1;
        let line = strip_list_marker(raw.trim());
        let Some(after_bracket) = line.strip_prefix('[') else {
            continue;
        };
        if !after_bracket.starts_with(|c: char| c.is_ascii_digit()) {
            continue;
        }
        let err = |reason: String| ParseError {
            line_number,
            reason,
            offending_text: raw.trim().to_string(),
        };
        let close = after_bracket
            .find(']')
            .ok_or_else(|| err("unterminated time bracket".into()))?;
        let start = ClockTime::parse(&after_bracket[..close])
            .map_err(|e| err(format!("malformed time: {}", e.reason)))?;
        let phrase = after_bracket[close + 1..]
            .trim_start_matches(|c: char| c.is_whitespace() || matches!(c, '*' | ':' | '-'));
        let action = parse_action(phrase).map_err(err)?;
        actions.push(TimedAction { start, action });
    }
    Ok(ActionPlan { actions })
}

fn strip_list_marker(line: &str) -> &str {
    let line = line.trim_start_matches(|c: char| matches!(c, '-' | '*' | '•' | '+' | '>' | '#'));
    let line = line.trim_start();
    let digits = line.bytes().take_while(u8::is_ascii_digit).count();
    if digits > 0 {
        let rest = &line[digits..];
        if let Some(rest) = rest.strip_prefix('.').or_else(|| rest.strip_prefix(')')) {
            if rest.starts_with(char::is_whitespace) {
                return rest.trim_start().trim_start_matches('*');
            }
        }
    }
    line.trim_start_matches('*')
}

const MOVE_VERBS: &[&str] = &[
    "move", "go", "travel", "head", "navigate", "return", "proceed", "drive",
];
const PICK_VERBS: &[&str] = &["pick", "take", "fetch", "grab", "get", "collect", "retrieve"];
const FILL_VERBS: &[&str] = &["fill", "pour"];
const DELIVER_VERBS: &[&str] = &["deliver", "bring", "hand", "give", "serve"];
const DOCK_VERBS: &[&str] = &["dock"];
const CHARGE_VERBS: &[&str] = &["charge", "start", "begin", "resume"];
const WAIT_VERBS: &[&str] = &["wait", "idle", "pause"];

const UNIT_WORDS: &[&str] = &[
    "pill", "pills", "tablet", "tablets", "unit", "units", "glass", "glasses", "cup", "cups",
    "bottle", "bottles", "piece", "pieces", "dose", "doses",
];
const ITEM_STOPS: &[&str] = &["from", "in", "at", "out", "inside", "for"];

/// Matches a verb in base or third-person form (`move`, `moves`, `fetches`).
fn verb_in(word: &str, set: &[&str]) -> bool {
    set.iter().any(|v| {
        word == *v
            || word.strip_suffix('s') == Some(v)
            || word.strip_suffix("es") == Some(v)
    })
}

fn tokenize(phrase: &str) -> Vec<String> {
    phrase
        .to_lowercase()
        .replace("**", " ")
        .replace(',', " , ")
        .split_whitespace()
        .map(|w| {
            w.trim_end_matches(|c: char| matches!(c, '.' | '!' | ';' | ':'))
                .to_string()
        })
        .filter(|w| !w.is_empty())
        .collect()
}

fn number_word(word: &str) -> Option<u32> {
    if !word.is_empty() && word.len() <= 6 && word.bytes().all(|b| b.is_ascii_digit()) {
        return word.parse().ok();
    }
    Some(match word {
        "a" | "an" | "one" => 1,
        "two" => 2,
        "three" => 3,
        "four" => 4,
        "five" => 5,
        "six" => 6,
        "seven" => 7,
        "eight" => 8,
        "nine" => 9,
        "ten" => 10,
        _ => return None,
    })
}

/// Room named at `words[at..]`, skipping a leading article. Returns the room
/// and the number of words consumed.
fn room_at(words: &[String], at: usize) -> Option<(RoomId, usize)> {
    let mut i = at;
    if words.get(i).map(String::as_str) == Some("the") {
        i += 1;
    }
    if let (Some(a), Some(b)) = (words.get(i), words.get(i + 1)) {
        if let Ok(room) = RoomId::parse(&format!("{a} {b}")) {
            if room == RoomId::LivingRoom {
                return Some((room, i + 2 - at));
            }
        }
    }
    let word = words.get(i)?;
    RoomId::parse(word).ok().map(|room| (room, i + 1 - at))
}

fn mentions_charging_port(words: &[String]) -> bool {
    words.windows(2).any(|w| {
        w[0] == "charging" && matches!(w[1].as_str(), "port" | "station" | "dock")
    }) || words.iter().any(|w| w == "charger")
}

/// Parses one action phrase (the text after the bracketed time).
pub fn parse_action(phrase: &str) -> Result<Action, String> {
    let mut words = tokenize(phrase);
    // Drop a leading subject such as "Z-arm moves ..." or "The robot goes ...".
    if words.first().map(String::as_str) == Some("the") {
        words.remove(0);
    }
    if matches!(
        words.first().map(String::as_str),
        Some("z-arm" | "zarm" | "robot" | "arm")
    ) {
        words.remove(0);
    }
    let Some(verb) = words.first().cloned() else {
        return Err("missing action".into());
    };
    let rest = &words[1..];

    if verb_in(&verb, DOCK_VERBS) || (verb_in(&verb, MOVE_VERBS) && mentions_charging_port(rest)) {
        return Ok(Action::Dock);
    }
    if verb_in(&verb, MOVE_VERBS) {
        return parse_move(rest);
    }
    if verb_in(&verb, CHARGE_VERBS)
        && (verb.starts_with("charg") || rest.iter().any(|w| w.starts_with("charg")))
    {
        return Ok(Action::Charge);
    }
    if verb == "charging" {
        return Ok(Action::Charge);
    }
    if verb_in(&verb, WAIT_VERBS) {
        return parse_wait(rest);
    }
    if verb_in(&verb, FILL_VERBS) {
        return parse_fill(rest);
    }
    if verb_in(&verb, PICK_VERBS) {
        return parse_pick(rest);
    }
    if verb_in(&verb, DELIVER_VERBS) {
        return parse_deliver(rest);
    }
    Err(format!("unrecognized action `{verb}`"))
}

fn parse_move(rest: &[String]) -> Result<Action, String> {
    // "to the kitchen" or "from the living room to the kitchen": the
    // destination is whatever follows a `to`; the origin is discarded.
    for (i, w) in rest.iter().enumerate() {
        if matches!(w.as_str(), "to" | "into" | "towards") {
            if let Some((dest, _)) = room_at(rest, i + 1) {
                return Ok(Action::Move { dest });
            }
        }
    }
    // "Move kitchen"
    if let Some((dest, _)) = room_at(rest, 0) {
        return Ok(Action::Move { dest });
    }
    Err("move without a known destination room".into())
}

fn parse_wait(rest: &[String]) -> Result<Action, String> {
    let mut words = rest;
    if words.first().map(String::as_str) == Some("for") {
        words = &words[1..];
    }
    let minutes = words
        .first()
        .and_then(|w| number_word(w))
        .ok_or("wait without a duration")?;
    if minutes == 0 {
        return Err("wait duration must be positive".into());
    }
    Ok(Action::Wait { minutes })
}

/// `[qty] [unit of] <item words>` up to a stop word.
fn parse_quantified_item(words: &[String]) -> Result<(String, u32), String> {
    let mut i = 0;
    let mut qty = 1;
    if let Some(n) = words.first().and_then(|w| number_word(w)) {
        qty = n;
        i = 1;
    }
    if words.get(i).map(String::as_str) == Some("the") {
        i += 1;
    }
    if words.get(i).is_some_and(|w| UNIT_WORDS.contains(&w.as_str()))
        && words.get(i + 1).map(String::as_str) == Some("of")
    {
        i += 2;
    }
    let item: Vec<&str> = words[i.min(words.len())..]
        .iter()
        .map(String::as_str)
        .take_while(|w| !ITEM_STOPS.contains(w))
        .collect();
    if item.is_empty() {
        return Err("missing item name".into());
    }
    if qty == 0 {
        return Err("quantity must be positive".into());
    }
    Ok((normalize_item(&item.join(" ")), qty))
}

fn parse_pick(rest: &[String]) -> Result<Action, String> {
    let words = match rest.first().map(String::as_str) {
        Some("up") => &rest[1..],
        _ => rest,
    };
    let (item, qty) = parse_quantified_item(words)?;
    Ok(Action::Pick { item, qty })
}

fn parse_fill(rest: &[String]) -> Result<Action, String> {
    let with = rest
        .iter()
        .position(|w| w == "with")
        .ok_or("fill without `with <source>`")?;
    let container: Vec<&str> = rest[..with]
        .iter()
        .map(String::as_str)
        .skip_while(|w| matches!(*w, "a" | "an" | "the" | "up"))
        .collect();
    let container = if container.is_empty() {
        "glass".to_string()
    } else {
        container.join(" ")
    };
    let source: Vec<&str> = rest[with + 1..]
        .iter()
        .map(String::as_str)
        .skip_while(|w| matches!(*w, "the" | "some"))
        .take_while(|w| !ITEM_STOPS.contains(w))
        .collect();
    if source.is_empty() {
        return Err("fill without a source".into());
    }
    Ok(Action::Fill {
        container,
        source: normalize_item(&source.join(" ")),
    })
}

fn parse_deliver(rest: &[String]) -> Result<Action, String> {
    let mut room = None;
    let mut items_end = rest.len();
    for (i, w) in rest.iter().enumerate().rev() {
        if matches!(w.as_str(), "to" | "in" | "into") {
            if let Some((r, _)) = room_at(rest, i + 1) {
                room = Some(r);
                items_end = i;
                break;
            }
        }
    }
    if room.is_none() {
        // "Deliver aspirin to the user": no room, drop the recipient.
        if let Some(i) = rest.iter().position(|w| w == "to") {
            items_end = i;
        }
    }
    let mut items: Vec<(String, u32)> = Vec::new();
    for chunk in rest[..items_end].split(|w| w == "and" || w == ",") {
        if chunk.is_empty() {
            continue;
        }
        let (item, qty) = parse_quantified_item(chunk)?;
        match items.iter_mut().find(|(name, _)| *name == item) {
            Some(existing) => existing.1 += qty,
            None => items.push((item, qty)),
        }
    }
    if items.is_empty() {
        return Err("deliver without items".into());
    }
    Ok(Action::Deliver { items, room })
}
