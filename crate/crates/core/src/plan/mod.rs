//! The timed action-plan language exchanged with the LLM.
//!
//! A plan is a list of lines of the form `[9:56pm] Move to the kitchen`.
//! Parsing is tolerant (surrounding prose is ignored, several phrasings of a
//! verb are accepted); serialization is canonical and byte-stable.

mod clock;
mod normalize;
mod parse;

use std::fmt;

pub use clock::{ClockParseError, ClockTime, MINUTES_PER_DAY};
pub use normalize::{normalize, required_room, NormalizeError};
pub use parse::{parse_action, parse_plan, ParseError};

use crate::world::RoomId;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Action {
    Move {
        dest: RoomId,
    },
    Pick {
        item: String,
        qty: u32,
    },
    /// Fills `container` from the facility stocking `source`; yields one unit
    /// of `source`.
    Fill {
        container: String,
        source: String,
    },
    /// `room` is `None` only when the plan text omitted it; normalization
    /// resolves it to the arm's current room.
    Deliver {
        items: Vec<(String, u32)>,
        room: Option<RoomId>,
    },
    Dock,
    Charge,
    Wait {
        minutes: u32,
    },
}

impl Action {
    pub fn verb(&self) -> &'static str {
        match self {
            Action::Move { .. } => "Move",
            Action::Pick { .. } => "Pick",
            Action::Fill { .. } => "Fill",
            Action::Deliver { .. } => "Deliver",
            Action::Dock => "Dock",
            Action::Charge => "Charge",
            Action::Wait { .. } => "Wait",
        }
    }
}

pub(crate) fn item_list_text(items: &[(String, u32)]) -> String {
    items
        .iter()
        .map(|(item, qty)| format!("{qty} {item}"))
        .collect::<Vec<_>>()
        .join(" and ")
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Move { dest } => write!(f, "Move to the {}", dest.phrase()),
            Action::Pick { item, qty } => write!(f, "Pick {qty} {item}"),
            Action::Fill { container, source } => write!(f, "Fill {container} with {source}"),
            Action::Deliver { items, room } => {
                write!(f, "Deliver {}", item_list_text(items))?;
                match room {
                    Some(room) => write!(f, " to the {}", room.phrase()),
                    None => Ok(()),
                }
            }
            Action::Dock => f.write_str("Dock at the charging port"),
            Action::Charge => f.write_str("Start charging"),
            Action::Wait { minutes } => write!(f, "Wait {minutes} minutes"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TimedAction {
    pub start: ClockTime,
    pub action: Action,
}

impl TimedAction {
    pub fn new(start: ClockTime, action: Action) -> Self {
        TimedAction { start, action }
    }
}

impl fmt::Display for TimedAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.start, self.action)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ActionPlan {
    pub actions: Vec<TimedAction>,
}

impl ActionPlan {
    pub fn new(actions: Vec<TimedAction>) -> Self {
        ActionPlan { actions }
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, TimedAction> {
        self.actions.iter()
    }
}

/// One line per action, each terminated by `\n`; the empty plan is `""`.
pub fn serialize_plan(plan: &ActionPlan) -> String {
    plan.actions.iter().map(|a| format!("{a}\n")).collect()
}
