use thiserror::Error;

use super::build_few_shot_prompt;
use crate::gateway::{complete, Backend, GatewayError, GenerationParams, Session};
use crate::plan::ClockTime;
use crate::validate::{Goal, DEFAULT_TOLERANCE};
use crate::world::{normalize_item, RoomId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GoalError {
    #[error(transparent)]
    Backend(#[from] GatewayError),
    #[error("cannot read goal ({reason}) from reply: {raw}")]
    Unparseable { reason: String, raw: String },
}

const GOAL_DESCRIPTION: &str = "Read the user's request in the Question and fill in the slots \
item=<item>; qty=<number>; companion=<second item or none>; time=<h:mmam or h:mmpm>; room=<room>. \
The item is what the user asks for, qty is how many units of it, the companion is a second item \
delivered with it (one unit) and the time and room are when and where the user wants them. \
Please answer the slot line only";

const GOAL_EXAMPLES: &str = "\n**********\n\
\n Question: I want a glass of water at 8pm in the bedroom\n \
Answer: item=water; qty=1; companion=none; time=8:00pm; room=bedroom\n\
\n**********\n";

/// The few-shot prompt asking for the slot line of `request`.
pub fn goal_prompt(request: &str) -> String {
    build_few_shot_prompt(GOAL_DESCRIPTION, GOAL_EXAMPLES, request)
}

/// Asks the backend for the goal slots of `request` and parses the reply.
pub fn extract_goal(
    backend: &mut dyn Backend,
    session: &mut Session,
    request: &str,
    params: &GenerationParams,
) -> Result<Goal, GoalError> {
    let reply = complete(backend, session, &goal_prompt(request), params)?;
    parse_goal_slots(&reply)
}

/// `item=..; qty=..; companion=..; time=..; room=..` for a goal whose
/// deliveries are one item plus at most one single-unit companion.
pub fn render_goal_slots(goal: &Goal) -> String {
    let (item, qty) = goal
        .deliveries
        .first()
        .map_or(("none", 0), |(i, q)| (i.as_str(), *q));
    let companion = goal.deliveries.get(1).map_or("none", |(i, _)| i.as_str());
    format!(
        "item={item}; qty={qty}; companion={companion}; time={}; room={}",
        goal.target_time,
        goal.destination.phrase()
    )
}

/// Reads the first line of `reply` that carries an `item=` slot. Keys may
/// come in any order and in any case; `companion` may be omitted or `none`.
pub fn parse_goal_slots(reply: &str) -> Result<Goal, GoalError> {
    let fail = |reason: &str| GoalError::Unparseable {
        reason: reason.to_string(),
        raw: reply.to_string(),
    };
    let line = reply
        .lines()
        .find(|l| l.to_ascii_lowercase().contains("item="))
        .ok_or_else(|| fail("no item= slot"))?;
    let mut item = None;
    let mut qty = None;
    let mut companion = None;
    let mut time = None;
    let mut room = None;
    for field in line.split(';') {
        let Some((key, value)) = field.split_once('=') else {
            continue;
        };
        let key = key.trim().trim_start_matches(['`', '*', '-']).trim().to_ascii_lowercase();
        let value = value.trim().trim_end_matches(['`', '*', '.']).trim();
        match key.as_str() {
            "item" => item = Some(value),
            "qty" | "quantity" => qty = Some(value),
            "companion" => companion = Some(value),
            "time" => time = Some(value),
            "room" => room = Some(value),
            _ => {}
        }
    }
    let item = normalize_item(item.ok_or_else(|| fail("missing item"))?);
    if item.is_empty() || item == "none" {
        return Err(fail("empty item"));
    }
    let qty: u32 = qty
        .ok_or_else(|| fail("missing qty"))?
        .parse()
        .map_err(|_| fail("qty is not a number"))?;
    if qty == 0 {
        return Err(fail("qty must be positive"));
    }
    let time = ClockTime::parse(time.ok_or_else(|| fail("missing time"))?)
        .map_err(|e| fail(&format!("bad time: {e}")))?;
    let room = RoomId::parse(room.ok_or_else(|| fail("missing room"))?)
        .map_err(|e| fail(&format!("bad room: {e}")))?;
    let mut deliveries = vec![(item.clone(), qty)];
    if let Some(companion) = companion.map(normalize_item) {
        if !companion.is_empty() && companion != "none" {
            if companion == item {
                deliveries[0].1 += 1;
            } else {
                deliveries.push((companion, 1));
            }
        }
    }
    Ok(Goal {
        deliveries,
        destination: room,
        target_time: time,
        tolerance: DEFAULT_TOLERANCE,
        require_terminal_dock: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::{FixtureEntry, Matcher, ScriptedBackend};
    use proptest::prelude::*;

    fn medication_goal() -> Goal {
        Goal {
            deliveries: vec![("aspirin".into(), 2), ("water".into(), 1)],
            destination: RoomId::LivingRoom,
            target_time: ClockTime::hm(22, 0).unwrap(),
            tolerance: 5,
            require_terminal_dock: true,
        }
    }

    #[test]
    fn medication_reply() {
        let goal = parse_goal_slots("item=aspirin; qty=2; companion=water; time=10:00pm; room=living room").unwrap();
        assert_eq!(goal, medication_goal());
    }

    #[test]
    fn tolerant_reply_forms() {
        let goal = parse_goal_slots(
            "Sure, here are the slots:\n`Room=Living Room; TIME=10pm; qty=2; item=Aspirin; companion=water.`",
        )
        .unwrap();
        assert_eq!(goal, medication_goal());
        let alone = parse_goal_slots("item=water; qty=1; time=8pm; room=bedroom").unwrap();
        assert_eq!(alone.deliveries, vec![("water".to_string(), 1)]);
    }

    #[test]
    fn missing_or_bad_slots_are_errors() {
        for bad in [
            "item=aspirin; qty=2; companion=water; room=living room",
            "item=aspirin; qty=two; time=10pm; room=living room",
            "item=aspirin; qty=0; time=10pm; room=living room",
            "item=aspirin; qty=2; time=10pm; room=garage",
            "I will bring the aspirin",
            "",
        ] {
            assert!(matches!(parse_goal_slots(bad), Err(GoalError::Unparseable { .. })), "{bad}");
        }
    }

    #[test]
    fn extraction_through_the_backend() {
        let mut backend = ScriptedBackend::new(vec![FixtureEntry::new(
            Matcher::Contains("item=<".into()),
            "item=aspirin; qty=2; companion=water; time=10:00pm; room=living room",
        )]);
        let mut session = Session::new("g");
        let goal = extract_goal(
            &mut backend,
            &mut session,
            "I need to take two pills of aspirin with water at 10pm in the living room",
            &GenerationParams::default(),
        )
        .unwrap();
        assert_eq!(goal, medication_goal());
    }

    fn item_name() -> impl Strategy<Value = String> {
        "[a-z]{1,8}( [a-z]{1,8})?".prop_filter("reserved", |s| s != "none")
    }

    proptest! {
        #[test]
        fn slot_line_round_trips(
            item in item_name(),
            qty in 1u32..20,
            companion in proptest::option::of(item_name()),
            minutes in 0u32..1440,
            room in prop::sample::select(RoomId::ALL.to_vec()),
        ) {
            let mut deliveries = vec![(item.clone(), qty)];
            if let Some(c) = companion.filter(|c| *c != item) {
                deliveries.push((c, 1));
            }
            let goal = Goal {
                deliveries,
                destination: room,
                target_time: ClockTime::from_minutes(minutes).unwrap(),
                tolerance: DEFAULT_TOLERANCE,
                require_terminal_dock: true,
            };
            prop_assert_eq!(parse_goal_slots(&render_goal_slots(&goal)).unwrap(), goal);
        }
    }
}
