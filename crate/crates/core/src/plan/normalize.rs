use thiserror::Error;

use super::{Action, ActionPlan, ClockTime, TimedAction};
use crate::world::{RoomId, WorldError, WorldModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("action {index}: {source}")]
    World {
        index: usize,
        #[source]
        source: WorldError,
    },
    #[error("action {index}: move to {room} would have to start {travel} minutes before {start}, before midnight")]
    NegativeStart {
        index: usize,
        room: RoomId,
        travel: u32,
        start: ClockTime,
    },
}

/// Room an action must be performed in, if any. `current` resolves a
/// `Deliver` whose room was omitted.
pub fn required_room(
    action: &Action,
    world: &WorldModel,
    current: RoomId,
) -> Result<Option<RoomId>, WorldError> {
    Ok(match action {
        Action::Move { .. } | Action::Wait { .. } => None,
        Action::Pick { item, .. } => Some(world.item_location(item)?),
        Action::Fill { source, .. } => Some(world.item_location(source)?),
        Action::Deliver { room, .. } => Some(room.unwrap_or(current)),
        Action::Dock | Action::Charge => Some(world.charging_port_room()),
    })
}

/// Makes every room change explicit.
///
/// Before each action whose room differs from the arm's current room, a
/// `Move` is inserted that starts exactly `travel_time` before the action.
/// Omitted delivery rooms become the current room. The result is canonical
/// and normalizing it again is a no-op.
pub fn normalize(
    plan: &ActionPlan,
    world: &WorldModel,
    start_room: RoomId,
) -> Result<ActionPlan, NormalizeError> {
    let mut current = start_room;
    let mut out = Vec::with_capacity(plan.actions.len());
    for (index, timed) in plan.actions.iter().enumerate() {
        let world_err = |source| NormalizeError::World { index, source };
        if let Action::Move { dest } = timed.action {
            if !world.has_room(dest) {
                return Err(world_err(WorldError::UnknownRoom(dest.id().into())));
            }
            current = dest;
            out.push(timed.clone());
            continue;
        }
        let required = required_room(&timed.action, world, current).map_err(world_err)?;
        let mut action = timed.action.clone();
        if let Action::Deliver { room, .. } = &mut action {
            room.get_or_insert(current);
        }
        if let Some(room) = required {
            if room != current {
                let travel = world.travel_time(current, room).map_err(world_err)?;
                let start = timed.start.checked_sub(travel).ok_or(NormalizeError::NegativeStart {
                    index,
                    room,
                    travel,
                    start: timed.start,
                })?;
                out.push(TimedAction::new(start, Action::Move { dest: room }));
                current = room;
            }
        }
        out.push(TimedAction::new(timed.start, action));
    }
    Ok(ActionPlan::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plan::{parse_plan, serialize_plan};
    use crate::world::default_world;

    #[test]
    fn inserts_moves_back_scheduled_from_each_action() {
        let world = default_world();
        let plan = parse_plan("[9:58pm] Pick 2 aspirin\n[10:01pm] Fill glass with water").unwrap();
        let normalized = normalize(&plan, &world, RoomId::LivingRoom).unwrap();
        assert_eq!(
            serialize_plan(&normalized),
            "[9:56pm] Move to the storeroom\n\
             [9:58pm] Pick 2 aspirin\n\
             [9:59pm] Move to the kitchen\n\
             [10:01pm] Fill glass with water\n"
        );
        assert_eq!(normalize(&normalized, &world, RoomId::LivingRoom).unwrap(), normalized);
    }

    #[test]
    fn canonical_plan_is_unchanged() {
        let world = default_world();
        let plan = parse_plan(
            "[9:56pm] Move to the storeroom\n[9:58pm] Pick 2 aspirin\n[10:05pm] Move to the living room\n[10:07pm] Dock at the charging port",
        )
        .unwrap();
        assert_eq!(normalize(&plan, &world, RoomId::LivingRoom).unwrap(), plan);
    }

    #[test]
    fn fills_in_delivery_room() {
        let world = default_world();
        let plan = parse_plan("[9:00pm] Deliver 1 water").unwrap();
        let normalized = normalize(&plan, &world, RoomId::Bedroom).unwrap();
        assert_eq!(serialize_plan(&normalized), "[9:00pm] Deliver 1 water to the bedroom\n");
    }

    #[test]
    fn errors() {
        let world = default_world();
        let unknown = parse_plan("[9:00pm] Pick 1 espresso").unwrap();
        assert!(matches!(
            normalize(&unknown, &world, RoomId::LivingRoom),
            Err(NormalizeError::World { index: 0, source: WorldError::ItemUnknown(_) })
        ));
        let early = parse_plan("[12:01am] Pick 1 aspirin").unwrap();
        assert!(matches!(
            normalize(&early, &world, RoomId::LivingRoom),
            Err(NormalizeError::NegativeStart { travel: 2, .. })
        ));
    }
}
