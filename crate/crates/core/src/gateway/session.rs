use super::{count_tokens, ChatMessage, GatewayError};

/// One user prompt and the assistant reply to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Turn {
    pub user: String,
    pub assistant: String,
}

/// Conversation memory for one task: an optional pinned system message and
/// the ordered user/assistant pairs. Storing whole pairs keeps the
/// alternation invariant by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Session {
    id: String,
    pinned: Option<ChatMessage>,
    turns: Vec<Turn>,
}

impl Session {
    pub fn new(id: impl Into<String>) -> Self {
        Session {
            id: id.into(),
            pinned: None,
            turns: Vec::new(),
        }
    }

    pub fn with_pinned(id: impl Into<String>, pinned: impl Into<String>) -> Self {
        Session {
            id: id.into(),
            pinned: Some(ChatMessage::system(pinned)),
            turns: Vec::new(),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn pinned(&self) -> Option<&ChatMessage> {
        self.pinned.as_ref()
    }

    pub fn turns(&self) -> &[Turn] {
        &self.turns
    }

    pub fn push_turn(&mut self, user: impl Into<String>, assistant: impl Into<String>) {
        self.turns.push(Turn {
            user: user.into(),
            assistant: assistant.into(),
        });
    }

    /// Every message in order, pinned first, with no truncation.
    pub fn messages(&self) -> Vec<ChatMessage> {
        self.pinned
            .iter()
            .cloned()
            .chain(self.turns.iter().flat_map(|t| {
                [ChatMessage::user(&t.user), ChatMessage::assistant(&t.assistant)]
            }))
            .collect()
    }
}

/// Pinned message first, then the longest suffix of whole turn pairs that
/// fits in what remains of `token_budget`. The oldest pairs are dropped
/// first; a message is never split.
pub fn render_history(session: &Session, token_budget: usize) -> Result<Vec<ChatMessage>, GatewayError> {
    let pinned = session.pinned.as_ref().map_or(0, ChatMessage::tokens);
    if token_budget < pinned {
        return Err(GatewayError::BudgetTooSmall {
            budget: token_budget,
            pinned,
        });
    }
    let mut remaining = token_budget - pinned;
    let mut keep = 0;
    for turn in session.turns.iter().rev() {
        let cost = count_tokens(&turn.user) + count_tokens(&turn.assistant);
        if cost > remaining {
            break;
        }
        remaining -= cost;
        keep += 1;
    }
    let first = session.turns.len() - keep;
    let mut out: Vec<ChatMessage> = session.pinned.iter().cloned().collect();
    for turn in &session.turns[first..] {
        out.push(ChatMessage::user(&turn.user));
        out.push(ChatMessage::assistant(&turn.assistant));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::Role;

    fn session_with(pairs: usize) -> Session {
        let mut s = Session::with_pinned("s", "pinned!!"); // 2 tokens
        for i in 0..pairs {
            s.push_turn(format!("user {i:02}"), format!("asst {i:02}")); // 2 + 2 tokens
        }
        s
    }

    #[test]
    fn keeps_the_newest_pairs_that_fit() {
        let s = session_with(5);
        let rendered = render_history(&s, 2 + 3 * 4).unwrap();
        assert_eq!(rendered.len(), 1 + 6);
        assert_eq!(rendered[0].role, Role::System);
        assert_eq!(rendered[1].content, "user 02");
        assert_eq!(rendered[6].content, "asst 04");
    }

    #[test]
    fn everything_fits() {
        let s = session_with(5);
        assert_eq!(render_history(&s, 1000).unwrap(), s.messages());
    }

    #[test]
    fn budget_below_pinned_is_an_error() {
        let s = session_with(1);
        assert_eq!(
            render_history(&s, 1),
            Err(GatewayError::BudgetTooSmall { budget: 1, pinned: 2 })
        );
    }

    #[test]
    fn a_large_old_pair_blocks_older_ones() {
        let mut s = Session::new("s");
        s.push_turn("a", "b");
        s.push_turn("x".repeat(400), "y");
        s.push_turn("c", "d");
        let rendered = render_history(&s, 10).unwrap();
        assert_eq!(rendered.len(), 2);
        assert_eq!(rendered[0].content, "c");
    }
}
