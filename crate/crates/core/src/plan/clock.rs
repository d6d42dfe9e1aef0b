use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub const MINUTES_PER_DAY: u32 = 24 * 60;

/// Wall-clock time of day at minute resolution.
///
/// Renders in the 12-hour form used by plan lines, e.g. `9:56pm`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClockTime(u32);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed time `{text}`: {reason}")]
pub struct ClockParseError {
    pub text: String,
    pub reason: &'static str,
}

impl ClockTime {
    pub const MIDNIGHT: ClockTime = ClockTime(0);

    pub fn from_minutes(minutes: u32) -> Option<Self> {
        (minutes < MINUTES_PER_DAY).then_some(ClockTime(minutes))
    }

    pub fn hm(hour: u32, minute: u32) -> Option<Self> {
        if hour < 24 && minute < 60 {
            Some(ClockTime(hour * 60 + minute))
        } else {
            None
        }
    }

    pub fn minutes(self) -> u32 {
        self.0
    }

    pub fn hour(self) -> u32 {
        self.0 / 60
    }

    pub fn minute(self) -> u32 {
        self.0 % 60
    }

    /// Adds minutes, returning `None` when the result crosses midnight.
    pub fn checked_add(self, minutes: u32) -> Option<Self> {
        self.0.checked_add(minutes).and_then(Self::from_minutes)
    }

    pub fn checked_sub(self, minutes: u32) -> Option<Self> {
        self.0.checked_sub(minutes).map(ClockTime)
    }

    /// Parses `9:56pm`, `9:56 PM`, `10pm`, `12:00am` or 24-hour `21:56`.
    pub fn parse(text: &str) -> Result<Self, ClockParseError> {
        let err = |reason| ClockParseError {
            text: text.to_string(),
            reason,
        };
        let compact: String = text
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '.')
            .collect::<String>()
            .to_ascii_lowercase();
        let (body, meridiem) = if let Some(b) = compact.strip_suffix("am") {
            (b, Some(false))
        } else if let Some(b) = compact.strip_suffix("pm") {
            (b, Some(true))
        } else {
            (compact.as_str(), None)
        };
        let (hour_text, minute_text) = match body.split_once(':') {
            Some((h, m)) => (h, Some(m)),
            None if meridiem.is_some() => (body, None),
            None => return Err(err("missing minutes")),
        };
        let digits = |s: &str| !s.is_empty() && s.len() <= 2 && s.bytes().all(|b| b.is_ascii_digit());
        if !digits(hour_text) {
            return Err(err("hour must be one or two digits"));
        }
        let hour: u32 = hour_text.parse().map_err(|_| err("bad hour"))?;
        let minute: u32 = match minute_text {
            Some(m) if m.len() == 2 && digits(m) => m.parse().map_err(|_| err("bad minutes"))?,
            Some(_) => return Err(err("minutes must be two digits")),
            None => 0,
        };
        if minute >= 60 {
            return Err(err("minutes out of range"));
        }
        let hour24 = match meridiem {
            Some(pm) => {
                if !(1..=12).contains(&hour) {
                    return Err(err("12-hour clock hour out of range"));
                }
                (hour % 12) + if pm { 12 } else { 0 }
            }
            None => {
                if hour >= 24 {
                    return Err(err("hour out of range"));
                }
                hour
            }
        };
        Ok(ClockTime(hour24 * 60 + minute))
    }
}

impl fmt::Display for ClockTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = self.hour();
        let meridiem = if h >= 12 { "pm" } else { "am" };
        let h12 = match h % 12 {
            0 => 12,
            other => other,
        };
        write!(f, "{}:{:02}{}", h12, self.minute(), meridiem)
    }
}

impl FromStr for ClockTime {
    type Err = ClockParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClockTime::parse(s)
    }
}

impl Serialize for ClockTime {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ClockTime {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        ClockTime::parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn renders_twelve_hour_form() {
        assert_eq!(ClockTime::hm(21, 56).unwrap().to_string(), "9:56pm");
        assert_eq!(ClockTime::hm(0, 5).unwrap().to_string(), "12:05am");
        assert_eq!(ClockTime::hm(12, 0).unwrap().to_string(), "12:00pm");
        assert_eq!(ClockTime::hm(22, 7).unwrap().to_string(), "10:07pm");
    }

    #[test]
    fn parses_tolerant_forms() {
        assert_eq!(ClockTime::parse("9:56pm").unwrap().minutes(), 1316);
        assert_eq!(ClockTime::parse("9:56 PM").unwrap().minutes(), 1316);
        assert_eq!(ClockTime::parse("10pm").unwrap().minutes(), 1320);
        assert_eq!(ClockTime::parse("21:56").unwrap().minutes(), 1316);
        assert_eq!(ClockTime::parse("12:00am").unwrap().minutes(), 0);
        assert_eq!(ClockTime::parse("10 p.m.").unwrap().minutes(), 1320);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["9:5xpm", "", "13:00pm", "9:60pm", "25:00", "9:5pm", "abc", "0:30am", "921:00"] {
            assert!(ClockTime::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn checked_add_rejects_midnight_crossing() {
        let t = ClockTime::hm(23, 58).unwrap();
        assert_eq!(t.checked_add(1).unwrap().to_string(), "11:59pm");
        assert!(t.checked_add(2).is_none());
    }

    proptest! {
        #[test]
        fn display_round_trips(m in 0u32..MINUTES_PER_DAY) {
            let t = ClockTime::from_minutes(m).unwrap();
            prop_assert_eq!(ClockTime::parse(&t.to_string()).unwrap(), t);
        }
    }
}
