//! Chat transcript grammar and session timing.
//!
//! ```text
//! [2024-05-02 10:00] USER: first line of a message
//!     continuation lines are appended to the open message
//! [10:17] TUTOR: bare times reuse the date of the previous stamp
//! ```
//!
//! Parsing never fails. Anything unexpected (unstamped preamble, clocks
//! going backwards, impossible dates) is kept and described in
//! [`Transcript::anomalies`].

use std::fmt;
use std::sync::OnceLock;

use chrono::{Datelike, NaiveDate};
use regex::Regex;
use serde::{Deserialize, Serialize};

const MINUTES_PER_DAY: i64 = 24 * 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    User,
    Tutor,
    Unknown,
}

impl Role {
    fn from_label(label: &str) -> Role {
        match label.trim().to_lowercase().as_str() {
            "user" | "usuario" | "alumno" | "alumna" | "estudiante" | "student" | "yo" | "you" => {
                Role::User
            }
            "tutor" | "asistente" | "assistant" | "ia" | "ai" | "bot" | "chatgpt" | "gpt" => {
                Role::Tutor
            }
            _ => Role::Unknown,
        }
    }
}

/// Wall-clock minute, counted from 0001-01-01 00:00.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Timestamp(pub i64);

impl Timestamp {
    fn from_parts(date: NaiveDate, hour: u32, minute: u32) -> Timestamp {
        let day = i64::from(date.num_days_from_ce() - 1);
        Timestamp(day * MINUTES_PER_DAY + i64::from(hour) * 60 + i64::from(minute))
    }

    pub fn minutes_since(self, earlier: Timestamp) -> i64 {
        self.0 - earlier.0
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let day = self.0.div_euclid(MINUTES_PER_DAY);
        let min = self.0.rem_euclid(MINUTES_PER_DAY);
        match i32::try_from(day + 1)
            .ok()
            .and_then(NaiveDate::from_num_days_from_ce_opt)
        {
            Some(d) => write!(
                f,
                "{} {:02}:{:02}",
                d.format("%Y-%m-%d"),
                min / 60,
                min % 60
            ),
            None => write!(f, "day{} {:02}:{:02}", day, min / 60, min % 60),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub timestamp: Option<Timestamp>,
    pub role: Role,
    /// Never empty.
    pub text: String,
    /// 1-based line where the message starts.
    pub line: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub messages: Vec<Message>,
    pub source: String,
    pub anomalies: Vec<String>,
}

impl Transcript {
    pub fn stamped(&self) -> impl Iterator<Item = Timestamp> + '_ {
        self.messages.iter().filter_map(|m| m.timestamp)
    }
}

fn stamp_line() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(
            r"^\s*\[\s*(?:(\d{4})-(\d{1,2})-(\d{1,2})[ T]+)?(\d{1,2}):(\d{2})(?::\d{2})?\s*\]\s*([\p{L} ]{1,30}?)\s*:[ \t]?(.*)$",
        )
        .expect("stamp regex compiles")
    })
}

struct Stamp {
    date: Option<Result<NaiveDate, String>>,
    hour: u32,
    minute: u32,
}

fn parse_stamp(caps: &regex::Captures<'_>) -> Stamp {
    let num = |i: usize| {
        caps.get(i)
            .map(|m| m.as_str().parse::<u32>().unwrap_or(u32::MAX))
    };
    let date = match (num(1), num(2), num(3)) {
        (Some(y), Some(mo), Some(d)) => Some(
            i32::try_from(y)
                .ok()
                .and_then(|y| NaiveDate::from_ymd_opt(y, mo, d))
                .ok_or_else(|| format!("{y:04}-{mo:02}-{d:02}")),
        ),
        _ => None,
    };
    Stamp {
        date,
        hour: num(4).unwrap_or(u32::MAX),
        minute: num(5).unwrap_or(u32::MAX),
    }
}

/// Builder state for the message currently being collected.
struct Open {
    timestamp: Option<Timestamp>,
    role: Role,
    text: String,
    line: usize,
}

pub fn parse_transcript(text: &str) -> Transcript {
    let mut t = Transcript::default();
    let re = stamp_line();

    // Leading bare times take the date of the first dated stamp, if any.
    let mut current_date: Option<NaiveDate> = text
        .lines()
        .filter_map(|l| re.captures(l))
        .find_map(|c| parse_stamp(&c).date.and_then(Result::ok));
    let fallback_date = NaiveDate::from_ymd_opt(1970, 1, 1).expect("valid date");

    let mut last: Option<Timestamp> = None;
    let mut open: Option<Open> = None;

    let close = |open: &mut Option<Open>, t: &mut Transcript| {
        if let Some(o) = open.take() {
            let body = o.text.trim();
            if body.is_empty() {
                t.anomalies
                    .push(format!("line {}: empty message dropped", o.line));
            } else {
                t.messages.push(Message {
                    timestamp: o.timestamp,
                    role: o.role,
                    text: body.to_owned(),
                    line: o.line,
                });
            }
        }
    };

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let Some(caps) = re.captures(line) else {
            if line.trim().is_empty() {
                continue;
            }
            match open.as_mut() {
                Some(o) => {
                    o.text.push('\n');
                    o.text.push_str(line.trim());
                }
                None => {
                    t.anomalies.push(format!(
                        "line {lineno}: content before the first stamped message"
                    ));
                    open = Some(Open {
                        timestamp: None,
                        role: Role::Unknown,
                        text: line.trim().to_owned(),
                        line: lineno,
                    });
                }
            }
            continue;
        };

        close(&mut open, &mut t);
        let stamp = parse_stamp(&caps);
        let role = Role::from_label(&caps[6]);
        if role == Role::Unknown {
            t.anomalies.push(format!(
                "line {lineno}: unrecognized role `{}`",
                caps[6].trim()
            ));
        }
        let body = caps.get(7).map_or("", |m| m.as_str()).trim().to_owned();

        let timestamp = resolve_timestamp(
            &stamp,
            lineno,
            &mut current_date,
            fallback_date,
            last,
            &mut t,
        );
        if let Some(ts) = timestamp {
            last = Some(ts);
        }
        open = Some(Open {
            timestamp,
            role,
            text: body,
            line: lineno,
        });
    }
    close(&mut open, &mut t);
    t
}

fn resolve_timestamp(
    stamp: &Stamp,
    lineno: usize,
    current_date: &mut Option<NaiveDate>,
    fallback_date: NaiveDate,
    last: Option<Timestamp>,
    t: &mut Transcript,
) -> Option<Timestamp> {
    if stamp.hour > 23 || stamp.minute > 59 {
        t.anomalies.push(format!(
            "line {lineno}: impossible time, message kept without timestamp"
        ));
        return None;
    }
    let dated = match &stamp.date {
        Some(Ok(d)) => {
            *current_date = Some(*d);
            true
        }
        Some(Err(raw)) => {
            t.anomalies.push(format!(
                "line {lineno}: impossible date {raw}, message kept without timestamp"
            ));
            return None;
        }
        None => false,
    };
    let date = current_date.unwrap_or(fallback_date);
    let mut ts = Timestamp::from_parts(date, stamp.hour, stamp.minute);
    if let Some(prev) = last {
        if ts < prev && !dated {
            let next_day = date.succ_opt().unwrap_or(date);
            *current_date = Some(next_day);
            ts = Timestamp::from_parts(next_day, stamp.hour, stamp.minute);
            t.anomalies.push(format!(
                "line {lineno}: clock went from {} back to {:02}:{:02}; assumed midnight crossing",
                prev, stamp.hour, stamp.minute
            ));
        }
        if ts < prev {
            t.anomalies.push(format!(
                "line {lineno}: timestamp {ts} is earlier than {prev}"
            ));
        }
    }
    Some(ts)
}

/// `(raw, capped)` session minutes.
///
/// `raw` is last minus first stamp. `capped` sums the gaps between
/// consecutive stamps, each limited to `gap_cap_min`; a cap of 0 disables
/// capping, so `capped == raw`. Backward gaps count as 0 and `capped` never
/// exceeds `raw`.
pub fn session_duration(t: &Transcript, gap_cap_min: u64) -> (u64, u64) {
    let stamps: Vec<Timestamp> = t.stamped().collect();
    let (Some(first), Some(last)) = (stamps.first(), stamps.last()) else {
        return (0, 0);
    };
    let raw = u64::try_from(last.minutes_since(*first)).unwrap_or(0);
    if gap_cap_min == 0 {
        return (raw, raw);
    }
    let capped: u64 = stamps
        .windows(2)
        .map(|w| {
            u64::try_from(w[1].minutes_since(w[0]))
                .unwrap_or(0)
                .min(gap_cap_min)
        })
        .sum();
    (raw, capped.min(raw))
}
