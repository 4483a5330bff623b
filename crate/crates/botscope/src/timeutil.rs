//! Small UTC time helpers shared across modules.
//!
//! All timestamps in the data model are epoch seconds, UTC. Config files
//! (event specs, rumor specs) carry human-readable RFC 3339 bounds that are
//! parsed here.

use chrono::{DateTime, Utc};

/// Parse an RFC 3339 / ISO-8601 timestamp (e.g. `2013-04-15T11:29:23Z`)
/// into epoch seconds UTC.
pub fn parse_utc(s: &str) -> Result<i64, String> {
    DateTime::parse_from_rfc3339(s.trim())
        .map(|dt| dt.timestamp())
        .map_err(|e| format!("invalid timestamp {s:?}: {e}"))
}

/// Format epoch seconds as RFC 3339 UTC.
pub fn format_utc(epoch_s: i64) -> String {
    match DateTime::<Utc>::from_timestamp(epoch_s, 0) {
        Some(dt) => dt.to_rfc3339(),
        None => format!("<out-of-range epoch {epoch_s}>"),
    }
}

/// UTC hour of day in `0..24`.
pub fn hour_of_day(epoch_s: i64) -> u32 {
    (epoch_s.div_euclid(3600).rem_euclid(24)) as u32
}

/// Weekday index in `0..7` (0 = Sunday). The epoch day 1970-01-01 was a
/// Thursday, hence the +4 offset.
pub fn weekday(epoch_s: i64) -> u32 {
    ((epoch_s.div_euclid(86_400) + 4).rem_euclid(7)) as u32
}
