//! Posting-rule audit over any corpus.
//!
//! Checks every account against the sliding daily and semi-hourly caps and
//! flags exact-duplicate text posted across different accounts within ten
//! minutes (the duplicate-content rule proxy). The simulator's own output
//! must always audit clean.

use std::collections::BTreeMap;

use super::config::RateLimitPolicy;
use crate::corpus::TweetRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    DailyCap,
    SemiHourCap,
    DuplicateContent,
}

impl ViolationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ViolationKind::DailyCap => "daily_cap",
            ViolationKind::SemiHourCap => "semi_hour_cap",
            ViolationKind::DuplicateContent => "duplicate_content",
        }
    }
}

impl std::fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One detected rule violation. Cap violations name the offending account;
/// duplicate-content violations name both accounts involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub account: String,
    pub at: i64,
    pub detail: String,
}

/// Audit a corpus against the policy. At most one violation is reported
/// per account per cap rule and one per duplicated text, so the list stays
/// readable on badly broken corpora.
pub fn audit_rate_limits(records: &[TweetRecord], policy: &RateLimitPolicy) -> Vec<Violation> {
    let mut violations = Vec::new();

    let mut per_account: BTreeMap<&str, Vec<i64>> = BTreeMap::new();
    for record in records {
        per_account
            .entry(record.author_id.as_str())
            .or_default()
            .push(record.created_at);
    }
    for (account, times) in &mut per_account {
        times.sort_unstable();
        for (kind, window, cap) in [
            (ViolationKind::DailyCap, 86_400i64, policy.daily_cap),
            (ViolationKind::SemiHourCap, 1_800i64, policy.semi_hour_cap),
        ] {
            let mut lo = 0usize;
            for hi in 0..times.len() {
                while times[lo] <= times[hi] - window {
                    lo += 1;
                }
                let in_window = hi - lo + 1;
                if in_window > cap {
                    violations.push(Violation {
                        kind,
                        account: account.to_string(),
                        at: times[hi],
                        detail: format!(
                            "{in_window} posts within {window} s ending at {}, cap {cap}",
                            times[hi]
                        ),
                    });
                    break;
                }
            }
        }
    }

    let mut by_text: BTreeMap<&str, Vec<(i64, &str)>> = BTreeMap::new();
    for record in records {
        by_text
            .entry(record.text.as_str())
            .or_default()
            .push((record.created_at, record.author_id.as_str()));
    }
    for (text, posts) in &mut by_text {
        if posts.len() < 2 {
            continue;
        }
        posts.sort_unstable();
        let mut found = None;
        'outer: for i in 0..posts.len() {
            for j in i + 1..posts.len() {
                if posts[j].0 - posts[i].0 > 600 {
                    break;
                }
                if posts[i].1 != posts[j].1 {
                    found = Some((posts[i], posts[j]));
                    break 'outer;
                }
            }
        }
        if let Some(((t1, a1), (t2, a2))) = found {
            violations.push(Violation {
                kind: ViolationKind::DuplicateContent,
                account: a1.to_string(),
                at: t2,
                detail: format!(
                    "accounts {a1} and {a2} posted identical text {} s apart: {:?}",
                    t2 - t1,
                    crop(text, 60)
                ),
            });
        }
    }
    violations.sort_by(|a, b| (a.at, &a.account).cmp(&(b.at, &b.account)));
    violations
}

fn crop(text: &str, max: usize) -> String {
    if text.chars().count() <= max {
        text.to_string()
    } else {
        let cropped: String = text.chars().take(max).collect();
        format!("{cropped}…")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::AccountSnapshot;

    fn tweet(user: &str, id: usize, at: i64, text: &str) -> TweetRecord {
        TweetRecord {
            tweet_id: format!("t{id}"),
            author_id: user.into(),
            created_at: at,
            text: text.into(),
            source: "web".into(),
            retweet_of_author: None,
            urls: vec![],
            author: AccountSnapshot {
                user_id: user.into(),
                handle: user.into(),
                followers_count: 0,
                friends_count: 0,
                statuses_count: 0,
                created_at: 1,
                description: String::new(),
                verified: false,
            },
        }
    }

    #[test]
    fn thousand_and_one_same_day_posts_flagged_once() {
        let records: Vec<TweetRecord> = (0..1_001)
            .map(|i| tweet("spammer", i, 10_000 + i as i64 * 60, &format!("post {i}")))
            .collect();
        let violations = audit_rate_limits(&records, &RateLimitPolicy::default());
        let daily: Vec<&Violation> = violations
            .iter()
            .filter(|v| v.kind == ViolationKind::DailyCap)
            .collect();
        assert_eq!(daily.len(), 1);
        assert_eq!(daily[0].account, "spammer");
    }

    #[test]
    fn exactly_one_thousand_within_a_day_is_legal() {
        // 1,000 posts 60 s apart span 59,940 s < 1 day: at the cap, not over.
        let records: Vec<TweetRecord> = (0..1_000)
            .map(|i| tweet("busy", i, 10_000 + i as i64 * 60, &format!("post {i}")))
            .collect();
        let violations = audit_rate_limits(&records, &RateLimitPolicy::default());
        assert!(violations
            .iter()
            .all(|v| v.kind != ViolationKind::DailyCap));
        // but 30 posts in 30 minutes trips the semi-hourly cap
        assert!(violations
            .iter()
            .any(|v| v.kind == ViolationKind::SemiHourCap));
    }

    #[test]
    fn semi_hour_cap_respects_sliding_window() {
        // 21 posts within 30 minutes: allowed; a 22nd inside trips it.
        let mut records: Vec<TweetRecord> = (0..21)
            .map(|i| tweet("burst", i, 1_000 + i as i64 * 10, &format!("u{i}")))
            .collect();
        assert!(audit_rate_limits(&records, &RateLimitPolicy::default()).is_empty());
        records.push(tweet("burst", 99, 1_000 + 21 * 10, "one more"));
        let violations = audit_rate_limits(&records, &RateLimitPolicy::default());
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].kind, ViolationKind::SemiHourCap);
    }

    #[test]
    fn identical_text_from_two_accounts_at_same_second_flagged() {
        let records = vec![
            tweet("a", 1, 5_000, "breaking: identical spam"),
            tweet("b", 2, 5_000, "breaking: identical spam"),
        ];
        let violations = audit_rate_limits(&records, &RateLimitPolicy::default());
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].kind, ViolationKind::DuplicateContent);
    }

    #[test]
    fn identical_text_far_apart_or_same_account_is_fine() {
        let records = vec![
            tweet("a", 1, 5_000, "same words"),
            tweet("b", 2, 5_000 + 601, "same words"), // 601 s apart
            tweet("a", 3, 5_100, "self repeat"),
            tweet("a", 4, 5_150, "self repeat"), // same account: not this rule
        ];
        assert!(audit_rate_limits(&records, &RateLimitPolicy::default()).is_empty());
    }

    #[test]
    fn empty_corpus_is_clean() {
        assert!(audit_rate_limits(&[], &RateLimitPolicy::default()).is_empty());
    }
}
