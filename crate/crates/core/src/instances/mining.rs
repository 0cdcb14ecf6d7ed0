//! Instances mined from bug repository dumps: reports become requirements,
//! users become customers and a comment by a user on a report becomes a
//! request.
//!
//! Dumps are tab separated: report id, timestamp, severity, comma joined
//! commenter ids. Blank lines and lines starting with `#` are skipped.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::bound_for_ratio;
use crate::error::{NrpError, Result};
use crate::model::{Customer, CustomerId, Instance, Requirement, RequirementId};
use crate::seed::rng_from_seed;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BugDumpRecord {
    pub report_id: u64,
    pub timestamp: i64,
    /// Severity or any other integer the requirement cost is derived from.
    pub severity: u64,
    pub commenters: BTreeSet<u64>,
}

impl BugDumpRecord {
    /// `1 + severity mod 9`, in `[1, 9]`.
    pub fn cost(&self) -> u64 {
        1 + self.severity % 9
    }
}

/// Inclusive count range; `max = None` is unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRange {
    pub min: usize,
    pub max: Option<usize>,
}

impl CountRange {
    pub fn new(min: usize, max: Option<usize>) -> Self {
        CountRange { min, max }
    }

    pub fn contains(&self, k: usize) -> bool {
        k >= self.min && self.max.map_or(true, |max| k <= max)
    }
}

impl Default for CountRange {
    fn default() -> Self {
        CountRange { min: 1, max: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MinerSpec {
    /// Number of consecutive reports taken.
    pub window: usize,
    /// Reports skipped before the window, in timestamp order.
    pub start_offset: usize,
    /// Accepted number of commented reports per user.
    pub user_comments: CountRange,
    /// Accepted number of commenting users per report.
    pub report_comments: CountRange,
    /// Inclusive range of customer profits.
    pub profit: [u64; 2],
    pub cost_ratio: f64,
    pub rng_seed: u64,
}

impl Default for MinerSpec {
    fn default() -> Self {
        MinerSpec {
            window: 10_000,
            start_offset: 0,
            user_comments: CountRange::default(),
            report_comments: CountRange::default(),
            profit: [10, 50],
            cost_ratio: 0.5,
            rng_seed: 0,
        }
    }
}

impl MinerSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(NrpError::InvalidSpec(msg.into()));
        if self.window < 1 {
            return bad("window must hold at least one report");
        }
        if self.profit[0] < 1 || self.profit[0] > self.profit[1] {
            return bad("profit range must be nonempty and start at 1 or more");
        }
        if !(self.cost_ratio > 0.0 && self.cost_ratio <= 1.0) {
            return bad("cost ratio must lie in (0, 1]");
        }
        Ok(())
    }
}

/// A mined instance with the original ids of its requirements and
/// customers (`report_ids[j]` is requirement `j + 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct MinedInstance {
    pub instance: Instance,
    pub report_ids: Vec<u64>,
    pub user_ids: Vec<u64>,
}

pub fn parse_dump(text: &str) -> Result<Vec<BugDumpRecord>> {
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |message: String| NrpError::Parse { line, message };
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != 4 {
            return Err(err(format!("expected 4 tab separated fields, found {}", fields.len())));
        }
        let int = |s: &str, what: &str| {
            s.trim().parse::<i64>().map_err(|_| err(format!("bad {what} `{}`", s.trim())))
        };
        let report_id = int(fields[0], "report id")?;
        let timestamp = int(fields[1], "timestamp")?;
        let severity = int(fields[2], "severity")?;
        if report_id < 0 || severity < 0 {
            return Err(err("report ids and severities must be non-negative".into()));
        }
        let commenters = fields[3]
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<u64>().map_err(|_| err(format!("bad commenter id `{s}`"))))
            .collect::<Result<BTreeSet<_>>>()?;
        if !seen.insert(report_id) {
            return Err(err(format!("duplicate report id {report_id}")));
        }
        records.push(BugDumpRecord {
            report_id: report_id as u64,
            timestamp,
            severity: severity as u64,
            commenters,
        });
    }
    Ok(records)
}

pub fn read_dump(path: impl AsRef<Path>) -> Result<Vec<BugDumpRecord>> {
    parse_dump(&std::fs::read_to_string(path)?)
}

/// Mines an instance from `dump`.
///
/// Records are sorted stably by `(timestamp, report id)` and the window
/// taken after `start_offset`. Reports and users outside their comment
/// count ranges are removed alternately until nothing changes; a report
/// or user left without comments is always removed. Requirement ids follow
/// timestamp order, customer ids ascending user ids. Profits are drawn
/// uniformly from `spec.profit` with `spec.rng_seed`.
pub fn mine_instance(dump: &[BugDumpRecord], spec: &MinerSpec) -> Result<MinedInstance> {
    spec.validate()?;
    let mut sorted: Vec<&BugDumpRecord> = dump.iter().collect();
    sorted.sort_by_key(|r| (r.timestamp, r.report_id));
    if sorted.iter().map(|r| r.report_id).collect::<HashSet<_>>().len() != sorted.len() {
        return Err(NrpError::InvalidArgument("duplicate report ids in dump".into()));
    }
    let available = sorted.len().saturating_sub(spec.start_offset);
    if available < spec.window {
        return Err(NrpError::InsufficientData(format!(
            "{available} reports after offset {}, window needs {}",
            spec.start_offset, spec.window
        )));
    }
    let window = &sorted[spec.start_offset..spec.start_offset + spec.window];

    let mut users: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (j, record) in window.iter().enumerate() {
        for &u in &record.commenters {
            users.entry(u).or_default().push(j);
        }
    }
    let user_ids: Vec<u64> = users.keys().copied().collect();
    let user_reports: Vec<Vec<usize>> = users.into_values().collect();

    let mut report_alive = vec![true; window.len()];
    let mut user_alive = vec![true; user_ids.len()];
    loop {
        let mut changed = false;
        let mut commenters = vec![0usize; window.len()];
        for (u, reports) in user_reports.iter().enumerate() {
            if user_alive[u] {
                for &j in reports {
                    commenters[j] += 1;
                }
            }
        }
        for j in 0..window.len() {
            if report_alive[j] && (commenters[j] == 0 || !spec.report_comments.contains(commenters[j])) {
                report_alive[j] = false;
                changed = true;
            }
        }
        for (u, reports) in user_reports.iter().enumerate() {
            if !user_alive[u] {
                continue;
            }
            let k = reports.iter().filter(|&&j| report_alive[j]).count();
            if k == 0 || !spec.user_comments.contains(k) {
                user_alive[u] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let kept_reports: Vec<usize> = (0..window.len()).filter(|&j| report_alive[j]).collect();
    let kept_users: Vec<usize> = (0..user_ids.len()).filter(|&u| user_alive[u]).collect();
    if kept_reports.is_empty() || kept_users.is_empty() {
        return Err(NrpError::DegenerateInstance(
            "no report and user survive the comment filters".into(),
        ));
    }

    let mut local_id = vec![0u32; window.len()];
    let requirements: Vec<Requirement> = kept_reports
        .iter()
        .enumerate()
        .map(|(k, &j)| {
            local_id[j] = k as u32 + 1;
            Requirement { id: RequirementId(k as u32 + 1), cost: window[j].cost() }
        })
        .collect();
    let mut rng = rng_from_seed(spec.rng_seed);
    let customers = kept_users
        .iter()
        .enumerate()
        .map(|(k, &u)| {
            let profit = rng.gen_range(spec.profit[0]..=spec.profit[1]);
            let row = user_reports[u]
                .iter()
                .filter(|&&j| report_alive[j])
                .map(|&j| RequirementId(local_id[j]))
                .collect();
            (Customer { id: CustomerId(k as u32 + 1), profit }, row)
        })
        .collect();

    let total: u64 = requirements.iter().map(|r| r.cost).sum();
    let note = format!(
        "mined: {} reports from offset {}, cost = 1 + severity mod 9, profits uniform in [{}, {}] with seed {}",
        spec.window, spec.start_offset, spec.profit[0], spec.profit[1], spec.rng_seed
    );
    let instance = Instance::new(requirements, customers, bound_for_ratio(spec.cost_ratio, total), note)?;

    Ok(MinedInstance {
        instance,
        report_ids: kept_reports.iter().map(|&j| window[j].report_id).collect(),
        user_ids: kept_users.iter().map(|&u| user_ids[u]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = include_str!("../../data/sample_dump.tsv");

    fn record(id: u64, ts: i64, users: &[u64]) -> BugDumpRecord {
        BugDumpRecord { report_id: id, timestamp: ts, severity: id, commenters: users.iter().copied().collect() }
    }

    fn rows(inst: &Instance) -> Vec<Vec<u32>> {
        inst.customers()
            .iter()
            .map(|c| inst.request_ids(c.id).unwrap().iter().map(|r| r.0).collect())
            .collect()
    }

    #[test]
    fn direct_mapping() {
        let dump = [record(1, 10, &[7]), record(2, 20, &[8]), record(3, 30, &[7])];
        let spec = MinerSpec { window: 3, ..MinerSpec::default() };
        let mined = mine_instance(&dump, &spec).unwrap();
        assert_eq!(mined.instance.num_customers(), 2);
        assert_eq!(mined.instance.num_requirements(), 3);
        assert_eq!(rows(&mined.instance), vec![vec![1, 3], vec![2]]);
        assert_eq!(mined.user_ids, vec![7, 8]);
    }

    #[test]
    fn zero_max_comments_is_degenerate() {
        let dump = [record(1, 10, &[7]), record(2, 20, &[8])];
        let spec = MinerSpec {
            window: 2,
            user_comments: CountRange::new(0, Some(0)),
            ..MinerSpec::default()
        };
        assert!(matches!(mine_instance(&dump, &spec), Err(NrpError::DegenerateInstance(_))));
    }

    #[test]
    fn short_window_is_insufficient() {
        let dump = [record(1, 10, &[7])];
        let spec = MinerSpec { window: 1, start_offset: 1, ..MinerSpec::default() };
        assert!(matches!(mine_instance(&dump, &spec), Err(NrpError::InsufficientData(_))));
    }

    #[test]
    fn fixture_counts() {
        let dump = parse_dump(FIXTURE).unwrap();
        assert_eq!(dump.len(), 14);
        let spec = MinerSpec {
            window: 12,
            start_offset: 1,
            user_comments: CountRange::new(2, Some(4)),
            report_comments: CountRange::new(1, Some(3)),
            ..MinerSpec::default()
        };
        let mined = mine_instance(&dump, &spec).unwrap();
        let inst = &mined.instance;
        // Counted by hand: report 106 has four commenters, users 5, 6 and 7
        // one comment each, and reports 104, 108 and 111 are left empty.
        assert_eq!(mined.report_ids, vec![101, 102, 103, 105, 107, 109, 110, 112]);
        assert_eq!(mined.user_ids, vec![1, 2, 3, 4]);
        assert_eq!(
            rows(inst),
            vec![vec![1, 3, 4, 6], vec![1, 2, 6, 8], vec![2, 4, 5], vec![2, 7, 8]]
        );
        let costs: Vec<u64> = inst.requirements().iter().map(|r| r.cost).collect();
        assert_eq!(costs, vec![4, 8, 4, 5, 6, 3, 9, 7]);
        assert_eq!(inst.budget(), 23);
        assert!(inst.customers().iter().all(|c| (10..=50).contains(&c.profit)));
    }

    #[test]
    fn filters_cascade_until_stable() {
        let dump = parse_dump(FIXTURE).unwrap();
        // Dropping single-commenter reports leaves users 3 and 4 with two
        // reports; removing them strands users 1 and 2 with two as well.
        let spec = MinerSpec {
            window: 12,
            start_offset: 1,
            user_comments: CountRange::new(3, Some(4)),
            report_comments: CountRange::new(2, Some(3)),
            ..MinerSpec::default()
        };
        assert!(matches!(mine_instance(&dump, &spec), Err(NrpError::DegenerateInstance(_))));
    }

    #[test]
    fn ties_break_on_report_id() {
        let a = [record(5, 10, &[1]), record(4, 10, &[2])];
        let b = [record(4, 10, &[2]), record(5, 10, &[1])];
        let spec = MinerSpec { window: 1, ..MinerSpec::default() };
        let ma = mine_instance(&a, &spec).unwrap();
        assert_eq!(ma.report_ids, vec![4]);
        assert_eq!(ma, mine_instance(&b, &spec).unwrap());
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(parse_dump("1\t2\t3\n"), Err(NrpError::Parse { line: 1, .. })));
        assert!(matches!(parse_dump("# h\n1\t2\t3\t4\n1\t5\t3\t4\n"), Err(NrpError::Parse { line: 3, .. })));
        assert!(matches!(parse_dump("1\t2\tx\t4\n"), Err(NrpError::Parse { line: 1, .. })));
    }
}
