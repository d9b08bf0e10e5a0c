//! Line-delimited stage records that replay to the constructed sets.

use std::fmt;
use std::str::FromStr;

use crate::sets::FiniteSet;

/// What one stage did to one target set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: u64,
    /// Which rule fired, e.g. `case2`, `fill`, `markers`.
    pub rule: String,
    /// The set touched, e.g. `R` or `Q`.
    pub target: String,
    pub added: FiniteSet,
    pub removed: FiniteSet,
    /// Extra `key=value` data; values never contain tabs.
    pub notes: Vec<(String, String)>,
}

impl StageRecord {
    pub fn new(stage: u64, rule: &str, target: &str) -> Self {
        StageRecord {
            stage,
            rule: rule.to_string(),
            target: target.to_string(),
            added: FiniteSet::empty(),
            removed: FiniteSet::empty(),
            notes: Vec::new(),
        }
    }

    pub fn adding(mut self, added: FiniteSet) -> Self {
        self.added = added;
        self
    }

    pub fn removing(mut self, removed: FiniteSet) -> Self {
        self.removed = removed;
        self
    }

    pub fn note(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.notes.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.notes
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

/// `stage<TAB>n<TAB>rule<TAB>target<TAB>+[..]<TAB>-[..]` then `key=value` fields.
impl fmt::Display for StageRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stage\t{}\t{}\t{}\t+{}\t-{}",
            self.stage, self.rule, self.target, self.added, self.removed
        )?;
        for (k, v) in &self.notes {
            write!(f, "\t{k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed stage record: {0:?}")]
pub struct TraceParseError(pub String);

impl FromStr for StageRecord {
    type Err = TraceParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TraceParseError(s.to_string());
        let fields: Vec<&str> = s.split('\t').collect();
        if fields.len() < 6 || fields[0] != "stage" {
            return Err(bad());
        }
        let set = |f: &str, sign: char| -> Result<FiniteSet, TraceParseError> {
            f.strip_prefix(sign)
                .ok_or_else(bad)?
                .parse()
                .map_err(|_| bad())
        };
        let notes = fields[6..]
            .iter()
            .map(|kv| {
                kv.split_once('=')
                    .map(|(k, v)| (k.to_string(), v.to_string()))
                    .ok_or_else(bad)
            })
            .collect::<Result<_, _>>()?;
        Ok(StageRecord {
            stage: fields[1].parse().map_err(|_| bad())?,
            rule: fields[2].to_string(),
            target: fields[3].to_string(),
            added: set(fields[4], '+')?,
            removed: set(fields[5], '-')?,
            notes,
        })
    }
}

/// The ordered records of one run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstructionTrace {
    pub records: Vec<StageRecord>,
}

impl ConstructionTrace {
    pub fn push(&mut self, record: StageRecord) {
        self.records.push(record);
    }

    /// Rebuilds `target` by applying each record's removals, then additions.
    pub fn replay(&self, target: &str) -> FiniteSet {
        self.replay_until(target, u64::MAX)
    }

    /// The state of `target` after every record with `stage < stop`.
    pub fn replay_until(&self, target: &str, stop: u64) -> FiniteSet {
        let mut set = std::collections::BTreeSet::new();
        for r in self
            .records
            .iter()
            .filter(|r| r.target == target && r.stage < stop)
        {
            for x in r.removed.iter() {
                set.remove(&x);
            }
            set.extend(r.added.iter());
        }
        FiniteSet::from_sorted(set.into_iter().collect())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

impl fmt::Display for ConstructionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.records {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

impl FromStr for ConstructionTrace {
    type Err = TraceParseError;

    /// Reads every `stage` line and ignores the rest.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let records = s
            .lines()
            .filter(|l| l.starts_with("stage\t"))
            .map(str::parse)
            .collect::<Result<_, _>>()?;
        Ok(ConstructionTrace { records })
    }
}
