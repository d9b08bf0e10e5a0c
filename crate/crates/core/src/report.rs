//! Line-delimited run files: the prefixes a construction produced, its
//! trace, and the data each checker needs to re-verify them.
//!
//! Every line starts with a record kind; fields are tab-separated, sets are
//! bracket lists and programs are decimal codes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::checkers::{
    check_canonical_immunity_with, check_effective_immunity, refute_domination, CheckError,
    Indexing, Verdict,
};
use crate::constructions::{ConstructionTrace, StageRecord};
use crate::machine::build::proj;
use crate::machine::{Program, ProgramCode};
use crate::mathias::ChainLink;
use crate::numberings::Registry;
use crate::sets::SetPrefix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("no prefix named {0}")]
    MissingPrefix(String),
    #[error(transparent)]
    Check(#[from] CheckError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImmunityQuery {
    pub target: String,
    pub index_bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominationQuery {
    pub target: String,
    /// Read the target's complement instead of the target.
    pub complement: bool,
    pub f: ProgramCode,
    pub lo: u64,
    pub hi: u64,
    pub indexing: Indexing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectiveQuery {
    pub target: String,
    pub h: ProgramCode,
    pub lo: usize,
    pub hi: usize,
    pub budget: u64,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub construction: String,
    pub params: Vec<(String, String)>,
    pub prefixes: Vec<(String, SetPrefix)>,
    pub pool: Registry,
    /// Modulus per numbering id; `None` keys the default.
    pub moduli: BTreeMap<Option<usize>, ProgramCode>,
    pub k_map: BTreeMap<usize, u64>,
    pub immunity: Vec<ImmunityQuery>,
    pub domination: Vec<DominationQuery>,
    pub effective: Vec<EffectiveQuery>,
    /// `W_e` codes for effective-immunity checks.
    pub programs: Vec<ProgramCode>,
    pub notes: Vec<String>,
    pub trace: ConstructionTrace,
    pub chain: Vec<ChainLink>,
}

impl Report {
    pub fn new(construction: &str) -> Self {
        Report {
            construction: construction.to_string(),
            ..Report::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get_param(&self, key: &str) -> Option<&str> {
        self.params
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn prefix(&self, name: &str) -> Result<&SetPrefix, ReportError> {
        self.prefixes
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p)
            .ok_or_else(|| ReportError::MissingPrefix(name.to_string()))
    }

    fn modulus(&self, id: usize) -> Program {
        self.moduli
            .get(&Some(id))
            .or_else(|| self.moduli.get(&None))
            .map_or_else(|| proj(0), |c| c.decode())
    }

    /// Canonical immunity of each queried prefix against the recorded pool.
    pub fn immunity_verdicts(&self) -> Result<Vec<Verdict>, ReportError> {
        self.immunity
            .iter()
            .map(|q| {
                let prefix = self.prefix(&q.target)?;
                let k = |id: usize| self.k_map.get(&id).copied().unwrap_or(id as u64);
                Ok(check_canonical_immunity_with(
                    prefix,
                    |id| self.modulus(id),
                    &self.pool,
                    k,
                    q.index_bound,
                )?)
            })
            .collect()
    }

    pub fn domination_verdicts(&self) -> Result<Vec<Verdict>, ReportError> {
        self.domination
            .iter()
            .map(|q| {
                let prefix = self.prefix(&q.target)?;
                let read = if q.complement {
                    prefix.complemented()
                } else {
                    prefix.clone()
                };
                Ok(refute_domination(
                    read.principal(),
                    &q.f.decode(),
                    q.lo,
                    q.hi,
                    q.indexing,
                )?)
            })
            .collect()
    }

    pub fn effective_verdicts(&self) -> Result<Vec<Verdict>, ReportError> {
        self.effective
            .iter()
            .map(|q| {
                let prefix = self.prefix(&q.target)?;
                Ok(check_effective_immunity(
                    prefix,
                    &q.h.decode(),
                    &self.programs,
                    q.lo,
                    q.hi,
                    q.budget,
                )?)
            })
            .collect()
    }
}

fn indexing_name(i: Indexing) -> &'static str {
    match i {
        Indexing::FromZero => "from0",
        Indexing::FromOne => "from1",
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "construction\t{}", self.construction)?;
        for (k, v) in &self.params {
            writeln!(f, "param\t{k}\t{v}")?;
        }
        for (name, p) in &self.prefixes {
            writeln!(f, "prefix\t{name}\t{p}")?;
        }
        for line in self.pool.to_string().lines() {
            writeln!(f, "numbering\t{line}")?;
        }
        for (id, code) in &self.moduli {
            let id = id.map_or("*".to_string(), |i| i.to_string());
            writeln!(f, "modulus\t{id}\t{code}")?;
        }
        for (id, k) in &self.k_map {
            writeln!(f, "kmap\t{id}\t{k}")?;
        }
        for q in &self.immunity {
            writeln!(f, "immunity\t{}\t{}", q.target, q.index_bound)?;
        }
        for q in &self.domination {
            let side = if q.complement { "complement" } else { "set" };
            writeln!(
                f,
                "domination\t{}\t{side}\t{}\t{}\t{}\t{}",
                q.target,
                q.f,
                q.lo,
                q.hi,
                indexing_name(q.indexing)
            )?;
        }
        for q in &self.effective {
            writeln!(
                f,
                "effective\t{}\t{}\t{}\t{}\t{}",
                q.target, q.h, q.lo, q.hi, q.budget
            )?;
        }
        for (e, code) in self.programs.iter().enumerate() {
            writeln!(f, "program\t{e}\t{code}")?;
        }
        for n in &self.notes {
            writeln!(f, "note\t{n}")?;
        }
        write!(f, "{}", self.trace)?;
        for link in &self.chain {
            writeln!(f, "{link}")?;
        }
        Ok(())
    }
}

impl FromStr for Report {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut r = Report::default();
        let mut pool_lines = String::new();
        let mut trace_lines = String::new();
        for (n, line) in s.lines().enumerate() {
            let bad = |reason: &str| ReportError::Parse {
                line: n + 1,
                reason: reason.to_string(),
            };
            if line.trim().is_empty() {
                continue;
            }
            let (kind, rest) = line.split_once('\t').unwrap_or((line, ""));
            let f: Vec<&str> = rest.split('\t').collect();
            let num = |k: usize| -> Result<u64, ReportError> {
                f.get(k)
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| bad("expected a number"))
            };
            let code = |k: usize| -> Result<ProgramCode, ReportError> {
                f.get(k)
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| bad("expected a code"))
            };
            match kind {
                "construction" => r.construction = rest.to_string(),
                "param" => {
                    let (k, v) = rest
                        .split_once('\t')
                        .ok_or_else(|| bad("param needs a value"))?;
                    r.params.push((k.to_string(), v.to_string()));
                }
                "prefix" => {
                    let (name, p) = rest
                        .split_once('\t')
                        .ok_or_else(|| bad("prefix needs a name"))?;
                    let p: SetPrefix = p.parse().map_err(|_| bad("bad prefix"))?;
                    r.prefixes.push((name.to_string(), p));
                }
                "numbering" => {
                    pool_lines.push_str(rest);
                    pool_lines.push('\n');
                }
                "modulus" => {
                    let id = match f[0] {
                        "*" => None,
                        x => Some(x.parse().map_err(|_| bad("bad id"))?),
                    };
                    r.moduli.insert(id, code(1)?);
                }
                "kmap" => {
                    r.k_map.insert(num(0)? as usize, num(1)?);
                }
                "immunity" => r.immunity.push(ImmunityQuery {
                    target: f[0].to_string(),
                    index_bound: num(1)?,
                }),
                "domination" => r.domination.push(DominationQuery {
                    target: f[0].to_string(),
                    complement: match f.get(1) {
                        Some(&"set") => false,
                        Some(&"complement") => true,
                        _ => return Err(bad("side must be set or complement")),
                    },
                    f: code(2)?,
                    lo: num(3)?,
                    hi: num(4)?,
                    indexing: match f.get(5) {
                        Some(&"from0") => Indexing::FromZero,
                        Some(&"from1") => Indexing::FromOne,
                        _ => return Err(bad("indexing must be from0 or from1")),
                    },
                }),
                "effective" => r.effective.push(EffectiveQuery {
                    target: f[0].to_string(),
                    h: code(1)?,
                    lo: num(2)? as usize,
                    hi: num(3)? as usize,
                    budget: num(4)?,
                }),
                "program" => {
                    if num(0)? as usize != r.programs.len() {
                        return Err(bad("program ids must be consecutive from 0"));
                    }
                    r.programs.push(code(1)?);
                }
                "note" => r.notes.push(rest.to_string()),
                "stage" => {
                    trace_lines.push_str(line);
                    trace_lines.push('\n');
                }
                "chain" => r
                    .chain
                    .push(line.parse().map_err(|_| bad("bad chain record"))?),
                _ => return Err(bad("unknown record kind")),
            }
        }
        r.pool = pool_lines.parse().map_err(|e| ReportError::Parse {
            line: 0,
            reason: format!("pool: {e}"),
        })?;
        r.trace = trace_lines.parse().map_err(|e| ReportError::Parse {
            line: 0,
            reason: format!("trace: {e}"),
        })?;
        Ok(r)
    }
}

impl Report {
    pub fn push_stage(&mut self, record: StageRecord) {
        self.trace.push(record);
    }
}
