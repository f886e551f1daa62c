//! Executable verifiers for the classification statements: each one
//! enumerates (or samples) a domain of point sets, asserts the statement's
//! predicate on every relevant instance, and produces a replayable report
//! with per-branch tallies and full counterexample dumps.

mod domain;
mod finders;
mod verify_cp1;
mod verify_is1;
mod verify_small;
mod verify_x1;

pub use domain::{enumerate_domain, sample_domain};
pub use finders::{find_injective_forget, find_injective_forget_set};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::PointSetDoc;
use crate::linalg::FieldSpec;

pub(crate) use domain::{sample, scan_par, AnyElim, ScanPolicy, SpaceTable};

/// The verifiable statements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StatementId {
    /// Injective-deletion pigeonhole, single factor.
    A1,
    /// Injective-deletion pigeonhole, factor set of size s.
    A2,
    /// Circuit width bound w(S) <= C(s,2) + s.
    X1,
    /// e-circuit width bound with z = s - e + 1.
    #[serde(rename = "x1.1")]
    X11,
    /// Concise defect bound e <= z - 2, equality only on a line.
    #[serde(rename = "o4.1")]
    O41,
    /// Dependent triples vary in exactly one factor, collinearly.
    Z3,
    /// Concise equally dependent 4-sets with defect >= 2 live on a line.
    F1,
    /// The trichotomy for concise equally dependent 5-sets.
    F2,
    /// Rank-2 decomposition spaces: elementary increasing or the short
    /// shape list.
    CP1,
    /// The 6-point classification.
    IS1,
    /// The single-factor defect formula for 6-point sets.
    O8,
}

impl StatementId {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "a1" => StatementId::A1,
            "a2" => StatementId::A2,
            "x1" => StatementId::X1,
            "x1.1" | "x11" => StatementId::X11,
            "o4.1" | "o41" => StatementId::O41,
            "z3" => StatementId::Z3,
            "f1" => StatementId::F1,
            "f2" => StatementId::F2,
            "cp1" => StatementId::CP1,
            "is1" => StatementId::IS1,
            "o8" => StatementId::O8,
            other => {
                return Err(Error::UnsupportedDomain(format!(
                    "unknown statement id `{other}`"
                )))
            }
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            StatementId::A1 => "a1",
            StatementId::A2 => "a2",
            StatementId::X1 => "x1",
            StatementId::X11 => "x1.1",
            StatementId::O41 => "o4.1",
            StatementId::Z3 => "z3",
            StatementId::F1 => "f1",
            StatementId::F2 => "f2",
            StatementId::CP1 => "cp1",
            StatementId::IS1 => "is1",
            StatementId::O8 => "o8",
        }
    }
}

/// Enumeration mode for a verification job.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled { count: u64 },
}

impl Mode {
    fn label(&self) -> String {
        match self {
            Mode::Exhaustive => "exhaustive".into(),
            Mode::Sampled { count } => format!("sampled:{count}"),
        }
    }
}

pub const DEFAULT_BUDGET: u64 = 500_000_000;

/// One verification run: a statement, a domain, a mode, and a budget.
#[derive(Debug, Clone)]
pub struct VerificationJob {
    pub statement: StatementId,
    pub field: FieldSpec,
    /// Space shapes; empty means the statement's default domain.
    pub spaces: Vec<Vec<usize>>,
    /// Set sizes; empty means the statement's default.
    pub sizes: Vec<usize>,
    pub mode: Mode,
    pub seed: u64,
    /// Instance cap: exhaustive jobs refuse when the domain is larger.
    pub budget: u64,
    /// Prune subsets that are not canonical in their factor-permutation
    /// orbit. Never changes the verdict, only the cost.
    pub reduce_symmetry: bool,
}

impl VerificationJob {
    pub fn new(statement: StatementId, field: FieldSpec) -> Self {
        VerificationJob {
            statement,
            field,
            spaces: Vec::new(),
            sizes: Vec::new(),
            mode: Mode::Exhaustive,
            seed: 0,
            budget: DEFAULT_BUDGET,
            reduce_symmetry: false,
        }
    }
}

/// Verdict of a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    Verified,
    CounterexamplesFound { count: usize },
    BudgetRefused { required: String, budget: u64 },
}

/// Replayable result of a verification run. Two runs of the same job are
/// byte-identical; wall-clock timing is deliberately not part of the body.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub statement: &'static str,
    pub tool_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command_line: Option<String>,
    pub field: FieldSpec,
    pub spaces: Vec<Vec<usize>>,
    pub sizes: Vec<usize>,
    pub mode: String,
    pub seed: u64,
    pub budget: u64,
    pub symmetry_reduction: bool,
    /// Total size of the covered domain (subsets across shapes and sizes),
    /// as a decimal string.
    pub domain_size: String,
    /// Leaves actually evaluated (pruned subtrees are covered by soundness
    /// arguments, not visits) or samples drawn.
    pub instances_checked: u64,
    /// Instances meeting the statement's hypothesis.
    pub relevant: u64,
    pub branch_tallies: BTreeMap<String, u64>,
    /// Observed empirical data worth pinning (maxima, shape lists).
    pub observed: BTreeMap<String, String>,
    pub counterexamples: Vec<PointSetDoc>,
    /// Anomalies over GF(2) routed to triage instead of hard failure.
    pub triaged: Vec<PointSetDoc>,
    pub outcome: Outcome,
}

impl VerificationReport {
    pub(crate) fn skeleton(job: &VerificationJob, spaces: Vec<Vec<usize>>, sizes: Vec<usize>) -> Self {
        VerificationReport {
            statement: job.statement.as_str(),
            tool_version: env!("CARGO_PKG_VERSION"),
            command_line: None,
            field: job.field,
            spaces,
            sizes,
            mode: job.mode.label(),
            seed: job.seed,
            budget: job.budget,
            symmetry_reduction: job.reduce_symmetry,
            domain_size: "0".into(),
            instances_checked: 0,
            relevant: 0,
            branch_tallies: BTreeMap::new(),
            observed: BTreeMap::new(),
            counterexamples: Vec::new(),
            triaged: Vec::new(),
            outcome: Outcome::Verified,
        }
    }

    pub(crate) fn tally(&mut self, key: &str, by: u64) {
        *self.branch_tallies.entry(key.to_string()).or_insert(0) += by;
    }

    pub(crate) fn finalize(&mut self) {
        if !self.counterexamples.is_empty() {
            self.outcome = Outcome::CounterexamplesFound {
                count: self.counterexamples.len(),
            };
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Exit-code mapping: 0 verified, 2 counterexample, 3 budget refusal.
    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            Outcome::Verified => 0,
            Outcome::CounterexamplesFound { .. } => 2,
            Outcome::BudgetRefused { .. } => 3,
        }
    }
}

/// Runs a verification job.
pub fn run(job: &VerificationJob) -> Result<VerificationReport> {
    match job.statement {
        StatementId::A1 | StatementId::A2 => finders::verify_finders(job),
        StatementId::O41 | StatementId::Z3 | StatementId::F1 | StatementId::F2 => {
            verify_small::verify(job)
        }
        StatementId::X1 | StatementId::X11 => verify_x1::verify(job),
        StatementId::CP1 => verify_cp1::verify(job),
        StatementId::IS1 | StatementId::O8 => verify_is1::verify(job),
    }
}

/// Default shape lists for the small-set statements: every shape with all
/// factors positive, ambient Segre dimension at most 32 and at most 256
/// rational points (the desk-scale feasibility bound).
pub fn default_small_shapes(field: FieldSpec) -> Vec<Vec<usize>> {
    let p = match field.modulus() {
        Some(p) => p as u128,
        None => return Vec::new(),
    };
    let proj_count = |n: usize| -> u128 { (0..=n).map(|j| p.pow(j as u32)).sum() };
    let mut out = Vec::new();
    // Descending shapes over factors of dimension 1..=7.
    fn rec(
        prefix: &mut Vec<usize>,
        max_next: usize,
        product: usize,
        points: u128,
        proj_count: &dyn Fn(usize) -> u128,
        out: &mut Vec<Vec<usize>>,
    ) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        for n in (1..=max_next).rev() {
            let new_product = product * (n + 1);
            if new_product > 32 {
                continue;
            }
            let new_points = points * proj_count(n);
            if new_points > 256 {
                continue;
            }
            prefix.push(n);
            rec(prefix, n, new_product, new_points, proj_count, out);
            prefix.pop();
        }
    }
    let mut prefix = Vec::new();
    rec(&mut prefix, 7, 1, 1, &proj_count, &mut out);
    out.sort();
    out
}

pub(crate) fn checked_domain_size(
    tables: &[SpaceTable],
    sizes: &[usize],
    budget: u64,
) -> std::result::Result<u128, u128> {
    let mut total: u128 = 0;
    for t in tables {
        for &s in sizes {
            total += domain::domain_size(t, s);
        }
    }
    if total > budget as u128 {
        Err(total)
    } else {
        Ok(total)
    }
}

pub(crate) fn build_tables(shapes: &[Vec<usize>], field: FieldSpec) -> Result<Vec<SpaceTable>> {
    shapes
        .iter()
        .map(|dims| {
            let space = crate::multiproj::MultiprojectiveSpace::new(dims.clone(), field)?;
            SpaceTable::build(&space)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_shapes_reasonable() {
        let f2 = FieldSpec::prime(2).unwrap();
        let shapes = default_small_shapes(f2);
        assert!(shapes.contains(&vec![1]));
        assert!(shapes.contains(&vec![1, 1, 1, 1, 1]));
        assert!(shapes.contains(&vec![3, 3]));
        assert!(!shapes.contains(&vec![4, 4])); // 961 points
        let f3 = FieldSpec::prime(3).unwrap();
        let shapes3 = default_small_shapes(f3);
        assert!(shapes3.contains(&vec![2, 1]));
        assert!(shapes3.contains(&vec![1, 1, 1, 1])); // 256 points exactly
        assert!(!shapes3.contains(&vec![1, 1, 1, 1, 1])); // 1024 points
    }

    #[test]
    fn statement_ids_roundtrip() {
        for s in [
            "a1", "a2", "x1", "x1.1", "o4.1", "z3", "f1", "f2", "cp1", "is1", "o8",
        ] {
            assert_eq!(StatementId::parse(s).unwrap().as_str(), s);
        }
        assert!(StatementId::parse("nope").is_err());
    }
}
