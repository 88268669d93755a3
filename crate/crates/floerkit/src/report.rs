//! Serializable reports and their table rendering. Every report parses back
//! from its own JSON.

use std::fmt::Write as _;

use floerkit_core::analyzer::{AnalysisReport, Comparison};
use floerkit_core::{RankPair, UModule, ValidationReport};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pair {
    pub towers: usize,
    pub finite: usize,
}

impl From<RankPair> for Pair {
    fn from(p: RankPair) -> Self {
        Pair { towers: p.towers, finite: p.finite }
    }
}

impl std::fmt::Display for Pair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.towers, self.finite)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleReport {
    /// 0 for Z-graded modules, otherwise gradings are residues.
    pub modulus: u64,
    pub corank: usize,
    pub towers: Vec<i64>,
    pub finite_parts: Vec<(i64, usize)>,
}

impl From<&UModule> for ModuleReport {
    fn from(m: &UModule) -> Self {
        ModuleReport {
            modulus: m.modulus,
            corank: m.corank,
            towers: m.towers.clone(),
            finite_parts: m.finite_parts.clone(),
        }
    }
}

impl ModuleReport {
    fn describe(&self) -> String {
        if self.corank == 0 && self.finite_parts.is_empty() {
            return "0".into();
        }
        let mut parts: Vec<String> = self.towers.iter().map(|g| format!("T+({g})")).collect();
        parts.extend(self.finite_parts.iter().map(|(g, d)| format!("F^{d}({g})")));
        let mut s = parts.join(" + ");
        if self.modulus != 0 {
            let _ = write!(s, "  [gradings mod {}]", self.modulus);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub name: String,
    pub field: String,
    /// Generator whose Maslov grading is 0 in every reported grading.
    pub base: String,
}

impl Header {
    fn line(&self) -> String {
        format!("complex {} over {}; gradings relative to generator {}", self.name, self.field, self.base)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationEntry {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub name: String,
    pub field: String,
    pub valid: bool,
    pub violations: Vec<ViolationEntry>,
}

impl ValidateReport {
    pub fn new(name: &str, field: &str, r: &ValidationReport) -> Self {
        ValidateReport {
            name: name.into(),
            field: field.into(),
            valid: r.is_valid(),
            violations: r
                .violations
                .iter()
                .map(|v| ViolationEntry { kind: v.kind().into(), message: v.to_string() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HfkLevel {
    pub k: i64,
    pub total: usize,
    pub by_grading: Vec<(i64, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HfkReport {
    pub header: Header,
    pub levels: Vec<HfkLevel>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LargeReport {
    pub header: Header,
    pub n: i64,
    pub k: i64,
    pub hypothesis_verified: bool,
    pub module: ModuleReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroReport {
    pub header: Header,
    pub k: i64,
    pub module: ModuleReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistedReport {
    pub header: Header,
    pub k: i64,
    pub generic_rank: usize,
    pub corank: usize,
    pub modulus: u64,
    pub per_grading: Vec<(i64, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityEntry {
    pub name: String,
    pub k: i64,
    pub left: Pair,
    pub right: Pair,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityEntry {
    pub k: i64,
    pub degenerate: bool,
    pub hypothesis: bool,
    pub cases: Vec<(String, bool)>,
    pub left: Pair,
    pub right: Pair,
    /// `scalar` or `incomparable-scalar`.
    pub comparison: String,
    pub comparison_holds: bool,
    pub conclusion: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VhEntry {
    pub k: i64,
    pub image_h_in_image_v: bool,
    pub v_equals_h: bool,
    pub v_shape: String,
    pub v_image: Pair,
    pub h_image: Pair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DichotomyEntry {
    pub k: i64,
    pub b_pair: Pair,
    pub applicable: bool,
    pub v_shape: String,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionEntry {
    pub name: String,
    pub status: String,
    pub assumptions: Vec<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub header: Header,
    pub top_alexander: i64,
    pub norm_value: i64,
    pub hfk_top_dim: usize,
    pub fibered_candidate: bool,
    pub degenerate: bool,
    pub cone_at_top: ModuleReport,
    pub twisted_rank_at_top: usize,
    pub rank_checks: Vec<IdentityEntry>,
    pub model_inconsistent: bool,
    pub inequality: InequalityEntry,
    pub vh: Vec<VhEntry>,
    pub dichotomy: DichotomyEntry,
    pub propg_conditions: Vec<ConditionEntry>,
    pub assumptions: Vec<String>,
}

impl AnalyzeReport {
    pub fn new(header: Header, r: &AnalysisReport) -> Self {
        let (comparison, comparison_holds) = match r.inequality.comparison {
            Comparison::Scalar { holds } => ("scalar", holds),
            Comparison::IncomparableScalar { pairwise_holds } => ("incomparable-scalar", pairwise_holds),
        };
        AnalyzeReport {
            header,
            top_alexander: r.top_alexander,
            norm_value: r.norm_value,
            hfk_top_dim: r.hfk_top_dim,
            fibered_candidate: r.fibered_candidate,
            degenerate: r.degenerate,
            cone_at_top: (&r.cone_at_top).into(),
            twisted_rank_at_top: r.twisted_rank_at_top,
            rank_checks: r
                .rank_checks
                .iter()
                .map(|c| IdentityEntry {
                    name: c.name.clone(),
                    k: c.k,
                    left: c.left.into(),
                    right: c.right.into(),
                    pass: c.pass,
                })
                .collect(),
            model_inconsistent: r.model_inconsistent,
            inequality: InequalityEntry {
                k: r.inequality.k,
                degenerate: r.inequality.degenerate,
                hypothesis: r.inequality.hypothesis,
                cases: r.inequality.cases.clone(),
                left: r.inequality.left.into(),
                right: r.inequality.right.into(),
                comparison: comparison.into(),
                comparison_holds,
                conclusion: r.inequality.conclusion.as_str().into(),
            },
            vh: r
                .vh
                .iter()
                .map(|v| VhEntry {
                    k: v.k,
                    image_h_in_image_v: v.image_h_in_image_v,
                    v_equals_h: v.v_equals_h,
                    v_shape: v.v_shape.as_str().into(),
                    v_image: v.v_ranks.image.into(),
                    h_image: v.h_ranks.image.into(),
                })
                .collect(),
            dichotomy: DichotomyEntry {
                k: r.dichotomy.k,
                b_pair: r.dichotomy.b_pair.into(),
                applicable: r.dichotomy.applicable,
                v_shape: r.dichotomy.v_shape.as_str().into(),
                status: r.dichotomy.status.as_str().into(),
            },
            propg_conditions: r
                .propg_conditions
                .iter()
                .map(|c| ConditionEntry {
                    name: c.name.clone(),
                    status: c.status.as_str().into(),
                    assumptions: c.assumptions.clone(),
                    detail: c.detail.clone(),
                })
                .collect(),
            assumptions: r.assumptions.labels().into_iter().map(String::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzCase {
    pub index: usize,
    pub seed: u64,
    pub name: String,
    pub generators: usize,
    /// `None` when every invariant held.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub count: usize,
    pub max_generators: usize,
    pub width: i64,
    pub passed: usize,
    pub cases: Vec<FuzzCase>,
    /// Seed that regenerates the first failing case with `--count 1`.
    pub reproducer: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionEntry {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub criteria: Vec<CriterionEntry>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Validate(ValidateReport),
    Hfk(HfkReport),
    SurgeryLarge(LargeReport),
    SurgeryZero(ZeroReport),
    SurgeryZeroTwisted(TwistedReport),
    Analyze(AnalyzeReport),
    Fuzz(FuzzReport),
    Selftest(SelftestReport),
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Rows padded to the widest cell of each column.
fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c + 1 == row.len() {
                line.push_str(cell);
            } else {
                let _ = write!(line, "{cell:<w$}  ", w = widths[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn grading_list(v: &[(i64, usize)]) -> String {
    if v.is_empty() {
        return "-".into();
    }
    v.iter().map(|(g, d)| format!("{d}@{g}")).collect::<Vec<_>>().join(" ")
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        match self {
            Report::Validate(r) => {
                let verdict = if r.valid { "valid" } else { "INVALID" };
                let _ = writeln!(s, "complex {} over {}: {verdict}", r.name, r.field);
                let rows: Vec<Vec<String>> =
                    r.violations.iter().map(|v| vec![v.kind.clone(), v.message.clone()]).collect();
                s.push_str(&aligned(&rows));
            }
            Report::Hfk(r) => {
                let _ = writeln!(s, "{}", r.header.line());
                let mut rows = vec![vec!["k".to_string(), "dim".into(), "by grading (dim@grading)".into()]];
                for l in &r.levels {
                    rows.push(vec![l.k.to_string(), l.total.to_string(), grading_list(&l.by_grading)]);
                }
                s.push_str(&aligned(&rows));
            }
            Report::SurgeryLarge(r) => {
                let _ = writeln!(s, "{}", r.header.line());
                let mut rows = vec![
                    vec!["surgery".to_string(), r.n.to_string()],
                    vec!["k".into(), r.k.to_string()],
                    vec!["homology".into(), r.module.describe()],
                ];
                if !r.hypothesis_verified {
                    rows.push(vec!["note".into(), "hypothesis-unverified (n < 2d, forced)".into()]);
                }
                s.push_str(&aligned(&rows));
            }
            Report::SurgeryZero(r) => {
                let _ = writeln!(s, "{}", r.header.line());
                s.push_str(&aligned(&[
                    vec!["k".to_string(), r.k.to_string()],
                    vec!["homology".into(), r.module.describe()],
                    vec!["rank".into(), Pair { towers: r.module.corank, finite: r.module.finite_parts.iter().map(|p| p.1).sum() }.to_string()],
                ]));
            }
            Report::SurgeryZeroTwisted(r) => {
                let _ = writeln!(s, "{}", r.header.line());
                let mut rows = vec![
                    vec!["k".to_string(), r.k.to_string()],
                    vec!["generic rank".into(), r.generic_rank.to_string()],
                    vec!["by grading".into(), grading_list(&r.per_grading)],
                ];
                if r.corank != 0 {
                    rows.push(vec!["towers".into(), r.corank.to_string()]);
                }
                if r.modulus != 0 {
                    rows.push(vec!["gradings mod".into(), r.modulus.to_string()]);
                }
                s.push_str(&aligned(&rows));
            }
            Report::Analyze(r) => {
                let _ = writeln!(s, "{}", r.header.line());
                let assumed = if r.assumptions.is_empty() { "none".to_string() } else { r.assumptions.join(", ") };
                s.push_str(&aligned(&[
                    vec!["top Alexander grading d".to_string(), r.top_alexander.to_string()],
                    vec!["pairing 2d+1".into(), r.norm_value.to_string()],
                    vec!["hfk at d".into(), r.hfk_top_dim.to_string()],
                    vec!["fibered candidate".into(), format!("{}{}", yes(r.fibered_candidate), if r.degenerate { " (degenerate, d = 0)" } else { "" })],
                    vec!["cone at d-1".into(), r.cone_at_top.describe()],
                    vec!["twisted rank at d-1".into(), r.twisted_rank_at_top.to_string()],
                    vec!["assumed".into(), assumed],
                ]));
                s.push_str("\nrank checks\n");
                let mut rows = vec![vec!["identity".to_string(), "k".into(), "left".into(), "right".into(), "result".into()]];
                for c in &r.rank_checks {
                    rows.push(vec![c.name.clone(), c.k.to_string(), c.left.to_string(), c.right.to_string(), if c.pass { "pass".into() } else { "FAIL".into() }]);
                }
                s.push_str(&aligned(&rows));
                if r.model_inconsistent {
                    s.push_str("model inconsistent: v at d-1 is an isomorphism but hfk at d is nonzero\n");
                }
                let q = &r.inequality;
                let _ = writeln!(
                    s,
                    "\ncone rank inequality at k = {}: hypothesis im h in im v {}; {} vs {} ({}, {}); {}",
                    q.k,
                    yes(q.hypothesis),
                    q.left,
                    q.right,
                    q.comparison,
                    if q.comparison_holds { "holds" } else { "fails" },
                    q.conclusion
                );
                for (case, matches) in &q.cases {
                    let _ = writeln!(s, "  case {case}: {}", if *matches { "matches" } else { "not-applicable" });
                }
                s.push_str("\nv/h conditions\n");
                let mut rows = vec![vec!["k".to_string(), "im h in im v".into(), "v = h".into(), "v is".into(), "im v".into(), "im h".into()]];
                for v in &r.vh {
                    rows.push(vec![v.k.to_string(), yes(v.image_h_in_image_v).into(), yes(v.v_equals_h).into(), v.v_shape.clone(), v.v_image.to_string(), v.h_image.to_string()]);
                }
                s.push_str(&aligned(&rows));
                let _ = writeln!(
                    s,
                    "\ntwisted surjective-or-zero at k = {}: H(B+) = {}, v is {}; {}",
                    r.dichotomy.k, r.dichotomy.b_pair, r.dichotomy.v_shape, r.dichotomy.status
                );
                s.push_str("\nconditions\n");
                let mut rows = vec![vec!["condition".to_string(), "status".into(), "conditional on".into(), "detail".into()]];
                for c in &r.propg_conditions {
                    let on = if c.assumptions.is_empty() { "-".to_string() } else { c.assumptions.join(", ") };
                    rows.push(vec![c.name.clone(), c.status.clone(), on, c.detail.clone()]);
                }
                s.push_str(&aligned(&rows));
            }
            Report::Fuzz(r) => {
                let _ = writeln!(s, "fuzz seed {} count {} (max {} generators, width {})", r.seed, r.count, r.max_generators, r.width);
                let mut rows = Vec::new();
                for c in &r.cases {
                    let verdict = match &c.failure {
                        None => "pass".to_string(),
                        Some(f) => format!("FAIL: {f}"),
                    };
                    rows.push(vec![c.index.to_string(), c.seed.to_string(), c.name.clone(), c.generators.to_string(), verdict]);
                }
                s.push_str(&aligned(&rows));
                let _ = writeln!(s, "{}/{} invariant suites pass", r.passed, r.count);
                if let Some(seed) = r.reproducer {
                    let _ = writeln!(s, "reproduce the first failure with: floerkit fuzz --seed {seed} --count 1");
                }
            }
            Report::Selftest(r) => {
                for c in &r.criteria {
                    let _ = writeln!(s, "criterion {} {}: {} ({})", c.id, c.name, if c.pass { "pass" } else { "FAIL" }, c.detail);
                }
                let _ = writeln!(s, "{}", if r.passed { "selftest passed" } else { "selftest FAILED" });
            }
        }
        s
    }
}
