//! Floer-theoretic detectors: knot Floer homology by Alexander grading,
//! the top grading and fiberedness test, rank identities from the exact
//! triangle and the mapping cone, the cone rank inequality, conditions on
//! `v` and `h`, and an aggregated report. Topological hypotheses are never
//! decided here; they are carried as user-asserted flags.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, RatFunc};
use crate::homology::{
    family_ranks, image_contained, map_ranks, maps_agree, truncate, truncated_homology,
    u_module_structure, MapRanks, RankPair, UModule,
};
use crate::model::{subquotient, CfkComplex, Region};
use crate::surgery::{build_b, map_h, map_v, map_vh, twisted_map, zero_surgery_homology, zero_surgery_twisted};

/// Homology of the point subquotient `C{i = 0, j = k}` by relative grading.
pub fn hfk_hat<F: Field>(c: &CfkComplex, k: i64) -> Result<BTreeMap<i64, usize>> {
    point_homology::<F>(c, 0, k)
}

fn point_homology<F: Field>(c: &CfkComplex, i: i64, j: i64) -> Result<BTreeMap<i64, usize>> {
    let p = subquotient::<F>(c, Region::Point(i, j))?;
    Ok(truncated_homology(&truncate(&p, 0)))
}

pub fn hfk_total<F: Field>(c: &CfkComplex, k: i64) -> Result<usize> {
    Ok(hfk_hat::<F>(c, k)?.values().sum())
}

fn alexander_range(c: &CfkComplex) -> (i64, i64) {
    let lo = c.generators.iter().map(|g| g.alexander).min().unwrap_or(0);
    let hi = c.generators.iter().map(|g| g.alexander).max().unwrap_or(0);
    (lo, hi)
}

/// Largest `k` with nonzero knot Floer homology.
pub fn top_alexander<F: Field>(c: &CfkComplex) -> Result<i64> {
    let (lo, hi) = alexander_range(c);
    for k in (lo..=hi).rev() {
        if hfk_total::<F>(c, k)? > 0 {
            return Ok(k);
        }
    }
    Err(Error::VanishingHfk)
}

/// Smallest `k` with nonzero knot Floer homology.
pub fn bottom_alexander<F: Field>(c: &CfkComplex) -> Result<i64> {
    let (lo, hi) = alexander_range(c);
    for k in lo..=hi {
        if hfk_total::<F>(c, k)? > 0 {
            return Ok(k);
        }
    }
    Err(Error::VanishingHfk)
}

/// Checks that the graded groups at `k` and `-k` agree after shifting the
/// grading by `2k`.
pub fn hfk_symmetric<F: Field>(c: &CfkComplex) -> Result<bool> {
    let (lo, hi) = alexander_range(c);
    let r = lo.abs().max(hi.abs());
    for k in -r..=r {
        let here = hfk_hat::<F>(c, k)?;
        let there: BTreeMap<i64, usize> =
            hfk_hat::<F>(c, -k)?.into_iter().map(|(g, d)| (g + 2 * k, d)).collect();
        if here != there {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Assumptions {
    pub irreducible: bool,
    pub taut: bool,
    pub torsion_spinc: bool,
}

impl Assumptions {
    pub fn labels(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.irreducible {
            out.push("irreducible");
        }
        if self.taut {
            out.push("taut");
        }
        if self.torsion_spinc {
            out.push("torsion-spinc");
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberedVerdict {
    pub top_alexander: i64,
    pub top_dim: usize,
    pub fibered: bool,
    /// The top grading is zero, so the test says nothing about a fiber.
    pub degenerate: bool,
}

/// Fibered candidate iff the top group is one-dimensional. The verdict is
/// meaningful only for an irreducible complement, which is not checked.
pub fn detect_fibered<F: Field>(c: &CfkComplex) -> Result<FiberedVerdict> {
    let d = top_alexander::<F>(c)?;
    let top_dim = hfk_total::<F>(c, d)?;
    Ok(FiberedVerdict { top_alexander: d, top_dim, fibered: top_dim == 1, degenerate: d == 0 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Holds,
    Fails,
    NotApplicable,
}

impl Status {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Status::Holds
        } else {
            Status::Fails
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::NotApplicable => "not-applicable",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Both sides of an identity between rank pairs, computed separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub k: i64,
    pub left: RankPair,
    pub right: RankPair,
    pub pass: bool,
}

impl IdentityCheck {
    fn new(name: &str, k: i64, left: RankPair, right: RankPair) -> Self {
        IdentityCheck { name: name.to_string(), k, left, right, pass: left == right }
    }
}

pub const TOP_EQUALS_V: &str = "hfk-top = ker v + coker v";
pub const CONE_EQUALS_VH: &str = "cone(v+h) = ker(v+h) + coker(v+h)";
pub const TRIANGLE: &str = "cone(v) = C{(-1,d-1)}";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankIdentities {
    pub d: i64,
    pub checks: Vec<IdentityCheck>,
    /// `v+_{d-1}` induces an isomorphism, which the exact triangle forbids
    /// when the top group is nonzero.
    pub model_inconsistent: bool,
}

impl RankIdentities {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && !self.model_inconsistent
    }
}

/// Levels at which the cone identity is checked: `d - 1`, and also `0`
/// where the cone is Z-graded.
fn cone_levels(d: i64) -> Vec<i64> {
    if d - 1 == 0 {
        vec![0]
    } else {
        vec![d - 1, 0]
    }
}

pub fn check_rank_identities<F: Field>(c: &CfkComplex) -> Result<RankIdentities> {
    c.ensure_flip()?;
    let d = top_alexander::<F>(c)?;
    let k = d - 1;
    let mut checks = Vec::new();

    let top = RankPair::new(0, hfk_total::<F>(c, d)?);
    let v = map_ranks(&map_v::<F>(c, k)?)?;
    checks.push(IdentityCheck::new(TOP_EQUALS_V, k, top, v.kernel.sum(v.cokernel)));

    for level in cone_levels(d) {
        let cone = zero_surgery_homology::<F>(c, level)?.rank_pair();
        let vh = map_ranks(&map_vh::<F>(c, level)?)?;
        checks.push(IdentityCheck::new(CONE_EQUALS_VH, level, cone, vh.kernel.sum(vh.cokernel)));
    }

    let cone_v = u_module_structure(&map_v::<F>(c, k)?.cone())?.rank_pair();
    let point: usize = point_homology::<F>(c, -1, k)?.values().sum();
    checks.push(IdentityCheck::new(TRIANGLE, k, cone_v, RankPair::new(0, point)));

    let model_inconsistent = v.kernel.is_zero() && v.cokernel.is_zero() && !top.is_zero();
    Ok(RankIdentities { d, checks, model_inconsistent })
}

/// How the image of a map sits in its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Surjective,
    Zero,
    /// Target is zero, so the map is both.
    Trivial,
    Neither,
}

impl Shape {
    fn of(r: &MapRanks) -> Self {
        match (r.cokernel.is_zero(), r.image.is_zero()) {
            (true, true) => Shape::Trivial,
            (true, false) => Shape::Surjective,
            (false, true) => Shape::Zero,
            (false, false) => Shape::Neither,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Shape::Surjective => "surjective",
            Shape::Zero => "zero",
            Shape::Trivial => "surjective-and-zero",
            Shape::Neither => "neither",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VhConditions {
    pub k: i64,
    pub image_h_in_image_v: bool,
    pub v_equals_h: bool,
    pub v_shape: Shape,
    pub v_ranks: MapRanks,
    pub h_ranks: MapRanks,
}

pub fn check_vh_conditions<F: Field>(c: &CfkComplex, k: i64) -> Result<VhConditions> {
    let v = map_v::<F>(c, k)?;
    let h = map_h::<F>(c, k)?;
    let v_ranks = map_ranks(&v)?;
    Ok(VhConditions {
        k,
        image_h_in_image_v: image_contained(&h, &v)?,
        v_equals_h: maps_agree(&v, &h)?,
        v_shape: Shape::of(&v_ranks),
        v_ranks,
        h_ranks: map_ranks(&h)?,
    })
}

/// Outcome of comparing two rank pairs as if they were scalar ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    /// Both sides are finite; the scalar inequality is meaningful.
    Scalar { holds: bool },
    /// Towers are present; only the pairwise (towers first) order is recorded.
    IncomparableScalar { pairwise_holds: bool },
}

impl Comparison {
    pub fn compare(left: RankPair, right: RankPair) -> Self {
        if left.towers == 0 && right.towers == 0 {
            Comparison::Scalar { holds: left.finite >= right.finite }
        } else {
            Comparison::IncomparableScalar { pairwise_holds: left >= right }
        }
    }

    pub fn holds(&self) -> bool {
        match *self {
            Comparison::Scalar { holds } => holds,
            Comparison::IncomparableScalar { pairwise_holds } => pairwise_holds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityReport {
    pub k: i64,
    /// `d = 0`, where the level `d - 1` is replaced by `0`.
    pub degenerate: bool,
    pub hypothesis: bool,
    /// Case labels with whether the input matches them.
    pub cases: Vec<(String, bool)>,
    pub left: RankPair,
    pub right: RankPair,
    pub comparison: Comparison,
    pub conclusion: Status,
}

pub const CASE_NONTORSION: &str = "nontorsion spin^c and d >= 1";
pub const CASE_VANISHING: &str = "HF+(Y) = 0";
pub const CASE_DEEP: &str = "d > 1";

/// The cone lower bound `rank H(cone(v+h)_{d-1}) >= rank HFK(d)`, gated on
/// `im h_* ⊆ im v_*` at `d - 1`.
pub fn check_rank_inequality<F: Field>(c: &CfkComplex, assumptions: &Assumptions) -> Result<InequalityReport> {
    c.ensure_flip()?;
    let d = top_alexander::<F>(c)?;
    let degenerate = d < 1;
    let k = if degenerate { 0 } else { d - 1 };
    let hypothesis = image_contained(&map_h::<F>(c, k)?, &map_v::<F>(c, k)?)?;
    let b = u_module_structure(&build_b::<F>(c)?)?;
    let cases = vec![
        (CASE_NONTORSION.to_string(), !assumptions.torsion_spinc && d >= 1),
        (CASE_VANISHING.to_string(), b.is_zero()),
        (CASE_DEEP.to_string(), d > 1),
    ];
    let left = zero_surgery_homology::<F>(c, k)?.rank_pair();
    let right = RankPair::new(0, hfk_total::<F>(c, d)?);
    let comparison = Comparison::compare(left, right);
    let conclusion = if hypothesis { Status::from_bool(comparison.holds()) } else { Status::NotApplicable };
    Ok(InequalityReport { k, degenerate, hypothesis, cases, left, right, comparison, conclusion })
}

/// Surjective-or-zero check for `v+_{d-1}` over the twisted field; it
/// applies when `H(B+)` is one-dimensional and finite there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DichotomyCheck {
    pub k: i64,
    pub b_pair: RankPair,
    pub applicable: bool,
    pub v_shape: Shape,
    pub status: Status,
}

pub fn check_twisted_dichotomy<F: Field>(c: &CfkComplex) -> Result<DichotomyCheck> {
    let d = top_alexander::<F>(c)?;
    let k = d - 1;
    let v = map_v::<F>(c, k)?.lift();
    let b_pair = u_module_structure(&v.target)?.rank_pair();
    let applicable = b_pair == RankPair::new(0, 1);
    let v_shape = Shape::of(&map_ranks(&v)?);
    let status = if applicable {
        Status::from_bool(v_shape != Shape::Neither)
    } else {
        Status::NotApplicable
    };
    Ok(DichotomyCheck { k, b_pair, applicable, v_shape, status })
}

/// A single monotonicity failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityFailure {
    pub k: i64,
    pub map: &'static str,
}

/// Checks `im v_k ⊆ im v_{k+1}` and `im h_k ⊇ im h_{k+1}` for `k` in the
/// given range, inside `H(B+)`.
pub fn check_monotonicity<F: Field>(c: &CfkComplex, ks: core::ops::RangeInclusive<i64>) -> Result<Vec<MonotonicityFailure>> {
    let mut out = Vec::new();
    for k in ks {
        if !image_contained(&map_v::<F>(c, k)?, &map_v::<F>(c, k + 1)?)? {
            out.push(MonotonicityFailure { k, map: "v" });
        }
        if !image_contained(&map_h::<F>(c, k + 1)?, &map_h::<F>(c, k)?)? {
            out.push(MonotonicityFailure { k, map: "h" });
        }
    }
    Ok(out)
}

/// `(v_0)_*` and `(h_0)_*` have the same image rank pair.
pub fn check_symmetry<F: Field>(c: &CfkComplex) -> Result<(RankPair, RankPair)> {
    let v = map_ranks(&map_v::<F>(c, 0)?)?;
    let h = map_ranks(&map_h::<F>(c, 0)?)?;
    Ok((v.image, h.image))
}

/// Image pair of `v_k` and `h_k` jointly; exposed for diagnostics.
pub fn joint_image<F: Field>(c: &CfkComplex, k: i64) -> Result<RankPair> {
    Ok(family_ranks(&[map_v::<F>(c, k)?, map_h::<F>(c, k)?])?.image)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition {
    pub name: String,
    pub status: Status,
    /// Unverified hypotheses the condition is conditional on.
    pub assumptions: Vec<String>,
    pub detail: String,
}

fn condition(name: &str, status: Status, assumptions: &[&str], detail: String) -> Condition {
    Condition {
        name: name.to_string(),
        status,
        assumptions: assumptions.iter().map(|s| s.to_string()).collect(),
        detail,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub name: String,
    pub top_alexander: i64,
    /// The pairing value `2d + 1`.
    pub norm_value: i64,
    pub hfk_top_dim: usize,
    pub fibered_candidate: bool,
    pub degenerate: bool,
    pub cone_at_top: UModule,
    pub twisted_rank_at_top: usize,
    pub rank_checks: Vec<IdentityCheck>,
    pub model_inconsistent: bool,
    pub inequality: InequalityReport,
    pub vh: Vec<VhConditions>,
    pub dichotomy: DichotomyCheck,
    pub propg_conditions: Vec<Condition>,
    pub assumptions: Assumptions,
}

pub fn property_g_report<F: Field>(c: &CfkComplex, assumptions: Assumptions) -> Result<AnalysisReport> {
    c.ensure_flip()?;
    let fib = detect_fibered::<F>(c)?;
    let d = fib.top_alexander;
    let identities = check_rank_identities::<F>(c)?;
    let inequality = check_rank_inequality::<F>(c, &assumptions)?;
    let cone_at_top = zero_surgery_homology::<F>(c, d - 1)?;
    let twisted_top = zero_surgery_twisted::<F>(c, d - 1)?;
    let mut vh = vec![check_vh_conditions::<F>(c, d - 1)?];
    if d - 1 != 0 {
        vh.push(check_vh_conditions::<F>(c, 0)?);
    }
    let dichotomy = check_twisted_dichotomy::<F>(c)?;

    let mut conds = Vec::new();
    conds.push(condition(
        "G1: cone at d-1 is nonzero",
        Status::from_bool(!cone_at_top.is_zero()),
        &["taut"],
        alloc::format!("H(cone) = {}", cone_at_top.rank_pair()),
    ));
    let minimal = match d {
        0 => None,
        1 => {
            let t0 = zero_surgery_twisted::<F>(c, 0)?;
            Some(t0.corank == 0 && t0.generic_rank == 1)
        }
        _ => Some(cone_at_top.rank_pair() == RankPair::new(0, 1)),
    };
    conds.push(condition(
        "G2: minimal cone forces hfk-top = 1",
        match minimal {
            Some(true) => Status::from_bool(fib.top_dim == 1),
            _ => Status::NotApplicable,
        },
        &["irreducible", "taut"],
        alloc::format!("hfk-top = {}", fib.top_dim),
    ));
    conds.push(condition(
        "fibered candidate",
        Status::from_bool(fib.fibered),
        &["irreducible"],
        alloc::format!("top dimension {} at d = {}", fib.top_dim, d),
    ));
    conds.push(condition(
        "rank identities",
        Status::from_bool(identities.all_pass()),
        &[],
        alloc::format!("{} checks", identities.checks.len()),
    ));
    conds.push(condition(
        "cone rank inequality",
        inequality.conclusion,
        &["taut", "torsion-spinc"],
        alloc::format!("{} vs {}", inequality.left, inequality.right),
    ));
    conds.push(condition(
        "twisted surjective-or-zero",
        dichotomy.status,
        &[],
        alloc::format!("H(B+) = {}", dichotomy.b_pair),
    ));

    Ok(AnalysisReport {
        name: c.name.clone(),
        top_alexander: d,
        norm_value: 2 * d + 1,
        hfk_top_dim: fib.top_dim,
        fibered_candidate: fib.fibered,
        degenerate: fib.degenerate,
        cone_at_top,
        twisted_rank_at_top: twisted_top.generic_rank,
        rank_checks: identities.checks,
        model_inconsistent: identities.model_inconsistent,
        inequality,
        vh,
        dichotomy,
        propg_conditions: conds,
        assumptions,
    })
}

/// Twisted image pair of `v_k`; used by the dichotomy tests.
pub fn twisted_v_ranks<F: Field>(c: &CfkComplex, k: i64) -> Result<MapRanks> {
    map_ranks(&map_v::<F>(c, k)?.lift())
}

/// Twisted cone map, re-exported for callers that only import the analyzer.
pub fn twisted_cone_map<F: Field>(c: &CfkComplex, k: i64) -> Result<crate::plus::ChainMap<RatFunc<F>>> {
    twisted_map::<F>(c, k)
}
