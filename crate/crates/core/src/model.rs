//! Input model for CFK-infinity: generators, decorated arrows, the flip
//! involution, validation, and region subquotients.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, F2};
use crate::plus::{PlusComplex, Tower, TowerArrow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum FieldKind {
    #[default]
    F2,
    Q,
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::F2 => f.write_str("F2"),
            FieldKind::Q => f.write_str("Q"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub alexander: i64,
    pub maslov: Ratio<i64>,
}

/// `from -> to` contributes `coeff * [to, i - nw, j - nz]` to the boundary
/// of `[from, i, j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub from: String,
    pub to: String,
    pub nw: i64,
    pub nz: i64,
    pub coeff: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CfkComplex {
    pub name: String,
    pub field: FieldKind,
    pub spinc: Option<String>,
    pub generators: Vec<Generator>,
    pub arrows: Vec<Arrow>,
    pub flip: Option<BTreeMap<String, String>>,
    /// Signs of the flip map over Q; every generator defaults to +1.
    pub flip_signs: Option<BTreeMap<String, i64>>,
}

impl CfkComplex {
    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.name == name)
    }

    /// Generator names in sorted order; this is the tower order used by
    /// every derived complex.
    pub fn sorted_names(&self) -> Vec<&str> {
        let mut names: Vec<&str> = self.generators.iter().map(|g| g.name.as_str()).collect();
        names.sort_unstable();
        names
    }

    /// Generator whose Maslov grading anchors all relative gradings: the
    /// one with the largest Alexander grading, ties broken by name.
    pub fn base_generator(&self) -> Option<&Generator> {
        self.generators
            .iter()
            .max_by(|a, b| a.alexander.cmp(&b.alexander).then_with(|| b.name.cmp(&a.name)))
    }

    pub fn relative_maslov(&self, name: &str) -> Result<i64> {
        let g = self
            .generator(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        let base = self.base_generator().expect("complex has a generator");
        let diff = g.maslov - base.maslov;
        if diff.is_integer() {
            Ok(diff.to_integer())
        } else {
            Err(Error::NonIntegralGrading(name.to_string()))
        }
    }

    pub fn top_alexander_bound(&self) -> i64 {
        self.generators.iter().map(|g| g.alexander).max().unwrap_or(0)
    }

    pub fn flip_of(&self, name: &str) -> Option<&str> {
        self.flip.as_ref()?.get(name).map(String::as_str)
    }

    pub fn flip_sign(&self, name: &str) -> i64 {
        self.flip_signs
            .as_ref()
            .and_then(|s| s.get(name).copied())
            .unwrap_or(1)
    }

    /// Fails unless the complex validates cleanly.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = validate_complex(self);
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidComplex(report.violations.len()))
        }
    }

    /// Fails unless a flip is present and the whole complex validates.
    pub fn ensure_flip(&self) -> Result<()> {
        if self.flip.is_none() {
            return Err(Error::FlipRequired);
        }
        let report = validate_complex(self);
        if report.violations.iter().any(Violation::is_flip) {
            return Err(Error::InvalidFlip);
        }
        if !report.is_valid() {
            return Err(Error::InvalidComplex(report.violations.len()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    DuplicateName { name: String },
    UnknownGenerator { arrow: usize, name: String },
    NegativeBasepoint { arrow: usize },
    ZeroCoefficient { arrow: usize },
    BadDenominator { name: String },
    AlexanderMismatch { arrow: usize, from: String, to: String },
    MaslovMismatch { arrow: usize, from: String, to: String },
    NonIntegralMaslov { name: String },
    SquareNonzero { from: String, to: String, nw: i64, nz: i64 },
    FlipUnknown { name: String },
    FlipNotTotal { name: String },
    FlipNotInvolution { name: String },
    FlipAlexander { name: String },
    FlipMaslov { name: String },
    FlipMissingArrow { from: String, to: String, nw: i64, nz: i64 },
    FlipBadSign { name: String },
}

impl Violation {
    pub fn is_flip(&self) -> bool {
        matches!(
            self,
            Violation::FlipUnknown { .. }
                | Violation::FlipNotTotal { .. }
                | Violation::FlipNotInvolution { .. }
                | Violation::FlipAlexander { .. }
                | Violation::FlipMaslov { .. }
                | Violation::FlipMissingArrow { .. }
                | Violation::FlipBadSign { .. }
        )
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::DuplicateName { .. } => "duplicate-name",
            Violation::UnknownGenerator { .. } => "unknown-generator",
            Violation::NegativeBasepoint { .. } => "negative-basepoint",
            Violation::ZeroCoefficient { .. } => "zero-coefficient",
            Violation::BadDenominator { .. } => "bad-denominator",
            Violation::AlexanderMismatch { .. } => "alexander-mismatch",
            Violation::MaslovMismatch { .. } => "maslov-mismatch",
            Violation::NonIntegralMaslov { .. } => "non-integral-maslov",
            Violation::SquareNonzero { .. } => "differential-square",
            Violation::FlipUnknown { .. } => "flip-unknown",
            Violation::FlipNotTotal { .. } => "flip-not-total",
            Violation::FlipNotInvolution { .. } => "flip-not-involution",
            Violation::FlipAlexander { .. } => "flip-alexander",
            Violation::FlipMaslov { .. } => "flip-maslov",
            Violation::FlipMissingArrow { .. } => "flip-missing-arrow",
            Violation::FlipBadSign { .. } => "flip-bad-sign",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateName { name } => write!(f, "generator name `{name}` is used twice"),
            Violation::UnknownGenerator { arrow, name } => {
                write!(f, "arrow #{arrow} references unknown generator `{name}`")
            }
            Violation::NegativeBasepoint { arrow } => {
                write!(f, "arrow #{arrow} has a negative basepoint count")
            }
            Violation::ZeroCoefficient { arrow } => {
                write!(f, "arrow #{arrow} has coefficient zero in the field")
            }
            Violation::BadDenominator { name } => {
                write!(f, "generator `{name}` has a zero Maslov denominator")
            }
            Violation::AlexanderMismatch { arrow, from, to } => write!(
                f,
                "arrow #{arrow} {from} -> {to} fails A(from) - A(to) = nz - nw"
            ),
            Violation::MaslovMismatch { arrow, from, to } => write!(
                f,
                "arrow #{arrow} {from} -> {to} fails M(from) - M(to) = 1 - 2nw"
            ),
            Violation::NonIntegralMaslov { name } => {
                write!(f, "Maslov grading of `{name}` differs from the base by a non-integer")
            }
            Violation::SquareNonzero { from, to, nw, nz } => write!(
                f,
                "d^2 != 0 from {from} to {to} at (nw, nz) = ({nw}, {nz})"
            ),
            Violation::FlipUnknown { name } => write!(f, "flip mentions unknown generator `{name}`"),
            Violation::FlipNotTotal { name } => write!(f, "flip is undefined on `{name}`"),
            Violation::FlipNotInvolution { name } => {
                write!(f, "flip applied twice does not fix `{name}`")
            }
            Violation::FlipAlexander { name } => {
                write!(f, "flip fails A(flip(x)) = -A(x) at `{name}`")
            }
            Violation::FlipMaslov { name } => {
                write!(f, "flip fails M(flip(x)) = M(x) - 2A(x) at `{name}`")
            }
            Violation::FlipMissingArrow { from, to, nw, nz } => write!(
                f,
                "arrow {from} -> {to} ({nw}, {nz}) has no mirrored arrow under the flip"
            ),
            Violation::FlipBadSign { name } => {
                write!(f, "flip sign at `{name}` is not +-1 or differs from its partner")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_kind(&self, kind: &str) -> bool {
        self.violations.iter().any(|v| v.kind() == kind)
    }
}

pub fn validate_complex(c: &CfkComplex) -> ValidationReport {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for g in &c.generators {
        if !seen.insert(g.name.as_str()) {
            out.push(Violation::DuplicateName { name: g.name.clone() });
        }
        if *g.maslov.denom() == 0 {
            out.push(Violation::BadDenominator { name: g.name.clone() });
        }
    }
    let by_name: BTreeMap<&str, &Generator> =
        c.generators.iter().map(|g| (g.name.as_str(), g)).collect();

    if let Some(base) = c.base_generator() {
        for g in &c.generators {
            if !(g.maslov - base.maslov).is_integer() {
                out.push(Violation::NonIntegralMaslov { name: g.name.clone() });
            }
        }
    }

    let mut arrows_ok = true;
    for (n, a) in c.arrows.iter().enumerate() {
        let (from, to) = match (by_name.get(a.from.as_str()), by_name.get(a.to.as_str())) {
            (Some(f), Some(t)) => (f, t),
            (f, _) => {
                let name = if f.is_none() { &a.from } else { &a.to };
                out.push(Violation::UnknownGenerator { arrow: n, name: name.clone() });
                arrows_ok = false;
                continue;
            }
        };
        if a.nw < 0 || a.nz < 0 {
            out.push(Violation::NegativeBasepoint { arrow: n });
        }
        if coefficient_is_zero(c.field, a.coeff) {
            out.push(Violation::ZeroCoefficient { arrow: n });
        }
        if from.alexander - to.alexander != a.nz - a.nw {
            out.push(Violation::AlexanderMismatch {
                arrow: n,
                from: a.from.clone(),
                to: a.to.clone(),
            });
        }
        if from.maslov - to.maslov != Ratio::from_integer(1 - 2 * a.nw) {
            out.push(Violation::MaslovMismatch {
                arrow: n,
                from: a.from.clone(),
                to: a.to.clone(),
            });
        }
    }

    if arrows_ok {
        match c.field {
            FieldKind::F2 => square_violations::<F2>(c, &mut out),
            FieldKind::Q => square_violations::<BigRational>(c, &mut out),
        }
    }
    if c.flip.is_some() {
        flip_violations(c, &by_name, arrows_ok, &mut out);
    }
    ValidationReport { violations: out }
}

fn coefficient_is_zero(field: FieldKind, coeff: i64) -> bool {
    match field {
        FieldKind::F2 => coeff % 2 == 0,
        FieldKind::Q => coeff == 0,
    }
}

type Key = (String, String, i64, i64);

/// Arrows summed over identical (from, to, nw, nz), zero sums dropped.
fn aggregated<F: Field>(c: &CfkComplex) -> BTreeMap<Key, F> {
    let mut acc: BTreeMap<Key, F> = BTreeMap::new();
    for a in &c.arrows {
        let slot = acc
            .entry((a.from.clone(), a.to.clone(), a.nw, a.nz))
            .or_insert_with(F::zero);
        *slot = slot.add(&F::from_i64(a.coeff));
    }
    acc.retain(|_, v| !v.is_zero());
    acc
}

fn square_violations<F: Field>(c: &CfkComplex, out: &mut Vec<Violation>) {
    let arrows = aggregated::<F>(c);
    let mut outgoing: BTreeMap<&str, Vec<(&str, i64, i64, &F)>> = BTreeMap::new();
    for ((from, to, nw, nz), coeff) in &arrows {
        outgoing.entry(from).or_default().push((to, *nw, *nz, coeff));
    }
    let mut squares: BTreeMap<(&str, &str, i64, i64), F> = BTreeMap::new();
    for (x, firsts) in &outgoing {
        for (y, nw1, nz1, c1) in firsts {
            let Some(seconds) = outgoing.get(y) else { continue };
            for (z, nw2, nz2, c2) in seconds {
                let slot = squares.entry((x, z, nw1 + nw2, nz1 + nz2)).or_insert_with(F::zero);
                *slot = slot.add(&c1.mul(c2));
            }
        }
    }
    for ((x, z, nw, nz), total) in squares {
        if !total.is_zero() {
            out.push(Violation::SquareNonzero {
                from: x.to_string(),
                to: z.to_string(),
                nw,
                nz,
            });
        }
    }
}

fn flip_violations(
    c: &CfkComplex,
    by_name: &BTreeMap<&str, &Generator>,
    arrows_ok: bool,
    out: &mut Vec<Violation>,
) {
    let flip = c.flip.as_ref().expect("caller checked");
    let mut structural = false;
    for (k, v) in flip {
        for name in [k, v] {
            if !by_name.contains_key(name.as_str()) {
                out.push(Violation::FlipUnknown { name: name.clone() });
                structural = true;
            }
        }
    }
    for g in &c.generators {
        let Some(image) = flip.get(&g.name) else {
            out.push(Violation::FlipNotTotal { name: g.name.clone() });
            structural = true;
            continue;
        };
        let Some(target) = by_name.get(image.as_str()) else { continue };
        if flip.get(image) != Some(&g.name) {
            out.push(Violation::FlipNotInvolution { name: g.name.clone() });
            structural = true;
        }
        if target.alexander != -g.alexander {
            out.push(Violation::FlipAlexander { name: g.name.clone() });
        }
        if target.maslov != g.maslov - Ratio::from_integer(2 * g.alexander) {
            out.push(Violation::FlipMaslov { name: g.name.clone() });
        }
    }
    if c.field == FieldKind::Q {
        for g in &c.generators {
            let s = c.flip_sign(&g.name);
            let partner = flip.get(&g.name).map(|p| c.flip_sign(p)).unwrap_or(s);
            if (s != 1 && s != -1) || partner != s {
                out.push(Violation::FlipBadSign { name: g.name.clone() });
                structural = true;
            }
        }
    }
    if structural || !arrows_ok {
        return;
    }
    match c.field {
        FieldKind::F2 => mirror_violations::<F2>(c, out),
        FieldKind::Q => mirror_violations::<BigRational>(c, out),
    }
}

fn mirror_violations<F: Field>(c: &CfkComplex, out: &mut Vec<Violation>) {
    let arrows = aggregated::<F>(c);
    for ((x, y, nw, nz), coeff) in &arrows {
        let fx = c.flip_of(x).expect("flip is total").to_string();
        let fy = c.flip_of(y).expect("flip is total").to_string();
        let sign = F::from_i64(c.flip_sign(x) * c.flip_sign(y));
        let want = sign.mul(coeff);
        if arrows.get(&(fx, fy, *nz, *nw)) != Some(&want) {
            out.push(Violation::FlipMissingArrow {
                from: x.clone(),
                to: y.clone(),
                nw: *nw,
                nz: *nz,
            });
        }
    }
}

/// Regions of the (i, j) plane, each restricted to a U-orbit `j - i = A(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    HalfPlaneI(i64),
    HalfPlaneJ(i64),
    Union(i64, i64),
    Intersection(i64, i64),
    Point(i64, i64),
    Band(i64, i64),
}

impl Region {
    pub fn contains(&self, i: i64, j: i64) -> bool {
        match *self {
            Region::HalfPlaneI(a) => i >= a,
            Region::HalfPlaneJ(b) => j >= b,
            Region::Union(a, b) => i >= a || j >= b,
            Region::Intersection(a, b) => i >= a && j >= b,
            Region::Point(a, b) => i == a && j == b,
            Region::Band(a, b) => a <= i && i <= b,
        }
    }

    /// Tower-index interval `[lo, hi]` of the region on the orbit of a
    /// generator with Alexander grading `alexander`; `hi = None` means
    /// unbounded. Empty intervals have `lo > hi`.
    pub fn interval(&self, alexander: i64) -> (i64, Option<i64>) {
        match *self {
            Region::HalfPlaneI(a) => (a, None),
            Region::HalfPlaneJ(b) => (b - alexander, None),
            Region::Union(a, b) => (a.min(b - alexander), None),
            Region::Intersection(a, b) => (a.max(b - alexander), None),
            Region::Point(a, b) => {
                if alexander == b - a {
                    (a, Some(a))
                } else {
                    let p = a.min(b - alexander);
                    (p + 1, Some(p))
                }
            }
            Region::Band(a, b) => (a, Some(b)),
        }
    }
}

/// The complex spanned by `[x, i]` with `(i, i + A(x))` in the region.
pub fn subquotient<F: Field>(c: &CfkComplex, r: Region) -> Result<PlusComplex<F>> {
    let names = c.sorted_names();
    let position: BTreeMap<&str, usize> = names.iter().enumerate().map(|(n, s)| (*s, n)).collect();
    let mut towers = Vec::with_capacity(names.len());
    for name in &names {
        let g = c.generator(name).expect("sorted from generators");
        let (bottom, top) = r.interval(g.alexander);
        towers.push(Tower {
            label: name.to_string(),
            grading: c.relative_maslov(name)?,
            bottom,
            top,
        });
    }
    let mut arrows = Vec::new();
    for a in &c.arrows {
        let from = *position
            .get(a.from.as_str())
            .ok_or_else(|| Error::UnknownGenerator(a.from.clone()))?;
        let to = *position
            .get(a.to.as_str())
            .ok_or_else(|| Error::UnknownGenerator(a.to.clone()))?;
        let (tx, ty) = (&towers[from], &towers[to]);
        if !tx.is_empty() {
            let below_ok = ty.bottom >= tx.bottom - a.nw;
            let above_ok = match (tx.top, ty.top) {
                (Some(hx), Some(hy)) => hy >= hx - a.nw,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => true,
            };
            if !(below_ok && above_ok) {
                return Err(Error::InadmissibleRegion { from: a.from.clone(), to: a.to.clone() });
            }
        }
        let coeff = F::from_i64(a.coeff);
        if !coeff.is_zero() {
            arrows.push(TowerArrow { from, to, shift: a.nw, coeff });
        }
    }
    let mut p = PlusComplex::new(towers, arrows);
    p.drop_empty();
    Ok(p)
}

/// Exact rational from a numerator/denominator pair.
pub fn big_ratio(r: &Ratio<i64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Formats an exact Maslov grading as `n` or `n/d`.
pub fn format_ratio(r: &Ratio<i64>) -> String {
    if r.denom().is_one() || r.is_zero() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
