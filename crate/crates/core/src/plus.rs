//! Complexes of U-towers and U-equivariant maps between them.
//!
//! A tower stands for the cells `[x, i]`, `bottom <= i <= top`, of one
//! generator's U-orbit; `U` sends `[x, i]` to `[x, i - 1]` and kills the
//! bottom cell. Arrows and map entries act by `[x, i] -> c [y, i - shift]`,
//! dropping terms that leave the target tower.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Field, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tower {
    pub label: String,
    /// Relative grading of the cell `[x, 0]`.
    pub grading: i64,
    pub bottom: i64,
    pub top: Option<i64>,
}

impl Tower {
    pub fn contains(&self, i: i64) -> bool {
        i >= self.bottom && self.top.map_or(true, |t| i <= t)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.top, Some(t) if t < self.bottom)
    }

    /// Number of levels above the bottom, if bounded.
    pub fn height(&self) -> Option<i64> {
        self.top.map(|t| t - self.bottom)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TowerArrow<F: Field> {
    pub from: usize,
    pub to: usize,
    pub shift: i64,
    pub coeff: F,
}

impl<F: Field> TowerArrow<F> {
    fn map_coeff<G: Field>(&self, f: &impl Fn(&F) -> G) -> TowerArrow<G> {
        TowerArrow { from: self.from, to: self.to, shift: self.shift, coeff: f(&self.coeff) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlusComplex<F: Field> {
    pub towers: Vec<Tower>,
    pub arrows: Vec<TowerArrow<F>>,
    /// Gradings are integers when 0, residues mod `modulus` otherwise.
    pub modulus: u64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl<F: Field> PlusComplex<F> {
    pub fn new(towers: Vec<Tower>, arrows: Vec<TowerArrow<F>>) -> Self {
        let mut p = PlusComplex { towers, arrows, modulus: 0 };
        p.modulus = p
            .arrows
            .iter()
            .map(|a| p.defect(a.from, a.to, a.shift, -1).unsigned_abs())
            .fold(0, gcd);
        p
    }

    /// How far an arrow misses the grading change `expected`.
    fn defect(&self, from: usize, to: usize, shift: i64, expected: i64) -> i64 {
        self.towers[to].grading - 2 * shift - self.towers[from].grading - expected
    }

    pub fn is_graded(&self) -> bool {
        self.modulus == 0
    }

    pub fn reduce_grading(&self, g: i64) -> i64 {
        if self.modulus == 0 {
            g
        } else {
            g.rem_euclid(self.modulus as i64)
        }
    }

    pub fn cell_grading(&self, tower: usize, i: i64) -> i64 {
        self.reduce_grading(self.towers[tower].grading + 2 * i)
    }

    pub fn is_bounded(&self) -> bool {
        self.towers.iter().all(|t| t.top.is_some())
    }

    /// Removes empty towers and the arrows touching them.
    pub fn drop_empty(&mut self) {
        let mut remap = Vec::with_capacity(self.towers.len());
        let mut kept = Vec::new();
        for t in self.towers.drain(..) {
            if t.is_empty() {
                remap.push(None);
            } else {
                remap.push(Some(kept.len()));
                kept.push(t);
            }
        }
        self.towers = kept;
        self.arrows = self
            .arrows
            .drain(..)
            .filter_map(|a| {
                Some(TowerArrow { from: remap[a.from]?, to: remap[a.to]?, shift: a.shift, coeff: a.coeff })
            })
            .collect();
    }

    pub fn outgoing(&self) -> Vec<Vec<&TowerArrow<F>>> {
        let mut out = alloc::vec![Vec::new(); self.towers.len()];
        for a in &self.arrows {
            out[a.from].push(a);
        }
        out
    }

    /// U-level of the cell `[x, i]`: its distance from the tower bottom.
    pub fn level(&self, tower: usize, i: i64) -> i64 {
        i - self.towers[tower].bottom
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> PlusComplex<G> {
        PlusComplex {
            towers: self.towers.clone(),
            arrows: self.arrows.iter().map(|a| a.map_coeff(&f)).collect(),
            modulus: self.modulus,
        }
    }

    pub fn lift(&self) -> PlusComplex<RatFunc<F>> {
        self.map_coeffs(|c| RatFunc::from_base(c.clone()))
    }

    /// Boundary of the cell `[t, i]`.
    pub fn boundary_cell(&self, t: usize, i: i64) -> Vec<((usize, i64), F)> {
        self.arrows
            .iter()
            .filter(|a| a.from == t && self.towers[a.to].contains(i - a.shift))
            .map(|a| ((a.to, i - a.shift), a.coeff.clone()))
            .collect()
    }

    /// Whether the differential squares to zero on all cells up to `level`.
    pub fn square_vanishes(&self, level: usize) -> bool {
        for (t, tower) in self.towers.iter().enumerate() {
            for l in 0..=level as i64 {
                let i = tower.bottom + l;
                if !tower.contains(i) {
                    break;
                }
                let mut acc: BTreeMap<(usize, i64), F> = BTreeMap::new();
                for ((y, j), c) in self.boundary_cell(t, i) {
                    for (key, d) in self.boundary_cell(y, j) {
                        let slot = acc.entry(key).or_insert_with(F::zero);
                        *slot = slot.add(&c.mul(&d));
                    }
                }
                if acc.values().any(|c| !c.is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    /// Largest gap between the U-levels joined by a single arrow, i.e. the
    /// U-degree of the matrix entry in the complex of tower bottoms.
    fn column_degrees(&self) -> Vec<i64> {
        let mut deg = alloc::vec![0i64; self.towers.len()];
        for a in &self.arrows {
            let d = a.shift + self.towers[a.to].bottom - self.towers[a.from].bottom;
            deg[a.from] = deg[a.from].max(d);
        }
        deg
    }
}

/// Upper bound on the U-nilpotency of the finite part of the homology.
///
/// The finite part is the U-torsion of the free complex generated by the
/// cells just below the tower bottoms; its exponents are bounded by the
/// U-degree of a nonzero maximal minor, hence by the sum of the largest
/// `n/2` column degrees. Bounded complexes are nilpotent below their height.
pub fn nilpotency_bound<F: Field>(p: &PlusComplex<F>) -> usize {
    if p.is_bounded() {
        let h = p.towers.iter().filter_map(Tower::height).max().unwrap_or(0);
        return (h + 1) as usize;
    }
    let mut deg = p.column_degrees();
    deg.sort_unstable_by(|a, b| b.cmp(a));
    let r = p.towers.len() / 2;
    deg.iter().take(r).map(|d| (*d).max(0) as usize).sum::<usize>() + 1
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainMap<F: Field> {
    pub source: PlusComplex<F>,
    pub target: PlusComplex<F>,
    pub entries: Vec<TowerArrow<F>>,
    /// Nominal grading change; used to place the target in the cone.
    pub degree: i64,
}

impl<F: Field> ChainMap<F> {
    pub fn identity(p: &PlusComplex<F>) -> Self {
        let entries = (0..p.towers.len())
            .map(|t| TowerArrow { from: t, to: t, shift: 0, coeff: F::one() })
            .collect();
        ChainMap { source: p.clone(), target: p.clone(), entries, degree: 0 }
    }

    pub fn zero(source: &PlusComplex<F>, target: &PlusComplex<F>, degree: i64) -> Self {
        ChainMap { source: source.clone(), target: target.clone(), entries: Vec::new(), degree }
    }

    fn same_ends(&self, other: &Self) -> Result<()> {
        if self.source.towers != other.source.towers || self.target.towers != other.target.towers {
            return Err(Error::MapMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ends(other)?;
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(ChainMap { entries, ..self.clone() })
    }

    pub fn scale(&self, c: &F) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| TowerArrow { coeff: e.coeff.mul(c), ..e.clone() })
            .collect();
        ChainMap { entries, ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&F::one().neg()))
    }

    pub fn lift(&self) -> ChainMap<RatFunc<F>> {
        ChainMap {
            source: self.source.lift(),
            target: self.target.lift(),
            entries: self.entries.iter().map(|e| e.map_coeff(&|c: &F| RatFunc::from_base(c.clone()))).collect(),
            degree: self.degree,
        }
    }

    /// Image of the cell `[t, i]` as target cells with coefficients.
    pub fn apply_cell(&self, t: usize, i: i64) -> Vec<((usize, i64), F)> {
        self.entries
            .iter()
            .filter(|e| e.from == t)
            .filter(|e| self.target.towers[e.to].contains(i - e.shift))
            .map(|e| ((e.to, i - e.shift), e.coeff.clone()))
            .collect()
    }

    /// Checks U-equivariance on every entry and `d f = f d` on all cells up
    /// to the given U-level.
    pub fn check(&self, level: usize) -> Result<()> {
        for e in &self.entries {
            let src = &self.source.towers[e.from];
            let dst = &self.target.towers[e.to];
            if dst.bottom < src.bottom - e.shift {
                return Err(Error::ChainMapLaw { level: 0, tower: src.label.clone() });
            }
        }
        let out_s = self.source.outgoing();
        let out_t = self.target.outgoing();
        for (t, tower) in self.source.towers.iter().enumerate() {
            for l in 0..=level as i64 {
                let i = tower.bottom + l;
                if !tower.contains(i) {
                    break;
                }
                let mut acc: BTreeMap<(usize, i64), F> = BTreeMap::new();
                let mut push = |key: (usize, i64), c: F| {
                    let slot = acc.entry(key).or_insert_with(F::zero);
                    *slot = slot.add(&c);
                };
                for ((y, j), c) in self.apply_cell(t, i) {
                    for a in &out_t[y] {
                        if self.target.towers[a.to].contains(j - a.shift) {
                            push((a.to, j - a.shift), c.mul(&a.coeff));
                        }
                    }
                }
                for a in &out_s[t] {
                    if self.source.towers[a.to].contains(i - a.shift) {
                        for (key, c) in self.apply_cell(a.to, i - a.shift) {
                            push(key, c.mul(&a.coeff).neg());
                        }
                    }
                }
                if acc.values().any(|c| !c.is_zero()) {
                    return Err(Error::ChainMapLaw { level: l as usize, tower: tower.label.clone() });
                }
            }
        }
        Ok(())
    }

    /// Mapping cone: source towers labelled `A:x`, then target towers
    /// labelled `B:y` with grading offset `-1 - degree`.
    pub fn cone(&self) -> PlusComplex<F> {
        cone_of_family(core::slice::from_ref(self))
    }
}

/// Cone of the map from the direct sum of the sources to the common
/// target. With several sources the labels are `A0:x`, `A1:x`, ...
pub fn cone_of_family<F: Field>(maps: &[ChainMap<F>]) -> PlusComplex<F> {
    let target = &maps[0].target;
    let mut towers = Vec::new();
    let mut arrows = Vec::new();
    let mut offsets = Vec::new();
    for (n, m) in maps.iter().enumerate() {
        let prefix = if maps.len() == 1 { String::from("A") } else { format!("A{n}") };
        let off = towers.len();
        offsets.push(off);
        for t in &m.source.towers {
            towers.push(Tower { label: format!("{prefix}:{}", t.label), ..t.clone() });
        }
        for a in &m.source.arrows {
            arrows.push(TowerArrow { from: a.from + off, to: a.to + off, shift: a.shift, coeff: a.coeff.neg() });
        }
    }
    let off_b = towers.len();
    let degree = maps[0].degree;
    for t in &target.towers {
        towers.push(Tower {
            label: format!("B:{}", t.label),
            grading: t.grading - degree - 1,
            ..t.clone()
        });
    }
    for a in &target.arrows {
        arrows.push(TowerArrow { from: a.from + off_b, to: a.to + off_b, shift: a.shift, coeff: a.coeff.clone() });
    }
    for (m, off) in maps.iter().zip(offsets) {
        for e in &m.entries {
            arrows.push(TowerArrow { from: e.from + off, to: e.to + off_b, shift: e.shift, coeff: e.coeff.clone() });
        }
    }
    PlusComplex::new(towers, arrows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::F2;
    use alloc::vec;

    fn tower(label: &str, grading: i64, bottom: i64) -> Tower {
        Tower { label: label.into(), grading, bottom, top: None }
    }

    #[test]
    fn modulus_detects_inhomogeneous_arrows() {
        let one = F2(true);
        let p = PlusComplex::new(
            vec![tower("x", 0, 0), tower("y", -1, 0)],
            vec![TowerArrow { from: 0, to: 1, shift: 0, coeff: one }],
        );
        assert_eq!(p.modulus, 0);
        let q = PlusComplex::new(
            vec![tower("x", 0, 0), tower("y", -1, 0)],
            vec![
                TowerArrow { from: 0, to: 1, shift: 0, coeff: one },
                TowerArrow { from: 0, to: 1, shift: 2, coeff: one },
            ],
        );
        assert_eq!(q.modulus, 4);
    }

    #[test]
    fn identity_is_a_chain_map_and_cone_squares_to_zero() {
        let one = F2(true);
        let p = PlusComplex::new(
            vec![tower("x", 0, 0), tower("y", 1, 0)],
            vec![TowerArrow { from: 0, to: 1, shift: 1, coeff: one }],
        );
        assert_eq!(p.modulus, 0);
        let id = ChainMap::identity(&p);
        id.check(5).unwrap();
        let cone = id.cone();
        assert_eq!(cone.towers.len(), 4);
        assert!(cone.square_vanishes(5));
    }
}
