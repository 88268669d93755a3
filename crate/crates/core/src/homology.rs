//! Homology of tower complexes by certified truncation.
//!
//! Write `K_m(M)` for the kernel of `U^m` on a module `M`. For the homology
//! `H` of a complex of unbounded towers, `H = T^c + R` with `c` towers and a
//! finite part `R` killed by `U^N`; once `m >= N`, `dim K_m(H) = c m + dim R`.
//! `K_m(H)` is the image of `H(C^{m-1})` in `H(C)`, and a cycle of U-level
//! `L` bounds in `C` iff it bounds in `C^{L+N}`. Every count below is a rank
//! of finitely many vectors inside one truncation, so the arithmetic is exact.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{reduce_columns, Echelon, SparseVec};
use crate::plus::{cone_of_family, nilpotency_bound, ChainMap, PlusComplex};

/// A finite chain complex with a distinguished basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteComplex<F: Field> {
    /// `(tower label, tower index)` for every basis element.
    pub basis: Vec<(String, i64)>,
    pub gradings: Vec<i64>,
    pub modulus: u64,
    /// Column `j` is the boundary of `basis[j]`.
    pub differential: Vec<SparseVec<F>>,
}

impl<F: Field> FiniteComplex<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn nonzero_entries(&self) -> usize {
        self.differential.iter().map(|c| c.entries().len()).sum()
    }

    pub fn square_vanishes(&self) -> bool {
        self.differential.iter().all(|col| {
            let mut acc = SparseVec::new();
            for (i, c) in col.entries() {
                acc.axpy(c, &self.differential[*i]);
            }
            acc.is_zero()
        })
    }
}

/// The subcomplex `ker U^{delta+1}`: the lowest `delta + 1` cells of every
/// tower, ordered by tower label and then index.
pub fn truncate<F: Field>(p: &PlusComplex<F>, delta: usize) -> FiniteComplex<F> {
    let mut order: Vec<usize> = (0..p.towers.len()).collect();
    order.sort_by(|a, b| p.towers[*a].label.cmp(&p.towers[*b].label));
    let mut cells = Vec::new();
    for t in order {
        let tower = &p.towers[t];
        for l in 0..=delta as i64 {
            let i = tower.bottom + l;
            if tower.contains(i) {
                cells.push((t, i));
            }
        }
    }
    let position: BTreeMap<(usize, i64), usize> =
        cells.iter().enumerate().map(|(n, c)| (*c, n)).collect();
    let differential = cells
        .iter()
        .map(|&(t, i)| {
            SparseVec::from_pairs(p.boundary_cell(t, i).into_iter().map(|(cell, c)| {
                (*position.get(&cell).expect("truncation is a subcomplex"), c)
            }))
        })
        .collect();
    FiniteComplex {
        basis: cells.iter().map(|&(t, i)| (p.towers[t].label.clone(), i)).collect(),
        gradings: cells.iter().map(|&(t, i)| p.cell_grading(t, i)).collect(),
        modulus: p.modulus,
        differential,
    }
}

/// Homology dimension in every grading where it is nonzero.
pub fn truncated_homology<F: Field>(f: &FiniteComplex<F>) -> BTreeMap<i64, usize> {
    let red = reduce_columns(&f.differential);
    let mut chains: BTreeMap<i64, usize> = BTreeMap::new();
    for g in &f.gradings {
        *chains.entry(*g).or_default() += 1;
    }
    let mut rank_from: BTreeMap<i64, usize> = BTreeMap::new();
    for col in &red.image_cols {
        *rank_from.entry(f.gradings[*col]).or_default() += 1;
    }
    let below = |g: i64| {
        let h = g + 1;
        if f.modulus == 0 {
            h
        } else {
            h.rem_euclid(f.modulus as i64)
        }
    };
    chains
        .iter()
        .map(|(g, n)| {
            let out = rank_from.get(g).copied().unwrap_or(0);
            let incoming = rank_from.get(&below(*g)).copied().unwrap_or(0);
            (*g, n - out - incoming)
        })
        .filter(|(_, d)| *d > 0)
        .collect()
}

/// Total homology dimension.
pub fn total_dimension(dims: &BTreeMap<i64, usize>) -> usize {
    dims.values().sum()
}

/// Cells of U-level at most `max_level`, ordered by level then tower, with
/// a single column reduction of the differential. Because the order puts
/// lower levels first, every prefix reduction is the reduction of a
/// smaller truncation.
struct Window<'a, F: Field> {
    p: &'a PlusComplex<F>,
    cells: Vec<(usize, i64)>,
    levels: Vec<usize>,
    position: BTreeMap<(usize, i64), usize>,
    cycles: Vec<(usize, SparseVec<F>)>,
    boundaries: Vec<(usize, SparseVec<F>)>,
}

impl<'a, F: Field> Window<'a, F> {
    fn new(p: &'a PlusComplex<F>, max_level: usize) -> Self {
        let mut cells = Vec::new();
        let mut levels = Vec::new();
        for l in 0..=max_level {
            for (t, tower) in p.towers.iter().enumerate() {
                let i = tower.bottom + l as i64;
                if tower.contains(i) {
                    cells.push((t, i));
                    levels.push(l);
                }
            }
        }
        let position: BTreeMap<(usize, i64), usize> =
            cells.iter().enumerate().map(|(n, c)| (*c, n)).collect();
        let columns: Vec<SparseVec<F>> = cells
            .iter()
            .map(|&(t, i)| {
                SparseVec::from_pairs(p.boundary_cell(t, i).into_iter().map(|(cell, c)| {
                    (*position.get(&cell).expect("boundary stays below its source level"), c)
                }))
            })
            .collect();
        let red = reduce_columns(&columns);
        let cycles = red.kernel.into_iter().zip(red.kernel_cols).map(|(v, j)| (levels[j], v)).collect();
        let boundaries = red
            .image
            .rows()
            .iter()
            .cloned()
            .zip(red.image_cols)
            .map(|(v, j)| (levels[j], v))
            .collect();
        Window { p, cells, levels, position, cycles, boundaries }
    }

    fn cycles_upto(&self, level: usize) -> impl Iterator<Item = &SparseVec<F>> {
        self.cycles.iter().filter(move |(l, _)| *l <= level).map(|(_, v)| v)
    }

    fn cells_upto(&self, level: usize) -> usize {
        self.levels.iter().filter(|l| **l <= level).count()
    }

    fn boundaries_upto(&self, level: usize) -> usize {
        self.boundaries.iter().filter(|(l, _)| *l <= level).count()
    }

    /// Echelon of every boundary in the window: the zero test for classes
    /// of level at most `max_level - N`.
    fn zero_echelon(&self) -> Echelon<F> {
        let mut e = Echelon::new();
        for (_, b) in &self.boundaries {
            e.insert(b);
        }
        e
    }

    fn grading(&self, v: &SparseVec<F>) -> i64 {
        let (pos, _) = v.entries()[0];
        let (t, i) = self.cells[pos];
        self.p.cell_grading(t, i)
    }

    /// `U^n v`.
    fn lower(&self, v: &SparseVec<F>, n: i64) -> SparseVec<F> {
        SparseVec::from_pairs(v.entries().iter().filter_map(|(pos, c)| {
            let (t, i) = self.cells[*pos];
            self.position.get(&(t, i - n)).map(|q| (*q, c.clone()))
        }))
    }

    /// Transports `v` along a chain map into the target window.
    fn push(&self, map: &ChainMap<F>, target: &Window<'_, F>, v: &SparseVec<F>) -> SparseVec<F> {
        let mut pairs = Vec::new();
        for (pos, c) in v.entries() {
            let (t, i) = self.cells[*pos];
            for (cell, d) in map.apply_cell(t, i) {
                let q = target.position.get(&cell).expect("map does not raise U-level");
                pairs.push((*q, c.mul(&d)));
            }
        }
        SparseVec::from_pairs(pairs)
    }
}

fn count_new<'v, F: Field + 'v>(e: &mut Echelon<F>, vs: impl IntoIterator<Item = &'v SparseVec<F>>) -> usize {
    vs.into_iter().filter(|v| e.insert(v).is_some()).count()
}

/// Homology of a tower complex: towers by the grading of their lowest
/// class, and the finite part by grading. With `modulus > 0` gradings are
/// residues.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UModule {
    pub modulus: u64,
    pub towers: Vec<i64>,
    pub finite_parts: Vec<(i64, usize)>,
    pub corank: usize,
}

impl UModule {
    pub fn is_zero(&self) -> bool {
        self.corank == 0 && self.finite_parts.is_empty()
    }

    pub fn finite_total(&self) -> usize {
        self.finite_parts.iter().map(|(_, d)| d).sum()
    }

    pub fn rank_pair(&self) -> RankPair {
        RankPair { towers: self.corank, finite: self.finite_total() }
    }
}

/// Evidence that truncated homology has stabilized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub levels: [usize; 3],
    pub totals: [usize; 3],
    pub increment: usize,
    pub nilpotency: usize,
}

impl Certificate {
    pub fn is_arithmetic(&self) -> bool {
        let [a, b, c] = self.totals;
        b >= a && c >= b && b - a == c - b
    }
}

/// Starting truncation level: half the grading spread of the towers plus
/// the spread of their bottoms, plus two.
pub fn default_start<F: Field>(p: &PlusComplex<F>) -> usize {
    let spread = |it: &mut dyn Iterator<Item = i64>| {
        let v: Vec<i64> = it.collect();
        match (v.iter().min(), v.iter().max()) {
            (Some(a), Some(b)) => (b - a) as usize,
            _ => 0,
        }
    };
    let g = spread(&mut p.towers.iter().map(|t| t.grading + 2 * t.bottom));
    let b = spread(&mut p.towers.iter().map(|t| t.bottom));
    g / 2 + b + 2
}

pub fn u_module_structure<F: Field>(p: &PlusComplex<F>) -> Result<UModule> {
    stabilized(p, default_start(p)).map(|(m, _)| m)
}

/// Same computation started at an explicit truncation level.
pub fn u_module_structure_at<F: Field>(p: &PlusComplex<F>, delta0: usize) -> Result<UModule> {
    stabilized(p, delta0).map(|(m, _)| m)
}

/// The U-module structure together with its stabilization certificate.
pub fn stabilized<F: Field>(p: &PlusComplex<F>, delta0: usize) -> Result<(UModule, Certificate)> {
    let n = nilpotency_bound(p);
    let m = delta0.max(n).max(1);
    let w = Window::new(p, m + n.max(2));
    let mut totals = [0; 3];
    for (slot, d) in totals.iter_mut().zip([m, m + 1, m + 2]) {
        // A boundary rank above half the cell count means d^2 != 0.
        *slot = w.cells_upto(d).checked_sub(2 * w.boundaries_upto(d)).ok_or(Error::Unstabilized {
            levels: [m, m + 1, m + 2],
            counts: [0; 3],
        })?;
    }
    let cert = Certificate {
        levels: [m, m + 1, m + 2],
        totals,
        increment: totals[1].saturating_sub(totals[0]),
        nilpotency: n,
    };
    let fail = || Error::Unstabilized { levels: cert.levels, counts: cert.totals };

    let kernel_dims = |j: usize| {
        let mut e = w.zero_echelon();
        let mut dims: BTreeMap<i64, usize> = BTreeMap::new();
        for v in w.cycles_upto(j - 1) {
            if e.insert(v).is_some() {
                *dims.entry(w.grading(v)).or_default() += 1;
            }
        }
        dims
    };
    let k0 = kernel_dims(m);
    let k1 = kernel_dims(m + 1);

    let mut towers = Vec::new();
    for (g, d1) in &k1 {
        let d0 = k0.get(g).copied().unwrap_or(0);
        if *d1 < d0 {
            return Err(fail());
        }
        for _ in d0..*d1 {
            towers.push(p.reduce_grading(g - 2 * m as i64));
        }
    }
    if k0.keys().any(|g| !k1.contains_key(g)) {
        return Err(fail());
    }
    towers.sort_unstable();

    let mut layers: BTreeMap<i64, usize> = BTreeMap::new();
    for b in &towers {
        for t in 0..m as i64 {
            *layers.entry(p.reduce_grading(b + 2 * t)).or_default() += 1;
        }
    }
    let mut finite_parts = Vec::new();
    for (g, d) in &k0 {
        let layer = layers.get(g).copied().unwrap_or(0);
        if *d < layer {
            return Err(fail());
        }
        if *d > layer {
            finite_parts.push((*g, d - layer));
        }
    }
    if layers.keys().any(|g| !k0.contains_key(g)) {
        return Err(fail());
    }

    let module = UModule { modulus: p.modulus, corank: towers.len(), towers, finite_parts };
    let factor = if p.is_bounded() { 1 } else { 2 };
    let expected = module.corank * (m + 1) + factor * module.finite_total();
    if !cert.is_arithmetic() || cert.increment != module.corank || totals[0] != expected {
        return Err(fail());
    }
    Ok((module, cert))
}

/// (tower-rank, finite-rank) of a module of the form `T^a + R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RankPair {
    pub towers: usize,
    pub finite: usize,
}

impl RankPair {
    pub const ZERO: RankPair = RankPair { towers: 0, finite: 0 };

    pub fn new(towers: usize, finite: usize) -> Self {
        RankPair { towers, finite }
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    pub fn sum(self, other: RankPair) -> RankPair {
        RankPair { towers: self.towers + other.towers, finite: self.finite + other.finite }
    }
}

impl fmt::Display for RankPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.towers, self.finite)
    }
}

/// Rank pairs of image, kernel and cokernel of a map on homology.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapRanks {
    pub image: RankPair,
    pub kernel: RankPair,
    pub cokernel: RankPair,
}

/// The map induced on homology by a chain map.
#[derive(Debug, Clone, PartialEq)]
pub struct HomologyMap<F: Field> {
    pub source: UModule,
    pub target: UModule,
    /// Truncation level of the bases below: `K_level` of source and target.
    pub level: usize,
    /// Columns give the images of the source basis in the target basis.
    pub matrix: Vec<Vec<F>>,
    pub rank_pair: RankPair,
    pub kernel: RankPair,
    pub cokernel: RankPair,
}

fn pair_from(k0: usize, k1: usize, m: usize) -> Result<RankPair> {
    let towers = k1.checked_sub(k0).ok_or(Error::Unstabilized {
        levels: [m, m + 1, m + 1],
        counts: [k0, k1, k1],
    })?;
    let finite = k0.checked_sub(towers * m).ok_or(Error::Unstabilized {
        levels: [m, m + 1, m + 1],
        counts: [k0, k1, k1],
    })?;
    Ok(RankPair { towers, finite })
}

struct Family<'a, F: Field> {
    maps: &'a [ChainMap<F>],
    n: usize,
    sources: Vec<Window<'a, F>>,
    target: Window<'a, F>,
    zero_a: Vec<Echelon<F>>,
    zero_b: Echelon<F>,
}

impl<'a, F: Field> Family<'a, F> {
    fn new(maps: &'a [ChainMap<F>]) -> Result<Self> {
        let first = maps.first().ok_or(Error::MapMismatch)?;
        if maps.iter().any(|m| m.target.towers != first.target.towers) {
            return Err(Error::MapMismatch);
        }
        let n = nilpotency_bound(&cone_of_family(maps));
        for map in maps {
            map.check(2 * n + 1)?;
        }
        let sources: Vec<Window<'a, F>> = maps.iter().map(|m| Window::new(&m.source, 2 * n)).collect();
        let target = Window::new(&first.target, 3 * n);
        let zero_a = sources.iter().map(Window::zero_echelon).collect();
        let zero_b = target.zero_echelon();
        Ok(Family { maps, n, sources, target, zero_a, zero_b })
    }

    fn images_upto(&self, level: usize) -> Vec<SparseVec<F>> {
        let mut out = Vec::new();
        for (w, map) in self.sources.iter().zip(self.maps) {
            for z in w.cycles_upto(level) {
                out.push(w.push(map, &self.target, z));
            }
        }
        out
    }

    /// `dim K_j(im)`: the image of `K_{j+N}` of the sources meets `K_j` of
    /// the target exactly in `K_j` of the image.
    fn image_k(&self, j: usize) -> usize {
        let images = self.images_upto(j + self.n - 1);
        let a = count_new(&mut self.zero_b.clone(), &images);
        let mut e = self.zero_b.clone();
        let b = count_new(&mut e, self.target.cycles_upto(j - 1));
        let c = b + count_new(&mut e, &images);
        a + b - c
    }

    fn kernel_k(&self, j: usize) -> usize {
        let dim_a: usize = self
            .sources
            .iter()
            .zip(&self.zero_a)
            .map(|(w, z)| count_new(&mut z.clone(), w.cycles_upto(j - 1)))
            .sum();
        let rank = count_new(&mut self.zero_b.clone(), &self.images_upto(j - 1));
        dim_a - rank
    }

    fn target_k(&self, j: usize) -> usize {
        count_new(&mut self.zero_b.clone(), self.target.cycles_upto(j - 1))
    }

    /// `dim H(B) / (im + U^N H(B))`, the finite part of the cokernel.
    fn cokernel_finite(&self) -> usize {
        let n = self.n;
        let mut e = self.zero_b.clone();
        count_new(&mut e, &self.images_upto(n - 1));
        let lowered: Vec<SparseVec<F>> =
            self.target.cycles_upto(2 * n - 1).map(|z| self.target.lower(z, n as i64)).collect();
        count_new(&mut e, lowered.iter().filter(|v| !v.is_zero()));
        count_new(&mut e, self.target.cycles_upto(n - 1))
    }

    fn ranks(&self) -> Result<MapRanks> {
        let m = self.n;
        let image = pair_from(self.image_k(m), self.image_k(m + 1), m)?;
        let kernel = pair_from(self.kernel_k(m), self.kernel_k(m + 1), m)?;
        let target = pair_from(self.target_k(m), self.target_k(m + 1), m)?;
        let cokernel = RankPair {
            towers: target.towers.checked_sub(image.towers).ok_or(Error::MapMismatch)?,
            finite: self.cokernel_finite(),
        };
        Ok(MapRanks { image, kernel, cokernel })
    }

    /// Matrix of the single map on `K_m` bases, where the bases are the
    /// reduced cycle representatives.
    fn matrix(&self) -> Vec<Vec<F>> {
        let m = self.n;
        let mut eb = self.zero_b.clone();
        let offset = eb.rank();
        for z in self.target.cycles_upto(m - 1) {
            eb.insert(z);
        }
        let dim_b = eb.rank() - offset;
        let mut ea = self.zero_a[0].clone();
        let a_offset = ea.rank();
        for z in self.sources[0].cycles_upto(m - 1) {
            ea.insert(z);
        }
        ea.rows()[a_offset..]
            .iter()
            .map(|rep| {
                let image = self.sources[0].push(&self.maps[0], &self.target, rep);
                let (residual, coeffs) = eb.reduce(&image);
                debug_assert!(residual.is_zero());
                let mut col = alloc::vec![F::zero(); dim_b];
                for (row, c) in coeffs {
                    if row >= offset {
                        col[row - offset] = col[row - offset].add(&c);
                    }
                }
                col
            })
            .collect()
    }
}

/// Rank pairs of the map from the direct sum of the sources of `maps` to
/// their common target.
pub fn family_ranks<F: Field>(maps: &[ChainMap<F>]) -> Result<MapRanks> {
    Family::new(maps)?.ranks()
}

pub fn map_ranks<F: Field>(map: &ChainMap<F>) -> Result<MapRanks> {
    family_ranks(core::slice::from_ref(map))
}

pub fn induced_map<F: Field>(map: &ChainMap<F>) -> Result<HomologyMap<F>> {
    let maps = core::slice::from_ref(map);
    let family = Family::new(maps)?;
    let ranks = family.ranks()?;
    Ok(HomologyMap {
        source: u_module_structure(&map.source)?,
        target: u_module_structure(&map.target)?,
        level: family.n,
        matrix: family.matrix(),
        rank_pair: ranks.image,
        kernel: ranks.kernel,
        cokernel: ranks.cokernel,
    })
}

/// Whether `im f_*` is contained in `im g_*`: a submodule with the same
/// rank pair as the module containing it is the whole module.
pub fn image_contained<F: Field>(f: &ChainMap<F>, g: &ChainMap<F>) -> Result<bool> {
    let both = family_ranks(&[f.clone(), g.clone()])?.image;
    let alone = map_ranks(g)?.image;
    Ok(both == alone)
}

/// Whether two chain maps induce the same map on homology.
pub fn maps_agree<F: Field>(f: &ChainMap<F>, g: &ChainMap<F>) -> Result<bool> {
    Ok(map_ranks(&f.sub(g)?)?.image.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::F2;
    use crate::plus::{Tower, TowerArrow};
    use alloc::vec;

    fn tower(label: &str, grading: i64, bottom: i64) -> Tower {
        Tower { label: label.into(), grading, bottom, top: None }
    }

    fn single() -> PlusComplex<F2> {
        PlusComplex::new(vec![tower("u", 0, 0)], vec![])
    }

    #[test]
    fn single_tower() {
        let m = u_module_structure(&single()).unwrap();
        assert_eq!(m.towers, vec![0]);
        assert!(m.finite_parts.is_empty());
    }

    #[test]
    fn truncation_counts() {
        let f = truncate(&single(), 0);
        assert_eq!(f.dim(), 1);
        assert_eq!(total_dimension(&truncated_homology(&f)), 1);
    }

    #[test]
    fn multiplication_by_u_has_finite_cone() {
        // T+ --U--> T+: kernel is the bottom class, cokernel vanishes.
        let p = single();
        let map = ChainMap {
            source: p.clone(),
            target: p.clone(),
            entries: vec![TowerArrow { from: 0, to: 0, shift: 1, coeff: F2(true) }],
            degree: -2,
        };
        let r = map_ranks(&map).unwrap();
        assert_eq!(r.kernel, RankPair::new(0, 1));
        assert_eq!(r.cokernel, RankPair::ZERO);
        assert_eq!(r.image, RankPair::new(1, 0));
        let cone = u_module_structure(&map.cone()).unwrap();
        assert_eq!(cone.rank_pair(), RankPair::new(0, 1));
    }

    #[test]
    fn zero_map_ranks() {
        let p = single();
        let r = map_ranks(&ChainMap::zero(&p, &p, 0)).unwrap();
        assert_eq!(r.kernel, RankPair::new(1, 0));
        assert_eq!(r.cokernel, RankPair::new(1, 0));
    }

    #[test]
    fn identity_cone_is_acyclic() {
        let p = single();
        let cone = ChainMap::identity(&p).cone();
        for d in 0..6 {
            assert_eq!(total_dimension(&truncated_homology(&truncate(&cone, d))), 0);
        }
        assert!(u_module_structure(&cone).unwrap().is_zero());
    }
}
