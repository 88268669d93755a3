//! The complexes `A+_k = C{i >= 0 or j >= k}` and `B+ = C{i >= 0}`, the maps
//! `v+_k` and `h+_k`, large surgery, and the zero-surgery mapping cones.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::analyzer::top_alexander;
use crate::error::{Error, Result};
use crate::field::{Field, RatFunc};
use crate::homology::{u_module_structure, UModule};
use crate::model::{subquotient, CfkComplex, Region};
use crate::plus::{ChainMap, PlusComplex, TowerArrow};

pub fn build_a<F: Field>(c: &CfkComplex, k: i64) -> Result<PlusComplex<F>> {
    subquotient(c, Region::Union(0, k))
}

pub fn build_b<F: Field>(c: &CfkComplex) -> Result<PlusComplex<F>> {
    subquotient(c, Region::HalfPlaneI(0))
}

/// Vertical projection `[x, i] -> [x, i]` for `i >= 0`, else 0.
pub fn map_v<F: Field>(c: &CfkComplex, k: i64) -> Result<ChainMap<F>> {
    let source = build_a(c, k)?;
    let target = build_b(c)?;
    let entries = (0..source.towers.len())
        .map(|t| TowerArrow { from: t, to: t, shift: 0, coeff: F::one() })
        .collect();
    Ok(ChainMap { source, target, entries, degree: 0 })
}

/// Project to `{j >= k}`, multiply by `U^k`, then flip:
/// `[x, i] -> eps_x [flip(x), i + A(x) - k]`, zero when `i + A(x) < k`.
pub fn map_h<F: Field>(c: &CfkComplex, k: i64) -> Result<ChainMap<F>> {
    c.ensure_flip()?;
    let source = build_a(c, k)?;
    let target = build_b(c)?;
    let position: BTreeMap<&str, usize> =
        target.towers.iter().enumerate().map(|(n, t)| (t.label.as_str(), n)).collect();
    let mut entries = Vec::with_capacity(source.towers.len());
    for (n, t) in source.towers.iter().enumerate() {
        let g = c.generator(&t.label).expect("tower comes from a generator");
        let image = c.flip_of(&g.name).ok_or(Error::FlipRequired)?;
        entries.push(TowerArrow {
            from: n,
            to: position[image],
            shift: k - g.alexander,
            coeff: F::from_i64(c.flip_sign(&g.name)),
        });
    }
    Ok(ChainMap { source, target, entries, degree: -2 * k })
}

/// `v+_k + h+_k`.
pub fn map_vh<F: Field>(c: &CfkComplex, k: i64) -> Result<ChainMap<F>> {
    map_v(c, k)?.add(&map_h(c, k)?)
}

/// Spin^c index `k = t mod n` with `|k| <= n/2`; a tie is an error.
pub fn spinc_index(n: i64, t: i64) -> Result<i64> {
    if n <= 0 {
        return Err(Error::NonPositiveSurgery(n));
    }
    let r = t.rem_euclid(n);
    if 2 * r == n {
        return Err(Error::AmbiguousSpinc { n, t, half: n / 2 });
    }
    Ok(if 2 * r < n { r } else { r - n })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LargeSurgery {
    pub n: i64,
    pub k: i64,
    /// False when the genus bound was overridden rather than checked.
    pub hypothesis_verified: bool,
    pub module: UModule,
}

/// Homology of `n`-surgery in the spin^c structure indexed by `t mod n`.
pub fn large_surgery_homology<F: Field>(
    c: &CfkComplex,
    n: i64,
    t: i64,
    force: bool,
) -> Result<LargeSurgery> {
    let k = spinc_index(n, t)?;
    large_surgery_at::<F>(c, n, k, force)
}

/// Large surgery with the representative `k` given directly; `|k| <= n/2`
/// is required but ties are allowed.
pub fn large_surgery_at<F: Field>(c: &CfkComplex, n: i64, k: i64, force: bool) -> Result<LargeSurgery> {
    if n <= 0 {
        return Err(Error::NonPositiveSurgery(n));
    }
    if 2 * k.abs() > n {
        return large_surgery_homology::<F>(c, n, k, force);
    }
    c.ensure_valid()?;
    let d = top_alexander::<F>(c)?;
    let verified = n >= 2 * d;
    if !verified && !force {
        return Err(Error::GenusBound { n, d });
    }
    Ok(LargeSurgery {
        n,
        k,
        hypothesis_verified: verified,
        module: u_module_structure(&build_a::<F>(c, k)?)?,
    })
}

pub fn zero_surgery_cone<F: Field>(c: &CfkComplex, k: i64) -> Result<PlusComplex<F>> {
    Ok(map_vh::<F>(c, k)?.cone())
}

/// Homology of the mapping cone of `v+_k + h+_k`.
pub fn zero_surgery_homology<F: Field>(c: &CfkComplex, k: i64) -> Result<UModule> {
    u_module_structure(&zero_surgery_cone::<F>(c, k)?)
}

/// `v+_k + T h+_k` over the field of rational functions in `T`.
pub fn twisted_map<F: Field>(c: &CfkComplex, k: i64) -> Result<ChainMap<RatFunc<F>>> {
    let v = map_v::<F>(c, k)?.lift();
    let h = map_h::<F>(c, k)?.lift().scale(&RatFunc::t());
    v.add(&h)
}

/// Cone homology over the fraction field of the Laurent ring in `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedModule {
    /// Dimension of the finite part over the fraction field.
    pub generic_rank: usize,
    /// Number of towers; zero for every genuine knot complex.
    pub corank: usize,
    pub modulus: u64,
    pub per_grading: Vec<(i64, usize)>,
}

pub fn zero_surgery_twisted<F: Field>(c: &CfkComplex, k: i64) -> Result<TwistedModule> {
    let m = u_module_structure(&twisted_map::<F>(c, k)?.cone())?;
    Ok(TwistedModule {
        generic_rank: m.finite_total(),
        corank: m.corank,
        modulus: m.modulus,
        per_grading: m.finite_parts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::F2;
    use crate::homology::{map_ranks, RankPair};
    use crate::model::fixtures::*;

    #[test]
    fn trefoil_bottoms() {
        let a0 = build_a::<F2>(&trefoil(), 0).unwrap();
        let b: Vec<i64> = a0.towers.iter().map(|t| t.bottom).collect();
        assert_eq!(b, [0, 0, -1]);
        let a1 = build_a::<F2>(&trefoil(), 1).unwrap();
        assert_eq!(a1, build_b::<F2>(&trefoil()).unwrap());
    }

    #[test]
    fn maps_are_chain_maps() {
        for c in [unknot(), trefoil(), figure_eight()] {
            for k in -3..=3 {
                map_v::<F2>(&c, k).unwrap().check(8).unwrap();
                map_h::<F2>(&c, k).unwrap().check(8).unwrap();
            }
        }
    }

    #[test]
    fn trefoil_v0_kernel_is_bottom_class() {
        let r = map_ranks(&map_v::<F2>(&trefoil(), 0).unwrap()).unwrap();
        assert_eq!(r.kernel, RankPair::new(0, 1));
        assert_eq!(r.cokernel, RankPair::ZERO);
    }

    #[test]
    fn spinc_ties_are_rejected() {
        assert!(matches!(spinc_index(2, 1), Err(Error::AmbiguousSpinc { .. })));
        assert_eq!(spinc_index(5, 4).unwrap(), -1);
        assert_eq!(spinc_index(1, 0).unwrap(), 0);
    }

    #[test]
    fn unknot_zero_surgery() {
        let m = zero_surgery_homology::<F2>(&unknot(), 0).unwrap();
        assert_eq!(m.corank, 2);
        assert!(m.finite_parts.is_empty());
        assert_eq!(zero_surgery_twisted::<F2>(&unknot(), 0).unwrap().generic_rank, 0);
    }
}
