//! Shared fixtures and a brute-force oracle. The oracle never touches the
//! crate's tower machinery: it enumerates cells straight from generator and
//! arrow data and counts homology by dense elimination modulo a prime.

#![allow(dead_code)]

use std::collections::BTreeMap;

use floerkit_core::{Arrow, CfkComplex, Generator};
use num_rational::Ratio;

pub fn generator(name: &str, alexander: i64, maslov: i64) -> Generator {
    Generator { name: name.into(), alexander, maslov: Ratio::from_integer(maslov) }
}

pub fn arrow(from: &str, to: &str, nw: i64, nz: i64) -> Arrow {
    Arrow { from: from.into(), to: to.into(), nw, nz, coeff: 1 }
}

fn involution(pairs: &[(&str, &str)]) -> Option<BTreeMap<String, String>> {
    let mut m = BTreeMap::new();
    for (a, b) in pairs {
        m.insert(a.to_string(), b.to_string());
        m.insert(b.to_string(), a.to_string());
    }
    Some(m)
}

pub fn unknot() -> CfkComplex {
    CfkComplex {
        name: "unknot".into(),
        generators: vec![generator("u", 0, 0)],
        flip: involution(&[("u", "u")]),
        ..Default::default()
    }
}

pub fn trefoil() -> CfkComplex {
    CfkComplex {
        name: "trefoil".into(),
        generators: vec![generator("c", 1, 0), generator("b", 0, -1), generator("a", -1, -2)],
        arrows: vec![arrow("b", "c", 1, 0), arrow("b", "a", 0, 1)],
        flip: involution(&[("c", "a"), ("b", "b")]),
        ..Default::default()
    }
}

pub fn figure_eight() -> CfkComplex {
    CfkComplex {
        name: "figure-eight".into(),
        generators: vec![
            generator("a", 0, 0),
            generator("b", 1, 1),
            generator("c", -1, -1),
            generator("e", 0, 0),
            generator("x", 0, 0),
        ],
        arrows: vec![
            arrow("a", "b", 1, 0),
            Arrow { coeff: -1, ..arrow("a", "c", 0, 1) },
            arrow("b", "e", 0, 1),
            arrow("c", "e", 1, 0),
        ],
        flip: involution(&[("a", "a"), ("b", "c"), ("e", "e"), ("x", "x")]),
        flip_signs: Some([("a".to_string(), -1)].into_iter().collect()),
        ..Default::default()
    }
}

/// Staircase of the (2, 2m+1) torus knot: steps all of length 1.
pub fn torus_2(m: usize) -> CfkComplex {
    let n = 2 * m;
    let name = |i: usize| format!("x{i}");
    let mut gens = Vec::new();
    let mut arrows = Vec::new();
    let mut a = m as i64;
    let mut mas = 0;
    gens.push(generator(&name(0), a, mas));
    for i in 1..=n {
        a -= 1;
        if i % 2 == 1 {
            mas -= 1;
            arrows.push(arrow(&name(i), &name(i - 1), 1, 0));
        } else {
            mas -= 1;
            arrows.push(arrow(&name(i - 1), &name(i), 0, 1));
        }
        gens.push(generator(&name(i), a, mas));
    }
    let pairs: Vec<(String, String)> = (0..=n).map(|i| (name(i), name(n - i))).collect();
    let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    CfkComplex { name: format!("T(2,{})", n + 1), generators: gens, arrows, flip: involution(&refs), ..Default::default() }
}

pub const P: u64 = 1_000_003;

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn modp(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

/// Rank of a dense matrix modulo `p`.
pub fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][c], p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c] * inv % p;
                for k in c..cols {
                    rows[r][k] = (rows[r][k] + p - f * rows[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A complex of towers described only by bottoms and weighted edges:
/// `(from, to, drop, coeff)` sends `[from, i]` to `coeff [to, i - drop]`,
/// dropped below the target bottom.
#[derive(Clone, Debug)]
pub struct Brute {
    pub bottoms: Vec<i64>,
    pub edges: Vec<(usize, usize, i64, i64)>,
}

impl Brute {
    /// Towers of the region `{i >= a or j >= b}` (pass `b = None` for `i >= a`).
    pub fn region(c: &CfkComplex, a: i64, b: Option<i64>, signed: bool) -> Brute {
        let index: BTreeMap<&str, usize> =
            c.generators.iter().enumerate().map(|(n, g)| (g.name.as_str(), n)).collect();
        let bottoms = c
            .generators
            .iter()
            .map(|g| match b {
                Some(b) => a.min(b - g.alexander),
                None => a,
            })
            .collect();
        let edges = c
            .arrows
            .iter()
            .map(|ar| (index[ar.from.as_str()], index[ar.to.as_str()], ar.nw, if signed { ar.coeff } else { ar.coeff.rem_euclid(2) }))
            .collect();
        Brute { bottoms, edges }
    }

    /// Cone of `map` (edges from `a`'s towers into `b`'s towers).
    pub fn cone(a: &Brute, b: &Brute, map: &[(usize, usize, i64, i64)]) -> Brute {
        let off = a.bottoms.len();
        let mut edges: Vec<_> = a.edges.iter().map(|&(x, y, d, c)| (x, y, d, -c)).collect();
        edges.extend(b.edges.iter().map(|&(x, y, d, c)| (x + off, y + off, d, c)));
        edges.extend(map.iter().map(|&(x, y, d, c)| (x, y + off, d, c)));
        Brute { bottoms: a.bottoms.iter().chain(&b.bottoms).copied().collect(), edges }
    }

    /// Total homology of the cells at most `delta` above each bottom.
    pub fn total(&self, delta: i64, p: u64) -> usize {
        let mut cells = Vec::new();
        for (t, b) in self.bottoms.iter().enumerate() {
            for i in *b..=b + delta {
                cells.push((t, i));
            }
        }
        let pos: BTreeMap<(usize, i64), usize> = cells.iter().enumerate().map(|(n, c)| (*c, n)).collect();
        let mut rows = vec![vec![0u64; cells.len()]; cells.len()];
        for (col, &(t, i)) in cells.iter().enumerate() {
            for &(from, to, drop, coeff) in &self.edges {
                if from != t {
                    continue;
                }
                let j = i - drop;
                if j < self.bottoms[to] {
                    continue;
                }
                let row = *pos.get(&(to, j)).expect("truncation is a subcomplex");
                rows[row][col] = (rows[row][col] + modp(coeff, p)) % p;
            }
        }
        cells.len() - 2 * rank_mod(rows, p)
    }

    /// `(towers, finite)` read off two consecutive truncations.
    pub fn pair(&self, delta: i64, p: u64) -> (usize, usize) {
        let here = self.total(delta, p);
        let next = self.total(delta + 1, p);
        let towers = next - here;
        let rest = here - towers * (delta as usize + 1);
        assert!(rest % 2 == 0, "odd residual {rest}");
        (towers, rest / 2)
    }
}

fn flip_index(c: &CfkComplex) -> Vec<usize> {
    let index: BTreeMap<&str, usize> =
        c.generators.iter().enumerate().map(|(n, g)| (g.name.as_str(), n)).collect();
    let flip = c.flip.as_ref().expect("flip");
    c.generators.iter().map(|g| index[flip[&g.name].as_str()]).collect()
}

fn sign(c: &CfkComplex, name: &str) -> i64 {
    c.flip_signs.as_ref().and_then(|s| s.get(name).copied()).unwrap_or(1)
}

/// Edges of `v_k`.
pub fn v_edges(c: &CfkComplex) -> Vec<(usize, usize, i64, i64)> {
    (0..c.generators.len()).map(|t| (t, t, 0, 1)).collect()
}

/// Edges of `t * h_k`.
pub fn h_edges(c: &CfkComplex, k: i64, t: i64) -> Vec<(usize, usize, i64, i64)> {
    let f = flip_index(c);
    c.generators
        .iter()
        .enumerate()
        .map(|(n, g)| (n, f[n], k - g.alexander, t * sign(c, &g.name)))
        .collect()
}

/// Cone of `v_k + t h_k` (t = 1 is the untwisted cone).
pub fn vh_cone(c: &CfkComplex, k: i64, t: i64, signed: bool) -> Brute {
    let a = Brute::region(c, 0, Some(k), signed);
    let b = Brute::region(c, 0, None, signed);
    let mut map = v_edges(c);
    map.extend(h_edges(c, k, t));
    Brute::cone(&a, &b, &map)
}

pub fn v_cone(c: &CfkComplex, k: i64) -> Brute {
    let a = Brute::region(c, 0, Some(k), false);
    let b = Brute::region(c, 0, None, false);
    Brute::cone(&a, &b, &v_edges(c))
}

/// Knot Floer homology at Alexander grading `k` over F2 by brute force:
/// generators with `A = k` and the arrows with `nw = nz = 0`.
pub fn hfk_oracle(c: &CfkComplex, k: i64) -> usize {
    let names: Vec<&str> = c.generators.iter().filter(|g| g.alexander == k).map(|g| g.name.as_str()).collect();
    let mut rows = vec![vec![0u64; names.len()]; names.len()];
    for a in &c.arrows {
        if a.nw == 0 && a.nz == 0 {
            if let (Some(f), Some(t)) = (names.iter().position(|n| *n == a.from), names.iter().position(|n| *n == a.to)) {
                rows[t][f] ^= (a.coeff.rem_euclid(2)) as u64;
            }
        }
    }
    names.len() - 2 * rank_mod(rows, 2)
}

/// Staircase with palindromic steps `half ++ reverse(half)`, plus square
/// boxes `(side, maslov offset)` centred at Alexander grading 0, optionally
/// dualized (the mirror).
pub fn assemble(half: &[i64], boxes: &[(i64, i64)], dual: bool) -> CfkComplex {
    let steps: Vec<i64> = half.iter().chain(half.iter().rev()).copied().collect();
    let mut c = CfkComplex { name: "assembled".into(), flip: Some(BTreeMap::new()), ..Default::default() };
    let mut a: i64 = half.iter().sum();
    let mut m = 0;
    c.generators.push(generator("s0", a, 0));
    for (i, l) in steps.iter().enumerate() {
        let n = i + 1;
        a -= l;
        if n % 2 == 1 {
            m += 1 - 2 * l;
            c.arrows.push(arrow(&format!("s{n}"), &format!("s{}", n - 1), *l, 0));
        } else {
            m -= 1;
            c.arrows.push(arrow(&format!("s{}", n - 1), &format!("s{n}"), 0, *l));
        }
        c.generators.push(generator(&format!("s{n}"), a, m));
    }
    let flip = c.flip.as_mut().unwrap();
    for i in 0..=steps.len() {
        flip.insert(format!("s{i}"), format!("s{}", steps.len() - i));
    }
    let mut signs = BTreeMap::new();
    for (t, &(s, off)) in boxes.iter().enumerate() {
        let n = |x: &str| format!("q{t}{x}");
        c.generators.push(generator(&n("a"), 0, off));
        c.generators.push(generator(&n("b"), s, off - 1 + 2 * s));
        c.generators.push(generator(&n("c"), -s, off - 1));
        c.generators.push(generator(&n("e"), 0, off - 2 + 2 * s));
        c.arrows.push(arrow(&n("a"), &n("b"), s, 0));
        c.arrows.push(Arrow { coeff: -1, ..arrow(&n("a"), &n("c"), 0, s) });
        c.arrows.push(arrow(&n("b"), &n("e"), 0, s));
        c.arrows.push(arrow(&n("c"), &n("e"), s, 0));
        let flip = c.flip.as_mut().unwrap();
        for (x, y) in [("a", "a"), ("b", "c"), ("c", "b"), ("e", "e")] {
            flip.insert(n(x), n(y));
        }
        signs.insert(n("a"), -1);
    }
    if !signs.is_empty() {
        c.flip_signs = Some(signs);
    }
    if dual {
        for g in &mut c.generators {
            g.alexander = -g.alexander;
            g.maslov = -g.maslov;
        }
        for ar in &mut c.arrows {
            std::mem::swap(&mut ar.from, &mut ar.to);
        }
    }
    c
}

pub mod strategy {
    use super::*;
    use proptest::prelude::*;

    /// Small valid complexes: a staircase of height at most 3, at most one
    /// box, optionally mirrored.
    pub fn complex() -> impl Strategy<Value = CfkComplex> {
        (
            prop::collection::vec(1i64..=2, 0..=2),
            prop::collection::vec((1i64..=2, -2i64..=2), 0..=1),
            any::<bool>(),
        )
            .prop_map(|(half, boxes, dual)| assemble(&half, &boxes, dual))
    }
}
