//! Seeded generation of flip-valid complexes and the invariant suite run on
//! each of them.
//!
//! A generated complex is a staircase (possibly a single dot) plus up to a
//! few square boxes centred at Alexander grading 0, optionally dualized.
//! Every piece has vanishing `d^2` and a valid flip by construction, so a
//! validation failure here is a generator bug and is reported as one.

use std::collections::BTreeMap;

use floerkit_core::analyzer::{
    bottom_alexander, check_monotonicity, check_rank_identities, check_symmetry, hfk_symmetric,
    top_alexander,
};
use floerkit_core::homology::{default_start, u_module_structure_at};
use floerkit_core::surgery::{build_a, build_b, zero_surgery_cone};
use floerkit_core::{validate_complex, Arrow, CfkComplex, Field, Generator};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzSpec {
    pub seed: u64,
    pub count: usize,
    pub max_generators: usize,
    /// Bound on `|A(x)|`.
    pub width: i64,
}

impl FuzzSpec {
    pub fn new(seed: u64, count: usize) -> Self {
        FuzzSpec { seed, count, max_generators: 8, width: 3 }
    }

    /// Case `i` is generated from this seed, so `--seed <case_seed> --count 1`
    /// reproduces it.
    pub fn case_seed(&self, i: usize) -> u64 {
        self.seed.wrapping_add(i as u64)
    }
}

fn generator(name: String, alexander: i64, maslov: i64) -> Generator {
    Generator { name, alexander, maslov: Ratio::from_integer(maslov) }
}

fn arrow(from: &str, to: &str, nw: i64, nz: i64, coeff: i64) -> Arrow {
    Arrow { from: from.to_string(), to: to.to_string(), nw, nz, coeff }
}

/// Staircase with palindromic step lengths `half ++ reverse(half)`. Odd
/// generators are sources: `x_{2i+1} -> x_{2i}` horizontally and
/// `x_{2i+1} -> x_{2i+2}` vertically.
fn staircase(c: &mut CfkComplex, half: &[i64]) {
    let steps: Vec<i64> = half.iter().chain(half.iter().rev()).copied().collect();
    let name = |i: usize| format!("x{i}");
    let mut a = half.iter().sum::<i64>();
    let mut m = 0;
    c.generators.push(generator(name(0), a, m));
    for (i, l) in steps.iter().enumerate() {
        let n = i + 1;
        if n % 2 == 1 {
            a -= l;
            m += 1 - 2 * l;
            c.arrows.push(arrow(&name(n), &name(n - 1), *l, 0, 1));
        } else {
            a -= l;
            m -= 1;
            c.arrows.push(arrow(&name(n - 1), &name(n), 0, *l, 1));
        }
        c.generators.push(generator(name(n), a, m));
    }
    let flip = c.flip.get_or_insert_with(BTreeMap::new);
    for i in 0..=steps.len() {
        flip.insert(name(i), name(steps.len() - i));
    }
}

/// Square of side `s` centred at Alexander grading 0; the corner `a` is the
/// source. The sign on `a -> c` and the flip sign on `a` make it valid over Q.
fn boxed(c: &mut CfkComplex, tag: usize, s: i64, offset: i64) {
    let n = |corner: &str| format!("b{tag}{corner}");
    c.generators.push(generator(n("a"), 0, offset));
    c.generators.push(generator(n("b"), s, offset - 1 + 2 * s));
    c.generators.push(generator(n("c"), -s, offset - 1));
    c.generators.push(generator(n("e"), 0, offset - 2 + 2 * s));
    c.arrows.push(arrow(&n("a"), &n("b"), s, 0, 1));
    c.arrows.push(arrow(&n("a"), &n("c"), 0, s, -1));
    c.arrows.push(arrow(&n("b"), &n("e"), 0, s, 1));
    c.arrows.push(arrow(&n("c"), &n("e"), s, 0, 1));
    let flip = c.flip.get_or_insert_with(BTreeMap::new);
    for (x, y) in [("a", "a"), ("b", "c"), ("c", "b"), ("e", "e")] {
        flip.insert(n(x), n(y));
    }
    c.flip_signs.get_or_insert_with(BTreeMap::new).insert(n("a"), -1);
}

/// The dual complex: gradings negated and arrows reversed. This models the
/// mirror knot.
pub fn dual(c: &CfkComplex) -> CfkComplex {
    let mut out = c.clone();
    for g in &mut out.generators {
        g.alexander = -g.alexander;
        g.maslov = -g.maslov;
    }
    for a in &mut out.arrows {
        std::mem::swap(&mut a.from, &mut a.to);
    }
    out
}

/// One flip-valid complex from `seed`.
pub fn generate(seed: u64, max_generators: usize, width: i64) -> CfkComplex {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = CfkComplex { name: format!("fuzz-{seed}"), ..Default::default() };
    let budget = max_generators.max(1);
    let width = width.max(0);

    let max_half = (((budget - 1) / 2) as i64).min(width);
    let m = rng.gen_range(0..=max_half) as usize;
    let mut half = Vec::with_capacity(m);
    let mut room = width;
    for i in 0..m {
        let left = (m - i - 1) as i64;
        let l = rng.gen_range(1..=room - left);
        half.push(l);
        room -= l;
    }
    staircase(&mut c, &half);

    let spare = budget - (2 * m + 1);
    if width > 0 {
        for tag in 0..rng.gen_range(0..=spare / 4) {
            let s = rng.gen_range(1..=width);
            let offset = rng.gen_range(-2..=2);
            boxed(&mut c, tag, s, offset);
        }
    }
    if rng.gen_bool(0.5) {
        c = dual(&c);
        c.name.push_str("-dual");
    }
    c
}

/// Runs the invariant suite; `Err` names the first invariant that fails.
pub fn check_suite<F: Field>(c: &CfkComplex) -> Result<(), String> {
    let report = validate_complex(c);
    if !report.is_valid() {
        let kinds: Vec<&str> = report.violations.iter().map(|v| v.kind()).collect();
        return Err(format!("validation ({})", kinds.join(", ")));
    }
    let wrap = |what: &str, e: floerkit_core::Error| format!("{what}: {e}");

    if !hfk_symmetric::<F>(c).map_err(|e| wrap("hfk symmetry", e))? {
        return Err("hfk symmetry".into());
    }
    let d = top_alexander::<F>(c).map_err(|e| wrap("top grading", e))?;
    if bottom_alexander::<F>(c).map_err(|e| wrap("bottom grading", e))? != -d {
        return Err("top = -bottom".into());
    }

    let ids = check_rank_identities::<F>(c).map_err(|e| wrap("rank identities", e))?;
    if let Some(bad) = ids.checks.iter().find(|x| !x.pass) {
        return Err(format!("{} at k = {}: {} vs {}", bad.name, bad.k, bad.left, bad.right));
    }
    if ids.model_inconsistent {
        return Err("model inconsistency flagged".into());
    }

    let failures = check_monotonicity::<F>(c, -4..=4).map_err(|e| wrap("monotonicity", e))?;
    if let Some(f) = failures.first() {
        return Err(format!("monotonicity of {} at k = {}", f.map, f.k));
    }
    let (v, h) = check_symmetry::<F>(c).map_err(|e| wrap("symmetry", e))?;
    if v != h {
        return Err(format!("symmetry: v0 image {v}, h0 image {h}"));
    }

    let complexes = [
        build_a::<F>(c, 0),
        build_b::<F>(c),
        zero_surgery_cone::<F>(c, d - 1),
    ];
    for p in complexes {
        let p = p.map_err(|e| wrap("stabilization", e))?;
        let start = default_start(&p);
        let here = u_module_structure_at(&p, start).map_err(|e| wrap("stabilization", e))?;
        let later = u_module_structure_at(&p, start + 5).map_err(|e| wrap("stabilization", e))?;
        if here != later {
            return Err("stabilization: result moved under delta0 -> delta0 + 5".into());
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseOutcome {
    pub index: usize,
    pub seed: u64,
    pub name: String,
    pub generators: usize,
    pub result: Result<(), String>,
}

pub fn run_fuzz<F: Field>(spec: &FuzzSpec) -> Vec<CaseOutcome> {
    (0..spec.count)
        .map(|index| {
            let seed = spec.case_seed(index);
            let c = generate(seed, spec.max_generators, spec.width);
            CaseOutcome {
                index,
                seed,
                name: c.name.clone(),
                generators: c.generators.len(),
                result: check_suite::<F>(&c),
            }
        })
        .collect()
}
