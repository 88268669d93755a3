//! The acceptance criteria, run in-process. The transcript contains no
//! timings or addresses, so two runs are byte-identical.

use floerkit_core::analyzer::{
    check_monotonicity, check_rank_identities, check_symmetry, check_twisted_dichotomy,
    detect_fibered, hfk_total, top_alexander, Status, TOP_EQUALS_V, TRIANGLE,
};
use floerkit_core::homology::{stabilized, total_dimension};
use floerkit_core::surgery::{build_a, build_b, zero_surgery_cone, zero_surgery_homology, zero_surgery_twisted};
use floerkit_core::{
    truncate, truncated_homology, u_module_structure, validate_complex, CfkComplex, Error, FieldKind,
    PlusComplex, RankPair, Tower, TowerArrow, F2,
};
use num_rational::Ratio;

use crate::cli::exit_code;
use crate::fixtures;
use crate::fuzz::{generate, FuzzSpec};
use crate::report::{CriterionEntry, Report, SelftestReport};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

/// A single-field edit and the violation kind it must trigger.
pub struct Mutation {
    pub label: &'static str,
    pub kind: &'static str,
    pub complex: CfkComplex,
}

fn set_maslov(c: &mut CfkComplex, name: &str, num: i64, den: i64) {
    c.generators.iter_mut().find(|g| g.name == name).unwrap().maslov = Ratio::new(num, den);
}

fn set_alexander(c: &mut CfkComplex, name: &str, a: i64) {
    c.generators.iter_mut().find(|g| g.name == name).unwrap().alexander = a;
}

fn arrow_mut<'a>(c: &'a mut CfkComplex, from: &str, to: &str) -> &'a mut floerkit_core::Arrow {
    c.arrows.iter_mut().find(|a| a.from == from && a.to == to).unwrap()
}

pub fn mutations() -> Vec<Mutation> {
    let t = fixtures::trefoil;
    let f8 = fixtures::figure_eight;
    let mut out = Vec::new();
    let mut push = |label, kind, complex| out.push(Mutation { label, kind, complex });

    let mut c = t();
    set_maslov(&mut c, "a", -3, 1);
    push("trefoil M(a) = -3", "maslov-mismatch", c);

    let mut c = t();
    set_alexander(&mut c, "a", -2);
    push("trefoil A(a) = -2", "alexander-mismatch", c);

    let mut c = t();
    arrow_mut(&mut c, "b", "c").nw = 2;
    push("trefoil b->c nw = 2", "alexander-mismatch", c);

    let mut c = t();
    arrow_mut(&mut c, "b", "a").nz = -1;
    push("trefoil b->a nz = -1", "negative-basepoint", c);

    let mut c = t();
    c.flip.as_mut().unwrap().insert("c".into(), "b".into());
    push("trefoil flip(c) = b", "flip-not-involution", c);

    let mut c = t();
    c.flip.as_mut().unwrap().remove("b");
    push("trefoil flip(b) removed", "flip-not-total", c);

    let mut c = t();
    arrow_mut(&mut c, "b", "c").coeff = 2;
    push("trefoil b->c coeff = 2", "zero-coefficient", c);

    let mut c = t();
    set_maslov(&mut c, "c", 1, 2);
    push("trefoil M(c) = 1/2", "non-integral-maslov", c);

    let mut c = f8();
    arrow_mut(&mut c, "c", "e").coeff = 2;
    push("figure-eight c->e coeff = 2", "differential-square", c);

    let mut c = f8();
    c.field = FieldKind::Q;
    c.flip_signs.as_mut().unwrap().insert("a".into(), 1);
    push("figure-eight over Q, sign(a) = +1", "flip-missing-arrow", c);

    out
}

fn criterion_validation() -> Outcome {
    for c in fixtures::knots() {
        let r = validate_complex(&c);
        ensure(r.is_valid(), || format!("{} has {} violations", c.name, r.violations.len()))?;
    }
    let muts = mutations();
    for m in &muts {
        ensure(validate_complex(&m.complex).has_kind(m.kind), || format!("{}: no {}", m.label, m.kind))?;
    }
    ensure(!validate_complex(&fixtures::broken()).is_valid(), || "broken fixture validates".into())?;
    Ok(format!("3 fixtures valid, {} mutations caught", muts.len()))
}

fn criterion_unknot() -> Outcome {
    let u = fixtures::unknot();
    let m = zero_surgery_homology::<F2>(&u, 0).map_err(err)?;
    ensure(m.corank == 2 && m.finite_parts.is_empty(), || format!("cone {m:?}"))?;
    let t = zero_surgery_twisted::<F2>(&u, 0).map_err(err)?;
    ensure(t.generic_rank == 0, || format!("generic rank {}", t.generic_rank))?;
    Ok("corank 2, finite part empty, twisted generic rank 0".into())
}

/// Total truncated homology at `delta` recomputed by brute force must match
/// the structure: `c (delta + 1) + f`, with `f` counted twice for towers
/// whose top was cut off.
fn oracle_agrees(p: &PlusComplex<F2>, delta: usize) -> Result<(), String> {
    let m = floerkit_core::homology::u_module_structure_at(p, delta).map_err(err)?;
    let total = total_dimension(&truncated_homology(&truncate(p, delta)));
    let factor = if p.is_bounded() { 1 } else { 2 };
    let expected = m.corank * (delta + 1) + factor * m.finite_total();
    ensure(total == expected, || format!("truncation at {delta}: {total} != {expected}"))
}

fn oracle_pair(p: &PlusComplex<F2>) -> Result<(), String> {
    let (_, cert) = stabilized(p, floerkit_core::homology::default_start(p)).map_err(err)?;
    let d0 = cert.levels[0];
    oracle_agrees(p, d0)?;
    oracle_agrees(p, d0 + 5)?;
    let a = floerkit_core::homology::u_module_structure_at(p, d0).map_err(err)?;
    let b = floerkit_core::homology::u_module_structure_at(p, d0 + 5).map_err(err)?;
    ensure(a == b, || "structure moved under delta0 -> delta0 + 5".into())
}

fn criterion_trefoil() -> Outcome {
    let c = fixtures::trefoil();
    let dims: Vec<usize> = [1, 0, -1].iter().map(|k| hfk_total::<F2>(&c, *k)).collect::<Result<_, _>>().map_err(err)?;
    ensure(dims == [1, 1, 1], || format!("hfk dims {dims:?}"))?;
    ensure(top_alexander::<F2>(&c).map_err(err)? == 1, || "top grading".into())?;
    ensure(detect_fibered::<F2>(&c).map_err(err)?.fibered, || "not fibered".into())?;
    for k in [1, -1] {
        let m = zero_surgery_homology::<F2>(&c, k).map_err(err)?;
        ensure(m.is_zero(), || format!("cone at {k} is {m:?}"))?;
    }
    let ids = check_rank_identities::<F2>(&c).map_err(err)?;
    let top = ids.checks.iter().find(|x| x.name == TOP_EQUALS_V).ok_or("missing identity")?;
    ensure(top.pass && top.left == RankPair::new(0, 1), || format!("{top:?}"))?;
    let tri = ids.checks.iter().find(|x| x.name == TRIANGLE).ok_or("missing triangle")?;
    ensure(tri.pass, || format!("{tri:?}"))?;
    for p in [build_a::<F2>(&c, 0), build_b::<F2>(&c), zero_surgery_cone::<F2>(&c, 0), zero_surgery_cone::<F2>(&c, 1)] {
        oracle_pair(&p.map_err(err)?)?;
    }
    Ok("hfk (1,1,1), d = 1, fibered, cones at +-1 zero, identities and oracle agree".into())
}

fn criterion_figure_eight() -> Outcome {
    let c = fixtures::figure_eight();
    let dims: Vec<usize> = [1, 0, -1].iter().map(|k| hfk_total::<F2>(&c, *k)).collect::<Result<_, _>>().map_err(err)?;
    ensure(dims == [1, 3, 1], || format!("hfk dims {dims:?}"))?;
    ensure(detect_fibered::<F2>(&c).map_err(err)?.fibered, || "not a fibered candidate".into())?;
    let ids = check_rank_identities::<F2>(&c).map_err(err)?;
    ensure(ids.all_pass(), || format!("{:?}", ids.checks))?;
    Ok(format!("hfk (1,3,1), fibered candidate, {} identities pass", ids.checks.len()))
}

fn test_set(fuzzed: usize) -> Vec<CfkComplex> {
    let spec = FuzzSpec::new(1, fuzzed);
    let mut all = fixtures::knots();
    all.extend((0..fuzzed).map(|i| generate(spec.case_seed(i), spec.max_generators, spec.width)));
    all
}

fn criterion_monotonicity(set: &[CfkComplex]) -> Outcome {
    let mut checked = 0;
    for c in set {
        let fails = check_monotonicity::<F2>(c, -4..=4).map_err(err)?;
        ensure(fails.is_empty(), || format!("{}: {:?}", c.name, fails))?;
        checked += 1;
    }
    Ok(format!("{checked} complexes, k in [-4, 4], no violations"))
}

fn criterion_symmetry(set: &[CfkComplex]) -> Outcome {
    for c in set {
        let (v, h) = check_symmetry::<F2>(c).map_err(err)?;
        ensure(v == h, || format!("{}: {v} vs {h}", c.name))?;
    }
    Ok(format!("{} complexes, image pairs of v0 and h0 agree", set.len()))
}

/// Two towers mapping onto each other by `U^0`: not a complex, since the
/// square of the differential is the identity. Stabilization must refuse it.
fn non_complex() -> PlusComplex<F2> {
    let tower = Tower { label: "z".into(), grading: 0, bottom: 0, top: None };
    let arrows = vec![
        TowerArrow { from: 0, to: 1, shift: 0, coeff: F2(true) },
        TowerArrow { from: 1, to: 0, shift: 0, coeff: F2(true) },
    ];
    let mut other = tower.clone();
    other.label = "w".into();
    PlusComplex::new(vec![tower, other], arrows)
}

fn criterion_stabilization() -> Outcome {
    let mut count = 0;
    for c in fixtures::knots() {
        let d = top_alexander::<F2>(&c).map_err(err)?;
        let mut complexes = vec![build_b::<F2>(&c).map_err(err)?];
        for k in -2..=2 {
            complexes.push(build_a::<F2>(&c, k).map_err(err)?);
            complexes.push(zero_surgery_cone::<F2>(&c, k).map_err(err)?);
        }
        complexes.push(floerkit_core::surgery::map_v::<F2>(&c, d - 1).map_err(err)?.cone());
        for p in &complexes {
            let start = floerkit_core::homology::default_start(p);
            let (m, cert) = stabilized(p, start).map_err(err)?;
            ensure(cert.is_arithmetic(), || format!("{}: totals {:?}", c.name, cert.totals))?;
            let (later, _) = stabilized(p, start + 5).map_err(err)?;
            ensure(m.corank == later.corank && m == later, || format!("{}: moved under +5", c.name))?;
            count += 1;
        }
    }
    let refused = u_module_structure(&non_complex());
    ensure(matches!(refused, Err(Error::Unstabilized { .. })), || format!("non-complex gave {refused:?}"))?;
    let code = exit_code(&refused.unwrap_err());
    ensure(code == 3, || format!("exit status {code}"))?;
    Ok(format!("{count} certificates arithmetic and stable; failure maps to exit 3"))
}

fn criterion_dichotomy() -> Outcome {
    let mut notes = Vec::new();
    for c in fixtures::knots().into_iter().chain([fixtures::dichotomy_model()]) {
        zero_surgery_twisted::<F2>(&c, top_alexander::<F2>(&c).map_err(err)? - 1).map_err(err)?;
        let r = check_twisted_dichotomy::<F2>(&c).map_err(err)?;
        ensure(r.status != Status::Fails, || format!("{}: v is {}", c.name, r.v_shape.as_str()))?;
        notes.push(format!("{} {}", c.name, if r.applicable { "pass" } else { "not-applicable" }));
    }
    ensure(notes.last().is_some_and(|n| n.ends_with("pass")), || "model not applicable".into())?;
    Ok(notes.join(", "))
}

fn criterion_determinism() -> Outcome {
    let render = || {
        let spec = FuzzSpec::new(7, 5);
        crate::cli::fuzz_report(&spec, FieldKind::F2).to_table()
    };
    let (a, b) = (render(), render());
    ensure(a == b, || "fuzz transcripts differ".into())?;
    Ok("repeated fuzz transcripts are byte-identical".into())
}

pub fn run_selftest() -> Report {
    let set = test_set(100);
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "validation suite", criterion_validation()),
        (2, "unknot zero surgery", criterion_unknot()),
        (3, "trefoil battery", criterion_trefoil()),
        (4, "figure-eight battery", criterion_figure_eight()),
        (5, "image monotonicity", criterion_monotonicity(&set)),
        (6, "symmetry rank law", criterion_symmetry(&set)),
        (7, "stabilization certificate", criterion_stabilization()),
        (8, "twisted dichotomy", criterion_dichotomy()),
        (9, "determinism", criterion_determinism()),
    ];
    let criteria: Vec<CriterionEntry> = results
        .into_iter()
        .map(|(id, name, r)| {
            let (pass, detail) = match r {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CriterionEntry { id, name: name.into(), pass, detail }
        })
        .collect();
    let passed = criteria.iter().all(|c| c.pass);
    Report::Selftest(SelftestReport { criteria, passed })
}
