//! Acceptance criteria 1-11. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::time::{Duration, Instant};

use growthlab::census::{
    cayley_census, check_group_bounds, check_point_upper, lie_census, torus_conjugate_census, Scope,
};
use growthlab::enumerate::{enumerate_group, EnumMethod, Limits};
use growthlab::error::Error;
use growthlab::escape::{escape, find_regular_semisimple, prime_power, regular_semisimple_catalog, sample_instances};
use growthlab::growth::{ball_sizes, concentration_profile, diameter, np_candidate_set, np_check};
use growthlab::ledger::{c1, c2, verify_recurrences, DEFAULT_DELTA_CAP, DEFAULT_D_GRID};
use growthlab::varieties::{conjugacy_class_variety, diagonal_torus, is_regular_semisimple, nonregular_locus};
use growthlab::{make_field, make_group, Embedding, Family, GroupSpec, LedgerTerm, Matrix};
use num_bigint::BigUint;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// Tolerances and budgets.
const C1_RUNTIME: Duration = Duration::from_secs(60);
const C3_RUNTIME: Duration = Duration::from_secs(600);
const C8_RUNTIME: Duration = Duration::from_secs(600);
const C2_MAX_Q: u64 = 16;
const C2_MAX_ORDER: u64 = 1_000_000;
const C3_CLASS_SAMPLES: usize = 10;
const C6_INSTANCES: usize = 100;
const C7_MAX_Q: u32 = 13;
const C10_EPS_BAND: (f64, f64) = (0.0, 0.55);
const SEED: u64 = 20_240_601;
const BUDGET: usize = 2_000_000;

fn sl2(q: u64) -> GroupSpec {
    let (p, k) = prime_power(q).unwrap();
    make_group(Family::SL, 1, &make_field(p, k).unwrap(), Embedding::Usual).unwrap()
}

fn sp4_3() -> GroupSpec {
    make_group(Family::Sp, 2, &make_field(3, 1).unwrap(), Embedding::Usual).unwrap()
}

type Outcome = Result<String, String>;

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    for (g, want) in [(sl2(3), 24usize), (sl2(5), 120), (sp4_3(), 51840)] {
        let mut sets = Vec::new();
        for method in [EnumMethod::BfsClosure, EnumMethod::AmbientFilter] {
            let t = Instant::now();
            let mut pts = enumerate_group(&g, method, BUDGET).map_err(|e| format!("{}: {e}", g.label()))?;
            let dt = t.elapsed();
            if dt > C1_RUNTIME {
                return Err(format!("{} {method:?} took {dt:?}", g.label()));
            }
            if pts.len() != want {
                return Err(format!("{} {method:?}: {} != {want}", g.label(), pts.len()));
            }
            pts.sort();
            sets.push(pts);
        }
        if sets[0] != sets[1] {
            return Err(format!("{}: the two methods disagree on elements", g.label()));
        }
        notes.push(format!("|{}|={want}", g.label()));
    }
    Ok(notes.join(", "))
}

fn constructible_specs(max_q: u64, max_order: u64) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    let cap = BigUint::from(max_order);
    for q in 2..=max_q {
        let Some((p, k)) = prime_power(q) else { continue };
        let field = make_field(p, k).unwrap();
        for fam in Family::ALL {
            for emb in [Embedding::Usual, Embedding::BlockContragredient] {
                if emb == Embedding::BlockContragredient && fam != Family::SL {
                    continue;
                }
                for r in 1..=8 {
                    match make_group(fam, r, &field, emb) {
                        Ok(g) if g.order() <= cap => out.push(g),
                        Ok(_) => break,
                        Err(_) => continue,
                    }
                }
            }
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let specs = constructible_specs(C2_MAX_Q, C2_MAX_ORDER);
    let mut bad = Vec::new();
    let mut enumerated = 0;
    for g in &specs {
        let rep = check_group_bounds(g);
        if !rep.satisfied {
            bad.push(rep.target.clone());
        }
        // the formula order itself is cross-checked by enumeration when small
        if g.order() <= BigUint::from(20_000u32) {
            let n = enumerate_group(g, EnumMethod::BfsClosure, BUDGET).map_err(|e| e.to_string())?.len();
            if BigUint::from(n) != g.order() {
                bad.push(format!("{} enumerates to {n}", g.label()));
            }
            enumerated += 1;
        }
    }
    if bad.is_empty() {
        Ok(format!("{} specs, 0 violations, {enumerated} orders confirmed by enumeration", specs.len()))
    } else {
        Err(format!("violations: {}", bad.join("; ")))
    }
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let mut checked = 0;
    let mut bad = Vec::new();
    let groups: Vec<GroupSpec> = [3, 5, 7, 11, 13].into_iter().map(sl2).chain([sp4_3()]).collect();
    for g in &groups {
        let pts = enumerate_group(g, EnumMethod::BfsClosure, BUDGET).map_err(|e| e.to_string())?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut varieties = vec![diagonal_torus(g), nonregular_locus(g)];
        let mut classes = 0;
        let mut tries = 0;
        while classes < C3_CLASS_SAMPLES && tries < 10_000 {
            tries += 1;
            let x: &Matrix = pts.choose(&mut rng).unwrap();
            if is_regular_semisimple(g, x).map_err(|e| e.to_string())? {
                varieties.push(conjugacy_class_variety(g, x).map_err(|e| e.to_string())?);
                classes += 1;
            }
        }
        if classes < C3_CLASS_SAMPLES {
            return Err(format!("{}: only {classes} regular semisimple samples", g.label()));
        }
        for v in &varieties {
            let rep = check_point_upper(v, g, Scope::Group, BUDGET).map_err(|e| e.to_string())?;
            checked += 1;
            if !rep.satisfied {
                bad.push(format!("{} on {}: {} > {}", v.label, g.label(), rep.count, rep.bound));
            }
        }
    }
    let dt = t.elapsed();
    if !bad.is_empty() {
        return Err(bad.join("; "));
    }
    if dt > C3_RUNTIME {
        return Err(format!("took {dt:?}"));
    }
    Ok(format!("{checked} varieties, 0 violations, {:.1}s", dt.as_secs_f64()))
}

fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    for q in [3, 5] {
        let f = make_field(q, 1).unwrap();
        for r in [1, 2] {
            let g = GroupSpec::new_relaxed(Family::Sp, r, &f, Embedding::Usual).map_err(|e| e.to_string())?;
            let l = lie_census(&g).map_err(|e| e.to_string())?;
            if !l.satisfied {
                return Err(format!("{}: {} != {}", l.target, l.count, l.expected));
            }
            notes.push(format!("{}={}", l.target, l.count));
        }
    }
    let f = make_field(5, 1).unwrap();
    let g = GroupSpec::new_relaxed(Family::Sp, 1, &f, Embedding::Usual).map_err(|e| e.to_string())?;
    let pts = enumerate_group(&g, EnumMethod::BfsClosure, BUDGET).map_err(|e| e.to_string())?;
    let c = cayley_census(&g, &pts).map_err(|e| e.to_string())?;
    if !c.all_ok() {
        return Err(format!("Cayley census failed: {c:?}"));
    }
    notes.push(format!("Cayley on {}: {} <-> {}", g.label(), c.lie_off_z, c.group_off_z));
    Ok(notes.join(", "))
}

fn criterion_5() -> Outcome {
    let mut notes = Vec::new();
    for q in [3, 5, 7, 11] {
        let g = sl2(q);
        let pts = enumerate_group(&g, EnumMethod::BfsClosure, BUDGET).map_err(|e| e.to_string())?;
        let t = torus_conjugate_census(&g, &pts).map_err(|e| e.to_string())?;
        if !t.all_ok() {
            return Err(format!("{}: {t:?}", g.label()));
        }
        if q == 5 && t.conjugates != 15 {
            return Err(format!("SL_2(F_5) has {} conjugates, expected 15", t.conjugates));
        }
        notes.push(format!("q={q}: {}", t.conjugates));
    }
    Ok(notes.join(", "))
}

fn criterion_6() -> Outcome {
    let mut notes = Vec::new();
    for g in [sl2(5), sl2(11), sp4_3()] {
        let a = g.standard_generators().map_err(|e| e.to_string())?;
        let inst = sample_instances(&g, &a, C6_INSTANCES * 2, SEED).map_err(|e| e.to_string())?;
        let (mut done, mut skipped, mut max_k) = (0, 0, 0);
        for (v, x) in &inst {
            if done == C6_INSTANCES {
                break;
            }
            match escape(&g, &a, v, x, &Limits::elements(BUDGET)) {
                Ok(r) => {
                    done += 1;
                    max_k = max_k.max(r.k);
                }
                Err(Error::NoEscapePossible) => skipped += 1,
                Err(e @ Error::BoundViolated { .. }) => return Err(format!("{}: {e} on {}", g.label(), v.label)),
                Err(e) => return Err(format!("{}: {e}", g.label())),
            }
        }
        if done < C6_INSTANCES {
            return Err(format!("{}: only {done} escapable instances", g.label()));
        }
        notes.push(format!("{}: {done} ok, max k={max_k}, {skipped} skipped (V contains <A>x)", g.label()));
    }
    Ok(notes.join("; "))
}

fn criterion_7() -> Outcome {
    let specs = regular_semisimple_catalog(C7_MAX_Q).map_err(|e| e.to_string())?;
    let mut worst = 0;
    for g in &specs {
        let a = g.standard_generators_unverified().map_err(|e| e.to_string())?;
        let r = find_regular_semisimple(g, &a, &Limits::elements(BUDGET)).map_err(|e| format!("{}: {e}", g.label()))?;
        worst = worst.max(r.k);
    }
    Ok(format!("{} specs, max k={worst}", specs.len()))
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let g = sl2(29);
    let b = g.standard_generators().map_err(|e| e.to_string())?;
    let all = enumerate_group(&g, EnumMethod::BfsClosure, BUDGET).map_err(|e| e.to_string())?;
    let (set, how) = np_candidate_set(&g, &b, &Limits::elements(BUDGET)).map_err(|e| e.to_string())?;
    let v = np_check(&g, &set, &all).map_err(|e| e.to_string())?;
    let dt = t.elapsed();
    if !v.applicable || v.holds != Some(true) {
        return Err(format!("{v:?}"));
    }
    if dt > C8_RUNTIME {
        return Err(format!("took {dt:?}"));
    }
    Ok(format!("|A|={} ({how}) >= {}, A^3=G, {:.1}s", v.set_size, v.threshold_approx, dt.as_secs_f64()))
}

fn criterion_9() -> Outcome {
    for delta in [3, 8, 10] {
        let r = verify_recurrences(delta, &DEFAULT_D_GRID, DEFAULT_DELTA_CAP).map_err(|e| e.to_string())?;
        if !r.all_pass {
            return Err(format!("recurrences fail at delta={delta}"));
        }
    }
    let seven = LedgerTerm::from_u64(7);
    for delta in 1..=10 {
        if c1(0, &seven, delta).map_err(|e| e.to_string())? != seven {
            return Err("c1(0,7,delta) != 7".into());
        }
    }
    for dd in [1, 2, 5, 1000] {
        let got = c1(1, &LedgerTerm::from_u64(dd), 3).map_err(|e| e.to_string())?;
        if got != LedgerTerm::from_u64(216 * dd * dd * dd) {
            return Err(format!("c1(1,{dd},3) = {got}"));
        }
    }
    let c = c2(1, 3, 1, 2).map_err(|e| e.to_string())?;
    if c != BigUint::from(99u32) {
        return Err(format!("c2(1,3,1,2) = {c}"));
    }
    Ok("delta in {3,8,10} pass; c1(0,7,.)=7, c1(1,D,3)=216D^3, c2(1,3,1,2)=99".into())
}

fn criterion_10() -> Outcome {
    let mut notes = Vec::new();
    for q in [13, 17, 19] {
        let g = sl2(q);
        let a = g.standard_generators().map_err(|e| e.to_string())?;
        let t = diagonal_torus(&g);
        let p = concentration_profile(&g, &a, &t, 1000, &Limits::elements(BUDGET)).map_err(|e| e.to_string())?;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for r in p.window() {
            if let Some(e) = r.epsilon {
                lo = lo.min(e);
                hi = hi.max(e);
                if e < C10_EPS_BAND.0 || e > C10_EPS_BAND.1 {
                    return Err(format!("q={q} m={} eps={e:.4} outside band", r.m));
                }
            }
        }
        if let Some(r) = p.rows.iter().find(|r| r.in_v > 2 * q) {
            return Err(format!("q={q} m={}: |A^m ∩ T| = {} > 2q", r.m, r.in_v));
        }
        let d = diameter(&g, &a, &Limits::elements(BUDGET)).map_err(|e| e.to_string())?;
        let envelope = (g.order().to_string().parse::<f64>().unwrap()).ln().powi(3);
        if d as f64 > envelope {
            return Err(format!("q={q}: diam {d} > (ln|G|)^3 = {envelope:.0}"));
        }
        notes.push(format!("q={q}: eps in [{lo:.3},{hi:.3}], diam={d}"));
    }
    Ok(notes.join("; "))
}

fn criterion_11() -> Outcome {
    let g = sl2(13);
    let a = g.standard_generators().map_err(|e| e.to_string())?;
    let tracked = [diagonal_torus(&g), nonregular_locus(&g)];
    let seq = ball_sizes(&g, &a, 100, &tracked, &Limits::elements(BUDGET).threads(1)).map_err(|e| e.to_string())?;
    let again = ball_sizes(&g, &a, 100, &tracked, &Limits::elements(BUDGET).threads(1)).map_err(|e| e.to_string())?;
    let par = ball_sizes(&g, &a, 100, &tracked, &Limits::elements(BUDGET).threads(4)).map_err(|e| e.to_string())?;
    if seq.to_csv() != again.to_csv() {
        return Err("sequential reruns differ".into());
    }
    if seq != par {
        return Err("sequential and parallel profiles differ".into());
    }
    let g = sl2(11);
    let a = g.standard_generators().map_err(|e| e.to_string())?;
    let run = || -> Result<Vec<String>, String> {
        let inst = sample_instances(&g, &a, 30, SEED).map_err(|e| e.to_string())?;
        Ok(inst
            .iter()
            .map(|(v, x)| match escape(&g, &a, v, x, &Limits::elements(BUDGET)) {
                Ok(r) => serde_json::to_string(&r).unwrap(),
                Err(e) => e.to_string(),
            })
            .collect())
    };
    if run()? != run()? {
        return Err("escape reruns differ".into());
    }
    Ok("ball profiles and escape reports identical across reruns and thread counts".into())
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (n, f) in criteria {
        if only.is_some_and(|o| o != n) {
            continue;
        }
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("criterion {n:>2}: PASS ({secs:.1}s) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL ({secs:.1}s) {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
