//! Acceptance suite. Prints one `criterion N: PASS|FAIL` line per criterion
//! and exits nonzero if any fails. Every comparison is exact; the only
//! tolerances are the wall-clock budgets below.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{
    face_count, folded_s1, listed_code, listing_bijections, mirror_all, RULE_1D_LISTING,
    SEED_1D_LISTING, SEED_2D_LISTING,
};
use paperfold::cohomology::{ap_complex, collar_letters, paperfolding_cohomology};
use paperfold::complexity::{count_stabilized, growth_bound_check, p2_closed_form};
use paperfold::crease::{
    build_s1, generate_recursive, reflect, reflected_sign, simulate_strip_fold, CreaseLabel,
    ReflectionSet,
};
use paperfold::linalg::smith_normal_form;
use paperfold::spectral::{
    find_coincidence, is_primitive, seed_covers_alphabet, substitution_matrix,
};
use paperfold::substitution::{alphabet_size, derive_rule, equivalence_check, seed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BUDGET_EQUIVALENCE: Duration = Duration::from_secs(60);
const BUDGET_PRIMITIVITY: Duration = Duration::from_secs(10);
const BUDGET_COINCIDENCE: Duration = Duration::from_secs(10);
const BUDGET_COMPLEXITY_1D: Duration = Duration::from_secs(30);
const BUDGET_COMPLEXITY_2D: Duration = Duration::from_secs(300);
const BUDGET_COHOMOLOGY_1D: Duration = Duration::from_secs(10);
const BUDGET_COHOMOLOGY_2D: Duration = Duration::from_secs(600);
const SNF_SAMPLES: usize = 500;
const SNF_SEED: u64 = 0x5eed_f01d;

type Outcome = Result<String, String>;

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let took = start.elapsed();
    if took <= budget {
        Ok(())
    } else {
        Err(format!("took {took:.2?}, budget {budget:?}"))
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn equivalence() -> Outcome {
    let start = Instant::now();
    let mut faces = 0;
    for (dim, k_max) in [(1, 8), (2, 5), (3, 3)] {
        for k in 0..=k_max {
            let r = equivalence_check(dim, k).map_err(|e| e.to_string())?;
            ensure(r.is_equivalent(), || r.to_string())?;
            faces += r.faces_compared;
        }
    }
    within(start, BUDGET_EQUIVALENCE)?;
    Ok(format!("{faces} faces agree, {:.2?}", start.elapsed()))
}

fn fixtures() -> Outcome {
    let rule_1d = derive_rule(1).map_err(|e| e.to_string())?;
    for (from, to) in RULE_1D_LISTING {
        ensure(rule_1d.image(from) == to, || {
            format!("a{from:02b} maps to {:?}", rule_1d.image(from))
        })?;
    }
    let s1 = seed(1).map_err(|e| e.to_string())?;
    ensure(s1.cells() == SEED_1D_LISTING && s1.origin() == [-1], || {
        "one-dimensional seed".into()
    })?;

    let rule_2d = derive_rule(2).map_err(|e| e.to_string())?;
    let found = listing_bijections(&rule_2d);
    ensure(found.len() == 1, || {
        format!("{} bijections match", found.len())
    })?;
    let perm = found[0];
    let s2 = seed(2).map_err(|e| e.to_string())?;
    let cells = [[-1, 0], [0, 0], [-1, -1], [0, -1]];
    for (pos, listed) in cells.iter().zip(SEED_2D_LISTING) {
        ensure(s2.get(pos) == Some(listed_code(listed, &perm)), || {
            format!("seed letter at {pos:?}")
        })?;
    }
    Ok(format!("crease index bijection {perm:?} is unique"))
}

fn primitivity() -> Outcome {
    let start = Instant::now();
    let mut ks = Vec::new();
    for dim in 1..=3 {
        let rule = derive_rule(dim).map_err(|e| e.to_string())?;
        let report = is_primitive(&rule, 4);
        ensure(report.primitive, || {
            format!("d={dim} not primitive within 4")
        })?;
        let s = seed(dim).map_err(|e| e.to_string())?;
        ensure(
            seed_covers_alphabet(&rule, &s, 3).map_err(|e| e.to_string())?,
            || format!("d={dim} seed misses letters after 3 steps"),
        )?;
        for letter in 0..alphabet_size(dim) as u16 {
            let mut seen = vec![false; alphabet_size(dim)];
            for &x in &rule.power_block(letter, 4) {
                seen[x as usize] = true;
            }
            ensure(seen.iter().all(|&b| b), || {
                format!("d={dim} letter {letter} after 4 steps")
            })?;
        }
        ks.push(report.k);
    }
    within(start, BUDGET_PRIMITIVITY)?;
    Ok(format!("primitive at k = {ks:?}"))
}

fn coincidence() -> Outcome {
    let start = Instant::now();
    for dim in 1..=3 {
        let rule = derive_rule(dim).map_err(|e| e.to_string())?;
        let r = find_coincidence(&rule, 6);
        ensure(r.found && r.k == 2 && r.contains(&vec![3; dim]), || {
            format!("d={dim}: {}", r.to_json())
        })?;
    }
    within(start, BUDGET_COINCIDENCE)?;
    Ok("k = 2 at (3,...,3) for d = 1, 2, 3".into())
}

fn complexity_1d() -> Outcome {
    let start = Instant::now();
    for n in 7..=64 {
        let s = count_stabilized(1, n).map_err(|e| e.to_string())?;
        ensure(s.is_stable() && s.count() == 4 * n, || {
            format!("n={n}: {s:?}")
        })?;
    }
    within(start, BUDGET_COMPLEXITY_1D)?;
    Ok(format!("4n for 7 <= n <= 64, {:.2?}", start.elapsed()))
}

fn complexity_2d() -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for n in 3..=16 {
        let s = count_stabilized(2, n).map_err(|e| e.to_string())?;
        let formula = p2_closed_form(n as u64).map_err(|e| e.to_string())?;
        ensure(s.is_stable(), || format!("n={n} did not stabilize"))?;
        if s.count() as u64 != formula {
            mismatches.push(format!(
                "n={n}: enumerated {} vs formula {formula}",
                s.count()
            ));
        }
        if n == 3 {
            ensure(s.count() == 184, || format!("n=3 counts {}", s.count()))?;
        }
    }
    ensure(mismatches.is_empty(), || {
        format!("formula refuted: {}", mismatches.join("; "))
    })?;
    within(start, BUDGET_COMPLEXITY_2D)?;
    Ok(format!(
        "closed form holds for 3 <= n <= 16, {:.2?}",
        start.elapsed()
    ))
}

fn cohomology() -> Outcome {
    let expected: [(usize, &[&str], Duration); 2] = [
        (1, &["Z", "Z[1/2] + Z"], BUDGET_COHOMOLOGY_1D),
        (
            2,
            &[
                "Z",
                "Z[1/2] + Z[1/2]",
                "Z[1/4] + Z[1/2] + Z[1/2] + Z^3 + Z/2",
            ],
            BUDGET_COHOMOLOGY_2D,
        ),
    ];
    for (dim, groups, budget) in expected {
        let start = Instant::now();
        let got: Vec<String> = paperfolding_cohomology(dim)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|g| g.to_string())
            .collect();
        ensure(got == groups, || format!("d={dim}: {got:?}"))?;
        within(start, budget)?;
    }
    Ok("d = 1 and d = 2 groups match".into())
}

fn folding_oracles() -> Outcome {
    for n in 2..=12 {
        let strip = simulate_strip_fold(n).map_err(|e| e.to_string())?;
        let half = 1i64 << (n - 1);
        let by_parity = [strip.orientation_at(0), strip.orientation_at(1)];
        for x in -half..half {
            ensure(
                strip.orientation_at(x) == by_parity[x.rem_euclid(2) as usize],
                || format!("strip n={n} at {x}"),
            )?;
        }
    }
    let mut checked = 0;
    for dim in 1..=3 {
        let s1 = folded_s1(dim);
        for a in ReflectionSet::all(dim) {
            let mirrored = mirror_all(&s1, &a);
            for sigma in CreaseLabel::all(dim) {
                let corner: Vec<i64> = sigma
                    .components()
                    .iter()
                    .map(|&c| if c < 0 { -1 } else { 0 })
                    .collect();
                let want = mirrored[&(sigma.axis(), corner)];
                ensure(reflected_sign(&a, &sigma).ok() == Some(want), || {
                    format!("{a:?} {sigma:?}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!(
        "strip parity n = 2..12, {checked} reflected crease signs"
    ))
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SNF_SEED);
    // Reflections on the recursion patterns.
    for dim in 1..=3 {
        let p = generate_recursive(dim, 4 - dim as u32 / 2).map_err(|e| e.to_string())?;
        for i in 0..dim {
            let ri = reflect(&p, i).map_err(|e| e.to_string())?;
            ensure(reflect(&ri, i).ok().as_ref() == Some(&p), || {
                format!("involution d={dim}")
            })?;
            for j in 0..dim {
                let ij = reflect(&ri, j).map_err(|e| e.to_string())?;
                let ji = reflect(&reflect(&p, j).map_err(|e| e.to_string())?, i)
                    .map_err(|e| e.to_string())?;
                ensure(ij == ji, || format!("commutation d={dim} {i} {j}"))?;
            }
        }
        for n in 0..=6 - dim as u32 {
            let len = generate_recursive(dim, n).map_err(|e| e.to_string())?.len() as u64;
            ensure(len == face_count(dim, n), || format!("F({n}) for d={dim}"))?;
        }
        let m = substitution_matrix(&derive_rule(dim).map_err(|e| e.to_string())?);
        ensure(m.column_sums().iter().all(|&c| c == 1 << dim), || {
            "column sums".into()
        })?;
        ensure(
            m.perron_data().map(|p| p.eigenvalue) == Some(1 << dim),
            || "Perron".into(),
        )?;
    }
    ensure(build_s1(2).map(|p| p.len()).ok() == Some(4), || {
        "S_2(1)".into()
    })?;
    for dim in 1..=2 {
        let rule = derive_rule(dim).map_err(|e| e.to_string())?;
        let collared = collar_letters(&rule, &seed(dim).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let (complex, _) = ap_complex(&collared).map_err(|e| e.to_string())?;
        for q in 2..=complex.dim() {
            let dd = complex
                .boundary(q - 1)
                .mul(complex.boundary(q))
                .map_err(|e| e.to_string())?;
            ensure(dd.is_zero(), || format!("boundary squared d={dim}"))?;
        }
    }
    for sample in 0..SNF_SAMPLES {
        let (rows, cols) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let m = common::random_matrix(&mut rng, rows, cols, 20);
        let s = smith_normal_form(&m);
        let product =
            s.u.mul(&m)
                .and_then(|x| x.mul(&s.v))
                .map_err(|e| e.to_string())?;
        ensure(
            product == s.d && s.u.is_unimodular() && s.v.is_unimodular(),
            || format!("Smith form sample {sample}: {m}"),
        )?;
        let diag = s.diagonal();
        ensure(
            diag.windows(2)
                .all(|w| w[1] == 0.into() || (w[0] != 0.into() && &w[1] % &w[0] == 0.into())),
            || format!("divisibility in sample {sample}"),
        )?;
    }
    Ok(format!("{SNF_SAMPLES} Smith forms reconstructed"))
}

fn growth_bound() -> Outcome {
    let mut parts = Vec::new();
    for (dim, n_max) in [(1, 64), (2, 16)] {
        let r = growth_bound_check(dim, n_max).map_err(|e| e.to_string())?;
        ensure(r.holds, || {
            format!("d={dim}: bound fails, max ratio {}", r.max_ratio)
        })?;
        parts.push(format!(
            "d={dim} C={} max ratio {:.2}",
            r.constant, r.max_ratio
        ));
    }
    Ok(parts.join(", "))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("substitution and recursion agree", equivalence),
        ("listed rules and seeds", fixtures),
        ("primitivity and seed coverage", primitivity),
        ("coincidence", coincidence),
        ("one-dimensional complexity", complexity_1d),
        ("two-dimensional complexity", complexity_2d),
        ("cohomology groups", cohomology),
        ("folding oracles", folding_oracles),
        ("property suites", property_suites),
        ("growth bound", growth_bound),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
