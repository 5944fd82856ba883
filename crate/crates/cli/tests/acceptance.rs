//! Acceptance gate: ten numbered criteria, one test function each, so the
//! harness prints exactly one pass/fail line per criterion. Every numeric
//! tolerance and runtime ceiling is pinned as a constant below; runs are
//! fully seeded and deterministic.

use std::collections::BTreeMap;
use std::process::Command;
use std::sync::{Mutex, MutexGuard, OnceLock};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lincode::bounds::{
    count_effective_subsets, enumerate_tableaux, error_radius, extremal_codeword,
    min_distance_bruteforce, point_count_comparison,
};
use lincode::{
    collision_rank, count_effective_sets, enumerate_effective_sets, sample_effective_set,
    simulate, solve_minor, CodeFile, CodeInstance, CoefficientVector, Codeword, Configuration,
    Construction, FieldSpec, Strategy,
};

// ---------------- pinned tolerances and ceilings ----------------

/// Criterion 1: sampled effective sets per degree; every minor must solve.
const C1_SETS_PER_DEGREE: usize = 1_000;
const C1_CEILING: Duration = Duration::from_secs(5);
/// Criterion 2: random codewords read back through every effective set.
const C2_CODEWORDS: usize = 50;
const C2_CEILING: Duration = Duration::from_secs(60);
/// Criterion 4: brute-force distance ceiling, per code.
const C4_CEILING_EACH: Duration = Duration::from_secs(1);
/// Criterion 6: exhaustive tableau sweep ceiling.
const C6_CEILING: Duration = Duration::from_secs(10);
/// Criterion 7: half-distance regime floor at 200 trials per t.
const C7_TRIALS: u32 = 200;
const C7_SUCCESS_FLOOR: f64 = 0.99;
const C7_CEILING: Duration = Duration::from_secs(300);
/// Criterion 8: monotonicity slack for a 200-trial estimate, and the
/// required success level at t = 5 (one past half distance).
const C8_TRIALS: u32 = 200;
const C8_BAND: f64 = 0.05;
const C8_T5_FLOOR: f64 = 0.5;
/// Criterion 9: pairs, errors per pair, and the binomial z-radius.
const C9_PAIRS: usize = 20;
const C9_ERRORS: usize = 100_000;
const C9_Z: f64 = 3.0;
/// Criterion 10: closed-form Weil value for q = 53, n = 4.
const C10_WEIL: f64 = 97.6807;

/// Wall-clock ceilings only mean something if criteria run one at a time;
/// the default multi-threaded harness would otherwise share the core.
static GATE: Mutex<()> = Mutex::new(());

fn gate() -> MutexGuard<'static, ()> {
    GATE.lock().unwrap_or_else(|e| e.into_inner())
}

/// The workhorse code: q = 101, 4 grid lines, 5 points per line, degree 2.
/// Length 20, dimension 6, distance bound 10, 12,000 effective sets.
static BIG: OnceLock<CodeInstance> = OnceLock::new();

fn big_grid_code() -> &'static CodeInstance {
    BIG.get_or_init(|| {
        let spec = FieldSpec::new(101).unwrap();
        let config = Configuration::random_grid(spec, 4, 5, 7).unwrap();
        CodeInstance::build(config, 2).unwrap()
    })
}

fn random_word<R: Rng + ?Sized>(code: &CodeInstance, rng: &mut R) -> Codeword {
    let s = code.spec();
    let entries = (0..code.length())
        .map(|_| s.element(rng.random_range(0..s.order())).unwrap())
        .collect();
    Codeword::new(entries).unwrap()
}

#[test]
fn criterion_01_effective_minors_always_invert() {
    let _g = gate();
    let start = Instant::now();
    let spec = FieldSpec::new(101).unwrap();
    let mut solved = 0usize;
    for d in 1..=3 {
        let config = Configuration::random(spec, 5, 6, 42).unwrap();
        let code = CodeInstance::build(config, d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(100 + d as u64);
        let received = random_word(&code, &mut rng);
        for _ in 0..C1_SETS_PER_DEGREE {
            let set = sample_effective_set(5, 6, d, &mut rng).unwrap();
            solve_minor(&code, &set, &received)
                .expect("an effective-set minor must never be singular");
            solved += 1;
        }
    }
    assert_eq!(solved, 3 * C1_SETS_PER_DEGREE);
    let elapsed = start.elapsed();
    assert!(elapsed < C1_CEILING, "{elapsed:?} over the {C1_CEILING:?} ceiling");
    println!("criterion 1: PASS - {solved} sampled minors solved, none singular, in {elapsed:?}");
}

#[test]
fn criterion_02_every_effective_set_reads_the_same_message() {
    let _g = gate();
    let start = Instant::now();
    let code = big_grid_code();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut solves = 0u64;
    for _ in 0..C2_CODEWORDS {
        let a = CoefficientVector::random(code.spec(), code.dimension(), &mut rng);
        let c = code.encode(&a).unwrap();
        let mut consensus: Option<CoefficientVector> = None;
        for set in enumerate_effective_sets(4, 5, 2).unwrap() {
            let read = solve_minor(code, &set, &c).unwrap();
            match &consensus {
                None => consensus = Some(read),
                Some(first) => assert_eq!(&read, first, "set {set} disagrees"),
            }
            solves += 1;
        }
        let consensus = consensus.unwrap();
        assert_eq!(consensus, a);
        assert_eq!(code.encode(&consensus).unwrap(), c, "re-encode mismatch");
    }
    assert_eq!(solves, C2_CODEWORDS as u64 * 12_000);
    let elapsed = start.elapsed();
    assert!(elapsed < C2_CEILING, "{elapsed:?} over the {C2_CEILING:?} ceiling");
    println!(
        "criterion 2: PASS - {} codewords x 12000 sets agree and re-encode, in {elapsed:?}",
        C2_CODEWORDS
    );
}

#[test]
fn criterion_03_set_count_matches_the_product_formula() {
    let _g = gate();
    let mut checked = 0;
    for n in 2..=5usize {
        for m in 2..=5usize {
            for d in 1..n.min(m) {
                let formula = count_effective_sets(n, m, d).unwrap();
                let listed = enumerate_effective_sets(n, m, d).unwrap().count() as u128;
                assert_eq!(formula, listed, "count mismatch at ({n}, {m}, {d})");
                checked += 1;
            }
        }
    }
    assert_eq!(checked, 30, "every shape with n, m <= 5 and d < min(n, m)");
    assert_eq!(count_effective_sets(2, 2, 1).unwrap(), 4);
    assert_eq!(count_effective_sets(3, 3, 1).unwrap(), 54);
    assert_eq!(count_effective_sets(4, 5, 2).unwrap(), 12_000);
    println!("criterion 3: PASS - enumeration equals the product formula on {checked} shapes");
}

#[test]
fn criterion_04_brute_force_distance_meets_the_bound() {
    let _g = gate();
    let spec5 = FieldSpec::new(5).unwrap();

    // (3, 3, 1): six jointly general lines over F_5 do not exist (the dual
    // point set would be a 7-point arc in a plane that caps at 6), so this
    // case runs on the random construction.
    let start = Instant::now();
    let config = Configuration::random(spec5, 3, 3, 3).unwrap();
    let code = CodeInstance::build(config, 1).unwrap();
    let d_min = min_distance_bruteforce(&code).unwrap();
    let bound = error_radius(3, 3, 1).unwrap().radius;
    assert_eq!(d_min, 6);
    assert_eq!(d_min, bound);
    let first = start.elapsed();
    assert!(first < C4_CEILING_EACH, "{first:?} over the {C4_CEILING_EACH:?} ceiling");

    // (2, 3, 1) on an axis-aligned grid. The minimum weight 3 sits strictly
    // below the full-row count n(m - d) = 4: deleting d points from each of
    // n lines overestimates the true minimum, while nm - max f is tight.
    let start = Instant::now();
    let config = Configuration::random_grid(spec5, 2, 3, 0).unwrap();
    let code = CodeInstance::build(config, 1).unwrap();
    let d_min = min_distance_bruteforce(&code).unwrap();
    let bound = error_radius(2, 3, 1).unwrap().radius;
    assert_eq!(d_min, 3);
    assert_eq!(d_min, bound);
    let witness = extremal_codeword(&code).unwrap();
    assert_eq!(witness.weight() as u64, d_min, "weight-3 witness");
    assert!(d_min < (2 * (3 - 1)) as u64, "strictly under n(m - d)");
    let second = start.elapsed();
    assert!(second < C4_CEILING_EACH, "{second:?} over the {C4_CEILING_EACH:?} ceiling");

    println!(
        "criterion 4: PASS - d_min 6 and 3 equal nm - max f, in {first:?} + {second:?}; \
         the (2,3,1) witness beats n(m-d) = 4"
    );
}

#[test]
fn criterion_05_extremal_codeword_weights() {
    let _g = gate();
    let code = big_grid_code();
    let w = extremal_codeword(code).unwrap().weight() as u64;
    assert_eq!(w, 10);
    assert_eq!(w, error_radius(4, 5, 2).unwrap().radius);

    let spec5 = FieldSpec::new(5).unwrap();
    let small = CodeInstance::build(Configuration::random_grid(spec5, 2, 3, 0).unwrap(), 1).unwrap();
    let w = extremal_codeword(&small).unwrap().weight() as u64;
    assert_eq!(w, 3);
    assert_eq!(w, error_radius(2, 3, 1).unwrap().radius);
    println!("criterion 5: PASS - extremal weights 10 and 3 match nm - max f exactly");
}

#[test]
fn criterion_06_tableau_lemmas_have_no_counterexamples() {
    let _g = gate();
    let start = Instant::now();
    let mut combos = 0;
    let mut tableaux_checked = 0u64;
    for d in 1..=2usize {
        let delta = (d + 2) * (d + 1) / 2;
        for n in 1..=5usize {
            for m in 1..=5usize {
                // Shapes outside the analysis hypotheses (d < min(n, m),
                // and n or m at least d + 2) carry no claim.
                let Ok(radius) = error_radius(n, m, d) else { continue };
                combos += 1;
                for t in enumerate_tableaux(n, m).unwrap() {
                    tableaux_checked += 1;
                    let sigma = t.sigma() as u64;
                    let has_staircase = t.contains_regular(d + 1);
                    if has_staircase && sigma as usize > delta {
                        // Staircase containment plus more than delta cells
                        // forces a second effective subset.
                        let subsets = count_effective_subsets(n, m, d, &t.cells()).unwrap();
                        assert!(
                            subsets >= 2,
                            "({n}, {m}, d = {d}), rows {:?}: only {subsets} effective subsets",
                            t.row_lengths()
                        );
                    }
                    if !has_staircase {
                        // Without the staircase a tableau cannot exceed max f.
                        assert!(
                            sigma <= radius.max_f,
                            "({n}, {m}, d = {d}), rows {:?}: sigma {sigma} > max f {}",
                            t.row_lengths(),
                            radius.max_f
                        );
                    }
                    if sigma > radius.max_f {
                        // Contrapositive, checked directly for good measure.
                        assert!(
                            has_staircase,
                            "({n}, {m}, d = {d}), rows {:?}: sigma {sigma} without staircase",
                            t.row_lengths()
                        );
                    }
                }
            }
        }
    }
    assert_eq!(combos, 23, "15 admissible shapes at d = 1 plus 8 at d = 2");
    assert!(tableaux_checked > 1_000, "swept only {tableaux_checked} tableaux");
    let elapsed = start.elapsed();
    assert!(elapsed < C6_CEILING, "{elapsed:?} over the {C6_CEILING:?} ceiling");
    println!(
        "criterion 6: PASS - {tableaux_checked} tableaux over {combos} shapes, \
         zero counterexamples, in {elapsed:?}"
    );
}

#[test]
fn criterion_07_half_distance_regime_succeeds() {
    let _g = gate();
    let start = Instant::now();
    let code = big_grid_code();
    let sim = simulate(code, &[1, 2, 3, 4], C7_TRIALS, Strategy::Exhaustive, 2026).unwrap();
    let mut rates = Vec::new();
    for row in &sim.rows {
        assert!(
            row.success_rate >= C7_SUCCESS_FLOOR,
            "t = {}: success {} below the {C7_SUCCESS_FLOOR} floor",
            row.t,
            row.success_rate
        );
        rates.push(row.success_rate);
    }
    let elapsed = start.elapsed();
    assert!(elapsed < C7_CEILING, "{elapsed:?} over the {C7_CEILING:?} ceiling");
    println!(
        "criterion 7: PASS - success {rates:?} for t = 1..4 at {C7_TRIALS} trials each, \
         exhaustive voting, in {elapsed:?}"
    );
}

#[test]
fn criterion_08_success_curve_beyond_half_distance() {
    let _g = gate();
    // Drive the actual simulate command end to end, file in, CSV out.
    let dir = tempfile::TempDir::new().unwrap();
    let path = dir.path().join("code.json");
    CodeFile::from_code(big_grid_code(), Construction::Grid, 7)
        .write(&path)
        .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_lincode"))
        .args([
            "simulate",
            "--code",
            &path.to_string_lossy(),
            "--t-min",
            "5",
            "--t-max",
            "9",
            "--trials",
            &C8_TRIALS.to_string(),
            "--seed",
            "2027",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "simulate failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,trials,decoded,ambiguous,failed,wrong,success_rate"
    );
    let mut curve = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 7, "row shape: {line}");
        curve.push((
            fields[0].parse::<usize>().unwrap(),
            fields[6].parse::<f64>().unwrap(),
        ));
    }
    assert_eq!(curve.iter().map(|r| r.0).collect::<Vec<_>>(), vec![5, 6, 7, 8, 9]);
    assert!(
        curve[0].1 > C8_T5_FLOOR,
        "success at t = 5 is {}, needs > {C8_T5_FLOOR}",
        curve[0].1
    );
    for i in 0..curve.len() {
        for j in i + 1..curve.len() {
            assert!(
                curve[j].1 <= curve[i].1 + C8_BAND,
                "curve rises from t = {} ({}) to t = {} ({}) beyond the {C8_BAND} band",
                curve[i].0,
                curve[i].1,
                curve[j].0,
                curve[j].1
            );
        }
    }
    let rates: Vec<f64> = curve.iter().map(|r| r.1).collect();
    println!(
        "criterion 8: PASS - simulate command curve {rates:?} for t = 5..9 is monotone \
         within {C8_BAND} and clears {C8_T5_FLOOR} at t = 5"
    );
}

#[test]
fn criterion_09_collision_frequency_matches_the_rank() {
    let _g = gate();
    let spec5 = FieldSpec::new(5).unwrap();
    // Same nonexistence note as criterion 4: this shape only exists under
    // the random construction.
    let config = Configuration::random(spec5, 3, 3, 3).unwrap();
    let code = CodeInstance::build(config, 1).unwrap();
    // 3 sigma per pair leaves a ~5% chance that some pair in a family of
    // 20 trips at an arbitrary seed; the seed is pinned to a verified run.
    let mut rng = ChaCha8Rng::seed_from_u64(0x9A12);
    let mut table: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    let mut pairs = 0;
    while pairs < C9_PAIRS {
        let q1 = sample_effective_set(3, 3, 1, &mut rng).unwrap();
        let q2 = sample_effective_set(3, 3, 1, &mut rng).unwrap();
        if q1 == q2 {
            continue;
        }
        let cr = collision_rank(&code, &q1, &q2).unwrap();
        // The coincidence map vanishes on every codeword restriction, a
        // delta-dimensional kernel, so its rank is at most half the
        // symmetric difference. The observed frequency must track the
        // rank, not the raw exponent |Q xor Q'|.
        assert!(2 * cr.rank <= cr.heuristic_exponent);
        let mut hits = 0u32;
        for _ in 0..C9_ERRORS {
            let e = random_word(&code, &mut rng);
            if solve_minor(&code, &q1, &e).unwrap() == solve_minor(&code, &q2, &e).unwrap() {
                hits += 1;
            }
        }
        let p_hat = f64::from(hits) / C9_ERRORS as f64;
        let p = 5f64.powi(-(cr.rank as i32));
        let sigma = (p * (1.0 - p) / C9_ERRORS as f64).sqrt();
        assert!(
            (p_hat - p).abs() <= C9_Z * sigma,
            "pair {pairs} ({q1} vs {q2}): |{p_hat} - {p}| exceeds {C9_Z} sigma = {}",
            C9_Z * sigma
        );
        *table.entry((cr.rank, cr.heuristic_exponent)).or_default() += 1;
        pairs += 1;
    }
    println!(
        "criterion 9: PASS - {C9_PAIRS} pairs within {C9_Z} sigma of q^-rank over \
         {C9_ERRORS} uniform errors each; rank vs |Q xor Q'|:"
    );
    for ((rank, diff), count) in &table {
        println!("  rank {rank}, |Q xor Q'| = {diff}: {count} pair(s)");
    }
}

#[test]
fn criterion_10_point_count_beats_the_weil_bound() {
    let _g = gate();
    let counts = point_count_comparison(53, 4).unwrap();
    assert_eq!(counts.config_points, 206);
    assert!(
        (counts.weil_bound - C10_WEIL).abs() < 1e-3,
        "weil bound {} far from {C10_WEIL}",
        counts.weil_bound
    );
    assert!(counts.config_points as f64 > counts.weil_bound);
    println!(
        "criterion 10: PASS - 206 configuration points over F_53 exceed the Weil value {:.4}",
        counts.weil_bound
    );
}
