//! Cross-module randomized invariants: geometry ↔ code ↔ decoder ↔ bounds
//! ↔ serialization must agree on every sampled instance.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use lincode::bounds::{
    enumerate_tableaux, error_radius, min_distance_bruteforce, RadiusPolynomial, Tableau,
};
use lincode::decoder::{count_effective_sets, enumerate_effective_sets, sample_effective_set};
use lincode::simulate::corrupt;
use lincode::{
    format_vector, parse_vector, CodeFile, CodeInstance, Codeword, CoefficientVector,
    Configuration, Construction, FieldSpec, solve_minor,
};

fn spec(q: u64) -> FieldSpec {
    FieldSpec::new(q).unwrap()
}

/// A feasible random-configuration shape: q large enough that sampling
/// never exhausts its budget.
fn shape() -> impl Strategy<Value = (u64, usize, usize, usize, u64)> {
    (prop::sample::select(vec![11u64, 13, 101]), 2usize..=4, 2usize..=4, any::<u64>())
        .prop_flat_map(|(q, n, m, seed)| {
            (Just(q), Just(n), Just(m), 1..n.min(m), Just(seed))
        })
}

fn build(q: u64, n: usize, m: usize, d: usize, seed: u64) -> CodeInstance {
    let config = Configuration::random(spec(q), n, m, seed).unwrap();
    CodeInstance::build(config, d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_configurations_validate_and_points_sit_on_lines(
        (q, n, m, _d, seed) in shape()
    ) {
        let config = Configuration::random(spec(q), n, m, seed).unwrap();
        config.validate().unwrap();
        for (i, row) in config.points().iter().enumerate() {
            for p in row {
                prop_assert!(config.lines()[i].contains(p).unwrap());
            }
        }
    }

    #[test]
    fn encoding_is_linear((q, n, m, d, seed) in shape()) {
        let code = build(q, n, m, d, seed);
        let s = code.spec();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
        let a = CoefficientVector::random(s, code.dimension(), &mut rng);
        let b = CoefficientVector::random(s, code.dimension(), &mut rng);
        let sum = CoefficientVector::new(
            a.entries().iter().zip(b.entries()).map(|(x, y)| x.add(*y).unwrap()).collect(),
        ).unwrap();
        let ca = code.encode(&a).unwrap();
        let cb = code.encode(&b).unwrap();
        let csum = code.encode(&sum).unwrap();
        for ((x, y), z) in ca.entries().iter().zip(cb.entries()).zip(csum.entries()) {
            prop_assert_eq!(x.add(*y).unwrap(), *z);
        }
    }

    #[test]
    fn every_minor_solve_recovers_an_exact_message((q, n, m, d, seed) in shape()) {
        let code = build(q, n, m, d, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED);
        let a = CoefficientVector::random(code.spec(), code.dimension(), &mut rng);
        let c = code.encode(&a).unwrap();
        for _ in 0..10 {
            let set = sample_effective_set(n, m, d, &mut rng).unwrap();
            prop_assert_eq!(solve_minor(&code, &set, &c).unwrap(), a.clone());
        }
    }

    #[test]
    fn corruption_weight_is_exact((q, n, m, d, seed) in shape(), t_frac in 0.0f64..=1.0) {
        let code = build(q, n, m, d, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xC0DE);
        let a = CoefficientVector::random(code.spec(), code.dimension(), &mut rng);
        let c = code.encode(&a).unwrap();
        let t = ((code.length() as f64) * t_frac).floor() as usize;
        let (received, support) = corrupt(&c, t, &mut rng).unwrap();
        prop_assert_eq!(support.len(), t);
        let changed = c
            .entries()
            .iter()
            .zip(received.entries())
            .filter(|(x, y)| x != y)
            .count();
        prop_assert_eq!(changed, t);
    }

    #[test]
    fn codefile_round_trip_rebuilds_the_same_matrix((q, n, m, d, seed) in shape()) {
        let code = build(q, n, m, d, seed);
        let file = CodeFile::from_code(&code, Construction::Random, seed);
        let rebuilt = CodeFile::from_json(&file.to_json().unwrap()).unwrap().to_code().unwrap();
        prop_assert_eq!(rebuilt.matrix(), code.matrix());
    }

    #[test]
    fn vector_files_round_trip(q in prop::sample::select(vec![5u64, 7, 101]), values in prop::collection::vec(0u64..1000, 1..30)) {
        let s = spec(q);
        let entries: Vec<_> = values.iter().map(|v| s.element(v % q).unwrap()).collect();
        let text = format_vector(&entries);
        prop_assert_eq!(text.matches(',').count(), entries.len() - 1);
        prop_assert_eq!(parse_vector(s, &text).unwrap(), entries);
    }

    #[test]
    fn effective_set_count_matches_enumeration(n in 2usize..=5, m in 2usize..=5) {
        for d in 1..n.min(m) {
            let count = count_effective_sets(n, m, d).unwrap();
            let enumerated = enumerate_effective_sets(n, m, d).unwrap().count();
            prop_assert_eq!(count, enumerated as u128);
        }
    }

    #[test]
    fn tableaux_round_trip_through_cells(n in 1usize..=5, m in 1usize..=5) {
        for t in enumerate_tableaux(n, m).unwrap() {
            let rebuilt = Tableau::from_cells(n, m, &t.cells()).unwrap();
            prop_assert_eq!(rebuilt, t);
        }
    }

    #[test]
    fn radius_polynomial_endpoint_identities(n in 1usize..=40, m in 1usize..=40, d in 1usize..=10) {
        let f = RadiusPolynomial::new(n, m, d);
        prop_assert_eq!(f.eval(1), (n * d) as i128);
        prop_assert_eq!(f.eval(d as u64 + 1), (m * d) as i128);
    }

    #[test]
    fn received_with_few_errors_still_has_honest_minors((q, n, m, d, seed) in shape()) {
        // A corrupted coordinate inside the marked set must change the
        // proposal; one outside must not.
        let code = build(q, n, m, d, seed);
        let s = code.spec();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xE44);
        let a = CoefficientVector::random(s, code.dimension(), &mut rng);
        let c = code.encode(&a).unwrap();
        let set = sample_effective_set(n, m, d, &mut rng).unwrap();
        let rows = set.global_rows();
        let inside = rows[0];
        let outside = (0..code.length()).find(|i| !rows.contains(i));
        let mut bumped = c.entries().to_vec();
        bumped[inside] = bumped[inside].add(s.one()).unwrap();
        let hit = Codeword::new(bumped).unwrap();
        prop_assert_ne!(solve_minor(&code, &set, &hit).unwrap(), a.clone());
        if let Some(outside) = outside {
            let mut bumped = c.entries().to_vec();
            bumped[outside] = bumped[outside].add(s.one()).unwrap();
            let missed = Codeword::new(bumped).unwrap();
            prop_assert_eq!(solve_minor(&code, &set, &missed).unwrap(), a.clone());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn brute_force_distance_respects_the_bound(
        shape in prop::sample::select(vec![(2usize, 3usize, 1usize), (3, 3, 1), (2, 4, 1)]),
        seed in 0u64..1000,
    ) {
        // Small enough for the q^delta oracle: delta = 3, q = 5.
        let (n, m, d) = shape;
        let config = Configuration::random(spec(5), n, m, seed).unwrap();
        let code = CodeInstance::build(config, d).unwrap();
        let d_min = min_distance_bruteforce(&code).unwrap();
        let bound = error_radius(n, m, d).unwrap().radius;
        prop_assert!(d_min >= bound, "d_min {} below bound {}", d_min, bound);
    }
}
