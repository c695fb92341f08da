use proptest::prelude::*;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sdperc::circuits::Location;
use sdperc::lattice::AdjacencyKind;
use sdperc::{build_box, check_separation, find_circuit, Circuit, Config, FiniteGraph, LatticeKind};

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

fn random_config(g: &FiniteGraph, p: f64, rng: &mut ChaCha8Rng) -> Config {
    Config::from_fn(g, |_| uniform(rng) < p)
}

/// Random walk from a random inside vertex until it first leaves the circuit.
fn crossing_walk(g: &FiniteGraph, c: &Circuit, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let inside: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| c.locate(g, v) == Location::Inside)
        .collect();
    let mut v = inside[rng.next_u64() as usize % inside.len()];
    let mut path = vec![v];
    while c.locate(g, v) != Location::Outside {
        let nbrs = g.neighbors(v);
        v = nbrs[rng.next_u64() as usize % nbrs.len()] as usize;
        path.push(v);
    }
    path
}

#[test]
fn star_square_paths_meet_circuit_neighbourhoods() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let graphs: Vec<FiniteGraph> = (5..=12)
        .map(|side| build_box(LatticeKind::StarSquareSite, side).unwrap())
        .collect();
    let mut pairs = 0;
    while pairs < 10_000 {
        let g = &graphs[rng.next_u64() as usize % graphs.len()];
        let p = 0.35 + 0.5 * uniform(&mut rng);
        let config = random_config(g, p, &mut rng);
        let Some(c) = find_circuit(g, &config, false, true).unwrap() else {
            continue;
        };
        for _ in 0..5 {
            let path = crossing_walk(g, &c, &mut rng);
            assert!(check_separation(g, &c, &path).unwrap(), "{:?} {:?}", c.coordinates(g), path);
            pairs += 1;
        }
    }
}

#[test]
fn found_circuits_surround_the_origin() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for kind in LatticeKind::ALL {
        let g = build_box(kind, 9).unwrap();
        for _ in 0..200 {
            let config = random_config(&g, 0.6, &mut rng);
            for state in [true, false] {
                if let Some(c) = find_circuit(&g, &config, false, state).unwrap() {
                    c.validate_around_origin(&g).unwrap();
                    assert!(c.vertices().iter().all(|&v| config.get(v) == state));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn chessboard_translates_are_matching_circuits(seed in any::<u64>(), side in 5usize..12, p in 0.4f64..0.9) {
        let g = build_box(LatticeKind::ChessBoard, side).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let config = random_config(&g, p, &mut rng);
        if let Some(c) = find_circuit(&g, &config, false, true).unwrap() {
            // Translates clipped by the box are skipped.
            if let Ok(t) = c.translate(&g, 1, 0, AdjacencyKind::Matching) {
                prop_assert_eq!(t.adjacency(), AdjacencyKind::Matching);
                prop_assert_eq!(t.len(), c.len());
            }
        }
    }
}

#[test]
fn most_chessboard_translates_fit_in_the_box() {
    let g = build_box(LatticeKind::ChessBoard, 11).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut found, mut translated) = (0, 0);
    for _ in 0..300 {
        let config = random_config(&g, 0.7, &mut rng);
        if let Some(c) = find_circuit(&g, &config, false, true).unwrap() {
            found += 1;
            translated += c.translate(&g, 1, 0, AdjacencyKind::Matching).is_ok() as u32;
        }
    }
    assert!(found > 100 && translated * 2 > found, "{translated} of {found}");
}
