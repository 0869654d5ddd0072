#![allow(dead_code)]

use std::path::PathBuf;

use puremon::constructions::DirectSumData;
use puremon::{find_order_unit, DioSystem, ExtVec, IndexSet};
use rand::seq::SliceRandom;
use rand::Rng;

pub const FIXTURES: [&str; 5] = ["randclosure-s2", "randclosure-s3", "localbass-l1", "cusp", "wiegand-e1"];

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn load_fixture(name: &str) -> DioSystem {
    let path = fixture_dir().join(format!("{name}.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn v(s: &str) -> ExtVec {
    s.parse().unwrap()
}

pub fn vs(list: &[&str]) -> Vec<ExtVec> {
    list.iter().map(|s| v(s)).collect()
}

/// A random system with `s ≤ 5`, at most 3 equations and 2 congruences,
/// entries `≤ 3`, and moduli in `{2, 3}`.
pub fn random_system<R: Rng>(rng: &mut R) -> DioSystem {
    let s = rng.gen_range(1..=5);
    let eqs = rng.gen_range(0..=3);
    let congs = rng.gen_range(0..=2);
    let row = |rng: &mut R| (0..s).map(|_| rng.gen_range(0..=3)).collect::<Vec<u64>>();
    let f = (0..eqs).map(|_| row(rng)).collect();
    let g = (0..eqs).map(|_| row(rng)).collect();
    let d = (0..congs).map(|_| row(rng)).collect();
    let moduli = (0..congs).map(|_| *[2u64, 3].choose(rng).unwrap()).collect();
    DioSystem::new(s, f, g, d, moduli).unwrap()
}

/// Draws random systems until one has a strictly positive finite solution.
/// The rare system whose Hilbert basis search hits the state cap is skipped.
pub fn random_system_with_unit<R: Rng>(rng: &mut R) -> DioSystem {
    loop {
        let sys = random_system(rng);
        match find_order_unit(&sys) {
            Ok(Some(_)) => return sys,
            Ok(None) => {}
            Err(e) if e.is_resource_cap() => {}
            Err(e) => panic!("{e}"),
        }
    }
}

/// Direct-sum data with indecomposable factors and maps hitting all of `I3`
/// from both sides, so the partition is recoverable from the composed basis.
pub fn random_direct_sum<R: Rng>(rng: &mut R) -> DirectSumData {
    let n1 = rng.gen_range(1..=2);
    let n2 = rng.gen_range(1..=2);
    let n3 = rng.gen_range(0..=2);
    let s = n1 + n2 + n3;
    let mut idx: Vec<usize> = (0..s).collect();
    idx.shuffle(rng);
    let i1 = IndexSet::from_indices(s, idx[..n1].iter().copied()).unwrap();
    let i2 = IndexSet::from_indices(s, idx[n1..n1 + n2].iter().copied()).unwrap();
    let i3 = IndexSet::from_indices(s, idx[n1 + n2..].iter().copied()).unwrap();
    let factor = |rng: &mut R, dim: usize| -> Vec<Vec<u64>> {
        if dim == 1 {
            vec![vec![rng.gen_range(1..=3)]]
        } else {
            match rng.gen_range(0..3) {
                0 => vec![vec![2, 0], vec![1, 1], vec![0, 2]],
                1 => vec![vec![3, 0], vec![1, 1], vec![0, 3]],
                _ => vec![vec![1, rng.gen_range(1..=3)]],
            }
        }
    };
    let linear = |rng: &mut R, dim: usize| -> Vec<Vec<u64>> {
        (0..n3)
            .map(|_| loop {
                let row: Vec<u64> = (0..dim).map(|_| rng.gen_range(0..=2)).collect();
                if row.iter().any(|&x| x > 0) {
                    break row;
                }
            })
            .collect()
    };
    let apply = |l: &[Vec<u64>], g: &[u64]| -> ExtVec {
        ExtVec::from_finite(&l.iter().map(|r| r.iter().zip(g).map(|(a, b)| a * b).sum()).collect::<Vec<u64>>())
    };
    let b1 = factor(rng, n1);
    let b2 = factor(rng, n2);
    let l1 = linear(rng, n1);
    let l2 = linear(rng, n2);
    let f1 = b1.iter().map(|g| apply(&l1, g)).collect();
    let f2 = b2.iter().map(|g| apply(&l2, g)).collect();
    let to_vecs = |b: &[Vec<u64>]| b.iter().map(|g| ExtVec::from_finite(g)).collect();
    DirectSumData::new(i1, i2, i3, to_vecs(&b1), f1, to_vecs(&b2), f2).unwrap()
}
