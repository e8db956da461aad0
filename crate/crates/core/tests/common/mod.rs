//! Helpers shared by the integration test targets.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;

use zccs_core::bh::BhMatrix;
use zccs_core::constructions::PuRecipe;
use zccs_core::io::CodeSetDocument;
use zccs_core::polymat::{CodeGrid, PolyMatrix};

pub const GOLDEN: &[&str] = &[
    "table4",
    "table5",
    "table6",
    "table7",
    "binary_seed",
    "binary_extended",
    "example3",
    "example6",
    "example7",
    "example8",
];

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.txt"))
}

pub fn golden_text(name: &str) -> String {
    std::fs::read_to_string(golden_path(name)).expect("golden file exists")
}

pub fn golden(name: &str) -> CodeSetDocument {
    CodeSetDocument::parse(&golden_text(name)).expect("golden file parses")
}

pub fn golden_matrix(name: &str) -> PolyMatrix {
    golden(name).to_matrix().expect("golden file is unimodular")
}

pub fn bh(name: &str) -> BhMatrix {
    BhMatrix::by_name(name).expect("catalog name")
}

/// Exponent grid of a constructed matrix, for bit-exact comparison with a golden file.
pub fn sets(x: &PolyMatrix) -> Vec<Vec<Vec<u32>>> {
    CodeSetDocument::from_matrix(x).expect("unimodular").sets
}

fn bh_of_order<R: Rng>(rng: &mut R, order: usize) -> BhMatrix {
    let names: &[&str] = match order {
        2 => &["H2"],
        3 => &["F3"],
        4 => &["H4", "F4"],
        6 => &["BH63", "F6"],
        8 => &["H8", "F8"],
        _ => unreachable!("no catalog choice for order {order}"),
    };
    bh(names.choose(rng).unwrap())
}

fn shuffled<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}

/// A random recursive-generator recipe with M ∈ {2, 4, 6, 8}, P | M and N ≤ `max_stages`.
pub fn random_pu_recipe<R: Rng>(rng: &mut R, max_stages: usize) -> PuRecipe {
    let m = *[2usize, 4, 6, 8].choose(rng).unwrap();
    let divisors: Vec<usize> = (2..=m).filter(|p| m.is_multiple_of(*p)).collect();
    let p = *divisors.choose(rng).unwrap();
    let n = rng.gen_range(0..=max_stages);
    PuRecipe {
        p,
        stages: (0..n).map(|_| bh_of_order(rng, p)).collect(),
        u0: bh_of_order(rng, m),
        pi: Some(shuffled(rng, n)),
        row_perms: Some((0..n).map(|_| shuffled(rng, m)).collect()),
        col_perms: Some((0..n).map(|_| shuffled(rng, m)).collect()),
    }
}

pub fn random_grid<R: Rng>(rng: &mut R, q: u32, m: usize, k: usize, l: usize) -> CodeGrid {
    let exps = (0..m * k * l).map(|_| rng.gen_range(0..q)).collect();
    CodeGrid::new(q, m, k, l, exps).unwrap()
}
