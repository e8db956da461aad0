//! Algebraic invariants checked on constructed matrices and random inputs.

mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{bh, golden, golden_matrix, random_grid, random_pu_recipe, GOLDEN};
use zccs_core::bh::BhMatrix;
use zccs_core::constructions::{
    catalog_families, causal_length, extend_zcz, pu_recursive, seed_zpu, unifying_construct,
    zpu_kron, zpu_product, PuRecipe, SeedChoice, UnifyingMode,
};
use zccs_core::correlation::{
    accf_sum, accf_sum_matrix, check_optimal, is_pu, is_z_mate, is_zcc, is_zpu, zcz_width,
};
use zccs_core::io::CodeSetDocument;
use zccs_core::oracle;
use zccs_core::polymat::{CodeGrid, PolyMatrix};

/// Every column is a ZCC at Z and every distinct pair of columns are Z-mates.
fn is_zccs(x: &PolyMatrix, z: usize) -> bool {
    let cols: Vec<_> = (0..x.cols()).map(|k| x.column(k)).collect();
    cols.iter().all(|c| is_zcc(c, z).unwrap())
        && (0..cols.len())
            .all(|a| (0..cols.len()).all(|b| a == b || is_z_mate(&cols[a], &cols[b], z).unwrap()))
}

/// ZPU at width `z`, where a product whose support shrank below `z` counts
/// when it is PU.
fn zone_at_least(x: &PolyMatrix, z: usize) -> bool {
    is_pu(x).unwrap() || zcz_width(x).unwrap() >= z
}

fn constructed_zpu() -> Vec<(&'static str, PolyMatrix, usize)> {
    let t6 = seed_zpu(&bh("F3"), &bh("BH63")).unwrap();
    let e52 = seed_zpu(&bh("H2"), &bh("H4")).unwrap();
    let g0 = pu_recursive(&PuRecipe::uniform(bh("H2"), bh("BH63"), 1)).unwrap();
    let g1 = pu_recursive(&PuRecipe::uniform(bh("F3"), bh("F3"), 1)).unwrap();
    vec![
        ("table6", t6.clone(), 3),
        ("table7", extend_zcz(&bh("F3"), &t6, 3).unwrap(), 9),
        ("binary_seed", e52.clone(), 2),
        (
            "binary_extended",
            extend_zcz(&bh("H2"), &e52, 2).unwrap(),
            4,
        ),
        (
            "table5",
            unifying_construct(&g0, &g1, UnifyingMode::Interleave).unwrap(),
            3,
        ),
        (
            "concatenate",
            unifying_construct(&g0, &g1, UnifyingMode::Concatenate).unwrap(),
            3,
        ),
        ("h4-h8", seed_zpu(&bh("H4"), &bh("H8")).unwrap(), 4),
        ("f3-f6", seed_zpu(&bh("F3"), &bh("F6")).unwrap(), 3),
    ]
}

#[test]
fn zpu_equals_zccs_on_constructed_matrices() {
    for (name, x, z) in constructed_zpu() {
        assert!(is_zpu(&x, z).unwrap(), "{name}");
        assert!(is_zccs(&x, z), "{name}");
        assert_eq!(
            is_zpu(&x, z + 1).unwrap(),
            zcz_width(&x).unwrap() > z,
            "{name}"
        );
        assert_eq!(is_zccs(&x, z + 1), is_zpu(&x, z + 1).unwrap(), "{name}");
    }
}

#[test]
fn zpu_equals_zccs_under_perturbation() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for name in GOLDEN {
        let doc = golden(name);
        let z = doc.metadata.claimed_z.unwrap();
        for _ in 0..10 {
            let mut grid = doc.to_grid().unwrap();
            let (m, k, l) = (
                rng.gen_range(0..doc.m),
                rng.gen_range(0..doc.k),
                rng.gen_range(0..doc.l),
            );
            let e = grid.get(m, k, l);
            grid.set(m, k, l, e + rng.gen_range(1..doc.q));
            let x = PolyMatrix::from_time_domain(&grid).unwrap();
            let zpu = is_zpu(&x, z).unwrap();
            assert!(!zpu, "{name} mutated at ({m},{k},{l})");
            assert_eq!(zpu, is_zccs(&x, z), "{name}");
        }
    }
}

#[test]
fn conjugation_preserves_zone_width() {
    for (name, x, _) in constructed_zpu() {
        assert_eq!(
            zcz_width(&x.conjugate()).unwrap(),
            zcz_width(&x).unwrap(),
            "{name}"
        );
    }
    for name in GOLDEN {
        let x = golden_matrix(name);
        assert_eq!(
            zcz_width(&x.conjugate()).unwrap(),
            zcz_width(&x).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn product_and_kron_closure_on_constructed_instances() {
    let ex3 = golden_matrix("example3");
    let ex6 = golden_matrix("example6");
    let p = zpu_product(&ex3, &ex6, 2).unwrap();
    assert!(is_zpu(&p, 2).unwrap());
    assert_eq!(
        accf_sum_matrix(&p).unwrap().get(0, 0).coeff(0).to_integer(),
        Some(48)
    );
    assert!(p.max_delay().unwrap() <= ex3.max_delay().unwrap() + ex6.max_delay().unwrap());

    let k = zpu_kron(&ex6, &bh("H2").to_polymatrix(), 2).unwrap();
    assert_eq!((k.rows(), k.cols()), (4, 4));
    assert!(is_zpu(&k, 2).unwrap());
    assert_eq!(check_optimal(&k).unwrap().energy.to_integer(), Some(12));

    let k = zpu_kron(&golden_matrix("binary_seed"), &ex3, 2).unwrap();
    assert_eq!((k.rows(), k.cols()), (4, 8));
    assert!(is_zpu(&k, 2).unwrap());
    assert_eq!(
        accf_sum_matrix(&k).unwrap().get(3, 3).coeff(0).to_integer(),
        Some(64)
    );
}

#[test]
fn closure_properties_on_random_recipes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..50 {
        let recipe = random_pu_recipe(&mut rng, 2);
        let x = pu_recursive(&recipe).unwrap();
        assert!(is_pu(&x).unwrap());
        let m = x.rows();
        let ks: Vec<usize> = [m, 2 * m].into_iter().filter(|&k| k <= 16).collect();
        let k = ks[rng.gen_range(0..ks.len())];
        let uk = if k == m {
            recipe.u0.clone()
        } else {
            BhMatrix::dft(k).unwrap()
        };
        let y = seed_zpu(&recipe.u0, &uk).unwrap();

        let xy = zpu_product(&x, &y, m).unwrap();
        assert!(zone_at_least(&xy, m));
        let c = |z: &PolyMatrix| accf_sum_matrix(z).unwrap().get(0, 0).coeff(0);
        assert_eq!(c(&xy), c(&x).mul(&c(&y)).unwrap());

        let small =
            pu_recursive(&PuRecipe::uniform(bh("H2"), bh("H2"), rng.gen_range(0..2))).unwrap();
        let yk = zpu_kron(&y, &small, m).unwrap();
        assert!(zone_at_least(&yk, m));
        assert_eq!(c(&yk), c(&y).mul(&c(&small)).unwrap());

        assert_eq!(zcz_width(&y.conjugate()).unwrap(), zcz_width(&y).unwrap());
        assert!(is_zccs(&y, m));
    }
}

#[test]
fn recursive_generator_outputs_are_pu() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..50 {
        let recipe = random_pu_recipe(&mut rng, 3);
        let x = pu_recursive(&recipe).unwrap();
        let expected_len = recipe.p.pow(recipe.stages.len() as u32);
        assert_eq!(causal_length(&x).unwrap(), expected_len);
        let phases = recipe
            .stages
            .iter()
            .fold(recipe.u0.phase(), |q, a| num_lcm(q, a.phase()));
        assert_eq!(x.modulus(), phases);
        let r = check_optimal(&x).unwrap();
        assert!(r.is_pu, "{recipe:?}");
        assert_eq!(
            r.energy.to_integer(),
            Some((x.rows() * expected_len) as i64)
        );
    }
}

fn num_lcm(a: u32, b: u32) -> u32 {
    let gcd = |mut a: u32, mut b: u32| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    a / gcd(a, b) * b
}

fn catalog_bh() -> Vec<(String, BhMatrix)> {
    let mut names: Vec<String> = (1..=16).map(|m| format!("F{m}")).collect();
    names.extend(["H1", "H2", "H4", "H8", "H16", "BH63"].map(String::from));
    names.into_iter().map(|n| (n.clone(), bh(&n))).collect()
}

#[test]
fn every_catalog_seed_is_optimal() {
    let all = catalog_bh();
    let mut checked = 0;
    for (um_name, um) in &all {
        for (uk_name, uk) in &all {
            if uk.order() % um.order() != 0 {
                continue;
            }
            let x = seed_zpu(um, uk).unwrap();
            let m = um.order();
            assert!(is_zpu(&x, m).unwrap(), "{um_name}/{uk_name}");
            let r = check_optimal(&x).unwrap();
            assert_eq!(r.energy.to_integer(), Some((m * uk.order()) as i64));
            assert!(r.optimal, "{um_name}/{uk_name}");
            checked += 1;
        }
    }
    assert!(checked > 100, "{checked}");
}

#[test]
fn unifying_outputs_have_expected_zone_and_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let m = [2usize, 3][rng.gen_range(0..2)];
        let p = rng.gen_range(1..=2);
        let k = m * p;
        let name_k = if k == 6 {
            "BH63"
        } else {
            ["F", "H"][rng.gen_range(0..2)]
        };
        let name_k = if name_k.len() == 1 {
            format!("{name_k}{k}")
        } else {
            name_k.to_string()
        };
        let uk = BhMatrix::by_name(&name_k).unwrap_or_else(|_| BhMatrix::dft(k).unwrap());
        let g0 = pu_recursive(&PuRecipe::uniform(
            BhMatrix::dft(k).unwrap(),
            uk,
            rng.gen_range(0..2),
        ))
        .unwrap();
        let g1 = pu_recursive(&PuRecipe::uniform(
            BhMatrix::dft(m).unwrap(),
            BhMatrix::dft(m).unwrap(),
            rng.gen_range(0..3),
        ))
        .unwrap();
        let (l0, l1) = (causal_length(&g0).unwrap(), causal_length(&g1).unwrap());
        for mode in [UnifyingMode::Interleave, UnifyingMode::Concatenate] {
            let x = unifying_construct(&g0, &g1, mode).unwrap();
            let r = check_optimal(&x).unwrap();
            assert_eq!(r.length, k * l0 * l1);
            assert!(r.zcz_width >= m, "{mode:?} m={m} k={k}");
            assert_eq!(r.energy.to_integer(), Some((m * k * l0 * l1) as i64));
            assert!(r.within_bound());
            if p == 1 {
                assert!(r.is_pu);
            }
        }
    }
}

#[test]
fn catalog_chains_match_the_published_family_table() {
    let rows = catalog_families(
        4096,
        &[
            SeedChoice::new("H2", "H4"),
            SeedChoice::new("F3", "BH63"),
            SeedChoice::new("H4", "H8"),
        ],
    )
    .unwrap();
    let published = [
        (2, 4, 4, 2),
        (2, 4, 8, 4),
        (2, 4, 16, 8),
        (2, 4, 32, 16),
        (3, 6, 6, 3),
        (3, 6, 18, 9),
        (3, 6, 54, 27),
        (3, 6, 162, 81),
        (4, 8, 32, 16),
        (4, 8, 128, 64),
        (4, 8, 512, 256),
        (4, 8, 2048, 1024),
    ];
    for (m, k, l, z) in published {
        let row = rows
            .iter()
            .find(|r| (r.m, r.k, r.l) == (m, k, l))
            .unwrap_or_else(|| panic!("missing row {m} {k} {l}"));
        assert_eq!(row.z, z);
        assert!(row.optimal);
    }
    assert!(rows.iter().all(|r| r.optimal && r.l <= 4096));
    let mut sorted = rows.clone();
    sorted.sort_by_key(|r| (r.m, r.k, r.l));
    assert_eq!(sorted, rows);
}

#[test]
fn extension_multiplies_length_and_width() {
    let mut g = seed_zpu(&bh("F3"), &bh("BH63")).unwrap();
    let (mut l, mut z) = (6, 3);
    for _ in 0..3 {
        g = extend_zcz(&bh("F3"), &g, z).unwrap();
        l *= 3;
        z *= 3;
        let r = check_optimal(&g).unwrap();
        assert_eq!((r.length, r.zcz_width, r.optimal), (l, z, true));
        assert_eq!(r.energy.to_integer(), Some(3 * l as i64));
    }
}

fn oracle_agrees(grid: &CodeGrid) -> Result<(), TestCaseError> {
    let x = PolyMatrix::from_time_domain(grid).unwrap();
    let acc = accf_sum_matrix(&x).unwrap();
    let outcome = oracle::compare(grid, &acc).unwrap();
    prop_assert!(outcome.exact_agreement, "{:?}", outcome.first_disagreement);
    prop_assert!(outcome.max_float_error < 1e-9);
    Ok(())
}

fn arb_grid() -> impl Strategy<Value = CodeGrid> {
    (
        prop::sample::select(vec![2u32, 3, 4, 6, 12]),
        1usize..=4,
        1usize..=6,
        1usize..=32,
    )
        .prop_flat_map(|(q, m, k, l)| {
            prop::collection::vec(0..q, m * k * l)
                .prop_map(move |e| CodeGrid::new(q, m, k, l, e).unwrap())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn polynomial_path_matches_oracle(grid in arb_grid()) {
        oracle_agrees(&grid)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zone_verdicts_are_monotone(grid in arb_grid()) {
        let x = PolyMatrix::from_time_domain(&grid).unwrap();
        let width = zcz_width(&x).unwrap();
        for z in 1..=grid.length {
            prop_assert_eq!(is_zpu(&x, z).unwrap(), z <= width);
        }
    }

    #[test]
    fn accf_matrix_is_hermitian(grid in arb_grid()) {
        let x = PolyMatrix::from_time_domain(&grid).unwrap();
        let acc = accf_sum_matrix(&x).unwrap();
        let energy = (grid.rows * grid.length) as i64;
        for mu in 0..grid.cols {
            prop_assert_eq!(acc.get(mu, mu).coeff(0).to_integer(), Some(energy));
            for nu in 0..grid.cols {
                prop_assert_eq!(acc.get(nu, mu), &acc.get(mu, nu).tilde());
                let direct = accf_sum(&x.column(mu), &x.column(nu)).unwrap();
                prop_assert_eq!(acc.get(mu, nu), &direct);
            }
        }
    }

    #[test]
    fn report_invariants(grid in arb_grid()) {
        let x = PolyMatrix::from_time_domain(&grid).unwrap();
        let r = check_optimal(&x).unwrap();
        prop_assert_eq!(r.is_pu, r.zcz_width == r.length);
        prop_assert_eq!(r.optimal, r.zcz_width >= 1 && r.cols == r.rows * (r.length / r.zcz_width));
        prop_assert_eq!(is_pu(&x).unwrap(), r.is_pu);
        let z = r.zcz_width.max(1);
        prop_assert_eq!(is_zpu(&x, z).unwrap() , is_zccs(&x, z));
    }
}

#[test]
fn random_documents_round_trip_through_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let q = [2u32, 3, 4, 6, 12][rng.gen_range(0..5)];
        let (m, k, l) = (
            rng.gen_range(1..4),
            rng.gen_range(1..4),
            rng.gen_range(1..12),
        );
        let grid = random_grid(&mut rng, q, m, k, l);
        let x = PolyMatrix::from_time_domain(&grid).unwrap();
        let doc = CodeSetDocument::from_matrix(&x).unwrap();
        assert_eq!(doc.to_grid().unwrap(), grid);
    }
}
