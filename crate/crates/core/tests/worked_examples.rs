use tlgns::export::{counts_csv, parse_word_list};
use tlgns::functional::{omega, omega_with_counts, star_product_counts};
use tlgns::gns::{basis_from_words, counts_table, generate_basis_words, BasisOptions};
use tlgns::metric::build_eta_blocks;
use tlgns::paths::{cg, enumerate_paths, Step};
use tlgns::spin::build_generators;
use tlgns::{QContext, StrandCounts, TLWord};

const N5_WORDS: &str = ";2;1 2;3 2;4 3 2;1 3 2;2 1 3 2;1 4 3 2;2 1 4 3 2;3 2 1 4 3 2";
const GOLDEN: &str = include_str!("golden/n5_counts.csv");

fn n5_words() -> Vec<TLWord> {
    parse_word_list(5, N5_WORDS).unwrap()
}

#[test]
fn omega_on_the_two_illustrations() {
    for r in [4.5, 6.0, 20.0] {
        let ctx = QContext::new(r).unwrap();
        let (v, c) = omega_with_counts(&TLWord::parse(4, "2 2 3 1 2").unwrap(), 2, &ctx).unwrap();
        assert_eq!(c, StrandCounts { x0: 0, x: 2, y: 1 });
        assert!((v + ctx.loop_weight()).abs() < 1e-13);

        let (v, c) = omega_with_counts(&TLWord::parse(5, "2 1 3 4 2").unwrap(), 2, &ctx).unwrap();
        assert!(c.x0 > 0);
        assert_eq!(v, 0.0);
    }
}

#[test]
fn counts_table_matches_golden_file() {
    let table = counts_table(&n5_words(), 2).unwrap();
    assert_eq!(counts_csv(&table), GOLDEN);
}

#[test]
fn selected_cells() {
    let ws = n5_words();
    let c12 = star_product_counts(&ws[0], &ws[1], 2).unwrap();
    assert_eq!((c12.x0, c12.x, c12.y), (0, 1, 0));
    let ctx = QContext::new(7.0).unwrap();
    let basis = basis_from_words(ws, 2, &ctx).unwrap();
    assert!((basis.gram[(5, 9)] + ctx.loop_weight()).abs() < 1e-13);
}

#[test]
fn generated_basis_spans_the_same_diagrams() {
    // The search orders a_5/a_6 and a_7/a_8 the other way round; the set of
    // words is the same.
    let ctx = QContext::new(7.0).unwrap();
    let generated = generate_basis_words(5, 2, &ctx, BasisOptions::default()).unwrap();
    let mut a: Vec<Vec<usize>> = generated.words.iter().map(|w| w.letters().to_vec()).collect();
    let mut b: Vec<Vec<usize>> = n5_words().iter().map(|w| w.letters().to_vec()).collect();
    a.sort();
    b.sort();
    assert_eq!(a, b);
}

#[test]
fn conjecture_on_the_five_site_basis() {
    let ctx = QContext::new(7.0).unwrap();
    let eta = build_eta_blocks(5, &ctx).unwrap();
    let gens = build_generators(5, &ctx);
    let basis = basis_from_words(n5_words(), 2, &ctx).unwrap();
    let report = tlgns::gns::verify_conjecture(&basis, &[], &eta, &gens, &ctx).unwrap();
    assert!(report.gram_deviation <= 1e-10, "{}", report.gram_deviation);
    assert!(report.word_deviation <= 1e-10);
}

#[test]
fn three_site_paths() {
    let paths: Vec<Vec<usize>> = enumerate_paths(3, None, None)
        .iter()
        .map(|p| p.twice_spins().to_vec())
        .collect();
    assert_eq!(paths, vec![vec![0, 1, 2, 3], vec![0, 1, 2, 1], vec![0, 1, 0, 1]]);
}

#[test]
fn clebsch_gordan_values() {
    let ctx = QContext::new(5.0).unwrap();
    assert!((cg(0.0, 0.0, 0.5, Step::Up, &ctx).unwrap() - 1.0).norm() < 1e-15);
    let root2 = ctx.q_number(2.0).sqrt();
    let down = cg(0.5, 0.5, -0.5, Step::Down, &ctx).unwrap();
    assert!((down + ctx.q_pow(-0.5) / root2).norm() < 1e-14);
    let up = cg(0.5, -0.5, 0.5, Step::Up, &ctx).unwrap();
    assert!((up - ctx.q_pow(-0.5) / root2).norm() < 1e-14);
}

#[test]
fn unit_in_even_chain() {
    let ctx = QContext::new(5.5).unwrap();
    let v = omega(&TLWord::unit(4), 2, &ctx).unwrap();
    // (q^0 + q^0) / (q^2 + q^-2)
    let expected = 2.0 / (2.0 * (2.0 * std::f64::consts::PI / 5.5).cos());
    assert!((v - expected).abs() < 1e-13);
}
