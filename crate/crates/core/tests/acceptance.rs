//! Acceptance criteria, one line each. Runs without the libtest harness so the
//! lines are always printed; exits non-zero if any criterion fails.

mod common;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tlgns::diagram::word_to_diagram;
use tlgns::export::{counts_csv, parse_word_list};
use tlgns::functional::{omega, omega_with_counts};
use tlgns::gns::{
    basis_from_words, binomial, counts_table, generate_basis_words, min_eigenvalue, sample_words, verify_conjecture,
    BasisOptions,
};
use tlgns::metric::{build_eta_blocks, min_eigenvalue as eta_min_eigenvalue, MetricSet};
use tlgns::relations::{algebra_relations, metric_relations, scaled_deviation, spectral_checks, symmetry_relations};
use tlgns::spin::build_generators;
use tlgns::{QContext, TLWord};

const GOLDEN: &str = include_str!("golden/n5_counts.csv");
const N5_WORDS: &str = ";2;1 2;3 2;4 3 2;1 3 2;2 1 3 2;1 4 3 2;2 1 4 3 2;3 2 1 4 3 2";
const SAMPLES_PER_SECTOR: usize = 200;
const SEED: u64 = 20_240_601;

fn r_values(n_sites: usize) -> [f64; 3] {
    let n = n_sites as f64;
    [n + 0.5, n + 2.0, 4.0 * n]
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn algebra() -> Outcome {
    let threshold = 1e-10;
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    for n_sites in 2..=10 {
        for r in r_values(n_sites) {
            let ctx = QContext::new(r).unwrap();
            let report = algebra_relations(n_sites, &ctx, threshold);
            worst = worst.max(report.max_deviation());
            failed.extend(report.failures().map(|f| format!("N={n_sites} r={r}: {}", f.name)));
        }
    }
    outcome(
        failed.is_empty(),
        format!("N=2..10, 3 r each, max rel dev {worst:.2e} (<= {threshold:e}) {failed:?}"),
    )
}

fn symmetries() -> Outcome {
    let threshold = 1e-10;
    let mut worst: f64 = 0.0;
    let mut failed = Vec::new();
    for n_sites in 2..=8 {
        for r in r_values(n_sites) {
            let ctx = QContext::new(r).unwrap();
            let mut report = symmetry_relations(n_sites, &ctx, threshold);
            let set = MetricSet::build(n_sites, &ctx).unwrap();
            report.merge(metric_relations(n_sites, &ctx, &set, threshold).unwrap());
            worst = worst.max(report.max_deviation());
            failed.extend(report.failures().map(|f| format!("N={n_sites} r={r}: {} ({:e})", f.name, f.max_deviation)));
        }
    }
    outcome(
        failed.is_empty(),
        format!("N=2..8, both symmetry tables and metric identities, max rel dev {worst:.2e} (<= {threshold:e}) {failed:?}"),
    )
}

fn eta_structure() -> Outcome {
    let mut herm: f64 = 0.0;
    let mut agree: f64 = 0.0;
    let mut min_ev = f64::INFINITY;
    for n_sites in 1..=8 {
        for r in r_values(n_sites) {
            let ctx = QContext::new(r).unwrap();
            let set = MetricSet::build(n_sites, &ctx).unwrap();
            herm = herm.max(scaled_deviation(&set.eta, &set.eta.adjoint()));
            min_ev = min_ev.min(eta_min_eigenvalue(&set.eta_blocks));
            agree = agree
                .max(set.eta_from_c().max_deviation(&set.eta))
                .max(set.eta_from_c_prime().max_deviation(&set.eta));
        }
    }
    outcome(
        herm <= 1e-12 && min_ev > 0.0 && agree <= 1e-9,
        format!("N=1..8: hermiticity {herm:.2e} (<= 1e-12), min eig {min_ev:.3e} (> 0), three routes agree to {agree:.2e} (<= 1e-9)"),
    )
}

fn worked_examples() -> Outcome {
    let mut problems = Vec::new();
    for r in [4.5, 7.0, 12.0] {
        let ctx = QContext::new(r).unwrap();
        let v = omega(&TLWord::parse(4, "2 2 3 1 2").unwrap(), 2, &ctx).unwrap();
        if (v + ctx.loop_weight()).abs() > 1e-12 {
            problems.push(format!("N=4 example at r={r}: {v}"));
        }
        let (v, c) = omega_with_counts(&TLWord::parse(5, "2 1 3 4 2").unwrap(), 2, &ctx).unwrap();
        if v != 0.0 || c.x0 == 0 {
            problems.push(format!("N=5 example at r={r}: {v}"));
        }
    }
    let ctx = QContext::new(7.0).unwrap();
    let words = parse_word_list(5, N5_WORDS).unwrap();
    let basis = basis_from_words(words.clone(), 2, &ctx).unwrap();
    if (basis.gram[(5, 9)] + ctx.loop_weight()).abs() > 1e-12 {
        problems.push(format!("G_6,10 = {}", basis.gram[(5, 9)]));
    }
    let table = counts_csv(&counts_table(&words, 2).unwrap());
    if table != GOLDEN {
        problems.push("counts table differs from golden file".into());
    }
    outcome(
        problems.is_empty(),
        format!("two illustrations, G_6,10 and the 10x10 counts table {problems:?}"),
    )
}

fn conjecture() -> Outcome {
    let threshold = 1e-9;
    let mut worst: f64 = 0.0;
    let mut words_checked = 0;
    let mut failed = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for n_sites in 2..=8 {
        for r in r_values(n_sites) {
            let ctx = QContext::new(r).unwrap();
            let eta = build_eta_blocks(n_sites, &ctx).unwrap();
            let gens = build_generators(n_sites, &ctx);
            for n in 0..=n_sites {
                let basis = match generate_basis_words(n_sites, n, &ctx, BasisOptions::default()) {
                    Ok(b) => b,
                    Err(e) => {
                        failed.push(format!("N={n_sites} n={n} r={r}: {e}"));
                        continue;
                    }
                };
                let sample = sample_words(n_sites, SAMPLES_PER_SECTOR, &mut rng);
                let report = verify_conjecture(&basis, &sample, &eta, &gens, &ctx).unwrap();
                words_checked += report.words.len();
                worst = worst.max(report.max_abs_deviation);
                if !(report.max_abs_deviation <= threshold) {
                    failed.push(format!("N={n_sites} n={n} r={r}: {:e}", report.max_abs_deviation));
                }
            }
        }
    }
    outcome(
        failed.is_empty(),
        format!("N=2..8, all sectors, {words_checked} words, max dev {worst:.2e} (<= {threshold:e}) {failed:?}"),
    )
}

fn spectrum() -> Outcome {
    let mut failed = Vec::new();
    let mut im: f64 = 0.0;
    let mut herm: f64 = 0.0;
    for n_sites in 2..=8 {
        for r in r_values(n_sites) {
            let ctx = QContext::new(r).unwrap();
            let eta = build_eta_blocks(n_sites, &ctx).unwrap();
            let report = spectral_checks(n_sites, &ctx, &eta, 1e-8, 1e-9).unwrap();
            im = im.max(report.records[0].max_deviation);
            herm = herm.max(report.records[1].max_deviation);
            failed.extend(report.failures().map(|f| format!("N={n_sites} r={r}: {} ({:e})", f.name, f.max_deviation)));
        }
    }
    outcome(
        failed.is_empty(),
        format!("N=2..8: max |Im eig H| {im:.2e} (<= 1e-8), h hermiticity {herm:.2e} (<= 1e-9), spectra equal to 1e-8 {failed:?}"),
    )
}

fn oracle() -> Outcome {
    let mut mismatches = 0;
    let mut checked = 0;
    for n_sites in 2..=4 {
        let mut frontier = vec![TLWord::unit(n_sites)];
        for len in 0..=6 {
            for w in &frontier {
                let d = word_to_diagram(w);
                let (pairing, loops) = common::trace(n_sites, w.letters());
                checked += 1;
                if d.pairing() != pairing.as_slice() || d.loops() != loops {
                    mismatches += 1;
                }
            }
            if len < 6 {
                frontier = frontier
                    .iter()
                    .flat_map(|w| (1..n_sites).map(move |i| w.left_mul(i).unwrap()))
                    .collect();
            }
        }
    }
    let mut dims_ok = true;
    for n_sites in 1..=4 {
        let ctx = QContext::new(n_sites as f64 + 0.5).unwrap();
        for n in 0..=n_sites {
            let b = generate_basis_words(n_sites, n, &ctx, BasisOptions::default());
            dims_ok &= b.map(|b| b.words.len() == binomial(n_sites, n)).unwrap_or(false);
        }
    }
    outcome(
        mismatches == 0 && dims_ok,
        format!("{checked} words traced, {mismatches} mismatches; Gram dimensions binomial: {dims_ok}"),
    )
}

fn positivity() -> Outcome {
    let threshold = -1e-10;
    let mut lowest = f64::INFINITY;
    let mut violations = Vec::new();
    for n_sites in 1..=8 {
        for r in r_values(n_sites) {
            let ctx = QContext::new(r).unwrap();
            for n in 0..=n_sites {
                match generate_basis_words(n_sites, n, &ctx, BasisOptions::default()) {
                    Ok(b) => {
                        let m = min_eigenvalue(&b.gram);
                        lowest = lowest.min(m);
                        if m < threshold {
                            violations.push(format!("N={n_sites} n={n} r={r}: {m:e}"));
                        }
                    }
                    Err(e) => violations.push(format!("N={n_sites} n={n} r={r}: {e}")),
                }
            }
        }
    }
    outcome(
        violations.is_empty(),
        format!("N=1..8, all sectors: lowest Gram eigenvalue {lowest:.3e} (>= {threshold:e}) {violations:?}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("algebra relations", algebra),
        ("symmetry tables and metric identities", symmetries),
        ("metric structure and three constructions", eta_structure),
        ("worked examples and counts table", worked_examples),
        ("GNS product equals metric product", conjecture),
        ("spectral reality and isospectrality", spectrum),
        ("diagram oracle and Gram dimensions", oracle),
        ("Gram positivity", positivity),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "criterion {} {}: {} [{:.1}s] {}",
            k + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if !all {
        std::process::exit(1);
    }
}
