//! Browser bindings. Each exported function returns a JSON string so the page
//! needs nothing beyond `JSON.parse`.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use tlgns::diagram::render_word;
use tlgns::export::counts_csv;
use tlgns::functional::omega_with_counts;
use tlgns::gns::{counts_table, generate_basis_words, min_eigenvalue, sample_words, verify_conjecture, BasisOptions};
use tlgns::metric::{build_eta_blocks, spectrum_h};
use tlgns::spin::build_generators;
use tlgns::{QContext, StrandCounts, TLWord};

#[derive(Serialize)]
struct SectorValue {
    n: usize,
    value: f64,
    counts: StrandCounts,
}

#[derive(Serialize)]
struct WordReport {
    word: String,
    drawing: String,
    loops: usize,
    sectors: Vec<SectorValue>,
}

#[derive(Serialize)]
struct GramReport {
    words: Vec<String>,
    counts_csv: String,
    min_eigenvalue: f64,
    sampled: usize,
    max_deviation: f64,
}

#[derive(Serialize)]
struct SpectrumPoint {
    r: f64,
    re: Vec<f64>,
    max_abs_imag: f64,
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("records serialise")
}

/// Draws `word` and evaluates omega on it in every sector.
pub fn word_report(n_sites: usize, r: f64, word: &str) -> Result<String, String> {
    let ctx = QContext::new(r).map_err(|e| e.to_string())?;
    let w = TLWord::parse(n_sites, word).map_err(|e| e.to_string())?;
    let sectors = (0..=n_sites)
        .map(|n| {
            omega_with_counts(&w, n, &ctx)
                .map(|(value, counts)| SectorValue { n, value, counts })
                .map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(to_json(&WordReport {
        word: w.to_string(),
        drawing: render_word(&w),
        loops: w.diagram().loops(),
        sectors,
    }))
}

/// Generates a word basis for sector `n`, its counts table, and the largest
/// gap between the GNS and metric products over basis plus `samples` random words.
pub fn gram_report(n_sites: usize, n: usize, r: f64, samples: usize, seed: u64) -> Result<String, String> {
    let ctx = QContext::new(r).map_err(|e| e.to_string())?;
    let basis = generate_basis_words(n_sites, n, &ctx, BasisOptions::default()).map_err(|e| e.to_string())?;
    let table = counts_table(&basis.words, n).map_err(|e| e.to_string())?;
    let eta = build_eta_blocks(n_sites, &ctx).map_err(|e| e.to_string())?;
    let gens = build_generators(n_sites, &ctx);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = sample_words(n_sites, samples, &mut rng);
    let report = verify_conjecture(&basis, &sample, &eta, &gens, &ctx).map_err(|e| e.to_string())?;
    Ok(to_json(&GramReport {
        words: basis.words.iter().map(|w| w.to_string()).collect(),
        counts_csv: counts_csv(&table),
        min_eigenvalue: min_eigenvalue(&basis.gram),
        sampled: report.sampled,
        max_deviation: report.max_abs_deviation,
    }))
}

/// Real parts of the spectrum of H at `steps` evenly spaced values of r.
pub fn spectrum_sweep(n_sites: usize, r_min: f64, r_max: f64, steps: usize) -> Result<String, String> {
    if n_sites == 0 || n_sites > 10 {
        return Err(format!("N must be between 1 and 10, got {n_sites}"));
    }
    if steps == 0 || !(r_min <= r_max) {
        return Err("need steps >= 1 and r_min <= r_max".into());
    }
    let points = (0..steps)
        .map(|k| {
            let r = if steps == 1 {
                r_min
            } else {
                r_min + (r_max - r_min) * k as f64 / (steps - 1) as f64
            };
            let ctx = QContext::new(r).map_err(|e| e.to_string())?;
            let eigs = spectrum_h(n_sites, &ctx).map_err(|e| e.to_string())?;
            Ok(SpectrumPoint {
                r,
                re: eigs.iter().map(|z| z.re).collect(),
                max_abs_imag: eigs.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
            })
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(to_json(&points))
}

#[wasm_bindgen(js_name = wordReport)]
pub fn word_report_js(n_sites: usize, r: f64, word: &str) -> Result<String, JsValue> {
    word_report(n_sites, r, word).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = gramReport)]
pub fn gram_report_js(n_sites: usize, n: usize, r: f64, samples: usize, seed: u32) -> Result<String, JsValue> {
    gram_report(n_sites, n, r, samples, seed as u64).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = spectrumSweep)]
pub fn spectrum_sweep_js(n_sites: usize, r_min: f64, r_max: f64, steps: usize) -> Result<String, JsValue> {
    spectrum_sweep(n_sites, r_min, r_max, steps).map_err(|e| JsValue::from_str(&e))
}
