use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use tlgns::diagram::render_word;
use tlgns::export::{
    counts_csv, operators_csv, parse_word_list, DiagramRecord, OmegaRecord, OperatorRecord, PathRecord,
    SectorBasisRecord,
};
use tlgns::functional::omega_with_counts;
use tlgns::gns::{
    basis_from_words, counts_table, generate_basis_words, sample_words, verify_conjecture, BasisOptions,
    ConjectureReport, SectorBasis,
};
use tlgns::metric::{
    build_eta_restricted, eta_sqrt_and_h, spectrum_h, spectrum_hermitian, MetricSet,
};
use tlgns::paths::enumerate_paths;
use tlgns::relations::{full_relations, VerificationReport};
use tlgns::spin::{build_generators, build_h};
use tlgns::{QContext, TLWord};

use crate::output::{csv_text, write_json, write_text, CliError, CliResult, Status};
use crate::{Common, Format};

fn contexts(common: &Common) -> CliResult<Vec<QContext>> {
    if common.n_sites == 0 {
        return Err(CliError::Usage("--N must be at least 1".into()));
    }
    common.r.iter().map(|&r| QContext::new(r).map_err(CliError::from)).collect()
}

fn sectors(n_sites: usize, sector: Option<usize>) -> CliResult<Vec<usize>> {
    match sector {
        Some(n) if n > n_sites => Err(tlgns::Error::SectorIndex { n, n_sites }.into()),
        Some(n) => Ok(vec![n]),
        None => Ok((0..=n_sites).collect()),
    }
}

fn check_tol(tol: f64) -> CliResult<()> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--tol must be positive, got {tol}")))
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:e}")
}

pub fn relations(common: &Common, tol: f64) -> CliResult<Status> {
    check_tol(tol)?;
    let mut reports = Vec::new();
    for ctx in contexts(common)? {
        reports.push(full_relations(common.n_sites, &ctx, tol)?);
    }
    let pass = reports.iter().all(|r| r.pass);
    for r in &reports {
        let failed: Vec<&str> = r.failures().map(|f| f.name.as_str()).collect();
        eprintln!(
            "N={} r={}: {} checks, max deviation {:.3e}, {}",
            r.n_sites,
            r.r,
            r.records.len(),
            r.max_deviation(),
            if failed.is_empty() { "all pass".to_string() } else { format!("failed: {}", failed.join("; ")) }
        );
    }
    match common.format {
        Format::Json => write_json(common.out.as_deref(), &reports)?,
        Format::Csv => write_text(common.out.as_deref(), &relations_csv(&reports))?,
    }
    Ok(if pass { Status::Pass } else { Status::CheckFailed })
}

fn relations_csv(reports: &[VerificationReport]) -> String {
    let rows = reports.iter().flat_map(|rep| {
        rep.records.iter().map(move |c| {
            vec![
                rep.n_sites.to_string(),
                rep.r.to_string(),
                c.name.clone(),
                c.anchor.clone(),
                fmt_f64(c.max_deviation),
                fmt_f64(c.threshold),
                c.pass.to_string(),
            ]
        })
    });
    csv_text(&["N", "r", "name", "anchor", "max_deviation", "threshold", "pass"], rows)
}

#[derive(Serialize)]
struct OmegaOutput {
    #[serde(flatten)]
    record: OmegaRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    drawing: Option<String>,
}

pub fn omega(common: &Common, sector: usize, word: &str, render: bool) -> CliResult<Status> {
    let ctxs = contexts(common)?;
    let w = TLWord::parse(common.n_sites, word)?;
    let mut outputs = Vec::new();
    for ctx in &ctxs {
        let (value, counts) = omega_with_counts(&w, sector, ctx)?;
        outputs.push(OmegaOutput {
            record: OmegaRecord {
                n_sites: common.n_sites,
                n: sector,
                r: ctx.r(),
                word: w.letters().to_vec(),
                value,
                counts,
                diagram: render.then(|| DiagramRecord::from(&w.diagram())),
            },
            drawing: render.then(|| render_word(&w)),
        });
    }
    match common.format {
        Format::Json => write_json(common.out.as_deref(), &outputs)?,
        Format::Csv => {
            let rows = outputs.iter().map(|o| {
                let c = o.record.counts;
                vec![
                    o.record.r.to_string(),
                    o.record.n.to_string(),
                    w.to_string(),
                    fmt_f64(o.record.value),
                    c.x0.to_string(),
                    c.x.to_string(),
                    c.y.to_string(),
                ]
            });
            write_text(common.out.as_deref(), &csv_text(&["r", "n", "word", "value", "x0", "x", "y"], rows))?
        }
    }
    Ok(Status::Pass)
}

fn sector_basis(
    n_sites: usize,
    n: usize,
    ctx: &QContext,
    words: Option<&str>,
    max_word_len: Option<usize>,
) -> CliResult<SectorBasis> {
    match words {
        Some(text) => Ok(basis_from_words(parse_word_list(n_sites, text)?, n, ctx)?),
        None => Ok(generate_basis_words(
            n_sites,
            n,
            ctx,
            BasisOptions {
                max_word_len,
                ..Default::default()
            },
        )?),
    }
}

pub fn gram(common: &Common, sector: Option<usize>, words: Option<&str>, max_word_len: Option<usize>) -> CliResult<Status> {
    let ctxs = contexts(common)?;
    let ns = sectors(common.n_sites, sector)?;
    if words.is_some() && ns.len() != 1 {
        return Err(CliError::Usage("--words needs a single sector --n".into()));
    }
    let mut records = Vec::new();
    let mut tables = Vec::new();
    for ctx in &ctxs {
        for &n in &ns {
            let basis = sector_basis(common.n_sites, n, ctx, words, max_word_len)?;
            let counts = counts_table(&basis.words, n)?;
            tables.push((ctx.r(), n, counts_csv(&counts)));
            records.push(SectorBasisRecord::new(&basis, ctx.r(), &counts));
        }
    }
    match common.format {
        Format::Json => write_json(common.out.as_deref(), &records)?,
        Format::Csv => {
            let text = if tables.len() == 1 {
                tables.remove(0).2
            } else {
                tables
                    .iter()
                    .map(|(r, n, t)| format!("# N={} n={n} r={r}\n{t}", common.n_sites))
                    .collect::<Vec<_>>()
                    .join("\n")
            };
            write_text(common.out.as_deref(), &text)?
        }
    }
    Ok(Status::Pass)
}

#[derive(Serialize)]
struct EtaOutput {
    n_sites: usize,
    r: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    warning: Option<String>,
    paths: Vec<PathRecord>,
    operators: Vec<OperatorRecord>,
}

pub fn eta(common: &Common, restricted: bool) -> CliResult<Status> {
    let n_sites = common.n_sites;
    let mut outputs = Vec::new();
    for ctx in contexts(common)? {
        let r = ctx.r();
        if restricted {
            let (eta, warning) = build_eta_restricted(n_sites, &ctx)?;
            eprintln!("warning: {warning}");
            outputs.push(EtaOutput {
                n_sites,
                r,
                warning: Some(warning.to_string()),
                paths: enumerate_paths(n_sites, None, Some(r)).iter().map(PathRecord::from).collect(),
                operators: vec![OperatorRecord::new("eta", r, &eta)],
            });
            continue;
        }
        let set = MetricSet::build(n_sites, &ctx)?;
        let form = eta_sqrt_and_h(&set.eta_blocks, &build_h(n_sites, &ctx), &ctx)?;
        outputs.push(EtaOutput {
            n_sites,
            r,
            warning: None,
            paths: enumerate_paths(n_sites, None, None).iter().map(PathRecord::from).collect(),
            operators: vec![
                OperatorRecord::new("eta", r, &set.eta),
                OperatorRecord::new("c", r, &set.c),
                OperatorRecord::new("c_prime", r, &set.c_prime),
                OperatorRecord::new("eta_sqrt", r, &form.eta_sqrt.to_sparse()),
                OperatorRecord::new("h", r, &form.h.to_sparse()),
            ],
        });
    }
    match common.format {
        Format::Json => write_json(common.out.as_deref(), &outputs)?,
        Format::Csv => {
            let ops: Vec<OperatorRecord> = outputs.into_iter().flat_map(|o| o.operators).collect();
            write_text(common.out.as_deref(), &operators_csv(&ops))?
        }
    }
    Ok(Status::Pass)
}

#[derive(Serialize)]
struct SpectrumOutput {
    n_sites: usize,
    r: f64,
    max_abs_imag: f64,
    /// Eigenvalues of `H` as `[re, im]`, sorted by real part.
    hamiltonian: Vec<[f64; 2]>,
    /// Eigenvalues of `h`, ascending; absent outside `r > N`.
    #[serde(skip_serializing_if = "Option::is_none")]
    hermitian: Option<Vec<f64>>,
}

pub fn spectrum(common: &Common) -> CliResult<Status> {
    let n_sites = common.n_sites;
    let mut outputs = Vec::new();
    for ctx in contexts(common)? {
        let eigs: Vec<Complex64> = spectrum_h(n_sites, &ctx)?;
        let hermitian = if ctx.r() > n_sites as f64 {
            let set = tlgns::metric::build_eta_blocks(n_sites, &ctx)?;
            let form = eta_sqrt_and_h(&set, &build_h(n_sites, &ctx), &ctx)?;
            Some(spectrum_hermitian(&form.h))
        } else {
            None
        };
        outputs.push(SpectrumOutput {
            n_sites,
            r: ctx.r(),
            max_abs_imag: eigs.iter().map(|z| z.im.abs()).fold(0.0, f64::max),
            hamiltonian: eigs.iter().map(|z| [z.re, z.im]).collect(),
            hermitian,
        });
    }
    match common.format {
        Format::Json => write_json(common.out.as_deref(), &outputs)?,
        Format::Csv => {
            let rows = outputs.iter().flat_map(|o| {
                o.hamiltonian.iter().enumerate().map(move |(k, z)| {
                    vec![o.r.to_string(), k.to_string(), fmt_f64(z[0]), fmt_f64(z[1])]
                })
            });
            write_text(common.out.as_deref(), &csv_text(&["r", "k", "re", "im"], rows))?
        }
    }
    Ok(Status::Pass)
}

#[derive(Serialize)]
struct ConjectureOutput {
    n_sites: usize,
    seed: u64,
    tol: f64,
    max_abs_deviation: f64,
    pass: bool,
    sectors: Vec<ConjectureReport>,
}

pub fn conjecture(
    common: &Common,
    sector: Option<usize>,
    tol: f64,
    seed: u64,
    samples: usize,
    max_word_len: Option<usize>,
) -> CliResult<Status> {
    check_tol(tol)?;
    let n_sites = common.n_sites;
    let ns = sectors(n_sites, sector)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();
    for ctx in contexts(common)? {
        ctx.ensure_generic(n_sites)?;
        let eta = tlgns::metric::build_eta_blocks(n_sites, &ctx)?;
        let gens = build_generators(n_sites, &ctx);
        for &n in &ns {
            let basis = sector_basis(n_sites, n, &ctx, None, max_word_len)?;
            let sample = sample_words(n_sites, samples, &mut rng);
            let report = verify_conjecture(&basis, &sample, &eta, &gens, &ctx)?;
            eprintln!(
                "N={n_sites} n={n} r={}: {} basis + {} sampled words, gram deviation {:.3e}, word deviation {:.3e}",
                ctx.r(),
                report.basis_size,
                report.sampled,
                report.gram_deviation,
                report.word_deviation
            );
            reports.push(report);
        }
    }
    let max_abs_deviation = reports.iter().map(|r| r.max_abs_deviation).fold(0.0, f64::max);
    let pass = reports.iter().all(|r| r.max_abs_deviation <= tol);
    let output = ConjectureOutput {
        n_sites,
        seed,
        tol,
        max_abs_deviation,
        pass,
        sectors: reports,
    };
    match common.format {
        Format::Json => write_json(common.out.as_deref(), &output)?,
        Format::Csv => {
            let rows = output.sectors.iter().flat_map(|s| {
                s.words.iter().map(move |w| {
                    vec![
                        s.r.to_string(),
                        s.n.to_string(),
                        w.word.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" "),
                        fmt_f64(w.omega),
                        fmt_f64(w.expectation_re),
                        fmt_f64(w.expectation_im),
                        fmt_f64(w.deviation),
                    ]
                })
            });
            let header = ["r", "n", "word", "omega", "expectation_re", "expectation_im", "deviation"];
            write_text(common.out.as_deref(), &csv_text(&header, rows))?
        }
    }
    Ok(if pass { Status::Pass } else { Status::CheckFailed })
}
