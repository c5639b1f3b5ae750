//! Relation suites over the matrix representations and the metric operators,
//! collected into a serialisable report.

use serde::{Deserialize, Serialize};

use crate::blocks::BlockDiagonal;
use crate::error::Result;
use crate::metric::{eta_sqrt_and_h, spectrum_h, spectrum_hermitian, MetricSet};
use crate::operator::{SparseOperator, C64};
use crate::paths::{all_path_states, enumerate_paths};
use crate::qnum::QContext;
use crate::spin::{
    build_b, build_b_inv, build_generators, build_h, build_h_pauli, build_quantum_group, build_quantum_group_with,
    build_symmetries, build_sz, q_number_2sz, Coproduct,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub max_deviation: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n_sites: usize,
    pub r: f64,
    pub records: Vec<CheckRecord>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(n_sites: usize, r: f64) -> Self {
        Self {
            n_sites,
            r,
            records: Vec::new(),
            pass: true,
        }
    }

    pub fn push(&mut self, name: impl Into<String>, anchor: impl Into<String>, max_deviation: f64, threshold: f64) {
        // NaN never passes
        let pass = max_deviation <= threshold;
        self.pass &= pass;
        self.records.push(CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            max_deviation,
            threshold,
            pass,
        });
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.pass &= other.pass;
        self.records.extend(other.records);
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn max_deviation(&self) -> f64 {
        self.records.iter().map(|r| r.max_deviation).fold(0.0, f64::max)
    }
}

/// `max|lhs - rhs| / max(1, max|lhs|, max|rhs|)`.
pub fn scaled_deviation(lhs: &SparseOperator, rhs: &SparseOperator) -> f64 {
    let scale = lhs.max_abs().max(rhs.max_abs()).max(1.0);
    lhs.max_deviation(rhs) / scale
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b) })
}

fn scalar(z: C64) -> impl Fn(&SparseOperator) -> SparseOperator {
    move |op| op.scale(z)
}

/// Temperley-Lieb, quantum-group, braid and Hecke relations of the spin-chain images.
pub fn algebra_relations(n_sites: usize, ctx: &QContext, threshold: f64) -> VerificationReport {
    let mut report = VerificationReport::new(n_sites, ctx.r());
    let es = build_generators(n_sites, ctx);
    let id = SparseOperator::identity(n_sites);
    let zero = SparseOperator::zeros(n_sites);
    let loop_scale = scalar(C64::new(-ctx.loop_weight(), 0.0));

    report.push(
        "E_i^2 = -(q+q^-1) E_i",
        "Temperley-Lieb quadratic relation",
        worst(es.iter().map(|e| scaled_deviation(&(e * e), &loop_scale(e)))),
        threshold,
    );
    report.push(
        "E_i E_{i+-1} E_i = E_i",
        "Temperley-Lieb cubic relation",
        worst(es.windows(2).flat_map(|w| {
            [
                scaled_deviation(&(&(&w[0] * &w[1]) * &w[0]), &w[0]),
                scaled_deviation(&(&(&w[1] * &w[0]) * &w[1]), &w[1]),
            ]
        })),
        threshold,
    );
    let distant = |ops: &[SparseOperator]| {
        worst((0..ops.len()).flat_map(|i| {
            ((i + 2)..ops.len()).map(move |j| scaled_deviation(&(&ops[i] * &ops[j]), &(&ops[j] * &ops[i])))
        }))
    };
    report.push("[E_i, E_j] = 0, |i-j|>1", "Temperley-Lieb distant commutativity", distant(&es), threshold);

    let qg = build_quantum_group(n_sites, ctx);
    report.push(
        "q^Sz q^-Sz = q^-Sz q^Sz = 1",
        "quantum group Cartan inverse",
        worst([
            scaled_deviation(&(&qg.q_sz * &qg.q_minus_sz), &id),
            scaled_deviation(&(&qg.q_minus_sz * &qg.q_sz), &id),
        ]),
        threshold,
    );
    report.push(
        "q^Sz S^+- q^-Sz = q^+-1 S^+-",
        "quantum group Cartan action",
        worst([
            scaled_deviation(&(&(&qg.q_sz * &qg.s_plus) * &qg.q_minus_sz), &qg.s_plus.scale(ctx.q())),
            scaled_deviation(&(&(&qg.q_sz * &qg.s_minus) * &qg.q_minus_sz), &qg.s_minus.scale(ctx.q_inv())),
        ]),
        threshold,
    );
    report.push(
        "[S^+, S^-] = [2 S^z]_q",
        "quantum group commutator",
        scaled_deviation(&qg.s_plus.commutator(&qg.s_minus), &q_number_2sz(n_sites, ctx)),
        threshold,
    );
    report.push(
        "[E_i, S^+-] = [E_i, q^Sz] = 0",
        "quantum group invariance of the generators",
        worst(es.iter().flat_map(|e| {
            [
                scaled_deviation(&e.commutator(&qg.s_plus), &zero),
                scaled_deviation(&e.commutator(&qg.s_minus), &zero),
                scaled_deviation(&e.commutator(&qg.q_sz), &zero),
            ]
        })),
        threshold,
    );

    let bs: Vec<SparseOperator> = (1..n_sites).map(|i| build_b(i, n_sites, ctx).expect("in range")).collect();
    let bis: Vec<SparseOperator> = (1..n_sites).map(|i| build_b_inv(i, n_sites, ctx).expect("in range")).collect();
    report.push(
        "B_i B_i^-1 = B_i^-1 B_i = 1",
        "braid group inverse",
        worst(
            bs.iter()
                .zip(&bis)
                .flat_map(|(b, bi)| [scaled_deviation(&(b * bi), &id), scaled_deviation(&(bi * b), &id)]),
        ),
        threshold,
    );
    report.push(
        "B_i B_{i+1} B_i = B_{i+1} B_i B_{i+1}",
        "braid relation",
        worst(
            bs.windows(2)
                .map(|w| scaled_deviation(&(&(&w[0] * &w[1]) * &w[0]), &(&(&w[1] * &w[0]) * &w[1]))),
        ),
        threshold,
    );
    report.push("[B_i, B_j] = 0, |i-j|>1", "braid distant commutativity", distant(&bs), threshold);
    report.push(
        "(B_i + q)(B_i - q^-1) = 0",
        "Hecke quadratic relation",
        worst(bs.iter().map(|b| {
            let plus = b + &id.scale(ctx.q());
            let minus = b - &id.scale(ctx.q_inv());
            scaled_deviation(&(&plus * &minus), &zero)
        })),
        threshold,
    );
    report.push(
        "H = sum E_i equals the Pauli form",
        "Hamiltonian as a sum of generators",
        scaled_deviation(&build_h(n_sites, ctx), &build_h_pauli(n_sites, ctx)),
        threshold,
    );
    report
}

/// Parity, time and spin reversal acting on the generators.
pub fn symmetry_relations(n_sites: usize, ctx: &QContext, threshold: f64) -> VerificationReport {
    let mut report = VerificationReport::new(n_sites, ctx.r());
    let es = build_generators(n_sites, ctx);
    let qg = build_quantum_group(n_sites, ctx);
    let sym = build_symmetries(n_sites);
    let (p, r) = (&sym.parity, &sym.spin_reversal);
    let t = &sym.time_reversal;
    let conj = |a: &SparseOperator, x: &SparseOperator| &(a * x) * a;
    let n_gen = es.len();

    report.push(
        "P E_k P = E_{N-k}^*",
        "parity on Temperley-Lieb generators",
        worst((0..n_gen).map(|k| scaled_deviation(&conj(p, &es[k]), &es[n_gen - 1 - k].adjoint()))),
        threshold,
    );
    report.push(
        "P S^+- P = (S^-+)^*",
        "parity on quantum group generators",
        worst([
            scaled_deviation(&conj(p, &qg.s_plus), &qg.s_minus.adjoint()),
            scaled_deviation(&conj(p, &qg.s_minus), &qg.s_plus.adjoint()),
        ]),
        threshold,
    );
    report.push(
        "T E_k T = E_k^*",
        "time reversal on Temperley-Lieb generators",
        worst(es.iter().map(|e| scaled_deviation(&t.conjugate(e), &e.adjoint()))),
        threshold,
    );
    report.push(
        "T S^+- T = (S^-+)^*",
        "time reversal on quantum group generators",
        worst([
            scaled_deviation(&t.conjugate(&qg.s_plus), &qg.s_minus.adjoint()),
            scaled_deviation(&t.conjugate(&qg.s_minus), &qg.s_plus.adjoint()),
        ]),
        threshold,
    );
    report.push(
        "R E_k R = E_k^*",
        "spin reversal on Temperley-Lieb generators",
        worst(es.iter().map(|e| scaled_deviation(&conj(r, e), &e.adjoint()))),
        threshold,
    );
    report.push(
        "R S^+- R = (S^+-)^*",
        "spin reversal on quantum group generators",
        worst([
            scaled_deviation(&conj(r, &qg.s_plus), &qg.s_plus.adjoint()),
            scaled_deviation(&conj(r, &qg.s_minus), &qg.s_minus.adjoint()),
        ]),
        threshold,
    );
    let h = build_h(n_sites, ctx);
    let pt_h = &(p * &h.conj()) * p;
    let rt_h = &(r * &h.conj()) * r;
    report.push(
        "[PT, H] = [PR, H] = [RT, H] = 0",
        "combined discrete symmetries of the Hamiltonian",
        worst([
            scaled_deviation(&pt_h, &h),
            scaled_deviation(&(&(p * r) * &h), &(&h * &(p * r))),
            scaled_deviation(&rt_h, &h),
        ]),
        threshold,
    );
    report
}

/// Commutation relations of `eta`, `C` and `C'`, their mutual consistency and
/// the resolution of identity in the path basis.
pub fn metric_relations(n_sites: usize, ctx: &QContext, set: &MetricSet, threshold: f64) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(n_sites, ctx.r());
    let es = build_generators(n_sites, ctx);
    let h = build_h(n_sites, ctx);
    let qg = build_quantum_group(n_sites, ctx);
    let qg_op = build_quantum_group_with(n_sites, ctx, Coproduct::Opposite);
    let sz = build_sz(n_sites);
    let sym = build_symmetries(n_sites);
    let (p, r) = (&sym.parity, &sym.spin_reversal);
    let id = SparseOperator::identity(n_sites);
    let zero = SparseOperator::zeros(n_sites);
    let (eta, c, cp) = (&set.eta, &set.c, &set.c_prime);
    let eta_inv = set.eta_blocks.inverse()?.to_sparse();
    let n_gen = es.len();

    report.push("eta = eta^*", "metric is Hermitian", scaled_deviation(eta, &eta.adjoint()), threshold);
    report.push(
        "eta H = H^* eta",
        "quasi-Hermiticity of the Hamiltonian",
        scaled_deviation(&(eta * &h), &(&h.adjoint() * eta)),
        threshold,
    );
    report.push(
        "eta E_k = E_k^* eta",
        "quasi-Hermiticity of the generators",
        worst(es.iter().map(|e| scaled_deviation(&(eta * e), &(&e.adjoint() * eta)))),
        threshold,
    );
    report.push(
        "eta S^+- = S_op^+- eta",
        "metric intertwines the opposite coproduct",
        worst([
            scaled_deviation(&(eta * &qg.s_plus), &(&qg_op.s_plus * eta)),
            scaled_deviation(&(eta * &qg.s_minus), &(&qg_op.s_minus * eta)),
        ]),
        threshold,
    );
    report.push(
        "eta B_i = (B_i^-1)^* eta",
        "Hecke generators are unitary for the metric",
        worst((1..n_sites).map(|i| {
            let b = build_b(i, n_sites, ctx).expect("in range");
            let bi = build_b_inv(i, n_sites, ctx).expect("in range");
            scaled_deviation(&(eta * &b), &(&bi.adjoint() * eta))
        })),
        threshold,
    );

    report.push("[C, H] = 0", "C commutes with the Hamiltonian", scaled_deviation(&c.commutator(&h), &zero), threshold);
    report.push(
        "C E_k = E_{N-k} C",
        "C reflects the generators",
        worst((0..n_gen).map(|k| scaled_deviation(&(c * &es[k]), &(&es[n_gen - 1 - k] * c)))),
        threshold,
    );
    report.push(
        "[C, S^+-] = [C, S^z] = 0",
        "C commutes with the quantum group",
        worst([
            scaled_deviation(&c.commutator(&qg.s_plus), &zero),
            scaled_deviation(&c.commutator(&qg.s_minus), &zero),
            scaled_deviation(&c.commutator(&sz), &zero),
        ]),
        threshold,
    );
    report.push("[C', H] = 0", "C' commutes with the Hamiltonian", scaled_deviation(&cp.commutator(&h), &zero), threshold);
    report.push(
        "[C', E_k] = 0",
        "C' commutes with the generators",
        worst(es.iter().map(|e| scaled_deviation(&cp.commutator(e), &zero))),
        threshold,
    );
    report.push(
        "C' S^+- = S^-+ C', C' S^z = -S^z C'",
        "C' exchanges raising and lowering",
        worst([
            scaled_deviation(&(cp * &qg.s_plus), &(&qg.s_minus * cp)),
            scaled_deviation(&(cp * &qg.s_minus), &(&qg.s_plus * cp)),
            scaled_deviation(&(cp * &sz), &(&sz * cp).scale(C64::new(-1.0, 0.0))),
        ]),
        threshold,
    );
    report.push("C'^2 = 1", "C' is an involution", scaled_deviation(&(cp * cp), &id), threshold);
    report.push(
        "R eta R = eta^-1",
        "spin reversal inverts the metric",
        scaled_deviation(&(&(r * eta) * r), &eta_inv),
        threshold,
    );
    report.push(
        "P eta P = eta^-1",
        "parity inverts the metric",
        scaled_deviation(&(&(p * eta) * p), &eta_inv),
        threshold,
    );
    report.push("[C, C'] = 0", "C and C' commute", scaled_deviation(&c.commutator(cp), &zero), threshold);
    report.push(
        "C' from generators = C' from path action",
        "two constructions of C'",
        scaled_deviation(&set.c_prime_generators, cp),
        threshold,
    );
    report.push(
        "eta = R C'",
        "metric from the spin-reversal charge",
        scaled_deviation(&set.eta_from_c_prime(), eta),
        threshold,
    );
    report.push(
        "eta = P C",
        "metric from the half-twist braid",
        scaled_deviation(&set.eta_from_c(), eta),
        threshold,
    );

    let states = all_path_states(&enumerate_paths(n_sites, None, None), ctx)?;
    let mut resolution = BlockDiagonal::zeros(n_sites);
    for s in &states {
        *resolution.block_mut(s.n_down) += &s.coefficients * s.coefficients.transpose();
    }
    report.push(
        "sum |path,m><path,m|^T = 1",
        "resolution of identity in the path basis",
        resolution.to_sparse().max_deviation(&id),
        threshold,
    );
    Ok(report)
}

/// Reality of the spectrum of `H` and isospectrality with `h`.
pub fn spectral_checks(
    n_sites: usize,
    ctx: &QContext,
    eta: &BlockDiagonal,
    reality_threshold: f64,
    hermitian_threshold: f64,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(n_sites, ctx.r());
    let eigs = spectrum_h(n_sites, ctx)?;
    report.push(
        "max |Im eig H|",
        "real spectrum of the quasi-Hermitian Hamiltonian",
        worst(eigs.iter().map(|z| z.im.abs())),
        reality_threshold,
    );
    let form = eta_sqrt_and_h(eta, &build_h(n_sites, ctx), ctx)?;
    let h = form.h.to_sparse();
    report.push(
        "h = h^*",
        "similarity transform is Hermitian",
        scaled_deviation(&h, &h.adjoint()),
        hermitian_threshold,
    );
    let mut real: Vec<f64> = eigs.iter().map(|z| z.re).collect();
    real.sort_by(f64::total_cmp);
    let herm = spectrum_hermitian(&form.h);
    report.push(
        "spectrum of h equals spectrum of H",
        "isospectrality of h and H",
        worst(real.iter().zip(&herm).map(|(a, b)| (a - b).abs())),
        reality_threshold,
    );
    report.push(
        "(eta^1/2)^2 = eta",
        "positive square root of the metric",
        form.eta_sqrt.mul(&form.eta_sqrt).max_deviation(eta) / eta.max_abs().max(1.0),
        hermitian_threshold,
    );
    Ok(report)
}

/// Every suite at one `(N, r)`: algebra, symmetries, metric and spectrum.
pub fn full_relations(n_sites: usize, ctx: &QContext, threshold: f64) -> Result<VerificationReport> {
    ctx.ensure_generic(n_sites)?;
    let mut report = algebra_relations(n_sites, ctx, threshold);
    report.merge(symmetry_relations(n_sites, ctx, threshold));
    let set = MetricSet::build(n_sites, ctx)?;
    report.merge(metric_relations(n_sites, ctx, &set, threshold)?);
    report.merge(spectral_checks(n_sites, ctx, &set.eta_blocks, 1e-8, 1e-9)?);
    Ok(report)
}
