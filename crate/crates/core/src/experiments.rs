//! The two alternative measurements on particles 2 and 3 of the two-singlet
//! state, and the reports built from them.
//!
//! Experiment 1 measures the z spin of 2 and 3; experiment 2 measures them in
//! the Bell basis. Every report is computed analytically from the full list
//! of outcome branches. Sampling only ever draws from those branches and is
//! kept in [`MonteCarloReport`].

use rand_distr::{Distribution, StandardNormal};

use crate::analysis::{
    correlator, heralded_state, mixed_concurrence, mixed_from_records, pure_concurrence,
    reduced_density, schmidt, Bipartition, DensityMatrix,
};
use crate::measurement::{
    bell_basis, measure, sample, trial_rng, z_product_basis, MeasurementBasis, OutcomeRecord,
    SpinDirection,
};
use crate::protocol::{self, Program};
use crate::qmath::{c64, frobenius_distance, ComplexVector, C64};
use crate::states::{basis_ket_on, bell_state, initial_state, BellKind, Spin, StateVector};
use crate::{Error, Label, Result};

/// Seed of the golden Monte Carlo reports.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// Particles that are measured.
pub const INNER_PAIR: [Label; 2] = [2, 3];

/// Particles whose state is heralded.
pub const REMOTE_PAIR: [Label; 2] = [1, 4];

/// Purity slack accepted when extracting a heralded pure state.
const HERALD_TOL: f64 = 1e-9;

/// Phase-insensitive distance below which two states count as the same.
pub const MATCH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    /// z spin of particles 2 and 3.
    ProductZ,
    /// Bell operator on particles 2 and 3.
    BellOperator,
}

impl Experiment {
    pub fn id(self) -> u8 {
        match self {
            Experiment::ProductZ => 1,
            Experiment::BellOperator => 2,
        }
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            1 => Some(Experiment::ProductZ),
            2 => Some(Experiment::BellOperator),
            _ => None,
        }
    }

    pub fn basis(self) -> MeasurementBasis {
        match self {
            Experiment::ProductZ => z_product_basis(&INNER_PAIR),
            Experiment::BellOperator => bell_basis(INNER_PAIR[0], INNER_PAIR[1]),
        }
        .expect("fixed distinct targets")
    }

    pub fn records(self) -> Vec<OutcomeRecord> {
        measure(&initial_state(), &self.basis()).expect("normalized state, known targets")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlators {
    pub zz: f64,
    pub xx: f64,
    pub yy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    /// Outcome on the measured particles.
    pub outcome: String,
    pub probability: f64,
    /// Heralded pure state of the remote pair, canonical phase.
    pub heralded_state: StateVector,
    /// `|−−⟩`-style ket or Bell label when the state is one of those,
    /// otherwise `other`.
    pub heralded_name: String,
    pub schmidt: Vec<f64>,
    pub entropy_bits: f64,
    pub concurrence: f64,
    pub correlators: Correlators,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportSummary {
    /// Outcome-averaged reduced state of the remote pair.
    pub rho_avg: DensityMatrix,
    pub frobenius_to_premeasurement: f64,
    pub mixed_concurrence: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    /// 1 or 2 for the canned experiments, `None` for scripted ones.
    pub experiment: Option<u8>,
    pub remote: [Label; 2],
    pub rows: Vec<ReportRow>,
    pub summary: ReportSummary,
}

/// Name of a two-qubit state if it matches a computational ket or a Bell
/// state up to phase.
pub fn heralded_name(state: &StateVector) -> String {
    if state.num_qubits() != 2 {
        return "other".into();
    }
    let [p, q] = [state.labels()[0], state.labels()[1]];
    for s1 in [Spin::Plus, Spin::Minus] {
        for s2 in [Spin::Plus, Spin::Minus] {
            let ket = basis_ket_on(vec![p, q], &[s1, s2]).expect("distinct labels");
            if state.phase_distance(&ket).is_ok_and(|d| d < 1e-9) {
                return format!("|{}{}⟩", s1.symbol(), s2.symbol());
            }
        }
    }
    for kind in BellKind::ALL {
        let b = bell_state(kind, p, q).expect("distinct labels");
        if state.phase_distance(&b).is_ok_and(|d| d < 1e-9) {
            return kind.label().into();
        }
    }
    "other".into()
}

/// Builds a report from one measurement's outcome branches. `pre` is the
/// state before the measurement; `remote` must be exactly the particles left
/// unmeasured.
pub fn report_from_records(
    experiment: Option<u8>,
    pre: &StateVector,
    records: &[OutcomeRecord],
    remote: [Label; 2],
) -> Result<ExperimentReport> {
    let [p, q] = remote;
    let bip = Bipartition::new(&[p], &[q])?;
    let mut rows = Vec::with_capacity(records.len());
    for r in records {
        let Some(post) = &r.post_state else { continue };
        let h = heralded_state(post, &remote, HERALD_TOL)?;
        let sd = schmidt(&h, &bip)?;
        let corr = |d: SpinDirection| correlator(&h, (p, d), (q, d));
        rows.push(ReportRow {
            outcome: r.label.clone(),
            probability: r.probability,
            heralded_name: heralded_name(&h),
            entropy_bits: crate::analysis::entanglement_entropy(&sd),
            schmidt: sd.coefficients,
            concurrence: pure_concurrence(&h)?,
            correlators: Correlators {
                zz: corr(SpinDirection::Z)?,
                xx: corr(SpinDirection::X)?,
                yy: corr(SpinDirection::Y)?,
            },
            heralded_state: h,
        });
    }
    let rho_avg = mixed_from_records(records, &remote)?;
    let rho_pre = reduced_density(pre, &remote)?;
    Ok(ExperimentReport {
        experiment,
        remote,
        rows,
        summary: ReportSummary {
            frobenius_to_premeasurement: frobenius_distance(rho_avg.matrix(), rho_pre.matrix())?,
            mixed_concurrence: mixed_concurrence(&rho_avg)?,
            rho_avg,
        },
    })
}

pub fn run_experiment(experiment: Experiment) -> ExperimentReport {
    report_from_records(
        Some(experiment.id()),
        &initial_state(),
        &experiment.records(),
        REMOTE_PAIR,
    )
    .expect("canned experiment is well-formed")
}

pub fn run_experiment_1() -> ExperimentReport {
    run_experiment(Experiment::ProductZ)
}

pub fn run_experiment_2() -> ExperimentReport {
    run_experiment(Experiment::BellOperator)
}

/// Coefficient of `|bell⟩₂₃ ⊗ |bell⟩₁₄` in the two-singlet state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellTerm {
    pub inner: BellKind,
    pub remote: BellKind,
    pub coefficient: C64,
}

/// Expands the two-singlet state over the product Bell basis of pairs 2–3 and
/// 1–4, keeping terms with `|coefficient| > 1e-12`.
pub fn bell_decompose_initial() -> Vec<BellTerm> {
    let psi = initial_state();
    let mut terms = Vec::new();
    for inner in BellKind::ALL {
        let b23 = bell_state(inner, INNER_PAIR[0], INNER_PAIR[1]).expect("distinct");
        for remote in BellKind::ALL {
            let b14 = bell_state(remote, REMOTE_PAIR[0], REMOTE_PAIR[1]).expect("distinct");
            let basis = b23.tensor(&b14).expect("disjoint pairs");
            let coefficient = basis.inner(&psi).expect("same labels");
            if coefficient.norm() > 1e-12 {
                terms.push(BellTerm {
                    inner,
                    remote,
                    coefficient,
                });
            }
        }
    }
    terms
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessRow {
    pub outcome: String,
    pub expected: String,
    pub heralded: String,
    /// `min over unit c ‖heralded − c·expected‖`
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceCheck {
    pub ok: bool,
    pub witness: Vec<WitnessRow>,
}

/// Expected heralded state for an outcome of a canned experiment.
///
/// Experiment 1: `(+₂+₃)→|−−⟩₁₄, (+₂−₃)→|−+⟩₁₄, (−₂+₃)→|+−⟩₁₄, (−₂−₃)→|++⟩₁₄`.
/// Experiment 2: the Bell state of the outcome.
pub fn expected_heralded(experiment: Experiment, outcome: &str) -> Option<StateVector> {
    let [p, q] = REMOTE_PAIR;
    match experiment {
        Experiment::ProductZ => {
            let spins = match outcome {
                "++" => [Spin::Minus, Spin::Minus],
                "+−" => [Spin::Minus, Spin::Plus],
                "−+" => [Spin::Plus, Spin::Minus],
                "−−" => [Spin::Plus, Spin::Plus],
                _ => return None,
            };
            basis_ket_on(vec![p, q], &spins).ok()
        }
        Experiment::BellOperator => {
            BellKind::from_label(outcome).and_then(|k| bell_state(k, p, q).ok())
        }
    }
}

/// Verifies that the outcome → heralded-state map is the expected bijection.
pub fn correspondence_check(report: &ExperimentReport) -> CorrespondenceCheck {
    let experiment = report.experiment.and_then(Experiment::from_id);
    let mut ok = experiment.is_some() && report.rows.len() == 4;
    let mut witness = Vec::with_capacity(report.rows.len());
    let mut seen_outcomes: Vec<&str> = Vec::new();
    for row in &report.rows {
        if seen_outcomes.contains(&row.outcome.as_str()) {
            ok = false;
        }
        seen_outcomes.push(&row.outcome);
        let expected = experiment.and_then(|e| expected_heralded(e, &row.outcome));
        let (name, distance) = match &expected {
            Some(e) => (
                heralded_name(e),
                row.heralded_state.phase_distance(e).unwrap_or(f64::INFINITY),
            ),
            None => ("unknown".to_owned(), f64::INFINITY),
        };
        ok &= distance < MATCH_TOL;
        witness.push(WitnessRow {
            outcome: row.outcome.clone(),
            expected: name,
            heralded: row.heralded_name.clone(),
            distance,
        });
    }
    // injectivity on heralded states
    for (i, a) in report.rows.iter().enumerate() {
        for b in &report.rows[..i] {
            if a.heralded_state.phase_distance(&b.heralded_state).unwrap_or(0.0) < MATCH_TOL {
                ok = false;
            }
        }
    }
    CorrespondenceCheck { ok, witness }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoSignalingReport {
    /// Reduced state of 1 and 4 before any measurement.
    pub baseline: DensityMatrix,
    pub experiment1: DensityMatrix,
    pub experiment2: DensityMatrix,
    /// baseline–exp1, baseline–exp2, exp1–exp2
    pub distances: [f64; 3],
    /// baseline, exp1, exp2
    pub mixed_concurrences: [f64; 3],
}

pub fn no_signaling_report() -> NoSignalingReport {
    let baseline = reduced_density(&initial_state(), &REMOTE_PAIR).expect("known labels");
    let avg = |e: Experiment| mixed_from_records(&e.records(), &REMOTE_PAIR).expect("known labels");
    let experiment1 = avg(Experiment::ProductZ);
    let experiment2 = avg(Experiment::BellOperator);
    let d = |a: &DensityMatrix, b: &DensityMatrix| {
        frobenius_distance(a.matrix(), b.matrix()).expect("same shape")
    };
    let c = |r: &DensityMatrix| mixed_concurrence(r).expect("two qubits");
    NoSignalingReport {
        distances: [
            d(&baseline, &experiment1),
            d(&baseline, &experiment2),
            d(&experiment1, &experiment2),
        ],
        mixed_concurrences: [c(&baseline), c(&experiment1), c(&experiment2)],
        baseline,
        experiment1,
        experiment2,
    }
}

/// Haar-like random orthonormal basis on `targets`: complex Gaussian columns
/// orthonormalized by modified Gram–Schmidt.
pub fn random_basis<R: rand::Rng + ?Sized>(targets: &[Label], rng: &mut R) -> Result<MeasurementBasis> {
    let dim = 1usize << targets.len();
    let mut cols: Vec<ComplexVector> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v = ComplexVector::new(
            (0..dim)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(rng);
                    let im: f64 = StandardNormal.sample(rng);
                    c64(re, im)
                })
                .collect(),
        )?;
        for u in &cols {
            let overlap = u.inner(&v)?;
            v = v.sub(&u.scale(overlap))?;
        }
        let norm = v.norm();
        // redraw on (measure-zero) degeneracy
        if norm > 1e-8 {
            cols.push(v.scale(c64(1.0 / norm, 0.0)));
        }
    }
    let labels = (0..dim).map(|k| format!("b{k}")).collect();
    MeasurementBasis::new(targets.to_vec(), cols, labels)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub index: u64,
    /// Frobenius distance of the averaged 1–4 state from `1/4`.
    pub distance: f64,
}

/// Averaged reduced state of 1 and 4 after `count` random joint bases on 2
/// and 3. Basis `i` is drawn from `trial_rng(seed, i)`.
pub fn no_signaling_sweep(count: u64, seed: u64) -> Result<Vec<SweepRow>> {
    let psi = initial_state();
    let target = DensityMatrix::maximally_mixed(REMOTE_PAIR.to_vec())?;
    (0..count)
        .map(|index| {
            let basis = random_basis(&INNER_PAIR, &mut trial_rng(seed, index))?;
            let rho = mixed_from_records(&measure(&psi, &basis)?, &REMOTE_PAIR)?;
            Ok(SweepRow {
                index,
                distance: frobenius_distance(rho.matrix(), target.matrix())?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeTally {
    pub label: String,
    pub count: u64,
    pub frequency: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloReport {
    pub seed: u64,
    pub trials: u64,
    pub outcomes: Vec<OutcomeTally>,
    pub max_abs_deviation: f64,
    /// Largest `|f − p| / √(p(1−p)/N)`; zero-variance outcomes count as 0
    /// when matched exactly and infinity otherwise.
    pub max_sigma: f64,
}

impl MonteCarloReport {
    fn from_counts(seed: u64, trials: u64, labels: Vec<(String, f64)>, counts: Vec<u64>) -> Self {
        let n = trials as f64;
        let mut max_abs_deviation = 0.0f64;
        let mut max_sigma = 0.0f64;
        let outcomes = labels
            .into_iter()
            .zip(counts)
            .map(|((label, probability), count)| {
                let frequency = count as f64 / n;
                let dev = (frequency - probability).abs();
                let sigma = (probability * (1.0 - probability) / n).sqrt();
                let multiple = if sigma > 0.0 {
                    dev / sigma
                } else if dev == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                };
                max_abs_deviation = max_abs_deviation.max(dev);
                max_sigma = max_sigma.max(multiple);
                OutcomeTally {
                    label,
                    count,
                    frequency,
                    probability,
                }
            })
            .collect();
        Self {
            seed,
            trials,
            outcomes,
            max_abs_deviation,
            max_sigma,
        }
    }
}

/// What a Monte Carlo run samples.
#[derive(Debug, Clone, Copy)]
pub enum McSource<'a> {
    Experiment(Experiment),
    Program(&'a Program),
}

/// Runs `trials` single-shot realizations; trial `t` draws from
/// `trial_rng(seed, t)` so the report depends only on `(seed, trials)`.
pub fn monte_carlo(source: McSource<'_>, trials: u64, seed: u64) -> Result<MonteCarloReport> {
    if trials == 0 {
        return Err(Error::Empty("trials"));
    }
    match source {
        McSource::Experiment(e) => {
            let records = e.records();
            let mut counts = vec![0u64; records.len()];
            for t in 0..trials {
                counts[sample(&records, &mut trial_rng(seed, t))?] += 1;
            }
            let labels = records.into_iter().map(|r| (r.label, r.probability)).collect();
            Ok(MonteCarloReport::from_counts(seed, trials, labels, counts))
        }
        McSource::Program(program) => {
            let exhaustive = protocol::interpret(program, protocol::Mode::Exhaustive)
                .map_err(|e| e.error)?;
            if exhaustive.branches.is_empty() {
                return Err(Error::Empty("program"));
            }
            let labels: Vec<(String, f64)> = exhaustive
                .branches
                .iter()
                .map(|b| (b.outcome.clone(), b.probability))
                .collect();
            let mut counts = vec![0u64; labels.len()];
            for t in 0..trials {
                let out = protocol::interpret(program, protocol::Mode::Sampled { seed, trial: t })
                    .map_err(|e| e.error)?;
                let outcome = &out.branches[0].outcome;
                let k = labels
                    .iter()
                    .position(|(l, _)| l == outcome)
                    .ok_or_else(|| Error::InvalidDistribution(format!("unexpected outcome {outcome:?}")))?;
                counts[k] += 1;
            }
            Ok(MonteCarloReport::from_counts(seed, trials, labels, counts))
        }
    }
}
