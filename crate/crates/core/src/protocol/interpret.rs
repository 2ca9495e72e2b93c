use std::fmt;

use super::ast::{BasisSpec, Metric, Program, Source, StatementKind};
use super::validate::direction;
use super::Position;
use crate::analysis::{
    correlator, entropy_of_coefficients, heralded_state, mixed_concurrence, pure_concurrence,
    reduced_density, schmidt, Bipartition, DensityMatrix,
};
use crate::experiments::{report_from_records, ExperimentReport};
use crate::measurement::{bell_basis, measure, sample, spin_basis, trial_rng, MeasurementBasis, OutcomeRecord};
use crate::states::{basis_ket_on, bell_state, singlet, StateVector};
use crate::{Error, Label};

const PURE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Every outcome branch with its Born probability.
    Exhaustive,
    /// One branch, drawn from `trial_rng(seed, trial)`.
    Sampled { seed: u64, trial: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricValue {
    Probability(f64),
    Density(DensityMatrix),
    Schmidt(Vec<f64>),
    Entropy(f64),
    Concurrence(f64),
    Correlator(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricRecord {
    /// Index of the `report` statement.
    pub statement: usize,
    pub pos: Position,
    pub metric: Metric,
    pub value: MetricValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    /// Outcome labels of each measurement group, joined by `,`.
    pub outcome: String,
    pub probability: f64,
    pub state: StateVector,
    pub metrics: Vec<MetricRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolOutput {
    pub branches: Vec<Branch>,
    /// Full heralding report when, in exhaustive mode, exactly two prepared
    /// particles were never measured.
    pub heralded: Option<ExperimentReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuntimeError {
    pub pos: Position,
    pub error: Error,
}

impl fmt::Display for RuntimeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.error)
    }
}

impl std::error::Error for RuntimeError {}

fn prepare(source: &Source) -> crate::Result<StateVector> {
    match source {
        Source::Singlet(a, b) => singlet(*a, *b),
        Source::Bell(kind, a, b) => bell_state(*kind, *a, *b),
        Source::Ket { spins, .. } => basis_ket_on(source.labels(), spins),
    }
}

/// Reduced pure state on `labels`, or the state itself when it already
/// covers exactly those labels.
fn pure_part(state: &StateVector, labels: &[Label]) -> crate::Result<StateVector> {
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    if sorted == state.labels() {
        Ok(state.clone())
    } else {
        heralded_state(state, labels, PURE_TOL)
    }
}

fn evaluate(metric: &Metric, branch: &Branch) -> crate::Result<MetricValue> {
    let state = &branch.state;
    Ok(match metric {
        Metric::Probs => MetricValue::Probability(branch.probability),
        Metric::Rdm(labels) => MetricValue::Density(reduced_density(state, labels)?),
        Metric::Schmidt(a, b) | Metric::Entropy(a, b) => {
            let all: Vec<Label> = a.iter().chain(b).copied().collect();
            let sub = pure_part(state, &all)?;
            let coefficients = schmidt(&sub, &Bipartition::new(a, b)?)?.coefficients;
            if matches!(metric, Metric::Schmidt(..)) {
                MetricValue::Schmidt(coefficients)
            } else {
                MetricValue::Entropy(entropy_of_coefficients(&coefficients))
            }
        }
        Metric::Concurrence(p, q) => {
            let rho = reduced_density(state, &[*p, *q])?;
            let c = if rho.purity() >= 1.0 - PURE_TOL {
                pure_concurrence(&pure_part(state, &[*p, *q])?)?
            } else {
                mixed_concurrence(&rho)?
            };
            MetricValue::Concurrence(c)
        }
        Metric::Correlator(p, a, q, b) => {
            MetricValue::Correlator(correlator(state, (*p, direction(a)?), (*q, direction(b)?))?)
        }
    })
}

/// Runs a validated program.
///
/// Consecutive single-target spin measurements on distinct particles are
/// measured together as one product basis, so a script measuring `z` on 2
/// and then on 3 produces the same branches as the joint `z⊗z` basis.
pub fn interpret(program: &Program, mode: Mode) -> Result<ProtocolOutput, RuntimeError> {
    let stmts = &program.statements;
    let mut branches: Vec<Branch> = Vec::new();
    let mut premeasurement: Option<StateVector> = None;
    let mut measured: Vec<Label> = Vec::new();
    let mut rng = match mode {
        Mode::Sampled { seed, trial } => Some(trial_rng(seed, trial)),
        Mode::Exhaustive => None,
    };

    let mut i = 0;
    while i < stmts.len() {
        let pos = stmts[i].pos;
        let fail = |error: Error| RuntimeError { pos, error };
        match &stmts[i].kind {
            StatementKind::Prepare(source) => {
                let s = prepare(source).map_err(fail)?;
                premeasurement = Some(match premeasurement {
                    None => s.clone(),
                    Some(p) => p.tensor(&s).map_err(fail)?,
                });
                if branches.is_empty() {
                    branches.push(Branch {
                        outcome: String::new(),
                        probability: 1.0,
                        state: s,
                        metrics: Vec::new(),
                    });
                } else {
                    for b in &mut branches {
                        b.state = b.state.tensor(&s).map_err(fail)?;
                    }
                }
                i += 1;
            }
            StatementKind::Measure { basis, targets } => {
                let (mb, next) = measurement_group(program, i).map_err(fail)?;
                if branches.is_empty() {
                    return Err(fail(Error::UnknownLabel(targets[0])));
                }
                if matches!(basis, BasisSpec::Bell) && targets.len() != 2 {
                    return Err(fail(Error::InvalidBasis("bell needs two targets".into())));
                }
                let mut children = Vec::new();
                for b in branches {
                    let records = measure(&b.state, &mb).map_err(fail)?;
                    let chosen: Vec<OutcomeRecord> = match rng.as_mut() {
                        Some(r) => {
                            let k = sample(&records, r).map_err(fail)?;
                            vec![records[k].clone()]
                        }
                        None => records,
                    };
                    for rec in chosen {
                        let Some(post) = rec.post_state else { continue };
                        let outcome = if b.outcome.is_empty() {
                            rec.label
                        } else {
                            format!("{},{}", b.outcome, rec.label)
                        };
                        children.push(Branch {
                            outcome,
                            probability: b.probability * rec.probability,
                            state: post,
                            metrics: b.metrics.clone(),
                        });
                    }
                }
                branches = children;
                for t in mb.targets() {
                    if !measured.contains(t) {
                        measured.push(*t);
                    }
                }
                i = next;
            }
            StatementKind::Report(metric) => {
                for b in &mut branches {
                    let value = evaluate(metric, b).map_err(fail)?;
                    b.metrics.push(MetricRecord {
                        statement: i,
                        pos,
                        metric: metric.clone(),
                        value,
                    });
                }
                i += 1;
            }
        }
    }

    let heralded = match (&premeasurement, mode) {
        (Some(pre), Mode::Exhaustive) if !measured.is_empty() => {
            let remote: Vec<Label> = pre
                .labels()
                .iter()
                .copied()
                .filter(|l| !measured.contains(l))
                .collect();
            if let [p, q] = remote[..] {
                let records: Vec<OutcomeRecord> = branches
                    .iter()
                    .map(|b| OutcomeRecord {
                        label: b.outcome.clone(),
                        probability: b.probability,
                        post_state: Some(b.state.clone()),
                    })
                    .collect();
                report_from_records(None, pre, &records, [p, q]).ok()
            } else {
                None
            }
        }
        _ => None,
    };

    Ok(ProtocolOutput { branches, heralded })
}

/// Basis for the measurement starting at statement `start`, and the index of
/// the first statement after the group.
fn measurement_group(program: &Program, start: usize) -> crate::Result<(MeasurementBasis, usize)> {
    let stmts = &program.statements;
    if let StatementKind::Measure {
        basis: BasisSpec::Bell,
        targets,
    } = &stmts[start].kind
    {
        let [a, b] = targets[..] else {
            return Err(Error::InvalidBasis("bell needs two targets".into()));
        };
        return Ok((bell_basis(a, b)?, start + 1));
    }
    let mut factors = Vec::new();
    let mut used: Vec<Label> = Vec::new();
    let mut j = start;
    while let Some(StatementKind::Measure {
        basis: BasisSpec::Spin(axis),
        targets,
    }) = stmts.get(j).map(|s| &s.kind)
    {
        let [t] = targets[..] else {
            if j == start {
                return Err(Error::InvalidBasis("spin needs one target".into()));
            }
            break;
        };
        if used.contains(&t) {
            break;
        }
        used.push(t);
        factors.push(spin_basis(direction(axis)?, t));
        j += 1;
    }
    Ok((MeasurementBasis::product(&factors)?, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::compile;

    fn run(src: &str) -> ProtocolOutput {
        interpret(&compile(src).unwrap(), Mode::Exhaustive).unwrap()
    }

    #[test]
    fn empty_program() {
        let out = run("");
        assert!(out.branches.is_empty());
        assert!(out.heralded.is_none());
    }

    #[test]
    fn prepare_only_is_one_branch() {
        let out = run("prepare singlet(1,2); report concurrence(1,2); report probs;");
        assert_eq!(out.branches.len(), 1);
        let b = &out.branches[0];
        assert_eq!(b.probability, 1.0);
        assert_eq!(b.metrics[0].value, MetricValue::Concurrence(1.0));
        assert_eq!(b.metrics[1].value, MetricValue::Probability(1.0));
    }

    #[test]
    fn spin_group_is_joint() {
        let out = run("prepare singlet(1,2); prepare singlet(3,4); measure spin(z) on 2; measure spin(z) on 3;");
        let labels: Vec<_> = out.branches.iter().map(|b| b.outcome.as_str()).collect();
        assert_eq!(labels, ["++", "+−", "−+", "−−"]);
        assert!(out.heralded.is_some());
    }

    #[test]
    fn repeated_target_splits_group() {
        let out = run("prepare ket +; measure spin(x) on 1; measure spin(x) on 1;");
        // the second x measurement repeats the first outcome
        assert_eq!(out.branches.len(), 2);
        for b in &out.branches {
            let parts: Vec<_> = b.outcome.split(',').collect();
            assert_eq!(parts[0], parts[1]);
            assert!((b.probability - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_on_subsystem() {
        let out = run("prepare singlet(1,2); prepare singlet(3,4); measure bell on (2,3); report entropy(1|4); report schmidt(1|4);");
        for b in &out.branches {
            let MetricValue::Entropy(h) = b.metrics[0].value else { panic!() };
            assert!((h - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_on_mixed_subsystem_is_runtime_error() {
        let p = compile("prepare singlet(1,2); prepare singlet(3,4);\nreport entropy(1|4);").unwrap();
        let e = interpret(&p, Mode::Exhaustive).unwrap_err();
        assert_eq!(e.pos.line, 2);
        assert!(matches!(e.error, Error::NotPure(_)));
    }

    #[test]
    fn mixed_concurrence_in_report() {
        let out = run("prepare singlet(1,2); prepare singlet(3,4); report concurrence(1,4);");
        assert_eq!(out.branches[0].metrics[0].value, MetricValue::Concurrence(0.0));
    }

    #[test]
    fn sampled_follows_one_branch() {
        let p = compile("prepare singlet(1,2); prepare singlet(3,4); measure bell on (2,3); report probs;").unwrap();
        let out = interpret(&p, Mode::Sampled { seed: 1, trial: 0 }).unwrap();
        assert_eq!(out.branches.len(), 1);
        assert!(out.heralded.is_none());
        let again = interpret(&p, Mode::Sampled { seed: 1, trial: 0 }).unwrap();
        assert_eq!(out, again);
    }
}
