use super::ast::{Axis, BasisSpec, Metric, Program, Source, StatementKind};
use super::ParseError;
use crate::measurement::SpinDirection;
use crate::Label;

/// Semantic checks, accumulated rather than fail-fast:
///
/// - particles are prepared once and declared before use;
/// - spin measurements take one target, Bell measurements two distinct ones;
/// - axis triples have a norm in `[1e-6, 1e6]`;
/// - bipartitions and particle pairs in reports do not overlap.
pub fn validate(program: &Program) -> Result<(), Vec<ParseError>> {
    let mut errors = Vec::new();
    let mut declared: Vec<Label> = Vec::new();
    for stmt in &program.statements {
        let pos = stmt.pos;
        let mut err = |msg: String, token: String| errors.push(ParseError::at(pos, msg, token));
        match &stmt.kind {
            StatementKind::Prepare(source) => {
                if let Source::Ket {
                    spins,
                    labels: Some(labels),
                } = source
                {
                    if labels.len() != spins.len() {
                        err(
                            format!(
                                "ket pattern has {} spins but {} labels",
                                spins.len(),
                                labels.len()
                            ),
                            "ket".into(),
                        );
                    }
                }
                let labels = source.labels();
                for (i, l) in labels.iter().enumerate() {
                    if labels[..i].contains(l) || declared.contains(l) {
                        err(format!("particle {l} prepared twice"), l.to_string());
                    }
                }
                for l in labels {
                    if !declared.contains(&l) {
                        declared.push(l);
                    }
                }
            }
            StatementKind::Measure { basis, targets } => {
                check_declared(targets, &declared, &mut err);
                match basis {
                    BasisSpec::Spin(axis) => {
                        if targets.len() != 1 {
                            err(
                                format!("spin measurement takes 1 target, got {}", targets.len()),
                                "spin".into(),
                            );
                        }
                        check_axis(axis, &mut err);
                    }
                    BasisSpec::Bell => {
                        if targets.len() != 2 {
                            err(
                                format!("bell measurement takes 2 targets, got {}", targets.len()),
                                "bell".into(),
                            );
                        } else if targets[0] == targets[1] {
                            err(
                                format!("bell measurement targets must differ, got {} twice", targets[0]),
                                targets[0].to_string(),
                            );
                        }
                    }
                }
            }
            StatementKind::Report(metric) => {
                check_declared(&metric.labels(), &declared, &mut err);
                match metric {
                    Metric::Probs => {}
                    Metric::Rdm(l) => check_distinct(l, &mut err),
                    Metric::Schmidt(a, b) | Metric::Entropy(a, b) => {
                        let all: Vec<Label> = a.iter().chain(b).copied().collect();
                        check_distinct(&all, &mut err);
                    }
                    Metric::Concurrence(p, q) => check_distinct(&[*p, *q], &mut err),
                    Metric::Correlator(p, a, q, b) => {
                        check_distinct(&[*p, *q], &mut err);
                        check_axis(a, &mut err);
                        check_axis(b, &mut err);
                    }
                }
            }
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn check_declared(labels: &[Label], declared: &[Label], err: &mut impl FnMut(String, String)) {
    for l in labels {
        if !declared.contains(l) {
            err(format!("undeclared particle {l}"), l.to_string());
        }
    }
}

fn check_distinct(labels: &[Label], err: &mut impl FnMut(String, String)) {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            err(format!("particle {l} listed twice"), l.to_string());
        }
    }
}

fn check_axis(axis: &Axis, err: &mut impl FnMut(String, String)) {
    if let Axis::Vector(x, y, z) = axis {
        if SpinDirection::normalized(*x, *y, *z).is_err() {
            err(
                format!("axis {axis} cannot be normalized (norm must lie in [1e-6, 1e6])"),
                axis.to_string(),
            );
        }
    }
}

/// Unit direction of an axis that passed validation.
pub(crate) fn direction(axis: &Axis) -> crate::Result<SpinDirection> {
    match axis {
        Axis::X => Ok(SpinDirection::X),
        Axis::Y => Ok(SpinDirection::Y),
        Axis::Z => Ok(SpinDirection::Z),
        Axis::Vector(x, y, z) => SpinDirection::normalized(*x, *y, *z),
    }
}
