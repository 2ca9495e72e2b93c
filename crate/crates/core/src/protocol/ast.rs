use std::fmt;

use super::Position;
use crate::states::{BellKind, Spin};
use crate::Label;

#[derive(Debug, Clone, PartialEq)]
pub enum Axis {
    X,
    Y,
    Z,
    /// Arbitrary direction, normalized at validation.
    Vector(f64, f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Singlet(Label, Label),
    Bell(BellKind, Label, Label),
    /// Computational ket; without explicit labels it occupies particles
    /// `1..=n`.
    Ket {
        spins: Vec<Spin>,
        labels: Option<Vec<Label>>,
    },
}

impl Source {
    pub fn labels(&self) -> Vec<Label> {
        match self {
            Source::Singlet(a, b) | Source::Bell(_, a, b) => vec![*a, *b],
            Source::Ket { spins, labels } => labels
                .clone()
                .unwrap_or_else(|| (1..=spins.len() as Label).collect()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BasisSpec {
    Spin(Axis),
    Bell,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    Probs,
    Rdm(Vec<Label>),
    Schmidt(Vec<Label>, Vec<Label>),
    Entropy(Vec<Label>, Vec<Label>),
    Concurrence(Label, Label),
    Correlator(Label, Axis, Label, Axis),
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Probs => "probs",
            Metric::Rdm(_) => "rdm",
            Metric::Schmidt(..) => "schmidt",
            Metric::Entropy(..) => "entropy",
            Metric::Concurrence(..) => "concurrence",
            Metric::Correlator(..) => "correlator",
        }
    }

    pub fn labels(&self) -> Vec<Label> {
        match self {
            Metric::Probs => vec![],
            Metric::Rdm(l) => l.clone(),
            Metric::Schmidt(a, b) | Metric::Entropy(a, b) => a.iter().chain(b).copied().collect(),
            Metric::Concurrence(p, q) | Metric::Correlator(p, _, q, _) => vec![*p, *q],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StatementKind {
    Prepare(Source),
    Measure {
        basis: BasisSpec,
        targets: Vec<Label>,
    },
    Report(Metric),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub kind: StatementKind,
    pub pos: Position,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Program {
    pub statements: Vec<Statement>,
}

impl Program {
    /// Statement kinds without source positions, for structural comparison.
    pub fn kinds(&self) -> Vec<&StatementKind> {
        self.statements.iter().map(|s| &s.kind).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }
}

fn join(labels: &[Label]) -> String {
    labels
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::X => f.write_str("x"),
            Axis::Y => f.write_str("y"),
            Axis::Z => f.write_str("z"),
            // Debug keeps the shortest round-trip form
            Axis::Vector(x, y, z) => write!(f, "({x:?}, {y:?}, {z:?})"),
        }
    }
}

impl fmt::Display for StatementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatementKind::Prepare(Source::Singlet(a, b)) => write!(f, "prepare singlet({a},{b})"),
            StatementKind::Prepare(Source::Bell(k, a, b)) => {
                write!(f, "prepare bell {}({a},{b})", k.keyword())
            }
            StatementKind::Prepare(Source::Ket { spins, labels }) => {
                let bits: String = spins
                    .iter()
                    .map(|s| if *s == Spin::Plus { '+' } else { '-' })
                    .collect();
                write!(f, "prepare ket {bits}")?;
                if let Some(l) = labels {
                    write!(f, " ({})", join(l))?;
                }
                Ok(())
            }
            StatementKind::Measure { basis, targets } => {
                f.write_str("measure ")?;
                match basis {
                    BasisSpec::Spin(axis) => write!(f, "spin({axis})")?,
                    BasisSpec::Bell => f.write_str("bell")?,
                }
                match targets.as_slice() {
                    [t] => write!(f, " on {t}"),
                    ts => write!(f, " on ({})", join(ts)),
                }
            }
            StatementKind::Report(m) => {
                f.write_str("report ")?;
                match m {
                    Metric::Probs => f.write_str("probs"),
                    Metric::Rdm(l) => write!(f, "rdm({})", join(l)),
                    Metric::Schmidt(a, b) => write!(f, "schmidt({}|{})", join(a), join(b)),
                    Metric::Entropy(a, b) => write!(f, "entropy({}|{})", join(a), join(b)),
                    Metric::Concurrence(p, q) => write!(f, "concurrence({p},{q})"),
                    Metric::Correlator(p, a, q, b) => write!(f, "correlator({p},{a},{q},{b})"),
                }
            }
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{};", s.kind)?;
        }
        Ok(())
    }
}
