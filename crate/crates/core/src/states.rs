//! Named pure states and the bit convention shared by every module.
//!
//! A [`StateVector`] keeps its particle labels in ascending order; the
//! smallest label is the most significant bit of the amplitude index, `|+⟩`
//! (spin up along z) is bit 0 and `|−⟩` is bit 1. Constructors that receive
//! labels in another order permute the amplitudes into this layout.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use crate::qmath::{c64, tensor_product_vec, ComplexVector, C64};
use crate::{Error, Label, Result};

/// Normalization tolerance on `Σ|amplitude|²`.
pub const NORM_TOL: f64 = 1e-10;

/// Amplitudes at or below this magnitude are skipped when fixing the phase.
const PHASE_PIVOT_TOL: f64 = 1e-12;

/// σz eigenstate of a single spin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Plus,
    Minus,
}

impl Spin {
    pub fn bit(self) -> usize {
        match self {
            Spin::Plus => 0,
            Spin::Minus => 1,
        }
    }

    pub fn from_bit(bit: usize) -> Self {
        if bit == 0 {
            Spin::Plus
        } else {
            Spin::Minus
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Spin::Plus => "+",
            Spin::Minus => "−",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    PsiPlus,
    PsiMinus,
    PhiPlus,
    PhiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PsiPlus,
        BellKind::PsiMinus,
        BellKind::PhiPlus,
        BellKind::PhiMinus,
    ];

    /// Display label, e.g. `Ψ+`.
    pub fn label(self) -> &'static str {
        match self {
            BellKind::PsiPlus => "Ψ+",
            BellKind::PsiMinus => "Ψ−",
            BellKind::PhiPlus => "Φ+",
            BellKind::PhiMinus => "Φ−",
        }
    }

    /// Protocol-script spelling, e.g. `psi+`.
    pub fn keyword(self) -> &'static str {
        match self {
            BellKind::PsiPlus => "psi+",
            BellKind::PsiMinus => "psi-",
            BellKind::PhiPlus => "phi+",
            BellKind::PhiMinus => "phi-",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.label() == label)
    }

    /// Amplitudes over `|++⟩, |+−⟩, |−+⟩, |−−⟩`.
    pub fn amplitudes(self) -> [f64; 4] {
        let h = FRAC_1_SQRT_2;
        match self {
            BellKind::PsiPlus => [0.0, h, h, 0.0],
            BellKind::PsiMinus => [0.0, h, -h, 0.0],
            BellKind::PhiPlus => [h, 0.0, 0.0, h],
            BellKind::PhiMinus => [h, 0.0, 0.0, -h],
        }
    }
}

impl fmt::Display for BellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Normalized pure state of `n` labelled qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    labels: Vec<Label>,
    amplitudes: ComplexVector,
}

impl StateVector {
    /// Builds a state whose amplitude index follows the bit order of `labels`
    /// (first label most significant). The result is stored with labels
    /// sorted ascending.
    pub fn new(labels: Vec<Label>, amplitudes: ComplexVector) -> Result<Self> {
        check_labels(&labels)?;
        let dim = 1usize << labels.len();
        if amplitudes.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: amplitudes.dim(),
            });
        }
        let n2 = amplitudes.norm_sqr();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(sorted(labels, amplitudes))
    }

    /// Like [`StateVector::new`] but rescales to unit norm first.
    pub fn normalized(labels: Vec<Label>, amplitudes: ComplexVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        Self::new(labels, amplitudes.scale(c64(1.0 / norm, 0.0)))
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.dim()
    }

    /// Position of `label` in the sorted label list.
    pub fn position(&self, label: Label) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::UnknownLabel(label))
    }

    /// Amplitude of the computational ket with the given spins (label order).
    pub fn amplitude(&self, spins: &[Spin]) -> Result<C64> {
        if spins.len() != self.num_qubits() {
            return Err(Error::WrongQubitCount {
                expected: self.num_qubits(),
                got: spins.len(),
            });
        }
        Ok(self.amplitudes[index_of(spins.iter().map(|s| s.bit()))])
    }

    /// `⟨self|other⟩`; labels must agree.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.labels != other.labels {
            return Err(Error::InvalidBipartition(format!(
                "label sets differ: {:?} vs {:?}",
                self.labels, other.labels
            )));
        }
        self.amplitudes.inner(&other.amplitudes)
    }

    /// Tensor product over the union of disjoint label sets.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        check_labels(&labels)?;
        let amps = tensor_product_vec(&self.amplitudes, &other.amplitudes)?;
        Ok(sorted(labels, amps))
    }

    /// Multiplies by the unit phase that makes the first amplitude with
    /// magnitude above 1e-12 real and positive.
    pub fn canonical_phase(&self) -> Self {
        let pivot = self
            .amplitudes
            .entries()
            .iter()
            .find(|z| z.norm() > PHASE_PIVOT_TOL);
        match pivot {
            Some(z) => Self {
                labels: self.labels.clone(),
                amplitudes: self.amplitudes.scale(z.conj() / z.norm()),
            },
            None => self.clone(),
        }
    }

    /// `min over unit c of ‖self − c·other‖`.
    ///
    /// Evaluated as `‖a − c*b‖` with `c* = ⟨b|a⟩/|⟨b|a⟩|`, which equals
    /// `√(2 − 2|⟨a|b⟩|)` for unit vectors without its cancellation error.
    pub fn phase_distance(&self, other: &Self) -> Result<f64> {
        let overlap = other.inner(self)?;
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            c64(1.0, 0.0)
        };
        Ok(self.amplitudes.sub(&other.amplitudes.scale(phase))?.norm())
    }
}

fn check_labels(labels: &[Label]) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::Empty("label list"));
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::DuplicateLabel(*l));
        }
    }
    Ok(())
}

/// Index of a bit string, first bit most significant.
pub fn index_of(bits: impl IntoIterator<Item = usize>) -> usize {
    bits.into_iter().fold(0, |acc, b| (acc << 1) | b)
}

/// Bit of qubit `pos` (0 = most significant) in an `n`-qubit index.
pub fn bit_at(index: usize, n: usize, pos: usize) -> usize {
    (index >> (n - 1 - pos)) & 1
}

/// Reorders amplitudes so that the labels are ascending.
fn sorted(labels: Vec<Label>, amplitudes: ComplexVector) -> StateVector {
    let n = labels.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| labels[i]);
    if order.iter().enumerate().all(|(i, &o)| i == o) {
        return StateVector { labels, amplitudes };
    }
    let mut out = ComplexVector::zeros(amplitudes.dim());
    for old in 0..amplitudes.dim() {
        let new = index_of(order.iter().map(|&src| bit_at(old, n, src)));
        out[new] = amplitudes[old];
    }
    let labels = order.iter().map(|&i| labels[i]).collect();
    StateVector {
        labels,
        amplitudes: out,
    }
}

/// Computational ket on particles `1..=n`.
pub fn basis_ket(spins: &[Spin]) -> Result<StateVector> {
    let labels = (1..=spins.len() as Label).collect();
    basis_ket_on(labels, spins)
}

/// Computational ket with `spins[i]` on `labels[i]`.
pub fn basis_ket_on(labels: Vec<Label>, spins: &[Spin]) -> Result<StateVector> {
    if spins.is_empty() {
        return Err(Error::Empty("spin pattern"));
    }
    if labels.len() != spins.len() {
        return Err(Error::WrongQubitCount {
            expected: labels.len(),
            got: spins.len(),
        });
    }
    let dim = 1usize << spins.len();
    let amps = ComplexVector::basis(dim, index_of(spins.iter().map(|s| s.bit())));
    StateVector::new(labels, amps)
}

/// `(|+−⟩ − |−+⟩)/√2` on `(first, second)`.
pub fn singlet(first: Label, second: Label) -> Result<StateVector> {
    bell_state(BellKind::PsiMinus, first, second)
}

pub fn bell_state(kind: BellKind, first: Label, second: Label) -> Result<StateVector> {
    if first == second {
        return Err(Error::DuplicateLabel(first));
    }
    StateVector::new(
        vec![first, second],
        ComplexVector::from_real(&kind.amplitudes())?,
    )
}

/// Two singlets: particles 1–2 and 3–4.
pub fn initial_state() -> StateVector {
    singlet(1, 2)
        .and_then(|a| a.tensor(&singlet(3, 4)?))
        .expect("fixed labels are valid")
}

/// True iff `‖a − c·b‖ ≤ tol` for some unit `c`. States on different label
/// sets are never equal.
pub fn equal_up_to_global_phase(a: &StateVector, b: &StateVector, tol: f64) -> bool {
    a.phase_distance(b).is_ok_and(|d| d <= tol)
}
