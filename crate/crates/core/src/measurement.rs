//! Projective measurements: Born probabilities, collapse and seeded sampling.
//!
//! A measurement is a complete orthonormal basis on an ordered set of target
//! qubits. Each basis vector `b` yields one [`OutcomeRecord`] with
//! `p = ‖(|b⟩⟨b| ⊗ 1)ψ‖²` and the renormalized projected state. Products of
//! single-qubit bases are measured as one joint basis.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::qmath::{c64, tensor_product_vec, ComplexMatrix, ComplexVector, C64};
use crate::states::{bit_at, BellKind, Spin, StateVector, NORM_TOL};
use crate::{Error, Label, Result};

/// Outcomes with lower probability carry no post-measurement state.
pub const PROB_TOL: f64 = 1e-12;

const UNIT_TOL: f64 = 1e-10;
const ORTHO_TOL: f64 = 1e-10;
const DISTRIBUTION_TOL: f64 = 1e-8;

/// Unit vector along which a spin component is measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinDirection {
    x: f64,
    y: f64,
    z: f64,
}

impl SpinDirection {
    pub const X: SpinDirection = SpinDirection { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: SpinDirection = SpinDirection { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: SpinDirection = SpinDirection { x: 0.0, y: 0.0, z: 1.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n2 = x * x + y * y + z * z;
        if !n2.is_finite() || (n2 - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidDirection(x, y, z));
        }
        Ok(Self { x, y, z })
    }

    /// Rescales `(x, y, z)` to unit length. Norms outside `[1e-6, 1e6]` are
    /// rejected.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !(1e-6..=1e6).contains(&norm) {
            return Err(Error::InvalidDirection(x, y, z));
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Polar angle θ and azimuth φ.
    pub fn angles(&self) -> (f64, f64) {
        (self.z.clamp(-1.0, 1.0).acos(), self.y.atan2(self.x))
    }

    /// `x·σx + y·σy + z·σz`
    pub fn operator(&self) -> ComplexMatrix {
        ComplexMatrix::new(
            2,
            2,
            vec![
                c64(self.z, 0.0),
                c64(self.x, -self.y),
                c64(self.x, self.y),
                c64(-self.z, 0.0),
            ],
        )
        .expect("finite 2x2")
    }
}

/// Complete orthonormal basis on an ordered list of target qubits.
///
/// Vector components are indexed with the first target as most significant
/// bit, independent of how the targets sort.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    targets: Vec<Label>,
    vectors: Vec<ComplexVector>,
    labels: Vec<String>,
}

impl MeasurementBasis {
    pub fn new(targets: Vec<Label>, vectors: Vec<ComplexVector>, labels: Vec<String>) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::Empty("measurement targets"));
        }
        for (i, t) in targets.iter().enumerate() {
            if targets[..i].contains(t) {
                return Err(Error::DuplicateLabel(*t));
            }
        }
        let dim = 1usize << targets.len();
        if vectors.len() != dim {
            return Err(Error::InvalidBasis(format!(
                "{} vectors for {} target qubits",
                vectors.len(),
                targets.len()
            )));
        }
        if labels.len() != vectors.len() {
            return Err(Error::InvalidBasis(format!(
                "{} labels for {} vectors",
                labels.len(),
                vectors.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidBasis(format!("duplicate outcome label {l:?}")));
            }
        }
        for (i, a) in vectors.iter().enumerate() {
            if a.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: a.dim(),
                });
            }
            for (j, b) in vectors.iter().enumerate().take(i + 1) {
                let g = a.inner(b)?;
                let expect = if i == j { 1.0 } else { 0.0 };
                if (g - c64(expect, 0.0)).norm() > ORTHO_TOL {
                    return Err(Error::InvalidBasis(format!(
                        "vectors {j} and {i} are not orthonormal (overlap {g})"
                    )));
                }
            }
        }
        Ok(Self {
            targets,
            vectors,
            labels,
        })
    }

    /// Joint basis of several bases on disjoint targets. The first factor's
    /// outcome varies slowest; labels are concatenated.
    pub fn product(factors: &[MeasurementBasis]) -> Result<Self> {
        let (first, rest) = factors
            .split_first()
            .ok_or(Error::Empty("basis factors"))?;
        let mut out = first.clone();
        for f in rest {
            let mut targets = out.targets.clone();
            targets.extend_from_slice(&f.targets);
            let mut vectors = Vec::with_capacity(out.vectors.len() * f.vectors.len());
            let mut labels = Vec::with_capacity(vectors.capacity());
            for (va, la) in out.vectors.iter().zip(&out.labels) {
                for (vb, lb) in f.vectors.iter().zip(&f.labels) {
                    vectors.push(tensor_product_vec(va, vb)?);
                    labels.push(format!("{la}{lb}"));
                }
            }
            out = Self::new(targets, vectors, labels)?;
        }
        Ok(out)
    }

    pub fn targets(&self) -> &[Label] {
        &self.targets
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Eigenbasis of the spin component along `direction`, labels `+` / `−`.
///
/// For direction `(sinθ cosφ, sinθ sinφ, cosθ)` the up vector is
/// `(cos θ/2, e^{iφ} sin θ/2)` and the down vector `(−e^{−iφ} sin θ/2, cos θ/2)`.
pub fn spin_basis(direction: SpinDirection, target: Label) -> MeasurementBasis {
    let (up, down) = if direction == SpinDirection::Z {
        ([c64(1.0, 0.0), C64::default()], [C64::default(), c64(1.0, 0.0)])
    } else {
        let (theta, phi) = direction.angles();
        let (s, c) = (theta / 2.0).sin_cos();
        let e = C64::from_polar(1.0, phi);
        ([c64(c, 0.0), e * s], [-e.conj() * s, c64(c, 0.0)])
    };
    MeasurementBasis {
        targets: vec![target],
        vectors: vec![
            ComplexVector::new(up.to_vec()).expect("finite"),
            ComplexVector::new(down.to_vec()).expect("finite"),
        ],
        labels: vec![Spin::Plus.symbol().to_owned(), Spin::Minus.symbol().to_owned()],
    }
}

/// Bell-operator basis on `(first, second)` in the order Ψ+, Ψ−, Φ+, Φ−.
pub fn bell_basis(first: Label, second: Label) -> Result<MeasurementBasis> {
    if first == second {
        return Err(Error::DuplicateLabel(first));
    }
    Ok(MeasurementBasis {
        targets: vec![first, second],
        vectors: BellKind::ALL
            .iter()
            .map(|k| ComplexVector::from_real(&k.amplitudes()).expect("finite"))
            .collect(),
        labels: BellKind::ALL.iter().map(|k| k.label().to_owned()).collect(),
    })
}

/// Product of z-spin bases on each target, in target order.
pub fn z_product_basis(targets: &[Label]) -> Result<MeasurementBasis> {
    let factors: Vec<_> = targets
        .iter()
        .map(|&t| spin_basis(SpinDirection::Z, t))
        .collect();
    MeasurementBasis::product(&factors)
}

/// One branch of a measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeRecord {
    pub label: String,
    pub probability: f64,
    /// Collapsed state on all qubits; `None` when `probability < PROB_TOL`.
    pub post_state: Option<StateVector>,
}

/// Born probabilities and collapsed states for every basis vector, in basis
/// order.
pub fn measure(state: &StateVector, basis: &MeasurementBasis) -> Result<Vec<OutcomeRecord>> {
    let n2 = state.amplitudes().norm_sqr();
    if (n2 - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(n2));
    }
    let n = state.num_qubits();
    let target_pos = basis
        .targets
        .iter()
        .map(|&t| state.position(t))
        .collect::<Result<Vec<_>>>()?;
    let rest_pos: Vec<usize> = (0..n).filter(|p| !target_pos.contains(p)).collect();
    let k = target_pos.len();
    let rest_dim = 1usize << rest_pos.len();

    // full[t][r]: amplitude index with target bits t and remaining bits r
    let full: Vec<Vec<usize>> = (0..1usize << k)
        .map(|t| {
            (0..rest_dim)
                .map(|r| {
                    let mut idx = 0;
                    for (i, &p) in target_pos.iter().enumerate() {
                        idx |= bit_at(t, k, i) << (n - 1 - p);
                    }
                    for (i, &p) in rest_pos.iter().enumerate() {
                        idx |= bit_at(r, rest_pos.len(), i) << (n - 1 - p);
                    }
                    idx
                })
                .collect()
        })
        .collect();

    let psi = state.amplitudes();
    let mut records = Vec::with_capacity(basis.len());
    for (b, label) in basis.vectors.iter().zip(&basis.labels) {
        let mut projected = ComplexVector::zeros(psi.dim());
        let mut probability = 0.0;
        for r in 0..rest_dim {
            let overlap: C64 = (0..b.dim()).map(|t| b[t].conj() * psi[full[t][r]]).sum();
            probability += overlap.norm_sqr();
            for t in 0..b.dim() {
                projected[full[t][r]] = b[t] * overlap;
            }
        }
        let post_state = if probability >= PROB_TOL {
            let scale = c64(1.0 / probability.sqrt(), 0.0);
            Some(StateVector::new(
                state.labels().to_vec(),
                projected.scale(scale),
            )?)
        } else {
            None
        };
        records.push(OutcomeRecord {
            label: label.clone(),
            probability,
            post_state,
        });
    }
    Ok(records)
}

fn check_distribution(records: &[OutcomeRecord]) -> Result<()> {
    if records.is_empty() {
        return Err(Error::InvalidDistribution("no outcomes".into()));
    }
    let mut total = 0.0;
    for r in records {
        if !r.probability.is_finite() || r.probability < 0.0 {
            return Err(Error::InvalidDistribution(format!(
                "outcome {:?} has probability {}",
                r.label, r.probability
            )));
        }
        total += r.probability;
    }
    if (total - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
    }
    Ok(())
}

/// Picks an outcome index by inverse CDF on one uniform draw from `rng`.
pub fn sample<R: Rng + ?Sized>(records: &[OutcomeRecord], rng: &mut R) -> Result<usize> {
    check_distribution(records)?;
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    for (i, r) in records.iter().enumerate() {
        cumulative += r.probability;
        if u < cumulative {
            return Ok(i);
        }
    }
    // u landed in the rounding gap above the last cumulative sum
    Ok(records
        .iter()
        .rposition(|r| r.probability > 0.0)
        .expect("validated distribution has positive mass"))
}

/// Independent generator for trial `trial` of a run seeded with `seed`.
///
/// ChaCha8 keyed from `seed` by `SeedableRng::seed_from_u64`, with the
/// 64-bit stream id set to `trial`. Streams for different trials never
/// overlap, so results do not depend on how trials are scheduled.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}
