//! Entanglement and correlation diagnostics on pure states and density
//! matrices.

use crate::measurement::{OutcomeRecord, SpinDirection};
use crate::qmath::{c64, eigh, svd, ComplexMatrix, ComplexVector, C64};
use crate::states::{bit_at, StateVector};
use crate::{Error, Label, Result};

const DENSITY_TOL: f64 = 1e-10;

/// Schmidt coefficients at or below this are exact zeros for rank and entropy.
pub const SCHMIDT_ZERO: f64 = 1e-12;

/// Eigen-weights of a density matrix below this are treated as numerical dust
/// in the concurrence construction.
const WEIGHT_DUST: f64 = 1e-13;

/// Hermitian, positive semidefinite, unit-trace matrix on ascending labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    labels: Vec<Label>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(labels: Vec<Label>, matrix: ComplexMatrix) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Empty("label list"));
        }
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidDensityMatrix(format!(
                "labels must be strictly ascending: {labels:?}"
            )));
        }
        let dim = 1usize << labels.len();
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: matrix.rows() * matrix.cols(),
            });
        }
        let dev = matrix.hermitian_deviation();
        if dev > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian ({dev:e})")));
        }
        let tr = matrix.trace();
        if (tr - c64(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let min = eigh(&matrix)?.values.last().copied().unwrap_or(0.0);
        if min < -DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { labels, matrix })
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let a = state.amplitudes();
        Self {
            labels: state.labels().to_vec(),
            matrix: ComplexMatrix::outer(a, a),
        }
    }

    pub fn maximally_mixed(labels: Vec<Label>) -> Result<Self> {
        let dim = 1usize << labels.len();
        Self::new(
            labels,
            ComplexMatrix::identity(dim).scale(c64(1.0 / dim as f64, 0.0)),
        )
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `tr ρ²`
    pub fn purity(&self) -> f64 {
        self.matrix.data().iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.matrix).expect("validated Hermitian").values
    }

    /// Von Neumann entropy in bits.
    pub fn entropy_bits(&self) -> f64 {
        entropy_of_weights(self.eigenvalues().into_iter())
    }

    /// `tr(ρ·O)` for an operator on all qubits.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<C64> {
        Ok(self.matrix.matmul(op)?.trace())
    }
}

/// Amplitude-index table for a split of `n` qubits into `first` and `second`
/// positions: `table[i][j]` has the bits of `i` on `first` and of `j` on
/// `second`, each most significant first.
fn split_table(n: usize, first: &[usize], second: &[usize]) -> Vec<Vec<usize>> {
    let (k, m) = (first.len(), second.len());
    (0..1usize << k)
        .map(|i| {
            (0..1usize << m)
                .map(|j| {
                    let mut idx = 0;
                    for (b, &p) in first.iter().enumerate() {
                        idx |= bit_at(i, k, b) << (n - 1 - p);
                    }
                    for (b, &p) in second.iter().enumerate() {
                        idx |= bit_at(j, m, b) << (n - 1 - p);
                    }
                    idx
                })
                .collect()
        })
        .collect()
}

/// Sorted, de-duplicated positions of `subset` within the state's labels.
fn positions(state: &StateVector, subset: &[Label]) -> Result<(Vec<Label>, Vec<usize>)> {
    if subset.is_empty() {
        return Err(Error::Empty("label subset"));
    }
    let mut labels = subset.to_vec();
    labels.sort_unstable();
    if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateLabel(w[0]));
    }
    let pos = labels
        .iter()
        .map(|&l| state.position(l))
        .collect::<Result<Vec<_>>>()?;
    Ok((labels, pos))
}

fn complement(n: usize, pos: &[usize]) -> Vec<usize> {
    (0..n).filter(|p| !pos.contains(p)).collect()
}

/// Partial trace of `|ψ⟩⟨ψ|` over every particle not in `keep`.
pub fn reduced_density(state: &StateVector, keep: &[Label]) -> Result<DensityMatrix> {
    let (labels, keep_pos) = positions(state, keep)?;
    let n = state.num_qubits();
    let table = split_table(n, &keep_pos, &complement(n, &keep_pos));
    let psi = state.amplitudes();
    let dim = table.len();
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let z: C64 = table[i]
                .iter()
                .zip(&table[j])
                .map(|(&a, &b)| psi[a] * psi[b].conj())
                .sum();
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    Ok(DensityMatrix { labels, matrix: m })
}

/// `Σ_k p_k · reduced_density(post_k, keep)` over one measurement's records.
pub fn mixed_from_records(records: &[OutcomeRecord], keep: &[Label]) -> Result<DensityMatrix> {
    let mut acc: Option<DensityMatrix> = None;
    for r in records {
        let Some(post) = &r.post_state else { continue };
        let rho = reduced_density(post, keep)?;
        let term = rho.matrix.scale(c64(r.probability, 0.0));
        acc = Some(match acc {
            None => DensityMatrix {
                labels: rho.labels,
                matrix: term,
            },
            Some(prev) => DensityMatrix {
                matrix: prev.matrix.add(&term)?,
                ..prev
            },
        });
    }
    acc.ok_or(Error::Empty("outcome records"))
}

/// Split of a state's labels into two non-empty complementary sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    a: Vec<Label>,
    b: Vec<Label>,
}

impl Bipartition {
    pub fn new(a: &[Label], b: &[Label]) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidBipartition("both sides must be non-empty".into()));
        }
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        a.sort_unstable();
        b.sort_unstable();
        for side in [&a, &b] {
            if let Some(w) = side.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateLabel(w[0]));
            }
        }
        if let Some(x) = a.iter().find(|x| b.contains(x)) {
            return Err(Error::InvalidBipartition(format!(
                "particle {x} is on both sides"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &[Label] {
        &self.a
    }

    pub fn b(&self) -> &[Label] {
        &self.b
    }

    fn check_covers(&self, state: &StateVector) -> Result<()> {
        let mut all: Vec<Label> = self.a.iter().chain(&self.b).copied().collect();
        all.sort_unstable();
        if all != state.labels() {
            return Err(Error::InvalidBipartition(format!(
                "{:?}|{:?} does not partition {:?}",
                self.a,
                self.b,
                state.labels()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    /// Descending, `Σ c² = 1`; `min(dim A, dim B)` entries.
    pub coefficients: Vec<f64>,
    pub left_vectors: Vec<StateVector>,
    pub right_vectors: Vec<StateVector>,
    pub bipartition: Bipartition,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.iter().filter(|&&c| c > SCHMIDT_ZERO).count()
    }
}

/// `ψ = Σ_k c_k |u_k⟩_A ⊗ |v_k⟩_B`. The coefficient matrix has rows indexed
/// by the bits of side A and columns by side B, each in label order.
pub fn schmidt(state: &StateVector, bipartition: &Bipartition) -> Result<SchmidtDecomposition> {
    bipartition.check_covers(state)?;
    let pos_a: Vec<usize> = bipartition.a.iter().map(|&l| state.position(l)).collect::<Result<_>>()?;
    let pos_b: Vec<usize> = bipartition.b.iter().map(|&l| state.position(l)).collect::<Result<_>>()?;
    let table = split_table(state.num_qubits(), &pos_a, &pos_b);
    let psi = state.amplitudes();
    let rows = table.len();
    let cols = table[0].len();
    let data = table.iter().flat_map(|row| row.iter().map(|&i| psi[i])).collect();
    let m = ComplexMatrix::new(rows, cols, data)?;
    let d = svd(&m)?;
    let k = d.singular_values.len();
    let left_vectors = (0..k)
        .map(|j| StateVector::normalized(bipartition.a.clone(), d.u.column(j)))
        .collect::<Result<Vec<_>>>()?;
    // m = U s V†, so ψ_ab = Σ s_k U_ak conj(V_bk)
    let right_vectors = (0..k)
        .map(|j| StateVector::normalized(bipartition.b.clone(), d.v.column(j).conj()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SchmidtDecomposition {
        coefficients: d.singular_values,
        left_vectors,
        right_vectors,
        bipartition: bipartition.clone(),
    })
}

fn entropy_of_weights(weights: impl Iterator<Item = f64>) -> f64 {
    let h: f64 = weights
        .filter(|&w| w > SCHMIDT_ZERO * SCHMIDT_ZERO)
        .map(|w| -w * w.log2())
        .sum();
    h.max(0.0)
}

/// `−Σ c² log₂ c²` over coefficients above 1e-12, in bits.
pub fn entanglement_entropy(sd: &SchmidtDecomposition) -> f64 {
    entropy_of_coefficients(&sd.coefficients)
}

pub fn entropy_of_coefficients(coefficients: &[f64]) -> f64 {
    entropy_of_weights(
        coefficients
            .iter()
            .filter(|&&c| c > SCHMIDT_ZERO)
            .map(|c| c * c),
    )
}

/// True iff the second Schmidt coefficient is at most `tol`.
pub fn is_product(state: &StateVector, bipartition: &Bipartition, tol: f64) -> Result<bool> {
    let sd = schmidt(state, bipartition)?;
    Ok(sd.coefficients.get(1).is_none_or(|&c| c <= tol))
}

/// `2|ad − bc|` for amplitudes `(a, b, c, d)`.
pub fn pure_concurrence(state: &StateVector) -> Result<f64> {
    if state.num_qubits() != 2 {
        return Err(Error::WrongQubitCount {
            expected: 2,
            got: state.num_qubits(),
        });
    }
    let p = state.amplitudes();
    Ok((2.0 * (p[0] * p[3] - p[1] * p[2]).norm()).min(1.0))
}

/// Spin flip `(σy⊗σy)·conj(v)`.
fn spin_flip(v: &ComplexVector) -> ComplexVector {
    ComplexVector::new(vec![-v[3].conj(), v[2].conj(), v[1].conj(), -v[0].conj()])
        .expect("finite")
}

/// Two-qubit concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`.
///
/// The λ are the square roots of the eigenvalues of `ρ·ρ̃` with
/// `ρ̃ = (σy⊗σy)ρ*(σy⊗σy)`. They are obtained as the singular values of
/// `τ_ij = ⟨w_i|w̃_j⟩` over the weighted eigenvectors `w_i = √p_i·v_i` of ρ,
/// which avoids taking square roots of near-zero eigenvalues.
pub fn mixed_concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.num_qubits() != 2 {
        return Err(Error::WrongQubitCount {
            expected: 2,
            got: rho.num_qubits(),
        });
    }
    let e = eigh(rho.matrix())?;
    let weighted: Vec<ComplexVector> = e
        .values
        .iter()
        .zip(&e.vectors)
        .filter(|(&p, _)| p > WEIGHT_DUST)
        .map(|(&p, v)| v.scale(c64(p.sqrt(), 0.0)))
        .collect();
    if weighted.is_empty() {
        return Err(Error::InvalidDensityMatrix("no positive weight".into()));
    }
    let flipped: Vec<ComplexVector> = weighted.iter().map(spin_flip).collect();
    let r = weighted.len();
    let mut tau = ComplexMatrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            tau[(i, j)] = weighted[i].inner(&flipped[j])?;
        }
    }
    let mut lambda = svd(&tau)?.singular_values;
    lambda.resize(4, 0.0);
    Ok((lambda[0] - lambda[1] - lambda[2] - lambda[3]).clamp(0.0, 1.0))
}

/// Applies a 2×2 operator to qubit `pos` of an `n`-qubit amplitude vector.
fn apply_local(v: &ComplexVector, n: usize, pos: usize, op: &ComplexMatrix) -> ComplexVector {
    let mask = 1usize << (n - 1 - pos);
    let mut out = ComplexVector::zeros(v.dim());
    for i0 in (0..v.dim()).filter(|i| i & mask == 0) {
        let i1 = i0 | mask;
        out[i0] = op[(0, 0)] * v[i0] + op[(0, 1)] * v[i1];
        out[i1] = op[(1, 0)] * v[i0] + op[(1, 1)] * v[i1];
    }
    out
}

fn check_pair(labels: &[Label], p: Label, q: Label) -> Result<(usize, usize)> {
    if p == q {
        return Err(Error::DuplicateLabel(p));
    }
    let find = |l: Label| labels.iter().position(|&x| x == l).ok_or(Error::UnknownLabel(l));
    Ok((find(p)?, find(q)?))
}

/// `⟨ψ| (a·σ)_p ⊗ (b·σ)_q |ψ⟩`.
pub fn correlator(
    state: &StateVector,
    (p, a): (Label, SpinDirection),
    (q, b): (Label, SpinDirection),
) -> Result<f64> {
    let (pp, pq) = check_pair(state.labels(), p, q)?;
    let n = state.num_qubits();
    let psi = state.amplitudes();
    let phi = apply_local(&apply_local(psi, n, pp, &a.operator()), n, pq, &b.operator());
    Ok(psi.inner(&phi)?.re)
}

/// `tr(ρ · (a·σ)_p ⊗ (b·σ)_q)`.
pub fn correlator_mixed(
    rho: &DensityMatrix,
    (p, a): (Label, SpinDirection),
    (q, b): (Label, SpinDirection),
) -> Result<f64> {
    let (pp, pq) = check_pair(rho.labels(), p, q)?;
    let mut op = ComplexMatrix::identity(1);
    for pos in 0..rho.num_qubits() {
        let local = if pos == pp {
            a.operator()
        } else if pos == pq {
            b.operator()
        } else {
            ComplexMatrix::identity(2)
        };
        op = op.kron(&local);
    }
    Ok(rho.expectation(&op)?.re)
}

/// Correlators `E(dᵢ, dⱼ)` between two particles over a grid of named
/// directions.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationReport {
    pub first: Label,
    pub second: Label,
    pub directions: Vec<(String, SpinDirection)>,
    /// `values[i][j] = E(directions[i] on first, directions[j] on second)`
    pub values: Vec<Vec<f64>>,
}

impl CorrelationReport {
    pub fn get(&self, first_dir: &str, second_dir: &str) -> Option<f64> {
        let i = self.directions.iter().position(|(n, _)| n == first_dir)?;
        let j = self.directions.iter().position(|(n, _)| n == second_dir)?;
        Some(self.values[i][j])
    }
}

pub fn correlation_grid(
    state: &StateVector,
    first: Label,
    second: Label,
    directions: &[(String, SpinDirection)],
) -> Result<CorrelationReport> {
    let values = directions
        .iter()
        .map(|(_, a)| {
            directions
                .iter()
                .map(|(_, b)| correlator(state, (first, *a), (second, *b)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CorrelationReport {
        first,
        second,
        directions: directions.to_vec(),
        values,
    })
}

/// The x/y/z axes, named.
pub fn xyz_axes() -> Vec<(String, SpinDirection)> {
    vec![
        ("x".into(), SpinDirection::X),
        ("y".into(), SpinDirection::Y),
        ("z".into(), SpinDirection::Z),
    ]
}

/// Pure state of the `keep` particles when the full state factorizes across
/// `keep` and the rest. Fails with [`Error::NotPure`] when the reduced state
/// has purity below `1 − tol`.
pub fn heralded_state(state: &StateVector, keep: &[Label], tol: f64) -> Result<StateVector> {
    let rho = reduced_density(state, keep)?;
    let purity = rho.purity();
    if purity < 1.0 - tol {
        return Err(Error::NotPure(purity));
    }
    let (labels, keep_pos) = positions(state, keep)?;
    let n = state.num_qubits();
    let table = split_table(n, &complement(n, &keep_pos), &keep_pos);
    let psi = state.amplitudes();
    // the slice with the largest weight carries the factor up to scale
    let best = table
        .iter()
        .max_by(|x, y| {
            let wx: f64 = x.iter().map(|&i| psi[i].norm_sqr()).sum();
            let wy: f64 = y.iter().map(|&i| psi[i].norm_sqr()).sum();
            wx.total_cmp(&wy)
        })
        .expect("non-empty table");
    let slice = ComplexVector::new(best.iter().map(|&i| psi[i]).collect())?;
    StateVector::normalized(labels, slice).map(|s| s.canonical_phase())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{measure, z_product_basis};
    use crate::states::{basis_ket, basis_ket_on, bell_state, initial_state, singlet, BellKind, Spin};
    use std::f64::consts::FRAC_1_SQRT_2;
    use Spin::{Minus, Plus};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn quarter_identity() -> ComplexMatrix {
        ComplexMatrix::identity(4).scale(c64(0.25, 0.0))
    }

    #[test]
    fn reduced_density_examples() {
        let phi = bell_state(BellKind::PhiPlus, 1, 2).unwrap();
        let r = reduced_density(&phi, &[1]).unwrap();
        let half = ComplexMatrix::identity(2).scale(c64(0.5, 0.0));
        assert!(crate::qmath::frobenius_distance(r.matrix(), &half).unwrap() < 1e-15);

        let r = reduced_density(&initial_state(), &[4, 1]).unwrap();
        assert_eq!(r.labels(), &[1, 4]);
        assert!(crate::qmath::frobenius_distance(r.matrix(), &quarter_identity()).unwrap() < 1e-15);

        let k = basis_ket(&[Plus, Minus]).unwrap();
        let r = reduced_density(&k, &[1]).unwrap();
        assert_eq!(r.matrix(), &ComplexMatrix::from_diag(&[1.0, 0.0]));
    }

    #[test]
    fn reduced_density_errors() {
        let s = initial_state();
        assert_eq!(reduced_density(&s, &[7]).unwrap_err(), Error::UnknownLabel(7));
        assert!(reduced_density(&s, &[]).is_err());
        assert_eq!(reduced_density(&s, &[1, 1]).unwrap_err(), Error::DuplicateLabel(1));
    }

    #[test]
    fn density_matrix_validation() {
        let bad_trace = ComplexMatrix::identity(2);
        assert!(DensityMatrix::new(vec![1], bad_trace).is_err());
        let neg = ComplexMatrix::from_diag(&[1.5, -0.5]);
        assert!(DensityMatrix::new(vec![1], neg).is_err());
        let nonherm = ComplexMatrix::from_real(2, 2, &[0.5, 0.1, 0.0, 0.5]).unwrap();
        assert!(DensityMatrix::new(vec![1], nonherm).is_err());
        assert!(DensityMatrix::new(vec![2, 1], quarter_identity()).is_err());
        assert!(DensityMatrix::new(vec![1, 2], quarter_identity()).is_ok());
    }

    #[test]
    fn mixed_from_single_certain_record() {
        let k = basis_ket_on(vec![1, 2], &[Plus, Minus]).unwrap();
        let recs = vec![OutcomeRecord {
            label: "x".into(),
            probability: 1.0,
            post_state: Some(k.clone()),
        }];
        assert_eq!(
            mixed_from_records(&recs, &[2]).unwrap(),
            reduced_density(&k, &[2]).unwrap()
        );
        assert!(mixed_from_records(&[], &[2]).is_err());
    }

    #[test]
    fn mixed_after_z_measurement() {
        let recs = measure(&initial_state(), &z_product_basis(&[2, 3]).unwrap()).unwrap();
        let rho = mixed_from_records(&recs, &[1, 4]).unwrap();
        assert!(crate::qmath::frobenius_distance(rho.matrix(), &quarter_identity()).unwrap() < 1e-15);
    }

    #[test]
    fn schmidt_examples() {
        let k = basis_ket_on(vec![1, 4], &[Minus, Minus]).unwrap();
        let sd = schmidt(&k, &Bipartition::new(&[1], &[4]).unwrap()).unwrap();
        assert!(close(sd.coefficients[0], 1.0, 1e-15));
        assert_eq!(sd.rank(), 1);

        let b = bell_state(BellKind::PsiPlus, 1, 4).unwrap();
        let sd = schmidt(&b, &Bipartition::new(&[1], &[4]).unwrap()).unwrap();
        for c in &sd.coefficients {
            assert!(close(*c, FRAC_1_SQRT_2, 1e-15));
        }

        let sd = schmidt(&initial_state(), &Bipartition::new(&[1, 2], &[3, 4]).unwrap()).unwrap();
        assert_eq!(sd.coefficients.len(), 4);
        assert!(close(sd.coefficients[0], 1.0, 1e-15));
        for c in &sd.coefficients[1..] {
            assert!(c.abs() < 1e-15);
        }
    }

    #[test]
    fn schmidt_vectors_reconstruct_state() {
        let psi = initial_state();
        let bip = Bipartition::new(&[1, 3], &[2, 4]).unwrap();
        let sd = schmidt(&psi, &bip).unwrap();
        let mut acc = ComplexVector::zeros(16);
        for k in 0..sd.coefficients.len() {
            let t = sd.left_vectors[k].tensor(&sd.right_vectors[k]).unwrap();
            for i in 0..16 {
                acc[i] += t.amplitudes()[i] * sd.coefficients[k];
            }
        }
        assert!(acc.sub(psi.amplitudes()).unwrap().norm() < 1e-14);
    }

    #[test]
    fn bipartition_errors() {
        assert!(Bipartition::new(&[], &[1]).is_err());
        assert!(Bipartition::new(&[1], &[1]).is_err());
        let bip = Bipartition::new(&[1], &[2]).unwrap();
        assert!(schmidt(&initial_state(), &bip).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy_of_coefficients(&[1.0]), 0.0);
        assert!(close(entropy_of_coefficients(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]), 1.0, 1e-15));
        // −0.9 log₂ 0.9 − 0.1 log₂ 0.1
        let h = entropy_of_coefficients(&[0.9f64.sqrt(), 0.1f64.sqrt()]);
        assert!(close(h, 0.468_995_593_589_281_2, 1e-12), "{h}");
    }

    #[test]
    fn pure_concurrence_examples() {
        for spins in [[Plus, Plus], [Plus, Minus], [Minus, Plus], [Minus, Minus]] {
            assert_eq!(pure_concurrence(&basis_ket(&spins).unwrap()).unwrap(), 0.0);
        }
        for kind in BellKind::ALL {
            let c = pure_concurrence(&bell_state(kind, 1, 2).unwrap()).unwrap();
            assert!(close(c, 1.0, 1e-15));
        }
        let amps = ComplexVector::from_real(&[0.9f64.sqrt(), 0.0, 0.0, 0.1f64.sqrt()]).unwrap();
        let s = StateVector::new(vec![1, 2], amps).unwrap();
        assert!(close(pure_concurrence(&s).unwrap(), 0.6, 1e-15));
        assert!(pure_concurrence(&initial_state()).is_err());
    }

    #[test]
    fn mixed_concurrence_examples() {
        let mm = DensityMatrix::maximally_mixed(vec![1, 4]).unwrap();
        assert_eq!(mixed_concurrence(&mm).unwrap(), 0.0);
        for kind in BellKind::ALL {
            let rho = DensityMatrix::from_pure(&bell_state(kind, 1, 4).unwrap());
            assert!(close(mixed_concurrence(&rho).unwrap(), 1.0, 1e-12));
        }
        let prod = DensityMatrix::from_pure(&basis_ket(&[Plus, Minus]).unwrap());
        assert!(mixed_concurrence(&prod).unwrap().abs() < 1e-12);
        let three = DensityMatrix::from_pure(&basis_ket(&[Plus, Plus, Plus]).unwrap());
        assert!(mixed_concurrence(&three).is_err());
    }

    #[test]
    fn werner_state_concurrence() {
        // p|Ψ−⟩⟨Ψ−| + (1−p)/4·1 has C = max(0, (3p − 1)/2)
        let s = DensityMatrix::from_pure(&singlet(1, 2).unwrap());
        for p in [0.2, 1.0 / 3.0, 0.5, 0.8] {
            let m = s
                .matrix()
                .scale(c64(p, 0.0))
                .add(&quarter_identity().scale(c64(1.0 - p, 0.0)))
                .unwrap();
            let rho = DensityMatrix::new(vec![1, 2], m).unwrap();
            let c = mixed_concurrence(&rho).unwrap();
            assert!(close(c, ((3.0 * p - 1.0) / 2.0).max(0.0), 1e-12), "p={p}: {c}");
        }
    }

    #[test]
    fn correlator_errors() {
        let s = singlet(1, 2).unwrap();
        let z = SpinDirection::Z;
        assert!(correlator(&s, (1, z), (1, z)).is_err());
        assert_eq!(correlator(&s, (1, z), (3, z)).unwrap_err(), Error::UnknownLabel(3));
    }

    #[test]
    fn heralded_state_extracts_factor() {
        let recs = measure(&initial_state(), &z_product_basis(&[2, 3]).unwrap()).unwrap();
        let h = heralded_state(recs[0].post_state.as_ref().unwrap(), &[1, 4], 1e-9).unwrap();
        assert_eq!(h, basis_ket_on(vec![1, 4], &[Minus, Minus]).unwrap());
        assert!(matches!(
            heralded_state(&initial_state(), &[1, 4], 1e-9),
            Err(Error::NotPure(_))
        ));
    }

    #[test]
    fn is_product_examples() {
        let bip = Bipartition::new(&[1], &[4]).unwrap();
        assert!(is_product(&basis_ket_on(vec![1, 4], &[Minus, Plus]).unwrap(), &bip, 1e-9).unwrap());
        assert!(!is_product(&bell_state(BellKind::PhiMinus, 1, 4).unwrap(), &bip, 1e-9).unwrap());
        let cut = Bipartition::new(&[1, 2], &[3, 4]).unwrap();
        assert!(is_product(&initial_state(), &cut, 1e-9).unwrap());
    }
}
