//! Shared strategies, brute-force oracles and property bodies. The property
//! bodies are reused by the acceptance target.
#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use qswap::analysis::{reduced_density, schmidt, Bipartition};
use qswap::experiments::random_basis;
use qswap::measurement::{bell_basis, measure, spin_basis, trial_rng, MeasurementBasis, SpinDirection};
use qswap::protocol::{parse, parse_bytes, Axis, BasisSpec, Metric, Program, Source, Statement, StatementKind};
use qswap::qmath::{c64, ComplexMatrix, ComplexVector};
use qswap::states::{BellKind, Spin, StateVector};
use qswap::Label;

pub const CASES: u32 = 1000;

pub fn config() -> ProptestConfig {
    ProptestConfig {
        cases: CASES,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

// ---------------------------------------------------------------------------
// oracles: plain arrays, particle 1 as the most significant bit, bit 0 = up

pub const R: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Two-qubit Bell vectors indexed by `2·b_first + b_second`.
pub fn oracle_bell(kind: BellKind) -> [f64; 4] {
    match kind {
        BellKind::PsiPlus => [0.0, R, R, 0.0],
        BellKind::PsiMinus => [0.0, R, -R, 0.0],
        BellKind::PhiPlus => [R, 0.0, 0.0, R],
        BellKind::PhiMinus => [R, 0.0, 0.0, -R],
    }
}

/// Amplitudes of two singlets on (1,2) and (3,4), built entry by entry.
pub fn oracle_initial() -> [f64; 16] {
    let s = oracle_bell(BellKind::PsiMinus);
    let mut out = [0.0; 16];
    for (i, slot) in out.iter_mut().enumerate() {
        let b = |k: usize| (i >> (3 - k)) & 1;
        *slot = s[2 * b(0) + b(1)] * s[2 * b(2) + b(3)];
    }
    out
}

/// `⟨bell_j(2,3) ⊗ bell_k(1,4) | ψ⟩` by summing over all 16 basis indices.
pub fn oracle_bell_coefficient(inner: BellKind, remote: BellKind) -> f64 {
    let psi = oracle_initial();
    let (bi, br) = (oracle_bell(inner), oracle_bell(remote));
    (0..16)
        .map(|i| {
            let b = |k: usize| (i >> (3 - k)) & 1;
            bi[2 * b(1) + b(2)] * br[2 * b(0) + b(3)] * psi[i]
        })
        .sum()
}

pub fn pauli(axis: char) -> [[Complex64; 2]; 2] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match axis {
        'x' => [[z, one], [one, z]],
        'y' => [[z, -i], [i, z]],
        'z' => [[one, z], [z, -one]],
        _ => panic!("axis"),
    }
}

/// `⟨ψ|σ_a ⊗ σ_b|ψ⟩` for a two-qubit vector, by explicit double sum.
pub fn oracle_correlator(psi: &[Complex64], a: char, b: char) -> f64 {
    let (pa, pb) = (pauli(a), pauli(b));
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..4 {
        for c in 0..4 {
            let m = pa[r >> 1][c >> 1] * pb[r & 1][c & 1];
            acc += psi[r].conj() * m * psi[c];
        }
    }
    acc.re
}

/// Reduced density matrix of `amps` (n qubits, position 0 = MSB) on the
/// sorted positions `keep`, by summing over every pair of full indices.
pub fn oracle_partial_trace(amps: &[Complex64], n: usize, keep: &[usize]) -> Vec<Vec<Complex64>> {
    let k = keep.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); 1 << k]; 1 << k];
    let sub = |i: usize| {
        keep.iter()
            .fold(0usize, |acc, &p| (acc << 1) | ((i >> (n - 1 - p)) & 1))
    };
    let rest = |i: usize| {
        (0..n)
            .filter(|p| !keep.contains(p))
            .fold(0usize, |acc, p| (acc << 1) | ((i >> (n - 1 - p)) & 1))
    };
    for i in 0..1 << n {
        for j in 0..1 << n {
            if rest(i) == rest(j) {
                out[sub(i)][sub(j)] += amps[i] * amps[j].conj();
            }
        }
    }
    out
}

pub fn max_entry_diff(m: &ComplexMatrix, oracle: &[Vec<Complex64>]) -> f64 {
    let mut worst = 0.0f64;
    for (r, row) in oracle.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            worst = worst.max((m[(r, c)] - x).norm());
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// strategies

fn amplitude_vec(dim: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
}

fn to_vector(v: &[(f64, f64)]) -> ComplexVector {
    ComplexVector::new(v.iter().map(|&(re, im)| c64(re, im)).collect()).unwrap()
}

/// Random normalized state on `n` distinct labels from 1..=9, shuffled.
pub fn state_on(n: usize) -> impl Strategy<Value = StateVector> {
    let labels = proptest::sample::subsequence((1..=9).collect::<Vec<Label>>(), n).prop_shuffle();
    (amplitude_vec(1 << n), labels).prop_filter_map("zero vector", |(amps, labels)| {
        let v = to_vector(&amps);
        if v.norm() < 1e-3 {
            return None;
        }
        StateVector::normalized(labels, v).ok()
    })
}

pub fn state(min_qubits: usize, max_qubits: usize) -> impl Strategy<Value = StateVector> {
    (min_qubits..=max_qubits).prop_flat_map(state_on)
}

fn spin() -> impl Strategy<Value = Spin> {
    prop_oneof![Just(Spin::Plus), Just(Spin::Minus)]
}

pub fn bell_kind() -> impl Strategy<Value = BellKind> {
    proptest::sample::select(BellKind::ALL.to_vec())
}

/// Two-qubit states on labels (1,2), mixing generic, product, Bell and
/// computational cases so both sides of product tests are exercised.
pub fn two_qubit_state() -> impl Strategy<Value = StateVector> {
    prop_oneof![
        state_on(2).prop_map(|s| relabel(&s, vec![1, 2])),
        (state_on(1), state_on(1)).prop_map(|(a, b)| {
            relabel(&a, vec![1]).tensor(&relabel(&b, vec![2])).unwrap()
        }),
        bell_kind().prop_map(|k| qswap::states::bell_state(k, 1, 2).unwrap()),
        (spin(), spin()).prop_map(|(a, b)| qswap::states::basis_ket(&[a, b]).unwrap()),
    ]
}

pub fn relabel(s: &StateVector, labels: Vec<Label>) -> StateVector {
    StateVector::new(labels, s.amplitudes().clone()).unwrap()
}

pub fn direction() -> impl Strategy<Value = SpinDirection> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter_map("tiny", |(x, y, z)| SpinDirection::normalized(x, y, z).ok())
}

/// Random state together with a non-trivial split of its labels.
pub fn state_and_split() -> impl Strategy<Value = (StateVector, Vec<Label>, Vec<Label>)> {
    state(2, 5).prop_flat_map(|s| {
        let n = s.num_qubits();
        (Just(s), 1u32..((1 << n) - 1))
    })
    .prop_map(|(s, mask)| {
        let n = s.num_qubits();
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (k, l) in s.labels().iter().enumerate() {
            if mask >> (n - 1 - k) & 1 == 1 {
                a.push(*l);
            } else {
                b.push(*l);
            }
        }
        (s, a, b)
    })
}

/// A basis on some of the state's particles: a random unitary, a spin basis
/// on a random axis, or a Bell basis.
pub fn state_and_basis() -> impl Strategy<Value = (StateVector, MeasurementBasis)> {
    state(1, 4).prop_flat_map(|s| {
        let labels = s.labels().to_vec();
        let n = labels.len();
        let random = (
            proptest::sample::subsequence(labels.clone(), 1..=n.min(3)).prop_shuffle(),
            any::<u64>(),
        )
            .prop_map(|(targets, seed)| random_basis(&targets, &mut trial_rng(seed, 0)).unwrap());
        let spin_b = (proptest::sample::select(labels.clone()), direction())
            .prop_map(|(t, d)| spin_basis(d, t));
        let strat: BoxedStrategy<MeasurementBasis> = if n >= 2 {
            let bell = proptest::sample::subsequence(labels, 2)
                .prop_shuffle()
                .prop_map(|t| bell_basis(t[0], t[1]).unwrap());
            prop_oneof![random, spin_b, bell].boxed()
        } else {
            prop_oneof![random, spin_b].boxed()
        };
        (Just(s), strat)
    })
}

// ---------------------------------------------------------------------------
// DSL generator

fn label() -> impl Strategy<Value = Label> {
    prop_oneof![1u32..10, 1u32..=Label::MAX]
}

fn labels(max: usize) -> impl Strategy<Value = Vec<Label>> {
    prop::collection::vec(label(), 1..=max)
}

fn coordinate() -> impl Strategy<Value = f64> {
    prop_oneof![
        -2.0f64..2.0,
        (-9i32..9).prop_map(f64::from),
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
    ]
}

fn axis() -> impl Strategy<Value = Axis> {
    prop_oneof![
        Just(Axis::X),
        Just(Axis::Y),
        Just(Axis::Z),
        (coordinate(), coordinate(), coordinate()).prop_map(|(x, y, z)| Axis::Vector(x, y, z)),
    ]
}

fn source() -> impl Strategy<Value = Source> {
    prop_oneof![
        (label(), label()).prop_map(|(a, b)| Source::Singlet(a, b)),
        (bell_kind(), label(), label()).prop_map(|(k, a, b)| Source::Bell(k, a, b)),
        (
            prop::collection::vec(spin(), 1..6),
            proptest::option::of(labels(6))
        )
            .prop_map(|(spins, labels)| Source::Ket { spins, labels }),
    ]
}

fn metric() -> impl Strategy<Value = Metric> {
    prop_oneof![
        Just(Metric::Probs),
        labels(4).prop_map(Metric::Rdm),
        (labels(3), labels(3)).prop_map(|(a, b)| Metric::Schmidt(a, b)),
        (labels(3), labels(3)).prop_map(|(a, b)| Metric::Entropy(a, b)),
        (label(), label()).prop_map(|(p, q)| Metric::Concurrence(p, q)),
        (label(), axis(), label(), axis()).prop_map(|(p, a, q, b)| Metric::Correlator(p, a, q, b)),
    ]
}

fn statement_kind() -> impl Strategy<Value = StatementKind> {
    prop_oneof![
        source().prop_map(StatementKind::Prepare),
        (axis(), label()).prop_map(|(a, t)| StatementKind::Measure {
            basis: BasisSpec::Spin(a),
            targets: vec![t],
        }),
        (label(), label()).prop_map(|(a, b)| StatementKind::Measure {
            basis: BasisSpec::Bell,
            targets: vec![a, b],
        }),
        metric().prop_map(StatementKind::Report),
    ]
}

/// Syntactically valid programs; not necessarily semantically valid.
pub fn program() -> impl Strategy<Value = Program> {
    prop::collection::vec(statement_kind(), 0..8).prop_map(|kinds| Program {
        statements: kinds
            .into_iter()
            .map(|kind| Statement {
                kind,
                pos: Default::default(),
            })
            .collect(),
    })
}

/// Arbitrary bytes, and valid program text with random edits, which reaches
/// deeper into the parser than noise alone.
pub fn fuzz_input() -> impl Strategy<Value = Vec<u8>> {
    let noise = prop::collection::vec(any::<u8>(), 0..200);
    let alphabet: Vec<u8> = b"prepare measure report singlet bell ket spin on psi phi x y z probs rdm schmidt entropy concurrence correlator ()|,;+-.e0123456789#\n\t \xff\xc3"
        .to_vec();
    let tokens = prop::collection::vec(proptest::sample::select(alphabet), 0..200);
    let mutated = (
        program(),
        prop::collection::vec((any::<prop::sample::Index>(), any::<u8>()), 0..6),
    )
        .prop_map(|(p, edits)| {
            let mut bytes = p.to_string().into_bytes();
            for (i, b) in edits {
                if bytes.is_empty() {
                    bytes.push(b);
                } else {
                    let at = i.index(bytes.len());
                    if b % 2 == 0 {
                        bytes[at] = b;
                    } else {
                        bytes.truncate(at);
                    }
                }
            }
            bytes
        });
    prop_oneof![noise, tokens, mutated]
}

// ---------------------------------------------------------------------------
// property bodies shared with the acceptance target

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Reduced spectra on both sides equal the squared Schmidt coefficients.
pub fn check_partial_trace_schmidt(s: &StateVector, a: &[Label], b: &[Label]) -> Result<(), TestCaseError> {
    let sd = schmidt(s, &Bipartition::new(a, b).unwrap()).map_err(|e| fail(e.to_string()))?;
    let squares: Vec<f64> = sd.coefficients.iter().map(|c| c * c).collect();
    for side in [a, b] {
        let ev = sorted_desc(reduced_density(s, side).unwrap().eigenvalues());
        for (k, lambda) in ev.iter().enumerate() {
            let want = squares.get(k).copied().unwrap_or(0.0);
            if (lambda - want).abs() > 1e-9 {
                return Err(fail(format!("side {side:?}: eigenvalue {k} = {lambda}, c² = {want}")));
            }
        }
    }
    Ok(())
}

/// Re-measuring a collapsed state repeats its outcome with certainty.
pub fn check_collapse_idempotent(s: &StateVector, basis: &MeasurementBasis) -> Result<(), TestCaseError> {
    let records = measure(s, basis).map_err(|e| fail(e.to_string()))?;
    for (k, r) in records.iter().enumerate() {
        let Some(post) = &r.post_state else { continue };
        let again = measure(post, basis).map_err(|e| fail(e.to_string()))?;
        if (again[k].probability - 1.0).abs() > 1e-10 {
            return Err(fail(format!("outcome {k}: repeat probability {}", again[k].probability)));
        }
    }
    Ok(())
}

/// Born probabilities are non-negative and sum to one.
pub fn check_probability_simplex(s: &StateVector, basis: &MeasurementBasis) -> Result<(), TestCaseError> {
    let records = measure(s, basis).map_err(|e| fail(e.to_string()))?;
    let total: f64 = records.iter().map(|r| r.probability).sum();
    if records.iter().any(|r| r.probability < 0.0) {
        return Err(fail("negative probability".into()));
    }
    if (total - 1.0).abs() > 1e-10 {
        return Err(fail(format!("probabilities sum to {total}")));
    }
    Ok(())
}

/// parse ∘ print is the identity on statement structure.
pub fn check_round_trip(p: &Program) -> Result<(), TestCaseError> {
    let text = p.to_string();
    let back = parse(&text).map_err(|e| fail(format!("{e}\n{text}")))?;
    if back.kinds() != p.kinds() {
        return Err(fail(format!("round trip changed the program:\n{text}")));
    }
    Ok(())
}

/// The parser returns for any byte string, and what it accepts round-trips.
pub fn check_parse_total(bytes: &[u8]) -> Result<(), TestCaseError> {
    let result = std::panic::catch_unwind(|| parse_bytes(bytes));
    match result {
        Err(_) => Err(fail(format!("parser panicked on {bytes:?}"))),
        Ok(Ok(p)) => check_round_trip(&p),
        Ok(Err(e)) if e.line == 0 || e.column == 0 => Err(fail(format!("bad position in {e}"))),
        Ok(Err(_)) => Ok(()),
    }
}
