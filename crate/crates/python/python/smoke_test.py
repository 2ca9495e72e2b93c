"""Smoke test for the pyqswap extension. Run after `maturin develop` or
installing a built wheel."""

import pyqswap as q

TOL = 1e-10


def close(a, b, tol=TOL):
    return abs(a - b) <= tol


def main():
    psi = q.initial_state()
    assert psi.labels == [1, 2, 3, 4]
    assert psi.num_qubits == 4
    assert close(sum(abs(a) ** 2 for a in psi.amplitudes), 1.0)

    s = q.singlet(1, 2)
    assert close(abs(s.inner(q.bell_state("psi-", 1, 2))), 1.0)
    assert close(s.phase_distance(q.bell_state("Ψ−", 1, 2)), 0.0)
    assert close(q.pure_concurrence(s), 1.0)
    assert close(q.entanglement_entropy(s, [1], [2]), 1.0)
    assert close(q.correlator(s, 1, "z", 2, "z"), -1.0)

    outs = q.measure_spin(psi, "z", 2)
    assert len(outs) == 2 and all(close(o.probability, 0.5) for o in outs)
    outs = q.measure_bell(psi, 2, 3)
    assert len(outs) == 4 and all(close(o.probability, 0.25) for o in outs)

    rho = q.reduced_density(psi, [1, 4])
    assert close(rho.purity(), 0.25)
    assert close(q.mixed_concurrence(rho), 0.0)

    for exp in (1, 2):
        report = q.run_experiment(exp)
        rows = report["rows"]
        assert len(rows) == 4
        assert close(sum(r["probability"] for r in rows), 1.0)
        ok, _ = q.correspondence_check(exp)
        assert ok
    assert all(close(r["concurrence"], 1.0) for r in q.run_experiment(2)["rows"])
    assert all(close(r["concurrence"], 0.0) for r in q.run_experiment(1)["rows"])

    terms = q.bell_decompose()
    assert len(terms) == 4 and all(close(abs(c), 0.5) for _, _, c in terms)

    ns = q.no_signaling_report()
    assert all(d < TOL for d in ns["distance_to_maximally_mixed"].values())

    mc = q.monte_carlo(2, 2000, seed=7)
    assert mc == q.monte_carlo(2, 2000, seed=7)

    script = """
prepare singlet(1,2);
prepare singlet(3,4);
measure bell on (2,3);
report concurrence(1,4);
"""
    run = q.run_protocol(script)
    assert len(run["branches"]) == 4
    sampled = q.run_protocol(script, mode="sampled", trials=3)
    assert len(sampled["trials"]) == 3

    try:
        q.run_protocol("measure\n")
    except ValueError as e:
        assert "line 1" in str(e)
    else:
        raise AssertionError("syntax error not raised")

    print("smoke test passed")


if __name__ == "__main__":
    main()
