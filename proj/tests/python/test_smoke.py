# Copyright 2026 The qcube Authors
# SPDX-License-Identifier: Apache-2.0

"""Smoke tests for the Python extension module."""

from fractions import Fraction

import numpy as np
import pytest

import qcube


def test_sign_function_invariants():
    eps = qcube.SignFunction.sample(6, "1/2", seed=3)
    assert eps.n == 6
    assert eps.q == Fraction(1, 2)
    for i in range(1, 7):
        assert eps(i, i) == -1
        for j in range(1, 7):
            assert eps(i, j) == eps(j, i)
    assert eps == qcube.SignFunction.from_text(eps.to_text())


def test_constant_extremes_and_vertex_sign():
    plus = qcube.SignFunction.constant(4, 1)
    assert plus(1, 2) == 1
    assert plus.vertex_sign(0, 3) == 1  # empty product
    minus = qcube.SignFunction.constant(4, -1)
    assert minus.vertex_sign(0b1, 2) == -1


def test_bosonic_fourth_moment():
    eps = qcube.SignFunction.constant(4, 1)
    x = qcube.build_x(eps, 1)
    m4 = qcube.vacuum_moment(x, 4)
    assert m4["coeff"] == Fraction(40)  # 3n^2 - 2n at n = 4
    assert m4["half_power"] == 4
    assert m4["value"] == pytest.approx(2.5)


def test_limit_oracles():
    assert qcube.q_gaussian_moment(4, "1/2") == Fraction(5, 2)
    assert qcube.q_gaussian_moment_coeffs(6) == [5, 6, 3, 1]
    assert qcube.q_gaussian_moment(8, 0) == 14  # Catalan
    assert qcube.limit_moment([1, 2, 1], 0) == 1
    assert qcube.q_integer(3, 1) == 3
    assert qcube.pair_partition_count(8) == 105
    assert qcube.crossing_number([(1, 3), (2, 4)]) == 1
    h3 = qcube.hermite_coeffs(3, "1/2")
    assert h3 == [0, Fraction(-5, 2), 0, 1]


def test_recurrence_and_moments_exact():
    eps = qcube.SignFunction.sample(7, "-1/2", seed=11)
    assert qcube.check_recurrence(eps, 2) == 0
    x1 = qcube.build_x(eps, 1)
    assert qcube.vacuum_moment(x1, 2)["coeff"] == 7  # tau(X^2) = n/n^1
    x2 = qcube.build_x(eps, 2)
    mixed = qcube.mixed_vacuum_moment([x1, x2, x1])
    assert mixed["half_power"] == 4


def test_graph_roundtrip():
    eps = qcube.SignFunction.sample(5, "1/2", seed=2)
    text = qcube.build_graph(eps, 2)
    assert text.startswith("# qcube n=5 k=2")
    edges = qcube.graph_edges(text)
    assert len(edges) == 16 * 10  # 2^{n-1} C(n,2)
    assert qcube.distance_k_edge_count(5, 2) == 160


def test_spectrum_and_norms():
    eps = qcube.SignFunction.constant(5, -1)
    x = qcube.build_x(eps, 1)
    ev = qcube.spectrum(x)
    assert isinstance(ev, np.ndarray)
    assert np.allclose(np.abs(ev), 1.0)  # X^2 = I at q = -1
    assert qcube.lp_norm(x, 2) == pytest.approx(1.0)
    assert qcube.l2_norm_squared(x) == 1


def test_inequality_suites():
    eps = qcube.SignFunction.sample(6, 0, seed=5)
    kh = qcube.khinchine(eps, k=2, p=4, trials=10, seed=1)
    assert kh["pass"]
    hyper = qcube.hypercontractivity(eps, 2.0, 4.0, 0.55, trials=10, seed=1)
    assert hyper["admissible"] and hyper["pass"]


def test_clt_and_z():
    eps = qcube.SignFunction.constant(6, 1)
    assert qcube.z_statistic(eps, [2, 5]) == 2  # (n-k)(k+1)/n
    assert qcube.z_mean(1, "1/2") == Fraction(3, 2)
    assert qcube.z_variance(1, "1/2") == Fraction(3, 4)
    res = qcube.clt_z(1, "0", n=200, samples=500, seed=3)
    assert res["formula_certified"]


def test_convergence_report():
    report = qcube.convergence_report(
        ["1"], n_grid=[4, 6], ks=[1], m_max=4, samples=1, seed=1
    )
    cells = [c for c in report["cells"] if c["m"] == 4]
    # Bosonic closed form: gap = 2/n exactly.
    for cell in cells:
        gap = Fraction(int(cell["gap"]["num"]), int(cell["gap"]["den"]))
        assert gap == Fraction(2, cell["n"])
    assert report["all_trends_pass"]
