# Copyright 2026 The qcube Authors
# SPDX-License-Identifier: Apache-2.0

"""Baby Fock operators on weighted distance-k hypercube graphs.

Exact-arithmetic core (GMP rationals) with q-Hermite / q-Gaussian limit
oracles; see the `qcube` CLI for the full experiment sweeps.
"""

import json as _json

from qcube._qcube import (  # noqa: F401
    FockOperator,
    SignFunction,
    __version__,
    build_graph,
    build_x,
    build_y,
    build_y_core,
    check_recurrence,
    clt_z,
    convergence_report_json,
    crossing_number,
    distance_k_edge_count,
    graph_edges,
    hermite_coeffs,
    hypercontractivity,
    khinchine,
    l2_norm_squared,
    limit_moment,
    lp_norm,
    mixed_vacuum_moment,
    pair_partition_count,
    q_factorial,
    q_gaussian_moment,
    q_gaussian_moment_coeffs,
    q_integer,
    spectrum,
    vacuum_moment,
    vacuum_moments,
    z_mean,
    z_statistic,
    z_variance,
)


def convergence_report(qs, n_grid, ks, m_max=4, samples=3, seed=1, threads=1):
    """Convergence sweep as a parsed dictionary."""
    return _json.loads(
        convergence_report_json(
            [str(q) for q in qs], n_grid, ks, m_max, samples, seed, threads
        )
    )
