import csv
import io

import numpy as np
import pytest

from leonard_bethe.errors import DomainError
from leonard_bethe.verify import (
    Tolerances,
    multiset_distance,
    racah_table,
    run_suite,
    scalar_sweep,
    scalar_sweep_csv,
)


def test_multiset_distance():
    assert multiset_distance([1, 2], [2, 1]) == 0
    assert multiset_distance([1], [1, 2]) == np.inf
    assert multiset_distance([], []) == 0
    assert multiset_distance([1.0, 2.0], [1.0, 2.2]) == pytest.approx(0.2 / 2.2)


def test_uniform_tolerances():
    assert set(vars(Tolerances.uniform(1e-5)).values()) == {1e-5}
    with pytest.raises(DomainError):
        Tolerances.uniform(0)


def test_unknown_suite(half):
    with pytest.raises(DomainError):
        run_suite(half, "nope")


@pytest.mark.parametrize("suite", ["triple", "scalar", "bs", "racah"])
def test_suites_pass_at_spin_half(half, suite):
    rep = run_suite(half, suite)
    assert rep.passed, rep.to_pretty()


def test_all_is_union(half):
    rep = run_suite(half, "all")
    prefixes = {c.name.split("/")[0] for c in rep.checks}
    assert prefixes == {"triple", "scalar", "bs", "racah"}
    assert rep.passed


def test_tiny_tolerance_fails(half):
    assert not run_suite(half, "triple", Tolerances.uniform(1e-30)).passed


def test_sweep_is_reproducible(half):
    a = scalar_sweep(half, seed=4, draws=5)
    b = scalar_sweep(half, seed=4, draws=5)
    assert scalar_sweep_csv(a) == scalar_sweep_csv(b)
    rows = list(csv.DictReader(io.StringIO(scalar_sweep_csv(a))))
    assert len(rows) == 5 and "theorem_value_re" in rows[0]
    assert all(float(r["residual"]) < 1e-8 for r in rows)


def test_racah_table_columns(half):
    rows = racah_table(half)
    assert len(rows) == 4
    closed = [r for r in rows if "closed_form" in r]
    assert [(r["M"], r["N"]) for r in closed] == [(1, 1)]
    for r in rows:
        for key in ("hom_decomposition", "inhom_decomposition", "linear_system"):
            assert abs(r[key] - r["phi43"]) < 1e-8 * abs(r["phi43"])
