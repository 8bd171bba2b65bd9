"""One test per exit criterion, each at its stated tolerance.

Every test records a ``[PASS]/[FAIL]`` line that conftest prints in the
terminal summary, so ``pytest -v`` ends with the full criterion table.
"""

import pytest

from chiralnet.acceptance import AcceptanceRun

import conftest


@pytest.fixture(scope="module")
def run():
    return AcceptanceRun()


def check(report):
    line = report.line()
    conftest.ACCEPTANCE_LINES.append(line)
    print(line)
    assert report.passed, f"{line}\n{report.detail}"
    return report


def test_c01_jacobi_triple_product(run):
    rep = check(run.c01_jacobi())
    assert rep.detail["runtime_s"] < 5


def test_c02_fixed_point_character(run):
    rep = check(run.c02_fixed_point_character())
    assert rep.detail["checks"] == 2 and rep.detail["runtime_s"] < 5


def test_c03_car_relations(run):
    rep = check(run.c03_car())
    # six half-integers with |n| <= 5/2: 36 pairs plus 6 adjoint checks
    assert rep.detail["checks"] == 36 + 6


def test_c04_current_algebra(run):
    rep = check(run.c04_current_algebra())
    assert rep.detail["checks"] == 49 + 5 * 6


def test_c05_linear_energy_bounds(run):
    rep = check(run.c05_energy_bounds())
    assert rep.measured <= 1 and rep.detail["checks"] == 9


def test_c06_twist_identity(run):
    check(run.c06_twist())


def test_c07_longo_witten_matrix(run):
    rep = check(run.c07_lw_matrix())
    assert rep.measured < 1e-12


def test_c08_causality(run):
    rep = check(run.c08_causality())
    assert rep.measured < 1e-4 and rep.detail["runtime_s"] < 10


def test_c09_one_particle_dichotomy(run):
    check(run.c09_one_particle_dichotomy())


def test_c10_elastic_exponential(run):
    rep = check(run.c10_elastic_exponential())
    assert rep.measured < 1e-6 and rep.detail["runtime_s"] < 30


def test_c11_collapse_and_bound(run):
    check(run.c11_collapse_and_bound())


def test_c12_particle_production(run):
    rep = check(run.c12_particle_production())
    assert rep.detail["runtime_s"] < 60


def test_c13_e0_projection(run):
    check(run.c13_e0_projection())
