import numpy as np
import pytest

from svkit.cases import CaseSpec, manufactured_case
from svkit.exceptions import UnknownCaseError


@pytest.mark.parametrize("case_id", ["example1", "example2", 1, 2, "1", "2"])
def test_lookup(case_id):
    case = manufactured_case(case_id)
    assert isinstance(case, CaseSpec)
    assert case.t_final == pytest.approx(np.pi / 2)


def test_unknown_case():
    with pytest.raises(UnknownCaseError):
        manufactured_case("example3")


@pytest.mark.parametrize("case_id", ["example1", "example2"])
def test_source_consistency_at_random_samples(case_id):
    # g is its own closed form; the advection residual must vanish to roundoff
    case = manufactured_case(case_id)
    rng = np.random.default_rng(12)
    x = rng.uniform(0.0, 2 * np.pi, 100)
    t = rng.uniform(0.0, case.t_final, 100)
    resid = case.residual(x, t)
    assert np.max(np.abs(resid)) < 1e-12


@pytest.mark.parametrize("case_id", ["example1", "example2"])
def test_derivatives_match_finite_differences(case_id):
    case = manufactured_case(case_id)
    rng = np.random.default_rng(3)
    x = rng.uniform(0.1, 6.0, 50)
    t = rng.uniform(0.0, 1.5, 50)
    eps = 1e-6
    fd_t = (case.u_exact(x, t + eps) - case.u_exact(x, t - eps)) / (2 * eps)
    fd_x = (case.u_exact(x + eps, t) - case.u_exact(x - eps, t)) / (2 * eps)
    fd_a = (case.alpha(x + eps) - case.alpha(x - eps)) / (2 * eps)
    assert np.max(np.abs(fd_t - case.u_t(x, t))) < 1e-7
    assert np.max(np.abs(fd_x - case.u_x(x, t))) < 1e-7
    assert np.max(np.abs(fd_a - case.alpha_dx(x))) < 1e-7


def test_example1_source_values():
    case = manufactured_case(1)
    # at (0, 0): u_t = -1, alpha' u = 1, alpha u_x = 0
    assert case.source(np.array([0.0]), 0.0)[0] == pytest.approx(0.0, abs=1e-15)


def test_example2_source_values():
    case = manufactured_case(2)
    # at (pi/2, 0): u_t = 0, alpha' = 0, u_x = 0
    assert case.source(np.array([np.pi / 2]), 0.0)[0] == pytest.approx(0.0, abs=1e-13)


def test_initial_data_matches_exact_solution():
    for cid in ("example1", "example2"):
        case = manufactured_case(cid)
        x = np.linspace(0, 2 * np.pi, 11)
        np.testing.assert_allclose(case.u0(x), case.u_exact(x, 0.0), rtol=1e-14)


def test_without_source():
    case = manufactured_case(1).without_source()
    assert case.source is None
    assert case.case_id.endswith("-free")
