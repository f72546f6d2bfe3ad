import json
import math

import numpy as np
import pytest

import superint


def test_energies():
    assert superint.energy_v1(1.0, 0.0, 1.5, "+", 0) == pytest.approx(3.5)
    assert superint.energy_v2(1.0, 1.5, 1.5, "+", "+", 1) == pytest.approx(7.0)


def test_parabolic_level_one():
    lam = sorted(superint.parabolic_separation_constants(1.0, 0.0, 1.5, "+", 1))
    assert lam == pytest.approx([-math.sqrt(40.0), math.sqrt(40.0)], rel=1e-12)


def test_niven_matches_determinant():
    det = sorted(superint.parabolic_separation_constants(1.0, 1.0, 1.5, "+", 4))
    niv = superint.niven_lambdas(1.0, 1.0, 1.5, "+", 4)
    assert niv == pytest.approx(det, rel=1e-9)


def test_solutions_carry_node_splits():
    sols = superint.solve_parabolic(1.0, 0.0, 1.5, "+", 2)
    assert [s["q1"] for s in sols] == [0, 1, 2]
    assert sols[1]["zeros"] == pytest.approx([-math.sqrt(3.5), math.sqrt(3.5)], rel=1e-12)


def test_elliptic_zero_distance():
    lam = sorted(superint.elliptic_separation_constants(1.0, 1.5, 1.5, "+", "+", 1, 0.0))
    assert lam == pytest.approx([-36.0, -16.0])


def test_interbasis_is_orthogonal():
    w = superint.interbasis_matrix(1.0, 1.5, "+", 2)
    assert np.allclose(w @ w.T, np.eye(3), atol=1e-8)


def test_branch_rule():
    with pytest.raises(superint.BranchError):
        superint.energy_v1(1.0, 0.0, 0.75, "-", 0)


def test_cli_round_trip():
    code, out, err = superint.run_cli(["spectrum", "--n", "1"])
    assert code == 0, err
    data = json.loads(out)
    assert len(data["states"]) == 2
    code, _, err = superint.run_cli(["spectrum", "--k2", "0.75", "--sign2", "-"])
    assert code == 2
    assert "1/2" in err
