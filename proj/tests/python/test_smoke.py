"""End-to-end smoke tests of the python bindings."""

import math

import pytest

import aot

TOY_MU = [1 / 6] * 6
TOY_NU = [1 / 5] * 5
TOY_COST = [
    [-1, -1, 1, 1, 3],
    [-1, -1, 2, 1, 1],
    [-1, -1, 1, 1, 2],
    [2, 3, -1, -1, 1],
    [1, 1, -1, -1, 3],
    [1, 3, 2, 1, 2],
]


def test_exact_solver_reference_instance():
    report = aot.solve_aot_exact(TOY_MU, TOY_NU, TOY_COST)
    assert report["method"] == "aot-exact"
    assert report["mass"] == pytest.approx(11 / 15, abs=1e-9)
    assert report["objective"] == pytest.approx(-11 / 15, abs=1e-9)
    assert abs(report["duality_gap"]) <= 1e-7

    regions = aot.active_regions(report["plan"])
    assert regions["inactive_rows"] == [5]
    assert regions["inactive_cols"] == [4]

    audit = aot.check_mass_allocation(report["plan"], TOY_COST, TOY_MU, TOY_NU)
    assert audit["passed"]
    assert audit["positive_violations"] == []


def test_sinkhorn_approaches_exact_value():
    errors = []
    for eps in (0.1, 0.01, 0.001):
        report = aot.solve_aot_sinkhorn(TOY_MU, TOY_NU, TOY_COST, epsilon=eps)
        errors.append(abs(report["objective"] + 11 / 15))
        assert report["iterations"] > 0
    # 1e-12 slack: past eps = 0.01 the error sits at machine precision.
    assert errors[0] >= errors[1] - 1e-12
    assert errors[1] >= errors[2] - 1e-12
    assert errors[2] <= 1e-2


def test_duals_certify_the_primal():
    report = aot.solve_aot_exact(TOY_MU, TOY_NU, TOY_COST)
    check = aot.dual_report(
        report["phi"], report["psi"], TOY_COST, TOY_MU, TOY_NU, report["objective"]
    )
    assert check["feasible"]
    assert abs(check["gap"]) <= 1e-7
    assert all(v <= 0 for v in report["phi"])
    assert all(v <= 0 for v in report["psi"])

    semi = aot.semidual_value(report["phi"], TOY_COST, TOY_MU, TOY_NU)
    assert semi == pytest.approx(-11 / 15, abs=1e-7)


def test_pot_identity_on_the_reference_instance():
    lam = aot.lambda_c(TOY_COST)
    assert lam == pytest.approx(1.0)
    exact = aot.solve_aot_exact(TOY_MU, TOY_NU, TOY_COST)
    shifted = [[c + lam for c in row] for row in TOY_COST]
    pot = aot.solve_pot(TOY_MU, TOY_NU, shifted, mass=exact["mass"])
    assert pot["objective"] - lam * exact["mass"] == pytest.approx(
        exact["objective"], abs=1e-7
    )


def test_mass_curve_is_monotone():
    grid = [-4 + 8 * k / 19 for k in range(20)]
    curve = aot.mass_shift_curve(TOY_MU, TOY_NU, TOY_COST, grid)
    masses = [m for _, m, _ in curve]
    assert masses == sorted(masses)
    assert masses[0] == pytest.approx(0.0, abs=1e-12)
    assert masses[-1] == pytest.approx(1.0, abs=1e-9)


def test_kantorovich_ships_everything():
    report = aot.solve_kantorovich(TOY_MU, TOY_NU, TOY_COST)
    assert report["method"] == "ot"
    assert report["mass"] == pytest.approx(1.0, abs=1e-12)
    assert report["objective"] >= -11 / 15 - 1e-9


def test_transform_is_the_tightest_partner():
    psi = aot.transform([0.0] * 6, TOY_COST, side="row-to-col")
    assert psi == pytest.approx([-1, -1, -1, -1, 1])


def test_validation_errors_surface_as_value_error():
    with pytest.raises(ValueError):
        aot.solve_aot_exact([-0.5, 0.5], TOY_NU, TOY_COST)
    with pytest.raises(ValueError):
        aot.solve_aot_exact(TOY_MU, TOY_NU, [[1, 2], [3, 4]])


def test_alignment_smoke():
    result = aot.run_alignment(
        per_class=40,
        shift_vector=[2.0, 0.0],
        rotation_angle=math.radians(30),
        outlier_fraction=0.1,
        seed=7,
        iterations=20,
    )
    assert 0.0 <= result["target_accuracy_aot"] <= 1.0
    assert 0.0 <= result["target_accuracy_source_only"] <= 1.0
    assert len(result["mass_history"]) == 20
    assert all(0.0 <= m <= 1.0 + 1e-9 for m in result["mass_history"])
