import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qetlab.qmatrix import expval
from qetlab.xymodel import (ModelParams, build_hamiltonian, eigenstate, ground_state,
                            spectral_data, thermal_state)
from oracle import gibbs, hamiltonian


def test_hamiltonian_matches_literal():
    for B, a, eps in ((0.5, 1.0, 0.0), (1.0, 0.6, 1.0), (0.0, 2.0, -0.3)):
        assert_allclose(build_hamiltonian(ModelParams(B, a, epsilon=eps)), hamiltonian(B, a, eps),
                        atol=1e-15)


def test_field_only_hamiltonian():
    # alpha is required to be positive, so remove the hopping part by hand
    h = build_hamiltonian(ModelParams(1.0, 1e-300))
    assert_allclose(np.diag(h).real, [1, 0, 0, -1])


def test_level_table():
    sd = spectral_data(ModelParams(0.5, 1.0, 0.5))
    energies = {lv.label: lv.energy for lv in sd.levels}
    assert energies == pytest.approx({"00": -0.5, "11": 0.5, "+": 1.0, "-": -1.0}, abs=1e-15)
    assert sd.ground_labels == ("-",)
    assert sum(sd.thermal_weights.values()) == pytest.approx(1.0, abs=1e-15)


def test_partition_function(oracle_values):
    for rec in oracle_values["thermal"]:
        sd = spectral_data(ModelParams(rec["B"], rec["alpha"], rec["T"]))
        assert sd.partition_function == pytest.approx(rec["Z"], rel=1e-13)


def test_ground_regimes():
    assert spectral_data(ModelParams(2.0, 1.0)).ground_labels == ("00",)
    assert spectral_data(ModelParams(1.0, 1.0)).degenerate_ground
    with pytest.raises(ValueError, match="degenerate"):
        ground_state(ModelParams(1.0, 1.0))
    # the "00" level is sigma_z = -1 on both qubits
    assert_allclose(ground_state(ModelParams(2.0, 1.0)).data[3, 3], 1.0)


def test_thermal_state_matches_expm(oracle_values):
    for rec in oracle_values["thermal"]:
        params = ModelParams(rec["B"], rec["alpha"], rec["T"])
        assert_allclose(thermal_state(params).data.real, rec["rho_real"], atol=1e-13)


def test_thermal_state_ignores_offset():
    a = thermal_state(ModelParams(0.7, 0.4, 0.9))
    b = thermal_state(ModelParams(0.7, 0.4, 0.9, epsilon=5.0))
    assert_allclose(a.data, b.data, atol=1e-14)


def test_thermal_limits():
    cold = thermal_state(ModelParams(0.5, 1.0, 1e-3))
    assert expval(cold, eigenstate("-")) == pytest.approx(1.0, abs=1e-12)
    hot = thermal_state(ModelParams(0.5, 1.0, 1e6))
    assert_allclose(hot.data, np.eye(4) / 4, atol=1e-6)
    # extreme beta: weights stay finite
    frozen = thermal_state(ModelParams(20.0, 1.0, 0.01))
    assert_allclose(frozen.data, gibbs(20.0, 1.0, 0.01), atol=1e-14)


@pytest.mark.parametrize("kwargs", [dict(B=-1, alpha=1), dict(B=1, alpha=0),
                                    dict(B=1, alpha=1, temperature=0),
                                    dict(B=1, alpha=1, temperature=-2),
                                    dict(B=math.nan, alpha=1),
                                    dict(B=1, alpha=1, temperature=1e-320)])
def test_invalid_params(kwargs):
    with pytest.raises(ValueError):
        ModelParams(**kwargs)


def test_pure_params_have_no_beta():
    with pytest.raises(ValueError):
        ModelParams(1.0, 1.0).beta


def test_regime():
    assert ModelParams(0.5, 1).regime == "entangled"
    assert ModelParams(2, 1).regime == "product"
    assert ModelParams(1, 1).regime == "critical"
