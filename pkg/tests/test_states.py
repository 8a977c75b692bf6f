import json

import numpy as np
import pytest

from sgadmem.states import (
    FAMILIES,
    StateValidationError,
    load_state,
    make_noisy,
    make_pure,
    save_state,
    validate,
)


def test_pure_families_are_projectors():
    for fam in FAMILIES:
        rho = make_pure(fam)
        assert rho.shape == (8, 8)
        assert abs(np.trace(rho) - 1.0) < 1e-14
        assert np.abs(rho @ rho - rho).max() < 1e-14


def test_ghz_families_and_w_pair_orthogonal():
    ghz = ["ghz1", "ghz2", "ghz3", "ghz4"]
    for i, f1 in enumerate(ghz):
        for f2 in ghz[i + 1:]:
            assert abs(np.trace(make_pure(f1) @ make_pure(f2)).real) < 1e-14
    assert abs(np.trace(make_pure("w") @ make_pure("wtilde")).real) < 1e-14


def test_pure_family_positions():
    ghz1 = make_pure("ghz1")
    assert abs(ghz1[0, 0] - 0.5) < 1e-15 and abs(ghz1[0, 7] - 0.5) < 1e-15
    ghz2 = make_pure("ghz2")
    assert abs(ghz2[1, 6] - 0.5) < 1e-15
    w = make_pure("w")
    for i in (1, 2, 4):
        assert abs(w[i, i] - 1.0 / 3.0) < 1e-15
    wt = make_pure("wtilde")
    for i in (3, 5, 6):
        assert abs(wt[i, i] - 1.0 / 3.0) < 1e-15


def test_make_noisy_ghz_example():
    rho = make_noisy("ghz1", alpha=0.5)
    assert abs(rho[0, 7] - 0.25) < 1e-15
    assert abs(rho[1, 1] - 0.0625) < 1e-15
    assert abs(np.trace(rho) - 1.0) < 1e-14


def test_make_noisy_w_example():
    rho = make_noisy("w", beta=0.4)
    # (1-beta) |W><W| + beta I/8
    assert abs(rho[1, 1] - (0.6 / 3.0 + 0.4 / 8.0)) < 1e-15
    assert abs(rho[0, 0] - 0.05) < 1e-15


def test_make_noisy_parameter_checks():
    with pytest.raises(ValueError):
        make_noisy("ghz1", beta=0.5)  # wrong knob for the family
    with pytest.raises(ValueError):
        make_noisy("w", alpha=0.5)
    with pytest.raises(ValueError):
        make_noisy("ghz1", alpha=1.5)
    with pytest.raises(ValueError):
        make_noisy("w", beta=-0.1)
    with pytest.raises(ValueError):
        make_pure("ghz5")


def test_validate_accepts_and_symmetrizes():
    rng = np.random.default_rng(0)
    g = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    h = g @ g.conj().T
    rho = h / np.trace(h).real
    out = validate(rho + 1e-13 * 1j * np.eye(8))
    assert np.abs(out - out.conj().T).max() == 0.0


def test_validate_collects_all_violations():
    bad = np.diag([0.5, 0.7, -0.2, 0, 0, 0, 0, 0]).astype(complex)
    bad[0, 1] = 0.3  # not hermitian either
    with pytest.raises(StateValidationError) as exc:
        validate(bad)
    text = str(exc.value)
    assert "hermitian" in text.lower()
    assert "eigenvalue" in text.lower()
    with pytest.raises(StateValidationError):
        validate(np.eye(8))  # trace 8


def test_save_load_roundtrip(tmp_path):
    rho = make_noisy("ghz3", alpha=0.7)
    path = tmp_path / "state.json"
    save_state(path, rho)
    back = load_state(path)
    assert np.abs(back - rho).max() < 1e-15


def test_load_family_spec_dict():
    rho = load_state({"family": "ghz1", "alpha": 0.5})
    assert np.abs(rho - make_noisy("ghz1", alpha=0.5)).max() < 1e-15
    rho = load_state({"family": "w"})
    assert np.abs(rho - make_pure("w")).max() < 1e-15


def test_load_matrix_dict_and_errors(tmp_path):
    rho = make_pure("ghz2")
    obj = {"dim": 8, "re": rho.real.tolist(), "im": rho.imag.tolist()}
    assert np.abs(load_state(obj) - rho).max() < 1e-15
    with pytest.raises((ValueError, StateValidationError, KeyError)):
        load_state({"dim": 8, "re": np.eye(8).tolist()[:4]})
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises((ValueError, json.JSONDecodeError)):
        load_state(p)
