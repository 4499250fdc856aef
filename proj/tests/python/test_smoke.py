import json

import numpy as np
import pytest

import dnls

L = 64.0
N = 256


def gaussian(x, amp, width, center=0.0):
    return (amp * np.exp(-0.5 * ((x - center) / width) ** 2)).astype(complex)


def test_transform_round_trip_and_plancherel():
    x, xi = dnls.grid_nodes(N, L)
    assert len(x) == N and np.all(np.diff(xi) > 0)
    rng = np.random.default_rng(3)
    u = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    s = dnls.forward_transform(u, L)
    assert np.max(np.abs(dnls.inverse_transform(s, L) - u)) < 1e-12
    dx, dxi = L / N, xi[1] - xi[0]
    assert np.sum(np.abs(u) ** 2) * dx == pytest.approx(np.sum(np.abs(s) ** 2) * dxi, rel=1e-12)


def test_free_flow_of_gaussian_matches_closed_form():
    x, _ = dnls.grid_nodes(N, L)
    t = 0.7
    u = dnls.free_propagate(gaussian(x, 1.0, 1.0), L, t)
    exact = np.exp(-(x**2) / (2 * (1 + 1j * t))) / np.sqrt(1 + 1j * t)
    assert np.max(np.abs(u - exact)) < 1e-10


def test_run_keeps_mass_difference_and_dissipates():
    x, _ = dnls.grid_nodes(N, L)
    u1, u2 = gaussian(x, 0.8, 1.5, -1.0), gaussian(x, 0.5, 2.0, 1.0)
    cps = dnls.run(u1, u2, L, t_end=2.0, checkpoints=[1.0, 2.0])
    assert [c["t"] for c in cps] == [0.0, 1.0, 2.0]
    d0 = cps[0]["ledger"]["diff"]
    for c in cps:
        assert abs(c["ledger"]["diff"] - d0) <= 1e-10 * cps[0]["ledger"]["total"]
    assert cps[-1]["ledger"]["total"] < cps[0]["ledger"]["total"]


def test_profiles_of_free_solution_are_stationary():
    x, _ = dnls.grid_nodes(N, L)
    u = gaussian(x, 0.3, 1.0)
    t = 3.0
    a1, _ = dnls.extract_profiles(dnls.free_propagate(u, L, t), u, L, t)
    assert np.max(np.abs(a1 - dnls.forward_transform(u, L))) < 1e-12


def test_reduced_flow_conserves_modulus_difference():
    a1, a2 = dnls.reduced_flow(0.5 + 0.1j, 0.3j, 2.0, 100.0)
    assert abs(a1) ** 2 - abs(a2) ** 2 == pytest.approx(0.26 - 0.09, rel=1e-12)
    assert abs(a2) < 0.3


def test_checkpoint_round_trip(tmp_path):
    rng = np.random.default_rng(9)
    u1 = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    u2 = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    path = str(tmp_path / "c.bin")
    dnls.write_checkpoint(path, u1, u2, L, 1.5)
    back = dnls.read_checkpoint(path)
    assert back["t"] == 1.5 and back["length"] == L
    assert np.array_equal(back["u1"], u1) and np.array_equal(back["u2"], u2)
    with open(path, "r+b") as f:
        f.seek(8)
        f.write((7).to_bytes(8, "little"))
    with pytest.raises(dnls.FormatError, match="version"):
        dnls.read_checkpoint(path)


def test_quick_pipeline_and_config_errors(tmp_path):
    r = dnls.simulate(preset="quick", out=str(tmp_path / "q"), deterministic=True)
    assert r["exit_code"] == 0
    assert r["summary"]["ledger"]["conservation_ok"]
    manifest = json.loads((tmp_path / "q" / "manifest.json").read_text())
    assert "ledger.csv" in manifest["files"]
    with pytest.raises(dnls.ConfigError):
        dnls.simulate(preset="no-such-preset")
    cfg = dnls.preset_config("quick")
    cfg["bogus"] = 1
    with pytest.raises(dnls.ConfigError, match="bogus"):
        dnls.simulate(config_json=json.dumps(cfg))


def test_lemma_certificates_all_pass():
    lm, lo = dnls.lemma_certificates()
    assert len(lm) > 0 and all(e["pass"] for e in lm)
    assert len(lo) > 0 and all(e["pass"] for e in lo)
