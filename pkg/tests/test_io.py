import numpy as np
import pytest

from kautzid import io
from kautzid.kautz import PoleSet
from kautzid.prony import TrainingEnsemble
from kautzid.signals import FrequencyResponse, ImpulseResponse


def test_fmt():
    assert io.fmt("a") == "a"
    assert io.fmt(np.int64(3)) == "3"
    assert io.fmt(0.1) == "0.1"
    assert float(io.fmt(np.float64(1 / 3))) == 1 / 3


def test_impulse_response_round_trip(tmp_path):
    ir = ImpulseResponse(np.random.default_rng(0).normal(size=50), 512.0)
    io.write_impulse_response_csv(tmp_path / "h.csv", ir)
    back = io.read_impulse_response_csv(tmp_path / "h.csv")
    assert back.sample_rate_hz == 512.0
    assert np.array_equal(back.samples, ir.samples)


def test_impulse_response_needs_rate(tmp_path):
    (tmp_path / "h.csv").write_text("k,value\n0,1.0\n")
    with pytest.raises(ValueError, match="sample_rate_hz"):
        io.read_impulse_response_csv(tmp_path / "h.csv")


def test_impulse_response_index_checked(tmp_path):
    (tmp_path / "h.csv").write_text("# sample_rate_hz=10\nk,value\n0,1.0\n2,1.0\n")
    with pytest.raises(ValueError, match="index"):
        io.read_impulse_response_csv(tmp_path / "h.csv")


def test_frf_round_trip(tmp_path):
    f = np.linspace(0, 250, 11)
    frf = FrequencyResponse(f, np.exp(1j * f / 40) / (1 + f))
    io.write_frf_csv(tmp_path / "f.csv", frf)
    back = io.read_frf_csv(tmp_path / "f.csv")
    assert np.array_equal(back.frequencies_hz, f)
    assert np.array_equal(back.values, frf.values)


def test_missing_column(tmp_path):
    (tmp_path / "f.csv").write_text("frequency_hz,real\n0,1\n")
    with pytest.raises(ValueError, match="imag"):
        io.read_frf_csv(tmp_path / "f.csv")


def test_poles_round_trip(tmp_path):
    poles = PoleSet.from_complex([0.5 + 0.5j, 0.1 + 0.7j], order=12, method="prony")
    io.write_poles_csv(tmp_path / "p.csv", poles)
    back = io.read_poles_csv(tmp_path / "p.csv")
    assert np.array_equal(back.as_array(), poles.as_array())
    assert back.provenance["method"] == "prony"
    assert back.provenance["order"] == "12"


def test_ensemble_dir_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    ens = TrainingEnsemble.from_arrays([rng.normal(size=20) for _ in range(12)], 500.0)
    io.write_ensemble_dir(tmp_path, ens)
    back = io.read_ensemble_dir(tmp_path)
    assert len(back) == 12
    # zero-padded names keep file order equal to ensemble order
    for a, b in zip(ens.responses, back.responses):
        assert np.array_equal(a.samples, b.samples)


def test_empty_dir(tmp_path):
    with pytest.raises(ValueError, match="no impulse-response"):
        io.read_ensemble_dir(tmp_path)


def test_weights_and_history(tmp_path):
    io.write_weights_csv(tmp_path / "w.csv", [1.5, -2.0])
    io.write_error_history_csv(tmp_path / "e.csv", [0.25])
    assert (tmp_path / "w.csv").read_text() == "index,value\n0,1.5\n1,-2.0\n"
    assert (tmp_path / "e.csv").read_text() == "k,e_k\n0,0.25\n"
