# Copyright 2026  The DAEME Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
# KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
# WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
# MERCHANTABLITY OR NON-INFRINGEMENT.
# See the Apache 2 License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import daeme


def test_corpus_and_features():
    pairs = daeme.build_corpus({"n_train": 8, "n_test": 2, "duration_s": 0.5})
    assert len(pairs) == 10
    p = pairs[0]
    assert p["clean"].shape == p["noisy"].shape == (8000,)
    assert p["tag"]["speaker"] in ("A", "B")
    f = daeme.lps(p["noisy"])
    assert f.shape[1] == 257 and np.isfinite(f).all()


def test_metrics():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(48000) * 0.1
    assert daeme.si_sdr(x, x) == 60.0
    assert daeme.seg_snr(x, x) == 35.0
    assert daeme.stoi(x, x) == pytest.approx(1.0, abs=1e-6)
    r = daeme.paired_ttest([0.0] * 5, [1.0, 0.8, 1.2, 0.9, 1.1])
    assert r["t"] == pytest.approx(math.sqrt(200.0))
    assert r["significant"]
    with pytest.raises(daeme.Error):
        daeme.si_sdr(x, x[:-1])


def test_experiment_roundtrip(tmp_path):
    cfg = {
        "corpus": {"n_train": 16, "n_test": 24, "duration_s": 0.75},
        "tree": {"plan": "UAT2"},
        "component": {"arch": "DDAE", "n_layers": 1, "width": 16},
        "train": {"epochs": 1},
        "metrics": ["si_sdr"],
        "out_dir": str(tmp_path / "run"),
    }
    rep = daeme.run_experiment(cfg)
    sys_ = rep["systems"][0]
    assert sys_["name"] == "DAEME-UAT(2)-LR"
    assert len(sys_["tables"][0]["noises"]) == 2

    system = daeme.System.load_run(str(tmp_path / "run"))
    assert system.branch_count == 2
    noisy = daeme.build_corpus({"n_train": 8, "n_test": 1, "duration_s": 0.75})[-1]["noisy"]
    out = system.enhance(noisy)
    assert out.shape == noisy.shape and np.isfinite(out).all()

    system.save(str(tmp_path / "bundle"))
    again = daeme.System.load(str(tmp_path / "bundle"))
    assert again.encoder_digests == system.encoder_digests
    np.testing.assert_array_equal(again.enhance(noisy), out)


def test_config_errors():
    with pytest.raises(daeme.ConfigError):
        daeme.run_experiment({"unknown": 1})
