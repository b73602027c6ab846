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

"""DAEME: decision-tree-guided ensemble of denoising models with a fusion decoder."""

import json as _json

from . import _daeme
from ._daeme import ConfigError, Error, StageError, System, lps, seg_snr, si_sdr, stoi

__all__ = [
    "ConfigError", "Error", "StageError", "System", "build_corpus", "lps", "paired_ttest",
    "run_ablation", "run_experiment", "seg_snr", "si_sdr", "stoi",
]


def paired_ttest(a, b, alpha=0.01):
    """One-sided dependent t-test of b > a."""
    return _json.loads(_daeme.paired_ttest_json(list(a), list(b), alpha))


def build_corpus(config=None):
    """Synthesize the paired corpus; returns dicts with id, clean, noisy, tag."""
    pairs = _daeme.build_corpus_json(_json.dumps(config or {}))
    for p in pairs:
        p["tag"] = _json.loads(p["tag"])
    return pairs


def run_experiment(config, resume=False, jobs=1, until="tables"):
    """Run the staged pipeline; returns the report as a dict."""
    return _json.loads(_daeme.run_experiment_json(_json.dumps(config), resume, jobs, until))


def run_ablation(suite, config, resume=False, jobs=1):
    return _json.loads(_daeme.run_ablation_json(suite, _json.dumps(config), resume, jobs))
