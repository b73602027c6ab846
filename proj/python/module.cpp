// python/module.cpp

// Copyright 2026  The DAEME Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.
// Structured values cross the boundary as JSON text; the package wrapper
// converts them to and from Python objects.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "daeme/corpus/corpus.hpp"
#include "daeme/dsp/stft.hpp"
#include "daeme/ensemble/ensemble.hpp"
#include "daeme/eval/metrics.hpp"
#include "daeme/eval/stats.hpp"
#include "daeme/experiment/experiment.hpp"

namespace py = pybind11;
using namespace daeme;
using nlohmann::json;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

corpus::Waveform to_wave(const Array& a, int rate) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-D sample array");
  corpus::Waveform w;
  w.samples.assign(a.data(), a.data() + a.size());
  w.sample_rate = rate;
  return w;
}

Array to_array(const std::vector<double>& v) {
  Array a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

Array to_array(const Matrix& m) {
  Array a({m.rows(), m.cols()});
  std::copy(m.data(), m.data() + m.size(), a.mutable_data());
  return a;
}

experiment::Stage stage_from(const std::string& s) {
  for (auto v : {experiment::Stage::Corpus, experiment::Stage::Tree, experiment::Stage::Components,
                 experiment::Stage::Decoder, experiment::Stage::Enhance, experiment::Stage::Metrics,
                 experiment::Stage::Tables})
    if (s == experiment::to_string(v)) return v;
  throw ConfigError("unknown stage '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_daeme, m) {
  m.doc() = "DAEME speech enhancement core";
  // Translators are tried newest first, so the base class goes first.
  auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<experiment::StageError>(m, "StageError", base.ptr());

  m.def(
      "lps",
      [](const Array& x, int rate) {
        dsp::StftConfig cfg;
        cfg.sample_rate = rate;
        return to_array(dsp::stft_analyze(to_wave(x, rate), cfg).first.frames);
      },
      py::arg("samples"), py::arg("sample_rate") = 16000, "T x 257 log-power spectrum");

  m.def(
      "stoi", [](const Array& c, const Array& p, int rate) { return eval::stoi(to_wave(c, rate), to_wave(p, rate)); },
      py::arg("clean"), py::arg("processed"), py::arg("sample_rate") = 16000);
  m.def(
      "si_sdr", [](const Array& c, const Array& p) { return eval::si_sdr(to_wave(c, 16000), to_wave(p, 16000)); },
      py::arg("clean"), py::arg("processed"));
  m.def(
      "seg_snr", [](const Array& c, const Array& p) { return eval::seg_snr(to_wave(c, 16000), to_wave(p, 16000)); },
      py::arg("clean"), py::arg("processed"));
  m.def(
      "paired_ttest_json",
      [](const std::vector<double>& a, const std::vector<double>& b, double alpha) {
        return eval::paired_ttest(a, b, alpha).to_json().dump();
      },
      py::arg("a"), py::arg("b"), py::arg("alpha") = 0.01);

  m.def(
      "build_corpus_json",
      [](const std::string& cfg) {
        const auto c = corpus::build_corpus(corpus::CorpusConfig::from_json(json::parse(cfg)));
        py::list out;
        for (const auto& p : c.pairs) {
          py::dict d;
          d["id"] = p.id;
          d["clean"] = to_array(p.clean.samples);
          d["noisy"] = to_array(p.noisy.samples);
          d["tag"] = corpus::tag_to_json(p.tag).dump();
          out.append(d);
        }
        return out;
      },
      py::arg("config_json"));

  m.def(
      "run_experiment_json",
      [](const std::string& cfg, bool resume, int jobs, const std::string& until) {
        experiment::RunOptions opt{resume, jobs, stage_from(until)};
        const auto c = experiment::ExperimentConfig::from_json(json::parse(cfg));
        py::gil_scoped_release release;
        return experiment::run_experiment(c, opt).to_json().dump();
      },
      py::arg("config_json"), py::arg("resume") = false, py::arg("jobs") = 1, py::arg("until") = "tables");
  m.def(
      "run_ablation_json",
      [](const std::string& suite, const std::string& cfg, bool resume, int jobs) {
        experiment::RunOptions opt{resume, jobs, experiment::Stage::Tables};
        const auto c = experiment::ExperimentConfig::from_json(json::parse(cfg));
        py::gil_scoped_release release;
        return experiment::run_ablation(experiment::suite_from_string(suite), c, opt).to_json().dump();
      },
      py::arg("suite"), py::arg("config_json"), py::arg("resume") = false, py::arg("jobs") = 1);

  py::class_<ensemble::DaemeSystem>(m, "System")
      .def_static(
          "load", [](const std::string& dir) { return ensemble::load_system(dir); }, py::arg("directory"))
      .def_static(
          "load_run",
          [](const std::string& dir) {
            ensemble::DaemeSystem s;
            s.encoder = ensemble::load_encoder(std::filesystem::path(dir) / "encoder");
            s.decoder = ensemble::load_decoder(std::filesystem::path(dir) / "decoder");
            return s;
          },
          py::arg("run_dir"), "system from an experiment output directory")
      .def("save", [](const ensemble::DaemeSystem& s, const std::string& d) { ensemble::save_system(s, d); })
      .def(
          "enhance",
          [](const ensemble::DaemeSystem& s, const Array& x) {
            return to_array(ensemble::enhance_utterance(s, to_wave(x, 16000)).samples);
          },
          py::arg("noisy"))
      .def_property_readonly("branch_count",
                             [](const ensemble::DaemeSystem& s) { return s.encoder.components.size(); })
      .def_property_readonly("decoder_kind",
                             [](const ensemble::DaemeSystem& s) { return std::string(to_string(s.decoder.kind)); })
      .def_property_readonly("encoder_digests",
                             [](const ensemble::DaemeSystem& s) { return ensemble::encoder_digests(s.encoder); });
}
