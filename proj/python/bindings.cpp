// Copyright 2026 The lowlight-rppg Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <vector>

#include "rppg/error.hpp"
#include "rppg/hr.hpp"
#include "rppg/ingest.hpp"
#include "rppg/metrics.hpp"
#include "rppg/preprocess.hpp"
#include "rppg/reconstruct.hpp"
#include "rppg/selection.hpp"
#include "rppg/ssa.hpp"
#include "rppg/synth.hpp"

namespace py = pybind11;
using namespace rppg;

namespace {

using Series = std::vector<double>;

py::array_t<double> as_array(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

}  // namespace

PYBIND11_MODULE(lowlight_rppg, m) {
  m.doc() = "Low-light rPPG pulse extraction: detrending, SSA, spectral masking, fusion.";

  py::register_exception<Error>(m, "RppgError", PyExc_ValueError);

  py::class_<RawTrace>(m, "RawTrace")
      .def(py::init([](Eigen::MatrixXd samples, double fs, double t0) {
             RawTrace t;
             t.samples = std::move(samples);
             t.fs = fs;
             t.t0 = t0;
             validate(t);
             return t;
           }),
           py::arg("samples"), py::arg("fs"), py::arg("t0") = 0.0)
      .def_readwrite("samples", &RawTrace::samples)
      .def_readwrite("fs", &RawTrace::fs)
      .def_readwrite("t0", &RawTrace::t0)
      .def("__len__", &RawTrace::length)
      .def("green", [](const RawTrace& t) { return as_array(t.channel(kGreen)); });

  m.def("load_trace_csv", &load_trace_csv, py::arg("path"));
  m.def("save_trace_csv", &save_trace_csv, py::arg("path"), py::arg("trace"));

  m.def("detrend", [](const Series& x, double lambda) { return as_array(detrend(x, lambda)); },
        py::arg("series"), py::arg("lambda_") = kDefaultDetrendLambda);
  m.def(
      "bandpass",
      [](const Series& x, double fs, double low, double high, int order) {
        return as_array(bandpass(x, fs, {low, high, order}).samples);
      },
      py::arg("series"), py::arg("fs"), py::arg("low_hz") = 0.7, py::arg("high_hz") = 4.0,
      py::arg("order") = 3);
  m.def(
      "butterworth_bandpass",
      [](int order, double low, double high, double fs) {
        const IirCoefficients c = butterworth_bandpass(order, low, high, fs);
        return py::make_tuple(as_array(c.b), as_array(c.a));
      },
      py::arg("order"), py::arg("low_hz"), py::arg("high_hz"), py::arg("fs"));

  m.def("hankel_embed", [](const Series& x, std::size_t l) { return ssa::hankel_embed(x, l); },
        py::arg("series"), py::arg("window_length"));
  m.def("diagonal_average",
        [](const Eigen::MatrixXd& x) { return as_array(ssa::diagonal_average(x)); },
        py::arg("matrix"));
  m.def(
      "decompose",
      [](const Series& x, std::size_t l, std::size_t max_components) {
        const ssa::Decomposition d = ssa::decompose(x, l, max_components);
        py::list comps;
        for (const auto& c : d.components) comps.append(as_array(c));
        return py::make_tuple(comps, as_array(d.singular_values));
      },
      py::arg("series"), py::arg("window_length"), py::arg("max_components"),
      "Returns (components, singular_values).");

  m.def("dominant_frequency",
        [](const Series& x, double fs, double low, double high) {
          return dominant_frequency(x, fs, low, high);
        },
        py::arg("series"), py::arg("fs"), py::arg("low_hz") = 0.7, py::arg("high_hz") = 4.0);
  m.def(
      "mask_decision",
      [](double f_i, double f_r, double sigma) {
        const MaskDecision d = mask_decision(f_i, f_r, sigma);
        return py::make_tuple(d.accepted, std::string(to_string(d.reason)));
      },
      py::arg("f_i"), py::arg("f_r"), py::arg("sigma_fr"), "Returns (accepted, reason).");
  m.def("gaussian_weight",
        [](double f, double mu, double sigma) { return gaussian_weight(f, {mu, sigma}); },
        py::arg("f"), py::arg("mu"), py::arg("sigma"));
  m.def(
      "overlap_add",
      [](const std::vector<std::pair<std::size_t, Series>>& windows, std::size_t len,
         std::size_t hop) {
        std::vector<PlacedWindow> placed;
        for (const auto& [start, s] : windows) placed.push_back({start, s});
        return as_array(overlap_add(placed, len, hop));
      },
      py::arg("windows"), py::arg("window_length"), py::arg("hop") = 0,
      "windows: list of (start, samples).");

  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_readwrite("window_s", &PipelineConfig::window_s)
      .def_readwrite("step_s", &PipelineConfig::step_s)
      .def_readwrite("ssa_window", &PipelineConfig::ssa_window)
      .def_readwrite("sec_chn", &PipelineConfig::sec_chn)
      .def_readwrite("lambda_", &PipelineConfig::lambda)
      .def_readwrite("band_low_hz", &PipelineConfig::band_low_hz)
      .def_readwrite("band_high_hz", &PipelineConfig::band_high_hz)
      .def_readwrite("sigma_init", &PipelineConfig::sigma_init);

  py::class_<PulseWave>(m, "PulseWave")
      .def_property_readonly("samples", [](const PulseWave& p) { return as_array(p.samples); })
      .def_readonly("fs", &PulseWave::fs)
      .def_readonly("t0", &PulseWave::t0)
      .def("fallback_count", &PulseWave::fallback_count)
      .def("window_metadata_json", &window_metadata_json);

  m.def("run_pipeline", &run_pipeline, py::arg("trace"), py::arg("config") = PipelineConfig{});
  m.def("estimate_hr", [](const Series& x, double fs) { return estimate_hr(x, fs).bpm; },
        py::arg("pulse"), py::arg("fs"), "Heart rate in bpm.");
  m.def("snr_db", [](const Series& x, double fs, double hr) { return snr_db(x, fs, hr); },
        py::arg("signal"), py::arg("fs"), py::arg("hr_ref_bpm"));
  m.def("mae", [](const Series& e, const Series& r) { return mae(e, r); }, py::arg("est"),
        py::arg("ref"));
  m.def("rmse", [](const Series& e, const Series& r) { return rmse(e, r); }, py::arg("est"),
        py::arg("ref"));
  m.def(
      "spectrogram",
      [](const Series& x, double fs, double win_s, double hop_s, double max_hz) {
        const Spectrogram sg = spectrogram(x, fs, win_s, hop_s, max_hz);
        return py::make_tuple(as_array(sg.times), as_array(sg.frequencies), sg.power);
      },
      py::arg("series"), py::arg("fs"), py::arg("win_s") = 10.0, py::arg("hop_s") = 1.0,
      py::arg("max_hz") = 5.0, "Returns (times, frequencies, power[slice][bin]).");

  py::class_<SynthConfig>(m, "SynthConfig")
      .def(py::init<>())
      .def_static("from_json", &synth_config_from_json)
      .def("to_json", &synth_config_to_json)
      .def_readwrite("hr_bpm", &SynthConfig::hr_bpm)
      .def_readwrite("fs", &SynthConfig::fs)
      .def_readwrite("duration_s", &SynthConfig::duration_s)
      .def_readwrite("pulse_amp", &SynthConfig::pulse_amp)
      .def_readwrite("harmonic_ratio", &SynthConfig::harmonic_ratio)
      .def_readwrite("noise_rms", &SynthConfig::noise_rms)
      .def_readwrite("quantization_step", &SynthConfig::quantization_step)
      .def_readwrite("drift_amp", &SynthConfig::drift_amp)
      .def_readwrite("drift_hz", &SynthConfig::drift_hz)
      .def_readwrite("baseline", &SynthConfig::baseline)
      .def_readwrite("seed", &SynthConfig::seed);

  m.def("generate", &generate, py::arg("config"));
  m.def("illumination_sweep", [](const SynthConfig& base, const Series& levels) {
    return illumination_sweep(base, levels);
  }, py::arg("base"), py::arg("levels"));
}
