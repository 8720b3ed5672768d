// Copyright 2026 The irtrecon Authors. All Rights Reserved.
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


#ifndef IRTRECON_CLI_HPP_
#define IRTRECON_CLI_HPP_

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "irtrecon/error.hpp"
#include "irtrecon/heatmap.hpp"
#include "irtrecon/irt.hpp"
#include "irtrecon/json_io.hpp"
#include "irtrecon/matdec.hpp"
#include "irtrecon/metrics.hpp"
#include "irtrecon/response_matrix.hpp"
#include "irtrecon/svd.hpp"
#include "irtrecon/synth.hpp"

// Subcommand implementations behind tools/irtrecon. Each writes its
// artifacts under an output directory and logs one line per stage.
namespace irtrecon::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kUsage = 2, kInput = 3, kNumerical = 4 };

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const DegenerateDataError*>(&e) || dynamic_cast<const DivergenceError*>(&e) ||
      dynamic_cast<const EmptyMaskError*>(&e)) {
    return kNumerical;
  }
  if (dynamic_cast<const ParameterError*>(&e) || dynamic_cast<const ShapeError*>(&e)) {
    return kUsage;
  }
  return kInput;
}

struct IrtOptions {
  Index quad_points = 31;
  double quad_span = 4.0;
  int max_iter = 200;
  double tol = 1e-4;
};

struct MatDecOptions {
  std::optional<double> mu;
  // Unset: 0 for k <= 3, the library default above that.
  std::optional<double> reg_u;
  std::optional<double> reg_v;
  int max_epochs = 20000;
  double tol = 1e-5;
  std::uint64_t seed = 0;
};

struct RunManifest {
  std::vector<metrics::Method> methods;
  std::vector<Index> ks{1, 2, 3};
  IrtOptions irt;
  MatDecOptions matdec;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

inline void write_json(const std::filesystem::path& path, const Json& j) {
  write_file(path, j.dump(2) + "\n");
}

inline void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ostringstream out;
  save_csv(out, m);
  write_file(path, out.str());
}

inline void write_response_csv(const std::filesystem::path& path, const ResponseMatrix& m) {
  write_file(path, to_csv(m));
}

inline void write_heatmap(const std::filesystem::path& path, const Matrix& values,
                          const Mask& observed) {
  std::ostringstream out(std::ios::binary);
  write_pgm(out, values, observed);
  write_file(path, out.str());
}

inline void write_heatmap(const std::filesystem::path& path, const Matrix& values) {
  write_heatmap(path, values, Mask::Constant(values.rows(), values.cols(), true));
}

inline std::string method_slug(metrics::Method m) {
  switch (m) {
    case metrics::Method::kSvd: return "svd";
    case metrics::Method::kMatDec: return "matdec";
    case metrics::Method::kIrt: return "irt";
  }
  return "unknown";
}

inline metrics::Method parse_method(const std::string& name) {
  if (name == "svd") return metrics::Method::kSvd;
  if (name == "matdec") return metrics::Method::kMatDec;
  if (name == "irt") return metrics::Method::kIrt;
  throw ParameterError("unknown method '" + name + "' (expected svd, matdec or irt)");
}

inline std::string reconstruction_stem(metrics::Method m, std::optional<Index> k) {
  std::string stem = method_slug(m);
  if (k) stem += "_" + std::to_string(*k);
  return stem;
}

inline matdec::MatDecConfig matdec_config(const MatDecOptions& o, Index k) {
  matdec::MatDecConfig c;
  c.k = k;
  c.learning_rate = o.mu;
  const double fallback = k <= 3 ? 0.0 : matdec::MatDecConfig{}.reg_u;
  c.reg_u = o.reg_u.value_or(fallback);
  c.reg_v = o.reg_v.value_or(fallback);
  c.max_epochs = o.max_epochs;
  c.tolerance = o.tol;
  c.seed = o.seed;
  return c;
}

inline irt::EmConfig em_config(const IrtOptions& o) {
  irt::EmConfig c;
  c.max_iterations = o.max_iter;
  c.tolerance = o.tol;
  return c;
}

// Writes S_<stem>.csv and T_<stem>.csv.
inline void write_reconstruction(const std::filesystem::path& dir, const std::string& stem,
                                 const Matrix& s) {
  write_matrix_csv(dir / ("S_" + stem + ".csv"), s);
  write_response_csv(dir / ("T_" + stem + ".csv"), binarize(s).matrix());
}

struct IrtRun {
  irt::IrtModel model;
  irt::FitReport report;
  Matrix reconstruction;
};

inline IrtRun run_irt(const ResponseMatrix& a, const IrtOptions& o, std::ostream& log) {
  const auto grid = irt::standard_normal_grid(o.quad_points, o.quad_span);
  auto [model, report] = irt::fit(a, grid, em_config(o));
  log << "[irt] " << report.iterations << " EM iterations, log-likelihood "
      << report.log_likelihood << (report.converged ? "" : " (warning: not converged)") << "\n";
  Matrix s = irt::reconstruct(model).values();
  return {std::move(model), std::move(report), std::move(s)};
}

// --- fit-irt -------------------------------------------------------------

inline IrtRun cmd_fit_irt(const std::string& input, const IrtOptions& o,
                          const std::filesystem::path& out, std::ostream& log) {
  const ResponseMatrix a = load_csv_file(input);
  log << "[load] " << a.rows() << " x " << a.cols() << ", " << a.observed_count()
      << " observed cells\n";
  IrtRun run = run_irt(a, o, log);
  write_json(out / "model.json", irt::to_json(run.model));
  write_json(out / "report.json", irt::to_json(run.report));
  write_reconstruction(out, "irt", run.reconstruction);
  log << "[write] " << out.string() << "\n";
  return run;
}

// --- lowrank -------------------------------------------------------------

inline void cmd_lowrank(const std::string& input, metrics::Method method,
                        const std::vector<Index>& ks, const MatDecOptions& o,
                        const std::filesystem::path& out, std::ostream& log) {
  if (method == metrics::Method::kIrt) {
    throw ParameterError("lowrank supports --method svd or matdec");
  }
  if (ks.empty()) throw ParameterError("lowrank needs at least one --k");
  for (Index k : ks) {
    if (k < 1) throw ParameterError("k values must be >= 1");
  }
  const ResponseMatrix a = load_csv_file(input);
  log << "[load] " << a.rows() << " x " << a.cols() << ", " << a.observed_count()
      << " observed cells\n";
  if (method == metrics::Method::kSvd) {
    const auto f = svd::decompose(a);
    log << "[svd] rank " << f.rank() << "\n";
    write_json(out / "factors_svd.json", svd::to_json(f));
    for (Index k : ks) write_reconstruction(out, reconstruction_stem(method, k), svd::truncate(f, k));
  } else {
    for (Index k : ks) {
      auto [f, report] = matdec::fit(a, matdec_config(o, k));
      log << "[matdec] k=" << k << " " << report.epochs << " epochs, W " << report.objective
          << (report.converged ? "" : " (warning: not converged)") << "\n";
      const auto stem = reconstruction_stem(method, k);
      write_json(out / ("factors_" + stem + ".json"), matdec::to_json(f));
      write_json(out / ("report_" + stem + ".json"), matdec::to_json(report));
      write_reconstruction(out, stem, matdec::reconstruct(f));
    }
  }
  log << "[write] " << out.string() << "\n";
}

// --- compare -------------------------------------------------------------

// Runs every requested method. SVD is skipped (with a log line) on an
// incomplete matrix, leaving its rows absent from the table.
inline std::vector<metrics::Reconstruction> run_methods(const ResponseMatrix& a,
                                                        const RunManifest& manifest,
                                                        std::ostream& log) {
  if (manifest.methods.empty()) throw ParameterError("no methods requested");
  std::vector<metrics::Reconstruction> recs;
  for (metrics::Method method : manifest.methods) {
    if (method != metrics::Method::kIrt && manifest.ks.empty()) {
      throw ParameterError("svd and matdec need at least one k");
    }
  }
  for (Index k : manifest.ks) {
    if (k < 1) throw ParameterError("k values must be >= 1");
  }
  for (metrics::Method method : manifest.methods) {
    switch (method) {
      case metrics::Method::kSvd: {
        if (!a.complete()) {
          log << "[svd] skipped: matrix is incomplete (matdec covers this case)\n";
          break;
        }
        const auto f = svd::decompose(a);
        log << "[svd] rank " << f.rank() << "\n";
        for (Index k : manifest.ks) recs.push_back({method, k, svd::truncate(f, k)});
        break;
      }
      case metrics::Method::kMatDec:
        for (Index k : manifest.ks) {
          auto [f, report] = matdec::fit(a, matdec_config(manifest.matdec, k));
          log << "[matdec] k=" << k << " " << report.epochs << " epochs"
              << (report.converged ? "" : " (warning: not converged)") << "\n";
          recs.push_back({method, k, matdec::reconstruct(f)});
        }
        break;
      case metrics::Method::kIrt:
        recs.push_back({method, std::nullopt, run_irt(a, manifest.irt, log).reconstruction});
        break;
    }
  }
  return recs;
}

inline std::string table_text(const metrics::ComparisonTable& table) {
  std::string text = metrics::format_table(table);
  const auto low = table.complete ? metrics::Method::kSvd : metrics::Method::kMatDec;
  std::string order = metrics::ordering_line(table, low);
  if (order.empty() && table.complete) order = metrics::ordering_line(table, metrics::Method::kMatDec);
  if (!order.empty()) text += order + "\n";
  return text;
}

inline metrics::ComparisonTable compare_matrix(const ResponseMatrix& a, const std::string& label,
                                               const RunManifest& manifest,
                                               const std::filesystem::path& out,
                                               std::ostream& log) {
  const auto recs = run_methods(a, manifest, log);
  const auto table = metrics::compare(a, recs, label);
  write_json(out / "table.json", metrics::to_json(table));
  write_file(out / "table.txt", table_text(table));
  return table;
}

inline metrics::ComparisonTable cmd_compare(const std::string& input, const RunManifest& manifest,
                                            const std::filesystem::path& out, std::ostream& log) {
  if (manifest.methods.empty()) throw ParameterError("no methods requested");
  const ResponseMatrix a = load_csv_file(input);
  log << "[load] " << a.rows() << " x " << a.cols() << ", " << a.observed_count()
      << " observed cells\n";
  auto table = compare_matrix(a, std::filesystem::path(input).filename().string(), manifest, out, log);
  log << "[write] " << out.string() << "\n";
  return table;
}

// --- mask / synth / heatmap ------------------------------------------------

inline ResponseMatrix cmd_mask(const std::string& input, double ratio, std::uint64_t seed,
                               const std::filesystem::path& out, std::ostream& log) {
  const ResponseMatrix masked = mask_random(load_csv_file(input), ratio, seed);
  write_response_csv(out / "masked.csv", masked);
  log << "[mask] " << (masked.rows() * masked.cols() - masked.observed_count())
      << " null cells written to " << (out / "masked.csv").string() << "\n";
  return masked;
}

inline synth::Sample cmd_synth(const synth::SynthConfig& config, const std::filesystem::path& out,
                               std::ostream& log) {
  auto sample = synth::generate(config);
  write_response_csv(out / "observed.csv", sample.data);
  write_json(out / "truth.json", irt::to_json(sample.truth));
  log << "[synth] " << config.m << " x " << config.n << " seed " << config.seed << "\n";
  return sample;
}

inline void cmd_heatmap(const std::string& input, const std::filesystem::path& out) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw Error("cannot open " + input);
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  const auto [values, observed] = detail::parse_grid(text);
  write_heatmap(out, values, observed);
}

// --- pipeline --------------------------------------------------------------

struct PipelineOptions {
  std::optional<std::string> input;  // synthesized when empty
  Index m = 216;
  Index n = 31;
  std::uint64_t seed = 1;
  double mask_ratio = 0.1;
  std::vector<Index> ks;  // empty: {1, 2, 3, 10, n}
  IrtOptions irt;
  MatDecOptions matdec;
};

// Examinee x item shapes of twelve classroom exams.
inline const std::vector<std::pair<Index, Index>>& exam_shapes() {
  static const std::vector<std::pair<Index, Index>> shapes{
      {216, 31}, {215, 36}, {68, 42},  {45, 42}, {171, 36}, {40, 19},
      {1131, 22}, {1131, 55}, {39, 19}, {20, 24}, {39, 50},  {144, 43}};
  return shapes;
}

struct SweepCase {
  Index m;
  Index n;
  double rmse_k1;
  double rmse_irt;
  double rmse_k2;
  double accuracy_k1;
  double accuracy_irt;
  bool ordered() const { return rmse_k1 > rmse_irt && rmse_irt > rmse_k2; }
};

// RMSE of SVD k=1, IRT and SVD k=2 on one synthetic exam of each shape.
inline std::vector<SweepCase> ordering_sweep(std::uint64_t seed, const IrtOptions& o,
                                             std::ostream& log) {
  std::vector<SweepCase> cases;
  std::uint64_t offset = 0;
  for (const auto& [m, n] : exam_shapes()) {
    const auto sample = synth::generate(synth::low_discrimination(m, n, seed + offset++));
    const auto f = svd::decompose(sample.data);
    const auto grid = irt::standard_normal_grid(o.quad_points, o.quad_span);
    const auto [model, report] = irt::fit(sample.data, grid, em_config(o));
    const auto c1 = metrics::closeness(sample.data, svd::truncate(f, 1));
    const auto c2 = metrics::closeness(sample.data, svd::truncate(f, 2));
    const auto ci = metrics::closeness(sample.data, irt::reconstruct(model).values());
    cases.push_back({m, n, c1.rmse, ci.rmse, c2.rmse, c1.accuracy, ci.accuracy});
    log << "[sweep] " << m << " x " << n << (cases.back().ordered() ? " ordered" : " not ordered")
        << "\n";
  }
  return cases;
}

inline void cmd_pipeline(const PipelineOptions& o, const std::filesystem::path& out,
                         std::ostream& log) {
  const ResponseMatrix observed =
      o.input ? load_csv_file(*o.input)
              : synth::generate(synth::low_discrimination(o.m, o.n, o.seed)).data;
  if (!observed.complete()) {
    throw ParameterError("pipeline expects a complete matrix; it applies the mask itself");
  }
  const std::string label = o.input ? std::filesystem::path(*o.input).filename().string()
                                    : "synthetic";
  log << "[load] " << label << " " << observed.rows() << " x " << observed.cols() << "\n";
  write_response_csv(out / "observed.csv", observed);
  write_heatmap(out / "observed.pgm", observed.values());

  RunManifest manifest;
  manifest.irt = o.irt;
  manifest.matdec = o.matdec;
  manifest.ks = o.ks;
  if (manifest.ks.empty()) manifest.ks = {1, 2, 3, 10, std::min(observed.rows(), observed.cols())};
  std::sort(manifest.ks.begin(), manifest.ks.end());
  manifest.ks.erase(std::unique(manifest.ks.begin(), manifest.ks.end()), manifest.ks.end());

  // Complete matrix: SVD, MatDec and IRT side by side.
  manifest.methods = {metrics::Method::kSvd, metrics::Method::kMatDec, metrics::Method::kIrt};
  const auto dir_complete = out / "complete";
  const auto recs = run_methods(observed, manifest, log);
  const auto table = metrics::compare(observed, recs, label);
  write_json(dir_complete / "table.json", metrics::to_json(table));
  write_file(dir_complete / "table.txt", table_text(table));
  for (const auto& rec : recs) {
    if (rec.k && *rec.k != 2) continue;
    const auto stem = reconstruction_stem(rec.method, rec.k);
    write_reconstruction(dir_complete, stem, rec.values);
    write_heatmap(dir_complete / ("S_" + stem + ".pgm"), rec.values);
    write_heatmap(dir_complete / ("T_" + stem + ".pgm"), binarize(rec.values).matrix().values());
  }
  log << "[complete] " << table.entries.size() << " rows\n";

  // Incomplete matrix: random nulls, MatDec and IRT only.
  const ResponseMatrix masked = mask_random(observed, o.mask_ratio, o.seed);
  const auto dir_incomplete = out / "incomplete";
  write_response_csv(dir_incomplete / "masked.csv", masked);
  write_heatmap(dir_incomplete / "masked.pgm", masked.values(), masked.mask());
  manifest.methods = {metrics::Method::kMatDec, metrics::Method::kIrt};
  const auto masked_table = compare_matrix(masked, label + " (masked)", manifest, dir_incomplete, log);
  log << "[incomplete] " << masked_table.entries.size() << " rows\n";

  // Ordering sweep over the twelve exam shapes.
  const auto cases = ordering_sweep(o.seed, o.irt, log);
  std::ostringstream text;
  Json sweep = Json::array();
  int ordered = 0;
  int case_no = 0;
  for (const auto& c : cases) {
    ++case_no;
    ordered += c.ordered() ? 1 : 0;
    auto op = [](double x, double y) { return x > y ? " > " : (x < y ? " < " : " = "); };
    char head[64];
    std::snprintf(head, sizeof(head), "case %2d (%4lld x %2lld): ", case_no,
                  static_cast<long long>(c.m), static_cast<long long>(c.n));
    text << head << "SVD1 vs IRT vs SVD2: " << metrics::fixed4(c.rmse_k1) << op(c.rmse_k1, c.rmse_irt)
         << metrics::fixed4(c.rmse_irt) << op(c.rmse_irt, c.rmse_k2) << metrics::fixed4(c.rmse_k2)
         << "\n";
    sweep.push_back(Json{{"m", c.m},
                         {"n", c.n},
                         {"rmse_svd1", c.rmse_k1},
                         {"rmse_irt", c.rmse_irt},
                         {"rmse_svd2", c.rmse_k2},
                         {"accuracy_svd1", c.accuracy_k1},
                         {"accuracy_irt", c.accuracy_irt},
                         {"ordered", c.ordered()}});
  }
  text << "ordering holds in " << ordered << " of " << cases.size() << " cases\n";
  write_file(out / "sweep" / "ordering.txt", text.str());
  write_json(out / "sweep" / "sweep.json", sweep);

  write_json(out / "manifest.json",
             Json{{"tool_version", kVersion},
                  {"input", o.input ? Json(*o.input) : Json(nullptr)},
                  {"synth", o.input ? Json(nullptr) : Json{{"m", o.m}, {"n", o.n}, {"seed", o.seed}}},
                  {"mask_ratio", o.mask_ratio},
                  {"seed", o.seed},
                  {"k", manifest.ks}});
  log << "[pipeline] ordering holds in " << ordered << " of " << cases.size() << " sweep cases\n";
}

}  // namespace irtrecon::cli

#endif  // IRTRECON_CLI_HPP_
