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


// Command-line front end: irtrecon <subcommand> [flags]. See README.md.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "irtrecon/cli.hpp"

namespace {

using irtrecon::Index;
namespace cli = irtrecon::cli;
namespace metrics = irtrecon::metrics;

std::vector<Index> parse_k_list(const std::string& text) {
  std::vector<Index> ks;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    long long k = 0;
    try {
      k = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || k < 1) {
      throw irtrecon::ParameterError("invalid k '" + item + "' (expected integers >= 1)");
    }
    ks.push_back(static_cast<Index>(k));
  }
  return ks;
}

std::vector<metrics::Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<metrics::Method> methods;
  for (const auto& entry : names) {
    std::stringstream in(entry);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (!item.empty()) methods.push_back(cli::parse_method(item));
    }
  }
  return methods;
}

struct Flags {
  std::string input;
  std::string output = ".";
  std::uint64_t seed = 1;
  std::string k = "1,2,3";
  double mask_ratio = 0.1;
  std::vector<std::string> methods;
  std::optional<double> mu;
  std::optional<double> reg_u;
  std::optional<double> reg_v;
  Index quad_points = 31;
  double quad_span = 4.0;
  std::optional<int> max_iter;
  std::optional<double> tol;
  Index m = 216;
  Index n = 31;
  std::string regime = "default";
};

cli::IrtOptions irt_options(const Flags& f) {
  cli::IrtOptions o;
  o.quad_points = f.quad_points;
  o.quad_span = f.quad_span;
  if (f.max_iter) o.max_iter = *f.max_iter;
  if (f.tol) o.tol = *f.tol;
  return o;
}

cli::MatDecOptions matdec_options(const Flags& f) {
  cli::MatDecOptions o;
  o.mu = f.mu;
  o.reg_u = f.reg_u;
  o.reg_v = f.reg_v;
  if (f.max_iter) o.max_epochs = *f.max_iter;
  if (f.tol) o.tol = *f.tol;
  o.seed = f.seed;
  return o;
}

void add_irt_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--quad-points", f.quad_points, "Quadrature nodes")->capture_default_str();
  cmd->add_option("--quad-span", f.quad_span, "Quadrature half-width")->capture_default_str();
}

void add_iteration_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--max-iter", f.max_iter, "EM iterations / descent epochs");
  cmd->add_option("--tol", f.tol, "Stop tolerance on parameter change");
}

void add_matdec_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--mu", f.mu, "Learning rate (default 0.002 x cells/observed)");
  cmd->add_option("--reg-u", f.reg_u, "Regularization on U (default 0 for k<=3, else 0.02)");
  cmd->add_option("--reg-v", f.reg_v, "Regularization on V (default 0 for k<=3, else 0.02)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruct binary item-response matrices by IRT, SVD and matrix factorization"};
  app.set_version_flag("--version", cli::kVersion);
  app.require_subcommand(1);
  Flags f;

  auto* fit_irt = app.add_subcommand("fit-irt", "Fit the 2PL model and reconstruct S and T");
  fit_irt->add_option("--input", f.input, "Response matrix CSV")->required();
  fit_irt->add_option("--output", f.output, "Output directory")->capture_default_str();
  add_irt_flags(fit_irt, f);
  add_iteration_flags(fit_irt, f);

  auto* lowrank = app.add_subcommand("lowrank", "Rank-k SVD or depth-k factorization");
  lowrank->add_option("--input", f.input, "Response matrix CSV")->required();
  lowrank->add_option("--output", f.output, "Output directory")->capture_default_str();
  lowrank->add_option("--method", f.methods, "svd or matdec")->required();
  lowrank->add_option("--k", f.k, "Comma-separated depths")->capture_default_str();
  lowrank->add_option("--seed", f.seed, "Initialization seed")->capture_default_str();
  add_matdec_flags(lowrank, f);
  add_iteration_flags(lowrank, f);

  auto* mask = app.add_subcommand("mask", "Null a random fraction of cells");
  mask->add_option("--input", f.input, "Complete response matrix CSV")->required();
  mask->add_option("--output", f.output, "Output directory")->capture_default_str();
  mask->add_option("--mask-ratio", f.mask_ratio, "Fraction of cells to null")->capture_default_str();
  mask->add_option("--seed", f.seed, "Sampling seed")->capture_default_str();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic 2PL response matrix");
  synth->add_option("--output", f.output, "Output directory")->capture_default_str();
  synth->add_option("--m", f.m, "Examinees")->capture_default_str();
  synth->add_option("--n", f.n, "Items")->capture_default_str();
  synth->add_option("--seed", f.seed, "Generator seed")->capture_default_str();
  synth->add_option("--regime", f.regime, "default (a in [0.5,2]) or low (a in [0.3,1.2])")
      ->check(CLI::IsMember({"default", "low"}))
      ->capture_default_str();

  auto* compare = app.add_subcommand("compare", "Closeness table for several methods");
  compare->add_option("--input", f.input, "Response matrix CSV")->required();
  compare->add_option("--output", f.output, "Output directory")->capture_default_str();
  compare->add_option("--method", f.methods, "svd, matdec, irt (repeat or comma-separate)");
  compare->add_option("--k", f.k, "Comma-separated depths")->capture_default_str();
  compare->add_option("--seed", f.seed, "Factorization seed")->capture_default_str();
  add_irt_flags(compare, f);
  add_matdec_flags(compare, f);
  add_iteration_flags(compare, f);

  auto* heatmap = app.add_subcommand("heatmap", "Render a matrix CSV as a binary PGM");
  heatmap->add_option("--input", f.input, "Matrix CSV")->required();
  heatmap->add_option("--output", f.output, "Output .pgm path")->required();

  auto* pipeline = app.add_subcommand("pipeline", "Complete table, masked table and ordering sweep");
  pipeline->add_option("--input", f.input, "Complete response matrix CSV (default: synthetic)");
  pipeline->add_option("--output", f.output, "Output directory")->capture_default_str();
  pipeline->add_option("--seed", f.seed, "Seed for data, mask and factorization")->capture_default_str();
  pipeline->add_option("--mask-ratio", f.mask_ratio, "Null fraction")->capture_default_str();
  pipeline->add_option("--k", f.k, "Comma-separated depths (default 1,2,3,10,min(m,n))");
  pipeline->add_option("--m", f.m, "Synthetic examinees")->capture_default_str();
  pipeline->add_option("--n", f.n, "Synthetic items")->capture_default_str();
  add_irt_flags(pipeline, f);
  add_matdec_flags(pipeline, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kUsage;
  }

  try {
    if (*fit_irt) {
      const auto run = cli::cmd_fit_irt(f.input, irt_options(f), f.output, std::cerr);
      if (!run.report.converged) {
        std::cerr << "warning: EM stopped after " << run.report.iterations
                  << " iterations without converging\n";
      }
    } else if (*lowrank) {
      const auto methods = parse_methods(f.methods);
      if (methods.size() != 1) throw irtrecon::ParameterError("lowrank takes exactly one --method");
      cli::cmd_lowrank(f.input, methods.front(), parse_k_list(f.k), matdec_options(f), f.output,
                       std::cerr);
    } else if (*mask) {
      cli::cmd_mask(f.input, f.mask_ratio, f.seed, f.output, std::cerr);
    } else if (*synth) {
      auto config = f.regime == "low" ? irtrecon::synth::low_discrimination(f.m, f.n, f.seed)
                                        : irtrecon::synth::SynthConfig{f.m, f.n, f.seed};
      cli::cmd_synth(config, f.output, std::cerr);
    } else if (*compare) {
      cli::RunManifest manifest;
      manifest.methods = parse_methods(f.methods);
      if (manifest.methods.empty()) {
        std::cerr << "usage error: compare needs at least one --method\n";
        return cli::kUsage;
      }
      manifest.ks = parse_k_list(f.k);
      manifest.irt = irt_options(f);
      manifest.matdec = matdec_options(f);
      const auto table = cli::cmd_compare(f.input, manifest, f.output, std::cerr);
      std::cout << cli::table_text(table);
    } else if (*heatmap) {
      cli::cmd_heatmap(f.input, f.output);
    } else if (*pipeline) {
      cli::PipelineOptions o;
      if (!f.input.empty()) o.input = f.input;
      o.m = f.m;
      o.n = f.n;
      o.seed = f.seed;
      o.mask_ratio = f.mask_ratio;
      if (pipeline->count("--k") > 0) o.ks = parse_k_list(f.k);
      o.irt = irt_options(f);
      o.matdec = matdec_options(f);
      cli::cmd_pipeline(o, f.output, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::exit_code_for(e);
  }
  return cli::kOk;
}
