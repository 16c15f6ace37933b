/*
 * Copyright (C) 2026 The lowsync-bgs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "bgs/cli.hpp"

#include "bgs/harness.hpp"
#include "bgs/matrix_io.hpp"
#include "bgs/metrics.hpp"
#include "bgs/syncmodel.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

namespace bgs {

namespace {

std::vector<std::string> split_list(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty())
      out.push_back(item);
  return out;
}

double to_double(const std::string &text, const char *what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size())
      return v;
  } catch (const std::exception &) {
  }
  throw ConfigError(std::string("bad ") + what + " '" + text + "'");
}

std::size_t to_size(const std::string &text, const char *what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used == text.size() && text.front() != '-')
      return static_cast<std::size_t>(v);
  } catch (const std::exception &) {
  }
  throw ConfigError(std::string("bad ") + what + " '" + text + "'");
}

std::optional<IOKind> io_flag(const std::string &text, const char *flag) {
  if (text.empty())
    return std::nullopt;
  if (auto io = parse_io(text))
    return io;
  throw ConfigError(std::string("unknown IO '") + text + "' for " + flag + " (houseqr, givensqr, mgs, cholqr)");
}

MatrixClass class_flag(const std::string &text) {
  if (auto cls = parse_matrix_class(text))
    return *cls;
  throw ConfigError("unknown matrix class '" + text + "' (monomial, piled, default)");
}

IOKind need(const std::optional<IOKind> &io, SkeletonKind sk, const char *flag) {
  if (!io)
    throw ConfigError(std::string(skeleton_name(sk)) + " needs " + flag);
  return *io;
}

// The IO flags are shared by every listed skeleton; each one takes the
// fields its arity needs.
Combo combo_from_flags(SkeletonKind sk, std::optional<IOKind> a, std::optional<IOKind> one,
                       std::optional<IOKind> two) {
  Combo c;
  c.skeleton = sk;
  switch (sk) {
  case SkeletonKind::BCGS:
  case SkeletonKind::BCGSI_PLUS:
    if (a && one && *a != *one)
      throw ConfigError(std::string(skeleton_name(sk)) + " uses one IO; --io-a and --io1 disagree");
    c.io_a = need(one ? one : a, sk, "--io-a or --io1");
    break;
  case SkeletonKind::BCGS_A:
  case SkeletonKind::BCGSI_A_3S:
    c.io_a = need(a, sk, "--io-a");
    c.io1 = need(one, sk, "--io1");
    break;
  case SkeletonKind::BCGSI_PLUS_A:
    c.io_a = need(a, sk, "--io-a");
    c.io1 = need(one, sk, "--io1");
    c.io2 = need(two, sk, "--io2");
    break;
  case SkeletonKind::BCGSI_A_2S:
  case SkeletonKind::BCGSI_A_1S:
    c.io_a = need(a, sk, "--io-a");
    break;
  }
  return c;
}

struct SweepArgs {
  std::string matrix = "default";
  std::size_t m = 100, p = 10, s = 5;
  std::string skeletons, io_a, io1, io2, kappas, kappa_range, t_values;
  double kappa_x1 = 10.0, kappa_z = 10.0;
  std::uint64_t seed = 42;
  std::string out;
  bool trace = false, timing = false;
};

SweepConfig sweep_config(const SweepArgs &a) {
  SweepConfig cfg;
  cfg.matrix.cls = class_flag(a.matrix);
  cfg.matrix.m = a.m;
  cfg.matrix.p = a.p;
  cfg.matrix.s = a.s;
  cfg.matrix.seed = a.seed;
  cfg.matrix.kappa_x1 = a.kappa_x1;
  cfg.matrix.kappa_z = a.kappa_z;

  const auto io_a = io_flag(a.io_a, "--io-a");
  const auto io1 = io_flag(a.io1, "--io1");
  const auto io2 = io_flag(a.io2, "--io2");
  if (a.skeletons.empty()) {
    if (io_a || io1 || io2)
      throw ConfigError("--io-a/--io1/--io2 need --skeletons");
    cfg.combos = roadmap_combos();
  } else {
    for (const std::string &name : split_list(a.skeletons)) {
      const auto sk = parse_skeleton(name);
      if (!sk)
        throw ConfigError("unknown skeleton '" + name + "'");
      cfg.combos.push_back(combo_from_flags(*sk, io_a, io1, io2));
    }
    // BCGS and BCGSI+ read --io1 as a synonym for --io-a.
    auto any = [&](auto pred) { return std::any_of(cfg.combos.begin(), cfg.combos.end(), pred); };
    const bool uses_io1 = any([](const Combo &c) {
      return c.io1 || c.skeleton == SkeletonKind::BCGS || c.skeleton == SkeletonKind::BCGSI_PLUS;
    });
    if (io1 && !uses_io1)
      throw ConfigError("--io1 is not used by any listed skeleton");
    if (io2 && !any([](const Combo &c) { return c.io2.has_value(); }))
      throw ConfigError("--io2 is not used by any listed skeleton");
  }

  if (!a.kappas.empty() && !a.kappa_range.empty())
    throw ConfigError("give --kappas or --kappa-range, not both");
  for (const std::string &k : split_list(a.kappas))
    cfg.kappas.push_back(to_double(k, "kappa"));
  if (!a.kappa_range.empty()) {
    std::vector<std::string> parts;
    std::stringstream ss(a.kappa_range);
    std::string item;
    while (std::getline(ss, item, ':'))
      parts.push_back(item);
    if (parts.size() != 3)
      throw ConfigError("--kappa-range expects lo:hi:count");
    cfg.kappas = kappa_range(to_double(parts[0], "kappa"), to_double(parts[1], "kappa"), to_size(parts[2], "count"));
  }
  for (const std::string &t : split_list(a.t_values))
    cfg.t_values.push_back(to_size(t, "t value"));

  cfg.out = a.out;
  cfg.trace = a.trace;
  cfg.timing = a.timing;
  if (cfg.trace && cfg.out.empty())
    throw ConfigError("--trace needs --out");
  validate_sweep(cfg);
  return cfg;
}

int do_sweep(const SweepArgs &args) {
  const SweepConfig cfg = sweep_config(args);
  const std::vector<RunRecord> records = run_sweep(cfg);
  for (std::size_t i = 0; i < records.size(); ++i)
    if (!records[i].note.empty())
      std::cerr << "row " << i << " (" << skeleton_name(records[i].skeleton) << "): " << records[i].note << '\n';
  if (cfg.out.empty()) {
    write_csv(std::cout, records);
  } else {
    write_csv(records, cfg.out);
    if (cfg.trace)
      write_trace_csv(records, cfg.combos.size(), cfg.out + ".trace.csv");
  }
  return 0;
}

int do_check_bounds(const std::string &path) {
  const std::vector<RunRecord> records = read_csv(path);
  const std::vector<BoundViolation> bad = check_bounds(records);
  for (const BoundViolation &v : bad) {
    const RunRecord &r = records[v.row];
    std::printf("violation row %zu: %s kappa=%.3e loo=%.3e bound=%.3e%s\n", v.row, std::string(skeleton_name(r.skeleton)).c_str(),
                r.kappa_actual, v.loo, v.bound, r.failed ? " (failed)" : "");
  }
  std::printf("%zu rows, %zu violations\n", records.size(), bad.size());
  return bad.empty() ? 0 : 1;
}

int do_syncs(std::size_t m, std::size_t p, std::size_t s, std::uint64_t seed) {
  std::printf("skeleton,syncs_per_block\n");
  for (const SyncTableRow &row : sync_table(m, p, s, seed)) {
    const double v = row.syncs_per_block;
    if (v == std::round(v))
      std::printf("%s,%.0f\n", std::string(skeleton_name(row.skeleton)).c_str(), v);
    else
      std::printf("%s,%.4f\n", std::string(skeleton_name(row.skeleton)).c_str(), v);
  }
  return 0;
}

struct GenArgs {
  std::string matrix = "default";
  std::size_t m = 100, p = 10, s = 5, t = 0;
  double kappa = 1.0, kappa_x1 = 10.0, kappa_z = 10.0, z_scale = 0.0;
  std::uint64_t seed = 42;
  std::string format = "bgsm";
  std::string out;
};

int do_gen(const GenArgs &a) {
  MatrixClassSpec spec;
  spec.cls = class_flag(a.matrix);
  spec.m = a.m;
  spec.p = a.p;
  spec.s = a.s;
  spec.seed = a.seed;
  spec.kappa = a.kappa;
  spec.kappa_x1 = a.kappa_x1;
  spec.kappa_z = a.kappa_z;
  if (spec.m < spec.p * spec.s || spec.p == 0 || spec.s == 0)
    throw ConfigError("matrix dimensions need p, s > 0 and m >= p*s");
  if (!(a.kappa >= 1.0))
    throw ConfigError("--kappa must be >= 1");
  if (spec.cls == MatrixClass::Monomial) {
    const std::size_t n = spec.p * spec.s;
    spec.t = a.t != 0 ? a.t : monomial_t_for_kappa(spec, a.kappa);
    if (n % spec.t != 0)
      throw ConfigError("--t must divide p*s");
    spec.r = n / spec.t;
  } else if (spec.cls == MatrixClass::Piled) {
    spec.z_scale = a.z_scale > 0.0 ? a.z_scale : calibrate_piled(spec, a.kappa).z_scale;
  }
  const BlockMatrix x = generate(spec);
  if (a.format == "bgsm")
    write_bgsm(a.out, x.data());
  else if (a.format == "mtx")
    write_matrix_market(a.out, x.data());
  else
    throw ConfigError("unknown format '" + a.format + "' (bgsm, mtx)");
  return 0;
}

} // namespace

int cli_main(int argc, char **argv) {
  CLI::App app{"Block Gram-Schmidt stability experiments", "bgsstab"};
  app.require_subcommand(1);

  SweepArgs sw;
  auto *sweep = app.add_subcommand("sweep", "Run skeleton/IO combinations over a condition number sweep");
  sweep->add_option("--matrix", sw.matrix, "Matrix class: monomial, piled, default")->capture_default_str();
  sweep->add_option("--m", sw.m, "Rows")->capture_default_str();
  sweep->add_option("--p", sw.p, "Block count")->capture_default_str();
  sweep->add_option("--s", sw.s, "Block width")->capture_default_str();
  sweep->add_option("--skeletons", sw.skeletons, "Comma list (bcgs, bcgs-a, bcgsi+, bcgsi+a, 3s, 2s, 1s); default: roadmap set");
  sweep->add_option("--io-a", sw.io_a, "First-block IO: houseqr, givensqr, mgs, cholqr");
  sweep->add_option("--io1", sw.io1, "Loop IO (first pass)");
  sweep->add_option("--io2", sw.io2, "Loop IO (second pass, BCGSI+A)");
  sweep->add_option("--kappas", sw.kappas, "Comma list of target condition numbers");
  sweep->add_option("--kappa-range", sw.kappa_range, "Log-spaced targets lo:hi:count");
  sweep->add_option("--t-values", sw.t_values, "Monomial panel lengths (divisors of p*s)");
  sweep->add_option("--kappa-x1", sw.kappa_x1, "Piled: condition number of the first block")->capture_default_str();
  sweep->add_option("--kappa-z", sw.kappa_z, "Piled: condition number of each increment")->capture_default_str();
  sweep->add_option("--seed", sw.seed, "RNG seed")->capture_default_str();
  sweep->add_option("--out", sw.out, "CSV path (default: stdout)");
  sweep->add_flag("--trace", sw.trace, "Also write <out>.trace.csv with per-run matrix hashes");
  sweep->add_flag("--timing", sw.timing, "Record wall-clock time (output is then not reproducible)");

  std::string csv_path;
  auto *check = app.add_subcommand("check-bounds", "Check a sweep CSV against the LOO envelopes");
  check->add_option("csv", csv_path, "Sweep CSV")->required();

  std::size_t sy_m = 60, sy_p = 6, sy_s = 2;
  std::uint64_t sy_seed = 42;
  auto *syncs = app.add_subcommand("syncs", "Print steady-state sync points per block column");
  syncs->add_option("--m", sy_m, "Rows")->capture_default_str();
  syncs->add_option("--p", sy_p, "Block count")->capture_default_str();
  syncs->add_option("--s", sy_s, "Block width")->capture_default_str();
  syncs->add_option("--seed", sy_seed, "RNG seed")->capture_default_str();

  GenArgs gn;
  auto *gen = app.add_subcommand("gen", "Write one generated test matrix");
  gen->add_option("--matrix", gn.matrix, "Matrix class")->capture_default_str();
  gen->add_option("--m", gn.m, "Rows")->capture_default_str();
  gen->add_option("--p", gn.p, "Block count")->capture_default_str();
  gen->add_option("--s", gn.s, "Block width")->capture_default_str();
  gen->add_option("--kappa", gn.kappa, "Target condition number")->capture_default_str();
  gen->add_option("--t", gn.t, "Monomial panel length (overrides --kappa)");
  gen->add_option("--kappa-x1", gn.kappa_x1, "Piled: first block condition number")->capture_default_str();
  gen->add_option("--kappa-z", gn.kappa_z, "Piled: increment condition number")->capture_default_str();
  gen->add_option("--z-scale", gn.z_scale, "Piled: increment scale (skips calibration)");
  gen->add_option("--seed", gn.seed, "RNG seed")->capture_default_str();
  gen->add_option("--format", gn.format, "bgsm or mtx")->capture_default_str();
  gen->add_option("--out", gn.out, "Output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    if (rc == 0)
      return 0;
    std::cerr << app.help();
    return 2;
  }

  try {
    if (*sweep)
      return do_sweep(sw);
    if (*check)
      return do_check_bounds(csv_path);
    if (*syncs)
      return do_syncs(sy_m, sy_p, sy_s, sy_seed);
    if (*gen)
      return do_gen(gn);
  } catch (const ConfigError &e) {
    std::cerr << "bgsstab: " << e.what() << '\n';
    return 2;
  } catch (const Error &e) {
    std::cerr << "bgsstab: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

} // namespace bgs
