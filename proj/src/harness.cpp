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

#include "bgs/harness.hpp"

#include "bgs/linalg.hpp"
#include "bgs/metrics.hpp"
#include "bgs/syncmodel.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bgs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string skeleton_label(SkeletonKind k) { return std::string(skeleton_name(k)); }

[[noreturn]] void arity_error(const Combo &c, const char *what) {
  throw ConfigError(skeleton_label(c.skeleton) + ": " + what);
}

} // namespace

void validate_combo(const Combo &c) {
  switch (c.skeleton) {
  case SkeletonKind::BCGS:
  case SkeletonKind::BCGSI_PLUS:
    if ((c.io1 && *c.io1 != c.io_a) || (c.io2 && *c.io2 != c.io_a))
      arity_error(c, "takes a single IO for every block");
    if (c.skeleton == SkeletonKind::BCGS && c.io2)
      arity_error(c, "takes no io2");
    return;
  case SkeletonKind::BCGS_A:
  case SkeletonKind::BCGSI_A_3S:
    if (!c.io1)
      arity_error(c, "needs io_a and io1");
    if (c.io2)
      arity_error(c, "takes no io2");
    return;
  case SkeletonKind::BCGSI_PLUS_A:
    if (!c.io1 || !c.io2)
      arity_error(c, "needs io_a, io1 and io2");
    return;
  case SkeletonKind::BCGSI_A_2S:
  case SkeletonKind::BCGSI_A_1S:
    if (c.io1 || c.io2)
      arity_error(c, "takes io_a only (the loop muscle is a fused CholQR)");
    return;
  }
  throw ConfigError("unknown skeleton");
}

BGSResult run_combo(const BlockMatrix &x, const Combo &c, const SkeletonOptions &opts) {
  validate_combo(c);
  const IOSpec a{c.io_a};
  switch (c.skeleton) {
  case SkeletonKind::BCGS:
    return bcgs(x, a, opts);
  case SkeletonKind::BCGS_A:
    return bcgs_a(x, a, IOSpec{*c.io1}, opts);
  case SkeletonKind::BCGSI_PLUS:
    return bcgsi_plus(x, a, opts);
  case SkeletonKind::BCGSI_PLUS_A:
    return bcgsi_plus_a(x, a, IOSpec{*c.io1}, IOSpec{*c.io2}, opts);
  case SkeletonKind::BCGSI_A_3S:
    return bcgsi_a_3s(x, a, IOSpec{*c.io1}, opts);
  case SkeletonKind::BCGSI_A_2S:
    return bcgsi_a_2s(x, a, opts);
  case SkeletonKind::BCGSI_A_1S:
    return bcgsi_a_1s(x, a, opts);
  }
  throw ConfigError("unknown skeleton");
}

std::vector<Combo> roadmap_combos() {
  using K = SkeletonKind;
  const IOKind h = IOKind::HouseQR;
  const IOKind c = IOKind::CholQR;
  return {
      {K::BCGS, c, {}, {}},         {K::BCGS_A, h, c, {}},     {K::BCGSI_PLUS, c, {}, {}},
      {K::BCGSI_PLUS_A, h, c, c},   {K::BCGSI_A_3S, h, c, {}}, {K::BCGSI_A_2S, h, {}, {}},
      {K::BCGSI_A_1S, h, {}, {}},
  };
}

std::uint64_t content_hash(const DenseMatrix &a) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  feed(a.rows());
  feed(a.cols());
  for (double v : a.storage())
    feed(std::bit_cast<std::uint64_t>(v));
  return h;
}

namespace {

double measured_kappa(const BlockMatrix &x) {
  try {
    return cond_2(x.data());
  } catch (const Error &) {
    return kNaN;
  }
}

void fill_io_columns(RunRecord &rec, const Combo &c) {
  rec.io_a = c.io_a;
  switch (c.skeleton) {
  case SkeletonKind::BCGS:
    rec.io1 = c.io_a;
    break;
  case SkeletonKind::BCGSI_PLUS:
    rec.io1 = c.io_a;
    rec.io2 = c.io_a;
    break;
  default:
    rec.io1 = c.io1;
    rec.io2 = c.io2;
    break;
  }
}

RunRecord blank_record(const BlockMatrix &x, const Combo &c) {
  RunRecord rec;
  rec.m = x.rows();
  rec.p = x.block_count();
  rec.s = x.block_width();
  rec.kappa_target = kNaN;
  rec.skeleton = c.skeleton;
  fill_io_columns(rec, c);
  return rec;
}

} // namespace

RunRecord run_single(const BlockMatrix &x, const Combo &combo, bool timing, std::optional<double> kappa_actual) {
  validate_combo(combo);
  RunRecord rec = blank_record(x, combo);
  rec.kappa_actual = kappa_actual ? *kappa_actual : measured_kappa(x);
  rec.matrix_hash = content_hash(x.data());

  const auto start = std::chrono::steady_clock::now();
  try {
    const BGSResult result = run_combo(x, combo);
    if (timing)
      rec.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rec.failed = result.failed;
    const StabilityReport rep = stability_report(x, result);
    rec.loo = rep.loo;
    rec.rel_res = rep.rel_res;
    rec.rel_chol_res = rep.rel_chol_res;
    rec.sync_per_block = x.block_count() >= 3 ? syncs_per_block(result) : kNaN;
  } catch (const ConfigError &) {
    throw;
  } catch (const Error &e) {
    rec.failed = true;
    rec.loo = rec.rel_res = rec.rel_chol_res = rec.sync_per_block = kNaN;
    rec.note = e.what();
  }
  return rec;
}

std::vector<double> kappa_range(double lo, double hi, std::size_t count) {
  if (!(lo >= 1.0) || !(hi >= lo))
    throw ConfigError("kappa range needs 1 <= lo <= hi");
  if (count == 0)
    throw ConfigError("kappa range needs a positive count");
  if (count == 1)
    return {lo};
  std::vector<double> out(count);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

void validate_sweep(const SweepConfig &config) {
  if (config.combos.empty())
    throw ConfigError("no skeleton/IO combinations to run");
  for (const Combo &c : config.combos)
    validate_combo(c);
  for (double k : config.kappas)
    if (!(k >= 1.0))
      throw ConfigError("condition number targets must be >= 1");
  const MatrixClassSpec &m = config.matrix;
  if (m.p == 0 || m.s == 0 || m.m < m.p * m.s)
    throw ConfigError("matrix dimensions need p, s > 0 and m >= p*s");
  if (m.cls == MatrixClass::Monomial) {
    const std::size_t n = m.p * m.s;
    for (std::size_t t : config.t_values)
      if (t == 0 || n % t != 0)
        throw ConfigError("monomial panel length t=" + std::to_string(t) + " does not divide p*s=" + std::to_string(n));
    if (!config.t_values.empty() && !config.kappas.empty())
      throw ConfigError("give either kappa targets or t values for a monomial sweep, not both");
  } else {
    if (!config.t_values.empty())
      throw ConfigError("t values only apply to monomial matrices");
    if (config.kappas.empty())
      throw ConfigError(std::string(matrix_class_name(m.cls)) + " sweep needs kappa targets");
  }
}

namespace {

struct Point {
  MatrixClassSpec spec;
  double kappa_target = kNaN;
  // Set when the matrix could not be generated as requested.
  std::string skip_reason;
};

MatrixClassSpec monomial_spec(MatrixClassSpec spec, std::size_t t) {
  spec.cls = MatrixClass::Monomial;
  spec.t = t;
  spec.r = spec.p * spec.s / t;
  return spec;
}

Point resolve_point(const SweepConfig &cfg, std::size_t index) {
  Point pt;
  pt.spec = cfg.matrix;
  switch (cfg.matrix.cls) {
  case MatrixClass::Default:
    pt.kappa_target = cfg.kappas[index];
    pt.spec.kappa = pt.kappa_target;
    break;
  case MatrixClass::Piled: {
    pt.kappa_target = cfg.kappas[index];
    const PiledCalibration cal = calibrate_piled(cfg.matrix, pt.kappa_target);
    pt.spec.z_scale = cal.z_scale;
    if (!cal.converged) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "piled calibration reached kappa %.3e, target %.3e", cal.kappa_actual,
                    pt.kappa_target);
      pt.skip_reason = buf;
    }
    break;
  }
  case MatrixClass::Monomial:
    if (!cfg.t_values.empty()) {
      pt.spec = monomial_spec(cfg.matrix, cfg.t_values[index]);
    } else if (!cfg.kappas.empty()) {
      pt.kappa_target = cfg.kappas[index];
      pt.spec = monomial_spec(cfg.matrix, monomial_t_for_kappa(cfg.matrix, pt.kappa_target));
    } else {
      pt.spec = monomial_spec(cfg.matrix, divisors(cfg.matrix.p * cfg.matrix.s)[index]);
    }
    break;
  }
  return pt;
}

std::size_t point_count(const SweepConfig &cfg) {
  if (cfg.matrix.cls == MatrixClass::Monomial) {
    if (!cfg.t_values.empty())
      return cfg.t_values.size();
    if (cfg.kappas.empty())
      return divisors(cfg.matrix.p * cfg.matrix.s).size();
  }
  return cfg.kappas.size();
}

std::vector<RunRecord> run_point(const SweepConfig &cfg, std::size_t index) {
  const Point pt = resolve_point(cfg, index);
  const std::string cls(matrix_class_name(cfg.matrix.cls));
  std::vector<RunRecord> out;
  out.reserve(cfg.combos.size());

  if (!pt.skip_reason.empty()) {
    const MatrixClassSpec &m = cfg.matrix;
    for (const Combo &c : cfg.combos) {
      RunRecord rec;
      rec.matrix_class = cls;
      rec.m = m.m;
      rec.p = m.p;
      rec.s = m.s;
      rec.kappa_target = pt.kappa_target;
      // No matrix was run, so check-bounds must not judge this row.
      rec.kappa_actual = kNaN;
      rec.skeleton = c.skeleton;
      fill_io_columns(rec, c);
      rec.loo = rec.rel_res = rec.rel_chol_res = rec.sync_per_block = kNaN;
      rec.failed = true;
      rec.note = pt.skip_reason;
      out.push_back(std::move(rec));
    }
    return out;
  }

  const BlockMatrix x = generate(pt.spec);
  const double kappa = measured_kappa(x);
  for (const Combo &c : cfg.combos) {
    RunRecord rec = run_single(x, c, cfg.timing, kappa);
    rec.matrix_class = cls;
    rec.kappa_target = pt.kappa_target;
    out.push_back(std::move(rec));
  }
  return out;
}

} // namespace

std::vector<RunRecord> run_sweep(const SweepConfig &config) {
  validate_sweep(config);
  const std::size_t n = point_count(config);
  std::vector<std::vector<RunRecord>> slots(n);
  std::vector<std::exception_ptr> errors(n);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      slots[i] = run_point(config, static_cast<std::size_t>(i));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }

  for (const auto &e : errors)
    if (e)
      std::rethrow_exception(e);
  std::vector<RunRecord> records;
  records.reserve(n * config.combos.size());
  for (auto &slot : slots)
    for (auto &rec : slot)
      records.push_back(std::move(rec));
  return records;
}

namespace {

std::string fmt_double(double v) {
  if (!std::isfinite(v))
    return "NaN";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string fmt_io(const std::optional<IOKind> &io) { return io ? std::string(io_name(*io)) : std::string(); }

std::vector<std::string> split(const std::string &line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string &text, std::size_t row, const char *field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size())
      return v;
  } catch (const std::exception &) {
  }
  throw ConfigError("row " + std::to_string(row) + ": bad " + field + " value '" + text + "'");
}

std::size_t parse_size(const std::string &text, std::size_t row, const char *field) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used == text.size())
      return static_cast<std::size_t>(v);
  } catch (const std::exception &) {
  }
  throw ConfigError("row " + std::to_string(row) + ": bad " + field + " value '" + text + "'");
}

std::optional<IOKind> parse_io_field(const std::string &text, std::size_t row) {
  if (text.empty())
    return std::nullopt;
  if (auto io = parse_io(text))
    return io;
  throw ConfigError("row " + std::to_string(row) + ": unknown IO '" + text + "'");
}

} // namespace

std::string to_csv_row(const RunRecord &r) {
  std::string line;
  line += r.matrix_class + ',';
  line += std::to_string(r.m) + ',' + std::to_string(r.p) + ',' + std::to_string(r.s) + ',';
  line += fmt_double(r.kappa_target) + ',' + fmt_double(r.kappa_actual) + ',';
  line += skeleton_label(r.skeleton) + ',';
  line += fmt_io(r.io_a) + ',' + fmt_io(r.io1) + ',' + fmt_io(r.io2) + ',';
  line += fmt_double(r.loo) + ',' + fmt_double(r.rel_res) + ',' + fmt_double(r.rel_chol_res) + ',';
  line += fmt_double(r.sync_per_block) + ',';
  line += r.failed ? "true," : "false,";
  line += fmt_double(r.elapsed_ms);
  return line;
}

void write_csv(std::ostream &out, const std::vector<RunRecord> &records) {
  out << kCsvHeader << '\n';
  for (const RunRecord &r : records)
    out << to_csv_row(r) << '\n';
}

void write_csv(const std::vector<RunRecord> &records, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot open '" + path + "' for writing");
  write_csv(out, records);
  out.flush();
  if (!out)
    throw Error("write failed for '" + path + "'");
}

void write_trace_csv(const std::vector<RunRecord> &records, std::size_t combos_per_point, const std::string &path) {
  if (combos_per_point == 0)
    throw Error("trace needs at least one combination per point");
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot open '" + path + "' for writing");
  out << "kappa_index,combo_index,skeleton,kappa_actual,matrix_hash,note\n";
  char hash[24];
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RunRecord &r = records[i];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.matrix_hash));
    std::string note = r.note;
    for (char &ch : note)
      if (ch == ',' || ch == '\n')
        ch = ';';
    out << i / combos_per_point << ',' << i % combos_per_point << ',' << skeleton_label(r.skeleton) << ','
        << fmt_double(r.kappa_actual) << ',' << hash << ',' << note << '\n';
  }
  if (!out)
    throw Error("write failed for '" + path + "'");
}

std::vector<RunRecord> read_csv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("empty CSV");
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != kCsvHeader)
    throw ConfigError("unexpected CSV header");
  std::vector<RunRecord> out;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r")
      continue;
    const auto f = split(line, ',');
    if (f.size() != 16)
      throw ConfigError("row " + std::to_string(row) + ": expected 16 fields, got " + std::to_string(f.size()));
    RunRecord r;
    r.matrix_class = f[0];
    r.m = parse_size(f[1], row, "m");
    r.p = parse_size(f[2], row, "p");
    r.s = parse_size(f[3], row, "s");
    r.kappa_target = parse_double(f[4], row, "kappa_target");
    r.kappa_actual = parse_double(f[5], row, "kappa_actual");
    const auto sk = parse_skeleton(f[6]);
    if (!sk)
      throw ConfigError("row " + std::to_string(row) + ": unknown skeleton '" + f[6] + "'");
    r.skeleton = *sk;
    r.io_a = parse_io_field(f[7], row);
    r.io1 = parse_io_field(f[8], row);
    r.io2 = parse_io_field(f[9], row);
    r.loo = parse_double(f[10], row, "loo");
    r.rel_res = parse_double(f[11], row, "rel_res");
    r.rel_chol_res = parse_double(f[12], row, "rel_chol_res");
    r.sync_per_block = parse_double(f[13], row, "sync_per_block");
    if (f[14] == "true")
      r.failed = true;
    else if (f[14] == "false")
      r.failed = false;
    else
      throw ConfigError("row " + std::to_string(row) + ": bad failed value '" + f[14] + "'");
    r.elapsed_ms = parse_double(f[15], row, "elapsed_ms");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RunRecord> read_csv(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open '" + path + "' for reading");
  return read_csv(in);
}

std::vector<BoundViolation> check_bounds(const std::vector<RunRecord> &records) {
  std::vector<BoundViolation> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RunRecord &r = records[i];
    if (!r.io_a || !(r.kappa_actual >= 1.0))
      continue;
    const Envelope env = bound_envelope(bound_spec(r.skeleton, *r.io_a, r.io1, r.io2, r.p), r.kappa_actual);
    if (!env.applicable)
      continue;
    if (r.failed || !(r.loo <= env.loo_bound))
      out.push_back({i, r.loo, env.loo_bound});
  }
  return out;
}

} // namespace bgs
