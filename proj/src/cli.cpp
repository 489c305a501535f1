#include "gosc/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "gosc/rpm.hpp"

namespace gosc::cli {

namespace {

using nlohmann::ordered_json;

Record failed(ordered_json data, const std::string& message) {
  data["status"] = "failed";
  data["message"] = message;
  return {std::move(data), false};
}

Record done(ordered_json data) {
  data["status"] = "ok";
  return {std::move(data), true};
}

int parse_positive(const std::string& text, const char* what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || used == 0 || v <= 0)
    throw InvalidInput(std::string(what) + ": expected a positive integer, got '" + text + "'");
  return v;
}

void check_digits(int digits) {
  if (digits < 20) throw InvalidInput("digits must be at least 20, got " + std::to_string(digits));
}

// Canonical EP representative: upper half plane.
ExceptionalPoint upper(ExceptionalPoint p) {
  if (p.lambda.im.sign() < 0) {
    p.lambda = conj(p.lambda);
    p.energy = conj(p.energy);
  }
  return p;
}

std::string label_text(const std::optional<std::pair<int, int>>& label) {
  if (!label) return "";
  return std::to_string(label->first) + "-" + std::to_string(label->second);
}

// Ladder used for the sweep's RPM column and for the guide positions.
const std::vector<int>& sweep_rpm_ladder() {
  static const std::vector<int> ladder{10, 20, 30, 40};
  return ladder;
}

const std::vector<int>& heroic_ladder() {
  static const std::vector<int> ladder{10, 15, 20, 30, 40, 60, 80, 120, 160, 240, 320, 380};
  return ladder;
}

}  // namespace

int resolve_digits(std::optional<int> flag, int command_default) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kDigitsEnv); env != nullptr && *env != '\0') {
    return parse_positive(env, kDigitsEnv);
  }
  return command_default;
}

void run_ordered(std::size_t count, int jobs, const std::function<std::vector<Record>(std::size_t)>& task,
                 const Sink& sink) {
  if (count == 0) return;
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const std::size_t width = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);

  std::vector<std::optional<std::vector<Record>>> results(count);
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      std::vector<Record> out;
      try {
        out = task(i);
      } catch (const std::exception& e) {
        out = {failed(ordered_json{{"kind", "error"}}, e.what())};
      }
      {
        std::lock_guard lock(mu);
        results[i] = std::move(out);
      }
      ready.notify_all();
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(width);
  for (std::size_t t = 0; t < width; ++t) pool.emplace_back(worker);

  for (std::size_t i = 0; i < count; ++i) {
    std::vector<Record> batch;
    {
      std::unique_lock lock(mu);
      ready.wait(lock, [&] { return results[i].has_value(); });
      batch = std::move(*results[i]);
      results[i].reset();
    }
    for (const Record& r : batch) sink(r);
  }
}

// ---------------------------------------------------------------- requests

void SweepRequest::validate() const {
  check_digits(digits);
  const PrecisionCtx ctx(digits);
  const Real lo = ctx.real(lambda_min), hi = ctx.real(lambda_max);
  if (!lo.is_finite() || !hi.is_finite()) throw InvalidInput("sweep: lambda bounds must be finite");
  if (steps < 1) throw InvalidInput("sweep: steps must be positive");
  if (steps == 1 && !(lo == hi)) throw InvalidInput("sweep: a single step needs lmin == lmax");
  if (steps >= 2 && !(lo < hi)) throw InvalidInput("sweep: lmin must be below lmax");
  if (states.empty()) throw InvalidInput("sweep: no states requested");
  if (methods.empty()) throw InvalidInput("sweep: no methods requested");
  for (int n : states) {
    if (n < 0) throw InvalidInput("sweep: state indices must be non-negative");
    if (n > 1 && std::find(methods.begin(), methods.end(), Method::PT) != methods.end())
      throw InvalidInput("sweep: PT energies exist only for n = 0 and n = 1");
  }
  if (target_digits < 0 || target_digits > digits - 5)
    throw InvalidInput("sweep: target digits must lie in [1, digits - 5]");
}

CriticalMethod parse_critical_method(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (t == "RR") return CriticalMethod::RR;
  if (t == "RPM") return CriticalMethod::RPM;
  if (t == "BOTH") return CriticalMethod::both;
  if (t == "PT") return CriticalMethod::PT;
  throw InvalidInput("unknown method '" + text + "' (expected RR, RPM, both or PT)");
}

void CriticalRequest::validate() const {
  check_digits(digits);
  if (n < 0) throw InvalidInput("critical: n must be non-negative");
  if (method == CriticalMethod::PT && n > 1) throw InvalidInput("critical: PT critical couplings exist only for n <= 1");
}

void EpsRequest::validate() const {
  check_digits(digits);
  box.validate();
  if (seed_D < 2 || seed_D > 40) throw InvalidInput("eps: seed dimension must lie in [2, 40]");
  if (ladder.empty()) throw InvalidInput("eps: empty D ladder");
}

void HftRequest::validate() const {
  check_digits(digits);
  if (n < 0) throw InvalidInput("hft: n must be non-negative");
  const PrecisionCtx ctx(digits);
  if (!(ctx.real(h) > Real(0))) throw InvalidInput("hft: step h must be positive");
  if (!ctx.real(lambda).is_finite()) throw InvalidInput("hft: lambda must be finite");
  if (D <= n / 2) throw InvalidInput("hft: D must exceed the sector index of the state");
}

SearchBox parse_box(const std::string& text, const PrecisionCtx& ctx) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (parts.size() != 4) throw InvalidInput("box: expected re0,re1,im0,im1, got '" + text + "'");
  SearchBox box{ctx.real(parts[0]), ctx.real(parts[1]), ctx.real(parts[2]), ctx.real(parts[3])};
  box.validate();
  return box;
}

// ----------------------------------------------------------------- schemas

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> c{"kind", "lambda", "state", "method", "energy", "D",
                                          "converged_digits", "status", "message"};
  return c;
}

const std::vector<std::string>& critical_columns() {
  static const std::vector<std::string> c{"kind", "n", "method", "lambda_c", "D", "working_digits",
                                          "residual", "converged_digits", "shared_digits", "status", "message"};
  return c;
}

const std::vector<std::string>& eps_columns() {
  static const std::vector<std::string> c{"kind",       "sector",    "branch_label",    "lambda",
                                          "lambda_re",  "lambda_im", "abs_lambda",      "energy_re",
                                          "energy_im",  "residual_e", "residual_lambda", "D",
                                          "converged_digits", "conjugate_in_box", "status", "message"};
  return c;
}

const std::vector<std::string>& hft_columns() {
  static const std::vector<std::string> c{"kind", "n", "lambda", "h", "D", "slope",
                                          "expectation", "residual", "status", "message"};
  return c;
}

// ---------------------------------------------------------------- commands

namespace {

struct Guide {
  int n;
  Parity sector;
  SearchBox box;
};

std::vector<Record> guide_records(const Guide& g, int digits) {
  const PrecisionCtx ctx(digits);
  ordered_json base{{"kind", "guide"}, {"state", g.n}, {"method", "RPM"}};
  try {
    const std::vector<EPSeed> seeds = ep_seeds(g.sector, 10, g.box, ctx, SeedOptions{SeedMode::grid, 40, false});
    if (seeds.empty()) return {failed(base, "no exceptional-point seed found")};
    const EPLadder ep = solve_ep(sweep_rpm_ladder(), 0, parity_symbol(g.sector), seeds.front().energy,
                                 seeds.front().lambda, ctx);
    const Real modulus = abs(ep.point.lambda);
    std::vector<Record> out;
    for (int sign : {-1, 1}) {
      ordered_json r = base;
      r["lambda"] = (sign < 0 ? -modulus : modulus).str(digits);
      r["D"] = ep.point.source_D;
      r["converged_digits"] = ep.point.converged_digits;
      r["message"] = std::string(sign < 0 ? "-" : "+") + "|lambda_" + std::to_string(g.n) + "^EP|";
      out.push_back(done(std::move(r)));
    }
    return out;
  } catch (const std::exception& e) {
    return {failed(base, e.what())};
  }
}

Record sweep_point(const Real& lambda, int n, Method method, const SweepRequest& req) {
  const PrecisionCtx ctx(req.digits);
  const int target = req.target_digits > 0 ? req.target_digits : req.digits / 2;
  ordered_json r{{"kind", "sweep_point"}, {"lambda", lambda.str(req.digits)}, {"state", n},
                 {"method", to_string(method)}};
  try {
    switch (method) {
      case Method::PT:
        r["energy"] = pt_energy(n, lambda, ctx).str(req.digits);
        break;
      case Method::RR: {
        const SpectralPoint p = converge_state(n, lambda, target, ctx);
        r["energy"] = p.energy.str(req.digits);
        r["D"] = p.basis_size;
        r["converged_digits"] = target;
        break;
      }
      case Method::RPM: {
        const SpectralPoint seed = converge_state(n, lambda, target, ctx);
        const LadderResult<Real> e = solve_E(sweep_rpm_ladder(), 0, n % 2, lambda, seed.energy, ctx);
        r["energy"] = e.value.str(req.digits);
        r["D"] = e.D;
        r["converged_digits"] = e.converged_digits;
        break;
      }
    }
    return done(std::move(r));
  } catch (const std::exception& e) {
    return failed(std::move(r), e.what());
  }
}

}  // namespace

bool cmd_sweep(const SweepRequest& req, const Sink& sink) {
  req.validate();
  const PrecisionCtx ctx(req.digits);
  const Real lo = ctx.real(req.lambda_min), hi = ctx.real(req.lambda_max);
  std::vector<Real> grid;
  for (int i = 0; i < req.steps; ++i) {
    if (req.steps == 1 || i == req.steps - 1) {
      grid.push_back(req.steps == 1 ? lo : hi);
    } else {
      grid.push_back(lo + (hi - lo) * Real(i) / Real(req.steps - 1));
    }
  }

  struct Task {
    std::optional<std::size_t> point;  // index into grid
    int n = 0;
    Method method = Method::RR;
    std::optional<Guide> guide;
  };
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < grid.size(); ++p)
    for (int n : req.states)
      for (Method m : req.methods) tasks.push_back({p, n, m, std::nullopt});
  if (req.guides) {
    tasks.push_back({std::nullopt, 0, Method::RPM, Guide{0, Parity::even, SearchBox{-4, 0, 0, 4}}});
    tasks.push_back({std::nullopt, 1, Method::RPM, Guide{1, Parity::odd, SearchBox{-2, 1, 3, 7}}});
  }

  bool ok = true;
  run_ordered(
      tasks.size(), req.jobs,
      [&](std::size_t i) -> std::vector<Record> {
        const Task& t = tasks[i];
        if (t.guide) return guide_records(*t.guide, req.digits);
        return {sweep_point(grid[*t.point], t.n, t.method, req)};
      },
      [&](const Record& r) {
        ok = ok && r.ok;
        sink(r);
      });
  return ok;
}

bool cmd_critical(const CriticalRequest& req, const Sink& sink) {
  req.validate();
  const PrecisionCtx ctx(req.digits);
  const int s = req.n % 2;
  bool ok = true;
  auto emit = [&](Record r) {
    ok = ok && r.ok;
    sink(r);
  };
  auto base = [&](const char* kind, const char* method) {
    return ordered_json{{"kind", kind}, {"n", req.n}, {"method", method}};
  };

  if (req.method == CriticalMethod::PT) {
    ordered_json r = base("critical", "PT");
    try {
      r["lambda_c"] = pt_critical_lambda(req.n, ctx).str(req.digits);
      emit(done(std::move(r)));
    } catch (const std::exception& e) {
      emit(failed(std::move(r), e.what()));
    }
    return ok;
  }

  const bool want_rr = req.method != CriticalMethod::RPM;
  const bool want_rpm = req.method != CriticalMethod::RR;
  std::optional<Real> rr_value, rpm_value;

  if (want_rr) {
    try {
      const std::vector<CriticalPoint> seq = critical_lambda_rr(req.n, default_rr_schedule(), ctx);
      for (const CriticalPoint& p : seq) {
        ordered_json r = base("critical_rung", "RR");
        r["lambda_c"] = p.lambda.str(req.digits);
        r["D"] = p.D;
        r["working_digits"] = req.digits;
        emit(done(std::move(r)));
      }
      ordered_json r = base("critical", "RR");
      r["lambda_c"] = seq.back().lambda.str(req.digits);
      r["D"] = seq.back().D;
      if (seq.size() >= 2) r["converged_digits"] = shared_digits(seq.back().lambda, seq[seq.size() - 2].lambda);
      rr_value = seq.back().lambda;
      emit(done(std::move(r)));
    } catch (const std::exception& e) {
      emit(failed(base("critical", "RR"), e.what()));
    }
  }

  if (want_rpm) {
    try {
      // Seed from a small variational ladder; the PT root is too coarse for n >= 2.
      const Real seed = critical_lambda_rr(req.n, {10, 20, 40}, ctx).back().lambda;
      const auto& ladder = req.heroic ? heroic_ladder() : default_rpm_ladder();
      const LadderResult<Real> res = solve_critical_lambda(ladder, 0, s, seed, ctx);
      for (const LadderRung<Real>& g : res.rungs) {
        ordered_json r = base("critical_rung", "RPM");
        r["lambda_c"] = g.value.str(req.digits);
        r["D"] = g.D;
        r["working_digits"] = g.working_digits;
        r["residual"] = g.residual.str(6);
        emit(done(std::move(r)));
      }
      ordered_json r = base("critical", "RPM");
      r["lambda_c"] = res.value.str(req.digits);
      r["D"] = res.D;
      r["working_digits"] = res.rungs.back().working_digits;
      r["residual"] = res.rungs.back().residual.str(6);
      r["converged_digits"] = res.converged_digits;
      rpm_value = res.value;
      emit(done(std::move(r)));
    } catch (const std::exception& e) {
      emit(failed(base("critical", "RPM"), e.what()));
    }
  }

  if (req.method == CriticalMethod::both) {
    ordered_json r = base("agreement", "both");
    const int required = std::min(req.digits, 20);
    if (!rr_value || !rpm_value) {
      emit(failed(std::move(r), "a method failed; no comparison"));
    } else {
      const int shared = shared_digits(*rr_value, *rpm_value);
      r["shared_digits"] = shared;
      if (shared >= required) {
        emit(done(std::move(r)));
      } else {
        emit(failed(std::move(r), "RR and RPM share " + std::to_string(shared) + " digits, " +
                                      std::to_string(required) + " required"));
      }
    }
  }
  return ok;
}

bool cmd_eps(const EpsRequest& req, const Sink& sink) {
  req.validate();
  const PrecisionCtx ctx(req.digits);
  const std::vector<EPSeed> seeds = ep_seeds(req.sector, req.seed_D, req.box, ctx);
  const int s = parity_symbol(req.sector);

  struct Outcome {
    std::optional<ExceptionalPoint> point;
    std::string error;
  };
  std::vector<Outcome> outcomes(seeds.size());
  run_ordered(
      seeds.size(), req.jobs,
      [&](std::size_t i) -> std::vector<Record> {
        try {
          EPLadder ep = solve_ep(req.ladder, 0, s, seeds[i].energy, seeds[i].lambda, ctx);
          ep.point.branch_label = seeds[i].branch_label;
          outcomes[i].point = std::move(ep.point);
        } catch (const std::exception& e) {
          outcomes[i].error = e.what();
        }
        return {};
      },
      [](const Record&) {});

  // Merge conjugates and repeats: one record per EP, in seed order.
  std::vector<ExceptionalPoint> kept;
  bool ok = true;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    ordered_json r{{"kind", "exceptional"}, {"sector", to_string(req.sector)},
                   {"branch_label", label_text(seeds[i].branch_label)}};
    if (!outcomes[i].point) {
      ok = false;
      const std::string where = seeds[i].lambda.re.str(8) + (seeds[i].lambda.im.sign() < 0 ? " - " : " + ") +
                                abs(seeds[i].lambda.im).str(8) + "i";
      r["lambda"] = where;
      sink(failed(std::move(r), "seed " + where + ": " + outcomes[i].error));
      continue;
    }
    const ExceptionalPoint p = upper(*outcomes[i].point);
    const Real merge = max(Real(1), abs(p.lambda)) * ctx.pow10(-8);
    const bool repeat = std::any_of(kept.begin(), kept.end(),
                                    [&](const ExceptionalPoint& q) { return abs(q.lambda - p.lambda) < merge; });
    if (repeat) continue;
    kept.push_back(p);
    r["lambda"] = p.lambda.re.str(req.digits) + " ± " + p.lambda.im.str(req.digits) + "i";
    r["lambda_re"] = p.lambda.re.str(req.digits);
    r["lambda_im"] = p.lambda.im.str(req.digits);
    r["abs_lambda"] = abs(p.lambda).str(req.digits);
    r["energy_re"] = p.energy.re.str(req.digits);
    r["energy_im"] = p.energy.im.str(req.digits);
    r["residual_e"] = p.residuals.first.str(6);
    r["residual_lambda"] = p.residuals.second.str(6);
    r["D"] = p.source_D;
    r["converged_digits"] = p.converged_digits;
    r["conjugate_in_box"] = req.box.contains(p.lambda) && req.box.contains(conj(p.lambda)) ? "yes" : "no";
    sink(done(std::move(r)));
  }
  return ok;
}

bool cmd_hft(const HftRequest& req, const Sink& sink) {
  req.validate();
  const PrecisionCtx ctx(req.digits);
  const Real lambda = ctx.real(req.lambda), h = ctx.real(req.h);
  ordered_json r{{"kind", "hft"}, {"n", req.n}, {"lambda", lambda.str(req.digits)}, {"h", h.str(req.digits)},
                 {"D", req.D}};
  try {
    const HftReport rep = hft_residual(req.n, lambda, h, rr_oracle(req.D, ctx), ctx);
    r["slope"] = rep.slope.str(req.digits);
    r["expectation"] = rep.expectation.str(req.digits);
    r["residual"] = rep.residual.str(6);
    sink(done(std::move(r)));
    return true;
  } catch (const std::exception& e) {
    sink(failed(std::move(r), e.what()));
    return false;
  }
}

// ----------------------------------------------------------------- writers

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

Format format_for_path(const std::string& path) {
  auto ends_with = [&](const std::string& suffix) {
    return path.size() >= suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  return ends_with(".jsonl") || ends_with(".json") ? Format::jsonl : Format::csv;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Writer::Writer(std::ostream& out, Format format, std::vector<std::string> columns, const Metadata& meta)
    : out_(out), format_(format), columns_(std::move(columns)) {
  if (format_ == Format::jsonl) {
    ordered_json m{{"kind", "metadata"}, {"version", kVersion},      {"digits", meta.digits},
                   {"command", meta.command}, {"timestamp", meta.timestamp}, {"columns", columns_}};
    out_ << m.dump() << '\n';
  } else {
    out_ << "# version: " << kVersion << '\n'
         << "# digits: " << meta.digits << '\n'
         << "# command: " << meta.command << '\n'
         << "# timestamp: " << meta.timestamp << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) out_ << (i ? "," : "") << columns_[i];
    out_ << '\n';
  }
  out_.flush();
}

void Writer::write(const Record& r) {
  if (format_ == Format::jsonl) {
    ordered_json row;
    for (const std::string& c : columns_)
      if (r.data.contains(c)) row[c] = r.data[c];
    out_ << row.dump() << '\n';
  } else {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (i) out_ << ',';
      if (!r.data.contains(columns_[i])) continue;
      const auto& v = r.data[columns_[i]];
      out_ << csv_escape(v.is_string() ? v.get<std::string>() : v.dump());
    }
    out_ << '\n';
  }
  out_.flush();
}

}  // namespace gosc::cli
