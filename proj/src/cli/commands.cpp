/*
Copyright 2026 The srnglab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "srng/commands.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "srng/construction.hpp"
#include "srng/fdivergence.hpp"
#include "srng/oracle.hpp"
#include "srng/rdp.hpp"
#include "srng/spectrum.hpp"

namespace srng {
namespace {

using nlohmann::json;

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) { row(std::move(header)); }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string num(double x) { return format_double(x); }
std::string num(const Real& x) { return format_double(to_double(x)); }

template <MassType T>
std::string mass(const T& x) {
  if constexpr (std::same_as<T, double>) {
    return format_double(x);
  } else {
    return format_rational(x);
  }
}

// Exact in rational mode; floating results get an absolute 1e-10 allowance.
bool leq(const Real& a, const Real& b) { return a <= b; }
bool leq(double a, double b) { return a <= b || a <= b + 1e-10; }

std::string flag(bool b) { return b ? "true" : "false"; }

double rate_units(double nats, Units units) {
  return units == Units::kBits ? nats / std::log(2.0) : nats;
}

std::string unit_name(Units units) { return units == Units::kBits ? "bits" : "nats"; }

std::vector<int> blocklengths(const RunConfig& config) {
  if (config.variant == "masses") return {1};
  return config.n;
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::kConfig, what);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <MassType T>
CommandOutput analyze(const RunConfig& config) {
  using E = EvalType<T>;
  CommandOutput out;
  Csv spectrum({"n", "index", "value", "mass", "count", "cdf"});
  Csv rates({"quantity", "n", "curve", "level", "value", "units", "provenance"});
  json reports = json::array();
  for (double e : config.eps) require(e >= 0 && e < 1, "eps must lie in [0, 1)");

  for (int n : blocklengths(config)) {
    const auto dist = build_distribution<T>(config, n);
    const auto spec = spectrum_cdf(dist);
    for (std::size_t i = 0; i < spec.size(); ++i) {
      const auto& p = spec.points()[i];
      spectrum.row({std::to_string(n), std::to_string(i), num(rate_units(p.value, config.units)),
                    mass(p.mass), std::to_string(std::llround(std::exp(p.log_count))),
                    mass(spec.cdf(i))});
    }
    auto emit = [&](const std::string& quantity, const std::string& curve, double level,
                    double value, const std::string& provenance) {
      // Tail quantities can exceed log|X| at finite n; only the sign is invariant.
      if (value < 0) out.violations.push_back(quantity + " at n=" + std::to_string(n) + " is negative");
      rates.row({quantity, std::to_string(n), curve, num(level),
                 num(rate_units(value, config.units)), unit_name(config.units), provenance});
      json params = {{"n", n}, {"level", level}};
      if (!curve.empty()) params["curve"] = curve;
      reports.push_back({{"quantity", quantity},
                         {"value", rate_units(value, config.units)},
                         {"units", unit_name(config.units)},
                         {"parameters", params},
                         {"provenance", provenance}});
    };
    for (double e : config.eps) {
      emit("sup_entropy_quantile", "", e, sup_entropy_quantile(spec, E(e)).value,
           "sup_entropy_quantile");
    }
    for (const auto& name : config.curves) {
      const auto f = FCurve::parse(name);
      for (double delta : config.deltas) {
        if (!(delta >= 0 && delta < f.f_at_zero())) continue;
        emit("k_f_rate", f.name(), delta, k_f_rate(spec, f, E(delta)).value, "k_f_rate");
        const auto set = smooth_set_for_coverage(dist, f.inverse(E(delta)));
        emit("h0_rate", f.name(), delta, set.log_size / n, "smooth_set_for_coverage");
      }
    }
    for (double delta : config.smooth) {
      const auto set = smooth_max_entropy(dist, delta);
      emit("smooth_max_entropy_rate", "", delta, set.log_size / n, "smooth_max_entropy");
    }
  }
  out.files.emplace_back("spectrum.csv", spectrum.str());
  out.files.emplace_back("rates.csv", rates.str());
  out.files.emplace_back("rates.json", dump(reports));
  return out;
}

template <MassType T>
CommandOutput construct(const RunConfig& config) {
  CommandOutput out;
  require(!config.gammas.empty() && !config.ms.empty(), "construct needs gamma and M");
  Csv table({"n", "M", "gamma", "curve", "converse", "divergence", "achievability", "naive",
             "converse_clamped", "achievability_clamped", "degenerate", "sandwich"});
  Csv smooth({"n", "curve", "delta", "gamma", "M", "set_size", "set_mass", "divergence",
              "bound", "identity", "within_bound"});
  json traces = json::array();
  for (int n : blocklengths(config)) {
    const auto dist = build_distribution<T>(config, n);
    const auto spec = spectrum_cdf(dist);
    for (std::size_t m : config.ms) {
      for (double gamma : config.gammas) {
        const auto built = build_threshold_mapping(dist, m, gamma);
        const auto naive = build_naive_mapping(dist, m, gamma);
        traces.push_back({{"n", n}, {"M", m}, {"gamma", gamma},
                          {"mapping", to_json(built.mapping)}, {"trace", to_json(built.trace)}});
        for (const auto& name : config.curves) {
          const auto f = FCurve::parse(name);
          const auto conv = converse_bound(spec, f, m, gamma);
          const auto ach = achievability_bound(spec, f, m, gamma);
          const auto d = mapping_divergence(f, built.mapping, dist);
          const auto d_naive = mapping_divergence(f, naive.mapping, dist);
          const bool ok = leq(conv.value, d) && leq(d, ach.value);
          if (!ok) {
            out.violations.push_back("sandwich violated at n=" + std::to_string(n) + " M=" +
                                     std::to_string(m) + " gamma=" + num(gamma) + " curve=" + f.name());
          }
          table.row({std::to_string(n), std::to_string(m), num(gamma), f.name(), num(conv.value),
                     num(d), num(ach.value), num(d_naive), flag(conv.clamped), flag(ach.clamped),
                     flag(built.trace.degenerate), flag(ok)});
        }
      }
    }
    for (const auto& name : config.curves) {
      const auto f = FCurve::parse(name);
      for (double delta : config.deltas) {
        if (!(delta >= 0 && delta < f.f_at_zero())) continue;
        for (double gamma : config.gammas) {
          const auto built = build_smooth_set_mapping(dist, f, delta, gamma);
          const auto d = mapping_divergence(f, built.mapping, dist);
          const auto bound = f(to_eval(built.trace.high_mass)) + smooth_set_slack(dist, built.trace, f);
          const bool ok = leq(d, bound);
          if (!ok) {
            out.violations.push_back("smooth-set bound exceeded at n=" + std::to_string(n) +
                                     " curve=" + f.name() + " delta=" + num(delta));
          }
          smooth.row({std::to_string(n), f.name(), num(delta), num(gamma),
                      std::to_string(built.trace.m), std::to_string(built.trace.high.size()),
                      mass(built.trace.high_mass), num(d), num(bound), flag(built.trace.identity),
                      flag(ok)});
        }
      }
    }
  }
  out.files.emplace_back("construct.csv", table.str());
  if (!config.deltas.empty()) out.files.emplace_back("smooth_set.csv", smooth.str());
  out.files.emplace_back("traces.json", dump(traces));
  return out;
}

template <MassType T>
CommandOutput oracle(const RunConfig& config) {
  CommandOutput out;
  require(!config.ms.empty(), "oracle needs M");
  std::map<std::tuple<std::string, std::size_t, std::string>, double> fixtures;
  if (config.fixtures) {
    for (const auto& r : read_fixtures(*config.fixtures)) fixtures[{r.hash, r.m, r.curve}] = r.value;
  }
  Csv table({"hash", "n", "M", "curve", "gamma", "converse", "oracle", "construction", "fixture", "ok"});
  Csv sets({"hash", "n", "delta", "greedy", "bruteforce", "ok"});
  std::vector<FixtureRow> computed;
  std::vector<double> gammas = config.gammas;
  if (gammas.empty()) gammas.push_back(std::nan(""));

  for (int n : blocklengths(config)) {
    const auto dist = build_distribution<T>(config, n);
    const auto spec = spectrum_cdf(dist);
    const auto hash = format_hash(instance_hash(dist));
    for (std::size_t m : config.ms) {
      for (const auto& name : config.curves) {
        const auto f = FCurve::parse(name);
        std::optional<OracleResult<T>> best;
        try {
          best = min_fdiv_bruteforce(dist, m, f);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kCapExceeded) throw;
          table.row({hash, std::to_string(n), std::to_string(m), f.name(), "", "", "cap_exceeded",
                     "", "", "true"});
          continue;
        }
        computed.push_back({hash, m, f.name(), to_double(best->value)});
        std::string fixture = "none";
        bool fixture_ok = true;
        if (config.fixtures) {
          const auto it = fixtures.find({hash, m, f.name()});
          if (it == fixtures.end()) {
            fixture = "missing";
          } else {
            const double v = to_double(best->value);
            fixture_ok = std::abs(it->second - v) <= 1e-9 * std::max(1.0, std::abs(v)) ||
                         (std::isinf(v) && it->second == v);
            fixture = fixture_ok ? "match" : "mismatch";
          }
        }
        for (double gamma : gammas) {
          std::string conv_text, built_text;
          bool ok = fixture_ok;
          if (!std::isnan(gamma)) {
            const auto conv = converse_bound(spec, f, m, gamma);
            const auto built = build_threshold_mapping(dist, m, gamma);
            const auto d = mapping_divergence(f, built.mapping, dist);
            ok = ok && leq(conv.value, best->value) && leq(best->value, d);
            conv_text = num(conv.value);
            built_text = num(d);
          }
          if (!ok) {
            out.violations.push_back("oracle check failed at n=" + std::to_string(n) + " M=" +
                                     std::to_string(m) + " curve=" + f.name());
          }
          table.row({hash, std::to_string(n), std::to_string(m), f.name(),
                     std::isnan(gamma) ? "" : num(gamma), conv_text, num(best->value), built_text,
                     fixture, flag(ok)});
        }
      }
    }
    for (double delta : config.smooth) {
      const auto greedy = smooth_max_entropy(dist, delta).ids.size();
      std::string brute = "cap_exceeded";
      bool ok = true;
      try {
        const auto b = min_set_bruteforce(dist, delta);
        brute = std::to_string(b);
        ok = b == greedy;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kCapExceeded) throw;
      }
      if (!ok) out.violations.push_back("greedy set is not minimal at n=" + std::to_string(n));
      sets.row({hash, std::to_string(n), num(delta), std::to_string(greedy), brute, flag(ok)});
    }
  }
  Csv fixture_csv({"hash", "m", "curve", "value"});
  for (const auto& r : computed) fixture_csv.row({r.hash, std::to_string(r.m), r.curve, num(r.value)});
  out.files.emplace_back("oracle.csv", table.str());
  if (!config.smooth.empty()) out.files.emplace_back("oracle_sets.csv", sets.str());
  out.files.emplace_back("fixtures.csv", fixture_csv.str());
  return out;
}

template <MassType T>
CommandOutput rdp(const RunConfig& config) {
  CommandOutput out;
  require(config.variant == "iid" || config.variant == "masses", "rdp needs an IID source");
  require(!config.distortions.empty() && !config.deltas.empty(), "rdp needs D and delta");
  const auto g = config.distortion();
  Csv table({"n", "D", "Delta", "curve", "lower", "upper", "d_threshold", "rd_value", "k_f_value",
             "units"});
  json reports = json::array();
  for (int n : blocklengths(config)) {
    const auto model = build_model<T>(config, n);
    for (const auto& name : config.curves) {
      const auto f = FCurve::parse(name);
      for (double delta : config.deltas) {
        if (!(delta >= 0 && delta < f.f_at_zero())) continue;
        for (double d : config.distortions) {
          auto r = rdp_report(model, f, delta, g, d, config.cap);
          if (r.upper && r.lower > *r.upper) {
            out.violations.push_back("lower bound exceeds upper bound at D=" + num(d) +
                                     " Delta=" + num(delta));
          }
          const auto u = [&](double x) { return rate_units(x, config.units); };
          r.lower = u(r.lower);
          r.rd_value = u(r.rd_value);
          r.k_f_value = u(r.k_f_value);
          if (r.upper) r.upper = u(*r.upper);
          table.row({std::to_string(n), num(d), num(delta), r.curve, num(r.lower),
                     r.upper ? num(*r.upper) : "", num(r.d_threshold), num(r.rd_value),
                     num(r.k_f_value), unit_name(config.units)});
          auto j = to_json(r);
          j["units"] = unit_name(config.units);
          reports.push_back(std::move(j));
        }
      }
    }
  }
  out.files.emplace_back("rdp.csv", table.str());
  out.files.emplace_back("rdp.json", dump(reports));
  return out;
}

template <MassType T>
CommandOutput sweep(const RunConfig& config) {
  CommandOutput out;
  require(config.variant != "masses", "sweep needs a source model");
  require(!config.deltas.empty(), "sweep needs delta");
  Csv table({"n", "nu", "delta", "quantity", "value", "curve"});
  Csv trends({"curve", "quantity", "delta", "nu", "last", "step", "settled"});
  const auto model = build_model<T>(config, config.n.front());
  for (const auto& name : config.curves) {
    SweepRequest request;
    request.blocklengths = config.n;
    request.curve = FCurve::parse(name);
    request.deltas = config.deltas;
    request.nus = config.nus;
    request.cap = config.cap;
    const auto result = rate_convergence_sweep(model, request);
    for (const auto& r : result.rows) {
      table.row({std::to_string(r.n), num(r.nu), num(r.delta), r.quantity,
                 num(rate_units(r.value, config.units)), r.curve});
    }
    for (const auto& t : result.trends) {
      trends.row({request.curve.name(), t.quantity, num(t.delta), num(t.nu),
                  num(rate_units(t.last, config.units)), num(rate_units(t.step, config.units)),
                  flag(t.settled)});
    }
  }
  out.files.emplace_back("sweep.csv", table.str());
  out.files.emplace_back("trends.csv", trends.str());
  return out;
}

template <template <MassType> class Fn>
CommandOutput dispatch(const RunConfig& config) {
  if (config.use_exact()) return Fn<Rational>{}(config);
  return Fn<double>{}(config);
}

template <MassType T> struct Analyze { CommandOutput operator()(const RunConfig& c) { return analyze<T>(c); } };
template <MassType T> struct Construct { CommandOutput operator()(const RunConfig& c) { return construct<T>(c); } };
template <MassType T> struct Oracle { CommandOutput operator()(const RunConfig& c) { return oracle<T>(c); } };
template <MassType T> struct Rdp { CommandOutput operator()(const RunConfig& c) { return rdp<T>(c); } };
template <MassType T> struct Sweep { CommandOutput operator()(const RunConfig& c) { return sweep<T>(c); } };

}  // namespace

CommandOutput cmd_analyze(const RunConfig& config) { return dispatch<Analyze>(config); }
CommandOutput cmd_construct(const RunConfig& config) { return dispatch<Construct>(config); }
CommandOutput cmd_oracle(const RunConfig& config) { return dispatch<Oracle>(config); }
CommandOutput cmd_rdp(const RunConfig& config) { return dispatch<Rdp>(config); }
CommandOutput cmd_sweep(const RunConfig& config) { return dispatch<Sweep>(config); }

CommandOutput run_command(std::string_view name, const RunConfig& config) {
  if (name == "analyze") return cmd_analyze(config);
  if (name == "construct") return cmd_construct(config);
  if (name == "oracle") return cmd_oracle(config);
  if (name == "rdp") return cmd_rdp(config);
  if (name == "sweep") return cmd_sweep(config);
  throw Error(ErrorKind::kConfig, "unknown command '" + std::string(name) + "'");
}

}  // namespace srng
