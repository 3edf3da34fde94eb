#pragma once

// Experiment configuration: a JSON document validated against a per-experiment
// schema. Validation fills defaults, so the normalized document doubles as the
// complete parameter echo of a run.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hscale/errors.hpp"

namespace hscale::experiments {

using nlohmann::json;
using nlohmann::ordered_json;

/// Validation failure; the message starts with the JSON path of the field.
class ConfigError : public DomainError {
 public:
  ConfigError(const std::string& path, const std::string& msg)
      : DomainError(path + ": " + msg), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

enum class FieldType { number, number_or_null, integer, boolean, string, choice, number_array, object };

inline const char* to_string(FieldType t) {
  switch (t) {
    case FieldType::number: return "number";
    case FieldType::number_or_null: return "number|null";
    case FieldType::integer: return "integer";
    case FieldType::boolean: return "boolean";
    case FieldType::string: return "string";
    case FieldType::choice: return "string";
    case FieldType::number_array: return "number[]";
    case FieldType::object: return "object";
  }
  return "?";
}

struct FieldSpec {
  std::string name;
  FieldType type = FieldType::number;
  ordered_json default_value;
  std::string description;
  std::vector<std::string> choices;
  std::optional<double> lower;
  bool lower_strict = false;
  std::optional<double> upper;
  bool upper_strict = false;
  /// Named precondition that the range check protects.
  std::string requirement;
  std::vector<FieldSpec> children;

  FieldSpec& gt(double v, std::string req) { return bound(lower, lower_strict, v, true, std::move(req)); }
  FieldSpec& ge(double v, std::string req) { return bound(lower, lower_strict, v, false, std::move(req)); }
  FieldSpec& lt(double v, std::string req) { return bound(upper, upper_strict, v, true, std::move(req)); }
  FieldSpec& le(double v, std::string req) { return bound(upper, upper_strict, v, false, std::move(req)); }

 private:
  FieldSpec& bound(std::optional<double>& slot, bool& strict, double v, bool s, std::string req) {
    slot = v;
    strict = s;
    if (!req.empty()) requirement = std::move(req);
    return *this;
  }
};

inline FieldSpec field(std::string name, FieldType type, ordered_json def, std::string desc) {
  FieldSpec f;
  f.name = std::move(name);
  f.type = type;
  f.default_value = std::move(def);
  f.description = std::move(desc);
  return f;
}

inline FieldSpec number(std::string name, double def, std::string desc) {
  return field(std::move(name), FieldType::number, def, std::move(desc));
}
inline FieldSpec number_or_null(std::string name, std::string desc) {
  return field(std::move(name), FieldType::number_or_null, nullptr, std::move(desc));
}
inline FieldSpec integer(std::string name, std::int64_t def, std::string desc) {
  return field(std::move(name), FieldType::integer, def, std::move(desc));
}
inline FieldSpec boolean(std::string name, bool def, std::string desc) {
  return field(std::move(name), FieldType::boolean, def, std::move(desc));
}
inline FieldSpec string(std::string name, std::string def, std::string desc) {
  return field(std::move(name), FieldType::string, std::move(def), std::move(desc));
}
inline FieldSpec choice(std::string name, std::vector<std::string> options, std::string desc) {
  FieldSpec f = field(std::move(name), FieldType::choice, options.front(), std::move(desc));
  f.choices = std::move(options);
  return f;
}
inline FieldSpec number_array(std::string name, std::vector<double> def, std::string desc) {
  return field(std::move(name), FieldType::number_array, def, std::move(desc));
}
inline FieldSpec object(std::string name, std::vector<FieldSpec> children, std::string desc) {
  FieldSpec f = field(std::move(name), FieldType::object, ordered_json::object(), std::move(desc));
  f.children = std::move(children);
  return f;
}

struct ExperimentSchema {
  std::string name;
  std::string description;
  std::vector<FieldSpec> fields;
};

namespace detail {

inline std::vector<FieldSpec> common_fields() {
  return {
      integer("seed", 42, "master seed; every random stream is derived from it").ge(0, "seed is unsigned"),
      integer("threads", 1, "worker threads for path-parallel loops; output does not depend on it")
          .ge(1, "at least one worker"),
  };
}

inline std::vector<FieldSpec> torus_fields(double alpha_lo, double alpha_hi, int K) {
  return {
      number("c", 1.0, "transport coefficient of du = c u_x dW"),
      integer("K", K, "Fourier cutoff, modes -K..K").ge(1, "FourierState: K >= 1"),
      number("alpha_lo", alpha_lo, "lowest user scale index (weights exp(alpha k^2))")
          .gt(0.0, "TorusScale: user indices > 0"),
      number("alpha_hi", alpha_hi, "highest user scale index"),
      number("u0_alpha", 1.5, "initial data u0(k) = exp(-u0_alpha k^2 / 2)").gt(0.0, "u0_alpha > 0"),
  };
}

inline std::vector<FieldSpec> spin_fields() {
  return {
      number("intensity", 1.0, "Poisson intensity").gt(0.0, "sample_poisson: intensity > 0"),
      number("region", 10.0, "radius of the sampling ball").gt(0.0, "sample_poisson: radius > 0"),
      integer("dim", 2, "spatial dimension").ge(1, "sample_poisson: dim in {1,2,3}").le(3, "sample_poisson: dim in {1,2,3}"),
      number("r", 1.0, "interaction radius (strict |x - y| < r)").gt(0.0, "build_graph: r > 0"),
      choice("phi", {"tanh-coupling", "clipped-linear", "constant-diffusion-edge"}, "drift family"),
      choice("psi", {"constant-diffusion-edge", "tanh-coupling", "clipped-linear"}, "diffusion family"),
      number("J", 0.05, "coupling strength of tanh-coupling / clipped-linear"),
      number("clip", 1.0, "clip level M of clipped-linear").gt(0.0, "clipped-linear: clip > 0"),
      number("sigma0", 0.1, "edge value of constant-diffusion-edge"),
      boolean("include_self", false, "add the y = x term to drift and diffusion sums"),
      number("alpha_lo", 0.5, "lowest index of the spin scale exp(-alpha |x|)").ge(0.0, "ScaleBounds: lo >= 0"),
      number("alpha_hi", 1.5, "highest index of the spin scale"),
      string("configuration_file", "", "load the configuration snapshot from this JSON file instead of sampling"),
  };
}

inline std::vector<FieldSpec> with_common(std::vector<FieldSpec> fields) {
  auto out = common_fields();
  out.insert(out.end(), fields.begin(), fields.end());
  return out;
}

inline std::vector<FieldSpec> concat(std::vector<FieldSpec> a, const std::vector<FieldSpec>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline std::vector<ExperimentSchema> build_schemas() {
  std::vector<ExperimentSchema> s;
  s.push_back({"torus-exact",
               "pathwise modulus identity |u(t,k)|^2 / |u(0,k)|^2 = exp(t c^2 k^2) of the exact torus solution",
               with_common({
                   number("c", 1.0, "transport coefficient"),
                   integer("K", 32, "Fourier cutoff").ge(1, "FourierState: K >= 1"),
                   number("T", 0.25, "final time").gt(0.0, "TimeGrid: T > 0"),
                   integer("n_times", 10, "number of grid times in (0, T]").ge(1, "TimeGrid: at least one step"),
                   integer("N", 100, "Monte Carlo paths").ge(1, "N >= 1"),
                   number("u0_alpha", 0.5, "initial data exp(-u0_alpha k^2 / 2)").gt(0.0, "u0_alpha > 0"),
                   number("rel_tol", 1e-12, "pass threshold on the relative error").gt(0.0, "rel_tol > 0"),
               })});
  s.push_back({"torus-lifetime",
               "partial sums of ||u(t)||^2_beta under K doubling, before and after the lifetime (alpha - beta)/c^2",
               with_common({
                   number("alpha", 1.0, "index of the initial data u0(k) = exp(-alpha k^2 / 2)"),
                   number("beta", 0.5, "user index of the target space").gt(0.0, "torus_lifetime: beta > 0"),
                   number("c", 1.0, "transport coefficient"),
                   integer("K", 32, "base cutoff; compared against 2K").ge(1, "partial sums need K >= 1"),
                   number_array("times", {0.4, 0.6}, "times at which the partial sums are compared"),
                   number("stable_tol", 1e-6, "max |S_2K - S_K| before the lifetime").gt(0.0, "stable_tol > 0"),
                   number("growth_factor", 10.0, "min S_2K / S_K after the lifetime").gt(1.0, "growth_factor > 1"),
               })});
  s.push_back({"torus-em-order",
               "strong error of Euler-Maruyama against the exact solution over a dt ladder",
               with_common({
                   number("c", 1.0, "transport coefficient"),
                   integer("K", 8, "Fourier cutoff").ge(1, "FourierState: K >= 1"),
                   number("T", 0.1, "final time").gt(0.0, "TimeGrid: T > 0"),
                   number_array("dts", {1e-2, 5e-3, 2.5e-3, 1.25e-3}, "step sizes"),
                   integer("N", 500, "Monte Carlo paths").ge(1, "N >= 1"),
                   number("u0_alpha", 1.0, "initial data exp(-u0_alpha k^2 / 2)").gt(0.0, "u0_alpha > 0"),
                   number("slope_target", 0.5, "expected strong order"),
                   number("slope_tol", 0.15, "accepted deviation of the fitted slope").ge(0.0, "slope_tol >= 0"),
               })});
  s.push_back({"picard-contraction",
               "Picard iteration in the discretized triple norm with per-iteration contraction ratios",
               with_common({
                   choice("model", {"torus", "spins"}, "model whose fields drive the iteration"),
                   number("b_factor", 0.5, "b as a multiple of min(b*) when b is null")
                       .gt(0.0, "picard_solve precondition b > 0"),
                   number_or_null("b", "absolute weight parameter b; overrides b_factor")
                       .gt(0.0, "picard_solve precondition b > 0"),
                   integer("steps", 40, "time steps on [0, T]").ge(1, "TimeGrid: at least one step"),
                   number("horizon_fraction", 0.9, "T = horizon_fraction * (alpha_hi - alpha_lo) * b")
                       .gt(0.0, "picard_solve precondition T > 0")
                       .lt(1.0, "picard_solve precondition T < (hi - lo) b"),
                   integer("N", 200, "Monte Carlo paths").ge(1, "N >= 1"),
                   number("tol", 1e-8, "stopping tolerance on the triple-norm distance").gt(0.0, "tol > 0"),
                   integer("max_iter", 50, "iteration cap").ge(1, "max_iter >= 1"),
                   integer("n_alpha", 16, "index grid size for the sup over alpha").ge(1, "index grid non-empty"),
                   number("ratio_slack", 0.1, "pass if every ratio <= min constant + ratio_slack")
                       .ge(0.0, "ratio_slack >= 0"),
                   number("mc_tol", 0.1, "within_bound column: ratio <= min constant * (1 + mc_tol)")
                       .ge(0.0, "mc_tol >= 0"),
                   object("torus", torus_fields(0.5, 1.0, 16), "torus model parameters"),
                   object("spins", concat(spin_fields(), {choice("initial", {"random_normal", "constant"},
                                                                  "initial spins"),
                                                           number("initial_value", 1.0, "value for constant initial spins")}),
                          "spin model parameters"),
               })});
  s.push_back({"spins-sim",
               "Euler-Maruyama simulation of the quenched spin system on one configuration",
               with_common(concat(spin_fields(),
                                  {
                                      number("T", 0.5, "final time").gt(0.0, "TimeGrid: T > 0"),
                                      number("dt", 0.01, "time step").gt(0.0, "TimeGrid: dt > 0"),
                                      integer("N", 10, "Monte Carlo paths").ge(1, "N >= 1"),
                                      choice("initial", {"random_normal", "constant"}, "initial spins"),
                                      number("initial_value", 1.0, "value for constant initial spins"),
                                      string("snapshot_out", "", "write the configuration snapshot to this file"),
                                  }))});
  s.push_back({"spins-truncation",
               "coupled solutions on nested truncations compared on the observation window |x| <= R0",
               with_common(concat(spin_fields(),
                                  {
                                      number_array("radii", {4, 6, 8, 10}, "strictly increasing truncation radii"),
                                      number("R0", 2.0, "observation radius").gt(0.0, "truncation_convergence: R0 > 0"),
                                      number("T", 0.5, "final time").gt(0.0, "TimeGrid: T > 0"),
                                      number("dt", 0.01, "time step").gt(0.0, "TimeGrid: dt > 0"),
                                      integer("N", 100, "Monte Carlo paths").ge(1, "N >= 1"),
                                      choice("initial", {"random_normal", "constant"},
                                             "initial spins; constant means 1 at every point"),
                                      number("max_ratio", 1.0 / 3.0, "pass if D(R_{m-1}, R_m) / D(R_1, R_m) <= max_ratio")
                                          .gt(0.0, "max_ratio > 0"),
                                      number("se_factor", 2.0, "monotonicity slack in combined standard errors")
                                          .ge(0.0, "se_factor >= 0"),
                                  }))});
  s.push_back({"constants-report",
               "density constant a(gamma, r) and the derived constants c1, c2, L2, mu over growing regions",
               with_common(concat(spin_fields(),
                                  {
                                      number_array("radii", {10, 20, 40}, "strictly increasing region radii"),
                                      number("C", 0.1, "Lipschitz constant of the admissible family")
                                          .ge(0.0, "density_constants: C >= 0"),
                                      number("growth_limit", 2.0, "soft bound on a_gamma growth per radius doubling")
                                          .gt(0.0, "growth_limit > 0"),
                                  }))});
  s.push_back({"gl-check",
               "empirical generalized Lipschitz constant of the model fields against the declared L",
               with_common({
                   choice("model", {"torus", "spins"}, "model whose fields are checked"),
                   choice("field", {"both", "drift", "diffusion"}, "which coefficient to check"),
                   integer("num_pairs", 2000, "sampled vector pairs").ge(1, "gl_constant_check: num_pairs >= 1"),
                   integer("num_index_pairs", 5, "index pairs per vector pair")
                       .ge(1, "gl_constant_check: num_index_pairs >= 1"),
                   number("tol", 1e-9, "relative slack on the declared constant").ge(0.0, "tol >= 0"),
                   object("torus", torus_fields(0.6, 1.0, 16), "torus model parameters"),
                   object("spins", spin_fields(), "spin model parameters"),
               })});
  return s;
}

}  // namespace detail

inline const std::vector<ExperimentSchema>& experiment_schemas() {
  static const std::vector<ExperimentSchema> schemas = detail::build_schemas();
  return schemas;
}

inline std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& s : experiment_schemas()) out.push_back(s.name);
  return out;
}

inline const ExperimentSchema& find_schema(std::string_view name) {
  for (const auto& s : experiment_schemas()) {
    if (s.name == name) return s;
  }
  std::string msg = "unknown experiment '" + std::string(name) + "'; valid names:";
  for (const auto& n : experiment_names()) msg += " " + n;
  throw ConfigError("$.experiment", msg);
}

namespace detail {

inline std::string describe_bound(const FieldSpec& f) {
  std::string s;
  auto fmt = [](double v) {
    json j = v;
    return j.dump();
  };
  if (f.lower) s += std::string(f.lower_strict ? "> " : ">= ") + fmt(*f.lower);
  if (f.upper) s += std::string(s.empty() ? "" : " and ") + (f.upper_strict ? "< " : "<= ") + fmt(*f.upper);
  return s;
}

inline void check_range(const FieldSpec& f, double v, const std::string& path) {
  const bool lo_bad = f.lower && (f.lower_strict ? !(v > *f.lower) : !(v >= *f.lower));
  const bool hi_bad = f.upper && (f.upper_strict ? !(v < *f.upper) : !(v <= *f.upper));
  if (lo_bad || hi_bad) {
    std::string msg = "must be " + describe_bound(f);
    if (!f.requirement.empty()) msg += " (" + f.requirement + ")";
    throw ConfigError(path, msg);
  }
}

inline ordered_json validate_object(const std::vector<FieldSpec>& fields, const json& in, const std::string& path);

inline ordered_json validate_value(const FieldSpec& f, const json& v, const std::string& path) {
  auto type_error = [&](const char* what) { throw ConfigError(path, std::string("expected ") + what); };
  switch (f.type) {
    case FieldType::number:
      if (!v.is_number()) type_error("number");
      if (!std::isfinite(v.get<double>())) type_error("finite number");
      check_range(f, v.get<double>(), path);
      return v.get<double>();
    case FieldType::number_or_null:
      if (v.is_null()) return nullptr;
      if (!v.is_number()) type_error("number or null");
      check_range(f, v.get<double>(), path);
      return v.get<double>();
    case FieldType::integer:
      if (!v.is_number_integer()) type_error("integer");
      check_range(f, static_cast<double>(v.get<std::int64_t>()), path);
      return v.get<std::int64_t>();
    case FieldType::boolean:
      if (!v.is_boolean()) type_error("boolean");
      return v.get<bool>();
    case FieldType::string:
      if (!v.is_string()) type_error("string");
      return v.get<std::string>();
    case FieldType::choice: {
      if (!v.is_string()) type_error("string");
      const auto s = v.get<std::string>();
      for (const auto& c : f.choices) {
        if (c == s) return s;
      }
      std::string msg = "unknown value '" + s + "'; valid values:";
      for (const auto& c : f.choices) msg += " " + c;
      throw ConfigError(path, msg);
    }
    case FieldType::number_array: {
      if (!v.is_array()) type_error("array of numbers");
      if (v.empty()) throw ConfigError(path, "must not be empty");
      ordered_json out = ordered_json::array();
      for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) throw ConfigError(p, "expected finite number");
        out.push_back(v[i].get<double>());
      }
      return out;
    }
    case FieldType::object:
      if (!v.is_object()) type_error("object");
      return validate_object(f.children, v, path);
  }
  return nullptr;
}

inline ordered_json validate_object(const std::vector<FieldSpec>& fields, const json& in, const std::string& path) {
  for (auto it = in.begin(); it != in.end(); ++it) {
    bool known = false;
    for (const auto& f : fields) known |= f.name == it.key();
    if (!known) throw ConfigError(path + "." + it.key(), "unknown field");
  }
  ordered_json out = ordered_json::object();
  for (const auto& f : fields) {
    const std::string p = path + "." + f.name;
    if (in.contains(f.name)) {
      out[f.name] = validate_value(f, in.at(f.name), p);
    } else if (f.type == FieldType::object) {
      out[f.name] = validate_object(f.children, json::object(), p);
    } else {
      out[f.name] = f.default_value;
    }
  }
  return out;
}

}  // namespace detail

/// A validated configuration. `params` holds every field of the schema,
/// defaults included, in schema order.
class ExperimentConfig {
 public:
  ExperimentConfig(std::string experiment, ordered_json params)
      : experiment_(std::move(experiment)), params_(std::move(params)) {}

  const std::string& experiment() const noexcept { return experiment_; }
  const ordered_json& params() const noexcept { return params_; }

  /// Full echo: {"experiment": ..., <params>}.
  ordered_json echo() const {
    ordered_json e;
    e["experiment"] = experiment_;
    for (auto it = params_.begin(); it != params_.end(); ++it) e[it.key()] = it.value();
    return e;
  }

  std::uint64_t seed() const { return params_.at("seed").get<std::uint64_t>(); }
  std::size_t threads() const { return params_.at("threads").get<std::size_t>(); }

 private:
  std::string experiment_;
  ordered_json params_;
};

/// Read-only view of one parameter object (top level or nested), with the
/// JSON path kept for error messages.
class Params {
 public:
  Params(const ordered_json& obj, std::string path) : obj_(&obj), path_(std::move(path)) {}

  double num(const char* k) const { return obj_->at(k).get<double>(); }
  std::optional<double> opt_num(const char* k) const {
    const auto& v = obj_->at(k);
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
  }
  std::int64_t integer(const char* k) const { return obj_->at(k).get<std::int64_t>(); }
  std::size_t size(const char* k) const { return static_cast<std::size_t>(integer(k)); }
  bool flag(const char* k) const { return obj_->at(k).get<bool>(); }
  std::string str(const char* k) const { return obj_->at(k).get<std::string>(); }
  std::vector<double> nums(const char* k) const { return obj_->at(k).get<std::vector<double>>(); }
  Params sub(const char* k) const { return Params(obj_->at(k), path_ + "." + k); }
  std::string path(const char* k) const { return path_ + "." + k; }

 private:
  const ordered_json* obj_;
  std::string path_;
};

namespace detail {

inline void require(bool ok, const std::string& path, const std::string& msg) {
  if (!ok) throw ConfigError(path, msg);
}

inline void check_increasing(const Params& p, const char* key, const std::string& who) {
  const auto xs = p.nums(key);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require(xs[i] > 0.0, p.path(key) + "[" + std::to_string(i) + "]", "must be > 0 (" + who + ")");
    if (i > 0) {
      require(xs[i] > xs[i - 1], p.path(key) + "[" + std::to_string(i) + "]",
              "must be strictly increasing (" + who + ")");
    }
  }
}

inline void check_torus_block(const Params& t) {
  require(t.num("alpha_hi") > t.num("alpha_lo"), t.path("alpha_hi"),
          "must exceed alpha_lo (ScaleBounds: lower index < upper index)");
  const double K = static_cast<double>(t.integer("K"));
  require(0.5 * t.num("u0_alpha") * K * K <= 690.0, t.path("u0_alpha"),
          "u0_alpha K^2 / 2 must be <= 690 so that every initial mode is a normal double");
}

inline void check_spin_block(const Params& s) {
  require(s.num("alpha_hi") > s.num("alpha_lo"), s.path("alpha_hi"),
          "must exceed alpha_lo (ScaleBounds: lower index < upper index)");
}

/// Cross-field checks that a single field's range cannot express.
inline void check_experiment(const std::string& name, const Params& p) {
  if (name == "torus-exact") {
    const double e = p.num("T") * p.num("c") * p.num("c") * static_cast<double>(p.integer("K") * p.integer("K"));
    require(e <= 700.0, p.path("T"), "T c^2 K^2 must be <= 700 (exact_mode overflow guard)");
    const double K = static_cast<double>(p.integer("K"));
    require(0.5 * p.num("u0_alpha") * K * K <= 690.0, p.path("u0_alpha"),
            "u0_alpha K^2 / 2 must be <= 690 so that every initial mode is a normal double");
  } else if (name == "torus-lifetime") {
    require(p.num("alpha") > p.num("beta"), p.path("alpha"), "must exceed beta (torus_lifetime: alpha > beta)");
    require(p.num("c") != 0.0, p.path("c"), "must be nonzero (torus_lifetime: c != 0)");
    const auto ts = p.nums("times");
    const double K2 = 4.0 * static_cast<double>(p.integer("K") * p.integer("K"));
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const std::string path = p.path("times") + "[" + std::to_string(i) + "]";
      require(ts[i] >= 0.0, path, "must be >= 0");
      const double rate = ts[i] * p.num("c") * p.num("c") + p.num("beta") - p.num("alpha");
      require(rate * K2 <= 700.0, path, "exponent (t c^2 + beta - alpha)(2K)^2 exceeds the overflow guard 700");
    }
  } else if (name == "torus-em-order") {
    const auto dts = p.nums("dts");
    require(dts.size() >= 2, p.path("dts"), "need at least two step sizes for a slope");
    for (std::size_t i = 0; i < dts.size(); ++i) {
      const std::string path = p.path("dts") + "[" + std::to_string(i) + "]";
      require(dts[i] > 0.0 && dts[i] <= p.num("T"), path, "must be in (0, T] (TimeGrid: dt <= T)");
    }
    const double e = p.num("T") * p.num("c") * p.num("c") * static_cast<double>(p.integer("K") * p.integer("K"));
    require(e <= 700.0, p.path("T"), "T c^2 K^2 must be <= 700 (exact_mode overflow guard)");
  } else if (name == "picard-contraction") {
    check_torus_block(p.sub("torus"));
    check_spin_block(p.sub("spins"));
  } else if (name == "spins-sim") {
    check_spin_block(p);
    require(p.num("dt") <= p.num("T"), p.path("dt"), "must be <= T (TimeGrid: dt <= T)");
  } else if (name == "spins-truncation") {
    check_spin_block(p);
    check_increasing(p, "radii", "truncation_convergence");
    const auto radii = p.nums("radii");
    require(radii.size() >= 2, p.path("radii"), "need at least two radii (truncation_convergence)");
    require(p.num("R0") < radii.front(), p.path("R0"), "must be < radii[0] (truncation_convergence: R0 < R_1)");
    require(p.str("configuration_file").empty() ? radii.back() <= p.num("region") : true, p.path("radii"),
            "largest radius must be <= region (truncations are subsets of the sampled configuration)");
    require(p.num("dt") <= p.num("T"), p.path("dt"), "must be <= T (TimeGrid: dt <= T)");
  } else if (name == "constants-report") {
    check_spin_block(p);
    check_increasing(p, "radii", "constants-report");
  } else if (name == "gl-check") {
    check_torus_block(p.sub("torus"));
    check_spin_block(p.sub("spins"));
  }
}

}  // namespace detail

/// Parses and validates a configuration document. A seed override replaces
/// the file's seed (flag > file > default).
inline ExperimentConfig parse_config(std::string_view text, std::optional<std::uint64_t> seed_override = std::nullopt) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("$", "expected a JSON object");
  if (!doc.contains("experiment")) throw ConfigError("$.experiment", "missing required field");
  if (!doc.at("experiment").is_string()) throw ConfigError("$.experiment", "expected string");
  const std::string name = doc.at("experiment").get<std::string>();
  const ExperimentSchema& schema = find_schema(name);
  doc.erase("experiment");
  if (seed_override) doc["seed"] = *seed_override;
  ordered_json params = detail::validate_object(schema.fields, doc, "$");
  detail::check_experiment(name, Params(params, "$"));
  return ExperimentConfig(name, std::move(params));
}

/// Machine-readable schema of one experiment, as printed by `list`.
inline ordered_json schema_json(const std::vector<FieldSpec>& fields) {
  ordered_json out = ordered_json::array();
  for (const auto& f : fields) {
    ordered_json e;
    e["name"] = f.name;
    e["type"] = to_string(f.type);
    if (f.type == FieldType::object) {
      e["fields"] = schema_json(f.children);
    } else {
      e["default"] = f.default_value;
    }
    if (!f.choices.empty()) e["choices"] = f.choices;
    const std::string b = detail::describe_bound(f);
    if (!b.empty()) e["range"] = b;
    e["description"] = f.description;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace hscale::experiments
