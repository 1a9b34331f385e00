#pragma once

#include <atomic>
#include <chrono>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "cmvlab/bispectral.hpp"
#include "cmvlab/sampling.hpp"

namespace cmvlab {

using Json = nlohmann::ordered_json;

// Scenario configuration and machine-readable reports.
//
// Exact-backend numbers travel as rational strings "p/q" so no value passes
// through decimal rounding; float numbers are decimal strings. A complex
// number is a [re, im] pair. Reports are deterministic for the exact backend
// (byte-identical across runs and sweep parallelism); wall-clock timing is
// only emitted when explicitly requested, to keep the default byte-stable.

namespace scenario_detail {

template <class S>
Json complex_to_json(const S& v) {
  using T = ScalarTraits<S>;
  return Json::array({T::real_to_string(T::re(v)), T::real_to_string(T::im(v))});
}

template <class S>
S complex_from_json(const Json& j) {
  using T = ScalarTraits<S>;
  if (!j.is_array() || j.size() != 2)
    throw ConfigInvalid("complex value must be a [re, im] pair");
  return T::from_parts(T::real_from_string(j[0].get<std::string>()),
                       T::real_from_string(j[1].get<std::string>()));
}

template <class S>
Json poly_to_json(const LaurentPoly<S>& f) {
  using T = ScalarTraits<S>;
  Json out = Json::array();
  for (const auto& [d, c] : f.coeffs())
    out.push_back(Json::array(
        {d, T::real_to_string(T::re(c)), T::real_to_string(T::im(c))}));
  return out;
}

template <class S>
Json matrix_triplets(const BandMatrix<S>& m) {
  using T = ScalarTraits<S>;
  Json out = Json::array();
  m.for_each_trusted([&](int i, int j, const S& v) {
    if (!T::is_zero(v))
      out.push_back(Json::array({i, j, T::real_to_string(T::re(v)),
                                 T::real_to_string(T::im(v))}));
  });
  return out;
}

}  // namespace scenario_detail

struct ScenarioConfig {
  Json raw;  // validated configuration document

  static ScenarioConfig parse(const Json& j);

  std::string kind() const { return raw.at("kind").get<std::string>(); }
  std::string backend() const { return raw.at("backend").get<std::string>(); }
  int window() const { return raw.at("window").get<int>(); }
  double zero_tol() const { return raw.at("tolerance").at("zero").get<double>(); }
  double rank_tol() const { return raw.at("tolerance").at("rank").get<double>(); }
};

struct Report {
  Json doc;

  std::string serialize() const { return doc.dump(2) + "\n"; }
  static Report parse_text(const std::string& text) {
    return Report{Json::parse(text)};
  }
  bool ok() const {
    return doc.contains("result") && !doc.at("result").contains("error") &&
           (!doc.at("result").contains("all_pass") ||
            doc.at("result").at("all_pass").get<bool>());
  }
};

inline ScenarioConfig ScenarioConfig::parse(const Json& j) {
  if (!j.is_object()) throw ConfigInvalid("scenario must be an object");
  Json cfg = j;

  const std::string kind = cfg.value("kind", "");
  static const std::vector<std::string> kinds = {
      "solve", "verify-identities", "verify-kernel", "reconstruct", "olp-dump"};
  if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
    throw ConfigInvalid("kind: expected one of solve, verify-identities, "
                        "verify-kernel, reconstruct, olp-dump");

  const std::string backend = cfg.value("backend", "exact");
  if (backend != "exact" && backend != "float")
    throw ConfigInvalid("backend: expected 'exact' or 'float'");
  cfg["backend"] = backend;

  if (!cfg.contains("verblunsky") || !cfg["verblunsky"].is_object())
    throw ConfigInvalid("verblunsky: missing coefficient specification");
  const std::string vkind = cfg["verblunsky"].value("kind", "");
  if (vkind == "zero") {
  } else if (vkind == "constant") {
    if (!cfg["verblunsky"].contains("value"))
      throw ConfigInvalid("verblunsky.value: required for constant kind");
  } else if (vkind == "list") {
    if (!cfg["verblunsky"].contains("values") ||
        !cfg["verblunsky"]["values"].is_array())
      throw ConfigInvalid("verblunsky.values: required list for list kind");
  } else if (vkind == "geometric") {
    if (backend == "exact")
      throw ConfigInvalid("verblunsky.kind geometric: float backend only");
    if (!cfg["verblunsky"].contains("c") || !cfg["verblunsky"].contains("r"))
      throw ConfigInvalid("verblunsky: geometric kind needs c and r");
  } else {
    throw ConfigInvalid("verblunsky.kind: expected zero, constant, list "
                        "or geometric");
  }

  if (!cfg.contains("window")) cfg["window"] = 64;
  if (!cfg["window"].is_number_integer() || cfg["window"].get<int>() < 4)
    throw ConfigInvalid("window: expected integer >= 4");

  Json tol = cfg.value("tolerance", Json::object());
  if (!tol.contains("zero")) tol["zero"] = kDefaultZeroTol;
  if (!tol.contains("rank")) tol["rank"] = kDefaultRankTol;
  cfg["tolerance"] = tol;

  if (kind == "solve") {
    if (!cfg.contains("order") || cfg["order"].get<int>() < 1)
      throw ConfigInvalid("order: solve needs ad order >= 1");
    if (!cfg.contains("pattern") || !cfg["pattern"].is_object())
      throw ConfigInvalid("pattern: required for solve");
    Json& pat = cfg["pattern"];
    const std::string pkind = pat.value("kind", "");
    if (pkind != "diagonal" && pkind != "almost-diagonal" &&
        pkind != "tridiagonal" && pkind != "almost-tridiagonal")
      throw ConfigInvalid("pattern.kind: expected diagonal, almost-diagonal, "
                          "tridiagonal or almost-tridiagonal");
    if (!pat.contains("length"))
      throw ConfigInvalid("pattern.length: unknown truncation M required");
    if (!pat.contains("head")) pat["head"] = 0;
    const int m = pat["length"].get<int>(), n0 = pat["head"].get<int>();
    if (m < 1 || n0 < 0 || n0 >= m)
      throw ConfigInvalid("pattern: need 0 <= head < length");
    if ((pkind == "diagonal" || pkind == "tridiagonal") && n0 != 0)
      throw ConfigInvalid("pattern.head: plain patterns take no head block");
  } else if (kind == "verify-identities") {
    if (!cfg.contains("order") || cfg["order"].get<int>() < 1)
      throw ConfigInvalid("order: identity suite needs n >= 1");
    if (!cfg.contains("instances")) cfg["instances"] = 1;
    if (!cfg.contains("seed")) cfg["seed"] = 1;
  } else if (kind == "verify-kernel") {
    if (!cfg.contains("order") || cfg["order"].get<int>() < 1)
      throw ConfigInvalid("order: kernel certification needs n >= 1");
    if (!cfg.contains("z")) throw ConfigInvalid("z: spectral point required");
  } else if (kind == "reconstruct") {
    if (!cfg.contains("order_bound") || cfg["order_bound"].get<int>() < 0)
      throw ConfigInvalid("order_bound: required, >= 0");
    if (!cfg.contains("omega") || !cfg["omega"].is_object())
      throw ConfigInvalid("omega: operand specification required");
    const std::string okind = cfg["omega"].value("kind", "");
    if (okind != "lebesgue" && okind != "diagonal" && okind != "symbol")
      throw ConfigInvalid("omega.kind: expected lebesgue, diagonal or symbol");
  } else if (kind == "olp-dump") {
    if (!cfg.contains("count") || cfg["count"].get<int>() < 1)
      throw ConfigInvalid("count: number of polynomials required");
  }

  return ScenarioConfig{cfg};
}

namespace scenario_detail {

template <class S>
VerblunskySeq<S> make_verblunsky(const Json& v) {
  const std::string kind = v.at("kind").get<std::string>();
  if (kind == "zero") return VerblunskySeq<S>::zero();
  if (kind == "constant")
    return VerblunskySeq<S>::constant(complex_from_json<S>(v.at("value")));
  if (kind == "list") {
    std::vector<S> values;
    for (const auto& item : v.at("values"))
      values.push_back(complex_from_json<S>(item));
    return VerblunskySeq<S>::list(std::move(values));
  }
  if constexpr (!ScalarTraits<S>::exact)
    if (kind == "geometric")
      return VerblunskySeq<S>::geometric(v.at("c").get<double>(),
                                         v.at("r").get<double>());
  throw ConfigInvalid("unsupported verblunsky kind for this backend");
}

template <class S>
Json run_solve(const ScenarioConfig& cfg) {
  const Json& pat = cfg.raw.at("pattern");
  SolvePattern pattern;
  const std::string pkind = pat.at("kind").get<std::string>();
  pattern.kind = pkind == "diagonal" ? SolvePattern::Kind::Diagonal
                 : pkind == "almost-diagonal" ? SolvePattern::Kind::AlmostDiagonal
                 : pkind == "tridiagonal" ? SolvePattern::Kind::Tridiagonal
                                          : SolvePattern::Kind::AlmostTridiagonal;
  pattern.head = pat.at("head").get<int>();
  pattern.length = pat.at("length").get<int>();

  auto alpha = make_verblunsky<S>(cfg.raw.at("verblunsky"));
  auto sys = assemble_system(alpha, cfg.raw.at("order").get<int>(), pattern,
                             cfg.window());
  auto basis = nullspace(sys, cfg.rank_tol(), cfg.zero_tol());

  Json result;
  result["dimension"] = basis.dimension;
  result["classification"] = to_string(basis.classification);
  result["contains_identity"] = basis.contains_identity;
  result["contains_lebesgue"] = basis.contains_lebesgue;
  result["horizon"] = sys.harvest_bound;
  Json jb = Json::array();
  for (const auto& b : basis.basis)
    jb.push_back(Json{{"triplets", matrix_triplets(b)}});
  result["basis"] = jb;
  return result;
}

template <class S>
Json run_verify_identities(const ScenarioConfig& cfg) {
  const int n = cfg.raw.at("order").get<int>();
  const int instances = cfg.raw.at("instances").get<int>();
  Rng rng(cfg.raw.at("seed").get<unsigned long long>());

  auto alpha = make_verblunsky<S>(cfg.raw.at("verblunsky"));
  CmvPair<S> pair(alpha, cfg.window());

  std::vector<std::pair<std::string, bool>> aggregated;
  bool all = true;
  for (int inst = 0; inst < instances; ++inst) {
    BandMatrix<S> omega =
        inst == 0 ? lebesgue_solution<S>(cfg.window())
                  : random_hermitian_band<S>(rng, cfg.window(), 1);
    IdentityReport rep = hermitian_relations_check(pair, omega, n, cfg.zero_tol());
    for (const auto& check : rep.checks) {
      all = all && check.second;
      auto it = std::find_if(aggregated.begin(), aggregated.end(),
                             [&](const auto& p) { return p.first == check.first; });
      if (it == aggregated.end())
        aggregated.push_back(check);
      else
        it->second = it->second && check.second;
    }
  }
  Json identities;
  for (const auto& [name, ok] : aggregated) identities[name] = ok;
  Json result;
  result["all_pass"] = all;
  result["instances"] = instances;
  result["identities"] = identities;
  result["horizon"] = pair.cpow(1).horizon();
  return result;
}

template <class S>
Json run_verify_kernel(const ScenarioConfig& cfg) {
  using T = ScalarTraits<S>;
  auto alpha = make_verblunsky<S>(cfg.raw.at("verblunsky"));
  const S z = complex_from_json<S>(cfg.raw.at("z"));
  const int n = cfg.raw.at("order").get<int>();

  std::vector<S> tail;
  const Json tail_spec = cfg.raw.value("tail", Json("lebesgue"));
  if (tail_spec.is_string() && tail_spec.get<std::string>() == "lebesgue") {
    for (int k = 0; k < cfg.window(); ++k)
      tail.push_back(T::from_int(lebesgue_lambda(k)));
  } else if (tail_spec.is_array()) {
    for (const auto& item : tail_spec) tail.push_back(complex_from_json<S>(item));
  } else {
    throw ConfigInvalid("tail: expected \"lebesgue\" or a list of values");
  }

  auto rep = verify_kernel_basis(alpha, z, n, cfg.window(), tail, cfg.zero_tol());
  Json result;
  result["all_pass"] = rep.all_pass();
  result["cascade_ok"] = rep.cascade_ok;
  result["band_ok"] = rep.band_ok;
  result["gamma_ok"] = rep.gamma_ok;
  result["gamma_nonzero"] = rep.gamma_nonzero;
  result["delta_ok"] = rep.delta_ok;
  Json g = Json::array(), d = Json::array();
  for (const auto& v : rep.gamma) g.push_back(complex_to_json(v));
  for (const auto& v : rep.delta) d.push_back(complex_to_json(v));
  result["gamma"] = g;
  result["delta"] = d;
  result["horizon"] = rep.horizon;
  return result;
}

template <class S>
Json run_reconstruct(const ScenarioConfig& cfg) {
  using T = ScalarTraits<S>;
  auto alpha = make_verblunsky<S>(cfg.raw.at("verblunsky"));
  const int r = cfg.raw.at("order_bound").get<int>();
  const int window = cfg.window();

  BandMatrix<S> omega = BandMatrix<S>::identity(window);
  const Json& ospec = cfg.raw.at("omega");
  const std::string okind = ospec.at("kind").get<std::string>();
  if (okind == "lebesgue") {
    omega = lebesgue_solution<S>(window);
  } else if (okind == "diagonal") {
    std::vector<S> d;
    for (const auto& item : ospec.at("values"))
      d.push_back(complex_from_json<S>(item));
    d.resize(window, T::zero());
    omega = BandMatrix<S>::diagonal(std::move(d));
  } else {  // symbol: f(C) for a Laurent polynomial f
    CmvPair<S> pair(alpha, window);
    omega = BandMatrix<S>::zero(window);
    for (const auto& item : ospec.at("poly")) {
      const int deg = item.at(0).get<int>();
      const S c = T::from_parts(
          T::real_from_string(item.at(1).get<std::string>()),
          T::real_from_string(item.at(2).get<std::string>()));
      omega = omega + c * pair.cpow(deg);
    }
  }

  DiffOperator<S> d = reconstruct_operator(alpha, omega, r, window, cfg.zero_tol());
  Json coeffs = Json::array();
  for (int k = 0; k <= d.order(); ++k)
    coeffs.push_back(Json{{"k", k}, {"poly", poly_to_json(d.coeff(k))}});
  Json result;
  result["order"] = d.order();
  result["coefficients"] = coeffs;
  result["horizon"] = window;
  return result;
}

template <class S>
Json run_olp_dump(const ScenarioConfig& cfg) {
  auto alpha = make_verblunsky<S>(cfg.raw.at("verblunsky"));
  const int count = cfg.raw.at("count").get<int>();
  auto olp = compute_olp(alpha, count);
  Json x = Json::array(), chi = Json::array();
  for (const auto& f : olp.x) x.push_back(poly_to_json(f));
  for (const auto& f : olp.chi) chi.push_back(poly_to_json(f));
  Json result;
  result["count"] = count;
  result["x"] = x;
  result["chi"] = chi;
  result["horizon"] = cfg.window();
  return result;
}

template <class S>
Json dispatch(const ScenarioConfig& cfg) {
  const std::string kind = cfg.kind();
  if (kind == "solve") return run_solve<S>(cfg);
  if (kind == "verify-identities") return run_verify_identities<S>(cfg);
  if (kind == "verify-kernel") return run_verify_kernel<S>(cfg);
  if (kind == "reconstruct") return run_reconstruct<S>(cfg);
  return run_olp_dump<S>(cfg);
}

}  // namespace scenario_detail

inline Report run_scenario(const ScenarioConfig& cfg, bool with_timing = false) {
  Report report;
  report.doc["scenario"] = cfg.raw;
  report.doc["backend"] = cfg.backend();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    report.doc["result"] = cfg.backend() == "exact"
                               ? scenario_detail::dispatch<ExactComplex>(cfg)
                               : scenario_detail::dispatch<FloatComplex>(cfg);
  } catch (const Error& e) {
    Json err;
    err["error"] = Json{{"type", error_name(e)}, {"message", e.what()}};
    report.doc["result"] = err;
  }
  if (with_timing)
    report.doc["wall_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                  t0)
            .count();
  return report;
}

// Runs scenarios on a bounded worker pool. Scenarios share nothing; reports
// come back in input order, and per-scenario errors are captured in that
// scenario's report without aborting the sweep.
inline std::vector<Report> sweep(const std::vector<ScenarioConfig>& configs,
                                 int parallelism, bool with_timing = false) {
  if (configs.empty()) throw ConfigInvalid("sweep needs at least one scenario");
  const int workers =
      std::max(1, std::min<int>(parallelism, int(configs.size())));
  std::vector<Report> reports(configs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= configs.size()) return;
      reports[k] = run_scenario(configs[k], with_timing);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return reports;
}

}  // namespace cmvlab
