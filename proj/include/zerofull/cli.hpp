// Command-line frontend: subcommand parsing, exact input grammar and
// reproducible human/json/csv rendering for every engine.

#pragma once

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "zerofull/ballgeom.hpp"
#include "zerofull/cantor.hpp"
#include "zerofull/census.hpp"
#include "zerofull/exactnum.hpp"
#include "zerofull/laws.hpp"
#include "zerofull/oracles.hpp"
#include "zerofull/regime.hpp"

namespace zerofull::cli {

using json = nlohmann::ordered_json;

struct CliResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

// ---------------------------------------------------------------------------
// Input grammar.
// ---------------------------------------------------------------------------

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::vector<int> parse_digit_set(const std::string& text) {
  std::vector<int> digits;
  for (const auto& part : split(text, ',')) {
    if (part.empty()) throw std::domain_error("digit set: empty entry in '" + text + "'");
    digits.push_back(static_cast<int>(std::stol(part)));
  }
  return digits;
}

// s-exponents may involve gamma: "1/2", "0.43", "gamma", "3*gamma",
// "gamma/2", "1/2+3/4*gamma", "1-gamma/2".
inline GammaAffine parse_gamma_affine(const std::string& text) {
  GammaAffine out{Rational(0), Rational(0)};
  std::string term;
  std::vector<std::pair<int, std::string>> terms;  // sign, body
  int sign = 1;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if ((c == '+' || c == '-') && i > 0) {
      terms.emplace_back(sign, term);
      term.clear();
      sign = c == '-' ? -1 : 1;
    } else if (c == '-' && i == 0) {
      sign = -1;
    } else {
      term += c;
    }
  }
  terms.emplace_back(sign, term);
  for (auto& [sgn, body] : terms) {
    if (body.empty()) throw std::domain_error("cannot parse exponent '" + text + "'");
    const size_t g = body.find("gamma");
    if (g == std::string::npos) {
      out.plain += Rational(sgn) * parse_rational(body);
      continue;
    }
    Rational coeff(1);
    std::string before = body.substr(0, g);
    std::string after = body.substr(g + 5);
    if (!before.empty()) {
      if (before.back() != '*')
        throw std::domain_error("cannot parse gamma term '" + body + "' (use '<rat>*gamma')");
      coeff *= parse_rational(before.substr(0, before.size() - 1));
    }
    if (!after.empty()) {
      if (after.front() == '*') coeff *= parse_rational(after.substr(1));
      else if (after.front() == '/') coeff /= parse_rational(after.substr(1));
      else throw std::domain_error("cannot parse gamma term '" + body + "'");
    }
    out.gamma += Rational(sgn) * coeff;
  }
  return out;
}

inline std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> out;
  if (text.empty()) return out;
  for (const auto& part : split(text, ',')) {
    const size_t eq = part.find('=');
    if (eq == std::string::npos) throw std::domain_error("expected key=value, got '" + part + "'");
    out[part.substr(0, eq)] = part.substr(eq + 1);
  }
  return out;
}

// "pow:c=1/4,theta=1[,base=5]" | "logmod:theta=2,beta=5[,base=3]" |
// "table:1/2,1/4,1/8"; base defaults to the command's t.
inline PsiSpec parse_psi(const std::string& text, const std::string& seq_text,
                         long long default_base) {
  PsiSpec spec;
  const size_t colon = text.find(':');
  const std::string kind = text.substr(0, colon == std::string::npos ? text.size() : colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "pow") {
    auto kv = parse_kv(rest);
    PowerDecaySpec pd;
    pd.coeff = kv.count("c") ? parse_rational(kv["c"]) : Rational(1);
    if (!kv.count("theta")) throw std::domain_error("psi pow spec needs theta=");
    pd.theta = parse_rational(kv["theta"]);
    pd.base = kv.count("base") ? std::stoll(kv["base"]) : default_base;
    spec.family = pd;
  } else if (kind == "logmod") {
    auto kv = parse_kv(rest);
    LogModifiedSpec lm;
    if (!kv.count("theta")) throw std::domain_error("psi logmod spec needs theta=");
    lm.theta = parse_rational(kv["theta"]);
    lm.beta = kv.count("beta") ? parse_rational(kv["beta"]) : Rational(0);
    lm.base = kv.count("base") ? std::stoll(kv["base"]) : default_base;
    spec.family = lm;
  } else if (kind == "table") {
    PsiTableSpec tab;
    for (const auto& part : split(rest, ',')) tab.values.push_back(parse_rational(part));
    spec.family = tab;
  } else {
    throw std::domain_error("unknown psi family '" + kind + "' (pow|logmod|table)");
  }
  if (seq_text.empty() || seq_text == "id") {
    spec.sequence = IdentitySequence{};
  } else {
    const size_t c2 = seq_text.find(':');
    const std::string skind = seq_text.substr(0, c2 == std::string::npos ? seq_text.size() : c2);
    const std::string srest = c2 == std::string::npos ? "" : seq_text.substr(c2 + 1);
    if (skind == "affine") {
      auto kv = parse_kv(srest);
      AffineSequence aff;
      if (!kv.count("u")) throw std::domain_error("affine sequence needs u=");
      aff.slope = parse_rational(kv["u"]);
      aff.offset = kv.count("v") ? parse_rational(kv["v"]) : Rational(0);
      spec.sequence = aff;
    } else if (skind == "table") {
      SequenceTable tab;
      for (const auto& part : split(srest, ',')) tab.values.push_back(std::stoll(part));
      spec.sequence = tab;
    } else {
      throw std::domain_error("unknown sequence spec '" + skind + "' (id|affine|table)");
    }
  }
  spec.validate();
  return spec;
}

// "s=2/5[,c=0]"
inline DimensionFunctionSpec parse_f(const std::string& text) {
  auto kv = parse_kv(text);
  DimensionFunctionSpec f;
  if (!kv.count("s")) throw std::domain_error("dimension function spec needs s=");
  f.s = parse_gamma_affine(kv["s"]);
  if (kv.count("c")) f.log_power = parse_rational(kv["c"]);
  return f;
}

// ---------------------------------------------------------------------------
// Rendering.
// ---------------------------------------------------------------------------

inline std::string real_str(const Real& v) {
  std::ostringstream os;
  os << std::setprecision(20) << v;
  return os.str();
}

enum class Format { Human, Json, Csv };

inline Format parse_format(const std::string& text) {
  if (text == "human") return Format::Human;
  if (text == "json") return Format::Json;
  if (text == "csv") return Format::Csv;
  throw std::domain_error("unknown format '" + text + "' (human|json|csv)");
}

using Config = std::vector<std::pair<std::string, std::string>>;

inline void emit_config(std::ostream& os, Format fmt, const Config& config) {
  if (fmt == Format::Human) {
    os << "config:";
    for (const auto& [k, v] : config) os << " " << k << "=" << v;
    os << "\n";
  } else if (fmt == Format::Csv) {
    for (const auto& [k, v] : config) os << "# " << k << "=" << v << "\n";
  }
}

inline json config_json(const Config& config) {
  json j = json::object();
  for (const auto& [k, v] : config) j[k] = v;
  return j;
}

// Key/value table for non-streaming commands in csv mode.
inline void emit_kv_csv(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& rows) {
  os << "key,value\n";
  for (const auto& [k, v] : rows) os << k << ",\"" << v << "\"\n";
}

inline json series_json(const SeriesReport& s) {
  json j;
  j["name"] = s.name;
  j["sum"] = to_string(s.sum);
  j["basis"] = to_string(s.basis);
  j["empty_qualifying"] = s.empty_qualifying;
  if (s.closed_form_ratio) j["closed_form_ratio"] = *s.closed_form_ratio;
  j["partial_sums"] = s.partial_sums;
  j["notes"] = s.notes;
  return j;
}

}  // namespace zerofull::cli

namespace zerofull::cli::detail {

struct CommonState {
  std::ostream& out;
  std::ostream& err;
  Format format = Format::Human;
};

inline int emit_json_or(const CommonState& st, const json& j, int code,
                        const std::function<void()>& human) {
  if (st.format == Format::Json) {
    st.out << j.dump() << "\n";
  } else {
    human();
  }
  return code;
}

}  // namespace zerofull::cli::detail

namespace zerofull::cli {

inline int cmd_regime(detail::CommonState& st, long long b, long long t, const Config& config) {
  const RegimeReport rep = analyze(b, t);
  json j;
  j["command"] = "regime";
  j["config"] = config_json(config);
  j["regime"] = to_string(rep.regime);
  j["same_primes"] = rep.same_primes;
  j["mult_dependent"] = rep.mult_dependent;
  j["primes_b"] = rep.primes_b;
  j["primes_t"] = rep.primes_t;
  json table = json::array();
  for (const auto& row : rep.valuations)
    table.push_back({{"q", row.prime}, {"v_b", row.v_b}, {"v_t", row.v_t}});
  j["valuations"] = table;
  if (rep.alpha1) {
    j["alpha1"] = to_string(*rep.alpha1);
    j["alpha2"] = to_string(*rep.alpha2);
  }
  if (st.format == Format::Json) {
    st.out << j.dump() << "\n";
    return 0;
  }
  emit_config(st.out, st.format, config);
  if (st.format == Format::Csv) {
    std::vector<std::pair<std::string, std::string>> rows{
        {"regime", to_string(rep.regime)},
        {"same_primes", rep.same_primes ? "true" : "false"},
        {"mult_dependent", rep.mult_dependent ? "true" : "false"}};
    if (rep.alpha1) {
      rows.emplace_back("alpha1", to_string(*rep.alpha1));
      rows.emplace_back("alpha2", to_string(*rep.alpha2));
    }
    for (const auto& row : rep.valuations)
      rows.emplace_back("v_" + std::to_string(row.prime),
                        std::to_string(row.v_b) + ";" + std::to_string(row.v_t));
    emit_kv_csv(st.out, rows);
    return 0;
  }
  st.out << "regime: " << to_string(rep.regime) << "\n";
  st.out << "valuations (q: v_q(b), v_q(t)):";
  for (const auto& row : rep.valuations)
    st.out << "  " << row.prime << ": " << row.v_b << "," << row.v_t;
  st.out << "\n";
  if (rep.alpha1)
    st.out << "alpha1 = " << to_string(*rep.alpha1) << "  alpha2 = " << to_string(*rep.alpha2)
           << "\n";
  return 0;
}

inline int cmd_classify(detail::CommonState& st, const CantorParams& params, long long p,
                        long long n, const Rational& radius, bool verbose, const Config& config) {
  const IntersectionForm form = classify(params, p, n, radius);
  json j;
  j["command"] = "classify";
  j["config"] = config_json(config);
  j["kind"] = to_string(form.kind());
  json balls = json::array();
  for (const auto& ball : form.balls())
    balls.push_back({{"center", to_string(ball.center)}, {"radius", to_string(ball.radius)}});
  j["balls"] = balls;
  if (verbose) j["notes"] = json::array({classify_interpretation_note()});
  if (st.format == Format::Json) {
    st.out << j.dump() << "\n";
    return 0;
  }
  emit_config(st.out, st.format, config);
  if (st.format == Format::Csv) {
    std::vector<std::pair<std::string, std::string>> rows{{"kind", to_string(form.kind())}};
    int idx = 0;
    for (const auto& ball : form.balls()) {
      rows.emplace_back("ball" + std::to_string(idx) + "_center", to_string(ball.center));
      rows.emplace_back("ball" + std::to_string(idx) + "_radius", to_string(ball.radius));
      ++idx;
    }
    emit_kv_csv(st.out, rows);
    return 0;
  }
  st.out << "intersection form: " << to_string(form.kind()) << "\n";
  for (const auto& ball : form.balls())
    st.out << "  ball center=" << to_string(ball.center) << " radius=" << to_string(ball.radius)
           << "\n";
  if (verbose) st.out << classify_interpretation_note() << "\n";
  return 0;
}

inline int outcome_exit_code(Outcome o) {
  switch (o) {
    case Outcome::Zero:
    case Outcome::Full:
      return 0;
    case Outcome::Inconclusive:
      return 3;
    case Outcome::Undecided:
      return 4;
  }
  return 1;
}

inline int cmd_verdict(detail::CommonState& st, const CantorParams& params, long long t,
                       const DimensionFunctionSpec& f, const PsiSpec& spec, bool verbose,
                       const Config& config) {
  std::string route;
  Verdict v;
  if (t == params.base()) {
    route = "base-equal dichotomy (t = b)";
    v = verdict_base_equal(params, f, spec);
  } else {
    const RegimeReport regime = analyze(params.base(), t);
    if (regime.regime == Regime::DifferentPrimes)
      throw precondition_error(
          "verdict: b and t have different prime divisors; no zero-full theorem applies "
          "(see `predict` for the conjectured dimension and `census` for experiments)");
    if (regime.mult_dependent && params.m() == 0) {
      route = "multiplicatively dependent dichotomy";
      v = verdict_dependent(params, t, f, spec);
    } else {
      route = "same-prime-divisors two-series criterion";
      v = verdict_main(params, t, f, spec);
    }
  }
  const int code = outcome_exit_code(v.outcome);
  json j;
  j["command"] = "verdict";
  j["config"] = config_json(config);
  j["route"] = route;
  j["outcome"] = to_string(v.outcome);
  j["exit_code"] = code;
  json series = json::array();
  for (const auto& s : v.series) series.push_back(series_json(s));
  j["series"] = series;
  j["notes"] = v.notes;
  if (st.format == Format::Json) {
    st.out << j.dump() << "\n";
    return code;
  }
  emit_config(st.out, st.format, config);
  if (st.format == Format::Csv) {
    std::vector<std::pair<std::string, std::string>> rows{{"route", route},
                                                          {"outcome", to_string(v.outcome)}};
    for (const auto& s : v.series) {
      rows.emplace_back(s.name + " sum", to_string(s.sum));
      rows.emplace_back(s.name + " basis", to_string(s.basis));
    }
    emit_kv_csv(st.out, rows);
    return code;
  }
  st.out << "route: " << route << "\n";
  st.out << "outcome: " << to_string(v.outcome) << "\n";
  for (const auto& s : v.series) {
    st.out << "  " << s.name << ": " << to_string(s.sum) << " [" << to_string(s.basis) << "]";
    if (s.closed_form_ratio) st.out << " ratio=" << *s.closed_form_ratio;
    if (s.empty_qualifying) st.out << " (empty qualifying set)";
    st.out << "\n";
    if (verbose && !s.partial_sums.empty()) {
      st.out << "    partial sums:";
      for (double x : s.partial_sums) st.out << " " << x;
      st.out << "\n";
    }
    for (const auto& note : s.notes) st.out << "    note: " << note << "\n";
  }
  for (const auto& note : v.notes) st.out << "note: " << note << "\n";
  return code;
}

inline int cmd_predict(detail::CommonState& st, const CantorParams& params, long long t,
                       const Real& lambda, const std::vector<std::string>& lambda_notes,
                       const Config& config) {
  const DimensionPrediction pred = predict_dimension(params, t, lambda);
  json j;
  j["command"] = "predict";
  j["config"] = config_json(config);
  j["regime"] = to_string(pred.regime);
  j["gamma"] = real_str(pred.gamma);
  j["lambda"] = real_str(pred.lambda);
  json entries = json::array();
  for (const auto& e : pred.entries)
    entries.push_back({{"label", e.label}, {"value", real_str(e.value)}, {"tag", e.tag}});
  j["entries"] = entries;
  if (pred.large_intersection_threshold)
    j["large_intersection_threshold"] = real_str(*pred.large_intersection_threshold);
  json notes = pred.notes;
  for (const auto& n : lambda_notes) notes.push_back(n);
  j["notes"] = notes;
  if (st.format == Format::Json) {
    st.out << j.dump() << "\n";
    return 0;
  }
  emit_config(st.out, st.format, config);
  if (st.format == Format::Csv) {
    std::vector<std::pair<std::string, std::string>> rows{
        {"regime", to_string(pred.regime)},
        {"gamma", real_str(pred.gamma)},
        {"lambda", real_str(pred.lambda)}};
    for (const auto& e : pred.entries) rows.emplace_back(e.label + " [" + e.tag + "]", real_str(e.value));
    if (pred.large_intersection_threshold)
      rows.emplace_back("large_intersection_threshold",
                        real_str(*pred.large_intersection_threshold));
    emit_kv_csv(st.out, rows);
    return 0;
  }
  st.out << "regime: " << to_string(pred.regime) << "\n";
  st.out << "gamma = " << pred.gamma << "  lambda = " << pred.lambda << "\n";
  for (const auto& e : pred.entries)
    st.out << "  " << e.label << " = " << e.value << " [" << e.tag << "]\n";
  if (pred.large_intersection_threshold)
    st.out << "  large-intersection class holds for s < " << *pred.large_intersection_threshold
           << " [theorem]\n";
  for (const auto& n : pred.notes) st.out << "note: " << n << "\n";
  for (const auto& n : lambda_notes) st.out << "note: " << n << "\n";
  return 0;
}

struct CensusOptions {
  long long t = 0;
  std::optional<long long> n_single;
  std::optional<std::string> radius_text;
  std::optional<long long> n_from, n_to;
  std::optional<std::string> theta_text;
  std::string method = "exact";
  bool fit = false;
  bool heuristic = false;
  bool natural_cover = false;
  std::string plot_path;
  int workers = 1;
  long long cap = 0;  // 0 = defaults
};

inline int cmd_census(detail::CommonState& st, const CantorParams& params,
                      const CensusOptions& opt, const Config& config) {
  CensusCaps caps;
  if (opt.cap > 0) {
    caps.brute_points = opt.cap;
    caps.enum_intervals = opt.cap;
  }
  std::vector<CensusRow> rows;
  std::optional<Rational> theta;
  if (opt.theta_text) theta = parse_rational(*opt.theta_text);

  if (opt.natural_cover) {
    if (!theta || !opt.n_from || !opt.n_to)
      throw std::domain_error("census --natural-cover needs --theta, --n-from and --n-to");
    const auto report =
        natural_cover_exponent(params, opt.t, *theta, *opt.n_from, *opt.n_to, caps, opt.workers);
    rows = report.rows;
    json j;
    j["command"] = "census";
    j["config"] = config_json(config);
    json jr = json::array();
    for (const auto& row : rows)
      jr.push_back({{"n", row.n},
                    {"t", row.t},
                    {"radius", to_string(row.radius)},
                    {"count", row.count},
                    {"method", to_string(row.method)}});
    j["rows"] = jr;
    j["empty"] = report.empty;
    if (report.s_star) j["s_star"] = *report.s_star;
    if (report.fit_r2) j["fit_r2"] = *report.fit_r2;
    j["predicted_exponent"] = report.predicted;
    if (st.format == Format::Json) {
      st.out << j.dump() << "\n";
      return 0;
    }
    emit_config(st.out, st.format, config);
    if (st.format == Format::Csv) {
      st.out << "n,t,radius,count,method\n";
      for (const auto& row : rows)
        st.out << row.n << "," << row.t << "," << to_string(row.radius) << "," << row.count << ","
               << to_string(row.method) << "\n";
      st.out << "# predicted_exponent=" << report.predicted << "\n";
      if (report.s_star) st.out << "# s_star=" << *report.s_star << "\n";
      return 0;
    }
    for (const auto& row : rows)
      st.out << "n=" << row.n << " count=" << row.count << " radius=" << to_string(row.radius)
             << " (" << row.elapsed_seconds << "s)\n";
    if (report.empty) {
      st.out << "all counts are zero: natural-cover exponent report Empty\n";
    } else {
      st.out << "fitted critical exponent s* = " << *report.s_star
             << " (r2=" << *report.fit_r2 << "), prediction gamma/theta = " << report.predicted
             << "\n";
    }
    return 0;
  }

  const CountMethod primary =
      opt.method == "brute" ? CountMethod::BruteForce : CountMethod::Exact;
  auto run_level = [&](long long n, const Rational& radius) {
    if (opt.method == "both") {
      auto a = count_surviving(params, opt.t, n, radius, CountMethod::Exact, caps, opt.workers);
      auto b = count_surviving(params, opt.t, n, radius, CountMethod::BruteForce, caps, opt.workers);
      if (a.count != b.count)
        throw std::runtime_error("census: Exact and BruteForce disagree at n=" + std::to_string(n) +
                                 ": " + std::to_string(a.count) + " vs " + std::to_string(b.count));
      rows.push_back(a);
      rows.push_back(b);
    } else {
      rows.push_back(count_surviving(params, opt.t, n, radius, primary, caps, opt.workers));
    }
  };

  if (opt.n_single) {
    if (!opt.radius_text) throw std::domain_error("census: single-level mode needs -r");
    run_level(*opt.n_single, parse_rational(*opt.radius_text));
  } else {
    if (!opt.n_from || !opt.n_to || !theta)
      throw std::domain_error("census: range mode needs --n-from, --n-to and --theta");
    for (long long n = *opt.n_from; n <= *opt.n_to; ++n)
      run_level(n, radius_for_decay(opt.t, *theta, n));
  }

  std::optional<GrowthFit> fit;
  if (opt.fit || opt.heuristic) fit = growth_fit(rows, opt.t);
  std::optional<double> heuristic_value;
  if (opt.heuristic) {
    if (!theta) throw std::domain_error("census --heuristic needs --theta");
    const double g = static_cast<double>(params.gamma());
    heuristic_value = 1.0 - static_cast<double>(to_real(*theta)) * (1.0 - g);
  }

  if (!opt.plot_path.empty()) {
    std::ofstream plot(opt.plot_path);
    if (!plot) throw std::runtime_error("cannot open plot file '" + opt.plot_path + "'");
    for (const auto& row : rows)
      if (row.count > 0 && row.method == primary)
        plot << row.n << " " << std::log(static_cast<double>(row.count)) << "\n";
  }

  if (st.format == Format::Json) {
    json cfg;
    cfg["record"] = "config";
    cfg["command"] = "census";
    for (const auto& [k, v] : config) cfg[k] = v;
    st.out << cfg.dump() << "\n";
    for (const auto& row : rows) {
      json jr;
      jr["record"] = "row";
      jr["n"] = row.n;
      jr["t"] = row.t;
      jr["radius"] = to_string(row.radius);
      jr["count"] = row.count;
      jr["method"] = to_string(row.method);
      st.out << jr.dump() << "\n";
    }
    if (fit) {
      json jf;
      jf["record"] = "fit";
      jf["exponent"] = fit->exponent;
      jf["r2"] = fit->r2;
      if (heuristic_value) jf["heuristic_exponent"] = *heuristic_value;
      st.out << jf.dump() << "\n";
    }
    return 0;
  }
  emit_config(st.out, st.format, config);
  if (st.format == Format::Csv) {
    st.out << "n,t,radius,count,method\n";
    for (const auto& row : rows)
      st.out << row.n << "," << row.t << "," << to_string(row.radius) << "," << row.count << ","
             << to_string(row.method) << "\n";
    if (fit) {
      st.out << "# fit_exponent=" << fit->exponent << "\n";
      st.out << "# fit_r2=" << fit->r2 << "\n";
      if (heuristic_value) st.out << "# heuristic_exponent=" << *heuristic_value << "\n";
    }
    return 0;
  }
  for (const auto& row : rows)
    st.out << "n=" << row.n << " t=" << row.t << " radius=" << to_string(row.radius)
           << " count=" << row.count << " [" << to_string(row.method) << "] ("
           << row.elapsed_seconds << "s)\n";
  if (fit) {
    st.out << "fitted growth exponent = " << fit->exponent << " (r2=" << fit->r2 << ", "
           << fit->rows_used << " rows)\n";
    if (heuristic_value)
      st.out << "random-lattice heuristic exponent 1 - theta(1-gamma) = " << *heuristic_value
             << "\n";
  }
  return 0;
}

inline int cmd_check(detail::CommonState& st, const std::string& which, std::uint64_t seed,
                     long long cases, int workers) {
  bool ok = true;
  auto line = [&](const std::string& name, bool pass, const std::string& info) {
    st.out << (pass ? "[PASS] " : "[FAIL] ") << name;
    if (!info.empty()) st.out << ": " << info;
    st.out << "\n";
    ok = ok && pass;
  };
  if (which == "example31") {
    // b=5, D={1,2}, psi(n) = 1/(4*5^n): every lattice ball dies.
    CantorParams params(5, {1, 2});
    bool all_empty = true;
    long long checked = 0;
    for (long long n = 1; n <= 7; ++n) {
      const BigInt bn = pow_int(5, static_cast<unsigned long long>(n));
      const Rational radius = Rational(1, 4 * bn);
      for (BigInt p = 0; p <= bn; ++p, ++checked)
        if (classify(params, p, n, radius).kind() != FormKind::Empty) all_empty = false;
    }
    line("classify empty for all p, n <= 7", all_empty, std::to_string(checked) + " lattice points");
    bool counts_zero = true;
    for (long long n = 1; n <= 7; ++n) {
      const Rational radius = Rational(1, 4 * pow_int(5, static_cast<unsigned long long>(n)));
      counts_zero =
          counts_zero && count_surviving_exact(params, 5, n, radius, {}, workers).count == 0;
    }
    line("census count zero for n <= 7", counts_zero, "");
  } else if (which == "oracles") {
    const auto cls = run_classifier_equivalence(seed, cases);
    line("classifier-geometry equivalence", cls.mismatches == 0,
         std::to_string(cls.cases) + " cases, " + std::to_string(cls.mismatches) + " mismatches");
    for (const auto& f : cls.failures) st.err << "  " << f << "\n";
    const auto cen = run_census_agreement(seed + 1, std::max<long long>(cases / 4, 10), 6, 5, 4,
                                          CensusCaps{}, workers);
    line("census exact-vs-brute agreement", cen.mismatches == 0,
         std::to_string(cen.cases) + " cases, " + std::to_string(cen.mismatches) + " mismatches");
    for (const auto& f : cen.failures) st.err << "  " << f << "\n";
  } else {
    throw std::domain_error("unknown check '" + which + "' (example31|oracles)");
  }
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Top-level driver.
// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact zero-full laws, ball classification and counting experiments on "
               "generalized Cantor sets"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Plain-text key=value configuration file");

  std::string format_text = "human";
  app.add_option("--format", format_text, "Output format: human|json|csv")->capture_default_str();

  detail::CommonState st{out, err, Format::Human};

  // regime
  auto* regime_cmd = app.add_subcommand("regime", "Classify the base pair (b,t)");
  long long regime_b = 0, regime_t = 0;
  regime_cmd->add_option("b", regime_b, "Cantor base b")->required();
  regime_cmd->add_option("t", regime_t, "approximation base t")->required();

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "Rewrite a lattice ball against C(b,D)");
  long long cl_b = 0, cl_p = 0, cl_n = 0;
  std::string cl_digits, cl_radius;
  bool cl_verbose = false;
  classify_cmd->add_option("-b", cl_b, "base b")->required();
  classify_cmd->add_option("-D", cl_digits, "digit set, comma separated")->required();
  classify_cmd->add_option("-p", cl_p, "numerator p of the ball center p/b^n")->required();
  classify_cmd->add_option("-n", cl_n, "level n")->required();
  classify_cmd->add_option("-r", cl_radius, "ball radius (exact rational)")->required();
  classify_cmd->add_flag("--verbose", cl_verbose, "print interpretation notes");

  // verdict
  auto* verdict_cmd = app.add_subcommand("verdict", "Zero-full measure verdict");
  long long vd_b = 0, vd_t = 0;
  std::string vd_digits, vd_psi, vd_f, vd_seq;
  bool vd_verbose = false;
  verdict_cmd->add_option("-b", vd_b, "base b")->required();
  verdict_cmd->add_option("-D", vd_digits, "digit set")->required();
  verdict_cmd->add_option("-t", vd_t, "approximation base t")->required();
  verdict_cmd->add_option("--psi", vd_psi, "psi spec: pow:...|logmod:...|table:...")->required();
  verdict_cmd->add_option("--f", vd_f, "dimension function spec: s=...[,c=...]")->required();
  verdict_cmd->add_option("--A", vd_seq, "exponent sequence: id|affine:u=..,v=..|table:...");
  verdict_cmd->add_flag("--verbose", vd_verbose, "print partial sums");

  // census
  auto* census_cmd = app.add_subcommand("census", "Count surviving lattice balls");
  long long cs_b = 0;
  std::string cs_digits;
  CensusOptions cs;
  long long cs_n = -1, cs_from = -1, cs_to = -1;
  std::string cs_radius, cs_theta;
  census_cmd->add_option("-b", cs_b, "base b")->required();
  census_cmd->add_option("-D", cs_digits, "digit set")->required();
  census_cmd->add_option("-t", cs.t, "approximation base t")->required();
  census_cmd->add_option("-n", cs_n, "single level n");
  census_cmd->add_option("-r", cs_radius, "radius for single-level mode (exact rational)");
  census_cmd->add_option("--n-from", cs_from, "range mode: first level");
  census_cmd->add_option("--n-to", cs_to, "range mode: last level");
  census_cmd->add_option("--theta", cs_theta, "range mode: radius law t^(-theta n)");
  census_cmd->add_option("--method", cs.method, "exact|brute|both")->capture_default_str();
  census_cmd->add_flag("--fit", cs.fit, "fit the growth exponent of the counts");
  census_cmd->add_flag("--heuristic", cs.heuristic,
                       "also report the random-lattice heuristic exponent 1-theta(1-gamma)");
  census_cmd->add_flag("--natural-cover", cs.natural_cover,
                       "report the natural-cover critical exponent against gamma/theta");
  census_cmd->add_option("--plot", cs.plot_path, "write two-column (n, log count) plot data");
  census_cmd->add_option("--workers", cs.workers, "worker threads")->capture_default_str();
  census_cmd->add_option("--cap", cs.cap, "enumeration/census cap override");

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Dimension prediction per regime");
  long long pr_b = 0, pr_t = 0;
  std::string pr_digits, pr_lambda, pr_psi, pr_seq;
  predict_cmd->add_option("-b", pr_b, "base b")->required();
  predict_cmd->add_option("-D", pr_digits, "digit set")->required();
  predict_cmd->add_option("-t", pr_t, "approximation base t")->required();
  predict_cmd->add_option("--lambda", pr_lambda, "decay rate lambda (exact rational)");
  predict_cmd->add_option("--psi", pr_psi, "psi spec; lambda is computed from it");
  predict_cmd->add_option("--A", pr_seq, "exponent sequence (with --psi)");

  // check
  auto* check_cmd = app.add_subcommand("check", "Re-run built-in verification suites");
  std::string ck_which;
  std::uint64_t ck_seed = 20240601;
  long long ck_cases = 200;
  int ck_workers = 1;
  check_cmd->add_option("suite", ck_which, "example31|oracles")->required();
  check_cmd->add_option("--seed", ck_seed, "random seed")->capture_default_str();
  check_cmd->add_option("--cases", ck_cases, "number of random cases")->capture_default_str();
  check_cmd->add_option("--workers", ck_workers, "worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    st.format = parse_format(format_text);
    if (regime_cmd->parsed()) {
      Config config{{"command", "regime"},
                    {"b", std::to_string(regime_b)},
                    {"t", std::to_string(regime_t)},
                    {"format", format_text}};
      return cmd_regime(st, regime_b, regime_t, config);
    }
    if (classify_cmd->parsed()) {
      CantorParams params(cl_b, parse_digit_set(cl_digits));
      Config config{{"command", "classify"}, {"b", std::to_string(cl_b)},   {"D", cl_digits},
                    {"p", std::to_string(cl_p)}, {"n", std::to_string(cl_n)}, {"r", cl_radius},
                    {"format", format_text}};
      return cmd_classify(st, params, cl_p, cl_n, parse_rational(cl_radius), cl_verbose, config);
    }
    if (verdict_cmd->parsed()) {
      CantorParams params(vd_b, parse_digit_set(vd_digits));
      const PsiSpec spec = parse_psi(vd_psi, vd_seq, vd_t);
      const DimensionFunctionSpec f = parse_f(vd_f);
      Config config{{"command", "verdict"}, {"b", std::to_string(vd_b)}, {"D", vd_digits},
                    {"t", std::to_string(vd_t)}, {"psi", vd_psi},        {"f", vd_f},
                    {"A", vd_seq.empty() ? "id" : vd_seq}, {"format", format_text}};
      return cmd_verdict(st, params, vd_t, f, spec, vd_verbose, config);
    }
    if (census_cmd->parsed()) {
      CantorParams params(cs_b, parse_digit_set(cs_digits));
      if (cs_n >= 0) cs.n_single = cs_n;
      if (!cs_radius.empty()) cs.radius_text = cs_radius;
      if (cs_from >= 0) cs.n_from = cs_from;
      if (cs_to >= 0) cs.n_to = cs_to;
      if (!cs_theta.empty()) cs.theta_text = cs_theta;
      Config config{{"command", "census"}, {"b", std::to_string(cs_b)}, {"D", cs_digits},
                    {"t", std::to_string(cs.t)}, {"method", cs.method}, {"format", format_text}};
      if (cs.n_single) config.emplace_back("n", std::to_string(*cs.n_single));
      if (cs.radius_text) config.emplace_back("r", *cs.radius_text);
      if (cs.n_from) config.emplace_back("n_from", std::to_string(*cs.n_from));
      if (cs.n_to) config.emplace_back("n_to", std::to_string(*cs.n_to));
      if (cs.theta_text) config.emplace_back("theta", *cs.theta_text);
      config.emplace_back("workers", std::to_string(cs.workers));
      return cmd_census(st, params, cs, config);
    }
    if (predict_cmd->parsed()) {
      CantorParams params(pr_b, parse_digit_set(pr_digits));
      Real lambda;
      std::vector<std::string> lambda_notes;
      if (!pr_lambda.empty()) {
        lambda = to_real(parse_rational(pr_lambda));
      } else if (!pr_psi.empty()) {
        const PsiSpec spec = parse_psi(pr_psi, pr_seq, pr_t);
        const LambdaReport rep = lambda_psi(spec, pr_t);
        lambda = rep.value;
        lambda_notes = rep.notes;
        lambda_notes.push_back(std::string("lambda computed from psi [") + to_string(rep.basis) +
                               "]");
      } else {
        throw std::domain_error("predict: need --lambda or --psi");
      }
      Config config{{"command", "predict"}, {"b", std::to_string(pr_b)}, {"D", pr_digits},
                    {"t", std::to_string(pr_t)}, {"format", format_text}};
      if (!pr_lambda.empty()) config.emplace_back("lambda", pr_lambda);
      if (!pr_psi.empty()) config.emplace_back("psi", pr_psi);
      return cmd_predict(st, params, pr_t, lambda, lambda_notes, config);
    }
    if (check_cmd->parsed()) {
      return cmd_check(st, ck_which, ck_seed, ck_cases, ck_workers);
    }
  } catch (const not_applicable_error& e) {
    err << "not applicable: " << e.what() << "\n";
    return 1;
  } catch (const precondition_error& e) {
    err << "precondition violated: " << e.what() << "\n";
    return 1;
  } catch (const resource_error& e) {
    err << "resource limit: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

inline CliResult run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> full = {"zerofull"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : full) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace zerofull::cli
