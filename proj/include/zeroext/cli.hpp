#pragma once

// Command implementations behind the zeroext executable. Every command
// returns its exit code and report text instead of printing, so the same code
// paths are testable in-process.

#include <zeroext/classify.hpp>
#include <zeroext/complex.hpp>
#include <zeroext/problem_io.hpp>
#include <zeroext/semilattice.hpp>
#include <zeroext/solver.hpp>

#include <json.hpp>

#include <cstdlib>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace zeroext::cli {

inline constexpr int kOk = 0;
inline constexpr int kInternal = 1;
inline constexpr int kInput = 2;
inline constexpr int kHard = 3;
inline constexpr int kInfeasible = 4;

enum class Format { text, records };

struct CommandResult {
  int code = kOk;
  std::string out;
  std::string err;
};

using json = nlohmann::ordered_json;

namespace detail {

inline std::string join_labels(const Metric& m, const std::vector<Vertex>& xs, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + m.label(xs[i]);
  return s;
}

inline json labels_json(const Metric& m, const std::vector<Vertex>& xs) {
  json a = json::array();
  for (auto x : xs) a.push_back(m.label(x));
  return a;
}

inline const char* kind_name(HardnessCertificate::Kind k) {
  switch (k) {
    case HardnessCertificate::Kind::not_modular: return "not-modular";
    case HardnessCertificate::Kind::not_orientable: return "not-orientable";
    case HardnessCertificate::Kind::not_f_orientable: return "not-F-orientable";
  }
  return "?";
}

inline const char* relation_name(CertificateStep::Relation r) {
  switch (r) {
    case CertificateStep::Relation::parallel: return "parallel";
    case CertificateStep::Relation::lhd: return "lhd";
    case CertificateStep::Relation::rhd: return "rhd";
  }
  return "?";
}

inline std::size_t brute_limit(const ProblemSpec& spec) {
  if (const char* env = std::getenv("ZEROEXT_BRUTE_LIMIT")) {
    char* end = nullptr;
    auto v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && end != env) return static_cast<std::size_t>(v);
    throw SemanticError(std::string("ZEROEXT_BRUTE_LIMIT is not a number: ") + env);
  }
  return spec.options.brute_limit.value_or(1000000);
}

}  // namespace detail

/// Classification report; tractable -> exit 0, hard -> exit 3.
inline CommandResult report_classification(const Classification& c, Format fmt) {
  const auto& m = c.graph.metric();
  CommandResult r;
  r.code = c.tractable ? kOk : kHard;
  std::ostringstream os;
  if (fmt == Format::records) {
    json j;
    j["verdict"] = c.tractable ? "TRACTABLE" : "NP-HARD";
    if (c.tractable) {
      j["arcs"] = json::array();
      for (auto [t, h] : c.orientation->edge_arcs) j["arcs"].push_back({m.label(t), m.label(h)});
      j["pairs"] = json::array();
      for (auto [t, h] : c.orientation->pair_arcs) j["pairs"].push_back({m.label(t), m.label(h)});
    } else {
      const auto& cert = *c.certificate;
      j["kind"] = detail::kind_name(cert.kind);
      if (cert.kind == HardnessCertificate::Kind::not_modular) {
        j["triple"] = detail::labels_json(m, {cert.triple.begin(), cert.triple.end()});
      } else {
        j["steps"] = json::array();
        for (const auto& s : cert.steps)
          j["steps"].push_back({{"from", {m.label(s.from.first), m.label(s.from.second)}},
                                {"to", {m.label(s.to.first), m.label(s.to.second)}},
                                {"relation", detail::relation_name(s.relation)},
                                {"witness", detail::labels_json(m, s.witness)}});
      }
    }
    os << j.dump() << '\n';
  } else if (c.tractable) {
    os << "TRACTABLE\norientation\n";
    for (auto [t, h] : c.orientation->edge_arcs) os << "  " << m.label(t) << " -> " << m.label(h) << '\n';
    if (!c.orientation->pair_arcs.empty()) {
      os << "pairs\n";
      for (auto [t, h] : c.orientation->pair_arcs) os << "  " << m.label(t) << " -> " << m.label(h) << '\n';
    }
  } else {
    const auto& cert = *c.certificate;
    os << "NP-HARD " << detail::kind_name(cert.kind) << '\n';
    if (cert.kind == HardnessCertificate::Kind::not_modular) {
      os << "triple " << detail::join_labels(m, {cert.triple.begin(), cert.triple.end()}) << " has no median\n";
    } else {
      os << "certificate " << cert.steps.size() << " steps\n";
      for (const auto& s : cert.steps)
        os << "  (" << m.label(s.from.first) << "," << m.label(s.from.second) << ") " << detail::relation_name(s.relation)
           << " (" << m.label(s.to.first) << "," << m.label(s.to.second) << ")  via " << detail::join_labels(m, s.witness)
           << '\n';
    }
  }
  r.out = os.str();
  return r;
}

inline CommandResult run_classify(const ProblemSpec& spec, Format fmt = Format::text) {
  return report_classification(classify(spec.metric, spec.F), fmt);
}

/// The extended complex the solver works on: the classification's complex
/// with the spec's relation. Soft and hard pair terms need ⊑-comparable
/// endpoints once the relation is coarser than ⪯.
inline ExtendedComplex complex_for(const ProblemSpec& spec, const Classification& c) {
  const auto& base = *c.complex;
  if (spec.relation == RelationKind::precedes) return base;
  auto cx = with_relation(base, spec.relation, &spec.explicit_relation);
  for (const auto& t : spec.unary) {
    const bool is_pair = t.kind == UnaryTerm::Kind::pair || t.kind == UnaryTerm::Kind::hard_pair;
    if (is_pair && !cx.rel(t.a, t.b) && !cx.rel(t.b, t.a))
      throw SemanticError("pair {" + cx.label(t.a) + "," + cx.label(t.b) + "} is not related under the chosen relation");
  }
  return cx;
}

struct SolveFlags {
  std::optional<std::string> method;  // overrides the spec's options
  std::optional<std::string> local;
  std::vector<std::string> start;
  bool trace = false;
  bool verify = false;  // also run brute force and report agreement
};

inline CommandResult run_solve(const ProblemSpec& spec, const SolveFlags& flags = {}, Format fmt = Format::text) {
  auto c = classify(spec.metric, spec.F);
  if (!c.tractable) return report_classification(c, fmt);
  const auto inst = spec.instance();
  const auto cx = complex_for(spec, c);
  const auto& m = spec.metric;
  const std::string method = flags.method.value_or(spec.options.method);
  const std::string local = flags.local.value_or(spec.options.local);
  if (method != "dsda" && method != "sda" && method != "brute") throw SemanticError("unknown method " + method);
  if (local != "blp" && local != "brute") throw SemanticError("unknown local method " + local);
  SolveOptions opt;
  opt.local = local == "blp" ? LocalMethod::blp : LocalMethod::brute;
  opt.brute_limit = detail::brute_limit(spec);
  if (spec.options.blp_budget) opt.blp_budget = *spec.options.blp_budget;

  SolveReport rep;
  bool feasible = true;
  const auto start_labels = !flags.start.empty() ? flags.start : spec.options.start;
  if (method == "brute") {
    auto b = brute_force_min(inst, opt.brute_limit);
    rep.assignment = b.assignment;
    rep.value = b.value;
    rep.iterations = 0;
    feasible = b.value.is_finite();
  } else {
    std::optional<Assignment> start;
    if (!start_labels.empty()) {
      if (start_labels.size() != inst.n) throw SemanticError("start needs one label per variable");
      start.emplace();
      for (const auto& l : start_labels) start->push_back(m.index(l));
    } else {
      start = default_start(inst);
    }
    if (start)
      rep = method == "dsda" ? dsda(inst, cx, *start, opt) : sda(inst, cx, *start, opt);
    else
      feasible = false;
  }

  CommandResult r;
  std::optional<BruteForceResult> check;
  if (flags.verify) check = brute_force_min(inst, opt.brute_limit);
  if (!feasible) {
    r.code = kInfeasible;
    rep.value = Extended::infinity();
  }
  std::ostringstream os;
  if (fmt == Format::records) {
    json j;
    j["method"] = method;
    j["assignment"] = detail::labels_json(m, rep.assignment);
    j["value"] = rep.value.str();
    j["iterations"] = rep.iterations;
    if (flags.trace) {
      j["trace"] = json::array();
      for (const auto& s : rep.trace)
        j["trace"].push_back({{"lower", detail::labels_json(m, s.lower)},
                              {"upper", detail::labels_json(m, s.upper)},
                              {"next", detail::labels_json(m, s.next)},
                              {"value", s.value.str()}});
    }
    if (check) {
      j["brute_value"] = check->value.str();
      j["agree"] = check->value == rep.value;
    }
    os << j.dump() << '\n';
  } else {
    os << "method " << method << '\n';
    if (r.code == kInfeasible) {
      os << "value inf\ninfeasible\n";
    } else {
      os << "assignment";
      for (std::size_t i = 0; i < rep.assignment.size(); ++i) os << " x" << i << '=' << m.label(rep.assignment[i]);
      os << "\nvalue " << rep.value.str() << "\niterations " << rep.iterations << '\n';
    }
    if (flags.trace)
      for (std::size_t k = 0; k < rep.trace.size(); ++k) {
        const auto& s = rep.trace[k];
        os << "step " << k + 1 << ": lower (" << detail::join_labels(m, s.lower, ",") << ") upper ("
           << detail::join_labels(m, s.upper, ",") << ") next (" << detail::join_labels(m, s.next, ",") << ") value "
           << s.value.str() << '\n';
      }
    if (check)
      os << "brute-force value " << check->value.str() << (check->value == rep.value ? " agrees" : " DISAGREES") << '\n';
  }
  if (check && check->value != rep.value && r.code == kOk) r.code = kInternal;
  r.out = os.str();
  return r;
}

/// Property suites over the spec's complex; stops at the first failure.
inline CommandResult run_check(const ProblemSpec& spec, const std::string& suite, Format fmt = Format::text) {
  if (suite != "structure" && suite != "semilattice" && suite != "solver" && suite != "all")
    throw SemanticError("unknown suite " + suite);
  auto c = classify(spec.metric, spec.F);
  if (!c.tractable) return report_classification(c, fmt);
  const auto& m = spec.metric;
  std::vector<std::pair<std::string, std::string>> results;  // name, failure ("" = pass)
  auto record = [&](const std::string& name, std::string failure) {
    results.emplace_back(name, std::move(failure));
    return results.back().second.empty();
  };
  auto finish = [&]() {
    CommandResult r;
    std::ostringstream os;
    bool ok = true;
    for (const auto& [name, failure] : results) {
      ok = ok && failure.empty();
      if (fmt == Format::records)
        os << json{{"check", name}, {"pass", failure.empty()}, {"witness", failure}}.dump() << '\n';
      else
        os << (failure.empty() ? "PASS " : "FAIL ") << name << (failure.empty() ? "" : ": " + failure) << '\n';
    }
    if (fmt == Format::text) os << (ok ? "all " + std::to_string(results.size()) + " checks passed\n" : "check failed\n");
    r.code = ok ? kOk : kInternal;
    r.out = os.str();
    return r;
  };

  const bool structure = suite == "structure" || suite == "all";
  std::optional<ExtendedComplex> cxo;
  if (spec.relation == RelationKind::explicit_set) {
    OrientedGraph G(c.graph, c.orientation->edge_arcs);
    if (auto v = check_admissible_relation(G, spec.explicit_relation)) {
      record("relation admissible", std::string(to_string(v->condition)) + " at (" + detail::join_labels(m, v->witness, ",") + ")");
      return finish();
    }
  }
  cxo = complex_for(spec, c);
  const auto& cx = *cxo;
  const auto n = cx.size();

  if (structure) {
    record("metric modular", "");
    if (!record("orientation admissible", verify_orientation(c.graph, c.pairs, *c.orientation).value_or(""))) return finish();
    record("relation admissible", "");
    std::string fail;
    for (Vertex p = 0; p < n && fail.empty(); ++p)
      for (Vertex q = 0; q < n && fail.empty(); ++q) {
        const Vertex up = gate_up(cx, p, q), down = gate_down(cx, p, q), mid = diamond(cx, p, q);
        if (cx.meet(p, mid) != down || cx.join(p, mid) != up || !cx.rel(down, up))
          fail = "(" + m.label(p) + "," + m.label(q) + ")";
      }
    if (!record("diamond gates", fail)) return finish();
    for (Vertex p = 0; p < n && fail.empty(); ++p)
      for (Vertex q = 0; q < n && fail.empty(); ++q)
        if (normal_path(cx, p, q).size() != static_cast<std::size_t>(cx.delta_distance(p, q)) + 1)
          fail = "(" + m.label(p) + "," + m.label(q) + ")";
    if (!record("normal path length", fail)) return finish();
    for (Vertex p = 0; p < n && fail.empty(); ++p)
      for (int radius = 0; radius <= static_cast<int>(n) && fail.empty(); ++radius) {
        std::vector<Vertex> ball;
        for (Vertex q = 0; q < n; ++q)
          if (cx.delta_distance(p, q) <= radius) ball.push_back(q);
        if (!is_convex_exhaustive(m, ball)) fail = "center " + m.label(p) + " radius " + std::to_string(radius);
      }
    if (!record("delta balls convex", fail)) return finish();
    auto S = two_subdivision(cx);
    for (Vertex a = 0; a < S.size() && fail.empty(); ++a)
      for (Vertex b = 0; b < S.size() && fail.empty(); ++b) {
        auto [p, q] = S.pairs[a];
        auto [p2, q2] = S.pairs[b];
        if (S.graph.d(a, b) != cx.d(p, p2) + cx.d(q, q2) || S.graph.mu(a, b) != cx.mu(p, p2) + cx.mu(q, q2))
          fail = S.graph.label(a) + " " + S.graph.label(b);
      }
    if (!record("subdivision distances", fail)) return finish();
  }

  if (suite == "semilattice" || suite == "all") {
    const auto inst = spec.instance();
    std::string fail;
    for (Vertex p = 0; p < n && fail.empty(); ++p)
      for (auto sigma : {Principal::up, Principal::down, Principal::plus, Principal::minus, Principal::lstar}) {
        auto L = principal_semilattice(cx, p, sigma);
        EnvelopeTable E(L);
        for (Vertex a = 0; a < L.size(); ++a)
          for (Vertex b = a + 1; b < L.size(); ++b) classify_pair(L, a, b);
        if (sigma == Principal::lstar) continue;
        auto ground = principal_set(cx, p, sigma);
        for (std::size_t i = 0; i < inst.n && fail.empty(); ++i) {
          Function f;
          for (auto x : ground) f.push_back(inst.unary_cost(i, x));
          const bool full = !check_submodular(L, f, E), special = !check_submodular_special(L, f, E);
          if (!full || full != special || (!check_domain_closure(L, f, E)) != (!check_condition_1prime(L, f, E)))
            fail = "variable " + std::to_string(i) + " at " + m.label(p);
        }
        if (!fail.empty()) break;
      }
    if (!record("principal semilattices and unary submodularity", fail)) return finish();
  }

  if (suite == "solver" || suite == "all") {
    const auto inst = spec.instance();
    SolveOptions opt;
    opt.brute_limit = detail::brute_limit(spec);
    auto best = brute_force_min(inst, opt.brute_limit);
    auto start = default_start(inst);
    if (!start) {
      record("solver agreement", best.value.is_infinite() ? "" : "no start but finite minimum");
      return finish();
    }
    auto a = dsda(inst, cx, *start, opt);
    auto b = sda(inst, cx, *start, opt);
    if (!record("solver agreement", a.value == b.value && b.value == best.value
                                        ? ""
                                        : "dsda " + a.value.str() + ", sda " + b.value.str() + ", brute " + best.value.str()))
      return finish();
    auto expected = iteration_count_joint(cx, *start, inst, opt.brute_limit);
    auto projected = iteration_count_expected(cx, *start, inst, opt.brute_limit);
    if (!record("iteration count", a.iterations == expected ? ""
                                                            : "got " + std::to_string(a.iterations) + ", expected " +
                                                                  std::to_string(expected) + " (projected bound " +
                                                                  std::to_string(projected) + ")"))
      return finish();
    std::string fail;
    Assignment x = *start;
    for (const auto& s : a.trace) {
      if (s.value == evaluate(inst, x)) break;
      for (std::size_t i = 0; i < inst.n; ++i)
        if (x[i] != s.next[i] && !cx.delta_neighbors(x[i], s.next[i])) fail = "variable " + std::to_string(i);
      x = s.next;
    }
    record("iterates are delta neighbours", fail);
  }
  return finish();
}

/// Envelope of (p,q) inside a principal semilattice of the complex. Without
/// an explicit center, the semilattice is L⪯ above the meet of p and q.
inline CommandResult run_envelope(const ProblemSpec& spec, const std::string& p_label, const std::string& q_label,
                                  std::optional<std::string> at, Principal sigma = Principal::up,
                                  Format fmt = Format::text) {
  auto c = classify(spec.metric, spec.F);
  if (!c.tractable) return report_classification(c, fmt);
  const auto cx = complex_for(spec, c);
  const Vertex p = cx.index(p_label), q = cx.index(q_label);
  Vertex s;
  if (at) {
    s = cx.index(*at);
  } else {
    auto mt = cx.meet(p, q);
    if (!mt) throw SemanticError(p_label + " and " + q_label + " have no meet; pass a center");
    s = *mt;
    sigma = Principal::up;
  }
  if (sigma == Principal::lstar) throw SemanticError("envelope needs a ground-set semilattice (up, down, plus, minus)");
  auto L = principal_semilattice(cx, s, sigma);
  auto ground = principal_set(cx, s, sigma);
  auto local = [&](Vertex v, const std::string& l) -> Vertex {
    auto it = std::find(ground.begin(), ground.end(), v);
    if (it == ground.end()) throw SemanticError(l + " is not in the chosen semilattice");
    return static_cast<Vertex>(it - ground.begin());
  };
  const auto r = envelope(L, local(p, p_label), local(q, q_label));
  classify_pair(L, r.p, r.q);
  std::ostringstream os;
  if (fmt == Format::records) {
    json j;
    j["p"] = p_label;
    j["q"] = q_label;
    j["meet"] = L.label(r.s);
    j["class"] = to_string(r.pair_class);
    j["envelope"] = json::array();
    for (std::size_t i = 0; i < r.envelope.size(); ++i) {
      const auto& cd = r.coords.at(r.envelope[i]);
      j["envelope"].push_back({{"element", L.label(r.envelope[i])},
                               {"coords", {to_string(cd.first), to_string(cd.second)}},
                               {"theta", {to_string(r.thetas[i]), to_string(r.thetas[i + 1])}},
                               {"weight", to_string(r.weight(i))}});
    }
    os << j.dump() << '\n';
  } else {
    os << "pair (" << p_label << "," << q_label << ") meet " << L.label(r.s) << " class " << to_string(r.pair_class) << '\n';
    std::size_t width = 7;
    for (auto u : r.envelope) width = std::max(width, L.label(u).size());
    os << std::left << std::setw(static_cast<int>(width)) << "element" << "  " << std::setw(16) << "coords"
       << "  theta\n";
    for (std::size_t i = 0; i < r.envelope.size(); ++i) {
      const auto& cd = r.coords.at(r.envelope[i]);
      os << std::setw(static_cast<int>(width)) << L.label(r.envelope[i]) << "  " << std::setw(16)
         << ("(" + to_string(cd.first) + "," + to_string(cd.second) + ")") << "  [" << to_string(r.thetas[i]) << ","
         << to_string(r.thetas[i + 1]) << "]\n";
    }
  }
  return {kOk, os.str(), ""};
}

/// The 2-subdivision in the complex dump format.
inline CommandResult run_subdivide(const ProblemSpec& spec) {
  auto c = classify(spec.metric, spec.F);
  if (!c.tractable) return report_classification(c, Format::text);
  return {kOk, dump(two_subdivision(complex_for(spec, c)).as_complex()), ""};
}

/// Runs a command, mapping library errors to exit codes.
inline CommandResult guarded(const std::function<CommandResult()>& body) {
  try {
    return body();
  } catch (const InternalInconsistency& e) {
    return {kInternal, "", std::string("internal error: ") + e.what() + "\n"};
  } catch (const Error& e) {
    return {kInput, "", std::string("error: ") + e.what() + "\n"};
  } catch (const std::exception& e) {
    return {kInternal, "", std::string("internal error: ") + e.what() + "\n"};
  }
}

}  // namespace zeroext::cli
