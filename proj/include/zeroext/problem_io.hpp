#pragma once

// Text format for problem instances.
//
//   # comment
//   [metric]            labels line, then one row per label ("a: 0 1 2" or "0 1 2")
//   [graph]             alternative to [metric]: "u v w" edges, metric = shortest paths
//   [F]                 "a c" per line
//   [variables]         a single count
//   [terms]             anchor i v w | pair i a b w | hard_anchor i v | hard_pair i a b | pairwise i j w
//   [relation]          precedes | boolean_pair | explicit, followed by "p: q1 q2 ..." rows
//   [options]           method, local, start, brute_limit, blp_budget, seed

#include <zeroext/classify.hpp>
#include <zeroext/errors.hpp>
#include <zeroext/metric.hpp>
#include <zeroext/solver.hpp>

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace zeroext {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

class SemanticError : public Error {
 public:
  using Error::Error;
};

struct SolverOptions {
  std::string method = "dsda";  // dsda | sda | brute
  std::string local = "blp";    // blp | brute
  std::vector<std::string> start;
  std::optional<std::size_t> brute_limit;
  std::optional<std::size_t> blp_budget;
  std::optional<unsigned long> seed;

  bool operator==(const SolverOptions&) const = default;
};

struct ProblemSpec {
  Metric metric;
  std::vector<VertexPair> F;  // as written, endpoints resolved
  std::size_t n = 0;
  std::vector<UnaryTerm> unary;
  std::vector<PairwiseTerm> pairwise;
  RelationKind relation = RelationKind::precedes;
  Relation explicit_relation;  // only for explicit_set, identities included
  SolverOptions options;

  Instance instance() const { return Instance{metric, F, n, unary, pairwise}; }
};

inline bool operator==(const UnaryTerm& a, const UnaryTerm& b) {
  return a.kind == b.kind && a.var == b.var && a.a == b.a && a.b == b.b && a.weight == b.weight;
}
inline bool operator==(const PairwiseTerm& a, const PairwiseTerm& b) {
  return a.i == b.i && a.j == b.j && a.weight == b.weight;
}
inline bool operator==(const ProblemSpec& a, const ProblemSpec& b) {
  return a.metric == b.metric && a.F == b.F && a.n == b.n && a.unary == b.unary && a.pairwise == b.pairwise &&
         a.relation == b.relation && (a.relation != RelationKind::explicit_set || a.explicit_relation == b.explicit_relation) &&
         a.options == b.options;
}

namespace detail {

struct Token {
  std::string text;
  std::size_t column;
};

struct Line {
  std::size_t number;
  std::vector<Token> tokens;
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '#') ++j;
    out.push_back({std::string(line.substr(i, j - i)), i + 1});
    i = j;
  }
  return out;
}

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) {
    std::size_t number = 0, pos = 0;
    std::string current;
    while (pos <= text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      ++number;
      auto toks = tokenize(text.substr(pos, end - pos));
      pos = end + 1;
      if (toks.empty()) continue;
      const auto& head = toks.front().text;
      if (head.front() == '[') {
        if (head.back() != ']' || toks.size() != 1) throw ParseError(number, toks.front().column, "malformed section header");
        current = head.substr(1, head.size() - 2);
        static const std::vector<std::string> known{"metric", "graph", "F", "variables", "terms", "relation", "options"};
        if (std::find(known.begin(), known.end(), current) == known.end())
          throw ParseError(number, toks.front().column, "unknown section [" + current + "]");
        if (sections_.count(current)) throw ParseError(number, toks.front().column, "repeated section [" + current + "]");
        sections_[current];
        header_line_[current] = number;
        continue;
      }
      if (current.empty()) throw ParseError(number, toks.front().column, "content before the first section");
      sections_[current].push_back({number, std::move(toks)});
    }
  }

  ProblemSpec parse() {
    ProblemSpec spec;
    parse_metric(spec);
    parse_F(spec);
    parse_variables(spec);
    parse_terms(spec);
    parse_relation(spec);
    parse_options(spec);
    return spec;
  }

 private:
  static Rational rational(const Line& l, const Token& t) {
    auto r = parse_rational(t.text);
    if (!r) throw ParseError(l.number, t.column, "expected a rational, got '" + t.text + "'");
    return *r;
  }

  static Rational weight(const Line& l, const Token& t) {
    auto r = rational(l, t);
    if (r < 0) throw SemanticError("negative weight " + t.text + " on line " + std::to_string(l.number));
    return r;
  }

  static std::size_t count(const Line& l, const Token& t) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(t.text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != t.text.size() || t.text.front() == '-' || t.text.front() == '+')
      throw ParseError(l.number, t.column, "expected a non-negative integer, got '" + t.text + "'");
    return static_cast<std::size_t>(v);
  }

  static void arity(const Line& l, std::size_t want) {
    if (l.tokens.size() != want) {
      const auto& last = l.tokens.back();
      throw ParseError(l.number, last.column, "expected " + std::to_string(want) + " fields, got " + std::to_string(l.tokens.size()));
    }
  }

  static Vertex vertex(const ProblemSpec& spec, const Line& l, const Token& t) {
    auto v = spec.metric.find(t.text);
    if (!v) throw SemanticError("unknown label '" + t.text + "' on line " + std::to_string(l.number));
    return *v;
  }

  std::size_t variable(const ProblemSpec& spec, const Line& l, const Token& t) const {
    auto i = count(l, t);
    if (i >= spec.n) throw SemanticError("variable " + t.text + " out of range on line " + std::to_string(l.number));
    return i;
  }

  const std::vector<Line>* section(const std::string& name) const {
    auto it = sections_.find(name);
    return it == sections_.end() ? nullptr : &it->second;
  }

  void parse_metric(ProblemSpec& spec) {
    const auto* m = section("metric");
    const auto* g = section("graph");
    if (m && g) throw ParseError(header_line_.at("graph"), 1, "[metric] and [graph] are mutually exclusive");
    if (!m && !g) throw ParseError(1, 1, "missing [metric] section");
    try {
      if (m) {
        if (m->empty() || m->front().tokens.front().text != "labels")
          throw ParseError(m->empty() ? header_line_.at("metric") : m->front().number, 1, "[metric] must start with a labels line");
        std::vector<std::string> labels;
        for (std::size_t i = 1; i < m->front().tokens.size(); ++i) labels.push_back(m->front().tokens[i].text);
        std::vector<std::vector<Rational>> rows;
        for (std::size_t r = 1; r < m->size(); ++r) {
          const auto& l = (*m)[r];
          std::size_t first = 0;
          if (l.tokens.front().text.back() == ':') {
            auto name = l.tokens.front().text.substr(0, l.tokens.front().text.size() - 1);
            if (r - 1 >= labels.size() || name != labels[r - 1])
              throw ParseError(l.number, 1, "row label '" + name + "' out of order");
            first = 1;
          }
          std::vector<Rational> row;
          for (std::size_t k = first; k < l.tokens.size(); ++k) row.push_back(rational(l, l.tokens[k]));
          if (row.size() != labels.size())
            throw ParseError(l.number, l.tokens.back().column, "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(labels.size()));
          rows.push_back(std::move(row));
        }
        if (rows.size() != labels.size())
          throw ParseError(m->back().number, 1, "expected " + std::to_string(labels.size()) + " matrix rows");
        spec.metric = validate_metric(std::move(labels), rows);
      } else {
        std::vector<std::string> labels;
        std::map<std::string, Vertex> id;
        auto intern = [&](const std::string& s) {
          auto [it, fresh] = id.emplace(s, labels.size());
          if (fresh) labels.push_back(s);
          return it->second;
        };
        std::vector<Edge> edges;
        for (const auto& l : *g) {
          if (l.tokens.front().text == "labels") {
            for (std::size_t i = 1; i < l.tokens.size(); ++i) intern(l.tokens[i].text);
            continue;
          }
          arity(l, 3);
          auto u = intern(l.tokens[0].text), v = intern(l.tokens[1].text);
          auto w = rational(l, l.tokens[2]);
          if (w <= 0) throw SemanticError("edge weight must be positive on line " + std::to_string(l.number));
          edges.push_back({u, v, w});
        }
        if (labels.empty()) throw ParseError(header_line_.at("graph"), 1, "empty graph");
        spec.metric = WeightedGraph::from_edges(std::move(labels), edges).metric();
      }
    } catch (const ParseError&) {
      throw;
    } catch (const SemanticError&) {
      throw;
    } catch (const Error& e) {
      throw SemanticError(e.what());
    }
  }

  void parse_F(ProblemSpec& spec) {
    const auto* s = section("F");
    if (!s) return;
    for (const auto& l : *s) {
      arity(l, 2);
      auto a = vertex(spec, l, l.tokens[0]), b = vertex(spec, l, l.tokens[1]);
      if (a == b) throw SemanticError("F pair with identical endpoints on line " + std::to_string(l.number));
      for (const auto& [x, y] : spec.F)
        if ((x == a && y == b) || (x == b && y == a))
          throw SemanticError("duplicate F pair on line " + std::to_string(l.number));
      spec.F.emplace_back(a, b);
    }
  }

  void parse_variables(ProblemSpec& spec) {
    const auto* s = section("variables");
    if (!s) return;
    if (s->size() != 1) throw ParseError(s->empty() ? header_line_.at("variables") : (*s)[1].number, 1, "[variables] holds a single count");
    arity(s->front(), 1);
    spec.n = count(s->front(), s->front().tokens[0]);
  }

  void parse_terms(ProblemSpec& spec) {
    const auto* s = section("terms");
    if (!s) return;
    auto in_f = [&](Vertex a, Vertex b) {
      for (const auto& [x, y] : spec.F)
        if ((x == a && y == b) || (x == b && y == a)) return true;
      return false;
    };
    for (const auto& l : *s) {
      const auto& kind = l.tokens[0].text;
      UnaryTerm t;
      if (kind == "anchor" || kind == "hard_anchor") {
        arity(l, kind == "anchor" ? 4 : 3);
        t.kind = kind == "anchor" ? UnaryTerm::Kind::anchor : UnaryTerm::Kind::hard_anchor;
        t.var = variable(spec, l, l.tokens[1]);
        t.a = t.b = vertex(spec, l, l.tokens[2]);
        if (kind == "anchor") t.weight = weight(l, l.tokens[3]);
        spec.unary.push_back(t);
      } else if (kind == "pair" || kind == "hard_pair") {
        arity(l, kind == "pair" ? 5 : 4);
        t.kind = kind == "pair" ? UnaryTerm::Kind::pair : UnaryTerm::Kind::hard_pair;
        t.var = variable(spec, l, l.tokens[1]);
        t.a = vertex(spec, l, l.tokens[2]);
        t.b = vertex(spec, l, l.tokens[3]);
        if (!in_f(t.a, t.b)) throw SemanticError("pair term on a set outside F on line " + std::to_string(l.number));
        if (kind == "pair") t.weight = weight(l, l.tokens[4]);
        spec.unary.push_back(t);
      } else if (kind == "pairwise") {
        arity(l, 4);
        PairwiseTerm p;
        p.i = variable(spec, l, l.tokens[1]);
        p.j = variable(spec, l, l.tokens[2]);
        if (!(p.i < p.j)) throw SemanticError("pairwise term needs i < j on line " + std::to_string(l.number));
        p.weight = weight(l, l.tokens[3]);
        spec.pairwise.push_back(p);
      } else {
        throw ParseError(l.number, l.tokens[0].column, "unknown term kind '" + kind + "'");
      }
    }
  }

  void parse_relation(ProblemSpec& spec) {
    const auto* s = section("relation");
    if (!s || s->empty()) return;
    const auto& head = s->front();
    arity(head, 1);
    const auto& kind = head.tokens[0].text;
    if (kind == "precedes") {
      spec.relation = RelationKind::precedes;
    } else if (kind == "boolean_pair") {
      spec.relation = RelationKind::boolean_pair;
    } else if (kind == "explicit") {
      spec.relation = RelationKind::explicit_set;
      spec.explicit_relation = Relation(spec.metric.size(), 0);
      for (Vertex v = 0; v < spec.metric.size(); ++v) spec.explicit_relation(v, v) = 1;
    } else {
      throw ParseError(head.number, head.tokens[0].column, "unknown relation kind '" + kind + "'");
    }
    if (spec.relation != RelationKind::explicit_set && s->size() > 1)
      throw ParseError((*s)[1].number, 1, "relation rows are only allowed for explicit relations");
    for (std::size_t r = 1; r < s->size(); ++r) {
      const auto& l = (*s)[r];
      const auto& first = l.tokens.front();
      if (first.text.size() < 2 || first.text.back() != ':') throw ParseError(l.number, first.column, "expected 'label:'");
      Token name{first.text.substr(0, first.text.size() - 1), first.column};
      auto p = vertex(spec, l, name);
      for (std::size_t k = 1; k < l.tokens.size(); ++k) spec.explicit_relation(p, vertex(spec, l, l.tokens[k])) = 1;
    }
  }

  void parse_options(ProblemSpec& spec) {
    const auto* s = section("options");
    if (!s) return;
    for (const auto& l : *s) {
      const auto& key = l.tokens[0].text;
      if (key == "method" || key == "local") {
        arity(l, 2);
        const auto& v = l.tokens[1].text;
        const bool ok = key == "method" ? (v == "dsda" || v == "sda" || v == "brute") : (v == "blp" || v == "brute");
        if (!ok) throw ParseError(l.number, l.tokens[1].column, "bad value '" + v + "' for " + key);
        (key == "method" ? spec.options.method : spec.options.local) = v;
      } else if (key == "start") {
        if (l.tokens.size() != spec.n + 1) throw SemanticError("start needs one label per variable on line " + std::to_string(l.number));
        spec.options.start.clear();
        for (std::size_t k = 1; k < l.tokens.size(); ++k) {
          vertex(spec, l, l.tokens[k]);
          spec.options.start.push_back(l.tokens[k].text);
        }
      } else if (key == "brute_limit" || key == "blp_budget" || key == "seed") {
        arity(l, 2);
        auto v = count(l, l.tokens[1]);
        if (key == "brute_limit") spec.options.brute_limit = v;
        if (key == "blp_budget") spec.options.blp_budget = v;
        if (key == "seed") spec.options.seed = v;
      } else {
        throw ParseError(l.number, l.tokens[0].column, "unknown option '" + key + "'");
      }
    }
  }

  std::map<std::string, std::vector<Line>> sections_;
  std::map<std::string, std::size_t> header_line_;
};

}  // namespace detail

inline ProblemSpec parse_instance(std::string_view text) { return detail::SpecParser(text).parse(); }

/// Canonical text; parse_instance(emit(s)) == s.
inline std::string emit(const ProblemSpec& spec) {
  std::ostringstream os;
  const auto& m = spec.metric;
  os << "[metric]\nlabels";
  for (const auto& l : m.labels()) os << ' ' << l;
  os << '\n';
  for (Vertex x = 0; x < m.size(); ++x) {
    os << m.label(x) << ':';
    for (Vertex y = 0; y < m.size(); ++y) os << ' ' << to_string(m(x, y));
    os << '\n';
  }
  if (!spec.F.empty()) {
    os << "\n[F]\n";
    for (auto [a, b] : spec.F) os << m.label(a) << ' ' << m.label(b) << '\n';
  }
  os << "\n[variables]\n" << spec.n << '\n';
  if (!spec.unary.empty() || !spec.pairwise.empty()) {
    os << "\n[terms]\n";
    for (const auto& t : spec.unary) {
      switch (t.kind) {
        case UnaryTerm::Kind::anchor: os << "anchor " << t.var << ' ' << m.label(t.a) << ' ' << to_string(t.weight); break;
        case UnaryTerm::Kind::pair:
          os << "pair " << t.var << ' ' << m.label(t.a) << ' ' << m.label(t.b) << ' ' << to_string(t.weight);
          break;
        case UnaryTerm::Kind::hard_anchor: os << "hard_anchor " << t.var << ' ' << m.label(t.a); break;
        case UnaryTerm::Kind::hard_pair: os << "hard_pair " << t.var << ' ' << m.label(t.a) << ' ' << m.label(t.b); break;
      }
      os << '\n';
    }
    for (const auto& t : spec.pairwise) os << "pairwise " << t.i << ' ' << t.j << ' ' << to_string(t.weight) << '\n';
  }
  os << "\n[relation]\n";
  switch (spec.relation) {
    case RelationKind::precedes: os << "precedes\n"; break;
    case RelationKind::boolean_pair: os << "boolean_pair\n"; break;
    case RelationKind::explicit_set:
      os << "explicit\n";
      for (Vertex p = 0; p < m.size(); ++p) {
        os << m.label(p) << ':';
        for (Vertex q = 0; q < m.size(); ++q)
          if (q != p && spec.explicit_relation(p, q)) os << ' ' << m.label(q);
        os << '\n';
      }
      break;
  }
  const auto& o = spec.options;
  os << "\n[options]\nmethod " << o.method << "\nlocal " << o.local << '\n';
  if (!o.start.empty()) {
    os << "start";
    for (const auto& s : o.start) os << ' ' << s;
    os << '\n';
  }
  if (o.brute_limit) os << "brute_limit " << *o.brute_limit << '\n';
  if (o.blp_budget) os << "blp_budget " << *o.blp_budget << '\n';
  if (o.seed) os << "seed " << *o.seed << '\n';
  return os.str();
}

}  // namespace zeroext
