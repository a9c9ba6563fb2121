#pragma once

// Command surface of the `mef` tool. run() is the whole program minus main(),
// so tests can drive it with in-memory streams.
//
// Exit codes: 0 affirmative, 1 negative, 2 input error.

#include "mef/decide.hpp"
#include "mef/prooftrace.hpp"
#include "mef/summation.hpp"
#include "mef/text.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace mef::cli {

enum ExitCode : int { affirmative = 0, negative = 1, input_error = 2 };

struct Options {
  bool json = false;
  bool trace = false;
  std::optional<std::int64_t> witness_bound;
  std::size_t max_eulerian = EulerianTable::default_max_degree;
};

namespace detail {

using nlohmann::ordered_json;

inline ordered_json integer_json(const Integer& n) {
  if (n >= std::numeric_limits<std::int64_t>::min() && n <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(n);
  return n.str();
}

inline std::string point_text(const Point& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + std::to_string(x[i]);
  return s + ")";
}

inline std::string cause_text(const Cause& c) {
  if (const auto* n = std::get_if<NonTorsionCoefficient>(&c))
    return "coefficient at " + format(n->key) + " in factor " + std::to_string(n->factor + 1) + " is not torsion";
  const auto& r = std::get<ResidueClassFailure>(c);
  return "slope " + point_text(r.slope) + " survives on the residue class g = " + r.modulus.str() + " g' + " +
         point_text(r.residue) + " in factor " + std::to_string(r.factor + 1);
}

inline ordered_json cause_json(const Cause& c) {
  if (const auto* n = std::get_if<NonTorsionCoefficient>(&c))
    return {{"kind", "non-torsion-coefficient"},
            {"a", n->key.a},
            {"b", n->key.b},
            {"factor", n->factor + 1}};
  const auto& r = std::get<ResidueClassFailure>(c);
  return {{"kind", "residue-class"},  {"residue", r.residue},     {"slope", r.slope},
          {"modulus", integer_json(r.modulus)}, {"box_side", r.box_side}, {"factor", r.factor + 1}};
}

struct Report {
  ordered_json record = ordered_json::object();
  std::vector<std::string> lines;
  std::vector<TraceStep> trace;
  int code = affirmative;
};

inline Report start(const std::string& command, const std::string& function) {
  Report r;
  r.record["schema"] = 1;
  r.record["command"] = command;
  r.record["function"] = function;
  for (const char* k : {"verdict", "cause", "witness", "certificate", "integral"}) r.record[k] = nullptr;
  return r;
}

// Certificate and (optionally) the torsion-extraction and residue traces of h.
inline void attach_certificate(Report& r, const ExpPoly& h, const Options& o) {
  auto n = torsion_certificate(h);
  if (n) {
    r.record["certificate"] = integer_json(*n);
    r.lines.push_back("certificate: N = " + n->str());
  } else {
    r.lines.push_back("certificate: none");
  }
  if (!o.trace) return;
  auto ex = trace_torsion_extraction(h);
  r.trace.insert(r.trace.end(), ex.trace.begin(), ex.trace.end());
  if (n && *n > 1 && h.arity() > 0) {
    Integer cells = pow(*n, h.arity());
    if (cells <= 4096) r.trace.push_back(check_residue_constancy(h, *n));
  }
}

inline void attach_verdict(Report& r, const std::string& subject, const Verdict& v) {
  r.record["verdict"] = v.is_zero() ? "Zero" : "NonZero";
  r.lines.push_back(subject + ": " + (v.is_zero() ? "Zero" : "NonZero"));
  if (v.cause) {
    r.record["cause"] = cause_json(*v.cause);
    r.lines.push_back("cause: " + cause_text(*v.cause));
  }
  if (v.witness) {
    r.record["witness"] = *v.witness;
    r.lines.push_back("witness: " + point_text(*v.witness));
  } else if (!v.diagnostic.empty()) {
    r.lines.push_back("witness: " + v.diagnostic);
  }
}

inline Point parse_point(const std::string& text, std::size_t arity) {
  Point x;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      x.push_back(v);
    } catch (const std::exception&) {
      throw usage_error("--at expects non-negative integers separated by commas, got '" + text + "'");
    }
  }
  if (x.size() != arity)
    throw usage_error("--at gives " + std::to_string(x.size()) + " coordinates, the file declares " +
                      std::to_string(arity) + " variables");
  return x;
}

inline ProblemFile load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const parse_error& e) {
    throw usage_error(path + ":" + e.what());
  }
}

inline std::string pick(const ProblemFile& p, const std::vector<std::string>& names, std::size_t i) {
  if (i < names.size()) {
    p.function(names[i]);
    return names[i];
  }
  return p.functions.front().first;
}

inline void emit(const Report& r, const Options& o, std::ostream& out) {
  if (o.json) {
    ordered_json rec = r.record;
    if (o.trace) {
      ordered_json steps = ordered_json::array();
      for (const auto& s : r.trace)
        steps.push_back({{"rule", s.rule},
                         {"input", format(s.input)},
                         {"output", format(s.output)},
                         {"identity", s.identity},
                         {"holds", s.holds}});
      rec["trace"] = steps;
    }
    out << rec.dump(2) << "\n";
    return;
  }
  for (const auto& l : r.lines) out << l << "\n";
  if (o.trace)
    for (const auto& s : r.trace)
      out << "trace [" << s.rule << "] " << (s.holds ? "ok" : "FAILED") << ": " << s.identity << "\n"
          << "  in:  " << format(s.input) << "\n"
          << "  out: " << format(s.output) << "\n";
}

inline Report check_zero(const ProblemFile& p, const std::string& name, const Options& o) {
  Report r = start("check-zero", name);
  const ExpPoly& f = p.function(name);
  Verdict v = pointwise_zero(f, DecideOptions{o.witness_bound});
  attach_verdict(r, name, v);
  attach_certificate(r, f, o);
  r.code = v.is_zero() ? affirmative : negative;
  return r;
}

inline Report check_torsion(const ProblemFile& p, const std::string& name, const Options& o) {
  Report r = start("check-torsion", name);
  const ExpPoly& f = p.function(name);
  auto n = torsion_certificate(f);
  r.record["verdict"] = n ? "Torsion" : "NonTorsion";
  r.lines.push_back(name + ": " + (n ? "Torsion" : "NonTorsion"));
  if (!n) {
    for (const auto& [k, c] : f.terms())
      if (!torsion_annihilator(c)) {
        for (std::size_t j = 0; j < f.ring().size(); ++j)
          if (!torsion_annihilator(c.part(j))) {
            Cause cause = NonTorsionCoefficient{k, j};
            r.record["cause"] = cause_json(cause);
            r.lines.push_back("cause: " + cause_text(cause));
            break;
          }
        break;
      }
  }
  attach_certificate(r, f, o);
  r.code = n ? affirmative : negative;
  return r;
}

inline Report integrable(const std::string& command, const ProblemFile& p, const std::string& name,
                         const Options& o) {
  Report r = start(command, name);
  const ExpPoly& f = p.function(name);
  EulerianTable table(o.max_eulerian);
  auto rep = decide_integrable(f, DecideOptions{o.witness_bound}, table);
  r.record["verdict"] = rep.integrable ? "Integrable" : "NotIntegrable";
  r.record["non_decaying_part"] = format(rep.finf_part);
  if (rep.integral) r.record["integral"] = format(*rep.integral);
  if (command == "integrate" && rep.integral) {
    r.lines.push_back(format(*rep.integral));
  } else {
    r.lines.push_back(name + ": " + (rep.integrable ? "Integrable" : "NotIntegrable"));
    if (rep.integral) r.lines.push_back("integral: " + format(*rep.integral));
    r.lines.push_back("non-decaying part: " + format(rep.finf_part));
    if (!rep.integrable) {
      if (rep.finf_verdict.cause) {
        r.record["cause"] = cause_json(*rep.finf_verdict.cause);
        r.lines.push_back("cause: " + cause_text(*rep.finf_verdict.cause));
      }
      if (rep.finf_verdict.witness) {
        r.record["witness"] = *rep.finf_verdict.witness;
        r.lines.push_back("witness: " + point_text(*rep.finf_verdict.witness));
      }
    }
  }
  if (o.trace) attach_certificate(r, rep.finf_part, o);
  r.code = rep.integrable ? affirmative : negative;
  return r;
}

inline Report eval(const ProblemFile& p, const std::string& name, const std::string& at) {
  Report r = start("eval", name);
  const ExpPoly& f = p.function(name);
  Point x = parse_point(at, f.arity());
  std::string value = format(evaluate(f, x));
  r.record["at"] = x;
  r.record["value"] = value;
  r.lines.push_back(value);
  return r;
}

inline Report equal_cmd(const ProblemFile& p, const std::string& a, const std::string& b, const Options& o) {
  Report r = start("equal", a);
  r.record["other"] = b;
  ExpPoly h = p.function(a) - p.function(b);
  Verdict v = pointwise_zero(h, DecideOptions{o.witness_bound});
  attach_verdict(r, a + " - " + b, v);
  r.record["verdict"] = v.is_zero() ? "Equal" : "NotEqual";
  r.lines.insert(r.lines.begin(), a + (v.is_zero() ? " = " : " != ") + b);
  attach_certificate(r, h, o);
  r.code = v.is_zero() ? affirmative : negative;
  return r;
}

inline Report normalize(const ProblemFile& p) {
  Report r;
  r.record["schema"] = 1;
  r.record["command"] = "normalize";
  std::string text = format(p);
  r.record["text"] = text;
  text.pop_back();
  r.lines.push_back(text);
  return r;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decide nullity, torsion and integrability of exponential polynomials"};
  app.name("mef");
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  std::int64_t bound = 0;
  app.add_flag("--json", o.json, "Print a structured JSON record");
  app.add_flag("--trace", o.trace, "Include the proof trace");
  auto* bound_opt = app.add_option("--witness-bound", bound, "Cap on each side of the witness search box")
                        ->check(CLI::PositiveNumber);
  app.add_option("--max-eulerian", o.max_eulerian, "Largest polynomial degree supported by integration")
      ->check(CLI::NonNegativeNumber);

  std::string file, at;
  std::vector<std::string> names;
  auto add = [&](const char* name, const char* help, bool needs_two = false) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("file", file, "Problem file (.mef)")->required();
    auto* n = s->add_option("names", names, needs_two ? "Two function names" : "Function name (default: first fn)");
    if (needs_two) n->expected(2)->required();
    else n->expected(0, 1);
    return s;
  };
  add("check-zero", "Decide whether a function vanishes at every point of N^r");
  add("check-torsion", "Decide whether every coefficient is torsion");
  add("check-integrable", "Decide integrability over N^r");
  add("integrate", "Print the sum over N^r of an integrable function");
  add("eval", "Evaluate at a point")->add_option("--at", at, "Point x1,..,xr")->required();
  add("equal", "Decide whether two functions agree at every point", true);
  auto* norm = app.add_subcommand("normalize", "Print the file in normal form");
  norm->add_option("file", file, "Problem file (.mef)")->required();

  std::vector<const char*> argv{"mef"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? affirmative : input_error;
  }
  if (*bound_opt) o.witness_bound = bound;

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    ProblemFile p = detail::load(file);
    detail::Report r;
    if (command == "normalize") r = detail::normalize(p);
    else if (command == "equal") r = detail::equal_cmd(p, names[0], names[1], o);
    else {
      std::string name = detail::pick(p, names, 0);
      if (command == "check-zero") r = detail::check_zero(p, name, o);
      else if (command == "check-torsion") r = detail::check_torsion(p, name, o);
      else if (command == "eval") r = detail::eval(p, name, at);
      else r = detail::integrable(command, p, name, o);
    }
    detail::emit(r, o, out);
    return r.code;
  } catch (const std::exception& e) {
    err << "mef: " << e.what() << "\n";
    return input_error;
  }
}

}  // namespace mef::cli
