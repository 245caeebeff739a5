// ambikit command-line front end.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ambikit/document.hpp"

using namespace ambikit;

namespace {

enum Exit { kOk = 0, kSchema = 2, kConsistency = 3, kInternal = 4, kDeadline = 5, kInequivalent = 10, kUndecided = 11 };

struct Common {
  bool json_out = false;
  std::optional<std::uint64_t> seed;
  double timeout = 0;
  std::string order;
};

// Invalid model specifications surface from the builders as plain errors;
// they are input problems, not internal ones.
ModelSpec load_model(const std::string& path, ModelDocument& doc) {
  doc = load_document(path);
  try {
    return build_model(doc);
  } catch (const SchemaError&) {
    throw;
  } catch (const Cancelled&) {
    throw;
  } catch (const EmptyParameterSpaceSuspected&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

std::uint64_t seed_of(const Common& c, const ModelDocument& d) { return c.seed.value_or(d.options.seed); }

CancelToken token_of(const Common& c, const ModelDocument& d) {
  double t = c.timeout > 0 ? c.timeout : d.options.timeout_seconds;
  return t > 0 ? CancelToken::after(std::chrono::duration<double>(t)) : CancelToken();
}

GroebnerBasis in_order(GroebnerBasis G, const Common& c, const ModelDocument& d, const CancelToken& cancel) {
  std::string order = c.order.empty() ? d.options.order : c.order;
  if (order == "lex" && !G.basis.empty()) return buchberger(IdealGens(G.vars, G.basis, TermOrder::lex()), cancel);
  return G;
}

void print_basis(const GroebnerBasis& G) {
  if (G.basis.empty()) {
    std::cout << "<0>\n";
    return;
  }
  for (const auto& g : G.basis) std::cout << g.to_string() << "\n";
}

void print_group(const char* title, const std::vector<Polynomial>& ps, const std::vector<std::string>& sources,
                 const char* rel) {
  std::cout << title << " (" << ps.size() << ")\n";
  for (std::size_t i = 0; i < ps.size(); ++i)
    std::cout << "  " << ps[i].to_string() << " " << rel << "    # " << sources[i] << "\n";
}

int cmd_markov(const std::string& file, const Common& c) {
  ModelDocument doc;
  ModelSpec m = load_model(file, doc);
  MarkovProperty mp = markov_property(m, {seed_of(c, doc), 5000});
  if (c.json_out) {
    std::cout << to_json(mp).dump(2) << "\n";
    return kOk;
  }
  std::cout << "model " << m.label << "\n";
  print_group("equations", mp.equations, mp.equation_sources, "= 0");
  print_group("inequalities", mp.inequalities, mp.inequality_sources, ">= 0");
  print_group("inequations", mp.inequations, mp.inequation_sources, "!= 0");
  print_group("positivities", mp.positivities, mp.positivity_sources, "> 0");
  for (const auto& w : mp.warnings) std::cout << "warning: " << w << "\n";
  return kOk;
}

int cmd_vanishing(const std::string& file, const Common& c) {
  ModelDocument doc;
  ModelSpec m = load_model(file, doc);
  CancelToken cancel = token_of(c, doc);
  GroebnerBasis G = in_order(vanishing_ideal(m, cancel), c, doc, cancel);
  if (c.json_out)
    std::cout << to_json(G).dump(2) << "\n";
  else
    print_basis(G);
  return kOk;
}

int cmd_equiv(const std::string& f1, const std::string& f2, const std::string& mode, std::size_t trials,
              const Common& c) {
  ModelDocument d1, d2;
  ModelSpec m1 = load_model(f1, d1), m2 = load_model(f2, d2);
  EquivMode em = mode == "zariski" ? EquivMode::zariski : EquivMode::exact;
  EquivalenceVerdict v = model_equiv(m1, m2, em, {seed_of(c, d1), 5000}, trials);
  if (c.json_out) {
    std::cout << to_json(v).dump(2) << "\n";
  } else {
    std::cout << to_string(v.result) << (v.sampled ? " (sampled)" : "") << "\n";
    for (const auto& cert : v.certificates) {
      std::cout << "certificate " << cert.direction << " " << cert.kind << ": " << cert.constraint << "    # "
                << cert.source << "\n";
      if (!cert.residual.empty()) std::cout << "  residual: " << cert.residual << "\n";
      if (!cert.point.empty()) {
        std::cout << "  point:";
        for (const auto& x : cert.point) std::cout << " " << x.get_str();
        std::cout << "\n";
      }
    }
    for (const auto& n : v.notes) std::cout << "note: " << n << "\n";
  }
  switch (v.result) {
    case EquivResult::equivalent:
      return kOk;
    case EquivResult::inequivalent:
      return kInequivalent;
    case EquivResult::undecided:
      return kUndecided;
  }
  return kUndecided;
}

// "1/2,3,0" in table order, or "s_1_1=1,s_1_2=1/2,..." naming every variable.
std::vector<Rational> parse_point(const std::string& text, const VarTablePtr& vars) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) items.push_back(item);
  }
  auto rational = [](const std::string& s) {
    try {
      Rational r(s);
      r.canonicalize();
      return r;
    } catch (const std::invalid_argument&) {
      throw SchemaError("--point: bad number '" + s + "'");
    }
  };
  std::vector<Rational> x(vars->size());
  if (!items.empty() && items[0].find('=') != std::string::npos) {
    std::vector<bool> seen(vars->size(), false);
    for (const auto& it : items) {
      auto eq = it.find('=');
      if (eq == std::string::npos) throw SchemaError("--point: mixed positional and named values");
      auto idx = vars->find(it.substr(0, eq));
      if (!idx) throw SchemaError("--point: unknown variable '" + it.substr(0, eq) + "'");
      x[*idx] = rational(it.substr(eq + 1));
      seen[*idx] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i]) throw SchemaError("--point: no value for " + vars->name(i));
    return x;
  }
  if (items.size() != vars->size())
    throw SchemaError("--point: expected " + std::to_string(vars->size()) + " values, got " +
                      std::to_string(items.size()));
  for (std::size_t i = 0; i < items.size(); ++i) x[i] = rational(items[i]);
  return x;
}

int cmd_check(const std::string& file, const std::string& point, const std::string& params, const Common& c) {
  ModelDocument doc;
  ModelSpec m = load_model(file, doc);
  MarkovProperty mp = markov_property(m, {seed_of(c, doc), 5000});
  std::vector<Rational> x;
  if (!params.empty()) {
    std::vector<Rational> theta = parse_point(params, m.iso.params());
    try {
      x = m.iso.alpha(theta);
    } catch (const DivisionByZero&) {
      throw SchemaError("--params: the point is a pole of the parametrization");
    }
  } else if (!point.empty()) {
    x = parse_point(point, m.iso.model());
  } else {
    throw SchemaError("check: give --point or --params");
  }
  auto report = check_point(mp, x);
  if (c.json_out) {
    std::cout << to_json(report).dump(2) << "\n";
    return kOk;
  }
  std::size_t failed = 0;
  for (const auto& r : report) {
    bool ok = r.verdict == Verdict::holds;
    failed += !ok;
    std::cout << (ok ? "holds " : "FAILS ") << r.kind << " " << r.source << "  value " << r.value.get_str() << "\n";
  }
  std::cout << failed << " of " << report.size() << " constraints fail\n";
  return kOk;
}

bool plain_dag(const ModelDocument& d) {
  if (d.family != "sem" || !d.graph.interventions.empty() || !d.graph.vertex_classes.empty() ||
      !d.graph.edge_classes.empty())
    return false;
  for (const auto& e : d.graph.edges)
    if (e.kind != EdgeKind::directed) return false;
  return true;
}

int cmd_bench(const std::string& file, const std::string& method, bool header, const Common& c) {
  ModelDocument doc;
  ModelSpec m = load_model(file, doc);
  if (doc.family != "concentration" && doc.family != "sem" && doc.family != "lyapunov")
    throw SchemaError(file + ": bench takes Gaussian family documents");
  CancelToken cancel = token_of(c, doc);
  auto t0 = std::chrono::steady_clock::now();
  std::string status = "ok";
  GroebnerBasis G;
  try {
    if (method == "elimination")
      G = elimination_vanishing_ideal(m, cancel);
    else if (plain_dag(doc))
      G = dag_local_markov_ideal(doc.graph, cancel);
    else
      G = vanishing_ideal(m, cancel);
  } catch (const Cancelled&) {
    status = "timeout";
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string label = doc.label.empty() ? m.label : doc.label;
  if (header) std::cout << "model,method,status,seconds,generators,hash\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", secs);
  std::cout << label << "," << method << "," << status << "," << buf << ",";
  if (status == "ok") {
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(basis_hash(G)));
    std::cout << G.basis.size() << "," << hash << "\n";
  } else {
    std::cout << ",\n";
  }
  return kOk;
}

int cmd_verify(const std::string& file, const Common& c) {
  ModelDocument doc;
  ModelSpec m = load_model(file, doc);
  VerificationReport r = verify_inverse(m.iso, true);
  auto known = check_known_images(m.iso, seed_of(c, doc), 20);
  bool ok = r.ok && known.empty();
  if (c.json_out) {
    json j;
    j["ok"] = ok;
    json fails = json::array();
    for (const auto& f : r.failures) fails.push_back({{"direction", "beta.alpha"}, {"variable", f.variable}, {"residual", f.residual}});
    for (const auto& f : r.back_failures)
      fails.push_back({{"direction", "alpha.beta"}, {"variable", f.variable}, {"residual", f.residual}});
    j["failures"] = fails;
    j["known_images"] = known;
    j["warnings"] = m.iso.warnings;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (ok ? "ok" : "FAILED") << ": " << m.iso.alpha.components.size() << " + "
              << m.iso.beta.components.size() << " components\n";
    for (const auto& f : r.failures) std::cout << "  beta.alpha " << f.variable << ": " << f.residual << "\n";
    for (const auto& f : r.back_failures) std::cout << "  alpha.beta " << f.variable << ": " << f.residual << "\n";
    for (const auto& k : known) std::cout << "  " << k << "\n";
  }
  return ok ? kOk : kConsistency;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ambirational statistical models: Markov properties, vanishing ideals, equivalence"};
  app.require_subcommand(1);
  Common common;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub, bool with_timeout) {
    sub->add_flag("--json", common.json_out, "JSON output");
    sub->add_option("--seed", seed, "seed for every randomized step (default: the document's, else 0)");
    if (with_timeout) sub->add_option("--timeout-seconds", common.timeout, "deadline for Groebner computations");
  };

  std::string file, file2, mode = "exact", method = "saturation", point, params;
  std::size_t trials = 50;
  bool no_header = false;

  auto* markov = app.add_subcommand("markov", "print the ambirational Markov property");
  markov->add_option("file", file, "model document")->required();
  add_common(markov, false);

  auto* vanishing = app.add_subcommand("vanishing", "print the vanishing ideal");
  vanishing->add_option("file", file, "model document")->required();
  vanishing->add_option("--order", common.order, "grevlex or lex")->check(CLI::IsMember({"grevlex", "lex"}));
  add_common(vanishing, true);

  auto* equiv = app.add_subcommand("equiv", "decide whether two models coincide");
  equiv->add_option("file1", file, "first model document")->required();
  equiv->add_option("file2", file2, "second model document")->required();
  equiv->add_option("--mode", mode, "exact or zariski")->check(CLI::IsMember({"exact", "zariski"}));
  equiv->add_option("--trials", trials, "sample points per sampled constraint");
  add_common(equiv, false);

  auto* check = app.add_subcommand("check", "evaluate every constraint at a point");
  check->add_option("file", file, "model document")->required();
  check->add_option("--point", point, "model coordinates, positional or name=value, comma separated");
  check->add_option("--params", params, "parameter values; the point is their image");
  add_common(check, false);

  auto* bench = app.add_subcommand("bench", "time the vanishing ideal computation (CSV row)");
  bench->add_option("file", file, "model document")->required();
  bench->add_option("--method", method, "saturation or elimination")
      ->check(CLI::IsMember({"saturation", "elimination"}));
  bench->add_flag("--no-header", no_header, "omit the CSV header");
  add_common(bench, true);

  auto* verify = app.add_subcommand("verify", "check that alpha and beta are mutually inverse");
  verify->add_option("file", file, "model document")->required();
  add_common(verify, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kSchema;
  }
  for (auto* sub : app.get_subcommands())
    if (sub->count("--seed")) common.seed = seed;

  try {
    if (*markov) return cmd_markov(file, common);
    if (*vanishing) return cmd_vanishing(file, common);
    if (*equiv) return cmd_equiv(file, file2, mode, trials, common);
    if (*check) return cmd_check(file, point, params, common);
    if (*bench) return cmd_bench(file, method, !no_header, common);
    if (*verify) return cmd_verify(file, common);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kSchema;
  } catch (const ParseError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kSchema;
  } catch (const EmptyParameterSpaceSuspected& e) {
    std::cerr << "consistency error: " << e.what() << "\n";
    return kConsistency;
  } catch (const RegionSamplingExhausted& e) {
    std::cerr << "consistency error: " << e.what() << "\n";
    return kConsistency;
  } catch (const Cancelled&) {
    std::cerr << "deadline exceeded\n";
    return kDeadline;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
