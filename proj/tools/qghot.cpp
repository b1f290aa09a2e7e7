// qghot: command-line front end.
//
//   qghot solve|hotspots|verify|reproduce|sweep|plot [options]
//   qghot --replay REPORT [--out FILE]
//
// Exit codes: 0 success, 1 verifier or fact failure, 2 input error,
// 3 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qghot/catalog/examples.hpp"
#include "qghot/catalog/limits.hpp"
#include "qghot/catalog/perturb.hpp"
#include "qghot/hotspots/verify.hpp"
#include "qghot/report/report.hpp"
#include "qghot/report/reproduce.hpp"
#include "qghot/report/svg.hpp"
#include "qghot/spectral/spectrum.hpp"

namespace {

using namespace qghot;

constexpr int exit_ok = 0, exit_failed_check = 1, exit_input = 2, exit_numerical = 3;

const std::vector<std::string> all_checks = {"location", "no-disconnect", "tree-boundary", "star-diameter"};

struct RunConfig {
  std::string command;
  std::string graph_file;
  std::string example;
  Params params;
  std::optional<GraphDescription> graph;  // resolved description (reports only)
  std::string backend = "secular";
  double h = 1e-3;
  std::size_t k = 6;
  std::size_t index = 2;
  std::size_t directions = 0;
  unsigned seed = 1;
  std::string format = "report";
  std::vector<std::string> checks;
  std::vector<std::string> edges;
  std::vector<double> ladder;
  double tau_eig = default_tol_eig();
};

Json to_json(const RunConfig& c) {
  Json j{{"command", c.command},
         {"backend", c.backend},
         {"h", c.h},
         {"k", c.k},
         {"index", c.index},
         {"directions", c.directions},
         {"seed", c.seed},
         {"format", c.format},
         {"checks", c.checks},
         {"edges", c.edges},
         {"ladder", c.ladder},
         {"tau_eig", c.tau_eig}};
  j["source"] = {{"file", c.graph_file}, {"example", c.example}, {"params", c.params.values()}};
  j["graph"] = c.graph ? qghot::to_json(*c.graph) : Json(nullptr);
  return j;
}

RunConfig config_from_json(const Json& j) {
  RunConfig c;
  try {
    c.command = j.at("command").get<std::string>();
    c.backend = j.at("backend").get<std::string>();
    c.h = j.at("h").get<double>();
    c.k = j.at("k").get<std::size_t>();
    c.index = j.at("index").get<std::size_t>();
    c.directions = j.at("directions").get<std::size_t>();
    c.seed = j.at("seed").get<unsigned>();
    c.format = j.at("format").get<std::string>();
    c.checks = j.at("checks").get<std::vector<std::string>>();
    c.edges = j.at("edges").get<std::vector<std::string>>();
    c.ladder = j.at("ladder").get<std::vector<double>>();
    c.tau_eig = j.at("tau_eig").get<double>();
    const auto& src = j.at("source");
    c.graph_file = src.at("file").get<std::string>();
    c.example = src.at("example").get<std::string>();
    for (const auto& [key, value] : src.at("params").items()) c.params.set(key, value.get<std::string>());
    if (!j.at("graph").is_null()) c.graph = parse_description(j.at("graph"));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::BadParameter, std::string("replay config: ") + e.what());
  }
  return c;
}

MetricGraph resolve_graph(RunConfig& c) {
  if (!c.graph) {
    if (!c.graph_file.empty() && !c.example.empty()) fail(ErrorCode::BadParameter, "give either a graph file or --example");
    if (!c.graph_file.empty()) {
      c.graph = describe(load_graph(c.graph_file));
    } else if (!c.example.empty()) {
      c.graph = describe(build_example(c.example, c.params));
    } else {
      fail(ErrorCode::BadParameter, "no graph given (use --graph FILE or --example ID)");
    }
  }
  return build_graph(*c.graph);
}

struct Output {
  Json report;
  std::string csv;
  int code = exit_ok;
};

std::string render(const RunConfig& c, const Output& out) {
  return c.format == "csv" ? out.csv : out.report.dump(2) + "\n";
}

Json begin_report(const RunConfig& c, const MetricGraph& g) {
  Json r = report_header(c.command);
  r["config"] = to_json(c);
  r["graph_summary"] = graph_summary(g);
  return r;
}

// ---------------------------------------------------------------------------

Output cmd_solve(RunConfig& c) {
  auto g = resolve_graph(c);
  if (c.k < 1) fail(ErrorCode::BadParameter, "--k must be >= 1");
  const Backend backend = parse_backend(c.backend);
  auto pairs = eigenvalues(g, c.k, backend, {}, c.h);
  Output out;
  out.report = begin_report(c, g);
  Json spectrum = Json::array();
  for (const auto& p : pairs) spectrum.push_back(to_json(p, false));
  out.report["spectrum"] = spectrum;
  std::vector<double> values;
  std::ostringstream csv;
  csv << "index,mu,multiplicity\n";
  for (const auto& p : pairs) {
    for (std::size_t j = 0; j < p.multiplicity && values.size() < c.k; ++j) {
      values.push_back(p.mu);
      csv << values.size() << ',' << fmt(p.mu) << ',' << p.multiplicity << '\n';
    }
  }
  out.report["values"] = values;
  out.csv = csv.str();
  return out;
}

std::string kind_of(const HotspotPiece& p) { return p.has_max && p.has_min ? "max+min" : p.has_max ? "max" : "min"; }

/// Value at the piece of its witness eigenfunction (normalized), or of the
/// single basis function when the eigenvalue is simple.
double witness_value(const MetricGraph& g, const EigenPair& pair, const HotspotPiece& p) {
  EigenFunction f = pair.basis.front();
  if (!p.witnesses.empty()) {
    f = scaled(f, 0.0);
    for (std::size_t i = 0; i < p.witnesses.front().size(); ++i) f = combine_linear(f, 1.0, pair.basis[i], p.witnesses.front()[i]);
    f = scaled(f, 1.0 / norm(g, f));
  }
  return evaluate(g, f, {p.segment.edge, p.segment.lo});
}

Output cmd_hotspots(RunConfig& c) {
  auto g = resolve_graph(c);
  if (c.backend != "secular") fail(ErrorCode::BadParameter, "hot spots need the secular backend");
  auto pair = second_pair(g);
  auto report = hotspot_sets(g, pair, {.directions = c.directions});
  Output out;
  out.report = begin_report(c, g);
  out.report["spectrum"] = to_json(pair, true);
  out.report["hotspots"] = to_json(g, report);
  Json verifiers = Json::array();
  auto add = [&](const VerifierOutcome& o) {
    verifiers.push_back(to_json(o));
    if (!o.pass) out.code = exit_failed_check;
  };
  add(verify_location(g, report));
  for (const auto& f : pair.basis) add(verify_no_disconnect(g, f));
  if (is_tree(g)) add(verify_tree_boundary(g, report));
  out.report["verifiers"] = verifiers;
  std::ostringstream csv;
  csv << "set,edge,offset,offset_end,value,kind,component\n";
  for (const auto& [name, set] : {std::pair{"global", &report.global}, std::pair{"local", &report.local}}) {
    for (const auto& p : set->pieces) {
      csv << name << ',' << csv_field(g.edge(p.segment.edge).id) << ',' << fmt(p.segment.lo) << ',' << fmt(p.segment.hi) << ','
          << fmt(witness_value(g, pair, p)) << ',' << kind_of(p) << ',' << p.component << '\n';
    }
  }
  out.csv = csv.str();
  return out;
}

Output cmd_verify(RunConfig& c) {
  auto g = resolve_graph(c);
  if (c.checks.empty()) c.checks = all_checks;
  for (const auto& name : c.checks) {
    if (std::find(all_checks.begin(), all_checks.end(), name) == all_checks.end()) {
      fail(ErrorCode::BadParameter, "unknown check '" + name + "' (expected location, no-disconnect, tree-boundary, star-diameter)");
    }
  }
  auto pair = second_pair(g);
  std::optional<HotspotReport> report;
  auto hotspots = [&]() -> const HotspotReport& {
    if (!report) report = hotspot_sets(g, pair, {.directions = c.directions});
    return *report;
  };
  Output out;
  out.report = begin_report(c, g);
  Json results = Json::array();
  std::ostringstream csv;
  csv << "check,status,detail\n";
  auto record = [&](const Json& j) {
    results.push_back(j);
    csv << j["check"].get<std::string>() << ',' << j["status"].get<std::string>() << ',' << csv_field(j["detail"].get<std::string>())
        << '\n';
    if (j["status"] == "fail") out.code = exit_failed_check;
  };
  for (const auto& name : c.checks) {
    try {
      if (name == "location") {
        record(to_json(verify_location(g, hotspots())));
      } else if (name == "no-disconnect") {
        VerifierOutcome all{"no_disconnect", true, {}, {{"tau_eig", c.tau_eig}}, {}};
        for (const auto& f : pair.basis) {
          auto o = verify_no_disconnect(g, f);
          all.pass = all.pass && o.pass;
          all.witnesses.insert(all.witnesses.end(), o.witnesses.begin(), o.witnesses.end());
          all.detail += (all.detail.empty() ? "" : "; ") + o.detail;
        }
        record(to_json(all));
      } else if (name == "tree-boundary") {
        record(to_json(verify_tree_boundary(g, hotspots())));
      } else {
        record(to_json(star_diameter_check(g, {.samples = 64, .tol = c.tau_eig})));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InapplicableCheck && e.code() != ErrorCode::NotAStar) throw;
      std::string check = name;
      std::replace(check.begin(), check.end(), '-', '_');
      VerifierOutcome o{check, true, {}, {}, e.what()};
      record(to_json(o, "inapplicable"));
    }
  }
  out.report["verifiers"] = results;
  out.csv = csv.str();
  return out;
}

Output cmd_reproduce(RunConfig& c) {
  if (c.example.empty()) fail(ErrorCode::BadParameter, "reproduce needs an example id");
  const auto& ids = example_ids();
  if (std::find(ids.begin(), ids.end(), c.example) == ids.end()) fail(ErrorCode::UnknownExample, "unknown example '" + c.example + "'");
  auto r = reproduce(c.example, c.params, {.directions = c.directions});
  c.graph = describe(r.graph);
  Output out;
  out.report = begin_report(c, r.graph);
  out.report["spectrum"] = to_json(r.pair, false);
  out.report["hotspots"] = to_json(r.graph, r.hotspots);
  Json facts = Json::array();
  std::ostringstream csv;
  csv << "fact,expected,observed,status\n";
  for (const auto& f : r.facts) {
    const char* status = f.pass ? "PASS" : "FAIL";
    facts.push_back({{"fact", f.name}, {"expected", f.expected}, {"observed", f.observed}, {"status", status}});
    csv << csv_field(f.name) << ',' << csv_field(f.expected) << ',' << csv_field(f.observed) << ',' << status << '\n';
  }
  out.report["facts"] = facts;
  out.report["pass"] = r.pass();
  out.code = r.pass() ? exit_ok : exit_failed_check;
  out.csv = csv.str();
  return out;
}

/// Points of M for a simple eigenvalue, as "edge@offset" joined by ';'.
std::string extrema_text(const MetricGraph& g, const EigenFunction& f) {
  std::string s;
  for (const auto& p : extrema_single(g, f).global) s += (s.empty() ? "" : ";") + std::string(to_string(p.kind)) + ":" + describe_point(g, p.location);
  return s;
}

Output cmd_sweep(RunConfig& c) {
  auto g = resolve_graph(c);
  if (c.edges.empty()) fail(ErrorCode::BadParameter, "sweep needs --edge");
  if (c.ladder.empty()) fail(ErrorCode::BadParameter, "sweep needs --ladder");
  if (c.index < 2) fail(ErrorCode::BadParameter, "--index must be >= 2");
  std::vector<EdgeIndex> swept;
  for (const auto& id : c.edges) {
    auto e = g.graph().find_edge(id);
    if (!e) fail(ErrorCode::BadParameter, "no edge '" + id + "'");
    swept.push_back(*e);
  }
  const bool to_zero = c.ladder.back() == 0.0;
  std::vector<double> positive(c.ladder.begin(), c.ladder.end() - (to_zero ? 1 : 0));
  for (double l : positive) {
    if (!(l > 0.0)) fail(ErrorCode::BadParameter, "ladder lengths must be positive (only the last may be 0)");
  }
  auto member = [&](double l) {
    std::vector<double> lengths;
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) lengths.push_back(g.length(e));
    for (EdgeIndex e : swept) lengths[e] = l;
    return with_lengths(g, lengths);
  };
  struct Row {
    double length, mu, gap;
    std::string hotspots;
  };
  auto solve_row = [&](const MetricGraph& h, double l) {
    auto pairs = secular_eigenpairs(h, c.index + 1);
    const EigenPair* tracked = nullptr;
    for (const auto& p : pairs) {
      if (c.index - 1 >= p.first_index && c.index - 1 < p.first_index + p.multiplicity) tracked = &p;
    }
    if (!tracked) fail(ErrorCode::ScanExhausted, "eigenvalue " + std::to_string(c.index) + " not found");
    if (tracked->multiplicity != 1) {
      fail(ErrorCode::MultiplicityChange, "mu_" + std::to_string(c.index) + " = " + fmt(tracked->mu) + " has multiplicity " +
                                              std::to_string(tracked->multiplicity) + " at length " + fmt(l));
    }
    double next = tracked + 1 < pairs.data() + pairs.size() ? (tracked + 1)->mu : tracked->mu;
    return Row{l, tracked->mu, next - tracked->mu, extrema_text(h, tracked->basis.front())};
  };
  std::vector<Row> rows;
  for (double l : positive) rows.push_back(solve_row(member(l), l));
  std::vector<LimitRow> limit_rows;
  if (to_zero) {
    LimitFamily fam{g.name(), g, {}};
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) fam.limit_lengths.push_back(g.length(e));
    for (EdgeIndex e : swept) fam.limit_lengths[e] = 0.0;
    auto limit = contract(fam).limit;
    rows.push_back(solve_row(limit, 0.0));
    limit_rows = limit_compare(fam, positive, c.index);
  }
  Output out;
  out.report = begin_report(c, g);
  Json table = Json::array();
  std::ostringstream csv;
  csv << "length,mu,gap,hotspots" << (to_zero ? ",eig_err,supnorm_err" : "") << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    Json row{{"length", r.length}, {"mu", r.mu}, {"gap", r.gap}, {"hotspots", r.hotspots}};
    csv << fmt(r.length) << ',' << fmt(r.mu) << ',' << fmt(r.gap) << ',' << csv_field(r.hotspots);
    if (to_zero) {
      if (i < limit_rows.size()) {
        row["eig_err"] = limit_rows[i].eig_err;
        row["supnorm_err"] = limit_rows[i].supnorm_err;
        csv << ',' << fmt(limit_rows[i].eig_err) << ',' << fmt(limit_rows[i].supnorm_err);
      } else {
        csv << ",0,0";
      }
    }
    csv << '\n';
    table.push_back(row);
  }
  out.report["rows"] = table;
  out.csv = csv.str();
  return out;
}

std::string cmd_plot(RunConfig& c) {
  auto g = resolve_graph(c);
  if (c.index < 2) fail(ErrorCode::BadParameter, "--index must be >= 2 (index 1 is the constant function)");
  auto pair = detail::pair_with_index(g, c.index);
  const EigenFunction& f = pair.basis.front();
  HotspotSet marks = c.index == 2 ? hotspot_sets(g, pair, {.directions = c.directions}).global : extrema_set(g, f);
  std::ostringstream title;
  title << g.name() << ": mu_" << c.index << " = " << fmt(pair.mu);
  if (pair.multiplicity > 1) title << " (multiplicity " << pair.multiplicity << ", first basis function)";
  return plot_svg(g, f, marks, {c.seed, title.str()});
}

// ---------------------------------------------------------------------------

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> parse_ladder(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s, ':')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorCode::BadParameter, "ladder entry '" + item + "' is not a number");
    }
  }
  return out;
}

/// "--eps 0.05 --m=20" style extras of the reproduce command as parameters.
void merge_extras(Params& params, const std::vector<std::string>& extras) {
  for (std::size_t i = 0; i < extras.size(); ++i) {
    std::string key = extras[i];
    if (key.rfind("--", 0) != 0) fail(ErrorCode::BadParameter, "unexpected argument '" + key + "'");
    key = key.substr(2);
    auto eq = key.find('=');
    if (eq != std::string::npos) {
      params.set(key.substr(0, eq), key.substr(eq + 1));
    } else if (i + 1 < extras.size()) {
      params.set(key, extras[++i]);
    } else {
      fail(ErrorCode::BadParameter, "parameter --" + key + " needs a value");
    }
  }
}

int run(RunConfig& c, const std::string& out_path) {
  std::string text;
  int code = exit_ok;
  if (c.command == "plot") {
    text = cmd_plot(c);
  } else {
    Output out;
    if (c.command == "solve") out = cmd_solve(c);
    else if (c.command == "hotspots") out = cmd_hotspots(c);
    else if (c.command == "verify") out = cmd_verify(c);
    else if (c.command == "reproduce") out = cmd_reproduce(c);
    else if (c.command == "sweep") out = cmd_sweep(c);
    else fail(ErrorCode::BadParameter, "unknown command '" + c.command + "'");
    text = render(c, out);
    code = out.code;
  }
  if (out_path.empty()) {
    std::cout << text << std::flush;
  } else {
    write_atomic(out_path, text);
  }
  return code;
}

int main_impl(int argc, char** argv) {
  CLI::App app{"Eigenvalues, eigenfunctions and hot spots of metric graphs"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(0, 1);
  RunConfig c;
  std::string out_path, replay, params_text, checks_text, edges_text, ladder_text;
  std::vector<std::string> param_items;
  app.add_option("--replay", replay, "Rerun the configuration embedded in a report");
  app.add_option("--out", out_path, "Output file (written atomically); default stdout");

  auto graph_options = [&](CLI::App* sub) {
    sub->add_option("graph,--graph", c.graph_file, "Graph description file");
    sub->add_option("--example", c.example, "Catalog example id");
    sub->add_option("--param", param_items, "Example parameter key=value (repeatable)");
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Output file (written atomically); default stdout");
    sub->add_option("--format", c.format, "report or csv")->check(CLI::IsMember({"report", "csv"}));
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--directions", c.directions, "Eigenspace directions for hot-spot sampling (0: default budget)");
  };

  auto* solve = app.add_subcommand("solve", "Eigenvalues and eigenfunctions");
  graph_options(solve);
  common(solve);
  solve->add_option("--k", c.k, "Number of eigenvalues");
  solve->add_option("--backend", c.backend, "secular or fem")->check(CLI::IsMember({"secular", "fem"}));
  solve->add_option("--h", c.h, "FEM mesh size");

  auto* hot = app.add_subcommand("hotspots", "Hot-spot sets of the second eigenvalue");
  graph_options(hot);
  common(hot);
  hot->add_option("--backend", c.backend, "secular");

  auto* verify = app.add_subcommand("verify", "Run structural checks");
  graph_options(verify);
  common(verify);
  verify->add_option("--checks", checks_text, "Comma list of location,no-disconnect,tree-boundary,star-diameter");

  auto* repro = app.add_subcommand("reproduce", "Compare a catalog example against its expected facts");
  repro->add_option("id,--example", c.example, "Example id");
  repro->add_option("--param", param_items, "Example parameter key=value (repeatable)");
  common(repro);
  repro->allow_extras();

  auto* sweep = app.add_subcommand("sweep", "Track an eigenvalue along a ladder of edge lengths");
  graph_options(sweep);
  common(sweep);
  sweep->add_option("--edge", edges_text, "Comma list of edge ids set to each ladder length");
  sweep->add_option("--ladder", ladder_text, "Colon list of lengths; a final 0 adds limit comparison columns");
  sweep->add_option("--index", c.index, "Tracked eigenvalue index (2 = mu_2)");

  auto* plot = app.add_subcommand("plot", "SVG figure of an eigenfunction");
  graph_options(plot);
  plot->add_option("--out", out_path, "Output file (written atomically); default stdout");
  plot->add_option("--seed", c.seed, "Layout seed");
  plot->add_option("--index", c.index, "Eigenvalue index (2 = mu_2)");
  plot->add_option("--directions", c.directions, "Eigenspace directions for hot-spot sampling (0: default budget)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_input;
  }

  if (!replay.empty()) {
    if (!app.get_subcommands().empty()) fail(ErrorCode::BadParameter, "--replay takes no command");
    std::ifstream in(replay);
    if (!in) fail(ErrorCode::BadParameter, "cannot open report '" + replay + "'");
    Json report;
    try {
      in >> report;
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::BadParameter, "report '" + replay + "' is not JSON: " + e.what());
    }
    if (!report.contains("config")) fail(ErrorCode::BadParameter, "report '" + replay + "' has no config");
    if (report.value("tool_version", "") != tool_version) {
      fail(ErrorCode::BadParameter, "report was written by tool version " + report.value("tool_version", "?"));
    }
    RunConfig rc = config_from_json(report["config"]);
    setenv("QGHOT_TOL", fmt(rc.tau_eig).c_str(), 1);
    return run(rc, out_path);
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return exit_input;
  }
  c.command = app.get_subcommands().front()->get_name();
  for (const auto& item : param_items) c.params.merge(item);
  if (c.command == "reproduce") merge_extras(c.params, repro->remaining());
  if (!checks_text.empty()) c.checks = split_list(checks_text, ',');
  if (!edges_text.empty()) c.edges = split_list(edges_text, ',');
  if (!ladder_text.empty()) c.ladder = parse_ladder(ladder_text);
  return run(c, out_path);
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return main_impl(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_numerical(e.code()) ? exit_numerical : exit_input;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_numerical;
  }
}
