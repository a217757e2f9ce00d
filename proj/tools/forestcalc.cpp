#include "forestcalc/errors.hpp"
#include "forestcalc/fermion.hpp"
#include "forestcalc/forest_formula.hpp"
#include "forestcalc/gaussian_cluster.hpp"
#include "forestcalc/json_io.hpp"
#include "forestcalc/limits.hpp"
#include "forestcalc/mayer.hpp"
#include "forestcalc/parallel.hpp"
#include "forestcalc/propagator.hpp"
#include "forestcalc/suite.hpp"
#include "forestcalc/weakening.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace forestcalc;

namespace {

// Accumulates the result fields and the per-check verdicts of one run.
struct Run {
  json fields = json::object();
  json checks = json::array();
  bool ok = true;

  void check(const std::string& name, bool pass, json residuals = json::array()) {
    checks.push_back({{"name", name}, {"status", pass ? "pass" : "fail"}, {"residuals", std::move(residuals)}});
    ok = ok && pass;
  }
};

std::string config_hash(int argc, char** argv) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0;
    h *= 1099511628211ull;
  };
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--out" || a == "--jobs") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0 || a.rfind("--jobs=", 0) == 0) continue;
    mix(a);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<Link> parse_links(const std::string& text, int n) {
  std::vector<Link> links;
  for (const auto& item : split(text, ',')) {
    auto ends = split(item, '-');
    if (ends.size() != 2) throw ValidationError("links are written like 1-2,2-3");
    int a = std::stoi(ends[0]) - 1, b = std::stoi(ends[1]) - 1;
    if (a < 0 || b < 0 || a >= n || b >= n) throw ValidationError("link endpoint out of range: " + item);
    links.push_back(make_link(a, b));
  }
  return links;
}

json certificate_json(const PsdCertificate& c) {
  json out{{"positive_semidefinite", c.positive_semidefinite}};
  json minors = json::array();
  for (const auto& m : c.minors) minors.push_back(to_json(m));
  out["leading_minors_of_pivots"] = minors;
  if (!c.positive_semidefinite) {
    json w = json::array();
    for (auto i : c.witness) w.push_back(i + 1);
    out["witness"] = w;
    out["witness_minor"] = to_json(c.witness_minor);
  }
  return out;
}

json polymer_json(const Block& y) {
  json out = json::array();
  for (int b : y) out.push_back(b + 1);
  return out;
}

json residuals_json(const std::vector<Rational>& residuals) {
  json out = json::array();
  for (const auto& r : residuals) out.push_back(to_json(r));
  return out;
}

bool all_zero(const std::vector<Rational>& v) {
  for (const auto& r : v)
    if (!is_zero(r)) return false;
  return true;
}

void run_trees(Run& run, int n, bool count_only) {
  auto trees = enumerate_trees(n);
  run.fields["n"] = n;
  run.fields["count"] = trees.size();
  if (count_only) return;
  json list = json::array();
  for (const auto& t : trees) list.push_back(to_json(t.links()));
  run.fields["trees"] = list;
}

void run_weaken(Run& run, int n, const std::string& links_text, const std::string& weights_text,
                const std::string& rule, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Forest forest = Forest::empty(std::max(n, 1));
  if (links_text.empty()) {
    auto all = enumerate_forests(n);
    forest = all[rng() % all.size()];
  } else {
    forest = Forest::from_links(n, parse_links(links_text, n));
  }
  std::vector<Rational> weights;
  if (weights_text.empty()) {
    weights = WeightAssignment::random(forest, rng, 12).values();
  } else {
    for (const auto& w : split(weights_text, ',')) weights.push_back(parse_rational(w));
  }
  WeightAssignment w(forest, weights);
  run.fields["n"] = n;
  run.fields["links"] = to_json(forest.links());
  json wj = json::array();
  for (const auto& x : weights) wj.push_back(to_json(x));
  run.fields["weights"] = wj;

  for (auto r : {WeakeningRule::symmetric, WeakeningRule::rooted}) {
    if (rule != "both" && rule != to_string(r)) continue;
    auto m = weakening_matrix(forest, w, r).values;
    auto cert = is_positive_semidefinite(m);
    run.fields[to_string(r)] = {{"matrix", to_json(m)}, {"psd", certificate_json(cert)}};
    if (r == WeakeningRule::symmetric) {
      run.check("symmetric weakening PSD", cert.positive_semidefinite);
      auto terms = convex_block_decomposition(forest, w);
      json tj = json::array();
      for (const auto& t : terms) {
        json blocks = json::array();
        for (const auto& b : t.blocks) blocks.push_back(polymer_json(b));
        tj.push_back({{"weight", to_json(t.weight)}, {"blocks", blocks}});
      }
      run.fields["decomposition"] = tj;
      run.check("block decomposition reconstructs", reconstruct(n, terms) == m);
    }
  }
}

void run_forest_formula(Run& run, int n, int degree, int trials, std::uint64_t seed, const std::string& rules_text) {
  std::vector<FormulaRule> rules;
  for (const auto& r : split(rules_text, ',')) {
    if (r == "symmetric") rules.push_back(FormulaRule::symmetric);
    else if (r == "rooted") rules.push_back(FormulaRule::rooted);
    else if (r == "ordered") rules.push_back(FormulaRule::ordered);
    else throw ValidationError("unknown rule '" + r + "'");
  }
  auto rep = verify_forest_formula(n, degree, trials, seed, rules);
  run.fields["n"] = n;
  run.fields["degree"] = degree;
  run.fields["seed"] = seed;
  json tj = json::array();
  json residuals = json::array();
  for (const auto& t : rep.trials) {
    json sums = json::object();
    for (const auto& [rule, value] : t.sums) {
      sums[to_string(rule)] = to_json(value);
      if (value != t.expected) residuals.push_back(to_json(Rational(value - t.expected)));
    }
    tj.push_back({{"H", t.h}, {"H_at_one", to_json(t.expected)}, {"sums", sums}, {"ok", t.ok}});
  }
  run.fields["trials"] = tj;
  run.fields["failures"] = rep.failures;
  run.check("forest formula", rep.failures == 0, residuals);
}

void run_cluster(Run& run, const std::string& model_path, std::optional<int> order, bool verify, bool pressure,
                 std::optional<std::string> decay, int decay_size) {
  auto model = box_model_from_json(read_json_file(model_path), order);
  auto acts = cluster_expansion(model);
  run.fields["boxes"] = model.boxes();
  run.fields["order"] = model.order;
  run.fields["partition_series"] = to_json(partition_series(model));
  json aj = json::array();
  for (const auto& [y, a] : acts.activities) aj.push_back({{"polymer", polymer_json(y)}, {"activity", to_json(a)}});
  run.fields["activities"] = aj;
  if (verify) {
    auto rep = factorization_residuals(model, acts);
    run.fields["polymer_sum"] = to_json(rep.polymer_sum);
    run.fields["partitions"] = rep.partitions;
    run.check("polymer factorization", rep.ok(), residuals_json(rep.residuals));
  }
  if (pressure) {
    auto p = finite_volume_pressure(model);
    run.fields["pressure"] = {{"single_box", to_json(p.single_box)},
                              {"mayer", to_json(p.mayer)},
                              {"total", to_json(p.total)},
                              {"direct", to_json(p.direct)}};
    std::vector<Rational> diff;
    for (int k = 0; k <= model.order; ++k) diff.push_back(p.total[k] - p.direct[k]);
    run.check("pressure from activities", p.ok(), residuals_json(diff));
  }
  if (decay) {
    json rows = json::array();
    for (const auto& r : activity_decay_table(parse_rational(*decay), decay_size))
      rows.push_back({{"size", r.size}, {"coefficient", to_json(r.coefficient)}, {"magnitude", r.magnitude}, {"root", r.root}});
    run.fields["activity_decay"] = rows;
  }
}

void run_mayer(Run& run, const std::string& lattice, int polymer_max, const std::string& activity, int grade,
               bool verify) {
  if (lattice.rfind("1d:", 0) != 0) throw ValidationError("lattice must be written 1d:<boxes>");
  int boxes = std::stoi(lattice.substr(3));
  auto gas = lattice_1d(boxes, polymer_max, parse_rational(activity));
  auto rep = mayer_residuals(gas, grade);
  run.fields["boxes"] = boxes;
  run.fields["polymers"] = gas.polymers.size();
  run.fields["grade"] = grade;
  run.fields["log_series"] = to_json(rep.log_series);
  run.fields["overlap_patterns"] = rep.patterns;
  if (verify) {
    run.fields["reduced_partition"] = to_json(rep.partition);
    run.fields["exp_log_series"] = to_json(rep.exp_log);
    run.check("Mayer identity", rep.ok(), residuals_json(rep.residuals));
  }
}

void run_fermion(Run& run, int sites, int colors, int order, const std::string& propagator_path, bool verify,
                 bool sign_audit_flag, bool negative, const std::string& radius_colors) {
  GrassmannModel model;
  if (propagator_path.empty()) {
    std::vector<Rational> profile(sites, Rational(0));
    profile[0] = 1;
    if (sites > 1) profile[1] = profile[sites - 1] = Rational(1, 2);
    model.propagator = ring_propagator(profile);
  } else {
    auto p = propagator_from_json(read_json_file(propagator_path));
    if (static_cast<int>(p.covariance.rows()) != sites) throw ValidationError("propagator size differs from --sites");
    model.propagator = p.covariance;
    model.factorization = p.factorization;
  }
  model.colors = colors;
  model.order = order;
  model.negative_exponent = negative;
  model.validate();

  auto tree = pressure_series_tree(model);
  run.fields["sites"] = sites;
  run.fields["colors"] = colors;
  run.fields["exponent_sign"] = negative ? "-" : "+";
  run.fields["propagator"] = to_json(model.propagator);
  run.fields["pressure_tree"] = to_json(tree);
  if (verify) {
    auto brute = pressure_series_bruteforce(model);
    run.fields["pressure_bruteforce"] = to_json(brute);
    std::vector<Rational> diff;
    for (int k = 0; k <= order; ++k) diff.push_back(tree[k] - brute[k]);
    run.check("tree expansion equals brute force", all_zero(diff), residuals_json(diff));
  }
  if (sign_audit_flag) {
    json audit = json::array();
    for (int n = 1; n <= order; ++n)
      for (const auto& row : sign_audit(n))
        audit.push_back({{"order", n},
                         {"tree", to_json(row.tree)},
                         {"decorations", row.decorations},
                         {"positive", row.positive},
                         {"negative", row.negative}});
    run.fields["sign_audit"] = audit;
  }
  if (!radius_colors.empty()) {
    std::vector<GrassmannModel> family;
    for (const auto& c : split(radius_colors, ',')) {
      GrassmannModel m = model;
      m.colors = std::stoi(c);
      family.push_back(m);
    }
    auto probe = radius_probe(family);
    json rows = json::array();
    for (const auto& r : probe.rows)
      rows.push_back({{"colors", r.colors},
                      {"order", r.order},
                      {"coefficient", to_json(r.coefficient)},
                      {"ratio", r.ratio},
                      {"a_priori", r.bound}});
    run.fields["radius_probe"] = {{"rows", rows},
                                  {"fitted_constant", probe.fitted_constant},
                                  {"envelope", probe.envelope},
                                  {"uniform_bound", probe.uniform_bound}};
    run.check("coefficients within N-independent bounds", probe.within_bounds);
  }
}

void run_propagator(Run& run, SliceSpec spec, bool fit, double step, double extent, const std::string& centers_path,
                    int digits) {
  spec.validate();
  auto radii = slice_grid(spec, step, extent);
  json values = json::array();
  for (double r : radii) values.push_back({{"r", r}, {"kernel", slice_kernel(spec, r)}});
  run.fields["spec"] = {{"dimension", spec.dimension}, {"ratio", spec.ratio}, {"slice", spec.slice},
                        {"mass", spec.mass},           {"window", spec.window}};
  run.fields["kernel"] = values;
  if (fit) {
    auto f = decay_bound_fit(spec, radii);
    run.fields["decay_fit"] = {{"K", f.k}, {"binding_radius", f.binding_radius}};
  }
  if (!centers_path.empty()) {
    auto cj = read_json_file(centers_path);
    std::vector<std::vector<double>> centers = cj.get<std::vector<std::vector<double>>>();
    auto cov = covariance_matrix_from_kernel(spec, centers, digits);
    run.fields["covariance"] = {{"boxes", centers.size()},
                                {"covariance", to_json(cov.matrix)},
                                {"shift", to_json(cov.shift)}};
    run.check("kernel covariance PSD", cov.certificate.positive_semidefinite);
  }
}

void run_suite(Run& run, bool quick, std::uint64_t seed) {
  json rows = json::array();
  run_acceptance(SuiteOptions{quick, seed}, [&](const CriterionResult& r) {
    std::fprintf(stderr, "%s\n", format_line(r).c_str());
    rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    run.check("criterion " + std::to_string(r.id) + " " + r.name, r.pass);
  });
  run.fields["criteria"] = rows;
  run.fields["quick"] = quick;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"forestcalc: exact forest interpolation, cluster and Mayer expansions, fermionic trees"};
  app.require_subcommand(1);
  std::string out_path;
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  app.add_option("--out", out_path, "write the JSON report here instead of stdout");
  app.add_option("--seed", seed, "seed for randomized sweeps");
  app.add_option("--jobs", jobs, "worker threads (0 = all cores)");

  std::function<void(Run&)> action;

  auto* trees = app.add_subcommand("trees", "enumerate labeled trees");
  int trees_n = 0;
  bool count_only = false;
  trees->add_option("--n", trees_n, "vertex count")->required();
  trees->add_flag("--count-only", count_only);
  trees->callback([&] { action = [&](Run& r) { run_trees(r, trees_n, count_only); }; });

  auto* weaken = app.add_subcommand("weaken", "weakening matrices, PSD certificates and block decompositions");
  int weaken_n = 0;
  std::string links, weights, rule = "both";
  weaken->add_option("--n", weaken_n, "vertex count")->required();
  weaken->add_option("--links", links, "forest links, e.g. 1-2,2-3 (random forest when omitted)");
  weaken->add_option("--weights", weights, "one rational per link, e.g. 1/2,1/4 (random when omitted)");
  weaken->add_option("--rule", rule)->check(CLI::IsMember({"symmetric", "rooted", "both"}));
  weaken->callback([&] { action = [&](Run& r) { run_weaken(r, weaken_n, links, weights, rule, seed); }; });

  auto* verify = app.add_subcommand("verify", "identity checks");
  verify->require_subcommand(1);
  auto* ff = verify->add_subcommand("forest-formula", "forest sum against H(1) for random polynomials");
  int ff_n = 3, ff_degree = 2, ff_trials = 10;
  std::string ff_rules = "symmetric,rooted,ordered";
  ff->add_option("--n", ff_n)->required();
  ff->add_option("--degree", ff_degree);
  ff->add_option("--trials", ff_trials);
  ff->add_option("--rules", ff_rules);
  ff->callback([&] { action = [&](Run& r) { run_forest_formula(r, ff_n, ff_degree, ff_trials, seed, ff_rules); }; });

  auto* cluster = app.add_subcommand("cluster", "Gaussian box model: activities and factorization");
  std::string model_path;
  std::optional<int> cluster_order;
  bool cluster_verify = false, cluster_pressure = false;
  std::optional<std::string> decay;
  int decay_size = 3;
  cluster->add_option("--model", model_path, "model JSON")->required();
  cluster->add_option("--order", cluster_order);
  cluster->add_flag("--verify", cluster_verify);
  cluster->add_flag("--pressure", cluster_pressure, "assemble the pressure from activities and the Mayer series");
  cluster->add_option("--decay", decay, "chain ratio r for an activity decay table");
  cluster->add_option("--decay-size", decay_size);
  cluster->callback([&] {
    action = [&](Run& r) {
      run_cluster(r, model_path, cluster_order, cluster_verify, cluster_pressure, decay, decay_size);
    };
  });

  auto* mayer = app.add_subcommand("mayer", "hardcore polymer gas Mayer series");
  std::string lattice, activity = "1";
  int polymer_max = 2, grade = 3;
  bool mayer_verify = false;
  mayer->add_option("--lattice", lattice, "1d:<boxes>")->required();
  mayer->add_option("--polymer-max", polymer_max);
  mayer->add_option("--activity", activity);
  mayer->add_option("--grade", grade);
  mayer->add_flag("--verify", mayer_verify);
  mayer->callback([&] { action = [&](Run& r) { run_mayer(r, lattice, polymer_max, activity, grade, mayer_verify); }; });

  auto* fermion = app.add_subcommand("fermion", "Grassmann model: tree expansion of the pressure");
  int sites = 1, colors = 1, forder = 2;
  std::string propagator_path, radius_colors;
  bool fverify = false, audit = false, negative = false;
  fermion->add_option("--sites", sites)->required();
  fermion->add_option("--colors", colors)->required();
  fermion->add_option("--order", forder)->required();
  fermion->add_option("--propagator", propagator_path, "propagator JSON (nearest-neighbour ring when omitted)");
  fermion->add_flag("--verify", fverify);
  fermion->add_flag("--sign-audit", audit);
  fermion->add_flag("--negative-exponent", negative, "weight e^{-S} instead of e^{+S}");
  fermion->add_option("--radius-probe", radius_colors, "comma separated color counts");
  fermion->callback([&] {
    action = [&](Run& r) {
      run_fermion(r, sites, colors, forder, propagator_path, fverify, audit, negative, radius_colors);
    };
  });

  auto* prop = app.add_subcommand("propagator", "slice kernels and decay fits");
  SliceSpec spec;
  bool fit = false;
  double step = 0.5, extent = 10;
  std::string centers_path;
  int digits = 12;
  prop->add_option("--dim", spec.dimension)->required();
  prop->add_option("--ratio", spec.ratio)->required();
  prop->add_option("--slice", spec.slice)->required();
  prop->add_option("--mass", spec.mass);
  prop->add_flag("--window", spec.window, "use the single window [1/M, 1]");
  prop->add_flag("--fit-decay", fit);
  prop->add_option("--step", step, "grid step in units of M^-j");
  prop->add_option("--extent", extent, "grid extent in units of M^-j");
  prop->add_option("--emit-covariance", centers_path, "JSON list of centers");
  prop->add_option("--digits", digits);
  prop->callback([&] { action = [&](Run& r) { run_propagator(r, spec, fit, step, extent, centers_path, digits); }; });

  auto* suite = app.add_subcommand("suite", "acceptance battery");
  bool quick = false;
  suite->add_flag("--quick", quick);
  suite->callback([&] { action = [&](Run& r) { run_suite(r, quick, seed); }; });

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();
  ff->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  set_jobs(jobs);
  Run run;
  auto start = std::chrono::steady_clock::now();
  try {
    action(run);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const SizeLimitError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "failure: %s\n", e.what());
    return 1;
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json report = run.fields;
  json echo = json::array();
  for (int i = 1; i < argc; ++i) echo.push_back(argv[i]);
  report["command"] = echo;
  report["config_hash"] = config_hash(argc, argv);
  report["checks"] = run.checks;
  report["status"] = run.ok ? "pass" : "fail";
  report["timings"] = {{"seconds", seconds}};
  report["artifacts"] = out_path.empty() ? json::array() : json::array({out_path});

  std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
      return 2;
    }
    out << text;
  }
  return run.ok ? 0 : 1;
}
