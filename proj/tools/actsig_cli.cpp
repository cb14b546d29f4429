// actsig: command-line front end for the activation-signature library.
//
// Exit codes: 0 success, 2 argument / registry / parse error, 3 a checked
// property failed, 4 a numerical procedure did not converge.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "actsig/activation.hpp"
#include "actsig/errors.hpp"
#include "actsig/golden.hpp"
#include "actsig/kernel.hpp"
#include "actsig/lyapunov.hpp"
#include "actsig/montecarlo.hpp"
#include "actsig/propagation.hpp"
#include "actsig/quadrature.hpp"
#include "actsig/report_json.hpp"
#include "actsig/signature.hpp"

namespace {

using nlohmann::json;
using namespace actsig;

constexpr int kExitOk = 0;
constexpr int kExitArgument = 2;
constexpr int kExitProperty = 3;
constexpr int kExitConvergence = 4;

struct GlobalOptions {
  int order = kDefaultOrder;
  std::string format;  // empty: the subcommand's default
  std::string out;     // empty: standard output
  std::uint64_t seed = 42;
};

/// Where a subcommand writes its single output document.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw ArgumentError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string resolve_format(const GlobalOptions& g, const std::string& fallback) {
  const std::string f = g.format.empty() ? fallback : g.format;
  if (f != "json" && f != "csv") throw ArgumentError("--format must be json or csv");
  return f;
}

void emit_json(const GlobalOptions& g, const json& doc) {
  Output out(g.out);
  out.stream() << doc.dump(2) << '\n';
}

GridAxis parse_range(const std::string& text, const std::string& flag) {
  GridAxis axis{};
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &axis.start, &axis.end, &axis.count, &tail) != 3) {
    throw ArgumentError(flag + " expects start:end:count, got '" + text + "'");
  }
  if (axis.count < 1) throw ArgumentError(flag + " needs count >= 1");
  if (axis.count == 1 && axis.start != axis.end) throw ArgumentError(flag + " with count 1 needs start == end");
  return axis;
}

std::vector<double> parse_closed_interval(const std::string& text, const std::string& flag) {
  double lo = 0, hi = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf%c", &lo, &hi, &tail) != 2 || !(hi > lo)) {
    throw ArgumentError(flag + " expects lo:hi with lo < hi, got '" + text + "'");
  }
  return {lo, hi};
}

void require_positive(const std::vector<double>& sigmas) {
  for (double s : sigmas) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ArgumentError("--sigma values must be positive and finite");
  }
}

std::vector<Activation> resolve(const std::vector<std::string>& names) {
  std::vector<Activation> acts;
  for (const std::string& n : names) acts.push_back(builtin(n));
  return acts;
}

std::vector<std::string> tabulated_names() {
  std::vector<std::string> names;
  for (const ReferenceRow& r : reference_table()) {
    if (names.empty() || names.back() != r.name) names.push_back(r.name);
  }
  return names;
}

void write_components_csv(std::ostream& os, const std::vector<ComponentRow>& rows) {
  os << "activation,sigma,m1,g1,g2,m2,eta\n";
  for (const ComponentRow& r : rows) {
    os << r.name << ',' << format_number(r.sigma) << ',' << format_number(r.c.m1) << ',' << format_number(r.c.g1)
       << ',' << format_number(r.c.g2) << ',' << format_number(r.c.m2) << ',' << format_number(r.c.eta) << '\n';
  }
}

// ---------------------------------------------------------------- signature

struct SignatureArgs {
  std::vector<std::string> activations;
  std::vector<double> sigmas{0.5, 1.0, 2.0};
};

int run_signature(const GlobalOptions& g, const SignatureArgs& a) {
  require_positive(a.sigmas);
  const std::string fmt = resolve_format(g, "json");
  const QuadratureRule rule = build_rule(g.order);
  const std::vector<Signature> sigs = signature_batch(resolve(a.activations), a.sigmas, rule);
  if (fmt == "csv") {
    Output out(g.out);
    std::ostream& os = out.stream();
    os << "activation,sigma,m1,g1,g2,m2,eta,alpha_plus,alpha_minus,tv,c_phi,g4,m2_prime\n";
    for (const Signature& s : sigs) {
      os << s.name;
      for (double v : {s.sigma, s.m1, s.g1, s.g2, s.m2, s.eta, s.alpha_plus, s.alpha_minus, s.tv, s.c_phi, s.g4,
                       s.m2_prime}) {
        os << ',' << format_number(v);
      }
      os << '\n';
    }
    return kExitOk;
  }
  if (sigs.size() == 1) {
    emit_json(g, to_json(sigs.front()));
  } else {
    json arr = json::array();
    for (const Signature& s : sigs) arr.push_back(to_json(s));
    emit_json(g, arr);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- table

struct TableArgs {
  std::vector<std::string> activations;
  std::vector<double> sigmas{0.5, 1.0, 2.0};
  bool golden = false;
};

int run_table(const GlobalOptions& g, TableArgs a) {
  require_positive(a.sigmas);
  const std::string fmt = resolve_format(g, "csv");
  if (a.activations.empty()) a.activations = tabulated_names();
  std::sort(a.activations.begin(), a.activations.end());
  std::vector<double> sigmas = a.sigmas;
  std::sort(sigmas.begin(), sigmas.end());
  const QuadratureRule rule = build_rule(g.order);
  const std::vector<ComponentRow> rows = component_table(resolve(a.activations), sigmas, rule);

  ReferenceComparison cmp;
  if (a.golden) cmp = compare_to_reference(rows);
  if (fmt == "csv") {
    Output out(g.out);
    write_components_csv(out.stream(), rows);
  } else {
    json doc;
    doc["order"] = g.order;
    doc["rows"] = json::array();
    for (const ComponentRow& r : rows) doc["rows"].push_back(to_json(r));
    if (a.golden) {
      doc["golden"] = {{"max_abs_deviation", json_number(cmp.max_abs_deviation)},
                       {"tolerance", json_number(cmp.tolerance)},
                       {"cells_compared", cmp.cells_compared},
                       {"cells_within", cmp.cells_within},
                       {"passed", cmp.passed()}};
    }
    emit_json(g, doc);
  }
  if (!a.golden) return kExitOk;
  std::cerr << "golden: max_abs_deviation=" << format_number(cmp.max_abs_deviation) << " cells_within="
            << cmp.cells_within << '/' << cmp.cells_compared << " tolerance=" << format_number(cmp.tolerance);
  if (cmp.cells_compared > 0) {
    std::cerr << " worst=" << cmp.worst.name << "@" << format_number(cmp.worst.sigma) << ":"
              << kComponentNames[cmp.worst.component] << " computed=" << format_number(cmp.worst.computed)
              << " reference=" << format_number(cmp.worst.reference);
  }
  std::cerr << '\n';
  return cmp.passed() ? kExitOk : kExitProperty;
}

// ---------------------------------------------------------------- classify

int run_classify(const GlobalOptions& g, std::vector<std::string> names) {
  const std::string fmt = resolve_format(g, "json");
  if (names.empty()) names = classified_names();
  std::vector<json> records;
  for (const std::string& n : names) {
    const Activation act = builtin(n);
    const Classification c = classify(act);
    records.push_back({{"activation", act.name},
                       {"class", c.label()},
                       {"growth", c.growth},
                       {"sub_label", c.sub_label},
                       {"alpha_plus", json_number(*act.alpha_plus)},
                       {"alpha_minus", json_number(*act.alpha_minus)},
                       {"c_phi", std::string(to_string(act.c_phi))}});
  }
  if (fmt == "csv") {
    Output out(g.out);
    out.stream() << "activation,class,alpha_plus,alpha_minus,c_phi\n";
    for (const json& r : records) {
      out.stream() << r["activation"].get<std::string>() << ",\"" << r["class"].get<std::string>() << "\","
                   << format_number(*builtin(r["activation"].get<std::string>()).alpha_plus) << ','
                   << format_number(*builtin(r["activation"].get<std::string>()).alpha_minus) << ','
                   << r["c_phi"].get<std::string>() << '\n';
    }
    return kExitOk;
  }
  if (records.size() == 1) {
    emit_json(g, records.front());
  } else {
    emit_json(g, json(records));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- mc

struct McArgs {
  std::string activation = "relu";
  double sigma = 1.0;
  std::uint64_t samples = 300000;
  double z_limit = 4.0;
};

int run_mc(const GlobalOptions& g, const McArgs& a) {
  require_positive({a.sigma});
  const std::string fmt = resolve_format(g, "json");
  const Activation act = builtin(a.activation);
  const McComponents mc = mc_components(act, a.sigma, a.samples, g.seed);
  const GaussianComponents ref = gaussian_components(act, a.sigma, build_rule(g.order));
  const std::pair<const char*, std::pair<const EstimateWithError*, double>> parts[] = {
      {"m1", {&mc.m1, ref.m1}}, {"g1", {&mc.g1, ref.g1}},   {"g2", {&mc.g2, ref.g2}},
      {"m2", {&mc.m2, ref.m2}}, {"eta", {&mc.eta, ref.eta}}};
  json records = json::array();
  bool consistent = true;
  for (const auto& [name, p] : parts) {
    records.push_back(mc_record(name, *p.first, p.second));
    consistent = consistent && std::abs(z_score(*p.first, p.second)) < a.z_limit;
  }
  if (fmt == "csv") {
    Output out(g.out);
    out.stream() << "component,value,std_error,samples,seed,quadrature_ref,z_score\n";
    for (const auto& [name, p] : parts) {
      const double z = z_score(*p.first, p.second);
      out.stream() << name << ',' << format_number(p.first->value) << ',' << format_number(p.first->std_error)
                   << ',' << p.first->samples << ',' << p.first->seed << ',' << format_number(p.second) << ','
                   << format_number(z) << '\n';
    }
  } else {
    emit_json(g, {{"activation", act.name}, {"sigma", json_number(a.sigma)}, {"components", records}});
  }
  return consistent ? kExitOk : kExitProperty;
}

// ---------------------------------------------------------------- propagate

struct PropagateArgs {
  std::string activation = "relu";
  double sigma_w = 1.0;
  double sigma_b = 0.0;
  double q0 = 1.0;
  int max_iters = 5000;
};

int run_propagate(const GlobalOptions& g, const PropagateArgs& a) {
  resolve_format(g, "json");
  FixedPointOptions opt;
  opt.q0 = a.q0;
  opt.max_iters = a.max_iters;
  const Activation act = builtin(a.activation);
  const FixedPointReport r = solve_fixed_point(act, a.sigma_w, a.sigma_b, build_rule(g.order), opt);
  json doc = to_json(r);
  doc["activation"] = act.name;
  doc["sigma_w"] = json_number(a.sigma_w);
  doc["sigma_b"] = json_number(a.sigma_b);
  emit_json(g, doc);
  if (!r.converged && !r.diverged) {
    std::cerr << "propagate: no fixed point within " << a.max_iters << " iterations\n";
    return kExitConvergence;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- criticality

struct CriticalityArgs {
  std::string activation = "relu";
  std::string sigma_w = "1:2:41";
  std::string sigma_b = "0:1:11";
};

int run_criticality(const GlobalOptions& g, const CriticalityArgs& a) {
  const std::string fmt = resolve_format(g, "csv");
  const GridAxis sw = parse_range(a.sigma_w, "--sigma-w");
  const GridAxis sb = parse_range(a.sigma_b, "--sigma-b");
  const CriticalityGrid grid = criticality_scan(builtin(a.activation), sw, sb, build_rule(g.order));
  if (fmt == "csv") {
    Output out(g.out);
    write_grid_csv(out.stream(), grid);
    return kExitOk;
  }
  json cells = json::array();
  for (const CriticalityCell& c : grid.cells) {
    cells.push_back({{"sigma_w", json_number(c.sigma_w)},
                     {"sigma_b", json_number(c.sigma_b)},
                     {"q_star", json_number(c.q_star)},
                     {"f_prime", json_number(c.f_prime)},
                     {"variance_stable", c.variance_stable},
                     {"perturbation_stable", c.perturbation_stable},
                     {"converged", c.converged},
                     {"boundary", c.boundary}});
  }
  emit_json(g, {{"activation", a.activation}, {"cells", cells}});
  return kExitOk;
}

// ---------------------------------------------------------------- lyapunov

struct LyapunovArgs {
  std::string activation = "tanh";
  double a = 0.5;
  double b = 0.0;
  int probes = 64;
  std::string range = "-5:5";
  std::string constant = "descent";
  double lambda = 0.0;  // > 0 also runs the F-based check
  double sigma_ref = 1.0;
};

int run_lyapunov(const GlobalOptions& g, const LyapunovArgs& a) {
  resolve_format(g, "json");
  if (a.constant != "descent" && a.constant != "conservative") {
    throw ArgumentError("--constant must be descent or conservative");
  }
  const std::vector<double> span = parse_closed_interval(a.range, "--range");
  const std::vector<double> probes = chebyshev_probes(span[0], span[1], a.probes);
  const Activation act = builtin(a.activation);
  const ContractionCertificate cert = certify_contraction(act, a.a, a.b, a.sigma_ref, build_rule(g.order));
  json doc;
  bool ok = cert.is_contraction;
  if (cert.is_contraction) {
    const std::optional<double> c =
        a.constant == "conservative" ? std::optional<double>(cert.conservative_constant) : std::nullopt;
    const DescentReport d = verify_descent(cert, act, probes, c);
    doc = to_json(cert, d);
    doc["constant_used"] = json_number(c.value_or(cert.descent_constant));
    ok = d.passed;
  } else {
    doc = to_json(cert, DescentReport{});
    doc["passed"] = false;
  }
  doc["activation"] = act.name;
  if (a.lambda > 0.0) {
    const DescentReport f = f_lyapunov_descent(act, a.a, a.lambda, probes);
    doc["f_based"] = to_json(f);
    doc["f_based"]["lambda"] = json_number(a.lambda);
    ok = ok && f.passed;
  }
  emit_json(g, doc);
  return ok ? kExitOk : kExitProperty;
}

// ---------------------------------------------------------------- kernel-bound

struct KernelArgs {
  std::string activation = "relu";
  int dim = 8;
  int trials = 50;
  std::uint64_t samples = 200000;
};

int run_kernel(const GlobalOptions& g, const KernelArgs& a) {
  resolve_format(g, "json");
  const Activation act = builtin(a.activation);
  const StressResult r = bound_stress(act, a.dim, a.trials, a.samples, g.seed, build_rule(g.order));
  json reports = json::array();
  for (const KernelBoundReport& k : r.reports) reports.push_back(to_json(k));
  emit_json(g, {{"activation", act.name},
                {"dim", a.dim},
                {"trials", a.trials},
                {"samples", a.samples},
                {"seed", g.seed},
                {"failures", r.failures},
                {"reports", reports}});
  return r.failures == 0 ? kExitOk : kExitProperty;
}

// ---------------------------------------------------------------- bias-drift

struct BiasArgs {
  std::vector<std::string> activations{"relu"};
  std::vector<double> sigmas{0.5, 1.0, 2.0};
};

int run_bias(const GlobalOptions& g, const BiasArgs& a) {
  require_positive(a.sigmas);
  resolve_format(g, "json");
  const QuadratureRule rule = build_rule(g.order);
  json records = json::array();
  bool all = true;
  for (const std::string& n : a.activations) {
    const Activation act = builtin(n);
    for (double s : a.sigmas) {
      const BiasDriftReport r = bias_drift_check(act, s, rule);
      json rec = to_json(r);
      rec["activation"] = act.name;
      rec["sigma"] = json_number(s);
      records.push_back(rec);
      all = all && r.holds;
    }
  }
  emit_json(g, records);
  return all ? kExitOk : kExitProperty;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integral signatures of activation functions under Gaussian inputs"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--order", g.order, "Gauss-Hermite order")->check(CLI::Range(2, kMaxOrder));
  app.add_option("--format", g.format, "Output format: json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out, "Output file (default: standard output)");
  app.add_option("--seed", g.seed, "Monte-Carlo seed");

  SignatureArgs sig;
  auto* c_sig = app.add_subcommand("signature", "Full signature per (activation, sigma)");
  c_sig->add_option("--activation", sig.activations, "Activation name (repeatable)")->required()->delimiter(',');
  c_sig->add_option("--sigma", sig.sigmas, "Input scales")->delimiter(',');

  TableArgs table;
  auto* c_table = app.add_subcommand("table", "Gaussian component table (CSV by default)");
  c_table->add_option("--activations", table.activations, "Activations (default: the tabulated seven)")
      ->delimiter(',');
  c_table->add_option("--sigmas", table.sigmas, "Input scales")->delimiter(',');
  c_table->add_flag("--golden", table.golden, "Compare with the embedded reference table");

  std::vector<std::string> classify_names;
  auto* c_cls = app.add_subcommand("classify", "Slope taxonomy class");
  c_cls->add_option("--activation", classify_names, "Activation name (default: all classified)")->delimiter(',');

  McArgs mc;
  auto* c_mc = app.add_subcommand("mc", "Monte-Carlo components versus quadrature");
  c_mc->add_option("--activation", mc.activation);
  c_mc->add_option("--sigma", mc.sigma);
  c_mc->add_option("--samples", mc.samples)->check(CLI::PositiveNumber);
  c_mc->add_option("--z-limit", mc.z_limit, "Largest accepted |z| score");

  PropagateArgs prop;
  auto* c_prop = app.add_subcommand("propagate", "Mean-field variance fixed point");
  c_prop->add_option("--activation", prop.activation);
  c_prop->add_option("--sigma-w", prop.sigma_w);
  c_prop->add_option("--sigma-b", prop.sigma_b);
  c_prop->add_option("--q0", prop.q0);
  c_prop->add_option("--max-iters", prop.max_iters);

  CriticalityArgs crit;
  auto* c_crit = app.add_subcommand("criticality", "Stability grid over (sigma_w, sigma_b) (CSV by default)");
  c_crit->add_option("--activation", crit.activation);
  c_crit->add_option("--sigma-w", crit.sigma_w, "start:end:count");
  c_crit->add_option("--sigma-b", crit.sigma_b, "start:end:count");

  LyapunovArgs lyap;
  auto* c_lyap = app.add_subcommand("lyapunov", "Contraction certificate and descent check for phi(a x + b)");
  c_lyap->add_option("--activation", lyap.activation);
  c_lyap->add_option("--a", lyap.a);
  c_lyap->add_option("--b", lyap.b);
  c_lyap->add_option("--probes", lyap.probes);
  c_lyap->add_option("--range", lyap.range, "lo:hi");
  c_lyap->add_option("--constant", lyap.constant, "descent or conservative");
  c_lyap->add_option("--lambda", lyap.lambda, "Also run the F-based check with this lambda");
  c_lyap->add_option("--sigma-ref", lyap.sigma_ref);

  KernelArgs kern;
  auto* c_kern = app.add_subcommand("kernel-bound", "Randomized mixed-Hessian bound verification");
  c_kern->add_option("--activation", kern.activation);
  c_kern->add_option("--dim", kern.dim);
  c_kern->add_option("--trials", kern.trials);
  c_kern->add_option("--samples", kern.samples);

  BiasArgs bias;
  auto* c_bias = app.add_subcommand("bias-drift", "Bias drift bound check");
  c_bias->add_option("--activation", bias.activations)->delimiter(',');
  c_bias->add_option("--sigma", bias.sigmas)->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitArgument;
  }

  try {
    if (*c_sig) return run_signature(g, sig);
    if (*c_table) return run_table(g, table);
    if (*c_cls) return run_classify(g, classify_names);
    if (*c_mc) return run_mc(g, mc);
    if (*c_prop) return run_propagate(g, prop);
    if (*c_crit) return run_criticality(g, crit);
    if (*c_lyap) return run_lyapunov(g, lyap);
    if (*c_kern) return run_kernel(g, kern);
    if (*c_bias) return run_bias(g, bias);
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const EvaluationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const InvariantError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitProperty;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitArgument;
  }
  return kExitArgument;
}
