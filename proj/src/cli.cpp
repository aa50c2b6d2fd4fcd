#include "balanced/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "balanced/balance.hpp"
#include "balanced/continuation.hpp"
#include "balanced/degeneracy.hpp"
#include "balanced/dynamics.hpp"
#include "balanced/error.hpp"
#include "balanced/forces.hpp"
#include "balanced/planar.hpp"
#include "balanced/polytope.hpp"
#include "balanced/tetra.hpp"

namespace balanced::cli {

namespace {

using nlohmann::json;

constexpr const char* kCsvHelp = R"(Outputs
  JSON (stdout, or <out>.json) with "schema": 1.
  CSV (with --csv to stdout, or <out>.csv), header row:
    continue  arclength,a,b1,b2,d1,d2,f,lambda1,lambda2,lambda3,gap,balance_residual,cayley_menger
    simulate  t,a,b1,b2,d1,d2,f
    polytope  nu1,nu2,nu3
    planar    ratio,m1a_minus_m2f  (m2 = 1, f = 1; a from the central planar rhombus)
Shape input: --tetra, --distances a,b1,b2,d1,d2,f, or "distances2" / "points" in --config.
Exit codes: 0 ok, 1 acceptance failures, 2 malformed input, 3 numerical failure.)";

struct Common {
  std::string masses, distances, config, out;
  bool tetra = false, csv = false;
  std::uint64_t seed = 1;
  double tol = -1;
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double x;
    try {
      x = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed number: '" + item + "'");
    }
    if (pos != item.size() || !std::isfinite(x)) throw std::invalid_argument("malformed number: '" + item + "'");
    v.push_back(x);
  }
  return v;
}

json load_config(const Common& c) {
  if (c.config.empty()) return json::object();
  std::ifstream in(c.config);
  if (!in) throw std::invalid_argument("cannot open config " + c.config);
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

std::vector<double> json_doubles(const json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  std::vector<double> v;
  for (const auto& x : j) {
    if (!x.is_number()) throw std::invalid_argument(std::string(what) + " must hold numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

MassSystem masses_of(const Common& c, const json& cfg) {
  if (!c.masses.empty()) return MassSystem(parse_list(c.masses));
  if (cfg.contains("masses")) return MassSystem(json_doubles(cfg["masses"], "masses"));
  throw std::invalid_argument("masses required (--masses or config)");
}

MassSystem four_masses(const Common& c, const json& cfg) {
  MassSystem ms = masses_of(c, cfg);
  if (ms.size() != 4) throw std::invalid_argument("four masses required");
  return ms;
}

SquaredDistances shape_of(const Common& c, const json& cfg, bool tetra_default) {
  int given = (c.tetra ? 1 : 0) + (!c.distances.empty() ? 1 : 0) + (cfg.contains("distances2") ? 1 : 0) +
              (cfg.contains("points") ? 1 : 0);
  if (given > 1) throw std::invalid_argument("supply exactly one of distances2 / points");
  SquaredDistances s;
  if (!c.distances.empty() || cfg.contains("distances2")) {
    const auto v = !c.distances.empty() ? parse_list(c.distances) : json_doubles(cfg["distances2"], "distances2");
    if (v.size() != 6) throw std::invalid_argument("six squared distances required");
    s = SquaredDistances::from_vector(Vector6d(v.data()));
  } else if (cfg.contains("points")) {
    std::vector<Eigen::VectorXd> pts;
    for (const auto& p : cfg["points"]) {
      const auto v = json_doubles(p, "point");
      pts.push_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    s = distances_from_points(pts);
  } else if (c.tetra || tetra_default) {
    s = SquaredDistances::tetrahedron();
  } else {
    throw std::invalid_argument("shape required (--tetra, --distances or config)");
  }
  s.require_positive();
  return s;
}

double tol_of(const Common& c, const json& cfg, double fallback) {
  if (c.tol > 0) return c.tol;
  if (cfg.contains("tol")) {
    if (!cfg["tol"].is_number()) throw std::invalid_argument("tol must be a number");
    return cfg["tol"].get<double>();
  }
  return fallback;
}

json finite(double v) {
  if (!std::isfinite(v)) throw NumericalError("non-finite value in output");
  return v;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) r.push_back(finite(m(i, k)));
    rows.push_back(r);
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json r = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) r.push_back(finite(v[k]));
  return r;
}

json vector_json(const std::vector<double>& v) {
  json r = json::array();
  for (double x : v) r.push_back(finite(x));
  return r;
}

json distances_json(const SquaredDistances& s) {
  return json{{"a", finite(s.a)}, {"b1", finite(s.b1)}, {"b2", finite(s.b2)},
              {"d1", finite(s.d1)}, {"d2", finite(s.d2)}, {"f", finite(s.f)}};
}

json base(const char* command) { return json{{"schema", 1}, {"command", command}}; }

class Output {
 public:
  Output(const Common& c, std::ostream& out) : c_(c), out_(out) {}

  void emit(const json& summary, const std::string& csv) const {
    if (!c_.out.empty()) {
      write(c_.out + ".json", summary.dump(2) + "\n");
      if (!csv.empty()) write(c_.out + ".csv", csv);
    } else if (c_.csv && !csv.empty()) {
      out_ << csv;
    } else {
      out_ << summary.dump(2) << "\n";
    }
  }

 private:
  static void write(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write " + path);
    f << text;
  }
  const Common& c_;
  std::ostream& out_;
};

std::string csv_row(std::initializer_list<double> xs) {
  std::string r;
  for (double x : xs) {
    if (!r.empty()) r += ',';
    r += fmt(x);
  }
  return r + "\n";
}

Pairing parse_pairing(const std::string& text, const MassSystem& ms, const SquaredDistances& s) {
  if (text == "auto") return degenerate_pairing(ms, s);
  Pairing p;
  if (text == "external") return p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.size() == 2 && std::isdigit(item[0]) && std::isdigit(item[1]))
      p.internal.emplace_back(item[0] - '1', item[1] - '1');
    else if (!(item.size() == 1 && std::isdigit(item[0])))
      throw std::invalid_argument("malformed pairing '" + text + "' (e.g. 12,3 or auto or external)");
  }
  return p;
}

// --- subcommands -----------------------------------------------------------

void cmd_matrices(const Common& c, const Output& o) {
  const json cfg = load_config(c);
  const MassSystem ms = four_masses(c, cfg);
  const SquaredDistances s = shape_of(c, cfg, false);
  json j = base("matrices");
  j["masses"] = vector_json(std::vector<double>(ms.masses().begin(), ms.masses().end()));
  j["distances2"] = distances_json(s);
  j["B"] = matrix_json(inertia_matrix(ms, s).matrix());
  j["A"] = matrix_json(wc_matrix(ms, s).matrix());
  j["cayley_menger"] = finite(cayley_menger(s));
  o.emit(j, "");
}

void cmd_balance(const Common& c, const Output& o) {
  const json cfg = load_config(c);
  const MassSystem ms = four_masses(c, cfg);
  const SquaredDistances s = shape_of(c, cfg, false);
  const double tol = tol_of(c, cfg, 1e-10);
  const BalanceCheck chk = is_balanced(ms, s, {}, tol);
  const BalanceResidual r = balance_residuals_4body(ms, s);
  json j = base("balance-check");
  j["distances2"] = distances_json(s);
  json rows = json::array();
  for (std::size_t k = 0; k < r.triples.size(); ++k)
    rows.push_back({{"triple", {r.triples[k][0] + 1, r.triples[k][1] + 1, r.triples[k][2] + 1}},
                    {"value", finite(r.values[k])}});
  j["residuals"] = rows;
  j["max_raw"] = finite(chk.max_raw);
  j["max_normalized"] = finite(chk.max_normalized);
  j["tol"] = tol;
  j["balanced"] = chk.balanced;
  o.emit(j, "");
}

void cmd_degeneracy(const Common& c, const Output& o) {
  const json cfg = load_config(c);
  const MassSystem ms = four_masses(c, cfg);
  const SquaredDistances s = shape_of(c, cfg, true);
  const Sym3 a = wc_matrix(ms, s);
  const Sym3 b = inertia_matrix(ms, s);
  const auto ga = degeneracy_gap(a), gb = degeneracy_gap(b);
  json ja = {{"gap", finite(ga.gap / std::max(ga.scale, 1e-300))}};
  const Eigen::Vector3d raw = c2_polynomials(a);
  ja["c2"] = {finite(raw[0]), finite(raw[1]), finite(raw[2])};
  try {
    const auto c2 = check_c2(a);
    ja["certificate"] = "c2";
    ja["degenerate"] = c2.degenerate;
  } catch (const std::invalid_argument&) {
    try {
      const auto c1 = check_c1(a);
      ja["certificate"] = "c1";
      ja["degenerate"] = c1.degenerate();
      ja["c1"] = c1.branch == C1Branch::NonDegenerate ? "non-degenerate"
                 : c1.branch == C1Branch::DiagonalRepeat ? "diagonal-repeat"
                                                          : "off-diagonal";
      ja["c1_residual"] = finite(c1.residual);
    } catch (const std::invalid_argument&) {
      ja["certificate"] = "gap";
      ja["degenerate"] = ga.gap <= 1e-10 * std::max(ga.scale, 1e-300);
    }
  }
  json j = base("degeneracy");
  j["distances2"] = distances_json(s);
  j["k_rank"] = k_rank(ms);
  j["some_three_equal"] = some_three_equal(ms);
  j["tetra_inertia_degenerate"] = tetra_inertia_degenerate(ms);
  j["A"] = ja;
  j["B"] = {{"gap", finite(gb.gap / std::max(gb.scale, 1e-300))}};
  o.emit(j, "");
}

void cmd_tangents(const Common& c, const Output& o) {
  const json cfg = load_config(c);
  const MassSystem ms = four_masses(c, cfg);
  const MassCubic cubic = mass_cubic(ms);
  json j = base("tangents");
  j["cubic"] = {finite(cubic.c3), finite(cubic.c2), finite(cubic.c1), finite(cubic.c0)};
  j["roots"] = vector_json(std::vector<double>(cubic.roots.begin(), cubic.roots.end()));
  const auto pre = trip_prefactors(ms);
  j["trip_prefactors"] = vector_json(std::vector<double>(pre.begin(), pre.end()));
  json dirs = json::array();
  for (const auto& t : tangent_directions(ms))
    dirs.push_back({{"root", finite(t.root)},
                    {"multiplicity", t.multiplicity},
                    {"pair", {t.pair[0] + 1, t.pair[1] + 1}},
                    {"direction", vector_json(Eigen::VectorXd(t.direction))},
                    {"kernel_residual", finite(t.kernel_residual)},
                    {"proportionality_residual", finite(t.proportionality_residual)}});
  j["directions"] = dirs;
  o.emit(j, "");
}

void cmd_continue(const Common& c, const Output& o, int root, const ContinuationOptions& opt) {
  const json cfg = load_config(c);
  const MassSystem ms = four_masses(c, cfg);
  if (root < 1 || root > 3) throw std::invalid_argument("--root must be 1, 2 or 3");
  std::string csv = "arclength,a,b1,b2,d1,d2,f,lambda1,lambda2,lambda3,gap,balance_residual,cayley_menger\n";
  json j = base("continue");
  json branches = json::array();
  for (int k : {root - 1}) {
    const Branch br = continue_branch(ms, k, opt);
    for (const auto& p : br.points)
      csv += csv_row({p.arclength, p.s.a, p.s.b1, p.s.b2, p.s.d1, p.s.d2, p.s.f, p.lambdas[0], p.lambdas[1],
                      p.lambdas[2], p.gap, p.balance_residual, p.cayley_menger});
    double worst_gap = 0, worst_res = 0;
    for (const auto& p : br.points) {
      worst_gap = std::max(worst_gap, p.gap);
      worst_res = std::max(worst_res, p.balance_residual);
    }
    branches.push_back({{"root_index", k + 1},
                        {"root", finite(br.root)},
                        {"pair", {br.pair[0] + 1, br.pair[1] + 1}},
                        {"points", br.points.size()},
                        {"final_arclength", finite(br.points.back().arclength)},
                        {"final", distances_json(br.points.back().s)},
                        {"max_gap", finite(worst_gap)},
                        {"max_balance_residual", finite(worst_res)},
                        {"truncated", br.truncated},
                        {"diagnostic", br.diagnostic}});
  }
  j["branches"] = branches;
  o.emit(j, csv);
}

struct SimulateOpts {
  int dim = 4;
  std::string pairing = "auto";
  double periods = 3;
  double dt_per_period = 20000.0 / 3.0;
  int branch = 0;
  double arclength = 0.05;
  int sample_every = 100;
};

void cmd_simulate(const Common& c, const Output& o, const SimulateOpts& so) {
  const json cfg = load_config(c);
  const MassSystem ms = four_masses(c, cfg);
  SquaredDistances s;
  if (so.branch > 0) {
    if (so.branch > 3) throw std::invalid_argument("--root must be 1, 2 or 3");
    ContinuationOptions opt;
    opt.steps = 100000;
    opt.stop_at_arclength = so.arclength;
    const Branch br = continue_branch(ms, so.branch - 1, opt);
    if (std::abs(br.points.back().arclength - so.arclength) > 1e-12)
      throw NumericalError("branch ended before the requested arclength: " + br.diagnostic);
    s = br.points.back().s;
  } else {
    s = shape_of(c, cfg, true);
  }
  if (so.dim != 4 && so.dim != 6) throw std::invalid_argument("--dim must be 4 or 6");
  const Pairing pairing = parse_pairing(so.pairing, ms, s);
  const RelativeEquilibrium re = build_relative_equilibrium(ms, s, pairing, so.dim);
  const double period = 2 * std::numbers::pi / re.freqs.minCoeff();
  const double t_end = so.periods * period;
  const double dt = period / so.dt_per_period;
  const IntegrationReport rep = integrate_newton(ms, re.x0, re.omega * re.x0, t_end, dt, {}, so.sample_every);
  std::string csv = "t,a,b1,b2,d1,d2,f\n";
  for (const auto& smp : rep.samples)
    csv += csv_row({smp.t, smp.s[0], smp.s[1], smp.s[2], smp.s[3], smp.s[4], smp.s[5]});
  json j = base("simulate");
  j["distances2"] = distances_json(s);
  j["dim"] = so.dim;
  json pj = json::array();
  for (auto [a, b] : pairing.internal) pj.push_back({a + 1, b + 1});
  j["internal_pairs"] = pj;
  j["freqs"] = vector_json(Eigen::VectorXd(re.freqs));
  j["omega_residual"] = finite(re.residual);
  j["angular_momentum_nu"] = vector_json(re_angular_momentum(re).nu);
  j["period"] = finite(period);
  j["dt"] = finite(dt);
  j["steps"] = rep.steps;
  j["collision"] = rep.collision;
  j["distance_drift"] = finite(rep.distance_drift);
  j["energy_drift"] = finite(rep.energy_drift);
  j["angular_momentum_drift"] = finite(rep.angular_momentum_drift);
  o.emit(j, csv);
}

void cmd_polytope(const Common& c, const Output& o, int samples, int threads) {
  const json cfg = load_config(c);
  const MassSystem ms = four_masses(c, cfg);
  const SquaredDistances s = shape_of(c, cfg, true);
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(inertia_matrix(ms, s).matrix());
  Eigen::MatrixXd s0 = Eigen::MatrixXd::Zero(6, 6);
  s0.topLeftCorner(3, 3) = es.eigenvalues().reverse().asDiagonal();
  const auto pts = sample_polytope(s0, samples, c.seed, threads);
  const HornSpec spec = HornSpec::canonical(s0);
  int outside = 0;
  std::string csv = "nu1,nu2,nu3\n";
  for (const auto& nu : pts) {
    csv += csv_row({nu[0], nu[1], nu[2]});
    if (!horn_membership(spec, nu).member) ++outside;
  }
  const auto bv = bifurcation_vertices(s0);
  json j = base("polytope");
  j["sigma"] = vector_json(Eigen::VectorXd(bv.sigma));
  j["case"] = bv.case_number;
  j["planar"] = bv.planar;
  json verts = json::array();
  for (const auto& v : bv.vertices) verts.push_back({{"label", std::string(1, v.label)}, {"nu", vector_json(v.nu)}});
  j["vertices"] = verts;
  json edges = json::array();
  for (const auto& e : bv.edges) edges.push_back({{"edge", e.name}, {"bifurcation", e.bifurcation}});
  j["edges"] = edges;
  j["samples"] = samples;
  j["seed"] = c.seed;
  j["horn_violations"] = outside;
  o.emit(j, csv);
}

void cmd_planar(const Output& o, const std::string& scan) {
  const auto v = parse_list(scan);
  if (v.size() != 3) throw std::invalid_argument("--scan expects lo,hi,n");
  const double nd = v[2];
  if (nd < 2 || nd != std::floor(nd)) throw std::invalid_argument("--scan n must be an integer >= 2");
  const auto pts = planar_ratio_scan(v[0], v[1], static_cast<int>(nd));
  std::string csv = "ratio,m1a_minus_m2f\n";
  for (const auto& p : pts) csv += csv_row({p.ratio, p.value});
  const double g = planar_degenerate_ratio();
  json j = base("planar");
  j["gamma"] = finite(g);
  j["gamma_residual"] = finite(planar_degeneracy_function(g));
  j["sign_changes"] = vector_json(sign_changes(pts));
  o.emit(j, csv);
}

}  // namespace

std::string fmt(double v) {
  if (!std::isfinite(v)) throw NumericalError("non-finite value in output");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const VerifyAll& verify_all) {
  CLI::App app{"Balanced configurations of four bodies: matrices, degeneracy, continuation, dynamics"};
  app.footer(kCsvHelp);
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");
  Common c;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--masses", c.masses, "comma-separated masses");
    sub->add_option("--config", c.config, "JSON config path");
    sub->add_option("--out", c.out, "output path prefix (<out>.json, <out>.csv)");
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--tol", c.tol, "tolerance override");
    sub->add_option("--distances", c.distances, "squared distances a,b1,b2,d1,d2,f");
    sub->add_flag("--tetra", c.tetra, "unit regular tetrahedron");
    sub->add_flag("--csv", c.csv, "print CSV instead of JSON");
  };
  auto* matrices = app.add_subcommand("matrices", "inertia and Wintner-Conley matrices");
  auto* balance = app.add_subcommand("balance-check", "balance residuals");
  auto* degeneracy = app.add_subcommand("degeneracy", "eigenvalue degeneracy certificates");
  auto* tangents = app.add_subcommand("tangents", "mass cubic roots and tangent directions at the tetrahedron");
  auto* cont = app.add_subcommand("continue", "continue degenerate balanced branches");
  auto* simulate = app.add_subcommand("simulate", "build a relative equilibrium and integrate Newton's equations");
  auto* polytope = app.add_subcommand("polytope", "sample the frequency polytope");
  auto* planar = app.add_subcommand("planar", "planar rhombus mass-ratio scan");
  auto* verify = app.add_subcommand("verify-all", "run the acceptance suite");
  for (auto* s : {matrices, balance, degeneracy, tangents, cont, simulate, polytope, planar, verify})
    s->set_help_flag("--help", "print help");
  for (auto* s : {matrices, balance, degeneracy, tangents, cont, simulate, polytope, planar}) common(s);

  int root = 1;
  ContinuationOptions copt;
  cont->add_option("--root", root, "1..3: root of the mass cubic, ascending");
  cont->add_option("--steps", copt.steps);
  cont->add_option("--h", copt.h, "initial arclength step");
  cont->add_option("--h-max", copt.h_max);
  cont->add_option("--orientation", copt.orientation);

  SimulateOpts so;
  simulate->add_option("--dim", so.dim, "4 or 6");
  simulate->add_option("--pairing", so.pairing, "auto, external, or e.g. 12,3 (indices of B eigenvectors)");
  simulate->add_option("--periods", so.periods);
  simulate->add_option("--dt-per-period", so.dt_per_period);
  simulate->add_option("--root", so.branch, "take the shape from the branch of root 1..3 at --arclength");
  simulate->add_option("--arclength", so.arclength);
  simulate->add_option("--sample-every", so.sample_every);

  int samples = 10000, threads = 0;
  polytope->add_option("--samples", samples);
  polytope->add_option("--threads", threads);

  std::string scan = "0.2,5,400";
  planar->add_option("--scan", scan, "lo,hi,n");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  const Output o(c, out);
  try {
    if (*matrices) cmd_matrices(c, o);
    else if (*balance) cmd_balance(c, o);
    else if (*degeneracy) cmd_degeneracy(c, o);
    else if (*tangents) cmd_tangents(c, o);
    else if (*cont) cmd_continue(c, o, root, copt);
    else if (*simulate) cmd_simulate(c, o, so);
    else if (*polytope) cmd_polytope(c, o, samples, threads);
    else if (*planar) cmd_planar(o, scan);
    else if (*verify) {
      if (!verify_all) {
        err << "error: acceptance suite not linked\n";
        return 2;
      }
      return verify_all(out) == 0 ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    out << json{{"schema", 1}, {"error", "numerical"}, {"message", e.what()}}.dump(2) << "\n";
    return 3;
  }
  return 0;
}

}  // namespace balanced::cli
