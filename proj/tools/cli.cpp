#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chs/core.hpp"
#include "chs/exp_moments.hpp"
#include "chs/extremal.hpp"
#include "chs/matrix_norms.hpp"
#include "chs/report.hpp"
#include "chs/verify.hpp"

namespace chs::cli {

namespace {

// Published continuous minimizers n_k for k = 5..15.
constexpr double kReferenceNk[] = {1.2900, 1.6958, 2.0989, 2.5006, 2.9014, 3.3015,
                                   3.7012, 4.1005, 4.4997, 4.8986, 5.2974};

std::vector<double> parse_vector(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string cell = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end == cell.c_str() || *end != '\0' || !std::isfinite(v)) {
      throw InvalidArgument("cannot parse '" + cell + "' as a number in vector '" + text + "'");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

Report extremal_report(std::string name, const ExtremalResult& r) {
  Report rep;
  rep.name = std::move(name);
  rep.set("value", r.value).set("argvec", r.argvec.vec()).set("structure", r.structure);
  for (const auto& [k, v] : r.certificate) rep.set(k, v);
  return rep;
}

Report nk_table(int kmin, int kmax) {
  if (kmin < 2 || kmax < kmin) throw InvalidArgument("table nk needs 2 <= kmin <= kmax");
  Report r;
  r.name = "nk_table";
  r.set("kmin", static_cast<std::int64_t>(kmin)).set("kmax", static_cast<std::int64_t>(kmax));
  Table t{{"k", "n_k", "floor_nk", "reference_nk", "abs_dev"}, {}};
  for (int k = kmin; k <= kmax; ++k) {
    const double nk = nk_continuous(k);
    const bool has_ref = k >= 5 && k <= 15;
    const double ref = has_ref ? kReferenceNk[k - 5] : NAN;
    t.add_row({static_cast<std::int64_t>(k), nk, static_cast<std::int64_t>(std::floor(nk)), ref,
               has_ref ? std::abs(nk - ref) : NAN});
  }
  r.table = std::move(t);
  return r;
}

struct Globals {
  std::string format = "pretty";
  std::uint64_t seed = 0;
  EvalConfig cfg;
};

struct MatrixSource {
  std::string csv;
  std::size_t random_n = 0;
  std::uint64_t stream = 0;

  RealMatrix load(std::uint64_t seed) const {
    if (!csv.empty() && random_n != 0) throw InvalidArgument("give either --csv or --random, not both");
    if (!csv.empty()) return RealMatrix::read_csv(csv);
    if (random_n != 0) return RealMatrix::random_uniform(random_n, seed, stream);
    throw InvalidArgument("a matrix is required: --csv PATH or --random N");
  }
};

void add_matrix_options(CLI::App* cmd, MatrixSource& src) {
  cmd->add_option("--csv", src.csv, "Matrix file: comma-separated rows, no header");
  cmd->add_option("--random", src.random_n, "Random n x n matrix with entries uniform in [-1, 1]");
  cmd->add_option("--stream", src.stream, "Stream index for --random");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Complete homogeneous symmetric polynomials and moments of weighted exponential sums", "chs"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "pretty"}))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for every randomized step")->envname("CHS_SEED")->capture_default_str();
  app.add_option("--rel-tol", g.cfg.rel_tol, "Relative tolerance")->capture_default_str();
  app.add_option("--abs-tol", g.cfg.abs_tol, "Absolute tolerance")->capture_default_str();
  app.add_option("--distinct-tol", g.cfg.distinctness_tol, "Minimum coordinate gap for distinct-value formulas")
      ->capture_default_str();
  app.add_option("--max-k-partition", g.cfg.max_k_partition, "Largest k for the power-sum expansion")
      ->capture_default_str();

  std::optional<Report> single;
  std::vector<Report> many;
  bool verification = false;

  // eval
  std::string a_text;
  int k = 2;
  std::string method = "all";
  auto* eval = app.add_subcommand("eval", "Evaluate h_k(a) with every method");
  eval->add_option("--a", a_text, "Comma-separated weights")->required();
  eval->add_option("--k", k, "Degree")->required();
  eval->add_option("--method", method, "all|direct|recurrence|power_sum|lagrange")->capture_default_str();
  eval->callback([&] {
    const Weights a(parse_vector(a_text));
    Report r;
    r.name = "eval";
    r.set("a", a.vec()).set("k", static_cast<std::int64_t>(k));
    Table t{{"method", "value", "status"}, {}};
    const std::vector<HMethod> methods =
        method == "all" ? std::vector<HMethod>{HMethod::recurrence, HMethod::direct, HMethod::power_sum,
                                               HMethod::lagrange}
                        : std::vector<HMethod>{parse_hmethod(method)};
    for (HMethod m : methods) {
      try {
        t.add_row({std::string(to_string(m)), h_eval(a, k, m, g.cfg), std::string("ok")});
      } catch (const InvalidArgument&) {
        throw;
      } catch (const Error& e) {
        t.add_row({std::string(to_string(m)), NAN, std::string(e.what())});
      }
    }
    r.table = std::move(t);
    single = std::move(r);
  });

  // moment
  double q = 1.0;
  std::uint64_t samples = 1'000'000;
  auto* moment = app.add_subcommand("moment", "E|sum a_i X_i|^q for standard exponentials X_i");
  moment->add_option("--a", a_text, "Comma-separated weights")->required();
  moment->add_option("--q", q, "Exponent, q > -1")->required();
  moment->add_option("--method", method, "all|interpolation|density_quadrature|fourier|monte_carlo")
      ->capture_default_str();
  moment->add_option("--samples", samples, "Monte Carlo sample count")->capture_default_str();
  moment->callback([&] {
    const Weights a(parse_vector(a_text));
    McSettings mc;
    mc.samples = samples;
    mc.seed = g.seed;
    Report r;
    r.name = "moment";
    r.set("a", a.vec()).set("q", q).set("seed", static_cast<std::int64_t>(g.seed));
    Table t{{"method", "value", "std_error", "status"}, {}};
    const std::vector<MomentMethod> methods =
        method == "all" ? std::vector<MomentMethod>{MomentMethod::interpolation, MomentMethod::density_quadrature,
                                                    MomentMethod::fourier, MomentMethod::monte_carlo}
                        : std::vector<MomentMethod>{parse_moment_method(method)};
    for (MomentMethod m : methods) {
      if (method == "all" && m == MomentMethod::fourier && !in_fourier_window(q)) {
        t.add_row({std::string(to_string(m)), NAN, NAN, std::string("outside window")});
        continue;
      }
      try {
        const auto e = abs_moment(a, MomentQuery{q, m}, mc, g.cfg);
        t.add_row({std::string(to_string(m)), e.value, e.std_error, std::string("ok")});
      } catch (const InvalidArgument&) {
        throw;
      } catch (const Error& e) {
        t.add_row({std::string(to_string(m)), NAN, NAN, std::string(e.what())});
      }
    }
    r.table = std::move(t);
    single = std::move(r);
  });

  // hunter
  int n = 2;
  bool h4 = false;
  auto* hunter = app.add_subcommand("hunter", "Minimum of h_2k on the unit sphere");
  hunter->add_option("--n", n, "Dimension")->required();
  hunter->add_option("--k", k, "Half degree")->capture_default_str();
  hunter->add_flag("--h4", h4, "Minimum and maximum of h_4 for any n");
  hunter->callback([&] {
    if (h4) {
      const auto mm = h4_unconditional(n);
      Report r = extremal_report("h4_unconditional", mm.min);
      r.set("max_value", mm.max.value).set("max_argvec", mm.max.argvec.vec()).set("max_structure", mm.max.structure);
      single = std::move(r);
      return;
    }
    const auto res = hunter_min(n, k);
    Report r = extremal_report("hunter_min", res);
    r.set("h_eval_at_argvec", h_eval(res.argvec, 2 * k));
    single = std::move(r);
  });

  // nonneg
  int kmin = 5;
  int kmax = 15;
  auto* nonneg = app.add_subcommand("nonneg", "Non-negative weights");
  nonneg->require_subcommand(1);
  auto* nn_min = nonneg->add_subcommand("min", "Minimum of E(sum a_i X_i)^k");
  auto* nn_max = nonneg->add_subcommand("max", "Maximum of E(sum a_i X_i)^k");
  for (auto* c : {nn_min, nn_max}) {
    c->add_option("--n", n, "Dimension")->required();
    c->add_option("--k", k, "Moment order")->required();
  }
  nn_min->callback([&] { single = extremal_report("nonneg_min", nonneg_min(n, k)); });
  nn_max->callback([&] { single = extremal_report("nonneg_max", nonneg_max(n, k)); });
  auto* nn_table = nonneg->add_subcommand("table-nk", "Continuous minimizers n_k");
  nn_table->add_option("--kmin", kmin, "Smallest k")->capture_default_str();
  nn_table->add_option("--kmax", kmax, "Largest k")->capture_default_str();
  nn_table->callback([&] { single = nk_table(kmin, kmax); });
  auto* nn_u0 = nonneg->add_subcommand("u0", "Limit ratio of n_k / k");
  nn_u0->callback([&] {
    Report r;
    r.name = "u0_ratio";
    const double u0 = u0_ratio();
    r.set("u0", u0).set("inverse_u0", 1.0 / u0).set("nk_200_over_200", nk_continuous(200) / 200.0);
    single = std::move(r);
  });

  auto* table = app.add_subcommand("table", "Published tables");
  table->require_subcommand(1);
  auto* table_nk = table->add_subcommand("nk", "Same as nonneg table-nk");
  table_nk->add_option("--kmin", kmin, "Smallest k")->capture_default_str();
  table_nk->add_option("--kmax", kmax, "Largest k")->capture_default_str();
  table_nk->callback([&] { single = nk_table(kmin, kmax); });

  // centred
  auto* centred = app.add_subcommand("centred", "Weights with zero sum and unit norm");
  centred->require_subcommand(1);
  auto* c_min = centred->add_subcommand("min", "Minimum of h_2k, even n");
  auto* c_max = centred->add_subcommand("max", "Maximum of h_2k");
  for (auto* c : {c_min, c_max}) {
    c->add_option("--n", n, "Dimension")->required();
    c->add_option("--k", k, "Half degree")->required();
  }
  c_min->callback([&] { single = extremal_report("centred_min", centred_min(n, k)); });
  c_max->callback([&] { single = extremal_report("centred_max", centred_max(n, k)); });
  auto* c_h4 = centred->add_subcommand("h4", "Minimum of h_4");
  c_h4->add_option("--n", n, "Dimension")->required();
  c_h4->callback([&] { single = extremal_report("centred_h4_min", centred_h4_min(n)); });
  auto* c_n3 = centred->add_subcommand("n3", "Bounds of E|sum a_i X_i|^q for n = 3");
  c_n3->add_option("--q", q, "Exponent")->required();
  c_n3->callback([&] {
    const auto mm = centred_n3_bounds(q);
    Report r;
    r.name = "centred_n3_bounds";
    r.set("q", q);
    Table t{{"bound", "value", "structure", "argvec"}, {}};
    t.add_row({std::string("min"), mm.min.value, mm.min.structure, mm.min.argvec.vec()});
    t.add_row({std::string("max"), mm.max.value, mm.max.structure, mm.max.argvec.vec()});
    r.table = std::move(t);
    single = std::move(r);
  });

  // linf
  auto* linf = app.add_subcommand("linf", "Minimum of h_2k on the boundary of the unit cube");
  linf->add_option("--n", n, "Dimension")->required();
  linf->add_option("--k", k, "Half degree")->required();
  linf->callback([&] { single = extremal_report("linf_min", linf_min(n, k)); });

  // norm
  MatrixSource src;
  int d = 2;
  auto* norm = app.add_subcommand("norm", "Matrix norms from singular values");
  norm->require_subcommand(1);
  auto* n_chs = norm->add_subcommand("chs", "CHS norm h_d(sigma)^{1/d} and Schatten norms");
  auto* n_cmp = norm->add_subcommand("compare", "CHS norm against the operator norm");
  for (auto* c : {n_chs, n_cmp}) {
    add_matrix_options(c, src);
    c->add_option("--d", d, "Even degree")->capture_default_str();
  }
  n_chs->callback([&] {
    const auto m = src.load(g.seed);
    const auto sv = singular_values(m);
    Report r;
    r.name = "chs_norm";
    r.set("n", static_cast<std::int64_t>(m.size()))
        .set("d", static_cast<std::int64_t>(d))
        .set("singular_values", sv.values)
        .set("chs_norm", chs_norm(sv, d))
        .set("schatten_1", classical_norms(sv, 1.0))
        .set("schatten_2", classical_norms(sv, 2.0))
        .set("operator_norm", classical_norms(sv, INFINITY));
    single = std::move(r);
  });
  n_cmp->callback([&] {
    const auto m = src.load(g.seed);
    const auto sv = singular_values(m);
    const auto c = comparison_constants(static_cast<int>(m.size()), d);
    const double h = chs_norm(sv, d);
    const double op = classical_norms(sv, INFINITY);
    Report r;
    r.name = "norm_compare";
    r.set("n", static_cast<std::int64_t>(m.size()))
        .set("d", static_cast<std::int64_t>(d))
        .set("chs_norm", h)
        .set("operator_norm", op)
        .set("lower", c.lower)
        .set("upper", c.upper)
        .set("t", c.t)
        .set("ratio", op > 0.0 ? h / op : NAN);
    r.pass = h >= c.lower * op - 1e-9 && h <= c.upper * op + 1e-9;
    verification = true;
    single = std::move(r);
  });

  // verify
  std::string check = "all";
  auto* verify = app.add_subcommand("verify", "Run verification checks");
  std::string names = "all";
  for (auto nm : check_names()) names += "|" + std::string(nm);
  verify->add_option("check", check, names)->capture_default_str();
  verify->callback([&] {
    verification = true;
    if (check == "all") {
      many = verify_all(g.seed);
    } else {
      single = run_check(check, g.seed);
    }
  });

  try {
    app.parse(argc, argv);
    g.cfg.validate();
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  const Format f = parse_format(g.format);
  if (single) many.push_back(std::move(*single));
  if (many.size() == 1) {
    out << emit(many.front(), f);
  } else {
    out << emit(std::span<const Report>(many), f);
  }
  if (verification) {
    for (const auto& r : many) {
      if (r.pass && !*r.pass) return kExitVerifyFail;
    }
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv = {"chs"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace chs::cli
