#include "tachys/cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "tachys/brachistochrone.hpp"
#include "tachys/dilation.hpp"
#include "tachys/errors.hpp"
#include "tachys/gates.hpp"
#include "tachys/metric.hpp"
#include "tachys/opendyn.hpp"

namespace tachys::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string csv_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double x) const { return format_number(x); }
    std::string operator()(long long x) const { return std::to_string(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string out = "\"";
      for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
      }
      return out + '"';
    }
  };
  return std::visit(Visitor{}, c);
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (unsigned char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (ch < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += static_cast<char>(ch);
        }
    }
  }
  return out + '"';
}

std::string json_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "null"; }
    std::string operator()(double x) const { return std::isfinite(x) ? format_number(x) : "null"; }
    std::string operator()(long long x) const { return std::to_string(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string& s) const { return json_string(s); }
  };
  return std::visit(Visitor{}, c);
}

template <class MakeRow>
std::vector<std::vector<Cell>> evaluate_rows(std::size_t n, MakeRow make_row) {
  std::vector<std::vector<Cell>> rows(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        rows[i] = make_row(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  // The earliest failing row wins, so diagnostics do not depend on scheduling.
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

void write_atomically(const std::string& path, const std::string& data) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
    f.close();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot move report into place at " + path);
  }
}

void require_finite(double x, const std::string& flag) {
  if (!std::isfinite(x)) throw UsageError("--" + flag + " must be finite");
}

// A grid given either as a single --<name> value or as --<name>-min,
// --<name>-max and --points.
struct GridOption {
  std::string name;
  std::optional<double> single;
  std::optional<double> lo;
  std::optional<double> hi;
  std::optional<int> points;
  double default_lo = 0.0;
  double default_hi = 0.0;
  int default_points = 0;
  bool has_default = false;

  void attach(CLI::App* sub, const std::string& what) {
    auto* s = sub->add_option("--" + name, single, what + " (single value)");
    auto* a = sub->add_option("--" + name + "-min", lo, "lower end of the " + what + " grid");
    auto* b = sub->add_option("--" + name + "-max", hi, "upper end of the " + what + " grid");
    auto* p = sub->add_option("--points", points, "number of grid points (>= 2)");
    s->excludes(a)->excludes(b)->excludes(p);
  }

  std::vector<double> values(std::vector<ConfigEntry>& config) const {
    if (single) {
      require_finite(*single, name);
      config.push_back({name, *single});
      return {*single};
    }
    if (!has_default && (!lo || !hi)) {
      throw UsageError("give --" + name + " or both --" + name + "-min and --" + name + "-max");
    }
    const double l = lo.value_or(default_lo);
    const double h = hi.value_or(default_hi);
    const int n = points.value_or(has_default ? default_points : 2);
    require_finite(l, name + "-min");
    require_finite(h, name + "-max");
    if (n < 2) throw UsageError("--points must be at least 2");
    if (!(l <= h)) throw UsageError("--" + name + "-min must not exceed --" + name + "-max");
    config.push_back({name + "-min", l});
    config.push_back({name + "-max", h});
    config.push_back({"points", static_cast<long long>(n)});
    return linspace(l, h, n);
  }
};

PureState circle_target(double theta) {
  return PureState{std::cos(0.5 * theta), cplx(0.0, -std::sin(0.5 * theta))};
}

void push_matrix(std::vector<Cell>& row, const CMat& m) {
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      row.emplace_back(m(r, c).real());
      row.emplace_back(m(r, c).imag());
    }
}

// Shared command state, filled by CLI11 and consumed by the runners.
struct Options {
  std::string format = "csv";
  std::string output;
  double omega = 1.0;
  double proximity = 1e-6;
  std::optional<double> e_polar;
  std::string ancilla = "psi1";
  double f = 2.0;
  double delta_min = 1e-5;
  double delta_max = 1e-1;
  int delta_points = 5;
  GridOption theta{"theta", {}, {}, {}, {}};
  GridOption fgrid{"f", {}, {}, {}, {}, 0.05, 6.0, 512, true};
};

void echo_omega(const Options& o, std::vector<ConfigEntry>& config) {
  require_finite(o.omega, "omega");
  config.push_back({"omega", o.omega});
}

Report run_brachy(const Options& o) {
  Report r{"brachy", {}, {}, {}};
  const auto thetas = o.theta.values(r.config);
  echo_omega(o, r.config);
  r.columns = {"theta", "omega", "tau", "tau_scan", "s", "phase", "convention", "H00_re", "H00_im", "H01_re",
               "H01_im", "H10_re", "H10_im", "H11_re", "H11_im"};
  const double omega = o.omega;
  r.rows = evaluate_rows(thetas.size(), [&](std::size_t i) {
    const double theta = thetas[i];
    const BrachistochroneResult res = solve_brachistochrone(circle_target(theta), omega);
    const auto scan = first_passage_scan(res.spec.H, PureState{1.0, 0.0}, circle_target(theta),
                                         default_scan_horizon(omega));
    std::vector<Cell> row{theta, omega, res.tau, scan ? Cell{*scan} : Cell{}, res.spec.s, res.spec.theta,
                          std::string(to_string(res.spec.convention))};
    push_matrix(row, res.spec.H);
    return row;
  });
  return r;
}

Report run_dissipation(const Options& o) {
  Report r{"dissipation", {}, {}, {}};
  const auto fs = o.fgrid.values(r.config);
  echo_omega(o, r.config);
  require_finite(o.proximity, "proximity");
  if (!(o.proximity > 0.0)) throw UsageError("--proximity must be positive");
  r.config.push_back({"proximity", o.proximity});
  r.columns = {"f", "d_factor", "d_factor_finite", "g", "proximity", "gap_sq", "a_prime", "tau"};
  r.rows = evaluate_rows(fs.size(), [&](std::size_t i) {
    const DissipationScanRow d = dissipation_row(fs[i], o.omega, o.proximity);
    return std::vector<Cell>{d.f, d.d_factor, d.d_factor_finite, d.g, d.proximity, d.gap_sq, d.a_prime, d.tau};
  });
  return r;
}

Report run_dilation(const Options& o) {
  Report r{"dilation", {}, {}, {}};
  require_finite(o.f, "f");
  require_finite(o.delta_min, "delta-min");
  require_finite(o.delta_max, "delta-max");
  if (!(o.delta_min > 0.0) || !(o.delta_min <= o.delta_max)) {
    throw UsageError("need 0 < --delta-min <= --delta-max");
  }
  if (o.delta_points < 2) throw UsageError("--points must be at least 2");
  r.config = {{"f", o.f}, {"delta-min", o.delta_min}, {"delta-max", o.delta_max},
              {"points", static_cast<long long>(o.delta_points)}};
  echo_omega(o, r.config);
  auto deltas = logspace(o.delta_min, o.delta_max, o.delta_points);
  std::reverse(deltas.begin(), deltas.end());
  r.columns = {"delta",       "g",   "det_eta", "visibility", "tau", "tau_over_orthogonal", "dilation_error",
               "isometry_defect", "hbig_hermiticity"};
  const double omega = o.omega;
  const double f = o.f;
  r.rows = evaluate_rows(deltas.size(), [&](std::size_t i) {
    const double delta = deltas[i];
    const double g = std::sqrt(std::max(0.0, f - delta));
    const Metric metric = make_metric_fg(f, g);
    const PureState psi_i{1.0, 0.0};
    const PureState psi_f{0.0, 1.0};
    const AlignedHamiltonian al = aligned_hamiltonian(metric, omega, psi_i, psi_f);
    const DilationModel model = build_dilation(al.qh.h, metric, omega);
    const double period = 2.0 * std::numbers::pi / omega;
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double t = period * k / 99.0;
      const PureState ref = expm(al.qh.H, t) * psi_i;
      worst = std::max(worst, (evolve_dilated(model, psi_i, t).psi - ref).norm());
    }
    const double isometry = (model.V.adjoint() * model.V - CMat::identity(4)).frobenius_norm();
    return std::vector<Cell>{delta,
                             g,
                             metric.det(),
                             visibility_ratio(metric.with_unit_determinant(), psi_i),
                             al.tau,
                             al.tau / minimal_time(psi_i, psi_f, omega),
                             worst,
                             isometry,
                             model.Hbig.hermiticity_defect()};
  });
  return r;
}

Report run_povm(const Options& o) {
  Report r{"povm", {}, {}, {}};
  const auto thetas = o.theta.values(r.config);
  r.columns = {"theta", "a", "half_omega_tau"};
  const Povm labels_only = discrimination_povm(make_bloch_basis(std::numbers::pi));
  for (const char* who : {"psi0", "psi1"})
    for (const auto& label : labels_only.labels) r.columns.push_back("p_" + label + "_" + who);
  r.columns.insert(r.columns.end(), {"completeness_defect", "min_eigenvalue"});
  r.rows = evaluate_rows(thetas.size(), [&](std::size_t i) {
    const BlochBasis basis = make_bloch_basis(thetas[i]);
    const Povm povm = discrimination_povm(basis);
    const double a = basis.overlap();
    std::vector<Cell> row{basis.theta, a, std::acos(std::min(1.0, a))};
    for (const PureState* s : {&basis.psi0, &basis.psi1})
      for (double p : povm.probabilities(*s)) row.emplace_back(p);
    row.emplace_back(povm.completeness_defect());
    row.emplace_back(povm.min_eigenvalue());
    return row;
  });
  return r;
}

Report run_notgate(const Options& o) {
  Report r{"notgate", {}, {}, {}};
  const auto thetas = o.theta.values(r.config);
  echo_omega(o, r.config);
  r.columns = {"theta", "omega", "a", "forward_tau", "not_tau", "orthogonal_tau", "roundtrip_fidelity",
               "cloning_defect"};
  r.rows = evaluate_rows(thetas.size(), [&](std::size_t i) {
    const BlochBasis basis = make_bloch_basis(thetas[i]);
    const NotGateReport n = not_roundtrip(basis, o.omega);
    return std::vector<Cell>{basis.theta,  o.omega,          basis.overlap(),        n.forward_tau,
                             n.not_tau,    n.orthogonal_tau, n.roundtrip_fidelity, cloning_defect(basis)};
  });
  return r;
}

Report run_controlu(const Options& o) {
  Report r{"controlu", {}, {}, {}};
  const auto thetas = o.theta.values(r.config);
  echo_omega(o, r.config);
  if (o.e_polar) {
    require_finite(*o.e_polar, "e-polar");
    r.config.push_back({"e-polar", *o.e_polar});
  }
  r.config.push_back({"ancilla", o.ancilla});
  const AncillaPreparation prep = o.ancilla == "e1" ? AncillaPreparation::e1 : AncillaPreparation::psi1;
  r.columns = {"theta", "e_polar", "p", "q", "lhs", "rhs", "slack", "residual", "p_below_one", "q_below_one",
               "trace_out_psi1", "trace_out_psi0"};
  r.rows = evaluate_rows(thetas.size(), [&](std::size_t i) {
    const BlochBasis basis = make_bloch_basis(thetas[i]);
    // Default placement: e1 bisects the arc from psi1 to the antipode of psi0.
    const double alpha = o.e_polar.value_or(0.5 * (basis.theta + std::numbers::pi));
    const ControlUReport c = control_u_channel(basis, alpha, o.omega, prep);
    return std::vector<Cell>{basis.theta,
                             alpha,
                             c.p,
                             c.q,
                             c.lhs,
                             c.rhs,
                             c.rhs - c.lhs,
                             c.residual,
                             c.p_below_one,
                             c.q_below_one,
                             c.output_from_psi1.trace().real(),
                             c.output_from_psi0.trace().real()};
  });
  return r;
}

Report run_efficiency(const Options& o) {
  Report r{"efficiency", {}, {}, {}};
  const auto thetas = o.theta.values(r.config);
  echo_omega(o, r.config);
  r.columns = {"theta", "omega", "delta_t", "delta_E", "epsilon", "bound", "slack"};
  r.rows = evaluate_rows(thetas.size(), [&](std::size_t i) {
    const BlochBasis basis = make_bloch_basis(thetas[i]);
    const EfficiencyReport e = efficiency_bound(basis, o.omega);
    return std::vector<Cell>{basis.theta, o.omega, e.delta_t, e.delta_E, e.epsilon, e.bound(), e.slack()};
  });
  return r;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
  return buf;
}

std::string render_csv(const Report& report) {
  std::string out = std::string("# schema: ") + kSchema + "\n";
  out += "# command: " + report.command + "\n";
  out += "# config:";
  for (const auto& e : report.config) out += " " + e.key + "=" + csv_cell(e.value);
  out += "\n";
  for (std::size_t i = 0; i < report.columns.size(); ++i) out += (i ? "," : "") + report.columns[i];
  out += "\n";
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
    out += "\n";
  }
  return out;
}

std::string render_json(const Report& report) {
  std::string out = "{\n  \"schema\": " + json_string(kSchema) + ",\n  \"command\": " + json_string(report.command);
  out += ",\n  \"config\": {";
  for (std::size_t i = 0; i < report.config.size(); ++i) {
    out += (i ? ", " : "") + json_string(report.config[i].key) + ": " + json_cell(report.config[i].value);
  }
  out += "},\n  \"columns\": [";
  for (std::size_t i = 0; i < report.columns.size(); ++i) out += (i ? ", " : "") + json_string(report.columns[i]);
  out += "],\n  \"rows\": [";
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    out += r ? ",\n    {" : "\n    {";
    const auto& row = report.rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += (i ? ", " : "") + json_string(report.columns[i]) + ": " + json_cell(row[i]);
    }
    out += "}";
  }
  out += report.rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 1) return {};
  if (points == 1) return {lo};
  std::vector<double> v(static_cast<std::size_t>(points));
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = lo + step * i;
  v.back() = hi;
  return v;
}

std::vector<double> logspace(double lo, double hi, int points) {
  std::vector<double> v = linspace(std::log(lo), std::log(hi), points);
  for (double& x : v) x = std::exp(x);
  if (!v.empty()) {
    v.front() = lo;
    v.back() = hi;
  }
  return v;
}

unsigned worker_count() {
  if (const char* env = std::getenv("TACHYS_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(std::min(n, 1024L));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-optimal qubit evolution: sweeps and reports", "tachys"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", o.output, "report path (default: standard output)");
  };
  auto add_omega = [&](CLI::App* sub) {
    sub->add_option("--omega", o.omega, "energy gap")->capture_default_str();
  };

  std::map<std::string, std::function<Report(const Options&)>> runners;

  auto* brachy = app.add_subcommand("brachy", "optimal Hamiltonian and time for targets on the Bloch circle");
  o.theta.attach(brachy, "target polar angle");
  add_omega(brachy);
  add_common(brachy);
  runners["brachy"] = run_brachy;

  auto* diss = app.add_subcommand("dissipation", "dissipative factor along the metric boundary");
  o.fgrid.attach(diss, "metric parameter f");
  add_omega(diss);
  diss->add_option("--proximity", o.proximity, "f - g^2 at which finite values are sampled")
      ->capture_default_str();
  add_common(diss);
  runners["dissipation"] = run_dissipation;

  auto* dil = app.add_subcommand("dilation", "Hermitian dilation: visibility versus speed as det eta -> 0");
  dil->add_option("--f", o.f, "metric parameter f")->capture_default_str();
  dil->add_option("--delta-min", o.delta_min, "smallest f - g^2")->capture_default_str();
  dil->add_option("--delta-max", o.delta_max, "largest f - g^2")->capture_default_str();
  dil->add_option("--points", o.delta_points, "number of delta values (>= 2)")->capture_default_str();
  add_omega(dil);
  add_common(dil);
  runners["dilation"] = run_dilation;

  auto* povm = app.add_subcommand("povm", "unambiguous discrimination of the non-orthogonal basis");
  o.theta.attach(povm, "basis polar angle");
  add_common(povm);
  runners["povm"] = run_povm;

  auto* notgate = app.add_subcommand("notgate", "NOT-gate round trip and cloning defect");
  o.theta.attach(notgate, "basis polar angle");
  add_omega(notgate);
  add_common(notgate);
  runners["notgate"] = run_notgate;

  auto* ctrl = app.add_subcommand("controlu", "control-U error channel and its triangle bound");
  o.theta.attach(ctrl, "basis polar angle");
  add_omega(ctrl);
  ctrl->add_option("--e-polar", o.e_polar, "Bloch polar angle of e1 (default: bisecting placement)");
  ctrl->add_option("--ancilla", o.ancilla, "target register preparation")
      ->check(CLI::IsMember({"psi1", "e1"}))
      ->capture_default_str();
  add_common(ctrl);
  runners["controlu"] = run_controlu;

  auto* eff = app.add_subcommand("efficiency", "time-energy-efficiency inequality for optimal evolutions");
  o.theta.attach(eff, "basis polar angle");
  add_omega(eff);
  add_common(eff);
  runners["efficiency"] = run_efficiency;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const Report report = runners.at(command)(o);
    const std::string text = o.format == "json" ? render_json(report) : render_csv(report);
    if (o.output.empty()) {
      out << text;
      out.flush();
    } else {
      write_atomically(o.output, text);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: module=" << e.module() << " kind=" << e.kind() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace tachys::cli
