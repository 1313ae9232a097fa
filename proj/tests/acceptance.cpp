// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ccnr/cli.hpp"

using namespace ccnr;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Tracks the worst deviation seen and whether any boolean check failed.
class Tally {
public:
  void close(double err, double tol) {
    worst_ = std::max(worst_, err);
    if (!(err <= tol)) ok_ = false;
  }
  void require(bool cond, const std::string& what) {
    if (!cond && ok_) first_failure_ = what;
    if (!cond) ok_ = false;
  }
  Outcome done(const std::string& note = {}) const {
    std::ostringstream s;
    s << "max err " << cli::format_sig(worst_, 3);
    if (!note.empty()) s << "; " << note;
    if (!first_failure_.empty()) s << "; first failure: " << first_failure_;
    return {ok_, s.str()};
  }

private:
  double worst_ = 0.0;
  bool ok_ = true;
  std::string first_failure_;
};

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g(n + 1);
  for (int i = 0; i <= n; ++i) g[i] = i == n ? hi : lo + i * (hi - lo) / n;
  return g;
}

std::array<double, 4> random_spectrum(std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::array<double, 4> l{};
  double s = 0.0;
  for (auto& x : l) s += (x = expo(rng));
  for (auto& x : l) x /= s;
  l[3] = std::max(0.0, 1.0 - l[0] - l[1] - l[2]);
  return l;
}

double sqrt_sum(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p) s += std::sqrt(std::max(0.0, x));
  return s;
}

// 1
Outcome werner_tau() {
  const auto t0 = std::chrono::steady_clock::now();
  Tally t;
  for (std::size_t d = 2; d <= 5; ++d)
    for (double f : grid(-1.0, 1.0, 40)) {
      const double dd = double(d);
      t.close(std::abs(ccnr_tau(werner_state(d, f)) - (std::abs(dd * f - 1.0) / dd + 1.0 / dd)), 1e-9);
    }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  t.require(secs < 10.0, "runtime");
  return t.done("runtime " + cli::format_sig(secs, 3) + " s");
}

// 2
Outcome isotropic_tau() {
  Tally t;
  for (std::size_t d = 2; d <= 5; ++d) {
    const double dd = double(d);
    const auto fs = grid(0.0, 1.0, 20);
    for (double fid : fs) {
      const double tau = ccnr_tau(isotropic_state(d, fid));
      const double oracle = fid >= 1.0 / (dd * dd) ? dd * fid : 2.0 / dd - dd * fid;
      t.close(std::abs(tau - tau_isotropic_closed(d, fid)), 1e-9);
      t.close(std::abs(tau - oracle), 1e-9);
    }
    // first grid point with tau > 1 must be the first one past F = 1/d
    auto first_violation = std::find_if(fs.begin(), fs.end(), [&](double fid) { return violates_ccnr(ccnr_tau(isotropic_state(d, fid))); });
    auto first_past = std::find_if(fs.begin(), fs.end(), [&](double fid) { return fid > 1.0 / dd + 1e-12; });
    t.require(first_violation == first_past, "threshold d=" + std::to_string(d));
  }
  return t.done();
}

// 3
Outcome bell_tau() {
  Tally t;
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const BellSpectrum s(random_spectrum(rng));
    const double tau = ccnr_tau(bell_diagonal_state(s));
    t.close(std::abs(tau - tau_bell_diagonal_closed(s)), 1e-10);
    t.require((tau <= 1.0 + 1e-9) == (s.max() <= 0.5 + 1e-9), "separability iff at trial " + std::to_string(trial));
  }
  return t.done();
}

// 4
Outcome qubit_tau() {
  Tally t;
  for (double p : grid(0.0, 1.0, 50)) {
    const double q = 1.0 - p;
    const double base = p * p / 2.0 + q * q / 4.0, cross = (p / 2.0) * std::sqrt(p * p + q * q);
    const double oracle = q + std::sqrt(base + cross) + std::sqrt(std::max(0.0, base - cross));
    const double tau = ccnr_tau(qubit_family(p));
    t.close(std::abs(tau - oracle), 1e-9);
    t.require((std::abs(tau - 1.0) <= 1e-9) == (p == 1.0), "tau = 1 only at p = 1");
  }
  return t.done();
}

// 5
Outcome qutrit_tau() {
  Tally t;
  int bound = 0;
  for (double a : grid(2.0, 5.0, 60)) {
    const double tau = ccnr_tau(qutrit_family(a));
    t.close(std::abs(tau - (19.0 / 21.0 + (2.0 / 21.0) * std::sqrt(19.0 - 15.0 * a + 3.0 * a * a))), 1e-9);
    if (a > 3.0 + 1e-12 && a <= 4.0 + 1e-12) {
      ++bound;
      t.require(ppt_min_eigenvalue(qutrit_family(a)) >= -1e-9, "PPT in bound window");
      t.require(tau > 1.0, "tau > 1 in bound window");
    }
  }
  return t.done(std::to_string(bound) + " points in (3, 4]");
}

// 6
Outcome incomparability() {
  Tally t;
  const auto w = full_report(werner_state(3, -1.0 / 6.0), WernerFamily{3, -1.0 / 6.0});
  t.require(!w.tau_violated, "Werner f=-1/6 tau");
  t.require(w.ppt_violated, "Werner f=-1/6 ppt");
  t.require(w.gamma_closed && w.gamma_closed->value > 1.0 + 1e-9, "Werner f=-1/6 gamma");
  t.close(std::abs(w.tau - 5.0 / 6.0), 1e-9);
  const auto q = full_report(qutrit_family(3.5), QutritFamily{3.5});
  t.require(q.tau_violated, "qutrit 3.5 tau");
  t.require(!q.ppt_violated, "qutrit 3.5 ppt");
  const auto w1 = full_report(werner_state(3, -1.0));
  t.require(w1.tau_violated && w1.ppt_violated && !w1.reduction_violated, "Werner f=-1");
  return t.done();
}

// 7
Outcome pure_identities() {
  Tally t;
  const std::array<std::pair<std::size_t, std::size_t>, 3> dims{{{2, 2}, {3, 3}, {2, 4}}};
  std::uint64_t seed = 7000;
  for (const auto& [da, db] : dims)
    for (int trial = 0; trial < 100; ++trial) {
      const auto psi = random_pure(da, db, seed++);
      const double s = sqrt_sum(schmidt_decompose(psi).coefficients);
      t.close(std::abs(ccnr_tau(psi.projector()) - s * s), 1e-9);
      t.close(std::abs(robustness_pure_exact(psi) - (gamma_pure(psi).value - 1.0)), 1e-12);
    }
  return t.done();
}

// 8
Outcome majorization() {
  Tally t;
  std::size_t points = 0;
  auto check = [&](double gamma, double tau) {
    ++points;
    t.close(std::max(0.0, tau - gamma), 1e-12);
  };
  for (std::size_t d = 2; d <= 5; ++d) {
    for (double f : grid(-1.0, 1.0, 40)) check(gamma_werner_closed(d, f).value, tau_werner_closed(d, f));
    for (double fid : grid(0.0, 1.0, 20)) check(gamma_isotropic_closed(d, fid).value, tau_isotropic_closed(d, fid));
  }
  std::mt19937_64 rng(88);
  for (int trial = 0; trial < 500; ++trial) {
    const BellSpectrum s(random_spectrum(rng));
    check(gamma_bell_diagonal_closed(s).value, tau_bell_diagonal_closed(s));
  }
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto psi = random_pure(2 + seed % 3, 2 + seed % 2, seed);
    check(gamma_pure(psi).value, ccnr_tau(psi.projector()));
  }
  return t.done(std::to_string(points) + " points");
}

// 9
Outcome trace_and_norm_corollaries() {
  Tally t;
  for (std::size_t d = 2; d <= 5; ++d) {
    const double dd = double(d);
    for (double fid : grid(0.0, 1.0, 20)) {
      const auto rho = isotropic_state(d, fid);
      t.close(std::abs(realign_trace(rho) - dd * fid), 1e-10);
      const double a = isotropic_alpha(d, fid);
      t.close(std::abs(hs_norm(realign(rho).matrix()) - std::sqrt(a * a * (dd * dd - 1.0) / (dd * dd) + 1.0 / (dd * dd))), 1e-10);
    }
    for (double f : grid(-1.0, 1.0, 40)) {
      const auto rho = werner_state(d, f);
      t.close(std::abs(realign_trace(rho) - (f + 1.0) / (dd + 1.0)), 1e-10);
      const double hs2 = (1.0 + f) * (1.0 + f) / (2.0 * dd * (dd + 1.0)) + (1.0 - f) * (1.0 - f) / (2.0 * dd * (dd - 1.0));
      t.close(std::abs(hs_norm(realign(rho).matrix()) - std::sqrt(hs2)), 1e-10);
    }
  }
  return t.done();
}

// 10
Outcome ferrers() {
  Tally t;
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<std::size_t> size(1, 8);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = size(rng);
    ComplexVector a(n);
    for (auto& z : a) do z = Complex(normal(rng), normal(rng)); while (std::abs(z) < 1e-3);
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = 1.0 + (i == j ? a[i] : Complex{});
    const Complex ref = determinant(m);
    t.close(std::abs(ferrers_determinant(a) - ref) / std::max(std::abs(ref), 1e-300), 1e-10);
  }
  return t.done("relative");
}

// 11
Outcome invariance() {
  Tally t;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + trial % 3;
    const auto rho = random_density(d, d, 1 + trial % (d * d), 11000 + trial);
    const double tau = ccnr_tau(rho);
    const auto u = random_unitary(d, rng);
    const auto v = random_unitary(d, rng);
    t.close(std::abs(ccnr_tau(rho.transformed(kron(u, v))) - tau), 1e-9);

    const auto w = twirl_uu(rho);
    const auto iso = twirl_uubar(rho);
    t.close(max_abs(twirl_uu(w).matrix() - w.matrix()), 1e-9);
    t.close(max_abs(twirl_uubar(iso).matrix() - iso.matrix()), 1e-9);
    t.close(max_abs(twirl_uu(rho.transformed(kron(u, u))).matrix() - w.matrix()), 1e-9);
    t.close(max_abs(twirl_uubar(rho.transformed(kron(u, u.conjugate()))).matrix() - iso.matrix()), 1e-9);
    t.close(max_abs(w.transformed(kron(u, u)).matrix() - w.matrix()), 1e-9);
    t.close(max_abs(iso.transformed(kron(u, u.conjugate())).matrix() - iso.matrix()), 1e-9);

    ComplexMatrix o(d, d);
    for (auto& z : o.entries()) z = normal(rng);
    detail::orthonormalize_columns(o);
    t.close(std::abs(ccnr_tau(rho.transformed(kron(o, o))) - tau), 1e-9);
  }
  return t.done();
}

// 12
std::string run_capture(const std::string& args, int& code) {
  const std::string command = std::string("\"") + CCNR_CLI_PATH + "\" " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) {
    code = -1;
    return {};
  }
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_round_trip() {
  Tally t;
  const auto dir = std::filesystem::current_path() / "acceptance_cli";
  std::filesystem::create_directories(dir);
  struct Case {
    std::string gen_args;
    double tau_closed;
  };
  const std::vector<double> coeffs{0.6, 0.3, 0.1};
  const std::vector<Case> cases{
      {"werner --d 3 --param -0.5", tau_werner_closed(3, -0.5)},
      {"isotropic --d 4 --param 0.7", tau_isotropic_closed(4, 0.7)},
      {"bell --lambda 0.6,0.2,0.1,0.1", tau_bell_diagonal_closed(BellSpectrum({0.6, 0.2, 0.1, 0.1}))},
      {"qubit --param 0.3", tau_qubit_family_closed(0.3)},
      {"qutrit --param 4", tau_qutrit_family_closed(4.0)},
      {"schmidt --dims 3,3 --coeffs 0.6,0.3,0.1", gamma_pure(pure_from_schmidt(coeffs, 3, 3)).value},
  };
  int index = 0;
  for (const auto& c : cases) {
    const auto path = (dir / ("state" + std::to_string(index++) + ".json")).string();
    int code = 0;
    run_capture("gen " + c.gen_args + " --out \"" + path + "\"", code);
    t.require(code == 0, "gen " + c.gen_args);
    const auto out = run_capture("check --json \"" + path + "\"", code);
    t.require(code == 0, "check " + c.gen_args);
    if (code != 0) continue;
    try {
      t.close(std::abs(nlohmann::json::parse(out)["tau"].get<double>() - c.tau_closed), 1e-9);
    } catch (const std::exception&) {
      t.require(false, "parse check output for " + c.gen_args);
    }
  }
  const auto a = (dir / "sweep_a.csv").string(), b = (dir / "sweep_b.csv").string();
  int ca = 0, cb = 0;
  run_capture("sweep werner --d 3 --range -1:1:0.05 --out \"" + a + "\"", ca);
  run_capture("sweep werner --d 3 --range -1:1:0.05 --out \"" + b + "\"", cb);
  t.require(ca == 0 && cb == 0, "sweep exit codes");
  const auto ta = read_file(a);
  t.require(!ta.empty() && ta == read_file(b), "sweep byte determinism");
  std::filesystem::remove_all(dir);
  return t.done(std::to_string(cases.size()) + " families");
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Werner tau matches |df-1|/d + 1/d", werner_tau},
      {"isotropic tau matches closed form, threshold at F = 1/d", isotropic_tau},
      {"Bell-diagonal tau over 500 random spectra", bell_tau},
      {"two-qubit family tau", qubit_tau},
      {"two-qutrit family tau and bound-entangled detection", qutrit_tau},
      {"criterion incomparability witnesses", incomparability},
      {"pure-state identities", pure_identities},
      {"gamma majorizes tau on closed-form grids", majorization},
      {"realigned traces and Hilbert-Schmidt norms", trace_and_norm_corollaries},
      {"Ferrers determinant vs elimination", ferrers},
      {"invariance suite", invariance},
      {"CLI round trip and sweep determinism", cli_round_trip},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << i + 1 << ": " << criteria[i].first << " ("
              << o.detail << ")" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
