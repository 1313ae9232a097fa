// SPDX-License-Identifier: Apache-2.0
#pragma once

// Batch front end: state files, report rendering and the five subcommands.
// Every command returns a process exit code:
//   0  computed (whatever the verdict)
//   2  input error (unreadable file, malformed JSON, bad parameters)
//   3  the input parsed but is not a valid state; the message names the
//      failed invariant and its residual

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "ccnr/criteria.hpp"
#include "ccnr/crossnorm.hpp"
#include "ccnr/errors.hpp"
#include "ccnr/families.hpp"
#include "ccnr/realign.hpp"
#include "ccnr/states.hpp"

namespace ccnr::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInvariant = 3;

/// Malformed or unusable input; maps to exit code 2.
class InputError : public Error {
public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Number formatting (locale independent)

/// Shortest form with at most `digits` significant digits ("%.12g" without locale).
inline std::string format_sig(double x, int digits = 12) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                 std::chars_format::general, digits);
  if (ec != std::errc{}) throw Error("number formatting failed");
  return std::string(buf.data(), end);
}

/// Twelve digits after the decimal point.
inline std::string format_fixed(double x, int decimals = 12) {
  std::array<char, 512> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                 std::chars_format::fixed, decimals);
  if (ec != std::errc{}) throw Error("number formatting failed");
  return std::string(buf.data(), end);
}

// ---------------------------------------------------------------------------
// State files
//
//   {"kind": "density" | "pure",
//    "dims": [d_a, d_b],
//    "matrix": [[[re, im], ...], ...]       // density: d x d nested rows
//              [[re, im], ...]              // pure: flat amplitude list
//    "family": {"name": ..., ...}}          // optional, written by `gen`

using AnyState = std::variant<DensityOperator, PureState>;

struct LoadedState {
  AnyState state;
  std::optional<FamilyDescriptor> family;
};

namespace detail {

inline Complex parse_entry(const json& e) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    throw InputError("matrix entries must be [re, im] number pairs");
  const Complex z(e[0].get<double>(), e[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw InputError("matrix entries must be finite");
  return z;
}

inline json entry_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline std::size_t parse_positive(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<std::int64_t>() <= 0)
    throw InputError(std::string(what) + " must be a positive integer");
  return static_cast<std::size_t>(j.get<std::int64_t>());
}

inline double family_param(const json& f) {
  if (!f.contains("param") || !f["param"].is_number())
    throw InputError("family metadata needs a numeric \"param\"");
  return f["param"].get<double>();
}

inline FamilyDescriptor parse_family(const json& f) {
  if (!f.is_object() || !f.contains("name") || !f["name"].is_string())
    throw InputError("family metadata must be an object with a \"name\"");
  const auto name = f["name"].get<std::string>();
  try {
    if (name == "werner") return WernerFamily{parse_positive(f.at("d"), "family.d"), family_param(f)};
    if (name == "isotropic")
      return IsotropicFamily{parse_positive(f.at("d"), "family.d"), family_param(f)};
    if (name == "qubit") return QubitFamily{family_param(f)};
    if (name == "qutrit") return QutritFamily{family_param(f)};
    if (name == "bell") {
      const auto& l = f.at("lambda");
      if (!l.is_array() || l.size() != 4) throw InputError("family.lambda needs four numbers");
      std::array<double, 4> lam{};
      for (std::size_t i = 0; i < 4; ++i) {
        if (!l[i].is_number()) throw InputError("family.lambda needs four numbers");
        lam[i] = l[i].get<double>();
      }
      return BellDiagonalFamily{BellSpectrum(lam)};
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("family metadata: ") + e.what());
  } catch (const DomainError& e) {
    throw InputError(std::string("family metadata: ") + e.what());
  }
  throw InputError("unknown family \"" + name + "\"");
}

inline json family_json(const FamilyDescriptor& fam) {
  return std::visit(
      [](const auto& f) -> json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, WernerFamily>)
          return {{"name", "werner"}, {"d", f.d}, {"param", f.f}};
        else if constexpr (std::is_same_v<T, IsotropicFamily>)
          return {{"name", "isotropic"}, {"d", f.d}, {"param", f.fidelity}};
        else if constexpr (std::is_same_v<T, BellDiagonalFamily>)
          return {{"name", "bell"}, {"lambda", f.spectrum.lambda()}};
        else if constexpr (std::is_same_v<T, QubitFamily>)
          return {{"name", "qubit"}, {"param", f.p}};
        else if constexpr (std::is_same_v<T, QutritFamily>)
          return {{"name", "qutrit"}, {"param", f.alpha}};
        else
          return json{{"name", "pure"}};
      },
      fam);
}

} // namespace detail

/// Parses StateFile JSON text. Throws InputError on format problems and
/// InvariantError when the data is not a valid state.
inline LoadedState parse_state(const std::string& text,
                               std::optional<std::pair<std::size_t, std::size_t>> dims_override = {},
                               const StateTolerances& tol = {}) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("state file must hold a JSON object");

  const std::string kind = doc.value("kind", std::string("density"));
  if (kind != "density" && kind != "pure")
    throw InputError("\"kind\" must be \"density\" or \"pure\"");

  std::size_t da = 0, db = 0;
  if (dims_override) {
    std::tie(da, db) = *dims_override;
  } else {
    if (!doc.contains("dims") || !doc["dims"].is_array() || doc["dims"].size() != 2)
      throw InputError("\"dims\" must be a pair [d_a, d_b] (or pass --dims)");
    da = detail::parse_positive(doc["dims"][0], "dims[0]");
    db = detail::parse_positive(doc["dims"][1], "dims[1]");
  }
  if (da == 0 || db == 0) throw InputError("dims must be positive");
  const std::size_t n = da * db;

  if (!doc.contains("matrix") || !doc["matrix"].is_array())
    throw InputError("\"matrix\" must be an array");
  const json& mat = doc["matrix"];

  auto state = [&]() -> AnyState {
    if (kind == "density") {
      if (mat.size() != n) throw InputError("density matrix needs " + std::to_string(n) + " rows");
      std::vector<Complex> entries;
      entries.reserve(n * n);
      for (const auto& row : mat) {
        if (!row.is_array() || row.size() != n)
          throw InputError("density matrix rows need " + std::to_string(n) + " entries");
        for (const auto& e : row) entries.push_back(detail::parse_entry(e));
      }
      return DensityOperator::from_matrix(da, db, ComplexMatrix(n, n, std::move(entries)), tol);
    }
    ComplexVector amps;
    for (const auto& e : mat) {
      // accept a column vector [[[re, im]], ...] as well as a flat list
      if (e.is_array() && e.size() == 1) amps.push_back(detail::parse_entry(e[0]));
      else amps.push_back(detail::parse_entry(e));
    }
    if (amps.size() != n) throw InputError("pure state needs " + std::to_string(n) + " amplitudes");
    // decimal files carry round-off well above the in-memory 1e-12 norm tolerance
    return PureState::from_amplitudes(da, db, std::move(amps), 1e-10);
  }();
  LoadedState out{std::move(state), std::nullopt};

  if (doc.contains("family")) {
    auto fam = detail::parse_family(doc["family"]);
    const auto expected = build_state(fam);
    const DensityOperator actual = std::holds_alternative<DensityOperator>(out.state)
                                       ? std::get<DensityOperator>(out.state)
                                       : std::get<PureState>(out.state).projector();
    if (expected.dim_a() != actual.dim_a() || expected.dim_b() != actual.dim_b())
      throw InvariantError("family metadata dims", 0.0);
    const double mismatch = max_abs(expected.matrix() - actual.matrix());
    if (mismatch > 1e-9) throw InvariantError("family metadata matches matrix", mismatch);
    out.family = std::move(fam);
  }
  return out;
}

inline LoadedState load_state_file(const std::string& path,
                                   std::optional<std::pair<std::size_t, std::size_t>> dims_override = {},
                                   const StateTolerances& tol = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_state(ss.str(), dims_override, tol);
}

inline json state_json(const AnyState& state, const std::optional<FamilyDescriptor>& family = {}) {
  json doc;
  if (const auto* rho = std::get_if<DensityOperator>(&state)) {
    doc["kind"] = "density";
    doc["dims"] = {rho->dim_a(), rho->dim_b()};
    json rows = json::array();
    const auto& m = rho->matrix();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(detail::entry_json(m(i, j)));
      rows.push_back(std::move(row));
    }
    doc["matrix"] = std::move(rows);
  } else {
    const auto& psi = std::get<PureState>(state);
    doc["kind"] = "pure";
    doc["dims"] = {psi.dim_a(), psi.dim_b()};
    json amps = json::array();
    for (const auto& z : psi.amplitudes()) amps.push_back(detail::entry_json(z));
    doc["matrix"] = std::move(amps);
  }
  if (family && !std::holds_alternative<PureFamily>(*family))
    doc["family"] = detail::family_json(*family);
  return doc;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("write failed for " + path);
}

// ---------------------------------------------------------------------------
// Report rendering

inline json report_json(const CriteriaReport& r) {
  json j{{"tau", r.tau},
         {"tau_violated", r.tau_violated},
         {"ppt_floor", r.ppt_floor},
         {"ppt_violated", r.ppt_violated},
         {"reduction_floor", r.reduction_floor},
         {"reduction_violated", r.reduction_violated},
         {"verdict", std::string(to_string(r.verdict))}};
  j["tau_closed"] = r.tau_closed ? json(*r.tau_closed) : json(nullptr);
  if (r.gamma_closed)
    j["gamma_closed"] = {{"value", r.gamma_closed->value},
                         {"family", std::string(to_string(r.gamma_closed->family))}};
  else
    j["gamma_closed"] = nullptr;
  return j;
}

inline void render_report(std::ostream& out, const CriteriaReport& r) {
  out << "tau             = " << format_fixed(r.tau) << (r.tau_violated ? "  (violates tau <= 1)\n" : "  (tau <= 1 holds)\n");
  if (r.tau_closed) out << "tau (closed)    = " << format_fixed(*r.tau_closed) << '\n';
  if (r.gamma_closed)
    out << "gamma (closed)  = " << format_fixed(r.gamma_closed->value) << "  [" << to_string(r.gamma_closed->family) << "]\n";
  out << "ppt floor       = " << format_sig(r.ppt_floor) << (r.ppt_violated ? "  (violated)\n" : "\n");
  out << "reduction floor = " << format_sig(r.reduction_floor) << (r.reduction_violated ? "  (violated)\n" : "\n");
  out << "verdict: " << to_string(r.verdict) << '\n';
}

// ---------------------------------------------------------------------------
// Commands

using Dims = std::pair<std::size_t, std::size_t>;

struct CheckOptions {
  std::string path;
  std::optional<Dims> dims;
  StateTolerances tol;
  bool json_output = false;
};

struct SweepOptions {
  std::string family;
  std::size_t d = 2;
  std::string range;
  std::string out_path;  ///< empty writes to the output stream
};

struct GenOptions {
  std::string family;
  std::size_t d = 2;
  std::optional<double> param;
  std::vector<double> values;  ///< Bell spectrum or Schmidt coefficients
  std::optional<Dims> dims;
  std::size_t rank = 0;  ///< 0 means full rank
  std::uint64_t seed = 0;
  std::string out_path;
};

struct FileOptions {
  std::string path;
  std::optional<Dims> dims;
  StateTolerances tol;
};

namespace detail {

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const InvariantError& e) {
    err << "error: invariant \"" << e.invariant() << "\" violated, residual "
        << format_sig(e.residual()) << '\n';
    return kExitInvariant;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

inline DensityOperator as_density(const AnyState& s) {
  if (const auto* rho = std::get_if<DensityOperator>(&s)) return *rho;
  return std::get<PureState>(s).projector();
}

} // namespace detail

inline int cmd_check(const CheckOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto loaded = load_state_file(opt.path, opt.dims, opt.tol);
    std::optional<FamilyDescriptor> fam = loaded.family;
    if (!fam && std::holds_alternative<PureState>(loaded.state))
      fam = PureFamily{std::get<PureState>(loaded.state)};
    const auto rho = detail::as_density(loaded.state);
    const auto report = full_report(rho, fam);
    if (opt.json_output)
      out << report_json(report).dump() << '\n';
    else
      render_report(out, report);
    return kExitOk;
  });
}

/// Parses "start:stop:step" into grid points start + i*step; the last point
/// snaps onto `stop` when rounding lands within 1e-9 steps of it.
inline std::vector<double> parse_range(const std::string& text) {
  std::array<double, 3> v{};
  std::size_t pos = 0;
  for (int k = 0; k < 3; ++k) {
    const std::size_t next = k < 2 ? text.find(':', pos) : text.size();
    if (next == std::string::npos) throw InputError("range must be start:stop:step");
    const std::string tok = text.substr(pos, next - pos);
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v[k]);
    if (tok.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v[k]))
      throw InputError("range component \"" + tok + "\" is not a number");
    pos = next + 1;
  }
  if (pos <= text.size() && text.find(':', pos) != std::string::npos)
    throw InputError("range must be start:stop:step");
  const auto [start, stop, step] = v;
  if (!(step > 0.0)) throw InputError("range step must be positive");
  if (stop < start) throw InputError("range stop must not precede start");
  const double span = (stop - start) / step;
  if (span > 1e6) throw InputError("range has too many points");
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    double x = start + static_cast<double>(i) * step;
    if (std::abs(x - stop) <= 1e-9 * step || x > stop) x = stop;
    grid[i] = x;
  }
  return grid;
}

/// One-parameter families used by `sweep`. "bell" is the Bell-diagonal line
/// lambda = (p, (1-p)/3, (1-p)/3, (1-p)/3).
inline FamilyDescriptor sweep_family(const std::string& name, std::size_t d, double x) {
  if (name == "werner") return WernerFamily{d, x};
  if (name == "isotropic") return IsotropicFamily{d, x};
  if (name == "qubit") return QubitFamily{x};
  if (name == "qutrit") return QutritFamily{x};
  if (name == "bell") {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("bell sweep parameter must lie in [0, 1]");
    const double rest = (1.0 - x) / 3.0;
    return BellDiagonalFamily{BellSpectrum({x, rest, rest, 1.0 - x - 2.0 * rest})};
  }
  throw InputError("unknown family \"" + name + "\" (werner|isotropic|bell|qubit|qutrit)");
}

inline constexpr const char* kSweepHeader =
    "param,tau_numeric,tau_closed,gamma_closed,ppt_floor,reduction_floor,verdict";

/// Writes the sweep CSV to `csv`. Validates every grid point before
/// producing any output.
inline void run_sweep(const SweepOptions& opt, std::ostream& csv) {
  const auto grid = parse_range(opt.range);
  std::vector<FamilyDescriptor> families;
  families.reserve(grid.size());
  for (double x : grid) {
    auto fam = sweep_family(opt.family, opt.d, x);
    build_state(fam);  // surfaces domain errors up front
    families.push_back(std::move(fam));
  }
  std::ostringstream body;
  body << kSweepHeader << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto report = full_report(build_state(families[i]), families[i]);
    body << format_sig(grid[i]) << ',' << format_sig(report.tau) << ','
         << (report.tau_closed ? format_sig(*report.tau_closed) : std::string()) << ','
         << (report.gamma_closed ? format_sig(report.gamma_closed->value) : std::string()) << ','
         << format_sig(report.ppt_floor) << ',' << format_sig(report.reduction_floor) << ','
         << to_string(report.verdict) << '\n';
  }
  csv << body.str();
}

inline int cmd_sweep(const SweepOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (opt.family == "werner" || opt.family == "isotropic") {
      if (opt.d < 2) throw InputError("--d must be at least 2");
    }
    std::ostringstream csv;
    run_sweep(opt, csv);
    if (opt.out_path.empty())
      out << csv.str();
    else
      write_text_file(opt.out_path, csv.str());
    return kExitOk;
  });
}

inline int cmd_schmidt(const FileOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto loaded = load_state_file(opt.path, opt.dims, opt.tol);
    const auto* psi = std::get_if<PureState>(&loaded.state);
    if (!psi) throw InputError("schmidt needs a pure-state file (kind \"pure\")");
    const auto form = schmidt_decompose(*psi);
    out << "p =";
    bool first = true;
    for (double p : form.coefficients) {
      if (!first && p <= 1e-14) break;
      out << (first ? " " : ", ") << format_sig(p);
      first = false;
    }
    const auto gamma = gamma_pure(*psi);
    out << "\ngamma = " << format_sig(gamma.value) << '\n';
    out << "E_R = " << format_sig(robustness_pure_exact(*psi)) << '\n';
    return kExitOk;
  });
}

inline int cmd_oschmidt(const FileOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto loaded = load_state_file(opt.path, opt.dims, opt.tol);
    const auto rho = detail::as_density(loaded.state);
    const auto os = operator_schmidt(rho);
    const double cutoff = 1e-12;
    out << "lambda =";
    std::size_t shown = 0;
    for (double l : os.coefficients) {
      if (shown > 0 && l <= cutoff) break;
      out << (shown == 0 ? " " : ", ") << format_sig(l);
      ++shown;
    }
    out << '\n';
    if (shown < os.coefficients.size())
      out << "(" << os.coefficients.size() - shown << " more below " << format_sig(cutoff) << ")\n";
    const double sum = os.coefficient_sum();
    out << "sum = " << format_sig(sum) << '\n';
    out << (violates_ccnr(sum) ? "verdict: tau > 1, entangled\n"
                               : "verdict: tau <= 1, criterion satisfied\n");
    return kExitOk;
  });
}

inline AnyState generate(const GenOptions& opt, std::optional<FamilyDescriptor>& family) {
  auto need_param = [&]() {
    if (!opt.param) throw InputError("--param is required for family " + opt.family);
    return *opt.param;
  };
  auto need_dims = [&]() {
    if (!opt.dims) throw InputError("--dims is required for family " + opt.family);
    return *opt.dims;
  };
  if (opt.family == "werner") family = WernerFamily{opt.d, need_param()};
  else if (opt.family == "isotropic") family = IsotropicFamily{opt.d, need_param()};
  else if (opt.family == "qubit") family = QubitFamily{need_param()};
  else if (opt.family == "qutrit") family = QutritFamily{need_param()};
  else if (opt.family == "bell") {
    if (opt.values.size() != 4) throw InputError("--lambda needs four comma-separated values");
    family = BellDiagonalFamily{BellSpectrum({opt.values[0], opt.values[1], opt.values[2], opt.values[3]})};
  }
  if (family) return build_state(*family);

  if (opt.family == "maxent") return max_entangled(opt.d);
  if (opt.family == "schmidt") {
    const auto [da, db] = need_dims();
    return pure_from_schmidt(opt.values, da, db);
  }
  if (opt.family == "random-pure") {
    const auto [da, db] = need_dims();
    return random_pure(da, db, opt.seed);
  }
  if (opt.family == "random") {
    const auto [da, db] = need_dims();
    return random_density(da, db, opt.rank == 0 ? da * db : opt.rank, opt.seed);
  }
  throw InputError("unknown family \"" + opt.family +
                   "\" (werner|isotropic|bell|qubit|qutrit|maxent|schmidt|random|random-pure)");
}

inline int cmd_gen(const GenOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    std::optional<FamilyDescriptor> family;
    const auto state = generate(opt, family);
    const auto text = state_json(state, family).dump(1) + "\n";
    if (opt.out_path.empty())
      out << text;
    else
      write_text_file(opt.out_path, text);
    return kExitOk;
  });
}

} // namespace ccnr::cli
