// SPDX-License-Identifier: Apache-2.0
#pragma once

// Tagged descriptors for the state families with closed-form τ and/or gamma,
// so reports and sweeps can pair a numerical result with its analytic value.

#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "ccnr/crossnorm.hpp"
#include "ccnr/realign.hpp"
#include "ccnr/states.hpp"

namespace ccnr {

struct WernerFamily {
  std::size_t d;
  double f;
};

struct IsotropicFamily {
  std::size_t d;
  double fidelity;
};

struct BellDiagonalFamily {
  BellSpectrum spectrum;
};

struct QubitFamily {
  double p;
};

struct QutritFamily {
  double alpha;
};

struct PureFamily {
  PureState psi;
};

using FamilyDescriptor = std::variant<WernerFamily, IsotropicFamily, BellDiagonalFamily,
                                      QubitFamily, QutritFamily, PureFamily>;

inline std::string_view family_name(const FamilyDescriptor& fam) {
  return std::visit(
      [](const auto& f) -> std::string_view {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, WernerFamily>) return "werner";
        else if constexpr (std::is_same_v<T, IsotropicFamily>) return "isotropic";
        else if constexpr (std::is_same_v<T, BellDiagonalFamily>) return "bell";
        else if constexpr (std::is_same_v<T, QubitFamily>) return "qubit";
        else if constexpr (std::is_same_v<T, QutritFamily>) return "qutrit";
        else return "pure";
      },
      fam);
}

inline DensityOperator build_state(const FamilyDescriptor& fam) {
  return std::visit(
      [](const auto& f) -> DensityOperator {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, WernerFamily>) return werner_state(f.d, f.f);
        else if constexpr (std::is_same_v<T, IsotropicFamily>) return isotropic_state(f.d, f.fidelity);
        else if constexpr (std::is_same_v<T, BellDiagonalFamily>) return bell_diagonal_state(f.spectrum);
        else if constexpr (std::is_same_v<T, QubitFamily>) return qubit_family(f.p);
        else if constexpr (std::is_same_v<T, QutritFamily>) return qutrit_family(f.alpha);
        else return f.psi.projector();
      },
      fam);
}

inline double closed_tau(const FamilyDescriptor& fam) {
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, WernerFamily>) return tau_werner_closed(f.d, f.f);
        else if constexpr (std::is_same_v<T, IsotropicFamily>) return tau_isotropic_closed(f.d, f.fidelity);
        else if constexpr (std::is_same_v<T, BellDiagonalFamily>) return tau_bell_diagonal_closed(f.spectrum);
        else if constexpr (std::is_same_v<T, QubitFamily>) return tau_qubit_family_closed(f.p);
        else if constexpr (std::is_same_v<T, QutritFamily>) return tau_qutrit_family_closed(f.alpha);
        else return gamma_pure(f.psi).value;
      },
      fam);
}

/// Empty for the qubit and qutrit families, which have no gamma formula.
inline std::optional<GammaValue> closed_gamma(const FamilyDescriptor& fam) {
  return std::visit(
      [](const auto& f) -> std::optional<GammaValue> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, WernerFamily>) return gamma_werner_closed(f.d, f.f);
        else if constexpr (std::is_same_v<T, IsotropicFamily>) return gamma_isotropic_closed(f.d, f.fidelity);
        else if constexpr (std::is_same_v<T, BellDiagonalFamily>) return gamma_bell_diagonal_closed(f.spectrum);
        else if constexpr (std::is_same_v<T, PureFamily>) return gamma_pure(f.psi);
        else return std::nullopt;
      },
      fam);
}

} // namespace ccnr
