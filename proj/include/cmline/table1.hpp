#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>

#include <cmline/arith.hpp>

namespace cmline {

struct RationalSingularModulus {
  i64 disc;
  const char* j;  // decimal
};

/// The thirteen discriminants of class number one and their j-invariants.
inline constexpr std::array<RationalSingularModulus, 13> kTable1 = {{
    {-3, "0"},
    {-4, "1728"},
    {-7, "-3375"},
    {-8, "8000"},
    {-11, "-32768"},
    {-12, "54000"},
    {-16, "287496"},
    {-19, "-884736"},
    {-27, "-12288000"},
    {-28, "16581375"},
    {-43, "-884736000"},
    {-67, "-147197952000"},
    {-163, "-262537412640768000"},
}};

inline mpz_class table1_value(std::size_t i) { return mpz_class(kTable1.at(i).j); }

inline std::optional<i64> table1_disc_of(const mpz_class& v) {
  for (const auto& e : kTable1) {
    if (mpz_class(e.j) == v) return e.disc;
  }
  return std::nullopt;
}

inline bool in_table1(const mpz_class& v) { return table1_disc_of(v).has_value(); }

inline std::optional<mpz_class> table1_j_of(i64 disc) {
  for (const auto& e : kTable1) {
    if (e.disc == disc) return mpz_class(e.j);
  }
  return std::nullopt;
}

}  // namespace cmline
