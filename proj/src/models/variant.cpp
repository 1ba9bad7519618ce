// SPDX-License-Identifier: Apache-2.0
#include "citeneed/models/variant.hpp"

#include <array>
#include <utility>

namespace citeneed::models {

namespace {

struct Spelling {
  Variant variant;
  std::string_view name;
  std::string_view flag;
};

constexpr std::array<Spelling, 4> kSpellings{{
    {Variant::rnn_w, "RNN_w", "rnn"},
    {Variant::rnn_ws, "RNN_wS", "rnn-s"},
    {Variant::rnna_w, "RNNa_w", "rnn-a"},
    {Variant::rnna_ws, "RNNa_wS", "rnn-a-s"},
}};

}  // namespace

std::string_view variant_name(Variant v) { return kSpellings[static_cast<std::size_t>(v)].name; }
std::string_view variant_flag(Variant v) { return kSpellings[static_cast<std::size_t>(v)].flag; }

std::optional<Variant> parse_variant_name(std::string_view s) {
  for (const auto& sp : kSpellings)
    if (sp.name == s) return sp.variant;
  return std::nullopt;
}

std::optional<Variant> parse_variant_flag(std::string_view s) {
  for (const auto& sp : kSpellings)
    if (sp.flag == s) return sp.variant;
  return std::nullopt;
}

}  // namespace citeneed::models
