// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>

namespace citeneed::models {

/// RNN_w:   forward GRU, last hidden state.
/// RNN_wS:  RNN_w plus the section vector.
/// RNNa_w:  bidirectional GRU with global attention.
/// RNNa_wS: RNNa_w plus the section vector.
enum class Variant { rnn_w, rnn_ws, rnna_w, rnna_ws };

inline constexpr bool has_section(Variant v) { return v == Variant::rnn_ws || v == Variant::rnna_ws; }
inline constexpr bool has_attention(Variant v) { return v == Variant::rnna_w || v == Variant::rnna_ws; }

/// "RNN_w", "RNN_wS", "RNNa_w", "RNNa_wS".
std::string_view variant_name(Variant v);
/// Command-line spelling: "rnn", "rnn-s", "rnn-a", "rnn-a-s".
std::string_view variant_flag(Variant v);

std::optional<Variant> parse_variant_name(std::string_view s);
std::optional<Variant> parse_variant_flag(std::string_view s);

}  // namespace citeneed::models
