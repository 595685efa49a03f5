#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fourierfit/common.hpp"
#include "fourierfit/encodings.hpp"
#include "fourierfit/generalization.hpp"
#include "fourierfit/interpolate.hpp"
#include "fourierfit/quantum.hpp"
#include "fourierfit/rng.hpp"

namespace fourierfit {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Complex numbers, states, observables: [re, im] pair encoding.
// ---------------------------------------------------------------------------

inline Json complex_to_json(const Complex& z) {
  return Json::array({z.real(), z.imag()});
}

/// Accepts either a plain number (imaginary part zero) or a [re, im] pair.
inline Complex complex_from_json(const Json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
          "complex values must be numbers or [re, im] pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

inline Json state_to_json(const InputState& state) {
  Json out = Json::array();
  for (std::int64_t j = 0; j < state.dimension(); ++j) {
    out.push_back(complex_to_json(state.amplitude(j)));
  }
  return out;
}

inline InputState state_from_json(const Json& j) {
  require(j.is_array() && !j.empty(),
          "a state is a nonempty array of amplitudes");
  Eigen::VectorXcd g(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    g(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  }
  return InputState(std::move(g));
}

inline Json observable_to_json(const Observable& observable) {
  Json out = Json::array();
  const auto& m = observable.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      row.push_back(complex_to_json(m(i, k)));
    }
    out.push_back(row);
  }
  return out;
}

inline Observable observable_from_json(const Json& j) {
  require(j.is_array() && !j.empty(),
          "an observable is a nonempty array of rows");
  const auto d = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    require(row.is_array() && static_cast<Eigen::Index>(row.size()) == d,
            "observable rows must all have the matrix dimension");
    for (Eigen::Index k = 0; k < d; ++k) {
      m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
  }
  return Observable(std::move(m));
}

// ---------------------------------------------------------------------------
// Encoding strategies.
//   {"type":"hamming"|"binary"|"ternary", "n_qubits":N}
//   {"type":"contiguous", "d":D}
//   {"type":"golomb", "marks":[...]} or {"type":"golomb", "order":K}
//   {"type":"separable", "r":[...], "name":optional}
//   {"type":"explicit", "eigenvalues":[...], "name":optional}
// ---------------------------------------------------------------------------

namespace detail {

inline std::int64_t int_field(const Json& j, const std::string& key) {
  require(j.contains(key) && j.at(key).is_number_integer(),
          "missing or non-integer field '" + key + "'");
  return j.at(key).get<std::int64_t>();
}

inline double number_field(const Json& j, const std::string& key) {
  require(j.contains(key) && j.at(key).is_number(),
          "missing or non-numeric field '" + key + "'");
  return j.at(key).get<double>();
}

inline std::string string_field(const Json& j, const std::string& key) {
  require(j.contains(key) && j.at(key).is_string(),
          "missing or non-string field '" + key + "'");
  return j.at(key).get<std::string>();
}

inline std::vector<double> number_array_field(const Json& j,
                                              const std::string& key) {
  require(j.contains(key) && j.at(key).is_array(),
          "missing or non-array field '" + key + "'");
  std::vector<double> out;
  for (const Json& v : j.at(key)) {
    require(v.is_number(), "field '" + key + "' must contain numbers only");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

inline EncodingStrategy encoding_from_json(const Json& j) {
  require(j.is_object(), "encoding spec must be a JSON object");
  const std::string type = detail::string_field(j, "type");
  if (type == "hamming") {
    return hamming_strategy(detail::int_field(j, "n_qubits"));
  }
  if (type == "binary") {
    return binary_strategy(detail::int_field(j, "n_qubits"));
  }
  if (type == "ternary") {
    return ternary_strategy(detail::int_field(j, "n_qubits"));
  }
  if (type == "contiguous") {
    return contiguous_strategy(detail::int_field(j, "d"));
  }
  if (type == "golomb") {
    if (j.contains("order")) {
      return golomb_strategy_for_order(detail::int_field(j, "order"));
    }
    require(j.contains("marks") && j.at("marks").is_array(),
            "golomb encoding needs 'marks' or 'order'");
    std::vector<std::int64_t> marks;
    for (const Json& v : j.at("marks")) {
      require(v.is_number_integer(), "ruler marks must be integers");
      marks.push_back(v.get<std::int64_t>());
    }
    return golomb_strategy(marks);
  }
  if (type == "separable") {
    const std::string name =
        j.contains("name") ? detail::string_field(j, "name") : "separable";
    return separable_strategy(name, detail::number_array_field(j, "r"));
  }
  if (type == "explicit") {
    const std::string name =
        j.contains("name") ? detail::string_field(j, "name") : "explicit";
    return explicit_strategy(name, detail::number_array_field(j, "eigenvalues"));
  }
  throw InvalidArgument("unknown encoding type '" + type + "'");
}

inline Json encoding_to_json(const EncodingStrategy& strategy) {
  Json out;
  out["name"] = strategy.name;
  out["eigenvalues"] = strategy.eigenvalues;
  if (strategy.generator.has_value()) out["r"] = *strategy.generator;
  return out;
}

// ---------------------------------------------------------------------------
// Target functions.
//   {"kind":"zero"}
//   {"kind":"single-tone", "p":P, "amplitude": a or [re,im]}
//   {"kind":"flat", "n0":N0, "power":P}
//   {"kind":"random", "n0":N0, "power":P, "seed":S}
//   {"kind":"coefficients", "entries":[[k, a or [re,im]], ...]}
// Random targets carry their own seed so a config is reproducible on its own.
// ---------------------------------------------------------------------------

inline TargetSpec target_from_json(const Json& j) {
  require(j.is_object(), "target spec must be a JSON object");
  const std::string kind = detail::string_field(j, "kind");
  if (kind == "zero") return TargetSpec::zero();
  if (kind == "single-tone") {
    require(j.contains("amplitude"), "single-tone target needs 'amplitude'");
    return TargetSpec::single_tone(detail::int_field(j, "p"),
                                   complex_from_json(j.at("amplitude")));
  }
  if (kind == "flat") {
    return TargetSpec::flat(detail::int_field(j, "n0"),
                            detail::number_field(j, "power"));
  }
  if (kind == "random") {
    const auto seed =
        static_cast<std::uint64_t>(detail::int_field(j, "seed"));
    std::mt19937_64 engine = make_stream(seed, 0);
    return TargetSpec::random_band_limited(detail::int_field(j, "n0"),
                                           detail::number_field(j, "power"),
                                           engine);
  }
  if (kind == "coefficients") {
    require(j.contains("entries") && j.at("entries").is_array(),
            "coefficient target needs an 'entries' array");
    TargetSpec target;
    for (const Json& entry : j.at("entries")) {
      require(entry.is_array() && entry.size() == 2 &&
                  entry[0].is_number_integer(),
              "target entries are [k, coefficient] pairs");
      target.series.set(entry[0].get<std::int64_t>(),
                        complex_from_json(entry[1]));
    }
    return target;
  }
  throw InvalidArgument("unknown target kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Weight profiles.
//   {"kind":"uniform", "d":D, "value":optional}
//   {"kind":"hat", "n0":N0, "d":D, "c":C}
//   {"kind":"explicit", "entries":[[k, nu], ...]}
//   {"kind":"benign", "n0":N0, "d":D, "a":A}
// ---------------------------------------------------------------------------

inline WeightProfile weights_from_json(const Json& j) {
  require(j.is_object(), "weight spec must be a JSON object");
  const std::string kind = detail::string_field(j, "kind");
  if (kind == "uniform") {
    const double value =
        j.contains("value") ? detail::number_field(j, "value") : 1.0;
    return uniform_weights(detail::int_field(j, "d"), value);
  }
  if (kind == "hat") {
    return hat_weights(detail::int_field(j, "n0"), detail::int_field(j, "d"),
                       detail::number_field(j, "c"));
  }
  if (kind == "explicit") {
    require(j.contains("entries") && j.at("entries").is_array(),
            "explicit weights need an 'entries' array");
    std::map<std::int64_t, double> entries;
    for (const Json& entry : j.at("entries")) {
      require(entry.is_array() && entry.size() == 2 &&
                  entry[0].is_number_integer() && entry[1].is_number(),
              "weight entries are [k, nu] pairs");
      entries[entry[0].get<std::int64_t>()] = entry[1].get<double>();
    }
    return WeightProfile(entries);
  }
  if (kind == "benign") {
    return benign_state_weights(detail::int_field(j, "n0"),
                                detail::int_field(j, "d"),
                                detail::number_field(j, "a"));
  }
  throw InvalidArgument("unknown weight kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Noise kinds and plain file helpers.
// ---------------------------------------------------------------------------

inline NoiseKind noise_kind_from_string(const std::string& name) {
  if (name == "gaussian") return NoiseKind::gaussian;
  if (name == "uniform") return NoiseKind::uniform;
  if (name == "rademacher") return NoiseKind::rademacher;
  throw InvalidArgument("unknown noise kind '" + name + "'");
}

/// Shortest-round-trip decimal form; NaN and infinities normalized to
/// lowercase tokens so CSV cells are stable across platforms.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path);
  out << content;
  if (!out) throw Error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open for reading: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline Json parse_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw InvalidArgument("malformed JSON in " + path);
  }
  return j;
}

}  // namespace fourierfit
