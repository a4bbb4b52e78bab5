#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "floatnet/arith.hpp"
#include "floatnet/errors.hpp"
#include "floatnet/text.hpp"
#include "floatnet/value.hpp"

namespace floatnet {

enum class Activation : uint8_t { Step, ReLU };

inline std::string activation_name(Activation a) { return a == Activation::Step ? "step" : "relu"; }

inline Activation activation_from_name(const std::string& s) {
  if (s == "step") return Activation::Step;
  if (s == "relu") return Activation::ReLU;
  throw SchemaError("unknown activation '" + s + "'");
}

// One affine map: indices into the previous layer (1-based, strictly
// ascending) where index N_{l-1}+1 addresses the constant input 1, and one
// weight per index.
struct Neuron {
  std::vector<uint32_t> indices;
  std::vector<Float> weights;
};

struct Layer {
  std::vector<Neuron> neurons;
};

// A layered network with the strict left-fold affine evaluation order.
// The activation applies to layers 1..L-1; the output layer is affine only.
struct Network {
  Format format;
  Activation activation = Activation::Step;
  uint32_t input_dim = 0;
  std::vector<Layer> layers;

  uint32_t width(size_t l) const {  // N_l, with N_0 = input_dim
    return l == 0 ? input_dim : static_cast<uint32_t>(layers[l - 1].neurons.size());
  }
};

inline uint64_t count_params(const Network& net) {
  uint64_t n = 0;
  for (const auto& layer : net.layers)
    for (const auto& neuron : layer.neurons) n += neuron.indices.size();
  return n;
}

inline void validate(const Network& net) {
  if (net.input_dim == 0) throw ValidationError("network has input dimension 0");
  if (net.layers.empty()) throw ValidationError("network has no layers");
  for (size_t l = 0; l < net.layers.size(); ++l) {
    const Layer& layer = net.layers[l];
    if (layer.neurons.empty()) throw ValidationError("layer " + std::to_string(l + 1) + " is empty");
    uint32_t prev = net.width(l);
    for (const Neuron& nr : layer.neurons) {
      if (nr.indices.empty()) throw ValidationError("empty index set");
      if (nr.indices.size() != nr.weights.size())
        throw ShapeMismatch("index/weight length mismatch");
      uint32_t last = 0;
      for (uint32_t idx : nr.indices) {
        if (idx < 1 || idx > prev + 1) throw ValidationError("index out of range");
        if (idx <= last) throw ValidationError("indices not strictly ascending");
        last = idx;
      }
      for (const Float& w : nr.weights) {
        if (!w.is_finite()) throw ValidationError("non-finite weight");
        if (!is_canonical(net.format, w)) throw ValidationError("non-canonical weight");
      }
    }
  }
  if (net.layers.back().neurons.size() != 1)
    throw ValidationError("output layer must have width 1");
}

// Evaluation flags. overflow_seen means some (+)/(x) on finite operands
// produced +-inf; nan_seen means a NaN appeared anywhere.
struct EvalFlags {
  bool overflow_seen = false;
  bool nan_seen = false;
  uint64_t inexact_ops = 0;
};

struct NeuronTrace {
  Float pre;
  Float post;
  uint32_t inexact_ops = 0;
};

struct EvalTrace {
  EvalFlags flags;
  std::vector<std::vector<NeuronTrace>> layers;  // populated by eval_traced
};

// aff_F(x, w, I): strict left fold (+) of w_j (x) z_{i_j} in ascending j with
// z = (inputs..., 1). The fold order is part of the semantics.
inline Float aff(const Format& f, const std::vector<Float>& inputs, const Neuron& nr,
                 EvalFlags* flags = nullptr, uint32_t* inexact_ops = nullptr) {
  if (nr.indices.empty()) throw DomainError("aff over an empty index set");
  if (nr.indices.size() != nr.weights.size()) throw ShapeMismatch("aff index/weight mismatch");
  const uint32_t bias_index = static_cast<uint32_t>(inputs.size()) + 1;
  Float acc;
  for (size_t j = 0; j < nr.indices.size(); ++j) {
    uint32_t idx = nr.indices[j];
    if (idx < 1 || idx > bias_index) throw ShapeMismatch("aff index out of range");
    const Float z = idx == bias_index ? one(f) : inputs[idx - 1];
    OpStats st;
    Float term = mul(f, nr.weights[j], z, &st);
    if (j == 0) {
      acc = term;
    } else {
      acc = add(f, acc, term, &st);
    }
    if (flags) {
      flags->overflow_seen |= st.overflow;
      flags->nan_seen |= st.nan || term.is_nan() || acc.is_nan();
      flags->inexact_ops += st.inexact ? 1 : 0;
    }
    if (inexact_ops && st.inexact) ++*inexact_ops;
  }
  return acc;
}

struct EvalResult {
  Float output;
  EvalFlags flags;
};

namespace detail {

inline Float apply_activation(const Format& f, Activation act, const Float& pre,
                              EvalFlags* flags) {
  if (pre.is_nan()) {
    if (flags) flags->nan_seen = true;
    return pre;
  }
  Float post;
  if (act == Activation::Step) {
    bool nonneg;
    switch (pre.cls) {
      case Cls::PosInf: nonneg = true; break;
      case Cls::NegInf: nonneg = false; break;
      default: nonneg = pre.sig == 0 || pre.sign > 0; break;
    }
    post = nonneg ? one(f) : make_zero(+1);
  } else {
    if (pre.cls == Cls::NegInf || (pre.is_finite() && (pre.sig == 0 || pre.sign < 0))) {
      post = make_zero(+1);
    } else {
      post = pre;  // PosInf or positive finite
    }
  }
  // sigma of a representable value is representable, so rounding after the
  // activation is the identity; assert rather than assume.
  if (post.is_finite() && !is_canonical(f, post))
    throw ValidationError("activation produced a non-canonical value");
  return post;
}

template <bool kTraced>
EvalResult eval_impl(const Network& net, const std::vector<Float>& x, EvalTrace* trace) {
  if (x.size() != net.input_dim) throw ShapeMismatch("input dimension mismatch");
  for (const Float& v : x) {
    if (!v.is_finite() || !is_canonical(net.format, v))
      throw FormatMismatch("input is not a finite value of the network format");
  }
  EvalResult res;
  if constexpr (kTraced) trace->layers.assign(net.layers.size(), {});
  std::vector<Float> cur = x, next;
  for (size_t l = 0; l < net.layers.size(); ++l) {
    const Layer& layer = net.layers[l];
    const bool is_output = l + 1 == net.layers.size();
    next.clear();
    next.reserve(layer.neurons.size());
    if constexpr (kTraced) trace->layers[l].reserve(layer.neurons.size());
    for (const Neuron& nr : layer.neurons) {
      uint32_t inx = 0;
      Float pre = aff(net.format, cur, nr, &res.flags, &inx);
      if (pre.is_nan()) res.flags.nan_seen = true;
      Float post = is_output ? pre : detail::apply_activation(net.format, net.activation, pre,
                                                              &res.flags);
      if (post.is_nan()) res.flags.nan_seen = true;
      next.push_back(post);
      if constexpr (kTraced) trace->layers[l].push_back(NeuronTrace{pre, post, inx});
    }
    cur.swap(next);
  }
  res.output = cur[0];
  if constexpr (kTraced) trace->flags = res.flags;
  return res;
}

}  // namespace detail

inline EvalResult eval(const Network& net, const std::vector<Float>& x) {
  return detail::eval_impl<false>(net, x, nullptr);
}

inline EvalResult eval_traced(const Network& net, const std::vector<Float>& x, EvalTrace& trace) {
  return detail::eval_impl<true>(net, x, &trace);
}

// ---- Documents -------------------------------------------------------------

inline nlohmann::json format_to_json(const Format& f) {
  nlohmann::json j;
  j["kind"] = f.kind == Kind::Fp ? "fp" : "fpq";
  j["p"] = f.p;
  if (f.kind == Kind::Fpq) j["q"] = f.q;
  return j;
}

inline Format format_from_json(const nlohmann::json& j) {
  try {
    std::string kind = j.at("kind").get<std::string>();
    int32_t p = j.at("p").get<int32_t>();
    if (kind == "fp") return make_format(Kind::Fp, p);
    if (kind == "fpq") return make_format(Kind::Fpq, p, j.at("q").get<int32_t>());
    throw SchemaError("unknown format kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("bad format object: ") + e.what());
  } catch (const ConstraintViolation& e) {
    throw SchemaError(std::string("bad format object: ") + e.what());
  }
}

inline nlohmann::json serialize(const Network& net) {
  validate(net);
  nlohmann::json doc;
  doc["schema"] = "floatnet.network/v1";
  doc["format"] = format_to_json(net.format);
  doc["activation"] = activation_name(net.activation);
  doc["input_dim"] = net.input_dim;
  nlohmann::json layers = nlohmann::json::array();
  for (const Layer& layer : net.layers) {
    nlohmann::json jneurons = nlohmann::json::array();
    for (const Neuron& nr : layer.neurons) {
      nlohmann::json jn;
      jn["indices"] = nr.indices;
      std::vector<std::string> w;
      w.reserve(nr.weights.size());
      for (const Float& v : nr.weights) w.push_back(format_text(net.format, v));
      jn["weights"] = w;
      jneurons.push_back(std::move(jn));
    }
    layers.push_back(nlohmann::json{{"neurons", std::move(jneurons)}});
  }
  doc["layers"] = std::move(layers);
  return doc;
}

inline Network deserialize(const nlohmann::json& doc,
                           const Format* expected_format = nullptr) {
  Network net;
  try {
    if (doc.at("schema").get<std::string>() != "floatnet.network/v1")
      throw SchemaError("unknown network schema");
    net.format = format_from_json(doc.at("format"));
    if (expected_format && net.format != *expected_format)
      throw FormatMismatch("network document format " + net.format.spec_string() +
                           " does not match expected " + expected_format->spec_string());
    net.activation = activation_from_name(doc.at("activation").get<std::string>());
    net.input_dim = doc.at("input_dim").get<uint32_t>();
    for (const auto& jlayer : doc.at("layers")) {
      Layer layer;
      for (const auto& jn : jlayer.at("neurons")) {
        Neuron nr;
        nr.indices = jn.at("indices").get<std::vector<uint32_t>>();
        for (const auto& jw : jn.at("weights")) {
          nr.weights.push_back(parse_text(net.format, jw.get<std::string>()));
        }
        layer.neurons.push_back(std::move(nr));
      }
      net.layers.push_back(std::move(layer));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed network document: ") + e.what());
  } catch (const ParseError& e) {
    throw SchemaError(std::string("bad weight: ") + e.what());
  } catch (const NotRepresentable& e) {
    throw SchemaError(std::string("bad weight: ") + e.what());
  }
  try {
    validate(net);
  } catch (const Error& e) {
    throw SchemaError(std::string("invalid network: ") + e.what());
  }
  return net;
}

// Dataset document: (input vector, output) pairs in the lossless text form.
struct Dataset {
  Format format;
  uint32_t input_dim = 0;
  std::vector<std::vector<Float>> inputs;
  std::vector<Float> outputs;
};

inline nlohmann::json dataset_to_json(const Dataset& ds) {
  nlohmann::json doc;
  doc["schema"] = "floatnet.dataset/v1";
  doc["format"] = format_to_json(ds.format);
  doc["input_dim"] = ds.input_dim;
  nlohmann::json pairs = nlohmann::json::array();
  for (size_t i = 0; i < ds.inputs.size(); ++i) {
    std::vector<std::string> z;
    for (const Float& v : ds.inputs[i]) z.push_back(format_text(ds.format, v));
    pairs.push_back(nlohmann::json{{"z", z}, {"y", format_text(ds.format, ds.outputs[i])}});
  }
  doc["pairs"] = std::move(pairs);
  return doc;
}

inline Dataset dataset_from_json(const nlohmann::json& doc) {
  Dataset ds;
  try {
    if (doc.at("schema").get<std::string>() != "floatnet.dataset/v1")
      throw SchemaError("unknown dataset schema");
    ds.format = format_from_json(doc.at("format"));
    ds.input_dim = doc.at("input_dim").get<uint32_t>();
    if (ds.input_dim == 0) throw SchemaError("dataset input_dim must be positive");
    for (const auto& jp : doc.at("pairs")) {
      std::vector<Float> z;
      for (const auto& jz : jp.at("z")) z.push_back(parse_text(ds.format, jz.get<std::string>()));
      if (z.size() != ds.input_dim) throw SchemaError("dataset entry dimension mismatch");
      for (const Float& v : z)
        if (!v.is_finite()) throw SchemaError("dataset inputs must be finite");
      Float y = parse_text(ds.format, jp.at("y").get<std::string>());
      if (!y.is_finite()) throw SchemaError("dataset outputs must be finite");
      ds.inputs.push_back(std::move(z));
      ds.outputs.push_back(y);
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed dataset document: ") + e.what());
  } catch (const ParseError& e) {
    throw SchemaError(std::string("bad dataset value: ") + e.what());
  } catch (const NotRepresentable& e) {
    throw SchemaError(std::string("bad dataset value: ") + e.what());
  }
  return ds;
}

}  // namespace floatnet
