// Copyright (c) 2026 The Unifront Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "unifront/config.h"

#include <charconv>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "unifront/text_util.h"

namespace unifront {

namespace {

int64_t ParseInt(const std::string& v) {
  int64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw std::invalid_argument("expected an integer, got '" + v + "'");
  }
  return out;
}

double ParseReal(const std::string& v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw std::invalid_argument("expected a number, got '" + v + "'");
  }
  return out;
}

bool ParseBool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("expected true or false, got '" + v + "'");
}

std::string BoolText(bool b) { return b ? "true" : "false"; }

struct Key {
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

Key Int(std::function<int64_t(const RunConfig&)> get,
        std::function<void(RunConfig&, int64_t)> set) {
  return {[get](const RunConfig& c) { return std::to_string(get(c)); },
          [set](RunConfig& c, const std::string& v) { set(c, ParseInt(v)); }};
}

Key Real(std::function<double(const RunConfig&)> get,
         std::function<void(RunConfig&, double)> set) {
  return {[get](const RunConfig& c) { return FormatDouble(get(c)); },
          [set](RunConfig& c, const std::string& v) { set(c, ParseReal(v)); }};
}

Key Bool(std::function<bool(const RunConfig&)> get,
         std::function<void(RunConfig&, bool)> set) {
  return {[get](const RunConfig& c) { return BoolText(get(c)); },
          [set](RunConfig& c, const std::string& v) { set(c, ParseBool(v)); }};
}

Key Text(std::function<std::string(const RunConfig&)> get,
         std::function<void(RunConfig&, const std::string&)> set) {
  return {std::move(get), std::move(set)};
}

#define UF_INT(expr) \
  Int([](const RunConfig& c) { return static_cast<int64_t>(c.expr); }, \
      [](RunConfig& c, int64_t v) { c.expr = static_cast<decltype(c.expr)>(v); })
#define UF_REAL(expr) \
  Real([](const RunConfig& c) { return c.expr; }, [](RunConfig& c, double v) { c.expr = v; })
#define UF_BOOL(expr) \
  Bool([](const RunConfig& c) { return c.expr; }, [](RunConfig& c, bool v) { c.expr = v; })
#define UF_PATH(expr)                                         \
  Text([](const RunConfig& c) { return c.expr; },             \
       [](RunConfig& c, const std::string& v) { c.expr = v; })

void AddTrainKeys(std::map<std::string, Key>* keys, const std::string& prefix,
                  TrainConfig RunConfig::*member) {
  auto ref = [member](RunConfig& c) -> TrainConfig& { return c.*member; };
  auto cref = [member](const RunConfig& c) -> const TrainConfig& { return c.*member; };
  auto add_int = [&](const std::string& name, auto field) {
    (*keys)[prefix + name] = Int([cref, field](const RunConfig& c) { return static_cast<int64_t>(cref(c).*field); },
                                 [ref, field](RunConfig& c, int64_t v) { ref(c).*field = static_cast<std::remove_reference_t<decltype(ref(c).*field)>>(v); });
  };
  add_int("steps", &TrainConfig::steps);
  add_int("batch_size", &TrainConfig::batch_size);
  add_int("n_buckets", &TrainConfig::n_buckets);
  add_int("upper_bound", &TrainConfig::upper_bound);
  (*keys)[prefix + "smoothing"] =
      Real([cref](const RunConfig& c) { return cref(c).smoothing; },
           [ref](RunConfig& c, double v) { ref(c).smoothing = v; });
  (*keys)[prefix + "schedule.start_step"] =
      Int([cref](const RunConfig& c) { return cref(c).schedule.start_step; },
          [ref](RunConfig& c, int64_t v) { ref(c).schedule.start_step = v; });
  (*keys)[prefix + "schedule.decay_steps"] =
      Int([cref](const RunConfig& c) { return cref(c).schedule.decay_steps; },
          [ref](RunConfig& c, int64_t v) { ref(c).schedule.decay_steps = v; });
  auto add_adam = [&](const std::string& name, double AdamConfig::*field) {
    (*keys)[prefix + "adam." + name] =
        Real([cref, field](const RunConfig& c) { return cref(c).adam.*field; },
             [ref, field](RunConfig& c, double v) { ref(c).adam.*field = v; });
  };
  add_adam("learning_rate", &AdamConfig::learning_rate);
  add_adam("beta1", &AdamConfig::beta1);
  add_adam("beta2", &AdamConfig::beta2);
  add_adam("epsilon", &AdamConfig::epsilon);
  add_adam("clip_norm", &AdamConfig::clip_norm);
  (*keys)[prefix + "aux_trainable"] =
      Bool([cref](const RunConfig& c) { return cref(c).aux_trainable; },
           [ref](RunConfig& c, bool v) { ref(c).aux_trainable = v; });
  (*keys)[prefix + "sar_training"] =
      Bool([cref](const RunConfig& c) { return cref(c).sar_training; },
           [ref](RunConfig& c, bool v) { ref(c).sar_training = v; });
}

const std::map<std::string, Key>& Registry() {
  static const std::map<std::string, Key> kKeys = [] {
    std::map<std::string, Key> k;
    k["paths.corpus"] = UF_PATH(paths.corpus);
    k["paths.lexicon"] = UF_PATH(paths.lexicon);
    k["paths.embeddings"] = UF_PATH(paths.embeddings);
    k["paths.aux_checkpoint"] = UF_PATH(paths.aux_checkpoint);
    k["paths.checkpoint"] = UF_PATH(paths.checkpoint);
    k["paths.resume"] = UF_PATH(paths.resume);
    k["paths.out"] = UF_PATH(paths.out);
    k["seed"] = Int([](const RunConfig& c) { return static_cast<int64_t>(c.seed); },
                    [](RunConfig& c, int64_t v) {
                      if (v < 0) throw std::invalid_argument("seed must be >= 0");
                      c.seed = static_cast<uint64_t>(v);
                    });
    k["vocab.pos_tagset_size"] = UF_INT(pos_tagset_size);
    k["synth.pos_tags"] = UF_INT(synth_pos_tags);
    k["model.embedding_dim"] = UF_INT(model.embedding_dim);
    k["model.use_aux"] = UF_BOOL(model.use_aux);
    k["aux.variant"] = Text(
        [](const RunConfig& c) { return c.model.aux.ToJson().at("variant").get<std::string>(); },
        [](RunConfig& c, const std::string& v) {
          auto j = c.model.aux.ToJson();
          j["variant"] = v;
          c.model.aux = AuxConfig::FromJson(j);
        });
    k["aux.tasks"] = Text(
        [](const RunConfig& c) {
          std::string s;
          if (c.model.aux.cws) s = "cws";
          if (c.model.aux.pos) s += s.empty() ? "pos" : ",pos";
          return s;
        },
        [](RunConfig& c, const std::string& v) {
          c.model.aux.cws = c.model.aux.pos = false;
          for (const auto& t : Split(v, ',')) {
            const std::string task = Trim(t);
            if (task == "cws") {
              c.model.aux.cws = true;
            } else if (task == "pos") {
              c.model.aux.pos = true;
            } else {
              throw std::invalid_argument("unknown aux task '" + task + "' (cws,pos)");
            }
          }
        });
    k["aux.dcnn.layers"] = UF_INT(model.aux.dcnn_layers);
    k["aux.dcnn.kernel"] = UF_INT(model.aux.dcnn_kernel);
    k["aux.dcnn.filters"] = UF_INT(model.aux.dcnn_filters);
    k["aux.dcnn.dilations"] = Text(
        [](const RunConfig& c) {
          std::string s;
          for (int d : c.model.aux.dcnn_dilations) s += (s.empty() ? "" : ",") + std::to_string(d);
          return s;
        },
        [](RunConfig& c, const std::string& v) {
          c.model.aux.dcnn_dilations.clear();
          for (const auto& d : Split(v, ',')) {
            c.model.aux.dcnn_dilations.push_back(static_cast<int>(ParseInt(Trim(d))));
          }
        });
    k["aux.te.lstm_units"] = UF_INT(model.aux.te_lstm_units);
    k["aux.te.attn_blocks"] = UF_INT(model.aux.te_attn_blocks);
    k["aux.te.heads"] = UF_INT(model.aux.te_heads);
    k["aux.te.positional_embedding"] = UF_BOOL(model.aux.te_positional);
    k["aux.te.max_positions"] = UF_INT(model.aux.te_max_positions);
    auto head_key = [](TagHead AuxConfig::*field, const char* json_name) {
      return Text(
          [field](const RunConfig& c) {
            return std::string(c.model.aux.*field == TagHead::kCrf ? "crf" : "softmax");
          },
          [field, json_name](RunConfig& c, const std::string& v) {
            auto j = c.model.aux.ToJson();
            j[json_name] = v;
            c.model.aux.*field = AuxConfig::FromJson(j).*field;
          });
    };
    k["aux.cws_head"] = head_key(&AuxConfig::cws_head, "cws_head");
    k["aux.pos_head"] = head_key(&AuxConfig::pos_head, "pos_head");
    k["aux.dropout"] = UF_REAL(model.aux.dropout);
    k["main.enc_lstm_units"] = UF_INT(model.main.enc_lstm_units);
    k["main.enc_proj"] = UF_INT(model.main.enc_proj);
    k["main.enc_attn_blocks"] = UF_INT(model.main.enc_attn_blocks);
    k["main.enc_positional"] = UF_BOOL(model.main.enc_positional);
    k["main.heads"] = UF_INT(model.main.heads);
    k["main.dec_lstm_units"] = UF_INT(model.main.dec_lstm_units);
    k["main.dec_attn_blocks"] = UF_INT(model.main.dec_attn_blocks);
    k["main.label_embedding_dim"] = UF_INT(model.main.label_embedding_dim);
    k["main.gmm.mixtures"] = UF_INT(model.main.gmm.mixtures);
    k["main.gmm.sigma_min"] = UF_REAL(model.main.gmm.sigma_min);
    k["main.gmm.normalized"] = UF_BOOL(model.main.gmm.normalized);
    k["main.postnet.layers"] = UF_INT(model.main.postnet_layers);
    k["main.postnet.kernel"] = UF_INT(model.main.postnet_kernel);
    k["main.postnet.filters"] = UF_INT(model.main.postnet_filters);
    k["main.dropout"] = UF_REAL(model.main.dropout);
    AddTrainKeys(&k, "aux_train.", &RunConfig::aux_train);
    AddTrainKeys(&k, "train.", &RunConfig::train);
    k["decode.mode"] = Text(
        [](const RunConfig& c) { return std::string(DecodeModeName(c.decode.mode)); },
        [](RunConfig& c, const std::string& v) { c.decode.mode = ParseDecodeMode(v); });
    k["decode.max_steps"] = UF_INT(decode.max_steps);
    k["decode.stop_threshold"] = UF_REAL(decode.stop_threshold);
    k["decode.apply_postnet"] = UF_BOOL(decode.apply_postnet);
    return k;
  }();
  return kKeys;
}

#undef UF_INT
#undef UF_REAL
#undef UF_BOOL
#undef UF_PATH

}  // namespace

TrainConfig RunConfig::DefaultAuxTrain() {
  TrainConfig c;
  c.n_buckets = 11;
  c.upper_bound = 200;
  return c;
}

TrainConfig RunConfig::DefaultTrain() { return TrainConfig{}; }

void RunConfig::Set(const std::string& key, const std::string& value) {
  const auto& keys = Registry();
  auto it = keys.find(key);
  if (it == keys.end()) throw std::invalid_argument("unknown config key '" + key + "'");
  try {
    it->second.set(*this, value);
  } catch (const std::exception& e) {
    throw std::invalid_argument(key + ": " + e.what());
  }
}

std::string RunConfig::Get(const std::string& key) const {
  const auto& keys = Registry();
  auto it = keys.find(key);
  if (it == keys.end()) throw std::invalid_argument("unknown config key '" + key + "'");
  return it->second.get(*this);
}

void RunConfig::ApplyText(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(source + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
    }
    try {
      Set(Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
    } catch (const std::exception& e) {
      throw std::invalid_argument(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::map<std::string, std::string> RunConfig::Echo() const {
  std::map<std::string, std::string> out;
  for (const auto& [key, k] : Registry()) {
    if (!key.starts_with("paths.")) out[key] = k.get(*this);
  }
  return out;
}

std::string RunConfig::EchoText() const {
  std::string out;
  for (const auto& [k, v] : Echo()) out += k + " = " + v + "\n";
  return out;
}

std::vector<std::string> RunConfig::Keys() {
  std::vector<std::string> out;
  for (const auto& [key, k] : Registry()) out.push_back(key);
  return out;
}

}  // namespace unifront
