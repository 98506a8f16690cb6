// Copyright 2026 The xlmatch Authors.
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

#include "xlmatch/model/serialization.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "xlmatch/errors.h"

namespace xlmatch {
namespace {

using Json = nlohmann::ordered_json;

constexpr char kMagic[] = "xlmatch-model 1";

Json ConfigToJson(const ModelConfig &c) {
  return Json{{"use_conv", c.use_conv},
              {"use_lstm", c.use_lstm},
              {"use_bilstm", c.use_bilstm},
              {"kernel_sizes", c.kernel_sizes},
              {"conv_filters", c.conv_filters},
              {"hidden_size", c.hidden_size},
              {"mlp_hidden", c.mlp_hidden},
              {"dropout_rate", c.dropout_rate},
              {"absolute_difference", c.absolute_difference},
              {"max_len", c.max_len},
              {"embed_dim", c.embed_dim},
              {"train_embeddings", c.train_embeddings},
              {"learning_rate", c.learning_rate},
              {"batch_size", c.batch_size},
              {"epochs", c.epochs},
              {"patience", c.patience},
              {"seed", c.seed}};
}

ModelConfig ConfigFromJson(const Json &j) {
  ModelConfig c;
  j.at("use_conv").get_to(c.use_conv);
  j.at("use_lstm").get_to(c.use_lstm);
  j.at("use_bilstm").get_to(c.use_bilstm);
  j.at("kernel_sizes").get_to(c.kernel_sizes);
  j.at("conv_filters").get_to(c.conv_filters);
  j.at("hidden_size").get_to(c.hidden_size);
  j.at("mlp_hidden").get_to(c.mlp_hidden);
  j.at("dropout_rate").get_to(c.dropout_rate);
  j.at("absolute_difference").get_to(c.absolute_difference);
  j.at("max_len").get_to(c.max_len);
  j.at("embed_dim").get_to(c.embed_dim);
  j.at("train_embeddings").get_to(c.train_embeddings);
  j.at("learning_rate").get_to(c.learning_rate);
  j.at("batch_size").get_to(c.batch_size);
  j.at("epochs").get_to(c.epochs);
  j.at("patience").get_to(c.patience);
  j.at("seed").get_to(c.seed);
  return c;
}

void AppendDoubles(std::string &out, const Eigen::MatrixXd &m) {
  const size_t offset = out.size();
  out.resize(offset + m.size() * sizeof(double));
  char *dst = out.data() + offset;
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    uint64_t bits = std::bit_cast<uint64_t>(m.data()[i]);
    for (int b = 0; b < 8; ++b) *dst++ = static_cast<char>((bits >> (8 * b)) & 0xff);
  }
}

void ReadDoubles(std::string_view in, Eigen::MatrixXd &m) {
  const unsigned char *src = reinterpret_cast<const unsigned char *>(in.data());
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<uint64_t>(*src++) << (8 * b);
    m.data()[i] = std::bit_cast<double>(bits);
  }
}

}  // namespace

void SaveMatcher(const Matcher &matcher, const std::string &path) {
  Json header;
  header["config"] = ConfigToJson(matcher.config());
  header["vocabulary"] = matcher.vocabulary().tokens();
  header["explicit_fixes"] = matcher.explicit_fixes();
  const TrainingLog &log = matcher.training_log();
  header["training_log"] = Json{{"train_loss", log.train_loss},
                                {"val_loss", log.val_loss},
                                {"best_epoch", log.best_epoch}};
  Json params = Json::array();
  std::string payload;
  for (const Parameter &p : matcher.parameters().all()) {
    params.push_back(Json{{"name", p.name},
                          {"rows", p.value.rows()},
                          {"cols", p.value.cols()}});
    AppendDoubles(payload, p.value);
  }
  header["parameters"] = std::move(params);
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << kMagic << '\n' << text.size() << '\n' << text;
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError("failed writing " + path);
}

Matcher LoadMatcher(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open model file " + path);
  const std::string data((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  std::string_view rest(data);

  auto next_line = [&](const char *what) {
    const size_t end = rest.find('\n');
    if (end == std::string_view::npos) {
      throw LoadError(path + ": truncated " + what);
    }
    std::string_view line = rest.substr(0, end);
    rest.remove_prefix(end + 1);
    return line;
  };
  if (next_line("magic line") != kMagic) {
    throw LoadError(path + ": not an xlmatch model file");
  }
  const std::string length_text(next_line("header length"));
  size_t header_length = 0;
  try {
    size_t used = 0;
    header_length = std::stoull(length_text, &used);
    if (used != length_text.size()) throw std::invalid_argument("junk");
  } catch (const std::exception &) {
    throw LoadError(path + ": bad header length");
  }
  if (header_length > rest.size()) throw LoadError(path + ": truncated header");

  Json header;
  try {
    header = Json::parse(rest.substr(0, header_length));
  } catch (const nlohmann::json::exception &e) {
    throw LoadError(path + ": malformed header: " + e.what());
  }
  rest.remove_prefix(header_length);

  try {
    const ModelConfig config = ConfigFromJson(header.at("config"));
    Vocabulary vocab;
    for (const std::string &token :
         header.at("vocabulary").get<std::vector<std::string>>()) {
      vocab.Add(token);
    }
    const auto fixes =
        header.at("explicit_fixes").get<std::map<std::string, std::string>>();
    Matcher matcher(config, vocab,
                    Eigen::MatrixXd::Zero(config.embed_dim, vocab.rows()), fixes);

    const Json &descriptors = header.at("parameters");
    std::vector<Parameter> &params = matcher.parameters().all();
    if (descriptors.size() != params.size()) {
      throw LoadError(path + ": parameter count does not match the config");
    }
    for (size_t i = 0; i < params.size(); ++i) {
      const Json &d = descriptors[i];
      Parameter &p = params[i];
      if (d.at("name").get<std::string>() != p.name ||
          d.at("rows").get<Eigen::Index>() != p.value.rows() ||
          d.at("cols").get<Eigen::Index>() != p.value.cols()) {
        throw LoadError(path + ": parameter " + d.at("name").get<std::string>() +
                        " does not match the config");
      }
      const size_t bytes = static_cast<size_t>(p.value.size()) * sizeof(double);
      if (rest.size() < bytes) throw LoadError(path + ": truncated weights");
      ReadDoubles(rest.substr(0, bytes), p.value);
      rest.remove_prefix(bytes);
    }
    if (!rest.empty()) throw LoadError(path + ": trailing data after weights");

    const Json &log_json = header.at("training_log");
    TrainingLog &log = matcher.training_log();
    log_json.at("train_loss").get_to(log.train_loss);
    log_json.at("val_loss").get_to(log.val_loss);
    log_json.at("best_epoch").get_to(log.best_epoch);
    return matcher;
  } catch (const nlohmann::json::exception &e) {
    throw LoadError(path + ": malformed header: " + e.what());
  } catch (const ConfigError &e) {
    throw LoadError(path + ": invalid model config: " + e.what());
  }
}

}  // namespace xlmatch
