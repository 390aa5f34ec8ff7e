// Copyright 2026 The gwasverify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gwv/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "gwv/error.hpp"

namespace gwv {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  for (;;) {
    size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

CaseControlDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIo, "cannot open dataset file: " + path);

  CaseControlDataset ds;
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::kParse,
          "empty dataset file: " + path);
  strip_cr(line);
  std::vector<std::string> header = split_tabs(line);
  require(header.size() >= 3, ErrorCode::kParse,
          "dataset header needs sample_id, label and at least one SNP");
  require(header[0] == "sample_id" && header[1] == "label", ErrorCode::kParse,
          "dataset header must start with sample_id<TAB>label");
  ds.snp_ids.assign(header.begin() + 2, header.end());

  size_t m = ds.snp_ids.size();
  size_t row = 1;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    std::vector<std::string> fields = split_tabs(line);
    require(fields.size() == m + 2, ErrorCode::kParse,
            "row " + std::to_string(row) + ": expected " +
                std::to_string(m + 2) + " fields, got " +
                std::to_string(fields.size()));
    ds.sample_ids.push_back(fields[0]);
    if (fields[1] == "case") {
      ds.labels.push_back(Label::kCase);
    } else if (fields[1] == "control") {
      ds.labels.push_back(Label::kControl);
    } else {
      fail(ErrorCode::kParse,
           "row " + std::to_string(row) + ": label must be case or control");
    }
    for (size_t j = 0; j < m; ++j) {
      const std::string& tok = fields[2 + j];
      require(tok.size() == 1 && tok[0] >= '0' && tok[0] <= '2',
              ErrorCode::kDomain,
              "row " + std::to_string(row) + ": genotype token '" + tok +
                  "' outside {0,1,2}");
      ds.genotypes.push_back(static_cast<uint8_t>(tok[0] - '0'));
    }
    ++row;
  }
  ds.validate();
  return ds;
}

void save_dataset(const CaseControlDataset& dataset, const std::string& path) {
  std::ostringstream out;
  out << "sample_id\tlabel";
  for (const std::string& id : dataset.snp_ids) out << '\t' << id;
  out << '\n';
  for (size_t i = 0; i < dataset.n(); ++i) {
    out << dataset.sample_ids[i] << '\t'
        << (dataset.labels[i] == Label::kCase ? "case" : "control");
    for (size_t j = 0; j < dataset.m(); ++j) {
      out << '\t' << char('0' + dataset.geno(i, j));
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

KeyValues read_key_values(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIo, "cannot open file: " + path);
  KeyValues pairs;
  std::string line;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::kParse,
            "expected key=value, got: " + line);
    pairs.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return pairs;
}

void write_key_values(const KeyValues& pairs, const std::string& path) {
  std::ostringstream out;
  for (const auto& [key, value] : pairs) out << key << '=' << value << '\n';
  write_text_file(path, out.str());
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::kIo, "cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::kIo, "cannot write file: " + path);
  out << content;
  require(out.good(), ErrorCode::kIo, "write failed: " + path);
}

}  // namespace gwv
