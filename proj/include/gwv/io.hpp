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

#ifndef GWV_IO_HPP_
#define GWV_IO_HPP_

#include <string>
#include <utility>
#include <vector>

#include "gwv/dataset.hpp"

namespace gwv {

// Genotype TSV format: a header row `sample_id<TAB>label<TAB><snp ids...>`
// followed by one row per sample with label in {case, control} and one
// {0,1,2} token per SNP. No missing values are accepted.
CaseControlDataset load_dataset(const std::string& path);
void save_dataset(const CaseControlDataset& dataset, const std::string& path);

// Flat `key=value` text files (one pair per line, `#` comments allowed).
// Order is preserved so emitted files are byte-stable.
using KeyValues = std::vector<std::pair<std::string, std::string>>;
KeyValues read_key_values(const std::string& path);
void write_key_values(const KeyValues& pairs, const std::string& path);

// Formats a double with enough digits to round-trip exactly.
std::string format_double(double value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace gwv

#endif  // GWV_IO_HPP_
