// Copyright 2026 The Brandnet Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace brandnet {

using LabelId = std::uint32_t;

// (type, brand, logo) label triple; logo is the finest level.
struct LabelTriple {
  LabelId type_id = 0;
  LabelId brand_id = 0;
  LabelId logo_id = 0;

  friend auto operator<=>(const LabelTriple&, const LabelTriple&) = default;
};

enum class LabelLevel { kType, kBrand, kLogo };

const char* level_name(LabelLevel level);
LabelId label_at(const LabelTriple& label, LabelLevel level);

// Three-level tree logo -> brand -> type. Every logo has exactly one brand
// and every brand exactly one type, so the structure is a forest by
// construction; add() rejects any entry that would give a node a second
// parent.
class Taxonomy {
 public:
  // Throws std::invalid_argument when logo or brand already has a
  // different parent.
  void add(LabelId logo_id, LabelId brand_id, LabelId type_id);

  void set_logo_name(LabelId id, std::string name) { logo_names_[id] = std::move(name); }
  void set_brand_name(LabelId id, std::string name) { brand_names_[id] = std::move(name); }
  void set_type_name(LabelId id, std::string name) { type_names_[id] = std::move(name); }

  bool has_logo(LabelId logo_id) const { return logo_to_brand_.contains(logo_id); }
  std::optional<LabelId> brand_of(LabelId logo_id) const;
  std::optional<LabelId> type_of_brand(LabelId brand_id) const;

  // Full triple for a logo; nullopt when the logo is unknown.
  std::optional<LabelTriple> resolve(LabelId logo_id) const;
  bool consistent(const LabelTriple& label) const;

  std::size_t num_logos() const { return logo_to_brand_.size(); }
  std::size_t num_brands() const { return brand_to_type_.size(); }
  std::size_t num_types() const;

  const std::map<LabelId, LabelId>& logo_to_brand() const { return logo_to_brand_; }
  const std::map<LabelId, LabelId>& brand_to_type() const { return brand_to_type_; }

  std::optional<std::string> logo_name(LabelId id) const;
  std::optional<std::string> brand_name(LabelId id) const;
  std::optional<std::string> type_name(LabelId id) const;

 private:
  std::map<LabelId, LabelId> logo_to_brand_;
  std::map<LabelId, LabelId> brand_to_type_;
  std::map<LabelId, std::string> logo_names_;
  std::map<LabelId, std::string> brand_names_;
  std::map<LabelId, std::string> type_names_;
};

// Taxonomy file: one logo per line, comma separated
//   logo_id,brand_id,type_id[,logo_name[,brand_name[,type_name]]]
// Blank lines and lines starting with '#' are ignored.
Taxonomy load_taxonomy(const std::filesystem::path& path);
void save_taxonomy(const Taxonomy& taxonomy, const std::filesystem::path& path);

}  // namespace brandnet
