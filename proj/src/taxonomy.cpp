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

#include "brandnet/taxonomy.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

#include "brandnet/error.hpp"
#include "text_io.hpp"

namespace brandnet {

const char* level_name(LabelLevel level) {
  switch (level) {
    case LabelLevel::kType:
      return "type";
    case LabelLevel::kBrand:
      return "brand";
    case LabelLevel::kLogo:
      return "logo";
  }
  return "?";
}

LabelId label_at(const LabelTriple& label, LabelLevel level) {
  switch (level) {
    case LabelLevel::kType:
      return label.type_id;
    case LabelLevel::kBrand:
      return label.brand_id;
    case LabelLevel::kLogo:
      return label.logo_id;
  }
  return label.logo_id;
}

void Taxonomy::add(LabelId logo_id, LabelId brand_id, LabelId type_id) {
  if (auto it = logo_to_brand_.find(logo_id); it != logo_to_brand_.end() && it->second != brand_id) {
    throw std::invalid_argument("taxonomy: logo " + std::to_string(logo_id) +
                                " already belongs to brand " + std::to_string(it->second));
  }
  if (auto it = brand_to_type_.find(brand_id); it != brand_to_type_.end() && it->second != type_id) {
    throw std::invalid_argument("taxonomy: brand " + std::to_string(brand_id) +
                                " already belongs to type " + std::to_string(it->second));
  }
  logo_to_brand_[logo_id] = brand_id;
  brand_to_type_[brand_id] = type_id;
}

std::optional<LabelId> Taxonomy::brand_of(LabelId logo_id) const {
  auto it = logo_to_brand_.find(logo_id);
  if (it == logo_to_brand_.end()) return std::nullopt;
  return it->second;
}

std::optional<LabelId> Taxonomy::type_of_brand(LabelId brand_id) const {
  auto it = brand_to_type_.find(brand_id);
  if (it == brand_to_type_.end()) return std::nullopt;
  return it->second;
}

std::optional<LabelTriple> Taxonomy::resolve(LabelId logo_id) const {
  const auto brand = brand_of(logo_id);
  if (!brand) return std::nullopt;
  const auto type = type_of_brand(*brand);
  if (!type) return std::nullopt;
  return LabelTriple{*type, *brand, logo_id};
}

bool Taxonomy::consistent(const LabelTriple& label) const {
  const auto resolved = resolve(label.logo_id);
  return resolved && *resolved == label;
}

std::size_t Taxonomy::num_types() const {
  std::set<LabelId> types;
  for (const auto& [brand, type] : brand_to_type_) types.insert(type);
  return types.size();
}

namespace {
std::optional<std::string> lookup(const std::map<LabelId, std::string>& names, LabelId id) {
  auto it = names.find(id);
  if (it == names.end()) return std::nullopt;
  return it->second;
}
}  // namespace

std::optional<std::string> Taxonomy::logo_name(LabelId id) const { return lookup(logo_names_, id); }
std::optional<std::string> Taxonomy::brand_name(LabelId id) const { return lookup(brand_names_, id); }
std::optional<std::string> Taxonomy::type_name(LabelId id) const { return lookup(type_names_, id); }

Taxonomy load_taxonomy(const std::filesystem::path& path) {
  const std::string contents = text::read_file(path);
  Taxonomy taxonomy;
  std::size_t line_no = 0;
  for (std::string_view raw : text::lines(contents)) {
    ++line_no;
    const std::string_view line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = text::split(line, ',');
    auto fail = [&](const std::string& why) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() < 3 || fields.size() > 6) fail("expected 3 to 6 fields");
    LabelId ids[3];
    for (int i = 0; i < 3; ++i) {
      const auto v = text::parse_int(fields[i]);
      if (!v || *v < 0 || *v > 0xFFFFFFFFll) fail("invalid id '" + std::string(fields[i]) + "'");
      ids[i] = static_cast<LabelId>(*v);
    }
    try {
      taxonomy.add(ids[0], ids[1], ids[2]);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    if (fields.size() > 3 && !fields[3].empty()) taxonomy.set_logo_name(ids[0], std::string(fields[3]));
    if (fields.size() > 4 && !fields[4].empty()) taxonomy.set_brand_name(ids[1], std::string(fields[4]));
    if (fields.size() > 5 && !fields[5].empty()) taxonomy.set_type_name(ids[2], std::string(fields[5]));
  }
  return taxonomy;
}

void save_taxonomy(const Taxonomy& taxonomy, const std::filesystem::path& path) {
  std::ostringstream out;
  out << "# logo_id,brand_id,type_id,logo_name,brand_name,type_name\n";
  for (const auto& [logo, brand] : taxonomy.logo_to_brand()) {
    const LabelId type = *taxonomy.type_of_brand(brand);
    out << logo << ',' << brand << ',' << type;
    const auto ln = taxonomy.logo_name(logo);
    const auto bn = taxonomy.brand_name(brand);
    const auto tn = taxonomy.type_name(type);
    if (ln || bn || tn) out << ',' << ln.value_or("") << ',' << bn.value_or("") << ',' << tn.value_or("");
    out << '\n';
  }
  text::write_file(path, out.str());
}

}  // namespace brandnet
