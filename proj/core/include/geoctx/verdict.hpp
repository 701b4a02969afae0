#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace geoctx {

enum class Status { pass, fail, inconclusive };

const char* to_string(Status s);

// A concrete counterexample. `fields` is an ordered list of key/value pairs
// that name arrows, objects and sections by declared id; the report layer
// serializes it verbatim.
struct Witness {
  std::string summary;
  std::vector<std::pair<std::string, std::string>> fields;

  Witness& with(std::string key, std::string value) {
    fields.emplace_back(std::move(key), std::move(value));
    return *this;
  }
  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : fields)
      if (k == key) return &v;
    return nullptr;
  }
};

struct Verdict {
  Status status = Status::pass;
  std::optional<Witness> witness;

  static Verdict pass() { return {}; }
  static Verdict fail(Witness w) { return {Status::fail, std::move(w)}; }
  static Verdict inconclusive(Witness w) { return {Status::inconclusive, std::move(w)}; }

  bool passed() const { return status == Status::pass; }
  explicit operator bool() const { return passed(); }
};

}  // namespace geoctx
