#include "dlambda/vartable.hpp"

#include "dlambda/errors.hpp"

namespace dlambda {

VarTable::VarTable(std::vector<std::string> coordinates, std::vector<std::string> parameters)
    : coordinate_count_(coordinates.size()) {
  names_ = std::move(coordinates);
  names_.insert(names_.end(), std::make_move_iterator(parameters.begin()),
                std::make_move_iterator(parameters.end()));
  if (names_.size() > kMaxVariables)
    throw Error("variable table holds at most " + std::to_string(kMaxVariables) + " names");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const auto& n = names_[i];
    if (n.empty()) throw Error("empty variable name");
    if (!lookup_.emplace(n, i).second) throw Error("duplicate variable name '" + n + "'");
  }
}

std::shared_ptr<const VarTable> VarTable::make(std::vector<std::string> coordinates,
                                               std::vector<std::string> parameters) {
  return std::make_shared<const VarTable>(std::move(coordinates), std::move(parameters));
}

std::optional<std::size_t> VarTable::find(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t VarTable::index(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw UnknownVariable(std::string(name));
}

}  // namespace dlambda
