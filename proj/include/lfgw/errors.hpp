#ifndef LFGW_ERRORS_HPP
#define LFGW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lfgw {

struct DivergentPerpetuity : std::runtime_error {
  explicit DivergentPerpetuity(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct MomentDiverged : std::runtime_error {
  explicit MomentDiverged(const std::string& what) : std::runtime_error(what) {}
};

struct Unclassifiable : std::runtime_error {
  explicit Unclassifiable(const std::string& what) : std::runtime_error(what) {}
};

struct Inconclusive : std::runtime_error {
  explicit Inconclusive(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateDecomposition : std::runtime_error {
  explicit DegenerateDecomposition(const std::string& what) : std::runtime_error(what) {}
};

struct TailUnavailable : std::runtime_error {
  explicit TailUnavailable(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lfgw

#endif
