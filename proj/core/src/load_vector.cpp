#include "rbb/load_vector.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace rbb {

LoadVector::LoadVector(std::vector<Load> loads) : loads_(std::move(loads)) {
  if (loads_.empty()) throw std::invalid_argument("LoadVector: need at least one bin");
  recount();
}

void LoadVector::recount() {
  Load total = 0;
  for (Load x : loads_) {
    if (x < 0) throw std::invalid_argument("LoadVector: negative load");
    if (x > kMaxBalls || total > kMaxBalls - x) {
      throw std::invalid_argument("LoadVector: ball count exceeds 2^32 - 1");
    }
    total += x;
  }
  total_ = total;
}

LoadVector LoadVector::zeros(std::size_t n) { return LoadVector(std::vector<Load>(n, 0)); }

Load LoadVector::max_load() const noexcept {
  return loads_.empty() ? 0 : *std::max_element(loads_.begin(), loads_.end());
}

std::size_t LoadVector::empty_bins() const noexcept {
  return static_cast<std::size_t>(std::count(loads_.begin(), loads_.end(), Load{0}));
}

std::string LoadVector::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < loads_.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(loads_[i]);
  }
  return out;
}

LoadVector LoadVector::parse(const std::string& text) {
  std::vector<Load> loads;
  const char* p = text.data();
  const char* end = p + text.size();
  while (p < end) {
    if (*p == ',' || *p == ' ' || *p == '\t' || *p == '\n' || *p == '\r' || *p == '(' ||
        *p == ')') {
      ++p;
      continue;
    }
    Load value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc()) {
      throw std::invalid_argument("LoadVector::parse: bad token in '" + text + "'");
    }
    loads.push_back(value);
    p = next;
  }
  return LoadVector(std::move(loads));
}

LoadVector InitialConfig::build(std::size_t n, Load m) const {
  if (n == 0) throw std::invalid_argument("InitialConfig: n must be positive");
  if (m < 0 || m > kMaxBalls) throw std::invalid_argument("InitialConfig: m out of range");
  std::vector<Load> loads(n, 0);
  switch (kind) {
    case InitKind::kUniform: {
      const Load base = m / static_cast<Load>(n);
      const auto rem = static_cast<std::size_t>(m % static_cast<Load>(n));
      for (std::size_t i = 0; i < n; ++i) loads[i] = base + (i < rem ? 1 : 0);
      break;
    }
    case InitKind::kSingleBin:
      loads[0] = m;
      break;
    case InitKind::kExplicit: {
      if (!explicit_loads) throw std::invalid_argument("InitialConfig: explicit loads missing");
      if (explicit_loads->size() != n) {
        throw std::invalid_argument("InitialConfig: explicit loads have " +
                                    std::to_string(explicit_loads->size()) + " bins, expected " +
                                    std::to_string(n));
      }
      const Load sum = std::accumulate(explicit_loads->begin(), explicit_loads->end(), Load{0});
      if (sum != m) {
        throw std::invalid_argument("InitialConfig: explicit loads sum to " + std::to_string(sum) +
                                    ", expected m = " + std::to_string(m));
      }
      loads = *explicit_loads;
      break;
    }
  }
  return LoadVector(std::move(loads));
}

}  // namespace rbb
