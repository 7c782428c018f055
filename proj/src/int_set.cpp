#include "isoperim/int_set.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <stdexcept>

namespace isoperim {

IntSet::IntSet(std::vector<std::uint64_t> elements) : elements_(std::move(elements)) {
  for (std::size_t i = 1; i < elements_.size(); ++i) {
    if (elements_[i - 1] >= elements_[i]) {
      throw std::invalid_argument("IntSet elements must be strictly increasing");
    }
  }
  build_mask();
}

IntSet IntSet::from_unsorted(std::vector<std::uint64_t> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return IntSet(std::move(elements));
}

IntSet IntSet::interval(std::uint64_t l, std::uint64_t k) {
  std::vector<std::uint64_t> e;
  for (std::uint64_t z = l; z <= k && l <= k; ++z) e.push_back(z);
  return IntSet(std::move(e));
}

IntSet IntSet::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
    throw std::invalid_argument("set literal must look like {0,1,2}");
  }
  text = trim(text.substr(1, text.size() - 2));
  std::vector<std::uint64_t> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (item.empty() || item.front() == '-') {
      throw std::invalid_argument("set literal element '" + std::string(item) +
                                  "' is not a nonnegative integer");
    }
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size()) {
      throw std::invalid_argument("set literal element '" + std::string(item) +
                                  "' is not a nonnegative integer");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
    if (trim(text).empty()) throw std::invalid_argument("trailing comma in set literal");
  }
  return IntSet(std::move(out));
}

std::string IntSet::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(elements_[i]);
  }
  return s + "}";
}

void IntSet::build_mask() {
  words_.assign(elements_.empty() ? 0 : elements_.back() / 64 + 1, 0);
  for (auto z : elements_) words_[z / 64] |= std::uint64_t{1} << (z % 64);
}

IntSet boundary(const IntSet& a) {
  std::vector<std::uint64_t> out;
  for (auto z : a.elements()) {
    const bool interior = z > 0 && a.contains(z - 1) && a.contains(z + 1);
    if (!interior) out.push_back(z);
  }
  return IntSet(std::move(out));
}

std::uint64_t volume(const IntSet& a) {
  std::uint64_t v = 0;
  for (auto z : a.elements()) v += z;
  return v;
}

std::uint64_t perimeter(const IntSet& a) { return volume(boundary(a)); }

std::uint64_t complement_perimeter(const IntSet& a) {
  if (a.empty()) return 0;
  std::uint64_t per = 0;
  for (std::uint64_t z = 1; z <= a.max() + 1; ++z) {
    if (a.contains(z)) continue;
    if (a.contains(z - 1) || a.contains(z + 1)) per += z;
  }
  return per;
}

namespace {

// Sum of the positions of set bits in `bits`, offset by `base`.
std::uint64_t weighted_popcount(std::uint64_t bits, std::uint64_t base) {
  std::uint64_t s = 0;
  while (bits) {
    s += base + static_cast<std::uint64_t>(std::countr_zero(bits));
    bits &= bits - 1;
  }
  return s;
}

// Word w of the mask shifted so that bit z holds membership of z-1 (left)
// or z+1 (right).  `words` is treated as zero-extended.
std::uint64_t word_at(std::span<const std::uint64_t> words, std::size_t w) {
  return w < words.size() ? words[w] : 0;
}

}  // namespace

std::uint64_t perimeter_bitmask(const IntSet& a) {
  const auto words = a.words();
  std::uint64_t per = 0;
  for (std::size_t w = 0; w < words.size(); ++w) {
    const std::uint64_t cur = words[w];
    const std::uint64_t pred = (cur << 1) | (w ? words[w - 1] >> 63 : 0);
    const std::uint64_t succ = (cur >> 1) | (word_at(words, w + 1) << 63);
    per += weighted_popcount(cur & ~(pred & succ), 64 * w);
  }
  return per;
}

std::uint64_t complement_perimeter_bitmask(const IntSet& a) {
  if (a.empty()) return 0;
  const auto words = a.words();
  // Window [0, max+1] may spill into one extra word.
  const std::size_t nw = (a.max() + 1) / 64 + 1;
  std::uint64_t per = 0;
  for (std::size_t w = 0; w < nw; ++w) {
    const std::uint64_t cur = word_at(words, w);
    const std::uint64_t pred = (cur << 1) | (w ? word_at(words, w - 1) >> 63 : 0);
    const std::uint64_t succ = (cur >> 1) | (word_at(words, w + 1) << 63);
    std::uint64_t hole = ~cur & (pred | succ);
    if (w == nw - 1) {
      const unsigned top = static_cast<unsigned>((a.max() + 1) % 64);
      hole &= top == 63 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (top + 1)) - 1);
    }
    per += weighted_popcount(hole, 64 * w);
  }
  return per;
}

}  // namespace isoperim
