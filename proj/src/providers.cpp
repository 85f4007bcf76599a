#include <algorithm>

#include "sofic/construct.hpp"
#include "sofic/error.hpp"

namespace sofic {

SoficMap SoficGroupProvider::provide(const Window& W, const Rational&) const {
  return map_on(W.united(W.product(W)));
}

FiniteRegularProvider::FiniteRegularProvider(GroupPtr group, std::size_t cap) : group_(std::move(group)) {
  const auto* sum = dynamic_cast<const DirectSumGroup*>(group_.get());
  const auto* labels = sum != nullptr ? dynamic_cast<const LabelSpace*>(sum->index().get()) : nullptr;
  if (labels != nullptr && sum->base()->order() && dynamic_cast<const DirectSumGroup*>(sum->base().get()) == nullptr) {
    base_ = std::make_shared<FiniteRegularProvider>(sum->base(), cap);
    labels_ = labels->size();
    std::size_t order = 1;
    for (std::size_t j = 0; j < labels_; ++j) {
      if (order > cap / base_->order()) {
        fail(ErrorCode::CapOverflow, group_->describe() + " has more than " + std::to_string(cap) + " elements");
      }
      order *= base_->order();
    }
    order_ = order;
    digits_ = true;
    return;
  }
  const auto order = group_->order();
  if (!order) fail(ErrorCode::Contract, "regular representation needs a finite group, got " + group_->describe());
  if (*order > cap) {
    fail(ErrorCode::CapOverflow, group_->describe() + " has order " + std::to_string(*order) + ", above cap " +
                                     std::to_string(cap) + " (required cap " + std::to_string(*order) + ")");
  }
  elements_ = enumerate_group(*group_, cap);
  order_ = elements_.size();
  for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(encode(elements_[i]), static_cast<std::uint32_t>(i));
}

std::string FiniteRegularProvider::describe() const { return "finite_regular(" + group_->describe() + ")"; }

std::uint32_t FiniteRegularProvider::index_of(const GroupElement& g) const {
  group_->require(g, "regular representation argument");
  if (digits_) {
    const auto& s = *g.get_if<FiniteSupport>();
    std::uint64_t idx = 0;
    std::uint64_t weight = 1;
    std::size_t k = 0;
    for (std::size_t j = 0; j < labels_; ++j) {
      if (k < s.points.size() && point_label(s.points[k]) == j) {
        idx += weight * base_->index_of(s.values[k]);
        ++k;
      }
      weight *= base_->order();
    }
    return static_cast<std::uint32_t>(idx);
  }
  return index_.at(encode(g));
}

SoficMap FiniteRegularProvider::map_on(const Window& domain) const {
  if (!domain.group()->same_as(*group_)) {
    fail(ErrorCode::FamilyMismatch, "window lives in " + domain.group()->describe() + ", provider is for " +
                                        group_->describe());
  }
  std::vector<Permutation> perms;
  perms.reserve(domain.size());
  if (digits_) {
    const std::size_t b = base_->order();
    // mul[x * b + y] = index of e_x e_y in the base group.
    std::vector<std::uint32_t> mul(b * b);
    const auto& base_els = base_->elements_;
    for (std::size_t x = 0; x < b; ++x) {
      for (std::size_t y = 0; y < b; ++y) mul[x * b + y] = base_->index_of(base_->group()->mul(base_els[x], base_els[y]));
    }
    std::vector<std::uint32_t> digit(labels_);
    for (const auto& w : domain.elements()) {
      const std::uint32_t wi = index_of(w);
      std::uint32_t rest = wi;
      for (std::size_t j = 0; j < labels_; ++j) {
        digit[j] = static_cast<std::uint32_t>(rest % b);
        rest /= static_cast<std::uint32_t>(b);
      }
      std::vector<std::uint32_t> images(order_);
      for (std::size_t i = 0; i < order_; ++i) {
        std::size_t r = i;
        std::size_t weight = 1;
        std::size_t out = 0;
        for (std::size_t j = 0; j < labels_; ++j) {
          out += weight * mul[digit[j] * b + r % b];
          r /= b;
          weight *= b;
        }
        images[i] = static_cast<std::uint32_t>(out);
      }
      perms.push_back(Permutation::from_trusted(std::move(images)));
    }
  } else {
    for (const auto& w : domain.elements()) {
      std::vector<std::uint32_t> images(order_);
      for (std::size_t i = 0; i < order_; ++i) images[i] = index_of(group_->mul(w, elements_[i]));
      perms.push_back(Permutation::from_trusted(std::move(images)));
    }
  }
  return SoficMap(group_, order_, domain.elements(), std::move(perms));
}

QuotientChainProvider::QuotientChainProvider(GroupPtr group, std::int64_t modulus, std::size_t cap)
    : group_(std::move(group)), modulus_(modulus) {
  const auto* za = dynamic_cast<const FreeAbelianGroup*>(group_.get());
  if (za == nullptr) fail(ErrorCode::FamilyMismatch, "quotient chain needs Z^d, got " + group_->describe());
  if (modulus_ < 1) fail(ErrorCode::Contract, "quotient modulus must be positive");
  rank_ = za->rank();
  std::size_t carrier = 1;
  for (std::size_t k = 0; k < rank_; ++k) {
    if (carrier > cap / static_cast<std::size_t>(modulus_)) {
      fail(ErrorCode::CapOverflow, "quotient carrier " + std::to_string(modulus_) + "^" + std::to_string(rank_) +
                                       " exceeds cap " + std::to_string(cap));
    }
    carrier *= static_cast<std::size_t>(modulus_);
  }
  carrier_ = carrier;
}

std::string QuotientChainProvider::describe() const {
  return "quotient_chain(" + group_->describe() + ",mod " + std::to_string(modulus_) + ")";
}

SoficMap QuotientChainProvider::map_on(const Window& domain) const {
  if (!domain.group()->same_as(*group_)) {
    fail(ErrorCode::FamilyMismatch, "window lives in " + domain.group()->describe() + ", provider is for " +
                                        group_->describe());
  }
  const auto n = static_cast<std::size_t>(modulus_);
  std::vector<Permutation> perms;
  for (const auto& w : domain.elements()) {
    const auto& c = w.get_if<IntVector>()->coords;
    std::vector<std::size_t> shift(rank_);
    for (std::size_t k = 0; k < rank_; ++k) shift[k] = static_cast<std::size_t>(((c[k] % modulus_) + modulus_) % modulus_);
    std::vector<std::uint32_t> images(carrier_);
    for (std::size_t i = 0; i < carrier_; ++i) {
      std::size_t r = i;
      std::size_t weight = 1;
      std::size_t out = 0;
      for (std::size_t k = 0; k < rank_; ++k) {
        out += weight * ((r % n + shift[k]) % n);
        r /= n;
        weight *= n;
      }
      images[i] = static_cast<std::uint32_t>(out);
    }
    perms.push_back(Permutation::from_trusted(std::move(images)));
  }
  return SoficMap(group_, carrier_, domain.elements(), std::move(perms));
}

SoficMap FromConstructionProvider::map_on(const Window& domain) const {
  require_domain(map_, domain, "requested window");
  std::vector<Permutation> perms;
  for (const auto& w : domain.elements()) perms.push_back(map_.at(w));
  return SoficMap(map_.group(), map_.carrier_size(), domain.elements(), std::move(perms));
}

}  // namespace sofic
