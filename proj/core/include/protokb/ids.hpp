// Copyright 2026 The protokb Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace protokb {

/// Thrown when a string is not a syntactically valid absolute IRI.
class InvalidIriError : public std::invalid_argument {
 public:
  InvalidIriError(std::string iri, const std::string& reason);

  const std::string& iri() const noexcept { return iri_; }

 private:
  std::string iri_;
};

namespace iri {

/// Returns an empty optional when `text` is a valid absolute IRI, otherwise a
/// short description of the first syntactic violation found.
///
/// Generic syntax only: a scheme (ALPHA *(ALPHA / DIGIT / "+" / "-" / "."))
/// followed by ':' and characters from the RFC 3987 repertoire, with every
/// '%' introducing two hex digits and non-ASCII bytes forming well-formed
/// UTF-8. No resolution, normalization or case folding is performed.
std::optional<std::string> find_violation(std::string_view text);

inline bool is_valid(std::string_view text) { return !find_violation(text).has_value(); }

/// True when every byte sequence is well-formed UTF-8 (ASCII included).
bool is_well_formed_utf8(std::string_view bytes);

}  // namespace iri

namespace detail {

// Reference-counted immutable IRI text, allocated in one block with the
// characters following the header.
class IriText {
 public:
  static IriText* make(std::string_view text);
  static void retain(IriText* rep) noexcept {
    if (rep) rep->refs_.fetch_add(1, std::memory_order_relaxed);
  }
  static void release(IriText* rep) noexcept;

  std::string_view view() const noexcept { return {reinterpret_cast<const char*>(this + 1), size_}; }

 private:
  explicit IriText(std::size_t size) noexcept : size_(size) {}

  std::atomic<std::size_t> refs_{1};
  std::size_t size_;
};

template <class Tag>
class IriId {
 public:
  /// Throws InvalidIriError.
  static IriId parse(std::string_view text) {
    if (auto why = iri::find_violation(text)) {
      throw InvalidIriError(std::string(text), *why);
    }
    return IriId(text);
  }

  static std::optional<IriId> try_parse(std::string_view text) {
    if (!iri::is_valid(text)) return std::nullopt;
    return IriId(text);
  }

  IriId(const IriId& other) noexcept : rep_(other.rep_), hash_(other.hash_) { IriText::retain(rep_); }
  IriId(IriId&& other) noexcept
      : rep_(std::exchange(other.rep_, nullptr)), hash_(std::exchange(other.hash_, empty_hash())) {}
  IriId& operator=(IriId other) noexcept {
    std::swap(rep_, other.rep_);
    std::swap(hash_, other.hash_);
    return *this;
  }
  ~IriId() { IriText::release(rep_); }

  std::string_view view() const noexcept { return rep_ ? rep_->view() : std::string_view{}; }
  std::string str() const { return std::string(view()); }
  std::size_t hash() const noexcept { return hash_; }

  friend bool operator==(const IriId& a, const IriId& b) noexcept {
    return a.rep_ == b.rep_ || (a.hash_ == b.hash_ && a.view() == b.view());
  }
  friend std::strong_ordering operator<=>(const IriId& a, const IriId& b) noexcept {
    if (a.rep_ == b.rep_) return std::strong_ordering::equal;
    // Bytewise, matching the canonical wire ordering.
    const int c = a.view().compare(b.view());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const IriId& id) { return os << id.view(); }

 private:
  // Copies share the text; the hash is cached beside the pointer.
  explicit IriId(std::string_view text) : rep_(IriText::make(text)), hash_(std::hash<std::string_view>{}(text)) {}

  static std::size_t empty_hash() noexcept { return std::hash<std::string_view>{}(std::string_view{}); }

  IriText* rep_;
  std::size_t hash_;
};

struct PrototypeTag {};
struct PropertyTag {};

}  // namespace detail

/// Names a prototype. Always holds a valid absolute IRI.
using PrototypeId = detail::IriId<detail::PrototypeTag>;

/// Names a property. Same validity rule as PrototypeId.
using PropertyId = detail::IriId<detail::PropertyTag>;

/// The root of every inheritance chain.
inline constexpr std::string_view kEmptyPrototypeIri = "PROTO:P_0";

const PrototypeId& empty_prototype_id();

/// Convenience for `PrototypeId::parse`.
inline PrototypeId make_prototype_id(std::string_view iri) { return PrototypeId::parse(iri); }
inline PropertyId make_property_id(std::string_view iri) { return PropertyId::parse(iri); }

}  // namespace protokb

template <class Tag>
struct std::hash<protokb::detail::IriId<Tag>> {
  std::size_t operator()(const protokb::detail::IriId<Tag>& id) const noexcept {
    return id.hash();
  }
};
