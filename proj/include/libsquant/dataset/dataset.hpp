#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace libsquant {

/// Alloying elements quantified in the aluminum standards. The enumerator
/// order is the one-hot order.
enum class Element : std::uint8_t { Si, Fe, Cu, Zn, Mn, Mg };

inline constexpr std::size_t kElementCount = 6;
inline constexpr std::size_t kIntensityCount = 10;
inline constexpr std::array<Element, kElementCount> kAllElements = {
    Element::Si, Element::Fe, Element::Cu, Element::Zn, Element::Mn, Element::Mg};

std::string_view symbol(Element e) noexcept;
constexpr std::size_t ordinal(Element e) noexcept { return static_cast<std::size_t>(e); }
/// Case-insensitive symbol lookup.
std::optional<Element> parse_element(std::string_view text) noexcept;

/// One measured sample: certified weight-percent of `element` and its ten
/// averaged line intensities.
struct SpectralRecord {
  double concentration = 0.0;
  std::array<double, kIntensityCount> intensities{};
  Element element = Element::Si;

  friend bool operator==(const SpectralRecord&, const SpectralRecord&) = default;
};

/// Throws std::invalid_argument if the record violates positivity/finiteness.
void validate(const SpectralRecord& record);

struct Dataset {
  std::vector<SpectralRecord> records;
  std::string provenance;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
  std::size_t count(Element e) const noexcept;
};

/// The 42-record aluminum-alloy table (7 standards x 6 elements).
Dataset load_embedded();

/// Parses `concentration,i1,...,i10,element`. Throws ParseError naming the row.
Dataset parse_csv(const std::filesystem::path& path);
Dataset parse_csv_text(std::string_view text, std::string provenance = "<memory>");
/// Writes the same format with shortest round-trip number formatting.
void write_csv(const Dataset& dataset, std::ostream& out);

struct DatasetSplit {
  Dataset train;
  Dataset test;
};

/// Seeded shuffle, then the first round(test_fraction * n) records (half away
/// from zero) form the test partition. Both partitions keep shuffled order.
DatasetSplit split(const Dataset& dataset, double test_fraction, std::uint64_t seed);

}  // namespace libsquant
