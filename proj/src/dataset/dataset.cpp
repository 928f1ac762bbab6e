#include "libsquant/dataset/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "libsquant/errors.hpp"
#include "libsquant/numerics/rng.hpp"

namespace libsquant {

namespace {

constexpr std::array<std::string_view, kElementCount> kSymbols = {"Si", "Fe", "Cu",
                                                                  "Zn", "Mn", "Mg"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string expected_header() {
  std::string h = "concentration";
  for (std::size_t i = 1; i <= kIntensityCount; ++i) h += ",i" + std::to_string(i);
  return h + ",element";
}

double parse_number(std::string_view field, std::size_t row, std::string_view column) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || field.empty()) {
    throw ParseError(fmt::format("row {}: column {} is not a number: '{}'", row, column, field),
                     row);
  }
  return value;
}

}  // namespace

std::string_view symbol(Element e) noexcept { return kSymbols[ordinal(e)]; }

std::optional<Element> parse_element(std::string_view text) noexcept {
  text = trim(text);
  for (std::size_t i = 0; i < kElementCount; ++i) {
    const auto& sym = kSymbols[i];
    if (text.size() != sym.size()) continue;
    bool match = true;
    for (std::size_t c = 0; c < sym.size(); ++c) {
      if (std::tolower(static_cast<unsigned char>(text[c])) !=
          std::tolower(static_cast<unsigned char>(sym[c]))) {
        match = false;
        break;
      }
    }
    if (match) return kAllElements[i];
  }
  return std::nullopt;
}

void validate(const SpectralRecord& record) {
  if (!(record.concentration > 0.0) || !std::isfinite(record.concentration)) {
    throw std::invalid_argument("concentration must be positive and finite");
  }
  for (std::size_t i = 0; i < kIntensityCount; ++i) {
    const double v = record.intensities[i];
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(fmt::format("intensity i{} must be positive and finite", i + 1));
    }
  }
}

std::size_t Dataset::count(Element e) const noexcept {
  return static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(), [e](const SpectralRecord& r) { return r.element == e; }));
}

Dataset parse_csv_text(std::string_view text, std::string provenance) {
  Dataset d;
  d.provenance = std::move(provenance);
  std::size_t row = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    const auto fields = split_fields(line);
    if (!header_seen) {
      header_seen = true;
      std::string header;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) header += ',';
        for (char c : fields[i]) header += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
      if (header != expected_header()) {
        throw ParseError("header must be '" + expected_header() + "', got '" + std::string(line) + "'", 0);
      }
      continue;
    }

    ++row;
    constexpr std::size_t kColumns = kIntensityCount + 2;
    if (fields.size() != kColumns) {
      throw ParseError(fmt::format("row {}: expected {} columns, found {}", row, kColumns,
                                   fields.size()),
                       row);
    }
    SpectralRecord r;
    r.concentration = parse_number(fields[0], row, "concentration");
    for (std::size_t i = 0; i < kIntensityCount; ++i) {
      r.intensities[i] = parse_number(fields[i + 1], row, fmt::format("i{}", i + 1));
    }
    const auto element = parse_element(fields.back());
    if (!element) {
      throw ParseError(fmt::format("row {}: unknown element '{}'", row, fields.back()), row);
    }
    r.element = *element;
    try {
      validate(r);
    } catch (const std::invalid_argument& e) {
      throw ParseError(fmt::format("row {}: {}", row, e.what()), row);
    }
    d.records.push_back(r);
  }
  if (!header_seen) throw ParseError("missing header", 0);
  return d;
}

Dataset parse_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv_text(buffer.str(), path.string());
}

void write_csv(const Dataset& dataset, std::ostream& out) {
  out << expected_header() << '\n';
  for (const auto& r : dataset.records) {
    out << fmt::format("{}", r.concentration);
    for (double v : r.intensities) out << fmt::format(",{}", v);
    out << ',' << symbol(r.element) << '\n';
  }
}

DatasetSplit split(const Dataset& dataset, double test_fraction, std::uint64_t seed) {
  if (dataset.empty()) throw std::invalid_argument("split: empty dataset");
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("split: test_fraction must lie in [0, 1)");
  }
  const std::size_t n = dataset.size();
  const auto n_test = static_cast<std::size_t>(std::round(test_fraction * static_cast<double>(n)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SeededRng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  DatasetSplit out;
  out.train.provenance = dataset.provenance;
  out.test.provenance = dataset.provenance;
  for (std::size_t i = 0; i < n; ++i) {
    auto& part = i < n_test ? out.test : out.train;
    part.records.push_back(dataset.records[order[i]]);
  }
  return out;
}

}  // namespace libsquant
