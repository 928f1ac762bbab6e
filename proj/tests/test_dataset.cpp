#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "libsquant/dataset/dataset.hpp"
#include "libsquant/dataset/scaler.hpp"
#include "libsquant/errors.hpp"

using namespace libsquant;

namespace {

const char* kHeader = "concentration,i1,i2,i3,i4,i5,i6,i7,i8,i9,i10,element\n";

const SpectralRecord* find(const Dataset& d, Element e, double concentration) {
  for (const auto& r : d.records) {
    if (r.element == e && r.concentration == concentration) return &r;
  }
  return nullptr;
}

}  // namespace

TEST(Element, SymbolsAndOrder) {
  EXPECT_EQ(symbol(Element::Zn), "Zn");
  EXPECT_EQ(ordinal(Element::Si), 0u);
  EXPECT_EQ(ordinal(Element::Mg), 5u);
  EXPECT_EQ(parse_element("mg"), Element::Mg);
  EXPECT_EQ(parse_element("FE"), Element::Fe);
  EXPECT_FALSE(parse_element("Xx").has_value());
}

TEST(Embedded, CountsAndElements) {
  const Dataset d = load_embedded();
  EXPECT_EQ(d.size(), 42u);
  for (Element e : kAllElements) EXPECT_EQ(d.count(e), 7u) << symbol(e);
  std::set<Element> seen;
  for (const auto& r : d.records) seen.insert(r.element);
  EXPECT_EQ(seen.size(), 6u);
  for (const auto& r : d.records) EXPECT_NO_THROW(validate(r));
}

TEST(Embedded, FirstRecord) {
  const Dataset d = load_embedded();
  const auto& r = d.records.front();
  EXPECT_EQ(r.element, Element::Zn);
  EXPECT_DOUBLE_EQ(r.concentration, 0.098);
  EXPECT_DOUBLE_EQ(r.intensities[0], 316.190);
}

TEST(Embedded, SpotCells) {
  const Dataset d = load_embedded();
  const auto* si = find(d, Element::Si, 4.550);
  ASSERT_NE(si, nullptr);
  EXPECT_DOUBLE_EQ(si->intensities[8], 12772.580);
  EXPECT_DOUBLE_EQ(si->intensities[9], 11498.320);
  const auto* mg = find(d, Element::Mg, 4.390);
  ASSERT_NE(mg, nullptr);
  EXPECT_DOUBLE_EQ(mg->intensities[0], 100894.648);
  const auto* cu = find(d, Element::Cu, 0.670);
  ASSERT_NE(cu, nullptr);
  EXPECT_DOUBLE_EQ(cu->intensities[8], 2585.05);
  const auto* fe = find(d, Element::Fe, 0.410);
  ASSERT_NE(fe, nullptr);
  EXPECT_DOUBLE_EQ(fe->intensities[9], 1358.266);
}

TEST(Embedded, ConcentrationRanges) {
  const Dataset d = load_embedded();
  double lo = 1e9, hi = 0.0;
  for (const auto& r : d.records) {
    if (r.element != Element::Si) continue;
    lo = std::min(lo, r.concentration);
    hi = std::max(hi, r.concentration);
  }
  EXPECT_DOUBLE_EQ(lo, 0.097);
  EXPECT_DOUBLE_EQ(hi, 4.550);
}

TEST(Csv, RoundTripEmbedded) {
  const Dataset d = load_embedded();
  std::ostringstream out;
  write_csv(d, out);
  const Dataset back = parse_csv_text(out.str());
  EXPECT_EQ(back.records, d.records);
}

TEST(Csv, ElementCaseInsensitive) {
  const std::string text = std::string(kHeader) + "0.5,1,2,3,4,5,6,7,8,9,10,mG\n";
  const Dataset d = parse_csv_text(text);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.records[0].element, Element::Mg);
}

TEST(Csv, RejectsUnknownElementWithRow) {
  const std::string text = std::string(kHeader) + "0.5,1,2,3,4,5,6,7,8,9,10,Si\n" +
                           "0.5,1,2,3,4,5,6,7,8,9,10,Xx\n";
  try {
    parse_csv_text(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
    EXPECT_NE(std::string(e.what()).find("Xx"), std::string::npos);
  }
}

TEST(Csv, RejectsMissingColumn) {
  const std::string text = std::string(kHeader) + "0.5,1,2,3,4,5,6,7,8,9,Si\n";
  try {
    parse_csv_text(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 1u);
  }
}

TEST(Csv, RejectsNonPositiveValues) {
  EXPECT_THROW(parse_csv_text(std::string(kHeader) + "0,1,2,3,4,5,6,7,8,9,10,Si\n"), ParseError);
  EXPECT_THROW(parse_csv_text(std::string(kHeader) + "0.5,1,2,-3,4,5,6,7,8,9,10,Si\n"),
               ParseError);
  EXPECT_THROW(parse_csv_text(std::string(kHeader) + "0.5,1,2,abc,4,5,6,7,8,9,10,Si\n"),
               ParseError);
}

TEST(Csv, RejectsBadHeader) {
  try {
    parse_csv_text("conc,a,b\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 0u);
  }
}

TEST(Split, EmbeddedSizes) {
  const auto s = split(load_embedded(), 0.2, 42);
  EXPECT_EQ(s.train.size(), 34u);
  EXPECT_EQ(s.test.size(), 8u);
}

TEST(Split, ZeroFractionAndErrors) {
  const Dataset d = load_embedded();
  const auto s = split(d, 0.0, 1);
  EXPECT_EQ(s.train.size(), 42u);
  EXPECT_TRUE(s.test.empty());
  EXPECT_THROW(split(Dataset{}, 0.2, 1), std::invalid_argument);
  EXPECT_THROW(split(d, 1.0, 1), std::invalid_argument);
  EXPECT_THROW(split(d, -0.1, 1), std::invalid_argument);
}

TEST(Split, DeterministicPartition) {
  const Dataset d = load_embedded();
  for (std::uint64_t seed : {0ull, 1ull, 42ull, 977ull}) {
    for (double f : {0.0, 0.1, 0.2, 0.5, 0.9}) {
      const auto a = split(d, f, seed);
      const auto b = split(d, f, seed);
      EXPECT_EQ(a.train.records, b.train.records);
      EXPECT_EQ(a.test.records, b.test.records);
      ASSERT_EQ(a.train.size() + a.test.size(), d.size());
      EXPECT_EQ(a.test.size(), static_cast<std::size_t>(std::round(f * 42.0)));
      // Records are distinct in the embedded table, so a multiset check is a partition check.
      std::multiset<std::pair<double, double>> all, parts;
      for (const auto& r : d.records) all.insert({r.concentration, r.intensities[0]});
      for (const auto& r : a.train.records) parts.insert({r.concentration, r.intensities[0]});
      for (const auto& r : a.test.records) parts.insert({r.concentration, r.intensities[0]});
      EXPECT_EQ(all, parts);
    }
  }
}

TEST(Scaler, StandardizesTrainingColumns) {
  const auto s = split(load_embedded(), 0.2, 42);
  const Scaler scaler = Scaler::fit(s.train);
  const ScaledData x = transform(scaler, s.train);
  for (std::size_t c = 0; c < kIntensityCount; ++c) {
    double mean = 0.0, var = 0.0;
    for (std::size_t r = 0; r < x.features.rows(); ++r) mean += x.features(r, c);
    mean /= static_cast<double>(x.features.rows());
    for (std::size_t r = 0; r < x.features.rows(); ++r) {
      var += (x.features(r, c) - mean) * (x.features(r, c) - mean);
    }
    var /= static_cast<double>(x.features.rows());
    EXPECT_NEAR(mean, 0.0, 1e-9);
    EXPECT_NEAR(std::sqrt(var), 1.0, 1e-9);
  }
  for (double t : x.targets) {
    EXPECT_GE(t, 0.0);
    EXPECT_LE(t, 1.0);
  }
}

TEST(Scaler, InverseRoundTrip) {
  const Dataset d = load_embedded();
  const Scaler scaler = Scaler::fit(d);
  for (const auto& r : d.records) {
    for (std::size_t c = 0; c < kIntensityCount; ++c) {
      const double v = r.intensities[c];
      EXPECT_NEAR(scaler.unscale_intensity(c, scaler.scale_intensity(c, v)), v, 1e-10 * v);
    }
    EXPECT_NEAR(scaler.denormalize_target(scaler.normalize_target(r.concentration)),
                r.concentration, 1e-10);
  }
}

TEST(Scaler, ConstantColumnGuard) {
  Dataset d;
  for (int i = 0; i < 4; ++i) {
    SpectralRecord r;
    r.concentration = 1.0;
    r.intensities.fill(5.0);
    r.intensities[1] = 1.0 + i;
    r.element = Element::Fe;
    d.records.push_back(r);
  }
  const Scaler scaler = Scaler::fit(d);
  EXPECT_EQ(scaler.stds()[0], 1.0);
  EXPECT_EQ(scaler.target_span(), 1.0);
  const ScaledData x = transform(scaler, d);
  for (std::size_t r = 0; r < x.features.rows(); ++r) {
    EXPECT_EQ(x.features(r, 0), 0.0);
    for (double v : x.features.row(r)) EXPECT_TRUE(std::isfinite(v));
  }
}

TEST(Encode, StepsAndOneHot) {
  const Dataset d = load_embedded();
  const Scaler scaler = Scaler::fit(d);
  const auto& first = d.records.front();
  const EncodedSequence e = encode(first, scaler);
  ASSERT_EQ(e.steps.rows(), kIntensityCount);
  ASSERT_EQ(e.steps.cols(), kStepWidth);
  EXPECT_NEAR(e.steps(0, 0), (316.190 - scaler.means()[0]) / scaler.stds()[0], 1e-12);
  for (std::size_t t = 0; t < kIntensityCount; ++t) {
    double hot = 0.0;
    for (std::size_t k = 1; k < kStepWidth; ++k) hot += e.steps(t, k);
    EXPECT_EQ(hot, 1.0);
    EXPECT_EQ(e.steps(t, 1 + ordinal(Element::Zn)), 1.0);
  }
  EXPECT_DOUBLE_EQ(e.target, scaler.normalize_target(0.098));
}

TEST(Encode, FeatureRowMatchesSequence) {
  const Dataset d = load_embedded();
  const Scaler scaler = Scaler::fit(d);
  for (const auto& r : d.records) {
    const auto row = feature_row(r, scaler);
    const auto e = encode(r, scaler);
    for (std::size_t t = 0; t < kIntensityCount; ++t) EXPECT_EQ(row[t], e.steps(t, 0));
    for (std::size_t k = 0; k < kElementCount; ++k) EXPECT_EQ(row[kIntensityCount + k], e.steps(0, 1 + k));
  }
  EXPECT_EQ(feature_names().size(), kFeatureCount);
  EXPECT_EQ(feature_names().front(), "i1");
  EXPECT_EQ(feature_names().back(), "Mg");
}
