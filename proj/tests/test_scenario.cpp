#include "abelquot/report.hpp"
#include "abelquot/verify.hpp"

#include <gtest/gtest.h>

using namespace abelquot;
using nlohmann::json;

namespace {

ErrorCode code_of(const std::string& text) {
  try {
    parse_scenario_text(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for " << text;
  return ErrorCode::Internal;
}

json minimal() {
  return json::parse(R"({
    "version": 1,
    "curves": [{"id": "E", "ring": "Z"}, {"id": "F", "ring": "Zi"}],
    "surface": {"first": "E", "second": "F", "same_curve": false},
    "generators": [{"linear": {"diag": [{"a": 1, "b": 0}, {"a": 0, "b": 1}]},
                    "translation": [["1/4", "0"], ["0", "0"]]}]
  })");
}

}  // namespace

TEST(Scenario, MinimalScenarioParses) {
  const Scenario s = parse_scenario(minimal());
  EXPECT_EQ(s.curves.size(), 2u);
  EXPECT_EQ(s.generators.size(), 1u);
  EXPECT_EQ(s.group().order(), 4u);
  EXPECT_EQ(classify(s.group()).cls, SurfaceClass::Hyperelliptic);
}

TEST(Scenario, ErrorCodesAreDistinct) {
  EXPECT_EQ(code_of("{not json"), ErrorCode::Parse);
  EXPECT_EQ(code_of("[]"), ErrorCode::Schema);

  json j = minimal();
  j.erase("surface");
  EXPECT_EQ(code_of(j.dump()), ErrorCode::Schema);

  j = minimal();
  j["version"] = 2;
  EXPECT_EQ(code_of(j.dump()), ErrorCode::Schema);

  j = minimal();
  j["curves"][1]["ring"] = "Zq";
  EXPECT_EQ(code_of(j.dump()), ErrorCode::Schema);

  j = minimal();
  j["curves"][1]["id"] = "E";
  EXPECT_EQ(code_of(j.dump()), ErrorCode::Schema);

  j = minimal();
  j["generators"][0]["translation"][0][0] = "2/4";
  EXPECT_EQ(code_of(j.dump()), ErrorCode::InvalidTorsion);

  j = minimal();
  j["generators"][0]["translation"][0][0] = "3/2";
  EXPECT_EQ(code_of(j.dump()), ErrorCode::InvalidTorsion);

  j = minimal();
  j["generators"][0]["translation"][0][0] = 0.25;
  EXPECT_EQ(code_of(j.dump()), ErrorCode::InvalidTorsion);

  j = minimal();
  j["generators"][0]["linear"] = {{"matrix", {{{{"a", 0}, {"b", 0}}, {{"a", 1}, {"b", 0}}}, {{{"a", 1}, {"b", 0}}, {{"a", 0}, {"b", 0}}}}}};
  EXPECT_EQ(code_of(j.dump()), ErrorCode::Schema);

  j = minimal();
  j["surface"]["same_curve"] = true;
  EXPECT_EQ(code_of(j.dump()), ErrorCode::Schema);

  j = minimal();
  j["generators"][0]["linear"]["diag"][0]["b"] = 1;
  EXPECT_EQ(code_of(j.dump()), ErrorCode::Schema);
}

TEST(Scenario, ClosureErrorsSurfaceAfterParsing) {
  json j = minimal();
  j["generators"][0]["linear"]["diag"][0]["a"] = 2;
  const Scenario s = parse_scenario(j);
  try {
    s.group();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfiniteOrder);
  }
  j = minimal();
  j["generators"][0]["translation"][0] = {"1/997", "1/991"};
  try {
    parse_scenario(j).group();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CapExceeded);
  }
}

TEST(Scenario, ExitStatusesAreDistinct) {
  std::set<int> seen;
  for (const auto c : {ErrorCode::Parse, ErrorCode::Schema, ErrorCode::InvalidTorsion, ErrorCode::InfiniteOrder,
                       ErrorCode::CapExceeded, ErrorCode::Precondition, ErrorCode::Io, ErrorCode::Internal}) {
    EXPECT_NE(exit_status(c), 0);
    EXPECT_NE(exit_status(c), 1);
    EXPECT_TRUE(seen.insert(exit_status(c)).second);
  }
}

TEST(Scenario, EmitParseRoundTrip) {
  for (const auto& c : construction_gallery()) {
    const Scenario s = scenario_from(c);
    const std::string text = to_json(s).dump(2);
    const Scenario back = parse_scenario_text(text);
    EXPECT_EQ(back, s) << c.name;
    EXPECT_EQ(to_json(back).dump(2), text) << c.name;
  }
}

TEST(Scenario, DerivedCurvesCannotBeSerialized) {
  const EllipticCurve E = EllipticCurve::root_curve("E", EndoRing::Z);
  const auto [Q, q] = quotient_by_translation_subgroup(E, generated_subgroup("E", {TorsionPoint("E", Rational(1, 2), 0)}));
  EXPECT_THROW(scenario_from(Surface::product(Q, E), {}), PreconditionError);
}

TEST(Construct, NamedFamilies) {
  EXPECT_EQ(construct("SplitBundle", 3).surface.second.ring, EndoRing::EisensteinZ);
  EXPECT_EQ(construct("Sym2").group().order(), 8u);
  const Construction p2 = construct("P2");
  ASSERT_EQ(p2.generators.size(), 2u);
  for (const auto& g : p2.generators) EXPECT_TRUE(std::holds_alternative<MatrixHolonomy>(g.linear));
  EXPECT_EQ(construct("Hyperelliptic", 1, EndoRing::GaussianZ, 4).expected.holonomy_order, 4u);
  EXPECT_THROW(construct("SplitBundle", 5), PreconditionError);
  EXPECT_THROW(construct("Hyperelliptic", 1, EndoRing::Z, 5), PreconditionError);
  EXPECT_THROW(construct("Enriques"), PreconditionError);
  EXPECT_THROW(split_bundle_action(EllipticCurve::root_curve("E", EndoRing::Z), TorsionPoint("E", Rational(1, 3), 0), 2),
               PreconditionError);
}

TEST(Construct, SeededRandomConstructionsRoundTrip) {
  for (const auto& row : random_roundtrip_suite(7, 40)) EXPECT_TRUE(row.pass) << row.name << ": " << row.detail;
}
