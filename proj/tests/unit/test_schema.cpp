#include <doctest.h>

#include <sstream>

#include "rumix/discretizer.hpp"
#include "rumix/errors.hpp"
#include "rumix/schema.hpp"
#include "weather.hpp"

using namespace rumix;

namespace {

RawTable csv(const std::string& text) {
  std::istringstream in(text);
  return load_csv(in);
}

}  // namespace

TEST_CASE("weather schema is 12 bits wide") {
  const auto s = weather::schema();
  CHECK(s.total_width() == 12);
  CHECK(s.class_offset() == 10);
  CHECK(s.features()[2].bit_offset == 4);
  CHECK(s.feature_of_bit(5) == 2u);
  CHECK_FALSE(s.feature_of_bit(10));
  CHECK(s.bit_owner().size() == 12);
  CHECK(s.bit_owner()[11] == 5);
}

TEST_CASE("single binary feature with binary class is 4 bits") {
  const auto t = csv("a,c\nx,p\ny,q\n");
  CHECK(build_schema(t, {}).total_width() == 4);
}

TEST_CASE("missing cells add a category") {
  const auto t = csv("a,c\nx,p\n?,q\ny,q\n");
  const auto s = build_schema(t, {});
  CHECK(s.features()[0].width() == 3);
  CHECK(s.features()[0].domain.back() == kMissingLabel);
  const auto d = encode_dataset(t, s);
  CHECK(d.instances[1].bits.to_string() == "00101");
}

TEST_CASE("numeric features encode through their cut") {
  const auto t = csv("v,c\n1,p\n2,p\n3,q\n4,q\n");
  const auto cuts = discretize(t);
  const auto s = build_schema(t, cuts);
  const auto& f = s.features()[0];
  CHECK(f.domain == std::vector<std::string>{"<=2.5", ">2.5"});
  CHECK(value_index(f, std::string("2.5")) == 0u);
  CHECK(value_index(f, std::string("2.6")) == 1u);
  CHECK_FALSE(value_index(f, std::nullopt));

  const auto flat = build_schema(csv("v,c\n1,p\n1,q\n"), {});
  CHECK(flat.features()[0].domain == std::vector<std::string>{kSingleBinLabel});
  CHECK(value_index(flat.features()[0], std::string("99")) == 0u);
}

TEST_CASE("weather record encodes one bit per segment") {
  const auto s = weather::schema();
  const std::vector<Cell> row{std::string("morning"), std::string("clear"), std::string("poor"),
                              std::string("warm"), std::string("medium")};
  const auto x = encode_instance(row, std::string("yes"), s, EncodeMode::train);
  CHECK(x.bits == weather::bits("10 10 01 10 10 10"));
  CHECK(x.class_index == 0);
  const auto again = encode_instance(row, std::string("yes"), s, EncodeMode::train);
  CHECK(again.bits == x.bits);
  const auto decoded = decode_instance(x, s);
  CHECK(*decoded[2] == "poor");
}

TEST_CASE("predict mode tolerates unseen values, train mode does not") {
  const auto s = weather::schema();
  const std::vector<Cell> row{std::string("noon"), std::string("clear"), std::string("poor"),
                              std::string("warm"), std::string("medium")};
  const auto x = encode_instance(row, std::string("maybe"), s, EncodeMode::predict);
  CHECK(x.bits.count_range(0, 2) == 0);
  CHECK(x.class_index == -1);
  CHECK_FALSE(decode_instance(x, s)[0]);
  CHECK_THROWS_AS(encode_instance(row, std::string("yes"), s, EncodeMode::train), InvariantViolation);

  const std::vector<Cell> ok{std::string("morning"), std::string("clear"), std::string("poor"),
                             std::string("warm"), std::string("medium")};
  CHECK_THROWS_AS(encode_instance(ok, std::string("maybe"), s, EncodeMode::train), InvariantViolation);
}

TEST_CASE("unseen value falls into the missing category when there is one") {
  const auto t = csv("a,c\nx,p\n?,q\n");
  const auto s = build_schema(t, {});
  const std::vector<Cell> row{std::string("zzz")};
  const auto x = encode_instance(row, std::nullopt, s, EncodeMode::predict);
  CHECK(x.bits.test(s.features()[0].bit_offset + *s.features()[0].missing_index()));
}

TEST_CASE("majority class ties go to the lowest index") {
  const auto t = csv("a,c\nx,q\ny,p\nx,p\ny,q\n");
  const auto d = encode_dataset(t, build_schema(t, {}));
  CHECK(d.schema.class_labels()[0] == "q");
  CHECK(d.majority_class == 0);
}

TEST_CASE("schema mismatches are reported") {
  const auto train = csv("a,b,c\nx,y,p\n");
  const auto s = build_schema(train, {});
  CHECK_THROWS_AS(check_compatible(csv("a,c\nx,p\n"), s), SchemaMismatch);
  CHECK_THROWS_AS(check_compatible(csv("a,z,c\nx,y,p\n"), s), SchemaMismatch);
  CHECK_NOTHROW(check_compatible(csv("a,b,c\nq,r,s\n"), s));
}

TEST_CASE("schema construction errors") {
  FeatureDescriptor empty;
  empty.name = "e";
  CHECK_THROWS_AS(DatasetSchema({empty}, {"a"}), InputError);
  FeatureDescriptor f;
  f.name = "f";
  f.domain = {"x"};
  CHECK_THROWS_AS(DatasetSchema({f}, {}), InputError);
  CHECK_THROWS_AS(DatasetSchema({f}, {"a", "a"}), InputError);
  f.domain = {"x", "x"};
  CHECK_THROWS_AS(DatasetSchema({f}, {"a"}), InputError);
}

TEST_CASE("loader options follow the schema's column kinds") {
  const auto t = csv("n,k,c\n1,x,p\n2,y,q\n");
  const auto opts = loader_options_for(build_schema(t, discretize(t)), "c");
  CHECK(opts.class_column == "c");
  CHECK(opts.force_numeric == std::vector<std::string>{"n"});
  CHECK(opts.force_categorical == std::vector<std::string>{"k"});
}
