#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>

#include "tdlc/tdlc.hpp"

using namespace tdlc;

namespace {
Record rec(const std::string& fam, const std::string& chk, bool verdict) {
  Record r;
  r.family = fam;
  r.check = chk;
  r.inputs["x"] = "e";
  r.verdict = verdict;
  return r;
}
}  // namespace

TEST_CASE("record serialization is ordered and stable") {
  Record r;
  r.family = "affine";
  r.check = "scale-value";
  r.inputs["x"] = "(0/1,-3)@2";
  r.outputs["scale"] = "8";
  r.verdict = true;
  r.certificate["tidy_v"] = "level:0";
  CHECK(r.to_json().dump() ==
        "{\"family\":\"affine\",\"check\":\"scale-value\","
        "\"inputs\":{\"x\":\"(0/1,-3)@2\"},\"outputs\":{\"scale\":\"8\"},"
        "\"verdict\":true,\"certificate\":{\"tidy_v\":\"level:0\"}}");
  Record back = Record::from_json(r.to_json());
  CHECK(back.family == r.family);
  CHECK(back.check == r.check);
  CHECK(back.inputs == r.inputs);
  CHECK(back.outputs == r.outputs);
  CHECK(back.verdict == r.verdict);
  CHECK(back.certificate == r.certificate);
}

TEST_CASE("jsonl round trip") {
  RunReport rep;
  rep.add(rec("affine", "a", true));
  rep.add(rec("sym3", "b", false));
  std::stringstream ss;
  rep.write_jsonl(ss);
  std::vector<Record> back = read_jsonl(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].family == "affine");
  CHECK(back[1].check == "b");
  CHECK(back[0].verdict);
  CHECK(!back[1].verdict);
  CHECK(rep.jsonl() == rep.jsonl());

  std::stringstream bad("not json\n");
  try {
    read_jsonl(bad);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.position() == 1);
  }
  // valid JSON that is not a record is also rejected, with its line
  std::stringstream shapeless(rep.jsonl() + "{\"family\":\"affine\"}\n");
  try {
    read_jsonl(shapeless);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.position() == 3);
  }
}

TEST_CASE("csv aggregation in first-appearance order") {
  RunReport rep;
  rep.add(rec("affine", "tidy", true));
  rep.add(rec("affine", "tidy", true));
  rep.add(rec("sym3", "tidy", false));
  rep.add(rec("affine", "tidy", false));
  rep.add(rec("sym3", "witness", true));
  std::stringstream ss;
  rep.write_csv(ss);
  CHECK(ss.str() ==
        "family,check,cases,passes,failures\n"
        "affine,tidy,3,2,1\n"
        "sym3,tidy,1,0,1\n"
        "sym3,witness,1,1,0\n");
  CHECK(rep.passes() == 3);
  CHECK(rep.failures() == 2);
  CHECK(!rep.all_passed());
}

TEST_CASE("summary text marks failing checks") {
  RunReport rep;
  rep.add(rec("affine", "tidy", true));
  rep.add(rec("sym3", "tidy", false));
  std::string s = rep.summary_text();
  CHECK(s ==
        "pass affine/tidy: 1/1\n"
        "FAIL sym3/tidy: 0/1\n"
        "CHECK FAILURES PRESENT (2 records)\n");

  RunReport good;
  good.add(rec("affine", "tidy", true));
  CHECK(good.summary_text() ==
        "pass affine/tidy: 1/1\n"
        "all checks passed (1 records)\n");
  CHECK(good.all_passed());
}
