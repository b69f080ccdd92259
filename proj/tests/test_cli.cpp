#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "specmix/cli_main.hpp"
#include "specmix/corpus.hpp"
#include "specmix/json_io.hpp"

using namespace specmix;

namespace {

std::string fixture(const std::string& name) { return std::string(SPECMIX_GOLDEN_DIR) + "/fixtures/" + name; }

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "specmix");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

ListColouringInstance edge3() { return ListColouringInstance::uniform(Graph(2, {{0, 1}}), 3); }

}  // namespace

TEST(ParsePinning, Accepts) {
  const ListColouringInstance inst = path_instance(3, 3);
  EXPECT_TRUE(parse_pinning("", inst).empty());
  const Pinning p = parse_pinning("2=1,0=0", inst);
  EXPECT_EQ(p.to_string(), "0=0,2=1");
}

TEST(ParsePinning, ErrorsNamePosition) {
  const ListColouringInstance inst = path_instance(3, 3);
  auto message = [&](const std::string& spec) {
    try {
      parse_pinning(spec, inst);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("0=1,0=2").find("position 4"), std::string::npos);
  EXPECT_NE(message("0=1,0=2").find("duplicate"), std::string::npos);
  EXPECT_NE(message("0=9").find("not in the list"), std::string::npos);
  EXPECT_NE(message("7=0").find("unknown vertex"), std::string::npos);
  EXPECT_NE(message("1=x").find("position 0"), std::string::npos);
  EXPECT_NE(message("0=0,x").find("position 4"), std::string::npos);
}

TEST(RunConfig, Validate) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  c.cap = 0;
  EXPECT_THROW(c.validate(), ParameterError);
  c = RunConfig{};
  c.tol.spectral = 0.5;
  EXPECT_THROW(c.validate(), ParameterError);
  c = RunConfig{};
  c.format = "xml";
  EXPECT_THROW(c.validate(), ParameterError);
}

TEST(RunConfig, EnvironmentCap) {
  RunConfig c;
  ::setenv("SPECMIX_CAP", "1234", 1);
  apply_environment(c);
  EXPECT_EQ(c.cap, 1234U);
  ::setenv("SPECMIX_CAP", "12ab", 1);
  EXPECT_THROW(apply_environment(c), ParseError);
  ::unsetenv("SPECMIX_CAP");
}

TEST(Json, RoundTrip) {
  for (const auto& inst : {edge3(), cycle_instance(4, 3), star_family(3, 5, 4)}) {
    EXPECT_EQ(instance_from_json(to_json(inst)).key(), inst.key());
  }
}

TEST(Json, Errors) {
  EXPECT_THROW(instance_from_json(json::array()), ParseError);
  EXPECT_THROW(instance_from_json(json::parse(R"({"n":2,"edges":[]})")), ParseError);
  EXPECT_THROW(instance_from_json(json::parse(R"({"n":2,"edges":[[0,0]],"lists":[[0],[0]]})")), ParseError);
  EXPECT_THROW(instance_from_json(json::parse(R"({"n":2,"edges":[],"lists":[[0]]})")), ParseError);
  EXPECT_THROW(instance_from_json(json::parse(R"({"n":1,"edges":[],"lists":[[-1]]})")), ParseError);
  EXPECT_THROW(read_instance(fixture("malformed.json")), ParseError);
  EXPECT_THROW(read_instance(fixture("missing.json")), ParseError);
}

TEST(Generate, Families) {
  EXPECT_EQ(generate_instance("path:4:q=5").size(), 4);
  EXPECT_EQ(generate_instance("cycle:5").graph().edges().size(), 5U);
  const ListColouringInstance s = generate_instance("star:4:center=8:leaf=6");
  EXPECT_EQ(s.list(0).size(), 8U);
  EXPECT_EQ(s.list(1).size(), 6U);
  const ListColouringInstance r = generate_instance("random-triangle-free:n=8:seed=3");
  EXPECT_TRUE(r.graph().triangle_free());
  EXPECT_EQ(r.key(), generate_instance("random-triangle-free:n=8:seed=3").key());
  EXPECT_THROW(generate_instance("wheel:5"), ParseError);
  EXPECT_THROW(generate_instance("path:4:colours=3"), ParseError);
}

TEST(CliMain, ExitCodes) {
  EXPECT_EQ(invoke({"influence", "--instance", fixture("edge_q3.json")}).code, 0);
  EXPECT_EQ(invoke({"bounds", "--instance", fixture("star_4_4.json"), "--chi", "4"}).code, 2);
  const Outcome bad = invoke({"influence", "--instance", fixture("edge_q3.json"), "--pin", "0=9"});
  EXPECT_EQ(bad.code, 1);
  EXPECT_EQ(bad.err.rfind("specmix: ", 0), 0U);
  EXPECT_EQ(invoke({"nonsense"}).code, 1);
  EXPECT_EQ(invoke({"influence"}).code, 1);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(CliMain, CapacityErrorExitsOne) {
  const Outcome o = invoke({"influence", "--instance", fixture("star_4_8.json"), "--cap", "10"});
  EXPECT_EQ(o.code, 1);
}

TEST(CliMain, ReportShape) {
  const Outcome o = invoke({"influence", "--instance", fixture("edge_q3.json")});
  ASSERT_EQ(o.code, 0);
  const json j = json::parse(o.out);
  for (const char* key : {"command", "version", "inputs", "result", "checks", "pass", "timing_ms"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["version"], kVersion);
  const json g = json::parse(invoke({"influence", "--instance", fixture("edge_q3.json"), "--golden"}).out);
  EXPECT_FALSE(g.contains("timing_ms"));
}

TEST(CliMain, GlauberIsSeedDeterministic) {
  const std::vector<std::string> args{"glauber", "--instance", fixture("path3_q3.json"), "--steps", "30", "--seed", "5"};
  EXPECT_EQ(invoke(args).out, invoke(args).out);
}
