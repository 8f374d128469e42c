#include <gtest/gtest.h>

#include "sobtri/config.hpp"
#include "sobtri/error.hpp"

using namespace sobtri;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(RunConfig, DefaultsRoundTrip) {
  const RunConfig a;
  const auto b = RunConfig::parse(a.serialize());
  EXPECT_EQ(a.values(), b.values());
  EXPECT_EQ(a.serialize(), b.serialize());
}

TEST(RunConfig, OverridesRoundTripVerbatim) {
  auto a = RunConfig::parse("alpha = 0.7\n# comment\n\ntheta1=bump:0.5,0.9,1   # trailing\nt_list=10,20,40\n");
  a.set("mesh_h=1/16,1/32");
  EXPECT_EQ(a.raw("alpha"), "0.7");
  EXPECT_EQ(a.raw("theta1"), "bump:0.5,0.9,1");
  const auto b = RunConfig::parse(a.serialize());
  EXPECT_EQ(a.serialize(), b.serialize());
  EXPECT_DOUBLE_EQ(b.reals("mesh_h")[1], 1.0 / 32);
  EXPECT_EQ(b.times().size(), 3u);
}

TEST(RunConfig, ErrorsNameLineAndField) {
  auto m = message_of([] { (void)RunConfig::parse("alpha=1\nlambda=abc\n", "run.cfg"); });
  EXPECT_NE(m.find("run.cfg:2"), std::string::npos) << m;
  EXPECT_NE(m.find("lambda"), std::string::npos) << m;

  m = message_of([] { (void)RunConfig::parse("alpha=1\nalpha=2\n"); });
  EXPECT_NE(m.find("duplicate"), std::string::npos) << m;
  EXPECT_NE(m.find("line 1"), std::string::npos) << m;

  m = message_of([] { (void)RunConfig::parse("colour=red\n"); });
  EXPECT_NE(m.find("unknown key"), std::string::npos) << m;

  m = message_of([] { (void)RunConfig::parse("just text\n"); });
  EXPECT_NE(m.find(":1"), std::string::npos) << m;

  RunConfig c;
  m = message_of([&] { c.set("grid_n=3.5"); });
  EXPECT_NE(m.find("grid_n"), std::string::npos) << m;
  m = message_of([&] { c.set("theta1=wobble:1"); });
  EXPECT_NE(m.find("theta1"), std::string::npos) << m;
  EXPECT_THROW(c.set("branch=w"), ValidationError);
  EXPECT_THROW(c.set("seed=-1"), ValidationError);
  EXPECT_THROW(c.set("t_list=1,,2"), ValidationError);
  EXPECT_THROW(c.set("window0_u=window:0.3,0.1,smooth"), ValidationError);
}

TEST(RunConfig, ModuleInputs) {
  RunConfig c;
  c.set("alpha=0.5");
  EXPECT_DOUBLE_EQ(c.domain().leg(), 2.0);
  EXPECT_DOUBLE_EQ(c.theta2().length(), 2.0);
  c.set("alpha=-1");
  EXPECT_THROW((void)c.domain(), ValidationError);

  RunConfig p;
  p.set("branch=both");
  p.set("window0_v=window:0.6,0.8,smooth");
  EXPECT_EQ(p.components(0).size(), 2u);
  EXPECT_TRUE(p.components(1).empty());
  p.set("branch=v");
  ASSERT_EQ(p.components(0).size(), 1u);
  EXPECT_DOUBLE_EQ(p.components(0)[0].window.lo(), 0.6);
  // a U-branch support under the v key
  p.set("window0_v=window:0.1,0.2,smooth");
  EXPECT_THROW((void)p.components(0), ValidationError);

  RunConfig q;
  q.set("t_list=0,5,40");
  q.set("refine=2");
  EXPECT_DOUBLE_EQ(q.plan().t_max, 40.0);
  EXPECT_EQ(q.plan().refine, 2);
  q.set("corner_refine_levels=1");
  EXPECT_GT(q.grid().eta_panels, RunConfig().grid().eta_panels);
  q.set("corner_refine_levels=9");
  EXPECT_THROW((void)q.grid(), ValidationError);
}
