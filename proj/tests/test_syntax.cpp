#include <gtest/gtest.h>

#include "gkat/parser.hpp"
#include "gkat/syntax.hpp"
#include "support.hpp"

using namespace gkat;
using namespace gkat::testing;

namespace {

Exp p() { return Exp::action(0); }
Exp q() { return Exp::action(1); }
BExp b() { return BExp::test(0); }

std::string parse_error(const std::string& src, Lang lang = Lang::Cfgkat) {
  try {
    parse_program(src, std::make_shared<Registry>(), lang, "src");
  } catch (const InputError& e) {
    return e.what();
  }
  return {};
}

std::vector<int> conditions(Exp e) {
  std::vector<int> out;
  for (const Violation& v : well_formed(e)) out.push_back(v.condition);
  return out;
}

}  // namespace

TEST(Exp, HashConsingAndSmartConstructors) {
  EXPECT_EQ(Exp::seq(p(), q()), Exp::seq(p(), q()));
  EXPECT_NE(Exp::seq(p(), q()), Exp::seq(q(), p()));
  EXPECT_EQ(smart_seq(Exp::skip(), p()), p());
  EXPECT_EQ(smart_unfold(Exp::skip(), p()), p());
  EXPECT_EQ(Exp::seq(Exp::skip(), p()).kind(), Exp::Kind::Seq);
  EXPECT_TRUE(Exp().is_skip());
}

TEST(Exp, GkatFragment) {
  EXPECT_TRUE(is_gkat(Exp::loop(b(), Exp::ite(b(), p(), q()))));
  EXPECT_FALSE(is_gkat(Exp::seq(p(), Exp::ret())));
  EXPECT_FALSE(is_gkat(Exp::assign(0, 1)));
  EXPECT_FALSE(is_gkat(Exp::test(BExp::ind(0, 1))));
  EXPECT_FALSE(is_gkat(Exp::unfold(p(), q())));
}

TEST(WellFormed, AcceptsValidProgram) {
  const Exp e = Exp::seq(Exp::label(0), Exp::seq(Exp::loop(b(), Exp::ite(b(), Exp::brk(), Exp::go(0))), Exp::ret()));
  EXPECT_TRUE(well_formed(e).empty());
}

TEST(WellFormed, ReportsEachCondition) {
  EXPECT_EQ(conditions(Exp::seq(Exp::label(0), Exp::seq(Exp::label(0), Exp::ret()))), std::vector<int>{1});
  EXPECT_EQ(conditions(Exp::seq(Exp::go(3), Exp::ret())), std::vector<int>{2});
  EXPECT_EQ(conditions(Exp::seq(Exp::brk(), Exp::ret())), std::vector<int>{3});
  EXPECT_EQ(conditions(Exp::seq(Exp::cont(), Exp::ret())), std::vector<int>{3});
  EXPECT_EQ(conditions(p()), std::vector<int>{4});
  // violations come sorted by condition
  EXPECT_EQ(conditions(Exp::seq(Exp::brk(), Exp::go(1))), (std::vector<int>{2, 3, 4}));
}

TEST(WellFormed, UnfoldLeftSideCountsAsLoop) {
  EXPECT_TRUE(well_formed(Exp::seq(Exp::unfold(Exp::brk(), p()), Exp::ret())).empty());
  EXPECT_FALSE(well_formed(Exp::seq(Exp::unfold(p(), Exp::brk()), Exp::ret())).empty());
}

TEST(WellFormed, NeverRewrites) {
  const Exp e = Exp::seq(Exp::skip(), Exp::seq(p(), Exp::ret()));
  const Exp before = e;
  well_formed(e);
  EXPECT_EQ(e, before);
}

TEST(LabelExtract, SequenceDropsPrefix) {
  const Exp e = Exp::seq(p(), Exp::seq(Exp::label(0), Exp::seq(q(), Exp::ret())));
  EXPECT_EQ(label_extract(e, 0), Exp::seq(q(), Exp::ret()));
}

TEST(LabelExtract, BranchKeepsOnlyTheLabelledSide) {
  const Exp e = Exp::seq(Exp::ite(b(), p(), Exp::seq(Exp::label(0), q())), Exp::ret());
  EXPECT_EQ(label_extract(e, 0), Exp::seq(q(), Exp::ret()));
}

TEST(LabelExtract, LoopResumesThroughUnfolding) {
  const Exp loop = Exp::loop(b(), Exp::seq(p(), Exp::seq(Exp::label(0), q())));
  const Exp e = Exp::seq(loop, Exp::ret());
  EXPECT_EQ(label_extract(e, 0), Exp::seq(Exp::unfold(q(), loop), Exp::ret()));
}

TEST(LabelExtract, LabelAtEndOfBodyLeavesLoopOnly) {
  const Exp loop = Exp::loop(b(), Exp::seq(p(), Exp::label(0)));
  EXPECT_EQ(label_extract(Exp::seq(loop, Exp::ret()), 0), Exp::seq(loop, Exp::ret()));
}

TEST(LabelExtract, RejectsMissingOrRepeatedLabel) {
  EXPECT_THROW(label_extract(Exp::ret(), 0), InputError);
  EXPECT_THROW(label_extract(Exp::seq(Exp::label(0), Exp::label(0)), 0), InputError);
}

TEST(Parser, Fixtures) {
  auto reg = std::make_shared<Registry>();
  const Program a = fixture("while_loop.cfg", reg);
  const Program c = fixture("goto_loop.cfg", reg);
  EXPECT_TRUE(a.labels.empty());
  EXPECT_EQ(c.labels, std::vector<std::string>{"l"});
  EXPECT_EQ(reg->num_tests(), 2u);
  EXPECT_EQ(reg->num_actions(), 2u);
  EXPECT_TRUE(well_formed(c.body, &c.labels).empty());
  const Program nine = fixture("indicator_loop.cfg", reg);
  EXPECT_EQ(reg->num_vars(), 1u);
  EXPECT_EQ(nine.body.kind(), Exp::Kind::Seq);
  EXPECT_EQ(nine.body.lhs().kind(), Exp::Kind::While);
}

TEST(Parser, GkatMode) {
  auto reg = std::make_shared<Registry>();
  const Program loop = fixture("loop_p.gkat", reg, Lang::Gkat);
  EXPECT_TRUE(is_gkat(loop.body));
  EXPECT_EQ(loop.body, Exp::loop(BExp::one(), Exp::action(0)));
  EXPECT_NE(parse_error("goto l; label l;", Lang::Gkat).find("not part of GKAT"), std::string::npos);
  EXPECT_NE(parse_error("x := 1;", Lang::Gkat).find("not part of GKAT"), std::string::npos);
  EXPECT_NE(parse_error("if (x == 1) { p; }", Lang::Gkat).find("not part of GKAT"), std::string::npos);
}

TEST(Parser, AppendsReturnInCfMode) {
  const Program prog = parse_program("p;", std::make_shared<Registry>());
  EXPECT_EQ(prog.body, Exp::seq(Exp::action(0), Exp::ret()));
}

TEST(Parser, Desugaring) {
  auto reg = std::make_shared<Registry>();
  EXPECT_EQ(parse_program("diverge;", reg, Lang::Gkat).body, Exp::loop(BExp::one(), Exp::skip()));
  const Exp body = Exp::action(reg->action("p"));
  const BExp t = BExp::test(reg->test("t"));
  EXPECT_EQ(parse_program("do { p; } while (t);", reg, Lang::Gkat).body, Exp::seq(body, Exp::loop(t, body)));
  EXPECT_EQ(parse_program("do { p; } while (t);", reg).body,
            Exp::seq(Exp::unfold(body, Exp::loop(t, body)), Exp::ret()));
  EXPECT_EQ(parse_program("if (t) { p; }", reg, Lang::Gkat).body, Exp::ite(t, body, Exp::skip()));
}

TEST(Parser, ErrorsCarryPosition) {
  EXPECT_EQ(parse_error("p;\n  q $"), "src:2:5: unexpected character '$'");
  EXPECT_EQ(parse_error("if (t) { p; "), "src:1:13: expected '}', found end of input");
  EXPECT_NE(parse_error("p;\nif (p) { q; }").find("src:2:5:"), std::string::npos);
  EXPECT_NE(parse_error("p;\nif (p) { q; }").find("already declared as action"), std::string::npos);
}

TEST(Parser, RejectsIllFormedPrograms) {
  const std::string brk = parse_error("break;");
  EXPECT_NE(brk.find("ill-formed"), std::string::npos);
  EXPECT_NE(brk.find("condition 3"), std::string::npos);
  EXPECT_NE(parse_error("goto l;").find("condition 2"), std::string::npos);
  EXPECT_NE(parse_error("label l; p; label l;").find("defined twice"), std::string::npos);
  EXPECT_NE(parse_error("do { label l; p; } while (t);").find("do-while"), std::string::npos);
}

TEST(Parser, Language) {
  EXPECT_EQ(parse_lang("gkat"), Lang::Gkat);
  EXPECT_EQ(parse_lang("cfgkat"), Lang::Cfgkat);
  EXPECT_THROW(parse_lang("kat"), InputError);
}

TEST(Parser, PrinterUsesRegistryNames) {
  auto reg = std::make_shared<Registry>();
  const Program a = fixture("goto_loop.cfg", reg);
  const std::string text = to_string(a.body, reg.get(), &a.labels);
  EXPECT_NE(text.find("label l"), std::string::npos);
  EXPECT_NE(text.find("goto l"), std::string::npos);
  EXPECT_NE(text.find("t2"), std::string::npos);
}
