#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pegrec/grammar.hpp"

using namespace pegrec;

namespace {

bool only_core(const Expr& root) {
  bool ok = true;
  for_each_node(root, [&](const Expr& e) {
    switch (e.op) {
      case Op::Annotated:
      case Op::Optional:
      case Op::Plus:
      case Op::And:
        ok = false;
        break;
      default:
        break;
    }
  });
  return ok;
}

std::string error_of(std::string_view text) {
  try {
    parse_grammar(text);
  } catch (const GrammarError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ParseGrammar, TinyJavaHasThirteenSyntacticRules) {
  Grammar g = fixtures::tiny_java();
  EXPECT_EQ(g.syntactic.size(), 13u);
  EXPECT_EQ(g.start, "Prog");
  EXPECT_EQ(g.lexical.size(), 27u);
  EXPECT_TRUE(g.labels.empty());
}

TEST(ParseGrammar, EmptyBodyIsEpsilon) {
  Grammar g = parse_grammar("S <- ;");
  ASSERT_EQ(g.syntactic.size(), 1u);
  EXPECT_EQ(g.syntactic[0].body->op, Op::Empty);
}

TEST(ParseGrammar, EpsilonSpellings) {
  Grammar g = parse_grammar("S <- ε ; T <- () ;");
  EXPECT_EQ(g.syntactic[0].body->op, Op::Empty);
  EXPECT_EQ(g.syntactic[1].body->op, Op::Empty);
}

TEST(ParseGrammar, RejectsDirectLeftRecursion) {
  EXPECT_NE(error_of("S <- S 'a' ;").find("left recursion on S"), std::string::npos);
}

TEST(ParseGrammar, RejectsLeftRecursionThroughNullablePrefix) {
  EXPECT_NE(error_of("S <- T? U ; T <- 'x' ; U <- 'y'* S ;").find("left recursion"), std::string::npos);
}

TEST(ParseGrammar, AcceptsRecursionAfterConsumingPrefix) {
  EXPECT_NO_THROW(parse_grammar("S <- 'a' S / 'b' ;"));
}

TEST(ParseGrammar, RejectsUndefinedNonterminal) {
  EXPECT_NE(error_of("S <- T ;").find("undefined nonterminal T"), std::string::npos);
}

TEST(ParseGrammar, RejectsUndefinedTokenKind) {
  EXPECT_NE(error_of("S <- NUM ;").find("undefined token kind NUM"), std::string::npos);
}

TEST(ParseGrammar, RejectsDuplicateRule) {
  EXPECT_NE(error_of("S <- 'a' ;\nS <- 'b' ;").find("duplicate rule S"), std::string::npos);
}

TEST(ParseGrammar, RejectsThrowOfFail) {
  EXPECT_NE(error_of("S <- 'a' / ^fail ;").find("reserved label fail"), std::string::npos);
}

TEST(ParseGrammar, RejectsRecoveryForUndeclaredLabel) {
  EXPECT_NE(error_of("S <- 'a' ;\n%recovery\nmissing <- 'b' ;").find("undeclared label missing"),
            std::string::npos);
}

TEST(ParseGrammar, RejectsReservedEofRule) {
  EXPECT_NE(error_of("S <- 'a' ; EOF <- 'x' ;").find("reserved"), std::string::npos);
}

TEST(ParseGrammar, SyntaxErrorCarriesLineAndColumn) {
  try {
    parse_grammar("S <- 'a' ;\nT <- ( 'b' ;\n");
    FAIL() << "expected an error";
  } catch (const GrammarError& e) {
    ASSERT_TRUE(e.where().has_value());
    EXPECT_EQ(e.where()->line, 2u);
    EXPECT_EQ(std::string(e.what()).rfind("2:", 0), 0u) << e.what();
  }
}

TEST(ParseGrammar, RecordsRulePositions) {
  Grammar g = parse_grammar("S <- T ;\n  T <- 'a' ;");
  EXPECT_EQ(g.syntactic[1].pos.line, 2u);
  EXPECT_EQ(g.syntactic[1].pos.column, 3u);
}

TEST(ParseGrammar, StartDirective) {
  Grammar g = parse_grammar("%start T ;\nS <- 'a' ;\nT <- S ;");
  EXPECT_EQ(g.start, "T");
}

TEST(ParseGrammar, CollectsLabelsAndRecovery) {
  Grammar g = parse_grammar("S <- 'a' [B]^needb ^other ;\nB <- 'b' ;\n%recovery\nneedb <- (!'c' .)* ;");
  EXPECT_EQ(g.labels, (std::vector<std::string>{"needb", "other"}));
  EXPECT_EQ(g.recovery.count("needb"), 1u);
}

TEST(ParseGrammar, LexicalRulesAreCharacterLevel) {
  Grammar g = parse_grammar("S <- ID ;\nID <- [a-z] ([a-z0-9] / '_')* ;");
  const Rule* id = g.find_lexical("ID");
  ASSERT_NE(id, nullptr);
  EXPECT_EQ(id->body->kid(0).op, Op::CharClass);
}

TEST(ParseGrammar, LabelsNotAllowedInLexicalRules) {
  EXPECT_FALSE(error_of("S <- ID ;\nID <- [a-z]^bad ;").empty());
}

TEST(Desugar, AnnotatedBecomesChoiceWithThrow) {
  ExprPtr d = desugar(annotated(terminal("RCUR"), "rcblk"));
  ASSERT_EQ(d->op, Op::Choice);
  EXPECT_EQ(d->kid(0).op, Op::Terminal);
  EXPECT_EQ(d->kid(0).name, "RCUR");
  EXPECT_EQ(d->kid(1).op, Op::Throw);
  EXPECT_EQ(d->kid(1).name, "rcblk");
  EXPECT_EQ(d->kid(1).expected, "RCUR");
}

TEST(Desugar, OptionalBecomesChoiceWithEmpty) {
  ExprPtr d = desugar(optional(terminal("SEMI")));
  ASSERT_EQ(d->op, Op::Choice);
  EXPECT_EQ(d->kid(0).name, "SEMI");
  EXPECT_EQ(d->kid(1).op, Op::Empty);
}

TEST(Desugar, PlusBecomesSequenceWithStar) {
  ExprPtr d = desugar(plus(terminal("X")));
  ASSERT_EQ(d->op, Op::Sequence);
  EXPECT_EQ(d->kid(0).name, "X");
  ASSERT_EQ(d->kid(1).op, Op::Star);
  EXPECT_EQ(d->kid(1).kid().name, "X");
}

TEST(Desugar, AndBecomesDoubleNegation) {
  ExprPtr d = desugar(and_(seq(nonterminal("exp"), terminal("ASSIGN"))));
  ASSERT_EQ(d->op, Op::Not);
  ASSERT_EQ(d->kid().op, Op::Not);
  EXPECT_EQ(d->kid().kid().op, Op::Sequence);
}

TEST(Desugar, LeavesOnlyCoreConstructors) {
  Grammar g = desugar(fixtures::tiny_java_labeled());
  for (const auto& r : g.syntactic) EXPECT_TRUE(only_core(*r.body)) << r.name;
  for (const auto& r : g.lexical) EXPECT_TRUE(only_core(*r.body)) << r.name;
  EXPECT_EQ(g.labels.size(), 40u);
}

TEST(Desugar, IsIdempotent) {
  Grammar once = desugar(fixtures::tiny_java_labeled());
  Grammar twice = desugar(once);
  EXPECT_EQ(serialize_grammar(once), serialize_grammar(twice));
  EXPECT_TRUE(structurally_equal(once, twice));
}

TEST(Serialize, RoundTripsTinyJava) {
  Grammar g = fixtures::tiny_java();
  Grammar back = parse_grammar(serialize_grammar(g));
  EXPECT_TRUE(structurally_equal(g, back));
  EXPECT_EQ(serialize_grammar(back), serialize_grammar(g));
}

TEST(Serialize, ReintroducesAnnotationSugar) {
  Grammar g = desugar(fixtures::tiny_java_labeled());
  std::string text = serialize_grammar(g);
  EXPECT_NE(text.find("WhileStmt <- WHILE [LPAR]^lpw [Exp]^condw [RPAR]^rpw [Stmt]^body ;"), std::string::npos)
      << text;
}

TEST(Serialize, EmitsRecoverySection) {
  Grammar g = parse_grammar("S <- 'a' [B]^nb [B]^nb2 ;\nB <- 'b' ;\n%recovery\nnb2 <- 'x' ;\nnb <- (!'c' .)* ;");
  std::string text = serialize_grammar(g);
  std::size_t rec = text.find("%recovery\n");
  ASSERT_NE(rec, std::string::npos);
  std::size_t nb = text.find("nb <- ", rec);
  std::size_t nb2 = text.find("nb2 <- ", rec);
  EXPECT_LT(nb, nb2);
  EXPECT_TRUE(structurally_equal(g, parse_grammar(text)));
}

TEST(Serialize, EscapesLiterals) {
  Grammar g = parse_grammar(R"(S <- "'" '"' '\\' QQ ; QQ <- '\n' [\]a-] ;)");
  Grammar back = parse_grammar(serialize_grammar(g));
  EXPECT_TRUE(structurally_equal(g, back)) << serialize_grammar(g);
}

TEST(Serialize, RoundTripsRandomGrammars) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    Grammar g = oracle::random_grammar(rng, 5, 4);
    std::string text = serialize_grammar(g);
    Grammar back = parse_grammar(text);
    EXPECT_TRUE(structurally_equal(g, back)) << text;
    EXPECT_EQ(serialize_grammar(back), text);
  }
}

TEST(Grammar, TokenKindsInDeclarationOrder) {
  Grammar g = parse_grammar("S <- BB 'x' AA 'y' ;\nBB <- 'b' ;\nAA <- 'a' ;");
  EXPECT_EQ(g.token_kinds(), (std::vector<std::string>{"BB", "AA", "'x'", "'y'"}));
}
