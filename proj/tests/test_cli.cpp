#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "datum_config.hpp"
#include "expr.hpp"
#include "iserre/relcheck.hpp"
#include "test_data.hpp"

using namespace iserre;
using namespace iserre::cli;
namespace fs = std::filesystem;

namespace {

const std::string kConfigs = std::string(ISERRE_SOURCE_DIR) + "/configs/";

struct CliRun {
  int code;
  std::string out, err;
};

CliRun invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

UTilde eval(const IQGContext& C, const std::string& text) { return eval_expr(C, *parse_expr(text)); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("iserre-cli-" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(DatumConfig, ParsesExampleConfigs) {
  const SatakeDatum a2 = load_datum(kConfigs + "split_a2.datum");
  EXPECT_EQ(a2.rank(), 2);
  EXPECT_TRUE(validate_satake(a2).ok());
  const SatakeDatum b3 = load_datum(kConfigs + "b3.datum");
  EXPECT_TRUE(validate_satake(b3).ok()) << validate_satake(b3).to_string();
  EXPECT_TRUE(b3.is_bullet(2));
  EXPECT_EQ(b3.cartan.eps(0), 2);
  EXPECT_EQ(b3.cartan.a(2, 1), -2);
}

TEST(DatumConfig, InlineRowsAndComments) {
  const SatakeDatum d = parse_datum("rank = 2  # two nodes\ncartan 2 -1; -1 2\n");
  EXPECT_EQ(d.cartan.a(0, 1), -1);
  EXPECT_EQ(d.cartan.eps(1), 1);
  EXPECT_EQ(d.tau, (std::vector<int>{0, 1}));
}

TEST(DatumConfig, RejectsNonGcm) {
  EXPECT_THROW(load_datum(kConfigs + "bad_gcm.datum"), InvalidDatum);
  EXPECT_THROW(parse_datum("rank 2\ncartan\n2 1\n1 2\n"), InvalidDatum);
}

TEST(DatumConfig, SyntaxErrorsCarryPositions) {
  auto where = [](const std::string& text) -> std::pair<int, int> {
    try {
      parse_datum(text);
    } catch (const ConfigError& e) {
      return {e.line(), e.column()};
    }
    return {0, 0};
  };
  EXPECT_EQ(where("rank 2\ncartan\n 2 -1\n-1 x\n").first, 4);
  EXPECT_EQ(where("rank 2\ncartan\n 2 -1\n-1 x\n").second, 4);
  EXPECT_EQ(where("rank 2\nrank 2\n").first, 2);
  EXPECT_EQ(where("rank 2\ncolour red\n").first, 2);
  EXPECT_EQ(where("rank 2\ncartan 2 -1; -1 2\nbullet 3\n").first, 3);
  EXPECT_EQ(where("rank 2\ncartan 2 -1; -1 2\ntau 1 1\n").first, 3);
  EXPECT_NE(where("cartan 2 -1; -1 2\n").first, 0);
  // a non-symmetric matrix needs explicit epsilon
  EXPECT_NE(where("rank 2\ncartan 2 -2; -1 2\n").first, 0);
  try {
    load_datum("/nonexistent/x.datum");
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("x.datum"), std::string::npos);
  }
}

TEST(DatumConfig, FormatRoundTrip) {
  for (const auto& name : {"split_a2", "split_a2_eps2", "split_b2", "b3", "km3"}) {
    const SatakeDatum d = load_datum(kConfigs + name + ".datum");
    const std::string text = format_datum(d);
    const SatakeDatum e = parse_datum(text);
    EXPECT_EQ(format_datum(e), text) << name;
    EXPECT_EQ(cartan_digest(d.cartan), cartan_digest(e.cartan));
  }
  EXPECT_NE(cartan_digest(testdata::split_a2().cartan), cartan_digest(testdata::split_a2_eps2().cartan));
  EXPECT_EQ(hex_digest(0x1f).size(), 16u);
}

TEST(Expr, CommutatorOfEAndF) {
  IQGContext C(testdata::split_a2());
  const auto& U = C.alg();
  const UTilde x = eval(C, "[E[1], F[1]]");
  EXPECT_TRUE(C.is_zero(x - (U.Kt(0) - U.Kp(0)) * (Scalar::q() - Scalar::q_power(-1)).inv()));
}

TEST(Expr, WhiteExampleLeftSideInB3) {
  IQGContext C(testdata::b3());
  const UTilde x = eval(C, "B[2]^2*B[1] - [2]_2*B[2]*B[1]*B[2] + B[1]*B[2]^2");
  EXPECT_EQ(x, C.s_element(1, 0, 1));
  EXPECT_TRUE(C.is_zero(x - C.mul(C.central_factor(1), C.B(0))));
}

TEST(Expr, DividedPowers) {
  IQGContext C(testdata::split_a2());
  EXPECT_TRUE(C.is_zero(eval(C, "idp[1; 2; 1]") - eval(C, "(B[1]^2 - q*kt[1])/[2]_1")));
  EXPECT_TRUE(eval(C, "idp[1; -1; 0]").empty());
  EXPECT_EQ(eval(C, "idp[1;0;1]"), C.alg().one());
}

TEST(Expr, ScalarsAndPowers) {
  IQGContext C(testdata::split_a2(), Mode::sigma);
  const auto& U = C.alg();
  EXPECT_EQ(eval(C, "q^-2*3/4"), U.scalar(Scalar::q_power(-2) * Scalar(mpq_class(3, 4))));
  EXPECT_EQ(eval(C, "K[1]^-1*K[1]"), U.one());
  EXPECT_EQ(eval(C, "-E[2]"), U.E(1) * Scalar(-1));
  EXPECT_EQ(eval(C, "ς[1]"), eval(C, "s[1]"));
  EXPECT_EQ(eval(C, "[3]"), U.scalar(q_int(3)));
}

TEST(Expr, Errors) {
  IQGContext C(testdata::split_a2());
  EXPECT_THROW(eval(C, "E[3]"), ExprError);
  EXPECT_THROW(eval(C, "idp[0; 1; 0]"), ExprError);
  EXPECT_THROW(eval(C, "E[1]/F[1]"), ExprError);
  EXPECT_THROW(eval(C, "E[1]^-1"), ExprError);
  EXPECT_THROW(parse_expr("E[1] +"), ExprError);
  EXPECT_THROW(parse_expr("E[1]) "), ExprError);
  EXPECT_THROW(parse_expr("X[1]"), ExprError);
  EXPECT_THROW(parse_expr("idp[1; 2]"), ExprError);
  try {
    parse_expr("E[1] * * F[1]");
    FAIL();
  } catch (const ExprError& e) {
    EXPECT_EQ(e.position(), 7u);
  }
  SatakeDatum twisted = testdata::split_a2();
  twisted.tau = {1, 0};
  IQGContext T(twisted);
  EXPECT_ANY_THROW(eval(T, "idp[1; 2; 0]"));
}

TEST(Expr, PrintParseIsStable) {
  for (const std::string s : {"E[1]*F[2] - 3*K'[1]^2", "[B[1], idp[2;3;1]] + q^-1*kt[2]/[2]_1", "-(E[1] + F[1])^2",
                              "s[1]*(q - 1)/(q^2 + 1)*E[2]", "-q^3*K[1]^-2 + ((2*q^4)/(q^2 + 1))*F[2]*K[1]*K'[1]"}) {
    const std::string once = print_expr(*parse_expr(s));
    EXPECT_EQ(print_expr(*parse_expr(once)), once) << s;
  }
}

TEST(Expr, CanonicalPrintReevaluates) {
  for (Mode mode : {Mode::ktilde, Mode::sigma})
    for (const auto& d : {testdata::split_a2(), testdata::b3()}) {
      IQGContext C(d, mode);
      const int i = d.white().back() + 1;
      const std::string b = "B[" + std::to_string(i) + "]";
      for (const std::string s : {"idp[" + std::to_string(i) + ";3;0]*B[1]", "[E[1], F[1]]^2 + " + b + "*F[1]",
                                  "(" + b + " - E[1])^3"}) {
        const UTilde x = C.alg().canonical(eval(C, s));
        const std::string printed = x.to_string();
        const UTilde y = eval(C, printed);
        EXPECT_TRUE(C.is_zero(x - y)) << s << " -> " << printed;
        EXPECT_EQ(C.alg().canonical(y).to_string(), printed);
      }
    }
}

TEST(Cli, Validate) {
  EXPECT_EQ(invoke({"validate", "--datum", kConfigs + "b3.datum"}).code, kVerified);
  const CliRun bad = invoke({"validate", "--datum", kConfigs + "bad_gcm.datum"});
  EXPECT_EQ(bad.code, kInputError);
  EXPECT_NE(bad.err.find("invalid datum"), std::string::npos);
  EXPECT_EQ(invoke({"validate"}).code, kInputError);
  EXPECT_EQ(invoke({"frobnicate"}).code, kInputError);
  EXPECT_EQ(invoke({"--help"}).code, kVerified);
}

TEST(Cli, CheckVerdictsAndExitCodes) {
  const std::string b3 = kConfigs + "b3.datum";
  const CliRun ok = invoke({"check", "--datum", b3, "--relation", "iserre", "--i", "2", "--j", "1", "--n", "1", "--parity", "1"});
  EXPECT_EQ(ok.code, kVerified);
  EXPECT_NE(ok.out.find(": verified"), std::string::npos);

  const CliRun bad = invoke({"check", "--datum", kConfigs + "split_a2.datum", "--relation", "iserre", "--i", "1", "--j", "2",
                       "--parity", "1", "--mutate", "idp_sign"});
  EXPECT_EQ(bad.code, kRefuted);
  EXPECT_NE(bad.out.find("witness, normal_form"), std::string::npos);

  const CliRun range = invoke({"check", "--datum", b3, "--relation", "ytilde", "--i", "2", "--j", "1", "--m", "1"});
  EXPECT_EQ(range.code, kInputError);
  EXPECT_NE(range.out.find("unsupported"), std::string::npos);

  EXPECT_EQ(invoke({"check", "--datum", b3, "--relation", "iserre", "--i", "4", "--j", "1"}).code, kInputError);
  EXPECT_EQ(invoke({"check", "--datum", b3, "--relation", "nope", "--i", "2", "--j", "1"}).code, kInputError);
  EXPECT_EQ(invoke({"check", "--datum", b3, "--relation", "iserre", "--i", "2", "--j", "1", "--parity", "2"}).code,
            kInputError);
}

TEST(Cli, JsonReportIsDeterministic) {
  const std::vector<std::string> args{"check", "--datum", kConfigs + "split_b2.datum", "--relation", "recursion",
                                      "--i", "1", "--j", "2", "--m", "2", "--e", "-1", "--json"};
  const CliRun a = invoke(args), b = invoke(args);
  EXPECT_EQ(a.code, kVerified);
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["verdict"], "verified");
  EXPECT_EQ(a.out.find("seconds"), std::string::npos);
}

TEST(Cli, RhoAndCompare) {
  const CliRun r = invoke({"rho", "--datum", kConfigs + "split_a2.datum", "--i", "1", "--j", "2", "--n", "1"});
  EXPECT_EQ(r.code, kVerified);
  EXPECT_NE(r.out.find("rho(0,0) = q\n"), std::string::npos) << r.out;

  const CliRun c = invoke({"compare", "--datum", kConfigs + "split_a2_eps2.datum", "--datum2", kConfigs + "b3.datum", "--i",
                     "1", "--j", "2", "--i2", "2", "--j2", "1"});
  EXPECT_EQ(c.code, kVerified) << c.err;
  const CliRun m = invoke({"compare", "--datum", kConfigs + "split_a2.datum", "--datum2", kConfigs + "b3.datum", "--i", "1",
                     "--j", "2", "--i2", "2", "--j2", "1"});
  EXPECT_EQ(m.code, kInputError);
}

TEST(Cli, Expand) {
  const std::string a2 = kConfigs + "split_a2.datum";
  const CliRun z = invoke({"expand", "--datum", a2, "idp[1; -1; 0]"});
  EXPECT_EQ(z.code, kVerified);
  EXPECT_EQ(z.out, "0\n");
  const CliRun zero = invoke({"expand", "--datum", a2, "idp[1;2;1] - (B[1]^2 - q*kt[1])/[2]_1"});
  EXPECT_EQ(zero.out, "0\n");
  const CliRun err = invoke({"expand", "--datum", a2, "E[1] +"});
  EXPECT_EQ(err.code, kInputError);
  EXPECT_NE(err.err.find("expression error at offset"), std::string::npos);
}

TEST(Cli, SuiteOutputAndCache) {
  const fs::path dir = scratch_dir("suite");
  {
    std::ofstream cfg(dir / "suite.json");
    cfg << R"({"datum": ")" << kConfigs << R"(split_a2.datum", "checks": [
             {"relation": "iserre", "i": [1, 2], "j": [2, 1], "n": 1, "parity": [0, 1]},
             {"relation": "ytilde", "i": 1, "j": 2, "n": 1, "m": [-1, 2, 3], "parity": [0, 1], "e": [1, -1]},
             {"relation": "rho", "i": 1, "j": 2, "n": 1}]})";
  }
  const std::string cfg = (dir / "suite.json").string();
  const CliRun a = invoke({"suite", cfg, "--out", (dir / "a.json").string(), "--cache", (dir / "cache").string()});
  EXPECT_EQ(a.code, kInputError);  // i = j combinations are unsupported
  EXPECT_NE(a.out.find("verified/refuted/unsupported: 17/0/4"), std::string::npos) << a.out;
  ASSERT_TRUE(fs::exists(dir / "a.json"));
  bool cached = false;
  for (const auto& e : fs::directory_iterator(dir / "cache"))
    cached |= e.path().filename().string().rfind("uplus-", 0) == 0 && fs::file_size(e.path()) > 0;
  EXPECT_TRUE(cached);

  const CliRun b = invoke({"suite", cfg, "--out", (dir / "b.json").string(), "--cache", (dir / "cache").string(), "--jobs", "2"});
  EXPECT_EQ(b.out, a.out);
  EXPECT_EQ(b.err, "");
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
  const auto j = nlohmann::json::parse(slurp(dir / "a.json"));
  EXPECT_EQ(j["reports"].size(), 21u);
  fs::remove_all(dir);
}

TEST(Cli, SuiteResolvesDatumRelativeToConfig) {
  const CliRun r = invoke({"suite", kConfigs + "b3_suite.json"});
  EXPECT_EQ(r.code, kVerified) << r.out << r.err;
  EXPECT_NE(r.out.find("verified/refuted/unsupported: 63/0/0"), std::string::npos) << r.out;
}
