#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "datum_config.hpp"
#include "expr.hpp"
#include "iserre/relcheck.hpp"

namespace iserre::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string datum;
  std::string mode = "ktilde";
  std::string mutate;
  std::string cache;
  std::string out;
  bool force = false;
  bool timing = false;
  bool json = false;
  std::size_t witness_terms = 50;
  std::int64_t witness_dim = 16;
};

struct Params {
  std::string relation;
  int i = 0, j = 0, n = 1, m = 0, u = 0, parity = 0, t = 0, e = 1;
  int i2 = 0, j2 = 0;
  std::string datum2;
  std::string jpower = "plain";
};

class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Mode parse_mode(const std::string& s) { return s == "sigma" ? Mode::sigma : Mode::ktilde; }

Mutation parse_mutation(const std::string& s) {
  Mutation m;
  if (s == "idp_sign") m.idp_sign = true;
  else if (s == "r1") m.r1 = true;
  else if (s == "r2") m.r2 = true;
  return m;
}

int index0(int v, const SatakeDatum& d, const char* flag) {
  if (v < 1 || v > d.rank())
    throw InputError(std::string("--") + flag + " must be in 1.." + std::to_string(d.rank()));
  return v - 1;
}

// U+ caches live in DIR/uplus-<digest>.cache and are keyed by the Cartan part.
class PlusCache {
 public:
  PlusCache(const CartanDatum& c, const std::string& dir, std::ostream& err)
      : plus_(std::make_shared<UPlusAlgebra>(c)), err_(err) {
    if (dir.empty()) return;
    path_ = fs::path(dir) / ("uplus-" + hex_digest(cartan_digest(c)) + ".cache");
    std::ifstream in(path_);
    if (!in) return;
    std::stringstream ss;
    ss << in.rdbuf();
    if (!plus_->import_cache(ss.str())) err_ << "warning: ignoring unreadable cache " << path_.string() << "\n";
  }
  const std::shared_ptr<UPlusAlgebra>& plus() const { return plus_; }
  void save() const {
    if (path_.empty()) return;
    std::error_code ec;
    fs::create_directories(path_.parent_path(), ec);
    const fs::path tmp = path_.string() + ".tmp";
    {
      std::ofstream o(tmp);
      o << plus_->export_cache();
      if (!o) {
        err_ << "warning: could not write cache " << path_.string() << "\n";
        return;
      }
    }
    fs::rename(tmp, path_, ec);
    if (ec) err_ << "warning: could not write cache " << path_.string() << "\n";
  }

 private:
  std::shared_ptr<UPlusAlgebra> plus_;
  fs::path path_;
  std::ostream& err_;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream o(path);
  o << text;
  if (!o) throw InputError("cannot write '" + path + "'");
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::verified: return kVerified;
    case Verdict::refuted: return kRefuted;
    default: return kInputError;
  }
}

std::string params_string(const Report& r) {
  std::string s;
  for (const auto& [k, v] : r.params) s += " " + k + "=" + v;
  return s;
}

void print_report(std::ostream& out, const Report& r, bool json) {
  if (json) {
    out << r.to_json().dump(2) << "\n";
    return;
  }
  out << r.relation << params_string(r) << ": " << to_string(r.verdict) << "\n";
  if (r.verdict == Verdict::refuted && !r.witness.empty())
    out << "witness, " << r.witness_kind << " (" << r.witness_terms << (r.witness_terms == 1 ? " term" : " terms")
        << "): " << r.witness << "\n";
  if (r.verdict != Verdict::verified && !r.note.empty()) out << r.note << (r.note.back() == '\n' ? "" : "\n");
  if (r.timing) out << "seconds: " << r.seconds << "\n";
}

SatakeDatum datum_or_throw(const std::string& path) {
  if (path.empty()) throw InputError("--datum is required");
  return load_datum(path);
}

CheckOptions options(const Common& c) {
  CheckOptions o;
  o.witness_terms = c.witness_terms;
  o.timing = c.timing;
  o.witness_dim_limit = c.witness_dim;
  return o;
}

int cmd_validate(const Common& c, std::ostream& out) {
  const SatakeDatum d = datum_or_throw(c.datum);
  const ValidationReport rep = validate_satake(d);
  out << rep.to_string();
  return rep.ok() ? kVerified : kInputError;
}

int cmd_expand(const Common& c, const std::string& text, bool canonical_only, std::ostream& out, std::ostream& err) {
  const SatakeDatum d = datum_or_throw(c.datum);
  PlusCache cache(d.cartan, c.cache, err);
  IQGContext ctx(d, parse_mode(c.mode), parse_mutation(c.mutate), cache.plus(), c.force);
  ExprPtr e = parse_expr(text);
  UTilde x = eval_expr(ctx, *e);
  if (!canonical_only) x = ctx.alg().canonical(x);
  const std::string s = x.to_string();
  out << s << "\n";
  if (!c.out.empty()) write_file(c.out, s + "\n");
  cache.save();
  return kVerified;
}

int cmd_check(const Common& c, const Params& p, std::ostream& out, std::ostream& err) {
  const SatakeDatum d = datum_or_throw(c.datum);
  const int i = index0(p.i, d, "i"), j = index0(p.j, d, "j");
  if (p.parity != 0 && p.parity != 1) throw InputError("--parity must be 0 or 1");
  if (p.e != 1 && p.e != -1) throw InputError("--e must be 1 or -1");
  PlusCache cache(d.cartan, c.cache, err);
  const CheckOptions o = options(c);
  const JPower jp = p.jpower == "divided" ? JPower::divided : JPower::plain;
  Report r;
  if (p.relation == "lusztig") {
    UTildeAlgebra alg(cache.plus(), parse_mutation(c.mutate));
    r = check_lusztig(alg, i, j, p.n, p.m, p.e, o);
  } else {
    IQGContext ctx(d, parse_mode(c.mode), parse_mutation(c.mutate), cache.plus(), c.force);
    if (p.relation == "iserre") r = check_iserre(ctx, i, j, p.n, p.parity, o);
    else if (p.relation == "nstd") r = check_nstd(ctx, i, j, p.n, p.u, p.parity, o);
    else if (p.relation == "recursion") r = check_recursion(ctx, i, j, p.n, p.m, p.parity, p.t, p.e, jp, o);
    else
      r = check_ytilde(ctx, i, j, p.n, p.m, p.parity, p.t, p.e,
                       p.relation == "ytilde" ? YVariant::y : YVariant::y_prime, jp, o);
  }
  print_report(out, r, c.json);
  if (!c.out.empty()) write_file(c.out, r.to_json().dump(2) + "\n");
  cache.save();
  return exit_code(r.verdict);
}

int cmd_rho(const Common& c, const Params& p, std::ostream& out, std::ostream& err) {
  const SatakeDatum d = datum_or_throw(c.datum);
  const int i = index0(p.i, d, "i"), j = index0(p.j, d, "j");
  PlusCache cache(d.cartan, c.cache, err);
  IQGContext ctx(d, parse_mode(c.mode), parse_mutation(c.mutate), cache.plus(), c.force);
  const RhoTable t = extract_rho(ctx, i, j, p.n);
  if (c.json) out << t.to_json().dump(2) << "\n";
  else out << t.to_string();
  if (!c.out.empty()) write_file(c.out, t.to_json().dump(2) + "\n");
  cache.save();
  return t.ok() ? kVerified : kRefuted;
}

int cmd_compare(const Common& c, const Params& p, std::ostream& out, std::ostream& err) {
  const SatakeDatum a = datum_or_throw(c.datum);
  if (p.datum2.empty()) throw InputError("--datum2 is required");
  const SatakeDatum b = load_datum(p.datum2);
  const int i = index0(p.i, a, "i"), j = index0(p.j, a, "j");
  const int i2 = index0(p.i2 ? p.i2 : p.i, b, "i2"), j2 = index0(p.j2 ? p.j2 : p.j, b, "j2");
  PlusCache ca(a.cartan, c.cache, err), cb(b.cartan, c.cache, err);
  const Mode mode = parse_mode(c.mode);
  IQGContext x(a, mode, parse_mutation(c.mutate), ca.plus(), c.force);
  IQGContext y(b, mode, parse_mutation(c.mutate), cb.plus(), c.force);
  const Report r = universality_compare(x, y, i, j, i2, j2, p.n, options(c));
  if (c.json) {
    out << r.to_json().dump(2) << "\n";
  } else {
    out << r.note;
    print_report(out, r, false);
  }
  if (!c.out.empty()) write_file(c.out, r.to_json().dump(2) + "\n");
  ca.save();
  cb.save();
  return exit_code(r.verdict);
}

int cmd_suite(const Common& c, const std::string& config, unsigned jobs, std::ostream& out, std::ostream& err) {
  std::ifstream in(config);
  if (!in) throw InputError("cannot read suite config '" + config + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const fs::path base = fs::path(config).parent_path();
  SuiteConfig cfg = parse_suite(ss.str(), [&](const std::string& path) {
    const fs::path p(path);
    return load_datum((p.is_absolute() || base.empty() ? p : base / p).string());
  });
  if (jobs) cfg.jobs = jobs;
  if (c.mode != "ktilde") cfg.mode = parse_mode(c.mode);
  PlusCache cache(cfg.datum.cartan, c.cache, err);
  if (!c.force) {
    const ValidationReport v = validate_satake(cfg.datum);
    if (!v.ok()) throw InvalidDatum(v.to_string());
  }
  const auto reports = run_suite(cfg, options(c), parse_mutation(c.mutate), cache.plus());
  // written only after every check has finished
  nlohmann::ordered_json j;
  j["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : reports) j["reports"].push_back(r.to_json());
  j["summary"] = summary_line(reports);
  if (!c.out.empty()) write_file(c.out, j.dump(2) + "\n");
  if (c.json) {
    out << j.dump(2) << "\n";
  } else {
    for (const auto& r : reports) out << r.relation << params_string(r) << ": " << to_string(r.verdict) << "\n";
    out << summary_line(reports) << "\n";
  }
  cache.save();
  int code = kVerified;
  for (const auto& r : reports) {
    if (r.verdict == Verdict::refuted) return kRefuted;
    if (r.verdict == Verdict::unsupported) code = kInputError;
  }
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact checks of iSerre and Serre-Lusztig relations", "iserre"};
  app.require_subcommand(1);
  Common c;
  Params p;
  std::string expr_text, suite_path;
  unsigned jobs = 0;

  auto common = [&](CLI::App* s) {
    s->add_option("--datum", c.datum, "Satake datum config file");
    s->add_option("--mode", c.mode, "ktilde or sigma")->check(CLI::IsMember({"ktilde", "sigma"}));
    s->add_option("--cache", c.cache, "directory for per-weight U+ caches");
    s->add_option("--out", c.out, "write the JSON record to this file");
    s->add_flag("--force", c.force, "accept a datum that fails admissibility");
    s->add_flag("--json", c.json, "print JSON instead of text");
    s->add_flag("--timing", c.timing, "record wall time");
    s->add_option("--witness-terms", c.witness_terms, "terms shown in a refutation witness");
    s->add_option("--witness-dim", c.witness_dim, "largest weight dimension for normal-form witnesses");
    s->add_option("--mutate", c.mutate, "inject a known defect (testing only)")
        ->check(CLI::IsMember({"idp_sign", "r1", "r2"}));
  };
  auto indices = [&](CLI::App* s) {
    s->add_option("--i", p.i, "node i (1-based)")->required();
    s->add_option("--j", p.j, "node j (1-based)")->required();
    s->add_option("--n", p.n, "power of B_j (default 1)");
  };

  auto* validate = app.add_subcommand("validate", "print the admissibility report of a datum");
  common(validate);
  auto* expand = app.add_subcommand("expand", "print the normal form of an expression");
  common(expand);
  bool raw = false;
  expand->add_option("expr", expr_text, "expression")->required();
  expand->add_flag("--raw", raw, "print the straightened form without reducing U+ parts");

  auto* check = app.add_subcommand("check", "run one relation check");
  common(check);
  indices(check);
  check->add_option("--relation", p.relation, "relation family")
      ->required()
      ->check(CLI::IsMember({"iserre", "nstd", "recursion", "ytilde", "ytilde-prime", "lusztig"}));
  check->add_option("--m", p.m, "degree in B_i (recursion, ytilde, lusztig)");
  check->add_option("--u", p.u, "extra degree of the non-standard relation");
  check->add_option("--parity", p.parity, "parity of the divided powers, 0 or 1");
  check->add_option("--t", p.t, "parity of the j divided power (divided j-power mode)");
  check->add_option("--e", p.e, "sign e, 1 or -1");
  check->add_option("--jpower", p.jpower, "plain B_j^n or divided B_j^(n)")->check(CLI::IsMember({"plain", "divided"}));

  auto* rho = app.add_subcommand("rho", "extract the coefficient table of the Serre-type relation");
  common(rho);
  indices(rho);

  auto* compare = app.add_subcommand("compare", "compare coefficient tables of two data");
  common(compare);
  indices(compare);
  compare->add_option("--datum2", p.datum2, "second datum config")->required();
  compare->add_option("--i2", p.i2, "i in the second datum (default --i)");
  compare->add_option("--j2", p.j2, "j in the second datum (default --j)");

  auto* suite = app.add_subcommand("suite", "run a suite config");
  common(suite);
  suite->add_option("config", suite_path, "suite config (JSON)")->required();
  suite->add_option("--jobs", jobs, "worker threads");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kVerified : kInputError;
  }

  try {
    if (validate->parsed()) return cmd_validate(c, out);
    if (expand->parsed()) return cmd_expand(c, expr_text, raw, out, err);
    if (check->parsed()) return cmd_check(c, p, out, err);
    if (rho->parsed()) return cmd_rho(c, p, out, err);
    if (compare->parsed()) return cmd_compare(c, p, out, err);
    return cmd_suite(c, suite_path, jobs, out, err);
  } catch (const ExprError& e) {
    err << "expression error " << e.what() << "\n";
  } catch (const ConfigError& e) {
    err << "datum config error: " << e.what() << "\n";
  } catch (const InvalidDatum& e) {
    err << "invalid datum (use --force to override):\n" << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  } catch (const UnsupportedCase& e) {
    err << "unsupported: " << e.what() << "\n";
  } catch (const NotFiniteType& e) {
    err << "error: " << e.what() << "\n";
  }
  return kInputError;
}

}  // namespace iserre::cli
