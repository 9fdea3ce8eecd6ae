#pragma once

// Relation checks on concrete data: each builds the relevant element in full
// and asks the exact zero test; plus extraction of the universal coefficients
// of the Serre-type relation S = C.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iserre/iqg.hpp"
#include "json.hpp"

namespace iserre {

enum class Verdict { verified, refuted, unsupported };
std::string to_string(Verdict v);

struct CheckOptions {
  std::size_t witness_terms = 50;  // truncation of the printed witness
  bool timing = false;             // record wall time in the JSON record
  /// Witnesses are printed in normal form while every weight involved has
  /// dimension at most this; beyond it one nonzero pairing is reported.
  std::int64_t witness_dim_limit = 16;
};

struct Report {
  std::string relation;
  /// Parameters in a fixed order; indices are 1-based as printed.
  std::vector<std::pair<std::string, std::string>> params;
  Verdict verdict = Verdict::unsupported;
  std::string note;     // reason for unsupported, range remarks
  std::string witness_kind;  // "normal_form" or "pairing"
  std::string witness;       // normal form (truncated) or one nonzero pairing
  std::size_t witness_terms = 0;
  std::size_t element_terms = 0;
  double seconds = 0;
  bool timing = false;

  nlohmann::ordered_json to_json() const;
};

/// Sum over r + s = 1 - n a_ij + 2u of (-1)^r B^(r)_{i,p} B_j^n B^(s)_{i,p+n a_ij}.
UTilde iserre_element(const IQGContext& ctx, int i, int j, int n, int p, int u = 0);

Report check_iserre(const IQGContext& ctx, int i, int j, int n, int p, const CheckOptions& o = {});
Report check_nstd(const IQGContext& ctx, int i, int j, int n, int u, int p, const CheckOptions& o = {});
Report check_recursion(const IQGContext& ctx, int i, int j, int n, int m, int p, int t, int e, JPower jp,
                       const CheckOptions& o = {});
enum class YVariant { y, y_prime };
Report check_ytilde(const IQGContext& ctx, int i, int j, int n, int m, int p, int t, int e, YVariant v, JPower jp,
                    const CheckOptions& o = {});
Report check_lusztig(const UTildeAlgebra& alg, int i, int j, int n, int m, int e, const CheckOptions& o = {});

struct RhoTable {
  int i = 0, j = 0, n = 0;
  int a_ij = 0, eps_i = 0, eps_j = 0;
  /// Nonzero entries only.
  std::map<std::pair<int, int>, Scalar> entries;
  bool solved = false;    // the linear system is consistent with a unique solution
  bool residual_zero = false;
  bool laurent = false;   // every entry has denominator 1
  std::string problem;    // empty on success

  bool ok() const { return solved && residual_zero && laurent; }
  /// Entrywise identity of the coefficient tables (metadata excluded).
  bool same_entries(const RhoTable& o) const { return entries == o.entries; }
  nlohmann::ordered_json to_json() const;
  std::string to_string() const;
};

/// (k~_i r_i(T E_i))^{(1 - n a_ij - r - s)/2} B_i^r B_j^n B_i^s; sigma[i] replaces k~_i in sigma mode.
UTilde rho_monomial(const IQGContext& ctx, int i, int j, int n, int r, int s);
/// C_{i,j;n} assembled from a table.
UTilde rho_combination(const IQGContext& ctx, const RhoTable& t);
/// Solves S_{i,j;n} = sum rho_{r,s} rho_monomial(r, s) over r + s <= -1 - n a_ij of the right parity.
RhoTable extract_rho(const IQGContext& ctx, int i, int j, int n);
Report check_rho(const IQGContext& ctx, int i, int j, int n, const CheckOptions& o = {});

/// Throws std::invalid_argument when the local data (a_ij, eps_i, eps_j) differ.
Report universality_compare(const IQGContext& a, const IQGContext& b, int ia, int ja, int ib, int jb, int n,
                            const CheckOptions& o = {});

// ---------------------------------------------------------------------------
// Suites

/// One relation with a grid of parameter values; every combination is run.
struct CheckSpec {
  std::string relation;  // iserre | nstd | recursion | ytilde | ytilde-prime | lusztig | rho
  std::map<std::string, std::vector<int>> grid;  // 1-based i, j
};

struct SuiteConfig {
  SatakeDatum datum;
  Mode mode = Mode::ktilde;
  JPower jpower = JPower::plain;
  std::vector<CheckSpec> checks;
  unsigned jobs = 1;
};

/// Parses the JSON suite format; `datum_loader` turns the "datum" entry
/// (a path) into a datum. Throws std::invalid_argument on malformed input.
SuiteConfig parse_suite(const std::string& text,
                        const std::function<SatakeDatum(const std::string&)>& datum_loader);

/// Expands the grids in order and runs the checks (concurrently when
/// cfg.jobs > 1); the result order depends only on the configuration.
std::vector<Report> run_suite(const SuiteConfig& cfg, const CheckOptions& o = {}, const Mutation& mut = {},
                              std::shared_ptr<UPlusAlgebra> plus = nullptr);

/// "verified/refuted/unsupported: a/b/c"
std::string summary_line(const std::vector<Report>& reports);

}  // namespace iserre
