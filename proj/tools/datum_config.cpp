#include "datum_config.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

namespace iserre::cli {

ConfigError::ConfigError(int line, int column, const std::string& msg)
    : std::invalid_argument("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string text;
  int column;  // 1-based
};

struct Line {
  int number;
  std::vector<Token> tokens;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    Line line{number, {}};
    std::size_t k = 0;
    while (k < raw.size()) {
      const char c = raw[k];
      if (c == ' ' || c == '\t' || c == '\r' || c == ',') {
        ++k;
      } else if (c == ';' || c == '=') {
        line.tokens.push_back({std::string(1, c), static_cast<int>(k) + 1});
        ++k;
      } else {
        std::size_t e = k;
        while (e < raw.size() && std::string(" \t\r,;=").find(raw[e]) == std::string::npos) ++e;
        line.tokens.push_back({raw.substr(k, e - k), static_cast<int>(k) + 1});
        k = e;
      }
    }
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

int to_int(const Line& l, const Token& t) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(t.text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != t.text.size() || t.text.empty()) throw ConfigError(l.number, t.column, "expected an integer, got '" + t.text + "'");
  return v;
}

bool is_key(const std::string& s) {
  return s == "rank" || s == "cartan" || s == "epsilon" || s == "bullet" || s == "tau";
}

}  // namespace

SatakeDatum parse_datum(const std::string& text) {
  const auto lines = tokenize(text);
  std::optional<int> rank;
  std::optional<std::vector<std::vector<int>>> cartan;
  std::optional<std::vector<int>> eps, bullet, tau;
  int cartan_line = 0, eps_line = 0, bullet_line = 0, tau_line = 0;

  auto values = [](const Line& l, std::size_t from) {
    std::vector<int> v;
    for (std::size_t k = from; k < l.tokens.size(); ++k) v.push_back(to_int(l, l.tokens[k]));
    return v;
  };

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const Line& l = lines[li];
    const Token& key = l.tokens[0];
    if (!is_key(key.text)) throw ConfigError(l.number, key.column, "unknown key '" + key.text + "'");
    std::size_t from = 1;
    if (l.tokens.size() > 1 && l.tokens[1].text == "=") from = 2;
    auto dup = [&](bool seen) {
      if (seen) throw ConfigError(l.number, key.column, "duplicate key '" + key.text + "'");
    };
    if (key.text == "rank") {
      dup(rank.has_value());
      if (l.tokens.size() != from + 1) throw ConfigError(l.number, key.column, "rank takes one integer");
      rank = to_int(l, l.tokens[from]);
      if (*rank <= 0) throw ConfigError(l.number, l.tokens[from].column, "rank must be positive");
    } else if (key.text == "cartan") {
      dup(cartan.has_value());
      if (!rank) throw ConfigError(l.number, key.column, "rank must precede cartan");
      cartan_line = l.number;
      std::vector<std::vector<int>> rows(1);
      std::vector<int> row_lines;
      if (l.tokens.size() > from) {
        // inline rows separated by ';'
        for (std::size_t k = from; k < l.tokens.size(); ++k) {
          if (l.tokens[k].text == ";") {
            rows.emplace_back();
          } else {
            rows.back().push_back(to_int(l, l.tokens[k]));
          }
        }
        if (rows.back().empty()) rows.pop_back();
        row_lines.assign(rows.size(), l.number);
      } else {
        rows.clear();
        while (static_cast<int>(rows.size()) < *rank) {
          if (li + 1 == lines.size() || is_key(lines[li + 1].tokens[0].text))
            throw ConfigError(lines[li].number, 1, "cartan needs " + std::to_string(*rank) + " rows");
          ++li;
          rows.push_back(values(lines[li], 0));
          row_lines.push_back(lines[li].number);
        }
      }
      if (static_cast<int>(rows.size()) != *rank)
        throw ConfigError(cartan_line, key.column, "cartan has " + std::to_string(rows.size()) + " rows, rank is " + std::to_string(*rank));
      for (std::size_t r = 0; r < rows.size(); ++r)
        if (static_cast<int>(rows[r].size()) != *rank)
          throw ConfigError(row_lines[r], 1,
                            "cartan row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) + " entries");
      cartan = std::move(rows);
    } else {
      auto& slot = key.text == "epsilon" ? eps : key.text == "bullet" ? bullet : tau;
      dup(slot.has_value());
      (key.text == "epsilon" ? eps_line : key.text == "bullet" ? bullet_line : tau_line) = l.number;
      slot = values(l, from);
    }
  }

  if (!rank) throw ConfigError(lines.empty() ? 1 : lines.back().number, 1, "missing key 'rank'");
  if (!cartan) throw ConfigError(lines.back().number, 1, "missing key 'cartan'");
  const int n = *rank;
  if (!eps) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if ((*cartan)[i][j] != (*cartan)[j][i]) throw ConfigError(cartan_line, 1, "epsilon is required for a non-symmetric cartan matrix");
    eps = std::vector<int>(n, 1);
  } else if (static_cast<int>(eps->size()) != n) {
    throw ConfigError(eps_line, 1, "epsilon has " + std::to_string(eps->size()) + " entries, rank is " + std::to_string(n));
  }

  SatakeDatum d;
  d.cartan = CartanDatum(*cartan, *eps);
  d.bullet.assign(n, false);
  for (int b : bullet.value_or(std::vector<int>{})) {
    if (b < 1 || b > n) throw ConfigError(bullet_line, 1, "bullet index " + std::to_string(b) + " out of range");
    if (d.bullet[b - 1]) throw ConfigError(bullet_line, 1, "bullet index " + std::to_string(b) + " repeated");
    d.bullet[b - 1] = true;
  }
  d.tau.resize(n);
  if (!tau) {
    for (int i = 0; i < n; ++i) d.tau[i] = i;
  } else {
    if (static_cast<int>(tau->size()) != n)
      throw ConfigError(tau_line, 1, "tau has " + std::to_string(tau->size()) + " entries, rank is " + std::to_string(n));
    std::vector<bool> hit(n, false);
    for (int i = 0; i < n; ++i) {
      const int t = (*tau)[i];
      if (t < 1 || t > n || hit[t - 1]) throw ConfigError(tau_line, 1, "tau is not a permutation of 1.." + std::to_string(n));
      hit[t - 1] = true;
      d.tau[i] = t - 1;
    }
  }
  return d;
}

SatakeDatum load_datum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read datum file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_datum(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(e.line(), e.column(), std::string(e.what()).substr(std::string(e.what()).find(": ") + 2) + " (" + path + ")");
  }
}

std::string format_datum(const SatakeDatum& d) {
  const int n = d.rank();
  std::ostringstream os;
  os << "rank " << n << "\ncartan\n";
  for (int i = 0; i < n; ++i) {
    os << " ";
    for (int j = 0; j < n; ++j) os << " " << d.cartan.a(i, j);
    os << "\n";
  }
  os << "epsilon";
  for (int e : d.cartan.epsilons()) os << " " << e;
  os << "\nbullet";
  for (int b : d.black()) os << " " << b + 1;
  os << "\ntau";
  for (int t : d.tau) os << " " << t + 1;
  os << "\n";
  return os.str();
}

std::uint64_t cartan_digest(const CartanDatum& c) {
  // FNV-1a over a canonical text form
  std::string s = std::to_string(c.rank());
  for (const auto& row : c.matrix())
    for (int v : row) s += "," + std::to_string(v);
  for (int e : c.epsilons()) s += ";" + std::to_string(e);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_digest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace iserre::cli
