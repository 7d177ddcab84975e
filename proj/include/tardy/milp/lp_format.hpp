#pragma once

#include <cctype>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "tardy/errors.hpp"
#include "tardy/milp/model.hpp"

namespace tardy::milp {

namespace detail {

/// Renders r as an exact decimal when its denominator divides a power of
/// ten; returns false otherwise (the caller then scales the whole row).
inline bool decimal_exact(const Rat& r, std::string& out) {
  mpz_class den = r.get_den();
  mpz_class rest = den;
  unsigned twos = 0;
  unsigned fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) return false;
  unsigned places = twos > fives ? twos : fives;
  mpz_class scale = 1;
  for (unsigned i = 0; i < places; ++i) scale *= 10;
  mpz_class digits = r.get_num() * (scale / den);
  bool neg = digits < 0;
  if (neg) digits = -digits;
  std::string s = digits.get_str();
  if (places > 0) {
    if (s.size() <= places) s.insert(0, places + 1 - s.size(), '0');
    s.insert(s.size() - places, ".");
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  out = (neg ? "-" : "") + s;
  return true;
}

inline bool plain_identifier(const std::string& name) {
  if (name.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

/// Multiplier that clears every denominator in the row (1 when all
/// coefficients already print exactly).
inline mpz_class row_scale(const std::vector<std::pair<std::size_t, Rat>>& terms,
                           const Rat& rhs) {
  mpz_class scale = 1;
  auto fold_in = [&](const Rat& r) {
    std::string unused;
    if (!decimal_exact(r, unused)) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), r.get_den().get_mpz_t());
  };
  for (const auto& [var, coeff] : terms) fold_in(coeff);
  fold_in(rhs);
  return scale;
}

inline void write_terms(std::ostream& out,
                        const std::vector<std::pair<std::size_t, Rat>>& terms,
                        const std::vector<std::string>& names, const Rat& scale) {
  if (terms.empty()) {
    out << "0 " << names.at(0);
    return;
  }
  bool first = true;
  for (const auto& [var, coeff] : terms) {
    Rat c = coeff * scale;
    bool neg = c < 0;
    if (first) {
      if (neg) out << "- ";
      first = false;
    } else {
      out << (neg ? " - " : " + ");
    }
    Rat mag = neg ? Rat(-c) : c;
    if (mag != 1) {
      std::string s;
      decimal_exact(mag, s);
      out << s << " ";
    }
    out << names[var];
  }
}

}  // namespace detail

/// Writes the model in LP file format. Rows whose coefficients have no
/// finite decimal expansion are scaled by a positive integer; scaling the
/// objective row is recorded in a leading comment so parse_lp can undo it.
inline void export_lp(const Model& model, std::ostream& out) {
  if (model.variables().empty()) {
    throw input_error("cannot export a model with no variables");
  }
  std::vector<std::string> names;
  std::unordered_set<std::string> used;
  names.reserve(model.variables().size());
  for (std::size_t v = 0; v < model.variables().size(); ++v) {
    std::string name = model.variables()[v].name;
    if (!detail::plain_identifier(name)) name = "v" + std::to_string(v);
    while (used.count(name)) name = name + "_" + std::to_string(v);
    used.insert(name);
    names.push_back(std::move(name));
  }

  std::vector<std::pair<std::size_t, Rat>> obj_terms;
  for (const auto& [var, coeff] : model.objective()) obj_terms.emplace_back(var, coeff);
  mpz_class obj_scale = detail::row_scale(obj_terms, Rat(0));
  if (obj_scale != 1) {
    out << "\\ objective-scale: " << obj_scale.get_str() << "\n";
  }

  out << "Maximize\n obj: ";
  detail::write_terms(out, obj_terms, names, Rat(obj_scale));
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < model.constraints().size(); ++i) {
    const Constraint& row = model.constraints()[i];
    Rat scale(detail::row_scale(row.terms, row.rhs));
    std::string name = row.name;
    if (!detail::plain_identifier(name)) name = "c" + std::to_string(i);
    out << " " << name << ": ";
    detail::write_terms(out, row.terms, names, scale);
    const char* rel = row.rel == Relation::le ? "<=" : row.rel == Relation::eq ? "=" : ">=";
    std::string rhs;
    detail::decimal_exact(row.rhs * scale, rhs);
    out << " " << rel << " " << rhs << "\n";
  }

  out << "Bounds\n";
  for (std::size_t v = 0; v < model.variables().size(); ++v) {
    const Variable& var = model.variables()[v];
    std::string lo;
    if (!detail::decimal_exact(var.lower, lo)) {
      throw input_error("variable " + var.name +
                        " has a bound with no finite decimal expansion");
    }
    if (var.upper) {
      std::string hi;
      if (!detail::decimal_exact(*var.upper, hi)) {
        throw input_error("variable " + var.name +
                          " has a bound with no finite decimal expansion");
      }
      out << " " << lo << " <= " << names[v] << " <= " << hi << "\n";
    } else {
      out << " " << names[v] << " >= " << lo << "\n";
    }
  }

  bool any_integer = false;
  for (const Variable& var : model.variables()) any_integer |= var.kind == VarKind::integer;
  if (any_integer) {
    out << "Generals\n";
    for (std::size_t v = 0; v < model.variables().size(); ++v) {
      if (model.variables()[v].kind == VarKind::integer) out << " " << names[v] << "\n";
    }
  }
  out << "End\n";
}

inline std::string export_lp(const Model& model) {
  std::ostringstream out;
  export_lp(model, out);
  return out.str();
}

namespace detail {

inline Rat parse_decimal(const std::string& tok) {
  std::size_t pos = 0;
  bool neg = false;
  if (pos < tok.size() && (tok[pos] == '+' || tok[pos] == '-')) {
    neg = tok[pos] == '-';
    ++pos;
  }
  std::string digits;
  std::size_t places = 0;
  bool seen_dot = false;
  bool seen_digit = false;
  for (; pos < tok.size(); ++pos) {
    char c = tok[pos];
    if (c == '.') {
      if (seen_dot) throw input_error("malformed number '" + tok + "' in LP file");
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      seen_digit = true;
      if (seen_dot) ++places;
    } else {
      throw input_error("malformed number '" + tok + "' in LP file");
    }
  }
  if (!seen_digit) throw input_error("malformed number '" + tok + "' in LP file");
  mpz_class num(digits.empty() ? "0" : digits, 10);  // base fixed: leading zeros must not mean octal
  mpz_class den = 1;
  for (std::size_t i = 0; i < places; ++i) den *= 10;
  Rat r(num, den);
  r.canonicalize();
  return neg ? Rat(-r) : r;
}

inline bool numeric_start(const std::string& tok) {
  char c = tok[0];
  return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '+' || c == '-';
}

struct LpBuilder {
  std::vector<std::string> order;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<Rat> lower;
  std::vector<std::optional<Rat>> upper;
  std::vector<bool> integer;
  std::vector<std::pair<std::string, Rat>> objective;
  struct Row {
    std::string name;
    std::vector<std::pair<std::size_t, Rat>> terms;
    Relation rel;
    Rat rhs;
  };
  std::vector<Row> rows;

  std::size_t var(const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    std::size_t id = order.size();
    index.emplace(name, id);
    order.push_back(name);
    lower.emplace_back(0);
    upper.emplace_back(std::nullopt);
    integer.push_back(false);
    return id;
  }
};

inline Relation parse_relation(const std::string& tok) {
  if (tok == "<=" || tok == "=<" || tok == "<") return Relation::le;
  if (tok == ">=" || tok == "=>" || tok == ">") return Relation::ge;
  if (tok == "=") return Relation::eq;
  throw input_error("expected a relation in LP file, found '" + tok + "'");
}

inline bool is_relation(const std::string& tok) {
  return tok == "<=" || tok == "=<" || tok == "<" || tok == ">=" || tok == "=>" ||
         tok == ">" || tok == "=";
}

/// Parses "[coeff] name [+|- [coeff] name ...]" and the trailing tokens of
/// a row. Returns the position one past the last consumed token.
inline std::size_t parse_terms(const std::vector<std::string>& toks, std::size_t pos,
                               LpBuilder& b,
                               std::vector<std::pair<std::size_t, Rat>>& terms) {
  Rat sign(1);
  bool expect_term = true;
  while (pos < toks.size()) {
    const std::string& tok = toks[pos];
    if (is_relation(tok)) break;
    if (tok == "+") {
      sign = 1;
      expect_term = true;
      ++pos;
      continue;
    }
    if (tok == "-") {
      sign = -1;
      expect_term = true;
      ++pos;
      continue;
    }
    if (!expect_term) break;
    Rat coeff = sign;
    if (numeric_start(tok)) {
      coeff = sign * parse_decimal(tok);
      ++pos;
      if (pos >= toks.size() || is_relation(toks[pos]) || toks[pos] == "+" ||
          toks[pos] == "-") {
        throw input_error("coefficient without a variable in LP file");
      }
    }
    terms.emplace_back(b.var(toks[pos]), coeff);
    ++pos;
    sign = 1;
    expect_term = false;
  }
  return pos;
}

}  // namespace detail

/// Parses the subset of LP format written by export_lp: Maximize, Subject
/// To, Bounds, Generals, End, with one row per line and an optional
/// objective-scale comment.
inline Model parse_lp(std::istream& in) {
  using namespace detail;
  LpBuilder b;
  Rat obj_scale(1);

  enum class Section { none, objective, rows, bounds, generals, done };
  Section section = Section::none;
  std::string line;
  long row_counter = 0;

  while (std::getline(in, line)) {
    std::size_t cut = line.find('\\');
    if (cut != std::string::npos) {
      std::string comment = line.substr(cut + 1);
      std::size_t key = comment.find("objective-scale:");
      if (key != std::string::npos) {
        std::istringstream cs(comment.substr(key + 16));
        std::string tok;
        if (cs >> tok) obj_scale = parse_decimal(tok);
        if (obj_scale <= 0) throw input_error("objective-scale must be positive");
      }
      line = line.substr(0, cut);
    }

    // Whitespace tokenization is sufficient: the writer always puts
    // spaces around signs and relations (a name's trailing ':' stays
    // attached and is handled per section).
    std::vector<std::string> toks;
    {
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) toks.push_back(tok);
    }
    if (toks.empty()) continue;

    std::string lowered;
    for (const std::string& t : toks) {
      if (!lowered.empty()) lowered += ' ';
      for (char c : t) lowered += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (lowered == "maximize" || lowered == "max") {
      section = Section::objective;
      continue;
    }
    if (lowered == "minimize" || lowered == "min") {
      throw input_error("only maximization objectives are supported");
    }
    if (lowered == "subject to" || lowered == "st" || lowered == "s.t." ||
        lowered == "such that") {
      section = Section::rows;
      continue;
    }
    if (lowered == "bounds") {
      section = Section::bounds;
      continue;
    }
    if (lowered == "generals" || lowered == "general" || lowered == "integers" ||
        lowered == "integer") {
      section = Section::generals;
      continue;
    }
    if (lowered == "end") {
      section = Section::done;
      continue;
    }

    switch (section) {
      case Section::none:
        throw input_error("LP file must start with a Maximize section");
      case Section::done:
        throw input_error("unexpected content after End in LP file");
      case Section::objective: {
        std::size_t pos = 0;
        if (!toks.empty() && toks[0].size() > 1 && toks[0].back() == ':') pos = 1;
        std::vector<std::pair<std::size_t, Rat>> terms;
        pos = parse_terms(toks, pos, b, terms);
        if (pos != toks.size()) {
          throw input_error("trailing tokens in LP objective row");
        }
        for (const auto& [var, coeff] : terms) {
          b.objective.emplace_back(b.order[var], coeff);
        }
        break;
      }
      case Section::rows: {
        LpBuilder::Row row;
        std::size_t pos = 0;
        if (!toks.empty() && toks[0].size() > 1 && toks[0].back() == ':') {
          row.name = toks[0].substr(0, toks[0].size() - 1);
          pos = 1;
        } else {
          row.name = "c" + std::to_string(row_counter);
        }
        ++row_counter;
        pos = parse_terms(toks, pos, b, row.terms);
        if (pos + 2 != toks.size() || !is_relation(toks[pos])) {
          throw input_error("malformed constraint row in LP file: " + line);
        }
        row.rel = parse_relation(toks[pos]);
        row.rhs = parse_decimal(toks[pos + 1]);
        b.rows.push_back(std::move(row));
        break;
      }
      case Section::bounds: {
        for (const std::string& t : toks) {
          if (t == "free") throw input_error("free variables are not supported");
        }
        if (toks.size() == 3 && !numeric_start(toks[0])) {
          std::size_t v = b.var(toks[0]);
          Relation rel = parse_relation(toks[1]);
          Rat val = parse_decimal(toks[2]);
          if (rel == Relation::le) b.upper[v] = val;
          else if (rel == Relation::ge) b.lower[v] = val;
          else {
            b.lower[v] = val;
            b.upper[v] = val;
          }
        } else if (toks.size() == 3) {
          Rat val = parse_decimal(toks[0]);
          Relation rel = parse_relation(toks[1]);
          std::size_t v = b.var(toks[2]);
          if (rel == Relation::le) b.lower[v] = val;
          else if (rel == Relation::ge) b.upper[v] = val;
          else {
            b.lower[v] = val;
            b.upper[v] = val;
          }
        } else if (toks.size() == 5 && numeric_start(toks[0])) {
          Rat lo = parse_decimal(toks[0]);
          if (parse_relation(toks[1]) != Relation::le || parse_relation(toks[3]) != Relation::le) {
            throw input_error("malformed bound row in LP file: " + line);
          }
          std::size_t v = b.var(toks[2]);
          Rat hi = parse_decimal(toks[4]);
          b.lower[v] = lo;
          b.upper[v] = hi;
        } else {
          throw input_error("malformed bound row in LP file: " + line);
        }
        break;
      }
      case Section::generals: {
        for (const std::string& t : toks) b.integer[b.var(t)] = true;
        break;
      }
    }
  }
  if (section != Section::done) {
    throw input_error("LP file is missing the End marker");
  }

  Model model;
  for (std::size_t v = 0; v < b.order.size(); ++v) {
    model.add_variable(b.order[v], b.integer[v] ? VarKind::integer : VarKind::continuous,
                       b.lower[v], b.upper[v]);
  }
  for (const auto& [name, coeff] : b.objective) {
    std::size_t v = b.index.at(name);
    Rat prev = 0;
    auto it = model.objective().find(v);
    if (it != model.objective().end()) prev = it->second;
    model.set_objective_coeff(v, prev + coeff / obj_scale);
  }
  for (const LpBuilder::Row& row : b.rows) {
    model.add_constraint(row.name, row.terms, row.rel, row.rhs);
  }
  return model;
}

inline Model parse_lp(const std::string& text) {
  std::istringstream in(text);
  return parse_lp(in);
}

}  // namespace tardy::milp
