#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <sstream>

#include "vecfog/errors.hpp"
#include "vecfog/milp_model.hpp"

namespace vecfog {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Shortest %g rendering that fits the 12-column MPS number field.
std::string mps_num(double v) {
  char buf[32];
  for (int p = 15; p >= 1; --p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, v);
    if (std::string_view(buf).size() <= 12) return buf;
  }
  throw IoError("value " + num(v) + " does not fit an MPS field");
}

std::string mangle(char prefix, std::size_t i) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%c%07zu", prefix, i + 1);
  return buf;
}

const char* sense_text(Sense s) {
  switch (s) {
    case Sense::LessEqual:
      return "<=";
    case Sense::GreaterEqual:
      return ">=";
    default:
      return "=";
  }
}

void append_expr(std::string& out, const std::vector<std::pair<std::string, double>>& terms) {
  std::size_t n = 0;
  for (const auto& [name, c] : terms) {
    if (n > 0 && n % 6 == 0) out += "\n  ";
    out += c < 0 ? " - " : " + ";
    const double a = std::fabs(c);
    if (a != 1.0) out += num(a) + " ";
    out += name;
    ++n;
  }
  if (n == 0) out += " 0";
}

std::vector<std::pair<std::string, double>> named(const MilpModel& m, const std::vector<Term>& terms) {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(terms.size());
  for (const Term& t : terms) out.emplace_back(m.variables[t.var].name, t.coef);
  return out;
}

std::string export_lp(const MilpModel& m) {
  std::string out = "\\ vecfog placement model: " + std::to_string(m.variables.size()) +
                    " variables, " + std::to_string(m.constraints.size()) + " rows\n";
  out += "Minimize\n obj:";
  std::vector<std::pair<std::string, double>> obj;
  for (const Variable& v : m.variables) {
    if (v.cost != 0.0) obj.emplace_back(v.name, v.cost);
  }
  append_expr(out, obj);
  if (m.objective_constant != 0.0) out += " + " + num(m.objective_constant) + " CONST";
  out += "\nSubject To\n";
  for (const Constraint& c : m.constraints) {
    if (c.sense == Sense::Identity) {
      out += "\\ " + c.name + " :=";
      std::string expr;
      append_expr(expr, named(m, c.terms));
      for (char& ch : expr) {
        if (ch == '\n') ch = ' ';
      }
      out += expr + "\n";
      continue;
    }
    out += " " + c.name + ":";
    append_expr(out, named(m, c.terms));
    out += std::string(" ") + sense_text(c.sense) + " " + num(c.rhs) + "\n";
  }
  out += "Bounds\n";
  for (const Variable& v : m.variables) {
    if (v.type == VarType::Binary) continue;
    if (v.lower == 0.0 && v.upper == kInf) continue;
    out += " " + num(v.lower) + " <= " + v.name + " <= " +
           (v.upper == kInf ? std::string("+inf") : num(v.upper)) + "\n";
  }
  if (m.objective_constant != 0.0) out += " CONST = 1\n";
  out += "Binaries\n";
  std::size_t n = 0;
  for (const Variable& v : m.variables) {
    if (v.type != VarType::Binary) continue;
    out += (n % 8 == 0 ? " " : " ") + v.name;
    if (++n % 8 == 0) out += "\n";
  }
  if (n % 8 != 0) out += "\n";
  out += "End\n";
  return out;
}

std::string mps_line(const std::string& a, const std::string& b, const std::string& c,
                     const std::string& d = "", const std::string& e = "") {
  char buf[96];
  if (d.empty()) {
    std::snprintf(buf, sizeof buf, "    %-8s  %-8s  %12s\n", a.c_str(), b.c_str(), c.c_str());
  } else {
    std::snprintf(buf, sizeof buf, "    %-8s  %-8s  %12s   %-8s  %12s\n", a.c_str(), b.c_str(),
                  c.c_str(), d.c_str(), e.c_str());
  }
  return buf;
}

std::string export_mps(const MilpModel& m) {
  std::string out = "NAME          VECFOG\n";
  for (std::size_t j = 0; j < m.variables.size(); ++j) {
    out += "* MAP " + mangle('V', j) + " " + m.variables[j].name + "\n";
  }
  for (std::size_t i = 0; i < m.constraints.size(); ++i) {
    out += "* MAP " + mangle('R', i) + " " + m.constraints[i].name + "\n";
  }
  out += "ROWS\n N  OBJ\n";
  for (std::size_t i = 0; i < m.constraints.size(); ++i) {
    const char* type = "N";
    switch (m.constraints[i].sense) {
      case Sense::LessEqual:
        type = "L";
        break;
      case Sense::GreaterEqual:
        type = "G";
        break;
      case Sense::Equal:
        type = "E";
        break;
      case Sense::Identity:
        break;
    }
    out += std::string(" ") + type + "  " + mangle('R', i) + "\n";
  }

  std::vector<std::vector<std::pair<std::size_t, double>>> columns(m.variables.size());
  for (std::size_t i = 0; i < m.constraints.size(); ++i) {
    for (const Term& t : m.constraints[i].terms) columns[t.var].emplace_back(i, t.coef);
  }
  out += "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (std::size_t j = 0; j < m.variables.size(); ++j) {
    const bool is_int = m.variables[j].type == VarType::Binary;
    if (is_int != in_int) {
      char buf[80];
      std::snprintf(buf, sizeof buf, "    MARKER%04d  'MARKER'                 '%s'\n", marker++,
                    is_int ? "INTORG" : "INTEND");
      out += buf;
      in_int = is_int;
    }
    std::vector<std::pair<std::string, std::string>> entries;
    if (m.variables[j].cost != 0.0) entries.emplace_back("OBJ", mps_num(m.variables[j].cost));
    for (auto [i, c] : columns[j]) entries.emplace_back(mangle('R', i), mps_num(c));
    const std::string col = mangle('V', j);
    for (std::size_t e = 0; e < entries.size(); e += 2) {
      if (e + 1 < entries.size()) {
        out += mps_line(col, entries[e].first, entries[e].second, entries[e + 1].first,
                        entries[e + 1].second);
      } else {
        out += mps_line(col, entries[e].first, entries[e].second);
      }
    }
  }
  if (in_int) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "    MARKER%04d  'MARKER'                 'INTEND'\n", marker);
    out += buf;
  }
  out += "RHS\n";
  for (std::size_t i = 0; i < m.constraints.size(); ++i) {
    const Constraint& c = m.constraints[i];
    if (c.sense == Sense::Identity || c.rhs == 0.0) continue;
    out += mps_line("RHS", mangle('R', i), mps_num(c.rhs));
  }
  out += "BOUNDS\n";
  for (std::size_t j = 0; j < m.variables.size(); ++j) {
    const Variable& v = m.variables[j];
    const std::string col = mangle('V', j);
    if (v.type == VarType::Binary) {
      out += " UP BND       " + col + "  " + "           1\n";
      continue;
    }
    if (v.lower != 0.0) out += " LO BND       " + col + "  " + mps_num(v.lower) + "\n";
    if (v.upper != kInf) out += " UP BND       " + col + "  " + mps_num(v.upper) + "\n";
  }
  out += "ENDATA\n";
  return out;
}

// ---- readers -------------------------------------------------------------

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& s) {
  if (s == "+inf" || s == "inf" || s == "+infinity" || s == "infinity") return kInf;
  if (s == "-inf" || s == "-infinity") return -kInf;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw ParseError("expected a number, got '" + s + "'");
  return v;
}

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return end != s.c_str() && *end == '\0';
}

void sort_terms(std::vector<std::pair<std::string, double>>& terms) {
  std::sort(terms.begin(), terms.end());
}

// Parses "[name:] expr [sense rhs]" from a token stream.
struct LpExpr {
  std::vector<std::pair<std::string, double>> terms;
  Sense sense = Sense::Identity;
  double rhs = 0.0;
};

LpExpr parse_lp_expr(const std::vector<std::string>& toks) {
  LpExpr e;
  double sign = 1.0;
  double coef = 1.0;
  bool have_coef = false;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const std::string& t = toks[i];
    if (t == "+") {
      sign = 1.0;
    } else if (t == "-") {
      sign = -1.0;
    } else if (t == "<=" || t == "=<" || t == "<") {
      e.sense = Sense::LessEqual;
    } else if (t == ">=" || t == "=>" || t == ">") {
      e.sense = Sense::GreaterEqual;
    } else if (t == "=") {
      e.sense = Sense::Equal;
    } else if (e.sense != Sense::Identity) {
      e.rhs = parse_double(t);
    } else if (is_number(t)) {
      coef = parse_double(t);
      have_coef = true;
    } else {
      e.terms.emplace_back(t, sign * (have_coef ? coef : 1.0));
      sign = 1.0;
      coef = 1.0;
      have_coef = false;
    }
  }
  // A lone 0 is how the writer spells an empty expression.
  if (have_coef && !(e.terms.empty() && coef == 0.0)) {
    throw ParseError("dangling coefficient in LP expression");
  }
  return e;
}

}  // namespace

std::string export_model(const MilpModel& model, ModelFormat format) {
  return format == ModelFormat::Lp ? export_lp(model) : export_mps(model);
}

ParsedModel to_parsed(const MilpModel& m) {
  ParsedModel p;
  for (const Variable& v : m.variables) {
    if (v.cost != 0.0) p.objective.emplace_back(v.name, v.cost);
    if (v.type == VarType::Binary) {
      p.binaries.push_back(v.name);
    } else if (v.lower != 0.0 || v.upper != kInf) {
      p.bounds.emplace_back(v.name, v.lower, v.upper);
    }
  }
  for (const Constraint& c : m.constraints) {
    if (c.sense == Sense::Identity) continue;
    ParsedModel::Row row{c.name, c.sense, named(m, c.terms), c.rhs};
    sort_terms(row.terms);
    p.rows.push_back(std::move(row));
  }
  sort_terms(p.objective);
  std::sort(p.binaries.begin(), p.binaries.end());
  std::sort(p.bounds.begin(), p.bounds.end());
  return p;
}

ParsedModel read_lp(const std::string& text) {
  enum class Section { None, Objective, Constraints, Bounds, Binaries, Done };
  ParsedModel p;
  Section section = Section::None;
  std::istringstream in(text);
  std::string line;
  std::string pending;  // statement being accumulated across continuation lines

  auto flush = [&]() {
    if (pending.empty()) return;
    std::string stmt = pending;
    pending.clear();
    std::string name;
    if (auto colon = stmt.find(':'); colon != std::string::npos) {
      name = split_ws(stmt.substr(0, colon)).at(0);
      stmt = stmt.substr(colon + 1);
    }
    LpExpr e = parse_lp_expr(split_ws(stmt));
    if (section == Section::Objective) {
      p.objective = std::move(e.terms);
      sort_terms(p.objective);
    } else {
      if (e.sense == Sense::Identity) throw ParseError("constraint '" + name + "' has no sense");
      sort_terms(e.terms);
      p.rows.push_back({name, e.sense, std::move(e.terms), e.rhs});
    }
  };

  while (std::getline(in, line)) {
    if (auto bs = line.find('\\'); bs != std::string::npos) line.resize(bs);
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    std::string head = toks[0];
    std::transform(head.begin(), head.end(), head.begin(), ::tolower);
    if (toks.size() == 1 || (toks.size() == 2 && head == "subject")) {
      Section next = section;
      if (head == "minimize" || head == "minimise" || head == "min") next = Section::Objective;
      else if (head == "subject" || head == "st" || head == "s.t.") next = Section::Constraints;
      else if (head == "bounds") next = Section::Bounds;
      else if (head == "binaries" || head == "binary" || head == "bin") next = Section::Binaries;
      else if (head == "end") next = Section::Done;
      if (next != section) {
        flush();
        section = next;
        continue;
      }
    }
    switch (section) {
      case Section::Objective:
        pending += " " + line;
        break;
      case Section::Constraints: {
        // A new statement starts with "name:"; anything else continues one.
        const bool starts = line.find(':') != std::string::npos;
        if (starts) flush();
        pending += " " + line;
        break;
      }
      case Section::Bounds: {
        flush();
        if (toks.size() == 5 && toks[1] == "<=" && toks[3] == "<=") {
          p.bounds.emplace_back(toks[2], parse_double(toks[0]), parse_double(toks[4]));
        } else if (toks.size() == 3 && toks[1] == "=") {
          const double v = parse_double(toks[2]);
          if (toks[0] != "CONST") p.bounds.emplace_back(toks[0], v, v);
        } else if (toks.size() == 3 && toks[1] == ">=") {
          p.bounds.emplace_back(toks[0], parse_double(toks[2]), kInf);
        } else if (toks.size() == 3 && toks[1] == "<=") {
          p.bounds.emplace_back(toks[0], 0.0, parse_double(toks[2]));
        } else if (toks.size() == 2 && toks[1] == "free") {
          p.bounds.emplace_back(toks[0], -kInf, kInf);
        } else {
          throw ParseError("unsupported bound line '" + line + "'");
        }
        break;
      }
      case Section::Binaries:
        flush();
        for (const auto& t : toks) p.binaries.push_back(t);
        break;
      case Section::None:
      case Section::Done:
        throw ParseError("LP text outside a section: '" + line + "'");
    }
  }
  flush();
  std::erase_if(p.objective, [](const auto& t) { return t.first == "CONST"; });
  std::sort(p.binaries.begin(), p.binaries.end());
  std::sort(p.bounds.begin(), p.bounds.end());
  return p;
}

ParsedModel read_mps(const std::string& text) {
  enum class Section { None, Rows, Columns, Rhs, Bounds, Done };
  std::map<std::string, std::string> names;
  std::map<std::string, std::size_t> row_index;  // constraint rows only
  std::map<std::string, char> row_type;
  std::string objective_row;
  ParsedModel p;
  std::map<std::string, double> objective;
  std::map<std::string, bool> integer;
  std::map<std::string, std::pair<double, double>> bounds;
  std::vector<std::string> column_order;

  auto real = [&](const std::string& mangled) {
    auto it = names.find(mangled);
    return it == names.end() ? mangled : it->second;
  };

  Section section = Section::None;
  bool in_int = false;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '*') {
      const auto toks = split_ws(line);
      if (toks.size() == 4 && toks[1] == "MAP") names[toks[2]] = toks[3];
      continue;
    }
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (line[0] != ' ') {
      if (toks[0] == "NAME") continue;
      if (toks[0] == "ROWS") section = Section::Rows;
      else if (toks[0] == "COLUMNS") section = Section::Columns;
      else if (toks[0] == "RHS") section = Section::Rhs;
      else if (toks[0] == "BOUNDS") section = Section::Bounds;
      else if (toks[0] == "RANGES") throw ParseError("MPS RANGES section is not supported");
      else if (toks[0] == "ENDATA") section = Section::Done;
      else throw ParseError("unknown MPS section '" + toks[0] + "'");
      continue;
    }
    switch (section) {
      case Section::Rows: {
        if (toks.size() != 2) throw ParseError("bad MPS row line '" + line + "'");
        const char type = toks[0][0];
        if (type == 'N') {
          if (objective_row.empty()) objective_row = toks[1];
          row_type[toks[1]] = 'N';
          break;
        }
        Sense s = type == 'L' ? Sense::LessEqual : type == 'G' ? Sense::GreaterEqual : Sense::Equal;
        if (type != 'L' && type != 'G' && type != 'E') throw ParseError("bad MPS row type");
        row_type[toks[1]] = type;
        row_index[toks[1]] = p.rows.size();
        p.rows.push_back({real(toks[1]), s, {}, 0.0});
        break;
      }
      case Section::Columns: {
        if (toks.size() >= 3 && toks[1] == "'MARKER'") {
          in_int = toks[2] == "'INTORG'";
          break;
        }
        if (toks.size() != 3 && toks.size() != 5) throw ParseError("bad MPS column line");
        const std::string col = real(toks[0]);
        if (integer.find(col) == integer.end()) column_order.push_back(col);
        integer[col] = in_int;
        for (std::size_t f = 1; f + 1 < toks.size(); f += 2) {
          const double v = parse_double(toks[f + 1]);
          if (toks[f] == objective_row) {
            objective[col] += v;
          } else if (auto it = row_index.find(toks[f]); it != row_index.end()) {
            p.rows[it->second].terms.emplace_back(col, v);
          } else if (row_type.count(toks[f]) == 0) {
            throw ParseError("column references unknown row '" + toks[f] + "'");
          }
        }
        break;
      }
      case Section::Rhs:
        for (std::size_t f = 1; f + 1 < toks.size(); f += 2) {
          if (auto it = row_index.find(toks[f]); it != row_index.end()) {
            p.rows[it->second].rhs = parse_double(toks[f + 1]);
          }
        }
        break;
      case Section::Bounds: {
        if (toks.size() < 3) throw ParseError("bad MPS bound line");
        const std::string col = real(toks[2]);
        auto& b = bounds.try_emplace(col, 0.0, kInf).first->second;
        const std::string& type = toks[0];
        const double v = toks.size() > 3 ? parse_double(toks[3]) : 0.0;
        if (type == "UP") b.second = v;
        else if (type == "LO") b.first = v;
        else if (type == "FX") b = {v, v};
        else if (type == "FR") b = {-kInf, kInf};
        else if (type == "BV") b = {0.0, 1.0};
        else throw ParseError("unsupported MPS bound type '" + type + "'");
        if (type == "BV") integer[col] = true;
        break;
      }
      case Section::None:
      case Section::Done:
        throw ParseError("MPS data outside a section");
    }
  }
  for (auto& row : p.rows) sort_terms(row.terms);
  for (const auto& [name, v] : objective) {
    if (v != 0.0) p.objective.emplace_back(name, v);
  }
  for (const std::string& col : column_order) {
    auto b = bounds.count(col) ? bounds[col] : std::pair<double, double>{0.0, kInf};
    if (integer[col] && b.first == 0.0 && b.second == 1.0) {
      p.binaries.push_back(col);
    } else if (b.first != 0.0 || b.second != kInf) {
      p.bounds.emplace_back(col, b.first, b.second);
    }
  }
  sort_terms(p.objective);
  std::sort(p.binaries.begin(), p.binaries.end());
  std::sort(p.bounds.begin(), p.bounds.end());
  return p;
}

}  // namespace vecfog
