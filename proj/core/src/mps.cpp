#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "repday/lp.hpp"

namespace repday::lp {
namespace {

// Fixed-format MPS restricts names to 8 characters, so rows and columns are
// written under positional names: variable j -> V<j+1>, constraint i -> R<i+1>,
// objective -> COST. The mapping is recorded in comment lines.
std::string var_name(int j) { return "V" + std::to_string(j + 1); }
std::string row_name(int i) { return "R" + std::to_string(i + 1); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void pad_to(std::string& line, size_t column) {  // 1-indexed target column
  if (line.size() < column - 1) line.resize(column - 1, ' ');
}

// Classic field layout: field 2 at column 5, field 3 at 15, field 4 at 25,
// field 5 at 40, field 6 at 50.
std::string pair_line(const std::string& name, const std::string& e1, const std::string& v1,
                      const std::string* e2, const std::string* v2) {
  std::string line;
  pad_to(line, 5);
  line += name;
  pad_to(line, 15);
  line += e1;
  pad_to(line, 25);
  line += v1;
  if (e2 != nullptr) {
    pad_to(line, 40);
    line += *e2;
    pad_to(line, 50);
    line += *v2;
  }
  return line;
}

}  // namespace

void write_mps(const LinearProgram& lp, std::ostream& out, const std::string& problem_name) {
  out << "* Columns are named V<j+1> and rows R<i+1> in declaration order;\n"
      << "* COST is the minimization objective.\n"
      << "NAME          " << problem_name << "\n";

  out << "ROWS\n";
  out << " N  COST\n";
  for (int i = 0; i < lp.n_constraints(); ++i) {
    char tag = ' ';
    switch (lp.constraint(i).sense) {
      case Sense::LessEqual: tag = 'L'; break;
      case Sense::Equal: tag = 'E'; break;
      case Sense::GreaterEqual: tag = 'G'; break;
    }
    out << ' ' << tag << "  " << row_name(i) << "\n";
  }

  // Entries per column, objective first so every column is declared even when
  // it appears in no constraint.
  std::vector<std::vector<std::pair<std::string, std::string>>> entries(
      static_cast<size_t>(lp.n_variables()));
  for (int j = 0; j < lp.n_variables(); ++j) {
    entries[static_cast<size_t>(j)].emplace_back("COST", num(lp.variable(j).cost));
  }
  for (int i = 0; i < lp.n_constraints(); ++i) {
    for (const auto& [j, a] : lp.constraint(i).terms) {
      if (a != 0.0) entries[static_cast<size_t>(j)].emplace_back(row_name(i), num(a));
    }
  }
  out << "COLUMNS\n";
  for (int j = 0; j < lp.n_variables(); ++j) {
    const auto& es = entries[static_cast<size_t>(j)];
    for (size_t k = 0; k < es.size(); k += 2) {
      const bool two = k + 1 < es.size();
      out << pair_line(var_name(j), es[k].first, es[k].second, two ? &es[k + 1].first : nullptr,
                       two ? &es[k + 1].second : nullptr)
          << "\n";
    }
  }

  out << "RHS\n";
  {
    std::vector<std::pair<std::string, std::string>> rhs;
    for (int i = 0; i < lp.n_constraints(); ++i) {
      if (lp.constraint(i).rhs != 0.0) rhs.emplace_back(row_name(i), num(lp.constraint(i).rhs));
    }
    for (size_t k = 0; k < rhs.size(); k += 2) {
      const bool two = k + 1 < rhs.size();
      out << pair_line("RHS", rhs[k].first, rhs[k].second, two ? &rhs[k + 1].first : nullptr,
                       two ? &rhs[k + 1].second : nullptr)
          << "\n";
    }
  }

  out << "BOUNDS\n";
  for (int j = 0; j < lp.n_variables(); ++j) {
    const Variable& v = lp.variable(j);
    const auto bound_line = [&](const char* kind, bool with_value, double value) {
      std::string line = " ";
      line += kind;
      pad_to(line, 5);
      line += "BND";
      pad_to(line, 15);
      line += var_name(j);
      if (with_value) {
        pad_to(line, 25);
        line += num(value);
      }
      out << line << "\n";
    };
    if (v.lower == v.upper) {
      bound_line("FX", true, v.lower);
    } else if (v.lower == -kInfinity && v.upper == kInfinity) {
      bound_line("FR", false, 0.0);
    } else {
      if (v.lower == -kInfinity) {
        bound_line("MI", false, 0.0);
      } else if (v.lower != 0.0) {
        bound_line("LO", true, v.lower);
      }
      if (v.upper < kInfinity) bound_line("UP", true, v.upper);
    }
  }
  out << "ENDATA\n";
}

void write_mps(const LinearProgram& lp, const std::string& path, const std::string& problem_name) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_mps(lp, out, problem_name);
  if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

}  // namespace repday::lp
