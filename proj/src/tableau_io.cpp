#include "csrkn/tableau_io.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "csrkn/number_format.hpp"
#include "csrkn/version.hpp"

namespace csrkn {

namespace {

nlohmann::json number_array(const Eigen::VectorXd& v) {
  auto out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(format_17g(v(i)));
  }
  return out;
}

double read_number(const nlohmann::json& node, const std::string& field) {
  if (node.is_number()) {
    return node.get<double>();
  }
  if (node.is_string()) {
    try {
      return parse_double(node.get<std::string>());
    } catch (const std::invalid_argument&) {
      throw TableauFormatError(field + ": '" + node.get<std::string>() +
                               "' is not a decimal number");
    }
  }
  throw TableauFormatError(field + ": expected a number or decimal string");
}

const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  if (!j.is_object()) {
    throw TableauFormatError("tableau document must be a JSON object");
  }
  const auto it = j.find(key);
  if (it == j.end()) {
    throw TableauFormatError(std::string("missing field '") + key + "'");
  }
  return *it;
}

Eigen::VectorXd read_vector(const nlohmann::json& j, const char* key, Eigen::Index s) {
  const auto& node = require(j, key);
  if (!node.is_array()) {
    throw TableauFormatError(std::string(key) + ": expected an array");
  }
  if (static_cast<Eigen::Index>(node.size()) != s) {
    throw TableauFormatError(std::string(key) + ": expected " + std::to_string(s) +
                             " entries, found " + std::to_string(node.size()));
  }
  Eigen::VectorXd v(s);
  for (Eigen::Index i = 0; i < s; ++i) {
    v(i) = read_number(node[static_cast<std::size_t>(i)],
                       std::string(key) + "[" + std::to_string(i) + "]");
  }
  return v;
}

}  // namespace

nlohmann::json to_json(const RknTableau& t) {
  auto a_bar = nlohmann::json::array();
  for (Eigen::Index i = 0; i < t.a_bar.rows(); ++i) {
    a_bar.push_back(number_array(t.a_bar.row(i).transpose()));
  }
  nlohmann::json j;
  j["spec_version"] = kFormatVersion;
  j["s"] = t.stages();
  j["c"] = number_array(t.c);
  j["b"] = number_array(t.b);
  j["b_bar"] = number_array(t.b_bar);
  j["a_bar"] = std::move(a_bar);
  j["claimed_order"] = t.claimed_order;
  j["symplectic"] = t.symplectic;
  return j;
}

LoadedTableau tableau_from_json(const nlohmann::json& j) {
  const auto& s_node = require(j, "s");
  if (!s_node.is_number_integer() || s_node.get<long long>() < 1 ||
      s_node.get<long long>() > 1024) {
    throw TableauFormatError("s: expected a positive integer");
  }
  const auto s = static_cast<Eigen::Index>(s_node.get<long long>());

  LoadedTableau out;
  auto& t = out.tableau;
  t.c = read_vector(j, "c", s);
  t.b = read_vector(j, "b", s);
  t.b_bar = read_vector(j, "b_bar", s);

  const auto& rows = require(j, "a_bar");
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != s) {
    throw TableauFormatError("a_bar: expected " + std::to_string(s) + " rows");
  }
  t.a_bar.resize(s, s);
  for (Eigen::Index i = 0; i < s; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    const std::string row_name = "a_bar[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != s) {
      throw TableauFormatError(row_name + ": expected " + std::to_string(s) + " entries");
    }
    for (Eigen::Index k = 0; k < s; ++k) {
      t.a_bar(i, k) = read_number(row[static_cast<std::size_t>(k)],
                                  row_name + "[" + std::to_string(k) + "]");
    }
  }

  if (const auto it = j.find("claimed_order"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) {
      throw TableauFormatError("claimed_order: expected an integer");
    }
    out.declared_order = it->get<int>();
  }
  if (const auto it = j.find("symplectic"); it != j.end()) {
    if (!it->is_boolean()) {
      throw TableauFormatError("symplectic: expected true or false");
    }
    out.declared_symplectic = it->get<bool>();
  }

  t.claimed_order = derive_order(t).value_or(0);
  t.symplectic = !check_rkn_symplectic(t).has_value();
  return out;
}

LoadedTableau parse_tableau(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw TableauFormatError(e.what());
  }
  try {
    return tableau_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw TableauFormatError(e.what());
  }
}

std::string to_text(const RknTableau& t) {
  const int s = t.stages();
  std::vector<std::string> c_col;
  for (int i = 0; i < s; ++i) {
    c_col.push_back(format_shortest(t.c(i)));
  }
  std::size_t left = 0;
  for (const auto& x : c_col) {
    left = std::max(left, x.size());
  }
  std::size_t width = 0;
  for (int i = 0; i < s; ++i) {
    width = std::max({width, format_shortest(t.b(i)).size(), format_shortest(t.b_bar(i)).size()});
    for (int k = 0; k < s; ++k) {
      width = std::max(width, format_shortest(t.a_bar(i, k)).size());
    }
  }

  std::ostringstream os;
  const auto row = [&](const std::string& head, const Eigen::VectorXd& values) {
    os << std::setw(static_cast<int>(left)) << head << " |";
    for (Eigen::Index k = 0; k < values.size(); ++k) {
      os << ' ' << std::setw(static_cast<int>(width)) << format_shortest(values(k));
    }
    os << '\n';
  };
  const std::string rule =
      std::string(left + 1, '-') + "+" + std::string((width + 1) * static_cast<std::size_t>(s), '-');

  for (int i = 0; i < s; ++i) {
    row(c_col[static_cast<std::size_t>(i)], t.a_bar.row(i).transpose());
  }
  os << rule << '\n';
  row("", t.b_bar);
  os << rule << '\n';
  row("", t.b);
  return os.str();
}

}  // namespace csrkn
