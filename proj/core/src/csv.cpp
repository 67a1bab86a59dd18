#include "specfit/csv.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <sstream>

#include "specfit/errors.hpp"

namespace specfit {

double ColumnTransform::apply(double x) const {
  switch (kind) {
    case Kind::identity: return x;
    case Kind::log: return std::log(x);
    case Kind::exp_base: return std::pow(a, x);
    case Kind::affine: return a * x + b;
  }
  return x;
}

namespace {

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, int row, const std::string& column) {
  std::string s = strip(field);
  if (!s.empty() && s[0] == '+') s.erase(0, 1);  // from_chars rejects a leading '+'
  const char* begin = s.data();
  const char* end = begin + s.size();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw data_error("non-numeric cell '" + field + "' at row " + std::to_string(row) +
                     ", column '" + column + "'");
  }
  return value;
}

}  // namespace

std::map<std::string, ColumnTransform> parse_transforms(const std::string& text) {
  std::map<std::string, ColumnTransform> out;
  if (strip(text).empty()) return out;
  for (const std::string& item : split_fields(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw contract_error("transform '" + item + "': expected column=spec");
    }
    const std::string column = strip(item.substr(0, eq));
    const std::vector<std::string> parts = split_fields(strip(item.substr(eq + 1)), ':');
    ColumnTransform t;
    const std::string& name = parts[0];
    auto number = [&](std::size_t i) {
      if (parts.size() <= i) {
        throw contract_error("transform '" + item + "': missing parameter");
      }
      try {
        return std::stod(parts[i]);
      } catch (const std::exception&) {
        throw contract_error("transform '" + item + "': bad parameter '" + parts[i] + "'");
      }
    };
    if (name == "identity") {
      t.kind = ColumnTransform::Kind::identity;
    } else if (name == "log") {
      t.kind = ColumnTransform::Kind::log;
    } else if (name == "expbase") {
      t.kind = ColumnTransform::Kind::exp_base;
      t.a = number(1);
    } else if (name == "affine") {
      t.kind = ColumnTransform::Kind::affine;
      t.a = number(1);
      t.b = number(2);
    } else {
      throw contract_error("transform '" + item + "': unknown kind '" + name + "'");
    }
    out[column] = t;
  }
  return out;
}

std::vector<std::string> csv_header(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw data_error("empty file: " + path.string());
  std::vector<std::string> names = split_fields(line, ',');
  for (auto& n : names) n = strip(n);
  return names;
}

Eigen::MatrixXd load_csv_columns(const std::filesystem::path& path,
                                 const std::vector<std::string>& columns,
                                 const std::map<std::string, ColumnTransform>& transforms) {
  if (columns.empty()) throw contract_error("load_csv_columns: no columns requested");
  std::ifstream in(path);
  if (!in) throw data_error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw data_error("empty file: " + path.string());
  std::vector<std::string> header = split_fields(line, ',');
  for (auto& n : header) n = strip(n);

  std::vector<int> idx;
  std::vector<ColumnTransform> tf;
  for (const auto& name : columns) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw data_error("missing column '" + name + "' in " + path.string());
    idx.push_back(static_cast<int>(it - header.begin()));
    const auto t = transforms.find(name);
    tf.push_back(t == transforms.end() ? ColumnTransform{} : t->second);
  }

  std::vector<double> values;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (strip(line).empty()) continue;
    const std::vector<std::string> fields = split_fields(line, ',');
    if (fields.size() != header.size()) {
      throw data_error("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                       " fields, header has " + std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < columns.size(); ++j) {
      const double v =
          tf[j].apply(parse_number(fields[static_cast<std::size_t>(idx[j])], row, columns[j]));
      if (!std::isfinite(v)) {
        throw data_error("non-finite value at row " + std::to_string(row) + ", column '" +
                         columns[j] + "'");
      }
      values.push_back(v);
    }
  }
  if (values.empty()) throw data_error("no data rows in " + path.string());
  const int n = static_cast<int>(values.size() / columns.size());
  Eigen::MatrixXd out(n, static_cast<int>(columns.size()));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < out.cols(); ++j) {
      out(i, j) = values[static_cast<std::size_t>(i) * columns.size() +
                         static_cast<std::size_t>(j)];
    }
  }
  return out;
}

Dataset load_csv(const std::filesystem::path& path, const std::vector<std::string>& x_columns,
                 const std::string& y_column,
                 const std::map<std::string, ColumnTransform>& transforms) {
  if (x_columns.empty()) throw contract_error("load_csv: at least one x column required");
  std::ifstream in(path);
  if (!in) throw data_error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw data_error("empty file: " + path.string());
  const std::vector<std::string> header = [&] {
    auto names = split_fields(line, ',');
    for (auto& n : names) n = strip(n);
    return names;
  }();

  auto column_index = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw data_error("missing column '" + name + "' in " + path.string());
    }
    return static_cast<int>(it - header.begin());
  };
  std::vector<int> x_idx;
  x_idx.reserve(x_columns.size());
  for (const auto& c : x_columns) x_idx.push_back(column_index(c));
  const int y_idx = column_index(y_column);

  auto transform_of = [&](const std::string& name) {
    const auto it = transforms.find(name);
    return it == transforms.end() ? ColumnTransform{} : it->second;
  };
  std::vector<ColumnTransform> x_tf;
  for (const auto& c : x_columns) x_tf.push_back(transform_of(c));
  const ColumnTransform y_tf = transform_of(y_column);

  const int d = static_cast<int>(x_columns.size());
  std::vector<double> xs;
  std::vector<double> ys;
  int row = 1;  // header was row 1
  int dropped = 0;
  while (std::getline(in, line)) {
    ++row;
    if (strip(line).empty()) continue;
    const std::vector<std::string> fields = split_fields(line, ',');
    if (static_cast<int>(fields.size()) != static_cast<int>(header.size())) {
      throw data_error("row " + std::to_string(row) + " has " +
                       std::to_string(fields.size()) + " fields, header has " +
                       std::to_string(header.size()));
    }
    std::vector<double> rx(static_cast<std::size_t>(d));
    bool finite = true;
    for (int j = 0; j < d; ++j) {
      rx[static_cast<std::size_t>(j)] = x_tf[static_cast<std::size_t>(j)].apply(
          parse_number(fields[static_cast<std::size_t>(x_idx[static_cast<std::size_t>(j)])],
                       row, x_columns[static_cast<std::size_t>(j)]));
      finite = finite && std::isfinite(rx[static_cast<std::size_t>(j)]);
    }
    const double ry =
        y_tf.apply(parse_number(fields[static_cast<std::size_t>(y_idx)], row, y_column));
    finite = finite && std::isfinite(ry);
    if (!finite) {
      ++dropped;
      continue;
    }
    xs.insert(xs.end(), rx.begin(), rx.end());
    ys.push_back(ry);
  }
  if (ys.empty()) throw data_error("no usable data rows in " + path.string());

  Dataset out;
  const int n = static_cast<int>(ys.size());
  out.x.resize(n, d);
  out.y.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      out.x(i, j) = xs[static_cast<std::size_t>(i) * static_cast<std::size_t>(d) +
                       static_cast<std::size_t>(j)];
    }
    out.y[i] = ys[static_cast<std::size_t>(i)];
  }
  out.meta.source = path.filename().string();
  out.meta.detail = "loaded from " + path.string();
  out.meta.dropped_rows = dropped;
  return out;
}

}  // namespace specfit
