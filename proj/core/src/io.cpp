#include "roughlab/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "roughlab/errors.hpp"

namespace roughlab {

namespace {

void set_full_precision(std::ostream& os) {
  os << std::setprecision(17);
}

std::string expect_header(std::istream& is, const std::string& tag) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("io: empty stream");
  if (line.rfind("# " + tag, 0) != 0) {
    throw ConfigError("io: expected '# " + tag + "' header, got: " + line);
  }
  return line;
}

// Parses "key=value" tokens out of a header line.
double header_value(const std::string& line, const std::string& key) {
  const std::string needle = key + "=";
  const auto pos = line.find(needle);
  if (pos == std::string::npos) {
    throw ConfigError("io: header missing field '" + key + "'");
  }
  return std::stod(line.substr(pos + needle.size()));
}

Eigen::MatrixXd read_matrix_rows(std::istream& is, int rows, int cols,
                                 const char* what) {
  Eigen::MatrixXd m(rows, cols);
  std::string line;
  for (int i = 0; i < rows; ++i) {
    if (!std::getline(is, line)) {
      throw ConfigError(std::string("io: truncated ") + what);
    }
    std::istringstream ls(line);
    for (int j = 0; j < cols; ++j) {
      if (!(ls >> m(i, j))) {
        throw ConfigError(std::string("io: malformed ") + what + " line: " + line);
      }
    }
  }
  return m;
}

}  // namespace

void write_rough_path(std::ostream& os, const RoughPath& rp) {
  set_full_precision(os);
  const int n = rp.n_points();
  const int d = rp.dim();
  os << "# roughpath d=" << d << " n=" << n << " gamma=" << rp.gamma() << "\n";
  for (int i = 0; i < n; ++i) {
    os << rp.grid().node(i);
    for (int j = 0; j < d; ++j) os << ' ' << rp.path().values()(i, j);
    os << '\n';
  }
  for (int k = 0; k + 1 < n; ++k) {
    const Eigen::MatrixXd& a = rp.step_area(k);
    bool first = true;
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        if (!first) os << ' ';
        os << a(r, c);
        first = false;
      }
    }
    os << '\n';
  }
}

RoughPath read_rough_path(std::istream& is) {
  const std::string header = expect_header(is, "roughpath");
  const int d = static_cast<int>(header_value(header, "d"));
  const int n = static_cast<int>(header_value(header, "n"));
  const double gamma = header_value(header, "gamma");
  if (d < 1 || n < 2) throw ConfigError("io: bad roughpath dimensions");

  const Eigen::MatrixXd nodes = read_matrix_rows(is, n, d + 1, "node block");
  const Grid grid(nodes(0, 0), nodes(n - 1, 0), n);
  const Eigen::MatrixXd areas_flat = read_matrix_rows(is, n - 1, d * d, "area block");

  std::vector<Eigen::MatrixXd> areas;
  areas.reserve(n - 1);
  for (int k = 0; k + 1 < n; ++k) {
    Eigen::MatrixXd a(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) a(r, c) = areas_flat(k, r * d + c);
    }
    areas.push_back(std::move(a));
  }
  return RoughPath(SampledPath(grid, nodes.rightCols(d)), std::move(areas), gamma);
}

void write_sampled_path(std::ostream& os, const SampledPath& p) {
  set_full_precision(os);
  const int n = p.n_points();
  const int d = p.dim();
  os << "# sampledpath d=" << d << " n=" << n << "\n";
  for (int i = 0; i < n; ++i) {
    os << p.grid().node(i);
    for (int j = 0; j < d; ++j) os << ' ' << p.values()(i, j);
    os << '\n';
  }
}

SampledPath read_sampled_path(std::istream& is) {
  const std::string header = expect_header(is, "sampledpath");
  const int d = static_cast<int>(header_value(header, "d"));
  const int n = static_cast<int>(header_value(header, "n"));
  if (d < 1 || n < 2) throw ConfigError("io: bad sampledpath dimensions");
  const Eigen::MatrixXd nodes = read_matrix_rows(is, n, d + 1, "node block");
  const Grid grid(nodes(0, 0), nodes(n - 1, 0), n);
  return SampledPath(grid, nodes.rightCols(d));
}

namespace {
template <typename T, typename Fn>
void write_file(const std::string& path, const T& value, Fn writer) {
  std::ofstream os(path);
  if (!os) throw ConfigError("io: cannot open '" + path + "' for writing");
  writer(os, value);
}

template <typename Fn>
auto read_file(const std::string& path, Fn reader) {
  std::ifstream is(path);
  if (!is) throw ConfigError("io: cannot open '" + path + "'");
  return reader(is);
}
}  // namespace

void write_rough_path_file(const std::string& path, const RoughPath& rp) {
  write_file(path, rp, [](std::ostream& os, const RoughPath& v) {
    write_rough_path(os, v);
  });
}

RoughPath read_rough_path_file(const std::string& path) {
  return read_file(path, [](std::istream& is) { return read_rough_path(is); });
}

void write_sampled_path_file(const std::string& path, const SampledPath& p) {
  write_file(path, p, [](std::ostream& os, const SampledPath& v) {
    write_sampled_path(os, v);
  });
}

SampledPath read_sampled_path_file(const std::string& path) {
  return read_file(path, [](std::istream& is) { return read_sampled_path(is); });
}

}  // namespace roughlab
