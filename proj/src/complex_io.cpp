#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "simchar/complex.hpp"
#include "simchar/error.hpp"

namespace simchar {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_complex(std::ostream& os, const SimplicialComplex& x) {
  os << "dim " << x.dim() << " embed " << x.embed_dim() << '\n';
  for (int v = 0; v < x.vertex_count(); ++v) {
    os << 'v';
    for (int c = 0; c < x.embed_dim(); ++c) os << ' ' << format_double(x.coordinates()(v, c));
    os << '\n';
  }
  const int n = x.dim();
  for (int t = 0; t < x.count(n); ++t) {
    os << 's';
    for (int v : x.simplex(n, t)) os << ' ' << v;
    if (x.oriented()) os << ' ' << (x.orientation(n, t) > 0 ? "+1" : "-1");
    os << '\n';
  }
}

ComplexPtr read_complex(std::istream& is, const BuildOptions& options) {
  std::string line;
  int n = -1, embed = -1;
  std::vector<std::vector<double>> verts;
  std::vector<std::vector<int>> tops;
  std::vector<int> signs;
  bool any_sign = false, any_unsigned = false;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    const std::string where = " at line " + std::to_string(lineno);
    if (tag == "dim") {
      std::string kw;
      if (!(ls >> n >> kw >> embed) || kw != "embed" || n < 1 || embed < n)
        fail(ErrorCode::kParseError, "bad header" + where);
    } else if (tag == "v") {
      if (n < 0) fail(ErrorCode::kParseError, "vertex before header" + where);
      std::vector<double> c(embed);
      for (auto& x : c)
        if (!(ls >> x)) fail(ErrorCode::kParseError, "short vertex line" + where);
      std::string extra;
      if (ls >> extra) fail(ErrorCode::kParseError, "long vertex line" + where);
      verts.push_back(std::move(c));
    } else if (tag == "s") {
      if (n < 0) fail(ErrorCode::kParseError, "simplex before header" + where);
      std::vector<int> s(n + 1);
      for (auto& v : s)
        if (!(ls >> v)) fail(ErrorCode::kParseError, "short simplex line" + where);
      std::string sign;
      if (ls >> sign) {
        if (sign == "+1" || sign == "1") signs.push_back(1);
        else if (sign == "-1") signs.push_back(-1);
        else fail(ErrorCode::kParseError, "bad orientation sign" + where);
        any_sign = true;
      } else {
        signs.push_back(1);
        any_unsigned = true;
      }
      tops.push_back(std::move(s));
    } else {
      fail(ErrorCode::kParseError, "unknown record '" + tag + "'" + where);
    }
  }
  if (n < 0) fail(ErrorCode::kParseError, "missing header");
  if (any_sign && any_unsigned) fail(ErrorCode::kParseError, "orientation signs must be given for all or none");
  Eigen::MatrixXd coords(verts.size(), embed);
  for (size_t v = 0; v < verts.size(); ++v)
    for (int c = 0; c < embed; ++c) coords(v, c) = verts[v][c];
  return build_complex(coords, tops, any_sign ? signs : std::vector<int>{}, options);
}

ComplexPtr load_complex(const std::string& path, const BuildOptions& options) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path);
  return read_complex(in, options);
}

void save_complex(const std::string& path, const SimplicialComplex& x) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIoError, "cannot write " + path);
  write_complex(out, x);
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path);
}

}  // namespace simchar
