#include "surfquad/errors.hpp"
#include "surfquad/refmesh.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

namespace surfquad {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank, non-comment line split into tokens; false at EOF.
  bool next(std::vector<std::string_view>& tokens) {
    while (std::getline(in_, line_)) {
      ++number_;
      if (auto hash = line_.find('#'); hash != std::string::npos) line_.resize(hash);
      tokens.clear();
      std::string_view rest(line_);
      while (true) {
        const auto start = rest.find_first_not_of(" \t\r");
        if (start == std::string_view::npos) break;
        rest.remove_prefix(start);
        const auto end = rest.find_first_of(" \t\r");
        tokens.push_back(rest.substr(0, end));
        if (end == std::string_view::npos) break;
        rest.remove_prefix(end);
      }
      if (!tokens.empty()) return true;
    }
    return false;
  }

  std::size_t line() const { return number_; }
  // Line number an error at EOF is attributed to.
  std::size_t eof_line() const { return number_ + 1; }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t number_ = 0;
};

template <typename T>
T parse_number(std::string_view tok, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "cannot parse number '" + std::string(tok) + "'");
  return v;
}

void put(std::ostream& out, double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.write(buf, p - buf);
}

}  // namespace

FlatMesh read_off(std::istream& in) {
  LineReader reader(in);
  std::vector<std::string_view> tok;
  if (!reader.next(tok)) throw ParseError(reader.eof_line(), "empty file, expected 'OFF'");
  if (tok.size() != 1 || tok[0] != "OFF")
    throw ParseError(reader.line(), "expected 'OFF' header");

  if (!reader.next(tok)) throw ParseError(reader.eof_line(), "missing counts line");
  if (tok.size() < 2 || tok.size() > 3)
    throw ParseError(reader.line(), "expected 'V F 0' counts line");
  const long nv = parse_number<long>(tok[0], reader.line());
  const long nf = parse_number<long>(tok[1], reader.line());
  if (nv < 0 || nf < 0) throw ParseError(reader.line(), "negative element count");

  FlatMesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    if (!reader.next(tok)) throw ParseError(reader.eof_line(), "missing vertex line");
    if (tok.size() != 3) throw ParseError(reader.line(), "expected 3 coordinates");
    Vec3 p;
    for (int d = 0; d < 3; ++d) p[d] = parse_number<double>(tok[d], reader.line());
    mesh.vertices.push_back(p);
  }
  mesh.faces.reserve(static_cast<std::size_t>(nf));
  for (long i = 0; i < nf; ++i) {
    if (!reader.next(tok)) throw ParseError(reader.eof_line(), "missing face line");
    const int count = parse_number<int>(tok[0], reader.line());
    if (count != 3) throw NonTriangleFace(reader.line(), count);
    if (tok.size() != 4) throw ParseError(reader.line(), "expected '3 i j k'");
    Face f{};
    for (int d = 0; d < 3; ++d) {
      f[d] = parse_number<int>(tok[d + 1], reader.line());
      if (f[d] < 0 || f[d] >= nv)
        throw ParseError(reader.line(), "vertex index out of range");
    }
    mesh.faces.push_back(f);
  }
  return mesh;
}

FlatMesh read_off(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_off(in);
}

void write_off(const FlatMesh& mesh, std::ostream& out) {
  out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.faces.size() << " 0\n";
  for (const auto& v : mesh.vertices) {
    put(out, v.x());
    out << ' ';
    put(out, v.y());
    out << ' ';
    put(out, v.z());
    out << '\n';
  }
  for (const auto& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

void write_off(const FlatMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_off(mesh, out);
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace surfquad
