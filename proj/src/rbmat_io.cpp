#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "rbtlse/errors.hpp"
#include "rbtlse/rb_core.hpp"

namespace rbtlse {

namespace {

constexpr std::string_view kMagic = "RBMAT";

bool is_blank(std::string_view s) { return s.find_first_not_of(" \t\r") == std::string_view::npos; }

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    pos = line.find_first_not_of(" \t\r", pos);
    if (pos == std::string_view::npos) break;
    std::size_t end = line.find_first_of(" \t\r", pos);
    if (end == std::string_view::npos) end = line.size();
    out.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "RBMAT line " + std::to_string(line_no) + ": " + msg);
}

double parse_double(std::string_view tok, std::size_t line_no) {
  double v = 0.0;
  const char* first = tok.data();
  // from_chars rejects a leading '+'; accept it since some writers emit one.
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    parse_fail(line_no, "not a number: '" + std::string(tok) + "'");
  }
  return v;
}

Index parse_dim(std::string_view tok, std::size_t line_no) {
  long long v = -1;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || v < 0) {
    parse_fail(line_no, "bad dimension '" + std::string(tok) + "'");
  }
  return static_cast<Index>(v);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error(ErrorCode::InvalidArgument, "format_double: to_chars failed");
  return std::string(buf, ptr);
}

void write_rbmat(std::ostream& out, const RBMatrix& p) {
  out << kMagic << ' ' << p.rows() << ' ' << p.cols() << '\n';
  for (int t = 0; t < 4; ++t) {
    if (t > 0) out << '\n';
    const RealMatrix& c = p.component(t);
    for (Index i = 0; i < c.rows(); ++i) {
      for (Index j = 0; j < c.cols(); ++j) {
        if (j > 0) out << ' ';
        out << format_double(c(i, j));
      }
      out << '\n';
    }
  }
}

RBMatrix read_rbmat(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
  if (in.bad()) throw Error(ErrorCode::IoError, "RBMAT: read failure");

  if (lines.empty()) parse_fail(1, "empty input");
  const auto header = split_ws(lines[0]);
  if (header.size() != 3 || header[0] != kMagic) parse_fail(1, "expected 'RBMAT <m> <n>'");
  const Index m = parse_dim(header[1], 1);
  const Index n = parse_dim(header[2], 1);
  if (n == 0) parse_fail(1, "column count must be positive");

  std::array<RealMatrix, 4> comps;
  std::size_t next = 1;
  for (int t = 0; t < 4; ++t) {
    if (t > 0) {
      if (next >= lines.size()) parse_fail(next + 1, "missing component block " + std::to_string(t));
      if (!is_blank(lines[next])) {
        parse_fail(next + 1, "expected blank separator before component " + std::to_string(t) +
                                 " (block has too many rows?)");
      }
      ++next;
    }
    comps[t].resize(m, n);
    for (Index i = 0; i < m; ++i, ++next) {
      if (next >= lines.size()) parse_fail(next + 1, "component " + std::to_string(t) + " is truncated");
      const auto toks = split_ws(lines[next]);
      if (static_cast<Index>(toks.size()) != n) {
        parse_fail(next + 1, "ragged row: expected " + std::to_string(n) + " values, got " +
                                 std::to_string(toks.size()));
      }
      for (Index j = 0; j < n; ++j) comps[t](i, j) = parse_double(toks[j], next + 1);
    }
  }
  for (; next < lines.size(); ++next) {
    if (!is_blank(lines[next])) parse_fail(next + 1, "unexpected content after the fourth component block");
  }
  return RBMatrix::from_components(std::move(comps[0]), std::move(comps[1]), std::move(comps[2]),
                                   std::move(comps[3]));
}

void save_rbmat(const std::string& path, const RBMatrix& p) {
  std::ostringstream buf;
  write_rbmat(buf, p);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << buf.str();
  if (!out.flush()) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

RBMatrix load_rbmat(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return read_rbmat(in);
}

}  // namespace rbtlse
