// Writes a random RB problem (A, B, C, D) as RBMAT files into the given directory.

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "rbtlse/rbtlse.h"

namespace {

bool write(const std::string& path, size_t rows, size_t cols, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  std::vector<double> c[4];
  for (auto& v : c) {
    v.resize(rows * cols);
    for (auto& x : v) x = nd(gen);
  }
  rbtlse_matrix* m = nullptr;
  if (rbtlse_matrix_from_components(rows, cols, c[0].data(), c[1].data(), c[2].data(), c[3].data(), &m) !=
      RBTLSE_OK)
    return false;
  const bool ok = rbtlse_matrix_save(m, path.c_str()) == RBTLSE_OK;
  if (!ok) std::fprintf(stderr, "%s\n", rbtlse_last_error());
  rbtlse_matrix_destroy(m);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s <dir>\n", argv[0]);
    return 1;
  }
  const std::string dir = argv[1];
  std::mt19937_64 gen(2718);
  const bool ok = write(dir + "/a.rbmat", 30, 10, gen) && write(dir + "/b.rbmat", 30, 2, gen) &&
                  write(dir + "/c.rbmat", 2, 10, gen) && write(dir + "/d.rbmat", 2, 2, gen);
  return ok ? 0 : 1;
}
