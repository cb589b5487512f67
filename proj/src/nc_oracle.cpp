// Brute-force free cumulants over the lattice of non-crossing partitions.
#include <numeric>
#include <vector>

#include "ringlab/error.hpp"
#include "ringlab/transforms.hpp"

namespace ringlab {
namespace {

constexpr int kMaxOracleOrder = 10;

/// Visits every set partition of {0..n-1} as a restricted growth string.
template <typename Visit>
void for_each_partition(int n, Visit&& visit) {
  std::vector<int> label(n, 0);
  std::vector<int> max_before(n, 0);
  while (true) {
    visit(label);
    int i = n - 1;
    while (i > 0 && label[i] == max_before[i] + 1) --i;
    if (i <= 0) return;
    ++label[i];
    for (int j = i + 1; j < n; ++j) {
      label[j] = 0;
      max_before[j] = std::max(max_before[j - 1], label[j - 1]);
    }
  }
}

bool is_noncrossing(const std::vector<int>& label) {
  const int n = static_cast<int>(label.size());
  // a < b < c < d with a,c in one block and b,d in another.
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (label[b] == label[a]) continue;
      for (int c = b + 1; c < n; ++c) {
        if (label[c] != label[a]) continue;
        for (int d = c + 1; d < n; ++d) {
          if (label[d] == label[b]) return false;
        }
      }
    }
  }
  return true;
}

double catalan(int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c = c * 2.0 * (2 * i + 1) / (i + 2);
  return c;
}

/// mu(pi, 1_n) as the product over cycles c of pi^{-1} gamma of
/// (-1)^{|c|-1} Cat_{|c|-1}, where gamma is the full cycle (0 1 ... n-1)
/// and pi lists each block in increasing cyclic order.
double moebius_to_top(const std::vector<int>& label) {
  const int n = static_cast<int>(label.size());
  std::vector<int> pi(n);
  std::vector<int> pi_inv(n);
  for (int i = 0; i < n; ++i) {
    int next = i;
    for (int j = 1; j <= n; ++j) {
      const int cand = (i + j) % n;
      if (label[cand] == label[i]) {
        next = cand;
        break;
      }
    }
    pi[i] = next;
    pi_inv[next] = i;
  }
  std::vector<bool> seen(n, false);
  double mu = 1.0;
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    int len = 0;
    for (int i = start; !seen[i]; i = pi_inv[(i + 1) % n]) {
      seen[i] = true;
      ++len;
    }
    mu *= ((len - 1) % 2 == 0 ? 1.0 : -1.0) * catalan(len - 1);
  }
  return mu;
}

void check_order(int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "partition order must be positive");
  if (n > kMaxOracleOrder) {
    throw Error(ErrorKind::OrderTooLarge,
                "non-crossing enumeration is capped at n = " + std::to_string(kMaxOracleOrder));
  }
}

}  // namespace

std::size_t nc_partition_count(int n) {
  check_order(n);
  std::size_t count = 0;
  for_each_partition(n, [&](const std::vector<int>& label) {
    if (is_noncrossing(label)) ++count;
  });
  return count;
}

double nc_cumulant_oracle(const MomentData& moments, int n) {
  check_order(n);
  if (moments.m.size() < static_cast<std::size_t>(n)) {
    throw Error(ErrorKind::InvalidArgument, "oracle needs moments up to the requested order");
  }
  double kappa = 0.0;
  std::vector<int> block_size;
  for_each_partition(n, [&](const std::vector<int>& label) {
    if (!is_noncrossing(label)) return;
    block_size.assign(n, 0);
    for (int v : label) ++block_size[v];
    double term = moebius_to_top(label);
    for (int size : block_size) {
      if (size > 0) term *= moments.m[size - 1];
    }
    kappa += term;
  });
  return kappa;
}

}  // namespace ringlab
