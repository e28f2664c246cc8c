#include "tmep/hessenberg_qr.hpp"

#include "tmep/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tmep {

namespace {

double sign_of(double magnitude, double s) { return s >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude); }

} // namespace

void balance(Eigen::MatrixXd& a) {
  constexpr double radix = 2.0;
  constexpr double radix2 = radix * radix;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j != i) {
          c += std::abs(a(j, i));
          r += std::abs(a(i, j));
        }
      }
      if (c == 0.0 || r == 0.0) {
        continue;
      }
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix2;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix2;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

// Francis double-shift QR on an upper Hessenberg matrix (EISPACK hqr).
// Indices below are 1-based to follow the classic formulation; `at` maps them.
std::vector<std::complex<double>> hessenberg_eigenvalues(Eigen::MatrixXd h, int max_iterations) {
  const int n = static_cast<int>(h.rows());
  std::vector<std::complex<double>> eig(static_cast<std::size_t>(n));
  if (n == 0) {
    return eig;
  }
  auto at = [&h](int i, int j) -> double& { return h(i - 1, j - 1); };
  auto put = [&eig](int i, double re, double im) { eig[static_cast<std::size_t>(i - 1)] = {re, im}; };

  double anorm = 0.0;
  for (int i = 1; i <= n; ++i) {
    for (int j = std::max(i - 1, 1); j <= n; ++j) {
      anorm += std::abs(at(i, j));
    }
  }

  int nn = n;
  double t = 0.0;
  double p = 0, q = 0, r = 0, s = 0, w = 0, x = 0, y = 0, z = 0;
  while (nn >= 1) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l >= 2; --l) {
        s = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
        if (s == 0.0) {
          s = anorm;
        }
        if (std::abs(at(l, l - 1)) + s == s) {
          at(l, l - 1) = 0.0;
          break;
        }
      }
      x = at(nn, nn);
      if (l == nn) {
        put(nn, x + t, 0.0);
        --nn;
      } else {
        y = at(nn - 1, nn - 1);
        w = at(nn, nn - 1) * at(nn - 1, nn);
        if (l == nn - 1) {
          p = 0.5 * (y - x);
          q = p * p + w;
          z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            put(nn - 1, x + z, 0.0);
            put(nn, z != 0.0 ? x - w / z : x + z, 0.0);
          } else {
            put(nn - 1, x + p, -z);
            put(nn, x + p, z);
          }
          nn -= 2;
        } else {
          if (its == max_iterations) {
            throw ConvergenceError("Hessenberg QR did not converge", max_iterations);
          }
          if (its == 10 || its == 20) {
            // exceptional shift
            t += x;
            for (int i = 1; i <= nn; ++i) {
              at(i, i) -= x;
            }
            s = std::abs(at(nn, nn - 1)) + std::abs(at(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          for (; m >= l; --m) {
            z = at(m, m);
            r = x - z;
            s = y - z;
            p = (r * s - w) / at(m + 1, m) + at(m, m + 1);
            q = at(m + 1, m + 1) - z - r - s;
            r = at(m + 2, m + 1);
            s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) {
              break;
            }
            const double u = std::abs(at(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(at(m - 1, m - 1)) + std::abs(z) + std::abs(at(m + 1, m + 1)));
            if (u + v == v) {
              break;
            }
          }
          for (int i = m + 2; i <= nn; ++i) {
            at(i, i - 2) = 0.0;
            if (i != m + 2) {
              at(i, i - 3) = 0.0;
            }
          }
          for (int k = m; k <= nn - 1; ++k) {
            if (k != m) {
              p = at(k, k - 1);
              q = at(k + 1, k - 1);
              r = 0.0;
              if (k != nn - 1) {
                r = at(k + 2, k - 1);
              }
              if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            if ((s = sign_of(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
              if (k == m) {
                if (l != m) {
                  at(k, k - 1) = -at(k, k - 1);
                }
              } else {
                at(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j <= nn; ++j) {
                p = at(k, j) + q * at(k + 1, j);
                if (k != nn - 1) {
                  p += r * at(k + 2, j);
                  at(k + 2, j) -= p * z;
                }
                at(k + 1, j) -= p * y;
                at(k, j) -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i <= mmin; ++i) {
                p = x * at(i, k) + y * at(i, k + 1);
                if (k != nn - 1) {
                  p += z * at(i, k + 2);
                  at(i, k + 2) -= p * r;
                }
                at(i, k + 1) -= p * q;
                at(i, k) -= p;
              }
            }
          }
        }
      }
    } while (nn >= 1 && l < nn - 1);
  }
  return eig;
}

} // namespace tmep
