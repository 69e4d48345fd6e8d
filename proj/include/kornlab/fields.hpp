#pragma once
//
// Tensor fields on the periodic torus [0, 2pi)^3, stored as Fourier
// coefficients:
//
//   f(x) = sum_k c_k exp(i <k, x>),   k in Z^3, |k_d| <= n/2.
//
// Coefficient layout is frequency-major: entry (flat * slots + slot), where
// flat = (i0 * n + i1) * n + i2 and i_d is the FFT index along axis d
// (i_d < n/2 means k_d = i_d, otherwise k_d = i_d - n). Tensor slots are
// row-major: slot 3*i + j holds entry (i, j) of a rank-2 field.
//
// Differential operators multiply each coefficient by its symbol
// (d/dx_j -> i k_j). Modes touching the Nyquist index n/2 carry no
// well-defined real derivative and are mapped to zero by every derivative.
//
#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fftw3.h>

#include <Eigen/Dense>

#include "kornlab/algebra3.hpp"
#include "kornlab/error.hpp"
#include "kornlab/quadrature.hpp"

namespace kornlab {

using Vec3i = Eigen::Matrix<int, 3, 1>;

class GridSpec {
 public:
  explicit GridSpec(int n) : n_(n) {
    if (n < 4 || (n & (n - 1)) != 0) {
      throw Error(ErrorCode::BadGrid, "grid size must be a power of two >= 4, got " + std::to_string(n));
    }
  }

  int n() const { return n_; }
  std::size_t points() const { return static_cast<std::size_t>(n_) * n_ * n_; }
  double spacing() const { return 2.0 * std::numbers::pi / n_; }

  int frequency(int index) const { return index < n_ / 2 ? index : index - n_; }
  int index(int frequency) const { return frequency >= 0 ? frequency : frequency + n_; }

  std::size_t flat(int i0, int i1, int i2) const {
    return (static_cast<std::size_t>(i0) * n_ + i1) * n_ + i2;
  }

  Vec3i indices(std::size_t flat) const {
    const int i2 = static_cast<int>(flat % n_);
    const int i1 = static_cast<int>((flat / n_) % n_);
    const int i0 = static_cast<int>(flat / (static_cast<std::size_t>(n_) * n_));
    return Vec3i(i0, i1, i2);
  }

  Vec3i frequency_of(std::size_t flat) const {
    const Vec3i id = indices(flat);
    return Vec3i(frequency(id(0)), frequency(id(1)), frequency(id(2)));
  }

  std::size_t flat_of_frequency(const Vec3i& k) const { return flat(index(k(0)), index(k(1)), index(k(2))); }

  bool touches_nyquist(std::size_t flat) const {
    const Vec3i id = indices(flat);
    return id(0) == n_ / 2 || id(1) == n_ / 2 || id(2) == n_ / 2;
  }

  /// Physical grid point of a flat index: x_d = 2 pi i_d / n.
  Vec3d point(std::size_t flat) const { return indices(flat).cast<double>() * spacing(); }

  bool operator==(const GridSpec& o) const { return n_ == o.n_; }

 private:
  int n_;
};

enum class Reality { Real, Complex };

inline int slots_for_rank(int rank) {
  switch (rank) {
    case 0: return 1;
    case 1: return 3;
    case 2: return 9;
  }
  throw Error(ErrorCode::RankMismatch, "field rank must be 0, 1 or 2");
}

namespace detail {

inline std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

/// In-place batched 3D transform over `slots` interleaved components.
inline void fft3(std::vector<cplx>& data, int n, int slots, int sign) {
  const int dims[3] = {n, n, n};
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    plan = fftw_plan_many_dft(3, dims, slots, buf, nullptr, slots, 1, buf, nullptr, slots, 1, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(plan);
  }
}

}  // namespace detail

/// Immutable spectral representation of a rank-0/1/2 field.
class GridField {
 public:
  GridField(GridSpec grid, int rank, Reality reality, std::vector<cplx> coefficients)
      : grid_(grid), rank_(rank), slots_(slots_for_rank(rank)), reality_(reality), coef_(std::move(coefficients)) {
    if (coef_.size() != grid_.points() * slots_) {
      throw Error(ErrorCode::RankMismatch, "coefficient array does not match grid and rank");
    }
  }

  static GridField zeros(GridSpec grid, int rank, Reality reality = Reality::Real) {
    return GridField(grid, rank, reality, std::vector<cplx>(grid.points() * slots_for_rank(rank)));
  }

  /// Forward transform of point values laid out as [point][slot].
  static GridField from_samples(GridSpec grid, int rank, std::vector<cplx> samples, Reality reality) {
    const int slots = slots_for_rank(rank);
    if (samples.size() != grid.points() * slots) {
      throw Error(ErrorCode::RankMismatch, "sample array does not match grid and rank");
    }
    detail::fft3(samples, grid.n(), slots, FFTW_FORWARD);
    const double scale = 1.0 / static_cast<double>(grid.points());
    for (auto& c : samples) c *= scale;
    if (reality == Reality::Real) {
      // Nyquist modes of a real signal are real-valued; enforce the lattice
      // symmetry exactly.
      GridField f(grid, rank, reality, std::move(samples));
      f.symmetrize();
      return f;
    }
    return GridField(grid, rank, reality, std::move(samples));
  }

  /// Samples fn(x) at the grid points; fn returns cplx, Vec3c or Mat3c
  /// according to the rank.
  template <class F>
  static GridField from_function(GridSpec grid, int rank, F&& fn, Reality reality = Reality::Real) {
    const int slots = slots_for_rank(rank);
    std::vector<cplx> s(grid.points() * slots);
    for (std::size_t p = 0; p < grid.points(); ++p) {
      const auto v = fn(grid.point(p));
      using V = std::decay_t<decltype(v)>;
      if constexpr (std::is_arithmetic_v<V> || std::is_same_v<V, cplx>) {
        s[p] = cplx(v);
      } else if constexpr (V::ColsAtCompileTime == 1) {
        for (int c = 0; c < slots; ++c) s[p * slots + c] = cplx(v(c));
      } else {
        for (int c = 0; c < slots; ++c) s[p * slots + c] = cplx(v(c / 3, c % 3));
      }
    }
    return from_samples(grid, rank, std::move(s), reality);
  }

  /// Inverse transform: point values laid out as [point][slot].
  std::vector<cplx> samples() const {
    std::vector<cplx> s = coef_;
    detail::fft3(s, grid_.n(), slots_, FFTW_BACKWARD);
    return s;
  }

  const GridSpec& grid() const { return grid_; }
  int rank() const { return rank_; }
  int slots() const { return slots_; }
  Reality reality() const { return reality_; }
  const std::vector<cplx>& coefficients() const { return coef_; }

  cplx coefficient(std::size_t flat, int slot) const { return coef_[flat * slots_ + slot]; }

  Vec3c vector_coefficient(std::size_t flat) const {
    return Vec3c(coef_[flat * slots_], coef_[flat * slots_ + 1], coef_[flat * slots_ + 2]);
  }

  Mat3c matrix_coefficient(std::size_t flat) const {
    Mat3c X;
    for (int s = 0; s < 9; ++s) X(s / 3, s % 3) = coef_[flat * 9 + s];
    return X;
  }

  /// sqrt(sum |c|^2); the L^2 norm over the torus is (2 pi)^{3/2} times this.
  double coefficient_norm() const {
    double sum = 0.0;
    for (const auto& c : coef_) sum += std::norm(c);
    return std::sqrt(sum);
  }

  /// max |c(-k) - conj(c(k))|; zero for real-valued fields.
  double max_conjugate_asymmetry() const {
    double worst = 0.0;
    for (std::size_t f = 0; f < grid_.points(); ++f) {
      const Vec3i id = grid_.indices(f);
      const std::size_t g = grid_.flat((grid_.n() - id(0)) % grid_.n(), (grid_.n() - id(1)) % grid_.n(),
                                       (grid_.n() - id(2)) % grid_.n());
      for (int s = 0; s < slots_; ++s) worst = std::max(worst, std::abs(coef_[g * slots_ + s] - std::conj(coef_[f * slots_ + s])));
    }
    return worst;
  }

 private:
  void symmetrize() {
    std::vector<cplx> out(coef_.size());
    for (std::size_t f = 0; f < grid_.points(); ++f) {
      const Vec3i id = grid_.indices(f);
      const std::size_t g = grid_.flat((grid_.n() - id(0)) % grid_.n(), (grid_.n() - id(1)) % grid_.n(),
                                       (grid_.n() - id(2)) % grid_.n());
      for (int s = 0; s < slots_; ++s) out[f * slots_ + s] = 0.5 * (coef_[f * slots_ + s] + std::conj(coef_[g * slots_ + s]));
    }
    coef_ = std::move(out);
  }

  GridSpec grid_;
  int rank_;
  int slots_;
  Reality reality_;
  std::vector<cplx> coef_;
};

// ---------------------------------------------------------------------------
// Per-coefficient maps

namespace detail {

/// Coefficient block of one frequency: 1, 3 or 9 slots, stack allocated.
using Block = Eigen::Matrix<cplx, Eigen::Dynamic, 1, 0, 9, 1>;

inline Block block_of(const GridField& f, std::size_t flat) {
  Block v(f.slots());
  for (int s = 0; s < f.slots(); ++s) v(s) = f.coefficient(flat, s);
  return v;
}

inline Vec3c as_vec(const Block& v) { return Vec3c(v(0), v(1), v(2)); }

inline Mat3c as_mat(const Block& v) {
  Mat3c X;
  for (int s = 0; s < 9; ++s) X(s / 3, s % 3) = v(s);
  return X;
}

inline Block from_scalar(cplx c) {
  Block v(1);
  v(0) = c;
  return v;
}

inline Block from_vec(const Vec3c& a) { return Block(a); }

inline Block from_mat(const Mat3c& X) {
  Block v(9);
  for (int s = 0; s < 9; ++s) v(s) = X(s / 3, s % 3);
  return v;
}

/// out(k) = fn(k, in(k)); fn receives the integer frequency as doubles.
template <class F>
GridField map_coefficients(const GridField& f, int out_rank, F&& fn) {
  const int out_slots = slots_for_rank(out_rank);
  std::vector<cplx> out(f.grid().points() * out_slots);
  for (std::size_t flat = 0; flat < f.grid().points(); ++flat) {
    const Vec3d k = f.grid().frequency_of(flat).cast<double>();
    const Block r = fn(flat, k, block_of(f, flat));
    for (int s = 0; s < out_slots; ++s) out[flat * out_slots + s] = r(s);
  }
  return GridField(f.grid(), out_rank, f.reality(), std::move(out));
}

inline void require_rank(const GridField& f, int rank, const char* what) {
  if (f.rank() != rank) {
    throw Error(ErrorCode::RankMismatch, std::string(what) + " expects a rank-" + std::to_string(rank) +
                                             " field, got rank " + std::to_string(f.rank()));
  }
}

}  // namespace detail

// Pointwise linear maps.

inline GridField transpose(const GridField& f) {
  detail::require_rank(f, 2, "transpose");
  return detail::map_coefficients(f, 2, [](std::size_t, const Vec3d&, const detail::Block& v) {
    return detail::from_mat(detail::as_mat(v).transpose());
  });
}

inline GridField sym(const GridField& f) {
  detail::require_rank(f, 2, "sym");
  return detail::map_coefficients(f, 2, [](std::size_t, const Vec3d&, const detail::Block& v) {
    return detail::from_mat(sym(detail::as_mat(v)));
  });
}

inline GridField skew(const GridField& f) {
  detail::require_rank(f, 2, "skew");
  return detail::map_coefficients(f, 2, [](std::size_t, const Vec3d&, const detail::Block& v) {
    return detail::from_mat(skew(detail::as_mat(v)));
  });
}

inline GridField dev(const GridField& f) {
  detail::require_rank(f, 2, "dev");
  return detail::map_coefficients(f, 2, [](std::size_t, const Vec3d&, const detail::Block& v) {
    return detail::from_mat(dev(detail::as_mat(v)));
  });
}

inline GridField devsym(const GridField& f) {
  detail::require_rank(f, 2, "devsym");
  return detail::map_coefficients(f, 2, [](std::size_t, const Vec3d&, const detail::Block& v) {
    return detail::from_mat(devsym(detail::as_mat(v)));
  });
}

inline GridField trace(const GridField& f) {
  detail::require_rank(f, 2, "trace");
  return detail::map_coefficients(f, 0, [](std::size_t, const Vec3d&, const detail::Block& v) {
    return detail::from_scalar(detail::as_mat(v).trace());
  });
}

/// zeta -> zeta * id
inline GridField spherical(const GridField& f) {
  detail::require_rank(f, 0, "spherical");
  return detail::map_coefficients(f, 2, [](std::size_t, const Vec3d&, const detail::Block& v) {
    return detail::from_mat(v(0) * Mat3c::Identity());
  });
}

inline GridField anti(const GridField& f) {
  detail::require_rank(f, 1, "anti");
  return detail::map_coefficients(f, 2, [](std::size_t, const Vec3d&, const detail::Block& v) {
    return detail::from_mat(anti(detail::as_vec(v)));
  });
}

/// Axial vector of the skew part.
inline GridField axl(const GridField& f) {
  detail::require_rank(f, 2, "axl");
  return detail::map_coefficients(f, 1, [](std::size_t, const Vec3d&, const detail::Block& v) {
    return detail::from_vec(axl_of_skew(detail::as_mat(v)));
  });
}

inline GridField operator+(const GridField& a, const GridField& b) {
  if (a.rank() != b.rank() || !(a.grid() == b.grid())) throw Error(ErrorCode::RankMismatch, "field sum needs equal rank and grid");
  std::vector<cplx> c(a.coefficients());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.coefficients()[i];
  const Reality r = (a.reality() == Reality::Real && b.reality() == Reality::Real) ? Reality::Real : Reality::Complex;
  return GridField(a.grid(), a.rank(), r, std::move(c));
}

inline GridField operator*(double s, const GridField& a) {
  std::vector<cplx> c(a.coefficients());
  for (auto& x : c) x *= s;
  return GridField(a.grid(), a.rank(), a.reality(), std::move(c));
}

inline GridField operator-(const GridField& a, const GridField& b) { return a + (-1.0) * b; }

// ---------------------------------------------------------------------------
// Differential operators

enum class DiffOp { Grad, Div, CurlVec, CurlMat, Inc, SymCurl, DevSymCurl, Laplacian };

namespace detail {

/// -i P anti(k): symbol of the matrix Curl.
inline Mat3c curl_mat_symbol(const Mat3c& P, const Vec3d& k) { return cplx(0.0, -1.0) * (P * anti(to_complex(k))); }

}  // namespace detail

/// Grad: 0->1, 1->2 ((D a)_ij = d_j a_i). Div: 1->0, 2->1 ((Div P)_i = d_j P_ij).
/// CurlVec: 1->1. CurlMat, Inc, SymCurl, DevSymCurl: 2->2 (row-wise curl).
/// Laplacian: any rank.
inline GridField apply_operator(const GridField& f, DiffOp op) {
  const cplx I(0.0, 1.0);
  const GridSpec& grid = f.grid();
  auto zero_at_nyquist = [&grid](std::size_t flat, detail::Block v) {
    if (grid.touches_nyquist(flat)) v.setZero();
    return v;
  };
  switch (op) {
    case DiffOp::Grad:
      if (f.rank() == 0) {
        return detail::map_coefficients(f, 1, [&](std::size_t flat, const Vec3d& k, const detail::Block& v) {
          return zero_at_nyquist(flat, detail::from_vec(I * v(0) * to_complex(k)));
        });
      }
      if (f.rank() == 1) {
        return detail::map_coefficients(f, 2, [&](std::size_t flat, const Vec3d& k, const detail::Block& v) {
          return zero_at_nyquist(flat, detail::from_mat(I * dyad(detail::as_vec(v), to_complex(k))));
        });
      }
      break;
    case DiffOp::Div:
      if (f.rank() == 1) {
        return detail::map_coefficients(f, 0, [&](std::size_t flat, const Vec3d& k, const detail::Block& v) {
          return zero_at_nyquist(flat, detail::from_scalar(I * pair(detail::as_vec(v), to_complex(k))));
        });
      }
      if (f.rank() == 2) {
        return detail::map_coefficients(f, 1, [&](std::size_t flat, const Vec3d& k, const detail::Block& v) {
          return zero_at_nyquist(flat, detail::from_vec(I * (detail::as_mat(v) * to_complex(k))));
        });
      }
      break;
    case DiffOp::CurlVec:
      if (f.rank() == 1) {
        return detail::map_coefficients(f, 1, [&](std::size_t flat, const Vec3d& k, const detail::Block& v) {
          return zero_at_nyquist(flat, detail::from_vec(I * cross(to_complex(k), detail::as_vec(v))));
        });
      }
      break;
    case DiffOp::CurlMat:
    case DiffOp::Inc:
    case DiffOp::SymCurl:
    case DiffOp::DevSymCurl:
      if (f.rank() == 2) {
        return detail::map_coefficients(f, 2, [&](std::size_t flat, const Vec3d& k, const detail::Block& v) {
          const Mat3c C = detail::curl_mat_symbol(detail::as_mat(v), k);
          Mat3c out;
          switch (op) {
            case DiffOp::Inc: out = detail::curl_mat_symbol(C.transpose(), k); break;
            case DiffOp::SymCurl: out = sym(C); break;
            case DiffOp::DevSymCurl: out = devsym(C); break;
            default: out = C; break;
          }
          return zero_at_nyquist(flat, detail::from_mat(out));
        });
      }
      break;
    case DiffOp::Laplacian:
      return detail::map_coefficients(f, f.rank(), [&](std::size_t flat, const Vec3d& k, const detail::Block& v) {
        return zero_at_nyquist(flat, detail::Block(-k.squaredNorm() * v));
      });
  }
  throw Error(ErrorCode::RankMismatch, "operator not defined for a rank-" + std::to_string(f.rank()) + " field");
}

// ---------------------------------------------------------------------------
// Norms, random fields, dumps

/// L^p norm over the torus with the uniform (trapezoidal) rule; pointwise
/// magnitude is the Euclidean/Frobenius (Hermitian) norm of the value.
inline double lp_norm(const GridField& f, double p) {
  check_exponent(p);
  const std::vector<cplx> s = f.samples();
  const int slots = f.slots();
  double sum = 0.0;
  for (std::size_t pt = 0; pt < f.grid().points(); ++pt) {
    double mag2 = 0.0;
    for (int c = 0; c < slots; ++c) mag2 += std::norm(s[pt * slots + c]);
    sum += std::pow(std::sqrt(mag2), p);
  }
  const double h = f.grid().spacing();
  return std::pow(sum * h * h * h, 1.0 / p);
}

enum class Structure { General, Skew, Sym, SkewPlusSpherical };

/// Deterministic real field with support |k|_inf <= kmax. Coefficients are
/// drawn uniformly in [-1, 1] + i[-1, 1] in flat-index order for the
/// representative of each (k, -k) pair. Structure applies to rank 2 only.
inline GridField random_bandlimited(GridSpec grid, std::uint64_t seed, int kmax, int rank = 2,
                                    Structure structure = Structure::General) {
  if (kmax < 0 || kmax > grid.n() / 2 - 1) {
    throw Error(ErrorCode::BandTooWide, "kmax must lie in [0, n/2 - 1]");
  }
  if (rank != 2 && structure != Structure::General) {
    throw Error(ErrorCode::RankMismatch, "pointwise structure applies to rank-2 fields");
  }
  const int slots = slots_for_rank(rank);
  std::vector<cplx> c(grid.points() * slots);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  for (std::size_t flat = 0; flat < grid.points(); ++flat) {
    const Vec3i k = grid.frequency_of(flat);
    if (k.cwiseAbs().maxCoeff() > kmax) continue;
    // representative: first nonzero component positive, or k = 0
    int lead = 0;
    for (int d = 0; d < 3 && lead == 0; ++d) lead = (k(d) > 0) - (k(d) < 0);
    if (lead < 0) continue;
    const std::size_t partner = grid.flat_of_frequency(-k);
    for (int s = 0; s < slots; ++s) {
      const double re = u(rng);
      const double im = lead == 0 ? 0.0 : u(rng);
      c[flat * slots + s] = cplx(re, im);
      c[partner * slots + s] = cplx(re, -im);
    }
  }
  GridField f(grid, rank, Reality::Real, std::move(c));
  switch (structure) {
    case Structure::General: return f;
    case Structure::Skew: return skew(f);
    case Structure::Sym: return sym(f);
    case Structure::SkewPlusSpherical: return skew(f) + (1.0 / 3.0) * spherical(trace(f));
  }
  return f;
}

/// Writes `kornlab-field v1; rank=<r>; n=<n>; reality=<real|complex>\n`
/// followed by the coefficients as little-endian complex64 (float32 real,
/// float32 imaginary) in frequency-major order.
inline void write_field(const std::string& path, const GridField& f) {
  static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << "kornlab-field v1; rank=" << f.rank() << "; n=" << f.grid().n()
      << "; reality=" << (f.reality() == Reality::Real ? "real" : "complex") << '\n';
  for (const auto& c : f.coefficients()) {
    const float pairv[2] = {static_cast<float>(c.real()), static_cast<float>(c.imag())};
    out.write(reinterpret_cast<const char*>(pairv), sizeof(pairv));
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

inline GridField read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string header;
  std::getline(in, header);
  int rank = -1, n = -1;
  char reality[16] = {};
  if (std::sscanf(header.c_str(), "kornlab-field v1; rank=%d; n=%d; reality=%15s", &rank, &n, reality) != 3) {
    throw Error(ErrorCode::IoError, "malformed field header in " + path);
  }
  const GridSpec grid(n);
  std::vector<cplx> c(grid.points() * slots_for_rank(rank));
  for (auto& x : c) {
    float pairv[2];
    in.read(reinterpret_cast<char*>(pairv), sizeof(pairv));
    x = cplx(pairv[0], pairv[1]);
  }
  if (!in) throw Error(ErrorCode::IoError, "truncated field data in " + path);
  return GridField(grid, rank, std::string(reality) == "real" ? Reality::Real : Reality::Complex, std::move(c));
}

}  // namespace kornlab
