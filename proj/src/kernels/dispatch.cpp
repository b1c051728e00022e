#include <atomic>

#include "contnet/error.hpp"
#include "contnet/kernels.hpp"

namespace contnet::kernels {

namespace {

Isa detect() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Isa::kAvx2;
#endif
  return Isa::kScalar;
}

std::atomic<Isa>& selected() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

void check_size(std::size_t a, std::size_t b) {
  if (a != b) throw ParameterError("kernel operands differ in length");
}

}  // namespace

bool isa_available(Isa isa) {
  if (isa == Isa::kScalar) return true;
  return detect() == Isa::kAvx2;
}

Isa active_isa() { return selected().load(std::memory_order_relaxed); }

const char* isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

void force_isa(Isa isa) {
  if (!isa_available(isa)) throw ParameterError(std::string("ISA not available: ") + isa_name(isa));
  selected().store(isa, std::memory_order_relaxed);
}

void reset_isa() { selected().store(detect(), std::memory_order_relaxed); }

double dot(std::span<const double> a, std::span<const double> b) {
  check_size(a.size(), b.size());
  return active_isa() == Isa::kAvx2 ? avx2::dot(a.data(), b.data(), a.size())
                                    : scalar::dot(a.data(), b.data(), a.size());
}

double dot3(std::span<const double> a, std::span<const double> b, std::span<const double> c) {
  check_size(a.size(), b.size());
  check_size(a.size(), c.size());
  return active_isa() == Isa::kAvx2 ? avx2::dot3(a.data(), b.data(), c.data(), a.size())
                                    : scalar::dot3(a.data(), b.data(), c.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_size(x.size(), y.size());
  if (active_isa() == Isa::kAvx2)
    avx2::axpy(alpha, x.data(), y.data(), x.size());
  else
    scalar::axpy(alpha, x.data(), y.data(), x.size());
}

void xpby(std::span<const double> x, double beta, std::span<double> y) {
  check_size(x.size(), y.size());
  if (active_isa() == Isa::kAvx2)
    avx2::xpby(x.data(), beta, y.data(), x.size());
  else
    scalar::xpby(x.data(), beta, y.data(), x.size());
}

void stencil_apply(const Stencil5& op, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<std::size_t>(op.nx) * static_cast<std::size_t>(op.ny);
  check_size(x.size(), n);
  check_size(y.size(), n);
  for (const auto* v : {&op.diag, &op.west, &op.east, &op.north, &op.south}) check_size(v->size(), n);
  if (active_isa() == Isa::kAvx2)
    avx2::stencil_apply(op, x.data(), y.data());
  else
    scalar::stencil_apply(op, x.data(), y.data());
}

void divergence(int nx, int ny, double h1, double h2, std::span<const double> t1,
                std::span<const double> t2, std::span<double> out) {
  check_size(t1.size(), static_cast<std::size_t>((nx - 1) * ny));
  check_size(t2.size(), static_cast<std::size_t>(nx * (ny - 1)));
  check_size(out.size(), static_cast<std::size_t>(nx * ny));
  if (active_isa() == Isa::kAvx2)
    avx2::divergence(nx, ny, h1, h2, t1.data(), t2.data(), out.data());
  else
    scalar::divergence(nx, ny, h1, h2, t1.data(), t2.data(), out.data());
}

}  // namespace contnet::kernels
