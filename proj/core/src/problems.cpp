#include "riemopt/problems.hpp"

#include <nlohmann/json.hpp>

#include "riemopt/error.hpp"
#include "riemopt/random.hpp"

namespace riemopt {

namespace {

Manifold manifold_for(ProblemKind kind, const ProblemDims& dims) {
  return kind == ProblemKind::Rayleigh ? Manifold::sphere(dims.n) : Manifold::oblique(dims.n, dims.p);
}

void require_kind(const ProblemInstance& inst, ProblemKind kind, const char* what) {
  if (inst.kind() != kind) {
    throw Error(ErrorKind::ContractViolation, std::string(what) + ": wrong problem kind");
  }
}

void require_point(const ProblemInstance& inst, const Point& x, const char* what) {
  if (!(x.manifold() == inst.manifold())) {
    throw Error(ErrorKind::ContractViolation,
                std::string(what) + ": dimension mismatch, expected " + inst.manifold().name() + ", got " +
                    x.manifold().name());
  }
}

void validate_dims(ProblemKind kind, const ProblemDims& dims) {
  if (dims.n < 1 || dims.p < 1 || dims.count < 1) {
    throw Error(ErrorKind::ContractViolation, "problem dimensions must be positive");
  }
  if (kind == ProblemKind::Rayleigh && (dims.p != 1 || dims.count != 1)) {
    throw Error(ErrorKind::ContractViolation, "Rayleigh problem takes a single n-vector and one matrix");
  }
}

// E = M - ddiag(M)
Matrix off_diagonal(Matrix m) {
  m.diagonal().setZero();
  return m;
}

}  // namespace

std::string to_string(ProblemKind kind) { return kind == ProblemKind::Rayleigh ? "rayleigh" : "offdiag"; }

ProblemKind problem_kind_from_string(const std::string& name) {
  if (name == "rayleigh") return ProblemKind::Rayleigh;
  if (name == "offdiag" || name == "off_diagonal" || name == "offdiagonal") return ProblemKind::OffDiagonal;
  throw Error(ErrorKind::InvalidConfig, "unknown problem kind '" + name + "'");
}

void to_json(nlohmann::json& j, const InstanceDescriptor& d) {
  j = nlohmann::json{{"kind", to_string(d.kind)}, {"seed", d.seed}};
  if (d.kind == ProblemKind::Rayleigh) {
    j["dims"] = {{"n", d.dims.n}};
  } else {
    j["dims"] = {{"n", d.dims.n}, {"p", d.dims.p}, {"N", d.dims.count}};
  }
}

void from_json(const nlohmann::json& j, InstanceDescriptor& d) {
  d.kind = problem_kind_from_string(j.at("kind").get<std::string>());
  const auto& dims = j.at("dims");
  d.dims = ProblemDims{};
  d.dims.n = dims.at("n").get<Index>();
  if (d.kind == ProblemKind::OffDiagonal) {
    d.dims.p = dims.at("p").get<Index>();
    d.dims.count = dims.at("N").get<Index>();
  }
  d.seed = j.at("seed").get<std::uint64_t>();
}

ProblemInstance::ProblemInstance(ProblemKind kind, ProblemDims dims, std::uint64_t seed,
                                 std::vector<Matrix> matrices, Manifold manifold, Point x0)
    : kind_(kind),
      dims_(dims),
      seed_(seed),
      matrices_(std::move(matrices)),
      manifold_(manifold),
      x0_(std::move(x0)) {}

ProblemInstance ProblemInstance::from_matrices(ProblemKind kind, std::vector<Matrix> matrices, Index p) {
  if (matrices.empty()) throw Error(ErrorKind::ContractViolation, "at least one matrix is required");
  const Index n = matrices.front().rows();
  for (const auto& m : matrices) {
    if (m.rows() != n || m.cols() != n) throw Error(ErrorKind::ContractViolation, "matrices must be n x n");
    if (!(m - m.transpose()).isZero(1e-14)) throw Error(ErrorKind::ContractViolation, "matrices must be symmetric");
  }
  ProblemDims dims{n, p, static_cast<Index>(matrices.size())};
  validate_dims(kind, dims);
  const Manifold manifold = manifold_for(kind, dims);
  Point x0 = Point::normalized(manifold, Matrix::Ones(manifold.rows(), manifold.cols()));
  return ProblemInstance(kind, dims, 0, std::move(matrices), manifold, std::move(x0));
}

double ProblemInstance::cost(const Point& x) const {
  return kind_ == ProblemKind::Rayleigh ? rayleigh_cost(*this, x) : offdiag_cost(*this, x);
}

Tangent ProblemInstance::gradient(const Point& x) const {
  return kind_ == ProblemKind::Rayleigh ? rayleigh_grad(*this, x) : offdiag_grad(*this, x);
}

double rayleigh_cost(const ProblemInstance& inst, const Point& x) {
  require_kind(inst, ProblemKind::Rayleigh, "rayleigh_cost");
  require_point(inst, x, "rayleigh_cost");
  const auto v = x.ambient().col(0);
  return v.dot(inst.matrices().front() * v);
}

Tangent rayleigh_grad(const ProblemInstance& inst, const Point& x) {
  require_kind(inst, ProblemKind::Rayleigh, "rayleigh_grad");
  require_point(inst, x, "rayleigh_grad");
  const Matrix ax = inst.matrices().front() * x.ambient();
  // Projection of the Euclidean gradient 2 A x.
  return project_tangent(x, 2.0 * ax);
}

double offdiag_cost(const ProblemInstance& inst, const Point& x) {
  require_kind(inst, ProblemKind::OffDiagonal, "offdiag_cost");
  require_point(inst, x, "offdiag_cost");
  const Matrix& xa = x.ambient();
  double total = 0.0;
  for (const auto& c : inst.matrices()) {
    total += off_diagonal(xa.transpose() * c * xa).squaredNorm();
  }
  return total;
}

Tangent offdiag_grad(const ProblemInstance& inst, const Point& x) {
  require_kind(inst, ProblemKind::OffDiagonal, "offdiag_grad");
  require_point(inst, x, "offdiag_grad");
  const Matrix& xa = x.ambient();
  Matrix euclidean = Matrix::Zero(xa.rows(), xa.cols());
  for (const auto& c : inst.matrices()) {
    const Matrix cx = c * xa;
    euclidean += cx * off_diagonal(xa.transpose() * cx);
  }
  return project_tangent(x, 4.0 * euclidean);
}

ProblemInstance gen_instance(ProblemKind kind, const ProblemDims& dims, std::uint64_t seed) {
  validate_dims(kind, dims);
  NormalStream stream(seed);
  std::vector<Matrix> matrices;
  matrices.reserve(static_cast<std::size_t>(dims.count));
  for (Index k = 0; k < dims.count; ++k) {
    Matrix b(dims.n, dims.n);
    for (Index i = 0; i < dims.n; ++i) {
      for (Index j = 0; j < dims.n; ++j) b(i, j) = stream.next();
    }
    Matrix a(dims.n, dims.n);
    for (Index i = 0; i < dims.n; ++i) {
      for (Index j = i; j < dims.n; ++j) {
        a(i, j) = a(j, i) = 0.5 * (b(i, j) + b(j, i));
      }
    }
    matrices.push_back(std::move(a));
  }

  const Manifold manifold = manifold_for(kind, dims);
  Matrix start(manifold.rows(), manifold.cols());
  for (Index j = 0; j < start.cols(); ++j) {
    for (Index i = 0; i < start.rows(); ++i) start(i, j) = stream.next();
  }
  return ProblemInstance(kind, dims, seed, std::move(matrices), manifold,
                         Point::normalized(manifold, std::move(start)));
}

ProblemInstance gen_instance(const InstanceDescriptor& descriptor) {
  return gen_instance(descriptor.kind, descriptor.dims, descriptor.seed);
}

ProblemDims default_dims(ProblemKind kind) {
  if (kind == ProblemKind::Rayleigh) return ProblemDims{100, 1, 1};
  return ProblemDims{10, 5, 5};
}

}  // namespace riemopt
