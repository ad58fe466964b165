#pragma once
#include "hz/coding.hpp"

namespace hz {

// s-independent collocation data for the discretized transfer operator.
// Nodes are Chebyshev-Lobatto points on each tube spine (the boundary arc,
// extended by the tube half-width h*w_j at both ends); one edge per admissible
// inverse-branch word of length `step`.
struct TransferScheme {
  const MarkovCoding* coding = nullptr;
  const LinearRep* rep = nullptr;  // null = trivial one-dimensional
  double h = 0.0;
  int N = 0;
  int step = 1;
  int k = 0, dim = 1;
  std::vector<double> theta;   // k*N node angles
  std::vector<double> span;    // per-arc half-span of the node interval
  struct Edge {
    int target = 0;            // tube the operator output lives on
    int source = 0;            // tube whose values are read (first word letter)
    Moebius g;                 // composed inverse branch
    Eigen::MatrixXcd rho_inv;  // rho^{-1}(g)
    std::vector<double> logw;  // per node: log [g'](z), real at spine nodes
    std::vector<double> lag;   // per node: N cardinal values at the image point
  };
  std::vector<Edge> edges;
  std::uint64_t coding_hash = 0, rep_hash = 0;
};

struct TransferMatrix {
  cplx s;
  double h = 0.0;
  int order = 0;  // polynomial degree count N per interval
  int step = 1;
  int k = 0, dim = 1;
  Eigen::MatrixXcd blocks;  // (k*N*dim) x (k*N*dim) discretization of L^step
  std::uint64_t coding_hash = 0, rep_hash = 0;
};

// analytic continuation of |g'| off the unit circle; positive on S^1
cplx analytic_derivative(const Moebius& g, cplx z);

std::uint64_t rep_hash_of(const LinearRep* rep);

TransferScheme make_transfer_scheme(const MarkovCoding& coding, const LinearRep* rep,
                                    double h, int N);

// weights [g']^s via the principal log; throws BranchCutCrossed if any node
// leaves the principal branch, ValidityExceeded if h > 1/(1+|Im s|)
TransferMatrix assemble_transfer(const TransferScheme& scheme, cplx s);

TransferMatrix discretize_transfer(const MarkovCoding& coding, const LinearRep* rep, cplx s,
                                   double h, int N);

// det(I - M) with overflow-safe accumulation
cplx det_id_minus(const TransferMatrix& tm);

// dominant eigenvalue modulus of the discretized operator (Arnoldi)
double leading_eigenvalue(const TransferMatrix& tm, int krylov = 48);

}  // namespace hz
