#pragma once
// Tangent spaces of the cross ratio equations: kernel assemblers in the
// cr and z pictures, deformation fields, harmonic functions with conjugates,
// and the Dirichlet energy of a torus pattern.

#include <Eigen/Dense>

#include "crpat/develop.h"

namespace crpat {

// Linearization of the closing conditions in the multiplicative cr picture.
// Real version: one column per edge, rows per vertex are the slot count row
// and the real and imaginary parts of the weighted product row.
Eigen::MatrixXd assemble_cr_form_real(const Surface& S, const CrossRatioSystem& X);
Eigen::MatrixXcd assemble_cr_form_complex(const Surface& S, const CrossRatioSystem& X);

// Linearization in the position picture at one chosen lift per vertex: the
// slot count row and 1 / (z_neighbor - z_vertex) rows. Needs every neighbor
// lift of the base word present.
Eigen::MatrixXd assemble_z_form(const Surface& S, const DevelopingMap& dev,
                                DeckWord base = {0, 0});

struct KernelReal {
    Eigen::MatrixXd basis;  // columns span the kernel
    std::vector<double> svals;
    int dim = 0;
    double gap = 0.0;  // smallest kept singular value over largest dropped
};
struct KernelComplex {
    Eigen::MatrixXcd basis;
    std::vector<double> svals;
    int dim = 0;
    double gap = 0.0;
};

KernelReal kernel_real(const Eigen::MatrixXd& M, double rel_threshold = 1e-8);
KernelComplex kernel_complex(const Eigen::MatrixXcd& M, double rel_threshold = 1e-8);

// Angles of a triangle from its corner positions, positive for
// counterclockwise triples; angles[t] sits at corner t.
std::array<double, 3> face_angles(const std::array<Complex, 3>& z);

// Cotangent weight of an edge from the laid out pattern: the sum of the
// cotangents at the two corners opposite the edge.
double cotan_weight(const Surface& S, const DevelopingMap& dev, int e);

// Infinitesimal vertex motion induced by a kernel vector q: positions of the
// seed face are frozen and the motion of every other lift follows from
// d/dt log cr = q across each crossed edge.
struct DeformationField {
    std::unordered_map<Lift, Complex, LiftHash> zdot;
    double max_conflict = 0.0;
};
DeformationField hqd_to_deformation(const Surface& S, const DevelopingMap& dev,
                                    const Eigen::VectorXd& q, double tol = 1e-6);

// The harmonic function of a deformation, its conjugate on faces, and the
// periods along the two deck generators.
struct HarmonicFunction {
    std::unordered_map<Lift, double, LiftHash> u;
    std::unordered_map<Lift, double, LiftHash> ustar;  // face lifts, v holds face id
    std::array<Complex, 2> period{Complex(0.0), Complex(0.0)};
    bool periods_constant = true;
    double period_spread = 0.0;
    double ustar_closure = 0.0;
    double face_spread = 0.0;  // disagreement of u between incident faces
};

HarmonicFunction deformation_to_harmonic(const Surface& S, const DevelopingMap& dev,
                                         const DeformationField& def,
                                         const HolonomyClassification& cls,
                                         double period_tol = 1e-6);

// Dirichlet energy over the base edges, half the weighted sum of squared
// differences. Throws when the periods are not constant.
double dirichlet_energy(const Surface& S, const DevelopingMap& dev,
                        const HarmonicFunction& hf);

// The same energy through the conjugate pairing, half the sum over edges of
// the conjugate jump times the primal difference.
double dirichlet_energy_conjugate(const Surface& S, const DevelopingMap& dev,
                                  const HarmonicFunction& hf);

}  // namespace crpat
