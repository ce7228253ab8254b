#pragma once
// Gauss-Newton solvers for the two parameter family of Delaunay cross ratio
// systems over an angle structure, on tori and on the sphere, plus the grid
// scan over the parameter plane and the rigidity probe.

#include <Eigen/Dense>

#include "crpat/hqd.h"

namespace crpat {

struct SolveOptions {
    int max_iter = 80;
    double tol = 1e-12;       // residual sup norm target
    double fd_eps = 1e-7;     // forward difference step for the Jacobian
    int max_backtrack = 40;
    bool validate_cycles = true;  // run the dual cycle check on the angles
    Eigen::VectorXd x0;           // warm start for the edge log moduli
};

// A solved member of the family: log moduli X with cr = exp(X + i theta),
// the layout over the words [-1, 2]^2, holonomy and modulus.
struct AffineFamilyPoint {
    Eigen::VectorXd X;
    CrossRatioSystem cr;
    double A1 = 0.0, A2 = 0.0;
    DevelopingMap dev;
    HolonomyMaps hol;
    HolonomyClassification cls;
    ModulusReport modulus;
    int iterations = 0;
    double residual = 0.0;
};

AffineFamilyPoint solve_pattern(const Surface& S, const AngleStructure& Th, double A1,
                                double A2, const SolveOptions& opt = {});

struct SphereSolveResult {
    Eigen::VectorXd X;
    CrossRatioSystem cr;
    int iterations = 0;
    double residual = 0.0;
};

SphereSolveResult solve_sphere_pattern(const Surface& S, const AngleStructure& Th,
                                       const SolveOptions& opt = {});

// Solves the whole parameter grid [-range, range]^2 in rings from the
// center, warm starting each point from its nearest solved neighbor.
struct ScanResult {
    int n = 0;
    double range = 0.0;
    std::vector<double> A1, A2;      // flattened row major, index i * n + j
    std::vector<Complex> tau;
    std::vector<Eigen::VectorXd> X;
    std::vector<double> jac_det;     // finite difference det d tau / d A
    std::vector<std::pair<int, int>> extra_duplicates;  // tau collisions not at A, -A
    double min_nonzero_det = 0.0;
};

ScanResult covering_scan(const Surface& S, const AngleStructure& Th, int n, double range,
                         const SolveOptions& opt = {});

// Repeats a solve from random initial points and compares the outcomes: the
// cr values and the circumradius ratio field must agree across runs.
struct RigidityReport {
    int trials = 0;
    double max_cr_deviation = 0.0;
    double max_radius_ratio_deviation = 0.0;
    std::vector<double> residuals;
    bool consistent = false;
};

RigidityReport rigidity_check(const Surface& S, const AngleStructure& Th, double A1,
                              double A2, int trials, unsigned seed = 20260822,
                              const SolveOptions& opt = {});

}  // namespace crpat
