#ifndef EQPROX_CONSTANTS_HPP
#define EQPROX_CONSTANTS_HPP

// Central tolerance table. Runtime checks and the test suites read from here
// so both sides agree on every threshold.

namespace eqprox::tol {

inline constexpr double diagonal = 1e-12;            // |f(x,x)| at construction
inline constexpr double membership = 1e-12;          // "zero" membership residual
inline constexpr double affine_consistency = 1e-10;  // least-squares residual of Ax=b
inline constexpr double affine_base = 1e-8;          // prox base point on an affine C
inline constexpr double identity = 1e-9;             // relative-absolute, algebraic identities
inline constexpr double closed_form = 1e-10;
inline constexpr double grid_refine = 1e-8;
inline constexpr double tie = 1e-12;                 // grid ties resolve to the smallest abscissa
inline constexpr double relaxation = 1e-12;
inline constexpr double lemma1 = 1e-8;
inline constexpr double fejer = 1e-8;
inline constexpr double lyapunov = 1e-10;

inline constexpr int diagonal_samples = 16;
inline constexpr int default_coarse_n = 512;
inline constexpr int min_coarse_n = 64;
inline constexpr double default_refine_tol = 1e-12;
inline constexpr int default_max_iter = 10000;

}  // namespace eqprox::tol

#endif  // EQPROX_CONSTANTS_HPP
