#pragma once

#include <vector>

#include "pdcert/lfr.hpp"
#include "pdcert/problem.hpp"

namespace pdcert {

/// Row index lists selecting the lifted gradient channels (Yf = Y1,Y2 and
/// Uf = U1,U2) and the lifted constraint channels (YA = Y3,Y4 and
/// UA = U3,U4) out of the 8*ell lifted outputs.
struct ChannelSelectors {
  int ell = 1;
  std::vector<int> Yf_rows;  // 2*ell rows
  std::vector<int> YA_rows;  // 2*ell rows
  std::vector<int> Uf_rows;  // 2*ell rows
  std::vector<int> UA_rows;  // 2*ell rows
};

/// State-space realization of the lifted system: state dimension
/// n = 3 + 4*(ell-1), 4 inputs, 8*ell outputs ordered as blocks
/// (Y1,Y2,Y3,Y4,U1,U2,U3,U4), each block newest lag first.
///
/// The state is (xi_{k-ell+1}, u_{k-1}, ..., u_{k-ell+1}): the oldest plant
/// state in the window plus the ell-1 stored inputs. Intermediate plant
/// states are reconstructed by forward propagation, so the realization may
/// be non-minimal; that only enlarges the Lyapunov matrix.
struct LiftedSystem {
  int ell = 1;
  int n = 3;   // state dimension
  Matrix A;    // n x n
  Matrix B;    // n x 4
  Matrix C;    // 8*ell x n
  Matrix D;    // 8*ell x 4
};

ChannelSelectors channel_selectors(const LiftingConfig& cfg);

LiftedSystem lift_realization(const StateSpace& ss, const LiftingConfig& cfg);

/// Impulse-response coefficients of the lifted realization: element k is the
/// 8*ell x 4 map from an impulse at time 0 to the lifted output at time k.
std::vector<Matrix> impulse_response(const LiftedSystem& sys, int count);

/// Independent oracle for the same coefficients: simulates the unlifted
/// realization in the time domain and applies the lagged stacking directly,
/// without ever forming the lifted realization.
std::vector<Matrix> markov_oracle(const StateSpace& ss, const LiftingConfig& cfg, int count);

/// Rows of [C D] for the given channels, as a (rows x (n+4)) matrix.
Matrix selected_rows(const LiftedSystem& sys, const std::vector<int>& rows);

/// Optional post-pass: removes unreachable and unobservable state directions
/// (orthogonal staircase truncation at the given rank tolerance). Off by
/// default everywhere; the stacked-input realization is already minimal for
/// nondegenerate step sizes, and certification does not require minimality.
LiftedSystem reduce_realization(const LiftedSystem& sys, double tol = 1e-10);

}  // namespace pdcert
