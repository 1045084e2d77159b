#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "pointproc/events.hpp"

namespace pointproc {

// One recurrent gate: preactivation = W * embed(k) + U * h(t) + d.
struct GateBlock {
  Eigen::MatrixXd W;  // D x D, applied to the input embedding
  Eigen::MatrixXd U;  // D x D, applied to the decayed hidden state
  Eigen::VectorXd d;  // D bias
};

// Continuous-time LSTM intensity model.  Between events the cell memory
// relaxes exponentially from c_start toward c_target at per-dimension
// rates `decay`; the hidden state is read out through the output gate and
// projected to per-type intensities by a scaled softplus.
struct CtlstmParams {
  int num_types = 0;  // K
  int hidden = 0;     // D

  Eigen::MatrixXd embed;  // (K + 1) x D, row 0 is the BOS marker
  GateBlock gi, gf, gz, go;      // input, forget, candidate, output
  GateBlock gibar, gfbar;        // input / forget for the decay target
  GateBlock gd;                  // decay-rate gate, through a scaled softplus
  Eigen::MatrixXd w;      // K x D intensity readout
  Eigen::VectorXd s;      // K softplus scales, > 0
  double decay_scale = 1.0;  // scale of the softplus producing decay rates, > 0
};

// Interval state established by consuming an event at t_anchor.
struct CellState {
  Eigen::VectorXd c_start;   // cell memory at the anchor
  Eigen::VectorXd c_target;  // value the memory relaxes toward
  Eigen::VectorXd decay;     // relaxation rates, > 0
  Eigen::VectorXd out_gate;  // output gate held fixed over the interval
  double t_anchor = 0.0;
};

struct DecayedState {
  Eigen::VectorXd c;  // cell memory at query time
  Eigen::VectorXd h;  // hidden state at query time
};

// Gate values cached by the forward pass so the backward pass can reuse
// them; z holds the candidate value in (-1, 1), a_d the raw decay
// preactivation.
struct GateActivations {
  Eigen::VectorXd gi, gf, z, go, gibar, gfbar, a_d;
};

void validate_params(const CtlstmParams& p);

// Trainable scalar count (K + 1) D + 7 (2 D^2 + D) + K D + K.  The global
// decay_scale is reported separately by param_dim.
[[nodiscard]] std::int64_t ctlstm_param_count(std::int64_t num_types,
                                              std::int64_t hidden);

[[nodiscard]] CtlstmParams make_zero_ctlstm(int num_types, int hidden);

// State after reading the BOS marker (type 0 at time 0) from zeroed
// memory.
[[nodiscard]] CellState init_state(const CtlstmParams& p,
                                   GateActivations* save = nullptr);

// Pre: t >= state.t_anchor.  At t == t_anchor this returns c_start exactly.
[[nodiscard]] DecayedState decay_state(const CtlstmParams& p,
                                       const CellState& state, double t);

// Consume event of type k (0 allowed only for BOS) at time t > t_anchor.
[[nodiscard]] CellState update_state(const CtlstmParams& p,
                                     const CellState& state, int k, double t,
                                     GateActivations* save = nullptr);

// Gate pass on already-decayed values; update_state is decay_state
// followed by this.  c_target_prev is the previous state's target.
[[nodiscard]] CellState update_from_decayed(const CtlstmParams& p,
                                            const DecayedState& decayed,
                                            const Eigen::VectorXd& c_target_prev,
                                            int k, double t,
                                            GateActivations* save = nullptr);

[[nodiscard]] Eigen::VectorXd intensity_from_hidden(const CtlstmParams& p,
                                                    const Eigen::VectorXd& h);
[[nodiscard]] Eigen::VectorXd intensity(const CtlstmParams& p,
                                        const CellState& state, double t);

// Per-type bound on lambda_k over (t_anchor, infinity): each summand
// w(k,d) * o_d * squash(c_d(t)) is monotone in c_d, and c_d moves
// monotonically between c_start and c_target, so the endpoint maximum
// dominates.
[[nodiscard]] Eigen::VectorXd upper_bound(const CtlstmParams& p,
                                          const CellState& state);

// Flat parameter vector: embed row-major, the seven gates in order
// (i, f, z, o, ibar, fbar, d) each as W, U, d row-major, then w row-major,
// s, decay_scale.  Length is ctlstm_param_count(K, D) + 1.
[[nodiscard]] Eigen::VectorXd get_params(const CtlstmParams& p);
void set_params(CtlstmParams& p, const Eigen::VectorXd& v);

}  // namespace pointproc
