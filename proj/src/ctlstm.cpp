#include "pointproc/ctlstm.hpp"

#include <cmath>

#include "pointproc/transfer.hpp"

namespace pointproc {

namespace {

inline double decay_factor(double rate, double dt) {
  const double a = rate * dt;
  return a > 700.0 ? 0.0 : std::exp(-a);
}

inline Eigen::VectorXd sigmoid_vec(const Eigen::VectorXd& a) {
  return a.unaryExpr([](double x) { return sigmoid(x); });
}

void check_gate(const GateBlock& g, int D, const char* name) {
  if (g.W.rows() != D || g.W.cols() != D || g.U.rows() != D ||
      g.U.cols() != D || g.d.size() != D) {
    throw ValidationError(std::string("gate ") + name + " has wrong shape");
  }
  if (!g.W.allFinite() || !g.U.allFinite() || !g.d.allFinite()) {
    throw ValidationError(std::string("gate ") + name + " has non-finite entries");
  }
}

// Shared core of init_state and update_state: run the gates on embedding
// row k against the decayed memory and hidden state.
CellState compute_update(const CtlstmParams& p, const Eigen::VectorXd& c_prev,
                         const Eigen::VectorXd& c_target_prev,
                         const Eigen::VectorXd& h_prev, int k, double t,
                         GateActivations* save) {
  const Eigen::VectorXd e = p.embed.row(k).transpose();

  const Eigen::VectorXd gi = sigmoid_vec(p.gi.W * e + p.gi.U * h_prev + p.gi.d);
  const Eigen::VectorXd gf = sigmoid_vec(p.gf.W * e + p.gf.U * h_prev + p.gf.d);
  const Eigen::VectorXd z =
      (2.0 * sigmoid_vec(p.gz.W * e + p.gz.U * h_prev + p.gz.d)).array() - 1.0;
  const Eigen::VectorXd go = sigmoid_vec(p.go.W * e + p.go.U * h_prev + p.go.d);
  const Eigen::VectorXd gibar =
      sigmoid_vec(p.gibar.W * e + p.gibar.U * h_prev + p.gibar.d);
  const Eigen::VectorXd gfbar =
      sigmoid_vec(p.gfbar.W * e + p.gfbar.U * h_prev + p.gfbar.d);
  const Eigen::VectorXd a_d = p.gd.W * e + p.gd.U * h_prev + p.gd.d;

  CellState next;
  next.c_start = gf.cwiseProduct(c_prev) + gi.cwiseProduct(z);
  next.c_target = gfbar.cwiseProduct(c_target_prev) + gibar.cwiseProduct(z);
  next.decay = a_d.unaryExpr(
      [&p](double x) { return softplus_scaled(x, p.decay_scale); });
  next.out_gate = go;
  next.t_anchor = t;

  if (save != nullptr) {
    save->gi = gi;
    save->gf = gf;
    save->z = z;
    save->go = go;
    save->gibar = gibar;
    save->gfbar = gfbar;
    save->a_d = a_d;
  }
  return next;
}

}  // namespace

void validate_params(const CtlstmParams& p) {
  const int K = p.num_types;
  const int D = p.hidden;
  if (K < 1 || D < 1) {
    throw ValidationError("nsmmpp needs K >= 1 and D >= 1");
  }
  if (p.embed.rows() != K + 1 || p.embed.cols() != D) {
    throw ValidationError("embedding must be (K + 1) x D");
  }
  check_gate(p.gi, D, "i");
  check_gate(p.gf, D, "f");
  check_gate(p.gz, D, "z");
  check_gate(p.go, D, "o");
  check_gate(p.gibar, D, "ibar");
  check_gate(p.gfbar, D, "fbar");
  check_gate(p.gd, D, "d");
  if (p.w.rows() != K || p.w.cols() != D) {
    throw ValidationError("readout w must be K x D");
  }
  if (!p.embed.allFinite() || !p.w.allFinite()) {
    throw ValidationError("weights must be finite");
  }
  if (p.s.size() != K || !p.s.allFinite() || (p.s.array() <= 0.0).any()) {
    throw ValidationError("softplus scales must be positive");
  }
  if (!std::isfinite(p.decay_scale) || p.decay_scale <= 0.0) {
    throw ValidationError("decay_scale must be positive");
  }
}

std::int64_t ctlstm_param_count(std::int64_t K, std::int64_t D) {
  return (K + 1) * D + 7 * (2 * D * D + D) + K * D + K;
}

CtlstmParams make_zero_ctlstm(int num_types, int hidden) {
  CtlstmParams p;
  p.num_types = num_types;
  p.hidden = hidden;
  p.embed = Eigen::MatrixXd::Zero(num_types + 1, hidden);
  for (GateBlock* g : {&p.gi, &p.gf, &p.gz, &p.go, &p.gibar, &p.gfbar, &p.gd}) {
    g->W = Eigen::MatrixXd::Zero(hidden, hidden);
    g->U = Eigen::MatrixXd::Zero(hidden, hidden);
    g->d = Eigen::VectorXd::Zero(hidden);
  }
  p.w = Eigen::MatrixXd::Zero(num_types, hidden);
  p.s = Eigen::VectorXd::Ones(num_types);
  p.decay_scale = 1.0;
  return p;
}

CellState init_state(const CtlstmParams& p, GateActivations* save) {
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(p.hidden);
  return compute_update(p, zero, zero, zero, 0, 0.0, save);
}

DecayedState decay_state(const CtlstmParams& p, const CellState& state,
                         double t) {
  const double dt = t - state.t_anchor;
  if (dt < 0.0) {
    throw ValidationError("decay query before the state anchor");
  }
  DecayedState d;
  const int D = p.hidden;
  d.c.resize(D);
  d.h.resize(D);
  for (int i = 0; i < D; ++i) {
    const double e = decay_factor(state.decay[i], dt);
    d.c[i] = state.c_target[i] + (state.c_start[i] - state.c_target[i]) * e;
    d.h[i] = state.out_gate[i] * squash(d.c[i]);
  }
  return d;
}

CellState update_state(const CtlstmParams& p, const CellState& state, int k,
                       double t, GateActivations* save) {
  if (k < 0 || k > p.num_types) {
    throw ValidationError("event type out of range for update");
  }
  if (t <= state.t_anchor) {
    throw ValidationError("events must advance strictly in time");
  }
  const DecayedState dec = decay_state(p, state, t);
  return compute_update(p, dec.c, state.c_target, dec.h, k, t, save);
}

CellState update_from_decayed(const CtlstmParams& p, const DecayedState& decayed,
                              const Eigen::VectorXd& c_target_prev, int k,
                              double t, GateActivations* save) {
  return compute_update(p, decayed.c, c_target_prev, decayed.h, k, t, save);
}

Eigen::VectorXd intensity_from_hidden(const CtlstmParams& p,
                                      const Eigen::VectorXd& h) {
  Eigen::VectorXd lambda = p.w * h;
  for (int k = 0; k < lambda.size(); ++k) {
    lambda[k] = softplus_scaled(lambda[k], p.s[k]);
  }
  return lambda;
}

Eigen::VectorXd intensity(const CtlstmParams& p, const CellState& state,
                          double t) {
  return intensity_from_hidden(p, decay_state(p, state, t).h);
}

Eigen::VectorXd upper_bound(const CtlstmParams& p, const CellState& state) {
  const int K = p.num_types;
  const int D = p.hidden;
  Eigen::VectorXd bound(K);
  for (int k = 0; k < K; ++k) {
    double acc = 0.0;
    for (int d = 0; d < D; ++d) {
      const double wo = p.w(k, d) * state.out_gate[d];
      acc += std::max(wo * squash(state.c_start[d]),
                      wo * squash(state.c_target[d]));
    }
    bound[k] = softplus_scaled(acc, p.s[k]);
  }
  return bound;
}

namespace {

void pack_block(Eigen::VectorXd& out, std::int64_t& at,
                const Eigen::MatrixXd& m) {
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out[at++] = m(r, c);
}

void unpack_block(const Eigen::VectorXd& in, std::int64_t& at,
                  Eigen::MatrixXd& m) {
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) m(r, c) = in[at++];
}

}  // namespace

Eigen::VectorXd get_params(const CtlstmParams& p) {
  Eigen::VectorXd v(ctlstm_param_count(p.num_types, p.hidden) + 1);
  std::int64_t at = 0;
  pack_block(v, at, p.embed);
  for (const GateBlock* g :
       {&p.gi, &p.gf, &p.gz, &p.go, &p.gibar, &p.gfbar, &p.gd}) {
    pack_block(v, at, g->W);
    pack_block(v, at, g->U);
    v.segment(at, g->d.size()) = g->d;
    at += g->d.size();
  }
  pack_block(v, at, p.w);
  v.segment(at, p.s.size()) = p.s;
  at += p.s.size();
  v[at++] = p.decay_scale;
  return v;
}

void set_params(CtlstmParams& p, const Eigen::VectorXd& v) {
  if (v.size() != ctlstm_param_count(p.num_types, p.hidden) + 1) {
    throw ValidationError("nsmmpp parameter vector has the wrong length");
  }
  std::int64_t at = 0;
  unpack_block(v, at, p.embed);
  for (GateBlock* g : {&p.gi, &p.gf, &p.gz, &p.go, &p.gibar, &p.gfbar, &p.gd}) {
    unpack_block(v, at, g->W);
    unpack_block(v, at, g->U);
    g->d = v.segment(at, g->d.size());
    at += g->d.size();
  }
  unpack_block(v, at, p.w);
  p.s = v.segment(at, p.s.size());
  at += p.s.size();
  p.decay_scale = v[at++];
}

}  // namespace pointproc
