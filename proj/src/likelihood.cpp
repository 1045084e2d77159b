#include "pointproc/likelihood.hpp"

#include <algorithm>
#include <cmath>

#include "pointproc/parallel.hpp"
#include "pointproc/rng.hpp"
#include "pointproc/transfer.hpp"

namespace pointproc {

namespace {

inline double decay_factor(double rate, double dt) {
  const double a = rate * dt;
  return a > 700.0 ? 0.0 : std::exp(-a);
}

// Everything one evaluation needs, shared by the three model engines.
struct EvalRequest {
  const EventStream* stream = nullptr;
  double horizon = 0.0;                // effective horizon (EOS-aware)
  std::vector<double> sample_times;    // sorted ascending, within (0, horizon]
  bool want_gradient = false;
  bool integral_only = false;          // drop the event terms entirely
};

struct EvalOutput {
  std::vector<double> log_event;  // log lambda_{k_i}(t_i)
  std::vector<double> log_total;  // log lambda(t_i)
  double integral = 0.0;
  Eigen::VectorXd grad;  // d(sum log lambda - integral)/dtheta, or
                         // d(integral)/dtheta when integral_only
};

[[noreturn]] void throw_dead_intensity(int event_index, const Event& e) {
  throw NumericalError("intensity vanished at event " +
                       std::to_string(event_index) + " (type " +
                       std::to_string(e.type) + ", t=" + std::to_string(e.time) +
                       "); log-likelihood is -inf");
}

// ---------------------------------------------------------------------------
// Classical engines.  `s` is null for the linear (sempp) case.  Gradients
// of the event terms and the raw per-sample intensity derivatives are kept
// separate so the integral part can be scaled as (acc / N) * T at the end,
// matching the value estimator exactly.

struct ClassicalGrad {
  Eigen::VectorXd mu;
  Eigen::MatrixXd alpha, delta;
  Eigen::VectorXd s;

  explicit ClassicalGrad(int K, bool with_s)
      : mu(Eigen::VectorXd::Zero(K)),
        alpha(Eigen::MatrixXd::Zero(K, K)),
        delta(Eigen::MatrixXd::Zero(K, K)),
        s(with_s ? Eigen::VectorXd::Zero(K) : Eigen::VectorXd()) {}

  [[nodiscard]] Eigen::VectorXd flatten() const {
    const int K = static_cast<int>(mu.size());
    Eigen::VectorXd v(K + 2 * K * K + s.size());
    std::int64_t at = 0;
    v.head(K) = mu;
    at = K;
    for (int r = 0; r < K; ++r)
      for (int c = 0; c < K; ++c) v[at++] = alpha(r, c);
    for (int r = 0; r < K; ++r)
      for (int c = 0; c < K; ++c) v[at++] = delta(r, c);
    if (s.size() > 0) v.tail(K) = s;
    return v;
  }
};

// Accumulate d(sum_k weight_k * lambda_k(t)) / d(mu, alpha, delta, s) into
// `out` for one evaluation time, given per-type weights on the intensity.
// `kernels` caches exp(-delta(j,k) dt) per (history event, k) from the
// value pass.
void classical_point_grad(const Eigen::VectorXd& /*mu*/,
                          const Eigen::MatrixXd& alpha,
                          const Eigen::MatrixXd& /*delta*/,
                          const Eigen::VectorXd* s,
                          std::span<const Event> history, double t,
                          const Eigen::MatrixXd& kernels,
                          const Eigen::VectorXd& excit,
                          const Eigen::VectorXd& weight, ClassicalGrad& out) {
  const int K = static_cast<int>(alpha.rows());
  Eigen::VectorXd w = weight;  // weight on the pre-transfer excitation
  if (s != nullptr) {
    for (int k = 0; k < K; ++k) {
      out.s[k] += weight[k] * softplus_scaled_ds(excit[k], (*s)[k]);
      w[k] *= softplus_scaled_dx(excit[k], (*s)[k]);
    }
  }
  for (int k = 0; k < K; ++k) {
    if (w[k] != 0.0) out.mu[k] += w[k];
  }
  const int H = static_cast<int>(history.size());
  for (int h = 0; h < H; ++h) {
    const int j = history[h].type - 1;
    const double dt = t - history[h].time;
    for (int k = 0; k < K; ++k) {
      const double e = kernels(h, k);
      out.alpha(j, k) += w[k] * e;
      out.delta(j, k) -= w[k] * alpha(j, k) * dt * e;
    }
  }
}

EvalOutput eval_classical(const Eigen::VectorXd& mu,
                          const Eigen::MatrixXd& alpha,
                          const Eigen::MatrixXd& delta,
                          const Eigen::VectorXd* s, const EvalRequest& req) {
  const EventStream& stream = *req.stream;
  const int K = static_cast<int>(mu.size());
  const int I = stream.size();
  const auto N = static_cast<double>(req.sample_times.size());
  const bool with_s = s != nullptr;

  EvalOutput out;
  ClassicalGrad event_grad(K, with_s), sample_grad(K, with_s);

  // kernels(h, k) for the current evaluation point, over events before it
  Eigen::MatrixXd kernels(I, K);
  Eigen::VectorXd excit(K), lambda(K), weight(K);

  const auto eval_point = [&](double t, int n_before) {
    excit = mu;
    for (int h = 0; h < n_before; ++h) {
      const int j = stream.events[h].type - 1;
      const double dt = t - stream.events[h].time;
      for (int k = 0; k < K; ++k) {
        const double e = decay_factor(delta(j, k), dt);
        kernels(h, k) = e;
        excit[k] += alpha(j, k) * e;
      }
    }
    if (with_s) {
      for (int k = 0; k < K; ++k) lambda[k] = softplus_scaled(excit[k], (*s)[k]);
    } else {
      lambda = excit;
    }
  };

  if (!req.integral_only) {
    for (int i = 0; i < I; ++i) {
      const Event& e = stream.events[i];
      eval_point(e.time, i);
      const double lam = lambda[e.type - 1];
      if (!(lam > 0.0) || !std::isfinite(lam)) throw_dead_intensity(i, e);
      out.log_event.push_back(std::log(lam));
      out.log_total.push_back(std::log(lambda.sum()));
      if (req.want_gradient) {
        weight.setZero();
        weight[e.type - 1] = 1.0 / lam;
        classical_point_grad(mu, alpha, delta, s,
                             {stream.events.data(), static_cast<size_t>(i)},
                             e.time, kernels, excit, weight, event_grad);
      }
    }
  }

  // MC pass over the sorted sample times; n_before advances monotonically
  double lambda_sum = 0.0;
  int n_before = 0;
  for (const double t : req.sample_times) {
    while (n_before < I && stream.events[n_before].time < t) ++n_before;
    eval_point(t, n_before);
    lambda_sum += lambda.sum();
    if (req.want_gradient) {
      weight.setOnes();
      classical_point_grad(mu, alpha, delta, s,
                           {stream.events.data(), static_cast<size_t>(n_before)},
                           t, kernels, excit, weight, sample_grad);
    }
  }
  out.integral = req.horizon * (lambda_sum / N);

  if (req.want_gradient) {
    // scale as (acc / N) * T so a constant integrand stays exact
    Eigen::VectorXd mc_part = (sample_grad.flatten() / N) * req.horizon;
    if (req.integral_only) {
      out.grad = std::move(mc_part);
    } else {
      out.grad = event_grad.flatten() - mc_part;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Neural engine: forward pass caches every state and gate activation, then
// a reverse sweep pushes adjoints through the decay/update chain.

struct NeuralAdjoint {
  Eigen::VectorXd c_start, c_target, decay, out;

  explicit NeuralAdjoint(int D)
      : c_start(Eigen::VectorXd::Zero(D)),
        c_target(Eigen::VectorXd::Zero(D)),
        decay(Eigen::VectorXd::Zero(D)),
        out(Eigen::VectorXd::Zero(D)) {}
};

struct NeuralEngine {
  const CtlstmParams& p;
  const EvalRequest& req;
  const EventStream& stream;
  int I;

  std::vector<CellState> states;       // states[j] after consuming event j (0 = BOS)
  std::vector<GateActivations> acts;   // gates of update j
  std::vector<Eigen::VectorXd> h_in;   // decayed hidden consumed by update j
  std::vector<Eigen::VectorXd> c_in;   // decayed memory consumed by update j

  CtlstmParams grad;  // parameter-shaped accumulator

  NeuralEngine(const CtlstmParams& model, const EvalRequest& request)
      : p(model),
        req(request),
        stream(*request.stream),
        I(stream.size()),
        grad(make_zero_ctlstm(model.num_types, model.hidden)) {
    grad.s.setZero();
    grad.decay_scale = 0.0;
  }

  [[nodiscard]] int event_type(int j) const {
    return j == 0 ? 0 : stream.events[j - 1].type;
  }
  [[nodiscard]] double event_time(int j) const {
    return j == 0 ? 0.0 : stream.events[j - 1].time;
  }

  void forward(EvalOutput& out) {
    states.resize(I + 1);
    acts.resize(I + 1);
    h_in.resize(I + 1);
    c_in.resize(I + 1);

    h_in[0] = Eigen::VectorXd::Zero(p.hidden);
    c_in[0] = Eigen::VectorXd::Zero(p.hidden);
    states[0] = init_state(p, &acts[0]);

    for (int j = 1; j <= I; ++j) {
      const Event& e = stream.events[j - 1];
      const DecayedState dec = decay_state(p, states[j - 1], e.time);
      h_in[j] = dec.h;
      c_in[j] = dec.c;
      states[j] =
          update_from_decayed(p, dec, states[j - 1].c_target, e.type, e.time,
                              &acts[j]);
      if (!req.integral_only) {
        const Eigen::VectorXd lambda = intensity_from_hidden(p, dec.h);
        const double lam = lambda[e.type - 1];
        if (!(lam > 0.0) || !std::isfinite(lam)) throw_dead_intensity(j - 1, e);
        out.log_event.push_back(std::log(lam));
        out.log_total.push_back(std::log(lambda.sum()));
      }
    }

    double lambda_sum = 0.0;
    int j = 0;
    for (const double t : req.sample_times) {
      while (j < I && stream.events[j].time < t) ++j;
      lambda_sum += intensity(p, states[j], t).sum();
    }
    const auto N = static_cast<double>(req.sample_times.size());
    out.integral = req.horizon * (lambda_sum / N);
  }

  // Adjoint of lambda contributions at one query time: weight[k] on each
  // lambda_k.  Returns d/dh and adds the readout gradients.
  Eigen::VectorXd lambda_adjoint(const Eigen::VectorXd& h,
                                 const Eigen::VectorXd& weight) {
    Eigen::VectorXd h_bar = Eigen::VectorXd::Zero(p.hidden);
    for (int k = 0; k < p.num_types; ++k) {
      if (weight[k] == 0.0) continue;
      const double x = p.w.row(k).dot(h);
      const double coef = weight[k] * softplus_scaled_dx(x, p.s[k]);
      grad.s[k] += weight[k] * softplus_scaled_ds(x, p.s[k]);
      grad.w.row(k) += coef * h.transpose();
      h_bar += coef * p.w.row(k).transpose();
    }
    return h_bar;
  }

  // Push (c_bar, h_bar) at query time t back onto the interval state.
  void decay_adjoint(const CellState& st, double t, const Eigen::VectorXd& c_bar,
                     const Eigen::VectorXd& h_bar, NeuralAdjoint& adj) {
    const double dt = t - st.t_anchor;
    for (int d = 0; d < p.hidden; ++d) {
      const double e = decay_factor(st.decay[d], dt);
      const double c = st.c_target[d] + (st.c_start[d] - st.c_target[d]) * e;
      const double u = squash(c);
      const double cb = c_bar[d] + h_bar[d] * st.out_gate[d] * (1.0 - u * u);
      adj.out[d] += h_bar[d] * u;
      adj.c_start[d] += cb * e;
      adj.c_target[d] += cb * (1.0 - e);
      adj.decay[d] -= cb * (st.c_start[d] - st.c_target[d]) * e * dt;
    }
  }

  // Backprop through update j.  Consumes the adjoint of states[j]; emits
  // the adjoint pieces for the decayed inputs and the previous target.
  void update_adjoint(int j, const NeuralAdjoint& adj, Eigen::VectorXd& c_in_bar,
                      Eigen::VectorXd& h_in_bar, Eigen::VectorXd& ctar_prev_bar) {
    const GateActivations& a = acts[j];
    const Eigen::VectorXd e = p.embed.row(event_type(j)).transpose();
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(p.hidden);
    const Eigen::VectorXd& ctar_prev = j == 0 ? zero : states[j - 1].c_target;

    Eigen::VectorXd a_d_bar(p.hidden);
    for (int d = 0; d < p.hidden; ++d) {
      a_d_bar[d] = adj.decay[d] * softplus_scaled_dx(a.a_d[d], p.decay_scale);
      grad.decay_scale +=
          adj.decay[d] * softplus_scaled_ds(a.a_d[d], p.decay_scale);
    }
    const Eigen::VectorXd o_bar =
        adj.out.cwiseProduct(a.go.cwiseProduct(Eigen::VectorXd::Ones(p.hidden) - a.go));

    const Eigen::VectorXd gf_bar = adj.c_start.cwiseProduct(c_in[j]);
    c_in_bar = adj.c_start.cwiseProduct(a.gf);
    const Eigen::VectorXd gi_bar = adj.c_start.cwiseProduct(a.z);
    Eigen::VectorXd z_bar = adj.c_start.cwiseProduct(a.gi);

    const Eigen::VectorXd gfbar_bar = adj.c_target.cwiseProduct(ctar_prev);
    ctar_prev_bar = adj.c_target.cwiseProduct(a.gfbar);
    const Eigen::VectorXd gibar_bar = adj.c_target.cwiseProduct(a.z);
    z_bar += adj.c_target.cwiseProduct(a.gibar);

    const auto sig_back = [](const Eigen::VectorXd& g, const Eigen::VectorXd& gb) {
      return gb.cwiseProduct(g.cwiseProduct(Eigen::VectorXd::Ones(g.size()) - g));
    };
    const Eigen::VectorXd ai_bar = sig_back(a.gi, gi_bar);
    const Eigen::VectorXd af_bar = sig_back(a.gf, gf_bar);
    const Eigen::VectorXd az_bar =
        z_bar.cwiseProduct((1.0 - a.z.array().square()).matrix()) * 0.5;
    const Eigen::VectorXd aibar_bar = sig_back(a.gibar, gibar_bar);
    const Eigen::VectorXd afbar_bar = sig_back(a.gfbar, gfbar_bar);

    h_in_bar = Eigen::VectorXd::Zero(p.hidden);
    Eigen::VectorXd e_bar = Eigen::VectorXd::Zero(p.hidden);
    const auto gate_back = [&](GateBlock& g_grad, const GateBlock& g,
                               const Eigen::VectorXd& a_bar) {
      g_grad.W += a_bar * e.transpose();
      g_grad.U += a_bar * h_in[j].transpose();
      g_grad.d += a_bar;
      e_bar += g.W.transpose() * a_bar;
      h_in_bar += g.U.transpose() * a_bar;
    };
    gate_back(grad.gi, p.gi, ai_bar);
    gate_back(grad.gf, p.gf, af_bar);
    gate_back(grad.gz, p.gz, az_bar);
    gate_back(grad.go, p.go, o_bar);
    gate_back(grad.gibar, p.gibar, aibar_bar);
    gate_back(grad.gfbar, p.gfbar, afbar_bar);
    gate_back(grad.gd, p.gd, a_d_bar);
    grad.embed.row(event_type(j)) += e_bar.transpose();
  }

  void backward() {
    const auto N = static_cast<double>(req.sample_times.size());
    const double mc_weight =
        (req.integral_only ? 1.0 : -1.0) * req.horizon / N;
    // sample_times sorted: find each interval's slice once
    std::vector<std::pair<int, int>> slice(I + 1, {0, 0});
    {
      int j = 0;
      for (int n = 0; n < static_cast<int>(req.sample_times.size()); ++n) {
        while (j < I && stream.events[j].time < req.sample_times[n]) {
          ++j;
          slice[j].first = n;
        }
        slice[j].second = n + 1;
      }
      // intervals never entered keep their empty [n, n) slice
      for (int jj = 1; jj <= I; ++jj) {
        if (slice[jj].second < slice[jj].first)
          slice[jj].second = slice[jj].first;
      }
    }

    NeuralAdjoint adj(p.hidden);
    Eigen::VectorXd weight(p.num_types);
    for (int j = I; j >= 0; --j) {
      for (int n = slice[j].first; n < slice[j].second; ++n) {
        const double t = req.sample_times[n];
        const DecayedState dec = decay_state(p, states[j], t);
        weight.setConstant(mc_weight);
        const Eigen::VectorXd h_bar = lambda_adjoint(dec.h, weight);
        decay_adjoint(states[j], t, Eigen::VectorXd::Zero(p.hidden), h_bar, adj);
      }
      Eigen::VectorXd c_in_bar, h_in_bar, ctar_prev_bar;
      update_adjoint(j, adj, c_in_bar, h_in_bar, ctar_prev_bar);
      if (j == 0) break;
      if (!req.integral_only) {
        // event j's own log-intensity term reads the same decayed hidden
        const Event& e = stream.events[j - 1];
        const double lam =
            softplus_scaled(p.w.row(e.type - 1).dot(h_in[j]), p.s[e.type - 1]);
        weight.setZero();
        weight[e.type - 1] = 1.0 / lam;
        h_in_bar += lambda_adjoint(h_in[j], weight);
      }
      NeuralAdjoint prev(p.hidden);
      decay_adjoint(states[j - 1], event_time(j), c_in_bar, h_in_bar, prev);
      prev.c_target += ctar_prev_bar;
      adj = std::move(prev);
    }
  }
};

EvalOutput eval_neural(const CtlstmParams& p, const EvalRequest& req) {
  NeuralEngine engine(p, req);
  EvalOutput out;
  engine.forward(out);
  if (req.want_gradient) {
    engine.backward();
    out.grad = get_params(engine.grad);
    // the flat tail holds (s, decay_scale) gradients already; nothing to fix up
  }
  return out;
}

// ---------------------------------------------------------------------------

EvalOutput dispatch(const AnyModel& m, const EvalRequest& req) {
  return std::visit(
      [&req](const auto& p) -> EvalOutput {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SemppParams>) {
          return eval_classical(p.mu, p.alpha, p.delta, nullptr, req);
        } else if constexpr (std::is_same_v<T, DsmppParams>) {
          return eval_classical(p.mu, p.alpha, p.delta, &p.s, req);
        } else {
          return eval_neural(p, req);
        }
      },
      m);
}

// Effective horizon honouring an optional EOS type; also validates the
// stream against the model.
double effective_horizon(const AnyModel& m, const EventStream& stream,
                         const McConfig& mc) {
  validate_stream(stream);
  if (stream.num_types != num_types(m)) {
    throw ValidationError("stream K does not match the model");
  }
  if (mc.eos_type.has_value()) {
    const int eos = *mc.eos_type;
    for (std::size_t i = 0; i < stream.events.size(); ++i) {
      if (stream.events[i].type == eos && i + 1 != stream.events.size()) {
        throw ValidationError("events found after the EOS marker");
      }
    }
    if (!stream.events.empty() && stream.events.back().type == eos) {
      return stream.events.back().time;
    }
  }
  return stream.horizon;
}

EvalRequest make_request(const AnyModel& m, const EventStream& stream,
                         const McConfig& mc, bool want_gradient,
                         bool integral_only) {
  EvalRequest req;
  req.stream = &stream;
  req.horizon = effective_horizon(m, stream, mc);
  req.sample_times = mc_sample_times(req.horizon, mc);
  req.want_gradient = want_gradient;
  req.integral_only = integral_only;
  return req;
}

LogLikReport make_report(const EvalOutput& out) {
  LogLikReport report;
  report.integral_term = out.integral;
  for (std::size_t i = 0; i < out.log_event.size(); ++i) {
    report.event_term += out.log_event[i];
    report.type_term += out.log_event[i] - out.log_total[i];
    report.time_term += out.log_total[i];
  }
  report.time_term -= out.integral;
  report.total = report.event_term - report.integral_term;
  report.per_event = out.log_event;
  return report;
}

}  // namespace

std::vector<double> mc_sample_times(double horizon, const McConfig& mc) {
  if (mc.n_samples < 1) {
    throw ValidationError("n_samples must be at least 1");
  }
  Rng rng(derive_seed(mc.seed, 0x6d63ULL));  // "mc" tag
  std::vector<double> times(mc.n_samples);
  const auto N = static_cast<double>(mc.n_samples);
  if (mc.stratified) {
    for (int n = 0; n < mc.n_samples; ++n) {
      times[n] = horizon * ((static_cast<double>(n) + rng.uniform()) / N);
    }
  } else {
    for (double& t : times) t = horizon * rng.uniform();
    std::sort(times.begin(), times.end());
  }
  return times;
}

LogLikReport log_likelihood(const AnyModel& m, const EventStream& stream,
                            const McConfig& mc) {
  const EvalRequest req = make_request(m, stream, mc, false, false);
  return make_report(dispatch(m, req));
}

std::pair<double, Eigen::VectorXd> mc_integral(const AnyModel& m,
                                               const EventStream& stream,
                                               const McConfig& mc) {
  const EvalRequest req = make_request(m, stream, mc, true, true);
  EvalOutput out = dispatch(m, req);
  return {out.integral, std::move(out.grad)};
}

Eigen::VectorXd loglik_gradient(const AnyModel& m, const EventStream& stream,
                                const McConfig& mc, LogLikReport* report) {
  const EvalRequest req = make_request(m, stream, mc, true, false);
  EvalOutput out = dispatch(m, req);
  if (report != nullptr) *report = make_report(out);
  return std::move(out.grad);
}

double finite_diff_check(const AnyModel& m, const EventStream& stream,
                         double step, const McConfig& mc) {
  if (!(step >= 1e-7 && step <= 1e-3)) {
    throw ValidationError("finite-difference step must lie in [1e-7, 1e-3]");
  }
  const Eigen::VectorXd analytic = loglik_gradient(m, stream, mc);
  const Eigen::VectorXd base = get_params(m);
  AnyModel probe = m;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < base.size(); ++i) {
    Eigen::VectorXd v = base;
    v[i] = base[i] + step;
    set_params(probe, v);
    const double up = log_likelihood(probe, stream, mc).total;
    v[i] = base[i] - step;
    set_params(probe, v);
    const double down = log_likelihood(probe, stream, mc).total;
    const double fd = (up - down) / (2.0 * step);
    const double denom = std::max(std::abs(analytic[i]), std::abs(fd));
    const double err = std::abs(analytic[i] - fd);
    worst = std::max(worst, denom < 1e-6 ? err : err / denom);
  }
  return worst;
}

double quadrature_total_intensity(const AnyModel& m, const EventStream& stream,
                                  int n_points) {
  if (n_points < 2) throw ValidationError("quadrature needs at least 2 points");
  validate_stream(stream);
  return std::visit(
      [&](const auto& p) {
        auto cursor = make_cursor(p);
        double total = 0.0;
        double a = 0.0;
        const int I = stream.size();
        for (int j = 0; j <= I; ++j) {
          const double b = j < I ? stream.events[j].time : stream.horizon;
          const double len = b - a;
          if (len > 0.0) {
            const int panel = std::max(
                2, static_cast<int>(std::llround(
                       static_cast<double>(n_points) * len / stream.horizon)));
            double prev = intensity_at(p, cursor, a).sum();
            for (int g = 1; g <= panel; ++g) {
              const double t =
                  a + len * (static_cast<double>(g) / static_cast<double>(panel));
              const double cur = intensity_at(p, cursor, t).sum();
              total += 0.5 * (prev + cur) * (len / static_cast<double>(panel));
              prev = cur;
            }
          }
          if (j < I) {
            advance(p, cursor, stream.events[j].type, stream.events[j].time);
            a = b;
          }
        }
        return total;
      },
      m);
}

DatasetLoglik dataset_log_likelihood(const AnyModel& m, const Dataset& data,
                                     std::uint64_t seed, int sample_mult,
                                     int threads) {
  if (sample_mult < 1) throw ValidationError("sample_mult must be at least 1");
  DatasetLoglik result;
  result.reports.resize(data.streams.size());
  parallel_for(static_cast<int>(data.streams.size()), threads, [&](int i) {
    const EventStream& stream = data.streams[i];
    McConfig mc;
    mc.n_samples = sample_mult * std::max(1, stream.size());
    mc.seed = derive_seed(seed, 0x6576616cULL, static_cast<std::uint64_t>(i));
    result.reports[i] = log_likelihood(m, stream, mc);
  });
  for (const LogLikReport& r : result.reports) result.total += r.total;
  result.n_events = data.total_events();
  result.per_event =
      result.n_events > 0 ? result.total / static_cast<double>(result.n_events)
                          : 0.0;
  return result;
}

}  // namespace pointproc
