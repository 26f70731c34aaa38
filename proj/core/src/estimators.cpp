// Copyright 2026 The cvplateau Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "cvplateau/estimators.hpp"

#include "cvplateau/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

namespace cvplateau {

namespace {

template <class... Ts> struct Overloaded : Ts... {
    using Ts::operator()...;
};

/// Welford accumulator; merge is Chan et al.'s pairwise update.
struct RunningMoments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2 += delta * (x - mean);
    }

    void merge(const RunningMoments &o) {
        if (o.n == 0) {
            return;
        }
        if (n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n);
        const double nb = static_cast<double>(o.n);
        const double total = na + nb;
        const double delta = o.mean - mean;
        mean += delta * nb / total;
        m2 += o.m2 + delta * delta * na * nb / total;
        n += o.n;
    }

    [[nodiscard]] double std_error() const {
        if (n < 2) {
            return 0.0;
        }
        const double var = m2 / static_cast<double>(n - 1);
        return std::sqrt(var / static_cast<double>(n));
    }
};

struct ChunkResult {
    RunningMoments first;
    RunningMoments second;
    std::uint64_t hits = 0;
};

/// Per-instance state computed once before sampling.
class GradientSampler {
  public:
    explicit GradientSampler(const Instance &instance) : instance_(instance) {
        if (const auto *q = std::get_if<QuadraticInstance>(&instance)) {
            bk_ = bk_matrix(q->gate, q->hamiltonian, q->plus).matrix();
        }
    }

    double operator()(RandomSource &rng) const {
        return std::visit(
            Overloaded{
                [&](const ToyInstance &t) {
                    const Eigen::VectorXd theta = uniform_angles(t.modes, rng);
                    return toy_grad(Eigen::Vector2d(std::sqrt(t.s), 0.0), theta, 0);
                },
                [&](const CompilingInstance &c) {
                    const int m = c.input.modes();
                    const auto minus = haar_orthogonal(m, rng);
                    const auto plus = haar_orthogonal(m, rng);
                    return compiling_grad(c.input, c.gate.d(), minus, plus);
                },
                [&](const HeterodyneInstance &h) {
                    const int m = h.input.modes();
                    const auto minus = haar_orthogonal(m, rng);
                    const auto plus = haar_orthogonal(m, rng);
                    return measurement_grad(h.input, h.outcome, h.gate.d(), minus,
                                            plus);
                },
                [&](const QuadraticInstance &q) {
                    const auto minus = haar_orthogonal(q.input.modes(), rng);
                    return -quadratic_form(q.input, *bk_, minus);
                },
            },
            instance_);
    }

  private:
    const Instance &instance_;
    std::optional<Eigen::MatrixXd> bk_;
};

void validate(const Instance &instance, const EstimatorOptions &opts) {
    if (opts.n_samples < kMinSamples) {
        throw DomainError("n_samples must be at least " +
                          std::to_string(kMinSamples));
    }
    if (opts.chunk_size == 0) {
        throw DomainError("chunk_size must be positive");
    }
    std::visit(Overloaded{
                   [](const ToyInstance &t) {
                       if (t.modes < 1 || !(t.s >= 0.0)) {
                           throw DomainError("toy instance needs m >= 1, s >= 0");
                       }
                   },
                   [](const CompilingInstance &c) {
                       if (c.gate.modes() != c.input.modes()) {
                           throw DimensionError("gate and input mode counts differ");
                       }
                   },
                   [](const HeterodyneInstance &h) {
                       if (h.gate.modes() != h.input.modes() ||
                           h.outcome.modes() != h.input.modes()) {
                           throw DimensionError("gate, input and outcome mode "
                                                "counts differ");
                       }
                   },
                   [](const QuadraticInstance &q) {
                       if (q.gate.modes() != q.input.modes() ||
                           q.hamiltonian.modes() != q.input.modes() ||
                           q.plus.dim() != q.input.dim()) {
                           throw DimensionError("quadratic instance mode counts "
                                                "differ");
                       }
                   },
               },
               instance);
}

/// Runs every chunk (possibly on several threads) and merges in chunk order.
template <class Transform>
ChunkResult run_chunks(const Instance &instance, const EstimatorOptions &opts,
                       Transform transform, double threshold) {
    validate(instance, opts);
    const GradientSampler sampler(instance);
    const std::uint64_t n_chunks =
        (opts.n_samples + opts.chunk_size - 1) / opts.chunk_size;
    std::vector<ChunkResult> results(n_chunks);
    const RandomSource root(opts.seed);

    auto work_chunk = [&](std::uint64_t c) {
        RandomSource rng = root.substream(c);
        const std::uint64_t begin = c * opts.chunk_size;
        const std::uint64_t end = std::min(opts.n_samples, begin + opts.chunk_size);
        ChunkResult r;
        for (std::uint64_t i = begin; i < end; ++i) {
            const double g = sampler(rng);
            if (!std::isfinite(g)) {
                throw NumericalError("non-finite gradient sample");
            }
            const double x = transform(g);
            r.first.add(x);
            r.second.add(x * x);
            if (std::abs(g) >= threshold) {
                ++r.hits;
            }
        }
        results[c] = r;
    };

    const unsigned threads = static_cast<unsigned>(
        std::clamp<std::uint64_t>(opts.threads == 0 ? 1 : opts.threads, 1, n_chunks));
    if (threads == 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) {
            work_chunk(c);
        }
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::exception_ptr> errors(threads);
        {
            std::vector<std::jthread> pool;
            for (unsigned t = 0; t < threads; ++t) {
                pool.emplace_back([&, t] {
                    try {
                        for (auto c = next.fetch_add(1); c < n_chunks;
                             c = next.fetch_add(1)) {
                            work_chunk(c);
                        }
                    } catch (...) {
                        errors[t] = std::current_exception();
                    }
                });
            }
        }
        for (const auto &e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    ChunkResult total;
    for (const auto &r : results) {
        total.first.merge(r.first);
        total.second.merge(r.second);
        total.hits += r.hits;
    }
    return total;
}

MomentEstimate to_estimate(const ChunkResult &r, std::uint64_t seed) {
    MomentEstimate est;
    est.n_samples = r.first.n;
    est.mean = r.first.mean;
    est.second_moment = r.second.mean;
    est.std_error_mean = r.first.std_error();
    est.std_error_second = r.second.std_error();
    est.seed = seed;
    return est;
}

} // namespace

CostFamily family_of(const Instance &instance) {
    return static_cast<CostFamily>(instance.index());
}

std::string_view family_name(CostFamily family) {
    switch (family) {
    case CostFamily::Toy:
        return "toy";
    case CostFamily::Compiling:
        return "compiling";
    case CostFamily::Heterodyne:
        return "heterodyne";
    case CostFamily::Quadratic:
        return "quadratic";
    }
    return "unknown";
}

CostFamily parse_cost_family(std::string_view name) {
    for (auto f : {CostFamily::Toy, CostFamily::Compiling, CostFamily::Heterodyne,
                   CostFamily::Quadratic}) {
        if (family_name(f) == name) {
            return f;
        }
    }
    throw DomainError("unknown cost family '" + std::string(name) + "'");
}

double sample_gradient(const Instance &instance, RandomSource &rng) {
    return GradientSampler(instance)(rng);
}

double gradient_at(const Instance &instance, const OrthogonalMatrix &minus,
                   const OrthogonalMatrix &plus) {
    return std::visit(
        Overloaded{
            [](const ToyInstance &) -> double {
                throw DomainError("the toy family has no split action");
            },
            [&](const CompilingInstance &c) {
                return compiling_grad(c.input, c.gate.d(), minus, plus);
            },
            [&](const HeterodyneInstance &h) {
                return measurement_grad(h.input, h.outcome, h.gate.d(), minus, plus);
            },
            [&](const QuadraticInstance &q) {
                return quadratic_grad(q.input, q.hamiltonian, q.gate, minus, plus);
            },
        },
        instance);
}

MomentEstimate estimate_grad_moments(const Instance &instance,
                                     const EstimatorOptions &opts) {
    const auto r = run_chunks(instance, opts, [](double g) { return g; },
                              std::numeric_limits<double>::infinity());
    return to_estimate(r, opts.seed);
}

MomentEstimate estimate_abs_grad(const Instance &instance,
                                 const EstimatorOptions &opts) {
    const auto r = run_chunks(instance, opts, [](double g) { return std::abs(g); },
                              std::numeric_limits<double>::infinity());
    return to_estimate(r, opts.seed);
}

TailEstimate tail_frequency(const Instance &instance, double epsilon,
                            const EstimatorOptions &opts) {
    if (!(epsilon >= 0.0)) {
        throw DomainError("tail threshold epsilon must be nonnegative");
    }
    const auto r = run_chunks(instance, opts, [](double g) { return g; }, epsilon);
    TailEstimate t;
    t.n_samples = r.first.n;
    t.frequency = static_cast<double>(r.hits) / static_cast<double>(t.n_samples);
    t.std_error = std::sqrt(t.frequency * (1.0 - t.frequency) /
                            static_cast<double>(t.n_samples));
    t.seed = opts.seed;
    return t;
}

} // namespace cvplateau
