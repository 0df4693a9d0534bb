#include "transval/learners/learner.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "transval/core/error.hpp"
#include "transval/learners/sgd_logistic.hpp"
#include "transval/learners/svm.hpp"

namespace transval {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

void require_task(const Dataset& data, TaskKind task, const char* who) {
    if (data.task() != task) {
        throw ContractError(std::string(who) + " needs " + to_string(task) + " data, got " +
                            to_string(data.task()));
    }
}

// Solves A x = b in place by Gaussian elimination with partial pivoting.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        }
        if (a[pivot * n + col] == 0.0) {
            throw ContractError("polyreg: singular normal equations (add a ridge term)");
        }
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / a[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i * n + c] * x[c];
        x[i] = s / a[i * n + i];
    }
    return x;
}

SvmMachine train_machine(const Dataset& data, std::span<const double> gram,
                         std::span<const double> labels, const SvmParams& params) {
    const std::size_t n = data.size();
    SvmMachine machine;
    const bool has_pos = std::find(labels.begin(), labels.end(), 1.0) != labels.end();
    const bool has_neg = std::find(labels.begin(), labels.end(), -1.0) != labels.end();
    if (!(has_pos && has_neg)) {
        // One-class training set: constant decision toward the only class.
        machine.rho = has_pos ? -1.0 : 1.0;
        return machine;
    }
    DualSolution sol = solve_svm_dual(gram, labels, params.C, params.tolerance,
                                      params.max_iterations);
    machine.rho = sol.rho;
    machine.kkt_violation = sol.kkt_violation;
    machine.dual_objective = sol.objective;
    machine.iterations = sol.iterations;
    for (std::size_t i = 0; i < n; ++i) {
        if (sol.alpha[i] == 0.0) continue;
        auto r = data.row(i);
        machine.support.insert(machine.support.end(), r.begin(), r.end());
        machine.coefficients.push_back(sol.alpha[i] * labels[i]);
    }
    return machine;
}

}  // namespace

void validate(const Learner& learner) {
    std::visit(Overloaded{
                   [](const PolyRegParams& p) {
                       if (!(p.ridge >= 0.0) || !std::isfinite(p.ridge)) {
                           throw ContractError("polyreg: ridge must be finite and >= 0");
                       }
                   },
                   [](const KnnParams& p) {
                       if (p.k < 1) throw ContractError("knn: k must be >= 1");
                   },
                   [](const SvmParams& p) {
                       if (!(p.gamma > 0.0)) throw ContractError("svm-rbf: gamma must be > 0");
                       if (!(p.C > 0.0)) throw ContractError("svm-rbf: C must be > 0");
                       if (!(p.tolerance > 0.0)) {
                           throw ContractError("svm-rbf: tolerance must be > 0");
                       }
                   },
                   [](const SgdParams& p) {
                       if (!(p.learning_rate > 0.0)) {
                           throw ContractError("sgd-logistic: learning rate must be > 0");
                       }
                       if (p.batch_size < 1) {
                           throw ContractError("sgd-logistic: batch size must be >= 1");
                       }
                   },
                   [](const ConstantParams& p) {
                       if (!std::isfinite(p.value)) {
                           throw ContractError("constant: value must be finite");
                       }
                   },
               },
               learner);
}

std::string kind_name(const Learner& learner) {
    return std::visit(Overloaded{
                          [](const PolyRegParams&) { return "polyreg"; },
                          [](const KnnParams&) { return "knn"; },
                          [](const SvmParams&) { return "svm-rbf"; },
                          [](const SgdParams&) { return "sgd-logistic"; },
                          [](const ConstantParams&) { return "constant"; },
                      },
                      learner);
}

std::string describe(const Learner& learner) {
    std::ostringstream out;
    out << kind_name(learner) << '(';
    std::visit(Overloaded{
                   [&](const PolyRegParams& p) {
                       out << "degree=" << p.degree << ",ridge=" << p.ridge;
                   },
                   [&](const KnnParams& p) { out << "k=" << p.k; },
                   [&](const SvmParams& p) { out << "gamma=" << p.gamma << ",C=" << p.C; },
                   [&](const SgdParams& p) {
                       out << "lr=" << p.learning_rate << ",epochs=" << p.epochs
                           << ",batch=" << p.batch_size;
                   },
                   [&](const ConstantParams& p) { out << "value=" << p.value; },
               },
               learner);
    out << ')';
    return out.str();
}

std::optional<TaskKind> learner_task(const Learner& learner) {
    if (std::holds_alternative<PolyRegParams>(learner)) return TaskKind::regression;
    if (std::holds_alternative<ConstantParams>(learner)) return std::nullopt;
    return TaskKind::classification;
}

FittedModel train_polyreg(const Dataset& data, std::size_t degree, double ridge) {
    require_task(data, TaskKind::regression, "polyreg");
    if (data.dim() != 1) throw ContractError("polyreg: needs 1-D features");
    if (!(ridge >= 0.0)) throw ContractError("polyreg: ridge must be >= 0");
    const std::size_t terms = degree + 1;
    std::vector<double> gram(terms * terms, 0.0);
    std::vector<double> rhs(terms, 0.0);
    std::vector<double> phi(terms);
    for (std::size_t i = 0; i < data.size(); ++i) {
        double power = 1.0;
        for (std::size_t t = 0; t < terms; ++t) {
            phi[t] = power;
            power *= data.row(i)[0];
        }
        for (std::size_t r = 0; r < terms; ++r) {
            rhs[r] += phi[r] * data.target(i);
            for (std::size_t c = 0; c < terms; ++c) gram[r * terms + c] += phi[r] * phi[c];
        }
    }
    for (std::size_t t = 1; t < terms; ++t) gram[t * terms + t] += ridge;
    PolyModel model{solve_dense(std::move(gram), std::move(rhs))};
    for (double c : model.coefficients) {
        if (!std::isfinite(c)) throw ContractError("polyreg: non-finite coefficients");
    }
    return FittedModel(TaskKind::regression, std::move(model), data.fingerprint());
}

FittedModel train_knn(const Dataset& data, std::size_t k) {
    require_task(data, TaskKind::classification, "knn");
    if (k < 1 || k > data.size()) {
        throw ContractError("knn: k = " + std::to_string(k) + " must be in [1, " +
                            std::to_string(data.size()) + "]");
    }
    return FittedModel(TaskKind::classification,
                       KnnModel{std::make_shared<const Dataset>(data), k}, data.fingerprint());
}

FittedModel train_svm_rbf(const Dataset& data, const SvmParams& params) {
    require_task(data, TaskKind::classification, "svm-rbf");
    validate(params);
    const std::size_t n = data.size();
    std::vector<double> gram(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            gram[i * n + j] = gram[j * n + i] = radial_kernel(data.row(i), data.row(j), params.gamma);
        }
    }
    SvmModel model;
    model.dim = data.dim();
    model.gamma = params.gamma;
    model.class_count = std::max<std::size_t>(data.class_count(), 2);
    std::vector<double> labels(n);
    const std::size_t machines = model.class_count == 2 ? 1 : model.class_count;
    for (std::size_t m = 0; m < machines; ++m) {
        const std::size_t positive = model.class_count == 2 ? 1 : m;
        for (std::size_t i = 0; i < n; ++i) labels[i] = data.label(i) == positive ? 1.0 : -1.0;
        model.machines.push_back(train_machine(data, gram, labels, params));
    }
    return FittedModel(TaskKind::classification, std::move(model), data.fingerprint());
}

FittedModel train_constant(const Dataset& data, double value) {
    return FittedModel(data.task(), ConstantModel{value}, data.fingerprint());
}

FittedModel fit(const Learner& learner, const Dataset& data, const Seed& seed) {
    validate(learner);
    return std::visit(
        Overloaded{
            [&](const PolyRegParams& p) { return train_polyreg(data, p.degree, p.ridge); },
            [&](const KnnParams& p) { return train_knn(data, p.k); },
            [&](const SvmParams& p) { return train_svm_rbf(data, p); },
            [&](const SgdParams& p) {
                require_task(data, TaskKind::classification, "sgd-logistic");
                auto schedule = batch_schedule(data.size(), 0, 0.0, p.batch_size,
                                               sgd_iterations(p, data.size()), seed);
                return train_sgd_logistic(schedule, data, p.learning_rate);
            },
            [&](const ConstantParams& p) { return train_constant(data, p.value); },
        },
        learner);
}

}  // namespace transval
