#pragma once

// Dense 64-bit tensors plus a reverse-mode differentiation tape.
// A Tape and the tensors recorded on it belong to a single thread;
// independent tapes may run in parallel without coordination.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace locconv {

using Shape = std::vector<int64_t>;

int64_t shape_numel(const Shape& shape);
std::string shape_str(const Shape& shape);

struct TensorImpl {
    Shape shape;
    std::vector<double> data;
    std::vector<double> grad;  // empty unless requires_grad
    bool requires_grad = false;
    std::string name;
    uint64_t version = 0;  // bumped on in-place data mutation
};

/// Shared-storage handle to an n-dimensional array of doubles, row-major.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape shape, bool requires_grad = false);
    Tensor(Shape shape, std::vector<double> values, bool requires_grad = false);

    static Tensor zeros(Shape shape, bool requires_grad = false);
    static Tensor full(Shape shape, double value, bool requires_grad = false);
    static Tensor scalar(double value, bool requires_grad = false);

    bool defined() const { return impl_ != nullptr; }
    const Shape& shape() const { return impl_->shape; }
    int64_t rank() const { return static_cast<int64_t>(impl_->shape.size()); }
    int64_t extent(int64_t axis) const { return impl_->shape[static_cast<size_t>(axis)]; }
    int64_t numel() const { return static_cast<int64_t>(impl_->data.size()); }

    std::vector<double>& data() { return impl_->data; }
    const std::vector<double>& data() const { return impl_->data; }
    double* ptr() { return impl_->data.data(); }
    const double* ptr() const { return impl_->data.data(); }

    bool requires_grad() const { return impl_->requires_grad; }
    void set_requires_grad(bool on);
    std::vector<double>& grad();
    const std::vector<double>& grad() const;
    void zero_grad();

    const std::string& name() const { return impl_->name; }
    Tensor& named(std::string n);

    uint64_t version() const { return impl_->version; }
    void bump_version() { ++impl_->version; }

    /// Identity of the underlying storage (aliasing check).
    const TensorImpl* id() const { return impl_.get(); }

    bool is_scalar() const { return numel() == 1; }
    double value() const;  // scalar tensors only

    double at(std::initializer_list<int64_t> idx) const;
    int64_t offset(std::initializer_list<int64_t> idx) const;

    bool all_finite() const;
    Tensor clone() const;  // deep copy (grad not copied)

private:
    std::shared_ptr<TensorImpl> impl_;
    void require_defined() const;
};

/// One recorded operation: the closure propagates output gradients to inputs.
struct ComputationNode {
    std::string op;
    std::function<void()> backward;
};

/// Reverse-mode tape. Nodes are replayed strictly in reverse recording order.
class Tape {
public:
    void record(std::string op, std::function<void()> backward);
    size_t size() const { return nodes_.size(); }

    /// Clears recorded nodes; registered parameters survive.
    void reset() { nodes_.clear(); }

    void register_parameter(const Tensor& t);
    const std::vector<Tensor>& parameters() const { return parameters_; }
    void zero_param_grads();

    friend void backward(Tape& tape, const Tensor& loss);

private:
    std::vector<ComputationNode> nodes_;
    std::vector<Tensor> parameters_;
};

/// Seeds d(loss)/d(loss) = 1 and replays the tape in reverse. Gradients
/// accumulate additively across fan-out; the tape is left intact, so call
/// at most once per recording.
void backward(Tape& tape, const Tensor& loss);

/// Deterministic RNG: mt19937_64 with hand-rolled uniform/normal draws so
/// outputs are identical across platforms and standard-library versions.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64();
    double uniform01();                       // [0, 1)
    double uniform(double lo, double hi);     // [lo, hi)
    double normal();                          // Box-Muller, mean 0 sd 1
    int64_t below(int64_t n);                 // [0, n)

    /// Independent child stream; (seed, tag) pairs give disjoint streams.
    Rng fork(uint64_t tag) const;

private:
    uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace locconv
