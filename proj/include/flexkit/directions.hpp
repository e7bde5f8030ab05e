#pragma once

#include <deque>
#include <memory>
#include <vector>

#include "flexkit/problem.hpp"

namespace flexkit {

enum class AndersonType { type1, type2 };

// Limited-memory buffer of secant pairs s^i = z^{i+1} - z^i and
// y^i = R_gamma(z^{i+1}) - R_gamma(z^i), oldest evicted first. The small Gram
// matrices S^T Y and Y^T Y are maintained incrementally so a direction costs
// O(n m + m^3) and never materializes an n-by-n operator.
class DirectionBuffer {
public:
    explicit DirectionBuffer(std::size_t memory);

    // Sets the last-seen pair without creating a secant.
    void seed(const Point& z, const Point& r);

    // Appends the secant from the last-seen pair to (z_new, r_new). A
    // degenerate step ||s|| < 1e-14 (1 + ||z_new||) rejects the pair and
    // restarts the buffer; returns false in that case.
    bool push(const Point& z_new, const Point& r_new);

    void reset();

    std::size_t size() const { return s_.size(); }
    std::size_t memory() const { return memory_; }
    bool seeded() const { return seeded_; }
    const std::deque<Point>& secants_s() const { return s_; }
    const std::deque<Point>& secants_y() const { return y_; }
    // Row-major m-by-m Gram matrices over the current pairs.
    std::vector<double> gram_st_y() const;
    std::vector<double> gram_yt_y() const;

private:
    std::size_t memory_;
    std::deque<Point> s_, y_;
    std::deque<std::vector<double>> st_y_rows_;  // st_y_rows_[i][j] = <s_i, y_j>
    std::deque<std::vector<double>> yt_y_rows_;
    bool seeded_ = false;
    Point last_z_, last_r_;

    void evict_front();
};

// Anderson direction d = -H r with
//   type-I : H = I + (S - Y)(S^T Y)^{-1} S^T
//   type-II: H = I + (S - Y)(Y^T Y)^{-1} Y^T.
// An empty buffer gives d = -r. A singular or ill-conditioned inner system
// (condition estimate above 1e12) falls back to d = -r and sets *fallback.
Point aa_direction(const DirectionBuffer& buffer, const Point& r, AndersonType type,
                   bool* fallback = nullptr);

// Regularized Newton direction: solves (r_k I + DF(z)) d = -F(z) with
// r_k = c ||F(z)||. Requires the instance Jacobian and g = 0.
Point newton_reg_direction(const ProblemInstance& inst, const Point& z, double c = 1.0,
                           const Point* F_z = nullptr);

// Enforces ||d|| <= D ||r|| by rescaling, preserving the direction.
Point safeguard(const Point& d, const Point& r, double D);

// Rolling record of trial-to-current Lyapunov ratios used to visualize
// superlinear direction quality.
class SuperlinTracker {
public:
    double record(double V_trial, double V_current);
    const std::vector<double>& ratios() const { return ratios_; }

private:
    std::vector<double> ratios_;
};

// Pluggable direction source for the line-search solvers. `r` is the residual
// R_gamma at z (equal to F(z) when g = 0).
class DirectionProvider {
public:
    virtual ~DirectionProvider() = default;
    virtual Point compute(ProblemInstance& inst, const Point& z, const Point& r) = 0;
    virtual void accept(const Point& z_new, const Point& r_new) {}
    virtual bool last_fallback() const { return false; }
    virtual void reset() {}
};

class ZeroDirection : public DirectionProvider {
public:
    Point compute(ProblemInstance&, const Point& z, const Point&) override {
        return Point(z.size());
    }
};

// d = -R_gamma(z), the plain residual direction.
class ResidualDirection : public DirectionProvider {
public:
    Point compute(ProblemInstance&, const Point&, const Point& r) override { return -r; }
};

class AndersonDirection : public DirectionProvider {
public:
    AndersonDirection(AndersonType type, std::size_t memory)
        : type_(type), buffer_(memory) {}

    Point compute(ProblemInstance&, const Point& z, const Point& r) override;
    void accept(const Point& z_new, const Point& r_new) override;
    bool last_fallback() const override { return fallback_; }
    void reset() override { buffer_.reset(); }

    const DirectionBuffer& buffer() const { return buffer_; }

private:
    AndersonType type_;
    DirectionBuffer buffer_;
    bool fallback_ = false;
};

class RegularizedNewtonDirection : public DirectionProvider {
public:
    explicit RegularizedNewtonDirection(double c = 1.0) : c_(c) {}
    Point compute(ProblemInstance& inst, const Point& z, const Point& r) override;

private:
    double c_;
};

enum class DirectionKind { none, aa1, aa2, newton };

std::unique_ptr<DirectionProvider> make_direction_provider(DirectionKind kind,
                                                           std::size_t memory = 5,
                                                           double newton_c = 1.0);

}  // namespace flexkit
