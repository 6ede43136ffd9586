#pragma once

#include <string>
#include <utility>

#include "sympcap/errors.hpp"

namespace sympcap {

/** Coordinate 2-plane of R^{2N}.  Indices are 1-based as in (q_j, p_j);
    `mixed(i, j)` is the nonconjugate pair (q_i, p_j) with i != j. */
struct PlaneSelector {
    enum class Kind { conjugate, position_pair, momentum_pair, mixed };

    Kind kind = Kind::conjugate;
    int i = 1;
    int j = 1;

    static PlaneSelector conjugate(int j) { return {Kind::conjugate, j, j}; }
    static PlaneSelector positions(int i, int j) { return {Kind::position_pair, i, j}; }
    static PlaneSelector momenta(int i, int j) { return {Kind::momentum_pair, i, j}; }
    static PlaneSelector mixed(int i, int j) { return {Kind::mixed, i, j}; }

    bool is_conjugate() const { return kind == Kind::conjugate; }

    void validate(int dof) const {
        if (i < 1 || i > dof || j < 1 || j > dof)
            throw InvalidArgument("plane index out of range 1.." + std::to_string(dof));
        if (kind == Kind::conjugate && i != j)
            throw InvalidArgument("conjugate plane uses a single index");
        if (kind != Kind::conjugate && i == j)
            throw InvalidArgument("nonconjugate plane needs two distinct indices");
    }

    /// 0-based row indices into a (q, p)-ordered phase vector.
    std::pair<int, int> coordinates(int dof) const {
        validate(dof);
        switch (kind) {
            case Kind::conjugate: return {j - 1, dof + j - 1};
            case Kind::position_pair: return {i - 1, j - 1};
            case Kind::momentum_pair: return {dof + i - 1, dof + j - 1};
            case Kind::mixed: return {i - 1, dof + j - 1};
        }
        return {0, 0};
    }

    std::string label() const {
        const auto a = std::to_string(i), b = std::to_string(j);
        switch (kind) {
            case Kind::conjugate: return "q" + b + "p" + b;
            case Kind::position_pair: return "q" + a + "q" + b;
            case Kind::momentum_pair: return "p" + a + "p" + b;
            case Kind::mixed: return "q" + a + "p" + b;
        }
        return {};
    }

    /// Inverse of label(): "q1p1", "q1q2", "p1p2", "q1p2".
    static PlaneSelector parse(const std::string& text) {
        auto fail = [&]() -> PlaneSelector { throw InvalidArgument("cannot parse plane '" + text + "'"); };
        if (text.size() < 4) return fail();
        const char a = text[0];
        const auto mid = text.find_first_of("qp", 1);
        if (mid == std::string::npos || (a != 'q' && a != 'p')) return fail();
        const char b = text[mid];
        int x = 0, y = 0;
        try {
            std::size_t used = 0;
            x = std::stoi(text.substr(1, mid - 1), &used);
            if (used != mid - 1) return fail();
            y = std::stoi(text.substr(mid + 1), &used);
            if (used != text.size() - mid - 1) return fail();
        } catch (const std::logic_error&) {
            return fail();
        }
        if (a == 'q' && b == 'p') return x == y ? conjugate(x) : mixed(x, y);
        if (a == 'q' && b == 'q') return positions(x, y);
        if (a == 'p' && b == 'p') return momenta(x, y);
        return fail();
    }

    friend bool operator==(const PlaneSelector&, const PlaneSelector&) = default;
};

}  // namespace sympcap
