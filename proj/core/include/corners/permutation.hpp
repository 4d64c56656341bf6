#ifndef CORNERS_PERMUTATION_HPP
#define CORNERS_PERMUTATION_HPP

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace corners {

/// Permutation of {0, ..., degree-1}, stored as the image table img[i] = sigma(i).
class Permutation {
public:
    Permutation() = default;

    explicit Permutation(std::vector<int> images) : img_(std::move(images)) {
        std::vector<bool> seen(img_.size(), false);
        for (int v : img_) {
            if (v < 0 || v >= static_cast<int>(img_.size()) || seen[v])
                throw std::invalid_argument("not a permutation: " + to_string());
            seen[v] = true;
        }
    }

    static Permutation identity(int degree) {
        std::vector<int> img(degree);
        std::iota(img.begin(), img.end(), 0);
        return Permutation(std::move(img));
    }

    /// Transposition (a b) on `degree` letters.
    static Permutation transposition(int degree, int a, int b) {
        Permutation p = identity(degree);
        std::swap(p.img_[a], p.img_[b]);
        return p;
    }

    int degree() const { return static_cast<int>(img_.size()); }
    int operator()(int i) const { return img_.at(i); }
    const std::vector<int>& images() const { return img_; }

    bool is_identity() const {
        for (int i = 0; i < degree(); ++i)
            if (img_[i] != i) return false;
        return true;
    }

    /// Composition acting left to right on points: (a*b)(i) = a(b(i)).
    Permutation operator*(const Permutation& b) const {
        if (degree() != b.degree())
            throw std::invalid_argument("permutation degree mismatch");
        std::vector<int> img(degree());
        for (int i = 0; i < degree(); ++i) img[i] = img_[b.img_[i]];
        return Permutation(std::move(img));
    }

    Permutation inverse() const {
        std::vector<int> img(degree());
        for (int i = 0; i < degree(); ++i) img[img_[i]] = i;
        return Permutation(std::move(img));
    }

    bool operator==(const Permutation& o) const { return img_ == o.img_; }
    bool operator<(const Permutation& o) const { return img_ < o.img_; }

    std::string to_string() const {
        std::string s = "(";
        for (size_t i = 0; i < img_.size(); ++i) {
            if (i) s += ' ';
            s += std::to_string(img_[i]);
        }
        return s + ")";
    }

private:
    std::vector<int> img_;
};

/// Finite permutation group stored as the full element list generated from
/// its generators (groups here are tiny: structure groups of normal bundles,
/// covering monodromy, sheet permutations).
class PermutationGroup {
public:
    PermutationGroup() = default;

    static PermutationGroup trivial(int degree) {
        PermutationGroup g;
        g.degree_ = degree;
        g.elements_ = {Permutation::identity(degree)};
        return g;
    }

    static PermutationGroup generated_by(const std::vector<Permutation>& gens, int degree) {
        for (const auto& p : gens)
            if (p.degree() != degree)
                throw std::invalid_argument("generator degree mismatch");
        std::set<Permutation> closure;
        closure.insert(Permutation::identity(degree));
        std::vector<Permutation> frontier(closure.begin(), closure.end());
        while (!frontier.empty()) {
            std::vector<Permutation> next;
            for (const auto& e : frontier) {
                for (const auto& g : gens) {
                    Permutation h = g * e;
                    if (closure.insert(h).second) next.push_back(h);
                }
            }
            frontier.swap(next);
        }
        PermutationGroup g;
        g.degree_ = degree;
        g.generators_ = gens;
        g.elements_.assign(closure.begin(), closure.end());
        return g;
    }

    int degree() const { return degree_; }
    int order() const { return static_cast<int>(elements_.size()); }
    bool is_trivial() const { return order() <= 1; }
    const std::vector<Permutation>& elements() const { return elements_; }
    const std::vector<Permutation>& generators() const { return generators_; }

    bool contains(const Permutation& p) const {
        return std::binary_search(elements_.begin(), elements_.end(), p);
    }

    /// Orbits of the natural action on {0, ..., degree-1}.
    std::vector<std::vector<int>> orbits() const {
        std::vector<std::vector<int>> result;
        std::vector<bool> seen(degree_, false);
        for (int i = 0; i < degree_; ++i) {
            if (seen[i]) continue;
            std::vector<int> orbit;
            std::vector<int> stack{i};
            seen[i] = true;
            while (!stack.empty()) {
                int x = stack.back();
                stack.pop_back();
                orbit.push_back(x);
                for (const auto& g : elements_) {
                    int y = g(x);
                    if (!seen[y]) {
                        seen[y] = true;
                        stack.push_back(y);
                    }
                }
            }
            std::sort(orbit.begin(), orbit.end());
            result.push_back(std::move(orbit));
        }
        return result;
    }

    bool transitive() const { return degree_ == 0 || orbits().size() == 1; }

private:
    int degree_ = 0;
    std::vector<Permutation> generators_;
    std::vector<Permutation> elements_ = {Permutation::identity(0)};
};

} // namespace corners

#endif
