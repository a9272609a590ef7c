// Finite graded commutative rings over the rationals, presented by a
// homogeneous basis with an exact multiplication table, and the cup length
// machinery built on them: tensor squares with their sign rule, kernels of
// ring maps, and the nilpotency searches that turn into lower bounds for the
// sectional invariants. This layer never touches the chain backend; its
// outputs are numbers to be fed to the bounds engine as facts.
#pragma once

#include "secat/matrix.hpp"

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace secat {

struct RingError : std::runtime_error {
    explicit RingError(const std::string& what) : std::runtime_error(what) {}
};

// Coefficient vector over the basis of one ring.
using RingElt = std::vector<Rat>;

class GradedRing {
public:
    // Verifies homogeneity of every table entry, the sign rule
    // x y = (-1)^{|x||y|} y x, associativity on basis triples, and the unit
    // law. table[i][j] lists the coefficients of e_i e_j over the basis.
    GradedRing(std::vector<std::string> labels, std::vector<int> degrees,
               std::size_t unit, std::vector<std::vector<RingElt>> table);

    std::size_t rank() const { return degrees_.size(); }
    int degree(std::size_t i) const { return degrees_[i]; }
    const std::string& label(std::size_t i) const { return labels_[i]; }
    std::size_t unit_index() const { return unit_; }
    int top_degree() const { return top_; }

    RingElt zero() const { return RingElt(rank(), Rat(0)); }
    RingElt basis(std::size_t i) const;
    RingElt one() const { return basis(unit_); }
    std::vector<std::size_t> basis_of_degree(int d) const;

    bool is_zero(const RingElt& x) const;
    RingElt add(const RingElt& x, const RingElt& y) const;
    RingElt scale(const Rat& c, const RingElt& x) const;
    RingElt multiply(const RingElt& x, const RingElt& y) const;

    // Degree when homogeneous and nonzero, -1 otherwise.
    int homogeneous_degree(const RingElt& x) const;

    std::string describe(const RingElt& x) const;

private:
    std::vector<std::string> labels_;
    std::vector<int> degrees_;
    std::size_t unit_;
    std::vector<std::vector<RingElt>> table_;
    int top_ = 0;
};

// Degree preserving linear map, unital and multiplicative on basis pairs;
// verified by ring_hom. Endpoints are borrowed, not owned.
struct RingHom {
    const GradedRing* src = nullptr;
    const GradedRing* tgt = nullptr;
    QMatrix m;  // rank(tgt) x rank(src)

    RingElt apply(const RingElt& x) const;
};

RingHom ring_hom(const GradedRing& src, const GradedRing& tgt, QMatrix m);

// Kuenneth product ring: basis pairs with the sign rule
// (a (x) b)(c (x) d) = (-1)^{|b||c|} ac (x) bd. Labels are joined with a dot.
GradedRing tensor_ring(const GradedRing& r1, const GradedRing& r2);

// Tensor square of one ring with the two inclusions and the multiplication
// map down to it. The square itself is held alive by the homs through a
// shared handle, so the result can be moved around freely; the factor ring is
// still borrowed.
struct TensorSquare {
    std::shared_ptr<const GradedRing> ring;
    RingHom incl1, incl2, mu;
    std::size_t factor_rank = 0;

    std::size_t index(std::size_t i, std::size_t j) const { return i * factor_rank + j; }
};

TensorSquare tensor_square(const GradedRing& r);

// Ideal given by homogeneous generators; the cup length searches walk
// products of the generators, which decides nonvanishing of every power of
// the ideal.
struct Ideal {
    const GradedRing* ring = nullptr;
    std::vector<RingElt> gens;
};

// Degreewise nullspace of the hom, as homogeneous generators.
Ideal kernel(const RingHom& phi);

// Ideal of all positive degree elements.
Ideal augmentation_ideal(const GradedRing& r);

// Largest k <= cap with a nonzero product of k generators; 0 for the zero
// ideal. Products are pruned above the top degree of the ring.
int ideal_cuplength(const Ideal& ideal, int cap);

// Lower bounds for the sectional invariants: cup length of the augmentation
// ideal for cat, of the kernel for the sectional category of a map inducing
// phi, and of the zero divisor ideal for complexity.
int cat_lower(const GradedRing& r, int cap);
int secat_lower(const RingHom& phi, int cap);
int compl_lower(const GradedRing& r, int cap);

// Stock presentations: sphere(n), cp(n), product(name, name).
GradedRing builtin_ring(const std::string& name);

}  // namespace secat
