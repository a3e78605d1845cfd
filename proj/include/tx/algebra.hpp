#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tx/linalg.hpp"

namespace tx {

// A path in a quiver: a start vertex followed by arrows, composed left to right
// ("ab" means a then b). An empty arrow list is the trivial path at the vertex.
struct Path {
    int vertex = 0;
    std::vector<int> arrows;
    friend bool operator==(const Path& a, const Path& b) { return a.vertex == b.vertex && a.arrows == b.arrows; }
};

struct QuiverPresentation {
    struct Arrow {
        std::string name;
        int src = 0, tgt = 0;
    };
    using Term = std::pair<Scalar, Path>;
    using Relation = std::vector<Term>;

    int vertices = 1;
    std::vector<Arrow> arrows;
    std::vector<Relation> relations;
    int nilpotency = 0;  // paths of length >= nilpotency vanish; 0 = no bound given

    int arrow_index(const std::string& name) const;
    int path_source(const Path& p) const { return p.vertex; }
    int path_target(const Path& p) const;
    std::string path_name(const Path& p) const;
    // "2*x x - 1/3*a b + e0"; juxtaposed arrow names, "x^3" repeats an arrow.
    std::vector<Term> parse_expression(const std::string& text) const;
};

struct Idempotent;
struct IdempotentQuotient;

class Algebra {
public:
    int dim() const { return n_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const Vec& unit() const { return unit_; }
    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    const Vec& vertex(int v) const { return vertices_[v]; }
    const std::optional<QuiverPresentation>& quiver() const { return quiver_; }
    // basis paths when compiled from a quiver
    const std::vector<Path>& basis_paths() const { return paths_; }

    const SparseVec& product(int i, int j) const { return mult_[static_cast<size_t>(i) * n_ + j]; }
    Vec mul(const Vec& a, const Vec& b) const;
    Vec basis(int i) const { return unit_vec(n_, i); }
    Mat left_mult(const Vec& a) const;   // column j = a * b_j
    Mat right_mult(const Vec& a) const;  // column j = b_j * a

    // e_a A, e_b A e_a as echelon subspaces
    const Subspace& right_ideal(int a) const { return right_ideals_[a]; }
    const Subspace& peirce(int b, int a) const { return peirce_[static_cast<size_t>(b) * vertices_.size() + a]; }

    // Jacobson radical (verified nilpotent two-sided ideal with A/J split basic)
    const Subspace& radical() const;
    // coordinate functional along vertex v modulo the radical
    Vec vertex_character(int v) const;

    bool is_zero_ring() const { return n_ == 0; }

    // Builders. Both verify associativity and the unit axiom.
    static Algebra from_structure_constants(std::vector<std::string> labels, std::vector<std::vector<Vec>> products,
                                            Vec unit, std::vector<Vec> vertices = {});
    static Algebra from_quiver(const QuiverPresentation& q);

    // element of a quiver algebra from an expression or a path
    Vec element(const std::string& expr) const;
    Vec path_element(const Path& p) const;
    std::string element_str(const Vec& v) const;

    void check_axioms() const;

private:
    void finish();

    int n_ = 0;
    std::vector<std::string> labels_;
    std::vector<SparseVec> mult_;
    Vec unit_;
    std::vector<Vec> vertices_;
    std::optional<QuiverPresentation> quiver_;
    std::vector<Path> paths_;
    // normal-form data for quiver algebras: all paths below the bound, reduction rows
    int path_bound_ = 0;
    std::vector<Path> all_paths_;
    std::map<std::pair<int, std::vector<int>>, int> path_index_;
    Subspace ideal_;
    std::vector<int> basis_path_index_;
    std::vector<Subspace> right_ideals_;
    std::vector<Subspace> peirce_;
    mutable std::optional<Subspace> radical_;

    friend IdempotentQuotient quotient_by_idempotent(const std::shared_ptr<const Algebra>& a, const Idempotent& e);
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

// Right module given by action matrices in the row-vector convention:
// v . b = v * rho[b], so rho[a] * rho[b] = rho[ab].
struct RightModule {
    AlgebraPtr algebra;
    int dim = 0;
    std::vector<Mat> rho;

    // m . a for a column-coordinate vector m and algebra element a
    Vec act(const Vec& m, const Vec& a) const;
    Vec act_basis(const Vec& m, int b) const;
    void check() const;  // throws NotModule

    static RightModule regular_projective(AlgebraPtr a, int vertex);  // e_v A
    static RightModule from_subspace(const RightModule& ambient, const Subspace& sub);  // basis = sub.basis()
    static RightModule quotient(const RightModule& ambient, const Subspace& sub, Mat* projection = nullptr);
    static RightModule direct_sum(const std::vector<RightModule>& parts);
    static RightModule zero(AlgebraPtr a);
};

// Module maps X -> Y given as dim Y x dim X matrices.
std::vector<Mat> hom_basis(const RightModule& x, const RightModule& y);
bool is_module_map(const RightModule& x, const RightModule& y, const Mat& f);

struct Idempotent {
    Vec coords;
};

struct IdempotentQuotient {
    std::shared_ptr<Algebra> quotient;
    Mat projection;                // dim(Acon) x dim(A)
    std::vector<int> vertex_map;   // A-vertex -> Acon-vertex, -1 when killed
    bool degenerate = false;       // e = 1: quotient is the zero ring
    Subspace ideal;                // AeA inside A
    Vec project(const Vec& a) const { return projection.apply(a); }
};

IdempotentQuotient quotient_by_idempotent(const AlgebraPtr& a, const Idempotent& e);
Idempotent vertex_idempotent(const Algebra& a, const std::vector<int>& vertices);

// i* on projective modules given by their vertex labels
std::vector<int> restrict_scalars(const IdempotentQuotient& q, const std::vector<int>& summands);
// i* on a module: only for projective modules; throws NotProjective otherwise
RightModule restrict_scalars(const IdempotentQuotient& q, const RightModule& m);

// one simple per vertex, in vertex order; throws NotBasic
std::vector<RightModule> simple_modules(const AlgebraPtr& a);

}  // namespace tx
