#pragma once

// The constructive theorems: Hilbert 90 solving via the Speiser resolvent,
// the length-lifting lemma, the X/Y/Z assembly of J, the multiplicity
// formulas from the measured arithmetic invariants, and the extremal-case
// predicates. Everything emits machine-checkable evidence; the Jordan
// decomposition of the sigma matrix is the independent oracle throughout.

#include <optional>
#include <string>
#include <vector>

#include "pclass/gmodule.hpp"
#include "pclass/invariants.hpp"
#include "pclass/quadratic.hpp"
#include "pclass/tower.hpp"

namespace pclass::structure {

using gmodule::CyclicSummand;
using gmodule::MultiplicityVector;
using tower::ClassVector;
using tower::FieldElem;
using tower::JPresentation;
using tower::TowerContext;

enum class Tri { yes, no, undecided };
const char* tri_name(Tri t);

struct DecompositionCertificate {
    std::optional<CyclicSummand> x_part;
    std::vector<CyclicSummand> y_parts;
    std::vector<CyclicSummand> z_parts;
    bool verified = false;
    std::size_t stacked_rank = 0;
    std::size_t total_length = 0;

    std::vector<CyclicSummand> all_parts() const;
    MultiplicityVector multiplicities(unsigned p) const;
};

// omega with sigma(omega)/omega = alpha, for alpha of norm 1
FieldElem hilbert90_solve(const TowerContext& ctx, const FieldElem& alpha);

struct NormDecomposition {
    unsigned s = 0;
    FieldElem f;
};

// c in F^x ∩ K^{x p} written as a^s f^p with s in [0, p)
NormDecomposition decompose_norm_in_aF(const TowerContext& ctx, const FieldElem& c);

// 1 iff the class of zeta_p lies in the norm-class image (certified data)
int measure_upsilon(const TowerContext& ctx, const JPresentation& pres);

struct Lemma1Result {
    ClassVector alpha;
    int t = 0; // the adjusting exponent: <N([alpha])> = (M_{a^{t/p} gamma})^G
};

Lemma1Result lemma1_lift(const TowerContext& ctx, const JPresentation& pres,
                         const ClassVector& gamma);

struct XPart {
    std::optional<CyclicSummand> part;
    int upsilon = 0;
    std::optional<fplin::FpVector> delta_class;      // J-coords of [delta] (Upsilon = 1)
    std::optional<fplin::FpVector> norm_delta_class; // F-coords of [N(delta)]
};

XPart build_X(const TowerContext& ctx, const JPresentation& pres);
std::vector<CyclicSummand> build_Y(const TowerContext& ctx, const JPresentation& pres);
std::vector<CyclicSummand> build_Z(const TowerContext& ctx, const JPresentation& pres,
                                   const XPart& x, const std::vector<CyclicSummand>& y);

DecompositionCertificate decompose_arithmetic(const TowerContext& ctx, const JPresentation& pres);

// multiplicities from the measured invariants
MultiplicityVector theorem3_profile(const InvariantProfile& inv);

struct Corollary1Result {
    Tri freeness = Tri::undecided;
    Tri no_free_summand = Tri::undecided;
    Tri g_invariant = Tri::undecided;
    Tri p_rigid = Tri::undecided;
    std::string freeness_note;
    std::string summand_note;
    std::string upsilon_note;
};

Corollary1Result corollary1_checks(const TowerContext& ctx, const JPresentation& pres,
                                   const InvariantProfile& inv);
Corollary1Result corollary1_checks_quadratic(long long a);

bool isomorphism_test(const InvariantProfile& a, const InvariantProfile& b);

struct ExactSequenceReport {
    bool a_nontrivial = false;        // [a] != 1 in F^x/F^{x p}
    bool kernel_eps_is_a = false;     // ker(eps) = <[a]>
    bool image_eps_is_ker_n = false;  // im(eps) = ker(N | J_1)
    bool norms_land_in_a = false;     // N(J_1) ⊆ <[a]>
    bool surjectivity_matches = false; // N surjective onto <[a]> iff Upsilon = 1
    std::size_t classes_enumerated = 0;

    bool pass() const {
        return a_nontrivial && kernel_eps_is_a && image_eps_is_ker_n && norms_land_in_a &&
               surjectivity_matches;
    }
};

ExactSequenceReport exact_sequence_check(const TowerContext& ctx, const JPresentation& pres);

// J_1 = eps(F^x) when Upsilon = 0; dim J_1 = dim eps(F^x) + 1 when Upsilon = 1
bool lemma2_check(const TowerContext& ctx, const JPresentation& pres);

// the inductive spanning argument, layer by layer: J_i ⊆ span(parts)
bool socle_induction_check(const gmodule::GModule& m, const std::vector<CyclicSummand>& parts);

} // namespace pclass::structure
