#pragma once

#include <array>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace phylotoric {

// Element of a product of cyclic groups: one residue per factor, always reduced.
struct GroupElement {
    std::vector<int> residues;

    friend bool operator==(const GroupElement&, const GroupElement&) = default;
    friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
};

/**
 * Finite abelian group presented as Z_{n_1} x ... x Z_{n_k}, n_i >= 2.
 *
 * The element order used everywhere (coordinate blocks, enumeration,
 * serialization) is lexicographic on residue tuples, so the neutral element
 * always comes first and indices are mixed-radix ranks.
 */
class AbelianGroup {
public:
    explicit AbelianGroup(std::vector<int> orders) : orders_(std::move(orders)) {
        if (orders_.empty())
            throw std::invalid_argument("abelian group: factor list is empty");
        for (int n : orders_)
            if (n < 2)
                throw std::invalid_argument("abelian group: factor order " + std::to_string(n) +
                                            " is below 2");
    }

    // Text form is comma-separated factor orders, e.g. "2,2" or "3".
    static AbelianGroup parse(const std::string& text) {
        if (!text.empty() && text.back() == ',')
            throw std::invalid_argument("abelian group: trailing ',' in factor list");
        std::vector<int> orders;
        std::string token;
        std::istringstream in(text);
        while (std::getline(in, token, ',')) {
            std::size_t pos = 0;
            int value = 0;
            try {
                value = std::stoi(token, &pos);
            } catch (const std::exception&) {
                throw std::invalid_argument("abelian group: bad factor token '" + token + "'");
            }
            if (pos != token.size())
                throw std::invalid_argument("abelian group: bad factor token '" + token + "'");
            if (value < 2)
                throw std::invalid_argument("abelian group: factor order " +
                                            std::to_string(value) + " is below 2");
            orders.push_back(value);
        }
        if (orders.empty())
            throw std::invalid_argument("abelian group: factor list is empty");
        return AbelianGroup(std::move(orders));
    }

    std::string text() const {
        std::string out;
        for (std::size_t i = 0; i < orders_.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(orders_[i]);
        }
        return out;
    }

    int factor_count() const { return static_cast<int>(orders_.size()); }
    const std::vector<int>& orders() const { return orders_; }

    std::int64_t order() const {
        std::int64_t n = 1;
        for (int o : orders_) n *= o;
        return n;
    }

    GroupElement neutral() const { return GroupElement{std::vector<int>(orders_.size(), 0)}; }

    bool valid(const GroupElement& e) const {
        if (e.residues.size() != orders_.size()) return false;
        for (std::size_t i = 0; i < orders_.size(); ++i)
            if (e.residues[i] < 0 || e.residues[i] >= orders_[i]) return false;
        return true;
    }

    void require(const GroupElement& e) const {
        if (!valid(e))
            throw std::invalid_argument("group element does not belong to Z_" + text());
    }

    // a + b or a - b, componentwise mod factor orders; sign must be +1 or -1.
    GroupElement combine(const GroupElement& a, const GroupElement& b, int sign = 1) const {
        require(a);
        require(b);
        if (sign != 1 && sign != -1)
            throw std::invalid_argument("combine: sign must be +1 or -1");
        GroupElement out = a;
        for (std::size_t i = 0; i < orders_.size(); ++i) {
            int r = (out.residues[i] + sign * b.residues[i]) % orders_[i];
            if (r < 0) r += orders_[i];
            out.residues[i] = r;
        }
        return out;
    }

    GroupElement negate(const GroupElement& a) const { return combine(neutral(), a, -1); }

    // Mixed-radix rank of an element; first factor is most significant, so the
    // rank order coincides with lexicographic order on residue tuples.
    std::int64_t index_of(const GroupElement& e) const {
        require(e);
        std::int64_t idx = 0;
        for (std::size_t i = 0; i < orders_.size(); ++i) idx = idx * orders_[i] + e.residues[i];
        return idx;
    }

    GroupElement element_at(std::int64_t index) const {
        if (index < 0 || index >= order())
            throw std::invalid_argument("element index out of range");
        GroupElement e{std::vector<int>(orders_.size(), 0)};
        for (std::size_t i = orders_.size(); i-- > 0;) {
            e.residues[i] = static_cast<int>(index % orders_[i]);
            index /= orders_[i];
        }
        return e;
    }

    std::vector<GroupElement> elements() const {
        std::vector<GroupElement> out;
        out.reserve(static_cast<std::size_t>(order()));
        for (std::int64_t i = 0; i < order(); ++i) out.push_back(element_at(i));
        return out;
    }

    friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;

private:
    std::vector<int> orders_;
};

inline std::string element_text(const GroupElement& e) {
    std::string out;
    for (std::size_t i = 0; i < e.residues.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(e.residues[i]);
    }
    return out;
}

inline GroupElement element_from_text(const AbelianGroup& g, const std::string& text) {
    GroupElement e;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        std::size_t pos = 0;
        int value = 0;
        try {
            value = std::stoi(token, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("group element: bad residue token '" + token + "'");
        }
        if (pos != token.size())
            throw std::invalid_argument("group element: bad residue token '" + token + "'");
        e.residues.push_back(value);
    }
    g.require(e);
    return e;
}

/**
 * Morphism between finite abelian groups, stored as the image of each cyclic
 * generator of the domain.  Well-definedness (factor order annihilates the
 * image) is validated at construction.
 */
class GroupMorphism {
public:
    GroupMorphism(AbelianGroup domain, AbelianGroup codomain, std::vector<GroupElement> images)
        : domain_(std::move(domain)), codomain_(std::move(codomain)), images_(std::move(images)) {
        if (static_cast<int>(images_.size()) != domain_.factor_count())
            throw std::invalid_argument("morphism: need one generator image per domain factor");
        for (std::size_t i = 0; i < images_.size(); ++i) {
            codomain_.require(images_[i]);
            int n = domain_.orders()[i];
            for (std::size_t j = 0; j < images_[i].residues.size(); ++j)
                if ((static_cast<std::int64_t>(n) * images_[i].residues[j]) %
                        codomain_.orders()[j] !=
                    0)
                    throw std::invalid_argument(
                        "morphism: image of generator " + std::to_string(i) +
                        " is not annihilated by the factor order " + std::to_string(n));
        }
    }

    const AbelianGroup& domain() const { return domain_; }
    const AbelianGroup& codomain() const { return codomain_; }
    const std::vector<GroupElement>& generator_images() const { return images_; }

    GroupElement apply(const GroupElement& e) const {
        domain_.require(e);
        GroupElement out = codomain_.neutral();
        for (std::size_t i = 0; i < images_.size(); ++i)
            for (int rep = 0; rep < e.residues[i]; ++rep) out = codomain_.combine(out, images_[i]);
        return out;
    }

private:
    AbelianGroup domain_;
    AbelianGroup codomain_;
    std::vector<GroupElement> images_;
};

// The three surjections Z2 x Z2 -> Z2: (a,b) |-> a, (a,b) |-> b, (a,b) |-> a+b.
// Their product separates the elements of Z2 x Z2.
inline std::array<GroupMorphism, 3> kimura_projections() {
    AbelianGroup four({2, 2}), two({2});
    auto e = [](int r) { return GroupElement{{r}}; };
    return {GroupMorphism(four, two, {e(1), e(0)}), GroupMorphism(four, two, {e(0), e(1)}),
            GroupMorphism(four, two, {e(1), e(1)})};
}

// All morphisms domain -> codomain, ordered lexicographically by the tuple of
// generator-image indices.
inline std::vector<GroupMorphism> enumerate_morphisms(const AbelianGroup& domain,
                                                      const AbelianGroup& codomain) {
    std::vector<GroupMorphism> out;
    int k = domain.factor_count();
    std::vector<std::int64_t> pick(k, 0);
    for (;;) {
        std::vector<GroupElement> images;
        images.reserve(k);
        for (int i = 0; i < k; ++i) images.push_back(codomain.element_at(pick[i]));
        bool ok = true;
        for (int i = 0; i < k && ok; ++i) {
            int n = domain.orders()[i];
            for (std::size_t j = 0; j < images[i].residues.size(); ++j)
                if ((static_cast<std::int64_t>(n) * images[i].residues[j]) %
                        codomain.orders()[j] !=
                    0) {
                    ok = false;
                    break;
                }
        }
        if (ok) out.emplace_back(domain, codomain, images);
        int i = k - 1;
        while (i >= 0 && pick[i] + 1 == codomain.order()) pick[i--] = 0;
        if (i < 0) break;
        ++pick[i];
    }
    return out;
}

}  // namespace phylotoric
