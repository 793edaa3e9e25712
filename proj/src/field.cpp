#include "ob/field.hpp"

#include <cassert>

namespace ob {

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    assert(rank() == o.rank() && modes() == o.modes());
    for (int c = 0; c < rank(); ++c)
        for (std::size_t i = 0; i < comps_[c].size(); ++i) comps_[c][i] += o.comps_[c][i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    assert(rank() == o.rank() && modes() == o.modes());
    for (int c = 0; c < rank(); ++c)
        for (std::size_t i = 0; i < comps_[c].size(); ++i) comps_[c][i] -= o.comps_[c][i];
    return *this;
}

SpectralField& SpectralField::operator*=(double a) {
    for (auto& comp : comps_)
        for (auto& v : comp) v *= a;
    return *this;
}

void SpectralField::set_zero() {
    for (auto& comp : comps_)
        for (auto& v : comp) v = cplx(0.0, 0.0);
}

SpectralField SpectralField::component(int c) const {
    SpectralField f(grid_, 1);
    f.comp(0) = comps_[c];
    return f;
}

SpectralField SpectralField::stack(const std::vector<const SpectralField*>& parts) {
    assert(!parts.empty());
    int rank = 0;
    for (const auto* p : parts) rank += p->rank();
    SpectralField out(parts[0]->grid(), rank);
    int c = 0;
    for (const auto* p : parts)
        for (int pc = 0; pc < p->rank(); ++pc) out.comp(c++) = p->comp(pc);
    return out;
}

}  // namespace ob
