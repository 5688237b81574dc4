#include "fedkm/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fedkm {

void PointSet::validate() const {
    if (n < 1 || d < 1)
        throw std::invalid_argument("PointSet: n and d must be >= 1");
    if (values.size() != static_cast<std::size_t>(n) * d)
        throw std::invalid_argument("PointSet: values size does not match n*d");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("PointSet: non-finite value");
    if (!labels.empty() && labels.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("PointSet: labels length must equal n");
}

void ClusterSet::validate(bool allow_empty) const {
    if (k < (allow_empty ? 0 : 1))
        throw std::invalid_argument("ClusterSet: k must be >= 1");
    if (d < 1 && k > 0)
        throw std::invalid_argument("ClusterSet: d must be >= 1");
    if (means.size() != static_cast<std::size_t>(k) * d)
        throw std::invalid_argument("ClusterSet: means size does not match k*d");
    if (counts.size() != static_cast<std::size_t>(k))
        throw std::invalid_argument("ClusterSet: counts length must equal k");
    for (double v : means)
        if (!std::isfinite(v))
            throw std::invalid_argument("ClusterSet: non-finite mean");
    for (std::int64_t c : counts)
        if (c < 0)
            throw std::invalid_argument("ClusterSet: negative count");
}

} // namespace fedkm
